//! `weilkit`: verification suites and computations on JSON inputs.
//!
//! Exit codes: 0 when every check passes, 1 on a mathematical failure,
//! 2 on malformed input.

mod algebra;
mod dgcat;
mod io;
mod rep;
mod report;
mod spectral;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use report::Report;

#[derive(Debug, thiserror::Error)]
pub enum CmdError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Math(String),
}

impl From<weilkit::Error> for CmdError {
    fn from(e: weilkit::Error) -> Self {
        match e {
            weilkit::Error::Input(m) => CmdError::Input(m),
            weilkit::Error::Structural(m) | weilkit::Error::Verification(m) => CmdError::Math(m),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "weilkit",
    version,
    about = "Exact checks for Weil algebras, L∞ data, representations up to homotopy and A∞ coherence"
)]
struct Cli {
    /// Emit the report as JSON.
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,
    /// Emit the report as text (default).
    #[arg(long, global = true)]
    text: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// DGLA, Chevalley–Eilenberg, Weil and Cartan checks for a Lie algebra.
    Verify {
        algebra: PathBuf,
        #[arg(long, default_value_t = 3)]
        trunc: u32,
    },
    /// Invariant polynomials of degree k against basic Weil elements of degree 2k.
    Invariants {
        algebra: PathBuf,
        #[arg(long)]
        degree: u32,
        /// Weil truncation; defaults to max(degree, 3).
        #[arg(long)]
        trunc: Option<u32>,
    },
    /// Chern–Weil image of an invariant polynomial under a connection.
    ChernWeil {
        algebra: PathBuf,
        connection: PathBuf,
        /// `first`, `first^N` or `invariant:K:I`.
        #[arg(long, default_value = "first")]
        poly: String,
        #[arg(long, default_value_t = 3)]
        trunc: u32,
    },
    /// Simplicial identities, structure relation and DG category axioms for a representation.
    RepVerify {
        sset: PathBuf,
        rep: PathBuf,
        #[arg(long, default_value_t = 2)]
        pmax: usize,
    },
    /// Pages of the spectral sequence of a filtered complex.
    Spectral {
        input: PathBuf,
        #[arg(long, default_value_t = 3)]
        pages: usize,
    },
    /// DGLA axioms and the Maurer–Cartan equation for a given element.
    McCheck { dgla: PathBuf },
    /// The Gauss–Manin object and the cohomology of Hom(1, GM).
    GaussManin {
        algebra: PathBuf,
        #[arg(long, default_value_t = 3)]
        trunc: u32,
    },
    /// DG category axioms, b² = 0 and A∞ relations for a finite DG category.
    AinftyCheck {
        category: PathBuf,
        #[arg(long, default_value_t = 3)]
        nmax: usize,
    },
}

fn run(command: &Command, r: &mut Report) -> Result<(), CmdError> {
    match command {
        Command::Verify { algebra, trunc } => algebra::verify(r, algebra, *trunc),
        Command::Invariants { algebra, degree, trunc } => algebra::invariants(r, algebra, *degree, *trunc),
        Command::ChernWeil { algebra, connection, poly, trunc } => {
            algebra::chern_weil(r, algebra, connection, poly, *trunc)
        }
        Command::RepVerify { sset, rep, pmax } => rep::rep_verify(r, sset, rep, *pmax),
        Command::Spectral { input, pages } => spectral::spectral(r, input, *pages),
        Command::McCheck { dgla } => algebra::mc_check_cmd(r, dgla),
        Command::GaussManin { algebra, trunc } => algebra::gauss_manin_cmd(r, algebra, *trunc),
        Command::AinftyCheck { category, nmax } => dgcat::ainfty_check(r, category, *nmax),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut r = Report::new(std::env::args().skip(1).collect());
    match run(&cli.command, &mut r) {
        Ok(()) => {}
        Err(CmdError::Input(m)) => {
            eprintln!("error: {m}");
            return ExitCode::from(2);
        }
        Err(CmdError::Math(m)) => {
            r.check("input.structure", false, Some(m));
        }
    }
    if cli.json {
        println!("{}", r.to_json());
    } else {
        print!("{}", r.to_text());
    }
    if r.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
