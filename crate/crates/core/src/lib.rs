//! Exact graded homological algebra: DG Lie algebras, Weil and
//! Chevalley–Eilenberg algebras, L∞ morphisms, basic g-L∞ spaces,
//! representations up to homotopy and A∞ coherence checks.

pub mod complex;
pub mod dgcat;
pub mod dgla;
pub mod error;
pub mod graded;
pub mod infloc;
pub mod lie;
pub mod linalg;
pub mod linfty;
pub mod par;
pub mod repinf;
pub mod scalar;
pub mod sign;
pub mod spectral;
pub mod weil;

pub use error::{Error, Result};
pub use scalar::Q;
