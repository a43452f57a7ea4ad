//! Every sign convention in the crate lives here.
//!
//! Koszul signs, shuffles, and the exponent formulas of the Hochschild
//! differential, the A∞ relations and the representation-up-to-homotopy
//! calculus. Each formula is a small function so it can be tested on its own.

use crate::error::{input, Result};

fn parity(n: i64) -> bool {
    n.rem_euclid(2) == 1
}

/// `±1` as an integer.
pub fn pm(e: i64) -> i64 {
    if parity(e) {
        -1
    } else {
        1
    }
}

/// Koszul sign `ε(σ; v_1..v_n)` defined by
/// `v_{σ(1)} ⊙ ⋯ ⊙ v_{σ(n)} = ε · v_1 ⊙ ⋯ ⊙ v_n`.
///
/// `perm[k] = σ(k+1) − 1` (zero based). The sign is the product of
/// `(−1)^{|u||v|}` over the inversions of the rearranged sequence.
pub fn koszul_sign(perm: &[usize], degrees: &[i64]) -> Result<i64> {
    let n = perm.len();
    if n != degrees.len() {
        return input(format!("permutation of length {n} with {} degrees", degrees.len()));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return input("not a permutation");
        }
        seen[p] = true;
    }
    Ok(koszul_sign_unchecked(perm, degrees))
}

pub(crate) fn koszul_sign_unchecked(perm: &[usize], degrees: &[i64]) -> i64 {
    let mut odd = 0i64;
    for a in 0..perm.len() {
        for b in a + 1..perm.len() {
            if perm[a] > perm[b] {
                odd += degrees[perm[a]] * degrees[perm[b]];
            }
        }
    }
    pm(odd)
}

/// All `(i_1, …, i_d)`-shuffles: permutations that are increasing on each
/// consecutive block of positions. Returned zero based, lexicographic in the
/// choice of values for each block.
pub fn shuffles(blocks: &[usize]) -> Vec<Vec<usize>> {
    let n: usize = blocks.iter().sum();
    let mut out = Vec::new();
    let mut perm = vec![0usize; n];
    let mut used = vec![false; n];
    fn rec(
        blocks: &[usize],
        b: usize,
        start: usize,
        k: usize,
        min_val: usize,
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if b == blocks.len() {
            out.push(perm.clone());
            return;
        }
        if k == blocks[b] {
            rec(blocks, b + 1, start + blocks[b], 0, 0, perm, used, out);
            return;
        }
        for v in min_val..used.len() {
            if used[v] {
                continue;
            }
            used[v] = true;
            perm[start + k] = v;
            rec(blocks, b, start, k + 1, v + 1, perm, used, out);
            used[v] = false;
        }
    }
    rec(blocks, 0, 0, 0, 0, &mut perm, &mut used, &mut out);
    out
}

/// Sort a word of graded letters, returning the Koszul sign of the sort, or
/// `None` when an odd letter repeats (the word vanishes in the symmetric algebra).
pub fn koszul_sort(word: &mut [(usize, i64)]) -> Option<i64> {
    let mut odd = 0i64;
    // insertion sort counting inversions; words are short
    for i in 1..word.len() {
        let mut j = i;
        while j > 0 && word[j - 1].0 > word[j].0 {
            odd += word[j - 1].1 * word[j].1;
            word.swap(j - 1, j);
            j -= 1;
        }
    }
    for w in word.windows(2) {
        if w[0].0 == w[1].0 && parity(w[0].1) {
            return None;
        }
    }
    Some(pm(odd))
}

/// Sign of moving the letter at position `i` to the front: `ε(σ_i; v)`.
pub fn move_to_front(degrees: &[i64], i: usize) -> i64 {
    let before: i64 = degrees[..i].iter().sum();
    pm(degrees[i] * before)
}

/// Sign of moving letters `i < j` to the front (in that order): `ε(σ_ij; v)`.
pub fn move_pair_to_front(degrees: &[i64], i: usize, j: usize) -> i64 {
    let before_i: i64 = degrees[..i].iter().sum();
    let between: i64 = degrees[i + 1..j].iter().sum();
    pm(degrees[i] * before_i + degrees[j] * (before_i + between))
}

// ---------------------------------------------------------------------------
// Hochschild complex of a DG category.
//
// Words are `f_{n−1} ⊗ ⋯ ⊗ f_0` of suspended morphisms. In all exponent
// formulas `h[j]` is the degree of `f_j` as a morphism (the unsuspended
// degree); the suspended degree is `h[j] − 1`.
// ---------------------------------------------------------------------------

/// Exponent of the `b_1` term acting on `f_i`:
/// `Σ_{j=i+1}^{n−1} |f_j| + n − i − 1`.
pub fn hochschild_b1_exponent(h: &[i64], i: usize) -> i64 {
    let n = h.len();
    h[i + 1..].iter().sum::<i64>() + (n - i - 1) as i64
}

/// Exponent of the `b_2` term composing `f_{i+1} ∘ f_i`:
/// `Σ_{j=i+2}^{n−1} |f_j| + n − i`.
pub fn hochschild_b2_exponent(h: &[i64], i: usize) -> i64 {
    let n = h.len();
    h[i + 2..].iter().sum::<i64>() + (n - i) as i64
}

/// Differential on `↓Hom`: `d(↓f) = −↓(df)`.
pub fn suspended_differential_exponent() -> i64 {
    1
}

/// Composition on `↓Hom`: `m(↓g ⊗ ↓f) = (−1)^{|g|} ↓(g ∘ f)`, with `hg = |g|`
/// unsuspended. Together with [`suspended_differential_exponent`] this is
/// the convention under which the `b_1`, `b_2` exponents give `b² = 0` and
/// the A∞-naturality relation is consistent.
pub fn suspended_composition_exponent(hg: i64) -> i64 {
    hg
}

/// Exponent in the A∞-natural transformation relation:
/// `Σ_{i=1}^{n−1} |f_i| − n + 1`.
pub fn nat_exponent(h: &[i64]) -> i64 {
    let n = h.len() as i64;
    h[1..].iter().sum::<i64>() - n + 1
}

// ---------------------------------------------------------------------------
// Representations up to homotopy.
// ---------------------------------------------------------------------------

/// `(φ' ∘ φ)_p = Σ (−1)^{n(p−i)} φ'_{p−i} ∪ φ_i`
pub fn rep_compose_exponent(n: i64, p: i64, i: i64) -> i64 {
    n * (p - i)
}

/// First sum of `∂φ`: `(−1)^{n(p−i)} F'_{p−i} ∪ φ_i`.
pub fn rep_diff_left_exponent(n: i64, p: i64, i: i64) -> i64 {
    n * (p - i)
}

/// Second sum of `∂φ`: `(−1)^{n+p−i+1} φ_{p−i} ∪ F_i`.
pub fn rep_diff_right_exponent(n: i64, p: i64, i: i64) -> i64 {
    n + p - i + 1
}

/// Third sum of `∂φ`: `(−1)^{i+n} φ_{p−1}(d_i x)`.
pub fn rep_diff_face_exponent(n: i64, i: i64) -> i64 {
    i + n
}
