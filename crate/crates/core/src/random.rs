//! Seeded generators for test lattices and matrices.
//!
//! Everything draws from a `ChaCha8Rng`, so a seed fixes the output on every
//! platform.

use std::sync::Arc;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::groups::{FiniteGroup, Subgroup};
use crate::lattices::{permutation_lattice, GLattice};
use crate::zlinalg::{column_hermite, kernel_echelon, IntMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    IntMatrix::from_fn(rows, cols, |_, _| BigInt::from(rng.gen_range(-bound..=bound)))
}

/// A unimodular matrix and its inverse, built from `steps` elementary
/// operations and a signed permutation.
pub fn random_unimodular(rng: &mut impl Rng, n: usize, steps: usize) -> (IntMatrix, IntMatrix) {
    let mut u = IntMatrix::identity(n);
    let mut u_inv = IntMatrix::identity(n);
    if n == 0 {
        return (u, u_inv);
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i == j {
            continue;
        }
        let c: i64 = *[-2, -1, 1, 2].choose(rng).expect("nonempty");
        // U ← U·E with E = 1 + c·e_ij, and U⁻¹ ← E⁻¹·U⁻¹
        let mut e = IntMatrix::identity(n);
        e.set(i, j, BigInt::from(c));
        let mut e_inv = IntMatrix::identity(n);
        e_inv.set(i, j, BigInt::from(-c));
        u = &u * &e;
        u_inv = &e_inv * &u_inv;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let p = IntMatrix::permutation(&perm);
    let mut s = IntMatrix::identity(n);
    for i in 0..n {
        if rng.gen_bool(0.5) {
            s.set(i, i, BigInt::from(-1));
        }
    }
    // (U·P·S)⁻¹ = S·Pᵀ·U⁻¹
    let m = &(&u * &p) * &s;
    let m_inv = &(&s * &p.transpose()) * &u_inv;
    (m, m_inv)
}

/// `Z[G/H_1] ⊕ ... ⊕ Z[G/H_k]` with `1 ≤ k ≤ max_summands` random
/// subgroups, keeping the rank at most `max_rank` (at least one summand
/// `Z[G/G]` always fits).
pub fn random_permutation_lattice(
    rng: &mut impl Rng,
    g: &Arc<FiniteGroup>,
    max_summands: usize,
    max_rank: usize,
) -> Result<GLattice> {
    let subs = g.subgroups()?;
    let k = rng.gen_range(1..=max_summands.max(1));
    let mut chosen: Vec<Subgroup> = Vec::with_capacity(k);
    let mut rank = 0;
    for _ in 0..k {
        let fitting: Vec<&Subgroup> = subs.iter().filter(|s| rank + g.order() / s.order() <= max_rank).collect();
        let Some(s) = fitting.choose(rng) else { break };
        rank += g.order() / s.order();
        chosen.push((*s).clone());
    }
    if chosen.is_empty() {
        chosen.push(g.whole());
    }
    permutation_lattice(g.clone(), &chosen)
}

/// Kernel of the augmentation `Z[G/H] → Z`.
pub fn augmentation_kernel(g: &Arc<FiniteGroup>, h: &Subgroup) -> Result<GLattice> {
    let p = permutation_lattice(g.clone(), std::slice::from_ref(h))?;
    let ones = IntMatrix::from_fn(1, p.rank(), |_, _| BigInt::from(1));
    p.induced_on(&kernel_echelon(&ones))
}

/// One indecomposable-looking building block of rank at most `max_rank`.
fn random_block(rng: &mut impl Rng, g: &Arc<FiniteGroup>, max_rank: usize) -> Result<Option<GLattice>> {
    let subs = g.subgroups()?;
    let index2: Vec<&Subgroup> = subs.iter().filter(|s| s.order() * 2 == g.order()).collect();
    for _ in 0..8 {
        let block = match rng.gen_range(0..5) {
            0 => GLattice::trivial(g.clone(), 1),
            1 => match index2.choose(rng) {
                Some(k) => GLattice::sign(g.clone(), k)?,
                None => continue,
            },
            kind => {
                let s = subs.choose(rng).expect("subgroups are nonempty");
                let idx = g.order() / s.order();
                match kind {
                    2 if idx <= max_rank => permutation_lattice(g.clone(), std::slice::from_ref(s))?,
                    3 if idx >= 2 && idx - 1 <= max_rank => augmentation_kernel(g, s)?,
                    4 if idx >= 2 && idx - 1 <= max_rank => augmentation_kernel(g, s)?.dual(),
                    _ => continue,
                }
            }
        };
        if block.rank() <= max_rank {
            return Ok(Some(block));
        }
    }
    Ok(None)
}

/// `p·L + Z[G]·v` for a random prime `p ∈ {2, 3}` and vector `v`: a
/// `G`-stable sublattice of finite index.
fn random_sublattice(rng: &mut impl Rng, m: &GLattice) -> Result<GLattice> {
    let r = m.rank();
    let p: i64 = *[2, 3].choose(rng).expect("nonempty");
    let v = random_matrix(rng, r, 1, 2);
    let mut gens = IntMatrix::identity(r);
    for i in 0..r {
        gens.set(i, i, BigInt::from(p));
    }
    let orbit: Vec<Vec<BigInt>> = m.matrices().iter().map(|a| (a * &v).column(0)).collect();
    gens = gens.hstack(&IntMatrix::from_columns(r, &orbit)?)?;
    m.induced_on(&column_hermite(&gens))
}

/// A random lattice of rank `1..=max_rank`: a direct sum of blocks (trivial,
/// sign characters, `Z[G/H]`, augmentation kernels and their duals), then
/// possibly a stable sublattice of finite index, then a random change of
/// basis.
pub fn random_lattice(rng: &mut impl Rng, g: &Arc<FiniteGroup>, max_rank: usize) -> Result<GLattice> {
    let max_rank = max_rank.max(1);
    let target = rng.gen_range(1..=max_rank);
    let mut parts: Vec<GLattice> = Vec::new();
    let mut rank = 0;
    while rank < target {
        match random_block(rng, g, target - rank)? {
            Some(b) => {
                rank += b.rank();
                parts.push(b);
            }
            None => {
                parts.push(GLattice::trivial(g.clone(), 1));
                rank += 1;
            }
        }
    }
    let mut m = GLattice::direct_sum_all(&parts)?;
    if rng.gen_bool(0.3) {
        m = random_sublattice(rng, &m)?;
    }
    let (u, u_inv) = random_unimodular(rng, m.rank(), 2 * m.rank());
    m.change_basis(&u, &u_inv)
}
