//! The lattice `I_q`, `q = 2^n`: the kernel of the degree map
//! `Φ: Z^{q-1} → Z/q`, `Φ(e_i) = i`, with `(Z/q)^x` permuting the basis by
//! `τ_t e_i = e_{ti mod q}`.

use std::sync::Arc;

use num_bigint::BigInt;

use super::{GLattice, LatticeMap};
use crate::error::{Error, Result};
use crate::groups::{unit_group_mod, FiniteGroup};
use crate::zlinalg::{column_hermite, kernel_basis, IntMatrix};

#[derive(Clone, Debug)]
pub struct LenstraData {
    pub q: u64,
    /// `(Z/q)^x`; element `k` is the residue `2k + 1`.
    pub pi: Arc<FiniteGroup>,
    /// Basis `e_1, ..., e_{q-1}` at positions `0..q-1`.
    pub n: GLattice,
    /// `phi[i - 1] = Φ(e_i) = i`.
    pub phi: Vec<u64>,
    pub m: GLattice,
    pub inclusion: LatticeMap,
}

impl LenstraData {
    /// The residue represented by element `k` of `pi`.
    pub fn residue(&self, k: usize) -> u64 {
        2 * k as u64 + 1
    }
}

pub fn lenstra_lattice(n: u32) -> Result<LenstraData> {
    if !(2..=6).contains(&n) {
        return Err(Error::invalid(format!("lenstra lattice needs 2 <= n <= 6, got {n}")));
    }
    let q = 1usize << n;
    let pi = Arc::new(unit_group_mod(q).with_name(format!("U{q}")));
    let residue = |k: usize| 2 * k + 1;
    let big_n = GLattice::from_element_fn(pi.clone(), q - 1, |k| {
        let t = residue(k);
        IntMatrix::permutation(&(1..q).map(|i| t * i % q - 1).collect::<Vec<_>>())
    })?;

    // {λ ∈ Z^{q-1} : Σ i·λ_i ≡ 0 mod q} is the projection of the kernel of
    // [1 2 ... q-1 | q] onto the first q-1 coordinates.
    let row: Vec<i64> = (1..=q as i64).collect();
    let ker = kernel_basis(&IntMatrix::from_rows(&[row]));
    let projected = ker.select_rows(&(0..q - 1).collect::<Vec<_>>());
    let basis = column_hermite(&projected);
    if basis.rank() != q - 1 {
        return Err(Error::internal("degree kernel has the wrong rank"));
    }
    let m = big_n.induced_on(&basis)?;
    let inclusion = LatticeMap::new(m.clone(), big_n.clone(), basis.basis.clone())?;
    Ok(LenstraData { q: q as u64, pi, n: big_n, phi: (1..q as u64).collect(), m, inclusion })
}

/// `Φ(λ) = Σ i·λ_i mod q`.
pub fn degree(data: &LenstraData, v: &[BigInt]) -> u64 {
    let s: BigInt = v.iter().zip(&data.phi).map(|(x, &i)| x * BigInt::from(i)).sum();
    let q = BigInt::from(data.q);
    let r = ((s % &q) + &q) % &q;
    u64::try_from(r).expect("residue fits")
}
