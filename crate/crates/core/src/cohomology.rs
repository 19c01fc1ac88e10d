//! Tate cohomology in degrees −1, 0 and 1 of a G-lattice restricted to a
//! subgroup.
//!
//! In degree 1 ordinary and Tate cohomology agree. Cocycles are determined by
//! their values on the subgroup's generators, so H¹ is computed from a linear
//! system in `|generators|·rank` unknowns.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::groups::Subgroup;
use crate::lattices::GLattice;
use crate::zlinalg::{cokernel_invariants, kernel_echelon, AbelianInvariants, EchelonBasis, IntMatrix};

/// Which subgroups a profile ranges over.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubgroupMode {
    /// Subgroups of prime-power order. Restriction to Sylow subgroups is
    /// injective on Tate cohomology, so vanishing here implies vanishing
    /// everywhere.
    #[default]
    PrimePower,
    All,
}

fn check(h: &Subgroup, m: &GLattice) -> Result<()> {
    if h.parent_order() != m.group().order() || h.members().iter().any(|&x| x >= m.group().order()) {
        return Err(Error::invalid("subgroup does not belong to the lattice's group"));
    }
    Ok(())
}

/// `outer / colspan(inner)`, where `inner` must lie in `outer`.
fn relative_quotient(outer: &EchelonBasis, inner: &IntMatrix, what: &str) -> Result<AbelianInvariants> {
    let coords = outer.coordinate_matrix(inner)?;
    let inv = cokernel_invariants(&coords, outer.rank())?;
    if !inv.is_finite() {
        return Err(Error::internal(format!("{what} came out infinite")));
    }
    Ok(inv)
}

/// `Ĥ⁻¹(H, M) = Ker(N_H) / I_H·M`.
pub fn tate_minus1(h: &Subgroup, m: &GLattice) -> Result<AbelianInvariants> {
    check(h, m)?;
    if h.is_trivial() || m.rank() == 0 {
        return Ok(AbelianInvariants::trivial());
    }
    let r = m.rank();
    let kernel = kernel_echelon(&m.norm(h));
    if kernel.rank() == 0 {
        return Ok(AbelianInvariants::trivial());
    }
    let mut aug = IntMatrix::zeros(r, 0);
    for &s in h.generators() {
        aug = aug.hstack(&(m.matrix(s) - &IntMatrix::identity(r)))?;
    }
    relative_quotient(&kernel, &aug, "H^-1")
}

/// `Ĥ⁰(H, M) = M^H / N_H·M`.
pub fn tate_zero(h: &Subgroup, m: &GLattice) -> Result<AbelianInvariants> {
    check(h, m)?;
    if h.is_trivial() || m.rank() == 0 {
        return Ok(AbelianInvariants::trivial());
    }
    let fixed = m.fixed_sublattice(h);
    if fixed.rank() == 0 {
        return Ok(AbelianInvariants::trivial());
    }
    relative_quotient(&fixed, &m.norm(h), "H^0")
}

/// Linear constraints on the generator values `u = (d(s_1), ..., d(s_k))` of
/// a 1-cocycle, one block of rows per non-tree edge of the Cayley graph.
fn cocycle_constraints(h: &Subgroup, m: &GLattice) -> IntMatrix {
    let g = m.group();
    let r = m.rank();
    let gens = h.generators();
    let width = gens.len() * r;
    let mut slot = vec![usize::MAX; g.order()];
    // value[slot[x]] expresses d(x) as an r × width matrix in the unknowns
    let mut value: Vec<IntMatrix> = Vec::with_capacity(h.order());
    slot[0] = 0;
    value.push(IntMatrix::zeros(r, width));
    let mut rows: Vec<IntMatrix> = Vec::new();
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for (i, &s) in gens.iter().enumerate() {
            let y = g.mul(s, x);
            // d(s·x) = d(s) + s·d(x)
            let mut expr = m.matrix(s) * &value[slot[x]];
            for j in 0..r {
                let e = expr.get(j, i * r + j) + 1;
                expr.set(j, i * r + j, e);
            }
            if slot[y] == usize::MAX {
                slot[y] = value.len();
                value.push(expr);
                queue.push_back(y);
            } else {
                let diff = &value[slot[y]] - &expr;
                if !diff.is_zero() {
                    rows.push(diff);
                }
            }
        }
    }
    rows.into_iter().fold(IntMatrix::zeros(0, width), |acc, b| acc.vstack(&b).expect("same width"))
}

/// `H¹(H, M)`: crossed homomorphisms modulo principal ones.
pub fn h1(h: &Subgroup, m: &GLattice) -> Result<AbelianInvariants> {
    check(h, m)?;
    if h.is_trivial() || m.rank() == 0 {
        return Ok(AbelianInvariants::trivial());
    }
    let r = m.rank();
    let gens = h.generators();
    let cocycles = kernel_echelon(&cocycle_constraints(h, m));
    if cocycles.rank() == 0 {
        return Ok(AbelianInvariants::trivial());
    }
    // principal cocycles s ↦ (A(s) − 1)·e_j
    let mut principal = IntMatrix::zeros(0, r);
    for &s in gens {
        principal = principal.vstack(&(m.matrix(s) - &IntMatrix::identity(r)))?;
    }
    relative_quotient(&cocycles, &principal, "H^1")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupCohomology {
    pub subgroup: Subgroup,
    pub h_minus1: AbelianInvariants,
    pub h1: AbelianInvariants,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyProfile {
    pub mode: SubgroupMode,
    pub entries: Vec<SubgroupCohomology>,
    pub is_flabby: bool,
    pub is_coflabby: bool,
}

impl CohomologyProfile {
    pub fn entry(&self, members: &[usize]) -> Option<&SubgroupCohomology> {
        self.entries.iter().find(|e| e.subgroup.members() == members)
    }

    pub fn to_value(&self) -> Value {
        json!({
            "mode": self.mode,
            "is_flabby": self.is_flabby,
            "is_coflabby": self.is_coflabby,
            "subgroups": self.entries.iter().map(|e| json!({
                "subgroup": e.subgroup.members(),
                "h_minus1": e.h_minus1.divisors_u64(),
                "h1": e.h1.divisors_u64(),
            })).collect::<Vec<_>>(),
        })
    }
}

pub fn subgroups_for(m: &GLattice, mode: SubgroupMode) -> Result<Vec<Subgroup>> {
    match mode {
        SubgroupMode::PrimePower => m.group().prime_power_subgroups(),
        SubgroupMode::All => Ok(m.group().subgroups()?.to_vec()),
    }
}

pub fn profile(m: &GLattice, mode: SubgroupMode) -> Result<CohomologyProfile> {
    let mut entries = Vec::new();
    for h in subgroups_for(m, mode)? {
        entries.push(SubgroupCohomology { h_minus1: tate_minus1(&h, m)?, h1: h1(&h, m)?, subgroup: h });
    }
    let is_flabby = entries.iter().all(|e| e.h_minus1.is_trivial());
    let is_coflabby = entries.iter().all(|e| e.h1.is_trivial());
    Ok(CohomologyProfile { mode, entries, is_flabby, is_coflabby })
}

/// Flabbiness alone, stopping at the first nonvanishing group.
pub fn is_flabby(m: &GLattice, mode: SubgroupMode) -> Result<bool> {
    for h in subgroups_for(m, mode)? {
        if !tate_minus1(&h, m)?.is_trivial() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn is_coflabby(m: &GLattice, mode: SubgroupMode) -> Result<bool> {
    for h in subgroups_for(m, mode)? {
        if !h1(&h, m)?.is_trivial() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::groups::{catalog, cyclic};
    use crate::lattices::{lenstra_lattice, permutation_lattice, regular_lattice};
    use num_bigint::BigInt;

    fn inv(ds: &[i64]) -> AbelianInvariants {
        AbelianInvariants { divisors: ds.iter().map(|&d| BigInt::from(d)).collect(), free_rank: 0 }
    }

    fn sign_c2() -> GLattice {
        let g = Arc::new(cyclic(2));
        let k = g.trivial_subgroup();
        GLattice::sign(g, &k).unwrap()
    }

    #[test]
    fn c2_examples() {
        let s = sign_c2();
        let whole = s.group().whole();
        assert_eq!(tate_minus1(&whole, &s).unwrap(), inv(&[2]));
        assert_eq!(h1(&whole, &s).unwrap(), inv(&[2]));
        assert_eq!(tate_zero(&whole, &s).unwrap(), inv(&[]));
        let z = regular_lattice(s.group().clone());
        assert!(tate_minus1(&whole, &z).unwrap().is_trivial());
        assert!(tate_zero(&whole, &z).unwrap().is_trivial());
        assert!(h1(&whole, &z).unwrap().is_trivial());
        let t = GLattice::trivial(s.group().clone(), 1);
        assert_eq!(tate_zero(&whole, &t).unwrap(), inv(&[2]));
        assert!(tate_minus1(&s.group().trivial_subgroup(), &s).unwrap().is_trivial());
        let c3 = Arc::new(cyclic(3));
        assert!(h1(&c3.whole(), &GLattice::trivial(c3.clone(), 1)).unwrap().is_trivial());
    }

    #[test]
    fn profiles() {
        let z4 = regular_lattice(Arc::new(cyclic(4)));
        let p = profile(&z4, SubgroupMode::PrimePower).unwrap();
        assert!(p.is_flabby && p.is_coflabby);
        let p = profile(&sign_c2(), SubgroupMode::All).unwrap();
        assert!(!p.is_flabby && !p.is_coflabby);
    }

    #[test]
    fn lenstra_q8() {
        let d = lenstra_lattice(3).unwrap();
        let p = profile(&d.m, SubgroupMode::All).unwrap();
        assert!(p.is_coflabby && !p.is_flabby);
        let whole = p.entries.last().unwrap();
        assert_eq!(whole.subgroup.order(), 4);
        assert_eq!(whole.h_minus1, inv(&[2]));
    }

    #[test]
    fn permutation_lattices_over_s3() {
        let g = Arc::new(catalog("S3").unwrap());
        let subs = g.subgroups().unwrap().to_vec();
        let p = permutation_lattice(g, &subs).unwrap();
        let pr = profile(&p, SubgroupMode::All).unwrap();
        assert!(pr.is_flabby && pr.is_coflabby);
    }
}
