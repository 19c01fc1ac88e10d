//! Recognition of the structural hypotheses the rule engine consults.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{FiniteGroup, Subgroup};
use crate::arith;
use crate::error::{Error, Result};

/// Whether every Sylow subgroup is cyclic, i.e. for each `p^a` exactly
/// dividing `|G|` there is an element of order `p^a`.
pub fn all_sylow_cyclic(g: &FiniteGroup) -> bool {
    let orders = g.element_orders();
    arith::factorize(g.order() as u64).into_iter().all(|(p, a)| orders.contains(&(p.pow(a) as usize)))
}

/// `G = <sigma, tau>` with `sigma^m = tau^n = 1`, `tau sigma tau^-1 = sigma^r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZGroupPresentation {
    pub m: u64,
    pub n: u64,
    pub r: u64,
    pub sigma: usize,
    pub tau: usize,
}

impl ZGroupPresentation {
    /// Re-checks every defining condition against `g`.
    pub fn verify(&self, g: &FiniteGroup) -> bool {
        let (m, n, r) = (self.m, self.n, self.r);
        if self.sigma >= g.order() || self.tau >= g.order() || m * n != g.order() as u64 {
            return false;
        }
        let gcd_ok = match r {
            0 => m == 1,
            1 => arith::gcd(n, m) == 1,
            _ => arith::gcd((r - 1) * n, m) == 1,
        };
        gcd_ok
            && arith::pow_mod(r, n, m) == 1 % m
            && g.element_order(self.sigma) as u64 == m
            && g.element_order(self.tau) as u64 == n
            && g.conj(self.tau, self.sigma) == g.pow(self.sigma, r as usize)
            && g.closure(&[self.sigma, self.tau]).len() == g.order()
    }
}

/// A metacyclic presentation witnessing that `g` is a Z-group, or `None` when
/// some Sylow subgroup is not cyclic.
pub fn zgroup_presentation(g: &FiniteGroup) -> Option<ZGroupPresentation> {
    if !all_sylow_cyclic(g) {
        return None;
    }
    let order = g.order() as u64;
    if order == 1 {
        return Some(ZGroupPresentation { m: 1, n: 1, r: 1, sigma: 0, tau: 0 });
    }
    let orders = g.element_orders();
    let mut ns: Vec<u64> = arith::divisors(order).into_iter().filter(|&d| d > 1).collect();
    ns.push(1);
    for n in ns {
        let m = order / n;
        for sigma in (0..g.order()).filter(|&s| orders[s] as u64 == m) {
            let powers: Vec<usize> = {
                let mut v = Vec::with_capacity(m as usize);
                let mut x = 0;
                for _ in 0..m {
                    v.push(x);
                    x = g.mul(x, sigma);
                }
                v
            };
            for tau in (0..g.order()).filter(|&t| orders[t] as u64 == n) {
                let c = g.conj(tau, sigma);
                let Some(r) = powers.iter().position(|&x| x == c) else { continue };
                let r = if m == 1 { 1 } else { r as u64 };
                let w = ZGroupPresentation { m, n, r, sigma, tau };
                if w.verify(g) {
                    return Some(w);
                }
            }
        }
    }
    None
}

/// An abelian normal subgroup with cyclic quotient, generated modulo the
/// subgroup by `tau`, and `e_prime = lcm(exp(H), ord(tau))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicQuotientWitness {
    pub subgroup: Subgroup,
    pub tau: usize,
    pub e_prime: u64,
}

impl CyclicQuotientWitness {
    pub fn verify(&self, g: &FiniteGroup) -> bool {
        let h = &self.subgroup;
        let mut gens = h.generators().to_vec();
        gens.push(self.tau);
        h.check_in(g).is_ok()
            && h.is_normal()
            && h.is_abelian(g)
            && g.closure(&gens).len() == g.order()
            && self.e_prime == arith::lcm(h.exponent(g) as u64, g.element_order(self.tau) as u64)
    }
}

/// One witness per value of `e'`, ascending; each minimizes `ord(tau)`, then
/// `|H|`, among witnesses with that `e'`.
pub fn abelian_normal_cyclic_quotients(g: &FiniteGroup) -> Result<Vec<CyclicQuotientWitness>> {
    let mut best: std::collections::BTreeMap<u64, ((usize, usize), CyclicQuotientWitness)> = Default::default();
    for h in g.subgroups()? {
        if !h.is_normal() || !h.is_abelian(g) {
            continue;
        }
        let exp_h = h.exponent(g) as u64;
        for tau in 0..g.order() {
            let mut gens = h.generators().to_vec();
            gens.push(tau);
            if g.closure(&gens).len() != g.order() {
                continue;
            }
            let e = arith::lcm(exp_h, g.element_order(tau) as u64);
            let key = (g.element_order(tau), h.order());
            if best.get(&e).is_none_or(|(k, _)| key < *k) {
                best.insert(e, (key, CyclicQuotientWitness { subgroup: h.clone(), tau, e_prime: e }));
            }
        }
    }
    Ok(best.into_values().map(|(_, w)| w).collect())
}

/// The witness minimizing `e'`, then `ord(tau)`, then `|H|`.
pub fn abelian_normal_cyclic_quotient(g: &FiniteGroup) -> Result<Option<CyclicQuotientWitness>> {
    Ok(abelian_normal_cyclic_quotients(g)?.into_iter().next())
}

/// Prime-power orders of the cyclic factors of an abelian group, primes
/// ascending and powers descending within a prime.
pub fn abelian_decomposition(g: &FiniteGroup) -> Result<Vec<u64>> {
    if !g.is_abelian() {
        return Err(Error::invalid("abelian decomposition requires an abelian group"));
    }
    let orders = g.element_orders();
    let mut out = Vec::new();
    for (p, a) in arith::factorize(g.order() as u64) {
        // s[k] = log_p |{x : x^(p^k) = 1}|
        let s: Vec<u32> = (0..=a + 1)
            .map(|k| {
                let pk = p.pow(k.min(a)) as usize;
                let count = orders.iter().filter(|&&o| pk.is_multiple_of(o)).count() as u64;
                count.ilog(p)
            })
            .collect();
        for k in (1..=a).rev() {
            let at_least_k = s[k as usize] - s[k as usize - 1];
            let at_least_next = s[k as usize + 1] - s[k as usize];
            for _ in 0..(at_least_k - at_least_next) {
                out.push(p.pow(k));
            }
        }
    }
    Ok(out)
}

/// `G = N ⋊ G0` with `N` normal, `N ∩ G0 = 1` and `N·G0 = G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Semidirect {
    pub normal: Subgroup,
    pub complement: Subgroup,
}

impl Semidirect {
    pub fn verify(&self, g: &FiniteGroup) -> bool {
        let inter = self.normal.members().iter().filter(|&&x| self.complement.contains(x)).count();
        self.normal.is_normal()
            && self.normal.check_in(g).is_ok()
            && self.complement.check_in(g).is_ok()
            && inter == 1
            && self.normal.order() * self.complement.order() == g.order()
    }
}

/// Splittings with both factors nontrivial; one complement per conjugacy
/// class for each normal subgroup.
pub fn semidirect_splittings(g: &FiniteGroup) -> Result<Vec<Semidirect>> {
    let subs = g.subgroups()?;
    let mut out = Vec::new();
    for n in subs.iter().filter(|s| s.is_normal() && !s.is_trivial() && s.order() < g.order()) {
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        for c in subs.iter().filter(|c| c.order() * n.order() == g.order()) {
            if seen.contains(c.members()) {
                continue;
            }
            if c.members().iter().filter(|&&x| n.contains(x)).count() != 1 {
                continue;
            }
            for x in 0..g.order() {
                seen.insert(g.conjugate_subgroup(x, c));
            }
            out.push(Semidirect { normal: n.clone(), complement: c.clone() });
        }
    }
    Ok(out)
}

/// Internal direct product decompositions `G = N1 × N2` with both factors
/// nontrivial, each unordered pair listed once.
pub fn direct_product_splittings(g: &FiniteGroup) -> Result<Vec<(Subgroup, Subgroup)>> {
    let normals: Vec<&Subgroup> =
        g.subgroups()?.iter().filter(|s| s.is_normal() && !s.is_trivial() && s.order() < g.order()).collect();
    let mut out = Vec::new();
    for (i, a) in normals.iter().enumerate() {
        for b in &normals[i + 1..] {
            if a.order() * b.order() == g.order() && a.members().iter().filter(|&&x| b.contains(x)).count() == 1 {
                out.push(((*a).clone(), (*b).clone()));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{catalog, catalog_names, cyclic};

    #[test]
    fn sylow() {
        assert!(all_sylow_cyclic(&catalog("S3").unwrap()));
        assert!(!all_sylow_cyclic(&catalog("V4").unwrap()));
        assert!(!all_sylow_cyclic(&catalog("Q8").unwrap()));
        assert!(all_sylow_cyclic(&cyclic(12)));
    }

    #[test]
    fn zgroup_examples() {
        let s3 = catalog("S3").unwrap();
        let p = zgroup_presentation(&s3).unwrap();
        assert_eq!((p.m, p.n, p.r), (3, 2, 2));
        let c6 = cyclic(6);
        let p = zgroup_presentation(&c6).unwrap();
        assert_eq!((p.m, p.n, p.r), (3, 2, 1));
        assert!(zgroup_presentation(&catalog("Q8").unwrap()).is_none());
        let t = zgroup_presentation(&cyclic(1)).unwrap();
        assert_eq!((t.m, t.n, t.r), (1, 1, 1));
    }

    #[test]
    fn zgroup_equivalence_on_catalog() {
        for name in catalog_names() {
            let g = catalog(&name).unwrap();
            let w = zgroup_presentation(&g);
            assert_eq!(w.is_some(), all_sylow_cyclic(&g), "{name}");
            if let Some(w) = w {
                assert!(w.verify(&g), "{name}");
            }
        }
    }

    #[test]
    fn ancq_examples() {
        let s3 = catalog("S3").unwrap();
        let w = abelian_normal_cyclic_quotient(&s3).unwrap().unwrap();
        assert_eq!(w.subgroup.order(), 3);
        assert_eq!(s3.element_order(w.tau), 2);
        assert_eq!(w.e_prime, 6);
        let c12 = cyclic(12);
        let w = abelian_normal_cyclic_quotient(&c12).unwrap().unwrap();
        assert_eq!((w.subgroup.order(), w.tau, w.e_prime), (12, 0, 12));
        let a4 = catalog("A4").unwrap();
        let w = abelian_normal_cyclic_quotient(&a4).unwrap().unwrap();
        assert_eq!((w.subgroup.order(), w.e_prime), (4, 6));
        assert!(w.verify(&a4));
        let a5 = crate::groups::parse_group(&serde_json::json!({
            "perm_generators": [[2, 3, 4, 5, 1], [2, 3, 1, 4, 5]]
        }))
        .unwrap();
        assert_eq!(a5.order(), 60);
        assert!(abelian_normal_cyclic_quotient(&a5).unwrap().is_none());
    }

    #[test]
    fn decomposition() {
        assert_eq!(abelian_decomposition(&cyclic(12)).unwrap(), vec![4, 3]);
        assert_eq!(abelian_decomposition(&catalog("V4").unwrap()).unwrap(), vec![2, 2]);
        assert_eq!(abelian_decomposition(&catalog("U32").unwrap()).unwrap(), vec![8, 2]);
        assert!(abelian_decomposition(&catalog("S3").unwrap()).is_err());
    }

    #[test]
    fn splittings() {
        let s3 = catalog("S3").unwrap();
        let sd = semidirect_splittings(&s3).unwrap();
        assert_eq!(sd.len(), 1);
        assert!(sd[0].verify(&s3));
        assert!(direct_product_splittings(&s3).unwrap().is_empty());
        assert_eq!(direct_product_splittings(&cyclic(6)).unwrap().len(), 1);
        assert!(semidirect_splittings(&catalog("Q8").unwrap()).unwrap().is_empty());
    }
}
