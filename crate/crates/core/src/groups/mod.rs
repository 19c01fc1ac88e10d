//! Finite groups given by multiplication tables.
//!
//! Elements are the indices `0..order` and `0` is always the identity.

mod catalog;
mod parse;
mod structure;

use std::collections::{HashMap, HashSet, VecDeque};
use std::hash::Hash;
use std::sync::{Arc, OnceLock};

use crate::arith;
use crate::error::{Error, Result};

pub use catalog::{catalog, catalog_names, cyclic, dihedral, direct_product, quaternion8, unit_group_mod};
pub use parse::{group_to_value, parse_group, parse_group_with_bound, GroupDoc};
pub use structure::{
    abelian_decomposition, abelian_normal_cyclic_quotient, abelian_normal_cyclic_quotients, all_sylow_cyclic,
    direct_product_splittings, semidirect_splittings, zgroup_presentation, CyclicQuotientWitness, Semidirect,
    ZGroupPresentation,
};

/// Largest group order accepted when parsing or closing permutation generators.
pub const DEFAULT_ORDER_BOUND: usize = 1024;
/// Largest group order for which all subgroups are enumerated.
pub const DEFAULT_SUBGROUP_BOUND: usize = 64;

#[derive(Debug)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    generators: Vec<usize>,
    name: Option<String>,
    orders: OnceLock<Vec<usize>>,
    subgroups: OnceLock<Vec<Subgroup>>,
}

impl Clone for FiniteGroup {
    fn clone(&self) -> Self {
        FiniteGroup {
            order: self.order,
            mul: self.mul.clone(),
            inv: self.inv.clone(),
            generators: self.generators.clone(),
            name: self.name.clone(),
            orders: self.orders.clone(),
            subgroups: self.subgroups.clone(),
        }
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
            && self.mul == other.mul
            && self.generators == other.generators
            && self.name == other.name
    }
}

impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// Builds a group from a table already known to be a group with identity 0.
    pub(crate) fn from_valid_table(order: usize, mul: Vec<u32>, name: Option<String>) -> Self {
        debug_assert_eq!(mul.len(), order * order);
        let mut inv = vec![0u32; order];
        for a in 0..order {
            for b in 0..order {
                if mul[a * order + b] == 0 {
                    inv[a] = b as u32;
                    break;
                }
            }
        }
        let mut g = FiniteGroup {
            order,
            mul,
            inv,
            generators: Vec::new(),
            name,
            orders: OnceLock::new(),
            subgroups: OnceLock::new(),
        };
        g.generators = g.greedy_generators(&(0..order).collect::<Vec<_>>());
        g
    }

    /// Closes `gens` under a multiplication, returning the group on the
    /// resulting elements. `identity` becomes element 0.
    pub(crate) fn from_closure<T: Clone + Eq + Hash>(
        gens: &[T],
        identity: T,
        mul: impl Fn(&T, &T) -> T,
        bound: usize,
        name: Option<String>,
    ) -> Result<Self> {
        let mut elems = vec![identity.clone()];
        let mut index: HashMap<T, usize> = HashMap::from([(identity, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in gens {
                let y = mul(g, &elems[i]);
                if !index.contains_key(&y) {
                    if elems.len() >= bound {
                        return Err(Error::resource(format!("generated group exceeds {bound} elements")));
                    }
                    index.insert(y.clone(), elems.len());
                    queue.push_back(elems.len());
                    elems.push(y);
                }
            }
        }
        let n = elems.len();
        let mut table = Vec::with_capacity(n * n);
        for a in &elems {
            for b in &elems {
                table.push(index[&mul(a, b)] as u32);
            }
        }
        let mut g = Self::from_valid_table(n, table, name);
        let gen_idx: Vec<usize> = gens.iter().map(|x| index[x]).filter(|&i| i != 0).collect();
        let mut seen = HashSet::new();
        g.generators = gen_idx.into_iter().filter(|i| seen.insert(*i)).collect();
        Ok(g)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn conj(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.inv(g))
    }

    pub fn pow(&self, g: usize, k: usize) -> usize {
        (0..k).fold(0, |acc, _| self.mul(acc, g))
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// Replaces the generating set; errors if it does not generate.
    pub fn with_generators(mut self, gens: Vec<usize>) -> Result<Self> {
        if gens.iter().any(|&g| g >= self.order) {
            return Err(Error::invalid("generator index out of range"));
        }
        if self.closure(&gens).len() != self.order {
            return Err(Error::invalid("listed generators do not generate the group"));
        }
        self.generators = gens;
        Ok(self)
    }

    pub fn table_row(&self, a: usize) -> &[u32] {
        &self.mul[a * self.order..(a + 1) * self.order]
    }

    pub fn element_orders(&self) -> &[usize] {
        self.orders.get_or_init(|| {
            (0..self.order)
                .map(|g| {
                    let mut k = 1;
                    let mut x = g;
                    while x != 0 {
                        x = self.mul(x, g);
                        k += 1;
                    }
                    k
                })
                .collect()
        })
    }

    pub fn element_order(&self, g: usize) -> usize {
        self.element_orders()[g]
    }

    pub fn exponent(&self) -> usize {
        self.element_orders().iter().fold(1u64, |acc, &o| arith::lcm(acc, o as u64)) as usize
    }

    pub fn is_abelian(&self) -> bool {
        self.generators.iter().all(|&a| self.generators.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_cyclic(&self) -> bool {
        self.element_orders().contains(&self.order)
    }

    /// Sorted elements of the subgroup generated by `gens`.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order).filter(|&i| seen[i]).collect()
    }

    /// A small generating set of the subgroup spanned by `elems`, chosen
    /// greedily in index order.
    pub fn greedy_generators(&self, elems: &[usize]) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut have = vec![false; self.order];
        have[0] = true;
        // prefer elements of large order so that cyclic groups get one generator
        let orders = self.element_orders();
        let mut cands: Vec<usize> = elems.to_vec();
        cands.sort_by(|&a, &b| orders[b].cmp(&orders[a]).then(a.cmp(&b)));
        for g in cands {
            if !have[g] {
                gens.push(g);
                for x in self.closure(&gens) {
                    have[x] = true;
                }
            }
        }
        gens
    }

    pub fn subgroup_generated(&self, gens: &[usize]) -> Subgroup {
        let members = self.closure(gens);
        self.make_subgroup(members)
    }

    /// Validates an explicit member list as a subgroup.
    pub fn subgroup_from_members(&self, members: &[usize]) -> Result<Subgroup> {
        let mut m: Vec<usize> = members.to_vec();
        m.sort_unstable();
        m.dedup();
        if m.iter().any(|&x| x >= self.order) {
            return Err(Error::invalid("subgroup member out of range"));
        }
        if m.first() != Some(&0) {
            return Err(Error::invalid("subgroup must contain the identity"));
        }
        let set: HashSet<usize> = m.iter().copied().collect();
        for &a in &m {
            if !set.contains(&self.inv(a)) {
                return Err(Error::invalid("subset is not closed under inverses"));
            }
            for &b in &m {
                if !set.contains(&self.mul(a, b)) {
                    return Err(Error::invalid("subset is not closed under multiplication"));
                }
            }
        }
        Ok(self.make_subgroup(m))
    }

    fn make_subgroup(&self, members: Vec<usize>) -> Subgroup {
        let gens = self.greedy_generators(&members);
        let set: HashSet<usize> = members.iter().copied().collect();
        let is_normal = self.generators.iter().all(|&g| gens.iter().all(|&h| set.contains(&self.conj(g, h))));
        Subgroup { members, generators: gens, is_normal, parent_order: self.order }
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        self.make_subgroup(vec![0])
    }

    pub fn whole(&self) -> Subgroup {
        self.make_subgroup((0..self.order).collect())
    }

    /// All subgroups, sorted by order then by member list.
    pub fn subgroups(&self) -> Result<&[Subgroup]> {
        self.subgroups_with_bound(DEFAULT_SUBGROUP_BOUND)
    }

    pub fn subgroups_with_bound(&self, bound: usize) -> Result<&[Subgroup]> {
        if let Some(s) = self.subgroups.get() {
            return Ok(s);
        }
        if self.order > bound {
            return Err(Error::resource(format!(
                "subgroup enumeration is limited to groups of order at most {bound} (got {})",
                self.order
            )));
        }
        let list = self.enumerate_subgroups();
        Ok(self.subgroups.get_or_init(|| list))
    }

    fn enumerate_subgroups(&self) -> Vec<Subgroup> {
        let words = self.order.div_ceil(64);
        let mask_of = |members: &[usize]| {
            let mut m = vec![0u64; words];
            for &x in members {
                m[x / 64] |= 1 << (x % 64);
            }
            m
        };
        let mut seen: HashSet<Vec<u64>> = HashSet::new();
        let mut found: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        let mut cyclic_gens = Vec::new();
        for g in 0..self.order {
            let members = self.closure(&[g]);
            if seen.insert(mask_of(&members)) {
                cyclic_gens.push(g);
                found.push((members, vec![g]));
            }
        }
        let mut i = 0;
        while i < found.len() {
            let (members, gens) = found[i].clone();
            let in_sub: HashSet<usize> = members.iter().copied().collect();
            for &c in &cyclic_gens {
                if in_sub.contains(&c) {
                    continue;
                }
                let mut g2 = gens.clone();
                g2.push(c);
                let joined = self.closure(&g2);
                if seen.insert(mask_of(&joined)) {
                    found.push((joined, g2));
                }
            }
            i += 1;
        }
        let mut subs: Vec<Subgroup> = found.into_iter().map(|(m, _)| self.make_subgroup(m)).collect();
        subs.sort_by(|a, b| a.members.len().cmp(&b.members.len()).then_with(|| a.members.cmp(&b.members)));
        subs
    }

    /// Subgroups of prime-power order, including the trivial subgroup.
    pub fn prime_power_subgroups(&self) -> Result<Vec<Subgroup>> {
        Ok(self
            .subgroups()?
            .iter()
            .filter(|s| s.order() == 1 || arith::prime_power(s.order() as u64).is_some())
            .cloned()
            .collect())
    }

    pub fn normal_subgroups(&self) -> Result<Vec<Subgroup>> {
        Ok(self.subgroups()?.iter().filter(|s| s.is_normal).cloned().collect())
    }

    pub fn conjugate_subgroup(&self, g: usize, s: &Subgroup) -> Vec<usize> {
        let mut m: Vec<usize> = s.members.iter().map(|&h| self.conj(g, h)).collect();
        m.sort_unstable();
        m
    }

    /// One representative per conjugacy class of subgroups, in the order of
    /// [`FiniteGroup::subgroups`].
    pub fn subgroup_class_representatives(&self) -> Result<Vec<Subgroup>> {
        let subs = self.subgroups()?;
        let mut covered: HashSet<Vec<usize>> = HashSet::new();
        let mut reps = Vec::new();
        for s in subs {
            if covered.contains(&s.members) {
                continue;
            }
            for g in 0..self.order {
                covered.insert(self.conjugate_subgroup(g, s));
            }
            reps.push(s.clone());
        }
        Ok(reps)
    }

    /// Left cosets `gH`, each listed by its sorted elements, ordered by their
    /// smallest element; the coset `H` comes first.
    pub fn left_cosets(&self, h: &Subgroup) -> Vec<Vec<usize>> {
        let mut label = vec![usize::MAX; self.order];
        let mut cosets = Vec::new();
        for g in 0..self.order {
            if label[g] != usize::MAX {
                continue;
            }
            let mut c: Vec<usize> = h.members.iter().map(|&x| self.mul(g, x)).collect();
            c.sort_unstable();
            for &x in &c {
                label[x] = cosets.len();
            }
            cosets.push(c);
        }
        cosets
    }

    /// Index of the left coset containing each element.
    pub fn coset_labels(&self, h: &Subgroup) -> Vec<usize> {
        let mut label = vec![0; self.order];
        for (i, c) in self.left_cosets(h).iter().enumerate() {
            for &x in c {
                label[x] = i;
            }
        }
        label
    }

    /// The quotient by a normal subgroup, with the projection map.
    pub fn quotient(&self, n: &Subgroup) -> Result<(FiniteGroup, Vec<usize>)> {
        if !n.is_normal {
            return Err(Error::invalid("quotient by a non-normal subgroup"));
        }
        let cosets = self.left_cosets(n);
        let label = self.coset_labels(n);
        let k = cosets.len();
        let mut table = Vec::with_capacity(k * k);
        for a in &cosets {
            for b in &cosets {
                table.push(label[self.mul(a[0], b[0])] as u32);
            }
        }
        let mut q = FiniteGroup::from_valid_table(k, table, None);
        let mut gens: Vec<usize> = self.generators.iter().map(|&g| label[g]).filter(|&x| x != 0).collect();
        gens.sort_unstable();
        gens.dedup();
        if q.closure(&gens).len() == k {
            q.generators = gens;
        }
        Ok((q, label))
    }

    /// The subgroup as a standalone group together with its embedding.
    pub fn subgroup_as_group(&self, s: &Subgroup) -> (FiniteGroup, Vec<usize>) {
        let pos: HashMap<usize, usize> = s.members.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let k = s.members.len();
        let mut table = Vec::with_capacity(k * k);
        for &a in &s.members {
            for &b in &s.members {
                table.push(pos[&self.mul(a, b)] as u32);
            }
        }
        let mut g = FiniteGroup::from_valid_table(k, table, None);
        g.generators = s.generators.iter().map(|x| pos[x]).collect();
        (g, s.members.clone())
    }

    /// Re-checks associativity, identity and inverses over all elements.
    pub fn verify_axioms(&self) -> bool {
        let n = self.order;
        (0..n).all(|a| self.mul(0, a) == a && self.mul(a, 0) == a && self.mul(a, self.inv(a)) == 0)
            && (0..n).all(|a| {
                (0..n).all(|b| {
                    let ab = self.mul(a, b);
                    (0..n).all(|c| self.mul(ab, c) == self.mul(a, self.mul(b, c)))
                })
            })
            && self.closure(&self.generators).len() == n
    }

    /// Key identifying the labelled group, for memoization.
    pub fn canonical_key(&self) -> Vec<u32> {
        let mut k = Vec::with_capacity(self.mul.len() + 1);
        k.push(self.order as u32);
        k.extend_from_slice(&self.mul);
        k
    }

    pub fn into_arc(self) -> Arc<Self> {
        Arc::new(self)
    }
}

/// A subgroup, recorded by its sorted member list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    members: Vec<usize>,
    generators: Vec<usize>,
    is_normal: bool,
    parent_order: usize,
}

impl Subgroup {
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn is_normal(&self) -> bool {
        self.is_normal
    }

    pub fn parent_order(&self) -> usize {
        self.parent_order
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.binary_search(&g).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn is_cyclic(&self, g: &FiniteGroup) -> bool {
        self.members.iter().any(|&x| g.element_order(x) == self.order())
    }

    pub fn is_abelian(&self, g: &FiniteGroup) -> bool {
        self.generators.iter().all(|&a| self.generators.iter().all(|&b| g.mul(a, b) == g.mul(b, a)))
    }

    pub fn exponent(&self, g: &FiniteGroup) -> usize {
        self.members.iter().fold(1u64, |acc, &x| arith::lcm(acc, g.element_order(x) as u64)) as usize
    }

    /// Checks that this subgroup belongs to `g` (closure re-verified).
    pub fn check_in(&self, g: &FiniteGroup) -> Result<()> {
        if self.parent_order != g.order() {
            return Err(Error::invalid("subgroup belongs to a group of a different order"));
        }
        g.subgroup_from_members(&self.members).map(|_| ())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subgroup_counts() {
        assert_eq!(cyclic(2).subgroups().unwrap().len(), 2);
        assert_eq!(catalog("S3").unwrap().subgroups().unwrap().len(), 6);
        assert_eq!(catalog("V4").unwrap().subgroups().unwrap().len(), 5);
        assert_eq!(catalog("D8").unwrap().subgroups().unwrap().len(), 10);
        assert_eq!(catalog("Q8").unwrap().subgroups().unwrap().len(), 6);
        assert_eq!(catalog("A4").unwrap().subgroups().unwrap().len(), 10);
        assert_eq!(catalog("C2xC2xC2").unwrap().subgroups().unwrap().len(), 16);
    }

    #[test]
    fn s3_subgroup_orders() {
        let s3 = catalog("S3").unwrap();
        let orders: Vec<usize> = s3.subgroups().unwrap().iter().map(|s| s.order()).collect();
        assert_eq!(orders, vec![1, 2, 2, 2, 3, 6]);
        let normal: Vec<usize> = s3.subgroups().unwrap().iter().filter(|s| s.is_normal()).map(|s| s.order()).collect();
        assert_eq!(normal, vec![1, 3, 6]);
        assert_eq!(s3.subgroup_class_representatives().unwrap().len(), 4);
    }

    #[test]
    fn subgroup_bound_is_enforced() {
        let big = cyclic(100);
        assert!(big.subgroups().unwrap_err().is_resource());
        assert_eq!(big.subgroups_with_bound(128).unwrap().len(), 9);
    }

    #[test]
    fn quotient_and_subgroup_groups() {
        let d8 = catalog("D8").unwrap();
        let center = d8.subgroups().unwrap().iter().find(|s| s.order() == 2 && s.is_normal()).unwrap().clone();
        let (q, _) = d8.quotient(&center).unwrap();
        assert_eq!(q.order(), 4);
        assert!(q.verify_axioms());
        assert!(!q.is_cyclic());
        let (h, emb) = d8.subgroup_as_group(&center);
        assert_eq!(h.order(), 2);
        assert_eq!(emb[0], 0);
        assert!(h.verify_axioms());
    }

    #[test]
    fn lagrange_and_closure_for_catalog() {
        for name in catalog_names() {
            let g = catalog(&name).unwrap();
            assert!(g.verify_axioms(), "{name}");
            for s in g.subgroups().unwrap() {
                assert_eq!(g.order() % s.order(), 0, "{name}");
                assert!(g.subgroup_from_members(s.members()).is_ok());
            }
        }
    }
}
