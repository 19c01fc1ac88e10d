//! Noether's problem: is `k(G)` retract `k`-rational?

use std::collections::HashMap;
use std::sync::Arc;

use super::{absorb, chain, decided, Answer, FieldDescriptor, FieldKind, Premise, Rule, Subject, Tri, Verdict};
use crate::arith;
use crate::error::{Error, Result};
use crate::groups::{
    abelian_normal_cyclic_quotients, direct_product_splittings, semidirect_splittings, FiniteGroup, Subgroup,
};

/// Groups above this order skip the semidirect and direct product searches.
pub(crate) const SPLITTING_ORDER_BOUND: usize = 64;

/// Skips a rule whose search hit a resource bound.
fn or_skip<T>(r: Result<Vec<T>>) -> Result<Vec<T>> {
    match r {
        Err(e) if e.is_resource() => Ok(Vec::new()),
        other => other,
    }
}

pub(crate) struct Engine<'a> {
    pub(crate) field: &'a FieldDescriptor,
    memo: HashMap<Vec<u32>, Verdict>,
}

impl<'a> Engine<'a> {
    pub(crate) fn new(field: &'a FieldDescriptor) -> Self {
        Engine { field, memo: HashMap::new() }
    }

    pub(crate) fn noether(&mut self, g: &Arc<FiniteGroup>) -> Result<Verdict> {
        let key = g.canonical_key();
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        let v = self.decide(g)?;
        self.memo.insert(key, v.clone());
        Ok(v)
    }

    fn decide(&mut self, g: &Arc<FiniteGroup>) -> Result<Verdict> {
        if !self.field.is_infinite() {
            return Ok(Verdict::unknown(Vec::new()));
        }
        let mut partial = Vec::new();
        if let Some(v) = self.char_reduction(g, &mut partial)? {
            return Ok(v);
        }
        let no = self.no_rules(g)?;
        let yes = self.yes_rules(g)?;
        match (no, yes) {
            (Some(n), Some(y)) => Err(Error::internal(format!(
                "rule conflict on a group of order {}: {} says No, {} says Yes",
                g.order(),
                n.trace.last().map_or("?", |s| s.rule.id()),
                y.trace.last().map_or("?", |s| s.rule.id()),
            ))),
            (Some(v), None) | (None, Some(v)) => Ok(v),
            (None, None) => match self.direct_product(g, &mut partial)? {
                Some(v) => Ok(v),
                None => Ok(Verdict::unknown(partial)),
            },
        }
    }

    /// R1: in characteristic `p`, pass to `G/N` for a normal `N` of order `p`.
    fn char_reduction(&mut self, g: &Arc<FiniteGroup>, partial: &mut Vec<super::Step>) -> Result<Option<Verdict>> {
        let p = self.field.characteristic();
        if p == 0 || !(g.order() as u64).is_multiple_of(p) {
            return Ok(None);
        }
        let Some(n) = normal_subgroup_of_order(g, p as usize) else { return Ok(None) };
        let q = Arc::new(g.quotient(&n)?.0);
        let sub = self.noether(&q)?;
        if !sub.answer.is_decisive() {
            absorb_partial(partial, &sub);
            return Ok(None);
        }
        let premise = Premise::CharReduction { p, normal: n.members().to_vec() };
        Ok(Some(decided(chain(&[&sub], Rule::CharReduction, Subject::Group(g.clone()), premise, sub.answer))))
    }

    fn no_rules(&mut self, g: &Arc<FiniteGroup>) -> Result<Option<Verdict>> {
        if let Some(v) = self.two_power_quotient(g)? {
            return Ok(Some(v));
        }
        if let Some(v) = self.abelian(g, Answer::No) {
            return Ok(Some(v));
        }
        self.semidirect_necessity(g)
    }

    fn yes_rules(&mut self, g: &Arc<FiniteGroup>) -> Result<Option<Verdict>> {
        if let Some(v) = self.abelian(g, Answer::Yes) {
            return Ok(Some(v));
        }
        if let Some(v) = self.abelian_by_cyclic(g)? {
            return Ok(Some(v));
        }
        if let Some(v) = exponent_p(g) {
            return Ok(Some(v));
        }
        self.coprime_semidirect(g)
    }

    /// R2, restricted to the conclusion `want`.
    fn abelian(&self, g: &Arc<FiniteGroup>, want: Answer) -> Option<Verdict> {
        let premise = abelian_premise(g, self.field)?;
        let answer = abelian_answer(&premise);
        (answer == want).then(|| decided(chain(&[], Rule::Abelian, Subject::Group(g.clone()), premise, answer)))
    }

    /// R3: a normal `H` with `G/H ≅ C_{2^n}`.
    fn two_power_quotient(&self, g: &Arc<FiniteGroup>) -> Result<Option<Verdict>> {
        let mut normals = or_skip(g.normal_subgroups())?;
        normals.sort_by(|a, b| (a.order(), a.members()).cmp(&(b.order(), b.members())));
        for h in &normals {
            let Some(n) = cyclic_two_power_quotient(g, h)? else { continue };
            let cyc = self.field.cyclotomic_2power_cyclic(n);
            let odd_char = self.field.characteristic() != 2;
            let rule = if h.is_trivial() && cyc == Tri::No && odd_char {
                Some((Rule::CyclicTwoPower, None))
            } else if !h.is_trivial() && self.field.kind() == FieldKind::Rationals && n >= 3 {
                Some((Rule::RationalTwoPowerQuotient, None))
            } else if cyc == Tri::No && odd_char {
                cyclic_complement(g, h, n).map(|x| (Rule::SplitTwoPowerQuotient, Some(x)))
            } else {
                None
            };
            if let Some((rule, complement)) = rule {
                let premise =
                    Premise::TwoPowerQuotient { normal: h.members().to_vec(), n, complement, cyclotomic_cyclic: cyc };
                return Ok(Some(decided(chain(&[], rule, Subject::Group(g.clone()), premise, Answer::No))));
            }
        }
        Ok(None)
    }

    /// R7: `G = N ⋊ G0` with `k(G0)` not retract rational.
    fn semidirect_necessity(&mut self, g: &Arc<FiniteGroup>) -> Result<Option<Verdict>> {
        if g.order() > SPLITTING_ORDER_BOUND {
            return Ok(None);
        }
        for s in or_skip(semidirect_splittings(g))? {
            let g0 = Arc::new(g.subgroup_as_group(&s.complement).0);
            let sub = self.noether(&g0)?;
            if sub.answer == Answer::No {
                let premise = Premise::Semidirect {
                    normal: s.normal.members().to_vec(),
                    complement: s.complement.members().to_vec(),
                };
                return Ok(Some(decided(chain(
                    &[&sub],
                    Rule::SemidirectNecessity,
                    Subject::Group(g.clone()),
                    premise,
                    Answer::No,
                ))));
            }
        }
        Ok(None)
    }

    /// R4: an abelian normal `H` with cyclic quotient and `ζ_{e'} ∈ k`.
    fn abelian_by_cyclic(&self, g: &Arc<FiniteGroup>) -> Result<Option<Verdict>> {
        for w in or_skip(abelian_normal_cyclic_quotients(g))? {
            let root = self.field.has_root_of_unity(w.e_prime);
            if root == Tri::Yes {
                let premise = Premise::AbelianByCyclic {
                    normal: w.subgroup.members().to_vec(),
                    tau: w.tau,
                    e_prime: w.e_prime,
                    root_of_unity: root,
                };
                return Ok(Some(decided(chain(
                    &[],
                    Rule::AbelianByCyclic,
                    Subject::Group(g.clone()),
                    premise,
                    Answer::Yes,
                ))));
            }
        }
        Ok(None)
    }

    /// R8: `G = N ⋊ G0`, `N` abelian, coprime orders, both factors Yes.
    fn coprime_semidirect(&mut self, g: &Arc<FiniteGroup>) -> Result<Option<Verdict>> {
        if g.order() > SPLITTING_ORDER_BOUND {
            return Ok(None);
        }
        for s in or_skip(semidirect_splittings(g))? {
            if !s.normal.is_abelian(g) || arith::gcd(s.normal.order() as u64, s.complement.order() as u64) != 1 {
                continue;
            }
            let n = Arc::new(g.subgroup_as_group(&s.normal).0);
            let g0 = Arc::new(g.subgroup_as_group(&s.complement).0);
            let vn = self.noether(&n)?;
            if vn.answer != Answer::Yes {
                continue;
            }
            let v0 = self.noether(&g0)?;
            if v0.answer == Answer::Yes {
                let premise = Premise::Semidirect {
                    normal: s.normal.members().to_vec(),
                    complement: s.complement.members().to_vec(),
                };
                return Ok(Some(decided(chain(
                    &[&vn, &v0],
                    Rule::CoprimeSemidirect,
                    Subject::Group(g.clone()),
                    premise,
                    Answer::Yes,
                ))));
            }
        }
        Ok(None)
    }

    /// R6: `G = G1 × G2`; No if either factor is No, Yes if both are Yes.
    fn direct_product(&mut self, g: &Arc<FiniteGroup>, partial: &mut Vec<super::Step>) -> Result<Option<Verdict>> {
        if g.order() > SPLITTING_ORDER_BOUND {
            return Ok(None);
        }
        for (a, b) in or_skip(direct_product_splittings(g))? {
            let va = self.noether(&Arc::new(g.subgroup_as_group(&a).0))?;
            let vb = self.noether(&Arc::new(g.subgroup_as_group(&b).0))?;
            let premise = Premise::DirectProduct { left: a.members().to_vec(), right: b.members().to_vec() };
            let subject = Subject::Group(g.clone());
            let trace = match (va.answer, vb.answer) {
                (Answer::No, _) => chain(&[&va], Rule::DirectProduct, subject, premise, Answer::No),
                (_, Answer::No) => chain(&[&vb], Rule::DirectProduct, subject, premise, Answer::No),
                (Answer::Yes, Answer::Yes) => chain(&[&va, &vb], Rule::DirectProduct, subject, premise, Answer::Yes),
                _ => {
                    absorb_partial(partial, &va);
                    absorb_partial(partial, &vb);
                    continue;
                }
            };
            return Ok(Some(decided(trace)));
        }
        Ok(None)
    }
}

fn absorb_partial(partial: &mut Vec<super::Step>, sub: &Verdict) {
    if sub.answer.is_decisive() {
        absorb(partial, sub);
    }
}

pub(crate) fn normal_subgroup_of_order(g: &FiniteGroup, p: usize) -> Option<Subgroup> {
    (0..g.order()).filter(|&x| g.element_order(x) == p).map(|x| g.subgroup_generated(&[x])).find(|s| s.is_normal())
}

pub(crate) fn abelian_premise(g: &FiniteGroup, k: &FieldDescriptor) -> Option<Premise> {
    if !g.is_abelian() {
        return None;
    }
    let exponent = g.exponent() as u64;
    let (two_power, _) = arith::two_adic(exponent);
    Some(Premise::Abelian {
        exponent,
        two_power,
        characteristic: k.characteristic(),
        cyclotomic_cyclic: k.cyclotomic_2power_cyclic(two_power),
    })
}

pub(crate) fn abelian_answer(p: &Premise) -> Answer {
    match *p {
        Premise::Abelian { characteristic, cyclotomic_cyclic, .. } => {
            if characteristic == 2 || cyclotomic_cyclic == Tri::Yes {
                Answer::Yes
            } else if cyclotomic_cyclic == Tri::No {
                Answer::No
            } else {
                Answer::Unknown
            }
        }
        _ => Answer::Unknown,
    }
}

/// `n ≥ 1` with `G/H ≅ C_{2^n}`, if the quotient has that shape.
pub(crate) fn cyclic_two_power_quotient(g: &FiniteGroup, h: &Subgroup) -> Result<Option<u32>> {
    let index = g.order() / h.order();
    if index < 2 || !index.is_power_of_two() || !h.is_normal() {
        return Ok(None);
    }
    let (q, _) = g.quotient(h)?;
    Ok(q.is_cyclic().then_some(index.trailing_zeros()))
}

/// An element generating a cyclic complement of order `2^n` to `H`.
pub(crate) fn cyclic_complement(g: &FiniteGroup, h: &Subgroup, n: u32) -> Option<usize> {
    let target = 1usize << n;
    (0..g.order())
        .find(|&x| g.element_order(x) == target && g.closure(&[x]).iter().filter(|&&y| h.contains(y)).count() == 1)
}

/// R5: non-abelian of exponent `p` and order `p^3` or `p^4`.
fn exponent_p(g: &Arc<FiniteGroup>) -> Option<Verdict> {
    let premise = exponent_p_premise(g)?;
    Some(decided(chain(&[], Rule::ExponentP, Subject::Group(g.clone()), premise, Answer::Yes)))
}

pub(crate) fn exponent_p_premise(g: &FiniteGroup) -> Option<Premise> {
    let (p, a) = arith::prime_power(g.order() as u64)?;
    (matches!(a, 3 | 4) && !g.is_abelian() && g.exponent() as u64 == p)
        .then_some(Premise::ExponentP { p, order: g.order() as u64 })
}

pub(crate) fn noether_implications(answer: Answer) -> Vec<String> {
    match answer {
        Answer::Yes => vec![
            "there is a generic G-Galois extension over k (Theorem 1.2)".into(),
            "there is a generic G-polynomial over k (Theorem 1.2)".into(),
            "the unramified Brauer group of k(G) over k is Br(k) (Theorem 3.2)".into(),
        ],
        Answer::No => vec![
            "there is no generic G-Galois extension over k (Theorem 1.2)".into(),
            "k(G) is neither stably rational nor rational over k".into(),
        ],
        Answer::Unknown => Vec::new(),
    }
}

/// Is `k(G)` retract `k`-rational?
pub fn noether_verdict(g: &FiniteGroup, k: &FieldDescriptor) -> Result<Verdict> {
    let mut engine = Engine::new(k);
    let mut v = engine.noether(&Arc::new(g.clone()))?;
    v.implications = noether_implications(v.answer);
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{catalog, cyclic};

    fn q() -> FieldDescriptor {
        FieldDescriptor::rationals()
    }

    #[test]
    fn examples() {
        let v = noether_verdict(&cyclic(8), &q()).unwrap();
        assert_eq!(v.answer, Answer::No);
        assert!(v.cites("Theorem 2.9"));
        let v = noether_verdict(&cyclic(47), &q()).unwrap();
        assert_eq!(v.answer, Answer::Yes);
        assert!(v.cites("Theorem 3.7"));
        let v = noether_verdict(&catalog("S3").unwrap(), &FieldDescriptor::complex()).unwrap();
        assert_eq!(v.answer, Answer::Yes);
        assert!(v.cites("Theorem 5.10"));
        let v = noether_verdict(&catalog("Q8").unwrap(), &q()).unwrap();
        assert_eq!(v.answer, Answer::Unknown);
    }

    #[test]
    fn small_cases() {
        assert_eq!(noether_verdict(&cyclic(1), &q()).unwrap().answer, Answer::Yes);
        assert_eq!(noether_verdict(&cyclic(4), &q()).unwrap().answer, Answer::Yes);
        assert_eq!(noether_verdict(&cyclic(16), &q()).unwrap().answer, Answer::No);
        // C2 x C8 has C8 as a quotient
        assert_eq!(noether_verdict(&catalog("C2xC8").unwrap(), &q()).unwrap().answer, Answer::No);
        // S3 = C3 ⋊ C2 over Q by the coprime rule
        let v = noether_verdict(&catalog("S3").unwrap(), &q()).unwrap();
        assert_eq!(v.answer, Answer::Yes);
        assert!(v.cites("Theorem 3.5(2)"));
    }

    #[test]
    fn rational_two_power_quotient() {
        // C3 ⋊ C8, the generator of C8 inverting C3
        let g = crate::groups::parse_group(&serde_json::json!({
            "perm_generators": [[2, 3, 1, 4, 5, 6, 7, 8, 9, 10, 11], [1, 3, 2, 5, 6, 7, 8, 9, 10, 11, 4]]
        }))
        .unwrap();
        assert_eq!(g.order(), 24);
        let v = noether_verdict(&g, &q()).unwrap();
        assert_eq!(v.answer, Answer::No);
        assert!(v.cites("Remark after Corollary 2.10"));
        super::super::replay(&v, &q()).unwrap();
        // over C nothing rules it out and Theorem 5.10 applies
        let c = FieldDescriptor::complex();
        let v = noether_verdict(&g, &c).unwrap();
        assert_eq!(v.answer, Answer::Yes);
        super::super::replay(&v, &c).unwrap();
    }

    #[test]
    fn characteristic_reduction() {
        let f = FieldDescriptor::from_value(&serde_json::json!({"name": "F2(t)", "characteristic": 2})).unwrap();
        let v = noether_verdict(&cyclic(8), &f).unwrap();
        assert_eq!(v.answer, Answer::Yes);
        assert!(v.cites("Theorem 3.6, Lemma 3.4(i)"));
        let v = noether_verdict(&catalog("Q8").unwrap(), &f).unwrap();
        assert_eq!(v.answer, Answer::Yes);
    }
}
