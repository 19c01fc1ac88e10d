//! Re-verification of a verdict trace, step by step, from the recorded
//! premises alone.

use super::engine::{abelian_answer, abelian_premise, cyclic_two_power_quotient, exponent_p_premise};
use super::lattice::{coefficient_order, flabby_premise};
use super::{Answer, FieldDescriptor, FieldKind, Premise, Rule, Step, Subject, Tri, Verdict};
use crate::arith;
use crate::error::{Error, Result};
use crate::groups::{all_sylow_cyclic, CyclicQuotientWitness, FiniteGroup, Semidirect, Subgroup};
use crate::lattices::GLattice;
use crate::monomial::MonomialAction;
use crate::resolutions::is_invertible;

type Check = std::result::Result<(), String>;

fn ensure(cond: bool, msg: &str) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg.to_string())
    }
}

fn lib<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Checks every step of `v` against field `k`; the first failure is reported
/// as an internal error naming the step.
pub fn replay(v: &Verdict, k: &FieldDescriptor) -> Result<()> {
    for (i, step) in v.trace.iter().enumerate() {
        check_step(&v.trace, i, k).map_err(|msg| {
            Error::internal(format!("trace step {i} ({} {}): {msg}", step.rule.id(), step.rule.cite()))
        })?;
    }
    if v.answer.is_decisive() {
        let last = v.trace.last().ok_or_else(|| Error::internal("decisive verdict with an empty trace"))?;
        if last.answer != v.answer {
            return Err(Error::internal("final step disagrees with the verdict"));
        }
    }
    Ok(())
}

struct Ctx<'a> {
    trace: &'a [Step],
    step: &'a Step,
}

impl<'a> Ctx<'a> {
    fn used(&self, n: usize) -> std::result::Result<Vec<&'a Step>, String> {
        ensure(self.step.uses.len() == n, &format!("expected {n} used steps"))?;
        self.step.uses.iter().map(|&j| self.trace.get(j).ok_or_else(|| "dangling step reference".to_string())).collect()
    }

    fn group(&self) -> std::result::Result<&'a FiniteGroup, String> {
        match &self.step.subject {
            Subject::Group(g) => Ok(g),
            _ => Err("expected a group subject".into()),
        }
    }

    fn lattice(&self) -> std::result::Result<&'a GLattice, String> {
        match &self.step.subject {
            Subject::Lattice(m) => Ok(m),
            _ => Err("expected a lattice subject".into()),
        }
    }

    fn monomial(&self) -> std::result::Result<&'a MonomialAction, String> {
        match &self.step.subject {
            Subject::Monomial(a) => Ok(a),
            _ => Err("expected a monomial subject".into()),
        }
    }
}

fn same_group(s: &Step, g: &FiniteGroup) -> bool {
    matches!(&s.subject, Subject::Group(h) if h.canonical_key() == g.canonical_key())
}

fn subgroup(g: &FiniteGroup, members: &[usize]) -> std::result::Result<Subgroup, String> {
    lib(g.subgroup_from_members(members))
}

fn check_step(trace: &[Step], i: usize, k: &FieldDescriptor) -> Check {
    let step = &trace[i];
    ensure(step.uses.iter().all(|&j| j < i), "uses a later step")?;
    ensure(step.uses.iter().all(|&j| trace[j].answer.is_decisive()), "consumes an undecided step")?;
    let cx = Ctx { trace, step };
    let answer = step.answer;
    match (step.rule, &step.premise) {
        (Rule::CharReduction, Premise::CharReduction { p, normal }) => {
            let g = cx.group()?;
            let [sub] = cx.used(1)?[..] else { unreachable!() };
            let n = subgroup(g, normal)?;
            ensure(k.characteristic() == *p && *p != 0, "characteristic mismatch")?;
            ensure(n.order() as u64 == *p && n.is_normal(), "not a normal subgroup of order p")?;
            let q = lib(g.quotient(&n))?.0;
            ensure(same_group(sub, &q), "used step is not about G/N")?;
            ensure(sub.answer == answer, "answer differs from G/N")
        }
        (Rule::Abelian, p @ Premise::Abelian { .. }) => {
            let g = cx.group()?;
            cx.used(0)?;
            ensure(abelian_premise(g, k).as_ref() == Some(p), "abelian premises do not recompute")?;
            ensure(abelian_answer(p) == answer && answer.is_decisive(), "answer does not follow")
        }
        (
            rule @ (Rule::CyclicTwoPower | Rule::SplitTwoPowerQuotient | Rule::RationalTwoPowerQuotient),
            Premise::TwoPowerQuotient { normal, n, complement, cyclotomic_cyclic },
        ) => {
            let g = cx.group()?;
            cx.used(0)?;
            let h = subgroup(g, normal)?;
            ensure(
                lib(cyclic_two_power_quotient(g, &h))? == Some(*n),
                "quotient is not the claimed 2-power cyclic group",
            )?;
            ensure(k.cyclotomic_2power_cyclic(*n) == *cyclotomic_cyclic, "cyclotomic oracle changed")?;
            ensure(answer == Answer::No, "rule only concludes No")?;
            let odd_char = k.characteristic() != 2;
            match rule {
                Rule::CyclicTwoPower => {
                    ensure(h.is_trivial() && *cyclotomic_cyclic == Tri::No && odd_char, "hypotheses fail")
                }
                Rule::RationalTwoPowerQuotient => {
                    ensure(k.kind() == FieldKind::Rationals && *n >= 3, "hypotheses fail")
                }
                _ => {
                    let x = complement.ok_or("no complement recorded")?;
                    ensure(*cyclotomic_cyclic == Tri::No && odd_char, "hypotheses fail")?;
                    ensure(
                        x < g.order() && {
                            let c = g.closure(&[x]);
                            c.len() == 1 << n && c.iter().filter(|&&y| h.contains(y)).count() == 1
                        },
                        "complement does not split the quotient",
                    )
                }
            }
        }
        (Rule::AbelianByCyclic, Premise::AbelianByCyclic { normal, tau, e_prime, root_of_unity }) => {
            let g = cx.group()?;
            cx.used(0)?;
            let w = CyclicQuotientWitness { subgroup: subgroup(g, normal)?, tau: *tau, e_prime: *e_prime };
            ensure(*tau < g.order() && w.verify(g), "witness fails")?;
            ensure(k.has_root_of_unity(*e_prime) == Tri::Yes && *root_of_unity == Tri::Yes, "ζ_e' not in k")?;
            ensure(answer == Answer::Yes, "rule only concludes Yes")
        }
        (Rule::ExponentP, p @ Premise::ExponentP { .. }) => {
            let g = cx.group()?;
            cx.used(0)?;
            ensure(
                exponent_p_premise(g).as_ref() == Some(p),
                "not a non-abelian exponent-p group of order p^3 or p^4",
            )?;
            ensure(answer == Answer::Yes, "rule only concludes Yes")
        }
        (Rule::DirectProduct, Premise::DirectProduct { left, right }) => {
            let g = cx.group()?;
            let (a, b) = (subgroup(g, left)?, subgroup(g, right)?);
            let meet = a.members().iter().filter(|&&x| b.contains(x)).count();
            ensure(
                a.is_normal() && b.is_normal() && meet == 1 && a.order() * b.order() == g.order(),
                "not an internal direct product",
            )?;
            let ga = g.subgroup_as_group(&a).0;
            let gb = g.subgroup_as_group(&b).0;
            match answer {
                Answer::No => {
                    let [s] = cx.used(1)?[..] else { unreachable!() };
                    ensure((same_group(s, &ga) || same_group(s, &gb)) && s.answer == Answer::No, "no factor is No")
                }
                Answer::Yes => {
                    let [sa, sb] = cx.used(2)?[..] else { unreachable!() };
                    ensure(same_group(sa, &ga) && same_group(sb, &gb), "used steps are not the factors")?;
                    ensure(sa.answer == Answer::Yes && sb.answer == Answer::Yes, "a factor is not Yes")
                }
                Answer::Unknown => Err("undecided conclusion".into()),
            }
        }
        (rule @ (Rule::SemidirectNecessity | Rule::CoprimeSemidirect), Premise::Semidirect { normal, complement }) => {
            let g = cx.group()?;
            let s = Semidirect { normal: subgroup(g, normal)?, complement: subgroup(g, complement)? };
            ensure(s.verify(g), "not a semidirect product")?;
            let g0 = g.subgroup_as_group(&s.complement).0;
            if rule == Rule::SemidirectNecessity {
                let [sub] = cx.used(1)?[..] else { unreachable!() };
                ensure(same_group(sub, &g0) && sub.answer == Answer::No, "complement is not No")?;
                ensure(answer == Answer::No, "rule only concludes No")
            } else {
                let [sn, s0] = cx.used(2)?[..] else { unreachable!() };
                let gn = g.subgroup_as_group(&s.normal).0;
                ensure(s.normal.is_abelian(g), "normal factor is not abelian")?;
                ensure(
                    arith::gcd(s.normal.order() as u64, s.complement.order() as u64) == 1,
                    "orders are not coprime",
                )?;
                ensure(same_group(sn, &gn) && same_group(s0, &g0), "used steps are not the factors")?;
                ensure(sn.answer == Answer::Yes && s0.answer == Answer::Yes, "a factor is not Yes")?;
                ensure(answer == Answer::Yes, "rule only concludes Yes")
            }
        }
        (Rule::ZGroup, Premise::ZGroup { presentation }) => {
            let g = cx.group()?;
            cx.used(0)?;
            ensure(presentation.verify(g) && answer == Answer::Yes, "presentation fails")
        }
        (Rule::Torus, p @ Premise::FlabbyClass { invertible, .. }) => {
            let m = cx.lattice()?;
            cx.used(0)?;
            ensure(&lib(flabby_premise(m))? == p, "flabby class does not recompute")?;
            ensure(answer == if *invertible { Answer::Yes } else { Answer::No }, "answer does not follow")
        }
        (Rule::CyclicMultiplicative, Premise::ActionKernel { kernel }) => {
            let m = cx.lattice()?;
            let [sub] = cx.used(1)?[..] else { unreachable!() };
            let g = m.group();
            ensure(g.is_cyclic(), "group is not cyclic")?;
            let ker = m.action_kernel();
            ensure(ker.members() == kernel.as_slice(), "kernel does not recompute")?;
            ensure(same_group(sub, &lib(g.quotient(&ker))?.0), "used step is not about the faithful quotient")?;
            ensure(sub.answer == answer, "answer differs from the quotient's")
        }
        (Rule::ZGroupMultiplicative, Premise::Consumed) => {
            let m = cx.lattice()?;
            let [sub, z] = cx.used(2)?[..] else { unreachable!() };
            ensure(same_group(sub, m.group()) && sub.answer == Answer::Yes, "k(G) is not Yes")?;
            ensure(same_group(z, m.group()) && z.rule == Rule::ZGroup, "no Z-group step")?;
            ensure(answer == Answer::Yes, "rule only concludes Yes")
        }
        (Rule::FaithfulInvertible, p @ Premise::FlabbyClass { invertible, .. }) => {
            let m = cx.lattice()?;
            let [sub] = cx.used(1)?[..] else { unreachable!() };
            ensure(m.is_faithful() && *invertible, "lattice is not faithful with invertible flabby class")?;
            ensure(&lib(flabby_premise(m))? == p, "flabby class does not recompute")?;
            ensure(same_group(sub, m.group()) && sub.answer == answer, "answer differs from k(G)")
        }
        (Rule::MonomialUniversal, Premise::SylowSubgroups { all_cyclic }) => {
            let g = cx.group()?;
            ensure(all_sylow_cyclic(g) == *all_cyclic, "Sylow data does not recompute")?;
            if *all_cyclic {
                let [z] = cx.used(1)?[..] else { unreachable!() };
                ensure(same_group(z, g) && z.rule == Rule::ZGroup, "no Z-group step")?;
                ensure(answer == Answer::Yes, "answer does not follow")
            } else {
                cx.used(0)?;
                ensure(answer == Answer::No, "answer does not follow")
            }
        }
        (Rule::MonomialComplex, Premise::Consumed) => {
            let a = cx.monomial()?;
            let [z] = cx.used(1)?[..] else { unreachable!() };
            ensure(k.kind() == FieldKind::Complex, "field is not C")?;
            ensure(same_group(z, a.lattice().group()) && z.rule == Rule::ZGroup, "no Z-group step")?;
            ensure(answer == Answer::Yes, "rule only concludes Yes")
        }
        (Rule::MonomialInvertible, Premise::InvertibleLattice { faithful, coefficient_order: c }) => {
            let a = cx.monomial()?;
            let [sub] = cx.used(1)?[..] else { unreachable!() };
            ensure(*faithful && a.is_faithful(), "action on M_α is not faithful")?;
            ensure(coefficient_order(a) == *c && k.has_root_of_unity(*c) == Tri::Yes, "coefficients not in k")?;
            ensure(lib(is_invertible(a.lattice()))?.invertible, "lattice is not invertible")?;
            ensure(same_group(sub, a.lattice().group()) && sub.answer == Answer::Yes, "k(G) is not Yes")?;
            ensure(answer == Answer::Yes, "rule only concludes Yes")
        }
        (Rule::MonomialRescaling, Premise::Rescaling { modulus, b }) => {
            let a = cx.monomial()?;
            let [sub] = cx.used(1)?[..] else { unreachable!() };
            let n = a.lattice().group().order() as u64;
            ensure(b.len() == a.lattice().rank(), "rescaling has the wrong length")?;
            let widened = if *modulus == a.modulus() {
                a.clone()
            } else if *modulus == a.modulus() * n {
                a.widen(n)
            } else {
                return Err("unexpected modulus".into());
            };
            ensure(b.iter().all(|&x| x < *modulus), "rescaling entries out of range")?;
            ensure(widened.rescale(b).is_purely_monomial(), "rescaling leaves coefficients")?;
            ensure(k.has_root_of_unity(*modulus) == Tri::Yes, "rescaling roots not in k")?;
            ensure(
                matches!(&sub.subject, Subject::Lattice(m) if m == a.lattice()) && sub.answer == answer,
                "answer differs from the purely monomial action's",
            )
        }
        _ => Err("premises do not match the rule".into()),
    }
}
