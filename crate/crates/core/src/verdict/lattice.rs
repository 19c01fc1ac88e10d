//! Verdicts for algebraic tori, multiplicative invariant fields and monomial
//! actions.

use std::sync::Arc;

use super::engine::Engine;
use super::{chain, decided, Answer, FieldDescriptor, FieldKind, Premise, Rule, Subject, Tri, Verdict};
use crate::arith;
use crate::error::Result;
use crate::groups::{all_sylow_cyclic, zgroup_presentation, FiniteGroup};
use crate::lattices::GLattice;
use crate::monomial::{extension_class, MonomialAction};
use crate::resolutions::{flabby_class_invertible, is_invertible};

fn brauer_implication(field: &str) -> String {
    format!("the unramified Brauer group of {field} over k is Br(k) (Theorem 3.2)")
}

pub(crate) fn flabby_premise(m: &GLattice) -> Result<Premise> {
    let (res, dec) = flabby_class_invertible(m)?;
    Ok(Premise::FlabbyClass {
        p_rank: res.p.rank(),
        f_rank: res.f.rank(),
        invertible: dec.invertible,
        reason: dec.reason.as_str().into(),
    })
}

/// Is `K(M)^π` retract `k`-rational, for `π = Gal(K/k)` acting on `M`?
/// Decided exactly: the criterion is an equivalence.
pub fn torus_verdict(m: &GLattice) -> Result<Verdict> {
    let premise = flabby_premise(m)?;
    let answer = match premise {
        Premise::FlabbyClass { invertible: true, .. } => Answer::Yes,
        _ => Answer::No,
    };
    let mut v = decided(chain(&[], Rule::Torus, Subject::Lattice(m.clone()), premise, answer));
    v.implications = match answer {
        Answer::Yes => vec![brauer_implication("K(M)^π")],
        _ => vec!["the torus with character lattice M is not retract rational, hence not stably rational".into()],
    };
    Ok(v)
}

fn multiplicative(engine: &mut Engine<'_>, m: &GLattice) -> Result<Verdict> {
    let g = m.group().clone();
    let subject = Subject::Lattice(m.clone());
    if g.is_cyclic() {
        let kernel = m.action_kernel();
        let q = Arc::new(g.quotient(&kernel)?.0);
        let sub = engine.noether(&q)?;
        if sub.answer.is_decisive() {
            let premise = Premise::ActionKernel { kernel: kernel.members().to_vec() };
            return Ok(decided(chain(&[&sub], Rule::CyclicMultiplicative, subject, premise, sub.answer)));
        }
        return Ok(Verdict::unknown(sub.trace));
    }
    if let Some(pres) = zgroup_presentation(&g) {
        let sub = engine.noether(&g)?;
        if sub.answer == Answer::Yes {
            let z = zgroup_step(&g, pres);
            return Ok(decided(chain(
                &[&sub, &z],
                Rule::ZGroupMultiplicative,
                subject,
                Premise::Consumed,
                Answer::Yes,
            )));
        }
    }
    if m.is_faithful() {
        let premise = flabby_premise(m)?;
        if matches!(premise, Premise::FlabbyClass { invertible: true, .. }) {
            let sub = engine.noether(&g)?;
            if sub.answer.is_decisive() {
                return Ok(decided(chain(&[&sub], Rule::FaithfulInvertible, subject, premise, sub.answer)));
            }
            return Ok(Verdict::unknown(sub.trace));
        }
    }
    Ok(Verdict::unknown(Vec::new()))
}

fn zgroup_step(g: &Arc<FiniteGroup>, pres: crate::groups::ZGroupPresentation) -> Verdict {
    decided(chain(&[], Rule::ZGroup, Subject::Group(g.clone()), Premise::ZGroup { presentation: pres }, Answer::Yes))
}

/// Is `k(M)^G` retract `k`-rational, `G` acting purely monomially?
pub fn multiplicative_verdict(m: &GLattice, k: &FieldDescriptor) -> Result<Verdict> {
    let mut engine = Engine::new(k);
    let mut v = multiplicative(&mut engine, m)?;
    if v.answer == Answer::Yes {
        v.implications = vec![brauer_implication("k(M)^G")];
    }
    Ok(v)
}

/// Over `C`: is `C_α(M)^G` retract rational for every lattice and every
/// extension `α`?
pub fn monomial_universal_verdict(g: &FiniteGroup) -> Verdict {
    let g = Arc::new(g.clone());
    let subject = Subject::Group(g.clone());
    let premise = Premise::SylowSubgroups { all_cyclic: all_sylow_cyclic(&g) };
    let mut v = match zgroup_presentation(&g) {
        Some(pres) => {
            let z = zgroup_step(&g, pres);
            decided(chain(&[&z], Rule::MonomialUniversal, subject, premise, Answer::Yes))
        }
        None => decided(chain(&[], Rule::MonomialUniversal, subject, premise, Answer::No)),
    };
    v.implications = match v.answer {
        Answer::Yes => vec!["Br_v(C_α(M)^G) = 0 for every G-lattice M and every extension α (Theorem 6.6)".into()],
        _ => vec![
            "some G-lattice M and extension α have C_α(M)^G not retract C-rational and Br_v(C_α(M)^G) ≠ 0 (Theorem 6.6)"
                .into(),
        ],
    };
    v
}

/// Order of the subgroup of `μ_d` generated by all coefficients.
pub(crate) fn coefficient_order(a: &MonomialAction) -> u64 {
    let d = a.modulus();
    let g = a.lattice().group().order();
    let mut gcd = d;
    for x in 0..g {
        for &c in a.coefficients(x) {
            gcd = arith::gcd(gcd, c);
        }
    }
    d / gcd
}

/// Is `k_α(M)^G` retract `k`-rational for this particular action?
pub fn monomial_instance_verdict(a: &MonomialAction, k: &FieldDescriptor) -> Result<Verdict> {
    let mut engine = Engine::new(k);
    let g = a.lattice().group().clone();
    let subject = Subject::Monomial(a.clone());
    let mut v = 'decide: {
        if k.kind() == FieldKind::Complex {
            if let Some(pres) = zgroup_presentation(&g) {
                let z = zgroup_step(&g, pres);
                break 'decide decided(chain(&[&z], Rule::MonomialComplex, subject, Premise::Consumed, Answer::Yes));
            }
        }
        let c_order = coefficient_order(a);
        if k.has_root_of_unity(c_order) != Tri::Yes {
            // the coefficients are not known to lie in k
            break 'decide Verdict::unknown(Vec::new());
        }
        if a.is_faithful() && is_invertible(a.lattice())?.invertible {
            let sub = engine.noether(&g)?;
            if sub.answer == Answer::Yes {
                let premise = Premise::InvertibleLattice { faithful: true, coefficient_order: c_order };
                break 'decide decided(chain(&[&sub], Rule::MonomialInvertible, subject, premise, Answer::Yes));
            }
        }
        let ext = extension_class(a)?;
        let n = g.order() as u64;
        let rescaling = match (&ext.rescaling, &ext.stable_rescaling) {
            (Some(b), _) if k.has_root_of_unity(a.modulus()) == Tri::Yes => Some((a.modulus(), b.clone())),
            (_, Some(b)) if k.has_root_of_unity(a.modulus() * n) == Tri::Yes => Some((a.modulus() * n, b.clone())),
            _ => None,
        };
        if let Some((modulus, b)) = rescaling {
            let sub = multiplicative(&mut engine, a.lattice())?;
            if sub.answer.is_decisive() {
                let premise = Premise::Rescaling { modulus, b };
                break 'decide decided(chain(&[&sub], Rule::MonomialRescaling, subject, premise, sub.answer));
            }
        }
        Verdict::unknown(Vec::new())
    };
    if v.answer == Answer::Yes {
        v.implications = vec![brauer_implication("k_α(M)^G")];
    }
    Ok(v)
}
