//! Rule engine for retract rationality of `k(G)`, `k(M)^G` and `k_α(M)^G`.
//!
//! A verdict carries the ordered list of rule applications that produced it.
//! Steps that combine sub-verdicts point at the concluding steps of those
//! sub-verdicts through `uses`, so a trace is a DAG flattened in evaluation
//! order. `replay` re-checks every step from scratch.

mod engine;
mod field;
mod lattice;
mod replay;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub use engine::noether_verdict;
pub use field::{FieldDescriptor, FieldKind, Tri};
pub use lattice::{monomial_instance_verdict, monomial_universal_verdict, multiplicative_verdict, torus_verdict};
pub use replay::replay;

use crate::groups::{FiniteGroup, ZGroupPresentation};
use crate::lattices::GLattice;
use crate::monomial::MonomialAction;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Answer {
    Yes,
    No,
    Unknown,
}

impl Answer {
    pub fn is_decisive(self) -> bool {
        self != Answer::Unknown
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Answer::Yes => "Yes",
            Answer::No => "No",
            Answer::Unknown => "Unknown",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    CharReduction,
    Abelian,
    CyclicTwoPower,
    SplitTwoPowerQuotient,
    RationalTwoPowerQuotient,
    AbelianByCyclic,
    ExponentP,
    DirectProduct,
    SemidirectNecessity,
    CoprimeSemidirect,
    ZGroup,
    Torus,
    CyclicMultiplicative,
    ZGroupMultiplicative,
    FaithfulInvertible,
    MonomialUniversal,
    MonomialComplex,
    MonomialInvertible,
    MonomialRescaling,
}

impl Rule {
    pub fn id(self) -> &'static str {
        match self {
            Rule::CharReduction => "R1",
            Rule::Abelian => "R2",
            Rule::CyclicTwoPower | Rule::SplitTwoPowerQuotient | Rule::RationalTwoPowerQuotient => "R3",
            Rule::AbelianByCyclic => "R4",
            Rule::ExponentP => "R5",
            Rule::DirectProduct => "R6",
            Rule::SemidirectNecessity => "R7",
            Rule::CoprimeSemidirect => "R8",
            Rule::ZGroup => "Z",
            Rule::Torus => "T",
            Rule::CyclicMultiplicative => "X1",
            Rule::ZGroupMultiplicative => "X2",
            Rule::FaithfulInvertible => "X3",
            Rule::MonomialUniversal => "U",
            Rule::MonomialComplex => "M1",
            Rule::MonomialInvertible => "M2",
            Rule::MonomialRescaling => "M3",
        }
    }

    pub fn cite(self) -> &'static str {
        match self {
            Rule::CharReduction => "Theorem 3.6, Lemma 3.4(i)",
            Rule::Abelian => "Theorem 3.7",
            Rule::CyclicTwoPower => "Theorem 2.9",
            Rule::SplitTwoPowerQuotient => "Corollary 2.10",
            Rule::RationalTwoPowerQuotient => "Remark after Corollary 2.10",
            Rule::AbelianByCyclic => "Theorem 5.10",
            Rule::ExponentP => "Example 3.8",
            Rule::DirectProduct => "Lemma 3.4(ii)",
            Rule::SemidirectNecessity => "Theorem 3.5(1)",
            Rule::CoprimeSemidirect => "Theorem 3.5(2)",
            Rule::ZGroup => "Theorem 5.6",
            Rule::Torus => "Theorem 2.8",
            Rule::CyclicMultiplicative => "Theorem 5.5",
            Rule::ZGroupMultiplicative => "Theorem 5.7",
            Rule::FaithfulInvertible => "Theorem 5.4",
            Rule::MonomialUniversal | Rule::MonomialComplex => "Theorem 6.6",
            Rule::MonomialInvertible => "Theorem 6.3",
            Rule::MonomialRescaling => "Definition 2.1",
        }
    }
}

/// What a step is about.
#[derive(Clone, Debug)]
pub enum Subject {
    Group(Arc<FiniteGroup>),
    Lattice(GLattice),
    Monomial(MonomialAction),
}

impl Subject {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        match self {
            Subject::Group(g) => g,
            Subject::Lattice(m) => m.group(),
            Subject::Monomial(a) => a.lattice().group(),
        }
    }

    fn to_value(&self) -> Value {
        let g = self.group();
        let mut v = json!({"group_order": g.order()});
        if let Some(n) = g.name() {
            v["group_name"] = json!(n);
        }
        match self {
            Subject::Group(_) => v["kind"] = json!("group"),
            Subject::Lattice(m) => {
                v["kind"] = json!("lattice");
                v["rank"] = json!(m.rank());
            }
            Subject::Monomial(a) => {
                v["kind"] = json!("monomial");
                v["rank"] = json!(a.lattice().rank());
                v["d"] = json!(a.modulus());
            }
        }
        v
    }
}

/// The facts a rule was applied on. Subgroups are member lists in the step's
/// group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Premise {
    CharReduction {
        p: u64,
        normal: Vec<usize>,
    },
    Abelian {
        exponent: u64,
        two_power: u32,
        characteristic: u64,
        cyclotomic_cyclic: Tri,
    },
    TwoPowerQuotient {
        normal: Vec<usize>,
        n: u32,
        complement: Option<usize>,
        cyclotomic_cyclic: Tri,
    },
    AbelianByCyclic {
        normal: Vec<usize>,
        tau: usize,
        e_prime: u64,
        root_of_unity: Tri,
    },
    ExponentP {
        p: u64,
        order: u64,
    },
    DirectProduct {
        left: Vec<usize>,
        right: Vec<usize>,
    },
    Semidirect {
        normal: Vec<usize>,
        complement: Vec<usize>,
    },
    ZGroup {
        presentation: ZGroupPresentation,
    },
    SylowSubgroups {
        all_cyclic: bool,
    },
    /// Everything the step needs is in the steps it uses.
    Consumed,
    FlabbyClass {
        p_rank: usize,
        f_rank: usize,
        invertible: bool,
        reason: String,
    },
    ActionKernel {
        kernel: Vec<usize>,
    },
    InvertibleLattice {
        faithful: bool,
        coefficient_order: u64,
    },
    Rescaling {
        modulus: u64,
        b: Vec<u64>,
    },
}

#[derive(Clone, Debug)]
pub struct Step {
    pub rule: Rule,
    pub subject: Subject,
    pub premise: Premise,
    /// Indices of earlier steps whose conclusions this step consumes.
    pub uses: Vec<usize>,
    pub answer: Answer,
}

impl Step {
    pub fn to_value(&self) -> Value {
        json!({
            "rule": self.rule.id(),
            "cite": self.rule.cite(),
            "answer": self.answer,
            "subject": self.subject.to_value(),
            "premises": self.premise,
            "uses": self.uses,
        })
    }
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub answer: Answer,
    pub trace: Vec<Step>,
    pub implications: Vec<String>,
}

impl Verdict {
    fn unknown(trace: Vec<Step>) -> Self {
        Verdict { answer: Answer::Unknown, trace, implications: Vec::new() }
    }

    /// The step that concluded a decisive verdict.
    pub fn conclusion(&self) -> Option<&Step> {
        if self.answer.is_decisive() {
            self.trace.last()
        } else {
            None
        }
    }

    pub fn cites(&self, cite: &str) -> bool {
        self.trace.iter().any(|s| s.rule.cite() == cite)
    }

    pub fn to_value(&self) -> Value {
        json!({
            "answer": self.answer,
            "trace": self.trace.iter().map(Step::to_value).collect::<Vec<_>>(),
            "implications": self.implications,
        })
    }
}

/// Appends `sub`'s trace with indices shifted and returns the position of its
/// last step.
fn absorb(trace: &mut Vec<Step>, sub: &Verdict) -> usize {
    let off = trace.len();
    trace.extend(sub.trace.iter().map(|s| Step { uses: s.uses.iter().map(|u| u + off).collect(), ..s.clone() }));
    trace.len() - 1
}

/// A trace ending in a step that consumes the conclusions of `subs`.
fn chain(subs: &[&Verdict], rule: Rule, subject: Subject, premise: Premise, answer: Answer) -> Vec<Step> {
    let mut trace = Vec::new();
    let mut uses = Vec::with_capacity(subs.len());
    for s in subs {
        uses.push(absorb(&mut trace, s));
    }
    trace.push(Step { rule, subject, premise, uses, answer });
    trace
}

fn decided(trace: Vec<Step>) -> Verdict {
    let answer = trace.last().map_or(Answer::Unknown, |s| s.answer);
    Verdict { answer, trace, implications: Vec::new() }
}
