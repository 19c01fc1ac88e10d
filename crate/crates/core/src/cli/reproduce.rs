//! Reproduction suites: the lattice `I_q` behind the failure of retract
//! rationality of `Q(C_{2^n})`, and the Endo–Miyata consistency run.

use std::sync::Arc;

use serde_json::{json, Value};

use crate::cohomology::{self, SubgroupMode};
use crate::error::{Error, Result};
use crate::groups::{all_sylow_cyclic, catalog, catalog_names, cyclic, FiniteGroup};
use crate::lattices::{lattice_to_value, lenstra_lattice};
use crate::random::{random_lattice, rng};
use crate::resolutions::{flabby_class_invertible, flabby_resolution, is_invertible};
use crate::verdict::{noether_verdict, torus_verdict, FieldDescriptor};

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub expected: Value,
    pub observed: Value,
}

impl Check {
    fn new(name: impl Into<String>, expected: impl Into<Value>, observed: impl Into<Value>) -> Self {
        Check { name: name.into(), expected: expected.into(), observed: observed.into() }
    }

    pub fn passed(&self) -> bool {
        self.expected == self.observed
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub suite: &'static str,
    pub params: Value,
    pub checks: Vec<Check>,
    pub details: Value,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn to_value(&self) -> Value {
        json!({
            "suite": self.suite,
            "params": self.params,
            "pass": self.passed(),
            "checks": self.checks.iter().map(|c| json!({
                "name": c.name,
                "expected": c.expected,
                "observed": c.observed,
                "pass": c.passed(),
            })).collect::<Vec<_>>(),
            "details": self.details,
        })
    }
}

/// `I_q` for `q = 2^n`, `3 ≤ n ≤ 6`: coflabby, not flabby, with
/// `Ĥ⁻¹ = Z/2` on the Klein four subgroup, so its flabby class is not
/// invertible and `Q(C_q)` is not retract rational.
pub fn voskresenskii(n: u32) -> Result<Report> {
    if !(3..=6).contains(&n) {
        return Err(Error::invalid(format!("voskresenskii needs 3 <= n <= 6, got {n}")));
    }
    let data = lenstra_lattice(n)?;
    let m = &data.m;
    let pi = &data.pi;
    let prof = cohomology::profile(m, SubgroupMode::All)?;

    let klein: Vec<_> = pi.subgroups()?.iter().filter(|s| s.order() == 4 && !s.is_cyclic(pi)).cloned().collect();
    let pi0 = klein.first().ok_or_else(|| Error::internal("(Z/q)^x has no Klein four subgroup"))?;
    let at_pi0 = prof.entry(pi0.members()).ok_or_else(|| Error::internal("profile misses a subgroup"))?;
    let shape = match (prof.is_flabby, prof.is_coflabby) {
        (true, true) => "flabby and coflabby",
        (false, true) => "coflabby, not flabby",
        (true, false) => "flabby, not coflabby",
        (false, false) => "neither",
    };

    let res = flabby_resolution(m)?;
    let dec = is_invertible(&res.f)?;
    let torus = torus_verdict(m)?;
    let noether = noether_verdict(&cyclic(data.q as usize), &FieldDescriptor::rationals())?;

    let checks = vec![
        Check::new("h1 trivial on every subgroup", true, prof.is_coflabby),
        Check::new("subgroups isomorphic to C2xC2", 1, klein.len()),
        Check::new("h_minus1 at C2xC2", json!([2]), json!(at_pi0.h_minus1.divisors_u64())),
        Check::new("profile", "coflabby, not flabby", shape),
        Check::new("resolution exact", true, res.verify_exactness()),
        Check::new("flabby class invertible", false, dec.invertible),
        Check::new("torus verdict", "No", torus.answer.to_string()),
        Check::new(format!("Q(C{}) verdict", data.q), "No", noether.answer.to_string()),
    ];
    Ok(Report {
        suite: "voskresenskii",
        params: json!({"n": n, "q": data.q}),
        checks,
        details: json!({
            "rank": m.rank(),
            "pi0": pi0.members(),
            "profile": prof.to_value(),
            "resolution": {"P_rank": res.p.rank(), "F_rank": res.f.rank()},
            "invertibility": {"invertible": dec.invertible, "reason": dec.reason.as_str()},
            "torus_verdict": torus.to_value(),
            "noether_verdict": noether.to_value(),
        }),
    })
}

/// Groups with all Sylow subgroups cyclic of order at most `max_order`:
/// cyclic groups first, then the remaining catalog groups.
pub fn zgroups_up_to(max_order: usize) -> Result<Vec<(String, Arc<FiniteGroup>)>> {
    if max_order > 64 {
        return Err(Error::invalid(format!("--max-order is limited to 64, got {max_order}")));
    }
    let mut out: Vec<(String, Arc<FiniteGroup>)> =
        (2..=max_order).map(|n| (format!("C{n}"), Arc::new(cyclic(n)))).collect();
    for name in catalog_names() {
        let g = catalog(&name)?;
        if g.order() <= max_order && !g.is_cyclic() && all_sylow_cyclic(&g) {
            out.push((name, Arc::new(g)));
        }
    }
    Ok(out)
}

fn name_hash(name: &str) -> u64 {
    // FNV-1a, so each group's stream depends only on the seed and its name
    name.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
}

/// Every flabby class over a group with cyclic Sylow subgroups is
/// invertible; checks this on `trials` random lattices of rank at most
/// `max_rank` per group.
pub fn endo_miyata_on(
    groups: &[(String, Arc<FiniteGroup>)],
    trials: usize,
    seed: u64,
    max_rank: usize,
) -> Result<Report> {
    let mut checks = Vec::new();
    let mut details = Vec::new();
    for (name, g) in groups {
        if !all_sylow_cyclic(g) {
            return Err(Error::invalid(format!("{name} has a non-cyclic Sylow subgroup")));
        }
        let mut r = rng(seed ^ name_hash(name));
        let mut invertible = 0;
        let mut failures = Vec::new();
        let mut ranks = Vec::with_capacity(trials);
        for _ in 0..trials {
            let m = random_lattice(&mut r, g, max_rank)?;
            let (res, dec) = flabby_class_invertible(&m)?;
            ranks.push(json!([m.rank(), res.f.rank()]));
            if dec.invertible && dec.verify_witness() {
                invertible += 1;
            } else {
                failures.push(lattice_to_value(&m));
            }
        }
        checks.push(Check::new(format!("{name}: invertible flabby classes"), trials, invertible));
        details.push(json!({
            "group": name,
            "order": g.order(),
            "ranks": ranks,
            "failures": failures,
        }));
    }
    Ok(Report {
        suite: "endo-miyata",
        params: json!({"trials": trials, "seed": seed, "max_rank": max_rank}),
        checks,
        details: Value::Array(details),
    })
}

pub fn endo_miyata(max_order: usize, trials: usize, seed: u64) -> Result<Report> {
    let groups = zgroups_up_to(max_order)?;
    let mut report = endo_miyata_on(&groups, trials, seed, 5)?;
    report.params["max_order"] = json!(max_order);
    Ok(report)
}
