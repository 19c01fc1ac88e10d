//! Acceptance criteria, one line per criterion.
//!
//! Runs without the libtest harness so the summary is always printed. Exits
//! non-zero if any criterion fails other than those listed in
//! `DOCUMENTED_FAILURES`, and also if one of those starts passing (so the
//! list cannot go stale).

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use flasque::cli::reproduce::endo_miyata_on;
use flasque::cohomology::{h1, profile, tate_minus1, SubgroupMode};
use flasque::groups::{all_sylow_cyclic, catalog, catalog_names, cyclic, parse_group, FiniteGroup, Subgroup};
use flasque::lattices::{lenstra_lattice, permutation_lattice, GLattice, LenstraData};
use flasque::monomial::{extension_class, parse_monomial_action};
use flasque::random::{random_lattice, random_matrix, random_permutation_lattice, rng};
use flasque::resolutions::{class_fingerprint, flabby_class_invertible, is_invertible, InvertibilityDecision};
use flasque::verdict::{monomial_universal_verdict, noether_verdict, replay, torus_verdict, Answer, FieldDescriptor};
use flasque::zlinalg::{smith_normal_form, solve_integer, IntMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde_json::json;

/// Criterion 9 expects `vanishes_stably = true` for `x ↦ −x` over `C2`
/// (`d = 2`). The group acts trivially on the coefficients, so coboundaries
/// vanish and the class `σ ↦ 2 ∈ Z/4` survives; the brute-force oracle below
/// agrees with the library that it does not vanish.
const DOCUMENTED_FAILURES: &[u32] = &[9];

struct Outcome {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { failures: Vec::new(), notes: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn within(&mut self, t: Instant, limit: Duration) {
        let e = t.elapsed();
        self.check(e < limit, || format!("took {e:.1?}, limit {limit:?}"));
    }
}

fn lenstra(n: u32) -> LenstraData {
    lenstra_lattice(n).unwrap()
}

/// The subgroups of `π` that are Klein four groups.
fn klein_subgroups(pi: &FiniteGroup) -> Vec<Subgroup> {
    pi.subgroups().unwrap().iter().filter(|s| s.order() == 4 && !s.is_cyclic(pi)).cloned().collect()
}

fn criterion_1() -> Outcome {
    let mut o = Outcome::new();
    let t = Instant::now();
    for n in [3, 4] {
        let d = lenstra(n);
        let q = d.q;
        let prof = profile(&d.m, SubgroupMode::All).unwrap();
        let all = d.pi.subgroups().unwrap().len();
        o.check(prof.entries.len() == all, || {
            format!("q={q}: profile covers {} of {all} subgroups", prof.entries.len())
        });
        for e in &prof.entries {
            o.check(e.h1.is_trivial(), || format!("q={q}: H1 nonzero at {:?}", e.subgroup.members()));
        }
        let klein = klein_subgroups(&d.pi);
        o.check(klein.len() == 1, || format!("q={q}: {} Klein four subgroups", klein.len()));
        if let Some(pi0) = klein.first() {
            let hm1 = tate_minus1(pi0, &d.m).unwrap().divisors_u64();
            o.check(hm1 == [2], || format!("q={q}: Ĥ⁻¹(π₀) = {hm1:?}"));
        }
        o.check(prof.is_coflabby && !prof.is_flabby, || format!("q={q}: not 'coflabby, not flabby'"));
        o.note(format!("q={q}: Ĥ⁻¹(C2xC2)=Z/2, coflabby, not flabby"));
    }
    o.within(t, Duration::from_secs(10));
    o
}

fn criterion_2() -> Outcome {
    let mut o = Outcome::new();
    let t = Instant::now();
    for n in [3, 4] {
        let d = lenstra(n);
        let (res, dec) = flabby_class_invertible(&d.m).unwrap();
        o.check(res.verify_exactness(), || format!("q={}: resolution not exact", d.q));
        o.check(!dec.invertible, || format!("q={}: flabby class decided invertible", d.q));
        let v = torus_verdict(&d.m).unwrap();
        o.check(v.answer == Answer::No, || format!("q={}: torus verdict {}", d.q, v.answer));
        o.check(replay(&v, &FieldDescriptor::rationals()).is_ok(), || {
            format!("q={}: torus trace does not replay", d.q)
        });
        o.note(format!("q={}: rank F={} not invertible ({})", d.q, res.f.rank(), dec.reason.as_str()));
    }
    o.within(t, Duration::from_secs(60));
    o
}

fn criterion_3() -> Outcome {
    let mut o = Outcome::new();
    let t = Instant::now();
    let mut count = 0;
    for name in catalog_names() {
        let g = Arc::new(catalog(&name).unwrap());
        let mut r = rng(3000 + g.order() as u64);
        for i in 0..20 {
            let p = random_permutation_lattice(&mut r, &g, 3, 24).unwrap();
            let prof = profile(&p, SubgroupMode::All).unwrap();
            o.check(prof.is_flabby && prof.is_coflabby, || {
                format!("{name} #{i}: rank {} not flabby+coflabby", p.rank())
            });
            count += 1;
        }
    }
    o.note(format!("{count} permutation lattices"));
    o.within(t, Duration::from_secs(60));
    o
}

fn criterion_4() -> Outcome {
    let mut o = Outcome::new();
    let t = Instant::now();
    let mut groups: Vec<(String, Arc<FiniteGroup>)> =
        (2..=12).map(|n| (format!("C{n}"), Arc::new(cyclic(n)))).collect();
    for name in ["S3", "C6"] {
        groups.push((name.to_string(), Arc::new(catalog(name).unwrap())));
    }
    let report = endo_miyata_on(&groups, 50, 2025, 5).unwrap();
    for c in &report.checks {
        o.check(c.passed(), || format!("{}: {} of {}", c.name, c.observed, c.expected));
    }
    o.note(format!("{} groups x 50 lattices", groups.len()));
    o.within(t, Duration::from_secs(300));
    o
}

/// Checks a witness with plain matrix products, independently of
/// `verify_witness`.
fn witness_holds(m: &GLattice, d: &InvertibilityDecision) -> bool {
    let (Some(s), Some(cover)) = (&d.witness, &d.cover) else { return false };
    let g = m.group();
    (0..g.order()).all(|x| cover.p.matrix(x) * &s.matrix == &s.matrix * m.matrix(x))
        && (&cover.projection.matrix * &s.matrix).is_identity()
}

fn criterion_5() -> Outcome {
    let mut o = Outcome::new();
    let c2 = Arc::new(cyclic(2));
    let sign = GLattice::sign(c2.clone(), &c2.trivial_subgroup()).unwrap();
    o.check(!is_invertible(&sign).unwrap().invertible, || "sign lattice over C2 decided invertible".into());

    let (mut yes, mut no) = (0, 0);
    for name in ["C2", "C3", "C4", "V4", "S3", "D8", "Q8", "C6"] {
        let g = Arc::new(catalog(name).unwrap());
        let mut lattices = vec![GLattice::trivial(g.clone(), 1), GLattice::trivial(g.clone(), 3)];
        let subs = g.subgroups().unwrap().to_vec();
        for h in &subs {
            lattices.push(permutation_lattice(g.clone(), std::slice::from_ref(h)).unwrap());
        }
        let n_fixed = lattices.len();
        let mut r = rng(5000 + g.order() as u64);
        for _ in 0..10 {
            lattices.push(random_lattice(&mut r, &g, 5).unwrap());
        }
        for (i, m) in lattices.iter().enumerate() {
            let d = is_invertible(m).unwrap();
            if i < n_fixed {
                o.check(d.invertible, || format!("{name}: trivial/permutation lattice #{i} decided not invertible"));
            }
            if d.invertible {
                yes += 1;
                o.check(witness_holds(m, &d), || format!("{name} #{i}: witness fails the section equations"));
                let prof = profile(m, SubgroupMode::All).unwrap();
                o.check(prof.is_flabby && prof.is_coflabby, || {
                    format!("{name} #{i}: invertible but not flabby+coflabby")
                });
            } else {
                no += 1;
                o.check(d.witness.is_none(), || format!("{name} #{i}: No carries a witness"));
            }
        }
    }
    o.note(format!("{yes} Yes with verified witnesses, {no} No"));
    o
}

fn c3_by_c8() -> FiniteGroup {
    // C3 ⋊ C8 with the generator of C8 inverting C3, as permutations on 11 points
    parse_group(&json!({
        "perm_generators": [[2, 3, 1, 4, 5, 6, 7, 8, 9, 10, 11], [1, 3, 2, 5, 6, 7, 8, 9, 10, 11, 4]],
        "degree": 11,
    }))
    .unwrap()
}

/// Whether some normal subgroup has cyclic quotient of order `n`, by
/// checking element orders in each quotient.
fn has_cyclic_quotient(g: &FiniteGroup, n: usize) -> bool {
    g.normal_subgroups().unwrap().iter().filter(|h| g.order() == n * h.order()).any(|h| {
        let (q, _) = g.quotient(h).unwrap();
        q.element_orders().contains(&n)
    })
}

fn criterion_6() -> Outcome {
    let mut o = Outcome::new();
    let q = FieldDescriptor::rationals();
    let c = FieldDescriptor::complex();
    let mut rows = 0;
    let mut expect = |o: &mut Outcome, g: &FiniteGroup, label: &str, k: &FieldDescriptor, want: Answer, cite: &str| {
        let v = noether_verdict(g, k).unwrap();
        o.check(v.answer == want, || format!("({label}, {}): {} instead of {want}", k.label(), v.answer));
        o.check(cite.is_empty() || v.cites(cite), || format!("({label}, {}): trace does not cite {cite}", k.label()));
        o.check(replay(&v, k).is_ok(), || format!("({label}, {}): trace does not replay", k.label()));
        rows += 1;
    };
    expect(&mut o, &cyclic(8), "C8", &q, Answer::No, "Theorem 2.9");
    expect(&mut o, &cyclic(47), "C47", &q, Answer::Yes, "Theorem 3.7");
    let mut abelian: Vec<String> = (1..=16).map(|n| format!("C{n}")).collect();
    abelian.extend(
        ["V4", "C2xC4", "C2xC2xC2", "C3xC3", "C2xC6", "C2xC8", "C4xC4", "C2xC2xC4", "C2xC2xC2xC2"].map(String::from),
    );
    for name in &abelian {
        let g = catalog(name).unwrap();
        o.check(g.is_abelian() && g.order() <= 16, || format!("{name} is not an abelian group of order <= 16"));
        expect(&mut o, &g, name, &c, Answer::Yes, "Theorem 3.7");
    }
    for name in ["S3", "D8", "Q8"] {
        expect(&mut o, &catalog(name).unwrap(), name, &c, Answer::Yes, "Theorem 5.10");
    }
    let g = c3_by_c8();
    o.check(has_cyclic_quotient(&g, 8), || "C3 ⋊ C8 has no quotient C8".into());
    expect(&mut o, &g, "C3⋊C8", &q, Answer::No, "Remark after Corollary 2.10");
    o.note(format!("{rows} rows, all traces replay"));
    o
}

fn criterion_7() -> Outcome {
    let mut o = Outcome::new();
    let names = catalog_names();
    let mut r = rng(7007);
    let mut comparisons = 0;
    for i in 0..20 {
        let name = &names[r.gen_range(0..names.len())];
        let g = Arc::new(catalog(name).unwrap());
        let m = random_lattice(&mut r, &g, 4).unwrap();
        let base = class_fingerprint(&m, SubgroupMode::PrimePower).unwrap();
        for h in g.subgroups().unwrap() {
            let p = permutation_lattice(g.clone(), std::slice::from_ref(h)).unwrap();
            let fp = class_fingerprint(&m.direct_sum(&p).unwrap(), SubgroupMode::PrimePower).unwrap();
            o.check(fp == base, || format!("#{i} over {name}: fingerprint changes with Z[G/H], H = {:?}", h.members()));
            comparisons += 1;
        }
    }
    o.note(format!("20 lattices, {comparisons} comparisons"));
    o
}

fn criterion_8() -> Outcome {
    let mut o = Outcome::new();
    let mut pairs = 0;
    for name in catalog_names() {
        let g = Arc::new(catalog(&name).unwrap());
        let cyclic_subs: Vec<Subgroup> = g.subgroups().unwrap().iter().filter(|h| h.is_cyclic(&g)).cloned().collect();
        let mut r = rng(8000 + g.order() as u64);
        for i in 0..20 {
            let m = random_lattice(&mut r, &g, 5).unwrap();
            for h in &cyclic_subs {
                let a = tate_minus1(h, &m).unwrap();
                let b = h1(h, &m).unwrap();
                o.check(a == b, || format!("{name} #{i} at {:?}: Ĥ⁻¹ {:?} vs H¹ {:?}", h.members(), a, b));
                pairs += 1;
            }
        }
    }
    o.note(format!("{pairs} (subgroup, lattice) pairs"));
    o
}

/// For `C2` acting on `Z` by `x ↦ ζ_d^c · x^e`: is there `b` mod `m` with
/// `y = ζ_m^b x` purely monomial, i.e. `b(1 − e) + c·m/d ≡ 0 (mod m)`?
fn rank_one_vanishes(e: i64, c: i64, d: i64, m: i64) -> bool {
    (0..m).any(|b| (b * (1 - e) + c * (m / d)).rem_euclid(m) == 0)
}

/// All Sylow subgroups cyclic iff for each `p^a ‖ |G|` some element has
/// order `p^a`.
fn sylow_cyclic_oracle(g: &FiniteGroup) -> bool {
    let mut n = g.order();
    let mut p = 2;
    while n > 1 {
        if n.is_multiple_of(p) {
            let mut pa = 1;
            while n.is_multiple_of(p) {
                n /= p;
                pa *= p;
            }
            if !g.element_orders().contains(&pa) {
                return false;
            }
        }
        p += 1;
    }
    true
}

fn criterion_9() -> Outcome {
    let mut o = Outcome::new();
    let examples = [
        ("purely monomial, regular C3", json!({"lattice": "regular:C3", "d": 3}), (true, true), None),
        (
            "x ↦ ζ4·x⁻¹ over C2, d=4",
            json!({"group": "C2", "rank": 1, "action": {"1": [[-1]]}, "d": 4, "coeff": {"1": [1]}}),
            (false, true),
            Some((-1, 1, 4)),
        ),
        (
            "x ↦ −x over C2, d=2",
            json!({"group": "C2", "rank": 1, "action": {"1": [[1]]}, "d": 2, "coeff": {"1": [1]}}),
            (false, true),
            Some((1, 1, 2)),
        ),
    ];
    for (label, doc, (at_d, stably), oracle) in examples {
        let ext = extension_class(&parse_monomial_action(&doc).unwrap()).unwrap();
        o.check(ext.vanishes_at_d == at_d, || format!("{label}: vanishes_at_d = {}", ext.vanishes_at_d));
        o.check(ext.vanishes_stably == stably, || {
            let mut s = format!("{label}: vanishes_stably = {}, expected {stably}", ext.vanishes_stably);
            if let Some((e, c, d)) = oracle {
                s += &format!(" (brute force over Z/{}: {})", 2 * d, rank_one_vanishes(e, c, d, 2 * d));
            }
            s
        });
        if let Some((e, c, d)) = oracle {
            o.check(rank_one_vanishes(e, c, d, d) == ext.vanishes_at_d, || format!("{label}: oracle disagrees at d"));
            o.check(rank_one_vanishes(e, c, d, 2 * d) == ext.vanishes_stably, || {
                format!("{label}: oracle disagrees at 2d")
            });
        }
    }
    let mut groups = 0;
    for name in catalog_names() {
        let g = catalog(&name).unwrap();
        let v = monomial_universal_verdict(&g);
        let want = sylow_cyclic_oracle(&g);
        o.check(all_sylow_cyclic(&g) == want, || format!("{name}: all_sylow_cyclic disagrees with element orders"));
        o.check((v.answer == Answer::Yes) == want, || format!("{name}: universal verdict {}", v.answer));
        o.check(replay(&v, &FieldDescriptor::complex()).is_ok(), || format!("{name}: trace does not replay"));
        groups += 1;
    }
    o.note(format!("3 examples, {groups} catalog groups"));
    o
}

fn bareiss_det(m: &IntMatrix) -> BigInt {
    let n = m.rows();
    let mut a: Vec<Vec<BigInt>> = m.to_rows();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| !a[i][k].is_zero()) else { return BigInt::zero() };
        if piv != k {
            a.swap(piv, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        BigInt::one()
    } else {
        sign * &a[n - 1][n - 1]
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for last in k - 1..n {
        for mut c in combinations(last, k - 1) {
            c.push(last);
            out.push(c);
        }
    }
    out
}

/// gcd of all `k×k` minors.
fn minor_gcd(a: &IntMatrix, k: usize) -> BigInt {
    let mut g = BigInt::zero();
    for rows in combinations(a.rows(), k) {
        for cols in combinations(a.cols(), k) {
            g = g.gcd(&bareiss_det(&a.select_rows(&rows).select_columns(&cols)));
        }
    }
    g
}

fn criterion_10() -> Outcome {
    let mut o = Outcome::new();
    let mut r = rng(1010);
    for i in 0..1000 {
        let (rows, cols) = (r.gen_range(0..=6), r.gen_range(0..=6));
        let bound = if i % 10 == 0 { 1_000_000_000 } else { 9 };
        let a = random_matrix(&mut r, rows, cols, bound);
        let s = smith_normal_form(&a);
        o.check(&(&s.u * &a) * &s.v == s.d, || format!("#{i}: U·A·V != D"));
        o.check(bareiss_det(&s.u).abs().is_one() && bareiss_det(&s.v).abs().is_one(), || {
            format!("#{i}: not unimodular")
        });
        let diag_only = (0..rows).all(|x| (0..cols).all(|y| x == y || s.d.get(x, y).is_zero()));
        o.check(diag_only, || format!("#{i}: D not diagonal"));
        let f = s.invariant_factors();
        let chain = f.iter().all(|x| x.is_positive()) && f.windows(2).all(|w| (&w[1] % &w[0]).is_zero());
        o.check(chain, || format!("#{i}: divisor chain broken: {f:?}"));
        let tail_zero = (f.len()..rows.min(cols)).all(|k| s.d.get(k, k).is_zero());
        o.check(tail_zero, || format!("#{i}: nonzero entries after the invariant factors"));
        if rows <= 4 && cols <= 4 {
            let mut prod = BigInt::one();
            for k in 1..=rows.min(cols) {
                if k <= f.len() {
                    prod *= &f[k - 1];
                } else {
                    prod = BigInt::zero();
                }
                let g = minor_gcd(&a, k);
                o.check(g == prod, || format!("#{i}: product of first {k} factors {prod} != minor gcd {g}"));
            }
        }
    }

    let mut solvable = 0;
    for i in 0..100 {
        let (rows, cols) = (r.gen_range(1..=3), r.gen_range(1..=3));
        let a = random_matrix(&mut r, rows, cols, 3);
        let b: Vec<BigInt> = if i % 2 == 0 {
            let x: Vec<BigInt> = (0..cols).map(|_| BigInt::from(r.gen_range(-3..=3))).collect();
            a.mul_vec(&x)
        } else {
            (0..rows).map(|_| BigInt::from(r.gen_range(-5..=5))).collect()
        };
        let radius: i64 = 12;
        let mut found = false;
        let mut x = vec![-radius; cols];
        'search: loop {
            let xb: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
            if a.mul_vec(&xb) == b {
                found = true;
                break;
            }
            for k in 0..cols {
                if x[k] < radius {
                    x[k] += 1;
                    continue 'search;
                }
                x[k] = -radius;
            }
            break;
        }
        let got = solve_integer(&a, &b).unwrap();
        if let Some(sol) = &got {
            o.check(a.mul_vec(sol) == b, || format!("solve #{i}: returned x with A·x != b"));
        }
        o.check(got.is_some() == found, || format!("solve #{i}: library {} vs brute force {found}", got.is_some()));
        solvable += found as usize;
    }
    o.note(format!("1000 SNF; 100 solves ({solvable} solvable)"));
    o
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn() -> Outcome); 10] = [
        (1, "I_q cohomology, q = 8, 16", criterion_1),
        (2, "non-invertible flabby class of I_q, torus verdict", criterion_2),
        (3, "permutation lattices are flabby and coflabby", criterion_3),
        (4, "Endo-Miyata over groups with cyclic Sylow subgroups", criterion_4),
        (5, "invertibility decisions and witnesses", criterion_5),
        (6, "Noether verdict table", criterion_6),
        (7, "fingerprint invariance under permutation summands", criterion_7),
        (8, "cyclic periodicity Ĥ⁻¹ = H¹", criterion_8),
        (9, "monomial extension classes and universal verdict", criterion_9),
        (10, "Smith normal form and integer solving", criterion_10),
    ];
    let mut unexpected = Vec::new();
    for (n, name, run) in criteria {
        let t = Instant::now();
        let o = run();
        let pass = o.failures.is_empty();
        let status = if pass { "PASS" } else { "FAIL" };
        let detail = if pass { o.notes.join("; ") } else { o.failures.join("; ") };
        println!("criterion {n:>2} [{status}] {name}: {detail} ({:.2?})", t.elapsed());
        if pass == DOCUMENTED_FAILURES.contains(&n) {
            unexpected.push(n);
        }
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected outcome for criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
