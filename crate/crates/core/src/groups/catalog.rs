//! Named groups that resolve without a description file.

use super::{FiniteGroup, DEFAULT_ORDER_BOUND};
use crate::error::{Error, Result};

pub fn cyclic(n: usize) -> FiniteGroup {
    assert!(n >= 1);
    let table = (0..n).flat_map(|a| (0..n).map(move |b| ((a + b) % n) as u32)).collect();
    let mut g = FiniteGroup::from_valid_table(n, table, Some(format!("C{n}")));
    g.generators = if n > 1 { vec![1] } else { Vec::new() };
    g
}

/// Dihedral group of order `order` (symmetries of a regular `order/2`-gon).
pub fn dihedral(order: usize) -> FiniteGroup {
    assert!(order >= 4 && order.is_multiple_of(2));
    let k = order / 2;
    let rot: Vec<usize> = (0..k).map(|i| (i + 1) % k).collect();
    let refl: Vec<usize> = (0..k).map(|i| (k - i) % k).collect();
    FiniteGroup::from_closure(&[rot, refl], (0..k).collect(), compose, DEFAULT_ORDER_BOUND, Some(format!("D{order}")))
        .expect("dihedral group is small")
}

/// The quaternion group, realized by 2x2 matrices over the Gaussian integers.
pub fn quaternion8() -> FiniteGroup {
    // entries are (re, im) pairs, row-major
    type M = [(i64, i64); 4];
    fn mul(a: &M, b: &M) -> M {
        let cm = |x: (i64, i64), y: (i64, i64)| (x.0 * y.0 - x.1 * y.1, x.0 * y.1 + x.1 * y.0);
        let add = |x: (i64, i64), y: (i64, i64)| (x.0 + y.0, x.1 + y.1);
        [
            add(cm(a[0], b[0]), cm(a[1], b[2])),
            add(cm(a[0], b[1]), cm(a[1], b[3])),
            add(cm(a[2], b[0]), cm(a[3], b[2])),
            add(cm(a[2], b[1]), cm(a[3], b[3])),
        ]
    }
    let one: M = [(1, 0), (0, 0), (0, 0), (1, 0)];
    let i: M = [(0, 1), (0, 0), (0, 0), (0, -1)];
    let j: M = [(0, 0), (1, 0), (-1, 0), (0, 0)];
    FiniteGroup::from_closure(&[i, j], one, mul, DEFAULT_ORDER_BOUND, Some("Q8".into())).expect("order 8")
}

/// `(Z/mZ)^x` with elements the units listed in increasing order.
pub fn unit_group_mod(m: usize) -> FiniteGroup {
    assert!(m >= 2);
    let units: Vec<usize> = (1..m).filter(|&u| crate::arith::gcd(u as u64, m as u64) == 1).collect();
    let pos = |x: usize| units.binary_search(&x).expect("unit");
    let n = units.len();
    let mut table = Vec::with_capacity(n * n);
    for &a in &units {
        for &b in &units {
            table.push(pos(a * b % m) as u32);
        }
    }
    FiniteGroup::from_valid_table(n, table, Some(format!("U{m}")))
}

/// Direct product with element `(g, h)` at index `g * |H| + h`.
pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
    let (na, nb) = (a.order(), b.order());
    let n = na * nb;
    let mut table = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let g = a.mul(x / nb, y / nb);
            let h = b.mul(x % nb, y % nb);
            table.push((g * nb + h) as u32);
        }
    }
    let name = match (a.name(), b.name()) {
        (Some(p), Some(q)) => Some(format!("{p}x{q}")),
        _ => None,
    };
    let mut g = FiniteGroup::from_valid_table(n, table, name);
    let mut gens: Vec<usize> = a.generators().iter().map(|&x| x * nb).collect();
    gens.extend(b.generators().iter().copied());
    if !gens.is_empty() || n == 1 {
        g.generators = gens;
    }
    g
}

#[allow(clippy::ptr_arg)]
pub(crate) fn compose(g: &Vec<usize>, h: &Vec<usize>) -> Vec<usize> {
    h.iter().map(|&x| g[x]).collect()
}

fn symmetric3() -> FiniteGroup {
    let gens = [vec![1, 2, 0], vec![1, 0, 2]];
    FiniteGroup::from_closure(&gens, vec![0, 1, 2], compose, DEFAULT_ORDER_BOUND, Some("S3".into())).expect("order 6")
}

fn alternating4() -> FiniteGroup {
    let gens = [vec![1, 2, 0, 3], vec![1, 0, 3, 2]];
    FiniteGroup::from_closure(&gens, vec![0, 1, 2, 3], compose, DEFAULT_ORDER_BOUND, Some("A4".into()))
        .expect("order 12")
}

fn single(name: &str) -> Option<FiniteGroup> {
    let num = |prefix: &str| name.strip_prefix(prefix).and_then(|s| s.parse::<usize>().ok());
    let g = match name {
        "1" | "C1" | "trivial" => cyclic(1).with_name("C1"),
        "V4" | "K4" => direct_product(&cyclic(2), &cyclic(2)).with_name("V4"),
        "Q8" => quaternion8(),
        "S3" | "Sym3" => symmetric3(),
        "A4" | "Alt4" => alternating4(),
        _ => {
            if let Some(n) = num("C").filter(|&n| (1..=DEFAULT_ORDER_BOUND).contains(&n)) {
                cyclic(n)
            } else if let Some(n) = num("D").filter(|&n| n >= 4 && n % 2 == 0 && n <= DEFAULT_ORDER_BOUND) {
                dihedral(n)
            } else {
                let m = unit_modulus(name)?;
                unit_group_mod(m)
            }
        }
    };
    Some(g)
}

/// Accepts `U8`, `U(8)` and `U(2^3)`.
fn unit_modulus(name: &str) -> Option<usize> {
    let rest = name.strip_prefix('U')?;
    let inner = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(rest);
    let m = match inner.split_once('^') {
        Some((b, e)) => b.parse::<usize>().ok()?.checked_pow(e.parse().ok()?)?,
        None => inner.parse().ok()?,
    };
    (2..=2 * DEFAULT_ORDER_BOUND).contains(&m).then_some(m)
}

/// Resolves a catalog name. Products are written with `x`, e.g. `C2xC4`.
pub fn catalog(name: &str) -> Result<FiniteGroup> {
    let name = name.trim();
    if let Some(g) = single(name) {
        return Ok(g);
    }
    let parts: Vec<&str> = name.split('x').collect();
    if parts.len() > 1 {
        let mut acc: Option<FiniteGroup> = None;
        for p in &parts {
            let f = single(p).ok_or_else(|| Error::invalid(format!("unknown group name {p:?}")))?;
            acc = Some(match acc {
                None => f,
                Some(a) => {
                    if a.order() * f.order() > DEFAULT_ORDER_BOUND {
                        return Err(Error::resource(format!("group {name} exceeds {DEFAULT_ORDER_BOUND} elements")));
                    }
                    direct_product(&a, &f)
                }
            });
        }
        return Ok(acc.expect("nonempty").with_name(name));
    }
    Err(Error::invalid(format!("unknown group name {name:?}")))
}

/// Catalog groups of order at most 16, as used by the test suites.
pub fn catalog_names() -> Vec<String> {
    let mut names: Vec<String> = (2..=16).map(|n| format!("C{n}")).collect();
    names.extend(
        ["V4", "C2xC4", "C2xC2xC2", "D8", "D16", "Q8", "S3", "A4", "U4", "U8", "U16", "U32"]
            .iter()
            .map(|s| s.to_string()),
    );
    names
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        let expect = [
            ("C47", 47),
            ("V4", 4),
            ("C2xC4", 8),
            ("C2xC2xC2", 8),
            ("D8", 8),
            ("D16", 16),
            ("Q8", 8),
            ("S3", 6),
            ("A4", 12),
            ("U8", 4),
            ("U(2^5)", 16),
            ("U64", 32),
        ];
        for (name, order) in expect {
            let g = catalog(name).unwrap();
            assert_eq!(g.order(), order, "{name}");
            assert!(g.verify_axioms(), "{name}");
        }
        assert!(catalog("X7").is_err());
    }

    #[test]
    fn small_structure() {
        assert!(catalog("Q8").unwrap().element_orders().iter().filter(|&&o| o == 4).count() == 6);
        assert!(!catalog("D8").unwrap().is_abelian());
        assert!(catalog("U16").unwrap().is_abelian());
        assert!(!catalog("U8").unwrap().is_cyclic());
        assert!(catalog("U4").unwrap().is_cyclic());
        assert_eq!(catalog("D16").unwrap().exponent(), 8);
    }
}
