//! Group-description documents.
//!
//! A document is either `{"table": [[..]], "generators"?: [..], "name"?: ".."}`
//! with 0-based indices (row g, column h holds g·h), or
//! `{"perm_generators": [[images of 1..n], ..], "degree": n, "name"?: ".."}`.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::catalog::compose;
use super::{FiniteGroup, DEFAULT_ORDER_BOUND};
use crate::error::{Error, Result};

const MAX_DEGREE: usize = 64;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perm_generators: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
}

pub fn parse_group(v: &Value) -> Result<FiniteGroup> {
    parse_group_with_bound(v, DEFAULT_ORDER_BOUND)
}

/// Parses a document or a catalog name given as a JSON string.
pub fn parse_group_with_bound(v: &Value, bound: usize) -> Result<FiniteGroup> {
    if let Value::String(name) = v {
        return super::catalog(name);
    }
    let doc: GroupDoc =
        serde_json::from_value(v.clone()).map_err(|e| Error::invalid(format!("group document: {e}")))?;
    let g = match (&doc.table, &doc.perm_generators) {
        (Some(t), None) => {
            if doc.degree.is_some() {
                return Err(Error::invalid("\"degree\" only applies to permutation generators"));
            }
            let g = from_table(t, doc.name.clone(), bound)?;
            match &doc.generators {
                Some(gens) => g.with_generators(gens.clone())?,
                None => g,
            }
        }
        (None, Some(perms)) => {
            if doc.generators.is_some() {
                return Err(Error::invalid("\"generators\" only applies to table documents"));
            }
            from_permutations(perms, doc.degree, doc.name.clone(), bound)?
        }
        (Some(_), Some(_)) => return Err(Error::invalid("give either \"table\" or \"perm_generators\", not both")),
        (None, None) => return Err(Error::invalid("group document needs \"table\" or \"perm_generators\"")),
    };
    Ok(g)
}

fn from_table(rows: &[Vec<usize>], name: Option<String>, bound: usize) -> Result<FiniteGroup> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::invalid("empty multiplication table"));
    }
    if n > bound {
        return Err(Error::resource(format!("group order {n} exceeds the bound {bound}")));
    }
    for (i, r) in rows.iter().enumerate() {
        if r.len() != n {
            return Err(Error::invalid(format!("table row {i} has length {} (expected {n})", r.len())));
        }
        if let Some(&x) = r.iter().find(|&&x| x >= n) {
            return Err(Error::invalid(format!("table entry {x} out of range in row {i}")));
        }
    }
    // Latin square: every row and column is a permutation
    for i in 0..n {
        let mut row_seen = vec![false; n];
        let mut col_seen = vec![false; n];
        for j in 0..n {
            if std::mem::replace(&mut row_seen[rows[i][j]], true) {
                return Err(Error::invalid(format!("row {i} repeats an element; not a group table")));
            }
            if std::mem::replace(&mut col_seen[rows[j][i]], true) {
                return Err(Error::invalid(format!("column {i} repeats an element; not a group table")));
            }
        }
    }
    let e = (0..n)
        .find(|&e| (0..n).all(|x| rows[e][x] == x && rows[x][e] == x))
        .ok_or_else(|| Error::invalid("table has no identity element"))?;
    // relabel so the identity is 0
    let swap = |x: usize| {
        if x == e {
            0
        } else if x == 0 {
            e
        } else {
            x
        }
    };
    let mut table = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            table[swap(a) * n + swap(b)] = swap(rows[a][b]) as u32;
        }
    }
    let op = |a: usize, b: usize| table[a * n + b] as usize;

    // Light's test on a generating set: the elements `a` with
    // (x·a)·y = x·(a·y) for all x, y are closed under products.
    let mut reached = vec![false; n];
    let mut gens = Vec::new();
    for cand in 0..n {
        if reached[cand] {
            continue;
        }
        gens.push(cand);
        let mut stack: Vec<usize> = (0..n).filter(|&x| reached[x]).collect();
        if !reached[cand] {
            reached[cand] = true;
            stack.push(cand);
        }
        while let Some(x) = stack.pop() {
            for &g in &gens {
                for y in [op(x, g), op(g, x)] {
                    if !reached[y] {
                        reached[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
    }
    for &a in &gens {
        for x in 0..n {
            let xa = op(x, a);
            for y in 0..n {
                if op(xa, y) != op(x, op(a, y)) {
                    return Err(Error::invalid(format!("table is not associative: ({x}*{a})*{y} != {x}*({a}*{y})")));
                }
            }
        }
    }
    Ok(FiniteGroup::from_valid_table(n, table, name))
}

fn from_permutations(
    perms: &[Vec<usize>],
    degree: Option<usize>,
    name: Option<String>,
    bound: usize,
) -> Result<FiniteGroup> {
    let n = match (degree, perms.first()) {
        (Some(d), _) => d,
        (None, Some(p)) => p.len(),
        (None, None) => {
            return Err(Error::invalid("permutation document needs \"degree\" when no generators are listed"))
        }
    };
    if n == 0 || n > MAX_DEGREE {
        return Err(Error::invalid(format!("permutation degree must be between 1 and {MAX_DEGREE}")));
    }
    let mut zero_based = Vec::with_capacity(perms.len());
    for (k, p) in perms.iter().enumerate() {
        if p.len() != n {
            return Err(Error::invalid(format!("permutation {k} has {} images, degree is {n}", p.len())));
        }
        let mut seen = vec![false; n];
        for &x in p {
            if x == 0 || x > n || std::mem::replace(&mut seen[x - 1], true) {
                return Err(Error::invalid(format!("permutation {k} is not a permutation of 1..{n}")));
            }
        }
        zero_based.push(p.iter().map(|&x| x - 1).collect::<Vec<usize>>());
    }
    FiniteGroup::from_closure(&zero_based, (0..n).collect(), compose, bound, name)
}

/// A table document that re-parses to an equal group.
pub fn group_to_value(g: &FiniteGroup) -> Value {
    let doc = GroupDoc {
        name: g.name().map(str::to_string),
        table: Some((0..g.order()).map(|a| g.table_row(a).iter().map(|&x| x as usize).collect()).collect()),
        generators: Some(g.generators().to_vec()),
        perm_generators: None,
        degree: None,
    };
    serde_json::to_value(doc).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn c2_table() {
        let g = parse_group(&json!({"table": [[0, 1], [1, 0]]})).unwrap();
        assert_eq!(g.order(), 2);
    }

    #[test]
    fn identity_relabelled() {
        let g = parse_group(&json!({"table": [[1, 0], [0, 1]]})).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.mul(0, 1), 1);
        assert_eq!(g.mul(1, 1), 0);
    }

    #[test]
    fn s3_from_permutations() {
        let g = parse_group(&json!({"perm_generators": [[2, 3, 1], [2, 1, 3]], "degree": 3})).unwrap();
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
        assert!(g.verify_axioms());
    }

    #[test]
    fn non_associative_rejected() {
        // a Latin square with identity 0 that is not a group (order 5 loop)
        let t = json!({"table": [
            [0, 1, 2, 3, 4],
            [1, 0, 3, 4, 2],
            [2, 4, 0, 1, 3],
            [3, 2, 4, 0, 1],
            [4, 3, 1, 2, 0]
        ]});
        let err = parse_group(&t).unwrap_err();
        assert!(err.to_string().contains("associative"), "{err}");
    }

    #[test]
    fn malformed_inputs() {
        assert!(parse_group(&json!({"table": [[0, 1], [0, 1]]})).is_err());
        assert!(parse_group(&json!({"perm_generators": [[1, 1, 2]]})).is_err());
        assert!(parse_group(&json!({"perm_generators": [[2, 1]], "degree": 3})).is_err());
        assert!(parse_group(&json!({})).is_err());
    }

    #[test]
    fn order_bound() {
        // S6 has 720 elements
        let v = json!({"perm_generators": [[2, 3, 4, 5, 6, 1], [2, 1, 3, 4, 5, 6]]});
        assert_eq!(parse_group(&v).unwrap().order(), 720);
        assert!(parse_group_with_bound(&v, 100).unwrap_err().is_resource());
    }

    #[test]
    fn round_trip() {
        for name in crate::groups::catalog_names() {
            let g = crate::groups::catalog(&name).unwrap();
            let back = parse_group(&group_to_value(&g)).unwrap();
            assert_eq!(back, g, "{name}");
        }
    }
}
