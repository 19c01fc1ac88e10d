//! Lattice documents:
//! `{"group": <group doc or catalog name>, "rank": r, "action": {"<element>": [[..]]}}`.
//!
//! Keys of `"action"` are element indices of the group; together they must
//! generate it. A few named lattices are accepted as strings:
//! `lenstra:<n>`, `regular:<group>` and `trivial:<group>`.

use std::sync::Arc;

use serde_json::{Map, Value};

use super::{lenstra_lattice, regular_lattice, GLattice};
use crate::error::{Error, Result};
use crate::groups::{group_to_value, parse_group};
use crate::json::{matrix_to_value, value_to_matrix};

pub fn parse_lattice(v: &Value) -> Result<GLattice> {
    if let Value::String(s) = v {
        return named_lattice(s);
    }
    let obj = v.as_object().ok_or_else(|| Error::invalid("lattice document must be an object"))?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "group" | "rank" | "action") {
            return Err(Error::invalid(format!("unknown field {key:?} in lattice document")));
        }
    }
    let group =
        Arc::new(parse_group(obj.get("group").ok_or_else(|| Error::invalid("lattice document needs \"group\""))?)?);
    let rank =
        obj.get("rank")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::invalid("lattice document needs a non-negative integer \"rank\""))? as usize;
    let empty = Map::new();
    let action = match obj.get("action") {
        Some(Value::Object(m)) => m,
        Some(_) => return Err(Error::invalid("\"action\" must map element indices to matrices")),
        None => &empty,
    };
    if rank == 0 && action.is_empty() {
        return Ok(GLattice::trivial(group, 0));
    }
    let mut pairs = Vec::with_capacity(action.len());
    for (k, m) in action {
        let g: usize =
            k.trim().parse().map_err(|_| Error::invalid(format!("action key {k:?} is not an element index")))?;
        pairs.push((g, value_to_matrix(m, Some(rank))?));
    }
    pairs.sort_by_key(|(g, _)| *g);
    GLattice::new(group, rank, pairs)
}

fn named_lattice(s: &str) -> Result<GLattice> {
    let (kind, arg) = s.split_once(':').ok_or_else(|| Error::invalid(format!("unknown lattice name {s:?}")))?;
    match kind {
        "lenstra" => {
            let n: u32 = arg.parse().map_err(|_| Error::invalid(format!("bad exponent in {s:?}")))?;
            Ok(lenstra_lattice(n)?.m)
        }
        "regular" => Ok(regular_lattice(Arc::new(crate::groups::catalog(arg)?))),
        "trivial" => Ok(GLattice::trivial(Arc::new(crate::groups::catalog(arg)?), 1)),
        _ => Err(Error::invalid(format!("unknown lattice name {s:?}"))),
    }
}

/// A document that re-parses to an equal lattice; the group is written out
/// in full.
pub fn lattice_to_value(m: &GLattice) -> Value {
    let mut action = Map::new();
    for &g in m.group().generators() {
        action.insert(g.to_string(), matrix_to_value(m.matrix(g)));
    }
    let mut obj = Map::new();
    obj.insert("group".into(), group_to_value(m.group()));
    obj.insert("rank".into(), Value::from(m.rank()));
    obj.insert("action".into(), Value::Object(action));
    Value::Object(obj)
}
