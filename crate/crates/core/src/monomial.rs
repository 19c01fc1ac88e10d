//! Monomial actions with root-of-unity coefficients.
//!
//! `σ·x_j = ζ_d^{c_j(σ)} ∏_i x_i^{a_ij(σ)}`. Composing gives the cocycle rule
//! `c(στ) = c(σ)·A(τ) + c(τ)` for the row vectors `c(σ)` over `Z/d`.
//! Rescaling `y_j = ζ_d^{b_j} x_j` changes `c(σ)` to `c(σ) + b − b·A(σ)`, so
//! the action is purely monomial after rescaling iff `c` is a coboundary.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::json::value_to_big;
use crate::lattices::{lattice_to_value, parse_lattice, GLattice};
use crate::zlinalg::{solve_integer, IntMatrix};

/// Largest accepted coefficient modulus.
pub const MAX_MODULUS: u64 = 1 << 31;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialAction {
    lattice: GLattice,
    d: u64,
    /// Coefficient row of every group element, entries in `0..d`.
    coeff: Vec<Vec<u64>>,
}

fn reduce(x: &BigInt, d: u64) -> u64 {
    let d = BigInt::from(d);
    (((x % &d) + &d) % &d).to_u64().expect("reduced")
}

impl MonomialAction {
    /// Builds an action from coefficient rows for the lattice's generating
    /// elements (those in `lattice.generator_action()`), checking that the
    /// data is a group action.
    pub fn new(lattice: GLattice, d: u64, gen_coeff: &[(usize, Vec<BigInt>)]) -> Result<Self> {
        if d == 0 || d > MAX_MODULUS {
            return Err(Error::invalid(format!("coefficient modulus must be between 1 and {MAX_MODULUS}")));
        }
        let r = lattice.rank();
        let g = lattice.group().clone();
        let mut gens: Vec<(usize, Vec<u64>)> = Vec::new();
        for (s, _) in lattice.generator_action() {
            let row = match gen_coeff.iter().find(|(x, _)| x == s) {
                Some((_, v)) => {
                    if v.len() != r {
                        return Err(Error::invalid(format!("coefficient vector of element {s} must have length {r}")));
                    }
                    v.iter().map(|x| reduce(x, d)).collect()
                }
                None => vec![0; r],
            };
            gens.push((*s, row));
        }
        if let Some((x, _)) = gen_coeff.iter().find(|(x, _)| !gens.iter().any(|(s, _)| s == x)) {
            return Err(Error::invalid(format!("coefficients given for element {x}, which carries no action matrix")));
        }
        let mut coeff: Vec<Option<Vec<u64>>> = vec![None; g.order()];
        coeff[0] = Some(vec![0; r]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (s, cs) in &gens {
                let y = g.mul(*s, x);
                let v = add_mod(&row_times(cs, lattice.matrix(x), d), coeff[x].as_ref().expect("visited"), d);
                match &coeff[y] {
                    Some(existing) if *existing != v => {
                        return Err(Error::invalid(format!(
                            "coefficients do not define an action: element {y} gets two different coefficient vectors"
                        )));
                    }
                    Some(_) => {}
                    None => {
                        coeff[y] = Some(v);
                        queue.push_back(y);
                    }
                }
            }
        }
        let coeff = coeff.into_iter().map(|c| c.expect("lattice generators generate")).collect();
        Ok(MonomialAction { lattice, d, coeff })
    }

    pub fn purely_monomial(lattice: GLattice, d: u64) -> Result<Self> {
        Self::new(lattice, d, &[])
    }

    pub fn lattice(&self) -> &GLattice {
        &self.lattice
    }

    pub fn modulus(&self) -> u64 {
        self.d
    }

    pub fn coefficients(&self, g: usize) -> &[u64] {
        &self.coeff[g]
    }

    pub fn is_purely_monomial(&self) -> bool {
        self.coeff.iter().all(|c| c.iter().all(|&x| x == 0))
    }

    /// Elements acting trivially on both exponents and coefficients.
    pub fn kernel(&self) -> Vec<usize> {
        (0..self.lattice.group().order())
            .filter(|&g| self.lattice.matrix(g).is_identity() && self.coeff[g].iter().all(|&x| x == 0))
            .collect()
    }

    pub fn is_faithful(&self) -> bool {
        self.kernel().len() == 1
    }

    /// The action after `x_j ↦ ζ_d^{b_j} x_j`.
    pub fn rescale(&self, b: &[u64]) -> MonomialAction {
        let coeff = (0..self.coeff.len())
            .map(|g| coboundary_shift(&self.coeff[g], b, self.lattice.matrix(g), self.d))
            .collect();
        MonomialAction { lattice: self.lattice.clone(), d: self.d, coeff }
    }

    /// Same action with coefficients read in `Z/(d·k)`.
    pub fn widen(&self, k: u64) -> MonomialAction {
        let coeff = self.coeff.iter().map(|c| c.iter().map(|&x| x * k).collect()).collect();
        MonomialAction { lattice: self.lattice.clone(), d: self.d * k, coeff }
    }

    /// `c(gh) = c(g)·A(h) + c(h)` over all pairs.
    pub fn verify_cocycle(&self) -> bool {
        let g = self.lattice.group();
        (0..g.order()).all(|a| {
            (0..g.order()).all(|b| {
                self.coeff[g.mul(a, b)]
                    == add_mod(&row_times(&self.coeff[a], self.lattice.matrix(b), self.d), &self.coeff[b], self.d)
            })
        })
    }

    pub fn to_value(&self) -> Value {
        let mut v = lattice_to_value(&self.lattice);
        let mut coeff = Map::new();
        for &s in self.lattice.group().generators() {
            coeff.insert(s.to_string(), json!(self.coeff[s]));
        }
        v["d"] = json!(self.d);
        v["coeff"] = Value::Object(coeff);
        v
    }
}

fn row_times(c: &[u64], a: &IntMatrix, d: u64) -> Vec<u64> {
    let row: Vec<BigInt> = c.iter().map(|&x| BigInt::from(x)).collect();
    a.vec_mul(&row).iter().map(|x| reduce(x, d)).collect()
}

fn add_mod(a: &[u64], b: &[u64], d: u64) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| (x + y) % d).collect()
}

/// `c + b − b·A mod d`.
fn coboundary_shift(c: &[u64], b: &[u64], a: &IntMatrix, d: u64) -> Vec<u64> {
    let ba = row_times(b, a, d);
    c.iter().zip(b).zip(ba).map(|((x, y), z)| (x + y + d - z) % d).collect()
}

/// Parses a lattice document extended by `"d"` and `"coeff"`. The lattice
/// may instead be given whole under `"lattice"` (a document or a name such
/// as `regular:C3`).
pub fn parse_monomial_action(v: &Value) -> Result<MonomialAction> {
    let obj = v.as_object().ok_or_else(|| Error::invalid("monomial action document must be an object"))?;
    let mut lat = Map::new();
    for (k, x) in obj {
        match k.as_str() {
            "group" | "rank" | "action" => {
                lat.insert(k.clone(), x.clone());
            }
            "d" | "coeff" | "lattice" => {}
            other => return Err(Error::invalid(format!("unknown field {other:?} in monomial action document"))),
        }
    }
    let lattice = match obj.get("lattice") {
        Some(_) if !lat.is_empty() => {
            return Err(Error::invalid("give either \"lattice\" or \"group\"/\"rank\"/\"action\", not both"))
        }
        Some(l) => parse_lattice(l)?,
        None => parse_lattice(&Value::Object(lat))?,
    };
    let d = obj
        .get("d")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::invalid("monomial action document needs a positive integer \"d\""))?;
    let mut gen_coeff = Vec::new();
    if let Some(c) = obj.get("coeff") {
        let c = c.as_object().ok_or_else(|| Error::invalid("\"coeff\" must map elements to exponent vectors"))?;
        for (k, row) in c {
            let s: usize = k
                .trim()
                .parse()
                .map_err(|_| Error::invalid(format!("coefficient key {k:?} is not an element index")))?;
            let row = row
                .as_array()
                .ok_or_else(|| {
                    Error::invalid("coefficient vector must be an array of integers (root-of-unity exponents)")
                })?
                .iter()
                .map(value_to_big)
                .collect::<Result<Vec<_>>>()
                .map_err(|e| Error::invalid(format!("coefficients must be root-of-unity exponents: {e}")))?;
            gen_coeff.push((s, row));
        }
    }
    MonomialAction::new(lattice, d, &gen_coeff)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionClass {
    pub action: MonomialAction,
    /// `c(g)` for every element, as functionals on `M` with values in `Z/d`.
    pub cocycle: Vec<Vec<u64>>,
    pub vanishes_at_d: bool,
    /// Coboundary over `Z/(d·|G|)`.
    pub vanishes_stably: bool,
    /// `b` with `c(σ) = b·A(σ) − b` mod `d`, when one exists.
    pub rescaling: Option<Vec<u64>>,
    pub stable_rescaling: Option<Vec<u64>>,
}

impl ExtensionClass {
    pub fn to_value(&self) -> Value {
        json!({
            "d": self.action.modulus(),
            "stable_modulus": self.action.modulus() * self.action.lattice().group().order() as u64,
            "purely_monomial": self.action.is_purely_monomial(),
            "vanishes_at_d": self.vanishes_at_d,
            "vanishes_stably": self.vanishes_stably,
            "rescaling": self.rescaling,
            "stable_rescaling": self.stable_rescaling,
        })
    }
}

/// `b` over `Z/d` with `c(s) ≡ b·A(s) − b` for every generator `s`.
fn coboundary_witness(action: &MonomialAction) -> Result<Option<Vec<u64>>> {
    let r = action.lattice.rank();
    let d = action.d;
    let gens: Vec<usize> = action.lattice.generator_action().iter().map(|(s, _)| *s).collect();
    if r == 0 || gens.is_empty() {
        return Ok(Some(vec![0; r]));
    }
    // unknowns: b (r entries), then one multiple of d per equation
    let rows = gens.len() * r;
    let mut a = IntMatrix::zeros(rows, r + rows);
    let mut rhs = Vec::with_capacity(rows);
    for (k, &s) in gens.iter().enumerate() {
        let m = action.lattice.matrix(s);
        for j in 0..r {
            let row = k * r + j;
            // (b·A(s) − b)_j = Σ_i b_i (A_ij − δ_ij)
            for i in 0..r {
                let mut v = m.get(i, j).clone();
                if i == j {
                    v -= 1;
                }
                a.set(row, i, v);
            }
            a.set(row, r + row, BigInt::from(d));
            rhs.push(BigInt::from(action.coeff[s][j]));
        }
    }
    Ok(solve_integer(&a, &rhs)?.map(|x| x[..r].iter().map(|v| reduce(v, d)).collect()))
}

pub fn extension_class(action: &MonomialAction) -> Result<ExtensionClass> {
    let rescaling = coboundary_witness(action)?;
    let n = action.lattice.group().order() as u64;
    let stable_rescaling = coboundary_witness(&action.widen(n))?;
    let ext = ExtensionClass {
        action: action.clone(),
        cocycle: action.coeff.clone(),
        vanishes_at_d: rescaling.is_some(),
        vanishes_stably: stable_rescaling.is_some(),
        rescaling,
        stable_rescaling,
    };
    if let Some(b) = &ext.rescaling {
        if !action.rescale(b).is_purely_monomial() {
            return Err(Error::internal("rescaling witness does not clear the coefficients"));
        }
    }
    if let Some(b) = &ext.stable_rescaling {
        if !action.widen(n).rescale(b).is_purely_monomial() {
            return Err(Error::internal("stable rescaling witness does not clear the coefficients"));
        }
    }
    Ok(ext)
}
