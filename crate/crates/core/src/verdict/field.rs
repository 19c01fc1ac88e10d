//! Field descriptors: the only facts about `k` the rules consult are its
//! characteristic, which roots of unity it contains, and whether
//! `k(ζ_{2^r})/k` is cyclic.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arith;
use crate::error::{Error, Result};

/// A three-valued oracle answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rationals,
    Complex,
    Custom,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldDescriptor {
    name: String,
    kind: FieldKind,
    characteristic: u64,
    infinite: bool,
    roots_yes: BTreeSet<u64>,
    roots_no: BTreeSet<u64>,
    cyclic_yes: BTreeSet<u32>,
    cyclic_no: BTreeSet<u32>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldDoc {
    name: String,
    #[serde(default)]
    characteristic: u64,
    #[serde(default = "yes")]
    infinite: bool,
    #[serde(default)]
    roots_of_unity: Table<u64>,
    #[serde(default)]
    cyclotomic_2power_cyclic: Table<u32>,
}

fn yes() -> bool {
    true
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Table<T> {
    #[serde(default = "Vec::new")]
    yes: Vec<T>,
    #[serde(default = "Vec::new")]
    no: Vec<T>,
}

impl<T> Default for Table<T> {
    fn default() -> Self {
        Table { yes: Vec::new(), no: Vec::new() }
    }
}

impl FieldDescriptor {
    pub fn rationals() -> Self {
        FieldDescriptor {
            name: "Q".into(),
            kind: FieldKind::Rationals,
            characteristic: 0,
            infinite: true,
            roots_yes: BTreeSet::new(),
            roots_no: BTreeSet::new(),
            cyclic_yes: BTreeSet::new(),
            cyclic_no: BTreeSet::new(),
        }
    }

    pub fn complex() -> Self {
        FieldDescriptor { name: "C".into(), kind: FieldKind::Complex, ..Self::rationals() }
    }

    /// Parses a descriptor document:
    /// `{"name", "characteristic", "infinite", "roots_of_unity": {"yes", "no"},
    /// "cyclotomic_2power_cyclic": {"yes", "no"}}`.
    pub fn from_value(v: &Value) -> Result<Self> {
        let doc: FieldDoc = serde_json::from_value(v.clone())
            .map_err(|e| Error::invalid(format!("malformed field descriptor: {e}")))?;
        let p = doc.characteristic;
        if p != 0 && !arith::is_prime(p) {
            return Err(Error::invalid(format!("characteristic {p} is neither 0 nor prime")));
        }
        if matches!(doc.name.as_str(), "Q" | "C") {
            return Err(Error::invalid("the names Q and C are reserved for the built-in fields"));
        }
        let roots_yes: BTreeSet<u64> = doc.roots_of_unity.yes.into_iter().collect();
        let roots_no: BTreeSet<u64> = doc.roots_of_unity.no.into_iter().collect();
        if roots_yes.iter().chain(&roots_no).any(|&n| n == 0) {
            return Err(Error::invalid("roots of unity are indexed from 1"));
        }
        if p != 0 {
            if let Some(n) = roots_yes.iter().chain(&roots_no).find(|&&n| n % p == 0) {
                return Err(Error::invalid(format!("ζ_{n} is not meaningful in characteristic {p}")));
            }
        }
        let f = FieldDescriptor {
            name: doc.name,
            kind: FieldKind::Custom,
            characteristic: p,
            infinite: doc.infinite,
            roots_yes,
            roots_no,
            cyclic_yes: doc.cyclotomic_2power_cyclic.yes.into_iter().collect(),
            cyclic_no: doc.cyclotomic_2power_cyclic.no.into_iter().collect(),
        };
        f.check_consistent()?;
        Ok(f)
    }

    fn check_consistent(&self) -> Result<()> {
        for &z in &self.roots_no {
            if self.characteristic != 2 && z <= 2 {
                return Err(Error::invalid(format!("ζ_{z} lies in every field of characteristic ≠ 2")));
            }
            if let Some(y) = self.roots_yes.iter().find(|&&y| y % z == 0) {
                return Err(Error::invalid(format!("ζ_{y} ∈ k forces ζ_{z} ∈ k")));
            }
        }
        for &r in &self.cyclic_no {
            if r <= 2 {
                return Err(Error::invalid(format!("k(ζ_{}) is cyclic over any k", 1u64 << r)));
            }
            if self.cyclic_yes.iter().any(|&s| s >= r) {
                return Err(Error::invalid(format!("cyclicity at 2^{r} is declared both ways")));
            }
            if r < 64 && self.has_root_of_unity(1 << r) == Tri::Yes {
                return Err(Error::invalid(format!("ζ_{} ∈ k makes k(ζ_{})/k trivial", 1u64 << r, 1u64 << r)));
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn characteristic(&self) -> u64 {
        self.characteristic
    }

    pub fn is_infinite(&self) -> bool {
        self.infinite
    }

    /// Whether `ζ_n ∈ k`. In characteristic `p` only `p ∤ n` is meaningful;
    /// other `n` answer `No`.
    pub fn has_root_of_unity(&self, n: u64) -> Tri {
        let p = self.characteristic;
        if n == 0 || (p != 0 && n.is_multiple_of(p)) {
            return Tri::No;
        }
        match self.kind {
            FieldKind::Complex => return Tri::Yes,
            FieldKind::Rationals => return if n <= 2 { Tri::Yes } else { Tri::No },
            FieldKind::Custom => {}
        }
        if n <= 2 || self.roots_yes.iter().any(|&y| y % n == 0) {
            Tri::Yes
        } else if self.roots_no.iter().any(|&z| n.is_multiple_of(z)) {
            Tri::No
        } else {
            Tri::Unknown
        }
    }

    /// Whether `k(ζ_{2^r})/k` is cyclic.
    pub fn cyclotomic_2power_cyclic(&self, r: u32) -> Tri {
        // degree at most 2 for r <= 2; trivial in characteristic 2
        if r <= 2 || self.characteristic == 2 {
            return Tri::Yes;
        }
        match self.kind {
            FieldKind::Complex => return Tri::Yes,
            FieldKind::Rationals => return Tri::No,
            FieldKind::Custom => {}
        }
        if self.cyclic_yes.iter().any(|&s| s >= r) || (r < 64 && self.has_root_of_unity(1 << r) == Tri::Yes) {
            Tri::Yes
        } else if self.cyclic_no.iter().any(|&s| s <= r) {
            Tri::No
        } else {
            Tri::Unknown
        }
    }

    /// The label used by the command line: `Q`, `C` or the custom name.
    pub fn label(&self) -> String {
        match self.kind {
            FieldKind::Custom => format!("custom:{}", self.name),
            _ => self.name.clone(),
        }
    }

    pub fn to_value(&self) -> Value {
        json!({
            "name": self.name,
            "characteristic": self.characteristic,
            "infinite": self.infinite,
            "roots_of_unity": {"yes": self.roots_yes, "no": self.roots_no},
            "cyclotomic_2power_cyclic": {"yes": self.cyclic_yes, "no": self.cyclic_no},
        })
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}
