//! Fixed-point covers, flabby resolutions and the invertibility decision.

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::cohomology::{self, SubgroupMode};
use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, Subgroup};
use crate::json::matrix_to_value;
use crate::lattices::{lattice_to_value, permutation_lattice, GLattice, LatticeMap};
use crate::zlinalg::{column_hermite, kernel_basis, kernel_echelon, solve_integer, IntMatrix};

/// Largest permutation lattice a cover may use.
pub const MAX_COVER_RANK: usize = 512;

/// `0 → C → P → M → 0` with `P` a permutation lattice and `P^H → M^H`
/// surjective for every subgroup `H`.
#[derive(Clone, Debug)]
pub struct FixedPointCover {
    pub m: GLattice,
    pub p: GLattice,
    /// Summand `i` of `P` is `Z[G/stabilizers[i]]`, its trivial coset mapping
    /// to `images[i]`.
    pub stabilizers: Vec<Subgroup>,
    pub images: Vec<Vec<BigInt>>,
    pub projection: LatticeMap,
    pub c: GLattice,
    pub inclusion: LatticeMap,
}

/// Image in `M` of the coset basis vectors of `Z[G/K]` when the trivial
/// coset maps to `f`: column `j` is `x_j·f` for the smallest element `x_j`
/// of coset `j`.
fn summand_projection(m: &GLattice, k: &Subgroup, f: &[BigInt]) -> Vec<Vec<BigInt>> {
    m.group().left_cosets(k).iter().map(|c| m.matrix(c[0]).mul_vec(f)).collect()
}

/// Generators of the image of `P^H` in `M^H`: sums of the images over the
/// `H`-orbits of cosets in each summand.
fn fixed_image_generators(
    g: &FiniteGroup,
    h: &Subgroup,
    summands: &[(Subgroup, Vec<Vec<BigInt>>)],
    rank: usize,
) -> Vec<Vec<BigInt>> {
    let mut out = Vec::new();
    for (k, cols) in summands {
        let labels = g.coset_labels(k);
        let cosets = g.left_cosets(k);
        let mut seen = vec![false; cosets.len()];
        for start in 0..cosets.len() {
            if seen[start] {
                continue;
            }
            let mut sum = vec![BigInt::zero(); rank];
            for &x in h.members() {
                let c = labels[g.mul(x, cosets[start][0])];
                if !seen[c] {
                    seen[c] = true;
                    for (s, v) in sum.iter_mut().zip(&cols[c]) {
                        *s += v;
                    }
                }
            }
            if sum.iter().any(|x| !x.is_zero()) {
                out.push(sum);
            }
        }
    }
    out
}

fn span(rank: usize, vectors: &[Vec<BigInt>]) -> crate::zlinalg::EchelonBasis {
    column_hermite(&IntMatrix::from_columns(rank, vectors).expect("consistent lengths"))
}

pub fn fixed_point_cover(m: &GLattice) -> Result<FixedPointCover> {
    let g = m.group().clone();
    let r = m.rank();
    let mut reps = g.subgroup_class_representatives()?;
    reps.reverse();
    let mut summands: Vec<(Subgroup, Vec<Vec<BigInt>>)> = Vec::new();
    let mut stabilizers = Vec::new();
    let mut images = Vec::new();
    let mut p_rank = 0;
    for h in &reps {
        let fixed = m.fixed_sublattice(h);
        let mut covered = span(r, &fixed_image_generators(&g, h, &summands, r));
        for f in fixed.basis.columns() {
            if covered.contains(&f) {
                continue;
            }
            p_rank += g.order() / h.order();
            if p_rank > MAX_COVER_RANK {
                return Err(Error::resource(format!(
                    "fixed-point cover needs a permutation lattice of rank above {MAX_COVER_RANK}"
                )));
            }
            summands.push((h.clone(), summand_projection(m, h, &f)));
            stabilizers.push(h.clone());
            images.push(f);
            covered = span(r, &fixed_image_generators(&g, h, &summands, r));
        }
    }
    let p = if stabilizers.is_empty() {
        GLattice::trivial(g.clone(), 0)
    } else {
        permutation_lattice(g.clone(), &stabilizers)?
    };
    let cols: Vec<Vec<BigInt>> = summands.iter().flat_map(|(_, c)| c.iter().cloned()).collect();
    let proj = IntMatrix::from_columns(r, &cols)?;
    let projection = LatticeMap::new(p.clone(), m.clone(), proj)?;
    let kernel = kernel_echelon(&projection.matrix);
    let c = p.induced_on(&kernel)?;
    let inclusion = LatticeMap::new(c.clone(), p.clone(), kernel.basis)?;
    let cover = FixedPointCover { m: m.clone(), p, stabilizers, images, projection, c, inclusion };
    cover.verify_surjectivity()?;
    Ok(cover)
}

impl FixedPointCover {
    /// Checks `P^H → M^H` onto for every subgroup `H`.
    pub fn verify_surjectivity(&self) -> Result<()> {
        let g = self.m.group();
        let r = self.m.rank();
        let summands: Vec<(Subgroup, Vec<Vec<BigInt>>)> = self
            .stabilizers
            .iter()
            .zip(&self.images)
            .map(|(k, f)| (k.clone(), summand_projection(&self.m, k, f)))
            .collect();
        for h in g.subgroups()? {
            let covered = span(r, &fixed_image_generators(g, h, &summands, r));
            let fixed = self.m.fixed_sublattice(h);
            if fixed.basis.columns().iter().any(|f| !covered.contains(f)) {
                return Err(Error::internal(format!(
                    "cover is not surjective on fixed points of subgroup {:?}",
                    h.members()
                )));
            }
        }
        Ok(())
    }

    pub fn to_value(&self) -> Value {
        json!({
            "P": lattice_to_value(&self.p),
            "C": lattice_to_value(&self.c),
            "stabilizers": self.stabilizers.iter().map(|s| s.members().to_vec()).collect::<Vec<_>>(),
            "projection": matrix_to_value(&self.projection.matrix),
            "inclusion": matrix_to_value(&self.inclusion.matrix),
        })
    }
}

/// `0 → M → P → F → 0` with `P` permutation and `F` flabby.
#[derive(Clone, Debug)]
pub struct FlabbyResolution {
    pub m: GLattice,
    pub p: GLattice,
    pub f: GLattice,
    pub p_stabilizers: Vec<Subgroup>,
    pub injection: LatticeMap,
    pub surjection: LatticeMap,
}

impl FlabbyResolution {
    /// Exactness: injective, composition zero, ranks add up and the image of
    /// `M` is the full kernel of `P → F`.
    pub fn verify_exactness(&self) -> bool {
        let inj = &self.injection.matrix;
        let sur = &self.surjection.matrix;
        kernel_basis(inj).cols() == 0
            && (sur * inj).is_zero()
            && self.m.rank() + self.f.rank() == self.p.rank()
            && kernel_echelon(sur).basis == column_hermite(inj).basis
            && self.injection.is_equivariant()
            && self.surjection.is_equivariant()
    }

    pub fn to_value(&self) -> Value {
        json!({
            "M": lattice_to_value(&self.m),
            "P": lattice_to_value(&self.p),
            "F": lattice_to_value(&self.f),
            "injection": matrix_to_value(&self.injection.matrix),
            "surjection": matrix_to_value(&self.surjection.matrix),
        })
    }
}

/// Dual of the fixed-point cover of `M*`.
pub fn flabby_resolution(m: &GLattice) -> Result<FlabbyResolution> {
    let cover = fixed_point_cover(&m.dual())?;
    // permutation matrices are orthogonal, so P'* has the same matrices as P'
    let p = cover.p.dual();
    let f = cover.c.dual();
    let injection = LatticeMap::new(m.clone(), p.clone(), cover.projection.matrix.transpose())?;
    let surjection = LatticeMap::new(p.clone(), f.clone(), cover.inclusion.matrix.transpose())?;
    let res = FlabbyResolution { m: m.clone(), p, f, p_stabilizers: cover.stabilizers, injection, surjection };
    if !res.verify_exactness() {
        return Err(Error::internal("flabby resolution is not exact"));
    }
    if !cohomology::is_flabby(&res.f, SubgroupMode::PrimePower)? {
        return Err(Error::internal("flabby resolution produced a non-flabby lattice"));
    }
    Ok(res)
}

/// Why an invertibility question was answered the way it was.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvertibilityReason {
    /// An equivariant section of the cover was found.
    Section,
    /// `Ĥ⁻¹` does not vanish; invertible lattices are flabby.
    NotFlabby,
    /// `H¹` does not vanish; invertible lattices are coflabby.
    NotCoflabby,
    /// The cover has coflabby kernel and admits no equivariant section.
    NoSection,
}

impl InvertibilityReason {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Section => "equivariant section of a permutation cover",
            Self::NotFlabby => "not flabby",
            Self::NotCoflabby => "not coflabby",
            Self::NoSection => "no equivariant section of the coflabby cover",
        }
    }
}

#[derive(Clone, Debug)]
pub struct InvertibilityDecision {
    pub invertible: bool,
    pub reason: InvertibilityReason,
    /// An equivariant `s: M → P` with `projection·s = 1`.
    pub witness: Option<LatticeMap>,
    pub cover: Option<FixedPointCover>,
}

impl InvertibilityDecision {
    /// Re-checks the witness equations exactly.
    pub fn verify_witness(&self) -> bool {
        match (&self.witness, &self.cover) {
            (Some(s), Some(cover)) => {
                s.is_equivariant()
                    && s.source == cover.m
                    && s.target == cover.p
                    && (&cover.projection.matrix * &s.matrix).is_identity()
            }
            _ => !self.invertible,
        }
    }

    pub fn to_value(&self) -> Value {
        let mut v = json!({
            "invertible": self.invertible,
            "reason": self.reason.as_str(),
        });
        if let Some(s) = &self.witness {
            v["witness"] = matrix_to_value(&s.matrix);
        }
        if let Some(c) = &self.cover {
            v["cover_rank"] = json!(c.p.rank());
            v["cover_stabilizers"] = json!(c.stabilizers.iter().map(|s| s.members().to_vec()).collect::<Vec<_>>());
        }
        v
    }
}

/// Decides whether `M` is a direct summand of a permutation lattice.
///
/// A section of the fixed-point cover `P → M` exists iff `M` is invertible:
/// the kernel is coflabby, so the cover splits when `M` is invertible.
/// Equivariant maps `M → Z[G/K]` correspond to `K`-invariant functionals
/// `φ` via `m ↦ Σ_j φ(x_j^-1·m) e_{x_j K}`, which turns the search into one
/// integral linear system.
pub fn is_invertible(m: &GLattice) -> Result<InvertibilityDecision> {
    let mode = SubgroupMode::PrimePower;
    if !cohomology::is_flabby(m, mode)? {
        return Ok(InvertibilityDecision {
            invertible: false,
            reason: InvertibilityReason::NotFlabby,
            witness: None,
            cover: None,
        });
    }
    if !cohomology::is_coflabby(m, mode)? {
        return Ok(InvertibilityDecision {
            invertible: false,
            reason: InvertibilityReason::NotCoflabby,
            witness: None,
            cover: None,
        });
    }
    search_section(m)
}

/// The section search alone, without the cohomological shortcuts. Decides
/// invertibility on its own; `is_invertible` only adds cheap necessary
/// conditions in front.
pub fn search_section(m: &GLattice) -> Result<InvertibilityDecision> {
    let cover = fixed_point_cover(m)?;
    let g = m.group();
    let r = m.rank();
    let dual = m.dual();

    // candidate blocks: (summand index, functional φ)
    let mut candidates: Vec<(usize, Vec<BigInt>)> = Vec::new();
    for (i, k) in cover.stabilizers.iter().enumerate() {
        for phi in dual.fixed_sublattice(k).basis.columns() {
            candidates.push((i, phi));
        }
    }
    let offsets: Vec<usize> = cover
        .stabilizers
        .iter()
        .scan(0, |acc, k| {
            let o = *acc;
            *acc += g.order() / k.order();
            Some(o)
        })
        .collect();

    // block rows of s for candidate (i, φ): row j is φ·A(x_j^-1)
    let block_rows = |i: usize, phi: &[BigInt]| -> Vec<Vec<BigInt>> {
        g.left_cosets(&cover.stabilizers[i]).iter().map(|c| m.matrix(g.inv(c[0])).vec_mul(phi)).collect()
    };

    // π·s for each candidate, flattened row-major into one column each
    let mut system_cols = Vec::with_capacity(candidates.len());
    for (i, phi) in &candidates {
        let rows = block_rows(*i, phi);
        let mut t = IntMatrix::zeros(r, r);
        for (j, row) in rows.iter().enumerate() {
            let col = cover.projection.matrix.column(offsets[*i] + j);
            for a in 0..r {
                if col[a].is_zero() {
                    continue;
                }
                for b in 0..r {
                    if !row[b].is_zero() {
                        let v = t.get(a, b) + &col[a] * &row[b];
                        t.set(a, b, v);
                    }
                }
            }
        }
        system_cols.push(t.entries().to_vec());
    }
    let target: Vec<BigInt> = IntMatrix::identity(r).entries().to_vec();

    // drop equations that are all zero or repeated
    let mut keep: Vec<usize> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for e in 0..r * r {
        let row: Vec<&BigInt> = system_cols.iter().map(|c| &c[e]).chain(std::iter::once(&target[e])).collect();
        if row.iter().all(|x| x.is_zero()) {
            continue;
        }
        if seen.insert(row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")) {
            keep.push(e);
        }
    }
    let a = IntMatrix::from_fn(keep.len(), system_cols.len(), |i, j| system_cols[j][keep[i]].clone());
    let b: Vec<BigInt> = keep.iter().map(|&e| target[e].clone()).collect();

    let Some(coeffs) = solve_integer(&a, &b)? else {
        return Ok(InvertibilityDecision {
            invertible: false,
            reason: InvertibilityReason::NoSection,
            witness: None,
            cover: Some(cover),
        });
    };
    let mut s = IntMatrix::zeros(cover.p.rank(), r);
    for ((i, phi), c) in candidates.iter().zip(&coeffs) {
        if c.is_zero() {
            continue;
        }
        for (j, row) in block_rows(*i, phi).iter().enumerate() {
            for (b, x) in row.iter().enumerate() {
                if !x.is_zero() {
                    let v = s.get(offsets[*i] + j, b) + c * x;
                    s.set(offsets[*i] + j, b, v);
                }
            }
        }
    }
    let witness = LatticeMap::new(m.clone(), cover.p.clone(), s)
        .map_err(|_| Error::internal("section candidate is not equivariant"))?;
    let decision = InvertibilityDecision {
        invertible: true,
        reason: InvertibilityReason::Section,
        witness: Some(witness),
        cover: Some(cover),
    };
    if !decision.verify_witness() {
        return Err(Error::internal("section fails the splitting equations"));
    }
    Ok(decision)
}

/// Per-subgroup `(Ĥ⁻¹, H¹)` of a flabby representative of `[M]^fl`.
///
/// Both groups vanish on permutation lattices and are additive, so the table
/// only depends on the flabby class. `Ĥ⁰` is left out: it is nonzero on
/// permutation lattices such as `Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassFingerprint {
    pub entries: Vec<cohomology::SubgroupCohomology>,
}

impl ClassFingerprint {
    pub fn is_trivial(&self) -> bool {
        self.entries.iter().all(|e| e.h_minus1.is_trivial() && e.h1.is_trivial())
    }

    pub fn to_value(&self) -> Value {
        Value::Array(
            self.entries
                .iter()
                .map(|e| {
                    json!({
                        "subgroup": e.subgroup.members(),
                        "h_minus1": e.h_minus1.divisors_u64(),
                        "h1": e.h1.divisors_u64(),
                    })
                })
                .collect(),
        )
    }
}

pub fn class_fingerprint(m: &GLattice, mode: SubgroupMode) -> Result<ClassFingerprint> {
    let res = flabby_resolution(m)?;
    let prof = cohomology::profile(&res.f, mode)?;
    Ok(ClassFingerprint { entries: prof.entries })
}

/// `is_invertible` applied to the flabby class.
pub fn flabby_class_invertible(m: &GLattice) -> Result<(FlabbyResolution, InvertibilityDecision)> {
    let res = flabby_resolution(m)?;
    let d = is_invertible(&res.f)?;
    Ok((res, d))
}
