//! G-lattices: finite rank free abelian groups with a left action of a finite
//! group by unimodular matrices.
//!
//! Matrices act on column vectors: `g·e_j = Σ_i A(g)[i][j] e_i`, and
//! `A(gh) = A(g)·A(h)`.

mod doc;
mod lenstra;

use std::collections::VecDeque;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, Subgroup};
use crate::zlinalg::{EchelonBasis, IntMatrix};

pub use doc::{lattice_to_value, parse_lattice};
pub use lenstra::{degree as lenstra_degree, lenstra_lattice, LenstraData};

#[derive(Clone, Debug)]
pub struct GLattice {
    group: Arc<FiniteGroup>,
    rank: usize,
    gens: Arc<Vec<(usize, IntMatrix)>>,
    mats: Arc<Vec<IntMatrix>>,
}

impl PartialEq for GLattice {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && *self.group == *other.group && self.mats == other.mats
    }
}

impl Eq for GLattice {}

impl GLattice {
    /// Builds a lattice from matrices for a generating set of elements. The
    /// action is expanded to every element and checked to be a well-defined
    /// homomorphism into `GL(rank, Z)`.
    pub fn new(group: Arc<FiniteGroup>, rank: usize, action: Vec<(usize, IntMatrix)>) -> Result<Self> {
        for (g, a) in &action {
            if *g >= group.order() {
                return Err(Error::invalid(format!("action given for element {g} outside the group")));
            }
            if a.rows() != rank || a.cols() != rank {
                return Err(Error::invalid(format!(
                    "action matrix of element {g} is {}x{}, rank is {rank}",
                    a.rows(),
                    a.cols()
                )));
            }
            if !a.is_unimodular() {
                return Err(Error::invalid(format!("action matrix of element {g} is not unimodular")));
            }
        }
        let mut mats: Vec<Option<IntMatrix>> = vec![None; group.order()];
        mats[0] = Some(IntMatrix::identity(rank));
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (s, a) in &action {
                let y = group.mul(*s, x);
                let prod = a * mats[x].as_ref().expect("visited");
                match &mats[y] {
                    Some(existing) => {
                        if *existing != prod {
                            return Err(Error::invalid(format!(
                                "matrices do not define an action: two words for element {y} act differently"
                            )));
                        }
                    }
                    None => {
                        mats[y] = Some(prod);
                        queue.push_back(y);
                    }
                }
            }
        }
        if mats.iter().any(Option::is_none) {
            return Err(Error::invalid("the elements carrying an action do not generate the group"));
        }
        let mats: Vec<IntMatrix> = mats.into_iter().map(|m| m.expect("all visited")).collect();
        Ok(GLattice { group, rank, gens: Arc::new(action), mats: Arc::new(mats) })
    }

    /// Builds a lattice from matrices for the group's own generators.
    pub fn from_generator_matrices(group: Arc<FiniteGroup>, rank: usize, mats: Vec<IntMatrix>) -> Result<Self> {
        if mats.len() != group.generators().len() {
            return Err(Error::invalid("one matrix per group generator expected"));
        }
        let action = group.generators().iter().copied().zip(mats).collect();
        Self::new(group, rank, action)
    }

    /// Builds from a function giving the matrix of any element.
    pub(crate) fn from_element_fn(
        group: Arc<FiniteGroup>,
        rank: usize,
        f: impl Fn(usize) -> IntMatrix,
    ) -> Result<Self> {
        let action = group.generators().iter().map(|&g| (g, f(g))).collect();
        Self::new(group, rank, action)
    }

    pub fn trivial(group: Arc<FiniteGroup>, rank: usize) -> Self {
        Self::from_element_fn(group, rank, |_| IntMatrix::identity(rank)).expect("trivial action")
    }

    /// Rank one lattice on which elements outside the index-two subgroup
    /// `kernel` act by −1.
    pub fn sign(group: Arc<FiniteGroup>, kernel: &Subgroup) -> Result<Self> {
        if kernel.order() * 2 != group.order() {
            return Err(Error::invalid("sign lattice needs a subgroup of index two"));
        }
        kernel.check_in(&group)?;
        let k = kernel.clone();
        Self::from_element_fn(group, 1, move |g| IntMatrix::from_rows(&[[if k.contains(g) { 1 } else { -1 }]]))
    }

    #[inline]
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The matrices the lattice was built from, keyed by element index.
    pub fn generator_action(&self) -> &[(usize, IntMatrix)] {
        &self.gens
    }

    #[inline]
    pub fn matrix(&self, g: usize) -> &IntMatrix {
        &self.mats[g]
    }

    pub fn matrices(&self) -> &[IntMatrix] {
        &self.mats
    }

    /// Re-checks `A(gh) = A(g)A(h)` over all pairs and unimodularity.
    pub fn verify_homomorphism(&self) -> bool {
        let g = &self.group;
        self.mats[0].is_identity()
            && self.mats.iter().all(IntMatrix::is_unimodular)
            && (0..g.order()).all(|a| (0..g.order()).all(|b| self.mats[g.mul(a, b)] == &self.mats[a] * &self.mats[b]))
    }

    /// `A*(g) = A(g^-1)^T`.
    pub fn dual(&self) -> GLattice {
        let mats: Vec<IntMatrix> = (0..self.group.order()).map(|g| self.mats[self.group.inv(g)].transpose()).collect();
        let gens = self.gens.iter().map(|(g, _)| (*g, mats[*g].clone())).collect();
        GLattice { group: self.group.clone(), rank: self.rank, gens: Arc::new(gens), mats: Arc::new(mats) }
    }

    pub fn direct_sum(&self, other: &GLattice) -> Result<GLattice> {
        self.same_group(other)?;
        let mats: Vec<IntMatrix> = self.mats.iter().zip(other.mats.iter()).map(|(a, b)| a.block_diag(b)).collect();
        let gens = self.gens.iter().map(|(g, _)| (*g, mats[*g].clone())).collect();
        Ok(GLattice {
            group: self.group.clone(),
            rank: self.rank + other.rank,
            gens: Arc::new(gens),
            mats: Arc::new(mats),
        })
    }

    pub fn direct_sum_all(parts: &[GLattice]) -> Result<GLattice> {
        let (first, rest) = parts.split_first().ok_or_else(|| Error::invalid("empty direct sum"))?;
        rest.iter().try_fold(first.clone(), |acc, m| acc.direct_sum(m))
    }

    pub(crate) fn same_group(&self, other: &GLattice) -> Result<()> {
        if Arc::ptr_eq(&self.group, &other.group) || *self.group == *other.group {
            Ok(())
        } else {
            Err(Error::invalid("lattices are over different groups"))
        }
    }

    /// The same matrices viewed as a lattice over `h`, which becomes a
    /// standalone group with elements numbered by its sorted member list.
    pub fn restrict(&self, h: &Subgroup) -> Result<GLattice> {
        h.check_in(&self.group)?;
        let (sub, emb) = self.group.subgroup_as_group(h);
        let mats: Vec<IntMatrix> = emb.iter().map(|&x| self.mats[x].clone()).collect();
        let gens = sub.generators().iter().map(|&g| (g, mats[g].clone())).collect();
        Ok(GLattice { group: Arc::new(sub), rank: self.rank, gens: Arc::new(gens), mats: Arc::new(mats) })
    }

    /// Elements acting as the identity.
    pub fn action_kernel(&self) -> Subgroup {
        let members: Vec<usize> = (0..self.group.order()).filter(|&g| self.mats[g].is_identity()).collect();
        self.group.subgroup_from_members(&members).expect("kernel of a homomorphism")
    }

    pub fn is_faithful(&self) -> bool {
        self.action_kernel().is_trivial()
    }

    /// The action on the sublattice spanned by `basis`, in its coordinates.
    /// Errors if the sublattice is not stable.
    pub fn induced_on(&self, basis: &EchelonBasis) -> Result<GLattice> {
        if basis.ambient() != self.rank {
            return Err(Error::dim("sublattice basis lives in a different ambient rank"));
        }
        let action = self
            .group
            .generators()
            .iter()
            .map(|&g| {
                let image = &self.mats[g] * &basis.basis;
                basis
                    .coordinate_matrix(&image)
                    .map(|c| (g, c))
                    .map_err(|_| Error::invalid("sublattice is not stable under the group"))
            })
            .collect::<Result<Vec<_>>>()?;
        GLattice::new(self.group.clone(), basis.rank(), action)
    }

    /// `B^-1 A(g) B` for a unimodular `B` with known inverse.
    pub fn change_basis(&self, b: &IntMatrix, b_inv: &IntMatrix) -> Result<GLattice> {
        if !(b * b_inv).is_identity() || b.rows() != self.rank {
            return Err(Error::invalid("change of basis needs a unimodular matrix and its inverse"));
        }
        let action = self.gens.iter().map(|(g, a)| (*g, &(b_inv * a) * b)).collect();
        GLattice::new(self.group.clone(), self.rank, action)
    }

    /// Columns spanning the fixed sublattice `M^H`, in Hermite form.
    pub fn fixed_sublattice(&self, h: &Subgroup) -> EchelonBasis {
        let n = self.rank;
        let mut stacked = IntMatrix::zeros(0, n);
        for &g in h.generators() {
            let d = &self.mats[g] - &IntMatrix::identity(n);
            stacked = stacked.vstack(&d).expect("same width");
        }
        crate::zlinalg::kernel_echelon(&stacked)
    }

    /// `N_H = Σ_{h∈H} A(h)`.
    pub fn norm(&self, h: &Subgroup) -> IntMatrix {
        let mut acc = IntMatrix::zeros(self.rank, self.rank);
        for &x in h.members() {
            acc = &acc + &self.mats[x];
        }
        acc
    }

    /// Whether every matrix is a permutation matrix.
    pub fn is_visibly_permutation(&self) -> bool {
        self.gens.iter().all(|(_, a)| is_permutation_matrix(a))
    }
}

pub(crate) fn is_permutation_matrix(a: &IntMatrix) -> bool {
    (0..a.rows()).all(|i| {
        let row = a.row(i);
        row.iter().filter(|x| x.is_one()).count() == 1 && row.iter().all(|x| x.is_zero() || x.is_one())
    }) && (0..a.cols()).all(|j| (0..a.rows()).filter(|&i| a.get(i, j).is_one()).count() == 1)
}

/// `⊕ Z[G/H_i]`, basis the left cosets of each `H_i` ordered by smallest
/// representative.
pub fn permutation_lattice(group: Arc<FiniteGroup>, stabilizers: &[Subgroup]) -> Result<GLattice> {
    let mut blocks = Vec::with_capacity(stabilizers.len());
    for h in stabilizers {
        h.check_in(&group)?;
        blocks.push(coset_action(&group, h));
    }
    let rank = blocks.iter().map(|b| b.len()).sum();
    GLattice::from_element_fn(group.clone(), rank, |g| {
        let mut images = Vec::with_capacity(rank);
        let mut offset = 0;
        for b in &blocks {
            images.extend(b.iter().map(|row| row[g] + offset));
            offset += b.len();
        }
        IntMatrix::permutation(&images)
    })
}

/// For each coset index `c`, the coset index of `g·c` for every `g`.
fn coset_action(group: &FiniteGroup, h: &Subgroup) -> Vec<Vec<usize>> {
    let cosets = group.left_cosets(h);
    let label = group.coset_labels(h);
    cosets.iter().map(|c| (0..group.order()).map(|g| label[group.mul(g, c[0])]).collect()).collect()
}

pub fn regular_lattice(group: Arc<FiniteGroup>) -> GLattice {
    let triv = group.trivial_subgroup();
    permutation_lattice(group, &[triv]).expect("trivial subgroup")
}

/// An equivariant homomorphism `source → target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeMap {
    pub source: GLattice,
    pub target: GLattice,
    pub matrix: IntMatrix,
}

impl LatticeMap {
    pub fn new(source: GLattice, target: GLattice, matrix: IntMatrix) -> Result<Self> {
        source.same_group(&target)?;
        if matrix.rows() != target.rank() || matrix.cols() != source.rank() {
            return Err(Error::dim(format!(
                "map matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.rank(),
                source.rank()
            )));
        }
        let map = LatticeMap { source, target, matrix };
        if !map.is_equivariant() {
            return Err(Error::invalid("map is not equivariant"));
        }
        Ok(map)
    }

    pub fn is_equivariant(&self) -> bool {
        self.source
            .group()
            .generators()
            .iter()
            .all(|&g| &self.matrix * self.source.matrix(g) == self.target.matrix(g) * &self.matrix)
    }

    pub fn compose(&self, after: &LatticeMap) -> Result<LatticeMap> {
        LatticeMap::new(self.source.clone(), after.target.clone(), after.matrix.checked_mul(&self.matrix)?)
    }

    /// The transposed map between duals.
    pub fn dual(&self) -> LatticeMap {
        LatticeMap { source: self.target.dual(), target: self.source.dual(), matrix: self.matrix.transpose() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{catalog, cyclic};

    fn c2() -> Arc<FiniteGroup> {
        Arc::new(cyclic(2))
    }

    fn sign_c2() -> GLattice {
        let g = c2();
        let k = g.trivial_subgroup();
        GLattice::sign(g, &k).unwrap()
    }

    #[test]
    fn permutation_examples() {
        let g = c2();
        let z = regular_lattice(g.clone());
        assert_eq!(z.rank(), 2);
        assert_eq!(*z.matrix(1), IntMatrix::from_rows(&[[0, 1], [1, 0]]));
        let whole = g.whole();
        let t = permutation_lattice(g, &[whole]).unwrap();
        assert_eq!(t.rank(), 1);
        assert!(t.matrix(1).is_identity());

        let s3 = Arc::new(catalog("S3").unwrap());
        let h = s3.subgroups().unwrap()[1].clone();
        let p = permutation_lattice(s3, &[h]).unwrap();
        assert_eq!(p.rank(), 3);
        assert!(p.verify_homomorphism());
    }

    #[test]
    fn bad_action_rejected() {
        let g = c2();
        // x ↦ 2x is not unimodular; a matrix of order 4 does not give a C2 action
        assert!(GLattice::new(g.clone(), 1, vec![(1, IntMatrix::from_rows(&[[2]]))]).is_err());
        let rot = IntMatrix::from_rows(&[[0, -1], [1, 0]]);
        assert!(GLattice::new(g, 2, vec![(1, rot)]).is_err());
    }

    #[test]
    fn dual_examples() {
        let s = sign_c2();
        assert_eq!(s.dual(), s);
        let c3 = Arc::new(cyclic(3));
        let z = regular_lattice(c3);
        assert_eq!(z.dual().dual(), z);
        assert!(z.dual().is_visibly_permutation());
        let lz = lenstra_lattice(3).unwrap().m;
        assert_eq!(lz.dual().dual(), lz);
    }

    #[test]
    fn direct_sums() {
        let s = sign_c2();
        let ss = s.direct_sum(&s).unwrap();
        assert_eq!(*ss.matrix(1), IntMatrix::from_rows(&[[-1, 0], [0, -1]]));
        let z = regular_lattice(c2());
        assert_eq!(z.direct_sum(&s).unwrap().rank(), 3);
        let other = GLattice::trivial(Arc::new(cyclic(3)), 1);
        assert!(s.direct_sum(&other).is_err());
    }

    #[test]
    fn restriction() {
        let c4 = Arc::new(cyclic(4));
        let z = regular_lattice(c4.clone());
        let triv = c4.trivial_subgroup();
        let r = z.restrict(&triv).unwrap();
        assert_eq!(r.rank(), 4);
        assert!(r.matrices().iter().all(IntMatrix::is_identity));
        let c2_in_c4 = c4.subgroups().unwrap()[1].clone();
        assert_eq!(c2_in_c4.order(), 2);
        let r = z.restrict(&c2_in_c4).unwrap();
        assert!(r.is_visibly_permutation());
        // the order-two subgroup moves every basis vector: two free orbits
        assert!((0..4).all(|i| r.matrix(1).get(i, i).is_zero()));
    }

    #[test]
    fn kernels() {
        let g = Arc::new(catalog("V4").unwrap());
        assert!(regular_lattice(g.clone()).is_faithful());
        assert_eq!(GLattice::trivial(c2(), 1).action_kernel().order(), 2);
        // V4 = C2 x C2 with elements (a, b) at 2a + b; sign on the first factor
        let second = g.subgroup_from_members(&[0, 1]).unwrap();
        let m = GLattice::sign(g.clone(), &second).unwrap().direct_sum(&GLattice::trivial(g, 1)).unwrap();
        assert_eq!(m.action_kernel().members(), &[0, 1]);
    }

    #[test]
    fn equivariance_checked() {
        let g = c2();
        let z = regular_lattice(g.clone());
        let t = GLattice::trivial(g, 1);
        assert!(LatticeMap::new(z.clone(), t.clone(), IntMatrix::from_rows(&[[1, 1]])).is_ok());
        assert!(LatticeMap::new(z, t, IntMatrix::from_rows(&[[1, 0]])).is_err());
    }
}
