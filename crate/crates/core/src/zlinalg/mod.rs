//! Exact integer linear algebra: Smith and Hermite normal forms, integral
//! kernels, integer linear systems and finitely generated abelian groups.

mod elim;
mod matrix;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use elim::{big_vec, column_echelon, small_vec, smith, with_fallback, Dense};

pub use matrix::IntMatrix;

/// `U·A·V = D` with `U`, `V` unimodular and `D` diagonal, `d1 | d2 | ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// Nonzero diagonal entries in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d.get(i, i).clone()).take_while(|x| !x.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    fn run<T: elim::Scalar>(a: &IntMatrix) -> elim::Checked<SmithDecomposition> {
        let r = smith(&Dense::<T>::from_int(a)?, true, true, Vec::new())?;
        Ok(SmithDecomposition {
            u: r.left.expect("tracked").to_int(),
            d: r.diag.to_int(),
            v: r.right.expect("tracked").to_int(),
        })
    }
    with_fallback(|| run::<i64>(a), || run::<BigInt>(a))
}

/// Invariant factors only (no transforms).
pub fn smith_invariants(a: &IntMatrix) -> Vec<BigInt> {
    fn run<T: elim::Scalar>(a: &IntMatrix) -> elim::Checked<Vec<BigInt>> {
        let r = smith(&Dense::<T>::from_int(a)?, false, false, Vec::new())?;
        Ok((0..r.rank).map(|i| r.diag.at(i, i).to_big()).collect())
    }
    with_fallback(|| run::<i64>(a), || run::<BigInt>(a))
}

/// Some integral `x` with `A·x = b`, or `None` when no integral solution exists.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if b.len() != a.rows() {
        return Err(Error::dim(format!("right-hand side has length {} but the matrix has {} rows", b.len(), a.rows())));
    }
    fn run<T: elim::Scalar>(a: &IntMatrix, b: &[BigInt]) -> elim::Checked<Option<Vec<BigInt>>> {
        let r = smith(&Dense::<T>::from_int(a)?, false, true, vec![small_vec::<T>(b)?])?;
        let c = &r.carried[0];
        if c[r.rank..].iter().any(|x| !x.is_zero()) {
            return Ok(None);
        }
        let mut y = vec![T::zero(); a.cols()];
        for i in 0..r.rank {
            let d = r.diag.at(i, i);
            let q = c[i].div_floor(d)?;
            if !c[i].sub(&q.mul(d)?)?.is_zero() {
                return Ok(None);
            }
            y[i] = q;
        }
        let v = r.right.expect("tracked");
        let mut x = vec![T::zero(); a.cols()];
        for (i, xi) in x.iter_mut().enumerate() {
            let mut s = T::zero();
            for (j, yj) in y.iter().enumerate().take(r.rank) {
                if yj.is_zero() || v.at(i, j).is_zero() {
                    continue;
                }
                s = s.add(&v.at(i, j).mul(yj)?)?;
            }
            *xi = s;
        }
        Ok(Some(big_vec(&x)))
    }
    Ok(with_fallback(|| run::<i64>(a, b), || run::<BigInt>(a, b)))
}

/// Column Hermite form of `A` restricted to its nonzero columns: a basis of
/// the column lattice in echelon form.
pub fn column_hermite(a: &IntMatrix) -> EchelonBasis {
    fn run<T: elim::Scalar>(a: &IntMatrix) -> elim::Checked<EchelonBasis> {
        let e = column_echelon(&Dense::<T>::from_int(a)?, false)?;
        let cols: Vec<usize> = (0..e.rank).collect();
        Ok(EchelonBasis { basis: e.reduced.to_int().select_columns(&cols), pivot_rows: e.pivot_rows })
    }
    with_fallback(|| run::<i64>(a), || run::<BigInt>(a))
}

/// Basis of the integral kernel `{x : A·x = 0}` as the columns of the
/// returned matrix, in column Hermite form. The basis spans the full kernel
/// lattice.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    kernel_echelon(a).basis
}

/// Kernel basis together with its echelon pivot data.
pub fn kernel_echelon(a: &IntMatrix) -> EchelonBasis {
    fn run<T: elim::Scalar>(a: &IntMatrix) -> elim::Checked<IntMatrix> {
        let e = column_echelon(&Dense::<T>::from_int(a)?, true)?;
        let v = e.transform.expect("tracked");
        let cols: Vec<usize> = (e.rank..a.cols()).collect();
        Ok(v.to_int().select_columns(&cols))
    }
    let raw = with_fallback(|| run::<i64>(a), || run::<BigInt>(a));
    column_hermite(&raw)
}

/// Invariants of `Z^ambient_rank / colspan(A)`.
pub fn cokernel_invariants(a: &IntMatrix, ambient_rank: usize) -> Result<AbelianInvariants> {
    if a.rows() != ambient_rank {
        return Err(Error::dim(format!("matrix has {} rows, ambient rank is {ambient_rank}", a.rows())));
    }
    let factors = smith_invariants(a);
    Ok(AbelianInvariants {
        free_rank: ambient_rank - factors.len(),
        divisors: factors.into_iter().filter(|d| !d.is_one()).collect(),
    })
}

/// A lattice basis in column echelon form, supporting exact coordinate
/// recovery by back substitution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EchelonBasis {
    pub basis: IntMatrix,
    pub pivot_rows: Vec<usize>,
}

impl EchelonBasis {
    pub fn ambient(&self) -> usize {
        self.basis.rows()
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    /// Integral coordinates of `v` in this basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.ambient(), "vector length mismatch");
        let mut residual = v.to_vec();
        let mut x = Vec::with_capacity(self.rank());
        for (j, &p) in self.pivot_rows.iter().enumerate() {
            let piv = self.basis.get(p, j);
            let (q, r) = residual[p].div_rem(piv);
            if !r.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for (i, res) in residual.iter_mut().enumerate().skip(p) {
                    let b = self.basis.get(i, j);
                    if !b.is_zero() {
                        *res -= &q * b;
                    }
                }
            }
            x.push(q);
        }
        if residual.iter().all(Zero::is_zero) {
            Some(x)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    /// Coordinates of every column of `m`; errors if one lies outside.
    pub fn coordinate_matrix(&self, m: &IntMatrix) -> Result<IntMatrix> {
        let cols = m
            .columns()
            .into_iter()
            .map(|c| self.coordinates(&c).ok_or_else(|| Error::internal("vector outside the expected sublattice")))
            .collect::<Result<Vec<_>>>()?;
        IntMatrix::from_columns(self.rank(), &cols)
    }
}

/// A finitely generated abelian group `Z/d1 + ... + Z/dk + Z^r` with
/// `1 < d1 | d2 | ... | dk`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct AbelianInvariants {
    #[serde(with = "crate::json::big_vec")]
    pub divisors: Vec<BigInt>,
    #[serde(default)]
    pub free_rank: usize,
}

impl AbelianInvariants {
    pub fn trivial() -> Self {
        Self::default()
    }

    /// Normalizes an arbitrary direct sum of cyclic groups.
    pub fn from_cyclic_orders(orders: &[BigInt], free_rank: usize) -> Self {
        let mut free = free_rank;
        let finite: Vec<BigInt> = orders
            .iter()
            .filter_map(|o| {
                if o.is_zero() {
                    free += 1;
                    None
                } else {
                    Some(o.abs())
                }
            })
            .collect();
        let n = finite.len();
        let mut diag = IntMatrix::zeros(n, n);
        for (i, o) in finite.into_iter().enumerate() {
            diag.set(i, i, o);
        }
        let inv = cokernel_invariants(&diag, n).expect("square");
        AbelianInvariants { divisors: inv.divisors, free_rank: free }
    }

    pub fn is_trivial(&self) -> bool {
        self.divisors.is_empty() && self.free_rank == 0
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Group order when finite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.divisors.iter().product())
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut all = self.divisors.clone();
        all.extend(other.divisors.iter().cloned());
        Self::from_cyclic_orders(&all, self.free_rank + other.free_rank)
    }

    pub fn divisors_u64(&self) -> Vec<u64> {
        use num_traits::ToPrimitive;
        self.divisors.iter().map(|d| d.to_u64().unwrap_or(u64::MAX)).collect()
    }

    /// The divisibility chain holds and every divisor exceeds one.
    pub fn is_normalized(&self) -> bool {
        self.divisors.iter().all(|d| d > &BigInt::one()) && self.divisors.windows(2).all(|w| (&w[1] % &w[0]).is_zero())
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self.divisors.iter().map(|d| format!("Z/{d}")).collect();
        if self.free_rank > 0 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

pub fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

pub fn big_vector(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(xs: &[i64]) -> Vec<BigInt> {
        big_vector(xs)
    }

    #[test]
    fn smith_of_small_example() {
        let a = IntMatrix::from_rows(&[[2, 4], [6, 8]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.d, IntMatrix::from_rows(&[[2, 0], [0, 4]]));
        assert_eq!(&(&s.u * &a) * &s.v, s.d);
    }

    #[test]
    fn smith_of_identity_and_zero() {
        let i3 = IntMatrix::identity(3);
        assert_eq!(smith_normal_form(&i3).d, i3);
        let z = IntMatrix::zeros(2, 3);
        let s = smith_normal_form(&z);
        assert_eq!(s.d, z);
        assert_eq!(s.u, IntMatrix::identity(2));
        assert_eq!(s.v, IntMatrix::identity(3));
    }

    #[test]
    fn solve_examples() {
        let a = IntMatrix::from_rows(&[[2]]);
        assert_eq!(solve_integer(&a, &bv(&[4])).unwrap(), Some(bv(&[2])));
        assert_eq!(solve_integer(&a, &bv(&[3])).unwrap(), None);
        let a = IntMatrix::from_rows(&[[1, 2], [3, 4]]);
        assert_eq!(solve_integer(&a, &bv(&[5, 11])).unwrap(), Some(bv(&[1, 2])));
        assert!(solve_integer(&a, &bv(&[1])).is_err());
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&IntMatrix::from_rows(&[[1, 1]]));
        assert_eq!(k.cols(), 1);
        let c = k.column(0);
        assert!(c == bv(&[1, -1]) || c == bv(&[-1, 1]));
        assert_eq!(kernel_basis(&IntMatrix::identity(3)).cols(), 0);
        let k = kernel_basis(&IntMatrix::from_rows(&[[2, 4]]));
        let c = k.column(0);
        assert!(c == bv(&[2, -1]) || c == bv(&[-2, 1]));
    }

    #[test]
    fn cokernel_examples() {
        let z2 = cokernel_invariants(&IntMatrix::from_rows(&[[2]]), 1).unwrap();
        assert_eq!(z2.divisors, bv(&[2]));
        assert!(cokernel_invariants(&IntMatrix::identity(2), 2).unwrap().is_trivial());
        let z6 = cokernel_invariants(&IntMatrix::from_rows(&[[2, 0], [0, 3]]), 2).unwrap();
        assert_eq!(z6.divisors, bv(&[6]));
        assert_eq!(z6.free_rank, 0);
        let free = cokernel_invariants(&IntMatrix::zeros(2, 0), 2).unwrap();
        assert_eq!(free.free_rank, 2);
        assert!(cokernel_invariants(&IntMatrix::zeros(2, 1), 3).is_err());
    }

    #[test]
    fn echelon_coordinates() {
        let b = column_hermite(&IntMatrix::from_rows(&[[2, 0], [0, 3], [1, 1]]));
        assert_eq!(b.rank(), 2);
        let v = bv(&[4, 6, 4]);
        let x = b.coordinates(&v).unwrap();
        assert_eq!(b.basis.mul_vec(&x), v);
        assert!(b.coordinates(&bv(&[1, 0, 0])).is_none());
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        let huge = 1i64 << 61;
        let a = IntMatrix::from_rows(&[[huge, 3], [7, huge - 1]]);
        let s = smith_normal_form(&a);
        assert_eq!(&(&s.u * &a) * &s.v, s.d);
        let det = a.determinant().unwrap();
        let prod: BigInt = s.invariant_factors().iter().product();
        assert_eq!(prod, det.abs());
    }

    #[test]
    fn abelian_normalization() {
        let g = AbelianInvariants::from_cyclic_orders(&bv(&[2, 3, 4]), 0);
        assert_eq!(g.divisors, bv(&[2, 12]));
        assert_eq!(g.order(), Some(BigInt::from(24)));
        assert_eq!(g.to_string(), "Z/2 + Z/12");
    }
}
