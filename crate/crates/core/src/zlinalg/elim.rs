//! Unimodular row/column elimination shared by the Smith and Hermite routines.
//!
//! Every routine is written once over [`Scalar`]. It runs first on checked
//! `i64` arithmetic and is rerun on `BigInt` when an intermediate overflows,
//! so results are always exact.

use std::cmp::Ordering;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::IntMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Overflow;

pub(crate) type Checked<T> = std::result::Result<T, Overflow>;

pub(crate) trait Scalar: Clone + Debug + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn abs_cmp(&self, other: &Self) -> Ordering;
    fn neg(&self) -> Checked<Self>;
    fn add(&self, other: &Self) -> Checked<Self>;
    fn sub(&self, other: &Self) -> Checked<Self>;
    fn mul(&self, other: &Self) -> Checked<Self>;
    /// Floor division; `other` is nonzero.
    fn div_floor(&self, other: &Self) -> Checked<Self>;
    fn from_big(b: &BigInt) -> Checked<Self>;
    fn to_big(&self) -> BigInt;
}

impl Scalar for i64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn abs_cmp(&self, other: &Self) -> Ordering {
        self.unsigned_abs().cmp(&other.unsigned_abs())
    }
    fn neg(&self) -> Checked<Self> {
        self.checked_neg().ok_or(Overflow)
    }
    fn add(&self, other: &Self) -> Checked<Self> {
        self.checked_add(*other).ok_or(Overflow)
    }
    fn sub(&self, other: &Self) -> Checked<Self> {
        self.checked_sub(*other).ok_or(Overflow)
    }
    fn mul(&self, other: &Self) -> Checked<Self> {
        self.checked_mul(*other).ok_or(Overflow)
    }
    fn div_floor(&self, other: &Self) -> Checked<Self> {
        if *self == i64::MIN && *other == -1 {
            return Err(Overflow);
        }
        Ok(Integer::div_floor(self, other))
    }
    fn from_big(b: &BigInt) -> Checked<Self> {
        // Keep headroom so that a single product of two entries rarely overflows.
        match b.to_i64() {
            Some(x) if x.unsigned_abs() < (1 << 62) => Ok(x),
            _ => Err(Overflow),
        }
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Scalar for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn abs_cmp(&self, other: &Self) -> Ordering {
        self.magnitude().cmp(other.magnitude())
    }
    fn neg(&self) -> Checked<Self> {
        Ok(-self)
    }
    fn add(&self, other: &Self) -> Checked<Self> {
        Ok(self + other)
    }
    fn sub(&self, other: &Self) -> Checked<Self> {
        Ok(self - other)
    }
    fn mul(&self, other: &Self) -> Checked<Self> {
        Ok(self * other)
    }
    fn div_floor(&self, other: &Self) -> Checked<Self> {
        Ok(Integer::div_floor(self, other))
    }
    fn from_big(b: &BigInt) -> Checked<Self> {
        Ok(b.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// Row-major working matrix.
#[derive(Clone, Debug)]
pub(crate) struct Dense<T> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<T>,
}

impl<T: Scalar> Dense<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Dense { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut d = Self::zeros(n, n);
        for i in 0..n {
            d.data[i * n + i] = T::one();
        }
        d
    }

    pub fn from_int(m: &IntMatrix) -> Checked<Self> {
        let data = m.entries().iter().map(T::from_big).collect::<Checked<Vec<T>>>()?;
        Ok(Dense { rows: m.rows(), cols: m.cols(), data })
    }

    pub fn to_int(&self) -> IntMatrix {
        IntMatrix::from_entries(self.rows, self.cols, self.data.iter().map(T::to_big).collect())
            .expect("shape is consistent")
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] -= q * row[src]
    pub fn row_axpy(&mut self, dst: usize, src: usize, q: &T) -> Checked<()> {
        if q.is_zero() {
            return Ok(());
        }
        let c = self.cols;
        for j in 0..c {
            let s = &self.data[src * c + j];
            if s.is_zero() {
                continue;
            }
            let v = self.data[dst * c + j].sub(&q.mul(s)?)?;
            self.data[dst * c + j] = v;
        }
        Ok(())
    }

    /// col[dst] -= q * col[src]
    pub fn col_axpy(&mut self, dst: usize, src: usize, q: &T) -> Checked<()> {
        if q.is_zero() {
            return Ok(());
        }
        let c = self.cols;
        for i in 0..self.rows {
            let s = &self.data[i * c + src];
            if s.is_zero() {
                continue;
            }
            let v = self.data[i * c + dst].sub(&q.mul(s)?)?;
            self.data[i * c + dst] = v;
        }
        Ok(())
    }

    pub fn negate_row(&mut self, r: usize) -> Checked<()> {
        for j in 0..self.cols {
            let v = self.data[r * self.cols + j].neg()?;
            self.data[r * self.cols + j] = v;
        }
        Ok(())
    }

    pub fn negate_col(&mut self, c: usize) -> Checked<()> {
        for i in 0..self.rows {
            let v = self.data[i * self.cols + c].neg()?;
            self.data[i * self.cols + c] = v;
        }
        Ok(())
    }
}

/// Result of column-style Hermite reduction `A·V = [H | 0]`.
pub(crate) struct ColumnEchelon<T> {
    /// Same shape as the input; columns `rank..` are zero.
    pub reduced: Dense<T>,
    pub transform: Option<Dense<T>>,
    pub rank: usize,
    pub pivot_rows: Vec<usize>,
}

/// Column Hermite normal form by unimodular column operations.
///
/// Pivots are positive; in a pivot row the entries left of the pivot lie in
/// `[0, pivot)`. Among competing entries the one of least absolute value is
/// moved to the pivot position, lowest column index first.
pub(crate) fn column_echelon<T: Scalar>(a: &Dense<T>, track: bool) -> Checked<ColumnEchelon<T>> {
    let mut a = a.clone();
    let (m, n) = (a.rows, a.cols);
    let mut v = if track { Some(Dense::<T>::identity(n)) } else { None };
    let mut r = 0;
    let mut pivot_rows = Vec::new();
    for i in 0..m {
        if r == n {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for j in r..n {
                let x = a.at(i, j);
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some(b) if x.abs_cmp(a.at(i, b)) != Ordering::Less => {}
                    _ => best = Some(j),
                }
            }
            let Some(b) = best else { break };
            a.swap_cols(r, b);
            if let Some(v) = v.as_mut() {
                v.swap_cols(r, b);
            }
            let mut clean = true;
            for j in r + 1..n {
                if a.at(i, j).is_zero() {
                    continue;
                }
                let q = a.at(i, j).div_floor(a.at(i, r))?;
                a.col_axpy(j, r, &q)?;
                if let Some(v) = v.as_mut() {
                    v.col_axpy(j, r, &q)?;
                }
                if !a.at(i, j).is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if a.at(i, r).is_zero() {
            continue;
        }
        if a.at(i, r).is_negative() {
            a.negate_col(r)?;
            if let Some(v) = v.as_mut() {
                v.negate_col(r)?;
            }
        }
        for j in 0..r {
            if a.at(i, j).is_zero() {
                continue;
            }
            let q = a.at(i, j).div_floor(a.at(i, r))?;
            a.col_axpy(j, r, &q)?;
            if let Some(v) = v.as_mut() {
                v.col_axpy(j, r, &q)?;
            }
        }
        pivot_rows.push(i);
        r += 1;
    }
    Ok(ColumnEchelon { reduced: a, transform: v, rank: r, pivot_rows })
}

/// Result of Smith reduction `U·A·V = D`.
pub(crate) struct SmithReduction<T> {
    pub diag: Dense<T>,
    pub left: Option<Dense<T>>,
    pub right: Option<Dense<T>>,
    /// Extra columns carried through the row operations (`U·b`).
    pub carried: Vec<Vec<T>>,
    pub rank: usize,
}

/// Smith normal form with minimal-absolute-value pivoting.
///
/// Pivot ties are broken by smallest row, then smallest column index.
pub(crate) fn smith<T: Scalar>(
    a: &Dense<T>,
    track_left: bool,
    track_right: bool,
    carried: Vec<Vec<T>>,
) -> Checked<SmithReduction<T>> {
    let mut a = a.clone();
    let (m, n) = (a.rows, a.cols);
    // carried vectors are stored as the columns of a m x k matrix
    let k = carried.len();
    let mut b = Dense::<T>::zeros(m, k);
    for (c, vec) in carried.iter().enumerate() {
        assert_eq!(vec.len(), m, "carried vector length");
        for (i, x) in vec.iter().enumerate() {
            b.data[i * k + c] = x.clone();
        }
    }
    let mut u = if track_left { Some(Dense::<T>::identity(m)) } else { None };
    let mut v = if track_right { Some(Dense::<T>::identity(n)) } else { None };

    macro_rules! row_op {
        (swap $x:expr, $y:expr) => {{
            a.swap_rows($x, $y);
            b.swap_rows($x, $y);
            if let Some(u) = u.as_mut() {
                u.swap_rows($x, $y);
            }
        }};
        (axpy $d:expr, $s:expr, $q:expr) => {{
            a.row_axpy($d, $s, $q)?;
            b.row_axpy($d, $s, $q)?;
            if let Some(u) = u.as_mut() {
                u.row_axpy($d, $s, $q)?;
            }
        }};
        (neg $r:expr) => {{
            a.negate_row($r)?;
            b.negate_row($r)?;
            if let Some(u) = u.as_mut() {
                u.negate_row($r)?;
            }
        }};
    }
    macro_rules! col_op {
        (swap $x:expr, $y:expr) => {{
            a.swap_cols($x, $y);
            if let Some(v) = v.as_mut() {
                v.swap_cols($x, $y);
            }
        }};
        (axpy $d:expr, $s:expr, $q:expr) => {{
            a.col_axpy($d, $s, $q)?;
            if let Some(v) = v.as_mut() {
                v.col_axpy($d, $s, $q)?;
            }
        }};
    }

    let mut t = 0;
    while t < m.min(n) {
        // global minimal pivot in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let x = a.at(i, j);
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if x.abs_cmp(a.at(bi, bj)) != Ordering::Less => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        row_op!(swap t, pi);
        col_op!(swap t, pj);
        loop {
            // clear column t
            let mut dirty = false;
            for i in t + 1..m {
                if a.at(i, t).is_zero() {
                    continue;
                }
                let q = a.at(i, t).div_floor(a.at(t, t))?;
                row_op!(axpy i, t, &q);
                if !a.at(i, t).is_zero() {
                    dirty = true;
                }
            }
            // clear row t
            for j in t + 1..n {
                if a.at(t, j).is_zero() {
                    continue;
                }
                let q = a.at(t, j).div_floor(a.at(t, t))?;
                col_op!(axpy j, t, &q);
                if !a.at(t, j).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // move the smallest remaining entry of row/column t to the pivot
                let mut best = (t, t);
                for i in t + 1..m {
                    if !a.at(i, t).is_zero() && a.at(i, t).abs_cmp(a.at(best.0, best.1)) == Ordering::Less {
                        best = (i, t);
                    }
                }
                for j in t + 1..n {
                    if !a.at(t, j).is_zero() && a.at(t, j).abs_cmp(a.at(best.0, best.1)) == Ordering::Less {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    row_op!(swap t, best.0);
                }
                if best.1 != t {
                    col_op!(swap t, best.1);
                }
                continue;
            }
            // divisibility of the trailing block by the pivot
            let p = a.at(t, t).clone();
            let mut offender = None;
            'scan: for i in t + 1..m {
                for j in t + 1..n {
                    let x = a.at(i, j);
                    if x.is_zero() {
                        continue;
                    }
                    let q = x.div_floor(&p)?;
                    if !x.sub(&q.mul(&p)?)?.is_zero() {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => {
                    let minus_one = T::one().neg()?;
                    row_op!(axpy t, i, &minus_one);
                }
                None => break,
            }
        }
        if a.at(t, t).is_negative() {
            row_op!(neg t);
        }
        t += 1;
    }
    let carried = (0..k).map(|c| (0..m).map(|i| b.at(i, c).clone()).collect()).collect();
    Ok(SmithReduction { diag: a, left: u, right: v, carried, rank: t })
}

/// Runs `f` on `i64`, falling back to `BigInt` on overflow.
pub(crate) fn with_fallback<R>(small: impl FnOnce() -> Checked<R>, big: impl FnOnce() -> Checked<R>) -> R {
    match small() {
        Ok(r) => r,
        Err(Overflow) => big().expect("BigInt arithmetic cannot overflow"),
    }
}

pub(crate) fn big_vec<T: Scalar>(v: &[T]) -> Vec<BigInt> {
    v.iter().map(T::to_big).collect()
}

pub(crate) fn small_vec<T: Scalar>(v: &[BigInt]) -> Checked<Vec<T>> {
    v.iter().map(T::from_big).collect()
}
