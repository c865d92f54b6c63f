//! Exact integer and rational linear algebra substrate.
//!
//! Dense matrices over arbitrary-precision scalars, Hermite and Smith normal
//! forms with unimodular transforms, and lattice arithmetic: saturation,
//! meet/join, quotient structure. Every value is immutable after construction
//! and every operation is a pure function, so concurrent use is safe. The
//! matrices in this problem domain are tiny (at most 16×16), so the
//! implementations favour exactness and clarity over asymptotics.

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

use crate::{Error, Result};

/// Arbitrary-precision integer scalar.
pub type Int = BigInt;
/// Arbitrary-precision rational scalar; stored reduced with positive denominator.
pub type Rat = BigRational;

/// Cosets are listed explicitly, so quotient enumeration is capped.
pub const QUOTIENT_ENUM_CAP: usize = 1_000_000;

/// Small-integer constructor.
pub fn int(n: i64) -> Int {
    Int::from(n)
}

/// Small-rational constructor; panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(int(num), int(den))
}

/// Reduce a rational into the half-open interval `[0, 1)`.
pub fn mod1(x: &Rat) -> Rat {
    x - x.floor()
}

/// Least common multiple of the denominators of a rational vector.
pub fn denominator_lcm(v: &[Rat]) -> Int {
    v.iter().fold(Int::one(), |l, x| l.lcm(x.denom()))
}

/// Rational vector from `(numerator, denominator)` machine-integer pairs.
pub fn vec_rat(v: &[(i64, i64)]) -> Vec<Rat> {
    v.iter().map(|&(n, d)| rat(n, d)).collect()
}

/// Integer vector from machine integers.
pub fn vec_int(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&n| int(n)).collect()
}

/// Parse an exact rational from `"p"` or `"p/q"` text.
pub fn parse_rat(s: &str) -> crate::Result<Rat> {
    let text = s.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let bad = || crate::Error::InvalidParameter(format!("malformed rational `{s}`"));
    let n: Int = num.parse().map_err(|_| bad())?;
    let d: Int = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(n, d))
}

/// Render a rational in lowest terms as `"p"` or `"p/q"`.
pub fn format_rat(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

// ---------------------------------------------------------------------------
// Integer matrices
// ---------------------------------------------------------------------------

/// Dense integer matrix, row-major. The derived ordering (shape, then
/// row-major entries) serves as the canonical encoding for deterministic
/// element and lattice lists.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatZ {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl std::fmt::Debug for MatZ {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "MatZ[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl MatZ {
    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.rows && j < self.cols);
        i * self.cols + j
    }

    /// Zero matrix of the given shape (zero columns are allowed for empty bases).
    pub fn zero(rows: usize, cols: usize) -> Self {
        MatZ { rows, cols, data: vec![Int::zero(); rows * cols] }
    }

    /// Identity matrix.
    pub fn identity(n: usize) -> Self {
        let mut m = MatZ::zero(n, n);
        for i in 0..n {
            m.data[i * n + i] = Int::one();
        }
        m
    }

    /// Diagonal matrix from the given entries.
    pub fn diag(entries: &[Int]) -> Self {
        let n = entries.len();
        let mut m = MatZ::zero(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
        m
    }

    /// Matrix from machine-integer rows; panics on ragged input.
    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        MatZ { rows: r, cols: c, data: rows.iter().flatten().map(|&x| int(x)).collect() }
    }

    /// Matrix from big-integer rows; panics on ragged input.
    pub fn from_rows(rows: &[Vec<Int>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        MatZ { rows: r, cols: c, data: rows.iter().flatten().cloned().collect() }
    }

    /// Matrix whose columns are the given vectors; panics on ragged input.
    pub fn from_cols(ambient: usize, cols: &[Vec<Int>]) -> Self {
        assert!(cols.iter().all(|c| c.len() == ambient), "column length mismatch");
        let mut m = MatZ::zero(ambient, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                m.data[i * cols.len() + j] = x.clone();
            }
        }
        m
    }

    /// Matrix with entries produced by `f(row, col)`.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Int) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        MatZ { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Int {
        &self.data[self.idx(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Int) {
        let k = self.idx(i, j);
        self.data[k] = v;
    }

    /// Row `i` as a fresh vector.
    pub fn row_vec(&self, i: usize) -> Vec<Int> {
        (0..self.cols).map(|j| self.at(i, j).clone()).collect()
    }

    /// Column `j` as a fresh vector.
    pub fn col_vec(&self, j: usize) -> Vec<Int> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    /// All rows as vectors (for serialization).
    pub fn to_row_vecs(&self) -> Vec<Vec<Int>> {
        (0..self.rows).map(|i| self.row_vec(i)).collect()
    }

    pub fn transpose(&self) -> MatZ {
        MatZ::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn add(&self, other: &MatZ) -> MatZ {
        assert!(self.rows == other.rows && self.cols == other.cols, "shape mismatch");
        MatZ::from_fn(self.rows, self.cols, |i, j| self.at(i, j) + other.at(i, j))
    }

    pub fn sub(&self, other: &MatZ) -> MatZ {
        assert!(self.rows == other.rows && self.cols == other.cols, "shape mismatch");
        MatZ::from_fn(self.rows, self.cols, |i, j| self.at(i, j) - other.at(i, j))
    }

    pub fn neg(&self) -> MatZ {
        MatZ::from_fn(self.rows, self.cols, |i, j| -self.at(i, j))
    }

    pub fn scale(&self, k: &Int) -> MatZ {
        MatZ::from_fn(self.rows, self.cols, |i, j| self.at(i, j) * k)
    }

    pub fn mul(&self, other: &MatZ) -> MatZ {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        MatZ::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = Int::zero();
            for k in 0..self.cols {
                acc += self.at(i, k) * other.at(k, j);
            }
            acc
        })
    }

    /// Matrix–vector product over the integers.
    pub fn mul_vec(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(self.cols, v.len(), "shape mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).fold(Int::zero(), |acc, k| acc + self.at(i, k) * &v[k]))
            .collect()
    }

    /// Matrix–vector product with a rational vector.
    pub fn mul_vec_rat(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len(), "shape mismatch");
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(Rat::zero(), |acc, k| {
                    acc + Rat::from_integer(self.at(i, k).clone()) * &v[k]
                })
            })
            .collect()
    }

    /// Naive matrix power (exponents here are tiny element orders).
    pub fn pow(&self, e: u64) -> MatZ {
        assert_eq!(self.rows, self.cols, "power of a non-square matrix");
        let mut acc = MatZ::identity(self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &MatZ) -> MatZ {
        assert_eq!(self.rows, other.rows, "row count mismatch");
        MatZ::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols { self.at(i, j).clone() } else { other.at(i, j - self.cols).clone() }
        })
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &MatZ) -> MatZ {
        assert_eq!(self.cols, other.cols, "column count mismatch");
        MatZ::from_fn(self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows { self.at(i, j).clone() } else { other.at(i - self.rows, j).clone() }
        })
    }

    /// Matrix formed by the selected columns, in the given order.
    pub fn select_cols(&self, cols: &[usize]) -> MatZ {
        MatZ::from_fn(self.rows, cols.len(), |i, j| self.at(i, cols[j]).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Int::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j { self.at(i, j).is_one() } else { self.at(i, j).is_zero() }
                })
            })
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.at(i, j).is_zero()))
    }

    pub fn trace(&self) -> Int {
        assert_eq!(self.rows, self.cols);
        (0..self.rows).fold(Int::zero(), |acc, i| acc + self.at(i, i))
    }

    /// Determinant via the fraction-free Bareiss elimination.
    pub fn det(&self) -> Int {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Int::one();
        }
        let mut m = self.data.clone();
        let mut sign_negative = false;
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if m[k * n + k].is_zero() {
                match (k + 1..n).find(|&i| !m[i * n + k].is_zero()) {
                    Some(i) => {
                        for j in 0..n {
                            m.swap(k * n + j, i * n + j);
                        }
                        sign_negative = !sign_negative;
                    }
                    None => return Int::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    // exact division is guaranteed by the Bareiss identity
                    let t = &m[i * n + j] * &m[k * n + k] - &m[i * n + k] * &m[k * n + j];
                    m[i * n + j] = &t / &prev;
                }
                m[i * n + k] = Int::zero();
            }
            prev = m[k * n + k].clone();
        }
        let d = m[(n - 1) * n + (n - 1)].clone();
        if sign_negative { -d } else { d }
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        self.to_q().rank()
    }

    /// Promote to a rational matrix.
    pub fn to_q(&self) -> MatQ {
        MatQ {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| Rat::from_integer(x.clone())).collect(),
        }
    }

    /// Inverse of a unimodular matrix (integral by Cramer's rule); panics otherwise.
    pub fn inv_unimodular(&self) -> MatZ {
        let inv = self.to_q().inverse().expect("matrix is singular, not unimodular");
        MatZ::from_fn(self.rows, self.cols, |i, j| {
            let e = inv.at(i, j);
            assert!(e.is_integer(), "matrix is not unimodular");
            e.to_integer()
        })
    }

    // -- in-place elementary operations used by the normal forms --

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            let (x, y) = (self.idx(a, j), self.idx(b, j));
            self.data.swap(x, y);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            let (x, y) = (self.idx(i, a), self.idx(i, b));
            self.data.swap(x, y);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let k = self.idx(r, j);
            self.data[k] = -std::mem::take(&mut self.data[k]);
        }
    }

    /// `row[i] -= q * row[r]`
    fn row_sub_scaled(&mut self, i: usize, r: usize, q: &Int) {
        for j in 0..self.cols {
            let t = self.at(r, j) * q;
            let k = self.idx(i, j);
            self.data[k] = &self.data[k] - &t;
        }
    }

    /// `col[j] -= q * col[c]`
    fn col_sub_scaled(&mut self, j: usize, c: usize, q: &Int) {
        for i in 0..self.rows {
            let t = self.at(i, c) * q;
            let k = self.idx(i, j);
            self.data[k] = &self.data[k] - &t;
        }
    }

    /// `row[i] += row[r]`
    fn row_add(&mut self, i: usize, r: usize) {
        for j in 0..self.cols {
            let t = self.at(r, j).clone();
            let k = self.idx(i, j);
            self.data[k] = &self.data[k] + &t;
        }
    }
}

// ---------------------------------------------------------------------------
// Rational matrices
// ---------------------------------------------------------------------------

/// Dense rational matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatQ {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl std::fmt::Debug for MatQ {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "MatQ[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl MatQ {
    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.rows && j < self.cols);
        i * self.cols + j
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        MatQ { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = MatQ::zero(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rat::one();
        }
        m
    }

    /// Matrix from `(numerator, denominator)` machine-integer rows.
    pub fn from_i64_rows(rows: &[Vec<(i64, i64)>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        MatQ { rows: r, cols: c, data: rows.iter().flatten().map(|&(n, d)| rat(n, d)).collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        MatQ { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Rat {
        &self.data[self.idx(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        let k = self.idx(i, j);
        self.data[k] = v;
    }

    pub fn transpose(&self) -> MatQ {
        MatQ::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn add(&self, other: &MatQ) -> MatQ {
        assert!(self.rows == other.rows && self.cols == other.cols, "shape mismatch");
        MatQ::from_fn(self.rows, self.cols, |i, j| self.at(i, j) + other.at(i, j))
    }

    pub fn sub(&self, other: &MatQ) -> MatQ {
        assert!(self.rows == other.rows && self.cols == other.cols, "shape mismatch");
        MatQ::from_fn(self.rows, self.cols, |i, j| self.at(i, j) - other.at(i, j))
    }

    pub fn scale(&self, k: &Rat) -> MatQ {
        MatQ::from_fn(self.rows, self.cols, |i, j| self.at(i, j) * k)
    }

    pub fn mul(&self, other: &MatQ) -> MatQ {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        MatQ::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = Rat::zero();
            for k in 0..self.cols {
                acc += self.at(i, k) * other.at(k, j);
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len(), "shape mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).fold(Rat::zero(), |acc, k| acc + self.at(i, k) * &v[k]))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rat::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j { self.at(i, j).is_one() } else { self.at(i, j).is_zero() }
                })
            })
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.at(i, j) == self.at(j, i)))
    }

    /// Sylvester's criterion on the denominator-cleared integer matrix.
    pub fn is_positive_definite(&self) -> bool {
        if !self.is_symmetric() {
            return false;
        }
        let (m, _) = self.clear_denominators();
        (1..=m.rows()).all(|k| {
            let minor = MatZ::from_fn(k, k, |i, j| m.at(i, j).clone());
            minor.det().is_positive()
        })
    }

    /// `(M, l)` with `M = l·self` integral and `l > 0` the denominator lcm.
    pub fn clear_denominators(&self) -> (MatZ, Int) {
        let l = denominator_lcm(&self.data);
        let m = MatZ::from_fn(self.rows, self.cols, |i, j| {
            let scaled = self.at(i, j) * Rat::from_integer(l.clone());
            debug_assert!(scaled.is_integer());
            scaled.to_integer()
        });
        (m, l)
    }

    /// Rank via Gauss–Jordan elimination.
    pub fn rank(&self) -> usize {
        let (_, pivots) = rref(self.clone());
        pivots.len()
    }

    /// Exact inverse; `None` when singular.
    pub fn inverse(&self) -> Option<MatQ> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let aug = MatQ::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.at(i, j).clone()
            } else if j - n == i {
                Rat::one()
            } else {
                Rat::zero()
            }
        });
        let (red, pivots) = rref(aug);
        if pivots.len() != n || pivots.iter().enumerate().any(|(k, &c)| c != k) {
            return None;
        }
        Some(MatQ::from_fn(n, n, |i, j| red.at(i, j + n).clone()))
    }

    /// One solution of `self · x = b`, with free variables set to zero; `None` if inconsistent.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(self.rows, b.len(), "shape mismatch");
        let aug = MatQ::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols { self.at(i, j).clone() } else { b[i].clone() }
        });
        let (red, pivots) = rref(aug);
        // a pivot in the augmented column means the system is inconsistent
        if pivots.last().is_some_and(|&c| c == self.cols) {
            return None;
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = red.at(r, self.cols).clone();
        }
        Some(x)
    }

    /// Basis of the right kernel `{x : self · x = 0}`.
    pub fn kernel_basis(&self) -> Vec<Vec<Rat>> {
        let (red, pivots) = rref(self.clone());
        let pivot_set: Vec<usize> = pivots.clone();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![Rat::zero(); self.cols];
            v[free] = Rat::one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = -red.at(r, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            let (x, y) = (self.idx(a, j), self.idx(b, j));
            self.data.swap(x, y);
        }
    }

    fn scale_row(&mut self, r: usize, f: &Rat) {
        for j in 0..self.cols {
            let k = self.idx(r, j);
            self.data[k] = &self.data[k] * f;
        }
    }

    fn row_sub_scaled(&mut self, i: usize, r: usize, f: &Rat) {
        for j in 0..self.cols {
            let t = self.at(r, j) * f;
            let k = self.idx(i, j);
            self.data[k] = &self.data[k] - &t;
        }
    }
}

/// Reduced row echelon form; returns the reduced matrix and its pivot columns.
fn rref(mut a: MatQ) -> (MatQ, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(p) = (r..a.rows).find(|&i| !a.at(i, c).is_zero()) else {
            continue;
        };
        a.swap_rows(r, p);
        let inv = a.at(r, c).recip();
        a.scale_row(r, &inv);
        for i in 0..a.rows {
            if i != r && !a.at(i, c).is_zero() {
                let f = a.at(i, c).clone();
                a.row_sub_scaled(i, r, &f);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

// ---------------------------------------------------------------------------
// Normal forms
// ---------------------------------------------------------------------------

/// Row-style Hermite normal form: `(H, U)` with `U·M = H` and `U` unimodular.
///
/// Pivot entries are positive, entries above a pivot are reduced into
/// `[0, pivot)`, pivot columns strictly increase, zero rows sit at the bottom.
pub fn row_hnf(m: &MatZ) -> (MatZ, MatZ) {
    let mut h = m.clone();
    let mut u = MatZ::identity(m.rows());
    let (rows, cols) = (m.rows(), m.cols());
    let mut r = 0;
    'columns: for c in 0..cols {
        if r == rows {
            break;
        }
        // euclidean elimination below row r in column c; the smallest nonzero
        // |entry| is promoted to the pivot each pass to keep numbers small
        loop {
            let mut pivot: Option<usize> = None;
            for i in r..rows {
                if !h.at(i, c).is_zero()
                    && pivot.is_none_or(|p| h.at(i, c).abs() < h.at(p, c).abs())
                {
                    pivot = Some(i);
                }
            }
            let Some(p) = pivot else { continue 'columns };
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut clean = true;
            for i in (r + 1)..rows {
                if h.at(i, c).is_zero() {
                    continue;
                }
                let q = h.at(i, c).div_floor(h.at(r, c));
                if !q.is_zero() {
                    h.row_sub_scaled(i, r, &q);
                    u.row_sub_scaled(i, r, &q);
                }
                if !h.at(i, c).is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h.at(r, c).is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        let pivot_val = h.at(r, c).clone();
        for i in 0..r {
            let q = h.at(i, c).div_floor(&pivot_val);
            if !q.is_zero() {
                h.row_sub_scaled(i, r, &q);
                u.row_sub_scaled(i, r, &q);
            }
        }
        r += 1;
    }
    (h, u)
}

/// Column-style Hermite normal form: `(H, U)` with `M·U = H` and `U` unimodular.
///
/// `H` is the unique column HNF: pivot entries positive, entries left of a
/// pivot in its row reduced into `[0, pivot)`, pivot rows strictly increasing,
/// zero columns pushed to the right.
pub fn hnf(m: &MatZ) -> (MatZ, MatZ) {
    let (ht, ut) = row_hnf(&m.transpose());
    (ht.transpose(), ut.transpose())
}

/// Smith normal form: `(D, U, V)` with `U·M·V = D` diagonal, `U`, `V`
/// unimodular, and nonnegative diagonal entries satisfying `d₁ | d₂ | ⋯`
/// with zeros after the rank.
pub fn snf(m: &MatZ) -> (MatZ, MatZ, MatZ) {
    let mut d = m.clone();
    let mut u = MatZ::identity(m.rows());
    let mut v = MatZ::identity(m.cols());
    let (rows, cols) = (m.rows(), m.cols());
    let steps = rows.min(cols);
    'pivots: for t in 0..steps {
        // smallest-magnitude nonzero entry of the trailing block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !d.at(i, j).is_zero()
                    && best.is_none_or(|(bi, bj)| d.at(i, j).abs() < d.at(bi, bj).abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break 'pivots };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        'reduce: loop {
            // clear column t below the pivot
            'column: loop {
                let mut p = t;
                for i in t..rows {
                    if !d.at(i, t).is_zero()
                        && (d.at(p, t).is_zero() || d.at(i, t).abs() < d.at(p, t).abs())
                    {
                        p = i;
                    }
                }
                d.swap_rows(t, p);
                u.swap_rows(t, p);
                let mut clean = true;
                for i in (t + 1)..rows {
                    if d.at(i, t).is_zero() {
                        continue;
                    }
                    let q = d.at(i, t).div_floor(d.at(t, t));
                    if !q.is_zero() {
                        d.row_sub_scaled(i, t, &q);
                        u.row_sub_scaled(i, t, &q);
                    }
                    if !d.at(i, t).is_zero() {
                        clean = false;
                    }
                }
                if clean {
                    break 'column;
                }
            }
            // clear row t right of the pivot (column swaps may dirty column t)
            'row: loop {
                let mut p = t;
                for j in t..cols {
                    if !d.at(t, j).is_zero()
                        && (d.at(t, p).is_zero() || d.at(t, j).abs() < d.at(t, p).abs())
                    {
                        p = j;
                    }
                }
                d.swap_cols(t, p);
                v.swap_cols(t, p);
                let mut clean = true;
                for j in (t + 1)..cols {
                    if d.at(t, j).is_zero() {
                        continue;
                    }
                    let q = d.at(t, j).div_floor(d.at(t, t));
                    if !q.is_zero() {
                        d.col_sub_scaled(j, t, &q);
                        v.col_sub_scaled(j, t, &q);
                    }
                    if !d.at(t, j).is_zero() {
                        clean = false;
                    }
                }
                if clean {
                    break 'row;
                }
            }
            if (t + 1..rows).any(|i| !d.at(i, t).is_zero()) {
                continue 'reduce;
            }
            // divisibility: the pivot must divide the whole trailing block
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !d.at(i, j).mod_floor(d.at(t, t)).is_zero());
            match offender {
                Some((i, _)) => {
                    d.row_add(t, i);
                    u.row_add(t, i);
                }
                None => break 'reduce,
            }
        }
        if d.at(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    debug_assert!(d.is_diagonal());
    debug_assert!((1..steps).all(|t| {
        d.at(t, t).is_zero() || d.at(t, t).mod_floor(d.at(t - 1, t - 1)).is_zero()
    }));
    (d, u, v)
}

/// Invariant factors (the nonzero diagonal of the Smith form).
pub fn invariant_factors(m: &MatZ) -> Vec<Int> {
    let (d, _, _) = snf(m);
    (0..m.rows().min(m.cols()))
        .map(|i| d.at(i, i).clone())
        .filter(|x| !x.is_zero())
        .collect()
}

/// Basis of the integer kernel `{x ∈ Z^cols : M·x = 0}` as a lattice.
pub fn kernel_lattice(m: &MatZ) -> LatticeBasis {
    let (d, _, v) = snf(m);
    let rank = (0..m.rows().min(m.cols())).filter(|&i| !d.at(i, i).is_zero()).count();
    let gens: Vec<Vec<Int>> = (rank..m.cols()).map(|j| v.col_vec(j)).collect();
    LatticeBasis::from_generators(m.cols(), &gens)
}

// ---------------------------------------------------------------------------
// Lattices
// ---------------------------------------------------------------------------

/// A sublattice of `Z^d`, stored as the canonical column Hermite normal form
/// of a basis matrix (zero columns dropped; the basis may be empty). Equality
/// and ordering are therefore decided by the canonical form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeBasis {
    basis: MatZ, // d×r, canonical column HNF, full column rank
}

impl std::fmt::Debug for LatticeBasis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "LatticeBasis(ambient {}, rank {}, basis {:?})", self.ambient(), self.rank(), self.basis)
    }
}

impl LatticeBasis {
    /// Lattice generated by the given vectors (dependent generators welcome).
    pub fn from_generators(ambient: usize, gens: &[Vec<Int>]) -> Self {
        assert!(ambient > 0, "ambient dimension must be positive");
        if gens.is_empty() {
            return LatticeBasis { basis: MatZ::zero(ambient, 0) };
        }
        let (h, _) = hnf(&MatZ::from_cols(ambient, gens));
        let nonzero: Vec<usize> =
            (0..h.cols()).filter(|&j| !h.col_vec(j).iter().all(Int::is_zero)).collect();
        LatticeBasis { basis: h.select_cols(&nonzero) }
    }

    /// Lattice generated by the columns of a matrix.
    pub fn from_cols_matrix(m: &MatZ) -> Self {
        let gens: Vec<Vec<Int>> = (0..m.cols()).map(|j| m.col_vec(j)).collect();
        LatticeBasis::from_generators(m.rows(), &gens)
    }

    /// The full standard lattice `Z^d`.
    pub fn standard(d: usize) -> Self {
        LatticeBasis { basis: MatZ::identity(d) }
    }

    /// The zero lattice in `Z^d`.
    pub fn empty(d: usize) -> Self {
        assert!(d > 0);
        LatticeBasis { basis: MatZ::zero(d, 0) }
    }

    pub fn ambient(&self) -> usize {
        self.basis.rows()
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.rank() == 0
    }

    /// Canonical basis matrix (columns are the basis vectors).
    pub fn basis_matrix(&self) -> &MatZ {
        &self.basis
    }

    /// Basis vectors as columns.
    pub fn vectors(&self) -> Vec<Vec<Int>> {
        (0..self.rank()).map(|j| self.basis.col_vec(j)).collect()
    }

    /// Pivot row of each basis column (strictly increasing by HNF shape).
    fn pivot_rows(&self) -> Vec<usize> {
        (0..self.rank())
            .map(|j| (0..self.ambient()).find(|&i| !self.basis.at(i, j).is_zero()).unwrap())
            .collect()
    }

    /// Coordinates of `v` in this basis over the rationals; `None` if `v` is
    /// outside the Q-span. Exact back-substitution along HNF pivots.
    pub fn solve_coords_rat(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(v.len(), self.ambient(), "vector length mismatch");
        let pivots = self.pivot_rows();
        let mut residual = v.to_vec();
        let mut coords = vec![Rat::zero(); self.rank()];
        for j in 0..self.rank() {
            let p = pivots[j];
            let c = &residual[p] / Rat::from_integer(self.basis.at(p, j).clone());
            if !c.is_zero() {
                for (i, r) in residual.iter_mut().enumerate() {
                    let t = &c * Rat::from_integer(self.basis.at(i, j).clone());
                    *r = &*r - &t;
                }
            }
            coords[j] = c;
        }
        if residual.iter().all(Rat::is_zero) {
            Some(coords)
        } else {
            None
        }
    }

    /// Integer-vector membership.
    pub fn contains_int(&self, v: &[Int]) -> bool {
        let as_rat: Vec<Rat> = v.iter().map(|x| Rat::from_integer(x.clone())).collect();
        self.solve_coords_rat(&as_rat).is_some_and(|c| c.iter().all(Rat::is_integer))
    }

    /// Whether every basis vector of `other` lies in `self`.
    pub fn contains_lattice(&self, other: &LatticeBasis) -> bool {
        other.vectors().iter().all(|v| self.contains_int(v))
    }

    /// The lattice scaled by a nonzero integer.
    pub fn scaled(&self, k: &Int) -> LatticeBasis {
        assert!(!k.is_zero());
        let gens: Vec<Vec<Int>> =
            self.vectors().into_iter().map(|v| v.into_iter().map(|x| x * k).collect()).collect();
        LatticeBasis::from_generators(self.ambient(), &gens)
    }

    /// Smallest sublattice containing `self` with torsion-free quotient of
    /// the ambient lattice and the same Q-span.
    pub fn saturate(&self) -> LatticeBasis {
        if self.is_empty() {
            return self.clone();
        }
        let (_, u, _) = snf(&self.basis);
        let uinv = u.inv_unimodular();
        // the Q-span meets Z^d exactly in the span of the first rank columns of U⁻¹
        let gens: Vec<Vec<Int>> = (0..self.rank()).map(|j| uinv.col_vec(j)).collect();
        LatticeBasis::from_generators(self.ambient(), &gens)
    }

    /// Index of `self` inside `sup` (same rank, containment required).
    pub fn index_in(&self, sup: &LatticeBasis) -> Result<Int> {
        let x = change_of_basis(sup, self)?;
        Ok(x.det().abs())
    }
}

/// Integer matrix `X` with `small = sup_basis · X`; errors if ranks differ or
/// containment fails.
fn change_of_basis(sup: &LatticeBasis, small: &LatticeBasis) -> Result<MatZ> {
    if sup.ambient() != small.ambient() {
        return Err(Error::Mismatch(format!(
            "ambient ranks differ: {} vs {}",
            sup.ambient(),
            small.ambient()
        )));
    }
    if sup.rank() != small.rank() {
        return Err(Error::Mismatch(format!(
            "lattice ranks differ: {} vs {}",
            sup.rank(),
            small.rank()
        )));
    }
    let r = sup.rank();
    let mut x = MatZ::zero(r, r);
    for (j, col) in small.vectors().into_iter().enumerate() {
        let as_rat: Vec<Rat> = col.iter().map(|v| Rat::from_integer(v.clone())).collect();
        let coords = sup
            .solve_coords_rat(&as_rat)
            .ok_or_else(|| Error::NotContained("column outside the Q-span".into()))?;
        for (i, c) in coords.into_iter().enumerate() {
            if !c.is_integer() {
                return Err(Error::NotContained("column not an integer combination".into()));
            }
            x.set(i, j, c.to_integer());
        }
    }
    Ok(x)
}

/// Sum and intersection of two sublattices of a common `Z^d`.
pub fn lattice_meet_join(
    l1: &LatticeBasis,
    l2: &LatticeBasis,
) -> Result<(LatticeBasis, LatticeBasis)> {
    if l1.ambient() != l2.ambient() {
        return Err(Error::Mismatch(format!(
            "ambient ranks differ: {} vs {}",
            l1.ambient(),
            l2.ambient()
        )));
    }
    let d = l1.ambient();
    let mut gens = l1.vectors();
    gens.extend(l2.vectors());
    let sum = LatticeBasis::from_generators(d, &gens);
    let intersection = if l1.is_empty() || l2.is_empty() {
        LatticeBasis::empty(d)
    } else {
        // x ∈ L1 ∩ L2 ⟺ x = B1·α = B2·β with (α, β) in the integer kernel of [B1 | -B2]
        let stacked = l1.basis_matrix().hstack(&l2.basis_matrix().neg());
        let kernel = kernel_lattice(&stacked);
        let r1 = l1.rank();
        let gens: Vec<Vec<Int>> = kernel
            .vectors()
            .into_iter()
            .map(|ab| l1.basis_matrix().mul_vec(&ab[..r1]))
            .collect();
        LatticeBasis::from_generators(d, &gens)
    };
    Ok((sum, intersection))
}

/// Structure of the finite quotient `L_big / L_small`.
///
/// Returns the invariant factors greater than 1 and the full coset list in a
/// deterministic order. Each representative is given by rational coordinates
/// with respect to the basis of `L_small`, every coordinate reduced into
/// `[0, 1)`, so the representatives are torsion points of the torus defined
/// by `L_small`.
pub fn quotient_structure(
    l_big: &LatticeBasis,
    l_small: &LatticeBasis,
) -> Result<(Vec<Int>, Vec<Vec<Rat>>)> {
    let x = change_of_basis(l_big, l_small)?;
    let (d, _, v) = snf(&x);
    let r = x.rows();
    let factors_all: Vec<Int> = (0..r).map(|i| d.at(i, i).clone()).collect();
    let index = factors_all.iter().fold(Int::one(), |acc, f| acc * f);
    debug_assert_eq!(index, x.det().abs());
    let index_usize =
        usize::try_from(&index).map_err(|_| Error::CapExceeded {
            what: "coset enumeration",
            cap: QUOTIENT_ENUM_CAP,
        })?;
    if index_usize > QUOTIENT_ENUM_CAP {
        return Err(Error::CapExceeded { what: "coset enumeration", cap: QUOTIENT_ENUM_CAP });
    }
    // mixed-radix enumeration: digit k_i < d_i, first digit slowest
    let mut reps = Vec::with_capacity(index_usize);
    let mut digits = vec![Int::zero(); r];
    loop {
        let scaled: Vec<Rat> = (0..r)
            .map(|i| Rat::new(digits[i].clone(), factors_all[i].clone()))
            .collect();
        let rep: Vec<Rat> = v.mul_vec_rat(&scaled).iter().map(mod1).collect();
        reps.push(rep);
        // increment the mixed-radix counter, last digit fastest
        let mut pos = r;
        while pos > 0 {
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < factors_all[pos] {
                break;
            }
            digits[pos] = Int::zero();
            if pos == 0 {
                digits.clear(); // counter wrapped: enumeration complete
            }
        }
        if digits.is_empty() || r == 0 {
            break;
        }
    }
    debug_assert_eq!(reps.len(), index_usize);
    let factors: Vec<Int> = factors_all.into_iter().filter(|f| !f.is_one()).collect();
    Ok((factors, reps))
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(ambient: usize, gens: &[Vec<i64>]) -> LatticeBasis {
        let gens: Vec<Vec<Int>> = gens.iter().map(|g| vec_int(g)).collect();
        LatticeBasis::from_generators(ambient, &gens)
    }

    #[test]
    fn rational_text_round_trip() {
        assert_eq!(parse_rat("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rat(" -1/2 ").unwrap(), rat(-1, 2));
        assert_eq!(parse_rat("5").unwrap(), rat(5, 1));
        assert_eq!(parse_rat("2/4").unwrap(), rat(1, 2));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
        assert_eq!(format_rat(&rat(-2, 6)), "-1/3");
        assert_eq!(format_rat(&rat(4, 2)), "2");
    }

    #[test]
    fn hnf_already_diagonal() {
        let m = MatZ::diag(&vec_int(&[2, 3]));
        let (h, u) = hnf(&m);
        assert_eq!(h, m);
        assert!(u.is_identity());
    }

    #[test]
    fn hnf_single_row_gcd() {
        let m = MatZ::from_i64_rows(&[vec![2, 4]]);
        let (h, u) = hnf(&m);
        assert_eq!(h, MatZ::from_i64_rows(&[vec![2, 0]]));
        assert_eq!(m.mul(&u), h);
        assert_eq!(u.det().abs(), int(1));
    }

    #[test]
    fn hnf_unimodular_is_identity() {
        for m in [
            MatZ::from_i64_rows(&[vec![1, 1], vec![0, 1]]),
            MatZ::from_i64_rows(&[vec![2, 3], vec![1, 2]]),
            MatZ::from_i64_rows(&[vec![-3, 2], vec![-2, 1]]),
        ] {
            let (h, u) = hnf(&m);
            assert!(h.is_identity(), "expected identity, got {h:?}");
            assert_eq!(m.mul(&u), h);
        }
    }

    #[test]
    fn hnf_reduction_convention() {
        // column HNF: entries left of a pivot must lie in [0, pivot)
        let m = MatZ::from_i64_rows(&[vec![4, 1], vec![0, 3]]);
        let (h, u) = hnf(&m);
        assert_eq!(m.mul(&u), h);
        assert_eq!(u.det().abs(), int(1));
        // pivots positive, increasing pivot rows
        assert!(h.at(0, 0).is_positive());
        assert!(h.at(1, 1).is_positive());
        assert!(h.at(1, 0) >= &int(0) && h.at(1, 0) < h.at(1, 1));
        assert!(h.at(0, 1).is_zero());
    }

    #[test]
    fn snf_diag_2_3() {
        let m = MatZ::diag(&vec_int(&[2, 3]));
        let (d, u, v) = snf(&m);
        assert_eq!(d, MatZ::diag(&vec_int(&[1, 6])));
        assert_eq!(u.mul(&m).mul(&v), d);
        assert_eq!(u.det().abs(), int(1));
        assert_eq!(v.det().abs(), int(1));
    }

    #[test]
    fn snf_identity() {
        let m = MatZ::identity(3);
        let (d, _, _) = snf(&m);
        assert!(d.is_identity());
    }

    #[test]
    fn snf_two_i4() {
        let m = MatZ::identity(4).scale(&int(2));
        let (d, u, v) = snf(&m);
        assert_eq!(d, MatZ::diag(&vec_int(&[2, 2, 2, 2])));
        assert_eq!(u.mul(&m).mul(&v), d);
    }

    #[test]
    fn snf_rectangular_and_rank_deficient() {
        let m = MatZ::from_i64_rows(&[vec![2, 4, 6], vec![4, 8, 12]]);
        let (d, u, v) = snf(&m);
        assert_eq!(u.mul(&m).mul(&v), d);
        assert_eq!(d.at(0, 0), &int(2));
        assert!(d.at(1, 1).is_zero());
    }

    #[test]
    fn det_matches_known_values() {
        assert_eq!(MatZ::from_i64_rows(&[vec![1, 2], vec![3, 4]]).det(), int(-2));
        assert_eq!(MatZ::identity(5).det(), int(1));
        assert_eq!(
            MatZ::from_i64_rows(&[vec![2, 0, 1], vec![1, 1, 0], vec![0, 3, 1]]).det(),
            int(5)
        );
        assert_eq!(MatZ::from_i64_rows(&[vec![1, 2], vec![2, 4]]).det(), int(0));
    }

    #[test]
    fn saturate_scaled_generator() {
        let l = lat(2, &[vec![2, 0]]);
        assert_eq!(l.saturate(), lat(2, &[vec![1, 0]]));
    }

    #[test]
    fn saturate_checkerboard_is_full() {
        let l = lat(2, &[vec![1, 1], vec![1, -1]]);
        let sat = l.saturate();
        assert_eq!(sat, LatticeBasis::standard(2));
        assert_eq!(l.index_in(&sat).unwrap(), int(2));
    }

    #[test]
    fn saturate_full_rank_sublattice_is_standard() {
        let l = lat(3, &[vec![2, 1, 0], vec![0, 3, 1], vec![1, 0, 4]]);
        assert_eq!(l.basis_matrix().rank(), 3);
        assert_eq!(l.saturate(), LatticeBasis::standard(3));
    }

    #[test]
    fn saturate_is_idempotent() {
        let l = lat(3, &[vec![2, 4, 0], vec![0, 6, 2]]);
        let s = l.saturate();
        assert_eq!(s.saturate(), s);
    }

    #[test]
    fn meet_join_axes() {
        let l1 = lat(2, &[vec![1, 0]]);
        let l2 = lat(2, &[vec![0, 1]]);
        let (sum, meet) = lattice_meet_join(&l1, &l2).unwrap();
        assert_eq!(sum, LatticeBasis::standard(2));
        assert!(meet.is_empty());
    }

    #[test]
    fn meet_join_equal_lattices() {
        let l = lat(2, &[vec![2, 1], vec![0, 3]]);
        let (sum, meet) = lattice_meet_join(&l, &l).unwrap();
        assert_eq!(sum, l);
        assert_eq!(meet, l);
    }

    #[test]
    fn meet_join_checkerboard() {
        let l1 = lat(2, &[vec![2, 0]]);
        let l2 = lat(2, &[vec![1, 1], vec![1, -1]]);
        let (_, meet) = lattice_meet_join(&l1, &l2).unwrap();
        assert_eq!(meet, lat(2, &[vec![2, 0]]));
    }

    #[test]
    fn quotient_z2_mod_2z2() {
        let big = LatticeBasis::standard(2);
        let small = big.scaled(&int(2));
        let (factors, reps) = quotient_structure(&big, &small).unwrap();
        assert_eq!(factors, vec_int(&[2, 2]));
        assert_eq!(reps.len(), 4);
        let expected: Vec<Vec<Rat>> = vec![
            vec_rat(&[(0, 1), (0, 1)]),
            vec_rat(&[(0, 1), (1, 2)]),
            vec_rat(&[(1, 2), (0, 1)]),
            vec_rat(&[(1, 2), (1, 2)]),
        ];
        assert_eq!(reps, expected);
    }

    #[test]
    fn quotient_drops_unit_factor() {
        let big = LatticeBasis::standard(2);
        let small = lat(2, &[vec![2, 0], vec![0, 3]]);
        let (factors, reps) = quotient_structure(&big, &small).unwrap();
        assert_eq!(factors, vec_int(&[6]));
        assert_eq!(reps.len(), 6);
    }

    #[test]
    fn quotient_checkerboard_index_two() {
        let big = LatticeBasis::standard(2);
        let small = lat(2, &[vec![1, 1], vec![1, -1]]);
        let (factors, reps) = quotient_structure(&big, &small).unwrap();
        assert_eq!(factors, vec_int(&[2]));
        assert_eq!(reps.len(), 2);
    }

    #[test]
    fn quotient_rejects_non_containment() {
        let big = lat(2, &[vec![2, 0], vec![0, 2]]);
        let small = lat(2, &[vec![1, 0], vec![0, 1]]);
        assert!(quotient_structure(&big, &small).is_err());
    }

    #[test]
    fn membership_and_coords() {
        let l = lat(2, &[vec![2, 0], vec![1, 3]]);
        assert!(l.contains_int(&vec_int(&[3, 3])));
        assert!(!l.contains_int(&vec_int(&[1, 0])));
        assert!(l.solve_coords_rat(&vec_rat(&[(1, 1), (0, 1)])).is_some());
    }

    #[test]
    fn kernel_lattice_of_projection() {
        let m = MatZ::from_i64_rows(&[vec![1, 0, -1]]);
        let k = kernel_lattice(&m);
        assert_eq!(k.rank(), 2);
        assert!(k.contains_int(&vec_int(&[1, 0, 1])));
        assert!(k.contains_int(&vec_int(&[0, 1, 0])));
        assert!(!k.contains_int(&vec_int(&[1, 0, 0])));
    }

    #[test]
    fn matq_inverse_and_solve() {
        let m = MatQ::from_i64_rows(&[vec![(2, 1), (1, 1)], vec![(1, 1), (1, 1)]]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        let x = m.solve(&vec_rat(&[(3, 1), (2, 1)])).unwrap();
        assert_eq!(m.mul_vec(&x), vec_rat(&[(3, 1), (2, 1)]));
        let singular = MatQ::from_i64_rows(&[vec![(1, 1), (2, 1)], vec![(2, 1), (4, 1)]]);
        assert!(singular.inverse().is_none());
        assert!(singular.solve(&vec_rat(&[(1, 1), (0, 1)])).is_none());
    }

    #[test]
    fn matq_kernel_basis() {
        let m = MatQ::from_i64_rows(&[vec![(1, 1), (1, 1), (1, 1)]]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vec(v).iter().all(Rat::is_zero));
        }
    }

    #[test]
    fn positive_definiteness() {
        assert!(MatQ::identity(3).is_positive_definite());
        assert!(MatQ::from_i64_rows(&[vec![(2, 1), (1, 1)], vec![(1, 1), (2, 1)]])
            .is_positive_definite());
        assert!(!MatQ::from_i64_rows(&[vec![(2, 1), (3, 1)], vec![(3, 1), (2, 1)]])
            .is_positive_definite());
        assert!(!MatQ::from_i64_rows(&[vec![(0, 1), (1, 1)], vec![(1, 1), (0, 1)]])
            .is_positive_definite());
    }

    #[test]
    fn mod1_reduces_into_unit_interval() {
        assert_eq!(mod1(&rat(7, 2)), rat(1, 2));
        assert_eq!(mod1(&rat(-1, 3)), rat(2, 3));
        assert_eq!(mod1(&rat(2, 1)), rat(0, 1));
    }
}
