use std::ops::{Add, Mul, Sub};

use super::poly::Poly;
use super::scalar::{Field, GaussianRational, Ring};
use super::KernelError;

/// Dense row-major matrix over a ring.
#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

pub type QMatrix = Matrix<GaussianRational>;

impl<R: Ring> Matrix<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![R::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for k in 0..n {
            m.set(k, k, R::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn diagonal(d: &[R]) -> Self {
        let mut m = Matrix::zeros(d.len(), d.len());
        for (k, x) in d.iter().enumerate() {
            m.set(k, k, x.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: R) {
        let k = i * self.cols + j;
        self.data[k] = self.data[k].clone() + v;
    }

    pub fn row(&self, i: usize) -> &[R] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<R>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, c: &R) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x.clone() * c.clone()).collect() }
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Matrix<S> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn trace(&self) -> R {
        (0..self.rows.min(self.cols)).fold(R::zero(), |acc, k| acc + self.get(k, k).clone())
    }

    pub fn entries(&self) -> &[R] {
        &self.data
    }

    /// Whether all off-diagonal entries vanish.
    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    /// Horizontal concatenation.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Matrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    /// Columns given as vectors.
    pub fn from_columns(cols: &[Vec<R>]) -> Self {
        let r = cols.first().map_or(0, |c| c.len());
        Matrix::from_fn(r, cols.len(), |i, j| cols[j][i].clone())
    }

    /// Characteristic polynomial det(tI − M) by Faddeev–LeVerrier; only
    /// divisions by the integers 1..N occur.
    pub fn charpoly(&self) -> Poly<R>
    where
        R: Field,
    {
        assert!(self.is_square());
        let n = self.rows;
        let mut c = vec![R::zero(); n + 1];
        c[n] = R::one();
        let mut mk = Matrix::<R>::zeros(n, n);
        for k in 1..=n {
            // M_k = A·M_{k−1} + c_{n−k+1}·I
            let mut next = self * &mk;
            for d in 0..n {
                next.add_at(d, d, c[n - k + 1].clone());
            }
            let am = self * &next;
            c[n - k] = -(am.trace() / R::from_int(k as i64));
            mk = next;
        }
        Poly::new(c)
    }

    /// Rank by Bareiss fraction-free elimination on rows.
    pub fn rank_bareiss(&self) -> usize
    where
        R: Field,
    {
        bareiss(self.clone()).0
    }

    /// Determinant by Bareiss elimination.
    pub fn det(&self) -> R
    where
        R: Field,
    {
        assert!(self.is_square());
        let n = self.rows;
        let (rank, m, sign) = bareiss(self.clone());
        if rank < n {
            return R::zero();
        }
        if n == 0 {
            return R::one();
        }
        let d = m.get(n - 1, n - 1).clone();
        if sign {
            -d
        } else {
            d
        }
    }

    /// Reduced row echelon form and pivot columns (Gauss–Jordan).
    pub fn rref(&self) -> (Self, Vec<usize>)
    where
        R: Field,
    {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else { continue };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv();
            for j in c..m.cols {
                let v = m.get(r, j).clone() * inv.clone();
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = m.get(i, j).clone() - f.clone() * m.get(r, j).clone();
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Rank as the dimension of the column space, computed by Gauss–Jordan
    /// on the transpose; an independent route to `rank_bareiss`.
    pub fn rank_columns(&self) -> usize
    where
        R: Field,
    {
        self.transpose().rref().1.len()
    }

    /// One solution x of M·x = b, or `None` if the system is inconsistent.
    pub fn solve(&self, b: &[R]) -> Option<Vec<R>>
    where
        R: Field,
    {
        assert_eq!(b.len(), self.rows);
        let aug = self.hstack(&Matrix::from_columns(&[b.to_vec()]));
        let (r, piv) = aug.rref();
        if piv.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![R::zero(); self.cols];
        for (k, &c) in piv.iter().enumerate() {
            x[c] = r.get(k, self.cols).clone();
        }
        Some(x)
    }

    /// Basis of the right null space.
    pub fn nullspace(&self) -> Vec<Vec<R>>
    where
        R: Field,
    {
        let (r, piv) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![R::zero(); self.cols];
                v[f] = R::one();
                for (k, &c) in piv.iter().enumerate() {
                    v[c] = -r.get(k, f).clone();
                }
                v
            })
            .collect()
    }

    pub fn mul_vec(&self, v: &[R]) -> Vec<R> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(R::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }
}

/// Fraction-free elimination. Returns (rank, reduced matrix, odd number of
/// row swaps). Each step replaces a_ij by (a_kk·a_ij − a_ik·a_kj)/p where p is
/// the previous pivot, so entries stay minors of the input.
fn bareiss<R: Field>(mut m: Matrix<R>) -> (usize, Matrix<R>, bool) {
    let mut prev = R::one();
    let mut r = 0;
    let mut odd = false;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else { continue };
        if p != r {
            m.swap_rows(r, p);
            odd = !odd;
        }
        let piv = m.get(r, c).clone();
        for i in (r + 1)..m.rows {
            let f = m.get(i, c).clone();
            for j in (c + 1)..m.cols {
                let v = (piv.clone() * m.get(i, j).clone() - f.clone() * m.get(r, j).clone()) / prev.clone();
                m.set(i, j, v);
            }
            m.set(i, c, R::zero());
        }
        prev = piv;
        r += 1;
    }
    (r, m, odd)
}

/// Pfaffian of an antisymmetric matrix by skew-symmetric elimination
/// (congruence with unit-determinant transforms).
pub fn pfaffian<R: Field>(m: &Matrix<R>) -> Result<R, KernelError> {
    if !m.is_square() {
        return Err(KernelError::NotAntisymmetric);
    }
    let n = m.rows();
    for i in 0..n {
        for j in 0..n {
            if !(m.get(i, j).clone() + m.get(j, i).clone()).is_zero() {
                return Err(KernelError::NotAntisymmetric);
            }
        }
    }
    if n % 2 == 1 {
        return Err(KernelError::OddDimension);
    }
    let mut a = m.clone();
    let mut pf = R::one();
    let mut k = 0;
    while k < n {
        let Some(p) = ((k + 1)..n).find(|&j| !a.get(k, j).is_zero()) else {
            return Ok(R::zero());
        };
        if p != k + 1 {
            a.swap_rows(k + 1, p);
            a.swap_cols(k + 1, p);
            pf = -pf;
        }
        let piv = a.get(k, k + 1).clone();
        pf = pf * piv.clone();
        // Clear row/column k beyond k+1 using row/column k+1, then clear
        // row/column k+1 beyond k+1 using row/column k.
        for i in (k + 2)..n {
            let f = a.get(k, i).clone() / piv.clone();
            if f.is_zero() {
                continue;
            }
            for j in 0..n {
                let v = a.get(i, j).clone() - f.clone() * a.get(k + 1, j).clone();
                a.set(i, j, v);
            }
            for j in 0..n {
                let v = a.get(j, i).clone() - f.clone() * a.get(j, k + 1).clone();
                a.set(j, i, v);
            }
        }
        let piv2 = a.get(k + 1, k).clone();
        for i in (k + 2)..n {
            let f = a.get(k + 1, i).clone() / piv2.clone();
            if f.is_zero() {
                continue;
            }
            for j in 0..n {
                let v = a.get(i, j).clone() - f.clone() * a.get(k, j).clone();
                a.set(i, j, v);
            }
            for j in 0..n {
                let v = a.get(j, i).clone() - f.clone() * a.get(j, k).clone();
                a.set(j, i, v);
            }
        }
        k += 2;
    }
    Ok(pf)
}

impl<'a, R: Ring> Mul<&'a Matrix<R>> for &'a Matrix<R> {
    type Output = Matrix<R>;
    fn mul(self, o: &Matrix<R>) -> Matrix<R> {
        assert_eq!(self.cols, o.rows, "shape mismatch");
        let mut out = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        out.add_at(i, j, a.clone() * b.clone());
                    }
                }
            }
        }
        out
    }
}

impl<'a, R: Ring> Add<&'a Matrix<R>> for &'a Matrix<R> {
    type Output = Matrix<R>;
    fn add(self, o: &Matrix<R>) -> Matrix<R> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

impl<'a, R: Ring> Sub<&'a Matrix<R>> for &'a Matrix<R> {
    type Output = Matrix<R>;
    fn sub(self, o: &Matrix<R>) -> Matrix<R> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}
