use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};
use std::sync::Arc;

use super::{FieldElem, GaloisField, Poly, Ring, WittElem};

/// Dense row-major matrix over a [`Ring`].
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R: Ring> Matrix<R> {
    pub fn zeros(rows: usize, cols: usize, template: &R) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrices are not supported");
        Self { rows, cols, data: vec![template.zero_like(); rows * cols] }
    }

    pub fn identity(n: usize, template: &R) -> Self {
        let mut m = Self::zeros(n, n, template);
        for i in 0..n {
            m[(i, i)] = template.one_like();
        }
        m
    }

    pub fn diagonal(entries: &[R]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len(), &entries[0]);
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(r > 0 && c > 0 && rows.iter().all(|row| row.len() == c), "ragged matrix");
        Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> R) -> Self {
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn template(&self) -> &R {
        &self.data[0]
    }

    pub fn row(&self, i: usize) -> &[R] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<R> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<R>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Matrix<S> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Ring::is_zero)
    }

    pub fn scale(&self, c: &R) -> Self {
        self.map(|a| a.clone() * c.clone())
    }

    pub fn trace(&self) -> R {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).fold(self.template().zero_like(), |a, b| a + b)
    }

    pub fn mul_vec(&self, v: &[R]) -> Vec<R> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).fold(self.template().zero_like(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    pub fn pow(&self, mut e: u64) -> Self {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows, self.template());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `[A, B] = AB - BA`.
    pub fn bracket(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// `det(tI - A)` by the division-free Berkowitz recursion.
    pub fn charpoly(&self) -> Poly<R> {
        assert!(self.is_square(), "characteristic polynomial of a non-square matrix");
        let n = self.rows;
        let zero = self.template().zero_like();
        let one = self.template().one_like();
        let mut vect = vec![one.clone()];
        for r in 0..n {
            let mut col = vec![one.clone(), -self[(r, r)].clone()];
            let mut w: Vec<R> = (0..r).map(|i| self[(i, r)].clone()).collect();
            for _ in 0..r {
                let q = (0..r).fold(zero.clone(), |acc, j| acc + self[(r, j)].clone() * w[j].clone());
                col.push(-q);
                w = (0..r)
                    .map(|i| (0..r).fold(zero.clone(), |acc, j| acc + self[(i, j)].clone() * w[j].clone()))
                    .collect();
            }
            vect = (0..r + 2)
                .map(|i| (0..=i.min(r)).fold(zero.clone(), |acc, j| acc + col[i - j].clone() * vect[j].clone()))
                .collect();
        }
        vect.reverse();
        Poly::new(vect)
    }

    pub fn det(&self) -> R {
        let c0 = self.charpoly().coeff(0);
        if self.rows.is_multiple_of(2) {
            c0
        } else {
            -c0
        }
    }

    /// Classical adjoint from the Cayley-Hamilton relation; division-free.
    pub fn adjugate(&self) -> Self {
        let n = self.rows;
        let cp = self.charpoly();
        let mut acc = Self::identity(n, self.template());
        for k in 1..n {
            let id = Self::identity(n, self.template()).scale(&cp.coeff(n - k));
            acc = &(&acc * self) + &id;
        }
        if n.is_multiple_of(2) {
            -acc
        } else {
            acc
        }
    }

    /// Inverse by elimination with unit pivots; `None` if none is available.
    pub fn try_inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n, self.template());
        for c in 0..n {
            let (piv, pinv) = (c..n).find_map(|r| a[(r, c)].try_inv().map(|u| (r, u)))?;
            a.swap_rows(c, piv);
            inv.swap_rows(c, piv);
            a.scale_row(c, &pinv);
            inv.scale_row(c, &pinv);
            for r in 0..n {
                if r != c && !a[(r, c)].is_zero() {
                    let f = a[(r, c)].clone();
                    a.add_row_multiple(r, c, &f);
                    inv.add_row_multiple(r, c, &f);
                }
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn scale_row(&mut self, r: usize, c: &R) {
        for j in 0..self.cols {
            self[(r, j)] = self[(r, j)].clone() * c.clone();
        }
    }

    /// `row_r -= f * row_src`.
    fn add_row_multiple(&mut self, r: usize, src: usize, f: &R) {
        for j in 0..self.cols {
            let v = self[(src, j)].clone() * f.clone();
            self[(r, j)] = self[(r, j)].clone() - v;
        }
    }
}

impl Matrix<FieldElem> {
    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(piv) = (r..self.rows).find(|&i| !a[(i, c)].is_zero()) else {
                continue;
            };
            a.swap_rows(r, piv);
            let inv = a[(r, c)].inv().expect("nonzero in a field");
            a.scale_row(r, &inv);
            for i in 0..self.rows {
                if i != r && !a[(i, c)].is_zero() {
                    let f = a[(i, c)].clone();
                    a.add_row_multiple(i, r, &f);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel.
    pub fn kernel(&self) -> Vec<Vec<FieldElem>> {
        let (a, pivots) = self.rref();
        let zero = self.template().zero_like();
        (0..self.cols)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v = vec![zero.clone(); self.cols];
                v[free] = zero.one_like();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -a[(row, free)].clone();
                }
                v
            })
            .collect()
    }
}

impl Matrix<WittElem> {
    /// Entrywise reduction to `F_p`.
    pub fn residue(&self) -> Matrix<FieldElem> {
        let fp = GaloisField::prime(self.template().ring().p()).expect("Witt rings have odd prime p");
        self.to_field(&fp)
    }

    pub fn to_field(&self, fp: &Arc<GaloisField>) -> Matrix<FieldElem> {
        self.map(|x| fp.from_i64(x.residue() as i64))
    }
}

impl<R> Index<(usize, usize)> for Matrix<R> {
    type Output = R;
    fn index(&self, (i, j): (usize, usize)) -> &R {
        &self.data[i * self.cols + j]
    }
}

impl<R> IndexMut<(usize, usize)> for Matrix<R> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut R {
        &mut self.data[i * self.cols + j]
    }
}

impl<R: Ring> Add for &Matrix<R> {
    type Output = Matrix<R>;
    fn add(self, rhs: Self) -> Matrix<R> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].clone() + rhs[(i, j)].clone())
    }
}

impl<R: Ring> Sub for &Matrix<R> {
    type Output = Matrix<R>;
    fn sub(self, rhs: Self) -> Matrix<R> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].clone() - rhs[(i, j)].clone())
    }
}

impl<R: Ring> Mul for &Matrix<R> {
    type Output = Matrix<R>;
    fn mul(self, rhs: Self) -> Matrix<R> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let zero = self.template().zero_like();
        Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).fold(zero.clone(), |acc, k| {
                let a = &self[(i, k)];
                if a.is_zero() {
                    acc
                } else {
                    acc + a.clone() * rhs[(k, j)].clone()
                }
            })
        })
    }
}

impl<R: Ring> Add for Matrix<R> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<R: Ring> Sub for Matrix<R> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<R: Ring> Mul for Matrix<R> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<R: Ring> Neg for Matrix<R> {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|a| -a.clone())
    }
}

impl<R: fmt::Debug> fmt::Debug for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[R]> = self.data.chunks(self.cols).collect();
        f.debug_list().entries(rows).finish()
    }
}
