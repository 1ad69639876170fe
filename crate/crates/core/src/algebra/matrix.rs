//! Dense matrices over [`Scalar`] with exact elimination.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::scalar::Scalar;
use crate::error::{DsError, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn scalar(n: usize, c: &Scalar) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c.clone();
        }
        m
    }

    pub fn diagonal(entries: &[Scalar]) -> Self {
        let mut m = Matrix::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    /// Matrix unit `e_{ab}` (0-based).
    pub fn unit(n: usize, a: usize, b: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        m[(a, b)] = Scalar::one();
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(DsError::invalid("ragged matrix rows"));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&v| Scalar::from_int(v)).collect())
                .collect(),
        )
        .expect("rectangular literal")
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

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        self.data.chunks(self.cols.max(1)).map(|c| c.to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).sum()
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn pow(&self, e: u32) -> Matrix {
        assert!(self.is_square());
        let mut result = Matrix::identity(self.rows);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Row echelon form in place; returns pivot columns.
    fn echelon(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self[(r, col)].is_zero()) else {
                continue;
            };
            self.swap_rows(row, p);
            let inv = self[(row, col)].inv().expect("nonzero pivot");
            for c in col..self.cols {
                self[(row, c)] = &self[(row, c)] * &inv;
            }
            for r in 0..self.rows {
                if r == row || self[(r, col)].is_zero() {
                    continue;
                }
                let f = self[(r, col)].clone();
                for c in col..self.cols {
                    let v = &self[(row, c)] * &f;
                    self[(r, c)] -= &v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().echelon().len()
    }

    /// Dimension of the right kernel.
    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Basis of the right kernel.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let mut m = self.clone();
        let pivots = m.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Scalar::zero(); self.cols];
                v[f] = Scalar::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -&m[(r, f)];
                }
                v
            })
            .collect()
    }

    /// Solves `self * x = b` for square nonsingular `self`.
    pub fn solve(&self, b: &[Scalar]) -> Result<Vec<Scalar>> {
        if !self.is_square() || b.len() != self.rows {
            return Err(DsError::invalid("solve: dimension mismatch"));
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, n + 1);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n)] = b[i].clone();
        }
        let pivots = aug.echelon();
        if pivots.len() < n || pivots.iter().any(|&p| p >= n) {
            return Err(DsError::Singular);
        }
        Ok((0..n).map(|i| aug[(i, n)].clone()).collect())
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(DsError::invalid("inverse of a non-square matrix"));
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Scalar::one();
        }
        let pivots = aug.echelon();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(DsError::Singular);
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = aug[(i, n + j)].clone();
            }
        }
        Ok(inv)
    }

    /// Characteristic polynomial `det(xI - A)`, coefficients from the
    /// constant term upward (monic, length `n + 1`). Faddeev–LeVerrier.
    pub fn char_poly(&self) -> Vec<Scalar> {
        assert!(self.is_square());
        let n = self.rows;
        let mut coeffs = vec![Scalar::zero(); n + 1];
        coeffs[n] = Scalar::one();
        let mut m = Matrix::zeros(n, n);
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            let mut next = self * &m;
            for i in 0..n {
                next[(i, i)] += &coeffs[n - k + 1];
            }
            let am = self * &next;
            let c = am.trace().scale_int(-1) / Scalar::from_int(k as i64);
            coeffs[n - k] = c;
            m = next;
        }
        coeffs
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (r, c): (usize, usize)) -> &Scalar {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Scalar {
        &mut self.data[r * self.cols + c]
    }
}

impl<'b> Mul<&'b Matrix> for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &'b Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let p = a * b;
                    out[(i, j)] += &p;
                }
            }
        }
        out
    }
}

impl<'b> Add<&'b Matrix> for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &'b Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'b> Sub<&'b Matrix> for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &'b Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self[(r, c)].to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Solves `C X - X D = rhs` by vectorising into an `n^2` square system.
///
/// Uniquely solvable iff `C` and `D` share no eigenvalue.
pub fn solve_sylvester(c: &Matrix, d: &Matrix, rhs: &Matrix) -> Result<Matrix> {
    let n = c.rows();
    if !c.is_square() || d.rows() != n || !d.is_square() || rhs.rows() != n || rhs.cols() != n {
        return Err(DsError::invalid("sylvester: dimension mismatch"));
    }
    // unknown X[(i,j)] sits at index i*n + j
    let mut sys = Matrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let row = i * n + j;
            for k in 0..n {
                // (C X)_{ij} = sum_k C_{ik} X_{kj}
                if !c[(i, k)].is_zero() {
                    sys[(row, k * n + j)] += &c[(i, k)];
                }
                // (X D)_{ij} = sum_k X_{ik} D_{kj}
                if !d[(k, j)].is_zero() {
                    sys[(row, i * n + k)] -= &d[(k, j)];
                }
            }
        }
    }
    let b: Vec<Scalar> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| rhs[(i, j)].clone())
        .collect();
    let x = sys.solve(&b)?;
    let mut out = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] = x[i * n + j].clone();
        }
    }
    Ok(out)
}
