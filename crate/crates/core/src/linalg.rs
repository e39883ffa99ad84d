//! Dense exact matrices and the subspace operations built on them.
//!
//! Rank and determinant over `Q` use fraction-free (Bareiss) elimination on an
//! integer-scaled copy; everything else, and all work over finite or quadratic
//! fields, uses ordinary Gauss–Jordan elimination.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: Field,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            field: field.clone(),
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: &Field, rows: Vec<Vec<Scalar>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch { op: "from_rows", left: c, right: row.len() });
            }
            for x in row {
                if !field.contains(&x) {
                    return Err(Error::InvalidField(format!("entry {x} is not in {field}")));
                }
                data.push(x);
            }
        }
        Ok(Matrix { rows: r, cols: c, field: field.clone(), data })
    }

    /// Matrix whose columns are the given vectors (all of length `len`).
    pub fn from_columns(field: &Field, len: usize, cols: &[Vec<Scalar>]) -> Result<Matrix> {
        let mut m = Matrix::zeros(field, len, cols.len());
        for (j, col) in cols.iter().enumerate() {
            if col.len() != len {
                return Err(Error::DimensionMismatch { op: "from_columns", left: len, right: col.len() });
            }
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    pub fn from_i64(field: &Field, rows: &[&[i64]]) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Matrix::zeros(field, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged integer matrix");
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, field.from_i64(x));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Scalar) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> Vec<Scalar> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Scalar>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { op: "mul", left: self.cols, right: other.rows });
        }
        let mut out = Matrix::zeros(&self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j) + &(a * b);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { op: "mul_vec", left: self.cols, right: v.len() });
        }
        Ok((0..self.rows)
            .map(|i| {
                (0..self.cols).fold(self.field.zero(), |acc, j| acc + self.get(i, j) * &v[j])
            })
            .collect())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, "add", |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, "sub", |a, b| a - b)
    }

    fn zip_with(&self, other: &Matrix, op: &'static str, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                op,
                left: self.rows * self.cols,
                right: other.rows * other.cols,
            });
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field.clone(),
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        self.map(|x| x * c)
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field.clone(),
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Same entries viewed in a larger field (base field into a quadratic extension).
    pub fn embed(&self, field: &Field) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            field: field.clone(),
            data: self.data.iter().map(|x| field.embed(x)).collect(),
        }
    }

    /// Entry-wise reduction of a rational matrix modulo `p`.
    pub fn reduce_mod(&self, p: u64) -> Result<Matrix> {
        let f = Field::prime(p)?;
        let data = self.data.iter().map(|x| x.reduce_mod(p)).collect::<Result<Vec<_>>>()?;
        Ok(Matrix { rows: self.rows, cols: self.cols, field: f, data })
    }

    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch { op: "hstack", left: self.rows, right: other.rows });
        }
        let mut out = Matrix::zeros(&self.field, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        Ok(out)
    }

    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch { op: "vstack", left: self.cols, right: other.cols });
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Matrix { rows: self.rows + other.rows, cols: self.cols, field: self.field.clone(), data })
    }

    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(&self.field, self.rows, idx.len());
        for (jj, &j) in idx.iter().enumerate() {
            for i in 0..self.rows {
                out.set(i, jj, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(&self.field, idx.len(), self.cols);
        for (ii, &i) in idx.iter().enumerate() {
            for j in 0..self.cols {
                out.set(ii, j, self.get(i, j).clone());
            }
        }
        out
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = m.get(i, j) - &(&f * m.get(r, j));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Integer matrix with the same row space (each row cleared of denominators).
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let row: Vec<&BigRational> =
                    (0..self.cols).map(|j| self.get(i, j).as_rational().expect("rational entry")).collect();
                let l = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
                row.iter().map(|q| q.numer() * (&l / q.denom())).collect()
            })
            .collect()
    }

    /// Row rank. Fraction-free elimination over `Q`, Gaussian elimination otherwise.
    pub fn rank(&self) -> usize {
        match self.field {
            Field::Rational => bareiss(self.integer_rows(), self.cols).0,
            _ => self.rref().1.len(),
        }
    }

    /// Determinant of a square matrix.
    pub fn determinant(&self) -> Result<Scalar> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch { op: "determinant", left: self.rows, right: self.cols });
        }
        if self.rows == 0 {
            return Ok(self.field.one());
        }
        match self.field {
            Field::Rational => {
                let mut scale = BigInt::one();
                for i in 0..self.rows {
                    let l = (0..self.cols)
                        .fold(BigInt::one(), |acc, j| acc.lcm(self.get(i, j).as_rational().unwrap().denom()));
                    scale *= l;
                }
                let (rank, last, sign) = bareiss(self.integer_rows(), self.cols);
                if rank < self.rows {
                    return Ok(self.field.zero());
                }
                let d = BigRational::new(last * sign, scale);
                Ok(Scalar::Rational(d))
            }
            _ => {
                let mut m = self.clone();
                let mut det = self.field.one();
                for c in 0..m.cols {
                    let Some(p) = (c..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                        return Ok(self.field.zero());
                    };
                    if p != c {
                        m.swap_rows(p, c);
                        det = -det;
                    }
                    let piv = m.get(c, c).clone();
                    det = &det * &piv;
                    let inv = piv.inv().expect("nonzero pivot");
                    for i in c + 1..m.rows {
                        if m.get(i, c).is_zero() {
                            continue;
                        }
                        let f = m.get(i, c) * &inv;
                        for j in c..m.cols {
                            let v = m.get(i, j) - &(&f * m.get(c, j));
                            m.set(i, j, v);
                        }
                    }
                }
                Ok(det)
            }
        }
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch { op: "inverse", left: self.rows, right: self.cols });
        }
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(&self.field, n))?;
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::Singular);
        }
        Ok(r.select_columns(&(n..2 * n).collect::<Vec<_>>()))
    }

    /// Basis of the right null space, as columns.
    pub fn kernel_basis(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Matrix::zeros(&self.field, self.cols, free.len());
        for (kc, &f) in free.iter().enumerate() {
            k.set(f, kc, self.field.one());
            for (pr, &pc) in pivots.iter().enumerate() {
                k.set(pc, kc, -r.get(pr, f));
            }
        }
        k
    }

    /// Linearly independent columns spanning the same column space.
    pub fn column_basis(&self) -> Matrix {
        let pivots = self.rref().1;
        self.select_columns(&pivots)
    }

    /// Whether `v` lies in the column span.
    pub fn spans(&self, v: &[Scalar]) -> Result<bool> {
        let col = Matrix::from_columns(&self.field, self.rows, &[v.to_vec()])?;
        Ok(self.hstack(&col)?.rank() == self.rank())
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kronecker(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(&self.field, self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(i * other.rows + k, j * other.cols + l, a * other.get(k, l));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// One-step Bareiss elimination on an integer matrix. Returns the rank, the
/// last pivot (the determinant when the matrix is square and nonsingular) and
/// the sign of the row permutation.
fn bareiss(mut a: Vec<Vec<BigInt>>, cols: usize) -> (usize, BigInt, i64) {
    let rows = a.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut sign = 1;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            sign = -sign;
        }
        for i in r + 1..rows {
            for j in c + 1..cols {
                let num = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                debug_assert!((&num % &prev).is_zero(), "inexact Bareiss division");
                a[i][j] = num / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    let last = if r > 0 { prev } else { BigInt::zero() };
    (r, last, sign)
}

/// Column-span intersection: a basis of `span(a) ∩ span(b)`.
pub fn intersect_subspaces(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if a.rows() != b.rows() {
        return Err(Error::DimensionMismatch { op: "intersect_subspaces", left: a.rows(), right: b.rows() });
    }
    let a = a.column_basis();
    let b = b.column_basis();
    let stacked = a.hstack(&b.scale(&a.field().from_i64(-1)))?;
    let ker = stacked.kernel_basis();
    let coeffs = ker.select_rows(&(0..a.cols()).collect::<Vec<_>>());
    Ok(a.mul(&coeffs)?.column_basis())
}

/// Column-span sum: a basis of `span(a) + span(b)`.
pub fn sum_subspaces(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    Ok(a.hstack(b)?.column_basis())
}

/// Whether two column spans coincide.
pub fn same_span(a: &Matrix, b: &Matrix) -> Result<bool> {
    if a.rows() != b.rows() {
        return Ok(false);
    }
    let ra = a.rank();
    Ok(ra == b.rank() && a.hstack(b)?.rank() == ra)
}

/// Small integer matrix for Gram / Euler-form data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntMatrix(pub Vec<Vec<i64>>);

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix(vec![vec![0; cols]; rows])
    }

    pub fn from_rows(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix(rows.iter().map(|r| r.to_vec()).collect())
    }

    pub fn rows(&self) -> usize {
        self.0.len()
    }

    pub fn cols(&self) -> usize {
        self.0.first().map_or(0, Vec::len)
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols(), self.rows());
        for (i, row) in self.0.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                t.0[j][i] = x;
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols(), other.rows(), "IntMatrix::mul shape mismatch");
        let mut out = IntMatrix::zeros(self.rows(), other.cols());
        for i in 0..self.rows() {
            for k in 0..self.cols() {
                for j in 0..other.cols() {
                    out.0[i][j] += self.0[i][k] * other.0[k][j];
                }
            }
        }
        out
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().flatten().sum()
    }

    pub fn is_unitriangular(&self) -> bool {
        self.0.iter().enumerate().all(|(i, row)| {
            row.iter().enumerate().all(|(j, &x)| match i.cmp(&j) {
                std::cmp::Ordering::Equal => x == 1,
                std::cmp::Ordering::Greater => x == 0,
                std::cmp::Ordering::Less => true,
            })
        })
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .0
            .iter()
            .map(|r| format!("[{}]", r.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}
