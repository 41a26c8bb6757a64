use std::fmt;

use super::{ArithError, Field};

/// Dense row-major matrix.
///
/// As an endomorphism of the span of a labelled basis, row `i` holds the
/// image of basis vector `i`: `e_i ↦ Σ_j M[i][j] e_j`.
#[derive(Clone, PartialEq)]
pub struct Matrix<F: Field> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self, ArithError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(ArithError::DimensionMismatch("ragged matrix rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row_vecs(&self) -> Vec<Vec<F>> {
        self.data.chunks(self.cols.max(1)).take(self.rows).map(<[F]>::to_vec).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(F::is_zero)
    }

    fn same_shape(&self, other: &Self) -> Result<(), ArithError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(ArithError::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, ArithError> {
        self.same_shape(other)?;
        Ok(self.zip_with(other, F::add))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ArithError> {
        self.same_shape(other)?;
        Ok(self.zip_with(other, F::sub))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&F, &F) -> F) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        self.map(|x| x.mul(c))
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<G: Field, E>(&self, f: impl Fn(usize, usize, &F) -> Result<G, E>) -> Result<Matrix<G>, E> {
        let mut data = Vec::with_capacity(self.data.len());
        for (k, x) in self.data.iter().enumerate() {
            data.push(f(k / self.cols.max(1), k % self.cols.max(1), x)?);
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Ordinary matrix product `self · other`.
    pub fn mul(&self, other: &Self) -> Result<Self, ArithError> {
        if self.cols != other.rows {
            return Err(ArithError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zero(self.rows, other.cols);
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
                    let v = out.get(i, j).add(&a.mul(b));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Nonzero entries as `(row, col, value)`.
    pub fn support(&self) -> Vec<(usize, usize, F)> {
        let mut out = Vec::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.get(i, j);
                if !v.is_zero() {
                    out.push((i, j, v.clone()));
                }
            }
        }
        out
    }
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.row_vecs()).finish()
    }
}

impl<F: Field> fmt::Display for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .row_vecs()
            .iter()
            .map(|r| format!("[{}]", r.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// Cubical 3-tensor `T[a][b][c]` with all slots of the same dimension.
#[derive(Clone, PartialEq)]
pub struct Tensor3<F: Field> {
    dim: usize,
    data: Vec<F>,
}

impl<F: Field> Tensor3<F> {
    pub fn zero(dim: usize) -> Self {
        Tensor3 {
            dim,
            data: vec![F::zero(); dim * dim * dim],
        }
    }

    pub fn from_nested(nested: Vec<Vec<Vec<F>>>) -> Result<Self, ArithError> {
        let dim = nested.len();
        let ok = nested
            .iter()
            .all(|m| m.len() == dim && m.iter().all(|r| r.len() == dim));
        if !ok {
            return Err(ArithError::DimensionMismatch("3-tensor is not cubical".into()));
        }
        Ok(Tensor3 {
            dim,
            data: nested.into_iter().flatten().flatten().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> &F {
        &self.data[(a * self.dim + b) * self.dim + c]
    }

    pub fn set(&mut self, a: usize, b: usize, c: usize, v: F) {
        let d = self.dim;
        self.data[(a * d + b) * d + c] = v;
    }

    pub fn to_nested(&self) -> Vec<Vec<Vec<F>>> {
        let d = self.dim;
        (0..d)
            .map(|a| (0..d).map(|b| (0..d).map(|c| self.get(a, b, c).clone()).collect()).collect())
            .collect()
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Tensor3<G> {
        Tensor3 {
            dim: self.dim,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<F: Field> fmt::Debug for Tensor3<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_nested()).finish()
    }
}
