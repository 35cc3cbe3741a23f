use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::scalar::{Field, Scalar};

/// Dense matrix over an exact field, row-major.
///
/// Semantics are dense, but elimination skips zero entries so the sparse
/// boundary matrices of cubical complexes stay cheap to reduce.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Result of Gauss-Jordan elimination.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_i64(field: Field, rows: &[Vec<i64>]) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Matrix::zeros(field, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, field.from_i64(*v));
            }
        }
        m
    }

    /// Builds a `rows x columns.len()` matrix from column vectors.
    pub fn from_columns(field: Field, rows: usize, columns: &[Vec<Scalar>]) -> Matrix {
        let mut m = Matrix::zeros(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn column_vector(field: Field, v: Vec<Scalar>) -> Matrix {
        let n = v.len();
        Matrix { field, rows: n, cols: 1, data: v }
    }

    pub fn field(&self) -> Field {
        self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &Scalar) {
        let k = i * self.cols + j;
        self.data[k] = self.field.add(&self.data[k], v);
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Scalar>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn row(&self, i: usize) -> Vec<Scalar> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.rows, idx.len());
        for (k, &j) in idx.iter().enumerate() {
            for i in 0..self.rows {
                m.set(i, k, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.field, idx.len(), self.cols);
        for (k, &i) in idx.iter().enumerate() {
            for j in 0..self.cols {
                m.set(k, j, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn check_field(&self, other: &Matrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.to_string(), other.field.to_string()));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
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
                    out.add_to(i, j, &f.mul(a, b));
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        let col = Matrix::column_vector(self.field, v.to_vec());
        Ok(self.mul(&col)?.data)
    }

    fn zip_with(&self, other: &Matrix, op: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<Matrix> {
        self.check_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| op(a, b)).collect();
        Ok(Matrix { field: self.field, rows: self.rows, cols: self.cols, data })
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        let f = self.field;
        self.zip_with(other, |a, b| f.add(a, b))
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        let f = self.field;
        self.zip_with(other, |a, b| f.sub(a, b))
    }

    pub fn neg(&self) -> Matrix {
        let f = self.field;
        Matrix { data: self.data.iter().map(|a| f.neg(a)).collect(), ..self.clone() }
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        let f = self.field;
        Matrix { data: self.data.iter().map(|a| f.mul(a, s)).collect(), ..self.clone() }
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn pow(&self, e: usize) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("power of a non-square matrix".into()));
        }
        let mut result = Matrix::identity(self.field, self.rows);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other)?;
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch("hstack row count".into()));
        }
        let mut m = Matrix::zeros(self.field, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        Ok(m)
    }

    /// Stacks `self` above `other`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        Ok(self.transpose().hstack(&other.transpose())?.transpose())
    }

    /// Gauss-Jordan elimination with deterministic pivoting: columns are
    /// scanned left to right and the first row (from the current position)
    /// with a nonzero entry becomes the pivot row.
    pub fn echelon(&self) -> Echelon {
        let f = self.field;
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
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = f.inv(m.get(r, c)).expect("pivot nonzero");
            if !inv.is_one() {
                for j in c..m.cols {
                    let v = f.mul(m.get(r, j), &inv);
                    m.set(r, j, v);
                }
            }
            let pivot_row: Vec<(usize, Scalar)> = (c..m.cols)
                .filter(|&j| !m.get(r, j).is_zero())
                .map(|j| (j, m.get(r, j).clone()))
                .collect();
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c).clone();
                if factor.is_zero() {
                    continue;
                }
                for (j, v) in &pivot_row {
                    let delta = f.mul(&factor, v);
                    let k = i * m.cols + j;
                    m.data[k] = f.sub(&m.data[k], &delta);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { reduced: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Columns spanning the null space, one per free column.
    pub fn kernel_basis(&self) -> Matrix {
        let f = self.field;
        let Echelon { reduced, pivots } = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Matrix::zeros(f, self.cols, free.len());
        for (col, &fc) in free.iter().enumerate() {
            k.set(fc, col, f.one());
            for (r, &pc) in pivots.iter().enumerate() {
                let v = reduced.get(r, fc);
                if !v.is_zero() {
                    k.set(pc, col, f.neg(v));
                }
            }
        }
        k
    }

    /// The pivot columns of `self`, a basis of its column space.
    pub fn image_basis(&self) -> Matrix {
        let pivots = self.echelon().pivots;
        self.select_columns(&pivots)
    }

    /// Some `x` with `self * x = b`, or `None`.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        let rhs = Matrix::column_vector(self.field, b.to_vec());
        Ok(self.solve_matrix(&rhs)?.map(|x| x.column(0)))
    }

    /// Some `X` with `self * X = rhs`, or `None` if any column is unsolvable.
    pub fn solve_matrix(&self, rhs: &Matrix) -> Result<Option<Matrix>> {
        self.check_field(rhs)?;
        if rhs.rows != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "solve: {} rows vs rhs {}",
                self.rows, rhs.rows
            )));
        }
        let aug = self.hstack(rhs)?;
        let Echelon { reduced, pivots } = aug.echelon();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Ok(None);
        }
        let mut x = Matrix::zeros(self.field, self.cols, rhs.cols);
        for (r, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(pc, j, reduced.get(r, self.cols + j).clone());
            }
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::NotInvertible(format!("{}x{} is not square", self.rows, self.cols)));
        }
        let id = Matrix::identity(self.field, self.rows);
        let aug = self.hstack(&id)?;
        let Echelon { reduced, pivots } = aug.echelon();
        if pivots.len() < self.rows || (self.rows > 0 && pivots[self.rows - 1] >= self.cols) {
            return Err(Error::NotInvertible("singular matrix".into()));
        }
        let mut inv = Matrix::zeros(self.field, self.rows, self.rows);
        for i in 0..self.rows {
            for j in 0..self.rows {
                inv.set(i, j, reduced.get(i, self.cols + j).clone());
            }
        }
        Ok(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Inverse of `self` restricted to the column space of `basis`, in the
    /// coordinates of `basis`: returns the `k x k` matrix `C^{-1}` where
    /// `self * basis = basis * C`.
    pub fn restricted_inverse(&self, basis: &Matrix) -> Result<Matrix> {
        let image = self.mul(basis)?;
        let coords = basis.solve_matrix(&image)?.ok_or(Error::NotInvariant)?;
        if basis.rank() != basis.cols {
            return Err(Error::DimensionMismatch("basis columns are dependent".into()));
        }
        coords.inverse().map_err(|_| Error::NotInvariant)
    }

    /// Coordinates of the columns of `vectors` in the (independent) columns of
    /// `self`, or `None` when some column is outside the span.
    pub fn coordinates(&self, vectors: &Matrix) -> Result<Option<Matrix>> {
        self.solve_matrix(vectors)
    }

    /// Whether every column of `vectors` lies in the column space of `self`.
    pub fn spans(&self, vectors: &Matrix) -> Result<bool> {
        Ok(self.solve_matrix(vectors)?.is_some())
    }

    /// Entries as small integers where possible, for reports.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| match self.get(i, j).to_i64(&self.field) {
                        Some(v) => v.to_string(),
                        None => self.get(i, j).to_string(),
                    })
                    .collect()
            })
            .collect()
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix[{}; {}x{}]", self.field, self.rows, self.cols)?;
        for row in self.to_strings() {
            write!(f, "\n  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(rows: &[Vec<i64>]) -> Matrix {
        Matrix::from_i64(Field::Rational, rows)
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::zeros(Field::Rational, 3, 3).rank(), 0);
        assert_eq!(Matrix::identity(Field::Rational, 4).rank(), 4);
        assert_eq!(q(&[vec![1, 1], vec![0, 0]]).rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(Matrix::identity(Field::Rational, 3).kernel_basis().cols(), 0);
        let k = q(&[vec![1, 1], vec![0, 0]]).kernel_basis();
        assert_eq!(k, q(&[vec![-1], vec![1]]));
    }

    #[test]
    fn restricted_inverse_example() {
        let m = q(&[vec![1, 1], vec![0, 0]]);
        let b = q(&[vec![1], vec![0]]);
        assert_eq!(m.restricted_inverse(&b).unwrap(), q(&[vec![1]]));
        let bad = q(&[vec![0], vec![1]]);
        assert_eq!(m.restricted_inverse(&bad), Err(Error::NotInvariant));
    }

    #[test]
    fn field_mismatch_rejected() {
        let a = Matrix::identity(Field::Rational, 2);
        let b = Matrix::identity(Field::Prime(5), 2);
        assert!(matches!(a.mul(&b), Err(Error::FieldMismatch(..))));
    }

    #[test]
    fn solve_and_inverse() {
        let m = q(&[vec![2, 1], vec![1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(Field::Rational, 2));
        let f = Field::Rational;
        let x = m.solve(&[f.from_i64(3), f.from_i64(2)]).unwrap().unwrap();
        assert_eq!(x, vec![f.from_i64(1), f.from_i64(1)]);
        let sing = q(&[vec![1, 1], vec![1, 1]]);
        assert!(sing.inverse().is_err());
        assert!(sing.solve(&[f.from_i64(1), f.from_i64(0)]).unwrap().is_none());
    }
}
