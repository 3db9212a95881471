//! A strict bicategory with one object: 1-cells are natural numbers added
//! under composition, and 2-cells `m ⇒ n` are `n × m` matrices over a
//! semiring. Horizontal composition of 2-cells is the block-diagonal sum, and
//! the associator and unitors are identity matrices.

use std::fmt;
use std::marker::PhantomData;

use num_traits::{CheckedAdd, CheckedMul, One, Zero};
use rand::Rng;

use super::{Bicategory, ModelError, Sampling};

/// Exact scalar arithmetic with overflow detection.
pub trait Semiring: Clone + PartialEq + fmt::Debug + Zero + One + CheckedAdd + CheckedMul {}

impl<T> Semiring for T where T: Clone + PartialEq + fmt::Debug + Zero + One + CheckedAdd + CheckedMul
{}

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Semiring> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = S::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>, cols: usize) -> Result<Self, ModelError> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(ModelError::InvalidCell(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(Self {
            rows: n,
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn checked_mul(&self, other: &Matrix<S>) -> Result<Matrix<S>, ModelError> {
        if self.cols != other.rows {
            return Err(ModelError::EndpointMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = S::zero();
                for k in 0..self.cols {
                    let term = self
                        .get(i, k)
                        .checked_mul(other.get(k, j))
                        .ok_or(ModelError::Overflow)?;
                    acc = acc.checked_add(&term).ok_or(ModelError::Overflow)?;
                }
                out.data[i * other.cols + j] = acc;
            }
        }
        Ok(out)
    }

    /// `diag(self, other)`.
    pub fn direct_sum(&self, other: &Matrix<S>) -> Matrix<S> {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[i * out.cols + j] = self.get(i, j).clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.data[(self.rows + i) * out.cols + self.cols + j] = other.get(i, j).clone();
            }
        }
        out
    }
}

impl<S: fmt::Debug> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str("; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{:?}", self.data[i * self.cols + j])?;
            }
        }
        f.write_str("]")
    }
}

/// A 2-cell `dom ⇒ cod`, stored as a `cod × dom` matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatrixCell<S> {
    dom: usize,
    cod: usize,
    matrix: Matrix<S>,
}

impl<S: Semiring> MatrixCell<S> {
    pub fn new(matrix: Matrix<S>) -> Self {
        Self {
            dom: matrix.cols,
            cod: matrix.rows,
            matrix,
        }
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.matrix
    }
}

impl<S: fmt::Debug> fmt::Debug for MatrixCell<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} => {} {:?}", self.dom, self.cod, self.matrix)
    }
}

/// The strict matrix bicategory over the semiring `S`.
pub struct MatrixModel<S> {
    _scalar: PhantomData<fn() -> S>,
}

impl<S> MatrixModel<S> {
    pub fn new() -> Self {
        Self {
            _scalar: PhantomData,
        }
    }
}

impl<S> Default for MatrixModel<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S> Clone for MatrixModel<S> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<S> Copy for MatrixModel<S> {}

impl<S> fmt::Debug for MatrixModel<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("MatrixModel")
    }
}

static UNIT: () = ();

/// `k` as a sum of ones.
pub fn small<S: Semiring>(k: u32) -> S {
    (0..k).fold(S::zero(), |acc, _| acc + S::one())
}

impl<S: Semiring> MatrixModel<S> {
    fn identity_cell(&self, n: usize) -> MatrixCell<S> {
        MatrixCell::new(Matrix::identity(n))
    }

    fn sum3(&self, f: usize, g: usize, h: usize) -> Result<usize, ModelError> {
        usize::checked_add(f, g)
            .and_then(|x| usize::checked_add(x, h))
            .ok_or(ModelError::Overflow)
    }
}

impl<S: Semiring> Bicategory for MatrixModel<S> {
    type Object = ();
    type OneCell = usize;
    type TwoCell = MatrixCell<S>;

    fn source<'a>(&self, _: &'a usize) -> &'a () {
        &UNIT
    }

    fn target<'a>(&self, _: &'a usize) -> &'a () {
        &UNIT
    }

    fn cell_source<'a>(&self, alpha: &'a MatrixCell<S>) -> &'a usize {
        &alpha.dom
    }

    fn cell_target<'a>(&self, alpha: &'a MatrixCell<S>) -> &'a usize {
        &alpha.cod
    }

    fn identity_one(&self, _: &()) -> usize {
        0
    }

    fn identity_two(&self, f: &usize) -> MatrixCell<S> {
        self.identity_cell(*f)
    }

    fn compose_one(&self, g: &usize, f: &usize) -> Result<usize, ModelError> {
        usize::checked_add(*g, *f).ok_or(ModelError::Overflow)
    }

    fn compose_vertical(
        &self,
        beta: &MatrixCell<S>,
        alpha: &MatrixCell<S>,
    ) -> Result<MatrixCell<S>, ModelError> {
        if alpha.cod != beta.dom {
            return Err(ModelError::EndpointMismatch(format!(
                "vertical composite of {} => {} after {} => {}",
                beta.dom, beta.cod, alpha.dom, alpha.cod
            )));
        }
        Ok(MatrixCell::new(beta.matrix.checked_mul(&alpha.matrix)?))
    }

    fn compose_horizontal(
        &self,
        beta: &MatrixCell<S>,
        alpha: &MatrixCell<S>,
    ) -> Result<MatrixCell<S>, ModelError> {
        Ok(MatrixCell::new(alpha.matrix.direct_sum(&beta.matrix)))
    }

    fn associator(&self, f: &usize, g: &usize, h: &usize) -> Result<MatrixCell<S>, ModelError> {
        Ok(self.identity_cell(self.sum3(*f, *g, *h)?))
    }

    fn associator_inverse(
        &self,
        f: &usize,
        g: &usize,
        h: &usize,
    ) -> Result<MatrixCell<S>, ModelError> {
        self.associator(f, g, h)
    }

    fn left_unitor(&self, f: &usize) -> Result<MatrixCell<S>, ModelError> {
        Ok(self.identity_cell(*f))
    }

    fn left_unitor_inverse(&self, f: &usize) -> Result<MatrixCell<S>, ModelError> {
        Ok(self.identity_cell(*f))
    }

    fn right_unitor(&self, f: &usize) -> Result<MatrixCell<S>, ModelError> {
        Ok(self.identity_cell(*f))
    }

    fn right_unitor_inverse(&self, f: &usize) -> Result<MatrixCell<S>, ModelError> {
        Ok(self.identity_cell(*f))
    }
}

impl<S: Semiring> Sampling for MatrixModel<S> {
    fn random_object<R: Rng + ?Sized>(&self, _: &mut R, _: &str, _: usize) {}

    /// Dimension between 1 and `max_size`.
    fn random_one_cell<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        _: &(),
        _: &(),
        max_size: usize,
    ) -> usize {
        rng.gen_range(1..=max_size.max(1))
    }

    /// Entries drawn from `0..=2`.
    fn random_two_cell<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        f: &usize,
        g: &usize,
    ) -> Option<MatrixCell<S>> {
        let rows = (0..*g)
            .map(|_| (0..*f).map(|_| small::<S>(rng.gen_range(0..=2))).collect())
            .collect();
        Some(MatrixCell::new(
            Matrix::from_rows(rows, *f).expect("rows have f entries"),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    #[test]
    fn identity_sum_is_identity() {
        let m = MatrixModel::<u64>::new();
        let a = m.identity_two(&2);
        let b = m.identity_two(&3);
        assert_eq!(m.compose_horizontal(&b, &a).unwrap(), m.identity_two(&5));
    }

    #[test]
    fn overflow_is_detected() {
        let m = MatrixModel::<u8>::new();
        let big = MatrixCell::new(Matrix::from_rows(vec![vec![200u8]], 1).unwrap());
        assert_eq!(m.compose_vertical(&big, &big), Err(ModelError::Overflow));
    }

    #[test]
    fn rational_scalars_work() {
        let m = MatrixModel::<Ratio<i64>>::new();
        let half = MatrixCell::new(Matrix::from_rows(vec![vec![Ratio::new(1, 2)]], 1).unwrap());
        let two =
            MatrixCell::new(Matrix::from_rows(vec![vec![Ratio::from_integer(2)]], 1).unwrap());
        assert_eq!(m.compose_vertical(&two, &half).unwrap(), m.identity_two(&1));
    }
}
