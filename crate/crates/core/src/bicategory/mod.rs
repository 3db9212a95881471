//! The bicategory evaluation interface and its executable models.

use std::fmt::Debug;

use rand::Rng;
use thiserror::Error;

pub mod axioms;
pub mod matrix;
pub mod span;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),
    #[error("2-cell does not commute with the legs: {0}")]
    NotLegCommuting(String),
    #[error("invalid cell: {0}")]
    InvalidCell(String),
    #[error("arithmetic overflow")]
    Overflow,
}

/// Objects, 1-cells and 2-cells with the structure of a bicategory.
///
/// Horizontal composition takes the later cell first: `compose_one(g, f)` is
/// `gf` for `f : X → Y` and `g : Y → Z`. Associators take their arguments in
/// path order: `associator(f, g, h) : (hg)f ⇒ h(gf)`.
pub trait Bicategory {
    type Object: Clone + PartialEq + Debug;
    type OneCell: Clone + PartialEq + Debug;
    type TwoCell: Clone + PartialEq + Debug;

    fn source<'a>(&self, f: &'a Self::OneCell) -> &'a Self::Object;
    fn target<'a>(&self, f: &'a Self::OneCell) -> &'a Self::Object;
    fn cell_source<'a>(&self, alpha: &'a Self::TwoCell) -> &'a Self::OneCell;
    fn cell_target<'a>(&self, alpha: &'a Self::TwoCell) -> &'a Self::OneCell;

    fn identity_one(&self, x: &Self::Object) -> Self::OneCell;
    fn identity_two(&self, f: &Self::OneCell) -> Self::TwoCell;

    /// `gf`.
    fn compose_one(
        &self,
        g: &Self::OneCell,
        f: &Self::OneCell,
    ) -> Result<Self::OneCell, ModelError>;
    /// `β · α`, first `α` then `β`.
    fn compose_vertical(
        &self,
        beta: &Self::TwoCell,
        alpha: &Self::TwoCell,
    ) -> Result<Self::TwoCell, ModelError>;
    /// `β ∗ α` for `α : f ⇒ f'` and `β : g ⇒ g'`, from `gf` to `g'f'`.
    fn compose_horizontal(
        &self,
        beta: &Self::TwoCell,
        alpha: &Self::TwoCell,
    ) -> Result<Self::TwoCell, ModelError>;

    fn associator(
        &self,
        f: &Self::OneCell,
        g: &Self::OneCell,
        h: &Self::OneCell,
    ) -> Result<Self::TwoCell, ModelError>;
    fn associator_inverse(
        &self,
        f: &Self::OneCell,
        g: &Self::OneCell,
        h: &Self::OneCell,
    ) -> Result<Self::TwoCell, ModelError>;
    /// `ℓ_f : 1_Y f ⇒ f`.
    fn left_unitor(&self, f: &Self::OneCell) -> Result<Self::TwoCell, ModelError>;
    fn left_unitor_inverse(&self, f: &Self::OneCell) -> Result<Self::TwoCell, ModelError>;
    /// `r_f : f 1_X ⇒ f`.
    fn right_unitor(&self, f: &Self::OneCell) -> Result<Self::TwoCell, ModelError>;
    fn right_unitor_inverse(&self, f: &Self::OneCell) -> Result<Self::TwoCell, ModelError>;

    fn two_cells_equal(&self, a: &Self::TwoCell, b: &Self::TwoCell) -> bool {
        a == b
    }
}

/// Random cells for property tests and the verification harness.
pub trait Sampling: Bicategory {
    /// An object labelled `name` with at most `max_size` elements (where that
    /// notion applies).
    fn random_object<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        name: &str,
        max_size: usize,
    ) -> Self::Object;

    fn random_one_cell<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        x: &Self::Object,
        y: &Self::Object,
        max_size: usize,
    ) -> Self::OneCell;

    /// A uniformly random 2-cell `f ⇒ g`, or `None` if there is none.
    fn random_two_cell<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        f: &Self::OneCell,
        g: &Self::OneCell,
    ) -> Option<Self::TwoCell>;

    /// A 1-cell parallel to `f` that admits a 2-cell `f ⇒ g`, with such a
    /// 2-cell. Falls back to `1_f` after a few rejected candidates.
    fn random_two_cell_from<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        f: &Self::OneCell,
        max_size: usize,
    ) -> (Self::OneCell, Self::TwoCell) {
        for _ in 0..16 {
            let g = self.random_one_cell(rng, self.source(f), self.target(f), max_size);
            if let Some(alpha) = self.random_two_cell(rng, f, &g) {
                return (g, alpha);
            }
        }
        (f.clone(), self.identity_two(f))
    }
}
