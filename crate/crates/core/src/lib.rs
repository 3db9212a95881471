//! Pasting diagrams in bicategories.
//!
//! Anchored plane graphs are described by face data, recognized as pasting
//! schemes, bracketed, extended to composition schemes by inserting
//! associativity faces, and evaluated in concrete bicategory models.
//!
//! Paths are written in diagram order: the path `e1 e2` runs through `e1`
//! first, and evaluates to the horizontal composite `φ(e2) φ(e1)`.

pub mod bicategory;
pub mod bracketed;
pub mod bracketing;
pub mod diagram;
pub mod fixtures;
pub mod format;
pub mod graph;
pub mod harness;
pub mod ids;
pub mod scheme;

pub use bicategory::matrix::{Matrix, MatrixModel, Semiring};
pub use bicategory::span::SpanModel;
pub use bicategory::{Bicategory, ModelError};
pub use bracketed::{BracketedGraph, CompositionScheme, ConsistentGraph, ExtensionCertificate};
pub use bracketing::{AssocMove, Bracketing};
pub use graph::{AnchoredGraph, ValidationReport};
pub use ids::{EdgeId, FaceId, VertexId};
pub use scheme::PastingSchemePresentation;

/// Matrices over the natural numbers, the default strict model.
pub type NatMatrixModel = MatrixModel<u64>;
/// Matrices over the integers.
pub type IntMatrixModel = MatrixModel<i64>;
/// Matrices over the rationals.
pub type RationalMatrixModel = MatrixModel<num_rational::Ratio<i64>>;
