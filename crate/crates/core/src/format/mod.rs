//! The `.paste` text format for bracketed graphs and model assignments.
//!
//! ```text
//! # comments run to the end of the line
//! diagram running
//! objects V U T
//! edge f1 : V -> U
//! edge f2 : U -> T
//! edge g : V -> T
//! face alpha : dom = f1 f2 ; cod = g
//! global source = V ; sink = T ; dom = f1 f2 ; cod = g
//! ```
//!
//! A path lists edge names from source to sink. Parentheses give the
//! bracketing: every group holds one or two items and the outermost group
//! needs no parentheses, so `(f1 f2) f3` and `f1 (f2 f3)` are the two
//! bracketings of a path of length three. A face's source and sink are the
//! endpoints of its domain path.
//!
//! The path `e1 e2` evaluates to the composite `φ(e2) φ(e1)`.
//!
//! An optional model block assigns cells, either in the document or in a
//! separate assignment file:
//!
//! ```text
//! model span
//! set V = { v }
//! span f1 = { q0 : v -> u, q1 : v -> u }
//! cell alpha = { (p0, r0) -> k0, (p1, r0) -> k0 }
//!
//! model matrix
//! dim f1 = 2
//! cell alpha = [ 1 0 ; 0 1/2 ]
//! ```
//!
//! A span cell lists the image of every element of its domain apex; elements
//! of composite apexes are nested pairs `(s, t)` with `s` from the first edge
//! of the path. A matrix cell `m ⇒ n` has `n` rows and `m` columns; every
//! dimension is at least one.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::Ratio;
use thiserror::Error;

use crate::bicategory::matrix::{Matrix, MatrixCell, MatrixModel};
use crate::bicategory::span::{Elem, FinSet, Span, SpanCell, SpanModel};
use crate::bicategory::ModelError;
use crate::bracketed::{bracketed_text, BracketedError, BracketedGraph, FaceShapes};
use crate::bracketing::Bracketing;
use crate::diagram::{eval_path, DiagramError, PastingDiagram};
use crate::graph::{AnchoredFace, AnchoredGraph, Graph};
use crate::ids::{EdgeId, FaceId, VertexId};

mod lexer;
mod parser;

pub use parser::{parse, parse_assignments};

/// Scalars of the matrix model as written in the format.
pub type Scalar = Ratio<i64>;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("undeclared {kind} {name}")]
    Undeclared { kind: &'static str, name: String },
    #[error("{kind} {name} is declared twice")]
    Duplicate { kind: &'static str, name: String },
    #[error("no global block")]
    MissingGlobal,
    #[error("no model assignment")]
    MissingModel,
    #[error("the assignment is for the {found} model, not the {expected} model")]
    WrongModel {
        expected: ModelKind,
        found: ModelKind,
    },
    #[error("cell {face}: {message}")]
    Cell { face: String, message: String },
    #[error(transparent)]
    Bracketed(#[from] BracketedError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    Span,
    Matrix,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Span => "span",
            ModelKind::Matrix => "matrix",
        })
    }
}

/// Edge names with a bracketing of the same length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathExpr {
    pub edges: Vec<String>,
    pub shape: Bracketing,
}

impl fmt::Display for PathExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&bracketed_text(&self.shape, &self.edges))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeDecl {
    pub name: String,
    pub tail: String,
    pub head: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceDecl {
    pub name: String,
    pub dom: PathExpr,
    pub cod: PathExpr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalDecl {
    pub source: String,
    pub sink: String,
    pub dom: PathExpr,
    pub cod: PathExpr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetDecl {
    pub vertex: String,
    pub elements: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LegDecl {
    pub apex: String,
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanDecl {
    pub edge: String,
    pub legs: Vec<LegDecl>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanCellDecl {
    pub face: String,
    pub map: Vec<(Elem, Elem)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpanBlock {
    pub sets: Vec<SetDecl>,
    pub spans: Vec<SpanDecl>,
    pub cells: Vec<SpanCellDecl>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixCellDecl {
    pub face: String,
    pub rows: Vec<Vec<Scalar>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MatrixBlock {
    pub dims: Vec<(String, usize)>,
    pub cells: Vec<MatrixCellDecl>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelBlock {
    Span(SpanBlock),
    Matrix(MatrixBlock),
}

impl ModelBlock {
    pub fn kind(&self) -> ModelKind {
        match self {
            ModelBlock::Span(_) => ModelKind::Span,
            ModelBlock::Matrix(_) => ModelKind::Matrix,
        }
    }
}

/// A parsed `.paste` file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiagramDocument {
    pub name: String,
    pub objects: Vec<String>,
    pub edges: Vec<EdgeDecl>,
    pub faces: Vec<FaceDecl>,
    pub global: Option<GlobalDecl>,
    pub model: Option<ModelBlock>,
}

fn no_duplicates<'a>(
    kind: &'static str,
    names: impl IntoIterator<Item = &'a str>,
) -> Result<(), FormatError> {
    let mut seen = BTreeSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(FormatError::Duplicate {
                kind,
                name: n.to_owned(),
            });
        }
    }
    Ok(())
}

impl DiagramDocument {
    /// The bracketed graph described by the document. The anchored graph is
    /// not validated.
    pub fn bracketed_graph(&self) -> Result<BracketedGraph, FormatError> {
        no_duplicates("object", self.objects.iter().map(String::as_str))?;
        no_duplicates("edge", self.edges.iter().map(|e| e.name.as_str()))?;
        no_duplicates("face", self.faces.iter().map(|f| f.name.as_str()))?;
        let objects: BTreeSet<&str> = self.objects.iter().map(String::as_str).collect();
        let object = |name: &str| {
            if objects.contains(name) {
                Ok(VertexId::new(name))
            } else {
                Err(FormatError::Undeclared {
                    kind: "object",
                    name: name.to_owned(),
                })
            }
        };
        let mut graph = Graph::new();
        for o in &self.objects {
            graph.add_vertex(o.as_str());
        }
        for e in &self.edges {
            graph.add_edge(e.name.as_str(), object(&e.tail)?, object(&e.head)?);
        }
        let edges = |p: &PathExpr| -> Result<Vec<EdgeId>, FormatError> {
            p.edges
                .iter()
                .map(|e| {
                    let id = EdgeId::new(e);
                    if graph.edges.contains_key(&id) {
                        Ok(id)
                    } else {
                        Err(FormatError::Undeclared {
                            kind: "edge",
                            name: e.clone(),
                        })
                    }
                })
                .collect()
        };
        let mut faces = BTreeMap::new();
        let mut face_shapes = BTreeMap::new();
        for f in &self.faces {
            let domain = edges(&f.dom)?;
            let codomain = edges(&f.cod)?;
            let source = graph.edges[&domain[0]].tail.clone();
            let sink = graph.edges[domain.last().expect("paths are nonempty")]
                .head
                .clone();
            let id = FaceId::new(&f.name);
            faces.insert(
                id.clone(),
                AnchoredFace {
                    source,
                    sink,
                    domain,
                    codomain,
                },
            );
            face_shapes.insert(
                id,
                FaceShapes {
                    domain: f.dom.shape.clone(),
                    codomain: f.cod.shape.clone(),
                },
            );
        }
        let global = self.global.as_ref().ok_or(FormatError::MissingGlobal)?;
        let exterior = AnchoredFace {
            source: object(&global.source)?,
            sink: object(&global.sink)?,
            domain: edges(&global.dom)?,
            codomain: edges(&global.cod)?,
        };
        let anchored = AnchoredGraph {
            graph,
            faces,
            exterior,
        };
        Ok(BracketedGraph::new(
            anchored,
            global.dom.shape.clone(),
            global.cod.shape.clone(),
            face_shapes,
        )?)
    }

    /// The span diagram assigned by `block`, or by the document's own model
    /// block when `block` is `None`.
    pub fn span_diagram(
        &self,
        block: Option<&ModelBlock>,
    ) -> Result<PastingDiagram<SpanModel>, FormatError> {
        let shape = self.bracketed_graph()?;
        match self.assignment(block, ModelKind::Span)? {
            ModelBlock::Span(b) => span_diagram(shape, b),
            ModelBlock::Matrix(_) => unreachable!("kind checked"),
        }
    }

    /// The matrix diagram over the rationals assigned by `block` or the
    /// document's model block.
    pub fn matrix_diagram(
        &self,
        block: Option<&ModelBlock>,
    ) -> Result<PastingDiagram<MatrixModel<Scalar>>, FormatError> {
        let shape = self.bracketed_graph()?;
        match self.assignment(block, ModelKind::Matrix)? {
            ModelBlock::Matrix(b) => matrix_diagram(shape, b),
            ModelBlock::Span(_) => unreachable!("kind checked"),
        }
    }

    fn assignment<'a>(
        &'a self,
        block: Option<&'a ModelBlock>,
        expected: ModelKind,
    ) -> Result<&'a ModelBlock, FormatError> {
        let block = block
            .or(self.model.as_ref())
            .ok_or(FormatError::MissingModel)?;
        if block.kind() != expected {
            return Err(FormatError::WrongModel {
                expected,
                found: block.kind(),
            });
        }
        Ok(block)
    }

    /// A document describing `g`, with objects, edges and faces in name
    /// order.
    pub fn from_bracketed(name: &str, g: &BracketedGraph) -> Self {
        let a = &g.anchored;
        let path = |edges: &[EdgeId], shape: &Bracketing| PathExpr {
            edges: edges.iter().map(|e| e.to_string()).collect(),
            shape: shape.clone(),
        };
        Self {
            name: name.to_owned(),
            objects: a.graph.vertices.iter().map(|v| v.to_string()).collect(),
            edges: a
                .graph
                .edges
                .iter()
                .map(|(e, inc)| EdgeDecl {
                    name: e.to_string(),
                    tail: inc.tail.to_string(),
                    head: inc.head.to_string(),
                })
                .collect(),
            faces: a
                .faces
                .iter()
                .map(|(id, f)| {
                    let shapes = &g.face_shapes[id];
                    FaceDecl {
                        name: id.to_string(),
                        dom: path(&f.domain, &shapes.domain),
                        cod: path(&f.codomain, &shapes.codomain),
                    }
                })
                .collect(),
            global: Some(GlobalDecl {
                source: a.exterior.source.to_string(),
                sink: a.exterior.sink.to_string(),
                dom: path(&a.exterior.domain, &g.shape_dom),
                cod: path(&a.exterior.codomain, &g.shape_cod),
            }),
            model: None,
        }
    }
}

fn cell_error(face: &str, message: impl Into<String>) -> FormatError {
    FormatError::Cell {
        face: face.to_owned(),
        message: message.into(),
    }
}

fn face_sides<B: crate::bicategory::Bicategory>(
    model: &B,
    shape: &BracketedGraph,
    one_cells: &BTreeMap<EdgeId, B::OneCell>,
    face: &str,
) -> Result<(B::OneCell, B::OneCell), FormatError> {
    let id = FaceId::new(face);
    let f = shape
        .anchored
        .faces
        .get(&id)
        .ok_or_else(|| FormatError::Undeclared {
            kind: "face",
            name: face.to_owned(),
        })?;
    let shapes = &shape.face_shapes[&id];
    let lookup = |e: &EdgeId| {
        one_cells
            .get(e)
            .cloned()
            .ok_or_else(|| DiagramError::Missing {
                kind: "1-cell",
                name: e.to_string(),
            })
    };
    let dom = eval_path(model, &lookup, &f.domain, &shapes.domain)?;
    let cod = eval_path(model, &lookup, &f.codomain, &shapes.codomain)?;
    Ok((dom, cod))
}

fn span_diagram(
    shape: BracketedGraph,
    block: &SpanBlock,
) -> Result<PastingDiagram<SpanModel>, FormatError> {
    no_duplicates("set", block.sets.iter().map(|s| s.vertex.as_str()))?;
    no_duplicates("span", block.spans.iter().map(|s| s.edge.as_str()))?;
    no_duplicates("cell", block.cells.iter().map(|c| c.face.as_str()))?;
    let g = &shape.anchored.graph;
    let mut objects = BTreeMap::new();
    for s in &block.sets {
        let v = VertexId::new(&s.vertex);
        if !g.vertices.contains(&v) {
            return Err(FormatError::Undeclared {
                kind: "object",
                name: s.vertex.clone(),
            });
        }
        objects.insert(v, FinSet::new(&s.vertex, &s.elements)?);
    }
    let mut one_cells = BTreeMap::new();
    for s in &block.spans {
        let e = EdgeId::new(&s.edge);
        let inc = g.edges.get(&e).ok_or_else(|| FormatError::Undeclared {
            kind: "edge",
            name: s.edge.clone(),
        })?;
        let set = |v: &VertexId| {
            objects.get(v).ok_or_else(|| DiagramError::Missing {
                kind: "object",
                name: v.to_string(),
            })
        };
        let (x, y) = (set(&inc.tail)?, set(&inc.head)?);
        let index = |set: &FinSet, label: &str| {
            set.index_of(label).ok_or_else(|| {
                ModelError::InvalidCell(format!(
                    "span {}: {label} is not an element of {}",
                    s.edge,
                    set.name()
                ))
            })
        };
        let legs = s
            .legs
            .iter()
            .map(|l| Ok((Elem::atom(&l.apex), index(x, &l.left)?, index(y, &l.right)?)))
            .collect::<Result<Vec<_>, ModelError>>()?;
        one_cells.insert(e, Span::new(x, y, legs)?);
    }
    let mut two_cells = BTreeMap::new();
    for c in &block.cells {
        let (dom, cod) = face_sides(&SpanModel, &shape, &one_cells, &c.face)?;
        let table: BTreeMap<&Elem, &Elem> = c.map.iter().map(|(a, b)| (a, b)).collect();
        if table.len() != c.map.len() {
            return Err(cell_error(&c.face, "an element is listed twice"));
        }
        for a in table.keys() {
            if dom.index_of(a).is_none() {
                return Err(cell_error(
                    &c.face,
                    format!("{a} is not in the domain apex"),
                ));
            }
        }
        let map = dom
            .apex()
            .iter()
            .map(|a| {
                let b = table
                    .get(a)
                    .ok_or_else(|| cell_error(&c.face, format!("no image for {a}")))?;
                cod.index_of(b)
                    .ok_or_else(|| cell_error(&c.face, format!("{b} is not in the codomain apex")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        two_cells.insert(FaceId::new(&c.face), SpanCell::new(&dom, &cod, map)?);
    }
    Ok(PastingDiagram::new(
        &SpanModel, shape, objects, one_cells, two_cells,
    )?)
}

fn matrix_diagram(
    shape: BracketedGraph,
    block: &MatrixBlock,
) -> Result<PastingDiagram<MatrixModel<Scalar>>, FormatError> {
    no_duplicates("dim", block.dims.iter().map(|d| d.0.as_str()))?;
    no_duplicates("cell", block.cells.iter().map(|c| c.face.as_str()))?;
    let model = MatrixModel::<Scalar>::new();
    let g = &shape.anchored.graph;
    let objects = g.vertices.iter().map(|v| (v.clone(), ())).collect();
    let mut one_cells = BTreeMap::new();
    for (name, dim) in &block.dims {
        let e = EdgeId::new(name);
        if !g.edges.contains_key(&e) {
            return Err(FormatError::Undeclared {
                kind: "edge",
                name: name.clone(),
            });
        }
        one_cells.insert(e, *dim);
    }
    let mut two_cells = BTreeMap::new();
    for c in &block.cells {
        let (dom, cod) = face_sides(&model, &shape, &one_cells, &c.face)?;
        if c.rows.len() != cod {
            return Err(cell_error(
                &c.face,
                format!("{} rows, expected {cod}", c.rows.len()),
            ));
        }
        let matrix = Matrix::from_rows(c.rows.clone(), dom)
            .map_err(|e| cell_error(&c.face, e.to_string()))?;
        two_cells.insert(FaceId::new(&c.face), MatrixCell::new(matrix));
    }
    Ok(PastingDiagram::new(
        &model, shape, objects, one_cells, two_cells,
    )?)
}

fn write_list<T>(out: &mut String, items: &[T], sep: &str, item: impl Fn(&T) -> String) {
    let parts: Vec<String> = items.iter().map(item).collect();
    out.push_str(&parts.join(sep));
}

/// Prints a document in the canonical layout accepted by [`parse`].
pub fn print(doc: &DiagramDocument) -> String {
    let mut out = String::new();
    if !doc.name.is_empty() {
        out.push_str(&format!("diagram {}\n", doc.name));
    }
    if !doc.objects.is_empty() {
        out.push_str(&format!("objects {}\n", doc.objects.join(" ")));
    }
    for e in &doc.edges {
        out.push_str(&format!("edge {} : {} -> {}\n", e.name, e.tail, e.head));
    }
    for f in &doc.faces {
        out.push_str(&format!(
            "face {} : dom = {} ; cod = {}\n",
            f.name, f.dom, f.cod
        ));
    }
    if let Some(g) = &doc.global {
        out.push_str(&format!(
            "global source = {} ; sink = {} ; dom = {} ; cod = {}\n",
            g.source, g.sink, g.dom, g.cod
        ));
    }
    if let Some(m) = &doc.model {
        out.push_str(&print_model(m));
    }
    out
}

/// Prints a model block in the layout accepted by [`parse_assignments`].
pub fn print_model(m: &ModelBlock) -> String {
    let mut out = format!("model {}\n", m.kind());
    match m {
        ModelBlock::Span(b) => {
            for s in &b.sets {
                out.push_str(&format!("set {} = {{ ", s.vertex));
                write_list(&mut out, &s.elements, ", ", |e| e.clone());
                out.push_str(" }\n");
            }
            for s in &b.spans {
                out.push_str(&format!("span {} = {{ ", s.edge));
                write_list(&mut out, &s.legs, ", ", |l| {
                    format!("{} : {} -> {}", l.apex, l.left, l.right)
                });
                out.push_str(" }\n");
            }
            for c in &b.cells {
                out.push_str(&format!("cell {} = {{ ", c.face));
                write_list(&mut out, &c.map, ", ", |(a, b)| format!("{a} -> {b}"));
                out.push_str(" }\n");
            }
        }
        ModelBlock::Matrix(b) => {
            for (e, d) in &b.dims {
                out.push_str(&format!("dim {e} = {d}\n"));
            }
            for c in &b.cells {
                out.push_str(&format!("cell {} = [ ", c.face));
                write_list(&mut out, &c.rows, " ; ", |row| {
                    row.iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                });
                out.push_str(" ]\n");
            }
        }
    }
    out
}
