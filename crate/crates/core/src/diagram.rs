//! Pasting diagrams in a bicategory and their composites.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::bicategory::{Bicategory, ModelError};
use crate::bracketed::{
    bracketed_isomorphism, chain_scheme, check_associativity, check_extension, collapse,
    extend_to_composition_scheme, path_skeleton, AssocForm, AssociativityGraph, BracketedError,
    BracketedGraph, CompositionScheme, ConsistentGraph, ExtensionCertificate, FactorKind,
};
use crate::bracketing::{AssocMove, Bracketing};
use crate::graph::Side;
use crate::ids::{EdgeId, FaceId, VertexId};
use crate::scheme::{find_presentation, SchemeError};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Bracketed(#[from] BracketedError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error("no {kind} assigned to {name}")]
    Missing { kind: &'static str, name: String },
    #[error("1-cell on edge {0} does not run between the objects on its endpoints")]
    EdgeEndpoints(EdgeId),
    #[error("2-cell on face {face} has the wrong {side}")]
    FaceBoundary { face: FaceId, side: Side },
    #[error("not extendable: edges {0} and {1} carry different 1-cells")]
    NotExtendable(EdgeId, EdgeId),
    #[error("constituent {0} does not start where the previous one ends")]
    InterfaceChain(usize),
    #[error("path and bracketing lengths differ")]
    ShapeMismatch,
    #[error("cannot evaluate an empty path")]
    EmptyPath,
    #[error("composite has the wrong {0}")]
    Endpoints(Side),
}

/// An assignment of objects, 1-cells and 2-cells to the vertices, edges and
/// faces of a bracketed graph.
pub struct PastingDiagram<B: Bicategory> {
    pub shape: BracketedGraph,
    pub objects: BTreeMap<VertexId, B::Object>,
    pub one_cells: BTreeMap<EdgeId, B::OneCell>,
    pub two_cells: BTreeMap<FaceId, B::TwoCell>,
}

impl<B: Bicategory> Clone for PastingDiagram<B> {
    fn clone(&self) -> Self {
        Self {
            shape: self.shape.clone(),
            objects: self.objects.clone(),
            one_cells: self.one_cells.clone(),
            two_cells: self.two_cells.clone(),
        }
    }
}

impl<B: Bicategory> std::fmt::Debug for PastingDiagram<B> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PastingDiagram")
            .field("shape", &self.shape)
            .field("objects", &self.objects)
            .field("one_cells", &self.one_cells)
            .field("two_cells", &self.two_cells)
            .finish()
    }
}

impl<B: Bicategory> PastingDiagram<B> {
    /// Checks that every cell is assigned and has the right boundary.
    pub fn new(
        model: &B,
        shape: BracketedGraph,
        objects: BTreeMap<VertexId, B::Object>,
        one_cells: BTreeMap<EdgeId, B::OneCell>,
        two_cells: BTreeMap<FaceId, B::TwoCell>,
    ) -> Result<Self, DiagramError> {
        shape.check_shape_lengths()?;
        let d = Self {
            shape,
            objects,
            one_cells,
            two_cells,
        };
        let g = &d.shape.anchored;
        for v in &g.graph.vertices {
            if !d.objects.contains_key(v) {
                return Err(DiagramError::Missing {
                    kind: "object",
                    name: v.to_string(),
                });
            }
        }
        for (e, inc) in &g.graph.edges {
            let f = d.one_cell(e)?;
            if model.source(f) != &d.objects[&inc.tail] || model.target(f) != &d.objects[&inc.head]
            {
                return Err(DiagramError::EdgeEndpoints(e.clone()));
            }
        }
        for (id, face) in &g.faces {
            let cell = d.two_cells.get(id).ok_or_else(|| DiagramError::Missing {
                kind: "2-cell",
                name: id.to_string(),
            })?;
            let shapes = &d.shape.face_shapes[id];
            let lookup = |e: &EdgeId| d.one_cell(e).cloned();
            for side in [Side::Domain, Side::Codomain] {
                let expected = eval_path(model, &lookup, face.path(side), shapes.side(side))?;
                let found = match side {
                    Side::Domain => model.cell_source(cell),
                    Side::Codomain => model.cell_target(cell),
                };
                if found != &expected {
                    return Err(DiagramError::FaceBoundary {
                        face: id.clone(),
                        side,
                    });
                }
            }
        }
        Ok(d)
    }

    pub fn one_cell(&self, e: &EdgeId) -> Result<&B::OneCell, DiagramError> {
        self.one_cells.get(e).ok_or_else(|| DiagramError::Missing {
            kind: "1-cell",
            name: e.to_string(),
        })
    }

    /// The 1-cell of the global domain or codomain.
    pub fn boundary(&self, model: &B, side: Side) -> Result<B::OneCell, DiagramError> {
        let lookup = |e: &EdgeId| self.one_cell(e).cloned();
        eval_path(
            model,
            &lookup,
            self.shape.anchored.exterior.path(side),
            self.shape.shape(side),
        )
    }
}

/// Evaluates a bracketed path: `(p q)` becomes `φ(q) φ(p)`.
pub fn eval_path<B: Bicategory>(
    model: &B,
    cell: &dyn Fn(&EdgeId) -> Result<B::OneCell, DiagramError>,
    edges: &[EdgeId],
    shape: &Bracketing,
) -> Result<B::OneCell, DiagramError> {
    if edges.len() != shape.len() {
        return Err(DiagramError::ShapeMismatch);
    }
    match shape {
        Bracketing::Empty => Err(DiagramError::EmptyPath),
        Bracketing::Dash => cell(&edges[0]),
        Bracketing::Pair(l, r) => {
            let first = eval_path(model, cell, &edges[..l.len()], l)?;
            let second = eval_path(model, cell, &edges[l.len()..], r)?;
            Ok(model.compose_one(&second, &first)?)
        }
    }
}

type PathMemo<C> = std::cell::RefCell<BTreeMap<(Vec<EdgeId>, Bracketing), C>>;

/// Memoizes subpath evaluation within one diagram.
struct PathCache<'a, B: Bicategory> {
    model: &'a B,
    cell: &'a dyn Fn(&EdgeId) -> Result<B::OneCell, DiagramError>,
    memo: PathMemo<B::OneCell>,
}

impl<B: Bicategory> PathCache<'_, B> {
    fn eval(&self, edges: &[EdgeId], shape: &Bracketing) -> Result<B::OneCell, DiagramError> {
        if let Bracketing::Dash = shape {
            return (self.cell)(&edges[0]);
        }
        let key = (edges.to_vec(), shape.clone());
        if let Some(v) = self.memo.borrow().get(&key) {
            return Ok(v.clone());
        }
        let value = match shape {
            Bracketing::Pair(l, r) => {
                let first = self.eval(&edges[..l.len()], l)?;
                let second = self.eval(&edges[l.len()..], r)?;
                self.model.compose_one(&second, &first)?
            }
            _ => eval_path(self.model, self.cell, edges, shape)?,
        };
        self.memo.borrow_mut().insert(key, value.clone());
        Ok(value)
    }
}

/// Whiskers `face_cell` by identities along the outer bracketing of a
/// consistent graph.
pub fn constituent<B: Bicategory>(
    model: &B,
    cell: &dyn Fn(&EdgeId) -> Result<B::OneCell, DiagramError>,
    factor: &ConsistentGraph,
    face_cell: &B::TwoCell,
) -> Result<B::TwoCell, DiagramError> {
    let mut items = Vec::new();
    for e in factor.prefix() {
        items.push(model.identity_two(&cell(e)?));
    }
    items.push(face_cell.clone());
    for e in factor.suffix() {
        items.push(model.identity_two(&cell(e)?));
    }
    fold_cells(model, &factor.outer, &items)
}

fn fold_cells<B: Bicategory>(
    model: &B,
    shape: &Bracketing,
    items: &[B::TwoCell],
) -> Result<B::TwoCell, DiagramError> {
    match shape {
        Bracketing::Empty => Err(DiagramError::EmptyPath),
        Bracketing::Dash => Ok(items[0].clone()),
        Bracketing::Pair(l, r) => {
            let first = fold_cells(model, l, &items[..l.len()])?;
            let second = fold_cells(model, r, &items[l.len()..])?;
            Ok(model.compose_horizontal(&second, &first)?)
        }
    }
}

/// The face label of a constituent, e.g. `1_f2 * theta1`.
pub fn constituent_label(factor: &ConsistentGraph, face_label: &str) -> String {
    let mut items: Vec<String> = factor.prefix().iter().map(|e| format!("1_{e}")).collect();
    items.push(face_label.to_owned());
    items.extend(factor.suffix().iter().map(|e| format!("1_{e}")));
    fn go(shape: &Bracketing, items: &[String]) -> (String, bool) {
        match shape {
            Bracketing::Pair(l, r) => {
                let (a, a_nested) = go(l, &items[..l.len()]);
                let (b, b_nested) = go(r, &items[l.len()..]);
                let wrap = |s: String, nested: bool| if nested { format!("({s})") } else { s };
                (
                    format!("{} * {}", wrap(b, b_nested), wrap(a, a_nested)),
                    true,
                )
            }
            _ => (items[0].clone(), false),
        }
    }
    go(&factor.outer, &items).0
}

/// The associator component an associativity graph stands for, after checking
/// that paired edges carry equal 1-cells.
pub fn canonical_extension_face<B: Bicategory>(
    model: &B,
    cell: &dyn Fn(&EdgeId) -> Result<B::OneCell, DiagramError>,
    a: &AssociativityGraph,
) -> Result<B::TwoCell, DiagramError> {
    for (x, y) in a.edge_pairs() {
        if cell(x)? != cell(y)? {
            return Err(DiagramError::NotExtendable(x.clone(), y.clone()));
        }
    }
    let seg = |i: usize| eval_path(model, cell, &a.segments[i], &a.segment_shapes[i]);
    let (f, g, h) = (seg(0)?, seg(1)?, seg(2)?);
    Ok(match a.form {
        AssocForm::Form1 => model.associator_inverse(&f, &g, &h)?,
        AssocForm::Form2 => model.associator(&f, &g, &h)?,
    })
}

/// One constituent of a composite.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceEntry<C> {
    pub label: String,
    pub kind: FactorKind,
    pub value: C,
}

/// A composite with its constituents.
pub type Evaluated<C> = (C, Vec<TraceEntry<C>>);

/// Evaluates a composition scheme: factors listed in `assoc` get associator
/// components, all others the cell returned by `face_cell`.
pub fn evaluate_scheme<B: Bicategory>(
    model: &B,
    scheme: &CompositionScheme,
    assoc: &[usize],
    cell: &dyn Fn(&EdgeId) -> Result<B::OneCell, DiagramError>,
    face_cell: &dyn Fn(&FaceId) -> Result<B::TwoCell, DiagramError>,
) -> Result<Evaluated<B::TwoCell>, DiagramError> {
    let cache = PathCache {
        model,
        cell,
        memo: Default::default(),
    };
    let cached = |e: &EdgeId| cell(e);
    let mut trace = Vec::with_capacity(scheme.factors.len());
    let mut total: Option<B::TwoCell> = None;
    for (i, factor) in scheme.factors.iter().enumerate() {
        let (inner, kind) = if assoc.contains(&i) {
            let a = check_associativity(factor)?;
            (
                canonical_extension_face(model, &cached, &a)?,
                FactorKind::Associator(a.form),
            )
        } else {
            (
                face_cell(&factor.face)?,
                FactorKind::Face(factor.face.clone()),
            )
        };
        let label = match &kind {
            FactorKind::Associator(form) => constituent_label(factor, form.label()),
            FactorKind::Face(id) => constituent_label(factor, id.as_str()),
        };
        let value = constituent(model, &cached, factor, &inner)?;
        let dom = cache.eval(
            &factor.graph.anchored.exterior.domain,
            &factor.graph.shape_dom,
        )?;
        if model.cell_source(&value) != &dom {
            return Err(DiagramError::InterfaceChain(i));
        }
        total = Some(match total {
            None => value.clone(),
            Some(acc) => {
                if model.cell_target(&acc) != model.cell_source(&value) {
                    return Err(DiagramError::InterfaceChain(i));
                }
                model.compose_vertical(&value, &acc)?
            }
        });
        trace.push(TraceEntry { label, kind, value });
    }
    let total = total.ok_or(BracketedError::EmptyScheme)?;
    Ok((total, trace))
}

/// The composite `|φ|` together with its constituents and the certificate
/// used.
#[derive(Clone, Debug)]
pub struct CompositeResult<C> {
    pub value: C,
    pub trace: Vec<TraceEntry<C>>,
    pub certificate: ExtensionCertificate,
}

/// Composes `d` along the extension `cert`.
pub fn compose<B: Bicategory>(
    model: &B,
    d: &PastingDiagram<B>,
    cert: &ExtensionCertificate,
) -> Result<CompositeResult<B::TwoCell>, DiagramError> {
    let collapsed = check_extension(cert, &d.shape)?;
    let iso = bracketed_isomorphism(&collapsed.graph, &d.shape)
        .ok_or(BracketedError::CollapseMismatch)?;
    let cell = |e: &EdgeId| {
        let rep = collapsed
            .edge_rep
            .get(e)
            .ok_or_else(|| DiagramError::Missing {
                kind: "1-cell",
                name: e.to_string(),
            })?;
        d.one_cell(&iso.edges[rep]).cloned()
    };
    let face_cell = |f: &FaceId| {
        let target = iso.faces.get(f).ok_or_else(|| DiagramError::Missing {
            kind: "2-cell",
            name: f.to_string(),
        })?;
        d.two_cells
            .get(target)
            .cloned()
            .ok_or_else(|| DiagramError::Missing {
                kind: "2-cell",
                name: target.to_string(),
            })
    };
    let (value, trace) =
        evaluate_scheme(model, &cert.scheme, &cert.assoc_indices, &cell, &face_cell)?;
    for side in [Side::Domain, Side::Codomain] {
        let expected = d.boundary(model, side)?;
        let found = match side {
            Side::Domain => model.cell_source(&value),
            Side::Codomain => model.cell_target(&value),
        };
        if found != &expected {
            return Err(DiagramError::Endpoints(side));
        }
    }
    Ok(CompositeResult {
        value,
        trace,
        certificate: cert.clone(),
    })
}

/// Composes `d` along the canonical extension of its greedy presentation.
pub fn composite<B: Bicategory>(
    model: &B,
    d: &PastingDiagram<B>,
) -> Result<CompositeResult<B::TwoCell>, DiagramError> {
    let p = find_presentation(&d.shape.anchored)?;
    let cert = extend_to_composition_scheme(&d.shape, &p)?;
    compose(model, d, &cert)
}

/// The composite of the associativity graphs realizing `moves` on a path
/// carrying `cells`, starting from the bracketing `from`. An empty chain
/// evaluates to the identity.
pub fn associator_composite<B: Bicategory>(
    model: &B,
    cells: &[B::OneCell],
    from: &Bracketing,
    moves: &[AssocMove],
) -> Result<B::TwoCell, DiagramError> {
    let (path, incidence) = path_skeleton(cells.len());
    let by_name: BTreeMap<EdgeId, B::OneCell> = path
        .edges
        .iter()
        .cloned()
        .zip(cells.iter().cloned())
        .collect();
    let Some(scheme) = chain_scheme(&path, &incidence, from, moves)? else {
        let lookup = |e: &EdgeId| Ok(by_name[e].clone());
        return Ok(model.identity_two(&eval_path(model, &lookup, &path.edges, from)?));
    };
    let reps = collapse(&scheme, &(0..scheme.len()).collect::<Vec<_>>())?.edge_rep;
    let cell = |e: &EdgeId| {
        reps.get(e)
            .and_then(|r| by_name.get(r))
            .cloned()
            .ok_or_else(|| DiagramError::Missing {
                kind: "1-cell",
                name: e.to_string(),
            })
    };
    let no_faces = |f: &FaceId| {
        Err(DiagramError::Missing {
            kind: "2-cell",
            name: f.to_string(),
        })
    };
    let all: Vec<usize> = (0..scheme.len()).collect();
    Ok(evaluate_scheme(model, &scheme, &all, &cell, &no_faces)?.0)
}
