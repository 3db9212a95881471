//! Bracketed graphs, consistent and associativity graphs, composition schemes,
//! collapsing, and the construction of composition-scheme extensions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::bracketing::{
    associator_chain, chain_with_frozen_segment, AssocMove, BracketError, Bracketing, Direction,
};
use crate::graph::{
    anchored_isomorphism, compose_with_renaming, AnchoredFace, AnchoredGraph, DirectedPath, Graph,
    GraphError, Isomorphism, Side,
};
use crate::ids::{EdgeId, FaceId, NameAllocator, VertexId};
use crate::scheme::PastingSchemePresentation;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum BracketedError {
    #[error(transparent)]
    Anchored(#[from] GraphError),
    #[error(transparent)]
    Bracket(#[from] BracketError),
    #[error("{what} has length {path} but its bracketing has length {shape}")]
    ShapeLength {
        what: String,
        path: usize,
        shape: usize,
    },
    #[error("face {0} has no bracketing")]
    MissingFaceShape(FaceId),
    #[error("graph is not atomic")]
    NotAtomic,
    #[error(
        "{side} of face {face} is not a subtree of the global {side} bracketing (mismatch at {})",
        address_label(address)
    )]
    FaceNotSubtree {
        face: FaceId,
        side: Side,
        address: String,
    },
    #[error("{side} of face {face} is bracketed {found} globally but {expected} on the face")]
    FaceShapeMismatch {
        face: FaceId,
        side: Side,
        expected: Bracketing,
        found: Bracketing,
    },
    #[error("outer bracketings differ: {domain} on the domain, {codomain} on the codomain")]
    OuterMismatch {
        domain: Bracketing,
        codomain: Bracketing,
    },
    #[error("face {0} matches neither associativity form")]
    NotAssociativity(FaceId),
    #[error("bracket mismatch: codomain bracketed {left}, domain bracketed {right}")]
    BracketMismatch { left: Bracketing, right: Bracketing },
    #[error("a composition scheme needs at least one factor")]
    EmptyScheme,
    #[error("factor index {0} is out of range")]
    IndexOutOfRange(usize),
    #[error("factor {0} is not an associativity graph")]
    NotAnAssociativityFactor(usize),
    #[error("associativity subsequence must not contain every factor")]
    NotProper,
    #[error("presentation does not match the graph: {0}")]
    PresentationMismatch(String),
    #[error("chain for interface {interface} ends at {reached}, expected {expected}")]
    ChainMissesTarget {
        interface: usize,
        reached: Bracketing,
        expected: Bracketing,
    },
    #[error("collapsed graph is not the extended graph")]
    CollapseMismatch,
}

fn address_label(a: &str) -> &str {
    if a.is_empty() {
        "root"
    } else {
        a
    }
}

/// A directed path together with a bracketing of its edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketedPath {
    pub path: DirectedPath,
    pub shape: Bracketing,
}

impl fmt::Display for BracketedPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_bracketed(f, &self.shape, &self.path.edges, true)
    }
}

/// Writes `shape` with its dashes replaced by `names`, outer parentheses
/// omitted.
pub fn write_bracketed<T: fmt::Display>(
    f: &mut impl fmt::Write,
    shape: &Bracketing,
    names: &[T],
    outer: bool,
) -> fmt::Result {
    match shape {
        Bracketing::Empty => Ok(()),
        Bracketing::Dash => write!(f, "{}", names[0]),
        Bracketing::Pair(l, r) => {
            if !outer {
                f.write_str("(")?;
            }
            write_bracketed(f, l, &names[..l.len()], false)?;
            f.write_str(" ")?;
            write_bracketed(f, r, &names[l.len()..], false)?;
            if !outer {
                f.write_str(")")?;
            }
            Ok(())
        }
    }
}

pub fn bracketed_text<T: fmt::Display>(shape: &Bracketing, names: &[T]) -> String {
    let mut s = String::new();
    write_bracketed(&mut s, shape, names, true).expect("writing to a string");
    s
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceShapes {
    pub domain: Bracketing,
    pub codomain: Bracketing,
}

impl FaceShapes {
    pub fn side(&self, side: Side) -> &Bracketing {
        match side {
            Side::Domain => &self.domain,
            Side::Codomain => &self.codomain,
        }
    }
}

/// An anchored graph with bracketings on the global and all face (co)domains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketedGraph {
    pub anchored: AnchoredGraph,
    pub shape_dom: Bracketing,
    pub shape_cod: Bracketing,
    pub face_shapes: BTreeMap<FaceId, FaceShapes>,
}

impl BracketedGraph {
    /// Checks that every bracketing has the length of its path.
    pub fn new(
        anchored: AnchoredGraph,
        shape_dom: Bracketing,
        shape_cod: Bracketing,
        face_shapes: BTreeMap<FaceId, FaceShapes>,
    ) -> Result<Self, BracketedError> {
        let g = Self {
            anchored,
            shape_dom,
            shape_cod,
            face_shapes,
        };
        g.check_shape_lengths()?;
        Ok(g)
    }

    pub fn check_shape_lengths(&self) -> Result<(), BracketedError> {
        let check = |what: String, path: usize, shape: &Bracketing| {
            if path == shape.len() {
                Ok(())
            } else {
                Err(BracketedError::ShapeLength {
                    what,
                    path,
                    shape: shape.len(),
                })
            }
        };
        check(
            "global domain".into(),
            self.anchored.exterior.domain.len(),
            &self.shape_dom,
        )?;
        check(
            "global codomain".into(),
            self.anchored.exterior.codomain.len(),
            &self.shape_cod,
        )?;
        for (id, face) in &self.anchored.faces {
            let shapes = self
                .face_shapes
                .get(id)
                .ok_or_else(|| BracketedError::MissingFaceShape(id.clone()))?;
            check(
                format!("domain of face {id}"),
                face.domain.len(),
                &shapes.domain,
            )?;
            check(
                format!("codomain of face {id}"),
                face.codomain.len(),
                &shapes.codomain,
            )?;
        }
        Ok(())
    }

    pub fn shape(&self, side: Side) -> &Bracketing {
        match side {
            Side::Domain => &self.shape_dom,
            Side::Codomain => &self.shape_cod,
        }
    }

    pub fn bracketed(&self, side: Side) -> Result<BracketedPath, BracketedError> {
        let path = self.anchored.exterior_path(side).map_err(|e| {
            GraphError::Invalid(crate::graph::ValidationReport {
                violations: vec![crate::graph::Violation::NotDirectedPath {
                    face: crate::graph::FaceRef::Exterior,
                    side,
                    error: e,
                }],
            })
        })?;
        Ok(BracketedPath {
            path,
            shape: self.shape(side).clone(),
        })
    }

    /// The single interior face of an atomic graph.
    pub fn only_face(&self) -> Option<(&FaceId, &AnchoredFace)> {
        if self.anchored.faces.len() == 1 {
            self.anchored.faces.iter().next()
        } else {
            None
        }
    }
}

/// An atomic bracketed graph whose global bracketings are one outer bracketing
/// with the face's bracketings substituted at the face's position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsistentGraph {
    pub graph: BracketedGraph,
    pub face: FaceId,
    /// Outer bracketing of length `prefix_len + suffix_len + 1`.
    pub outer: Bracketing,
    pub prefix_len: usize,
    pub suffix_len: usize,
}

impl ConsistentGraph {
    pub fn face_data(&self) -> &AnchoredFace {
        &self.graph.anchored.faces[&self.face]
    }

    pub fn face_shapes(&self) -> &FaceShapes {
        &self.graph.face_shapes[&self.face]
    }

    /// The whiskering edges `e_1 … e_m` and `e'_1 … e'_n`.
    pub fn prefix(&self) -> &[EdgeId] {
        &self.graph.anchored.exterior.domain[..self.prefix_len]
    }

    pub fn suffix(&self) -> &[EdgeId] {
        let dom = &self.graph.anchored.exterior.domain;
        &dom[dom.len() - self.suffix_len..]
    }
}

pub fn check_consistent(g: &BracketedGraph) -> Result<ConsistentGraph, BracketedError> {
    g.check_shape_lengths()?;
    if !g.anchored.is_atomic()? {
        return Err(BracketedError::NotAtomic);
    }
    let (id, face) = g.only_face().expect("atomic");
    let shapes = &g.face_shapes[id];
    let mut outers = Vec::new();
    let mut prefix_len = 0;
    let mut suffix_len = 0;
    for side in [Side::Domain, Side::Codomain] {
        let global = g.anchored.exterior.path(side);
        let local = face.path(side);
        let offset =
            crate::graph::find_segment(global, local).expect("containment checked by is_atomic");
        prefix_len = offset;
        suffix_len = global.len() - offset - local.len();
        let shape = g.shape(side);
        let Some(address) = shape.address_of_interval(offset, local.len()) else {
            return Err(BracketedError::FaceNotSubtree {
                face: id.clone(),
                side,
                address: shape.lowest_cover(offset, local.len()).to_string(),
            });
        };
        let found = shape.subtree(&address).expect("valid address");
        if found != shapes.side(side) {
            return Err(BracketedError::FaceShapeMismatch {
                face: id.clone(),
                side,
                expected: shapes.side(side).clone(),
                found: found.clone(),
            });
        }
        outers.push(shape.replace_at(&address, Bracketing::Dash)?);
    }
    let codomain = outers.pop().expect("two sides");
    let domain = outers.pop().expect("two sides");
    if domain != codomain {
        return Err(BracketedError::OuterMismatch { domain, codomain });
    }
    Ok(ConsistentGraph {
        graph: g.clone(),
        face: id.clone(),
        outer: domain,
        prefix_len,
        suffix_len,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AssocForm {
    /// `(E1 E2) E3 ⇒ E1'(E2' E3')`, evaluated as an inverse associator.
    Form1,
    /// `E1 (E2 E3) ⇒ (E1' E2') E3'`, evaluated as an associator.
    Form2,
}

impl AssocForm {
    pub fn direction(self) -> Direction {
        match self {
            AssocForm::Form1 => Direction::LeftToRight,
            AssocForm::Form2 => Direction::RightToLeft,
        }
    }

    pub fn from_direction(d: Direction) -> Self {
        match d {
            Direction::LeftToRight => AssocForm::Form1,
            Direction::RightToLeft => AssocForm::Form2,
        }
    }

    /// `a^-1` or `a`.
    pub fn label(self) -> &'static str {
        match self {
            AssocForm::Form1 => "a^-1",
            AssocForm::Form2 => "a",
        }
    }
}

/// A consistent graph whose face re-associates three segments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssociativityGraph {
    pub consistent: ConsistentGraph,
    pub form: AssocForm,
    /// `E_1, E_2, E_3` on the face domain.
    pub segments: [Vec<EdgeId>; 3],
    /// `E'_1, E'_2, E'_3` on the face codomain.
    pub cod_segments: [Vec<EdgeId>; 3],
    pub segment_shapes: [Bracketing; 3],
}

impl AssociativityGraph {
    /// Pairs each domain edge with its codomain partner.
    pub fn edge_pairs(&self) -> impl Iterator<Item = (&EdgeId, &EdgeId)> {
        self.segments
            .iter()
            .flatten()
            .zip(self.cod_segments.iter().flatten())
    }
}

fn split3(edges: &[EdgeId], shapes: &[Bracketing; 3]) -> [Vec<EdgeId>; 3] {
    let (a, rest) = edges.split_at(shapes[0].len());
    let (b, c) = rest.split_at(shapes[1].len());
    [a.to_vec(), b.to_vec(), c.to_vec()]
}

pub fn check_associativity(c: &ConsistentGraph) -> Result<AssociativityGraph, BracketedError> {
    let shapes = c.face_shapes();
    let fail = || BracketedError::NotAssociativity(c.face.clone());
    let (form, segment_shapes) = match (&shapes.domain, &shapes.codomain) {
        (Bracketing::Pair(l, e3), Bracketing::Pair(e1p, r)) => match (&**l, &**r) {
            (Bracketing::Pair(e1, e2), Bracketing::Pair(e2p, e3p))
                if e1 == e1p && e2 == e2p && e3 == e3p =>
            {
                (
                    AssocForm::Form1,
                    [(**e1).clone(), (**e2).clone(), (**e3).clone()],
                )
            }
            _ => match (&**e3, &**e1p) {
                (Bracketing::Pair(e2, e3), Bracketing::Pair(e1p, e2p))
                    if **l == **e1p && e2 == e2p && **e3 == **r =>
                {
                    (
                        AssocForm::Form2,
                        [(**l).clone(), (**e2).clone(), (**e3).clone()],
                    )
                }
                _ => return Err(fail()),
            },
        },
        _ => return Err(fail()),
    };
    let face = c.face_data();
    Ok(AssociativityGraph {
        consistent: c.clone(),
        form,
        segments: split3(&face.domain, &segment_shapes),
        cod_segments: split3(&face.codomain, &segment_shapes),
        segment_shapes,
    })
}

/// The vertical composite `HG` of bracketed graphs, `g` below `h`.
pub fn vertical_compose_bracketed(
    g: &BracketedGraph,
    h: &BracketedGraph,
) -> Result<BracketedGraph, BracketedError> {
    let (anchored, renaming) = compose_with_renaming(&g.anchored, &h.anchored)?;
    if g.shape_cod != h.shape_dom {
        return Err(BracketedError::BracketMismatch {
            left: g.shape_cod.clone(),
            right: h.shape_dom.clone(),
        });
    }
    let mut face_shapes = g.face_shapes.clone();
    for (id, shapes) in &h.face_shapes {
        face_shapes.insert(renaming.face(id), shapes.clone());
    }
    Ok(BracketedGraph {
        anchored,
        shape_dom: g.shape_dom.clone(),
        shape_cod: h.shape_cod.clone(),
        face_shapes,
    })
}

/// Consistent graphs `H_1 … H_n` with matching bracketed interfaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositionScheme {
    pub factors: Vec<ConsistentGraph>,
    pub composite: BracketedGraph,
}

impl CompositionScheme {
    pub fn from_factors(factors: Vec<ConsistentGraph>) -> Result<Self, BracketedError> {
        let mut iter = factors.iter();
        let first = iter
            .next()
            .ok_or(BracketedError::EmptyScheme)?
            .graph
            .clone();
        let composite =
            iter.try_fold(first, |acc, f| vertical_compose_bracketed(&acc, &f.graph))?;
        Ok(Self { factors, composite })
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }
}

/// Result of collapsing associativity factors: the collapsed graph and the
/// representative each vertex and edge name was identified with.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Collapse {
    pub graph: BracketedGraph,
    pub vertex_rep: BTreeMap<VertexId, VertexId>,
    pub edge_rep: BTreeMap<EdgeId, EdgeId>,
}

/// Collapses the factors at `indices`, each of which must be an associativity
/// graph. Every identified class is represented by its unique member that is
/// not a codomain copy, so the result does not depend on collapse order.
pub fn collapse(scheme: &CompositionScheme, indices: &[usize]) -> Result<Collapse, BracketedError> {
    let mut assoc = Vec::new();
    for &i in indices {
        let factor = scheme
            .factors
            .get(i)
            .ok_or(BracketedError::IndexOutOfRange(i))?;
        let a =
            check_associativity(factor).map_err(|_| BracketedError::NotAnAssociativityFactor(i))?;
        assoc.push(a);
    }
    let g = &scheme.composite;
    // Each codomain copy points at its domain partner.
    let mut edge_up: BTreeMap<EdgeId, EdgeId> = BTreeMap::new();
    let mut vertex_up: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    let mut removed_faces = BTreeSet::new();
    for a in &assoc {
        removed_faces.insert(a.consistent.face.clone());
        let graph = &a.consistent.graph.anchored.graph;
        for (x, y) in a.edge_pairs() {
            edge_up.insert(y.clone(), x.clone());
            let (ix, iy) = (&graph.edges[x], &graph.edges[y]);
            for (vx, vy) in [(&ix.tail, &iy.tail), (&ix.head, &iy.head)] {
                if vx != vy {
                    vertex_up.insert(vy.clone(), vx.clone());
                }
            }
        }
    }
    fn root<T: Ord + Clone>(up: &BTreeMap<T, T>, x: &T) -> T {
        let mut cur = x.clone();
        while let Some(next) = up.get(&cur) {
            cur = next.clone();
        }
        cur
    }
    let vertex_rep: BTreeMap<VertexId, VertexId> = g
        .anchored
        .graph
        .vertices
        .iter()
        .map(|v| (v.clone(), root(&vertex_up, v)))
        .collect();
    let edge_rep: BTreeMap<EdgeId, EdgeId> = g
        .anchored
        .graph
        .edges
        .keys()
        .map(|e| (e.clone(), root(&edge_up, e)))
        .collect();
    let ev = |e: &EdgeId| edge_rep[e].clone();
    let vv = |v: &VertexId| vertex_rep[v].clone();
    let mut graph = Graph::new();
    graph.vertices = vertex_rep.values().cloned().collect();
    for (e, inc) in &g.anchored.graph.edges {
        graph
            .edges
            .entry(ev(e))
            .or_insert_with(|| crate::graph::Incidence {
                tail: vv(&inc.tail),
                head: vv(&inc.head),
            });
    }
    let map_face = |f: &AnchoredFace| AnchoredFace {
        source: vv(&f.source),
        sink: vv(&f.sink),
        domain: f.domain.iter().map(ev).collect(),
        codomain: f.codomain.iter().map(ev).collect(),
    };
    let faces = g
        .anchored
        .faces
        .iter()
        .filter(|(id, _)| !removed_faces.contains(*id))
        .map(|(id, f)| (id.clone(), map_face(f)))
        .collect();
    let face_shapes = g
        .face_shapes
        .iter()
        .filter(|(id, _)| !removed_faces.contains(*id))
        .map(|(id, s)| (id.clone(), s.clone()))
        .collect();
    Ok(Collapse {
        graph: BracketedGraph {
            anchored: AnchoredGraph {
                graph,
                faces,
                exterior: map_face(&g.anchored.exterior),
            },
            shape_dom: g.shape_dom.clone(),
            shape_cod: g.shape_cod.clone(),
            face_shapes,
        },
        vertex_rep,
        edge_rep,
    })
}

/// A composition scheme and the positions of the associativity factors whose
/// collapse yields the extended graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionCertificate {
    pub scheme: CompositionScheme,
    pub assoc_indices: Vec<usize>,
}

/// What a factor of an extension contributes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FactorKind {
    Face(FaceId),
    Associator(AssocForm),
}

impl ExtensionCertificate {
    pub fn kinds(&self) -> Vec<FactorKind> {
        self.scheme
            .factors
            .iter()
            .enumerate()
            .map(|(i, f)| {
                if self.assoc_indices.contains(&i) {
                    let form = check_associativity(f)
                        .map(|a| a.form)
                        .unwrap_or(AssocForm::Form1);
                    FactorKind::Associator(form)
                } else {
                    FactorKind::Face(f.face.clone())
                }
            })
            .collect()
    }

    pub fn associativity_count(&self) -> usize {
        self.assoc_indices.len()
    }
}

/// Structure-preserving renaming between bracketed graphs, if any.
pub fn bracketed_isomorphism(a: &BracketedGraph, b: &BracketedGraph) -> Option<Isomorphism> {
    if a.shape_dom != b.shape_dom || a.shape_cod != b.shape_cod {
        return None;
    }
    let iso = anchored_isomorphism(&a.anchored, &b.anchored)?;
    for (fa, fb) in &iso.faces {
        if a.face_shapes.get(fa) != b.face_shapes.get(fb) {
            return None;
        }
    }
    Some(iso)
}

/// Checks a certificate against `g`, returning the collapse on success.
pub fn check_extension(
    cert: &ExtensionCertificate,
    g: &BracketedGraph,
) -> Result<Collapse, BracketedError> {
    let n = cert.scheme.factors.len();
    if n == 0 {
        return Err(BracketedError::EmptyScheme);
    }
    let indices: BTreeSet<usize> = cert.assoc_indices.iter().copied().collect();
    if indices.len() != cert.assoc_indices.len() {
        return Err(BracketedError::PresentationMismatch(
            "repeated associativity index".into(),
        ));
    }
    if let Some(&i) = indices.iter().find(|&&i| i >= n) {
        return Err(BracketedError::IndexOutOfRange(i));
    }
    if indices.len() == n {
        return Err(BracketedError::NotProper);
    }
    let mut factors = Vec::with_capacity(n);
    for f in &cert.scheme.factors {
        let checked = check_consistent(&f.graph)?;
        if &checked != f {
            return Err(BracketedError::PresentationMismatch(format!(
                "stored consistency data for face {} is wrong",
                f.face
            )));
        }
        factors.push(checked);
    }
    let recomposed = CompositionScheme::from_factors(factors)?;
    if recomposed.composite != cert.scheme.composite {
        return Err(BracketedError::PresentationMismatch(
            "stored composite differs from the factors".into(),
        ));
    }
    let collapsed = collapse(&recomposed, &cert.assoc_indices)?;
    if bracketed_isomorphism(&collapsed.graph, g).is_none() {
        return Err(BracketedError::CollapseMismatch);
    }
    Ok(collapsed)
}

pub fn verify_extension(cert: &ExtensionCertificate, g: &BracketedGraph) -> bool {
    check_extension(cert, g).is_ok()
}

/// A point between consecutive factors of an extension where a chain of
/// associativity graphs is inserted. Interfaces are numbered `0` (before the
/// first face) to `n` (after the last).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interface<'a> {
    pub index: usize,
    pub from: &'a Bracketing,
    pub to: &'a Bracketing,
    /// Leaf intervals `(start, len)` of adjacent face boundaries that may be
    /// treated as a single edge: the codomain of the face before and the
    /// domain of the face after.
    pub frozen: Vec<(usize, usize)>,
}

/// The canonical chain at an interface: the shortest frozen-segment chain
/// among the admissible segments, or the plain canonical chain when no
/// segment is a common subtree.
pub fn canonical_interface_chain(i: &Interface<'_>) -> Result<Vec<AssocMove>, BracketError> {
    let mut best: Option<Vec<AssocMove>> = None;
    for &segment in &i.frozen {
        if let Ok(chain) = chain_with_frozen_segment(i.from, i.to, segment) {
            if best.as_ref().is_none_or(|b| chain.len() < b.len()) {
                best = Some(chain);
            }
        }
    }
    match best {
        Some(chain) => Ok(chain),
        None => associator_chain(i.from, i.to),
    }
}

/// Chooses the moves inserted at an interface.
pub trait ChainPlanner {
    fn plan(&mut self, interface: &Interface<'_>) -> Result<Vec<AssocMove>, BracketError>;
}

/// Inserts [`canonical_interface_chain`] at every interface.
#[derive(Clone, Copy, Debug, Default)]
pub struct CanonicalPlanner;

impl ChainPlanner for CanonicalPlanner {
    fn plan(&mut self, interface: &Interface<'_>) -> Result<Vec<AssocMove>, BracketError> {
        canonical_interface_chain(interface)
    }
}

impl<F> ChainPlanner for F
where
    F: FnMut(&Interface<'_>) -> Result<Vec<AssocMove>, BracketError>,
{
    fn plan(&mut self, interface: &Interface<'_>) -> Result<Vec<AssocMove>, BracketError> {
        self(interface)
    }
}

struct ExtensionBuilder {
    source: VertexId,
    sink: VertexId,
    names: NameAllocator,
    face_names: NameAllocator,
    frontier: DirectedPath,
    shape: Bracketing,
    incidence: BTreeMap<EdgeId, crate::graph::Incidence>,
    factors: Vec<ConsistentGraph>,
    assoc_indices: Vec<usize>,
}

impl ExtensionBuilder {
    fn factor_graph(
        &self,
        face_id: FaceId,
        face: AnchoredFace,
        shapes: FaceShapes,
        next: &DirectedPath,
        next_shape: Bracketing,
    ) -> BracketedGraph {
        let mut graph = Graph::new();
        for v in self.frontier.vertices.iter().chain(&next.vertices) {
            graph.vertices.insert(v.clone());
        }
        for e in self.frontier.edges.iter().chain(&next.edges) {
            graph.edges.insert(e.clone(), self.incidence[e].clone());
        }
        BracketedGraph {
            anchored: AnchoredGraph {
                graph,
                faces: BTreeMap::from([(face_id.clone(), face)]),
                exterior: AnchoredFace {
                    source: self.source.clone(),
                    sink: self.sink.clone(),
                    domain: self.frontier.edges.clone(),
                    codomain: next.edges.clone(),
                },
            },
            shape_dom: self.shape.clone(),
            shape_cod: next_shape,
            face_shapes: BTreeMap::from([(face_id, shapes)]),
        }
    }

    fn push(
        &mut self,
        graph: BracketedGraph,
        next: DirectedPath,
        assoc: bool,
    ) -> Result<(), BracketedError> {
        let consistent = check_consistent(&graph)?;
        if assoc {
            check_associativity(&consistent)?;
            self.assoc_indices.push(self.factors.len());
        }
        self.shape = graph.shape_cod.clone();
        self.factors.push(consistent);
        self.frontier = next;
        Ok(())
    }

    fn insert_move(&mut self, m: &AssocMove) -> Result<(), BracketedError> {
        let next_shape = self.shape.apply_move(m)?;
        let (start, len) = self.shape.leaf_span(&m.position).expect("move applied");
        let segment = self.frontier.segment(start, len);
        let mut copy = DirectedPath::trivial(segment.source().clone());
        for (k, e) in segment.edges.iter().enumerate() {
            let head = if k + 1 == len {
                segment.sink().clone()
            } else {
                VertexId::from(self.names.fresh(segment.vertices[k + 1].as_str()))
            };
            let copy_edge = EdgeId::from(self.names.fresh(e.as_str()));
            self.incidence.insert(
                copy_edge.clone(),
                crate::graph::Incidence {
                    tail: copy.sink().clone(),
                    head: head.clone(),
                },
            );
            copy.edges.push(copy_edge);
            copy.vertices.push(head);
        }
        let next = self.frontier.splice(start, len, &copy);
        let face_id = FaceId::from(self.face_names.fresh("assoc"));
        let face = AnchoredFace {
            source: segment.source().clone(),
            sink: segment.sink().clone(),
            domain: segment.edges.clone(),
            codomain: copy.edges.clone(),
        };
        let shapes = FaceShapes {
            domain: self.shape.subtree(&m.position).expect("valid").clone(),
            codomain: next_shape.subtree(&m.position).expect("valid").clone(),
        };
        let graph = self.factor_graph(face_id, face, shapes, &next, next_shape);
        self.push(graph, next, true)
    }

    fn insert_chain(
        &mut self,
        planner: &mut dyn ChainPlanner,
        interface: usize,
        target: &Bracketing,
        frozen: Vec<(usize, usize)>,
    ) -> Result<(), BracketedError> {
        let moves = planner.plan(&Interface {
            index: interface,
            from: &self.shape,
            to: target,
            frozen,
        })?;
        for m in &moves {
            self.insert_move(m)?;
        }
        if &self.shape != target {
            return Err(BracketedError::ChainMissesTarget {
                interface,
                reached: self.shape.clone(),
                expected: target.clone(),
            });
        }
        Ok(())
    }
}

fn check_presentation(
    g: &BracketedGraph,
    p: &PastingSchemePresentation,
) -> Result<(), BracketedError> {
    let mismatch = |s: String| Err(BracketedError::PresentationMismatch(s));
    let a = &g.anchored;
    if p.faces.len() != a.faces.len() || p.frontiers.len() != p.faces.len() + 1 {
        return mismatch(format!(
            "{} factors for {} faces",
            p.faces.len(),
            a.faces.len()
        ));
    }
    if p.frontiers[0].edges != a.exterior.domain
        || p.frontiers[p.faces.len()].edges != a.exterior.codomain
    {
        return mismatch("frontiers do not start at the domain and end at the codomain".into());
    }
    let distinct: BTreeSet<_> = p.faces.iter().collect();
    if distinct.len() != p.faces.len() {
        return mismatch("a face is used twice".into());
    }
    for (i, id) in p.faces.iter().enumerate() {
        let Some(face) = a.faces.get(id) else {
            return mismatch(format!("unknown face {id}"));
        };
        let Some(offset) = p.frontiers[i].find_segment(&face.domain) else {
            return mismatch(format!("domain of face {id} is not on its frontier"));
        };
        let cod = a
            .graph
            .walk(&face.source, &face.codomain)
            .map_err(|e| BracketedError::PresentationMismatch(e.to_string()))?;
        if p.frontiers[i].splice(offset, face.domain.len(), &cod) != p.frontiers[i + 1] {
            return mismatch(format!("frontier after face {id} is wrong"));
        }
    }
    Ok(())
}

/// Factor `i` of a presentation bracketed as `((P)(dom F))(P')` with `P`,
/// `P'` left-normalized and the face bracketed as in `g`.
pub fn whiskered_factor(
    g: &BracketedGraph,
    p: &PastingSchemePresentation,
    i: usize,
) -> Result<ConsistentGraph, BracketedError> {
    check_presentation(g, p)?;
    let id = p.faces.get(i).ok_or(BracketedError::IndexOutOfRange(i))?;
    let face = &g.anchored.faces[id];
    let shapes = g.face_shapes[id].clone();
    let offset = p.offset(i);
    let suffix = p.frontiers[i].len() - offset - face.domain.len();
    let whisker = |inner: &Bracketing| {
        Bracketing::join(
            Bracketing::join(Bracketing::left_normalized_or_empty(offset), inner.clone()),
            Bracketing::left_normalized_or_empty(suffix),
        )
    };
    let graph = BracketedGraph {
        anchored: p.factors[i].clone(),
        shape_dom: whisker(&shapes.domain),
        shape_cod: whisker(&shapes.codomain),
        face_shapes: BTreeMap::from([(id.clone(), shapes)]),
    };
    check_consistent(&graph)
}

/// The extension built from a presentation: each face is whiskered as
/// `((P)(dom F))(P')` with left-normalized `P`, `P'`, and the canonical
/// associator chain is inserted wherever consecutive bracketings differ.
pub fn extend_to_composition_scheme(
    g: &BracketedGraph,
    p: &PastingSchemePresentation,
) -> Result<ExtensionCertificate, BracketedError> {
    extend_with_planner(g, p, &mut CanonicalPlanner)
}

/// As [`extend_to_composition_scheme`], with the inserted moves chosen by
/// `planner`.
pub fn extend_with_planner(
    g: &BracketedGraph,
    p: &PastingSchemePresentation,
    planner: &mut dyn ChainPlanner,
) -> Result<ExtensionCertificate, BracketedError> {
    g.check_shape_lengths()?;
    g.anchored.ensure_valid()?;
    check_presentation(g, p)?;
    let mut names = NameAllocator::new();
    for n in g.anchored.names() {
        names.reserve(n);
    }
    let mut face_names = NameAllocator::new();
    for f in g.anchored.faces.keys() {
        face_names.reserve(f.as_str());
    }
    let mut b = ExtensionBuilder {
        source: g.anchored.exterior.source.clone(),
        sink: g.anchored.exterior.sink.clone(),
        names,
        face_names,
        frontier: p.frontiers[0].clone(),
        shape: g.shape_dom.clone(),
        incidence: g.anchored.graph.edges.clone(),
        factors: Vec::new(),
        assoc_indices: Vec::new(),
    };
    let mut previous: Option<(usize, usize)> = None;
    for (i, id) in p.faces.iter().enumerate() {
        let face = &g.anchored.faces[id];
        let shapes = g.face_shapes[id].clone();
        let offset = p.offset(i);
        let d = face.domain.len();
        let suffix = b.frontier.len() - offset - d;
        let whisker = |inner: &Bracketing| {
            Bracketing::join(
                Bracketing::join(Bracketing::left_normalized_or_empty(offset), inner.clone()),
                Bracketing::left_normalized_or_empty(suffix),
            )
        };
        let mut frozen = previous.take().into_iter().collect::<Vec<_>>();
        frozen.push((offset, d));
        b.insert_chain(planner, i, &whisker(&shapes.domain), frozen)?;
        // The face's domain may now be carried by copies of the original edges.
        let segment = b.frontier.segment(offset, d);
        let cod = g
            .anchored
            .graph
            .walk(&face.source, &face.codomain)
            .expect("validated");
        let mut cod_in_h = cod.clone();
        cod_in_h.vertices[0] = segment.source().clone();
        *cod_in_h.vertices.last_mut().expect("nonempty") = segment.sink().clone();
        for e in &cod.edges {
            let inc = &g.anchored.graph.edges[e];
            let map = |v: &VertexId| {
                if v == &face.source {
                    segment.source().clone()
                } else if v == &face.sink {
                    segment.sink().clone()
                } else {
                    v.clone()
                }
            };
            b.incidence.insert(
                e.clone(),
                crate::graph::Incidence {
                    tail: map(&inc.tail),
                    head: map(&inc.head),
                },
            );
        }
        let next = b.frontier.splice(offset, d, &cod_in_h);
        let h_face = AnchoredFace {
            source: segment.source().clone(),
            sink: segment.sink().clone(),
            domain: segment.edges.clone(),
            codomain: face.codomain.clone(),
        };
        let next_shape = whisker(&shapes.codomain);
        let graph = b.factor_graph(id.clone(), h_face, shapes, &next, next_shape);
        b.push(graph, next, false)?;
        previous = Some((offset, face.codomain.len()));
    }
    b.insert_chain(
        planner,
        p.faces.len(),
        &g.shape_cod,
        previous.into_iter().collect(),
    )?;
    let scheme = CompositionScheme::from_factors(b.factors)?;
    Ok(ExtensionCertificate {
        scheme,
        assoc_indices: b.assoc_indices,
    })
}

/// A path `v0 -e1-> v1 … -en-> vn` and its incidence, for building
/// associativity-only schemes.
pub fn path_skeleton(n: usize) -> (DirectedPath, BTreeMap<EdgeId, crate::graph::Incidence>) {
    let vertices: Vec<VertexId> = (0..=n).map(|i| VertexId::new(format!("v{i}"))).collect();
    let edges: Vec<EdgeId> = (1..=n).map(|i| EdgeId::new(format!("e{i}"))).collect();
    let incidence = edges
        .iter()
        .enumerate()
        .map(|(i, e)| {
            (
                e.clone(),
                crate::graph::Incidence {
                    tail: vertices[i].clone(),
                    head: vertices[i + 1].clone(),
                },
            )
        })
        .collect();
    (DirectedPath { vertices, edges }, incidence)
}

/// The scheme of associativity graphs realizing `moves` on the path, starting
/// from the bracketing `from`. `None` when there are no moves.
pub fn chain_scheme(
    path: &DirectedPath,
    incidence: &BTreeMap<EdgeId, crate::graph::Incidence>,
    from: &Bracketing,
    moves: &[AssocMove],
) -> Result<Option<CompositionScheme>, BracketedError> {
    if from.len() != path.len() {
        return Err(BracketedError::ShapeLength {
            what: "path".into(),
            path: path.len(),
            shape: from.len(),
        });
    }
    if moves.is_empty() {
        return Ok(None);
    }
    let mut names = NameAllocator::new();
    for v in &path.vertices {
        names.reserve(v.as_str());
    }
    for e in &path.edges {
        names.reserve(e.as_str());
    }
    let mut b = ExtensionBuilder {
        source: path.source().clone(),
        sink: path.sink().clone(),
        names,
        face_names: NameAllocator::new(),
        frontier: path.clone(),
        shape: from.clone(),
        incidence: incidence.clone(),
        factors: Vec::new(),
        assoc_indices: Vec::new(),
    };
    for m in moves {
        b.insert_move(m)?;
    }
    CompositionScheme::from_factors(b.factors).map(Some)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{running_example, running_example_graph};
    use crate::scheme::find_presentation;

    fn b(s: &str) -> Bracketing {
        s.parse().unwrap()
    }

    #[test]
    fn running_example_extension_has_five_factors() {
        let g = running_example();
        let p = find_presentation(&g.anchored).unwrap();
        let cert = extend_to_composition_scheme(&g, &p).unwrap();
        assert_eq!(
            cert.kinds(),
            vec![
                FactorKind::Face("theta1".into()),
                FactorKind::Associator(AssocForm::Form1),
                FactorKind::Face("theta2".into()),
                FactorKind::Associator(AssocForm::Form2),
                FactorKind::Face("theta3".into()),
            ]
        );
        assert_eq!(cert.assoc_indices, vec![1, 3]);
        assert!(verify_extension(&cert, &g));
        let mut broken = cert.clone();
        broken.assoc_indices.pop();
        assert!(!verify_extension(&broken, &g));
    }

    #[test]
    fn mismatched_interface_in_running_example() {
        let g = running_example();
        let p = find_presentation(&running_example_graph()).unwrap();
        let first = whiskered_factor(&g, &p, 0).unwrap();
        let second = whiskered_factor(&g, &p, 1).unwrap();
        assert_eq!(first.graph.shape_cod, b("(--)-"));
        assert_eq!(second.graph.shape_dom, b("-(--)"));
        let err = vertical_compose_bracketed(&first.graph, &second.graph).unwrap_err();
        assert_eq!(
            err,
            BracketedError::BracketMismatch {
                left: b("(--)-"),
                right: b("-(--)")
            }
        );
    }

    #[test]
    fn associativity_forms() {
        let g = running_example();
        let p = find_presentation(&g.anchored).unwrap();
        let cert = extend_to_composition_scheme(&g, &p).unwrap();
        let a1 = check_associativity(&cert.scheme.factors[1]).unwrap();
        assert_eq!(a1.form, AssocForm::Form1);
        let names: Vec<Vec<&str>> = a1
            .segments
            .iter()
            .map(|s| s.iter().map(|e| e.as_str()).collect())
            .collect();
        assert_eq!(names, vec![vec!["h1"], vec!["h2"], vec!["f2"]]);
        let a2 = check_associativity(&cert.scheme.factors[3]).unwrap();
        assert_eq!(a2.form, AssocForm::Form2);
        assert!(check_associativity(&cert.scheme.factors[0]).is_err());
    }

    #[test]
    fn collapse_order_does_not_matter() {
        let g = running_example();
        let p = find_presentation(&g.anchored).unwrap();
        let cert = extend_to_composition_scheme(&g, &p).unwrap();
        let x = collapse(&cert.scheme, &[1, 3]).unwrap();
        let y = collapse(&cert.scheme, &[3, 1]).unwrap();
        assert_eq!(x, y);
        assert!(bracketed_isomorphism(&x.graph, &g).is_some());
    }

    #[test]
    fn collapsed_neighbours_do_not_compose() {
        let g = running_example();
        let p = find_presentation(&g.anchored).unwrap();
        let cert = extend_to_composition_scheme(&g, &p).unwrap();
        let partial = collapse(&cert.scheme, &[1]).unwrap();
        assert_eq!(partial.graph.anchored.faces.len(), 4);
        let (g1, g2) = (&cert.scheme.factors[0].graph, &cert.scheme.factors[2].graph);
        assert!(vertical_compose_bracketed(g1, g2).is_err());
    }
}
