//! Connected plane graphs described combinatorially by anchored faces.
//!
//! No embedding into the plane is stored. A face is given by its source,
//! sink, domain and codomain; its boundary walk is `dom · cod*` for interior
//! faces and `cod · dom*` for the exterior face. Planarity is replaced by two
//! checks: every edge is traversed exactly once in each direction by the
//! boundary walks, and Euler's relation `V - E + F = 2` holds.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::ids::{EdgeId, FaceId, NameAllocator, VertexId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Incidence {
    pub tail: VertexId,
    pub head: VertexId,
}

/// Vertices, edges and the incidence function.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    pub vertices: BTreeSet<VertexId>,
    pub edges: BTreeMap<EdgeId, Incidence>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, v: impl Into<VertexId>) {
        self.vertices.insert(v.into());
    }

    pub fn add_edge(
        &mut self,
        e: impl Into<EdgeId>,
        tail: impl Into<VertexId>,
        head: impl Into<VertexId>,
    ) {
        self.edges.insert(
            e.into(),
            Incidence {
                tail: tail.into(),
                head: head.into(),
            },
        );
    }

    pub fn incidence(&self, e: &EdgeId) -> Option<&Incidence> {
        self.edges.get(e)
    }

    /// Follows `edges` from `start` tail to head and returns the directed path,
    /// or the first reason it is not one.
    pub fn walk(&self, start: &VertexId, edges: &[EdgeId]) -> Result<DirectedPath, PathError> {
        let mut vertices = vec![start.clone()];
        let mut seen = BTreeSet::from([start.clone()]);
        for (position, e) in edges.iter().enumerate() {
            let inc = self
                .edges
                .get(e)
                .ok_or_else(|| PathError::UnknownEdge(e.clone()))?;
            let current = vertices.last().expect("path has a start vertex");
            if &inc.tail != current {
                return Err(PathError::WrongTail {
                    position,
                    edge: e.clone(),
                    expected: current.clone(),
                    found: inc.tail.clone(),
                });
            }
            if !seen.insert(inc.head.clone()) {
                return Err(PathError::RepeatedVertex(inc.head.clone()));
            }
            vertices.push(inc.head.clone());
        }
        Ok(DirectedPath {
            vertices,
            edges: edges.to_vec(),
        })
    }

    fn is_connected(&self) -> bool {
        let Some(first) = self.vertices.iter().next() else {
            return true;
        };
        let mut adjacency: BTreeMap<&VertexId, Vec<&VertexId>> = BTreeMap::new();
        for inc in self.edges.values() {
            adjacency.entry(&inc.tail).or_default().push(&inc.head);
            adjacency.entry(&inc.head).or_default().push(&inc.tail);
        }
        let mut seen = BTreeSet::from([first]);
        let mut queue = VecDeque::from([first]);
        while let Some(v) = queue.pop_front() {
            for w in adjacency.get(v).into_iter().flatten() {
                if seen.insert(*w) {
                    queue.push_back(*w);
                }
            }
        }
        seen.len() == self.vertices.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("edge {0} is not in the graph")]
    UnknownEdge(EdgeId),
    #[error("edge {edge} at position {position} has tail {found}, expected {expected}")]
    WrongTail {
        position: usize,
        edge: EdgeId,
        expected: VertexId,
        found: VertexId,
    },
    #[error("vertex {0} is visited twice")]
    RepeatedVertex(VertexId),
    #[error("path ends at {found}, expected {expected}")]
    WrongEnd { expected: VertexId, found: VertexId },
}

/// A directed path `v0 e1 v1 ... en vn` with distinct vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectedPath {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

impl DirectedPath {
    pub fn trivial(v: VertexId) -> Self {
        Self {
            vertices: vec![v],
            edges: Vec::new(),
        }
    }

    pub fn source(&self) -> &VertexId {
        &self.vertices[0]
    }

    pub fn sink(&self) -> &VertexId {
        self.vertices.last().expect("nonempty vertex list")
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Offset at which `segment` occurs contiguously in this path.
    pub fn find_segment(&self, segment: &[EdgeId]) -> Option<usize> {
        find_segment(&self.edges, segment)
    }

    /// Replaces the `len` edges starting at `offset` by `replacement`, which
    /// must run between the same two vertices.
    pub fn splice(&self, offset: usize, len: usize, replacement: &DirectedPath) -> DirectedPath {
        debug_assert_eq!(&self.vertices[offset], replacement.source());
        debug_assert_eq!(&self.vertices[offset + len], replacement.sink());
        let mut vertices = self.vertices[..offset].to_vec();
        vertices.extend(replacement.vertices.iter().cloned());
        vertices.extend(self.vertices[offset + len + 1..].iter().cloned());
        let mut edges = self.edges[..offset].to_vec();
        edges.extend(replacement.edges.iter().cloned());
        edges.extend(self.edges[offset + len..].iter().cloned());
        DirectedPath { vertices, edges }
    }

    pub fn has_distinct_vertices(&self) -> bool {
        let set: BTreeSet<_> = self.vertices.iter().collect();
        set.len() == self.vertices.len()
    }

    /// The sub-path covering edges `offset .. offset + len`.
    pub fn segment(&self, offset: usize, len: usize) -> DirectedPath {
        DirectedPath {
            vertices: self.vertices[offset..=offset + len].to_vec(),
            edges: self.edges[offset..offset + len].to_vec(),
        }
    }
}

pub(crate) fn find_segment(haystack: &[EdgeId], segment: &[EdgeId]) -> Option<usize> {
    if segment.is_empty() || segment.len() > haystack.len() {
        return None;
    }
    haystack.windows(segment.len()).position(|w| w == segment)
}

/// Source, sink, domain and codomain of a face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnchoredFace {
    pub source: VertexId,
    pub sink: VertexId,
    pub domain: Vec<EdgeId>,
    pub codomain: Vec<EdgeId>,
}

impl AnchoredFace {
    pub fn new(
        source: impl Into<VertexId>,
        sink: impl Into<VertexId>,
        domain: impl IntoIterator<Item = impl Into<EdgeId>>,
        codomain: impl IntoIterator<Item = impl Into<EdgeId>>,
    ) -> Self {
        Self {
            source: source.into(),
            sink: sink.into(),
            domain: domain.into_iter().map(Into::into).collect(),
            codomain: codomain.into_iter().map(Into::into).collect(),
        }
    }

    pub fn path(&self, side: Side) -> &[EdgeId] {
        match side {
            Side::Domain => &self.domain,
            Side::Codomain => &self.codomain,
        }
    }
}

/// A graph whose interior faces and exterior face are all anchored.
///
/// Values are plain data; [`validate_anchored`] decides whether they satisfy
/// the anchoring invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnchoredGraph {
    pub graph: Graph,
    pub faces: BTreeMap<FaceId, AnchoredFace>,
    pub exterior: AnchoredFace,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Domain,
    Codomain,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Domain => f.write_str("domain"),
            Side::Codomain => f.write_str("codomain"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum FaceRef {
    Interior(FaceId),
    Exterior,
}

impl fmt::Display for FaceRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FaceRef::Interior(id) => write!(f, "face {id}"),
            FaceRef::Exterior => f.write_str("the exterior face"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    TooFewVertices(usize),
    TooFewEdges(usize),
    IdentifierClash(String),
    UnknownEndpoint {
        edge: EdgeId,
        vertex: VertexId,
    },
    LoopEdge(EdgeId),
    Disconnected,
    SourceIsSink(FaceRef),
    NotDirectedPath {
        face: FaceRef,
        side: Side,
        error: PathError,
    },
    SharedBoundaryEdge {
        face: FaceId,
        edge: EdgeId,
    },
    BoundaryCoverage {
        edge: EdgeId,
        forward: usize,
        backward: usize,
    },
    Euler {
        vertices: usize,
        edges: usize,
        faces: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TooFewVertices(n) => write!(f, "graph has {n} vertices, at least 2 required"),
            Violation::TooFewEdges(n) => write!(f, "graph has {n} edges, at least 2 required"),
            Violation::IdentifierClash(name) => write!(f, "{name} names both a vertex and an edge"),
            Violation::UnknownEndpoint { edge, vertex } => {
                write!(f, "edge {edge} has endpoint {vertex} which is not a vertex")
            }
            Violation::LoopEdge(e) => write!(f, "edge {e} is a loop"),
            Violation::Disconnected => f.write_str("graph is not connected"),
            Violation::SourceIsSink(face) => write!(f, "{face} has equal source and sink"),
            Violation::NotDirectedPath { face, side, error } => {
                write!(f, "{side} of {face} is not a directed path: {error}")
            }
            Violation::SharedBoundaryEdge { face, edge } => {
                write!(f, "edge {edge} lies on both domain and codomain of face {face}")
            }
            Violation::BoundaryCoverage {
                edge,
                forward,
                backward,
            } => write!(
                f,
                "edge {edge} is traversed forward {forward} and backward {backward} times by face boundaries (expected once each)"
            ),
            Violation::Euler {
                vertices,
                edges,
                faces,
            } => write!(
                f,
                "Euler relation fails: {vertices} - {edges} + {faces} = {}",
                *vertices as i64 - *edges as i64 + *faces as i64
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("invalid anchored graph: {0}")]
    Invalid(ValidationReport),
    #[error(
        "source/sink mismatch: ({left_source}, {left_sink}) vs ({right_source}, {right_sink})"
    )]
    EndpointMismatch {
        left_source: VertexId,
        left_sink: VertexId,
        right_source: VertexId,
        right_sink: VertexId,
    },
    #[error(
        "interface mismatch at position {position}: codomain has {left:?}, domain has {right:?}"
    )]
    InterfaceMismatch {
        position: usize,
        left: Option<EdgeId>,
        right: Option<EdgeId>,
    },
    #[error("{side} of face {face} is not contained in the {side} of the graph")]
    Containment { face: FaceId, side: Side },
}

/// Checks every anchoring invariant and lists all violations found.
pub fn validate_anchored(g: &AnchoredGraph) -> ValidationReport {
    let mut violations = Vec::new();
    let graph = &g.graph;
    if graph.vertices.len() < 2 {
        violations.push(Violation::TooFewVertices(graph.vertices.len()));
    }
    if graph.edges.len() < 2 {
        violations.push(Violation::TooFewEdges(graph.edges.len()));
    }
    let mut endpoints_ok = true;
    for (e, inc) in &graph.edges {
        if graph.vertices.iter().any(|v| v.as_str() == e.as_str()) {
            violations.push(Violation::IdentifierClash(e.to_string()));
        }
        for v in [&inc.tail, &inc.head] {
            if !graph.vertices.contains(v) {
                endpoints_ok = false;
                violations.push(Violation::UnknownEndpoint {
                    edge: e.clone(),
                    vertex: v.clone(),
                });
            }
        }
        if inc.tail == inc.head {
            violations.push(Violation::LoopEdge(e.clone()));
        }
    }
    if endpoints_ok && !graph.is_connected() {
        violations.push(Violation::Disconnected);
    }

    let faces = g
        .faces
        .iter()
        .map(|(id, face)| (FaceRef::Interior(id.clone()), face))
        .chain(std::iter::once((FaceRef::Exterior, &g.exterior)));
    for (face_ref, face) in faces {
        if face.source == face.sink {
            violations.push(Violation::SourceIsSink(face_ref.clone()));
        }
        for side in [Side::Domain, Side::Codomain] {
            let result = graph.walk(&face.source, face.path(side)).and_then(|p| {
                if p.sink() == &face.sink {
                    Ok(p)
                } else {
                    Err(PathError::WrongEnd {
                        expected: face.sink.clone(),
                        found: p.sink().clone(),
                    })
                }
            });
            if let Err(error) = result {
                violations.push(Violation::NotDirectedPath {
                    face: face_ref.clone(),
                    side,
                    error,
                });
            }
        }
        if let FaceRef::Interior(id) = &face_ref {
            for e in &face.domain {
                if face.codomain.contains(e) {
                    violations.push(Violation::SharedBoundaryEdge {
                        face: id.clone(),
                        edge: e.clone(),
                    });
                }
            }
        }
    }

    // Boundary walks: interior dom and exterior cod run forward,
    // interior cod and exterior dom run backward.
    let mut forward: BTreeMap<&EdgeId, usize> = BTreeMap::new();
    let mut backward: BTreeMap<&EdgeId, usize> = BTreeMap::new();
    for face in g.faces.values() {
        for e in &face.domain {
            *forward.entry(e).or_default() += 1;
        }
        for e in &face.codomain {
            *backward.entry(e).or_default() += 1;
        }
    }
    for e in &g.exterior.codomain {
        *forward.entry(e).or_default() += 1;
    }
    for e in &g.exterior.domain {
        *backward.entry(e).or_default() += 1;
    }
    for e in graph.edges.keys() {
        let fw = forward.get(e).copied().unwrap_or(0);
        let bw = backward.get(e).copied().unwrap_or(0);
        if fw != 1 || bw != 1 {
            violations.push(Violation::BoundaryCoverage {
                edge: e.clone(),
                forward: fw,
                backward: bw,
            });
        }
    }

    let (v, e, f) = (graph.vertices.len(), graph.edges.len(), g.faces.len() + 1);
    if v as i64 - e as i64 + f as i64 != 2 {
        violations.push(Violation::Euler {
            vertices: v,
            edges: e,
            faces: f,
        });
    }
    ValidationReport { violations }
}

/// Maps the second operand's names to the names they carry in a composite.
#[derive(Clone, Debug, Default)]
pub(crate) struct Renaming {
    pub vertices: BTreeMap<VertexId, VertexId>,
    pub edges: BTreeMap<EdgeId, EdgeId>,
    pub faces: BTreeMap<FaceId, FaceId>,
}

impl Renaming {
    pub fn vertex(&self, v: &VertexId) -> VertexId {
        self.vertices.get(v).cloned().unwrap_or_else(|| v.clone())
    }

    pub fn edge(&self, e: &EdgeId) -> EdgeId {
        self.edges.get(e).cloned().unwrap_or_else(|| e.clone())
    }

    pub fn face(&self, f: &FaceId) -> FaceId {
        self.faces.get(f).cloned().unwrap_or_else(|| f.clone())
    }

    pub fn anchored_face(&self, face: &AnchoredFace) -> AnchoredFace {
        AnchoredFace {
            source: self.vertex(&face.source),
            sink: self.vertex(&face.sink),
            domain: face.domain.iter().map(|e| self.edge(e)).collect(),
            codomain: face.codomain.iter().map(|e| self.edge(e)).collect(),
        }
    }
}

impl AnchoredGraph {
    pub fn validate(&self) -> ValidationReport {
        validate_anchored(self)
    }

    pub fn interior_count(&self) -> usize {
        self.faces.len()
    }

    pub fn source(&self) -> &VertexId {
        &self.exterior.source
    }

    pub fn sink(&self) -> &VertexId {
        &self.exterior.sink
    }

    pub fn ensure_valid(&self) -> Result<(), GraphError> {
        let report = self.validate();
        if report.is_ok() {
            Ok(())
        } else {
            Err(GraphError::Invalid(report))
        }
    }

    /// Walks a side of the exterior face. Only meaningful on valid graphs.
    pub fn exterior_path(&self, side: Side) -> Result<DirectedPath, PathError> {
        self.graph
            .walk(&self.exterior.source, self.exterior.path(side))
    }

    pub fn face_path(&self, face: &FaceId, side: Side) -> Option<Result<DirectedPath, PathError>> {
        let f = self.faces.get(face)?;
        Some(self.graph.walk(&f.source, f.path(side)))
    }

    /// True iff there is exactly one interior face. Also checks that the
    /// face's domain lies on the global domain and its codomain on the global
    /// codomain.
    pub fn is_atomic(&self) -> Result<bool, GraphError> {
        self.ensure_valid()?;
        if self.faces.len() != 1 {
            return Ok(false);
        }
        let (id, face) = self.faces.iter().next().expect("one face");
        for side in [Side::Domain, Side::Codomain] {
            if find_segment(self.exterior.path(side), face.path(side)).is_none() {
                return Err(GraphError::Containment {
                    face: id.clone(),
                    side,
                });
            }
        }
        Ok(true)
    }

    /// The vertical composite `HG` with `self = G` below `h = H`.
    pub fn vertical_compose(&self, h: &AnchoredGraph) -> Result<AnchoredGraph, GraphError> {
        compose_with_renaming(self, h).map(|(g, _)| g)
    }

    /// Every vertex and edge name in use.
    pub(crate) fn names(&self) -> impl Iterator<Item = &str> {
        self.graph
            .vertices
            .iter()
            .map(|v| v.as_str())
            .chain(self.graph.edges.keys().map(|e| e.as_str()))
    }
}

pub(crate) fn compose_with_renaming(
    g: &AnchoredGraph,
    h: &AnchoredGraph,
) -> Result<(AnchoredGraph, Renaming), GraphError> {
    if g.exterior.source != h.exterior.source || g.exterior.sink != h.exterior.sink {
        return Err(GraphError::EndpointMismatch {
            left_source: g.exterior.source.clone(),
            left_sink: g.exterior.sink.clone(),
            right_source: h.exterior.source.clone(),
            right_sink: h.exterior.sink.clone(),
        });
    }
    let shared = &g.exterior.codomain;
    let incoming = &h.exterior.domain;
    for position in 0..shared.len().max(incoming.len()) {
        let left = shared.get(position);
        let right = incoming.get(position);
        let same = match (left, right) {
            (Some(a), Some(b)) => a == b && g.graph.incidence(a) == h.graph.incidence(b),
            _ => false,
        };
        if !same {
            return Err(GraphError::InterfaceMismatch {
                position,
                left: left.cloned(),
                right: right.cloned(),
            });
        }
    }

    let shared_edges: BTreeSet<&EdgeId> = shared.iter().collect();
    let mut shared_vertices: BTreeSet<&VertexId> = BTreeSet::from([&g.exterior.source]);
    for e in shared {
        let inc = g.graph.incidence(e).expect("checked above");
        shared_vertices.insert(&inc.tail);
        shared_vertices.insert(&inc.head);
    }

    let mut names = NameAllocator::new();
    for n in g.names().chain(h.names()) {
        names.reserve(n);
    }
    let g_names: BTreeSet<&str> = g.names().collect();
    let mut renaming = Renaming::default();
    for v in &h.graph.vertices {
        if !shared_vertices.contains(v) && g_names.contains(v.as_str()) {
            renaming
                .vertices
                .insert(v.clone(), VertexId::from(names.fresh(v.as_str())));
        }
    }
    for e in h.graph.edges.keys() {
        if !shared_edges.contains(e) && g_names.contains(e.as_str()) {
            renaming
                .edges
                .insert(e.clone(), EdgeId::from(names.fresh(e.as_str())));
        }
    }
    let mut face_names = NameAllocator::new();
    for f in g.faces.keys().chain(h.faces.keys()) {
        face_names.reserve(f.as_str());
    }
    for f in h.faces.keys() {
        if g.faces.contains_key(f) {
            renaming
                .faces
                .insert(f.clone(), FaceId::from(face_names.fresh(f.as_str())));
        }
    }

    let mut graph = g.graph.clone();
    for v in &h.graph.vertices {
        graph.vertices.insert(renaming.vertex(v));
    }
    for (e, inc) in &h.graph.edges {
        graph
            .edges
            .entry(renaming.edge(e))
            .or_insert_with(|| Incidence {
                tail: renaming.vertex(&inc.tail),
                head: renaming.vertex(&inc.head),
            });
    }
    let mut faces = g.faces.clone();
    for (id, face) in &h.faces {
        faces.insert(renaming.face(id), renaming.anchored_face(face));
    }
    let exterior = AnchoredFace {
        source: g.exterior.source.clone(),
        sink: g.exterior.sink.clone(),
        domain: g.exterior.domain.clone(),
        codomain: h
            .exterior
            .codomain
            .iter()
            .map(|e| renaming.edge(e))
            .collect(),
    };
    Ok((
        AnchoredGraph {
            graph,
            faces,
            exterior,
        },
        renaming,
    ))
}

/// A name bijection between two anchored graphs preserving all structure.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Isomorphism {
    pub vertices: BTreeMap<VertexId, VertexId>,
    pub edges: BTreeMap<EdgeId, EdgeId>,
    pub faces: BTreeMap<FaceId, FaceId>,
}

struct IsoBuilder<'a> {
    a: &'a AnchoredGraph,
    b: &'a AnchoredGraph,
    iso: Isomorphism,
    vertex_image: BTreeSet<VertexId>,
    edge_image: BTreeSet<EdgeId>,
    face_image: BTreeSet<FaceId>,
    pending: Vec<(EdgeId, EdgeId)>,
}

impl IsoBuilder<'_> {
    fn vertex(&mut self, x: &VertexId, y: &VertexId) -> Option<()> {
        match self.iso.vertices.get(x) {
            Some(existing) => (existing == y).then_some(()),
            None => {
                if !self.vertex_image.insert(y.clone()) {
                    return None;
                }
                self.iso.vertices.insert(x.clone(), y.clone());
                Some(())
            }
        }
    }

    fn edge(&mut self, x: &EdgeId, y: &EdgeId) -> Option<()> {
        match self.iso.edges.get(x) {
            Some(existing) => (existing == y).then_some(()),
            None => {
                if !self.edge_image.insert(y.clone()) {
                    return None;
                }
                self.iso.edges.insert(x.clone(), y.clone());
                self.pending.push((x.clone(), y.clone()));
                Some(())
            }
        }
    }

    fn face(&mut self, fa: &AnchoredFace, fb: &AnchoredFace) -> Option<()> {
        if fa.domain.len() != fb.domain.len() || fa.codomain.len() != fb.codomain.len() {
            return None;
        }
        self.vertex(&fa.source, &fb.source)?;
        self.vertex(&fa.sink, &fb.sink)?;
        for (x, y) in fa
            .domain
            .iter()
            .zip(&fb.domain)
            .chain(fa.codomain.iter().zip(&fb.codomain))
        {
            self.edge(x, y)?;
            let ia = self.a.graph.incidence(x)?;
            let ib = self.b.graph.incidence(y)?;
            self.vertex(&ia.tail, &ib.tail)?;
            self.vertex(&ia.head, &ib.head)?;
        }
        Some(())
    }
}

fn side_index(g: &AnchoredGraph, side: Side) -> BTreeMap<&EdgeId, &FaceId> {
    let mut index = BTreeMap::new();
    for (id, face) in &g.faces {
        for e in face.path(side) {
            index.insert(e, id);
        }
    }
    index
}

/// Finds the structure-preserving renaming from `a` to `b`, if any. Both
/// graphs are expected to be valid.
pub fn anchored_isomorphism(a: &AnchoredGraph, b: &AnchoredGraph) -> Option<Isomorphism> {
    if a.graph.vertices.len() != b.graph.vertices.len()
        || a.graph.edges.len() != b.graph.edges.len()
        || a.faces.len() != b.faces.len()
    {
        return None;
    }
    let mut builder = IsoBuilder {
        a,
        b,
        iso: Isomorphism::default(),
        vertex_image: BTreeSet::new(),
        edge_image: BTreeSet::new(),
        face_image: BTreeSet::new(),
        pending: Vec::new(),
    };
    builder.face(&a.exterior, &b.exterior)?;
    let indices_a = [side_index(a, Side::Domain), side_index(a, Side::Codomain)];
    let indices_b = [side_index(b, Side::Domain), side_index(b, Side::Codomain)];
    while let Some((x, y)) = builder.pending.pop() {
        for (ia, ib) in indices_a.iter().zip(&indices_b) {
            match (ia.get(&x), ib.get(&y)) {
                (None, None) => {}
                (Some(fa), Some(fb)) => match builder.iso.faces.get(*fa) {
                    Some(existing) if existing == *fb => {}
                    Some(_) => return None,
                    None => {
                        if !builder.face_image.insert((*fb).clone()) {
                            return None;
                        }
                        builder.iso.faces.insert((*fa).clone(), (*fb).clone());
                        builder.face(&a.faces[*fa], &b.faces[*fb])?;
                    }
                },
                _ => return None,
            }
        }
    }
    let complete = builder.iso.vertices.len() == a.graph.vertices.len()
        && builder.iso.edges.len() == a.graph.edges.len()
        && builder.iso.faces.len() == a.faces.len();
    if !complete {
        return None;
    }
    for (x, y) in &builder.iso.edges {
        let ia = a.graph.incidence(x)?;
        let ib = b.graph.incidence(y)?;
        if builder.iso.vertices.get(&ia.tail) != Some(&ib.tail)
            || builder.iso.vertices.get(&ia.head) != Some(&ib.head)
        {
            return None;
        }
    }
    Some(builder.iso)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::atomic_example;

    fn bigon(x: &str, y: &str, e: &str, e2: &str, face: &str) -> AnchoredGraph {
        let mut graph = Graph::new();
        graph.add_vertex(x);
        graph.add_vertex(y);
        graph.add_edge(e, x, y);
        graph.add_edge(e2, x, y);
        AnchoredGraph {
            graph,
            faces: BTreeMap::from([(FaceId::from(face), AnchoredFace::new(x, y, [e], [e2]))]),
            exterior: AnchoredFace::new(x, y, [e], [e2]),
        }
    }

    #[test]
    fn atomic_example_is_valid_and_atomic() {
        let g = atomic_example();
        assert!(g.validate().is_ok(), "{}", g.validate());
        // 7 - 7 + 2 = 2
        assert_eq!(g.graph.vertices.len(), 7);
        assert_eq!(g.graph.edges.len(), 7);
        assert_eq!(g.is_atomic(), Ok(true));
    }

    #[test]
    fn minimal_bigon_is_valid_and_atomic() {
        let g = bigon("x", "y", "e", "e2", "F");
        assert!(g.validate().is_ok());
        assert_eq!(g.is_atomic(), Ok(true));
    }

    #[test]
    fn reversed_edge_breaks_codomain_path() {
        let mut g = atomic_example();
        g.graph.add_edge("h4", "w", "v");
        let report = g.validate();
        assert!(report.violations.iter().any(|v| matches!(
            v,
            Violation::NotDirectedPath { face: FaceRef::Interior(id), side: Side::Codomain, .. } if id.as_str() == "F"
        )));
        assert!(report
            .to_string()
            .contains("codomain of face F is not a directed path"));
        assert!(matches!(g.is_atomic(), Err(GraphError::Invalid(_))));
    }

    #[test]
    fn too_small_and_clashing_graphs_are_reported() {
        let mut graph = Graph::new();
        graph.add_vertex("x");
        graph.add_vertex("e");
        graph.add_edge("e", "x", "e");
        let g = AnchoredGraph {
            graph,
            faces: BTreeMap::new(),
            exterior: AnchoredFace::new("x", "e", ["e"], ["e"]),
        };
        let report = g.validate();
        assert!(report.violations.contains(&Violation::TooFewEdges(1)));
        assert!(report
            .violations
            .contains(&Violation::IdentifierClash("e".into())));
    }

    #[test]
    fn faceless_path_graph_is_accepted() {
        let mut graph = Graph::new();
        for v in ["a", "b", "c"] {
            graph.add_vertex(v);
        }
        graph.add_edge("p", "a", "b");
        graph.add_edge("q", "b", "c");
        let g = AnchoredGraph {
            graph,
            faces: BTreeMap::new(),
            exterior: AnchoredFace::new("a", "c", ["p", "q"], ["p", "q"]),
        };
        assert!(g.validate().is_ok());
        assert_eq!(g.is_atomic(), Ok(false));
    }

    #[test]
    fn euler_violation_is_detected() {
        let mut g = atomic_example();
        g.graph.add_vertex("stray");
        let report = g.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::Euler { .. })));
        assert!(report.violations.contains(&Violation::Disconnected));
    }

    #[test]
    fn composing_two_atomic_graphs() {
        let g = atomic_example();
        // H: a bigon on h5 stacked over the codomain of g.
        let mut graph = Graph::new();
        for v in ["s", "sF", "v", "w", "tF", "t"] {
            graph.add_vertex(v);
        }
        for (e, t, h) in [
            ("f", "s", "sF"),
            ("h3", "sF", "v"),
            ("h4", "v", "w"),
            ("h5", "w", "tF"),
            ("k", "w", "tF"),
            ("g", "tF", "t"),
        ] {
            graph.add_edge(e, t, h);
        }
        let h = AnchoredGraph {
            graph,
            faces: BTreeMap::from([(
                FaceId::from("K"),
                AnchoredFace::new("w", "tF", ["h5"], ["k"]),
            )]),
            exterior: AnchoredFace::new(
                "s",
                "t",
                ["f", "h3", "h4", "h5", "g"],
                ["f", "h3", "h4", "k", "g"],
            ),
        };
        assert_eq!(h.is_atomic(), Ok(true));
        let hg = g.vertical_compose(&h).unwrap();
        assert!(hg.validate().is_ok(), "{}", hg.validate());
        assert_eq!(hg.interior_count(), 2);
        assert_eq!(hg.exterior.domain, g.exterior.domain);
        assert_eq!(hg.exterior.codomain, h.exterior.codomain);
        assert_eq!(hg.is_atomic(), Ok(false));
    }

    #[test]
    fn mismatched_interface_reports_position() {
        let g = atomic_example();
        let h = bigon("s", "t", "x1", "x2", "K");
        let err = g.vertical_compose(&h).unwrap_err();
        assert_eq!(
            err,
            GraphError::InterfaceMismatch {
                position: 0,
                left: Some("f".into()),
                right: Some("x1".into())
            }
        );
    }

    #[test]
    fn colliding_names_are_renamed() {
        let g = bigon("x", "y", "e", "e2", "F");
        // same face name and a non-shared edge that collides with g's domain edge.
        let h = bigon("x", "y", "e2", "e", "F");
        let hg = g.vertical_compose(&h).unwrap();
        assert!(hg.validate().is_ok(), "{}", hg.validate());
        assert_eq!(hg.faces.len(), 2);
        assert_eq!(hg.exterior.codomain, vec![EdgeId::from("e_1")]);
        assert!(hg.faces.contains_key(&FaceId::from("F_1")));
    }

    #[test]
    fn isomorphism_detects_renamings() {
        let g = atomic_example();
        let mut renamed = g.clone();
        renamed.graph.edges = g
            .graph
            .edges
            .iter()
            .map(|(e, inc)| (EdgeId::new(format!("{e}'")), inc.clone()))
            .collect();
        let r = |es: &[EdgeId]| {
            es.iter()
                .map(|e| EdgeId::new(format!("{e}'")))
                .collect::<Vec<_>>()
        };
        renamed.exterior.domain = r(&g.exterior.domain);
        renamed.exterior.codomain = r(&g.exterior.codomain);
        for face in renamed.faces.values_mut() {
            face.domain = r(&face.domain);
            face.codomain = r(&face.codomain);
        }
        let iso = anchored_isomorphism(&g, &renamed).expect("isomorphic");
        assert_eq!(iso.edges[&EdgeId::from("h4")], EdgeId::from("h4'"));
        let other = bigon("x", "y", "e", "e2", "F");
        assert!(anchored_isomorphism(&g, &other).is_none());
    }
}
