//! Recognizing pasting schemes: presentations of an anchored graph as a
//! vertical stack of atomic graphs.
//!
//! The recognizer peels faces off a frontier path that starts at the global
//! domain. A face can be peeled when its domain is a contiguous segment of the
//! frontier and replacing that segment by its codomain leaves a path with
//! distinct vertices.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::graph::{
    AnchoredFace, AnchoredGraph, DirectedPath, Graph, GraphError, ValidationReport,
};
use crate::ids::{EdgeId, FaceId};

/// Largest face count accepted by [`enumerate_presentations`].
pub const MAX_ENUMERATION_FACES: usize = 7;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SchemeError {
    #[error("invalid anchored graph: {0}")]
    Invalid(ValidationReport),
    #[error("no interior faces: not a pasting scheme")]
    NoInteriorFaces,
    #[error(
        "not a pasting scheme: stuck at frontier ({}) with unused faces {}",
        join_names(frontier),
        join_names(unused)
    )]
    Stuck {
        frontier: Vec<EdgeId>,
        unused: Vec<FaceId>,
    },
    #[error("face {0} cannot be peeled from the current frontier")]
    NotPeelable(FaceId),
    #[error("unknown face {0}")]
    UnknownFace(FaceId),
    #[error("order lists {given} faces but the graph has {expected}")]
    OrderLength { given: usize, expected: usize },
    #[error("{faces} interior faces exceed the enumeration limit {limit}")]
    TooManyFaces { faces: usize, limit: usize },
}

fn join_names<T: std::fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Atomic factors `G_1 … G_n` whose vertical composite is the presented graph.
///
/// Factors reuse the presented graph's names, and factor `i` carries the face
/// `faces[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PastingSchemePresentation {
    pub factors: Vec<AnchoredGraph>,
    pub faces: Vec<FaceId>,
    /// `frontiers[i]` is the domain of factor `i`; the last entry is the
    /// global codomain.
    pub frontiers: Vec<DirectedPath>,
}

impl PastingSchemePresentation {
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Offset of factor `i`'s face domain within its frontier.
    pub fn offset(&self, i: usize) -> usize {
        let face = &self.factors[i].faces[&self.faces[i]];
        self.frontiers[i]
            .find_segment(&face.domain)
            .expect("face domain lies on its frontier")
    }

    /// The vertical composite `G_n ⋯ G_1`.
    pub fn compose(&self) -> Result<AnchoredGraph, GraphError> {
        let mut factors = self.factors.iter();
        let first = factors.next().expect("presentations are nonempty").clone();
        factors.try_fold(first, |acc, f| acc.vertical_compose(f))
    }
}

#[derive(Clone)]
struct Peeler<'a> {
    g: &'a AnchoredGraph,
    frontier: DirectedPath,
    unused: BTreeSet<FaceId>,
}

impl<'a> Peeler<'a> {
    fn new(g: &'a AnchoredGraph) -> Result<Self, SchemeError> {
        let report = g.validate();
        if !report.is_ok() {
            return Err(SchemeError::Invalid(report));
        }
        if g.faces.is_empty() {
            return Err(SchemeError::NoInteriorFaces);
        }
        let frontier = g
            .graph
            .walk(&g.exterior.source, &g.exterior.domain)
            .expect("validated domain");
        Ok(Self {
            g,
            frontier,
            unused: g.faces.keys().cloned().collect(),
        })
    }

    /// The frontier after peeling `face`, with the offset used.
    fn peel_result(&self, face: &FaceId) -> Option<(usize, DirectedPath)> {
        let f = &self.g.faces[face];
        let offset = self.frontier.find_segment(&f.domain)?;
        let cod = self.g.graph.walk(&f.source, &f.codomain).ok()?;
        let next = self.frontier.splice(offset, f.domain.len(), &cod);
        next.has_distinct_vertices().then_some((offset, next))
    }

    /// Peelable faces ordered by offset, then identifier.
    fn candidates(&self) -> Vec<(usize, FaceId, DirectedPath)> {
        let mut out: Vec<_> = self
            .unused
            .iter()
            .filter_map(|id| {
                self.peel_result(id)
                    .map(|(off, next)| (off, id.clone(), next))
            })
            .collect();
        out.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
        out
    }

    fn factor(&self, face: &FaceId, next: &DirectedPath) -> AnchoredGraph {
        let f: &AnchoredFace = &self.g.faces[face];
        let mut graph = Graph::new();
        for v in self.frontier.vertices.iter().chain(&next.vertices) {
            graph.vertices.insert(v.clone());
        }
        for e in self.frontier.edges.iter().chain(&next.edges) {
            graph.edges.insert(e.clone(), self.g.graph.edges[e].clone());
        }
        AnchoredGraph {
            graph,
            faces: BTreeMap::from([(face.clone(), f.clone())]),
            exterior: AnchoredFace {
                source: self.g.exterior.source.clone(),
                sink: self.g.exterior.sink.clone(),
                domain: self.frontier.edges.clone(),
                codomain: next.edges.clone(),
            },
        }
    }

    fn stuck(&self) -> SchemeError {
        SchemeError::Stuck {
            frontier: self.frontier.edges.clone(),
            unused: self.unused.iter().cloned().collect(),
        }
    }

    fn is_done(&self) -> bool {
        self.unused.is_empty() && self.frontier.edges == self.g.exterior.codomain
    }
}

struct Builder {
    factors: Vec<AnchoredGraph>,
    faces: Vec<FaceId>,
    frontiers: Vec<DirectedPath>,
}

impl Builder {
    fn new(start: &DirectedPath) -> Self {
        Self {
            factors: Vec::new(),
            faces: Vec::new(),
            frontiers: vec![start.clone()],
        }
    }

    fn push(&mut self, peeler: &mut Peeler<'_>, face: FaceId, next: DirectedPath) {
        self.factors.push(peeler.factor(&face, &next));
        peeler.unused.remove(&face);
        peeler.frontier = next.clone();
        self.frontiers.push(next);
        self.faces.push(face);
    }

    fn finish(self) -> PastingSchemePresentation {
        PastingSchemePresentation {
            factors: self.factors,
            faces: self.faces,
            frontiers: self.frontiers,
        }
    }
}

/// Greedy peeling: always take the peelable face with the leftmost domain,
/// breaking ties by face identifier. On failure the error carries the frontier
/// at which no unused face could be peeled.
pub fn find_presentation(g: &AnchoredGraph) -> Result<PastingSchemePresentation, SchemeError> {
    let mut peeler = Peeler::new(g)?;
    let mut builder = Builder::new(&peeler.frontier);
    while !peeler.unused.is_empty() {
        let Some((_, face, next)) = peeler.candidates().into_iter().next() else {
            return Err(peeler.stuck());
        };
        builder.push(&mut peeler, face, next);
    }
    if !peeler.is_done() {
        return Err(peeler.stuck());
    }
    Ok(builder.finish())
}

/// The presentation peeling faces in exactly the given order.
pub fn presentation_for_order(
    g: &AnchoredGraph,
    order: &[FaceId],
) -> Result<PastingSchemePresentation, SchemeError> {
    let mut peeler = Peeler::new(g)?;
    if order.len() != g.faces.len() {
        return Err(SchemeError::OrderLength {
            given: order.len(),
            expected: g.faces.len(),
        });
    }
    let mut builder = Builder::new(&peeler.frontier);
    for face in order {
        if !g.faces.contains_key(face) {
            return Err(SchemeError::UnknownFace(face.clone()));
        }
        if !peeler.unused.contains(face) {
            return Err(SchemeError::NotPeelable(face.clone()));
        }
        let (_, next) = peeler
            .peel_result(face)
            .ok_or_else(|| SchemeError::NotPeelable(face.clone()))?;
        builder.push(&mut peeler, face.clone(), next);
    }
    if !peeler.is_done() {
        return Err(peeler.stuck());
    }
    Ok(builder.finish())
}

/// Every presentation, found by exhaustive search over peeling orders.
pub fn enumerate_presentations(
    g: &AnchoredGraph,
    max_faces: usize,
) -> Result<Vec<PastingSchemePresentation>, SchemeError> {
    let limit = max_faces.min(MAX_ENUMERATION_FACES);
    if g.faces.len() > limit {
        return Err(SchemeError::TooManyFaces {
            faces: g.faces.len(),
            limit,
        });
    }
    let peeler = match Peeler::new(g) {
        Ok(p) => p,
        Err(SchemeError::NoInteriorFaces) => return Ok(Vec::new()),
        Err(e) => return Err(e),
    };
    let mut out = Vec::new();
    let mut order = Vec::new();
    search(peeler, &mut order, &mut out);
    out.into_iter()
        .map(|order: Vec<FaceId>| presentation_for_order(g, &order))
        .collect()
}

fn search(peeler: Peeler<'_>, order: &mut Vec<FaceId>, out: &mut Vec<Vec<FaceId>>) {
    if peeler.unused.is_empty() {
        if peeler.is_done() {
            out.push(order.clone());
        }
        return;
    }
    for (_, face, next) in peeler.candidates() {
        let mut child = peeler.clone();
        child.unused.remove(&face);
        child.frontier = next;
        order.push(face);
        search(child, order, out);
        order.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{
        atomic_example, obstruction_graph, running_example_graph, side_by_side_graph,
    };
    use crate::graph::anchored_isomorphism;

    #[test]
    fn running_example_has_unique_presentation() {
        let g = running_example_graph();
        let p = find_presentation(&g).unwrap();
        let names: Vec<_> = p.faces.iter().map(|f| f.as_str()).collect();
        assert_eq!(names, ["theta1", "theta2", "theta3"]);
        for f in &p.factors {
            assert_eq!(f.is_atomic(), Ok(true));
        }
        assert!(anchored_isomorphism(&p.compose().unwrap(), &g).is_some());
        assert_eq!(enumerate_presentations(&g, 7).unwrap().len(), 1);
    }

    #[test]
    fn atomic_graph_has_one_factor() {
        let g = atomic_example();
        assert_eq!(find_presentation(&g).unwrap().len(), 1);
        assert_eq!(enumerate_presentations(&g, 7).unwrap().len(), 1);
    }

    #[test]
    fn side_by_side_faces_have_two_presentations() {
        let g = side_by_side_graph();
        let all = enumerate_presentations(&g, 7).unwrap();
        assert_eq!(all.len(), 2);
        assert_ne!(all[0].faces, all[1].faces);
    }

    #[test]
    fn obstruction_is_reported_with_frontier() {
        let g = obstruction_graph();
        assert!(g.validate().is_ok(), "{}", g.validate());
        match find_presentation(&g) {
            Err(SchemeError::Stuck { frontier, unused }) => {
                assert!(!frontier.is_empty());
                assert!(!unused.is_empty());
            }
            other => panic!("expected a stuck frontier, got {other:?}"),
        }
        assert!(enumerate_presentations(&g, 7).unwrap().is_empty());
    }

    #[test]
    fn order_must_be_peelable() {
        let g = running_example_graph();
        let err = presentation_for_order(&g, &["theta2".into(), "theta1".into(), "theta3".into()])
            .unwrap_err();
        assert_eq!(err, SchemeError::NotPeelable("theta2".into()));
    }
}
