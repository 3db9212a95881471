//! Seeded generation of random pasting diagrams, alternative extensions, and
//! the verification suites built on them.
//!
//! Trial `t` of a run with seed `s` draws from the ChaCha stream `t` of the
//! generator seeded with `s`, so any single trial can be replayed from the
//! pair `(s, t)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bicategory::matrix::{MatrixModel, Semiring};
use crate::bicategory::span::{complete_span, FinSet, Span, SpanModel};
use crate::bicategory::{Bicategory, Sampling};
use crate::bracketed::{BracketedError, BracketedGraph, FaceShapes};
use crate::bracketing::{enumerate_bracketings, BracketError, Bracketing};
use crate::diagram::{eval_path, DiagramError, PastingDiagram};
use crate::graph::{AnchoredFace, AnchoredGraph, DirectedPath, Graph};
use crate::ids::{EdgeId, FaceId, VertexId};
use crate::scheme::{presentation_for_order, PastingSchemePresentation, SchemeError};

mod certificates;
mod suites;

pub use certificates::{alternate_certificate, Strategy};
pub use suites::{
    check_maclane_instance, check_uniqueness, maclane_suite, presentation_suite, uniqueness_suite,
    FailureReport, SuiteReport, UniquenessVerdict,
};

/// Largest face count a generator may be asked for.
pub const MAX_GENERATED_FACES: usize = 7;
/// Largest frontier length a generator may be asked for.
pub const MAX_GENERATED_PATH: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("strategy {strategy} does not apply: {reason}")]
    Inapplicable { strategy: Strategy, reason: String },
    #[error("chain does not run from {from} to {to}")]
    ChainEndpoints { from: Bracketing, to: Bracketing },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Bracketed(#[from] BracketedError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Bracket(#[from] BracketError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub max_faces: usize,
    pub max_path_len: usize,
    /// Largest object and apex size in the span model, largest dimension in
    /// the matrix model.
    pub max_object_size: usize,
    pub trials: usize,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            max_faces: 5,
            max_path_len: 5,
            max_object_size: 3,
            trials: 200,
        }
    }
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        let positive = [
            ("max_faces", self.max_faces),
            ("max_path_len", self.max_path_len),
            ("max_object_size", self.max_object_size),
            ("trials", self.trials),
        ];
        for (name, value) in positive {
            if value == 0 {
                return Err(HarnessError::Config(format!("{name} must be positive")));
            }
        }
        if self.max_faces > MAX_GENERATED_FACES {
            return Err(HarnessError::Config(format!(
                "max_faces is at most {MAX_GENERATED_FACES}, got {}",
                self.max_faces
            )));
        }
        if self.max_path_len > MAX_GENERATED_PATH {
            return Err(HarnessError::Config(format!(
                "max_path_len is at most {MAX_GENERATED_PATH}, got {}",
                self.max_path_len
            )));
        }
        Ok(())
    }
}

/// The random stream of one trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Models in which random diagrams can always be completed.
pub trait DiagramSampling: Sampling {
    /// A 1-cell `x → y` such that every bracketed path of such 1-cells
    /// receives a 2-cell from any parallel 1-cell.
    fn receptive_one_cell(&self, x: &Self::Object, y: &Self::Object) -> Self::OneCell;
}

impl DiagramSampling for SpanModel {
    /// The complete span: composites of complete spans between nonempty sets
    /// hit every pair of endpoints.
    fn receptive_one_cell(&self, x: &FinSet, y: &FinSet) -> Span {
        complete_span(x, y)
    }
}

impl<S: Semiring> DiagramSampling for MatrixModel<S> {
    fn receptive_one_cell(&self, _: &(), _: &()) -> usize {
        1
    }
}

#[derive(Default)]
struct StackBuilder {
    graph: Graph,
    vertices: usize,
    edges: usize,
}

impl StackBuilder {
    fn vertex(&mut self) -> VertexId {
        let v = VertexId::new(format!("x{}", self.vertices));
        self.vertices += 1;
        self.graph.add_vertex(v.clone());
        v
    }

    /// A path of `len` new edges from `from`, ending at `to` or at a new
    /// vertex.
    fn path(&mut self, from: VertexId, to: Option<VertexId>, len: usize) -> DirectedPath {
        let mut path = DirectedPath::trivial(from);
        for k in 0..len {
            let head = match (&to, k + 1 == len) {
                (Some(t), true) => t.clone(),
                _ => self.vertex(),
            };
            self.edges += 1;
            let e = EdgeId::new(format!("e{}", self.edges));
            self.graph
                .add_edge(e.clone(), path.sink().clone(), head.clone());
            path.edges.push(e);
            path.vertices.push(head);
        }
        path
    }
}

/// A random bracketed graph built as a stack of atomic graphs, with its
/// construction order as a presentation.
pub fn random_bracketed_graph<R: Rng + ?Sized>(
    cfg: &GeneratorConfig,
    rng: &mut R,
) -> Result<(BracketedGraph, PastingSchemePresentation), HarnessError> {
    cfg.validate()?;
    let max_len = cfg.max_path_len;
    let mut b = StackBuilder::default();
    let initial_len = rng.gen_range(3.min(max_len)..=max_len);
    let source = b.vertex();
    let domain = b.path(source.clone(), None, initial_len);
    let sink = domain.sink().clone();
    let mut frontier = domain.clone();
    let mut faces = BTreeMap::new();
    let mut order = Vec::new();
    for j in 0..rng.gen_range(1..=cfg.max_faces) {
        let d = rng.gen_range(1..=frontier.len());
        let offset = rng.gen_range(0..=frontier.len() - d);
        let c = rng.gen_range(1..=max_len - frontier.len() + d);
        let segment = frontier.segment(offset, d);
        let cod = b.path(segment.source().clone(), Some(segment.sink().clone()), c);
        let id = FaceId::new(format!("F{}", j + 1));
        faces.insert(
            id.clone(),
            AnchoredFace {
                source: segment.source().clone(),
                sink: segment.sink().clone(),
                domain: segment.edges.clone(),
                codomain: cod.edges.clone(),
            },
        );
        order.push(id);
        frontier = frontier.splice(offset, d, &cod);
    }
    let anchored = AnchoredGraph {
        graph: b.graph,
        faces,
        exterior: AnchoredFace {
            source,
            sink,
            domain: domain.edges,
            codomain: frontier.edges,
        },
    };
    let mut shape = |n: usize| -> Result<Bracketing, HarnessError> {
        Ok(enumerate_bracketings(n)?
            .choose(rng)
            .expect("at least one bracketing")
            .clone())
    };
    let mut face_shapes = BTreeMap::new();
    for (id, f) in &anchored.faces {
        let domain = shape(f.domain.len())?;
        let codomain = shape(f.codomain.len())?;
        face_shapes.insert(id.clone(), FaceShapes { domain, codomain });
    }
    let shape_dom = shape(anchored.exterior.domain.len())?;
    let shape_cod = shape(anchored.exterior.codomain.len())?;
    let presentation = presentation_for_order(&anchored, &order)?;
    let g = BracketedGraph::new(anchored, shape_dom, shape_cod, face_shapes)?;
    Ok((g, presentation))
}

/// A generated diagram with the presentation it was built along.
#[derive(Clone, Debug)]
pub struct GeneratedDiagram<B: Bicategory> {
    pub diagram: PastingDiagram<B>,
    pub presentation: PastingSchemePresentation,
}

/// Attempts at drawing codomain 1-cells before falling back to receptive
/// ones.
const CELL_ATTEMPTS: usize = 16;

/// The random diagram of trial `trial`: a random bracketed graph, random
/// objects and 1-cells, and for each face a uniformly random 2-cell between
/// its evaluated boundaries.
pub fn random_pasting_diagram<B: DiagramSampling>(
    cfg: &GeneratorConfig,
    model: &B,
    trial: u64,
) -> Result<GeneratedDiagram<B>, HarnessError> {
    let mut rng = trial_rng(cfg.seed, trial);
    let (shape, presentation) = random_bracketed_graph(cfg, &mut rng)?;
    let size = cfg.max_object_size;
    let a = &shape.anchored;
    let objects: BTreeMap<VertexId, B::Object> = a
        .graph
        .vertices
        .iter()
        .map(|v| {
            (
                v.clone(),
                model.random_object(&mut rng, &v.as_str().to_uppercase(), size),
            )
        })
        .collect();
    let endpoints = |e: &EdgeId| {
        let inc = &a.graph.edges[e];
        (&objects[&inc.tail], &objects[&inc.head])
    };
    let mut one_cells: BTreeMap<EdgeId, B::OneCell> = BTreeMap::new();
    for e in &a.exterior.domain {
        let (x, y) = endpoints(e);
        one_cells.insert(e.clone(), model.random_one_cell(&mut rng, x, y, size));
    }
    let mut two_cells = BTreeMap::new();
    for id in &presentation.faces {
        let face = &a.faces[id];
        let shapes = &shape.face_shapes[id];
        let dom = {
            let lookup = |e: &EdgeId| Ok(one_cells[e].clone());
            eval_path(model, &lookup, &face.domain, &shapes.domain)?
        };
        let mut found = None;
        for attempt in 0..=CELL_ATTEMPTS {
            let cells: Vec<B::OneCell> = face
                .codomain
                .iter()
                .map(|e| {
                    let (x, y) = endpoints(e);
                    if attempt < CELL_ATTEMPTS {
                        model.random_one_cell(&mut rng, x, y, size)
                    } else {
                        model.receptive_one_cell(x, y)
                    }
                })
                .collect();
            let assigned: BTreeMap<&EdgeId, &B::OneCell> =
                face.codomain.iter().zip(&cells).collect();
            let lookup = |e: &EdgeId| Ok(assigned[e].clone());
            let cod = eval_path(model, &lookup, &face.codomain, &shapes.codomain)?;
            if let Some(cell) = model.random_two_cell(&mut rng, &dom, &cod) {
                found = Some((cells, cell));
                break;
            }
        }
        let (cells, cell) = found.ok_or_else(|| DiagramError::Missing {
            kind: "2-cell",
            name: id.to_string(),
        })?;
        for (e, c) in face.codomain.iter().zip(cells) {
            one_cells.insert(e.clone(), c);
        }
        two_cells.insert(id.clone(), cell);
    }
    let diagram = PastingDiagram::new(model, shape, objects, one_cells, two_cells)?;
    Ok(GeneratedDiagram {
        diagram,
        presentation,
    })
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Strategy::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown strategy {s:?}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::anchored_isomorphism;
    use crate::scheme::find_presentation;

    #[test]
    fn generated_graphs_are_valid_and_recognized() {
        let cfg = GeneratorConfig::default();
        for trial in 0..50 {
            let mut rng = trial_rng(cfg.seed, trial);
            let (g, p) = random_bracketed_graph(&cfg, &mut rng).unwrap();
            assert!(
                g.anchored.validate().is_ok(),
                "trial {trial}: {}",
                g.anchored.validate()
            );
            assert!(anchored_isomorphism(&p.compose().unwrap(), &g.anchored).is_some());
            assert!(find_presentation(&g.anchored).is_ok(), "trial {trial}");
        }
    }

    #[test]
    fn single_face_config_gives_atomic_diagrams() {
        let cfg = GeneratorConfig {
            max_faces: 1,
            ..GeneratorConfig::default()
        };
        let d = random_pasting_diagram(&cfg, &SpanModel, 3).unwrap();
        assert_eq!(d.diagram.shape.anchored.is_atomic(), Ok(true));
    }

    #[test]
    fn generation_is_deterministic() {
        let cfg = GeneratorConfig::default();
        let a = random_pasting_diagram(&cfg, &SpanModel, 7).unwrap();
        let b = random_pasting_diagram(&cfg, &SpanModel, 7).unwrap();
        assert_eq!(a.diagram.shape, b.diagram.shape);
        assert_eq!(a.diagram.two_cells, b.diagram.two_cells);
    }

    #[test]
    fn oversized_configs_are_rejected() {
        let cfg = GeneratorConfig {
            max_faces: 8,
            ..GeneratorConfig::default()
        };
        assert!(matches!(cfg.validate(), Err(HarnessError::Config(_))));
    }
}
