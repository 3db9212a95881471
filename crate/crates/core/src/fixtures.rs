//! Small hand-built graphs used in tests, examples and the acceptance suite.

use std::collections::BTreeMap;

use crate::bracketed::{BracketedGraph, FaceShapes};
use crate::bracketing::Bracketing;
use crate::graph::{AnchoredFace, AnchoredGraph, Graph};
use crate::ids::FaceId;

type FaceSpec<'a> = (&'a str, &'a [&'a str], &'a [&'a str]);

/// Builds an anchored graph from `(name, tail, head)` edges and faces given by
/// their domain and codomain; face endpoints are read off the domain.
pub fn build_graph(
    edges: &[(&str, &str, &str)],
    faces: &[FaceSpec<'_>],
    exterior: (&[&str], &[&str]),
) -> AnchoredGraph {
    let mut graph = Graph::new();
    for (e, t, h) in edges {
        graph.add_vertex(*t);
        graph.add_vertex(*h);
        graph.add_edge(*e, *t, *h);
    }
    let ends = |dom: &[&str]| {
        let first = edges
            .iter()
            .find(|(e, _, _)| *e == dom[0])
            .expect("declared edge");
        let last = edges
            .iter()
            .find(|(e, _, _)| *e == dom[dom.len() - 1])
            .expect("declared edge");
        (first.1, last.2)
    };
    let face = |dom: &[&str], cod: &[&str]| {
        let (s, t) = ends(dom);
        AnchoredFace::new(s, t, dom.iter().copied(), cod.iter().copied())
    };
    AnchoredGraph {
        graph,
        faces: faces
            .iter()
            .map(|(id, dom, cod)| (FaceId::from(*id), face(dom, cod)))
            .collect(),
        exterior: face(exterior.0, exterior.1),
    }
}

fn shape(s: &str) -> Bracketing {
    s.parse().expect("valid bracketing literal")
}

/// One face `F` with domain `h1 h2` and codomain `h3 h4 h5`, whiskered by `f`
/// on the left and `g` on the right.
pub fn atomic_example() -> AnchoredGraph {
    build_graph(
        &[
            ("f", "s", "sF"),
            ("h1", "sF", "u"),
            ("h2", "u", "tF"),
            ("h3", "sF", "v"),
            ("h4", "v", "w"),
            ("h5", "w", "tF"),
            ("g", "tF", "t"),
        ],
        &[("F", &["h1", "h2"], &["h3", "h4", "h5"])],
        (&["f", "h1", "h2", "g"], &["f", "h3", "h4", "h5", "g"]),
    )
}

/// Two parallel edges `e, e2 : x -> y` bounding one face.
pub fn bigon() -> AnchoredGraph {
    build_graph(
        &[("e", "x", "y"), ("e2", "x", "y")],
        &[("F", &["e"], &["e2"])],
        (&["e"], &["e2"]),
    )
}

/// Three faces over objects `V S U W T`:
/// `theta1 : f1 ⇒ h1 h2`, `theta2 : h2 f2 ⇒ h3 g2`, `theta3 : h1 h3 ⇒ g1`,
/// with global domain `f1 f2` and codomain `g1 g2`. Paths are in diagram order.
pub fn running_example_graph() -> AnchoredGraph {
    build_graph(
        &[
            ("f1", "V", "U"),
            ("f2", "U", "T"),
            ("h1", "V", "S"),
            ("h2", "S", "U"),
            ("h3", "S", "W"),
            ("g1", "V", "W"),
            ("g2", "W", "T"),
        ],
        &[
            ("theta1", &["f1"], &["h1", "h2"]),
            ("theta2", &["h2", "f2"], &["h3", "g2"]),
            ("theta3", &["h1", "h3"], &["g1"]),
        ],
        (&["f1", "f2"], &["g1", "g2"]),
    )
}

/// The running example with its only possible bracketings.
pub fn running_example() -> BracketedGraph {
    let face_shapes = BTreeMap::from([
        (
            FaceId::from("theta1"),
            FaceShapes {
                domain: shape("-"),
                codomain: shape("--"),
            },
        ),
        (
            FaceId::from("theta2"),
            FaceShapes {
                domain: shape("--"),
                codomain: shape("--"),
            },
        ),
        (
            FaceId::from("theta3"),
            FaceShapes {
                domain: shape("--"),
                codomain: shape("-"),
            },
        ),
    ]);
    BracketedGraph::new(
        running_example_graph(),
        shape("--"),
        shape("--"),
        face_shapes,
    )
    .expect("lengths agree")
}

/// Two bigons `A : a ⇒ a2` and `B : b ⇒ b2` side by side.
pub fn side_by_side_graph() -> AnchoredGraph {
    build_graph(
        &[
            ("a", "s", "m"),
            ("a2", "s", "m"),
            ("b", "m", "t"),
            ("b2", "m", "t"),
        ],
        &[("A", &["a"], &["a2"]), ("B", &["b"], &["b2"])],
        (&["a", "b"], &["a2", "b2"]),
    )
}

/// A valid anchored graph with six faces that admits no pasting scheme
/// presentation: faces `Fa`, `Fb`, `Fc` around the vertex `c` each need another
/// to be peeled first.
pub fn obstruction_graph() -> AnchoredGraph {
    build_graph(
        &[
            ("sx", "s", "x"),
            ("xt", "x", "t"),
            ("sy", "s", "y"),
            ("yt", "y", "t"),
            ("sz", "s", "z"),
            ("zx", "z", "x"),
            ("yz", "y", "z"),
            ("xy", "x", "y"),
            ("xc", "x", "c"),
            ("yc", "y", "c"),
            ("zc", "z", "c"),
        ],
        &[
            ("Fa", &["xy", "yc"], &["xc"]),
            ("Fb", &["yz", "zc"], &["yc"]),
            ("Fc", &["zx", "xc"], &["zc"]),
            ("UL", &["sx"], &["sz", "zx"]),
            ("LL", &["sz"], &["sy", "yz"]),
            ("R", &["xt"], &["xy", "yt"]),
        ],
        (&["sx", "xt"], &["sy", "yt"]),
    )
}

/// `g` with every path bracketed left-normalized.
pub fn left_normalized_bracketing(g: AnchoredGraph) -> BracketedGraph {
    let ln = Bracketing::left_normalized_or_empty;
    let face_shapes = g
        .faces
        .iter()
        .map(|(id, f)| {
            let shapes = FaceShapes {
                domain: ln(f.domain.len()),
                codomain: ln(f.codomain.len()),
            };
            (id.clone(), shapes)
        })
        .collect();
    let (dom, cod) = (ln(g.exterior.domain.len()), ln(g.exterior.codomain.len()));
    BracketedGraph::new(g, dom, cod, face_shapes).expect("lengths agree")
}
