//! Alternative composition-scheme extensions of one bracketed graph.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::bracketed::{
    canonical_interface_chain, extend_to_composition_scheme, extend_with_planner, BracketedGraph,
    ExtensionCertificate, Interface,
};
use crate::bracketing::{shortest_chain, AssocMove, BracketError, Bracketing};
use crate::scheme::{enumerate_presentations, PastingSchemePresentation, MAX_ENUMERATION_FACES};

use super::HarnessError;

/// How the extension is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Canonical chains along the given presentation.
    Canonical,
    /// The canonical extension with one move and its inverse inserted at a
    /// random interface.
    RedundantPair,
    /// The canonical extension along a different presentation.
    Reordered,
    /// Shortest chains along the given presentation.
    ShortestRoute,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::Canonical,
        Strategy::RedundantPair,
        Strategy::Reordered,
        Strategy::ShortestRoute,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Canonical => "canonical",
            Strategy::RedundantPair => "redundant-pair",
            Strategy::Reordered => "reordered",
            Strategy::ShortestRoute => "shortest-route",
        }
    }
}

/// An extension of `g` built with `strategy`. Randomness is used only by
/// [`Strategy::RedundantPair`].
pub fn alternate_certificate<R: Rng + ?Sized>(
    g: &BracketedGraph,
    p: &PastingSchemePresentation,
    strategy: Strategy,
    rng: &mut R,
) -> Result<ExtensionCertificate, HarnessError> {
    match strategy {
        Strategy::Canonical => Ok(extend_to_composition_scheme(g, p)?),
        Strategy::ShortestRoute => {
            let mut planner = |i: &Interface<'_>| shortest_chain(i.from, i.to);
            Ok(extend_with_planner(g, p, &mut planner)?)
        }
        Strategy::RedundantPair => {
            let candidates: Vec<usize> = p
                .frontiers
                .iter()
                .enumerate()
                .filter(|(_, f)| f.len() >= 3)
                .map(|(i, _)| i)
                .collect();
            let Some(&chosen) = candidates.choose(rng) else {
                return Err(HarnessError::Inapplicable {
                    strategy,
                    reason: "no interface has three or more edges".into(),
                });
            };
            let mut pick = |from: &Bracketing| -> AssocMove {
                from.available_moves()
                    .choose(rng)
                    .expect("three or more edges")
                    .clone()
            };
            let mut planner = |i: &Interface<'_>| -> Result<Vec<AssocMove>, BracketError> {
                let mut moves = Vec::new();
                if i.index == chosen {
                    let m = pick(i.from);
                    moves.push(m.clone());
                    moves.push(m.inverse());
                }
                moves.extend(canonical_interface_chain(i)?);
                Ok(moves)
            };
            Ok(extend_with_planner(g, p, &mut planner)?)
        }
        Strategy::Reordered => {
            let all = enumerate_presentations(&g.anchored, MAX_ENUMERATION_FACES)?;
            let Some(other) = all.iter().find(|q| q.faces != p.faces) else {
                return Err(HarnessError::Inapplicable {
                    strategy,
                    reason: "the graph has a single presentation".into(),
                });
            };
            Ok(extend_to_composition_scheme(g, other)?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bracketed::{verify_extension, FactorKind};
    use crate::fixtures::{running_example, side_by_side_graph};
    use crate::harness::trial_rng;
    use crate::scheme::find_presentation;

    #[test]
    fn redundant_pair_on_running_example_adds_two_factors() {
        let g = running_example();
        let p = find_presentation(&g.anchored).unwrap();
        let mut rng = trial_rng(1, 0);
        let base = alternate_certificate(&g, &p, Strategy::Canonical, &mut rng).unwrap();
        let cert = alternate_certificate(&g, &p, Strategy::RedundantPair, &mut rng).unwrap();
        assert_eq!(cert.scheme.len(), base.scheme.len() + 2);
        assert!(verify_extension(&cert, &g));
    }

    #[test]
    fn reordered_needs_two_presentations() {
        let g = running_example();
        let p = find_presentation(&g.anchored).unwrap();
        let err =
            alternate_certificate(&g, &p, Strategy::Reordered, &mut trial_rng(0, 0)).unwrap_err();
        assert!(matches!(err, HarnessError::Inapplicable { .. }));
    }

    #[test]
    fn reordered_side_by_side_changes_the_face_order() {
        let anchored = side_by_side_graph();
        let g = crate::fixtures::left_normalized_bracketing(anchored);
        let p = find_presentation(&g.anchored).unwrap();
        let cert =
            alternate_certificate(&g, &p, Strategy::Reordered, &mut trial_rng(0, 0)).unwrap();
        let faces: Vec<_> = cert
            .kinds()
            .into_iter()
            .filter_map(|k| match k {
                FactorKind::Face(f) => Some(f),
                FactorKind::Associator(_) => None,
            })
            .collect();
        let mut reversed = p.faces.clone();
        reversed.reverse();
        assert_eq!(faces, reversed);
        assert!(verify_extension(&cert, &g));
    }
}
