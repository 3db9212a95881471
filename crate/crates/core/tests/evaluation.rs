use pasting::bicategory::Sampling;
use pasting::bracketing::{associator_chain, enumerate_bracketings, shortest_chain};
use pasting::diagram::{associator_composite, compose, composite};
use pasting::harness::{
    alternate_certificate, random_pasting_diagram, trial_rng, GeneratorConfig,
    Strategy as Extension,
};
use pasting::scheme::find_presentation;
use pasting::{Bicategory, Matrix, NatMatrixModel, SpanModel};
use proptest::prelude::*;

fn config(seed: u64, max_faces: usize) -> GeneratorConfig {
    GeneratorConfig {
        seed,
        max_faces,
        max_path_len: 4,
        max_object_size: 2,
        trials: 1,
    }
}

fn to_rows(m: &Matrix<u64>) -> Vec<Vec<u64>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

fn identity(n: usize) -> Vec<Vec<u64>> {
    (0..n)
        .map(|i| (0..n).map(|j| u64::from(i == j)).collect())
        .collect()
}

/// `diag(I_pre, m, I_post)` for an `r × c` block `m`.
fn whisker(pre: usize, m: &[Vec<u64>], c: usize, post: usize) -> Vec<Vec<u64>> {
    let width = pre + c + post;
    let mut out = Vec::new();
    for i in 0..pre {
        let mut row = vec![0; width];
        row[i] = 1;
        out.push(row);
    }
    for r in m {
        let mut row = vec![0; pre];
        row.extend(r);
        row.extend(std::iter::repeat_n(0, post));
        out.push(row);
    }
    for i in 0..post {
        let mut row = vec![0; width];
        row[pre + c + i] = 1;
        out.push(row);
    }
    out
}

fn mat_mul(a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| row.iter().zip(b).map(|(x, r)| x * r[j]).sum())
                .collect()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// In a strict model the composite is the product of the whiskered face
    /// cells in presentation order, whatever the bracketings.
    #[test]
    fn matrix_composite_is_the_whiskered_product(seed in any::<u64>(), max_faces in 1usize..=5) {
        let model = NatMatrixModel::new();
        let g = random_pasting_diagram(&config(seed, max_faces), &model, 0).unwrap();
        let d = &g.diagram;
        let p = &g.presentation;
        let dim = |e: &pasting::EdgeId| d.one_cells[e];
        let start: usize = d.shape.anchored.exterior.domain.iter().map(dim).sum();
        let mut oracle = identity(start);
        for (i, id) in p.faces.iter().enumerate() {
            let face = &d.shape.anchored.faces[id];
            let frontier = &p.frontiers[i].edges;
            let offset = p.offset(i);
            let pre: usize = frontier[..offset].iter().map(dim).sum();
            let post: usize = frontier[offset + face.domain.len()..].iter().map(dim).sum();
            let cols: usize = face.domain.iter().map(dim).sum();
            let block = to_rows(d.two_cells[id].matrix());
            oracle = mat_mul(&whisker(pre, &block, cols, post), &oracle);
        }
        let value = composite(&model, d).unwrap().value;
        prop_assert_eq!(to_rows(value.matrix()), oracle);
    }

    #[test]
    fn span_composite_does_not_depend_on_the_certificate(seed in any::<u64>(), max_faces in 1usize..=4) {
        let g = random_pasting_diagram(&config(seed, max_faces), &SpanModel, 0).unwrap();
        let d = &g.diagram;
        let reference = composite(&SpanModel, d).unwrap();
        prop_assert_eq!(
            reference.trace.len(),
            reference.certificate.scheme.len()
        );
        let p = find_presentation(&d.shape.anchored).unwrap();
        let mut rng = trial_rng(seed, 1);
        for strategy in Extension::ALL {
            if let Ok(cert) = alternate_certificate(&d.shape, &p, strategy, &mut rng) {
                let other = compose(&SpanModel, d, &cert).unwrap();
                prop_assert!(SpanModel.two_cells_equal(&other.value, &reference.value), "{:?}", strategy);
            }
        }
    }

    #[test]
    fn associator_chains_between_the_same_bracketings_agree(
        seed in any::<u64>(),
        (from, to) in (3usize..=5).prop_flat_map(|n| {
            let all = enumerate_bracketings(n).unwrap();
            let k = all.len();
            (0..k, 0..k).prop_map(move |(i, j)| (all[i].clone(), all[j].clone()))
        }),
    ) {
        let mut rng = trial_rng(seed, 0);
        let objects: Vec<_> = (0..=from.len())
            .map(|i| SpanModel.random_object(&mut rng, &format!("X{i}"), 2))
            .collect();
        let cells: Vec<_> = objects
            .windows(2)
            .map(|w| SpanModel.random_one_cell(&mut rng, &w[0], &w[1], 2))
            .collect();
        let canonical = associator_chain(&from, &to).unwrap();
        let short = shortest_chain(&from, &to).unwrap();
        let mut detour = canonical.clone();
        if let Some(m) = to.available_moves().first() {
            detour.push(m.clone());
            detour.push(m.inverse());
        }
        let a = associator_composite(&SpanModel, &cells, &from, &canonical).unwrap();
        let b = associator_composite(&SpanModel, &cells, &from, &short).unwrap();
        let c = associator_composite(&SpanModel, &cells, &from, &detour).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(&a, &c);
        if from == to {
            prop_assert_eq!(&a, &SpanModel.identity_two(SpanModel.cell_source(&a)));
        }

        let dims: Vec<usize> = cells.iter().map(|s| s.apex().len().max(1)).collect();
        let m = NatMatrixModel::new();
        let total: usize = dims.iter().sum();
        let strict = associator_composite(&m, &dims, &from, &canonical).unwrap();
        prop_assert_eq!(to_rows(strict.matrix()), identity(total));
    }
}
