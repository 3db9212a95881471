//! Checks of the bicategory laws on random composable samples.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;

use super::{Bicategory, ModelError, Sampling};

/// Composable cells: `f : V → W`, `g : W → X`, `h : X → Y`, `k : Y → Z`, a chain
/// `α1, α2, α3` of 2-cells starting at `f`, a chain `β1, β2` starting at `g`,
/// and `γ` starting at `h`.
#[derive(Clone, Debug)]
pub struct AxiomSample<B: Bicategory> {
    pub f: B::OneCell,
    pub g: B::OneCell,
    pub h: B::OneCell,
    pub k: B::OneCell,
    pub alphas: [B::TwoCell; 3],
    pub betas: [B::TwoCell; 2],
    pub gamma: B::TwoCell,
}

pub fn random_sample<B: Sampling, R: Rng + ?Sized>(
    model: &B,
    rng: &mut R,
    max_size: usize,
) -> AxiomSample<B> {
    let objects: Vec<B::Object> = ["V", "W", "X", "Y", "Z"]
        .iter()
        .map(|n| model.random_object(rng, n, max_size))
        .collect();
    let one =
        |rng: &mut R, i: usize| model.random_one_cell(rng, &objects[i], &objects[i + 1], max_size);
    let f = one(rng, 0);
    let g = one(rng, 1);
    let h = one(rng, 2);
    let k = one(rng, 3);
    let (f2, a1) = model.random_two_cell_from(rng, &f, max_size);
    let (f3, a2) = model.random_two_cell_from(rng, &f2, max_size);
    let (_, a3) = model.random_two_cell_from(rng, &f3, max_size);
    let (g2, b1) = model.random_two_cell_from(rng, &g, max_size);
    let (_, b2) = model.random_two_cell_from(rng, &g2, max_size);
    let (_, gamma) = model.random_two_cell_from(rng, &h, max_size);
    AxiomSample {
        f,
        g,
        h,
        k,
        alphas: [a1, a2, a3],
        betas: [b1, b2],
        gamma,
    }
}

pub const LAWS: [&str; 10] = [
    "hom associativity",
    "hom unit",
    "identity interchange",
    "middle four",
    "unity",
    "pentagon",
    "associator naturality",
    "left unitor naturality",
    "right unitor naturality",
    "invertibility",
];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, Default)]
pub struct AxiomReport {
    pub laws: BTreeMap<&'static str, Tally>,
    pub samples: usize,
    pub failures: Vec<String>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.laws.values().all(|t| t.failed == 0)
    }

    pub fn checks(&self) -> usize {
        self.laws.values().map(|t| t.passed + t.failed).sum()
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} samples", self.samples)?;
        for (law, t) in &self.laws {
            writeln!(f, "  {law}: {} passed, {} failed", t.passed, t.failed)?;
        }
        Ok(())
    }
}

/// Evaluates both sides of every law on one sample.
pub fn check_sample<B: Bicategory>(
    model: &B,
    s: &AxiomSample<B>,
) -> Vec<(&'static str, Result<bool, ModelError>)> {
    let m = model;
    let eq = |a: &B::TwoCell, b: &B::TwoCell| m.two_cells_equal(a, b);
    let v = |b: &B::TwoCell, a: &B::TwoCell| m.compose_vertical(b, a);
    let hz = |b: &B::TwoCell, a: &B::TwoCell| m.compose_horizontal(b, a);
    let id = |f: &B::OneCell| m.identity_two(f);
    let [a1, a2, a3] = &s.alphas;
    let [b1, b2] = &s.betas;
    let (f, g, h, k) = (&s.f, &s.g, &s.h, &s.k);
    let tgt = |a: &B::TwoCell| m.cell_target(a).clone();

    let hom_assoc = || Ok(eq(&v(&v(a3, a2)?, a1)?, &v(a3, &v(a2, a1)?)?));
    let hom_unit = || Ok(eq(&v(a1, &id(f))?, a1) && eq(&v(&id(&tgt(a1)), a1)?, a1));
    let identity_interchange = || Ok(eq(&hz(&id(g), &id(f))?, &id(&m.compose_one(g, f)?)));
    let middle_four = || {
        Ok(eq(
            &hz(&v(b2, b1)?, &v(a2, a1)?)?,
            &v(&hz(b2, a2)?, &hz(b1, a1)?)?,
        ))
    };
    let unity = || {
        let w = m.identity_one(m.target(f));
        let lhs = v(&hz(&id(g), &m.left_unitor(f)?)?, &m.associator(f, &w, g)?)?;
        let rhs = hz(&m.right_unitor(g)?, &id(f))?;
        Ok(eq(&lhs, &rhs))
    };
    let pentagon = || {
        let gf = m.compose_one(g, f)?;
        let kh = m.compose_one(k, h)?;
        let hg = m.compose_one(h, g)?;
        let lhs = v(&m.associator(&gf, h, k)?, &m.associator(f, g, &kh)?)?;
        let rhs = v(
            &hz(&id(k), &m.associator(f, g, h)?)?,
            &v(
                &m.associator(f, &hg, k)?,
                &hz(&m.associator(g, h, k)?, &id(f))?,
            )?,
        )?;
        Ok(eq(&lhs, &rhs))
    };
    let assoc_nat = || {
        let gamma = &s.gamma;
        let lhs = v(
            &m.associator(&tgt(a1), &tgt(b1), &tgt(gamma))?,
            &hz(&hz(gamma, b1)?, a1)?,
        )?;
        let rhs = v(&hz(gamma, &hz(b1, a1)?)?, &m.associator(f, g, h)?)?;
        Ok(eq(&lhs, &rhs))
    };
    let left_nat = || {
        let w = m.identity_one(m.target(f));
        let lhs = v(&m.left_unitor(&tgt(a1))?, &hz(&id(&w), a1)?)?;
        let rhs = v(a1, &m.left_unitor(f)?)?;
        Ok(eq(&lhs, &rhs))
    };
    let right_nat = || {
        let u = m.identity_one(m.source(f));
        let lhs = v(&m.right_unitor(&tgt(a1))?, &hz(a1, &id(&u))?)?;
        let rhs = v(a1, &m.right_unitor(f)?)?;
        Ok(eq(&lhs, &rhs))
    };
    let invertible = || {
        let a = m.associator(f, g, h)?;
        let ai = m.associator_inverse(f, g, h)?;
        let l = m.left_unitor(f)?;
        let li = m.left_unitor_inverse(f)?;
        let r = m.right_unitor(f)?;
        let ri = m.right_unitor_inverse(f)?;
        let src = |x: &B::TwoCell| id(m.cell_source(x));
        Ok(eq(&v(&ai, &a)?, &src(&a))
            && eq(&v(&a, &ai)?, &src(&ai))
            && eq(&v(&li, &l)?, &src(&l))
            && eq(&v(&l, &li)?, &src(&li))
            && eq(&v(&ri, &r)?, &src(&r))
            && eq(&v(&r, &ri)?, &src(&ri)))
    };
    vec![
        (LAWS[0], hom_assoc()),
        (LAWS[1], hom_unit()),
        (LAWS[2], identity_interchange()),
        (LAWS[3], middle_four()),
        (LAWS[4], unity()),
        (LAWS[5], pentagon()),
        (LAWS[6], assoc_nat()),
        (LAWS[7], left_nat()),
        (LAWS[8], right_nat()),
        (LAWS[9], invertible()),
    ]
}

/// Runs every law on each sample and tallies the outcomes.
pub fn check_axioms<B: Bicategory>(model: &B, samples: &[AxiomSample<B>]) -> AxiomReport {
    let mut report = AxiomReport {
        samples: samples.len(),
        ..AxiomReport::default()
    };
    for law in LAWS {
        report.laws.insert(law, Tally::default());
    }
    for (i, s) in samples.iter().enumerate() {
        for (law, outcome) in check_sample(model, s) {
            let tally = report.laws.get_mut(law).expect("known law");
            match outcome {
                Ok(true) => tally.passed += 1,
                Ok(false) => {
                    tally.failed += 1;
                    report.failures.push(format!("sample {i}: {law} fails"));
                }
                Err(e) => {
                    tally.failed += 1;
                    report
                        .failures
                        .push(format!("sample {i}: {law} could not be evaluated: {e}"));
                }
            }
        }
    }
    report
}
