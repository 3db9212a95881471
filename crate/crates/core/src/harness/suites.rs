//! Uniqueness, coherence and presentation-independence checks, singly and as
//! seeded suites.

use std::fmt;

use rand::Rng;
use rayon::prelude::*;

use crate::bicategory::Bicategory;
use crate::bracketed::{extend_to_composition_scheme, ExtensionCertificate};
use crate::bracketing::{
    associator_chain, enumerate_bracketings, shortest_chain, AssocMove, Bracketing,
};
use crate::diagram::{associator_composite, compose, PastingDiagram};
use crate::format::{print, DiagramDocument};
use crate::scheme::{enumerate_presentations, MAX_ENUMERATION_FACES};

use super::{
    alternate_certificate, random_pasting_diagram, trial_rng, DiagramSampling, GeneratorConfig,
    HarnessError, Strategy,
};

/// Outcome of composing one diagram along several extensions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UniquenessVerdict {
    pub certificates: usize,
    pub comparisons: usize,
    pub failures: Vec<String>,
}

impl UniquenessVerdict {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Composes `d` along every certificate and compares all pairs of
/// composites. Failure messages carry both traces.
pub fn check_uniqueness<B: Bicategory>(
    model: &B,
    d: &PastingDiagram<B>,
    certs: &[(String, ExtensionCertificate)],
) -> UniquenessVerdict {
    let mut verdict = UniquenessVerdict {
        certificates: certs.len(),
        ..UniquenessVerdict::default()
    };
    let mut results = Vec::new();
    for (label, cert) in certs {
        match compose(model, d, cert) {
            Ok(r) => results.push((label, r)),
            Err(e) => verdict
                .failures
                .push(format!("{label}: composite failed: {e}")),
        }
    }
    for i in 0..results.len() {
        for j in i + 1..results.len() {
            verdict.comparisons += 1;
            let (a, b) = (&results[i], &results[j]);
            if !model.two_cells_equal(&a.1.value, &b.1.value) {
                verdict.failures.push(format!(
                    "{} and {} disagree\n{}: {:?}\n  trace {:?}\n{}: {:?}\n  trace {:?}",
                    a.0, b.0, a.0, a.1.value, a.1.trace, b.0, b.1.value, b.1.trace
                ));
            }
        }
    }
    verdict
}

/// Evaluates two associator chains from `from` on a path carrying `cells`,
/// after checking that both end at `to`, and reports whether the composites
/// agree.
pub fn check_maclane_instance<B: Bicategory>(
    model: &B,
    cells: &[B::OneCell],
    from: &Bracketing,
    to: &Bracketing,
    first: &[AssocMove],
    second: &[AssocMove],
) -> Result<bool, HarnessError> {
    for chain in [first, second] {
        if &from.apply_moves(chain)? != to {
            return Err(HarnessError::ChainEndpoints {
                from: from.clone(),
                to: to.clone(),
            });
        }
    }
    let a = associator_composite(model, cells, from, first)?;
    let b = associator_composite(model, cells, from, second)?;
    Ok(model.two_cells_equal(&a, &b))
}

/// A failed case with what is needed to replay it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FailureReport {
    pub seed: u64,
    pub trial: u64,
    pub message: String,
    /// The diagram shape in the text format, when there is one.
    pub diagram: Option<String>,
}

impl fmt::Display for FailureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "seed {} trial {}: {}",
            self.seed, self.trial, self.message
        )?;
        if let Some(d) = &self.diagram {
            write!(f, "\n{d}")?;
        }
        Ok(())
    }
}

/// Summary of a suite run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub checks: usize,
    pub failures: Vec<FailureReport>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn merge(name: &'static str, outcomes: Vec<Outcome>) -> Self {
        let mut report = SuiteReport {
            name,
            cases: outcomes.len(),
            checks: 0,
            failures: Vec::new(),
        };
        for o in outcomes {
            report.checks += o.checks;
            report.failures.extend(o.failures);
        }
        report
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "pass" } else { "FAIL" };
        write!(
            f,
            "{}: {verdict} ({} cases, {} checks, {} failures)",
            self.name,
            self.cases,
            self.checks,
            self.failures.len()
        )
    }
}

#[derive(Default)]
struct Outcome {
    checks: usize,
    failures: Vec<FailureReport>,
}

impl Outcome {
    fn failure(seed: u64, trial: u64, message: String, diagram: Option<String>) -> Self {
        Self {
            checks: 1,
            failures: vec![FailureReport {
                seed,
                trial,
                message,
                diagram,
            }],
        }
    }
}

fn shape_text<B: Bicategory>(d: &PastingDiagram<B>, trial: u64) -> String {
    print(&DiagramDocument::from_bracketed(
        &format!("trial{trial}"),
        &d.shape,
    ))
}

/// Composes `cfg.trials` random diagrams along the canonical, redundant-pair,
/// shortest-route and (when the graph has another presentation) reordered
/// extensions, and compares the composites.
pub fn uniqueness_suite<B: DiagramSampling + Sync>(
    model: &B,
    cfg: &GeneratorConfig,
) -> Result<SuiteReport, HarnessError> {
    cfg.validate()?;
    let outcomes = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|trial| {
            let generated = match random_pasting_diagram(cfg, model, trial) {
                Ok(g) => g,
                Err(e) => {
                    return Outcome::failure(
                        cfg.seed,
                        trial,
                        format!("generation failed: {e}"),
                        None,
                    )
                }
            };
            let d = &generated.diagram;
            let mut rng = trial_rng(cfg.seed.wrapping_add(1), trial);
            let mut certs = Vec::new();
            for strategy in Strategy::ALL {
                match alternate_certificate(&d.shape, &generated.presentation, strategy, &mut rng) {
                    Ok(c) => certs.push((strategy.name().to_owned(), c)),
                    Err(HarnessError::Inapplicable { .. }) => {}
                    Err(e) => {
                        return Outcome::failure(
                            cfg.seed,
                            trial,
                            format!("{strategy} extension failed: {e}"),
                            Some(shape_text(d, trial)),
                        )
                    }
                }
            }
            if certs.len() < 2 {
                return Outcome::failure(
                    cfg.seed,
                    trial,
                    "fewer than two extensions".into(),
                    Some(shape_text(d, trial)),
                );
            }
            let v = check_uniqueness(model, d, &certs);
            Outcome {
                checks: v.comparisons,
                failures: v
                    .failures
                    .into_iter()
                    .map(|message| FailureReport {
                        seed: cfg.seed,
                        trial,
                        message,
                        diagram: Some(shape_text(d, trial)),
                    })
                    .collect(),
            }
        })
        .collect();
    Ok(SuiteReport::merge("uniqueness", outcomes))
}

/// For every length up to `max_len` and every pair of bracketings of that
/// length, compares the canonical and shortest chains, and the canonical
/// chain against itself padded with a move and its inverse, on `skeletons`
/// random paths.
pub fn maclane_suite<B: DiagramSampling + Sync>(
    model: &B,
    seed: u64,
    max_len: usize,
    skeletons: usize,
    max_object_size: usize,
) -> Result<SuiteReport, HarnessError> {
    let jobs: Vec<(usize, usize)> = (1..=max_len)
        .flat_map(|n| (0..skeletons).map(move |s| (n, s)))
        .collect();
    let outcomes = jobs
        .into_par_iter()
        .map(|(n, s)| {
            let trial = (n * 10_000 + s) as u64;
            let mut rng = trial_rng(seed, trial);
            let objects: Vec<B::Object> = (0..=n)
                .map(|i| model.random_object(&mut rng, &format!("X{i}"), max_object_size))
                .collect();
            let cells: Vec<B::OneCell> = (0..n)
                .map(|i| {
                    model.random_one_cell(&mut rng, &objects[i], &objects[i + 1], max_object_size)
                })
                .collect();
            let shapes = enumerate_bracketings(n).expect("small length");
            let mut out = Outcome::default();
            for from in &shapes {
                for to in &shapes {
                    let mut run = |label: &str, a: &[AssocMove], b: &[AssocMove]| {
                        out.checks += 1;
                        let message = match check_maclane_instance(model, &cells, from, to, a, b) {
                            Ok(true) => return,
                            Ok(false) => format!("{label} chains disagree"),
                            Err(e) => format!("{label}: {e}"),
                        };
                        out.failures.push(FailureReport {
                            seed,
                            trial,
                            message: format!("length {n}, {from} to {to}: {message}"),
                            diagram: None,
                        });
                    };
                    let (canonical, shortest) =
                        match (associator_chain(from, to), shortest_chain(from, to)) {
                            (Ok(a), Ok(b)) => (a, b),
                            (Err(e), _) | (_, Err(e)) => {
                                run(&format!("chain construction failed: {e}"), &[], &[]);
                                continue;
                            }
                        };
                    run("canonical and shortest", &canonical, &shortest);
                    let moves = to.available_moves();
                    if !moves.is_empty() {
                        let m = &moves[rng.gen_range(0..moves.len())];
                        let mut padded = canonical.clone();
                        padded.push(m.clone());
                        padded.push(m.inverse());
                        run("canonical and padded", &canonical, &padded);
                    }
                }
            }
            out
        })
        .collect();
    Ok(SuiteReport::merge("mac lane", outcomes))
}

/// Composes each random diagram along the canonical extension of every one of
/// its presentations and compares the composites.
pub fn presentation_suite<B: DiagramSampling + Sync>(
    model: &B,
    cfg: &GeneratorConfig,
) -> Result<SuiteReport, HarnessError> {
    cfg.validate()?;
    let outcomes = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|trial| {
            let generated = match random_pasting_diagram(cfg, model, trial) {
                Ok(g) => g,
                Err(e) => {
                    return Outcome::failure(
                        cfg.seed,
                        trial,
                        format!("generation failed: {e}"),
                        None,
                    )
                }
            };
            let d = &generated.diagram;
            let fail = |message: String| {
                Outcome::failure(cfg.seed, trial, message, Some(shape_text(d, trial)))
            };
            let presentations =
                match enumerate_presentations(&d.shape.anchored, MAX_ENUMERATION_FACES) {
                    Ok(ps) if !ps.is_empty() => ps,
                    Ok(_) => return fail("no presentation found".into()),
                    Err(e) => return fail(format!("enumeration failed: {e}")),
                };
            let mut certs = Vec::new();
            for p in &presentations {
                match extend_to_composition_scheme(&d.shape, p) {
                    Ok(c) => {
                        let order: Vec<&str> = p.faces.iter().map(|f| f.as_str()).collect();
                        certs.push((order.join(" "), c));
                    }
                    Err(e) => return fail(format!("extension failed: {e}")),
                }
            }
            if certs.len() == 1 {
                return match compose(model, d, &certs[0].1) {
                    Ok(_) => Outcome {
                        checks: 1,
                        failures: Vec::new(),
                    },
                    Err(e) => fail(format!("composite failed: {e}")),
                };
            }
            let v = check_uniqueness(model, d, &certs);
            Outcome {
                checks: v.comparisons,
                failures: v
                    .failures
                    .into_iter()
                    .map(|message| FailureReport {
                        seed: cfg.seed,
                        trial,
                        message,
                        diagram: Some(shape_text(d, trial)),
                    })
                    .collect(),
            }
        })
        .collect();
    Ok(SuiteReport::merge("presentations", outcomes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bicategory::span::SpanModel;
    use crate::NatMatrixModel;

    #[test]
    fn small_suites_pass() {
        let cfg = GeneratorConfig {
            trials: 8,
            ..GeneratorConfig::default()
        };
        assert!(uniqueness_suite(&SpanModel, &cfg).unwrap().passed());
        assert!(presentation_suite(&NatMatrixModel::new(), &cfg)
            .unwrap()
            .passed());
        let r = maclane_suite(&SpanModel, 3, 4, 2, 3).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r.cases, 8);
    }

    #[test]
    fn mismatched_chains_are_rejected() {
        let from: Bracketing = "(--)-".parse().unwrap();
        let to: Bracketing = "-(--)".parse().unwrap();
        let cells = vec![1usize, 2, 3];
        let err = check_maclane_instance(&NatMatrixModel::new(), &cells, &from, &to, &[], &[])
            .unwrap_err();
        assert!(matches!(err, HarnessError::ChainEndpoints { .. }));
    }
}
