//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the verdict lines appear in
//! `cargo test` output; exits non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::path::Path;
use std::time::{Duration, Instant};

use rand::Rng;

use pasting::bicategory::axioms::{check_axioms, random_sample};
use pasting::bracketed::{
    bracketed_isomorphism, check_extension, collapse, vertical_compose_bracketed, AssocForm,
    FactorKind,
};
use pasting::bracketing::enumerate_bracketings;
use pasting::diagram::compose;
use pasting::fixtures;
use pasting::format::{self, DiagramDocument};
use pasting::graph::anchored_isomorphism;
use pasting::harness::{
    alternate_certificate, maclane_suite, presentation_suite, random_bracketed_graph, trial_rng,
    uniqueness_suite, GeneratorConfig, Strategy, SuiteReport,
};
use pasting::scheme::{enumerate_presentations, find_presentation, MAX_ENUMERATION_FACES};
use pasting::{
    AnchoredGraph, Bicategory, BracketedGraph, Bracketing, EdgeId, FaceId, NatMatrixModel,
    RationalMatrixModel, SpanModel,
};

type Verdict = Result<String, String>;

const SEED: u64 = 20_240_601;

fn examples_dir() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/examples"))
}

fn read_example(name: &str) -> String {
    std::fs::read_to_string(examples_dir().join(name)).expect("shipped example")
}

fn ensure(cond: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(message())
    }
}

fn suite_verdict(r: &SuiteReport) -> Result<(), String> {
    ensure(r.passed(), || {
        let first = r
            .failures
            .first()
            .map(|f| f.to_string())
            .unwrap_or_default();
        format!("{r}; first failure: {first}")
    })
}

/// Runs the CLI in-process and returns stdout and the exit code.
fn cli(args: &[&str]) -> (String, i32) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["pasting"];
    full.extend_from_slice(args);
    let code = pasting_cli::run(full, &mut out, &mut err);
    (String::from_utf8(out).unwrap(), code)
}

// Independent oracles.

/// All full parenthesizations of `n` dashes, built by splitting at every
/// position.
fn bracketing_oracle(n: usize) -> Vec<String> {
    if n == 1 {
        return vec!["-".into()];
    }
    let mut out = Vec::new();
    for k in 1..n {
        for l in bracketing_oracle(k) {
            for r in bracketing_oracle(n - k) {
                out.push(format!("({l}{r})"));
            }
        }
    }
    out
}

fn fully_parenthesized(b: &Bracketing) -> String {
    match b {
        Bracketing::Empty => String::new(),
        Bracketing::Dash => "-".into(),
        Bracketing::Pair(l, r) => format!("({}{})", fully_parenthesized(l), fully_parenthesized(r)),
    }
}

fn catalan(n: usize) -> usize {
    // C(n-1) for n dashes, from the recurrence.
    let mut c = vec![1usize; n.max(1)];
    for m in 1..n {
        c[m] = (0..m).map(|i| c[i] * c[m - 1 - i]).sum();
    }
    c[n - 1]
}

/// `V - E + F = 2` counting the exterior face, computed from the raw data.
fn euler_holds(g: &AnchoredGraph) -> bool {
    let v = g.graph.vertices.len() as i64;
    let e = g.graph.edges.len() as i64;
    let f = g.faces.len() as i64 + 1;
    v - e + f == 2
}

fn contains_segment(path: &[EdgeId], segment: &[EdgeId]) -> bool {
    !segment.is_empty() && path.windows(segment.len()).any(|w| w == segment)
}

/// Containment of the face boundaries in the global boundaries of an atomic
/// graph.
fn atomic_containments(g: &AnchoredGraph) -> Result<(), String> {
    ensure(g.faces.len() == 1, || format!("{} faces", g.faces.len()))?;
    let face = g.faces.values().next().unwrap();
    ensure(contains_segment(&g.exterior.domain, &face.domain), || {
        "domain not contained".into()
    })?;
    ensure(
        contains_segment(&g.exterior.codomain, &face.codomain),
        || "codomain not contained".into(),
    )?;
    ensure(g.is_atomic() == Ok(true), || "is_atomic disagrees".into())
}

fn generator(max_faces: usize, max_path_len: usize, trials: usize) -> GeneratorConfig {
    GeneratorConfig {
        seed: SEED,
        max_faces,
        max_path_len,
        max_object_size: 3,
        trials,
    }
}

// Criteria.

fn golden_example() -> Verdict {
    let start = Instant::now();
    let doc = format::parse(&read_example("running.paste")).map_err(|e| e.to_string())?;
    let g = doc.bracketed_graph().map_err(|e| e.to_string())?;
    let p = find_presentation(&g.anchored).map_err(|e| e.to_string())?;
    let cert = alternate_certificate(&g, &p, Strategy::Canonical, &mut trial_rng(0, 0))
        .map_err(|e| e.to_string())?;
    check_extension(&cert, &g).map_err(|e| e.to_string())?;
    ensure(cert.scheme.len() == 5, || {
        format!("{} factors", cert.scheme.len())
    })?;
    let forms: Vec<AssocForm> = cert
        .kinds()
        .into_iter()
        .filter_map(|k| match k {
            FactorKind::Associator(f) => Some(f),
            FactorKind::Face(_) => None,
        })
        .collect();
    ensure(forms == [AssocForm::Form1, AssocForm::Form2], || {
        format!("associativity forms {forms:?}")
    })?;

    let block =
        format::parse_assignments(&read_example("running.span")).map_err(|e| e.to_string())?;
    let d = doc.span_diagram(Some(&block)).map_err(|e| e.to_string())?;
    let m = SpanModel;
    let composite = compose(&m, &d, &cert).map_err(|e| e.to_string())?.value;

    // (1_g2 * theta3) . a(h1, h3, g2) . (theta2 * 1_h1) . a^-1(h1, h2, f2) . (1_f2 * theta1)
    let one = |e: &str| d.one_cells[&EdgeId::from(e)].clone();
    let two = |f: &str| d.two_cells[&FaceId::from(f)].clone();
    let (f2, g2, h1, h2, h3) = (one("f2"), one("g2"), one("h1"), one("h2"), one("h3"));
    let step = || -> Result<_, pasting::ModelError> {
        let c1 = m.compose_horizontal(&m.identity_two(&f2), &two("theta1"))?;
        let c2 = m.associator_inverse(&h1, &h2, &f2)?;
        let c3 = m.compose_horizontal(&two("theta2"), &m.identity_two(&h1))?;
        let c4 = m.associator(&h1, &h3, &g2)?;
        let c5 = m.compose_horizontal(&m.identity_two(&g2), &two("theta3"))?;
        [c2, c3, c4, c5]
            .iter()
            .try_fold(c1, |acc, c| m.compose_vertical(c, &acc))
    };
    let hand = step().map_err(|e| e.to_string())?;
    ensure(composite.table() == hand.table(), || {
        "composite differs from the hand-coded composite".into()
    })?;
    ensure(m.two_cells_equal(&composite, &hand), || {
        "cells differ".into()
    })?;

    let (text, code) = cli(&[
        "extend",
        examples_dir().join("running.paste").to_str().unwrap(),
    ]);
    ensure(code == 0, || format!("extend exited {code}"))?;
    let tags: Vec<&str> = text
        .lines()
        .filter_map(|l| {
            l.trim_start()
                .split_once(". ")
                .and_then(|(_, rest)| rest.split_whitespace().next())
        })
        .collect();
    ensure(tags == ["theta1", "a^-1", "theta2", "a", "theta3"], || {
        format!("extend tags {tags:?}")
    })?;
    let span = examples_dir().join("running.span");
    let (_, code) = cli(&[
        "eval",
        examples_dir().join("running.paste").to_str().unwrap(),
        "--model",
        "span",
        "--assignments",
        span.to_str().unwrap(),
    ]);
    ensure(code == 0, || format!("eval exited {code}"))?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(1), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "5 factors, a^-1 then a, composite over {} apex elements matches, {elapsed:.0?}",
        hand.dom().apex().len()
    ))
}

fn uniqueness() -> Verdict {
    let start = Instant::now();
    let cfg = generator(5, 5, 200);
    let r = uniqueness_suite(&SpanModel, &cfg).map_err(|e| e.to_string())?;
    suite_verdict(&r)?;
    ensure(r.cases == 200, || format!("{} cases", r.cases))?;
    ensure(r.checks >= 200, || format!("only {} comparisons", r.checks))?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "{} diagrams, {} pairwise comparisons, {elapsed:.1?}",
        r.cases, r.checks
    ))
}

fn maclane() -> Verdict {
    let expected = [1, 1, 2, 5, 14];
    for n in 1..=5 {
        let library: Vec<String> = enumerate_bracketings(n)
            .map_err(|e| e.to_string())?
            .iter()
            .map(fully_parenthesized)
            .collect();
        let lib_set: BTreeSet<_> = library.iter().cloned().collect();
        let oracle: BTreeSet<_> = bracketing_oracle(n).into_iter().collect();
        ensure(library.len() == lib_set.len(), || {
            format!("duplicates at length {n}")
        })?;
        ensure(lib_set == oracle, || {
            format!("length {n}: enumeration differs from the oracle")
        })?;
        ensure(
            library.len() == expected[n - 1] && catalan(n) == expected[n - 1],
            || format!("length {n}: {} bracketings", library.len()),
        )?;
    }
    ensure(
        bracketing_oracle(3).len() == 2 && bracketing_oracle(4).len() == 5,
        || "lengths 3 and 4".into(),
    )?;
    let r = maclane_suite(&SpanModel, SEED, 5, 20, 3).map_err(|e| e.to_string())?;
    suite_verdict(&r)?;
    let pairs: usize = expected.iter().map(|c| c * c).sum();
    ensure(r.cases == 100, || format!("{} skeletons", r.cases))?;
    ensure(r.checks >= pairs * 20, || {
        format!("{} checks for {pairs} pairs", r.checks)
    })?;
    Ok(format!(
        "Catalan 1,1,2,5,14; {pairs} bracket pairs on 20 skeletons each, {} checks",
        r.checks
    ))
}

fn presentations() -> Verdict {
    let cfg = generator(5, 5, 200);
    let r = presentation_suite(&NatMatrixModel::new(), &cfg).map_err(|e| e.to_string())?;
    suite_verdict(&r)?;
    let mut multi = 0;
    for trial in 0..cfg.trials as u64 {
        let (g, _) = random_bracketed_graph(&cfg, &mut trial_rng(cfg.seed, trial))
            .map_err(|e| e.to_string())?;
        if enumerate_presentations(&g.anchored, MAX_ENUMERATION_FACES)
            .map_err(|e| e.to_string())?
            .len()
            > 1
        {
            multi += 1;
        }
    }
    ensure(multi > 0, || {
        "no generated graph has two presentations".into()
    })?;
    Ok(format!(
        "{} graphs ({multi} with several presentations), {} comparisons",
        r.cases, r.checks
    ))
}

fn axioms() -> Verdict {
    const SAMPLES: u64 = 500;
    let span: Vec<_> = (0..SAMPLES)
        .map(|i| random_sample(&SpanModel, &mut trial_rng(SEED, i), 3))
        .collect();
    let sr = check_axioms(&SpanModel, &span);
    ensure(sr.all_passed(), || {
        format!("span: {}", sr.failures.join("; "))
    })?;
    let nat = NatMatrixModel::new();
    let nats: Vec<_> = (0..SAMPLES)
        .map(|i| random_sample(&nat, &mut trial_rng(SEED + 1, i), 3))
        .collect();
    let nr = check_axioms(&nat, &nats);
    ensure(nr.all_passed(), || {
        format!("matrix: {}", nr.failures.join("; "))
    })?;
    let rat = RationalMatrixModel::new();
    let rats: Vec<_> = (0..SAMPLES)
        .map(|i| random_sample(&rat, &mut trial_rng(SEED + 2, i), 3))
        .collect();
    let rr = check_axioms(&rat, &rats);
    ensure(rr.all_passed(), || {
        format!("rational matrix: {}", rr.failures.join("; "))
    })?;
    Ok(format!(
        "{} laws; span {} checks, natural matrix {} checks, rational matrix {} checks",
        sr.laws.len(),
        sr.checks(),
        nr.checks(),
        rr.checks()
    ))
}

fn compose_all(parts: &[AnchoredGraph]) -> AnchoredGraph {
    let mut it = parts.iter();
    let first = it.next().unwrap().clone();
    it.fold(first, |acc, g| {
        acc.vertical_compose(g).expect("adjacent factors compose")
    })
}

fn structural() -> Verdict {
    let mut graphs: Vec<AnchoredGraph> = vec![
        fixtures::atomic_example(),
        fixtures::bigon(),
        fixtures::running_example_graph(),
        fixtures::side_by_side_graph(),
        fixtures::obstruction_graph(),
    ];
    let mut atomic: Vec<AnchoredGraph> = vec![fixtures::atomic_example(), fixtures::bigon()];
    let cfg = generator(7, 6, 100);
    let (mut triples, mut bracketed_triples, mut round_trips, mut sub_collapses) = (0, 0, 0, 0);
    for trial in 0..cfg.trials as u64 {
        let mut rng = trial_rng(SEED + 7, trial);
        let (g, p) = random_bracketed_graph(&cfg, &mut rng).map_err(|e| e.to_string())?;
        graphs.push(g.anchored.clone());
        graphs.extend(p.factors.iter().cloned());
        atomic.extend(p.factors.iter().cloned());

        // Extend, collapse, recognize.
        let canonical = alternate_certificate(&g, &p, Strategy::Canonical, &mut rng)
            .map_err(|e| e.to_string())?;
        let mut certs = vec![canonical];
        if let Ok(c) = alternate_certificate(&g, &p, Strategy::RedundantPair, &mut rng) {
            certs.push(c);
        }
        for cert in &certs {
            let full = collapse(&cert.scheme, &cert.assoc_indices).map_err(|e| e.to_string())?;
            ensure(bracketed_isomorphism(&full.graph, &g).is_some(), || {
                format!("trial {trial}: extend then collapse does not recover the graph")
            })?;
            round_trips += 1;
            let subset: Vec<usize> = cert
                .assoc_indices
                .iter()
                .copied()
                .filter(|_| rng.gen_bool(0.5))
                .collect();
            let partial = collapse(&cert.scheme, &subset).map_err(|e| e.to_string())?;
            let anchored = &partial.graph.anchored;
            ensure(anchored.validate().is_ok(), || {
                format!("trial {trial}: partial collapse is invalid")
            })?;
            ensure(find_presentation(anchored).is_ok(), || {
                format!("trial {trial}: partial collapse not recognized")
            })?;
            graphs.push(anchored.clone());
            graphs.push(cert.scheme.composite.anchored.clone());
            sub_collapses += 1;

            let factors = &cert.scheme.factors;
            if factors.len() >= 3 {
                let i = rng.gen_range(1..factors.len() - 1);
                let j = rng.gen_range(i + 1..factors.len());
                let fold = |fs: &[pasting::ConsistentGraph]| -> Result<BracketedGraph, String> {
                    let mut it = fs.iter();
                    let first = it.next().unwrap().graph.clone();
                    it.try_fold(first, |acc, f| vertical_compose_bracketed(&acc, &f.graph))
                        .map_err(|e| e.to_string())
                };
                let (a, b, c) = (
                    fold(&factors[..i])?,
                    fold(&factors[i..j])?,
                    fold(&factors[j..])?,
                );
                let left = vertical_compose_bracketed(
                    &vertical_compose_bracketed(&a, &b).map_err(|e| e.to_string())?,
                    &c,
                )
                .map_err(|e| e.to_string())?;
                let right = vertical_compose_bracketed(
                    &a,
                    &vertical_compose_bracketed(&b, &c).map_err(|e| e.to_string())?,
                )
                .map_err(|e| e.to_string())?;
                ensure(bracketed_isomorphism(&left, &right).is_some(), || {
                    format!("trial {trial}: bracketed composites differ")
                })?;
                bracketed_triples += 1;
            }
        }
    }
    // Associativity of vertical composition on random splits of presented
    // stacks with at least three faces.
    let stacks = generator(7, 6, 1);
    let mut trial = 0u64;
    while triples < 100 {
        trial += 1;
        ensure(trial < 10_000, || "too few stacks with three faces".into())?;
        let mut rng = trial_rng(SEED + 9, trial);
        let (g, p) = random_bracketed_graph(&stacks, &mut rng).map_err(|e| e.to_string())?;
        if p.len() < 3 {
            continue;
        }
        let i = rng.gen_range(1..p.len() - 1);
        let j = rng.gen_range(i + 1..p.len());
        let (a, b, c) = (
            compose_all(&p.factors[..i]),
            compose_all(&p.factors[i..j]),
            compose_all(&p.factors[j..]),
        );
        let left = a
            .vertical_compose(&b)
            .and_then(|ab| ab.vertical_compose(&c))
            .map_err(|e| e.to_string())?;
        let right = b
            .vertical_compose(&c)
            .and_then(|bc| a.vertical_compose(&bc))
            .map_err(|e| e.to_string())?;
        ensure(anchored_isomorphism(&left, &right).is_some(), || {
            format!("stack {trial}: (CB)A differs from C(BA)")
        })?;
        ensure(anchored_isomorphism(&left, &g.anchored).is_some(), || {
            format!("stack {trial}: composite differs")
        })?;
        graphs.extend([a, b, c, left, right]);
        triples += 1;
    }
    for (i, g) in graphs.iter().enumerate() {
        ensure(g.validate().is_ok(), || {
            format!("corpus graph {i} is invalid")
        })?;
        ensure(euler_holds(g), || {
            format!("Euler fails on corpus graph {i}")
        })?;
    }
    for (i, g) in atomic.iter().enumerate() {
        atomic_containments(g).map_err(|e| format!("atomic graph {i}: {e}"))?;
    }
    ensure(bracketed_triples >= 100, || {
        format!("only {bracketed_triples} bracketed triples")
    })?;
    ensure(round_trips >= 100 && sub_collapses >= 100, || {
        format!("only {round_trips} round trips")
    })?;
    Ok(format!(
        "Euler on {} graphs, containment on {} atomic graphs, {triples} anchored and {bracketed_triples} bracketed triples, {round_trips} round trips, {sub_collapses} partial collapses",
        graphs.len(),
        atomic.len()
    ))
}

fn confluence() -> Verdict {
    let mut corpus: Vec<(String, AnchoredGraph)> = vec![
        ("atomic".into(), fixtures::atomic_example()),
        ("bigon".into(), fixtures::bigon()),
        ("running".into(), fixtures::running_example_graph()),
        ("side by side".into(), fixtures::side_by_side_graph()),
        ("obstruction".into(), fixtures::obstruction_graph()),
    ];
    let mut entries: Vec<_> = std::fs::read_dir(examples_dir())
        .map_err(|e| e.to_string())?
        .collect();
    entries.sort_by_key(|e| e.as_ref().map(|e| e.path()).ok());
    for entry in entries {
        let path = entry.map_err(|e| e.to_string())?.path();
        if path.extension().is_some_and(|x| x == "paste") {
            let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
            let doc: DiagramDocument =
                format::parse(&text).map_err(|e| format!("{}: {e}", path.display()))?;
            let g = doc.bracketed_graph().map_err(|e| e.to_string())?;
            if g.anchored.validate().is_ok() {
                corpus.push((path.display().to_string(), g.anchored));
            }
        }
    }
    for max_faces in 1..=7 {
        let cfg = generator(max_faces, 6, 60);
        for trial in 0..cfg.trials as u64 {
            let (g, _) = random_bracketed_graph(&cfg, &mut trial_rng(SEED + 11, trial))
                .map_err(|e| e.to_string())?;
            corpus.push((format!("generated {max_faces}/{trial}"), g.anchored));
        }
    }
    let (mut schemes, mut non_schemes) = (0, 0);
    for (name, g) in &corpus {
        if g.faces.len() > MAX_ENUMERATION_FACES {
            continue;
        }
        let greedy = find_presentation(g);
        let all = enumerate_presentations(g, MAX_ENUMERATION_FACES)
            .map_err(|e| format!("{name}: {e}"))?;
        ensure(greedy.is_ok() == !all.is_empty(), || {
            format!(
                "{name}: greedy {} but {} presentations",
                greedy.is_ok(),
                all.len()
            )
        })?;
        if let Ok(p) = greedy {
            ensure(all.iter().any(|q| q.faces == p.faces), || {
                format!("{name}: greedy order not enumerated")
            })?;
            for q in &all {
                let composite = q.compose().map_err(|e| e.to_string())?;
                ensure(anchored_isomorphism(&composite, g).is_some(), || {
                    format!("{name}: presentation misassembles")
                })?;
            }
            schemes += 1;
        } else {
            non_schemes += 1;
        }
    }
    ensure(non_schemes > 0, || "no negative case in the corpus".into())?;
    Ok(format!(
        "{} graphs agree ({schemes} schemes, {non_schemes} non-schemes)",
        schemes + non_schemes
    ))
}

type Criterion = fn() -> Verdict;

fn main() {
    let criteria: [(&str, Criterion); 7] = [
        ("golden example", golden_example),
        ("uniqueness suite", uniqueness),
        ("Mac Lane suite", maclane),
        ("presentation independence", presentations),
        ("axiom suite", axioms),
        ("structural suites", structural),
        ("recognizer confluence", confluence),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS [{}] {name}: {detail}", i + 1),
            Err(reason) => {
                failed += 1;
                println!("FAIL [{}] {name}: {reason}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
