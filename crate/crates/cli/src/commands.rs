use std::fmt::Write as _;
use std::path::Path;

use serde_json::{json, Value};

use pasting::bracketed::{bracketed_text, check_extension, ExtensionCertificate, FactorKind};
use pasting::diagram::{compose, constituent_label, PastingDiagram};
use pasting::format::{DiagramDocument, ModelBlock};
use pasting::harness::{
    alternate_certificate, maclane_suite, presentation_suite, trial_rng, uniqueness_suite,
    DiagramSampling, GeneratorConfig, Strategy, SuiteReport,
};
use pasting::scheme::{
    enumerate_presentations, find_presentation, SchemeError, MAX_ENUMERATION_FACES,
};
use pasting::{BracketedGraph, NatMatrixModel, PastingSchemePresentation, SpanModel};

use crate::render::Render;
use crate::{
    load, load_assignments, Failure, ModelArg, Report, EXIT_INVALID, EXIT_OK, EXIT_VERIFY,
};

fn names<T: ToString>(items: &[T]) -> Vec<String> {
    items.iter().map(|x| x.to_string()).collect()
}

/// The document's bracketed graph, which must be a valid anchored graph.
fn valid_graph(doc: &DiagramDocument) -> Result<BracketedGraph, Failure> {
    let g = doc.bracketed_graph()?;
    let report = g.anchored.validate();
    if !report.is_ok() {
        return Err(Failure::invalid(format!(
            "invalid anchored graph: {report}"
        )));
    }
    Ok(g)
}

pub(crate) fn check(file: &Path) -> Result<Report, Failure> {
    let doc = load(file)?;
    let g = doc.bracketed_graph()?;
    let report = g.anchored.validate();
    let mut text = String::new();
    let file_name = file.display().to_string();
    if !report.is_ok() {
        let violations = names(&report.violations);
        writeln!(text, "{file_name}: invalid anchored graph").unwrap();
        for v in &violations {
            writeln!(text, "  {v}").unwrap();
        }
        return Ok(Report {
            text,
            json: json!({
                "file": file_name,
                "valid": false,
                "violations": violations,
                "pasting_scheme": false,
            }),
            code: EXIT_INVALID,
        });
    }
    let faces = g.anchored.faces.len();
    writeln!(
        text,
        "{file_name}: valid anchored graph with {faces} interior faces"
    )
    .unwrap();
    let (presentation, code) = match find_presentation(&g.anchored) {
        Ok(p) => {
            writeln!(
                text,
                "pasting scheme, faces in order: {}",
                names(&p.faces).join(" ")
            )
            .unwrap();
            (Some(p), EXIT_OK)
        }
        Err(e) => {
            writeln!(text, "{e}").unwrap();
            (None, EXIT_INVALID)
        }
    };
    let mut model = Value::Null;
    let mut code = code;
    if let (Some(block), Some(_)) = (&doc.model, &presentation) {
        let kind = block.kind().to_string();
        let outcome = match block {
            ModelBlock::Span(_) => doc.span_diagram(None).map(|_| ()),
            ModelBlock::Matrix(_) => doc.matrix_diagram(None).map(|_| ()),
        };
        match outcome {
            Ok(()) => {
                writeln!(text, "pasting diagram in the {kind} model").unwrap();
                model = json!({ "kind": kind, "ok": true });
            }
            Err(e) => {
                writeln!(text, "{kind} assignment rejected: {e}").unwrap();
                model = json!({ "kind": kind, "ok": false, "error": e.to_string() });
                code = EXIT_INVALID;
            }
        }
    }
    Ok(Report {
        text,
        json: json!({
            "file": file_name,
            "valid": true,
            "violations": [],
            "faces": faces,
            "pasting_scheme": presentation.is_some(),
            "presentation": presentation.as_ref().map(|p| names(&p.faces)),
            "reason": match &presentation {
                Some(_) => Value::Null,
                None => json!(find_presentation(&g.anchored).err().map(|e| e.to_string())),
            },
            "model": model,
        }),
        code,
    })
}

fn presentation_json(p: &PastingSchemePresentation) -> Value {
    json!({
        "order": names(&p.faces),
        "offsets": (0..p.len()).map(|i| p.offset(i)).collect::<Vec<_>>(),
        "frontiers": p.frontiers.iter().map(|f| names(&f.edges)).collect::<Vec<_>>(),
    })
}

pub(crate) fn schemes(file: &Path, all: bool) -> Result<Report, Failure> {
    let doc = load(file)?;
    let g = valid_graph(&doc)?;
    let presentations = if all {
        enumerate_presentations(&g.anchored, MAX_ENUMERATION_FACES)
            .map_err(|e| Failure::invalid(e.to_string()))?
    } else {
        match find_presentation(&g.anchored) {
            Ok(p) => vec![p],
            Err(SchemeError::NoInteriorFaces) => Vec::new(),
            Err(e) => return Err(Failure::invalid(e.to_string())),
        }
    };
    let mut text = String::new();
    if presentations.is_empty() {
        writeln!(text, "no pasting scheme presentations").unwrap();
    }
    for (i, p) in presentations.iter().enumerate() {
        writeln!(
            text,
            "presentation {}: {}",
            i + 1,
            names(&p.faces).join(" ")
        )
        .unwrap();
        for (k, f) in p.frontiers.iter().enumerate() {
            writeln!(text, "  frontier {k}: {}", names(&f.edges).join(" ")).unwrap();
        }
    }
    let code = if presentations.is_empty() {
        EXIT_INVALID
    } else {
        EXIT_OK
    };
    Ok(Report {
        text,
        json: json!({
            "file": file.display().to_string(),
            "all": all,
            "count": presentations.len(),
            "presentations": presentations.iter().map(presentation_json).collect::<Vec<_>>(),
        }),
        code,
    })
}

fn certificate_for(
    g: &BracketedGraph,
    strategy: Strategy,
    seed: u64,
) -> Result<ExtensionCertificate, Failure> {
    let p = find_presentation(&g.anchored).map_err(|e| Failure::invalid(e.to_string()))?;
    let cert = alternate_certificate(g, &p, strategy, &mut trial_rng(seed, 0))?;
    check_extension(&cert, g)
        .map_err(|e| Failure::invalid(format!("extension does not verify: {e}")))?;
    Ok(cert)
}

fn kind_json(kind: &FactorKind) -> (String, String) {
    match kind {
        FactorKind::Face(f) => ("face".into(), f.to_string()),
        FactorKind::Associator(form) => ("associator".into(), form.label().into()),
    }
}

pub(crate) fn extend(file: &Path, strategy: Strategy, seed: u64) -> Result<Report, Failure> {
    let doc = load(file)?;
    let g = valid_graph(&doc)?;
    let cert = certificate_for(&g, strategy, seed)?;
    let mut text = String::new();
    writeln!(
        text,
        "composition scheme with {} factors, {} inserted associativity faces ({strategy})",
        cert.scheme.len(),
        cert.associativity_count()
    )
    .unwrap();
    let mut factors = Vec::new();
    for (i, (factor, kind)) in cert.scheme.factors.iter().zip(cert.kinds()).enumerate() {
        let (kind_name, tag) = kind_json(&kind);
        let label = constituent_label(factor, &tag);
        let g = &factor.graph;
        let dom = bracketed_text(&g.shape_dom, &g.anchored.exterior.domain);
        let cod = bracketed_text(&g.shape_cod, &g.anchored.exterior.codomain);
        writeln!(
            text,
            "{:>3}. {tag:<8} {label}\n       {dom}  =>  {cod}",
            i + 1
        )
        .unwrap();
        factors.push(json!({
            "index": i + 1,
            "kind": kind_name,
            "tag": tag,
            "label": label,
            "domain": dom,
            "codomain": cod,
        }));
    }
    Ok(Report {
        text,
        json: json!({
            "file": file.display().to_string(),
            "strategy": strategy.name(),
            "factor_count": cert.scheme.len(),
            "associativity_indices": cert.assoc_indices.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "factors": factors,
        }),
        code: EXIT_OK,
    })
}

fn eval_in<B: Render>(
    model: &B,
    file: &Path,
    d: &PastingDiagram<B>,
    strategy: Strategy,
    seed: u64,
) -> Result<Report, Failure> {
    let report = d.shape.anchored.validate();
    if !report.is_ok() {
        return Err(Failure::invalid(format!(
            "invalid anchored graph: {report}"
        )));
    }
    let cert = certificate_for(&d.shape, strategy, seed)?;
    let result = compose(model, d, &cert).map_err(|e| Failure::invalid(e.to_string()))?;
    let mut text = String::new();
    let labels: Vec<&str> = result
        .trace
        .iter()
        .rev()
        .map(|t| t.label.as_str())
        .collect();
    writeln!(
        text,
        "composite ({} model, {strategy}) = {}",
        B::NAME,
        labels.join(" . ")
    )
    .unwrap();
    text.push_str(&model.cell_text(&result.value));
    let mut trace = Vec::new();
    for (i, t) in result.trace.iter().enumerate() {
        let (kind, tag) = kind_json(&t.kind);
        writeln!(text, "constituent {}: {}", i + 1, t.label).unwrap();
        text.push_str(&model.cell_text(&t.value));
        trace.push(json!({
            "index": i + 1,
            "kind": kind,
            "tag": tag,
            "label": t.label,
            "value": model.cell_json(&t.value),
        }));
    }
    Ok(Report {
        text,
        json: json!({
            "file": file.display().to_string(),
            "model": B::NAME,
            "strategy": strategy.name(),
            "composite": model.cell_json(&result.value),
            "trace": trace,
        }),
        code: EXIT_OK,
    })
}

pub(crate) fn eval(
    file: &Path,
    model: ModelArg,
    assignments: Option<&Path>,
    strategy: Strategy,
    seed: u64,
) -> Result<Report, Failure> {
    let doc = load(file)?;
    let block = assignments.map(load_assignments).transpose()?;
    match model {
        ModelArg::Span => {
            let d = doc.span_diagram(block.as_ref())?;
            eval_in(&SpanModel, file, &d, strategy, seed)
        }
        ModelArg::Matrix => {
            let d = doc.matrix_diagram(block.as_ref())?;
            eval_in(
                &pasting::RationalMatrixModel::new(),
                file,
                &d,
                strategy,
                seed,
            )
        }
    }
}

fn suite_json(r: &SuiteReport) -> Value {
    json!({
        "name": r.name,
        "passed": r.passed(),
        "cases": r.cases,
        "checks": r.checks,
        "failures": r.failures.iter().map(|f| json!({
            "seed": f.seed,
            "trial": f.trial,
            "message": f.message,
            "diagram": f.diagram,
        })).collect::<Vec<_>>(),
    })
}

fn run_suites<B: DiagramSampling + Sync>(
    model: &B,
    cfg: &GeneratorConfig,
    skeletons: usize,
) -> Result<Vec<SuiteReport>, Failure> {
    Ok(vec![
        uniqueness_suite(model, cfg)?,
        maclane_suite(
            model,
            cfg.seed,
            cfg.max_path_len,
            skeletons,
            cfg.max_object_size,
        )?,
        presentation_suite(model, cfg)?,
    ])
}

pub(crate) fn verify(
    cfg: &GeneratorConfig,
    model: ModelArg,
    skeletons: usize,
) -> Result<Report, Failure> {
    cfg.validate()?;
    let (name, reports) = match model {
        ModelArg::Span => ("span", run_suites(&SpanModel, cfg, skeletons)?),
        ModelArg::Matrix => (
            "matrix",
            run_suites(&NatMatrixModel::new(), cfg, skeletons)?,
        ),
    };
    let passed = reports.iter().all(SuiteReport::passed);
    let mut text = String::new();
    writeln!(
        text,
        "verify: {name} model, seed {}, {} trials, up to {} faces and paths of {} edges",
        cfg.seed, cfg.trials, cfg.max_faces, cfg.max_path_len
    )
    .unwrap();
    for r in &reports {
        writeln!(text, "  {r}").unwrap();
        for f in &r.failures {
            writeln!(text, "    {f}").unwrap();
        }
    }
    writeln!(
        text,
        "{}",
        if passed {
            "all suites passed"
        } else {
            "FAILED"
        }
    )
    .unwrap();
    Ok(Report {
        text,
        json: json!({
            "model": name,
            "seed": cfg.seed,
            "trials": cfg.trials,
            "max_faces": cfg.max_faces,
            "max_path_len": cfg.max_path_len,
            "max_object_size": cfg.max_object_size,
            "skeletons": skeletons,
            "passed": passed,
            "suites": reports.iter().map(suite_json).collect::<Vec<_>>(),
        }),
        code: if passed { EXIT_OK } else { EXIT_VERIFY },
    })
}
