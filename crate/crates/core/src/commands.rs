//! The `ugclass` subcommands. Each reads a [`Config`], writes its artifacts
//! into the configured output directory and reports what it wrote.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use log::info;
use serde::Serialize;

use crate::config::{ClassifierSection, Config};
use crate::error::{Error, Result};
use crate::eval::{run_experiment, EvalReport};
use crate::ingest;
use crate::io::{format_graph, format_labels, load_dataset, write_atomic};
use crate::perturb::{perturb, EdgeOrigin, PerturbationConfig};
use crate::Topology;

pub const PREDICTIONS_FILE: &str = "predictions.tsv";
pub const METADATA_FILE: &str = "classify.toml";
pub const REPORT_FILE: &str = "evaluate.csv";
pub const PERTURBED_GRAPH_FILE: &str = "graph.tsv";
pub const PERTURBED_LABELS_FILE: &str = "labels.tsv";
pub const INGESTED_GRAPH_FILE: &str = "edges.tsv";

pub const CSV_HEADER: &str = "run,seed,classifier,phi,sigma,Phi,Gamma,accuracy,seconds,ci95";

#[derive(Debug, Clone)]
pub struct CommandOutput {
    pub files: Vec<PathBuf>,
    /// Short human-readable account of the result.
    pub summary: String,
}

#[derive(Serialize)]
struct ClassifyMetadata<'a> {
    classifier: String,
    seed: u64,
    graph: String,
    labels: String,
    nodes: usize,
    edges: usize,
    seeds: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    theta_star: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seconds: Option<f64>,
    parameters: &'a ClassifierSection,
}

fn display(p: &Option<PathBuf>) -> String {
    p.as_deref().map(|p| p.display().to_string()).unwrap_or_default()
}

/// Labels every node of the input graph, using the label file as seeds.
pub fn cmd_classify(cfg: &Config) -> Result<CommandOutput> {
    let specs = cfg.classifiers()?;
    let [spec] = &specs[..] else {
        return Err(Error::Config(format!(
            "classify takes one classifier, got {}",
            specs.len()
        )));
    };
    let (named, seeds) = load_dataset(cfg.graph_path()?, cfg.labels_path()?)?;
    let started = Instant::now();
    let result = spec.classify(&named.graph, &seeds, cfg.seed)?;
    let elapsed = started.elapsed().as_secs_f64();
    info!("{} labeled {} nodes in {elapsed:.3}s", spec.name(), named.graph.node_count());

    let meta = ClassifyMetadata {
        classifier: spec.name(),
        seed: cfg.seed,
        graph: display(&cfg.input.graph),
        labels: display(&cfg.input.labels),
        nodes: named.graph.node_count(),
        edges: named.graph.edge_count(),
        seeds: seeds.labeled_count(),
        theta_star: result.theta_star,
        seconds: cfg.output.timings.then_some(elapsed),
        parameters: &cfg.classifier,
    };
    let meta = toml::to_string(&meta).map_err(|e| Error::Config(e.to_string()))?;
    let dir = cfg.out_dir();
    let predictions = dir.join(PREDICTIONS_FILE);
    let metadata = dir.join(METADATA_FILE);
    write_atomic(&predictions, &format_labels(&result.labels, &named.dict))?;
    write_atomic(&metadata, &meta)?;

    let mut summary = format!("{}: {} nodes labeled", spec.name(), result.labels.len());
    if let Some(t) = result.theta_star {
        let _ = write!(summary, ", theta* = {t}");
    }
    Ok(CommandOutput {
        files: vec![predictions, metadata],
        summary,
    })
}

fn seconds_field(timings: bool, secs: f64) -> String {
    if timings {
        format!("{secs:.6}")
    } else {
        "NA".into()
    }
}

fn point_fields(p: &PerturbationConfig) -> String {
    format!("{},{},{},{}", p.phi, p.sigma, p.edge_removal, p.label_ratio)
}

/// Rows for one sweep point: runs interleaved across classifiers, then one
/// summary row per classifier.
pub fn report_rows(point: &PerturbationConfig, reports: &[EvalReport], timings: bool) -> String {
    let mut out = String::new();
    let p = point_fields(point);
    let runs = reports.iter().map(|r| r.per_run.len()).max().unwrap_or(0);
    for i in 0..runs {
        for rep in reports {
            if let Some(r) = rep.per_run.get(i) {
                let _ = writeln!(
                    out,
                    "{},{},{},{p},{},{},NA",
                    r.run,
                    r.seed,
                    rep.classifier,
                    r.accuracy,
                    seconds_field(timings, r.elapsed.as_secs_f64())
                );
            }
        }
    }
    for rep in reports {
        let ci = rep.ci95_halfwidth.map_or_else(|| "NA".to_string(), |c| c.to_string());
        let _ = writeln!(
            out,
            "summary,NA,{},{p},{},{},{ci}",
            rep.classifier,
            rep.mean_accuracy,
            seconds_field(timings, rep.mean_seconds())
        );
    }
    out
}

/// Repeated sub-sampling evaluation of every configured classifier at every
/// sweep point. The label file holds the ground truth.
pub fn cmd_evaluate(cfg: &Config) -> Result<CommandOutput> {
    let specs = cfg.classifiers()?;
    let (named, truth) = load_dataset(cfg.graph_path()?, cfg.labels_path()?)?;
    let split = cfg.split();
    let mut csv = format!("{CSV_HEADER}\n");
    let mut summary = String::new();
    for point in cfg.sweep_points() {
        let mut reports = Vec::with_capacity(specs.len());
        for spec in &specs {
            let report = run_experiment(&named.graph, &truth, spec, &point, &split)?;
            info!(
                "phi={} sigma={} Phi={} Gamma={} {}: mean {:.4} ({:.3}s/run)",
                point.phi,
                point.sigma,
                point.edge_removal,
                point.label_ratio,
                report.classifier,
                report.mean_accuracy,
                report.mean_seconds()
            );
            let _ = writeln!(
                summary,
                "phi={} {}: mean accuracy {:.4} ci95 {}",
                point.phi,
                report.classifier,
                report.mean_accuracy,
                report.ci95_halfwidth.map_or("NA".into(), |c| format!("{c:.4}"))
            );
            reports.push(report);
        }
        csv.push_str(&report_rows(&point, &reports, cfg.output.timings));
    }
    let path = cfg.out_dir().join(REPORT_FILE);
    write_atomic(&path, &csv)?;
    Ok(CommandOutput {
        files: vec![path],
        summary: summary.trim_end().to_string(),
    })
}

/// Noise injection, edge removal and label removal, written as a new graph
/// and label file.
pub fn cmd_perturb(cfg: &Config) -> Result<CommandOutput> {
    let (named, labels) = load_dataset(cfg.graph_path()?, cfg.labels_path()?)?;
    let pc = cfg.perturbation();
    let out = perturb(&named.graph, &labels, &pc)?;
    let header = format!(
        "# perturbed from {} and {}: phi={} sigma={} Phi={} Gamma={} seed={}\n",
        display(&cfg.input.graph),
        display(&cfg.input.labels),
        pc.phi,
        pc.sigma,
        pc.edge_removal,
        pc.label_ratio,
        pc.seed
    );
    let kept = out.graph.count(EdgeOrigin::Original);
    let noise = out.graph.count(EdgeOrigin::Noise);
    let graph_text = format!(
        "{header}# edges: {kept} original, {noise} noise\n{}",
        format_graph(&out.graph.graph, &named.dict)
    );
    let labels_text = format!(
        "{header}# labeled: {} of {}\n{}",
        out.labels.labeled_count(),
        labels.labeled_count(),
        format_labels(&out.labels, &named.dict)
    );
    let dir = cfg.out_dir();
    let g = dir.join(PERTURBED_GRAPH_FILE);
    let l = dir.join(PERTURBED_LABELS_FILE);
    write_atomic(&g, &graph_text)?;
    write_atomic(&l, &labels_text)?;
    Ok(CommandOutput {
        files: vec![g, l],
        summary: format!(
            "{} edges ({kept} original, {noise} noise), {} labeled nodes",
            kept + noise,
            out.labels.labeled_count()
        ),
    })
}

/// Estimates edge probabilities from raw records and writes an edge file.
pub fn cmd_ingest(cfg: &Config) -> Result<CommandOutput> {
    let path = cfg.records_path()?;
    let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    let estimator = cfg.input.estimator.as_deref().unwrap_or("cooccurrence");
    let edges = match estimator {
        "cooccurrence" => {
            let (activity, co) = ingest::parse_cooccurrence(&text, &path)?;
            ingest::ingest_cooccurrence(&activity, &co)?
        }
        "citation" => {
            let (cites, totals) = ingest::parse_citation(&text, &path)?;
            ingest::ingest_citation(&cites, &totals)?
        }
        other => return Err(Error::Config(format!("unknown estimator {other:?}"))),
    };
    let mut body = format!(
        "# {estimator} estimate from {}\n",
        display(&cfg.input.records)
    );
    for (u, v, p) in &edges {
        let _ = writeln!(body, "{u}\t{v}\t{p}");
    }
    let out = cfg.out_dir().join(INGESTED_GRAPH_FILE);
    write_atomic(&out, &body)?;
    Ok(CommandOutput {
        files: vec![out],
        summary: format!("{} edges", edges.len()),
    })
}
