//! Noise robustness on a two-class planted partition.
//!
//! Intra-class edges carry probability 0.9, inter-class edges 0.1. Every
//! classifier is evaluated under the default noise (three noisy edges per
//! real edge, sigma 0.25) with 20% of the nodes as seeds. Optional
//! arguments set the intra and inter link chances.
//!
//!     cargo run --release --example planted_partition -- 0.1 0.01

use ugclass::baselines::SamplingParams;
use ugclass::eval::{run_experiment, ClassifierSpec, SplitSpec};
use ugclass::perturb::PerturbationConfig;
use ugclass::synth::PlantedPartition;
use ugclass::ubayes_plus::UBayesPlusParams;
use ugclass::{Result, Topology};

fn main() -> Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut planted = PlantedPartition::default();
    if let Some(&p) = args.first() {
        planted.link_intra = p;
    }
    if let Some(&p) = args.get(1) {
        planted.link_inter = p;
    }
    let (graph, truth) = planted.generate(7)?;
    println!("{} nodes, {} edges", graph.node_count(), graph.edge_count());

    let split = SplitSpec {
        train_ratio: 0.2,
        repeats: 5,
        seed: 11,
    };
    let noise = PerturbationConfig {
        seed: 5,
        ..Default::default()
    };
    let classifiers = [
        ClassifierSpec::UBayesPlus(UBayesPlusParams::default()),
        ClassifierSpec::UBayesPlus(UBayesPlusParams {
            alpha: 0.5,
            beta: 0.5,
            ..Default::default()
        }),
        ClassifierSpec::UBayes(Default::default()),
        ClassifierSpec::wvrn_20(),
        ClassifierSpec::Sampling(SamplingParams::default()),
        ClassifierSpec::Rn,
    ];
    for c in &classifiers {
        let report = run_experiment(&graph, &truth, c, &noise, &split)?;
        let runs: Vec<String> = report.per_run.iter().map(|r| format!("{:.3}", r.accuracy)).collect();
        let thetas: Vec<String> = report.per_run.iter().filter_map(|r| r.theta_star).map(|t| format!("{t:.2}")).collect();
        let label = match c {
            ClassifierSpec::UBayesPlus(p) => format!("{} a={} b={}", report.classifier, p.alpha, p.beta),
            _ => report.classifier.clone(),
        };
        println!(
            "{label:<24} mean {:.4} ci95 {:.4}  runs [{}]{}",
            report.mean_accuracy,
            report.ci95_halfwidth.unwrap_or(f64::NAN),
            runs.join(" "),
            if thetas.is_empty() { String::new() } else { format!("  theta* [{}]", thetas.join(" ")) }
        );
    }
    Ok(())
}
