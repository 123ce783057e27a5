//! Repeated random sub-sampling evaluation with a confusion matrix, the
//! mean accuracy and its 95% confidence interval, and the CSV rows the
//! `evaluate` command writes.
//!
//!     cargo run --release --example evaluation_report

use ugclass::commands::{report_rows, CSV_HEADER};
use ugclass::eval::{run_experiment, ClassifierSpec, SplitSpec};
use ugclass::perturb::PerturbationConfig;
use ugclass::synth::PlantedPartition;
use ugclass::ubayes_plus::UBayesPlusParams;
use ugclass::Result;

fn main() -> Result<()> {
    let (graph, truth) = PlantedPartition {
        classes: 3,
        per_class: 60,
        link_intra: 0.06,
        link_inter: 0.02,
        ..Default::default()
    }
    .generate(21)?;
    let split = SplitSpec {
        seed: 4,
        ..Default::default()
    };
    let noise = PerturbationConfig {
        phi: 3.0,
        seed: 4,
        ..Default::default()
    };
    let specs = [
        ClassifierSpec::UBayesPlus(UBayesPlusParams {
            alpha: 0.5,
            beta: 0.3,
            ..Default::default()
        }),
        ClassifierSpec::wvrn_20(),
    ];
    let mut reports = Vec::new();
    for spec in &specs {
        let report = run_experiment(&graph, &truth, spec, &noise, &split)?;
        println!(
            "{}: mean {:.4} +- {:.4}",
            report.classifier,
            report.mean_accuracy,
            report.ci95_halfwidth.unwrap_or(f64::NAN)
        );
        println!("confusion matrix of run 0 (rows truth, columns predicted):\n{}", report.per_run[0].confusion);
        reports.push(report);
    }
    print!("{CSV_HEADER}\n{}", report_rows(&noise, &reports, false));
    Ok(())
}
