//! uBayes+ blended with the relational neighbor classifier.
//!
//! Each frontier node is scored by `(bayes + delta_e * rn) / (1 + delta_e)`
//! over normalized score vectors; `delta_e = 0` is plain uBayes+.
//!
//!     cargo run --release --example ensemble

use ugclass::eval::{run_experiment, ClassifierSpec, SplitSpec};
use ugclass::perturb::PerturbationConfig;
use ugclass::synth::PlantedPartition;
use ugclass::ubayes_plus::UBayesPlusParams;
use ugclass::Result;

fn main() -> Result<()> {
    let (graph, truth) = PlantedPartition { link_intra: 0.05, link_inter: 0.02, ..Default::default() }.generate(17)?;
    let split = SplitSpec {
        train_ratio: 0.3,
        repeats: 3,
        seed: 2,
    };
    let noise = PerturbationConfig {
        phi: 3.0,
        seed: 3,
        ..Default::default()
    };
    let params = UBayesPlusParams {
        alpha: 0.5,
        beta: 0.5,
        ..Default::default()
    };
    for delta_e in [0.0, 0.25, 0.5, 1.0] {
        let spec = ClassifierSpec::UBayesPlusRn {
            params: params.clone(),
            delta_e,
        };
        let report = run_experiment(&graph, &truth, &spec, &noise, &split)?;
        println!("delta_e {delta_e:<4} mean accuracy {:.4}", report.mean_accuracy);
    }
    Ok(())
}
