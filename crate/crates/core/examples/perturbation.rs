//! Noise injection, edge removal and label removal.
//!
//!     cargo run --example perturbation

use ugclass::perturb::{perturb, EdgeOrigin, PerturbationConfig};
use ugclass::synth::PlantedPartition;
use ugclass::{Result, Topology};

fn main() -> Result<()> {
    let (graph, labels) = PlantedPartition::default().generate(1)?;
    println!("input: {} edges, {} labeled nodes", graph.edge_count(), labels.labeled_count());

    for (phi, removal, ratio) in [(1.0, 0.0, 1.0), (3.0, 0.0, 1.0), (3.0, 0.25, 1.0), (3.0, 0.25, 0.5)] {
        let cfg = PerturbationConfig {
            phi,
            sigma: 0.25,
            edge_removal: removal,
            label_ratio: ratio,
            seed: 9,
        };
        let out = perturb(&graph, &labels, &cfg)?;
        let noise: Vec<f64> = out
            .graph
            .graph
            .edges()
            .iter()
            .zip(&out.graph.origin)
            .filter(|(_, o)| **o == EdgeOrigin::Noise)
            .map(|(e, _)| e.prob)
            .collect();
        let mean = noise.iter().sum::<f64>() / noise.len().max(1) as f64;
        println!(
            "phi {phi} Phi {removal} Gamma {ratio}: {} edges ({} original, {} noise, mean noise p {mean:.3}), {} labeled",
            out.graph.graph.edge_count(),
            out.graph.count(EdgeOrigin::Original),
            noise.len(),
            out.labels.labeled_count()
        );
    }
    Ok(())
}
