//! The relational baselines on one noisy planted graph: RN, wvRN run to
//! convergence, wvRN capped at 20 sweeps, and possible-worlds sampling.
//!
//!     cargo run --release --example baselines

use ugclass::baselines::{relax, rn_classify, sampling_tally, SamplingParams, WvrnParams};
use ugclass::perturb::{perturb, PerturbationConfig};
use ugclass::synth::PlantedPartition;
use ugclass::{LabelAssignment, NodeId, Result};

fn accuracy(pred: &LabelAssignment, truth: &LabelAssignment, hidden: &[NodeId]) -> f64 {
    hidden.iter().filter(|&&n| pred.get(n) == truth.get(n)).count() as f64 / hidden.len() as f64
}

fn main() -> Result<()> {
    let (graph, truth) = PlantedPartition::default().generate(3)?;
    let noisy = perturb(&graph, &truth, &PerturbationConfig { phi: 2.0, seed: 4, ..Default::default() })?;
    let graph = noisy.graph.graph;
    // Every fifth node is a seed.
    let seeds_at: Vec<NodeId> = (0..200).step_by(5).map(NodeId).collect();
    let hidden: Vec<NodeId> = (0..200).filter(|i| i % 5 != 0).map(NodeId).collect();
    let seeds = truth.restricted_to(&seeds_at);

    let rn = rn_classify(&graph, &seeds)?;
    println!("RN         {:.3}", accuracy(&rn, &truth, &hidden));

    for params in [WvrnParams::default(), WvrnParams::capped(20)] {
        let state = relax(&graph, &seeds, &params)?;
        println!(
            "wvRN-{:<5} {:.3}  ({} sweeps, converged: {})",
            params.max_iterations,
            accuracy(&state.labels(), &truth, &hidden),
            state.iterations,
            state.converged
        );
    }

    let tally = sampling_tally(&graph, &seeds, &SamplingParams { seed: 8, ..Default::default() })?;
    println!("Sampling   {:.3}  ({} worlds)", accuracy(&tally.winners(), &truth, &hidden), tally.worlds_used);
    let n = hidden[0];
    println!("votes for node {n}: {:?} (truth {})", tally.votes(n), truth.get(n));
    Ok(())
}
