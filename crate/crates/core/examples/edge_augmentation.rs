//! Why dropping improbable edges helps.
//!
//! In the bundled fixture node "5" is black, has one strong edge to a black
//! node and three weak edges to white nodes. Plain uBayes counts every
//! neighbor and calls it white. uBayes+ validates the fraction of most
//! probable edges to keep on a sample and only keeps the strong ones.
//!
//!     cargo run --example edge_augmentation

use std::path::Path;

use ugclass::io::load_dataset;
use ugclass::ubayes::{ubayes_run, UBayesParams};
use ugclass::ubayes_plus::{sample_network, split_holdout, theta_sweep, ubayes_plus_run, UBayesPlusParams};
use ugclass::{Result, Topology};

fn main() -> Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/augmentation");
    let (named, seeds) = load_dataset(dir.join("graph.tsv"), dir.join("labels.tsv"))?;
    let target = named.dict.id("5").expect("fixture has node 5");

    let plain = ubayes_run(&named.graph, &seeds, &UBayesParams::default())?;
    println!("uBayes, all {} edges: node 5 -> {}", named.graph.edge_count(), plain.labels.get(target));

    let params = UBayesPlusParams {
        alpha: 1.0,
        beta: 0.5,
        seed: 1,
        ..Default::default()
    };
    let sample = sample_network(&named.graph, &seeds, params.alpha, params.seed)?;
    let (train, hold) = split_holdout(&sample.seeds.labeled_nodes(), params.beta, params.seed)?;
    let sweep = theta_sweep(&sample.sample.graph, &sample.seeds, &train, &hold, &params.theta_grid, params.delta_s)?;
    println!("hold-out accuracy by theta ({} train, {} held out):", train.len(), hold.len());
    for (theta, acc) in &sweep.per_theta {
        println!("  {theta:.2}  {acc:.3}{}", if *theta == sweep.theta_star { "  <- theta*" } else { "" });
    }

    let run = ubayes_plus_run(&named.graph, &seeds, &params)?;
    println!(
        "uBayes+, top {} edges (theta* {}): node 5 -> {}",
        run.active_edges,
        run.theta_star,
        run.labels.get(target)
    );
    Ok(())
}
