//! Conditional label probabilities on a four-node path.
//!
//! a -0.3- b -0.9- c -0.2- d with a, b, c black and d white. Black nodes
//! see black neighbors over 0.3 + 0.9 of their 1.4 probability mass, so
//! cond(black | black) = 1.2 / 1.4.
//!
//!     cargo run --example worked_conditional

use ugclass::bayes::{BayesModel, DEFAULT_SMOOTHING};
use ugclass::{Label, LabelAssignment, Result, UncertainGraph};

const NAMES: [&str; 3] = ["", "black", "white"];

fn main() -> Result<()> {
    let graph = UncertainGraph::from_triples(&[(0, 1, 0.3), (1, 2, 0.9), (2, 3, 0.2)])?;
    let labels = LabelAssignment::from_raw(&[1, 1, 1, 2]);
    let model = BayesModel::estimate(&graph, &labels, DEFAULT_SMOOTHING)?;

    println!("priors: black {:.3}, white {:.3}", model.raw_priors().get(Label(1)), model.raw_priors().get(Label(2)));
    for q in [Label(1), Label(2)] {
        for p in [Label(1), Label(2)] {
            let c = model.conditionals();
            println!(
                "cond({:<5} | {:<5}) = {:.6}{}",
                NAMES[p.0 as usize],
                NAMES[q.0 as usize],
                c.raw(p, q),
                if c.is_fallback(p, q) { "  (no edges, prior)" } else { "" }
            );
        }
    }

    // A new node with one black neighbor.
    let scores = model.posterior_distribution([(Label(1), 0.7)]);
    println!(
        "one black neighbor: P(black) {:.4}, P(white) {:.4} -> {}",
        scores.get(Label(1)),
        scores.get(Label(2)),
        NAMES[scores.argmax_label()?.0 as usize]
    );
    Ok(())
}
