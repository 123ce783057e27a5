//! Edge probabilities from raw interaction data.
//!
//!     cargo run --example ingest_estimators

use std::collections::BTreeSet;

use ugclass::ingest::{ingest_citation, ingest_cooccurrence, Activity, CiteCounts, CoEvents, OutTotals};
use ugclass::Result;

fn years(from: u32, to: u32) -> BTreeSet<String> {
    (from..to).map(|y| y.to_string()).collect()
}

fn main() -> Result<()> {
    // Two authors active 1990-2004 and 1995-2009 who wrote together 1995-2004.
    let mut activity = Activity::new();
    activity.insert("ana".into(), years(1990, 2005));
    activity.insert("ben".into(), years(1995, 2010));
    activity.insert("cai".into(), years(2000, 2004));
    let mut co = CoEvents::new();
    co.insert(("ana".into(), "ben".into()), years(1995, 2005));
    co.insert(("ben".into(), "cai".into()), years(2000, 2004));
    for (u, v, p) in ingest_cooccurrence(&activity, &co)? {
        println!("co-authorship {u} - {v}: {p:.4}");
    }

    // A made 20 citations, 5 of them to B; B cites A in 3 of its 10.
    let mut cites = CiteCounts::new();
    cites.insert(("A".into(), "B".into()), 5);
    cites.insert(("B".into(), "A".into()), 3);
    cites.insert(("B".into(), "C".into()), 1);
    let mut totals = OutTotals::new();
    totals.insert("A".into(), 20);
    totals.insert("B".into(), 10);
    for (u, v, p) in ingest_citation(&cites, &totals)? {
        println!("citation {u} - {v}: {p:.4}");
    }
    Ok(())
}
