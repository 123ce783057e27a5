//! Edge probabilities estimated from raw interaction data.
//!
//! Two estimators are provided. Co-occurrence: two nodes that were jointly
//! active in 10 of the 20 periods either of them was active get probability
//! 0.5. Citation: if A made 20 citations, 5 of them to B, the pair gets 0.25;
//! when both directions are present the larger ratio wins.
//!
//! Input records are tab-separated lines:
//!
//! ```text
//! active  <node>  <period>          co-occurrence
//! co      <u>  <v>  <period>
//! cites   <u>  <v>  <count>         citation
//! total   <u>  <count>
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use crate::error::{Error, Result};

pub type Activity = BTreeMap<String, BTreeSet<String>>;
pub type CoEvents = BTreeMap<(String, String), BTreeSet<String>>;
pub type CiteCounts = BTreeMap<(String, String), u64>;
pub type OutTotals = BTreeMap<String, u64>;

/// `(u, v, probability)` with `u < v`, sorted.
pub type EdgeTriples = Vec<(String, String, f64)>;

fn ordered(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

/// `|co(u,v)| / |activity(u) ∪ activity(v)|` per pair. Entries for `(u, v)`
/// and `(v, u)` are merged; pairs without co-events produce no edge.
pub fn ingest_cooccurrence(activity: &Activity, co_events: &CoEvents) -> Result<EdgeTriples> {
    let mut merged: BTreeMap<(String, String), BTreeSet<&String>> = BTreeMap::new();
    for ((u, v), periods) in co_events {
        if u == v {
            return Err(Error::InvalidParameter(format!("co-event of {u} with itself")));
        }
        merged.entry(ordered(u, v)).or_default().extend(periods);
    }
    let empty = BTreeSet::new();
    let mut out = Vec::new();
    for ((u, v), co) in merged {
        if co.is_empty() {
            continue;
        }
        let au = activity.get(&u).unwrap_or(&empty);
        let av = activity.get(&v).unwrap_or(&empty);
        if co.iter().any(|p| !au.contains(*p) && !av.contains(*p)) {
            return Err(Error::InconsistentEvents(u, v));
        }
        let union = au.union(av).count();
        out.push((u, v, co.len() as f64 / union as f64));
    }
    Ok(out)
}

/// `max(cites(u,v)/total(u), cites(v,u)/total(v))` per pair, for pairs with
/// at least one citation.
pub fn ingest_citation(cite_counts: &CiteCounts, out_totals: &OutTotals) -> Result<EdgeTriples> {
    let mut given: BTreeMap<&str, u64> = BTreeMap::new();
    for ((u, v), &c) in cite_counts {
        if u == v {
            return Err(Error::InvalidParameter(format!("{u} cites itself")));
        }
        *given.entry(u).or_default() += c;
    }
    for (&u, &sum) in &given {
        let total = out_totals.get(u).copied().unwrap_or(0);
        if sum > total {
            return Err(Error::InconsistentCounts(u.to_string(), total));
        }
    }
    let mut best: BTreeMap<(String, String), f64> = BTreeMap::new();
    for ((u, v), &c) in cite_counts {
        if c == 0 {
            continue;
        }
        let r = c as f64 / out_totals[u] as f64;
        let slot = best.entry(ordered(u, v)).or_insert(0.0);
        *slot = slot.max(r);
    }
    Ok(best.into_iter().map(|((u, v), p)| (u, v, p)).collect())
}

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        msg: msg.into(),
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.strip_suffix('\r').unwrap_or(l);
        (!l.trim().is_empty() && !l.starts_with('#')).then(|| (i + 1, l.split('\t').collect()))
    })
}

pub fn parse_cooccurrence(text: &str, path: &Path) -> Result<(Activity, CoEvents)> {
    let mut activity = Activity::new();
    let mut co = CoEvents::new();
    for (line, f) in content_lines(text) {
        match f[..] {
            ["active", node, period] => {
                activity.entry(node.into()).or_default().insert(period.into());
            }
            ["co", u, v, period] => {
                co.entry((u.into(), v.into())).or_default().insert(period.into());
            }
            _ => return Err(parse_err(path, line, "expected `active` or `co` record")),
        }
    }
    Ok((activity, co))
}

pub fn parse_citation(text: &str, path: &Path) -> Result<(CiteCounts, OutTotals)> {
    let mut cites = CiteCounts::new();
    let mut totals = OutTotals::new();
    let count = |s: &str, line| {
        s.trim()
            .parse::<u64>()
            .map_err(|_| parse_err(path, line, format!("bad count {s:?}")))
    };
    for (line, f) in content_lines(text) {
        match f[..] {
            ["cites", u, v, c] => {
                *cites.entry((u.into(), v.into())).or_default() += count(c, line)?;
            }
            ["total", u, c] => {
                if totals.insert(u.into(), count(c, line)?).is_some() {
                    return Err(parse_err(path, line, format!("second total for {u}")));
                }
            }
            _ => return Err(parse_err(path, line, "expected `cites` or `total` record")),
        }
    }
    Ok((cites, totals))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn periods(range: std::ops::Range<u32>) -> BTreeSet<String> {
        range.map(|y| y.to_string()).collect()
    }

    #[test]
    fn half_of_union() {
        let mut act = Activity::new();
        act.insert("a".into(), periods(1990..2005));
        act.insert("b".into(), periods(1995..2010));
        let mut co = CoEvents::new();
        co.insert(("a".into(), "b".into()), periods(1995..2005));
        let e = ingest_cooccurrence(&act, &co).unwrap();
        assert_eq!(e, vec![("a".into(), "b".into(), 0.5)]);

        co.insert(("a".into(), "b".into()), periods(1990..2010));
        assert_eq!(ingest_cooccurrence(&act, &co).unwrap()[0].2, 1.0);

        co.insert(("a".into(), "b".into()), BTreeSet::new());
        assert!(ingest_cooccurrence(&act, &co).unwrap().is_empty());

        co.insert(("a".into(), "b".into()), periods(1980..1981));
        assert!(matches!(ingest_cooccurrence(&act, &co), Err(Error::InconsistentEvents(..))));
    }

    #[test]
    fn citation_ratios() {
        let mut cites = CiteCounts::new();
        let mut totals = OutTotals::new();
        cites.insert(("A".into(), "B".into()), 5);
        totals.insert("A".into(), 20);
        assert_eq!(ingest_citation(&cites, &totals).unwrap()[0].2, 0.25);

        cites.insert(("A".into(), "B".into()), 1);
        totals.insert("A".into(), 10);
        cites.insert(("B".into(), "A".into()), 3);
        totals.insert("B".into(), 10);
        assert_eq!(ingest_citation(&cites, &totals).unwrap(), vec![("A".into(), "B".into(), 0.3)]);

        assert!(ingest_citation(&CiteCounts::new(), &totals).unwrap().is_empty());

        cites.insert(("B".into(), "C".into()), 8);
        assert!(matches!(ingest_citation(&cites, &totals), Err(Error::InconsistentCounts(..))));
    }

    #[test]
    fn record_files() {
        let p = Path::new("x");
        let (act, co) = parse_cooccurrence("active\ta\t1\nactive\tb\t2\nco\ta\tb\t1\n", p).unwrap();
        assert_eq!(ingest_cooccurrence(&act, &co).unwrap()[0].2, 0.5);
        let (c, t) = parse_citation("# c\ncites\ta\tb\t1\ntotal\ta\t4\n", p).unwrap();
        assert_eq!(ingest_citation(&c, &t).unwrap()[0].2, 0.25);
        assert!(matches!(parse_citation("cites\ta\tb\n", p), Err(Error::Parse { line: 1, .. })));
    }
}
