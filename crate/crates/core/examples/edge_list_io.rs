//! Reading and writing edge and label files.
//!
//!     cargo run --example edge_list_io

use ugclass::io::{format_graph, format_labels, load_dataset, write_graph, write_labels};
use ugclass::{Result, Topology};

fn main() -> Result<()> {
    let dir = tempfile::tempdir().map_err(|e| ugclass::Error::Io {
        path: std::env::temp_dir(),
        msg: e.to_string(),
    })?;
    let graph_path = dir.path().join("graph.tsv");
    let labels_path = dir.path().join("labels.tsv");
    std::fs::write(&graph_path, "# coauthors\nkim\tlee\t0.5\nlee\tpark\t0.25\npark\tkim\t0.8\nlee\tkim\t0.5\n").unwrap();
    std::fs::write(&labels_path, "kim\t1\npark\t2\nyoon\t2\n").unwrap();

    let (named, labels) = load_dataset(&graph_path, &labels_path)?;
    println!("{} nodes ({:?}), {} edges", named.graph.node_count(), named.dict.names(), named.graph.edge_count());
    for (node, p) in named.graph.neighbors(named.dict.id("kim").unwrap())? {
        println!("  kim - {} : {p}", named.dict.name(node));
    }
    print!("canonical edges:\n{}", format_graph(&named.graph, &named.dict));
    print!("labels:\n{}", format_labels(&labels, &named.dict));

    write_graph(dir.path().join("copy.tsv"), &named.graph, &named.dict)?;
    write_labels(dir.path().join("copy_labels.tsv"), &labels, &named.dict)?;
    let (again, _) = load_dataset(dir.path().join("copy.tsv"), dir.path().join("copy_labels.tsv"))?;
    println!("round trip identical: {}", again.graph == named.graph);

    let err = std::fs::write(&graph_path, "kim\tlee\t1.5\n").map(|_| load_dataset(&graph_path, &labels_path));
    if let Ok(Err(e)) = err {
        println!("bad file: {e}");
    }
    Ok(())
}
