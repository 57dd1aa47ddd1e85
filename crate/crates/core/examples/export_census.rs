//! Regenerates the bundled census files in `data/census`: the 54-vertex
//! grid incidence graph plus the cubic graphs of orders 110, 182 and 506
//! built from their defining groups.

use std::path::Path;

use hamsym_core::bicoset;
use hamsym_core::graph::to_graph6;
use hamsym_core::zoo::{self, ZooOptions};

fn main() {
    let dir = Path::new("data/census");
    std::fs::create_dir_all(dir).expect("create data/census");
    let mut manifest = Vec::new();

    let gray = zoo::gray_graph().to_simple();
    std::fs::write(dir.join("ss-54-1.g6"), to_graph6(&gray) + "\n").unwrap();
    manifest.push(serde_json::json!({
        "file": "ss-54-1.g6",
        "order": 54,
        "valency": 3,
        "source": "3x3x3 grid point-line incidence",
    }));

    let opts = ZooOptions::default();
    for (row, source) in [
        (7u8, "PGL(2,11) bi-coset graph"),
        (9, "PGL(2,13) bi-coset graph"),
        (12, "PSL(2,23) bi-coset graph"),
    ] {
        let instances = zoo::table_instance(1, row, 3, None, &opts).expect("construct row");
        let inst = &instances[0];
        let built = bicoset::build(&inst.spec).expect("build graph");
        let graph = built.graph.to_simple();
        let file = format!("ss-{}-1.g6", graph.n());
        std::fs::write(dir.join(&file), to_graph6(&graph) + "\n").unwrap();
        manifest.push(serde_json::json!({
            "file": file,
            "order": graph.n(),
            "valency": 3,
            "source": source,
        }));
        println!("wrote {} ({} vertices)", dir.join(file).display(), graph.n());
    }

    std::fs::write(
        dir.join("manifest.json"),
        serde_json::to_string_pretty(&manifest).unwrap() + "\n",
    )
    .unwrap();
    println!("wrote {}", dir.join("manifest.json").display());
}
