//! Compare the Sloan order with the input order on a bundled model.

use std::path::PathBuf;

use xbdd::models::{IncidenceGraph, Model, Ordering};

fn main() -> xbdd::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("models/philosophers3.pnet"));
    let model = Model::load(&path, None)?;
    let graph = IncidenceGraph::from_model(&model);
    for ordering in [Ordering::Input, Ordering::Sloan] {
        let order = model.order(ordering);
        let names: Vec<&str> = order.iter().map(|&i| model.variables()[i].as_str()).collect();
        println!("{ordering:?}: profile {}", graph.profile(&order));
        println!("  {}", names.join(" "));
    }
    Ok(())
}
