//! Builds each graph family, prints its metrics, the size of its automorphism
//! group and its (visible) cop number.

use cir::error::Result;
use cir::graph::Graph;
use cir::symmetry::Symmetry;
use cir::visible::{cop_number, visible_solve};

fn main() -> Result<()> {
    let specs = ["path:6", "cycle:6", "star:4", "tree:d=2,L=2", "grid:3", "broom:c=0.5,n=12"];
    println!("{:<18} {:>3} {:>5} {:>4} {:>4} {:>5} {:>3} {:>5}", "graph", "n", "edges", "Δ", "δ", "diam", "|A|", "c(G)");
    for spec in specs {
        let g = Graph::from_spec(spec)?;
        let m = g.metrics();
        let sym = Symmetry::of_graph(&g, 10_000);
        let k = cop_number(&g)?;
        println!(
            "{:<18} {:>3} {:>5} {:>4} {:>4} {:>5} {:>3} {:>5}",
            g.label(),
            m.n,
            g.edge_count(),
            m.max_degree,
            m.min_degree,
            m.diameter,
            sym.len(),
            k
        );
    }

    // Custom graphs come from edge lists: first line n, then one edge per line.
    let house = Graph::parse_edge_list("5\n0 1\n1 2\n2 3\n3 0\n2 4\n3 4\n")?;
    let visible = visible_solve(&house, 1)?;
    println!("\nhouse graph: one cop guaranteed = {}, worst capture turn = {:?}", visible.guaranteed, visible.t_hat);
    print!("{}", house.to_edge_list());
    Ok(())
}
