//! Builds the explicit game tree and runs CFR+ on it, reporting the
//! exploitability gap every few hundred iterations.

use cir::adversarial::{build_game, cfr_plus, solve_exact, DEFAULT_NODE_CAP, DEFAULT_VISIT_CAP};
use cir::error::Result;
use cir::game::Rules;
use cir::graph::star;

fn main() -> Result<()> {
    let g = star(2)?;
    let rules = Rules::default();
    let game = build_game(&g, 1, 4, rules, DEFAULT_NODE_CAP)?;
    println!("{} nodes, {} cop infosets, depth {}", game.len(), game.cop_infosets.len(), game.max_depth());

    let dump = game.dump();
    for line in dump.lines().take(6) {
        println!("  {line}");
    }

    for iters in [10, 100, 1000] {
        let s = cfr_plus(&game, iters, 0.0, DEFAULT_VISIT_CAP)?;
        println!(
            "CFR+ {iters:>5} iterations: value {:.5}, bracket [{:.5}, {:.5}]",
            s.value, s.cop_best, s.robber_best
        );
    }
    let exact = solve_exact(&g, 1, 4, rules)?;
    println!("LP value {}", exact.value);
    Ok(())
}
