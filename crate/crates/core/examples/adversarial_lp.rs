//! Exact values of the truncated adversarial game by linear programming, with
//! both strategies certified by exact best responses.

use cir::adversarial::{solve_exact, value_sequence};
use cir::error::Result;
use cir::game::Rules;
use cir::graph::{path, star};

fn main() -> Result<()> {
    let rules = Rules::default();
    let s3 = star(3)?;
    let r = solve_exact(&s3, 1, 6, rules)?;
    println!(
        "{} m={}: value {} ({:?}), exploitability {:.1e}, {} histories",
        r.graph, r.horizon, r.value, r.value_fraction, r.exploitability, r.size
    );
    for e in r.cop_strategy.iter().take(4) {
        println!("  cop after {:<10} {:?}", e.infoset, e.actions);
    }
    for e in r.robber_strategy.iter().take(4) {
        println!("  robber after {:<7} {:?}", e.infoset, e.actions);
    }

    let p4 = path(4)?;
    let seq = value_sequence(&p4, 1, 6, rules)?;
    let shown: Vec<String> = seq.iter().map(|v| format!("{v:.4}")).collect();
    println!("\nval on path:4 for m = 0..6: {}", shown.join(" "));
    Ok(())
}
