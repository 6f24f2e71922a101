//! The round strategy on complete d-ary trees against the distance-two robber,
//! next to the closed-form bounds.

use cir::closed_form::{tree_bounds, tree_e};
use cir::error::Result;
use cir::game::Rules;
use cir::graph::complete_tree;
use cir::play::{monte_carlo, McConfig};
use cir::strategies::{TreeDistance2Robber, TreeRoundCop};
use cir::weight::fmt_rational;

fn main() -> Result<()> {
    for (d, depth) in [(2, 2), (2, 3), (3, 2)] {
        let g = complete_tree(d, depth)?;
        let bounds = tree_bounds(d, depth)?;
        let e: Vec<String> = tree_e(d, depth)?.iter().map(fmt_rational).collect();
        let cop = TreeRoundCop::new(&g)?;
        let robber = TreeDistance2Robber::new(&g)?;
        let mc = monte_carlo(&g, &cop, &robber, Rules::default(), McConfig::new(4_000, 3))?;
        println!(
            "d={d} L={depth} n={:<3} round length {:<3} MC {:>7.2}  upper {:>6}  lower {:>6}  rate/round {:.3}  e = [{}]",
            g.n(),
            cop.round_length(),
            mc.mean,
            fmt_rational(&bounds.round_upper),
            fmt_rational(&bounds.evader_lower),
            mc.per_round_rate().unwrap_or(f64::NAN),
            e.join(", ")
        );
    }
    Ok(())
}
