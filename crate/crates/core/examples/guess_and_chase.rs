//! The guess-and-chase round cop: each round guesses the robber's vertex and
//! runs the visible-robber strategy from there.

use cir::bounds::guess_chase_upper;
use cir::error::Result;
use cir::game::Rules;
use cir::graph::Graph;
use cir::play::{monte_carlo, McConfig};
use cir::strategies::{GuessChaseCop, UniformStationaryRobber};
use cir::weight::fmt_rational;

fn main() -> Result<()> {
    for spec in ["path:3", "star:2", "path:5", "cycle:5", "grid:3"] {
        let g = Graph::from_spec(spec)?;
        let bound = guess_chase_upper(&g)?;
        let cop = GuessChaseCop::new(&g, bound.cops)?;
        let mc = monte_carlo(&g, &cop, &UniformStationaryRobber, Rules::default(), McConfig::new(5_000, 2))?;
        println!(
            "{spec:<8} K={} T̂={} home {}: MC {:.3} <= bound {} (captures per round {:.3})",
            bound.cops,
            cop.t_hat(),
            cop.home(),
            mc.mean,
            fmt_rational(&bound.value),
            mc.per_round_rate().unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
