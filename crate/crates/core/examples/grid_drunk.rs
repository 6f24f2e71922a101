//! Drunk capture time on grids against two cops parked at antipodal corners,
//! scaled by the number of vertices.

use cir::belief::stationary_ect;
use cir::bounds::{grid_round_constant, q_lower};
use cir::error::Result;
use cir::game::CopConfig;
use cir::graph::grid;
use cir::strategies::grid_stationary_cops;
use cir::weight::Rational;

fn main() -> Result<()> {
    for side in [4, 6, 8, 10, 12] {
        let g = grid(side)?;
        let cops = grid_stationary_cops(&g, 2)?;
        let et = stationary_ect::<f64>(&g, cops.config(), 1)?;
        println!("grid {side:>2}x{side:<2} cops at {}: E(T) = {et:>8.2}, E(T)/n = {:.3}", cops.config(), et / g.n() as f64);
    }
    let exact = stationary_ect::<Rational>(&grid(3)?, &CopConfig::single(4), 1)?;
    println!("grid 3x3, one cop in the middle: E(T) = {exact}");

    let q = q_lower(2, 2304.0)?;
    let c = grid_round_constant(2304.0)?;
    println!("q_2(2304) >= {} ; round constant {} (vacuous: {})", q.value, c.value, c.vacuous);
    Ok(())
}
