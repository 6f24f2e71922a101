//! Brackets the drunk cop time: the truncated optimum from below and the best
//! stationary placement from above, plus the belief concentration bound.

use cir::drunk::{dct_bracket, concentration_lower, m_trace, UpperStrategy};
use cir::error::Result;
use cir::game::{CopConfig, Rules};
use cir::graph::{cycle, star, Graph};
use cir::weight::fmt_rational;

fn bracket(g: &Graph, stay: usize, horizon: usize) -> Result<()> {
    let upper = UpperStrategy::Stationary(CopConfig::single(stay));
    let b = dct_bracket(g, 1, horizon, &upper, Rules::default())?;
    println!(
        "{:<8} horizon {horizon}: dct in {b} (lower exact: {}, width {})",
        g.label(),
        b.lower_exact,
        fmt_rational(&b.width())
    );
    Ok(())
}

fn main() -> Result<()> {
    bracket(&star(3)?, 0, 6)?;
    bracket(&cycle(5)?, 0, 6)?;

    let c = cycle(40)?;
    let l = concentration_lower(&c, 1)?;
    println!("\ncycle:40 degree ratio {} -> lower bound {:?}", fmt_rational(&l.ratio), l.bound);
    let trace = m_trace(&c, 1, 8)?;
    let m: Vec<String> = trace.m.iter().map(fmt_rational).collect();
    println!("max belief M_t for t = 0..8: {}", m.join(", "));
    println!("condition holds: {}, tau = {:.2}", trace.condition_ok, trace.tau);
    Ok(())
}
