//! Exact capture-time distribution of a random-walk robber against fixed cop
//! schedules, in rational arithmetic.

use cir::belief::{schedule_ect, stationary_ect, CaptureDistribution, CopSchedule};
use cir::error::Result;
use cir::game::CopConfig;
use cir::graph::path;
use cir::strategies::PathSweepCop;
use cir::weight::{fmt_rational, Rational};

fn show(name: &str, d: &CaptureDistribution<Rational>) {
    println!("{name}: E(T) = {} (exact: {})", fmt_rational(&d.expected), d.exact);
    for (t, p) in &d.masses {
        println!("  P(T = {t}) = {}", fmt_rational(p));
    }
}

fn main() -> Result<()> {
    let g = path(4)?;

    let sweep = PathSweepCop::new(&g)?.schedule(&g)?;
    show("sweep 0..3 on P_4", &schedule_ect::<Rational>(&g, &sweep, 1)?);

    let wait = CopSchedule::single(&g, &[1, 1, 2, 3])?;
    show("wait at 1, then walk right", &schedule_ect::<Rational>(&g, &wait, 1)?);

    // A cop that never moves: absorption time of the walk on the remaining vertices.
    for v in 0..g.n() {
        let et = stationary_ect::<Rational>(&g, &CopConfig::single(v), 1)?;
        println!("stationary cop at {v}: E(T) = {}", fmt_rational(&et));
    }
    Ok(())
}
