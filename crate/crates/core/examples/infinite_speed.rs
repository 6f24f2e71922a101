//! A robber that outruns the cops: the star formula and the limits of the
//! drunk capture time as the speed grows.

use cir::bounds::infspeed_report;
use cir::closed_form::star_infspeed_ect;
use cir::error::Result;
use cir::game::{CopConfig, Rules};
use cir::graph::{path, star};
use cir::play::{evaluate_pair, monte_carlo, McConfig};
use cir::strategies::{DrunkRobber, StarInfSpeedCop, StationaryCop, UniformLeafRobber};
use cir::weight::fmt_rational;

fn main() -> Result<()> {
    for leaves in 1..=4 {
        let g = star(leaves)?;
        let cop = StarInfSpeedCop::new(&g)?;
        let robber = UniformLeafRobber::new(&g)?;
        let v = evaluate_pair(&g, &cop, &robber, Rules::with_speed(g.n()), 200)?;
        println!("star:{leaves}: formula {}, exact {:.4}", fmt_rational(&star_infspeed_ect(leaves)), v.expected);
    }

    let p = path(10)?;
    let report = infspeed_report(&p, 1)?;
    println!("\n{}: dct limit {}", report.graph, fmt_rational(&report.limits.dct));
    let cop = StationaryCop::new(&p, CopConfig::single(0))?;
    for speed in [1, 5, 50, 500] {
        let mc = monte_carlo(&p, &cop, &DrunkRobber::new(speed), Rules::with_speed(speed), McConfig::new(10_000, 5))?;
        println!("  speed {speed:>3}: mean capture {:.3}", mc.mean);
    }
    Ok(())
}
