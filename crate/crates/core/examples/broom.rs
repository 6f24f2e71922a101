//! Brooms: the cop's polynomial over its strategy parameters, and simulations
//! of both robber types on `B(c, n)`.

use cir::closed_form::broom_f;
use cir::error::Result;
use cir::game::Rules;
use cir::graph::broom;
use cir::harness::broom_scan;
use cir::play::{monte_carlo, McConfig};
use cir::strategies::{BroomCop, BroomPathSweepCop, BroomRobber, DrunkRobber};

fn main() -> Result<()> {
    let c = 0.5;
    let f = broom_f(c, 0.2, 0.3, 0.5);
    println!("f(b=0.2, p=0.3, x=0.5) = {:.4} = {:.4} x² + {:.4} x + {:.4}", f.value, f.a2, f.a1, f.a0);
    let best = broom_scan(c, 21)?;
    println!("grid minimum {:.4} at b={}, p={}, x={}", best.f_min, best.b, best.p, best.x);

    let n = 400;
    let g = broom(c, n)?;
    let rules = Rules::default();
    let adv = monte_carlo(&g, &BroomCop::upper(&g)?, &BroomRobber::new(&g, None)?, rules, McConfig::new(4_000, 11))?;
    let drunk = monte_carlo(&g, &BroomPathSweepCop::new(&g)?, &DrunkRobber::new(1), rules, McConfig::new(4_000, 11))?;
    println!(
        "B({c}, {n}): adversarial {:.1} (~n), drunk {:.1} (~c²n/2 = {}), ratio {:.2} (~2/c² = {})",
        adv.mean,
        drunk.mean,
        c * c * n as f64 / 2.0,
        adv.mean / drunk.mean,
        2.0 / (c * c)
    );
    Ok(())
}
