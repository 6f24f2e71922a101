//! Plays strategy pairs by seeded Monte Carlo and compares with the exact value
//! from forward enumeration.

use cir::error::Result;
use cir::game::Rules;
use cir::graph::{path, star};
use cir::play::{evaluate_pair, monte_carlo, McConfig};
use cir::strategies::{cop_from_id, robber_from_id, StarSweepCop, UniformLeafRobber};

fn main() -> Result<()> {
    let g = star(5)?;
    let cop = StarSweepCop::new(&g)?;
    let robber = UniformLeafRobber::new(&g)?;
    let rules = Rules::default();

    let exact = evaluate_pair(&g, &cop, &robber, rules, 100)?;
    let mc = monte_carlo(&g, &cop, &robber, rules, McConfig::new(20_000, 7))?;
    println!("star:5 sweep vs leaf hider: exact {:.4}, MC {:.4} ± {:.4}", exact.expected, mc.mean, mc.std_err);
    println!("histogram {:?}", mc.histogram);

    // Strategies are also addressable by id, as on the command line.
    let p = path(10)?;
    let cop = cop_from_id("path-sweep", &p, 1)?;
    let drunk = robber_from_id("drunk", &p, 1)?;
    let mc = monte_carlo(&p, &cop, &drunk, rules, McConfig::new(5_000, 7))?;
    let exact = evaluate_pair(&p, &cop, &drunk, rules, 10_000)?;
    println!("path:10 sweep vs drunk: exact {:.4}, MC 95% CI {:.3?}", exact.expected, mc.ci95);
    Ok(())
}
