//! The bounds catalog for a few families, written as CSV.

use cir::bounds::{consistent, family_values, guess_chase_upper, records_to_csv};
use cir::error::Result;
use cir::graph::{path, Family};
use cir::weight::fmt_rational;

fn main() -> Result<()> {
    let families = [
        Family::Star { leaves: 4 },
        Family::Path { n: 10 },
        Family::Cycle { n: 9 },
        Family::Tree { d: 2, depth: 3 },
        Family::Grid { side: 10 },
        Family::Broom { c: 0.25, n: 400 },
    ];
    let mut all = Vec::new();
    for f in &families {
        let recs = family_values(f);
        assert!(consistent(&recs));
        all.extend(recs);
    }
    print!("{}", records_to_csv(&all)?);

    let l = guess_chase_upper(&path(5)?)?;
    println!(
        "\nguess-and-chase bound on path:5: T̂={} D={} Δ={} -> {}",
        l.t_hat,
        l.diameter,
        l.max_degree,
        fmt_rational(&l.value)
    );
    Ok(())
}
