//! Threshold of the perimeter problem alone: sweep q and find where the
//! curves for L = 3, 5, 7 cross.

use hiersurf::experiments::{parse_grid, run_perimeter_sweep, SweepConfig};
use hiersurf::topology::ModuleSpec;

fn main() -> hiersurf::Result<()> {
    let qs = parse_grid("0.08:0.12:0.01")?;
    let cfg = SweepConfig::new(ModuleSpec::simple(1, 0)?, vec![3, 5, 7], qs, 0.0, 5_000, 1);
    let sweep = run_perimeter_sweep(&cfg)?;
    for p in &sweep.points {
        println!("q = {:.3}  L = {}  p_L = {:.4}", p.x, p.logical.distance, p.logical.block.p);
    }
    for c in &sweep.crossings {
        println!("L = {} / {} cross at q = {:.4} +- {:.4}", c.smaller, c.larger, c.x, c.sigma);
    }
    Ok(())
}
