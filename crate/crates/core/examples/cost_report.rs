//! Qubit cost of a network of simple modules with one broker at 85% pair
//! fidelity, for two purification depths. Takes a few minutes on one core.

use hiersurf::experiments::{cost_scan, CostConfig};
use hiersurf::topology::ModuleSpec;

fn main() -> hiersurf::Result<()> {
    let cfg = CostConfig {
        trials: 2_000,
        ..CostConfig::default()
    };
    let scan = cost_scan(ModuleSpec::simple(1, 0)?, &[5, 6], 0.15, 0.001, 1e-12, &cfg)?;
    for r in &scan.reports {
        let fit = r.scaling.as_ref().and_then(|s| s.fit.as_ref());
        println!(
            "S = {:>3}  eps0 = {:?}  kappa = {:?}  L = {:?}  qubits = {:?}  pairs/link = {:?}",
            r.qubits_per_module,
            fit.map(|f| f.eps0),
            fit.map(|f| f.kappa),
            r.l_min,
            r.total_qubits,
            r.pairs_per_link
        );
    }
    if let Some(i) = scan.best {
        println!("cheapest: module size {}", scan.reports[i].qubits_per_module);
    }
    Ok(())
}
