//! Module error rates (P_M, P_P, P_B) of D = 5 modules with 97% pairs.

use hiersurf::blocks::CubeSize;
use hiersurf::decoder::{estimate_module_rates, Weighting};
use hiersurf::experiments::link_noise;
use hiersurf::pauli::EntanglementChannel;
use hiersurf::topology::ModuleSpec;

fn main() -> hiersurf::Result<()> {
    let spec = ModuleSpec::hierarchical(5, 0)?;
    let noise = link_noise(&spec, EntanglementChannel::unpolarised(0.03)?, 0.001)?.noise;
    let rates = estimate_module_rates(&spec, noise, CubeSize::Individual, 10_000, 1, Weighting::LogLikelihood)?;
    for (name, r) in [("P_M (X)", rates.p_m), ("P_M (Z)", rates.p_m_z), ("P_P", rates.p_p), ("P_B", rates.p_b)] {
        println!("{name:8} {:.4} +- {:.4}", r.p, r.sigma);
    }
    Ok(())
}
