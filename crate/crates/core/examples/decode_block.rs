//! Decodes a noisy X-ancilla cube: detector error model, matching, failure
//! counts.

use hiersurf::blocks::{ancilla_cube, CubeSize};
use hiersurf::circuits::NoiseModel;
use hiersurf::decoder::{BlockDecoder, Weighting};
use hiersurf::pauli::{EntanglementChannel, IntraModuleNoise};
use hiersurf::sim::DetectorErrorModel;
use hiersurf::topology::{ModuleRole, ModuleSpec};

fn main() -> hiersurf::Result<()> {
    let spec = ModuleSpec::hierarchical(5, 0)?;
    let noise = NoiseModel::new(IntraModuleNoise::uniform(0.001)?, EntanglementChannel::unpolarised(0.03)?);
    let block = ancilla_cube(&spec, noise, ModuleRole::X, CubeSize::Individual)?;
    let dem = DetectorErrorModel::from_circuit(&block.circuit);
    println!("detectors: {}, noise sites: {}", dem.detectors.len(), dem.sites.len());

    let decoder = BlockDecoder::new(dem, Weighting::LogLikelihood);
    let counts = decoder.run(5_000, 7, 0)?;
    let r = counts.rate(0);
    println!("module measurement error: {:.4} +- {:.4}", r.p, r.sigma);
    println!("unclosed corrections: {}", counts.unclosed);
    Ok(())
}
