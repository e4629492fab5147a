use hiersurf::blocks::{
    ancilla_cube, flat_memory, perimeter_surface, q_cube, q_cube_prepared, tier2_memory, CubeSize, SUPER_ROUND,
};
use hiersurf::circuits::{Built, NoiseModel, Phenomenological};
use hiersurf::pauli::{EntanglementChannel, IntraModuleNoise};
use hiersurf::sim::{Basis, CheckType, DetectorErrorModel};
use hiersurf::tableau::{nondeterministic_detectors, nondeterministic_observables, run_noiseless};
use hiersurf::topology::{ModuleRole, ModuleSpec, NetworkLayout};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Perfect pairs but with the full gadget expanded.
fn gadget_only() -> NoiseModel {
    NoiseModel::new(IntraModuleNoise::noiseless(), EntanglementChannel::perfect())
}

fn assert_deterministic(built: &Built, label: &str) {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let bad = nondeterministic_detectors(&built.circuit, 4, &mut rng);
    assert!(bad.is_empty(), "{label}: {} of {} detectors random, e.g. {:?}", bad.len(),
        built.circuit.detectors.len(), built.circuit.detectors[bad[0]]);
    assert!(!built.circuit.detectors.is_empty(), "{label}: no detectors");
}

fn count(built: &Built, check: CheckType) -> usize {
    built.circuit.detectors.iter().filter(|d| d.check == check).count()
}

#[test]
fn flat_memory_detectors() {
    let layout = NetworkLayout::region(ModuleSpec::simple(1, 0).unwrap(), (0, 0), 5, 5).unwrap();
    let b = flat_memory(&layout, gadget_only(), 3).unwrap();
    assert_deterministic(&b, "flat");
    // 6 X and 6 Z plaquettes on a 5x5 lattice; 3 noisy rounds plus readout,
    // plus the Z checks of the preparation round
    assert_eq!(count(&b, CheckType::X), 6 * 4);
    assert_eq!(count(&b, CheckType::Z), 6 * 5);
}

#[test]
fn tier2_detectors() {
    let phen = Phenomenological { data_z: 0.01, data_x: 0.01, meas_x: 0.01, meas_z: 0.01 };
    let b = tier2_memory(3, 3, phen).unwrap();
    assert_deterministic(&b, "tier2");
    assert_eq!(b.circuit.observables.len(), 2);
}

#[test]
fn ancilla_cubes_are_deterministic() {
    let spec = ModuleSpec::hierarchical(5, 0).unwrap();
    for role in [ModuleRole::X, ModuleRole::Z] {
        for size in [CubeSize::Individual, CubeSize::Triple] {
            let b = ancilla_cube(&spec, gadget_only(), role, size).unwrap();
            let label = format!("{role:?} {size:?}");
            assert_deterministic(&b, &label);
            let obs = &b.circuit.observables[0];
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            for _ in 0..4 {
                let rec = run_noiseless(&b.circuit, &mut rng);
                assert!(!obs.records.iter().fold(false, |a, &r| a ^ rec[r]), "{label}: module outcome random");
            }
        }
    }
}

#[test]
fn q_cubes_are_deterministic() {
    for d in [5, 9] {
        let spec = ModuleSpec::hierarchical(d, 0).unwrap();
        for size in [CubeSize::Individual, CubeSize::Triple] {
            // index 0 is X_M, 1 is Z_M; only the prepared one has a fixed value
            for (init, random) in [(Basis::X, 1), (Basis::Z, 0)] {
                let b = q_cube_prepared(&spec, gadget_only(), size, &SUPER_ROUND, init).unwrap();
                let label = format!("q D={d} {size:?} {init:?}");
                assert_deterministic(&b, &label);
                let mut rng = ChaCha8Rng::seed_from_u64(3);
                assert_eq!(nondeterministic_observables(&b.circuit, 6, &mut rng), vec![random], "{label}");
            }
        }
    }
}

#[test]
fn cube_logicals_have_no_silent_faults() {
    let noise = NoiseModel::new(
        IntraModuleNoise::uniform(0.001).unwrap(),
        EntanglementChannel::unpolarised(0.03).unwrap(),
    );
    let spec = ModuleSpec::hierarchical(5, 0).unwrap();
    let mut blocks = vec![q_cube(&spec, noise, CubeSize::Individual, &SUPER_ROUND).unwrap()];
    for role in [ModuleRole::X, ModuleRole::Z] {
        blocks.push(ancilla_cube(&spec, noise, role, CubeSize::Individual).unwrap());
    }
    for b in &blocks {
        let dem = DetectorErrorModel::from_circuit(&b.circuit);
        for site in &dem.sites {
            for o in &site.outcomes {
                assert!(
                    !(o.effect.detectors.is_empty() && o.effect.observables != 0),
                    "single fault flips a logical without a detector"
                );
            }
        }
    }
}

#[test]
fn perimeter_surface_has_only_boundary_faults() {
    let ch = EntanglementChannel::unpolarised(0.1).unwrap();
    let b = perimeter_surface(3, ch).unwrap();
    assert_deterministic(&b, "perimeter");
    let dem = DetectorErrorModel::from_circuit(&b.circuit);
    assert!(!dem.sites.is_empty());
    // every X-type detector that any fault touches sits on a stitched column
    let d = 5i64;
    for site in &dem.sites {
        for o in &site.outcomes {
            for &det in &o.effect.detectors {
                let det = &dem.detectors[det as usize];
                if det.check == CheckType::X {
                    let c = det.coords.1;
                    assert!(c == 2 * d || c == 3 * d - 1, "X detector at column {c}");
                }
            }
        }
    }
}

#[test]
fn zero_noise_gives_empty_model() {
    let spec = ModuleSpec::hierarchical(5, 0).unwrap();
    let b = q_cube(&spec, NoiseModel::noiseless(), CubeSize::Individual, &SUPER_ROUND).unwrap();
    assert!(DetectorErrorModel::from_circuit(&b.circuit).sites.is_empty());
}

#[test]
fn cubes_reject_simple_modules() {
    let spec = ModuleSpec::simple(4, 1).unwrap();
    assert!(q_cube(&spec, gadget_only(), CubeSize::Individual, &SUPER_ROUND).is_err());
    assert!(ancilla_cube(&spec, gadget_only(), ModuleRole::X, CubeSize::Individual).is_err());
}
