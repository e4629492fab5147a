//! Propagates pair errors through the distributed CNOT gadget and checks
//! where they land.

use hiersurf::circuits::distributed_cnot;
use hiersurf::pauli::{EntanglementChannel, IntraModuleNoise};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hiersurf::Result<()> {
    let noiseless = IntraModuleNoise::noiseless();
    for (name, ch) in [
        ("X on e1", EntanglementChannel::new(1.0, 0.0, 0.0)?),
        ("Y on e1", EntanglementChannel::new(0.0, 1.0, 0.0)?),
        ("Z on e1", EntanglementChannel::new(0.0, 0.0, 1.0)?),
    ] {
        let out = distributed_cnot(&ch, &noiseless).run_frame(&mut ChaCha8Rng::seed_from_u64(0), |_, _| {});
        println!(
            "{name}: control {:?}, target {:?}",
            out.final_frame.get(0)?,
            out.final_frame.get(1)?
        );
    }

    // Sampled: an unpolarised pair of fidelity 0.9.
    let circuit = distributed_cnot(&EntanglementChannel::unpolarised(0.1)?, &noiseless);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let trials = 100_000;
    let (mut c, mut t) = (0, 0);
    for _ in 0..trials {
        let f = circuit.run_frame(&mut rng, |_, _| {}).final_frame;
        c += !f.get(0)?.is_identity() as u32;
        t += !f.get(1)?.is_identity() as u32;
    }
    println!(
        "sampled: control error {:.4}, target error {:.4} (expect 2/3 * 0.1 each)",
        c as f64 / trials as f64,
        t as f64 / trials as f64
    );
    Ok(())
}
