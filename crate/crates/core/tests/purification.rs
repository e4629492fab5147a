use hiersurf::pauli::{EntanglementChannel, IntraModuleNoise, Pauli};
use hiersurf::purification::{
    budget, completion_monte_carlo, consumption_distribution, purify_channel, PurificationPlan, TierKind,
};
use hiersurf::sim::{Basis, CheckType, Circuit};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn eps() -> IntraModuleNoise {
    IntraModuleNoise::uniform(0.001).unwrap()
}

fn n_for(f: f64, ps: f64, n_d: usize) -> usize {
    let plan = PurificationPlan::for_check(CheckType::Z, n_d, EntanglementChannel::unpolarised(1.0 - f).unwrap(), eps());
    budget(&purify_channel(&plan).unwrap(), ps).unwrap().n
}

#[test]
fn budget_examples() {
    assert_eq!(n_for(0.985, 0.99, 2), 8);
    assert_eq!(n_for(0.85, 0.999, 8), 1064);
    for (f, ps) in [(0.985, 0.99), (0.985, 0.999), (0.85, 0.99), (0.85, 0.999)] {
        assert_eq!(n_for(f, ps, 0), 1);
    }
}

#[test]
fn budget_grows_with_tiers_and_respects_tree_bound() {
    let mut prev = 0;
    for n_d in 0..=8 {
        let n = n_for(0.85, 0.999, n_d);
        assert!(n >= 1 << n_d);
        assert!(n >= prev);
        prev = n;
    }
}

#[test]
fn unpolarised_channel_is_symmetric_in_first_tier() {
    let raw = EntanglementChannel::unpolarised(0.15).unwrap();
    for n_d in 1..=4 {
        let a = purify_channel(&PurificationPlan::for_check(CheckType::X, n_d, raw, eps())).unwrap();
        let b = purify_channel(&PurificationPlan::for_check(CheckType::Z, n_d, raw, eps())).unwrap();
        for (x, y) in a.acceptance.iter().zip(&b.acceptance) {
            assert!((x - y).abs() < 1e-12);
        }
        assert!((a.output.p_x - b.output.p_z).abs() < 1e-12);
        assert!((a.output.p_y - b.output.p_y).abs() < 1e-12);
    }
}

#[test]
fn perfect_gates_bit_tier_squares_bit_errors() {
    let q: f64 = 0.1;
    let plan = PurificationPlan::alternating(
        1,
        TierKind::Bit,
        EntanglementChannel::new(q, 0.0, 0.0).unwrap(),
        IntraModuleNoise::noiseless(),
    );
    let r = purify_channel(&plan).unwrap();
    let expect = q * q / (q * q + (1.0 - q) * (1.0 - q));
    assert!((r.output.bit_error_rate() - expect).abs() < 1e-12);
    assert!((expect - 0.0122).abs() < 1e-4);
    assert!((r.acceptance[0] - (q * q + (1.0 - q) * (1.0 - q))).abs() < 1e-12);
}

#[test]
fn perfect_gates_bit_tier_doubles_phase_errors() {
    let q: f64 = 0.05;
    let plan = PurificationPlan::alternating(
        1,
        TierKind::Bit,
        EntanglementChannel::new(0.0, 0.0, q).unwrap(),
        IntraModuleNoise::noiseless(),
    );
    let r = purify_channel(&plan).unwrap();
    assert!((r.output.phase_error_rate() - 2.0 * q * (1.0 - q)).abs() < 1e-12);
    assert!((r.acceptance[0] - 1.0).abs() < 1e-12);
}

#[test]
fn perfect_everything_stays_perfect() {
    let plan = PurificationPlan::alternating(3, TierKind::Phase, EntanglementChannel::perfect(), IntraModuleNoise::noiseless());
    let r = purify_channel(&plan).unwrap();
    assert_eq!(r.output.infidelity(), 0.0);
    assert!(r.acceptance.iter().all(|&a| a == 1.0));
}

#[test]
fn acceptance_stays_positive_under_heavy_noise() {
    let noise = IntraModuleNoise::new(0.0, 0.5, 0.0, 0.5).unwrap();
    let plan = PurificationPlan::alternating(3, TierKind::Bit, EntanglementChannel::unpolarised(0.7).unwrap(), noise);
    let r = purify_channel(&plan).unwrap();
    assert!(r.acceptance.iter().all(|&a| a > 0.0 && a <= 1.0));
}

proptest! {
    #[test]
    fn perfect_gate_tiers_reduce_their_error(px in 0.0f64..0.3, py in 0.0f64..0.1, pz in 0.0f64..0.3) {
        let raw = EntanglementChannel::new(px, py, pz).unwrap();
        let bit = purify_channel(&PurificationPlan::alternating(1, TierKind::Bit, raw, IntraModuleNoise::noiseless())).unwrap();
        let qb = raw.bit_error_rate();
        if qb > 1e-6 && qb < 0.5 {
            prop_assert!(bit.output.bit_error_rate() < qb);
        }
        let phase = purify_channel(&PurificationPlan::alternating(1, TierKind::Phase, raw, IntraModuleNoise::noiseless())).unwrap();
        let qp = raw.phase_error_rate();
        if qp > 1e-6 && qp < 0.5 {
            prop_assert!(phase.output.phase_error_rate() < qp);
        }
    }
}

/// One tier simulated as a noisy circuit: swap of the kept pair on both
/// sides, bilateral check, post-selection. Returns the accepted output
/// Pauli counts (I, X, Y, Z) and the number of accepted shots.
fn sampled_tier(kind: TierKind, raw: &EntanglementChannel, e: &IntraModuleNoise, shots: usize) -> ([usize; 4], usize) {
    // l1 u1 l2 u2 b1 b2
    let mut c = Circuit::new(6);
    c.pauli_channel(0, raw);
    c.pauli_channel(4, raw);
    for (l, u) in [(0, 1), (2, 3)] {
        c.cnot(l, u, e.eps_2q);
        c.cnot(u, l, e.eps_2q);
        c.cnot(l, u, e.eps_2q);
    }
    let (r1, r2) = match kind {
        TierKind::Bit => {
            c.cnot(1, 4, e.eps_2q);
            c.cnot(3, 5, e.eps_2q);
            (c.measure(4, Basis::Z, e.eps_meas), c.measure(5, Basis::Z, e.eps_meas))
        }
        TierKind::Phase => {
            c.cnot(4, 1, e.eps_2q);
            c.cnot(5, 3, e.eps_2q);
            (c.measure(4, Basis::X, e.eps_meas), c.measure(5, Basis::X, e.eps_meas))
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut counts = [0usize; 4];
    let mut accepted = 0;
    for _ in 0..shots {
        let out = c.run_frame(&mut rng, |_, _| {});
        if out.record_flips[r1] != out.record_flips[r2] {
            continue;
        }
        accepted += 1;
        let p = out.final_frame.get(1).unwrap().mul(out.final_frame.get(3).unwrap());
        counts[p.index()] += 1;
    }
    (counts, accepted)
}

#[test]
fn analytic_tier_matches_frame_sampling() {
    let shots = 1_000_000;
    let raw = EntanglementChannel::new(0.06, 0.03, 0.04).unwrap();
    let e = IntraModuleNoise::uniform(0.02).unwrap();
    for kind in [TierKind::Bit, TierKind::Phase] {
        let exact = purify_channel(&PurificationPlan::alternating(1, kind, raw, e)).unwrap();
        let (counts, acc) = sampled_tier(kind, &raw, &e, shots);
        let pa = exact.acceptance[0];
        let sa = (pa * (1.0 - pa) / shots as f64).sqrt();
        assert!((acc as f64 / shots as f64 - pa).abs() < 3.0 * sa, "{kind:?} acceptance");
        let probs = exact.output.probabilities();
        for (k, p) in [Pauli::X, Pauli::Y, Pauli::Z].into_iter().enumerate() {
            let est = counts[p.index()] as f64 / acc as f64;
            let want = probs[k + 1];
            let sigma = (want * (1.0 - want) / acc as f64).sqrt();
            assert!((est - want).abs() < 3.0 * sigma, "{kind:?} {p}: {est} vs {want}");
        }
    }
}

#[test]
fn dp_matches_monte_carlo_on_table_cells() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (f, ps) in [(0.985, 0.99), (0.985, 0.999), (0.85, 0.99), (0.85, 0.999)] {
        for n_d in 1..=4 {
            let plan = PurificationPlan::for_check(CheckType::Z, n_d, EntanglementChannel::unpolarised(1.0 - f).unwrap(), eps());
            let r = purify_channel(&plan).unwrap();
            let b = budget(&r, ps).unwrap();
            let trials = 100_000;
            let mc = completion_monte_carlo(&r.acceptance, b.n, trials, &mut rng);
            let sigma = (b.completion * (1.0 - b.completion) / trials as f64).sqrt().max(1e-5);
            assert!((mc - b.completion).abs() < 3.0 * sigma, "F={f} P_S={ps} n_D={n_d}: {mc} vs {}", b.completion);
        }
    }
}

#[test]
fn consumption_distribution_is_normalised() {
    let g = consumption_distribution(&[0.9, 0.8], 4096);
    assert!((g.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    assert_eq!(g[3], 0.0);
    assert!((g[4] - 0.9 * 0.9 * 0.8).abs() < 1e-12);
}

#[test]
fn unreachable_target_reports_cap() {
    let plan = PurificationPlan::alternating(
        2,
        TierKind::Bit,
        EntanglementChannel::new(0.45, 0.0, 0.0).unwrap(),
        IntraModuleNoise::uniform(0.3).unwrap(),
    );
    let mut fake = purify_channel(&plan).unwrap();
    fake.acceptance = vec![1e-4, 1e-4];
    assert!(matches!(budget(&fake, 0.999), Err(hiersurf::Error::BudgetUnreachable { .. })));
}
