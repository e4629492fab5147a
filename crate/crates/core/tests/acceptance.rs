//! Acceptance criteria 1-9. Each test prints one PASS/FAIL line before
//! asserting. Criteria 3 and 8 take hours on one core and are ignored by
//! default: `cargo test --test acceptance -- --include-ignored`.

use std::time::Instant;

use hiersurf::blocks::{ancilla_cube, perimeter_surface, q_cube, CubeSize, SUPER_ROUND};
use hiersurf::circuits::{distributed_cnot, module_stabiliser_protocol, NoiseModel, ProtocolParams};
use hiersurf::decoder::{estimate_module_rates, BlockDecoder, Rate, Weighting};
use hiersurf::experiments::{
    cost_report, cost_scan, CostReport, CostScan, fit_rescaled, fit_simple, link_noise, purify_table, run_perimeter_sweep,
    run_threshold_sweep, CostConfig, SweepConfig, System,
};
use hiersurf::matching::{matching_weight, min_weight_perfect_matching};
use hiersurf::pauli::{propagate_through_clifford, Clifford, EntanglementChannel, IntraModuleNoise, Pauli, PauliFrame};
use hiersurf::purification::completion_monte_carlo;
use hiersurf::sim::{DetectorErrorModel, Instr, NoiseKind, NoiseSite};
use hiersurf::topology::{ModuleRole, ModuleSpec, NetworkLayout};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn report(criterion: u32, name: &str, ok: bool, detail: &str) {
    println!("criterion {criterion} [{name}]: {} {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {criterion} failed: {detail}");
}

fn within(x: f64, want: f64, rel: f64) -> bool {
    (x - want).abs() <= rel * want
}

#[test]
fn c1_purification_budgets() {
    let start = Instant::now();
    let mut bad = Vec::new();
    let cases: [(f64, f64, [usize; 9]); 2] = [
        (0.985, 0.99, [1, 4, 8, 16, 32, 64, 132, 268, 544]),
        (0.85, 0.999, [1, 10, 26, 44, 92, 150, 286, 542, 1064]),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for (f, ps, want) in cases {
        let rows = purify_table(f, 0.001, ps, 8).unwrap();
        for (row, &w) in rows.iter().zip(&want) {
            let ok = if f > 0.9 && row.n_d <= 5 {
                row.n == w
            } else if row.n_d <= 3 {
                // one tier step: the budget moves in units of 2^n_D
                row.n.abs_diff(w) <= 1 << row.n_d
            } else {
                within(row.n as f64, w as f64, 0.15)
            };
            if !ok {
                bad.push(format!("F={f} P_S={ps} n_D={}: {} vs {w}", row.n_d, row.n));
            }
        }
        // the DP's completion probability against sampled purification trees
        let top = rows.last().unwrap();
        let plan_acc = top_acceptance(f, 8);
        let trials = 100_000;
        let mc = completion_monte_carlo(&plan_acc, top.n, trials, &mut rng);
        let sigma = (ps * (1.0 - ps) / trials as f64).sqrt();
        if mc < ps - 4.0 * sigma {
            bad.push(format!("F={f}: sampled completion {mc} below {ps}"));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let detail = format!("{} deviations {:?}, {secs:.1} s", bad.len(), bad);
    report(1, "purification budgets", bad.is_empty() && secs < 360.0, &detail);
}

fn top_acceptance(f: f64, n_d: usize) -> Vec<f64> {
    use hiersurf::purification::{purify_channel, PurificationPlan};
    use hiersurf::sim::CheckType;
    let raw = EntanglementChannel::unpolarised(1.0 - f).unwrap();
    let plan = PurificationPlan::for_check(CheckType::Z, n_d, raw, IntraModuleNoise::uniform(0.001).unwrap());
    purify_channel(&plan).unwrap().acceptance
}

#[test]
fn c2_perimeter_threshold() {
    let start = Instant::now();
    let qs = hiersurf::experiments::parse_grid("0.09:0.12:0.005").unwrap();
    let cfg = SweepConfig::new(ModuleSpec::simple(1, 0).unwrap(), vec![3, 5, 7], qs, 0.0, 10_000, 2);
    let sweep = run_perimeter_sweep(&cfg).unwrap();
    let th = sweep.threshold.map(|c| c.x);
    let ok = th.is_some_and(|x| (0.09..=0.11).contains(&x));
    let detail = format!(
        "crossings {:?}, threshold {th:?} (band 0.09..0.11), {:.0} s",
        sweep.crossings.iter().map(|c| (c.smaller, c.larger, c.x)).collect::<Vec<_>>(),
        start.elapsed().as_secs_f64()
    );
    report(2, "2D perimeter threshold", ok, &detail);
}

fn best(s: &CostScan) -> Option<&CostReport> {
    s.best.map(|i| &s.reports[i])
}

fn hier_threshold(d: usize, eps: f64, rates: &str, trials: u64) -> Option<f64> {
    let grid = hiersurf::experiments::parse_grid(rates).unwrap();
    let cfg = SweepConfig::new(ModuleSpec::hierarchical(d, 0).unwrap(), vec![3, 5, 7], grid, eps, trials, 3);
    let sweep = run_threshold_sweep(&cfg).unwrap();
    for p in &sweep.points {
        println!("  D={d} eps={eps} 1-F={:.4} L={} p_round={:.5}", p.x, p.logical.distance, p.logical.per_round.p);
    }
    sweep.threshold.map(|c| c.x)
}

#[test]
#[ignore = "hours on one core"]
fn c3_threshold_versus_module_dimension() {
    let grid = "0.01:0.08:0.005";
    let th: Vec<Option<f64>> = [5, 9, 13].iter().map(|&d| hier_threshold(d, 0.0, grid, 4_000)).collect();
    let noisy = hier_threshold(5, 0.001, grid, 4_000);
    let vals: Option<Vec<f64>> = th.iter().copied().collect();
    let in_range = vals.as_ref().is_some_and(|v| v.iter().all(|&x| x > 0.0165 && x < 0.15));
    let monotone = vals.as_ref().is_some_and(|v| v.windows(2).all(|w| w[0] < w[1]));
    let drop = match (th[0], noisy) {
        (Some(a), Some(b)) => Some(a - b),
        _ => None,
    };
    let drop_ok = drop.is_some_and(|x| (0.0045..=0.0105).contains(&x));
    let detail = format!("thresholds D=5,9,13: {th:?}; D=5 with eps=0.1%: {noisy:?}; drop {drop:?} (want 0.0075 +- 0.003)");
    report(3, "threshold vs module dimension", in_range && monotone && drop_ok, &detail);
}

/// Exhaustive minimum over perfect matchings; `None` if there is none.
fn brute_force(free: &mut Vec<usize>, w: &[Vec<Option<i64>>]) -> Option<i64> {
    if free.is_empty() {
        return Some(0);
    }
    let a = free.remove(0);
    let mut best: Option<i64> = None;
    for i in 0..free.len() {
        let b = free.remove(i);
        if let (Some(wab), Some(rest)) = (w[a][b], brute_force(free, w)) {
            best = Some(best.map_or(wab + rest, |x| x.min(wab + rest)));
        }
        free.insert(i, b);
    }
    free.insert(0, a);
    best
}

#[test]
fn c4_matching_oracle() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut mismatches = 0;
    for _ in 0..1000 {
        let n = 2 * rng.gen_range(1..=5);
        let density = rng.gen_range(0.4..=1.0);
        let mut edges = Vec::new();
        let mut table = vec![vec![None; n]; n];
        for a in 0..n {
            for b in a + 1..n {
                if rng.gen::<f64>() < density {
                    let w = rng.gen_range(0..100);
                    edges.push((a, b, w));
                    table[a][b] = Some(w);
                    table[b][a] = Some(w);
                }
            }
        }
        let want = brute_force(&mut (0..n).collect(), &table);
        let got = min_weight_perfect_matching(n, &edges).ok().map(|p| matching_weight(&edges, &p));
        let got = got.flatten();
        if got != want {
            mismatches += 1;
        }
    }
    let detail = format!("{mismatches} mismatches in 1000 instances, {:.1} s", start.elapsed().as_secs_f64());
    report(4, "decoder oracle equivalence", mismatches == 0, &detail);
}

#[test]
fn c5_closure_and_perimeter_support() {
    let spec = ModuleSpec::hierarchical(5, 0).unwrap();
    let noise = NoiseModel::new(IntraModuleNoise::uniform(0.002).unwrap(), EntanglementChannel::unpolarised(0.05).unwrap());
    let blocks = [
        ("perimeter", perimeter_surface(5, EntanglementChannel::unpolarised(0.15).unwrap()).unwrap()),
        ("Q cube", q_cube(&spec, noise, CubeSize::Individual, &SUPER_ROUND).unwrap()),
        ("X cube", ancilla_cube(&spec, noise, ModuleRole::X, CubeSize::Individual).unwrap()),
        ("Z cube", ancilla_cube(&spec, noise, ModuleRole::Z, CubeSize::Individual).unwrap()),
    ];
    let mut unclosed = Vec::new();
    for (i, (name, b)) in blocks.iter().enumerate() {
        let dec = BlockDecoder::new(DetectorErrorModel::from_circuit(&b.circuit), Weighting::LogLikelihood);
        let c = dec.run(100_000, 5, i as u64).unwrap();
        unclosed.push((*name, c.unclosed));
    }

    let layout = NetworkLayout::region(spec, (0, 0), 3, 3).unwrap();
    let link_only = NoiseModel::new(IntraModuleNoise::noiseless(), EntanglementChannel::unpolarised(0.2).unwrap());
    let proto = module_stabiliser_protocol(&layout, &ProtocolParams::for_layout(&layout, 1), link_only).unwrap();
    let clients = proto.built.clients;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut touched, mut outside) = (0u64, 0u64);
    for _ in 0..100_000 {
        proto.built.circuit.run_frame(&mut rng, |_, frame| {
            for q in frame.support().into_iter().filter(|&q| q < clients) {
                touched += 1;
                outside += !layout.qubits[q].perimeter.is_perimeter() as u64;
            }
        });
    }
    let ok = unclosed.iter().all(|u| u.1 == 0) && outside == 0 && touched > 0;
    let detail = format!("unclosed {unclosed:?}; {outside} non-perimeter hits of {touched}");
    report(5, "closure and support invariants", ok, &detail);
}

#[test]
fn c6_distributed_cnot_equivalence() {
    let c = distributed_cnot(&EntanglementChannel::perfect(), &IntraModuleNoise::noiseless());
    let mut wrong = Vec::new();
    for k in 0..16 {
        let (pc, pt) = (Pauli::from_index(k >> 2), Pauli::from_index(k & 3));
        let mut circ = c.clone();
        for (qubit, pauli) in [(0, pc), (1, pt)] {
            circ.sites.push(NoiseSite { p: 1.0, kind: NoiseKind::Flip { qubit, pauli } });
            let n = circ.sites.len();
            circ.instrs.insert(0, Instr::Noise(n - 1));
        }
        let out = circ.run_frame(&mut ChaCha8Rng::seed_from_u64(k as u64), |_, _| {});
        let mut expect = PauliFrame::new(2);
        expect.apply(0, pc).unwrap();
        expect.apply(1, pt).unwrap();
        let expect = propagate_through_clifford(expect, Clifford::Cnot { control: 0, target: 1 }).unwrap();
        if (0..2).any(|q| out.final_frame.get(q).unwrap() != expect.get(q).unwrap()) {
            wrong.push(format!("{pc}{pt}"));
        }
    }
    report(6, "distributed CNOT equivalence", wrong.is_empty(), &format!("16 inputs, mismatches {wrong:?}"));
}

#[test]
fn c7_fit_recovery() {
    let (eps0, kappa) = (0.08, 0.9);
    let (alpha, beta, gamma) = (1.7, -1.1, -2.0);
    let simple = |noise: &dyn Fn() -> f64| -> Vec<(usize, f64)> {
        [3, 5, 7, 9, 11].iter().map(|&l| (l, eps0 * (-kappa * l as f64).exp() * noise())).collect()
    };
    let rescaled = |noise: &dyn Fn() -> f64| -> Vec<(f64, usize, f64)> {
        let mut pts = Vec::new();
        for r in [0.25, 0.5, 1.0, 2.0, 3.0] {
            for l in [3, 5, 7] {
                pts.push((r, l, ((alpha * f64::ln(r) + beta) * l as f64 + gamma).exp() * noise()));
            }
        }
        pts
    };
    let exact = || 1.0;
    let rng = std::cell::RefCell::new(ChaCha8Rng::seed_from_u64(7));
    let normal = Normal::new(0.0, 0.01).unwrap();
    let noisy = || 1.0 + normal.sample(&mut *rng.borrow_mut());

    let mut fails = Vec::new();
    let mut check = |name: &str, got: f64, want: f64, tol: f64| {
        if !within(got, want, tol) {
            fails.push(format!("{name}: {got} vs {want}"));
        }
    };
    for (label, tol, noise) in [("exact", 1e-9, &exact as &dyn Fn() -> f64), ("1% noise", 0.10, &noisy)] {
        let s = fit_simple(&simple(noise)).unwrap();
        check(&format!("{label} simple eps0"), s.eps0, eps0, tol);
        check(&format!("{label} simple kappa"), s.kappa, kappa, tol);
        let r = fit_rescaled(&rescaled(noise)).unwrap();
        check(&format!("{label} alpha"), r.alpha.unwrap(), alpha, tol);
        check(&format!("{label} kappa = -beta"), r.kappa, -beta, tol);
        check(&format!("{label} eps0 = e^gamma"), r.eps0, gamma.exp(), tol);
    }
    report(7, "fit recovery", fails.is_empty(), &format!("{fails:?}"));
}

#[test]
#[ignore = "about an hour on one core"]
fn c8_cost_pipeline() {
    let cfg = CostConfig { trials: 4_000, ..CostConfig::default() };
    let (inf, eps, target) = (0.15, 0.001, 1e-12);
    let simple = cost_scan(ModuleSpec::simple(1, 0).unwrap(), &[4, 5, 6, 7, 8], inf, eps, target, &cfg).unwrap();
    let hier = cost_scan(ModuleSpec::hierarchical(9, 0).unwrap(), &[1, 2, 3, 4], inf, eps, target, &cfg).unwrap();
    let mono = cost_report(System::Monolithic, inf, eps, target, &cfg).unwrap();
    let simple_best = best(&simple);
    let n_d_ok = simple_best.is_some_and(|r| matches!(r.system, System::Modules(m) if (5..=7).contains(&m.purification_tiers)));
    let simple_q = simple_best.and_then(|r| r.total_qubits);
    let hier_q = best(&hier).and_then(|r| r.total_qubits);
    let hier_ok = matches!((hier_q, simple_q), (Some(h), Some(s)) if h < s);
    let ratio = simple_q.zip(mono.total_qubits).map(|(s, m)| s / m);
    let ratio_ok = ratio.is_some_and(|x| (10.0 / 1.5..=20.0 * 1.5).contains(&x));
    let per_depth = |s: &CostScan| {
        s.reports
            .iter()
            .map(|r| (r.qubits_per_module, r.l_min, r.total_qubits))
            .collect::<Vec<_>>()
    };
    let detail = format!(
        "simple (S, L, qubits) {:?}; hierarchical D=9 {:?}; monolithic L={:?} qubits={:?}; simple/monolithic {ratio:?}",
        per_depth(&simple),
        per_depth(&hier),
        mono.l_min,
        mono.total_qubits
    );
    println!("  simple best n_D in 5..=7: {n_d_ok}, hierarchical below simple: {hier_ok}, ratio in [6.7, 30]: {ratio_ok}");
    report(8, "cost pipeline", n_d_ok && hier_ok && ratio_ok, &detail);
}

#[test]
fn c9_individual_cube_approximation() {
    let spec = ModuleSpec::hierarchical(5, 0).unwrap();
    let noise = link_noise(&spec, EntanglementChannel::unpolarised(0.03).unwrap(), 0.001).unwrap().noise;
    let run = |size| estimate_module_rates(&spec, noise, size, 20_000, 9, Weighting::LogLikelihood).unwrap();
    let (a, b) = (run(CubeSize::Individual), run(CubeSize::Triple));
    let pairs: [(&str, Rate, Rate); 4] = [
        ("P_M", a.p_m, b.p_m),
        ("P_M_Z", a.p_m_z, b.p_m_z),
        ("P_P", a.p_p, b.p_p),
        ("P_B", a.p_b, b.p_b),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, x, y) in pairs {
        let z = (x.p - y.p).abs() / (x.sigma.powi(2) + y.sigma.powi(2)).sqrt().max(1e-12);
        ok &= z <= 3.0;
        parts.push(format!("{name} {:.4}/{:.4} ({z:.1} sigma)", x.p, y.p));
    }
    report(9, "individual vs triple cubes", ok, &parts.join(", "));
}
