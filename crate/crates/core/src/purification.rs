//! Tiered entanglement purification in broker units and raw-pair budgets.
//!
//! A pair's error is tracked as one Bell-diagonal Pauli: a two-sided error
//! `P1 (x) P2` on a Bell pair is equivalent to `P1 P2` on one side. Each tier
//! consumes a kept pair (moved up one broker level by a swap of three noisy
//! CNOTs per side) and a sacrificial pair, applies the bilateral bit or phase
//! check and post-selects on agreeing outcomes. Output channels are computed
//! exactly by enumerating every input Pauli and every gate-noise outcome.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{EntanglementChannel, IntraModuleNoise, Pauli};
use crate::sim::CheckType;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TierKind {
    /// CNOT kept -> sacrificial, sacrificial read in Z; removes X and Y.
    Bit,
    /// CNOT sacrificial -> kept, sacrificial read in X; removes Z and Y.
    Phase,
}

impl TierKind {
    pub fn other(self) -> TierKind {
        match self {
            TierKind::Bit => TierKind::Phase,
            TierKind::Phase => TierKind::Bit,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PurificationPlan {
    pub tiers: Vec<TierKind>,
    pub raw: EntanglementChannel,
    pub noise: IntraModuleNoise,
}

impl PurificationPlan {
    /// `n_d` alternating tiers starting with `first`.
    pub fn alternating(n_d: usize, first: TierKind, raw: EntanglementChannel, noise: IntraModuleNoise) -> Self {
        let mut tiers = Vec::with_capacity(n_d);
        let mut t = first;
        for _ in 0..n_d {
            tiers.push(t);
            t = t.other();
        }
        Self { tiers, raw, noise }
    }

    /// Plan for pairs consumed by plaquettes of type `check`: phase errors
    /// first for X-type, bit errors first for Z-type.
    pub fn for_check(check: CheckType, n_d: usize, raw: EntanglementChannel, noise: IntraModuleNoise) -> Self {
        let first = match check {
            CheckType::X => TierKind::Phase,
            CheckType::Z => TierKind::Bit,
        };
        Self::alternating(n_d, first, raw, noise)
    }

    pub fn validate(&self) -> Result<()> {
        for w in self.tiers.windows(2) {
            if w[0] == w[1] {
                return Err(Error::Config("purification tiers must alternate".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PurifiedChannelReport {
    pub output: EntanglementChannel,
    /// Acceptance probability of each tier, bottom first.
    pub acceptance: Vec<f64>,
    /// Output channel after each tier.
    pub per_tier: Vec<EntanglementChannel>,
    pub tiers: usize,
}

/// Probabilities of I, X, Y, Z (index = x + 2z).
type Dist = [f64; 4];

fn bits(p: usize) -> (bool, bool) {
    (p & 1 == 1, p & 2 == 2)
}

fn index(x: bool, z: bool) -> usize {
    x as usize | (z as usize) << 1
}

fn to_dist(ch: &EntanglementChannel) -> Dist {
    let [i, x, y, z] = ch.probabilities();
    [i, x, z, y]
}

fn from_dist(d: &Dist, tier: usize) -> Result<EntanglementChannel> {
    let total: f64 = d.iter().sum();
    if total <= 0.0 {
        return Err(Error::DegenerateChannel { tier });
    }
    EntanglementChannel::new(d[1] / total, d[3] / total, d[2] / total)
}

/// Non-identity two-qubit Paulis and their weights under depolarising
/// noise of rate `eps` (identity included with weight `1 - eps`).
fn depolarising2(eps: f64) -> Vec<(usize, usize, f64)> {
    let mut out = vec![(0, 0, 1.0 - eps)];
    if eps > 0.0 {
        for k in 1..16 {
            let a = Pauli::from_index(k >> 2);
            let b = Pauli::from_index(k & 3);
            out.push((index(a.has_x(), a.has_z()), index(b.has_x(), b.has_z()), eps / 15.0));
        }
    }
    out
}

/// Frame CNOT on packed Paulis.
fn cnot(c: &mut usize, t: &mut usize) {
    let (cx, cz) = bits(*c);
    let (tx, tz) = bits(*t);
    *t = index(tx ^ cx, tz);
    *c = index(cx, cz ^ tz);
}

/// Transition matrix of moving a qubit up one level with three noisy CNOTs:
/// `m[p][q]` = probability that input Pauli `p` on the lower qubit arrives
/// as `q` on the upper one.
fn swap_channel(eps2: f64) -> [[f64; 4]; 4] {
    let noise = depolarising2(eps2);
    let mut m = [[0.0; 4]; 4];
    for (p, row) in m.iter_mut().enumerate() {
        for &(a1, b1, w1) in &noise {
            for &(a2, b2, w2) in &noise {
                for &(_, b3, w3) in &noise {
                    let (mut lo, mut up) = (p, 0usize);
                    cnot(&mut lo, &mut up);
                    lo ^= a1;
                    up ^= b1;
                    cnot(&mut up, &mut lo);
                    up ^= a2;
                    lo ^= b2;
                    cnot(&mut lo, &mut up);
                    up ^= b3;
                    row[up] += w1 * w2 * w3;
                }
            }
        }
    }
    m
}

/// Distribution of `P * Q` with `P ~ a`, `Q ~ b` independent.
fn compose(a: &Dist, b: &Dist) -> Dist {
    let mut out = [0.0; 4];
    for (i, &pa) in a.iter().enumerate() {
        for (j, &pb) in b.iter().enumerate() {
            out[i ^ j] += pa * pb;
        }
    }
    out
}

fn apply_matrix(d: &Dist, m: &[[f64; 4]; 4]) -> Dist {
    let mut out = [0.0; 4];
    for (p, &w) in d.iter().enumerate() {
        for q in 0..4 {
            out[q] += w * m[p][q];
        }
    }
    out
}

/// One tier: returns the unnormalised accepted output distribution (its
/// sum is the acceptance probability).
fn tier(kind: TierKind, kept: &Dist, sac: &Dist, noise: &IntraModuleNoise) -> Dist {
    let swap = swap_channel(noise.eps_2q);
    // kept pair moved up on both sides
    let moved = apply_matrix(kept, &swap);
    let side2 = swap[0];
    let kept = compose(&moved, &side2);
    let dep = depolarising2(noise.eps_2q);
    let em = noise.eps_meas;
    let mut out = [0.0; 4];
    for (ka, &wk) in kept.iter().enumerate() {
        if wk == 0.0 {
            continue;
        }
        for (sb, &ws) in sac.iter().enumerate() {
            if ws == 0.0 {
                continue;
            }
            for &(n1a, n1b, w1) in &dep {
                for &(n2a, n2b, w2) in &dep {
                    // errors start on side 1
                    let (mut a1, mut b1, mut a2, mut b2) = (ka, sb, 0usize, 0usize);
                    match kind {
                        TierKind::Bit => {
                            cnot(&mut a1, &mut b1);
                            cnot(&mut a2, &mut b2);
                        }
                        TierKind::Phase => {
                            cnot(&mut b1, &mut a1);
                            cnot(&mut b2, &mut a2);
                        }
                    }
                    // depolarising noise after each CNOT; slot order
                    // (control, target) does not matter for a uniform channel
                    a1 ^= n1a;
                    b1 ^= n1b;
                    a2 ^= n2a;
                    b2 ^= n2b;
                    let (f1, f2) = match kind {
                        TierKind::Bit => (bits(b1).0, bits(b2).0),
                        TierKind::Phase => (bits(b1).1, bits(b2).1),
                    };
                    let w = wk * ws * w1 * w2;
                    // measurement flips m1, m2
                    let agree_clean = f1 == f2;
                    let p_accept = if agree_clean {
                        (1.0 - em) * (1.0 - em) + em * em
                    } else {
                        2.0 * em * (1.0 - em)
                    };
                    out[a1 ^ a2] += w * p_accept;
                }
            }
        }
    }
    out
}

/// Exact output channel and per-tier acceptance of `plan`.
pub fn purify_channel(plan: &PurificationPlan) -> Result<PurifiedChannelReport> {
    plan.validate()?;
    let mut cur = to_dist(&plan.raw);
    let mut acceptance = Vec::with_capacity(plan.tiers.len());
    let mut per_tier = Vec::with_capacity(plan.tiers.len());
    for (k, &kind) in plan.tiers.iter().enumerate() {
        let out = tier(kind, &cur, &cur, &plan.noise);
        let acc: f64 = out.iter().sum();
        if !(acc > 0.0) {
            return Err(Error::DegenerateChannel { tier: k + 1 });
        }
        let ch = from_dist(&out, k + 1)?;
        cur = to_dist(&ch);
        acceptance.push(acc);
        per_tier.push(ch);
    }
    Ok(PurifiedChannelReport {
        output: from_dist(&cur, plan.tiers.len())?,
        acceptance,
        per_tier,
        tiers: plan.tiers.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BudgetReport {
    pub n_d: usize,
    pub target: f64,
    /// Raw pairs needed.
    pub n: usize,
    /// Probability of completing within `n` raw pairs.
    pub completion: f64,
}

/// Largest budget the DP will consider.
pub const BUDGET_CAP: usize = 1 << 15;

/// Distribution of raw pairs consumed to finish one top-tier pair, truncated
/// at `cap`: entry `c` is the probability of finishing with exactly `c`.
///
/// A tier-k attempt builds two tier-(k-1) pairs and succeeds with the
/// tier's acceptance; on failure both are lost and the attempt restarts. A
/// sub-tree that fails is rebuilt without touching finished siblings.
pub fn consumption_distribution(acceptance: &[f64], cap: usize) -> Vec<f64> {
    let mut g = vec![0.0; cap + 1];
    if cap >= 1 {
        g[1] = 1.0;
    }
    for &s in acceptance {
        let h = convolve(&g, &g, cap);
        let first = h.iter().position(|&v| v > 0.0).unwrap_or(cap + 1);
        let mut next = vec![0.0; cap + 1];
        for c in first..=cap {
            let mut restart = 0.0;
            // h(c') g(c - c') with c - c' >= first
            for cp in first..=c.saturating_sub(first) {
                restart += h[cp] * next[c - cp];
            }
            next[c] = s * h[c] + (1.0 - s) * restart;
        }
        g = next;
    }
    g
}

fn convolve(a: &[f64], b: &[f64], cap: usize) -> Vec<f64> {
    let mut out = vec![0.0; cap + 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(cap + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Smallest raw-pair budget completing the plan with probability at least
/// `target`.
pub fn budget(report: &PurifiedChannelReport, target: f64) -> Result<BudgetReport> {
    if !(0.0..1.0).contains(&target) {
        return Err(Error::Config(format!("target success {target} outside [0, 1)")));
    }
    let n_d = report.tiers;
    let mut cap = (64usize << n_d).min(BUDGET_CAP);
    loop {
        let g = consumption_distribution(&report.acceptance, cap);
        let mut cdf = 0.0;
        for (c, &p) in g.iter().enumerate() {
            cdf += p;
            if cdf >= target {
                return Ok(BudgetReport {
                    n_d,
                    target,
                    n: c,
                    completion: cdf,
                });
            }
        }
        if cap >= BUDGET_CAP {
            return Err(Error::BudgetUnreachable { target, cap });
        }
        cap = (cap * 4).min(BUDGET_CAP);
    }
}

/// Monte Carlo estimate of the probability to finish within `n` raw pairs.
pub fn completion_monte_carlo<R: Rng + ?Sized>(acceptance: &[f64], n: usize, trials: usize, rng: &mut R) -> f64 {
    // raw pairs used, or None once the budget runs dry
    fn build<R: Rng + ?Sized>(k: usize, acc: &[f64], budget: usize, rng: &mut R) -> Option<usize> {
        if k == 0 {
            return (budget >= 1).then_some(1);
        }
        let mut used = 0;
        loop {
            used += build(k - 1, acc, budget - used, rng)?;
            used += build(k - 1, acc, budget - used, rng)?;
            if rng.gen::<f64>() < acc[k - 1] {
                return Some(used);
            }
        }
    }
    let ok = (0..trials)
        .filter(|_| build(acceptance.len(), acceptance, n, rng).is_some())
        .count();
    ok as f64 / trials as f64
}

/// Time of one super-round when raw pair generation dominates:
/// `2 n N tau`, doubled for single-broker simple modules.
pub fn time_cost_per_super_round(n: usize, pairs: usize, tau: f64, simple_single_broker: bool) -> f64 {
    let t = 2.0 * n as f64 * pairs as f64 * tau;
    if simple_single_broker {
        2.0 * t
    } else {
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn swap_is_identity_when_noiseless() {
        let m = swap_channel(0.0);
        for (p, row) in m.iter().enumerate() {
            for (q, &v) in row.iter().enumerate() {
                assert_eq!(v, if p == q { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn swap_rows_are_normalised() {
        for row in swap_channel(0.01) {
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn time_cost_examples() {
        assert_eq!(time_cost_per_super_round(3, 8, 1.0, false), 48.0);
        assert_eq!(time_cost_per_super_round(3, 8, 1.0, true), 96.0);
        assert_eq!(time_cost_per_super_round(1, 1, 5.0, false), 10.0);
    }

    #[test]
    fn zero_tiers_need_one_pair() {
        let plan = PurificationPlan::alternating(0, TierKind::Bit, EntanglementChannel::unpolarised(0.15).unwrap(), IntraModuleNoise::uniform(0.001).unwrap());
        let r = purify_channel(&plan).unwrap();
        assert_eq!(budget(&r, 0.999).unwrap().n, 1);
    }

    #[test]
    fn non_alternating_plan_is_rejected() {
        let plan = PurificationPlan {
            tiers: vec![TierKind::Bit, TierKind::Bit],
            raw: EntanglementChannel::perfect(),
            noise: IntraModuleNoise::noiseless(),
        };
        assert!(purify_channel(&plan).is_err());
    }
}
