//! Monte Carlo harnesses: threshold sweeps, scaling fits and qubit-cost
//! reports.
//!
//! Logical rates are always reported twice: the failure probability of a
//! block of `L` rounds (super-rounds for hierarchical specs), and the
//! per-round rate derived from it with [`Rate::per_round`]. Fits and costs
//! use the per-round rate.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::blocks::{flat_memory, perimeter_surface, CubeSize};
use crate::circuits::NoiseModel;
use crate::decoder::{
    decode_tier2, estimate_module_rates, mix_seed, BlockDecoder, FailureCounts, ModuleErrorRates, Rate, Weighting,
};
use crate::error::{Error, Result};
use crate::pauli::{EntanglementChannel, IntraModuleNoise};
use crate::purification::{budget, purify_channel, time_cost_per_super_round, PurificationPlan, PurifiedChannelReport};
use crate::sim::{CheckType, DetectorErrorModel};
use crate::topology::{build_layout, Brokers, Distance, ModuleSpec};

/// Version tag of every JSON document written by this module.
pub const SCHEMA: &str = "hiersurf/1";

/// Noise of one spec: intra-module gates at `eps` and pairs purified by
/// `spec.purification_tiers` alternating tiers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkNoise {
    pub noise: NoiseModel,
    pub x: PurifiedChannelReport,
    pub z: PurifiedChannelReport,
}

pub fn link_noise(spec: &ModuleSpec, raw: EntanglementChannel, eps: f64) -> Result<LinkNoise> {
    let intra = IntraModuleNoise::uniform(eps)?;
    let n_d = spec.purification_tiers;
    let x = purify_channel(&PurificationPlan::for_check(CheckType::X, n_d, raw, intra))?;
    let z = purify_channel(&PurificationPlan::for_check(CheckType::Z, n_d, raw, intra))?;
    let noise = NoiseModel {
        x_link: x.output,
        z_link: z.output,
        ..NoiseModel::new(intra, raw)
    };
    Ok(LinkNoise { noise, x, z })
}

/// Every probability of `noise` multiplied by `r`, capped to stay valid.
pub fn scale_noise(noise: &NoiseModel, r: f64) -> Result<NoiseModel> {
    let c = |p: f64| (p * r).min(0.5);
    let i = noise.intra;
    let ch = |e: &EntanglementChannel| {
        let s = if e.infidelity() > 0.0 { r.min(0.75 / e.infidelity()) } else { r };
        EntanglementChannel::new(e.p_x * s, e.p_y * s, e.p_z * s)
    };
    Ok(NoiseModel {
        intra: IntraModuleNoise::new(c(i.eps_init), c(i.eps_meas), c(i.eps_1q), c(i.eps_2q))?,
        x_link: ch(&noise.x_link)?,
        z_link: ch(&noise.z_link)?,
        all_local: noise.all_local,
    })
}

/// Logical failure of one block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogicalRate {
    pub distance: usize,
    /// Rounds (or super-rounds) in the block.
    pub rounds: usize,
    /// Failure of any logical observable over the block.
    pub block: Rate,
    pub per_round: Rate,
}

impl LogicalRate {
    fn from_counts(distance: usize, rounds: usize, counts: &FailureCounts) -> Self {
        let block = Rate::new(counts.any, counts.trials);
        Self {
            distance,
            rounds,
            block,
            per_round: block.per_round(rounds),
        }
    }
}

/// Single-tier memory of distance `l` over `l` rounds on the module array
/// of `spec` (simple modules, or a monolithic lattice with `all_local`).
pub fn flat_logical_rate(
    spec: &ModuleSpec,
    noise: NoiseModel,
    l: usize,
    trials: u64,
    seed: u64,
    point: u64,
    weighting: Weighting,
) -> Result<LogicalRate> {
    let layout = build_layout(*spec, Distance::new(l)?)?;
    let built = flat_memory(&layout, noise, l)?;
    let dec = BlockDecoder::new(DetectorErrorModel::from_circuit(&built.circuit), weighting);
    Ok(LogicalRate::from_counts(l, l, &dec.run(trials, seed, point)?))
}

/// Tier-2 memory of distance `l` over `l` super-rounds with module rates
/// scaled by `r`.
pub fn tier2_logical_rate(
    rates: &ModuleErrorRates,
    r: f64,
    l: usize,
    trials: u64,
    seed: u64,
    point: u64,
    weighting: Weighting,
) -> Result<LogicalRate> {
    let counts = decode_tier2(l, rates.phenomenological(r), trials, seed, point, weighting)?;
    Ok(LogicalRate::from_counts(l, l, &counts))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub spec: ModuleSpec,
    pub distances: Vec<usize>,
    /// Raw pair infidelities `1 - F` (unpolarised channel).
    pub infidelities: Vec<f64>,
    pub eps: f64,
    pub trials: u64,
    pub seed: u64,
    pub weighting: Weighting,
    pub cube: CubeSize,
}

impl SweepConfig {
    pub fn new(spec: ModuleSpec, distances: Vec<usize>, infidelities: Vec<f64>, eps: f64, trials: u64, seed: u64) -> Self {
        Self {
            spec,
            distances,
            infidelities,
            eps,
            trials,
            seed,
            weighting: Weighting::LogLikelihood,
            cube: CubeSize::Individual,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::ZeroTrials);
        }
        if self.distances.len() < 2 || self.infidelities.len() < 2 {
            return Err(Error::Config("a sweep needs at least two distances and two rates".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    /// The swept error rate.
    pub x: f64,
    pub logical: LogicalRate,
    /// Tier-1 rates the tier-2 point was decoded with.
    pub module_rates: Option<ModuleErrorRates>,
}

/// Where the failure curves of two distances cross.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub smaller: usize,
    pub larger: usize,
    pub x: f64,
    /// Bootstrap standard deviation.
    pub sigma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSweep {
    /// Name of the swept variable.
    pub variable: String,
    pub config: SweepConfig,
    pub points: Vec<SweepPoint>,
    /// Crossings of consecutive distances.
    pub crossings: Vec<Crossing>,
    /// Crossing of the two largest distances.
    pub threshold: Option<Crossing>,
    pub warnings: Vec<String>,
}

const MIN_FAILURES: u64 = 20;
const BOOTSTRAP: usize = 200;

/// Threshold sweep over raw pair infidelity. Simple specs are simulated
/// directly; hierarchical specs go through tier-1 cube rates and tier-2
/// decoding.
pub fn run_threshold_sweep(cfg: &SweepConfig) -> Result<ThresholdSweep> {
    cfg.validate()?;
    let mut points = Vec::new();
    for (i, &x) in cfg.infidelities.iter().enumerate() {
        let link = link_noise(&cfg.spec, EntanglementChannel::unpolarised(x)?, cfg.eps)?;
        let rates = if cfg.spec.is_hierarchical() {
            let seed = mix_seed(cfg.seed, 1_000_000 + i as u64, 0);
            Some(estimate_module_rates(&cfg.spec, link.noise, cfg.cube, cfg.trials, seed, cfg.weighting)?)
        } else {
            None
        };
        for &l in &cfg.distances {
            let point = (i * 1000 + l) as u64;
            let logical = match &rates {
                Some(r) => tier2_logical_rate(r, 1.0, l, cfg.trials, cfg.seed, point, cfg.weighting)?,
                None => flat_logical_rate(&cfg.spec, link.noise, l, cfg.trials, cfg.seed, point, cfg.weighting)?,
            };
            points.push(SweepPoint { x, logical, module_rates: rates });
        }
    }
    Ok(finish_sweep("infidelity", cfg.clone(), points))
}

/// The 2D perimeter problem swept in `q = p_z + p_y`, the rate at which a
/// pair flips the check it serves. `cfg.infidelities` holds the `q` grid;
/// `spec` and `eps` are ignored.
pub fn run_perimeter_sweep(cfg: &SweepConfig) -> Result<ThresholdSweep> {
    cfg.validate()?;
    let mut points = Vec::new();
    for (i, &q) in cfg.infidelities.iter().enumerate() {
        let channel = EntanglementChannel::unpolarised(1.5 * q)?;
        for &l in &cfg.distances {
            let built = perimeter_surface(l, channel)?;
            let dec = BlockDecoder::new(DetectorErrorModel::from_circuit(&built.circuit), cfg.weighting);
            let counts = dec.run(cfg.trials, cfg.seed, (i * 1000 + l) as u64)?;
            let block = counts.rate(0);
            let logical = LogicalRate {
                distance: l,
                rounds: 1,
                block,
                per_round: block,
            };
            points.push(SweepPoint { x: q, logical, module_rates: None });
        }
    }
    Ok(finish_sweep("q", cfg.clone(), points))
}

fn finish_sweep(variable: &str, config: SweepConfig, points: Vec<SweepPoint>) -> ThresholdSweep {
    let mut warnings = Vec::new();
    for p in &points {
        let fails = p.logical.block.successes;
        if fails < MIN_FAILURES && fails + MIN_FAILURES < p.logical.block.trials {
            warnings.push(format!(
                "x = {}, L = {}: only {fails} failures; confidence interval is wide",
                p.x, p.logical.distance
            ));
        }
    }
    let mut ls = config.distances.clone();
    ls.sort_unstable();
    ls.dedup();
    let curve = |l: usize| -> Vec<(f64, Rate)> {
        let mut c: Vec<(f64, Rate)> = points
            .iter()
            .filter(|p| p.logical.distance == l)
            .map(|p| (p.x, p.logical.block))
            .collect();
        c.sort_by(|a, b| a.0.total_cmp(&b.0));
        c
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let crossings: Vec<Crossing> = ls
        .windows(2)
        .filter_map(|w| crossing_of(w[0], &curve(w[0]), w[1], &curve(w[1]), &mut rng))
        .collect();
    let threshold = crossings.last().copied().filter(|c| c.larger == *ls.last().unwrap_or(&0));
    if threshold.is_none() {
        warnings.push("the two largest distances do not cross inside the swept range".into());
    }
    ThresholdSweep {
        variable: variable.into(),
        config,
        points,
        crossings,
        threshold,
        warnings,
    }
}

/// First point where the larger distance stops doing better, by linear
/// interpolation of the difference of the two curves.
pub fn interpolate_crossing(xs: &[f64], small: &[f64], large: &[f64]) -> Option<f64> {
    let d: Vec<f64> = large.iter().zip(small).map(|(b, a)| b - a).collect();
    (0..d.len().saturating_sub(1)).find_map(|i| {
        if d[i] <= 0.0 && d[i + 1] > 0.0 {
            Some(xs[i] + (xs[i + 1] - xs[i]) * (-d[i]) / (d[i + 1] - d[i]))
        } else {
            None
        }
    })
}

fn crossing_of(
    smaller: usize,
    a: &[(f64, Rate)],
    larger: usize,
    b: &[(f64, Rate)],
    rng: &mut ChaCha8Rng,
) -> Option<Crossing> {
    if a.len() != b.len() || a.iter().zip(b).any(|(p, q)| p.0 != q.0) {
        return None;
    }
    let xs: Vec<f64> = a.iter().map(|p| p.0).collect();
    let ps = |c: &[(f64, Rate)]| c.iter().map(|p| p.1.p).collect::<Vec<_>>();
    let x = interpolate_crossing(&xs, &ps(a), &ps(b))?;
    let resample = |c: &[(f64, Rate)], rng: &mut ChaCha8Rng| -> Vec<f64> {
        c.iter()
            .map(|(_, r)| match Binomial::new(r.trials, r.p.clamp(0.0, 1.0)) {
                Ok(dist) => dist.sample(rng) as f64 / r.trials.max(1) as f64,
                Err(_) => r.p,
            })
            .collect()
    };
    let samples: Vec<f64> = (0..BOOTSTRAP)
        .filter_map(|_| {
            let sa = resample(a, rng);
            let sb = resample(b, rng);
            interpolate_crossing(&xs, &sa, &sb)
        })
        .collect();
    let sigma = if samples.len() > 1 {
        let mean = samples.iter().sum::<f64>() / samples.len() as f64;
        (samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (samples.len() - 1) as f64).sqrt()
    } else {
        f64::NAN
    };
    Some(Crossing { smaller, larger, x, sigma })
}

/// Parameters of `eps_L = eps0 exp(-kappa L)`, optionally from the rescaled
/// model `eps_L = exp((alpha ln r + beta) L + gamma)` where `kappa = -beta`
/// and `eps0 = exp(gamma)` at `r = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub eps0: f64,
    pub kappa: f64,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    /// Residuals of `ln eps_L`, in input order of the points used.
    pub residuals: Vec<f64>,
    /// `kappa <= 0`: rates do not fall with distance.
    pub above_threshold: bool,
    pub warnings: Vec<String>,
}

impl FitResult {
    /// Fitted per-round rate at distance `l` (and ratio `r` if rescaled).
    pub fn predict(&self, r: f64, l: usize) -> f64 {
        let alpha = self.alpha.unwrap_or(0.0);
        self.eps0 * ((alpha * r.ln() - self.kappa) * l as f64).exp()
    }
}

fn least_squares(rows: &[Vec<f64>], y: &[f64]) -> Result<Vec<f64>> {
    let a = DMatrix::from_fn(rows.len(), rows[0].len(), |i, j| rows[i][j]);
    let b = DVector::from_column_slice(y);
    let svd = a.svd(true, true);
    let rank = svd.rank(1e-9 * svd.singular_values.max());
    if rank < rows[0].len() {
        return Err(Error::Fit("degenerate design matrix".into()));
    }
    let x = svd.solve(&b, 1e-12).map_err(|e| Error::Fit(e.to_string()))?;
    Ok(x.iter().copied().collect())
}

/// Splits off non-positive rates with a warning each.
fn usable<T: Copy>(points: &[(T, f64)]) -> (Vec<(T, f64)>, Vec<String>) {
    let mut warnings = Vec::new();
    let kept = points
        .iter()
        .filter(|(_, e)| {
            let ok = *e > 0.0 && e.is_finite();
            if !ok {
                warnings.push(format!("rate {e} excluded from the fit"));
            }
            ok
        })
        .copied()
        .collect();
    (kept, warnings)
}

/// Least squares on `ln eps_L = ln eps0 - kappa L` over `(L, eps_L)`.
pub fn fit_simple(points: &[(usize, f64)]) -> Result<FitResult> {
    let (kept, warnings) = usable(points);
    if kept.len() < 3 {
        return Err(Error::Fit(format!("{} usable points, need 3", kept.len())));
    }
    let rows: Vec<Vec<f64>> = kept.iter().map(|(l, _)| vec![1.0, *l as f64]).collect();
    let y: Vec<f64> = kept.iter().map(|(_, e)| e.ln()).collect();
    let c = least_squares(&rows, &y)?;
    let kappa = -c[1];
    let residuals = rows.iter().zip(&y).map(|(r, y)| y - (c[0] + c[1] * r[1])).collect();
    Ok(FitResult {
        eps0: c[0].exp(),
        kappa,
        alpha: None,
        beta: None,
        gamma: None,
        residuals,
        above_threshold: kappa <= 0.0,
        warnings,
    })
}

/// Least squares for `(alpha, beta, gamma)` over `(r, L, eps_L)`; needs at
/// least three distinct `r` and three distinct `L`.
pub fn fit_rescaled(points: &[(f64, usize, f64)]) -> Result<FitResult> {
    let pairs: Vec<((f64, usize), f64)> = points.iter().map(|&(r, l, e)| ((r, l), e)).collect();
    let (kept, warnings) = usable(&pairs);
    let distinct = |mut v: Vec<f64>| {
        v.sort_by(f64::total_cmp);
        v.dedup();
        v.len()
    };
    let nr = distinct(kept.iter().map(|((r, _), _)| *r).collect());
    let nl = distinct(kept.iter().map(|((_, l), _)| *l as f64).collect());
    if nr < 3 || nl < 3 {
        return Err(Error::Fit(format!("degenerate grid: {nr} ratios and {nl} distances, need 3 each")));
    }
    if kept.iter().any(|((r, _), _)| *r <= 0.0) {
        return Err(Error::Fit("ratios must be positive".into()));
    }
    let rows: Vec<Vec<f64>> = kept
        .iter()
        .map(|((r, l), _)| vec![*l as f64 * r.ln(), *l as f64, 1.0])
        .collect();
    let y: Vec<f64> = kept.iter().map(|(_, e)| e.ln()).collect();
    let c = least_squares(&rows, &y)?;
    let residuals = rows
        .iter()
        .zip(&y)
        .map(|(row, y)| y - row.iter().zip(&c).map(|(a, b)| a * b).sum::<f64>())
        .collect();
    Ok(FitResult {
        eps0: c[2].exp(),
        kappa: -c[1],
        alpha: Some(c[0]),
        beta: Some(c[1]),
        gamma: Some(c[2]),
        residuals,
        above_threshold: c[1] >= 0.0,
        warnings,
    })
}

/// Smallest odd `L` with `eps0 exp(-kappa L) <= target`, or `None` above
/// threshold.
pub fn l_min(eps0: f64, kappa: f64, target: f64) -> Option<usize> {
    if kappa <= 0.0 || !(target > 0.0) {
        return None;
    }
    let l = ((eps0 / target).ln() / kappa).ceil().max(1.0) as usize;
    Some(if l.is_multiple_of(2) { l + 1 } else { l })
}

/// Parses `lo:hi:step` ranges (inclusive) and comma lists, mixed freely:
/// `0.08:0.1:0.01,0.2` is `[0.08, 0.09, 0.1, 0.2]`.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| Error::Config(format!("not a number: {t:?}")))
    };
    let mut out = Vec::new();
    for item in text.split(',') {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [v] => out.push(num(v)?),
            [lo, hi, step] => {
                let (lo, hi, step) = (num(lo)?, num(hi)?, num(step)?);
                if step <= 0.0 || hi < lo {
                    return Err(Error::Config(format!("bad range {item:?}: need lo <= hi and step > 0")));
                }
                let n = ((hi - lo) / step + 1e-9).floor() as usize;
                if n > 100_000 {
                    return Err(Error::Config(format!("range {item:?} has too many points")));
                }
                // round off accumulated float noise
                out.extend((0..=n).map(|k| ((lo + k as f64 * step) * 1e12).round() / 1e12));
            }
            _ => return Err(Error::Config(format!("bad grid item {item:?}"))),
        }
    }
    Ok(out)
}

/// [`parse_grid`] restricted to non-negative integers.
pub fn parse_int_grid(text: &str) -> Result<Vec<usize>> {
    parse_grid(text)?
        .into_iter()
        .map(|v| {
            if v >= 0.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(Error::Config(format!("expected a non-negative integer, got {v}")))
            }
        })
        .collect()
}

/// One row of the raw-pair budget table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PurifyRow {
    pub fidelity: f64,
    pub eps: f64,
    pub success: f64,
    pub n_d: usize,
    /// Raw pairs needed to finish with probability `success`.
    pub n: usize,
    pub output: EntanglementChannel,
    /// Acceptance of the top tier (1 without purification).
    pub acceptance: f64,
}

/// Budgets for `0..=max_tiers` tiers of the Z-check purification plan.
pub fn purify_table(fidelity: f64, eps: f64, success: f64, max_tiers: usize) -> Result<Vec<PurifyRow>> {
    if !(fidelity > 0.25 && fidelity <= 1.0) {
        return Err(Error::Config(format!("fidelity {fidelity} outside (0.25, 1]")));
    }
    let raw = EntanglementChannel::unpolarised(1.0 - fidelity)?;
    let intra = IntraModuleNoise::uniform(eps)?;
    (0..=max_tiers)
        .map(|n_d| {
            let report = purify_channel(&PurificationPlan::for_check(CheckType::Z, n_d, raw, intra))?;
            let b = budget(&report, success)?;
            Ok(PurifyRow {
                fidelity,
                eps,
                success,
                n_d,
                n: b.n,
                output: report.output,
                acceptance: report.acceptance.last().copied().unwrap_or(1.0),
            })
        })
        .collect()
}

/// Monte Carlo settings shared by fits and cost reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostConfig {
    pub distances: Vec<usize>,
    pub trials: u64,
    pub seed: u64,
    pub weighting: Weighting,
    /// Success probability used for raw-pair budgets.
    pub success: f64,
    /// Duration of one raw pair generation attempt.
    pub tau: f64,
    /// Largest rescaling ratio tried.
    pub max_ratio: f64,
}

impl Default for CostConfig {
    fn default() -> Self {
        Self {
            distances: vec![3, 5, 7],
            trials: 10_000,
            seed: 1,
            weighting: Weighting::LogLikelihood,
            success: 0.999,
            tau: 1.0,
            max_ratio: 1000.0,
        }
    }
}

/// The system whose logical scaling is fitted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum System {
    Modules(ModuleSpec),
    /// One large device: every gate local at `eps`, one qubit per site.
    Monolithic,
}

/// Logical rates of every distance at one rescaling ratio.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioRow {
    pub r: f64,
    pub rates: Vec<LogicalRate>,
    /// Used for the fit.
    pub kept: bool,
}

/// Measured `(r, L, per-round rate)` points and the fit through them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub tried: Vec<RatioRow>,
    pub points: Vec<(f64, usize, f64)>,
    /// `None` when fewer than three ratios were usable (one if it is
    /// `r = 1`).
    pub fit: Option<FitResult>,
    pub module_rates: Option<ModuleErrorRates>,
}

/// Rescaling ratios: doubling from `r = 1` until the smallest distance
/// fails more than 10% per round or the rates stop falling with distance
/// (ratio `r_hi`), then quarter-octave steps over the octave below `r_hi`
/// and one more half-octave step. A ratio is kept
/// when every distance has enough failures and the rates fall with
/// distance. `None` when `r = 1` is already at or above threshold.
pub fn fit_scaling(system: System, infidelity: f64, eps: f64, cfg: &CostConfig) -> Result<Option<ScalingFit>> {
    if cfg.trials == 0 {
        return Err(Error::ZeroTrials);
    }
    let raw = EntanglementChannel::unpolarised(infidelity)?;
    let (spec, noise) = match system {
        System::Modules(spec) => (spec, link_noise(&spec, raw, eps)?.noise),
        System::Monolithic => (ModuleSpec::simple(4, 0)?, NoiseModel::monolithic(IntraModuleNoise::uniform(eps)?)),
    };
    let rates = if spec.is_hierarchical() {
        Some(estimate_module_rates(&spec, noise, CubeSize::Individual, cfg.trials, cfg.seed, cfg.weighting)?)
    } else {
        None
    };
    let mut ls = cfg.distances.clone();
    ls.sort_unstable();
    ls.dedup();
    // rows are keyed by the quarter-octave index j, r = 2^(j/4)
    let ratio = |j: i32| 2f64.powf(j as f64 / 4.0);
    let measure = |j: i32| -> Result<RatioRow> {
        let r = ratio(j);
        let mut row = Vec::new();
        for &l in &ls {
            let point = 10_000 * (j + 100) as u64 + l as u64;
            row.push(match &rates {
                Some(m) => tier2_logical_rate(m, r, l, cfg.trials, cfg.seed, point, cfg.weighting)?,
                None => flat_logical_rate(&spec, scale_noise(&noise, r)?, l, cfg.trials, cfg.seed, point, cfg.weighting)?,
            });
        }
        let measurable = row.iter().all(|x| x.block.successes >= MIN_FAILURES);
        let falling = row.windows(2).all(|w| w[1].per_round.p < w[0].per_round.p);
        Ok(RatioRow { r, kept: measurable && falling && row[0].per_round.p <= 0.1, rates: row })
    };
    let past_threshold = |row: &RatioRow| {
        let measurable = row.rates.iter().all(|x| x.block.successes >= MIN_FAILURES);
        (measurable && !row.kept) || row.rates[0].per_round.p > 0.1
    };
    let mut rows: Vec<(i32, RatioRow)> = Vec::new();
    let mut j = 0;
    let mut j_hi = None;
    while ratio(j) <= cfg.max_ratio {
        let row = measure(j)?;
        let stop = past_threshold(&row);
        rows.push((j, row));
        if stop {
            j_hi = Some(j);
            break;
        }
        j += 4;
    }
    if j_hi == Some(0) {
        return Ok(None);
    }
    let top = j_hi.unwrap_or(j);
    for k in (1..top).filter(|&k| k >= top - 4 || k == top - 6) {
        if !rows.iter().any(|(i, _)| *i == k) {
            let row = measure(k)?;
            rows.push((k, row));
        }
    }
    rows.sort_by_key(|(i, _)| *i);
    let tried: Vec<RatioRow> = rows.into_iter().map(|(_, r)| r).collect();
    let kept: Vec<(f64, usize, f64)> = tried
        .iter()
        .filter(|row| row.kept)
        .flat_map(|row| row.rates.iter().map(move |x| (row.r, x.distance, x.per_round.p)))
        .collect();
    let kept_ratios = tried.iter().filter(|row| row.kept).count();
    let fit = if kept_ratios >= 3 {
        Some(fit_rescaled(&kept)?)
    } else if tried[0].kept {
        Some(fit_simple(&kept.iter().filter(|p| p.0 == 1.0).map(|p| (p.1, p.2)).collect::<Vec<_>>())?)
    } else {
        None
    };
    Ok(Some(ScalingFit {
        tried,
        points: kept,
        fit,
        module_rates: rates,
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostReport {
    pub system: System,
    pub infidelity: f64,
    pub eps: f64,
    pub target: f64,
    /// Qubits per module `S` (1 for the monolithic device).
    pub qubits_per_module: usize,
    pub scaling: Option<ScalingFit>,
    pub l_min: Option<usize>,
    /// `(2 L_min - 1)^2 S`.
    pub total_qubits: Option<f64>,
    /// Raw pairs per purified pair at the configured success probability.
    pub pairs_per_link: Option<usize>,
    pub time_per_super_round: Option<f64>,
    pub achievable: bool,
}

/// Qubit and time cost of one logical qubit at per-round rate `target`.
pub fn cost_report(system: System, infidelity: f64, eps: f64, target: f64, cfg: &CostConfig) -> Result<CostReport> {
    let (s, pairs, time) = match system {
        System::Modules(spec) => {
            let link = link_noise(&spec, EntanglementChannel::unpolarised(infidelity)?, eps)?;
            let n = budget(&link.x, cfg.success)?.n.max(budget(&link.z, cfg.success)?.n);
            let t = time_cost_per_super_round(spec.rounds_per_segment(), n, cfg.tau, spec.brokers == Brokers::Single);
            (spec.size(), Some(n), Some(t))
        }
        System::Monolithic => (1, None, None),
    };
    let scaling = fit_scaling(system, infidelity, eps, cfg)?;
    let l = scaling
        .as_ref()
        .and_then(|s| s.fit.as_ref())
        .and_then(|f| l_min(f.eps0, f.kappa, target));
    Ok(CostReport {
        system,
        infidelity,
        eps,
        target,
        qubits_per_module: s,
        scaling,
        l_min: l,
        total_qubits: l.map(|l| ((2 * l - 1) * (2 * l - 1)) as f64 * s as f64),
        pairs_per_link: pairs,
        time_per_super_round: time,
        achievable: l.is_some(),
    })
}

/// Cost reports over purification depths, with the cheapest achievable one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostScan {
    pub reports: Vec<CostReport>,
    /// Index into `reports`.
    pub best: Option<usize>,
}

pub fn cost_scan(
    base: ModuleSpec,
    tiers: &[usize],
    infidelity: f64,
    eps: f64,
    target: f64,
    cfg: &CostConfig,
) -> Result<CostScan> {
    let mut reports = Vec::new();
    for &n_d in tiers {
        let spec = ModuleSpec {
            purification_tiers: n_d,
            ..base
        };
        reports.push(cost_report(System::Modules(spec), infidelity, eps, target, cfg)?);
    }
    let best = reports
        .iter()
        .enumerate()
        .filter_map(|(i, r)| r.total_qubits.map(|q| (i, q)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(i, _)| i);
    Ok(CostScan { reports, best })
}

/// `# key: value` header lines echoing a config and the crate version.
pub fn header_lines(config: &impl Serialize) -> Result<String> {
    let json = serde_json::to_string(config).map_err(|e| Error::Config(e.to_string()))?;
    Ok(format!(
        "# hiersurf {}\n# schema: {SCHEMA}\n# config: {json}\n",
        env!("CARGO_PKG_VERSION")
    ))
}

/// CSV of a sweep: config header, then one row per (rate, distance).
pub fn sweep_csv(sweep: &ThresholdSweep) -> Result<String> {
    let mut out = header_lines(&sweep.config)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Config(e.to_string());
    w.write_record([
        sweep.variable.as_str(),
        "L",
        "rounds",
        "trials",
        "failures",
        "p_block",
        "sigma_block",
        "p_round",
        "sigma_round",
        "P_M",
        "P_M_Z",
        "P_P",
        "P_B",
    ])
    .map_err(io)?;
    for p in &sweep.points {
        let l = &p.logical;
        let mut row = vec![
            p.x.to_string(),
            l.distance.to_string(),
            l.rounds.to_string(),
            l.block.trials.to_string(),
            l.block.successes.to_string(),
            l.block.p.to_string(),
            l.block.sigma.to_string(),
            l.per_round.p.to_string(),
            l.per_round.sigma.to_string(),
        ];
        match &p.module_rates {
            Some(m) => row.extend([m.p_m.p, m.p_m_z.p, m.p_p.p, m.p_b.p].map(|v| v.to_string())),
            None => row.extend(std::iter::repeat_n(String::new(), 4)),
        }
        w.write_record(&row).map_err(io)?;
    }
    let body = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
    out.push_str(&String::from_utf8_lossy(&body));
    Ok(out)
}

/// JSON summary with a `schema` field.
pub fn to_json(kind: &str, value: &impl Serialize) -> Result<serde_json::Value> {
    let body = serde_json::to_value(value).map_err(|e| Error::Config(e.to_string()))?;
    Ok(serde_json::json!({
        "schema": SCHEMA,
        "version": env!("CARGO_PKG_VERSION"),
        "kind": kind,
        "result": body,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_parse() {
        assert_eq!(parse_grid("0.08:0.1:0.01,0.2").unwrap(), vec![0.08, 0.09, 0.1, 0.2]);
        assert_eq!(parse_int_grid("3,5:9:2").unwrap(), vec![3, 5, 7, 9]);
        for bad in ["", "a", "1:0:1", "0:1:0", "1:2", "1.5"] {
            let r = if bad == "1.5" { parse_int_grid(bad).map(|_| ()) } else { parse_grid(bad).map(|_| ()) };
            assert!(r.is_err(), "{bad}");
        }
    }

    #[test]
    fn l_min_example() {
        assert_eq!(l_min(0.1, 1.0, 1e-12), Some(27));
        assert_eq!(l_min(0.1, -0.1, 1e-12), None);
    }

    #[test]
    fn crossing_interpolates() {
        let x = interpolate_crossing(&[0.0, 1.0], &[0.5, 0.5], &[0.4, 0.6]).unwrap();
        assert!((x - 0.5).abs() < 1e-12);
        assert_eq!(interpolate_crossing(&[0.0, 1.0], &[0.5, 0.5], &[0.4, 0.45]), None);
    }

    #[test]
    fn scaled_noise_stays_valid() {
        let n = NoiseModel::new(IntraModuleNoise::uniform(0.01).unwrap(), EntanglementChannel::unpolarised(0.3).unwrap());
        let s = scale_noise(&n, 10.0).unwrap();
        assert!((s.x_link.infidelity() - 0.75).abs() < 1e-12);
        assert_eq!(s.intra.eps_2q, 0.1);
    }
}
