//! Matching graphs, minimum-weight perfect matching decoding, tier-1 module
//! rate estimation and tier-2 decoding.
//!
//! A [`MatchingGraph`] is built per check type from a detector error model.
//! Each fault outcome becomes an edge between the (at most two) detectors
//! of that check type it flips, or between one detector and the boundary.
//! Outcomes flipping more detectors are split into their single-qubit
//! components; whatever still does not fit is dropped and counted.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::blocks::{ancilla_cube, q_cube, tier2_memory, CubeSize, SUPER_ROUND};
use crate::circuits::{NoiseModel, Phenomenological};
use crate::error::{Error, Result};
use crate::matching::{min_weight_perfect_matching, WeightedEdge};
use crate::sim::{CheckType, DetectorErrorModel, Effect};
use crate::topology::{ModuleRole, ModuleSpec};

/// Fixed-point scale of integer edge weights.
const SCALE: f64 = 1000.0;
const INF: i64 = i64::MAX / 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Weighting {
    /// `ln((1-p)/p)` per edge.
    #[default]
    LogLikelihood,
    /// Every edge weighs the same.
    Uniform,
}

/// Weight of an edge with flip probability `p`.
pub fn edge_weight(p: f64, weighting: Weighting) -> i64 {
    match weighting {
        Weighting::Uniform => SCALE as i64,
        Weighting::LogLikelihood => {
            let p = p.clamp(1e-300, 0.5);
            (((1.0 - p) / p).ln() * SCALE).round().max(0.0) as i64
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphEdge {
    pub to: usize,
    pub p: f64,
    pub weight: i64,
    pub observables: u64,
}

/// Detection-event graph of one check type. Node `boundary()` is the
/// boundary; the others are the detectors of that type.
#[derive(Debug, Clone)]
pub struct MatchingGraph {
    pub check: CheckType,
    /// Global detector id per local node.
    pub detectors: Vec<u32>,
    local: HashMap<u32, usize>,
    pub adjacency: Vec<Vec<GraphEdge>>,
    pub observable_mask: u64,
    /// Fault outcomes that could not be expressed as edges.
    pub dropped: usize,
    /// Fault outcomes flipping an observable of this type but no detector.
    pub undetectable: usize,
    boundary_dist: Vec<i64>,
    boundary_pred: Vec<usize>,
}

fn restrict(effect: &Effect, local: &HashMap<u32, usize>, mask: u64) -> (Vec<usize>, u64) {
    let mut dets: Vec<usize> = effect
        .detectors
        .iter()
        .filter_map(|d| local.get(d).copied())
        .collect();
    dets.sort_unstable();
    (dets, effect.observables & mask)
}

impl MatchingGraph {
    pub fn from_dem(dem: &DetectorErrorModel, check: CheckType, weighting: Weighting) -> Self {
        let detectors: Vec<u32> = dem
            .detectors
            .iter()
            .enumerate()
            .filter(|(_, d)| d.check == check)
            .map(|(i, _)| i as u32)
            .collect();
        let local: HashMap<u32, usize> = detectors.iter().enumerate().map(|(i, &d)| (d, i)).collect();
        let boundary = detectors.len();
        let mask = dem.observable_mask(check);

        // (a, b) with a < b, b == boundary for boundary edges -> (p, obs, strongest p)
        let mut merged: HashMap<(usize, usize), (f64, u64, f64)> = HashMap::new();
        let mut dropped = 0;
        let mut undetectable = 0;
        for site in &dem.sites {
            if site.p <= 0.0 {
                continue;
            }
            let mut per_site: HashMap<(usize, usize), (f64, u64)> = HashMap::new();
            for outcome in &site.outcomes {
                let p = site.p * outcome.weight;
                let (dets, obs) = restrict(&outcome.effect, &local, mask);
                let pieces: Vec<(Vec<usize>, u64)> = if dets.len() <= 2 {
                    vec![(dets, obs)]
                } else {
                    let parts: Vec<(Vec<usize>, u64)> = outcome
                        .components
                        .iter()
                        .map(|c| restrict(c, &local, mask))
                        .filter(|(d, o)| !d.is_empty() || *o != 0)
                        .collect();
                    if parts.iter().all(|(d, _)| d.len() <= 2) {
                        parts
                    } else {
                        dropped += 1;
                        continue;
                    }
                };
                for (dets, obs) in pieces {
                    let key = match dets.len() {
                        0 => {
                            if obs != 0 {
                                undetectable += 1;
                            }
                            continue;
                        }
                        1 => (dets[0], boundary),
                        _ => (dets[0], dets[1]),
                    };
                    let e = per_site.entry(key).or_insert((0.0, obs));
                    e.0 += p;
                }
            }
            for (key, (p, obs)) in per_site {
                let e = merged.entry(key).or_insert((0.0, obs, 0.0));
                e.0 = e.0 + p - 2.0 * e.0 * p;
                if p > e.2 {
                    e.1 = obs;
                    e.2 = p;
                }
            }
        }
        let mut adjacency = vec![Vec::new(); boundary + 1];
        let mut keys: Vec<_> = merged.into_iter().collect();
        keys.sort_by_key(|a| a.0);
        for ((a, b), (p, obs, _)) in keys {
            let weight = edge_weight(p, weighting);
            adjacency[a].push(GraphEdge { to: b, p, weight, observables: obs });
            adjacency[b].push(GraphEdge { to: a, p, weight, observables: obs });
        }
        let mut g = Self {
            check,
            detectors,
            local,
            adjacency,
            observable_mask: mask,
            dropped,
            undetectable,
            boundary_dist: Vec::new(),
            boundary_pred: Vec::new(),
        };
        let (dist, pred) = g.dijkstra_full(boundary);
        g.boundary_dist = dist;
        g.boundary_pred = pred;
        g
    }

    pub fn boundary(&self) -> usize {
        self.detectors.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adjacency.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    /// Shortest-path tree from `src` over the whole graph.
    fn dijkstra_full(&self, src: usize) -> (Vec<i64>, Vec<usize>) {
        let n = self.adjacency.len();
        let mut dist = vec![INF; n];
        let mut pred = vec![usize::MAX; n];
        let mut heap = BinaryHeap::new();
        dist[src] = 0;
        heap.push(Reverse((0i64, src)));
        while let Some(Reverse((d, u))) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for e in &self.adjacency[u] {
                let nd = d + e.weight;
                if nd < dist[e.to] {
                    dist[e.to] = nd;
                    pred[e.to] = u;
                    heap.push(Reverse((nd, e.to)));
                }
            }
        }
        (dist, pred)
    }

    fn edge_between(&self, a: usize, b: usize) -> &GraphEdge {
        self.adjacency[a]
            .iter()
            .filter(|e| e.to == b)
            .min_by_key(|e| e.weight)
            .expect("edge on a shortest path")
    }

    /// Decodes the fired detectors (global ids) of this check type; others
    /// are ignored.
    pub fn decode(&self, fired: &[u32]) -> Result<Decoding> {
        let nodes: Vec<usize> = fired.iter().filter_map(|d| self.local.get(d).copied()).collect();
        let k = nodes.len();
        if k == 0 {
            return Ok(Decoding::default());
        }
        let boundary = self.boundary();
        let max_b = nodes
            .iter()
            .map(|&v| self.boundary_dist[v])
            .filter(|&d| d < INF)
            .max()
            .unwrap_or(INF);
        let pos: HashMap<usize, usize> = nodes.iter().enumerate().map(|(i, &v)| (v, i)).collect();

        // pairwise shortest paths, never passing through the boundary
        let mut pair_dist = vec![vec![INF; k]; k];
        let mut preds: Vec<HashMap<usize, usize>> = Vec::with_capacity(k);
        for (i, &src) in nodes.iter().enumerate() {
            let limit = self.boundary_dist[src].saturating_add(max_b);
            let mut dist: HashMap<usize, i64> = HashMap::new();
            let mut pred: HashMap<usize, usize> = HashMap::new();
            let mut heap = BinaryHeap::new();
            dist.insert(src, 0);
            heap.push(Reverse((0i64, src)));
            let mut found = 0;
            while let Some(Reverse((d, u))) = heap.pop() {
                if d > dist[&u] {
                    continue;
                }
                if d > limit {
                    break;
                }
                if let Some(&j) = pos.get(&u) {
                    pair_dist[i][j] = d;
                    found += 1;
                    if found == k {
                        break;
                    }
                }
                if u == boundary {
                    continue;
                }
                for e in &self.adjacency[u] {
                    let nd = d + e.weight;
                    if dist.get(&e.to).is_none_or(|&old| nd < old) {
                        dist.insert(e.to, nd);
                        pred.insert(e.to, u);
                        heap.push(Reverse((nd, e.to)));
                    }
                }
            }
            preds.push(pred);
        }

        let mut edges: Vec<WeightedEdge> = Vec::new();
        for i in 0..k {
            let bi = self.boundary_dist[nodes[i]];
            if bi < INF {
                edges.push((i, k + i, bi));
            }
            for j in i + 1..k {
                let dij = pair_dist[i][j].min(pair_dist[j][i]);
                let bj = self.boundary_dist[nodes[j]];
                if dij < INF && (bi >= INF || bj >= INF || dij <= bi + bj) {
                    edges.push((i, j, dij));
                }
                edges.push((k + i, k + j, 0));
            }
        }
        let pairs = min_weight_perfect_matching(2 * k, &edges)?;

        let mut out = Decoding::default();
        let mut syndrome: HashMap<usize, bool> = HashMap::new();
        let toggle = |v: usize, syndrome: &mut HashMap<usize, bool>| {
            if v != boundary {
                *syndrome.entry(v).or_insert(false) ^= true;
            }
        };
        for (a, b) in pairs {
            if a >= k {
                continue;
            }
            if b == k + a {
                // walk from the node to the boundary along the boundary tree
                let mut v = nodes[a];
                out.weight += self.boundary_dist[v];
                out.matched.push((self.detectors[v], None));
                while v != boundary {
                    let u = self.boundary_pred[v];
                    let e = self.edge_between(v, u);
                    out.predicted ^= e.observables;
                    out.path_edges += 1;
                    toggle(v, &mut syndrome);
                    toggle(u, &mut syndrome);
                    v = u;
                }
            } else {
                let (i, j) = (a, b);
                let (src, dst, pred) = if pair_dist[i][j] <= pair_dist[j][i] {
                    (nodes[i], nodes[j], &preds[i])
                } else {
                    (nodes[j], nodes[i], &preds[j])
                };
                out.weight += pair_dist[i][j].min(pair_dist[j][i]);
                out.matched.push((self.detectors[src], Some(self.detectors[dst])));
                let mut v = dst;
                while v != src {
                    let u = pred[&v];
                    let e = self.edge_between(u, v);
                    out.predicted ^= e.observables;
                    out.path_edges += 1;
                    toggle(v, &mut syndrome);
                    toggle(u, &mut syndrome);
                    v = u;
                }
            }
        }
        let mut residual: Vec<u32> = syndrome
            .into_iter()
            .filter(|&(_, on)| on)
            .map(|(v, _)| self.detectors[v])
            .collect();
        residual.sort_unstable();
        out.correction_syndrome = residual;
        Ok(out)
    }
}

/// Result of decoding one check type.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Decoding {
    /// Observables the correction flips.
    pub predicted: u64,
    /// Matched detector pairs (global ids); `None` is the boundary.
    pub matched: Vec<(u32, Option<u32>)>,
    pub weight: i64,
    pub path_edges: usize,
    /// Detectors flipped by the correction chain; equals the fired set of
    /// this check type when the correction closes the syndrome.
    pub correction_syndrome: Vec<u32>,
}

/// Decoder for a whole block: one graph per check type.
#[derive(Debug, Clone)]
pub struct BlockDecoder {
    pub dem: DetectorErrorModel,
    pub x: MatchingGraph,
    pub z: MatchingGraph,
}

/// Outcome of one decoded shot.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ShotResult {
    /// Observables flipped by the residual error.
    pub failures: u64,
    /// True when both corrections reproduce the fired detectors exactly.
    pub closed: bool,
}

/// Per-observable failure counts over many shots.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FailureCounts {
    pub trials: u64,
    /// Indexed by observable.
    pub failures: Vec<u64>,
    /// Shots where any observable failed.
    pub any: u64,
    /// Shots whose correction did not close the syndrome.
    pub unclosed: u64,
}

impl FailureCounts {
    fn merge(mut self, other: FailureCounts) -> FailureCounts {
        if self.failures.len() < other.failures.len() {
            self.failures.resize(other.failures.len(), 0);
        }
        for (a, b) in self.failures.iter_mut().zip(&other.failures) {
            *a += b;
        }
        self.trials += other.trials;
        self.any += other.any;
        self.unclosed += other.unclosed;
        self
    }

    pub fn rate(&self, observable: usize) -> Rate {
        Rate::new(self.failures.get(observable).copied().unwrap_or(0), self.trials)
    }
}

/// Binomial estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rate {
    pub successes: u64,
    pub trials: u64,
    pub p: f64,
    pub sigma: f64,
}

impl Rate {
    pub fn new(successes: u64, trials: u64) -> Self {
        let p = if trials == 0 { 0.0 } else { successes as f64 / trials as f64 };
        let sigma = if trials == 0 { 0.0 } else { (p * (1.0 - p) / trials as f64).sqrt() };
        Self { successes, trials, p, sigma }
    }

    /// 95% Wilson interval.
    pub fn wilson(&self) -> (f64, f64) {
        if self.trials == 0 {
            return (0.0, 1.0);
        }
        let z = 1.96;
        let n = self.trials as f64;
        let denom = 1.0 + z * z / n;
        let centre = (self.p + z * z / (2.0 * n)) / denom;
        let half = z * (self.p * (1.0 - self.p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
        ((centre - half).max(0.0), (centre + half).min(1.0))
    }

    /// Rate per repetition of a block that was repeated `rounds` times:
    /// `(1 - (1 - 2p)^(1/rounds)) / 2`, with the error propagated.
    pub fn per_round(&self, rounds: usize) -> Self {
        let k = rounds.max(1) as f64;
        let base = (1.0 - 2.0 * self.p).max(0.0);
        let p = (1.0 - base.powf(1.0 / k)) / 2.0;
        let slope = if base > 0.0 { base.powf(1.0 / k - 1.0) / k } else { 0.0 };
        Self { p, sigma: self.sigma * slope, ..*self }
    }
}

/// Deterministic per-trial seed.
pub fn mix_seed(seed: u64, point: u64, trial: u64) -> u64 {
    let mut z = seed
        ^ point.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ trial.wrapping_mul(0xD1B5_4A32_D192_ED03);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

const CHUNK: u64 = 256;

impl BlockDecoder {
    pub fn new(dem: DetectorErrorModel, weighting: Weighting) -> Self {
        let x = MatchingGraph::from_dem(&dem, CheckType::X, weighting);
        let z = MatchingGraph::from_dem(&dem, CheckType::Z, weighting);
        Self { dem, x, z }
    }

    /// Decodes one syndrome; `actual` is the true observable flip mask.
    pub fn decode_shot(&self, fired: &[u32], actual: u64) -> Result<ShotResult> {
        let dx = self.x.decode(fired)?;
        let dz = self.z.decode(fired)?;
        let mut fx: Vec<u32> = fired.iter().copied().filter(|d| self.x.local.contains_key(d)).collect();
        let mut fz: Vec<u32> = fired.iter().copied().filter(|d| self.z.local.contains_key(d)).collect();
        fx.sort_unstable();
        fz.sort_unstable();
        let closed = dx.correction_syndrome == fx && dz.correction_syndrome == fz;
        let mask = self.x.observable_mask | self.z.observable_mask;
        Ok(ShotResult {
            failures: (actual ^ dx.predicted ^ dz.predicted) & mask,
            closed,
        })
    }

    /// Samples and decodes `trials` shots in parallel. Counts depend only on
    /// `(seed, point)`, not on the thread count.
    pub fn run(&self, trials: u64, seed: u64, point: u64) -> Result<FailureCounts> {
        if trials == 0 {
            return Err(Error::ZeroTrials);
        }
        let nobs = self.dem.observables.len();
        let chunks = trials.div_ceil(CHUNK);
        let results: Vec<Result<FailureCounts>> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut counts = FailureCounts {
                    failures: vec![0; nobs],
                    ..Default::default()
                };
                let mut scratch = Vec::new();
                for t in c * CHUNK..((c + 1) * CHUNK).min(trials) {
                    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, point, t));
                    let (fired, obs) = self.dem.sample(&mut rng, &mut scratch);
                    let shot = self.decode_shot(&fired, obs)?;
                    counts.trials += 1;
                    if shot.failures != 0 {
                        counts.any += 1;
                    }
                    if !shot.closed {
                        counts.unclosed += 1;
                    }
                    for (i, f) in counts.failures.iter_mut().enumerate() {
                        if shot.failures >> i & 1 == 1 {
                            *f += 1;
                        }
                    }
                }
                Ok(counts)
            })
            .collect();
        let mut total = FailureCounts {
            failures: vec![0; nobs],
            ..Default::default()
        };
        for r in results {
            total = total.merge(r?);
        }
        Ok(total)
    }

    pub fn observable_index(&self, name: &str) -> Option<usize> {
        self.dem.observables.iter().position(|o| o.name == name)
    }
}

/// Post-tier-1 module error rates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModuleErrorRates {
    /// Module-stabiliser measurement error of X modules.
    pub p_m: Rate,
    /// Module-stabiliser measurement error of Z modules.
    pub p_m_z: Rate,
    /// Module-qubit phase error per super-round.
    pub p_p: Rate,
    /// Module-qubit bit error per super-round.
    pub p_b: Rate,
}

impl ModuleErrorRates {
    /// Phenomenological tier-2 noise, with X/Z measurement rates scaled by
    /// `r` (data rates too). Rates are capped at 1/2.
    pub fn phenomenological(&self, r: f64) -> Phenomenological {
        let c = |p: f64| (p * r).min(0.5);
        Phenomenological {
            data_z: c(self.p_p.p),
            data_x: c(self.p_b.p),
            meas_x: c(self.p_m.p),
            meas_z: c(self.p_m_z.p),
        }
    }
}

/// Failure rate of the named observable of a block.
fn block_rate(decoder: &BlockDecoder, name: &str, counts: &FailureCounts) -> Result<Rate> {
    let i = decoder
        .observable_index(name)
        .ok_or_else(|| Error::Config(format!("block has no observable {name}")))?;
    Ok(counts.rate(i))
}

/// Tier-1 Monte Carlo over the cubes of one spec: X and Z module cubes for
/// the measurement rates, a Q cube through a super-round for the phase and
/// bit rates. Triple-size Q cubes report per-super-round rates.
pub fn estimate_module_rates(
    spec: &ModuleSpec,
    noise: NoiseModel,
    size: CubeSize,
    trials: u64,
    seed: u64,
    weighting: Weighting,
) -> Result<ModuleErrorRates> {
    if trials == 0 {
        return Err(Error::ZeroTrials);
    }
    let run = |built: crate::circuits::Built, point: u64, name: &str| -> Result<Rate> {
        let dec = BlockDecoder::new(DetectorErrorModel::from_circuit(&built.circuit), weighting);
        let counts = dec.run(trials, seed, point)?;
        block_rate(&dec, name, &counts)
    };
    let p_m = run(ancilla_cube(spec, noise, ModuleRole::X, size)?, 1, "module_measurement")?;
    let p_m_z = run(ancilla_cube(spec, noise, ModuleRole::Z, size)?, 2, "module_measurement")?;
    let q = q_cube(spec, noise, size, &SUPER_ROUND)?;
    let dec = BlockDecoder::new(DetectorErrorModel::from_circuit(&q.circuit), weighting);
    let counts = dec.run(trials, seed, 3)?;
    let repeats = match size {
        CubeSize::Individual => 1,
        CubeSize::Triple => 3,
    };
    Ok(ModuleErrorRates {
        p_m,
        p_m_z,
        p_p: block_rate(&dec, "X_M", &counts)?.per_round(repeats),
        p_b: block_rate(&dec, "Z_M", &counts)?.per_round(repeats),
    })
}

/// Tier-2 logical failure counts of an `L` array over `L` super-rounds.
/// Observables are `X_L` (phase, index 0) and `Z_L` (bit, index 1).
pub fn decode_tier2(
    distance: usize,
    phen: Phenomenological,
    trials: u64,
    seed: u64,
    point: u64,
    weighting: Weighting,
) -> Result<FailureCounts> {
    let built = tier2_memory(distance, distance, phen)?;
    let dec = BlockDecoder::new(DetectorErrorModel::from_circuit(&built.circuit), weighting);
    dec.run(trials, seed, point)
}

/// A standalone matching problem: nodes and weighted edges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchingProblem {
    pub num_nodes: usize,
    pub edges: Vec<WeightedEdge>,
}

impl MatchingProblem {
    /// Parses the edge-list format: a `nodes N` line, then one `u v w` line
    /// per edge. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut num_nodes = None;
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| Error::Parse { line: i + 1, msg: msg.into() };
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks[0] == "nodes" {
                let n = toks.get(1).ok_or_else(|| err("missing node count"))?;
                num_nodes = Some(n.parse().map_err(|_| err("bad node count"))?);
                continue;
            }
            if toks.len() != 3 {
                return Err(err("expected `u v weight`"));
            }
            let u: usize = toks[0].parse().map_err(|_| err("bad node id"))?;
            let v: usize = toks[1].parse().map_err(|_| err("bad node id"))?;
            let w: i64 = toks[2].parse().map_err(|_| err("bad weight"))?;
            edges.push((u, v, w));
        }
        let num_nodes = num_nodes.unwrap_or_else(|| {
            edges.iter().map(|e| e.0.max(e.1) + 1).max().unwrap_or(0)
        });
        Ok(Self { num_nodes, edges })
    }

    pub fn solve(&self) -> Result<(Vec<(usize, usize)>, i64)> {
        let pairs = min_weight_perfect_matching(self.num_nodes, &self.edges)?;
        let weight = crate::matching::matching_weight(&self.edges, &pairs)
            .ok_or_else(|| Error::Infeasible("matched pair without an edge".into()))?;
        Ok((pairs, weight))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights() {
        assert_eq!(edge_weight(0.5, Weighting::LogLikelihood), 0);
        assert!(edge_weight(0.01, Weighting::LogLikelihood) > edge_weight(0.1, Weighting::LogLikelihood));
        assert_eq!(edge_weight(0.3, Weighting::Uniform), edge_weight(0.001, Weighting::Uniform));
    }

    #[test]
    fn parse_problem() {
        let p = MatchingProblem::parse("nodes 4\n0 1 1 # a\n1 2 5\n2 3 1\n").unwrap();
        assert_eq!(p.num_nodes, 4);
        let (pairs, w) = p.solve().unwrap();
        assert_eq!(pairs, vec![(0, 1), (2, 3)]);
        assert_eq!(w, 2);
        assert!(MatchingProblem::parse("0 1").is_err());
    }

    #[test]
    fn seeds_differ() {
        assert_ne!(mix_seed(1, 0, 0), mix_seed(1, 0, 1));
        assert_ne!(mix_seed(1, 0, 0), mix_seed(1, 1, 0));
    }
}
