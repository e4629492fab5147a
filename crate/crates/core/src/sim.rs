//! Noisy Clifford circuits, Pauli-frame execution and detector error models.
//!
//! A [`Circuit`] is a flat instruction list over qubits and measurement
//! records with explicit noise sites. Detectors and observables are parities
//! of measurement records that are deterministic in the noiseless circuit.
//!
//! Two execution paths exist. [`Circuit::run_frame`] pushes one sampled trial
//! through a [`PauliFrame`]. [`DetectorErrorModel::from_circuit`] propagates
//! every elementary fault, 64 at a time in bit lanes, to the detectors and
//! observables it flips; sampling and decoding then work on that model.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::pauli::{Clifford, EntanglementChannel, Pauli, PauliFrame};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    Z,
    X,
}

/// Stabiliser type a detector or observable belongs to. X-type detectors
/// see Z errors; Z-type detectors see X errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CheckType {
    X,
    Z,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum NoiseKind {
    /// Applies `pauli` to `qubit`.
    Flip { qubit: usize, pauli: Pauli },
    /// Flips measurement record `record`.
    RecordFlip { record: usize },
    /// Uniform non-identity single-qubit Pauli.
    Depolarize1 { qubit: usize },
    /// Uniform non-identity two-qubit Pauli.
    Depolarize2 { a: usize, b: usize },
    /// Biased Pauli channel with relative weights for X, Y, Z.
    PauliChannel { qubit: usize, weights: [f64; 3] },
}

/// A noise location: fires with probability `p`, then picks one outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseSite {
    pub p: f64,
    pub kind: NoiseKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Instr {
    /// Resets the qubit to the reference state of `basis` (clears its frame).
    Init { qubit: usize, basis: Basis },
    H(usize),
    Cnot { control: usize, target: usize },
    /// Records the outcome flip of measuring in `basis`; non-destructive in
    /// the frame picture.
    Measure { qubit: usize, basis: Basis, record: usize },
    /// Noiseless measurement that does not disturb the state. Equivalent to
    /// `Measure` for frames; the tableau evaluates it on a snapshot.
    Peek { qubit: usize, basis: Basis, record: usize },
    /// Applies `pauli` to `qubit` when record `record` was flipped.
    FeedForward { record: usize, qubit: usize, pauli: Pauli },
    Noise(usize),
    /// Labelled point in time where trial frames may be inspected.
    Marker(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Detector {
    pub records: Vec<usize>,
    pub check: CheckType,
    /// Free-form coordinates `(row, col, time)` for debugging and decoders.
    pub coords: (i64, i64, i64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observable {
    pub records: Vec<usize>,
    pub check: CheckType,
    pub name: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub num_qubits: usize,
    pub num_records: usize,
    pub instrs: Vec<Instr>,
    pub sites: Vec<NoiseSite>,
    pub detectors: Vec<Detector>,
    pub observables: Vec<Observable>,
    pub markers: Vec<String>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            ..Default::default()
        }
    }

    pub fn add_qubit(&mut self) -> usize {
        self.num_qubits += 1;
        self.num_qubits - 1
    }

    pub fn init(&mut self, qubit: usize, basis: Basis, eps: f64) {
        self.instrs.push(Instr::Init { qubit, basis });
        let pauli = match basis {
            Basis::Z => Pauli::X,
            Basis::X => Pauli::Z,
        };
        self.noise(eps, NoiseKind::Flip { qubit, pauli });
    }

    pub fn h(&mut self, qubit: usize, eps: f64) {
        self.instrs.push(Instr::H(qubit));
        self.noise(eps, NoiseKind::Depolarize1 { qubit });
    }

    pub fn cnot(&mut self, control: usize, target: usize, eps: f64) {
        self.instrs.push(Instr::Cnot { control, target });
        self.noise(eps, NoiseKind::Depolarize2 { a: control, b: target });
    }

    /// Measures and returns the record index. `eps` flips the reported bit.
    pub fn measure(&mut self, qubit: usize, basis: Basis, eps: f64) -> usize {
        let record = self.num_records;
        self.num_records += 1;
        self.instrs.push(Instr::Measure {
            qubit,
            basis,
            record,
        });
        self.noise(eps, NoiseKind::RecordFlip { record });
        record
    }

    /// Appends a [`Instr::Peek`] and returns its record.
    pub fn peek(&mut self, qubit: usize, basis: Basis) -> usize {
        let record = self.num_records;
        self.num_records += 1;
        self.instrs.push(Instr::Peek {
            qubit,
            basis,
            record,
        });
        record
    }

    pub fn feed_forward(&mut self, record: usize, qubit: usize, pauli: Pauli) {
        self.instrs.push(Instr::FeedForward {
            record,
            qubit,
            pauli,
        });
    }

    pub fn pauli_channel(&mut self, qubit: usize, ch: &EntanglementChannel) {
        let p = ch.infidelity();
        if p > 0.0 {
            self.noise(
                p,
                NoiseKind::PauliChannel {
                    qubit,
                    weights: [ch.p_x / p, ch.p_y / p, ch.p_z / p],
                },
            );
        }
    }

    pub fn noise(&mut self, p: f64, kind: NoiseKind) {
        if p > 0.0 {
            self.sites.push(NoiseSite { p, kind });
            self.instrs.push(Instr::Noise(self.sites.len() - 1));
        }
    }

    pub fn marker(&mut self, label: impl Into<String>) -> usize {
        self.markers.push(label.into());
        let id = self.markers.len() - 1;
        self.instrs.push(Instr::Marker(id));
        id
    }

    pub fn detector(&mut self, records: Vec<usize>, check: CheckType, coords: (i64, i64, i64)) -> usize {
        self.detectors.push(Detector {
            records,
            check,
            coords,
        });
        self.detectors.len() - 1
    }

    pub fn observable(&mut self, records: Vec<usize>, check: CheckType, name: impl Into<String>) -> usize {
        assert!(self.observables.len() < 64, "at most 64 observables");
        self.observables.push(Observable {
            records,
            check,
            name: name.into(),
        });
        self.observables.len() - 1
    }

    /// Runs one sampled trial. `on_marker` sees the frame at each marker.
    pub fn run_frame<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        mut on_marker: impl FnMut(usize, &PauliFrame),
    ) -> TrialOutcome {
        let mut frame = PauliFrame::new(self.num_qubits);
        let mut flips = vec![false; self.num_records];
        for instr in &self.instrs {
            match *instr {
                Instr::Init { qubit, .. } => {
                    let p = frame.get(qubit).expect("qubit in range");
                    frame.apply(qubit, p).expect("qubit in range");
                }
                Instr::H(q) => frame.propagate(Clifford::H(q)).expect("qubit in range"),
                Instr::Cnot { control, target } => frame
                    .propagate(Clifford::Cnot { control, target })
                    .expect("qubit in range"),
                Instr::Measure {
                    qubit,
                    basis,
                    record,
                }
                | Instr::Peek {
                    qubit,
                    basis,
                    record,
                } => {
                    flips[record] = match basis {
                        Basis::Z => frame.x(qubit),
                        Basis::X => frame.z(qubit),
                    };
                }
                Instr::FeedForward {
                    record,
                    qubit,
                    pauli,
                } => {
                    if flips[record] {
                        frame.apply(qubit, pauli).expect("qubit in range");
                    }
                }
                Instr::Noise(s) => {
                    let site = &self.sites[s];
                    if rng.gen::<f64>() < site.p {
                        let pick = rng.gen::<f64>();
                        match site.kind {
                            NoiseKind::RecordFlip { record } => flips[record] ^= true,
                            ref kind => {
                                for (q, p) in site_outcome_paulis(kind, pick) {
                                    frame.apply(q, p).expect("qubit in range");
                                }
                            }
                        }
                    }
                }
                Instr::Marker(m) => on_marker(m, &frame),
            }
        }
        let detectors = self
            .detectors
            .iter()
            .map(|d| d.records.iter().fold(false, |acc, &r| acc ^ flips[r]))
            .collect();
        let observables = self
            .observables
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, o)| {
                if o.records.iter().fold(false, |a, &r| a ^ flips[r]) {
                    acc | (1 << i)
                } else {
                    acc
                }
            });
        TrialOutcome {
            record_flips: flips,
            detectors,
            observables,
            final_frame: frame,
        }
    }

    /// Observable mask of all observables of the given check type.
    pub fn observable_mask(&self, check: CheckType) -> u64 {
        self.observables
            .iter()
            .enumerate()
            .filter(|(_, o)| o.check == check)
            .fold(0, |m, (i, _)| m | (1 << i))
    }
}

/// Outcome of one frame-level trial.
#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub record_flips: Vec<bool>,
    pub detectors: Vec<bool>,
    pub observables: u64,
    pub final_frame: PauliFrame,
}

/// Paulis applied by a site given a uniform draw `u` in `[0, 1)` choosing
/// among its outcomes.
fn site_outcome_paulis(kind: &NoiseKind, u: f64) -> Vec<(usize, Pauli)> {
    match *kind {
        NoiseKind::Flip { qubit, pauli } => vec![(qubit, pauli)],
        NoiseKind::RecordFlip { .. } => vec![],
        NoiseKind::Depolarize1 { qubit } => {
            let k = 1 + ((u * 3.0) as usize).min(2);
            vec![(qubit, Pauli::from_index(k))]
        }
        NoiseKind::Depolarize2 { a, b } => {
            let k = 1 + ((u * 15.0) as usize).min(14);
            vec![(a, Pauli::from_index(k >> 2)), (b, Pauli::from_index(k & 3))]
        }
        NoiseKind::PauliChannel { qubit, weights } => {
            let p = if u < weights[0] {
                Pauli::X
            } else if u < weights[0] + weights[1] {
                Pauli::Y
            } else {
                Pauli::Z
            };
            vec![(qubit, p)]
        }
    }
}

/// Detectors and observables flipped by one fault.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Effect {
    pub detectors: Vec<u32>,
    pub observables: u64,
}

impl Effect {
    pub fn is_empty(&self) -> bool {
        self.detectors.is_empty() && self.observables == 0
    }

    /// Symmetric difference.
    pub fn xor(&self, other: &Effect) -> Effect {
        let (a, b) = (&self.detectors, &other.detectors);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i] < b[j]) {
                out.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j] < a[i] {
                out.push(b[j]);
                j += 1;
            } else {
                i += 1;
                j += 1;
            }
        }
        Effect {
            detectors: out,
            observables: self.observables ^ other.observables,
        }
    }
}

/// One noise site with its possible outcomes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DemSite {
    pub p: f64,
    /// `(cumulative weight, effect, basis components)`; the last cumulative
    /// weight is 1. Components are the per-qubit X/Z pieces of the outcome.
    pub outcomes: Vec<DemOutcome>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DemOutcome {
    pub cumulative: f64,
    pub weight: f64,
    pub effect: Effect,
    pub components: Vec<Effect>,
}

/// Every noise site of a circuit reduced to its effect on detectors and
/// observables.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DetectorErrorModel {
    pub detectors: Vec<Detector>,
    pub observables: Vec<Observable>,
    pub sites: Vec<DemSite>,
    /// Sites grouped by exact firing probability for skip sampling.
    groups: Vec<(f64, Vec<u32>)>,
}

/// A single basis fault to propagate: inject at instruction `at`.
#[derive(Clone, Copy)]
enum BasisFault {
    Qubit { at: usize, qubit: usize, x: bool },
    Record { record: usize, at: usize },
}

impl BasisFault {
    fn at(&self) -> usize {
        match *self {
            BasisFault::Qubit { at, .. } | BasisFault::Record { at, .. } => at,
        }
    }
}

impl DetectorErrorModel {
    /// Propagates every elementary fault of `circuit`.
    pub fn from_circuit(circuit: &Circuit) -> Self {
        // instruction index of each site
        let mut site_at = vec![0usize; circuit.sites.len()];
        for (i, instr) in circuit.instrs.iter().enumerate() {
            if let Instr::Noise(s) = *instr {
                site_at[s] = i;
            }
        }
        // basis faults per site
        let mut faults: Vec<BasisFault> = Vec::new();
        let mut site_faults: Vec<Vec<usize>> = Vec::with_capacity(circuit.sites.len());
        for (s, site) in circuit.sites.iter().enumerate() {
            let at = site_at[s];
            let mut ids = Vec::new();
            let mut push = |f: BasisFault, faults: &mut Vec<BasisFault>| {
                faults.push(f);
                ids.push(faults.len() - 1);
            };
            match site.kind {
                NoiseKind::RecordFlip { record } => push(BasisFault::Record { record, at }, &mut faults),
                NoiseKind::Flip { qubit, .. }
                | NoiseKind::Depolarize1 { qubit }
                | NoiseKind::PauliChannel { qubit, .. } => {
                    push(BasisFault::Qubit { at, qubit, x: true }, &mut faults);
                    push(BasisFault::Qubit { at, qubit, x: false }, &mut faults);
                }
                NoiseKind::Depolarize2 { a, b } => {
                    for q in [a, b] {
                        push(BasisFault::Qubit { at, qubit: q, x: true }, &mut faults);
                        push(BasisFault::Qubit { at, qubit: q, x: false }, &mut faults);
                    }
                }
            }
            site_faults.push(ids);
        }
        let effects = propagate_faults(circuit, &faults);

        let mut sites = Vec::with_capacity(circuit.sites.len());
        for (s, site) in circuit.sites.iter().enumerate() {
            let ids = &site_faults[s];
            let comp = |x: usize, z: usize, px: bool, pz: bool| -> Vec<Effect> {
                let mut v = Vec::new();
                if px {
                    v.push(effects[ids[x]].clone());
                }
                if pz {
                    v.push(effects[ids[z]].clone());
                }
                v
            };
            let mut outcomes: Vec<(f64, Vec<Effect>)> = Vec::new();
            match site.kind {
                NoiseKind::RecordFlip { .. } => outcomes.push((1.0, vec![effects[ids[0]].clone()])),
                NoiseKind::Flip { pauli, .. } => {
                    outcomes.push((1.0, comp(0, 1, pauli.has_x(), pauli.has_z())))
                }
                NoiseKind::Depolarize1 { .. } => {
                    for p in [Pauli::X, Pauli::Y, Pauli::Z] {
                        outcomes.push((1.0 / 3.0, comp(0, 1, p.has_x(), p.has_z())));
                    }
                }
                NoiseKind::PauliChannel { weights, .. } => {
                    for (w, p) in weights.iter().zip([Pauli::X, Pauli::Y, Pauli::Z]) {
                        if *w > 0.0 {
                            outcomes.push((*w, comp(0, 1, p.has_x(), p.has_z())));
                        }
                    }
                }
                NoiseKind::Depolarize2 { .. } => {
                    for k in 1..16 {
                        let (pa, pb) = (Pauli::from_index(k >> 2), Pauli::from_index(k & 3));
                        let mut v = comp(0, 1, pa.has_x(), pa.has_z());
                        v.extend(comp(2, 3, pb.has_x(), pb.has_z()));
                        outcomes.push((1.0 / 15.0, v));
                    }
                }
            }
            let total: f64 = outcomes.iter().map(|o| o.0).sum();
            let mut cum = 0.0;
            let n = outcomes.len();
            let outcomes = outcomes
                .into_iter()
                .enumerate()
                .map(|(i, (w, components))| {
                    cum += w / total;
                    let effect = components
                        .iter()
                        .fold(Effect::default(), |acc, c| acc.xor(c));
                    DemOutcome {
                        cumulative: if i + 1 == n { 1.0 } else { cum },
                        weight: w / total,
                        effect,
                        components,
                    }
                })
                .collect();
            sites.push(DemSite { p: site.p, outcomes });
        }
        Self::from_sites(circuit.detectors.clone(), circuit.observables.clone(), sites)
    }

    /// Assembles a model from explicit sites.
    pub fn from_sites(detectors: Vec<Detector>, observables: Vec<Observable>, sites: Vec<DemSite>) -> Self {
        let mut groups: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for (i, s) in sites.iter().enumerate() {
            if s.p > 0.0 {
                groups.entry(s.p.to_bits()).or_default().push(i as u32);
            }
        }
        let groups = groups
            .into_iter()
            .map(|(bits, v)| (f64::from_bits(bits), v))
            .collect();
        Self {
            detectors,
            observables,
            sites,
            groups,
        }
    }

    pub fn num_detectors(&self) -> usize {
        self.detectors.len()
    }

    pub fn observable_mask(&self, check: CheckType) -> u64 {
        self.observables
            .iter()
            .enumerate()
            .filter(|(_, o)| o.check == check)
            .fold(0, |m, (i, _)| m | (1 << i))
    }

    /// Samples one shot: fired detectors (sorted) and flipped observables.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, scratch: &mut Vec<bool>) -> (Vec<u32>, u64) {
        scratch.clear();
        scratch.resize(self.detectors.len(), false);
        let mut touched: Vec<u32> = Vec::new();
        let mut obs = 0u64;
        let mut fire = |site: &DemSite, u: f64, touched: &mut Vec<u32>, obs: &mut u64| {
            let o = site
                .outcomes
                .iter()
                .find(|o| u < o.cumulative)
                .unwrap_or_else(|| site.outcomes.last().expect("site has outcomes"));
            for &d in &o.effect.detectors {
                scratch[d as usize] ^= true;
                touched.push(d);
            }
            *obs ^= o.effect.observables;
        };
        for (p, members) in &self.groups {
            let n = members.len();
            if *p >= 1.0 {
                for &m in members {
                    fire(&self.sites[m as usize], rng.gen(), &mut touched, &mut obs);
                }
                continue;
            }
            let log_q = (1.0 - p).ln();
            let mut idx: usize = 0;
            loop {
                let u: f64 = rng.gen();
                let skip = ((1.0 - u).ln() / log_q).floor();
                if !skip.is_finite() || skip >= (n - idx) as f64 {
                    break;
                }
                idx += skip as usize;
                fire(&self.sites[members[idx] as usize], rng.gen(), &mut touched, &mut obs);
                idx += 1;
                if idx >= n {
                    break;
                }
            }
        }
        touched.sort_unstable();
        touched.dedup();
        touched.retain(|&d| scratch[d as usize]);
        (touched, obs)
    }
}

/// Lane-parallel frame propagation of basis faults.
fn propagate_faults(circuit: &Circuit, faults: &[BasisFault]) -> Vec<Effect> {
    let mut order: Vec<usize> = (0..faults.len()).collect();
    order.sort_by_key(|&i| faults[i].at());
    let mut effects = vec![Effect::default(); faults.len()];

    // detectors and observables touching each record
    let mut rec_dets: Vec<Vec<u32>> = vec![Vec::new(); circuit.num_records];
    for (d, det) in circuit.detectors.iter().enumerate() {
        for &r in &det.records {
            rec_dets[r].push(d as u32);
        }
    }
    let mut rec_obs = vec![0u64; circuit.num_records];
    for (o, ob) in circuit.observables.iter().enumerate() {
        for &r in &ob.records {
            rec_obs[r] ^= 1 << o;
        }
    }

    let mut x = vec![0u64; circuit.num_qubits];
    let mut z = vec![0u64; circuit.num_qubits];
    let mut rec = vec![0u64; circuit.num_records];
    let mut det = vec![0u64; circuit.detectors.len()];
    for batch in order.chunks(64) {
        x.fill(0);
        z.fill(0);
        rec.fill(0);
        det.fill(0);
        // injections keyed by instruction index
        let mut inject: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
        for (lane, &f) in batch.iter().enumerate() {
            inject.entry(faults[f].at()).or_default().push((lane, f));
        }
        let start = faults[batch[0]].at();
        for (i, instr) in circuit.instrs.iter().enumerate().skip(start) {
            if let Some(list) = inject.get(&i) {
                for &(lane, f) in list {
                    match faults[f] {
                        BasisFault::Qubit { qubit, x: true, .. } => x[qubit] ^= 1 << lane,
                        BasisFault::Qubit { qubit, x: false, .. } => z[qubit] ^= 1 << lane,
                        BasisFault::Record { record, .. } => rec[record] ^= 1 << lane,
                    }
                }
            }
            match *instr {
                Instr::Init { qubit, .. } => {
                    x[qubit] = 0;
                    z[qubit] = 0;
                }
                Instr::H(q) => std::mem::swap(&mut x[q], &mut z[q]),
                Instr::Cnot { control, target } => {
                    x[target] ^= x[control];
                    z[control] ^= z[target];
                }
                Instr::Measure {
                    qubit,
                    basis,
                    record,
                }
                | Instr::Peek {
                    qubit,
                    basis,
                    record,
                } => {
                    rec[record] ^= match basis {
                        Basis::Z => x[qubit],
                        Basis::X => z[qubit],
                    };
                }
                Instr::FeedForward {
                    record,
                    qubit,
                    pauli,
                } => {
                    if pauli.has_x() {
                        x[qubit] ^= rec[record];
                    }
                    if pauli.has_z() {
                        z[qubit] ^= rec[record];
                    }
                }
                Instr::Noise(_) | Instr::Marker(_) => {}
            }
        }
        let mut obs = vec![0u64; 64];
        for (r, &bits) in rec.iter().enumerate() {
            if bits == 0 {
                continue;
            }
            for &d in &rec_dets[r] {
                det[d as usize] ^= bits;
            }
            if rec_obs[r] != 0 {
                let mut b = bits;
                while b != 0 {
                    let lane = b.trailing_zeros() as usize;
                    obs[lane] ^= rec_obs[r];
                    b &= b - 1;
                }
            }
        }
        for (d, &bits) in det.iter().enumerate() {
            let mut b = bits;
            while b != 0 {
                let lane = b.trailing_zeros() as usize;
                effects[batch[lane]].detectors.push(d as u32);
                b &= b - 1;
            }
        }
        for (lane, &f) in batch.iter().enumerate() {
            effects[f].observables = obs[lane];
        }
    }
    effects
}
