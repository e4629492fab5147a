//! Gate schedules for physical stabiliser rounds, distributed CNOTs and the
//! module-qubit stabiliser protocol.
//!
//! A [`ScheduleBuilder`] emits two views of the same operations at once: a
//! [`GateSchedule`] of logical gate events (one distributed CNOT is one
//! event) and a noisy [`Circuit`] where every distributed CNOT is expanded
//! into the pair-consuming gadget. While building, it tracks which parities
//! of measurement records are deterministic and declares them as detectors.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{EntanglementChannel, IntraModuleNoise, Pauli};
use crate::sim::{Basis, CheckType, Circuit, NoiseKind};
use crate::topology::{ClientRole, Direction, ModuleRole, NetworkLayout};

/// Intra-module gate noise plus the channel of consumed entangled pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub intra: IntraModuleNoise,
    /// Pairs consumed by CNOTs of X-type plaquettes.
    pub x_link: EntanglementChannel,
    /// Pairs consumed by CNOTs of Z-type plaquettes.
    pub z_link: EntanglementChannel,
    /// Treat every CNOT as local (monolithic baseline).
    pub all_local: bool,
}

impl NoiseModel {
    pub fn new(intra: IntraModuleNoise, link: EntanglementChannel) -> Self {
        Self {
            intra,
            x_link: link,
            z_link: link,
            all_local: false,
        }
    }

    pub fn noiseless() -> Self {
        Self::new(IntraModuleNoise::noiseless(), EntanglementChannel::perfect())
    }

    /// Every gate local with rate `intra`; no entanglement consumed.
    pub fn monolithic(intra: IntraModuleNoise) -> Self {
        Self {
            all_local: true,
            ..Self::new(intra, EntanglementChannel::perfect())
        }
    }

    fn link(&self, check: CheckType) -> &EntanglementChannel {
        match check {
            CheckType::X => &self.x_link,
            CheckType::Z => &self.z_link,
        }
    }
}

/// Code-capacity style noise with faulty measurements: every round, each
/// active data qubit suffers Z with `data_z` and X with `data_x`; every
/// ancilla outcome is flipped with `meas_x` (X-type) or `meas_z` (Z-type).
/// Gates are ideal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Phenomenological {
    pub data_z: f64,
    pub data_x: f64,
    pub meas_x: f64,
    pub meas_z: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GateKind {
    Init(Basis),
    H,
    Cnot { distributed: bool },
    Measure(Basis),
}

/// One gate, preparation or measurement at a time step. CNOT qubits are
/// `[control, target]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateEvent {
    pub step: usize,
    pub kind: GateKind,
    pub qubits: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Phase {
    /// Noiseless rounds establishing the reference state.
    Prepare,
    XModule,
    ZModule,
    QOnly,
    /// Single-tier rounds over the whole layout.
    Flat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AncillaMeasurement {
    pub ancilla: usize,
    pub check: CheckType,
    pub record: usize,
    /// Data qubits the ancilla interacted with this round, in CNOT order.
    pub support: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundInfo {
    pub phase: Phase,
    pub super_round: usize,
    pub first_step: usize,
    pub measurements: Vec<AncillaMeasurement>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProtocolParams {
    /// Physical rounds per segment.
    pub n: usize,
    /// Number of super-rounds.
    pub l_rounds: usize,
    /// Initial state of all Q-module data qubits.
    pub q_init: Basis,
}

impl ProtocolParams {
    /// `n = (D+1)/2` for the layout's module dimension.
    pub fn for_layout(layout: &NetworkLayout, l_rounds: usize) -> Self {
        Self {
            n: layout.spec.rounds_per_segment(),
            l_rounds,
            q_init: Basis::Z,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GateSchedule {
    pub events: Vec<GateEvent>,
    pub rounds: Vec<RoundInfo>,
    /// Rounds per segment (0 for flat schedules).
    pub n: usize,
    pub super_rounds: usize,
}

impl GateSchedule {
    /// Line-oriented dump: `step kind qubits`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            let kind = match e.kind {
                GateKind::Init(Basis::Z) => "init_z",
                GateKind::Init(Basis::X) => "init_x",
                GateKind::H => "h",
                GateKind::Cnot { distributed: false } => "cnot",
                GateKind::Cnot { distributed: true } => "cnot_dist",
                GateKind::Measure(Basis::Z) => "measure_z",
                GateKind::Measure(Basis::X) => "measure_x",
            };
            let qs: Vec<String> = e.qubits.iter().map(|q| q.to_string()).collect();
            let _ = writeln!(out, "{} {} {}", e.step, kind, qs.join(" "));
        }
        out
    }

    pub fn rounds_in(&self, phase: Phase) -> impl Iterator<Item = &RoundInfo> {
        self.rounds.iter().filter(move |r| r.phase == phase)
    }
}

/// Schedule, noisy circuit and record bookkeeping of one built block.
#[derive(Debug, Clone)]
pub struct Built {
    pub schedule: GateSchedule,
    pub circuit: Circuit,
    /// Number of client qubits; higher indices are pair qubits.
    pub clients: usize,
}

#[derive(Debug, Clone, Copy, Default)]
struct DataState {
    init: Option<(usize, Basis)>,
    meas: Option<(usize, Basis, usize)>,
}

#[derive(Debug, Clone)]
struct LastMeas {
    record: usize,
    support: Vec<usize>,
    step: usize,
}

fn check_basis(check: CheckType) -> Basis {
    match check {
        CheckType::X => Basis::X,
        CheckType::Z => Basis::Z,
    }
}

/// Incremental builder of schedules, circuits and detectors.
pub struct ScheduleBuilder<'a> {
    layout: &'a NetworkLayout,
    noise: NoiseModel,
    phen: Option<Phenomenological>,
    circuit: Circuit,
    events: Vec<GateEvent>,
    rounds: Vec<RoundInfo>,
    step: usize,
    data: Vec<DataState>,
    last: Vec<Option<LastMeas>>,
    pairs: HashMap<(usize, usize), (usize, usize)>,
    n: usize,
    super_round: usize,
    detectors: bool,
}

impl<'a> ScheduleBuilder<'a> {
    pub fn new(layout: &'a NetworkLayout, noise: NoiseModel) -> Self {
        Self {
            layout,
            noise,
            phen: None,
            circuit: Circuit::new(layout.len()),
            events: Vec::new(),
            rounds: Vec::new(),
            step: 0,
            data: vec![DataState::default(); layout.len()],
            last: vec![None; layout.len()],
            pairs: HashMap::new(),
            n: 0,
            super_round: 0,
            detectors: true,
        }
    }

    /// Replaces gate noise by phenomenological noise.
    pub fn phenomenological(layout: &'a NetworkLayout, phen: Phenomenological) -> Self {
        let mut b = Self::new(layout, NoiseModel::noiseless());
        b.phen = Some(phen);
        b
    }

    /// Turns automatic detector declaration on or off.
    pub fn track_detectors(&mut self, on: bool) {
        self.detectors = on;
    }

    pub fn set_super_round(&mut self, k: usize) {
        self.super_round = k;
    }

    pub fn set_rounds_per_segment(&mut self, n: usize) {
        self.n = n;
    }

    pub fn circuit_mut(&mut self) -> &mut Circuit {
        &mut self.circuit
    }

    pub fn layout(&self) -> &NetworkLayout {
        self.layout
    }

    fn event(&mut self, kind: GateKind, qubits: Vec<usize>) {
        self.events.push(GateEvent {
            step: self.step,
            kind,
            qubits,
        });
    }

    fn eps(&self, noiseless: bool) -> IntraModuleNoise {
        if noiseless || self.phen.is_some() {
            IntraModuleNoise::noiseless()
        } else {
            self.noise.intra
        }
    }

    /// Prepares data qubits in `basis` (Z-reset followed by H for X).
    pub fn init_data(&mut self, qubits: &[usize], basis: Basis, noiseless: bool) {
        let e = self.eps(noiseless);
        for &q in qubits {
            self.event(GateKind::Init(basis), vec![q]);
            self.circuit.init(q, Basis::Z, e.eps_init);
            if basis == Basis::X {
                self.circuit.h(q, e.eps_1q);
            }
            self.data[q] = DataState {
                init: Some((self.step, basis)),
                meas: None,
            };
        }
        self.step += 1;
    }

    /// Measures data qubits in `basis` (H then Z-measurement for X) and
    /// closes detectors of ancillas whose whole support was read out.
    pub fn measure_data(&mut self, qubits: &[usize], basis: Basis, noiseless: bool) -> Vec<usize> {
        let e = self.eps(noiseless);
        let mut recs = Vec::with_capacity(qubits.len());
        for &q in qubits {
            self.event(GateKind::Measure(basis), vec![q]);
            if basis == Basis::X {
                self.circuit.h(q, e.eps_1q);
            }
            let r = self.circuit.measure(q, Basis::Z, e.eps_meas);
            self.data[q].meas = Some((self.step, basis, r));
            recs.push(r);
        }
        self.step += 1;
        let readout: HashMap<usize, usize> = qubits.iter().copied().zip(recs.iter().copied()).collect();
        self.close_detectors(&readout, basis);
        recs
    }

    /// Noiseless non-destructive readout, visible only to the frame
    /// simulator. Declares no detectors and leaves data bookkeeping alone.
    pub fn peek(&mut self, qubits: &[usize], basis: Basis) -> Vec<usize> {
        let recs = qubits
            .iter()
            .map(|&q| self.circuit.peek(q, basis))
            .collect();
        self.step += 1;
        recs
    }

    /// Perfect final readout of `qubits` in both bases: closes every
    /// ancilla whose last support lies inside `qubits`. Returns the Z and X
    /// readout records.
    pub fn close(&mut self, qubits: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let z = self.peek(qubits, Basis::Z);
        let x = self.peek(qubits, Basis::X);
        for (basis, recs) in [(Basis::Z, &z), (Basis::X, &x)] {
            let readout: HashMap<usize, usize> = qubits.iter().copied().zip(recs.iter().copied()).collect();
            self.close_with(&readout, basis, true);
        }
        (z, x)
    }

    fn ancilla_check(&self, a: usize) -> Option<CheckType> {
        match self.layout.qubits[a].role {
            ClientRole::AncillaX => Some(CheckType::X),
            ClientRole::AncillaZ => Some(CheckType::Z),
            ClientRole::Data => None,
        }
    }

    fn close_detectors(&mut self, readout: &HashMap<usize, usize>, basis: Basis) {
        self.close_with(readout, basis, false);
    }

    /// Declares `last ^ readouts(support)` for ancillas of the matching type
    /// whose full support was read out in `basis` after their last
    /// measurement, by `readout` or earlier.
    fn close_with(&mut self, readout: &HashMap<usize, usize>, basis: Basis, peeked: bool) {
        let mut cands: Vec<usize> = Vec::new();
        for &q in readout.keys() {
            for dir in Direction::ORDER {
                if let Some(a) = self.layout.neighbour(q, dir) {
                    if self.last[a].is_some() {
                        cands.push(a);
                    }
                }
            }
        }
        cands.sort_unstable();
        cands.dedup();
        for a in cands {
            let Some(check) = self.ancilla_check(a) else { continue };
            if check_basis(check) != basis {
                continue;
            }
            let last = self.last[a].as_ref().expect("candidate has a measurement");
            // support qubits come from this readout or an earlier one in the
            // same basis after the ancilla's last measurement
            let mut recs = vec![last.record];
            let mut ok = true;
            for q in &last.support {
                let earlier = match self.data[*q].meas {
                    Some((t, b, r)) if t > last.step && b == basis => Some(r),
                    _ => None,
                };
                match (readout.get(q), earlier) {
                    (Some(&r), _) if peeked => recs.push(r),
                    (_, Some(r)) => recs.push(r),
                    _ => ok = false,
                }
            }
            if !ok {
                continue;
            }
            let (r, c) = self.layout.qubits[a].global;
            if self.detectors {
                self.circuit
                    .detector(recs, check, (r as i64, c as i64, self.rounds.len() as i64));
            }
            if !peeked {
                self.last[a] = None;
            }
        }
    }

    /// Detector for a fresh ancilla outcome, if deterministic.
    ///
    /// Against the previous outcome of the same ancilla: shared support must
    /// be untouched since, dropped support must have been read out in the
    /// ancilla's basis, added support freshly prepared in it. Failing that,
    /// the outcome alone is deterministic when its whole support is freshly
    /// prepared in the ancilla's basis.
    fn ancilla_detector(&self, a: usize, check: CheckType, record: usize, support: &[usize]) -> Option<Vec<usize>> {
        let basis = check_basis(check);
        let fresh_since = |q: usize, t0: Option<usize>| {
            matches!((self.data[q].init, self.data[q].meas),
                (Some((t, b)), None) if b == basis && t0.is_none_or(|t0| t > t0))
        };
        if let Some(prev) = &self.last[a] {
            let mut recs = vec![prev.record, record];
            let mut ok = true;
            for &q in &prev.support {
                let st = self.data[q];
                if support.contains(&q) {
                    let touched = st.init.is_some_and(|(t, _)| t > prev.step)
                        || st.meas.is_some_and(|(t, _, _)| t > prev.step);
                    ok &= !touched;
                } else {
                    match st.meas {
                        Some((t, b, r)) if t > prev.step && b == basis => recs.push(r),
                        _ => ok = false,
                    }
                }
            }
            for &q in support {
                if !prev.support.contains(&q) {
                    ok &= fresh_since(q, Some(prev.step));
                }
            }
            if ok {
                return Some(recs);
            }
        }
        let fresh = support.iter().all(|&q| fresh_since(q, None));
        (fresh && !support.is_empty()).then(|| vec![record])
    }

    /// One physical stabiliser round over the qubits flagged in `active`:
    /// ancilla preparation, H on X ancillas, four CNOT layers in the order
    /// N, W, E, S, H again and measurement.
    pub fn round(&mut self, active: &[bool], phase: Phase, noiseless: bool) -> usize {
        let layout = self.layout;
        let e = self.eps(noiseless);
        let mut ancillas: Vec<(usize, CheckType, Vec<usize>)> = Vec::new();
        for q in 0..layout.len() {
            if !active[q] {
                continue;
            }
            let Some(check) = self.ancilla_check(q) else { continue };
            let support: Vec<usize> = Direction::ORDER
                .iter()
                .filter_map(|&d| layout.neighbour(q, d))
                .filter(|&n| active[n])
                .collect();
            if !support.is_empty() {
                ancillas.push((q, check, support));
            }
        }
        if let Some(ph) = self.phen.filter(|_| !noiseless) {
            for q in 0..layout.len() {
                if active[q] && layout.qubits[q].role == ClientRole::Data {
                    self.circuit.noise(ph.data_z, NoiseKind::Flip { qubit: q, pauli: Pauli::Z });
                    self.circuit.noise(ph.data_x, NoiseKind::Flip { qubit: q, pauli: Pauli::X });
                }
            }
        }
        let first_step = self.step;
        for (a, _, _) in &ancillas {
            self.event(GateKind::Init(Basis::Z), vec![*a]);
            self.circuit.init(*a, Basis::Z, e.eps_init);
        }
        self.step += 1;
        self.hadamard_layer(&ancillas, e.eps_1q);
        for dir in Direction::ORDER {
            for (a, check, _) in &ancillas {
                let Some(d) = layout.neighbour(*a, dir).filter(|&n| active[n]) else { continue };
                let (c, t) = match check {
                    CheckType::X => (*a, d),
                    CheckType::Z => (d, *a),
                };
                self.cnot(c, t, *check, noiseless);
            }
            self.step += 1;
        }
        self.hadamard_layer(&ancillas, e.eps_1q);
        let mut measurements = Vec::with_capacity(ancillas.len());
        for (a, check, support) in ancillas {
            self.event(GateKind::Measure(Basis::Z), vec![a]);
            let flip = match (self.phen.filter(|_| !noiseless), check) {
                (Some(ph), CheckType::X) => ph.meas_x,
                (Some(ph), CheckType::Z) => ph.meas_z,
                (None, _) => e.eps_meas,
            };
            let record = self.circuit.measure(a, Basis::Z, flip);
            if let Some(recs) = self.ancilla_detector(a, check, record, &support) {
                if self.detectors {
                    let (r, c) = layout.qubits[a].global;
                    self.circuit
                        .detector(recs, check, (r as i64, c as i64, self.rounds.len() as i64));
                }
            }
            measurements.push(AncillaMeasurement {
                ancilla: a,
                check,
                record,
                support,
            });
        }
        for m in &measurements {
            self.last[m.ancilla] = Some(LastMeas {
                record: m.record,
                support: m.support.clone(),
                step: self.step,
            });
        }
        self.step += 1;
        self.rounds.push(RoundInfo {
            phase,
            super_round: self.super_round,
            first_step,
            measurements,
        });
        self.rounds.len() - 1
    }

    fn hadamard_layer(&mut self, ancillas: &[(usize, CheckType, Vec<usize>)], eps: f64) {
        for (a, check, _) in ancillas {
            if *check == CheckType::X {
                self.event(GateKind::H, vec![*a]);
                self.circuit.h(*a, eps);
            }
        }
        self.step += 1;
    }

    /// CNOT between client qubits; expanded into the pair gadget when the
    /// qubits sit in different modules.
    pub fn cnot(&mut self, control: usize, target: usize, check: CheckType, noiseless: bool) {
        let distributed = self.layout.is_distributed(control, target);
        self.event(GateKind::Cnot { distributed }, vec![control, target]);
        let e = self.eps(noiseless);
        if !distributed || self.noise.all_local || noiseless || self.phen.is_some() {
            self.circuit.cnot(control, target, e.eps_2q);
            return;
        }
        let (e1, e2) = match self.pairs.get(&(control, target)) {
            Some(&p) => p,
            None => {
                let p = (self.circuit.add_qubit(), self.circuit.add_qubit());
                self.pairs.insert((control, target), p);
                p
            }
        };
        let link = *self.noise.link(check);
        distributed_cnot_into(&mut self.circuit, control, target, (e1, e2), &link, &e);
    }

    pub fn finish(self) -> Built {
        Built {
            schedule: GateSchedule {
                events: self.events,
                rounds: self.rounds,
                n: self.n,
                super_rounds: self.super_round + usize::from(self.n > 0),
            },
            circuit: self.circuit,
            clients: self.layout.len(),
        }
    }
}

/// Appends the pair-consuming CNOT gadget: a Bell pair `(e1, e2)` whose
/// `e1` half carries `link`, CNOT(control, e1), CNOT(e2, target), Z-readout
/// of `e1` correcting X on the target and X-readout of `e2` correcting Z on
/// the control. Byproducts enter the frame immediately.
pub fn distributed_cnot_into(
    circuit: &mut Circuit,
    control: usize,
    target: usize,
    pair: (usize, usize),
    link: &EntanglementChannel,
    eps: &IntraModuleNoise,
) {
    let (e1, e2) = pair;
    circuit.init(e1, Basis::Z, 0.0);
    circuit.init(e2, Basis::Z, 0.0);
    circuit.h(e1, 0.0);
    circuit.cnot(e1, e2, 0.0);
    circuit.pauli_channel(e1, link);
    circuit.cnot(control, e1, eps.eps_2q);
    circuit.cnot(e2, target, eps.eps_2q);
    let r1 = circuit.measure(e1, Basis::Z, eps.eps_meas);
    let r2 = circuit.measure(e2, Basis::X, eps.eps_meas);
    circuit.feed_forward(r1, target, Pauli::X);
    circuit.feed_forward(r2, control, Pauli::Z);
}

/// Stand-alone distributed CNOT on qubits 0 (control) and 1 (target) with
/// pair qubits 2 and 3.
pub fn distributed_cnot(link: &EntanglementChannel, eps: &IntraModuleNoise) -> Circuit {
    let mut c = Circuit::new(4);
    distributed_cnot_into(&mut c, 0, 1, (2, 3), link, eps);
    c
}

/// Client qubits of the layout whose module role is in `roles`.
pub fn role_mask(layout: &NetworkLayout, roles: &[ModuleRole]) -> Vec<bool> {
    layout
        .qubits
        .iter()
        .map(|q| roles.contains(&layout.module_role(q.module)))
        .collect()
}

/// Data qubits of all modules with role `role`.
pub fn role_data(layout: &NetworkLayout, role: ModuleRole) -> Vec<usize> {
    layout
        .qubits
        .iter()
        .filter(|q| q.role == ClientRole::Data && layout.module_role(q.module) == role)
        .map(|q| q.id)
        .collect()
}

/// Records that make up one module-qubit stabiliser outcome.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleReadout {
    pub module: (usize, usize),
    pub role: ModuleRole,
    pub super_round: usize,
    /// Outcomes of the module's own plaquettes of its type in the last
    /// round of its segment.
    pub records: Vec<usize>,
}

/// The repeating module-qubit stabiliser protocol on a hierarchical layout.
#[derive(Debug, Clone)]
pub struct Protocol {
    pub built: Built,
    pub readouts: Vec<ModuleReadout>,
}

/// Builds `params.l_rounds` super-rounds: X-module segment, Z-module
/// segment, Q-only segment, each `params.n` physical rounds. Markers named
/// `sr{k}:x`, `sr{k}:z`, `sr{k}:q` and `end` precede each segment.
pub fn module_stabiliser_protocol(
    layout: &NetworkLayout,
    params: &ProtocolParams,
    noise: NoiseModel,
) -> Result<Protocol> {
    if !layout.spec.is_hierarchical() {
        return Err(Error::Protocol(
            "simple-module layouts use the flat single-tier schedule".into(),
        ));
    }
    if params.n == 0 || params.l_rounds == 0 {
        return Err(Error::Config("n and l_rounds must be positive".into()));
    }
    let mut b = ScheduleBuilder::new(layout, noise);
    b.set_rounds_per_segment(params.n);
    let q_data = role_data(layout, ModuleRole::Q);
    b.init_data(&q_data, params.q_init, false);
    let mut readouts = Vec::new();
    let segments = [
        (ModuleRole::X, Phase::XModule, Basis::Z, CheckType::X, "x"),
        (ModuleRole::Z, Phase::ZModule, Basis::X, CheckType::Z, "z"),
    ];
    for k in 0..params.l_rounds {
        b.set_super_round(k);
        for &(role, phase, basis, check, tag) in &segments {
            b.circuit_mut().marker(format!("sr{k}:{tag}"));
            let data = role_data(layout, role);
            let active = role_mask(layout, &[ModuleRole::Q, role]);
            b.init_data(&data, basis, false);
            let mut last = 0;
            for _ in 0..params.n {
                last = b.round(&active, phase, false);
            }
            b.measure_data(&data, basis, false);
            let round = &b.rounds[last];
            for m in layout.modules().filter(|&m| layout.module_role(m) == role) {
                let records = round
                    .measurements
                    .iter()
                    .filter(|am| am.check == check && layout.qubits[am.ancilla].module == m)
                    .map(|am| am.record)
                    .collect();
                readouts.push(ModuleReadout {
                    module: m,
                    role,
                    super_round: k,
                    records,
                });
            }
        }
        b.circuit_mut().marker(format!("sr{k}:q"));
        let q_only = role_mask(layout, &[ModuleRole::Q]);
        for _ in 0..params.n {
            b.round(&q_only, Phase::QOnly, false);
        }
    }
    b.circuit_mut().marker("end");
    Ok(Protocol {
        built: b.finish(),
        readouts,
    })
}

impl Protocol {
    /// Module-qubit stabiliser outcome (+1 or -1) of `module` in super-round
    /// `super_round` from raw measurement outcomes (`true` = -1).
    pub fn module_stabiliser_outcome(&self, outcomes: &[bool], module: (usize, usize), super_round: usize) -> Result<i8> {
        if outcomes.len() < self.built.circuit.num_records {
            return Err(Error::IncompleteRecord(format!(
                "{} of {} records",
                outcomes.len(),
                self.built.circuit.num_records
            )));
        }
        let ro = self
            .readouts
            .iter()
            .find(|r| r.module == module && r.super_round == super_round)
            .ok_or_else(|| Error::Protocol(format!("no segment for module {module:?} in super-round {super_round}")))?;
        let parity = ro.records.iter().fold(false, |a, &r| a ^ outcomes[r]);
        Ok(if parity { -1 } else { 1 })
    }
}
