//! Space-time blocks simulated by the experiments.
//!
//! Every block starts from a perfect reference state (noiseless preparation
//! round) and ends with a perfect readout, so logical observables compare
//! the state at the end with the one prepared. Observables are parities of
//! records, one per check type where meaningful.
//!
//! * [`flat_memory`]: single-tier memory over a whole layout.
//! * [`ancilla_cube`]: one X (Z) module measuring its module-qubit
//!   stabiliser; the observable flips on a module measurement error.
//! * [`q_cube`]: one Q module through a super-round; observables flip on
//!   module-qubit phase and bit errors.
//! * [`perimeter_surface`]: the stitched Z-module segment of a Q cube with
//!   perfect local operations.
//! * [`tier2_memory`]: the module array as a surface code with
//!   phenomenological noise.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::circuits::{Built, NoiseModel, Phase, Phenomenological, ScheduleBuilder};
use crate::error::{Error, Result};
use crate::pauli::{EntanglementChannel, IntraModuleNoise};
use crate::sim::{Basis, CheckType};
use crate::topology::{ClientRole, Direction, ModuleRole, ModuleSpec, NetworkLayout};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CubeSize {
    /// The module plus the facing half of each neighbour, one segment
    /// list.
    Individual,
    /// Ancilla cubes: full neighbouring modules and a Q-only segment on
    /// each side. Q cubes: the segment list three times.
    Triple,
}

fn data_of(layout: &NetworkLayout, qubits: impl IntoIterator<Item = usize>) -> Vec<usize> {
    qubits
        .into_iter()
        .filter(|&q| layout.qubits[q].role == ClientRole::Data)
        .collect()
}

/// Data qubits on the top row (`X_L` support) and left column (`Z_L`
/// support) of a rectangular data set.
fn logical_supports(layout: &NetworkLayout, data: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let r0 = data.iter().map(|&q| layout.qubits[q].global.0).min().unwrap_or(0);
    let c0 = data.iter().map(|&q| layout.qubits[q].global.1).min().unwrap_or(0);
    let top = data.iter().copied().filter(|&q| layout.qubits[q].global.0 == r0).collect();
    let left = data.iter().copied().filter(|&q| layout.qubits[q].global.1 == c0).collect();
    (top, left)
}

/// Records of `recs` (parallel to `qubits`) whose qubit is in `subset`.
fn pick(qubits: &[usize], recs: &[usize], subset: &[usize]) -> Vec<usize> {
    qubits
        .iter()
        .zip(recs)
        .filter(|(q, _)| subset.contains(q))
        .map(|(_, &r)| r)
        .collect()
}

/// Perfect readout of `data` with observables `X_L` on the top row and
/// `Z_L` on the left column.
fn close_with_logicals(b: &mut ScheduleBuilder, data: &[usize]) {
    let (top, left) = logical_supports(b.layout(), data);
    let (z, x) = b.close(data);
    let xo = pick(data, &x, &top);
    let zo = pick(data, &z, &left);
    b.circuit_mut().observable(xo, CheckType::X, "X_L");
    b.circuit_mut().observable(zo, CheckType::Z, "Z_L");
}

/// Memory experiment: perfect preparation, `rounds` noisy flat rounds over
/// the whole layout, perfect readout. Observables `X_L` and `Z_L`.
pub fn flat_memory(layout: &NetworkLayout, noise: NoiseModel, rounds: usize) -> Result<Built> {
    if rounds == 0 {
        return Err(Error::Config("rounds must be positive".into()));
    }
    let mut b = ScheduleBuilder::new(layout, noise);
    let data = data_of(layout, 0..layout.len());
    let all = vec![true; layout.len()];
    b.init_data(&data, Basis::Z, true);
    b.round(&all, Phase::Prepare, true);
    for _ in 0..rounds {
        b.round(&all, Phase::Flat, false);
    }
    close_with_logicals(&mut b, &data);
    Ok(b.finish())
}

/// Tier-2 lattice: `(2L-1)^2` module qubits over `rounds` super-rounds with
/// module-level error rates.
pub fn tier2_memory(distance: usize, rounds: usize, phen: Phenomenological) -> Result<Built> {
    if distance < 2 {
        return Err(Error::Config("distance must be at least 2".into()));
    }
    let side = 2 * distance - 1;
    let layout = NetworkLayout::region(ModuleSpec::simple(1, 0)?, (0, 0), side, side)?;
    let mut b = ScheduleBuilder::phenomenological(&layout, phen);
    let data = data_of(&layout, 0..layout.len());
    let all = vec![true; layout.len()];
    b.init_data(&data, Basis::Z, true);
    b.round(&all, Phase::Prepare, true);
    for _ in 0..rounds {
        b.round(&all, Phase::Flat, false);
    }
    close_with_logicals(&mut b, &data);
    Ok(b.finish())
}

/// Depth of the neighbour strips: about half of the neighbour, so the two
/// Q modules an ancilla module joins each own one half and deformed module
/// logicals multiply to the tier-2 logicals. The depth is even, which puts
/// a rough edge for the deformation at the cut.
fn strip_depth(d: usize) -> usize {
    d.div_ceil(2) / 2 * 2
}

/// Qubits of module `m` within `strip_depth` rows of the side facing
/// neighbour module `towards`.
fn facing_strip(layout: &NetworkLayout, m: (usize, usize), towards: (usize, usize)) -> Result<Vec<usize>> {
    let d = layout.spec.dim;
    let depth = strip_depth(d);
    let side = if towards.0 < m.0 {
        Direction::North
    } else if towards.0 > m.0 {
        Direction::South
    } else if towards.1 < m.1 {
        Direction::West
    } else {
        Direction::East
    };
    Ok(layout
        .module_qubits(m)?
        .into_iter()
        .filter(|&q| {
            let (i, j) = layout.qubits[q].local;
            match side {
                Direction::North => i < depth,
                Direction::South => i + depth >= d,
                Direction::West => j < depth,
                Direction::East => j + depth >= d,
            }
        })
        .collect())
}

fn neighbours(m: (usize, usize)) -> [(usize, usize); 4] {
    [(m.0 - 1, m.1), (m.0, m.1 - 1), (m.0, m.1 + 1), (m.0 + 1, m.1)]
}

fn mask(len: usize, qubits: &[usize]) -> Vec<bool> {
    let mut m = vec![false; len];
    for &q in qubits {
        m[q] = true;
    }
    m
}

fn check_hierarchical(spec: &ModuleSpec) -> Result<()> {
    if !spec.is_hierarchical() {
        return Err(Error::Protocol("cubes need hierarchical modules".into()));
    }
    Ok(())
}

/// An X (`role = X`) or Z module measuring its module-qubit stabiliser for
/// `n` rounds, followed by one perfect round. The observable (check type of
/// the module) is the module outcome of the last noisy round times that of
/// the perfect round. The perfect round's module checks carry no
/// detectors, so decoding the observable means deciding the module outcome
/// from the noisy rounds alone.
pub fn ancilla_cube(spec: &ModuleSpec, noise: NoiseModel, role: ModuleRole, size: CubeSize) -> Result<Built> {
    check_hierarchical(spec)?;
    let (m, origin, basis, check, phase) = match role {
        ModuleRole::X => ((1, 2), (0, 1), Basis::Z, CheckType::X, Phase::XModule),
        ModuleRole::Z => ((2, 1), (1, 0), Basis::X, CheckType::Z, Phase::ZModule),
        ModuleRole::Q => return Err(Error::Config("ancilla cube needs an X or Z module".into())),
    };
    let layout = NetworkLayout::region(*spec, origin, 3, 3)?;
    let n = spec.rounds_per_segment();
    let m_qubits = layout.module_qubits(m)?;
    let m_data = data_of(&layout, m_qubits.iter().copied());
    let mut strips = Vec::new();
    let mut q_all = Vec::new();
    for nb in neighbours(m) {
        strips.extend(facing_strip(&layout, nb, m)?);
        q_all.extend(layout.module_qubits(nb)?);
    }
    let q_data = data_of(&layout, q_all.iter().copied());

    let mut b = ScheduleBuilder::new(&layout, noise);
    b.set_rounds_per_segment(n);
    let q_mask = mask(layout.len(), &q_all);
    let seg_mask = match size {
        CubeSize::Individual => mask(layout.len(), &[m_qubits.clone(), strips].concat()),
        CubeSize::Triple => mask(layout.len(), &[m_qubits.clone(), q_all.clone()].concat()),
    };
    if size == CubeSize::Triple {
        b.init_data(&q_data, Basis::Z, true);
        b.round(&q_mask, Phase::Prepare, true);
        for _ in 0..n {
            b.round(&q_mask, Phase::QOnly, false);
        }
    }
    b.init_data(&m_data, basis, false);
    let mut last = 0;
    for _ in 0..n {
        last = b.round(&seg_mask, phase, false);
    }
    let perfect = b.round(&seg_mask, phase, true);
    b.measure_data(&m_data, basis, false);
    if size == CubeSize::Triple {
        for _ in 0..n {
            b.round(&q_mask, Phase::QOnly, false);
        }
        b.close(&q_data);
    }
    let mut built = b.finish();
    let module_records = |round: usize| -> Vec<usize> {
        built.schedule.rounds[round]
            .measurements
            .iter()
            .filter(|am| am.check == check && layout.qubits[am.ancilla].module == m)
            .map(|am| am.record)
            .collect()
    };
    // the perfect round is the reference; its module checks get no
    // detectors, so the decoder sees an open time boundary there
    let reference: HashSet<usize> = module_records(perfect).into_iter().collect();
    built.circuit.detectors.retain(|det| !det.records.iter().any(|r| reference.contains(r)));
    let mut recs = module_records(last);
    recs.extend(reference);
    built.circuit.observable(recs, check, "module_measurement");
    Ok(built)
}

/// A Q module through the listed segments (normally X, Z, Q-only). The
/// observables `X_M` (check X, phase errors) and `Z_M` (check Z, bit
/// errors) compare the module qubit before and after. Each is deformed by
/// readouts of neighbour-module data so that it commutes with the stitched
/// checks of every segment. [`CubeSize::Triple`] runs the segment list
/// three times.
pub fn q_cube(spec: &ModuleSpec, noise: NoiseModel, size: CubeSize, segments: &[Phase]) -> Result<Built> {
    q_cube_prepared(spec, noise, size, segments, Basis::Z)
}

/// [`q_cube`] with the module data prepared in `init`. Only the observable
/// of that basis has a deterministic value; both flip correctly under
/// errors.
pub fn q_cube_prepared(
    spec: &ModuleSpec,
    noise: NoiseModel,
    size: CubeSize,
    segments: &[Phase],
    init: Basis,
) -> Result<Built> {
    check_hierarchical(spec)?;
    let m = (2, 2);
    let layout = NetworkLayout::region(*spec, (1, 1), 3, 3)?;
    let n = spec.rounds_per_segment();
    let q_qubits = layout.module_qubits(m)?;
    let q_data = data_of(&layout, q_qubits.iter().copied());
    let mut b = ScheduleBuilder::new(&layout, noise);
    b.set_rounds_per_segment(n);
    b.init_data(&q_data, init, true);
    let q_mask = mask(layout.len(), &q_qubits);
    b.round(&q_mask, Phase::Prepare, true);
    let repeats = match size {
        CubeSize::Individual => 1,
        CubeSize::Triple => 3,
    };
    let mut readouts = Vec::new();
    for &phase in segments.iter().cycle().take(segments.len() * repeats) {
        let (role, basis) = match phase {
            Phase::XModule => (ModuleRole::X, Basis::Z),
            Phase::ZModule => (ModuleRole::Z, Basis::X),
            Phase::QOnly => {
                for _ in 0..n {
                    b.round(&q_mask, Phase::QOnly, false);
                }
                continue;
            }
            _ => return Err(Error::Config(format!("{phase:?} is not a segment"))),
        };
        let mut extra = Vec::new();
        for nb in neighbours(m).into_iter().filter(|&nb| layout.module_role(nb) == role) {
            extra.extend(facing_strip(&layout, nb, m)?);
        }
        let extra_data = data_of(&layout, extra.iter().copied());
        let seg_mask = mask(layout.len(), &[q_qubits.clone(), extra].concat());
        b.init_data(&extra_data, basis, false);
        for _ in 0..n {
            b.round(&seg_mask, phase, false);
        }
        let recs = b.measure_data(&extra_data, basis, false);
        readouts.extend(extra_data.iter().zip(recs).map(|(&q, r)| (q, basis, r)));
    }
    let (top, left) = logical_supports(&layout, &q_data);
    let (z, x) = b.close(&q_data);
    let mut built = b.finish();
    for (check, support, recs, name) in [
        (CheckType::X, &top, &x, "X_M"),
        (CheckType::Z, &left, &z, "Z_M"),
    ] {
        let mut records = pick(&q_data, recs, support);
        records.extend(deformation(&built, support, check, &readouts)?);
        built.circuit.observable(records, check, name);
    }
    Ok(built)
}

/// Readout records of neighbour-module data that make the logical operator
/// of `check` type on `support` commute with every check of the other type
/// measured in `built`. Candidates are `(qubit, basis, record)` readouts;
/// only those in the logical's basis qualify.
fn deformation(
    built: &Built,
    support: &[usize],
    check: CheckType,
    readouts: &[(usize, Basis, usize)],
) -> Result<Vec<usize>> {
    let (other, basis) = match check {
        CheckType::X => (CheckType::Z, Basis::X),
        CheckType::Z => (CheckType::X, Basis::Z),
    };
    let mut cands: Vec<usize> = Vec::new();
    let mut col: HashMap<usize, usize> = HashMap::new();
    for r in readouts.iter().filter(|r| r.1 == basis) {
        col.entry(r.0).or_insert_with(|| {
            cands.push(r.0);
            cands.len() - 1
        });
    }
    let words = cands.len().div_ceil(64) + 1;
    let rhs_bit = cands.len();
    let mut seen = HashSet::new();
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for am in built.schedule.rounds.iter().flat_map(|r| &r.measurements) {
        if am.check != other || !seen.insert(am.support.clone()) {
            continue;
        }
        let mut row = vec![0u64; words];
        for q in &am.support {
            if let Some(&c) = col.get(q) {
                row[c / 64] ^= 1 << (c % 64);
            }
            if support.contains(q) {
                row[rhs_bit / 64] ^= 1 << (rhs_bit % 64);
            }
        }
        if row.iter().any(|&w| w != 0) {
            rows.push(row);
        }
    }
    // Gaussian elimination over GF(2)
    let bit = |row: &[u64], c: usize| row[c / 64] >> (c % 64) & 1 == 1;
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for c in 0..cands.len() {
        let Some(p) = (r..rows.len()).find(|&i| bit(&rows[i], c)) else { continue };
        rows.swap(r, p);
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && bit(row, c) {
                for (w, pw) in row.iter_mut().zip(&pivot) {
                    *w ^= pw;
                }
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    if rows[r..].iter().any(|row| bit(row, rhs_bit)) {
        return Err(Error::Protocol(format!("no {check:?} logical commutes with the measured checks")));
    }
    let chosen: HashSet<usize> = pivots
        .into_iter()
        .filter(|&(r, _)| bit(&rows[r], rhs_bit))
        .map(|(_, c)| cands[c])
        .collect();
    // a qubit read out in several segments contributes every readout
    Ok(readouts
        .iter()
        .filter(|r| r.1 == basis && chosen.contains(&r.0))
        .map(|r| r.2)
        .collect())
}

/// The 2D perimeter problem of size `l`: a Q module of dimension `2l-1`
/// through one Z-module segment with perfect local operations, so only the
/// stitched columns see errors. Observable `X_M` flips on a phase error.
pub fn perimeter_surface(l: usize, link: EntanglementChannel) -> Result<Built> {
    let spec = ModuleSpec::hierarchical(2 * l - 1, 0)?;
    let noise = NoiseModel::new(IntraModuleNoise::noiseless(), link);
    q_cube(&spec, noise, CubeSize::Individual, &[Phase::ZModule])
}

/// The full super-round segment list.
pub const SUPER_ROUND: [Phase; 3] = [Phase::XModule, Phase::ZModule, Phase::QOnly];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::role_data;

    #[test]
    fn q_data_count() {
        let layout = NetworkLayout::region(ModuleSpec::hierarchical(5, 0).unwrap(), (1, 1), 3, 3).unwrap();
        assert_eq!(role_data(&layout, ModuleRole::Q).len(), 13 * 5);
    }
}
