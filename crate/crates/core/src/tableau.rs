//! Aaronson–Gottesman stabilizer tableau.
//!
//! Used to check, independently of the frame simulator, that the noiseless
//! circuits produce deterministic detectors and the expected stabiliser
//! outcomes. Noise sites and record flips are ignored; feed-forward Paulis
//! are applied when the recorded outcome is 1.

use rand::Rng;

use crate::sim::{Basis, Circuit, Instr};

#[derive(Debug, Clone)]
pub struct Tableau {
    n: usize,
    words: usize,
    // rows 0..n destabilisers, n..2n stabilisers, 2n scratch
    x: Vec<u64>,
    z: Vec<u64>,
    r: Vec<bool>,
}

impl Tableau {
    /// `|0...0>` on `n` qubits.
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        let rows = 2 * n + 1;
        let mut t = Self {
            n,
            words,
            x: vec![0; rows * words],
            z: vec![0; rows * words],
            r: vec![false; rows],
        };
        for i in 0..n {
            t.set_x(i, i, true);
            t.set_z(n + i, i, true);
        }
        t
    }

    fn get_x(&self, row: usize, q: usize) -> bool {
        (self.x[row * self.words + (q >> 6)] >> (q & 63)) & 1 == 1
    }

    fn get_z(&self, row: usize, q: usize) -> bool {
        (self.z[row * self.words + (q >> 6)] >> (q & 63)) & 1 == 1
    }

    fn set_x(&mut self, row: usize, q: usize, v: bool) {
        let w = &mut self.x[row * self.words + (q >> 6)];
        if v {
            *w |= 1 << (q & 63);
        } else {
            *w &= !(1 << (q & 63));
        }
    }

    fn set_z(&mut self, row: usize, q: usize, v: bool) {
        let w = &mut self.z[row * self.words + (q >> 6)];
        if v {
            *w |= 1 << (q & 63);
        } else {
            *w &= !(1 << (q & 63));
        }
    }

    pub fn h(&mut self, a: usize) {
        for row in 0..2 * self.n {
            let (xa, za) = (self.get_x(row, a), self.get_z(row, a));
            self.r[row] ^= xa && za;
            self.set_x(row, a, za);
            self.set_z(row, a, xa);
        }
    }

    pub fn cnot(&mut self, a: usize, b: usize) {
        for row in 0..2 * self.n {
            let (xa, za) = (self.get_x(row, a), self.get_z(row, a));
            let (xb, zb) = (self.get_x(row, b), self.get_z(row, b));
            self.r[row] ^= xa && zb && (xb ^ za ^ true);
            self.set_x(row, b, xb ^ xa);
            self.set_z(row, a, za ^ zb);
        }
    }

    /// Applies Pauli X (`x`) and/or Z (`z`) to qubit `a`.
    pub fn pauli(&mut self, a: usize, x: bool, z: bool) {
        for row in 0..2 * self.n {
            let anti = (x && self.get_z(row, a)) ^ (z && self.get_x(row, a));
            self.r[row] ^= anti;
        }
    }

    /// Row `h` <- row `h` * row `i`.
    fn rowsum(&mut self, h: usize, i: usize) {
        // i-power of the product: +1 and -1 contributions per qubit
        let (mut plus, mut minus) = (0u32, 0u32);
        for w in 0..self.words {
            let (x1, z1) = (self.x[i * self.words + w], self.z[i * self.words + w]);
            let (x2, z2) = (self.x[h * self.words + w], self.z[h * self.words + w]);
            plus += ((x1 & z1 & z2 & !x2) | (x1 & !z1 & z2 & x2) | (!x1 & z1 & x2 & !z2)).count_ones();
            minus += ((x1 & z1 & x2 & !z2) | (x1 & !z1 & z2 & !x2) | (!x1 & z1 & x2 & z2)).count_ones();
            self.x[h * self.words + w] = x1 ^ x2;
            self.z[h * self.words + w] = z1 ^ z2;
        }
        let sum = 2 * self.r[h] as i64 + 2 * self.r[i] as i64 + plus as i64 - minus as i64;
        self.r[h] = sum.rem_euclid(4) == 2;
    }

    /// Z-basis measurement; returns `(outcome, was_random)`.
    pub fn measure_z<R: Rng + ?Sized>(&mut self, a: usize, rng: &mut R) -> (bool, bool) {
        let n = self.n;
        if let Some(p) = (n..2 * n).find(|&row| self.get_x(row, a)) {
            for row in 0..2 * n {
                if row != p && self.get_x(row, a) {
                    self.rowsum(row, p);
                }
            }
            // destabiliser <- old stabiliser
            for w in 0..self.words {
                self.x[(p - n) * self.words + w] = self.x[p * self.words + w];
                self.z[(p - n) * self.words + w] = self.z[p * self.words + w];
                self.x[p * self.words + w] = 0;
                self.z[p * self.words + w] = 0;
            }
            self.r[p - n] = self.r[p];
            self.set_z(p, a, true);
            let outcome = rng.gen::<bool>();
            self.r[p] = outcome;
            (outcome, true)
        } else {
            let s = 2 * n;
            for w in 0..self.words {
                self.x[s * self.words + w] = 0;
                self.z[s * self.words + w] = 0;
            }
            self.r[s] = false;
            for i in 0..n {
                if self.get_x(i, a) {
                    self.rowsum(s, i + n);
                }
            }
            (self.r[s], false)
        }
    }

    pub fn reset_z<R: Rng + ?Sized>(&mut self, a: usize, rng: &mut R) {
        let (m, _) = self.measure_z(a, rng);
        if m {
            self.pauli(a, true, false);
        }
    }
}

/// Noiseless execution of `circuit`: measurement outcomes per record.
pub fn run_noiseless<R: Rng + ?Sized>(circuit: &Circuit, rng: &mut R) -> Vec<bool> {
    let mut t = Tableau::new(circuit.num_qubits);
    let mut rec = vec![false; circuit.num_records];
    // peeks act on a copy taken at the start of each run of same-basis peeks
    let mut snap: Option<(Basis, Tableau)> = None;
    for instr in &circuit.instrs {
        if let Instr::Peek {
            qubit,
            basis,
            record,
        } = *instr
        {
            if snap.as_ref().is_none_or(|(b, _)| *b != basis) {
                snap = Some((basis, t.clone()));
            }
            let s = &mut snap.as_mut().expect("snapshot taken").1;
            if basis == Basis::X {
                s.h(qubit);
            }
            rec[record] = s.measure_z(qubit, rng).0;
            if basis == Basis::X {
                s.h(qubit);
            }
            continue;
        }
        if !matches!(instr, Instr::Noise(_) | Instr::Marker(_)) {
            snap = None;
        }
        match *instr {
            Instr::Init { qubit, basis } => {
                t.reset_z(qubit, rng);
                if basis == Basis::X {
                    t.h(qubit);
                }
            }
            Instr::H(q) => t.h(q),
            Instr::Cnot { control, target } => t.cnot(control, target),
            Instr::Measure {
                qubit,
                basis,
                record,
            } => {
                if basis == Basis::X {
                    t.h(qubit);
                }
                rec[record] = t.measure_z(qubit, rng).0;
                if basis == Basis::X {
                    t.h(qubit);
                }
            }
            Instr::FeedForward {
                record,
                qubit,
                pauli,
            } => {
                if rec[record] {
                    t.pauli(qubit, pauli.has_x(), pauli.has_z());
                }
            }
            Instr::Noise(_) | Instr::Marker(_) | Instr::Peek { .. } => {}
        }
    }
    rec
}

/// Indices of detectors whose parity was nonzero in any of `shots` noiseless
/// runs (empty when all detectors are deterministic and zero).
pub fn nondeterministic_detectors<R: Rng + ?Sized>(circuit: &Circuit, shots: usize, rng: &mut R) -> Vec<usize> {
    let mut bad = vec![false; circuit.detectors.len()];
    for _ in 0..shots {
        let rec = run_noiseless(circuit, rng);
        for (i, d) in circuit.detectors.iter().enumerate() {
            if d.records.iter().fold(false, |a, &r| a ^ rec[r]) {
                bad[i] = true;
            }
        }
    }
    bad.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect()
}

/// Indices of observables whose parity is not always zero in noiseless
/// runs.
pub fn nondeterministic_observables<R: Rng + ?Sized>(circuit: &Circuit, shots: usize, rng: &mut R) -> Vec<usize> {
    let mut bad = vec![false; circuit.observables.len()];
    for _ in 0..shots {
        let rec = run_noiseless(circuit, rng);
        for (i, o) in circuit.observables.iter().enumerate() {
            if o.records.iter().fold(false, |a, &r| a ^ rec[r]) {
                bad[i] = true;
            }
        }
    }
    bad.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect()
}
