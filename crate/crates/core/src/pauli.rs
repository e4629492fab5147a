//! Pauli algebra, Pauli frames and the stochastic channels driving every
//! simulation layer.
//!
//! Phases are dropped everywhere. A Pauli is a pair of bits `(x, z)` and a
//! frame is the per-qubit record of which error currently sits on top of the
//! ideal (noiseless) evolution of a Clifford circuit.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Single-qubit Pauli operator modulo phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn from_bits(x: bool, z: bool) -> Pauli {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    /// Index in `I, X, Y, Z` order.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Pauli {
        Pauli::ALL[i & 3]
    }

    pub fn has_x(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }

    pub fn has_z(self) -> bool {
        matches!(self, Pauli::Z | Pauli::Y)
    }

    pub fn is_identity(self) -> bool {
        self == Pauli::I
    }

    /// Product modulo phase (`X·Z = Y`).
    pub fn mul(self, other: Pauli) -> Pauli {
        Pauli::from_bits(self.has_x() ^ other.has_x(), self.has_z() ^ other.has_z())
    }

    /// Whether the two operators anticommute.
    pub fn anticommutes(self, other: Pauli) -> bool {
        (self.has_x() && other.has_z()) ^ (self.has_z() && other.has_x())
    }
}

impl std::fmt::Display for Pauli {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let c = match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        };
        write!(f, "{c}")
    }
}

/// Clifford gates understood by [`PauliFrame::propagate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Clifford {
    H(usize),
    Cnot { control: usize, target: usize },
}

/// Per-qubit X/Z error bits, packed 64 qubits per word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliFrame {
    len: usize,
    xbits: Vec<u64>,
    zbits: Vec<u64>,
}

impl PauliFrame {
    pub fn new(len: usize) -> Self {
        let words = len.div_ceil(64);
        Self {
            len,
            xbits: vec![0; words],
            zbits: vec![0; words],
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    fn check(&self, q: usize) -> Result<()> {
        if q >= self.len {
            Err(Error::QubitIndex {
                qubit: q,
                len: self.len,
            })
        } else {
            Ok(())
        }
    }

    fn bit(words: &[u64], q: usize) -> bool {
        (words[q >> 6] >> (q & 63)) & 1 == 1
    }

    fn flip(words: &mut [u64], q: usize) {
        words[q >> 6] ^= 1 << (q & 63);
    }

    pub fn x(&self, q: usize) -> bool {
        Self::bit(&self.xbits, q)
    }

    pub fn z(&self, q: usize) -> bool {
        Self::bit(&self.zbits, q)
    }

    pub fn get(&self, q: usize) -> Result<Pauli> {
        self.check(q)?;
        Ok(Pauli::from_bits(self.x(q), self.z(q)))
    }

    /// Multiplies `p` onto qubit `q`.
    pub fn apply(&mut self, q: usize, p: Pauli) -> Result<()> {
        self.check(q)?;
        if p.has_x() {
            Self::flip(&mut self.xbits, q);
        }
        if p.has_z() {
            Self::flip(&mut self.zbits, q);
        }
        Ok(())
    }

    /// Conjugates the frame by a Clifford gate.
    pub fn propagate(&mut self, gate: Clifford) -> Result<()> {
        match gate {
            Clifford::H(q) => {
                self.check(q)?;
                let (x, z) = (self.x(q), self.z(q));
                if x != z {
                    Self::flip(&mut self.xbits, q);
                    Self::flip(&mut self.zbits, q);
                }
            }
            Clifford::Cnot { control, target } => {
                self.check(control)?;
                self.check(target)?;
                if control == target {
                    return Err(Error::Config(format!(
                        "CNOT control and target are both {control}"
                    )));
                }
                if self.x(control) {
                    Self::flip(&mut self.xbits, target);
                }
                if self.z(target) {
                    Self::flip(&mut self.zbits, control);
                }
            }
        }
        Ok(())
    }

    /// Qubits carrying a non-identity Pauli.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len)
            .filter(|&q| self.x(q) || self.z(q))
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.xbits.iter().all(|&w| w == 0) && self.zbits.iter().all(|&w| w == 0)
    }

    pub fn clear(&mut self) {
        self.xbits.fill(0);
        self.zbits.fill(0);
    }
}

/// Functional form of [`PauliFrame::propagate`].
pub fn propagate_through_clifford(mut frame: PauliFrame, gate: Clifford) -> Result<PauliFrame> {
    frame.propagate(gate)?;
    Ok(frame)
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(Error::Config(format!("{name} = {p} is not a probability")));
    }
    Ok(())
}

/// Pauli channel acting on one half of an entangled pair:
/// `F[I] + p_x[X] + p_y[Y] + p_z[Z]` with `F = 1 - p_x - p_y - p_z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntanglementChannel {
    pub p_x: f64,
    pub p_y: f64,
    pub p_z: f64,
}

impl EntanglementChannel {
    pub fn new(p_x: f64, p_y: f64, p_z: f64) -> Result<Self> {
        check_probability("p_x", p_x)?;
        check_probability("p_y", p_y)?;
        check_probability("p_z", p_z)?;
        if p_x + p_y + p_z > 1.0 + 1e-12 {
            return Err(Error::Config(format!(
                "p_x + p_y + p_z = {} exceeds 1",
                p_x + p_y + p_z
            )));
        }
        Ok(Self { p_x, p_y, p_z })
    }

    pub fn perfect() -> Self {
        Self {
            p_x: 0.0,
            p_y: 0.0,
            p_z: 0.0,
        }
    }

    /// Unpolarised channel `p_x = p_y = p_z = infidelity / 3`.
    pub fn unpolarised(infidelity: f64) -> Result<Self> {
        let p = infidelity / 3.0;
        Self::new(p, p, p)
    }

    /// Unpolarised channel with the given fidelity.
    pub fn from_fidelity(fidelity: f64) -> Result<Self> {
        Self::unpolarised(1.0 - fidelity)
    }

    pub fn fidelity(&self) -> f64 {
        1.0 - self.p_x - self.p_y - self.p_z
    }

    pub fn infidelity(&self) -> f64 {
        self.p_x + self.p_y + self.p_z
    }

    /// Probabilities in `I, X, Y, Z` order.
    pub fn probabilities(&self) -> [f64; 4] {
        [self.fidelity(), self.p_x, self.p_y, self.p_z]
    }

    pub fn from_probabilities(p: [f64; 4]) -> Result<Self> {
        Self::new(p[1], p[2], p[3])
    }

    /// Rate of errors with an X component (`p_x + p_y`).
    pub fn bit_error_rate(&self) -> f64 {
        self.p_x + self.p_y
    }

    /// Rate of errors with a Z component (`p_z + p_y`).
    pub fn phase_error_rate(&self) -> f64 {
        self.p_z + self.p_y
    }

    /// The same channel conjugated by a Hadamard (X and Z exchanged).
    pub fn swapped(&self) -> Self {
        Self {
            p_x: self.p_z,
            p_y: self.p_y,
            p_z: self.p_x,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Pauli {
        sample_entanglement_error(self, rng)
    }
}

/// Draws the Pauli applied to the designated half of a pair.
pub fn sample_entanglement_error<R: Rng + ?Sized>(ch: &EntanglementChannel, rng: &mut R) -> Pauli {
    let u: f64 = rng.gen();
    if u < ch.p_x {
        Pauli::X
    } else if u < ch.p_x + ch.p_y {
        Pauli::Y
    } else if u < ch.p_x + ch.p_y + ch.p_z {
        Pauli::Z
    } else {
        Pauli::I
    }
}

/// Error rates of operations inside a module.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntraModuleNoise {
    pub eps_init: f64,
    pub eps_meas: f64,
    pub eps_1q: f64,
    pub eps_2q: f64,
}

impl IntraModuleNoise {
    pub fn new(eps_init: f64, eps_meas: f64, eps_1q: f64, eps_2q: f64) -> Result<Self> {
        check_probability("eps_init", eps_init)?;
        check_probability("eps_meas", eps_meas)?;
        check_probability("eps_1q", eps_1q)?;
        check_probability("eps_2q", eps_2q)?;
        Ok(Self {
            eps_init,
            eps_meas,
            eps_1q,
            eps_2q,
        })
    }

    /// All four rates equal to `eps`.
    pub fn uniform(eps: f64) -> Result<Self> {
        Self::new(eps, eps, eps, eps)
    }

    pub fn noiseless() -> Self {
        Self {
            eps_init: 0.0,
            eps_meas: 0.0,
            eps_1q: 0.0,
            eps_2q: 0.0,
        }
    }

    pub fn is_noiseless(&self) -> bool {
        self.eps_init == 0.0 && self.eps_meas == 0.0 && self.eps_1q == 0.0 && self.eps_2q == 0.0
    }
}

/// Number of qubits a depolarizing channel acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arity {
    One,
    Two,
}

/// Depolarizing noise: with probability `rate` a uniformly random
/// non-identity element of the 1-qubit (3 choices) or 2-qubit (15 choices)
/// Pauli group. For arity one the second Pauli is always `I`.
pub fn sample_depolarizing<R: Rng + ?Sized>(arity: Arity, rate: f64, rng: &mut R) -> (Pauli, Pauli) {
    if rate <= 0.0 || rng.gen::<f64>() >= rate {
        return (Pauli::I, Pauli::I);
    }
    match arity {
        Arity::One => (Pauli::from_index(rng.gen_range(1..4)), Pauli::I),
        Arity::Two => {
            let k = rng.gen_range(1..16);
            (Pauli::from_index(k >> 2), Pauli::from_index(k & 3))
        }
    }
}
