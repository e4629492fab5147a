//! Module network geometry.
//!
//! All client qubits of the network form one square lattice. A qubit at
//! global lattice position `(r, c)` is a data qubit when `r + c` is even, an
//! X ancilla when `r` is odd and `c` even, and a Z ancilla when `r` is even
//! and `c` odd. Modules follow the same pattern one level up: module
//! `(mr, mc)` is a Q module when `mr + mc` is even, an X module when `mr` is
//! odd and a Z module otherwise. With odd `D` every Q module owns a complete
//! `D x D` patch with data qubits on its corners, whose boundaries facing X
//! modules carry Z ancillas.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModuleRole {
    Q,
    X,
    Z,
}

impl ModuleRole {
    /// Role of the module at absolute module-grid coordinates.
    pub fn at(mr: usize, mc: usize) -> ModuleRole {
        if (mr + mc).is_multiple_of(2) {
            ModuleRole::Q
        } else if mr % 2 == 1 {
            ModuleRole::X
        } else {
            ModuleRole::Z
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClientRole {
    Data,
    AncillaX,
    AncillaZ,
}

impl ClientRole {
    /// Role of the client qubit at absolute lattice coordinates.
    pub fn at(r: usize, c: usize) -> ClientRole {
        if (r + c).is_multiple_of(2) {
            ClientRole::Data
        } else if r % 2 == 1 {
            ClientRole::AncillaX
        } else {
            ClientRole::AncillaZ
        }
    }

    pub fn is_ancilla(self) -> bool {
        self != ClientRole::Data
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    North,
    West,
    East,
    South,
}

impl Direction {
    /// The fixed CNOT order used by every plaquette.
    pub const ORDER: [Direction; 4] = [
        Direction::North,
        Direction::West,
        Direction::East,
        Direction::South,
    ];

    pub fn offset(self) -> (isize, isize) {
        match self {
            Direction::North => (-1, 0),
            Direction::West => (0, -1),
            Direction::East => (0, 1),
            Direction::South => (1, 0),
        }
    }

    pub fn opposite(self) -> Direction {
        match self {
            Direction::North => Direction::South,
            Direction::South => Direction::North,
            Direction::West => Direction::East,
            Direction::East => Direction::West,
        }
    }
}

/// Position of a client qubit relative to its module's boundary.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Perimeter {
    Interior,
    Edge(Direction),
    Corner(Vec<Direction>),
}

impl Perimeter {
    pub fn is_perimeter(&self) -> bool {
        !matches!(self, Perimeter::Interior)
    }

    pub fn facing(&self) -> Vec<Direction> {
        match self {
            Perimeter::Interior => vec![],
            Perimeter::Edge(d) => vec![*d],
            Perimeter::Corner(ds) => ds.clone(),
        }
    }
}

/// How many broker units a module carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Brokers {
    /// `4 D` brokers on the perimeter of a hierarchical module.
    Perimeter,
    /// A simple module whose one broker is rerouted by an optical switch.
    Single,
    /// A simple module with one broker per side.
    Four,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleSpec {
    pub dim: usize,
    pub purification_tiers: usize,
    pub brokers: Brokers,
}

impl ModuleSpec {
    /// A module holding a `dim x dim` surface-code patch.
    pub fn hierarchical(dim: usize, purification_tiers: usize) -> Result<Self> {
        let spec = Self {
            dim,
            purification_tiers,
            brokers: Brokers::Perimeter,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// A single-client module with one or four brokers.
    pub fn simple(brokers: usize, purification_tiers: usize) -> Result<Self> {
        let brokers = match brokers {
            1 => Brokers::Single,
            4 => Brokers::Four,
            b => {
                return Err(Error::Config(format!(
                    "simple modules carry 1 or 4 brokers, not {b}"
                )))
            }
        };
        Ok(Self {
            dim: 1,
            purification_tiers,
            brokers,
        })
    }

    pub fn validate(&self) -> Result<()> {
        match self.brokers {
            Brokers::Perimeter => {
                if self.dim.is_multiple_of(2) || self.dim < 5 {
                    return Err(Error::Config(format!(
                        "hierarchical modules need odd D >= 5, got D = {}",
                        self.dim
                    )));
                }
            }
            Brokers::Single | Brokers::Four => {
                if self.dim != 1 {
                    return Err(Error::Config(format!(
                        "simple modules have D = 1, got D = {}",
                        self.dim
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_hierarchical(&self) -> bool {
        self.brokers == Brokers::Perimeter
    }

    pub fn broker_count(&self) -> usize {
        match self.brokers {
            Brokers::Perimeter => 4 * self.dim,
            Brokers::Single => 1,
            Brokers::Four => 4,
        }
    }

    /// Total qubits per module: client array plus `n_D + 1` qubits per broker.
    pub fn size(&self) -> usize {
        self.dim * self.dim + self.broker_count() * (self.purification_tiers + 1)
    }

    /// Physical stabiliser rounds per segment, `(D + 1) / 2`.
    pub fn rounds_per_segment(&self) -> usize {
        self.dim.div_ceil(2)
    }
}

/// Code distance of the module-level surface code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Distance(usize);

impl Distance {
    pub fn new(l: usize) -> Result<Self> {
        if l < 3 || l.is_multiple_of(2) {
            return Err(Error::Config(format!("distance must be odd and >= 3, got {l}")));
        }
        Ok(Self(l))
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// Side of the module array, `2L - 1`.
    pub fn array_side(self) -> usize {
        2 * self.0 - 1
    }
}

/// One client qubit of the network.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClientQubit {
    pub id: usize,
    /// Absolute module coordinates.
    pub module: (usize, usize),
    /// Position inside the module's client array.
    pub local: (usize, usize),
    /// Absolute lattice coordinates.
    pub global: (usize, usize),
    pub role: ClientRole,
    pub perimeter: Perimeter,
}

/// Broker unit serving one side of a distributed edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BrokerId {
    pub module: (usize, usize),
    pub unit: usize,
}

/// A lattice edge whose endpoints lie in different modules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistributedEdge {
    pub a: usize,
    pub b: usize,
    pub brokers: (BrokerId, BrokerId),
}

/// A rectangular block of modules and every client qubit inside it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NetworkLayout {
    pub spec: ModuleSpec,
    /// Absolute coordinates of the top-left module.
    pub origin: (usize, usize),
    pub rows: usize,
    pub cols: usize,
    pub qubits: Vec<ClientQubit>,
    #[serde(skip)]
    index: HashMap<(usize, usize), usize>,
}

/// The full `(2L-1) x (2L-1)` module array encoding one logical qubit.
pub fn build_layout(spec: ModuleSpec, distance: Distance) -> Result<NetworkLayout> {
    let side = distance.array_side();
    NetworkLayout::region(spec, (0, 0), side, side)
}

impl NetworkLayout {
    /// A block of `rows x cols` modules whose top-left module sits at
    /// absolute coordinates `origin`. Roles follow absolute coordinates.
    pub fn region(
        spec: ModuleSpec,
        origin: (usize, usize),
        rows: usize,
        cols: usize,
    ) -> Result<Self> {
        spec.validate()?;
        if rows == 0 || cols == 0 {
            return Err(Error::Config("empty module grid".into()));
        }
        let d = spec.dim;
        let mut qubits = Vec::with_capacity(rows * cols * d * d);
        let mut index = HashMap::new();
        for mr in origin.0..origin.0 + rows {
            for mc in origin.1..origin.1 + cols {
                for i in 0..d {
                    for j in 0..d {
                        let global = (mr * d + i, mc * d + j);
                        let id = qubits.len();
                        index.insert(global, id);
                        qubits.push(ClientQubit {
                            id,
                            module: (mr, mc),
                            local: (i, j),
                            global,
                            role: ClientRole::at(global.0, global.1),
                            perimeter: classify(d, i, j),
                        });
                    }
                }
            }
        }
        Ok(Self {
            spec,
            origin,
            rows,
            cols,
            qubits,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.qubits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.qubits.is_empty()
    }

    pub fn modules(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let (r0, c0) = self.origin;
        (r0..r0 + self.rows).flat_map(move |r| (c0..c0 + self.cols).map(move |c| (r, c)))
    }

    pub fn contains_module(&self, m: (usize, usize)) -> bool {
        m.0 >= self.origin.0
            && m.0 < self.origin.0 + self.rows
            && m.1 >= self.origin.1
            && m.1 < self.origin.1 + self.cols
    }

    pub fn module_role(&self, m: (usize, usize)) -> ModuleRole {
        ModuleRole::at(m.0, m.1)
    }

    pub fn qubit_at(&self, global: (usize, usize)) -> Option<usize> {
        self.index.get(&global).copied()
    }

    /// Neighbour of qubit `q` in direction `dir`, if present in the layout.
    pub fn neighbour(&self, q: usize, dir: Direction) -> Option<usize> {
        let (r, c) = self.qubits[q].global;
        let (dr, dc) = dir.offset();
        let nr = r.checked_add_signed(dr)?;
        let nc = c.checked_add_signed(dc)?;
        self.qubit_at((nr, nc))
    }

    pub fn module_qubits(&self, m: (usize, usize)) -> Result<Vec<usize>> {
        if !self.contains_module(m) {
            return Err(Error::Config(format!("module {m:?} not in layout")));
        }
        let d = self.spec.dim;
        let (r0, c0) = self.origin;
        let block = ((m.0 - r0) * self.cols + (m.1 - c0)) * d * d;
        Ok((block..block + d * d).collect())
    }

    pub fn module_count(&self, role: ModuleRole) -> usize {
        self.modules().filter(|&m| self.module_role(m) == role).count()
    }

    /// Perimeter annotation of every client qubit of module `m`.
    pub fn perimeter_classification(&self, m: (usize, usize)) -> Result<Vec<(usize, Perimeter)>> {
        Ok(self
            .module_qubits(m)?
            .into_iter()
            .map(|q| (q, self.qubits[q].perimeter.clone()))
            .collect())
    }

    fn broker_for(&self, q: usize, dir: Direction) -> BrokerId {
        let cq = &self.qubits[q];
        let unit = match self.spec.brokers {
            Brokers::Single => 0,
            Brokers::Four => side_index(dir),
            Brokers::Perimeter => {
                let slot = match dir {
                    Direction::North | Direction::South => cq.local.1,
                    Direction::West | Direction::East => cq.local.0,
                };
                side_index(dir) * self.spec.dim + slot
            }
        };
        BrokerId {
            module: cq.module,
            unit,
        }
    }

    /// All nearest-neighbour lattice edges with endpoints in different
    /// modules, each with the broker pair that serves it. Ordered by the
    /// first endpoint, east edge before south edge.
    pub fn distributed_edges(&self) -> Vec<DistributedEdge> {
        let mut out = Vec::new();
        for q in 0..self.qubits.len() {
            for dir in [Direction::East, Direction::South] {
                if let Some(n) = self.neighbour(q, dir) {
                    if self.qubits[n].module != self.qubits[q].module {
                        out.push(DistributedEdge {
                            a: q,
                            b: n,
                            brokers: (self.broker_for(q, dir), self.broker_for(n, dir.opposite())),
                        });
                    }
                }
            }
        }
        out
    }

    /// Every nearest-neighbour lattice edge `(a, b)` with `a < b`.
    pub fn lattice_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for q in 0..self.qubits.len() {
            for dir in [Direction::East, Direction::South] {
                if let Some(n) = self.neighbour(q, dir) {
                    out.push((q.min(n), q.max(n)));
                }
            }
        }
        out
    }

    pub fn is_distributed(&self, a: usize, b: usize) -> bool {
        self.qubits[a].module != self.qubits[b].module
    }

    /// Stable JSON description of the layout.
    pub fn dump_json(&self) -> serde_json::Value {
        let qubits: Vec<_> = self
            .qubits
            .iter()
            .map(|q| {
                serde_json::json!({
                    "id": q.id,
                    "module": [q.module.0, q.module.1],
                    "module_role": format!("{:?}", self.module_role(q.module)),
                    "local": [q.local.0, q.local.1],
                    "global": [q.global.0, q.global.1],
                    "role": format!("{:?}", q.role),
                    "perimeter": perimeter_label(&q.perimeter),
                })
            })
            .collect();
        let edges: Vec<_> = self
            .lattice_edges()
            .into_iter()
            .map(|(a, b)| serde_json::json!([a, b, self.is_distributed(a, b)]))
            .collect();
        serde_json::json!({
            "schema": "hiersurf.layout.v1",
            "dim": self.spec.dim,
            "purification_tiers": self.spec.purification_tiers,
            "module_size": self.spec.size(),
            "origin": [self.origin.0, self.origin.1],
            "rows": self.rows,
            "cols": self.cols,
            "qubits": qubits,
            "edges": edges,
        })
    }

    /// Rebuilds the coordinate index after deserialization.
    pub fn reindex(&mut self) {
        self.index = self.qubits.iter().map(|q| (q.global, q.id)).collect();
    }
}

fn side_index(dir: Direction) -> usize {
    match dir {
        Direction::North => 0,
        Direction::East => 1,
        Direction::South => 2,
        Direction::West => 3,
    }
}

fn perimeter_label(p: &Perimeter) -> String {
    match p {
        Perimeter::Interior => "interior".into(),
        Perimeter::Edge(d) => format!("edge:{d:?}"),
        Perimeter::Corner(ds) => {
            let names: Vec<_> = ds.iter().map(|d| format!("{d:?}")).collect();
            format!("corner:{}", names.join("+"))
        }
    }
}

fn classify(d: usize, i: usize, j: usize) -> Perimeter {
    let mut facing = Vec::new();
    if i == 0 {
        facing.push(Direction::North);
    }
    if j == 0 {
        facing.push(Direction::West);
    }
    if j + 1 == d {
        facing.push(Direction::East);
    }
    if i + 1 == d {
        facing.push(Direction::South);
    }
    match facing.len() {
        0 => Perimeter::Interior,
        1 => Perimeter::Edge(facing[0]),
        _ => Perimeter::Corner(facing),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn module_sizes() {
        assert_eq!(ModuleSpec::hierarchical(5, 1).unwrap().size(), 65);
        assert_eq!(ModuleSpec::simple(1, 6).unwrap().size(), 8);
        assert_eq!(ModuleSpec::simple(4, 6).unwrap().size(), 29);
        assert_eq!(ModuleSpec::simple(4, 0).unwrap().size(), 5);
    }

    #[test]
    fn invalid_dimensions() {
        assert!(ModuleSpec::hierarchical(3, 0).is_err());
        assert!(ModuleSpec::hierarchical(6, 0).is_err());
        assert!(ModuleSpec::hierarchical(1, 0).is_err());
        assert!(ModuleSpec::simple(2, 0).is_err());
        assert!(Distance::new(4).is_err());
        assert!(Distance::new(1).is_err());
    }

    #[test]
    fn checkerboard_counts() {
        let spec = ModuleSpec::hierarchical(5, 1).unwrap();
        let layout = build_layout(spec, Distance::new(3).unwrap()).unwrap();
        assert_eq!(layout.rows * layout.cols, 25);
        assert_eq!(layout.module_count(ModuleRole::Q), 13);
        assert_eq!(
            layout.module_count(ModuleRole::X) + layout.module_count(ModuleRole::Z),
            12
        );
        assert_eq!(layout.len(), 25 * 25);
    }

    #[test]
    fn q_module_is_complete_patch() {
        let spec = ModuleSpec::hierarchical(5, 0).unwrap();
        let layout = NetworkLayout::region(spec, (0, 0), 1, 1).unwrap();
        let data = layout
            .qubits
            .iter()
            .filter(|q| q.role == ClientRole::Data)
            .count();
        assert_eq!(data, 13);
        // corners are data qubits
        for &(i, j) in &[(0, 0), (0, 4), (4, 0), (4, 4)] {
            assert_eq!(layout.qubits[i * 5 + j].role, ClientRole::Data);
        }
        // north boundary carries Z ancillas, west boundary X ancillas
        assert_eq!(layout.qubits[1].role, ClientRole::AncillaZ);
        assert_eq!(layout.qubits[5].role, ClientRole::AncillaX);
    }

    #[test]
    fn perimeter_of_d5_module() {
        let spec = ModuleSpec::hierarchical(5, 0).unwrap();
        let layout = NetworkLayout::region(spec, (0, 0), 1, 1).unwrap();
        let cls = layout.perimeter_classification((0, 0)).unwrap();
        let perim = cls.iter().filter(|(_, p)| p.is_perimeter()).count();
        let corners = cls
            .iter()
            .filter(|(_, p)| matches!(p, Perimeter::Corner(_)))
            .count();
        assert_eq!(perim, 16);
        assert_eq!(corners, 4);
        assert_eq!(cls[12].1, Perimeter::Interior);
        assert_eq!(cls[2].1, Perimeter::Edge(Direction::North));
    }

    #[test]
    fn simple_module_client_is_corner_facing_everywhere() {
        let spec = ModuleSpec::simple(1, 0).unwrap();
        let layout = NetworkLayout::region(spec, (0, 0), 1, 1).unwrap();
        match &layout.qubits[0].perimeter {
            Perimeter::Corner(ds) => assert_eq!(ds.len(), 4),
            p => panic!("expected corner, got {p:?}"),
        }
    }

    #[test]
    fn distributed_edge_counts() {
        let spec = ModuleSpec::hierarchical(5, 0).unwrap();
        let pair = NetworkLayout::region(spec, (0, 0), 1, 2).unwrap();
        assert_eq!(pair.distributed_edges().len(), 5);
        let single = NetworkLayout::region(spec, (0, 0), 1, 1).unwrap();
        assert!(single.distributed_edges().is_empty());
        let simple = ModuleSpec::simple(1, 0).unwrap();
        let grid = NetworkLayout::region(simple, (0, 0), 3, 3).unwrap();
        assert_eq!(grid.distributed_edges().len(), 12);
    }

    #[test]
    fn brokers_serve_facing_sides() {
        let spec = ModuleSpec::hierarchical(5, 0).unwrap();
        let pair = NetworkLayout::region(spec, (0, 0), 1, 2).unwrap();
        for e in pair.distributed_edges() {
            assert_eq!(e.brokers.0.module, (0, 0));
            assert_eq!(e.brokers.1.module, (0, 1));
            // east side of the left module, west side of the right module
            assert_eq!(e.brokers.0.unit / 5, 1);
            assert_eq!(e.brokers.1.unit / 5, 3);
        }
    }
}
