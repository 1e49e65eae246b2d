//! Device connectivity and basis-gate descriptions, plus circuit validation
//! against them.

use std::fmt;

use crate::circuit::Circuit;
use crate::gates::GateKind;

/// Undirected connectivity graph over `num_qubits` device qubits.
///
/// Two-qubit gates are legal on an edge in either direction; direction
/// fixing, where a backend cares, is a transpiler concern and costs only
/// single-qubit gates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CouplingMap {
    num_qubits: usize,
    edges: Vec<(usize, usize)>,
}

impl CouplingMap {
    /// Build from an edge list; edges are stored with the smaller endpoint
    /// first and deduplicated.
    pub fn new(num_qubits: usize, edges: &[(usize, usize)]) -> Self {
        let mut normalized: Vec<(usize, usize)> = edges
            .iter()
            .map(|&(a, b)| if a <= b { (a, b) } else { (b, a) })
            .collect();
        normalized.sort_unstable();
        normalized.dedup();
        for &(a, b) in &normalized {
            assert!(a != b, "self-loop edge ({a},{b})");
            assert!(b < num_qubits, "edge ({a},{b}) out of range");
        }
        CouplingMap {
            num_qubits,
            edges: normalized,
        }
    }

    /// Fully connected 3-qubit device (all three pairs coupled).
    pub fn triangle3() -> Self {
        CouplingMap::new(3, &[(0, 1), (0, 2), (1, 2)])
    }

    /// Linear 3-qubit device: 0 - 1 - 2.
    pub fn line3() -> Self {
        CouplingMap::new(3, &[(0, 1), (1, 2)])
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn connected(&self, a: usize, b: usize) -> bool {
        let key = if a <= b { (a, b) } else { (b, a) };
        self.edges.binary_search(&key).is_ok()
    }

    /// Qubits adjacent to `q`.
    pub fn neighbors(&self, q: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for &(a, b) in &self.edges {
            if a == q {
                out.push(b);
            } else if b == q {
                out.push(a);
            }
        }
        out.sort_unstable();
        out
    }

    /// Length of the shortest edge path between two qubits, if connected.
    pub fn distance(&self, from: usize, to: usize) -> Option<usize> {
        if from == to {
            return Some(0);
        }
        let mut dist = vec![usize::MAX; self.num_qubits];
        dist[from] = 0;
        let mut frontier = vec![from];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &q in &frontier {
                for n in self.neighbors(q) {
                    if dist[n] == usize::MAX {
                        dist[n] = dist[q] + 1;
                        if n == to {
                            return Some(dist[n]);
                        }
                        next.push(n);
                    }
                }
            }
            frontier = next;
        }
        None
    }
}

/// The set of gate names a backend accepts natively.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisGateSet {
    names: Vec<&'static str>,
}

impl BasisGateSet {
    pub fn new(names: &[&'static str]) -> Self {
        let mut names = names.to_vec();
        names.sort_unstable();
        names.dedup();
        BasisGateSet { names }
    }

    /// The hardware basis used throughout: `rz`, `sx`, `cx`, plus
    /// measurement, reset, and barriers.
    pub fn default_hardware() -> Self {
        BasisGateSet::new(&["rz", "sx", "cx", "measure", "reset", "barrier"])
    }

    pub fn contains(&self, kind: &GateKind) -> bool {
        self.names.binary_search(&kind.name()).is_ok()
    }

    pub fn names(&self) -> &[&'static str] {
        &self.names
    }
}

/// One rule violation found by [`validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Instruction uses a gate outside the basis set.
    NotInBasis { index: usize, name: &'static str },
    /// Two-qubit instruction on a pair that is not an edge.
    NotCoupled { index: usize, a: usize, b: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotInBasis { index, name } => {
                write!(f, "instruction {index}: `{name}` not in basis")
            }
            Violation::NotCoupled { index, a, b } => {
                write!(f, "instruction {index}: qubits ({a},{b}) not coupled")
            }
        }
    }
}

/// Check every instruction against the basis set and coupling map.
///
/// Returns all violations in instruction order; an empty vector means the
/// circuit is executable as-is.
pub fn validate(circuit: &Circuit, coupling: &CouplingMap, basis: &BasisGateSet) -> Vec<Violation> {
    let mut out = Vec::new();
    for (index, ins) in circuit.instructions().iter().enumerate() {
        if !basis.contains(&ins.kind) {
            out.push(Violation::NotInBasis {
                index,
                name: ins.kind.name(),
            });
        }
        if ins.qubits.len() == 2 && !matches!(ins.kind, GateKind::Barrier) {
            let (a, b) = (ins.qubits[0], ins.qubits[1]);
            if !coupling.connected(a, b) {
                out.push(Violation::NotCoupled { index, a, b });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_connectivity() {
        let line = CouplingMap::line3();
        assert!(line.connected(0, 1));
        assert!(line.connected(1, 0));
        assert!(line.connected(1, 2));
        assert!(!line.connected(0, 2));
        assert_eq!(line.distance(0, 2), Some(2));
        assert_eq!(line.neighbors(1), vec![0, 2]);
    }

    #[test]
    fn triangle_connectivity() {
        let tri = CouplingMap::triangle3();
        for a in 0..3 {
            for b in 0..3 {
                if a != b {
                    assert!(tri.connected(a, b));
                }
            }
        }
        assert_eq!(tri.distance(0, 2), Some(1));
    }

    #[test]
    fn validate_flags_basis_and_coupling() {
        let mut c = Circuit::new(3, 3);
        c.h(0); // not in hardware basis
        c.cx(0, 2); // not an edge on the line
        c.cx(0, 1); // fine
        c.measure(0, 0); // fine
        let line = CouplingMap::line3();
        let basis = BasisGateSet::default_hardware();
        let violations = validate(&c, &line, &basis);
        assert_eq!(
            violations,
            vec![
                Violation::NotInBasis { index: 0, name: "h" },
                Violation::NotCoupled { index: 1, a: 0, b: 2 },
            ]
        );
        assert!(validate(&c, &CouplingMap::triangle3(), &basis)
            .iter()
            .all(|v| matches!(v, Violation::NotInBasis { .. })));
    }

    #[test]
    fn barrier_and_measure_allowed_by_default_basis() {
        let mut c = Circuit::new(2, 2);
        c.barrier_all();
        c.measure_all();
        c.reset(0);
        let v = validate(&c, &CouplingMap::line3(), &BasisGateSet::default_hardware());
        assert!(v.is_empty());
    }
}
