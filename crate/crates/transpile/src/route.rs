//! Coupling maps, layout search, and greedy CNOT routing.
//!
//! Couplings are undirected (native CNOT direction is a local-gate detail,
//! so no direction pass exists).  Routing maps logical wires onto physical
//! ones through a layout permutation; every CNOT whose endpoints are not
//! coupled is resolved by either a 4-CNOT bridge (distance-2 only) or a
//! 3-CNOT swap that strictly shrinks the distance, the choice drawn from the
//! trial's RNG.  Up to four qubits every placement is tried; beyond that the
//! identity placement with greedy conflict resolution stands in.

use crate::error::{Result, TranspileError};
use crate::ops::Op;
use qcflate_core::{C64, Mat};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Undirected coupling graph over physical qubits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CouplingWire", into = "CouplingWire")]
pub struct Coupling {
    num_qubits: usize,
    edges: Vec<(usize, usize)>,
    dist: Vec<Vec<usize>>,
}

/// JSON shape: `{"num_qubits": 3, "edges": [[0,1],[1,2]]}`.
#[derive(Serialize, Deserialize)]
struct CouplingWire {
    num_qubits: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<CouplingWire> for Coupling {
    type Error = String;

    fn try_from(w: CouplingWire) -> std::result::Result<Self, String> {
        Coupling::new(
            w.num_qubits,
            w.edges.iter().map(|e| (e[0], e[1])).collect(),
        )
        .map_err(|e| e.to_string())
    }
}

impl From<Coupling> for CouplingWire {
    fn from(cpl: Coupling) -> CouplingWire {
        CouplingWire {
            num_qubits: cpl.num_qubits,
            edges: cpl.edges.iter().map(|&(a, b)| [a, b]).collect(),
        }
    }
}

const UNREACHABLE: usize = usize::MAX / 2;

impl Coupling {
    /// Build a coupling from undirected edges; duplicates (either
    /// orientation) collapse and loops are rejected.
    pub fn new(num_qubits: usize, edges: Vec<(usize, usize)>) -> Result<Coupling> {
        if num_qubits == 0 {
            return Err(TranspileError::Config("coupling needs >= 1 qubit".into()));
        }
        let mut norm: Vec<(usize, usize)> = Vec::new();
        for (a, b) in edges {
            if a == b || a >= num_qubits || b >= num_qubits {
                return Err(TranspileError::Config(format!(
                    "bad coupling edge ({a},{b}) for {num_qubits} qubits"
                )));
            }
            let e = (a.min(b), a.max(b));
            if !norm.contains(&e) {
                norm.push(e);
            }
        }
        norm.sort_unstable();
        let dist = all_pairs_distances(num_qubits, &norm);
        Ok(Coupling {
            num_qubits,
            edges: norm,
            dist,
        })
    }

    /// All-to-all connectivity (routing becomes a no-op).
    pub fn complete(num_qubits: usize) -> Coupling {
        let mut edges = Vec::new();
        for a in 0..num_qubits {
            for b in a + 1..num_qubits {
                edges.push((a, b));
            }
        }
        Coupling::new(num_qubits, edges).expect("complete graph is valid")
    }

    /// Open chain 0-1-...-(n-1).
    pub fn line(num_qubits: usize) -> Coupling {
        let edges = (0..num_qubits.saturating_sub(1)).map(|i| (i, i + 1)).collect();
        Coupling::new(num_qubits, edges).expect("line graph is valid")
    }

    /// Closed chain; `ring(3)` is the triangle.
    pub fn ring(num_qubits: usize) -> Coupling {
        let mut edges: Vec<(usize, usize)> =
            (0..num_qubits.saturating_sub(1)).map(|i| (i, i + 1)).collect();
        if num_qubits > 2 {
            edges.push((0, num_qubits - 1));
        }
        Coupling::new(num_qubits, edges).expect("ring graph is valid")
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let e = (a.min(b), a.max(b));
        self.edges.binary_search(&e).is_ok()
    }

    /// Shortest-path distance; `usize::MAX / 2` when disconnected.
    pub fn distance(&self, a: usize, b: usize) -> usize {
        self.dist[a][b]
    }

    pub fn is_connected(&self) -> bool {
        (0..self.num_qubits)
            .all(|a| (0..self.num_qubits).all(|b| self.dist[a][b] < UNREACHABLE))
    }

    pub fn neighbors(&self, q: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == q {
                    Some(b)
                } else if b == q {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }
}

fn all_pairs_distances(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut d = vec![vec![UNREACHABLE; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for &(a, b) in edges {
        d[a][b] = 1;
        d[b][a] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

/// Initial and final wire placement of a transpiled circuit.
///
/// Both maps send a logical wire to its physical wire; they differ when
/// routing inserted swaps.  The transpiled circuit `C` relates to the input
/// `U` by `C = P(final) U P(initial)^dagger` with `P` as in
/// [`permutation_unitary`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayoutPermutation {
    /// Logical-to-physical map chosen before execution.
    pub initial: Vec<usize>,
    /// Logical-to-physical map after all routing swaps.
    #[serde(rename = "final")]
    pub final_map: Vec<usize>,
}

impl LayoutPermutation {
    pub fn identity(n: usize) -> LayoutPermutation {
        LayoutPermutation {
            initial: (0..n).collect(),
            final_map: (0..n).collect(),
        }
    }

    /// Compose with a later stage: `self` ran first, `later` consumed its
    /// output.  Permutations compose pointwise on the logical index.
    pub fn then(&self, later: &LayoutPermutation) -> LayoutPermutation {
        LayoutPermutation {
            initial: compose_perm(&later.initial, &self.initial),
            final_map: compose_perm(&later.final_map, &self.final_map),
        }
    }
}

/// `(a o b)[q] = a[b[q]]`.
pub fn compose_perm(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&q| a[q]).collect()
}

pub fn invert_perm(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &v) in p.iter().enumerate() {
        inv[v] = i;
    }
    inv
}

/// Unitary of a wire permutation: basis state `i` maps to the state whose
/// bit `sigma[q]` equals bit `q` of `i`.
pub fn permutation_unitary(sigma: &[usize], num_qubits: usize) -> Mat {
    let dim = 1usize << num_qubits;
    let mut p = Mat::zeros(dim, dim);
    for i in 0..dim {
        let mut j = 0usize;
        for q in 0..num_qubits {
            j |= ((i >> q) & 1) << sigma[q];
        }
        p[(j, i)] = C64::new(1.0, 0.0);
    }
    p
}

/// All permutations of `0..n` in lexicographic order.
pub fn enumerate_layouts(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    let mut used = vec![false; n];
    fn rec(n: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(n, cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    rec(n, &mut cur, &mut used, &mut out);
    out
}

/// Number of CNOTs that land on uncoupled physical pairs under `sigma`.
pub fn count_offenders(ops: &[Op], sigma: &[usize], coupling: &Coupling) -> usize {
    ops.iter()
        .filter(|op| match **op {
            Op::Cx { c, t } => !coupling.has_edge(sigma[c], sigma[t]),
            _ => false,
        })
        .count()
}

/// Candidate placements to score for one routing problem: just the identity
/// when it already satisfies the coupling (or the register is too wide to
/// enumerate), every permutation otherwise.
pub fn candidate_layouts(ops: &[Op], coupling: &Coupling) -> Vec<Vec<usize>> {
    let n = coupling.num_qubits();
    let identity: Vec<usize> = (0..n).collect();
    if count_offenders(ops, &identity, coupling) == 0 || n > 4 {
        vec![identity]
    } else {
        enumerate_layouts(n)
    }
}

/// Route `ops` under the initial placement `sigma0`, resolving uncoupled
/// CNOTs with seeded bridge/swap choices.  Returns the physical op list and
/// the final logical-to-physical map.
pub fn greedy_route<R: Rng>(
    ops: &[Op],
    sigma0: &[usize],
    coupling: &Coupling,
    rng: &mut R,
) -> Result<(Vec<Op>, Vec<usize>)> {
    let n = coupling.num_qubits();
    let mut sigma = sigma0.to_vec();
    let mut acc: Vec<Op> = Vec::new();
    for op in ops {
        let (lc, lt) = match *op {
            Op::OneQ { q, m } => {
                acc.push(Op::one_q(sigma[q], m));
                continue;
            }
            Op::Cx { c, t } => (c, t),
        };
        loop {
            let pc = sigma[lc];
            let pt = sigma[lt];
            if coupling.has_edge(pc, pt) {
                acc.push(Op::cx(pc, pt));
                break;
            }
            let d0 = coupling.distance(pc, pt);
            if d0 >= UNREACHABLE {
                return Err(TranspileError::Routing(format!(
                    "wires {pc} and {pt} are disconnected in the coupling"
                )));
            }
            #[derive(Clone, Copy)]
            enum Cand {
                Bridge(usize),
                Swap(usize, usize),
            }
            let mut cands: Vec<Cand> = Vec::new();
            if d0 == 2 {
                for m in 0..n {
                    if coupling.has_edge(pc, m) && coupling.has_edge(m, pt) {
                        cands.push(Cand::Bridge(m));
                    }
                }
            }
            for &(a, b) in coupling.edges() {
                if a == pc || a == pt || b == pc || b == pt {
                    let map = |x: usize| {
                        if x == a {
                            b
                        } else if x == b {
                            a
                        } else {
                            x
                        }
                    };
                    if coupling.distance(map(pc), map(pt)) < d0 {
                        cands.push(Cand::Swap(a, b));
                    }
                }
            }
            debug_assert!(!cands.is_empty(), "connected graph always offers a swap");
            let pick = cands[rng.gen_range(0..cands.len())];
            match pick {
                Cand::Bridge(m) => {
                    acc.push(Op::cx(pc, m));
                    acc.push(Op::cx(m, pt));
                    acc.push(Op::cx(pc, m));
                    acc.push(Op::cx(m, pt));
                    break;
                }
                Cand::Swap(a, b) => {
                    acc.push(Op::cx(a, b));
                    acc.push(Op::cx(b, a));
                    acc.push(Op::cx(a, b));
                    // physical slots a and b exchange their logical occupants
                    for v in sigma.iter_mut() {
                        if *v == a {
                            *v = b;
                        } else if *v == b {
                            *v = a;
                        }
                    }
                }
            }
        }
    }
    Ok((acc, sigma))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::u3;
    use crate::ops::{count_cx, ops_unitary};
    use qcflate_core::unitary_fidelity;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn coupling_shapes() {
        let tri = Coupling::ring(3);
        assert_eq!(tri.edges(), &[(0, 1), (0, 2), (1, 2)]);
        assert!(tri.has_edge(2, 0));
        assert_eq!(tri.distance(0, 2), 1);
        let line = Coupling::line(3);
        assert_eq!(line.edges(), &[(0, 1), (1, 2)]);
        assert!(!line.has_edge(0, 2));
        assert_eq!(line.distance(0, 2), 2);
        assert!(line.is_connected());
        assert_eq!(line.neighbors(1), vec![0, 2]);
        let full = Coupling::complete(4);
        assert_eq!(full.edges().len(), 6);
    }

    #[test]
    fn coupling_rejects_bad_edges() {
        assert!(Coupling::new(3, vec![(0, 0)]).is_err());
        assert!(Coupling::new(3, vec![(0, 7)]).is_err());
        // duplicate orientations collapse
        let cpl = Coupling::new(3, vec![(1, 0), (0, 1)]).unwrap();
        assert_eq!(cpl.edges(), &[(0, 1)]);
    }

    #[test]
    fn coupling_round_trips_json() {
        let cpl = Coupling::line(3);
        let text = serde_json::to_string(&cpl).unwrap();
        let back: Coupling = serde_json::from_str(&text).unwrap();
        assert_eq!(cpl, back);
        let parsed: Coupling =
            serde_json::from_str(r#"{"num_qubits":3,"edges":[[0,1],[1,2]]}"#).unwrap();
        assert_eq!(parsed, cpl);
    }

    #[test]
    fn permutation_unitary_moves_bits() {
        // sigma = [1, 2, 0]: logical bit 0 lands on physical bit 1
        let p = permutation_unitary(&[1, 2, 0], 3);
        // |001> (logical q0 set) -> |010> (physical q1 set)
        assert!((p[(2, 1)] - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((p[(4, 2)] - C64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn layouts_enumerate_lexicographically() {
        let l = enumerate_layouts(3);
        assert_eq!(l.len(), 6);
        assert_eq!(l[0], vec![0, 1, 2]);
        assert_eq!(l[1], vec![0, 2, 1]);
        assert_eq!(l[5], vec![2, 1, 0]);
    }

    #[test]
    fn identity_shortcut_on_satisfied_circuits() {
        let ops = vec![Op::cx(0, 1), Op::cx(1, 2)];
        let line = Coupling::line(3);
        assert_eq!(candidate_layouts(&ops, &line).len(), 1);
        let bad = vec![Op::cx(0, 2)];
        assert_eq!(candidate_layouts(&bad, &line).len(), 6);
    }

    #[test]
    fn routing_fixes_uncoupled_cnot_exactly() {
        let line = Coupling::line(3);
        let ops = vec![
            Op::one_q(0, u3(0.3, 0.1, -0.7)),
            Op::cx(0, 2),
            Op::one_q(2, u3(1.1, 0.0, 0.2)),
        ];
        let target = ops_unitary(&ops, 3);
        for seed in 0..8 {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            for sigma0 in enumerate_layouts(3) {
                let (routed, sf) = greedy_route(&ops, &sigma0, &line, &mut rng).unwrap();
                assert_eq!(count_offenders(&routed, &(0..3).collect::<Vec<_>>(), &line), 0);
                let p0 = permutation_unitary(&sigma0, 3);
                let pf = permutation_unitary(&sf, 3);
                let want = pf.mul(&target).mul(&p0.adjoint());
                let got = ops_unitary(&routed, 3);
                let f = unitary_fidelity(&got, &want);
                assert!(f > 1.0 - 1e-10, "seed {seed} sigma {sigma0:?}: {f}");
            }
        }
    }

    #[test]
    fn routing_is_deterministic_per_seed() {
        let line = Coupling::line(3);
        let ops = vec![Op::cx(0, 2), Op::cx(2, 0), Op::cx(0, 2)];
        let sigma0 = vec![0, 1, 2];
        let run = |seed| {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            greedy_route(&ops, &sigma0, &line, &mut rng).unwrap()
        };
        let (a1, s1) = run(5);
        let (a2, s2) = run(5);
        assert_eq!(s1, s2);
        assert_eq!(count_cx(&a1), count_cx(&a2));
        assert_eq!(a1.len(), a2.len());
    }

    #[test]
    fn routing_errors_on_disconnected_graph() {
        let cpl = Coupling::new(4, vec![(0, 1), (2, 3)]).unwrap();
        assert!(!cpl.is_connected());
        let ops = vec![Op::cx(0, 2)];
        let mut rng = ChaCha20Rng::seed_from_u64(0);
        assert!(greedy_route(&ops, &[0, 1, 2, 3], &cpl, &mut rng).is_err());
    }

    #[test]
    fn layout_composition_matches_unitary_product() {
        let a = LayoutPermutation {
            initial: vec![1, 0, 2],
            final_map: vec![2, 0, 1],
        };
        let b = LayoutPermutation {
            initial: vec![0, 2, 1],
            final_map: vec![1, 2, 0],
        };
        let ab = a.then(&b);
        let pa = permutation_unitary(&a.initial, 3);
        let pb = permutation_unitary(&b.initial, 3);
        let pab = permutation_unitary(&ab.initial, 3);
        assert!(pb.mul(&pa).max_abs_diff(&pab) < 1e-15);
    }

    #[test]
    fn invert_round_trips() {
        let p = vec![2, 0, 3, 1];
        let inv = invert_perm(&p);
        assert_eq!(compose_perm(&p, &inv), vec![0, 1, 2, 3]);
        assert_eq!(compose_perm(&inv, &p), vec![0, 1, 2, 3]);
    }
}
