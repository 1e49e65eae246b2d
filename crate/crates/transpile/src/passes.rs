//! Circuit-shrinking passes over the matrix-backed op list.
//!
//! All passes are pure `Vec<Op> -> Vec<Op>` (or flat-list) functions with no
//! hidden state; the fixpoint driver composes them.  Adjacency is DAG
//! adjacency throughout: a pass looks for the next/previous op *touching* a
//! wire, jumping over ops on disjoint wires, which is what makes cancellation
//! find pairs separated by unrelated gates.

use crate::euler::{euler_zyz, lower_1q, norm_ang, Gate1};
use crate::kak::kak_ops_or;
use crate::matrix::{pauli_x, rz, sqrt_x, Mat2, Mat4};
use crate::ops::{count_cx, Op, OpSupport};
use qcflate_core::{apply_local_unitary, C64, Mat};
use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};

/// Merge DAG-adjacent single-qubit gates on the same wire and drop
/// identities (up to global phase).
pub fn merge_1q(ops: Vec<Op>) -> Vec<Op> {
    let mut out = ops;
    let mut changed = true;
    while changed {
        changed = false;
        let mut i = 0;
        while i < out.len() {
            let (q, m) = match out[i] {
                Op::OneQ { q, m } => (q, m),
                _ => {
                    i += 1;
                    continue;
                }
            };
            let mut j = i + 1;
            while j < out.len() && !out[j].touches(q) {
                j += 1;
            }
            if j < out.len() {
                if let Op::OneQ { m: mj, .. } = out[j] {
                    out[j] = Op::one_q(q, mj.mul(&m));
                    out.remove(i);
                    changed = true;
                    continue;
                }
            }
            if m.e[0][1].norm() < 1e-10
                && m.e[1][0].norm() < 1e-10
                && (m.e[0][0] - m.e[1][1]).norm() < 1e-10
            {
                out.remove(i);
                changed = true;
                continue;
            }
            i += 1;
        }
    }
    out
}

fn is_diag(m: &Mat2) -> bool {
    m.e[0][1].norm() < 1e-10 && m.e[1][0].norm() < 1e-10
}

fn is_x_like(m: &Mat2) -> bool {
    (m.e[0][0] - m.e[1][1]).norm() < 1e-10 && (m.e[0][1] - m.e[1][0]).norm() < 1e-10
}

/// Cancel equal-direction CNOT pairs.  With `through_1q`, diagonal gates may
/// sit on the control wire and X-like gates on the target wire between the
/// pair (they commute through); without it only wire-disjoint ops may
/// separate them.
pub fn commute_cancel_ext(ops: Vec<Op>, through_1q: bool) -> Vec<Op> {
    let mut out = ops;
    let mut changed = true;
    while changed {
        changed = false;
        let mut i = 0;
        while i < out.len() {
            let (cw, tw) = match out[i] {
                Op::Cx { c, t } => (c, t),
                _ => {
                    i += 1;
                    continue;
                }
            };
            let mut j = i + 1;
            let mut blocked = false;
            while j < out.len() {
                if !out[j].touches(cw) && !out[j].touches(tw) {
                    j += 1;
                    continue;
                }
                if let Op::Cx { c, t } = out[j] {
                    if c == cw && t == tw {
                        break;
                    }
                }
                if through_1q {
                    if let Op::OneQ { q, m } = out[j] {
                        if (q == cw && is_diag(&m)) || (q == tw && is_x_like(&m)) {
                            j += 1;
                            continue;
                        }
                    }
                }
                blocked = true;
                break;
            }
            if !blocked && j < out.len() {
                if let Op::Cx { c, t } = out[j] {
                    if c == cw && t == tw {
                        out.remove(j);
                        out.remove(i);
                        changed = true;
                        continue;
                    }
                }
            }
            i += 1;
        }
    }
    out
}

/// Full commuting cancellation (diagonal-through-control, X-through-target).
pub fn commute_cancel(ops: Vec<Op>) -> Vec<Op> {
    commute_cancel_ext(ops, true)
}

/// Conservative cancellation used at the lightest optimization level.
pub fn cancel_adjacent(ops: Vec<Op>) -> Vec<Op> {
    commute_cancel_ext(ops, false)
}

/// Greedily collect op indices from `start` whose support lies inside the
/// pair (a, b), jumping wire-disjoint ops; stop at the first op that shares
/// a wire with the pair but reaches outside it, or with a collected op's
/// wires while itself being jumpable.
fn collect_block(ops: &[Op], start: usize, a: usize, b: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = Vec::new();
    for k in start..ops.len() {
        let s = ops[k].support();
        if s.within_pair(a, b) {
            let mut ok = true;
            for m in start..k {
                if idx.contains(&m) {
                    continue;
                }
                if ops[m].support().intersects(&s) {
                    ok = false;
                    break;
                }
            }
            if ok {
                idx.push(k);
            } else {
                break;
            }
        } else if s.contains(a) || s.contains(b) {
            break;
        }
    }
    idx
}

/// One resynthesis sweep: for each pair in `sweep` order, find blocks whose
/// KAK re-synthesis (with the pair's CNOT orientation from `orient`) strictly
/// reduces the CNOT count and splice the new ops in, hoisting jumped
/// wire-disjoint ops in front of the block.
pub fn block_resynth_or(
    ops: Vec<Op>,
    sweep: &[(usize, usize)],
    orient: &BTreeMap<(usize, usize), bool>,
) -> Vec<Op> {
    let mut ops = ops;
    for &(a, b) in sweep {
        let mut i = 0;
        while i < ops.len() {
            let idx = collect_block(&ops, i, a, b);
            let n_cx = idx.iter().filter(|&&k| ops[k].is_cx()).count();
            if n_cx >= 1 {
                let mut w = Mat4::identity();
                for &k in &idx {
                    w = crate::ops::op_on_pair(&ops[k], a, b).mul(&w);
                }
                let flip = orient.get(&(a, b)).copied().unwrap_or(false);
                if let Ok(new) = kak_ops_or(&w, a, b, flip) {
                    if count_cx(&new) < n_cx {
                        let hi = *idx.last().unwrap();
                        let mut rebuilt: Vec<Op> = ops[..i].to_vec();
                        for k in i..=hi {
                            if !idx.contains(&k) {
                                let s = ops[k].support();
                                if !s.contains(a) && !s.contains(b) {
                                    rebuilt.push(ops[k]);
                                }
                            }
                        }
                        rebuilt.extend(new);
                        rebuilt.extend_from_slice(&ops[hi + 1..]);
                        ops = rebuilt;
                        i = 0;
                        continue;
                    }
                }
            }
            i = match idx.last() {
                Some(&last) => last + 1,
                None => i + 1,
            };
        }
    }
    ops
}

/// Cost of a 1q slot after lowering: the SX count its rotation angle implies.
fn slot_sx(m: &Mat2) -> usize {
    let (th, _, _) = euler_zyz(m);
    if norm_ang(th).abs() < 1e-9 {
        0
    } else if norm_ang(th - FRAC_PI_2).abs() < 1e-9 {
        1
    } else {
        2
    }
}

/// Hop the X factor of an X-like 1q slot left through CNOT targets into an
/// earlier 1q slot on the same wire when that lowers the total SX cost.
pub fn xhop(ops: Vec<Op>) -> Vec<Op> {
    let mut ops = ops;
    let x = pauli_x();
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..ops.len() {
            let (q, m) = match ops[i] {
                Op::OneQ { q, m } => (q, m),
                _ => continue,
            };
            let (th, _, _) = euler_zyz(&m);
            if (norm_ang(th).abs() - PI).abs() >= 1e-9 {
                continue;
            }
            let mut j = i as isize - 1;
            while j >= 0 {
                let oj = &ops[j as usize];
                if !oj.touches(q) {
                    j -= 1;
                    continue;
                }
                if let Op::Cx { t, .. } = oj {
                    if *t == q {
                        j -= 1;
                        continue;
                    }
                }
                break;
            }
            if j >= 0 && (j as usize) < i.wrapping_sub(1) {
                if let Op::OneQ { q: qj, m: mj } = ops[j as usize] {
                    if qj == q {
                        let newj = x.mul(&mj);
                        let newi = m.mul(&x);
                        let old = slot_sx(&mj) + slot_sx(&m);
                        let new = slot_sx(&newj) + slot_sx(&newi);
                        if new < old {
                            ops[j as usize] = Op::one_q(q, newj);
                            ops[i] = Op::one_q(q, newi);
                            changed = true;
                            break;
                        }
                    }
                }
            }
        }
    }
    ops
}

// ---------------------------------------------------------------------------
// flat basis representation
// ---------------------------------------------------------------------------

/// One hardware-basis gate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FlatOp {
    Rz { q: usize, angle: f64 },
    Sx { q: usize },
    Cx { c: usize, t: usize },
}

impl FlatOp {
    pub fn support(&self) -> OpSupport {
        match *self {
            FlatOp::Rz { q, .. } | FlatOp::Sx { q } => OpSupport::One(q),
            FlatOp::Cx { c, t } => OpSupport::Two(c, t),
        }
    }

    pub fn touches(&self, w: usize) -> bool {
        self.support().contains(w)
    }
}

/// Lower every 1q matrix to its minimal {Rz, SX} form; CNOTs pass through.
pub fn lower_to_basis(ops: &[Op]) -> Vec<FlatOp> {
    let mut flat = Vec::new();
    for op in ops {
        match *op {
            Op::Cx { c, t } => flat.push(FlatOp::Cx { c, t }),
            Op::OneQ { q, m } => {
                for g in lower_1q(&m) {
                    flat.push(match g {
                        Gate1::Rz(angle) => FlatOp::Rz { q, angle },
                        Gate1::Sx => FlatOp::Sx { q },
                    });
                }
            }
        }
    }
    flat
}

/// Merge Rz chains (hopping left through CNOT controls), normalize angles to
/// (-pi, pi], and drop zero rotations.
pub fn peephole(flat: Vec<FlatOp>) -> Vec<FlatOp> {
    let mut out = flat;
    let mut changed = true;
    while changed {
        changed = false;
        let mut i = 0;
        while i < out.len() {
            if let FlatOp::Rz { q, angle } = out[i] {
                let mut j = i as isize - 1;
                while j >= 0 && !out[j as usize].touches(q) {
                    j -= 1;
                }
                if j >= 0 {
                    match out[j as usize] {
                        FlatOp::Rz { angle: prev, .. } => {
                            out[j as usize] = FlatOp::Rz {
                                q,
                                angle: prev + angle,
                            };
                            out.remove(i);
                            changed = true;
                            continue;
                        }
                        FlatOp::Cx { c, .. } if c == q => {
                            let op = out.remove(i);
                            out.insert(j as usize, op);
                            changed = true;
                            continue;
                        }
                        _ => {}
                    }
                }
                let a = norm_ang(angle);
                if a == 0.0 {
                    out.remove(i);
                    changed = true;
                    continue;
                }
                if (a - angle).abs() > 1e-12 {
                    out[i] = FlatOp::Rz { q, angle: a };
                }
            }
            i += 1;
        }
    }
    out
}

/// Gate counts of a flat list, keyed by basis-gate name.
pub fn flat_counts(flat: &[FlatOp]) -> BTreeMap<&'static str, usize> {
    let mut n = BTreeMap::new();
    for op in flat {
        let k = match op {
            FlatOp::Rz { .. } => "rz",
            FlatOp::Sx { .. } => "sx",
            FlatOp::Cx { .. } => "cx",
        };
        *n.entry(k).or_insert(0) += 1;
    }
    n
}

/// Circuit depth of a flat list (per-wire level counters).
pub fn flat_depth(flat: &[FlatOp]) -> usize {
    let mut lvl: BTreeMap<usize, usize> = BTreeMap::new();
    let mut d = 0;
    for op in flat {
        let l = match op.support() {
            OpSupport::One(q) => {
                let l = lvl.get(&q).copied().unwrap_or(0) + 1;
                lvl.insert(q, l);
                l
            }
            OpSupport::Two(a, b) => {
                let l = lvl.get(&a).copied().unwrap_or(0).max(lvl.get(&b).copied().unwrap_or(0)) + 1;
                lvl.insert(a, l);
                lvl.insert(b, l);
                l
            }
        };
        d = d.max(l);
    }
    d
}

/// Lexicographic quality score of a flat list: (CNOTs, depth, total gates).
pub fn flat_score(flat: &[FlatOp]) -> (usize, usize, usize) {
    let n = flat_counts(flat);
    let cx = n.get("cx").copied().unwrap_or(0);
    (cx, flat_depth(flat), flat.len())
}

/// Dense unitary of a flat list over `num_qubits` wires.
pub fn flat_unitary(flat: &[FlatOp], num_qubits: usize) -> Mat {
    let ops = lift(flat);
    crate::ops::ops_unitary(&ops, num_qubits)
}

/// Raise flat basis gates back to matrix-backed ops for further passes.
pub fn lift(flat: &[FlatOp]) -> Vec<Op> {
    flat.iter()
        .map(|op| match *op {
            FlatOp::Cx { c, t } => Op::cx(c, t),
            FlatOp::Rz { q, angle } => Op::one_q(q, rz(angle)),
            FlatOp::Sx { q } => Op::one_q(q, sqrt_x()),
        })
        .collect()
}

/// CNOT count of a flat list.
pub fn flat_cx(flat: &[FlatOp]) -> usize {
    flat.iter()
        .filter(|o| matches!(o, FlatOp::Cx { .. }))
        .count()
}

// ---------------------------------------------------------------------------
// fixpoint drivers
// ---------------------------------------------------------------------------

const FIXPOINT_ROUNDS: usize = 20;

/// Full optimizing fixpoint for one sweep/orientation choice: repeat
/// merge/cancel/resynthesize until the CNOT count stabilizes, then X-hop and
/// lower to the peepholed basis form.
pub fn fixpoint_or(
    ops: Vec<Op>,
    sweep: &[(usize, usize)],
    orient: &BTreeMap<(usize, usize), bool>,
) -> Vec<FlatOp> {
    let mut ops = ops;
    for _ in 0..FIXPOINT_ROUNDS {
        let n0 = count_cx(&ops);
        ops = merge_1q(ops);
        ops = commute_cancel(ops);
        ops = merge_1q(ops);
        ops = block_resynth_or(ops, sweep, orient);
        ops = merge_1q(ops);
        if count_cx(&ops) == n0 {
            break;
        }
    }
    ops = xhop(ops);
    ops = merge_1q(ops);
    peephole(lower_to_basis(&ops))
}

/// Lighter fixpoint without block resynthesis: merge plus cancellation only.
pub fn fixpoint_cancel(ops: Vec<Op>, through_1q: bool) -> Vec<Op> {
    let mut ops = ops;
    for _ in 0..FIXPOINT_ROUNDS {
        let n0 = count_cx(&ops);
        ops = merge_1q(ops);
        ops = commute_cancel_ext(ops, through_1q);
        ops = merge_1q(ops);
        if count_cx(&ops) == n0 {
            break;
        }
    }
    ops
}

fn permutations<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head.clone());
            out.push(tail);
        }
    }
    out
}

/// Sweep orders tried by [`l3_best`]: all permutations for up to three
/// pairs, cyclic rotations beyond that (the factorial blows up otherwise).
fn sweep_orders(pairs: &[(usize, usize)]) -> Vec<Vec<(usize, usize)>> {
    if pairs.len() <= 3 {
        permutations(pairs)
    } else {
        (0..pairs.len())
            .map(|r| {
                let mut v = pairs.to_vec();
                v.rotate_left(r);
                v
            })
            .collect()
    }
}

/// Orientation assignments tried by [`l3_best`]: the full hypercube for up
/// to six pairs, default orientation only beyond that.
fn orient_choices(k: usize) -> Vec<Vec<bool>> {
    if k <= 6 {
        (0..(1usize << k))
            .map(|bits| (0..k).map(|i| (bits >> i) & 1 == 1).collect())
            .collect()
    } else {
        vec![vec![false; k]]
    }
}

/// Heaviest optimization: enumerate sweep orders and per-pair CNOT
/// orientations, run the full fixpoint for each, and keep the
/// lexicographically best lowered result.
pub fn l3_best(ops: &[Op], pairs: &[(usize, usize)]) -> Vec<FlatOp> {
    let mut best: Option<((usize, usize, usize), Vec<FlatOp>)> = None;
    for sweep in sweep_orders(pairs) {
        for bits in orient_choices(pairs.len()) {
            let orient: BTreeMap<(usize, usize), bool> =
                sweep.iter().copied().zip(bits.iter().copied()).collect();
            let flat = fixpoint_or(ops.to_vec(), &sweep, &orient);
            let k = flat_score(&flat);
            if best.as_ref().map_or(true, |(bk, _)| k < *bk) {
                best = Some((k, flat));
            }
        }
    }
    best.expect("at least one sweep order").1
}

// ---------------------------------------------------------------------------
// reference helper reused by tests in this and later modules
// ---------------------------------------------------------------------------

/// Apply flat ops to a state-vector column-by-column; used for spot checks
/// against [`flat_unitary`].
pub fn flat_apply(flat: &[FlatOp], num_qubits: usize, state: &mut [C64]) {
    let sx = Mat::from_fn(2, 2, |i, j| sqrt_x().e[i][j]);
    let cx_local = crate::matrix::controlled_local(&pauli_x(), 0, 1);
    let cxm = Mat::from_fn(4, 4, |i, j| cx_local.e[i][j]);
    for op in flat {
        match *op {
            FlatOp::Rz { q, angle } => {
                let m = Mat::from_fn(2, 2, |i, j| rz(angle).e[i][j]);
                apply_local_unitary(state, num_qubits, &m, &[q]);
            }
            FlatOp::Sx { q } => apply_local_unitary(state, num_qubits, &sx, &[q]),
            FlatOp::Cx { c, t } => apply_local_unitary(state, num_qubits, &cxm, &[c, t]),
        }
    }
}
