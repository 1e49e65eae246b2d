//! Property tests for the whole-pipeline invariants: semantic preservation,
//! basis/coupling validity of the output, and reproducibility.

use proptest::prelude::*;
use qcflate_core::coupling::{validate, BasisGateSet, CouplingMap};
use qcflate_core::{unitary_fidelity, Circuit, Mat};
use qcflate_transpile::route::permutation_unitary;
use qcflate_transpile::{transpile, Coupling, PassConfig};
use std::f64::consts::PI;

/// One random unitary instruction on an `nq`-wide register.
fn arb_instruction(nq: usize) -> impl Strategy<Value = (u8, Vec<usize>, [f64; 3])> {
    let angles = [-PI..PI, -PI..PI, -PI..PI];
    (0u8..10, proptest::sample::subsequence((0..nq).collect::<Vec<_>>(), 3), angles).prop_map(
        move |(kind, mut wires, angles)| {
            // subsequence is sorted; rotate by the first angle's sign bits to
            // vary operand order deterministically
            if angles[0] > 0.0 {
                wires.reverse();
            }
            (kind, wires, angles)
        },
    )
}

fn build_circuit(nq: usize, spec: &[(u8, Vec<usize>, [f64; 3])]) -> Circuit {
    let mut c = Circuit::new(nq, 0);
    for (kind, wires, a) in spec {
        let q0 = wires[0];
        match kind {
            0 => c.u3(a[0], a[1], a[2], q0),
            1 => c.rz(a[0], q0),
            2 => c.sx(q0),
            3 => c.x(q0),
            4 => c.h(q0),
            5 if wires.len() >= 2 => c.cx(wires[0], wires[1]),
            6 if wires.len() >= 2 => c.ch(wires[0], wires[1]),
            7 if wires.len() >= 2 => c.cu3(a[0], a[1], a[2], wires[0], wires[1]),
            8 if wires.len() >= 2 => c.swap(wires[0], wires[1]),
            9 if wires.len() >= 3 => c.ccx(wires[0], wires[1], wires[2]),
            _ => c.rz(a[1], q0),
        }
    }
    c
}

fn check_preserved(circuit: &Circuit, cfg: &PassConfig) {
    let out = transpile(circuit, cfg).unwrap();
    let nq = out.circuit.num_qubits();

    // reported fidelity is near one
    let f = out.report.semantic_fidelity.unwrap();
    assert!(f > 1.0 - 1e-9, "reported fidelity {f}");

    // and independently: output unitary == P_f U P_0^dag
    assert_eq!(circuit.num_qubits(), nq, "width preserved");
    let u: Mat = circuit.unitary().unwrap();
    let v: Mat = out.circuit.unitary().unwrap();
    let p0 = permutation_unitary(&out.report.layout.initial, nq);
    let pf = permutation_unitary(&out.report.layout.final_map, nq);
    let want = pf.mul(&u).mul(&p0.adjoint());
    let g = unitary_fidelity(&v, &want);
    assert!(g > 1.0 - 1e-9, "recomputed fidelity {g}");

    // output is executable on the device as-is
    let cmap = match &cfg.coupling {
        Some(c) => CouplingMap::new(c.num_qubits(), c.edges()),
        None => {
            let mut edges = Vec::new();
            for a in 0..nq {
                for b in a + 1..nq {
                    edges.push((a, b));
                }
            }
            CouplingMap::new(nq, &edges)
        }
    };
    let violations = validate(&out.circuit, &cmap, &BasisGateSet::default_hardware());
    assert!(violations.is_empty(), "violations: {violations:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_circuits_survive_low_levels(
        nq in 2usize..=4,
        spec in proptest::collection::vec(arb_instruction(4), 1..8),
        level in 0u8..=2,
        seed in 0u64..1000,
        line in proptest::bool::ANY,
    ) {
        let spec: Vec<_> = spec
            .into_iter()
            .filter(|(_, w, _)| !w.is_empty())
            .map(|(k, w, a)| (k, w.into_iter().filter(|&q| q < nq).collect::<Vec<_>>(), a))
            .filter(|(_, w, _)| !w.is_empty())
            .collect();
        prop_assume!(!spec.is_empty());
        let circuit = build_circuit(nq, &spec);
        let coupling = if line { Coupling::line(nq) } else { Coupling::complete(nq) };
        let cfg = PassConfig::level(level).with_seed(seed).with_coupling(coupling);
        check_preserved(&circuit, &cfg);
    }

    #[test]
    fn random_circuits_survive_level_three(
        spec in proptest::collection::vec(arb_instruction(3), 1..6),
        seed in 0u64..100,
    ) {
        let spec: Vec<_> = spec.into_iter().filter(|(_, w, _)| !w.is_empty()).collect();
        prop_assume!(!spec.is_empty());
        let circuit = build_circuit(3, &spec);
        let cfg = PassConfig::level(3).with_seed(seed).with_coupling(Coupling::line(3));
        check_preserved(&circuit, &cfg);
    }

    #[test]
    fn same_seed_same_output(
        spec in proptest::collection::vec(arb_instruction(3), 1..6),
        seed in 0u64..50,
        level in 0u8..=3,
    ) {
        let spec: Vec<_> = spec.into_iter().filter(|(_, w, _)| !w.is_empty()).collect();
        prop_assume!(!spec.is_empty());
        let circuit = build_circuit(3, &spec);
        let cfg = PassConfig::level(level).with_seed(seed).with_coupling(Coupling::line(3));
        let a = transpile(&circuit, &cfg).unwrap();
        let b = transpile(&circuit, &cfg).unwrap();
        prop_assert_eq!(a.circuit, b.circuit);
    }
}
