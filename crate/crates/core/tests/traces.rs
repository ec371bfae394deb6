//! Pinned factorization traces of the reference diagrams, with per-step invariants.

use tldiag::admissible::length;
use tldiag::algebra::{simple_diagram, theta_unchecked};
use tldiag::catalog::{factorization_samples, left_peak, loop_neighbors, weighted_undammed, Reference};
use tldiag::diagram::multiply_diagrams;
use tldiag::factor::{factorize_traced, FactorStep, StepOp};
use tldiag::{Diagram, Word};

fn kinds(trace: &[FactorStep]) -> Vec<String> {
    trace
        .iter()
        .map(|s| match s.op {
            StepOp::CutAndPaste => s.kind.map(|k| k.to_string()).unwrap_or_default(),
            StepOp::Inner => format!("inner {}", s.kind.map(|k| k.to_string()).unwrap_or_default()),
            StepOp::KLeft => "K_L".into(),
            StepOp::KRight => "K_R".into(),
            StepOp::ClosedForm => "closed".into(),
        })
        .collect()
}

fn pinned(r: &Reference) -> (Word, Vec<String>) {
    let (w, t) = factorize_traced(&r.diagram, &r.spec).unwrap();
    (w, kinds(&t))
}

#[test]
fn loop_neighbor_trace() {
    let (w, k) = pinned(&loop_neighbors().unwrap());
    assert_eq!(w, [1, 3, 2, 5, 4, 0, 3, 2, 5, 4, 5, 1, 3]);
    assert_eq!(
        k,
        ["basic-a", "U_L", "N", "U_L", "N", "basic-a", "U_L", "N", "U_L", "N", "basic-d", "basic-c", "basic-c"]
    );
}

#[test]
fn left_peak_trace() {
    let (w, k) = pinned(&left_peak().unwrap());
    assert_eq!(w, [8, 7, 6, 5, 4, 3, 2, 1, 0, 2, 3, 8, 7, 6, 5, 8, 7, 4, 6, 5, 8, 7, 8, 6]);
    assert_eq!(&k[..9], ["inner U_L", "inner N", "inner U_L", "inner N", "inner S_L", "K_L", "K_L", "P_R•", "P_R"]);
}

#[test]
fn weighted_undammed_trace() {
    let (w, k) = pinned(&weighted_undammed().unwrap());
    assert_eq!(
        w,
        [
            0, 2, 6, 5, 4, 7, 6, 1, 3, 2, 5, 4, 7, 6, 0, 3, 2, 5, 4, 7, 6, 1, 3, 2, 5, 4, 7, 6, 7, 5, 6, 3, 0, 2, 4, 1,
            3, 5, 2, 4, 3
        ]
    );
    assert_eq!(k[0], "U_R");
    assert_eq!(k.iter().filter(|s| *s == "basic-a").count(), 3);
}

#[test]
fn every_step_drops_length_and_multiplies_back() {
    for r in factorization_samples().unwrap() {
        let (w, trace) = factorize_traced(&r.diagram, &r.spec).unwrap();
        assert_eq!(w.len(), length(&r.diagram, &r.spec).unwrap(), "{}", r.name);
        let mut cur: Diagram = r.diagram.clone();
        for (i, step) in trace.iter().enumerate() {
            assert_eq!(step.generators.len(), 1, "{}", r.name);
            assert_eq!(step.length_before, w.len() - i);
            assert_eq!(length(&cur, &r.spec).unwrap(), w.len() - i);
            let rest = theta_unchecked(&w[i + 1..], &r.spec).unwrap();
            let prod = multiply_diagrams(&simple_diagram(&r.spec, step.generators[0]).unwrap(), &rest, r.spec.family).unwrap();
            assert!(prod.coeff.is_one());
            assert_eq!(prod.diagram.canonical_key(), cur.canonical_key(), "{} step {i}", r.name);
            cur = rest;
        }
        assert!(cur.is_identity());
    }
}
