//! Randomized invariants over FC words.

use proptest::prelude::*;
use tldiag::admissible::{classify_diagram, is_admissible, length};
use tldiag::algebra::{theta_unchecked, AlgebraElement};
use tldiag::coxeter::is_fully_commutative;
use tldiag::factor::factorize;
use tldiag::{CoxeterSpec, Diagram, Heap};

fn spec_strategy() -> impl Strategy<Value = CoxeterSpec> {
    prop_oneof![(2usize..=5).prop_map(CoxeterSpec::b), (2usize..=5).prop_map(CoxeterSpec::d)]
}

/// The longest FC prefix of a random word.
fn fc_prefix(raw: &[usize], spec: &CoxeterSpec) -> Vec<usize> {
    let r = spec.rank();
    let mut w: Vec<usize> = Vec::new();
    for &x in raw {
        w.push(x % r);
        if !matches!(is_fully_commutative(&w, spec), Ok(true)) {
            w.pop();
        }
    }
    w
}

fn word_strategy() -> impl Strategy<Value = (CoxeterSpec, Vec<usize>)> {
    (spec_strategy(), proptest::collection::vec(0usize..64, 0..40)).prop_map(|(s, raw)| {
        let w = fc_prefix(&raw, &s);
        (s, w)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn theta_is_admissible_of_word_length((spec, w) in word_strategy()) {
        let d = theta_unchecked(&w, &spec).unwrap();
        prop_assert!(is_admissible(&d, &spec).admissible, "{w:?} ↦ {d}");
        prop_assert_eq!(length(&d, &spec).unwrap(), w.len());
    }

    #[test]
    fn factorization_inverts_theta((spec, w) in word_strategy()) {
        let d = theta_unchecked(&w, &spec).unwrap();
        let f = factorize(&d, &spec).unwrap();
        prop_assert_eq!(Heap::from_word(&f, &spec).unwrap(), Heap::from_word(&w, &spec).unwrap());
    }

    #[test]
    fn families_agree((spec, w) in word_strategy()) {
        let d = theta_unchecked(&w, &spec).unwrap();
        let h = Heap::from_word(&w, &spec).unwrap().classify_family().unwrap();
        prop_assert_eq!(classify_diagram(&d, &spec).unwrap().tag, h.tag);
    }

    #[test]
    fn identity_is_neutral((spec, w) in word_strategy()) {
        let d = theta_unchecked(&w, &spec).unwrap();
        let x = AlgebraElement::from_diagram(spec, d);
        let one = AlgebraElement::from_diagram(spec, Diagram::identity(spec.box_width()));
        prop_assert_eq!(one.multiply(&x).unwrap(), x.clone());
        prop_assert_eq!(x.multiply(&one).unwrap(), x);
    }

    #[test]
    fn json_round_trip((spec, w) in word_strategy()) {
        let d = theta_unchecked(&w, &spec).unwrap();
        let back = Diagram::from_json_str(&d.to_json_string()).unwrap();
        prop_assert_eq!(back.canonical_key(), d.canonical_key());
    }
}
