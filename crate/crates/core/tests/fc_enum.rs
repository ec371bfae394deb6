mod oracle;

use tldiag::coxeter::{canonical_word, coxeter_matrix, enumerate_fc, is_fully_commutative};
use tldiag::{CoxeterSpec, Error, Heap};

#[test]
fn matrix_matches_oracle_bonds() {
    for n in 2..6 {
        assert_eq!(coxeter_matrix(&CoxeterSpec::b(n)), oracle::bonds('B', n));
        assert_eq!(coxeter_matrix(&CoxeterSpec::d(n)), oracle::bonds('D', n));
    }
}

#[test]
fn enumeration_matches_oracle_b2() {
    let spec = CoxeterSpec::b(2);
    let levels = enumerate_fc(&spec, 12).unwrap();
    let oracle = oracle::oracle_fc_levels('B', 2, 12);
    for (l, (a, b)) in levels.iter().zip(&oracle).enumerate() {
        let a: std::collections::BTreeSet<_> = a.iter().cloned().collect();
        assert_eq!(&a, b, "length {l}");
    }
}

#[test]
fn enumeration_matches_oracle_d2() {
    let spec = CoxeterSpec::d(2);
    let levels = enumerate_fc(&spec, 10).unwrap();
    let oracle = oracle::oracle_fc_levels('D', 2, 10);
    for (l, (a, b)) in levels.iter().zip(&oracle).enumerate() {
        assert_eq!(a.len(), b.len(), "length {l}");
        assert!(a.iter().all(|w| b.contains(w)));
    }
}

#[test]
fn enumeration_matches_oracle_b3() {
    let spec = CoxeterSpec::b(3);
    let levels = enumerate_fc(&spec, 9).unwrap();
    let oracle = oracle::oracle_fc_levels('B', 3, 9);
    for (a, b) in levels.iter().zip(&oracle) {
        assert_eq!(a.len(), b.len());
    }
}

fn agree_on_all_words(spec: CoxeterSpec, fam: char, max_len: usize) {
    let m = oracle::bonds(fam, spec.n);
    for len in 0..=max_len {
        for w in oracle::all_words(spec.rank(), len) {
            let expect = oracle::oracle_is_fc(&w, &m);
            match is_fully_commutative(&w, &spec) {
                Ok(v) => assert_eq!(v, expect, "{w:?}"),
                Err(Error::NotReduced) => assert!(!expect, "{w:?}"),
                Err(e) => panic!("{e}"),
            }
        }
    }
}

#[test]
fn fc_test_agrees_with_oracle_b2() {
    agree_on_all_words(CoxeterSpec::b(2), 'B', 8);
}

#[test]
fn fc_test_agrees_with_oracle_d2() {
    agree_on_all_words(CoxeterSpec::d(2), 'D', 7);
}

#[test]
fn deleting_an_extremal_letter_shortens() {
    let spec = CoxeterSpec::b(2);
    for level in enumerate_fc(&spec, 8).unwrap() {
        for w in level {
            if w.is_empty() {
                continue;
            }
            for u in tldiag::coxeter::commutation_class(&w, &spec) {
                for v in [u[1..].to_vec(), u[..u.len() - 1].to_vec()] {
                    assert!(tldiag::coxeter::is_reduced(&v, &spec).unwrap(), "{u:?}");
                    assert_eq!(is_fully_commutative(&v, &spec), Ok(true));
                }
            }
        }
    }
}

#[test]
fn deleting_an_inner_letter_can_break_reducedness() {
    let spec = CoxeterSpec::b(2);
    assert_eq!(is_fully_commutative(&[2, 3, 2], &spec), Ok(true));
    assert!(!tldiag::coxeter::is_reduced(&[2, 2], &spec).unwrap());
}

#[test]
fn recanonicalizing_class_members_is_stable() {
    let spec = CoxeterSpec::b(3);
    for level in enumerate_fc(&spec, 7).unwrap() {
        for w in level {
            for u in tldiag::coxeter::commutation_class(&w, &spec) {
                assert_eq!(canonical_word(&u, &spec), w);
                assert_eq!(Heap::from_word(&u, &spec).unwrap(), Heap::from_word(&w, &spec).unwrap());
            }
        }
    }
}
