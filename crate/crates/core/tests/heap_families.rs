mod oracle;

use std::collections::{BTreeMap, HashSet};

use tldiag::coxeter::{commutation_class, enumerate_fc};
use tldiag::{CoxeterSpec, FamilyTag, Heap};

fn tally(spec: CoxeterSpec, max_len: usize) -> BTreeMap<FamilyTag, usize> {
    let mut t = BTreeMap::new();
    for level in enumerate_fc(&spec, max_len).unwrap() {
        for w in level {
            let h = Heap::from_word(&w, &spec).unwrap();
            let f = h.classify_family_b().unwrap_or_else(|e| panic!("{w:?}: {e}"));
            *t.entry(f.tag).or_insert(0) += 1;
        }
    }
    t
}

#[test]
fn every_fc_heap_has_a_family_n2() {
    let t = tally(CoxeterSpec::b(2), 12);
    // LRP needs 2 <= jl < jr <= n
    assert_eq!(t.len(), 4, "{t:?}");
}

#[test]
fn every_fc_heap_has_a_family_n3() {
    let t = tally(CoxeterSpec::b(3), 12);
    assert!(t.len() >= 4, "{t:?}");
}

#[test]
fn every_fc_heap_has_a_family_n4() {
    let t = tally(CoxeterSpec::b(4), 10);
    assert_eq!(t.len(), 5, "{t:?}");
}

#[test]
fn non_fc_heap_rejected() {
    let spec = CoxeterSpec::b(2);
    let h = Heap::from_word(&[2, 0, 2], &spec).unwrap();
    assert!(h.classify_family_b().is_err());
}

#[test]
fn delta_d_independent_of_linear_extension() {
    let spec = CoxeterSpec::b(2);
    for level in enumerate_fc(&spec, 7).unwrap() {
        for w in level {
            let h = Heap::from_word(&w, &spec).unwrap();
            let d: HashSet<Heap> = h.delta_d().unwrap().into_iter().collect();
            for u in commutation_class(&w, &spec).into_iter().rev().take(2) {
                let h2 = Heap::from_word(&u, &spec).unwrap();
                let d2: HashSet<Heap> = h2.delta_d().unwrap().into_iter().collect();
                assert_eq!(d, d2);
            }
            assert!([1, 2, 3, 4, 6, 9].contains(&d.len()), "{w:?}");
        }
    }
}

#[test]
fn delta_d_covers_fc_d4() {
    let bspec = CoxeterSpec::b(2);
    let mut image = HashSet::new();
    for level in enumerate_fc(&bspec, 10).unwrap() {
        for w in level {
            let h = Heap::from_word(&w, &bspec).unwrap();
            let fam = h.classify_family_b().unwrap();
            for d in h.delta_d().unwrap() {
                assert!(d.is_fc_heap());
                assert_eq!(d.classify_family_d().unwrap().tag, fam.tag);
                image.insert(d.word());
            }
        }
    }
    for level in oracle::oracle_fc_levels('D', 2, 10) {
        for w in level {
            assert!(image.contains(&w), "{w:?} not covered");
        }
    }
}
