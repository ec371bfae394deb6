//! Coxeter matrices of the two affine families, words and fully commutative elements.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heap::Heap;

/// A word in the Coxeter generators, as a list of generator indices.
pub type Word = Vec<usize>;

/// The two affine families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    /// Type B̃ₙ₊₁, generators 0..=n+1.
    #[serde(rename = "B")]
    AffineB,
    /// Type D̃ₙ₊₂, generators 0..=n+2.
    #[serde(rename = "D")]
    AffineD,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::AffineB => write!(f, "B"),
            Family::AffineD => write!(f, "D"),
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "B" | "b" => Ok(Family::AffineB),
            "D" | "d" => Ok(Family::AffineD),
            _ => Err(Error::Parse(format!("unknown family {s:?}"))),
        }
    }
}

/// A family together with the rank parameter `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CoxeterSpec {
    pub family: Family,
    pub n: usize,
}

impl CoxeterSpec {
    pub fn new(family: Family, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSpec(format!("n must be at least 2, got {n}")));
        }
        Ok(CoxeterSpec { family, n })
    }

    pub fn b(n: usize) -> Self {
        Self::new(Family::AffineB, n).expect("valid spec")
    }

    pub fn d(n: usize) -> Self {
        Self::new(Family::AffineD, n).expect("valid spec")
    }

    /// Number of generators.
    pub fn rank(&self) -> usize {
        match self.family {
            Family::AffineB => self.n + 2,
            Family::AffineD => self.n + 3,
        }
    }

    /// Largest generator index.
    pub fn max_generator(&self) -> usize {
        self.rank() - 1
    }

    /// Width of the diagram box.
    pub fn box_width(&self) -> usize {
        self.n + 2
    }

    /// Bond order between two generators.
    pub fn m(&self, s: usize, t: usize) -> usize {
        if s == t {
            return 1;
        }
        let (a, b) = if s < t { (s, t) } else { (t, s) };
        let n = self.n;
        match self.family {
            Family::AffineB => {
                if (a == 0 || a == 1) && b == 2 {
                    3
                } else if a == n && b == n + 1 {
                    4
                } else if a >= 2 && b == a + 1 && b <= n {
                    3
                } else {
                    2
                }
            }
            Family::AffineD => {
                let fork = (a <= 1 && b == 2) || (a == n && (b == n + 1 || b == n + 2));
                let chain = a >= 2 && b == a + 1 && b <= n;
                if fork || chain {
                    3
                } else {
                    2
                }
            }
        }
    }

    pub fn commute(&self, s: usize, t: usize) -> bool {
        s != t && self.m(s, t) == 2
    }

    /// Checks every letter of `w` is a generator.
    pub fn check_word(&self, w: &[usize]) -> Result<()> {
        let max = self.max_generator();
        match w.iter().find(|&&s| s > max) {
            Some(&index) => Err(Error::IndexOutOfRange { index, max }),
            None => Ok(()),
        }
    }
}

impl fmt::Display for CoxeterSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(n={})", self.family, self.n)
    }
}

/// The symmetric matrix of bond orders.
pub fn coxeter_matrix(spec: &CoxeterSpec) -> Vec<Vec<usize>> {
    let r = spec.rank();
    (0..r).map(|s| (0..r).map(|t| spec.m(s, t)).collect()).collect()
}

/// The commutation class of `w`.
pub fn commutation_class(w: &[usize], spec: &CoxeterSpec) -> BTreeSet<Word> {
    let mut seen: HashSet<Word> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(w.to_vec());
    queue.push_back(w.to_vec());
    while let Some(u) = queue.pop_front() {
        for i in 0..u.len().saturating_sub(1) {
            if spec.commute(u[i], u[i + 1]) {
                let mut v = u.clone();
                v.swap(i, i + 1);
                if seen.insert(v.clone()) {
                    queue.push_back(v);
                }
            }
        }
    }
    seen.into_iter().collect()
}

/// Generalized Cartan matrix entry `⟨α_i^∨, α_j⟩`; bonds of order 4 are oriented from the lower index.
fn cartan(spec: &CoxeterSpec, i: usize, j: usize) -> i64 {
    match spec.m(i, j) {
        1 => 2,
        2 => 0,
        3 => -1,
        _ if i < j => -1,
        _ => -2,
    }
}

/// Whether `w` is a reduced word: every prefix sends the next simple root to a positive root.
pub fn is_reduced(w: &[usize], spec: &CoxeterSpec) -> Result<bool> {
    spec.check_word(w)?;
    let r = spec.rank();
    for j in 0..w.len() {
        let mut v = vec![0i64; r];
        v[w[j]] = 1;
        for &s in w[..j].iter().rev() {
            let c: i64 = (0..r).map(|t| v[t] * cartan(spec, s, t)).sum();
            v[s] -= c;
        }
        if v.iter().any(|&x| x < 0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `w` is a reduced expression of a fully commutative element.
///
/// Returns `Err(NotReduced)` when `w` is not reduced.
pub fn is_fully_commutative(w: &[usize], spec: &CoxeterSpec) -> Result<bool> {
    spec.check_word(w)?;
    if crate::heap::Heap::from_word_unchecked(w, spec).is_fc_heap() {
        return Ok(true);
    }
    if !is_reduced(w, spec)? {
        return Err(Error::NotReduced);
    }
    Ok(false)
}

/// The lexicographically least word of the commutation class of `w`.
pub fn canonical_word(w: &[usize], spec: &CoxeterSpec) -> Word {
    let mut rest: Vec<usize> = w.to_vec();
    let mut out = Vec::with_capacity(w.len());
    while !rest.is_empty() {
        // candidates: letters that can be moved to the front
        let mut best: Option<usize> = None;
        for (i, &s) in rest.iter().enumerate() {
            if rest[..i].iter().all(|&t| spec.commute(s, t)) && best.is_none_or(|b| s < rest[b]) {
                best = Some(i);
            }
        }
        let i = best.expect("nonempty word has a minimal letter");
        out.push(rest.remove(i));
    }
    out
}

/// Default cap on the number of elements held in one enumeration level.
pub const DEFAULT_FRONTIER_CAP: usize = 5_000_000;

/// All FC elements of length at most `max_len`, grouped by length.
pub fn enumerate_fc(spec: &CoxeterSpec, max_len: usize) -> Result<Vec<Vec<Word>>> {
    enumerate_fc_capped(spec, max_len, DEFAULT_FRONTIER_CAP)
}

/// As [`enumerate_fc`] with an explicit frontier cap.
pub fn enumerate_fc_capped(spec: &CoxeterSpec, max_len: usize, cap: usize) -> Result<Vec<Vec<Word>>> {
    use rayon::prelude::*;
    let mut levels: Vec<Vec<Word>> = vec![vec![Vec::new()]];
    for _ in 0..max_len {
        let prev = levels.last().expect("nonempty");
        let next: BTreeSet<Word> = prev
            .par_iter()
            .flat_map_iter(|w| {
                (0..spec.rank()).filter_map(move |s| {
                    let mut v = w.clone();
                    v.push(s);
                    Heap::from_word_unchecked(&v, spec)
                        .is_fc_heap()
                        .then(|| canonical_word(&v, spec))
                })
            })
            .collect::<Vec<_>>()
            .into_iter()
            .collect();
        if next.len() > cap {
            return Err(Error::ResourceLimit(format!("frontier of {} exceeds cap {cap}", next.len())));
        }
        levels.push(next.into_iter().collect());
    }
    Ok(levels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_b2() {
        let s = CoxeterSpec::b(2);
        assert_eq!(s.m(2, 3), 4);
        assert_eq!(s.m(0, 2), 3);
        assert_eq!(s.m(1, 2), 3);
        assert_eq!(s.m(0, 1), 2);
        assert_eq!(s.m(0, 3), 2);
    }

    #[test]
    fn matrix_d2() {
        let s = CoxeterSpec::d(2);
        assert_eq!(s.m(2, 3), 3);
        assert_eq!(s.m(2, 4), 3);
        assert_eq!(s.m(3, 4), 2);
        assert_eq!(s.m(0, 1), 2);
    }

    #[test]
    fn matrix_symmetric_with_unit_diagonal() {
        for spec in [CoxeterSpec::b(4), CoxeterSpec::d(4)] {
            let m = coxeter_matrix(&spec);
            for s in 0..spec.rank() {
                assert_eq!(m[s][s], 1);
                for t in 0..spec.rank() {
                    assert_eq!(m[s][t], m[t][s]);
                }
            }
        }
    }

    #[test]
    fn chain_bonds_b5() {
        let s = CoxeterSpec::b(5);
        assert_eq!(s.m(2, 3), 3);
        assert_eq!(s.m(4, 5), 3);
        assert_eq!(s.m(5, 6), 4);
        assert_eq!(s.m(2, 4), 2);
    }

    #[test]
    fn small_n_rejected() {
        assert!(CoxeterSpec::new(Family::AffineB, 1).is_err());
    }

    #[test]
    fn fc_examples() {
        let b5 = CoxeterSpec::b(4);
        let w = vec![3, 5, 2, 4, 0, 1, 3, 5, 2, 4, 5];
        assert_eq!(is_fully_commutative(&w, &b5), Ok(true));
        let b = CoxeterSpec::b(3);
        assert_eq!(is_fully_commutative(&[3, 4, 3, 4], &b), Ok(false));
        assert_eq!(is_fully_commutative(&[], &b), Ok(true));
    }

    #[test]
    fn not_reduced_detected() {
        let b = CoxeterSpec::b(2);
        assert_eq!(is_fully_commutative(&[0, 1, 0], &b), Err(Error::NotReduced));
        assert_eq!(is_fully_commutative(&[0, 2, 0, 2], &b), Err(Error::NotReduced));
        assert_eq!(is_fully_commutative(&[2, 0, 2], &b), Ok(false));
    }

    #[test]
    fn out_of_range() {
        let b = CoxeterSpec::b(2);
        assert!(matches!(is_fully_commutative(&[4], &b), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn canonical_is_class_minimum() {
        let b = CoxeterSpec::b(3);
        let w = vec![3, 0, 1, 2, 4];
        let class = commutation_class(&w, &b);
        assert_eq!(&canonical_word(&w, &b), class.iter().next().unwrap());
        for u in &class {
            assert_eq!(canonical_word(u, &b), canonical_word(&w, &b));
        }
    }

    #[test]
    fn enumerate_small() {
        let b = CoxeterSpec::b(2);
        let l = enumerate_fc(&b, 1).unwrap();
        assert_eq!(l[0], vec![Vec::<usize>::new()]);
        assert_eq!(l[1], vec![vec![0], vec![1], vec![2], vec![3]]);
    }
}
