//! Independent brute-force oracles, sharing no code with the library beyond the bond orders.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};

/// Bond order table for B̃ (family 'B') or D̃ (family 'D'), built from the Coxeter graph edges.
pub fn bonds(family: char, n: usize) -> Vec<Vec<usize>> {
    let r = if family == 'B' { n + 2 } else { n + 3 };
    let mut m = vec![vec![2; r]; r];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
    }
    let mut edge = |a: usize, b: usize, v: usize| {
        m[a][b] = v;
        m[b][a] = v;
    };
    edge(0, 2, 3);
    edge(1, 2, 3);
    for i in 2..n {
        edge(i, i + 1, 3);
    }
    if family == 'B' {
        edge(n, n + 1, 4);
    } else {
        edge(n, n + 1, 3);
        edge(n, n + 2, 3);
    }
    m
}

fn class_of(w: &[usize], m: &[Vec<usize>]) -> BTreeSet<Vec<usize>> {
    let mut seen = HashSet::new();
    let mut q = VecDeque::new();
    seen.insert(w.to_vec());
    q.push_back(w.to_vec());
    while let Some(u) = q.pop_front() {
        for i in 0..u.len().saturating_sub(1) {
            if u[i] != u[i + 1] && m[u[i]][u[i + 1]] == 2 {
                let mut v = u.clone();
                v.swap(i, i + 1);
                if seen.insert(v.clone()) {
                    q.push_back(v);
                }
            }
        }
    }
    seen.into_iter().collect()
}

fn bad(u: &[usize], m: &[Vec<usize>]) -> bool {
    for i in 0..u.len() {
        if i + 1 < u.len() && u[i] == u[i + 1] {
            return true;
        }
        if i + 1 < u.len() {
            let (s, t) = (u[i], u[i + 1]);
            let b = m[s][t];
            if s != t && b >= 3 && i + b <= u.len() && (0..b).all(|k| u[i + k] == if k % 2 == 0 { s } else { t }) {
                return true;
            }
        }
    }
    false
}

/// Whether `w` is a reduced FC word: no class member has `ss` or a braid factor.
pub fn oracle_is_fc(w: &[usize], m: &[Vec<usize>]) -> bool {
    class_of(w, m).iter().all(|u| !bad(u, m))
}

/// FC elements by length, each represented by the least word of its commutation class.
pub fn oracle_fc_levels(family: char, n: usize, max_len: usize) -> Vec<BTreeSet<Vec<usize>>> {
    let m = bonds(family, n);
    let r = m.len();
    let mut levels: Vec<BTreeSet<Vec<usize>>> = vec![[Vec::new()].into_iter().collect()];
    for _ in 0..max_len {
        let mut next = BTreeSet::new();
        for w in levels.last().unwrap() {
            for s in 0..r {
                let mut v = w.clone();
                v.push(s);
                let class = class_of(&v, &m);
                if class.iter().all(|u| !bad(u, &m)) {
                    next.insert(class.into_iter().next().unwrap());
                }
            }
        }
        levels.push(next);
    }
    levels
}

/// All words of length `len` over `r` letters.
pub fn all_words(r: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w: Vec<usize>| {
                (0..r).map(move |s| {
                    let mut v = w.clone();
                    v.push(s);
                    v
                })
            })
            .collect();
    }
    out
}
