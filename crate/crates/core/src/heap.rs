//! Heaps of words, the alternating test, the five-family classification and Δ_D.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::coxeter::{canonical_word, is_reduced, CoxeterSpec, Family, Word};
use crate::error::{Error, Result};

/// A labeled poset with elements stored in the lexicographically least linear extension.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Heap {
    spec: CoxeterSpec,
    labels: Vec<usize>,
    /// `less[i][j]` iff element `i` precedes element `j`.
    less: Vec<Vec<bool>>,
}

/// The five heap families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyTag {
    #[serde(rename = "ALT")]
    Alt,
    #[serde(rename = "PZZ")]
    Pzz,
    #[serde(rename = "LP")]
    Lp,
    #[serde(rename = "RP")]
    Rp,
    #[serde(rename = "LRP")]
    Lrp,
}

impl std::fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            FamilyTag::Alt => "ALT",
            FamilyTag::Pzz => "PZZ",
            FamilyTag::Lp => "LP",
            FamilyTag::Rp => "RP",
            FamilyTag::Lrp => "LRP",
        };
        f.write_str(s)
    }
}

impl FamilyTag {
    /// LP, RP or LRP.
    pub fn is_peak(self) -> bool {
        matches!(self, FamilyTag::Lp | FamilyTag::Rp | FamilyTag::Lrp)
    }
}

/// A family tag with its peak positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HeapFamily {
    pub tag: FamilyTag,
    pub j_l: Option<usize>,
    pub j_r: Option<usize>,
}

impl HeapFamily {
    fn plain(tag: FamilyTag) -> Self {
        HeapFamily { tag, j_l: None, j_r: None }
    }
}

/// Serializable form of a heap.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeapJson {
    pub labels: Vec<usize>,
    pub covers: Vec<[usize; 2]>,
}

impl Heap {
    /// The heap of a reduced word.
    pub fn from_word(w: &[usize], spec: &CoxeterSpec) -> Result<Heap> {
        spec.check_word(w)?;
        let h = Heap::from_word_unchecked(w, spec);
        if h.has_convex_square() || (!h.is_fc_heap() && !is_reduced(w, spec)?) {
            return Err(Error::NotReduced);
        }
        Ok(h)
    }

    /// The heap of `w` without checking reducedness.
    pub fn from_word_unchecked(w: &[usize], spec: &CoxeterSpec) -> Heap {
        let canon = canonical_word(w, spec);
        let m = canon.len();
        let mut less = vec![vec![false; m]; m];
        for j in 0..m {
            for i in (0..j).rev() {
                if less[i][j] {
                    continue;
                }
                if !spec.commute(canon[i], canon[j]) {
                    less[i][j] = true;
                    for row in less.iter_mut().take(i) {
                        if row[i] {
                            row[j] = true;
                        }
                    }
                }
            }
        }
        Heap { spec: *spec, labels: canon, less }
    }

    /// Builds a heap from explicit labels and an order relation, canonicalizing element order.
    fn from_poset(spec: &CoxeterSpec, labels: Vec<usize>, less: Vec<Vec<bool>>) -> Heap {
        let m = labels.len();
        let mut used = vec![false; m];
        let mut order = Vec::with_capacity(m);
        for _ in 0..m {
            let next = (0..m)
                .filter(|&j| !used[j] && (0..m).all(|i| used[i] || !less[i][j]))
                .min_by_key(|&j| (labels[j], j))
                .expect("poset is acyclic");
            used[next] = true;
            order.push(next);
        }
        let new_labels = order.iter().map(|&i| labels[i]).collect();
        let new_less = order.iter().map(|&i| order.iter().map(|&j| less[i][j]).collect()).collect();
        Heap { spec: *spec, labels: new_labels, less: new_less }
    }

    pub fn empty(spec: &CoxeterSpec) -> Heap {
        Heap { spec: *spec, labels: Vec::new(), less: Vec::new() }
    }

    pub fn spec(&self) -> &CoxeterSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Labels in canonical linear order.
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// The canonical word (lexicographically least linear extension).
    pub fn word(&self) -> Word {
        self.labels.clone()
    }

    pub fn precedes(&self, i: usize, j: usize) -> bool {
        self.less[i][j]
    }

    /// Cover relations `(i, j)` with `i ⋖ j`.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let m = self.len();
        let mut out = Vec::new();
        for i in 0..m {
            for j in 0..m {
                if self.less[i][j] && !(0..m).any(|z| self.less[i][z] && self.less[z][j]) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Cartier–Foata layers, top first, each a sorted list of labels.
    pub fn layers(&self) -> Vec<Vec<usize>> {
        let m = self.len();
        let mut depth = vec![0usize; m];
        for j in 0..m {
            for i in 0..j {
                if self.less[i][j] {
                    depth[j] = depth[j].max(depth[i] + 1);
                }
            }
        }
        let nl = depth.iter().map(|d| d + 1).max().unwrap_or(0);
        let mut layers = vec![Vec::new(); nl];
        for j in 0..m {
            layers[depth[j]].push(self.labels[j]);
        }
        for l in &mut layers {
            l.sort_unstable();
        }
        layers
    }

    pub fn to_json(&self) -> HeapJson {
        HeapJson {
            labels: self.labels.clone(),
            covers: self.covers().into_iter().map(|(i, j)| [i, j]).collect(),
        }
    }

    /// Elements whose labels lie in `labels`.
    fn elements_with(&self, labels: &BTreeSet<usize>) -> Vec<usize> {
        (0..self.len()).filter(|&i| labels.contains(&self.labels[i])).collect()
    }

    /// The subheap induced by the elements with labels in `labels`.
    pub fn subheap(&self, labels: &BTreeSet<usize>) -> Heap {
        let idx = self.elements_with(labels);
        let lab = idx.iter().map(|&i| self.labels[i]).collect();
        let less = idx.iter().map(|&i| idx.iter().map(|&j| self.less[i][j]).collect()).collect();
        Heap::from_poset(&self.spec, lab, less)
    }

    /// Elements of the chain `H_{s,t}` in order.
    fn chain(&self, s: usize, t: usize) -> Vec<usize> {
        let mut c: Vec<usize> = (0..self.len()).filter(|&i| self.labels[i] == s || self.labels[i] == t).collect();
        c.sort_by(|&a, &b| {
            if self.less[a][b] {
                std::cmp::Ordering::Less
            } else if self.less[b][a] {
                std::cmp::Ordering::Greater
            } else {
                a.cmp(&b)
            }
        });
        c
    }

    fn interval(&self, x: usize, y: usize) -> Vec<usize> {
        (0..self.len()).filter(|&z| z == x || z == y || (self.less[x][z] && self.less[z][y])).collect()
    }

    fn has_convex_square(&self) -> bool {
        for x in 0..self.len() {
            for y in x + 1..self.len() {
                if self.labels[x] == self.labels[y] && self.less[x][y] && self.interval(x, y).len() == 2 {
                    return true;
                }
            }
        }
        false
    }

    /// Whether this is the heap of a reduced expression of an FC element.
    pub fn is_fc_heap(&self) -> bool {
        if self.has_convex_square() {
            return false;
        }
        let r = self.spec.rank();
        for s in 0..r {
            for t in s + 1..r {
                let m = self.spec.m(s, t);
                if m < 3 {
                    continue;
                }
                let c = self.chain(s, t);
                if c.len() < m {
                    continue;
                }
                for win in c.windows(m) {
                    let alternates = win.windows(2).all(|p| self.labels[p[0]] != self.labels[p[1]]);
                    if alternates && self.interval(win[0], win[m - 1]).len() == m {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Alternation of chains, collapsing consecutive elements whose label is in `identified`.
    ///
    /// With `one_column`, s₀ and s₁ share a column and their chains with s₂ are read jointly.
    fn alternating_with(&self, identified: &[usize], one_column: bool) -> bool {
        let r = self.spec.rank();
        let col = |l: usize| if one_column && l <= 1 { 0 } else { l };
        for s in 0..r {
            for t in s + 1..r {
                if self.spec.commute(s, t) || (one_column && s <= 1) {
                    continue;
                }
                let mut labs: Vec<usize> = self.chain(s, t).into_iter().map(|i| self.labels[i]).collect();
                labs.dedup_by(|a, b| a == b && identified.contains(a));
                if labs.windows(2).any(|p| p[0] == p[1]) {
                    return false;
                }
            }
        }
        if one_column {
            let mut c: Vec<usize> = (0..self.len()).filter(|&i| self.labels[i] <= 2).collect();
            c.sort_by(|&a, &b| {
                if self.less[a][b] {
                    std::cmp::Ordering::Less
                } else if self.less[b][a] {
                    std::cmp::Ordering::Greater
                } else {
                    a.cmp(&b)
                }
            });
            let mut labs: Vec<usize> = c.into_iter().map(|i| col(self.labels[i])).collect();
            labs.dedup_by(|a, b| a == b && (*a == 0 || identified.contains(a)));
            if labs.windows(2).any(|p| p[0] == p[1]) {
                return false;
            }
        }
        true
    }

    /// The alternating test; in type B̃ the 1-elements are read as one column.
    pub fn is_alternating(&self) -> bool {
        match self.spec.family {
            Family::AffineB => self.alternating_b(&[]),
            Family::AffineD => self.alternating_with(&[], false),
        }
    }

    /// Groups of 1-elements: indices of s₀/s₁ elements sharing a gap between s₂-elements.
    pub fn one_elements(&self) -> Vec<Vec<usize>> {
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let ones: Vec<usize> = (0..self.len()).filter(|&i| self.labels[i] <= 1).collect();
        let twos: Vec<usize> = (0..self.len()).filter(|&i| self.labels[i] == 2).collect();
        let gap = |i: usize| twos.iter().filter(|&&z| self.less[z][i]).count();
        for i in ones {
            let g = gap(i);
            match groups.iter_mut().find(|grp| gap(grp[0]) == g) {
                Some(grp) => grp.push(i),
                None => groups.push(vec![i]),
            }
        }
        groups.sort_by_key(|g| gap(g[0]));
        groups
    }

    /// Alternation plus the 1-element condition of type B̃.
    fn alternating_b(&self, identified: &[usize]) -> bool {
        if !self.alternating_with(identified, true) {
            return false;
        }
        let groups = self.one_elements();
        if groups.len() >= 2 {
            if groups.iter().any(|g| g.len() != 1) {
                return false;
            }
            let labs: Vec<usize> = groups.iter().map(|g| self.labels[g[0]]).collect();
            if labs.windows(2).any(|p| p[0] == p[1]) {
                return false;
            }
        }
        true
    }


    fn nothing_between(&self, s: usize, other: usize) -> bool {
        let xs: Vec<usize> = (0..self.len()).filter(|&i| self.labels[i] == s).collect();
        if xs.len() != 2 {
            return false;
        }
        let (a, b) = if self.less[xs[0]][xs[1]] { (xs[0], xs[1]) } else { (xs[1], xs[0]) };
        let blocks = |l: usize| l == other || (other == 1 && l == 0);
        !(0..self.len()).any(|z| blocks(self.labels[z]) && self.less[a][z] && self.less[z][b])
    }

    fn range(a: usize, b: usize) -> BTreeSet<usize> {
        (a..=b).collect()
    }

    fn left_peak_word(j: usize) -> Word {
        let mut w: Word = (2..=j).rev().collect();
        w.extend([0, 1]);
        w.extend(2..=j);
        w
    }

    fn right_peak_word(j: usize, n: usize) -> Word {
        let mut w: Word = (j..=n + 1).collect();
        w.extend((j..=n).rev());
        w
    }

    fn lp12(&self, j: usize) -> bool {
        let sub = self.subheap(&Self::range(0, j));
        sub == Heap::from_word_unchecked(&Self::left_peak_word(j), &self.spec) && self.nothing_between(j, j + 1)
    }

    fn rp12(&self, j: usize) -> bool {
        let n = self.spec.n;
        let sub = self.subheap(&Self::range(j, n + 1));
        sub == Heap::from_word_unchecked(&Self::right_peak_word(j, n), &self.spec) && self.nothing_between(j, j - 1)
    }

    /// Whether this B̃ heap is a pseudo zigzag: a factor of the infinite periodic heap.
    ///
    /// Factors are differences `J \ I` of order ideals, so a fork s₀s₁ may be cut at either end.
    pub fn is_pzz(&self) -> bool {
        let n = self.spec.n;
        let len = self.len();
        if self.spec.family != Family::AffineB || len == 0 {
            return false;
        }
        let mut period: Word = vec![0, 1];
        period.extend(2..=n + 1);
        period.extend((2..=n).rev());
        let pl = period.len();
        let total = len + 2 * pl;
        let w: Word = (0..total).map(|i| period[i % pl]).collect();
        let big = Heap::from_word_unchecked(&w, &self.spec);
        let ideals = big.order_ideals();
        for i in &ideals {
            let a = i.iter().filter(|&&b| b).count();
            if a >= pl {
                continue;
            }
            for j in ideals.iter().filter(|j| j.iter().filter(|&&b| b).count() == a + len) {
                if !i.iter().zip(j).all(|(&x, &y)| !x || y) {
                    continue;
                }
                let members: Vec<usize> = (0..big.len()).filter(|&e| j[e] && !i[e]).collect();
                if !big.has_full_peak(&members) || !big.has_full_fork(&members) {
                    continue;
                }
                let u: Word = members.iter().map(|&e| big.labels[e]).collect();
                if Heap::from_word_unchecked(&u, &self.spec) == *self {
                    return true;
                }
            }
        }
        false
    }

    /// All order ideals (down-closed from the top) as membership vectors.
    fn order_ideals(&self) -> Vec<Vec<bool>> {
        let m = self.len();
        let mut seen: HashSet<Vec<bool>> = HashSet::new();
        let mut stack = vec![vec![false; m]];
        seen.insert(vec![false; m]);
        while let Some(ideal) = stack.pop() {
            for e in 0..m {
                if !ideal[e] && (0..m).all(|z| !self.less[z][e] || ideal[z]) {
                    let mut next = ideal.clone();
                    next[e] = true;
                    if seen.insert(next.clone()) {
                        stack.push(next);
                    }
                }
            }
        }
        seen.into_iter().collect()
    }

    fn has_full_peak(&self, members: &[usize]) -> bool {
        let n = self.spec.n;
        members.iter().any(|&t| {
            self.labels[t] == n + 1
                && [true, false].iter().all(|&above| {
                    members.iter().any(|&z| {
                        self.labels[z] == n && if above { self.less[z][t] } else { self.less[t][z] }
                    })
                })
        })
    }

    fn has_full_fork(&self, members: &[usize]) -> bool {
        members.iter().any(|&a| {
            self.labels[a] == 0
                && members.iter().any(|&b| self.labels[b] == 1 && !self.less[a][b] && !self.less[b][a])
        })
    }

    /// Family classification of an FC heap of type B̃.
    pub fn classify_family_b(&self) -> Result<HeapFamily> {
        if self.spec.family != Family::AffineB || !self.is_fc_heap() {
            return Err(Error::NotFc);
        }
        let n = self.spec.n;
        if self.is_pzz() {
            return Ok(HeapFamily::plain(FamilyTag::Pzz));
        }
        let lp: Vec<usize> = (2..=n).filter(|&j| self.lp12(j)).collect();
        let rp: Vec<usize> = (2..=n).filter(|&j| self.rp12(j)).collect();
        for &jl in &lp {
            for &jr in rp.iter().filter(|&&jr| jr > jl) {
                if self.subheap(&Self::range(jl, jr)).alternating_with(&[jl, jr], false) {
                    return Ok(HeapFamily { tag: FamilyTag::Lrp, j_l: Some(jl), j_r: Some(jr) });
                }
            }
        }
        for &jl in &lp {
            if self.subheap(&Self::range(jl, n + 1)).alternating_with(&[jl], false) {
                return Ok(HeapFamily { tag: FamilyTag::Lp, j_l: Some(jl), j_r: None });
            }
        }
        for &jr in &rp {
            if self.subheap(&Self::range(0, jr)).alternating_with(&[jr], true) {
                return Ok(HeapFamily { tag: FamilyTag::Rp, j_l: None, j_r: Some(jr) });
            }
        }
        if self.alternating_b(&[]) {
            return Ok(HeapFamily::plain(FamilyTag::Alt));
        }
        Err(Error::NotFc)
    }

    /// Δ_D: the type D̃ heaps obtained from this FC heap of type B̃.
    pub fn delta_d(&self) -> Result<Vec<Heap>> {
        let fam = self.classify_family_b()?;
        let n = self.spec.n;
        let dspec = CoxeterSpec { family: Family::AffineD, n };
        let w = self.word();
        let (t1, t2) = (n + 1, n + 2);
        let pos: Vec<usize> = (0..w.len()).filter(|&i| w[i] == n + 1).collect();
        let build = |choices: &[Vec<usize>]| -> Heap {
            let mut out = Vec::new();
            let mut k = 0;
            for &s in &w {
                if s == n + 1 {
                    out.extend(&choices[k]);
                    k += 1;
                } else {
                    out.push(s);
                }
            }
            Heap::from_word_unchecked(&out, &dspec)
        };
        let mut result: Vec<Heap> = Vec::new();
        match fam.tag {
            FamilyTag::Rp | FamilyTag::Lrp => {
                result.push(build(&vec![vec![t1, t2]; pos.len()]));
            }
            FamilyTag::Pzz => {
                let first_min = pos.first().map(|&p| self.is_minimal(p)).unwrap_or(false);
                let last_max = pos.last().map(|&p| self.is_maximal(p)).unwrap_or(false);
                let opts = |edge: bool| -> Vec<Vec<usize>> {
                    if edge {
                        vec![vec![t1, t2], vec![t1], vec![t2]]
                    } else {
                        vec![vec![t1, t2]]
                    }
                };
                let m = pos.len();
                let firsts = opts(first_min);
                let lasts = if m > 1 { opts(last_max) } else { vec![vec![]] };
                for f in &firsts {
                    for l in &lasts {
                        let mut ch = vec![vec![t1, t2]; m];
                        ch[0] = f.clone();
                        if m > 1 {
                            ch[m - 1] = l.clone();
                        }
                        result.push(build(&ch));
                    }
                }
            }
            FamilyTag::Alt | FamilyTag::Lp => {
                // runs of s_{n+1}-elements not separated by two s_n-elements
                let mut runs: Vec<usize> = Vec::new();
                for (k, &p) in pos.iter().enumerate() {
                    let split = k > 0 && w[pos[k - 1]..p].iter().filter(|&&l| l == n).count() >= 2;
                    if k == 0 || split {
                        runs.push(1);
                    } else {
                        *runs.last_mut().expect("run started") += 1;
                    }
                }
                let mut choices: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
                for &len in &runs {
                    let options: Vec<Vec<Vec<usize>>> = if len == 1 {
                        vec![vec![vec![t1, t2]], vec![vec![t1]], vec![vec![t2]]]
                    } else {
                        [t1, t2]
                            .iter()
                            .map(|&start| {
                                (0..len).map(|k| vec![if k % 2 == 0 { start } else { t1 + t2 - start }]).collect()
                            })
                            .collect()
                    };
                    choices = choices
                        .iter()
                        .flat_map(|prefix| {
                            options.iter().map(move |o| {
                                let mut c = prefix.clone();
                                c.extend(o.iter().cloned());
                                c
                            })
                        })
                        .collect();
                }
                for ch in choices {
                    result.push(build(&ch));
                }
            }
        }
        Ok(result)
    }

    fn is_minimal(&self, i: usize) -> bool {
        (0..self.len()).all(|z| !self.less[z][i])
    }

    fn is_maximal(&self, i: usize) -> bool {
        (0..self.len()).all(|z| !self.less[i][z])
    }

    /// The type B̃ heap whose Δ_D image could contain this type D̃ heap.
    pub fn fold_to_b(&self) -> Result<Heap> {
        let n = self.spec.n;
        let w = self.word();
        let ns: Vec<usize> = (0..self.len()).filter(|&i| self.labels[i] == n).collect();
        let gap = |i: usize| ns.iter().filter(|&&z| self.less[z][i]).count();
        let mut seen_gaps = BTreeSet::new();
        let mut out = Vec::new();
        for (i, &s) in w.iter().enumerate() {
            if s == n + 1 || s == n + 2 {
                if seen_gaps.insert(gap(i)) {
                    out.push(n + 1);
                }
            } else {
                out.push(s);
            }
        }
        let bspec = CoxeterSpec { family: Family::AffineB, n };
        let h = Heap::from_word_unchecked(&out, &bspec);
        if !h.is_fc_heap() {
            return Err(Error::NotFc);
        }
        Ok(h)
    }

    /// Family classification of an FC heap of type D̃.
    pub fn classify_family_d(&self) -> Result<HeapFamily> {
        if self.spec.family != Family::AffineD || !self.is_fc_heap() {
            return Err(Error::NotFc);
        }
        let hb = self.fold_to_b()?;
        let fam = hb.classify_family_b()?;
        if hb.delta_d()?.contains(self) {
            Ok(fam)
        } else {
            Err(Error::NotFc)
        }
    }

    /// Family classification for either type.
    pub fn classify_family(&self) -> Result<HeapFamily> {
        match self.spec.family {
            Family::AffineB => self.classify_family_b(),
            Family::AffineD => self.classify_family_d(),
        }
    }

    /// ASCII Hasse rendering: one row per layer, one column per generator, top = leftmost letters.
    pub fn render_ascii(&self) -> String {
        let r = self.spec.rank();
        let width = format!("{}", r - 1).len() + 1;
        let mut s = String::new();
        for layer in self.layers() {
            let mut row = String::new();
            for g in 0..r {
                let cell = if layer.contains(&g) { format!("s{g}") } else { ".".to_string() };
                row.push_str(&format!("{cell:<w$} ", w = width + 1));
            }
            s.push_str(row.trim_end());
            s.push('\n');
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hb(n: usize, w: &[usize]) -> Heap {
        Heap::from_word(w, &CoxeterSpec::b(n)).unwrap()
    }

    #[test]
    fn example_u() {
        let h = hb(2, &[0, 2, 1, 3, 2]);
        assert_eq!(h.len(), 5);
        let i0 = h.labels().iter().position(|&l| l == 0).unwrap();
        let i1 = h.labels().iter().position(|&l| l == 1).unwrap();
        let i2 = h.labels().iter().position(|&l| l == 2).unwrap();
        assert!(h.precedes(i0, i2));
        assert!(!h.precedes(i1, i2));
        assert!(h.is_alternating());
    }

    #[test]
    fn commuting_pair_same_heap() {
        assert_eq!(hb(2, &[0, 1]), hb(2, &[1, 0]));
        assert_eq!(hb(2, &[0]).len(), 1);
    }

    #[test]
    fn subheap_chain() {
        let h = hb(4, &[3, 5, 2, 4, 0, 1, 3, 5, 2, 4, 5]);
        let sub = h.subheap(&[4, 5].into_iter().collect());
        assert_eq!(sub.len(), 5);
        assert_eq!(h.subheap(&BTreeSet::new()).len(), 0);
        assert_eq!(h.subheap(&(0..6).collect()), h);
        assert!(h.is_alternating());
    }

    #[test]
    fn not_alternating_peak() {
        assert!(!hb(3, &[3, 4, 3]).is_alternating());
        assert!(Heap::empty(&CoxeterSpec::b(2)).is_alternating());
    }

    #[test]
    fn families() {
        let n = 3;
        // PZZ word s_i..s_n (s_{n+1}..s_2 s0 s1 s2..s_n)^k s_{n+1}..s_j
        let w = vec![2, 3, 4, 3, 2, 0, 1, 2, 3, 4, 3];
        assert_eq!(hb(n, &w).classify_family_b().unwrap().tag, FamilyTag::Pzz);
        let lp = hb(n, &[3, 2, 0, 1, 2, 3]).classify_family_b().unwrap();
        assert_eq!((lp.tag, lp.j_l), (FamilyTag::Lp, Some(3)));
        assert_eq!(hb(n, &[2]).classify_family_b().unwrap().tag, FamilyTag::Alt);
        let rp = hb(n, &[3, 4, 3]).classify_family_b().unwrap();
        assert_eq!((rp.tag, rp.j_r), (FamilyTag::Rp, Some(3)));
    }

    #[test]
    fn special_right_peak_is_pzz() {
        assert_eq!(hb(2, &[0, 1, 2, 3, 2]).classify_family_b().unwrap().tag, FamilyTag::Pzz);
    }

    #[test]
    fn delta_examples() {
        let n = 2;
        let h = hb(n, &[0, 2]);
        assert_eq!(h.delta_d().unwrap().len(), 1);
        let h = hb(n, &[3]);
        let d = h.delta_d().unwrap();
        let ds = CoxeterSpec::d(n);
        assert_eq!(d.len(), 3);
        assert!(d.contains(&Heap::from_word(&[3, 4], &ds).unwrap()));
        assert!(d.contains(&Heap::from_word(&[3], &ds).unwrap()));
        assert!(d.contains(&Heap::from_word(&[4], &ds).unwrap()));
        let h = hb(n, &[2, 3, 2]);
        let d = h.delta_d().unwrap();
        assert_eq!(d, vec![Heap::from_word(&[2, 3, 4, 2], &ds).unwrap()]);
    }

    #[test]
    fn d_classification_mirrors() {
        let ds = CoxeterSpec::d(2);
        for w in [vec![3, 4], vec![3], vec![2, 3, 4, 2], vec![0, 2]] {
            let h = Heap::from_word(&w, &ds).unwrap();
            assert!(h.classify_family_d().is_ok(), "{w:?}");
        }
        assert_eq!(Heap::from_word(&[2, 3, 4, 2], &ds).unwrap().classify_family_d().unwrap().tag, FamilyTag::Rp);
    }

    #[test]
    fn layers_canonical() {
        let h = hb(2, &[0, 1, 2]);
        assert_eq!(h.layers(), vec![vec![0, 1], vec![2]]);
    }
}
