//! Admissibility, diagram families, edge weights and the length function.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::coxeter::{CoxeterSpec, Family};
use crate::diagram::{reduce_diagram, Decoration, Diagram, Edge, HeightRef, Node, Obj};
use crate::error::{Error, Result};
use crate::heap::FamilyTag;

/// Relative order of the extreme L• loops and the extreme right markers of a PZZ-diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PzzType {
    /// Highest right marker above the highest L•, lowest L• above the lowest right marker.
    #[serde(rename = "RR")]
    RightRight,
    #[serde(rename = "RL")]
    RightLeft,
    #[serde(rename = "LR")]
    LeftRight,
    #[serde(rename = "LL")]
    LeftLeft,
}

impl PzzType {
    /// Printable form for a family, e.g. `⟨△•⟩` or `⟨○•⟩`.
    pub fn symbol(self, family: Family) -> String {
        let r = match family {
            Family::AffineB => '△',
            Family::AffineD => '○',
        };
        let (x, y) = match self {
            PzzType::RightRight => (r, r),
            PzzType::RightLeft => (r, '•'),
            PzzType::LeftRight => ('•', r),
            PzzType::LeftLeft => ('•', '•'),
        };
        format!("⟨{x}{y}⟩")
    }
}

/// Family of an admissible diagram with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AdmissibleClass {
    pub tag: FamilyTag,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pzz_type: Option<PzzType>,
    /// Number of L• loops.
    pub l: usize,
    /// Number of right markers: △ on the rightmost propagating edge, or L○ loops.
    pub r: usize,
    /// North cup `{i,i+1}` of a PZZ-diagram.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i: Option<usize>,
    /// South cap `{j',(j+1)'}` of a PZZ-diagram.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j_l: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j_r: Option<usize>,
}

impl fmt::Display for AdmissibleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tag)?;
        match self.tag {
            FamilyTag::Pzz => write!(
                f,
                " l={} r={} i={} j={}",
                self.l,
                self.r,
                self.i.unwrap_or(0),
                self.j.unwrap_or(0)
            ),
            FamilyTag::Lp => write!(f, " j_l={}", self.j_l.unwrap_or(0)),
            FamilyTag::Rp => write!(f, " j_r={}", self.j_r.unwrap_or(0)),
            FamilyTag::Lrp => write!(f, " j_l={} j_r={}", self.j_l.unwrap_or(0), self.j_r.unwrap_or(0)),
            FamilyTag::Alt => Ok(()),
        }
    }
}

/// Outcome of [`is_admissible`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    /// The first violated clause.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<String>,
}

impl AdmissibilityReport {
    fn ok() -> Self {
        AdmissibilityReport { admissible: true, violation: None }
    }

    fn fail(msg: impl Into<String>) -> Self {
        AdmissibilityReport { admissible: false, violation: Some(msg.into()) }
    }
}

fn right_mark(family: Family) -> Decoration {
    match family {
        Family::AffineB => Decoration::Tri,
        Family::AffineD => Decoration::Circ,
    }
}

fn check_spec(d: &Diagram, spec: &CoxeterSpec) -> Result<()> {
    if d.k() != spec.box_width() {
        return Err(Error::WidthMismatch(d.k(), spec.box_width()));
    }
    if spec.family == Family::AffineD && d.edges().iter().flat_map(|e| &e.decor).chain(d.loops().iter().flatten()).any(|&x| x == Decoration::Tri)
    {
        return Err(Error::InvalidSpec("△ does not occur in type D".into()));
    }
    Ok(())
}

/// Loop kinds.
fn is_loop(l: &[Decoration], pattern: &[Decoration]) -> bool {
    l == pattern || (l.len() == 2 && pattern.len() == 2 && l[0] == pattern[1] && l[1] == pattern[0])
}

fn count_loops(d: &Diagram, pattern: &[Decoration]) -> usize {
    d.loops().iter().filter(|l| is_loop(l, pattern)).count()
}

fn vertical_at(d: &Diagram, i: usize) -> Option<&Edge> {
    let e = &d.edges()[d.edge_at(Node::N(i))];
    (e.b == Node::S(i)).then_some(e)
}

fn plain_vertical(d: &Diagram, i: usize) -> bool {
    vertical_at(d, i).is_some_and(|e| e.decor.is_empty())
}

fn alternating(v: &[Decoration]) -> bool {
    v.windows(2).all(|p| p[0].is_left() != p[1].is_left())
}

/// Checks the admissibility clauses; the report names the first violated one.
///
/// The clauses on the sides of a diagram with one cup are only partly stated in prose, so the final
/// check asks that [`factorize`](crate::factor::factorize) returns a word mapping back onto `d`.
pub fn is_admissible(d: &Diagram, spec: &CoxeterSpec) -> AdmissibilityReport {
    let rep = check_clauses(d, spec);
    if rep.admissible && crate::factor::factorize(d, spec).is_err() {
        return AdmissibilityReport::fail("no reduced FC word maps to the diagram");
    }
    rep
}

/// The stated clauses, without the realizability check.
pub(crate) fn check_clauses(d: &Diagram, spec: &CoxeterSpec) -> AdmissibilityReport {
    if let Err(e) = check_spec(d, spec) {
        return AdmissibilityReport::fail(e.to_string());
    }
    let rep = match spec.family {
        Family::AffineB => admissible_b(d, spec),
        Family::AffineD => admissible_d(d, spec),
    };
    if !rep.admissible {
        return rep;
    }
    match reduce_diagram(d, spec.family) {
        Ok(r) if r.coeff.is_one() && r.diagram.canonical_key() == d.canonical_key() => rep,
        _ => AdmissibilityReport::fail("the diagram is reducible"),
    }
}

fn admissible_b(d: &Diagram, spec: &CoxeterSpec) -> AdmissibilityReport {
    use Decoration::*;
    let k = d.k();
    let a = d.a_count();
    if a == 0 {
        return if d.is_identity() { AdmissibilityReport::ok() } else { AdmissibilityReport::fail("(D0) decorations without cups") };
    }
    let ld = count_loops(d, &[Dot]);
    let ldt = count_loops(d, &[Dot, Tri]);
    if ld + ldt != d.loops().len() {
        return AdmissibilityReport::fail("only L• and L•△ loops are allowed");
    }
    if ld > 0 && ldt > 0 {
        return AdmissibilityReport::fail("loops must be of a single type");
    }
    if a > 1 {
        if ld > 1 {
            return AdmissibilityReport::fail("at most one L• when a(D)>1");
        }
        let dots: usize = d.edges().iter().map(|e| e.decor.iter().filter(|&&x| x == Dot).count()).sum();
        let circs: usize = d.edges().iter().map(|e| e.decor.iter().filter(|&&x| x == Circ).count()).sum();
        if !(dots + ldt).is_multiple_of(2) {
            return AdmissibilityReport::fail("the number of L•△ and • on edges must be even");
        }
        if circs != 0 && circs != 2 {
            return AdmissibilityReport::fail("the number of ○ must be zero or two");
        }
        let dammed = d.edges().iter().any(|e| e.is_propagating());
        if !dammed {
            for nd in [Node::N(k), Node::S(k)] {
                let e = &d.edges()[d.edge_at(nd)];
                if e.decor.last() != Some(&Circ) {
                    return AdmissibilityReport::fail("the edges at the last nodes must end with ○");
                }
            }
        }
        if let Some(e) = vertical_at(d, 1) {
            let ok = e.decor.is_empty()
                || e.decor == [Tri]
                || (e.decor.iter().all(|&x| x != Circ) && alternating(&e.decor) && d.loops().is_empty());
            if !ok {
                return AdmissibilityReport::fail("invalid decoration on {1,1'}");
            }
        }
        match vertical_at(d, k) {
            Some(e) => {
                let ok = e.decor.is_empty()
                    || e.decor == [Tri]
                    || (alternating(&e.decor) && e.decor.first() == Some(&Circ) && e.decor.last() == Some(&Circ));
                if !ok {
                    return AdmissibilityReport::fail("(A4') invalid decoration on the last vertical edge");
                }
            }
            None => {
                for nd in [Node::N(k), Node::S(k)] {
                    let e = &d.edges()[d.edge_at(nd)];
                    if e.decor.iter().filter(|&&x| x == Circ).count() != 1 {
                        return AdmissibilityReport::fail("(A4') a unique ○ on each edge at the last nodes");
                    }
                }
            }
        }
        for e in d.edges() {
            if !alternating(&e.decor) {
                return AdmissibilityReport::fail("adjacent decorations of one side on an edge");
            }
        }
        if let Some(v) = mixed_edge_violation(d) {
            return v;
        }
        return AdmissibilityReport::ok();
    }
    one_cup_sides(d, spec, ldt)
}

fn admissible_d(d: &Diagram, spec: &CoxeterSpec) -> AdmissibilityReport {
    use Decoration::*;
    let k = d.k();
    let a = d.a_count();
    if a == 0 {
        return if d.is_identity() { AdmissibilityReport::ok() } else { AdmissibilityReport::fail("(D0) decorations without cups") };
    }
    let ld = count_loops(d, &[Dot]);
    let lc = count_loops(d, &[Circ]);
    let ldc = count_loops(d, &[Dot, Circ]);
    if ld + lc + ldc != d.loops().len() {
        return AdmissibilityReport::fail("only L•, L○ and L•○ loops are allowed");
    }
    if ldc > 0 && ld + lc > 0 {
        return AdmissibilityReport::fail("L•○ excludes other loops");
    }
    if a > 1 {
        if ld > 1 || lc > 1 {
            return AdmissibilityReport::fail("at most one L• and one L○ when a(D)>1");
        }
        let dots: usize = d.edges().iter().map(|e| e.decor.iter().filter(|&&x| x == Dot).count()).sum();
        let circs: usize = d.edges().iter().map(|e| e.decor.iter().filter(|&&x| x == Circ).count()).sum();
        if !(dots + ldc).is_multiple_of(2) || !(circs + ldc).is_multiple_of(2) {
            return AdmissibilityReport::fail("the numbers of L•○ and • (resp. ○) on edges must be even");
        }
        for (col, other, lother) in [(1, Circ, lc), (k, Dot, ld)] {
            if let Some(e) = vertical_at(d, col) {
                let ok = e.decor.is_empty() || (e.decor == [other] && lother == 0) || (alternating(&e.decor) && d.loops().is_empty());
                if !ok {
                    return AdmissibilityReport::fail(format!("invalid decoration on {{{col},{col}'}}"));
                }
            }
        }
        for e in d.edges() {
            if !alternating(&e.decor) {
                return AdmissibilityReport::fail("adjacent decorations of one side on an edge");
            }
        }
        if let Some(v) = mixed_edge_violation(d) {
            return v;
        }
        return AdmissibilityReport::ok();
    }
    one_cup_sides(d, spec, ldc)
}

fn mixed_edge_violation(d: &Diagram) -> Option<AdmissibilityReport> {
    let prop = d.propagating();
    if prop.is_empty() || prop.len() == 1 {
        return None;
    }
    d.edges()
        .iter()
        .any(|e| e.decor.iter().any(|x| x.is_left()) && e.decor.iter().any(|x| x.is_right()))
        .then(|| AdmissibilityReport::fail("both decoration sides on one edge of a dammed diagram"))
}

/// Prose constraints on the western and eastern sides of a diagram with one cup.
fn one_cup_sides(d: &Diagram, spec: &CoxeterSpec, mixed_loops: usize) -> AdmissibilityReport {
    if mixed_loops > 0 {
        return AdmissibilityReport::fail("a loop with both decorations needs a(D)>1");
    }
    let prop = d.propagating();
    let (left, right) = (prop[0], prop[prop.len() - 1]);
    for &e in &prop[1..prop.len() - 1] {
        if !d.edges()[e].decor.is_empty() {
            return AdmissibilityReport::fail("inner propagating edges are undecorated");
        }
    }
    if d.edges()[left].decor.iter().any(|x| x.is_right()) || d.edges()[right].decor.iter().any(|x| x.is_left()) {
        return AdmissibilityReport::fail("both decorations on one propagating edge");
    }
    // the middle sequence alternates between sides
    let seq: Vec<Decoration> = d.heights().iter().map(|h| decoration_at(d, h)).collect();
    if !alternating(&seq) {
        return AdmissibilityReport::fail("L and R decorations must alternate in height");
    }
    // • on the leftmost propagating edge only at the extremes
    let others: Vec<usize> = (0..d.heights().len())
        .filter(|&p| matches!(d.heights()[p].obj, Obj::Edge(e) if e != left))
        .collect();
    for (p, h) in d.heights().iter().enumerate() {
        if h.obj == Obj::Edge(left) && others.iter().any(|&q| q < p) && others.iter().any(|&q| q > p) {
            return AdmissibilityReport::fail("a • on the leftmost propagating edge must be extreme");
        }
    }
    if d.edges()[left].decor.len() > 2 {
        return AdmissibilityReport::fail("at most two • on the leftmost propagating edge");
    }
    // ○ only at the extremes of the eastern side
    let east: Vec<usize> = (0..d.heights().len())
        .filter(|&p| match d.heights()[p].obj {
            Obj::Edge(e) => e == right || e == left,
            Obj::Loop(_) => true,
        })
        .collect();
    for (p, h) in d.heights().iter().enumerate() {
        if h.obj == Obj::Edge(right)
            && decoration_at(d, h) == Decoration::Circ
            && spec.family == Family::AffineB
            && east.iter().any(|&q| q < p)
            && east.iter().any(|&q| q > p)
        {
            return AdmissibilityReport::fail("○ on the rightmost propagating edge must be extreme");
        }
    }
    AdmissibilityReport::ok()
}

fn decoration_at(d: &Diagram, h: &HeightRef) -> Decoration {
    match h.obj {
        Obj::Edge(e) => d.edges()[e].decor[h.index],
        Obj::Loop(l) => d.loops()[l][h.index],
    }
}

/// Positions in the height order of L• loops and of right markers.
fn pzz_markers(d: &Diagram, family: Family) -> (Vec<usize>, Vec<usize>) {
    let prop = d.propagating();
    let right = prop.last().copied();
    let mut ls = Vec::new();
    let mut rs = Vec::new();
    for (p, h) in d.heights().iter().enumerate() {
        match h.obj {
            Obj::Loop(l) => {
                let lp = &d.loops()[l];
                if lp == &[Decoration::Dot] {
                    ls.push(p);
                } else if family == Family::AffineD && lp == &[Decoration::Circ] {
                    rs.push(p);
                }
            }
            Obj::Edge(e) => {
                if family == Family::AffineB && Some(e) == right && d.edges()[e].decor[h.index] == Decoration::Tri {
                    rs.push(p);
                }
            }
        }
    }
    (ls, rs)
}

/// Whether some L○ is not an end marker; an end marker is the topmost (bottom-most) marker next to a cup
/// (cap) at the last two nodes.
fn has_inner_right_loop(d: &Diagram, ls: &[usize], rs: &[usize]) -> bool {
    let k = d.k();
    let cup_end = d.edges().iter().any(|e| e.is_north() && e.span() == (k - 1, k));
    let cap_end = d.edges().iter().any(|e| e.is_south() && e.span() == (k - 1, k));
    let top_end = cup_end && rs[0] < ls[0];
    let bottom_end = cap_end && rs[rs.len() - 1] > ls[ls.len() - 1];
    rs.len() > usize::from(top_end) + usize::from(bottom_end)
}

/// Classifies an admissible diagram into PZZ, LP, RP, LRP or ALT.
pub fn classify_diagram(d: &Diagram, spec: &CoxeterSpec) -> Result<AdmissibleClass> {
    check_spec(d, spec)?;
    let family = spec.family;
    let k = d.k();
    let l = count_loops(d, &[Decoration::Dot]);
    let (ls, rs) = if d.a_count() == 1 { pzz_markers(d, family) } else { (Vec::new(), Vec::new()) };
    let r = match family {
        Family::AffineB => rs.len(),
        Family::AffineD => count_loops(d, &[Decoration::Circ]),
    };
    let mut class = AdmissibleClass { tag: FamilyTag::Alt, pzz_type: None, l, r, i: None, j: None, j_l: None, j_r: None };
    if d.a_count() == 1 && !ls.is_empty() && !rs.is_empty() && (family == Family::AffineB || has_inner_right_loop(d, &ls, &rs)) {
        let top_r = rs[0] < ls[0];
        let bottom_r = rs[rs.len() - 1] > ls[ls.len() - 1];
        class.tag = FamilyTag::Pzz;
        class.pzz_type = Some(match (top_r, bottom_r) {
            (true, true) => PzzType::RightRight,
            (true, false) => PzzType::RightLeft,
            (false, true) => PzzType::LeftRight,
            (false, false) => PzzType::LeftLeft,
        });
        let cup = d.edges().iter().find(|e| e.is_north()).expect("one cup");
        let cap = d.edges().iter().find(|e| e.is_south()).expect("one cap");
        class.i = Some(cup.a.index());
        class.j = Some(cap.a.index());
        return Ok(class);
    }
    if d.a_count() == 0 {
        return Ok(class);
    }
    let one_cup = d.a_count() == 1;
    // verticals that belong to the outer parts; with one cup they may carry the opposite side's decorations
    let outer = |i: usize, side_left: bool| {
        vertical_at(d, i).is_some_and(|e| e.decor.iter().all(|x| x.is_left() != side_left) && (one_cup || e.decor.is_empty()))
    };
    let lead = (1..=k).take_while(|&i| outer(i, true)).count();
    let left = l == 1 && lead > 0 && lead < k;
    let (right_marker, last) = match family {
        Family::AffineB => (vertical_at(d, k).is_some_and(|e| e.decor == [Decoration::Tri]), k - 1),
        Family::AffineD => (count_loops(d, &[Decoration::Circ]) == 1 && plain_vertical(d, k), k),
    };
    let trail = if right_marker { (1..=last).rev().take_while(|&i| outer(i, false)).count() } else { 0 };
    let right = right_marker && trail + (k - last) > 0 && trail < last;
    let j_l = lead + 1;
    let j_r = last - trail;
    class.tag = match (left, right) {
        (true, true) if d.a_count() > 1 => FamilyTag::Lrp,
        (true, false) => FamilyTag::Lp,
        (false, true) => FamilyTag::Rp,
        _ => FamilyTag::Alt,
    };
    if matches!(class.tag, FamilyTag::Lp | FamilyTag::Lrp) {
        class.j_l = Some(j_l);
    }
    if matches!(class.tag, FamilyTag::Rp | FamilyTag::Lrp) {
        class.j_r = Some(j_r);
    }
    Ok(class)
}

/// Weight of an edge from the alternating pattern of its L- and right markers.
fn pattern_weight(e: &Edge, mark: Decoration, n: usize) -> Result<usize> {
    let seq: Vec<Decoration> = e.decor.iter().copied().filter(|&x| x == Decoration::Dot || x == mark).collect();
    if seq.is_empty() {
        return Ok(0);
    }
    if !alternating(&seq) {
        return Err(Error::NotAdmissible(format!("edge {}-{} is not alternating", e.a, e.b)));
    }
    let (x, y) = (e.a.index(), e.b.index());
    let np1 = n + 1;
    let len = seq.len();
    let k = len / 2;
    let starts_left = seq[0].is_left();
    let w = if !e.is_propagating() || x <= y {
        let (i, j) = (x.min(y), x.max(y));
        match (starts_left, len % 2 == 1) {
            (true, true) => (i - 1) as isize + (k * np1) as isize,
            (false, true) => (n + 2) as isize - j as isize + (k * np1) as isize,
            (true, false) => (k * np1) as isize - j as isize + i as isize,
            (false, false) => (k * np1) as isize,
        }
    } else {
        let (i, j) = (x, y);
        match (starts_left, len % 2 == 1) {
            (true, true) => (j - 1) as isize + (k * np1) as isize,
            (false, true) => (n + 2) as isize - i as isize + (k * np1) as isize,
            (true, false) => (k * np1) as isize,
            (false, false) => (k * np1) as isize - i as isize + j as isize,
        }
    };
    usize::try_from(w).map_err(|_| Error::InternalAssertion(format!("negative weight on {}-{}", e.a, e.b)))
}

fn weight_mark(family: Family) -> Decoration {
    right_mark(family)
}

/// Weight of the `e`-th edge of `d`.
pub fn edge_weight(d: &Diagram, e: usize, spec: &CoxeterSpec) -> Result<usize> {
    check_spec(d, spec)?;
    pattern_weight(&d.edges()[e], weight_mark(spec.family), spec.n)
}

/// Weight of a loop.
pub fn loop_weight(l: &[Decoration], spec: &CoxeterSpec) -> Result<usize> {
    loop_weight_n(l, spec.family, spec.n)
}

fn loop_weight_n(l: &[Decoration], family: Family, n: usize) -> Result<usize> {
    use Decoration::*;
    let mark = right_mark(family);
    if is_loop(l, &[Dot]) || (family == Family::AffineD && is_loop(l, &[Circ])) {
        Ok(1)
    } else if is_loop(l, &[Dot, mark]) {
        Ok(n + 1)
    } else {
        Err(Error::NotAdmissible(format!("loop {l:?} has no weight")))
    }
}

/// Total weight 𝗐(D), loops included.
pub fn total_weight(d: &Diagram, spec: &CoxeterSpec) -> Result<usize> {
    check_spec(d, spec)?;
    weight_n(d, spec.family, spec.n)
}

fn weight_n(d: &Diagram, family: Family, n: usize) -> Result<usize> {
    let mut w = 0;
    for e in d.edges() {
        w += pattern_weight(e, weight_mark(family), n)?;
    }
    for l in d.loops() {
        w += loop_weight_n(l, family, n)?;
    }
    Ok(w)
}

/// ν₁,…,ν_{k−1}: non-loop edges crossing each line i+1/2.
pub fn nu_counts(d: &Diagram) -> Vec<usize> {
    let k = d.k();
    let mut nu = vec![0; k.saturating_sub(1)];
    for e in d.edges() {
        let (lo, hi) = e.span();
        for slot in nu.iter_mut().take(hi - 1).skip(lo - 1) {
            *slot += 1;
        }
    }
    nu
}

/// ν(D), the sum of [`nu_counts`].
pub fn nu(d: &Diagram) -> usize {
    nu_counts(d).iter().sum()
}

fn alt_length(d: &Diagram, family: Family, n: usize) -> Result<usize> {
    Ok(nu(d) / 2 + weight_n(d, family, n)?)
}

/// The inner alternating diagram of a P-diagram, with the ○ completion on its last nodes.
pub fn inner_diagram(d: &Diagram, spec: &CoxeterSpec) -> Result<Diagram> {
    let class = classify_diagram(d, spec)?;
    let (j_l, j_r) = match class.tag {
        FamilyTag::Lp => (class.j_l.expect("LP"), d.k()),
        FamilyTag::Rp => (1, class.j_r.expect("RP")),
        FamilyTag::Lrp => (class.j_l.expect("LRP"), class.j_r.expect("LRP")),
        _ => return Err(Error::WrongClass(format!("{} is not a P-diagram", class.tag))),
    };
    inner_window(d, spec.family, j_l, j_r, matches!(class.tag, FamilyTag::Lp | FamilyTag::Lrp))
}

fn inner_window(d: &Diagram, family: Family, j_l: usize, j_r: usize, drop_left_loop: bool) -> Result<Diagram> {
    let kk = j_r - j_l + 1;
    let shift = |nd: Node| match nd {
        Node::N(i) => Node::N(i + 1 - j_l),
        Node::S(i) => Node::S(i + 1 - j_l),
    };
    let mut edges: Vec<Edge> = Vec::new();
    let mut emap = vec![None; d.edges().len()];
    for (idx, e) in d.edges().iter().enumerate() {
        let (lo, hi) = e.span();
        if lo >= j_l && hi <= j_r {
            emap[idx] = Some(edges.len());
            edges.push(Edge { a: shift(e.a), b: shift(e.b), decor: e.decor.clone() });
        }
    }
    let mut drops = Vec::new();
    if drop_left_loop {
        drops.extend(d.loops().iter().position(|l| l == &[Decoration::Dot]));
    }
    if family == Family::AffineD && j_r < d.k() {
        drops.extend(d.loops().iter().position(|l| l == &[Decoration::Circ]));
    }
    finish_inner(d, j_r, kk, edges, emap, &drops)
}

fn finish_inner(
    d: &Diagram,
    j_r: usize,
    kk: usize,
    mut edges: Vec<Edge>,
    emap: Vec<Option<usize>>,
    drops: &[usize],
) -> Result<Diagram> {
    let mut lmap = vec![None; d.loops().len()];
    let mut loops = Vec::new();
    for (i, l) in d.loops().iter().enumerate() {
        if !drops.contains(&i) {
            lmap[i] = Some(loops.len());
            loops.push(l.clone());
        }
    }
    let mut heights: Vec<HeightRef> = d
        .heights()
        .iter()
        .filter_map(|h| match h.obj {
            Obj::Edge(e) => emap[e].map(|x| HeightRef { obj: Obj::Edge(x), index: h.index }),
            Obj::Loop(l) => lmap[l].map(|x| HeightRef { obj: Obj::Loop(x), index: h.index }),
        })
        .collect();
    let a = edges.iter().filter(|e| e.is_north()).count();
    if j_r < d.k() && a > 0 {
        for nd in [Node::N(kk), Node::S(kk)] {
            let idx = edges.iter().position(|e| e.a == nd || e.b == nd).expect("matching");
            let e = &mut edges[idx];
            if e.decor.last() == Some(&Decoration::Circ) && e.b == nd || e.decor.first() == Some(&Decoration::Circ) && e.a == nd {
                continue;
            }
            if e.b == nd {
                if e.is_propagating() {
                    heights.push(HeightRef { obj: Obj::Edge(idx), index: e.decor.len() });
                }
                e.decor.push(Decoration::Circ);
            } else {
                for h in heights.iter_mut() {
                    if h.obj == Obj::Edge(idx) {
                        h.index += 1;
                    }
                }
                if e.is_propagating() {
                    heights.insert(0, HeightRef { obj: Obj::Edge(idx), index: 0 });
                }
                e.decor.insert(0, Decoration::Circ);
            }
        }
    }
    if a != 1 {
        heights.clear();
    }
    Diagram::from_parts(kk, edges, loops, heights)
}

/// The length ℓ(D) of an admissible diagram.
pub fn length(d: &Diagram, spec: &CoxeterSpec) -> Result<usize> {
    check_spec(d, spec)?;
    if d.is_identity() {
        return Ok(0);
    }
    let class = classify_diagram(d, spec)?;
    let n = spec.n as isize;
    let extra = |l: usize, r: usize| match spec.family {
        Family::AffineB => l as isize,
        Family::AffineD => (l + r) as isize,
    };
    let v: isize = match class.tag {
        FamilyTag::Alt => return alt_length(d, spec.family, spec.n),
        FamilyTag::Pzz => {
            let (i, j) = (class.i.expect("pzz") as isize, class.j.expect("pzz") as isize);
            let (l, r) = (class.l as isize, class.r as isize);
            let e = extra(class.l, class.r);
            match class.pzz_type.expect("pzz") {
                PzzType::RightRight => 3 - i - j + (l + r + 1) * n + e,
                PzzType::RightLeft => 1 - i + j + (l + r) * n + e,
                PzzType::LeftRight => 1 + i - j + (l + r) * n + e,
                PzzType::LeftLeft => i + j - 1 + (l + r - 1) * n + e,
            }
        }
        tag => {
            let inner = inner_diagram(d, spec)?;
            let n_hat = inner.k().saturating_sub(2);
            let li = alt_length(&inner, spec.family, n_hat)? as isize;
            let plus = match spec.family {
                Family::AffineB => 0,
                Family::AffineD => 1,
            };
            match tag {
                FamilyTag::Lp => 2 * class.j_l.expect("LP") as isize - 1 + li,
                FamilyTag::Rp => 2 * n - 2 * class.j_r.expect("RP") as isize + 4 + plus + li,
                _ => 2 * n + 2 * class.j_l.expect("LRP") as isize - 2 * class.j_r.expect("LRP") as isize + 3 + plus + li,
            }
        }
    };
    usize::try_from(v).map_err(|_| Error::InternalAssertion(format!("negative length for {d}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{simple_diagram, theta_unchecked};

    #[test]
    fn simple_diagrams_are_admissible_with_length_one() {
        for spec in [CoxeterSpec::b(2), CoxeterSpec::b(3), CoxeterSpec::d(2)] {
            for i in 0..=spec.max_generator() {
                let d = simple_diagram(&spec, i).unwrap();
                assert!(is_admissible(&d, &spec).admissible);
                assert_eq!(length(&d, &spec).unwrap(), 1);
                assert_eq!(classify_diagram(&d, &spec).unwrap().tag, FamilyTag::Alt);
            }
        }
    }

    #[test]
    fn identity_has_length_zero() {
        let spec = CoxeterSpec::b(2);
        let id = Diagram::identity(4);
        assert_eq!(length(&id, &spec).unwrap(), 0);
        assert!(nu_counts(&id).iter().all(|&x| x == 0));
    }

    #[test]
    fn nu_of_simple_diagram() {
        let spec = CoxeterSpec::b(4);
        let d = simple_diagram(&spec, 3).unwrap();
        assert_eq!(nu_counts(&d), vec![0, 0, 2, 0, 0]);
    }

    #[test]
    fn weight_formulas() {
        use Decoration::*;
        let n = 6;
        let e = Edge::new(Node::N(3), Node::N(4), vec![Dot, Tri]);
        assert_eq!(pattern_weight(&e, Tri, n).unwrap(), 6);
        let e = Edge::new(Node::N(1), Node::N(2), vec![Dot]);
        assert_eq!(pattern_weight(&e, Tri, n).unwrap(), 0);
        let e = Edge::new(Node::N(5), Node::S(2), vec![Dot]);
        assert_eq!(pattern_weight(&e, Tri, n).unwrap(), 1);
        assert_eq!(loop_weight_n(&[Tri, Dot], Family::AffineB, n).unwrap(), 7);
        assert_eq!(loop_weight_n(&[Circ], Family::AffineD, n).unwrap(), 1);
    }

    #[test]
    fn two_dot_loops_with_many_cups_rejected() {
        use Decoration::*;
        let spec = CoxeterSpec::b(2);
        let edges = vec![
            Edge::plain(Node::N(1), Node::N(2)),
            Edge::new(Node::N(3), Node::N(4), vec![Circ]),
            Edge::plain(Node::S(1), Node::S(2)),
            Edge::new(Node::S(3), Node::S(4), vec![Circ]),
        ];
        let d = Diagram::from_parts(4, edges, vec![vec![Dot], vec![Dot]], vec![]).unwrap();
        let rep = is_admissible(&d, &spec);
        assert!(!rep.admissible);
        assert_eq!(rep.violation.as_deref(), Some("at most one L• when a(D)>1"));
    }

    #[test]
    fn fork_product_is_alt_of_length_two() {
        let spec = CoxeterSpec::b(3);
        let d = theta_unchecked(&[0, 1], &spec).unwrap();
        assert_eq!(length(&d, &spec).unwrap(), 2);
    }
}
