//! Decorated pseudo diagrams: data model, concatenation and reduction to irreducible form.

use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::coxeter::Family;
use crate::error::{Error, Result};
use crate::poly::DeltaPoly;

/// A decoration: the L-decoration • or one of the R-decorations ○ and △.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Decoration {
    #[serde(rename = "dot")]
    Dot,
    #[serde(rename = "circ")]
    Circ,
    #[serde(rename = "tri")]
    Tri,
}

impl Decoration {
    pub fn is_left(self) -> bool {
        self == Decoration::Dot
    }

    pub fn is_right(self) -> bool {
        !self.is_left()
    }

    pub fn symbol(self) -> char {
        match self {
            Decoration::Dot => '•',
            Decoration::Circ => '○',
            Decoration::Tri => '△',
        }
    }
}

/// A boundary node: `N(i)` is north node `i`, `S(i)` is south node `i'` (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    N(usize),
    S(usize),
}

impl Node {
    pub fn index(self) -> usize {
        match self {
            Node::N(i) | Node::S(i) => i,
        }
    }

    pub fn is_north(self) -> bool {
        matches!(self, Node::N(_))
    }

    /// Position on the boundary circle read clockwise from north node 1.
    fn boundary_pos(self, k: usize) -> usize {
        match self {
            Node::N(i) => i - 1,
            Node::S(i) => 2 * k - i,
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::N(i) => write!(f, "{i}"),
            Node::S(i) => write!(f, "{i}'"),
        }
    }
}

impl std::str::FromStr for Node {
    type Err = Error;
    fn from_str(s: &str) -> Result<Node> {
        let (body, south) = match s.strip_suffix('\'') {
            Some(b) => (b, true),
            None => (s, false),
        };
        let i: usize = body.parse().map_err(|_| Error::Parse(format!("bad node {s:?}")))?;
        if i == 0 {
            return Err(Error::Parse(format!("bad node {s:?}")));
        }
        Ok(if south { Node::S(i) } else { Node::N(i) })
    }
}

/// An edge between two boundary nodes with `a < b`, and its decorations in reading order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub a: Node,
    pub b: Node,
    pub decor: Vec<Decoration>,
}

impl Edge {
    pub fn new(a: Node, b: Node, decor: Vec<Decoration>) -> Edge {
        let (a, b, decor) = if a <= b {
            (a, b, decor)
        } else {
            (b, a, decor.into_iter().rev().collect())
        };
        Edge { a, b, decor }
    }

    pub fn plain(a: Node, b: Node) -> Edge {
        Edge::new(a, b, Vec::new())
    }

    pub fn is_propagating(&self) -> bool {
        self.a.is_north() != self.b.is_north()
    }

    pub fn is_north(&self) -> bool {
        self.a.is_north() && self.b.is_north()
    }

    pub fn is_south(&self) -> bool {
        !self.a.is_north() && !self.b.is_north()
    }

    pub fn is_vertical(&self) -> bool {
        self.is_propagating() && self.a.index() == self.b.index()
    }

    /// Leftmost and rightmost column touched.
    pub fn span(&self) -> (usize, usize) {
        let (x, y) = (self.a.index(), self.b.index());
        (x.min(y), x.max(y))
    }
}

/// An object carrying decorations: an edge or a loop, by index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Obj {
    Edge(usize),
    Loop(usize),
}

/// One decoration instance: the `index`-th decoration of `obj`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HeightRef {
    pub obj: Obj,
    pub index: usize,
}

/// An irreducible decorated diagram in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Diagram {
    k: usize,
    edges: Vec<Edge>,
    loops: Vec<Vec<Decoration>>,
    /// Top-to-bottom order of decorations on propagating edges and loops; used only when a(D)=1.
    heights: Vec<HeightRef>,
}

const DEFAULT_STEP_CAP: usize = 1_000_000;

/// Rewrite step cap, read once from `TLDIAG_STEP_CAP`.
pub fn step_cap() -> usize {
    static CAP: OnceLock<usize> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("TLDIAG_STEP_CAP").ok().and_then(|v| v.parse().ok()).unwrap_or(DEFAULT_STEP_CAP)
    })
}

fn min_rotation(v: &[Decoration]) -> Vec<Decoration> {
    if v.is_empty() {
        return Vec::new();
    }
    let rev: Vec<Decoration> = v.iter().rev().copied().collect();
    let mut best: Option<Vec<Decoration>> = None;
    for base in [v, rev.as_slice()] {
        for r in 0..base.len() {
            let cand: Vec<Decoration> = base[r..].iter().chain(&base[..r]).copied().collect();
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.expect("nonempty")
}

impl Diagram {
    /// Builds a diagram in canonical form. `heights` refers to indices of `edges` and `loops` as given.
    pub fn from_parts(
        k: usize,
        edges: Vec<Edge>,
        loops: Vec<Vec<Decoration>>,
        heights: Vec<HeightRef>,
    ) -> Result<Diagram> {
        let d = Diagram::canonical(k, edges, loops, heights);
        d.check_shape()?;
        Ok(d)
    }

    fn canonical(k: usize, edges: Vec<Edge>, loops: Vec<Vec<Decoration>>, heights: Vec<HeightRef>) -> Diagram {
        let a = edges.iter().filter(|e| e.is_north()).count();
        let mut eorder: Vec<usize> = (0..edges.len()).collect();
        eorder.sort_by(|&x, &y| edges[x].cmp(&edges[y]));
        let mut epos = vec![0; edges.len()];
        for (new, &old) in eorder.iter().enumerate() {
            epos[old] = new;
        }
        let new_edges: Vec<Edge> = eorder.iter().map(|&i| edges[i].clone()).collect();
        if a == 1 && !heights.is_empty() {
            // loops ordered by first appearance in the height order
            let mut lorder: Vec<usize> = Vec::new();
            for h in &heights {
                if let Obj::Loop(l) = h.obj {
                    if !lorder.contains(&l) {
                        lorder.push(l);
                    }
                }
            }
            let mut rest: Vec<usize> = (0..loops.len()).filter(|l| !lorder.contains(l)).collect();
            rest.sort_by(|&x, &y| loops[x].cmp(&loops[y]));
            lorder.extend(rest);
            let mut lpos = vec![0; loops.len()];
            for (new, &old) in lorder.iter().enumerate() {
                lpos[old] = new;
            }
            let new_loops = lorder.iter().map(|&l| loops[l].clone()).collect();
            let new_heights = heights
                .iter()
                .map(|h| HeightRef {
                    obj: match h.obj {
                        Obj::Edge(e) => Obj::Edge(epos[e]),
                        Obj::Loop(l) => Obj::Loop(lpos[l]),
                    },
                    index: h.index,
                })
                .collect();
            Diagram { k, edges: new_edges, loops: new_loops, heights: new_heights }
        } else {
            let mut new_loops: Vec<Vec<Decoration>> = loops.iter().map(|l| min_rotation(l)).collect();
            new_loops.sort();
            Diagram { k, edges: new_edges, loops: new_loops, heights: Vec::new() }
        }
    }

    fn check_shape(&self) -> Result<()> {
        let k = self.k;
        let mut seen = vec![false; 2 * k];
        for e in &self.edges {
            for nd in [e.a, e.b] {
                let i = nd.index();
                if i == 0 || i > k {
                    return Err(Error::Parse(format!("node {nd} outside a {k}-box")));
                }
                let p = nd.boundary_pos(k);
                if seen[p] {
                    return Err(Error::Parse(format!("node {nd} used twice")));
                }
                seen[p] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Parse("not a perfect matching".into()));
        }
        for (x, e) in self.edges.iter().enumerate() {
            for f in &self.edges[x + 1..] {
                if crosses(k, e, f) {
                    return Err(Error::Parse(format!("edges {}-{} and {}-{} cross", e.a, e.b, f.a, f.b)));
                }
            }
        }
        if self.a_count() == 0 && (self.loops.iter().any(|l| !l.is_empty()) || self.edges.iter().any(|e| !e.decor.is_empty()))
        {
            return Err(Error::Parse("a diagram without cups carries no decorations".into()));
        }
        for (i, e) in self.edges.iter().enumerate() {
            for &d in &e.decor {
                if d.is_left() && !self.left_exposed(i) {
                    return Err(Error::Parse(format!("• on edge {}-{} away from the west wall", e.a, e.b)));
                }
                if d.is_right() && !self.right_exposed(i) {
                    return Err(Error::Parse(format!("R-decoration on edge {}-{} away from the east wall", e.a, e.b)));
                }
            }
        }
        if !self.heights.is_empty() {
            let mut expected: Vec<HeightRef> = Vec::new();
            for (i, e) in self.edges.iter().enumerate() {
                if e.is_propagating() {
                    expected.extend((0..e.decor.len()).map(|j| HeightRef { obj: Obj::Edge(i), index: j }));
                }
            }
            for (l, lp) in self.loops.iter().enumerate() {
                expected.extend((0..lp.len()).map(|j| HeightRef { obj: Obj::Loop(l), index: j }));
            }
            let mut got = self.heights.clone();
            got.sort();
            expected.sort();
            if got != expected {
                return Err(Error::Parse("height order must list each middle decoration once".into()));
            }
            for obj in got.iter().map(|h| h.obj) {
                let idx: Vec<usize> = self.heights.iter().filter(|h| h.obj == obj).map(|h| h.index).collect();
                if idx.windows(2).any(|p| p[0] > p[1]) {
                    return Err(Error::Parse("height order must follow each object's reading order".into()));
                }
            }
        }
        Ok(())
    }

    pub fn identity(k: usize) -> Diagram {
        let edges = (1..=k).map(|i| Edge::plain(Node::N(i), Node::S(i))).collect();
        Diagram { k, edges, loops: Vec::new(), heights: Vec::new() }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn loops(&self) -> &[Vec<Decoration>] {
        &self.loops
    }

    pub fn heights(&self) -> &[HeightRef] {
        &self.heights
    }

    /// Number of non-propagating edges on the north face.
    pub fn a_count(&self) -> usize {
        self.edges.iter().filter(|e| e.is_north()).count()
    }

    pub fn is_identity(&self) -> bool {
        *self == Diagram::identity(self.k)
    }

    /// Index of the edge at a node.
    pub fn edge_at(&self, nd: Node) -> usize {
        self.edges.iter().position(|e| e.a == nd || e.b == nd).expect("perfect matching")
    }

    /// Whether edge `e` borders the face touching the west wall.
    pub fn left_exposed(&self, e: usize) -> bool {
        let p = self.edges[e].a.boundary_pos(self.k);
        self.edges.iter().enumerate().all(|(f, ef)| f == e || !inside(self.k, ef, p as f64))
    }

    /// Whether edge `e` borders the face touching the east wall.
    pub fn right_exposed(&self, e: usize) -> bool {
        let k = self.k;
        let wall = k as f64 - 0.5;
        let p = self.edges[e].a.boundary_pos(k) as f64;
        self.edges.iter().enumerate().all(|(f, ef)| f == e || inside(k, ef, p) == inside(k, ef, wall))
    }

    /// Propagating edges ordered from left to right.
    pub fn propagating(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.edges.len()).filter(|&i| self.edges[i].is_propagating()).collect();
        v.sort_by_key(|&i| self.edges[i].a.index());
        v
    }

    /// Canonical byte key; equal diagrams have equal keys.
    pub fn canonical_key(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(8 + 6 * self.edges.len());
        let code = |d: &Decoration| match d {
            Decoration::Dot => b'.',
            Decoration::Circ => b'o',
            Decoration::Tri => b'^',
        };
        out.extend(self.k.to_string().bytes());
        for e in &self.edges {
            out.push(b'|');
            out.extend(e.a.to_string().bytes());
            out.push(b'-');
            out.extend(e.b.to_string().bytes());
            out.push(b':');
            out.extend(e.decor.iter().map(code));
        }
        for l in &self.loops {
            out.push(b'@');
            out.extend(l.iter().map(code));
        }
        for h in &self.heights {
            out.push(b'#');
            match h.obj {
                Obj::Edge(e) => out.extend(format!("e{e}.{}", h.index).bytes()),
                Obj::Loop(l) => out.extend(format!("l{l}.{}", h.index).bytes()),
            }
        }
        out
    }

    /// Decorations on all objects, tagged by height class: 0 north cups, 1 middle, 2 south caps.
    fn height_tokens(&self, layer: u32) -> (Vec<Vec<Tok>>, Vec<Vec<Tok>>) {
        let mut edge_toks: Vec<Vec<Tok>> = self.edges.iter().map(|e| Vec::with_capacity(e.decor.len())).collect();
        let mut loop_toks: Vec<Vec<Tok>> = self.loops.iter().map(|l| Vec::with_capacity(l.len())).collect();
        let mut counter = 0u32;
        let mut next = || {
            counter += 1;
            (layer, counter)
        };
        for (i, e) in self.edges.iter().enumerate() {
            if e.is_north() {
                for &d in &e.decor {
                    edge_toks[i].push(Tok { d, h: next() });
                }
            }
        }
        if self.heights.is_empty() {
            for (i, e) in self.edges.iter().enumerate() {
                if e.is_propagating() {
                    for &d in &e.decor {
                        edge_toks[i].push(Tok { d, h: next() });
                    }
                }
            }
            for (l, lp) in self.loops.iter().enumerate() {
                for &d in lp {
                    loop_toks[l].push(Tok { d, h: next() });
                }
            }
        } else {
            for h in &self.heights {
                match h.obj {
                    Obj::Edge(e) => edge_toks[e].push(Tok { d: self.edges[e].decor[h.index], h: next() }),
                    Obj::Loop(l) => loop_toks[l].push(Tok { d: self.loops[l][h.index], h: next() }),
                }
            }
        }
        for (i, e) in self.edges.iter().enumerate() {
            if e.is_south() {
                for &d in &e.decor {
                    edge_toks[i].push(Tok { d, h: next() });
                }
            }
        }
        (edge_toks, loop_toks)
    }

    /// The raw concatenation: `self` on top of `other`.
    pub fn concat_raw(&self, other: &Diagram) -> Result<RawDiagram> {
        if self.k != other.k {
            return Err(Error::WidthMismatch(self.k, other.k));
        }
        let k = self.k;
        let (xe, xl) = self.height_tokens(0);
        let (ye, yl) = other.height_tokens(1);
        // vertices: 0..k top, k..2k middle, 2k..3k bottom
        let vx = |nd: Node| match nd {
            Node::N(i) => i - 1,
            Node::S(i) => k + i - 1,
        };
        let vy = |nd: Node| match nd {
            Node::N(i) => k + i - 1,
            Node::S(i) => 2 * k + i - 1,
        };
        // segments: (u, v, tokens from u to v)
        let mut segs: Vec<(usize, usize, Vec<Tok>)> = Vec::with_capacity(2 * k);
        for (e, toks) in self.edges.iter().zip(xe) {
            segs.push((vx(e.a), vx(e.b), toks));
        }
        for (e, toks) in other.edges.iter().zip(ye) {
            segs.push((vy(e.a), vy(e.b), toks));
        }
        let mut at: Vec<Vec<usize>> = vec![Vec::new(); 3 * k];
        for (s, (u, v, _)) in segs.iter().enumerate() {
            at[*u].push(s);
            at[*v].push(s);
        }
        let mut used = vec![false; segs.len()];
        let walk = |start_seg: usize, from: usize, used: &mut Vec<bool>| -> (usize, Vec<Tok>) {
            let mut toks = Vec::new();
            let mut seg = start_seg;
            let mut cur = from;
            loop {
                used[seg] = true;
                let (u, v, t) = &segs[seg];
                if *u == cur {
                    toks.extend(t.iter().copied());
                    cur = *v;
                } else {
                    toks.extend(t.iter().rev().copied());
                    cur = *u;
                }
                if cur < k || cur >= 2 * k {
                    return (cur, toks);
                }
                match at[cur].iter().find(|&&s| !used[s]) {
                    Some(&s) => seg = s,
                    None => return (cur, toks),
                }
            }
        };
        let node_of = |v: usize| if v < k { Node::N(v + 1) } else { Node::S(v - 2 * k + 1) };
        let mut paths = Vec::with_capacity(k);
        for start in (0..k).chain(2 * k..3 * k) {
            let s = at[start][0];
            if used[s] {
                continue;
            }
            let (end, toks) = walk(s, start, &mut used);
            let (a, b) = (node_of(start), node_of(end));
            let (a, b, toks) = if a <= b { (a, b, toks) } else { (b, a, toks.into_iter().rev().collect()) };
            paths.push(RawPath { a, b, toks });
        }
        let mut loops: Vec<Vec<Tok>> = xl.into_iter().chain(yl).collect();
        for s in 0..segs.len() {
            if !used[s] {
                let start = segs[s].0;
                let (_, toks) = walk(s, start, &mut used);
                loops.push(toks);
            }
        }
        Ok(RawDiagram { k, paths, loops })
    }
}

fn inside(k: usize, e: &Edge, x: f64) -> bool {
    let p = e.a.boundary_pos(k) as f64;
    let q = e.b.boundary_pos(k) as f64;
    let (lo, hi) = if p < q { (p, q) } else { (q, p) };
    lo < x && x < hi
}

fn crosses(k: usize, e: &Edge, f: &Edge) -> bool {
    let p = f.a.boundary_pos(k) as f64;
    let q = f.b.boundary_pos(k) as f64;
    inside(k, e, p) != inside(k, e, q)
}

/// A decoration with its height key `(layer, rank)`; smaller is higher.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Tok {
    pub d: Decoration,
    pub h: (u32, u32),
}

/// A traced path of a raw concatenation, tokens read from `a` to `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawPath {
    pub a: Node,
    pub b: Node,
    pub toks: Vec<Tok>,
}

/// Result of stacking two diagrams before any relation is applied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawDiagram {
    pub k: usize,
    pub paths: Vec<RawPath>,
    pub loops: Vec<Vec<Tok>>,
}

impl RawDiagram {
    /// Raw form of an existing diagram.
    pub fn from_diagram(d: &Diagram) -> RawDiagram {
        let (et, lt) = d.height_tokens(0);
        RawDiagram {
            k: d.k,
            paths: d.edges.iter().zip(et).map(|(e, toks)| RawPath { a: e.a, b: e.b, toks }).collect(),
            loops: lt,
        }
    }
}

/// An irreducible diagram with the scalar collected while reducing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionResult {
    pub diagram: Diagram,
    pub coeff: DeltaPoly,
}

/// The product of two adjacent decorations on one block, if a relation applies.
fn pair_rule(family: Family, x: Decoration, y: Decoration) -> Option<(Option<Decoration>, i64)> {
    use Decoration::*;
    match (family, x, y) {
        (_, Dot, Dot) => Some((None, 1)),
        (Family::AffineD, Circ, Circ) => Some((None, 1)),
        (Family::AffineB, Circ, Circ) => Some((Some(Tri), 1)),
        (Family::AffineB, Circ, Tri) | (Family::AffineB, Tri, Circ) => Some((Some(Circ), 2)),
        (Family::AffineB, Tri, Tri) => Some((Some(Tri), 2)),
        _ => None,
    }
}

/// Loop decorations that evaluate to the scalar δ.
fn loop_is_scalar(family: Family, l: &[Decoration]) -> bool {
    l.is_empty() || (family == Family::AffineB && l == [Decoration::Tri])
}

/// The decoration absorbed by a pure loop carrying it, and the decorations that delimit absorption.
fn absorbers(family: Family) -> &'static [Decoration] {
    match family {
        Family::AffineB => &[Decoration::Dot],
        Family::AffineD => &[Decoration::Dot, Decoration::Circ],
    }
}

fn blocks_absorption(kind: Decoration, d: Decoration) -> bool {
    match kind {
        Decoration::Dot => d.is_right(),
        _ => d.is_left(),
    }
}

struct Steps {
    n: usize,
    cap: usize,
}

impl Steps {
    fn tick(&mut self) -> Result<()> {
        self.n += 1;
        if self.n > self.cap {
            Err(Error::NonTerminating(self.cap))
        } else {
            Ok(())
        }
    }
}

fn reduce_linear(family: Family, toks: &mut Vec<Tok>, scalar: &mut i64, steps: &mut Steps) -> Result<bool> {
    let mut out: Vec<Tok> = Vec::with_capacity(toks.len());
    let mut changed = false;
    for &t in toks.iter() {
        out.push(t);
        while out.len() >= 2 {
            let (x, y) = (out[out.len() - 2], out[out.len() - 1]);
            match pair_rule(family, x.d, y.d) {
                Some((r, c)) => {
                    steps.tick()?;
                    changed = true;
                    *scalar *= c;
                    out.truncate(out.len() - 2);
                    if let Some(d) = r {
                        out.push(Tok { d, h: x.h });
                    }
                }
                None => break,
            }
        }
    }
    *toks = out;
    Ok(changed)
}

fn reduce_cyclic(family: Family, toks: &mut Vec<Tok>, scalar: &mut i64, steps: &mut Steps) -> Result<bool> {
    let mut changed = reduce_linear(family, toks, scalar, steps)?;
    while toks.len() >= 2 {
        let (x, y) = (toks[toks.len() - 1], toks[0]);
        match pair_rule(family, x.d, y.d) {
            Some((r, c)) => {
                steps.tick()?;
                changed = true;
                *scalar *= c;
                toks.pop();
                toks.remove(0);
                if let Some(d) = r {
                    toks.insert(0, Tok { d, h: y.h });
                }
                reduce_linear(family, toks, scalar, steps)?;
            }
            None => break,
        }
    }
    Ok(changed)
}

/// Reduces a raw diagram to irreducible canonical form.
pub fn reduce(raw: RawDiagram, family: Family) -> Result<ReductionResult> {
    let mut steps = Steps { n: 0, cap: step_cap() };
    let a = raw.paths.iter().filter(|p| p.a.is_north() && p.b.is_north()).count();
    if a == 1 {
        reduce_one_cup(raw, family, &mut steps)
    } else {
        reduce_general(raw, family, a, &mut steps)
    }
}

fn reduce_general(raw: RawDiagram, family: Family, a: usize, steps: &mut Steps) -> Result<ReductionResult> {
    let RawDiagram { k, mut paths, mut loops } = raw;
    let mut scalar: i64 = 1;
    let mut deltas = 0usize;
    if a == 0 && (paths.iter().any(|p| !p.toks.is_empty()) || loops.iter().any(|l| !l.is_empty())) {
        return Err(Error::InternalAssertion("decorations on a diagram without cups".into()));
    }
    loop {
        for p in paths.iter_mut() {
            reduce_linear(family, &mut p.toks, &mut scalar, steps)?;
        }
        for l in loops.iter_mut() {
            reduce_cyclic(family, l, &mut scalar, steps)?;
        }
        let before = loops.len();
        loops.retain(|l| {
            let ds: Vec<Decoration> = l.iter().map(|t| t.d).collect();
            !loop_is_scalar(family, &ds)
        });
        deltas += before - loops.len();
        let mut changed = false;
        for &kind in absorbers(family) {
            let Some(keep) = loops.iter().position(|l| l.len() == 1 && l[0].d == kind) else {
                continue;
            };
            for (i, l) in loops.iter_mut().enumerate() {
                if i != keep {
                    let n0 = l.len();
                    l.retain(|t| t.d != kind);
                    changed |= l.len() != n0;
                }
            }
            for p in paths.iter_mut() {
                let n0 = p.toks.len();
                p.toks.retain(|t| t.d != kind);
                changed |= p.toks.len() != n0;
            }
        }
        if changed {
            steps.tick()?;
        } else {
            break;
        }
    }
    let edges = paths.into_iter().map(|p| Edge { a: p.a, b: p.b, decor: p.toks.iter().map(|t| t.d).collect() }).collect();
    let loops = loops.into_iter().map(|l| l.iter().map(|t| t.d).collect()).collect();
    let diagram = Diagram::canonical(k, edges, loops, Vec::new());
    Ok(ReductionResult { diagram, coeff: DeltaPoly::monomial(scalar, deltas) })
}

fn reduce_one_cup(raw: RawDiagram, family: Family, steps: &mut Steps) -> Result<ReductionResult> {
    let RawDiagram { k, mut paths, mut loops } = raw;
    let mut scalar: i64 = 1;
    let mut deltas = 0usize;
    for l in loops.iter_mut() {
        l.sort_by_key(|t| t.h);
    }
    loop {
        let mut changed = false;
        for p in paths.iter_mut() {
            if p.a.is_north() == p.b.is_north() {
                changed |= reduce_linear(family, &mut p.toks, &mut scalar, steps)?;
            }
        }
        changed |= reduce_middle_blocks(family, &mut paths, &mut loops, &mut scalar, steps)?;
        let before = loops.len();
        loops.retain(|l| {
            let ds: Vec<Decoration> = l.iter().map(|t| t.d).collect();
            !loop_is_scalar(family, &ds)
        });
        deltas += before - loops.len();
        changed |= before != loops.len();
        if !changed {
            changed = absorb_by_height(family, &mut paths, &mut loops);
        }
        if !changed {
            break;
        }
        steps.tick()?;
    }
    // each object's decorations take its own heights in reading order
    let mut middle: Vec<((u32, u32), Decoration, Obj, usize)> = Vec::new();
    for (i, p) in paths.iter().enumerate() {
        if p.a.is_north() != p.b.is_north() {
            let mut hs: Vec<(u32, u32)> = p.toks.iter().map(|t| t.h).collect();
            hs.sort();
            middle.extend(p.toks.iter().zip(hs).enumerate().map(|(j, (t, h))| (h, t.d, Obj::Edge(i), j)));
        }
    }
    for (l, lp) in loops.iter().enumerate() {
        middle.extend(lp.iter().enumerate().map(|(j, t)| (t.h, t.d, Obj::Loop(l), j)));
    }
    middle.sort_by_key(|m| m.0);
    // decorations of one side commute in height
    let mut ordered: Vec<(Decoration, Obj, usize)> = Vec::with_capacity(middle.len());
    let mut i = 0;
    while i < middle.len() {
        let side = middle[i].1.is_left();
        let mut j = i;
        while j < middle.len() && middle[j].1.is_left() == side {
            j += 1;
        }
        let mut run: Vec<(usize, (u8, Node, usize), Decoration, Obj, usize)> = middle[i..j]
            .iter()
            .enumerate()
            .map(|(r, &(_, d, obj, idx))| {
                let key = match obj {
                    Obj::Edge(e) => (0, paths[e].a, idx),
                    Obj::Loop(_) => (1, Node::N(1), r),
                };
                (r, key, d, obj, idx)
            })
            .collect();
        run.sort_by_key(|x| x.1);
        ordered.extend(run.into_iter().map(|(_, _, d, obj, idx)| (d, obj, idx)));
        i = j;
    }
    let heights = ordered.iter().map(|&(_, obj, index)| HeightRef { obj, index }).collect();
    let edges = paths.into_iter().map(|p| Edge { a: p.a, b: p.b, decor: p.toks.iter().map(|t| t.d).collect() }).collect();
    let loops = loops.into_iter().map(|l| l.iter().map(|t| t.d).collect()).collect();
    let diagram = Diagram::canonical(k, edges, loops, heights);
    Ok(ReductionResult { diagram, coeff: DeltaPoly::monomial(scalar, deltas) })
}

/// Applies one pair relation on a propagating edge or loop, between neighbours of one block.
///
/// Two decorations share a block when no other propagating edge or loop carries a decoration between their heights.
fn reduce_middle_blocks(
    family: Family,
    paths: &mut [RawPath],
    loops: &mut [Vec<Tok>],
    scalar: &mut i64,
    steps: &mut Steps,
) -> Result<bool> {
    let mut any = false;
    loop {
        let mut hit: Option<(Obj, usize, usize)> = None;
        let mut middle: Vec<((u32, u32), Obj)> = Vec::new();
        for (i, p) in paths.iter().enumerate() {
            if p.a.is_north() != p.b.is_north() {
                middle.extend(p.toks.iter().map(|t| (t.h, Obj::Edge(i))));
            }
        }
        for (l, lp) in loops.iter().enumerate() {
            middle.extend(lp.iter().map(|t| (t.h, Obj::Loop(l))));
        }
        let free = |obj: Obj, x: (u32, u32), y: (u32, u32)| {
            let (lo, hi) = if x < y { (x, y) } else { (y, x) };
            !middle.iter().any(|&(h, o)| o != obj && lo < h && h < hi)
        };
        let objs: Vec<(Obj, &Vec<Tok>)> = paths
            .iter()
            .enumerate()
            .filter(|(_, p)| p.a.is_north() != p.b.is_north())
            .map(|(i, p)| (Obj::Edge(i), &p.toks))
            .chain(loops.iter().enumerate().map(|(l, lp)| (Obj::Loop(l), lp)))
            .collect();
        'scan: for (obj, toks) in objs {
            let cyclic = matches!(obj, Obj::Loop(_));
            let n = toks.len();
            let pairs = if cyclic && n >= 2 { n } else { n.saturating_sub(1) };
            for i in 0..pairs {
                let j = (i + 1) % n;
                let (x, y) = (toks[i], toks[j]);
                if pair_rule(family, x.d, y.d).is_some() && free(obj, x.h, y.h) {
                    hit = Some((obj, i, j));
                    break 'scan;
                }
            }
        }
        let Some((obj, i, j)) = hit else {
            return Ok(any);
        };
        steps.tick()?;
        any = true;
        let toks = match obj {
            Obj::Edge(e) => &mut paths[e].toks,
            Obj::Loop(l) => &mut loops[l],
        };
        let (x, y) = (toks[i], toks[j]);
        let (r, c) = pair_rule(family, x.d, y.d).expect("checked");
        *scalar *= c;
        let keep = x.h.min(y.h);
        let (lo, hi) = (i.min(j), i.max(j));
        toks.remove(hi);
        match r {
            Some(d) => toks[lo] = Tok { d, h: keep },
            None => {
                toks.remove(lo);
            }
        }
    }
}

/// One absorption step for a diagram with a single cup; pure loops absorb equal decorations in their height run.
fn absorb_by_height(family: Family, paths: &mut [RawPath], loops: &mut [Vec<Tok>]) -> bool {
    let mut seq: Vec<((u32, u32), Decoration, Obj, usize)> = Vec::new();
    for (i, p) in paths.iter().enumerate() {
        seq.extend(p.toks.iter().enumerate().map(|(j, t)| (t.h, t.d, Obj::Edge(i), j)));
    }
    for (l, lp) in loops.iter().enumerate() {
        seq.extend(lp.iter().enumerate().map(|(j, t)| (t.h, t.d, Obj::Loop(l), j)));
    }
    seq.sort_by_key(|s| s.0);
    for &kind in absorbers(family) {
        for (l, lp) in loops.iter().enumerate() {
            if !(lp.len() == 1 && lp[0].d == kind) {
                continue;
            }
            let p = seq.iter().position(|s| s.2 == Obj::Loop(l)).expect("token present");
            let mut lo = p;
            while lo > 0 && !blocks_absorption(kind, seq[lo - 1].1) {
                lo -= 1;
            }
            let mut hi = p;
            while hi + 1 < seq.len() && !blocks_absorption(kind, seq[hi + 1].1) {
                hi += 1;
            }
            let mut victims: Vec<(Obj, usize)> =
                (lo..=hi).filter(|&i| i != p && seq[i].1 == kind).map(|i| (seq[i].2, seq[i].3)).collect();
            if victims.is_empty() {
                continue;
            }
            victims.sort();
            for &(obj, idx) in victims.iter().rev() {
                match obj {
                    Obj::Edge(e) => {
                        paths[e].toks.remove(idx);
                    }
                    Obj::Loop(m) => {
                        loops[m].remove(idx);
                    }
                }
            }
            return true;
        }
    }
    false
}

/// Reduces a diagram that may contain reducible configurations.
pub fn reduce_diagram(d: &Diagram, family: Family) -> Result<ReductionResult> {
    reduce(RawDiagram::from_diagram(d), family)
}

/// Product of two diagrams: concatenation followed by reduction.
pub fn multiply_diagrams(x: &Diagram, y: &Diagram, family: Family) -> Result<ReductionResult> {
    reduce(x.concat_raw(y)?, family)
}

// ---------------------------------------------------------------- JSON

/// Serializable edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub from: String,
    pub to: String,
    #[serde(default)]
    pub decor: Vec<Decoration>,
}

/// Serializable height reference: exactly one of `edge` or `loop` is set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeightJson {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub edge: Option<usize>,
    #[serde(rename = "loop", skip_serializing_if = "Option::is_none", default)]
    pub lp: Option<usize>,
    pub index: usize,
}

/// Serializable diagram.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramJson {
    pub k: usize,
    pub edges: Vec<EdgeJson>,
    #[serde(default)]
    pub loops: Vec<Vec<Decoration>>,
    #[serde(default)]
    pub heights: Vec<HeightJson>,
}

impl Diagram {
    pub fn to_json(&self) -> DiagramJson {
        DiagramJson {
            k: self.k,
            edges: self
                .edges
                .iter()
                .map(|e| EdgeJson { from: e.a.to_string(), to: e.b.to_string(), decor: e.decor.clone() })
                .collect(),
            loops: self.loops.clone(),
            heights: self
                .heights
                .iter()
                .map(|h| match h.obj {
                    Obj::Edge(e) => HeightJson { edge: Some(e), lp: None, index: h.index },
                    Obj::Loop(l) => HeightJson { edge: None, lp: Some(l), index: h.index },
                })
                .collect(),
        }
    }

    /// Parses a diagram. Edge indices in `heights` refer to the order of `edges` in the input.
    pub fn from_json(j: &DiagramJson) -> Result<Diagram> {
        let mut edges = Vec::with_capacity(j.edges.len());
        for e in &j.edges {
            let a: Node = e.from.parse()?;
            let b: Node = e.to.parse()?;
            edges.push(Edge::new(a, b, e.decor.clone()));
        }
        let mut heights = Vec::with_capacity(j.heights.len());
        for h in &j.heights {
            let obj = match (h.edge, h.lp) {
                (Some(e), None) if e < edges.len() => Obj::Edge(e),
                (None, Some(l)) if l < j.loops.len() => Obj::Loop(l),
                _ => return Err(Error::Parse("height entry must name one existing edge or loop".into())),
            };
            heights.push(HeightRef { obj, index: h.index });
        }
        // reversed edges read their decorations backwards
        for h in heights.iter_mut() {
            if let Obj::Edge(e) = h.obj {
                let src = &j.edges[e];
                let a: Node = src.from.parse()?;
                let b: Node = src.to.parse()?;
                if a > b {
                    h.index = src.decor.len() - 1 - h.index;
                }
            }
        }
        let a = edges.iter().filter(|e| e.is_north()).count();
        if a != 1 {
            heights.clear();
        }
        Diagram::from_parts(j.k, edges, j.loops.clone(), heights)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("serializable")
    }

    pub fn from_json_str(s: &str) -> Result<Diagram> {
        let j: DiagramJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Diagram::from_json(&j)
    }
}

impl PartialOrd for Diagram {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Diagram {
    fn cmp(&self, other: &Self) -> Ordering {
        self.canonical_key().cmp(&other.canonical_key())
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let word = |v: &[Decoration]| v.iter().map(|d| d.symbol()).collect::<String>();
        write!(f, "[k={}", self.k)?;
        for e in &self.edges {
            write!(f, " {}-{}", e.a, e.b)?;
            if !e.decor.is_empty() {
                write!(f, "({})", word(&e.decor))?;
            }
        }
        for l in &self.loops {
            write!(f, " L({})", word(l))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Decoration::*;

    fn cup_cap(k: usize, i: usize, top: Vec<Decoration>, bottom: Vec<Decoration>) -> Diagram {
        let mut edges = vec![Edge::new(Node::N(i), Node::N(i + 1), top), Edge::new(Node::S(i), Node::S(i + 1), bottom)];
        for j in (1..=k).filter(|&j| j != i && j != i + 1) {
            edges.push(Edge::plain(Node::N(j), Node::S(j)));
        }
        Diagram::from_parts(k, edges, Vec::new(), Vec::new()).unwrap()
    }

    #[test]
    fn identity_shape() {
        let id = Diagram::identity(3);
        assert_eq!(id.edges().len(), 3);
        assert_eq!(id.a_count(), 0);
        assert!(id.edges().iter().all(|e| e.is_vertical()));
    }

    #[test]
    fn exposure() {
        let d = cup_cap(5, 2, vec![], vec![]);
        let e11 = d.edge_at(Node::N(1));
        let e55 = d.edge_at(Node::N(5));
        let e44 = d.edge_at(Node::N(4));
        assert!(d.left_exposed(e11));
        assert!(!d.left_exposed(e44));
        assert!(d.right_exposed(e55));
        assert!(!d.right_exposed(e11));
        let cup = d.edge_at(Node::N(2));
        assert!(!d.left_exposed(cup));
        let id = Diagram::identity(4);
        assert!(id.left_exposed(0) && !id.left_exposed(1));
    }

    #[test]
    fn exposure_nested_cup() {
        // cup {1,4} encloses cup {2,3}
        let edges = vec![
            Edge::plain(Node::N(1), Node::N(4)),
            Edge::plain(Node::N(2), Node::N(3)),
            Edge::plain(Node::S(1), Node::S(2)),
            Edge::plain(Node::S(3), Node::S(4)),
        ];
        let d = Diagram::from_parts(4, edges, vec![], vec![]).unwrap();
        let outer = d.edge_at(Node::N(1));
        let inner = d.edge_at(Node::N(2));
        assert!(d.left_exposed(outer) && d.right_exposed(outer));
        assert!(!d.left_exposed(inner) && !d.right_exposed(inner));
        let s12 = d.edge_at(Node::S(1));
        assert!(d.left_exposed(s12) && d.right_exposed(s12));
    }

    #[test]
    fn crossing_rejected() {
        let edges = vec![
            Edge::plain(Node::N(1), Node::S(2)),
            Edge::plain(Node::N(2), Node::S(1)),
        ];
        assert!(Diagram::from_parts(2, edges, vec![], vec![]).is_err());
    }

    #[test]
    fn exposure_rule_enforced() {
        let edges = vec![
            Edge::plain(Node::N(1), Node::S(1)),
            Edge::new(Node::N(2), Node::N(3), vec![Dot]),
            Edge::plain(Node::S(2), Node::S(3)),
        ];
        assert!(Diagram::from_parts(3, edges, vec![], vec![]).is_err());
    }

    #[test]
    fn square_of_cup_gives_delta() {
        let d = cup_cap(4, 2, vec![], vec![]);
        let r = multiply_diagrams(&d, &d, Family::AffineB).unwrap();
        assert_eq!(r.diagram, d);
        assert_eq!(r.coeff, DeltaPoly::delta());
    }

    #[test]
    fn undecorated_loop_is_delta() {
        let id = Diagram::identity(3);
        let mut raw = RawDiagram::from_diagram(&id);
        raw.loops.push(Vec::new());
        let r = reduce(raw, Family::AffineB).unwrap();
        assert_eq!(r.diagram, id);
        assert_eq!(r.coeff, DeltaPoly::delta());
    }

    #[test]
    fn identity_is_unit() {
        let d = cup_cap(4, 1, vec![Dot], vec![Dot]);
        let id = Diagram::identity(4);
        assert_eq!(multiply_diagrams(&id, &d, Family::AffineB).unwrap().diagram, d);
        assert_eq!(multiply_diagrams(&d, &id, Family::AffineB).unwrap().diagram, d);
    }

    #[test]
    fn pair_rules() {
        use Family::*;
        assert_eq!(pair_rule(AffineB, Dot, Dot), Some((None, 1)));
        assert_eq!(pair_rule(AffineB, Circ, Circ), Some((Some(Tri), 1)));
        assert_eq!(pair_rule(AffineB, Tri, Circ), Some((Some(Circ), 2)));
        assert_eq!(pair_rule(AffineB, Circ, Tri), Some((Some(Circ), 2)));
        assert_eq!(pair_rule(AffineB, Tri, Tri), Some((Some(Tri), 2)));
        assert_eq!(pair_rule(AffineB, Dot, Tri), None);
        assert_eq!(pair_rule(AffineD, Circ, Circ), Some((None, 1)));
        assert_eq!(pair_rule(AffineD, Dot, Circ), None);
    }

    #[test]
    fn min_rotation_both_directions() {
        assert_eq!(min_rotation(&[Tri, Dot]), vec![Dot, Tri]);
        assert_eq!(min_rotation(&[Circ, Tri, Dot]), min_rotation(&[Dot, Tri, Circ]));
    }

    #[test]
    fn json_round_trip() {
        let d = cup_cap(4, 3, vec![Circ], vec![Circ]);
        let s = d.to_json_string();
        assert_eq!(Diagram::from_json_str(&s).unwrap(), d);
    }

    #[test]
    fn canonical_keys_distinguish() {
        let a = cup_cap(4, 1, vec![], vec![]);
        let b = cup_cap(4, 2, vec![], vec![]);
        assert_ne!(a.canonical_key(), b.canonical_key());
        assert_eq!(Diagram::identity(4).canonical_key(), Diagram::identity(4).canonical_key());
    }

    #[test]
    fn reduce_idempotent_on_irreducible() {
        let d = cup_cap(4, 1, vec![Dot], vec![Dot]);
        let r = reduce_diagram(&d, Family::AffineB).unwrap();
        assert_eq!(r.diagram, d);
        assert!(r.coeff.is_one());
    }
}
