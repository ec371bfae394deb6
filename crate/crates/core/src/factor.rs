//! Inverse of θ: suitable edges, cut-and-paste, the K operations and closed-form words.
//!
//! The local redistribution of decorations in cut-and-paste is characterised by uniqueness:
//! among the diagrams obtained by cutting the neighbor and re-routing it to the freed nodes,
//! exactly one is admissible, one shorter, and multiplies back to the input. Every operation
//! here enumerates those re-routings and returns the one that passes all three checks.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::admissible::{check_clauses, classify_diagram, inner_diagram, length};
use crate::algebra::{simple_diagram, theta};
use crate::coxeter::{CoxeterSpec, Family, Word};
use crate::diagram::{multiply_diagrams, Decoration, Diagram, Edge, HeightRef, Node, Obj};
use crate::error::{Error, Result};
use crate::heap::FamilyTag;

/// Shape of a simple edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeForm {
    #[serde(rename = "plain")]
    Plain,
    #[serde(rename = "dotted")]
    Dotted,
    #[serde(rename = "circled")]
    Circled,
}

/// Type of a simple edge, or the basic-diagram clause that made it suitable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeType {
    #[serde(rename = "U_L")]
    UL,
    #[serde(rename = "U_R")]
    UR,
    N,
    #[serde(rename = "P_L")]
    PL,
    #[serde(rename = "P_R")]
    PR,
    #[serde(rename = "S_L")]
    SL,
    #[serde(rename = "S_R")]
    SR,
    #[serde(rename = "P_R•")]
    PRDot,
    #[serde(rename = "basic-a")]
    BasicA,
    #[serde(rename = "basic-b")]
    BasicB,
    #[serde(rename = "basic-c")]
    BasicC,
    #[serde(rename = "basic-d")]
    BasicD,
}

impl fmt::Display for EdgeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EdgeType::UL => "U_L",
            EdgeType::UR => "U_R",
            EdgeType::N => "N",
            EdgeType::PL => "P_L",
            EdgeType::PR => "P_R",
            EdgeType::SL => "S_L",
            EdgeType::SR => "S_R",
            EdgeType::PRDot => "P_R•",
            EdgeType::BasicA => "basic-a",
            EdgeType::BasicB => "basic-b",
            EdgeType::BasicC => "basic-c",
            EdgeType::BasicD => "basic-d",
        };
        f.write_str(s)
    }
}

/// The object cut by a cut-and-paste step.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Neighbor {
    Edge(Edge),
    Loop(Vec<Decoration>),
}

impl fmt::Display for Neighbor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let syms = |v: &[Decoration]| v.iter().map(|d| d.symbol()).collect::<String>();
        match self {
            Neighbor::Edge(e) if e.decor.is_empty() => write!(f, "{}-{}", e.a, e.b),
            Neighbor::Edge(e) => write!(f, "{}-{}({})", e.a, e.b, syms(&e.decor)),
            Neighbor::Loop(l) => write!(f, "L({})", syms(l)),
        }
    }
}

/// A suitable edge with its type and neighbor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuitableEdge {
    pub edge: Edge,
    pub form: EdgeForm,
    pub kind: EdgeType,
    pub neighbor: Neighbor,
    /// Generator whose simple diagram carries this edge.
    pub generator: usize,
    /// Set when several south edges qualified and the outermost was taken.
    pub ambiguous: bool,
}

/// A north edge `{i,i+1}` of one of the three simple forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleEdge {
    pub edge: Edge,
    pub form: EdgeForm,
    pub generator: usize,
}

/// Operation applied at one factorization step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepOp {
    CutAndPaste,
    KLeft,
    KRight,
    /// Cut-and-paste on a suitable edge of the inner diagram, re-embedded.
    Inner,
    ClosedForm,
}

/// One step of a factorization trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorStep {
    pub op: StepOp,
    /// Generators stripped at this step, left to right.
    pub generators: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edge: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<EdgeType>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub neighbor: Option<String>,
    pub length_before: usize,
    #[serde(skip_serializing_if = "std::ops::Not::not", default)]
    pub ambiguous: bool,
}

/// Simple edges of `d`, left to right.
pub fn simple_edges(d: &Diagram, spec: &CoxeterSpec) -> Vec<SimpleEdge> {
    let k = d.k();
    let max = spec.max_generator();
    let mut out = Vec::new();
    for e in d.edges() {
        let (Node::N(i), Node::N(j)) = (e.a, e.b) else { continue };
        if j != i + 1 {
            continue;
        }
        let found = match e.decor.as_slice() {
            [] if i < max => Some((EdgeForm::Plain, i)),
            [Decoration::Dot] if i == 1 => Some((EdgeForm::Dotted, 0)),
            [Decoration::Circ] if i + 1 == k => Some((EdgeForm::Circled, max)),
            _ => None,
        };
        if let Some((form, generator)) = found {
            out.push(SimpleEdge { edge: e.clone(), form, generator });
        }
    }
    out
}

fn edge_with(d: &Diagram, nd: Node) -> &Edge {
    &d.edges()[d.edge_at(nd)]
}

fn has_dot(e: &Edge) -> bool {
    e.decor.iter().any(|x| x.is_left())
}

fn has_right(e: &Edge) -> bool {
    e.decor.iter().any(|x| x.is_right())
}

fn right_mark(family: Family) -> Decoration {
    match family {
        Family::AffineB => Decoration::Tri,
        Family::AffineD => Decoration::Circ,
    }
}

fn loop_is(l: &[Decoration], kinds: &[Decoration]) -> bool {
    let mut a = l.to_vec();
    let mut b = kinds.to_vec();
    a.sort();
    b.sort();
    a == b
}

/// The types of a simple edge in a non-basic diagram, with their neighbors, in a fixed order.
fn edge_types(d: &Diagram, e: &Edge) -> Vec<(EdgeType, Neighbor)> {
    let k = d.k();
    let i = e.a.index();
    let mut out = Vec::new();
    let right = (i + 2 <= k).then(|| edge_with(d, Node::N(i + 2)));
    let left = (i >= 2).then(|| edge_with(d, Node::N(i - 1)));
    if i == 1 && e.decor.is_empty() && k >= 3 {
        let f = edge_with(d, Node::N(3));
        if f.decor.is_empty() && f.b == Node::S(1) {
            if let Some(l) = d.loops().iter().find(|l| l.as_slice() == [Decoration::Dot]) {
                out.push((EdgeType::PRDot, Neighbor::Loop(l.clone())));
            }
        }
    }
    if let Some(f) = right {
        if f.is_north() && f.b.index() > i + 2 && has_dot(f) {
            out.push((EdgeType::UR, Neighbor::Edge(f.clone())));
        }
    }
    if let Some(f) = left {
        if f.is_north() && f.a.index() < i - 1 && has_right(f) {
            out.push((EdgeType::UL, Neighbor::Edge(f.clone())));
        }
    }
    let enclosing = d
        .edges()
        .iter()
        .filter(|f| f.is_north() && f.a.index() < i && f.b.index() > i + 1)
        .min_by_key(|f| f.b.index() - f.a.index());
    if let Some(f) = enclosing {
        out.push((EdgeType::N, Neighbor::Edge(f.clone())));
    }
    if let Some(f) = right {
        if f.is_propagating() && f.b.index() <= i {
            out.push((EdgeType::PR, Neighbor::Edge(f.clone())));
        }
    }
    if let Some(f) = left {
        if f.is_propagating() && f.b.index() > i {
            out.push((EdgeType::PL, Neighbor::Edge(f.clone())));
        }
    }
    if let Some(f) = right {
        if f.is_vertical() && has_dot(f) {
            out.push((EdgeType::SR, Neighbor::Edge(f.clone())));
        }
    }
    if let Some(f) = left {
        if f.is_vertical() && has_right(f) {
            out.push((EdgeType::SL, Neighbor::Edge(f.clone())));
        }
    }
    out
}

/// Whether an ALT-diagram is basic: simple edges, plain verticals, south edges and loops only.
pub fn is_basic(d: &Diagram, spec: &CoxeterSpec) -> bool {
    let simple = simple_edges(d, spec);
    d.edges().iter().all(|e| {
        e.is_south() || (e.is_vertical() && e.decor.is_empty()) || simple.iter().any(|s| &s.edge == e)
    })
}

fn basic_suitable(d: &Diagram, spec: &CoxeterSpec) -> Vec<SuitableEdge> {
    let family = spec.family;
    let mark = right_mark(family);
    let k = d.k();
    let simple = simple_edges(d, spec);
    let mut out = Vec::new();
    let make = |s: &SimpleEdge, kind, neighbor, ambiguous| SuitableEdge {
        edge: s.edge.clone(),
        form: s.form,
        kind,
        neighbor,
        generator: s.generator,
        ambiguous,
    };
    if let Some(l) = d.loops().iter().find(|l| loop_is(l, &[Decoration::Dot, mark])) {
        for s in &simple {
            out.push(make(s, EdgeType::BasicA, Neighbor::Loop(l.clone()), false));
        }
        return out;
    }
    if !d.loops().is_empty() {
        let dot = d.loops().iter().find(|l| l.as_slice() == [Decoration::Dot]);
        let circ = d.loops().iter().find(|l| l.as_slice() == [Decoration::Circ]);
        for s in &simple {
            let i = s.edge.a.index();
            if let (Some(l), true) = (dot, i == 1) {
                out.push(make(s, EdgeType::BasicB, Neighbor::Loop(l.clone()), false));
            } else if let (Some(l), true, Family::AffineD) = (circ, i + 1 == k, family) {
                out.push(make(s, EdgeType::BasicB, Neighbor::Loop(l.clone()), false));
            }
        }
        return out;
    }
    let south: Vec<&Edge> = d.edges().iter().filter(|e| e.is_south()).collect();
    let decorated = south.iter().any(|e| !e.decor.is_empty());
    let rightmost_dot = south.iter().filter(|e| has_dot(e)).max_by_key(|e| e.a.index()).copied();
    let leftmost_right = south.iter().filter(|e| has_right(e)).min_by_key(|e| e.a.index()).copied();
    for s in &simple {
        let i = s.edge.a.index();
        let mut crossed: Vec<&Edge> =
            south.iter().filter(|e| e.span().0 <= i && e.span().1 > i).copied().collect();
        crossed.sort_by_key(|e| std::cmp::Reverse(e.span().1 - e.span().0));
        if !decorated {
            if let Some(f) = crossed.first() {
                out.push(make(s, EdgeType::BasicC, Neighbor::Edge((*f).clone()), false));
            }
            continue;
        }
        let qualifying: Vec<&Edge> = crossed
            .iter()
            .copied()
            .filter(|e| (has_dot(e) && has_right(e)) || Some(*e) == rightmost_dot || Some(*e) == leftmost_right)
            .collect();
        if let Some(f) = qualifying.first() {
            out.push(make(s, EdgeType::BasicD, Neighbor::Edge((*f).clone()), qualifying.len() > 1));
        }
    }
    out
}

/// All suitable edges of an ALT-diagram, left to right.
pub fn suitable_edges(d: &Diagram, spec: &CoxeterSpec) -> Result<Vec<SuitableEdge>> {
    check_alt(d, spec)?;
    if is_basic(d, spec) {
        return Ok(basic_suitable(d, spec));
    }
    let mut out = Vec::new();
    for s in simple_edges(d, spec) {
        if let Some((kind, neighbor)) = edge_types(d, &s.edge).into_iter().next() {
            out.push(SuitableEdge { edge: s.edge, form: s.form, kind, neighbor, generator: s.generator, ambiguous: false });
        }
    }
    Ok(out)
}

fn check_alt(d: &Diagram, spec: &CoxeterSpec) -> Result<()> {
    if d.is_identity() {
        return Err(Error::IdentityDiagram);
    }
    let rep = check_clauses(d, spec);
    if !rep.admissible {
        return Err(Error::NotAdmissible(rep.violation.unwrap_or_default()));
    }
    if classify_diagram(d, spec)?.tag != FamilyTag::Alt {
        return Err(Error::NotAlt);
    }
    Ok(())
}

/// The leftmost suitable edge of an ALT-diagram.
pub fn suitable_edge(d: &Diagram, spec: &CoxeterSpec) -> Result<SuitableEdge> {
    suitable_edges(d, spec)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::InternalAssertion(format!("no suitable edge in {d}")))
}

/// Decoration sequences obtained from `s` by splitting it in two; the cut may consume one
/// decoration and each side may gain one.
fn splits(s: &[Decoration], alphabet: &[Decoration]) -> Vec<(Vec<Decoration>, Vec<Decoration>)> {
    let mut out = BTreeSet::new();
    let opts: Vec<Option<Decoration>> = std::iter::once(None).chain(alphabet.iter().copied().map(Some)).collect();
    for p in 0..=s.len() {
        let consumed = if p < s.len() { vec![false, true] } else { vec![false] };
        for eat in consumed {
            let rest = if eat { &s[p + 1..] } else { &s[p..] };
            for x in &opts {
                for y in &opts {
                    let mut a = s[..p].to_vec();
                    a.extend(x);
                    let mut b: Vec<Decoration> = y.iter().copied().collect();
                    b.extend(rest);
                    out.insert((a, b));
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Linear readings of a loop, with one decoration added or removed.
fn openings(l: &[Decoration], alphabet: &[Decoration]) -> Vec<Vec<Decoration>> {
    let mut base = BTreeSet::new();
    let rev: Vec<Decoration> = l.iter().rev().copied().collect();
    for src in [l, rev.as_slice()] {
        for r in 0..src.len().max(1) {
            let v: Vec<Decoration> = src.iter().skip(r).chain(src.iter().take(r)).copied().collect();
            base.insert(v);
        }
    }
    let mut out = BTreeSet::new();
    for v in base {
        for p in 0..v.len() {
            let mut w = v.clone();
            w.remove(p);
            out.insert(w);
            for &x in alphabet {
                let mut w = v.clone();
                w[p] = x;
                out.insert(w);
            }
        }
        for &x in alphabet {
            let mut w = v.clone();
            w.push(x);
            out.insert(w);
        }
        out.insert(v);
    }
    out.into_iter().collect()
}

fn alphabet(family: Family) -> &'static [Decoration] {
    match family {
        Family::AffineB => &[Decoration::Dot, Decoration::Circ, Decoration::Tri],
        Family::AffineD => &[Decoration::Dot, Decoration::Circ],
    }
}

const HEIGHT_ORDER_CAP: usize = 20_000;

/// All top-to-bottom orders of the middle decorations, when the diagram has one cup.
fn height_orders(edges: &[Edge], loops: &[Vec<Decoration>]) -> Vec<Vec<HeightRef>> {
    let a = edges.iter().filter(|e| e.is_north()).count();
    let mut objs: Vec<(Obj, usize)> = Vec::new();
    if a == 1 {
        for (i, e) in edges.iter().enumerate() {
            if e.is_propagating() && !e.decor.is_empty() {
                objs.push((Obj::Edge(i), e.decor.len()));
            }
        }
        for (i, l) in loops.iter().enumerate() {
            if !l.is_empty() {
                objs.push((Obj::Loop(i), l.len()));
            }
        }
    }
    let mut out = Vec::new();
    let mut cur = Vec::new();
    let mut used = vec![0; objs.len()];
    interleave(&objs, &mut used, &mut cur, &mut out);
    out
}

fn interleave(objs: &[(Obj, usize)], used: &mut [usize], cur: &mut Vec<HeightRef>, out: &mut Vec<Vec<HeightRef>>) {
    if out.len() >= HEIGHT_ORDER_CAP {
        return;
    }
    if objs.iter().zip(used.iter()).all(|((_, n), u)| u == n) {
        out.push(cur.clone());
        return;
    }
    for x in 0..objs.len() {
        if used[x] < objs[x].1 {
            cur.push(HeightRef { obj: objs[x].0, index: used[x] });
            used[x] += 1;
            interleave(objs, used, cur, out);
            used[x] -= 1;
            cur.pop();
        }
    }
}

/// Candidate diagrams obtained by deleting `e`, cutting `neighbor` and joining its ends to the
/// nodes of `e`.
fn rerouted(d: &Diagram, e: &Edge, neighbor: &Neighbor, family: Family) -> Vec<Diagram> {
    let (i, j) = (e.a, e.b);
    let alpha = alphabet(family);
    let mut base_edges: Vec<Edge> = d.edges().iter().filter(|f| *f != e).cloned().collect();
    let mut base_loops: Vec<Vec<Decoration>> = d.loops().to_vec();
    let mut shapes: Vec<(Vec<Edge>, Vec<Vec<Decoration>>)> = Vec::new();
    match neighbor {
        Neighbor::Edge(f) => {
            let Some(pos) = base_edges.iter().position(|x| x == f) else { return Vec::new() };
            base_edges.remove(pos);
            let rev: Vec<Decoration> = f.decor.iter().rev().copied().collect();
            for (x, y, s) in [(f.a, f.b, f.decor.clone()), (f.b, f.a, rev)] {
                for (p, q) in splits(&s, alpha) {
                    let mut es = base_edges.clone();
                    es.push(Edge::new(x, i, p));
                    es.push(Edge::new(j, y, q));
                    shapes.push((es, base_loops.clone()));
                }
            }
        }
        Neighbor::Loop(l) => {
            let Some(pos) = base_loops.iter().position(|x| x == l) else { return Vec::new() };
            base_loops.remove(pos);
            // an opened absorber loop leaves a partner token that the loop swallows again
            let partner = match (l.as_slice(), family) {
                ([Decoration::Dot], _) => Some(Decoration::Dot),
                ([Decoration::Circ], Family::AffineD) => Some(Decoration::Circ),
                _ => None,
            };
            for v in openings(l, alpha) {
                let mut es = base_edges.clone();
                es.push(Edge::new(i, j, v));
                if let Some(x) = partner {
                    for t in 0..es.len() - 1 {
                        for front in [true, false] {
                            let mut es2 = es.clone();
                            if front {
                                es2[t].decor.insert(0, x);
                            } else {
                                es2[t].decor.push(x);
                            }
                            shapes.push((es2, base_loops.clone()));
                        }
                    }
                }
                shapes.push((es, base_loops.clone()));
            }
        }
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (es, ls) in shapes {
        for h in height_orders(&es, &ls) {
            if let Ok(c) = Diagram::from_parts(d.k(), es.clone(), ls.clone(), h) {
                if seen.insert(c.canonical_key()) {
                    out.push(c);
                }
            }
        }
    }
    out
}

/// Whether `c` is admissible, of length `target`, and `D_g·c = d` with coefficient 1.
fn witnesses(d: &Diagram, g: usize, c: &Diagram, target: usize, spec: &CoxeterSpec) -> Result<bool> {
    if !check_clauses(c, spec).admissible {
        return Ok(false);
    }
    if length(c, spec).ok() != Some(target) {
        return Ok(false);
    }
    let r = multiply_diagrams(&simple_diagram(spec, g)?, c, spec.family)?;
    Ok(r.coeff.is_one() && &r.diagram == d)
}

/// Loops that absorb matching decorations elsewhere in the diagram.
fn absorbers(d: &Diagram, family: Family) -> Vec<Neighbor> {
    let mut out: Vec<Neighbor> = Vec::new();
    for l in d.loops() {
        let hit = match l.as_slice() {
            [Decoration::Dot] => true,
            [Decoration::Circ] => family == Family::AffineD,
            _ => false,
        };
        let nb = Neighbor::Loop(l.clone());
        if hit && !out.contains(&nb) {
            out.push(nb);
        }
    }
    out
}

/// The unique re-routing through `neighbor` witnessing `d = D_g·D′`, if any.
fn reroute_search(d: &Diagram, e: &Edge, g: usize, neighbor: &Neighbor, spec: &CoxeterSpec) -> Result<Option<Diagram>> {
    let target = length(d, spec)?
        .checked_sub(1)
        .ok_or_else(|| Error::InternalAssertion("identity has no factor".into()))?;
    let mut tries = vec![neighbor.clone()];
    tries.extend(absorbers(d, spec.family).into_iter().filter(|l| l != neighbor));
    for nb in &tries {
        for c in rerouted(d, e, nb, spec.family) {
            if witnesses(d, g, &c, target, spec)? {
                return Ok(Some(c));
            }
        }
    }
    Ok(None)
}

/// Cut-and-paste on a suitable edge: returns `g` and `D′` with `D = D_g·D′` and `ℓ(D′) = ℓ(D)−1`.
pub fn cut_and_paste(d: &Diagram, e: &SuitableEdge, spec: &CoxeterSpec) -> Result<(usize, Diagram)> {
    if !suitable_edges(d, spec)?.iter().any(|s| s == e) {
        return Err(Error::NotSuitable);
    }
    match reroute_search(d, &e.edge, e.generator, &e.neighbor, spec)? {
        Some(c) => Ok((e.generator, c)),
        None => Err(Error::InternalAssertion(format!("cut-and-paste of {} in {d} has no witness", e.neighbor))),
    }
}

fn neighbor_objects(d: &Diagram) -> Vec<Neighbor> {
    d.edges()
        .iter()
        .cloned()
        .map(Neighbor::Edge)
        .chain(d.loops().iter().cloned().map(Neighbor::Loop))
        .collect()
}

/// The K_L operation on an LP or LRP diagram, or its mirror K_R on an RP diagram.
///
/// Returns the stripped generator, the shorter diagram and whether the mirror was used.
pub fn k_operation(d: &Diagram, spec: &CoxeterSpec) -> Result<(usize, Diagram, StepOp)> {
    let class = classify_diagram(d, spec)?;
    let k = d.k();
    let (cup_left, vertical, op) = match class.tag {
        FamilyTag::Lp | FamilyTag::Lrp => {
            let jl = class.j_l.expect("LP");
            (jl, jl - 1, StepOp::KLeft)
        }
        FamilyTag::Rp => {
            let jr = class.j_r.expect("RP");
            if jr + 1 > k || jr < 2 {
                return Err(Error::PreconditionNotMet(format!("no vertical after j_r={jr}")));
            }
            (jr - 1, jr + 1, StepOp::KRight)
        }
        t => return Err(Error::WrongClass(format!("{t} is not a P-diagram"))),
    };
    let simple = simple_edges(d, spec);
    let Some(s) = simple.iter().find(|s| s.edge.a == Node::N(cup_left) && s.form == EdgeForm::Plain) else {
        return Err(Error::PreconditionNotMet("the edge leaving the peak is not simple".into()));
    };
    let hat = inner_diagram(d, spec)?;
    let wanted = if op == StepOp::KLeft { EdgeType::PR } else { EdgeType::PL };
    let typed = edge_types(d, &s.edge).iter().any(|(t, _)| *t == wanted);
    if !(typed || is_basic(&hat, &hat_spec(&hat, spec)?)) {
        return Err(Error::PreconditionNotMet("neither the peak type nor a basic inner diagram".into()));
    }
    let f = edge_with(d, Node::N(vertical)).clone();
    if !f.is_vertical() {
        return Err(Error::PreconditionNotMet("no vertical next to the peak".into()));
    }
    match reroute_search(d, &s.edge, s.generator, &Neighbor::Edge(f), spec)? {
        Some(c) => Ok((s.generator, c, op)),
        None => Err(Error::PreconditionNotMet("no shorter witness through the vertical".into())),
    }
}

fn hat_spec(hat: &Diagram, spec: &CoxeterSpec) -> Result<CoxeterSpec> {
    let kk = hat.k();
    let n = kk
        .checked_sub(2)
        .filter(|&n| n >= 1)
        .ok_or_else(|| Error::PreconditionNotMet(format!("inner box of width {kk}")))?;
    Ok(CoxeterSpec { family: spec.family, n })
}

/// Cut-and-paste inside the inner diagram of a P-diagram, lifted back to the whole box.
fn inner_step(d: &Diagram, spec: &CoxeterSpec) -> Result<(usize, Diagram, FactorStep)> {
    let class = classify_diagram(d, spec)?;
    let j_l = class.j_l.unwrap_or(1);
    let hat = inner_diagram(d, spec)?;
    let hs = hat_spec(&hat, spec)?;
    let shift = |nd: Node| match nd {
        Node::N(i) => Node::N(i + j_l - 1),
        Node::S(i) => Node::S(i + j_l - 1),
    };
    let len = length(d, spec)?;
    let simple = simple_edges(d, spec);
    let lifted_candidates: Vec<SuitableEdge> = suitable_edges(&hat, &hs).unwrap_or_default();
    let mut tried = Vec::new();
    for se in lifted_candidates {
        let (a, b) = (shift(se.edge.a), shift(se.edge.b));
        let Some(s) = simple.iter().find(|s| s.edge.a == a && s.edge.b == b) else { continue };
        let mapped = match &se.neighbor {
            Neighbor::Edge(f) => {
                let (x, y) = (shift(f.a), shift(f.b));
                d.edges().iter().find(|g| g.a == x && g.b == y).cloned().map(Neighbor::Edge)
            }
            Neighbor::Loop(l) => d.loops().iter().find(|m| *m == l).cloned().map(Neighbor::Loop),
        };
        let mut order: Vec<Neighbor> = mapped.into_iter().collect();
        order.extend(neighbor_objects(d));
        for nb in order {
            if let Some(c) = reroute_search(d, &s.edge, s.generator, &nb, spec)? {
                let step = FactorStep {
                    op: StepOp::Inner,
                    generators: vec![s.generator],
                    edge: Some(format!("{}-{}", s.edge.a, s.edge.b)),
                    kind: Some(se.kind),
                    neighbor: Some(nb.to_string()),
                    length_before: len,
                    ambiguous: se.ambiguous,
                };
                return Ok((s.generator, c, step));
            }
        }
        tried.push(se.kind);
    }
    Err(Error::InternalAssertion(format!("no inner suitable edge lifts in {d} (tried {tried:?})")))
}

/// Positions along the Coxeter chain: 1 is the left fork, `n+1` the right end.
fn letters_at(p: usize, n: usize, family: Family, variant: usize, bounce: bool) -> Option<Vec<usize>> {
    if p > 1 && p <= n {
        return (variant == 0).then(|| vec![p]);
    }
    let options: Vec<Vec<usize>> = if p == 1 {
        vec![vec![0, 1], vec![0], vec![1]]
    } else {
        match family {
            Family::AffineB => vec![vec![n + 1]],
            Family::AffineD => vec![vec![n + 1, n + 2], vec![n + 1], vec![n + 2]],
        }
    };
    if bounce {
        (variant == 0).then(|| options[0].clone())
    } else {
        options.get(variant).cloned()
    }
}

/// The word of the zigzag path from `p0` (moving in direction `up`) to `p1` with `m` bounces.
fn path_word(n: usize, family: Family, p0: usize, v0: usize, up: bool, m: usize, p1: usize, v1: usize, max: usize) -> Option<Word> {
    let mut seq = vec![p0];
    let (mut cur, mut up, mut rem) = (p0, up, m);
    while !(rem == 0 && cur == p1) {
        if seq.len() > max {
            return None;
        }
        cur = if up { cur.checked_add(1).filter(|&c| c <= n + 1)? } else { cur.checked_sub(1).filter(|&c| c >= 1)? };
        seq.push(cur);
        if (cur == 1 || cur == n + 1) && !(rem == 0 && cur == p1) {
            rem = rem.checked_sub(1)?;
            up = !up;
        }
    }
    let last = seq.len() - 1;
    let mut w = Vec::new();
    for (t, &p) in seq.iter().enumerate() {
        let letters = if t == 0 {
            letters_at(p, n, family, v0, false)?
        } else if t == last {
            letters_at(p, n, family, v1, false)?
        } else {
            letters_at(p, n, family, 0, true)?
        };
        w.extend(letters);
    }
    if last == 0 && v0 != v1 {
        return None;
    }
    Some(w)
}

/// A reduced word for a PZZ-diagram, or a P-diagram with one cup, as a zigzag path.
pub fn factor_pzz_closed_form(d: &Diagram, spec: &CoxeterSpec) -> Result<Word> {
    let class = classify_diagram(d, spec)?;
    let eligible = class.tag == FamilyTag::Pzz || (class.tag.is_peak() && d.a_count() == 1);
    if !eligible {
        return Err(Error::WrongClass(format!("{} with a(D)={}", class.tag, d.a_count())));
    }
    let len = length(d, spec)?;
    let n = spec.n;
    for m in 0..=len {
        for p0 in 1..=n + 1 {
            for p1 in 1..=n + 1 {
                for up in [true, false] {
                    for v0 in 0..3 {
                        for v1 in 0..3 {
                            let Some(w) = path_word(n, spec.family, p0, v0, up, m, p1, v1, len + 2) else { continue };
                            if w.len() != len {
                                continue;
                            }
                            if let Ok(x) = theta(&w, spec) {
                                if x.as_basis_diagram() == Some(d) {
                                    return Ok(w);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Err(Error::InternalAssertion(format!("no zigzag word for {d}")))
}

/// A reduced FC word `w` with `θ(w) = D`.
pub fn factorize(d: &Diagram, spec: &CoxeterSpec) -> Result<Word> {
    Ok(factorize_traced(d, spec)?.0)
}

/// As [`factorize`], with one trace entry per step.
pub fn factorize_traced(d: &Diagram, spec: &CoxeterSpec) -> Result<(Word, Vec<FactorStep>)> {
    let rep = check_clauses(d, spec);
    if !rep.admissible {
        return Err(Error::NotAdmissible(rep.violation.unwrap_or_default()));
    }
    let not_realized = || Error::NotAdmissible("no reduced FC word maps to the diagram".into());
    let (word, trace) = descend(d, spec).map_err(|_| not_realized())?;
    let back = theta(&word, spec).map_err(|_| not_realized())?;
    let len = length(d, spec)?;
    match back.as_basis_diagram() {
        Some(b) if b.canonical_key() == d.canonical_key() && word.len() == len => Ok((word, trace)),
        _ => Err(not_realized()),
    }
}

fn descend(d: &Diagram, spec: &CoxeterSpec) -> Result<(Word, Vec<FactorStep>)> {
    let mut word = Vec::new();
    let mut trace = Vec::new();
    let mut cur = d.clone();
    let start = length(d, spec)?;
    while !cur.is_identity() {
        let len = length(&cur, spec)?;
        if word.len() >= start {
            return Err(Error::NotAdmissible("factorization does not terminate".into()));
        }
        let class = classify_diagram(&cur, spec)?;
        if class.tag == FamilyTag::Pzz || (class.tag.is_peak() && cur.a_count() == 1) {
            let w = factor_pzz_closed_form(&cur, spec)?;
            trace.push(FactorStep {
                op: StepOp::ClosedForm,
                generators: w.clone(),
                edge: None,
                kind: None,
                neighbor: None,
                length_before: len,
                ambiguous: false,
            });
            word.extend(w);
            break;
        }
        let (g, next) = if class.tag.is_peak() {
            match k_operation(&cur, spec) {
                Ok((g, next, op)) => {
                    trace.push(FactorStep {
                        op,
                        generators: vec![g],
                        edge: Some(format!("{}-{}", g, g + 1)),
                        kind: None,
                        neighbor: None,
                        length_before: len,
                        ambiguous: false,
                    });
                    (g, next)
                }
                Err(Error::PreconditionNotMet(_)) => {
                    let (g, next, step) = inner_step(&cur, spec)?;
                    trace.push(step);
                    (g, next)
                }
                Err(e) => return Err(e),
            }
        } else {
            let e = suitable_edge(&cur, spec)?;
            let (g, next) = cut_and_paste(&cur, &e, spec)?;
            trace.push(FactorStep {
                op: StepOp::CutAndPaste,
                generators: vec![g],
                edge: Some(format!("{}-{}", e.edge.a, e.edge.b)),
                kind: Some(e.kind),
                neighbor: Some(e.neighbor.to_string()),
                length_before: len,
                ambiguous: e.ambiguous,
            });
            (g, next)
        };
        word.push(g);
        cur = next;
    }
    Ok((word, trace))
}
