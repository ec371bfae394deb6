//! Exhaustive enumeration of decorated diagrams in a small box, independent of θ.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::admissible::{check_clauses, is_admissible, length};
use crate::coxeter::{CoxeterSpec, Family};
use crate::diagram::{reduce_diagram, Decoration, Diagram, Edge, HeightRef, Node, Obj};

/// Bounds for [`enumerate_irreducible`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumBounds {
    /// Decorations per edge.
    pub per_edge: usize,
    /// Decorations on all edges and loops together.
    pub total: usize,
    /// Loops.
    pub loops: usize,
}

impl EnumBounds {
    /// Bounds that cover every admissible diagram of length at most `max_len`.
    pub fn for_length(spec: &CoxeterSpec, max_len: usize) -> Self {
        let per_pair = spec.n + 1;
        let per_edge = 2 * (max_len / per_pair) + 3;
        EnumBounds { per_edge, total: max_len + 2, loops: max_len.min(2 * (max_len / spec.n.max(1)) + 2) }
    }
}

/// All non-crossing perfect matchings of the `2k` boundary nodes.
pub fn planar_matchings(k: usize) -> Vec<Vec<(Node, Node)>> {
    let node = |p: usize| if p < k { Node::N(p + 1) } else { Node::S(2 * k - p) };
    let mut out = Vec::new();
    let pts: Vec<usize> = (0..2 * k).collect();
    matchings(&pts, &mut Vec::new(), &mut out);
    out.into_iter().map(|m| m.into_iter().map(|(a, b)| (node(a), node(b))).collect()).collect()
}

fn matchings(pts: &[usize], cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
    if pts.is_empty() {
        out.push(cur.clone());
        return;
    }
    let first = pts[0];
    for j in (1..pts.len()).step_by(2) {
        cur.push((first, pts[j]));
        let inner = &pts[1..j];
        let outer = &pts[j + 1..];
        let mut inner_out = Vec::new();
        matchings(inner, &mut Vec::new(), &mut inner_out);
        let mut outer_out = Vec::new();
        matchings(outer, &mut Vec::new(), &mut outer_out);
        for a in &inner_out {
            for b in &outer_out {
                let mut m = cur.clone();
                m.extend(a);
                m.extend(b);
                out.push(m);
            }
        }
        cur.pop();
    }
}

fn right_letters(family: Family) -> &'static [Decoration] {
    match family {
        Family::AffineB => &[Decoration::Circ, Decoration::Tri],
        Family::AffineD => &[Decoration::Circ],
    }
}

/// Irreducible decoration sequences of length at most `max` using the allowed sides.
fn sequences(family: Family, left: bool, right: bool, max: usize, loose: bool) -> Vec<Vec<Decoration>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max {
        let mut next = Vec::new();
        for s in &frontier {
            let last_left = s.last().map(|x: &Decoration| x.is_left());
            if left && (loose || last_left != Some(true)) {
                let mut t = s.clone();
                t.push(Decoration::Dot);
                next.push(t);
            }
            if right && (loose || last_left != Some(false)) {
                for &r in right_letters(family) {
                    let mut t = s.clone();
                    t.push(r);
                    next.push(t);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn loop_kinds(family: Family, one_cup: bool) -> Vec<Vec<Decoration>> {
    use Decoration::*;
    match (family, one_cup) {
        (Family::AffineB, true) => vec![vec![Dot]],
        (Family::AffineB, false) => vec![vec![Dot], vec![Dot, Tri]],
        (Family::AffineD, true) => vec![vec![Dot], vec![Circ]],
        (Family::AffineD, false) => vec![vec![Dot], vec![Circ], vec![Dot, Circ]],
    }
}

fn multisets(kinds: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0; kinds];
    fn go(i: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for c in 0..=left {
            cur[i] = c;
            go(i + 1, left - c, cur, out);
        }
        cur[i] = 0;
    }
    go(0, max, &mut cur, &mut out);
    out
}

/// Every decorated diagram in the box of `spec` within `bounds` on which no relation applies.
///
/// With one cup, each interleaving of the middle decorations is a separate diagram.
pub fn enumerate_irreducible(spec: &CoxeterSpec, bounds: EnumBounds) -> Vec<Diagram> {
    let mut out = Vec::new();
    for_each_candidate(spec, bounds, |d| {
        if is_irreducible(&d, spec.family) {
            out.push(d);
        }
    });
    out
}

fn for_each_candidate(spec: &CoxeterSpec, bounds: EnumBounds, mut f: impl FnMut(Diagram)) {
    for m in planar_matchings(spec.box_width()) {
        candidates_on(spec, bounds, &m, &mut f);
    }
}

/// Decorated versions of one matching.
fn candidates_on(spec: &CoxeterSpec, bounds: EnumBounds, m: &[(Node, Node)], f: &mut impl FnMut(Diagram)) {
    let k = spec.box_width();
    let family = spec.family;
    let mut seen = BTreeSet::new();
    let plain: Vec<Edge> = m.iter().map(|&(a, b)| Edge::plain(a, b)).collect();
    let Ok(shape) = Diagram::from_parts(k, plain, Vec::new(), Vec::new()) else { return };
    let a = shape.a_count();
    if a == 0 {
        f(shape);
        return;
    }
    let options: Vec<Vec<Vec<Decoration>>> = shape
        .edges()
        .iter()
        .enumerate()
        .map(|(e, edge)| {
            let loose = a == 1 && edge.is_propagating();
            sequences(family, shape.left_exposed(e), shape.right_exposed(e), bounds.per_edge, loose)
        })
        .collect();
    let kinds = loop_kinds(family, a == 1);
    let loop_sets = multisets(kinds.len(), bounds.loops);
    let mut emit = |edges: &[Edge], budget: usize| {
        for ls in &loop_sets {
            let loops: Vec<Vec<Decoration>> =
                ls.iter().enumerate().flat_map(|(i, &c)| std::iter::repeat_n(kinds[i].clone(), c)).collect();
            if loops.iter().map(Vec::len).sum::<usize>() > budget {
                continue;
            }
            for h in middle_orders(edges, &loops, a) {
                if let Ok(d) = Diagram::from_parts(k, edges.to_vec(), loops.clone(), h) {
                    if seen.insert(d.canonical_key()) {
                        f(d);
                    }
                }
            }
        }
    };
    assign(shape.edges(), &options, 0, bounds.total, &mut Vec::new(), &mut emit);
}

fn assign(
    shape: &[Edge],
    options: &[Vec<Vec<Decoration>>],
    i: usize,
    budget: usize,
    cur: &mut Vec<Edge>,
    emit: &mut impl FnMut(&[Edge], usize),
) {
    if i == shape.len() {
        emit(cur, budget);
        return;
    }
    for o in options[i].iter().filter(|o| o.len() <= budget) {
        cur.push(Edge { a: shape[i].a, b: shape[i].b, decor: o.clone() });
        assign(shape, options, i + 1, budget - o.len(), cur, emit);
        cur.pop();
    }
}

/// Whether no relation applies to `d`.
pub fn is_irreducible(d: &Diagram, family: Family) -> bool {
    reduce_diagram(d, family).is_ok_and(|r| r.coeff.is_one() && r.diagram.canonical_key() == d.canonical_key())
}

fn middle_orders(edges: &[Edge], loops: &[Vec<Decoration>], a: usize) -> Vec<Vec<HeightRef>> {
    let mut objs: Vec<(Obj, usize)> = Vec::new();
    if a == 1 {
        for (i, e) in edges.iter().enumerate() {
            if e.is_propagating() && !e.decor.is_empty() {
                objs.push((Obj::Edge(i), e.decor.len()));
            }
        }
        for (i, l) in loops.iter().enumerate() {
            objs.push((Obj::Loop(i), l.len()));
        }
    }
    let mut out = Vec::new();
    let mut used = vec![0; objs.len()];
    let mut cur = Vec::new();
    interleave(&objs, &mut used, &mut cur, &mut out);
    out
}

fn interleave(objs: &[(Obj, usize)], used: &mut [usize], cur: &mut Vec<HeightRef>, out: &mut Vec<Vec<HeightRef>>) {
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

/// Admissible diagrams of length at most `max_len`, found by exhaustive search.
pub fn enumerate_admissible(spec: &CoxeterSpec, max_len: usize) -> Vec<(Diagram, usize)> {
    let bounds = EnumBounds::for_length(spec, max_len);
    let mut out: Vec<(Diagram, usize)> = planar_matchings(spec.box_width())
        .par_iter()
        .flat_map_iter(|m| {
            let mut found = Vec::new();
            candidates_on(spec, bounds, m, &mut |d| {
                if !check_clauses(&d, spec).admissible {
                    return;
                }
                match length(&d, spec) {
                    Ok(l) if l <= max_len && is_admissible(&d, spec).admissible => found.push((d, l)),
                    _ => {}
                }
            });
            found
        })
        .collect();
    out.sort_by(|x, y| x.1.cmp(&y.1).then_with(|| x.0.cmp(&y.0)));
    out
}
