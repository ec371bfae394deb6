//! SVG and ASCII pictures of diagrams.
//!
//! With one cup, decorations on propagating edges and loops are drawn at rows that follow the height order.
//! L• loops sit in a column left of the box; loops carrying an R-decoration are placed in the middle.

use std::fmt::Write as _;

use crate::diagram::{Decoration, Diagram, Edge, Obj};

const STEP: f64 = 60.0;
const MARGIN: f64 = 50.0;
const TOP: f64 = 30.0;

fn nest_depths(d: &Diagram, north: bool) -> Vec<usize> {
    let on_face = |e: &Edge| if north { e.is_north() } else { e.is_south() };
    let mut order: Vec<usize> = (0..d.edges().len()).filter(|&i| on_face(&d.edges()[i])).collect();
    order.sort_by_key(|&i| {
        let (a, b) = d.edges()[i].span();
        b - a
    });
    let mut depth = vec![0; d.edges().len()];
    for &i in &order {
        let (a, b) = d.edges()[i].span();
        let deepest = order
            .iter()
            .filter(|&&j| {
                let (x, y) = d.edges()[j].span();
                a < x && y < b
            })
            .map(|&j| depth[j])
            .max()
            .unwrap_or(0);
        depth[i] = deepest + 1;
    }
    depth
}

/// Row of every height-ordered decoration, as (object, index) → rank.
fn height_rank(d: &Diagram, obj: Obj, index: usize) -> Option<usize> {
    d.heights().iter().position(|h| h.obj == obj && h.index == index)
}

fn glyph_svg(out: &mut String, x: f64, y: f64, g: Decoration) {
    match g {
        Decoration::Dot => {
            let _ = writeln!(out, r#"<circle cx="{x:.1}" cy="{y:.1}" r="5" fill="black"/>"#);
        }
        Decoration::Circ => {
            let _ = writeln!(out, r#"<circle cx="{x:.1}" cy="{y:.1}" r="5" fill="white" stroke="black" stroke-width="1.5"/>"#);
        }
        Decoration::Tri => {
            let _ = writeln!(
                out,
                r#"<polygon points="{:.1},{:.1} {:.1},{:.1} {:.1},{:.1}" fill="white" stroke="black" stroke-width="1.5"/>"#,
                x,
                y - 6.0,
                x - 6.0,
                y + 5.0,
                x + 6.0,
                y + 5.0
            );
        }
    }
}

fn bezier(p: [(f64, f64); 4], t: f64) -> (f64, f64) {
    let u = 1.0 - t;
    let c = [u * u * u, 3.0 * u * u * t, 3.0 * u * t * t, t * t * t];
    (
        c.iter().zip(&p).map(|(c, q)| c * q.0).sum(),
        c.iter().zip(&p).map(|(c, q)| c * q.1).sum(),
    )
}

/// An SVG picture of `d`.
pub fn render_svg(d: &Diagram) -> String {
    let k = d.k();
    let rows = d.heights().len().max(d.edges().iter().map(|e| e.decor.len()).max().unwrap_or(0)).max(2);
    let body = (rows as f64 + 1.0) * 24.0 + 120.0;
    let width = 2.0 * MARGIN + STEP * (k as f64 - 1.0);
    let height = body + 2.0 * TOP;
    let (north_y, south_y) = (TOP, TOP + body);
    let x_of = |i: usize| MARGIN + STEP * (i as f64 - 1.0);
    let row_y = |r: usize| north_y + 60.0 + (r as f64 + 1.0) * (body - 120.0) / (rows as f64 + 1.0);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    let _ = writeln!(
        out,
        r##"<rect x="{:.1}" y="{north_y:.1}" width="{:.1}" height="{body:.1}" fill="none" stroke="#888" stroke-dasharray="4 3"/>"##,
        MARGIN / 2.0,
        width - MARGIN
    );
    for i in 1..=k {
        let _ = writeln!(out, r#"<circle cx="{:.1}" cy="{north_y:.1}" r="3" fill="black"/>"#, x_of(i));
        let _ = writeln!(out, r#"<circle cx="{:.1}" cy="{south_y:.1}" r="3" fill="black"/>"#, x_of(i));
    }
    let depth_n = nest_depths(d, true);
    let depth_s = nest_depths(d, false);
    for (ei, e) in d.edges().iter().enumerate() {
        let (a, b) = e.span();
        let (xa, xb) = (x_of(a), x_of(b));
        if e.is_propagating() {
            let (top, bottom) = if e.a.is_north() { (e.a, e.b) } else { (e.b, e.a) };
            let (x0, x1) = (x_of(top.index()), x_of(bottom.index()));
            let _ = writeln!(
                out,
                r#"<line x1="{x0:.1}" y1="{north_y:.1}" x2="{x1:.1}" y2="{south_y:.1}" stroke="black" stroke-width="2"/>"#
            );
            let m = e.decor.len();
            for (j, &g) in e.decor.iter().enumerate() {
                let y = match height_rank(d, Obj::Edge(ei), j) {
                    Some(r) => row_y(r),
                    None => north_y + (j as f64 + 1.0) * body / (m as f64 + 1.0),
                };
                let t = (y - north_y) / body;
                glyph_svg(&mut out, x0 + (x1 - x0) * t, y, g);
            }
            continue;
        }
        let (y, dir, dep) = if e.is_north() { (north_y, 1.0, depth_n[ei]) } else { (south_y, -1.0, depth_s[ei]) };
        let h = dir * 22.0 * dep as f64;
        let p = [(xa, y), (xa, y + h * 1.33), (xb, y + h * 1.33), (xb, y)];
        let _ = writeln!(
            out,
            r#"<path d="M {:.1} {:.1} C {:.1} {:.1} {:.1} {:.1} {:.1} {:.1}" fill="none" stroke="black" stroke-width="2"/>"#,
            p[0].0, p[0].1, p[1].0, p[1].1, p[2].0, p[2].1, p[3].0, p[3].1
        );
        // decorations read left to right
        let m = e.decor.len();
        for (j, &g) in e.decor.iter().enumerate() {
            let (x, yy) = bezier(p, (j as f64 + 1.0) / (m as f64 + 1.0));
            glyph_svg(&mut out, x, yy, g);
        }
    }
    let mut left_slot = 0;
    let mut mid_slot = 0;
    for (li, l) in d.loops().iter().enumerate() {
        let ranked = height_rank(d, Obj::Loop(li), 0);
        let (cx, cy) = if l == &[Decoration::Dot] {
            let y = ranked.map(row_y).unwrap_or_else(|| row_y(left_slot));
            left_slot += 1;
            (MARGIN / 2.0 + 14.0, y)
        } else {
            let y = ranked.map(row_y).unwrap_or(north_y + body / 2.0);
            let x = width / 2.0 + (mid_slot as f64 - (d.loops().len() as f64 - 1.0) / 2.0) * 44.0;
            mid_slot += 1;
            (x, y)
        };
        let r = 10.0 + 6.0 * l.len() as f64;
        let _ = writeln!(out, r#"<circle cx="{cx:.1}" cy="{cy:.1}" r="{r:.1}" fill="none" stroke="black" stroke-width="2"/>"#);
        for (j, &g) in l.iter().enumerate() {
            let ang = std::f64::consts::PI * (1.0 + 2.0 * j as f64 / l.len() as f64);
            glyph_svg(&mut out, cx + r * ang.cos(), cy + r * ang.sin(), g);
        }
    }
    out.push_str("</svg>\n");
    out
}

struct Canvas {
    cells: Vec<Vec<char>>,
}

impl Canvas {
    fn new(w: usize, h: usize) -> Self {
        Canvas { cells: vec![vec![' '; w]; h] }
    }

    fn put(&mut self, x: usize, y: usize, c: char) {
        if y < self.cells.len() && x < self.cells[y].len() {
            self.cells[y][x] = c;
        }
    }

    fn finish(self) -> String {
        let mut s = String::new();
        for row in self.cells {
            let line: String = row.into_iter().collect();
            s.push_str(line.trim_end());
            s.push('\n');
        }
        s
    }
}

/// A text picture of `d`: north labels on top, south labels at the bottom, loops to the right.
pub fn render_ascii(d: &Diagram) -> String {
    let k = d.k();
    let cup_decor = d.edges().iter().filter(|e| !e.is_propagating()).map(|e| e.decor.len()).max().unwrap_or(0);
    let step = (cup_decor + 3).max(4);
    let col = |i: usize| 1 + step * (i - 1);
    let depth_n = nest_depths(d, true);
    let depth_s = nest_depths(d, false);
    let dn = depth_n.iter().copied().max().unwrap_or(0);
    let ds = depth_s.iter().copied().max().unwrap_or(0);
    let prop_decor = d.edges().iter().filter(|e| e.is_propagating()).map(|e| e.decor.len()).max().unwrap_or(0);
    let shift = d
        .edges()
        .iter()
        .filter(|e| e.is_propagating())
        .map(|e| col(e.a.index()).abs_diff(col(e.b.index())))
        .max()
        .unwrap_or(0);
    let mid = shift.max(d.heights().len() + 1).max(prop_decor + 1).max(2);
    let height = 2 + dn + mid + ds;
    let width = col(k) + 2;
    let mut c = Canvas::new(width, height);
    for i in 1..=k {
        let lab = i.to_string();
        for (o, ch) in lab.chars().enumerate() {
            c.put(col(i) + o, 0, ch);
        }
        let lab = format!("{i}'");
        for (o, ch) in lab.chars().enumerate() {
            c.put(col(i) + o, height - 1, ch);
        }
    }
    let mid_top = 1 + dn;
    for (ei, e) in d.edges().iter().enumerate() {
        let (a, b) = e.span();
        if e.is_propagating() {
            let (top, bottom) = if e.a.is_north() { (e.a, e.b) } else { (e.b, e.a) };
            let (x0, x1) = (col(top.index()) as f64, col(bottom.index()) as f64);
            for y in 1..mid_top {
                c.put(col(top.index()), y, '│');
            }
            for y in mid_top + mid..height - 1 {
                c.put(col(bottom.index()), y, '│');
            }
            let xs: Vec<usize> =
                (0..=mid).map(|r| (x0 + (x1 - x0) * r as f64 / mid as f64).round() as usize).collect();
            for r in 0..mid {
                let ch = match xs[r + 1].cmp(&xs[r]) {
                    std::cmp::Ordering::Equal => '│',
                    std::cmp::Ordering::Greater => '\\',
                    std::cmp::Ordering::Less => '/',
                };
                c.put(xs[r], mid_top + r, ch);
            }
            let m = e.decor.len();
            for (j, &g) in e.decor.iter().enumerate() {
                let r = match height_rank(d, Obj::Edge(ei), j) {
                    Some(r) => r,
                    None => (j + 1) * mid / (m + 1),
                };
                c.put(xs[r.min(mid - 1)], mid_top + r.min(mid - 1), g.symbol());
            }
            continue;
        }
        let (row, north) = if e.is_north() { (depth_n[ei], true) } else { (height - 1 - depth_s[ei], false) };
        let (xa, xb) = (col(a), col(b));
        let (l, r) = if north { ('╰', '╯') } else { ('╭', '╮') };
        c.put(xa, row, l);
        c.put(xb, row, r);
        for x in xa + 1..xb {
            c.put(x, row, '─');
        }
        let span = if north { 1..row } else { row + 1..height - 1 };
        for y in span {
            c.put(xa, y, '│');
            c.put(xb, y, '│');
        }
        let m = e.decor.len();
        let start = (xa + xb + 1 - m) / 2;
        for (j, &g) in e.decor.iter().enumerate() {
            c.put(start + j, row, g.symbol());
        }
    }
    let mut text = c.finish();
    if !d.loops().is_empty() {
        let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
        for (li, l) in d.loops().iter().enumerate() {
            let word: String = l.iter().map(|g| g.symbol()).collect();
            let r = height_rank(d, Obj::Loop(li), 0).map(|r| mid_top + r.min(mid - 1)).unwrap_or(mid_top + li % mid);
            let line = &mut lines[r];
            let pad = (width + 2).saturating_sub(line.chars().count());
            line.push_str(&" ".repeat(pad));
            let _ = write!(line, " ({word})");
        }
        text = lines.join("\n") + "\n";
    }
    text
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{simple_diagram, theta_unchecked};
    use crate::coxeter::CoxeterSpec;

    #[test]
    fn identity_is_parallel_strands() {
        let d = Diagram::identity(4);
        let s = render_ascii(&d);
        let strands = s.lines().nth(1).unwrap();
        assert_eq!(strands.matches('│').count(), 4);
        assert_eq!(render_svg(&d).matches("<line").count(), 4);
    }

    #[test]
    fn simple_dot_diagram_shows_decorated_cup_and_cap() {
        let spec = CoxeterSpec::b(2);
        let d = simple_diagram(&spec, 0).unwrap();
        let s = render_ascii(&d);
        assert_eq!(s.matches('•').count(), 2);
        assert!(s.contains('╰') && s.contains('╭'));
        let svg = render_svg(&d);
        assert_eq!(svg.matches(r#"fill="black"/>"#).count() - 8, 2);
        assert_eq!(svg.matches("<path").count(), 2);
    }

    #[test]
    fn loops_and_heights_are_drawn() {
        let spec = CoxeterSpec::b(2);
        let d = theta_unchecked(&[0, 1, 2, 3, 2, 0, 1], &spec).unwrap();
        let s = render_ascii(&d);
        assert!(s.contains("(•)") || d.loops().is_empty());
        let svg = render_svg(&d);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    }
}
