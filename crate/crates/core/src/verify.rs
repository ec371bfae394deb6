//! End-to-end checks of the diagram calculus against the Coxeter side, with a machine-readable report.

use std::collections::{BTreeMap, HashSet};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::admissible::{classify_diagram, edge_weight, is_admissible, length, loop_weight, PzzType};
use crate::algebra::{check_presentation, check_presentation_with, simple_diagram, theta_unchecked, AlgebraElement};
use crate::catalog;
use crate::coxeter::{canonical_word, enumerate_fc, is_fully_commutative, CoxeterSpec, Family, Word};
use crate::diagram::{multiply_diagrams, Diagram, Edge};
use crate::enumerate::enumerate_admissible;
use crate::error::{Error, Result};
use crate::factor::{cut_and_paste, factorize, factorize_traced, suitable_edges, EdgeType, StepOp};
use crate::heap::{FamilyTag, Heap};

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<Family>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_len: Option<usize>,
    /// Number of items examined.
    pub count: usize,
    pub pass: bool,
    /// First failure, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    pub elapsed_ms: u128,
}

/// A list of checks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&CheckResult> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}

/// Items examined, and the first failure.
type Tally = (usize, Option<String>);

fn run(name: &str, spec: Option<&CoxeterSpec>, max_len: Option<usize>, f: impl FnOnce() -> Result<Tally>) -> CheckResult {
    let start = Instant::now();
    let (count, detail) = match f() {
        Ok(t) => t,
        Err(e) => (0, Some(format!("error: {e}"))),
    };
    CheckResult {
        name: name.to_string(),
        family: spec.map(|s| s.family),
        n: spec.map(|s| s.n),
        max_len,
        count,
        pass: detail.is_none(),
        detail,
        elapsed_ms: start.elapsed().as_millis(),
    }
}

/// The first error message among `items`, with the item count.
fn first_failure<T: Sync>(items: &[T], f: impl Fn(&T) -> Option<String> + Sync + Send) -> Tally {
    (items.len(), items.par_iter().find_map_first(f))
}

/// FC words up to `max_len` with their diagrams.
pub fn theta_image(spec: &CoxeterSpec, max_len: usize) -> Result<Vec<(Word, Diagram)>> {
    let words: Vec<Word> = enumerate_fc(spec, max_len)?.into_iter().flatten().collect();
    words.into_par_iter().map(|w| theta_unchecked(&w, spec).map(|d| (w, d))).collect()
}

/// Every defining relation holds on the simple diagrams.
pub fn check_presentation_relations(spec: &CoxeterSpec) -> CheckResult {
    run("presentation", Some(spec), None, || {
        let rep = check_presentation(spec)?;
        let bad = rep.failures().first().map(|r| format!("{} fails on {:?}", r.name, r.generators));
        Ok((rep.relations.len(), bad))
    })
}

/// Negative control: with the cap of D₀ stripped of its decoration, some relation must fail.
pub fn check_corrupted_d0(n: usize) -> CheckResult {
    let spec = CoxeterSpec::d(n);
    run("corrupted-d0-control", Some(&spec), None, || {
        let mut simples: Vec<Diagram> =
            (0..=spec.max_generator()).map(|i| simple_diagram(&spec, i)).collect::<Result<_>>()?;
        let d0 = &simples[0];
        let edges: Vec<Edge> = d0
            .edges()
            .iter()
            .map(|e| if e.is_south() { Edge::plain(e.a, e.b) } else { e.clone() })
            .collect();
        simples[0] = Diagram::from_parts(d0.k(), edges, Vec::new(), Vec::new())?;
        let rep = check_presentation_with(&spec, &simples)?;
        let caught = rep.failures().len();
        Ok((caught, (caught == 0).then(|| "the corrupted D₀ satisfies every relation".to_string())))
    })
}

/// θ is injective on FC elements up to `max_len`, and every image is a single admissible diagram.
pub fn check_injectivity(spec: &CoxeterSpec, max_len: usize) -> CheckResult {
    run("injectivity", Some(spec), Some(max_len), || {
        let image = theta_image(spec, max_len)?;
        let mut seen: BTreeMap<Vec<u8>, &Word> = BTreeMap::new();
        for (w, d) in &image {
            if let Some(u) = seen.insert(d.canonical_key(), w) {
                return Ok((image.len(), Some(format!("{u:?} and {w:?} have the same diagram {d}"))));
            }
        }
        Ok(first_failure(&image, |(w, d)| {
            let rep = is_admissible(d, spec);
            (!rep.admissible).then(|| format!("{w:?} ↦ {d}: {}", rep.violation.unwrap_or_default()))
        }))
    })
}

/// ℓ(θ(w)) = ℓ(w).
pub fn check_lengths(spec: &CoxeterSpec, max_len: usize) -> CheckResult {
    run("length", Some(spec), Some(max_len), || {
        let image = theta_image(spec, max_len)?;
        Ok(first_failure(&image, |(w, d)| match length(d, spec) {
            Ok(l) if l == w.len() => None,
            other => Some(format!("{w:?} ↦ {d}: length {other:?}")),
        }))
    })
}

/// The word sᵢ⋯sₙ (sₙ₊₁sₙ⋯s₂ s₀s₁s₂⋯sₙ)^k sₙ₊₁sₙ⋯sⱼ, when it is reduced and FC.
pub fn pzz_family_word(n: usize, i: usize, j: usize, k: usize) -> Word {
    let mut w: Word = (i..=n).collect();
    for _ in 0..k {
        w.extend((2..=n + 1).rev());
        w.extend([0, 1]);
        w.extend(2..=n);
    }
    w.extend((j..=n + 1).rev());
    w
}

/// The PZZ word family has length 2n−i−j+3+(2n+1)k, and so do its diagrams.
pub fn check_pzz_lengths(n: usize, max_k: usize) -> CheckResult {
    let spec = CoxeterSpec::b(n);
    run("pzz-closed-form", Some(&spec), None, || {
        let mut count = 0;
        for k in 0..=max_k {
            for i in 1..=n {
                for j in 1..=n {
                    let w = pzz_family_word(n, i, j, k);
                    if !matches!(is_fully_commutative(&w, &spec), Ok(true)) {
                        continue;
                    }
                    count += 1;
                    let expected = 2 * n + 3 + (2 * n + 1) * k - i - j;
                    let d = theta_unchecked(&w, &spec)?;
                    let class = classify_diagram(&d, &spec)?;
                    let l = length(&d, &spec)?;
                    if w.len() != expected || l != expected || (k > 0 && class.tag != FamilyTag::Pzz) {
                        return Ok((count, Some(format!("i={i} j={j} k={k}: |w|={} ℓ(D)={l} expected {expected}", w.len()))));
                    }
                }
            }
        }
        Ok((count, None))
    })
}

/// The heap family of w equals the diagram family of θ(w).
pub fn check_families(spec: &CoxeterSpec, max_len: usize) -> CheckResult {
    run("families", Some(spec), Some(max_len), || {
        let image = theta_image(spec, max_len)?;
        Ok(first_failure(&image, |(w, d)| {
            let h = Heap::from_word(w, spec).and_then(|h| h.classify_family());
            let c = classify_diagram(d, spec);
            match (h, c) {
                (Ok(h), Ok(c)) if h.tag == c.tag => None,
                (h, c) => Some(format!("{w:?}: heap {:?}, diagram {:?}", h.map(|x| x.tag), c.map(|x| x.tag))),
            }
        }))
    })
}

/// On every ALT-diagram and every suitable edge, cut-and-paste drops the length by one and D = D_g·cp_e(D).
pub fn check_cut_and_paste(spec: &CoxeterSpec, max_len: usize) -> CheckResult {
    run("cut-and-paste", Some(spec), Some(max_len), || {
        let image = theta_image(spec, max_len)?;
        let alt: Vec<&Diagram> = image
            .iter()
            .filter(|(w, d)| !w.is_empty() && classify_diagram(d, spec).is_ok_and(|c| c.tag == FamilyTag::Alt))
            .map(|(_, d)| d)
            .collect();
        let results: Vec<Tally> = alt
            .par_iter()
            .map(|d| {
                let edges = match suitable_edges(d, spec) {
                    Ok(e) if !e.is_empty() => e,
                    Ok(_) => return (0, Some(format!("{d}: no suitable edge"))),
                    Err(e) => return (0, Some(format!("{d}: {e}"))),
                };
                let l = length(d, spec).unwrap_or(0);
                for e in &edges {
                    let fail = |m: String| (edges.len(), Some(format!("{d}, edge {}-{}: {m}", e.edge.a, e.edge.b)));
                    let (g, next) = match cut_and_paste(d, e, spec) {
                        Ok(x) => x,
                        Err(err) => return fail(err.to_string()),
                    };
                    if length(&next, spec).ok() != Some(l - 1) {
                        return fail(format!("length of {next} is not {}", l - 1));
                    }
                    match simple_diagram(spec, g).and_then(|s| multiply_diagrams(&s, &next, spec.family)) {
                        Ok(r) if r.coeff.is_one() && r.diagram.canonical_key() == d.canonical_key() => {}
                        _ => return fail(format!("D_{g}·{next} is not D")),
                    }
                }
                (edges.len(), None)
            })
            .collect();
        let count = results.iter().map(|r| r.0).sum();
        Ok((count, results.into_iter().find_map(|r| r.1)))
    })
}

/// Where the candidates D′ of the uniqueness check come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CandidatePool {
    /// The independent diagram enumerator; exhaustive over all decorated diagrams within the length bound.
    Enumerated,
    /// θ of every FC element of the right length.
    Image,
}

/// For every ALT-diagram D with ℓ(D) ≤ `max_len` and every suitable edge, exactly one admissible D′ of length
/// ℓ(D)−1 satisfies D_g·D′ = D, and it is cp_e(D).
pub fn check_uniqueness(spec: &CoxeterSpec, max_len: usize, pool: CandidatePool) -> CheckResult {
    let name = match pool {
        CandidatePool::Enumerated => "uniqueness-enumerated",
        CandidatePool::Image => "uniqueness-image",
    };
    run(name, Some(spec), Some(max_len), || {
        let all: Vec<(Diagram, usize)> = match pool {
            CandidatePool::Enumerated => enumerate_admissible(spec, max_len),
            CandidatePool::Image => theta_image(spec, max_len)?.into_iter().map(|(w, d)| (d, w.len())).collect(),
        };
        let mut by_len: Vec<Vec<&Diagram>> = vec![Vec::new(); max_len + 1];
        for (d, l) in &all {
            by_len[*l].push(d);
        }
        let targets: Vec<&(Diagram, usize)> = all
            .iter()
            .filter(|(d, l)| *l > 0 && classify_diagram(d, spec).is_ok_and(|c| c.tag == FamilyTag::Alt))
            .collect();
        let results: Vec<Tally> = targets
            .par_iter()
            .map(|(d, l)| {
                let edges = match suitable_edges(d, spec) {
                    Ok(e) => e,
                    Err(e) => return (0, Some(format!("{d}: {e}"))),
                };
                for e in &edges {
                    let Ok((g, cp)) = cut_and_paste(d, e, spec) else {
                        return (edges.len(), Some(format!("{d}: cut-and-paste failed")));
                    };
                    let Ok(s) = simple_diagram(spec, g) else { return (edges.len(), Some(format!("bad generator {g}"))) };
                    let hits: Vec<&&Diagram> = by_len[l - 1]
                        .iter()
                        .filter(|c| {
                            multiply_diagrams(&s, c, spec.family)
                                .is_ok_and(|r| r.coeff.is_one() && r.diagram.canonical_key() == d.canonical_key())
                        })
                        .collect();
                    if hits.len() != 1 || hits[0].canonical_key() != cp.canonical_key() {
                        return (
                            edges.len(),
                            Some(format!("{d}, g={g}: {} candidates ({})", hits.len(), hits.iter().map(|h| h.to_string()).collect::<Vec<_>>().join(", "))),
                        );
                    }
                }
                (edges.len(), None)
            })
            .collect();
        let count = results.iter().map(|r| r.0).sum();
        Ok((count, results.into_iter().find_map(|r| r.1)))
    })
}

/// factorize(θ(w)) has the heap of w, and θ(factorize(D)) = D.
pub fn check_round_trips(spec: &CoxeterSpec, max_len: usize) -> CheckResult {
    run("round-trips", Some(spec), Some(max_len), || {
        let image = theta_image(spec, max_len)?;
        Ok(first_failure(&image, |(w, d)| {
            let f = match factorize(d, spec) {
                Ok(f) => f,
                Err(e) => return Some(format!("{w:?} ↦ {d}: {e}")),
            };
            let same_heap = matches!((Heap::from_word(w, spec), Heap::from_word(&f, spec)), (Ok(a), Ok(b)) if a == b);
            let back = theta_unchecked(&f, spec).is_ok_and(|b| b.canonical_key() == d.canonical_key());
            (!same_heap || !back).then(|| format!("{w:?} ↦ {d} ↦ {f:?}"))
        }))
    })
}

/// Every heap of Δ_D(H) is FC with the family of H, and the union covers FC(D̃) up to `max_len`.
pub fn check_delta_d(n: usize, max_len: usize) -> CheckResult {
    let bspec = CoxeterSpec::b(n);
    let dspec = CoxeterSpec::d(n);
    run("delta-d", Some(&dspec), Some(max_len), || {
        let bwords: Vec<Word> = enumerate_fc(&bspec, max_len)?.into_iter().flatten().collect();
        let mut covered: HashSet<Word> = HashSet::new();
        for w in &bwords {
            let h = Heap::from_word(w, &bspec)?;
            let fam = h.classify_family_b()?;
            for hd in h.delta_d()? {
                if !hd.is_fc_heap() {
                    return Ok((bwords.len(), Some(format!("Δ_D of {w:?} contains non-FC {:?}", hd.word()))));
                }
                match hd.classify_family_d() {
                    Ok(f) if f.tag == fam.tag => {}
                    other => {
                        return Ok((bwords.len(), Some(format!("{:?} from {w:?}: {:?} vs {}", hd.word(), other.map(|f| f.tag), fam.tag))))
                    }
                }
                covered.insert(canonical_word(&hd.word(), &dspec));
            }
        }
        let dwords: Vec<Word> = enumerate_fc(&dspec, max_len)?.into_iter().flatten().collect();
        let missing = dwords.iter().find(|w| !covered.contains(&canonical_word(w, &dspec)));
        Ok((dwords.len(), missing.map(|w| format!("{w:?} is not covered"))))
    })
}

/// (xy)z = x(yz) on seeded random triples of basis diagrams θ(w) with |w| ≤ `max_len`.
pub fn check_associativity(spec: &CoxeterSpec, triples: usize, max_len: usize, seed: u64) -> CheckResult {
    run("associativity", Some(spec), Some(max_len), || {
        let image = theta_image(spec, max_len)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let picks: Vec<[usize; 3]> =
            (0..triples).map(|_| [0; 3].map(|_| rng.random_range(0..image.len()))).collect();
        let el = |i: usize| AlgebraElement::from_diagram(*spec, image[i].1.clone());
        Ok(first_failure(&picks, |&[a, b, c]| {
            let left = el(a).multiply(&el(b)).and_then(|xy| xy.multiply(&el(c)));
            let right = el(b).multiply(&el(c)).and_then(|yz| el(a).multiply(&yz));
            match (left, right) {
                (Ok(l), Ok(r)) if l == r => None,
                (l, r) => Some(format!("{:?} {:?} {:?}: {l:?} vs {r:?}", image[a].0, image[b].0, image[c].0)),
            }
        }))
    })
}

fn expect(ok: bool, msg: impl FnOnce() -> String) -> Option<String> {
    (!ok).then(msg)
}

/// Stated values of the reference diagrams in [`catalog`].
pub fn check_reference_values() -> CheckResult {
    run("reference-values", None, None, || {
        let mut checks: Vec<Option<String>> = Vec::new();
        let r = catalog::weighted_undammed()?;
        let (d, spec) = (&r.diagram, &r.spec);
        let w34 = d.edges().iter().position(|e| e.is_north() && e.span() == (3, 4)).ok_or(Error::Parse("no {3,4}".into()))?;
        let w78 = d.edges().iter().position(|e| e.is_south() && e.span() == (7, 8)).ok_or(Error::Parse("no {7',8'}".into()))?;
        checks.push(expect(loop_weight(&d.loops()[0], spec)? == 7, || "w(L•△) ≠ 7".into()));
        checks.push(expect(edge_weight(d, w34, spec)? == 6, || "w(3,4) ≠ 6".into()));
        checks.push(expect(edge_weight(d, w78, spec)? == 6, || "w(7',8') ≠ 6".into()));
        let others: usize = (0..d.edges().len()).filter(|&e| e != w34 && e != w78).map(|e| edge_weight(d, e, spec)).sum::<Result<usize>>()?;
        checks.push(expect(others == 0, || format!("other edge weights sum to {others}")));
        checks.push(expect(length(d, spec)? == 41, || "ℓ ≠ 41".into()));

        let r = catalog::dotted_zigzag()?;
        let c = classify_diagram(&r.diagram, &r.spec)?;
        checks.push(expect(
            c.tag == FamilyTag::Pzz && c.pzz_type == Some(PzzType::LeftLeft) && c.l == 3 && c.r == 2,
            || format!("zigzag class {c:?}"),
        ));
        checks.push(expect(length(&r.diagram, &r.spec)? == 25, || "PZZ ℓ ≠ 25".into()));

        let r = catalog::left_peak()?;
        let c = classify_diagram(&r.diagram, &r.spec)?;
        checks.push(expect(c.tag == FamilyTag::Lp && c.j_l == Some(3), || format!("peak class {c:?}")));
        checks.push(expect(length(&r.diagram, &r.spec)? == 24, || "LP ℓ ≠ 24".into()));

        let r = catalog::basic_shared_neighbor()?;
        let se = suitable_edges(&r.diagram, &r.spec)?;
        let spans: Vec<(usize, usize)> = se.iter().map(|s| s.edge.span()).collect();
        checks.push(expect(
            spans == [(3, 4), (5, 6)] && se.iter().all(|s| s.neighbor.to_string().starts_with("3'-6'")),
            || format!("shared neighbor example: {spans:?}"),
        ));
        let r = catalog::south_and_peak_types()?;
        let se = suitable_edges(&r.diagram, &r.spec)?;
        let kinds: Vec<((usize, usize), EdgeType)> = se.iter().map(|s| (s.edge.span(), s.kind)).collect();
        checks.push(expect(kinds == [((1, 2), EdgeType::SR), ((5, 6), EdgeType::PL)], || format!("type example: {kinds:?}")));
        let r = catalog::loop_neighbors()?;
        let se = suitable_edges(&r.diagram, &r.spec)?;
        let simple = crate::factor::simple_edges(&r.diagram, &r.spec);
        checks.push(expect(
            se.len() == simple.len() && se.iter().all(|s| s.kind == EdgeType::BasicA),
            || format!("loop neighbor example: {} of {}", se.len(), simple.len()),
        ));

        for r in catalog::factorization_samples()? {
            let (w, trace) = factorize_traced(&r.diagram, &r.spec)?;
            let l = length(&r.diagram, &r.spec)?;
            let mut cur = r.diagram.clone();
            let mut ok = w.len() == l;
            let mut used = 0;
            for step in &trace {
                if step.op == StepOp::ClosedForm {
                    ok &= theta_unchecked(&step.generators, &r.spec)?.canonical_key() == cur.canonical_key();
                    used += step.generators.len();
                    cur = Diagram::identity(r.spec.box_width());
                    continue;
                }
                ok &= step.length_before == length(&cur, &r.spec)?;
                let rest = theta_unchecked(&w[used + 1..], &r.spec)?;
                let prod = multiply_diagrams(&simple_diagram(&r.spec, step.generators[0])?, &rest, r.spec.family)?;
                ok &= prod.coeff.is_one() && prod.diagram.canonical_key() == cur.canonical_key();
                cur = rest;
                used += 1;
            }
            ok &= cur.is_identity() && used == w.len();
            checks.push(expect(ok, || format!("trace of {} is inconsistent", r.name)));
        }
        let n = checks.len();
        Ok((n, checks.into_iter().flatten().next()))
    })
}

/// Runs every check that applies to `spec`.
pub fn verify(spec: &CoxeterSpec, max_len: usize, seed: u64) -> VerifyReport {
    type Job<'a> = Box<dyn Fn() -> CheckResult + Send + Sync + 'a>;
    let s = *spec;
    let mut jobs: Vec<Job> = vec![
        Box::new(move || check_presentation_relations(&s)),
        Box::new(move || check_injectivity(&s, max_len)),
        Box::new(move || check_lengths(&s, max_len)),
        Box::new(move || check_families(&s, max_len)),
        Box::new(move || check_cut_and_paste(&s, max_len)),
        Box::new(move || check_round_trips(&s, max_len)),
    ];
    if s.family == Family::AffineB {
        jobs.push(Box::new(move || check_pzz_lengths(s.n, 3)));
    }
    if s.box_width() <= 5 {
        jobs.push(Box::new(move || check_uniqueness(&s, max_len.min(4), CandidatePool::Enumerated)));
        jobs.push(Box::new(move || check_uniqueness(&s, max_len.min(8), CandidatePool::Image)));
        jobs.push(Box::new(move || check_associativity(&s, 500, max_len.min(8), seed)));
    }
    if s.family == Family::AffineD {
        jobs.push(Box::new(move || check_corrupted_d0(s.n)));
        jobs.push(Box::new(move || check_delta_d(s.n, max_len.min(10))));
    }
    jobs.push(Box::new(check_reference_values));
    VerifyReport { checks: jobs.par_iter().map(|j| j()).collect() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes() {
        let spec = CoxeterSpec::b(2);
        for c in [check_injectivity(&spec, 6), check_cut_and_paste(&spec, 6), check_round_trips(&spec, 6)] {
            assert!(c.pass, "{c:?}");
            assert!(c.count > 0);
        }
    }

    #[test]
    fn pzz_family_word_length() {
        assert_eq!(pzz_family_word(2, 1, 2, 1), vec![1, 2, 3, 2, 0, 1, 2, 3, 2]);
    }

    #[test]
    fn corrupted_relation_fails() {
        let c = run("x", None, None, || Ok((1, Some("bad".into()))));
        assert!(!c.pass);
        assert!(!VerifyReport { checks: vec![c] }.all_pass());
        assert!(!VerifyReport { checks: vec![] }.all_pass());
    }
}
