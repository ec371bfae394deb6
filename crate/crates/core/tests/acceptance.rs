//! One line per acceptance criterion; exits nonzero when any fails.

mod oracle;

use std::time::Instant;

use tldiag::verify::{
    check_associativity, check_corrupted_d0, check_cut_and_paste, check_delta_d, check_families, check_injectivity,
    check_lengths, check_presentation_relations, check_pzz_lengths, check_reference_values, check_round_trips,
    check_uniqueness, CandidatePool, CheckResult,
};
use tldiag::CoxeterSpec;

struct Line {
    id: usize,
    title: &'static str,
    pass: bool,
    notes: Vec<String>,
}

fn summarize(c: &CheckResult) -> String {
    let who = match (c.family, c.n) {
        (Some(f), Some(n)) => format!("{f:?}/{n}"),
        _ => "-".into(),
    };
    let mut s = format!("{}[{who}] count={} {}ms", c.name, c.count, c.elapsed_ms);
    if let Some(d) = &c.detail {
        s.push_str(&format!(" FAIL: {d}"));
    }
    s
}

fn line(id: usize, title: &'static str, checks: &[CheckResult]) -> Line {
    Line { id, title, pass: checks.iter().all(|c| c.pass), notes: checks.iter().map(summarize).collect() }
}

fn small_specs() -> [CoxeterSpec; 2] {
    [CoxeterSpec::b(2), CoxeterSpec::d(2)]
}

fn presentation() -> Line {
    let mut cs: Vec<CheckResult> = [CoxeterSpec::b(2), CoxeterSpec::b(3), CoxeterSpec::b(4), CoxeterSpec::d(2), CoxeterSpec::d(3)]
        .iter()
        .map(check_presentation_relations)
        .collect();
    cs.push(check_corrupted_d0(2));
    line(1, "presentation relations, with corrupted D0 rejected", &cs)
}

fn injectivity() -> Line {
    let mut cs = Vec::new();
    let mut notes = Vec::new();
    let mut counts_match = true;
    for (spec, fam) in small_specs().into_iter().zip(['B', 'D']) {
        let c = check_injectivity(&spec, 12);
        let expected: usize = oracle::oracle_fc_levels(fam, 2, 12).iter().map(|l| l.len()).sum();
        counts_match &= c.count == expected;
        notes.push(format!("{fam}/2 oracle count {expected}, distinct diagrams {}", c.count));
        cs.push(c);
    }
    let mut l = line(2, "theta injective on FC up to length 12", &cs);
    l.pass &= counts_match;
    l.notes.extend(notes);
    l
}

fn lengths() -> Line {
    let mut cs: Vec<CheckResult> = small_specs().iter().map(|s| check_lengths(s, 12)).collect();
    cs.extend([CoxeterSpec::b(3), CoxeterSpec::d(3)].iter().map(|s| check_lengths(s, 9)));
    cs.extend((2..=4).map(|n| check_pzz_lengths(n, 3)));
    line(3, "diagram length equals word length; PZZ closed form", &cs)
}

fn families() -> Line {
    let mut cs: Vec<CheckResult> = small_specs().iter().map(|s| check_families(s, 12)).collect();
    cs.extend([CoxeterSpec::b(3), CoxeterSpec::d(3)].iter().map(|s| check_families(s, 9)));
    line(4, "heap family equals diagram family", &cs)
}

fn cut_and_paste() -> Line {
    let mut cs: Vec<CheckResult> = small_specs().iter().map(|s| check_cut_and_paste(s, 12)).collect();
    cs.extend([CoxeterSpec::b(3), CoxeterSpec::b(4), CoxeterSpec::d(3)].iter().map(|s| check_cut_and_paste(s, 9)));
    line(5, "cut-and-paste on every suitable edge", &cs)
}

fn uniqueness() -> Line {
    let start = Instant::now();
    let mut cs = Vec::new();
    for (spec, enumerated) in
        [(CoxeterSpec::b(2), 5), (CoxeterSpec::b(3), 4), (CoxeterSpec::d(2), 5), (CoxeterSpec::d(3), 4)]
    {
        cs.push(check_uniqueness(&spec, enumerated, CandidatePool::Enumerated));
        cs.push(check_uniqueness(&spec, 10, CandidatePool::Image));
    }
    let secs = start.elapsed().as_secs_f64();
    let mut l = line(6, "unique preimage under D_g, exhaustive for k <= 5", &cs);
    l.pass &= secs < 60.0;
    l.notes.push(format!("total {secs:.1}s"));
    l
}

fn round_trips() -> Line {
    let mut cs: Vec<CheckResult> = small_specs().iter().map(|s| check_round_trips(s, 12)).collect();
    cs.extend([CoxeterSpec::b(3), CoxeterSpec::b(4), CoxeterSpec::d(3)].iter().map(|s| check_round_trips(s, 9)));
    line(7, "factorize and theta are mutually inverse", &cs)
}

fn references() -> Line {
    line(8, "reference diagram values and factorization traces", &[check_reference_values()])
}

fn delta_d() -> Line {
    line(9, "Delta_D covers FC(D4~) up to length 10", &[check_delta_d(2, 10)])
}

fn associativity() -> Line {
    let cs: Vec<CheckResult> =
        [CoxeterSpec::b(3), CoxeterSpec::d(3)].iter().map(|s| check_associativity(s, 500, 10, 0x5eed)).collect();
    line(10, "associativity on 500 seeded triples at k = 5", &cs)
}

fn main() {
    let lines = [
        presentation(),
        injectivity(),
        lengths(),
        families(),
        cut_and_paste(),
        uniqueness(),
        round_trips(),
        references(),
        delta_d(),
        associativity(),
    ];
    for l in &lines {
        println!("[{}] criterion {:>2}: {}", if l.pass { "PASS" } else { "FAIL" }, l.id, l.title);
        for n in &l.notes {
            println!("         {n}");
        }
    }
    let failed: Vec<usize> = lines.iter().filter(|l| !l.pass).map(|l| l.id).collect();
    println!("acceptance: {} of {} criteria pass", lines.len() - failed.len(), lines.len());
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
