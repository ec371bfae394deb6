use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use tldiag::admissible::{classify_diagram, is_admissible, length};
use tldiag::algebra::{theta, AlgebraElement};
use tldiag::coxeter::enumerate_fc;
use tldiag::factor::factorize_traced;
use tldiag::render::{render_ascii, render_svg};
use tldiag::verify::verify;
use tldiag::{CoxeterSpec, Diagram, Error, Family, Heap, Word};

/// Decorated diagram algebras of types B̃ₙ₊₁ and D̃ₙ₊₂.
///
/// DIAGRAM arguments accept a JSON object, a path to a JSON file, `-` for standard input,
/// or a word such as `3,5,2` which is mapped to its diagram.
#[derive(Parser)]
#[command(name = "tldiag", version, after_help = "Environment:\n  TLDIAG_STEP_CAP  maximum number of rewrite steps when reducing a diagram")]
struct Cli {
    #[arg(long, global = true, default_value = "B", value_parser = parse_family)]
    family: Family,
    #[arg(long, global = true, default_value_t = 2)]
    n: usize,
    #[arg(long, global = true, default_value_t = 8)]
    max_len: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Also write the resulting diagram as SVG.
    #[arg(long, global = true, value_name = "PATH")]
    svg: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List FC elements up to --max-len, one canonical word each.
    FcEnum,
    /// Map a reduced FC word to its diagram.
    Map {
        #[arg(default_value = "")]
        word: String,
    },
    /// Factorize an admissible diagram into a reduced FC word.
    Factor { diagram: String },
    /// Multiply two diagrams.
    Multiply { a: String, b: String },
    /// Family and parameters of an admissible diagram.
    Classify { diagram: String },
    /// Length of an admissible diagram.
    Length { diagram: String },
    /// Run the verification suite.
    Verify,
    /// Draw a diagram.
    Render { diagram: String },
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_word(s: &str) -> Word {
    s.split(|c: char| !c.is_ascii_digit()).filter(|t| !t.is_empty()).map(|t| t.parse().unwrap_or(usize::MAX)).collect()
}

fn map_word(w: &[usize], spec: &CoxeterSpec) -> Result<Diagram, Error> {
    theta(w, spec)?
        .as_basis_diagram()
        .cloned()
        .ok_or_else(|| Error::InternalAssertion("image is not a single diagram".into()))
}

fn read_diagram(arg: &str, spec: &CoxeterSpec) -> Result<Diagram, Error> {
    let text = if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Parse(e.to_string()))?;
        s
    } else if !arg.trim_start().starts_with('{') && Path::new(arg).is_file() {
        fs::read_to_string(arg).map_err(|e| Error::Parse(format!("{arg}: {e}")))?
    } else {
        arg.to_string()
    };
    if text.trim_start().starts_with('{') {
        let d = Diagram::from_json_str(&text)?;
        if d.k() != spec.box_width() {
            return Err(Error::WidthMismatch(d.k(), spec.box_width()));
        }
        Ok(d)
    } else {
        map_word(&parse_word(&text), spec)
    }
}

fn check_step_cap() -> Result<(), Error> {
    match std::env::var("TLDIAG_STEP_CAP") {
        Ok(v) if v.parse::<usize>().map_or(true, |c| c == 0) => {
            Err(Error::InvalidSpec(format!("TLDIAG_STEP_CAP must be a positive integer, got {v:?}")))
        }
        _ => Ok(()),
    }
}

fn show_diagram(d: &Diagram) -> String {
    format!("{d}\n{}", render_ascii(d))
}

fn write_svg(path: &Option<PathBuf>, d: &Diagram) -> Result<(), Error> {
    if let Some(p) = path {
        fs::write(p, render_svg(d)).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

/// Text and JSON forms of the result, with the success flag.
struct Output {
    text: String,
    json: Value,
    ok: bool,
}

fn run(cli: &Cli) -> Result<Output, Error> {
    check_step_cap()?;
    let spec = CoxeterSpec::new(cli.family, cli.n)?;
    let out = match &cli.cmd {
        Command::FcEnum => {
            let levels = enumerate_fc(&spec, cli.max_len)?;
            let text = levels
                .iter()
                .enumerate()
                .map(|(l, ws)| {
                    let ws: Vec<String> = ws.iter().map(|w| format!("{w:?}")).collect();
                    format!("{l} ({}): {}", ws.len(), ws.join(" "))
                })
                .collect::<Vec<_>>()
                .join("\n");
            let counts: Vec<usize> = levels.iter().map(Vec::len).collect();
            Output { text, json: json!({ "spec": spec, "counts": counts, "words": levels }), ok: true }
        }
        Command::Map { word } => {
            let w = parse_word(word);
            let d = map_word(&w, &spec)?;
            write_svg(&cli.svg, &d)?;
            let heap = Heap::from_word(&w, &spec)?;
            Output {
                text: format!("{}\nheap:\n{}", show_diagram(&d), heap.render_ascii()),
                json: json!({ "word": w, "diagram": d.to_json(), "heap": heap.to_json() }),
                ok: true,
            }
        }
        Command::Factor { diagram } => {
            let d = read_diagram(diagram, &spec)?;
            let (w, trace) = factorize_traced(&d, &spec)?;
            let mut text = format!("{w:?}");
            for s in &trace {
                text.push_str(&format!(
                    "\n  ℓ={:<3} {:?} {:?} edge={} type={} neighbor={}{}",
                    s.length_before,
                    s.op,
                    s.generators,
                    s.edge.as_deref().unwrap_or("-"),
                    s.kind.map_or("-".into(), |k| k.to_string()),
                    s.neighbor.as_deref().unwrap_or("-"),
                    if s.ambiguous { " (ambiguous)" } else { "" }
                ));
            }
            Output { text, json: json!({ "word": w, "trace": trace }), ok: true }
        }
        Command::Multiply { a, b } => {
            let x = AlgebraElement::from_diagram(spec, read_diagram(a, &spec)?);
            let y = AlgebraElement::from_diagram(spec, read_diagram(b, &spec)?);
            let p = x.multiply(&y)?;
            if let Some(d) = p.as_basis_diagram() {
                write_svg(&cli.svg, d)?;
            }
            Output { text: p.to_string(), json: json!(p.to_json()), ok: true }
        }
        Command::Classify { diagram } => {
            let d = read_diagram(diagram, &spec)?;
            let rep = is_admissible(&d, &spec);
            if !rep.admissible {
                return Err(Error::NotAdmissible(rep.violation.unwrap_or_default()));
            }
            let c = classify_diagram(&d, &spec)?;
            Output { text: c.to_string(), json: json!(c), ok: true }
        }
        Command::Length { diagram } => {
            let d = read_diagram(diagram, &spec)?;
            let rep = is_admissible(&d, &spec);
            if !rep.admissible {
                return Err(Error::NotAdmissible(rep.violation.unwrap_or_default()));
            }
            let l = length(&d, &spec)?;
            Output { text: l.to_string(), json: json!({ "length": l }), ok: true }
        }
        Command::Verify => {
            let rep = verify(&spec, cli.max_len, cli.seed);
            let text = rep
                .checks
                .iter()
                .map(|c| {
                    let status = if c.pass { "PASS" } else { "FAIL" };
                    let detail = c.detail.as_deref().map(|d| format!(": {d}")).unwrap_or_default();
                    format!("{status} {:<24} count={:<6} {:>6}ms{detail}", c.name, c.count, c.elapsed_ms)
                })
                .collect::<Vec<_>>()
                .join("\n");
            Output { text, json: json!(rep), ok: rep.all_pass() }
        }
        Command::Render { diagram } => {
            let d = read_diagram(diagram, &spec)?;
            write_svg(&cli.svg, &d)?;
            Output { text: show_diagram(&d), json: json!({ "diagram": d.to_json(), "svg": render_svg(&d) }), ok: true }
        }
    };
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable output"));
            } else {
                println!("{}", out.text);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            if cli.json {
                println!("{}", json!({ "error": e.to_string() }));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(2)
        }
    }
}
