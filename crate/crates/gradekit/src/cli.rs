//! The `gradekit` command line.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use gradekit_core::capture::{
    capture_set_indisc_full, capture_set_rel_total, capture_set_sym_total, verify_capture, CaptureOutcome,
};
use gradekit_core::extensions::inflate;
use gradekit_core::indisc::{discerning_formula, indisc_grade, quotient, DEFAULT_DEPTH_CAP};
use gradekit_core::lattice::{check_conformance, grade_matrix, grade_row, lattice, Regime, DEFAULT_SIZE_CAP};
use gradekit_core::relativity::{
    galois_c, galois_e, is_near_correspondence, quotient_automorphisms, rel_grade, QuotientView,
};
use gradekit_core::symmetry::{find_automorphism, SearchConstraint};
use gradekit_core::{gallery, GradeId, Structure};

use crate::dsl::{parse_random_spec, parse_structure, structure_to_dsl};
use crate::json::{grade_matrix_to_json, grade_row_to_json, violations_to_json};
use crate::random::random_structure;

#[derive(Debug, Parser)]
#[command(name = "gradekit", version, about = "Grades of discrimination on finite structures")]
struct Cli {
    /// Write output to this file instead of stdout.
    #[arg(short = 'o', long = "output", global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Strength {
    Total,
    Pair,
    Bare,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CaptureGrade {
    SymTotal,
    RelTotal,
    IndiscFull,
}

#[derive(Debug, Subcommand)]
enum Verb {
    /// All twelve grades for one pair or for every pair.
    Grades {
        file: PathBuf,
        #[arg(long, value_name = "a,b")]
        pair: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// The quotient by complete indiscernibility.
    Quotient { file: PathBuf },
    /// Search for an automorphism with the given images.
    Auto {
        file: PathBuf,
        #[arg(long = "map", value_name = "a:b", required = true)]
        maps: Vec<String>,
        /// Also require each `b` to go to its `a`.
        #[arg(long)]
        swap: bool,
        /// Fix every element outside the mapped pair.
        #[arg(long)]
        total: bool,
    },
    /// A relativity grade with its witnessing correspondence.
    Rel {
        file: PathBuf,
        #[arg(long, value_enum)]
        grade: Strength,
        #[arg(long, value_name = "a,b")]
        pair: String,
    },
    /// Quotient automorphisms and their lifts; `--check` tests the Galois laws.
    Galois {
        file: PathBuf,
        #[arg(long)]
        check: bool,
    },
    /// An indiscernibility grade, with a discerning formula when ≈⁻ fails.
    Indisc {
        file: PathBuf,
        #[arg(long)]
        grade: String,
        #[arg(long, value_name = "a,b")]
        pair: String,
    },
    /// A capturing formula set, verified on the structure.
    Capture {
        file: PathBuf,
        #[arg(long, value_enum)]
        grade: CaptureGrade,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// An entailment diagram.
    Lattice {
        #[arg(long)]
        regime: String,
        #[arg(long)]
        dot: bool,
    },
    /// Check every pair against an entailment diagram.
    Conform {
        file: PathBuf,
        #[arg(long)]
        regime: String,
        #[arg(long)]
        json: bool,
    },
    /// Add clones of an element.
    Inflate {
        file: PathBuf,
        #[arg(long)]
        element: String,
        #[arg(long)]
        copies: usize,
    },
    /// Print a named example structure.
    Gallery { name: String },
    /// A seeded random structure.
    Random {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        size: usize,
        #[arg(long)]
        spec: PathBuf,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Domain(String),
}

type Res<T> = Result<T, CliError>;

fn domain(e: impl std::fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

fn read(path: &Path) -> Res<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Domain(format!("io: {}: {e}", path.display())))
}

fn load(path: &Path) -> Res<Structure> {
    parse_structure(&read(path)?).map_err(domain)
}

fn element(s: &Structure, name: &str) -> Res<usize> {
    s.element(name.trim()).ok_or_else(|| CliError::Usage(format!("no element named `{}`", name.trim())))
}

fn split2<'a>(text: &'a str, sep: char, what: &str) -> Res<(&'a str, &'a str)> {
    text.split_once(sep).ok_or_else(|| CliError::Usage(format!("expected {what}, got `{text}`")))
}

fn pair(s: &Structure, text: &str) -> Res<(usize, usize)> {
    let (a, b) = split2(text, ',', "a pair `a,b`")?;
    Ok((element(s, a)?, element(s, b)?))
}

fn regime(text: &str) -> Res<Regime> {
    text.parse().map_err(|e| CliError::Usage(format!("{e}")))
}

fn width(text: &str) -> usize {
    text.chars().count()
}

fn pad(text: &str, w: usize) -> String {
    format!("{text}{}", " ".repeat(w.saturating_sub(width(text))))
}

fn grades(s: &Structure, p: Option<&str>, as_json: bool) -> Res<String> {
    let mut out = String::new();
    if let Some(p) = p {
        let (a, b) = pair(s, p)?;
        let row = grade_row(s, a, b).map_err(domain)?;
        if as_json {
            return Ok(format!("{}\n", serde_json::to_string_pretty(&grade_row_to_json(s, a, b, &row)).unwrap()));
        }
        let w = GradeId::ALL.iter().map(|g| g.name().len()).max().unwrap();
        for g in GradeId::ALL {
            let _ = writeln!(out, "{}  {}  {}", pad(g.name(), w), pad(g.symbol(), 3), row[g.index()]);
        }
        return Ok(out);
    }
    let m = grade_matrix(s, DEFAULT_SIZE_CAP).map_err(domain)?;
    if as_json {
        return Ok(format!("{}\n", serde_json::to_string_pretty(&grade_matrix_to_json(s, &m)).unwrap()));
    }
    let ew = s.elements().iter().map(|e| width(e)).max().unwrap().max(1);
    let header: Vec<String> = GradeId::ALL.iter().map(|g| pad(g.symbol(), 3)).collect();
    let _ = writeln!(out, "{}  {}  {}", pad("a", ew), pad("b", ew), header.join(" ").trim_end());
    for a in 0..m.size() {
        for b in 0..m.size() {
            let cells: Vec<String> =
                m.row(a, b).iter().map(|&v| pad(if v { "+" } else { "-" }, 3)).collect();
            let _ = writeln!(out, "{}  {}  {}", pad(s.name(a), ew), pad(s.name(b), ew), cells.join(" ").trim_end());
        }
    }
    Ok(out)
}

fn quotient_text(s: &Structure) -> Res<String> {
    let q = quotient(s).map_err(domain)?;
    let mut out = String::new();
    for (c, members) in q.partition.classes().iter().enumerate() {
        let names: Vec<&str> = members.iter().map(|&e| s.name(e)).collect();
        let _ = writeln!(out, "# [{}] = {{ {} }}", q.quotient.name(c), names.join(", "));
    }
    out += &structure_to_dsl(&q.quotient);
    Ok(out)
}

fn auto(s: &Structure, maps: &[String], swap: bool, total: bool) -> Res<String> {
    let mut c = SearchConstraint::none();
    for m in maps {
        let (a, b) = split2(m, ':', "a mapping `a:b`")?;
        let (a, b) = (element(s, a)?, element(s, b)?);
        c.required.push((a, b));
        if swap {
            c.required.push((b, a));
        }
    }
    if total {
        if c.required.len() > 2 || (maps.len() != 1) {
            return Err(CliError::Usage("--total needs exactly one --map".into()));
        }
        c.fix_outside = Some(c.required[0]);
    }
    Ok(match find_automorphism(s, &c) {
        Some(p) => format!("{}\n", p.display(s)),
        None => "no automorphism\n".into(),
    })
}

fn correspondence_text(s: &Structure, pairs: impl Iterator<Item = (usize, usize)>) -> String {
    let items: Vec<String> = pairs.map(|(a, b)| format!("({},{})", s.name(a), s.name(b))).collect();
    format!("{{ {} }}", items.join(", "))
}

fn rel(s: &Structure, strength: Strength, p: &str) -> Res<String> {
    let (a, b) = pair(s, p)?;
    let g = match strength {
        Strength::Total => GradeId::RelTotal,
        Strength::Pair => GradeId::RelPair,
        Strength::Bare => GradeId::RelBare,
    };
    let w = rel_grade(s, g, a, b).map_err(domain)?;
    Ok(match w {
        Some(c) => format!("{} {} {}: true\nwitness {}\n", s.name(a), g.symbol(), s.name(b), correspondence_text(s, c.iter())),
        None => format!("{} {} {}: false\n", s.name(a), g.symbol(), s.name(b)),
    })
}

const GALOIS_LIMIT: usize = 50;

fn galois(s: &Structure, check: bool) -> Res<(String, bool)> {
    let v = QuotientView::new(s).map_err(domain)?;
    let autos = quotient_automorphisms(&v, GALOIS_LIMIT);
    let mut out = String::new();
    let mut failures = Vec::new();
    for pi in &autos {
        let e = galois_e(&v, &v, pi).map_err(domain)?;
        let names: Vec<&str> = pi.0.iter().map(|&c| v.quotient().name(c)).collect();
        if !check {
            let _ = writeln!(out, "[{}] -> {}", names.join(" "), correspondence_text(s, e.iter()));
            continue;
        }
        match galois_c(&v, &v, &e) {
            Ok(back) if back == *pi => {}
            _ => failures.push(format!("c(e(π)) != π for π = [{}]", names.join(" "))),
        }
        for a in 0..s.size() {
            for b in 0..s.size() {
                if e.contains(a, b) {
                    continue;
                }
                let mut bigger = e.clone();
                bigger.insert(a, b);
                if is_near_correspondence(&v, &v, &bigger) {
                    failures.push(format!("e(π) extends by ({},{})", s.name(a), s.name(b)));
                }
            }
        }
    }
    if check {
        let _ = writeln!(out, "{} quotient automorphism(s) checked, {} failure(s)", autos.len(), failures.len());
        for f in &failures {
            let _ = writeln!(out, "  {f}");
        }
    }
    Ok((out, failures.is_empty()))
}

fn indisc(s: &Structure, grade: &str, p: &str) -> Res<String> {
    let g: GradeId = grade.parse().map_err(|e| CliError::Usage(format!("{e}")))?;
    let (a, b) = pair(s, p)?;
    let holds = indisc_grade(s, g, a, b).map_err(domain)?;
    let mut out = format!("{} {} {}: {holds}\n", s.name(a), g.symbol(), s.name(b));
    if g == GradeId::IndiscNeqFull && !holds {
        match discerning_formula(s, a, b, DEFAULT_DEPTH_CAP).map_err(domain)? {
            Some(f) => {
                let _ = writeln!(out, "discerning formula: {f}");
            }
            None => {
                let _ = writeln!(out, "no discerning formula within depth {DEFAULT_DEPTH_CAP}");
            }
        }
    }
    Ok(out)
}

fn capture(s: &Structure, grade: CaptureGrade, depth: Option<usize>) -> Res<(String, bool)> {
    let (set, g) = match grade {
        CaptureGrade::SymTotal => {
            let sig = s.signature();
            let needed = sig
                .predicates()
                .iter()
                .map(|p| p.arity.saturating_sub(1))
                .chain(sig.functions().iter().map(|f| f.arity))
                .max()
                .unwrap_or(0);
            (capture_set_sym_total(sig, depth.unwrap_or(needed)), GradeId::SymTotal)
        }
        CaptureGrade::RelTotal => {
            (capture_set_rel_total(s, depth.unwrap_or(DEFAULT_DEPTH_CAP)).map_err(domain)?, GradeId::RelTotal)
        }
        CaptureGrade::IndiscFull => {
            (capture_set_indisc_full(s, depth.unwrap_or(DEFAULT_DEPTH_CAP)).map_err(domain)?, GradeId::IndiscNeqFull)
        }
    };
    let mut out = format!("# {} ({}, {} formula(s))\n", set.note, set.language, set.formulas.len());
    for f in &set.formulas {
        let _ = writeln!(out, "{f}");
    }
    let outcome = verify_capture(s, g, &set).map_err(domain)?;
    match &outcome {
        CaptureOutcome::Captured => {
            let _ = writeln!(out, "captured {} on all {} pairs", g.symbol(), s.size() * s.size());
        }
        CaptureOutcome::Counterexample { a, b, grade_holds, set_holds, failing } => {
            let _ = writeln!(
                out,
                "not captured at ({},{}): grade {grade_holds}, set {set_holds}",
                s.name(*a),
                s.name(*b)
            );
            if let Some(f) = failing {
                let _ = writeln!(out, "failing member: {f}");
            }
        }
    }
    Ok((out, outcome.is_captured()))
}

fn lattice_text(r: Regime, dot: bool) -> String {
    let d = lattice(r);
    if dot {
        return d.to_dot();
    }
    let mut out = format!("# {}\n", r.name());
    for (i, n) in d.nodes.iter().enumerate() {
        let syms: Vec<&str> = n.iter().map(|g| g.symbol()).collect();
        let _ = writeln!(out, "n{i}: {}", syms.join(" "));
    }
    for &(a, b) in &d.edges {
        let _ = writeln!(out, "n{a} -> n{b}");
    }
    out
}

fn conform(s: &Structure, r: Regime, as_json: bool) -> Res<(String, bool)> {
    let vs = check_conformance(s, r, DEFAULT_SIZE_CAP).map_err(domain)?;
    if as_json {
        return Ok((format!("{}\n", serde_json::to_string_pretty(&violations_to_json(s, &vs)).unwrap()), vs.is_empty()));
    }
    let mut out = format!("{} violations\n", vs.len());
    for v in &vs {
        let _ = writeln!(out, "({},{}): {} holds, {} fails", s.name(v.a), s.name(v.b), v.from.symbol(), v.to.symbol());
    }
    Ok((out, vs.is_empty()))
}

fn dispatch(verb: Verb) -> Res<(String, bool)> {
    let ok = |s: String| Ok((s, true));
    match verb {
        Verb::Grades { file, pair, json } => ok(grades(&load(&file)?, pair.as_deref(), json)?),
        Verb::Quotient { file } => ok(quotient_text(&load(&file)?)?),
        Verb::Auto { file, maps, swap, total } => ok(auto(&load(&file)?, &maps, swap, total)?),
        Verb::Rel { file, grade, pair } => ok(rel(&load(&file)?, grade, &pair)?),
        Verb::Galois { file, check } => galois(&load(&file)?, check),
        Verb::Indisc { file, grade, pair } => ok(indisc(&load(&file)?, &grade, &pair)?),
        Verb::Capture { file, grade, depth } => capture(&load(&file)?, grade, depth),
        Verb::Lattice { regime: r, dot } => ok(lattice_text(regime(&r)?, dot)),
        Verb::Conform { file, regime: r, json } => conform(&load(&file)?, regime(&r)?, json),
        Verb::Inflate { file, element: e, copies } => {
            let s = load(&file)?;
            let a = element(&s, &e)?;
            ok(structure_to_dsl(&inflate(&s, a, copies).map_err(domain)?.extended))
        }
        Verb::Gallery { name } => {
            let s = gallery::gallery(&name).map_err(|e| CliError::Usage(e.to_string()))?;
            ok(structure_to_dsl(&s))
        }
        Verb::Random { seed, size, spec } => {
            let spec = parse_random_spec(&read(&spec)?).map_err(domain)?;
            ok(structure_to_dsl(&random_structure(seed, size, &spec).map_err(|e| CliError::Usage(e.to_string()))?))
        }
    }
}

/// Runs the tool on `args` (including the program name) and returns the
/// exit code: 0 on success, 1 on a domain error or a failed check, 2 on a
/// usage error.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                2
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
    };
    match dispatch(cli.verb) {
        Ok((text, passed)) => {
            let written = match &cli.output {
                Some(path) => std::fs::write(path, &text),
                None => stdout.write_all(text.as_bytes()),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "io: {e}");
                return 1;
            }
            if passed {
                0
            } else {
                1
            }
        }
        Err(CliError::Usage(m)) => {
            let _ = writeln!(stderr, "error: {m}");
            2
        }
        Err(CliError::Domain(m)) => {
            let _ = writeln!(stderr, "error: {m}");
            1
        }
    }
}
