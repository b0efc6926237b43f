use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};
use subkit::bratteli::{
    analyze_equivalence, enlarge, state_split, supernatural, BratteliDiagram, Budget, Certificate, ChainElement, Construction,
};
use subkit::fibonacci::{classify_fib_factors, fib_ordered_equivalence, pq_factorize};
use subkit::matrix::{pf_eigenvector, pf_report, purely_aperiodic, EigenSide};
use subkit::ordered::{
    analyze_ordered_equivalence, max_min_disjoint, minimal_path, path_counts, taf_description, vershik_successor,
    FinitePath, OrderedBudget, OrderedDiagram,
};
use subkit::{CancelToken, ExactMatrix, Execution, Preset, Substitution, Verdict as LibVerdict};

use crate::error::CliError;
use crate::input::{self, Input};
use crate::report::{Outcome, Verdict};

type Result<T> = std::result::Result<T, CliError>;

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("library types serialize")
}

fn mat_text(m: &ExactMatrix) -> String {
    m.to_mat_text()
}

// ---- budgets ----

#[derive(Debug, Clone)]
pub struct BudgetChoice {
    pub preset: Preset,
    pub max_power: Option<u32>,
    pub max_chain: Option<usize>,
    pub max_alphabet: Option<usize>,
    pub max_candidates: Option<usize>,
    pub execution: Execution,
}

impl BudgetChoice {
    fn unordered(&self) -> Budget {
        let mut b = Budget::preset(self.preset);
        b.max_power = self.max_power.unwrap_or(b.max_power);
        b.max_chain = self.max_chain.unwrap_or(b.max_chain);
        b.max_alphabet = self.max_alphabet.unwrap_or(b.max_alphabet);
        b.execution = self.execution;
        b
    }

    fn ordered(&self) -> OrderedBudget {
        let mut b = OrderedBudget::preset(self.preset);
        b.max_power = self.max_power.unwrap_or(b.max_power);
        b.max_chain = self.max_chain.unwrap_or(b.max_chain);
        b.max_alphabet = self.max_alphabet.unwrap_or(b.max_alphabet);
        b.max_candidates = self.max_candidates.unwrap_or(b.max_candidates);
        b.execution = self.execution;
        b
    }
}

// ---- analyze ----

fn frequencies(m: &ExactMatrix) -> Result<Vec<f64>> {
    let tol = BigRational::new(BigInt::from(1), BigInt::from(1_000_000_000_000u64));
    Ok(pf_eigenvector(m, EigenSide::Right, &tol)?.to_f64())
}

fn spectral_lines(m: &ExactMatrix, out: &mut String, details: &mut serde_json::Map<String, Value>) -> Result<bool> {
    let (primitive, exponent) = m.is_primitive();
    details.insert("primitive".into(), json!(primitive));
    details.insert("primitivity_exponent".into(), json!(exponent));
    match exponent {
        Some(k) => writeln!(out, "primitive: yes (exponent {k})").unwrap(),
        None => writeln!(out, "primitive: no").unwrap(),
    }
    if !primitive {
        details.insert("purely_aperiodic".into(), json!(false));
        writeln!(out, "purely aperiodic: no (not primitive)").unwrap();
        return Ok(false);
    }
    let rep = pf_report(m)?;
    let aperiodic = purely_aperiodic(m)?;
    let (lo, hi) = &rep.pf_isolation_interval;
    let width = BigRational::new(BigInt::from(1), BigInt::from(1u64 << 40));
    let (rlo, rhi) = rep.refined_interval(&width, &CancelToken::new())?;
    let approx = ((&rlo + &rhi) / BigRational::from(BigInt::from(2))).to_f64().unwrap_or(f64::NAN);
    let lambda = match &rep.pf_integer_value {
        Some(v) => format!("λ = {v} rational"),
        None => format!(
            "λ ∈ ({lo}, {hi}], λ ≈ {approx:.9}, minimal polynomial {}",
            rep.pf_minimal_polynomial
        ),
    };
    let yes = if aperiodic { "yes" } else { "no" };
    writeln!(out, "purely aperiodic: {yes}, {lambda}").unwrap();
    details.insert("purely_aperiodic".into(), json!(aperiodic));
    details.insert("pf".into(), to_json(&rep));
    details.insert("pf_approx".into(), json!(approx));
    Ok(true)
}

pub fn analyze(path: &str) -> Result<Outcome> {
    let mut out = String::new();
    let mut d = serde_json::Map::new();
    match input::load(path)? {
        Input::Sub(s) => {
            if !s.is_square() {
                return Err(CliError::Data {
                    path: path.into(),
                    msg: "analyze needs a substitution on a single alphabet".into(),
                });
            }
            let m = s.abelianize();
            writeln!(out, "substitution: {s}").unwrap();
            writeln!(out, "matrix: {m}").unwrap();
            d.insert("substitution".into(), to_json(&s));
            d.insert("matrix".into(), to_json(&m));
            let primitive = spectral_lines(&m, &mut out, &mut d)?;
            let proper = s.is_proper()?;
            writeln!(out, "proper: {}", if proper { "yes" } else { "no" }).unwrap();
            d.insert("proper".into(), json!(proper));
            let c = path_counts(&s)?;
            writeln!(out, "max/min paths: {} maximal, {} minimal", c.max_count, c.min_count).unwrap();
            d.insert("path_counts".into(), to_json(&c));
            if primitive && s.images().iter().any(|w| w.len() > 1) {
                let disjoint = max_min_disjoint(&s)?;
                writeln!(out, "maximal and minimal paths disjoint: {}", if disjoint { "yes" } else { "no" }).unwrap();
                d.insert("max_min_disjoint".into(), json!(disjoint));
            }
            if primitive {
                let f = frequencies(&m)?;
                let parts: Vec<String> =
                    f.iter().enumerate().map(|(i, x)| format!("{} {x:.6}", s.domain().name(i))).collect();
                writeln!(out, "letter frequencies: {}", parts.join(", ")).unwrap();
                d.insert("letter_frequencies".into(), json!(f));
            }
        }
        Input::Mat(m) => {
            if !m.is_square() || !m.is_nonnegative() {
                return Err(CliError::Data {
                    path: path.into(),
                    msg: "analyze needs a square non-negative matrix".into(),
                });
            }
            writeln!(out, "matrix: {m}").unwrap();
            d.insert("matrix".into(), to_json(&m));
            spectral_lines(&m, &mut out, &mut d)?;
            let rank = m.non_nilpotent_rank()?;
            writeln!(out, "non-nilpotent rank: {rank}").unwrap();
            d.insert("non_nilpotent_rank".into(), json!(rank));
            if let Some(n) = supernatural(&m) {
                writeln!(out, "supernatural number: {n}").unwrap();
                d.insert("supernatural".into(), to_json(&n));
            }
        }
        other => return Err(CliError::wrong_kind(path, "a substitution or matrix", other.kind())),
    }
    Ok(Outcome::new(out, Value::Object(d)))
}

// ---- equiv and verify ----

pub struct EquivArgs<'a> {
    pub a: &'a str,
    pub b: &'a str,
    pub ordered: bool,
    pub fib: bool,
    pub certificate: Option<&'a Path>,
    pub budget: BudgetChoice,
}

fn describe_certificate<T: ChainElement + std::fmt::Display>(cert: &Certificate<T>) -> String {
    let mut s = format!("chain of {} maps", cert.chain_length());
    for v in &cert.via {
        let _ = write!(s, ", through {}", v.generator);
    }
    s
}

fn verdict_outcome<C: Serialize + Clone>(
    v: LibVerdict<C>,
    summary: impl Fn(&C) -> String,
    budget: Value,
    certificate: Option<&Path>,
) -> Result<Outcome> {
    let mut details = json!({ "budget": budget });
    let (text, verdict) = match &v {
        LibVerdict::Equivalent { certificate: c } => {
            if let Some(p) = certificate {
                let body = serde_json::to_string_pretty(c).expect("certificates serialize");
                fs::write(p, body + "\n").map_err(|source| CliError::Io {
                    path: p.display().to_string(),
                    source,
                })?;
            }
            details["certificate"] = to_json(c);
            (format!("equivalent: {}", summary(c)), Verdict::Equivalent)
        }
        LibVerdict::Distinguished { invariant, detail } => {
            details["invariant"] = json!(invariant);
            details["detail"] = json!(detail);
            (format!("distinguished by {invariant}: {detail}"), Verdict::Distinguished)
        }
        LibVerdict::Unknown => ("unknown: no certificate found within the budget".to_string(), Verdict::Unknown),
    };
    Ok(Outcome::new(text + "\n", details).with_verdict(verdict))
}

pub fn equiv(args: EquivArgs<'_>) -> Result<Outcome> {
    if args.fib || args.ordered {
        let s = input::load_square_sub(args.a)?;
        let t = input::load_square_sub(args.b)?;
        let budget = args.budget.ordered();
        let echo = json!({
            "preset": args.budget.preset.to_string(),
            "max_power": budget.max_power,
            "max_chain": budget.max_chain,
            "max_alphabet": budget.max_alphabet,
            "max_candidates": budget.max_candidates,
        });
        let v = if args.fib {
            fib_ordered_equivalence(&s, &t, &budget)?
        } else {
            analyze_ordered_equivalence(&s, &t, &budget)?
        };
        return verdict_outcome(v, describe_certificate, echo, args.certificate);
    }
    let m = input::load_incidence(args.a)?;
    let n = input::load_incidence(args.b)?;
    let budget = args.budget.unordered();
    let echo = json!({
        "preset": args.budget.preset.to_string(),
        "max_power": budget.max_power,
        "max_chain": budget.max_chain,
        "max_alphabet": budget.max_alphabet,
    });
    let v = analyze_equivalence(&m, &n, &budget)?;
    verdict_outcome(v, describe_certificate, echo, args.certificate)
}

pub fn verify(cert_path: &str, a: &str, b: &str) -> Result<Outcome> {
    let text = input::read_text(cert_path)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| CliError::json(cert_path, e))?;
    let ordered = value
        .get("chain")
        .and_then(|c| c.get(0))
        .is_some_and(Value::is_object);
    let malformed = |e: subkit::Error| CliError::data(cert_path, e);
    let ok = if ordered {
        let cert: Certificate<Substitution> =
            serde_json::from_value(value).map_err(|e| CliError::json(cert_path, e))?;
        let s = input::load_square_sub(a)?;
        let t = input::load_square_sub(b)?;
        cert.verify(&s, &t).map_err(malformed)?
    } else {
        let cert: Certificate<ExactMatrix> =
            serde_json::from_value(value).map_err(|e| CliError::json(cert_path, e))?;
        let m = input::load_incidence(a)?;
        let n = input::load_incidence(b)?;
        cert.verify(&m, &n).map_err(malformed)?
    };
    let text = if ok { "certificate verifies\n" } else { "certificate does not verify\n" };
    Ok(Outcome::new(text, json!({ "ordered": ordered, "verified": ok })).with_verdict(Verdict::from_bool(ok)))
}

// ---- words ----

pub fn compose(outer: &str, inner: &str) -> Result<Outcome> {
    let o = input::load_sub(outer)?;
    let i = input::load_sub(inner)?;
    let c = Substitution::compose(&o, &i)?;
    Ok(Outcome::new(c.to_sub_text(), json!({ "substitution": to_json(&c) })))
}

pub fn power(path: &str, k: u32) -> Result<Outcome> {
    let s = input::load_square_sub(path)?;
    let p = s.power(k)?;
    Ok(Outcome::new(p.to_sub_text(), json!({ "substitution": to_json(&p) })))
}

pub fn abelianize(path: &str) -> Result<Outcome> {
    let s = input::load_sub(path)?;
    let m = s.abelianize();
    Ok(Outcome::new(mat_text(&m), json!({ "matrix": to_json(&m) })))
}

pub fn factors(path: &str, k: usize) -> Result<Outcome> {
    let s = input::load_square_sub(path)?;
    let lang = s.factor_language(k)?;
    let words: Vec<String> = lang.iter().map(|w| s.domain().render(w)).collect();
    let mut text = words.join("\n");
    text.push('\n');
    Ok(Outcome::new(text, json!({ "k": k, "factors": words })))
}

// ---- diagrams ----

fn labels_text(d: &BratteliDiagram, out: &mut String) {
    for (n, row) in d.labels().iter().enumerate() {
        let row: Vec<String> = row.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "level {n}: {}", row.join(" "));
    }
}

pub fn telescope(path: &str, stride: Option<usize>, cuts: Option<&[usize]>, depth: usize) -> Result<Outcome> {
    let apply = |d: &BratteliDiagram| -> subkit::Result<BratteliDiagram> {
        match (stride, cuts) {
            (_, Some(c)) => d.telescope(c),
            (Some(k), None) => d.telescope_stride(k),
            (None, None) => Ok(d.clone()),
        }
    };
    let apply_ordered = |d: &OrderedDiagram| -> subkit::Result<OrderedDiagram> {
        match (stride, cuts) {
            (_, Some(c)) => d.telescope(c),
            (Some(k), None) => d.telescope_stride(k),
            (None, None) => Ok(d.clone()),
        }
    };
    let mut out = String::new();
    let details = match input::load(path)? {
        Input::Sub(s) => {
            let d = apply_ordered(&OrderedDiagram::from_substitution(&s, depth)?)?;
            if let Some(g) = d.generator() {
                let _ = write!(out, "generator:\n{}", g.to_sub_text());
            }
            labels_text(d.base(), &mut out);
            to_json(&d)
        }
        Input::Ordered(d) => {
            let d = apply_ordered(&d)?;
            labels_text(d.base(), &mut out);
            to_json(&d)
        }
        Input::Mat(m) => {
            let d = apply(&BratteliDiagram::stationary(&m, depth)?)?;
            if let Some(g) = d.generator() {
                let _ = write!(out, "generator:\n{}", mat_text(g));
            }
            labels_text(&d, &mut out);
            to_json(&d)
        }
        Input::Diagram(d) => {
            let d = apply(&d)?;
            labels_text(&d, &mut out);
            to_json(&d)
        }
    };
    Ok(Outcome::new(out, json!({ "diagram": details })))
}

pub fn export_dot(path: &str, depth: usize, color_extremes: bool, output: Option<&Path>) -> Result<Outcome> {
    let dot = match input::load(path)? {
        Input::Sub(s) => OrderedDiagram::from_substitution(&s, depth)?.to_dot(color_extremes),
        Input::Ordered(d) => d.to_dot(color_extremes),
        _ if color_extremes => {
            return Err(CliError::Usage("--color-extremes needs an ordered input".into()));
        }
        Input::Mat(m) => BratteliDiagram::stationary(&m, depth)?.to_dot(),
        Input::Diagram(d) => d.to_dot(),
    };
    match output {
        Some(p) => {
            fs::write(p, &dot).map_err(|source| CliError::Io {
                path: p.display().to_string(),
                source,
            })?;
            let text = format!("wrote {}\n", p.display());
            Ok(Outcome::new(text, json!({ "output": p.display().to_string() })))
        }
        None => Ok(Outcome::new(dot.clone(), json!({ "dot": dot }))),
    }
}

pub fn taf(path: &str, depth: usize) -> Result<Outcome> {
    let d = match input::load(path)? {
        Input::Sub(s) => OrderedDiagram::from_substitution(&s, depth)?,
        Input::Ordered(d) => d,
        other => return Err(CliError::wrong_kind(path, "a substitution or ordered diagram", other.kind())),
    };
    let text = taf_description(&d, depth)?;
    let lines: Vec<&str> = text.lines().collect();
    Ok(Outcome::new(text.clone(), json!({ "levels": lines })))
}

fn parse_path(d: &OrderedDiagram, text: &str) -> Result<FinitePath> {
    let usage = |msg: String| CliError::Usage(msg);
    let mut vertices = Vec::new();
    let mut ranks = Vec::new();
    for (n, tok) in text.split([' ', ',']).filter(|t| !t.is_empty()).enumerate() {
        let (v, r) = tok
            .rsplit_once(':')
            .ok_or_else(|| usage(format!("path step {tok:?} is not vertex:rank")))?;
        let level = n + 1;
        let vertex = (0..d.width(level))
            .find(|&i| d.vertex_name(level, i) == v)
            .ok_or_else(|| usage(format!("no vertex {v:?} on level {level}")))?;
        let rank = r.parse().map_err(|_| usage(format!("rank {r:?} is not a number")))?;
        vertices.push(vertex);
        ranks.push(rank);
    }
    Ok(FinitePath { vertices, ranks })
}

fn show_path(d: &OrderedDiagram, p: &FinitePath) -> String {
    let steps: Vec<String> = p
        .vertices
        .iter()
        .zip(&p.ranks)
        .enumerate()
        .map(|(n, (&v, r))| format!("{}:{r}", d.vertex_name(n + 1, v)))
        .collect();
    steps.join(" ")
}

pub struct SuccessorArgs<'a> {
    pub file: &'a str,
    pub path: Option<&'a str>,
    pub min: Option<usize>,
    pub end: Option<&'a str>,
    pub steps: usize,
}

pub fn successor(args: SuccessorArgs<'_>) -> Result<Outcome> {
    let s = input::load_square_sub(args.file)?;
    let length = match (args.path, args.min) {
        (Some(p), None) => p.split([' ', ',']).filter(|t| !t.is_empty()).count(),
        (None, Some(k)) => k,
        _ => return Err(CliError::Usage("give exactly one of --path and --min".into())),
    };
    if length == 0 {
        return Err(CliError::Usage("paths have at least one edge".into()));
    }
    let d = OrderedDiagram::from_substitution(&s, length)?;
    let start = match args.path {
        Some(p) => parse_path(&d, p)?,
        None => {
            let end = args.end.ok_or_else(|| CliError::Usage("--min needs --end".into()))?;
            let v = s
                .domain()
                .index_of(end)
                .ok_or_else(|| CliError::Usage(format!("no letter {end:?}")))?;
            let first = minimal_path(&d, length, v)?;
            let mut text = show_path(&d, &first);
            text.push('\n');
            return walk(&d, first, args.steps, text);
        }
    };
    start.validate(&d).map_err(|e| CliError::data(args.file, e))?;
    walk(&d, start, args.steps, String::new())
}

fn walk(d: &OrderedDiagram, mut p: FinitePath, steps: usize, mut text: String) -> Result<Outcome> {
    let mut shown: Vec<String> = Vec::new();
    let mut last = false;
    for _ in 0..steps {
        match vershik_successor(d, &p)? {
            Some(next) => {
                shown.push(show_path(d, &next));
                p = next;
            }
            None => {
                last = true;
                break;
            }
        }
    }
    for line in &shown {
        text.push_str(line);
        text.push('\n');
    }
    if last {
        text.push_str("(maximal path: no successor)\n");
    }
    Ok(Outcome::new(text, json!({ "successors": shown, "reached_maximal": last })))
}

// ---- matrices ----

fn construction_outcome(c: &Construction) -> Outcome {
    Outcome::new(
        mat_text(&c.matrix),
        json!({ "matrix": to_json(&c.matrix), "certificate": to_json(&c.certificate) }),
    )
}

pub fn split(m: &str, n: &str, s: &str) -> Result<Outcome> {
    let m = input::load_incidence(m)?;
    let n = input::load_mat(n)?;
    let s = input::load_mat(s)?;
    Ok(construction_outcome(&state_split(&m, &n, &s)?))
}

pub fn enlarge_cmd(m: &str, size: usize) -> Result<Outcome> {
    let m = input::load_incidence(m)?;
    Ok(construction_outcome(&enlarge(&m, size)?))
}

pub fn supernatural_cmd(m: &str) -> Result<Outcome> {
    let m = input::load_incidence(m)?;
    Ok(match supernatural(&m) {
        Some(n) => Outcome::new(format!("{n}\n"), json!({ "supernatural": to_json(&n), "text": n.to_string() }))
            .with_verdict(Verdict::True),
        None => Outcome::new(
            "not applicable: the matrix is not a non-negative rank-one matrix\n",
            json!({ "supernatural": null }),
        )
        .with_verdict(Verdict::False),
    })
}

pub fn pq(m: &str) -> Result<Outcome> {
    let m = input::load_mat(m)?;
    Ok(match pq_factorize(&m)? {
        Some(w) => Outcome::new(format!("{w}\n"), json!({ "word": w.to_string() })).with_verdict(Verdict::True),
        None => Outcome::new(
            "no P/Q factorization: determinant is not ±1 or the matrix leaves the non-negative cone\n",
            json!({ "word": null }),
        )
        .with_verdict(Verdict::False),
    })
}

pub fn fib_classify(a: &str, b: &str) -> Result<Outcome> {
    let a = input::load_mat(a)?;
    let b = input::load_mat(b)?;
    Ok(match classify_fib_factors(&a, &b)? {
        Some(c) => Outcome::new(format!("{c} (m = {})\n", c.m()), json!({ "class": to_json(&c), "m": c.m() }))
            .with_verdict(Verdict::True),
        None => Outcome::new("the product is not a positive power of F\n", json!({ "class": null }))
            .with_verdict(Verdict::False),
    })
}
