use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use finitary_af::decide::{anytime, Answer, Budgets, Verdict};
use finitary_af::trees::{explore, ins_out_sets, TreeKind, TreeSpec};
use finitary_af::{
    decide_finite, enumerate, truncate, DecisionProblem, Extension, FinitaryAF, FiniteAF, Gadget, SemanticsKind,
};
use serde::Serialize;

use crate::apx::{parse_apx, ApxDocument};
use crate::error::{CliError, Result};
use crate::gadgets::{build_gadget, emitted_names, GADGET_IDS};

pub const BUDGET_ENV: &str = "FAF_BUDGET";
pub const MAX_TREE_DEPTH: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
    Dot,
}

/// What a command prints on stdout, and its exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, code: 0 }
    }
}

fn no_dot(cmd: &str, f: Format) -> Result<()> {
    if f == Format::Dot {
        return Err(CliError::usage(format!("{cmd} has no dot output")));
    }
    Ok(())
}

/// An APX file or a gadget instance.
pub enum Target {
    Apx(ApxDocument),
    Gadget(Gadget),
}

impl Target {
    /// A path to an existing file is read as APX; otherwise `target` must be a gadget id.
    pub fn load(target: &str, param: Option<&str>, seed: u64) -> Result<Target> {
        if Path::new(target).is_file() {
            return Ok(Target::Apx(read_apx(target)?));
        }
        if GADGET_IDS.contains(&target) {
            return Ok(Target::Gadget(build_gadget(target, param, seed)?));
        }
        Err(CliError::usage(format!("`{target}` is neither a file nor a gadget ({})", GADGET_IDS.join(", "))))
    }

    pub fn faf(&self) -> FinitaryAF {
        match self {
            Target::Apx(d) => FinitaryAF::from_finite(&d.af),
            Target::Gadget(g) => g.af.clone(),
        }
    }

    pub fn name(&self, i: usize) -> String {
        match self {
            Target::Apx(d) => d.names.get(i).cloned().unwrap_or_else(|| format!("#{i}")),
            Target::Gadget(g) => g.name(i),
        }
    }

    /// Argument by name; a bare number is taken as an index.
    pub fn resolve(&self, name: &str) -> Result<usize> {
        let found = match self {
            Target::Apx(d) => d.index_of(name),
            Target::Gadget(g) => g.names.index(name)?,
        };
        found
            .or_else(|| name.parse().ok())
            .ok_or_else(|| CliError::usage(format!("unknown argument `{name}`")))
    }
}

pub fn read_apx(path: &str) -> Result<ApxDocument> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    parse_apx(&text)
}

/// `--problem` plus `--arg`; `cred(x)` inline is accepted too.
pub fn parse_problem(
    tag: &str,
    arg: Option<&str>,
    resolve: impl Fn(&str) -> Result<usize>,
) -> Result<DecisionProblem> {
    let (tag, arg) = match tag.split_once('(') {
        Some((t, rest)) => {
            let inner = rest.strip_suffix(')').ok_or_else(|| CliError::usage(format!("malformed problem `{tag}`")))?;
            (t, Some(inner.trim()))
        }
        None => (tag, arg),
    };
    let p = match tag.trim().to_ascii_lowercase().as_str() {
        t @ ("cred" | "skep") => {
            let a = arg.ok_or_else(|| CliError::usage(format!("problem `{t}` needs --arg")))?;
            DecisionProblem::from_tag(t, Some(resolve(a)?))?
        }
        t => {
            if arg.is_some() {
                return Err(CliError::usage(format!("problem `{t}` takes no argument")));
            }
            DecisionProblem::from_tag(t, None)?
        }
    };
    Ok(p)
}

fn problem_label(p: DecisionProblem, name: impl Fn(usize) -> String) -> String {
    match p.argument() {
        Some(a) => format!("{}({})", p.tag(), name(a)),
        None => p.tag().to_string(),
    }
}

// ---------------------------------------------------------------- solve ----

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolveReport {
    pub semantics: String,
    pub problem: Option<String>,
    pub answer: Option<bool>,
    pub extensions: Vec<Vec<String>>,
}

/// Enumerate and decide on a finite framework, rendering members by name.
pub fn solve_report(
    af: &FiniteAF,
    names: &[String],
    sigma: SemanticsKind,
    p: Option<DecisionProblem>,
) -> Result<SolveReport> {
    let exts = enumerate(af, sigma)?;
    let answer = p.map(|p| decide_finite(af, p, sigma)).transpose()?;
    Ok(SolveReport {
        semantics: sigma.to_string(),
        problem: p.map(|p| problem_label(p, |a| names[a].clone())),
        answer,
        extensions: exts.iter().map(|e| e.iter().map(|&a| names[a].clone()).collect()).collect(),
    })
}

pub struct SolveConfig<'a> {
    pub semantics: SemanticsKind,
    pub problem: Option<&'a str>,
    pub arg: Option<&'a str>,
    pub format: Format,
}

pub fn cmd_solve(doc: &ApxDocument, cfg: &SolveConfig) -> Result<Outcome> {
    no_dot("solve", cfg.format)?;
    let p = match cfg.problem {
        Some(t) => Some(parse_problem(t, cfg.arg, |n| {
            doc.index_of(n).ok_or_else(|| CliError::usage(format!("unknown argument `{n}`")))
        })?),
        None if cfg.arg.is_some() => return Err(CliError::usage("--arg needs --problem")),
        None => None,
    };
    let r = solve_report(&doc.af, &doc.names, cfg.semantics, p)?;
    Ok(Outcome::ok(render_solve(&r, cfg.format)))
}

fn braces(e: &[String], sep: &str) -> String {
    format!("{{{}}}", e.join(sep))
}

pub fn render_solve(r: &SolveReport, f: Format) -> String {
    let answer = r.answer.map_or(String::new(), |a| a.to_string());
    let problem = r.problem.clone().unwrap_or_default();
    match f {
        Format::Json => serde_json::to_string(r).expect("plain data") + "\n",
        Format::Csv => {
            let mut out = "semantics,problem,answer,extension\n".to_string();
            for e in &r.extensions {
                let _ = writeln!(out, "{},{problem},{answer},{}", r.semantics, braces(e, " "));
            }
            if r.extensions.is_empty() {
                let _ = writeln!(out, "{},{problem},{answer},", r.semantics);
            }
            out
        }
        _ => {
            let mut out = format!("semantics: {}\n", r.semantics);
            if r.problem.is_some() {
                let _ = writeln!(out, "problem: {problem}\nanswer: {answer}");
            }
            let _ = writeln!(out, "extensions: {}", r.extensions.len());
            for e in &r.extensions {
                let _ = writeln!(out, "  {}", braces(e, ", "));
            }
            out
        }
    }
}

// --------------------------------------------------------------- gadget ----

/// The first `n` arguments of a gadget as an APX document with emitted names.
pub fn gadget_document(g: &Gadget, n: usize) -> Result<(ApxDocument, Vec<(String, String)>)> {
    let af = truncate(&g.af, n)?;
    let pairs = emitted_names(g, af.n_args());
    let names = pairs.iter().map(|(_, e)| e.clone()).collect();
    Ok((ApxDocument { af, names }, pairs))
}

pub fn cmd_gadget(g: &Gadget, n: usize) -> Result<Outcome> {
    let (doc, pairs) = gadget_document(g, n)?;
    let mut out = format!("% {} truncated to {} arguments\n% gadget name -> emitted name\n", g.af.description(), doc.af.n_args());
    for (p, e) in &pairs {
        let _ = writeln!(out, "%   {p} -> {e}");
    }
    out.push_str(&doc.emit());
    Ok(Outcome::ok(out))
}

// ---------------------------------------------------------------- trace ----

pub struct TraceConfig<'a> {
    pub semantics: SemanticsKind,
    pub problem: &'a str,
    pub arg: Option<&'a str>,
    pub stages: usize,
    pub budget: usize,
    pub format: Format,
    pub expect: Option<Answer>,
}

pub fn parse_answer(s: &str) -> Result<Answer> {
    match s.trim().to_ascii_lowercase().as_str() {
        "accept" | "true" | "yes" => Ok(Answer::Accept),
        "reject" | "false" | "no" => Ok(Answer::Reject),
        "unknown" => Ok(Answer::Unknown),
        _ => Err(CliError::usage(format!("unknown answer `{s}`"))),
    }
}

/// Run an anytime process for `stages` stages. Exit status 2 if the last
/// verdict is unknown.
pub fn cmd_trace(t: &Target, cfg: &TraceConfig) -> Result<Outcome> {
    no_dot("trace", cfg.format)?;
    if cfg.stages == 0 {
        return Err(CliError::usage("the stage limit must be at least 1"));
    }
    let p = parse_problem(cfg.problem, cfg.arg, |n| t.resolve(n))?;
    let budgets = Budgets { nodes: cfg.budget, ..Budgets::default() };
    let mut proc = anytime(&t.faf(), cfg.semantics, p, budgets)?;
    let verdicts = proc.run(cfg.stages)?;
    let last = verdicts.last().expect("at least one stage").clone();
    let matched = cfg.expect.map(|e| e == last.answer);
    let label = problem_label(p, |a| t.name(a));
    let mut out = String::new();
    match cfg.format {
        Format::Json => {
            for v in &verdicts {
                out.push_str(&v.to_json_line());
                out.push('\n');
            }
            let summary = serde_json::json!({
                "summary": {
                    "semantics": cfg.semantics.as_str(),
                    "problem": label,
                    "stages": verdicts.len(),
                    "answer": last.answer,
                    "class": last.cls,
                    "expected": cfg.expect,
                    "matched": matched,
                }
            });
            let _ = writeln!(out, "{summary}");
        }
        Format::Csv => {
            out.push_str("stage,answer,class,evidence\n");
            for v in &verdicts {
                let _ = writeln!(out, "{},{},{},{}", v.stage, v.answer.as_str(), v.cls.as_str(), csv_field(&v.evidence));
            }
        }
        _ => {
            let _ = writeln!(out, "# {} {label} [{}]", cfg.semantics, last.cls.as_str());
            for v in &verdicts {
                let _ = writeln!(out, "{:>5}  {:<7}  {}", v.stage, v.answer.as_str(), v.evidence);
            }
            let _ = write!(out, "final: {} after {} stages", last.answer.as_str(), verdicts.len());
            match matched {
                Some(m) => {
                    let _ = writeln!(out, " (expected {}: {})", cfg.expect.map_or("", |e| e.as_str()), if m { "match" } else { "MISMATCH" });
                }
                None => out.push('\n'),
            }
        }
    }
    let code = if last.answer == Answer::Unknown { 2 } else { 0 };
    Ok(Outcome { stdout: out, code })
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// The verdict stream a trace prints, without rendering.
pub fn trace_verdicts(t: &Target, cfg: &TraceConfig) -> Result<Vec<Verdict>> {
    let p = parse_problem(cfg.problem, cfg.arg, |n| t.resolve(n))?;
    let budgets = Budgets { nodes: cfg.budget, ..Budgets::default() };
    Ok(anytime(&t.faf(), cfg.semantics, p, budgets)?.run(cfg.stages)?)
}

// ----------------------------------------------------------------- tree ----

pub struct TreeConfig<'a> {
    pub kind: TreeKind,
    pub with: &'a [String],
    pub without: &'a [String],
    pub depth: usize,
    pub budget: usize,
    pub label_cap: Option<usize>,
    pub format: Format,
}

/// Dump every node of `T_{kind+D-E}` up to `depth`.
pub fn cmd_tree(t: &Target, cfg: &TreeConfig) -> Result<Outcome> {
    if cfg.depth > MAX_TREE_DEPTH {
        return Err(CliError::usage(format!("depth {} exceeds the maximum {MAX_TREE_DEPTH}", cfg.depth)));
    }
    let set = |names: &[String]| names.iter().map(|n| t.resolve(n)).collect::<Result<Extension>>();
    let mut spec = TreeSpec::new(t.faf(), cfg.kind, set(cfg.with)?, set(cfg.without)?)?;
    match (cfg.kind, cfg.label_cap) {
        (_, Some(c)) => spec = spec.with_label_cap(c),
        (TreeKind::InfNa, None) => return Err(CliError::usage("inf-na trees need --cap")),
        _ => {}
    }
    let nodes = explore(&spec, cfg.depth, cfg.budget)?;
    let mut rows = Vec::with_capacity(nodes.len());
    for s in &nodes {
        let ns = ins_out_sets(&spec, s)?;
        let names = |e: &Extension| e.iter().map(|&a| t.name(a)).collect::<Vec<_>>();
        rows.push((s, names(&ns.ins), names(&ns.outs)));
    }
    let code = |s: &[usize]| format!("[{}]", s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
    let at_depth = nodes.iter().filter(|s| s.len() == cfg.depth).count();
    let mut out = String::new();
    match cfg.format {
        Format::Text => {
            let _ = writeln!(out, "# T_{} over {}, depth {}", cfg.kind, t.faf().description(), cfg.depth);
            for (s, i, o) in &rows {
                let _ = writeln!(out, "{}{} in={} out={}", "  ".repeat(s.len()), code(s), braces(i, ","), braces(o, ","));
            }
            let _ = writeln!(out, "# {} nodes, {at_depth} at depth {}", rows.len(), cfg.depth);
        }
        Format::Dot => {
            let ids: HashMap<&[usize], usize> = nodes.iter().enumerate().map(|(k, s)| (s.as_slice(), k)).collect();
            out.push_str("digraph tree {\n  node [shape=box, fontname=\"monospace\"];\n");
            for (k, (s, i, o)) in rows.iter().enumerate() {
                let _ = writeln!(out, "  n{k} [label=\"{}\\nin={} out={}\"];", code(s), braces(i, ","), braces(o, ","));
                if let Some(parent) = s.len().checked_sub(1).and_then(|l| ids.get(&s[..l])) {
                    let _ = writeln!(out, "  n{parent} -> n{k};");
                }
            }
            out.push_str("}\n");
        }
        Format::Json => {
            for (s, i, o) in &rows {
                let _ = writeln!(out, "{}", serde_json::json!({ "code": s, "in": i, "out": o }));
            }
        }
        Format::Csv => {
            out.push_str("code,in,out\n");
            for (s, i, o) in &rows {
                let _ = writeln!(out, "{},{},{}", code(s).replace(',', " "), i.join(" "), o.join(" "));
            }
        }
    }
    Ok(Outcome::ok(out))
}
