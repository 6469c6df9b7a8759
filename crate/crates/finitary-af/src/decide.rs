//! Characterization shortcuts and anytime decision procedures.
//!
//! An [`AnytimeProcess`] produces one [`Verdict`] per stage. At stage `s` it
//! looks at trees of depth `s`, candidate arguments in a window that grows
//! with `s`, and the attacker sets of finitely many arguments. The verdict
//! stream obeys the law of its [`ConvergenceClass`]:
//!
//! - `sigma1`: accept is permanent once reached;
//! - `pi1`: reject is permanent once reached;
//! - `sigma2`: a witness must persist from stage `s/2` to stage `s`;
//! - `pi2`: accept means every candidate in the window is currently refuted;
//! - `u-sigma2`, `d-sigma2`, `pi3`: combinations of the above.
//!
//! A framework with known finite size is handled exactly: every argument is
//! a candidate from stage 0 and no persistence lag is applied, so the verdict
//! is final from the forced tree depth on.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::af::{ArgumentId, Extension, SemanticsKind};
use crate::error::{AfError, Result};
use crate::finitary::FinitaryAF;
use crate::oracle::DecisionProblem;
use crate::trees::{self, TreeKind, TreeSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Answer {
    Accept,
    Reject,
    Unknown,
}

impl Answer {
    fn from_bool(b: bool) -> Self {
        if b {
            Answer::Accept
        } else {
            Answer::Reject
        }
    }

    fn negate(self) -> Self {
        match self {
            Answer::Accept => Answer::Reject,
            Answer::Reject => Answer::Accept,
            Answer::Unknown => Answer::Unknown,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Answer::Accept => "accept",
            Answer::Reject => "reject",
            Answer::Unknown => "unknown",
        }
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConvergenceClass {
    #[serde(rename = "computable")]
    Computable,
    #[serde(rename = "sigma1")]
    Sigma1,
    #[serde(rename = "pi1")]
    Pi1,
    #[serde(rename = "sigma2")]
    Sigma2,
    #[serde(rename = "pi2")]
    Pi2,
    #[serde(rename = "d-sigma2")]
    DSigma2,
    #[serde(rename = "u-sigma2")]
    USigma2,
    #[serde(rename = "pi3")]
    Pi3,
    #[serde(rename = "none")]
    None,
}

impl ConvergenceClass {
    pub fn as_str(self) -> &'static str {
        match self {
            ConvergenceClass::Computable => "computable",
            ConvergenceClass::Sigma1 => "sigma1",
            ConvergenceClass::Pi1 => "pi1",
            ConvergenceClass::Sigma2 => "sigma2",
            ConvergenceClass::Pi2 => "pi2",
            ConvergenceClass::DSigma2 => "d-sigma2",
            ConvergenceClass::USigma2 => "u-sigma2",
            ConvergenceClass::Pi3 => "pi3",
            ConvergenceClass::None => "none",
        }
    }
}

impl fmt::Display for ConvergenceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One stage of an anytime run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub stage: usize,
    pub answer: Answer,
    #[serde(rename = "class")]
    pub cls: ConvergenceClass,
    pub evidence: String,
}

impl Verdict {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("verdicts serialize")
    }
}

/// Per-stage work limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budgets {
    /// Tree nodes per search.
    pub nodes: usize,
    /// Candidate sets examined per stage by the finite-witness searches.
    pub subsets: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets { nodes: trees::DEFAULT_NODE_BUDGET, subsets: 100_000 }
    }
}

type Eval = (Answer, String);

trait Evaluator: Send {
    fn eval(&mut self, s: usize) -> Result<Eval>;
}

/// A resumable verdict stream.
pub struct AnytimeProcess {
    problem: DecisionProblem,
    sigma: SemanticsKind,
    cls: ConvergenceClass,
    next: usize,
    latched: Option<(usize, String)>,
    eval: Box<dyn Evaluator>,
}

impl fmt::Debug for AnytimeProcess {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnytimeProcess")
            .field("problem", &self.problem)
            .field("sigma", &self.sigma)
            .field("cls", &self.cls)
            .field("next", &self.next)
            .finish()
    }
}

impl AnytimeProcess {
    fn new(problem: DecisionProblem, sigma: SemanticsKind, cls: ConvergenceClass, eval: Box<dyn Evaluator>) -> Self {
        AnytimeProcess { problem, sigma, cls, next: 0, latched: None, eval }
    }

    pub fn problem(&self) -> DecisionProblem {
        self.problem
    }

    pub fn semantics(&self) -> SemanticsKind {
        self.sigma
    }

    pub fn class(&self) -> ConvergenceClass {
        self.cls
    }

    /// The stage the next call to [`step`](Self::step) evaluates.
    pub fn stage(&self) -> usize {
        self.next
    }

    /// Evaluate the current stage and advance. Budget exhaustion yields an
    /// `unknown` verdict; other errors are returned.
    pub fn step(&mut self) -> Result<Verdict> {
        let s = self.next;
        self.next += 1;
        self.at(s)
    }

    /// Skip ahead and evaluate stage `s` directly.
    pub fn jump(&mut self, s: usize) -> Result<Verdict> {
        self.next = s + 1;
        self.at(s)
    }

    /// Run stages `stage()..stage()+count`.
    pub fn run(&mut self, count: usize) -> Result<Vec<Verdict>> {
        (0..count).map(|_| self.step()).collect()
    }

    fn at(&mut self, s: usize) -> Result<Verdict> {
        let permanent = match self.cls {
            ConvergenceClass::Sigma1 => Some(Answer::Accept),
            ConvergenceClass::Pi1 => Some(Answer::Reject),
            _ => None,
        };
        if let (Some(ans), Some((at, why))) = (permanent, &self.latched) {
            return Ok(Verdict {
                stage: s,
                answer: ans,
                cls: self.cls,
                evidence: format!("settled at stage {at}: {why}"),
            });
        }
        let (answer, evidence) = match self.eval.eval(s) {
            Ok(v) => v,
            Err(e) if e.is_exhaustion() => (Answer::Unknown, e.to_string()),
            Err(e) => return Err(e),
        };
        if permanent == Some(answer) {
            self.latched = Some((s, evidence.clone()));
        }
        Ok(Verdict { stage: s, answer, cls: self.cls, evidence })
    }
}

// ------------------------------------------------------------ helpers ----

/// Shared attacker cache and tree-liveness memo for one process.
struct Probe {
    af: FinitaryAF,
    budgets: Budgets,
    att: HashMap<usize, Vec<usize>>,
    alive: HashMap<(TreeKind, Vec<usize>, Vec<usize>, usize), bool>,
}

impl Probe {
    fn new(af: FinitaryAF, budgets: Budgets) -> Self {
        Probe { af, budgets, att: HashMap::new(), alive: HashMap::new() }
    }

    fn att(&mut self, x: usize) -> Result<&[usize]> {
        if !self.att.contains_key(&x) {
            let v = self.af.attackers_of(x)?;
            self.att.insert(x, v);
        }
        Ok(&self.att[&x])
    }

    fn attacks(&mut self, x: usize, y: usize) -> Result<bool> {
        Ok(self.att(y)?.binary_search(&x).is_ok())
    }

    fn self_attacking(&mut self, x: usize) -> Result<bool> {
        self.attacks(x, x)
    }

    fn not_cf(&mut self, x: usize, y: usize) -> Result<bool> {
        Ok(self.attacks(x, y)? || self.attacks(y, x)?)
    }

    /// Candidate arguments at stage `s`: everything for a finite framework,
    /// `0..=limit` otherwise.
    fn window(&self, limit: usize) -> Vec<usize> {
        match self.af.size() {
            Some(n) => (0..n).collect(),
            None => (0..=limit).collect(),
        }
    }

    fn alive(&mut self, kind: TreeKind, d: &Extension, e: &Extension, depth: usize) -> Result<bool> {
        let key = (kind, d.iter().copied().collect(), e.iter().copied().collect(), depth);
        if let Some(&b) = self.alive.get(&key) {
            return Ok(b);
        }
        let spec = TreeSpec::new(self.af.clone(), kind, d.clone(), e.clone())?;
        let b = trees::search(&spec, depth, self.budgets.nodes)?.alive;
        self.alive.insert(key, b);
        Ok(b)
    }
}

fn tree_kind(sigma: SemanticsKind) -> Result<TreeKind> {
    match sigma.base() {
        SemanticsKind::Ad => Ok(TreeKind::Ad),
        SemanticsKind::Co => Ok(TreeKind::Co),
        SemanticsKind::Stb => Ok(TreeKind::Stb),
        other => Err(AfError::input(format!("no tree for {other}"))),
    }
}

fn one(a: ArgumentId) -> Extension {
    [a].into_iter().collect()
}

fn none() -> Extension {
    Extension::new()
}

fn show(s: &Extension) -> String {
    format!("{{{}}}", s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

fn isqrt(s: usize) -> usize {
    (s as f64).sqrt() as usize
}

fn check_arg(af: &FinitaryAF, p: DecisionProblem) -> Result<()> {
    if let (Some(a), Some(n)) = (p.argument(), af.size()) {
        if a >= n {
            return Err(AfError::OutOfRange { index: a, n_args: n });
        }
    }
    Ok(())
}

struct Const(Answer, String);

impl Evaluator for Const {
    fn eval(&mut self, _s: usize) -> Result<Eval> {
        Ok((self.0, self.1.clone()))
    }
}

fn constant(p: DecisionProblem, sigma: SemanticsKind, answer: Answer, why: impl Into<String>) -> AnytimeProcess {
    AnytimeProcess::new(p, sigma, ConvergenceClass::Computable, Box::new(Const(answer, why.into())))
}

// ------------------------------------------------------------- cf / na ----

/// Credulous conflict-free acceptance: `a` does not attack itself.
pub fn cred_cf_fast(faf: &FinitaryAF, a: ArgumentId) -> Result<bool> {
    Ok(!faf.is_self_attacking(a)?)
}

struct NeCf(Probe);

impl Evaluator for NeCf {
    fn eval(&mut self, s: usize) -> Result<Eval> {
        for a in self.0.window(s) {
            if !self.0.self_attacking(a)? {
                return Ok((Answer::Accept, format!("{{{a}}} is conflict-free")));
            }
        }
        Ok((Answer::Reject, format!("every argument up to {s} attacks itself")))
    }
}

struct UniCf(Probe);

impl Evaluator for UniCf {
    fn eval(&mut self, s: usize) -> Result<Eval> {
        for a in self.0.window(s) {
            if !self.0.self_attacking(a)? {
                return Ok((Answer::Reject, format!("{{}} and {{{a}}} are both conflict-free")));
            }
        }
        Ok((Answer::Accept, format!("every argument up to {s} attacks itself")))
    }
}

struct SkepNa(Probe, ArgumentId);

impl Evaluator for SkepNa {
    fn eval(&mut self, s: usize) -> Result<Eval> {
        let a = self.1;
        if self.0.self_attacking(a)? {
            return Ok((Answer::Reject, format!("{a} attacks itself")));
        }
        for y in self.0.window(s) {
            if y != a && !self.0.self_attacking(y)? && self.0.not_cf(a, y)? {
                return Ok((Answer::Reject, format!("{y} conflicts with {a}")));
            }
        }
        Ok((Answer::Accept, format!("no argument up to {s} conflicts with {a}")))
    }
}

struct UniNa(Probe);

impl Evaluator for UniNa {
    fn eval(&mut self, s: usize) -> Result<Eval> {
        let w = self.0.window(s);
        let mut good = Vec::new();
        for &x in &w {
            if !self.0.self_attacking(x)? {
                good.push(x);
            }
        }
        for &x in &good {
            for &y in &good {
                if x != y && self.0.attacks(x, y)? {
                    return Ok((Answer::Reject, format!("{x} attacks {y}, neither attacks itself")));
                }
            }
        }
        Ok((Answer::Accept, format!("arguments up to {s} that do not attack themselves are conflict-free")))
    }
}

/// Skeptical naive acceptance, refuted by a self-attack on `a` or by a
/// non-self-attacking argument in conflict with `a`.
pub fn skep_na_anytime(faf: &FinitaryAF, a: ArgumentId) -> AnytimeProcess {
    let p = DecisionProblem::Skep(a);
    let ev = SkepNa(Probe::new(faf.clone(), Budgets::default()), a);
    AnytimeProcess::new(p, SemanticsKind::Na, ConvergenceClass::Pi1, Box::new(ev))
}

/// Unique naive extension, refuted by two conflicting non-self-attacking
/// arguments.
pub fn uni_na_anytime(faf: &FinitaryAF) -> AnytimeProcess {
    let ev = UniNa(Probe::new(faf.clone(), Budgets::default()));
    AnytimeProcess::new(DecisionProblem::Uni, SemanticsKind::Na, ConvergenceClass::Pi1, Box::new(ev))
}

// --------------------------------------------------------- tree-based ----

struct TreeCred(Probe, TreeKind, ArgumentId);

impl Evaluator for TreeCred {
    fn eval(&mut self, s: usize) -> Result<Eval> {
        let (k, a) = (self.1, self.2);
        let alive = self.0.alive(k, &one(a), &none(), s)?;
        let why = if alive { "alive" } else { "dead" };
        Ok((Answer::from_bool(alive), format!("T_{{{k}+{{{a}}}}} {why} at depth {s}")))
    }
}

struct TreeSkep(Probe, TreeKind, ArgumentId);

impl Evaluator for TreeSkep {
    fn eval(&mut self, s: usize) -> Result<Eval> {
        let (k, a) = (self.1, self.2);
        let alive = self.0.alive(k, &none(), &one(a), s)?;
        let why = if alive { "alive" } else { "dead" };
        Ok((Answer::from_bool(!alive), format!("T_{{{k}-{{{a}}}}} {why} at depth {s}")))
    }
}

struct StbExists(Probe, bool);

impl Evaluator for StbExists {
    fn eval(&mut self, s: usize) -> Result<Eval> {
        if self.1 && self.0.af.size() == Some(0) {
            return Ok((Answer::Reject, "no arguments, so the only stable set is empty".into()));
        }
        let alive = self.0.alive(TreeKind::Stb, &none(), &none(), s)?;
        let why = if alive { "alive" } else { "dead" };
        Ok((Answer::from_bool(alive), format!("T_{{stb}} {why} at depth {s}")))
    }
}

/// Least candidate whose credulous tree is alive, persisting from `s/2`.
struct NeTree {
    probe: Probe,
    kind: TreeKind,
    memo: HashMap<usize, Option<ArgumentId>>,
}

impl NeTree {
    fn witness(&mut self, s: usize) -> Result<Option<ArgumentId>> {
        if let Some(w) = self.memo.get(&s) {
            return Ok(*w);
        }
        let mut found = None;
        for a in self.probe.window(s) {
            if self.probe.alive(self.kind, &one(a), &none(), s)? {
                found = Some(a);
                break;
            }
        }
        self.memo.insert(s, found);
        Ok(found)
    }
}

impl Evaluator for NeTree {
    fn eval(&mut self, s: usize) -> Result<Eval> {
        let k = self.kind;
        let now = self.witness(s)?;
        let Some(a) = now else {
            return Ok((Answer::Reject, format!("every candidate tree dead at depth {s}")));
        };
        if self.probe.af.is_finite() {
            return Ok((Answer::Accept, format!("T_{{{k}+{{{a}}}}} alive at depth {s}")));
        }
        let before = self.witness(s / 2)?;
        if before == now {
            Ok((Answer::Accept, format!("T_{{{k}+{{{a}}}}} least alive since stage {}", s / 2)))
        } else {
            Ok((Answer::Reject, format!("least alive candidate moved to {a} after stage {}", s / 2)))
        }
    }
}

/// `exists ∧ ∀a (cred(a) → skep(a))` over the stage window.
struct UniTree {
    probe: Probe,
    kind: TreeKind,
}

impl Evaluator for UniTree {
    fn eval(&mut self, s: usize) -> Result<Eval> {
        let k = self.kind;
        if k == TreeKind::Stb && !self.probe.alive(k, &none(), &none(), s)? {
            return Ok((Answer::Reject, format!("T_{{stb}} dead at depth {s}")));
        }
        for a in self.probe.window(isqrt(s)) {
            let cred = self.probe.alive(k, &one(a), &none(), s)?;
            let skep = match k {
                TreeKind::Ad => false,
                _ => !self.probe.alive(k, &none(), &one(a), s)?,
            };
            if cred && !skep {
                return Ok((Answer::Reject, format!("{a} credulous but not skeptical at depth {s}")));
            }
        }
        Ok((Answer::Accept, format!("every candidate credulous only if skeptical at depth {s}")))
    }
}

/// Tree-based process for `σ ∈ {ad, co, stb}`.
pub fn tree_anytime(
    faf: &FinitaryAF,
    sigma: SemanticsKind,
    p: DecisionProblem,
    budgets: Budgets,
) -> Result<AnytimeProcess> {
    use ConvergenceClass as C;
    use DecisionProblem as P;
    check_arg(faf, p)?;
    let k = match sigma {
        SemanticsKind::Ad | SemanticsKind::Co | SemanticsKind::Stb => tree_kind(sigma)?,
        _ => return Err(AfError::input(format!("tree procedures cover ad, co and stb, not {sigma}"))),
    };
    let probe = Probe::new(faf.clone(), budgets);
    let (cls, ev): (C, Box<dyn Evaluator>) = match (k, p) {
        (_, P::Cred(a)) => (C::Pi1, Box::new(TreeCred(probe, k, a))),
        (TreeKind::Ad, P::Skep(_)) => {
            return Ok(constant(p, sigma, Answer::Reject, "the empty set is admissible"));
        }
        (_, P::Skep(a)) => (C::Sigma1, Box::new(TreeSkep(probe, k, a))),
        (TreeKind::Stb, P::Exists) => (C::Pi1, Box::new(StbExists(probe, false))),
        (TreeKind::Stb, P::Ne) => (C::Pi1, Box::new(StbExists(probe, true))),
        (_, P::Exists) => {
            return Ok(constant(p, sigma, Answer::Accept, "the grounded extension is complete and admissible"));
        }
        (_, P::Ne) => (C::Sigma2, Box::new(NeTree { probe, kind: k, memo: HashMap::new() })),
        (_, P::Uni) => (C::Pi2, Box::new(UniTree { probe, kind: k })),
    };
    Ok(AnytimeProcess::new(p, sigma, cls, ev))
}

// ------------------------------------------------------------ inf-ad ----

/// Depth used by [`y_set_probe`] for candidates up to `stage`.
pub fn probe_depth(stage: usize) -> usize {
    4 * stage + 8
}

/// Result of a Y-set probe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeResult {
    pub members: Extension,
    /// Some candidate exhausted the node budget and was left out.
    pub partial: bool,
}

/// Candidates `b <= stage` such that the tree for `σ + D∪{b} − E` is alive at
/// depth [`probe_depth`]`(stage)`: each has a witness extension that no finite
/// check so far refutes.
pub fn y_set_probe(
    faf: &FinitaryAF,
    sigma: SemanticsKind,
    d: &Extension,
    e: &Extension,
    stage: usize,
    budgets: Budgets,
) -> Result<ProbeResult> {
    let k = match sigma.base() {
        SemanticsKind::Ad => TreeKind::Ad,
        SemanticsKind::Stb => TreeKind::Stb,
        other => return Err(AfError::input(format!("the Y-set probe covers ad and stb, not {other}"))),
    };
    if let Some(x) = d.intersection(e).next() {
        return Err(AfError::input(format!("D and E share argument {x}")));
    }
    let mut probe = Probe::new(faf.clone(), budgets);
    let depth = probe_depth(stage);
    let mut out = ProbeResult { members: Extension::new(), partial: false };
    for b in probe.window(stage) {
        if e.contains(&b) {
            continue;
        }
        let mut db = d.clone();
        db.insert(b);
        match probe.alive(k, &db, e, depth) {
            Ok(true) => {
                out.members.insert(b);
            }
            Ok(false) => {}
            Err(err) if err.is_exhaustion() => out.partial = true,
            Err(err) => return Err(err),
        }
    }
    Ok(out)
}

/// Smallest finite admissible set containing `base` and avoiding `avoid`,
/// built from defenders inside `0..=window`, as found by depth-first search.
fn finite_admissible(
    probe: &mut Probe,
    base: &Extension,
    avoid: &Extension,
    window: usize,
    budget: &mut usize,
) -> Result<Option<Extension>> {
    for &x in base {
        if avoid.contains(&x) || probe.self_attacking(x)? {
            return Ok(None);
        }
        for &y in base {
            if x < y && probe.not_cf(x, y)? {
                return Ok(None);
            }
        }
    }
    let mut set = base.clone();
    defend(probe, &mut set, avoid, window, budget)
}

fn defend(
    probe: &mut Probe,
    set: &mut Extension,
    avoid: &Extension,
    window: usize,
    budget: &mut usize,
) -> Result<Option<Extension>> {
    if *budget == 0 {
        return Err(AfError::Resource { what: "finite-witness checks", limit: 0 });
    }
    *budget -= 1;
    let mut open = None;
    'find: for y in set.iter().copied().collect::<Vec<_>>() {
        for z in probe.att(y)?.to_vec() {
            let att_z = probe.att(z)?;
            if !att_z.iter().any(|x| set.contains(x)) {
                open = Some(z);
                break 'find;
            }
        }
    }
    let Some(z) = open else {
        return Ok(Some(set.clone()));
    };
    for x in probe.att(z)?.to_vec() {
        if x > window || avoid.contains(&x) || set.contains(&x) || probe.self_attacking(x)? {
            continue;
        }
        let mut ok = true;
        for &y in set.iter() {
            if probe.not_cf(x, y)? {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        set.insert(x);
        if let Some(found) = defend(probe, set, avoid, window, budget)? {
            return Ok(Some(found));
        }
        set.remove(&x);
    }
    Ok(None)
}

#[derive(Clone, PartialEq, Eq)]
struct InfAdStage {
    /// Size of the largest finite admissible set found.
    m: usize,
    /// A set of size `m+1` whose tree is still alive.
    e_witness: Option<Extension>,
}

/// Evaluates the two conditions behind infinite admissible existence with
/// `D0 ⊆ S` and `S ∩ E0 = ∅`:
/// (E) some set of size `m+1` is in an admissible extension although no
/// finite admissible extension of that size is known, persisting from `s/2`
/// (trees are searched to depth [`probe_depth`]`(s)`);
/// (A) the largest known finite admissible extension grew since `s/2`.
struct InfAd {
    probe: Probe,
    d0: Extension,
    e0: Extension,
    negate: bool,
    memo: HashMap<usize, InfAdStage>,
}

impl InfAd {
    fn new(af: FinitaryAF, budgets: Budgets, d0: Extension, e0: Extension, negate: bool) -> Self {
        InfAd { probe: Probe::new(af, budgets), d0, e0, negate, memo: HashMap::new() }
    }

    fn stage(&mut self, s: usize) -> Result<InfAdStage> {
        if let Some(st) = self.memo.get(&s) {
            return Ok(st.clone());
        }
        let mut budget = self.probe.budgets.subsets;
        let mut witnesses: Vec<Extension> = Vec::new();
        let mut covered: HashSet<usize> = HashSet::new();
        if let Some(x) = finite_admissible(&mut self.probe, &self.d0, &self.e0, s, &mut budget)? {
            witnesses.push(x);
        }
        for b in 0..=s {
            if covered.contains(&b) || self.e0.contains(&b) {
                continue;
            }
            let mut base = self.d0.clone();
            base.insert(b);
            if let Some(x) = finite_admissible(&mut self.probe, &base, &self.e0, s, &mut budget)? {
                covered.extend(x.iter().copied());
                witnesses.push(x);
            }
        }
        witnesses.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        let mut union: Extension = Extension::new();
        for x in &witnesses {
            let mut ok = true;
            'pairs: for &p in x {
                for &q in &union {
                    if self.probe.not_cf(p, q)? {
                        ok = false;
                        break 'pairs;
                    }
                }
            }
            if ok {
                union.extend(x.iter().copied());
            }
        }
        let m = union.len();

        let n = (m + 1).max(self.d0.len());
        let depth = probe_depth(s);
        let mut d = self.d0.clone();
        for b in 0..=s {
            if d.len() >= n {
                break;
            }
            if d.contains(&b) || self.e0.contains(&b) {
                continue;
            }
            let mut trial = d.clone();
            trial.insert(b);
            if self.probe.alive(TreeKind::Ad, &trial, &self.e0, depth)? {
                d = trial;
            }
        }
        let e_witness = if d.len() == n && self.probe.alive(TreeKind::Ad, &d, &self.e0, depth)? {
            Some(d)
        } else {
            None
        };
        let st = InfAdStage { m, e_witness };
        self.memo.insert(s, st.clone());
        Ok(st)
    }
}

impl Evaluator for InfAd {
    fn eval(&mut self, s: usize) -> Result<Eval> {
        let now = self.stage(s)?;
        let before = self.stage(s / 2)?;
        let (ans, why) = if s >= 2 && now.m > before.m {
            (
                Answer::Accept,
                format!("(A) finite admissible size grew from {} to {} since stage {}", before.m, now.m, s / 2),
            )
        } else if now.e_witness.is_some() && now.e_witness == before.e_witness {
            let w = now.e_witness.as_ref().expect("checked");
            (
                Answer::Accept,
                format!("(E) {} alive since stage {}, finite admissible size {}", show(w), s / 2, now.m),
            )
        } else {
            (Answer::Reject, format!("neither condition holds: finite admissible size {}", now.m))
        };
        Ok(if self.negate { (ans.negate(), format!("complement: {why}")) } else { (ans, why) })
    }
}

fn finite_inf_constant(p: DecisionProblem, sigma: SemanticsKind) -> AnytimeProcess {
    let ans = if matches!(p, DecisionProblem::Skep(_)) { Answer::Accept } else { Answer::Reject };
    constant(p, sigma, ans, "a finite framework has no infinite extension")
}

/// Infinite admissible extensions: existence and credulous acceptance
/// (`u-sigma2`), skeptical acceptance (`d-sigma2`).
pub fn infad_anytime(faf: &FinitaryAF, p: DecisionProblem, budgets: Budgets) -> Result<AnytimeProcess> {
    inf_via(faf, SemanticsKind::InfAd, p, budgets)
}

/// Infinite complete extensions exist exactly when infinite admissible ones
/// do; existence and credulous acceptance are delegated.
pub fn infco_anytime(faf: &FinitaryAF, p: DecisionProblem, budgets: Budgets) -> Result<AnytimeProcess> {
    match p {
        DecisionProblem::Exists | DecisionProblem::Ne | DecisionProblem::Cred(_) => {
            let mut proc = infad_anytime(faf, p, budgets)?;
            proc.sigma = SemanticsKind::InfCo;
            Ok(proc)
        }
        _ => Err(AfError::input(format!("{p} is not supported for inf-co"))),
    }
}

/// Infinite stable extensions: existence and credulous acceptance (`pi2`),
/// skeptical acceptance (`sigma2`).
pub fn infstb_anytime(faf: &FinitaryAF, p: DecisionProblem, budgets: Budgets) -> Result<AnytimeProcess> {
    inf_via(faf, SemanticsKind::InfStb, p, budgets)
}

fn inf_evaluator(
    faf: &FinitaryAF,
    sigma: SemanticsKind,
    d0: Extension,
    e0: Extension,
    negate: bool,
    budgets: Budgets,
) -> Box<dyn Evaluator> {
    match sigma {
        SemanticsKind::InfStb => Box::new(InfStb::new(faf.clone(), budgets, d0, e0, negate)),
        _ => Box::new(InfAd::new(faf.clone(), budgets, d0, e0, negate)),
    }
}

fn inf_via(faf: &FinitaryAF, sigma: SemanticsKind, p: DecisionProblem, budgets: Budgets) -> Result<AnytimeProcess> {
    use ConvergenceClass as C;
    use DecisionProblem as P;
    check_arg(faf, p)?;
    if faf.is_finite() {
        return Ok(finite_inf_constant(p, sigma));
    }
    let stb = sigma == SemanticsKind::InfStb;
    let (pos, neg) = if stb { (C::Pi2, C::Sigma2) } else { (C::USigma2, C::DSigma2) };
    let (cls, ev) = match p {
        P::Exists | P::Ne => (pos, inf_evaluator(faf, sigma, none(), none(), false, budgets)),
        P::Cred(a) => (pos, inf_evaluator(faf, sigma, one(a), none(), false, budgets)),
        P::Skep(a) => (neg, inf_evaluator(faf, sigma, none(), one(a), true, budgets)),
        P::Uni => return uni_inf_anytime(faf, sigma, budgets),
    };
    Ok(AnytimeProcess::new(p, sigma, cls, ev))
}

// ----------------------------------------------------------- inf-stb ----

/// Finite stable candidates found at one stage, and whether the tree
/// avoiding all of them died.
#[derive(Clone, PartialEq, Eq)]
struct InfStbStage {
    family: Vec<Extension>,
    dead: bool,
    unknown: bool,
}

/// Condition (E) for stable extensions: a finite list of finite sets, each
/// stable as far as stage `s` can tell, such that the stable tree avoiding
/// all of them is dead. Existence fails exactly when such a list persists.
struct InfStb {
    probe: Probe,
    d0: Extension,
    e0: Extension,
    negate: bool,
    memo: HashMap<usize, InfStbStage>,
}

const MAX_FAMILY: usize = 512;

impl InfStb {
    fn new(af: FinitaryAF, budgets: Budgets, d0: Extension, e0: Extension, negate: bool) -> Self {
        InfStb { probe: Probe::new(af, budgets), d0, e0, negate, memo: HashMap::new() }
    }

    fn stable_so_far(&mut self, x: &Extension, s: usize) -> Result<bool> {
        for &a in x {
            for &b in x {
                if self.probe.attacks(a, b)? {
                    return Ok(false);
                }
            }
        }
        for y in 0..s {
            if !x.contains(&y) && !self.probe.att(y)?.iter().any(|z| x.contains(z)) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn stage(&mut self, s: usize) -> Result<InfStbStage> {
        if let Some(st) = self.memo.get(&s) {
            return Ok(st.clone());
        }
        let mut family: Vec<Extension> = Vec::new();
        let mut dead = false;
        let mut unknown = false;
        while family.len() < MAX_FAMILY {
            let spec = TreeSpec::new(self.probe.af.clone(), TreeKind::Stb, self.d0.clone(), self.e0.clone())?
                .with_avoid_families(family.clone())?;
            let out = trees::search(&spec, s, self.probe.budgets.nodes)?;
            let Some(w) = out.witness else {
                dead = true;
                break;
            };
            let x = trees::ins_out_sets(&spec.with_horizon(s), &w)?.ins;
            if x.iter().any(|&i| i >= s) || !self.stable_so_far(&x, s)? {
                break;
            }
            family.push(x);
        }
        if family.len() >= MAX_FAMILY {
            unknown = true;
        }
        let st = InfStbStage { family, dead, unknown };
        self.memo.insert(s, st.clone());
        Ok(st)
    }
}

impl Evaluator for InfStb {
    fn eval(&mut self, s: usize) -> Result<Eval> {
        let now = self.stage(s)?;
        if now.unknown {
            return Err(AfError::Resource { what: "finite stable candidates", limit: MAX_FAMILY });
        }
        let before = self.stage(s / 2)?;
        let (ans, why) = if now.dead && now == before {
            (
                Answer::Reject,
                format!("(E) {} finite stable candidate(s) cover every stable extension since stage {}", now.family.len(), s / 2),
            )
        } else if now.dead {
            (Answer::Accept, format!("candidate list changed since stage {}", s / 2))
        } else {
            (Answer::Accept, format!("stable tree alive at depth {s} beyond {} finite candidate(s)", now.family.len()))
        };
        Ok(if self.negate { (ans.negate(), format!("complement: {why}")) } else { (ans, why) })
    }
}

// --------------------------------------------------------- uni (inf) ----

struct UniInf {
    af: FinitaryAF,
    sigma: SemanticsKind,
    budgets: Budgets,
    exists: Box<dyn Evaluator>,
    per_arg: HashMap<(ArgumentId, bool), Box<dyn Evaluator>>,
}

impl UniInf {
    fn sub(&mut self, a: ArgumentId, skep: bool, s: usize) -> Result<Answer> {
        let (af, sigma, budgets) = (self.af.clone(), self.sigma, self.budgets);
        let ev = self.per_arg.entry((a, skep)).or_insert_with(|| {
            if skep {
                inf_evaluator(&af, sigma, none(), one(a), true, budgets)
            } else {
                inf_evaluator(&af, sigma, one(a), none(), false, budgets)
            }
        });
        Ok(ev.eval(s)?.0)
    }
}

impl Evaluator for UniInf {
    fn eval(&mut self, s: usize) -> Result<Eval> {
        let (ex, why) = self.exists.eval(s)?;
        if ex != Answer::Accept {
            return Ok((ex, format!("existence: {why}")));
        }
        for a in 0..=isqrt(s) {
            if self.sub(a, false, s)? == Answer::Accept && self.sub(a, true, s)? != Answer::Accept {
                return Ok((Answer::Reject, format!("{a} credulous but not skeptical at stage {s}")));
            }
        }
        Ok((Answer::Accept, format!("exists, and no argument up to {} is credulous without being skeptical", isqrt(s))))
    }
}

/// Unique infinite extension for `inf-ad` or `inf-stb` (`pi3`); each
/// component converges on its own, the conjunction has no single limit law.
pub fn uni_inf_anytime(faf: &FinitaryAF, sigma: SemanticsKind, budgets: Budgets) -> Result<AnytimeProcess> {
    if !matches!(sigma, SemanticsKind::InfAd | SemanticsKind::InfStb) {
        return Err(AfError::input(format!("unique infinite extension is supported for inf-ad and inf-stb, not {sigma}")));
    }
    if faf.is_finite() {
        return Ok(finite_inf_constant(DecisionProblem::Uni, sigma));
    }
    let ev = UniInf {
        af: faf.clone(),
        sigma,
        budgets,
        exists: inf_evaluator(faf, sigma, none(), none(), false, budgets),
        per_arg: HashMap::new(),
    };
    Ok(AnytimeProcess::new(DecisionProblem::Uni, sigma, ConvergenceClass::Pi3, Box::new(ev)))
}

// ------------------------------------------------------ inf-cf, inf-na ----

/// Greedy conflict-free subset of `0..stage`.
pub fn greedy_conflict_free(faf: &FinitaryAF, stage: usize) -> Result<Extension> {
    let mut out: BTreeSet<usize> = BTreeSet::new();
    for x in 0..stage {
        if !faf.has_arg(x) || faf.is_self_attacking(x)? {
            continue;
        }
        let att = faf.attackers_of(x)?;
        let mut ok = !att.iter().any(|y| out.contains(y));
        if ok {
            for &y in &out {
                if faf.attacks(x, y)? {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            out.insert(x);
        }
    }
    Ok(out)
}

/// Problems on infinite conflict-free and naive extensions that admit no
/// approximation. `uni` for `inf-cf` is constantly false; the rest report
/// `unknown` with a non-convergent conflict-free probe as evidence.
pub fn infcf_trivia(faf: &FinitaryAF, sigma: SemanticsKind, p: DecisionProblem, stage: usize) -> Result<Verdict> {
    if !matches!(sigma, SemanticsKind::InfCf | SemanticsKind::InfNa) {
        return Err(AfError::input(format!("{sigma} is not inf-cf or inf-na")));
    }
    if sigma == SemanticsKind::InfCf && p == DecisionProblem::Uni {
        return Ok(Verdict {
            stage,
            answer: Answer::Reject,
            cls: ConvergenceClass::Computable,
            evidence: "removing one member of an infinite conflict-free set leaves another".into(),
        });
    }
    let probe = greedy_conflict_free(faf, stage)?;
    Ok(Verdict {
        stage,
        answer: Answer::Unknown,
        cls: ConvergenceClass::None,
        evidence: format!("no approximation; non-convergent probe: conflict-free set of size {} {}", probe.len(), show(&probe)),
    })
}

struct Trivia(FinitaryAF, SemanticsKind, DecisionProblem);

impl Evaluator for Trivia {
    fn eval(&mut self, s: usize) -> Result<Eval> {
        let v = infcf_trivia(&self.0, self.1, self.2, s)?;
        Ok((v.answer, v.evidence))
    }
}

// ----------------------------------------------------------- dispatch ----

/// The anytime process for any semantics and problem.
pub fn anytime(
    faf: &FinitaryAF,
    sigma: SemanticsKind,
    p: DecisionProblem,
    budgets: Budgets,
) -> Result<AnytimeProcess> {
    use ConvergenceClass as C;
    use DecisionProblem as P;
    use SemanticsKind as S;
    check_arg(faf, p)?;
    let probe = || Probe::new(faf.clone(), budgets);
    Ok(match (sigma, p) {
        (S::Cf | S::Na, P::Cred(a)) => {
            let ok = cred_cf_fast(faf, a)?;
            let why = if ok { format!("{a} does not attack itself") } else { format!("{a} attacks itself") };
            constant(p, sigma, Answer::from_bool(ok), why)
        }
        (S::Cf, P::Skep(_)) => constant(p, sigma, Answer::Reject, "the empty set is conflict-free"),
        (S::Cf, P::Exists) => constant(p, sigma, Answer::Accept, "the empty set is conflict-free"),
        (S::Na, P::Exists) => constant(p, sigma, Answer::Accept, "every conflict-free set extends to a naive one"),
        (S::Cf | S::Na, P::Ne) => AnytimeProcess::new(p, sigma, C::Sigma1, Box::new(NeCf(probe()))),
        (S::Cf, P::Uni) => AnytimeProcess::new(p, sigma, C::Pi1, Box::new(UniCf(probe()))),
        (S::Na, P::Skep(a)) => AnytimeProcess::new(p, sigma, C::Pi1, Box::new(SkepNa(probe(), a))),
        (S::Na, P::Uni) => AnytimeProcess::new(p, sigma, C::Pi1, Box::new(UniNa(probe()))),
        (S::Ad | S::Co | S::Stb, _) => tree_anytime(faf, sigma, p, budgets)?,
        (S::InfCf | S::InfNa, _) if faf.is_finite() => finite_inf_constant(p, sigma),
        (S::InfCf, P::Uni) => constant(p, sigma, Answer::Reject, "removing one member of an infinite conflict-free set leaves another"),
        (S::InfCf | S::InfNa, _) => AnytimeProcess::new(p, sigma, C::None, Box::new(Trivia(faf.clone(), sigma, p))),
        (S::InfAd, _) => infad_anytime(faf, p, budgets)?,
        (S::InfCo, _) if faf.is_finite() => finite_inf_constant(p, sigma),
        (S::InfCo, _) => infco_anytime(faf, p, budgets)?,
        (S::InfStb, _) => infstb_anytime(faf, p, budgets)?,
    })
}
