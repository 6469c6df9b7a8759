//! Trees whose paths encode the extensions of a framework: admissible,
//! stable and complete extensions containing `D` and avoiding `E`, and the
//! infinite naive extensions.
//!
//! Conventions fixed here:
//! - attack pairs are enumerated by target, then attacker, both ascending;
//! - a level that codes an argument or pair that does not exist (past the end
//!   of a finite framework) only admits label `0`, which records nothing;
//! - on an infinite framework a pair is known only once its target is below
//!   the horizon; unknown pair levels are relaxed the same way. Relaxing a
//!   level only adds nodes, so refutations stay sound.

use std::cell::RefCell;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::rc::Rc;
use std::str::FromStr;

use crate::af::{ArgumentId, Extension, FiniteAF};
use crate::error::{AfError, Result};
use crate::finitary::FinitaryAF;

pub type CodeString = Vec<usize>;

pub const DEFAULT_NODE_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TreeKind {
    Ad,
    Stb,
    Co,
    InfNa,
}

impl TreeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TreeKind::Ad => "ad",
            TreeKind::Stb => "stb",
            TreeKind::Co => "co",
            TreeKind::InfNa => "inf-na",
        }
    }
}

impl fmt::Display for TreeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TreeKind {
    type Err = AfError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "ad" => Ok(TreeKind::Ad),
            "stb" => Ok(TreeKind::Stb),
            "co" => Ok(TreeKind::Co),
            "inf-na" | "infna" => Ok(TreeKind::InfNa),
            _ => Err(AfError::input(format!("unknown tree kind `{s}`"))),
        }
    }
}

/// A tree `T_{kind+D-E}` over a framework.
#[derive(Debug, Clone)]
pub struct TreeSpec {
    af: FinitaryAF,
    kind: TreeKind,
    d: Extension,
    e: Extension,
    label_cap: Option<usize>,
    horizon: Option<usize>,
    avoid: Vec<Extension>,
}

impl TreeSpec {
    pub fn new(af: FinitaryAF, kind: TreeKind, d: Extension, e: Extension) -> Result<Self> {
        if let Some(x) = d.intersection(&e).next() {
            return Err(AfError::input(format!("D and E share argument {x}")));
        }
        if kind == TreeKind::InfNa && !(d.is_empty() && e.is_empty()) {
            return Err(AfError::input("the inf-na tree takes no D/E parameters"));
        }
        if let Some(n) = af.size() {
            if let Some(&x) = d.iter().chain(e.iter()).find(|&&x| x >= n) {
                return Err(AfError::OutOfRange { index: x, n_args: n });
            }
        }
        Ok(TreeSpec { af, kind, d, e, label_cap: None, horizon: None, avoid: Vec::new() })
    }

    pub fn finite(af: &FiniteAF, kind: TreeKind, d: Extension, e: Extension) -> Result<Self> {
        TreeSpec::new(FinitaryAF::from_finite(af), kind, d, e)
    }

    /// Largest label tried at the unbounded levels of the inf-na tree.
    pub fn with_label_cap(mut self, cap: usize) -> Self {
        self.label_cap = Some(cap);
        self
    }

    /// Pair-enumeration horizon used by [`is_node`] and [`children`] on an
    /// infinite framework. Defaults to the length of the string examined.
    pub fn with_horizon(mut self, h: usize) -> Self {
        self.horizon = Some(h);
        self
    }

    /// Intersect with `⋃_{a∈X} T_{stb+∅−{a}}` for each family member `X`.
    pub fn with_avoid_families(mut self, families: Vec<Extension>) -> Result<Self> {
        if self.kind != TreeKind::Stb {
            return Err(AfError::input("avoid families only apply to stable trees"));
        }
        self.avoid = families;
        Ok(self)
    }

    pub fn af(&self) -> &FinitaryAF {
        &self.af
    }

    pub fn kind(&self) -> TreeKind {
        self.kind
    }

    pub fn d(&self) -> &Extension {
        &self.d
    }

    pub fn e(&self) -> &Extension {
        &self.e
    }
}

/// The four argument sets a string determines.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NodeSets {
    pub ins: Extension,
    pub outs: Extension,
    pub in_splus: Extension,
    pub out_splus: Extension,
}

type Sets = HashSet<usize>;

#[derive(Default)]
struct Raw {
    ins: Sets,
    outs: Sets,
    in_splus: Sets,
    out_splus: Sets,
}

impl Raw {
    fn export(&self) -> NodeSets {
        NodeSets {
            ins: self.ins.iter().copied().collect(),
            outs: self.outs.iter().copied().collect(),
            in_splus: self.in_splus.iter().copied().collect(),
            out_splus: self.out_splus.iter().copied().collect(),
        }
    }
}

/// Cached view of one tree at a fixed pair horizon.
struct Ctx<'a> {
    spec: &'a TreeSpec,
    pairs: Vec<(usize, usize)>,
    att: RefCell<HashMap<usize, Rc<Vec<usize>>>>,
}

impl<'a> Ctx<'a> {
    fn new(spec: &'a TreeSpec, horizon: usize) -> Result<Self> {
        let ctx = Ctx { spec, pairs: Vec::new(), att: RefCell::new(HashMap::new()) };
        let mut pairs = Vec::new();
        if spec.kind == TreeKind::Ad {
            let targets = spec.af.size().unwrap_or(horizon);
            for t in 0..targets {
                for &x in ctx.att(t)?.iter() {
                    pairs.push((x, t));
                }
            }
        }
        Ok(Ctx { pairs, ..ctx })
    }

    fn exists(&self, x: usize) -> bool {
        self.spec.af.has_arg(x)
    }

    fn att(&self, x: usize) -> Result<Rc<Vec<usize>>> {
        if let Some(v) = self.att.borrow().get(&x) {
            return Ok(Rc::clone(v));
        }
        let v = Rc::new(self.spec.af.attackers_of(x)?);
        self.att.borrow_mut().insert(x, Rc::clone(&v));
        Ok(v)
    }

    fn attacks(&self, x: usize, y: usize) -> Result<bool> {
        Ok(self.att(y)?.binary_search(&x).is_ok())
    }

    fn not_cf(&self, x: usize, y: usize) -> Result<bool> {
        Ok(self.attacks(x, y)? || self.attacks(y, x)?)
    }

    fn cap(&self) -> Result<usize> {
        self.spec.label_cap.ok_or_else(|| AfError::input("the inf-na tree needs a label cap"))
    }

    /// Candidate labels at `level`, ascending.
    fn labels(&self, level: usize) -> Result<Vec<usize>> {
        let mut out = vec![0];
        match self.spec.kind {
            TreeKind::Ad => {
                if level % 2 == 0 {
                    if self.exists(level / 2) {
                        out.push(1);
                    }
                } else if let Some(&(g_minus, _)) = self.pairs.get(level / 2) {
                    out.extend(self.att(g_minus)?.iter().map(|k| k + 1));
                }
            }
            TreeKind::Stb => {
                if self.exists(level) {
                    out.extend(self.att(level)?.iter().map(|k| k + 1));
                }
            }
            TreeKind::Co => {
                if self.exists(level / 2) {
                    out.extend(self.att(level / 2)?.iter().map(|k| k + 1));
                }
            }
            TreeKind::InfNa => {
                let cap = self.cap()?;
                let j = level / 2;
                if level % 2 == 0 {
                    out = (j + 1..=cap).filter(|&v| self.exists(v)).collect();
                } else if self.exists(j) {
                    for k in 0..cap {
                        if self.exists(k) && self.not_cf(j, k)? {
                            out.push(k + 1);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Sets for `s`; `None` when some label is outside its candidate set.
    fn sets(&self, s: &[usize]) -> Result<Option<Raw>> {
        let mut r = Raw::default();
        if self.spec.kind != TreeKind::InfNa {
            r.ins.extend(self.spec.d.iter().copied());
            r.outs.extend(self.spec.e.iter().copied());
        }
        for (level, &v) in s.iter().enumerate() {
            if !self.contribute(level, v, &mut r)? {
                return Ok(None);
            }
        }
        Ok(Some(r))
    }

    /// Record level `level` with label `v`; false when the label is invalid.
    fn contribute(&self, level: usize, v: usize, r: &mut Raw) -> Result<bool> {
        match self.spec.kind {
            TreeKind::Ad => {
                if level % 2 == 0 {
                    let j = level / 2;
                    if !self.exists(j) {
                        return Ok(v == 0);
                    }
                    match v {
                        0 => r.outs.insert(j),
                        1 => r.ins.insert(j),
                        _ => return Ok(false),
                    };
                } else {
                    let Some(&(g_minus, g_plus)) = self.pairs.get(level / 2) else {
                        return Ok(v == 0);
                    };
                    if v == 0 {
                        r.outs.insert(g_plus);
                    } else {
                        let att = self.att(g_minus)?;
                        if att.binary_search(&(v - 1)).is_err() {
                            return Ok(false);
                        }
                        r.ins.insert(v - 1);
                        r.ins.insert(g_plus);
                        r.outs.extend(att.iter().copied().filter(|&i| i + 1 < v));
                    }
                }
            }
            TreeKind::Stb => {
                if !self.exists(level) {
                    return Ok(v == 0);
                }
                if v == 0 {
                    r.ins.insert(level);
                } else {
                    let att = self.att(level)?;
                    if att.binary_search(&(v - 1)).is_err() {
                        return Ok(false);
                    }
                    r.outs.insert(level);
                    r.ins.insert(v - 1);
                    r.outs.extend(att.iter().copied().filter(|&i| i + 1 < v));
                }
            }
            TreeKind::Co => {
                let i = level / 2;
                if !self.exists(i) {
                    return Ok(v == 0);
                }
                let att = self.att(i)?;
                if v > 0 && att.binary_search(&(v - 1)).is_err() {
                    return Ok(false);
                }
                let smaller = att.iter().copied().filter(|&a| a + 1 < v);
                match (level % 2, v) {
                    (0, 0) => {
                        r.ins.insert(i);
                    }
                    (0, _) => {
                        r.outs.insert(i);
                        r.out_splus.insert(v - 1);
                        r.in_splus.extend(smaller);
                    }
                    (_, 0) => {
                        r.out_splus.insert(i);
                    }
                    (_, _) => {
                        r.in_splus.insert(i);
                        r.ins.insert(v - 1);
                        r.outs.extend(smaller);
                    }
                }
            }
            TreeKind::InfNa => {
                let j = level / 2;
                if level % 2 == 0 {
                    if v <= j || !self.exists(v) || v > self.cap()? {
                        return Ok(false);
                    }
                    r.ins.insert(v);
                    r.outs.extend(j + 1..v);
                } else {
                    if !self.exists(j) {
                        return Ok(v == 0);
                    }
                    if v == 0 {
                        r.ins.insert(j);
                    } else {
                        if !self.exists(v - 1) || !self.not_cf(v - 1, j)? {
                            return Ok(false);
                        }
                        r.outs.insert(j);
                        r.ins.insert(v - 1);
                        for k in 0..v - 1 {
                            if self.not_cf(j, k)? {
                                r.outs.insert(k);
                            }
                        }
                    }
                }
            }
        }
        Ok(true)
    }

    /// The node conditions, with argument indices bounded by `bound`.
    fn valid(&self, r: &Raw, bound: usize) -> Result<bool> {
        let unbounded = self.spec.kind == TreeKind::InfNa;
        let lim = |x: usize| unbounded || x < bound;
        for &x in &r.ins {
            if !lim(x) {
                continue;
            }
            if r.outs.contains(&x) {
                return Ok(false);
            }
            for &y in self.att(x)?.iter() {
                if lim(y) && r.ins.contains(&y) {
                    return Ok(false);
                }
            }
        }
        if self.spec.kind == TreeKind::Co {
            if r.in_splus.iter().any(|x| r.out_splus.contains(x)) {
                return Ok(false);
            }
            for &k in r.out_splus.iter().filter(|&&k| k < bound) {
                if self.att(k)?.iter().any(|j| *j < bound && r.ins.contains(j)) {
                    return Ok(false);
                }
            }
            for &m in r.ins.iter().filter(|&&m| m < bound) {
                if self.att(m)?.iter().any(|n| *n < bound && r.out_splus.contains(n)) {
                    return Ok(false);
                }
            }
        }
        for fam in &self.spec.avoid {
            if fam.iter().all(|a| *a < bound && r.ins.contains(a)) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether `k` conflicts with itself or with `forced`; `hit` holds the
    /// attackers of every forced argument.
    fn clashes(&self, forced: &Sets, hit: &Sets, k: usize, d: usize) -> Result<bool> {
        if hit.contains(&k) || self.attacks(k, k)? {
            return Ok(true);
        }
        Ok(self.att(k)?.iter().any(|y| *y < d && forced.contains(y)))
    }

    fn force(&self, forced: &mut Sets, hit: &mut Sets, k: usize) -> Result<()> {
        if forced.insert(k) {
            hit.extend(self.att(k)?.iter().copied());
        }
        Ok(())
    }

    fn forced_ins(&self, r: &Raw, d: usize) -> Result<(Sets, Sets)> {
        let (mut forced, mut hit) = (Sets::new(), Sets::new());
        for &x in r.ins.iter().filter(|&&x| x < d) {
            self.force(&mut forced, &mut hit, x)?;
        }
        Ok((forced, hit))
    }

    /// Necessary conditions for `s` to extend to length `d`; true when none
    /// can hold. Arguments forced into `In` are propagated to a fixpoint.
    fn doomed(&self, s: &[usize], r: &Raw, d: usize) -> Result<bool> {
        match self.spec.kind {
            TreeKind::Ad => self.ad_doomed(s.len(), r, d),
            TreeKind::Stb => self.stb_doomed(s.len(), r, d),
            _ => Ok(false),
        }
    }

    fn ad_doomed(&self, len: usize, r: &Raw, d: usize) -> Result<bool> {
        let (mut forced, mut hit) = self.forced_ins(r, d)?;
        let first = len / 2;
        let last = self.pairs.len().min(d / 2);
        loop {
            let mut grew = false;
            for p in first..last {
                if 2 * p + 1 < len {
                    continue;
                }
                let (x, t) = self.pairs[p];
                if !(t < d && forced.contains(&t)) {
                    continue;
                }
                let mut allowed = Vec::new();
                let att = self.att(x)?;
                for &k in att.iter() {
                    if k >= d {
                        allowed.push(k);
                        continue;
                    }
                    // a smaller defender already in would make k non-least
                    let least = att.iter().take_while(|&&i| i < k).all(|i| !forced.contains(i));
                    if least && !r.outs.contains(&k) && !self.clashes(&forced, &hit, k, d)? {
                        allowed.push(k);
                    }
                }
                match allowed.as_slice() {
                    [] => return Ok(true),
                    [k] if *k < d && !forced.contains(k) => {
                        self.force(&mut forced, &mut hit, *k)?;
                        grew = true;
                    }
                    _ => {}
                }
            }
            if !grew {
                return Ok(false);
            }
        }
    }

    fn stb_doomed(&self, len: usize, r: &Raw, d: usize) -> Result<bool> {
        let (mut forced, mut hit) = self.forced_ins(r, d)?;
        loop {
            let mut grew = false;
            for j in len..d {
                if !self.exists(j) {
                    continue;
                }
                let mut options: Vec<usize> = Vec::new();
                let j_in = forced.contains(&j);
                if j_in || (!r.outs.contains(&j) && !self.clashes(&forced, &hit, j, d)?) {
                    options.push(j);
                }
                if !j_in {
                    let att = self.att(j)?;
                    for &k in att.iter() {
                        let least = att.iter().take_while(|&&i| i < k).all(|i| !forced.contains(i));
                        if !least {
                            break;
                        }
                        if k >= d || (!r.outs.contains(&k) && !self.clashes(&forced, &hit, k, d)?) {
                            options.push(k);
                        }
                    }
                }
                match options.as_slice() {
                    [] => return Ok(true),
                    [k] if *k < d && !forced.contains(k) => {
                        self.force(&mut forced, &mut hit, *k)?;
                        grew = true;
                    }
                    _ => {}
                }
            }
            for fam in &self.spec.avoid {
                if fam.iter().all(|a| *a < d && forced.contains(a)) {
                    return Ok(true);
                }
            }
            if !grew {
                return Ok(false);
            }
        }
    }
}

fn default_horizon(spec: &TreeSpec, s: &[usize]) -> usize {
    spec.horizon.unwrap_or(s.len())
}

/// `In`, `Out`, `InS+` and `OutS+` of a string. Labels outside their
/// candidate set are skipped, so the result is total.
pub fn ins_out_sets(spec: &TreeSpec, s: &[usize]) -> Result<NodeSets> {
    let ctx = Ctx::new(spec, default_horizon(spec, s))?;
    let mut r = Raw::default();
    if spec.kind != TreeKind::InfNa {
        r.ins.extend(spec.d.iter().copied());
        r.outs.extend(spec.e.iter().copied());
    }
    for (level, &v) in s.iter().enumerate() {
        let mut trial = Raw::default();
        if ctx.contribute(level, v, &mut trial)? {
            r.ins.extend(trial.ins);
            r.outs.extend(trial.outs);
            r.in_splus.extend(trial.in_splus);
            r.out_splus.extend(trial.out_splus);
        }
    }
    Ok(r.export())
}

/// Membership of `s` in the tree, checked exactly as defined (indices
/// bounded by `|s|`).
pub fn is_node(spec: &TreeSpec, s: &[usize]) -> Result<bool> {
    let ctx = Ctx::new(spec, default_horizon(spec, s))?;
    node_at(&ctx, s, s.len())
}

fn node_at(ctx: &Ctx<'_>, s: &[usize], bound: usize) -> Result<bool> {
    match ctx.sets(s)? {
        Some(r) => ctx.valid(&r, bound),
        None => Ok(false),
    }
}

/// All one-step extensions of `s` that are nodes, in ascending label order.
pub fn children(spec: &TreeSpec, s: &[usize]) -> Result<Vec<CodeString>> {
    let ctx = Ctx::new(spec, spec.horizon.unwrap_or(s.len() + 1))?;
    let mut out = Vec::new();
    for v in ctx.labels(s.len())? {
        let mut c = s.to_vec();
        c.push(v);
        if node_at(&ctx, &c, c.len())? {
            out.push(c);
        }
    }
    Ok(out)
}

/// Decoded extension of a string, restricted to the levels it covers.
pub fn decode(spec: &TreeSpec, s: &[usize]) -> Extension {
    let has = |x: usize| spec.af.has_arg(x);
    match spec.kind {
        TreeKind::Ad => (0..s.len().div_ceil(2)).filter(|&j| s[2 * j] == 1 && has(j)).collect(),
        TreeKind::Stb => (0..s.len()).filter(|&i| s[i] == 0 && has(i)).collect(),
        TreeKind::Co => (0..s.len().div_ceil(2)).filter(|&i| s[2 * i] == 0 && has(i)).collect(),
        TreeKind::InfNa => (0..s.len() / 2).filter(|&j| s[2 * j + 1] == 0 && has(j)).collect(),
    }
}

/// Result of a bounded depth-first search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub alive: bool,
    /// The first node of the target length found, in ascending label order.
    pub witness: Option<CodeString>,
    pub explored: usize,
}

struct Walk<'c, 'a> {
    ctx: &'c Ctx<'a>,
    d: usize,
    budget: usize,
    explored: usize,
    collect: Option<Vec<CodeString>>,
}

impl Walk<'_, '_> {
    /// Returns true to stop the walk.
    fn go(&mut self, s: &mut CodeString) -> Result<bool> {
        if s.len() == self.d {
            return Ok(match self.collect.as_mut() {
                Some(v) => {
                    v.push(s.clone());
                    false
                }
                None => true,
            });
        }
        for v in self.ctx.labels(s.len())? {
            self.explored += 1;
            if self.explored > self.budget {
                return Err(AfError::Budget { budget: self.budget, frontier: s.len() + 1 });
            }
            s.push(v);
            let keep = match self.ctx.sets(s)? {
                Some(r) => self.ctx.valid(&r, self.d)? && !self.ctx.doomed(s, &r, self.d)?,
                None => false,
            };
            if keep && self.go(s)? {
                return Ok(true);
            }
            s.pop();
        }
        Ok(false)
    }
}

/// Search for a node of length `d`, exploring at most `budget` nodes.
///
/// Conditions are evaluated with the index bound `d` at every node and
/// hopeless nodes are cut early; neither removes a node that extends to `d`.
pub fn search(spec: &TreeSpec, d: usize, budget: usize) -> Result<SearchOutcome> {
    let ctx = Ctx::new(spec, d)?;
    let mut s = Vec::new();
    let root = ctx.sets(&s)?.expect("empty string has valid labels");
    if !ctx.valid(&root, d)? || ctx.doomed(&s, &root, d)? {
        return Ok(SearchOutcome { alive: false, witness: None, explored: 1 });
    }
    let mut w = Walk { ctx: &ctx, d, budget, explored: 1, collect: None };
    let found = w.go(&mut s)?;
    Ok(SearchOutcome { alive: found, witness: found.then_some(s), explored: w.explored })
}

/// Whether some node of length `d` exists, with the default node budget.
pub fn alive_at_depth(spec: &TreeSpec, d: usize) -> Result<bool> {
    if spec.kind == TreeKind::InfNa && spec.label_cap.is_none() {
        return Err(AfError::input("the inf-na tree needs a label cap"));
    }
    Ok(search(spec, d, DEFAULT_NODE_BUDGET)?.alive)
}

/// Every node of length `d`, ascending.
pub fn frontier(spec: &TreeSpec, d: usize, budget: usize) -> Result<Vec<CodeString>> {
    let ctx = Ctx::new(spec, d)?;
    let mut s = Vec::new();
    let root = ctx.sets(&s)?.expect("empty string has valid labels");
    if !ctx.valid(&root, d)? || ctx.doomed(&s, &root, d)? {
        return Ok(Vec::new());
    }
    let mut w = Walk { ctx: &ctx, d, budget, explored: 1, collect: Some(Vec::new()) };
    w.go(&mut s)?;
    Ok(w.collect.unwrap_or_default())
}

/// Depth after which every level of the tree over a finite framework is forced.
pub fn forced_depth(af: &FiniteAF, kind: TreeKind) -> usize {
    match kind {
        TreeKind::Stb => af.n_args(),
        _ => 2 * (af.n_args() + af.n_attacks()),
    }
}

/// Extensions of a finite framework read off the depth-`L` frontier.
pub fn extensions_via_tree(
    af: &FiniteAF,
    kind: TreeKind,
    d: &Extension,
    e: &Extension,
) -> Result<Vec<Extension>> {
    if kind == TreeKind::InfNa {
        return Err(AfError::input("extensions_via_tree covers ad, stb and co"));
    }
    let spec = TreeSpec::finite(af, kind, d.clone(), e.clone())?;
    let mut out: Vec<Extension> = frontier(&spec, forced_depth(af, kind), DEFAULT_NODE_BUDGET)?
        .iter()
        .map(|s| decode(&spec, s))
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Every node up to length `depth` reachable through [`children`], in
/// depth-first preorder.
pub fn explore(spec: &TreeSpec, depth: usize, budget: usize) -> Result<Vec<CodeString>> {
    let mut out = Vec::new();
    let mut stack = vec![Vec::new()];
    while let Some(s) = stack.pop() {
        if out.len() >= budget {
            return Err(AfError::Budget { budget, frontier: stack.len() + 1 });
        }
        if s.len() < depth {
            stack.extend(children(spec, &s)?.into_iter().rev());
        }
        out.push(s);
    }
    Ok(out)
}

pub fn set<I: IntoIterator<Item = ArgumentId>>(xs: I) -> Extension {
    xs.into_iter().collect()
}
