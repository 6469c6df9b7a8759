//! Infinite finitary frameworks presented by attacker oracles, plus the
//! gadget families used as ground-truth fixtures.
//!
//! Every gadget fixes a dense index layout and exposes it through
//! [`IndexMap`], so callers can move between indices and names such as
//! `a_4`, `b_1` or `d^2_0`.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use crate::af::{ArgumentId, FiniteAF};
use crate::error::{AfError, Result};

type Oracle = dyn Fn(usize) -> Result<Vec<usize>> + Send + Sync;

/// A framework on the naturals (or on `0..size` when `size` is set) given by
/// its attacker function.
#[derive(Clone)]
pub struct FinitaryAF {
    oracle: Arc<Oracle>,
    size: Option<usize>,
    description: String,
}

impl fmt::Debug for FinitaryAF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinitaryAF")
            .field("description", &self.description)
            .field("size", &self.size)
            .finish()
    }
}

impl FinitaryAF {
    /// An infinite framework. `f(m)` must return the complete attacker set of `m`.
    pub fn new<F>(description: impl Into<String>, f: F) -> Self
    where
        F: Fn(usize) -> Result<Vec<usize>> + Send + Sync + 'static,
    {
        FinitaryAF { oracle: Arc::new(f), size: None, description: description.into() }
    }

    /// Convenience for infallible oracles.
    pub fn from_fn<F>(description: impl Into<String>, f: F) -> Self
    where
        F: Fn(usize) -> Vec<usize> + Send + Sync + 'static,
    {
        FinitaryAF::new(description, move |m| Ok(f(m)))
    }

    /// Embed a finite framework; indices `>= n_args` do not exist.
    pub fn from_finite(af: &FiniteAF) -> Self {
        let table: Vec<Vec<usize>> = (0..af.n_args()).map(|x| af.attackers_of(x).to_vec()).collect();
        FinitaryAF {
            oracle: Arc::new(move |m| Ok(table[m].clone())),
            size: Some(af.n_args()),
            description: af.to_string(),
        }
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn with_description(mut self, d: impl Into<String>) -> Self {
        self.description = d.into();
        self
    }

    /// `None` for infinite frameworks.
    pub fn size(&self) -> Option<usize> {
        self.size
    }

    pub fn is_finite(&self) -> bool {
        self.size.is_some()
    }

    pub fn has_arg(&self, m: usize) -> bool {
        self.size.map_or(true, |n| m < n)
    }

    /// Sorted, duplicate-free attacker set of `m`.
    pub fn attackers_of(&self, m: usize) -> Result<Vec<usize>> {
        if let Some(n) = self.size {
            if m >= n {
                return Err(AfError::OutOfRange { index: m, n_args: n });
            }
        }
        let mut v = (self.oracle)(m)?;
        v.sort_unstable();
        v.dedup();
        if let Some(&top) = v.last() {
            if !self.has_arg(top) {
                return Err(AfError::input(format!("oracle names missing attacker {top} of {m}")));
            }
        }
        Ok(v)
    }

    pub fn attacks(&self, x: usize, y: usize) -> Result<bool> {
        if !self.has_arg(x) || !self.has_arg(y) {
            return Ok(false);
        }
        Ok(self.attackers_of(y)?.binary_search(&x).is_ok())
    }

    pub fn is_self_attacking(&self, x: usize) -> Result<bool> {
        self.attacks(x, x)
    }
}

/// Induced sub-framework on the indices below `n` (capped at the size of a
/// finite framework).
pub fn truncate(faf: &FinitaryAF, n: usize) -> Result<FiniteAF> {
    let n = faf.size.map_or(n, |s| s.min(n));
    let mut attacks = Vec::new();
    for j in 0..n {
        for i in faf.attackers_of(j)? {
            if i < n {
                attacks.push((i, j));
            }
        }
    }
    FiniteAF::new(n, attacks)
}

/// A caller-supplied stand-in for the expansionary stages of an enumeration.
#[derive(Clone)]
pub struct StageSet {
    pred: Arc<dyn Fn(usize) -> bool + Send + Sync>,
    bound: Option<usize>,
    label: String,
}

impl fmt::Debug for StageSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StageSet({})", self.label)
    }
}

impl fmt::Display for StageSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

impl StageSet {
    pub fn empty() -> Self {
        StageSet::finite([])
    }

    pub fn all() -> Self {
        StageSet { pred: Arc::new(|_| true), bound: None, label: "all".into() }
    }

    pub fn finite<I: IntoIterator<Item = usize>>(xs: I) -> Self {
        let mut v: Vec<usize> = xs.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        let label = format!("{{{}}}", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
        let bound = v.last().copied();
        StageSet {
            pred: Arc::new(move |n| v.binary_search(&n).is_ok()),
            // an empty set is bounded by anything; 0 keeps the hint total
            bound: Some(bound.unwrap_or(0)),
            label,
        }
    }

    /// `{start, start+step, ...}`; `step == 0` gives `{start}`.
    pub fn progression(start: usize, step: usize) -> Self {
        if step == 0 {
            return StageSet::finite([start]);
        }
        StageSet {
            pred: Arc::new(move |n| n >= start && (n - start) % step == 0),
            bound: None,
            label: format!("ap({start},{step})"),
        }
    }

    /// An arbitrary predicate; `bound` is the optional finiteness hint.
    pub fn predicate<F>(label: impl Into<String>, bound: Option<usize>, f: F) -> Self
    where
        F: Fn(usize) -> bool + Send + Sync + 'static,
    {
        StageSet { pred: Arc::new(f), bound, label: label.into() }
    }

    pub fn contains(&self, n: usize) -> bool {
        (self.pred)(n)
    }

    /// `Some(b)` promises `contains(n) == false` for all `n > b`.
    pub fn finite_bound(&self) -> Option<usize> {
        self.bound
    }

    pub fn is_finite_hint(&self) -> bool {
        self.bound.is_some()
    }

    /// The `j`-th member in increasing order, searching no further than `limit`.
    pub fn nth_within(&self, j: usize, limit: usize) -> Option<usize> {
        (0..=limit).filter(|&n| self.contains(n)).nth(j)
    }

    /// Members up to and including `limit`.
    pub fn members_upto(&self, limit: usize) -> Vec<usize> {
        (0..=limit).filter(|&n| self.contains(n)).collect()
    }
}

impl FromStr for StageSet {
    type Err = AfError;

    /// `all`, `none`, `{}`, `{1,2,5}`, `1,2,5`, `ap(START,STEP)`.
    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || AfError::input(format!("malformed stage set `{s}`"));
        match t.as_str() {
            "all" | "omega" => return Ok(StageSet::all()),
            "none" | "empty" | "{}" | "" => return Ok(StageSet::empty()),
            _ => {}
        }
        if let Some(body) = t.strip_prefix("ap(").and_then(|r| r.strip_suffix(')')) {
            let (a, b) = body.split_once(',').ok_or_else(bad)?;
            return Ok(StageSet::progression(
                a.parse().map_err(|_| bad())?,
                b.parse().map_err(|_| bad())?,
            ));
        }
        let body = t.strip_prefix('{').and_then(|r| r.strip_suffix('}')).unwrap_or(&t);
        let xs = body
            .split(',')
            .map(|x| x.parse::<usize>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        Ok(StageSet::finite(xs))
    }
}

/// Translation between indices and human-readable argument names.
pub trait IndexMap: Send + Sync {
    /// Name of the argument at `idx`, e.g. `a_3` or `d^1_0`.
    fn name(&self, idx: usize) -> Result<String>;

    /// Index of a named argument, or `None` if it does not exist.
    fn index(&self, name: &str) -> Result<Option<usize>>;
}

/// A gadget instance together with its index layout.
#[derive(Clone)]
pub struct Gadget {
    pub af: FinitaryAF,
    pub names: Arc<dyn IndexMap>,
}

impl fmt::Debug for Gadget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Gadget").field("af", &self.af).finish()
    }
}

impl Gadget {
    /// Index for a name that must exist.
    pub fn idx(&self, name: &str) -> usize {
        match self.names.index(name) {
            Ok(Some(i)) => i,
            other => panic!("no argument `{name}` in {}: {other:?}", self.af.description()),
        }
    }

    pub fn name(&self, idx: usize) -> String {
        self.names.name(idx).unwrap_or_else(|_| format!("#{idx}"))
    }
}

/// Lazily built, memoized enumeration of a gadget's arguments stage by stage.
/// Each stage must contribute at least one name, which bounds every lookup.
struct Layout<N> {
    state: Mutex<LayoutState<N>>,
}

type Emit<N> = Box<dyn FnMut(usize) -> Result<Vec<N>> + Send>;

struct LayoutState<N> {
    names: Vec<N>,
    index: HashMap<N, usize>,
    next_stage: usize,
    emit: Emit<N>,
}

impl<N: Copy + Eq + Hash> Layout<N> {
    fn new(emit: Emit<N>) -> Self {
        Layout {
            state: Mutex::new(LayoutState { names: Vec::new(), index: HashMap::new(), next_stage: 0, emit }),
        }
    }

    fn advance(st: &mut LayoutState<N>) -> Result<()> {
        let stage = st.next_stage;
        let batch = (st.emit)(stage)?;
        assert!(!batch.is_empty(), "layout stage {stage} emitted nothing");
        for n in batch {
            let i = st.names.len();
            st.names.push(n);
            st.index.insert(n, i);
        }
        st.next_stage += 1;
        Ok(())
    }

    fn name_of(&self, idx: usize) -> Result<N> {
        let mut st = self.state.lock().expect("layout lock");
        while st.names.len() <= idx {
            Self::advance(&mut st)?;
        }
        Ok(st.names[idx])
    }

    /// Index of `name`, which is emitted no later than `stage` if at all.
    fn index_of(&self, name: N, stage: usize) -> Result<Option<usize>> {
        let mut st = self.state.lock().expect("layout lock");
        while st.next_stage <= stage {
            Self::advance(&mut st)?;
        }
        Ok(st.index.get(&name).copied())
    }
}

fn parse_subscripts(name: &str, head: &str) -> Option<Vec<usize>> {
    let rest = name.trim().strip_prefix(head)?;
    let rest = rest.replace(['{', '}'], "");
    let parts: Vec<&str> = rest.split(['^', '_', ',']).filter(|p| !p.is_empty()).collect();
    if parts.is_empty() || !(rest.starts_with('_') || rest.starts_with('^')) {
        return None;
    }
    parts.iter().map(|p| p.parse().ok()).collect()
}

// ---------------------------------------------------------------- fig1 ----

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Fig1Name {
    A(usize),
    B(usize),
}

struct Fig1Map {
    layout: Layout<Fig1Name>,
}

impl Fig1Map {
    fn stage_of(n: Fig1Name) -> usize {
        match n {
            Fig1Name::A(k) => k / 2,
            Fig1Name::B(t) => t,
        }
    }

    fn idx(&self, n: Fig1Name) -> Result<Option<usize>> {
        self.layout.index_of(n, Self::stage_of(n))
    }
}

impl IndexMap for Fig1Map {
    fn name(&self, idx: usize) -> Result<String> {
        Ok(match self.layout.name_of(idx)? {
            Fig1Name::A(k) => format!("a_{k}"),
            Fig1Name::B(k) => format!("b_{k}"),
        })
    }

    fn index(&self, name: &str) -> Result<Option<usize>> {
        match (parse_subscripts(name, "a"), parse_subscripts(name, "b")) {
            (Some(v), _) if v.len() == 1 => self.idx(Fig1Name::A(v[0])),
            (_, Some(v)) if v.len() == 1 => self.idx(Fig1Name::B(v[0])),
            _ => Ok(None),
        }
    }
}

/// The chain `a_{k+1} → a_k` with a self-attacking `b_k` hitting `a_{2k}` and
/// `a_{2k+1}` at every stage `k` of `stages`.
///
/// Layout: stage `t` lists `a_{2t}`, `a_{2t+1}`, then `b_t` when `t ∈ stages`.
pub fn gadget_fig1(stages: StageSet) -> Gadget {
    let st = stages.clone();
    let emit: Emit<Fig1Name> = Box::new(move |t| {
        let mut v = vec![Fig1Name::A(2 * t), Fig1Name::A(2 * t + 1)];
        if st.contains(t) {
            v.push(Fig1Name::B(t));
        }
        Ok(v)
    });
    let map = Arc::new(Fig1Map { layout: Layout::new(emit) });
    let m = Arc::clone(&map);
    let af = FinitaryAF::new(format!("fig1(stages={stages})"), move |idx| {
        let mut out = Vec::new();
        match m.layout.name_of(idx)? {
            Fig1Name::A(k) => {
                out.extend(m.idx(Fig1Name::A(k + 1))?);
                out.extend(m.idx(Fig1Name::B(k / 2))?);
            }
            Fig1Name::B(t) => out.push(m.idx(Fig1Name::B(t))?.expect("b_t exists")),
        }
        Ok(out)
    });
    Gadget { af, names: map }
}

// --------------------------------------------------------------- stars ----

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct StarName {
    star: usize,
    pos: usize,
}

struct StarsMap {
    layout: Layout<StarName>,
}

impl IndexMap for StarsMap {
    fn name(&self, idx: usize) -> Result<String> {
        let n = self.layout.name_of(idx)?;
        Ok(format!("a^{}_{}", n.star, n.pos))
    }

    fn index(&self, name: &str) -> Result<Option<usize>> {
        match parse_subscripts(name, "a") {
            Some(v) if v.len() == 2 => {
                let n = StarName { star: v[0], pos: v[1] };
                // star s opens at stage s; its k-th leaf arrives at stage s+k-1
                let stage = n.star + n.pos.saturating_sub(1);
                self.layout.index_of(n, stage)
            }
            _ => Ok(None),
        }
    }
}

/// Disjoint stars: star `0` always, star `s+1` when `count.contains(s)`.
/// Star `s` has center `a^s_0` attacking the leaves `a^s_1, a^s_2, ...`.
///
/// Layout: stage `t` lists the center of star `t` (if it exists), then one
/// new leaf for every existing star `s <= t`, in order of `s`.
pub fn gadget_stars(count: StageSet) -> Gadget {
    let c = count.clone();
    let mut exists: Vec<usize> = Vec::new();
    let emit: Emit<StarName> = Box::new(move |t| {
        let mut v = Vec::new();
        if t == 0 || c.contains(t - 1) {
            exists.push(t);
            v.push(StarName { star: t, pos: 0 });
        }
        for &s in &exists {
            v.push(StarName { star: s, pos: t - s + 1 });
        }
        Ok(v)
    });
    let map = Arc::new(StarsMap { layout: Layout::new(emit) });
    let m = Arc::clone(&map);
    let af = FinitaryAF::new(format!("stars(count={count})"), move |idx| {
        let n = m.layout.name_of(idx)?;
        if n.pos == 0 {
            Ok(Vec::new())
        } else {
            let c = m.layout.index_of(StarName { star: n.star, pos: 0 }, n.star)?;
            Ok(vec![c.expect("center precedes its leaves")])
        }
    });
    Gadget { af, names: map }
}

/// Star centers among the indices below `n`.
pub fn star_centers(g: &Gadget, n: usize) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for i in 0..n {
        if g.names.name(i)?.ends_with("_0") {
            out.push(i);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------- fig2 ----

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Fig2Name {
    A(usize),
    D(usize, usize),
}

struct Fig2Map {
    layout: Layout<Fig2Name>,
}

impl IndexMap for Fig2Map {
    fn name(&self, idx: usize) -> Result<String> {
        Ok(match self.layout.name_of(idx)? {
            Fig2Name::A(i) => format!("a_{i}"),
            Fig2Name::D(i, j) => format!("d^{i}_{j}"),
        })
    }

    fn index(&self, name: &str) -> Result<Option<usize>> {
        if let Some(v) = parse_subscripts(name, "a") {
            if v.len() == 1 {
                return self.layout.index_of(Fig2Name::A(v[0]), v[0]);
            }
        }
        if let Some(v) = parse_subscripts(name, "d") {
            if v.len() == 2 {
                let (i, j) = (v[0], v[1]);
                // d^i_j needs j+1 expansionary stages; scan until it shows up
                // or the card's finiteness hint rules it out
                let target = Fig2Name::D(i, j);
                let mut stage = i.max(1);
                loop {
                    if let Some(x) = self.layout.index_of(target, stage)? {
                        return Ok(Some(x));
                    }
                    if stage > i + 4096 {
                        return Ok(None);
                    }
                    stage += 1;
                }
            }
        }
        Ok(None)
    }
}

type CardFn = Arc<dyn Fn(usize) -> StageSet + Send + Sync>;

/// The nested-chain gadget: `a_i` for all `i`, and `d^i_j` for the `j`-th
/// member of `card(i)`, `i >= 1`. Requires `0 ∈ card(i)` for every `i`.
///
/// Layout: stage `t` first lists new `d` arguments (members `m` of `card(i)`
/// are read at stage `max(i, m)`, ordered by `i`), then `a_t`.
pub fn gadget_fig2<F>(label: impl Into<String>, card: F) -> Gadget
where
    F: Fn(usize) -> StageSet + Send + Sync + 'static,
{
    let card: CardFn = Arc::new(card);
    let c = Arc::clone(&card);
    let mut counts: Vec<usize> = vec![0];
    let emit: Emit<Fig2Name> = Box::new(move |t| {
        let mut v = Vec::new();
        if t >= 1 {
            counts.push(0);
            for i in 1..=t {
                let set = c(i);
                let ms: Vec<usize> = if i == t { (0..=t).collect() } else { vec![t] };
                if i == t && !set.contains(0) {
                    return Err(AfError::input(format!("card({i}) must contain 0")));
                }
                for m in ms {
                    if set.contains(m) {
                        v.push(Fig2Name::D(i, counts[i]));
                        counts[i] += 1;
                    }
                }
            }
        }
        v.push(Fig2Name::A(t));
        Ok(v)
    });
    let map = Arc::new(Fig2Map { layout: Layout::new(emit) });
    let m = Arc::clone(&map);
    let af = FinitaryAF::new(format!("fig2({})", label.into()), move |idx| {
        let a = |i: usize| m.layout.index_of(Fig2Name::A(i), i).map(|x| x.expect("a_i exists"));
        let mut out = Vec::new();
        match m.layout.name_of(idx)? {
            Fig2Name::A(i) => {
                if i >= 1 {
                    out.push(a(i - 1)?);
                }
                if i % 2 == 1 {
                    out.push(idx);
                }
                if i >= 2 && i % 2 == 0 {
                    let d = m.layout.index_of(Fig2Name::D(i / 2, 0), i / 2)?;
                    out.push(d.expect("d^i_0 opens at stage i"));
                }
            }
            Fig2Name::D(i, 0) => {
                out.push(a(2 * i)?);
                out.push(a(2 * i - 1)?);
            }
            Fig2Name::D(i, j) => {
                // the predecessor was emitted earlier, so it is already indexed
                let prev = m.layout.index_of(Fig2Name::D(i, j - 1), 0)?;
                out.push(prev.expect("d^i_{j-1} precedes d^i_j"));
                if j % 2 == 1 {
                    out.push(idx);
                }
            }
        }
        Ok(out)
    });
    Gadget { af, names: map }
}

// ------------------------------------------------------------- chain_w ----

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct ChainName {
    n: usize,
    m: usize,
}

struct ChainMap {
    layout: Layout<ChainName>,
}

impl ChainMap {
    fn stage_of(c: ChainName) -> usize {
        c.n + c.m.div_ceil(2)
    }
}

impl IndexMap for ChainMap {
    fn name(&self, idx: usize) -> Result<String> {
        let c = self.layout.name_of(idx)?;
        Ok(format!("a_{{{},{}}}", c.n, c.m))
    }

    fn index(&self, name: &str) -> Result<Option<usize>> {
        match parse_subscripts(name, "a") {
            Some(v) if v.len() == 2 => {
                let c = ChainName { n: v[0], m: v[1] };
                self.layout.index_of(c, Self::stage_of(c))
            }
            _ => Ok(None),
        }
    }
}

type Enumerated = Arc<dyn Fn(usize, usize) -> bool + Send + Sync>;

/// Chains `a_{n,m+1} → a_{n,m}`: `a_{n,0}` always exists and the pair
/// `a_{n,2j-1}, a_{n,2j}` exists while `n` is not enumerated by stage `j`.
///
/// `enumerated(n, j)` must be monotone in `j`. Layout: stage `t` lists
/// `a_{t,0}`, then the pair for `j = t - n` of every earlier chain `n < t`.
pub fn gadget_chain_w_staged<F>(label: impl Into<String>, enumerated: F) -> Gadget
where
    F: Fn(usize, usize) -> bool + Send + Sync + 'static,
{
    let w: Enumerated = Arc::new(enumerated);
    let w1 = Arc::clone(&w);
    let emit: Emit<ChainName> = Box::new(move |t| {
        let mut v = vec![ChainName { n: t, m: 0 }];
        for n in 0..t {
            let j = t - n;
            if !w1(n, j) {
                v.push(ChainName { n, m: 2 * j - 1 });
                v.push(ChainName { n, m: 2 * j });
            }
        }
        Ok(v)
    });
    let map = Arc::new(ChainMap { layout: Layout::new(emit) });
    let m = Arc::clone(&map);
    let af = FinitaryAF::new(format!("chain_w({})", label.into()), move |idx| {
        let c = m.layout.name_of(idx)?;
        let up = ChainName { n: c.n, m: c.m + 1 };
        Ok(m.layout.index_of(up, ChainMap::stage_of(up))?.into_iter().collect())
    });
    Gadget { af, names: map }
}

/// [`gadget_chain_w_staged`] where `n ∈ w` is enumerated at stage `n + 1`.
pub fn gadget_chain_w(w: StageSet) -> Gadget {
    let label = format!("w={w}");
    gadget_chain_w_staged(label, move |n, j| j > n && w.contains(n))
}

// -------------------------------------------------------------- unistb ----

struct UnistbMap;

impl IndexMap for UnistbMap {
    fn name(&self, idx: usize) -> Result<String> {
        Ok(if idx % 2 == 0 { format!("a_{}", idx / 2) } else { format!("b_{}", idx / 2) })
    }

    fn index(&self, name: &str) -> Result<Option<usize>> {
        Ok(match (parse_subscripts(name, "a"), parse_subscripts(name, "b")) {
            (Some(v), _) if v.len() == 1 => Some(2 * v[0]),
            (_, Some(v)) if v.len() == 1 => Some(2 * v[0] + 1),
            _ => None,
        })
    }
}

/// `a_i ↔ b_i`, and `a_i` attacks `a_{i+j}`, `b_{i+j}` for every `j >= 1`
/// outside `exp(i)`. Layout: `a_i ↦ 2i`, `b_i ↦ 2i+1`.
pub fn gadget_unistb<F>(label: impl Into<String>, exp: F) -> Gadget
where
    F: Fn(usize) -> StageSet + Send + Sync + 'static,
{
    let af = FinitaryAF::new(format!("unistb({})", label.into()), move |idx| {
        let i = idx / 2;
        let mut out = vec![if idx % 2 == 0 { idx + 1 } else { idx - 1 }];
        for k in 0..i {
            if !exp(k).contains(i - k) {
                out.push(2 * k);
            }
        }
        Ok(out)
    });
    Gadget { af, names: Arc::new(UnistbMap) }
}

// ------------------------------------------------------------- tree_cf ----

pub type CodeString = Vec<usize>;

type Membership = Arc<dyn Fn(&[usize]) -> bool + Send + Sync>;

struct TreeNodes {
    member: Membership,
    state: Mutex<TreeNodeState>,
}

struct TreeNodeState {
    /// nodes in enumeration order, with their weights
    nodes: Vec<(CodeString, usize)>,
    next_weight: usize,
}

impl TreeNodes {
    /// Enumerate by weight `|σ| + Σσ(i)`, then lexicographically; a node of
    /// weight `w` is `τ⌢(w - weight(τ) - 1)` for an earlier node `τ`.
    fn node(&self, idx: usize) -> Result<CodeString> {
        let mut st = self.state.lock().expect("tree lock");
        if st.nodes.is_empty() {
            if !(self.member)(&[]) {
                return Err(AfError::input("tree does not contain the empty string"));
            }
            st.nodes.push((Vec::new(), 0));
            st.next_weight = 1;
        }
        let mut idle = 0usize;
        while st.nodes.len() <= idx {
            let w = st.next_weight;
            let mut fresh = Vec::new();
            for (tau, wt) in st.nodes.iter() {
                if *wt < w {
                    let mut c = tau.clone();
                    c.push(w - wt - 1);
                    if (self.member)(&c) {
                        fresh.push(c);
                    } else {
                        let mut probe = c.clone();
                        probe.push(0);
                        if (self.member)(&probe) {
                            return Err(AfError::input(format!(
                                "tree is not prefix-closed: {probe:?} present, {c:?} missing"
                            )));
                        }
                    }
                }
            }
            fresh.sort();
            idle = if fresh.is_empty() { idle + 1 } else { 0 };
            if idle > 64 + 4 * st.nodes.len() {
                return Err(AfError::input(format!(
                    "tree looks finite: no node beyond the first {}",
                    st.nodes.len()
                )));
            }
            st.nodes.extend(fresh.into_iter().map(|c| (c, w)));
            st.next_weight += 1;
        }
        Ok(st.nodes[idx].0.clone())
    }
}

fn comparable(a: &[usize], b: &[usize]) -> bool {
    let k = a.len().min(b.len());
    a[..k] == b[..k]
}

struct TreeCfMap {
    nodes: Arc<TreeNodes>,
}

impl IndexMap for TreeCfMap {
    fn name(&self, idx: usize) -> Result<String> {
        Ok(format!("a_{idx}"))
    }

    fn index(&self, name: &str) -> Result<Option<usize>> {
        Ok(parse_subscripts(name, "a").filter(|v| v.len() == 1).map(|v| v[0]))
    }
}

impl TreeCfMap {
    #[allow(dead_code)]
    fn node(&self, idx: usize) -> Result<CodeString> {
        self.nodes.node(idx)
    }
}

/// `a_i` attacks `a_j` iff `i < j` and the `i`-th and `j`-th tree nodes are
/// incomparable. Nodes are numbered by weight, then lexicographically.
pub fn gadget_tree_cf<F>(label: impl Into<String>, membership: F) -> Gadget
where
    F: Fn(&[usize]) -> bool + Send + Sync + 'static,
{
    let nodes = Arc::new(TreeNodes {
        member: Arc::new(membership),
        state: Mutex::new(TreeNodeState { nodes: Vec::new(), next_weight: 0 }),
    });
    let n2 = Arc::clone(&nodes);
    let af = FinitaryAF::new(format!("tree_cf({})", label.into()), move |j| {
        let fj = n2.node(j)?;
        let mut out = Vec::new();
        for i in 0..j {
            if !comparable(&n2.node(i)?, &fj) {
                out.push(i);
            }
        }
        Ok(out)
    });
    Gadget { af, names: Arc::new(TreeCfMap { nodes }) }
}

/// The tree node carried by argument `idx` of a [`gadget_tree_cf`] instance.
pub fn tree_cf_node<F>(membership: F, idx: usize) -> Result<CodeString>
where
    F: Fn(&[usize]) -> bool + Send + Sync + 'static,
{
    let nodes = TreeNodes {
        member: Arc::new(membership),
        state: Mutex::new(TreeNodeState { nodes: Vec::new(), next_weight: 0 }),
    };
    nodes.node(idx)
}

// ------------------------------------------------------ disjoint union ----

struct UnionMap {
    x: Arc<dyn IndexMap>,
    y: Arc<dyn IndexMap>,
}

impl IndexMap for UnionMap {
    fn name(&self, idx: usize) -> Result<String> {
        Ok(if idx % 2 == 0 {
            format!("x:{}", self.x.name(idx / 2)?)
        } else {
            format!("y:{}", self.y.name(idx / 2)?)
        })
    }

    fn index(&self, name: &str) -> Result<Option<usize>> {
        if let Some(r) = name.strip_prefix("x:") {
            return Ok(self.x.index(r)?.map(|i| 2 * i));
        }
        if let Some(r) = name.strip_prefix("y:") {
            return Ok(self.y.index(r)?.map(|i| 2 * i + 1));
        }
        Ok(None)
    }
}

struct PlainMap;

impl IndexMap for PlainMap {
    fn name(&self, idx: usize) -> Result<String> {
        Ok(format!("a_{idx}"))
    }

    fn index(&self, name: &str) -> Result<Option<usize>> {
        Ok(parse_subscripts(name, "a").filter(|v| v.len() == 1).map(|v| v[0]))
    }
}

/// Wrap a bare framework with the identity naming `a_i`.
pub fn plain(af: FinitaryAF) -> Gadget {
    Gadget { af, names: Arc::new(PlainMap) }
}

/// Even indices host `x`, odd indices host `y`. Both must be infinite.
pub fn disjoint_union(x: &FinitaryAF, y: &FinitaryAF) -> Result<FinitaryAF> {
    if x.is_finite() || y.is_finite() {
        return Err(AfError::input("disjoint_union expects two infinite frameworks"));
    }
    let (x2, y2) = (x.clone(), y.clone());
    Ok(FinitaryAF::new(format!("union({}, {})", x.description(), y.description()), move |m| {
        Ok(if m % 2 == 0 {
            x2.attackers_of(m / 2)?.into_iter().map(|i| 2 * i).collect()
        } else {
            y2.attackers_of(m / 2)?.into_iter().map(|i| 2 * i + 1).collect()
        })
    }))
}

/// [`disjoint_union`] carrying both name maps.
pub fn disjoint_union_gadget(x: &Gadget, y: &Gadget) -> Result<Gadget> {
    Ok(Gadget {
        af: disjoint_union(&x.af, &y.af)?,
        names: Arc::new(UnionMap { x: Arc::clone(&x.names), y: Arc::clone(&y.names) }),
    })
}

/// An infinite framework without attacks.
pub fn attack_free() -> FinitaryAF {
    FinitaryAF::from_fn("attack-free", |_| Vec::new())
}

pub fn arg_list(g: &Gadget, names: &[&str]) -> Vec<ArgumentId> {
    names.iter().map(|n| g.idx(n)).collect()
}
