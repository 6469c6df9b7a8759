//! Brute-force powerset enumeration and exact decisions on finite frameworks.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::af::{ArgumentId, Extension, FiniteAF, SemanticsKind};
use crate::error::{AfError, Result};

pub const DEFAULT_CAP: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DecisionProblem {
    Cred(ArgumentId),
    Skep(ArgumentId),
    Exists,
    Ne,
    Uni,
}

impl DecisionProblem {
    pub fn tag(&self) -> &'static str {
        match self {
            DecisionProblem::Cred(_) => "cred",
            DecisionProblem::Skep(_) => "skep",
            DecisionProblem::Exists => "exists",
            DecisionProblem::Ne => "ne",
            DecisionProblem::Uni => "uni",
        }
    }

    pub fn argument(&self) -> Option<ArgumentId> {
        match *self {
            DecisionProblem::Cred(a) | DecisionProblem::Skep(a) => Some(a),
            _ => None,
        }
    }

    /// Build from a tag and an optional argument; cred/skep need one.
    pub fn from_tag(tag: &str, arg: Option<ArgumentId>) -> Result<Self> {
        let p = match (tag.trim().to_ascii_lowercase().as_str(), arg) {
            ("cred", Some(a)) => DecisionProblem::Cred(a),
            ("skep", Some(a)) => DecisionProblem::Skep(a),
            ("cred" | "skep", None) => {
                return Err(AfError::input(format!("problem `{tag}` needs an argument")))
            }
            ("exists" | "ex", _) => DecisionProblem::Exists,
            ("ne" | "nemp", _) => DecisionProblem::Ne,
            ("uni", _) => DecisionProblem::Uni,
            _ => return Err(AfError::input(format!("unknown problem `{tag}`"))),
        };
        Ok(p)
    }
}

impl fmt::Display for DecisionProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.argument() {
            Some(a) => write!(f, "{}({a})", self.tag()),
            None => f.write_str(self.tag()),
        }
    }
}

impl FromStr for DecisionProblem {
    type Err = AfError;

    /// Accepts `exists`, `ne`, `uni`, `cred(3)`, `skep(0)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.split_once('(') {
            Some((tag, rest)) => {
                let num = rest
                    .strip_suffix(')')
                    .and_then(|n| n.trim().parse().ok())
                    .ok_or_else(|| AfError::input(format!("malformed problem `{s}`")))?;
                DecisionProblem::from_tag(tag, Some(num))
            }
            None => DecisionProblem::from_tag(s, None),
        }
    }
}

/// Bit-packed view used by the scan.
struct Masks {
    n: usize,
    att_in: Vec<u64>,
    att_out: Vec<u64>,
}

impl Masks {
    fn new(af: &FiniteAF) -> Self {
        let n = af.n_args();
        let mut att_in = vec![0u64; n];
        let mut att_out = vec![0u64; n];
        for &(x, y) in af.attacks() {
            att_in[y] |= 1 << x;
            att_out[x] |= 1 << y;
        }
        Masks { n, att_in, att_out }
    }

    fn full(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    fn plus(&self, s: u64) -> u64 {
        bits(s).fold(0, |acc, x| acc | self.att_out[x])
    }

    fn conflict_free(&self, s: u64) -> bool {
        bits(s).all(|x| self.att_out[x] & s == 0)
    }

    fn defended(&self, s: u64) -> u64 {
        let plus = self.plus(s);
        (0..self.n)
            .filter(|&x| self.att_in[x] & !plus == 0)
            .fold(0, |acc, x| acc | 1 << x)
    }

    fn test(&self, s: u64, sigma: SemanticsKind) -> bool {
        if !self.conflict_free(s) {
            return false;
        }
        match sigma {
            SemanticsKind::Cf => true,
            SemanticsKind::Na => (0..self.n).filter(|x| s & (1 << x) == 0).all(|x| {
                let t = s | 1 << x;
                !self.conflict_free(t)
            }),
            SemanticsKind::Ad => s & !self.defended(s) == 0,
            SemanticsKind::Co => s == self.defended(s),
            SemanticsKind::Stb => s | self.plus(s) == self.full(),
            _ => false,
        }
    }
}

fn bits(mut s: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if s == 0 {
            None
        } else {
            let i = s.trailing_zeros() as usize;
            s &= s - 1;
            Some(i)
        }
    })
}

fn to_extension(s: u64) -> Extension {
    bits(s).collect()
}

fn require_finite_sigma(sigma: SemanticsKind) -> Result<()> {
    if sigma.is_infinite() {
        Err(AfError::input(format!("{sigma} is not a finite-framework semantics")))
    } else {
        Ok(())
    }
}

/// `enumerate` with an explicit size cap.
pub fn enumerate_capped(af: &FiniteAF, sigma: SemanticsKind, cap: usize) -> Result<Vec<Extension>> {
    let cap = cap.min(63);
    if af.n_args() > cap {
        return Err(AfError::Resource { what: "powerset scan argument count", limit: cap });
    }
    if sigma.is_infinite() {
        return Ok(Vec::new());
    }
    let m = Masks::new(af);
    let top: u64 = 1u64 << af.n_args();
    Ok((0..top).filter(|&s| m.test(s, sigma)).map(to_extension).collect())
}

/// Every σ-extension, ordered by ascending member bitmask.
///
/// `inf-*` tags yield no extensions: a finite framework has no infinite set.
pub fn enumerate(af: &FiniteAF, sigma: SemanticsKind) -> Result<Vec<Extension>> {
    enumerate_capped(af, sigma, DEFAULT_CAP)
}

/// Least fixed point of the characteristic function.
pub fn grounded(af: &FiniteAF) -> Extension {
    if af.n_args() > 64 {
        let mut s = Extension::new();
        loop {
            let next = af.characteristic(&s).expect("indices in range");
            if next == s {
                return s;
            }
            s = next;
        }
    }
    let m = Masks::new(af);
    let mut s = 0u64;
    loop {
        let next = m.defended(s);
        if next == s {
            return to_extension(s);
        }
        s = next;
    }
}

pub fn decide_finite_capped(
    af: &FiniteAF,
    p: DecisionProblem,
    sigma: SemanticsKind,
    cap: usize,
) -> Result<bool> {
    if let Some(a) = p.argument() {
        if a >= af.n_args() {
            return Err(AfError::OutOfRange { index: a, n_args: af.n_args() });
        }
    }
    let exts = enumerate_capped(af, sigma, cap)?;
    Ok(match p {
        DecisionProblem::Cred(a) => exts.iter().any(|s| s.contains(&a)),
        DecisionProblem::Skep(a) => exts.iter().all(|s| s.contains(&a)),
        DecisionProblem::Exists => !exts.is_empty(),
        DecisionProblem::Ne => exts.iter().any(|s| !s.is_empty()),
        DecisionProblem::Uni => exts.len() == 1,
    })
}

pub fn decide_finite(af: &FiniteAF, p: DecisionProblem, sigma: SemanticsKind) -> Result<bool> {
    decide_finite_capped(af, p, sigma, DEFAULT_CAP)
}

/// Rejects `inf-*` tags instead of answering vacuously.
pub fn decide_finite_strict(af: &FiniteAF, p: DecisionProblem, sigma: SemanticsKind) -> Result<bool> {
    require_finite_sigma(sigma)?;
    decide_finite(af, p, sigma)
}
