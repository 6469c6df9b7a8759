//! Finite argumentation frameworks and the classical semantics predicates.
//!
//! Arguments are the dense indices `0..n_args`. Self-attacks are allowed and
//! never normalized away.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{AfError, Result};

pub type ArgumentId = usize;

/// A finite set of arguments.
pub type Extension = BTreeSet<ArgumentId>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SemanticsKind {
    #[serde(rename = "cf")]
    Cf,
    #[serde(rename = "na")]
    Na,
    #[serde(rename = "ad")]
    Ad,
    #[serde(rename = "co")]
    Co,
    #[serde(rename = "stb")]
    Stb,
    #[serde(rename = "inf-cf")]
    InfCf,
    #[serde(rename = "inf-na")]
    InfNa,
    #[serde(rename = "inf-ad")]
    InfAd,
    #[serde(rename = "inf-co")]
    InfCo,
    #[serde(rename = "inf-stb")]
    InfStb,
}

impl SemanticsKind {
    pub const FINITE: [SemanticsKind; 5] = [
        SemanticsKind::Cf,
        SemanticsKind::Na,
        SemanticsKind::Ad,
        SemanticsKind::Co,
        SemanticsKind::Stb,
    ];

    pub const ALL: [SemanticsKind; 10] = [
        SemanticsKind::Cf,
        SemanticsKind::Na,
        SemanticsKind::Ad,
        SemanticsKind::Co,
        SemanticsKind::Stb,
        SemanticsKind::InfCf,
        SemanticsKind::InfNa,
        SemanticsKind::InfAd,
        SemanticsKind::InfCo,
        SemanticsKind::InfStb,
    ];

    pub fn is_infinite(self) -> bool {
        matches!(
            self,
            SemanticsKind::InfCf
                | SemanticsKind::InfNa
                | SemanticsKind::InfAd
                | SemanticsKind::InfCo
                | SemanticsKind::InfStb
        )
    }

    /// The underlying semantics of an `inf-*` tag; identity otherwise.
    pub fn base(self) -> SemanticsKind {
        match self {
            SemanticsKind::InfCf => SemanticsKind::Cf,
            SemanticsKind::InfNa => SemanticsKind::Na,
            SemanticsKind::InfAd => SemanticsKind::Ad,
            SemanticsKind::InfCo => SemanticsKind::Co,
            SemanticsKind::InfStb => SemanticsKind::Stb,
            other => other,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SemanticsKind::Cf => "cf",
            SemanticsKind::Na => "na",
            SemanticsKind::Ad => "ad",
            SemanticsKind::Co => "co",
            SemanticsKind::Stb => "stb",
            SemanticsKind::InfCf => "inf-cf",
            SemanticsKind::InfNa => "inf-na",
            SemanticsKind::InfAd => "inf-ad",
            SemanticsKind::InfCo => "inf-co",
            SemanticsKind::InfStb => "inf-stb",
        }
    }
}

impl fmt::Display for SemanticsKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SemanticsKind {
    type Err = AfError;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase().replace('_', "-");
        let t = match t.as_str() {
            "infcf" => "inf-cf",
            "infna" => "inf-na",
            "infad" => "inf-ad",
            "infco" => "inf-co",
            "infstb" => "inf-stb",
            other => other,
        }
        .to_string();
        SemanticsKind::ALL
            .iter()
            .copied()
            .find(|k| k.as_str() == t)
            .ok_or_else(|| AfError::input(format!("unknown semantics `{s}`")))
    }
}

/// An explicit finite attack graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAF {
    n_args: usize,
    attacks: BTreeSet<(ArgumentId, ArgumentId)>,
    attackers: Vec<Vec<ArgumentId>>,
    targets: Vec<Vec<ArgumentId>>,
}

impl FiniteAF {
    pub fn new<I>(n_args: usize, attacks: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ArgumentId, ArgumentId)>,
    {
        let mut set = BTreeSet::new();
        for (x, y) in attacks {
            for i in [x, y] {
                if i >= n_args {
                    return Err(AfError::OutOfRange { index: i, n_args });
                }
            }
            set.insert((x, y));
        }
        let mut attackers = vec![Vec::new(); n_args];
        let mut targets = vec![Vec::new(); n_args];
        for &(x, y) in &set {
            attackers[y].push(x);
            targets[x].push(y);
        }
        for v in attackers.iter_mut() {
            v.sort_unstable();
        }
        Ok(FiniteAF { n_args, attacks: set, attackers, targets })
    }

    pub fn empty(n_args: usize) -> Self {
        FiniteAF::new(n_args, []).expect("no attacks")
    }

    pub fn n_args(&self) -> usize {
        self.n_args
    }

    pub fn attacks(&self) -> &BTreeSet<(ArgumentId, ArgumentId)> {
        &self.attacks
    }

    pub fn n_attacks(&self) -> usize {
        self.attacks.len()
    }

    pub fn attacks_pair(&self, x: ArgumentId, y: ArgumentId) -> bool {
        self.attacks.contains(&(x, y))
    }

    pub fn is_self_attacking(&self, x: ArgumentId) -> bool {
        self.attacks_pair(x, x)
    }

    /// Sorted attackers of a single argument. Panics when out of range.
    pub fn attackers_of(&self, x: ArgumentId) -> &[ArgumentId] {
        &self.attackers[x]
    }

    /// Sorted targets of a single argument. Panics when out of range.
    pub fn targets_of(&self, x: ArgumentId) -> &[ArgumentId] {
        &self.targets[x]
    }

    fn check(&self, s: &Extension) -> Result<()> {
        match s.iter().next_back() {
            Some(&i) if i >= self.n_args => Err(AfError::OutOfRange { index: i, n_args: self.n_args }),
            _ => Ok(()),
        }
    }

    /// `S⁻`: every argument attacking some member of `s`.
    pub fn attackers(&self, s: &Extension) -> Result<Extension> {
        self.check(s)?;
        Ok(s.iter().flat_map(|&y| self.attackers[y].iter().copied()).collect())
    }

    /// `S⁺`: every argument attacked by some member of `s`.
    pub fn attacked_by(&self, s: &Extension) -> Result<Extension> {
        self.check(s)?;
        Ok(s.iter().flat_map(|&x| self.targets[x].iter().copied()).collect())
    }

    /// The arguments defended by `s`.
    pub fn characteristic(&self, s: &Extension) -> Result<Extension> {
        let plus = self.attacked_by(s)?;
        Ok((0..self.n_args)
            .filter(|&x| self.attackers[x].iter().all(|z| plus.contains(z)))
            .collect())
    }

    pub fn is_conflict_free(&self, s: &Extension) -> Result<bool> {
        self.check(s)?;
        Ok(s.iter().all(|&x| self.targets[x].iter().all(|y| !s.contains(y))))
    }

    pub fn is_extension(&self, s: &Extension, sigma: SemanticsKind) -> Result<bool> {
        self.check(s)?;
        if sigma.is_infinite() {
            return Ok(false);
        }
        if !self.is_conflict_free(s)? {
            return Ok(false);
        }
        Ok(match sigma {
            SemanticsKind::Cf => true,
            SemanticsKind::Na => (0..self.n_args).filter(|x| !s.contains(x)).all(|x| {
                let mut t = s.clone();
                t.insert(x);
                !self.is_conflict_free(&t).unwrap_or(false)
            }),
            SemanticsKind::Ad => s.is_subset(&self.characteristic(s)?),
            SemanticsKind::Co => *s == self.characteristic(s)?,
            SemanticsKind::Stb => {
                let plus = self.attacked_by(s)?;
                (0..self.n_args).all(|x| s.contains(&x) || plus.contains(&x))
            }
            _ => unreachable!("infinite tags handled above"),
        })
    }
}

impl fmt::Display for FiniteAF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AF(n={}, R={{", self.n_args)?;
        for (i, (x, y)) in self.attacks.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "({x},{y})")?;
        }
        f.write_str("})")
    }
}
