//! Gadget ids and parameter strings.

use std::collections::{BTreeMap, HashSet};

use finitary_af::finitary::{
    attack_free, gadget_chain_w, gadget_fig1, gadget_fig2, gadget_stars, gadget_tree_cf, gadget_unistb, plain,
};
use finitary_af::{FinitaryAF, FiniteAF, Gadget, StageSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CliError, Result};

pub const GADGET_IDS: [&str; 8] = ["fig1", "stars", "fig2", "chain_w", "unistb", "tree_cf", "attack_free", "random"];

fn stage_set(s: &str) -> Result<StageSet> {
    s.parse().map_err(|e| CliError::usage(format!("malformed parameter: {e}")))
}

/// `I=SET;I=SET;*=SET`, where `*` overrides `default`.
fn indexed_sets(param: &str, default: &str) -> Result<(BTreeMap<usize, StageSet>, StageSet)> {
    let mut map = BTreeMap::new();
    let mut rest = stage_set(default)?;
    for part in param.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| CliError::usage(format!("malformed parameter `{part}`: expected INDEX=SET")))?;
        let set = stage_set(v)?;
        match k.trim() {
            "*" => rest = set,
            k => {
                let i = k.parse().map_err(|_| CliError::usage(format!("malformed index `{k}`")))?;
                map.insert(i, set);
            }
        }
    }
    Ok((map, rest))
}

/// `count=N` means stars `0..N`; anything else is a stage set.
fn star_count(param: &str) -> Result<StageSet> {
    match param.trim().strip_prefix("count=") {
        Some(n) => match n.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(StageSet::finite(0..n - 1)),
            _ => Err(CliError::usage(format!("malformed star count `{n}` (at least 1)"))),
        },
        None => stage_set(param),
    }
}

/// A seeded random finite framework; `param` is `N` or `N:P`.
pub fn random_af(param: &str, seed: u64) -> Result<FiniteAF> {
    let bad = || CliError::usage(format!("malformed parameter `{param}`: expected N or N:P"));
    let (n, p) = match param.split_once(':') {
        Some((n, p)) => (n.trim().parse().map_err(|_| bad())?, p.trim().parse::<f64>().map_err(|_| bad())?),
        None => (param.trim().parse().map_err(|_| bad())?, 0.3),
    };
    if !(0.0..=1.0).contains(&p) {
        return Err(bad());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut attacks = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if rng.gen_bool(p) {
                attacks.push((x, y));
            }
        }
    }
    Ok(FiniteAF::new(n, attacks)?)
}

/// Build a gadget from its id and parameter string.
///
/// fig1 and stars read a stage set (stars also `count=N`), chain_w the set `w`, fig2 and unistb
/// per-index sets (`card` defaults to `{0}`, `exp` to empty), tree_cf the set
/// of allowed node labels.
pub fn build_gadget(id: &str, param: Option<&str>, seed: u64) -> Result<Gadget> {
    let g = match id {
        "fig1" => gadget_fig1(stage_set(param.unwrap_or("none"))?),
        "stars" => gadget_stars(star_count(param.unwrap_or("all"))?),
        "chain_w" => gadget_chain_w(stage_set(param.unwrap_or("none"))?),
        "fig2" => {
            let (map, rest) = indexed_sets(param.unwrap_or(""), "{0}")?;
            for (i, s) in map.iter().map(|(i, s)| (i.to_string(), s)).chain([("*".to_string(), &rest)]) {
                if !s.contains(0) {
                    return Err(CliError::usage(format!("card({i}) must contain 0")));
                }
            }
            let label = param.unwrap_or("finite").to_string();
            gadget_fig2(label, move |i| map.get(&i).cloned().unwrap_or_else(|| rest.clone()))
        }
        "unistb" => {
            let (map, rest) = indexed_sets(param.unwrap_or(""), "none")?;
            let label = param.unwrap_or("empty").to_string();
            gadget_unistb(label, move |i| map.get(&i).cloned().unwrap_or_else(|| rest.clone()))
        }
        "tree_cf" => {
            let labels = stage_set(param.unwrap_or("{0}"))?;
            if labels.finite_bound().is_some_and(|b| labels.members_upto(b).is_empty()) {
                return Err(CliError::usage("tree_cf needs at least one label"));
            }
            let label = labels.to_string();
            gadget_tree_cf(label, move |s| s.iter().all(|&c| labels.contains(c)))
        }
        "attack_free" => plain(attack_free()),
        "random" => {
            let af = random_af(param.unwrap_or("6"), seed)?;
            plain(FinitaryAF::from_finite(&af).with_description(format!("random(seed={seed})")))
        }
        other => {
            return Err(CliError::usage(format!("unknown gadget `{other}` (expected one of {})", GADGET_IDS.join(", "))))
        }
    };
    Ok(g)
}

/// APX-safe form of a gadget name: `d^1_0` becomes `d_1_0`, `a_{3,1}` becomes `a_3_1`.
pub fn sanitize(name: &str) -> String {
    let mut out = String::new();
    for c in name.chars() {
        if c.is_ascii_alphanumeric() {
            out.push(c);
        } else if !out.ends_with('_') {
            out.push('_');
        }
    }
    let t = out.trim_end_matches('_');
    if t.is_empty() {
        "x".into()
    } else {
        t.into()
    }
}

/// Gadget names and emitted names of the first `n` arguments.
pub fn emitted_names(g: &Gadget, n: usize) -> Vec<(String, String)> {
    let mut seen = HashSet::new();
    (0..n)
        .map(|i| {
            let given = g.name(i);
            let mut e = sanitize(&given);
            if !seen.insert(e.clone()) {
                e = format!("{e}_i{i}");
                seen.insert(e.clone());
            }
            (given, e)
        })
        .collect()
}
