//! Shared test helpers: seeded random frameworks and a brute-force reference
//! written independently of the library's oracle.
#![allow(dead_code)]

use std::collections::BTreeSet;

use finitary_af::{Extension, FiniteAF, SemanticsKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random framework on `n` arguments; each ordered pair is an attack with
/// probability `p`.
pub fn random_af(r: &mut ChaCha8Rng, n: usize, p: f64) -> FiniteAF {
    let mut att = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if r.gen_bool(p) {
                att.push((x, y));
            }
        }
    }
    FiniteAF::new(n, att).unwrap()
}

/// A corpus of `count` frameworks with `1..=max_n` arguments.
pub fn corpus(seed: u64, count: usize, max_n: usize) -> Vec<FiniteAF> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let n = r.gen_range(1..=max_n);
            let p = r.gen_range(0.1..0.5);
            random_af(&mut r, n, p)
        })
        .collect()
}

/// Framework number `code` among all attack relations on `n` arguments.
pub fn af_from_code(n: usize, code: u64) -> FiniteAF {
    let mut att = Vec::new();
    for bit in 0..n * n {
        if code >> bit & 1 == 1 {
            att.push((bit / n, bit % n));
        }
    }
    FiniteAF::new(n, att).unwrap()
}

fn att(af: &FiniteAF, x: usize, y: usize) -> bool {
    af.attacks().contains(&(x, y))
}

fn cf(af: &FiniteAF, s: &[usize]) -> bool {
    s.iter().all(|&x| s.iter().all(|&y| !att(af, x, y)))
}

fn defends(af: &FiniteAF, s: &[usize], a: usize) -> bool {
    (0..af.n_args()).filter(|&z| att(af, z, a)).all(|z| s.iter().any(|&x| att(af, x, z)))
}

/// Direct transcription of the definitions, one subset at a time.
pub fn is_ext(af: &FiniteAF, s: &[usize], sigma: SemanticsKind) -> bool {
    let n = af.n_args();
    if !cf(af, s) {
        return false;
    }
    match sigma {
        SemanticsKind::Cf => true,
        SemanticsKind::Na => (0..n).all(|x| {
            if s.contains(&x) {
                return true;
            }
            let mut t = s.to_vec();
            t.push(x);
            !cf(af, &t)
        }),
        SemanticsKind::Ad => s.iter().all(|&a| defends(af, s, a)),
        SemanticsKind::Co => (0..n).all(|a| defends(af, s, a) == s.contains(&a)),
        SemanticsKind::Stb => (0..n).all(|a| s.contains(&a) || s.iter().any(|&x| att(af, x, a))),
        _ => false,
    }
}

pub fn brute(af: &FiniteAF, sigma: SemanticsKind) -> BTreeSet<Extension> {
    let n = af.n_args();
    let mut out = BTreeSet::new();
    for mask in 0u32..(1 << n) {
        let s: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        if is_ext(af, &s, sigma) {
            out.insert(s.into_iter().collect());
        }
    }
    out
}

pub fn set(xs: &[usize]) -> Extension {
    xs.iter().copied().collect()
}

pub fn f1() -> FiniteAF {
    FiniteAF::new(3, [(0, 1), (1, 2)]).unwrap()
}

pub fn f2() -> FiniteAF {
    FiniteAF::new(1, [(0, 0)]).unwrap()
}

pub fn f3() -> FiniteAF {
    FiniteAF::new(2, [(0, 1), (1, 0)]).unwrap()
}
