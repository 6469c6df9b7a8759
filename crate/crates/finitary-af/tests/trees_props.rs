mod common;

use common::*;
use finitary_af::trees::{
    alive_at_depth, children, decode, explore, extensions_via_tree, forced_depth, ins_out_sets, is_node, TreeKind,
    TreeSpec,
};
use finitary_af::{AfError, Extension, FiniteAF, SemanticsKind};
use std::collections::BTreeSet;

const KINDS: [(TreeKind, SemanticsKind); 3] =
    [(TreeKind::Ad, SemanticsKind::Ad), (TreeKind::Stb, SemanticsKind::Stb), (TreeKind::Co, SemanticsKind::Co)];

fn spec(af: &FiniteAF, kind: TreeKind, d: &[usize], e: &[usize]) -> TreeSpec {
    TreeSpec::finite(af, kind, set(d), set(e)).unwrap()
}

fn filtered(af: &FiniteAF, sigma: SemanticsKind, d: &Extension, e: &Extension) -> BTreeSet<Extension> {
    brute(af, sigma).into_iter().filter(|s| d.is_subset(s) && s.is_disjoint(e)).collect()
}

#[test]
fn bijection_with_and_without_constraints() {
    for af in corpus(21, 200, 5) {
        for (kind, sigma) in KINDS {
            let mut variants = vec![(set(&[]), set(&[]))];
            for a in 0..af.n_args() {
                variants.push((set(&[a]), set(&[])));
                variants.push((set(&[]), set(&[a])));
            }
            for (d, e) in variants {
                let got: BTreeSet<Extension> = extensions_via_tree(&af, kind, &d, &e).unwrap().into_iter().collect();
                assert_eq!(got, filtered(&af, sigma, &d, &e), "{af} {kind} D={d:?} E={e:?}");
            }
        }
    }
}

#[test]
fn extension_examples() {
    assert_eq!(extensions_via_tree(&f1(), TreeKind::Stb, &set(&[]), &set(&[])).unwrap(), vec![set(&[0, 2])]);
    assert_eq!(
        extensions_via_tree(&f3(), TreeKind::Co, &set(&[]), &set(&[])).unwrap(),
        vec![set(&[]), set(&[0]), set(&[1])]
    );
    assert_eq!(extensions_via_tree(&f1(), TreeKind::Ad, &set(&[]), &set(&[0])).unwrap(), vec![set(&[])]);
}

#[test]
fn node_examples() {
    let s = spec(&f3(), TreeKind::Stb, &[], &[]);
    assert_eq!(children(&s, &[]).unwrap(), vec![vec![0], vec![2]]);
    assert!(!is_node(&s, &[1]).unwrap());
    assert!(is_node(&s, &[]).unwrap());
    let sets = ins_out_sets(&s, &[0]).unwrap();
    assert!(sets.ins.contains(&0));

    let a = spec(&f1(), TreeKind::Ad, &[], &[]);
    assert!(ins_out_sets(&a, &[1]).unwrap().ins.contains(&0));
    // a_0 and a_1 both in: conflict inside In
    assert!(!is_node(&a, &[1, 0, 1]).unwrap());

    let e = ins_out_sets(&spec(&f1(), TreeKind::Co, &[1], &[2]), &[]).unwrap();
    assert_eq!((e.ins, e.outs), (set(&[1]), set(&[2])));
    assert!(e.in_splus.is_empty() && e.out_splus.is_empty());
}

#[test]
fn liveness_examples() {
    assert!(!alive_at_depth(&spec(&f2(), TreeKind::Stb, &[], &[]), 1).unwrap());
    let a = spec(&f1(), TreeKind::Ad, &[2], &[]);
    assert!((0..=20).all(|d| alive_at_depth(&a, d).unwrap()));
    for af in corpus(22, 30, 5) {
        let s = spec(&af, TreeKind::Ad, &[], &[]);
        assert!((0..=12).all(|d| alive_at_depth(&s, d).unwrap()));
    }
}

#[test]
fn attack_free_stable_tree_is_one_chain() {
    let af = FiniteAF::empty(3);
    let s = spec(&af, TreeKind::Stb, &[], &[]);
    assert_eq!(explore(&s, 3, 100).unwrap(), vec![vec![], vec![0], vec![0, 0], vec![0, 0, 0]]);
}

#[test]
fn liveness_is_antitone_and_settles_at_the_forced_depth() {
    for af in corpus(23, 150, 5) {
        for (kind, sigma) in KINDS {
            for a in 0..af.n_args() {
                let s = spec(&af, kind, &[a], &[]);
                let l = forced_depth(&af, kind);
                let alive: Vec<bool> = (0..=l + 4).map(|d| alive_at_depth(&s, d).unwrap()).collect();
                assert!(alive.windows(2).all(|w| w[0] || !w[1]), "{af} {kind} {a}");
                let truth = brute(&af, sigma).iter().any(|x| x.contains(&a));
                assert!(alive[l..].iter().all(|&b| b == truth), "{af} {kind} {a}");
            }
        }
    }
}

#[test]
fn explored_nodes_are_consistent() {
    for af in corpus(24, 60, 4) {
        for (kind, _) in KINDS {
            let s = spec(&af, kind, &[], &[]);
            let depth = forced_depth(&af, kind).min(10);
            for node in explore(&s, depth, 200_000).unwrap() {
                assert!(is_node(&s, &node).unwrap());
                let sets = ins_out_sets(&s, &node).unwrap();
                if kind != TreeKind::Co {
                    // node conditions speak about indices below the string length
                    let clash = sets.ins.intersection(&sets.outs).any(|&x| x < node.len());
                    assert!(!clash, "{af} {kind} {node:?}");
                }
                if let Some((_, prefix)) = node.split_last() {
                    let p = ins_out_sets(&s, prefix).unwrap();
                    assert!(p.ins.is_subset(&sets.ins) && p.outs.is_subset(&sets.outs));
                }
                // children labels stay within 1 + the largest relevant attacker
                let max_att = af.attacks().iter().map(|&(x, _)| x + 1).max().unwrap_or(0);
                for c in children(&s, &node).unwrap() {
                    assert!(*c.last().unwrap() <= max_att.max(1));
                    assert!(is_node(&s, &c).unwrap());
                }
            }
        }
    }
}

#[test]
fn stable_paths_attack_everything_outside() {
    for af in corpus(25, 150, 5) {
        let s = spec(&af, TreeKind::Stb, &[], &[]);
        let l = forced_depth(&af, TreeKind::Stb);
        for node in explore(&s, l, 100_000).unwrap().into_iter().filter(|x| x.len() == l) {
            let ext = decode(&s, &node);
            for j in 0..af.n_args() {
                assert!(ext.contains(&j) || ext.iter().any(|&x| af.attacks_pair(x, j)));
            }
        }
    }
}

#[test]
fn parameter_errors() {
    let af = f1();
    assert!(TreeSpec::finite(&af, TreeKind::Ad, set(&[0]), set(&[0])).is_err());
    assert!(TreeSpec::finite(&af, TreeKind::InfNa, set(&[0]), set(&[])).is_err());
    assert!(TreeSpec::finite(&af, TreeKind::Ad, set(&[5]), set(&[])).is_err());
    let na = TreeSpec::finite(&af, TreeKind::InfNa, set(&[]), set(&[])).unwrap();
    assert!(matches!(alive_at_depth(&na, 2), Err(AfError::Input(_))));
    assert!(extensions_via_tree(&af, TreeKind::InfNa, &set(&[]), &set(&[])).is_err());
}
