mod common;

use common::*;
use finitary_af::decide::*;
use finitary_af::finitary::*;
use finitary_af::trees::{forced_depth, TreeKind};
use finitary_af::{decide_finite, truncate, DecisionProblem, FinitaryAF, FiniteAF, SemanticsKind};
use proptest::prelude::*;

fn problems(n: usize) -> Vec<DecisionProblem> {
    let mut v = vec![DecisionProblem::Exists, DecisionProblem::Ne, DecisionProblem::Uni];
    for a in 0..n {
        v.push(DecisionProblem::Cred(a));
        v.push(DecisionProblem::Skep(a));
    }
    v
}

/// The stage by which every process on `af` has settled.
fn settle(af: &FiniteAF) -> usize {
    forced_depth(af, TreeKind::Ad).max(forced_depth(af, TreeKind::Stb))
}

/// Checks that every finite-semantics process agrees with the oracle from
/// stage L on; returns the number of processes checked.
fn agree(af: &FiniteAF) -> usize {
    let faf = FinitaryAF::from_finite(af);
    let l = settle(af);
    let mut count = 0;
    for sigma in SemanticsKind::FINITE {
        for p in problems(af.n_args()) {
            let truth = decide_finite(af, p, sigma).unwrap();
            let mut proc = anytime(&faf, sigma, p, Budgets::default()).unwrap();
            for s in [l, l + 1, l + 3] {
                let v = proc.jump(s).unwrap();
                let want = if truth { Answer::Accept } else { Answer::Reject };
                assert_eq!(v.answer, want, "{af} {sigma} {p} stage {s}: {}", v.evidence);
                assert!(!v.evidence.is_empty());
            }
            count += 1;
        }
    }
    count
}

#[test]
fn oracle_agreement_exhaustive_up_to_three_arguments() {
    let mut total = 0;
    for n in 0..=3 {
        for code in 0..1u64 << (n * n) {
            total += agree(&af_from_code(n, code));
        }
    }
    assert!(total > 0);
}

#[test]
fn oracle_agreement_random_up_to_six_arguments() {
    for af in corpus(31, 500, 6) {
        agree(&af);
    }
}

/// Class laws on step-by-step traces.
fn check_laws(v: &[Verdict]) {
    let cls = v[0].cls;
    assert!(v.iter().all(|x| x.cls == cls));
    for w in v.windows(2) {
        match cls {
            ConvergenceClass::Sigma1 => assert!(w[0].answer != Answer::Accept || w[1].answer == Answer::Accept),
            ConvergenceClass::Pi1 => assert!(w[0].answer != Answer::Reject || w[1].answer == Answer::Reject),
            ConvergenceClass::Computable => assert_eq!(w[0].answer, w[1].answer),
            _ => {}
        }
    }
}

#[test]
fn class_laws_on_random_traces() {
    for af in corpus(32, 120, 5) {
        let faf = FinitaryAF::from_finite(&af);
        for sigma in SemanticsKind::FINITE {
            for p in problems(af.n_args()) {
                let mut proc = anytime(&faf, sigma, p, Budgets::default()).unwrap();
                let v = proc.run(settle(&af) + 2).unwrap();
                check_laws(&v);
                let truth = decide_finite(&af, p, sigma).unwrap();
                assert_eq!(v.last().unwrap().answer == Answer::Accept, truth);
            }
        }
    }
}

#[test]
fn class_table() {
    use ConvergenceClass as C;
    use DecisionProblem as P;
    use SemanticsKind as S;
    let af = attack_free();
    let cases = [
        (S::Cf, P::Ne, C::Sigma1),
        (S::Cf, P::Uni, C::Pi1),
        (S::Na, P::Skep(0), C::Pi1),
        (S::Na, P::Uni, C::Pi1),
        (S::Ad, P::Cred(0), C::Pi1),
        (S::Ad, P::Ne, C::Sigma2),
        (S::Ad, P::Uni, C::Pi2),
        (S::Co, P::Skep(0), C::Sigma1),
        (S::Stb, P::Exists, C::Pi1),
        (S::Stb, P::Skep(0), C::Sigma1),
        (S::InfAd, P::Exists, C::USigma2),
        (S::InfAd, P::Skep(0), C::DSigma2),
        (S::InfStb, P::Exists, C::Pi2),
        (S::InfStb, P::Skep(0), C::Sigma2),
        (S::InfAd, P::Uni, C::Pi3),
        (S::InfStb, P::Uni, C::Pi3),
        (S::InfCo, P::Cred(0), C::USigma2),
        (S::InfCf, P::Uni, C::Computable),
        (S::InfNa, P::Exists, C::None),
    ];
    for (sigma, p, cls) in cases {
        assert_eq!(anytime(&af, sigma, p, Budgets::default()).unwrap().class(), cls, "{sigma} {p}");
    }
    assert!(anytime(&af, S::InfCo, P::Uni, Budgets::default()).is_err());
    assert!(anytime(&af, S::InfCo, P::Skep(0), Budgets::default()).is_err());
}

#[test]
fn cred_cf_matches_truncations() {
    for af in corpus(33, 500, 6) {
        let faf = FinitaryAF::from_finite(&af);
        for a in 0..af.n_args() {
            let fast = cred_cf_fast(&faf, a).unwrap();
            for n in a + 1..=af.n_args() {
                let t = truncate(&faf, n).unwrap();
                assert_eq!(fast, decide_finite(&t, DecisionProblem::Cred(a), SemanticsKind::Cf).unwrap());
            }
        }
    }
}

#[test]
fn naive_processes() {
    let v = skep_na_anytime(&FinitaryAF::from_finite(&f1()), 1).run(3).unwrap();
    assert_eq!(v[1].answer, Answer::Reject);
    assert_eq!(skep_na_anytime(&FinitaryAF::from_finite(&f2()), 0).step().unwrap().answer, Answer::Reject);
    assert!(skep_na_anytime(&attack_free(), 7).run(40).unwrap().iter().all(|v| v.answer == Answer::Accept));

    assert!(uni_na_anytime(&attack_free()).run(40).unwrap().iter().all(|v| v.answer == Answer::Accept));
    let v = uni_na_anytime(&FinitaryAF::from_finite(&f3())).run(2).unwrap();
    assert_eq!(v[1].answer, Answer::Reject);
    assert!(uni_na_anytime(&FinitaryAF::from_finite(&f2())).run(10).unwrap().iter().all(|v| v.answer == Answer::Accept));
}

#[test]
fn tree_process_examples() {
    let b = Budgets::default();
    let g = gadget_fig1(StageSet::finite([1, 2]));
    let v = tree_anytime(&g.af, SemanticsKind::Ad, DecisionProblem::Cred(g.idx("a_6")), b).unwrap().run(101).unwrap();
    assert!(v.iter().all(|x| x.answer == Answer::Accept));

    let v = tree_anytime(&g.af, SemanticsKind::Ad, DecisionProblem::Cred(g.idx("a_4")), b).unwrap().run(60).unwrap();
    check_laws(&v);
    // refutation depth of the a_4 tree, from a reference run
    assert_eq!(v.iter().position(|x| x.answer == Answer::Reject), Some(18));

    let v = tree_anytime(&FinitaryAF::from_finite(&f2()), SemanticsKind::Stb, DecisionProblem::Exists, b).unwrap().run(2).unwrap();
    assert_eq!(v[1].answer, Answer::Reject);

    let star = gadget_stars(StageSet::empty());
    let v = tree_anytime(&star.af, SemanticsKind::Stb, DecisionProblem::Skep(0), b).unwrap().run(20).unwrap();
    check_laws(&v);
    assert_eq!(v.last().unwrap().answer, Answer::Accept);

    let u = gadget_unistb("empty", |_| StageSet::empty());
    for i in 0..=5 {
        let v = tree_anytime(&u.af, SemanticsKind::Stb, DecisionProblem::Cred(u.idx(&format!("b_{i}"))), b).unwrap().run(40).unwrap();
        assert!(v.iter().all(|x| x.answer == Answer::Accept));
    }
}

#[test]
fn infco_streams_equal_infad_streams() {
    let b = Budgets::default();
    let gadgets = [
        gadget_fig1(StageSet::finite([1, 2])),
        gadget_fig1(StageSet::all()),
        gadget_stars(StageSet::all()),
    ];
    for g in gadgets {
        let ad = infad_anytime(&g.af, DecisionProblem::Exists, b).unwrap().run(30).unwrap();
        let co = infco_anytime(&g.af, DecisionProblem::Exists, b).unwrap().run(30).unwrap();
        assert_eq!(ad, co);
    }
}

#[test]
fn stars_have_infinite_admissible_sets() {
    let g = gadget_stars(StageSet::all());
    let v = infad_anytime(&g.af, DecisionProblem::Exists, Budgets::default()).unwrap().run(40).unwrap();
    assert!(v[10..].iter().all(|x| x.answer == Answer::Accept && x.evidence.starts_with("(A)")));
}

#[test]
fn infinite_conflict_free_trivia() {
    let spine = gadget_tree_cf("spine", |s: &[usize]| s.iter().all(|&c| c == 0));
    let v = infcf_trivia(&spine.af, SemanticsKind::InfCf, DecisionProblem::Cred(0), 10).unwrap();
    assert_eq!((v.answer, v.cls), (Answer::Unknown, ConvergenceClass::None));
    assert!(v.evidence.contains("size 10"), "{}", v.evidence);
    let v = infcf_trivia(&spine.af, SemanticsKind::InfCf, DecisionProblem::Uni, 3).unwrap();
    assert_eq!(v.answer, Answer::Reject);
    assert!(infcf_trivia(&spine.af, SemanticsKind::Ad, DecisionProblem::Uni, 3).is_err());
}

#[test]
fn y_probe_examples() {
    let b = Budgets::default();
    let none = set(&[]);
    let f1 = FinitaryAF::from_finite(&f1());
    assert_eq!(y_set_probe(&f1, SemanticsKind::Ad, &none, &none, 10, b).unwrap().members, set(&[0, 2]));

    let all = gadget_fig1(StageSet::all());
    for s in [0, 5, 10, 20, 40] {
        assert!(y_set_probe(&all.af, SemanticsKind::Ad, &none, &none, s, b).unwrap().members.is_empty());
    }
    let stars = gadget_stars(StageSet::all());
    let sizes: Vec<usize> = [5, 10, 20, 40]
        .iter()
        .map(|&s| y_set_probe(&stars.af, SemanticsKind::Ad, &none, &none, s, b).unwrap().members.len())
        .collect();
    assert!(sizes.windows(2).all(|w| w[1] > w[0]), "{sizes:?}");
    assert!(y_set_probe(&f1, SemanticsKind::Co, &none, &none, 3, b).is_err());
    assert!(y_set_probe(&f1, SemanticsKind::Ad, &set(&[0]), &set(&[0]), 3, b).is_err());
}

#[test]
fn budget_exhaustion_gives_unknown() {
    let g = gadget_fig1(StageSet::finite([1, 2]));
    let tiny = Budgets { nodes: 3, subsets: 3 };
    let v = tree_anytime(&g.af, SemanticsKind::Ad, DecisionProblem::Cred(g.idx("a_6")), tiny).unwrap().jump(30).unwrap();
    assert_eq!(v.answer, Answer::Unknown);
    assert!(!v.evidence.is_empty());
}

#[test]
fn out_of_range_arguments_are_rejected() {
    let f = FinitaryAF::from_finite(&f1());
    assert!(anytime(&f, SemanticsKind::Ad, DecisionProblem::Cred(3), Budgets::default()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn verdicts_serialize_as_json_lines(stage in 0usize..1000, a in 0u8..3, c in 0u8..9) {
        let answer = [Answer::Accept, Answer::Reject, Answer::Unknown][a as usize];
        let cls = [
            ConvergenceClass::Computable, ConvergenceClass::Sigma1, ConvergenceClass::Pi1,
            ConvergenceClass::Sigma2, ConvergenceClass::Pi2, ConvergenceClass::DSigma2,
            ConvergenceClass::USigma2, ConvergenceClass::Pi3, ConvergenceClass::None,
        ][c as usize];
        let v = Verdict { stage, answer, cls, evidence: "e".into() };
        let line = v.to_json_line();
        prop_assert!(!line.contains('\n'));
        let back: Verdict = serde_json::from_str(&line).unwrap();
        prop_assert_eq!(back, v);
        let j: serde_json::Value = serde_json::from_str(&line).unwrap();
        prop_assert_eq!(j["class"].as_str().unwrap(), cls.as_str());
    }

    #[test]
    fn skep_ad_is_always_false(seed in any::<u64>()) {
        let mut r = rng(seed);
        let af = random_af(&mut r, 5, 0.3);
        let faf = FinitaryAF::from_finite(&af);
        for a in 0..5 {
            let v = anytime(&faf, SemanticsKind::Ad, DecisionProblem::Skep(a), Budgets::default()).unwrap().step().unwrap();
            prop_assert_eq!(v.answer, Answer::Reject);
        }
    }
}
