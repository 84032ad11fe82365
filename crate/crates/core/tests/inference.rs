mod common;

use asr_fis::fuzzy::{rule_strength, Connective, Engine, FuzzyRule};
use asr_fis::{infer, speech_accuracy_fis, DEFAULT_RESOLUTION};
use proptest::prelude::*;

use common::{clipped_centroid, SplitMix, ORACLE_POINTS};

#[test]
fn full_membership_point_matches_brute_force_centroid() {
    let fis = speech_accuracy_fis();
    let trace = infer(&fis, &[50.0, 255.0, 50.0]).unwrap();
    assert!(trace.fired);
    assert_eq!(trace.rule_strengths, vec![0.5, 0.75, 1.0, 0.5, 0.5]);
    let oracle = clipped_centroid(0.5, 1.0, ORACLE_POINTS).unwrap();
    assert!((trace.crisp() - oracle).abs() < 1e-4, "{} vs {oracle}", trace.crisp());
}

#[test]
fn higher_clean_degree_raises_accuracy() {
    let fis = speech_accuracy_fis();
    let at50 = infer(&fis, &[50.0, 255.0, 50.0]).unwrap().crisp();
    let at45 = infer(&fis, &[45.0, 255.0, 50.0]).unwrap().crisp();
    assert!(at50 >= at45);
    let o50 = common::crisp(50.0, 255.0, 50.0, ORACLE_POINTS);
    let o45 = common::crisp(45.0, 255.0, 50.0, ORACLE_POINTS);
    assert!(o50 >= o45);
    assert!((at45 - o45).abs() < 1e-3);
}

#[test]
fn random_inputs_track_oracle() {
    let fis = speech_accuracy_fis();
    let engine = Engine::new(&fis, DEFAULT_RESOLUTION).unwrap();
    let mut rng = SplitMix(7);
    for _ in 0..200 {
        let (e, w, o) = (
            rng.uniform(10.0, 50.0),
            rng.uniform(240.0, 270.0),
            rng.uniform(20.0, 60.0),
        );
        let got = engine.infer(&[e, w, o]).unwrap().crisp();
        let want = common::crisp(e, w, o, ORACLE_POINTS);
        assert!((got - want).abs() < 1e-3, "({e}, {w}, {o}): {got} vs {want}");
    }
}

#[test]
fn centroid_is_stable_across_resolutions() {
    let fis = speech_accuracy_fis();
    let coarse = Engine::new(&fis, 1001).unwrap();
    let fine = Engine::new(&fis, 10_001).unwrap();
    let axis = |lo: f64, hi: f64| (0..10).map(move |i| lo + (hi - lo) * f64::from(i) / 9.0);
    let mut worst = 0.0f64;
    for e in axis(10.0, 50.0) {
        for w in axis(240.0, 270.0) {
            for o in axis(20.0, 60.0) {
                let a = coarse.infer(&[e, w, o]).unwrap().crisp();
                let b = fine.infer(&[e, w, o]).unwrap().crisp();
                worst = worst.max((a - b).abs());
            }
        }
    }
    assert!(worst < 1e-3, "max deviation {worst}");
}

#[test]
fn engine_is_shareable_across_threads() {
    let fis = speech_accuracy_fis();
    let engine = Engine::new(&fis, DEFAULT_RESOLUTION).unwrap();
    let inputs = [[47.0, 254.0, 48.0], [30.0, 250.0, 45.0], [15.0, 240.0, 20.0]];
    let serial: Vec<_> = inputs.iter().map(|x| engine.infer(x).unwrap()).collect();
    let parallel: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = inputs.iter().map(|x| s.spawn(|| engine.infer(x).unwrap())).collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    assert_eq!(serial, parallel);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn crisp_stays_in_output_range(e in -100.0f64..200.0, w in 100.0f64..400.0, o in -50.0f64..150.0) {
        let fis = speech_accuracy_fis();
        let trace = infer(&fis, &[e, w, o]).unwrap();
        prop_assert!((95.0..=100.0).contains(&trace.crisp()));
        prop_assert_eq!(trace.fired, trace.rule_strengths.iter().any(|&s| s > 0.0));
        if !trace.fired {
            prop_assert_eq!(trace.crisp(), 97.5);
        }
        for d in trace.degrees.iter().flatten() {
            prop_assert!((0.0..=1.0).contains(d));
        }
    }

    #[test]
    fn lowering_weight_never_raises_strength(
        degrees in prop::collection::vec(prop::collection::vec(0.0f64..=1.0, 3), 3),
        ante in prop::collection::vec(0usize..=3, 3),
        weight in 0.01f64..=1.0,
        scale in 0.0f64..=1.0,
        or in any::<bool>(),
    ) {
        prop_assume!(ante.iter().any(|&i| i != 0));
        let conn = if or { Connective::Or } else { Connective::And };
        let rule = FuzzyRule::new(ante.clone(), vec![1], weight, conn);
        let lighter = FuzzyRule::new(ante, vec![1], weight * scale, conn);
        prop_assert!(rule_strength(&lighter, &degrees) <= rule_strength(&rule, &degrees));
    }

    #[test]
    fn dont_care_inputs_do_not_change_strength(
        degrees in prop::collection::vec(prop::collection::vec(0.0f64..=1.0, 3), 4),
        ante in prop::collection::vec(0usize..=3, 3),
        weight in 0.01f64..=1.0,
        or in any::<bool>(),
    ) {
        prop_assume!(ante.iter().any(|&i| i != 0));
        let conn = if or { Connective::Or } else { Connective::And };
        let base = FuzzyRule::new(ante.clone(), vec![1], weight, conn);
        let mut padded = ante;
        padded.push(0);
        let extended = FuzzyRule::new(padded, vec![1], weight, conn);
        prop_assert_eq!(rule_strength(&base, &degrees[..3]), rule_strength(&extended, &degrees));
    }
}
