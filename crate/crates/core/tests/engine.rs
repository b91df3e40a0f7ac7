use divergence_core::fixtures::{continuous_fixtures, discrete_corpus, non_ac_fixtures, random_non_ac_pair};
use divergence_core::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn fin(v: ExtendedReal) -> f64 {
    v.finite().expect("finite value")
}

fn check_trace(est: &CertifiedEstimate) {
    let oracle = est.oracle.to_f64();
    let mut prev = f64::NEG_INFINITY;
    for s in &est.trace.steps {
        let v = s.partition_value.to_f64();
        assert!(v >= prev - 1e-12, "step {} dropped: {} < {}", s.step, v, prev);
        assert!(v <= oracle + 1e-9, "step {} above oracle", s.step);
        prev = v;
    }
}

#[test]
fn shipped_fixtures_converge_within_budget() {
    let cfg = RefinementConfig::default();
    for f in continuous_fixtures() {
        for a in [1.5, 2.0, 3.0] {
            let est = supremum_estimate(&f.p, &f.r, &OrderParam::renyi(a).unwrap(), &cfg).unwrap();
            check_trace(&est);
            assert!(est.gap <= 1e-4, "{} alpha {a}: gap {}", f.name, est.gap);
            assert!(est.cells() <= 4096);
        }
    }
}

#[test]
fn beta_sweep_matches_closed_forms() {
    let p = ProbabilityMeasure::beta(2, 2).unwrap();
    let r = ProbabilityMeasure::uniform(0.0, 1.0).unwrap();
    let ests = run_alpha_sweep(&p, &r, &[2.0, 3.0], &RefinementConfig::default()).unwrap();
    assert!((fin(ests[0].oracle) - 1.2f64.ln()).abs() < 1e-10);
    assert!((fin(ests[1].oracle) - 0.5 * (216.0f64 / 140.0).ln()).abs() < 1e-10);
    assert!(fin(ests[0].lower_bound) <= fin(ests[1].lower_bound));
}

#[test]
fn equal_measures_sweep_to_zero() {
    let p = ProbabilityMeasure::beta(3, 2).unwrap();
    for est in run_alpha_sweep(&p, &p, &[1.5, 2.0, 4.0], &RefinementConfig::default()).unwrap() {
        assert!(fin(est.lower_bound).abs() < 1e-12);
        assert!(est.converged);
    }
}

#[test]
fn discrete_corpus_is_solved_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let cfg = RefinementConfig::default();
    let quad = QuadratureConfig::default();
    for f in discrete_corpus(&mut rng, 40) {
        for order in [OrderParam::kl(), OrderParam::renyi(2.0).unwrap(), OrderParam::tsallis(3.0).unwrap()] {
            let est = supremum_estimate(&f.p, &f.r, &order, &cfg).unwrap();
            let direct = fin(divergence(&f.p, &f.r, &order, &quad).unwrap());
            assert!((fin(est.lower_bound) - direct).abs() <= 1e-12, "{}", f.name);
            assert_eq!(est.stop_reason, StopReason::Singletons);
            assert_eq!(est.cells(), f.p.base().atoms().unwrap().len());
        }
    }
}

#[test]
fn non_ac_pairs_report_witnesses() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut pairs = non_ac_fixtures();
    pairs.extend((0..20).map(|_| random_non_ac_pair(&mut rng, 8)));
    let cfg = RefinementConfig {
        max_cells: 2,
        ..RefinementConfig::default()
    };
    for f in pairs {
        let est = supremum_estimate(&f.p, &f.r, &OrderParam::renyi(2.0).unwrap(), &cfg).unwrap();
        assert_eq!(est.lower_bound, ExtendedReal::PosInf);
        let w = est.witness.expect("witness");
        let pair = MeasurePair::new(&f.p, &f.r).unwrap();
        let (pm, rm) = pair.masses(&w).unwrap();
        assert!(pm > 0.0 && rm == 0.0, "{}", f.name);
    }
}

#[test]
fn strategies_all_give_certified_bounds() {
    let f = &continuous_fixtures()[4];
    for strategy in [SplitStrategy::Midpoint, SplitStrategy::MassMedian, SplitStrategy::PhiLevel] {
        let cfg = RefinementConfig {
            split_strategy: strategy,
            max_cells: 256,
            ..RefinementConfig::default()
        };
        let est = supremum_estimate(&f.p, &f.r, &OrderParam::kl(), &cfg).unwrap();
        check_trace(&est);
    }
}

#[test]
fn repeated_runs_are_identical() {
    let f = &continuous_fixtures()[8];
    let cfg = RefinementConfig::default();
    let a = supremum_estimate(&f.p, &f.r, &OrderParam::renyi(2.0).unwrap(), &cfg).unwrap();
    let b = supremum_estimate(&f.p, &f.r, &OrderParam::renyi(2.0).unwrap(), &cfg).unwrap();
    assert_eq!(a.trace, b.trace);
}
