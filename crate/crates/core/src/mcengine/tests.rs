use super::*;
use crate::exact::{int, ratio, to_f64};
use crate::ffield::{Field, FieldSpec, TraceClass};
use crate::transprod::{codim_dist_gl, sp_odd_class_dist, PairMode, SpClassLabel};

fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap()
}

#[test]
fn seeds_are_distinct_and_stable() {
    assert_ne!(derive_seed(1, 0), derive_seed(1, 1));
    assert_ne!(derive_seed(1, 0), derive_seed(2, 0));
    assert_eq!(derive_seed(42, 7), derive_seed(42, 7));
}

#[test]
fn runs_do_not_depend_on_thread_count() {
    let spec = GroupSpec::gu(2, 3).unwrap();
    let one = pool(1).install(|| mc_fixed_dim(&spec, 5000, 9).unwrap());
    let four = pool(4).install(|| mc_fixed_dim(&spec, 5000, 9).unwrap());
    assert_eq!(one, four);
    let spec = GroupSpec::sp(2, 3).unwrap();
    let a = pool(1).install(|| mc_transv_product(&spec, 3, 3000, 1, TransvectionPool::All).unwrap());
    let b = pool(3).install(|| mc_transv_product(&spec, 3, 3000, 1, TransvectionPool::All).unwrap());
    assert_eq!(a, b);
}

#[test]
fn merge_is_associative_and_matches_single_run() {
    let spec = GroupSpec::gl(3, 2).unwrap();
    let g = Group::new(spec).unwrap();
    let chunk = |i: u64| {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(5, i));
        let mut h = Histogram::empty(5);
        for _ in 0..CHUNK {
            let m = g.sample_uniform(&mut rng).unwrap();
            h.record(g.codim(&m));
        }
        h
    };
    let (a, b, c) = (chunk(0), chunk(1), chunk(2));
    let left = a.clone().merge(b.clone()).merge(c.clone());
    let right = a.merge(b.merge(c));
    assert_eq!(left, right);
    let whole = run_chunked(3 * CHUNK, 5, |rng| Ok(g.codim(&g.sample_uniform(rng)?))).unwrap();
    assert_eq!(left, whole);
    assert_eq!(whole.counts.values().sum::<u64>(), whole.total);
}

#[test]
fn zero_samples_and_single_steps() {
    let spec = GroupSpec::gu(2, 2).unwrap();
    let h = mc_fixed_dim(&spec, 0, 3).unwrap();
    assert_eq!(h.total, 0);
    assert!(h.counts.is_empty());
    for spec in [GroupSpec::gl(3, 3), GroupSpec::gu(3, 2), GroupSpec::sp(2, 5), GroupSpec::sp(3, 2)] {
        let spec = spec.unwrap();
        let h = mc_transv_product(&spec, 1, 500, 11, TransvectionPool::All).unwrap();
        assert_eq!(h.count(&1), 500, "{spec}");
    }
    assert!(mc_transv_product(&spec, 0, 10, 0, TransvectionPool::All).is_err());
}

#[test]
fn pair_oracle_examples() {
    let d = oracle_pair_exact(&GroupSpec::gl(2, 3).unwrap(), DEFAULT_PAIR_LIMIT).unwrap();
    assert_eq!(d.probs, [ratio(1, 8), ratio(1, 8), ratio(3, 4)]);
    let d = oracle_pair_exact(&GroupSpec::gu(2, 2).unwrap(), DEFAULT_PAIR_LIMIT).unwrap();
    assert_eq!(d.probs, [ratio(1, 3), int(0), ratio(2, 3)]);
    let d = oracle_pair_exact(&GroupSpec::sp(2, 2).unwrap(), DEFAULT_PAIR_LIMIT).unwrap();
    assert_eq!(d.probs, [ratio(1, 15), int(0), ratio(14, 15)]);
    let d = oracle_pair_exact(&GroupSpec::gl(2, 2).unwrap(), DEFAULT_PAIR_LIMIT).unwrap();
    assert_eq!(d.probs, codim_dist_gl(2, 2).unwrap().probs);
    assert!(matches!(
        oracle_pair_exact(&GroupSpec::gl(3, 3).unwrap(), 100),
        Err(Error::LimitExceeded { .. })
    ));
}

#[test]
fn class_oracle_examples() {
    let d = oracle_sp_class_exact(2, 3, PairMode::PairsFromC, DEFAULT_PAIR_LIMIT).unwrap();
    let want = [(SpClassLabel::A22, ratio(2, 80)), (SpClassLabel::A32, ratio(24, 80)), (SpClassLabel::D22, ratio(54, 80))];
    assert_eq!(d.probs, want.into_iter().collect());
    let d = oracle_sp_class_exact(2, 5, PairMode::PairsFromC, DEFAULT_PAIR_LIMIT).unwrap();
    assert_eq!(d.probs, sp_odd_class_dist(2, 5).unwrap().probs);
    let d = oracle_sp_class_exact(2, 3, PairMode::AllTransvections, DEFAULT_PAIR_LIMIT).unwrap();
    assert_eq!(d.codim_marginal(), [ratio(1, 80), ratio(1, 80), ratio(78, 80)]);
    assert!(oracle_sp_class_exact(1, 3, PairMode::PairsFromC, DEFAULT_PAIR_LIMIT).is_err());
    assert!(oracle_sp_class_exact(2, 4, PairMode::PairsFromC, DEFAULT_PAIR_LIMIT).is_err());
}

#[test]
fn lemma_oracles() {
    assert_eq!(brute_adjacent_squares(&Field::new(13, 1)), 2);
    assert_eq!(brute_adjacent_squares(&Field::new(3, 2)), crate::ffield::count_adjacent_squares(&Field::new(3, 2)).unwrap());
    let census = brute_sq2_census(&FieldSpec::new(7).unwrap()).unwrap();
    let split = census.iter().filter(|(_, c)| matches!(c, TraceClass::Split(_))).count();
    assert_eq!((split, census.len() - split), (1, 1));
}

#[test]
fn fixed_dim_statistics() {
    let h = mc_fixed_dim(&GroupSpec::gu(2, 2).unwrap(), 100_000, 17).unwrap();
    assert!(h.within(&1, 7.0 / 18.0, 3.0), "{}", h.frequency(&1));
    let h = mc_fixed_dim(&GroupSpec::sp(1, 3).unwrap(), 100_000, 17).unwrap();
    assert!(h.within(&1, 1.0 / 3.0, 3.0), "{}", h.frequency(&1));
}

#[test]
fn uniform_sampler_goodness_of_fit() {
    use statrs::distribution::{ChiSquared, ContinuousCDF};
    let spec = GroupSpec::gu(2, 2).unwrap();
    let g = Group::new(spec).unwrap();
    let elements = g.elements(1000).unwrap();
    let h = run_chunked(36_000, 23, |rng| {
        let m = g.sample_uniform(rng)?;
        Ok(elements.iter().position(|e| *e == m).expect("sample is a group element"))
    })
    .unwrap();
    let expected = h.total as f64 / elements.len() as f64;
    let stat: f64 = (0..elements.len()).map(|i| (h.count(&i) as f64 - expected).powi(2) / expected).sum();
    let p = 1.0 - ChiSquared::new((elements.len() - 1) as f64).unwrap().cdf(stat);
    assert!(p > 1e-3, "chi-square {stat}, p = {p}");
}

#[test]
fn gl_pair_statistics() {
    let spec = GroupSpec::gl(3, 2).unwrap();
    let exact = codim_dist_gl(3, 2).unwrap();
    let h = mc_transv_product(&spec, 2, 100_000, 99, TransvectionPool::Designated).unwrap();
    for e in 0..3 {
        assert!(h.within(&e, to_f64(exact.get(e)), 3.0), "codim {e}: {}", h.frequency(&e));
    }
}

#[test]
fn quick_suite_passes_and_mutation_is_caught() {
    let report = verify(Level::Quick, None);
    let failures: Vec<_> = report.failures().collect();
    assert!(report.passed, "{failures:#?}");
    assert_eq!(report.schema_version, SCHEMA_VERSION);
    let mutated = verify(Level::Quick, Some(Mutation::GlPairCoefficient));
    assert!(!mutated.passed);
    let names: Vec<_> = mutated.failures().map(|c| c.name.as_str()).collect();
    assert!(names.iter().all(|n| n.starts_with("codim_dist_gl vs oracle_pair_exact")), "{names:?}");
    assert!(names.contains(&"codim_dist_gl vs oracle_pair_exact (gl(n=2, q=3))"));
}
