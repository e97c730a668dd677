use num_traits::{One, Zero};
use proptest::prelude::*;
use weilmix::clgroups::{Group, GroupSpec};
use weilmix::cli::{sig12, Rounding};
use weilmix::exact::{int, ratio, Rat};
use weilmix::ffield::{Fe, FieldSpec};
use weilmix::fixdist::fixed_space_distribution;
use weilmix::mcengine::Histogram;
use weilmix::mixbounds::{chebyshev_from, lower_closed, upper_closed, Offset};
use weilmix::transprod::{codim_dist_gl, codim_dist_gu, codim_dist_sp, sp_odd_class_dist_mode, PairMode};
use weilmix::weilchar::{WeilScalar, WeilVariant};

const QS: [u64; 10] = [2, 3, 4, 5, 7, 8, 9, 11, 25, 27];
const ODD_QS: [u64; 6] = [3, 5, 7, 9, 11, 13];

fn rat() -> impl Strategy<Value = Rat> {
    (-50i64..50, 1i64..20).prop_map(|(n, d)| ratio(n, d))
}

fn scalar(q: u64) -> impl Strategy<Value = WeilScalar> {
    let kappa = if q % 4 == 3 { -1 } else { 1 };
    (rat(), rat()).prop_map(move |(a, b)| WeilScalar::new(a, b, kappa, q))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn field_laws(qi in 0..QS.len(), a in 0u32..1024, b in 0u32..1024, c in 0u32..1024) {
        let fs = FieldSpec::new(QS[qi]).unwrap();
        let f = fs.ext();
        let n = f.size();
        let (a, b, c) = (Fe(a % n), Fe(b % n), Fe(c % n));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(f.sub(a, b), b), a);
        if a != f.zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
        }
        // Frobenius is additive and multiplicative, and fixes exactly the base field
        prop_assert_eq!(fs.frobenius(f.add(a, b)), f.add(fs.frobenius(a), fs.frobenius(b)));
        prop_assert_eq!(fs.frobenius(a) == a, fs.restrict(a).is_some());
    }

    #[test]
    fn weil_scalars_form_a_ring(qi in 0..ODD_QS.len(), x in scalar(5), y in scalar(5), z in scalar(5)) {
        let q = ODD_QS[qi];
        let k = if q % 4 == 3 { -1 } else { 1 };
        let re = |s: &WeilScalar| WeilScalar::new(s.a.clone(), s.b.clone(), k, q);
        let (x, y, z) = (re(&x), re(&y), re(&z));
        let lhs = x.mul(&y.add(&z).unwrap()).unwrap();
        let rhs = x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
        prop_assert_eq!(x.conj().conj(), x.clone());
        let n = x.abs_sq();
        prop_assert_ne!(n.real_sign(), Some(-1));
        if k == -1 {
            prop_assert!(n.is_rational());
        }
        prop_assert_eq!(x.pow(3), x.mul(&x).unwrap().mul(&x).unwrap());
        prop_assert_eq!(x.pow(0), WeilScalar::one(q));
    }

    #[test]
    fn pair_distributions_are_distributions(n in 1usize..9, qi in 0..QS.len()) {
        let q = QS[qi];
        let mut ds = vec![codim_dist_gl(n.max(2), q).unwrap(), codim_dist_gu(n.max(2), q).unwrap(), codim_dist_sp(n, q).unwrap()];
        if q % 2 == 1 && n >= 2 {
            for mode in [PairMode::PairsFromC, PairMode::PairsFromCStar, PairMode::AllTransvections] {
                let d = sp_odd_class_dist_mode(n, q, mode).unwrap();
                prop_assert_eq!(d.total(), Rat::one());
                let marginal = d.codim_marginal();
                if mode == PairMode::AllTransvections {
                    prop_assert_eq!(&marginal, &ds[2].probs);
                }
                ds.push(weilmix::transprod::CodimDistribution { probs: marginal });
            }
        }
        for d in ds {
            prop_assert_eq!(d.total(), Rat::one());
            prop_assert!(d.probs.iter().all(|p| *p >= Rat::zero()));
        }
    }

    #[test]
    fn fixed_space_distributions_sum_to_one(n in 1usize..12, qi in 0..QS.len()) {
        let q = QS[qi];
        for spec in [GroupSpec::gu(n, q).unwrap(), GroupSpec::sp(n, q).unwrap()] {
            let d = fixed_space_distribution(&spec).unwrap();
            prop_assert_eq!(d.probs.iter().sum::<Rat>(), Rat::one());
            prop_assert!(d.probs.iter().all(|p| *p >= Rat::zero()));
            // only the identity fixes everything
            let top = d.probs.last().unwrap().clone();
            prop_assert_eq!(top * d.counts().iter().sum::<Rat>(), Rat::one());
        }
    }

    #[test]
    fn closed_bounds_are_monotone(n in 3usize..40, qi in 0..QS.len(), c in 1i64..6) {
        let q = QS[qi];
        let mut specs = vec![(GroupSpec::gl(n, q).unwrap(), WeilVariant::GLWeil), (GroupSpec::gu(n, q).unwrap(), WeilVariant::GUWeil)];
        let sp = GroupSpec::sp(n, q).unwrap();
        specs.push((sp, WeilVariant::default_for(sp.family)));
        for (spec, v) in specs {
            let a = upper_closed(&spec, v, Offset::whole(c)).unwrap();
            let b = upper_closed(&spec, v, Offset::whole(c + 1)).unwrap();
            prop_assert!(b.value_sq < a.value_sq);
            prop_assert_eq!(b.r, a.r + 1);
            if let (Ok(lo), Ok(lo2)) = (lower_closed(&spec, v, Offset::whole(c)), lower_closed(&spec, v, Offset::whole(c + 1))) {
                prop_assert!(lo.value <= 1.0 && lo.value >= 0.0);
                prop_assert!(lo2.value >= lo.value);
            }
        }
    }

    #[test]
    fn chebyshev_is_a_probability(m in -10.0f64..1e6, v in 0.0f64..1e6, t in proptest::option::of(0.01f64..1e6)) {
        let b = chebyshev_from(m, v, t);
        prop_assert!((0.0..=1.0).contains(&b));
        if m <= 1.0 {
            prop_assert_eq!(b, 0.0);
        }
    }

    #[test]
    fn offsets_round_trip(t in -40i64..40) {
        let o = Offset::halves(t);
        let back: Offset = o.to_string().parse().unwrap();
        prop_assert_eq!(back, o);
        prop_assert_eq!(o.twice(), t);
    }

    #[test]
    fn twelve_digit_rendering_brackets(x in proptest::num::f64::NORMAL) {
        let up: f64 = sig12(x, Rounding::Up).parse().unwrap();
        let down: f64 = sig12(x, Rounding::Down).parse().unwrap();
        let near: f64 = sig12(x, Rounding::Nearest).parse().unwrap();
        prop_assert!(down <= x && x <= up);
        prop_assert!(((near - x) / x).abs() < 1e-11);
    }

    #[test]
    fn histogram_merge_is_associative(a in proptest::collection::vec(0usize..5, 0..50),
                                      b in proptest::collection::vec(0usize..5, 0..50),
                                      c in proptest::collection::vec(0usize..5, 0..50)) {
        let h = |v: &[usize]| {
            let mut h = Histogram::empty(1);
            for &k in v {
                h.record(k);
            }
            h
        };
        let (x, y, z) = (h(&a), h(&b), h(&c));
        let left = x.clone().merge(y.clone()).merge(z.clone());
        prop_assert_eq!(&left, &x.merge(y.merge(z)));
        prop_assert_eq!(left.counts.values().sum::<u64>(), left.total);
        prop_assert_eq!(left.total as usize, a.len() + b.len() + c.len());
    }

    #[test]
    fn sampled_elements_preserve_the_form(qi in 0..4usize, n in 2usize..4, seed in any::<u64>()) {
        use rand::SeedableRng;
        let q = [2u64, 3, 4, 5][qi];
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        for spec in [GroupSpec::gu(n, q).unwrap(), GroupSpec::sp(n, q).unwrap()] {
            let g = Group::new(spec).unwrap();
            let m = g.sample_uniform(&mut rng).unwrap();
            prop_assert!(g.preserves_form(&m));
            let (t, _) = g.sample_any_transvection(&mut rng).unwrap();
            prop_assert!(g.preserves_form(&t));
            prop_assert_eq!(g.codim(&t), 1);
        }
    }
}

#[test]
fn integer_helpers() {
    assert_eq!(int(3) / int(6), ratio(1, 2));
}
