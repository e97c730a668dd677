use super::*;
use crate::clgroups::DEFAULT_ENUM_LIMIT;
use crate::exact::{neg_qpow, sign};
use crate::weilchar::{weil_degree, weil_value_by_codim};

fn chain(family: Family, n: usize, q: u64, r: u64) -> ChainSpec {
    ChainSpec::standard(GroupSpec::new(family, n, q).unwrap(), r)
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

#[test]
fn charbound_examples() {
    assert_eq!(charbound_sum(&chain(Family::SpOdd, 1, 3, 3)).unwrap(), ratio(231, 729));
    assert_eq!(charbound_sum(&chain(Family::GU, 1, 2, 2)).unwrap(), ratio(1, 8));
    for c in [chain(Family::GU, 3, 3, 0), chain(Family::SpEven, 2, 4, 0), chain(Family::GL, 2, 3, 0)] {
        assert_eq!(charbound_sum(&c).unwrap(), from_big(&group_order(&c.group)) - int(1));
    }
    assert!(matches!(charbound_sum(&chain(Family::GL, 5, 5, 3)), Err(Error::LimitExceeded { .. })));
}

/// The same sum straight from enumerated elements and the character values.
#[test]
fn charbound_matches_enumeration() {
    let cases = [
        (GroupSpec::sp(1, 3).unwrap(), WeilVariant::SpOddWeil),
        (GroupSpec::sp(1, 5).unwrap(), WeilVariant::SpOddWeil),
        (GroupSpec::gu(2, 2).unwrap(), WeilVariant::GUWeil),
        (GroupSpec::gu(3, 2).unwrap(), WeilVariant::GUWeil),
        (GroupSpec::sp(2, 2).unwrap(), WeilVariant::SpEvenUnitary),
        (GroupSpec::gl(3, 2).unwrap(), WeilVariant::GLWeil),
    ];
    for (spec, variant) in cases {
        let g = Group::new(spec).unwrap();
        let d = from_big(&weil_degree(&spec, variant).unwrap());
        let els = g.elements(DEFAULT_ENUM_LIMIT).unwrap();
        for r in 0..4u64 {
            let mut want = Rat::zero();
            for m in els.iter().filter(|m| !m.is_identity()) {
                let v = weil_value_by_codim(&spec, variant, g.codim(m)).unwrap();
                let x = v.abs_sq().to_rational().unwrap() / (&d * &d);
                want += num_traits::pow(x, r as usize);
            }
            let got = charbound_sum(&ChainSpec::new(spec, variant, r).unwrap()).unwrap();
            assert_eq!(got, want, "{spec} {variant} r={r}");
        }
    }
}

#[test]
fn upper_closed_examples() {
    let gu = GroupSpec::gu(4, 3).unwrap();
    let u = upper_closed(&gu, WeilVariant::GUWeil, Offset::whole(2)).unwrap();
    assert!(close(u.value, 0.7 / 9.0, 1e-12) && u.value >= 0.7 / 9.0);
    assert_eq!(u.r, 6);
    let so = GroupSpec::sp(3, 3).unwrap();
    let u = upper_closed(&so, WeilVariant::SpOddWeil, Offset::whole(2)).unwrap();
    assert!(close(u.value, 1.0 / (2.0 * 8f64.sqrt()), 1e-12));
    assert_eq!((u.r, u.value_sq.clone()), (8, ratio(1, 32)));
    let se = GroupSpec::sp(3, 2).unwrap();
    let u = upper_closed(&se, WeilVariant::SpEvenLinear, Offset::whole(1)).unwrap();
    assert!(close(u.value, 0.28868, 1e-5));
    assert_eq!(u.r, 4);
    let gl = GroupSpec::gl(3, 2).unwrap();
    assert_eq!(upper_closed(&gl, WeilVariant::GLWeil, Offset::whole(3)).unwrap().value, 1.0 / 16.0);
    assert!(upper_closed(&gl, WeilVariant::GLWeil, Offset::whole(0)).is_err());
    assert!(upper_closed(&gl, WeilVariant::GLWeil, Offset::halves(3)).is_err());
}

#[test]
fn lower_closed_examples() {
    let gl = GroupSpec::gl(5, 3).unwrap();
    // 1 − 11.25·3^{−2} − 18·3^{−1} is vacuous
    let l = lower_closed(&gl, WeilVariant::GLWeil, Offset::whole(2)).unwrap();
    assert_eq!((l.value, l.r), (0.0, 3));
    let gl9 = GroupSpec::gl(9, 3).unwrap();
    let l = lower_closed(&gl9, WeilVariant::GLWeil, Offset::whole(4)).unwrap();
    assert!(close(l.value, 1.0 - 11.25 / 729.0 - 18.0 / 27.0, 1e-12));
    assert_eq!(l.r, 5);
    let gu = GroupSpec::gu(50, 9).unwrap();
    let l = lower_closed(&gu, WeilVariant::GUWeil, Offset::whole(4)).unwrap();
    assert!(close(l.value, 0.9780, 1e-4) && l.r == 46);
    let se = GroupSpec::sp(4, 4).unwrap();
    let l = lower_closed(&se, WeilVariant::SpEvenLinear, Offset::whole(2)).unwrap();
    assert!(close(l.value, 0.5625, 1e-12) && l.value <= 0.5625);
    // clamped at zero when vacuous
    assert_eq!(lower_closed(&gl, WeilVariant::GLWeil, Offset::whole(1)).unwrap().value, 0.0);
    assert!(lower_closed(&GroupSpec::gu(2, 3).unwrap(), WeilVariant::GUWeil, Offset::whole(1)).is_err());
}

#[test]
fn half_integer_offsets() {
    let s = GroupSpec::sp(6, 5).unwrap();
    let l = lower_closed(&s, WeilVariant::SpOddWeil, Offset::halves(3)).unwrap();
    assert_eq!(l.r, 9);
    let want = 1.0 - 32.0 * 5f64.powf(-3.0) - 8.0 * 5f64.powf(-1.5);
    assert!(close(l.value, want, 1e-12) && l.value <= want);
    let s3 = GroupSpec::sp(6, 3).unwrap();
    assert!(matches!(lower_closed(&s3, WeilVariant::SpOddWeil, Offset::halves(3)), Err(Error::Parity(_))));
    assert_eq!(lower_closed(&s3, WeilVariant::SpOddWeil, Offset::whole(2)).unwrap().r, 8);
    assert!(lower_closed(&GroupSpec::gl(5, 3).unwrap(), WeilVariant::GLWeil, Offset::halves(3)).is_err());
    assert_eq!("1.5".parse::<Offset>().unwrap(), Offset::halves(3));
    assert_eq!("3/2".parse::<Offset>().unwrap(), Offset::halves(3));
    assert_eq!("2".parse::<Offset>().unwrap(), Offset::whole(2));
    assert!("1.25".parse::<Offset>().is_err());
    assert_eq!(Offset::halves(3).to_string(), "1.5");
}

/// `√(sum)/2 ≤ closed-form upper bound`, compared exactly after squaring.
#[test]
fn char_sum_dominated_by_closed_form() {
    for n in 1..=6usize {
        for q in [2u64, 3, 4, 5, 7, 9] {
            let mut specs = vec![(GroupSpec::gu(n, q).unwrap(), WeilVariant::GUWeil)];
            if q % 2 == 1 {
                specs.push((GroupSpec::sp(n, q).unwrap(), WeilVariant::SpOddWeil));
            } else {
                specs.push((GroupSpec::sp(n, q).unwrap(), WeilVariant::SpEvenLinear));
                specs.push((GroupSpec::sp(n, q).unwrap(), WeilVariant::SpEvenUnitary));
            }
            for (spec, variant) in specs {
                let counts = codim_counts(&spec).unwrap();
                for c in 1..=3 {
                    let u = upper_closed(&spec, variant, Offset::whole(c)).unwrap();
                    let ch = ChainSpec::new(spec, variant, u.r).unwrap();
                    let sum = charbound_from_counts(&ch, &counts).unwrap();
                    assert!(sum <= int(4) * &u.value_sq, "{spec} {variant} c={c}: {} > {}", to_f64(&sum), to_f64(&(int(4) * &u.value_sq)));
                }
            }
        }
    }
}

#[test]
fn moment_examples() {
    let m = moments(&chain(Family::GL, 2, 3, 1)).unwrap();
    assert_eq!(m.variance.to_rational().unwrap(), ratio(10, 9));
    assert_eq!(m.mean_sq, ratio(8, 9));
    assert!(close(m.mean, 0.9428, 1e-4));
    let m = moments(&chain(Family::SpEven, 2, 2, 1)).unwrap();
    assert_eq!(m.variance.to_rational().unwrap(), ratio(3, 4));
    assert!(close(m.mean, 15f64.sqrt() / 2.0, 1e-12));
    for c in [chain(Family::GU, 3, 3, 0), chain(Family::SpOdd, 2, 5, 0), chain(Family::SpOdd, 3, 7, 0)] {
        let m = moments(&c).unwrap();
        assert!(m.variance.a.is_zero() && m.variance.b.is_zero());
        assert_eq!(m.mean_sign, 1);
    }
    assert!(matches!(moments(&chain(Family::SpOdd, 2, 3, 3)), Err(Error::Parity(_))));
}

#[test]
fn moments_across_the_grid() {
    for n in 2..=6usize {
        for q in [2u64, 3, 4, 5, 7, 9, 13] {
            let mut chains = vec![chain(Family::GL, n, q, 0), chain(Family::GU, n, q, 0)];
            let sp = GroupSpec::sp(n, q).unwrap();
            chains.push(ChainSpec::standard(sp, 0));
            if q % 2 == 0 {
                chains.push(ChainSpec::new(sp, WeilVariant::SpEvenUnitary, 0).unwrap());
            }
            for base in chains {
                for r in 0..=(2 * n as u64 + 3) {
                    let c = ChainSpec { r, ..base };
                    let m = match moments(&c) {
                        Err(Error::Parity(_)) => continue,
                        other => other.unwrap(),
                    };
                    assert!(m.variance.real_sign().unwrap() >= 0, "{c:?}");
                    assert!(m.terms.one.is_rational() && m.terms.one.a == int(1), "{c:?}");
                    let ch = chebyshev_from(m.mean_abs_lower(), m.variance_upper, None);
                    assert!((0.0..=1.0).contains(&ch));
                    if m.mean_abs_lower() <= 1.0 {
                        assert_eq!(ch, 0.0);
                    }
                }
            }
        }
    }
}

/// Term-by-term comparison with the hand-derived decompositions.
#[test]
fn variance_decompositions() {
    let qr = |q: u64, e: i64| qpow(q, e);
    for n in 2..=6i64 {
        for q in [2u64, 3, 4, 5, 7, 9] {
            let qq = int(q as i64);
            for r in 0..=2 * n + 2 {
                // GL
                let m = moments(&chain(Family::GL, n as usize, q, r as u64)).unwrap();
                let t1 = qr(q, -r) * (int(2) * qr(q, n) - int(2) * qr(q, n - 1) - &qq * &qq - &qq + int(2)) / (&qq - int(1));
                let t2 = qr(q, -2 * r) * (qr(q, 2 * n - 1) - int(3) * qr(q, n) + qr(q, n - 1) + &qq * &qq) / (&qq - int(1));
                let t3 = qr(q, -2 * r) * (qr(q, n) - int(1)) * (qr(q, n - 1) - int(1)) / (&qq - int(1));
                assert_eq!((m.terms.t1.a, m.terms.t2.a, m.terms.t3.a), (t1, t2, t3), "GL {n} {q} {r}");

                // GU, where the sign of the codimension-one term follows r
                let m = moments(&chain(Family::GU, n as usize, q, r as u64)).unwrap();
                let s = |e: i64| int(sign(e));
                let t1 = qr(q, -r) * (&qq * &qq - &qq - int(2)) / (&qq + int(1));
                let t2 = qr(q, -2 * r) * (qr(q, 2 * n - 1) - s(n - 1) * qr(q, n) - s(n) * qr(q, n - 1) - &qq * &qq) / (&qq + int(1));
                let t3 = qr(q, -2 * r) * (qr(q, n) - s(n)) * (qr(q, n - 1) - s(n - 1)) / (&qq + int(1));
                assert_eq!((m.terms.t1.a, m.terms.t2.a, m.terms.t3.a), (s(r) * t1, t2, t3), "GU {n} {q} {r}");

                if q % 2 == 0 {
                    let sp = GroupSpec::sp(n as usize, q).unwrap();
                    let t1 = (&qq - int(2)) * qr(q, -r);
                    let t2 = (qr(q, 2 * n) - &qq) * qr(q, -2 * r);
                    let t3 = (qr(q, 2 * n) - int(1)) * qr(q, -2 * r);
                    for (variant, sg) in [(WeilVariant::SpEvenLinear, int(1)), (WeilVariant::SpEvenUnitary, s(r))] {
                        let m = moments(&ChainSpec::new(sp, variant, r as u64).unwrap()).unwrap();
                        assert_eq!((m.terms.t1.a.clone(), m.terms.t2.a.clone(), m.terms.t3.a.clone()), (&sg * &t1, t2.clone(), t3.clone()));
                    }
                } else if r % 2 == 0 {
                    let m = moments(&chain(Family::SpOdd, n as usize, q, r as u64)).unwrap();
                    let t2_half = (qr(q, 2 * n) - &qq) * qr(q, -r);
                    let t3_half = (qr(q, 2 * n) - int(1)) * qr(q, -r);
                    let kr = int(sign(if q % 4 == 3 { r / 2 } else { 0 }));
                    if q % 4 == 1 {
                        let t1 = (&qq - int(3)) / int(2) * qr(q, -r / 2);
                        let bound = (&qq - int(1)) / int(2) * qr(q, -r / 2);
                        assert_eq!(m.terms.t1.a, t1);
                        assert!(m.terms.t1.a <= bound);
                        assert_eq!(m.terms.t2.a, t2_half / int(2));
                        assert_eq!(m.terms.t3.a, t3_half / int(2));
                    } else {
                        let t1 = (&qq - int(2)) * &kr * qr(q, -r / 2);
                        assert_eq!(m.terms.t1.a, t1);
                        assert_eq!(m.terms.t2.a, &kr * kr.clone() * t2_half);
                        assert_eq!(m.terms.t3.a, t3_half);
                        assert_eq!(m.mean_sign as i64, if r == 0 { 1 } else { sign(r / 2) });
                    }
                }
            }
        }
    }
}

#[test]
fn weighted_sum_examples() {
    assert_eq!(weighted_weil_sum(2, 5, 2, PairMode::PairsFromC).unwrap().to_rational().unwrap(), ratio(17000, 624));
    assert_eq!(weighted_weil_sum(2, 3, 2, PairMode::AllTransvections).unwrap().to_rational().unwrap(), ratio(756, 80));
    for mode in [PairMode::PairsFromC, PairMode::AllTransvections] {
        assert_eq!(weighted_weil_sum(3, 7, 0, mode).unwrap().to_rational().unwrap(), int(1));
    }
    assert!(matches!(weighted_weil_sum(2, 3, 1, PairMode::AllTransvections), Err(Error::Parity(_))));
    assert!(weighted_weil_sum(2, 4, 2, PairMode::PairsFromC).is_err());
}

#[test]
fn weighted_sums_agree_on_grid() {
    for (n, q) in [(2usize, 3u64), (2, 5), (3, 3), (2, 7), (3, 5), (2, 9), (4, 11), (2, 13)] {
        for r in 0..=5 {
            let x = weighted_weil_sum(n, q, r, PairMode::PairsFromC).unwrap();
            assert_eq!(x, weil_assembly(n, q, r, PairMode::PairsFromC).unwrap());
        }
        for r in [0, 2, 4, 6] {
            weighted_weil_sum(n, q, r, PairMode::AllTransvections).unwrap();
        }
    }
}

#[test]
fn second_class_pairs_differ_only_at_odd_r() {
    for (n, q) in [(2usize, 5u64), (3, 13), (2, 3), (2, 7)] {
        for r in 0..=5 {
            let a = weil_assembly(n, q, r, PairMode::PairsFromC).unwrap();
            let b = weil_assembly(n, q, r, PairMode::PairsFromCStar).unwrap();
            assert_eq!(a == b, r % 2 == 0, "n={n} q={q} r={r}");
        }
    }
}

#[test]
fn chebyshev_examples() {
    assert_eq!(chebyshev_lower(&chain(Family::SpEven, 2, 2, 1), None).unwrap(), 0.0);
    let b = chebyshev_lower(&chain(Family::GU, 12, 3, 9), None).unwrap();
    assert!(b >= 0.45, "{b}");
    // with the cruder variance bound 1 + q^{c−1} the scan still clears 0.45
    let m = moments(&chain(Family::GU, 12, 3, 9)).unwrap();
    assert!(close(m.mean, -7.80, 0.01));
    assert!(chebyshev_from(m.mean_abs_lower(), 10.0, None) >= 0.45);
    assert_eq!(chebyshev_from(5.0, 1.0, Some(1e-9)), 0.0);
    assert_eq!(chebyshev_from(0.9, 0.0, None), 0.0);
    assert_eq!(chebyshev_from(f64::NAN, 1.0, None), 0.0);
}

#[test]
fn profile_examples() {
    let gu = GroupSpec::gu(50, 9).unwrap();
    let p = profile(&gu, WeilVariant::GUWeil, 44..=54).unwrap();
    assert_eq!(p.rows.len(), 11);
    let row = |r: u64| p.rows.iter().find(|x| x.r == r).unwrap();
    assert!(row(52).upper_tv.unwrap() <= 0.0087);
    assert!(row(46).lower_tv.unwrap() >= 0.97);
    assert!(row(44).upper_closed.is_none());
    for x in &p.rows {
        for b in [x.upper_tv, x.lower_tv].into_iter().flatten() {
            assert!((0.0..=1.0).contains(&b));
        }
        if let (Some(u), Some(l)) = (x.upper_tv, x.lower_tv) {
            assert!(l <= u, "r={} lower {l} > upper {u}", x.r);
        }
    }

    let sp = GroupSpec::sp(10, 5).unwrap();
    let p = profile(&sp, WeilVariant::SpOddWeil, 21..=21).unwrap();
    assert_eq!(p.rows[0].upper_closed, Some(0.25));

    let gl = GroupSpec::gl(6, 3).unwrap();
    let p = profile(&gl, WeilVariant::GLWeil, 1..=2).unwrap();
    assert!(p.rows.iter().all(|x| x.upper_tv.is_none() && x.exact_char_sum.is_none()));
}

#[test]
fn gu_odd_r_means_are_negative() {
    let m = moments(&chain(Family::GU, 4, 3, 3)).unwrap();
    assert_eq!(m.mean_sign, -1);
    let want = neg_qpow(3, -6) * from_big(&transvection_count(&GroupSpec::gu(4, 3).unwrap()).unwrap());
    assert_eq!(m.mean_sq, want);
}
