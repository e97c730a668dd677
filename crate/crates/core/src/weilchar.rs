//! Weil character values and the quadratic scalars `a + b·δ`, `δ² = κq`.
//!
//! For odd `q`, `κ = 1` when `q ≡ 1 (mod 4)` and `κ = −1` otherwise. The square
//! root `δ` of `−q` is a fixed formal symbol; all class values of the odd
//! symplectic Weil character are expressed relative to it.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::clgroups::{Family, GroupSpec};
use crate::error::{Error, Result};
use crate::exact::{int, neg_qpow, qpow, render, sign, to_f64, Rat};
use crate::transprod::SpClassLabel;

/// `a + b·δ` with `δ² = κq`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeilScalar {
    pub a: Rat,
    pub b: Rat,
    pub kappa: i8,
    pub q: u64,
}

/// `κ` for odd `q`; `1` for even `q` (where only rational values occur).
pub fn kappa_of(q: u64) -> i8 {
    if q % 4 == 3 {
        -1
    } else {
        1
    }
}

impl WeilScalar {
    pub fn new(a: Rat, b: Rat, kappa: i8, q: u64) -> WeilScalar {
        WeilScalar { a, b, kappa, q }
    }

    pub fn rational(a: Rat, q: u64) -> WeilScalar {
        WeilScalar::new(a, Rat::zero(), kappa_of(q), q)
    }

    pub fn zero(q: u64) -> WeilScalar {
        WeilScalar::rational(Rat::zero(), q)
    }

    pub fn one(q: u64) -> WeilScalar {
        WeilScalar::rational(int(1), q)
    }

    /// The symbol `δ` itself.
    pub fn delta(q: u64) -> WeilScalar {
        WeilScalar::new(Rat::zero(), int(1), kappa_of(q), q)
    }

    fn delta_sq(&self) -> Rat {
        int(self.kappa as i64 * self.q as i64)
    }

    fn check(&self, other: &WeilScalar) -> Result<()> {
        if self.kappa != other.kappa || self.q != other.q {
            return Err(Error::ScalarMismatch(format!(
                "(κ={}, q={}) vs (κ={}, q={})",
                self.kappa, self.q, other.kappa, other.q
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &WeilScalar) -> Result<WeilScalar> {
        self.check(other)?;
        Ok(WeilScalar::new(&self.a + &other.a, &self.b + &other.b, self.kappa, self.q))
    }

    pub fn sub(&self, other: &WeilScalar) -> Result<WeilScalar> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> WeilScalar {
        WeilScalar::new(-&self.a, -&self.b, self.kappa, self.q)
    }

    pub fn mul(&self, other: &WeilScalar) -> Result<WeilScalar> {
        self.check(other)?;
        let a = &self.a * &other.a + &self.b * &other.b * self.delta_sq();
        let b = &self.a * &other.b + &other.a * &self.b;
        Ok(WeilScalar::new(a, b, self.kappa, self.q))
    }

    /// Multiply by a rational.
    pub fn scale(&self, k: &Rat) -> WeilScalar {
        WeilScalar::new(&self.a * k, &self.b * k, self.kappa, self.q)
    }

    pub fn pow(&self, mut e: u64) -> WeilScalar {
        let mut base = self.clone();
        let mut acc = WeilScalar::new(int(1), Rat::zero(), self.kappa, self.q);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same field");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same field");
            }
        }
        acc
    }

    /// Complex conjugate: `δ` is imaginary when `κ = −1` and real otherwise.
    pub fn conj(&self) -> WeilScalar {
        if self.kappa < 0 {
            WeilScalar::new(self.a.clone(), -&self.b, self.kappa, self.q)
        } else {
            self.clone()
        }
    }

    /// `|x|²`, again in the extension (it is rational whenever `a·b = 0` or `κ = −1`).
    pub fn abs_sq(&self) -> WeilScalar {
        self.mul(&self.conj()).expect("same field")
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn to_rational(&self) -> Option<Rat> {
        self.is_rational().then(|| self.a.clone())
    }

    /// Sign of a real value (`κ = 1`, or `b = 0`), decided exactly.
    pub fn real_sign(&self) -> Option<i8> {
        if self.b.is_zero() {
            return Some(rat_sign(&self.a));
        }
        if self.kappa < 0 {
            return None;
        }
        let (sa, sb) = (rat_sign(&self.a), rat_sign(&self.b));
        if sa == 0 || sa == sb {
            return Some(sb);
        }
        // a and bδ have opposite signs: compare a² with b²q
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * int(self.q as i64);
        Some(match lhs.cmp(&rhs) {
            std::cmp::Ordering::Greater => sa,
            std::cmp::Ordering::Less => sb,
            std::cmp::Ordering::Equal => 0,
        })
    }

    /// Nearest complex value `(re, im)`.
    pub fn approx(&self) -> (f64, f64) {
        let d = (self.q as f64).sqrt();
        if self.kappa < 0 {
            (to_f64(&self.a), to_f64(&self.b) * d)
        } else {
            (to_f64(&self.a) + to_f64(&self.b) * d, 0.0)
        }
    }
}

fn rat_sign(x: &Rat) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

impl fmt::Display for WeilScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return f.write_str(&render(&self.a));
        }
        let root = if self.kappa < 0 { format!("√-{}", self.q) } else { format!("√{}", self.q) };
        if self.a.is_zero() {
            write!(f, "{}·{root}", render(&self.b))
        } else {
            write!(f, "{} + {}·{root}", render(&self.a), render(&self.b))
        }
    }
}

impl Serialize for WeilScalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("WeilScalar", 4)?;
        st.serialize_field("a", &render(&self.a))?;
        st.serialize_field("b", &render(&self.b))?;
        st.serialize_field("kappa", &self.kappa)?;
        st.serialize_field("q", &self.q)?;
        st.end()
    }
}

/// Which Weil character drives the chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum WeilVariant {
    GLWeil,
    GUWeil,
    SpOddWeil,
    SpEvenLinear,
    SpEvenUnitary,
}

impl WeilVariant {
    /// The natural variant for a family (the linear one for even `q`).
    pub fn default_for(family: Family) -> WeilVariant {
        match family {
            Family::GL => WeilVariant::GLWeil,
            Family::GU => WeilVariant::GUWeil,
            Family::SpOdd => WeilVariant::SpOddWeil,
            Family::SpEven => WeilVariant::SpEvenLinear,
        }
    }

    pub fn compatible(self, family: Family) -> bool {
        matches!(
            (self, family),
            (WeilVariant::GLWeil, Family::GL)
                | (WeilVariant::GUWeil, Family::GU)
                | (WeilVariant::SpOddWeil, Family::SpOdd)
                | (WeilVariant::SpEvenLinear | WeilVariant::SpEvenUnitary, Family::SpEven)
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            WeilVariant::GLWeil => "gl",
            WeilVariant::GUWeil => "gu",
            WeilVariant::SpOddWeil => "sp-odd",
            WeilVariant::SpEvenLinear => "linear",
            WeilVariant::SpEvenUnitary => "unitary",
        }
    }
}

impl fmt::Display for WeilVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn check_variant(spec: &GroupSpec, variant: WeilVariant) -> Result<()> {
    if !variant.compatible(spec.family) {
        return Err(Error::InvalidParams(format!("variant {variant} does not apply to {}", spec.family)));
    }
    Ok(())
}

/// Degree of the Weil character.
pub fn weil_degree(spec: &GroupSpec, variant: WeilVariant) -> Result<BigUint> {
    check_variant(spec, variant)?;
    let e = match spec.family {
        Family::SpEven => 2 * spec.n,
        _ => spec.n,
    };
    Ok(BigUint::from(spec.q).pow(e as u32))
}

/// Value on an element with fixed-space codimension `codim`. For odd `q`
/// symplectic groups only the modulus is determined, returned as `q^k` or `q^k·δ`.
pub fn weil_value_by_codim(spec: &GroupSpec, variant: WeilVariant, codim: usize) -> Result<WeilScalar> {
    check_variant(spec, variant)?;
    let dim = spec.dim();
    if codim > dim {
        return Err(Error::OutOfRange(format!("codimension {codim} exceeds dimension {dim}")));
    }
    let (n, q) = (spec.n as i64, spec.q);
    let fixed = (dim - codim) as i64;
    let r = |x: Rat| WeilScalar::rational(x, q);
    Ok(match variant {
        WeilVariant::GLWeil | WeilVariant::SpEvenLinear => r(qpow(q, fixed)),
        WeilVariant::GUWeil => r(int(sign(n)) * neg_qpow(q, fixed)),
        WeilVariant::SpEvenUnitary => r(neg_qpow(q, fixed)),
        WeilVariant::SpOddWeil => {
            if fixed % 2 == 0 {
                r(qpow(q, fixed / 2))
            } else {
                WeilScalar::delta(q).scale(&qpow(q, (fixed - 1) / 2))
            }
        }
    })
}

/// Value of the odd-`q` symplectic Weil character on a product class of at most
/// two transvections.
pub fn weil_value_sp_odd_class(spec: &GroupSpec, label: SpClassLabel) -> Result<WeilScalar> {
    if spec.family != Family::SpOdd || spec.n < 2 {
        return Err(Error::InvalidParams(format!("class values need sp-odd with n ≥ 2, got {spec}")));
    }
    let q = spec.q;
    let kappa = kappa_of(q) as i64;
    let base = qpow(q, spec.n as i64 - 1);
    let r = |s: i64| WeilScalar::rational(int(s) * &base, q);
    let d = |s: i64| WeilScalar::delta(q).scale(&(int(s) * &base));
    Ok(match label {
        SpClassLabel::Identity => WeilScalar::rational(qpow(q, spec.n as i64), q),
        SpClassLabel::A21 => d(-kappa),
        SpClassLabel::A22 => d(kappa),
        SpClassLabel::A31 => r(1),
        SpClassLabel::A32 => r(-1),
        SpClassLabel::C1(j) => r(-sign(j as i64)),
        SpClassLabel::C3(i) => r(sign(i as i64)),
        SpClassLabel::D21 | SpClassLabel::D22 => r(kappa),
    })
}

/// `χ/d` at codimension `codim` (modulus only for odd-`q` symplectic groups).
pub fn char_ratio_by_codim(spec: &GroupSpec, variant: WeilVariant, codim: usize) -> Result<WeilScalar> {
    let d = weil_degree(spec, variant)?;
    let v = weil_value_by_codim(spec, variant, codim)?;
    Ok(v.scale(&Rat::from_integer(d.into()).recip()))
}

/// `|χ/d|²` at codimension `codim`, exact.
pub fn abs_ratio_sq(spec: &GroupSpec, variant: WeilVariant, codim: usize) -> Result<Rat> {
    check_variant(spec, variant)?;
    if codim > spec.dim() {
        return Err(Error::OutOfRange(format!("codimension {codim} exceeds dimension {}", spec.dim())));
    }
    let e = codim as i64;
    Ok(match spec.family {
        Family::SpOdd => qpow(spec.q, -e),
        _ => qpow(spec.q, -2 * e),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clgroups::{Group, DEFAULT_ENUM_LIMIT};
    use crate::exact::from_big;

    fn ws(a: i64, b: i64, q: u64) -> WeilScalar {
        WeilScalar::new(int(a), int(b), kappa_of(q), q)
    }

    #[test]
    fn degrees() {
        let gl = GroupSpec::gl(2, 3).unwrap();
        assert_eq!(weil_degree(&gl, WeilVariant::GLWeil).unwrap(), BigUint::from(9u32));
        let sp = GroupSpec::sp(2, 3).unwrap();
        assert_eq!(weil_degree(&sp, WeilVariant::SpOddWeil).unwrap(), BigUint::from(9u32));
        let se = GroupSpec::sp(2, 2).unwrap();
        assert_eq!(weil_degree(&se, WeilVariant::SpEvenUnitary).unwrap(), BigUint::from(16u32));
        assert!(weil_degree(&se, WeilVariant::GUWeil).is_err());
    }

    #[test]
    fn codim_values() {
        let gu = GroupSpec::gu(2, 2).unwrap();
        assert_eq!(weil_value_by_codim(&gu, WeilVariant::GUWeil, 0).unwrap(), ws(4, 0, 2));
        let gu3 = GroupSpec::gu(3, 2).unwrap();
        assert_eq!(weil_value_by_codim(&gu3, WeilVariant::GUWeil, 1).unwrap(), ws(-4, 0, 2));
        let se = GroupSpec::sp(1, 2).unwrap();
        assert_eq!(weil_value_by_codim(&se, WeilVariant::SpEvenUnitary, 1).unwrap(), ws(-2, 0, 2));
        assert!(weil_value_by_codim(&se, WeilVariant::SpEvenUnitary, 3).is_err());
        let so = GroupSpec::sp(2, 5).unwrap();
        assert_eq!(weil_value_by_codim(&so, WeilVariant::SpOddWeil, 1).unwrap(), ws(0, 5, 5));
        assert_eq!(weil_value_by_codim(&so, WeilVariant::SpOddWeil, 2).unwrap(), ws(5, 0, 5));
    }

    #[test]
    fn class_values() {
        let s25 = GroupSpec::sp(2, 5).unwrap();
        assert_eq!(weil_value_sp_odd_class(&s25, SpClassLabel::A21).unwrap(), ws(0, -5, 5));
        let s23 = GroupSpec::sp(2, 3).unwrap();
        assert_eq!(weil_value_sp_odd_class(&s23, SpClassLabel::A21).unwrap(), ws(0, 3, 3));
        let s35 = GroupSpec::sp(3, 5).unwrap();
        assert_eq!(weil_value_sp_odd_class(&s35, SpClassLabel::C3(2)).unwrap(), ws(25, 0, 5));
        assert!(weil_value_sp_odd_class(&GroupSpec::sp(1, 5).unwrap(), SpClassLabel::A31).is_err());
    }

    #[test]
    fn class_value_relations() {
        use SpClassLabel::*;
        for (n, q) in [(2usize, 3u64), (2, 5), (3, 7), (4, 9), (2, 11), (3, 13)] {
            let s = GroupSpec::sp(n, q).unwrap();
            let v = |l| weil_value_sp_odd_class(&s, l).unwrap();
            assert_eq!(v(A22), v(A21).neg());
            assert_eq!(v(D21), v(D22));
            assert_eq!(v(A21).abs_sq().to_rational().unwrap(), qpow(q, 2 * n as i64 - 1));
            for l in [A31, A32, C1(1), C1(2), C3(1), C3(2), D21] {
                assert_eq!(v(l).abs_sq().to_rational().unwrap(), qpow(q, 2 * n as i64 - 2));
                let m = weil_value_by_codim(&s, WeilVariant::SpOddWeil, 2).unwrap();
                assert_eq!(v(l).abs_sq(), m.abs_sq());
            }
        }
    }

    #[test]
    fn arithmetic() {
        assert_eq!(ws(0, 1, 5).pow(2), ws(5, 0, 5));
        assert_eq!(ws(0, 1, 3).pow(2), ws(-3, 0, 3));
        assert_eq!(ws(0, -5, 5).pow(4), ws(15625, 0, 5));
        assert_eq!(ws(2, 3, 7).pow(0), ws(1, 0, 7));
        assert!(ws(1, 1, 5).add(&ws(1, 1, 7)).is_err());
        let x = ws(2, 3, 7);
        assert_eq!(x.pow(3), x.mul(&x).unwrap().mul(&x).unwrap());
        assert_eq!(x.abs_sq(), ws(4 + 63, 0, 7));
    }

    #[test]
    fn exact_signs() {
        assert_eq!(ws(3, -1, 5).real_sign(), Some(1));
        assert_eq!(ws(2, -1, 5).real_sign(), Some(-1));
        assert_eq!(ws(0, 0, 5).real_sign(), Some(0));
        assert_eq!(ws(1, 1, 3).real_sign(), None);
        assert_eq!(ws(-4, 0, 3).real_sign(), Some(-1));
    }

    /// `⟨χ, χ⟩` must be a positive integer and `⟨χ, 1⟩` a nonnegative one.
    #[test]
    fn inner_products_over_enumerated_groups() {
        let cases = [
            (GroupSpec::gl(2, 3).unwrap(), WeilVariant::GLWeil),
            (GroupSpec::gl(3, 2).unwrap(), WeilVariant::GLWeil),
            (GroupSpec::gu(2, 2).unwrap(), WeilVariant::GUWeil),
            (GroupSpec::gu(3, 2).unwrap(), WeilVariant::GUWeil),
            (GroupSpec::gu(2, 3).unwrap(), WeilVariant::GUWeil),
            (GroupSpec::sp(1, 2).unwrap(), WeilVariant::SpEvenLinear),
            (GroupSpec::sp(2, 2).unwrap(), WeilVariant::SpEvenLinear),
            (GroupSpec::sp(2, 2).unwrap(), WeilVariant::SpEvenUnitary),
            (GroupSpec::sp(1, 3).unwrap(), WeilVariant::SpOddWeil),
            (GroupSpec::sp(1, 5).unwrap(), WeilVariant::SpOddWeil),
        ];
        for (spec, variant) in cases {
            let g = Group::new(spec).unwrap();
            let els = g.elements(DEFAULT_ENUM_LIMIT).unwrap();
            let order = from_big(&g.order());
            let mut norm = Rat::zero();
            let mut triv = WeilScalar::zero(spec.q);
            for m in &els {
                let v = weil_value_by_codim(&spec, variant, g.codim(m)).unwrap();
                norm += v.abs_sq().to_rational().unwrap();
                triv = triv.add(&v).unwrap();
            }
            let norm = norm / &order;
            assert!(norm.is_integer() && norm.is_positive(), "{spec} {variant}: {norm}");
            if spec.family != Family::SpOdd {
                let t = triv.to_rational().unwrap() / &order;
                assert!(t.is_integer() && !t.is_negative(), "{spec} {variant}: {t}");
            }
        }
    }

    #[test]
    fn gu_values_match_formula_on_elements() {
        for spec in [GroupSpec::gu(2, 2).unwrap(), GroupSpec::gu(3, 2).unwrap()] {
            let g = Group::new(spec).unwrap();
            for m in g.elements(DEFAULT_ENUM_LIMIT).unwrap() {
                let k = g.codim(&m);
                let want = int(sign(spec.n as i64)) * neg_qpow(2, (spec.n - k) as i64);
                assert_eq!(weil_value_by_codim(&spec, WeilVariant::GUWeil, k).unwrap().a, want);
            }
        }
    }

    #[test]
    fn ratios() {
        let s = GroupSpec::sp(2, 5).unwrap();
        assert_eq!(abs_ratio_sq(&s, WeilVariant::SpOddWeil, 1).unwrap(), qpow(5, -1));
        let gu = GroupSpec::gu(3, 3).unwrap();
        assert_eq!(abs_ratio_sq(&gu, WeilVariant::GUWeil, 2).unwrap(), qpow(3, -4));
        let r = char_ratio_by_codim(&gu, WeilVariant::GUWeil, 1).unwrap();
        assert_eq!(r.a, crate::exact::ratio(-1, 3));
        assert_eq!(format!("{}", ws(0, -5, 5)), "-5·√5");
        assert_eq!(format!("{}", ws(1, 2, 3)), "1 + 2·√-3");
    }
}
