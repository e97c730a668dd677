//! Small helpers for exact rationals and their boundary conversion to floats.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn from_big(n: &BigUint) -> Rat {
    Rat::from_integer(BigInt::from(n.clone()))
}

/// `base^e` for any integer exponent.
pub fn pow(base: i64, e: i64) -> Rat {
    let b = int(base);
    if e >= 0 {
        num_traits::pow(b, e as usize)
    } else {
        num_traits::pow(b, (-e) as usize).recip()
    }
}

/// `q^e` for any integer exponent.
pub fn qpow(q: u64, e: i64) -> Rat {
    pow(q as i64, e)
}

/// `(−q)^e` for any integer exponent.
pub fn neg_qpow(q: u64, e: i64) -> Rat {
    pow(-(q as i64), e)
}

/// `(−1)^e`.
pub fn sign(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Exact `"p/q"` rendering (denominator omitted when 1).
pub fn render(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Nearest float, accurate for numbers far outside the `f64` range of the
/// numerator and denominator individually.
pub fn to_f64(x: &Rat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    if let (Some(n), Some(d)) = (x.numer().to_f64(), x.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && n.abs() < 1e300 && d < 1e300 {
            return n / d;
        }
    }
    let shift = x.numer().bits() as i64 - x.denom().bits() as i64;
    // scale into [2^52, 2^54) before dividing
    let k = 53 - shift;
    let scaled = if k >= 0 {
        (x.numer() << (k as usize)) / x.denom()
    } else {
        x.numer() / (x.denom() << ((-k) as usize))
    };
    ldexp(scaled.to_f64().unwrap_or(f64::NAN), -k)
}

fn ldexp(mut m: f64, mut e: i64) -> f64 {
    while e > 1000 {
        m *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        m *= 2f64.powi(-1000);
        e += 1000;
    }
    m * 2f64.powi(e as i32)
}

/// A float not smaller than `x`.
pub fn to_f64_up(x: &Rat) -> f64 {
    let f = to_f64(x);
    let back = Rat::from_float(f);
    match back {
        Some(b) if &b >= x => f,
        _ => f.next_up(),
    }
}

/// A float not larger than `x`.
pub fn to_f64_down(x: &Rat) -> f64 {
    let f = to_f64(x);
    match Rat::from_float(f) {
        Some(b) if &b <= x => f,
        _ => f.next_down(),
    }
}

/// `√x` rounded up, for `x ≥ 0`.
pub fn sqrt_up(x: &Rat) -> f64 {
    let s = to_f64_up(x).sqrt();
    // the float sqrt is correctly rounded; step once to be safe against the
    // conversion error of the argument
    let r = Rat::from_float(s).unwrap_or_else(Rat::zero);
    if &(&r * &r) >= x {
        s
    } else {
        s.next_up()
    }
}

/// `√x` rounded down, for `x ≥ 0`.
pub fn sqrt_down(x: &Rat) -> f64 {
    if x.is_negative() || x.is_zero() {
        return 0.0;
    }
    let s = to_f64_down(x).sqrt();
    let r = Rat::from_float(s).unwrap_or_else(Rat::zero);
    if &(&r * &r) <= x {
        s
    } else {
        s.next_down()
    }
}

/// `binom(i, 2)`.
pub fn choose2(i: i64) -> i64 {
    i * (i - 1) / 2
}

/// Exact integer square root when `x` is a perfect square.
pub fn exact_sqrt(x: &BigUint) -> Option<BigUint> {
    let r = x.sqrt();
    (&r * &r == *x).then_some(r)
}
