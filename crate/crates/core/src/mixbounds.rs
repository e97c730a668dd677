//! Total variation bounds for `r` steps of the tensor-product chain started at the
//! trivial character.
//!
//! Upper bounds come from the character sum `Σ_{g≠1} |χ(g)/d|^{2r}` (exact) and from
//! per-family closed forms. Lower bounds come from closed forms and from the
//! second-moment method applied to `f_C(ρ) = |C|^{1/2} χ^ρ(C)/d_ρ`, whose first two
//! moments under the chain are assembled exactly from the distributions of
//! products of one and two random transvections.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::clgroups::{group_order, transvection_count, Family, Group, GroupSpec};
use crate::error::{Error, Result};
use crate::exact::{from_big, int, qpow, ratio, render, sqrt_down, sqrt_up, to_f64, to_f64_up, Rat};
use crate::fixdist::fixed_space_distribution;
use crate::transprod::{
    codim_dist_gl, codim_dist_gu, codim_dist_sp, sp_odd_class_dist_mode, PairMode, SpClassLabel,
};
use crate::weilchar::{abs_ratio_sq, kappa_of, weil_value_sp_odd_class, WeilScalar, WeilVariant};

/// Largest `GL_n(q)` order for which the character sum is tallied by enumeration.
pub const GL_SUM_LIMIT: u64 = 2_000_000;

/// A chain: the group, the driving Weil character and the number of steps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ChainSpec {
    pub group: GroupSpec,
    pub variant: WeilVariant,
    pub r: u64,
}

impl ChainSpec {
    pub fn new(group: GroupSpec, variant: WeilVariant, r: u64) -> Result<ChainSpec> {
        if !variant.compatible(group.family) {
            return Err(Error::InvalidParams(format!("variant {variant} does not apply to {}", group.family)));
        }
        Ok(ChainSpec { group, variant, r })
    }

    /// The chain driven by the family's default Weil character.
    pub fn standard(group: GroupSpec, r: u64) -> ChainSpec {
        ChainSpec { group, variant: WeilVariant::default_for(group.family), r }
    }
}

/// A positive offset `c`, possibly a half-integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Offset {
    twice: i64,
}

impl Offset {
    pub fn whole(c: i64) -> Offset {
        Offset { twice: 2 * c }
    }

    /// The offset `twice / 2`.
    pub fn halves(twice: i64) -> Offset {
        Offset { twice }
    }

    pub fn twice(self) -> i64 {
        self.twice
    }

    pub fn as_integer(self) -> Option<i64> {
        (self.twice % 2 == 0).then_some(self.twice / 2)
    }

    pub fn value(self) -> f64 {
        self.twice as f64 / 2.0
    }
}

impl fmt::Display for Offset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_integer() {
            Some(c) => write!(f, "{c}"),
            None => write!(f, "{}{}.5", if self.twice < 0 { "-" } else { "" }, self.twice.abs() / 2),
        }
    }
}

impl FromStr for Offset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Offset> {
        let bad = || Error::OutOfRange(format!("offset {s:?} is not an integer or half-integer"));
        let s = s.trim();
        if let Ok(c) = s.parse::<i64>() {
            return Ok(Offset::whole(c));
        }
        if let Some((num, den)) = s.split_once('/') {
            let (num, den): (i64, i64) = (num.trim().parse().map_err(|_| bad())?, den.trim().parse().map_err(|_| bad())?);
            return match den {
                1 => Ok(Offset::whole(num)),
                2 => Ok(Offset::halves(num)),
                _ => Err(bad()),
            };
        }
        let x: f64 = s.parse().map_err(|_| bad())?;
        let t = 2.0 * x;
        if t.fract() != 0.0 || !t.is_finite() {
            return Err(bad());
        }
        Ok(Offset::halves(t as i64))
    }
}

impl Serialize for Offset {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.value())
    }
}

fn serialize_rat<S: Serializer>(x: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&render(x))
}

fn serialize_opt_rat<S: Serializer>(x: &Option<Rat>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(x) => s.serialize_some(&render(x)),
        None => s.serialize_none(),
    }
}

fn check_variant(spec: &GroupSpec, variant: WeilVariant) -> Result<()> {
    ChainSpec::new(*spec, variant, 0).map(|_| ())
}

/// Number of elements by fixed-space codimension, indexed by codimension.
pub fn codim_counts(spec: &GroupSpec) -> Result<Vec<Rat>> {
    match spec.family {
        Family::GL => {
            if group_order(spec) > GL_SUM_LIMIT.into() {
                return Err(Error::LimitExceeded {
                    what: "GL character sum by enumeration (use the closed-form upper bound)",
                    size: group_order(spec).to_string(),
                    limit: GL_SUM_LIMIT.to_string(),
                });
            }
            let g = Group::new(*spec)?;
            let mut counts = vec![0u64; spec.dim() + 1];
            for m in g.elements(GL_SUM_LIMIT)? {
                counts[g.codim(&m)] += 1;
            }
            Ok(counts.into_iter().map(|c| int(c as i64)).collect())
        }
        _ => {
            let d = fixed_space_distribution(spec)?;
            let order = from_big(&group_order(spec));
            Ok(d.by_codim().into_iter().map(|p| p * &order).collect())
        }
    }
}

pub(crate) fn charbound_from_counts(chain: &ChainSpec, counts: &[Rat]) -> Result<Rat> {
    let mut sum = Rat::zero();
    for (e, count) in counts.iter().enumerate().skip(1) {
        if count.is_zero() {
            continue;
        }
        let ratio = abs_ratio_sq(&chain.group, chain.variant, e)?;
        sum += count * num_traits::pow(ratio, chain.r as usize);
    }
    Ok(sum)
}

/// `Σ_{g≠1} |χ(g)/d|^{2r}`, an exact upper bound on `4‖K^r − π‖²_TV`.
pub fn charbound_sum(chain: &ChainSpec) -> Result<Rat> {
    check_variant(&chain.group, chain.variant)?;
    charbound_from_counts(chain, &codim_counts(&chain.group)?)
}

/// A closed-form upper bound and the step count it applies to.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClosedUpper {
    pub c: Offset,
    pub r: u64,
    /// the bound, rounded up
    pub value: f64,
    /// its exact square
    #[serde(serialize_with = "serialize_rat")]
    pub value_sq: Rat,
}

/// Closed-form upper bound at offset `c ≥ 1` past the cutoff.
pub fn upper_closed(spec: &GroupSpec, variant: WeilVariant, c: Offset) -> Result<ClosedUpper> {
    check_variant(spec, variant)?;
    let ci = c
        .as_integer()
        .filter(|&c| c >= 1)
        .ok_or_else(|| Error::OutOfRange(format!("upper bound needs a positive integer offset, got {c}")))?;
    let (n, q) = (spec.n as u64, spec.q);
    let (r, value_sq, value) = match spec.family {
        Family::GL => {
            let b = int(1) / (int(2) * qpow(q, ci));
            (n + ci as u64, &b * &b, to_f64_up(&b))
        }
        Family::GU => {
            let b = ratio(7, 10) * qpow(q, -ci);
            (n + ci as u64, &b * &b, to_f64_up(&b))
        }
        Family::SpOdd => {
            let sq = int(1) / (int(4) * (qpow(q, ci) - int(1)));
            (2 * n + ci as u64, sq.clone(), sqrt_up(&sq))
        }
        Family::SpEven => {
            let sq = int(1) / (int(4) * (qpow(q, 2 * ci) - int(1)));
            (n + ci as u64, sq.clone(), sqrt_up(&sq))
        }
    };
    Ok(ClosedUpper { c, r, value, value_sq })
}

/// A closed-form lower bound and the step count it applies to.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClosedLower {
    pub c: Offset,
    pub r: u64,
    /// the bound, rounded down and clamped to `[0, 1]`
    pub value: f64,
    pub validity: &'static str,
}

/// `coef · q^{half/2}` rounded up, `coef > 0`.
fn coef_qpow_half_up(coef: &Rat, q: u64, half: i64) -> f64 {
    if half % 2 == 0 {
        to_f64_up(&(coef * qpow(q, half / 2)))
    } else {
        sqrt_up(&(coef * coef * qpow(q, half)))
    }
}

/// Closed-form lower bound at offset `c > 0` before the cutoff.
pub fn lower_closed(spec: &GroupSpec, variant: WeilVariant, c: Offset) -> Result<ClosedLower> {
    check_variant(spec, variant)?;
    let t = c.twice();
    if t <= 0 {
        return Err(Error::OutOfRange(format!("lower bound needs c > 0, got {c}")));
    }
    let (n, q) = (spec.n as i64, spec.q);
    let need_integer = || {
        c.as_integer().ok_or_else(|| Error::OutOfRange(format!("{} lower bound needs an integer offset, got {c}", spec.family)))
    };
    let need_rank = |min: i64| {
        if n < min {
            Err(Error::OutOfRange(format!("{} lower bound needs n ≥ {min}", spec.family)))
        } else {
            Ok(())
        }
    };
    // 1 − a·q^{ea/2} − b·q^{eb/2}, exponents in halves
    let (r, a, ea, b, eb, validity) = match spec.family {
        Family::GL => {
            need_rank(3)?;
            let ci = need_integer()?;
            (n - ci, ratio(45, 4), 4 - 2 * t, int(18), 2 - t, "r = n − c, n ≥ 3")
        }
        Family::GU => {
            need_rank(3)?;
            let ci = need_integer()?;
            (n - ci, int(32), 4 - 2 * t, int(16), 2 - t, "r = n − c, n ≥ 3")
        }
        Family::SpEven => {
            need_rank(2)?;
            let ci = need_integer()?;
            (n - ci, int(16), -2 * t, int(6), -t, "r = n − c, n ≥ 2")
        }
        Family::SpOdd => {
            need_rank(2)?;
            let r = 2 * n - t;
            if q % 4 == 1 {
                (r, int(32), -2 * t, int(8), -t, "r = 2n − 2c, n ≥ 2, q ≡ 1 (mod 4)")
            } else {
                if r.rem_euclid(2) != 0 {
                    return Err(Error::Parity(format!("q ≡ 3 (mod 4) needs even r, got r = {r}")));
                }
                (r, int(16), -2 * t, int(12), -t, "r = 2n − 2c even, n ≥ 2, q ≡ 3 (mod 4)")
            }
        }
    };
    if r < 0 {
        return Err(Error::OutOfRange(format!("offset {c} gives a negative step count")));
    }
    let raw = 1.0 - coef_qpow_half_up(&a, q, ea) - coef_qpow_half_up(&b, q, eb);
    let value = raw.next_down().clamp(0.0, 1.0);
    Ok(ClosedLower { c, r: r as u64, value, validity })
}

/// Which test function the moments are taken of.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Statistic {
    /// `f_C` for a single class of transvections
    FC { class: String },
    /// the average over both classes of symplectic transvections, odd `q ≡ 3 (mod 4)`
    FStar,
}

/// `E[f²] − E[f]² = one + t1 + t2 − t3`, split by the codimension of the two-step product.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VarianceTerms {
    pub one: WeilScalar,
    pub t1: WeilScalar,
    pub t2: WeilScalar,
    pub t3: WeilScalar,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentReport {
    pub chain: ChainSpec,
    pub statistic: Statistic,
    /// `E[f]²`, exact
    #[serde(serialize_with = "serialize_rat")]
    pub mean_sq: Rat,
    pub mean_sign: i8,
    pub mean: f64,
    pub second_moment: WeilScalar,
    pub variance: WeilScalar,
    /// the variance, rounded up
    pub variance_upper: f64,
    /// true when the variance is rational (not merely real in the extension)
    pub variance_rational: bool,
    pub terms: VarianceTerms,
}

impl MomentReport {
    /// `|E[f]|`, rounded down.
    pub fn mean_abs_lower(&self) -> f64 {
        sqrt_down(&self.mean_sq)
    }
}

/// Exact ingredients of the moment computation.
struct Assembly {
    statistic: Statistic,
    /// `|C|`, or `q^{2n} − 1` for `f_*`
    size: Rat,
    /// weighted single-step ratios: `E[f] = √size · Σ w ρ^r`
    mean_terms: Vec<(Rat, WeilScalar)>,
    /// two-step classes: codimension, probability, character ratio
    pair_terms: Vec<(usize, Rat, WeilScalar)>,
}

fn assembly(chain: &ChainSpec) -> Result<Assembly> {
    let spec = chain.group;
    let (n, q) = (spec.n, spec.q);
    let by_codim = |dist: [Rat; 3], rho: &dyn Fn(usize) -> Rat| -> Vec<(usize, Rat, WeilScalar)> {
        dist.into_iter().enumerate().map(|(e, p)| (e, p, WeilScalar::rational(rho(e), q))).collect()
    };
    match spec.family {
        Family::GL | Family::GU | Family::SpEven => {
            let dist = match spec.family {
                Family::GL => codim_dist_gl(n, q)?,
                Family::GU => codim_dist_gu(n, q)?,
                _ => codim_dist_sp(n, q)?,
            };
            // χ/d at codimension e is s^e · q^{−e}
            let s: i64 = match chain.variant {
                WeilVariant::GUWeil | WeilVariant::SpEvenUnitary => -1,
                _ => 1,
            };
            let rho = |e: usize| crate::exact::pow(s, e as i64) * qpow(q, -(e as i64));
            let size = from_big(&transvection_count(&spec)?);
            Ok(Assembly {
                statistic: Statistic::FC { class: "transvections".into() },
                size,
                mean_terms: vec![(int(1), WeilScalar::rational(rho(1), q))],
                pair_terms: by_codim(dist.probs, &rho),
            })
        }
        Family::SpOdd => {
            let degree = qpow(q, -(n as i64));
            let class_ratio = |l: SpClassLabel| -> Result<WeilScalar> {
                Ok(weil_value_sp_odd_class(&spec, l)?.scale(&degree))
            };
            let pairs = |mode| -> Result<Vec<(usize, Rat, WeilScalar)>> {
                sp_odd_class_dist_mode(n, q, mode)?
                    .probs
                    .into_iter()
                    .map(|(l, p)| Ok((l.codim(), p, class_ratio(l)?)))
                    .collect()
            };
            let total = qpow(q, 2 * n as i64) - int(1);
            if q % 4 == 1 {
                // the transvection class on which χ is positive
                Ok(Assembly {
                    statistic: Statistic::FC { class: SpClassLabel::A22.to_string() },
                    size: total / int(2),
                    mean_terms: vec![(int(1), class_ratio(SpClassLabel::A22)?)],
                    pair_terms: pairs(PairMode::PairsFromCStar)?,
                })
            } else {
                if chain.r % 2 == 1 {
                    return Err(Error::Parity(format!(
                        "q ≡ 3 (mod 4) moments need even r, got r = {}",
                        chain.r
                    )));
                }
                Ok(Assembly {
                    statistic: Statistic::FStar,
                    size: total,
                    mean_terms: vec![
                        (ratio(1, 2), class_ratio(SpClassLabel::A21)?),
                        (ratio(1, 2), class_ratio(SpClassLabel::A22)?),
                    ],
                    pair_terms: pairs(PairMode::AllTransvections)?,
                })
            }
        }
    }
}

fn upper_f64(x: &WeilScalar) -> Result<f64> {
    if x.b.is_zero() {
        return Ok(to_f64_up(&x.a));
    }
    if x.kappa < 0 {
        return Err(Error::IdentityViolated(format!("variance {x} is not real")));
    }
    let a = to_f64_up(&x.a);
    let q = int(x.q as i64);
    let bd = if x.b.is_positive() {
        sqrt_up(&(&x.b * &x.b * &q))
    } else {
        -sqrt_down(&(&x.b * &x.b * &q))
    };
    Ok((a + bd).next_up())
}

/// First and second moments of the test function after `r` steps.
pub fn moments(chain: &ChainSpec) -> Result<MomentReport> {
    check_variant(&chain.group, chain.variant)?;
    let asm = assembly(chain)?;
    let q = chain.group.q;
    let r = chain.r;
    let zero = WeilScalar::zero(q);

    let mut m = zero.clone();
    for (w, rho) in &asm.mean_terms {
        m = m.add(&rho.pow(r).scale(w))?;
    }
    let m_sq = m.mul(&m)?.to_rational().ok_or_else(|| Error::IdentityViolated(format!("mean² {m} is irrational")))?;
    let mean_sq = &asm.size * m_sq;
    let mean_sign = m.real_sign().ok_or_else(|| Error::IdentityViolated(format!("mean {m} is not real")))?;

    let mut by_codim = [zero.clone(), zero.clone(), zero.clone()];
    for (e, p, rho) in &asm.pair_terms {
        by_codim[*e] = by_codim[*e].add(&rho.pow(r).scale(&(p * &asm.size)))?;
    }
    let [one, t1, t2] = by_codim;
    let second_moment = one.add(&t1)?.add(&t2)?;
    let t3 = WeilScalar::rational(mean_sq.clone(), q);
    let variance = second_moment.sub(&t3)?;
    let variance_upper = upper_f64(&variance)?;
    let mean = mean_sign as f64 * to_f64(&mean_sq).sqrt();
    Ok(MomentReport {
        chain: *chain,
        statistic: asm.statistic,
        mean_sq,
        mean_sign,
        mean,
        variance_rational: variance.is_rational(),
        second_moment,
        variance,
        variance_upper,
        terms: VarianceTerms { one, t1, t2, t3 },
    })
}

/// `1 − 1/t² − v/(m − t)²`, maximized over `t ∈ (0, m)` (or at the given `t`), clamped.
pub fn chebyshev_from(mean_abs: f64, variance: f64, threshold: Option<f64>) -> f64 {
    let m = mean_abs;
    if !(m.is_finite() && variance.is_finite()) || m <= 1.0 {
        return 0.0;
    }
    let g = |t: f64| 1.0 - 1.0 / (t * t) - variance / ((m - t) * (m - t));
    let best = match threshold {
        Some(t) if t > 0.0 && t < m => g(t),
        Some(_) => return 0.0,
        None => {
            let phi = (5f64.sqrt() - 1.0) / 2.0;
            let (mut lo, mut hi) = (0.0, m);
            let mut x1 = hi - phi * (hi - lo);
            let mut x2 = lo + phi * (hi - lo);
            let (mut g1, mut g2) = (g(x1), g(x2));
            for _ in 0..64 {
                if g1 < g2 {
                    lo = x1;
                    x1 = x2;
                    g1 = g2;
                    x2 = lo + phi * (hi - lo);
                    g2 = g(x2);
                } else {
                    hi = x2;
                    x2 = x1;
                    g2 = g1;
                    x1 = hi - phi * (hi - lo);
                    g1 = g(x1);
                }
            }
            g1.max(g2)
        }
    };
    if !best.is_finite() {
        return 0.0;
    }
    // absorb the rounding of the evaluation itself
    (best - 4.0 * f64::EPSILON).clamp(0.0, 1.0)
}

/// Second-moment lower bound on `‖K^r − π‖_TV`.
pub fn chebyshev_lower(chain: &ChainSpec, threshold: Option<f64>) -> Result<f64> {
    let m = moments(chain)?;
    Ok(chebyshev_from(m.mean_abs_lower(), m.variance_upper, threshold))
}

fn check_sp_odd(n: usize, q: u64) -> Result<GroupSpec> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("needs n ≥ 2, got {n}")));
    }
    let spec = GroupSpec::sp(n, q)?;
    if spec.family != Family::SpOdd {
        return Err(Error::InvalidSpec(format!("needs odd q, got {q}")));
    }
    Ok(spec)
}

/// `Σ_T p₂(T) χ(T)^r` assembled from the class distribution and the class values.
pub fn weil_assembly(n: usize, q: u64, r: u64, mode: PairMode) -> Result<WeilScalar> {
    let spec = check_sp_odd(n, q)?;
    let mut sum = WeilScalar::zero(q);
    for (label, p) in sp_odd_class_dist_mode(n, q, mode)?.probs {
        sum = sum.add(&weil_value_sp_odd_class(&spec, label)?.pow(r).scale(&p))?;
    }
    Ok(sum)
}

/// The same sum in closed form.
pub fn weil_closed_form(n: usize, q: u64, r: u64, mode: PairMode) -> Result<WeilScalar> {
    check_sp_odd(n, q)?;
    let (ni, ri) = (n as i64, r as i64);
    let d = qpow(q, 2 * ni) - int(1);
    let lead = qpow(q, (ni - 2) * ri) / &d;
    let qq = int(q as i64);
    let rank2 = qpow(q, 2 * ni) - &qq;
    let delta3r = WeilScalar::delta(q).pow(3 * r);
    let rat = |x: Rat| WeilScalar::rational(x, q);
    let inner = match mode {
        PairMode::PairsFromC if q % 4 == 1 => {
            let rank1 = (&qq - int(1)) / int(2) + int(crate::exact::sign(ri)) * (&qq - int(5)) / int(2);
            rat(int(2) * qpow(q, 2 * ri) + qpow(q, ri) * &rank2).add(&delta3r.scale(&rank1))?
        }
        PairMode::PairsFromC => {
            let rank1 = int(crate::exact::sign(ri)) * (&qq - int(3)) / int(2) + (&qq + int(1)) / int(2);
            rat(crate::exact::neg_qpow(q, ri) * &rank2).add(&delta3r.scale(&rank1))?
        }
        PairMode::AllTransvections => {
            if r % 2 == 1 {
                return Err(Error::Parity(format!("all-transvection closed form needs even r, got {r}")));
            }
            let kappa = kappa_of(q) as i64;
            let mid = (&qq - int(2)) * crate::exact::pow(kappa, ri / 2) * qpow(q, 3 * ri / 2);
            rat(qpow(q, 2 * ri) + mid + qpow(q, ri) * &rank2)
        }
        PairMode::PairsFromCStar => {
            return Err(Error::Unsupported("no closed form for pairs from the second class".into()))
        }
    };
    Ok(inner.scale(&lead))
}

/// `Σ_T p₂(T) χ(T)^r`, computed both ways; a mismatch is an internal error.
pub fn weighted_weil_sum(n: usize, q: u64, r: u64, mode: PairMode) -> Result<WeilScalar> {
    if mode == PairMode::PairsFromCStar {
        return Err(Error::InvalidParams("mode must be pairs from C or all transvections".into()));
    }
    let closed = weil_closed_form(n, q, r, mode)?;
    let assembled = weil_assembly(n, q, r, mode)?;
    if closed != assembled {
        return Err(Error::IdentityViolated(format!(
            "weighted Weil sum at (n={n}, q={q}, r={r}, {mode:?}): closed form {closed} ≠ assembly {assembled}"
        )));
    }
    Ok(closed)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProfileRow {
    pub r: u64,
    /// best available upper bound
    pub upper_tv: Option<f64>,
    /// best available lower bound
    pub lower_tv: Option<f64>,
    #[serde(serialize_with = "serialize_opt_rat")]
    pub exact_char_sum: Option<Rat>,
    pub upper_from_sum: Option<f64>,
    pub upper_closed: Option<f64>,
    pub lower_closed: Option<f64>,
    pub chebyshev: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundProfile {
    pub spec: GroupSpec,
    pub variant: WeilVariant,
    pub rows: Vec<ProfileRow>,
}

fn upper_offset(spec: &GroupSpec, r: u64) -> Option<Offset> {
    let base = if spec.family == Family::SpOdd { 2 * spec.n as u64 } else { spec.n as u64 };
    (r > base).then(|| Offset::whole((r - base) as i64))
}

fn lower_offset(spec: &GroupSpec, r: u64) -> Option<Offset> {
    if spec.family == Family::SpOdd {
        let t = 2 * spec.n as i64 - r as i64;
        (t > 0).then(|| Offset::halves(t))
    } else {
        let c = spec.n as i64 - r as i64;
        (c > 0).then(|| Offset::whole(c))
    }
}

fn profile_row(spec: &GroupSpec, variant: WeilVariant, counts: Option<&[Rat]>, r: u64) -> Result<ProfileRow> {
    let chain = ChainSpec::new(*spec, variant, r)?;
    let exact_char_sum = counts.map(|c| charbound_from_counts(&chain, c)).transpose()?;
    let upper_from_sum = exact_char_sum.as_ref().map(|s| sqrt_up(&(s / int(4))).min(1.0));
    let upper_closed = upper_offset(spec, r).and_then(|c| upper_closed(spec, variant, c).ok()).map(|u| u.value.min(1.0));
    let lower_closed = lower_offset(spec, r).and_then(|c| lower_closed(spec, variant, c).ok()).map(|l| l.value);
    let chebyshev = chebyshev_lower(&chain, None).ok();
    let min = |a: Option<f64>, b: Option<f64>| match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    };
    let max = |a: Option<f64>, b: Option<f64>| match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, y) => x.or(y),
    };
    Ok(ProfileRow {
        r,
        upper_tv: min(upper_from_sum, upper_closed),
        lower_tv: max(lower_closed, chebyshev),
        exact_char_sum,
        upper_from_sum,
        upper_closed,
        lower_closed,
        chebyshev,
    })
}

/// Bounds for every `r` in the range. The exact character sum is included when
/// the fixed-space counts are available (always for unitary and symplectic groups,
/// by enumeration for small `GL`).
pub fn profile(spec: &GroupSpec, variant: WeilVariant, r_range: RangeInclusive<u64>) -> Result<BoundProfile> {
    check_variant(spec, variant)?;
    let counts = match codim_counts(spec) {
        Ok(c) => Some(c),
        Err(Error::LimitExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    let rows = r_range
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|r| profile_row(spec, variant, counts.as_deref(), r))
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundProfile { spec: *spec, variant, rows })
}

#[cfg(test)]
mod tests;
