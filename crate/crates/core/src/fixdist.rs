//! Distribution of the fixed-space dimension `dim ker(g − 1)` of a uniform element
//! of `GU_n(q)` or `Sp_2n(q)`, in closed form.

use num_traits::Zero;
use serde::Serialize;

use crate::clgroups::{gu_order, sp_order, Family, GroupSpec};
use crate::error::{Error, Result};
use crate::exact::{choose2, from_big, int, neg_qpow, qpow, sign, Rat};

/// `probs[k]` is the probability that a uniform element fixes a `k`-dimensional space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedSpaceDistribution {
    pub spec: GroupSpec,
    #[serde(serialize_with = "serialize_rats")]
    pub probs: Vec<Rat>,
}

pub(crate) fn serialize_rats<S: serde::Serializer>(v: &[Rat], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(crate::exact::render))
}

/// Probability that a uniform element of `GU_n(q)` has a `k`-dimensional fixed space.
pub fn rs_gu_fixed_dim(n: usize, q: u64, k: usize) -> Result<Rat> {
    if k > n {
        return Err(Error::OutOfRange(format!("fixed dimension {k} exceeds n = {n}")));
    }
    let (k, m) = (k as i64, (n - k) as i64);
    let mut sum = Rat::zero();
    for i in 0..=m {
        // (−1)^i (−q)^binom(i,2) / ((−q)^(ki) |GU_i|)
        let term = int(sign(i)) * neg_qpow(q, choose2(i)) * neg_qpow(q, -k * i) / from_big(&gu_order(i as u64, q));
        sum += term;
    }
    Ok(sum / from_big(&gu_order(k as u64, q)))
}

/// Probability that a uniform element of `Sp_2n(q)` has a `k`-dimensional fixed space.
pub fn rs_sp_fixed_dim(n: usize, q: u64, k: usize) -> Result<Rat> {
    if k > 2 * n {
        return Err(Error::OutOfRange(format!("fixed dimension {k} exceeds 2n = {}", 2 * n)));
    }
    let kh = (k / 2) as i64;
    let n = n as i64;
    let sp = |i: i64| from_big(&sp_order(i as u64, q));
    if k.is_multiple_of(2) {
        let mut sum = Rat::zero();
        for i in 0..=n - kh {
            sum += int(sign(i)) * qpow(q, i * (i + 1)) / (sp(i) * qpow(q, 2 * i * kh));
        }
        Ok(sum / sp(kh))
    } else {
        let mut sum = Rat::zero();
        for i in 0..n - kh {
            sum += int(sign(i)) * qpow(q, i * (i + 1)) / (sp(i) * qpow(q, 2 * i * (kh + 1)));
        }
        Ok(sum / (sp(kh) * qpow(q, 2 * kh + 1)))
    }
}

/// Upper bound `(1 + q^−(k+1)) q^(n² − k²)` on the number of elements of `GU_n(q)`
/// with a `k`-dimensional fixed space.
pub fn gu_fixed_count_bound(n: usize, q: u64, k: usize) -> Result<Rat> {
    if k > n {
        return Err(Error::OutOfRange(format!("fixed dimension {k} exceeds n = {n}")));
    }
    let (n, k) = (n as i64, k as i64);
    Ok((int(1) + qpow(q, -(k + 1))) * qpow(q, n * n - k * k))
}

/// The full closed-form distribution for a unitary or symplectic group.
pub fn fixed_space_distribution(spec: &GroupSpec) -> Result<FixedSpaceDistribution> {
    let probs = match spec.family {
        Family::GU => (0..=spec.n).map(|k| rs_gu_fixed_dim(spec.n, spec.q, k)).collect::<Result<_>>()?,
        Family::SpOdd | Family::SpEven => {
            (0..=2 * spec.n).map(|k| rs_sp_fixed_dim(spec.n, spec.q, k)).collect::<Result<_>>()?
        }
        Family::GL => {
            return Err(Error::Unsupported(
                "no closed form for GL fixed spaces; use enumeration or Monte Carlo".into(),
            ))
        }
    };
    Ok(FixedSpaceDistribution { spec: *spec, probs })
}

impl FixedSpaceDistribution {
    /// Re-key by codimension `dim − k`.
    pub fn by_codim(&self) -> Vec<Rat> {
        self.probs.iter().rev().cloned().collect()
    }

    /// Element counts per fixed dimension (exact integers).
    pub fn counts(&self) -> Vec<Rat> {
        let order = from_big(&crate::clgroups::group_order(&self.spec));
        self.probs.iter().map(|p| p * &order).collect()
    }
}
