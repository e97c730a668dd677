//! Products of two uniformly random transvections.
//!
//! [`codim_dist_gl`], [`codim_dist_gu`] and [`codim_dist_sp`] give the distribution of
//! the codimension of the fixed space of the product. In odd characteristic the
//! symplectic products are resolved further into conjugacy classes of `Sp_4(q)` type:
//! `Identity`, `A21`/`A22` (transvections), `A31`/`A32` (unipotent double
//! transvections), `D21`/`D22` (`−1` times a transvection on a hyperbolic plane) and the
//! semisimple `C3(i)` (eigenvalues `γ^{±i}`) and `C1(j)` (eigenvalues `η^{±j}`).
//!
//! Label conventions, fixed here and used throughout the crate:
//!
//! * `A21` is `T(μ, v)` with `μ` a square, `A22` with `μ` a non-square;
//! * `A31` is `T(α, u)T(β, v)` with `(u|v) = 0` and `−αβ` a square, `A32` otherwise;
//! * `D21` is the class where `−S` restricted to the plane is `T(μ, w)` with `μ` a square.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::clgroups::{row_basis, symplectic_pair, Group, Mat};
use crate::error::{Error, Result};
use crate::exact::{int, qpow, Rat};
use crate::ffield::{Fe, FieldSpec, SquareClass, TraceClass};

/// Probabilities of fixed-space codimension `e ∈ {0, 1, 2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodimDistribution {
    pub probs: [Rat; 3],
}

impl CodimDistribution {
    pub fn get(&self, e: usize) -> &Rat {
        &self.probs[e]
    }

    pub fn total(&self) -> Rat {
        self.probs.iter().sum()
    }
}

impl Serialize for CodimDistribution {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.probs.iter().map(crate::exact::render))
    }
}

fn check_rank(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("transvection products need n ≥ 2, got {n}")));
    }
    Ok(())
}

/// Product of two uniform transvections of `GL_n(q)`.
pub fn codim_dist_gl(n: usize, q: u64) -> Result<CodimDistribution> {
    check_rank(n)?;
    let n = n as i64;
    let qp = |e: i64| qpow(q, e);
    let q = int(q as i64);
    let denom = (qp(n) - int(1)) * (qp(n - 1) - int(1));
    let e2 = qp(2 * n - 1) - int(3) * qp(n) + qp(n - 1) + &q * &q;
    let e1 = int(2) * qp(n) - int(2) * qp(n - 1) - &q * &q - &q + int(2);
    let e0 = &q - int(1);
    Ok(CodimDistribution { probs: [e0 / &denom, e1 / &denom, e2 / &denom] })
}

/// Product of two uniform transvections of `GU_n(q)`.
pub fn codim_dist_gu(n: usize, q: u64) -> Result<CodimDistribution> {
    check_rank(n)?;
    let n = n as i64;
    let qp = |e: i64| qpow(q, e);
    let s = |e: i64| int(crate::exact::sign(e));
    let qq = int(q as i64);
    let denom = (qp(n) - s(n)) * (qp(n - 1) - s(n - 1));
    let e2 = qp(2 * n - 1) - s(n - 1) * qp(n) - s(n) * qp(n - 1) - &qq * &qq;
    let e1 = &qq * &qq - &qq - int(2);
    let e0 = &qq + int(1);
    Ok(CodimDistribution { probs: [e0 / &denom, e1 / &denom, e2 / &denom] })
}

/// Product of two uniform transvections of `Sp_2n(q)`, either parity of `q`.
pub fn codim_dist_sp(n: usize, q: u64) -> Result<CodimDistribution> {
    if n < 1 {
        return Err(Error::OutOfRange("n must be positive".into()));
    }
    let d = qpow(q, 2 * n as i64) - int(1);
    let qq = int(q as i64);
    Ok(CodimDistribution {
        probs: [int(1) / &d, (&qq - int(2)) / &d, (qpow(q, 2 * n as i64) - &qq) / &d],
    })
}

/// Conjugacy class labels for products of at most two symplectic transvections.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SpClassLabel {
    Identity,
    A21,
    A22,
    A31,
    A32,
    C1(u64),
    C3(u64),
    D21,
    D22,
}

impl SpClassLabel {
    /// Fixed-space codimension of the class.
    pub fn codim(&self) -> usize {
        match self {
            SpClassLabel::Identity => 0,
            SpClassLabel::A21 | SpClassLabel::A22 => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for SpClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpClassLabel::C1(j) => write!(f, "C1({j})"),
            SpClassLabel::C3(i) => write!(f, "C3({i})"),
            other => write!(f, "{other:?}"),
        }
    }
}

impl Serialize for SpClassLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Which pairs of transvections are multiplied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum PairMode {
    /// both factors uniform in the class of `T(1, v)`
    PairsFromC,
    /// both factors uniform in the other class
    PairsFromCStar,
    /// both factors uniform over all transvections
    AllTransvections,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpOddClassDistribution {
    pub n: usize,
    pub q: u64,
    pub mode: PairMode,
    #[serde(serialize_with = "serialize_class_map")]
    pub probs: BTreeMap<SpClassLabel, Rat>,
}

fn serialize_class_map<S: Serializer>(m: &BTreeMap<SpClassLabel, Rat>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_map(m.iter().map(|(k, v)| (k.to_string(), crate::exact::render(v))))
}

impl SpOddClassDistribution {
    pub fn get(&self, label: SpClassLabel) -> Rat {
        self.probs.get(&label).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn total(&self) -> Rat {
        self.probs.values().sum()
    }

    /// Marginal on fixed-space codimension.
    pub fn codim_marginal(&self) -> [Rat; 3] {
        let mut out = [Rat::zero(), Rat::zero(), Rat::zero()];
        for (label, p) in &self.probs {
            out[label.codim()] += p;
        }
        out
    }

    fn drop_zeros(mut self) -> Self {
        self.probs.retain(|_, p| !p.is_zero());
        self
    }
}

/// `C3(i)` labels allowed for this `q`: every `i` in `[1, (q−3)/2]` with the parity
/// forced by `q mod 4`, or all of them when `all` is set.
pub fn c3_labels(q: u64, all: bool) -> Vec<u64> {
    let even = q % 4 == 1;
    (1..=(q.saturating_sub(3)) / 2).filter(|i| all || (i % 2 == 0) == even).collect()
}

/// `C1(j)` labels: `j` in `[1, (q−1)/2]`, odd for `q ≡ 1 (mod 4)`, even otherwise.
pub fn c1_labels(q: u64, all: bool) -> Vec<u64> {
    let odd = q % 4 == 1;
    (1..=(q - 1) / 2).filter(|j| all || (j % 2 == 1) == odd).collect()
}

fn check_odd(n: usize, q: u64) -> Result<()> {
    check_rank(n)?;
    if q.is_multiple_of(2) {
        return Err(Error::InvalidSpec(format!("class distribution needs odd q, got {q}")));
    }
    crate::ffield::prime_power(q).ok_or(Error::NotPrimePower(q))?;
    Ok(())
}

/// Class distribution of `S = T₁T₂` with `T₁, T₂` independent and uniform.
pub fn sp_odd_class_dist(n: usize, q: u64) -> Result<SpOddClassDistribution> {
    sp_odd_class_dist_mode(n, q, PairMode::PairsFromC)
}

pub fn sp_odd_class_dist_mode(n: usize, q: u64, mode: PairMode) -> Result<SpOddClassDistribution> {
    use SpClassLabel::*;
    check_odd(n, q)?;
    let n = n as i64;
    let qq = int(q as i64);
    let d = qpow(q, 2 * n) - int(1);
    let top = qpow(q, 2 * n - 1);
    let mut probs = BTreeMap::new();
    match mode {
        PairMode::AllTransvections => {
            probs.insert(Identity, int(1) / &d);
            let rank1 = (&qq - int(2)) / (int(2) * &d);
            probs.insert(A21, rank1.clone());
            probs.insert(A22, rank1);
            let double = (&top - &qq) / (int(2) * &d);
            probs.insert(A31, double.clone());
            probs.insert(A32, double);
            let dclass = &top / (int(2) * &d);
            probs.insert(D21, dclass.clone());
            probs.insert(D22, dclass);
            for i in c3_labels(q, true) {
                probs.insert(C3(i), &top / &d);
            }
            for j in c1_labels(q, true) {
                probs.insert(C1(j), &top / &d);
            }
        }
        PairMode::PairsFromC | PairMode::PairsFromCStar => {
            let semisimple = int(2) * &top / &d;
            if q % 4 == 1 {
                probs.insert(Identity, int(2) / &d);
                probs.insert(A21, (&qq - int(5)) / (int(2) * &d));
                probs.insert(A22, (&qq - int(1)) / (int(2) * &d));
                probs.insert(A31, (&top - &qq) / &d);
                probs.insert(D21, semisimple.clone());
            } else {
                probs.insert(A21, (&qq - int(3)) / (int(2) * &d));
                probs.insert(A22, (&qq + int(1)) / (int(2) * &d));
                probs.insert(A32, (&top - &qq) / &d);
                probs.insert(D22, semisimple.clone());
            }
            for i in c3_labels(q, false) {
                probs.insert(C3(i), semisimple.clone());
            }
            for j in c1_labels(q, false) {
                probs.insert(C1(j), semisimple.clone());
            }
            if mode == PairMode::PairsFromCStar {
                probs = probs
                    .into_iter()
                    .map(|(k, v)| {
                        let k = match k {
                            A21 => A22,
                            A22 => A21,
                            D21 => D22,
                            D22 => D21,
                            other => other,
                        };
                        (k, v)
                    })
                    .collect();
            }
        }
    }
    let dist = SpOddClassDistribution { n: n as usize, q, mode, probs }.drop_zeros();
    if dist.total() != int(1) {
        return Err(Error::IdentityViolated(format!("class masses for ({n}, {q}) sum to {}", dist.total())));
    }
    Ok(dist)
}

/// Rank-level summary of a product of two uniform transvections of `Sp_2n(q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankSummary {
    pub identity: Rat,
    pub rank1: Rat,
    pub rank2: Rat,
}

pub fn sp_all_transvection_pair_summary(n: usize, q: u64) -> Result<RankSummary> {
    if q.is_multiple_of(2) {
        return Err(Error::InvalidSpec(format!("rank summary needs odd q, got {q}")));
    }
    let [identity, rank1, rank2] = codim_dist_sp(n, q)?.probs;
    Ok(RankSummary { identity, rank1, rank2 })
}

/// Class of `T(α, u) T(β, v)` in `Sp_2n(q)`, odd `q`, by the case analysis on the pair.
pub fn classify_sp_pair(fs: &FieldSpec, alpha: Fe, u: &[Fe], beta: Fe, v: &[Fe]) -> Result<SpClassLabel> {
    let f = fs.base();
    if fs.q().is_multiple_of(2) {
        return Err(Error::InvalidSpec("class labels need odd q".into()));
    }
    if alpha.0 == 0 || beta.0 == 0 || u.iter().all(|x| x.0 == 0) || v.iter().all(|x| x.0 == 0) {
        return Err(Error::InvalidParams("α, β, u, v must be nonzero".into()));
    }
    if u.len() != v.len() || !u.len().is_multiple_of(2) {
        return Err(Error::InvalidParams("u and v must lie in the same even-dimensional space".into()));
    }
    let square = |x: Fe| f.square_class(x) == SquareClass::Square;

    // v = s u: T(β, s u) = T(β s², u)
    let i = u.iter().position(|x| x.0 != 0).unwrap();
    let s = f.div(v[i], u[i])?;
    if u.iter().zip(v).all(|(&a, &b)| f.mul(s, a) == b) {
        let mu = f.add(alpha, f.mul(beta, f.mul(s, s)));
        return Ok(if mu.0 == 0 {
            SpClassLabel::Identity
        } else if square(mu) {
            SpClassLabel::A21
        } else {
            SpClassLabel::A22
        });
    }

    let p = symplectic_pair(f, u, v);
    if p.0 == 0 {
        let disc = f.neg(f.mul(alpha, beta));
        return Ok(if square(disc) { SpClassLabel::A31 } else { SpClassLabel::A32 });
    }

    // rescale v to v/p, so (u|v) = 1 and β becomes β p²
    let beta = f.mul(beta, f.mul(p, p));
    let prod = f.mul(alpha, beta);
    if prod == f.from_int(4) {
        // on ⟨u, v⟩, −S = T(−1/α, w) for w = −αu − 2v
        let mu = f.neg(f.inv(alpha)?);
        return Ok(if square(mu) { SpClassLabel::D21 } else { SpClassLabel::D22 });
    }
    Ok(match fs.trace_class(f.sub(f.from_int(2), prod))? {
        TraceClass::Split(i) => SpClassLabel::C3(i),
        TraceClass::NonSplit(j) => SpClassLabel::C1(j),
    })
}

/// Class of a product of at most two symplectic transvections, read off the matrix
/// itself: rank of `S − I`, trace on the moved plane, and the relevant square classes.
pub fn classify_sp_matrix(g: &Group, s: &Mat) -> Result<SpClassLabel> {
    let fs = g.fs();
    let f = fs.base();
    if !g.spec().family.is_symplectic() || fs.q().is_multiple_of(2) {
        return Err(Error::InvalidSpec("class labels need an odd-characteristic symplectic group".into()));
    }
    let d = g.dim();
    let diff = s.minus_identity(f);
    let square = |x: Fe| f.square_class(x) == SquareClass::Square;
    match diff.rank(f) {
        0 => return Ok(SpClassLabel::Identity),
        1 => {
            let data = g.extract_transvection_data(s)?;
            return Ok(if data.mu_class == SquareClass::Square { SpClassLabel::A21 } else { SpClassLabel::A22 });
        }
        2 => {}
        r => return Err(Error::InvalidParams(format!("rank(S − I) = {r} is not a product of two transvections"))),
    }
    let trace = (0..d).fold(Fe(0), |acc, i| f.add(acc, s.get(i, i)));
    let t = f.sub(trace, f.from_int(d as i64 - 2));
    let two = f.from_int(2);

    if t == two {
        // unipotent: the form (x|(S − I)y) on V / ker(S − I) decides isotropy
        let e = |k: usize| {
            let mut v = vec![Fe(0); d];
            v[k] = Fe(1);
            v
        };
        let mut reps: Vec<Vec<Fe>> = Vec::new();
        let mut images: Vec<Vec<Fe>> = Vec::new();
        for k in 0..d {
            let img = diff.col(k);
            let mut trial = images.clone();
            trial.push(img.clone());
            if row_basis(f, d, trial).len() > images.len() {
                images.push(img);
                reps.push(e(k));
            }
            if reps.len() == 2 {
                break;
            }
        }
        let b = |x: &[Fe], y: &[Fe]| symplectic_pair(f, x, &diff.apply(f, y));
        let det = f.sub(f.mul(b(&reps[0], &reps[0]), b(&reps[1], &reps[1])), f.mul(b(&reps[0], &reps[1]), b(&reps[1], &reps[0])));
        return Ok(if square(f.neg(det)) { SpClassLabel::A31 } else { SpClassLabel::A32 });
    }

    if t == f.neg(two) {
        // −S − I has rank one on W = im(S − I)
        let cols: Vec<Vec<Fe>> = (0..d).map(|k| diff.col(k)).collect();
        let w_basis = row_basis(f, d, cols);
        let minus_s_minus_i = |x: &[Fe]| -> Vec<Fe> {
            let sx = s.apply(f, x);
            sx.iter().zip(x).map(|(&a, &b)| f.neg(f.add(a, b))).collect()
        };
        let images: Vec<Vec<Fe>> = w_basis.iter().map(|x| minus_s_minus_i(x)).collect();
        let w = images
            .iter()
            .find(|v| v.iter().any(|c| c.0 != 0))
            .ok_or_else(|| Error::IdentityViolated("−S is trivial on its moved plane".into()))?
            .clone();
        let (x, img) = w_basis
            .iter()
            .zip(&images)
            .find(|(x, _)| symplectic_pair(f, &w, x).0 != 0)
            .ok_or_else(|| Error::IdentityViolated("moved plane is degenerate".into()))?;
        let k = w.iter().position(|c| c.0 != 0).unwrap();
        let mu = f.div(img[k], f.mul(symplectic_pair(f, &w, x), w[k]))?;
        return Ok(if square(mu) { SpClassLabel::D21 } else { SpClassLabel::D22 });
    }

    Ok(match fs.trace_class(t)? {
        TraceClass::Split(i) => SpClassLabel::C3(i),
        TraceClass::NonSplit(j) => SpClassLabel::C1(j),
    })
}
