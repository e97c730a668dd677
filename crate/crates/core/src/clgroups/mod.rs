//! Finite classical groups `GL_n(q)`, `GU_n(q)` and `Sp_2n(q)` as matrix groups.
//!
//! Conventions:
//!
//! * `Sp_2n(q)` preserves `(x|y) = xᵀJy` with `J = [[0, I_n], [−I_n, 0]]`, so
//!   `(e_i|f_i) = 1` for `e_i` the `i`-th and `f_i` the `(n+i)`-th basis vector.
//! * `GU_n(q)` lives in `GL_n(q^2)` and preserves `(x|y) = Σ x_i^q y_i`.
//! * A symplectic transvection is `T(α, v): x ↦ x + α(v|x)v`; a unitary one is
//!   `y ↦ y + c(v|y)v` with `v` isotropic and `c + c^q = 0`; a linear one is `I + v w*`
//!   with `w*(v) = 0`.

mod matrix;
mod sample;

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffield::{Fe, Field, FieldSpec, SquareClass};

pub use matrix::{all_vectors, normalize, row_basis, Mat};

/// Default cap on the number of elements materialized by [`Group::elements`].
pub const DEFAULT_ENUM_LIMIT: u64 = 10_000_000;

const CLOSURE_SEED: u64 = 0x5eed_c105;

/// Rejections tolerated per constraint by the uniform samplers.
pub const SAMPLER_CAP: u64 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    GL,
    GU,
    SpOdd,
    SpEven,
}

impl Family {
    pub fn is_symplectic(self) -> bool {
        matches!(self, Family::SpOdd | Family::SpEven)
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::GL => "gl",
            Family::GU => "gu",
            Family::SpOdd => "sp-odd",
            Family::SpEven => "sp-even",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupSpec {
    pub family: Family,
    pub n: usize,
    pub q: u64,
}

impl GroupSpec {
    pub fn new(family: Family, n: usize, q: u64) -> Result<GroupSpec> {
        crate::ffield::prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if n == 0 {
            return Err(Error::InvalidSpec("rank n must be positive".into()));
        }
        match family {
            Family::SpOdd if q.is_multiple_of(2) => {
                return Err(Error::InvalidSpec(format!("sp-odd needs odd q, got {q}")))
            }
            Family::SpEven if q % 2 == 1 => {
                return Err(Error::InvalidSpec(format!("sp-even needs even q, got {q}")))
            }
            _ => {}
        }
        Ok(GroupSpec { family, n, q })
    }

    /// `Sp_2n(q)` with the family chosen by the parity of `q`.
    pub fn sp(n: usize, q: u64) -> Result<GroupSpec> {
        GroupSpec::new(if q.is_multiple_of(2) { Family::SpEven } else { Family::SpOdd }, n, q)
    }

    pub fn gl(n: usize, q: u64) -> Result<GroupSpec> {
        GroupSpec::new(Family::GL, n, q)
    }

    pub fn gu(n: usize, q: u64) -> Result<GroupSpec> {
        GroupSpec::new(Family::GU, n, q)
    }

    /// Dimension of the natural module.
    pub fn dim(&self) -> usize {
        if self.family.is_symplectic() {
            2 * self.n
        } else {
            self.n
        }
    }

    pub fn form_kind(&self) -> FormKind {
        match self.family {
            Family::GL => FormKind::None,
            Family::GU => FormKind::Hermitian,
            Family::SpOdd | Family::SpEven => FormKind::Symplectic,
        }
    }

    fn require_transvections(&self) -> Result<()> {
        if matches!(self.family, Family::GL | Family::GU) && self.n < 2 {
            return Err(Error::InvalidSpec(format!("{} transvections need n ≥ 2", self.family)));
        }
        Ok(())
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(n={}, q={})", self.family, self.n, self.q)
    }
}

fn big_pow(q: u64, e: u64) -> BigUint {
    num_traits::pow(BigUint::from(q), e as usize)
}

/// Exact group order.
pub fn group_order(spec: &GroupSpec) -> BigUint {
    let (n, q) = (spec.n as u64, spec.q);
    match spec.family {
        Family::GL => {
            let mut acc = big_pow(q, n * (n - 1) / 2);
            for i in 1..=n {
                acc *= big_pow(q, i) - 1u32;
            }
            acc
        }
        Family::GU => gu_order(n, q),
        Family::SpOdd | Family::SpEven => sp_order(n, q),
    }
}

/// `|GU_n(q)|`, with `|GU_0| = 1`.
pub fn gu_order(n: u64, q: u64) -> BigUint {
    let mut acc = big_pow(q, n * n.saturating_sub(1) / 2);
    for i in 1..=n {
        let qi = big_pow(q, i);
        acc *= if i % 2 == 0 { qi - 1u32 } else { qi + 1u32 };
    }
    acc
}

/// `|Sp_2n(q)|`, with `|Sp_0| = 1`.
pub fn sp_order(n: u64, q: u64) -> BigUint {
    let mut acc = big_pow(q, n * n);
    for i in 1..=n {
        acc *= big_pow(q, 2 * i) - 1u32;
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FormKind {
    None,
    Symplectic,
    Hermitian,
}

/// The invariant form of a group, as a Gram matrix over the field of definition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormData {
    pub kind: FormKind,
    pub gram: Mat,
}

/// Transvection conjugacy classes. Odd-characteristic symplectic groups have two,
/// told apart by the square class of `α` in `T(α, v)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TransvectionClass {
    Single,
    C,
    CStar,
}

/// Parameters of a transvection; see the module documentation for each family.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TransvectionParams {
    Linear { v: Vec<Fe>, w_star: Vec<Fe> },
    Unitary { v: Vec<Fe>, c: Fe },
    Symplectic { alpha: Fe, v: Vec<Fe> },
}

/// Result of reading `T(μ, v)` back off a symplectic transvection matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransvectionData {
    pub v: Vec<Fe>,
    pub mu: Fe,
    pub mu_class: SquareClass,
}

/// `(x|y) = Σ_i x_i y_{n+i} − x_{n+i} y_i`.
pub fn symplectic_pair(f: &Field, x: &[Fe], y: &[Fe]) -> Fe {
    let n = x.len() / 2;
    (0..n).fold(Fe(0), |acc, i| {
        let t = f.sub(f.mul(x[i], y[n + i]), f.mul(x[n + i], y[i]));
        f.add(acc, t)
    })
}

/// `(x|y) = Σ_i x_i^q y_i` over `GF(q^2)`.
pub fn hermitian_pair(fs: &FieldSpec, x: &[Fe], y: &[Fe]) -> Fe {
    let e = fs.ext();
    x.iter().zip(y).fold(Fe(0), |acc, (&a, &b)| e.add(acc, e.mul(fs.frobenius(a), b)))
}

/// A group together with the field it is defined over.
#[derive(Clone, Debug)]
pub struct Group {
    spec: GroupSpec,
    fs: Arc<FieldSpec>,
}

impl Group {
    pub fn new(spec: GroupSpec) -> Result<Group> {
        let fs = Arc::new(FieldSpec::new(spec.q)?);
        Ok(Group { spec, fs })
    }

    pub fn with_field(spec: GroupSpec, fs: Arc<FieldSpec>) -> Result<Group> {
        if fs.q() != spec.q {
            return Err(Error::InvalidSpec(format!("field of size {} for {spec}", fs.q())));
        }
        Ok(Group { spec, fs })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn fs(&self) -> &FieldSpec {
        &self.fs
    }

    pub fn field_spec(&self) -> Arc<FieldSpec> {
        self.fs.clone()
    }

    /// The field the matrices are written over: `GF(q^2)` for unitary groups.
    pub fn field(&self) -> &Field {
        match self.spec.family {
            Family::GU => self.fs.ext(),
            _ => self.fs.base(),
        }
    }

    pub fn dim(&self) -> usize {
        self.spec.dim()
    }

    pub fn order(&self) -> BigUint {
        group_order(&self.spec)
    }

    pub fn form(&self) -> FormData {
        let d = self.dim();
        let f = self.field();
        let kind = self.spec.form_kind();
        let gram = match kind {
            FormKind::Symplectic => {
                let n = self.spec.n;
                let mut g = Mat::zero(d);
                for i in 0..n {
                    g.set(i, n + i, f.one());
                    g.set(n + i, i, f.neg(f.one()));
                }
                g
            }
            _ => Mat::identity(d),
        };
        FormData { kind, gram }
    }

    /// The invariant form, `None` for `GL`.
    pub fn pair(&self, x: &[Fe], y: &[Fe]) -> Option<Fe> {
        match self.spec.family {
            Family::GL => None,
            Family::GU => Some(hermitian_pair(&self.fs, x, y)),
            _ => Some(symplectic_pair(self.fs.base(), x, y)),
        }
    }

    /// Whether `m` is invertible and preserves the invariant form.
    pub fn preserves_form(&self, m: &Mat) -> bool {
        let f = self.field();
        if m.dim() != self.dim() || m.det(f).0 == 0 {
            return false;
        }
        let gram = self.form().gram;
        match self.spec.family {
            Family::GL => true,
            Family::GU => {
                let conj = m.map(|x| self.fs.frobenius(x)).transpose();
                conj.mul(f, &gram).mul(f, m) == gram
            }
            _ => m.transpose().mul(f, &gram).mul(f, m) == gram,
        }
    }

    pub fn make_transvection(&self, params: &TransvectionParams) -> Result<Mat> {
        self.spec.require_transvections()?;
        let d = self.dim();
        let f = self.field();
        let bad = |msg: &str| Err(Error::InvalidParams(msg.to_string()));
        let check_vec = |v: &[Fe]| v.len() == d && v.iter().all(|x| x.0 < f.size());
        let outer = |v: &[Fe], w: &[Fe]| {
            let mut m = Mat::identity(d);
            for i in 0..d {
                for j in 0..d {
                    m.set(i, j, f.add(m.get(i, j), f.mul(v[i], w[j])));
                }
            }
            m
        };
        match (self.spec.family, params) {
            (Family::GL, TransvectionParams::Linear { v, w_star }) => {
                if !check_vec(v) || !check_vec(w_star) {
                    return bad("vectors must have the module dimension");
                }
                if v.iter().all(|x| x.0 == 0) {
                    return bad("v must be nonzero");
                }
                if w_star.iter().all(|x| x.0 == 0) {
                    return bad("w* must be nonzero");
                }
                let wv = v.iter().zip(w_star).fold(Fe(0), |acc, (&a, &b)| f.add(acc, f.mul(a, b)));
                if wv.0 != 0 {
                    return bad("w*(v) must vanish");
                }
                Ok(outer(v, w_star))
            }
            (Family::GU, TransvectionParams::Unitary { v, c }) => {
                if !check_vec(v) {
                    return bad("v must have the module dimension");
                }
                if v.iter().all(|x| x.0 == 0) {
                    return bad("v must be nonzero");
                }
                if hermitian_pair(&self.fs, v, v).0 != 0 {
                    return bad("v must be isotropic");
                }
                if c.0 == 0 || f.add(*c, self.fs.frobenius(*c)).0 != 0 {
                    return bad("c must be nonzero with c + c^q = 0");
                }
                let w: Vec<Fe> = v.iter().map(|&x| f.mul(*c, self.fs.frobenius(x))).collect();
                Ok(outer(v, &w))
            }
            (Family::SpOdd | Family::SpEven, TransvectionParams::Symplectic { alpha, v }) => {
                if !check_vec(v) {
                    return bad("v must have the module dimension");
                }
                if alpha.0 == 0 || alpha.0 >= f.size() {
                    return bad("alpha must be a nonzero field element");
                }
                if v.iter().all(|x| x.0 == 0) {
                    return bad("v must be nonzero");
                }
                Ok(outer(v, &self.symplectic_covector(*alpha, v)))
            }
            _ => bad("parameter kind does not match the group family"),
        }
    }

    // coefficients of x ↦ α(v|x)
    fn symplectic_covector(&self, alpha: Fe, v: &[Fe]) -> Vec<Fe> {
        let f = self.field();
        let n = self.spec.n;
        (0..2 * n)
            .map(|j| {
                let l = if j < n { f.neg(v[n + j]) } else { v[j - n] };
                f.mul(alpha, l)
            })
            .collect()
    }

    /// Class of the transvection built from `params` (assumed valid).
    pub fn class_of_params(&self, params: &TransvectionParams) -> TransvectionClass {
        match (self.spec.family, params) {
            (Family::SpOdd, TransvectionParams::Symplectic { alpha, .. }) => {
                match self.field().square_class(*alpha) {
                    SquareClass::Square => TransvectionClass::C,
                    _ => TransvectionClass::CStar,
                }
            }
            _ => TransvectionClass::Single,
        }
    }

    /// Classes of transvections and their sizes.
    pub fn transvection_census(&self) -> Result<Vec<(TransvectionClass, BigUint)>> {
        transvection_census(&self.spec)
    }

    /// `rank(m − I)` over the field of the natural module.
    pub fn codim(&self, m: &Mat) -> usize {
        m.minus_identity(self.field()).rank(self.field())
    }

    /// Every transvection of the group, each once, with its class.
    pub fn transvections(&self) -> Result<Vec<(Mat, TransvectionParams, TransvectionClass)>> {
        self.spec.require_transvections()?;
        let f = self.field();
        let d = self.dim();
        let lines: Vec<Vec<Fe>> = all_vectors(f, d)
            .filter(|v| v.iter().find(|x| x.0 != 0) == Some(&Fe(1)))
            .collect();
        let mut out = Vec::new();
        match self.spec.family {
            Family::GL => {
                for v in &lines {
                    for w in all_vectors(f, d) {
                        if w.iter().all(|x| x.0 == 0) {
                            continue;
                        }
                        let wv = v.iter().zip(&w).fold(Fe(0), |acc, (&a, &b)| f.add(acc, f.mul(a, b)));
                        if wv.0 == 0 {
                            let p = TransvectionParams::Linear { v: v.clone(), w_star: w };
                            out.push((self.make_transvection(&p)?, p, TransvectionClass::Single));
                        }
                    }
                }
            }
            Family::GU => {
                let cs = self.fs.trace_zero_units();
                for v in lines.iter().filter(|v| hermitian_pair(&self.fs, v, v).0 == 0) {
                    for &c in &cs {
                        let p = TransvectionParams::Unitary { v: v.clone(), c };
                        out.push((self.make_transvection(&p)?, p, TransvectionClass::Single));
                    }
                }
            }
            Family::SpOdd | Family::SpEven => {
                for v in &lines {
                    for alpha in f.nonzero() {
                        let p = TransvectionParams::Symplectic { alpha, v: v.clone() };
                        let class = self.class_of_params(&p);
                        out.push((self.make_transvection(&p)?, p, class));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Every element of the group, each exactly once.
    pub fn elements(&self, limit: u64) -> Result<Vec<Mat>> {
        let order = self.order();
        if order > BigUint::from(limit) {
            return Err(Error::LimitExceeded {
                what: "group enumeration",
                size: order.to_string(),
                limit: limit.to_string(),
            });
        }
        let order: usize = order.try_into().expect("bounded by the limit");
        let f = self.field();
        let d = self.dim();
        let elements = match self.spec.family {
            Family::GL => {
                let total = (f.size() as u64).checked_pow((d * d) as u32).filter(|&t| t <= 100 * limit).ok_or(
                    Error::LimitExceeded {
                        what: "matrix space scan",
                        size: format!("{}^{}", f.size(), d * d),
                        limit: (100 * limit).to_string(),
                    },
                )?;
                let size = f.size() as u64;
                let mut out = Vec::with_capacity(order);
                for idx in 0..total {
                    let mut x = idx;
                    let entries: Vec<u32> = (0..d * d)
                        .map(|_| {
                            let e = (x % size) as u32;
                            x /= size;
                            e
                        })
                        .collect();
                    let m = Mat::from_indices(d, &entries)?;
                    if m.det(f).0 != 0 {
                        out.push(m);
                    }
                }
                out
            }
            _ => {
                let mut gens: Vec<Mat> = if d >= 2 && !(self.spec.family == Family::GU && self.spec.n < 2) {
                    self.transvections()?.into_iter().map(|t| t.0).collect()
                } else {
                    Vec::new()
                };
                if self.spec.family == Family::GU {
                    let mut t = Mat::identity(d);
                    t.set(0, 0, self.fs.eta());
                    gens.push(t);
                }
                let mut els = closure(f, d, &gens, order);
                // Transvections can fail to generate SU (SU_3(2) is the small exception);
                // top up with seeded uniform elements until the order is reached.
                let mut rng = ChaCha8Rng::seed_from_u64(CLOSURE_SEED);
                for _ in 0..8 {
                    if els.len() >= order {
                        break;
                    }
                    gens.push(self.sample_uniform(&mut rng)?);
                    els = closure(f, d, &gens, order);
                }
                els
            }
        };
        if elements.len() != order {
            return Err(Error::IdentityViolated(format!(
                "enumerated {} elements of {}, expected {order}",
                elements.len(),
                self.spec
            )));
        }
        Ok(elements)
    }

    /// Read off `T(μ, v)` from a symplectic transvection.
    pub fn extract_transvection_data(&self, m: &Mat) -> Result<TransvectionData> {
        if !self.spec.family.is_symplectic() {
            return Err(Error::Unsupported("transvection data is defined for symplectic groups".into()));
        }
        let f = self.field();
        let not_transvection = || Error::InvalidParams("matrix is not a symplectic transvection".into());
        let diff = m.minus_identity(f);
        if diff.rank(f) != 1 {
            return Err(not_transvection());
        }
        let v = (0..self.dim()).map(|j| diff.col(j)).find(|c| c.iter().any(|x| x.0 != 0)).unwrap();
        let i = v.iter().position(|x| x.0 != 0).unwrap();
        let d = self.dim();
        let (k, vk) = (0..d)
            .map(|k| {
                let mut e = vec![Fe(0); d];
                e[k] = f.one();
                (k, symplectic_pair(f, &v, &e))
            })
            .find(|(_, p)| p.0 != 0)
            .ok_or_else(not_transvection)?;
        let mu = f.div(diff.get(i, k), f.mul(vk, v[i]))?;
        if mu.0 == 0 {
            return Err(not_transvection());
        }
        let rebuilt = self.make_transvection(&TransvectionParams::Symplectic { alpha: mu, v: v.clone() })?;
        if &rebuilt != m {
            return Err(not_transvection());
        }
        Ok(TransvectionData { mu_class: f.square_class(mu), v, mu })
    }

    /// Class of a transvection matrix: the one containing `T(1, v)` or the other.
    pub fn transvection_class(&self, m: &Mat) -> Result<TransvectionClass> {
        match self.spec.family {
            Family::SpOdd => Ok(match self.extract_transvection_data(m)?.mu_class {
                SquareClass::Square => TransvectionClass::C,
                _ => TransvectionClass::CStar,
            }),
            _ => {
                if self.codim(m) == 1 && self.preserves_form(m) && m.minus_identity(self.field()).pow(self.field(), 2) == Mat::zero(self.dim()) {
                    Ok(TransvectionClass::Single)
                } else {
                    Err(Error::InvalidParams("matrix is not a transvection".into()))
                }
            }
        }
    }
}

/// Breadth-first closure of a generating set, stopping early at `order` elements.
fn closure(f: &Field, d: usize, gens: &[Mat], order: usize) -> Vec<Mat> {
    let id = Mat::identity(d);
    let mut seen: HashSet<Mat> = HashSet::with_capacity(order);
    let mut out = Vec::with_capacity(order);
    let mut queue = VecDeque::new();
    seen.insert(id.clone());
    out.push(id.clone());
    queue.push_back(id);
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = g.mul(f, s);
            if seen.insert(h.clone()) {
                out.push(h.clone());
                queue.push_back(h);
            }
        }
        if out.len() > order {
            break;
        }
    }
    out
}

/// Transvection classes and sizes for a group specification.
pub fn transvection_census(spec: &GroupSpec) -> Result<Vec<(TransvectionClass, BigUint)>> {
    spec.require_transvections()?;
    let (n, q) = (spec.n as u64, spec.q);
    Ok(match spec.family {
        Family::GL => {
            let count = (big_pow(q, n) - 1u32) * (big_pow(q, n - 1) - 1u32) / BigUint::from(q - 1);
            vec![(TransvectionClass::Single, count)]
        }
        Family::GU => vec![(TransvectionClass::Single, gu_isotropic_count(n, q) / BigUint::from(q + 1))],
        Family::SpEven => vec![(TransvectionClass::Single, big_pow(q, 2 * n) - 1u32)],
        Family::SpOdd => {
            let half = (big_pow(q, 2 * n) - 1u32) / 2u32;
            vec![(TransvectionClass::C, half.clone()), (TransvectionClass::CStar, half)]
        }
    })
}

/// Number of nonzero isotropic vectors of the `n`-dimensional unitary space,
/// `(q^n − (−1)^n)(q^(n−1) − (−1)^(n−1))`.
pub fn gu_isotropic_count(n: u64, q: u64) -> BigUint {
    let signed = |e: u64| {
        let p = big_pow(q, e);
        if e.is_multiple_of(2) {
            p - 1u32
        } else {
            p + 1u32
        }
    };
    if n == 0 {
        return BigUint::zero();
    }
    signed(n) * signed(n - 1)
}

/// Total number of transvections.
pub fn transvection_count(spec: &GroupSpec) -> Result<BigUint> {
    Ok(transvection_census(spec)?.into_iter().fold(BigUint::zero(), |acc, (_, c)| acc + c))
}
