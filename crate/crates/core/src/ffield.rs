//! Finite fields `GF(q)` and their quadratic extensions `GF(q^2)`.
//!
//! Elements are stored as [`Fe`] indices: the index of `c_0 + c_1 x + ... + c_{k-1} x^{k-1}`
//! is `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`, i.e. the base-`p` digits are the coordinates in
//! the power basis of the field modulus. Index order is also the enumeration order used
//! whenever a "smallest" element is chosen.
//!
//! Multiplication goes through discrete log / antilog tables built from the smallest
//! primitive element, which keeps the group-level code (ranks, products, closures) cheap.

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest `q` for which a [`FieldSpec`] (and thus `GF(q^2)`) is materialized.
pub const MAX_Q: u64 = 1024;

const ADD_TABLE_LIMIT: u32 = 256;

/// A field element, stored as its power-basis index.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Fe(pub u32);

/// Factor `q = p^k`; `None` when `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q {
        if q.is_multiple_of(p) {
            break;
        }
        p += 1;
    }
    if p * p > q {
        return Some((q, 1));
    }
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            out.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

// Dense polynomials over GF(p), low degree first.

fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    // m is monic
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        for (i, &c) in m.iter().enumerate() {
            let idx = shift + i;
            r[idx] = (r[idx] + p - (lead as u64 * c as u64 % p as u64) as u32) % p;
        }
        poly_trim(&mut r);
    }
    r
}

fn poly_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
    poly_rem(&prod, m, p)
}

fn poly_powmod(a: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
    let mut base = poly_rem(a, m, p);
    let mut acc = vec![1u32];
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &base, m, p);
        }
        base = poly_mulmod(&base, &base, m, p);
        e >>= 1;
    }
    acc
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let k = f.len() - 1;
    if k <= 1 {
        return true;
    }
    // trial division by every monic polynomial of degree 1..=k/2
    for d in 1..=k / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut g = digits(idx, p, d);
            g.push(1);
            if poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn digits(mut idx: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0u32; len];
    for slot in out.iter_mut() {
        *slot = (idx % p as u64) as u32;
        idx /= p as u64;
    }
    out
}

fn undigits(c: &[u32], p: u32) -> u32 {
    c.iter().rev().fold(0u32, |acc, &d| acc * p + d)
}

/// The lexicographically smallest monic irreducible polynomial of degree `k` over `GF(p)`,
/// comparing coefficients from the constant term upwards. Returned low degree first,
/// including the leading 1.
pub fn smallest_irreducible(p: u32, k: u32) -> Vec<u32> {
    let k = k as usize;
    let count = (p as u64).pow(k as u32);
    for idx in 0..count {
        // c_0 is the most significant digit of the enumeration counter
        let mut c = digits(idx, p, k);
        c.reverse();
        c.push(1);
        if is_irreducible(&c, p) {
            return c;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// `GF(p^k)` with log tables.
#[derive(Clone, Debug)]
pub struct Field {
    p: u32,
    k: u32,
    size: u32,
    modulus: Vec<u32>,
    generator: Fe,
    exp: Vec<u32>,
    log: Vec<u32>,
    add_table: Option<Vec<u16>>,
}

impl Field {
    /// Build `GF(p^k)`. `p` must be prime.
    pub fn new(p: u32, k: u32) -> Field {
        let size = p.pow(k);
        let modulus = smallest_irreducible(p, k);
        let order = (size - 1) as u64;
        let factors = prime_factors(order);
        let generator = (1..size)
            .find(|&idx| {
                let a = digits(idx as u64, p, k as usize);
                factors
                    .iter()
                    .all(|&l| poly_powmod(&a, order / l, &modulus, p) != [1])
            })
            .expect("multiplicative group is cyclic");

        let g = digits(generator as u64, p, k as usize);
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![0u32; size as usize];
        let mut cur = vec![1u32];
        for e in 0..order as u32 {
            let mut c = cur.clone();
            c.resize(k as usize, 0);
            let idx = undigits(&c, p);
            exp.push(idx);
            log[idx as usize] = e;
            cur = poly_mulmod(&cur, &g, &modulus, p);
        }

        let mut field = Field {
            p,
            k,
            size,
            modulus,
            generator: Fe(generator),
            exp,
            log,
            add_table: None,
        };
        if size <= ADD_TABLE_LIMIT {
            let mut table = vec![0u16; (size * size) as usize];
            for a in 0..size {
                for b in 0..size {
                    table[(a * size + b) as usize] = field.add_digits(a, b) as u16;
                }
            }
            field.add_table = Some(table);
        }
        field
    }

    /// `GF(q)` for a prime power `q ≤ MAX_Q^2`.
    pub fn of_size(q: u64) -> Result<Field> {
        let (p, k) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if q > MAX_Q * MAX_Q {
            return Err(Error::FieldTooLarge { q, limit: MAX_Q * MAX_Q });
        }
        Ok(Field::new(p as u32, k))
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn size(&self) -> u32 {
        self.size
    }
    /// Monic modulus, low degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    /// The primitive element all discrete logs refer to.
    pub fn generator(&self) -> Fe {
        self.generator
    }

    pub fn zero(&self) -> Fe {
        Fe(0)
    }
    pub fn one(&self) -> Fe {
        Fe(1)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> + '_ {
        (0..self.size).map(Fe)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Fe> + '_ {
        (1..self.size).map(Fe)
    }

    /// Power-basis coordinates.
    pub fn coeffs(&self, a: Fe) -> Vec<u32> {
        digits(a.0 as u64, self.p, self.k as usize)
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Result<Fe> {
        if c.len() != self.k as usize || c.iter().any(|&d| d >= self.p) {
            return Err(Error::OutOfRange(format!("coefficients {c:?} for GF({})", self.size)));
        }
        Ok(Fe(undigits(c, self.p)))
    }

    fn add_digits(&self, mut a: u32, mut b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.k {
            let d = (a % self.p + b % self.p) % self.p;
            out += d * place;
            place *= self.p;
            a /= self.p;
            b /= self.p;
        }
        out
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        match &self.add_table {
            Some(t) => Fe(t[(a.0 * self.size + b.0) as usize] as u32),
            None => Fe(self.add_digits(a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        if self.p == 2 {
            return a;
        }
        let mut x = a.0;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.k {
            let d = x % self.p;
            out += ((self.p - d) % self.p) * place;
            place *= self.p;
            x /= self.p;
        }
        Fe(out)
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe(0);
        }
        let order = self.size - 1;
        let e = (self.log[a.0 as usize] + self.log[b.0 as usize]) % order;
        Fe(self.exp[e as usize])
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let order = self.size - 1;
        let e = (order - self.log[a.0 as usize]) % order;
        Ok(Fe(self.exp[e as usize]))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return Fe(1);
        }
        if a.0 == 0 {
            return Fe(0);
        }
        let order = (self.size - 1) as u64;
        let l = self.log[a.0 as usize] as u64;
        Fe(self.exp[((l * (e % order)) % order) as usize])
    }

    /// Discrete log to the base [`Field::generator`].
    pub fn dlog(&self, a: Fe) -> Option<u64> {
        (a.0 != 0).then(|| self.log[a.0 as usize] as u64)
    }

    pub fn gen_pow(&self, e: u64) -> Fe {
        let order = (self.size - 1) as u64;
        Fe(self.exp[(e % order) as usize])
    }

    pub fn square_class(&self, a: Fe) -> SquareClass {
        if a.0 == 0 {
            SquareClass::Zero
        } else if self.p == 2 || self.log[a.0 as usize].is_multiple_of(2) {
            SquareClass::Square
        } else {
            SquareClass::NonSquare
        }
    }

    /// A square root when one exists.
    pub fn sqrt(&self, a: Fe) -> Option<Fe> {
        if a.0 == 0 {
            return Some(a);
        }
        let order = (self.size - 1) as u64;
        let l = self.log[a.0 as usize] as u64;
        if order % 2 == 1 {
            // squaring is a bijection; its inverse is raising to (order+1)/2
            return Some(self.gen_pow(l * order.div_ceil(2)));
        }
        l.is_multiple_of(2).then(|| self.gen_pow(l / 2))
    }
}

/// Square class of a field element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SquareClass {
    Zero,
    Square,
    NonSquare,
}

/// `GF(q)` together with `GF(q^2)`, the embedding between them and the
/// distinguished elements `θ` (primitive in `GF(q^2)`), `γ = θ^(q+1)`, `η = θ^(q-1)`.
#[derive(Clone, Debug)]
pub struct FieldSpec {
    q: u64,
    base: Field,
    ext: Field,
    embed: Vec<Fe>,
}

impl FieldSpec {
    pub fn new(q: u64) -> Result<FieldSpec> {
        Self::with_limit(q, MAX_Q)
    }

    pub fn with_limit(q: u64, limit: u64) -> Result<FieldSpec> {
        let (p, k) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if q > limit {
            return Err(Error::FieldTooLarge { q, limit });
        }
        let base = Field::new(p as u32, k);
        let ext = Field::new(p as u32, 2 * k);

        // a root of the base modulus inside GF(q^2) fixes the embedding
        let modulus = base.modulus().to_vec();
        let eval = |x: Fe| {
            modulus
                .iter()
                .rev()
                .fold(ext.zero(), |acc, &c| ext.add(ext.mul(acc, x), ext.from_int(c as i64)))
        };
        let root = ext.elements().find(|&x| eval(x) == ext.zero()).expect("GF(q) embeds in GF(q^2)");
        let embed = base
            .elements()
            .map(|a| {
                base.coeffs(a).iter().enumerate().fold(ext.zero(), |acc, (i, &c)| {
                    ext.add(acc, ext.mul(ext.from_int(c as i64), ext.pow(root, i as u64)))
                })
            })
            .collect();
        Ok(FieldSpec { q, base, ext, embed })
    }

    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn p(&self) -> u32 {
        self.base.p()
    }
    pub fn k(&self) -> u32 {
        self.base.k()
    }
    /// `GF(q)`.
    pub fn base(&self) -> &Field {
        &self.base
    }
    /// `GF(q^2)`.
    pub fn ext(&self) -> &Field {
        &self.ext
    }

    /// κ = (−1)^((q−1)/2); `None` in characteristic 2.
    pub fn kappa(&self) -> Option<i8> {
        (self.q % 2 == 1).then_some(if self.q % 4 == 1 { 1 } else { -1 })
    }

    pub fn theta(&self) -> Fe {
        self.ext.generator()
    }
    pub fn theta_order(&self) -> u64 {
        self.q * self.q - 1
    }
    pub fn gamma(&self) -> Fe {
        self.ext.gen_pow(self.q + 1)
    }
    pub fn eta(&self) -> Fe {
        self.ext.gen_pow(self.q - 1)
    }

    pub fn embed(&self, a: Fe) -> Fe {
        self.embed[a.0 as usize]
    }

    /// `x ↦ x^q` on `GF(q^2)`.
    pub fn frobenius(&self, x: Fe) -> Fe {
        self.ext.pow(x, self.q)
    }

    /// `x^(q+1)`, the norm to `GF(q)` (as an element of `GF(q^2)`).
    pub fn norm(&self, x: Fe) -> Fe {
        self.ext.pow(x, self.q + 1)
    }

    /// Pull an element of the fixed field of Frobenius back to `GF(q)`.
    pub fn restrict(&self, x: Fe) -> Option<Fe> {
        self.embed.iter().position(|&e| e == x).map(|i| Fe(i as u32))
    }

    /// Elements `c ≠ 0` of `GF(q^2)` with `c + c^q = 0`.
    pub fn trace_zero_units(&self) -> Vec<Fe> {
        self.ext
            .nonzero()
            .filter(|&c| self.ext.add(c, self.frobenius(c)) == self.ext.zero())
            .collect()
    }

    /// Conjugacy type of a semisimple `2×2` symplectic matrix with trace `t ∈ GF(q)`,
    /// `t ≠ ±2`, odd `q`. The eigenvalues `λ^{±1}` are `γ^{±i}` (split) or `η^{±j}`
    /// (non-split); the index is reduced to its smallest positive representative.
    pub fn trace_class(&self, t: Fe) -> Result<TraceClass> {
        let (b, e) = (&self.base, &self.ext);
        let two = b.from_int(2);
        if self.q.is_multiple_of(2) || t == two || t == b.neg(two) {
            return Err(Error::OutOfRange("trace must differ from ±2 in odd characteristic".into()));
        }
        let disc = b.sub(b.mul(t, t), b.from_int(4));
        let split = b.square_class(disc) == SquareClass::Square;

        let root = e.sqrt(self.embed(disc)).expect("every element of GF(q) is a square in GF(q^2)");
        let lambda = e.div(e.add(self.embed(t), root), e.from_int(2))?;
        let m = e.dlog(lambda).expect("eigenvalue is nonzero");
        let q = self.q;
        if split {
            if m % (q + 1) != 0 {
                return Err(Error::IdentityViolated(format!("split eigenvalue θ^{m} outside GF(q)")));
            }
            let i = (m / (q + 1)) % (q - 1);
            Ok(TraceClass::Split(i.min(q - 1 - i)))
        } else {
            if m % (q - 1) != 0 {
                return Err(Error::IdentityViolated(format!("eigenvalue θ^{m} does not have norm 1")));
            }
            let j = (m / (q - 1)) % (q + 1);
            Ok(TraceClass::NonSplit(j.min(q + 1 - j)))
        }
    }
}

/// Eigenvalue type of a semisimple element of `SL_2(q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum TraceClass {
    /// eigenvalues `γ^{±i}`
    Split(u64),
    /// eigenvalues `η^{±j}`
    NonSplit(u64),
}

/// Number of pairs `(x, y)` of nonzero squares of `GF(q)` with `x + 1 = y`.
pub fn count_adjacent_squares(field: &Field) -> Result<u64> {
    if field.p() == 2 {
        return Err(Error::Unsupported("adjacent-square count needs odd q".into()));
    }
    let one = field.one();
    Ok(field
        .nonzero()
        .filter(|&x| {
            field.square_class(x) == SquareClass::Square
                && field.square_class(field.add(x, one)) == SquareClass::Square
        })
        .count() as u64)
}

/// One `α ∈ GF(q)^{×2} \ {4}` of the `2 − α = λ + λ^{-1}` census.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sq2Entry {
    pub alpha: Fe,
    pub class: TraceClass,
    /// whether the index parity matches the one forced by `q mod 4`
    pub parity_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sq2Census {
    pub q: u64,
    pub entries: Vec<Sq2Entry>,
}

impl Sq2Census {
    pub fn split_count(&self) -> u64 {
        self.entries.iter().filter(|e| matches!(e.class, TraceClass::Split(_))).count() as u64
    }
    pub fn nonsplit_count(&self) -> u64 {
        self.entries.iter().filter(|e| matches!(e.class, TraceClass::NonSplit(_))).count() as u64
    }
    pub fn counts(&self) -> (u64, u64) {
        (self.split_count(), self.nonsplit_count())
    }
    pub fn parity_holds(&self) -> bool {
        self.entries.iter().all(|e| e.parity_ok)
    }
}

/// Write `2 − α` as `λ + λ^{-1}` for every nonzero square `α ≠ 4` and record whether
/// `λ` is a power of `γ` or of `η`, with the exponent.
pub fn sq2_census(fs: &FieldSpec) -> Result<Sq2Census> {
    let q = fs.q();
    if q.is_multiple_of(2) {
        return Err(Error::Unsupported("square census needs odd q".into()));
    }
    let b = fs.base();
    let four = b.from_int(4);
    let two = b.from_int(2);
    let q1 = q % 4 == 1;
    let mut entries = Vec::new();
    for alpha in b.nonzero() {
        if alpha == four || b.square_class(alpha) != SquareClass::Square {
            continue;
        }
        let class = fs.trace_class(b.sub(two, alpha))?;
        let parity_ok = match class {
            TraceClass::Split(i) => (i % 2 == 0) == q1,
            TraceClass::NonSplit(j) => (j % 2 == 1) == q1,
        };
        entries.push(Sq2Entry { alpha, class, parity_ok });
    }
    Ok(Sq2Census { q, entries })
}
