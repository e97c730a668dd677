//! Exactly uniform sampling of group elements and of transvections.

use rand::Rng;

use super::{hermitian_pair, row_basis, symplectic_pair, Family, Group, Mat, TransvectionClass, TransvectionParams, SAMPLER_CAP};
use crate::error::{Error, Result};
use crate::ffield::{Fe, Field, SquareClass};

fn random_fe<R: Rng + ?Sized>(f: &Field, rng: &mut R) -> Fe {
    Fe(rng.gen_range(0..f.size()))
}

fn random_nonzero<R: Rng + ?Sized>(f: &Field, rng: &mut R) -> Fe {
    Fe(rng.gen_range(1..f.size()))
}

fn random_vec<R: Rng + ?Sized>(f: &Field, d: usize, rng: &mut R) -> Vec<Fe> {
    (0..d).map(|_| random_fe(f, rng)).collect()
}

/// Uniform vector of the span of `basis`.
fn random_in_span<R: Rng + ?Sized>(f: &Field, d: usize, basis: &[Vec<Fe>], rng: &mut R) -> Vec<Fe> {
    let mut x = vec![Fe(0); d];
    for b in basis {
        let c = random_fe(f, rng);
        if c.0 == 0 {
            continue;
        }
        for (xi, &bi) in x.iter_mut().zip(b) {
            *xi = f.add(*xi, f.mul(c, bi));
        }
    }
    x
}

fn is_zero(v: &[Fe]) -> bool {
    v.iter().all(|x| x.0 == 0)
}

fn axpy(f: &Field, a: Fe, x: &[Fe], y: &mut [Fe]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi = f.add(*yi, f.mul(a, xi));
    }
}

fn standard_basis(d: usize) -> Vec<Vec<Fe>> {
    (0..d)
        .map(|i| {
            let mut e = vec![Fe(0); d];
            e[i] = Fe(1);
            e
        })
        .collect()
}

impl Group {
    /// A Haar-uniform element.
    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Mat> {
        match self.spec.family {
            Family::GL => self.sample_gl(rng),
            Family::GU => self.sample_gu(rng),
            Family::SpOdd | Family::SpEven => self.sample_sp(rng),
        }
    }

    fn sample_gl<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Mat> {
        let f = self.field();
        let d = self.dim();
        for _ in 0..SAMPLER_CAP {
            let cols: Vec<Vec<Fe>> = (0..d).map(|_| random_vec(f, d, rng)).collect();
            let m = Mat::from_cols(&cols)?;
            if m.det(f).0 != 0 {
                return Ok(m);
            }
        }
        Err(Error::SamplerCap(SAMPLER_CAP))
    }

    // Images of e_i, f_i chosen one hyperbolic pair at a time inside the
    // orthogonal complement of the pairs already placed.
    fn sample_sp<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Mat> {
        let f = self.field();
        let n = self.spec.n;
        let d = 2 * n;
        let mut w = standard_basis(d);
        let mut cols = vec![Vec::new(); d];
        for i in 0..n {
            let x = (0..SAMPLER_CAP)
                .map(|_| random_in_span(f, d, &w, rng))
                .find(|x| !is_zero(x))
                .ok_or(Error::SamplerCap(SAMPLER_CAP))?;
            let mut y = None;
            for _ in 0..SAMPLER_CAP {
                let cand = random_in_span(f, d, &w, rng);
                let s = symplectic_pair(f, &x, &cand);
                if s.0 != 0 {
                    let inv = f.inv(s)?;
                    y = Some(cand.iter().map(|&c| f.mul(c, inv)).collect::<Vec<_>>());
                    break;
                }
            }
            let y = y.ok_or(Error::SamplerCap(SAMPLER_CAP))?;
            let projected = w
                .iter()
                .map(|b| {
                    let mut p = b.clone();
                    axpy(f, symplectic_pair(f, &y, b), &x, &mut p);
                    axpy(f, f.neg(symplectic_pair(f, &x, b)), &y, &mut p);
                    p
                })
                .collect();
            w = row_basis(f, d, projected);
            debug_assert_eq!(w.len(), d - 2 * (i + 1));
            cols[i] = x;
            cols[n + i] = y;
        }
        Mat::from_cols(&cols)
    }

    // Orthonormal columns, each drawn from the complement of the previous ones.
    fn sample_gu<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Mat> {
        let f = self.field();
        let fs = &*self.fs;
        let d = self.dim();
        let mut w = standard_basis(d);
        let mut cols = Vec::with_capacity(d);
        for _ in 0..d {
            let x = (0..SAMPLER_CAP)
                .map(|_| random_in_span(f, d, &w, rng))
                .find(|x| hermitian_pair(fs, x, x) == f.one())
                .ok_or(Error::SamplerCap(SAMPLER_CAP))?;
            let projected = w
                .iter()
                .map(|b| {
                    let mut p = b.clone();
                    axpy(f, f.neg(hermitian_pair(fs, &x, b)), &x, &mut p);
                    p
                })
                .collect();
            w = row_basis(f, d, projected);
            cols.push(x);
        }
        Mat::from_cols(&cols)
    }

    /// A uniform transvection of the given class, with parameters uniform over
    /// the fiber of the parameterization.
    pub fn sample_transvection<R: Rng + ?Sized>(
        &self,
        class: TransvectionClass,
        rng: &mut R,
    ) -> Result<(Mat, TransvectionParams)> {
        self.spec.require_transvections()?;
        let f = self.field();
        let d = self.dim();
        let valid = match self.spec.family {
            Family::SpOdd => class != TransvectionClass::Single,
            _ => class == TransvectionClass::Single,
        };
        if !valid {
            return Err(Error::InvalidParams(format!("class {class:?} does not exist in {}", self.spec)));
        }
        let nonzero_vec = |rng: &mut R| -> Result<Vec<Fe>> {
            (0..SAMPLER_CAP)
                .map(|_| random_vec(f, d, rng))
                .find(|v| !is_zero(v))
                .ok_or(Error::SamplerCap(SAMPLER_CAP))
        };
        let params = match self.spec.family {
            Family::GL => {
                let v = nonzero_vec(rng)?;
                let w_star = (0..SAMPLER_CAP)
                    .map(|_| random_vec(f, d, rng))
                    .find(|w| {
                        !is_zero(w) && w.iter().zip(&v).fold(Fe(0), |acc, (&a, &b)| f.add(acc, f.mul(a, b))).0 == 0
                    })
                    .ok_or(Error::SamplerCap(SAMPLER_CAP))?;
                TransvectionParams::Linear { v, w_star }
            }
            Family::GU => {
                let v = (0..SAMPLER_CAP)
                    .map(|_| random_vec(f, d, rng))
                    .find(|v| !is_zero(v) && hermitian_pair(&self.fs, v, v).0 == 0)
                    .ok_or(Error::SamplerCap(SAMPLER_CAP))?;
                let cs = self.fs.trace_zero_units();
                let c = cs[rng.gen_range(0..cs.len())];
                TransvectionParams::Unitary { v, c }
            }
            Family::SpEven => TransvectionParams::Symplectic { alpha: random_nonzero(f, rng), v: nonzero_vec(rng)? },
            Family::SpOdd => {
                let want = if class == TransvectionClass::C { SquareClass::Square } else { SquareClass::NonSquare };
                // squares and non-squares are g^even and g^odd
                let half = (f.size() as u64 - 1) / 2;
                let e = 2 * rng.gen_range(0..half) + u64::from(want == SquareClass::NonSquare);
                let alpha = f.gen_pow(e);
                TransvectionParams::Symplectic { alpha, v: nonzero_vec(rng)? }
            }
        };
        Ok((self.make_transvection(&params)?, params))
    }

    /// A uniform transvection of the whole transvection set (both classes for sp-odd).
    pub fn sample_any_transvection<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(Mat, TransvectionParams)> {
        let class = match self.spec.family {
            Family::SpOdd => {
                if rng.gen_bool(0.5) {
                    TransvectionClass::C
                } else {
                    TransvectionClass::CStar
                }
            }
            _ => TransvectionClass::Single,
        };
        self.sample_transvection(class, rng)
    }
}
