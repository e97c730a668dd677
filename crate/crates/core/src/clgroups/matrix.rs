use std::fmt;

use crate::error::{Error, Result};
use crate::ffield::{Fe, Field};

/// A dense square matrix over a [`Field`], row-major.
///
/// The field is not stored; every arithmetic method takes it explicitly.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat {
    dim: usize,
    data: Vec<Fe>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<u32>> = (0..self.dim).map(|i| self.row(i).iter().map(|e| e.0).collect()).collect();
        write!(f, "Mat{rows:?}")
    }
}

impl Mat {
    pub fn zero(dim: usize) -> Mat {
        Mat { dim, data: vec![Fe(0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Mat {
        let mut m = Mat::zero(dim);
        for i in 0..dim {
            m.set(i, i, Fe(1));
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Fe>]) -> Result<Mat> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidSpec("matrix rows must form a square array".into()));
        }
        Ok(Mat { dim, data: rows.concat() })
    }

    /// Matrix whose `j`-th column is `cols[j]`.
    pub fn from_cols(cols: &[Vec<Fe>]) -> Result<Mat> {
        Ok(Mat::from_rows(cols)?.transpose())
    }

    pub fn from_indices(dim: usize, idx: &[u32]) -> Result<Mat> {
        if idx.len() != dim * dim {
            return Err(Error::InvalidSpec(format!("expected {} entries", dim * dim)));
        }
        Ok(Mat { dim, data: idx.iter().map(|&i| Fe(i)).collect() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Fe {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: Fe) {
        self.data[i * self.dim + j] = x;
    }

    pub fn entries(&self) -> &[Fe] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Fe] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn col(&self, j: usize) -> Vec<Fe> {
        (0..self.dim).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zero(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// Entrywise image under a field map.
    pub fn map(&self, f: impl Fn(Fe) -> Fe) -> Mat {
        Mat { dim: self.dim, data: self.data.iter().map(|&x| f(x)).collect() }
    }

    pub fn is_identity(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| self.get(i, j) == Fe((i == j) as u32)))
    }

    pub fn mul(&self, f: &Field, other: &Mat) -> Mat {
        let n = self.dim;
        let mut out = Mat::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.0 == 0 {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if b.0 != 0 {
                        let idx = i * n + j;
                        out.data[idx] = f.add(out.data[idx], f.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, f: &Field, x: &[Fe]) -> Vec<Fe> {
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(x).fold(Fe(0), |acc, (&a, &b)| f.add(acc, f.mul(a, b))))
            .collect()
    }

    pub fn sub(&self, f: &Field, other: &Mat) -> Mat {
        Mat {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect(),
        }
    }

    /// `self − I`.
    pub fn minus_identity(&self, f: &Field) -> Mat {
        let mut m = self.clone();
        for i in 0..self.dim {
            m.set(i, i, f.sub(m.get(i, i), Fe(1)));
        }
        m
    }

    pub fn pow(&self, f: &Field, mut e: u64) -> Mat {
        let mut acc = Mat::identity(self.dim);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base);
            }
            base = base.mul(f, &base);
            e >>= 1;
        }
        acc
    }

    pub fn rank(&self, f: &Field) -> usize {
        rank_of_rows(f, self.dim, self.data.chunks(self.dim).map(|r| r.to_vec()).collect())
    }

    pub fn det(&self, f: &Field) -> Fe {
        let n = self.dim;
        let mut a = self.clone();
        let mut det = Fe(1);
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| a.get(r, c).0 != 0) else {
                return Fe(0);
            };
            if p != c {
                for j in 0..n {
                    let t = a.get(p, j);
                    a.set(p, j, a.get(c, j));
                    a.set(c, j, t);
                }
                det = f.neg(det);
            }
            let piv = a.get(c, c);
            det = f.mul(det, piv);
            let inv = f.inv(piv).expect("pivot is nonzero");
            for r in c + 1..n {
                let factor = f.mul(a.get(r, c), inv);
                if factor.0 != 0 {
                    for j in c..n {
                        let v = f.sub(a.get(r, j), f.mul(factor, a.get(c, j)));
                        a.set(r, j, v);
                    }
                }
            }
        }
        det
    }

    pub fn inverse(&self, f: &Field) -> Result<Mat> {
        let n = self.dim;
        let mut a = self.clone();
        let mut b = Mat::identity(n);
        for c in 0..n {
            let p = (c..n).find(|&r| a.get(r, c).0 != 0).ok_or(Error::DivisionByZero)?;
            if p != c {
                for j in 0..n {
                    let t = a.get(p, j);
                    a.set(p, j, a.get(c, j));
                    a.set(c, j, t);
                    let t = b.get(p, j);
                    b.set(p, j, b.get(c, j));
                    b.set(c, j, t);
                }
            }
            let inv = f.inv(a.get(c, c))?;
            for j in 0..n {
                a.set(c, j, f.mul(a.get(c, j), inv));
                b.set(c, j, f.mul(b.get(c, j), inv));
            }
            for r in 0..n {
                if r == c {
                    continue;
                }
                let factor = a.get(r, c);
                if factor.0 == 0 {
                    continue;
                }
                for j in 0..n {
                    a.set(r, j, f.sub(a.get(r, j), f.mul(factor, a.get(c, j))));
                    b.set(r, j, f.sub(b.get(r, j), f.mul(factor, b.get(c, j))));
                }
            }
        }
        Ok(b)
    }
}

/// Reduced row echelon form of a list of vectors, dropping zero rows.
pub fn row_basis(f: &Field, width: usize, mut rows: Vec<Vec<Fe>>) -> Vec<Vec<Fe>> {
    let mut r = 0;
    for c in 0..width {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c].0 != 0) else {
            continue;
        };
        rows.swap(r, p);
        let inv = f.inv(rows[r][c]).expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i == r {
                continue;
            }
            let factor = rows[i][c];
            if factor.0 == 0 {
                continue;
            }
            for j in 0..width {
                let v = f.sub(rows[i][j], f.mul(factor, rows[r][j]));
                rows[i][j] = v;
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    rows
}

fn rank_of_rows(f: &Field, width: usize, rows: Vec<Vec<Fe>>) -> usize {
    row_basis(f, width, rows).len()
}

/// Scale `v` so that its first nonzero coordinate is 1.
pub fn normalize(f: &Field, v: &[Fe]) -> Option<Vec<Fe>> {
    let lead = v.iter().copied().find(|x| x.0 != 0)?;
    let inv = f.inv(lead).ok()?;
    Some(v.iter().map(|&x| f.mul(x, inv)).collect())
}

/// Every vector of `F^dim`, in index order (first coordinate fastest).
pub fn all_vectors(f: &Field, dim: usize) -> impl Iterator<Item = Vec<Fe>> + '_ {
    let size = f.size() as u64;
    let total = size.pow(dim as u32);
    (0..total).map(move |mut idx| {
        (0..dim)
            .map(|_| {
                let d = (idx % size) as u32;
                idx /= size;
                Fe(d)
            })
            .collect()
    })
}
