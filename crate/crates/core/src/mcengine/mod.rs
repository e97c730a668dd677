//! Monte-Carlo estimators, exact brute-force oracles and the verification suite.
//!
//! Sampling is split into fixed-size chunks. Chunk `i` draws from its own
//! `ChaCha8Rng` seeded with [`derive_seed`]`(seed, i)`, and chunk histograms are
//! merged by addition, so a run is reproducible from `(spec, seed, samples)` no
//! matter how many worker threads execute it.

mod oracle;
mod verify;

use std::collections::BTreeMap;
use std::fmt::Display;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::clgroups::{Family, Group, GroupSpec, Mat, TransvectionClass};
use crate::error::{Error, Result};

pub use oracle::{
    brute_adjacent_squares, brute_sq2_census, oracle_fixed_dim, oracle_pair_exact, oracle_sp_class_exact,
    DEFAULT_PAIR_LIMIT,
};
pub use verify::{verify, CheckResult, CheckStatus, Level, Mutation, VerifyReport, SCHEMA_VERSION};

/// Draws per chunk.
pub const CHUNK: u64 = 1024;

/// Seed of chunk `index` under master seed `seed` (the splitmix64 output mix).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Tally of sampled keys.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Histogram<K: Ord> {
    pub counts: BTreeMap<K, u64>,
    pub total: u64,
    pub seed: u64,
}

impl<K: Ord + Clone> Histogram<K> {
    pub fn empty(seed: u64) -> Self {
        Histogram { counts: BTreeMap::new(), total: 0, seed }
    }

    pub fn record(&mut self, key: K) {
        *self.counts.entry(key).or_default() += 1;
        self.total += 1;
    }

    /// Sum of two tallies (the seed of `self` is kept).
    pub fn merge(mut self, other: Self) -> Self {
        for (k, c) in other.counts {
            *self.counts.entry(k).or_default() += c;
        }
        self.total += other.total;
        self
    }

    pub fn count(&self, key: &K) -> u64 {
        self.counts.get(key).copied().unwrap_or(0)
    }

    pub fn frequency(&self, key: &K) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.count(key) as f64 / self.total as f64
        }
    }

    /// Estimated standard error of [`frequency`](Self::frequency).
    pub fn stderr(&self, key: &K) -> f64 {
        let f = self.frequency(key);
        binomial_sigma(f, self.total)
    }

    /// `|frequency − p| ≤ z·σ(p)` with the binomial `σ` at the hypothesised `p`.
    pub fn within(&self, key: &K, p: f64, z: f64) -> bool {
        (self.frequency(key) - p).abs() <= z * binomial_sigma(p, self.total)
    }
}

/// Standard deviation of a binomial proportion.
pub fn binomial_sigma(p: f64, n: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    (p * (1.0 - p) / n as f64).sqrt()
}

impl<K: Ord + Display> Serialize for Histogram<K> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let counts: BTreeMap<String, u64> = self.counts.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        let mut st = s.serialize_struct("Histogram", 3)?;
        st.serialize_field("seed", &self.seed)?;
        st.serialize_field("total", &self.total)?;
        st.serialize_field("counts", &counts)?;
        st.end()
    }
}

/// Run `draw` `samples` times over seeded chunks in parallel.
pub fn run_chunked<K, F>(samples: u64, seed: u64, draw: F) -> Result<Histogram<K>>
where
    K: Ord + Clone + Send,
    F: Fn(&mut ChaCha8Rng) -> Result<K> + Sync,
{
    let chunks = samples.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, i));
            let n = CHUNK.min(samples - i * CHUNK);
            let mut h = Histogram::empty(seed);
            for _ in 0..n {
                h.record(draw(&mut rng)?);
            }
            Ok(h)
        })
        .try_reduce(|| Histogram::empty(seed), |a, b| Ok(a.merge(b)))
}

/// Fixed-space dimensions of Haar-uniform elements.
pub fn mc_fixed_dim(spec: &GroupSpec, samples: u64, seed: u64) -> Result<Histogram<usize>> {
    let g = Group::new(*spec)?;
    run_chunked(samples, seed, |rng| {
        let m = g.sample_uniform(rng)?;
        Ok(g.dim() - g.codim(&m))
    })
}

/// Which transvections the walk multiplies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum TransvectionPool {
    /// the class of `T(1, v)` (the only class outside odd-`q` symplectic groups)
    Designated,
    /// all transvections
    All,
}

/// Fixed-space codimension of products of `s` independent uniform transvections.
pub fn mc_transv_product(
    spec: &GroupSpec,
    s: usize,
    samples: u64,
    seed: u64,
    pool: TransvectionPool,
) -> Result<Histogram<usize>> {
    if s == 0 {
        return Err(Error::OutOfRange("walk length s must be at least 1".into()));
    }
    let g = Group::new(*spec)?;
    let class = if spec.family == Family::SpOdd { TransvectionClass::C } else { TransvectionClass::Single };
    let f = g.field();
    run_chunked(samples, seed, |rng| {
        let mut m = Mat::identity(g.dim());
        for _ in 0..s {
            let t = match pool {
                TransvectionPool::Designated => g.sample_transvection(class, rng)?.0,
                TransvectionPool::All => g.sample_any_transvection(rng)?.0,
            };
            m = m.mul(f, &t);
        }
        Ok(g.codim(&m))
    })
}

#[cfg(test)]
mod tests;
