//! Exact distributions by brute force, independent of the closed forms.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::clgroups::{all_vectors, Family, Group, GroupSpec, Mat, DEFAULT_ENUM_LIMIT};
use crate::error::{Error, Result};
use crate::exact::{int, Rat};
use crate::ffield::{Fe, Field, FieldSpec, TraceClass};
use crate::transprod::{classify_sp_pair, CodimDistribution, PairMode, SpClassLabel, SpOddClassDistribution};

/// Default bound on the number of pairs or tuples an oracle may visit.
pub const DEFAULT_PAIR_LIMIT: u64 = 100_000_000;

fn check_limit(what: &'static str, size: u64, limit: u64) -> Result<()> {
    if size > limit {
        return Err(Error::LimitExceeded { what, size: size.to_string(), limit: limit.to_string() });
    }
    Ok(())
}

/// Codimension distribution of `T₁T₂` over all ordered pairs of transvections.
pub fn oracle_pair_exact(spec: &GroupSpec, limit: u64) -> Result<CodimDistribution> {
    let g = Group::new(*spec)?;
    let census = crate::clgroups::transvection_count(spec)?;
    if census > BigUint::from(1u64 << 32) {
        return Err(Error::LimitExceeded { what: "transvection pairs", size: format!("({census})²"), limit: limit.to_string() });
    }
    let c: u64 = census.try_into().expect("checked above");
    check_limit("transvection pairs", c.saturating_mul(c), limit)?;
    let ts: Vec<Mat> = g.transvections()?.into_iter().map(|t| t.0).collect();
    let f = g.field();
    let tally = ts
        .par_iter()
        .map(|a| {
            let mut t = [0u64; 3];
            for b in &ts {
                t[g.codim(&a.mul(f, b))] += 1;
            }
            t
        })
        .reduce(|| [0; 3], |x, y| [x[0] + y[0], x[1] + y[1], x[2] + y[2]]);
    let total = int((ts.len() * ts.len()) as i64);
    Ok(CodimDistribution { probs: tally.map(|k| int(k as i64) / &total) })
}

/// Class distribution of `T(α, e₁)T(β, v)` over `α, β` in the classes selected by
/// `mode` and all nonzero `v`. By transitivity of the group on each class this is
/// the distribution for independent uniform factors.
pub fn oracle_sp_class_exact(n: usize, q: u64, mode: PairMode, limit: u64) -> Result<SpOddClassDistribution> {
    let spec = GroupSpec::sp(n, q)?;
    if spec.family != Family::SpOdd || n < 2 {
        return Err(Error::InvalidSpec(format!("class oracle needs odd q and n ≥ 2, got {spec}")));
    }
    let fs = FieldSpec::new(q)?;
    let f = fs.base();
    let squares: Vec<Fe> = f.nonzero().filter(|&x| f.sqrt(x).is_some()).collect();
    let nonsquares: Vec<Fe> = f.nonzero().filter(|&x| f.sqrt(x).is_none()).collect();
    let all: Vec<Fe> = f.nonzero().collect();
    let (alphas, betas) = match mode {
        PairMode::PairsFromC => (&squares, &squares),
        PairMode::PairsFromCStar => (&nonsquares, &nonsquares),
        PairMode::AllTransvections => (&all, &all),
    };
    let vectors = q.checked_pow(2 * n as u32).ok_or(Error::LimitExceeded {
        what: "class oracle tuples",
        size: format!("{q}^{}", 2 * n),
        limit: limit.to_string(),
    })? - 1;
    check_limit("class oracle tuples", (alphas.len() * betas.len()) as u64 * vectors, limit)?;
    let mut u = vec![Fe(0); 2 * n];
    u[0] = Fe(1);
    let vs: Vec<Vec<Fe>> = all_vectors(f, 2 * n).filter(|v| v.iter().any(|x| x.0 != 0)).collect();
    let tally = vs
        .par_iter()
        .map(|v| -> Result<BTreeMap<SpClassLabel, u64>> {
            let mut t = BTreeMap::new();
            for &a in alphas {
                for &b in betas {
                    *t.entry(classify_sp_pair(&fs, a, &u, b, v)?).or_default() += 1;
                }
            }
            Ok(t)
        })
        .try_reduce(BTreeMap::new, |mut x, y| {
            for (k, c) in y {
                *x.entry(k).or_default() += c;
            }
            Ok(x)
        })?;
    let total = int(tally.values().sum::<u64>() as i64);
    let probs = tally.into_iter().map(|(k, c)| (k, int(c as i64) / &total)).collect();
    Ok(SpOddClassDistribution { n, q, mode, probs })
}

/// Fixed-space dimension probabilities by enumerating the group.
pub fn oracle_fixed_dim(spec: &GroupSpec, limit: u64) -> Result<Vec<Rat>> {
    let g = Group::new(*spec)?;
    let els = g.elements(limit.min(DEFAULT_ENUM_LIMIT))?;
    let mut counts = vec![0u64; g.dim() + 1];
    for m in &els {
        counts[g.dim() - g.codim(m)] += 1;
    }
    let total = int(els.len() as i64);
    Ok(counts.into_iter().map(|c| int(c as i64) / &total).collect())
}

/// `#{x ≠ 0 : x and x + 1 are nonzero squares}`, by listing the squares.
pub fn brute_adjacent_squares(f: &Field) -> u64 {
    let mut is_sq = vec![false; f.size() as usize];
    for x in f.nonzero() {
        is_sq[f.mul(x, x).0 as usize] = true;
    }
    f.nonzero().filter(|&x| is_sq[x.0 as usize] && is_sq[f.add(x, f.one()).0 as usize]).count() as u64
}

/// For every nonzero square `α ≠ 4`, the root `λ` of `λ² − (2 − α)λ + 1` found by
/// scanning `GF(q²)`, classified as `γ^i` (when `λ ∈ GF(q)`) or `η^j`, with the
/// index folded to `min(k, order − k)`.
pub fn brute_sq2_census(fs: &FieldSpec) -> Result<Vec<(Fe, TraceClass)>> {
    if fs.q().is_multiple_of(2) {
        return Err(Error::Unsupported("square census needs odd q".into()));
    }
    let (b, e) = (fs.base(), fs.ext());
    let q = fs.q();
    let mut out = Vec::new();
    let four = b.from_int(4);
    for alpha in b.nonzero() {
        if alpha == four || !b.nonzero().any(|x| b.mul(x, x) == alpha) {
            continue;
        }
        let t = fs.embed(b.sub(b.from_int(2), alpha));
        let lambda = e
            .nonzero()
            .find(|&l| e.add(e.sub(e.mul(l, l), e.mul(t, l)), e.one()).0 == 0)
            .ok_or_else(|| Error::IdentityViolated(format!("no root for α = {alpha:?}")))?;
        let m = e.dlog(lambda).expect("nonzero");
        let fold = |k: u64, order: u64| k.min(order - k);
        let class = if e.pow(lambda, q) == lambda {
            TraceClass::Split(fold((m / (q + 1)) % (q - 1), q - 1))
        } else {
            TraceClass::NonSplit(fold((m / (q - 1)) % (q + 1), q + 1))
        };
        out.push((alpha, class));
    }
    Ok(out)
}
