//! The verification suite: every closed form against an independent computation.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::clgroups::{Family, GroupSpec};
use crate::error::{Error, Result};
use crate::exact::{int, render, Rat};
use crate::ffield::{count_adjacent_squares, prime_power, sq2_census, FieldSpec};
use crate::fixdist::fixed_space_distribution;
use crate::mixbounds::{
    charbound_from_counts, codim_counts, lower_closed, moments, upper_closed, weil_assembly, weil_closed_form,
    ChainSpec, Offset,
};
use crate::transprod::{
    codim_dist_gl, codim_dist_gu, codim_dist_sp, sp_odd_class_dist_mode, CodimDistribution, PairMode,
};
use crate::weilchar::WeilVariant;

use super::oracle::{
    brute_adjacent_squares, brute_sq2_census, oracle_fixed_dim, oracle_pair_exact, oracle_sp_class_exact,
    DEFAULT_PAIR_LIMIT,
};
use super::{mc_fixed_dim, mc_transv_product, TransvectionPool};

/// Version of the serialized report layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Quick,
    Full,
}

impl FromStr for Level {
    type Err = Error;
    fn from_str(s: &str) -> Result<Level> {
        match s {
            "quick" => Ok(Level::Quick),
            "full" => Ok(Level::Full),
            _ => Err(Error::InvalidParams(format!("unknown level {s:?}"))),
        }
    }
}

/// Deliberate corruption of one closed form, to show the suite catches it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    /// adds `1/denominator` to the codimension-1 probability of the GL pair distribution
    GlPairCoefficient,
}

impl FromStr for Mutation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Mutation> {
        match s {
            "gl-pair-coefficient" => Ok(Mutation::GlPairCoefficient),
            _ => Err(Error::InvalidParams(format!("unknown mutation {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CheckStatus {
    ExactMatch,
    WithinTolerance,
    #[serde(rename = "FAIL")]
    Fail,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::ExactMatch => "ExactMatch",
            CheckStatus::WithinTolerance => "WithinTolerance",
            CheckStatus::Fail => "FAIL",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: CheckStatus,
    pub details: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub version: String,
    pub level: Level,
    pub mutation: Option<Mutation>,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail)
    }
}

struct Suite {
    level: Level,
    mutation: Option<Mutation>,
    checks: Vec<CheckResult>,
}

impl Suite {
    fn push(&mut self, name: String, status: CheckStatus, details: String) {
        self.checks.push(CheckResult { name, status, details });
    }

    /// Record an exact comparison; errors become failures.
    fn exact(&mut self, name: String, run: impl FnOnce() -> Result<(bool, String)>) {
        match run() {
            Ok((true, d)) => self.push(name, CheckStatus::ExactMatch, d),
            Ok((false, d)) => self.push(name, CheckStatus::Fail, d),
            Err(e) => self.push(name, CheckStatus::Fail, format!("error: {e}")),
        }
    }

    fn statistical(&mut self, name: String, run: impl FnOnce() -> Result<(bool, String)>) {
        match run() {
            Ok((true, d)) => self.push(name, CheckStatus::WithinTolerance, d),
            Ok((false, d)) => self.push(name, CheckStatus::Fail, d),
            Err(e) => self.push(name, CheckStatus::Fail, format!("error: {e}")),
        }
    }

    fn full(&self) -> bool {
        self.level == Level::Full
    }
}

fn show(v: &[Rat]) -> String {
    let parts: Vec<String> = v.iter().map(render).collect();
    format!("[{}]", parts.join(", "))
}

fn compare(computed: &[Rat], oracle: &[Rat]) -> (bool, String) {
    let ok = computed == oracle;
    if ok {
        (true, show(computed))
    } else {
        (false, format!("computed {}, oracle {}", show(computed), show(oracle)))
    }
}

/// The closed-form pair distribution a spec is checked against.
fn closed_pair(spec: &GroupSpec, mutation: Option<Mutation>) -> Result<CodimDistribution> {
    let (n, q) = (spec.n, spec.q);
    match spec.family {
        Family::GL => {
            let mut d = codim_dist_gl(n, q)?;
            if mutation == Some(Mutation::GlPairCoefficient) {
                let bump = Rat::new(1.into(), d.probs[1].denom().clone());
                d.probs[1] += bump;
            }
            Ok(d)
        }
        Family::GU => codim_dist_gu(n, q),
        Family::SpOdd | Family::SpEven => codim_dist_sp(n, q),
    }
}

fn spec_name(spec: &GroupSpec) -> String {
    match spec.family {
        Family::GL => "codim_dist_gl",
        Family::GU => "codim_dist_gu",
        _ => "codim_dist_sp",
    }
    .to_string()
}

fn pair_checks(s: &mut Suite) {
    let mut specs = vec![
        GroupSpec::gl(2, 3),
        GroupSpec::gl(3, 2),
        GroupSpec::gl(2, 4),
        GroupSpec::gu(2, 2),
        GroupSpec::gu(2, 3),
        GroupSpec::gu(3, 2),
        GroupSpec::sp(1, 3),
        GroupSpec::sp(2, 2),
        GroupSpec::sp(2, 3),
    ];
    if s.full() {
        specs.extend([GroupSpec::gl(3, 3), GroupSpec::gl(2, 5), GroupSpec::gu(3, 3), GroupSpec::sp(3, 2), GroupSpec::sp(2, 5)]);
    }
    for spec in specs {
        let spec = spec.expect("valid spec");
        let mutation = s.mutation;
        s.exact(format!("{} vs oracle_pair_exact ({spec})", spec_name(&spec)), || {
            let closed = closed_pair(&spec, mutation)?;
            let oracle = oracle_pair_exact(&spec, DEFAULT_PAIR_LIMIT)?;
            Ok(compare(&closed.probs, &oracle.probs))
        });
    }
}

fn fixed_space_checks(s: &mut Suite) {
    let mut specs = vec![
        GroupSpec::gu(2, 2),
        GroupSpec::gu(2, 3),
        GroupSpec::gu(3, 2),
        GroupSpec::sp(1, 3),
        GroupSpec::sp(1, 5),
        GroupSpec::sp(2, 3),
        GroupSpec::sp(1, 2),
        GroupSpec::sp(2, 2),
    ];
    if s.full() {
        specs.extend([GroupSpec::gu(2, 4), GroupSpec::gu(3, 3), GroupSpec::sp(1, 7), GroupSpec::sp(1, 9), GroupSpec::sp(3, 2)]);
    }
    for spec in specs {
        let spec = spec.expect("valid spec");
        s.exact(format!("fixed_space_distribution vs enumeration ({spec})"), || {
            let closed = fixed_space_distribution(&spec)?;
            let oracle = oracle_fixed_dim(&spec, crate::clgroups::DEFAULT_ENUM_LIMIT)?;
            Ok(compare(&closed.probs, &oracle))
        });
    }
}

fn class_checks(s: &mut Suite) {
    let mut cases = vec![
        (2, 3, PairMode::PairsFromC),
        (2, 5, PairMode::PairsFromC),
        (2, 7, PairMode::PairsFromC),
        (2, 3, PairMode::AllTransvections),
        (2, 5, PairMode::PairsFromCStar),
    ];
    if s.full() {
        cases.extend([
            (2, 7, PairMode::AllTransvections),
            (2, 9, PairMode::PairsFromC),
            (3, 3, PairMode::PairsFromC),
            (2, 11, PairMode::PairsFromCStar),
        ]);
    }
    for (n, q, mode) in cases {
        s.exact(format!("sp_odd_class_dist vs oracle_sp_class_exact (n={n}, q={q}, {mode:?})"), || {
            let closed = sp_odd_class_dist_mode(n, q, mode)?;
            let oracle = oracle_sp_class_exact(n, q, mode, DEFAULT_PAIR_LIMIT)?;
            if closed.probs == oracle.probs {
                Ok((true, format!("{} classes", closed.probs.len())))
            } else {
                let fmt = |d: &crate::transprod::SpOddClassDistribution| {
                    d.probs.iter().map(|(k, v)| format!("{k}: {}", render(v))).collect::<Vec<_>>().join(", ")
                };
                Ok((false, format!("computed {{{}}}, oracle {{{}}}", fmt(&closed), fmt(&oracle))))
            }
        });
    }
}

fn weil_sum_checks(s: &mut Suite) {
    let mut points = vec![(2usize, 3u64), (2, 5), (3, 3)];
    if s.full() {
        points.push((2, 7));
    }
    for (n, q) in points {
        for (mode, rs) in [(PairMode::PairsFromC, vec![0u64, 1, 2, 3, 4]), (PairMode::AllTransvections, vec![0, 2, 4])] {
            for r in rs {
                s.exact(format!("weil_closed_form vs weil_assembly (n={n}, q={q}, r={r}, {mode:?})"), || {
                    let a = weil_assembly(n, q, r, mode)?;
                    let c = weil_closed_form(n, q, r, mode)?;
                    Ok(if a == c { (true, a.to_string()) } else { (false, format!("closed {c}, assembly {a}")) })
                });
            }
        }
    }
}

fn domination_checks(s: &mut Suite) {
    let n_max = if s.full() { 6 } else { 3 };
    for q in [2u64, 3, 4, 5, 7, 9] {
        for n in 1..=n_max {
            let sp = if q % 2 == 1 {
                vec![WeilVariant::SpOddWeil]
            } else {
                vec![WeilVariant::SpEvenLinear, WeilVariant::SpEvenUnitary]
            };
            let mut specs = vec![(GroupSpec::gu(n, q), WeilVariant::GUWeil)];
            specs.extend(sp.into_iter().map(|v| (GroupSpec::sp(n, q), v)));
            for (spec, variant) in specs {
                let spec = spec.expect("valid spec");
                s.exact(format!("charbound_sum dominated by upper_closed ({spec}, {}, c=1..3)", variant.name()), || {
                    let counts = codim_counts(&spec)?;
                    let mut worst = String::new();
                    for c in 1..=3 {
                        let u = upper_closed(&spec, variant, Offset::whole(c))?;
                        let sum = charbound_from_counts(&ChainSpec::new(spec, variant, u.r)?, &counts)?;
                        let bound = int(4) * &u.value_sq;
                        if sum > bound {
                            return Ok((false, format!("c={c}: sum {} > 4·bound² {}", render(&sum), render(&bound))));
                        }
                        if c == 1 {
                            worst = format!("c=1: {} ≤ {}", render(&sum), render(&bound));
                        }
                    }
                    Ok((true, worst))
                });
            }
        }
    }
}

fn lemma_checks(s: &mut Suite) {
    let q_max = if s.full() { 121 } else { 27 };
    let qs: Vec<u64> = (3..=q_max).filter(|&q| q % 2 == 1 && prime_power(q).is_some()).collect();
    s.exact(format!("count_adjacent_squares vs brute force (odd q ≤ {q_max})"), || {
        for &q in &qs {
            let fs = FieldSpec::new(q)?;
            let (a, b) = (count_adjacent_squares(fs.base())?, brute_adjacent_squares(fs.base()));
            if a != b {
                return Ok((false, format!("q={q}: computed {a}, oracle {b}")));
            }
        }
        Ok((true, format!("{} fields", qs.len())))
    });
    s.exact(format!("sq2_census vs brute force with parity (odd q ≤ {q_max})"), || {
        for &q in &qs {
            let fs = FieldSpec::new(q)?;
            let census = sq2_census(&fs)?;
            let brute = brute_sq2_census(&fs)?;
            let mine: Vec<_> = census.entries.iter().map(|e| (e.alpha, e.class)).collect();
            if mine != brute {
                return Ok((false, format!("q={q}: computed {mine:?}, oracle {brute:?}")));
            }
            if !census.parity_holds() {
                return Ok((false, format!("q={q}: index parity violated")));
            }
        }
        Ok((true, format!("{} fields", qs.len())))
    });
}

fn moment_checks(s: &mut Suite) {
    let cases = [(Family::GL, 2usize, 3u64, 1u64, int(10) / int(9)), (Family::SpEven, 2, 2, 1, int(3) / int(4))];
    for (family, n, q, r, want) in cases {
        let spec = GroupSpec::new(family, n, q).expect("valid spec");
        s.exact(format!("moments variance ({spec}, r={r})"), || {
            let m = moments(&ChainSpec::standard(spec, r))?;
            let got = m.variance.to_rational();
            Ok(match got {
                Some(v) if v == want => (true, render(&v)),
                _ => (false, format!("computed {}, expected {}", m.variance, render(&want))),
            })
        });
    }
    let spec = GroupSpec::gu(3, 2).expect("valid spec");
    s.exact(format!("moments mean sign flips with r parity ({spec}, r=1 vs 2)"), || {
        let odd = moments(&ChainSpec::standard(spec, 1))?;
        let even = moments(&ChainSpec::standard(spec, 2))?;
        let ok = odd.mean_sign == -1 && even.mean_sign == 1;
        Ok((ok, format!("sign(r=1) = {}, sign(r=2) = {}", odd.mean_sign, even.mean_sign)))
    });
}

/// `max |f − p|/σ` over the keys of an exact distribution.
fn worst_z(h: &super::Histogram<usize>, exact: &[Rat]) -> (f64, String) {
    let mut worst = (0.0f64, String::new());
    for (k, p) in exact.iter().enumerate() {
        let p = crate::exact::to_f64(p);
        let sigma = super::binomial_sigma(p, h.total);
        let dev = (h.frequency(&k) - p).abs();
        let z = if sigma == 0.0 {
            if dev == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            dev / sigma
        };
        if z >= worst.0 {
            worst = (z, format!("key {k}: frequency {:.6}, exact {:.6}, {z:.2}σ", h.frequency(&k), p));
        }
    }
    worst
}

fn statistical_checks(s: &mut Suite) {
    // The sample sizes put every nonzero probability at least 6σ away from 0 and 1.
    let big = if s.full() { 100_000 } else { 20_000 };
    let seed = 0x5eed;
    for (spec, samples) in [(GroupSpec::gu(2, 2), 100_000u64), (GroupSpec::sp(1, 3), 100_000), (GroupSpec::sp(2, 3), 20_000)] {
        let spec = spec.expect("valid spec");
        s.statistical(format!("mc_fixed_dim vs fixed_space_distribution ({spec}, {samples} samples, 3σ)"), || {
            let exact = fixed_space_distribution(&spec)?.probs;
            let h = mc_fixed_dim(&spec, samples, seed)?;
            let (z, d) = worst_z(&h, &exact);
            Ok((z <= 3.0, d))
        });
    }
    let walks = [
        (GroupSpec::gl(3, 2), 100_000u64, TransvectionPool::Designated),
        (GroupSpec::gu(3, 3), 100_000, TransvectionPool::Designated),
        (GroupSpec::sp(2, 2), 100_000, TransvectionPool::Designated),
        (GroupSpec::sp(10, 3), big, TransvectionPool::All),
        (GroupSpec::sp(10, 2), big, TransvectionPool::Designated),
    ];
    for (spec, samples, pool) in walks {
        let spec = spec.expect("valid spec");
        s.statistical(format!("mc_transv_product s=2 vs {} ({spec}, {samples} samples, 3σ)", spec_name(&spec)), || {
            let exact = closed_pair(&spec, None)?.probs;
            let h = mc_transv_product(&spec, 2, samples, seed, pool)?;
            let (z, d) = worst_z(&h, &exact);
            Ok((z <= 3.0, d))
        });
    }
    let spec = GroupSpec::sp(2, 5).expect("valid spec");
    s.statistical(format!("mc_transv_product s=2 vs sp_odd_class_dist codim marginal ({spec}, 100000 samples, 3σ)"), || {
        let exact = sp_odd_class_dist_mode(2, 5, PairMode::PairsFromC)?.codim_marginal();
        let h = mc_transv_product(&spec, 2, 100_000, seed, TransvectionPool::Designated)?;
        let (z, d) = worst_z(&h, &exact);
        Ok((z <= 3.0, d))
    });
}

fn cutoff_checks(s: &mut Suite) {
    let spec = GroupSpec::gu(50, 9).expect("valid spec");
    s.exact(format!("upper_closed at r = n+2 is at most 0.0087 ({spec})"), || {
        let u = upper_closed(&spec, WeilVariant::GUWeil, Offset::whole(2))?;
        Ok((u.value <= 0.0087 && u.r == 52, format!("{:.6}", u.value)))
    });
    s.exact(format!("lower_closed at r = n−4 is at least 0.97 ({spec})"), || {
        let l = lower_closed(&spec, WeilVariant::GUWeil, Offset::whole(4))?;
        Ok((l.value >= 0.97 && l.r == 46, format!("{:.6}", l.value)))
    });
}

/// Run the whole suite.
pub fn verify(level: Level, mutation: Option<Mutation>) -> VerifyReport {
    let mut s = Suite { level, mutation, checks: Vec::new() };
    pair_checks(&mut s);
    fixed_space_checks(&mut s);
    class_checks(&mut s);
    weil_sum_checks(&mut s);
    domination_checks(&mut s);
    lemma_checks(&mut s);
    moment_checks(&mut s);
    statistical_checks(&mut s);
    cutoff_checks(&mut s);
    let passed = s.checks.iter().all(|c| c.status != CheckStatus::Fail);
    VerifyReport {
        schema_version: SCHEMA_VERSION,
        version: crate::VERSION.to_string(),
        level,
        mutation,
        passed,
        checks: s.checks,
    }
}
