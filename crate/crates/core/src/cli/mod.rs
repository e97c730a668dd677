//! The `weilmix` command line.
//!
//! Exit status: 0 on success, 1 when `verify` finds a failing check, 2 on usage
//! errors and on inputs the library rejects.

mod output;
mod svg;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::clgroups::{Family, GroupSpec, DEFAULT_ENUM_LIMIT};
use crate::error::{Error, Result};
use crate::fixdist::fixed_space_distribution;
use crate::mcengine::{self, mc_fixed_dim, mc_transv_product, CheckStatus, Level, Mutation, TransvectionPool};
use crate::mixbounds::profile;
use crate::transprod::{codim_dist_gl, codim_dist_gu, codim_dist_sp, sp_odd_class_dist_mode, PairMode};
use crate::weilchar::WeilVariant;

pub use output::{sig12, Rounding};
use output::{Cell, Column, Table};
pub use svg::render_profile;

#[derive(Parser, Debug)]
#[command(name = "weilmix", version, about = "Bounds, exact distributions and checks for Weil-character tensor chains")]
struct Cli {
    /// Worker threads (default: all cores)
    #[arg(long, global = true, env = "WEILMIX_THREADS")]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Upper and lower total variation bounds for a range of r
    Bounds(BoundsArgs),
    /// Exact distributions
    Dist(DistArgs),
    /// Monte-Carlo histograms
    Simulate(SimulateArgs),
    /// Check every closed form against its oracle
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Gl,
    Gu,
    SpOdd,
    SpEven,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Gl => Family::GL,
            FamilyArg::Gu => Family::GU,
            FamilyArg::SpOdd => Family::SpOdd,
            FamilyArg::SpEven => Family::SpEven,
        }
    }
}

#[derive(Args, Debug)]
struct GroupArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Rank: the matrix size for gl/gu, half of it for sp
    #[arg(long)]
    n: usize,
    #[arg(long)]
    q: u64,
}

impl GroupArgs {
    fn spec(&self) -> Result<GroupSpec> {
        GroupSpec::new(self.family.into(), self.n, self.q)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Linear,
    Unitary,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[command(flatten)]
    group: GroupArgs,
    /// Weil character for sp-even
    #[arg(long, value_enum)]
    variant: Option<VariantArg>,
    #[arg(long)]
    r_min: u64,
    #[arg(long)]
    r_max: u64,
    /// Include the exact character sum column
    #[arg(long)]
    exact_sum: bool,
    /// Also write the profile chart here
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum DistWhat {
    FixedSpace,
    PairCodim,
    SpClasses,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    /// both factors in the class of T(1, v)
    CPairs,
    /// both factors in the other class (odd q symplectic)
    CstarPairs,
    /// all transvections
    All,
}

impl From<ModeArg> for PairMode {
    fn from(m: ModeArg) -> PairMode {
        match m {
            ModeArg::CPairs => PairMode::PairsFromC,
            ModeArg::CstarPairs => PairMode::PairsFromCStar,
            ModeArg::All => PairMode::AllTransvections,
        }
    }
}

#[derive(Args, Debug)]
struct DistArgs {
    #[command(flatten)]
    group: GroupArgs,
    #[arg(long, value_enum)]
    what: DistWhat,
    /// Which transvections are paired (sp-odd only)
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SimWhat {
    FixedSpace,
    TransvProduct,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    group: GroupArgs,
    #[arg(long, value_enum)]
    what: SimWhat,
    /// Number of transvection factors
    #[arg(long, default_value_t = 2)]
    steps: usize,
    #[arg(long)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Transvection pool: c-pairs draws from the class of T(1, v), all from every transvection
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MutationArg {
    GlPairCoefficient,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = LevelArg::Quick)]
    level: LevelArg,
    /// Corrupt a closed form on purpose
    #[arg(long, value_enum)]
    mutate: Option<MutationArg>,
}

fn spec_json(spec: &GroupSpec) -> Value {
    json!({ "family": spec.family.name(), "n": spec.n, "q": spec.q })
}

fn variant_for(spec: &GroupSpec, v: Option<VariantArg>) -> Result<WeilVariant> {
    match (spec.family, v) {
        (Family::SpEven, Some(VariantArg::Unitary)) => Ok(WeilVariant::SpEvenUnitary),
        (_, None) | (Family::SpEven, Some(VariantArg::Linear)) => Ok(WeilVariant::default_for(spec.family)),
        (f, Some(_)) => Err(Error::InvalidParams(format!("--variant only applies to sp-even, not {f}"))),
    }
}

fn cmd_bounds(a: &BoundsArgs, command: Vec<String>) -> Result<Table> {
    let spec = a.group.spec()?;
    let variant = variant_for(&spec, a.variant)?;
    if a.r_min > a.r_max {
        return Err(Error::InvalidParams(format!("--r-min {} exceeds --r-max {}", a.r_min, a.r_max)));
    }
    let p = profile(&spec, variant, a.r_min..=a.r_max)?;
    let mut spec_v = spec_json(&spec);
    spec_v["variant"] = json!(variant.name());
    let mut columns = vec![
        Column::plain("r"),
        Column::up("upper_tv"),
        Column::down("lower_tv"),
        Column::up("upper_from_sum"),
        Column::up("upper_closed"),
        Column::down("lower_closed"),
        Column::down("chebyshev"),
    ];
    let mut notes = Vec::new();
    if a.exact_sum {
        columns.push(Column::plain("exact_char_sum"));
        if p.rows.iter().any(|r| r.exact_char_sum.is_none()) {
            notes.push(format!("note: exact character sum unavailable for {spec} (enumeration limit); closed forms only"));
        }
    }
    let mut t = Table::new(command, spec_v, columns);
    t.notes = notes;
    for row in &p.rows {
        let mut cells = vec![
            Cell::Int(row.r),
            Cell::opt_float(row.upper_tv, Rounding::Up),
            Cell::opt_float(row.lower_tv, Rounding::Down),
            Cell::opt_float(row.upper_from_sum, Rounding::Up),
            Cell::opt_float(row.upper_closed, Rounding::Up),
            Cell::opt_float(row.lower_closed, Rounding::Down),
            Cell::opt_float(row.chebyshev, Rounding::Down),
        ];
        let mut prov = "closed-form";
        if a.exact_sum {
            cells.push(row.exact_char_sum.clone().map_or(Cell::Empty, Cell::Rational));
            if row.exact_char_sum.is_some() {
                prov = "exact";
            }
        }
        t.push(cells, prov);
    }
    if let Some(path) = &a.svg {
        std::fs::write(path, render_profile(&p))
            .map_err(|e| Error::InvalidParams(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(t)
}

fn cmd_dist(a: &DistArgs, command: Vec<String>) -> Result<Table> {
    let spec = a.group.spec()?;
    let mut spec_v = spec_json(&spec);
    if a.mode.is_some() && spec.family != Family::SpOdd {
        return Err(Error::InvalidParams("--mode only applies to sp-odd".into()));
    }
    match a.what {
        DistWhat::FixedSpace => {
            let (probs, prov) = if spec.family == Family::GL {
                (mcengine::oracle_fixed_dim(&spec, DEFAULT_ENUM_LIMIT)?, "exact")
            } else {
                (fixed_space_distribution(&spec)?.probs, "closed-form")
            };
            let mut t = Table::new(command, spec_v, vec![Column::plain("fixed_dim"), Column::plain("probability"), Column::plain("approx")]);
            for (k, p) in probs.into_iter().enumerate() {
                let f = crate::exact::to_f64(&p);
                t.push(vec![Cell::Int(k as u64), Cell::Rational(p), Cell::Float(f, Rounding::Nearest)], prov);
            }
            Ok(t)
        }
        DistWhat::PairCodim => {
            let probs = match spec.family {
                Family::GL => codim_dist_gl(spec.n, spec.q)?.probs,
                Family::GU => codim_dist_gu(spec.n, spec.q)?.probs,
                Family::SpEven => codim_dist_sp(spec.n, spec.q)?.probs,
                Family::SpOdd => match a.mode.map(PairMode::from).unwrap_or(PairMode::AllTransvections) {
                    PairMode::AllTransvections => codim_dist_sp(spec.n, spec.q)?.probs,
                    mode => sp_odd_class_dist_mode(spec.n, spec.q, mode)?.codim_marginal(),
                },
            };
            if let Some(m) = a.mode {
                spec_v["mode"] = json!(format!("{:?}", PairMode::from(m)));
            }
            let mut t = Table::new(command, spec_v, vec![Column::plain("codim"), Column::plain("probability"), Column::plain("approx")]);
            for (e, p) in probs.into_iter().enumerate() {
                let f = crate::exact::to_f64(&p);
                t.push(vec![Cell::Int(e as u64), Cell::Rational(p), Cell::Float(f, Rounding::Nearest)], "closed-form");
            }
            Ok(t)
        }
        DistWhat::SpClasses => {
            if spec.family != Family::SpOdd || spec.n < 2 {
                return Err(Error::InvalidParams(format!("sp-classes needs sp-odd with n ≥ 2, got {spec}")));
            }
            let mode = a.mode.map(PairMode::from).unwrap_or(PairMode::PairsFromC);
            spec_v["mode"] = json!(format!("{mode:?}"));
            let d = sp_odd_class_dist_mode(spec.n, spec.q, mode)?;
            let mut t = Table::new(
                command,
                spec_v,
                vec![Column::plain("class"), Column::plain("codim"), Column::plain("probability"), Column::plain("approx")],
            );
            for (label, p) in d.probs {
                let f = crate::exact::to_f64(&p);
                t.push(
                    vec![
                        Cell::Text(label.to_string()),
                        Cell::Int(label.codim() as u64),
                        Cell::Rational(p),
                        Cell::Float(f, Rounding::Nearest),
                    ],
                    "closed-form",
                );
            }
            Ok(t)
        }
    }
}

fn cmd_simulate(a: &SimulateArgs, command: Vec<String>) -> Result<Table> {
    let spec = a.group.spec()?;
    let mut spec_v = spec_json(&spec);
    let (h, key) = match a.what {
        SimWhat::FixedSpace => (mc_fixed_dim(&spec, a.samples, a.seed)?, "fixed_dim"),
        SimWhat::TransvProduct => {
            let pool = match a.mode {
                None | Some(ModeArg::CPairs) => TransvectionPool::Designated,
                Some(ModeArg::All) => TransvectionPool::All,
                Some(ModeArg::CstarPairs) => {
                    return Err(Error::InvalidParams("simulate supports --mode c-pairs or all".into()))
                }
            };
            spec_v["steps"] = json!(a.steps);
            spec_v["pool"] = json!(format!("{pool:?}"));
            (mc_transv_product(&spec, a.steps, a.samples, a.seed, pool)?, "codim")
        }
    };
    let mut t = Table::new(
        command,
        spec_v,
        vec![Column::plain(key), Column::plain("count"), Column::plain("frequency"), Column::plain("stderr")],
    );
    t.extra.insert("seed".into(), json!(a.seed));
    t.extra.insert("samples".into(), json!(a.samples));
    let prov = format!("monte-carlo(seed={}, samples={})", a.seed, a.samples);
    for (&k, &c) in &h.counts {
        t.push(
            vec![
                Cell::Int(k as u64),
                Cell::Int(c),
                Cell::Float(h.frequency(&k), Rounding::Nearest),
                Cell::Float(h.stderr(&k), Rounding::Nearest),
            ],
            prov.clone(),
        );
    }
    Ok(t)
}

fn cmd_verify(a: &VerifyArgs, command: Vec<String>) -> (Table, bool) {
    let level = match a.level {
        LevelArg::Quick => Level::Quick,
        LevelArg::Full => Level::Full,
    };
    let mutation = a.mutate.map(|MutationArg::GlPairCoefficient| Mutation::GlPairCoefficient);
    let report = mcengine::verify(level, mutation);
    let mut t = Table::new(
        command,
        Value::Null,
        vec![Column::plain("check"), Column::plain("status"), Column::plain("details")],
    );
    t.extra.insert("level".into(), json!(level));
    t.extra.insert("mutation".into(), json!(mutation));
    t.extra.insert("passed".into(), json!(report.passed));
    for c in &report.checks {
        let prov = if c.status == CheckStatus::WithinTolerance { "monte-carlo" } else { "exact" };
        t.push(vec![Cell::Text(c.name.clone()), Cell::Text(c.status.to_string()), Cell::Text(c.details.clone())], prov);
    }
    (t, report.passed)
}

/// Parse `args` (program name first), run the command and write the result.
/// Returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                write!(err, "{text}").ok();
            } else {
                write!(out, "{text}").ok();
            }
            return e.exit_code();
        }
    };
    let command: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        if t == 0 {
            writeln!(err, "error: --threads must be at least 1").ok();
            return 2;
        }
        builder = builder.num_threads(t);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            writeln!(err, "error: cannot start worker threads: {e}").ok();
            return 2;
        }
    };
    let result = pool.install(|| match &cli.command {
        Command::Bounds(a) => cmd_bounds(a, command).map(|t| (t, true)),
        Command::Dist(a) => cmd_dist(a, command).map(|t| (t, true)),
        Command::Simulate(a) => cmd_simulate(a, command).map(|t| (t, true)),
        Command::Verify(a) => Ok(cmd_verify(a, command)),
    });
    let (table, passed) = match result {
        Ok(x) => x,
        Err(e) => {
            writeln!(err, "error: {e}").ok();
            return 2;
        }
    };
    for n in &table.notes {
        writeln!(err, "{n}").ok();
    }
    let written = match cli.format {
        Format::Csv => table.write_csv(out),
        Format::Json => table.write_json(out),
    };
    if let Err(e) = written {
        writeln!(err, "error: {e}").ok();
        return 2;
    }
    if passed {
        0
    } else {
        if let Command::Verify(_) = cli.command {
            for (cells, _) in table.rows.iter().filter(|(c, _)| c[1] == Cell::Text("FAIL".into())) {
                if let (Cell::Text(name), Cell::Text(details)) = (&cells[0], &cells[2]) {
                    writeln!(err, "FAIL: {name}: {details}").ok();
                }
            }
        }
        1
    }
}
