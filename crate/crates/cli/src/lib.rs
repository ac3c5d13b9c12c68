//! Command-line front end for the invariant tables and their self-checks.
//!
//! Exit codes: 0 on success, 1 when a verification fails (the JSON report is
//! still written) or output cannot be written, 2 on invalid flags.

pub mod output;

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::Context;
use banana_core::curveconfig::config_euler;
use banana_core::invariants::{
    build_table, check_jacobi_identity, check_norm_invariance, class_of_index, jacobi_phi, norm,
    InvariantError, NormViolation, Route, SINGULAR_FIBERS,
};
use banana_core::oracle::{all_configs, verify_three_way, DEFAULT_ORACLE_CAP};
use banana_core::partitions::{branch_to_opd, count_opd_configs, opd_configs};
use banana_core::series::ClassVector;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::output::{int_value, render_json, Cell, Format, Records};

#[derive(Debug, Parser)]
#[command(
    name = "banana",
    version,
    about = "Genus-0 Gopakumar-Vafa invariants of Banana manifold fiber classes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Naive and signed invariants with norms, one row per class.
    Table(TableArgs),
    /// Three-route cross-check plus the Jacobi and norm identities; writes a JSON report.
    Verify(VerifyArgs),
    /// Twelve times the Jacobi form coefficients next to the re-indexed table.
    Jacobi(JacobiArgs),
    /// Brute-force chi = 1 counts, or the configurations themselves with --list.
    Oracle(SelectArgs),
    /// Partition-route counts, or the four-partition witnesses with --list.
    Partitions(SelectArgs),
}

#[derive(Debug, Args)]
pub struct RangeArgs {
    /// Largest d1 and d2 in the table.
    #[arg(long, num_args = 2, value_names = ["D1", "D2"], default_values_t = [4, 4])]
    pub maxd: Vec<u32>,
}

impl RangeArgs {
    fn maxd(&self) -> ClassVector {
        ClassVector::new(self.maxd[0], self.maxd[1])
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CapArgs {
    /// Total-degree cap d1 + d2 for brute force; defaults to min(5, D1 + D2).
    #[arg(long, value_name = "N")]
    pub oracle_cap: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    Product,
    Partitions,
    Oracle,
}

impl From<RouteArg> for Route {
    fn from(r: RouteArg) -> Route {
        match r {
            RouteArg::Product => Route::Product,
            RouteArg::Partitions => Route::Partitions,
            RouteArg::Oracle => Route::Oracle,
        }
    }
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[command(flatten)]
    pub range: RangeArgs,
    #[command(flatten)]
    pub cap: CapArgs,
    #[arg(long, value_enum, default_value_t = RouteArg::Product)]
    pub route: RouteArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub range: RangeArgs,
    #[command(flatten)]
    pub cap: CapArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct JacobiArgs {
    /// D1 is the q-truncation; D2 bounds the table the coefficients are compared with.
    #[command(flatten)]
    pub range: RangeArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    #[command(flatten)]
    pub range: RangeArgs,
    /// A single class instead of the whole range.
    #[arg(long, num_args = 2, value_names = ["D1", "D2"], conflicts_with = "maxd")]
    pub class: Option<Vec<u32>>,
    #[command(flatten)]
    pub cap: CapArgs,
    /// List configurations instead of counting them.
    #[arg(long)]
    pub list: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

impl SelectArgs {
    /// The bounding class and the classes it selects.
    fn selection(&self) -> (ClassVector, Vec<ClassVector>) {
        match &self.class {
            Some(c) => {
                let c = ClassVector::new(c[0], c[1]);
                (c, vec![c])
            }
            None => {
                let maxd = self.range.maxd();
                (maxd, maxd.rectangle().collect())
            }
        }
    }
}

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass = 0,
    Failed = 1,
    Usage = 2,
}

/// Invalid flag combination, reported with exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Resolves the oracle cap against the range it applies to.
fn resolve_cap(cap: &CapArgs, bound: ClassVector) -> anyhow::Result<u32> {
    match cap.oracle_cap {
        None => Ok(DEFAULT_ORACLE_CAP.min(bound.total())),
        Some(n) if n > bound.total() => Err(usage(format!(
            "--oracle-cap {n} exceeds D1 + D2 = {}",
            bound.total()
        ))),
        Some(n) => Ok(n),
    }
}

fn emit(bytes: &[u8], out: Option<&PathBuf>) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, bytes).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            Ok(stdout.flush()?)
        }
    }
}

/// Runs one command, writing its artifact. Usage problems come back as a
/// [`UsageError`] inside the error.
pub fn run(cli: &Cli) -> anyhow::Result<Status> {
    match &cli.command {
        Command::Table(a) => {
            let records = table(a)?;
            emit(&records.render(a.output.format)?, a.output.out.as_ref())?;
            Ok(Status::Pass)
        }
        Command::Verify(a) => {
            let (report, passed) = verify(a)?;
            emit(&render_json(&report)?, a.out.as_ref())?;
            Ok(if passed { Status::Pass } else { Status::Failed })
        }
        Command::Jacobi(a) => {
            let records = jacobi(a)?;
            emit(&records.render(a.output.format)?, a.output.out.as_ref())?;
            Ok(Status::Pass)
        }
        Command::Oracle(a) => {
            let records = oracle(a)?;
            emit(&records.render(a.output.format)?, a.output.out.as_ref())?;
            Ok(Status::Pass)
        }
        Command::Partitions(a) => {
            let records = partitions(a);
            emit(&records.render(a.output.format)?, a.output.out.as_ref())?;
            Ok(Status::Pass)
        }
    }
}

pub fn table(a: &TableArgs) -> anyhow::Result<Records> {
    let maxd = a.range.maxd();
    let cap = resolve_cap(&a.cap, maxd)?;
    let t = build_table(maxd, a.route.into(), cap).map_err(|e| match e {
        InvariantError::OracleCapExceeded { .. } => usage(format!("{e}; raise --oracle-cap")),
        other => other.into(),
    })?;
    let mut r = Records::new(&["d1", "d2", "naive", "signed", "norm"]);
    for (c, e) in t.entries() {
        r.push(vec![
            Cell::int(c.d1),
            Cell::int(c.d2),
            Cell::Int(e.naive.clone()),
            Cell::Int(e.signed.clone()),
            Cell::int(norm(c)),
        ]);
    }
    Ok(r)
}

/// The full report and whether every check passed.
pub fn verify(a: &VerifyArgs) -> anyhow::Result<(Value, bool)> {
    let maxd = a.range.maxd();
    let cap = resolve_cap(&a.cap, maxd)?;
    let three = verify_three_way(maxd, cap)?;
    let table = build_table(maxd, Route::Product, cap)?;
    let jac = check_jacobi_identity(&table, &jacobi_phi(maxd.d1));
    let nrm = check_norm_invariance(&table);
    let passed = three.passed() && jac.passed() && nrm.passed();

    let three_failures: Vec<Value> = three
        .failures()
        .map(|r| {
            json!({
                "d1": r.class.d1,
                "d2": r.class.d2,
                "product": int_value(&r.product),
                "partitions": int_value(&r.partitions),
                "oracle": r.oracle.as_ref().map(int_value),
            })
        })
        .collect();
    let jac_failures: Vec<Value> = jac
        .mismatches
        .iter()
        .map(|m| {
            json!({
                "d1": m.class.d1,
                "d2": m.class.d2,
                "signed": int_value(&m.signed),
                "twelve_phi": int_value(&m.twelve_phi),
            })
        })
        .collect();
    let norm_failures: Vec<Value> = nrm
        .violations
        .iter()
        .map(|v| match v {
            NormViolation::Value {
                norm,
                first,
                first_value,
                second,
                second_value,
            } => json!({
                "norm": norm,
                "first": [first.d1, first.d2],
                "first_value": int_value(first_value),
                "second": [second.d1, second.d2],
                "second_value": int_value(second_value),
            }),
            NormViolation::Discriminant { class } => json!({
                "discriminant_mismatch": [class.d1, class.d2],
            }),
        })
        .collect();

    let report = json!({
        "passed": passed,
        "maxd": [maxd.d1, maxd.d2],
        "oracle_cap": cap,
        "three_way": {
            "passed": three.passed(),
            "classes": three.rows.len(),
            "oracle_checked": three.oracle_checked(),
            "failures": three_failures,
        },
        "jacobi": {
            "passed": jac.passed(),
            "qtrunc": jac.qtrunc,
            "compared": jac.compared,
            "mismatches": jac_failures,
        },
        "norm": {
            "passed": nrm.passed(),
            "groups": nrm.groups.len(),
            "violations": norm_failures,
        },
    });
    Ok((report, passed))
}

/// Every `q^n p^r` with `n <= D1` and `|r| <= n + 1`, paired with its class
/// `(n, n + r + 1)` and the signed invariant when that class is in range.
pub fn jacobi(a: &JacobiArgs) -> anyhow::Result<Records> {
    let maxd = a.range.maxd();
    let phi = jacobi_phi(maxd.d1);
    let table = build_table(maxd, Route::Product, 0)?;
    let mut r = Records::new(&["n", "r", "twelve_phi", "d1", "d2", "signed", "agrees"]);
    for n in 0..=maxd.d1 {
        let bound = n as i32 + 1;
        for p in -bound..=bound {
            let twelve = phi.coeff(n, p).expect("row within truncation") * SINGULAR_FIBERS;
            let class = class_of_index(n, p).expect("p >= -n - 1");
            let signed = table.signed(class);
            r.push(vec![
                Cell::int(n),
                Cell::int(p),
                Cell::Int(twelve.clone()),
                Cell::int(class.d1),
                Cell::int(class.d2),
                signed.map_or(Cell::Null, |s| Cell::Int(s.clone())),
                signed.map_or(Cell::Null, |s| Cell::Bool(*s == twelve)),
            ]);
        }
    }
    Ok(r)
}

pub fn oracle(a: &SelectArgs) -> anyhow::Result<Records> {
    let (bound, classes) = a.selection();
    let cap = resolve_cap(&a.cap, bound)?;
    if a.class.is_some() && bound.total() > cap {
        return Err(usage(format!(
            "class {bound} exceeds the oracle cap {cap}; raise --oracle-cap"
        )));
    }
    let classes = classes.into_iter().filter(|c| c.total() <= cap);
    if a.list {
        let mut r = Records::new(&["d1", "d2", "config"]);
        for c in classes {
            for config in all_configs(c) {
                if config_euler(&config) == 1 {
                    r.push(vec![Cell::int(c.d1), Cell::int(c.d2), Cell::text(&config)]);
                }
            }
        }
        return Ok(r);
    }
    let mut r = Records::new(&["d1", "d2", "configs", "chi_one"]);
    for c in classes {
        let all = all_configs(c);
        let ones = all.iter().filter(|x| config_euler(x) == 1).count();
        r.push(vec![
            Cell::int(c.d1),
            Cell::int(c.d2),
            Cell::int(all.len() as u64),
            Cell::int(ones as u64),
        ]);
    }
    Ok(r)
}

pub fn partitions(a: &SelectArgs) -> Records {
    let (_, classes) = a.selection();
    if a.list {
        let mut r = Records::new(&["d1", "d2", "uq", "lq", "up", "lp", "config"]);
        for c in classes {
            for config in opd_configs(c) {
                let mut row = vec![Cell::int(c.d1), Cell::int(c.d2)];
                row.extend(config.branches().iter().map(|b| {
                    Cell::text(branch_to_opd(b).expect("partition witnesses are admissible"))
                }));
                row.push(Cell::text(&config));
                r.push(row);
            }
        }
        return r;
    }
    let mut r = Records::new(&["d1", "d2", "count"]);
    for c in classes {
        r.push(vec![
            Cell::int(c.d1),
            Cell::int(c.d2),
            Cell::Int(count_opd_configs(c)),
        ]);
    }
    r
}
