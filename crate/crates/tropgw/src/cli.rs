//! Command-line front end. The binary is a thin wrapper around [`main`].
//!
//! Exit codes: 0 success, 1 a check failed (including an arrangement that is
//! not general enough), 2 usage or input error, 3 internal error.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::brokenlines::{enumerate_broken_lines, potential_w_kmbar};
use crate::error::{Error, Result};
use crate::geometry::{generate_arrangement, Arrangement, Pt, SampleBox};
use crate::invariants::{compatible_keys, DescendentKey, RVector, TableSpec, TropicalEngine};
use crate::oracle::identities::collapse_grid_failures;
use crate::oracle::mirror::j_function;
use crate::oracle::{harmonic_identity, ClassicalOracle, GWKey};
use crate::rational::{fmt_q, parse_q};
use crate::scattering::build_diagram_with_orders;
use crate::verify::{self, Tier, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "tropgw", version, about = "Descendent tropical Gromov-Witten invariants of the projective plane")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample a general arrangement of k marked points and a basepoint.
    GenArrangement(GenArgs),
    /// Build the scattering diagram of an arrangement.
    Scatter(ScatterArgs),
    /// Landau-Ginzburg potential W_{k,mbar} at a point (default: the basepoint).
    Potential(PotentialArgs),
    /// Broken lines ending at a point, with their bends.
    BrokenLines(BrokenLinesArgs),
    /// One descendent tropical invariant.
    Invariant(InvariantArgs),
    /// All dimension-compatible invariants within bounds.
    Table(TableArgs),
    /// Classical invariants, the J-function and the identity suite.
    Oracle(OracleArgs),
    /// Run the verification suite.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Degree cutoff of the diagram probed by the generality check.
    #[arg(long, default_value_t = 2)]
    pub probe_dmax: u32,
    /// Cap on descendent orders in the probe (default: k).
    #[arg(long)]
    pub probe_orders: Option<usize>,
    #[arg(long, default_value_t = 200)]
    pub retries: usize,
    /// Output file (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ScatterArgs {
    /// Arrangement JSON as written by gen-arrangement.
    #[arg(long)]
    pub arr: PathBuf,
    #[arg(long)]
    pub dmax: u32,
    /// Cap on descendent orders (default: k).
    #[arg(long)]
    pub orders: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PotentialArgs {
    #[arg(long)]
    pub arr: PathBuf,
    #[arg(long)]
    pub dmax: u32,
    /// Truncation order of y00.
    #[arg(long, default_value_t = 0)]
    pub mbar: u32,
    /// Evaluation point "x,y" with rational coordinates.
    #[arg(long)]
    pub at: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BrokenLinesArgs {
    #[arg(long)]
    pub arr: PathBuf,
    #[arg(long, default_value_t = 2)]
    pub dmax: u32,
    #[arg(long)]
    pub at: Option<String>,
    /// Ignore every wall whose coefficient involves this marked point.
    #[arg(long)]
    pub exclude: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct InvariantArgs {
    /// Arrangement JSON; without it one is generated from --seed with k = len(r).
    #[arg(long)]
    pub arr: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub d: u32,
    /// ψ-order data, e.g. "2,1,1": point i carries ψ^(r_i - 1) when r_i > 0.
    #[arg(long, default_value = "")]
    pub r: String,
    #[arg(long, default_value_t = 0)]
    pub m: u32,
    #[arg(long, default_value_t = 0)]
    pub nu: u32,
    #[arg(long, default_value_t = 0)]
    pub cls: u8,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[arg(long)]
    pub dmax: u32,
    #[arg(long)]
    pub kmax: usize,
    #[arg(long, default_value_t = 4)]
    pub psi_max: u32,
    #[arg(long, default_value_t = 2)]
    pub m_max: u32,
    #[arg(long)]
    pub arr: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Add the classical value of every key.
    #[arg(long)]
    pub with_oracle: bool,
    /// Format written to stdout.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Directory receiving table.csv and table.json.
    #[arg(long, env = "TROPGW_OUT_DIR")]
    pub out_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(args_conflicts_with_subcommands = true)]
pub struct OracleArgs {
    #[command(subcommand)]
    pub command: Option<OracleCommand>,
    #[arg(long)]
    pub d: Option<u32>,
    /// Insertions such as "psi^1 T2, T2, T0" or "T2*8".
    #[arg(long)]
    pub ins: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum OracleCommand {
    /// Givental's J-function as a series in q, 1/ħ and the small-phase-space variables.
    Jfun {
        #[arg(long)]
        dmax: u32,
        #[arg(long, default_value_t = 4)]
        ymax: u32,
    },
    /// Harmonic identity for n = 1..nmax and the binomial collapse grid.
    VerifyIdentities {
        #[arg(long, default_value_t = 30)]
        nmax: u64,
        #[arg(long, default_value_t = 3)]
        grid: i64,
    },
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Tier::Standard)]
    pub tier: Tier,
    /// Arrangement seeds, comma separated.
    #[arg(long, default_value = "1,2,3", value_delimiter = ',')]
    pub seeds: Vec<u64>,
    /// Time budget in seconds for the degree 3 count (extended tier).
    #[arg(long, default_value_t = 600)]
    pub budget_secs: u64,
    /// Directory receiving verify_report.json.
    #[arg(long, env = "TROPGW_OUT_DIR")]
    pub out_dir: Option<PathBuf>,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::Key(_) | Error::Json(_) | Error::Io(_) | Error::Config(_) => EXIT_USAGE,
        Error::Generality(_) | Error::Generation(_) => EXIT_CHECK_FAILED,
        Error::Precondition(_) => EXIT_INTERNAL,
    }
}

fn read_arrangement(path: &Path) -> Result<Arrangement> {
    let text = fs::read_to_string(path)?;
    Arrangement::from_json(&serde_json::from_str(&text)?)
}

fn parse_point(text: &str) -> Result<Pt> {
    let (x, y) = text.split_once(',').ok_or_else(|| Error::Parse(format!("point `{text}` is not x,y")))?;
    Ok(Pt::new(parse_q(x.trim())?, parse_q(y.trim())?))
}

fn emit(v: &Value, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(v)? + "\n";
    match out {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn table_csv(rows: &[(DescendentKey, String, Option<String>)]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let with_oracle = rows.first().is_some_and(|r| r.2.is_some());
    let mut header = vec!["d", "r", "m", "nu", "cls", "value"];
    if with_oracle {
        header.push("classical");
    }
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(&header).map_err(csv_err)?;
    for (k, v, c) in rows {
        let r: Vec<String> = k.r.entries().iter().map(u32::to_string).collect();
        let mut rec = vec![k.d.to_string(), r.join(" "), k.m.to_string(), k.nu.to_string(), k.cls.to_string(), v.clone()];
        if let Some(c) = c {
            rec.push(c.clone());
        }
        w.write_record(&rec).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

/// Runs a parsed command, returning the exit code.
pub fn execute(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::GenArrangement(g) => {
            let b = SampleBox { probe_dmax: g.probe_dmax, probe_orders: g.probe_orders, retries: g.retries, ..SampleBox::default() };
            let a = generate_arrangement(g.seed, g.k, &b)?;
            emit(&a.to_json(), g.out.as_deref())?;
        }
        Command::Scatter(s) => {
            let a = read_arrangement(&s.arr)?;
            let d = build_diagram_with_orders(&a, s.dmax, s.orders.unwrap_or(a.k()))?;
            emit(&d.to_json(), s.out.as_deref())?;
        }
        Command::Potential(p) => {
            let a = read_arrangement(&p.arr)?;
            let at = p.at.as_deref().map(parse_point).transpose()?.unwrap_or_else(|| a.q.clone());
            let d = build_diagram_with_orders(&a, p.dmax, a.k())?;
            let w = potential_w_kmbar(&d, &at, p.mbar)?;
            let v = json!({ "at": at.to_strings(), "dmax": p.dmax, "mbar": p.mbar, "series": w.to_json() });
            emit(&v, p.out.as_deref())?;
        }
        Command::BrokenLines(b) => {
            let a = read_arrangement(&b.arr)?;
            let at = b.at.as_deref().map(parse_point).transpose()?.unwrap_or_else(|| a.q.clone());
            if let Some(l) = b.exclude {
                if l == 0 || l > a.k() {
                    return Err(Error::Key(format!("no marked point {l}")));
                }
            }
            let d = build_diagram_with_orders(&a, b.dmax, a.k())?;
            let lines = enumerate_broken_lines(&d, &at, b.exclude)?;
            let v = json!({
                "at": at.to_strings(),
                "count": lines.len(),
                "lines": lines.iter().map(|l| l.to_json()).collect::<Vec<_>>(),
            });
            emit(&v, b.out.as_deref())?;
        }
        Command::Invariant(i) => {
            let r = RVector::parse(&i.r)?;
            let key = DescendentKey::new(i.d, r.clone(), i.m, i.nu, i.cls)?;
            let a = match &i.arr {
                Some(p) => read_arrangement(p)?,
                None => verify::arrangement(i.seed, r.k())?,
            };
            let res = TropicalEngine::new(&a, i.d.max(1)).invariant(&key)?;
            emit(&res.to_json(), i.out.as_deref())?;
        }
        Command::Table(t) => {
            let spec = TableSpec { dmax: t.dmax, kmax: t.kmax, psi_max: t.psi_max, m_max: t.m_max };
            let a = match &t.arr {
                Some(p) => read_arrangement(p)?,
                None => verify::arrangement(t.seed, t.kmax)?,
            };
            let eng = TropicalEngine::new(&a, t.dmax.max(1));
            let oracle = ClassicalOracle::default();
            let mut rows = Vec::new();
            for k in compatible_keys(&spec) {
                let v = fmt_q(&eng.value(&k)?);
                let c = t.with_oracle.then(|| fmt_q(&oracle.eval(&k.to_gw_key())));
                rows.push((k, v, c));
            }
            let json_rows: Vec<Value> = rows
                .iter()
                .map(|(k, v, c)| {
                    let mut o = k.to_json();
                    o["value"] = json!(v);
                    if let Some(c) = c {
                        o["classical"] = json!(c);
                    }
                    o
                })
                .collect();
            let doc = json!({
                "seed": a.seed,
                "arrangement": a.to_json(),
                "dmax": t.dmax,
                "kmax": t.kmax,
                "psi_max": t.psi_max,
                "m_max": t.m_max,
                "rows": json_rows,
            });
            let csv = table_csv(&rows)?;
            if let Some(dir) = &t.out_dir {
                fs::create_dir_all(dir)?;
                fs::write(dir.join("table.csv"), &csv)?;
                emit(&doc, Some(&dir.join("table.json")))?;
            }
            match t.format {
                Format::Json => emit(&doc, None)?,
                Format::Csv => print!("{csv}"),
            }
        }
        Command::Oracle(o) => return oracle_command(o),
        Command::Verify(v) => {
            let cfg = VerifyConfig {
                tier: v.tier,
                seeds: v.seeds.clone(),
                budget: Duration::from_secs(v.budget_secs),
                ..VerifyConfig::new(v.tier)
            };
            let report = verify::run(&cfg);
            print!("{}", report.to_text());
            if let Some(dir) = &v.out_dir {
                fs::create_dir_all(dir)?;
                emit(&report.to_json(), Some(&dir.join("verify_report.json")))?;
            }
            return Ok(if report.passed() { EXIT_OK } else { EXIT_CHECK_FAILED });
        }
    }
    Ok(EXIT_OK)
}

fn oracle_command(o: OracleArgs) -> Result<i32> {
    let oracle = ClassicalOracle::default();
    match o.command {
        Some(OracleCommand::Jfun { dmax, ymax }) => {
            emit(&j_function(&oracle, dmax, ymax).to_json(), None)?;
        }
        Some(OracleCommand::VerifyIdentities { nmax, grid }) => {
            let h_bad: Vec<u64> = (1..=nmax).filter(|&n| !harmonic_identity(n)).collect();
            let c_bad = collapse_grid_failures(grid, grid, grid);
            let passed = h_bad.is_empty() && c_bad.is_empty();
            let v = json!({
                "harmonic": { "nmax": nmax, "failures": h_bad },
                "binomial_collapse": { "grid": grid, "failures": c_bad.len() },
                "passed": passed,
            });
            emit(&v, None)?;
            return Ok(if passed { EXIT_OK } else { EXIT_CHECK_FAILED });
        }
        None => {
            let (Some(d), Some(ins)) = (o.d, o.ins.as_deref()) else {
                return Err(Error::Parse("oracle needs --d and --ins, or a subcommand".into()));
            };
            let key = GWKey::parse(d, ins)?;
            emit(&json!({ "key": key.to_string(), "value": fmt_q(&oracle.eval(&key)) }), None)?;
        }
    }
    Ok(EXIT_OK)
}

/// Parse `args` (including the program name) and run, returning the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn main() -> i32 {
    run(std::env::args_os())
}
