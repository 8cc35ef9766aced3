//! The `lrh` command line and its JSON file formats.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bounds::total_output_bound;
use crate::driver::{low_rank_hankel, SamplePointsResult, SolveOptions, SolveTrace};
use crate::error::{Error, Result};
use crate::exact::rational::{format_rational, parse_rational};
use crate::hankel::{build_pencil, LinearHankelPencil};
use crate::roots::BoxRecord;
use crate::solver::{ParamRecord, RationalParametrization};
use crate::verify::{
    default_table_rows, membership_failures, plant_rank_deficient, reproduce_degrees, PlantSpec, RowReport, TableRow,
};

/// Pencil file: the `2m - 1` generators of `H_0, ..., H_n` as rational
/// strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PencilFile {
    pub m: usize,
    pub n: usize,
    pub matrices: Vec<Vec<String>>,
}

impl PencilFile {
    pub fn from_pencil(p: &LinearHankelPencil) -> Self {
        PencilFile {
            m: p.m(),
            n: p.n(),
            matrices: p
                .mats()
                .iter()
                .map(|h| h.gens().iter().map(format_rational).collect())
                .collect(),
        }
    }

    pub fn to_pencil(&self) -> Result<LinearHankelPencil> {
        if self.m == 0 {
            return Err(Error::Format("m must be positive".into()));
        }
        let gens = self
            .matrices
            .iter()
            .map(|row| row.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        build_pencil(self.m, self.n, gens)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ResultFile {
    pub params: Vec<ParamRecord>,
    pub boxes: Vec<BoxRecord>,
    pub trace: SolveTrace,
    pub total_degree: usize,
    /// Integer, or a decimal string when it does not fit in 64 bits.
    pub bound: Value,
    pub seed: u64,
}

impl ResultFile {
    pub fn new(res: &SamplePointsResult, pencil: &LinearHankelPencil, r: usize, seed: u64) -> Self {
        let bound = if pencil.n() == 0 {
            json!(1)
        } else {
            let total = total_output_bound(pencil.m(), pencil.n(), r).total;
            total.to_u64().map_or_else(|| json!(total.to_string()), |v| json!(v))
        };
        ResultFile {
            params: res.params.iter().map(RationalParametrization::to_record).collect(),
            boxes: res.boxes.iter().map(|b| b.to_record()).collect(),
            trace: res.trace.clone(),
            total_degree: res.total_degree,
            bound,
            seed,
        }
    }
}

pub fn read_pencil(path: &Path) -> Result<LinearHankelPencil> {
    let text = fs::read_to_string(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    let file: PencilFile = serde_json::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    file.to_pencil()
}

pub fn read_result(path: &Path) -> Result<ResultFile> {
    let text = fs::read_to_string(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

/// 0 ok, 1 bad input, 2 genericity, 3 resources, 4 verification.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Dimension(_) | Error::Format(_) | Error::Inexact(_) | Error::Contract(_) => 1,
        Error::Genericity(_) | Error::Randomness(_) => 2,
        Error::Resource(_) => 3,
        Error::Verification(_) => 4,
    }
}

#[derive(Parser, Debug)]
#[command(name = "lrh", version, about = "Real sample points of low-rank Hankel pencils")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample the locus rank H(x) <= r of a pencil file.
    Solve(SolveArgs),
    /// Print the degree bounds for the given sizes.
    Bounds(BoundsArgs),
    /// Re-check a result file against its pencil.
    Verify(VerifyArgs),
    /// Write a pencil whose rank at a given point is r.
    Plant(PlantArgs),
    /// Compare observed degrees with a table of expected ones.
    Table(TableArgs),
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    rank: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Width of the output boxes, as a rational.
    #[arg(long)]
    eps: Option<String>,
    #[arg(long)]
    no_verify: bool,
    #[arg(long)]
    check_genericity: bool,
    #[arg(long)]
    merge_union: bool,
    #[arg(long, default_value_t = 3)]
    max_retries: usize,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    rank: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    rank: usize,
    #[arg(long)]
    result: PathBuf,
}

#[derive(Args, Debug)]
struct PlantArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    rank: usize,
    /// Comma-separated rational coordinates.
    #[arg(long, allow_hyphen_values = true)]
    point: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TableArgs {
    /// JSON list of rows; the bundled tables if omitted.
    #[arg(long)]
    rows: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    seeds: u64,
    #[arg(long, default_value_t = 4)]
    max_m: usize,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    json: bool,
}

/// Runs `lrh` on the given arguments (program name first) and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return 1;
            }
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    let res = match cli.command {
        Command::Solve(a) => solve(a, out, err),
        Command::Bounds(a) => bounds(a, out),
        Command::Verify(a) => verify(a, out),
        Command::Plant(a) => plant(a, out, err),
        Command::Table(a) => table(a, out),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Format(e.to_string())
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Error::Format(format!("{}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(io),
    }
}

fn solve(a: SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let pencil = read_pencil(&a.input)?;
    if a.rank >= pencil.m() {
        return Err(Error::Contract(format!("rank {} out of range for m = {}", a.rank, pencil.m())));
    }
    let mut opts = SolveOptions {
        max_retries: a.max_retries,
        verify: !a.no_verify,
        merge_union: a.merge_union,
        check_genericity: a.check_genericity,
        jobs: a.jobs,
        ..SolveOptions::default()
    };
    if let Some(e) = &a.eps {
        opts.eps = parse_rational(e)?;
        if opts.eps <= crate::exact::rat(0) {
            return Err(Error::Format("eps must be positive".into()));
        }
    }
    match low_rank_hankel(&pencil, a.rank, a.seed, &opts) {
        Ok(res) => {
            let file = ResultFile::new(&res, &pencil, a.rank, a.seed);
            let text = serde_json::to_string_pretty(&file).map_err(|e| Error::Format(e.to_string()))? + "\n";
            emit(&text, a.output.as_deref(), out)?;
            Ok(0)
        }
        Err(e) => {
            let trace = serde_json::to_string_pretty(&e.trace).unwrap_or_default();
            let _ = writeln!(err, "trace: {trace}");
            Err(e.error)
        }
    }
}

fn bounds(a: BoundsArgs, out: &mut dyn Write) -> Result<i32> {
    if a.rank >= a.m || a.n == 0 {
        return Err(Error::Contract(format!(
            "bounds need 0 <= rank < m and n >= 1 (m = {}, n = {}, rank = {})",
            a.m, a.n, a.rank
        )));
    }
    let rep = total_output_bound(a.m, a.n, a.rank);
    let text = if a.json {
        serde_json::to_string_pretty(&rep.to_json()).map_err(|e| Error::Format(e.to_string()))? + "\n"
    } else {
        rep.to_text()
    };
    out.write_all(text.as_bytes()).map_err(io)?;
    Ok(0)
}

fn verify(a: VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let pencil = read_pencil(&a.input)?;
    let file = read_result(&a.result)?;
    let mut failed = false;
    for (k, rec) in file.params.iter().enumerate() {
        let param = RationalParametrization::from_record(rec)?;
        let bad = membership_failures(&pencil, a.rank, &param)?;
        if bad.is_empty() {
            writeln!(out, "param {k}: ok (degree {})", param.degree()).map_err(io)?;
        } else {
            failed = true;
            writeln!(out, "param {k}: FAILED, nonzero minors {bad:?}").map_err(io)?;
        }
    }
    if failed {
        return Err(Error::Verification("some parametrizations leave the rank locus".into()));
    }
    writeln!(out, "{} parametrizations verified", file.params.len()).map_err(io)?;
    Ok(0)
}

fn plant(a: PlantArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let x0 = if a.point.trim().is_empty() {
        Vec::new()
    } else {
        a.point.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?
    };
    let spec = PlantSpec {
        m: a.m,
        n: a.n,
        r: a.rank,
        x0,
        seed: a.seed,
    };
    let pencil = plant_rank_deficient(&spec)?;
    let rank = pencil.rank_at(&spec.x0)?;
    let text = serde_json::to_string_pretty(&PencilFile::from_pencil(&pencil)).map_err(|e| Error::Format(e.to_string()))? + "\n";
    emit(&text, a.output.as_deref(), out)?;
    let point: Vec<String> = spec.x0.iter().map(format_rational).collect();
    let info: &mut dyn Write = if a.output.is_some() { out } else { err };
    writeln!(info, "planted point ({}) with rank {rank}", point.join(", ")).map_err(io)?;
    Ok(0)
}

fn table(a: TableArgs, out: &mut dyn Write) -> Result<i32> {
    let rows: Vec<TableRow> = match &a.rows {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?
        }
        None => default_table_rows(),
    };
    let opts = SolveOptions {
        jobs: a.jobs,
        ..SolveOptions::default()
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.jobs.max(1))
        .build()
        .map_err(|e| Error::Resource(e.to_string()))?;
    let reports = pool.install(|| reproduce_degrees(&rows, a.seeds, a.max_m, &opts));
    if a.json {
        let text = serde_json::to_string_pretty(&reports).map_err(|e| Error::Format(e.to_string()))? + "\n";
        out.write_all(text.as_bytes()).map_err(io)?;
    } else {
        out.write_all(format_table(&reports).as_bytes()).map_err(io)?;
    }
    Ok(0)
}

fn opt(v: Option<u64>) -> String {
    v.map_or_else(|| "-".into(), |d| d.to_string())
}

pub fn format_table(reports: &[RowReport]) -> String {
    let mut s = format!(
        "{:<10} {:>9} {:>9} {:>12} {:>12} {:>8}  {}\n",
        "(m,r,n)", "expTotal", "expMax", "obsTotal", "obsMax", "bound", "status"
    );
    for rep in reports {
        let row = &rep.row;
        let name = format!("({},{},{})", row.m, row.r, row.n);
        if rep.bounds_only {
            s.push_str(&format!(
                "{:<10} {:>9} {:>9} {:>12} {:>12} {:>8}  bounds-only\n",
                name,
                opt(row.total_deg),
                opt(row.max_deg),
                "",
                "",
                rep.bound
            ));
            continue;
        }
        let join = |f: &dyn Fn(&crate::verify::RunReport) -> Option<u64>| {
            rep.runs.iter().map(|r| opt(f(r))).collect::<Vec<_>>().join("/")
        };
        let status = if rep.runs.iter().any(|r| r.error.is_some()) {
            let e = rep.runs.iter().find_map(|r| r.error.clone()).unwrap_or_default();
            format!("error: {e}")
        } else if rep.total_matches() {
            "match".into()
        } else {
            "differs".into()
        };
        let secs: Vec<String> = rep.runs.iter().map(|r| format!("{:.1}s", r.seconds)).collect();
        s.push_str(&format!(
            "{:<10} {:>9} {:>9} {:>12} {:>12} {:>8}  {} [{}]\n",
            name,
            opt(row.total_deg),
            opt(row.max_deg),
            join(&|r| r.total_degree),
            join(&|r| r.max_degree),
            rep.bound,
            status,
            secs.join(" ")
        ));
    }
    s
}
