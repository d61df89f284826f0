use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use schottky::geodesy::{default_window, double_coset_scan, pair_stabilizer};
use schottky::heights::upsilon_scan;
use schottky::io;
use schottky::padic::DEFAULT_PRECISION;
use schottky::schottky::DEFAULT_MAX_STEPS;
use schottky::{Execution, ProjPoint, SchottkyGroup};

#[derive(Parser, Debug)]
#[command(name = "schottky", version, about = "Computations with p-adic Schottky groups over Q")]
struct Cli {
    /// Worker threads for scans; defaults to the available parallelism.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// p-adic digits kept for approximate fixed points.
    #[arg(long, global = true, env = "SCHOTTKY_PRECISION", default_value_t = DEFAULT_PRECISION)]
    precision: u32,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the good-fundamental-domain axioms; exits 0 iff all pass.
    Verify { group: PathBuf },
    /// Walk a point back into the fundamental domain.
    Reduce {
        group: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: usize,
    },
    /// Closed disks B(γ)⁺ over all reduced words of one length.
    LimitCover {
        group: PathBuf,
        #[arg(long)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Interval for the exponent of the distance to the limit set.
    Delta {
        group: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long)]
        depth: usize,
    },
    /// Reduced words of one length, one per line.
    Enumerate {
        group: PathBuf,
        #[arg(long)]
        length: usize,
    },
    /// Heights of positive words, written as CSV.
    HeightsScan {
        group: PathBuf,
        #[arg(long)]
        max_length: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Counting scan over positive words with its log-log slope.
    Upsilon {
        group: PathBuf,
        #[arg(long)]
        max_length: usize,
    },
    /// Fit the constants (a, b) of the length/distance inequality.
    ProperFit {
        group: PathBuf,
        #[arg(long)]
        depth: usize,
    },
    /// Translates γ·F meeting F, with the certified length bound.
    Translates {
        group: PathBuf,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// Shortest-multiplier stabilizer of a pair of points.
    Stabilizer {
        group: PathBuf,
        /// Two points, e.g. "0,1" or "inf,7".
        #[arg(long, allow_hyphen_values = true)]
        pair: String,
        #[arg(long)]
        depth: usize,
    },
    /// Bounded double-coset scan for a linked pair of groups.
    GeodesicProbe {
        pair: PathBuf,
        /// Overrides the depth stored in the pair file.
        #[arg(long)]
        depth: Option<usize>,
        /// Stabilization window; defaults to the last third of the depths.
        #[arg(long)]
        window: Option<usize>,
    },
    /// Emit a generated group file; p = 5, rank 2, exponent 2 is the worked example.
    SampleGroup {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        rank: usize,
        #[arg(long, default_value_t = 2)]
        exponent: u32,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_unverified(path: &Path, precision: u32) -> Result<SchottkyGroup> {
    let text = read(path)?;
    io::group_from_str(&text, precision).with_context(|| format!("{}", path.display()))
}

fn load(path: &Path, precision: u32) -> Result<SchottkyGroup> {
    let mut g = load_unverified(path, precision)?;
    g.verify().with_context(|| format!("{}", path.display()))?;
    Ok(g)
}

fn parse_point(s: &str) -> Result<ProjPoint> {
    ProjPoint::parse(s).with_context(|| format!("invalid point {s:?}"))
}

fn emit(out: &mut impl Write, v: &Value) -> Result<()> {
    out.write_all(io::to_canonical_string(v).as_bytes())?;
    Ok(())
}

fn setup_threads(threads: Option<usize>) -> Result<Execution> {
    if threads == Some(0) {
        bail!("--threads must be at least 1");
    }
    #[cfg(feature = "parallel")]
    {
        if let Some(n) = threads {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .context("cannot start the worker pool")?;
            if n == 1 {
                return Ok(Execution::Sequential);
            }
        }
        Ok(Execution::Parallel)
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        Ok(Execution::Sequential)
    }
}

/// Returns `Ok(false)` when the command ran but its check failed.
fn run(cli: Cli, out: &mut impl Write) -> Result<bool> {
    let exec = setup_threads(cli.threads)?;
    let precision = cli.precision;
    match cli.command {
        Command::Verify { group } => {
            let mut g = load_unverified(&group, precision)?;
            let report = g.verify_good_domain();
            emit(out, &io::axiom_report_to_json(&report))?;
            return Ok(report.passed());
        }
        Command::Reduce { group, point, max_steps } => {
            let g = load(&group, precision)?;
            let x = parse_point(&point)?;
            let (word, y) = g.reduce_point(&x, max_steps)?;
            emit(
                out,
                &json!({
                    "point": io::point_to_json(&x),
                    "word": word.to_string(),
                    "reduced": io::point_to_json(&y),
                }),
            )?;
        }
        Command::LimitCover { group, depth, format } => {
            let g = load(&group, precision)?;
            let cover = g.limit_cover(depth, exec)?;
            match format {
                Format::Csv => out.write_all(io::cover_to_csv(&cover).as_bytes())?,
                Format::Json => emit(out, &io::cover_to_json(&cover))?,
            }
        }
        Command::Delta { group, point, depth } => {
            let g = load(&group, precision)?;
            let x = parse_point(&point)?;
            let bound = g.delta_to_limit(&x, depth, exec)?;
            emit(out, &io::delta_to_json(&x, &bound))?;
        }
        Command::Enumerate { group, length } => {
            let g = load(&group, precision)?;
            for w in g.enumerate_words(length) {
                writeln!(out, "{w}")?;
            }
        }
        Command::HeightsScan { group, max_length, out: path } => {
            let g = load(&group, precision)?;
            let scan = upsilon_scan(&g, max_length, exec)?;
            fs::write(&path, io::heights_to_csv(&scan.heights))
                .with_context(|| format!("cannot write {}", path.display()))?;
            emit(
                out,
                &json!({
                    "out": path.display().to_string(),
                    "rows": scan.heights.len(),
                    "c": scan.c.to_string(),
                }),
            )?;
        }
        Command::Upsilon { group, max_length } => {
            let g = load(&group, precision)?;
            let scan = upsilon_scan(&g, max_length, exec)?;
            emit(out, &io::scan_summary_to_json(&scan))?;
        }
        Command::ProperFit { group, depth } => {
            let g = load(&group, precision)?;
            let fit = g.fit_proper_constants(depth, exec)?;
            emit(out, &io::proper_to_json(&fit))?;
        }
        Command::Translates { group, depth } => {
            let g = load(&group, precision)?;
            let f = g.fundamental_region();
            let report = g.intersecting_translates(&f, &f, depth, exec)?;
            emit(out, &io::translates_to_json(&report))?;
        }
        Command::Stabilizer { group, pair, depth } => {
            let g = load(&group, precision)?;
            let Some((x, y)) = pair.split_once(',') else {
                bail!("--pair expects two comma-separated points, got {pair:?}");
            };
            let (x, y) = (parse_point(x)?, parse_point(y)?);
            let s = pair_stabilizer(&g, &x, &y, depth, exec)?;
            emit(out, &io::stabilizer_to_json(s.as_ref()))?;
        }
        Command::GeodesicProbe { pair, depth, window } => {
            let text = read(&pair)?;
            let base = pair.parent().map(Path::to_path_buf).unwrap_or_default();
            let spec = io::pair_from_json(&io::parse_json(&text)?, precision, |rel| {
                let path = base.join(rel);
                let text = fs::read_to_string(&path)
                    .map_err(|e| schottky::Error::Parse { field: path.display().to_string(), message: e.to_string() })?;
                io::parse_json(&text)
            })
            .with_context(|| format!("{}", pair.display()))?;
            let Some(depth) = depth.or(spec.depth) else {
                bail!("no depth given and the pair file has none");
            };
            let (mut g1, mut g2) = (spec.gamma1, spec.gamma2);
            g1.verify().context("gamma1")?;
            g2.verify().context("gamma2")?;
            let window = window.unwrap_or_else(|| default_window(depth));
            let report = double_coset_scan(&g1, &spec.g, &g2, depth, window, exec)?;
            emit(out, &io::commensurability_to_json(&report))?;
        }
        Command::SampleGroup { p, rank, exponent } => {
            let g = SchottkyGroup::sample(p, rank, exponent)?;
            out.write_all(io::group_to_string(&g).as_bytes())?;
        }
    }
    Ok(true)
}

fn fail(message: String) -> ExitCode {
    eprint!("{}", io::to_canonical_string(&json!({ "error": message })));
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(e.render().to_string().trim_end().to_owned()),
    };
    let stdout = std::io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(cli, &mut out).and_then(|ok| {
        out.flush()?;
        Ok(ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => fail(format!("{e:#}")),
    }
}
