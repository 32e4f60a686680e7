//! Command-line interface: argument definitions and the subcommand runners.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::census::{census_exhaustive, census_monte_carlo, ks_normalize, summarize, TraceHistogram};
use crate::eval_map::{
    brute_force_distribution, build_matrix, exact_distribution, j_degree_part, rank_kernel,
    verify_kernel_is_j, verify_surjective, BRUTE_FORCE_CAP,
};
use crate::field::Field;
use crate::forms::basis_len;
use crate::mass::mass_check;
use crate::report::{self, EvalRow, Series};
use crate::stats::{expansion_residuals, gaussian, model_b, model_v, psi, ModelFamily};

#[derive(Debug, Parser)]
#[command(name = "plane-traces", version, about = "Trace distributions of plane curves over finite fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tally traces of Frobenius over all or randomly drawn forms.
    Census(CensusArgs),
    /// Rank, kernel and surjectivity checks for the evaluation map.
    Evalmap(EvalmapArgs),
    /// Evaluate the Gaussian, psi and the B_i / V_i models on a grid.
    Models(ModelsArgs),
    /// Residuals of the Gaussian expansion of the continuous binomial.
    Residuals(ResidualsArgs),
    /// Verify the GL_3 mass formula for plane quartics over F_2 or F_3.
    MassCheck(MassArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exhaustive,
    Mc,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// CSV destination; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write an SVG chart next to the CSV (same path, .svg extension).
    #[arg(long, requires = "out")]
    pub svg: bool,
}

fn default_shards() -> u64 {
    std::thread::available_parallelism().map_or(1, |n| n.get() as u64)
}

#[derive(Debug, Args)]
pub struct CensusArgs {
    #[arg(long)]
    pub q: u32,
    #[arg(long, default_value_t = 4)]
    pub d: u32,
    #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
    pub mode: Mode,
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; results do not depend on this.
    #[arg(long, default_value_t = default_shards(), value_parser = clap::value_parser!(u64).range(1..))]
    pub shards: u64,
    /// Tally only nonsingular curves; singular forms are counted as rejected.
    #[arg(long)]
    pub smooth_only: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct EvalmapArgs {
    /// Field orders: a comma list of values or `a-b` ranges.
    #[arg(long, default_value = "2,3,4,5,7")]
    pub q: String,
    /// Degrees, same syntax as --q.
    #[arg(long, default_value = "1-8")]
    pub d: String,
    #[arg(long, default_value_t = default_shards(), value_parser = clap::value_parser!(u64).range(1..))]
    pub shards: u64,
    /// Also write exact and brute-force point-count distributions here.
    #[arg(long)]
    pub dist_out: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ModelsArgs {
    #[arg(long, default_value_t = 53.0)]
    pub q: f64,
    /// `start:stop:step`, inclusive of stop when reachable within 1e-9.
    #[arg(long, default_value = "-6:6:0.05", allow_hyphen_values = true)]
    pub grid: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ResidualsArgs {
    /// F1, F2, F3, AFFINE or SYMMETRIC.
    #[arg(long, default_value = "F2")]
    pub family: String,
    /// Comma-separated values of q.
    #[arg(long, default_value = "100,400,1600,6400")]
    pub q: String,
    #[arg(long, default_value = "0.25:3:0.25", allow_hyphen_values = true)]
    pub grid: String,
    /// Fail unless max |r2| and max |r3| shrink by 1.5x between successive q.
    #[arg(long)]
    pub check_decay: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct MassArgs {
    #[arg(long)]
    pub q: u32,
    #[arg(long, default_value_t = default_shards(), value_parser = clap::value_parser!(u64).range(1..))]
    pub shards: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Grid points `start, start + step, ...` up to `stop` (within 1e-9).
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [start, stop, step] = parts.as_slice() else {
        bail!("grid must be start:stop:step, got {spec:?}");
    };
    let parse = |s: &str| s.trim().parse::<f64>().with_context(|| format!("bad grid number {s:?}"));
    let (start, stop, step) = (parse(start)?, parse(stop)?, parse(step)?);
    if !(step > 0.0) || !start.is_finite() || !stop.is_finite() {
        bail!("grid step must be positive and bounds finite, got {spec:?}");
    }
    if start > stop {
        bail!("grid start {start} exceeds stop {stop}");
    }
    let snap = 1e-12 * start.abs().max(stop.abs()).max(step);
    let mut out = Vec::new();
    for k in 0u64.. {
        let x = start + k as f64 * step;
        if x > stop + 1e-9 {
            break;
        }
        out.push(if x.abs() < snap { 0.0 } else { x });
    }
    Ok(out)
}

/// Comma-separated integers and inclusive `a-b` ranges.
pub fn parse_int_list(spec: &str) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match item.split_once('-') {
            Some((a, b)) => {
                let (a, b): (u32, u32) = (a.trim().parse()?, b.trim().parse()?);
                if a > b {
                    bail!("empty range {item:?}");
                }
                out.extend(a..=b);
            }
            None => out.push(item.parse().with_context(|| format!("bad integer {item:?}"))?),
        }
    }
    if out.is_empty() {
        bail!("empty list {spec:?}");
    }
    Ok(out)
}

pub fn parse_real_list(spec: &str) -> Result<Vec<f64>> {
    let out: Vec<f64> = spec
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().with_context(|| format!("bad number {s:?}")))
        .collect::<Result<_>>()?;
    if out.is_empty() {
        bail!("empty list {spec:?}");
    }
    Ok(out)
}

/// The command line as echoed into CSV output: program name normalized and
/// the options that cannot change results (`--shards`, output paths)
/// removed, so reruns with different worker counts stay byte-identical.
pub fn echo_command(args: &[String]) -> String {
    const DROPPED: [&str; 3] = ["--shards", "--out", "--dist-out"];
    let mut kept = vec!["plane-traces".to_string()];
    let mut iter = args.iter().skip(1);
    while let Some(a) = iter.next() {
        if DROPPED.contains(&a.as_str()) {
            iter.next();
        } else if !DROPPED.iter().any(|d| a.starts_with(&format!("{d}="))) {
            kept.push(a.clone());
        }
    }
    kept.join(" ")
}

/// Whether every requested check passed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub failures: Vec<String>,
}

impl Outcome {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

fn field(q: u32) -> Result<Arc<Field>> {
    Ok(Arc::new(Field::of_order(q).with_context(|| format!("no field of order {q}"))?))
}

fn emit(output: &OutputArgs, csv: &str, svg: impl FnOnce() -> String) -> Result<()> {
    match &output.out {
        Some(path) => {
            fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?;
            if output.svg {
                let svg_path = path.with_extension("svg");
                fs::write(&svg_path, svg()).with_context(|| format!("writing {}", svg_path.display()))?;
            }
        }
        None => print!("{csv}"),
    }
    Ok(())
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn run(cli: Cli, command_line: &str) -> Result<Outcome> {
    match cli.command {
        Command::Census(a) => cmd_census(&a, command_line),
        Command::Evalmap(a) => cmd_evalmap(&a, command_line),
        Command::Models(a) => cmd_models(&a, command_line),
        Command::Residuals(a) => cmd_residuals(&a, command_line),
        Command::MassCheck(a) => cmd_mass_check(&a, command_line),
    }
}

pub fn run_census(a: &CensusArgs) -> Result<TraceHistogram> {
    let f = field(a.q)?;
    let workers = a.shards as usize;
    Ok(match a.mode {
        Mode::Exhaustive => census_exhaustive(&f, a.d, a.smooth_only, workers)?,
        Mode::Mc => census_monte_carlo(&f, a.d, a.samples, a.seed, a.smooth_only, workers)?,
    })
}

pub fn cmd_census(a: &CensusArgs, command_line: &str) -> Result<Outcome> {
    let hist = run_census(a)?;
    let summary = if a.d == 4 && a.smooth_only { ks_normalize(&hist)? } else { summarize(&hist) };
    let csv = report::histogram_csv(command_line, &hist, &summary);
    emit(&a.output, &csv, || {
        let mut series = vec![
            Series::new("density", summary.rows.iter().map(|r| (r.x, r.density)).collect()),
            Series::new("v_value", summary.rows.iter().map(|r| (r.x, r.v_value)).collect()),
        ];
        if a.d == 4 && a.smooth_only {
            let q = a.q as f64;
            let xs: Vec<f64> = (-120..=120).map(|k| k as f64 * 0.05).collect();
            for i in 1..=3 {
                let pts = xs.iter().filter_map(|&x| model_b(i, q, x).ok().map(|y| (x, y))).collect();
                series.push(Series::new(format!("B{i}"), pts));
            }
            let pts = xs.iter().filter_map(|&x| model_v(2, q, x).ok().map(|y| (x, y))).collect();
            series.push(Series::new("V2", pts));
        }
        let title = format!("trace distribution, q={}, d={} ({})", a.q, a.d, hist.mode.label());
        report::line_chart(&title, "x = t / sqrt(q)", "density", &series)
    })?;
    Ok(Outcome { failures: Vec::new() })
}

pub fn cmd_evalmap(a: &EvalmapArgs, command_line: &str) -> Result<Outcome> {
    let qs = parse_int_list(&a.q)?;
    let ds = parse_int_list(&a.d)?;
    let mut rows = Vec::new();
    let mut dist_rows = Vec::new();
    let mut failures = Vec::new();
    for &q in &qs {
        let f = field(q)?;
        for &d in &ds {
            let m = build_matrix(&f, d);
            let (rank, kernel) = rank_kernel(&m);
            let j = j_degree_part(&f, d);
            let row = EvalRow {
                q,
                d,
                dim_rd: basis_len(d),
                n: m.rows(),
                rank,
                nullity: kernel.len(),
                dim_jd: j.dimension,
                kernel_is_j: verify_kernel_is_j(&f, d),
            };
            if !row.kernel_is_j {
                failures.push(format!("q={q} d={d}: kernel of L differs from J_d"));
            }
            if d + 1 >= 2 * q && !verify_surjective(&f, d) {
                failures.push(format!("q={q} d={d}: L is not surjective"));
            }
            if a.dist_out.is_some() {
                let exact = exact_distribution(&f, d).ok();
                let feasible = (q as u64)
                    .checked_pow(basis_len(d) as u32)
                    .is_some_and(|t| t <= BRUTE_FORCE_CAP);
                let brute = if feasible {
                    Some(brute_force_distribution(&f, d, a.shards as usize)?)
                } else {
                    None
                };
                if let (Some(e), Some(b)) = (&exact, &brute) {
                    if e.counts != b.counts {
                        failures.push(format!("q={q} d={d}: exact and brute-force distributions differ"));
                    }
                }
                if exact.is_some() || brute.is_some() {
                    for n in 0..=m.rows() {
                        dist_rows.push((
                            q,
                            d,
                            n,
                            exact.as_ref().map(|e| e.count(n).to_string()),
                            brute.as_ref().map(|b| b.count(n).to_string()),
                        ));
                    }
                }
            }
            rows.push(row);
        }
    }
    if let Some(path) = &a.dist_out {
        write_file(path, &report::distribution_csv(command_line, &dist_rows))?;
    }
    let csv = report::evalmap_csv(command_line, &rows);
    emit(&a.output, &csv, || {
        let series: Vec<Series> = qs
            .iter()
            .map(|&q| {
                let pts = rows.iter().filter(|r| r.q == q).map(|r| (r.d as f64, r.nullity as f64)).collect();
                Series::new(format!("nullity, q={q}"), pts)
            })
            .collect();
        report::line_chart("kernel dimension of L", "d", "nullity", &series)
    })?;
    Ok(Outcome { failures })
}

pub fn cmd_models(a: &ModelsArgs, command_line: &str) -> Result<Outcome> {
    let grid = parse_grid(&a.grid)?;
    let mut rows = Vec::with_capacity(grid.len());
    for &x in &grid {
        let mut row = [x, gaussian(x), psi(x), 0.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        for i in 1..=3u32 {
            let at = |r| format!("row x={x}: {r}");
            row[2 + i as usize] = model_b(i, a.q, x).map_err(|e| anyhow::anyhow!(at(e)))?;
            row[5 + i as usize] = model_v(i, a.q, x).map_err(|e| anyhow::anyhow!(at(e)))?;
        }
        rows.push(row);
    }
    let csv = report::models_csv(command_line, &rows);
    emit(&a.output, &csv, || {
        let names = ["gauss", "psi", "B1", "B2", "B3", "V1", "V2", "V3"];
        let series: Vec<Series> = names
            .iter()
            .enumerate()
            .map(|(k, name)| Series::new(*name, rows.iter().map(|r| (r[0], r[k + 1])).collect()))
            .collect();
        report::line_chart(&format!("models at q={}", a.q), "x", "value", &series)
    })?;
    Ok(Outcome { failures: Vec::new() })
}

pub fn cmd_residuals(a: &ResidualsArgs, command_line: &str) -> Result<Outcome> {
    let family = ModelFamily::parse(&a.family)
        .with_context(|| format!("unknown family {:?}; expected F1, F2, F3, AFFINE or SYMMETRIC", a.family))?;
    let qs = parse_real_list(&a.q)?;
    let grid = parse_grid(&a.grid)?;
    let table = expansion_residuals(family, &qs, &grid)?;
    if table.flagged {
        eprintln!("warning: family {} does not satisfy E = sigma^2 + 1", family.label());
    }
    let mut failures = Vec::new();
    if a.check_decay {
        for w in qs.windows(2) {
            let (a2, a3) = table.max_abs(w[0]);
            let (b2, b3) = table.max_abs(w[1]);
            let (f2, f3) = (a2 / b2, a3 / b3);
            eprintln!("q {} -> {}: r2 shrinks {f2:.3}x, r3 shrinks {f3:.3}x", w[0], w[1]);
            if family == ModelFamily::Symmetric {
                continue;
            }
            if !(f2 >= 1.5 && f3 >= 1.5) {
                failures.push(format!("q={} -> {}: decay factors {f2:.3}, {f3:.3} below 1.5", w[0], w[1]));
            }
        }
        if family == ModelFamily::Symmetric {
            if let Some(r) = table.rows.iter().find(|r| r.r3.abs() > 1e-10) {
                failures.push(format!("q={} x={}: r3={} is not zero", r.q, r.x, r.r3));
            }
        }
    }
    let csv = report::residuals_csv(command_line, &table);
    emit(&a.output, &csv, || {
        let mut series = Vec::new();
        for &q in &qs {
            let pts = |f: fn(&crate::stats::ResidualRow) -> f64| {
                table.rows.iter().filter(|r| r.q == q).map(|r| (r.x, f(r))).collect()
            };
            series.push(Series::new(format!("r2, q={q}"), pts(|r| r.r2)));
            series.push(Series::new(format!("r3, q={q}"), pts(|r| r.r3)));
        }
        report::line_chart(&format!("expansion residuals, {}", family.label()), "x", "residual", &series)
    })?;
    Ok(Outcome { failures })
}

pub fn cmd_mass_check(a: &MassArgs, command_line: &str) -> Result<Outcome> {
    if a.q != 2 && a.q != 3 {
        bail!("mass-check supports q = 2 or 3, got {}", a.q);
    }
    let f = field(a.q)?;
    let workers = a.shards as usize;
    let hist = census_exhaustive(&f, 4, true, workers)?;
    let report = mass_check(&f, &hist, workers)?;
    eprintln!(
        "q={}: {} smooth orbits, {} curve classes, total mass {} (q^6 + 1 = {})",
        a.q,
        report.orbits.len(),
        report.classes.len(),
        report.total_mass,
        report.q6_plus_1()
    );
    let mut failures: Vec<String> =
        report.rows.iter().filter(|r| !r.equal).map(|r| format!("q={} t={}: counts differ", a.q, r.t)).collect();
    if !report.orbit_stabilizer_ok {
        failures.push(format!("q={}: orbit-stabilizer identity fails", a.q));
    }
    let csv = report::mass_csv(command_line, &report);
    emit(&a.output, &csv, || {
        let pts = |f: fn(&crate::mass::MassRow) -> f64| report.rows.iter().map(|r| (r.t as f64, f(r))).collect();
        let series = vec![
            Series::new("form count / #GL3", pts(|r| ratio_f64(&r.by_forms))),
            Series::new("orbit sum", pts(|r| ratio_f64(&r.by_orbits))),
        ];
        report::line_chart(&format!("weighted curve counts, q={}", a.q), "t", "N(t)", &series)
    })?;
    Ok(Outcome { failures })
}

fn ratio_f64(r: &num_rational::BigRational) -> f64 {
    let n: f64 = r.numer().to_string().parse().unwrap_or(f64::NAN);
    let d: f64 = r.denom().to_string().parse().unwrap_or(f64::NAN);
    n / d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("-6:6:0.05").unwrap().len(), 241);
        let g = parse_grid("-6:6:0.05").unwrap();
        assert_eq!(g[120], 0.0);
        assert_eq!(parse_grid("0.25:3:0.25").unwrap().len(), 12);
        assert_eq!(parse_grid("0:1:0.3").unwrap().len(), 4);
        assert_eq!(parse_grid("1:1:1").unwrap(), vec![1.0]);
        assert!(parse_grid("0:1:0").is_err());
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("2:1:0.5").is_err());
    }

    #[test]
    fn lists() {
        assert_eq!(parse_int_list("2,3,5-7").unwrap(), vec![2, 3, 5, 6, 7]);
        assert!(parse_int_list("").is_err());
        assert!(parse_int_list("4-2").is_err());
        assert_eq!(parse_real_list("100, 400").unwrap(), vec![100.0, 400.0]);
    }

    #[test]
    fn echo_drops_shards_and_paths() {
        let args: Vec<String> = ["/x/plane-traces", "census", "--q", "2", "--shards", "8", "--out=a.csv", "--svg"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(echo_command(&args), "plane-traces census --q 2 --svg");
    }

    #[test]
    fn parses_subcommands() {
        let cli = Cli::try_parse_from(["p", "census", "--q", "53", "--mode", "mc", "--smooth-only"]).unwrap();
        assert!(matches!(cli.command, Command::Census(ref a) if a.mode == Mode::Mc && a.smooth_only));
        assert!(Cli::try_parse_from(["p", "census", "--q", "2", "--samples", "0"]).is_err());
        assert!(Cli::try_parse_from(["p", "census", "--q", "2", "--shards", "0"]).is_err());
        assert!(Cli::try_parse_from(["p", "models", "--svg"]).is_err());
        assert!(Cli::try_parse_from(["p", "models", "--grid", "-3:3:0.5"]).is_ok());
    }
}
