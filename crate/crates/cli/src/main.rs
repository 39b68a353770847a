mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use phtrecon::bench::{run_bench, to_csv, DEFAULT_REPETITIONS, TABLE_SIZES};
use phtrecon::generators::{gen_harmonic, gen_pl, gen_spline, GroundTruth, DEFAULT_KNOTS, HARMONIC_TARGET};
use phtrecon::landscape::{landscapes, reconstruct_from_landscapes, Landscape};
use phtrecon::reconstruct_pl::{
    line_sets, line_sets_from_diagrams, naive_reconstruct, rolling_ball_reconstruct, ReconstructedFunction,
    TripleConfig, DEFAULT_ANGLES_DEG, DEFAULT_MATCH_TOL,
};
use phtrecon::reconstruct_smooth::{
    five_line_reconstruct, SmoothConfig, DEFAULT_SHALLOW_DEG, DEFAULT_STEEP_DEG, DEFAULT_TAU,
};
use phtrecon::sampling::DEFAULT_SAMPLES_PER_UNIT;
use phtrecon::{sublevel_diagram, Angle, CriticalKind, Diagram, Point2, SampledFunction};

use io::{read_json, write_json, write_text, FunctionInput, LandscapeFile, PointsFile};

#[derive(Parser)]
#[command(name = "phtrecon", version, about = "Reconstruct functions from directional persistence diagrams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded test function and its ground-truth sidecar.
    Gen(GenArgs),
    /// Sublevel persistence diagram of a function along one direction.
    Diagram(DiagramArgs),
    /// Persistence landscapes of a diagram.
    Landscape(LandscapeArgs),
    /// Recover a piecewise-linear function from three diagrams.
    ReconstructPl(ReconstructPlArgs),
    /// Locate critical points of a sampled smooth function.
    ReconstructSmooth(ReconstructSmoothArgs),
    /// Locate critical points from selected vertical landscape levels.
    ReconstructLandscapes(ReconstructLandscapesArgs),
    /// Time naive and rolling-ball reconstruction.
    Bench(BenchArgs),
    /// Compare a reconstruction with a ground-truth file.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct Output {
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write whitespace-separated plot columns to this file.
    #[arg(long, value_name = "PATH")]
    emit_plot_data: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Pl,
    Harmonic,
    Spline,
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_enum)]
    family: Family,
    /// Interior critical points (pl).
    #[arg(long, default_value_t = 10)]
    n: usize,
    /// Knot count (spline).
    #[arg(long, default_value_t = DEFAULT_KNOTS)]
    knots: usize,
    #[arg(long)]
    seed: u64,
    /// Domain `a,b`.
    #[arg(long, value_parser = parse_pair, default_value = "0,1", allow_hyphen_values = true)]
    domain: (f64, f64),
    /// Grid density of smooth families.
    #[arg(long, default_value_t = DEFAULT_SAMPLES_PER_UNIT)]
    samples_per_unit: f64,
    /// Required: the ground truth goes next to it as `<stem>.truth.json`.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_name = "PATH")]
    emit_plot_data: Option<PathBuf>,
}

#[derive(Args)]
struct DiagramArgs {
    /// Function file: `{"vertices": ...}` or `{"xs": ..., "ys": ...}`.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    angle_deg: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct LandscapeArgs {
    /// Diagram file.
    #[arg(long = "in")]
    input: PathBuf,
    /// Number of levels; defaults to one per diagram point.
    #[arg(long)]
    levels: Option<usize>,
    /// Where to close the essential bar; defaults to the largest finite
    /// death, or the essential birth when there is none.
    #[arg(long, allow_negative_numbers = true)]
    cap: Option<f64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Search {
    RollingBall,
    Naive,
}

#[derive(Args)]
struct ReconstructPlArgs {
    /// Function file; diagrams are computed from it at `--angles`.
    #[arg(long = "in", conflicts_with_all = ["in_t", "in_s", "in_r"])]
    input: Option<PathBuf>,
    /// Diagram for the first (largest) angle.
    #[arg(long, requires_all = ["in_s", "in_r", "start", "end"])]
    in_t: Option<PathBuf>,
    /// Diagram for the middle angle.
    #[arg(long)]
    in_s: Option<PathBuf>,
    /// Diagram for the smallest angle.
    #[arg(long)]
    in_r: Option<PathBuf>,
    /// Three decreasing angles in degrees.
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_ANGLES_DEG)]
    angles: Vec<f64>,
    /// Left endpoint `x,y`.
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    start: Option<(f64, f64)>,
    /// Right endpoint `x,y`.
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    end: Option<(f64, f64)>,
    #[arg(long, default_value_t = DEFAULT_MATCH_TOL)]
    match_tol: f64,
    #[arg(long, value_enum, default_value_t = Search::RollingBall)]
    search: Search,
    /// Fail when a critical line passes through no recovered point.
    #[arg(long)]
    strict: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct ReconstructSmoothArgs {
    /// Sampled function file.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_TAU)]
    tau: f64,
    #[arg(long, default_value_t = DEFAULT_STEEP_DEG)]
    steep_deg: f64,
    #[arg(long, default_value_t = DEFAULT_SHALLOW_DEG)]
    shallow_deg: f64,
    /// Fail when minima and maxima do not alternate.
    #[arg(long)]
    strict: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct ReconstructLandscapesArgs {
    /// Function file; piecewise-linear input is sampled at `--samples-per-unit`.
    #[arg(long = "in")]
    input: PathBuf,
    /// Landscape file; computed from the vertical diagram when omitted.
    #[arg(long)]
    in_landscapes: Option<PathBuf>,
    /// 1-based levels to decode; all when omitted.
    #[arg(long, value_delimiter = ',')]
    levels: Option<Vec<usize>>,
    #[arg(long, default_value_t = 1e5)]
    samples_per_unit: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_values_t = TABLE_SIZES)]
    sizes: Vec<usize>,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_REPETITIONS)]
    repetitions: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Output of a reconstruct command.
    #[arg(long = "in")]
    input: PathBuf,
    /// Ground-truth sidecar written by `gen`.
    #[arg(long)]
    truth: PathBuf,
    /// Largest accepted x distance.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_pair(s: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected two comma-separated numbers, got `{s}`"))?;
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
    Ok((num(a)?, num(b)?))
}

fn point(v: Option<(f64, f64)>) -> Option<Point2> {
    v.map(|(x, y)| Point2::new(x, y))
}

fn angles3(v: &[f64]) -> Result<[Angle; 3]> {
    let a: Vec<Angle> = v.iter().map(|&d| Angle::from_degrees(d)).collect::<phtrecon::Result<_>>()?;
    a.try_into().map_err(|_| anyhow!("--angles takes exactly three values"))
}

fn truth_path(out: &std::path::Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.truth.json"))
}

fn xy_columns(points: impl IntoIterator<Item = (f64, f64)>) -> String {
    points.into_iter().map(|(x, y)| format!("{x} {y}\n")).collect()
}

fn gen(a: GenArgs) -> Result<()> {
    let domain = a.domain;
    let truth: GroundTruth;
    let plot: String;
    match a.family {
        Family::Pl => {
            let (f, t) = gen_pl(a.n, a.seed, domain)?;
            write_json(Some(&a.out), &f)?;
            plot = xy_columns(f.vertices().iter().map(|p| (p.x, p.y)));
            truth = t;
        }
        Family::Harmonic | Family::Spline => {
            let case = if matches!(a.family, Family::Harmonic) {
                gen_harmonic(a.seed, domain, HARMONIC_TARGET, a.samples_per_unit)?
            } else {
                gen_spline(a.seed, domain, a.knots, a.samples_per_unit)?
            };
            write_json(Some(&a.out), &case.samples)?;
            plot = xy_columns(case.samples.xs().iter().copied().zip(case.samples.ys().iter().copied()));
            truth = case.truth;
        }
    }
    write_json(Some(&truth_path(&a.out)), &truth)?;
    if let Some(p) = &a.emit_plot_data {
        write_text(Some(p), &plot)?;
    }
    Ok(())
}

fn diagram(a: DiagramArgs) -> Result<()> {
    let f: FunctionInput = read_json(&a.input)?;
    let d = sublevel_diagram(&f.vertices(), Angle::from_degrees(a.angle_deg)?);
    write_json(a.output.out.as_ref(), &d)?;
    if let Some(p) = &a.output.emit_plot_data {
        let rows = d.points().iter().map(|q| (q.birth, q.death.finite().unwrap_or(f64::INFINITY)));
        write_text(Some(p), &xy_columns(rows))?;
    }
    Ok(())
}

fn landscape(a: LandscapeArgs) -> Result<()> {
    let d: Diagram = read_json(&a.input)?;
    let cap = a.cap.unwrap_or_else(|| d.finite_pairs().map(|(_, death)| death).fold(d.essential_birth(), f64::max));
    if cap < d.essential_birth() {
        bail!("--cap {cap} is below the essential birth {}", d.essential_birth());
    }
    let levels = a.levels.unwrap_or(d.points().len());
    let ls = landscapes(&d, levels, cap);
    write_json(a.output.out.as_ref(), &LandscapeFile { landscapes: ls.clone() })?;
    if let Some(p) = &a.output.emit_plot_data {
        let text: Vec<String> = ls.iter().map(|l| xy_columns(l.vertices.iter().copied())).collect();
        write_text(Some(p), &text.join("\n"))?;
    }
    Ok(())
}

/// `Ok(false)` when `--strict` rejects the result.
fn reconstruct_pl(a: ReconstructPlArgs) -> Result<bool> {
    let [t0, t1, t2] = angles3(&a.angles)?;
    let (cfg, (t, s, r)) = if let Some(path) = &a.input {
        let f = read_json::<FunctionInput>(path)?.into_pl()?;
        let start = point(a.start).unwrap_or(f.start());
        let end = point(a.end).unwrap_or(f.end());
        let cfg = TripleConfig::new(t0, t1, t2, start, end, a.match_tol)?;
        let sets = line_sets(&f, &cfg);
        (cfg, sets)
    } else {
        let (Some(pt), Some(ps), Some(pr)) = (&a.in_t, &a.in_s, &a.in_r) else {
            bail!("give either --in or all of --in-t, --in-s, --in-r");
        };
        let start = point(a.start).context("--start is required with diagram input")?;
        let end = point(a.end).context("--end is required with diagram input")?;
        let cfg = TripleConfig::new(t0, t1, t2, start, end, a.match_tol)?;
        let (dt, ds, dr): (Diagram, Diagram, Diagram) = (read_json(pt)?, read_json(ps)?, read_json(pr)?);
        let sets = line_sets_from_diagrams(&dt, &ds, &dr, &cfg)?;
        (cfg, sets)
    };
    let rec = match a.search {
        Search::RollingBall => rolling_ball_reconstruct(&t, &s, &r, &cfg),
        Search::Naive => naive_reconstruct(&t, &s, &r, &cfg),
    };
    for w in &rec.warnings {
        eprintln!("warning: {}", serde_json::to_string(w)?);
    }
    write_json(a.output.out.as_ref(), &ReconstructedFunction::from(&rec))?;
    if let Some(p) = &a.output.emit_plot_data {
        write_text(Some(p), &xy_columns(rec.points.iter().map(|p| (p.x, p.y))))?;
    }
    Ok(!(a.strict && !rec.warnings.is_empty()))
}

fn reconstruct_smooth(a: ReconstructSmoothArgs) -> Result<bool> {
    let f: SampledFunction = read_json(&a.input)?;
    let cfg = SmoothConfig::new(a.tau, a.steep_deg, a.shallow_deg)?;
    let rec = five_line_reconstruct(&f, &cfg)?;
    if !rec.alternation_ok {
        eprintln!("warning: minima and maxima do not alternate");
    }
    write_json(a.output.out.as_ref(), &rec)?;
    if let Some(p) = &a.output.emit_plot_data {
        write_text(Some(p), &xy_columns(rec.critical_points.iter().map(|c| (c.x, c.y))))?;
    }
    Ok(!(a.strict && !rec.alternation_ok))
}

fn reconstruct_landscapes(a: ReconstructLandscapesArgs) -> Result<()> {
    let f = read_json::<FunctionInput>(&a.input)?.into_samples(a.samples_per_unit)?;
    let ls: Vec<Landscape> = match &a.in_landscapes {
        Some(p) => read_json::<LandscapeFile>(p)?.landscapes,
        None => {
            let d = sublevel_diagram(&f.points(), Angle::VERTICAL);
            landscapes(&d, d.points().len(), f.max_value())
        }
    };
    let selected: Vec<Landscape> = match &a.levels {
        None => ls,
        Some(levels) => {
            for &k in levels {
                if k == 0 || !ls.iter().any(|l| l.level == k) {
                    bail!("level {k} is not available");
                }
            }
            ls.into_iter().filter(|l| levels.contains(&l.level)).collect()
        }
    };
    let pts = reconstruct_from_landscapes(&selected, &f)?;
    write_json(a.output.out.as_ref(), &PointsFile { critical_points: pts.clone() })?;
    if let Some(p) = &a.output.emit_plot_data {
        write_text(Some(p), &xy_columns(pts.iter().map(|c| (c.x, c.y))))?;
    }
    Ok(())
}

fn bench(a: BenchArgs) -> Result<()> {
    let res = run_bench(&a.sizes, a.seed, a.repetitions)?;
    write_text(a.out.as_ref(), &to_csv(&res, a.repetitions))
}

#[derive(serde::Serialize)]
struct VerifyReport {
    expected: usize,
    matched: usize,
    missed: usize,
    extra: usize,
    max_error: f64,
    ok: bool,
}

fn verify(a: VerifyArgs) -> Result<bool> {
    let truth: GroundTruth = read_json(&a.truth)?;
    let found: Vec<Point2> = match read_json::<serde_json::Value>(&a.input)? {
        v if v.get("vertices").is_some() => {
            let r: ReconstructedFunction = serde_json::from_value(v)?;
            let pts: Vec<Point2> = r.vertices.iter().map(|p| Point2::new(p[0], p[1])).collect();
            // Drop the supplied endpoints.
            pts.get(1..pts.len().saturating_sub(1)).unwrap_or_default().to_vec()
        }
        v if v.get("critical_points").is_some() => serde_json::from_value::<PointsFile>(v)?
            .critical_points
            .into_iter()
            .filter(|c| c.kind != CriticalKind::Endpoint)
            .map(|c| c.point())
            .collect(),
        _ => bail!("{} is not a reconstruction file", a.input.display()),
    };
    let mut used = vec![false; found.len()];
    let mut matched = 0;
    let mut max_error: f64 = 0.0;
    for c in &truth.critical_points {
        let best = found
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, p)| (i, (p.x - c.x).abs()))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        if let Some((i, d)) = best.filter(|&(_, d)| d < a.tol) {
            used[i] = true;
            matched += 1;
            max_error = max_error.max(d);
        }
    }
    let expected = truth.critical_points.len();
    let report = VerifyReport {
        expected,
        matched,
        missed: expected - matched,
        extra: found.len() - matched,
        max_error,
        ok: matched == expected && found.len() == expected,
    };
    write_json(a.out.as_ref(), &report)?;
    Ok(report.ok)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Gen(a) => gen(a).map(|_| true),
        Command::Diagram(a) => diagram(a).map(|_| true),
        Command::Landscape(a) => landscape(a).map(|_| true),
        Command::ReconstructPl(a) => reconstruct_pl(a),
        Command::ReconstructSmooth(a) => reconstruct_smooth(a),
        Command::ReconstructLandscapes(a) => reconstruct_landscapes(a).map(|_| true),
        Command::Bench(a) => bench(a).map(|_| true),
        Command::Verify(a) => verify(a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
