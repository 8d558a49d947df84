//! `wavefront`: command-line experiments with geodesic wave fronts.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use wavefront_core::frontier::init_front;
use wavefront_core::io::{parse_snapshot, render_svg, series_csv, snapshot_bytes, SvgOptions};
use wavefront_core::lattice::{lattice_count, theorem1_rectangle_check};
use wavefront_core::metrics::{density_report, estimate_tau, length_growth_curve};
use wavefront_core::{ArcInterval, Error, Front, PropagationParams, SurfaceModel, SurfacePoint};

#[derive(Parser)]
#[command(name = "wavefront", version, about = "Geodesic wave fronts on flat surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Propagate a front and write its JSON snapshot.
    Simulate {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        t: f64,
        /// Direction interval `LO,HI` in radians (default: full circle).
        #[arg(long, value_parser = parse_arc, allow_hyphen_values = true)]
        arc: Option<ArcInterval>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Density reports over a time grid, as CSV.
    Density {
        #[command(flatten)]
        src: Source,
        #[arg(long, value_parser = parse_grid)]
        t_grid: TimeGrid,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate the density time for balls of radius R.
    Tau {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        r: f64,
        #[arg(long)]
        t_max: f64,
        #[arg(long)]
        dt: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Front length over a time grid, with the fitted slope.
    Length {
        #[command(flatten)]
        src: Source,
        #[arg(long, value_parser = parse_grid)]
        t_grid: TimeGrid,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Component counts over a time grid, or of a stored snapshot.
    Components {
        #[arg(long, conflicts_with_all = ["surface", "p", "t_grid"])]
        r#in: Option<PathBuf>,
        #[arg(long, required_unless_present = "in")]
        surface: Option<String>,
        #[arg(long, required_unless_present = "in")]
        p: Option<String>,
        #[arg(long, value_parser = parse_grid, required_unless_present = "in")]
        t_grid: Option<TimeGrid>,
        #[arg(long)]
        hmax: Option<f64>,
        #[arg(long, default_value_t = 1024)]
        n0: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lattice-point counts in discs and annuli.
    Lattice {
        #[arg(long, value_parser = parse_grid)]
        t_grid: TimeGrid,
        /// Shell width (default: 1/sqrt(t) per row).
        #[arg(long)]
        h: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the rectangle argument at every grid time; exit 4 on failure.
    #[command(name = "verify-theorem1")]
    VerifyTheorem1 {
        #[arg(long, value_parser = parse_grid)]
        t_grid: TimeGrid,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a snapshot to SVG.
    Render {
        #[arg(long)]
        r#in: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1600)]
        width: u32,
        /// Draw every component in the same colour.
        #[arg(long)]
        mono: bool,
    },
}

#[derive(Args)]
struct Source {
    /// `torus:A,B`, `klein`, `rect:A,B`, `disk:R` or `cube:S`.
    #[arg(long)]
    surface: String,
    /// `x,y`, or `FACE/u/v` on the cube.
    #[arg(long, allow_hyphen_values = true)]
    p: String,
    #[arg(long)]
    hmax: Option<f64>,
    #[arg(long, default_value_t = 1024)]
    n0: usize,
}

#[derive(Clone, Debug)]
struct TimeGrid {
    spec: String,
    times: Vec<f64>,
}

fn parse_grid(s: &str) -> Result<TimeGrid, String> {
    let num = |v: &str| v.trim().parse::<f64>().map_err(|_| format!("`{v}` is not a number"));
    let parts: Vec<&str> = s.split(':').collect();
    let times = match parts.as_slice() {
        [list] => {
            let times = list.split(',').map(num).collect::<Result<Vec<_>, _>>()?;
            if times.windows(2).any(|w| w[0] >= w[1]) {
                return Err(format!("times must be increasing in `{s}`"));
            }
            times
        }
        [lo, hi, step] => {
            let (lo, hi, step) = (num(lo)?, num(hi)?, num(step)?);
            if !(lo.is_finite() && hi.is_finite() && step.is_finite() && step > 0.0 && lo <= hi) {
                return Err(format!("bad time grid `{s}`: need LO <= HI and STEP > 0"));
            }
            let n = ((hi - lo) / step + 1e-9).floor() as usize;
            (0..=n).map(|k| lo + k as f64 * step).collect()
        }
        _ => return Err(format!("time grid must be LO:HI:STEP or T1,T2,..., got `{s}`")),
    };
    if times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(format!("times must be finite and >= 0 in `{s}`"));
    }
    Ok(TimeGrid {
        spec: s.to_string(),
        times,
    })
}

fn parse_arc(s: &str) -> Result<ArcInterval, String> {
    let (lo, hi) = s.split_once(',').ok_or_else(|| format!("arc must be LO,HI, got `{s}`"))?;
    let lo: f64 = lo.trim().parse().map_err(|_| format!("`{lo}` is not a number"))?;
    let hi: f64 = hi.trim().parse().map_err(|_| format!("`{hi}` is not a number"))?;
    ArcInterval::new(lo, hi).map_err(|e| e.to_string())
}

enum Failure {
    Core(Error),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Core(Error::Io(e))
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Core(Error::Precondition(_)) => 1,
            Failure::Core(Error::Numerical(_)) => 2,
            Failure::Core(Error::Io(_) | Error::Parse { .. }) => 3,
            Failure::Verification(_) => 4,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Core(Error::Precondition(_)) => "invalid-argument",
            Failure::Core(Error::Numerical(_)) => "numerical",
            Failure::Core(Error::Io(_)) => "io",
            Failure::Core(Error::Parse { .. }) => "parse",
            Failure::Verification(_) => "verification",
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Core(e) => e.to_string(),
            Failure::Verification(m) => m.clone(),
        }
    }
}

type Outcome = Result<(), Failure>;

struct Setup {
    surface: SurfaceModel,
    source: SurfacePoint,
    params: PropagationParams,
    n0: usize,
}

fn setup(surface: &str, p: &str, hmax: Option<f64>, n0: usize) -> Result<Setup, Error> {
    let surface: SurfaceModel = surface.parse()?;
    let source: SurfacePoint = p.parse()?;
    surface.validate_source(&source)?;
    let mut params = PropagationParams::for_surface(&surface);
    if let Some(h) = hmax {
        params = params.with_h_max(h);
    }
    params.validate(&ArcInterval::full())?;
    Ok(Setup {
        surface,
        source,
        params,
        n0,
    })
}

impl Source {
    fn setup(&self) -> Result<Setup, Error> {
        setup(&self.surface, &self.p, self.hmax, self.n0)
    }
}

/// Parameter comment lines heading every CSV output.
fn header(command: &str, s: Option<&Setup>, extra: &[(&str, String)]) -> String {
    let mut h = format!("# wavefront {command}\n");
    if let Some(s) = s {
        let p = &s.params;
        let _ = writeln!(
            h,
            "# surface={} p={} h_max={} theta_min={} delta_t_check={} sample_budget={} n0={}",
            s.surface, s.source, p.h_max, p.theta_min, p.delta_t_check, p.sample_budget, s.n0
        );
    }
    if !extra.is_empty() {
        let fields: Vec<String> = extra.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(h, "# {}", fields.join(" "));
    }
    h
}

fn write_output(out: Option<&Path>, bytes: &[u8]) -> Outcome {
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            w.write_all(bytes)?;
            w.flush()?;
        }
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(bytes)?;
            so.flush()?;
        }
    }
    Ok(())
}

fn read_snapshot(path: &Path) -> Result<Front, Error> {
    parse_snapshot(BufReader::new(File::open(path)?))
}

fn full_front(s: &Setup) -> Result<Front, Error> {
    init_front(s.surface, s.source, ArcInterval::full(), s.n0, s.params)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Simulate { src, t, arc, out } => {
            let s = src.setup()?;
            if !(t.is_finite() && t >= 0.0) {
                return Err(Error::Precondition(format!("t must be finite and >= 0, got {t}")).into());
            }
            let mut front = init_front(s.surface, s.source, arc.unwrap_or_else(ArcInterval::full), s.n0, s.params)?;
            front.propagate(t)?;
            write_output(out.as_deref(), &snapshot_bytes(&front))
        }
        Command::Density { src, t_grid, eps, out } => {
            let s = src.setup()?;
            let mut front = full_front(&s)?;
            let mut rows = Vec::with_capacity(t_grid.times.len());
            for &t in &t_grid.times {
                front.propagate(t)?;
                rows.push(density_report(&front, eps)?);
            }
            let mut text = header("density", Some(&s), &[("t_grid", t_grid.spec.clone()), ("eps", eps.to_string())]);
            text.push_str(&series_csv(&rows));
            write_output(out.as_deref(), text.as_bytes())
        }
        Command::Tau { src, r, t_max, dt, out } => {
            let s = src.setup()?;
            let est = estimate_tau(s.surface, s.source, r, t_max, dt, s.params, s.n0)?;
            let opt = |v: Option<f64>| v.map_or_else(|| "none".to_string(), |x| x.to_string());
            let mut text = header("tau", Some(&s), &[]);
            text.push_str("r,tau,t_max,delta_t,first_full_cover_time,checkpoints\n");
            let _ = writeln!(
                text,
                "{},{},{},{},{},{}",
                est.r,
                opt(est.tau),
                est.t_max,
                est.delta_t,
                opt(est.first_full_cover_time),
                est.checkpoints
            );
            match est.tau {
                Some(tau) => eprintln!("tau(r={r}) = {tau} (persistence checked every {dt} up to {t_max})"),
                None => eprintln!("tau(r={r}) not achieved by t_max={t_max}"),
            }
            write_output(out.as_deref(), text.as_bytes())
        }
        Command::Length { src, t_grid, out } => {
            let s = src.setup()?;
            let curve = length_growth_curve(s.surface, s.source, &t_grid.times, s.params, s.n0)?;
            let mut text = header(
                "length",
                Some(&s),
                &[("t_grid", t_grid.spec.clone()), ("slope", curve.slope.to_string())],
            );
            text.push_str("t,length\n");
            for (t, l) in &curve.points {
                let _ = writeln!(text, "{t},{l}");
            }
            eprintln!("fitted slope over t >= median: {}", curve.slope);
            write_output(out.as_deref(), text.as_bytes())
        }
        Command::Components {
            r#in,
            surface,
            p,
            t_grid,
            hmax,
            n0,
            out,
        } => {
            let line = |f: &Front| {
                let lengths: Vec<String> = f.component_lengths().iter().map(f64::to_string).collect();
                format!("{},{},{},{}\n", f.t, f.component_count(), f.dead.len(), lengths.join(";"))
            };
            let cols = "t,components,dead_directions,component_lengths\n";
            let text = if let Some(path) = r#in {
                let f = read_snapshot(&path)?;
                let mut text = header("components", None, &[("in", path.display().to_string())]);
                text.push_str(cols);
                text.push_str(&line(&f));
                text
            } else {
                let (surface, p, grid) = (surface.unwrap_or_default(), p.unwrap_or_default(), t_grid.unwrap());
                let s = setup(&surface, &p, hmax, n0)?;
                let mut front = full_front(&s)?;
                let mut text = header("components", Some(&s), &[("t_grid", grid.spec.clone())]);
                text.push_str(cols);
                for &t in &grid.times {
                    front.propagate(t)?;
                    text.push_str(&line(&front));
                }
                text
            };
            write_output(out.as_deref(), text.as_bytes())
        }
        Command::Lattice { t_grid, h, out } => {
            let rows = t_grid
                .times
                .iter()
                .map(|&t| lattice_count(t, h.unwrap_or_else(|| 1.0 / t.sqrt())))
                .collect::<Result<Vec<_>, Error>>()?;
            let h_note = h.map_or_else(|| "1/sqrt(t)".to_string(), |h| h.to_string());
            let mut text = header("lattice", None, &[("t_grid", t_grid.spec.clone()), ("h", h_note)]);
            text.push_str(&series_csv(&rows));
            write_output(out.as_deref(), text.as_bytes())
        }
        Command::VerifyTheorem1 { t_grid, out } => {
            let reports = t_grid
                .times
                .iter()
                .map(|&t| theorem1_rectangle_check(t))
                .collect::<Result<Vec<_>, Error>>()?;
            let mut text = header("verify-theorem1", None, &[("t_grid", t_grid.spec.clone())]);
            text.push_str("t,a,b,height,slope_max,increment_max,projected_covering_radius,bound,passed\n");
            for r in &reports {
                let _ = writeln!(
                    text,
                    "{},{},{},{},{},{},{},{},{}",
                    r.t, r.a, r.b, r.height, r.slope_max, r.increment_max, r.projected_covering_radius, r.bound, r.passed
                );
            }
            write_output(out.as_deref(), text.as_bytes())?;
            let failed: Vec<String> = reports.iter().filter(|r| !r.passed).map(|r| r.t.to_string()).collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(Failure::Verification(format!("rectangle check failed at t = {}", failed.join(", "))))
            }
        }
        Command::Render { r#in, out, width, mono } => {
            let front = read_snapshot(&r#in)?;
            let svg = render_svg(
                &front,
                &SvgOptions {
                    width_px: width,
                    color_by_component: !mono,
                },
            );
            write_output(Some(&out), svg.as_bytes())
        }
    }
}

fn configure_threads() -> Result<(), Error> {
    let Ok(v) = std::env::var("WAVEFRONT_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Precondition(format!("WAVEFRONT_THREADS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Precondition(format!("cannot configure {n} threads: {e}")))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = configure_threads().map_err(Failure::from).and_then(|()| run(cli));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        // Reader went away (e.g. `| head`); nothing left to report.
        Err(Failure::Core(Error::Io(e))) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(f) => {
            let msg = f.message().replace('\n', " ");
            eprintln!("wavefront: error[{}]: {msg}", f.kind());
            ExitCode::from(f.code())
        }
    }
}
