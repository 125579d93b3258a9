//! Command-line front end: argument parsing, run configuration, the five
//! subcommands and their CSV/JSON writers.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::contour::{
    action_variable, auto_contour, nodes_and_antinodes, ActionResult, Contour, ContourChoice,
    NodeReport,
};
use crate::error::{QhjError, Result};
use crate::systems::{
    ho_momentum, ho_spectrum, hydrogen_p_phi, hydrogen_p_rho, hydrogen_p_x, hydrogen_spectrum,
    Coordinate, HOQuantumNumbers, HydrogenQuantumNumbers, MomentumFunction, Spectrum,
    SystemQuantumNumbers,
};
use crate::verify::{run_verification, VerificationReport, VerifyOptions, DEFAULT_SEED};

pub const EXIT_SUCCESS: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NON_CONVERGENCE: i32 = 2;
pub const EXIT_VERIFICATION_FAILED: i32 = 3;

const DEFAULT_HO_NMAX: u32 = 10;
const DEFAULT_HYDROGEN_NMAX: u32 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemKind {
    Ho,
    Hydrogen,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Hydrogen coordinate selected for `momentum`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HydrogenCoord {
    Phi,
    Theta,
    Radial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "qhj", version, about = "Quantum Hamilton-Jacobi momentum functions and action variables")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub args: RunArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Energy, action and angle variables for one state.
    Spectrum,
    /// Momentum function and wave function on a grid.
    Momentum,
    /// Contour-integrated action variables.
    Action,
    /// Nodes and anti-nodes per coordinate.
    Nodes,
    /// Run the invariant suites over a range of quantum numbers.
    Verify,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[arg(long, global = true, value_enum)]
    pub system: Option<SystemKind>,
    /// Oscillator `nx,ny,nz` (a single value means `n,0,0`) or hydrogen principal number.
    #[arg(long, global = true)]
    pub n: Option<String>,
    #[arg(long, global = true, default_value_t = 0)]
    pub ell: u32,
    #[arg(long, global = true, default_value_t = 0, allow_hyphen_values = true)]
    pub m: i32,
    /// Oscillator frequencies `wx,wy,wz`.
    #[arg(long, global = true)]
    pub omega: Option<String>,
    #[arg(long, global = true, value_enum, default_value = "radial")]
    pub coord: HydrogenCoord,
    #[arg(long, global = true, value_enum, default_value = "x")]
    pub axis: Axis,
    /// `start:end:points`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub grid: Option<String>,
    #[arg(long, global = true, value_enum, default_value = "csv")]
    pub format: OutputFormat,
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,
    /// `cx,cy,rx,ry`: ellipse centre and semi-axes.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub contour: Option<String>,
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    #[arg(long = "kappa-shift", global = true, default_value_t = 0.0, allow_hyphen_values = true)]
    pub kappa_shift: f64,
    /// Largest principal/oscillator quantum number swept by `verify`.
    #[arg(long, global = true)]
    pub nmax: Option<u32>,
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub start: f64,
    pub end: f64,
    pub points: usize,
}

impl Grid {
    pub fn new(start: f64, end: f64, points: usize) -> Result<Self> {
        if points < 2 {
            return Err(QhjError::InvalidConfig(format!(
                "grid needs at least 2 points, got {points}"
            )));
        }
        if !(start.is_finite() && end.is_finite() && start < end) {
            return Err(QhjError::InvalidConfig(format!(
                "grid start must be below end, got {start}:{end}"
            )));
        }
        Ok(Grid { start, end, points })
    }

    pub fn spacing(&self) -> f64 {
        (self.end - self.start) / (self.points - 1) as f64
    }

    pub fn values(&self) -> Vec<f64> {
        let h = self.spacing();
        (0..self.points)
            .map(|k| {
                if k + 1 == self.points {
                    self.end
                } else {
                    self.start + h * k as f64
                }
            })
            .collect()
    }
}

impl FromStr for Grid {
    type Err = QhjError;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || QhjError::InvalidConfig(format!("grid must be start:end:points, got {s:?}"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let start = parts[0].trim().parse().map_err(|_| bad())?;
        let end = parts[1].trim().parse().map_err(|_| bad())?;
        let points = parts[2].trim().parse().map_err(|_| bad())?;
        Grid::new(start, end, points)
    }
}

fn parse_list<T: FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|v| {
            v.trim()
                .parse()
                .map_err(|_| QhjError::InvalidConfig(format!("cannot parse {what} from {s:?}")))
        })
        .collect()
}

fn parse_contour(s: &str, samples: Option<usize>) -> Result<Contour> {
    let v: Vec<f64> = parse_list(s, "contour")?;
    if v.len() != 4 {
        return Err(QhjError::InvalidConfig(format!(
            "contour must be cx,cy,rx,ry, got {s:?}"
        )));
    }
    let c = Contour::ellipse(Complex64::new(v[0], v[1]), v[2], v[3])?;
    match samples {
        Some(n) => c.with_samples(n),
        None => Ok(c),
    }
}

/// Validated settings shared by every subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub system: SystemKind,
    pub quantum: SystemQuantumNumbers,
    pub coord: HydrogenCoord,
    pub axis: Axis,
    pub grid: Option<Grid>,
    pub format: OutputFormat,
    pub tolerance: f64,
    pub contour: Option<Contour>,
    pub samples: Option<usize>,
    pub kappa_shift: f64,
    /// Systems swept by `verify` with their largest quantum number.
    pub verify_ho_nmax: Option<u32>,
    pub verify_hydrogen_nmax: Option<u32>,
}

impl RunConfig {
    pub fn from_args(args: &RunArgs) -> Result<Self> {
        let system = args.system.unwrap_or(SystemKind::Ho);
        let quantum = match system {
            SystemKind::Ho => {
                let n = match &args.n {
                    None => [0; 3],
                    Some(s) => match parse_list::<u32>(s, "n")?.as_slice() {
                        [a] => [*a, 0, 0],
                        [a, b, c] => [*a, *b, *c],
                        _ => {
                            return Err(QhjError::InvalidConfig(format!(
                                "oscillator --n takes 1 or 3 values, got {s:?}"
                            )))
                        }
                    },
                };
                let mut q = HOQuantumNumbers::new(n);
                if let Some(s) = &args.omega {
                    match parse_list::<f64>(s, "omega")?.as_slice() {
                        [a, b, c] => q = q.with_omega([*a, *b, *c])?,
                        _ => {
                            return Err(QhjError::InvalidConfig(format!(
                                "--omega takes 3 values, got {s:?}"
                            )))
                        }
                    }
                }
                SystemQuantumNumbers::Oscillator(q)
            }
            SystemKind::Hydrogen => {
                let n = match &args.n {
                    None => 1,
                    Some(s) => s.trim().parse().map_err(|_| {
                        QhjError::InvalidConfig(format!("hydrogen --n takes one integer, got {s:?}"))
                    })?,
                };
                SystemQuantumNumbers::Hydrogen(HydrogenQuantumNumbers::new(n, args.ell, args.m)?)
            }
        };
        if !(args.tol.is_finite() && args.tol > 0.0) {
            return Err(QhjError::InvalidConfig(format!(
                "--tol must be positive, got {}",
                args.tol
            )));
        }
        if !args.kappa_shift.is_finite() {
            return Err(QhjError::InvalidConfig("--kappa-shift must be finite".into()));
        }
        let grid = args.grid.as_deref().map(Grid::from_str).transpose()?;
        let contour = args
            .contour
            .as_deref()
            .map(|s| parse_contour(s, args.samples))
            .transpose()?;
        if let Some(s) = args.samples {
            Contour::ellipse(Complex64::new(0.0, 0.0), 1.0, 1.0)?.with_samples(s)?;
        }
        let (verify_ho_nmax, verify_hydrogen_nmax) = match args.system {
            None => (
                Some(args.nmax.unwrap_or(DEFAULT_HO_NMAX)),
                Some(args.nmax.unwrap_or(DEFAULT_HYDROGEN_NMAX)),
            ),
            Some(SystemKind::Ho) => (Some(args.nmax.unwrap_or(DEFAULT_HO_NMAX)), None),
            Some(SystemKind::Hydrogen) => (None, Some(args.nmax.unwrap_or(DEFAULT_HYDROGEN_NMAX))),
        };
        let config = RunConfig {
            system,
            quantum,
            coord: args.coord,
            axis: args.axis,
            grid,
            format: args.format,
            tolerance: args.tol,
            contour,
            samples: args.samples,
            kappa_shift: args.kappa_shift,
            verify_ho_nmax,
            verify_hydrogen_nmax,
        };
        if let Some(g) = config.grid {
            check_grid_domain(&config.selected_momentum()?, &g)?;
        }
        Ok(config)
    }

    /// Momentum function picked by `--axis` or `--coord`.
    pub fn selected_momentum(&self) -> Result<MomentumFunction> {
        match self.quantum {
            SystemQuantumNumbers::Oscillator(q) => ho_momentum(q.n[self.axis.index()]),
            SystemQuantumNumbers::Hydrogen(q) => match self.coord {
                HydrogenCoord::Phi => Ok(hydrogen_p_phi(q.m)),
                HydrogenCoord::Theta => hydrogen_p_x(q.ell, q.m),
                HydrogenCoord::Radial => hydrogen_p_rho(q.n, q.ell),
            },
        }
    }

    /// One momentum function per separated coordinate.
    pub fn all_momenta(&self) -> Result<Vec<MomentumFunction>> {
        match self.quantum {
            SystemQuantumNumbers::Oscillator(q) => q.n.iter().map(|&n| ho_momentum(n)).collect(),
            SystemQuantumNumbers::Hydrogen(q) => Ok(vec![
                hydrogen_p_phi(q.m),
                hydrogen_p_x(q.ell, q.m)?,
                hydrogen_p_rho(q.n, q.ell)?,
            ]),
        }
    }
}

fn check_grid_domain(p: &MomentumFunction, grid: &Grid) -> Result<()> {
    let (lo, hi) = p.domain();
    let inside = |x: f64| match p.coordinate() {
        // phi is periodic; the closed end 2pi is allowed
        Coordinate::Phi => x.is_finite(),
        _ => x > lo && x < hi,
    };
    for x in [grid.start, grid.end] {
        if !inside(x) {
            return Err(QhjError::OutsideDomain { point: x, lo, hi });
        }
    }
    Ok(())
}

pub fn default_grid(p: &MomentumFunction) -> Grid {
    let (start, end, points) = match p.coordinate() {
        Coordinate::Xi => {
            let (a, b) = p.sampling_range();
            (a, b, 801)
        }
        Coordinate::X => (-0.99, 0.99, 199),
        Coordinate::Rho => (0.05, p.sampling_range().1 + 2.0, 801),
        Coordinate::Phi => (0.0, 2.0 * std::f64::consts::PI, 361),
    };
    Grid { start, end, points }
}

pub fn cmd_spectrum(config: &RunConfig) -> Spectrum {
    match &config.quantum {
        SystemQuantumNumbers::Oscillator(q) => ho_spectrum(q),
        SystemQuantumNumbers::Hydrogen(q) => hydrogen_spectrum(q),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FigureRow {
    pub q: f64,
    pub re_p: Option<f64>,
    pub im_p: Option<f64>,
    /// Wave function scaled to unit maximum modulus on the grid.
    pub u: f64,
    pub is_near_pole: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FigureData {
    pub system: SystemKind,
    pub quantum_numbers: SystemQuantumNumbers,
    pub coordinate: Coordinate,
    pub units: &'static str,
    pub grid: Grid,
    pub rows: Vec<FigureRow>,
}

impl FigureData {
    /// Index ranges `[start, end]` of consecutive masked rows.
    pub fn masked_clusters(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for (k, row) in self.rows.iter().enumerate() {
            if !row.is_near_pole {
                continue;
            }
            match out.last_mut() {
                Some(last) if last.1 + 1 == k => last.1 = k,
                _ => out.push((k, k)),
            }
        }
        out
    }
}

pub fn cmd_momentum(config: &RunConfig) -> Result<FigureData> {
    let p = config.selected_momentum()?;
    let grid = config.grid.unwrap_or_else(|| default_grid(&p));
    check_grid_domain(&p, &grid)?;
    let spacing = grid.spacing();
    let nodes = p.node_locations();
    let u = p.wave_function();
    let xs = grid.values();
    let us: Vec<f64> = xs.iter().map(|&x| u.value(x).re).collect();
    let scale = us.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let rows = xs
        .iter()
        .zip(&us)
        .map(|(&x, &ux)| {
            let near = nodes.iter().any(|&r| (x - r).abs() < spacing);
            let value = (!near).then(|| p.evaluate(Complex64::new(x, 0.0)));
            FigureRow {
                q: x,
                re_p: value.map(|v| v.re),
                im_p: value.map(|v| v.im),
                u: if scale > 0.0 { ux / scale } else { ux },
                is_near_pole: near,
            }
        })
        .collect();
    Ok(FigureData {
        system: config.system,
        quantum_numbers: config.quantum,
        coordinate: p.coordinate(),
        units: "hbar=1",
        grid,
        rows,
    })
}

pub fn cmd_action(config: &RunConfig) -> Result<Vec<ActionResult>> {
    config
        .all_momenta()?
        .iter()
        .map(|p| {
            let choice = match (config.contour, config.samples) {
                (Some(c), _) => ContourChoice::Explicit(c),
                (None, Some(s)) => ContourChoice::Explicit(auto_contour(p).with_samples(s)?),
                (None, None) => ContourChoice::Auto,
            };
            action_variable(p, choice, config.tolerance)
        })
        .collect()
}

pub fn cmd_nodes(config: &RunConfig) -> Result<Vec<NodeReport>> {
    config.all_momenta()?.iter().map(nodes_and_antinodes).collect()
}

pub fn cmd_verify(config: &RunConfig) -> Result<VerificationReport> {
    run_verification(&VerifyOptions {
        ho_nmax: config.verify_ho_nmax,
        hydrogen_nmax: config.verify_hydrogen_nmax,
        kappa_shift: config.kappa_shift,
        tolerance: config.tolerance,
        seed: DEFAULT_SEED,
    })
}

fn csv_error(e: csv::Error) -> io::Error {
    io::Error::other(e)
}

fn write_json<W: Write + ?Sized, T: Serialize>(w: &mut W, value: &T) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    writeln!(w)
}

pub fn write_spectrum<W: Write>(w: &mut W, s: &Spectrum, format: OutputFormat) -> io::Result<()> {
    match format {
        OutputFormat::Json => write_json(w, s),
        OutputFormat::Csv => {
            let mut out = csv::Writer::from_writer(w);
            out.write_record(["name", "value"]).map_err(csv_error)?;
            out.write_record(["E", &s.energy.to_string()]).map_err(csv_error)?;
            for v in s.action_values.iter().chain(&s.angle_values) {
                out.write_record([v.name.as_str(), &v.value.to_string()])
                    .map_err(csv_error)?;
            }
            out.flush()
        }
    }
}

pub fn write_figure<W: Write>(w: &mut W, data: &FigureData, format: OutputFormat) -> io::Result<()> {
    match format {
        OutputFormat::Json => write_json(w, data),
        OutputFormat::Csv => {
            let mut out = csv::Writer::from_writer(w);
            for row in &data.rows {
                out.serialize(row).map_err(csv_error)?;
            }
            out.flush()
        }
    }
}

pub fn write_actions<W: Write>(w: &mut W, results: &[ActionResult], format: OutputFormat) -> io::Result<()> {
    match format {
        OutputFormat::Json => write_json(w, &results),
        OutputFormat::Csv => {
            let mut out = csv::Writer::from_writer(w);
            out.write_record([
                "coordinate",
                "j_re",
                "j_im",
                "target",
                "deviation",
                "samples_used",
                "converged",
            ])
            .map_err(csv_error)?;
            for r in results {
                out.write_record([
                    r.coordinate.name().to_owned(),
                    r.j_over_hbar.re.to_string(),
                    r.j_over_hbar.im.to_string(),
                    r.target.to_string(),
                    r.deviation.to_string(),
                    r.samples_used.to_string(),
                    r.converged.to_string(),
                ])
                .map_err(csv_error)?;
            }
            out.flush()
        }
    }
}

fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn write_nodes<W: Write>(w: &mut W, reports: &[NodeReport], format: OutputFormat) -> io::Result<()> {
    match format {
        OutputFormat::Json => write_json(w, &reports),
        OutputFormat::Csv => {
            let mut out = csv::Writer::from_writer(w);
            out.write_record([
                "coordinate",
                "node_count",
                "antinode_count",
                "expected_node_count",
                "interleaved",
                "consistent",
                "nodes",
                "antinodes",
            ])
            .map_err(csv_error)?;
            for r in reports {
                out.write_record([
                    r.coordinate.name().to_owned(),
                    r.node_count.to_string(),
                    r.antinode_count.to_string(),
                    r.expected_node_count.to_string(),
                    r.interleaved.to_string(),
                    r.is_consistent().to_string(),
                    join(&r.nodes),
                    join(&r.antinodes),
                ])
                .map_err(csv_error)?;
            }
            out.flush()
        }
    }
}

pub fn write_verification<W: Write>(w: &mut W, report: &VerificationReport, format: OutputFormat) -> io::Result<()> {
    match format {
        OutputFormat::Json => write_json(w, report),
        OutputFormat::Csv => {
            let mut out = csv::Writer::from_writer(w);
            for c in &report.checks {
                out.serialize(c).map_err(csv_error)?;
            }
            out.flush()
        }
    }
}

fn exit_code_for(e: &QhjError) -> i32 {
    match e {
        QhjError::NonConvergence { .. }
        | QhjError::EigenNoConvergence
        | QhjError::IllConditionedContour { .. } => EXIT_NON_CONVERGENCE,
        _ => EXIT_USAGE,
    }
}

#[derive(Serialize)]
struct Diagnostic<'a, T: Serialize> {
    error: &'a str,
    details: T,
}

fn report_error(stderr: &mut dyn Write, e: &QhjError) -> i32 {
    let code = exit_code_for(e);
    if code == EXIT_NON_CONVERGENCE {
        let _ = write_json(
            stderr,
            &Diagnostic {
                error: "non_convergence",
                details: e.to_string(),
            },
        );
    } else {
        let _ = writeln!(stderr, "error: {e}");
    }
    code
}

/// Parses `argv`, runs the chosen subcommand and returns the process exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_SUCCESS };
        }
    };
    let config = match RunConfig::from_args(&cli.args) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };

    let mut buffer: Vec<u8> = Vec::new();
    let format = config.format;
    let outcome: Result<i32> = (|| {
        Ok(match cli.command {
            Command::Spectrum => {
                write_spectrum(&mut buffer, &cmd_spectrum(&config), format).map_err(io_error)?;
                EXIT_SUCCESS
            }
            Command::Momentum => {
                write_figure(&mut buffer, &cmd_momentum(&config)?, format).map_err(io_error)?;
                EXIT_SUCCESS
            }
            Command::Action => {
                let results = cmd_action(&config)?;
                write_actions(&mut buffer, &results, format).map_err(io_error)?;
                if results.iter().all(|r| r.converged) {
                    EXIT_SUCCESS
                } else {
                    let failed: Vec<_> = results.iter().filter(|r| !r.converged).collect();
                    let _ = write_json(
                        stderr,
                        &Diagnostic {
                            error: "non_convergence",
                            details: failed,
                        },
                    );
                    EXIT_NON_CONVERGENCE
                }
            }
            Command::Nodes => {
                write_nodes(&mut buffer, &cmd_nodes(&config)?, format).map_err(io_error)?;
                EXIT_SUCCESS
            }
            Command::Verify => {
                let report = cmd_verify(&config)?;
                write_verification(&mut buffer, &report, format).map_err(io_error)?;
                if report.passed {
                    EXIT_SUCCESS
                } else {
                    EXIT_VERIFICATION_FAILED
                }
            }
        })
    })();

    let code = match outcome {
        Ok(code) => code,
        Err(e) => return report_error(stderr, &e),
    };
    let written = match &cli.args.output {
        Some(path) => File::create(path).and_then(|mut f| f.write_all(&buffer)),
        None => stdout.write_all(&buffer),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: cannot write output: {e}");
        return EXIT_USAGE;
    }
    code
}

fn io_error(e: io::Error) -> QhjError {
    QhjError::InvalidConfig(format!("output error: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("qhj").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn grid_parsing() {
        let g: Grid = "-1:1:5".parse().unwrap();
        assert_eq!(g.values(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert!("1:0:5".parse::<Grid>().is_err());
        assert!("0:1:1".parse::<Grid>().is_err());
        assert!("0:1".parse::<Grid>().is_err());
    }

    #[test]
    fn spectrum_csv() {
        let (code, out, _) = run_capture(&["spectrum", "--system", "ho", "--n", "3"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("name,value\nE,4.5\n"), "{out}");
        let (code, out, _) = run_capture(&["spectrum", "--system", "hydrogen", "--n", "2"]);
        assert_eq!(code, 0);
        assert!(out.contains("E,-0.125"), "{out}");
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_capture(&["spectrum", "--system", "hydrogen", "--n", "2", "--ell", "2"]).0, 1);
        assert_eq!(run_capture(&["bogus"]).0, 1);
        assert_eq!(run_capture(&["momentum", "--grid", "1:0:10"]).0, 1);
        assert_eq!(run_capture(&["spectrum", "--tol", "-1"]).0, 1);
        assert_eq!(
            run_capture(&["momentum", "--system", "hydrogen", "--n", "2", "--ell", "1", "--coord", "theta", "--grid", "-1:0.5:10"]).0,
            1
        );
    }

    #[test]
    fn negative_m_is_accepted() {
        let (code, out, err) =
            run_capture(&["action", "--system", "hydrogen", "--n", "3", "--ell", "2", "--m", "-1"]);
        assert_eq!(code, 0, "{err}");
        assert!(out.contains("phi,-1"), "{out}");
    }

    #[test]
    fn figure_masks_poles() {
        let args = RunArgs {
            system: Some(SystemKind::Ho),
            n: Some("2".into()),
            ell: 0,
            m: 0,
            omega: None,
            coord: HydrogenCoord::Radial,
            axis: Axis::X,
            grid: Some("-3:3:601".into()),
            format: OutputFormat::Csv,
            tol: 1e-8,
            contour: None,
            samples: None,
            kappa_shift: 0.0,
            nmax: None,
            output: None,
        };
        let data = cmd_momentum(&RunConfig::from_args(&args).unwrap()).unwrap();
        assert_eq!(data.masked_clusters().len(), 2);
        assert!(data.rows.iter().all(|r| r.u.abs() <= 1.0));
    }

    #[test]
    fn action_non_convergence_exit() {
        // circle enclosing only two of the six nodes misses the target
        let (code, _, err) = run_capture(&[
            "action", "--system", "ho", "--n", "6", "--contour", "0,0,0.5,0.5",
        ]);
        assert_eq!(code, 2, "{err}");
        assert!(err.contains("non_convergence"));
    }
}
