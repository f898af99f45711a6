//! Command-line front end: randomized verification suites, chart/polynomial
//! conversions, bracket and form matrices, Hamiltonian flows, and
//! special-lift enumeration. Exit codes: 0 success, 1 verification failure,
//! 2 malformed input.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use monopole::cartan::{CartanDatum, CartanSpec, Degree};
use monopole::chart::{from_polys, ChartPoint, PolyChart};
use monopole::flows::{
    conservation_report, integrate, ChartTolerance, Hamiltonian,
};
use monopole::leaves::{enumerate_special_lifts, LiftConvention, ParabolicDatum};
use monopole::poisson::{
    bivector_matrix, bracket_coords, matrix_to_json, rank, symplectic_matrix, ChartLayout,
    CoordIndex,
};
use monopole::rat::format_rat;
use monopole::sample::{sample_chart_points, SampleConfig};
use monopole::verify::{
    jacobi_check_point, jacobi_sweep, oracle_sweep, run_verify, JacobiReport, VerifyConfig,
};
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "monopole", version, about = "charts, brackets, flows and leaves for based maps to flag varieties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the randomized verification suite (Jacobi, inverse, oracle)
    Verify {
        /// Type name like A2, or an explicit {"dot": [[...]]} matrix
        #[arg(long)]
        cartan: String,
        /// Degree coefficients, comma-separated, one per color
        #[arg(long, value_delimiter = ',')]
        alpha: Vec<u32>,
        #[arg(long, env = "MONOPOLE_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        points: usize,
        /// Write the JSON report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convert between chart points and polynomial data
    Chart {
        #[command(subcommand)]
        action: ChartAction,
    },
    /// Bracket of two coordinates at a point, or the full bivector matrix
    Bracket {
        #[arg(long)]
        point: PathBuf,
        /// First coordinate, e.g. x:1:1 (1-based color and slot)
        #[arg(long)]
        a: Option<String>,
        /// Second coordinate, e.g. y:2:1
        #[arg(long)]
        b: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Matrix of the symplectic form at a point
    Omega {
        #[arg(long)]
        point: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Jacobi identity: all coordinate triples at a point, or a seeded sweep
    JacobiCheck {
        /// Check every triple at this point
        #[arg(long, conflicts_with_all = ["cartan", "alpha"])]
        point: Option<PathBuf>,
        #[arg(long, requires = "alpha")]
        cartan: Option<String>,
        #[arg(long, value_delimiter = ',', requires = "cartan")]
        alpha: Option<Vec<u32>>,
        #[arg(long, env = "MONOPOLE_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact rank of the bivector at a point
    Rank {
        #[arg(long)]
        point: PathBuf,
    },
    /// Integrate a Hamiltonian flow; emits CSV samples and a JSON report
    Flow {
        /// Terms joined by '+': x:i:k, y:i:k, or e<m>:<color>, e.g. e2:1
        #[arg(long)]
        hamiltonian: String,
        #[arg(long)]
        point: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        /// Minimal pairwise x-gap before the trajectory counts as having
        /// left the chart
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// CSV destination (default stdout)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Conservation report destination (default stderr)
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Special lifts of a parabolic degree
    Leaves {
        #[arg(long)]
        cartan: String,
        /// Colors of J, comma-separated, 1-based; omit for the empty set
        #[arg(long = "J", value_delimiter = ',')]
        j: Option<Vec<usize>>,
        #[arg(long, value_delimiter = ',')]
        beta: Vec<u32>,
        #[arg(long)]
        convention: Option<ConventionArg>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the divided-difference oracle against the bracket table
    OracleCheck {
        #[arg(long)]
        cartan: String,
        #[arg(long, value_delimiter = ',')]
        alpha: Vec<u32>,
        #[arg(long, env = "MONOPOLE_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ChartAction {
    /// Point JSON -> polynomial data (with its roots recorded)
    ToPolys {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Polynomial data (with roots) -> point JSON
    FromPolys {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ConventionArg {
    Lemma,
    Literal,
}

impl From<ConventionArg> for LiftConvention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Lemma => LiftConvention::Lemma,
            ConventionArg::Literal => LiftConvention::Literal,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn parse_cartan_spec(spec: &str) -> Result<CartanSpec> {
    if spec.trim_start().starts_with('{') {
        Ok(serde_json::from_str(spec).context("parsing cartan matrix JSON")?)
    } else {
        Ok(CartanSpec::Name(spec.to_owned()))
    }
}

fn build_cartan(spec: &str) -> Result<CartanDatum> {
    Ok(parse_cartan_spec(spec)?.build()?)
}

fn load_point(path: &PathBuf) -> Result<ChartPoint> {
    let raw = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(ChartPoint::from_json_str(&raw)?)
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, content).with_context(|| format!("writing {}", path.display()))?
        }
        None => println!("{content}"),
    }
    Ok(())
}

fn pass_fail(passed: bool) -> ExitCode {
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Verify { cartan, alpha, seed, points, out } => {
            let config = VerifyConfig {
                cartan: parse_cartan_spec(&cartan)?,
                alpha,
                seed,
                points,
            };
            let report = run_verify(&config)?;
            emit(&out, &serde_json::to_string_pretty(&report)?)?;
            Ok(pass_fail(report.all_passed()))
        }
        Command::Chart { action } => {
            match action {
                ChartAction::ToPolys { file, out } => {
                    let pt = load_point(&file)?;
                    let pc = pt.to_polys();
                    let roots: Vec<Vec<_>> = (0..pt.cartan().rank())
                        .map(|i| pt.x_block(i).to_vec())
                        .collect();
                    let json = serde_json::to_string_pretty(&pc.to_json(Some(&roots)))?;
                    emit(&out, &json)?;
                }
                ChartAction::FromPolys { file, out } => {
                    let raw = fs::read_to_string(&file)
                        .with_context(|| format!("reading {}", file.display()))?;
                    let (pc, roots) = PolyChart::from_json_str(&raw)?;
                    let roots = roots
                        .ok_or_else(|| anyhow!("polychart JSON needs a \"roots\" field"))?;
                    let pt = from_polys(&pc, &roots)?;
                    emit(&out, &serde_json::to_string_pretty(&pt.to_json())?)?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Bracket { point, a, b, out } => {
            let pt = load_point(&point)?;
            match (a, b) {
                (Some(a), Some(b)) => {
                    let ca = CoordIndex::parse(&a)?;
                    let cb = CoordIndex::parse(&b)?;
                    let value = bracket_coords(&pt, ca, cb)?;
                    emit(&out, &format_rat(&value))?;
                }
                (None, None) => {
                    let m = bivector_matrix(&pt);
                    emit(&out, &serde_json::to_string_pretty(&matrix_to_json(m.entries()))?)?;
                }
                _ => bail!("--a and --b must be given together"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Omega { point, out } => {
            let pt = load_point(&point)?;
            let m = symplectic_matrix(&pt);
            emit(&out, &serde_json::to_string_pretty(&matrix_to_json(m.entries()))?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::JacobiCheck { point, cartan, alpha, seed, points, out } => {
            let report = match (point, cartan, alpha) {
                (Some(path), None, None) => {
                    let pt = load_point(&path)?;
                    let (triples, failures) = jacobi_check_point(&pt);
                    JacobiReport { points: 1, triples, failures }
                }
                (None, Some(cartan), Some(alpha)) => {
                    let datum = build_cartan(&cartan)?;
                    if alpha.len() != datum.rank() {
                        bail!("alpha has {} entries, datum has rank {}", alpha.len(), datum.rank());
                    }
                    let pts = sample_chart_points(
                        &datum,
                        &Degree::new(alpha),
                        seed,
                        points,
                        &SampleConfig::default(),
                    );
                    jacobi_sweep(&pts)
                }
                _ => bail!("give either --point, or --cartan with --alpha"),
            };
            let passed = report.failures.is_empty();
            emit(&out, &serde_json::to_string_pretty(&report)?)?;
            Ok(pass_fail(passed))
        }
        Command::Rank { point } => {
            let pt = load_point(&point)?;
            println!("{}", rank(&pt));
            Ok(ExitCode::SUCCESS)
        }
        Command::Flow { hamiltonian, point, t, dt, tol, out, report } => {
            let pt = load_point(&point)?;
            let layout = ChartLayout::new(pt.alpha());
            let h = Hamiltonian::parse(&hamiltonian, &layout)?;
            let fpt = pt.to_float();
            let state = layout.flatten(&fpt.x, &fpt.y);
            let tolerance = ChartTolerance { min_x_gap: tol, ..ChartTolerance::default() };
            let traj = match integrate(pt.cartan(), &layout, &h, &state, t, dt, &tolerance) {
                Ok(traj) => traj,
                Err(e) => {
                    eprintln!("error: {e}");
                    return Ok(ExitCode::from(1));
                }
            };
            // CSV: t, then re/im of every coordinate in layout order
            let mut csv = String::from("t");
            for c in layout.coords() {
                csv.push_str(&format!(",re_{0},im_{0}", c.label()));
            }
            csv.push('\n');
            for (time, s) in traj.times.iter().zip(&traj.states) {
                csv.push_str(&format!("{time}"));
                for v in s {
                    csv.push_str(&format!(",{},{}", v.re, v.im));
                }
                csv.push('\n');
            }
            match &out {
                Some(path) => fs::write(path, &csv)
                    .with_context(|| format!("writing {}", path.display()))?,
                None => print!("{csv}"),
            }
            // conservation report: every e_m of every color, plus H itself
            let mut probes = Vec::new();
            for color in 0..pt.cartan().rank() {
                for m in 1..=pt.alpha().coeff(color) as usize {
                    probes.push(Hamiltonian::elementary_symmetric_x(&layout, color, m)?);
                }
            }
            probes.push(h.clone());
            let drifts = conservation_report(&traj, &probes);
            let report_json = serde_json::json!({
                "hamiltonian": hamiltonian,
                "x_only": h.is_x_only(),
                "t": t,
                "dt": dt,
                "samples": traj.times.len(),
                "max_relative_drift": probes
                    .iter()
                    .zip(&drifts)
                    .map(|(p, d)| (p.label().to_owned(), serde_json::json!(*d)))
                    .collect::<serde_json::Map<String, serde_json::Value>>(),
            });
            let rendered = serde_json::to_string_pretty(&report_json)?;
            match &report {
                Some(path) => fs::write(path, rendered)
                    .with_context(|| format!("writing {}", path.display()))?,
                None => eprintln!("{rendered}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Leaves { cartan, j, beta, convention, out } => {
            let datum = build_cartan(&cartan)?;
            let j: Vec<usize> = j.unwrap_or_default();
            for &c in &j {
                if c == 0 {
                    bail!("J colors are 1-based");
                }
            }
            let j0: Vec<usize> = j.iter().map(|&c| c - 1).collect();
            if beta.len() != datum.rank() {
                bail!("beta has {} entries, datum has rank {}", beta.len(), datum.rank());
            }
            let convention = match convention {
                Some(c) => c.into(),
                None => {
                    eprintln!(
                        "note: defaulting to the 'lemma' lift condition; under 'literal' \
                         antidominance the only lift of beta is beta itself"
                    );
                    LiftConvention::Lemma
                }
            };
            let pd = ParabolicDatum::new(datum, &j0, Degree::new(beta))?;
            let lifts = enumerate_special_lifts(&pd, convention)?;
            let json = serde_json::json!({
                "convention": match convention {
                    LiftConvention::Lemma => "lemma",
                    LiftConvention::Literal => "literal",
                },
                "lifts": lifts.lifts.iter().map(|d| d.coeffs().to_vec()).collect::<Vec<_>>(),
                "dimensions": lifts.dimensions(),
            });
            emit(&out, &serde_json::to_string_pretty(&json)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::OracleCheck { cartan, alpha, seed, points, out } => {
            let datum = build_cartan(&cartan)?;
            if alpha.len() != datum.rank() {
                bail!("alpha has {} entries, datum has rank {}", alpha.len(), datum.rank());
            }
            let pts = sample_chart_points(
                &datum,
                &Degree::new(alpha),
                seed,
                points,
                &SampleConfig::default(),
            );
            let report = oracle_sweep(&pts);
            let passed = report.failures.is_empty();
            emit(&out, &serde_json::to_string_pretty(&report)?)?;
            Ok(pass_fail(passed))
        }
    }
}
