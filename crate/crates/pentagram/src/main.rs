//! Command-line driver: seeded polygon generation, orbit iteration,
//! invariant extraction, verification suites, curve analysis, and
//! closed-polygon experiments.
//!
//! Exit codes: 0 success, 1 check failure, 2 usage error, 3 degeneracy
//! (map undefined / non-generic input).

use clap::{Args, Parser, Subcommand};
use pentagram::coords::XYCoords;
use pentagram::error::Error;
use pentagram::files::{LoadedState, PolygonFile};
use pentagram::report::{
    self, complex_json, invariants_json, pentagon_periodicity_check, state_invariants, Report,
};
use pentagram::rng;
use pentagram::spectral;
use pentagram::svg;
use pentagram::tol::Tolerances;
use pentagram::Result;
use std::path::PathBuf;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "pentagram", version, about = "Numerical laboratory for the pentagram map")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct TolArgs {
    /// Override a named tolerance, e.g. --tol-override zero_curvature=1e-9
    #[arg(long = "tol-override", value_name = "KEY=VALUE")]
    tol_override: Vec<String>,
}

impl TolArgs {
    fn build(&self) -> std::result::Result<Tolerances, String> {
        let mut tols = Tolerances::default();
        for entry in &self.tol_override {
            let (key, value) = entry
                .split_once('=')
                .ok_or_else(|| format!("expected KEY=VALUE, got `{entry}`"))?;
            let value: f64 = value
                .parse()
                .map_err(|e| format!("cannot parse `{value}` as a number: {e}"))?;
            tols.override_entry(key, value)?;
        }
        Ok(tols)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded random polygon file.
    Random {
        #[arg(long)]
        n: usize,
        /// Coordinate kind: ab | xy | vertices
        #[arg(long, default_value = "ab")]
        kind: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sample a closed polygon (plane vertices, identity monodromy);
        /// forces kind = vertices.
        #[arg(long)]
        closed: bool,
        /// Output path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Iterate the pentagram map and report invariant drift.
    Iterate {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        /// Output format: json | svg
        #[arg(long, default_value = "json")]
        format: String,
        /// Render every k-th step in the SVG.
        #[arg(long, default_value_t = 1)]
        stride: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        tols: TolArgs,
    },
    /// Print the integrals of motion and Casimirs of a polygon file.
    Invariants {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the full property suite on a file, a seeded polygon, or a sweep.
    Verify {
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "ab")]
        kind: String,
        #[arg(long)]
        closed: bool,
        /// Sweep n in 4..=9 with 5 seeds each (overrides --file/--n).
        #[arg(long)]
        sweep: bool,
        /// Orbit length for the conservation check.
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        tols: TolArgs,
    },
    /// Spectral-curve analysis: invariants, Casimirs, branch points, genus,
    /// Puiseux data, closed relations.
    Curve {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-polygon experiment: closure, relations, genus drop, and (for
    /// pentagons) orbit periodicity.
    Closed {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        tols: TolArgs,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_degeneracy() {
                3
            } else {
                1
            }
        }
    };
    std::process::exit(code);
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<()> {
    let terminated = if text.ends_with('\n') { text.to_string() } else { format!("{text}\n") };
    match out {
        Some(path) => std::fs::write(path, terminated).map_err(Error::from),
        None => {
            print!("{terminated}");
            Ok(())
        }
    }
}

fn usage_error(msg: &str) -> ! {
    eprintln!("usage error: {msg}");
    std::process::exit(2);
}

fn generate(n: usize, kind: &str, seed: u64, closed: bool) -> Result<PolygonFile> {
    if closed {
        if kind != "vertices" && kind != "ab" {
            // --closed implies vertices; reject explicit contradictions
            usage_error("--closed requires kind=vertices");
        }
        let chain = rng::random_closed_chain(n, seed)?;
        return Ok(PolygonFile::from_chain(&chain, Some(seed)));
    }
    match kind {
        "ab" => {
            if n % 3 == 0 {
                return Err(Error::UnsupportedN(n, "kind ab needs n not divisible by 3"));
            }
            Ok(PolygonFile::from_ab(&rng::random_ab(n, seed), Some(seed)))
        }
        "xy" => Ok(PolygonFile::from_xy(&rng::random_xy(n, seed), Some(seed))),
        "vertices" => Ok(PolygonFile::from_chain(&rng::random_chain(n, seed)?, Some(seed))),
        other => usage_error(&format!("unknown kind `{other}` (ab | xy | vertices)")),
    }
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Random { n, kind, seed, closed, out } => {
            if n < 4 {
                usage_error("need n >= 4");
            }
            let file = generate(n, &kind, seed, closed)?;
            emit(&file.to_json(), &out)?;
            Ok(0)
        }
        Command::Iterate { file, steps, format, stride, out, tols } => {
            let tols = tols.build().unwrap_or_else(|e| usage_error(&e));
            let polygon = PolygonFile::read(&file)?;
            let state = polygon.load()?;
            cmd_iterate(&state, steps, &format, stride, out, &tols)
        }
        Command::Invariants { file, out } => {
            let polygon = PolygonFile::read(&file)?;
            let state = polygon.load()?;
            let started = Instant::now();
            let mut report = Report::new("invariants");
            report.input("file", file.display().to_string());
            report.input("n", state.n());
            let inv = state_invariants(&state)?;
            report.detail("invariants", invariants_json(&inv));
            if let Ok(cas) = inv.casimirs() {
                report.detail(
                    "casimirs",
                    serde_json::json!({
                        "E_n": complex_json(cas.e_n),
                        "O_n": complex_json(cas.o_n),
                        "E_half": cas.e_half.map(complex_json),
                        "O_half": cas.o_half.map(complex_json),
                    }),
                );
            }
            report.timing_ms = started.elapsed().as_millis() as u64;
            emit(&report.to_json(), &out)?;
            Ok(0)
        }
        Command::Verify { file, n, seed, kind, closed, sweep, steps, out, tols } => {
            let tols = tols.build().unwrap_or_else(|e| usage_error(&e));
            let started = Instant::now();
            let mut report = Report::new("verify");
            report.input("steps", steps);
            if sweep {
                report.input("sweep", "n in 4..=9, seeds 0..5");
                for n in 4usize..=9 {
                    for seed in 0..5u64 {
                        let kind = if n % 3 == 0 { "xy" } else { "ab" };
                        let state = generate(n, kind, seed, false)?.load()?;
                        let prefix = format!("n{n}_s{seed}_");
                        report::verify_state(&mut report, &prefix, &state, steps.min(20), &tols);
                    }
                }
            } else {
                let loaded = match (&file, n) {
                    (Some(path), _) => {
                        report.input("file", path.display().to_string());
                        PolygonFile::read(path).and_then(|f| f.load())
                    }
                    (None, Some(n)) => {
                        report.input("n", n);
                        report.input("seed", seed);
                        generate(n, &kind, seed, closed).and_then(|f| f.load())
                    }
                    (None, None) => usage_error("verify needs --file, --n, or --sweep"),
                };
                match loaded {
                    Ok(state) => {
                        report.input("n", state.n());
                        report.check("input_validity", 0.0, 0.5);
                        report::verify_state(&mut report, "", &state, steps, &tols);
                    }
                    Err(e) => {
                        // invalid or degenerate input: report it and stop
                        report.check_failed("input_validity", 0.5, &e);
                        report.timing_ms = started.elapsed().as_millis() as u64;
                        emit(&report.to_json(), &out)?;
                        return Ok(if e.is_degeneracy() { 3 } else { 1 });
                    }
                }
            }
            report.timing_ms = started.elapsed().as_millis() as u64;
            emit(&report.to_json(), &out)?;
            Ok(if report.pass { 0 } else { 1 })
        }
        Command::Curve { file, out } => {
            let polygon = PolygonFile::read(&file)?;
            let state = polygon.load()?;
            let started = Instant::now();
            let mut report = Report::new("curve");
            report.input("file", file.display().to_string());
            report.input("n", state.n());
            let inv = state_invariants(&state)?;
            report.detail("invariants", invariants_json(&inv));
            if let Ok(cas) = inv.casimirs() {
                report.detail(
                    "casimirs",
                    serde_json::json!({
                        "E_n": complex_json(cas.e_n),
                        "O_n": complex_json(cas.o_n),
                        "E_half": cas.e_half.map(complex_json),
                        "O_half": cas.o_half.map(complex_json),
                    }),
                );
            }
            let curve = spectral::branch_points(&inv)?;
            report.detail("genus", curve.genus);
            report.detail("nu_finite", curve.nu_finite);
            report.detail("closed", curve.closed);
            report.detail(
                "branch_points",
                curve.branch_z.iter().map(|z| complex_json(*z)).collect::<Vec<_>>(),
            );
            report.detail(
                "marked_points",
                curve
                    .marked_points
                    .iter()
                    .map(|m| {
                        serde_json::json!({
                            "name": m.name,
                            "k_exponent": m.exponent_times_two as f64 / 2.0,
                            "leading": complex_json(m.leading),
                        })
                    })
                    .collect::<Vec<_>>(),
            );
            let relations = inv.closed_relations();
            report.detail("closed_relation_residuals", relations.to_vec());
            if let Ok(rep) = spectral::singularity_expansions_check(&inv) {
                report.detail("puiseux_residuals", rep.residuals.clone());
                report.detail("origin_growth_exponent", rep.origin_growth_exponent);
            }
            report.timing_ms = started.elapsed().as_millis() as u64;
            emit(&report.to_json(), &out)?;
            Ok(0)
        }
        Command::Closed { n, seed, out, tols } => {
            let tols = tols.build().unwrap_or_else(|e| usage_error(&e));
            let started = Instant::now();
            let mut report = Report::new("closed");
            report.input("n", n);
            report.input("seed", seed);
            let chain = rng::random_closed_chain(n, seed)?;
            report.check("is_closed", if chain.is_closed() { 0.0 } else { 1.0 }, 0.5);
            let inv = spectral::invariants_from_chain(&chain)?;
            report.detail("invariants", invariants_json(&inv));
            let relations = inv.closed_relations();
            report.check(
                "closed_relations",
                relations.iter().copied().fold(0.0, f64::max),
                tols.get("closed_relations"),
            );
            // triple point at (z, k) = (1, 1)
            let one = pentagram::num::c(1.0, 0.0);
            report.check("triple_point_R", inv.curve_eval(one, one)?.norm(), 1e-7);
            report.check("triple_point_dRdk", inv.curve_dk(one, one)?.norm(), 1e-6);
            report.check("triple_point_dRdz", inv.curve_dz(one, one)?.norm(), 1e-6);
            let curve = spectral::branch_points(&inv)?;
            report.check_exact("genus", curve.genus as i64, report::expected_genus(n, true) as i64);
            report.detail("genus", curve.genus);
            if n == 5 {
                let xy = chain.to_xy()?;
                pentagon_periodicity_check(&mut report, "", &xy, &tols);
            }
            report.timing_ms = started.elapsed().as_millis() as u64;
            emit(&report.to_json(), &out)?;
            Ok(if report.pass { 0 } else { 1 })
        }
    }
}

fn cmd_iterate(
    state: &LoadedState,
    steps: usize,
    format: &str,
    stride: usize,
    out: Option<PathBuf>,
    tols: &Tolerances,
) -> Result<i32> {
    let started = Instant::now();
    let mut report = Report::new("iterate");
    report.input("steps", steps);
    report.input("n", state.n());

    // orbit in coordinates; vertex orbits contract toward a fixed
    // configuration, so raw chain steps are taken only for the SVG output
    let xy0 = state.xy()?;
    let xy_orbit: Vec<XYCoords> = xy0.orbit(steps)?;
    let invariants: Vec<spectral::SpectralInvariants> = match state {
        LoadedState::Ab(ab) => spectral::orbit_invariants_ab(ab, steps)?,
        LoadedState::Xy(_) => spectral::orbit_invariants_xy(&xy0, steps)?,
        LoadedState::Chain(chain) => {
            let pinned = spectral::invariants_from_chain(chain)?;
            spectral::orbit_invariants_xy_from(&xy0, steps, spectral::CubeRootPolicy::Near(pinned.c))?
        }
    };
    let drift = spectral::conservation_drift(&invariants);
    report.check("conservation", drift, tols.get("conservation_drift"));
    report.detail("initial_invariants", invariants_json(&invariants[0]));
    report.detail(
        "drift_per_step",
        invariants
            .iter()
            .map(|s| s.relative_distance(&invariants[0]))
            .collect::<Vec<_>>(),
    );

    // shift-equivalence periodicity scan on the coordinate strings
    let mut period = None;
    for (t, state_t) in xy_orbit.iter().enumerate().skip(1) {
        let (shift, dev) = state_t.best_shift_distance(&xy_orbit[0]);
        if dev < tols.get("pentagon_period") {
            period = Some(serde_json::json!({ "period": t, "shift": shift, "deviation": dev }));
            break;
        }
    }
    match period {
        Some(p) => report.detail("periodicity", p),
        None => report.detail("periodicity", serde_json::Value::Null),
    }

    match format {
        "json" => {
            report.timing_ms = started.elapsed().as_millis() as u64;
            emit(&report.to_json(), &out)?;
        }
        "svg" => {
            // the rendered orbit is the actual geometric one
            let chain0 = match state.chain() {
                Some(c) => c.clone(),
                None => state
                    .ab()
                    .map_err(|_| {
                        Error::UnsupportedN(
                            state.n(),
                            "SVG output needs vertices (or coordinates with n not divisible by 3)",
                        )
                    })?
                    .to_chain()?,
            };
            let mut chains = vec![chain0];
            for k in 0..steps {
                let next = chains
                    .last()
                    .unwrap()
                    .pentagram_step()
                    .map_err(|_| Error::MapUndefinedAtStep(k + 1))?;
                chains.push(next);
            }
            let rendered = svg::orbit_svg(&chains, stride);
            report.detail("complex_rendered_as_real", rendered.complex_flagged);
            emit(&rendered.svg, &out)?;
        }
        other => usage_error(&format!("unknown format `{other}` (json | svg)")),
    }
    Ok(if report.pass { 0 } else { 1 })
}
