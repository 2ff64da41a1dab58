use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use homperc_core::estimators::{degree_scan, slope_scaling, DegreeRow, ReplicateSummary};
use homperc_core::homology::{brute_force_distance, homology_rank, CoveringSearch};
use homperc_core::quotient::{attempt_seed, random_relator};
use homperc_core::{
    build_quotient_graph, build_torus, combine_replicates, convolve, crossing_fit, cycle_distance,
    incidence_matrices, size_scaling_extrapolate, CanonicalSeries, DualPair, FitCurve, FitResult,
    GrandCanonicalCurve, PGrid, ScalingResult, ShiftMode, Word,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::table::{self, VERSION};
use crate::{hpg, parallel};

#[derive(Parser, Debug)]
#[command(
    name = "homperc",
    version,
    about = "Homology-changing percolation on surface graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write the Lx x Ly square-lattice torus.
    GenerateTorus {
        #[arg(long)]
        lx: usize,
        #[arg(long)]
        ly: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a {f,d} quotient graph built from a random or given relator.
    GenerateHyperbolic(GenerateHyperbolic),
    /// Validate a graph and print its code parameters as JSON.
    GraphInfo {
        graph: PathBuf,
        #[command(flatten)]
        search: DistanceArgs,
    },
    /// Code distances as JSON.
    Distance {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        search: DistanceArgs,
        /// Exact shortest nontrivial cycles instead of enumeration/covering.
        #[arg(long)]
        exact: bool,
    },
    /// Newman-Ziff sweeps into a canonical-ensemble CSV.
    Simulate {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        run: SweepArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Binomial convolution of a canonical CSV into a curve CSV.
    Convolve {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Collective crossing-point fit of P_E curves.
    FitCrossing {
        #[arg(long, value_delimiter = ',', required = true)]
        curves: Vec<PathBuf>,
        /// JSON array of {"n": .., "d": ..} in curve order.
        #[arg(long)]
        meta: PathBuf,
        #[command(flatten)]
        fit: FitArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// S1 = omega n^(2/3) extrapolation.
    FitScaling {
        #[arg(long, value_delimiter = ',', required = true)]
        curves: Vec<PathBuf>,
        #[arg(long, value_delimiter = ',', default_values_t = [0.25, 0.5, 1.0])]
        omegas: Vec<f64>,
        #[arg(long, default_value_t = 2)]
        degree: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate or load graphs, simulate, convolve and fit in one run.
    Pipeline(Pipeline),
}

#[derive(Args, Debug, Clone)]
pub struct GenerateHyperbolic {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub f: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 8)]
    pub min_len: usize,
    #[arg(long, default_value_t = 20)]
    pub max_len: usize,
    #[arg(long, default_value_t = 10_000_000)]
    pub max_cosets: usize,
    /// Relators tried before giving up.
    #[arg(long, default_value_t = 200)]
    pub attempts: u64,
    /// Accept only graphs with at least this many edges.
    #[arg(long, default_value_t = 0)]
    pub min_edges: usize,
    #[arg(long, default_value_t = usize::MAX)]
    pub max_edges: usize,
    /// Use this relator instead of searching.
    #[arg(long)]
    pub relator: Option<String>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct DistanceArgs {
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Subset budget of the exhaustive search.
    #[arg(long, default_value_t = 1 << 24)]
    pub exact_limit: u64,
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 10_000)]
    pub sweeps: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct GridArgs {
    #[arg(long, default_value_t = 0.001)]
    pub pmin: f64,
    #[arg(long, default_value_t = 1.0)]
    pub pmax: f64,
    #[arg(long, default_value_t = 0.001)]
    pub dp: f64,
    #[arg(long = "M", default_value_t = 100.0)]
    pub m: f64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct FitArgs {
    #[arg(long, default_value_t = 6)]
    pub degree: usize,
    /// Fit range `lo,hi`.
    #[arg(long, value_parser = parse_window)]
    pub window: (f64, f64),
    #[arg(long)]
    pub shift: bool,
    /// Highest degree in the residual-versus-degree table.
    #[arg(long, default_value_t = 8)]
    pub scan_max: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Pipeline {
    #[arg(long, value_delimiter = ',')]
    pub graphs: Vec<PathBuf>,
    /// Square tori of these sides, in addition to --graphs.
    #[arg(long, value_delimiter = ',')]
    pub tori: Vec<usize>,
    #[command(flatten)]
    pub run: SweepArgs,
    /// Full runs with seeds seed, seed+1, ...
    #[arg(long, default_value_t = 1)]
    pub replicates: u64,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub fit: FitArgs,
    #[arg(long, value_delimiter = ',', default_values_t = [0.25, 0.5, 1.0])]
    pub omegas: Vec<f64>,
    #[arg(long, default_value_t = 2)]
    pub scaling_degree: usize,
    #[arg(long)]
    pub out_dir: PathBuf,
}

fn parse_window(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(',').ok_or("expected lo,hi")?;
    let lo: f64 = lo.trim().parse().map_err(|e| format!("{lo}: {e}"))?;
    let hi: f64 = hi.trim().parse().map_err(|e| format!("{hi}: {e}"))?;
    if lo < hi {
        Ok((lo, hi))
    } else {
        Err(format!("need lo < hi (got {lo}, {hi})"))
    }
}

/// Echo of a run's settings, written into every output.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    #[serde(flatten)]
    pub params: Value,
}

impl RunConfig {
    fn new(command: &'static str, params: Value) -> Self {
        RunConfig { command, params }
    }

    fn value(&self) -> Value {
        serde_json::to_value(self).expect("plain data")
    }
}

#[derive(Debug, Deserialize)]
struct CurveMetaEntry {
    n: usize,
    d: usize,
}

/// Parses `args` and runs; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("homperc: {e}");
            e.exit_code()
        }
    }
}

pub fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::GenerateTorus { lx, ly, out } => {
            let cfg = RunConfig::new("generate-torus", json!({"lx": lx, "ly": ly, "out": out}));
            let pair = build_torus(lx, ly)?;
            hpg::save(&out, pair.primal(), &graph_comments(&cfg, &[]))?;
            println!("{}", summary_line(&pair));
            Ok(())
        }
        Command::GenerateHyperbolic(args) => generate_hyperbolic(&args),
        Command::GraphInfo { graph, search } => {
            let (pair, file) = hpg::load(&graph)?;
            let mut info = distances(&pair, &search, false)?;
            let g = pair.primal();
            let obj = info.as_object_mut().expect("object");
            obj.insert("vertices".into(), json!(g.num_vertices()));
            obj.insert("faces".into(), json!(g.num_faces()));
            obj.insert("schlafli".into(), json!(g.schlafli()));
            obj.insert(
                "euler_characteristic".into(),
                json!(g.euler_characteristic()),
            );
            obj.insert("valid".into(), json!(true));
            if let Some(r) = file.comment_value("relator") {
                obj.insert("relator".into(), json!(r));
            }
            if let Some((f, d)) = g.schlafli() {
                // k = 2 + (1 - 2/d - 2/f) n, compared in integers
                let (n, k) = (g.num_edges() as i64, obj["k"].as_i64().unwrap_or(-1));
                let (f, d) = (f as i64, d as i64);
                let holds = k * d * f == 2 * d * f + (d * f - 2 * d - 2 * f) * n;
                obj.insert("rank_formula_holds".into(), json!(holds));
            }
            println!("{}", serde_json::to_string_pretty(&info).expect("json"));
            Ok(())
        }
        Command::Distance {
            graph,
            search,
            exact,
        } => {
            let (pair, _) = hpg::load(&graph)?;
            let mut info = distances(&pair, &search, exact)?;
            let cfg = RunConfig::new(
                "distance",
                json!({"graph": graph, "search": search, "exact": exact}),
            );
            stamp(&mut info, &cfg);
            println!("{}", serde_json::to_string_pretty(&info).expect("json"));
            Ok(())
        }
        Command::Simulate { graph, run, out } => {
            let cfg = RunConfig::new("simulate", json!({"graph": graph, "run": run, "out": out}));
            let (pair, _) = hpg::load(&graph)?;
            let series = simulate(&pair, &run, run.seed);
            table::write(&out, &table::series_to_string(&series, &cfg.value()))
        }
        Command::Convolve { input, grid, out } => {
            let cfg = RunConfig::new("convolve", json!({"in": input, "grid": grid, "out": out}));
            let series = table::read_series(&input)?;
            let mut curve = convolve_checked(&series, &grid)?;
            curve.id = input
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            table::write(&out, &table::curve_to_string(&curve, &cfg.value()))
        }
        Command::FitCrossing {
            curves,
            meta,
            fit,
            out,
        } => {
            let cfg = RunConfig::new(
                "fit-crossing",
                json!({"curves": curves, "meta": meta, "fit": fit}),
            );
            let text = std::fs::read_to_string(&meta).map_err(|e| CliError::io(&meta, e))?;
            let entries: Vec<CurveMetaEntry> = serde_json::from_str(&text)
                .map_err(|e| CliError::Validation(format!("{}: {e}", meta.display())))?;
            if entries.len() != curves.len() {
                return Err(CliError::Usage(format!(
                    "{} curves but {} meta entries",
                    curves.len(),
                    entries.len()
                )));
            }
            let mut fit_curves = Vec::new();
            for (path, m) in curves.iter().zip(&entries) {
                let c = table::read_curve(path)?;
                if c.n != m.n {
                    return Err(CliError::Validation(format!(
                        "{}: n = {} but meta says {}",
                        path.display(),
                        c.n,
                        m.n
                    )));
                }
                fit_curves.push(FitCurve::pe(&c, m.d));
            }
            let mut result = crossing_report(&[fit_curves], &fit)?;
            stamp(&mut result, &cfg);
            emit(out.as_deref(), &result)
        }
        Command::FitScaling {
            curves,
            omegas,
            degree,
            out,
        } => {
            let cfg = RunConfig::new(
                "fit-scaling",
                json!({"curves": curves, "omegas": omegas, "degree": degree}),
            );
            let fit_curves = curves
                .iter()
                .map(|p| table::read_curve(p).map(|c| FitCurve::s1(&c)))
                .collect::<Result<Vec<_>, _>>()?;
            let r =
                size_scaling_extrapolate(&fit_curves, &omegas, degree).map_err(CliError::fit)?;
            let mut v = scaling_json(&r);
            stamp(&mut v, &cfg);
            emit(out.as_deref(), &v)
        }
        Command::Pipeline(args) => pipeline(&args),
    }
}

fn threads(t: Option<usize>) -> usize {
    t.unwrap_or_else(parallel::default_threads)
}

fn summary_line(pair: &DualPair) -> String {
    let g = pair.primal();
    let k = homology_rank(&incidence_matrices(g));
    format!(
        "V={} n={} F={} k={}",
        g.num_vertices(),
        g.num_edges(),
        g.num_faces(),
        k
    )
}

fn graph_comments(cfg: &RunConfig, extra: &[String]) -> Vec<String> {
    let mut c = vec![
        format!("homperc {VERSION} graph"),
        format!("config {}", cfg.value()),
    ];
    c.extend_from_slice(extra);
    c
}

fn stamp(v: &mut Value, cfg: &RunConfig) {
    if let Some(obj) = v.as_object_mut() {
        obj.insert("version".into(), json!(VERSION));
        obj.insert("config".into(), cfg.value());
    }
}

fn emit(out: Option<&Path>, v: &Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(v).expect("json") + "\n";
    match out {
        Some(path) => table::write(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn generate_hyperbolic(args: &GenerateHyperbolic) -> Result<(), CliError> {
    let cfg = RunConfig::new(
        "generate-hyperbolic",
        serde_json::to_value(ArgsEcho::from(args)).expect("json"),
    );
    let (pair, relator, note) = match &args.relator {
        Some(text) => {
            let word: Word = text
                .parse()
                .map_err(|e| CliError::Usage(format!("relator `{text}`: {e}")))?;
            let pair =
                build_quotient_graph(args.d, args.f, std::slice::from_ref(&word), args.max_cosets)?;
            (pair, word, "given".to_string())
        }
        None => {
            let mut found = None;
            let mut capacity_hits = 0;
            for attempt in 0..args.attempts {
                let seed = attempt_seed(args.seed, attempt);
                let word = random_relator(seed, args.min_len, args.max_len)?;
                match build_quotient_graph(
                    args.d,
                    args.f,
                    std::slice::from_ref(&word),
                    args.max_cosets,
                ) {
                    Ok(pair)
                        if (args.min_edges..=args.max_edges)
                            .contains(&pair.primal().num_edges()) =>
                    {
                        found = Some((
                            pair,
                            word,
                            format!("attempt {attempt}, relator seed {seed}"),
                        ));
                        break;
                    }
                    Ok(_) | Err(homperc_core::Error::DegenerateQuotient(_)) => {}
                    Err(homperc_core::Error::CapacityExceeded { .. }) => capacity_hits += 1,
                    Err(e) => return Err(e.into()),
                }
            }
            match found {
                Some(f) => f,
                None if capacity_hits == args.attempts as usize => {
                    return Err(CliError::Capacity(format!(
                        "all {} relators exceeded {} cosets",
                        args.attempts, args.max_cosets
                    )))
                }
                None => {
                    return Err(CliError::Validation(format!(
                        "no suitable quotient in {} attempts ({capacity_hits} over capacity)",
                        args.attempts
                    )))
                }
            }
        }
    };
    let extra = [format!("relator: {relator}"), format!("source: {note}")];
    hpg::save(&args.out, pair.primal(), &graph_comments(&cfg, &extra))?;
    println!("{} relator={relator}", summary_line(&pair));
    Ok(())
}

#[derive(Serialize)]
struct ArgsEcho {
    d: usize,
    f: usize,
    seed: u64,
    min_len: usize,
    max_len: usize,
    max_cosets: usize,
    attempts: u64,
    min_edges: usize,
    max_edges: Option<usize>,
    relator: Option<String>,
    out: PathBuf,
}

impl From<&GenerateHyperbolic> for ArgsEcho {
    fn from(a: &GenerateHyperbolic) -> Self {
        ArgsEcho {
            d: a.d,
            f: a.f,
            seed: a.seed,
            min_len: a.min_len,
            max_len: a.max_len,
            max_cosets: a.max_cosets,
            attempts: a.attempts,
            min_edges: a.min_edges,
            max_edges: (a.max_edges != usize::MAX).then_some(a.max_edges),
            relator: a.relator.clone(),
            out: a.out.clone(),
        }
    }
}

/// `{n, k, dZ, dX, exact flags, confirmations}` for both sides.
pub fn distances(pair: &DualPair, args: &DistanceArgs, exact: bool) -> Result<Value, CliError> {
    let primal = incidence_matrices(pair.primal());
    let k = homology_rank(&primal);
    let sides = [
        (pair.primal(), primal.clone()),
        (pair.dual(), primal.dual()),
    ];
    let mut out = Vec::new();
    for (graph, inc) in sides {
        let (weight, is_exact, confirmations, method) = if exact {
            (cycle_distance(graph), true, 0, "cycles")
        } else if let Some(w) = brute_force_distance(&inc, args.exact_limit) {
            (Some(w), true, 0, "enumeration")
        } else if k == 0 {
            (None, true, 0, "enumeration")
        } else {
            let search = CoveringSearch::new(&inc);
            let r = parallel::covering(&search, args.trials, args.seed, threads(args.threads));
            (r.weight, false, r.confirmations, "covering")
        };
        out.push((weight, is_exact, confirmations, method));
    }
    let [(dz, zx, zc, zm), (dx, xx, xc, xm)] = [out[0], out[1]];
    Ok(json!({
        "n": pair.primal().num_edges(),
        "k": k,
        "dZ": dz,
        "dX": dx,
        "dZ_exact": zx,
        "dX_exact": xx,
        "dZ_confirmations": zc,
        "dX_confirmations": xc,
        "dZ_method": zm,
        "dX_method": xm,
        "trials": args.trials,
    }))
}

fn simulate(pair: &DualPair, run: &SweepArgs, seed: u64) -> CanonicalSeries {
    let k = homology_rank(&incidence_matrices(pair.primal()));
    parallel::aggregate(pair, k, run.sweeps, seed, threads(run.threads))
}

fn convolve_checked(
    series: &CanonicalSeries,
    grid: &GridArgs,
) -> Result<GrandCanonicalCurve, CliError> {
    let p_grid = PGrid::span(grid.pmin, grid.pmax, grid.dp)?;
    let curve = convolve(series, &p_grid, grid.m)?;
    let defect = curve.monotonicity_defect();
    if defect > 1e-12 {
        eprintln!("homperc: warning: convolved indicator curves not monotone (defect {defect:e})");
    }
    Ok(curve)
}

pub fn fit_json(r: &FitResult) -> Value {
    json!({
        "p0": r.p0,
        "sigma_p0": r.sigma,
        "sigma_fit": r.sigma_fit,
        "A0": r.a0,
        "B": r.b,
        "coefficients": r.coefficients,
        "n": r.n,
        "d": r.distance,
        "residual": r.residual,
        "dof": r.dof,
        "degree": r.degree,
        "window": [r.window.0, r.window.1],
        "shift": r.shift == ShiftMode::On,
        "weighted": r.weighted,
        "warnings": r.warnings,
    })
}

fn scaling_json(r: &ScalingResult) -> Value {
    json!({
        "pc": r.pc,
        "sigma": if r.sigma.is_finite() { json!(r.sigma) } else { json!("inf") },
        "infinite_uncertainty": r.infinite_uncertainty,
        "per_omega": r.per_omega.iter().map(|o| json!({
            "omega": o.omega,
            "intercept": o.intercept,
            "degree": o.degree,
            "points": o.points.iter().map(|&(n, x, p)| json!({"n": n, "x": x, "p": p})).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "warnings": r.warnings,
    })
}

fn degree_rows(rows: &[DegreeRow]) -> Value {
    rows.iter()
        .map(|r| json!({"degree": r.degree, "p0": r.p0, "residual": r.residual, "dof": r.dof}))
        .collect()
}

/// Crossing fits of each replicate (one curve list per replicate), their
/// combination, the degree table and the slope exponent of the first.
fn crossing_report(replicates: &[Vec<FitCurve>], fit: &FitArgs) -> Result<Value, CliError> {
    let window = fit.window;
    let shift = if fit.shift {
        ShiftMode::On
    } else {
        ShiftMode::Off
    };
    let fits = replicates
        .iter()
        .map(|curves| crossing_fit(curves, fit.degree, window, shift))
        .collect::<Result<Vec<_>, _>>()
        .map_err(CliError::fit)?;
    for w in fits.iter().flat_map(|f| &f.warnings) {
        eprintln!("homperc: warning: {w}");
    }
    let summary: ReplicateSummary = combine_replicates(&fits).map_err(CliError::fit)?;
    let scan = degree_scan(
        &replicates[0],
        1..=fit.scan_max.max(fit.degree),
        window,
        shift,
    );
    let slope = match slope_scaling(&fits[0]) {
        Ok(s) => {
            json!({"alpha": s.alpha, "sigma": if s.sigma.is_finite() { json!(s.sigma) } else { json!("inf") }, "b": s.b, "warnings": s.warnings})
        }
        Err(e) => json!({"error": e.to_string()}),
    };
    let mut v = fit_json(&fits[0]);
    let obj = v.as_object_mut().expect("object");
    obj.insert("p0".into(), json!(summary.p0));
    obj.insert("sigma_p0".into(), json!(summary.sigma));
    obj.insert("replicate_p0".into(), json!(summary.replicates));
    obj.insert("replicate_spread".into(), json!(summary.spread));
    obj.insert("replicate_fits".into(), fits.iter().map(fit_json).collect());
    obj.insert("degree_scan".into(), degree_rows(&scan));
    obj.insert("slope_scaling".into(), slope);
    Ok(v)
}

/// Master seed of graph `g` in replicate `r`.
pub fn pipeline_seed(seed: u64, replicate: u64, graph: usize) -> u64 {
    attempt_seed(seed.wrapping_add(replicate), graph as u64)
}

fn pipeline(args: &Pipeline) -> Result<(), CliError> {
    let cfg = RunConfig::new("pipeline", serde_json::to_value(args).expect("json"));
    if args.replicates == 0 {
        return Err(CliError::Usage("need at least one replicate".into()));
    }
    let mut graphs: Vec<(String, DualPair)> = Vec::new();
    for &l in &args.tori {
        graphs.push((format!("torus{l}"), build_torus(l, l)?));
    }
    for path in &args.graphs {
        let (pair, _) = hpg::load(path)?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        graphs.push((name, pair));
    }
    if graphs.len() < 2 {
        return Err(CliError::Usage("pipeline needs at least two graphs".into()));
    }
    let search = DistanceArgs {
        trials: 0,
        seed: args.run.seed,
        exact_limit: 0,
        threads: args.run.threads,
    };
    let mut dists = Vec::new();
    for (name, pair) in &graphs {
        let info = distances(pair, &search, true)?;
        let d = info["dZ"].as_u64().map(|d| d as usize);
        if args.fit.shift && d.is_none() {
            return Err(CliError::Validation(format!(
                "{name}: shift needs a distance but k = 0"
            )));
        }
        dists.push(d.unwrap_or(0));
    }
    let cfg_value = cfg.value();
    let mut replicate_curves = Vec::new();
    let mut s1_curves = Vec::new();
    for r in 0..args.replicates {
        let mut curves = Vec::new();
        for (g, (name, pair)) in graphs.iter().enumerate() {
            let series = simulate(pair, &args.run, pipeline_seed(args.run.seed, r, g));
            let stem = format!("{name}_r{r}");
            table::write(
                &args.out_dir.join(format!("{stem}_canonical.csv")),
                &table::series_to_string(&series, &cfg_value),
            )?;
            let mut curve = convolve_checked(&series, &args.grid)?;
            curve.id = name.clone();
            table::write(
                &args.out_dir.join(format!("{stem}_curve.csv")),
                &table::curve_to_string(&curve, &cfg_value),
            )?;
            curves.push(FitCurve::pe(&curve, dists[g]));
            if r == 0 {
                s1_curves.push(FitCurve::s1(&curve));
            }
        }
        replicate_curves.push(curves);
    }
    let mut result = crossing_report(&replicate_curves, &args.fit)?;
    let scaling = match size_scaling_extrapolate(&s1_curves, &args.omegas, args.scaling_degree) {
        Ok(s) => scaling_json(&s),
        Err(e) => json!({"error": e.to_string()}),
    };
    let obj = result.as_object_mut().expect("object");
    obj.insert("size_scaling".into(), scaling);
    obj.insert(
        "graphs".into(),
        graphs
            .iter()
            .zip(&dists)
            .map(|((name, pair), d)| json!({"name": name, "n": pair.primal().num_edges(), "d": d}))
            .collect(),
    );
    stamp(&mut result, &cfg);
    emit(Some(&args.out_dir.join("fit.json")), &result)?;
    emit(None, &result)
}
