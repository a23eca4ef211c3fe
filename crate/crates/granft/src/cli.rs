//! Command-line front end: grid sampling, transforms of demo functions,
//! equilibrium/stability reports, and method-comparison solves, all emitted
//! as deterministic CSV.

use crate::config::RunConfig;
use crate::csvout::{self, ComparisonRow, RmsRow};
use crate::error::{Error, Result};
use crate::ftransform::{
    cubic_band, fine_rule, ftransform, granular_ftransform, SampledFuzzyFunction,
};
use crate::granular::{hmf_from_triangular, GridSpec, TriangularFuzzyNumber};
use crate::model::{
    equilibria, local_stability, lyapunov_check, simulate, EquilibriumLabel, SolveMethod,
    ALL_EQUILIBRIA, STATE_NAMES,
};
use crate::ode::{rms_error, FuzzyTrajectory};
use crate::partition::FuzzyPartition;
use clap::{Parser, Subcommand};
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "granft",
    version,
    about = "Granular fuzzy arithmetic, fuzzy-partition transforms, and a two-prey/one-predator fuzzy model"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the horizontal membership grid of a triangular number "(l,p,r)"
    Hmf {
        /// Triangular fuzzy number in the form "(l,p,r)"
        number: String,
        /// Comma-separated alpha levels (default 0,0.5,1)
        #[arg(long)]
        alphas: Option<String>,
        /// Comma-separated mu values (default 0,0.4,0.6,1)
        #[arg(long)]
        mus: Option<String>,
        /// Write CSV into this directory instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Transform a demo function against a uniform partition
    Ftransform {
        /// Demo function: "const:<v>", "linear", or "example3_1"
        #[arg(long, default_value = "example3_1")]
        demo: String,
        /// Node count of the partition
        #[arg(long, default_value_t = 4)]
        m: usize,
        /// Left interval endpoint
        #[arg(long, default_value_t = 0.0)]
        a: f64,
        /// Right interval endpoint
        #[arg(long, default_value_t = 3.0)]
        b: f64,
        #[arg(long)]
        alphas: Option<String>,
        #[arg(long)]
        mus: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form equilibria of a model configuration across its grid
    Equilibria {
        /// Bundled config name or TOML path
        #[arg(long)]
        config: String,
        #[arg(long)]
        alphas: Option<String>,
        #[arg(long)]
        mus: Option<String>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Integrate a model configuration and compare methods
    Solve {
        #[arg(long)]
        config: String,
        /// Comma-separated subset of reference,euler,ft-midpoint
        #[arg(long)]
        method: Option<String>,
        /// Step size override
        #[arg(long)]
        h: Option<f64>,
        /// Horizon override
        #[arg(long = "t-end")]
        t_end: Option<f64>,
        #[arg(long)]
        alphas: Option<String>,
        #[arg(long)]
        mus: Option<String>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Eigenvalue and closed-form stability report with a Lyapunov check
    Stability {
        #[arg(long)]
        config: String,
        #[arg(long)]
        alphas: Option<String>,
        #[arg(long)]
        mus: Option<String>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Write every bundled reproduction table
    Tables {
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

fn parse_axis(text: &str, name: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|e| Error::Parse(format!("bad {name} entry \"{s}\": {e}")))
        })
        .collect()
}

fn spec_from_flags(
    alphas: &Option<String>,
    mus: &Option<String>,
    fallback: GridSpec,
) -> Result<GridSpec> {
    match (alphas, mus) {
        (None, None) => Ok(fallback),
        _ => {
            let a = match alphas {
                Some(t) => parse_axis(t, "alpha")?,
                None => fallback.alphas().to_vec(),
            };
            let m = match mus {
                Some(t) => parse_axis(t, "mu")?,
                None => fallback.mus().to_vec(),
            };
            GridSpec::new(a, m)
        }
    }
}

fn emit(out: &Option<PathBuf>, filename: &str, content: &str) -> Result<()> {
    match out {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(dir) => write_file(dir, filename, content),
    }
}

fn write_file(dir: &Path, filename: &str, content: &str) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(filename);
    std::fs::write(&path, content)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_hmf(
    number: &str,
    alphas: &Option<String>,
    mus: &Option<String>,
    out: &Option<PathBuf>,
) -> Result<()> {
    let t: TriangularFuzzyNumber = number.parse()?;
    let spec = spec_from_flags(alphas, mus, GridSpec::default())?;
    let grid = hmf_from_triangular(&t, &spec);
    emit(out, "hmf.csv", &csvout::grid_csv(&grid))
}

fn cmd_ftransform(
    demo: &str,
    m: usize,
    a: f64,
    b: f64,
    alphas: &Option<String>,
    mus: &Option<String>,
    out: &Option<PathBuf>,
) -> Result<()> {
    let p = FuzzyPartition::uniform(a, b, m)?;
    let rule = fine_rule();
    if let Some(rest) = demo.strip_prefix("const:") {
        let c: f64 = rest
            .parse()
            .map_err(|e| Error::Parse(format!("bad constant \"{rest}\": {e}")))?;
        let comps = ftransform(|_| c, &p, rule);
        return emit(out, "components.csv", &csvout::crisp_components_csv(&comps));
    }
    match demo {
        "linear" => {
            let comps = ftransform(|u| u, &p, rule);
            emit(out, "components.csv", &csvout::crisp_components_csv(&comps))
        }
        "example3_1" => {
            let spec = spec_from_flags(alphas, mus, GridSpec::default())?;
            let g = SampledFuzzyFunction::from_triangular_fn(&p, rule, &spec, cubic_band)?;
            let comps = granular_ftransform(&g, &p, rule)?;
            emit(
                out,
                "components.csv",
                &csvout::granular_components_csv(&comps),
            )
        }
        other => Err(Error::Validation(format!(
            "unknown demo \"{other}\" (expected const:<v>, linear, or example3_1)"
        ))),
    }
}

/// (mu, alpha) pairs in table order: mu outer, alpha inner.
fn table_points(spec: &GridSpec) -> Vec<(f64, f64)> {
    let mut pts = Vec::with_capacity(spec.len());
    for &mu in spec.mus() {
        for &alpha in spec.alphas() {
            pts.push((mu, alpha));
        }
    }
    pts
}

fn equilibrium_rows(
    cfg: &RunConfig,
    label: EquilibriumLabel,
) -> Vec<(f64, f64, [f64; 3], bool)> {
    table_points(&cfg.grid)
        .into_iter()
        .map(|(mu, alpha)| {
            let eq = equilibria(&cfg.params.slice(alpha, mu))[label as usize];
            (mu, alpha, eq.point, eq.exists)
        })
        .collect()
}

fn cmd_equilibria(
    config: &str,
    alphas: &Option<String>,
    mus: &Option<String>,
    out: &Path,
) -> Result<()> {
    let mut cfg = RunConfig::load(config)?;
    cfg.grid = spec_from_flags(alphas, mus, cfg.grid)?;
    let mut content = String::from(
        "label,mu,alpha,exists,p,q,r,p_full,q_full,r_full\n",
    );
    for label in ALL_EQUILIBRIA {
        for (mu, alpha, pt, exists) in equilibrium_rows(&cfg, label) {
            content.push_str(&format!(
                "{label},{},{},{},{},{},{},{},{},{}\n",
                csvout::fmt_full(mu),
                csvout::fmt_full(alpha),
                exists,
                csvout::fmt4(pt[0]),
                csvout::fmt4(pt[1]),
                csvout::fmt4(pt[2]),
                csvout::fmt_full(pt[0]),
                csvout::fmt_full(pt[1]),
                csvout::fmt_full(pt[2]),
            ));
        }
    }
    write_file(out, &format!("{}_equilibria.csv", cfg.name), &content)
}

struct SolveOutput {
    partition: FuzzyPartition,
    reference: Option<FuzzyTrajectory>,
    euler: Option<FuzzyTrajectory>,
    ft_midpoint: Option<FuzzyTrajectory>,
}

fn run_solve(cfg: &RunConfig, methods: &[SolveMethod]) -> Result<SolveOutput> {
    let p = cfg.solve.partition()?;
    let mut out = SolveOutput {
        partition: p.clone(),
        reference: None,
        euler: None,
        ft_midpoint: None,
    };
    for &method in methods {
        let tr = simulate(&cfg.params, &cfg.grid, &p, method)?;
        match method {
            SolveMethod::Reference { .. } => out.reference = Some(tr),
            SolveMethod::Euler => out.euler = Some(tr),
            SolveMethod::FtMidpoint => out.ft_midpoint = Some(tr),
        }
    }
    Ok(out)
}

/// Six evenly spaced report nodes, endpoints included.
fn report_nodes(p: &FuzzyPartition) -> Vec<usize> {
    let m = p.m();
    let mut nodes: Vec<usize> = (0..=5).map(|k| k * (m - 1) / 5).collect();
    nodes.dedup();
    nodes
}

fn state_at(tr: &FuzzyTrajectory, node: usize, ai: usize, mi: usize) -> [f64; 3] {
    [
        tr.value(0, node).value(ai, mi),
        tr.value(1, node).value(ai, mi),
        tr.value(2, node).value(ai, mi),
    ]
}

fn comparison_rows(cfg: &RunConfig, solved: &SolveOutput) -> Vec<ComparisonRow> {
    let (reference, euler, ft) = match (&solved.reference, &solved.euler, &solved.ft_midpoint) {
        (Some(r), Some(e), Some(f)) => (r, e, f),
        _ => return Vec::new(),
    };
    let spec = &cfg.grid;
    let mut rows = Vec::new();
    for (mi, &mu) in spec.mus().iter().enumerate() {
        for (ai, &alpha) in spec.alphas().iter().enumerate() {
            for &node in &report_nodes(&solved.partition) {
                rows.push(ComparisonRow {
                    mu,
                    alpha,
                    u: solved.partition.node(node),
                    reference: state_at(reference, node, ai, mi),
                    euler: state_at(euler, node, ai, mi),
                    ft_midpoint: state_at(ft, node, ai, mi),
                });
            }
        }
    }
    rows
}

fn rms_rows(cfg: &RunConfig, solved: &SolveOutput) -> Result<Vec<RmsRow>> {
    let (reference, euler, ft) = match (&solved.reference, &solved.euler, &solved.ft_midpoint) {
        (Some(r), Some(e), Some(f)) => (r, e, f),
        _ => return Ok(Vec::new()),
    };
    let spec = &cfg.grid;
    let mut rows = Vec::new();
    for (mi, &mu) in spec.mus().iter().enumerate() {
        for (ai, &alpha) in spec.alphas().iter().enumerate() {
            for (var, name) in STATE_NAMES.iter().enumerate() {
                let exact = reference.slice_series(var, ai, mi);
                rows.push(RmsRow {
                    mu,
                    alpha,
                    state: name,
                    euler: rms_error(&euler.slice_series(var, ai, mi), &exact)?,
                    ft_midpoint: rms_error(&ft.slice_series(var, ai, mi), &exact)?,
                });
            }
        }
    }
    Ok(rows)
}

#[allow(clippy::too_many_arguments)]
fn cmd_solve(
    config: &str,
    method: &Option<String>,
    h: Option<f64>,
    t_end: Option<f64>,
    alphas: &Option<String>,
    mus: &Option<String>,
    out: &Path,
) -> Result<()> {
    let mut cfg = RunConfig::load(config)?;
    cfg.grid = spec_from_flags(alphas, mus, cfg.grid)?;
    if let Some(h) = h {
        cfg.solve.h = h;
    }
    if let Some(t) = t_end {
        cfg.solve.t_end = t;
    }
    let methods = match method {
        None => cfg.solve.methods.clone(),
        Some(text) => text
            .split(',')
            .map(|s| {
                let mut m: SolveMethod = s.trim().parse()?;
                if let SolveMethod::Reference { refinement } = &mut m {
                    *refinement = cfg.solve.refinement;
                }
                Ok(m)
            })
            .collect::<Result<Vec<_>>>()?,
    };
    let solved = run_solve(&cfg, &methods)?;
    for (tr, method) in [
        (&solved.reference, "reference"),
        (&solved.euler, "euler"),
        (&solved.ft_midpoint, "ft_midpoint"),
    ] {
        if let Some(tr) = tr {
            write_file(
                out,
                &format!("{}_trajectory_{method}.csv", cfg.name),
                &csvout::trajectory_csv(tr, &STATE_NAMES),
            )?;
        }
    }
    let comparison = comparison_rows(&cfg, &solved);
    if !comparison.is_empty() {
        write_file(
            out,
            &format!("{}_comparison.csv", cfg.name),
            &csvout::comparison_csv(&comparison),
        )?;
        let rms = rms_rows(&cfg, &solved)?;
        write_file(out, &format!("{}_rms.csv", cfg.name), &csvout::rms_csv(&rms))?;
        let violations = rms.iter().filter(|r| r.ft_midpoint > r.euler).count();
        println!(
            "rms summary: ft-midpoint <= euler in {}/{} series",
            rms.len() - violations,
            rms.len()
        );
    }
    Ok(())
}

fn cmd_stability(
    config: &str,
    alphas: &Option<String>,
    mus: &Option<String>,
    out: &Path,
) -> Result<()> {
    let mut cfg = RunConfig::load(config)?;
    cfg.grid = spec_from_flags(alphas, mus, cfg.grid)?;
    let mut stab_rows = Vec::new();
    let mut lyap_rows = Vec::new();
    for (mu, alpha) in table_points(&cfg.grid) {
        let ps = cfg.params.slice(alpha, mu);
        for entry in local_stability(&ps) {
            stab_rows.push((mu, alpha, entry));
        }
        let e7 = equilibria(&ps)[7];
        if e7.exists {
            let inner = e7.point.map(|x| x * 0.9);
            let outer = e7.point.map(|x| x * 1.1);
            lyap_rows.push((mu, alpha, lyapunov_check(&ps, &[inner, outer])?));
        }
    }
    write_file(
        out,
        &format!("{}_stability.csv", cfg.name),
        &csvout::stability_csv(&stab_rows),
    )?;
    if !lyap_rows.is_empty() {
        write_file(
            out,
            &format!("{}_lyapunov.csv", cfg.name),
            &csvout::lyapunov_csv(&lyap_rows),
        )?;
    }
    let disagreements = stab_rows
        .iter()
        .filter(|(_, _, e)| e.agrees == Some(false))
        .count();
    println!(
        "stability summary: {} closed-form/eigenvalue disagreements across {} entries",
        disagreements,
        stab_rows.len()
    );
    Ok(())
}

fn cmd_tables(out: &Path) -> Result<()> {
    let equilibrium_tables = [
        ("table1.csv", "example4_1", EquilibriumLabel::E4),
        ("table2.csv", "example4_2", EquilibriumLabel::E5),
        ("table3.csv", "example4_3", EquilibriumLabel::E6),
        ("table4.csv", "example4_4", EquilibriumLabel::E7),
    ];
    for (file, config, label) in equilibrium_tables {
        let cfg = RunConfig::load(config)?;
        let rows = equilibrium_rows(&cfg, label);
        write_file(out, file, &csvout::equilibrium_table_csv(&rows))?;
    }

    let cfg = RunConfig::load("example5_1")?;
    let solved = run_solve(&cfg, &cfg.solve.methods)?;
    let comparison = comparison_rows(&cfg, &solved);
    for (file, alpha) in [
        ("table5.csv", 0.0),
        ("table6.csv", 0.5),
        ("table7.csv", 1.0),
    ] {
        let rows: Vec<_> = comparison
            .iter()
            .filter(|r| r.alpha == alpha && (alpha != 1.0 || r.mu == cfg.grid.mus()[0]))
            .map(|r| ComparisonRow { ..*r })
            .collect();
        write_file(out, file, &csvout::comparison_csv(&rows))?;
    }
    write_file(
        out,
        "table8.csv",
        &csvout::rms_csv(&rms_rows(&cfg, &solved)?),
    )?;
    Ok(())
}

fn dispatch(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::Hmf {
            number,
            alphas,
            mus,
            out,
        } => cmd_hmf(number, alphas, mus, out),
        Command::Ftransform {
            demo,
            m,
            a,
            b,
            alphas,
            mus,
            out,
        } => cmd_ftransform(demo, *m, *a, *b, alphas, mus, out),
        Command::Equilibria {
            config,
            alphas,
            mus,
            out,
        } => cmd_equilibria(config, alphas, mus, out),
        Command::Solve {
            config,
            method,
            h,
            t_end,
            alphas,
            mus,
            out,
        } => cmd_solve(config, method, *h, *t_end, alphas, mus, out),
        Command::Stability {
            config,
            alphas,
            mus,
            out,
        } => cmd_stability(config, alphas, mus, out),
        Command::Tables { out } => cmd_tables(out),
    }
}

/// Parses arguments and runs; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_parsing() {
        assert_eq!(parse_axis("0,0.5,1", "alpha").unwrap(), vec![0.0, 0.5, 1.0]);
        assert!(parse_axis("0,x,1", "alpha").is_err());
    }

    #[test]
    fn spec_flags_override_fallback() {
        let spec = spec_from_flags(
            &Some("0,1".into()),
            &None,
            GridSpec::default(),
        )
        .unwrap();
        assert_eq!(spec.alphas(), &[0.0, 1.0]);
        assert_eq!(spec.mus(), GridSpec::default().mus());
    }

    #[test]
    fn report_nodes_cover_the_horizon() {
        let p = FuzzyPartition::uniform(0.0, 1.0, 101).unwrap();
        let nodes = report_nodes(&p);
        assert_eq!(nodes, vec![0, 20, 40, 60, 80, 100]);
    }
}
