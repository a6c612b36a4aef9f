use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use shilov::pipeline::{
    build_and_write, hull_test, parse_point, plot_manifest, verify_manifest, InjectedPair, PlotKind, RunConfig,
};

#[derive(Parser)]
#[command(version, about = "Finite-stage hull construction in the closed bidisk")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct stages, sample varieties, verify, and write the run.
    Build {
        /// TOML run configuration; flags override its values.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        stages: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Extra pair `<poly-record>:<re>,<im>`, tried before the enumeration.
        #[arg(long, value_name = "POLY:RE,IM")]
        inject: Vec<String>,
    },
    /// Re-run the verification suite on a written run.
    Verify {
        /// Path to manifest.json.
        manifest: PathBuf,
    },
    /// Search for a polynomial separating a point from a cloud.
    HullTest {
        /// Target point `re_z,im_z,re_w,im_w`.
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        /// Cloud CSV file.
        #[arg(long)]
        cloud: PathBuf,
        #[arg(long, default_value_t = 4)]
        degree: u32,
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write SVG plots of a run.
    Plot {
        manifest: PathBuf,
        /// Any of proj1, proj2, gaps.
        #[arg(long, value_delimiter = ',', default_value = "proj1,proj2,gaps")]
        which: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> shilov::Result<i32> {
    match cli.command {
        Command::Build {
            config,
            stages,
            seed,
            out,
            inject,
        } => {
            let mut cfg = match config {
                Some(p) => RunConfig::load(&p)?,
                None => RunConfig::default(),
            };
            if let Some(s) = stages {
                cfg.stages = s;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(o) = out {
                cfg.output_dir = o;
            }
            for text in &inject {
                cfg.injected_pairs.push(InjectedPair::parse(text)?);
            }
            cfg.validate()?;
            let (art, path) = build_and_write(&cfg)?;
            let m = &art.manifest;
            for s in &m.stages {
                let n = s.exponent.map(|e| e.n.to_string()).unwrap_or_else(|| "-".into());
                println!("stage {}: p = {}, a = {}, N = {n}, |K| = {}", s.index, s.poly, s.a, s.k_points);
            }
            println!(
                "limit: stages {:?}, |V| = {}, |Y| = {}",
                m.limit.chosen_indices.iter().map(|i| i + 1).collect::<Vec<_>>(),
                m.limit.v_points,
                m.limit.y_points
            );
            print!("{}", m.report.table());
            println!("manifest: {}", path.display());
            Ok(art.exit_code())
        }
        Command::Verify { manifest } => {
            let out = verify_manifest(&manifest)?;
            print!("{}", out.report.table());
            if out.reproduces_build() {
                println!("report reproduces the build");
            } else {
                println!("report differs from the build in: {}", out.mismatches.join(", "));
            }
            Ok(out.exit_code())
        }
        Command::HullTest {
            target,
            cloud,
            degree,
            budget,
            seed,
        } => {
            let q = parse_point(&target)?;
            let h = hull_test(&q, &cloud, degree, budget, seed)?;
            match h.certificate() {
                Some(c) => println!("certificate: {}\nmargin: {:.12e}", c.describe(), c.margin),
                None => println!(
                    "consistent with hull membership (best margin {:.3e} after {} evaluations)",
                    h.best.margin, h.evaluations
                ),
            }
            Ok(0)
        }
        Command::Plot { manifest, which, out } => {
            let kinds = which.iter().map(|s| s.parse::<PlotKind>()).collect::<shilov::Result<Vec<_>>>()?;
            let dir = out.unwrap_or_else(|| manifest.parent().map(|p| p.join("plots")).unwrap_or_else(|| "plots".into()));
            for p in plot_manifest(&manifest, &kinds, &dir)? {
                println!("{}", p.display());
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
