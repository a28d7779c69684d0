use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use djet_cli::{parse_point, run_compare, run_eval, CliError, EvalOptions, Format, ModelSpec, Pipeline, SampleConfig, Selector};

/// Verify and evaluate the deformed Berwald–Moór geometry on J¹*(ℝ, M⁴).
///
/// Set DJET_LOG (error, warn, info, debug, trace) for diagnostics on stderr.
#[derive(Parser)]
#[command(name = "djet", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ModelArgs {
    /// Conformal factor σ(x1..x4).
    #[arg(long)]
    sigma: String,
    /// Time metric h11(t), positive.
    #[arg(long)]
    h11: String,
    /// Hamiltonian H*(t, x, p) for the generic pipeline instead of the one built from σ.
    #[arg(long)]
    hamiltonian: Option<String>,
    /// Einstein constant.
    #[arg(long, default_value_t = 1.0)]
    kappa: f64,
}

impl ModelArgs {
    fn spec(&self) -> ModelSpec {
        let mut spec = ModelSpec::new(&self.sigma, &self.h11);
        spec.hamiltonian = self.hamiltonian.clone();
        spec.einstein_constant = self.kappa;
        spec
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum PipelineArg {
    Generic,
    ClosedForm,
}

#[derive(Subcommand)]
enum Command {
    /// Compare the generic pipeline with the closed forms at sampled points.
    Compare {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        tol_rel: Option<f64>,
        #[arg(long)]
        tol_abs: Option<f64>,
        /// Log-uniform momentum bounds.
        #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
        p_range: Option<Vec<f64>>,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
        x_range: Option<Vec<f64>>,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
        t_range: Option<Vec<f64>>,
        /// Write the JSON report here ("-" for stdout).
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Print geometric objects at one point.
    Eval {
        #[command(flatten)]
        model: ModelArgs,
        /// For example "t=0,x=[0,0,0,0],p=[1,1,1,1]".
        #[arg(long)]
        point: String,
        /// Comma-separated: g, ginv, N, cartan, torsion, curvature, ricci, sc, einstein, em.
        #[arg(long, value_delimiter = ',', default_value = "g")]
        objects: Vec<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
        #[arg(long, value_enum, default_value = "generic")]
        pipeline: PipelineArg,
    },
}

fn pair(v: Option<Vec<f64>>, default: (f64, f64)) -> (f64, f64) {
    v.map_or(default, |v| (v[0], v[1]))
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Compare { model, count, seed, tol_rel, tol_abs, p_range, x_range, t_range, json } => {
            let mut config = SampleConfig::new(seed, count);
            config.p_range = pair(p_range, config.p_range);
            config.x_range = pair(x_range, config.x_range);
            config.t_range = pair(t_range, config.t_range);
            config.tolerances.rel = tol_rel.unwrap_or(config.tolerances.rel);
            config.tolerances.abs = tol_abs.unwrap_or(config.tolerances.abs);
            let started = std::time::Instant::now();
            let report = run_compare(&config, &model.spec())?;
            log::info!("compare finished in {:.2?}", started.elapsed());
            match json {
                Some(path) if path.as_os_str() == "-" => print!("{}", report.to_json()),
                Some(path) => {
                    std::fs::write(&path, report.to_json())?;
                    print!("{report}");
                }
                None => print!("{report}"),
            }
            Ok(report.passed())
        }
        Command::Eval { model, point, objects, format, pipeline } => {
            let selectors = objects.iter().map(|s| s.parse()).collect::<Result<Vec<Selector>, _>>()?;
            let opts = EvalOptions {
                selectors,
                format: match format {
                    FormatArg::Json => Format::Json,
                    FormatArg::Text => Format::Text,
                },
                pipeline: match pipeline {
                    PipelineArg::Generic => Pipeline::Generic,
                    PipelineArg::ClosedForm => Pipeline::ClosedForm,
                },
            };
            print!("{}", run_eval(&model.spec(), &parse_point(&point)?, &opts)?);
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("DJET_LOG", "warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("djet: {e}");
            ExitCode::from(2)
        }
    }
}
