use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use jumpvix::harness::{
    self, parse_list, parse_strike_grid, resolve_output_path, ModelFile, ReproOptions, RunConfig,
    Scaling, SideSelection, StrikeSpec, TableId,
};
use jumpvix::{Error, MCConfig, Underlying};

/// Short-maturity asymptotics and Monte Carlo checks for VIX and equity options under jump models.
#[derive(Parser)]
#[command(name = "jumpvix", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Leading-order coefficients per strike.
    Asym(RunArgs),
    /// Monte Carlo prices per strike.
    Mc(RunArgs),
    /// Monte Carlo VIX forward.
    Forward(RunArgs),
    /// MC price / T against the coefficient across maturities.
    Converge(RunArgs),
    /// Compare against a built-in table; exits 2 if any cell fails.
    Reproduce(ReproduceArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum UnderlyingArg {
    Vix,
    Equity,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Otm,
    Call,
    Put,
    Both,
}

#[derive(Args)]
struct McArgs {
    #[arg(long)]
    paths: Option<usize>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    antithetic: bool,
}

impl McArgs {
    fn apply(&self, mut cfg: MCConfig) -> MCConfig {
        cfg.paths = self.paths.unwrap_or(cfg.paths);
        cfg.steps = self.steps.unwrap_or(cfg.steps);
        cfg.seed = self.seed.unwrap_or(cfg.seed);
        cfg.antithetic |= self.antithetic;
        cfg
    }
}

#[derive(Args)]
struct RunArgs {
    /// TOML model file.
    #[arg(long, conflicts_with = "table", required_unless_present = "table")]
    model: Option<PathBuf>,
    /// Built-in table id, e.g. eraker-vix.
    #[arg(long)]
    table: Option<String>,
    /// Defaults to the table's underlying, or equity with --model.
    #[arg(long, value_enum)]
    underlying: Option<UnderlyingArg>,
    /// Absolute strikes as a:b:step.
    #[arg(long, conflicts_with = "moneyness")]
    strikes: Option<String>,
    /// Comma-separated multiples of the ATM level.
    #[arg(long)]
    moneyness: Option<String>,
    #[arg(long, value_enum, default_value = "otm")]
    side: SideArg,
    #[arg(long)]
    maturity: Option<f64>,
    /// Comma-separated maturities for `converge`.
    #[arg(long)]
    maturities: Option<String>,
    #[command(flatten)]
    mc: McArgs,
    /// Output file (stdout when absent); relative paths honour JUMPVIX_OUT_DIR.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report values scaled by 1000 / lambda_c (the default).
    #[arg(long, conflicts_with = "raw")]
    scaled: bool,
    /// Report unscaled values.
    #[arg(long)]
    raw: bool,
}

#[derive(Args)]
struct ReproduceArgs {
    /// Built-in table id, or `all`.
    #[arg(long)]
    table: String,
    /// Skip the simulation columns.
    #[arg(long)]
    asym_only: bool,
    #[command(flatten)]
    mc: McArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Lib(Error),
    Reproduction,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn run_config(args: &RunArgs) -> Result<RunConfig, Failure> {
    let mut cfg = match (&args.model, &args.table) {
        (Some(path), _) => {
            let file = ModelFile::from_path(path)?;
            let underlying = match args.underlying {
                Some(UnderlyingArg::Vix) => Underlying::Vix,
                _ => Underlying::Equity,
            };
            RunConfig::from_file(file, underlying)
        }
        (None, Some(id)) => {
            let mut cfg = RunConfig::from_table(id.parse::<TableId>()?);
            if let Some(u) = args.underlying {
                cfg.underlying = match u {
                    UnderlyingArg::Vix => Underlying::Vix,
                    UnderlyingArg::Equity => Underlying::Equity,
                };
            }
            cfg
        }
        (None, None) => {
            return Err(Failure::Usage(
                "one of --model or --table is required".into(),
            ))
        }
    };
    if let Some(s) = &args.strikes {
        cfg.strikes = StrikeSpec::Absolute(parse_strike_grid(s)?);
    }
    if let Some(s) = &args.moneyness {
        cfg.strikes = StrikeSpec::Relative(parse_list(s)?);
    }
    cfg.sides = match args.side {
        SideArg::Otm => SideSelection::Otm,
        SideArg::Call => SideSelection::Call,
        SideArg::Put => SideSelection::Put,
        SideArg::Both => SideSelection::Both,
    };
    if let Some(t) = args.maturity {
        cfg.maturity = t;
    }
    if let Some(s) = &args.maturities {
        cfg.maturities = parse_list(s)?;
    }
    cfg.mc = args.mc.apply(cfg.mc);
    if args.raw {
        cfg.scaling = Scaling::Raw;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), Failure> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(p) => {
            let path = resolve_output_path(p);
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)
                    .map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
            }
            std::fs::write(&path, text)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
        }
    }
}

fn reproduce(args: &ReproduceArgs) -> Result<(), Failure> {
    let ids: Vec<TableId> = if args.table == "all" {
        TableId::ALL.to_vec()
    } else {
        vec![args.table.parse::<TableId>()?]
    };
    let mut text = String::new();
    let mut ok = true;
    for id in ids {
        let base = harness::fixture(id).mc;
        let opts = ReproOptions {
            asym_only: args.asym_only,
            mc: Some(args.mc.apply(base)),
        };
        let report = harness::reproduce(id, &opts)?;
        ok &= report.passed();
        text.push_str(&report.render());
    }
    emit(&text, args.out.as_ref())?;
    if ok {
        Ok(())
    } else {
        Err(Failure::Reproduction)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Asym(a) => emit(&harness::cmd_asym(&run_config(&a)?)?, a.out.as_ref()),
        Command::Mc(a) => emit(&harness::cmd_mc(&run_config(&a)?)?, a.out.as_ref()),
        Command::Forward(a) => emit(&harness::cmd_forward(&run_config(&a)?)?, a.out.as_ref()),
        Command::Converge(a) => emit(&harness::cmd_converge(&run_config(&a)?)?, a.out.as_ref()),
        Command::Reproduce(a) => reproduce(&a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(harness::exit_code(&e) as u8)
        }
        Err(Failure::Reproduction) => ExitCode::from(2),
    }
}
