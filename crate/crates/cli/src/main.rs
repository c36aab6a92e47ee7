use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cosetlab::cache::DEFAULT_CACHE_DIR;
use cosetlab::report::{self, catalog_lines, error_exit_code, Caps, Command, RunConfig};
use cosetlab::Error;

#[derive(Parser)]
#[command(
    name = "cosetlab",
    version,
    about = "Coset algebra and disjoint-coset verification over small finite groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the built-in groups with orders and subgroup counts.
    Catalog(Common),
    /// Search for k pairwise disjoint cosets with all index gcds below k.
    Verify(Common),
    /// Run the lemma property suite.
    Lemmas(Common),
    /// Coset-triple census for one subgroup triple, or all of them.
    Census {
        #[command(flatten)]
        common: Common,
        /// Lattice positions of the three subgroups, e.g. `1,4,4`.
        #[arg(long, value_parser = parse_triple)]
        triple: Option<[usize; 3]>,
    },
    /// List the subgroup lattice in canonical order.
    Subgroups(Common),
}

#[derive(Args)]
struct Common {
    /// Group spec file (groupspec-v1 JSON) or catalog name such as `S4`.
    #[arg(long)]
    group: Option<String>,
    /// Range of k, as `min..max` or a single value.
    #[arg(long, default_value = "2..4", value_parser = parse_k_range)]
    k: (usize, usize),
    /// Worker threads for the coset search.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, default_value = DEFAULT_CACHE_DIR)]
    cache_dir: PathBuf,
    /// Do not read or write the lattice cache.
    #[arg(long)]
    no_cache: bool,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Seed for sampled checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    max_order: Option<usize>,
    #[arg(long)]
    max_subgroups: Option<usize>,
    #[arg(long)]
    max_cliques: Option<usize>,
    #[arg(long)]
    max_census: Option<u64>,
}

fn parse_k_range(s: &str) -> Result<(usize, usize), String> {
    let parse = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("{x:?}: {e}"));
    match s.split_once("..") {
        Some((lo, hi)) => Ok((parse(lo)?, parse(hi.trim_start_matches('='))?)),
        None => parse(s).map(|k| (k, k)),
    }
}

fn parse_triple(s: &str) -> Result<[usize; 3], String> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|e| format!("{x:?}: {e}")))
        .collect::<Result<_, _>>()?;
    parts
        .try_into()
        .map_err(|_| "expected three comma-separated positions".to_string())
}

fn config(command: Command, common: Common, triple: Option<[usize; 3]>) -> RunConfig {
    let defaults = Caps::default();
    RunConfig {
        command,
        group: common.group,
        k_min: common.k.0,
        k_max: common.k.1,
        caps: Caps {
            order: common.max_order.unwrap_or(defaults.order),
            subgroups: common.max_subgroups.unwrap_or(defaults.subgroups),
            cliques: common.max_cliques.unwrap_or(defaults.cliques),
            census: common.max_census.unwrap_or(defaults.census),
        },
        jobs: common.jobs,
        cache_dir: (!common.no_cache).then_some(common.cache_dir),
        report: common.report,
        seed: common.seed,
        triple,
    }
}

fn run(config: &RunConfig) -> Result<i32, Error> {
    let doc = report::run(config)?;
    if config.command == Command::Catalog {
        for line in catalog_lines(&doc) {
            println!("{line}");
        }
        if let Some(path) = &config.report {
            doc.write_to(path)?;
        }
    } else {
        match &config.report {
            Some(path) => doc.write_to(path)?,
            None => println!("{}", doc.to_canonical_json()),
        }
    }
    let code = doc.exit_code();
    if code != 0 {
        log::error!(
            "report signals an implementation bug; see the violations or failures it lists"
        );
    }
    Ok(code)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let config = match cli.command {
        Cmd::Catalog(c) => config(Command::Catalog, c, None),
        Cmd::Verify(c) => config(Command::Verify, c, None),
        Cmd::Lemmas(c) => config(Command::Lemmas, c, None),
        Cmd::Census { common, triple } => config(Command::Census, common, triple),
        Cmd::Subgroups(c) => config(Command::Subgroups, c, None),
    };
    let code = match run(&config) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            error_exit_code(&e)
        }
    };
    ExitCode::from(code as u8)
}
