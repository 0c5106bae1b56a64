use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use qtl_core::assoc::{sharp, TopologyPair};
use qtl_core::fincat::FinSet;
use qtl_core::instance::{Bounds, Instance};
use qtl_core::quasispace::{enumerate_qspaces, exponential_q, limits_colimits_q, QCategory, QDiagram, QSpace};
use qtl_core::report::Report;
use qtl_core::site::validate_pretopology;
use qtl_core::strictq::{coreflection_s, reflection_l, right_adjoint_r, ClassicalData};
use qtl_core::suites::{report_bounds, run_sharp_suite, run_suite};

#[derive(Parser)]
#[command(name = "qtl", version, about = "Quasispaces over finite sites: construct and verify")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Instance file (JSON).
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    bound_base: Option<usize>,
    #[arg(long)]
    bound_legs: Option<usize>,
    #[arg(long)]
    bound_universe: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Operation {
    Product,
    Exponential,
    Sharp,
    S,
    R,
    L,
}

#[derive(Subcommand)]
enum Command {
    /// Load an instance and check its site and declarations.
    Validate(Common),
    /// List every structure on a base set, given as `S=N` or `--size N`.
    Enumerate {
        #[command(flatten)]
        common: Common,
        size_arg: Option<String>,
        #[arg(long)]
        size: Option<usize>,
    },
    /// Evaluate a construction on declared quasispaces.
    Compute {
        #[command(flatten)]
        common: Common,
        operation: Operation,
        names: Vec<String>,
    },
    /// Run a verification suite (or `all`).
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        suite: Option<String>,
        suite_arg: Option<String>,
    },
    /// Compare against a coarser site on the same functor.
    Sharp {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        coarse: PathBuf,
        /// Quasispace of the coarse instance to carry over; otherwise run the checks.
        #[arg(long)]
        qspace: Option<String>,
    },
    /// Run every suite.
    Report(Common),
}

struct Loaded {
    inst: Instance,
    bounds: Bounds,
    format: Format,
}

fn load(common: &Common) -> Result<Loaded> {
    let inst = Instance::load(&common.instance).with_context(|| format!("loading {}", common.instance.display()))?;
    let mut bounds = inst.bounds;
    if let Some(b) = common.bound_base {
        bounds.base = b;
    }
    if let Some(b) = common.bound_legs {
        bounds.legs = b;
    }
    if let Some(b) = common.bound_universe {
        bounds.universe = b;
    }
    Ok(Loaded { inst, bounds, format: common.format })
}

enum Output {
    Report(Report),
    Artifact { text: String, json: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = run(cli.command);
    eprintln!("elapsed {:.2?}", start.elapsed());
    match result {
        Ok(passed) => {
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<bool> {
    let (format, output) = match command {
        Command::Validate(common) => {
            let l = load(&common)?;
            (l.format, Output::Report(validate(&l)))
        }
        Command::Enumerate { common, size_arg, size } => {
            let l = load(&common)?;
            let n = match (size_arg, size) {
                (Some(a), None) => parse_size(&a)?,
                (None, Some(n)) => n,
                (None, None) => bail!("give a size as S=N or --size N"),
                (Some(_), Some(_)) => bail!("give the size only once"),
            };
            (l.format, enumerate(&l, n)?)
        }
        Command::Compute { common, operation, names } => {
            let l = load(&common)?;
            (l.format, compute(&l, operation, &names)?)
        }
        Command::Verify { common, suite, suite_arg } => {
            let l = load(&common)?;
            let name = match (suite, suite_arg) {
                (Some(s), None) | (None, Some(s)) => s,
                (None, None) => bail!("name a suite with --suite"),
                (Some(_), Some(_)) => bail!("name the suite only once"),
            };
            (l.format, Output::Report(run_suite(&name, &l.inst, &l.bounds)?))
        }
        Command::Sharp { common, coarse, qspace } => {
            let l = load(&common)?;
            let coarse_inst =
                Instance::load(&coarse).with_context(|| format!("loading {}", coarse.display()))?;
            let output = match qspace {
                None => Output::Report(run_sharp_suite(&l.inst, &coarse_inst.site, &l.bounds)?),
                Some(name) => {
                    let q = coarse_inst
                        .qspace(&name)
                        .or_else(|_| l.inst.qspace(&name))?;
                    let pair = TopologyPair::new(coarse_inst.site.clone(), l.inst.site.clone())?;
                    artifact(&l.inst, "sharp", std::slice::from_ref(&name), &sharp(&pair, q)?)
                }
            };
            (l.format, output)
        }
        Command::Report(common) => {
            let l = load(&common)?;
            (l.format, Output::Report(run_suite("all", &l.inst, &l.bounds)?))
        }
    };
    let (passed, text, json) = match output {
        Output::Report(r) => (r.passed(), r.to_text(), r.to_json()),
        Output::Artifact { text, json } => (true, text, json),
    };
    match format {
        Format::Text => print!("{text}"),
        Format::Json => println!("{json}"),
    }
    Ok(passed)
}

fn parse_size(arg: &str) -> Result<usize> {
    let digits = arg.strip_prefix("S=").unwrap_or(arg);
    digits.parse().map_err(|_| anyhow!("expected S=N, got `{arg}`"))
}

fn validate(l: &Loaded) -> Report {
    let site = &l.inst.site;
    let label = l.inst.name.as_deref().unwrap_or("instance");
    let mut r = Report::new("validate", label, report_bounds(&l.bounds));
    let gens = validate_pretopology(site.category(), site.generators());
    r.push("generating covers satisfy (I), (C), (U)", gens.is_valid(), (!gens.is_valid()).then(|| gens.to_string()), None);
    let topology = validate_pretopology(site.category(), site.topology());
    r.push("saturated topology satisfies (I), (C), (U)", topology.is_valid(), (!topology.is_valid()).then(|| topology.to_string()), None);
    r.push("declared quasispaces are valid", true, None, Some(l.inst.qspaces.len()));
    r.note(format!(
        "{} objects, {} morphisms, covers {}surjective",
        site.category().object_count(),
        site.category().morphism_count(),
        if site.covers_are_surjective() { "" } else { "not " }
    ));
    r
}

fn enumerate(l: &Loaded, n: usize) -> Result<Output> {
    let site = &l.inst.site;
    let found = enumerate_qspaces(site, &FinSet::range(n), l.bounds.base)?;
    let described: Vec<String> = found.iter().map(|q| q.describe(site)).collect();
    let mut text = format!("{} structures on {n} elements\n", found.len());
    for d in &described {
        text.push_str(&format!("  {d}\n"));
    }
    let json = serde_json::to_string_pretty(&serde_json_value(n, &described)).expect("serializes");
    Ok(Output::Artifact { text, json })
}

fn serde_json_value(n: usize, described: &[String]) -> serde_json::Value {
    serde_json::json!({ "size": n, "count": described.len(), "structures": described })
}

fn compute(l: &Loaded, op: Operation, names: &[String]) -> Result<Output> {
    let site = &l.inst.site;
    let arity = match op {
        Operation::Product | Operation::Exponential => 2,
        _ => 1,
    };
    if names.len() != arity {
        bail!("this operation takes {arity} quasispace name(s), got {}", names.len());
    }
    let args: Vec<&QSpace> = names.iter().map(|n| l.inst.qspace(n)).collect::<Result<_, _>>()?;
    let (label, q) = match op {
        Operation::Product => {
            let u = limits_colimits_q(site, &QDiagram::Product(args[0].clone(), args[1].clone()))?;
            ("product", u.object)
        }
        Operation::Exponential => {
            let largest = args.iter().map(|q| q.size()).max().unwrap_or(0).max(l.bounds.universe);
            let universe = QCategory::new(site, largest.min(l.bounds.base.max(l.bounds.universe)))?;
            ("exponential", exponential_q(site, args[0], args[1], &universe)?.space)
        }
        Operation::Sharp => {
            let coarse = qtl_core::site::Site::trivial(site.functor().clone())?;
            let pair = TopologyPair::new(coarse, site.clone())?;
            ("sharp", sharp(&pair, args[0])?)
        }
        Operation::S => ("s", coreflection_s(args[0]).space),
        Operation::R => ("r", right_adjoint_r(site, args[0].base()).space),
        Operation::L => {
            if l.inst.points.is_empty() {
                bail!("the instance declares no points");
            }
            let data = ClassicalData::establish(site, &l.inst.points, l.bounds.base, l.bounds.legs)
                .map_err(|e| anyhow!("points are not classical: {e}"))?;
            ("l", reflection_l(&data, args[0]))
        }
    };
    Ok(artifact(&l.inst, label, names, &q))
}

fn artifact(inst: &Instance, op: &str, names: &[String], q: &QSpace) -> Output {
    let described = q.describe(&inst.site);
    let text = format!("{op}({}) = {described}\n", names.join(", "));
    let json = serde_json::json!({
        "operation": op,
        "arguments": names,
        "size": q.size(),
        "admissible": q.admissible_count(),
        "structure": described,
    });
    Output::Artifact { text, json: serde_json::to_string_pretty(&json).expect("serializes") }
}
