//! Command-line frontend for `abeltrans`.
//!
//! Every subcommand reads one instance from flags or a batch of instances
//! from a JSON document, and prints text or a JSON report with the fields
//! `task`, `verdict`, `witness`, `certificate` and `case_tag`.

pub mod report;
pub mod spec;
pub mod sweep;
pub mod tasks;

use std::path::PathBuf;

use abeltrans::oracle::DEFAULT_ORACLE_CAP;
use abeltrans::DEFAULT_ENUM_CAP;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::report::Report;
use crate::spec::{parse_document, Instance, ProblemSpec};
use crate::sweep::Caps;
use crate::tasks::{Failure, Family, OracleKind, Outcome, SweepOptions};

#[derive(Debug, Parser)]
#[command(name = "abeltrans", version, about = "Common transversals and complements in finite abelian groups")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Largest number of items an enumeration may produce.
    #[arg(long, env = "ABELTRANS_ENUM_CAP", default_value_t = DEFAULT_ENUM_CAP, global = true)]
    pub enum_cap: u64,
    /// Largest group the exhaustive oracle accepts.
    #[arg(long, env = "ABELTRANS_ORACLE_CAP", default_value_t = DEFAULT_ORACLE_CAP, global = true)]
    pub oracle_cap: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// The group and its named subgroups.
#[derive(Debug, Clone, Args)]
pub struct InstanceArgs {
    /// Cyclic factor orders, e.g. `4,2`.
    #[arg(long, conflicts_with = "input")]
    pub group: Option<String>,
    /// A named subgroup `NAME=g1;g2` with comma-separated residues.
    #[arg(long = "sub", value_name = "NAME=GENS")]
    pub subs: Vec<String>,
    /// JSON file holding one instance or an array of them (`-` for stdin).
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether three cyclic subgroups of equal order have a common transversal.
    Decide(InstanceArgs),
    /// Build a verified common transversal.
    Construct(InstanceArgs),
    /// Build a complement, or a common complement of several subgroups.
    ConstructComplement(InstanceArgs),
    /// Count the complements of one subgroup.
    CountComplements(InstanceArgs),
    /// Count common complements.
    CountCommon {
        #[command(flatten)]
        instance: InstanceArgs,
        /// The subgroup playing the extra direct factor `B`.
        #[arg(long)]
        factor: Option<String>,
    },
    /// Check a candidate common transversal.
    Verify {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Elements separated by `;`, residues by `,`.
        #[arg(long)]
        transversal: String,
    },
    /// Exhaustive search.
    Oracle {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, value_enum, default_value_t = OracleKind::Transversal)]
        kind: OracleKind,
        /// Subgroup order, for `--kind subgroups`.
        #[arg(long)]
        order: Option<u64>,
    },
    /// Run the constructive path and the oracle and report agreement.
    Compare(InstanceArgs),
    /// Exhaustive runs over families of small groups.
    Sweep {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        max_order: u64,
        /// Primes for `maximal-cyclic`.
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        primes: Vec<u64>,
        /// Largest family size for `maximal-cyclic`.
        #[arg(long, default_value_t = 4)]
        max_family: usize,
        /// Work per group above which `complements` checks one subgroup per
        /// isomorphism type.
        #[arg(long, default_value_t = sweep::COMPLEMENT_WORK_BUDGET)]
        work_budget: u64,
    },
}

/// Exit status and the text destined for stdout and stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn load(args: &InstanceArgs) -> Result<(Vec<ProblemSpec>, bool), Failure> {
    match (&args.group, &args.input) {
        (Some(group), None) => Ok((vec![ProblemSpec::from_flags(group, &args.subs)?], false)),
        (None, Some(path)) => {
            if !args.subs.is_empty() {
                return Err(Failure::Parse("--sub cannot be combined with --input".into()));
            }
            let text = if path.as_os_str() == "-" {
                std::io::read_to_string(std::io::stdin())
            } else {
                std::fs::read_to_string(path)
            }
            .map_err(|e| Failure::Parse(format!("cannot read {}: {e}", path.display())))?;
            let batch = text.trim_start().starts_with('[');
            Ok((parse_document(&text)?, batch))
        }
        _ => Err(Failure::Parse("give either --group or --input".into())),
    }
}

fn error_report(task: &str, failure: &Failure) -> Report {
    match failure {
        Failure::Disagreement(r) => (**r).clone(),
        f => {
            Report::new(task).verdict("error").certificate(json!({"exit_code": f.exit_code(), "message": f.message()}))
        }
    }
}

fn task_name(command: &Command) -> &'static str {
    match command {
        Command::Decide(_) => "decide",
        Command::Construct(_) => "construct",
        Command::ConstructComplement(_) => "construct-complement",
        Command::CountComplements(_) => "count-complements",
        Command::CountCommon { .. } => "count-common",
        Command::Verify { .. } => "verify",
        Command::Oracle { .. } => "oracle",
        Command::Compare(_) => "compare",
        Command::Sweep { .. } => "sweep",
    }
}

fn run_one(cli: &Cli, inst: &Instance) -> Outcome {
    let caps = Caps { oracle: cli.oracle_cap, enumeration: cli.enum_cap };
    match &cli.command {
        Command::Decide(_) => tasks::decide(inst),
        Command::Construct(_) => tasks::construct(inst, cli.enum_cap),
        Command::ConstructComplement(_) => tasks::construct_complement(inst),
        Command::CountComplements(_) => tasks::count_complements_task(inst, cli.enum_cap),
        Command::CountCommon { factor, .. } => tasks::count_common(inst, factor.as_deref()),
        Command::Verify { transversal, .. } => tasks::verify(inst, transversal),
        Command::Oracle { kind, order, .. } => tasks::oracle(inst, *kind, *order, cli.oracle_cap),
        Command::Compare(_) => tasks::compare(inst, caps),
        Command::Sweep { .. } => unreachable!("sweeps take no instance"),
    }
}

fn instance_args(command: &Command) -> Option<&InstanceArgs> {
    match command {
        Command::Decide(a)
        | Command::Construct(a)
        | Command::ConstructComplement(a)
        | Command::CountComplements(a)
        | Command::Compare(a) => Some(a),
        Command::CountCommon { instance, .. } | Command::Verify { instance, .. } | Command::Oracle { instance, .. } => {
            Some(instance)
        }
        Command::Sweep { .. } => None,
    }
}

/// Runs the parsed command line.
pub fn run(cli: &Cli) -> Output {
    let task = task_name(&cli.command);
    let (outcomes, batch) = match instance_args(&cli.command) {
        None => {
            let Command::Sweep { family, max_order, primes, max_family, work_budget } = &cli.command else {
                unreachable!()
            };
            let opts = SweepOptions {
                family: *family,
                max_order: *max_order,
                primes: primes.clone(),
                max_family: *max_family,
                work_budget: *work_budget,
            };
            let caps = Caps { oracle: cli.oracle_cap, enumeration: cli.enum_cap };
            (vec![tasks::run_sweep(&opts, caps)], false)
        }
        Some(args) => match load(args) {
            Err(f) => (vec![Err(f)], false),
            Ok((specs, batch)) => (
                specs.iter().map(|s| s.build().map_err(Failure::from).and_then(|inst| run_one(cli, &inst))).collect(),
                batch,
            ),
        },
    };
    render(cli.format, task, &outcomes, batch)
}

fn render(format: Format, task: &str, outcomes: &[Outcome], batch: bool) -> Output {
    let code = outcomes.iter().map(|o| o.as_ref().err().map_or(0, Failure::exit_code)).max().unwrap_or(0);
    let mut stdout = String::new();
    let mut stderr = String::new();
    match format {
        Format::Json => {
            let reports: Vec<Value> = outcomes
                .iter()
                .map(|o| {
                    let r = match o {
                        Ok(r) => r.clone(),
                        Err(f) => error_report(task, f),
                    };
                    serde_json::to_value(r).expect("reports serialize")
                })
                .collect();
            let doc = if batch { Value::Array(reports) } else { reports.into_iter().next().unwrap_or(Value::Null) };
            stdout = serde_json::to_string_pretty(&doc).expect("reports serialize");
            stdout.push('\n');
        }
        Format::Text => {
            for (i, o) in outcomes.iter().enumerate() {
                if batch {
                    stdout += &format!("# instance {i}\n");
                }
                match o {
                    Ok(r) => stdout += &r.render_text(),
                    Err(Failure::Disagreement(r)) => {
                        stdout += &r.render_text();
                        stderr += "error: constructive path and oracle disagree\n";
                    }
                    Err(f) => stderr += &format!("error: {}\n", f.message()),
                }
            }
        }
    }
    for o in outcomes {
        if let (Err(f), Format::Json) = (o, format) {
            stderr += &format!("error: {}\n", f.message());
        }
    }
    Output { code, stdout, stderr }
}
