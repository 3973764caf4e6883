use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};

use clap::{Args, Parser, Subcommand};

use tfed_core::hardness::{
    binpack_decide, binpack_parameters, gen_binpack, gen_hitting_dag, gen_split, hitting_decide,
    smallest_accepted_c, split_parameters, BinPackingInstance, GadgetFamily, HardnessError,
    HittingSetInstance,
};
use tfed_core::io::{parse_instance, parse_intervals, serialize_di_instance, serialize_instance, ParsedInstance};

mod report;
mod run;

use report::RunReport;
use run::SolveOptions;

/// Exact, parameterized and approximate solvers for bounded-component edge deletion.
#[derive(Parser)]
#[command(name = "tfed", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pick the most specific applicable solver and run it.
    Solve {
        #[command(flatten)]
        input: InputArgs,
        /// Largest cluster deletion set searched for.
        #[arg(long, default_value_t = 3)]
        cvd_budget: usize,
        /// Largest neighborhood diversity handed to the integer program.
        #[arg(long, default_value_t = 4)]
        nd_max: usize,
        /// Largest vertex count handed to the exact oracle.
        #[arg(long, default_value_t = 12)]
        oracle_max: usize,
        /// Interval model, one `low high` pair per vertex.
        #[arg(long)]
        intervals: Option<PathBuf>,
    },
    /// Exact optimum by bounded partition search.
    Oracle {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Bicriteria approximation.
    Approx {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Exact arc deletion on a directed instance.
    Arcs {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Structural statistics without solving.
    Analyze {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 3)]
        cvd_budget: usize,
    },
    /// Edge deletion instance from a bin packing instance.
    GenBinpack {
        #[command(flatten)]
        bins: BinArgs,
        #[arg(long, default_value = "clique")]
        family: GadgetFamily,
        #[arg(long, short)]
        output: PathBuf,
    },
    /// Split graph instance from a bin packing instance.
    GenSplit {
        #[command(flatten)]
        bins: BinArgs,
        /// Scaling factor; at least twice the squared item count.
        #[arg(long)]
        alpha: Option<u64>,
        #[arg(long, short)]
        output: PathBuf,
    },
    /// Directed acyclic arc deletion instance from a hitting set instance.
    GenHsdag {
        #[arg(long)]
        universe: usize,
        /// Sets separated by `;`, elements by `,`, for example `0,1;1,2`.
        #[arg(long, default_value = "")]
        sets: String,
        #[arg(long)]
        k: usize,
        /// Exponent of the reach bound; defaults to the smallest accepted value.
        #[arg(long)]
        c: Option<u32>,
        #[arg(long, short)]
        output: PathBuf,
    },
}

#[derive(Args)]
struct InputArgs {
    /// Instance file, or a directory of `.tfed` files.
    path: PathBuf,
    /// Worker threads when `path` is a directory.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Append wall-clock timings to the report.
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct BinArgs {
    /// Item sizes, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    #[arg(long)]
    bins: usize,
    #[arg(long)]
    capacity: usize,
}

impl BinArgs {
    fn instance(&self) -> BinPackingInstance {
        BinPackingInstance {
            sizes: self.sizes.clone(),
            bins: self.bins,
            capacity: self.capacity,
        }
    }
}

/// Failure that ends the run with status 2.
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn execute(command: Command) -> Result<String, UsageError> {
    match command {
        Command::Solve {
            input,
            cvd_budget,
            nd_max,
            oracle_max,
            intervals,
        } => {
            let intervals = match intervals {
                Some(p) => Some(parse_intervals(&read(&p)?).map_err(|e| UsageError(format!("{}: {e}", p.display())))?),
                None => None,
            };
            let opts = SolveOptions {
                cvd_budget,
                nd_max,
                oracle_max,
                intervals,
                timings: input.timings,
            };
            for_each_instance(&input, "solve", &|parsed| match parsed {
                ParsedInstance::Undirected(inst) => run::solve(inst, &opts),
                ParsedInstance::Directed(_) => wrong_kind("solve", "an undirected"),
            })
        }
        Command::Oracle { input } => for_each_instance(&input, "oracle", &|parsed| match parsed {
            ParsedInstance::Undirected(inst) => run::oracle(inst, input.timings),
            ParsedInstance::Directed(_) => wrong_kind("oracle", "an undirected"),
        }),
        Command::Approx { input } => for_each_instance(&input, "approx", &|parsed| match parsed {
            ParsedInstance::Undirected(inst) => run::approx(inst, input.timings),
            ParsedInstance::Directed(_) => wrong_kind("approx", "an undirected"),
        }),
        Command::Arcs { input } => for_each_instance(&input, "arcs", &|parsed| match parsed {
            ParsedInstance::Directed(inst) => run::arcs(inst, input.timings),
            ParsedInstance::Undirected(_) => wrong_kind("arcs", "a directed"),
        }),
        Command::Analyze { input, cvd_budget } => {
            for_each_instance(&input, "analyze", &|parsed| match parsed {
                ParsedInstance::Undirected(inst) => run::analyze(inst, cvd_budget),
                ParsedInstance::Directed(inst) => run::analyze_directed(inst),
            })
        }
        Command::GenBinpack { bins, family, output } => gen_binpack_cmd(&bins.instance(), family, &output),
        Command::GenSplit { bins, alpha, output } => gen_split_cmd(&bins.instance(), alpha, &output),
        Command::GenHsdag {
            universe,
            sets,
            k,
            c,
            output,
        } => {
            let family = parse_sets(&sets)?;
            let hs = HittingSetInstance { universe, family, k };
            gen_hsdag_cmd(&hs, c, &output)
        }
    }
}

fn wrong_kind(command: &str, expected: &str) -> RunReport {
    let mut report = RunReport::new(command);
    report.error = Some(format!("{command} needs {expected} instance"));
    report
}

fn read(path: &Path) -> Result<String, UsageError> {
    fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

/// Runs `f` on one file, or on every `.tfed` file of a directory in name
/// order. Reports are joined by blank lines in input order regardless of
/// the number of jobs.
fn for_each_instance(
    input: &InputArgs,
    command: &str,
    f: &(dyn Fn(&ParsedInstance) -> RunReport + Sync),
) -> Result<String, UsageError> {
    if !input.path.is_dir() {
        let text = read(&input.path)?;
        let parsed = parse_instance(&text).map_err(|e| UsageError(format!("{}: {e}", input.path.display())))?;
        return Ok(f(&parsed).to_text());
    }
    let mut files: Vec<PathBuf> = fs::read_dir(&input.path)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "tfed"))
        .collect();
    files.sort();
    let run_one = |path: &PathBuf| -> RunReport {
        let name = path.file_name().map(|s| s.to_string_lossy().into_owned());
        let mut report = match fs::read_to_string(path).map_err(|e| e.to_string()).and_then(|t| {
            parse_instance(&t).map_err(|e| e.to_string())
        }) {
            Ok(parsed) => f(&parsed),
            Err(e) => {
                let mut r = RunReport::new(command);
                r.error = Some(e);
                r
            }
        };
        report.file = name;
        report
    };
    let jobs = input.jobs.max(1).min(files.len().max(1));
    let next = AtomicUsize::new(0);
    let mut slots: Vec<Option<RunReport>> = vec![None; files.len()];
    let done: Vec<Vec<(usize, RunReport)>> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..jobs)
            .map(|_| {
                s.spawn(|| {
                    let mut mine = Vec::new();
                    loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        if i >= files.len() {
                            break mine;
                        }
                        mine.push((i, run_one(&files[i])));
                    }
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    for (i, r) in done.into_iter().flatten() {
        slots[i] = Some(r);
    }
    Ok(slots
        .into_iter()
        .map(|r| r.expect("every file is processed").to_text())
        .collect::<Vec<_>>()
        .join("\n"))
}

fn parse_sets(text: &str) -> Result<Vec<Vec<usize>>, UsageError> {
    text.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.split(',')
                .map(|x| {
                    x.trim()
                        .parse()
                        .map_err(|_| UsageError(format!("'{x}' is not an element identifier")))
                })
                .collect()
        })
        .collect()
}

fn answer(r: Result<bool, HardnessError>) -> &'static str {
    match r {
        Ok(true) => "yes",
        Ok(false) => "no",
        Err(_) => "unknown",
    }
}

/// Invalid source instances are usage errors; size limits are reported.
fn generator_error(report: &mut RunReport, e: HardnessError) -> Result<(), UsageError> {
    match e {
        HardnessError::InvalidInstance(_) | HardnessError::AlphaTooSmall { .. } => Err(UsageError(e.to_string())),
        other => {
            report.error = Some(other.to_string());
            Ok(())
        }
    }
}

fn write_outputs(output: &Path, instance: &str, meta: &[(&str, String)]) -> Result<(), UsageError> {
    fs::write(output, instance).map_err(|e| UsageError(format!("{}: {e}", output.display())))?;
    let meta_text: String = meta.iter().map(|(k, v)| format!("{k}: {v}\n")).collect();
    let mut meta_path = output.as_os_str().to_owned();
    meta_path.push(".meta");
    fs::write(&meta_path, meta_text).map_err(|e| UsageError(format!("{}: {e}", output.display())))?;
    Ok(())
}

fn bp_meta(bp: &BinPackingInstance) -> Vec<(&'static str, String)> {
    let sizes: Vec<String> = bp.sizes.iter().map(usize::to_string).collect();
    vec![
        ("sizes", sizes.join(" ")),
        ("bins", bp.bins.to_string()),
        ("capacity", bp.capacity.to_string()),
    ]
}

fn finish_generated(report: &mut RunReport, output: &Path, n: usize, m: usize, k: usize, h: usize, expected: &'static str) {
    report.file = Some(output.display().to_string());
    report.n = Some(n);
    report.m = Some(m);
    report.k = Some(k);
    report.h = Some(h);
    report.detail("expected", expected);
}

fn gen_binpack_cmd(bp: &BinPackingInstance, family: GadgetFamily, output: &Path) -> Result<String, UsageError> {
    let mut report = RunReport::new("gen-binpack");
    report.kind = Some("undirected");
    match gen_binpack(bp, family) {
        Ok(inst) => {
            let params = binpack_parameters(bp);
            let expected = answer(binpack_decide(bp));
            let mut meta = vec![("generator", "gen-binpack".to_string())];
            meta.extend(bp_meta(bp));
            meta.extend([
                ("family", family.name().to_string()),
                ("k", params.k.to_string()),
                ("h", params.h.to_string()),
                ("h_prime", params.h_prime.to_string()),
                ("expected", expected.to_string()),
            ]);
            write_outputs(output, &serialize_instance(&inst), &meta)?;
            finish_generated(&mut report, output, inst.graph.n(), inst.graph.m(), inst.k, inst.h, expected);
            report.detail("family", family.name());
            report.detail("h_prime", params.h_prime);
        }
        Err(e) => generator_error(&mut report, e)?,
    }
    Ok(report.to_text())
}

fn gen_split_cmd(bp: &BinPackingInstance, alpha: Option<u64>, output: &Path) -> Result<String, UsageError> {
    let mut report = RunReport::new("gen-split");
    report.kind = Some("undirected");
    let params = split_parameters(bp, alpha);
    report.detail("alpha", &params.alpha);
    match gen_split(bp, alpha) {
        Ok(inst) => {
            let expected = answer(binpack_decide(bp));
            let mut meta = vec![("generator", "gen-split".to_string())];
            meta.extend(bp_meta(bp));
            meta.extend([
                ("alpha", params.alpha.to_string()),
                ("k", params.k.to_string()),
                ("h", params.h.to_string()),
                ("h_prime", params.h_prime.to_string()),
                ("expected", expected.to_string()),
            ]);
            write_outputs(output, &serialize_instance(&inst), &meta)?;
            finish_generated(&mut report, output, inst.graph.n(), inst.graph.m(), inst.k, inst.h, expected);
            report.detail("h_prime", &params.h_prime);
        }
        Err(e) => generator_error(&mut report, e)?,
    }
    Ok(report.to_text())
}

const MAX_C: u32 = 8;

fn gen_hsdag_cmd(hs: &HittingSetInstance, c: Option<u32>, output: &Path) -> Result<String, UsageError> {
    let mut report = RunReport::new("gen-hsdag");
    report.kind = Some("directed");
    let generated = match c {
        Some(c) => gen_hitting_dag(hs, c).map(|d| (c, d)),
        None => smallest_accepted_c(hs, MAX_C).ok_or(HardnessError::ParameterTooSmall { c: MAX_C }),
    };
    let generated = match generated {
        Err(HardnessError::ParameterTooSmall { .. }) if hs.validate().is_err() => {
            return Err(UsageError(hs.validate().unwrap_err().to_string()))
        }
        other => other,
    };
    match generated {
        Ok((c, inst)) => {
            let expected = answer(hitting_decide(hs));
            let sets: Vec<String> = hs
                .family
                .iter()
                .map(|s| s.iter().map(usize::to_string).collect::<Vec<_>>().join(","))
                .collect();
            let meta = vec![
                ("generator", "gen-hsdag".to_string()),
                ("universe", hs.universe.to_string()),
                ("sets", sets.join(";")),
                ("k", hs.k.to_string()),
                ("c", c.to_string()),
                ("h", inst.h.to_string()),
                ("expected", expected.to_string()),
            ];
            write_outputs(output, &serialize_di_instance(&inst), &meta)?;
            finish_generated(
                &mut report,
                output,
                inst.digraph.n(),
                inst.digraph.arc_count(),
                inst.k,
                inst.h,
                expected,
            );
            report.detail("c", c);
        }
        Err(e) => generator_error(&mut report, e)?,
    }
    Ok(report.to_text())
}
