//! `nbldpc`: cycle, pattern and spectrum reports for non-binary LDPC codes.

mod report;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use nbldpc::code::format_codeword_records;
use nbldpc::cyclegraph::CheckMultigraph;
use nbldpc::design::{
    cancelled_counts, compare_codes, optimize_assignment, DesignConfig, RNG_ALGORITHM,
};
use nbldpc::fixtures;
use nbldpc::ontology::{
    mine_patterns, symbol_weight_bound, MiningOptions, PatternCatalog, PatternInstance,
};
use nbldpc::spectrum::{estimate_spectrum, SpectrumEstimate, SpectrumOptions};
use nbldpc::LdpcCode;
use report::{polynomial, InputDigest, Run};
use serde_json::json;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "nbldpc",
    version,
    about = "Cycle, pattern and spectrum analysis of non-binary (2,v)-regular LDPC codes"
)]
struct Cli {
    /// Emit machine-readable JSON instead of text tables.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for mining and spectrum estimation (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Suppress progress messages on stderr.
    #[arg(long, short, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Girth and cycle-distribution polynomial.
    Analyze {
        /// Code file or fixture name (ex1-c1..ex1-c4, ex2, ex3).
        code: String,
        /// Longest Tanner cycle counted (default: twice the pattern weight bound).
        #[arg(long)]
        max_length: Option<usize>,
    },
    /// Cycle counts per length, optionally listing each cycle.
    Cycles {
        code: String,
        #[arg(long)]
        max_length: Option<usize>,
        /// List every cycle as alternating column/check indices.
        #[arg(long)]
        list: bool,
    },
    /// Inter-connected cycle pattern counts.
    Patterns {
        code: String,
        /// Only catalog entries whose cycles all have length divisible by 4.
        #[arg(long)]
        type_one_only: bool,
        /// Also list the column set of every instance.
        #[arg(long)]
        dump: bool,
    },
    /// Truncated bit-weight spectrum of the binary image.
    Spectrum {
        /// One or more codes; one table each.
        #[arg(required = true)]
        codes: Vec<String>,
        #[command(flatten)]
        opts: SpectrumArgs,
    },
    /// All codewords of minimum bit weight.
    Minwords {
        code: String,
        #[command(flatten)]
        opts: SpectrumArgs,
    },
    /// Cancelled versus total cycles per length.
    CancelReport {
        code: String,
        #[arg(long)]
        max_length: Option<usize>,
    },
    /// Randomized row-wise value assignment.
    Design(DesignArgs),
    /// Write the embedded example codes to files.
    Fixtures {
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Only list the names.
        #[arg(long)]
        list: bool,
    },
}

#[derive(Args, Clone, Copy)]
struct SpectrumArgs {
    /// Largest nullspace dimension enumerated per subgraph.
    #[arg(long, default_value_t = nbldpc::spectrum::DEFAULT_DIMENSION_CAP)]
    dimension_cap: usize,
}

#[derive(Args)]
struct DesignArgs {
    /// Code whose structure (and starting values, if any) is used.
    code: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    iterations: usize,
    /// File of candidate exponent rows, one row per line.
    #[arg(long)]
    candidates: Option<PathBuf>,
    /// Where to write the resulting code.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Skip the final spectrum estimate.
    #[arg(long)]
    no_spectrum: bool,
    /// Leading spectrum coefficients shown.
    #[arg(long, default_value_t = 8)]
    selection_depth: usize,
    #[command(flatten)]
    spectrum: SpectrumArgs,
}

struct Loaded {
    name: String,
    text: String,
    code: LdpcCode,
}

fn load(arg: &str) -> Result<Loaded> {
    let path = Path::new(arg);
    let (text, name) = if path.is_file() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {arg}"))?;
        (text, arg.to_string())
    } else if let Some(t) = fixtures::text(arg) {
        (t.to_string(), arg.to_string())
    } else {
        bail!(
            "{arg}: no such file or fixture (fixtures: {})",
            fixtures::NAMES.join(", ")
        );
    };
    let code = LdpcCode::parse(&text).with_context(|| format!("parsing {name}"))?;
    Ok(Loaded { name, text, code })
}

struct Progress(bool);

impl Progress {
    fn say(&self, msg: impl AsRef<str>) {
        if !self.0 {
            eprintln!("nbldpc: {}", msg.as_ref());
        }
    }
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            bail!("--threads must be at least 1");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring worker threads")?;
    }
    let progress = Progress(cli.quiet);
    let out = run(&cli, &progress)?;
    print!("{out}");
    Ok(())
}

fn graph_and_catalog(code: &LdpcCode) -> Result<(CheckMultigraph, PatternCatalog)> {
    let graph = CheckMultigraph::from_code(code)?;
    let girth = graph.girth().context("the Tanner graph has no cycles")?;
    Ok((graph, PatternCatalog::build(girth)?))
}

fn spectrum_of(code: &LdpcCode, cap: usize, progress: &Progress) -> Result<SpectrumEstimate> {
    let (graph, catalog) = graph_and_catalog(code)?;
    let bound = catalog.max_weight();
    progress.say(format!(
        "girth {}; enumerating cycles of up to {bound} columns",
        catalog.girth
    ));
    let cycles = graph.enumerate_cycles(bound);
    progress.say(format!("{} cycles; mining patterns", cycles.len()));
    let mined = mine_patterns(&graph, &catalog, MiningOptions::default())?;
    progress.say(format!(
        "{} patterns; solving subgraph systems",
        mined.instances.len()
    ));
    Ok(estimate_spectrum(
        code,
        &cycles,
        &mined.instances,
        SpectrumOptions {
            symbol_weight_bound: bound,
            dimension_cap: cap,
        },
    )?)
}

fn spectrum_json(est: &SpectrumEstimate) -> serde_json::Value {
    json!({
        "histogram": est.spectrum.histogram.iter().map(|(w, n)| json!([w, n])).collect::<Vec<_>>(),
        "symbol_weight_bound": est.spectrum.symbol_weight_bound,
        "provenance": est.spectrum.provenance,
        "min_weight": est.spectrum.min_weight(),
        "min_count": est.min_words.len(),
    })
}

fn default_max_length(code: &LdpcCode) -> Result<usize> {
    let girth = CheckMultigraph::from_code(code)?.girth()?;
    Ok(2 * symbol_weight_bound(girth))
}

fn run(cli: &Cli, progress: &Progress) -> Result<String> {
    match &cli.command {
        Command::Analyze { code, max_length } => {
            let mut run = Run::start("analyze");
            let l = load(code)?;
            run.manifest.inputs.push(InputDigest::new(&l.name, &l.text));
            run.manifest.field = Some(l.code.field().spec());
            let graph = CheckMultigraph::from_code(&l.code)?;
            let girth = graph.girth()?;
            let max = match max_length {
                Some(m) => *m,
                None => default_max_length(&l.code)?,
            };
            let dist = graph.cycle_distribution(max);
            let text = format!(
                "n {} checks {} row weight {}\ngirth {girth}; {}\n",
                l.code.n(),
                l.code.rows(),
                l.code.row_weight(),
                polynomial(&dist)
            );
            let body = json!({
                "n": l.code.n(), "checks": l.code.rows(), "row_weight": l.code.row_weight(),
                "girth": girth, "max_length": max, "cycles": pairs(&dist),
            });
            Ok(run.finish(cli.json, text, body))
        }
        Command::Cycles {
            code,
            max_length,
            list,
        } => {
            let mut run = Run::start("cycles");
            let l = load(code)?;
            run.manifest.inputs.push(InputDigest::new(&l.name, &l.text));
            let graph = CheckMultigraph::from_code(&l.code)?;
            let max = match max_length {
                Some(m) => *m,
                None => default_max_length(&l.code)?,
            };
            let cycles = graph.enumerate_cycles(max / 2);
            let dist = graph.cycle_distribution(max);
            let mut text = String::from("length\tcount\n");
            for (len, n) in &dist {
                let _ = writeln!(text, "{len}\t{n}");
            }
            let mut listing = Vec::new();
            if *list {
                for (len, n) in &dist {
                    let _ = writeln!(text, "\n[cycles {len} {n}]");
                    for c in cycles.iter().filter(|c| c.tanner_length() == *len) {
                        let _ = writeln!(text, "{}", c.alternating_form());
                        listing.push(json!({"length": len, "walk": c.alternating_form()}));
                    }
                }
            }
            let body = json!({"max_length": max, "cycles": pairs(&dist), "listing": listing});
            Ok(run.finish(cli.json, text, body))
        }
        Command::Patterns {
            code,
            type_one_only,
            dump,
        } => {
            let mut run = Run::start("patterns");
            let l = load(code)?;
            run.manifest.inputs.push(InputDigest::new(&l.name, &l.text));
            let (graph, catalog) = graph_and_catalog(&l.code)?;
            progress.say(format!(
                "girth {}; mining up to {} columns",
                catalog.girth,
                catalog.max_weight()
            ));
            let mined = mine_patterns(
                &graph,
                &catalog,
                MiningOptions {
                    type_one_only: *type_one_only,
                },
            )?;
            let counts = catalog.group_counts(&mined.instances);
            let mut text = format!("girth {}\npattern\ttype\tcolumns\tnumber\n", catalog.girth);
            for (e, n) in &counts {
                let _ = writeln!(
                    text,
                    "{}\t{}\t{}\t{n}",
                    e.label,
                    e.shape.cycle_type(),
                    e.weight()
                );
            }
            for (shape, n) in &mined.uncatalogued {
                let _ = writeln!(text, "# uncatalogued {shape}\t{n}");
            }
            if *dump {
                for (e, n) in &counts {
                    let _ = writeln!(text, "\n[pattern {} {n}]", e.label);
                    for i in mined.instances.iter().filter(|i| i.shape == e.shape) {
                        let _ = writeln!(text, "{}", join(&i.columns));
                    }
                }
            }
            let rows: Vec<_> = counts
                .iter()
                .map(|(e, n)| {
                    json!({
                        "label": e.label, "class": e.shape.class, "tuple": e.shape.tuple,
                        "type": e.shape.cycle_type(), "listed_type": e.listed_type,
                        "weight": e.weight(), "count": n,
                    })
                })
                .collect();
            let instances: Vec<&PatternInstance> = if *dump {
                mined.instances.iter().collect()
            } else {
                Vec::new()
            };
            let body = json!({
                "girth": catalog.girth, "counts": rows,
                "uncatalogued": mined.uncatalogued, "instances": instances,
            });
            Ok(run.finish(cli.json, text, body))
        }
        Command::Spectrum { codes, opts } => {
            let mut run = Run::start("spectrum");
            let mut text = String::new();
            let mut tables = Vec::new();
            for arg in codes {
                let l = load(arg)?;
                run.manifest.inputs.push(InputDigest::new(&l.name, &l.text));
                run.manifest.field = Some(l.code.field().spec());
                progress.say(format!("{}: estimating spectrum", l.name));
                let est = spectrum_of(&l.code, opts.dimension_cap, progress)?;
                let _ = writeln!(
                    text,
                    "[{}] symbol weight <= {}\nweight\tcount",
                    l.name, est.spectrum.symbol_weight_bound
                );
                for (w, n) in &est.spectrum.histogram {
                    let _ = writeln!(text, "{w}\t{n}");
                }
                text.push('\n');
                tables.push(json!({"code": l.name, "spectrum": spectrum_json(&est)}));
            }
            Ok(run.finish(cli.json, text, json!({ "tables": tables })))
        }
        Command::Minwords { code, opts } => {
            let mut run = Run::start("minwords");
            let l = load(code)?;
            run.manifest.inputs.push(InputDigest::new(&l.name, &l.text));
            run.manifest.field = Some(l.code.field().spec());
            let est = spectrum_of(&l.code, opts.dimension_cap, progress)?;
            let f = l.code.field();
            let words = est.minimum_codewords();
            let text = format!(
                "minimum bit weight {} ({} codewords)\n\n{}",
                est.spectrum
                    .min_weight()
                    .map_or("none".into(), |w| w.to_string()),
                words.len(),
                format_codeword_records(words, f)
            );
            let body = json!({
                "min_weight": est.spectrum.min_weight(),
                "codewords": words.iter().map(|w| json!({
                    "support": w.support, "exponents": w.exponents(f), "bits": w.binary_image(f).bits,
                })).collect::<Vec<_>>(),
            });
            Ok(run.finish(cli.json, text, body))
        }
        Command::CancelReport { code, max_length } => {
            let mut run = Run::start("cancel-report");
            let l = load(code)?;
            run.manifest.inputs.push(InputDigest::new(&l.name, &l.text));
            run.manifest.field = Some(l.code.field().spec());
            let graph = CheckMultigraph::from_code(&l.code)?;
            let max = match max_length {
                Some(m) => *m,
                None => default_max_length(&l.code)?,
            };
            let counts = cancelled_counts(&l.code, &graph.enumerate_cycles(max / 2))?;
            let mut text = String::from("length\tcancelled\ttotal\n");
            for (len, (c, t)) in &counts {
                let _ = writeln!(text, "{len}\t{c}\t{t}");
            }
            let rows: Vec<_> = counts
                .iter()
                .map(|(len, (c, t))| json!({"length": len, "cancelled": c, "total": t}))
                .collect();
            Ok(run.finish(cli.json, text, json!({ "counts": rows })))
        }
        Command::Design(args) => design(cli, args, progress),
        Command::Fixtures { out, list } => {
            let mut run = Run::start("fixtures");
            let mut text = String::new();
            let mut written = Vec::new();
            if !*list {
                std::fs::create_dir_all(out)
                    .with_context(|| format!("creating {}", out.display()))?;
            }
            for name in fixtures::NAMES {
                let body = fixtures::text(name).expect("listed fixture exists");
                run.manifest.inputs.push(InputDigest::new(name, body));
                if *list {
                    let _ = writeln!(text, "{name}");
                } else {
                    let path = out.join(format!("{name}.code"));
                    std::fs::write(&path, body)
                        .with_context(|| format!("writing {}", path.display()))?;
                    let _ = writeln!(text, "{}", path.display());
                    written.push(path.display().to_string());
                }
            }
            Ok(run.finish(
                cli.json,
                text,
                json!({"names": fixtures::NAMES, "written": written}),
            ))
        }
    }
}

fn join(xs: &[usize]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn read_candidates(path: &Path) -> Result<Vec<Vec<u32>>> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.split_whitespace()
                .map(|t| {
                    t.parse::<u32>()
                        .with_context(|| format!("bad exponent {t:?}"))
                })
                .collect()
        })
        .collect()
}

fn design(cli: &Cli, args: &DesignArgs, progress: &Progress) -> Result<String> {
    let mut run = Run::start("design");
    let l = load(&args.code)?;
    run.manifest.inputs.push(InputDigest::new(&l.name, &l.text));
    run.manifest.field = Some(l.code.field().spec());
    run.manifest.seed = Some(args.seed);
    run.manifest.rng = Some(RNG_ALGORITHM);
    let row_candidates = match &args.candidates {
        Some(p) => {
            let rows = read_candidates(p)?;
            run.manifest.inputs.push(InputDigest::new(
                &p.display().to_string(),
                &std::fs::read_to_string(p)?,
            ));
            Some(rows)
        }
        None => None,
    };
    let config = DesignConfig {
        rng_seed: args.seed,
        iterations: args.iterations,
        row_candidates,
        selection_depth: args.selection_depth,
        max_cycle_columns: None,
    };
    progress.say(format!(
        "hill climb: {} iterations, seed {}",
        args.iterations, args.seed
    ));
    let outcome = optimize_assignment(&l.code, &config)?;
    let code_text = outcome.code.to_text();
    let mut text = String::new();
    let _ = writeln!(text, "tracked lengths\t{}", join(&outcome.tanner_lengths));
    let _ = writeln!(text, "cycle totals\t{}", join(&outcome.totals));
    let _ = writeln!(text, "iteration\trow\tcancelled");
    for p in &outcome.trajectory {
        let row = p.row.map_or("-".to_string(), |r| r.to_string());
        let _ = writeln!(text, "{}\t{row}\t{}", p.iteration, join(&p.cancelled));
    }
    if let Some(path) = &args.output {
        std::fs::write(path, &code_text).with_context(|| format!("writing {}", path.display()))?;
        let _ = writeln!(text, "wrote {}", path.display());
    }
    let mut spectrum = serde_json::Value::Null;
    if !args.no_spectrum {
        let est = spectrum_of(&outcome.code, args.spectrum.dimension_cap, progress)?;
        // position relative to the input code, when it carried values
        if l.code.values_assigned() {
            let before = spectrum_of(&l.code, args.spectrum.dimension_cap, progress)?;
            let ranking = compare_codes(
                &[l.code.clone(), outcome.code.clone()],
                &[before.spectrum.clone(), est.spectrum.clone()],
                args.selection_depth,
            )?;
            let verdict = match (ranking.ties.is_empty(), ranking.order[0]) {
                (false, _) => "tie",
                (true, 1) => "designed code ranks first",
                _ => "input code ranks first",
            };
            let _ = writeln!(text, "comparison with input\t{verdict}");
        }
        let _ = writeln!(text, "\nweight\tcount");
        for (w, n) in est
            .spectrum
            .histogram
            .iter()
            .take(args.selection_depth.max(1) * 4)
        {
            let _ = writeln!(text, "{w}\t{n}");
        }
        spectrum = spectrum_json(&est);
    }
    if args.output.is_none() {
        let _ = write!(text, "\n{code_text}");
    }
    let body = json!({
        "tanner_lengths": outcome.tanner_lengths,
        "totals": outcome.totals,
        "trajectory": outcome.trajectory,
        "code": code_text,
        "spectrum": spectrum,
    });
    Ok(run.finish(cli.json, text, body))
}

fn pairs(dist: &std::collections::BTreeMap<usize, usize>) -> Vec<[usize; 2]> {
    dist.iter().map(|(l, n)| [*l, *n]).collect()
}
