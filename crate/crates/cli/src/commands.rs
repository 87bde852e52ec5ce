use std::io::{self, Write};
use std::path::Path;
use std::time::Instant;

use anyhow::Context;
use domsearch::estimator::{exact_finite, mc_uniform};
use domsearch::metrics::{report, DiversitySpace};
use domsearch::problems::{list, lookup, ProblemDefinition, ProblemSummary};
use domsearch::sasmo::{final_points, run_problem, FinalPoint, RunConfig};
use domsearch::ObjectiveVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{Command, DmeasureArgs, Estimator, Format, FrontArgs, RunArgs};
use crate::config::effective_config;
use crate::error::{CliError, CliResult};
use crate::output::{default_dir, header, native, num, prepare_dir, write_csv, write_json, write_text, SCHEMA_VERSION};

pub fn dispatch(command: Command) -> CliResult<()> {
    match command {
        Command::Run(a) => cmd_run(&a),
        Command::Dmeasure(a) => cmd_dmeasure(&a),
        Command::Front(a) => cmd_front(&a),
        Command::Problems => cmd_problems(),
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    schema_version: u32,
    config: &'a RunConfig,
    replications: u64,
    base_seed: u64,
    created_at: String,
    tool_version: &'static str,
    output_dir: String,
    initial_threshold: f64,
    reference_size: u64,
    post_filter: bool,
    front_format: &'static str,
    diversity_space: DiversitySpace,
    jobs: usize,
}

#[derive(Serialize)]
struct FrontPoint {
    point: Vec<f64>,
    objectives: Vec<f64>,
    dmeasure: f64,
    clipped: bool,
}

#[derive(Serialize)]
struct FrontDocument<'a> {
    schema_version: u32,
    problem: &'a str,
    seed: u64,
    post_filter: bool,
    points: Vec<FrontPoint>,
}

struct SummaryRow {
    replication: u64,
    lambda: f64,
    upsilon: Option<f64>,
    runtime_seconds: f64,
}

fn front_rows(problem: &ProblemDefinition, points: &[FinalPoint]) -> (Vec<String>, Vec<Vec<String>>) {
    let head: Vec<String> = header("x", problem.dim())
        .chain(header("f", problem.n_objectives()))
        .chain(["dmeasure".to_string(), "clipped".to_string()])
        .collect();
    let rows = points
        .iter()
        .map(|p| {
            p.point
                .as_slice()
                .iter()
                .copied()
                .chain(native(problem, p.objectives.as_slice()))
                .map(num)
                .chain([num(p.dmeasure), p.clipped.to_string()])
                .collect()
        })
        .collect();
    (head, rows)
}

struct Replication<'a> {
    problem: &'a ProblemDefinition,
    config: &'a RunConfig,
    dir: &'a Path,
    format: Format,
    post_filter: bool,
    reference: &'a [ObjectiveVector],
    space: DiversitySpace,
}

impl Replication<'_> {
    fn run(&self, r: u64) -> CliResult<SummaryRow> {
        let config = RunConfig {
            seed: self.config.seed.wrapping_add(r),
            ..self.config.clone()
        };
        let started = Instant::now();
        let history =
            run_problem(self.problem, &config).with_context(|| format!("replication {r} (seed {})", config.seed))?;
        let runtime_seconds = started.elapsed().as_secs_f64();

        let mut json = history.to_json()?;
        json.push('\n');
        write_text(&self.dir.join(format!("history_{r}.json")), &json)?;

        let points = final_points(&history, self.post_filter);
        match self.format {
            Format::Csv => {
                let (head, rows) = front_rows(self.problem, &points);
                write_csv(&self.dir.join(format!("front_{r}.csv")), &head, &rows)?;
            }
            Format::Json => {
                let doc = FrontDocument {
                    schema_version: SCHEMA_VERSION,
                    problem: self.problem.name(),
                    seed: config.seed,
                    post_filter: self.post_filter,
                    points: points
                        .iter()
                        .map(|p| FrontPoint {
                            point: p.point.0.clone(),
                            objectives: native(self.problem, p.objectives.as_slice()),
                            dmeasure: p.dmeasure,
                            clipped: p.clipped,
                        })
                        .collect(),
                };
                write_json(&self.dir.join(format!("front_{r}.json")), &doc)?;
            }
        }

        let pairs: Vec<_> = points.into_iter().map(|p| (p.point, p.objectives)).collect();
        let m = report(self.problem, &pairs, self.reference, self.space)?;
        Ok(SummaryRow {
            replication: r,
            lambda: m.lambda,
            upsilon: m.upsilon,
            runtime_seconds,
        })
    }
}

fn summary_table(problem: &str, rows: &[SummaryRow]) -> (Vec<String>, Vec<Vec<String>>) {
    let head = ["problem", "replication", "lambda", "upsilon", "runtime_seconds"]
        .map(String::from)
        .to_vec();
    let opt = |v: Option<f64>| v.map(num).unwrap_or_default();
    let mut out: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                problem.to_string(),
                r.replication.to_string(),
                num(r.lambda),
                opt(r.upsilon),
                num(r.runtime_seconds),
            ]
        })
        .collect();
    let best_lambda = rows.iter().map(|r| r.lambda).fold(f64::INFINITY, f64::min);
    let best_upsilon = rows.iter().filter_map(|r| r.upsilon).reduce(f64::min);
    let total: f64 = rows.iter().map(|r| r.runtime_seconds).sum();
    out.push(vec![
        problem.to_string(),
        "best".into(),
        num(best_lambda),
        opt(best_upsilon),
        num(total),
    ]);
    (head, out)
}

fn cmd_run(args: &RunArgs) -> CliResult<()> {
    let config = effective_config(&args.search)?;
    let problem = lookup(&config.problem)?;
    let dir = args
        .output
        .out
        .clone()
        .unwrap_or_else(|| default_dir(&format!("{}-seed{}", config.problem, config.seed)));
    prepare_dir(&dir, args.output.force)?;
    let jobs = args.jobs.map_or_else(
        || std::thread::available_parallelism().map_or(1, |n| n.get()),
        |j| j as usize,
    );
    let space: DiversitySpace = args.diversity_space.into();

    let manifest = Manifest {
        schema_version: SCHEMA_VERSION,
        config: &config,
        replications: args.replications,
        base_seed: config.seed,
        created_at: chrono::Utc::now().to_rfc3339(),
        tool_version: env!("CARGO_PKG_VERSION"),
        output_dir: dir.display().to_string(),
        initial_threshold: config.resolved_initial_threshold(&problem),
        reference_size: args.output.reference_size,
        post_filter: args.output.post_filter,
        front_format: match args.format {
            Format::Csv => "csv",
            Format::Json => "json",
        },
        diversity_space: space,
        jobs,
    };
    write_json(&dir.join("manifest.json"), &manifest)?;

    let reference = problem.sample_reference_front(args.output.reference_size as usize)?;
    let task = Replication {
        problem: &problem,
        config: &config,
        dir: &dir,
        format: args.format,
        post_filter: args.output.post_filter,
        reference: &reference,
        space,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .context("starting worker threads")?;
    let rows = pool.install(|| {
        (0..args.replications)
            .into_par_iter()
            .map(|r| task.run(r))
            .collect::<CliResult<Vec<_>>>()
    })?;

    let (head, table) = summary_table(&config.problem, &rows);
    write_csv(&dir.join("summary.csv"), &head, &table)?;
    let mut out = csv::Writer::from_writer(io::stdout().lock());
    out.write_record(&head).context("writing summary")?;
    for row in &table {
        out.write_record(row).context("writing summary")?;
    }
    out.flush()?;
    eprintln!("wrote {}", dir.display());
    Ok(())
}

fn cmd_dmeasure(args: &DmeasureArgs) -> CliResult<()> {
    let problem = lookup(&args.problem)?;
    let (points, objectives, dmeasure) = match args.estimator {
        Estimator::Exact => {
            if args.samples.is_some() {
                return Err(CliError::Usage(
                    "--samples has no meaning with --estimator exact".into(),
                ));
            }
            let scored = exact_finite(&problem)?;
            let objectives = scored
                .iter()
                .map(|(x, _)| problem.evaluate(x))
                .collect::<domsearch::Result<Vec<_>>>()?;
            let (points, d): (Vec<_>, Vec<_>) = scored.into_iter().unzip();
            (points, objectives, d)
        }
        Estimator::Uniform => {
            let n = args
                .samples
                .ok_or_else(|| CliError::Usage("--samples is required for the uniform estimator".into()))?;
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            let points = problem.bounds().sample_uniform(&mut rng, n as usize);
            let objectives = points
                .par_iter()
                .map(|x| problem.evaluate(x))
                .collect::<domsearch::Result<Vec<_>>>()?;
            let d = mc_uniform(&objectives)?;
            (points, objectives, d)
        }
    };

    let head: Vec<String> = std::iter::once("index".to_string())
        .chain(header("x", problem.dim()))
        .chain(header("f", problem.n_objectives()))
        .chain(std::iter::once("dmeasure".to_string()))
        .collect();
    let stdout = io::stdout();
    let mut out = csv::Writer::from_writer(stdout.lock());
    out.write_record(&head).context("writing CSV")?;
    for (i, ((x, f), d)) in points.iter().zip(&objectives).zip(&dmeasure).enumerate() {
        let row: Vec<String> = std::iter::once(i.to_string())
            .chain(x.as_slice().iter().copied().map(num))
            .chain(native(&problem, f.as_slice()).into_iter().map(num))
            .chain(std::iter::once(num(*d)))
            .collect();
        out.write_record(&row).context("writing CSV")?;
    }
    out.flush()?;
    Ok(())
}

fn cmd_front(args: &FrontArgs) -> CliResult<()> {
    let config = effective_config(&args.search)?;
    let problem = lookup(&config.problem)?;
    let dir = args
        .output
        .out
        .clone()
        .unwrap_or_else(|| default_dir(&format!("{}-seed{}-front", config.problem, config.seed)));
    prepare_dir(&dir, args.output.force)?;

    let reference = problem.sample_reference_front(args.output.reference_size as usize)?;
    let head: Vec<String> = header("f", problem.n_objectives()).collect();
    let rows: Vec<Vec<String>> = reference
        .iter()
        .map(|f| native(&problem, f.as_slice()).into_iter().map(num).collect())
        .collect();
    write_csv(&dir.join("true_front.csv"), &head, &rows)?;

    let history = run_problem(&problem, &config).context("search run")?;
    let points = final_points(&history, args.output.post_filter);
    let head: Vec<String> = header("f", problem.n_objectives())
        .chain(header("x", problem.dim()))
        .collect();
    let rows: Vec<Vec<String>> = points
        .iter()
        .map(|p| {
            native(&problem, p.objectives.as_slice())
                .into_iter()
                .chain(p.point.as_slice().iter().copied())
                .map(num)
                .collect()
        })
        .collect();
    write_csv(&dir.join("approx_front.csv"), &head, &rows)?;
    eprintln!("wrote {}", dir.display());
    Ok(())
}

#[derive(Serialize)]
struct ProblemList {
    schema_version: u32,
    problems: Vec<ProblemSummary>,
}

fn cmd_problems() -> CliResult<()> {
    let doc = ProblemList {
        schema_version: SCHEMA_VERSION,
        problems: list(),
    };
    let mut text = serde_json::to_string_pretty(&doc).context("serializing problem list")?;
    text.push('\n');
    io::stdout().lock().write_all(text.as_bytes())?;
    Ok(())
}
