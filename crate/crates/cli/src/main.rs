use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use lexitop_core::{
    embed_theorem, enumerate_topologies, parse_list, run_all, ultrametric_cube_embed, verify_embedding, Embedding,
    FiniteLexMetricSpace, FiniteTopology, LexVector, Ordinal, TopologyJson,
};

/// Finite-scale checks for lexicographic metrics, separation axioms and cube embeddings.
#[derive(Parser)]
#[command(name = "lexitop", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print every topology on 1..=N points, one JSON object per line.
    Enumerate {
        #[arg(long)]
        max_n: usize,
    },
    /// Run the exhaustive and randomized property suites.
    Suites {
        #[arg(long, default_value_t = 4)]
        max_n: usize,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Mutate one entry of every ultrametrized table and report detection.
        #[arg(long)]
        fault_inject: bool,
    },
    /// Replace every distance by the unit vector at its first nonzero level.
    Ultrametrize {
        #[arg(short, long)]
        input: PathBuf,
    },
    /// Ultrametrize, then re-index levels onto a cofinal list.
    Reduce {
        #[arg(short, long)]
        input: PathBuf,
        /// Comma-separated, strictly increasing ordinals, e.g. "w,w+1,w+2".
        #[arg(long)]
        cofinal: String,
    },
    /// Embed a topology or a metric space into a cube.
    Embed {
        #[arg(short, long)]
        input: PathBuf,
        /// Basis handed to the construction for topology inputs.
        #[arg(long, value_enum, default_value_t = BasisChoice::Minimal)]
        basis: BasisChoice,
    },
    /// Check an embedding for injectivity, continuity and openness onto its image.
    Verify {
        #[arg(short, long)]
        input: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisChoice {
    /// Least open neighbourhoods of the points.
    Minimal,
    /// Every open set.
    Opens,
}

fn read_json(path: &Path) -> Result<Value> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_space(path: &Path) -> Result<FiniteLexMetricSpace> {
    serde_json::from_value(read_json(path)?).with_context(|| format!("loading metric space {}", path.display()))
}

fn emit(value: &impl serde::Serialize) -> Result<()> {
    println!("{}", serde_json::to_string(value)?);
    Ok(())
}

fn verdict(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn enumerate(max_n: usize) -> Result<ExitCode> {
    let mut total = 0;
    for n in 1..=max_n {
        let mut count = 0;
        for t in enumerate_topologies(n)? {
            emit(&TopologyJson::from(&t))?;
            count += 1;
        }
        eprintln!("n = {n}: {count} topologies");
        total += count;
    }
    eprintln!("{total} topologies in total");
    Ok(ExitCode::SUCCESS)
}

fn suites(max_n: usize, trials: u64, seed: u64, fault_inject: bool) -> Result<ExitCode> {
    let started = Instant::now();
    let run = run_all(max_n, trials, seed, fault_inject)?;
    emit(&run)?;
    for s in &run.suites {
        let status = if s.pass { "pass" } else { "FAIL" };
        eprintln!(
            "{status}  {:<52} {:>8} instances {:>6} failures",
            s.name, s.instances, s.failures
        );
    }
    if let Some(plants) = &run.plants {
        let detected = plants.iter().filter(|p| p.detected).count();
        eprintln!("fault injection: {detected}/{} plants detected", plants.len());
    }
    eprintln!(
        "{} counterexamples, {} in {:.2} s",
        run.counterexamples,
        if run.pass { "pass" } else { "FAIL" },
        started.elapsed().as_secs_f64()
    );
    Ok(verdict(run.pass))
}

fn ultrametrize(input: &Path) -> Result<ExitCode> {
    let s = read_space(input)?;
    let u = s.ultrametrize()?;
    let ok = u.is_unit_ultrametric();
    emit(&u)?;
    eprintln!("{} points over {}; unit ultrametric: {ok}", u.len(), u.alpha());
    Ok(verdict(ok))
}

fn reduce(input: &Path, cofinal: &str) -> Result<ExitCode> {
    let s = read_space(input)?;
    let list = parse_list(cofinal)?;
    let u = if s.is_unit_ultrametric() {
        s
    } else {
        eprintln!("input is not a unit ultrametric; ultrametrizing first");
        s.ultrametrize()?
    };
    let r = u.cofinal_reduce(&list)?;
    let mut ok = true;
    for (pos, l) in list.iter().enumerate() {
        let unit = LexVector::unit(Ordinal::nat(pos as u64), r.alpha().clone())?;
        for x in 0..u.len() {
            if r.ball(x, &unit)? != u.unit_ball(x, l)? {
                eprintln!("ball mismatch at point {} for level {l}", u.points()[x]);
                ok = false;
            }
        }
    }
    emit(&r)?;
    eprintln!("{} levels in L; ball correspondence: {ok}", list.len());
    Ok(verdict(ok))
}

fn embed(input: &Path, basis: BasisChoice) -> Result<ExitCode> {
    let json = read_json(input)?;
    let e: Embedding = if json.get("dist").is_some() {
        let s: FiniteLexMetricSpace = serde_json::from_value(json)?;
        let u = if s.is_ultrametric()? { s } else { s.ultrametrize()? };
        ultrametric_cube_embed(&u)?
    } else if json.get("opens").is_some() {
        let t: FiniteTopology = serde_json::from_value(json)?;
        let family = match basis {
            BasisChoice::Minimal => t.minimal_basis(),
            BasisChoice::Opens => t.opens().to_vec(),
        };
        embed_theorem(&t, &family)?
    } else {
        bail!("{} is neither a topology nor a metric space", input.display());
    };
    let report = verify_embedding(&e);
    emit(&e)?;
    eprintln!(
        "{} points into {} coordinates; homeomorphism onto image: {}",
        e.target().len(),
        e.target().levels().len(),
        report.homeomorphism
    );
    Ok(verdict(report.homeomorphism))
}

fn verify(input: &Path) -> Result<ExitCode> {
    let e: Embedding = serde_json::from_value(read_json(input)?).context("loading embedding")?;
    let report = verify_embedding(&e);
    emit(&report)?;
    eprintln!(
        "injective: {}, continuous: {}, open onto image: {}",
        report.injective, report.continuous, report.open_onto_image
    );
    Ok(verdict(report.homeomorphism))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Enumerate { max_n } => enumerate(max_n),
        Command::Suites {
            max_n,
            trials,
            seed,
            fault_inject,
        } => suites(max_n, trials, seed, fault_inject),
        Command::Ultrametrize { input } => ultrametrize(&input),
        Command::Reduce { input, cofinal } => reduce(&input, &cofinal),
        Command::Embed { input, basis } => embed(&input, basis),
        Command::Verify { input } => verify(&input),
    };
    result.unwrap_or_else(|err| {
        eprintln!("error: {err:#}");
        ExitCode::from(2)
    })
}
