use std::fs;
use std::io::{self, BufRead, BufReader, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use critnet::io::{
    export_dot, export_observer_dot, parse_network, parse_observers, serialize_network,
    serialize_observers,
};
use critnet::onthefly::GenerationStats;
use critnet::{
    build_observer, compose_network, quotient_network, run_algorithm1, run_algorithm3,
    run_onthefly_with, Error, MonitorSession, Network, OnTheFlyOptions, Verdict, DEFAULT_BUDGET,
};
use serde_json::json;

#[derive(Parser)]
#[command(name = "critnet", version, about = "Critical observability of FSM networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algorithm {
    /// Full local observers composed explicitly.
    #[value(name = "1")]
    Baseline,
    /// On-the-fly search over the network as given.
    #[value(name = "otf")]
    OnTheFly,
    /// Bisimulation quotient followed by the on-the-fly search.
    #[value(name = "3")]
    Reduced,
}

#[derive(Subcommand)]
enum Command {
    /// Decide critical observability of a network.
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "3")]
        algorithm: Algorithm,
        /// Maximum number of observer states or aggregates to store.
        #[arg(long, env = "CRITNET_BUDGET", default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        /// Also run the baseline and report its cost.
        #[arg(long)]
        baseline: bool,
        #[arg(long)]
        json: bool,
        /// Print per-generation progress to stderr.
        #[arg(long)]
        progress: bool,
    },
    /// Print the bisimulation quotient of a network.
    Reduce { file: PathBuf },
    /// Synthesize the local observers of an observable network.
    Synth {
        file: PathBuf,
        /// Write `observers.net` and one DOT file per member here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, env = "CRITNET_BUDGET", default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Print the parallel composition of a network as a single machine.
    Compose {
        file: PathBuf,
        #[arg(long, default_value = "composed")]
        name: String,
    },
    /// Replay an event stream through a bank of observers.
    Monitor {
        #[arg(required = true)]
        observers: Vec<PathBuf>,
        /// Newline-delimited labels; `-` reads standard input.
        #[arg(long, default_value = "-")]
        events: String,
    },
    /// Render every member of a network.
    Export {
        file: PathBuf,
        #[arg(long)]
        dot: bool,
        /// Render the observer of each member instead.
        #[arg(long)]
        observer: bool,
    },
}

fn load(path: &Path) -> anyhow::Result<Network> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_network(&text).with_context(|| format!("in {}", path.display()))
}

fn verdict_code(v: &Verdict) -> ExitCode {
    if v.observable {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn print_verdict(v: &Verdict) {
    match &v.witness {
        None => println!("observable: yes"),
        Some(w) => println!("observable: no (witness {w})"),
    }
}

fn check(
    file: &Path,
    algorithm: Algorithm,
    budget: usize,
    baseline: bool,
    as_json: bool,
    progress: bool,
) -> anyhow::Result<ExitCode> {
    let n = load(file)?;
    let verdict = match algorithm {
        Algorithm::Baseline => {
            let out = run_algorithm1(&n, budget)?;
            if as_json {
                let doc = json!({
                    "observable": out.verdict.observable,
                    "witness": out.verdict.witness.as_ref().map(ToString::to_string),
                    "states": out.observer.state_count(),
                    "baseline": { "space": out.ledger.space(), "time": out.ledger.time() },
                });
                println!("{doc:#}");
            } else {
                print_verdict(&out.verdict);
                println!("composed observer: {} states", out.observer.state_count());
                println!("cost: {}", out.ledger);
            }
            out.verdict
        }
        Algorithm::OnTheFly => {
            let mut report = |s: GenerationStats| {
                eprintln!(
                    "generation {}: frontier {}, visited {}",
                    s.generation, s.frontier, s.visited
                )
            };
            let out = run_onthefly_with(
                &n,
                OnTheFlyOptions {
                    budget,
                    progress: progress.then_some(&mut report as &mut dyn FnMut(GenerationStats)),
                },
            )?;
            if as_json {
                let doc = json!({
                    "observable": out.verdict.observable,
                    "witness": out.verdict.witness.as_ref().map(ToString::to_string),
                    "generations": out.stats.generations,
                    "aggregates": out.stats.aggregates,
                    "reduced": { "space": out.ledger.space(), "time": out.ledger.time() },
                });
                println!("{doc:#}");
            } else {
                print_verdict(&out.verdict);
                println!(
                    "explored: {} aggregates in {} generations",
                    out.stats.aggregates, out.stats.generations
                );
                println!("cost: {}", out.ledger);
            }
            out.verdict
        }
        Algorithm::Reduced => {
            let report = run_algorithm3(&n, baseline, budget)?;
            if as_json {
                println!("{:#}", report.to_json());
            } else {
                print!("{report}");
            }
            report.verdict
        }
    };
    Ok(verdict_code(&verdict))
}

fn reduce(file: &Path) -> anyhow::Result<ExitCode> {
    let n = load(file)?;
    let (reduced, classes) = quotient_network(&n);
    for class in &classes.classes {
        println!("# class {}", class.join(" "));
    }
    print!("{}", serialize_network(&reduced));
    Ok(ExitCode::SUCCESS)
}

fn synth(file: &Path, out: Option<&Path>, budget: usize) -> anyhow::Result<ExitCode> {
    let n = load(file)?;
    let report = run_algorithm3(&n, false, budget)?;
    let Some(locals) = &report.locals else {
        print_verdict(&report.verdict);
        return Ok(ExitCode::from(1));
    };
    let doc = serialize_observers(locals);
    match out {
        None => print!("{doc}"),
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            fs::write(dir.join("observers.net"), doc)?;
            for (name, o) in locals {
                fs::write(dir.join(format!("{name}.dot")), export_observer_dot(name, o))?;
            }
            println!("wrote {} observers to {}", locals.len(), dir.display());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn compose(file: &Path, name: String) -> anyhow::Result<ExitCode> {
    let n = load(file)?;
    let product = Network::new(vec![(name, compose_network(&n))])?;
    print!("{}", serialize_network(&product));
    Ok(ExitCode::SUCCESS)
}

fn monitor(observers: &[PathBuf], events: &str) -> anyhow::Result<ExitCode> {
    let mut locals = Vec::new();
    for path in observers {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        locals.extend(parse_observers(&text).with_context(|| format!("in {}", path.display()))?);
    }
    let input: Box<dyn Read> = if events == "-" {
        Box::new(io::stdin())
    } else {
        Box::new(fs::File::open(events).with_context(|| format!("opening {events}"))?)
    };
    let mut session = MonitorSession::start(&locals);
    for line in BufReader::new(input).lines() {
        let line = line?;
        let word = critnet::io::parse_events(&line)?;
        for label in word.symbols() {
            match session.feed_event(label.as_str()) {
                Ok(_) => {
                    let step = session.log().len();
                    println!("{}", session.log()[step - 1].line(step));
                }
                Err(e @ Error::Desync { .. }) => {
                    eprintln!("error: {e}");
                    return Ok(ExitCode::from(1));
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn export(file: &Path, dot: bool, observer: bool) -> anyhow::Result<ExitCode> {
    if !dot {
        bail!("no output format selected");
    }
    let n = load(file)?;
    for (name, m) in n.members() {
        if observer {
            print!("{}", export_observer_dot(name, &build_observer(m)));
        } else {
            print!("{}", export_dot(name, m));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Check {
            file,
            algorithm,
            budget,
            baseline,
            json,
            progress,
        } => check(&file, algorithm, budget, baseline, json, progress),
        Command::Reduce { file } => reduce(&file),
        Command::Synth { file, out, budget } => synth(&file, out.as_deref(), budget),
        Command::Compose { file, name } => compose(&file, name),
        Command::Monitor { observers, events } => monitor(&observers, &events),
        Command::Export {
            file,
            dot,
            observer,
        } => export(&file, dot, observer),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
