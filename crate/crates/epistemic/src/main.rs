use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use epistemic::bench::{bench, to_csv, twin_bound_violations};
use epistemic::gen::{gen_random, suite_params, GenParams};
use epistemic::model_file::{emit_model, parse_model, ModelFile};
use epistemic::spec_file::{engine_name, load_spec, parse_engine, parse_pair_spec, resolve_tspec};
use epistemic::verdict_json::{emit_verdict, explain, parse_verdict, VerdictJson};
use epistemic::{crosscheck, fixtures, StdClock};
use epistemic_core::dot::{double_to_dot, recognizer_to_dot, state_pair_to_dot, twin_to_dot};
use epistemic_core::{
    build_double, build_recognizer, build_state_pair, build_twin, classify, EngineChoice,
    KnowledgePredicate, Verifier,
};

#[derive(Parser)]
#[command(
    name = "epistemic",
    version,
    about = "Verify high-order epistemic properties of partially observed automata"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Estimator {
    Recognizer,
    Double,
    Twin,
    Spair,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a spec file; prints the JSON verdict. Exit 0 if it holds, 1 if violated.
    Verify {
        spec: PathBuf,
        /// Override the engine named in the spec.
        #[arg(long)]
        engine: Option<String>,
        /// Accept models with reachable dead states.
        #[arg(long)]
        allow_dead: bool,
        /// Also write the verdict to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build one construction for a model file or bundled fixture name.
    Build {
        #[arg(long, value_enum)]
        estimator: Estimator,
        model: String,
        /// Write Graphviz output here (`-` for stdout).
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Pair specification used for highlighting, as after `predicate dis`.
        #[arg(long, default_value = "distinct")]
        predicate: String,
    },
    /// Compare engines against the oracle and each other on random models.
    Crosscheck {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        models: usize,
        #[arg(long, default_value_t = 6)]
        max_states: usize,
        #[arg(long, default_value_t = 4)]
        max_events: usize,
    },
    /// Write a seeded random model.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        states: usize,
        #[arg(long, default_value_t = 3)]
        events: usize,
        #[arg(long, default_value_t = 0.4)]
        density: f64,
        #[arg(long, default_value_t = 0.5)]
        p_low: f64,
        #[arg(long, default_value_t = 0.5)]
        p_high: f64,
        #[arg(long, default_value_t = 0.2)]
        p_relabel: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sizes and timings per model and engine as CSV.
    Bench {
        /// Model files or fixture names.
        models: Vec<String>,
        /// Add this many random models of growing size.
        #[arg(long, default_value_t = 0)]
        random: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        max_states: usize,
        #[arg(long, default_value = "double,twin,spair")]
        engines: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Describe a JSON verdict in words.
    Explain { verdict: PathBuf },
}

enum Failure {
    Usage(anyhow::Error),
    Internal(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

fn core_failure(e: epistemic_core::Error) -> Failure {
    if e.is_internal() {
        Failure::Internal(e.into())
    } else {
        Failure::Usage(e.into())
    }
}

fn load_model(arg: &str) -> anyhow::Result<ModelFile> {
    let path = Path::new(arg);
    let text = if path.exists() {
        std::fs::read_to_string(path).with_context(|| format!("cannot read {arg}"))?
    } else {
        fixtures::model(arg)
            .ok_or_else(|| anyhow!("{arg}: no such file or bundled fixture"))?
            .to_string()
    };
    parse_model(&text).map_err(|e| anyhow!("{arg}: {e}"))
}

fn write_out(path: &Path, text: &str) -> anyhow::Result<()> {
    if path == Path::new("-") {
        print!("{text}");
        Ok(())
    } else {
        std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Verify {
            spec,
            engine,
            allow_dead,
            out,
        } => {
            let loaded = load_spec(&spec)?;
            let choice = match engine {
                Some(e) => parse_engine(&e).ok_or_else(|| anyhow!("unknown engine `{e}`"))?,
                None => loaded.spec.engine.unwrap_or_default(),
            };
            let clock = StdClock::new();
            let mut verifier = Verifier::new(choice).with_clock(&clock);
            if allow_dead {
                verifier = verifier.allow_dead_states();
            }
            let v = verifier.run(&loaded.task).map_err(core_failure)?;
            let json = emit_verdict(&VerdictJson::new(&loaded.spec.name, &loaded.task, &v));
            println!("{json}");
            if let Some(p) = out {
                write_out(&p, &format!("{json}\n"))?;
            }
            Ok(ExitCode::from(if v.holds { 0 } else { 1 }))
        }
        Command::Build {
            estimator,
            model,
            dot,
            predicate,
        } => {
            let m = load_model(&model)?;
            let (g, lo, hi) = (&m.automaton, &m.low, &m.high);
            let spec = parse_pair_spec(&predicate).map_err(|e| anyhow!("--predicate: {e}"))?;
            let tspec = resolve_tspec(&m, &spec).map_err(|e| anyhow!("--predicate: {e}"))?;
            let pred = KnowledgePredicate::Dis(tspec.clone());
            let rec = build_recognizer(g, lo);
            let cls = classify(&rec, &pred).map_err(core_failure)?;
            let (name, states, edges, text) = match estimator {
                Estimator::Recognizer => (
                    "recognizer",
                    rec.len(),
                    rec.graph.num_edges(),
                    recognizer_to_dot(g, &rec, Some(&cls)),
                ),
                Estimator::Double => {
                    let d = build_double(&rec, hi);
                    (
                        "double",
                        d.len(),
                        d.graph.num_edges(),
                        double_to_dot(g, hi, &rec, &d),
                    )
                }
                Estimator::Twin => {
                    let t = build_twin(&rec, hi);
                    (
                        "twin",
                        t.len(),
                        t.graph.num_edges(),
                        twin_to_dot(g, &rec, Some(&cls), &t),
                    )
                }
                Estimator::Spair => {
                    let s = build_state_pair(g, lo, hi);
                    (
                        "spair",
                        s.len(),
                        s.graph.num_edges(),
                        state_pair_to_dot(g, hi, &s, Some(&tspec)),
                    )
                }
            };
            match dot {
                Some(p) if p == Path::new("-") => print!("{text}"),
                Some(p) => {
                    write_out(&p, &text)?;
                    println!(
                        "{} {name}: {states} states, {edges} edges (recognizer {} states)",
                        m.name,
                        rec.len()
                    );
                }
                None => println!(
                    "{} {name}: {states} states, {edges} edges (recognizer {} states)",
                    m.name,
                    rec.len()
                ),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Crosscheck {
            seed,
            models,
            max_states,
            max_events,
        } => {
            let r = crosscheck::run(&crosscheck::Config {
                seed,
                models,
                max_states,
                max_events,
            });
            println!("models: {}", r.models);
            for (check, n) in [
                ("auto-vs-oracle", r.auto_vs_oracle),
                ("twin-vs-double", r.twin_vs_double),
                ("spair-vs-double", r.spair_vs_double),
                ("finite-vs-oracle", r.finite_vs_oracle),
                ("implication", r.implication),
            ] {
                println!("{check}: {n} comparisons, {} disagreements", r.count(check));
            }
            for d in &r.disagreements {
                println!("model {} {}: {}", d.model, d.check, d.detail);
            }
            if r.disagreements.is_empty() {
                Ok(ExitCode::SUCCESS)
            } else {
                Err(Failure::Internal(anyhow!(
                    "{} disagreements",
                    r.disagreements.len()
                )))
            }
        }
        Command::Gen {
            seed,
            states,
            events,
            density,
            p_low,
            p_high,
            p_relabel,
            out,
        } => {
            if states == 0 || events == 0 {
                return Err(anyhow!("--states and --events must be at least 1").into());
            }
            if !(density > 0.0 && density <= 1.0) {
                return Err(anyhow!("--density must be in (0, 1]").into());
            }
            if [p_low, p_high, p_relabel]
                .iter()
                .any(|p| !(0.0..=1.0).contains(p))
            {
                return Err(anyhow!("probabilities must be in [0, 1]").into());
            }
            let m = gen_random(GenParams {
                seed,
                states,
                events,
                density,
                p_low,
                p_high,
                p_relabel,
            });
            write_out(out.as_deref().unwrap_or(Path::new("-")), &emit_model(&m))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench {
            models,
            random,
            seed,
            max_states,
            engines,
            out,
        } => {
            let mut ms = models
                .iter()
                .map(|m| load_model(m))
                .collect::<anyhow::Result<Vec<_>>>()?;
            for i in 0..random {
                let mut p = suite_params(seed, i, max_states, 3);
                p.states = 1 + i * max_states / random.max(1);
                ms.push(gen_random(p));
            }
            if ms.is_empty() {
                return Err(anyhow!("no models given").into());
            }
            let engines = engines
                .split(',')
                .map(|e| {
                    parse_engine(e.trim())
                        .map(|c| (c, engine_name(c).to_string()))
                        .ok_or_else(|| anyhow!("unknown engine `{e}`"))
                })
                .collect::<anyhow::Result<Vec<(EngineChoice, String)>>>()?;
            let rows = bench(&ms, &engines);
            write_out(out.as_deref().unwrap_or(Path::new("-")), &to_csv(&rows))?;
            let bad = twin_bound_violations(&rows);
            if !bad.is_empty() {
                return Err(Failure::Internal(anyhow!(
                    "twin state count exceeds recognizer states squared on {} rows",
                    bad.len()
                )));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Explain { verdict } => {
            let text = std::fs::read_to_string(&verdict)
                .with_context(|| format!("cannot read {}", verdict.display()))?;
            let v = parse_verdict(&text).map_err(|e| anyhow!("{}: {e}", verdict.display()))?;
            print!("{}", explain(&v));
            Ok(ExitCode::from(if v.holds { 0 } else { 1 }))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(e)) => {
            eprintln!("internal error: {e:#}");
            ExitCode::from(3)
        }
    }
}
