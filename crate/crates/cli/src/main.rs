use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use crn_core::diffusive::{self, TrichotomyVerdict};
use crn_core::pathway::{self, PathwayWitness, DEFAULT_BOUND};
use crn_core::rational::{self, Rational};
use crn_core::report::{self, AnalysisOptions, ProbeOptions};
use crn_core::{parse_network, siphon, Error, RationalMatrix, ReactionNetwork};

mod text;

const EXIT_INPUT: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(name = "crn", version, about = "Exact structural analysis of reaction networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Format {
    /// Emit JSON.
    #[arg(long, conflicts_with = "text")]
    json: bool,
    /// Emit human-readable text.
    #[arg(long)]
    text: bool,
}

impl Format {
    fn json_or(self, default_json: bool) -> bool {
        if self.json {
            true
        } else if self.text {
            false
        } else {
            default_json
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Full report: structure, minimal siphons, persistence, optional catalysis and probe.
    Analyze {
        file: PathBuf,
        /// Re-check every certificate in the report; exit 3 on any failure.
        #[arg(long)]
        verify: bool,
        /// Search for catalytic sets.
        #[arg(long)]
        catalysis: bool,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: usize,
        /// Run this many randomized simulations as an empirical cross-check.
        #[arg(long)]
        probe: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50.0)]
        t_end: f64,
        #[command(flatten)]
        format: Format,
    },
    /// List siphons.
    Siphons {
        file: PathBuf,
        /// Only inclusion-minimal siphons.
        #[arg(long)]
        minimal: bool,
        #[command(flatten)]
        format: Format,
    },
    /// Classify one species set, e.g. `--set X,Y`.
    Classify {
        file: PathBuf,
        #[arg(long)]
        set: String,
        #[command(flatten)]
        format: Format,
    },
    /// Persistence certificate.
    Certify {
        file: PathBuf,
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        format: Format,
    },
    /// Integrate the mass-action ODE and write a CSV trajectory.
    Simulate {
        file: PathBuf,
        /// Rate constants by reaction order, comma separated.
        #[arg(long)]
        rates: String,
        /// Initial concentrations by species order, comma separated.
        #[arg(long)]
        x0: String,
        #[arg(long, default_value_t = 10.0)]
        t_end: f64,
        /// CSV destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        format: Format,
    },
    /// Certified trichotomy for a diffusive matrix file.
    Trichotomy {
        file: PathBuf,
        #[command(flatten)]
        format: Format,
    },
    /// Bounded reachability between two populations.
    Pathway {
        file: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: usize,
        /// Also write the witness or certificate as JSON.
        #[arg(long)]
        dump: Option<PathBuf>,
        #[command(flatten)]
        format: Format,
    },
    /// Replay a pathway witness written by `pathway --dump`.
    Replay {
        file: PathBuf,
        witness: PathBuf,
        #[command(flatten)]
        format: Format,
    },
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::Invariant(_)) {
            EXIT_INTERNAL
        } else {
            EXIT_INPUT
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn input(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<(String, ReactionNetwork), Failure> {
    let text = read(path)?;
    let net = parse_network(&text).map_err(|e| input(format!("{}: {e}", path.display())))?;
    Ok((text, net))
}

fn parse_list(text: &str, what: &str) -> Result<Vec<Rational>, Failure> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| rational::parse_rational(s).map_err(|e| input(format!("{what}: {e}"))))
        .collect()
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Analyze {
            file,
            verify,
            catalysis,
            bound,
            probe,
            seed,
            t_end,
            format,
        } => {
            let source = read(&file)?;
            let options = AnalysisOptions {
                catalysis,
                bound,
                probe: probe.map(|trials| ProbeOptions { trials, t_end, seed }),
            };
            let r = report::analyze(&source, &options)
                .map_err(|e| Failure::from(e).with_context(&file))?;
            let mut out = if format.json_or(true) {
                r.to_json() + "\n"
            } else {
                text::report(&r)
            };
            if verify {
                let v = r.verify();
                if !v.passed() {
                    return Err(Failure {
                        code: EXIT_INTERNAL,
                        message: format!("verification failed:\n{}", v.failures.join("\n")),
                    });
                }
                eprintln!("verified {} certificates, 0 failures", v.checked);
                if !format.json_or(true) {
                    out.push_str(&format!("verified: {} certificates, 0 failures\n", v.checked));
                }
            }
            Ok(out)
        }
        Command::Siphons {
            file,
            minimal,
            format,
        } => {
            let (_, net) = load(&file)?;
            let sets = if minimal {
                siphon::minimal_siphons(&net)
            } else {
                siphon::all_siphons(&net)?
            };
            let names: Vec<Vec<String>> = sets.iter().map(|s| net.set_names(s)).collect();
            Ok(if format.json_or(false) {
                report::to_canonical_json(&names) + "\n"
            } else {
                names.iter().map(|n| format!("{{{}}}\n", n.join(", "))).collect()
            })
        }
        Command::Classify { file, set, format } => {
            let (_, net) = load(&file)?;
            let t = net.species_set(&set)?;
            let c = siphon::classify_set(&net, &t)?;
            Ok(if format.json_or(false) {
                report::to_canonical_json(&c) + "\n"
            } else {
                text::classification(&net, &c)
            })
        }
        Command::Certify {
            file,
            verify,
            format,
        } => {
            let (_, net) = load(&file)?;
            let c = crn_core::certify(&net)?;
            if verify {
                c.verify(&net).map_err(|e| Failure {
                    code: EXIT_INTERNAL,
                    message: format!("verification failed: {e}"),
                })?;
            }
            Ok(if format.json_or(false) {
                report::to_canonical_json(&c) + "\n"
            } else {
                text::persistence(&c) + if verify { "verified: ok\n" } else { "" }
            })
        }
        Command::Simulate {
            file,
            rates,
            x0,
            t_end,
            out,
            format,
        } => {
            let (_, net) = load(&file)?;
            let params = crn_core::SimulationParams::new(
                parse_list(&rates, "rates")?,
                parse_list(&x0, "x0")?,
                t_end,
            );
            let run = crn_core::simulate(&net, &params)?;
            let csv = run.to_csv(&net.species_names());
            let summary = format!(
                "steps: {} accepted, {} rejected\nmin_concentration: {}\nfinal: {}\n",
                run.accepted_steps,
                run.rejected_steps,
                run.min_concentration,
                run.final_state()
                    .iter()
                    .map(f64::to_string)
                    .collect::<Vec<_>>()
                    .join(",")
            );
            match out {
                Some(path) => {
                    fs::write(&path, csv).map_err(|e| input(format!("{}: {e}", path.display())))?;
                    Ok(if format.json_or(false) {
                        serde_json::json!({
                            "accepted_steps": run.accepted_steps,
                            "final": run.final_state(),
                            "min_concentration": run.min_concentration,
                            "rejected_steps": run.rejected_steps,
                        })
                        .to_string()
                            + "\n"
                    } else {
                        summary
                    })
                }
                None => {
                    eprint!("{summary}");
                    Ok(csv)
                }
            }
        }
        Command::Trichotomy { file, format } => {
            let a = RationalMatrix::parse(&read(&file)?)?;
            let strong = diffusive::validate_strongly_diffusive(&a)?;
            if !strong && !diffusive::validate_diffusive(&a)? {
                return Err(input("matrix is not diffusive"));
            }
            let verdict: TrichotomyVerdict = if strong {
                diffusive::trichotomy(&a)?
            } else {
                diffusive::classify_diffusive_general(&a)?
            };
            let verified = verdict.verify(&a);
            if !verified {
                return Err(Failure {
                    code: EXIT_INTERNAL,
                    message: "trichotomy certificate failed its own check".into(),
                });
            }
            Ok(if format.json_or(false) {
                report::to_canonical_json(&serde_json::json!({
                    "strongly_diffusive": strong,
                    "verdict": verdict,
                    "verified": verified,
                })) + "\n"
            } else {
                text::trichotomy(&verdict, strong)
            })
        }
        Command::Pathway {
            file,
            from,
            to,
            bound,
            dump,
            format,
        } => {
            let (_, net) = load(&file)?;
            let source = net.parse_complex(&from)?;
            let target = net.parse_complex(&to)?;
            let v = pathway::bounded_reach(&net, &source, &target, bound)?;
            if !v.verify(&net, &source, &target) {
                return Err(Failure {
                    code: EXIT_INTERNAL,
                    message: "reachability verdict failed its own check".into(),
                });
            }
            if let Some(path) = dump {
                fs::write(&path, report::to_canonical_json(&v) + "\n")
                    .map_err(|e| input(format!("{}: {e}", path.display())))?;
            }
            Ok(if format.json_or(false) {
                report::to_canonical_json(&v) + "\n"
            } else {
                text::reachability(&net, &v)
            })
        }
        Command::Replay {
            file,
            witness,
            format,
        } => {
            let (_, net) = load(&file)?;
            let raw = read(&witness)?;
            let w: PathwayWitness = match serde_json::from_str::<pathway::ReachabilityVerdict>(&raw)
            {
                Ok(pathway::ReachabilityVerdict::Reachable { witness }) => witness,
                Ok(_) => return Err(input("file holds no pathway witness")),
                Err(_) => serde_json::from_str(&raw)
                    .map_err(|e| input(format!("{}: {e}", witness.display())))?,
            };
            let end = pathway::replay(&net, &w)?;
            Ok(if format.json_or(false) {
                report::to_canonical_json(&serde_json::json!({
                    "end": net.render_complex(&end),
                    "start": net.render_complex(&w.start),
                    "steps": w.len(),
                })) + "\n"
            } else {
                format!(
                    "replayed {} steps: {} ->* {}\n",
                    w.len(),
                    net.render_complex(&w.start),
                    net.render_complex(&end)
                )
            })
        }
    }
}

impl Failure {
    fn with_context(mut self, path: &Path) -> Self {
        self.message = format!("{}: {}", path.display(), self.message);
        self
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
