use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use fiberscope::extensions::{
    build_pi, build_pi_amalgam, excessive_homology, p_torsion_search, torus_base_check, virtual_excessive_search,
    BaseGroup, MonodromySpec, TorsionVerdict, Verdict,
};
use fiberscope::orbits::{prym_experiment, OrbitOptions};
use fiberscope::selftest::{run_criterion, SelftestOptions, CRITERIA};
use fiberscope::Error;

#[derive(Parser)]
#[command(name = "fiberscope", version, about = "Homology of surface-group extensions and their finite covers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// H₁ and excessive homology of the extension described by a monodromy file.
    Excessive {
        #[command(flatten)]
        io: Io,
    },
    /// Search finite covers for nonzero excessive homology.
    VirtualExcessive {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        lattice: Lattice,
        /// Exit with status 3 if nothing is found within the cap.
        #[arg(long)]
        certify: bool,
    },
    /// Cover search for a torus base; the file must have base {"surface": 1}.
    TorusCheck {
        #[command(flatten)]
        io: Io,
        #[arg(long = "base-mod", value_delimiter = ',', default_values_t = [2u64, 5, 10])]
        base_mods: Vec<u64>,
        #[arg(long = "cap-index", default_value_t = 1000)]
        cap: u64,
        #[arg(long)]
        certify: bool,
    },
    /// First cover whose H₁ has torsion divisible by a prime.
    PTorsion {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        lattice: Lattice,
        #[arg(long, default_value_t = 2)]
        prime: u64,
        #[arg(long)]
        certify: bool,
    },
    /// Emit the two-generator free-base monodromy file.
    Korkmaz {
        #[arg(long, default_value_t = 3)]
        genus: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Emit the mapping-torus monodromy file of the periodic chain element.
    Pi {
        #[arg(long, default_value_t = 2)]
        genus: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Invariant ranks and sample orbits on H₁ of the mod-m characteristic cover.
    Prym {
        #[arg(long, default_value_t = 2)]
        genus: usize,
        #[arg(long = "mod", default_value_t = 2)]
        modulus: u64,
        #[arg(long, default_value_t = 4)]
        samples: usize,
        #[arg(long, default_value_t = fiberscope::orbits::DEFAULT_BUDGET)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Out,
    },
    /// Run the acceptance checks.
    Selftest {
        #[arg(long, default_value_t = SelftestOptions::default().seed)]
        seed: u64,
        /// Run a single criterion.
        #[arg(long)]
        only: Option<usize>,
        /// Wall-clock bound for the Prym check, in seconds.
        #[arg(long = "time-limit", default_value_t = 1800)]
        time_limit: u64,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Args)]
struct Io {
    /// Monodromy file.
    #[arg(long = "in")]
    input: PathBuf,
    #[command(flatten)]
    out: Out,
}

#[derive(Args)]
struct Out {
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct Lattice {
    /// Fiber moduli m.
    #[arg(long = "mod", value_delimiter = ',', default_values_t = [1u64, 2])]
    fiber_mods: Vec<u64>,
    /// Base moduli q.
    #[arg(long = "base-mod", value_delimiter = ',', default_values_t = [2u64])]
    base_mods: Vec<u64>,
    /// Largest total index explored.
    #[arg(long = "cap-index", default_value_t = 256)]
    cap: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

enum Failure {
    Validation(String),
    Cap(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CapExceeded(_) => Failure::Cap(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn read_spec(path: &PathBuf) -> Result<MonodromySpec, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))?;
    MonodromySpec::from_json(&text).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))
}

fn write_text(out: &Out, text: &str) -> Outcome {
    match &out.out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Other(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn render_text(prefix: &str, v: &Value, lines: &mut Vec<String>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                render_text(&key, x, lines);
            }
        }
        Value::Array(xs) if xs.iter().any(|x| x.is_object()) => {
            for (i, x) in xs.iter().enumerate() {
                render_text(&format!("{prefix}[{i}]"), x, lines);
            }
        }
        _ => lines.push(format!("{prefix}: {v}")),
    }
}

fn emit<T: Serialize>(out: &Out, report: &T) -> Outcome {
    let text = match out.format {
        Format::Json => serde_json::to_string_pretty(report).expect("serializable") + "\n",
        Format::Text => {
            let mut lines = Vec::new();
            render_text("", &serde_json::to_value(report).expect("serializable"), &mut lines);
            lines.join("\n") + "\n"
        }
    };
    write_text(out, &text)
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Excessive { io } => emit(&io.out, &excessive_homology(&read_spec(&io.input)?)?),
        Command::VirtualExcessive { io, lattice, certify } => {
            let spec = read_spec(&io.input)?;
            let r = virtual_excessive_search(&spec, &lattice.fiber_mods, &lattice.base_mods, lattice.cap)?;
            emit(&io.out, &r)?;
            if certify && r.verdict == Verdict::ExhaustedCap {
                return Err(Failure::Cap("no excessive homology found within the cap".into()));
            }
            Ok(())
        }
        Command::TorusCheck { io, base_mods, cap, certify } => {
            let spec = read_spec(&io.input)?;
            if spec.base() != BaseGroup::Surface(1) {
                return Err(Failure::Validation("torus-check needs base {\"surface\": 1}".into()));
            }
            let m = &spec.monodromies();
            let r = torus_base_check(m[0].symplectic(), m[1].symplectic(), &base_mods, cap)?;
            emit(&io.out, &r)?;
            if certify && r.verdict == Verdict::ExhaustedCap {
                return Err(Failure::Cap("no excessive homology found within the cap".into()));
            }
            Ok(())
        }
        Command::PTorsion { io, lattice, prime, certify } => {
            let spec = read_spec(&io.input)?;
            let r = p_torsion_search(&spec, prime, &lattice.fiber_mods, &lattice.base_mods, lattice.cap)?;
            emit(&io.out, &r)?;
            if certify && r.verdict == TorsionVerdict::ExhaustedCap {
                return Err(Failure::Cap(format!("no {prime}-torsion found within the cap")));
            }
            Ok(())
        }
        Command::Korkmaz { genus, out } => write_text(&out, &build_pi_amalgam(genus)?.to_json()),
        Command::Pi { genus, out } => write_text(&out, &build_pi(genus)?.to_json()),
        Command::Prym { genus, modulus, samples, budget, seed, out } => {
            let start = Instant::now();
            let options = OrbitOptions { budget, seed, ..OrbitOptions::default() };
            let r = prym_experiment(genus, modulus, samples, &options)?;
            eprintln!("prym: {:.3?}", start.elapsed());
            emit(&out, &r)
        }
        Command::Selftest { seed, only, time_limit, out } => {
            let options = SelftestOptions { seed, prym_time_limit: Duration::from_secs(time_limit) };
            let ids: Vec<usize> = match only {
                Some(id) if (1..=CRITERIA.len()).contains(&id) => vec![id],
                Some(id) => return Err(Failure::Validation(format!("no criterion {id}"))),
                None => (1..=CRITERIA.len()).collect(),
            };
            let results: Vec<_> = ids
                .into_iter()
                .map(|id| {
                    let t = Instant::now();
                    let r = run_criterion(id, &options);
                    eprintln!("criterion {id}: {:.3?}", t.elapsed());
                    r
                })
                .collect();
            match out.format {
                Format::Json => emit(&out, &results)?,
                Format::Text => {
                    let lines: Vec<String> = results.iter().map(|r| r.line()).collect();
                    write_text(&out, &(lines.join("\n") + "\n"))?;
                }
            }
            if results.iter().all(|r| r.passed) {
                Ok(())
            } else {
                Err(Failure::Other("some criteria failed".into()))
            }
        }
    }
}

fn init_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("FIBERSCOPE_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Validation(format!("FIBERSCOPE_THREADS={v} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Other(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match init_threads().and_then(|()| run(cli.command)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Cap(msg)) => {
            eprintln!("cap exhausted: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Other(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
