//! `nilsheet`: nilpotent orbits, induction, Namikawa-Weyl groups and sheets of
//! classical Lie algebras from the command line.

mod cache;
mod commands;
mod report;

use std::collections::BTreeMap;
use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use nilsheet_core::{tables, Error, Result, MODULE_VERSION};

use cache::Cache;
use commands::Target;
use report::{Format, Report};

#[derive(Parser)]
#[command(name = "nilsheet", version, about = "Exact combinatorics of nilpotent orbits in classical Lie algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    /// Worker threads for verification suites (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Neither read nor write the result cache.
    #[arg(long, global = true)]
    no_cache: bool,
}

#[derive(Subcommand)]
enum Command {
    /// List the nilpotent orbits of a type.
    Orbits { ty: String },
    /// Induce an orbit from a Levi, e.g. `induce C2 '(1;m=1)' --tail 2`.
    Induce {
        ty: String,
        levi: String,
        /// gl orbits, one partition per block: `[2];[1,1]`. Default: zero orbits.
        #[arg(long)]
        gl: Option<String>,
        /// Tail orbit, e.g. `2,2:I`. Default: zero orbit.
        #[arg(long)]
        tail: Option<String>,
    },
    /// Rigidity of an orbit, or of every orbit of a type.
    Rigid { target: String },
    /// Birational rigidity of an orbit, or of every orbit of a type.
    Birigid { target: String },
    /// The unique birationally rigid birational induction datum.
    Datum { target: String },
    /// Namikawa space and Namikawa-Weyl group.
    Namikawa { target: String },
    /// Sheets of a type; with `--birational`, birational sheets.
    Sheets {
        ty: String,
        #[arg(long)]
        birational: bool,
    },
    /// Orbit-method label of an adjoint orbit, e.g. `'C2 | xi=(1;0) | nilp=[1];[2]'`.
    Label { orbit: String },
    /// Run verification suites on a type.
    Verify {
        ty: String,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Samples for the injectivity suite.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Sampler seed for the injectivity suite.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Cover,
    Uniqueness,
    Weyl,
    Injectivity,
    Cache,
    All,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Cover => "cover",
            Suite::Uniqueness => "uniqueness",
            Suite::Weyl => "weyl",
            Suite::Injectivity => "injectivity",
            Suite::Cache => "cache",
            Suite::All => "all",
        }
    }
}

fn table_digest() -> Result<String> {
    let t = tables::active()?;
    Ok(hex::encode(Sha256::digest(format!("{:?}", *t).as_bytes())))
}

struct Runner {
    cache: Option<Cache>,
    digest: String,
}

impl Runner {
    fn key(&self, request: &str) -> String {
        format!("{MODULE_VERSION}\ntable {}\n{request}", self.digest)
    }

    fn cached(&self, request: &str, compute: impl FnOnce() -> Result<Report>) -> Result<Report> {
        let key = self.key(request);
        if let Some(c) = &self.cache {
            if let Some(hit) = c.get(&key) {
                return Ok(hit);
            }
        }
        let r = compute()?;
        if let Some(c) = &self.cache {
            if let Err(e) = c.put(&key, &r) {
                eprintln!("warning: cache write failed: {e}");
            }
        }
        Ok(r)
    }

    /// Recomputes a few reports and compares them byte for byte with the cache.
    fn verify_cache(&self, ty: nilsheet_core::rootsys::ClassicalType) -> Result<Report> {
        let cache = self
            .cache
            .as_ref()
            .ok_or_else(|| Error::InvalidDatum("the cache suite needs the cache (drop --no-cache)".into()))?;
        let t = Target::Type(ty);
        type Job<'a> = (String, Box<dyn Fn() -> Result<Report> + 'a>);
        let jobs: Vec<Job> = vec![
            (format!("orbits {ty}"), Box::new(move || commands::orbits(ty))),
            (format!("datum {ty}"), Box::new(|| commands::datum(&t))),
            (format!("namikawa {ty}"), Box::new(|| commands::namikawa(&t))),
            (format!("rigid {ty}"), Box::new(|| commands::rigidity(&t, false))),
            (format!("birigid {ty}"), Box::new(|| commands::rigidity(&t, true))),
        ];
        let mut rows = Vec::new();
        let mut records = BTreeMap::new();
        let mut pass = true;
        for (request, job) in jobs {
            let fresh = job()?;
            let key = self.key(&request);
            let status = match cache.get(&key) {
                Some(hit) => {
                    if json(&hit) == json(&fresh) {
                        "identical"
                    } else {
                        "mismatch"
                    }
                }
                None => {
                    cache.put(&key, &fresh).map_err(|e| Error::Internal(format!("cache write failed: {e}")))?;
                    match cache.get(&key) {
                        Some(back) if json(&back) == json(&fresh) => "stored",
                        _ => "mismatch",
                    }
                }
            };
            pass &= status != "mismatch";
            rows.push(vec![request.clone(), status.to_string()]);
            records.insert(request, status);
        }
        Ok(Report::new(&["request", "status"], rows, &records).with_pass(pass))
    }
}

fn json(r: &Report) -> String {
    serde_json::to_string(r).expect("report serializes")
}

fn run(cli: &Cli) -> Result<Report> {
    let digest = table_digest()?;
    let cache = (!cli.no_cache).then(|| Cache::new(Cache::default_dir()));
    let runner = Runner { cache, digest };
    match &cli.command {
        Command::Orbits { ty } => {
            let ty = commands::parse_type(ty)?;
            runner.cached(&format!("orbits {ty}"), || commands::orbits(ty))
        }
        Command::Induce { ty, levi, gl, tail } => {
            let d = commands::parse_datum(ty, levi, gl.as_deref(), tail.as_deref())?;
            let request = format!("induce {}", serde_json::to_string(&d).expect("datum serializes"));
            runner.cached(&request, || commands::induce_cmd(&d))
        }
        Command::Rigid { target } | Command::Birigid { target } => {
            let birational = matches!(cli.command, Command::Birigid { .. });
            let t = commands::parse_target(target)?;
            let verb = if birational { "birigid" } else { "rigid" };
            runner.cached(&format!("{verb} {}", target_key(&t)), || commands::rigidity(&t, birational))
        }
        Command::Datum { target } => {
            let t = commands::parse_target(target)?;
            runner.cached(&format!("datum {}", target_key(&t)), || commands::datum(&t))
        }
        Command::Namikawa { target } => {
            let t = commands::parse_target(target)?;
            runner.cached(&format!("namikawa {}", target_key(&t)), || commands::namikawa(&t))
        }
        Command::Sheets { ty, birational } => {
            let ty = commands::parse_type(ty)?;
            runner.cached(&format!("sheets {ty} {birational}"), || commands::sheets(ty, *birational))
        }
        Command::Label { orbit } => {
            let o = nilsheet_core::orbitmethod::parse_adjoint_orbit(orbit)?;
            runner.cached(&format!("label {o}"), || commands::label(orbit))
        }
        Command::Verify { ty, suite, samples, seed } => {
            let ty = commands::parse_type(ty)?;
            let one = |s: Suite| -> Result<Report> {
                match s {
                    Suite::Cover => runner.cached(&format!("verify cover {ty}"), || commands::verify_cover(ty)),
                    Suite::Uniqueness => runner.cached(&format!("verify uniqueness {ty}"), || commands::verify_unique(ty)),
                    Suite::Weyl => runner.cached(&format!("verify weyl {ty}"), || commands::verify_weyl(ty)),
                    Suite::Injectivity => runner.cached(&format!("verify injectivity {ty} {samples} {seed}"), || {
                        commands::verify_inj(ty, *samples, *seed)
                    }),
                    Suite::Cache => runner.verify_cache(ty),
                    Suite::All => unreachable!(),
                }
            };
            if *suite != Suite::All {
                return one(*suite);
            }
            let mut rows = Vec::new();
            let mut records = BTreeMap::new();
            let mut pass = true;
            for s in [Suite::Cover, Suite::Uniqueness, Suite::Weyl, Suite::Injectivity] {
                let r = one(s)?;
                let p = r.pass.unwrap_or(true);
                pass &= p;
                rows.push(vec![s.name().to_string(), if p { "PASS" } else { "FAIL" }.to_string()]);
                records.insert(s.name(), r.records);
            }
            Ok(Report::new(&["suite", "result"], rows, &records).with_pass(pass))
        }
    }
}

fn target_key(t: &Target) -> String {
    match t {
        Target::Type(ty) => ty.to_string(),
        Target::Orbit(o) => o.to_string(),
    }
}

fn exit_code(e: &Error) -> u8 {
    if e.is_consistency_failure() {
        3
    } else if e.is_table_gap() {
        4
    } else {
        2
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("warning: could not size the thread pool: {e}");
        }
    }
    match run(&cli) {
        Ok(report) => {
            let text = report.render(cli.format);
            let mut out = std::io::stdout().lock();
            if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(1);
            }
            match report.pass {
                Some(false) => {
                    eprintln!("verification failed");
                    ExitCode::from(3)
                }
                _ => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
