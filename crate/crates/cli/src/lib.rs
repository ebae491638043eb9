//! Command-line front end: characters, verification suites and Pascal
//! determinants.

pub mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::{BigRational, Rational64};
use twistchar_core::engines::{
    compare_engines, enumeration_char_with, fermionic_char_with, printed_theorem_char_with, AlgebraSpec,
    EngineReport, Exec,
};
use twistchar_core::error::Error;
use twistchar_core::lattice::{AlgebraTag, Family};
use twistchar_core::pascal;
use twistchar_core::verify::{self, CocycleScope, Suite};

use output::{CompareDoc, Format, SeriesDoc};

/// Process exit statuses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    CheckFailed = 1,
    Usage = 2,
    Mismatch = 3,
    Internal = 4,
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> Self {
        ExitCode::from(s as u8)
    }
}

/// Errors caused by the request map to usage failures, anything else to
/// internal failures.
fn status_of(e: &Error) -> Status {
    match e {
        Error::Input(_) | Error::InvalidRank { .. } | Error::OffLattice { .. } | Error::NotPositiveDefinite(_) => {
            Status::Usage
        }
        _ => Status::Internal,
    }
}

#[derive(Debug, Parser)]
#[command(name = "twistchar", version, about = "Characters of principal subspaces of twisted affine Lie algebras")]
pub struct Cli {
    /// Worker threads for the parallel engines.
    #[arg(long, global = true, env = "TWISTCHAR_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute a character up to a q-degree.
    Char(CharArgs),
    /// Run an invariant suite and print one line per check.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        /// Cover the cocycle identities on the radius-1 ball only.
        #[arg(long)]
        quick: bool,
    },
    /// Print a generalized Pascal matrix with its determinant and the closed form.
    Pascal {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        v: u32,
        /// Shift parameter, a rational `num/den`.
        #[arg(long, default_value = "0")]
        p: String,
    },
}

#[derive(Debug, Args)]
pub struct CharArgs {
    /// A2lm1_2, Dl_2, E6_2 or D4_3.
    #[arg(long)]
    pub family: String,
    /// Rank parameter, required for A2lm1_2 (l >= 2) and Dl_2 (l >= 4).
    #[arg(long)]
    pub l: Option<u32>,
    #[arg(long)]
    pub level: u32,
    /// Largest q-degree kept, as `num/den` or an integer.
    #[arg(long)]
    pub trunc: String,
    #[arg(long, value_enum, default_value_t = Engine::Fermionic)]
    pub engine: Engine,
    #[arg(long, value_enum, default_value_t = Format::Pretty)]
    pub format: Format,
    /// Write here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Fermionic,
    Enumeration,
    Printed,
    Compare,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Cocycle,
    Pascal,
    Qp,
    Minsum,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Cocycle => Suite::Cocycle,
            SuiteArg::Pascal => Suite::Pascal,
            SuiteArg::Qp => Suite::Qp,
            SuiteArg::Minsum => Suite::Minsum,
            SuiteArg::All => Suite::All,
        }
    }
}

/// A validated `char` request.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub tag: AlgebraTag,
    pub level: u32,
    pub trunc: Rational64,
    pub engine: Engine,
    pub format: Format,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_args(args: &CharArgs) -> Result<Self, Error> {
        let family: Family = args.family.parse()?;
        let l = match (family.has_rank_parameter(), args.l) {
            (true, Some(l)) => l,
            (true, None) => return Err(Error::Input(format!("--l is required for {family}"))),
            (false, _) => family.min_rank(),
        };
        let tag = AlgebraTag::new(family, l)?;
        if args.level == 0 {
            return Err(Error::Input("--level must be at least 1".into()));
        }
        let trunc: Rational64 = args
            .trunc
            .trim()
            .parse()
            .map_err(|_| Error::Input(format!("--trunc {:?} is not a rational number", args.trunc)))?;
        if trunc < Rational64::from_integer(0) {
            return Err(Error::Input(format!("--trunc {trunc} is negative")));
        }
        Ok(RunConfig {
            tag,
            level: args.level,
            trunc,
            engine: args.engine,
            format: args.format,
            output: args.output.clone(),
        })
    }
}

fn fail(status: Status, msg: impl std::fmt::Display) -> Status {
    eprintln!("error: {msg}");
    status
}

fn open_output(path: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

enum CharOutput {
    Series(SeriesDoc),
    Compare(EngineReport),
}

fn compute(cfg: &RunConfig) -> Result<CharOutput, Error> {
    let exec = Exec::default();
    let spec = AlgebraSpec::new(cfg.tag, cfg.level)?;
    let (trunc, level, tag) = (cfg.trunc, cfg.level, &cfg.tag);
    Ok(match cfg.engine {
        Engine::Fermionic => {
            CharOutput::Series(SeriesDoc::new(tag, level, "fermionic", &fermionic_char_with(&spec, trunc, exec)?))
        }
        Engine::Enumeration => {
            CharOutput::Series(SeriesDoc::new(tag, level, "enumeration", &enumeration_char_with(&spec, trunc, exec)?))
        }
        Engine::Printed => CharOutput::Series(SeriesDoc::printed(tag, level, &printed_theorem_char_with(&spec, trunc, exec)?)),
        Engine::Compare => CharOutput::Compare(compare_engines(&spec, trunc, exec)?),
    })
}

pub fn compare_status(report: &EngineReport) -> Status {
    if report.is_match() {
        Status::Ok
    } else {
        Status::Mismatch
    }
}

pub fn cmd_char(cfg: &RunConfig) -> Status {
    let result = match compute(cfg) {
        Ok(r) => r,
        Err(e) => return fail(status_of(&e), e),
    };
    let mut out = match open_output(&cfg.output) {
        Ok(w) => w,
        Err(e) => return fail(Status::Usage, format!("cannot open output: {e}")),
    };
    let (written, status) = match result {
        CharOutput::Series(doc) => (output::write_series(&doc, cfg.format, &mut out), Status::Ok),
        CharOutput::Compare(report) => {
            let doc = CompareDoc::new(&cfg.tag, &report);
            (output::write_compare(&doc, &report, cfg.format, &mut out), compare_status(&report))
        }
    };
    if let Err(e) = written.and_then(|_| out.flush().map_err(Into::into)) {
        return fail(Status::Internal, format!("writing output: {e}"));
    }
    status
}

pub fn cmd_verify(suite: Suite, quick: bool) -> Status {
    let scope = if quick { CocycleScope::quick() } else { CocycleScope::full() };
    match verify::run(suite, &scope, Exec::default()) {
        Err(e) => fail(Status::Internal, e),
        Ok(checks) => {
            for c in &checks {
                println!("{c}");
            }
            let failed = checks.iter().filter(|c| !c.passed()).count();
            println!("{} of {} checks passed", checks.len() - failed, checks.len());
            if failed == 0 {
                Status::Ok
            } else {
                Status::CheckFailed
            }
        }
    }
}

pub fn cmd_pascal(n: usize, v: u32, p: &str) -> Status {
    let Ok(p) = p.trim().parse::<BigRational>() else {
        return fail(Status::Usage, format!("--p {p:?} is not a rational number"));
    };
    let matrix = match pascal::pascal_matrix(n, v, &p) {
        Ok(m) => m,
        Err(e) => return fail(status_of(&e), e),
    };
    let det = match matrix.determinant() {
        Ok(d) => d,
        Err(e) => return fail(Status::Internal, e),
    };
    let claimed = pascal::expected_base_det(n, v);
    println!("{matrix}");
    println!("determinant {det}, closed form {v}^(-{}) = {claimed}", n * (2 * n - 1));
    if det == claimed {
        println!("{det} = {claimed}");
        Status::Ok
    } else {
        println!("{det} != {claimed}");
        Status::CheckFailed
    }
}

fn dispatch(command: &Command) -> Status {
    match command {
        Command::Char(args) => match RunConfig::from_args(args) {
            Ok(cfg) => cmd_char(&cfg),
            Err(e) => fail(Status::Usage, e),
        },
        Command::Verify { suite, quick } => cmd_verify((*suite).into(), *quick),
        Command::Pascal { n, v, p } => cmd_pascal(*n, *v, p),
    }
}

pub fn run(cli: Cli) -> Status {
    match cli.threads {
        None => dispatch(&cli.command),
        Some(0) => fail(Status::Usage, "--threads must be at least 1"),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(&cli.command)),
            Err(e) => fail(Status::Internal, format!("thread pool: {e}")),
        },
    }
}
