//! `commutant`: command-line front end.
//!
//! Exit codes: 0 verified, 1 usage or validation error, 2 claim not
//! witnessed, 3 scale exceeded. `COMMUTANT_THREADS` sizes the worker pool.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use commutant::fedder::{self, FedderConfig, DEFAULT_TERM_CEILING};
use commutant::groebner::{verify_sop, DEFAULT_MAX_PAIRS};
use commutant::matrices::{build_ideal, detblock_reduction_check, IdealName};
use commutant::sop::{verify_recursions, AppendixFixture, SopVariant, APPENDIX_GOLDENS};
use commutant::{lemmas, Error};

const THREADS_ENV: &str = "COMMUTANT_THREADS";

#[derive(Parser)]
#[command(name = "commutant", version, about = "Exact checks on the commutator ideals of generic matrices")]
struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generator lists.
    #[command(subcommand)]
    Ideal(IdealCmd),
    /// Systems of parameters.
    #[command(subcommand)]
    Sop(SopCmd),
    /// Fedder's criterion.
    #[command(subcommand)]
    Fpure(FpureCmd),
    /// Binomial identities.
    #[command(subcommand)]
    Lemma(LemmaCmd),
    /// Induction-step identities.
    #[command(subcommand)]
    Recursions(RecursionsCmd),
    /// Specialized matrices against the checked-in goldens.
    #[command(subcommand)]
    Fixtures(FixturesCmd),
    /// Determinantal-block reduction.
    #[command(subcommand)]
    Detblock(DetblockCmd),
}

#[derive(Subcommand)]
enum IdealCmd {
    Dump {
        #[arg(long)]
        n: u8,
        #[arg(long, default_value_t = 0)]
        char: u32,
        #[arg(long, value_enum, default_value_t = SetArg::Full)]
        set: SetArg,
    },
}

#[derive(Subcommand)]
enum SopCmd {
    Verify {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = DEFAULT_MAX_PAIRS)]
        max_pairs: usize,
    },
}

#[derive(Subcommand)]
enum FpureCmd {
    Check {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = DEFAULT_TERM_CEILING)]
        term_ceiling: usize,
        /// Run the induction-step premises as well (n >= 5).
        #[arg(long)]
        induction: bool,
    },
}

#[derive(Subcommand)]
enum LemmaCmd {
    /// One JSON line per odd prime up to `--pmax`.
    Binom {
        #[arg(long, default_value_t = 97)]
        pmax: u32,
    },
    /// The n = 4 coefficient: closed form, displayed chain, and the fold.
    N4 {
        #[arg(long, default_value_t = 3)]
        p: u32,
        #[arg(long, default_value_t = DEFAULT_TERM_CEILING)]
        term_ceiling: usize,
    },
}

#[derive(Subcommand)]
enum RecursionsCmd {
    Verify {
        #[arg(long)]
        n: u8,
        #[arg(long, default_value_t = 0)]
        char: u32,
    },
}

#[derive(Subcommand)]
enum FixturesCmd {
    Appendix {
        #[arg(long)]
        n: u8,
        /// 2 selects the characteristic-2 system for n = 8.
        #[arg(long, default_value_t = 0)]
        char: u32,
    },
}

#[derive(Subcommand)]
enum DetblockCmd {
    Check {
        #[arg(long)]
        n: u8,
    },
}

#[derive(Args)]
struct Target {
    #[arg(long)]
    n: u8,
    #[arg(long)]
    char: u32,
    #[arg(long, value_enum, default_value_t = VariantArg::Full)]
    variant: VariantArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum SetArg {
    #[value(alias = "I")]
    Diag,
    #[value(alias = "J")]
    Anti,
    #[value(alias = "FULL")]
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    /// The system for I + J matching n and the characteristic.
    Full,
    FullOdd,
    FullEven,
    FullEvenChar2,
    DiagI,
    AntiJ,
}

impl VariantArg {
    fn resolve(self, n: u8, characteristic: u32) -> SopVariant {
        match self {
            VariantArg::Full => SopVariant::full_for(n, characteristic),
            VariantArg::FullOdd => SopVariant::FullOdd,
            VariantArg::FullEven => SopVariant::FullEven,
            VariantArg::FullEvenChar2 => SopVariant::FullEvenChar2,
            VariantArg::DiagI => SopVariant::DiagI,
            VariantArg::AntiJ => SopVariant::AntiJ,
        }
    }
}

enum Failure {
    Usage(String),
    NotWitnessed,
    Scale(String),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_scale_exceeded() {
            Failure::Scale(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

struct Sink(Option<PathBuf>, String);

impl Sink {
    fn json<T: Serialize>(&mut self, v: &T) {
        self.1.push_str(&serde_json::to_string_pretty(v).expect("report serializes"));
        self.1.push('\n');
    }

    fn line<T: Serialize>(&mut self, v: &T) {
        self.1.push_str(&serde_json::to_string(v).expect("report serializes"));
        self.1.push('\n');
    }

    fn raw(&mut self, s: &str) {
        self.1.push_str(s);
    }

    fn flush(self) -> std::io::Result<()> {
        match self.0 {
            Some(path) => std::fs::write(path, self.1),
            None => std::io::stdout().lock().write_all(self.1.as_bytes()),
        }
    }
}

fn verdict(ok: bool) -> Result<(), Failure> {
    if ok {
        Ok(())
    } else {
        Err(Failure::NotWitnessed)
    }
}

fn run(cli: Cli, out: &mut Sink) -> Result<(), Failure> {
    match cli.command {
        Command::Ideal(IdealCmd::Dump { n, char, set }) => {
            let name = match set {
                SetArg::Diag => IdealName::I,
                SetArg::Anti => IdealName::J,
                SetArg::Full => IdealName::Full,
            };
            out.json(&build_ideal(n, char, name)?);
            Ok(())
        }
        Command::Sop(SopCmd::Verify { target, max_pairs }) => {
            let variant = target.variant.resolve(target.n, target.char);
            let rep = verify_sop(target.n, target.char, variant, max_pairs)?;
            out.json(&rep);
            verdict(rep.verdict)
        }
        Command::Fpure(FpureCmd::Check { target, term_ceiling, induction }) => {
            let cfg = FedderConfig { term_ceiling, parallel: true };
            let variant = target.variant.resolve(target.n, target.char);
            if induction {
                let rep = fedder::induction_witness_check(target.n, target.char, &cfg)?;
                eprintln!("fold took {:?}", rep.fedder.elapsed);
                out.json(&rep);
                return verdict(rep.passed);
            }
            let rep = fedder::fpure_check(target.n, target.char, variant, &cfg)?;
            eprintln!("fold took {:?}", rep.elapsed);
            out.json(&rep);
            verdict(rep.is_fpure_witnessed)
        }
        Command::Lemma(LemmaCmd::Binom { pmax }) => {
            let rows = lemmas::lemma_table(pmax)?;
            for r in &rows {
                out.line(r);
            }
            verdict(rows.iter().all(|r| r.lower_ab_vanish && r.a_half_ok && r.claim))
        }
        Command::Lemma(LemmaCmd::N4 { p, term_ceiling }) => {
            #[derive(Serialize)]
            struct N4Report {
                #[serde(flatten)]
                chain: lemmas::N4Chain,
                target_coefficient: Option<u32>,
                note: Option<String>,
            }
            let chain = lemmas::n4_chain(p)?;
            let cfg = FedderConfig { term_ceiling, parallel: true };
            let (target, note) = match fedder::target_coefficient(p, &cfg) {
                Ok(c) => (Some(c), None),
                Err(e) if e.is_scale_exceeded() => (None, Some(format!("fold skipped: {e}"))),
                Err(e) => return Err(e.into()),
            };
            let ok = chain.all_equal && chain.closed_form != 0 && target.is_none_or(|t| t == chain.closed_form);
            out.json(&N4Report { chain, target_coefficient: target, note });
            verdict(ok)
        }
        Command::Recursions(RecursionsCmd::Verify { n, char }) => {
            let rep = verify_recursions(n, char)?;
            out.json(&rep);
            verdict(rep.passed)
        }
        Command::Fixtures(FixturesCmd::Appendix { n, char }) => {
            let golden = APPENDIX_GOLDENS
                .iter()
                .find(|(_, gn, gc, _)| *gn == n && (*gc == 2) == (char == 2))
                .ok_or_else(|| Failure::Usage(format!("no appendix fixture for n={n}, char={char}")))?;
            let fresh = AppendixFixture::generate(n, golden.2)?.to_json();
            out.raw(&fresh);
            if fresh != golden.3 {
                eprintln!("{} differs from the regenerated matrices", golden.0);
            }
            verdict(fresh == golden.3)
        }
        Command::Detblock(DetblockCmd::Check { n }) => {
            let rep = detblock_reduction_check(n)?;
            out.json(&rep);
            verdict(rep.passed)
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .map_err(|_| Failure::Usage(format!("{THREADS_ENV} must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut sink = Sink(cli.output.clone(), String::new());
    let result = configure_threads().and_then(|_| run(cli, &mut sink));
    // Reports are written even when the claim fails, so they can be inspected.
    let flushed = sink.flush();
    let code = match (result, flushed) {
        (Ok(()), Ok(())) => 0,
        (Err(Failure::NotWitnessed), Ok(())) => 2,
        (Err(Failure::Scale(m)), _) => {
            eprintln!("{m}");
            3
        }
        (Err(Failure::Usage(m)), _) => {
            eprintln!("error: {m}");
            1
        }
        (Err(Failure::Io(e)), _) | (_, Err(e)) => {
            eprintln!("io error: {e}");
            1
        }
    };
    ExitCode::from(code)
}
