use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mzv_core::linalg::{basis_header, dimension_report, write_csv_row};
use mzv_core::numeric::{EvalContext, Evaluator};
use mzv_core::poset::mu;
use mzv_core::products::{bar_harmonic, circled_harmonic, harmonic, shuffle, star_index};
use mzv_core::regularization::{reg_harmonic, reg_shuffle, reg_star_harmonic, reg_star_shuffle};
use mzv_core::relations::enumerate_relations;
use mzv_core::suites::Suite;
use mzv_core::{Index, LinComb, MzvError};

#[derive(Parser)]
#[command(name = "mzv", version, about = "Multiple zeta value workbench")]
struct Cli {
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Product of two operands, each an index like 1,2 or a word sum like "e1 e0 + 2·e1 e1 e0".
    Expand {
        #[arg(long, value_enum)]
        op: Op,
        a: String,
        b: String,
    },
    /// μ(K,L) next to K ⊛ L★.
    Mu { k: Index, l: Index },
    /// Symbolic regularization as a polynomial in T.
    Reg {
        #[arg(long, value_enum)]
        mode: RegMode,
        k: Index,
    },
    /// Int-Ser relations of one weight.
    Relations {
        #[arg(long)]
        weight: u32,
        #[arg(long)]
        skip_trivial: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dimension table from the rank of all Int-Ser relations.
    Dims {
        #[arg(long)]
        max_weight: u32,
    },
    /// ζ(K), or ζ★(K) with --star.
    Eval {
        k: Index,
        #[arg(long)]
        prec: Option<u32>,
        #[arg(long)]
        star: bool,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long)]
        suite: Suite,
        #[arg(long)]
        max_weight: Option<u32>,
        #[arg(long)]
        prec: Option<u32>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    Shuffle,
    Harmonic,
    Barstar,
    Circled,
}

#[derive(Clone, Copy, ValueEnum)]
enum RegMode {
    Sh,
    St,
    StarSh,
    StarSt,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

enum Failure {
    Usage(String),
    Verification,
    Io(io::Error),
}

impl From<MzvError> for Failure {
    fn from(e: MzvError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn operand(s: &str) -> Result<LinComb, Failure> {
    if let Ok(k) = s.parse::<Index>() {
        return Ok(LinComb::index(&k));
    }
    LinComb::parse_text(s).map_err(|e| Failure::Usage(format!("operand {s:?}: {e}")))
}

fn prec_or_env(prec: Option<u32>) -> EvalContext {
    prec.map(EvalContext::new).unwrap_or_else(EvalContext::from_env)
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Expand { op, a, b } => {
            let (a, b) = (operand(&a)?, operand(&b)?);
            let r = match op {
                Op::Shuffle => shuffle(&a, &b),
                Op::Harmonic => harmonic(&a, &b)?,
                Op::Barstar => bar_harmonic(&a, &b)?,
                Op::Circled => circled_harmonic(&a, &b)?,
            };
            writeln!(out, "{}", r.to_index_string())?;
            writeln!(out, "{r}")?;
        }
        Cmd::Mu { k, l } => {
            let lhs = mu(&k, &l)?;
            let rhs = circled_harmonic(&LinComb::index(&k), &star_index(&l))?;
            writeln!(out, "mu({k};{l})    = {}", lhs.to_index_string())?;
            writeln!(out, "({k}) ⊛ ({l})★ = {}", rhs.to_index_string())?;
            writeln!(out, "relation: {} = {}", lhs.to_index_string(), rhs.to_index_string())?;
        }
        Cmd::Reg { mode, k } => {
            let x = LinComb::index(&k);
            let p = match mode {
                RegMode::Sh => reg_shuffle(&x)?,
                RegMode::St => reg_harmonic(&x)?,
                RegMode::StarSh => reg_star_shuffle(&k)?,
                RegMode::StarSt => reg_star_harmonic(&k)?,
            };
            writeln!(out, "{}", p.to_index_string())?;
        }
        Cmd::Relations { weight, skip_trivial, format, out: path } => {
            let recs = enumerate_relations(weight, skip_trivial)?;
            let mut file;
            let sink: &mut dyn Write = match &path {
                Some(p) => {
                    file = BufWriter::new(File::create(p)?);
                    &mut file
                }
                None => out,
            };
            match format {
                Format::Json => {
                    for r in &recs {
                        writeln!(sink, "{}", r.to_json())?;
                    }
                }
                Format::Text => {
                    for r in &recs {
                        writeln!(sink, "{}", r.to_text())?;
                    }
                }
                Format::Csv => {
                    let header = basis_header(weight as usize);
                    writeln!(sink, "k,l,{}", header.join(","))?;
                    for r in &recs {
                        write!(sink, "\"{}\",\"{}\",", r.k, r.l)?;
                        write_csv_row(&mut *sink, &r.dense_vector())?;
                    }
                }
            }
            sink.flush()?;
        }
        Cmd::Dims { max_weight } => {
            if max_weight < 2 {
                return Err(Failure::Usage("--max-weight must be at least 2".into()));
            }
            writeln!(out, "weight\tbasis\trank\tdim\td_w")?;
            let mut ok = true;
            for w in 2..=max_weight {
                let row = dimension_report(w)?;
                writeln!(out, "{}\t{}\t{}\t{}\t{}", row.weight, row.basis_size, row.rank, row.dim, row.expected)?;
                out.flush()?;
                ok &= row.matches();
            }
            if !ok {
                return Err(Failure::Verification);
            }
        }
        Cmd::Eval { k, prec, star } => {
            let ev = Evaluator::new(prec_or_env(prec));
            let v = if star { ev.mzsv(&k)? } else { ev.mzv(&k)? };
            let digits = (f64::from(ev.context().precision_bits) * std::f64::consts::LOG10_2) as usize;
            let name = if star { "ζ★" } else { "ζ" };
            writeln!(out, "{name}({k}) = {}", v.to_decimal(digits.saturating_sub(2)))?;
        }
        Cmd::Verify { suite, max_weight, prec } => {
            let w = max_weight.unwrap_or_else(|| suite.default_max_weight());
            let res = suite.run(w, prec_or_env(prec).precision_bits)?;
            writeln!(out, "{}", res.summary())?;
            for f in res.failures.iter().take(10) {
                writeln!(out, "  {f}")?;
            }
            if res.failures.len() > 10 {
                writeln!(out, "  ... {} more", res.failures.len() - 10)?;
            }
            eprintln!("{}: {:.2}s", res.name, res.elapsed.as_secs_f64());
            if !res.passed() {
                return Err(Failure::Verification);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            eprintln!("mzv: {e}");
            return ExitCode::from(2);
        }
    }
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    let result = run(cli, &mut lock);
    let _ = lock.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("mzv: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("mzv: {e}");
            ExitCode::from(2)
        }
    }
}
