//! Command-line front end. Exit codes: 0 success, 1 decode failure, 2 usage
//! error, 3 verification failure.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use asymdl::block_codes::{self, BlockCodeSpec, IdentityProtector};
use asymdl::bounds;
use asymdl::channel::{apply_pattern, sample_pattern, PatternBudget};
use asymdl::galois::smallest_prime_above;
use asymdl::lee_codes::{self, LeeCodeSpec};
use asymdl::list_codes::{self, ListCodeSpec};
use asymdl::oracle::{self, FamilyParams};
use asymdl::seqcore::BitString;
use asymdl::shift_codes::{self, ShiftCodeSpec};
use asymdl::single_codes::{self, SingleCodeSpec};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Parser)]
#[command(name = "asymdl", version, about = "Codes for 0-deletions and adjacent transpositions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write every codeword of a code, one per line.
    Gen(RunArgs),
    /// Systematically encode a message with the block-deletion code.
    Encode(RunArgs),
    /// Apply a seeded random error pattern.
    Corrupt(RunArgs),
    /// Decode a received word (a list for the list family).
    Decode(RunArgs),
    /// Exhaustively check a family against the brute-force oracle.
    Verify(RunArgs),
    /// Print the bound report as JSON.
    Bounds(RunArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Family {
    Single,
    Shift,
    Lee,
    List,
    Block,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Preset {
    PaperExample,
}

/// Settings shared by every subcommand; each may also come from `--config`.
#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RunConfig {
    /// JSON file with any of these settings; flags take precedence.
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    family: Option<Family>,
    #[arg(long)]
    n: Option<usize>,
    /// 0-deletions.
    #[arg(long)]
    t: Option<usize>,
    /// Adjacent transpositions (undirected).
    #[arg(long)]
    s: Option<usize>,
    /// Right shifts of 0 (01 -> 10).
    #[arg(long)]
    s_plus: Option<usize>,
    /// Left shifts of 0 (10 -> 01).
    #[arg(long)]
    s_minus: Option<usize>,
    #[arg(long)]
    t_b: Option<usize>,
    #[arg(long)]
    ell: Option<usize>,
    /// Message length of the systematic block code.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    p: Option<u64>,
    /// Comma-separated residues; the best residue is used when absent.
    #[arg(long, value_delimiter = ',')]
    residues: Option<Vec<u64>>,
    /// Parity bit of the shift family.
    #[arg(long)]
    b: Option<u8>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Decode with the systematic block code (needs `k`).
    #[arg(long)]
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    systematic: bool,
    #[arg(long, value_enum)]
    #[serde(skip)]
    preset: Option<Preset>,
    /// Word on the command line instead of `--input` or stdin.
    #[serde(skip)]
    word: Option<String>,
}

#[derive(Args, Clone, Debug)]
struct RunArgs {
    #[command(flatten)]
    cfg: RunConfig,
}

enum Failure {
    Usage(String),
    Decode(String),
    Verify(String),
}

type CliResult<T> = Result<T, Failure>;

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

fn decode_err<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Decode(e.to_string())
}

macro_rules! merge {
    ($flags:ident, $file:ident, $($f:ident),*) => {
        $( if $flags.$f.is_none() { $flags.$f = $file.$f.clone(); } )*
    };
}

impl RunConfig {
    fn resolve(mut self) -> CliResult<Self> {
        if let Some(path) = self.config.clone() {
            let text = fs::read_to_string(&path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            let file: RunConfig = serde_json::from_str(&text).map_err(|e| usage(format!("config: {e}")))?;
            merge!(self, file, family, n, t, s, s_plus, s_minus, t_b, ell, k, p, residues, b, seed, input, output);
            self.systematic |= file.systematic;
        }
        Ok(self)
    }

    fn need<T: Copy>(v: Option<T>, name: &str) -> CliResult<T> {
        v.ok_or_else(|| usage(format!("missing --{name}")))
    }

    fn family(&self) -> CliResult<Family> {
        Self::need(self.family, "family")
    }

    fn n(&self) -> CliResult<usize> {
        Self::need(self.n, "n")
    }

    fn seed(&self) -> CliResult<u64> {
        Self::need(self.seed, "seed")
    }

    fn s_pm(&self) -> (usize, usize) {
        (self.s_plus.unwrap_or(0), self.s_minus.unwrap_or(0))
    }

    fn block(&self) -> CliResult<(usize, usize, usize)> {
        Ok((
            Self::need(self.t_b, "t-b")?,
            Self::need(self.ell, "ell")?,
            self.s.unwrap_or(0),
        ))
    }

    fn list_prime(&self, n: usize) -> u64 {
        let (sp, sm) = self.s_pm();
        let kappa = self.t.unwrap_or(0).max(sp + sm + 1);
        self.p.unwrap_or_else(|| smallest_prime_above(n.max(kappa) as u64))
    }

    fn read_word(&self) -> CliResult<BitString> {
        let text = if let Some(w) = &self.word {
            w.clone()
        } else if let Some(path) = &self.input {
            fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?
        } else {
            let mut buf = String::new();
            io::stdin().read_to_string(&mut buf).map_err(usage)?;
            buf
        };
        let line = text.lines().map(str::trim).find(|l| !l.is_empty()).unwrap_or("");
        line.parse().map_err(usage)
    }

    fn write_out(&self, text: &str) -> CliResult<()> {
        match &self.output {
            Some(path) => write_file(path, text),
            None => {
                let mut out = io::stdout().lock();
                out.write_all(text.as_bytes()).map_err(usage)
            }
        }
    }
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn lines<I: IntoIterator<Item = BitString>>(words: I) -> String {
    words.into_iter().map(|w| format!("{w}\n")).collect()
}

fn single_spec(c: &RunConfig) -> CliResult<SingleCodeSpec> {
    let n = c.n()?;
    match c.residues.as_deref() {
        Some([a]) => match c.p {
            Some(p) => SingleCodeSpec::new(n, p, *a),
            None => SingleCodeSpec::with_residue(n, *a),
        }
        .map_err(usage),
        Some(_) => Err(usage("single family takes one residue")),
        None => Ok(single_codes::best_residue(n).0),
    }
}

fn shift_spec(c: &RunConfig) -> CliResult<ShiftCodeSpec> {
    let n = c.n()?;
    let (sp, sm) = c.s_pm();
    match (c.residues.as_deref(), c.b) {
        (Some([a]), Some(b)) => ShiftCodeSpec::new(n, sp, sm, *a, b).map_err(usage),
        (None, None) => Ok(shift_codes::best_residue(n, sp, sm).map_err(usage)?.0),
        _ => Err(usage("shift family takes one residue and --b")),
    }
}

fn lee_spec(c: &RunConfig) -> CliResult<(LeeCodeSpec, usize, usize)> {
    let n = c.n()?;
    let (t, s) = (c.t.unwrap_or(0), c.s.unwrap_or(0));
    let r = t + 2 * s;
    let spec = match &c.residues {
        Some(a) => {
            let p = c.p.unwrap_or_else(|| lee_codes::default_prime(n, r));
            LeeCodeSpec::new(n, r, p, a.clone()).map_err(usage)?
        }
        None => lee_codes::best_residue(n, r).0,
    };
    Ok((spec, t, s))
}

fn list_spec(c: &RunConfig) -> CliResult<ListCodeSpec> {
    let n = c.n()?;
    let (sp, sm) = c.s_pm();
    let t = c.t.unwrap_or(0);
    let p = c.list_prime(n);
    match &c.residues {
        Some(a) => ListCodeSpec::new(n, t, sp, sm, p, a.clone()).map_err(usage),
        None => Ok(list_codes::best_residue(n, t, sp, sm, p).map_err(usage)?.0),
    }
}

fn block_spec(c: &RunConfig) -> CliResult<BlockCodeSpec> {
    let (t_b, ell, s) = c.block()?;
    BlockCodeSpec::new(c.n()?, t_b, ell, s).map_err(usage)
}

fn gen(c: &RunConfig) -> CliResult<()> {
    let words: Vec<BitString> = match c.family()? {
        Family::Single => single_codes::codebook(&single_spec(c)?),
        Family::Shift => shift_codes::codebook(&shift_spec(c)?),
        Family::Lee => {
            let (spec, _, _) = lee_spec(c)?;
            BitString::all(spec.n).filter(|x| lee_codes::membership(x, &spec)).collect()
        }
        Family::List => {
            let spec = list_spec(c)?;
            BitString::all(spec.n).filter(|x| list_codes::membership(x, &spec)).collect()
        }
        Family::Block => block_codes::codebook(&block_spec(c)?),
    };
    c.write_out(&lines(words))
}

fn encode(c: &RunConfig) -> CliResult<()> {
    let (t_b, ell, s) = c.block()?;
    let msg = c.read_word()?;
    let k = c.k.unwrap_or(msg.len());
    let layout = block_codes::layout_for(k, t_b, ell, s);
    let enc = block_codes::encode_systematic(&msg, &layout, &IdentityProtector).map_err(usage)?;
    c.write_out(&format!("{enc}\n"))
}

fn corrupt(c: &RunConfig) -> CliResult<()> {
    let seed = c.seed()?;
    let x = c.read_word()?;
    let budget = match c.family {
        Some(Family::Block) => {
            let (t_b, ell, s) = c.block()?;
            PatternBudget::Block { t_b, ell, s }
        }
        _ => {
            let (sp, sm) = c.s_pm();
            PatternBudget::Standard {
                t: c.t.unwrap_or(0),
                s_plus: sp,
                s_minus: sm,
            }
        }
    };
    let pattern = sample_pattern(&x, budget, seed);
    let y = apply_pattern(&x, &pattern).map_err(usage)?;
    c.write_out(&format!("{y}\n"))
}

fn decode(c: &RunConfig) -> CliResult<()> {
    if c.preset == Some(Preset::PaperExample) {
        let spec = BlockCodeSpec::paper_example();
        let y = if c.word.is_some() || c.input.is_some() {
            c.read_word()?
        } else {
            "0110110".parse().map_err(usage)?
        };
        let t = block_codes::decode_nonsys_trace(&y, &spec).map_err(decode_err)?;
        let show = |v: &[u64]| v.iter().map(u64::to_string).collect::<String>();
        let eps: Vec<String> = t.eps.iter().map(i64::to_string).collect();
        let eps_p: Vec<String> = t.eps_prime.iter().map(u64::to_string).collect();
        let text = format!(
            "y = {y}\np = {}\nz' = {}\nz* = {}\neps' = ({})\neps = ({})\n{}\n",
            spec.p,
            show(&t.z_prime),
            show(&t.z_star),
            eps_p.join(","),
            eps.join(","),
            t.output
        );
        return c.write_out(&text);
    }
    let y = c.read_word()?;
    let out = match c.family()? {
        Family::Single => vec![single_codes::decode(&y, &single_spec(c)?).map_err(decode_err)?],
        Family::Shift => vec![shift_codes::decode(&y, &shift_spec(c)?).map_err(decode_err)?],
        Family::Lee => {
            let (spec, t, s) = lee_spec(c)?;
            vec![lee_codes::decode(&y, &spec, t, s).map_err(decode_err)?]
        }
        Family::List => {
            let list = list_codes::decode_list(&y, &list_spec(c)?);
            if list.is_empty() {
                return Err(Failure::Decode("empty list".into()));
            }
            list
        }
        Family::Block if c.systematic => {
            let (t_b, ell, s) = c.block()?;
            let k = RunConfig::need(c.k, "k")?;
            let layout = block_codes::layout_for(k, t_b, ell, s);
            vec![block_codes::decode_systematic(&y, &layout, &IdentityProtector).map_err(decode_err)?]
        }
        Family::Block => vec![block_codes::decode_nonsys(&y, &block_spec(c)?).map_err(decode_err)?],
    };
    c.write_out(&lines(out))
}

fn verify(c: &RunConfig) -> CliResult<()> {
    let n = c.n()?;
    let (sp, sm) = c.s_pm();
    let family = match c.family()? {
        Family::Single => FamilyParams::Single { n },
        Family::Shift => FamilyParams::Shift { n, s_plus: sp, s_minus: sm },
        Family::Lee => FamilyParams::Lee {
            n,
            t: c.t.unwrap_or(0),
            s: c.s.unwrap_or(0),
        },
        Family::List => FamilyParams::List {
            n,
            t: c.t.unwrap_or(0),
            s_plus: sp,
            s_minus: sm,
            p: c.list_prime(n),
        },
        Family::Block => {
            let (t_b, ell, s) = c.block()?;
            FamilyParams::Block { n, t_b, ell, s }
        }
    };
    let report = oracle::exhaustive_decode_check(&family).map_err(usage)?;
    let json = serde_json::to_string_pretty(&report).map_err(usage)?;
    c.write_out(&format!("{json}\n"))?;
    if report.verified {
        Ok(())
    } else {
        Err(Failure::Verify(format!("{} failures", report.failures.len())))
    }
}

fn bounds_cmd(c: &RunConfig) -> CliResult<()> {
    let n = c.n()?;
    let block = match (c.t_b, c.ell) {
        (Some(t_b), Some(ell)) => {
            let p = c.p.unwrap_or_else(|| {
                block_codes::default_prime(t_b, ell, c.s.unwrap_or(0), Default::default())
            });
            Some((t_b, ell, p))
        }
        _ => None,
    };
    let report = bounds::bound_report(n, c.t.unwrap_or(0), c.s.unwrap_or(0), block);
    let json = serde_json::to_string_pretty(&report).map_err(usage)?;
    c.write_out(&format!("{json}\n"))
}

fn run(cli: Cli) -> CliResult<()> {
    let (args, f): (RunArgs, fn(&RunConfig) -> CliResult<()>) = match cli.command {
        Command::Gen(a) => (a, gen),
        Command::Encode(a) => (a, encode),
        Command::Corrupt(a) => (a, corrupt),
        Command::Decode(a) => (a, decode),
        Command::Verify(a) => (a, verify),
        Command::Bounds(a) => (a, bounds_cmd),
    };
    f(&args.cfg.resolve()?)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Decode(m)) => {
            eprintln!("decode failure: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Verify(m)) => {
            eprintln!("verification failed: {m}");
            ExitCode::from(3)
        }
    }
}
