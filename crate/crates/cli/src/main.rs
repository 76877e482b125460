use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use thompson_core::circuits::{fredkin_perm, fredkin_repr, pad_permutation, toffoli_repr, Circuit, TruthTable, REVERSIBLE_WIRE_CAP};
use thompson_core::codes::Word;
use thompson_core::compiler::{
    circuit_to_lep_word, compile_pair, compile_wf, eval_word_zero_half, lep_normalize, lep_word_to_circuit,
};
use thompson_core::generators::{
    apply_word, eval_word, format_word, gamma_g_set, gamma_lep_set, parse_gen_list, parse_word, word_inverse, Gen,
};
use thompson_core::metrics::{
    alpha_profile, ball_distortion, cayley_ball, delta_profiles, monotone_wordlength, schreier_ball, schreier_gens,
    BallOptions, LengthProfile, DEFAULT_BASIS, DEFAULT_FRONTIER_LIMIT,
};
use thompson_core::par::Exec;
use thompson_core::thompson::{compose, embed0, embed1, embed_pair, invert, reduce, Element, Table};
use thompson_core::verify::{run_suite, SUITES};
use thompson_core::Error;

const ORDER: &str = "Words apply left to right: the first token acts first.";

/// Thompson-Higman tables, generator words, circuit compilation and word-length measurements.
#[derive(Parser)]
#[command(name = "thompson", version, after_help = ORDER)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Canonical form of a table
    Reduce(InOut),
    /// Composite of two tables; the first --in applies first
    Compose(InOut),
    /// Inverse of a bijective table
    Invert(InOut),
    /// Image of the word given by --apply
    Apply(ApplyArgs),
    /// Predicates of a table, one per line
    Classify(InOut),
    /// Element of a word, or its image of --apply
    #[command(after_help = ORDER)]
    EvalWord(WordArgs),
    /// Inverse word
    #[command(after_help = ORDER)]
    WordInverse(WordArgs),
    /// 0x -> 0g(x), identity on 1A*
    Embed0(InOut),
    /// 1x -> 1g(x), identity on 0A*
    Embed1(InOut),
    /// 0x -> 0f(x), 1x -> 1g(x) from two tables f and g
    EmbedPair(InOut),
    /// Lep word of a circuit
    #[command(after_help = ORDER)]
    CompileLep(InOut),
    /// Circuit of a lep word
    #[command(after_help = ORDER)]
    WordToCircuit(WordArgs),
    /// Rewrite a word with lep composite over the lep generators
    #[command(after_help = ORDER)]
    LepNormalize(WordArgs),
    /// Group word mapping 0x -> 0 f(x) x for a desugared circuit
    #[command(after_help = ORDER)]
    CompileWf(InOut),
    /// Group word mapping 0x -> 0 g(x) from a circuit and its inverse
    #[command(after_help = ORDER)]
    CompilePair(InOut),
    /// Reversible circuit x 0^n -> f(x) x for a truth table
    Toffoli(InOut),
    /// U_g for a permutation (--k scratch lines, default 2), or the
    /// scratch-cleaning circuit of f given a second --in circuit
    Fredkin(SizedArgs),
    /// Permutation f(x) x on padded inputs (--k is the circuit size bound)
    PadPerm(SizedArgs),
    /// Length profiles as CSV `n,value,resolved`. delta searches cosets to
    /// twice --radius
    #[command(after_help = ORDER)]
    Measure(MeasureArgs),
    /// Seeded property sweep of one module, or `all`
    Verify(VerifyArgs),
}

#[derive(Args)]
struct InOut {
    /// Input file; some commands take two
    #[arg(long = "in", value_name = "PATH")]
    input: Vec<PathBuf>,
    /// Output file (stdout if absent)
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ApplyArgs {
    #[command(flatten)]
    io: InOut,
    /// Input word as digits, `eps` for the empty word
    #[arg(long, value_name = "BITS")]
    apply: String,
}

#[derive(Args)]
struct WordArgs {
    /// Word file, or the word itself
    #[arg(long, value_name = "PATH|WORD")]
    word: String,
    /// Input word for eval-word
    #[arg(long, value_name = "BITS")]
    apply: Option<String>,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SizedArgs {
    #[command(flatten)]
    io: InOut,
    #[arg(long, value_name = "N")]
    k: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Measure {
    Alpha,
    Cayley,
    Schreier,
    Delta,
    Monotone,
    Distortion,
}

#[derive(Args)]
struct MeasureArgs {
    what: Measure,
    /// Comma-separated generators; distortion takes two lists
    #[arg(long, value_name = "LIST")]
    gens: Vec<String>,
    #[arg(long, value_name = "N", default_value_t = 3)]
    radius: usize,
    /// Size cap for alpha, node limit for balls
    #[arg(long, value_name = "N")]
    cap: Option<usize>,
    #[arg(long = "m-max", value_name = "N", default_value_t = 2)]
    m_max: usize,
    #[arg(long, value_name = "N")]
    jobs: Option<usize>,
    /// Ball dump, one `distance<TAB>table` line per element
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    suite: String,
    #[arg(long, value_name = "N", default_value_t = 0)]
    seed: u64,
    #[arg(long, value_name = "N")]
    jobs: Option<usize>,
}

enum Failure {
    Usage(String),
    Domain(Error),
    /// Reported by the command itself.
    Silent,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Domain(e)
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn usage(flag: &str, msg: impl std::fmt::Display) -> Failure {
    Failure::Usage(format!("{flag}: {msg}"))
}

fn read(path: &Path) -> Res<String> {
    std::fs::read_to_string(path).map_err(|e| usage("--in", format!("{}: {e}", path.display())))
}

fn inputs(io: &InOut, n: usize) -> Res<Vec<String>> {
    if io.input.len() != n {
        return Err(usage("--in", format!("expected {n} input file(s), got {}", io.input.len())));
    }
    io.input.iter().map(|p| read(p)).collect()
}

fn emit(out: &Option<PathBuf>, text: &str) -> Res<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| usage("--out", format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn element(text: &str) -> Res<Element> {
    Ok(reduce(&Table::parse(text)?))
}

fn bits(flag: &str, s: &str, k: u8) -> Res<Word> {
    Word::parse(s, k).map_err(|e| usage(flag, e))
}

/// A word file, or inline word text when no such file exists.
fn word(arg: &str) -> Res<Vec<Gen>> {
    let p = Path::new(arg);
    if p.is_file() {
        let text = std::fs::read_to_string(p).map_err(|e| usage("--word", format!("{arg}: {e}")))?;
        return Ok(parse_word(&text)?);
    }
    parse_word(arg).map_err(|e| usage("--word", format!("no such file, and not a word ({e})")))
}

fn exec(jobs: Option<usize>) -> Res<Exec> {
    match jobs {
        None => Ok(Exec::Auto),
        Some(0) => Err(usage("--jobs", "must be at least 1")),
        Some(1) => Ok(Exec::Sequential),
        Some(n) => {
            #[cfg(feature = "parallel")]
            rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| usage("--jobs", e))?;
            #[cfg(not(feature = "parallel"))]
            let _ = n;
            Ok(Exec::Auto)
        }
    }
}

fn gens(list: &str) -> Res<Vec<Gen>> {
    let g = parse_gen_list(list)?;
    if g.is_empty() {
        return Err(usage("--gens", "empty generator list"));
    }
    Ok(g)
}

fn flags_text(e: &Element) -> String {
    let f = e.flags();
    let mut s = String::new();
    for (name, v) in [
        ("injective", f.is_injective),
        ("in_g", f.in_g),
        ("lp", f.is_lp),
        ("lep", f.is_lep),
        ("monotone", f.is_monotone),
        ("fix0", f.in_fix0),
        ("fix1", f.in_fix1),
        ("stab01", f.in_stab01),
    ] {
        let _ = writeln!(s, "{name}={v}");
    }
    s
}

/// Image of `x` under the word. Falls back to the evaluated element when
/// the token-by-token application runs out of letters.
fn eval_at(w: &[Gen], x: &Word) -> Res<Option<Word>> {
    if let Some(y) = apply_word(w, x)? {
        return Ok(Some(y));
    }
    let e = if x.letters().first() == Some(&0) { eval_word_zero_half(w)? } else { eval_word(w)? };
    Ok(e.apply(x))
}

fn ball_opts(cap: Option<usize>, exec: Exec) -> BallOptions {
    BallOptions { limit: cap.unwrap_or(DEFAULT_FRONTIER_LIMIT), truncate: true, exec }
}

fn dump_ball(out: &Option<PathBuf>, ball: &LengthProfile) -> Res<()> {
    if let Some(p) = out {
        std::fs::write(p, ball.dump()).map_err(|e| usage("--out", format!("{}: {e}", p.display())))?;
    }
    if ball.truncated {
        eprintln!("note: stopped at radius {} (node limit)", ball.radius);
    }
    Ok(())
}

fn measure(a: &MeasureArgs) -> Res<()> {
    let ex = exec(a.jobs)?;
    let one_gens = |default: Vec<Gen>| -> Res<Vec<Gen>> {
        match a.gens.as_slice() {
            [] => Ok(default),
            [g] => gens(g),
            _ => Err(usage("--gens", "expected one list")),
        }
    };
    match a.what {
        Measure::Alpha => {
            let r = alpha_profile(a.m_max, a.cap.unwrap_or(14), &DEFAULT_BASIS, ex)?;
            print!("{}", r.profile.to_csv());
            if let Some(p) = &a.out {
                let mut s = String::from("f,size,size_inverse\n");
                for (f, c, ci) in &r.sizes {
                    let rows: Vec<String> = f.rows().iter().map(|y| Word::from_u64(*y, f.n()).to_string()).collect();
                    let _ = writeln!(s, "{},{c},{ci}", rows.join(" "));
                }
                std::fs::write(p, s).map_err(|e| usage("--out", format!("{}: {e}", p.display())))?;
            }
        }
        Measure::Cayley | Measure::Schreier | Measure::Monotone => {
            let opts = ball_opts(a.cap, ex);
            let ball = match a.what {
                Measure::Cayley => cayley_ball(&one_gens(gamma_g_set())?, a.radius, opts)?,
                Measure::Schreier => schreier_ball(&one_gens(schreier_gens())?, a.radius, opts)?,
                _ => monotone_wordlength(a.radius, opts)?,
            };
            print!("{}", ball.to_csv());
            dump_ball(&a.out, &ball)?;
        }
        Measure::Delta => {
            let opts = ball_opts(a.cap, ex);
            let ball_m = cayley_ball(&gamma_g_set(), a.radius, opts)?;
            let ball_lep = cayley_ball(&gamma_lep_set(), a.radius, opts)?;
            let sch = schreier_ball(&schreier_gens(), 2 * a.radius, opts)?;
            let (big, small) = delta_profiles(&ball_m, &ball_lep, &sch)?;
            println!("# D(1,g) against lepM word length");
            print!("{}", big.to_csv());
            println!("# D(1,g) against monoid word length");
            print!("{}", small.to_csv());
        }
        Measure::Distortion => {
            let [g1, g2] = a.gens.as_slice() else {
                return Err(usage("--gens", "distortion takes two lists: the subset first"));
            };
            let opts = ball_opts(a.cap, ex);
            let l1 = cayley_ball(&gens(g1)?, a.radius, opts)?;
            let l2 = cayley_ball(&gens(g2)?, a.radius, opts)?;
            print!("{}", ball_distortion(&l1, &l2)?.to_csv());
        }
    }
    Ok(())
}

fn verify(a: &VerifyArgs) -> Res<()> {
    let ex = exec(a.jobs)?;
    let suites: Vec<&str> = if a.suite == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&a.suite.as_str()) {
        vec![a.suite.as_str()]
    } else {
        return Err(usage("<suite>", format!("unknown suite `{}`; expected all or one of {}", a.suite, SUITES.join(", "))));
    };
    let mut failed = 0;
    for s in suites {
        for c in run_suite(s, a.seed, ex)? {
            println!("{} {s}: {} ({})", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
            failed += usize::from(!c.pass);
        }
    }
    if failed > 0 {
        eprintln!("{failed} check(s) failed");
        return Err(Failure::Silent);
    }
    Ok(())
}

fn run(cli: Cli) -> Res<()> {
    match cli.cmd {
        Cmd::Reduce(io) => emit(&io.out, &element(&inputs(&io, 1)?[0])?.to_string()),
        Cmd::Compose(io) => {
            let t = inputs(&io, 2)?;
            let (first, second) = (element(&t[0])?, element(&t[1])?);
            emit(&io.out, &compose(&second, &first)?.to_string())
        }
        Cmd::Invert(io) => emit(&io.out, &invert(&element(&inputs(&io, 1)?[0])?)?.to_string()),
        Cmd::Apply(a) => {
            let e = element(&inputs(&a.io, 1)?[0])?;
            let x = bits("--apply", &a.apply, e.table().k())?;
            let y = e.apply(&x).map_or_else(|| "undefined".to_string(), |y| y.to_string());
            emit(&a.io.out, &format!("{y}\n"))
        }
        Cmd::Classify(io) => emit(&io.out, &flags_text(&element(&inputs(&io, 1)?[0])?)),
        Cmd::EvalWord(a) => {
            let w = word(&a.word)?;
            match &a.apply {
                Some(s) => {
                    let y = eval_at(&w, &bits("--apply", s, 2)?)?;
                    emit(&a.out, &format!("{}\n", y.map_or_else(|| "undefined".to_string(), |y| y.to_string())))
                }
                None => emit(&a.out, &eval_word(&w)?.to_string()),
            }
        }
        Cmd::WordInverse(a) => emit(&a.out, &format!("{}\n", format_word(&word_inverse(&word(&a.word)?)?))),
        Cmd::Embed0(io) => emit(&io.out, &embed0(&element(&inputs(&io, 1)?[0])?)?.to_string()),
        Cmd::Embed1(io) => emit(&io.out, &embed1(&element(&inputs(&io, 1)?[0])?)?.to_string()),
        Cmd::EmbedPair(io) => {
            let t = inputs(&io, 2)?;
            emit(&io.out, &embed_pair(&element(&t[0])?, &element(&t[1])?)?.to_string())
        }
        Cmd::CompileLep(io) => emit(&io.out, &circuit_to_lep_word(&Circuit::parse(&inputs(&io, 1)?[0])?)?.to_string()),
        Cmd::WordToCircuit(a) => emit(&a.out, &lep_word_to_circuit(&word(&a.word)?)?.to_string()),
        Cmd::LepNormalize(a) => emit(&a.out, &lep_normalize(&word(&a.word)?)?.report.to_string()),
        Cmd::CompileWf(io) => emit(&io.out, &compile_wf(&Circuit::parse(&inputs(&io, 1)?[0])?)?.to_string()),
        Cmd::CompilePair(io) => {
            let t = inputs(&io, 2)?;
            emit(&io.out, &compile_pair(&Circuit::parse(&t[0])?, &Circuit::parse(&t[1])?)?.to_string())
        }
        Cmd::Toffoli(io) => {
            emit(&io.out, &toffoli_repr(&TruthTable::parse(&inputs(&io, 1)?[0])?, REVERSIBLE_WIRE_CAP)?.to_string())
        }
        Cmd::Fredkin(a) => {
            let c = match a.io.input.len() {
                1 => fredkin_perm(&TruthTable::parse(&inputs(&a.io, 1)?[0])?, a.k.unwrap_or(2), REVERSIBLE_WIRE_CAP)?,
                _ => {
                    let t = inputs(&a.io, 2)?;
                    fredkin_repr(&TruthTable::parse(&t[0])?, &Circuit::parse(&t[1])?, REVERSIBLE_WIRE_CAP)?
                }
            };
            emit(&a.io.out, &c.to_string())
        }
        Cmd::PadPerm(a) => {
            let f = TruthTable::parse(&inputs(&a.io, 1)?[0])?;
            let size = a.k.ok_or_else(|| usage("--k", "pad-perm needs the circuit size bound"))?;
            emit(&a.io.out, &pad_permutation(&f, size)?.to_string())
        }
        Cmd::Measure(a) => measure(&a),
        Cmd::Verify(a) => verify(&a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("usage error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error {}: {e}", e.name());
            ExitCode::from(1)
        }
        Err(Failure::Silent) => ExitCode::from(1),
    }
}
