use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use mauto::automata::{parse_automaton, print_automaton, MAutomaton, TupleWord};
use mauto::logic::parse_formula;
use mauto::mso::{compile_mso, parse_mso};
use mauto::msoplus::{find_model, parse_msoplus, sat_plus};
use mauto::structures::{cnf_add, decide_fo, skolem_encode, AutomaticPresentation, Cnf};
use mauto::theories::{registry, Element, PaddedTheory, Theory};

/// Automata over infinite alphabets with first-order transition labels.
///
/// Exit codes: 0 accept / empty / true, 1 reject / nonempty / false, 2 error.
#[derive(Parser)]
#[command(name = "mauto", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct TheoryOpt {
    /// Background theory: `presburger` or a finite structure file.
    #[arg(long, global = true)]
    theory: Option<String>,
    /// Padding mode: `fresh` or `alias:ELEM`.
    #[arg(long, global = true)]
    pad: Option<String>,
}

#[derive(Args)]
struct Output {
    /// Write the automaton here instead of standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Membership of a tuple; one comma-separated argument per track.
    Member {
        automaton: PathBuf,
        words: Vec<String>,
        #[command(flatten)]
        theory: TheoryOpt,
    },
    /// Emptiness; prints a shortest witness when nonempty.
    Empty {
        automaton: PathBuf,
        #[command(flatten)]
        theory: TheoryOpt,
    },
    Complement {
        automaton: PathBuf,
        #[command(flatten)]
        out: Output,
        #[command(flatten)]
        theory: TheoryOpt,
    },
    /// Existential projection of a track (1-based).
    Project {
        automaton: PathBuf,
        #[arg(long)]
        track: usize,
        #[command(flatten)]
        out: Output,
        #[command(flatten)]
        theory: TheoryOpt,
    },
    /// Intersection.
    Product {
        left: PathBuf,
        right: PathBuf,
        #[command(flatten)]
        out: Output,
        #[command(flatten)]
        theory: TheoryOpt,
    },
    Union {
        left: PathBuf,
        right: PathBuf,
        #[command(flatten)]
        out: Output,
        #[command(flatten)]
        theory: TheoryOpt,
    },
    /// Add unconstrained tracks up to `--tracks`.
    Cylindrify {
        automaton: PathBuf,
        #[arg(long)]
        tracks: usize,
        #[command(flatten)]
        out: Output,
        #[command(flatten)]
        theory: TheoryOpt,
    },
    /// Compile an MSO sentence over `--tracks`-track words.
    CompileMso {
        sentence: PathBuf,
        #[arg(long, default_value_t = 1)]
        tracks: usize,
        #[command(flatten)]
        out: Output,
        #[command(flatten)]
        theory: TheoryOpt,
    },
    /// Decide a sentence. SENTENCE is inline text or a file.
    Decide {
        kind: Kind,
        /// For `fo`: a presentation name or file, then the sentence.
        args: Vec<String>,
        /// Word tracks, for `mso`.
        #[arg(long, default_value_t = 1)]
        tracks: usize,
        #[command(flatten)]
        theory: TheoryOpt,
    },
    /// Ordinals below ω^ω as comma-separated little-endian coefficients.
    Ordinal {
        op: OrdinalOp,
        alpha: String,
        beta: String,
    },
    /// The word of prime exponents of n ≥ 1.
    SkolemEncode { n: u64 },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Presburger,
    Fo,
    Mso,
    Satplus,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrdinalOp {
    Add,
    Cmp,
}

/// Verdict of a command that succeeded.
enum Verdict {
    Yes,
    No,
}

impl TheoryOpt {
    fn resolve(&self) -> Result<Option<Arc<PaddedTheory>>> {
        if self.theory.is_none() && self.pad.is_none() {
            return Ok(None);
        }
        let name = self.theory.as_deref().unwrap_or("presburger");
        let pad = match self.pad.as_deref() {
            None | Some("fresh") => "fresh".to_string(),
            Some(p) => match p.strip_prefix("alias:") {
                Some(e) => format!("alias {e}"),
                None => bail!("bad --pad `{p}`: expected `fresh` or `alias:ELEM`"),
            },
        };
        Ok(Some(registry::padded_by_name(name, &pad, Some(Path::new(".")))?))
    }

    fn or_default(&self) -> Result<Arc<PaddedTheory>> {
        match self.resolve()? {
            Some(t) => Ok(t),
            None => Ok(registry::padded_by_name("presburger", "fresh", None)?),
        }
    }
}

fn load(path: &Path, opt: &TheoryOpt) -> Result<MAutomaton> {
    let a = MAutomaton::load(path).with_context(|| format!("loading {}", path.display()))?;
    if let Some(t) = opt.resolve()? {
        if t.descriptor() != a.theory().descriptor() {
            bail!(
                "{} is over `{}`, not `{}`",
                path.display(),
                a.theory().descriptor(),
                t.descriptor()
            );
        }
    }
    Ok(a)
}

/// Print or write an automaton after checking that it reads back unchanged.
fn emit(a: &MAutomaton, out: &Output) -> Result<()> {
    let text = print_automaton(&a.renumbered());
    let back = parse_automaton(&text, None).context("reparsing the result")?;
    if print_automaton(&back) != text {
        bail!("the printed automaton does not read back identically");
    }
    match &out.output {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn parse_word(theory: &PaddedTheory, arg: &str) -> Result<Vec<Element>> {
    let arg = arg.trim();
    if arg.is_empty() || arg == "\"\"" {
        return Ok(Vec::new());
    }
    arg.split(',')
        .map(|t| Ok(theory.base().parse_element(t.trim())?))
        .collect()
}

fn text_or_file(arg: &str) -> Result<String> {
    let p = Path::new(arg);
    if !arg.trim_start().starts_with('(') && p.is_file() {
        Ok(std::fs::read_to_string(p)?)
    } else {
        Ok(arg.to_string())
    }
}

fn verdict(b: bool) -> Verdict {
    if b {
        Verdict::Yes
    } else {
        Verdict::No
    }
}

fn run(cli: Cli) -> Result<Verdict> {
    match cli.command {
        Command::Member {
            automaton,
            words,
            theory,
        } => {
            let a = load(&automaton, &theory)?;
            let tuple = words
                .iter()
                .map(|w| parse_word(a.theory(), w))
                .collect::<Result<Vec<_>>>()?;
            match a.accepting_run(&TupleWord(tuple))? {
                Some(run) => {
                    let names: Vec<&str> = run.iter().map(|&q| a.state_name(q)).collect();
                    println!("accept {}", names.join(" "));
                    Ok(Verdict::Yes)
                }
                None => {
                    println!("reject");
                    Ok(Verdict::No)
                }
            }
        }
        Command::Empty { automaton, theory } => {
            let a = load(&automaton, &theory)?;
            match a.find_word()? {
                None => {
                    println!("empty");
                    Ok(Verdict::Yes)
                }
                Some(w) => {
                    println!("{w}");
                    Ok(Verdict::No)
                }
            }
        }
        Command::Complement {
            automaton,
            out,
            theory,
        } => {
            emit(&load(&automaton, &theory)?.complement()?.trim()?, &out)?;
            Ok(Verdict::Yes)
        }
        Command::Project {
            automaton,
            track,
            out,
            theory,
        } => {
            emit(&load(&automaton, &theory)?.project(track)?.trim()?, &out)?;
            Ok(Verdict::Yes)
        }
        Command::Product {
            left,
            right,
            out,
            theory,
        } => {
            let a = load(&left, &theory)?.intersect(&load(&right, &theory)?)?;
            emit(&a.trim()?, &out)?;
            Ok(Verdict::Yes)
        }
        Command::Union {
            left,
            right,
            out,
            theory,
        } => {
            let a = load(&left, &theory)?.union(&load(&right, &theory)?)?;
            emit(&a.trim()?, &out)?;
            Ok(Verdict::Yes)
        }
        Command::Cylindrify {
            automaton,
            tracks,
            out,
            theory,
        } => {
            emit(&load(&automaton, &theory)?.cylindrify(tracks)?, &out)?;
            Ok(Verdict::Yes)
        }
        Command::CompileMso {
            sentence,
            tracks,
            out,
            theory,
        } => {
            let t = theory.or_default()?;
            let text = std::fs::read_to_string(&sentence)
                .with_context(|| format!("reading {}", sentence.display()))?;
            let phi = parse_mso(&text, t.signature())?;
            emit(&compile_mso(&phi, tracks, t)?, &out)?;
            Ok(Verdict::Yes)
        }
        Command::Decide {
            kind,
            args,
            tracks,
            theory,
        } => decide(kind, &args, tracks, &theory),
        Command::Ordinal { op, alpha, beta } => {
            let a: Cnf = alpha.parse()?;
            let b: Cnf = beta.parse()?;
            match op {
                OrdinalOp::Add => {
                    let s = cnf_add(&a, &b);
                    println!("{s}");
                    println!("{}", s.pretty());
                }
                OrdinalOp::Cmp => {
                    let sign = match a.cmp(&b) {
                        std::cmp::Ordering::Less => "<",
                        std::cmp::Ordering::Equal => "=",
                        std::cmp::Ordering::Greater => ">",
                    };
                    println!("{} {sign} {}", a.pretty(), b.pretty());
                }
            }
            Ok(Verdict::Yes)
        }
        Command::SkolemEncode { n } => {
            let w = skolem_encode(n)?;
            let parts: Vec<String> = w.iter().map(u64::to_string).collect();
            println!("{}", parts.join(","));
            Ok(Verdict::Yes)
        }
    }
}

fn one_arg(args: &[String]) -> Result<String> {
    match args {
        [s] => text_or_file(s),
        _ => bail!("expected one sentence argument, found {}", args.len()),
    }
}

fn decide(kind: Kind, args: &[String], tracks: usize, theory: &TheoryOpt) -> Result<Verdict> {
    match kind {
        Kind::Presburger => {
            let t = registry::presburger();
            let phi = parse_formula(&one_arg(args)?, t.signature())?;
            Ok(verdict(t.decide(&phi)?))
        }
        Kind::Fo => {
            let [name, sentence] = args else {
                bail!("usage: decide fo PRESENTATION SENTENCE");
            };
            let p = AutomaticPresentation::by_name(name, Some(Path::new(".")))?;
            let phi = parse_formula(&text_or_file(sentence)?, p.signature())?;
            Ok(verdict(decide_fo(&p, &phi)?))
        }
        Kind::Mso => {
            let t = theory.or_default()?;
            let phi = parse_mso(&one_arg(args)?, t.signature())?;
            match compile_mso(&phi, tracks, t)?.find_word()? {
                Some(w) => {
                    println!("{w}");
                    Ok(Verdict::Yes)
                }
                None => Ok(Verdict::No),
            }
        }
        Kind::Satplus => {
            let t = theory.or_default()?;
            let phi = parse_msoplus(&one_arg(args)?, t.signature())?;
            if !sat_plus(&phi, &t)? {
                return Ok(Verdict::No);
            }
            if let Some(w) = find_model(&phi, &t)? {
                let parts: Vec<String> = w.iter().map(Element::to_string).collect();
                println!("{}", parts.join(","));
            }
            Ok(Verdict::Yes)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Verdict::Yes) => ExitCode::SUCCESS,
        Ok(Verdict::No) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
