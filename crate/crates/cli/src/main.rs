use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use reltor::algebra::{preset, AnyAlgebra, FiniteLocalAlgebra};
use reltor::corpus::{inclusion_from_json, module_ref, ses_from_json, Corpus};
use reltor::homalg::{betti_numbers, ext_dims, horseshoe_les, minimal_free_resolution, tor_dims, Exactness};
use reltor::linalg::{Field, PrimeField, Rationals};
use reltor::module::{matrix_to_json, Module};
use reltor::purity::{is_pure_submodule, pure_fc_pd_check, Purity};
use reltor::relative::{fc_pd_report, pc_pd_report, rel_ext_dims, rel_tor_dims, ExtFlavor, Flavor, LesVariable, Strategy};
use reltor::semidualizing::{in_auslander_class, in_bass_class, is_semidualizing, SemidualizingVerdict};
use reltor::verify::verify_paper;
use reltor::Error;

#[derive(Debug, Parser)]
#[command(name = "reltor", version, about = "Exact relative Tor and Ext over finite-dimensional local algebras")]
struct Cli {
    /// Ring: a preset name or a ring JSON file.
    #[arg(long, global = true, default_value = "square_zero_2vars")]
    ring: String,
    /// Characteristic of the prime field.
    #[arg(long, global = true, default_value_t = 5)]
    p: u32,
    #[arg(long, global = true, value_enum, default_value_t = FieldChoice::Fp)]
    field: FieldChoice,
    /// Also write the result as JSON here.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FieldChoice {
    Fp,
    #[value(name = "Q")]
    Q,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Ring files and presets.
    Ring {
        #[command(subcommand)]
        cmd: RingCommand,
    },
    /// Minimal free resolution.
    Resolve {
        module: String,
        #[arg(long, default_value_t = 4)]
        length: usize,
    },
    Betti {
        module: String,
        #[arg(long, default_value_t = 4)]
        length: usize,
    },
    Tor {
        m: String,
        n: String,
        #[arg(long, default_value_t = 0)]
        degree: usize,
    },
    /// Absolute Ext, or relative Ext with `--flavor`.
    Ext {
        m: String,
        n: String,
        #[arg(long, default_value_t = 0)]
        degree: usize,
        /// pc-m or m-ic
        #[arg(long)]
        flavor: Option<String>,
        #[command(flatten)]
        with: With,
        #[arg(long, default_value = "cross-check")]
        strategy: String,
    },
    Reltor {
        m: String,
        n: String,
        #[command(flatten)]
        with: With,
        #[arg(long)]
        flavor: String,
        #[arg(long, default_value_t = 0)]
        degree: usize,
        #[arg(long, default_value = "cross-check")]
        strategy: String,
    },
    Semidualizing {
        c: String,
        #[arg(long, default_value_t = 6)]
        bound: usize,
    },
    /// Auslander and Bass class membership.
    Classes {
        module: String,
        #[command(flatten)]
        with: With,
        #[arg(long, default_value_t = 6)]
        bound: usize,
    },
    /// F_C- and P_C-projective dimension.
    Fcpd {
        module: String,
        #[command(flatten)]
        with: With,
        #[arg(long, default_value_t = 6)]
        bound: usize,
    },
    /// Long exact sequence of a short exact sequence file against N.
    Les {
        ses: PathBuf,
        n: String,
        #[arg(long, default_value_t = 4)]
        length: usize,
        /// Relative Tor sequence in this variable instead of absolute Tor.
        #[arg(long, value_enum)]
        relative: Option<Variable>,
        #[command(flatten)]
        with: With,
    },
    /// Decides purity of an inclusion file.
    Purity {
        inclusion: PathBuf,
        #[command(flatten)]
        with: With,
        #[arg(long, default_value_t = 6)]
        bound: usize,
    },
    /// Recomputes the headline values and reports each check.
    VerifyPaper {
        #[arg(long, default_value = "square_zero_2vars")]
        preset: String,
        #[arg(long, default_value_t = 6)]
        bound: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Subcommand)]
enum RingCommand {
    Validate { ring: String },
}

#[derive(Debug, Args)]
struct With {
    /// The semidualizing module C.
    #[arg(long = "with", default_value = "preset:omega")]
    c: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Variable {
    First,
    Second,
}

/// What a command produced: the human text, the JSON, and whether every
/// check it ran passed.
struct Outcome {
    text: String,
    json: Value,
    pass: bool,
}

impl Outcome {
    fn ok(text: String, json: Value) -> Self {
        Outcome { text, json, pass: true }
    }
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CrossCheckMismatch { .. } => Failure::Check(e.to_string()),
            e => Failure::Input(e.to_string()),
        }
    }
}

type CmdResult = Result<Outcome, Failure>;

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// A preset name, or a JSON file of the ring or module format.
fn is_file(s: &str) -> bool {
    !s.starts_with("preset:") && Path::new(s).is_file()
}

fn load_module<F: Field>(corpus: &Corpus<F>, s: &str) -> Result<Module<F>, Failure> {
    if is_file(s) {
        Ok(module_ref(corpus, &read_json(Path::new(s))?)?)
    } else {
        Ok(corpus.get(s)?)
    }
}

fn load_ring<F: Field>(f: F, s: &str) -> Result<FiniteLocalAlgebra<F>, Failure> {
    if is_file(s) {
        Ok(FiniteLocalAlgebra::from_json_with_field(f, &read_json(Path::new(s))?)?)
    } else {
        Ok(preset(f, s.strip_prefix("preset:").unwrap_or(s))?)
    }
}

fn list(v: &[usize]) -> String {
    format!("{v:?}")
}

fn ring_summary<F: Field>(r: &FiniteLocalAlgebra<F>) -> Outcome {
    let text = format!(
        "ring {}: dim {}, embedding dim {}, Loewy length {}, basis {}\nvalid: commutative, associative, unital, local\n",
        r.name(),
        r.dim(),
        r.embedding_dim(),
        r.loewy_length(),
        r.basis_names().join(" ")
    );
    Outcome::ok(text, json!({"valid": true, "ring": r.to_json(), "embedding_dim": r.embedding_dim(), "loewy_length": r.loewy_length()}))
}

fn validate(cli: &Cli, ring: &str) -> CmdResult {
    if is_file(ring) {
        // a ring file brings its own field
        return match AnyAlgebra::from_json(&read_json(Path::new(ring))?)? {
            AnyAlgebra::Prime(r) => Ok(ring_summary(&r)),
            AnyAlgebra::Rational(r) => Ok(ring_summary(&r)),
        };
    }
    match cli.field {
        FieldChoice::Fp => Ok(ring_summary(&load_ring(PrimeField::new(cli.p)?, ring)?)),
        FieldChoice::Q => Ok(ring_summary(&load_ring(Rationals, ring)?)),
    }
}

fn execute<F: Field>(f: F, cli: &Cli) -> CmdResult {
    if let Command::VerifyPaper { preset, bound, seed } = &cli.cmd {
        let report = verify_paper(f, preset, *bound, *seed)?;
        return Ok(Outcome { text: report.table(), json: report.to_json(), pass: report.all_pass() });
    }
    let corpus = Corpus::new(std::sync::Arc::new(load_ring(f, &cli.ring)?));
    let with = |w: &With| load_module(&corpus, &w.c);
    match &cli.cmd {
        Command::Ring { .. } | Command::VerifyPaper { .. } => unreachable!("handled above"),
        Command::Resolve { module, length } => {
            let m = load_module(&corpus, module)?;
            let res = minimal_free_resolution(&m, *length);
            let exact = res.augmented_complex().is_exact_everywhere();
            let diffs: Vec<Value> =
                (1..=*length).map(|i| matrix_to_json(m.field(), &res.differential(i).to_k_matrix(&corpus.ring))).collect();
            let text = format!(
                "ranks {}\nminimal: {}\naugmented complex exact: {}\n",
                list(res.betti()),
                res.is_minimal(),
                exact == Exactness::Exact
            );
            Ok(Outcome {
                pass: exact == Exactness::Exact,
                text,
                json: json!({"ranks": res.betti(), "minimal": res.is_minimal(), "differentials": diffs}),
            })
        }
        Command::Betti { module, length } => {
            let b = betti_numbers(&load_module(&corpus, module)?, *length);
            Ok(Outcome::ok(format!("{}\n", list(&b)), json!(b)))
        }
        Command::Tor { m, n, degree } => {
            let d = tor_dims(&load_module(&corpus, m)?, &load_module(&corpus, n)?, *degree)?;
            Ok(Outcome::ok(
                format!("dim Tor_{degree}({m}, {n}) = {}\ndegrees 0..={degree}: {}\n", d[*degree], list(&d)),
                json!({"degree": degree, "dim": d[*degree], "dims": d}),
            ))
        }
        Command::Ext { m, n, degree, flavor, with: w, strategy } => {
            let (mm, nn) = (load_module(&corpus, m)?, load_module(&corpus, n)?);
            let (name, d) = match flavor {
                None => ("Ext".to_string(), ext_dims(&mm, &nn, *degree)?),
                Some(fl) => {
                    let fl: ExtFlavor = fl.parse()?;
                    let s: Strategy = strategy.parse()?;
                    (format!("Ext_{fl:?}"), rel_ext_dims(fl, &with(w)?, &mm, &nn, *degree, s)?)
                }
            };
            Ok(Outcome::ok(
                format!("dim {name}^{degree}({m}, {n}) = {}\ndegrees 0..={degree}: {}\n", d[*degree], list(&d)),
                json!({"degree": degree, "dim": d[*degree], "dims": d}),
            ))
        }
        Command::Reltor { m, n, with: w, flavor, degree, strategy } => {
            let flavor: Flavor = flavor.parse()?;
            let s: Strategy = strategy.parse()?;
            let d = rel_tor_dims(&with(w)?, flavor, &load_module(&corpus, m)?, &load_module(&corpus, n)?, *degree, s)?;
            Ok(Outcome::ok(
                format!("dim Tor^{flavor}_{degree}({m}, {n}) = {}\ndegrees 0..={degree}: {}\n", d[*degree], list(&d)),
                json!({"flavor": flavor.label(), "strategy": strategy, "degree": degree, "dim": d[*degree], "dims": d}),
            ))
        }
        Command::Semidualizing { c, bound } => match is_semidualizing(&load_module(&corpus, c)?, *bound)? {
            SemidualizingVerdict::Certified(cert) => Ok(Outcome::ok(
                format!("{c} is semidualizing: homothety bijective, Ext^i(C,C) = 0 for 1 <= i <= {}\n", cert.ext_vanishing_checked_to),
                json!({"semidualizing": true, "ext_vanishing_checked_to": cert.ext_vanishing_checked_to}),
            )),
            SemidualizingVerdict::Refused(r) => Ok(Outcome::ok(
                format!("{c} is not semidualizing: {r}\n"),
                json!({"semidualizing": false, "refusal": r.to_string()}),
            )),
        },
        Command::Classes { module, with: w, bound } => {
            let (c, m) = (with(w)?, load_module(&corpus, module)?);
            let a = in_auslander_class(&c, &m, *bound)?;
            let b = in_bass_class(&c, &m, *bound)?;
            Ok(Outcome::ok(
                format!("Auslander class: {a}\nBass class: {b}\n"),
                json!({"auslander": a.to_string(), "bass": b.to_string()}),
            ))
        }
        Command::Fcpd { module, with: w, bound } => {
            let (c, m) = (with(w)?, load_module(&corpus, module)?);
            let fc = fc_pd_report(&c, &m, *bound)?;
            let pc = pc_pd_report(&c, &m, *bound)?;
            Ok(Outcome::ok(
                format!(
                    "fc_pd = {}  (Tor_i(Hom(C,M),k): {})\npc_pd = {}  (Ext^i(Hom(C,M),k): {})\n",
                    fc.value,
                    list(&fc.sequence),
                    pc.value,
                    list(&pc.sequence)
                ),
                json!({"fc_pd": fc.value.to_string(), "pc_pd": pc.value.to_string(), "tor_sequence": fc.sequence, "ext_sequence": pc.sequence}),
            ))
        }
        Command::Les { ses, n, length, relative, with: w } => {
            let seq = ses_from_json(&corpus, &read_json(ses)?)?;
            let nn = load_module(&corpus, n)?;
            let les = match relative {
                None => horseshoe_les(&seq, &nn, *length)?,
                Some(v) => {
                    let v = match v {
                        Variable::First => LesVariable::First,
                        Variable::Second => LesVariable::Second,
                    };
                    reltor::relative::rel_tor_les(&with(w)?, &seq, &nn, *length, v)?
                }
            };
            let exact = les.complex.is_exact();
            let mut text = String::new();
            for (label, dim) in les.table() {
                text.push_str(&format!("{label:>18}  {dim}\n"));
            }
            text.push_str(&format!("exact: {}\n", exact == Exactness::Exact));
            let table: Vec<Value> = les.table().into_iter().map(|(l, d)| json!([l, d])).collect();
            Ok(Outcome { pass: exact.is_exact(), text, json: json!({"terms": table, "exact": exact.is_exact()}) })
        }
        Command::Purity { inclusion, with: w, bound } => {
            let inc = inclusion_from_json(&corpus, &read_json(inclusion)?)?;
            match is_pure_submodule(&inc)? {
                Purity::NotPure => Ok(Outcome::ok("not pure: no retraction exists\n".into(), json!({"pure": false}))),
                Purity::Pure(cert) => {
                    let rep = pure_fc_pd_check(&with(w)?, &cert, *bound)?;
                    let text = format!(
                        "pure: split by an explicit retraction (verified: {})\nfc_pd: ambient {}, sub {}, quotient {}\ninequality holds: {}\n",
                        cert.verify(),
                        rep.fc_pd_ambient,
                        rep.fc_pd_sub,
                        rep.fc_pd_quotient,
                        rep.inequality_holds
                    );
                    Ok(Outcome {
                        pass: cert.verify() && rep.inequality_holds,
                        text,
                        json: json!({
                            "pure": true,
                            "retraction": matrix_to_json(inc.field(), cert.retraction.matrix()),
                            "fc_pd_ambient": rep.fc_pd_ambient.to_string(),
                            "fc_pd_sub": rep.fc_pd_sub.to_string(),
                            "fc_pd_quotient": rep.fc_pd_quotient.to_string(),
                            "inequality_holds": rep.inequality_holds,
                        }),
                    })
                }
            }
        }
    }
}

fn dispatch(cli: &Cli) -> CmdResult {
    if let Command::Ring { cmd: RingCommand::Validate { ring } } = &cli.cmd {
        return validate(cli, ring);
    }
    match cli.field {
        FieldChoice::Fp => execute(PrimeField::new(cli.p)?, cli),
        FieldChoice::Q => execute(Rationals, cli),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match dispatch(&cli) {
        Ok(o) => o,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            return ExitCode::from(1);
        }
    };
    print!("{}", outcome.text);
    if let Some(path) = &cli.out {
        let body = serde_json::to_string_pretty(&outcome.json).expect("values serialize");
        if let Err(e) = std::fs::write(path, body + "\n") {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if outcome.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
