//! Command-line front end for the verification engine: evaluate words in a
//! representation, trace symbolic curve actions, check single identities,
//! run verification ledgers, and compare generating sets.
//!
//! Exit codes: 0 everything passed, 1 something failed, 2 something stayed
//! undecided, 3 usage or input error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use mcg::action::{apply, Applied};
use mcg::homrep::{eval_f2, eval_z, f2_rows_hex, z_rows_dec};
use mcg::model::{parse_symbol, resolve};
use mcg::permrep::perm;
use mcg::verify::{
    check_entry, convention_hash, default_ledger, exit_code, gen_compare, parse_ledger,
    render_text, run_ledger, Claim, Entry, Layer, CONVENTIONS,
};
use mcg::words::{parse_with, Bindings, Defs, Word};
use mcg::{SurfaceParams, Verdict};

#[derive(Parser)]
#[command(
    name = "mcg",
    version,
    about = "Verification engine for the mapping class group of a nonorientable surface"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Surface {
    /// Nonorientable genus (at least 14).
    #[arg(long, default_value_t = 15)]
    g: i64,
    /// Number of punctures (at least 1).
    #[arg(long, default_value_t = 2)]
    p: i64,
}

impl Surface {
    fn build(&self) -> Result<SurfaceParams> {
        SurfaceParams::build(self.g, self.p).map_err(|e| anyhow!("{e}"))
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum Rep {
    /// Exact integer homology (annotated layer).
    #[value(name = "homZ", alias = "homz")]
    HomZ,
    /// Mod-2 homology (normative layer).
    #[value(name = "homF2", alias = "homf2")]
    HomF2,
    /// Induced permutation of the punctures.
    #[value(name = "perm")]
    Perm,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a word in a representation layer and print the image.
    Eval {
        #[command(flatten)]
        surface: Surface,
        /// Representation to evaluate in.
        #[arg(long, value_enum, default_value = "homF2")]
        rep: Rep,
        /// Print machine-readable JSON instead of text.
        #[arg(long)]
        json: bool,
        /// The word, in the word grammar (e.g. "(A1 B1)^-1 rho3").
        word: String,
    },
    /// Apply a word to a catalog curve and print the symbolic derivation.
    Act {
        #[command(flatten)]
        surface: Surface,
        #[arg(long)]
        json: bool,
        /// The acting word.
        word: String,
        /// The starting curve (e.g. "b2", "alpha7", "bd(3,1)").
        curve: String,
    },
    /// Check one claimed identity in the requested layers.
    Check {
        #[command(flatten)]
        surface: Surface,
        /// Comma-separated layers (action,homZ,homF2,perm); default all.
        #[arg(long, value_delimiter = ',')]
        layers: Vec<String>,
        #[arg(long)]
        json: bool,
        /// Left-hand word.
        lhs: String,
        /// Right-hand word.
        rhs: String,
    },
    /// Run a verification ledger and report every entry.
    Verify {
        #[command(flatten)]
        surface: Surface,
        /// Comma-separated layers (action,homZ,homF2,perm); default all.
        #[arg(long, value_delimiter = ',')]
        layers: Vec<String>,
        /// Ledger file to run instead of the built-in one.
        #[arg(long)]
        ledger: Option<PathBuf>,
        /// Write the JSON report here (a conventions file is written next
        /// to it).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Compare the five-element generating set against the reference set in
    /// mod-2 homology, and check the puncture action generates Sym_p.
    GensCompare {
        #[command(flatten)]
        surface: Surface,
        /// Seed for the randomized stabilizer chains.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not usage errors.
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(3);
            }
            emit(&e.to_string());
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}

/// Writes to stdout, dying quietly with the conventional pipe status when
/// the consumer has gone away (e.g. `mcg verify | head`).
fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if let Err(e) = out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(141);
        }
        eprintln!("error: {e}");
        std::process::exit(3);
    }
}

fn emitln(text: &str) {
    emit(text);
    emit("\n");
}

/// Words typed on the command line may use the built-in ledger's named
/// abbreviations, so bring those definitions into scope.
fn cli_defs(params: &SurfaceParams) -> Result<Defs> {
    Ok(default_ledger(params).map_err(|e| anyhow!("{e}"))?.defs)
}

fn parse_word(params: &SurfaceParams, defs: &Defs, text: &str) -> Result<Word> {
    parse_with(params, text, defs, &Bindings::new())
        .map_err(|e| anyhow!("word '{text}': {e}"))
}

fn parse_layers(texts: &[String]) -> Result<Vec<Layer>> {
    if texts.is_empty() {
        return Ok(Layer::ALL.to_vec());
    }
    let mut out = Vec::new();
    for t in texts {
        let layer = Layer::parse(t).ok_or_else(|| anyhow!("unknown layer '{t}'"))?;
        if !out.contains(&layer) {
            out.push(layer);
        }
    }
    out.sort();
    Ok(out)
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::Pass => 0,
        Verdict::Fail => 1,
        Verdict::Undecided => 2,
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Eval { surface, rep, json, word } => {
            let s = surface.build()?;
            let defs = cli_defs(&s)?;
            let w = parse_word(&s, &defs, &word)?;
            match rep {
                Rep::HomZ => {
                    let m = eval_z(&s, &w).map_err(|e| anyhow!("{e}"))?;
                    let rows = z_rows_dec(&m);
                    if json {
                        emitln(
                            &serde_json::json!({
                                "g": s.g, "p": s.p, "rep": "homZ",
                                "dim": m.dim(), "rows": rows,
                            })
                            .to_string(),
                        );
                    } else {
                        for row in rows {
                            emitln(&row.join(" "));
                        }
                    }
                }
                Rep::HomF2 => {
                    let m = eval_f2(&s, &w).map_err(|e| anyhow!("{e}"))?;
                    let rows = f2_rows_hex(&m);
                    if json {
                        emitln(
                            &serde_json::json!({
                                "g": s.g, "p": s.p, "rep": "homF2",
                                "dim": m.dim(), "rows": rows,
                            })
                            .to_string(),
                        );
                    } else {
                        for row in rows {
                            emitln(&row);
                        }
                    }
                }
                Rep::Perm => {
                    let q = perm(&s, &w);
                    if json {
                        let images: Vec<u32> = (1..=s.p).map(|l| q.image(l)).collect();
                        emitln(
                            &serde_json::json!({
                                "g": s.g, "p": s.p, "rep": "perm",
                                "cycles": q.to_string(), "images": images,
                            })
                            .to_string(),
                        );
                    } else {
                        emitln(&q.to_string());
                    }
                }
            }
            Ok(0)
        }
        Command::Act { surface, json, word, curve } => {
            let s = surface.build()?;
            let defs = cli_defs(&s)?;
            let w = parse_word(&s, &defs, &word)?;
            let sym = parse_symbol(&curve).map_err(|e| anyhow!("curve '{curve}': {e}"))?;
            let id = resolve(&s, &sym).map_err(|e| anyhow!("curve '{curve}': {e}"))?;
            let trace = apply(&s, &w, id);
            let (code, image) = match trace.result {
                Applied::Known(c) => (0u8, Some(c.display_name(&s))),
                Applied::Unknown => (2u8, None),
            };
            if json {
                let steps: Vec<serde_json::Value> = trace
                    .steps
                    .iter()
                    .map(|st| {
                        serde_json::json!({
                            "letter": st.letter,
                            "rule": st.rule.to_string(),
                            "state": st.state,
                        })
                    })
                    .collect();
                emitln(
                    &serde_json::json!({
                        "g": s.g, "p": s.p,
                        "word": trace.word, "start": trace.start,
                        "steps": steps,
                        "known": matches!(trace.result, Applied::Known(_)),
                        "image": image,
                    })
                    .to_string(),
                );
            } else {
                emitln(&trace.to_string());
            }
            Ok(code)
        }
        Command::Check { surface, layers, json, lhs, rhs } => {
            let s = surface.build()?;
            let requested = parse_layers(&layers)?;
            let defs = cli_defs(&s)?;
            let entry = Entry {
                id: "cli".into(),
                layers: requested.clone(),
                claim: Claim::WordEq {
                    lhs: parse_word(&s, &defs, &lhs)?,
                    rhs: parse_word(&s, &defs, &rhs)?,
                },
                sign_plan: None,
                anchor: "command line".into(),
            };
            let report = check_entry(&s, &entry, &requested)
                .ok_or_else(|| anyhow!("no layer selected"))?;
            if json {
                emitln(&serde_json::to_string_pretty(&report)?);
            } else {
                for (name, v) in &report.layers {
                    emitln(&format!("{name}: {v}"));
                }
                for n in &report.notes {
                    emitln(&format!("note: {n}"));
                }
            }
            Ok(verdict_code(report.worst()))
        }
        Command::Verify { surface, layers, ledger, out, json } => {
            let s = surface.build()?;
            let requested = parse_layers(&layers)?;
            let parsed = match &ledger {
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    parse_ledger(&s, &text).map_err(|e| anyhow!("{e}"))?
                }
                None => default_ledger(&s).map_err(|e| anyhow!("{e}"))?,
            };
            let report = run_ledger(&s, &parsed, &requested, true).map_err(|e| anyhow!("{e}"))?;
            if let Some(path) = &out {
                std::fs::write(path, serde_json::to_string_pretty(&report)?)
                    .with_context(|| format!("writing {}", path.display()))?;
                let conventions = conventions_path(path);
                std::fs::write(
                    &conventions,
                    format!("{CONVENTIONS}\nsha256: {}\n", convention_hash()),
                )
                .with_context(|| format!("writing {}", conventions.display()))?;
            }
            if json {
                emitln(&serde_json::to_string_pretty(&report)?);
            } else {
                emit(&render_text(&report));
            }
            Ok(exit_code(&report) as u8)
        }
        Command::GensCompare { surface, seed, json } => {
            let s = surface.build()?;
            let r = gen_compare(&s, seed).map_err(|e| anyhow!("{e}"))?;
            let equal = r.mod2_equal == Some(true);
            if json {
                emitln(&serde_json::to_string_pretty(&r)?);
            } else {
                emitln(&format!(
                    "five-element set generates the reference mod-2 group: {}",
                    if equal { "yes" } else { "NO" }
                ));
                if let (Some(a), Some(b)) = (&r.five_order, &r.reference_order) {
                    emitln(&format!("five-set image order:  {a}"));
                    emitln(&format!("reference image order: {b}"));
                }
                emitln(&format!(
                    "rho3*rho4 and rho1 generate Sym_p: {}",
                    if r.sym_p { "yes" } else { "NO" }
                ));
            }
            Ok(if equal && r.sym_p { 0 } else { 1 })
        }
    }
}

/// The conventions file written alongside a report: same directory, same
/// stem, `.conventions.txt` suffix.
fn conventions_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().unwrap_or_default().to_string_lossy();
    out.with_file_name(format!("{stem}.conventions.txt"))
}
