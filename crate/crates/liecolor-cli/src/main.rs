//! Command-line driver: load a session file, run verification suites, and
//! query the constructed algebras.
//!
//! Exit codes: 0 when every requested check passes, 1 when a check fails,
//! 2 on configuration or usage errors.

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use liecolor::derivations::{d_simplicity_descent, replay_witness, Move};
use liecolor::scalar::Cyclotomic;
use liecolor::session::{Session, Truncation};
use liecolor::suite::{run_suite, SuiteKind};
use liecolor::weyl::{
    center, derived_subalgebra, dims_report, simplicity_check, verify_proper_ideal, weyl_space,
    weyl_tilde, witt_basis, NotSimpleWitness, SimplicityCertificate, SimplicityVerdict,
    SubalgebraBasis, DEFAULT_BURNSIDE_CAP,
};
use num::One;
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "liecolor",
    version,
    about = "Exact verification of graded derivation-simple algebras and their Witt/Weyl-type Lie color algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Args)]
struct Common {
    /// Session file (TOML, or JSON with a .json extension).
    config: PathBuf,
    /// Override the session seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the probe count for randomized sweeps.
    #[arg(long)]
    probes: Option<u32>,
    /// Override the variable-degree bound of the truncation window.
    #[arg(long)]
    truncate_t: Option<u32>,
    /// Override the eigenvalue window as comma-separated ranges, e.g.
    /// `-1..1,-1..1`.
    #[arg(long)]
    a_window: Option<String>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "human")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Load a session file and report every violated constraint.
    Validate {
        #[command(flatten)]
        common: Common,
    },
    /// Run verification suites (comma-separated names or `all`).
    Run {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Classify the canonical operator of one slot on the window.
    Classify {
        #[command(flatten)]
        common: Common,
        /// 1-based slot index.
        #[arg(long)]
        p: usize,
    },
    /// Produce and verify a descent witness for a homogeneous element.
    Dsimple {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        element: String,
    },
    /// Dimensions of the operator algebras of a finite session.
    Dims {
        #[command(flatten)]
        common: Common,
    },
    /// Certificate-producing simplicity check.
    Simplicity {
        #[command(flatten)]
        common: Common,
        /// W for the Witt-type space, Wbar for the derived quotient.
        #[arg(long, ignore_case = true)]
        target: Target,
    },
    /// Color bracket of two operator literals.
    Bracket {
        #[command(flatten)]
        common: Common,
        left: String,
        right: String,
    },
    /// Export a multiplication or bracket table as JSON.
    Table {
        #[command(flatten)]
        common: Common,
        #[arg(long, ignore_case = true)]
        target: TableTarget,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    W,
    Wbar,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableTarget {
    /// Products of the underlying algebra on the truncation window.
    A,
    /// Brackets of the Witt-type basis.
    W,
    /// Brackets of the full operator algebra basis.
    Weyl,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn load_session(common: &Common) -> Result<Session> {
    let mut session =
        liecolor::config::load_and_validate(&common.config).map_err(|e| anyhow!("{e}"))?;
    let mut opts = session.options().clone();
    if let Some(seed) = common.seed {
        opts.seed = seed;
    }
    if let Some(probes) = common.probes {
        opts.probes = probes;
    }
    if let Some(spec) = &common.a_window {
        let ranges = parse_window_spec(spec)?;
        if ranges.len() != session.m() {
            return Err(anyhow!(
                "--a-window needs {} ranges, got {}",
                session.m(),
                ranges.len()
            ));
        }
        let max_t = common
            .truncate_t
            .or(opts.truncation.as_ref().map(|t| t.max_t_degree))
            .unwrap_or(2);
        opts.truncation = Some(Truncation::boxed(max_t, &ranges));
    } else if let Some(max_t) = common.truncate_t {
        opts.truncation = Some(match opts.truncation.take() {
            Some(t) => Truncation { max_t_degree: max_t, a_window: t.a_window },
            None => Truncation::boxed(max_t, &vec![(-1, 1); session.m()]),
        });
    }
    session.set_options(opts);
    Ok(session)
}

fn parse_window_spec(spec: &str) -> Result<Vec<(i64, i64)>> {
    let mut out = Vec::new();
    if spec.trim().is_empty() {
        return Ok(out);
    }
    for part in spec.split(',') {
        let (lo, hi) = part
            .split_once("..")
            .ok_or_else(|| anyhow!("bad range `{part}`, want lo..hi"))?;
        let lo: i64 = lo.trim().parse().context("range start")?;
        let hi: i64 = hi.trim().parse().context("range end")?;
        if lo > hi {
            return Err(anyhow!("empty range `{part}`"));
        }
        out.push((lo, hi));
    }
    Ok(out)
}

fn emit(common: &Common, human: String, json: Value) -> Result<()> {
    let text = match common.format {
        Format::Human => human,
        Format::Json => serde_json::to_string_pretty(&json)? + "\n",
    };
    match &common.out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Validate { common } => match liecolor::config::load_and_validate(&common.config) {
            Ok(session) => {
                let human = format!(
                    "configuration valid: k = {:?}, grading group of size {}, scalar order {}\n",
                    session.signature().blocks(),
                    session.grading().group().size(),
                    session.order()
                );
                let json = json!({
                    "valid": true,
                    "k": session.signature().blocks(),
                    "group_size": session.grading().group().size(),
                    "scalar_order": session.order(),
                });
                emit(&common, human, json)?;
                Ok(ExitCode::SUCCESS)
            }
            Err(liecolor::config::ConfigError::Invalid { report }) => {
                let human = format!("configuration invalid:\n{report}");
                let json = json!({ "valid": false, "violations": report.violations });
                emit(&common, human, json)?;
                Ok(ExitCode::from(2))
            }
            Err(e) => Err(anyhow!("{e}")),
        },
        Command::Run { common, suite } => {
            let session = load_session(&common)?;
            let mut skipped: Vec<String> = Vec::new();
            let kinds: Vec<SuiteKind> = if suite == "all" {
                SuiteKind::ALL
                    .into_iter()
                    .filter(|k| {
                        let ok = liecolor::suite::suite_applicable(&session, *k);
                        if !ok {
                            skipped.push(k.name().to_string());
                        }
                        ok
                    })
                    .collect()
            } else {
                suite
                    .split(',')
                    .map(|s| s.trim().parse::<SuiteKind>().map_err(|e| anyhow!(e)))
                    .collect::<Result<_>>()?
            };
            let mut human = String::new();
            let mut reports = Vec::new();
            let mut all_passed = true;
            for kind in kinds {
                let report = run_suite(&session, kind).map_err(|e| anyhow!("{e}"))?;
                all_passed &= report.passed;
                human.push_str(&report.render_human());
                reports.push(report);
            }
            if !skipped.is_empty() {
                human.push_str(&format!(
                    "skipped (needs a finite session): {}\n",
                    skipped.join(", ")
                ));
            }
            let json = json!({ "passed": all_passed, "suites": reports, "skipped": skipped });
            emit(&common, human, json)?;
            Ok(if all_passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Classify { common, p } => {
            let session = load_session(&common)?;
            if p < 1 || p > session.k() {
                return Err(anyhow!("slot {p} outside 1..={}", session.k()));
            }
            let d = liecolor::derivations::canonical_dspace(&session)[p - 1];
            let window = liecolor::suite::effective_window(&session);
            let class = session
                .classify(&[(Cyclotomic::one(), d)], &window)
                .map_err(|e| anyhow!("{e}"))?;
            let label = format!("{class:?}");
            let human = format!("slot {p}: {label}\n");
            emit(&common, human, json!({ "slot": p, "class": label }))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Dsimple { common, element } => {
            let session = load_session(&common)?;
            let u = session.parse_element(&element).map_err(|e| anyhow!("{e}"))?;
            match d_simplicity_descent(&session, &u) {
                Ok(w) => {
                    let verified = replay_witness(&session, &w).is_ok();
                    let mut human = format!("start: {}\n", session.format_element(&w.start));
                    let mut moves = Vec::new();
                    for mv in &w.moves {
                        match mv {
                            Move::ApplyPoly { p, coeffs } => {
                                let cs: Vec<String> =
                                    coeffs.iter().map(|c| c.to_string()).collect();
                                human.push_str(&format!(
                                    "apply polynomial in operator {p}: [{}]\n",
                                    cs.join(", ")
                                ));
                                moves.push(json!({
                                    "op": "apply_poly",
                                    "slot": p,
                                    "coeffs": cs,
                                }));
                            }
                            Move::MulBy { element } => {
                                let lit = session.format_element(element);
                                human.push_str(&format!("multiply by: {lit}\n"));
                                moves.push(json!({ "op": "mul", "by": lit }));
                            }
                        }
                    }
                    human.push_str(&format!(
                        "replay: {}\n",
                        if verified { "verified, reaches 1" } else { "FAILED" }
                    ));
                    let json = json!({
                        "start": session.format_element(&w.start),
                        "moves": moves,
                        "verified": verified,
                    });
                    emit(&common, human, json)?;
                    Ok(if verified { ExitCode::SUCCESS } else { ExitCode::from(1) })
                }
                Err(e) => {
                    emit(
                        &common,
                        format!("descent failed: {e}\n"),
                        json!({ "error": e.to_string() }),
                    )?;
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Dims { common } => {
            let session = load_session(&common)?;
            let r = dims_report(&session).map_err(|e| anyhow!("{e}"))?;
            let mut human = format!(
                "A: {}\nW: {}\nWeyl: {}\nWeyl/constants: {}\nderived: {}\n",
                r.dim_a, r.dim_witt, r.dim_weyl, r.dim_weyl_tilde, r.dim_weyl_bar
            );
            if let (Some(fw), Some(fb)) = (r.formula_witt, r.formula_weyl_bar) {
                human.push_str(&format!("closed forms: W = {fw}, derived = {fb}\n"));
            }
            for n in &r.notes {
                human.push_str(&format!("note: {n}\n"));
            }
            let json = json!({
                "dim_a": r.dim_a,
                "dim_witt": r.dim_witt,
                "dim_weyl": r.dim_weyl,
                "dim_weyl_tilde": r.dim_weyl_tilde,
                "dim_weyl_bar": r.dim_weyl_bar,
                "formula_witt": r.formula_witt,
                "formula_weyl_bar": r.formula_weyl_bar,
                "top_complement_ok": r.top_complement_ok,
                "notes": r.notes,
            });
            emit(&common, human, json)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Simplicity { common, target } => {
            let session = load_session(&common)?;
            let space = build_target(&session, target)?;
            let verdict = simplicity_check(
                &session,
                &space,
                session.options().seed,
                session.options().probes,
                DEFAULT_BURNSIDE_CAP,
            )
            .map_err(|e| anyhow!("{e}"))?;
            let (human, json) = render_verdict(&session, &space, &verdict);
            emit(&common, human, json)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Bracket { common, left, right } => {
            let session = load_session(&common)?;
            let w1 = session.parse_weyl(&left).map_err(|e| anyhow!("{e}"))?;
            let w2 = session.parse_weyl(&right).map_err(|e| anyhow!("{e}"))?;
            let b = session.bracket(&w1, &w2);
            let lit = session.format_weyl(&b);
            emit(&common, format!("{lit}\n"), json!({ "bracket": lit }))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Table { common, target } => {
            let session = load_session(&common)?;
            let json = build_table(&session, target)?;
            let human = serde_json::to_string_pretty(&json)? + "\n";
            emit(&common, human, json)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn build_target(session: &Session, target: Target) -> Result<SubalgebraBasis> {
    match target {
        Target::W => witt_basis(session).map_err(|e| anyhow!("{e}")),
        Target::Wbar => {
            let tilde = weyl_tilde(session).map_err(|e| anyhow!("{e}"))?;
            Ok(derived_subalgebra(session, &tilde))
        }
    }
}

fn render_verdict(
    session: &Session,
    space: &SubalgebraBasis,
    verdict: &SimplicityVerdict,
) -> (String, Value) {
    match verdict {
        SimplicityVerdict::Simple(cert) => {
            let (kind, detail) = match cert {
                SimplicityCertificate::Burnside { dim, envelope_dim } => (
                    "burnside",
                    format!("adjoint envelope fills {envelope_dim} = {dim}^2 dimensions"),
                ),
                SimplicityCertificate::Closures { generators_checked, probes_checked } => (
                    "closures",
                    format!(
                        "{generators_checked} basis closures and {probes_checked} probe closures fill the space"
                    ),
                ),
            };
            (
                format!("SIMPLE (dimension {}): {detail}\n", space.dim()),
                json!({
                    "verdict": "SIMPLE",
                    "dimension": space.dim(),
                    "certificate": { "kind": kind, "detail": detail },
                }),
            )
        }
        SimplicityVerdict::NotSimple(witness) => match witness {
            NotSimpleWitness::AbelianLine => (
                format!("NOT-SIMPLE (dimension {}): the bracket vanishes\n", space.dim()),
                json!({ "verdict": "NOT-SIMPLE", "dimension": space.dim(), "reason": "abelian" }),
            ),
            NotSimpleWitness::ProperIdeal(ideal) => {
                let verified = verify_proper_ideal(session, space, ideal);
                let rows: Vec<String> =
                    ideal.rows().iter().map(|r| session.format_weyl(r)).collect();
                let mut human = format!(
                    "NOT-SIMPLE (dimension {}): proper ideal of dimension {} ({})\n",
                    space.dim(),
                    ideal.dim(),
                    if verified { "verified" } else { "UNVERIFIED" }
                );
                for r in &rows {
                    human.push_str(&format!("  ideal basis: {r}\n"));
                }
                (
                    human,
                    json!({
                        "verdict": "NOT-SIMPLE",
                        "dimension": space.dim(),
                        "ideal": { "dimension": ideal.dim(), "basis": rows, "verified": verified },
                    }),
                )
            }
        },
    }
}

fn build_table(session: &Session, target: TableTarget) -> Result<Value> {
    use serde_json::Map;
    match target {
        TableTarget::A => {
            let window = liecolor::suite::effective_window(session);
            let basis = session.enumerate_basis(&window);
            let mut entries = Map::new();
            for u in &basis {
                for v in &basis {
                    let key =
                        format!("{} ; {}", session.format_index(u), session.format_index(v));
                    let mut product = Map::new();
                    if let Some((c, w)) = session.mul_basis(u, v) {
                        product.insert(session.format_index(&w), Value::String(c.to_string()));
                    }
                    entries.insert(key, Value::Object(product));
                }
            }
            Ok(json!({
                "target": "A",
                "basis": basis.iter().map(|b| session.format_index(b)).collect::<Vec<_>>(),
                "products": entries,
            }))
        }
        TableTarget::W | TableTarget::Weyl => {
            let space = match target {
                TableTarget::W => witt_basis(session).map_err(|e| anyhow!("{e}"))?,
                _ => weyl_space(session).map_err(|e| anyhow!("{e}"))?,
            };
            let mut entries = Map::new();
            for (i, x) in space.rows().iter().enumerate() {
                for (j, y) in space.rows().iter().enumerate() {
                    let b = space.bracket_in(session, x, y);
                    if b.is_zero() {
                        continue;
                    }
                    let mut expansion = Map::new();
                    for (idx, c) in b.iter() {
                        expansion
                            .insert(session.format_windex(idx), Value::String(c.to_string()));
                    }
                    entries.insert(format!("{i} ; {j}"), Value::Object(expansion));
                }
            }
            let name = if matches!(target, TableTarget::W) { "W" } else { "Weyl" };
            let z = center(session, &space);
            Ok(json!({
                "target": name,
                "dimension": space.dim(),
                "basis": space.rows().iter().map(|r| session.format_weyl(r)).collect::<Vec<_>>(),
                "center_dimension": z.dim(),
                "brackets": entries,
            }))
        }
    }
}
