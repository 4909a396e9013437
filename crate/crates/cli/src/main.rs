mod config;
mod emit;

use std::fs;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use plcommute_core::format::{parse_map, parse_unimodal, write_fit, write_map, write_unimodal};
use plcommute_core::rational::{self, to_f64, LOG_PRECISION_BITS};
use plcommute_core::*;
use serde_json::{json, Value};

use config::{Cli, Command, Make, Pair, RunConfig, UsageError};

/// What a subcommand produced: the artifact for stdout or `--output`, a
/// one-line summary for stderr, and whether a verdict came out true.
struct Outcome {
    pass: bool,
    artifact: String,
    summary: String,
}

impl Outcome {
    fn ok(artifact: String, summary: impl Into<String>) -> Self {
        Outcome {
            pass: true,
            artifact,
            summary: summary.into(),
        }
    }

    fn verdict(pass: bool, report: Value, summary: impl Into<String>) -> Self {
        Outcome {
            pass,
            artifact: pretty(&report),
            summary: summary.into(),
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn strings(rs: &[Rational]) -> Vec<String> {
    rs.iter().map(rational::format).collect()
}

fn read(flag: &'static str, path: &Path) -> Result<String, UsageError> {
    fs::read_to_string(path).map_err(|e| UsageError::flag(flag, format!("{}: {e}", path.display())))
}

fn load_unimodal(flag: &'static str, path: &Path) -> Result<UnimodalMap, UsageError> {
    parse_unimodal(&read(flag, path)?)
        .map_err(|e| UsageError::flag(flag, format!("{}: {e}", path.display())))
}

fn load_map(flag: &'static str, path: &Path) -> Result<PlMap, UsageError> {
    parse_map(&read(flag, path)?)
        .map_err(|e| UsageError::flag(flag, format!("{}: {e}", path.display())))
}

fn load_pair(p: &Pair) -> Result<(UnimodalMap, PlMap), UsageError> {
    Ok((load_unimodal("--g", &p.g)?, load_map("--psi", &p.psi)?))
}

/// Attribute a library error to the flag whose input caused it.
fn blame(flag: &'static str) -> impl Fn(Error) -> UsageError {
    move |e| UsageError::flag(flag, e.to_string())
}

fn not_commuting() -> Outcome {
    Outcome::verdict(
        false,
        json!({ "commutes": false }),
        "psi does not commute with g",
    )
}

fn density_verdict(gaps: &[Rational]) -> &'static str {
    // compare the last level with the middle one; a halving or better
    // suggests the gaps go to zero
    let last = &gaps[gaps.len() - 1];
    let mid = &gaps[(gaps.len() - 1) / 2];
    if last * rational::int(2) <= *mid {
        "gaps shrinking: consistent with a dense pre-image set"
    } else {
        "gaps stalled: consistent with a non-dense pre-image set"
    }
}

fn run(cfg: &RunConfig) -> Result<Outcome, UsageError> {
    let out = match &cfg.command {
        Command::Make(Make::Tent) => Outcome::ok(write_unimodal(&tent()), "tent map"),
        Command::Make(Make::Xi { t }) => {
            let m = xi(*t).map_err(blame("--t"))?;
            Outcome::ok(write_map(&m), format!("xi_{t}: {} laps", t))
        }
        Command::Make(Make::Conjugate { g, h }) => {
            let g = load_unimodal("--g", g)?;
            let h = load_map("--h", h)?;
            let c = conjugate_map(&g, &h).map_err(blame("--h"))?;
            let summary = format!("conjugate with turning point {}", c.turning_point());
            Outcome::ok(write_unimodal(&c), summary)
        }
        Command::CheckCommute(p) => {
            let (g, psi) = load_pair(p)?;
            let c = commutes(&g, &psi).map_err(blame("--psi"))?;
            let summary = if c {
                "psi commutes with g"
            } else {
                "psi does not commute with g"
            };
            Outcome::verdict(c, json!({ "commutes": c }), summary)
        }
        Command::Classify(p) => {
            let (g, psi) = load_pair(p)?;
            match classify_triviality(&g, &psi) {
                Ok(t) => {
                    let summary = match t {
                        Triviality::Constant => "constant commutator".to_string(),
                        Triviality::IterateOf(m) => format!("trivial: g^{m}"),
                        Triviality::NonTrivial => "non-trivial commutator".to_string(),
                    };
                    Outcome::verdict(true, json!({ "commutes": true, "triviality": t }), summary)
                }
                Err(Error::NotCommuting) => not_commuting(),
                Err(e) => return Err(blame("--psi")(e)),
            }
        }
        Command::BoundaryChecks(p) => {
            let (g, psi) = load_pair(p)?;
            match boundary_checks(&g, &psi) {
                Ok(r) => {
                    let passed = r.checks.iter().filter(|c| c.pass).count();
                    let mut summary = format!(
                        "{passed}/{} boundary checks pass on {} laps",
                        r.checks.len(),
                        r.laps
                    );
                    for note in &r.notes {
                        summary.push_str("\nnote: ");
                        summary.push_str(note);
                    }
                    let report = serde_json::to_value(&r).expect("report serializes");
                    Outcome::verdict(r.all_pass(), report, summary)
                }
                Err(Error::NotCommuting) => not_commuting(),
                Err(e) => return Err(blame("--psi")(e)),
            }
        }
        Command::Halve(p) => {
            let (g, psi) = load_pair(p)?;
            let half = halve(&g, &psi).map_err(blame("--psi"))?;
            let summary = format!(
                "{} laps -> {} laps",
                psi.laps().unwrap_or(0),
                half.laps().unwrap_or(0)
            );
            Outcome::ok(write_map(&half), summary)
        }
        Command::Reduce(p) => {
            let (g, psi) = load_pair(p)?;
            let r = reduce_fully(&g, &psi).map_err(blame("--psi"))?;
            let summary = format!(
                "{} laps -> {} laps",
                psi.laps().unwrap_or(0),
                r.laps().unwrap_or(0)
            );
            Outcome::ok(write_map(&r), summary)
        }
        Command::Mu { g, n } => {
            let g = load_unimodal("--g", g)?;
            let grid = mu_grid(&g, *n).map_err(blame("--n"))?;
            let report = json!({ "depth": n, "points": strings(grid.points()) });
            let summary = format!("{} points, max gap {}", grid.points().len(), grid.max_gap());
            Outcome::ok(pretty(&report), summary)
        }
        Command::Density { g, depth } => {
            let g = load_unimodal("--g", g)?;
            let gaps = density_report(&g, *depth).map_err(blame("--depth"))?;
            let verdict = density_verdict(&gaps);
            let report = json!({
                "depth": depth,
                "max_gaps": strings(&gaps),
                "label": "finite-depth evidence",
                "heuristic": verdict,
            });
            Outcome::ok(pretty(&report), format!("finite-depth evidence: {verdict}"))
        }
        Command::FitConjugacy { g, depth } => {
            let g = load_unimodal("--g", g)?;
            let fit = fit_conjugacy(&g, *depth).map_err(blame("--depth"))?;
            let spread = if fit.stabilized && *depth >= 3 {
                power_law_check(&g, *depth, cfg.tolerance)
                    .ok()
                    .and_then(|r| r.max_omega_spread)
            } else {
                None
            };
            let summary = format!(
                "{} interpolant, pieces: {}",
                if fit.stabilized {
                    "stabilized"
                } else {
                    "unstabilized"
                },
                fit.interpolant.piece_count()
            );
            Outcome::ok(write_fit(&fit, spread), summary)
        }
        Command::SlopeLaw { pair, t } => {
            let (g, psi) = load_pair(pair)?;
            let residual = slope_law_residual(&g, &psi, *t).map_err(blame("--psi"))?;
            let holds = residual <= cfg.tolerance;
            let report = json!({
                "t": t,
                "residual": residual,
                "precision_bits": LOG_PRECISION_BITS,
                "tolerance": cfg.tolerance,
                "holds": holds,
            });
            Outcome::verdict(holds, report, format!("slope law residual {residual:e}"))
        }
        Command::PowerLaw { g, depth } => {
            let g = load_unimodal("--g", g)?;
            let r = power_law_check(&g, *depth, cfg.tolerance).map_err(blame("--g"))?;
            let mut report = serde_json::to_value(&r).expect("report serializes");
            report["precision_bits"] = json!(LOG_PRECISION_BITS);
            let summary = match (&r.reason, r.max_omega_spread) {
                (Some(why), _) => format!("not applicable: {why}"),
                (None, Some(s)) => format!("omega spread {s:e} over {} samples", r.samples),
                (None, None) => "no samples".into(),
            };
            Outcome::verdict(r.applicable && r.within_tolerance, report, summary)
        }
        Command::DyadicDensity { k, n, t, pmax } => {
            let gaps = dyadic_density_demo(*k, *n, *t, *pmax).map_err(blame("--t"))?;
            let window = rational::dyadic(1, *n);
            let last = gaps.last().expect("pmax >= 1");
            let ratio = to_f64(&(last / &window));
            let report = json!({
                "window": [rational::format(&window), rational::format(&(&window * rational::int(2)))],
                "max_gaps": strings(&gaps),
                "final_gap_fraction": ratio,
            });
            Outcome::ok(
                pretty(&report),
                format!("final gap is {ratio:.5} of the window"),
            )
        }
        Command::Emit {
            map,
            samples,
            format,
            floats,
        } => {
            let m = load_map("--map", map)?;
            let text = emit::render(&m, *samples, *format, *floats).map_err(blame("--map"))?;
            Outcome::ok(text, format!("{} breakpoints", m.points().len()))
        }
    };
    Ok(out)
}

fn main() -> ExitCode {
    let cfg = match RunConfig::from_cli(Cli::parse()) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(n) = cfg.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: --threads: {e}");
            return ExitCode::from(2);
        }
    }
    let outcome = match run(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match &cfg.output {
        Some(path) => {
            if let Err(e) = fs::write(path, &outcome.artifact) {
                eprintln!("error: --output: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{}", outcome.artifact),
    }
    eprintln!("{}", outcome.summary);
    if outcome.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
