//! Command-line front end: table generation, normal-form display, the
//! identity-suite runner, and series reports. Batch-only; exit codes are
//! 0 on success, 1 on verification failure, 2 on usage errors.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use qstirling::boson::{
    inverse_form_to_json, inverse_normal_form, normal_form_to_json, normal_order_power, QChoice,
};
use qstirling::bracket::BracketKind;
use qstirling::expansion::{
    commutator_reference, commutator_series, hamiltonian_reference, hamiltonian_series,
    COMMUTATOR_ASSERTED_DEGREE, HAMILTONIAN_ASSERTED_DEGREE,
};
use qstirling::stirling::{build_table, table_to_csv, table_to_json, table_to_text, StirlingFamily};
use qstirling::verify::{known_ids, run_suite, SuiteConfig};

/// Default guard against accidental combinatorial blowup; lifted by
/// `--unsafe-large`.
const DEFAULT_BOUND: usize = 64;

#[derive(Parser)]
#[command(name = "qstirling", version, about = "Deformed Stirling numbers, boson normal ordering, and exact identity verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonOut {
    /// Output format.
    #[arg(long, value_parser = ["text", "json", "csv"])]
    format: Option<String>,
    /// Write output to a file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Lift the default size guards (n-max and dim capped at 64).
    #[arg(long)]
    unsafe_large: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Build one Stirling-family table.
    Stirling {
        /// Family name, e.g. q_second, classical_first, reduced_second_Xi.
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 10)]
        n_max: usize,
        #[command(flatten)]
        out: CommonOut,
    },
    /// Print a normally ordered expansion (or its inverse).
    NormalOrder {
        /// Power of the deformed number operator.
        #[arg(long)]
        m: Option<usize>,
        /// Print the inverse form instead.
        #[arg(long)]
        inverse: bool,
        /// Order of the normally ordered string (with --inverse).
        #[arg(long)]
        k: Option<usize>,
        /// Bracket kind: M, P or G.
        #[arg(long, default_value = "G")]
        kind: String,
        /// Commutator parameter choice.
        #[arg(long, default_value = "Q_equals_q")]
        q_choice: String,
        #[command(flatten)]
        out: CommonOut,
    },
    /// Run the verification suite; exit 0 iff every check passes.
    Verify {
        #[arg(long, default_value_t = 10)]
        n_max: usize,
        /// Fock-space dimension for the operator checks.
        #[arg(long, default_value_t = 10)]
        dim: usize,
        /// Run only the check with this id.
        #[arg(long)]
        only: Option<String>,
        /// Restrict kind-parameterized checks to one bracket kind.
        #[arg(long)]
        kind: Option<String>,
        #[command(flatten)]
        out: CommonOut,
    },
    /// Oscillator series expansions compared against their closed forms.
    Series {
        /// What to expand: hamiltonian or commutator.
        #[arg(long)]
        what: String,
        /// Eigenvalue level l.
        #[arg(long)]
        level: u32,
        /// Truncation order (total degree in s, t).
        #[arg(long)]
        order: u32,
        #[command(flatten)]
        out: CommonOut,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit(out: &CommonOut, content: &str) -> Result<(), String> {
    match &out.output {
        Some(path) => {
            let mut f = std::fs::File::create(path).map_err(|e| e.to_string())?;
            f.write_all(content.as_bytes()).map_err(|e| e.to_string())?;
        }
        None => print!("{content}"),
    }
    Ok(())
}

fn check_bound(name: &str, value: usize, out: &CommonOut) -> Result<(), String> {
    if value > DEFAULT_BOUND && !out.unsafe_large {
        return Err(format!(
            "{name} = {value} exceeds the default guard of {DEFAULT_BOUND}; pass --unsafe-large to override"
        ));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Stirling { family, n_max, out } => {
            let family = StirlingFamily::from_name(&family)
                .ok_or_else(|| format!("unknown family {family:?}"))?;
            if n_max < 1 {
                return Err("n-max must be at least 1".into());
            }
            check_bound("n-max", n_max, &out)?;
            let table = build_table(family, n_max);
            let content = match out.format.as_deref().unwrap_or("text") {
                "json" => format!("{}\n", serde_json::to_string_pretty(&table_to_json(&table)).unwrap()),
                "csv" => table_to_csv(&table),
                _ => table_to_text(&table),
            };
            emit(&out, &content)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::NormalOrder { m, inverse, k, kind, q_choice, out } => {
            let kind = BracketKind::from_name(&kind)
                .ok_or_else(|| format!("unknown bracket kind {kind:?}"))?;
            let q_choice = QChoice::from_name(&q_choice)
                .ok_or_else(|| format!("unknown Q choice {q_choice:?}"))?;
            let content = if inverse {
                let k = k.ok_or("--inverse requires --k")?;
                if k < 1 {
                    return Err("k must be at least 1".into());
                }
                check_bound("k", k, &out)?;
                if q_choice != QChoice::QEqualsQ {
                    return Err("the inverse form is implemented for Q_equals_q only".into());
                }
                let form = inverse_normal_form(k, kind);
                match out.format.as_deref().unwrap_or("text") {
                    "json" => {
                        format!("{}\n", serde_json::to_string_pretty(&inverse_form_to_json(&form)).unwrap())
                    }
                    "csv" => return Err("csv is not a normal-order format".into()),
                    _ => {
                        let parts: Vec<String> = form
                            .coeffs
                            .iter()
                            .map(|(m, e)| format!("m={m}: {}", e.render()))
                            .collect();
                        format!("{}\n", parts.join(" ; "))
                    }
                }
            } else {
                let m = m.ok_or("--m is required (or pass --inverse --k)")?;
                if m < 1 {
                    return Err("m must be at least 1".into());
                }
                check_bound("m", m, &out)?;
                let form = normal_order_power(m, kind, q_choice);
                match out.format.as_deref().unwrap_or("text") {
                    "json" => {
                        format!("{}\n", serde_json::to_string_pretty(&normal_form_to_json(&form)).unwrap())
                    }
                    "csv" => return Err("csv is not a normal-order format".into()),
                    _ => {
                        let parts: Vec<String> = form
                            .coeffs
                            .iter()
                            .map(|(k, e)| format!("k={k}: {}", e.render()))
                            .collect();
                        format!("{}\n", parts.join(" ; "))
                    }
                }
            };
            emit(&out, &content)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { n_max, dim, only, kind, out } => {
            if dim < 2 {
                return Err("dim must be at least 2".into());
            }
            if n_max < 1 {
                return Err("n-max must be at least 1".into());
            }
            check_bound("dim", dim, &out)?;
            check_bound("n-max", n_max, &out)?;
            if let Some(id) = &only {
                if !known_ids().contains(&id.as_str()) {
                    return Err(format!("unknown identity id {id:?}"));
                }
            }
            let kind = match kind {
                Some(k) => Some(
                    BracketKind::from_name(&k).ok_or_else(|| format!("unknown bracket kind {k:?}"))?,
                ),
                None => None,
            };
            let config = SuiteConfig { n_max, dim, only, kind };
            let outcomes = run_suite(&config);
            if outcomes.is_empty() {
                return Err("the filter selected no checks".into());
            }
            let all_pass = outcomes.iter().all(|o| o.pass);
            let content = match out.format.as_deref().unwrap_or("json") {
                "text" => {
                    let mut s = String::new();
                    for o in &outcomes {
                        s.push_str(&format!(
                            "[{}] {} {}\n",
                            if o.pass { "PASS" } else { "FAIL" },
                            o.id,
                            o.params
                        ));
                    }
                    s
                }
                "csv" => return Err("csv is not a verify format".into()),
                _ => format!("{}\n", serde_json::to_string_pretty(&json!(outcomes)).unwrap()),
            };
            emit(&out, &content)?;
            Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Series { what, level, order, out } => {
            check_bound("order", order as usize, &out)?;
            check_bound("level", level as usize, &out)?;
            let (value, reference, asserted) = match what.as_str() {
                "hamiltonian" => (
                    hamiltonian_series(level, order).series,
                    hamiltonian_reference(level, order),
                    HAMILTONIAN_ASSERTED_DEGREE,
                ),
                "commutator" => (
                    commutator_series(level, order).series,
                    commutator_reference(level, order),
                    COMMUTATOR_ASSERTED_DEGREE,
                ),
                other => return Err(format!("unknown series {other:?} (hamiltonian | commutator)")),
            };
            let asserted = asserted.min(order);
            let residual = value.sub(&reference).truncate(asserted);
            let content = match out.format.as_deref().unwrap_or("text") {
                "json" => format!(
                    "{}\n",
                    serde_json::to_string_pretty(&json!({
                        "what": what,
                        "level": level,
                        "order": order,
                        "asserted_degree": asserted,
                        "value": value.to_json_map(),
                        "reference": reference.to_json_map(),
                        "residual": residual.to_json_map(),
                    }))
                    .unwrap()
                ),
                "csv" => return Err("csv is not a series format".into()),
                _ => format!(
                    "value: {}\nreference: {}\nresidual (through degree {}): {}\n",
                    value, reference, asserted, residual
                ),
            };
            emit(&out, &content)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}
