//! Command-line front end.
//!
//! Six subcommands cover the library's capabilities end to end:
//!
//! * `constants` — the series constants `f_n`, their limit, and the
//!   capability bound.
//! * `analyze-channel` — read a channel (JSON Kraus form), emit its Choi
//!   operator and entangling-power verdict.
//! * `simulate` — Monte Carlo over protocol runs with a fixed seed.
//! * `expected-cost` — closed-form resource accounting for one ladder.
//! * `decompose` — Pauli and canonical forms of a two-qubit Hamiltonian,
//!   with its entanglement price.
//! * `approx-phase` — dyadic expansion of an arbitrary phase.
//!
//! Output is JSON (default) or CSV via `--format`, written to stdout or
//! `--output`. Every float is rounded to 12 significant digits before
//! serialization and field order is fixed, so identical invocations
//! produce byte-identical output; the CSV rows are a flattened view of
//! exactly the same values. Exit codes: 0 success, 2 usage, 3 unreadable
//! or unparsable input, 4 structurally invalid input, 5 numeric-domain
//! violation.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::channels::ChannelWire;
use crate::gates::{binary_phase_approx, canonicalize, gate_cost, pauli_decompose};
use crate::operator::{MatrixWire, Operator};
use crate::protocol::{
    capability_constant, capability_ratio, expected_cost, f_infinity_cached, f_series, monte_carlo,
};
use crate::{Error, Result};

/// Parsed invocation: global output options plus one subcommand.
#[derive(Parser, Debug)]
#[command(
    name = "entangling-ops",
    version,
    about = "Channel-state duality and entanglement-frugal two-qubit gates"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Write output here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Series constants, their limit, and the capability bound.
    Constants,
    /// Classify a channel's entangling power via its Choi operator.
    AnalyzeChannel {
        /// Channel in JSON Kraus form.
        #[arg(long, value_name = "PATH")]
        input: PathBuf,
    },
    /// Monte Carlo over randomized protocol runs.
    Simulate {
        /// Ladder depth: the target gate is U(pi/2^n).
        #[arg(long)]
        n: usize,
        /// Number of runs.
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        /// Base seed; trial t draws from stream t of this seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Closed-form expected resource usage of one ladder.
    ExpectedCost {
        /// Ladder depth.
        #[arg(long)]
        n: usize,
    },
    /// Pauli and canonical decompositions of a two-qubit Hamiltonian.
    Decompose {
        /// Hamiltonian in JSON matrix form.
        #[arg(long, value_name = "PATH")]
        input: PathBuf,
        /// Evolution time for the cost estimate.
        #[arg(long, default_value_t = 1.0)]
        t: f64,
    },
    /// Dyadic expansion of a phase in (0, pi/2].
    ApproxPhase {
        /// Phase to expand, in radians.
        #[arg(long)]
        alpha: f64,
        /// Stop once the remainder is at most this.
        #[arg(long, default_value_t = 1e-9)]
        eps: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Parses `std::env::args`, executes, writes the output, and returns the
/// process exit code.
pub fn run() -> i32 {
    let config = match RunConfig::try_parse() {
        Ok(config) => config,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    let output_path = config.output.clone();
    match execute(&config) {
        Ok(text) => {
            let write_result = match &output_path {
                Some(path) => std::fs::write(path, &text),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = write_result {
                eprintln!("error: {e}");
                return 3;
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Maps an error to the CLI exit-code taxonomy.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) | Error::Json(_) => 3,
        Error::NonFinite { .. }
        | Error::NotHermitian { .. }
        | Error::NotUnitary { .. }
        | Error::OutOfDomain(_)
        | Error::ZeroNorm => 5,
        _ => 4,
    }
}

/// Runs one parsed invocation to its final output text.
pub fn execute(config: &RunConfig) -> Result<String> {
    let value = match &config.command {
        Command::Constants => constants_value(),
        Command::AnalyzeChannel { input } => analyze_channel_value(input)?,
        Command::Simulate { n, trials, seed } => {
            let summary = monte_carlo(*n, *trials, *seed)?;
            serde_json::to_value(&summary)?
        }
        Command::ExpectedCost { n } => {
            let report = expected_cost(*n)?;
            serde_json::to_value(&report)?
        }
        Command::Decompose { input, t } => decompose_value(input, *t)?,
        Command::ApproxPhase { alpha, eps } => {
            let approx = binary_phase_approx(*alpha, *eps)?;
            json!({
                "alpha": alpha,
                "eps": eps,
                "phases": approx.phases,
                "exponents": approx.exponents,
                "residual": approx.residual,
                "cost_bound": approx.cost_bound,
            })
        }
    };
    let mut value = value;
    round_floats(&mut value);
    Ok(match config.format {
        OutputFormat::Json => format!("{}\n", serde_json::to_string_pretty(&value)?),
        OutputFormat::Csv => to_csv(&value),
    })
}

fn constants_value() -> Value {
    let f_table: Vec<Value> = (1..=20)
        .map(|n| json!({ "n": n, "f_n": f_series(n) }))
        .collect();
    json!({
        "f_infinity": f_infinity_cached(),
        "beta": capability_constant(),
        "ratio": capability_ratio(),
        "f_table": f_table,
    })
}

fn analyze_channel_value(input: &PathBuf) -> Result<Value> {
    let text = std::fs::read_to_string(input)?;
    let wire: ChannelWire = serde_json::from_str(&text)?;
    let channel = wire.into_channel()?;
    let choi = channel.choi()?;
    let verdict = channel.classify()?;
    Ok(json!({
        "d": channel.d(),
        "trace_flag": channel.trace_flag(),
        "ppt_min_eigenvalue": verdict.ppt_min_eigenvalue,
        "classification": verdict.classification,
        "rank": verdict.rank,
        "is_unitary": verdict.is_unitary,
        "choi": choi.operator(),
    }))
}

fn decompose_value(input: &PathBuf, t: f64) -> Result<Value> {
    let text = std::fs::read_to_string(input)?;
    let wire: MatrixWire = serde_json::from_str(&text)?;
    let h = Operator::from_wire(wire)?;
    let pauli = pauli_decompose(&h)?;
    let canonical = canonicalize(&h)?;
    let cost = gate_cost(&h, t)?;
    Ok(json!({
        "pauli": pauli,
        "canonical": canonical,
        "t": t,
        "gate_cost": cost,
    }))
}

/// Rounds every float in the tree to 12 significant digits, leaving
/// integers alone.
fn round_floats(value: &mut Value) {
    match value {
        Value::Number(n) => {
            if n.is_f64() {
                let x = n.as_f64().expect("checked");
                if let Some(rounded) = serde_json::Number::from_f64(round_sig(x)) {
                    *value = Value::Number(rounded);
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("round-trip of a finite float")
}

/// Flattens the JSON tree into `key,value` rows, dotted paths for nesting
/// and numeric path segments for array indices. The scalars are printed
/// exactly as JSON would print them, so both formats carry the same
/// values.
fn to_csv(value: &Value) -> String {
    let mut rows = vec!["key,value".to_string()];
    fn walk(prefix: &str, v: &Value, rows: &mut Vec<String>) {
        match v {
            Value::Object(map) => {
                for (k, vv) in map {
                    let path = if prefix.is_empty() {
                        k.clone()
                    } else {
                        format!("{prefix}.{k}")
                    };
                    walk(&path, vv, rows);
                }
            }
            Value::Array(items) => {
                for (i, vv) in items.iter().enumerate() {
                    let path = if prefix.is_empty() {
                        i.to_string()
                    } else {
                        format!("{prefix}.{i}")
                    };
                    walk(&path, vv, rows);
                }
            }
            Value::String(s) => rows.push(format!("{prefix},{}", csv_field(s))),
            other => rows.push(format!("{prefix},{other}")),
        }
    }
    walk("", value, &mut rows);
    let mut text = rows.join("\n");
    text.push('\n');
    text
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> RunConfig {
        RunConfig::try_parse_from(args).expect("valid args")
    }

    #[test]
    fn constants_output_is_deterministic_and_correct() {
        let config = parse(&["entangling-ops", "constants"]);
        let a = execute(&config).unwrap();
        let b = execute(&config).unwrap();
        assert_eq!(a, b);
        let v: Value = serde_json::from_str(&a).unwrap();
        assert!((v["f_infinity"].as_f64().unwrap() - 5.97932).abs() < 1e-4);
        assert!((v["ratio"].as_f64().unwrap() - 3.1268).abs() < 1e-3);
        assert_eq!(v["f_table"].as_array().unwrap().len(), 20);
        assert!(
            (v["f_table"][1]["f_n"].as_f64().unwrap() - 4.0 / std::f64::consts::PI).abs() < 1e-11
        );
    }

    #[test]
    fn csv_carries_the_same_values_as_json() {
        let json_out = execute(&parse(&["entangling-ops", "expected-cost", "--n", "4"])).unwrap();
        let csv_out = execute(&parse(&[
            "entangling-ops",
            "expected-cost",
            "--n",
            "4",
            "--format",
            "csv",
        ]))
        .unwrap();
        let v: Value = serde_json::from_str(&json_out).unwrap();
        let expected_row = format!("expected_ebits,{}", v["expected_ebits"]);
        assert!(
            csv_out.lines().any(|line| line == expected_row),
            "missing row {expected_row:?} in:\n{csv_out}"
        );
        assert!(csv_out.starts_with("key,value\n"));
    }

    #[test]
    fn simulate_is_seed_stable() {
        let config = parse(&[
            "entangling-ops",
            "simulate",
            "--n",
            "3",
            "--trials",
            "200",
            "--seed",
            "42",
        ]);
        let a = execute(&config).unwrap();
        let b = execute(&config).unwrap();
        assert_eq!(a, b);
        let v: Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["trials"], 200);
        assert_eq!(
            v["step_histogram"]
                .as_array()
                .unwrap()
                .iter()
                .map(|x| x.as_u64().unwrap())
                .sum::<u64>(),
            200
        );
    }

    #[test]
    #[allow(clippy::approx_constant)] // the rounded literal is the point
    fn float_rounding_is_twelve_significant_digits() {
        assert_eq!(round_sig(std::f64::consts::PI), 3.14159265359);
        assert_eq!(round_sig(0.0), 0.0);
        assert_eq!(round_sig(-1.0 / 3.0), -0.333333333333);
        assert_eq!(round_sig(6.02214076e23), 6.02214076e23);
    }

    #[test]
    fn approx_phase_errors_map_to_domain_exit_code() {
        let config = parse(&["entangling-ops", "approx-phase", "--alpha", "2.0"]);
        let err = execute(&config).unwrap_err();
        assert_eq!(exit_code(&err), 5);
        let config = parse(&["entangling-ops", "approx-phase", "--alpha", "0.3"]);
        let out = execute(&config).unwrap();
        let v: Value = serde_json::from_str(&out).unwrap();
        let total: f64 = v["phases"]
            .as_array()
            .unwrap()
            .iter()
            .map(|x| x.as_f64().unwrap())
            .sum();
        assert!((total - 0.3).abs() < 2e-9);
    }

    #[test]
    fn missing_input_file_maps_to_read_exit_code() {
        let config = parse(&[
            "entangling-ops",
            "analyze-channel",
            "--input",
            "/definitely/not/here.json",
        ]);
        let err = execute(&config).unwrap_err();
        assert_eq!(exit_code(&err), 3);
    }
}
