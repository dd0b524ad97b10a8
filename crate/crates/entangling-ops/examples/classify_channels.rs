//! Classify a handful of two-party operations by the partial transpose of
//! their Choi states: a local identity, true entangling gates, a noisy
//! channel, and a correlated-but-local measurement.
//!
//! Run with `cargo run --example classify_channels`.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};

use entangling_ops::channels::{QuantumChannel, TraceFlag};
use entangling_ops::gates::phase_gate;
use entangling_ops::operator::{id2, re, sigma_x, sigma_y, sigma_z, Operator};

fn pauli_pair_kraus() -> Vec<Operator> {
    // All sixteen two-qubit Paulis with weight 1/16 each: the fully
    // depolarizing channel.
    let singles = [id2(), sigma_x(), sigma_y(), sigma_z()];
    let mut kraus = Vec::new();
    for a in &singles {
        for b in &singles {
            kraus.push(a.tensor(b).scale(re(0.25)));
        }
    }
    kraus
}

fn main() {
    let mut table: Vec<(&str, QuantumChannel)> = Vec::new();

    table.push((
        "identity",
        QuantumChannel::from_unitary(Operator::identity(&[2, 2]), 2).unwrap(),
    ));
    table.push((
        "U(pi/8) phase gate",
        QuantumChannel::from_unitary(phase_gate(FRAC_PI_8), 2).unwrap(),
    ));
    table.push((
        "U(pi/4) = swap-class gate",
        QuantumChannel::from_unitary(phase_gate(FRAC_PI_4), 2).unwrap(),
    ));
    table.push(("depolarizing", {
        QuantumChannel::new(pauli_pair_kraus(), 2, TraceFlag::TracePreserving).unwrap()
    }));
    table.push(("local Z-dephasing on A", {
        let p0 = Operator::from_row_slice(
            &[re(1.0), re(0.0), re(0.0), re(0.0)],
            vec![2],
        )
        .unwrap();
        let p1 = Operator::from_row_slice(
            &[re(0.0), re(0.0), re(0.0), re(1.0)],
            vec![2],
        )
        .unwrap();
        QuantumChannel::from_local_kraus(
            vec![(p0, id2()), (p1, id2())],
            2,
            TraceFlag::TracePreserving,
        )
        .unwrap()
    }));

    println!(
        "{:<28} {:>14} {:>6} {:>8}   classification",
        "channel", "min PT eigval", "rank", "unitary"
    );
    for (name, channel) in &table {
        let verdict = channel.classify().unwrap();
        println!(
            "{:<28} {:>14.3e} {:>6} {:>8} {:>3}{}",
            name,
            verdict.ppt_min_eigenvalue,
            verdict.rank,
            verdict.is_unitary,
            "",
            verdict.classification,
        );
    }

    println!();
    println!("A negative partial-transpose eigenvalue certifies entangling power;");
    println!("channels assembled from local Kraus pairs are separable whatever");
    println!("correlations their outcomes carry.");
}
