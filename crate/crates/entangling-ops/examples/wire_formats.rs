//! The JSON wire formats, end to end in memory: serialize a channel and a
//! Hamiltonian the way the files look on disk, read them back, and show
//! the parse-versus-validate split the CLI's exit codes are built on.
//!
//! Run with `cargo run --example wire_formats`.

use entangling_ops::channels::{ChannelWire, QuantumChannel};
use entangling_ops::error::Error;
use entangling_ops::gates::phase_gate;
use entangling_ops::operator::Operator;

fn main() {
    let channel = QuantumChannel::from_unitary(phase_gate(0.4), 2).unwrap();
    let wire = ChannelWire::from_channel(&channel);
    let text = serde_json::to_string_pretty(&wire).unwrap();
    println!("a unitary channel on the wire ({} bytes):", text.len());
    for line in text.lines().take(6) {
        println!("  {line}");
    }
    println!("  ...");

    let back: ChannelWire = serde_json::from_str(&text).unwrap();
    let channel2 = back.into_channel().unwrap();
    let p = Operator::identity(&[2, 2]).scale(entangling_ops::operator::re(0.25));
    println!(
        "round trip acts identically: gap {:.2e}",
        channel.apply(&p).unwrap().max_abs_diff(&channel2.apply(&p).unwrap())
    );
    println!();

    // Malformed JSON fails at the parse layer...
    let garbage: Result<ChannelWire, _> = serde_json::from_str("{\"d\": 2, \"kraus\": [[");
    println!("parse of truncated JSON: {:?}", garbage.is_err());

    // ...but a well-formed file with impossible physics fails at the
    // validation layer, with a typed error naming the violated constraint.
    let mut lossy = ChannelWire::from_channel(&channel);
    for row in &mut lossy.kraus[0] {
        for entry in row {
            entry[0] *= 0.5;
            entry[1] *= 0.5;
        }
    }
    match lossy.into_channel() {
        Err(Error::KrausCompleteness { flag, deviation }) => {
            println!("validation of a lossy \"{flag}\" channel: off by {deviation:.3}");
        }
        other => println!("unexpected: {other:?}"),
    }

    println!();
    let h = serde_json::to_string(&phase_gate(0.4)).unwrap();
    println!("operators use the same shape (dims + row-major [re, im] pairs):");
    println!("  {}", &h[..h.len().min(120)]);
    println!("  ...");
    let back = Operator::from_json(&h).unwrap();
    println!(
        "operator round trip exact: {}",
        back.max_abs_diff(&phase_gate(0.4)) == 0.0
    );
}
