//! The channel-state dictionary in both directions: a channel becomes a
//! four-party state, the state reproduces the channel's action exactly,
//! and projecting onto maximally entangled pairs implements the channel
//! probabilistically with no correction on success.
//!
//! Run with `cargo run --example choi_round_trip`.

use entangling_ops::channels::{apply_via_choi, project_implement, QuantumChannel};
use entangling_ops::gates::phase_gate;
use entangling_ops::operator::{re, Operator};
use entangling_ops::states::resource_state;

fn main() {
    let alpha = 0.35;
    let channel = QuantumChannel::from_unitary(phase_gate(alpha), 2).unwrap();
    let choi = channel.choi().unwrap();

    println!("channel: U({alpha}) on qubits A1, B1");
    println!(
        "Choi state: dims {:?}, trace = {:.12}",
        choi.operator().dims(),
        choi.operator().trace().re
    );

    // Forward direction: E(rho) recovered from the Choi state alone.
    let mut probe = Operator::identity(&[2, 2]).scale(re(0.25)).into_matrix();
    probe[(0, 3)] = re(0.21);
    probe[(3, 0)] = re(0.21);
    probe[(1, 1)] = re(0.4);
    probe[(2, 2)] = re(0.1);
    probe[(0, 0)] = re(0.3);
    probe[(3, 3)] = re(0.2);
    let rho = Operator::new(probe, vec![2, 2]).unwrap();
    let direct = channel.apply(&rho).unwrap();
    let dual = apply_via_choi(&choi, &rho).unwrap();
    println!(
        "apply vs dual-state reconstruction: max entry gap {:.2e}",
        direct.max_abs_diff(&dual)
    );

    // Backward direction: use the Choi state as a resource. Both parties
    // project their reference copy and their input half onto a maximally
    // entangled pair; on success the channel has happened, corrections not
    // needed.
    let outcome = project_implement(&choi, &rho).unwrap();
    println!(
        "projection succeeds with probability {:.6} (1/d^4 = {:.6})",
        outcome.probability,
        1.0 / 16.0
    );
    let projected = outcome.state.expect("nonzero branch");
    println!(
        "success branch output vs direct action: max entry gap {:.2e}",
        projected.max_abs_diff(&direct)
    );

    // The Choi state of the phase gate is exactly the protocol's resource
    // state, which is why the ladder can consume it as fuel.
    let projector = resource_state(alpha).unwrap().projector();
    println!(
        "Choi state vs resource-state projector: max entry gap {:.2e}",
        choi.operator().max_abs_diff(&projector)
    );
}
