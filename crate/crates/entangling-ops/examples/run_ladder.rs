//! Watch the escalating measurement ladder run step by step: a scripted
//! worst-case run that fails all the way down, then a seeded random run.
//!
//! Run with `cargo run --example run_ladder`.

use entangling_ops::protocol::{run_protocol, ProtocolTrace, RandomOutcomes, ScriptedOutcomes};

fn print_trace(trace: &ProtocolTrace) {
    println!(
        "  depth {} targets U(pi/2^{}) = U({:.6})",
        trace.n, trace.n, trace.alpha
    );
    println!("   k   resource phase   outcomes (A;B)   success   ebits    bits/dir   corrections");
    for s in &trace.steps {
        println!(
            "   {}   {:>13.6}   ({},{}) ; ({},{})    {:>5}   {:.6}   {:>5}       {:?} (x) {:?}",
            s.k,
            s.resource_phase,
            s.outcome_a.i1,
            s.outcome_a.i2,
            s.outcome_b.i1,
            s.outcome_b.i2,
            s.success,
            s.ebits_consumed,
            s.classical_bits_per_direction,
            s.correction_a,
            s.correction_b,
        );
    }
    println!(
        "  totals: {:.6} ebits, {} classical bits each way, fidelity {:.12}",
        trace.total_ebits, trace.total_classical_bits_per_direction, trace.fidelity_with_target
    );
    println!();
}

fn main() {
    let n = 4;

    // Failing every step escalates through phases pi/16, pi/8, pi/4, and
    // finally pi/2 -- where failure and success coincide, because U(-pi/2)
    // differs from U(pi/2) only by a global minus sign.
    println!("all-failure run:");
    let mut worst_case = ScriptedOutcomes::from_flags(&[false, false, false, false]);
    print_trace(&run_protocol(n, &mut worst_case).unwrap());

    println!("first-try success:");
    let mut best_case = ScriptedOutcomes::from_flags(&[true]);
    print_trace(&run_protocol(n, &mut best_case).unwrap());

    println!("seeded random run:");
    let mut random = RandomOutcomes::seeded(7);
    print_trace(&run_protocol(n, &mut random).unwrap());

    println!("Every run ends with the target gate applied exactly; randomness");
    println!("only decides how much entanglement it took to get there.");
}
