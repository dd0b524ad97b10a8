//! Expand an arbitrary interaction phase into the dyadic phases the
//! deterministic ladder knows how to apply, and price the expansion.
//!
//! Run with `cargo run --example approximate_phase`.

use entangling_ops::gates::binary_phase_approx;
use entangling_ops::protocol::f_infinity_cached;

fn main() {
    let alpha = 0.3;
    println!("expanding alpha = {alpha} rad");
    println!();
    println!("{:>10}  {:>12}  {:>12}", "tolerance", "terms", "ebit bound");
    for eps in [1e-3, 1e-6, 1e-9, 1e-12] {
        let approx = binary_phase_approx(alpha, eps).unwrap();
        println!(
            "{eps:>10.0e}  {:>12}  {:>12.6}",
            approx.phases.len(),
            approx.cost_bound
        );
    }

    let approx = binary_phase_approx(alpha, 1e-9).unwrap();
    println!();
    println!("terms at tolerance 1e-9 (largest first):");
    let mut remaining = alpha;
    for (phase, n) in approx.phases.iter().zip(&approx.exponents) {
        remaining -= phase;
        println!("  pi/2^{n:<3} = {phase:.9}   remaining {remaining:.3e}");
    }
    println!("  residual {:.3e}", approx.residual);
    println!();
    println!(
        "every term runs one ladder; the bound is f_infinity ({:.4}) times the",
        f_infinity_cached()
    );
    println!(
        "phase total, {:.6} ebits here against a capability floor of {:.6}.",
        approx.cost_bound,
        entangling_ops::protocol::capability_constant() * alpha
    );
}
