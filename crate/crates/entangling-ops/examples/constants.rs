//! The numbers the whole library orbits: the partial sums `f_n`, their
//! limit, and how far the deterministic ladder sits above the capability
//! bound.
//!
//! Run with `cargo run --example constants`.

use entangling_ops::protocol::{
    capability_constant, capability_ratio, expected_cost, f_infinity_cached, f_series,
};

fn main() {
    println!("   n        f_n     alpha_n * f_n   classical bits/direction");
    for n in 1..=14 {
        let report = expected_cost(n).expect("valid depth");
        println!(
            "  {n:2}   {:10.6}   {:12.6}   {:10.6}",
            f_series(n),
            report.expected_ebits,
            report.expected_classical_bits_per_direction,
        );
    }
    println!();
    let f = f_infinity_cached();
    let beta = capability_constant();
    println!("  f_infinity = {f:.6}");
    println!("  beta       = {beta:.6}   (max of 2 sqrt(x(1-x)) log2((1-x)/x))");
    println!("  ratio      = {:.5}", capability_ratio());
    println!();
    println!("The ladder pays at most {f:.4} ebits per radian of phase, a factor");
    println!(
        "{:.3} above what any protocol must pay; its expected cost per gate",
        capability_ratio()
    );
    println!("still drops like n/2^n with depth, as the third column shows.");
}
