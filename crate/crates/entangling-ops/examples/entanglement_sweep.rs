//! Sweep the resource state's phase from 0 to pi/2 and watch its
//! entanglement trace out the binary-entropy curve, peaking at one ebit
//! for the swap-class gate and vanishing at both local ends.
//!
//! Run with `cargo run --example entanglement_sweep`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_8};

use entangling_ops::states::{binary_entropy, resource_state};

fn main() {
    let width = 48;
    println!("  alpha/pi     E(psi_alpha)");
    for i in 0..=24 {
        let alpha = FRAC_PI_2 * i as f64 / 24.0;
        let e = resource_state(alpha)
            .unwrap()
            .entropy_of_entanglement(&[0, 1])
            .unwrap();
        let bar = "#".repeat((e * width as f64).round() as usize);
        println!("  {:8.4}     {e:.6}  {bar}", alpha / std::f64::consts::PI);
    }
    println!();

    // The curve is exactly h(cos^2 alpha); spot-check the ladder's phases.
    println!("  ladder rungs:");
    for n in 1..=6u32 {
        let alpha = FRAC_PI_2 / 2f64.powi(n as i32 - 1);
        let e = resource_state(alpha)
            .unwrap()
            .entropy_of_entanglement(&[0, 1])
            .unwrap();
        println!(
            "    pi/2^{n}: E = {e:.9}   h(cos^2) = {:.9}",
            binary_entropy(alpha.cos().powi(2))
        );
    }

    // Schmidt structure at one point: two terms, weights cos^2 and sin^2.
    let schmidt = resource_state(FRAC_PI_8)
        .unwrap()
        .schmidt(&[0, 1])
        .unwrap();
    println!();
    println!(
        "  at pi/8 the state has Schmidt rank {} with coefficients {:?}",
        schmidt.rank(),
        schmidt
            .coefficients
            .iter()
            .map(|c| (c * 1e6).round() / 1e6)
            .collect::<Vec<_>>()
    );
    println!(
        "  against cos(pi/8) = {:.6}, sin(pi/8) = {:.6}",
        FRAC_PI_8.cos(),
        FRAC_PI_8.sin()
    );
}
