//! Numerically verify slash invariance of a theta series under the
//! standard generators of the integral Jacobi group, and the covariance of
//! the heat-type operator on top of it.
//!
//! ```bash
//! cargo run --release --example slash_invariance
//! ```

use num_complex::Complex64;

use jacform::maass;
use jacform::slash::{covariance_check, slash_check, GroupElement};
use jacform::theta::{theta_series, LatticeSpec};

fn main() -> jacform::Result<()> {
    let lattice = LatticeSpec::e8(&[0, 2])?;
    let form = theta_series(&lattice, 10)?;
    println!(
        "E8 theta, h = 2, weight {}, {} modes up to n = {}",
        form.k,
        form.coeffs.num_modes(),
        form.trunc
    );
    println!();

    // The inversion maps Im τ = 2 to Im = 1/2, so a single τ = 2i point
    // keeps both sides of every check well inside the truncation budget.
    let points = vec![(
        Complex64::new(0.0, 2.0),
        vec![Complex64::new(0.1, 0.05), Complex64::new(-0.07, 0.04)],
    )];
    let tol = 1e-6;

    let generators = vec![
        ("T: τ ↦ τ+1".to_string(), GroupElement::translation_t(2)),
        ("S: τ ↦ -1/τ".to_string(), GroupElement::inversion_s(2)),
        (
            "z ↦ z + e1·τ".to_string(),
            GroupElement::lattice_shift(vec![1, 0], vec![0, 0])?,
        ),
        (
            "z ↦ z + e2".to_string(),
            GroupElement::lattice_shift(vec![0, 0], vec![0, 1])?,
        ),
        ("κ-shift".to_string(), GroupElement::kappa_shift(vec![vec![1, 1], vec![1, 0]])?),
    ];

    println!("slash invariance |φ|g − φ| / |φ| at τ = 2i:");
    for (name, g) in &generators {
        let report = slash_check(&form, g, &points, tol)?;
        println!(
            "  {:<14} residual {:.3e}  (tail ≤ {:.1e})  {}",
            name,
            report.max_residual,
            report.max_tail,
            if report.pass() { "ok" } else { "FAILED" }
        );
    }
    println!();

    println!("heat-operator covariance residuals:");
    for (name, g) in &generators {
        let report = covariance_check(&form, maass::heat, g, &points, 1e-5)?;
        println!(
            "  {:<14} residual {:.3e}  {}",
            name,
            report.max_residual,
            if report.pass() { "ok" } else { "FAILED" }
        );
    }
    println!();
    Ok(())
}
