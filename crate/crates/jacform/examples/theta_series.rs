//! Build the Jacobi theta series of the E8 lattice with two elliptic
//! vectors: a weight-4 Jacobi form of cogenus 2 whose index has a genuine
//! half-integral off-diagonal entry.
//!
//! ```bash
//! cargo run --release --example theta_series
//! ```

use jacform::exact::rat_int;
use jacform::theta::{theta_series, LatticeSpec};

fn main() -> jacform::Result<()> {
    let lattice = LatticeSpec::e8(&[0, 2])?;
    let bound = 4;
    let form = theta_series(&lattice, bound)?;

    println!(
        "E8 theta series with two elliptic vectors: weight {}, cogenus {}",
        form.k, form.h
    );
    println!("index m = 1/2 V'GV:");
    for i in 0..form.h {
        print!(" ");
        for j in 0..form.h {
            print!(" {:>5}", form.index.entry(i, j).to_string());
        }
        println!();
    }
    println!();

    // Totals per level: the n = 1 level counts the 240 roots.
    for n in 0..=bound as i64 {
        let mut total = rat_int(0);
        let mut classes = 0usize;
        for (mode, _) in form.coeffs.modes() {
            if mode.n == rat_int(n) {
                total += form.coeffs.scalar_coeff(mode);
                classes += 1;
            }
        }
        println!("n = {n}: {classes:>3} mode classes, {total:>6} vectors");
    }
    println!();
    println!(
        "support violations: {} (every stored mode has PSD block matrix)",
        form.check_support().len()
    );
    println!();
    println!("sample coefficients c(1, r):");
    for (mode, _) in form.coeffs.modes().filter(|(m, _)| m.n == rat_int(1)).take(6) {
        println!("  c(1, {:?}) = {}", mode.r, form.coeffs.scalar_coeff(mode));
    }
    Ok(())
}
