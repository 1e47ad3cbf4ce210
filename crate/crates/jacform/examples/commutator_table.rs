//! Verify the commutator table of the Maass-Shimura operators with exact
//! rational arithmetic, for a random half-integral invertible index of
//! cogenus 2.
//!
//! ```bash
//! cargo run --example commutator_table
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use jacform::exact::random_half_integral;
use jacform::maass::commutator_table;

fn main() -> jacform::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let index = random_half_integral(&mut rng, 2, true);
    println!("index m:");
    for i in 0..2 {
        println!("  [{}  {}]", index.entry(i, 0), index.entry(i, 1));
    }
    println!();

    let k = 5;
    let reports = commutator_table(&index, k, 4, None)?;
    let mut all_ok = true;
    for (name, report) in &reports {
        let status = if report.pass() { "ok" } else { "FAILED" };
        println!("{status:>7}  {name}  ({} probes)", report.checked);
        all_ok &= report.pass();
    }
    println!();
    println!(
        "{} identity instances checked with exact equality: {}",
        reports.len(),
        if all_ok { "all hold" } else { "mismatch found" }
    );
    Ok(())
}
