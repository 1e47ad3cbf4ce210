//! Decompose a V_s-valued holomorphic element into its tuple of scalar
//! pieces and rebuild it, for h = 1 and s = 2.
//!
//! The multiplicity table printed below is binom(s−ℓ+h−1, h−1); for h = 1
//! every level contributes a single classical piece of weight k+ℓ.
//!
//! ```bash
//! cargo run --example decompose_vector_valued
//! ```

use jacform::exact::{multiplicity_mu, rat, rat_int, HalfIntSymMatrix, MultiIndexPair};
use jacform::nearly::{FourierMode, FourierPoly, NearlyHoloElt};
use jacform::split::{vv_assemble, vv_decompose};
use jacform::sympow::SymPoly;

fn main() -> jacform::Result<()> {
    let h = 1;
    let s = 2;
    let k = 4;
    let index = HalfIntSymMatrix::identity(h);

    // A synthetic holomorphic V_2-valued function: a few modes spread over
    // the monomials X², XY, Y².
    let mut fp = FourierPoly::new(h, 1, s);
    fp.insert(
        FourierMode::new(rat_int(1), vec![1]),
        SymPoly::monomial(s, h, vec![2], rat(3, 1))?,
    )?;
    fp.insert(
        FourierMode::new(rat_int(1), vec![-1]),
        SymPoly::monomial(s, h, vec![1], rat(-2, 1))?,
    )?;
    fp.insert(
        FourierMode::new(rat_int(2), vec![0]),
        SymPoly::monomial(s, h, vec![0], rat(1, 3))?,
    )?;
    let mut phi = NearlyHoloElt::zero(k, s, index, 1);
    phi.insert_term(MultiIndexPair::zero(h), fp)?;

    println!("input: holomorphic, weight ({k}, {s}), h = {h}");
    println!();
    println!("part multiplicities binom(s-l+h-1, h-1):");
    for l in 0..=s {
        println!("  level {l} (weight {}): {}", k + l as i64, multiplicity_mu(s - l, h));
    }
    println!();

    let tuple = vv_decompose(&phi)?;
    for (l, parts) in tuple.parts.iter().enumerate() {
        for (i, part) in parts.iter().enumerate() {
            print!("level {l}, slot {i}, weight {}:", k + l as i64);
            if part.is_zero() {
                println!("  0");
                continue;
            }
            for (mode, value) in part.modes() {
                print!("  ({}) {mode}", value.coeff(&[0]));
            }
            println!();
        }
    }
    println!();

    let back = vv_assemble(&tuple)?;
    println!(
        "exact round trip vv_assemble(vv_decompose(phi)) = phi: {}",
        if back == phi { "yes" } else { "NO" }
    );
    Ok(())
}
