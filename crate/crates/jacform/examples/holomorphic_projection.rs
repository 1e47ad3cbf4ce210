//! Decompose a scalar nearly holomorphic element into holomorphic pieces
//! moved by raising ladders, and reassemble it exactly.
//!
//! The element here is f = α·g + β·g' + g'' over a one-dimensional index;
//! the decomposition writes f = Σ R̂_{ν,r}(g_{ν,r}) with holomorphic
//! g_{ν,r} of weight k − |ν,r|, uniquely.
//!
//! ```bash
//! cargo run --example holomorphic_projection
//! ```

use jacform::exact::{rat, rat_int, HalfIntSymMatrix};
use jacform::nearly::{FourierMode, FourierPoly, NearlyHoloElt};
use jacform::project::{nh_assemble, nh_decompose};
use jacform::sympow::SymPoly;

fn scalar_mode(h: usize, n: i64, r: Vec<i64>, c: (i64, i64)) -> FourierPoly {
    let mut fp = FourierPoly::new(h, 1, 0);
    fp.insert(
        FourierMode::new(rat_int(n), r),
        SymPoly::scalar(h, rat(c.0, c.1)),
    )
    .unwrap();
    fp
}

fn main() -> jacform::Result<()> {
    let index = HalfIntSymMatrix::from_two_m(&[vec![4]])?; // m = [2]
    let k = 6;
    let d = 2;

    let g = scalar_mode(1, 1, vec![1], (3, 1));
    let g2 = scalar_mode(1, 2, vec![-1], (1, 2));
    let g3 = scalar_mode(1, 0, vec![0], (5, 1));

    let mut f = NearlyHoloElt::from_fourier(k, index.clone(), g)?.mul_alpha(0);
    f = f.add(&NearlyHoloElt::from_fourier(k, index.clone(), g2)?.mul_beta())?;
    f = f.add(&NearlyHoloElt::from_fourier(k, index, g3)?)?;

    println!("input (weight {k}, depth {:?}):", f.depth().unwrap());
    println!("{f}");
    println!();

    let dec = nh_decompose(&f, d)?;
    println!("holomorphic ladder components g_(nu, r):");
    for (pair, comp) in &dec.components {
        if comp.is_zero() {
            continue;
        }
        print!("  {pair} at weight {}:", dec.k - pair.total_degree() as i64);
        for (mode, value) in comp.modes() {
            print!("  ({}) {mode}", value.coeff(&[0]));
        }
        println!();
    }
    println!();

    let back = nh_assemble(&dec)?;
    println!(
        "exact reassembly reproduces the input: {}",
        if back == f { "yes" } else { "NO" }
    );
    Ok(())
}
