//! Degree and depth bookkeeping, and the ladder constants of the
//! lowering-raising compositions.
//!
//! ```bash
//! cargo run --example depth_and_operators
//! ```

use jacform::exact::{pairs_up_to, rat_int, HalfIntSymMatrix, MultiIndexPair};
use jacform::maass::{
    apply_lhat, apply_rhat, lower, lower_j, lr_constant, lr_constant_recursion, raise,
};
use jacform::nearly::{FourierMode, FourierPoly, NearlyHoloElt};
use jacform::sympow::SymPoly;

fn main() -> jacform::Result<()> {
    // The V_2-valued function (α² + β)X² + αXY + Y² has depth 0: the
    // coefficient of X^j may carry degree up to j.
    let index = HalfIntSymMatrix::identity(1);
    let mode = FourierMode::zero(1);
    let mut elt = NearlyHoloElt::zero(4, 2, index.clone(), 1);
    let monomial = |nu_v: &[u32]| -> jacform::Result<FourierPoly> {
        let mut fp = FourierPoly::new(1, 1, 2);
        fp.insert(
            mode.clone(),
            SymPoly::monomial(2, 1, nu_v.to_vec(), rat_int(1))?,
        )?;
        Ok(fp)
    };
    elt.insert_term(MultiIndexPair::new(vec![2], 0), monomial(&[0])?)?;
    elt.insert_term(MultiIndexPair::new(vec![0], 1), monomial(&[0])?)?;
    elt.insert_term(MultiIndexPair::new(vec![1], 0), monomial(&[1])?)?;
    elt.insert_term(MultiIndexPair::new(vec![0], 0), monomial(&[2])?)?;
    println!("(α² + β)X² + αXY + Y²:");
    println!("  total degree {:?}", elt.total_degree().unwrap());
    println!("  depth        {:?}", elt.depth().unwrap());
    println!();

    // Raising and lowering on a scalar monomial.
    let k = 6;
    let one = NearlyHoloElt::from_fourier(k, index.clone(), FourierPoly::constant(1, 1, rat_int(1)))?;
    println!("R_{k}(1) = {}", raise(&one)?);
    let abb = one.mul_alpha(0).mul_beta().mul_beta();
    println!("L(αβ²·1) = {}", lower(&abb)?);
    println!("L^J(αβ²·1) = {}", lower_j(0, &abb)?);
    println!();

    // Ladder constants: probes against the closed recursion.
    println!("ladder constants c with L̂∘R̂ = c·id at top weight {k} (h = 1):");
    for pair in pairs_up_to(4, 1) {
        if 2 * (k - pair.total_degree() as i64) <= 1 {
            continue;
        }
        let c = lr_constant(&pair.nu, pair.r, k, &index)?;
        println!(
            "  {pair}: c = {c}  (recursion: {})",
            lr_constant_recursion(&pair.nu, pair.r, k, 1)
        );
        // The raised image of a probe comes straight back.
        let probe = NearlyHoloElt::from_fourier(
            k - pair.total_degree() as i64,
            index.clone(),
            FourierPoly::constant(1, 1, rat_int(1)),
        )?;
        let back = apply_lhat(&pair.nu, pair.r, &apply_rhat(&pair.nu, pair.r, k, &probe)?)?;
        assert_eq!(back, probe.scale(&c));
    }
    Ok(())
}
