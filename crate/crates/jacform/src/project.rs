//! Constructive decomposition of scalar nearly holomorphic elements into
//! holomorphic pieces moved by raising ladders.
//!
//! For k − d > h/2 and invertible index m, every scalar element f of depth
//! (= degree) at most d is uniquely a sum
//!
//! ```text
//!   f = Σ_{|ν,r| ≤ d} R̂_{ν,r}(g_{ν,r}),       g_{ν,r} holomorphic of weight k − |ν,r|,
//! ```
//!
//! and the pieces are computed by peeling degrees from the top: at each
//! degree level, the lowering ladders L̂_{ν,q} are applied with β-order q
//! ascending, each batch is divided by its ladder constant and its raised
//! image is subtracted from the residue. Cross terms vanish because
//! L̂_{μ,q} ∘ R̂_{ν,r} = 0 for distinct same-degree pairs with q ≤ r, and
//! after a full level the residue's degree has dropped. The final residue
//! is the holomorphic part.
//!
//! Every decomposition is followed by an exact reassembly check; the cost
//! is negligible and it guards the ordering of the filtration.

use std::collections::{BTreeMap, HashMap};

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::exact::{
    enumerate_pairs, pairs_up_to, rat_int, HalfIntSymMatrix, MultiIndexPair, Rational,
};
use crate::maass::{apply_lhat, apply_rhat, lr_constant, lr_constant_recursion};
use crate::nearly::{FourierPoly, NearlyHoloElt};

/// Holomorphic components g_{ν,r} of a scalar element of depth ≤ d at
/// weight k: the piece at (ν, r) has weight k − |ν, r|. Reassembly via
/// [`nh_assemble`] reproduces the input exactly; the component at (0, 0) is
/// the holomorphic part.
#[derive(Clone, Debug, PartialEq)]
pub struct NHDecomposition {
    pub k: i64,
    pub d: u32,
    pub index: HalfIntSymMatrix,
    pub level: u32,
    pub components: BTreeMap<MultiIndexPair, FourierPoly>,
}

impl NHDecomposition {
    pub fn h(&self) -> usize {
        self.index.h()
    }

    /// Number of component slots, Σ_{ℓ ≤ d} n(ℓ).
    pub fn num_slots(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, pair: &MultiIndexPair) -> Option<&FourierPoly> {
        self.components.get(pair)
    }
}

/// All ladder constants that fail to be positive for levels up to d; these
/// are exactly the obstructions when k − d ≤ h/2.
pub fn hypothesis_diagnostic(k: i64, d: u32, h: usize) -> Vec<(MultiIndexPair, Rational)> {
    pairs_up_to(d, h)
        .into_iter()
        .filter(|p| !p.is_zero())
        .map(|p| {
            let c = lr_constant_recursion(&p.nu, p.r, k, h);
            (p, c)
        })
        .filter(|(_, c)| !c.is_positive())
        .collect()
}

fn check_hypothesis(k: i64, d: u32, h: usize) -> Result<()> {
    if 2 * (k - d as i64) > h as i64 {
        return Ok(());
    }
    let bad = hypothesis_diagnostic(k, d, h);
    let detail = bad
        .iter()
        .take(3)
        .map(|(p, c)| format!("c{p} = {c}"))
        .collect::<Vec<_>>()
        .join(", ");
    Err(Error::HypothesisViolated(format!(
        "k − d = {} ≤ h/2 = {h}/2; non-positive ladder constants at weight {k}: {detail}",
        k - d as i64
    )))
}

/// Decompose a scalar element of depth ≤ d into holomorphic ladder
/// components. Requires s = 0, depth(f) ≤ d, k − d > h/2 and invertible m.
pub fn nh_decompose(f: &NearlyHoloElt, d: u32) -> Result<NHDecomposition> {
    if f.s() != 0 {
        return Err(Error::ShapeMismatch(format!(
            "scalar decomposition requires s = 0, found s = {}",
            f.s()
        )));
    }
    let h = f.h();
    let k = f.k();
    if let Some(depth) = f.depth() {
        if depth > d {
            return Err(Error::DepthExceeded { found: depth, bound: d });
        }
    }
    check_hypothesis(k, d, h)?;
    if !f.index().is_invertible() {
        return Err(Error::SingularIndex);
    }

    let mut constants: HashMap<MultiIndexPair, Rational> = HashMap::new();
    let mut components: BTreeMap<MultiIndexPair, FourierPoly> = BTreeMap::new();
    for pair in pairs_up_to(d, h) {
        components.insert(pair, FourierPoly::new(h, f.level(), 0));
    }

    let mut residue = f.clone();
    for level in (1..=d).rev() {
        for q in 0..=(level / 2) {
            // All (ν, q) with |ν, q| = level at this β-order, processed as
            // one batch against the same residue.
            let batch: Vec<MultiIndexPair> = enumerate_pairs(level, h)
                .into_iter()
                .filter(|p| p.r == q)
                .collect();
            let mut extracted = Vec::new();
            for pair in &batch {
                let lowered = apply_lhat(&pair.nu, pair.r, &residue)?;
                if lowered.is_zero() {
                    continue;
                }
                let c = match constants.get(pair) {
                    Some(c) => c.clone(),
                    None => {
                        let c = lr_constant(&pair.nu, pair.r, k, f.index())?;
                        constants.insert(pair.clone(), c.clone());
                        c
                    }
                };
                let g = lowered.holomorphic_fourier()?.scale(&(rat_int(1) / c));
                extracted.push((pair.clone(), g));
            }
            for (pair, g) in extracted {
                let g_elt = NearlyHoloElt::from_fourier(
                    k - pair.total_degree() as i64,
                    f.index().clone(),
                    g.clone(),
                )?;
                residue = residue.sub(&apply_rhat(&pair.nu, pair.r, k, &g_elt)?)?;
                components.insert(pair, g);
            }
        }
        if residue.total_degree().map_or(0, |t| t) > level.saturating_sub(1) {
            return Err(Error::InternalInvariant(format!(
                "residue degree did not drop below {level}"
            )));
        }
    }

    if !residue.is_holomorphic() {
        return Err(Error::InternalInvariant(
            "residue after all levels is not holomorphic".into(),
        ));
    }
    components.insert(MultiIndexPair::zero(h), residue.holomorphic_fourier()?);

    let decomposition = NHDecomposition {
        k,
        d,
        index: f.index().clone(),
        level: f.level(),
        components,
    };
    // Uniqueness guard: exact reassembly must reproduce the input.
    let back = nh_assemble(&decomposition)?;
    if &back != f {
        return Err(Error::InternalInvariant(
            "reassembly of the decomposition does not reproduce the input".into(),
        ));
    }
    Ok(decomposition)
}

/// Σ R̂_{ν,r}(g_{ν,r}): rebuild the nearly holomorphic element from its
/// holomorphic components.
pub fn nh_assemble(c: &NHDecomposition) -> Result<NearlyHoloElt> {
    let _h = c.h();
    let mut out = NearlyHoloElt::zero(c.k, 0, c.index.clone(), c.level);
    for (pair, g) in &c.components {
        if g.is_zero() {
            continue;
        }
        let base = NearlyHoloElt::from_fourier(
            c.k - pair.total_degree() as i64,
            c.index.clone(),
            g.clone(),
        )?;
        out = out.add(&apply_rhat(&pair.nu, pair.r, c.k, &base)?)?;
    }
    Ok(out)
}

/// The (0, 0) slot of the decomposition: the holomorphic part of f.
pub fn holomorphic_part(f: &NearlyHoloElt, d: u32) -> Result<FourierPoly> {
    let h = f.h();
    let dec = nh_decompose(f, d)?;
    Ok(dec
        .components
        .get(&MultiIndexPair::zero(h))
        .cloned()
        .expect("slot (0,0) is always present"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, random_half_integral};
    use crate::nearly::FourierMode;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn mode_poly(h: usize, entries: &[(i64, Vec<i64>, Rational)]) -> FourierPoly {
        let mut fp = FourierPoly::new(h, 1, 0);
        for (n, r, c) in entries {
            fp.insert(
                FourierMode::new(rat_int(*n), r.clone()),
                crate::sympow::SymPoly::scalar(h, c.clone()),
            )
            .unwrap();
        }
        fp
    }

    fn random_scalar_elt<R: Rng>(
        rng: &mut R,
        k: i64,
        index: &HalfIntSymMatrix,
        d: u32,
    ) -> NearlyHoloElt {
        let h = index.h();
        let mut out = NearlyHoloElt::zero(k, 0, index.clone(), 1);
        for pair in pairs_up_to(d, h) {
            if rng.gen_bool(0.4) {
                continue;
            }
            let mut entries = Vec::new();
            for _ in 0..rng.gen_range(1..=3) {
                let n = rng.gen_range(-2..=3);
                let r: Vec<i64> = (0..h).map(|_| rng.gen_range(-2..=2)).collect();
                let c = rat(rng.gen_range(-9..=9), rng.gen_range(1..=9));
                entries.push((n, r, c));
            }
            out.insert_term(pair, mode_poly(h, &entries)).unwrap();
        }
        out
    }

    #[test]
    fn holomorphic_input_passes_through() {
        let idx = HalfIntSymMatrix::identity(1);
        let g = mode_poly(1, &[(1, vec![1], rat_int(3)), (0, vec![0], rat(1, 2))]);
        let f = NearlyHoloElt::from_fourier(6, idx, g.clone()).unwrap();
        let dec = nh_decompose(&f, 3).unwrap();
        for (pair, comp) in &dec.components {
            if pair.is_zero() {
                assert_eq!(comp, &g);
            } else {
                assert!(comp.is_zero());
            }
        }
        assert_eq!(nh_assemble(&dec).unwrap(), f);
        assert_eq!(holomorphic_part(&f, 3).unwrap(), g);
    }

    #[test]
    fn beta_times_g_frozen_example() {
        // f = β·g at weight k = 5, h = 1, m = [2], g = e(τ + z):
        // the heat piece is −g/(k−2−h/2) = −(2/5)g and the holomorphic part
        // is (∂_τ g − ½ m⁻¹ ∂_z² g)/(k−2−h/2) = (7/16)·(2/5) g = (7/40) g.
        let idx = HalfIntSymMatrix::from_two_m(&[vec![4]]).unwrap();
        let g = mode_poly(1, &[(1, vec![1], rat_int(1))]);
        let f = NearlyHoloElt::from_fourier(5, idx.clone(), g.clone())
            .unwrap()
            .mul_beta();
        let dec = nh_decompose(&f, 2).unwrap();
        let heat_piece = dec
            .component(&MultiIndexPair::new(vec![0], 1))
            .unwrap()
            .clone();
        assert_eq!(heat_piece, g.scale(&rat(-2, 5)));
        let hol = dec.component(&MultiIndexPair::zero(1)).unwrap().clone();
        assert_eq!(hol, g.scale(&rat(7, 40)));
        // Independent oracle route for the holomorphic part: the heat
        // operator on holomorphic data via bare mode derivatives.
        let minv = idx.invert_index().unwrap();
        let heat_of_g = g.dtau().sub(
            &g.dz(0)
                .dz(0)
                .scale(&(minv.get(0, 0) / rat_int(2))),
        )
        .unwrap();
        assert_eq!(hol, heat_of_g.scale(&(rat_int(1) / rat(5, 2))));
        // All other slots vanish.
        let alpha_piece = dec.component(&MultiIndexPair::new(vec![1], 0)).unwrap();
        assert!(alpha_piece.is_zero());
    }

    #[test]
    fn alpha_times_g_frozen_example() {
        // f = α₁·g: components g at (e₁, 0) and −(m⁻¹∂_z g)₁ at (0, 0).
        let idx = HalfIntSymMatrix::from_two_m(&[vec![4]]).unwrap();
        let g = mode_poly(1, &[(2, vec![3], rat_int(5))]);
        let f = NearlyHoloElt::from_fourier(7, idx.clone(), g.clone())
            .unwrap()
            .mul_alpha(0);
        let dec = nh_decompose(&f, 1).unwrap();
        assert_eq!(
            dec.component(&MultiIndexPair::new(vec![1], 0)).unwrap(),
            &g
        );
        let minv = idx.invert_index().unwrap();
        let expect_hol = g.dz(0).scale(&(-minv.get(0, 0).clone()));
        assert_eq!(dec.component(&MultiIndexPair::zero(1)).unwrap(), &expect_hol);
        assert_eq!(nh_assemble(&dec).unwrap(), f);
        assert_eq!(holomorphic_part(&f, 1).unwrap(), expect_hol);
    }

    #[test]
    fn round_trip_both_directions() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for h in 1..=2usize {
            for d in 1..=4u32 {
                let k = d as i64 + h as i64; // k − d = h > h/2
                for _ in 0..6 {
                    let idx = random_half_integral(&mut rng, h, true);
                    let f = random_scalar_elt(&mut rng, k, &idx, d);
                    let dec = nh_decompose(&f, d).unwrap();
                    assert_eq!(nh_assemble(&dec).unwrap(), f);
                    // Other direction: assemble random components, then
                    // decompose and compare slotwise.
                    let mut comp = BTreeMap::new();
                    for pair in pairs_up_to(d, h) {
                        let fp = if rng.gen_bool(0.3) {
                            FourierPoly::new(h, 1, 0)
                        } else {
                            mode_poly(
                                h,
                                &[(
                                    rng.gen_range(0..=2),
                                    (0..h).map(|_| rng.gen_range(-1..=1)).collect(),
                                    rat(rng.gen_range(-5..=5), rng.gen_range(1..=4)),
                                )],
                            )
                        };
                        comp.insert(pair, fp);
                    }
                    let dec2 = NHDecomposition {
                        k,
                        d,
                        index: idx.clone(),
                        level: 1,
                        components: comp,
                    };
                    let f2 = nh_assemble(&dec2).unwrap();
                    let dec2_back = nh_decompose(&f2, d).unwrap();
                    for (pair, fp) in &dec2.components {
                        assert_eq!(
                            dec2_back.component(pair).unwrap(),
                            fp,
                            "slot {pair} differs"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn decomposition_is_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let idx = random_half_integral(&mut rng, 2, true);
        let k = 7;
        let d = 3;
        let f = random_scalar_elt(&mut rng, k, &idx, d);
        let g = random_scalar_elt(&mut rng, k, &idx, d);
        let sum = f.add(&g).unwrap();
        let df = nh_decompose(&f, d).unwrap();
        let dg = nh_decompose(&g, d).unwrap();
        let dsum = nh_decompose(&sum, d).unwrap();
        for (pair, fp) in &dsum.components {
            let expect = df
                .component(pair)
                .unwrap()
                .add(dg.component(pair).unwrap())
                .unwrap();
            assert_eq!(fp, &expect);
        }
    }

    #[test]
    fn slot_count_matches_multiplicities() {
        let idx = HalfIntSymMatrix::identity(2);
        let f = NearlyHoloElt::zero(9, 0, idx, 1);
        let d = 4;
        let dec = nh_decompose(&f, d).unwrap();
        let expect: usize = (0..=d).map(|l| enumerate_pairs(l, 2).len()).sum();
        assert_eq!(dec.num_slots(), expect);
        // h = 2 multiplicities: n(0..4) = 1, 2, 4, 6, 9.
        assert_eq!(
            (0..=4u32)
                .map(|l| enumerate_pairs(l, 2).len())
                .collect::<Vec<_>>(),
            vec![1, 2, 4, 6, 9]
        );
    }

    #[test]
    fn hypothesis_boundary_refused_with_diagnostic() {
        // h = 2, k − d = h/2 exactly.
        let idx = HalfIntSymMatrix::identity(2);
        let f = NearlyHoloElt::from_fourier(
            3,
            idx.clone(),
            FourierPoly::constant(2, 1, rat_int(1)),
        )
        .unwrap()
        .mul_beta();
        let err = nh_decompose(&f, 2).unwrap_err();
        match err {
            Error::HypothesisViolated(msg) => {
                assert!(msg.contains("nu"), "diagnostic should name a ladder constant: {msg}");
            }
            other => panic!("expected hypothesis violation, got {other:?}"),
        }
        // The named constant is c_(0,1) at weight 3 over h = 2: 3 − 2 − 1 = 0.
        let bad = hypothesis_diagnostic(3, 2, 2);
        assert!(bad
            .iter()
            .any(|(p, c)| p == &MultiIndexPair::new(vec![0, 0], 1) && c == &rat_int(0)));
    }

    #[test]
    fn depth_bound_enforced() {
        let idx = HalfIntSymMatrix::identity(1);
        let f = NearlyHoloElt::from_fourier(
            9,
            idx,
            FourierPoly::constant(1, 1, rat_int(1)),
        )
        .unwrap()
        .mul_monomial(&[1], 1)
        .unwrap();
        assert!(matches!(
            nh_decompose(&f, 2),
            Err(Error::DepthExceeded { found: 3, bound: 2 })
        ));
    }

    #[test]
    fn singular_index_refused() {
        let idx = HalfIntSymMatrix::from_two_m(&[vec![2, 2], vec![2, 2]]).unwrap();
        let f = NearlyHoloElt::from_fourier(
            9,
            idx,
            FourierPoly::constant(2, 1, rat_int(1)),
        )
        .unwrap()
        .mul_beta();
        assert!(matches!(nh_decompose(&f, 2), Err(Error::SingularIndex)));
    }
}
