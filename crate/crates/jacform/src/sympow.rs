//! The symmetric-power representation V_s of the affine group.
//!
//! V_s is the space of homogeneous polynomials of degree s in X, Y₁, …, Y_h.
//! The affine group element with scale r and translation v acts by the
//! substitution f ↦ f(rX, v₁X + Y₁, …, v_hX + Y_h). Since the X-exponent of
//! a monomial is determined by its Y-exponents (a = s - |ν|), polynomials
//! are stored keyed on ν alone.
//!
//! The maps realized here are the order-zero building blocks of every
//! covariant operator in the crate: the inclusion f ↦ X^t·f, the projection
//! onto coset representatives with small X-exponent, and the section of the
//! t = 1 quotient that sends the class of Y^ν back to Y^ν.

use std::collections::BTreeMap;
use std::ops::{Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{multiplicity_mu, y_monomials};

/// Coefficient ring for [`SymPoly`]. Implemented by `Rational` for exact
/// work and by `Complex<f64>` for numerical evaluation.
pub trait Coeff:
    Clone + PartialEq + Zero + One + Neg<Output = Self> + Sub<Output = Self> + Mul<Output = Self>
{
}

impl<T> Coeff for T where
    T: Clone + PartialEq + Zero + One + Neg<Output = T> + Sub<Output = T> + Mul<Output = T>
{
}

/// Small non-negative integer as a ring element, by binary doubling.
pub fn coeff_from_u64<C: Coeff>(n: u64) -> C {
    let mut acc = C::zero();
    for bit in (0..64).rev() {
        acc = acc.clone() + acc;
        if n >> bit & 1 == 1 {
            acc = acc + C::one();
        }
    }
    acc
}

fn pow<C: Coeff>(base: &C, e: u32) -> C {
    let mut acc = C::one();
    for _ in 0..e {
        acc = acc * base.clone();
    }
    acc
}

/// Element of V_s: finitely many monomials X^{s-|ν|} Y^ν with |ν| ≤ s,
/// keyed on ν. Zero coefficients are pruned.
#[derive(Clone, Debug, PartialEq)]
pub struct SymPoly<C> {
    s: u32,
    h: usize,
    coeffs: BTreeMap<Vec<u32>, C>,
}

impl<C: Coeff> SymPoly<C> {
    pub fn zero(s: u32, h: usize) -> Self {
        SymPoly {
            s,
            h,
            coeffs: BTreeMap::new(),
        }
    }

    /// The monomial c·X^{s-|ν|} Y^ν.
    pub fn monomial(s: u32, h: usize, nu: Vec<u32>, c: C) -> Result<Self> {
        if nu.len() != h {
            return Err(Error::ShapeMismatch(format!(
                "monomial exponent has {} parts, cogenus is {h}",
                nu.len()
            )));
        }
        let deg: u32 = nu.iter().sum();
        if deg > s {
            return Err(Error::DegreeMismatch(format!(
                "|nu| = {deg} exceeds the homogeneous degree {s}"
            )));
        }
        let mut p = Self::zero(s, h);
        p.add_to(nu, c);
        Ok(p)
    }

    /// The constant c viewed in V_0.
    pub fn scalar(h: usize, c: C) -> Self {
        let mut p = Self::zero(0, h);
        p.add_to(vec![0; h], c);
        p
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn x_exp(&self, nu: &[u32]) -> u32 {
        self.s - nu.iter().sum::<u32>()
    }

    pub fn coeff(&self, nu: &[u32]) -> C {
        self.coeffs.get(nu).cloned().unwrap_or_else(C::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<u32>, &C)> {
        self.coeffs.iter()
    }

    pub fn add_to(&mut self, nu: Vec<u32>, c: C) {
        debug_assert!(nu.len() == self.h && nu.iter().sum::<u32>() <= self.s);
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(nu);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.s != other.s || self.h != other.h {
            return Err(Error::ShapeMismatch(format!(
                "adding V_{} (h={}) to V_{} (h={})",
                self.s, self.h, other.s, other.h
            )));
        }
        let mut out = self.clone();
        for (nu, c) in &other.coeffs {
            out.add_to(nu.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.s, self.h);
        for (nu, c) in &self.coeffs {
            out.add_to(nu.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.s, self.h);
        if c.is_zero() {
            return out;
        }
        for (nu, v) in &self.coeffs {
            out.add_to(nu.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> SymPoly<D> {
        let mut out = SymPoly::zero(self.s, self.h);
        for (nu, c) in &self.coeffs {
            out.add_to(nu.clone(), f(c));
        }
        out
    }
}

/// Affine substitution f(rX, v₁X + Y₁, …, v_hX + Y_h); requires r ≠ 0.
pub fn aff_act<C: Coeff>(r: &C, v: &[C], f: &SymPoly<C>) -> Result<SymPoly<C>> {
    if r.is_zero() {
        return Err(Error::ZeroScale);
    }
    if v.len() != f.h() {
        return Err(Error::ShapeMismatch(format!(
            "translation vector has {} parts, cogenus is {}",
            v.len(),
            f.h()
        )));
    }
    let mut out = SymPoly::zero(f.s(), f.h());
    for (nu, c) in f.iter() {
        let base = c.clone() * pow(r, f.x_exp(nu));
        // (v_j X + Y_j)^{ν_j} expanded over γ ≤ ν: the γ-term carries
        // binom(ν_j, γ_j) v^γ and lands on X^{a+|γ|} Y^{ν-γ}.
        let mut gamma = vec![0u32; f.h()];
        loop {
            let mut w = base.clone();
            for j in 0..f.h() {
                w = w * coeff_from_u64::<C>(crate::exact::binomial(
                    nu[j] as u64,
                    gamma[j] as u64,
                ));
                w = w * pow(&v[j], gamma[j]);
            }
            let key: Vec<u32> = nu.iter().zip(&gamma).map(|(a, g)| a - g).collect();
            out.add_to(key, w);
            // Odometer over the box 0 ≤ γ ≤ ν.
            let mut j = 0;
            loop {
                if j == f.h() {
                    break;
                }
                if gamma[j] < nu[j] {
                    gamma[j] += 1;
                    break;
                }
                gamma[j] = 0;
                j += 1;
            }
            if j == f.h() {
                break;
            }
        }
    }
    Ok(out)
}

/// The inclusion f ↦ X^t·f of V_{s-t} into V_s, where s = deg f + t.
pub fn include_i<C: Coeff>(t: u32, s: u32, f: &SymPoly<C>) -> Result<SymPoly<C>> {
    if f.s() + t != s {
        return Err(Error::DegreeMismatch(format!(
            "X^{t} · V_{} does not land in V_{s}",
            f.s()
        )));
    }
    let mut out = SymPoly::zero(s, f.h());
    for (nu, c) in f.iter() {
        out.add_to(nu.clone(), c.clone());
    }
    Ok(out)
}

/// The coset monomials of V_s / X^t·V_{s-t}: all ν with X-exponent < t, in
/// ascending lexicographic order.
pub fn coset_basis(s: u32, h: usize, t: u32) -> Vec<Vec<u32>> {
    let mut keys: Vec<Vec<u32>> = Vec::new();
    for a in 0..t.min(s + 1) {
        keys.extend(crate::exact::compositions_desc(s - a, h));
    }
    keys.sort();
    keys
}

/// Projection of f onto the quotient by X^t·V_{s-t}: the coefficient vector
/// over [`coset_basis`]. t = 0 projects onto the zero space (empty vector).
pub fn project_p<C: Coeff>(t: u32, f: &SymPoly<C>) -> Vec<C> {
    coset_basis(f.s(), f.h(), t)
        .into_iter()
        .map(|nu| f.coeff(&nu))
        .collect()
}

/// Coefficient tuple over the pure monomials Y^ν of degree s: the quotient
/// V_s / X·V_{s-1} in the basis order of [`y_monomials`].
#[derive(Clone, Debug, PartialEq)]
pub struct QuotientVector<C> {
    s: u32,
    h: usize,
    pub components: Vec<C>,
}

impl<C: Coeff> QuotientVector<C> {
    pub fn new(s: u32, h: usize, components: Vec<C>) -> Result<Self> {
        if components.len() != multiplicity_mu(s, h) {
            return Err(Error::ShapeMismatch(format!(
                "quotient tuple has {} parts, mu({s},{h}) = {}",
                components.len(),
                multiplicity_mu(s, h)
            )));
        }
        Ok(QuotientVector { s, h, components })
    }

    pub fn zero(s: u32, h: usize) -> Self {
        QuotientVector {
            s,
            h,
            components: vec![C::zero(); multiplicity_mu(s, h)],
        }
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn h(&self) -> usize {
        self.h
    }
}

/// Image of f in V_s / X·V_{s-1}.
pub fn project_quotient<C: Coeff>(f: &SymPoly<C>) -> QuotientVector<C> {
    let components = y_monomials(f.s(), f.h())
        .into_iter()
        .map(|nu| f.coeff(&nu))
        .collect();
    QuotientVector {
        s: f.s(),
        h: f.h(),
        components,
    }
}

/// The section of the t = 1 projection sending the class of Y^ν to Y^ν:
/// q ↦ Σ_ν q_ν Y^ν.
pub fn section_sigma<C: Coeff>(q: &QuotientVector<C>) -> SymPoly<C> {
    let mut out = SymPoly::zero(q.s, q.h);
    for (nu, c) in y_monomials(q.s, q.h).into_iter().zip(&q.components) {
        out.add_to(nu, c.clone());
    }
    out
}

impl<C: Coeff + std::fmt::Display> std::fmt::Display for SymPoly<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (nu, c) in self.iter() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            let a = self.x_exp(nu);
            if a > 0 {
                write!(f, "·X^{a}")?;
            }
            for (j, &e) in nu.iter().enumerate() {
                if e > 0 {
                    write!(f, "·Y{}^{e}", j + 1)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int, Rational};
    use proptest::prelude::*;

    fn rp(s: u32, h: usize, entries: &[(&[u32], Rational)]) -> SymPoly<Rational> {
        let mut p = SymPoly::zero(s, h);
        for (nu, c) in entries {
            p.add_to(nu.to_vec(), c.clone());
        }
        p
    }

    #[test]
    fn aff_act_identity_element() {
        let f = rp(2, 1, &[(&[0], rat_int(1)), (&[1], rat_int(2)), (&[2], rat_int(3))]);
        let g = aff_act(&rat_int(1), &[rat_int(0)], &f).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn aff_act_on_pure_x_power() {
        // X^s ↦ r^s X^s.
        let f = rp(3, 2, &[(&[0, 0], rat_int(1))]);
        let g = aff_act(&rat_int(2), &[rat_int(5), rat_int(-1)], &f).unwrap();
        assert_eq!(g, rp(3, 2, &[(&[0, 0], rat_int(8))]));
    }

    #[test]
    fn aff_act_on_y() {
        // h = 1, (r, v) = (2, 3): Y ↦ 3X + Y.
        let f = rp(1, 1, &[(&[1], rat_int(1))]);
        let g = aff_act(&rat_int(2), &[rat_int(3)], &f).unwrap();
        assert_eq!(g, rp(1, 1, &[(&[0], rat_int(3)), (&[1], rat_int(1))]));
    }

    #[test]
    fn aff_act_rejects_zero_scale() {
        let f = rp(1, 1, &[(&[1], rat_int(1))]);
        assert!(matches!(
            aff_act(&rat_int(0), &[rat_int(1)], &f),
            Err(crate::error::Error::ZeroScale)
        ));
    }

    #[test]
    fn include_examples() {
        let f = rp(1, 1, &[(&[1], rat_int(1))]);
        assert_eq!(include_i(0, 1, &f).unwrap(), f);
        // X·Y₁ inside V_2.
        let g = include_i(1, 2, &f).unwrap();
        assert_eq!(g, rp(2, 1, &[(&[1], rat_int(1))]));
        assert_eq!(g.x_exp(&[1]), 1);
        // Constant to c·X².
        let c = rp(0, 1, &[(&[0], rat(5, 3))]);
        let g = include_i(2, 2, &c).unwrap();
        assert_eq!(g, rp(2, 1, &[(&[0], rat(5, 3))]));
        assert!(include_i(1, 3, &f).is_err());
    }

    #[test]
    fn project_examples() {
        // f = aX² + bXY + cY², h = 1.
        let f = rp(
            2,
            1,
            &[(&[0], rat_int(7)), (&[1], rat_int(11)), (&[2], rat_int(13))],
        );
        assert_eq!(project_p(1, &f), vec![rat_int(13)]);
        assert_eq!(project_p(2, &f), vec![rat_int(11), rat_int(13)]);
        assert_eq!(project_p(0, &f), Vec::<Rational>::new());
    }

    #[test]
    fn section_examples() {
        // Unit vector goes to the matching monomial.
        let q = QuotientVector::new(2, 2, vec![rat_int(0), rat_int(1), rat_int(0)]).unwrap();
        let p = section_sigma(&q);
        assert_eq!(p, rp(2, 2, &[(&[1, 1], rat_int(1))]));
        // Zero and linearity on (1,1,1).
        let z = QuotientVector::<Rational>::zero(2, 2);
        assert!(section_sigma(&z).is_zero());
        let q = QuotientVector::new(2, 2, vec![rat_int(1), rat_int(1), rat_int(1)]).unwrap();
        let p = section_sigma(&q);
        assert_eq!(
            p,
            rp(
                2,
                2,
                &[
                    (&[0, 2], rat_int(1)),
                    (&[1, 1], rat_int(1)),
                    (&[2, 0], rat_int(1))
                ]
            )
        );
    }

    #[test]
    fn quotient_action_is_trivial_and_sigma_intertwines() {
        // For any (r, v), the substitution fixes the class in the quotient:
        // project ∘ aff_act ∘ section = project ∘ section = id.
        let q = QuotientVector::new(2, 2, vec![rat(1, 2), rat_int(-3), rat(7, 5)]).unwrap();
        let p = section_sigma(&q);
        let acted = aff_act(&rat(3, 2), &[rat_int(2), rat(-1, 2)], &p).unwrap();
        assert_eq!(project_quotient(&acted), q);
        // The section image has no X at all, so the pure rotation part
        // (v = 0) fixes it monomial by monomial.
        let rotated = aff_act(&rat(9, 7), &[rat_int(0), rat_int(0)], &p).unwrap();
        assert_eq!(rotated, p);
    }

    #[test]
    fn include_equivariance() {
        // aff_act(r, v, X^t f) = r^t X^t aff_act(r, v, f).
        let f = rp(2, 2, &[(&[1, 1], rat_int(1)), (&[0, 1], rat_int(4))]);
        let t = 2;
        let r = rat(2, 3);
        let v = [rat_int(1), rat_int(-2)];
        let lhs = aff_act(&r, &v, &include_i(t, 4, &f).unwrap()).unwrap();
        let rhs = include_i(t, 4, &aff_act(&r, &v, &f).unwrap())
            .unwrap()
            .scale(&(r.clone() * r));
        assert_eq!(lhs, rhs);
    }

    proptest! {
        #[test]
        fn project_section_is_identity(seed in 0u64..500) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let h = rng.gen_range(1..=5usize);
            let s = rng.gen_range(0..=5u32);
            let comps: Vec<Rational> = (0..multiplicity_mu(s, h))
                .map(|_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=9)))
                .collect();
            let q = QuotientVector::new(s, h, comps).unwrap();
            prop_assert_eq!(project_quotient(&section_sigma(&q)), q);
        }

        #[test]
        fn project_kills_inclusion(seed in 0u64..500) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let h = rng.gen_range(1..=5usize);
            let s = rng.gen_range(1..=5u32);
            let mut f = SymPoly::zero(s - 1, h);
            for nu in crate::exact::compositions_desc(rng.gen_range(0..s), h) {
                f.add_to(nu, rat(rng.gen_range(-9..=9), rng.gen_range(1..=9)));
            }
            let included = include_i(1, s, &f).unwrap();
            let projected = project_quotient(&included);
            prop_assert!(projected.components.iter().all(|c| c.is_zero()));
        }
    }
}
