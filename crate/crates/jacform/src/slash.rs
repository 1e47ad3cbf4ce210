//! Numerical evaluation and slash-action verification.
//!
//! The symbolic layer takes the covariance of its operators as input; this
//! module is where that covariance is checked rather than assumed. Forms
//! are evaluated in double precision at points with Im τ large enough that
//! the truncation tail is far below the tolerance, and compared against
//! their images under the slash action
//!
//! ```text
//!   (φ|_η g)(τ, z) = η(g, (τ, z))^{-1} φ(g⟨τ, z⟩),
//!   g⟨τ, z⟩ = ((aτ+b)/(cτ+d), (z + λτ + μ)/(cτ+d)),
//! ```
//!
//! with the factor of automorphy for weight (k, s) and index m
//!
//! ```text
//!   η(g,(τ,z)) = (det^k ⊗ sym^s)[[cτ+d, cz' − λ̃'], [0, 1]] ⊗ ι_m(g,(τ,z)),
//!   ι_m = e( c(z+λτ+μ)'m(z+λτ+μ)/(cτ+d) − λ'm(2z+λτ+μ) ) · e(−m κ),
//! ```
//!
//! where (λ̃, μ̃) = (λ, μ)·M⁻¹ and e(w) = exp(2πi·tr(w)).

use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::exact::{HalfIntSymMatrix, Rational};
use crate::nearly::{FourierPoly, NearlyHoloElt};
use crate::sympow::{aff_act, SymPoly};
use crate::theta::JacobiFormData;

pub const TWO_PI: f64 = std::f64::consts::TAU;

fn to_f64(x: &Rational) -> f64 {
    x.to_f64().expect("rational fits in f64")
}

/// e(w) = exp(2πi w).
fn e_of(w: Complex64) -> Complex64 {
    (Complex64::new(0.0, TWO_PI) * w).exp()
}

/// Value of a form at a point, together with a crude bound for the dropped
/// tail: C·exp(−2π·Imτ·(B+1)) with C the coefficient mass at the top
/// retained level B.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub value: SymPoly<Complex64>,
    pub tail_bound: f64,
}

impl Evaluation {
    /// Largest coefficient magnitude of the value.
    pub fn magnitude(&self) -> f64 {
        self.value
            .iter()
            .map(|(_, c)| c.norm())
            .fold(0.0, f64::max)
    }
}

fn coeff_mass(value: &SymPoly<Rational>) -> f64 {
    value.iter().map(|(_, c)| to_f64(c).abs()).sum()
}

/// Evaluate Σ c(n,r) e(nτ + r'z) in double precision; requires Im τ > 0.
pub fn evaluate_fourier(
    fp: &FourierPoly,
    tau: Complex64,
    z: &[Complex64],
) -> Result<Evaluation> {
    if tau.im <= 0.0 {
        return Err(Error::ShapeMismatch("evaluation point needs Im τ > 0".into()));
    }
    if z.len() != fp.h() {
        return Err(Error::ShapeMismatch(format!(
            "point has {} elliptic coordinates, form has h = {}",
            z.len(),
            fp.h()
        )));
    }
    let mut value = SymPoly::<Complex64>::zero(fp.s(), fp.h());
    let mut top_n: Option<Rational> = None;
    let mut top_mass = 0.0f64;
    for (mode, coeff) in fp.modes() {
        let mut phase = Complex64::new(to_f64(&mode.n), 0.0) * tau;
        for (j, rj) in mode.r.iter().enumerate() {
            phase += Complex64::new(*rj as f64, 0.0) * z[j];
        }
        let factor = e_of(phase);
        for (nu_v, c) in coeff.iter() {
            value.add_to(nu_v.clone(), Complex64::new(to_f64(c), 0.0) * factor);
        }
        match &top_n {
            Some(n) if *n >= mode.n => {
                if *n == mode.n {
                    top_mass += coeff_mass(coeff);
                }
            }
            _ => {
                top_n = Some(mode.n.clone());
                top_mass = coeff_mass(coeff);
            }
        }
    }
    let top = top_n.map_or(0.0, |n| to_f64(&n));
    let tail_bound = top_mass * (-TWO_PI * tau.im * (top + 1.0)).exp();
    Ok(Evaluation { value, tail_bound })
}

/// Evaluate a nearly holomorphic element: the α^ν β^r prefactors are read
/// off the point via α_j = Im z_j / Im τ and β = 1/(8π Im τ).
pub fn evaluate_nearly(
    f: &NearlyHoloElt,
    tau: Complex64,
    z: &[Complex64],
) -> Result<Evaluation> {
    if tau.im <= 0.0 {
        return Err(Error::ShapeMismatch("evaluation point needs Im τ > 0".into()));
    }
    let alpha: Vec<f64> = z.iter().map(|zj| zj.im / tau.im).collect();
    let beta = 1.0 / (8.0 * std::f64::consts::PI * tau.im);
    let mut value = SymPoly::<Complex64>::zero(f.s(), f.h());
    let mut tail = 0.0f64;
    for (pair, fp) in f.terms() {
        let mut pref = 1.0f64;
        for (j, &e) in pair.nu.iter().enumerate() {
            pref *= alpha[j].powi(e as i32);
        }
        pref *= beta.powi(pair.r as i32);
        let ev = evaluate_fourier(fp, tau, z)?;
        for (nu_v, c) in ev.value.iter() {
            value.add_to(nu_v.clone(), *c * pref);
        }
        tail += ev.tail_bound * pref.abs();
    }
    Ok(Evaluation { value, tail_bound: tail })
}

/// An element of the integral Jacobi group: a modular matrix together with
/// the Heisenberg data (λ, μ, κ), constrained by κ − λ̃μ̃' symmetric for
/// (λ̃, μ̃) = (λ, μ)·M⁻¹.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    pub lambda: Vec<i64>,
    pub mu: Vec<i64>,
    pub kappa: Vec<Vec<i64>>,
}

impl GroupElement {
    pub fn new(
        (a, b, c, d): (i64, i64, i64, i64),
        lambda: Vec<i64>,
        mu: Vec<i64>,
        kappa: Vec<Vec<i64>>,
    ) -> Result<Self> {
        if a * d - b * c != 1 {
            return Err(Error::ShapeMismatch("modular part must have determinant 1".into()));
        }
        let h = lambda.len();
        if mu.len() != h || kappa.len() != h || kappa.iter().any(|row| row.len() != h) {
            return Err(Error::ShapeMismatch("Heisenberg data of mismatched size".into()));
        }
        let g = GroupElement { a, b, c, d, lambda, mu, kappa };
        let lt = g.lambda_tilde();
        let mt = g.mu_tilde();
        for i in 0..h {
            for j in 0..h {
                if g.kappa[i][j] - lt[i] * mt[j] != g.kappa[j][i] - lt[j] * mt[i] {
                    return Err(Error::ShapeMismatch(
                        "κ − λ̃μ̃' must be symmetric".into(),
                    ));
                }
            }
        }
        Ok(g)
    }

    pub fn h(&self) -> usize {
        self.lambda.len()
    }

    /// λ̃ = dλ − cμ.
    pub fn lambda_tilde(&self) -> Vec<i64> {
        self.lambda
            .iter()
            .zip(&self.mu)
            .map(|(l, m)| self.d * l - self.c * m)
            .collect()
    }

    /// μ̃ = −bλ + aμ.
    pub fn mu_tilde(&self) -> Vec<i64> {
        self.lambda
            .iter()
            .zip(&self.mu)
            .map(|(l, m)| -self.b * l + self.a * m)
            .collect()
    }

    /// τ ↦ τ + 1.
    pub fn translation_t(h: usize) -> Self {
        Self::new((1, 1, 0, 1), vec![0; h], vec![0; h], vec![vec![0; h]; h])
            .expect("T is a group element")
    }

    /// τ ↦ −1/τ.
    pub fn inversion_s(h: usize) -> Self {
        Self::new((0, -1, 1, 0), vec![0; h], vec![0; h], vec![vec![0; h]; h])
            .expect("S is a group element")
    }

    /// z ↦ z + λτ + μ with κ = λμ' making the constraint hold.
    pub fn lattice_shift(lambda: Vec<i64>, mu: Vec<i64>) -> Result<Self> {
        let h = lambda.len();
        let mut kappa = vec![vec![0i64; h]; h];
        for i in 0..h {
            for j in 0..h {
                kappa[i][j] = lambda[i] * mu[j];
            }
        }
        Self::new((1, 0, 0, 1), lambda, mu, kappa)
    }

    /// The pure κ-shift (λ = μ = 0, κ symmetric).
    pub fn kappa_shift(kappa: Vec<Vec<i64>>) -> Result<Self> {
        let h = kappa.len();
        Self::new((1, 0, 0, 1), vec![0; h], vec![0; h], kappa)
    }

    /// The transformed point g⟨τ, z⟩.
    pub fn act(&self, tau: Complex64, z: &[Complex64]) -> (Complex64, Vec<Complex64>) {
        let den = Complex64::new(self.c as f64, 0.0) * tau + Complex64::new(self.d as f64, 0.0);
        let tau2 = (Complex64::new(self.a as f64, 0.0) * tau
            + Complex64::new(self.b as f64, 0.0))
            / den;
        let z2 = z
            .iter()
            .enumerate()
            .map(|(j, zj)| {
                (zj + Complex64::new(self.lambda[j] as f64, 0.0) * tau
                    + Complex64::new(self.mu[j] as f64, 0.0))
                    / den
            })
            .collect();
        (tau2, z2)
    }
}

/// The scalar factor ι_m(g, (τ, z)).
pub fn iota_factor(
    g: &GroupElement,
    m: &HalfIntSymMatrix,
    tau: Complex64,
    z: &[Complex64],
) -> Complex64 {
    let h = g.h();
    let den = Complex64::new(g.c as f64, 0.0) * tau + Complex64::new(g.d as f64, 0.0);
    let w: Vec<Complex64> = z
        .iter()
        .enumerate()
        .map(|(j, zj)| {
            zj + Complex64::new(g.lambda[j] as f64, 0.0) * tau
                + Complex64::new(g.mu[j] as f64, 0.0)
        })
        .collect();
    let mf = |i: usize, j: usize| Complex64::new(to_f64(m.entry(i, j)), 0.0);
    // c·w'mw/(cτ+d)
    let mut q1 = Complex64::new(0.0, 0.0);
    for i in 0..h {
        for j in 0..h {
            q1 += w[i] * mf(i, j) * w[j];
        }
    }
    q1 *= Complex64::new(g.c as f64, 0.0) / den;
    // λ'm(2z + λτ + μ)
    let mut q2 = Complex64::new(0.0, 0.0);
    for i in 0..h {
        for j in 0..h {
            let arg = z[j] * 2.0
                + Complex64::new(g.lambda[j] as f64, 0.0) * tau
                + Complex64::new(g.mu[j] as f64, 0.0);
            q2 += Complex64::new(g.lambda[i] as f64, 0.0) * mf(i, j) * arg;
        }
    }
    // tr(mκ)
    let mut tr = Complex64::new(0.0, 0.0);
    for i in 0..h {
        for j in 0..h {
            tr += mf(i, j) * Complex64::new(g.kappa[j][i] as f64, 0.0);
        }
    }
    e_of(q1 - q2) * e_of(-tr)
}

/// Equivalent expression for ι_m from the twisted Heisenberg data:
/// e( (cz−λ̃)'m(λτ+z+μ)/(cτ+d) − λ'mz )·e(−mκ). Used as a cross-check.
pub fn iota_factor_alt(
    g: &GroupElement,
    m: &HalfIntSymMatrix,
    tau: Complex64,
    z: &[Complex64],
) -> Complex64 {
    let h = g.h();
    let den = Complex64::new(g.c as f64, 0.0) * tau + Complex64::new(g.d as f64, 0.0);
    let lt = g.lambda_tilde();
    let mf = |i: usize, j: usize| Complex64::new(to_f64(m.entry(i, j)), 0.0);
    let left: Vec<Complex64> = z
        .iter()
        .enumerate()
        .map(|(j, zj)| zj * g.c as f64 - Complex64::new(lt[j] as f64, 0.0))
        .collect();
    let right: Vec<Complex64> = z
        .iter()
        .enumerate()
        .map(|(j, zj)| {
            Complex64::new(g.lambda[j] as f64, 0.0) * tau
                + zj
                + Complex64::new(g.mu[j] as f64, 0.0)
        })
        .collect();
    let mut q1 = Complex64::new(0.0, 0.0);
    for i in 0..h {
        for j in 0..h {
            q1 += left[i] * mf(i, j) * right[j];
        }
    }
    q1 /= den;
    let mut q2 = Complex64::new(0.0, 0.0);
    for i in 0..h {
        for j in 0..h {
            q2 += Complex64::new(g.lambda[i] as f64, 0.0) * mf(i, j) * z[j];
        }
    }
    let mut tr = Complex64::new(0.0, 0.0);
    for i in 0..h {
        for j in 0..h {
            tr += mf(i, j) * Complex64::new(g.kappa[j][i] as f64, 0.0);
        }
    }
    e_of(q1 - q2) * e_of(-tr)
}

/// η(g, (τ,z))^{-1} applied to a V_s value: undo ι and the determinant
/// power, and substitute through the inverse affine element.
fn eta_inverse_apply(
    value: &SymPoly<Complex64>,
    g: &GroupElement,
    m: &HalfIntSymMatrix,
    k: i64,
    tau: Complex64,
    z: &[Complex64],
) -> Result<SymPoly<Complex64>> {
    let den = Complex64::new(g.c as f64, 0.0) * tau + Complex64::new(g.d as f64, 0.0);
    let iota = iota_factor(g, m, tau, z);
    let scale = den.powi(-(k as i32)) / iota;
    let lt = g.lambda_tilde();
    // Inverse affine element: scale 1/(cτ+d), translation −(cz − λ̃)/(cτ+d).
    let r_inv = Complex64::new(1.0, 0.0) / den;
    let v_inv: Vec<Complex64> = z
        .iter()
        .enumerate()
        .map(|(j, zj)| -(zj * g.c as f64 - Complex64::new(lt[j] as f64, 0.0)) / den)
        .collect();
    let substituted = aff_act(&r_inv, &v_inv, value)?;
    Ok(substituted.map_coeffs(|c| *c * scale))
}

/// Evaluate φ|_η g at a point: transform the point, evaluate, and undo the
/// factor of automorphy.
pub fn slash_apply_fourier(
    fp: &FourierPoly,
    k: i64,
    m: &HalfIntSymMatrix,
    g: &GroupElement,
    tau: Complex64,
    z: &[Complex64],
) -> Result<Evaluation> {
    let (tau2, z2) = g.act(tau, z);
    let ev = evaluate_fourier(fp, tau2, &z2)?;
    Ok(Evaluation {
        value: eta_inverse_apply(&ev.value, g, m, k, tau, z)?,
        tail_bound: ev.tail_bound,
    })
}

/// Same for nearly holomorphic data: α and β are read at the transformed
/// point, as the slash action demands.
pub fn slash_apply_nearly(
    f: &NearlyHoloElt,
    g: &GroupElement,
    tau: Complex64,
    z: &[Complex64],
) -> Result<Evaluation> {
    let (tau2, z2) = g.act(tau, z);
    let ev = evaluate_nearly(f, tau2, &z2)?;
    Ok(Evaluation {
        value: eta_inverse_apply(&ev.value, g, f.index(), f.k(), tau, z)?,
        tail_bound: ev.tail_bound,
    })
}

/// Per-point residuals of φ|g against φ.
#[derive(Clone, Debug)]
pub struct SlashReport {
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub tol: f64,
    pub max_tail: f64,
}

impl SlashReport {
    pub fn pass(&self) -> bool {
        self.max_residual < self.tol
    }
}

fn diff_magnitude(a: &SymPoly<Complex64>, b: &SymPoly<Complex64>) -> f64 {
    let mut keys: std::collections::BTreeSet<Vec<u32>> = Default::default();
    for (nu, _) in a.iter() {
        keys.insert(nu.clone());
    }
    for (nu, _) in b.iter() {
        keys.insert(nu.clone());
    }
    keys.into_iter()
        .map(|nu| (a.coeff(&nu) - b.coeff(&nu)).norm())
        .fold(0.0, f64::max)
}

fn relative_residual(lhs: &Evaluation, rhs: &Evaluation) -> f64 {
    let denom = rhs.magnitude().max(1e-12);
    diff_magnitude(&lhs.value, &rhs.value) / denom
}

/// Check invariance of a concrete Jacobi form under one group element. The
/// points must sit high enough that the tail bound is below tol/10.
pub fn slash_check(
    form: &JacobiFormData,
    g: &GroupElement,
    points: &[(Complex64, Vec<Complex64>)],
    tol: f64,
) -> Result<SlashReport> {
    let mut residuals = Vec::with_capacity(points.len());
    let mut max_tail = 0.0f64;
    for (tau, z) in points {
        let lhs = slash_apply_fourier(&form.coeffs, form.k, &form.index, g, *tau, z)?;
        let rhs = evaluate_fourier(&form.coeffs, *tau, z)?;
        max_tail = max_tail.max(lhs.tail_bound).max(rhs.tail_bound);
        residuals.push(relative_residual(&lhs, &rhs));
    }
    if max_tail > tol / 10.0 {
        return Err(Error::ShapeMismatch(format!(
            "tail bound {max_tail:.3e} exceeds tol/10; raise Im τ or the truncation"
        )));
    }
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    Ok(SlashReport {
        residuals,
        max_residual,
        tol,
        max_tail,
    })
}

/// Invariance check for a (possibly vector-valued) nearly holomorphic
/// element with Jacobi-form labels.
pub fn slash_check_nearly(
    f: &NearlyHoloElt,
    g: &GroupElement,
    points: &[(Complex64, Vec<Complex64>)],
    tol: f64,
) -> Result<SlashReport> {
    let mut residuals = Vec::with_capacity(points.len());
    let mut max_tail = 0.0f64;
    for (tau, z) in points {
        let lhs = slash_apply_nearly(f, g, *tau, z)?;
        let rhs = evaluate_nearly(f, *tau, z)?;
        max_tail = max_tail.max(lhs.tail_bound).max(rhs.tail_bound);
        residuals.push(relative_residual(&lhs, &rhs));
    }
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    Ok(SlashReport {
        residuals,
        max_residual,
        tol,
        max_tail,
    })
}

/// Covariance of an operator against the slash action on a concrete form:
/// compare (Op φ)|_{k'} g with Op(φ|_k g) = Op φ (the form is invariant).
pub fn covariance_check(
    form: &JacobiFormData,
    op: impl Fn(&NearlyHoloElt) -> Result<NearlyHoloElt>,
    g: &GroupElement,
    points: &[(Complex64, Vec<Complex64>)],
    tol: f64,
) -> Result<SlashReport> {
    let elt = NearlyHoloElt::from_fourier(form.k, form.index.clone(), form.coeffs.clone())?;
    let moved = op(&elt)?;
    slash_check_nearly(&moved, g, points, tol)
}

/// Default test points: τ ∈ {2i, 1 + 2i} with small nonzero z.
pub fn default_points(h: usize) -> Vec<(Complex64, Vec<Complex64>)> {
    let z1: Vec<Complex64> = (0..h)
        .map(|j| Complex64::new(0.1 + 0.03 * j as f64, 0.05))
        .collect();
    let z2: Vec<Complex64> = (0..h)
        .map(|j| Complex64::new(-0.07, 0.04 + 0.02 * j as f64))
        .collect();
    vec![
        (Complex64::new(0.0, 2.0), z1),
        (Complex64::new(1.0, 2.0), z2),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat_int;
    use crate::nearly::FourierMode;
    use crate::theta::{theta_series, LatticeSpec};

    #[test]
    fn evaluate_constant_and_single_mode() {
        let one = FourierPoly::constant(1, 1, rat_int(1));
        let ev = evaluate_fourier(&one, Complex64::new(0.3, 1.7), &[Complex64::new(0.1, 0.2)])
            .unwrap();
        assert!((ev.value.coeff(&[0]) - Complex64::new(1.0, 0.0)).norm() < 1e-15);

        // Mode (n, r) = (1, 0) at τ = i evaluates to exp(−2π).
        let fp = FourierPoly::scalar_mode(
            1,
            1,
            FourierMode::new(rat_int(1), vec![0]),
            rat_int(1),
        )
        .unwrap();
        let ev = evaluate_fourier(&fp, Complex64::new(0.0, 1.0), &[Complex64::new(0.0, 0.0)])
            .unwrap();
        assert!((ev.value.coeff(&[0]).re - (-TWO_PI).exp()).abs() < 1e-15);
        assert!(ev.value.coeff(&[0]).im.abs() < 1e-18);
    }

    #[test]
    fn theta_evaluation_matches_direct_lattice_sum() {
        let lat = LatticeSpec::a2(&[0]).unwrap();
        let theta = theta_series(&lat, 8).unwrap();
        let tau = Complex64::new(0.0, 2.0);
        let z = [Complex64::new(0.1, 0.05)];
        let ev = evaluate_fourier(&theta.coeffs, tau, &z).unwrap();
        // Independent oracle: direct sum over a box.
        let mut direct = Complex64::new(0.0, 0.0);
        for x0 in -8i64..=8 {
            for x1 in -8i64..=8 {
                let q = 2 * x0 * x0 + 2 * x1 * x1 - 2 * x0 * x1;
                if q / 2 > 8 {
                    continue;
                }
                let r = 2 * x0 - x1;
                let phase = Complex64::new(q as f64 / 2.0, 0.0) * tau
                    + Complex64::new(r as f64, 0.0) * z[0];
                direct += (Complex64::new(0.0, TWO_PI) * phase).exp();
            }
        }
        assert!((ev.value.coeff(&[0]) - direct).norm() < 1e-12);
    }

    #[test]
    fn group_element_constraint() {
        // Valid: pure modular, translations, kappa shifts.
        assert!(GroupElement::new((1, 1, 0, 1), vec![0], vec![0], vec![vec![0]]).is_ok());
        assert!(GroupElement::lattice_shift(vec![1, 0], vec![0, 2]).is_ok());
        assert!(GroupElement::kappa_shift(vec![vec![1, 0], vec![0, 0]]).is_ok());
        // Invalid determinant.
        assert!(GroupElement::new((1, 0, 0, -1), vec![0], vec![0], vec![vec![0]]).is_err());
        // Asymmetric κ − λ̃μ̃'.
        assert!(GroupElement::new(
            (1, 0, 0, 1),
            vec![0, 0],
            vec![0, 0],
            vec![vec![0, 1], vec![0, 0]],
        )
        .is_err());
    }

    #[test]
    fn iota_forms_agree() {
        let m = HalfIntSymMatrix::from_two_m(&[vec![2, 1], vec![1, 4]]).unwrap();
        let g = GroupElement::new(
            (2, 1, 1, 1),
            vec![1, -1],
            vec![0, 2],
            // κ = λ̃μ̃' + symmetric: compute λ̃ = dλ − cμ = (1,−3), μ̃ = −bλ+aμ = (−1,5).
            vec![vec![-1, 5], vec![3, -15]],
        )
        .unwrap();
        let tau = Complex64::new(0.3, 1.4);
        let z = [Complex64::new(0.1, 0.2), Complex64::new(-0.2, 0.05)];
        let i1 = iota_factor(&g, &m, tau, &z);
        let i2 = iota_factor_alt(&g, &m, tau, &z);
        assert!((i1 - i2).norm() < 1e-9 * i1.norm());
    }

    #[test]
    fn translation_invariance_is_exact() {
        let lat = LatticeSpec::a2(&[0]).unwrap();
        let theta = theta_series(&lat, 8).unwrap();
        let g = GroupElement::translation_t(1);
        let report = slash_check(&theta, &g, &default_points(1), 1e-12).unwrap();
        assert!(report.pass(), "residuals {:?}", report.residuals);
    }

    #[test]
    fn a2_theta_slash_invariance() {
        // A2 is not unimodular, but lattice shifts and κ-shifts still fix
        // its theta series.
        let lat = LatticeSpec::a2(&[0]).unwrap();
        let theta = theta_series(&lat, 10).unwrap();
        for g in [
            GroupElement::lattice_shift(vec![1], vec![0]).unwrap(),
            GroupElement::lattice_shift(vec![0], vec![1]).unwrap(),
            GroupElement::kappa_shift(vec![vec![1]]).unwrap(),
        ] {
            let report = slash_check(&theta, &g, &default_points(1), 1e-6).unwrap();
            assert!(report.pass(), "residuals {:?}", report.residuals);
        }
    }

    #[test]
    fn numeric_beta_alpha_derivative_rules() {
        // Finite-difference validation of the non-printed rules
        // ∂_τ β = β² and ∂_τ̄ β = −β², plus ∂_τ α = αβ, at sample points.
        let samples = [
            (Complex64::new(0.2, 1.3), Complex64::new(0.1, 0.4)),
            (Complex64::new(-0.5, 2.1), Complex64::new(-0.3, 0.2)),
        ];
        let hstep = 1e-6;
        for (tau, z) in samples {
            let beta = |t: Complex64| 1.0 / (8.0 * std::f64::consts::PI * t.im);
            let alpha = |t: Complex64, zz: Complex64| zz.im / t.im;
            // ∂/∂τ = ½(∂_x − i ∂_y); renormalize by 1/(4πi).
            let dx = (beta(tau + hstep) - beta(tau - hstep)) / (2.0 * hstep);
            let dy = (beta(tau + Complex64::new(0.0, hstep))
                - beta(tau - Complex64::new(0.0, hstep)))
                / (2.0 * hstep);
            let dtau = (dx - Complex64::new(0.0, 1.0) * dy) / 2.0;
            let renorm = dtau / Complex64::new(0.0, 2.0 * TWO_PI);
            let expect = beta(tau) * beta(tau);
            assert!((renorm - expect).norm() < 1e-8, "∂τ β failed at {tau}");
            let dtaubar = (dx + Complex64::new(0.0, 1.0) * dy) / 2.0;
            let renorm_bar = dtaubar / Complex64::new(0.0, 2.0 * TWO_PI);
            assert!((renorm_bar + expect).norm() < 1e-8, "∂τ̄ β failed at {tau}");
            // ∂_τ α = αβ.
            let ax = (alpha(tau + hstep, z) - alpha(tau - hstep, z)) / (2.0 * hstep);
            let ay = (alpha(tau + Complex64::new(0.0, hstep), z)
                - alpha(tau - Complex64::new(0.0, hstep), z))
                / (2.0 * hstep);
            let datau = (ax - Complex64::new(0.0, 1.0) * ay) / 2.0;
            let renorm_a = datau / Complex64::new(0.0, 2.0 * TWO_PI);
            let expect_a = alpha(tau, z) * beta(tau);
            assert!((renorm_a - expect_a).norm() < 1e-8, "∂τ α failed at {tau}");
            // ∂_{z} α = −β via ∂/∂z = ½(∂_u − i ∂_v).
            let au = (alpha(tau, z + hstep) - alpha(tau, z - hstep)) / (2.0 * hstep);
            let av = (alpha(tau, z + Complex64::new(0.0, hstep))
                - alpha(tau, z - Complex64::new(0.0, hstep)))
                / (2.0 * hstep);
            let daz = (au - Complex64::new(0.0, 1.0) * av) / 2.0;
            let renorm_z = daz / Complex64::new(0.0, 2.0 * TWO_PI);
            assert!((renorm_z + beta(tau)).norm() < 1e-8, "∂z α failed at {tau}");
        }
    }

    #[test]
    fn tail_bound_guard_triggers() {
        let lat = LatticeSpec::a2(&[0]).unwrap();
        let theta = theta_series(&lat, 2).unwrap();
        // At very low Im τ the truncated series cannot certify 1e-12.
        let low = vec![(Complex64::new(0.0, 0.05), vec![Complex64::new(0.0, 0.0)])];
        let g = GroupElement::translation_t(1);
        assert!(slash_check(&theta, &g, &low, 1e-12).is_err());
    }

    #[test]
    fn heat_covariance_on_a2() {
        let lat = LatticeSpec::a2(&[0]).unwrap();
        let theta = theta_series(&lat, 10).unwrap();
        let pts = default_points(1);
        for g in [
            GroupElement::translation_t(1),
            GroupElement::lattice_shift(vec![1], vec![0]).unwrap(),
        ] {
            let report =
                covariance_check(&theta, crate::maass::heat, &g, &pts, 1e-5).unwrap();
            assert!(report.pass(), "residuals {:?}", report.residuals);
        }
    }
}
