//! Maass-Shimura raising and lowering operators on nearly holomorphic
//! elements, their ladder compositions, and commutator verification.
//!
//! With the renormalized derivatives ∂_τ = (1/4πi)∂/∂τ, ∂_{z,j} =
//! (1/4πi)∂/∂z_j (and the conjugate pairs), the first-order covariant
//! operators for Jacobi index m are
//!
//! ```text
//!   R_k    = ∂_τ + α'∂_z + ½ α'mα − kβ          (weight k → k+2)
//!   R^J_j  = ∂_{z,j} + (mα)_j                   (k → k+1)
//!   L      = ŷ(ŷ∂_τ̄ + v̂'∂_z̄) = β⁻²(∂_τ̄ + α'∂_z̄)   (k → k−2)
//!   L^J_j  = ŷ ∂_{z̄,j} = β⁻¹ ∂_{z̄,j}             (k → k−1)
//! ```
//!
//! and, for invertible m, the separated variants
//!
//! ```text
//!   Δ̃_k    = R_k − ½ R^J' m⁻¹ R^J = ∂_τ − ½ ∂_z' m⁻¹ ∂_z + (h/2 − k)β
//!   R̃^J_j  = (m⁻¹ R^J)_j = Σ_i (m⁻¹)_{j,i} ∂_{z,i} + α_j.
//! ```
//!
//! Everything acts mode by mode: on α^ν β^r e(nτ + r'z) the derivative
//! rules are ∂_τ α_j = α_jβ, ∂_{z,j} α_j = −β, ∂_τ̄ α_j = −α_jβ,
//! ∂_{z̄,j} α_j = β, together with ∂_τ β = β², ∂_τ̄ β = −β² (β is
//! independent of z), and the mode eigenvalues ∂_τ e = (n/2)e,
//! ∂_{z,j} e = (r_j/2)e. The β rules are not an extra axiom: `lower_raw`
//! and `lower_j_raw` expand L and L^J_j from the definitions above and the
//! tests pin them against the closed monomial rules
//!
//! ```text
//!   L(α^ν β^r f)     = −r α^ν β^{r−1} f,
//!   L^J_j(α^ν β^r f) = ν_j α^{ν−e_j} β^r f        (f holomorphic).
//! ```
//!
//! Operators are realized extensionally, as functions on elements, rather
//! than by normal-ordering rewrite; the commutator table is verified on a
//! finite generating family of monomials over unit modes, which suffices
//! because every generator is mode-local with coefficients polynomial in
//! (n, r, α, β). Weight labels ride on the elements and are rewritten at
//! application time, so the convention [L, R_k] = L∘R_k − R_{k−2}∘L is
//! automatic.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{
    pairs_up_to, rat, rat_int, HalfIntSymMatrix, MultiIndexPair, Rational,
};
use crate::nearly::{FourierMode, FourierPoly, NearlyHoloElt};

/// The four renormalized first derivatives.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Partial {
    Tau,
    TauBar,
    Z(usize),
    ZBar(usize),
}

/// Apply a renormalized partial derivative. The weight label is left
/// untouched: the bare derivatives are not covariant.
pub fn apply_partial(which: Partial, f: &NearlyHoloElt) -> NearlyHoloElt {
    let h = f.h();
    let mut out = NearlyHoloElt::zero(f.k(), f.s(), f.index().clone(), f.level());
    for (pair, fp) in f.terms() {
        let nu_sum: u32 = pair.nu.iter().sum();
        match which {
            Partial::Tau => {
                // (|ν| + r) α^ν β^{r+1} + α^ν β^r (n/2)·
                let up = MultiIndexPair::new(pair.nu.clone(), pair.r + 1);
                out.insert_term(up, fp.scale(&rat_int((nu_sum + pair.r) as i64)))
                    .expect("shapes preserved");
                out.insert_term(pair.clone(), fp.dtau())
                    .expect("shapes preserved");
            }
            Partial::TauBar => {
                let up = MultiIndexPair::new(pair.nu.clone(), pair.r + 1);
                out.insert_term(up, fp.scale(&rat_int(-((nu_sum + pair.r) as i64))))
                    .expect("shapes preserved");
            }
            Partial::Z(j) => {
                if pair.nu[j] > 0 {
                    let mut nu = pair.nu.clone();
                    nu[j] -= 1;
                    let moved = MultiIndexPair::new(nu, pair.r + 1);
                    out.insert_term(moved, fp.scale(&rat_int(-(pair.nu[j] as i64))))
                        .expect("shapes preserved");
                }
                out.insert_term(pair.clone(), fp.dz(j))
                    .expect("shapes preserved");
            }
            Partial::ZBar(j) => {
                if pair.nu[j] > 0 {
                    let mut nu = pair.nu.clone();
                    nu[j] -= 1;
                    let moved = MultiIndexPair::new(nu, pair.r + 1);
                    out.insert_term(moved, fp.scale(&rat_int(pair.nu[j] as i64)))
                        .expect("shapes preserved");
                }
            }
        }
        debug_assert!(h == pair.h());
    }
    out
}

fn require_scalar(f: &NearlyHoloElt, what: &str) -> Result<()> {
    if f.s() != 0 {
        return Err(Error::ShapeMismatch(format!(
            "{what} acts on scalar-valued elements; found s = {}",
            f.s()
        )));
    }
    Ok(())
}

fn expect_weight(k: i64, f: &NearlyHoloElt) -> Result<()> {
    if f.k() != k {
        return Err(Error::WeightMismatch {
            expected: k,
            found: f.k(),
        });
    }
    Ok(())
}

/// R_k with the weight label asserted explicitly.
pub fn raise_at(k: i64, f: &NearlyHoloElt) -> Result<NearlyHoloElt> {
    expect_weight(k, f)?;
    raise(f)
}

/// Δ̃_k with the weight label asserted explicitly.
pub fn heat_at(k: i64, f: &NearlyHoloElt) -> Result<NearlyHoloElt> {
    expect_weight(k, f)?;
    heat(f)
}

/// R_k = ∂_τ + α'∂_z + ½α'mα − kβ, with k read off the element.
pub fn raise(f: &NearlyHoloElt) -> Result<NearlyHoloElt> {
    require_scalar(f, "R_k")?;
    let k = f.k();
    let m = f.index().clone();
    let h = f.h();
    let mut out = apply_partial(Partial::Tau, f);
    for j in 0..h {
        out = out.add(&apply_partial(Partial::Z(j), f).mul_alpha(j))?;
    }
    for i in 0..h {
        for j in 0..h {
            let c = m.entry(i, j) / rat_int(2);
            if c.is_zero() {
                continue;
            }
            out = out.add(&f.scale(&c).mul_alpha(i).mul_alpha(j))?;
        }
    }
    out = out.add(&f.scale(&rat_int(-k)).mul_beta())?;
    Ok(out.with_weight(k + 2))
}

/// R^J_j = ∂_{z,j} + (mα)_j.
pub fn raise_j(j: usize, f: &NearlyHoloElt) -> Result<NearlyHoloElt> {
    require_scalar(f, "R^J")?;
    let k = f.k();
    let m = f.index().clone();
    let mut out = apply_partial(Partial::Z(j), f);
    for i in 0..f.h() {
        let c = m.entry(j, i).clone();
        if c.is_zero() {
            continue;
        }
        out = out.add(&f.scale(&c).mul_alpha(i))?;
    }
    Ok(out.with_weight(k + 1))
}

/// R̃^J_j = Σ_i (m⁻¹)_{j,i} ∂_{z,i} + α_j; requires invertible m.
pub fn raise_j_tilde(j: usize, f: &NearlyHoloElt) -> Result<NearlyHoloElt> {
    require_scalar(f, "R̃^J")?;
    let k = f.k();
    let minv = f.index().invert_index()?;
    let mut out = f.mul_alpha(j);
    for i in 0..f.h() {
        let c = minv.get(j, i).clone();
        if c.is_zero() {
            continue;
        }
        out = out.add(&apply_partial(Partial::Z(i), f).scale(&c))?;
    }
    Ok(out.with_weight(k + 1))
}

/// Δ̃_k = ∂_τ − ½ ∂_z' m⁻¹ ∂_z + (h/2 − k)β; requires invertible m.
pub fn heat(f: &NearlyHoloElt) -> Result<NearlyHoloElt> {
    require_scalar(f, "Δ̃_k")?;
    let k = f.k();
    let h = f.h();
    let minv = f.index().invert_index()?;
    let mut out = apply_partial(Partial::Tau, f);
    for i in 0..h {
        for j in 0..h {
            let c = -(minv.get(i, j) / rat_int(2));
            if c.is_zero() {
                continue;
            }
            let dzj = apply_partial(Partial::Z(j), f);
            out = out.add(&apply_partial(Partial::Z(i), &dzj).scale(&c))?;
        }
    }
    let c = rat(h as i64, 2) - rat_int(k);
    out = out.add(&f.scale(&c).mul_beta())?;
    Ok(out.with_weight(k + 2))
}

/// L on monomials: α^ν β^r ↦ −r α^ν β^{r−1}, extended over modes.
pub fn lower(f: &NearlyHoloElt) -> Result<NearlyHoloElt> {
    require_scalar(f, "L")?;
    let k = f.k();
    let mut out = NearlyHoloElt::zero(k, f.s(), f.index().clone(), f.level());
    for (pair, fp) in f.terms() {
        if pair.r == 0 {
            continue;
        }
        let down = MultiIndexPair::new(pair.nu.clone(), pair.r - 1);
        out.insert_term(down, fp.scale(&rat_int(-(pair.r as i64))))?;
    }
    Ok(out.with_weight(k - 2))
}

/// L^J_j on monomials: α^ν β^r ↦ ν_j α^{ν−e_j} β^r.
pub fn lower_j(j: usize, f: &NearlyHoloElt) -> Result<NearlyHoloElt> {
    require_scalar(f, "L^J")?;
    let k = f.k();
    let mut out = NearlyHoloElt::zero(k, f.s(), f.index().clone(), f.level());
    for (pair, fp) in f.terms() {
        if pair.nu[j] == 0 {
            continue;
        }
        let mut nu = pair.nu.clone();
        nu[j] -= 1;
        let down = MultiIndexPair::new(nu, pair.r);
        out.insert_term(down, fp.scale(&rat_int(pair.nu[j] as i64)))?;
    }
    Ok(out.with_weight(k - 1))
}

/// Divide by β^by; fails if some term has a smaller β exponent.
fn shift_beta_down(f: &NearlyHoloElt, by: u32) -> Result<NearlyHoloElt> {
    let mut out = NearlyHoloElt::zero(f.k(), f.s(), f.index().clone(), f.level());
    for (pair, fp) in f.terms() {
        if pair.r < by {
            return Err(Error::InternalInvariant(format!(
                "β^{by} does not divide a term with β-exponent {}",
                pair.r
            )));
        }
        out.insert_term(MultiIndexPair::new(pair.nu.clone(), pair.r - by), fp.clone())?;
    }
    Ok(out)
}

/// L computed from the raw definition β⁻²(∂_τ̄ + α'∂_z̄); the exact division
/// by β² is checked. Cross-validates `lower`.
pub fn lower_raw(f: &NearlyHoloElt) -> Result<NearlyHoloElt> {
    require_scalar(f, "L")?;
    let k = f.k();
    let mut t = apply_partial(Partial::TauBar, f);
    for j in 0..f.h() {
        t = t.add(&apply_partial(Partial::ZBar(j), f).mul_alpha(j))?;
    }
    Ok(shift_beta_down(&t, 2)?.with_weight(k - 2))
}

/// L^J_j from the raw definition β⁻¹∂_{z̄,j}.
pub fn lower_j_raw(j: usize, f: &NearlyHoloElt) -> Result<NearlyHoloElt> {
    require_scalar(f, "L^J")?;
    let k = f.k();
    let t = apply_partial(Partial::ZBar(j), f);
    Ok(shift_beta_down(&t, 1)?.with_weight(k - 1))
}

/// One generator of an operator word. Weights are resolved against the
/// element at application time, so a word is weight-consistent by
/// construction ("L after R_k" is compared at weight k−2, and so on).
#[derive(Clone, Debug, PartialEq)]
pub enum Step {
    DTau,
    DTauBar,
    DZ(usize),
    DZBar(usize),
    Raise,
    RaiseJ(usize),
    Lower,
    LowerJ(usize),
    Heat,
    RaiseJTilde(usize),
    MulAlpha(usize),
    MulBeta,
    MulScalar(Rational),
}

impl Step {
    /// Change of the weight label effected by this generator.
    pub fn weight_delta(&self) -> i64 {
        match self {
            Step::Raise | Step::Heat => 2,
            Step::RaiseJ(_) | Step::RaiseJTilde(_) => 1,
            Step::Lower => -2,
            Step::LowerJ(_) => -1,
            _ => 0,
        }
    }
}

impl std::fmt::Display for Step {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Step::DTau => write!(f, "∂τ"),
            Step::DTauBar => write!(f, "∂τ̄"),
            Step::DZ(j) => write!(f, "∂z{}", j + 1),
            Step::DZBar(j) => write!(f, "∂z̄{}", j + 1),
            Step::Raise => write!(f, "R"),
            Step::RaiseJ(j) => write!(f, "RJ{}", j + 1),
            Step::Lower => write!(f, "L"),
            Step::LowerJ(j) => write!(f, "LJ{}", j + 1),
            Step::Heat => write!(f, "Δ̃"),
            Step::RaiseJTilde(j) => write!(f, "R̃J{}", j + 1),
            Step::MulAlpha(j) => write!(f, "α{}·", j + 1),
            Step::MulBeta => write!(f, "β·"),
            Step::MulScalar(c) => write!(f, "({c})·"),
        }
    }
}

/// A composable word of generators against a fixed Jacobi index. The word
/// is written in composition order (leftmost applied last).
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorExpr {
    pub word: Vec<Step>,
    pub index: HalfIntSymMatrix,
    /// Expected weight of arguments, when pinned by the construction.
    pub expect_in: Option<i64>,
}

impl OperatorExpr {
    pub fn new(word: Vec<Step>, index: HalfIntSymMatrix) -> Self {
        OperatorExpr {
            word,
            index,
            expect_in: None,
        }
    }

    pub fn identity(index: HalfIntSymMatrix) -> Self {
        Self::new(Vec::new(), index)
    }

    pub fn with_input_weight(mut self, k: i64) -> Self {
        self.expect_in = Some(k);
        self
    }

    /// Net weight shift of the full word.
    pub fn weight_delta(&self) -> i64 {
        self.word.iter().map(Step::weight_delta).sum()
    }

    pub fn apply(&self, f: &NearlyHoloElt) -> Result<NearlyHoloElt> {
        if f.index() != &self.index {
            return Err(Error::ShapeMismatch(
                "operator and element carry different Jacobi indices".into(),
            ));
        }
        if let Some(expect) = self.expect_in {
            if f.k() != expect {
                return Err(Error::WeightMismatch {
                    expected: expect,
                    found: f.k(),
                });
            }
        }
        let mut cur = f.clone();
        for step in self.word.iter().rev() {
            cur = match step {
                Step::DTau => apply_partial(Partial::Tau, &cur),
                Step::DTauBar => apply_partial(Partial::TauBar, &cur),
                Step::DZ(j) => apply_partial(Partial::Z(*j), &cur),
                Step::DZBar(j) => apply_partial(Partial::ZBar(*j), &cur),
                Step::Raise => raise(&cur)?,
                Step::RaiseJ(j) => raise_j(*j, &cur)?,
                Step::Lower => lower(&cur)?,
                Step::LowerJ(j) => lower_j(*j, &cur)?,
                Step::Heat => heat(&cur)?,
                Step::RaiseJTilde(j) => raise_j_tilde(*j, &cur)?,
                Step::MulAlpha(j) => cur.mul_alpha(*j),
                Step::MulBeta => cur.mul_beta(),
                Step::MulScalar(c) => cur.scale(c),
            };
        }
        Ok(cur)
    }
}

impl std::fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.word.is_empty() {
            return write!(f, "id");
        }
        for (i, step) in self.word.iter().enumerate() {
            if i > 0 {
                write!(f, "∘")?;
            }
            write!(f, "{step}")?;
        }
        if let Some(k) = self.expect_in {
            write!(f, " @k={k}")?;
        }
        Ok(())
    }
}

/// R̂_{ν,r} = (R̃^J_1)^{ν_1} ∘ ⋯ ∘ (R̃^J_h)^{ν_h} ∘ Δ̃^{∘r}, mapping weight
/// k_top − |ν,r| up to k_top.
pub fn compose_rhat(
    nu: &[u32],
    r: u32,
    k_top: i64,
    index: &HalfIntSymMatrix,
) -> Result<OperatorExpr> {
    if !index.is_invertible() {
        return Err(Error::SingularIndex);
    }
    let d = nu.iter().sum::<u32>() + 2 * r;
    let mut word = Vec::new();
    for (j, &e) in nu.iter().enumerate() {
        for _ in 0..e {
            word.push(Step::RaiseJTilde(j));
        }
    }
    for _ in 0..r {
        word.push(Step::Heat);
    }
    Ok(OperatorExpr::new(word, index.clone()).with_input_weight(k_top - d as i64))
}

/// L̂_{ν,r} = L^r ∘ (L^J_h)^{ν_h} ∘ ⋯ ∘ (L^J_1)^{ν_1}, mapping weight k down
/// to k − |ν,r|.
pub fn compose_lhat(nu: &[u32], r: u32, index: &HalfIntSymMatrix) -> OperatorExpr {
    let mut word = Vec::new();
    for _ in 0..r {
        word.push(Step::Lower);
    }
    for (j, &e) in nu.iter().enumerate().rev() {
        for _ in 0..e {
            word.push(Step::LowerJ(j));
        }
    }
    OperatorExpr::new(word, index.clone())
}

pub fn apply_rhat(
    nu: &[u32],
    r: u32,
    k_top: i64,
    f: &NearlyHoloElt,
) -> Result<NearlyHoloElt> {
    compose_rhat(nu, r, k_top, f.index())?.apply(f)
}

pub fn apply_lhat(nu: &[u32], r: u32, f: &NearlyHoloElt) -> Result<NearlyHoloElt> {
    compose_lhat(nu, r, f.index()).apply(f)
}

/// The closed-form ladder constant from the commutation recursion:
/// stripping the smallest α index contributes ν_j at weight k−1, and each
/// β step contributes Σ_{q=1}^{r} (k − 2q − h/2) at weight k−2.
pub fn lr_constant_recursion(nu: &[u32], r: u32, k_top: i64, h: usize) -> Rational {
    if let Some(j) = nu.iter().position(|&v| v > 0) {
        let mut rest = nu.to_vec();
        rest[j] -= 1;
        return rat_int(nu[j] as i64) * lr_constant_recursion(&rest, r, k_top - 1, h);
    }
    if r == 0 {
        return Rational::one();
    }
    let mut sum = Rational::zero();
    for q in 1..=r {
        sum += rat_int(k_top - 2 * q as i64) - rat(h as i64, 2);
    }
    sum * lr_constant_recursion(nu, r - 1, k_top - 2, h)
}

/// Extract the scalar c with y = c·probe for holomorphic scalar elements;
/// errors if y is not an exact multiple of the probe.
fn scalar_multiple_of(y: &NearlyHoloElt, probe: &NearlyHoloElt) -> Result<Rational> {
    let yf = y.holomorphic_fourier()?;
    let pf = probe.holomorphic_fourier()?;
    if yf.is_zero() {
        return Ok(Rational::zero());
    }
    let (mode, value) = pf
        .modes()
        .next()
        .ok_or_else(|| Error::InternalInvariant("zero probe".into()))?;
    let num = yf.coeff(mode);
    let c = {
        let (nu_v, pc) = value.iter().next().unwrap();
        num.coeff(nu_v) / pc.clone()
    };
    if yf != pf.scale(&c) {
        return Err(Error::InternalInvariant(
            "ladder image is not a scalar multiple of the probe".into(),
        ));
    }
    Ok(c)
}

/// The scalar c with L̂_{ν,r} ∘ R̂_{ν,r} = c·id on holomorphic functions of
/// weight k_top − |ν,r|. Computed by applying the composite to two
/// independent probes and cross-checked against the commutation recursion;
/// any disagreement is surfaced as an error rather than resolved silently.
/// Requires k_top − |ν,r| > h/2, which guarantees c > 0.
pub fn lr_constant(
    nu: &[u32],
    r: u32,
    k_top: i64,
    index: &HalfIntSymMatrix,
) -> Result<Rational> {
    let h = index.h();
    let d = (nu.iter().sum::<u32>() + 2 * r) as i64;
    let base = k_top - d;
    let c_rec = lr_constant_recursion(nu, r, k_top, h);
    if 2 * base <= h as i64 {
        return Err(Error::HypothesisViolated(format!(
            "k − |ν,r| = {base} ≤ h/2 = {h}/2; ladder constant for (nu={nu:?}, r={r}) at weight {k_top} is {c_rec}, not guaranteed positive"
        )));
    }
    let probe1 = NearlyHoloElt::from_fourier(
        base,
        index.clone(),
        FourierPoly::constant(h, 1, Rational::one()),
    )?;
    let mut rvec = vec![0i64; h];
    rvec[0] = 1;
    let probe2 = NearlyHoloElt::from_fourier(
        base,
        index.clone(),
        FourierPoly::scalar_mode(h, 1, FourierMode::new(rat_int(1), rvec), Rational::one())?,
    )?;
    let mut cs = Vec::new();
    for probe in [&probe1, &probe2] {
        let up = apply_rhat(nu, r, k_top, probe)?;
        let down = apply_lhat(nu, r, &up)?;
        cs.push(scalar_multiple_of(&down, probe)?);
    }
    if cs[0] != cs[1] || cs[0] != c_rec {
        return Err(Error::InternalInvariant(format!(
            "ladder constant mismatch for (nu={nu:?}, r={r}) at weight {k_top}: probes gave {} and {}, recursion gives {c_rec}",
            cs[0], cs[1]
        )));
    }
    if !cs[0].is_positive() {
        return Err(Error::InternalInvariant(format!(
            "ladder constant {} is not positive despite k − |ν,r| > h/2",
            cs[0]
        )));
    }
    Ok(cs.swap_remove(0))
}

/// Linear combination of operator words; the right-hand side of a
/// commutator identity.
#[derive(Clone, Debug)]
pub struct OpCombo {
    pub terms: Vec<(Rational, OperatorExpr)>,
}

impl OpCombo {
    pub fn zero() -> Self {
        OpCombo { terms: Vec::new() }
    }

    pub fn scalar(c: Rational, index: &HalfIntSymMatrix) -> Self {
        OpCombo {
            terms: vec![(c, OperatorExpr::identity(index.clone()))],
        }
    }

    pub fn apply(&self, f: &NearlyHoloElt) -> Result<NearlyHoloElt> {
        let mut out: Option<NearlyHoloElt> = None;
        for (c, op) in &self.terms {
            let v = op.apply(f)?.scale(c);
            out = Some(match out {
                None => v,
                Some(acc) => acc.add(&v)?,
            });
        }
        Ok(out.unwrap_or_else(|| {
            NearlyHoloElt::zero(f.k(), f.s(), f.index().clone(), f.level())
        }))
    }
}

/// Result of checking one commutator identity over a test family.
#[derive(Clone, Debug)]
pub struct CommutatorReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl CommutatorReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Evaluate [A, B] − expected on every test element; exact equality or the
/// first counterexamples are reported.
pub fn commutator_check(
    a: &OperatorExpr,
    b: &OperatorExpr,
    expected: &OpCombo,
    tests: &[NearlyHoloElt],
) -> Result<CommutatorReport> {
    let mut failures = Vec::new();
    for t in tests {
        let lhs = a.apply(&b.apply(t)?)?.sub(&b.apply(&a.apply(t)?)?)?;
        let rhs = expected.apply(t)?;
        // Zero carries no canonical weight label.
        let equal = lhs == rhs || (lhs.is_zero() && rhs.is_zero());
        if !equal {
            if failures.len() < 3 {
                failures.push(format!("input {t}: got {lhs}, expected {rhs}"));
            } else {
                failures.push("…".into());
                break;
            }
        }
    }
    Ok(CommutatorReport {
        checked: tests.len(),
        failures,
    })
}

/// Deliberate corruption of one expected identity; used to prove the
/// harness actually detects exact mismatches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    LowerRaiseScalar,
}

/// The unit monomial α^ν β^r e(nτ + r'z) at a given weight.
pub fn unit_monomial(
    k: i64,
    index: &HalfIntSymMatrix,
    level: u32,
    pair: &MultiIndexPair,
    mode: &FourierMode,
) -> Result<NearlyHoloElt> {
    let fp = FourierPoly::scalar_mode(index.h(), level, mode.clone(), Rational::one())?;
    NearlyHoloElt::monomial(k, index.clone(), pair.clone(), fp)
}

/// A small spanning family of distinct Fourier modes.
pub fn sample_modes(h: usize) -> Vec<FourierMode> {
    let e1 = {
        let mut v = vec![0i64; h];
        v[0] = 1;
        v
    };
    let ones = vec![1i64; h];
    let neg_last = {
        let mut v = vec![0i64; h];
        v[h - 1] = -1;
        v
    };
    let mixed = if h >= 2 {
        let mut v = vec![0i64; h];
        v[0] = 1;
        v[1] = 2;
        v
    } else {
        vec![3i64]
    };
    let mut modes = vec![
        FourierMode::new(rat_int(0), vec![0; h]),
        FourierMode::new(rat_int(1), e1.clone()),
        FourierMode::new(rat_int(2), ones),
        FourierMode::new(rat_int(1), neg_last),
        FourierMode::new(rat_int(2), mixed),
        FourierMode::new(rat_int(3), e1),
    ];
    modes.dedup();
    modes
}

/// All monomials α^ν β^r over the sample modes with |ν, r| ≤ max_degree,
/// at weight k.
pub fn generating_family(
    k: i64,
    index: &HalfIntSymMatrix,
    max_degree: u32,
) -> Result<Vec<NearlyHoloElt>> {
    let h = index.h();
    let mut out = Vec::new();
    for pair in pairs_up_to(max_degree, h) {
        for mode in sample_modes(h) {
            out.push(unit_monomial(k, index, 1, &pair, &mode)?);
        }
    }
    Ok(out)
}

/// Run the full commutator table over the generating family. Returns one
/// named report per identity instance.
pub fn commutator_table(
    index: &HalfIntSymMatrix,
    k: i64,
    max_degree: u32,
    fault: Option<Fault>,
) -> Result<Vec<(String, CommutatorReport)>> {
    let h = index.h();
    let tests = generating_family(k, index, max_degree)?;
    let minv = index.invert_index()?;
    let mut out = Vec::new();

    let word = |steps: Vec<Step>| OperatorExpr::new(steps, index.clone());

    // [L, R_k] = k.
    let expected_scalar = if fault == Some(Fault::LowerRaiseScalar) {
        rat_int(k + 1)
    } else {
        rat_int(k)
    };
    out.push((
        format!("[L, R_{k}] = {k}"),
        commutator_check(
            &word(vec![Step::Lower]),
            &word(vec![Step::Raise]),
            &OpCombo::scalar(expected_scalar, index),
            &tests,
        )?,
    ));

    for j in 0..h {
        out.push((
            format!("[L, R^J_{}] = L^J_{}", j + 1, j + 1),
            commutator_check(
                &word(vec![Step::Lower]),
                &word(vec![Step::RaiseJ(j)]),
                &OpCombo {
                    terms: vec![(Rational::one(), word(vec![Step::LowerJ(j)]))],
                },
                &tests,
            )?,
        ));
        out.push((
            format!("[L^J_{}, R_{k}] = R^J_{}", j + 1, j + 1),
            commutator_check(
                &word(vec![Step::LowerJ(j)]),
                &word(vec![Step::Raise]),
                &OpCombo {
                    terms: vec![(Rational::one(), word(vec![Step::RaiseJ(j)]))],
                },
                &tests,
            )?,
        ));
    }

    for i in 0..h {
        for j in 0..h {
            out.push((
                format!("[L^J_{}, R^J_{}] = m_({},{})", i + 1, j + 1, i + 1, j + 1),
                commutator_check(
                    &word(vec![Step::LowerJ(i)]),
                    &word(vec![Step::RaiseJ(j)]),
                    &OpCombo::scalar(index.entry(i, j).clone(), index),
                    &tests,
                )?,
            ));
            out.push((
                format!("[L^J_{}, L^J_{}] = 0", i + 1, j + 1),
                commutator_check(
                    &word(vec![Step::LowerJ(i)]),
                    &word(vec![Step::LowerJ(j)]),
                    &OpCombo::zero(),
                    &tests,
                )?,
            ));
            out.push((
                format!("[R^J_{}, R^J_{}] = 0", i + 1, j + 1),
                commutator_check(
                    &word(vec![Step::RaiseJ(i)]),
                    &word(vec![Step::RaiseJ(j)]),
                    &OpCombo::zero(),
                    &tests,
                )?,
            ));
            out.push((
                format!("[R^J_{}, R̃^J_{}] = 0", i + 1, j + 1),
                commutator_check(
                    &word(vec![Step::RaiseJ(i)]),
                    &word(vec![Step::RaiseJTilde(j)]),
                    &OpCombo::zero(),
                    &tests,
                )?,
            ));
            let expected = if i == j {
                OpCombo::scalar(Rational::one(), index)
            } else {
                OpCombo::zero()
            };
            out.push((
                format!(
                    "[L^J_{}, R̃^J_{}] = {}",
                    i + 1,
                    j + 1,
                    if i == j { "1" } else { "0" }
                ),
                commutator_check(
                    &word(vec![Step::LowerJ(i)]),
                    &word(vec![Step::RaiseJTilde(j)]),
                    &expected,
                    &tests,
                )?,
            ));
        }
    }

    // [L, Δ̃_k] = (k − h/2) − R^J' m⁻¹ L^J. The cross term carries
    // coefficient one: expanding Δ̃_k = R_k − ½R^J'm⁻¹R^J against
    // [L, R^J_i R^J_j] = R^J_j L^J_i + R^J_i L^J_j + 2 m_{ij} collapses the
    // two symmetric halves onto a single copy of R^J'm⁻¹L^J.
    let mut terms = vec![(
        rat_int(k) - rat(h as i64, 2),
        OperatorExpr::identity(index.clone()),
    )];
    for i in 0..h {
        for j in 0..h {
            let c = -minv.get(i, j).clone();
            if c.is_zero() {
                continue;
            }
            terms.push((c, word(vec![Step::RaiseJ(i), Step::LowerJ(j)])));
        }
    }
    out.push((
        format!("[L, Δ̃_{k}] = {k} − {h}/2 − R^J'm⁻¹L^J"),
        commutator_check(
            &word(vec![Step::Lower]),
            &word(vec![Step::Heat]),
            &OpCombo { terms },
            &tests,
        )?,
    ));

    Ok(out)
}
