//! Exact rational arithmetic, half-integral symmetric matrices, and the
//! multi-index combinatorics shared by all modules.
//!
//! Everything symbolic in this crate is computed over ℚ with no rounding;
//! floating point enters only through the numerical evaluation in
//! [`crate::slash`].

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// Exact rational scalar: always reduced, denominator positive.
pub type Rational = num_rational::BigRational;

/// `num / den` as an exact rational. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// The integer `n` as a rational.
pub fn rat_int(num: i64) -> Rational {
    Rational::from_integer(BigInt::from(num))
}

/// Dense matrix over ℚ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged matrix rows".into()));
        }
        Ok(RationalMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if self.get(i, j) != self.get(j, i) {
                    return false;
                }
            }
        }
        true
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Rational::zero();
                for l in 0..self.cols {
                    acc += self.get(i, l) * other.get(l, j);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Exact determinant by Gaussian elimination with pivot search.
    pub fn determinant(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rational::one();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m.get(r, col).is_zero());
            let Some(p) = pivot else {
                return Rational::zero();
            };
            if p != col {
                for j in 0..n {
                    let a = m.get(col, j).clone();
                    let b = m.get(p, j).clone();
                    m.set(col, j, b);
                    m.set(p, j, a);
                }
                det = -det;
            }
            let d = m.get(col, col).clone();
            det *= d.clone();
            for r in (col + 1)..n {
                let f = m.get(r, col) / &d;
                if f.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = m.get(r, j) - &f * m.get(col, j);
                    m.set(r, j, v);
                }
            }
        }
        det
    }

    /// Exact inverse by Gauss-Jordan elimination; `None` if singular.
    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let p = (col..n).find(|&r| !m.get(r, col).is_zero())?;
            if p != col {
                for j in 0..n {
                    let (a, b) = (m.get(col, j).clone(), m.get(p, j).clone());
                    m.set(col, j, b);
                    m.set(p, j, a);
                    let (a, b) = (inv.get(col, j).clone(), inv.get(p, j).clone());
                    inv.set(col, j, b);
                    inv.set(p, j, a);
                }
            }
            let d = m.get(col, col).clone();
            for j in 0..n {
                let v = m.get(col, j) / &d;
                m.set(col, j, v);
                let v = inv.get(col, j) / &d;
                inv.set(col, j, v);
            }
            for r in 0..n {
                if r == col || m.get(r, col).is_zero() {
                    continue;
                }
                let f = m.get(r, col).clone();
                for j in 0..n {
                    let v = m.get(r, j) - &f * m.get(col, j);
                    m.set(r, j, v);
                    let v = inv.get(r, j) - &f * inv.get(col, j);
                    inv.set(r, j, v);
                }
            }
        }
        Some(inv)
    }
}

/// Symmetric h×h Jacobi index: integral diagonal, all entries of 2m integral.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfIntSymMatrix {
    mat: RationalMatrix,
}

impl HalfIntSymMatrix {
    pub fn new(mat: RationalMatrix) -> Result<Self> {
        if mat.rows() != mat.cols() || mat.rows() == 0 {
            return Err(Error::NotHalfIntegral("index must be square and nonempty".into()));
        }
        if !mat.is_symmetric() {
            return Err(Error::NotHalfIntegral("index must be symmetric".into()));
        }
        for i in 0..mat.rows() {
            if !mat.get(i, i).is_integer() {
                return Err(Error::NotHalfIntegral(format!(
                    "diagonal entry ({i},{i}) = {} is not an integer",
                    mat.get(i, i)
                )));
            }
            for j in 0..mat.cols() {
                if !(mat.get(i, j) * rat_int(2)).is_integer() {
                    return Err(Error::NotHalfIntegral(format!(
                        "entry ({i},{j}) = {} is not half-integral",
                        mat.get(i, j)
                    )));
                }
            }
        }
        Ok(HalfIntSymMatrix { mat })
    }

    /// Build from the integral matrix 2m.
    pub fn from_two_m(two_m: &[Vec<i64>]) -> Result<Self> {
        let rows = two_m
            .iter()
            .map(|row| row.iter().map(|&v| rat(v, 2)).collect())
            .collect();
        Self::new(RationalMatrix::from_rows(rows)?)
    }

    pub fn identity(h: usize) -> Self {
        HalfIntSymMatrix {
            mat: RationalMatrix::identity(h),
        }
    }

    pub fn h(&self) -> usize {
        self.mat.rows()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        self.mat.get(i, j)
    }

    pub fn as_matrix(&self) -> &RationalMatrix {
        &self.mat
    }

    /// The integral matrix 2m, used by the file format.
    pub fn two_m(&self) -> Vec<Vec<BigInt>> {
        (0..self.h())
            .map(|i| {
                (0..self.h())
                    .map(|j| (self.entry(i, j) * rat_int(2)).to_integer())
                    .collect()
            })
            .collect()
    }

    /// Exact inverse of the index; `m · m^{-1}` is the identity exactly.
    pub fn invert_index(&self) -> Result<RationalMatrix> {
        self.mat.inverse().ok_or(Error::SingularIndex)
    }

    pub fn is_invertible(&self) -> bool {
        !self.mat.determinant().is_zero()
    }
}

/// Exact positive semi-definiteness of a symmetric rational matrix, decided
/// by symmetric Gaussian elimination: a zero pivot forces its whole row to
/// vanish, a negative pivot refutes, and otherwise we recurse on the Schur
/// complement.
pub fn is_psd(a: &RationalMatrix) -> bool {
    assert!(a.is_symmetric(), "PSD test requires a symmetric matrix");
    let n = a.rows();
    let mut m = a.clone();
    for i in 0..n {
        let d = m.get(i, i).clone();
        if d.is_negative() {
            return false;
        }
        if d.is_zero() {
            if ((i + 1)..n).any(|j| !m.get(i, j).is_zero()) {
                return false;
            }
            continue;
        }
        for j in (i + 1)..n {
            let f = m.get(j, i) / &d;
            if f.is_zero() {
                continue;
            }
            for l in j..n {
                let v = m.get(j, l) - &f * m.get(i, l);
                m.set(j, l, v.clone());
                m.set(l, j, v);
            }
        }
    }
    true
}

/// Support condition for a Fourier mode `(n, r)` against the index `m`:
/// true iff the block matrix `[[n, r'/2], [r/2, m]]` is positive
/// semi-definite.
pub fn psd_support_check(n: &Rational, r: &[i64], m: &HalfIntSymMatrix) -> bool {
    let h = m.h();
    assert_eq!(r.len(), h, "mode vector length must equal the cogenus");
    let mut block = RationalMatrix::zeros(h + 1, h + 1);
    block.set(0, 0, n.clone());
    for j in 0..h {
        block.set(0, j + 1, rat(r[j], 2));
        block.set(j + 1, 0, rat(r[j], 2));
        for i in 0..h {
            block.set(i + 1, j + 1, m.entry(i, j).clone());
        }
    }
    is_psd(&block)
}

/// Exponent pair (ν, r) of a monomial α^ν β^r, graded by |ν, r| = ν₁+⋯+ν_h+2r.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndexPair {
    pub nu: Vec<u32>,
    pub r: u32,
}

impl MultiIndexPair {
    pub fn new(nu: Vec<u32>, r: u32) -> Self {
        MultiIndexPair { nu, r }
    }

    pub fn zero(h: usize) -> Self {
        MultiIndexPair { nu: vec![0; h], r: 0 }
    }

    pub fn h(&self) -> usize {
        self.nu.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.nu.iter().sum::<u32>() + 2 * self.r
    }

    pub fn is_zero(&self) -> bool {
        self.r == 0 && self.nu.iter().all(|&v| v == 0)
    }
}

impl std::fmt::Display for MultiIndexPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(nu={:?}, r={})", self.nu, self.r)
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).expect("binomial overflow")
}

/// μ(s, h) = binom(s + h - 1, h - 1): the number of degree-s monomials in
/// Y₁, …, Y_h, i.e. the dimension of V_s / X·V_{s-1}.
pub fn multiplicity_mu(s: u32, h: usize) -> usize {
    binomial(s as u64 + h as u64 - 1, h as u64 - 1) as usize
}

/// All ν ∈ ℕ₀^h with |ν| = s, in descending lexicographic order, i.e. the
/// monomial order Y₁ ≻ Y₂ ≻ ⋯ on Y^ν.
pub fn compositions_desc(s: u32, h: usize) -> Vec<Vec<u32>> {
    fn rec(s: u32, h: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if h == 1 {
            prefix.push(s);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in (0..=s).rev() {
            prefix.push(first);
            rec(s - first, h - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::with_capacity(multiplicity_mu(s, h));
    rec(s, h, &mut Vec::new(), &mut out);
    out
}

/// Basis of V_s / X·V_{s-1}: the exponents ν of the pure monomials Y^ν with
/// |ν| = s, in ascending lexicographic order. This fixes the component order
/// of every quotient tuple in the crate.
pub fn y_monomials(s: u32, h: usize) -> Vec<Vec<u32>> {
    let mut v = compositions_desc(s, h);
    v.reverse();
    v
}

/// All pairs (ν, r) with |ν, r| = `level`, ordered by r ascending and, within
/// fixed r, by ν descending lexicographically. The length is n(level).
pub fn enumerate_pairs(level: u32, h: usize) -> Vec<MultiIndexPair> {
    let mut out = Vec::new();
    for r in 0..=(level / 2) {
        for nu in compositions_desc(level - 2 * r, h) {
            out.push(MultiIndexPair::new(nu, r));
        }
    }
    out
}

/// All pairs with |ν, r| ≤ `bound`, grouped by level ascending.
pub fn pairs_up_to(bound: u32, h: usize) -> Vec<MultiIndexPair> {
    (0..=bound).flat_map(|l| enumerate_pairs(l, h)).collect()
}

/// Random half-integral symmetric h×h matrix with entries of modest size;
/// when `invertible` is set, resamples until the determinant is nonzero.
pub fn random_half_integral<R: Rng + ?Sized>(
    rng: &mut R,
    h: usize,
    invertible: bool,
) -> HalfIntSymMatrix {
    loop {
        let mut m = RationalMatrix::zeros(h, h);
        for i in 0..h {
            m.set(i, i, rat_int(rng.gen_range(1..=4)));
            for j in (i + 1)..h {
                let v = rat(rng.gen_range(-3..=3), 2);
                m.set(i, j, v.clone());
                m.set(j, i, v);
            }
        }
        let m = HalfIntSymMatrix::new(m).expect("construction is half-integral");
        if !invertible || m.is_invertible() {
            return m;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn invert_identity() {
        let m = HalfIntSymMatrix::from_two_m(&[vec![2]]).unwrap();
        assert_eq!(m.invert_index().unwrap(), RationalMatrix::identity(1));
    }

    #[test]
    fn invert_off_diagonal_index() {
        // m = [[2, 1/2], [1/2, 2]], 2m = [[4, 1], [1, 4]].
        let m = HalfIntSymMatrix::from_two_m(&[vec![4, 1], vec![1, 4]]).unwrap();
        let inv = m.invert_index().unwrap();
        let expect = RationalMatrix::from_rows(vec![
            vec![rat(8, 15), rat(-2, 15)],
            vec![rat(-2, 15), rat(8, 15)],
        ])
        .unwrap();
        assert_eq!(inv, expect);
        assert_eq!(m.as_matrix().mul(&inv).unwrap(), RationalMatrix::identity(2));
    }

    #[test]
    fn invert_rank_deficient() {
        let m = HalfIntSymMatrix::from_two_m(&[vec![2, 2], vec![2, 2]]).unwrap();
        assert!(matches!(m.invert_index(), Err(Error::SingularIndex)));
    }

    #[test]
    fn invert_random_indices() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for h in 1..=4 {
            for _ in 0..12 {
                let m = random_half_integral(&mut rng, h, true);
                let inv = m.invert_index().unwrap();
                assert_eq!(m.as_matrix().mul(&inv).unwrap(), RationalMatrix::identity(h));
            }
        }
    }

    #[test]
    fn half_integrality_enforced() {
        // Non-integral diagonal.
        let bad = RationalMatrix::from_rows(vec![vec![rat(1, 2)]]).unwrap();
        assert!(HalfIntSymMatrix::new(bad).is_err());
        // Quarter-integral off-diagonal.
        let bad = RationalMatrix::from_rows(vec![
            vec![rat_int(1), rat(1, 4)],
            vec![rat(1, 4), rat_int(1)],
        ])
        .unwrap();
        assert!(HalfIntSymMatrix::new(bad).is_err());
        // Asymmetric.
        let bad = RationalMatrix::from_rows(vec![
            vec![rat_int(1), rat_int(1)],
            vec![rat_int(0), rat_int(1)],
        ])
        .unwrap();
        assert!(HalfIntSymMatrix::new(bad).is_err());
    }

    #[test]
    fn psd_examples() {
        let m1 = HalfIntSymMatrix::from_two_m(&[vec![2]]).unwrap();
        // Gram matrix [[1, 1], [1, 1]] of rank one.
        assert!(psd_support_check(&rat_int(1), &[2], &m1));
        // Determinant -1/4.
        assert!(!psd_support_check(&rat_int(0), &[1], &m1));
        let m2 = HalfIntSymMatrix::identity(2);
        assert!(psd_support_check(&rat_int(0), &[0, 0], &m2));
    }

    /// Oracle: PSD iff every principal minor is non-negative.
    fn is_psd_by_minors(a: &RationalMatrix) -> bool {
        let n = a.rows();
        for mask in 1u32..(1 << n) {
            let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let mut sub = RationalMatrix::zeros(idx.len(), idx.len());
            for (i, &a_i) in idx.iter().enumerate() {
                for (j, &a_j) in idx.iter().enumerate() {
                    sub.set(i, j, a.get(a_i, a_j).clone());
                }
            }
            if sub.determinant().is_negative() {
                return false;
            }
        }
        true
    }

    #[test]
    fn psd_matches_all_minors_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=4 {
            for _ in 0..60 {
                let mut a = RationalMatrix::zeros(n, n);
                for i in 0..n {
                    a.set(i, i, rat(rng.gen_range(-2..=4), 1));
                    for j in (i + 1)..n {
                        let v = rat(rng.gen_range(-3..=3), 2);
                        a.set(i, j, v.clone());
                        a.set(j, i, v);
                    }
                }
                assert_eq!(is_psd(&a), is_psd_by_minors(&a), "disagree on {a:?}");
            }
        }
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(
            enumerate_pairs(0, 3),
            vec![MultiIndexPair::new(vec![0, 0, 0], 0)]
        );
        assert_eq!(
            enumerate_pairs(2, 1),
            vec![
                MultiIndexPair::new(vec![2], 0),
                MultiIndexPair::new(vec![0], 1)
            ]
        );
        assert_eq!(
            enumerate_pairs(2, 2),
            vec![
                MultiIndexPair::new(vec![2, 0], 0),
                MultiIndexPair::new(vec![1, 1], 0),
                MultiIndexPair::new(vec![0, 2], 0),
                MultiIndexPair::new(vec![0, 0], 1),
            ]
        );
    }

    /// Brute-force count of pairs (ν, r) with |ν, r| = level over a box.
    fn count_pairs_brute(level: u32, h: usize) -> usize {
        fn rec(h: usize, left: i64, level: u32, nu: &mut Vec<u32>, count: &mut usize) {
            if h == 0 {
                let s: u32 = nu.iter().sum();
                if s <= level && (level - s).is_multiple_of(2) {
                    *count += 1;
                }
                return;
            }
            for v in 0..=left {
                nu.push(v as u32);
                rec(h - 1, left - v, level, nu, count);
                nu.pop();
            }
        }
        let mut count = 0;
        rec(h, level as i64, level, &mut Vec::new(), &mut count);
        count
    }

    #[test]
    fn enumeration_counts_match_brute_force() {
        for h in 1..=3 {
            for level in 0..=6 {
                assert_eq!(enumerate_pairs(level, h).len(), count_pairs_brute(level, h));
            }
        }
    }

    #[test]
    fn pairs_up_to_counts_monomials_below_degree() {
        // Σ_{ℓ≤d} n(ℓ) must equal the number of monomials α^ν β^r of degree ≤ d.
        for h in 1..=3usize {
            for d in 0..=5u32 {
                let total = pairs_up_to(d, h).len();
                let mut brute = 0usize;
                for level in 0..=d {
                    brute += count_pairs_brute(level, h);
                }
                assert_eq!(total, brute);
            }
        }
    }

    #[test]
    fn mu_examples_and_enumeration() {
        assert_eq!(multiplicity_mu(0, 3), 1);
        for s in 0..=6 {
            assert_eq!(multiplicity_mu(s, 1), 1);
        }
        assert_eq!(multiplicity_mu(2, 2), 3);
        for h in 1..=6usize {
            for s in 0..=6u32 {
                assert_eq!(multiplicity_mu(s, h), compositions_desc(s, h).len());
            }
        }
    }

    #[test]
    fn y_basis_order_is_ascending_lex() {
        assert_eq!(
            y_monomials(2, 2),
            vec![vec![0, 2], vec![1, 1], vec![2, 0]]
        );
    }
}
