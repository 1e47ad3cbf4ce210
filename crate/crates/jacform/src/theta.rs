//! Lattice theta series: concrete scalar Jacobi forms with exact integer
//! Fourier coefficients.
//!
//! For an even positive-definite Gram matrix G of rank 2k and elliptic
//! vectors v₁, …, v_h ∈ ℤ^rank, the theta series
//!
//! ```text
//!   θ(τ, z) = Σ_{x ∈ ℤ^rank} e(½x'Gx·τ + Σ_j (x'Gv_j) z_j)
//! ```
//!
//! is a Jacobi form of weight k = rank/2 and index m = ½V'GV (always
//! half-integral). Coefficients c(n, r) count lattice vectors with
//! ½x'Gx = n and x'Gv = r; they are produced here by exact recursive
//! enumeration over an LDL' factorization of G computed in ℚ, so no
//! floating point enters the counting.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{rat, rat_int, HalfIntSymMatrix, Rational, RationalMatrix};
use crate::nearly::{FourierMode, FourierPoly};
use crate::sympow::SymPoly;

/// An even lattice together with the elliptic vectors defining a Jacobi
/// theta series.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeSpec {
    gram: Vec<Vec<i64>>,
    vectors: Vec<Vec<i64>>,
}

impl LatticeSpec {
    pub fn new(gram: Vec<Vec<i64>>, vectors: Vec<Vec<i64>>) -> Result<Self> {
        let n = gram.len();
        if n == 0 || gram.iter().any(|row| row.len() != n) {
            return Err(Error::ShapeMismatch("Gram matrix must be square".into()));
        }
        for i in 0..n {
            if gram[i][i] % 2 != 0 {
                return Err(Error::ShapeMismatch(format!(
                    "Gram diagonal entry ({i},{i}) = {} is odd",
                    gram[i][i]
                )));
            }
            for j in 0..n {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::ShapeMismatch("Gram matrix must be symmetric".into()));
                }
            }
        }
        // Positive definiteness: all leading principal minors positive.
        let rmat = RationalMatrix::from_rows(
            gram.iter()
                .map(|row| row.iter().map(|&v| rat_int(v)).collect())
                .collect(),
        )?;
        for lead in 1..=n {
            let mut sub = RationalMatrix::zeros(lead, lead);
            for i in 0..lead {
                for j in 0..lead {
                    sub.set(i, j, rmat.get(i, j).clone());
                }
            }
            if !sub.determinant().is_positive() {
                return Err(Error::ShapeMismatch(
                    "Gram matrix is not positive definite".into(),
                ));
            }
        }
        if vectors.is_empty() || vectors.iter().any(|v| v.len() != n) {
            return Err(Error::ShapeMismatch(
                "elliptic vectors must be nonempty columns of the lattice rank".into(),
            ));
        }
        Ok(LatticeSpec { gram, vectors })
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn h(&self) -> usize {
        self.vectors.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn vectors(&self) -> &[Vec<i64>] {
        &self.vectors
    }

    /// The Jacobi index ½ V'GV.
    pub fn index_matrix(&self) -> Result<HalfIntSymMatrix> {
        let h = self.h();
        let n = self.rank();
        let mut m = RationalMatrix::zeros(h, h);
        for a in 0..h {
            for b in 0..h {
                let mut acc: i64 = 0;
                for i in 0..n {
                    for j in 0..n {
                        acc += self.vectors[a][i] * self.gram[i][j] * self.vectors[b][j];
                    }
                }
                m.set(a, b, rat(acc, 2));
            }
        }
        HalfIntSymMatrix::new(m)
    }

    /// The E8 root lattice in its Cartan-matrix basis, with the elliptic
    /// vectors chosen among the simple roots (`cols` are basis indices).
    pub fn e8(cols: &[usize]) -> Result<Self> {
        let gram = e8_cartan();
        let vectors = cols
            .iter()
            .map(|&c| {
                let mut v = vec![0i64; 8];
                v[c] = 1;
                v
            })
            .collect();
        Self::new(gram, vectors)
    }

    /// The A2 root lattice (rank 2, 6 roots); handy for fast tests.
    pub fn a2(cols: &[usize]) -> Result<Self> {
        let gram = vec![vec![2, -1], vec![-1, 2]];
        let vectors = cols
            .iter()
            .map(|&c| {
                let mut v = vec![0i64; 2];
                v[c] = 1;
                v
            })
            .collect();
        Self::new(gram, vectors)
    }

    /// Orthogonal direct sum, keeping only the first summand's elliptic
    /// vectors (padded by zeros).
    pub fn direct_sum_with_a1(&self, copies: usize) -> Result<Self> {
        let n = self.rank();
        let total = n + copies;
        let mut gram = vec![vec![0i64; total]; total];
        for i in 0..n {
            for j in 0..n {
                gram[i][j] = self.gram[i][j];
            }
        }
        for c in 0..copies {
            gram[n + c][n + c] = 2;
        }
        let vectors = self
            .vectors
            .iter()
            .map(|v| {
                let mut w = v.clone();
                w.extend(std::iter::repeat_n(0, copies));
                w
            })
            .collect();
        Self::new(gram, vectors)
    }
}

fn e8_cartan() -> Vec<Vec<i64>> {
    vec![
        vec![2, 0, -1, 0, 0, 0, 0, 0],
        vec![0, 2, 0, -1, 0, 0, 0, 0],
        vec![-1, 0, 2, -1, 0, 0, 0, 0],
        vec![0, -1, -1, 2, -1, 0, 0, 0],
        vec![0, 0, 0, -1, 2, -1, 0, 0],
        vec![0, 0, 0, 0, -1, 2, -1, 0],
        vec![0, 0, 0, 0, 0, -1, 2, -1],
        vec![0, 0, 0, 0, 0, 0, -1, 2],
    ]
}

/// A concrete Jacobi form: exact Fourier data up to the truncation bound,
/// together with its weight, index, and level.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobiFormData {
    pub h: usize,
    pub k: i64,
    pub s: u32,
    pub index: HalfIntSymMatrix,
    pub level: u32,
    pub trunc: u32,
    pub coeffs: FourierPoly,
}

impl JacobiFormData {
    pub fn check_support(&self) -> Vec<FourierMode> {
        self.coeffs.check_support(&self.index)
    }
}

/// Unit lower-triangular L and positive diagonal D with G = L·D·L'.
fn ldl(gram: &[Vec<i64>]) -> (RationalMatrix, Vec<Rational>) {
    let n = gram.len();
    let mut l = RationalMatrix::identity(n);
    let mut d = vec![Rational::zero(); n];
    for j in 0..n {
        let mut dj = rat_int(gram[j][j]);
        for t in 0..j {
            dj -= l.get(j, t) * l.get(j, t) * &d[t];
        }
        d[j] = dj;
        for i in (j + 1)..n {
            let mut v = rat_int(gram[i][j]);
            for t in 0..j {
                v -= l.get(i, t) * l.get(j, t) * &d[t];
            }
            l.set(i, j, v / &d[j]);
        }
    }
    (l, d)
}

/// Exact theta-series enumeration: all x with ½x'Gx ≤ bound, counted into
/// Fourier modes (n, r) = (½x'Gx, x'Gv). Uses the ±x symmetry.
pub fn theta_series(lattice: &LatticeSpec, bound: u32) -> Result<JacobiFormData> {
    let n = lattice.rank();
    if !n.is_multiple_of(2) {
        return Err(Error::OddRank(n));
    }
    if bound > 4096 {
        return Err(Error::TruncationTooLarge(bound as u64));
    }
    let h = lattice.h();
    let (l, d) = ldl(&lattice.gram);
    // x'Gx = Σ_i d_i (x_i + c_i)² with c_i = Σ_{j>i} L_{ji} x_j.
    let budget_total = rat_int(2 * bound as i64);
    let mut counts: BTreeMap<(i64, Vec<i64>), u64> = BTreeMap::new();
    counts.insert((0, vec![0; h]), 1); // x = 0

    let mut x = vec![0i64; n];
    // Depth-first over levels n-1 down to 0; at each level walk outward
    // from the interval center while the exact bound admits points. Only
    // the sign class with the last nonzero coordinate positive is visited;
    // each leaf contributes to (n, r) and (n, -r).
    fn record(
        lattice: &LatticeSpec,
        x: &[i64],
        counts: &mut BTreeMap<(i64, Vec<i64>), u64>,
    ) {
        let n = lattice.rank();
        let mut q: i64 = 0;
        for i in 0..n {
            for j in 0..n {
                q += x[i] * lattice.gram[i][j] * x[j];
            }
        }
        debug_assert!(q % 2 == 0);
        let norm = q / 2;
        let r: Vec<i64> = lattice
            .vectors
            .iter()
            .map(|v| {
                let mut acc = 0i64;
                for i in 0..n {
                    for j in 0..n {
                        acc += x[i] * lattice.gram[i][j] * v[j];
                    }
                }
                acc
            })
            .collect();
        let neg: Vec<i64> = r.iter().map(|&v| -v).collect();
        *counts.entry((norm, r)).or_insert(0) += 1;
        *counts.entry((norm, neg)).or_insert(0) += 1;
    }

    #[allow(clippy::too_many_arguments)]
    fn descend(
        lattice: &LatticeSpec,
        l: &RationalMatrix,
        d: &[Rational],
        level: usize,
        budget: &Rational,
        all_zero: bool,
        x: &mut Vec<i64>,
        counts: &mut BTreeMap<(i64, Vec<i64>), u64>,
    ) {
        let n = lattice.rank();
        // Center of the admissible interval: -c with c = Σ_{j>level} L_{j,level} x_j.
        let mut c = Rational::zero();
        for j in (level + 1)..n {
            c += l.get(j, level) * rat_int(x[j]);
        }
        let cost = |t: i64| -> Rational {
            let shifted = rat_int(t) + &c;
            &shifted * &shifted * &d[level]
        };
        let proceed = |t: i64,
                       x: &mut Vec<i64>,
                       counts: &mut BTreeMap<(i64, Vec<i64>), u64>| {
            let used = cost(t);
            if used > *budget {
                return false;
            }
            x[level] = t;
            let zero_now = all_zero && t == 0;
            if level == 0 {
                if !zero_now {
                    record(lattice, x, counts);
                }
            } else {
                let rest = budget - used;
                descend(lattice, l, d, level - 1, &rest, zero_now, x, counts);
            }
            true
        };
        // Integer start near the center.
        let start = {
            let num = (-c.clone()).floor();
            num.to_integer()
                .try_into()
                .expect("enumeration coordinates fit in i64")
        };
        let lo_limit = if all_zero { 0 } else { i64::MIN };
        let mut t: i64 = start;
        while t >= lo_limit && proceed(t, x, counts) {
            t -= 1;
        }
        let mut t: i64 = start + 1;
        while proceed(t, x, counts) {
            t += 1;
        }
        x[level] = 0;
    }

    descend(
        lattice,
        &l,
        &d,
        n - 1,
        &budget_total,
        true,
        &mut x,
        &mut counts,
    );

    let mut coeffs = FourierPoly::new(h, 1, 0);
    for ((norm, r), count) in counts {
        if norm > bound as i64 {
            continue;
        }
        coeffs.insert(
            FourierMode::new(rat_int(norm), r),
            SymPoly::scalar(h, rat_int(count as i64)),
        )?;
    }
    let index = lattice.index_matrix()?;
    let form = JacobiFormData {
        h,
        k: (n / 2) as i64,
        s: 0,
        index,
        level: 1,
        trunc: bound,
        coeffs,
    };
    if !form.check_support().is_empty() {
        return Err(Error::InternalInvariant(
            "theta coefficients violate the support condition".into(),
        ));
    }
    Ok(form)
}
