//! The skew-symmetric Toeplitz matrices `A_k`, their diagonal quadratic
//! Poisson brackets, Casimirs, and the three structure maps relating
//! different `(n, k)`: the hyperplane inclusions, the monomial Poisson map
//! onto `LV(n-2k, 0)`, and the coordinate reversal.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{int, ExponentVector, LaurentPolynomial, Rational};
use crate::linalg;

/// The pair `(n, k)` identifying the system `LV(n, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SystemSpec {
    pub n: usize,
    pub k: usize,
}

impl SystemSpec {
    /// Requires `n >= 1` and `2k + 1 <= n`.
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n == 0 || 2 * k + 1 > n {
            return Err(Error::InvalidSpec { n, k });
        }
        Ok(SystemSpec { n, k })
    }

    /// Dimension `n - 2k` of the target of the monomial Poisson map.
    pub fn m(&self) -> usize {
        self.n - 2 * self.k
    }

    /// `floor((n+1)/2) - k`; the Liouville list uses `H_1 .. H_{r-1}`.
    pub fn r(&self) -> usize {
        (self.n + 1) / 2 - self.k
    }

    /// Strictly inside the main regime `n > 2k + 1`.
    pub fn is_interior(&self) -> bool {
        self.n > 2 * self.k + 1
    }

    /// The cyclic boundary case `n = 2k + 1`.
    pub fn is_cyclic(&self) -> bool {
        self.n == 2 * self.k + 1
    }

    /// Number of rational integrals `H_l`, i.e. `max(n - 2k - 2, 0)`.
    pub fn rational_count(&self) -> usize {
        self.m().saturating_sub(2)
    }

    /// Every valid spec with `lo <= n <= hi`, sorted by `(n, k)`.
    pub fn all_up_to(lo: usize, hi: usize) -> Vec<SystemSpec> {
        (lo.max(1)..=hi)
            .flat_map(|n| (0..=(n - 1) / 2).map(move |k| SystemSpec { n, k }))
            .collect()
    }
}

impl fmt::Display for SystemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LV({},{})", self.n, self.k)
    }
}

/// Sign rule for the upper triangle: `+1` iff `a > b`.
fn eps(a: usize, b: usize) -> i8 {
    if a > b {
        1
    } else {
        -1
    }
}

/// A skew-symmetric Toeplitz matrix with entries in `{-1, 0, 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SkewToeplitz {
    pub n: usize,
    pub first_row: Vec<i8>,
}

impl SkewToeplitz {
    /// Entry `(i, j)`, 0-based.
    pub fn entry(&self, i: usize, j: usize) -> i8 {
        use std::cmp::Ordering::*;
        match j.cmp(&i) {
            Greater => self.first_row[j - i],
            Less => -self.first_row[i - j],
            Equal => 0,
        }
    }

    pub fn rows(&self) -> Vec<Vec<i8>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.entry(i, j)).collect())
            .collect()
    }

    pub fn rational_rows(&self) -> Vec<Vec<Rational>> {
        self.rows()
            .into_iter()
            .map(|r| r.into_iter().map(|v| int(v as i64)).collect())
            .collect()
    }

    /// Rows of `-1/0/+1`, space separated, one per line.
    pub fn to_text(&self) -> String {
        self.rows()
            .iter()
            .map(|r| {
                r.iter()
                    .map(|v| format!("{v:>2}"))
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// The matrix `A_k` of size `n`: first row `(0, 1, .., 1, -1, .., -1)` with
/// `k` trailing `-1`.
pub fn build_a(spec: SystemSpec) -> SkewToeplitz {
    let SystemSpec { n, k } = spec;
    // 1-based: entry (1, j) = eps(n + 1, k + j)
    let first_row = (1..=n)
        .map(|j| if j == 1 { 0 } else { eps(n + 1, k + j) })
        .collect();
    SkewToeplitz { n, first_row }
}

/// The diagonal quadratic bracket `{x_i, x_j} = A_ij x_i x_j`, extended to
/// Laurent polynomials as a biderivation.
#[derive(Debug, Clone)]
pub struct PoissonStructure {
    spec: SystemSpec,
    a: Vec<Vec<i32>>,
}

impl PoissonStructure {
    pub fn new(spec: SystemSpec) -> Self {
        let a = build_a(spec)
            .rows()
            .into_iter()
            .map(|r| r.into_iter().map(i32::from).collect())
            .collect();
        PoissonStructure { spec, a }
    }

    pub fn spec(&self) -> SystemSpec {
        self.spec
    }

    pub fn matrix(&self) -> &[Vec<i32>] {
        &self.a
    }

    /// `a^T A b` for exponent vectors; `{x^a, x^b} = (a^T A b) x^(a+b)`.
    fn pairing(&self, a: &ExponentVector, b: &ExponentVector) -> i64 {
        let mut s = 0i64;
        for (i, &ai) in a.as_slice().iter().enumerate() {
            if ai == 0 {
                continue;
            }
            let row = &self.a[i];
            for (j, &bj) in b.as_slice().iter().enumerate() {
                if bj != 0 {
                    s += (ai as i64) * (row[j] as i64) * (bj as i64);
                }
            }
        }
        s
    }

    pub fn bracket(&self, f: &LaurentPolynomial, g: &LaurentPolynomial) -> Result<LaurentPolynomial> {
        let n = self.spec.n;
        for p in [f, g] {
            if p.nvars() != n {
                return Err(Error::VariableCountMismatch {
                    left: n,
                    right: p.nvars(),
                });
            }
        }
        let mut out = LaurentPolynomial::zero(n);
        for (ea, ca) in f.terms() {
            for (eb, cb) in g.terms() {
                let w = self.pairing(ea, eb);
                if w == 0 {
                    continue;
                }
                let e: Vec<i32> = ea
                    .as_slice()
                    .iter()
                    .zip(eb.as_slice())
                    .map(|(x, y)| x + y)
                    .collect();
                out.add_term(e.into(), ca * cb * int(w));
            }
        }
        Ok(out)
    }

    /// Components `{x_i, f}` of the Hamiltonian vector field of `f`.
    pub fn hamiltonian_vector_field(&self, f: &LaurentPolynomial) -> Result<Vec<LaurentPolynomial>> {
        let n = self.spec.n;
        (0..n)
            .map(|i| self.bracket(&LaurentPolynomial::var(n, i), f))
            .collect()
    }
}

pub fn bracket(f: &LaurentPolynomial, g: &LaurentPolynomial, spec: SystemSpec) -> Result<LaurentPolynomial> {
    PoissonStructure::new(spec).bracket(f, g)
}

/// Exponent vector of the Casimir monomial (n odd): ones on the first and
/// last `k` slots, alternating `+1, -1, ..., +1` in the middle block.
fn casimir_exponents(spec: SystemSpec) -> Vec<i32> {
    let SystemSpec { n, k } = spec;
    (0..n)
        .map(|i| {
            if i < k || i >= n - k || (i - k) % 2 == 0 {
                1
            } else {
                -1
            }
        })
        .collect()
}

/// The Casimir monomial of `pi_k` when `n` is odd.
pub fn casimir(spec: SystemSpec) -> Result<LaurentPolynomial> {
    if spec.n % 2 == 0 {
        return Err(Error::Unsupported(format!(
            "{spec} has even dimension; the bracket is nondegenerate"
        )));
    }
    Ok(LaurentPolynomial::unit_monomial(casimir_exponents(spec)))
}

/// Exact rank of `A_k`, and for odd `n` a verified kernel vector.
pub fn rank_and_nullvector(spec: SystemSpec) -> Result<(usize, Option<Vec<Rational>>)> {
    let a = build_a(spec).rational_rows();
    let rank = linalg::rank(&a);
    if spec.n % 2 == 0 {
        return Ok((rank, None));
    }
    let v: Vec<Rational> = casimir_exponents(spec)
        .into_iter()
        .map(|e| int(e as i64))
        .collect();
    if linalg::mat_vec(&a, &v).iter().any(|x| !num_traits::Zero::is_zero(x)) {
        return Err(Error::Consistency(format!("kernel vector fails for {spec}")));
    }
    Ok((rank, Some(v)))
}

/// Exponent images of `y_i` under the monomial map: `y_i -> P_k x_{i+k}`
/// where `P_k` is the product of the first and last `k` coordinates.
fn phi_images(spec: SystemSpec) -> Vec<Vec<i32>> {
    let SystemSpec { n, k } = spec;
    (0..spec.m())
        .map(|i| {
            let mut e = vec![0i32; n];
            for (s, slot) in e.iter_mut().enumerate() {
                if s < k || s >= n - k {
                    *slot = 1;
                }
            }
            e[i + k] += 1;
            e
        })
        .collect()
}

/// Pullback of a function on `R^(n-2k)` along the Poisson map
/// `(R^n, pi_k) -> (R^(n-2k), pi_0)`. Requires `0 < 2k < n`.
pub fn pullback_phi(f: &LaurentPolynomial, spec: SystemSpec) -> Result<LaurentPolynomial> {
    if spec.k == 0 || 2 * spec.k >= spec.n {
        return Err(Error::Unsupported(format!(
            "monomial Poisson map needs 0 < 2k < n, got {spec}"
        )));
    }
    if f.nvars() != spec.m() {
        return Err(Error::VariableCountMismatch {
            left: spec.m(),
            right: f.nvars(),
        });
    }
    Ok(f.pullback_monomial_map(&phi_images(spec), spec.n))
}

/// Same as [`pullback_phi`] but treats `k = 0` as the identity.
pub(crate) fn pullback_phi_or_identity(f: &LaurentPolynomial, spec: SystemSpec) -> Result<LaurentPolynomial> {
    if spec.k == 0 {
        if f.nvars() != spec.n {
            return Err(Error::VariableCountMismatch {
                left: spec.n,
                right: f.nvars(),
            });
        }
        return Ok(f.clone());
    }
    pullback_phi(f, spec)
}

/// Pullback along the coordinate reversal `x_i -> x_{n+1-i}`; an
/// anti-Poisson involution of every `pi_k`.
pub fn apply_psi(f: &LaurentPolynomial) -> LaurentPolynomial {
    let n = f.nvars();
    let map: Vec<usize> = (0..n).map(|i| n - 1 - i).collect();
    f.rename_vars(&map, n)
}

/// Which case of the hyperplane reduction applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ReductionCase {
    /// `k < l <= n - k`: structure index unchanged.
    Interior,
    /// `k = 0`: any position.
    Unimodular,
    /// `l = n`, `k > 0`: last variable removed, `k` drops by one.
    Last,
}

/// Restriction to the hyperplane `x_{l+1} = 0` of `R^(n+1)`.
///
/// `source` is the ambient spec `(n+1, k)`; `ell` ranges over `0..=n` and
/// counts the coordinates kept before the removed one. Returns the reduced
/// polynomial in `n` variables together with the reduced spec.
pub fn reduce_iota(
    f: &LaurentPolynomial,
    ell: usize,
    source: SystemSpec,
) -> Result<(LaurentPolynomial, SystemSpec, ReductionCase)> {
    if f.nvars() != source.n {
        return Err(Error::VariableCountMismatch {
            left: source.n,
            right: f.nvars(),
        });
    }
    if source.n < 2 {
        return Err(Error::Unsupported("cannot reduce a one-dimensional system".into()));
    }
    let n = source.n - 1;
    let k = source.k;
    if ell > n {
        return Err(Error::Unsupported(format!("position {ell} out of range for {source}")));
    }
    let (case, target) = if k == 0 {
        (ReductionCase::Unimodular, SystemSpec::new(n, 0)?)
    } else if ell == n {
        (ReductionCase::Last, SystemSpec::new(n, k - 1)?)
    } else if k < ell && ell <= n - k {
        (ReductionCase::Interior, SystemSpec::new(n, k)?)
    } else {
        return Err(Error::Unsupported(format!(
            "no reduced structure known for position {ell} in {source}"
        )));
    };
    let reduced = f.set_var_zero_and_drop(ell)?;
    Ok((reduced, target, case))
}

/// Specs visited by removing the last variable until `k = 0`.
pub fn reduction_chain(spec: SystemSpec) -> Vec<SystemSpec> {
    let mut out = Vec::new();
    let mut cur = spec;
    while cur.k > 0 {
        cur = SystemSpec {
            n: cur.n - 1,
            k: cur.k - 1,
        };
        out.push(cur);
    }
    out
}
