//! Lax triple `(X, M, B)` of the cyclic system `LV(2κ+1, κ)` and the
//! spectral invariants read off `det(X + λM - μ Id)`.
//!
//! λ and μ are carried as two extra polynomial variables appended after
//! `x_1 .. x_N`, so the whole computation stays inside
//! [`LaurentPolynomial`].

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{int, ExponentVector, LaurentPolynomial};
use crate::poisson::{build_a, SystemSpec};

/// Square matrix with Laurent-polynomial entries in a common ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    nvars: usize,
    rows: Vec<Vec<LaurentPolynomial>>,
}

impl PolyMatrix {
    pub fn zeros(size: usize, nvars: usize) -> Self {
        PolyMatrix {
            nvars,
            rows: vec![vec![LaurentPolynomial::zero(nvars); size]; size],
        }
    }

    pub fn identity(size: usize, nvars: usize) -> Self {
        let mut m = Self::zeros(size, nvars);
        for i in 0..size {
            m.rows[i][i] = LaurentPolynomial::one(nvars);
        }
        m
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPolynomial {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: LaurentPolynomial) {
        assert_eq!(v.nvars(), self.nvars);
        self.rows[i][j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(LaurentPolynomial::is_zero)
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        let n = self.size();
        let mut out = Self::zeros(n, self.nvars);
        for i in 0..n {
            for l in 0..n {
                let a = &self.rows[i][l];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.rows[l][j];
                    if !b.is_zero() {
                        out.rows[i][j] = &out.rows[i][j] + &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &PolyMatrix) -> PolyMatrix {
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect())
            .collect();
        PolyMatrix {
            nvars: self.nvars,
            rows,
        }
    }

    /// `[self, other] = self*other - other*self`.
    pub fn commutator(&self, other: &PolyMatrix) -> PolyMatrix {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn pow(&self, e: u32) -> PolyMatrix {
        (0..e).fold(Self::identity(self.size(), self.nvars), |acc, _| acc.mul(self))
    }

    /// Nonzero entries as `(row, col, entry)`, 0-based.
    pub fn nonzero_entries(&self) -> Vec<(usize, usize, &LaurentPolynomial)> {
        let mut v = Vec::new();
        for (i, r) in self.rows.iter().enumerate() {
            for (j, e) in r.iter().enumerate() {
                if !e.is_zero() {
                    v.push((i, j, e));
                }
            }
        }
        v
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(|e| e.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// The matrices `X`, `M`, `B` of size `N = 2κ+1` over `x_1 .. x_N`.
#[derive(Debug, Clone)]
pub struct LaxTriple {
    pub kappa: usize,
    pub x: PolyMatrix,
    pub m: PolyMatrix,
    pub b: PolyMatrix,
}

impl LaxTriple {
    pub fn size(&self) -> usize {
        2 * self.kappa + 1
    }
}

/// `X_{i,j} = δ_{i,j+κ} x_i`, `M_{i,j} = δ_{i+1,j}`,
/// `B = diag(-(x_i + .. + x_{i+κ}))`, all indices mod `2κ+1`.
pub fn build_lax(kappa: usize) -> Result<LaxTriple> {
    if kappa < 1 {
        return Err(Error::InvalidArgument("Lax triple needs kappa >= 1".into()));
    }
    let n = 2 * kappa + 1;
    let mut x = PolyMatrix::zeros(n, n);
    let mut m = PolyMatrix::zeros(n, n);
    let mut b = PolyMatrix::zeros(n, n);
    for i in 0..n {
        x.set(i, (i + n - kappa) % n, LaurentPolynomial::var(n, i));
        m.set(i, (i + 1) % n, LaurentPolynomial::one(n));
        let s = (0..=kappa).fold(LaurentPolynomial::zero(n), |acc, t| {
            acc + LaurentPolynomial::var(n, (i + t) % n)
        });
        b.set(i, i, -s);
    }
    Ok(LaxTriple { kappa, x, m, b })
}

/// Characteristic polynomial and the coefficient polynomials extracted
/// from it.
#[derive(Debug, Clone, Serialize)]
pub struct CharPoly {
    pub kappa: usize,
    pub zero_tail: usize,
    /// `det(X + λM - μ Id)` over `x_1..x_N, λ, μ` (tail variables set to 0).
    pub det: LaurentPolynomial,
    /// `K_0 .. K_κ` over the surviving `N - zero_tail` variables.
    pub k: Vec<LaurentPolynomial>,
}

impl CharPoly {
    /// The reduced system whose integrals the nonzero `K_i` are.
    pub fn reduced_spec(&self) -> SystemSpec {
        SystemSpec {
            n: 2 * self.kappa + 1 - self.zero_tail,
            k: self.kappa - self.zero_tail,
        }
    }

    /// Text form with `l` for λ and `u` for μ.
    pub fn det_text(&self) -> String {
        let n = 2 * self.kappa + 1;
        let s = self.det.to_string();
        s.replace(&format!("x{}", n + 2), "u").replace(&format!("x{}", n + 1), "l")
    }
}

/// Signed permutation expansion restricted to the sparsity pattern:
/// row `i` has nonzeros only in columns `i - κ`, `i + 1` and `i`.
fn sparse_determinant(kappa: usize, zero_tail: usize) -> LaurentPolynomial {
    let n = 2 * kappa + 1;
    let nv = n + 2;
    let (lam, mu) = (n, n + 1);
    // (column, exponent vector, coefficient sign)
    let mut row_entries: Vec<Vec<(usize, Vec<i32>, i64)>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut v = Vec::new();
        if i < n - zero_tail {
            let mut e = vec![0; nv];
            e[i] = 1;
            v.push(((i + n - kappa) % n, e, 1));
        }
        let mut e = vec![0; nv];
        e[lam] = 1;
        v.push(((i + 1) % n, e, 1));
        let mut e = vec![0; nv];
        e[mu] = 1;
        v.push((i, e, -1));
        row_entries.push(v);
    }

    fn rec(
        row: usize,
        rows: &[Vec<(usize, Vec<i32>, i64)>],
        used: &mut Vec<bool>,
        perm: &mut Vec<usize>,
        exps: &mut Vec<i32>,
        coeff: i64,
        out: &mut LaurentPolynomial,
    ) {
        if row == rows.len() {
            let mut inversions = 0;
            for a in 0..perm.len() {
                for b in a + 1..perm.len() {
                    if perm[a] > perm[b] {
                        inversions += 1;
                    }
                }
            }
            let sign = if inversions % 2 == 0 { 1 } else { -1 };
            out.add_term(ExponentVector::from(exps.clone()), int(sign * coeff));
            return;
        }
        for (col, e, c) in &rows[row] {
            if used[*col] {
                continue;
            }
            used[*col] = true;
            perm.push(*col);
            for (s, d) in exps.iter_mut().zip(e) {
                *s += d;
            }
            rec(row + 1, rows, used, perm, exps, coeff * c, out);
            for (s, d) in exps.iter_mut().zip(e) {
                *s -= d;
            }
            perm.pop();
            used[*col] = false;
        }
    }

    let mut out = LaurentPolynomial::zero(nv);
    rec(
        0,
        &row_entries,
        &mut vec![false; n],
        &mut Vec::with_capacity(n),
        &mut vec![0; nv],
        1,
        &mut out,
    );
    out
}

/// Computes `det(X + λM - μ Id)` with the last `zero_tail` variables set to
/// zero, checks that it equals `λ^N - μ^N + Σ K_i λ^(κ-i) μ^(κ-i)` with
/// `K_i` homogeneous of degree `2i+1`, and returns the `K_i`.
pub fn char_poly_k(kappa: usize, zero_tail: usize) -> Result<CharPoly> {
    if kappa < 1 {
        return Err(Error::InvalidArgument("kappa must be at least 1".into()));
    }
    if zero_tail > kappa {
        return Err(Error::InvalidArgument(format!(
            "zero tail {zero_tail} exceeds kappa {kappa}"
        )));
    }
    let n = 2 * kappa + 1;
    let kept = n - zero_tail;
    let det = sparse_determinant(kappa, zero_tail);

    let mut k: Vec<LaurentPolynomial> = vec![LaurentPolynomial::zero(kept); kappa + 1];
    let (mut saw_lam, mut saw_mu) = (false, false);
    for (e, c) in det.terms() {
        let (a, b) = (e[n], e[n + 1]);
        let xs = &e.as_slice()[..n];
        let xdeg: i32 = xs.iter().sum();
        let fail = |detail: &str| Error::StructuralFailure {
            lambda: a,
            mu: b,
            detail: format!("{detail} (coefficient {c})"),
        };
        if a == n as i32 && b == 0 {
            if xdeg != 0 || *c != int(1) {
                return Err(fail("leading lambda term must be exactly lambda^N"));
            }
            saw_lam = true;
        } else if a == 0 && b == n as i32 {
            if xdeg != 0 || *c != int(-1) {
                return Err(fail("leading mu term must be exactly -mu^N"));
            }
            saw_mu = true;
        } else {
            if a != b || a < 0 || a as usize > kappa {
                return Err(fail("mixed term must carry equal powers of lambda and mu"));
            }
            let i = kappa - a as usize;
            if xdeg != 2 * i as i32 + 1 {
                return Err(fail("coefficient polynomial has the wrong degree"));
            }
            if xs[kept..].iter().any(|&v| v != 0) {
                return Err(fail("zeroed variable survived"));
            }
            k[i].add_term(ExponentVector::from(xs[..kept].to_vec()), c.clone());
        }
    }
    if !saw_lam || !saw_mu {
        return Err(Error::StructuralFailure {
            lambda: n as i32,
            mu: n as i32,
            detail: "missing a pure lambda^N or mu^N term".into(),
        });
    }
    Ok(CharPoly {
        kappa,
        zero_tail,
        det,
        k,
    })
}

/// `R1 = [M, B] - [X, M^(κ+1)]` and `R2 = Ẋ - [X, B]` with `Ẋ` taken from
/// the vector field of `LV(2κ+1, κ)`. Both vanish identically.
pub fn lax_residual(kappa: usize) -> Result<(PolyMatrix, PolyMatrix)> {
    let lax = build_lax(kappa)?;
    let n = lax.size();
    let r1 = lax
        .m
        .commutator(&lax.b)
        .sub(&lax.x.commutator(&lax.m.pow(kappa as u32 + 1)));

    let a = build_a(SystemSpec { n, k: kappa }).rows();
    let mut xdot = PolyMatrix::zeros(n, n);
    for i in 0..n {
        let xi = LaurentPolynomial::var(n, i);
        let rate = (0..n).fold(LaurentPolynomial::zero(n), |acc, j| {
            if a[i][j] == 0 {
                acc
            } else {
                acc + (&xi * &LaurentPolynomial::var(n, j)).scale(&int(a[i][j] as i64))
            }
        });
        xdot.set(i, (i + n - kappa) % n, rate);
    }
    let r2 = xdot.sub(&lax.x.commutator(&lax.b));
    Ok((r1, r2))
}
