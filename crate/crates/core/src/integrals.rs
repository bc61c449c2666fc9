//! Polynomial and rational first integrals of `LV(n, k)`.
//!
//! The polynomial integrals `K_i` are sums of coefficient-one monomials
//! `x_{m_1} ... x_{m_{2i+1}}` over the index sets `S_i^(n,k)`: increasing
//! tuples whose principal submatrix of `A_k` equals `A_i` of size `2i+1`.
//! The rational integrals `H_l` are pullbacks of the rational integrals of
//! `LV(n-2k, 0)` along the monomial Poisson map.

use std::fmt;

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{ExponentVector, LaurentPolynomial, Rational};
use crate::poisson::{self, build_a, SystemSpec};

/// Strictly increasing tuple of 1-based indices, of odd length `2i+1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct IndexTuple(Vec<usize>);

impl IndexTuple {
    pub fn new(entries: Vec<usize>) -> Result<Self> {
        if entries.len() % 2 == 0 {
            return Err(Error::InvalidArgument("index tuple must have odd length".into()));
        }
        if entries.first() == Some(&0) || entries.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(format!(
                "index tuple {entries:?} is not strictly increasing in 1.."
            )));
        }
        Ok(IndexTuple(entries))
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    /// `i` for a tuple of length `2i+1`.
    pub fn half_len(&self) -> usize {
        self.0.len() / 2
    }

    pub fn middle(&self) -> usize {
        self.0[self.half_len()]
    }

    /// The tuple with its middle entry removed.
    pub fn hat(&self) -> Vec<usize> {
        let i = self.half_len();
        self.0
            .iter()
            .enumerate()
            .filter(|&(s, _)| s != i)
            .map(|(_, &v)| v)
            .collect()
    }

    pub fn with_middle(&self, middle: usize) -> Vec<usize> {
        let mut v = self.0.clone();
        let i = self.half_len();
        v[i] = middle;
        v
    }

    pub fn contains(&self, j: usize) -> bool {
        self.0.contains(&j)
    }

    pub fn monomial(&self, n: usize) -> LaurentPolynomial {
        let mut e = vec![0i32; n];
        for &m in &self.0 {
            e[m - 1] += 1;
        }
        LaurentPolynomial::unit_monomial(e)
    }
}

impl fmt::Display for IndexTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnumerationMethod {
    /// Interval-pruned search driven by the defining inequalities.
    Inequalities,
    /// Every increasing tuple, compared against `A_i` as a submatrix.
    Submatrix,
}

/// Membership test via the inequalities: for `s = 1..i`,
/// `m_{i+s} < m_s + n - k <= m_{i+s+1}`, and `m_{2i+1} < m_{i+1} + n - k`.
pub fn satisfies_inequalities(spec: SystemSpec, m: &[usize]) -> bool {
    if m.len() % 2 == 0 || m.windows(2).any(|w| w[0] >= w[1]) {
        return false;
    }
    if m.first() == Some(&0) || m.last().is_some_and(|&v| v > spec.n) {
        return false;
    }
    let i = m.len() / 2;
    let w = spec.n - spec.k;
    // 0-based: m[s-1] is m_s
    for s in 1..=i {
        if !(m[i + s - 1] < m[s - 1] + w && m[s - 1] + w <= m[i + s]) {
            return false;
        }
    }
    m[2 * i] < m[i] + w
}

fn is_submatrix_match(a: &[Vec<i8>], target: &[Vec<i8>], m: &[usize]) -> bool {
    for s in 0..m.len() {
        for t in s + 1..m.len() {
            if a[m[s] - 1][m[t] - 1] != target[s][t] {
                return false;
            }
        }
    }
    true
}

fn enumerate_by_inequalities(spec: SystemSpec, i: usize) -> Vec<IndexTuple> {
    let n = spec.n;
    let w = n - spec.k;
    let len = 2 * i + 1;
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::with_capacity(len);

    fn rec(n: usize, w: usize, i: usize, len: usize, cur: &mut Vec<usize>, out: &mut Vec<IndexTuple>) {
        let p = cur.len() + 1; // 1-based position being filled
        if p > len {
            out.push(IndexTuple(cur.clone()));
            return;
        }
        let mut lo = cur.last().map_or(1, |&v| v + 1);
        if p >= i + 2 {
            lo = lo.max(cur[p - i - 2] + w);
        }
        let mut hi = n - (len - p);
        if i > 0 && p > i {
            hi = hi.min(cur[p - i - 1] + w - 1);
        }
        for v in lo..=hi {
            cur.push(v);
            rec(n, w, i, len, cur, out);
            cur.pop();
        }
    }

    rec(n, w, i, len, &mut cur, &mut out);
    out
}

fn enumerate_by_submatrix(spec: SystemSpec, i: usize) -> Vec<IndexTuple> {
    let a = build_a(spec).rows();
    let target = build_a(SystemSpec { n: 2 * i + 1, k: i }).rows();
    (1..=spec.n)
        .combinations(2 * i + 1)
        .filter(|m| is_submatrix_match(&a, &target, m))
        .map(IndexTuple)
        .collect()
}

/// The set `S_i^(n,k)` in lexicographic order; empty when `i > k`.
pub fn enumerate_s(spec: SystemSpec, i: usize, method: EnumerationMethod) -> Vec<IndexTuple> {
    if i > spec.k {
        return Vec::new();
    }
    let mut v = match method {
        EnumerationMethod::Inequalities => enumerate_by_inequalities(spec, i),
        EnumerationMethod::Submatrix => enumerate_by_submatrix(spec, i),
    };
    v.sort();
    v
}

/// `K_i^(n,k)`, homogeneous of degree `2i+1`; `K_0 = H`.
pub fn k_poly(spec: SystemSpec, i: usize) -> Result<LaurentPolynomial> {
    if i > spec.k {
        return Err(Error::InvalidArgument(format!(
            "K_{i} requested for {spec}; index must be at most k"
        )));
    }
    Ok(polynomial_from_tuples(
        spec.n,
        &enumerate_s(spec, i, EnumerationMethod::Inequalities),
    ))
}

fn polynomial_from_tuples(n: usize, tuples: &[IndexTuple]) -> LaurentPolynomial {
    LaurentPolynomial::from_terms(
        n,
        tuples.iter().map(|t| {
            let mut e = vec![0i32; n];
            for &m in t.entries() {
                e[m - 1] += 1;
            }
            (ExponentVector::from(e), Rational::from_integer(1.into()))
        }),
    )
}

pub fn hamiltonian(n: usize) -> LaurentPolynomial {
    (0..n).fold(LaurentPolynomial::zero(n), |acc, i| {
        acc + LaurentPolynomial::var(n, i)
    })
}

/// Index shift used for the cyclic symmetry at `n = 2k+1`: add one to every
/// entry, wrapping a final `n` around to the front as `1`.
pub fn cyclic_shift_tuple(t: &IndexTuple, n: usize) -> IndexTuple {
    let e = t.entries();
    if *e.last().expect("nonempty") < n {
        IndexTuple(e.iter().map(|m| m + 1).collect())
    } else {
        let mut v = vec![1];
        v.extend(e[..e.len() - 1].iter().map(|m| m + 1));
        IndexTuple(v)
    }
}

/// Pullback along the cyclic permutation `x_i -> x_{i+1}` (indices mod n).
pub fn cyclic_permute(f: &LaurentPolynomial) -> LaurentPolynomial {
    let n = f.nvars();
    let map: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    f.rename_vars(&map, n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BaseKind {
    F,
    /// Image of an `F` under coordinate reversal.
    G,
}

/// A rational integral of `LV(m, 0)` in factored form: a partial sum of
/// coordinates times a degree-zero Laurent monomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BaseIntegral {
    pub kind: BaseKind,
    /// 1-based index within its family.
    pub index: usize,
    /// 0-based coordinates appearing in the partial sum.
    pub sum_vars: Vec<usize>,
    /// Exponents of the monomial factor.
    pub ratio: Vec<i32>,
}

impl BaseIntegral {
    fn f(m: usize, l: usize) -> Self {
        let len = if m % 2 == 1 { 2 * l - 1 } else { 2 * l };
        let ratio = (0..m)
            .map(|t| {
                if t < len {
                    0
                } else if (t + 1 - len) % 2 == 1 {
                    -1
                } else {
                    1
                }
            })
            .collect();
        BaseIntegral {
            kind: BaseKind::F,
            index: l,
            sum_vars: (0..len).collect(),
            ratio,
        }
    }

    fn reversed(&self) -> Self {
        let m = self.ratio.len();
        let mut sum_vars: Vec<usize> = self.sum_vars.iter().map(|&v| m - 1 - v).collect();
        sum_vars.sort();
        BaseIntegral {
            kind: BaseKind::G,
            index: self.index,
            sum_vars,
            ratio: self.ratio.iter().rev().copied().collect(),
        }
    }

    pub fn label(&self) -> String {
        format!("{:?}{}", self.kind, self.index)
    }

    pub fn to_poly(&self) -> LaurentPolynomial {
        let m = self.ratio.len();
        let mut p = LaurentPolynomial::zero(m);
        for &v in &self.sum_vars {
            let mut e = self.ratio.clone();
            e[v] += 1;
            p.add_term(e.into(), Rational::from_integer(1.into()));
        }
        p
    }
}

/// The `m - 1` rational integrals of `LV(m, 0)` in their canonical order
/// (`F_1, F_2..F_{r-1}, G_2..G_{r-1}, F_r` for odd `m`;
/// `F_1..F_{r-1}, G_1..G_{r-1}, F_r` for even `m`). The last one is the
/// Hamiltonian.
pub fn base_rational_structure(m: usize) -> Result<Vec<BaseIntegral>> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!(
            "rational integrals need m >= 2, got {m}"
        )));
    }
    let r = (m + 1) / 2;
    let f: Vec<BaseIntegral> = (1..=r).map(|l| BaseIntegral::f(m, l)).collect();
    let mut out = Vec::with_capacity(m - 1);
    if m % 2 == 1 {
        out.push(f[0].clone());
        out.extend(f[1..r - 1].iter().cloned());
        out.extend(f[1..r - 1].iter().map(BaseIntegral::reversed));
    } else {
        out.extend(f[..r - 1].iter().cloned());
        out.extend(f[..r - 1].iter().map(BaseIntegral::reversed));
    }
    out.push(f[r - 1].clone());
    debug_assert_eq!(out.len(), m - 1);
    Ok(out)
}

pub fn base_rational_integrals(m: usize) -> Result<Vec<LaurentPolynomial>> {
    Ok(base_rational_structure(m)?
        .iter()
        .map(BaseIntegral::to_poly)
        .collect())
}

/// `H_l^(n,k)` with its factorization `H_l = hat * (partial sum)`.
#[derive(Debug, Clone, Serialize)]
pub struct RationalIntegral {
    /// Label of the base function it was pulled back from (`F2`, `G1`, ...).
    pub source: String,
    pub poly: LaurentPolynomial,
    /// The cofactor `Ĥ_l`.
    pub hat: LaurentPolynomial,
    /// 0-based coordinates in the partial sum; `shift` is its length.
    pub sum_vars: Vec<usize>,
    /// Constant `p_l` with `∂(H_l - p_l H)/∂x_j(1) = 0` for `j <= k`.
    pub shift: i64,
}

fn lift_base(spec: SystemSpec, b: &BaseIntegral) -> RationalIntegral {
    let SystemSpec { n, k } = spec;
    let mut hat_e = vec![0i32; n];
    for (s, slot) in hat_e.iter_mut().enumerate() {
        if s < k || s >= n - k {
            *slot = 1;
        }
    }
    for (t, &e) in b.ratio.iter().enumerate() {
        hat_e[t + k] += e;
    }
    let hat = LaurentPolynomial::unit_monomial(hat_e);
    let sum_vars: Vec<usize> = b.sum_vars.iter().map(|v| v + k).collect();
    let sum = sum_vars
        .iter()
        .fold(LaurentPolynomial::zero(n), |acc, &v| acc + LaurentPolynomial::var(n, v));
    RationalIntegral {
        source: b.label(),
        poly: &hat * &sum,
        hat,
        shift: sum_vars.len() as i64,
        sum_vars,
    }
}

fn rational_integrals(spec: SystemSpec) -> Result<(Vec<RationalIntegral>, Option<LaurentPolynomial>)> {
    if spec.m() < 2 {
        return Ok((Vec::new(), None));
    }
    let base = base_rational_structure(spec.m())?;
    let mut lifted: Vec<RationalIntegral> = base.iter().map(|b| lift_base(spec, b)).collect();
    let excluded = lifted.pop().map(|r| r.poly);
    Ok((lifted, excluded))
}

/// The `n - 2k - 2` rational integrals `H_1 .. H_{n-2k-2}` (empty when
/// `n <= 2k + 2`).
pub fn h_list(spec: SystemSpec) -> Result<Vec<LaurentPolynomial>> {
    Ok(rational_integrals(spec)?.0.into_iter().map(|r| r.poly).collect())
}

/// Pullback of the base Hamiltonian, left out of [`h_list`] because it
/// coincides with `K_k`. `None` when `n = 2k + 1`.
pub fn excluded_pullback(spec: SystemSpec) -> Result<Option<LaurentPolynomial>> {
    Ok(rational_integrals(spec)?.1)
}

/// Constants `(p, q)`: `p_l` is the length of the partial sum in `H_l`,
/// `q_i` the number of monomials of `K_i` (`i = 1..k`) through a middle
/// variable `x_j`, `k < j <= n - k`, checked to be independent of `j`.
pub fn shift_constants(spec: SystemSpec) -> Result<(Vec<i64>, Vec<i64>)> {
    let p = rational_integrals(spec)?.0.iter().map(|r| r.shift).collect();
    let q = (1..=spec.k)
        .map(|i| middle_count(spec, i))
        .collect::<Result<Vec<_>>>()?;
    Ok((p, q))
}

fn middle_count(spec: SystemSpec, i: usize) -> Result<i64> {
    let set = enumerate_s(spec, i, EnumerationMethod::Inequalities);
    let counts: Vec<usize> = (spec.k + 1..=spec.n - spec.k)
        .map(|j| set.iter().filter(|t| t.contains(j)).count())
        .collect();
    match counts.first() {
        Some(&c) if counts.iter().all(|&x| x == c) => Ok(c as i64),
        Some(_) => Err(Error::Consistency(format!(
            "middle-variable counts of K_{i} in {spec} depend on j: {counts:?}"
        ))),
        None => Err(Error::Consistency(format!("{spec} has no middle variables"))),
    }
}

/// All first integrals of `LV(n, k)` with the auxiliary data used by the
/// independence argument.
#[derive(Debug, Clone, Serialize)]
pub struct IntegralFamily {
    pub spec: SystemSpec,
    /// `K_0 .. K_k`.
    pub polys: Vec<LaurentPolynomial>,
    /// `H_1 .. H_{n-2k-2}`.
    pub rationals: Vec<RationalIntegral>,
    pub casimir: Option<LaurentPolynomial>,
    /// `q_1 .. q_k`.
    pub q: Vec<i64>,
}

impl IntegralFamily {
    pub fn build(spec: SystemSpec) -> Result<Self> {
        let polys = (0..=spec.k)
            .map(|i| k_poly(spec, i))
            .collect::<Result<Vec<_>>>()?;
        let (rationals, _) = rational_integrals(spec)?;
        let casimir = if spec.n % 2 == 1 {
            Some(poisson::casimir(spec)?)
        } else {
            None
        };
        let (_, q) = shift_constants(spec)?;
        Ok(IntegralFamily {
            spec,
            polys,
            rationals,
            casimir,
            q,
        })
    }

    pub fn p(&self) -> Vec<i64> {
        self.rationals.iter().map(|r| r.shift).collect()
    }

    pub fn h(&self) -> Vec<&LaurentPolynomial> {
        self.rationals.iter().map(|r| &r.poly).collect()
    }

    /// Number of first integrals `K_*` and `H_*` (the Casimir is not counted).
    pub fn len(&self) -> usize {
        self.polys.len() + self.rationals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `K0.., H1.., C` with their polynomials, in that order.
    pub fn named(&self) -> Vec<(String, &LaurentPolynomial)> {
        let mut v: Vec<(String, &LaurentPolynomial)> = self
            .polys
            .iter()
            .enumerate()
            .map(|(i, p)| (format!("K{i}"), p))
            .collect();
        v.extend(
            self.rationals
                .iter()
                .enumerate()
                .map(|(l, r)| (format!("H{}", l + 1), &r.poly)),
        );
        if let Some(c) = &self.casimir {
            v.push(("C".to_string(), c));
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poisson::{apply_psi, pullback_phi};

    fn spec(n: usize, k: usize) -> SystemSpec {
        SystemSpec::new(n, k).unwrap()
    }

    fn tuples(v: &[&[usize]]) -> Vec<IndexTuple> {
        v.iter().map(|t| IndexTuple::new(t.to_vec()).unwrap()).collect()
    }

    fn lp(n: usize, s: &str) -> LaurentPolynomial {
        LaurentPolynomial::parse(n, s).unwrap()
    }

    /// Every increasing triple of 1..=n, tested against the submatrix
    /// definition directly.
    fn brute_triples(s: SystemSpec) -> Vec<Vec<usize>> {
        let a = build_a(s).rows();
        let t = build_a(SystemSpec { n: 3, k: 1 }).rows();
        let mut out = Vec::new();
        for x in 1..=s.n {
            for y in x + 1..=s.n {
                for z in y + 1..=s.n {
                    let m = [x, y, z];
                    if (0..3).all(|p| (0..3).all(|q| a[m[p] - 1][m[q] - 1] == t[p][q])) {
                        out.push(m.to_vec());
                    }
                }
            }
        }
        out
    }

    #[test]
    fn s1_examples_against_brute_force() {
        let s52 = brute_triples(spec(5, 2));
        assert_eq!(
            s52,
            vec![vec![1, 2, 4], vec![1, 3, 4], vec![1, 3, 5], vec![2, 3, 5], vec![2, 4, 5]]
        );
        let s51 = brute_triples(spec(5, 1));
        assert_eq!(s51, vec![vec![1, 2, 5], vec![1, 3, 5], vec![1, 4, 5]]);
        for method in [EnumerationMethod::Inequalities, EnumerationMethod::Submatrix] {
            assert_eq!(
                enumerate_s(spec(5, 2), 1, method),
                tuples(&[&[1, 2, 4], &[1, 3, 4], &[1, 3, 5], &[2, 3, 5], &[2, 4, 5]])
            );
            assert_eq!(
                enumerate_s(spec(5, 1), 1, method),
                tuples(&[&[1, 2, 5], &[1, 3, 5], &[1, 4, 5]])
            );
        }
    }

    #[test]
    fn s0_and_top() {
        for s in [spec(4, 1), spec(7, 2), spec(9, 0)] {
            let v = enumerate_s(s, 0, EnumerationMethod::Inequalities);
            assert_eq!(v.len(), s.n);
        }
        for k in 1..5 {
            let s = spec(2 * k + 1, k);
            assert_eq!(
                enumerate_s(s, k, EnumerationMethod::Inequalities),
                vec![IndexTuple((1..=2 * k + 1).collect())]
            );
        }
        assert!(enumerate_s(spec(7, 1), 2, EnumerationMethod::Inequalities).is_empty());
        assert!(k_poly(spec(7, 1), 2).is_err());
    }

    #[test]
    fn k_examples() {
        assert_eq!(k_poly(spec(6, 2), 0).unwrap(), hamiltonian(6));
        assert_eq!(k_poly(spec(5, 1), 1).unwrap(), lp(5, "x1*x5*x2 + x1*x5*x3 + x1*x5*x4"));
        assert_eq!(k_poly(spec(5, 2), 2).unwrap(), lp(5, "x1*x2*x3*x4*x5"));
    }

    #[test]
    fn k1_51_derivative_at_ones() {
        let k1 = k_poly(spec(5, 1), 1).unwrap();
        let d = k1.partial_derivative(1).unwrap();
        assert_eq!(d.evaluate(&vec![Rational::from_integer(1.into()); 5]).unwrap(), Rational::from_integer(1.into()));
    }

    #[test]
    fn base_examples() {
        let b3 = base_rational_integrals(3).unwrap();
        assert_eq!(b3, vec![lp(3, "x1*x3*x2^-1"), lp(3, "x1 + x2 + x3")]);
        let b5 = base_rational_structure(5).unwrap();
        let labels: Vec<String> = b5.iter().map(BaseIntegral::label).collect();
        assert_eq!(labels, ["F1", "F2", "G2", "F3"]);
        assert_eq!(b5[1].to_poly(), lp(5, "x1*x5*x4^-1 + x2*x5*x4^-1 + x3*x5*x4^-1"));
        let b6 = base_rational_structure(6).unwrap();
        let labels: Vec<String> = b6.iter().map(BaseIntegral::label).collect();
        assert_eq!(labels, ["F1", "F2", "G1", "G2", "F3"]);
        for m in 2..10 {
            let b = base_rational_integrals(m).unwrap();
            assert_eq!(b.len(), m - 1);
            assert_eq!(b.last().unwrap(), &hamiltonian(m));
        }
        assert!(base_rational_integrals(1).is_err());
    }

    #[test]
    fn g_is_reversal_of_f() {
        for m in 2..10 {
            let r = (m + 1) / 2;
            for l in 1..=r {
                let f = BaseIntegral::f(m, l);
                assert_eq!(f.reversed().to_poly(), apply_psi(&f.to_poly()));
            }
            if m % 2 == 1 {
                assert_eq!(BaseIntegral::f(m, 1).to_poly(), BaseIntegral::f(m, 1).reversed().to_poly());
            }
        }
    }

    #[test]
    fn h_list_examples() {
        assert_eq!(h_list(spec(5, 1)).unwrap(), vec![poisson::casimir(spec(5, 1)).unwrap()]);
        assert_eq!(h_list(spec(7, 1)).unwrap()[0], lp(7, "x1*x2*x7*x4*x6*x3^-1*x5^-1"));
        assert_eq!(
            excluded_pullback(spec(5, 1)).unwrap().unwrap(),
            k_poly(spec(5, 1), 1).unwrap()
        );
        assert!(h_list(spec(6, 2)).unwrap().is_empty());
        assert!(h_list(spec(5, 2)).unwrap().is_empty());
        assert_eq!(h_list(spec(9, 1)).unwrap().len(), 5);
    }

    #[test]
    fn factorization_matches_pullback() {
        for s in SystemSpec::all_up_to(2, 11) {
            if s.m() < 2 {
                continue;
            }
            let (lifted, excluded) = rational_integrals(s).unwrap();
            let base = base_rational_integrals(s.m()).unwrap();
            for (r, b) in lifted.iter().zip(&base) {
                let pulled = poisson::pullback_phi_or_identity(b, s).unwrap();
                assert_eq!(r.poly, pulled, "{s} {}", r.source);
                if s.k > 0 {
                    assert_eq!(pullback_phi(b, s).unwrap(), pulled);
                }
            }
            assert_eq!(excluded.unwrap(), k_poly(s, s.k).unwrap());
        }
    }

    #[test]
    fn shift_constant_examples() {
        let (p, q) = shift_constants(spec(7, 1)).unwrap();
        // H_1 = F_1, H_2 = F_2, H_3 = G_2 pulled back
        assert_eq!(p, vec![1, 3, 3]);
        assert_eq!(q, vec![1]);
        assert_eq!(shift_constants(spec(5, 1)).unwrap().1, vec![1]);
        assert_eq!(shift_constants(spec(5, 2)).unwrap().1, vec![3, 1]);
        let (p, _) = shift_constants(spec(8, 1)).unwrap();
        assert_eq!(p, vec![2, 4, 2, 4]);
    }

    #[test]
    fn family_counts() {
        for s in SystemSpec::all_up_to(2, 11) {
            let fam = IntegralFamily::build(s).unwrap();
            if s.is_interior() {
                assert_eq!(fam.len(), s.n - s.k - 1, "{s}");
            } else {
                assert_eq!(fam.len(), s.k + 1);
            }
            for (i, k) in fam.polys.iter().enumerate() {
                assert!(k.is_homogeneous_of_degree(2 * i as i64 + 1));
                assert!(k.terms().all(|(_, c)| *c == Rational::from_integer(1.into())));
            }
        }
    }

    #[test]
    fn cyclic_shift_wraps() {
        let t = IndexTuple::new(vec![1, 3, 5]).unwrap();
        assert_eq!(cyclic_shift_tuple(&t, 5).entries(), &[1, 2, 4]);
        let t = IndexTuple::new(vec![1, 2, 4]).unwrap();
        assert_eq!(cyclic_shift_tuple(&t, 5).entries(), &[2, 3, 5]);
    }

    #[test]
    fn bad_tuples_rejected() {
        assert!(IndexTuple::new(vec![1, 2]).is_err());
        assert!(IndexTuple::new(vec![2, 1, 3]).is_err());
        assert!(IndexTuple::new(vec![0]).is_err());
    }
}
