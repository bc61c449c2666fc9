//! The counts `σ^(k)_{i,j} = #Ŝ^(2k+1,k)_{i,j}` behind the independence
//! argument, their recurrences and closed forms, and the lift `ρ`.
//!
//! `Ŝ_i` is the set of tuples of `S_i` with the middle entry erased and
//! `Ŝ_{i,j}` the subset whose first `i` entries contain `j`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::{binomial, Integer};
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::Rational;
use crate::integrals::{enumerate_s, k_poly, satisfies_inequalities, EnumerationMethod, IndexTuple};
use crate::poisson::SystemSpec;
use crate::report::VerificationReport;

/// Largest `k` accepted by the public entry points; keeps every table entry
/// inside `u64`.
pub const MAX_K: usize = 30;

/// Brute enumeration becomes slow past this size and is skipped in reports.
pub const BRUTE_MAX_K: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SigmaMethod {
    /// Count erased-middle tuples of `S_i^(2k+1,k)` directly.
    Brute,
    /// Sum of `(m_2-m_1)...(m_i-m_{i-1})(k+1-m_i)` over `i`-subsets of
    /// `{1..k}` containing `j`.
    WeightedSum,
    /// `binom(k+i-1, 2i-1)`; first column only.
    ClosedRow1,
}

/// Weighted sum by dynamic programming over the last chosen element.
/// Total: zero whenever the indices are out of range.
pub(crate) fn weighted(k: usize, i: usize, j: usize) -> BigInt {
    if i == 0 || i > k || j == 0 || j > k {
        return BigInt::zero();
    }
    // dp[m][h]: weight of chains ending at m, h = whether j was used
    let mut dp = vec![[BigInt::zero(), BigInt::zero()]; k + 1];
    for (m, slot) in dp.iter_mut().enumerate().skip(1) {
        slot[usize::from(m == j)] = BigInt::from(1);
    }
    for _ in 1..i {
        let mut next = vec![[BigInt::zero(), BigInt::zero()]; k + 1];
        for m in 1..=k {
            for h in 0..2 {
                if dp[m][h].is_zero() {
                    continue;
                }
                for m2 in m + 1..=k {
                    let h2 = usize::from(h == 1 || m2 == j);
                    next[m2][h2] += &dp[m][h] * BigInt::from(m2 - m);
                }
            }
        }
        dp = next;
    }
    (1..=k).map(|m| &dp[m][1] * BigInt::from(k + 1 - m)).sum()
}

fn brute(k: usize, i: usize, j: usize) -> BigInt {
    let spec = SystemSpec { n: 2 * k + 1, k };
    let hats: BTreeSet<Vec<usize>> = enumerate_s(spec, i, EnumerationMethod::Inequalities)
        .iter()
        .map(IndexTuple::hat)
        .collect();
    BigInt::from(hats.iter().filter(|h| h[..i].contains(&j)).count())
}

fn closed_row1(k: usize, i: usize) -> BigInt {
    binomial(BigInt::from(k + i - 1), BigInt::from(2 * i - 1))
}

fn check_range(k: usize, i: usize, j: usize) -> Result<()> {
    if k == 0 || k > MAX_K {
        return Err(Error::InvalidArgument(format!("k must lie in 1..={MAX_K}, got {k}")));
    }
    if !(1..=k).contains(&i) || !(1..=k).contains(&j) {
        return Err(Error::InvalidArgument(format!(
            "sigma indices (i, j) = ({i}, {j}) out of range 1..={k}"
        )));
    }
    Ok(())
}

fn to_u64(v: BigInt) -> Result<u64> {
    v.to_u64()
        .ok_or_else(|| Error::Unsupported(format!("sigma value {v} exceeds u64")))
}

/// `σ^(k)_{i,j}` by the requested method.
pub fn sigma(k: usize, i: usize, j: usize, method: SigmaMethod) -> Result<u64> {
    check_range(k, i, j)?;
    let v = match method {
        SigmaMethod::Brute => brute(k, i, j),
        SigmaMethod::WeightedSum => weighted(k, i, j),
        SigmaMethod::ClosedRow1 => {
            if j != 1 {
                return Err(Error::InvalidArgument(
                    "the closed binomial form only covers j = 1".into(),
                ));
            }
            closed_row1(k, i)
        }
    };
    to_u64(v)
}

/// The `k × k` table `σ^(k)_{i,j}`, rows indexed by `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SigmaTable {
    pub k: usize,
    pub values: Vec<Vec<u64>>,
}

impl SigmaTable {
    pub fn compute(k: usize, method: SigmaMethod) -> Result<Self> {
        if method == SigmaMethod::ClosedRow1 {
            return Err(Error::InvalidArgument(
                "a full table needs the brute or weighted-sum method".into(),
            ));
        }
        check_range(k, 1, 1)?;
        let values = (1..=k)
            .map(|i| (1..=k).map(|j| sigma(k, i, j, method)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(SigmaTable { k, values })
    }

    /// `σ_{i,j}` with 1-based indices.
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.values[i - 1][j - 1]
    }
}

impl fmt::Display for SigmaTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self
            .values
            .iter()
            .flatten()
            .map(|v| v.to_string().len())
            .max()
            .unwrap_or(1);
        for row in &self.values {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:>w$}")).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// `(1/(2i-2)!) * prod_{s=1-i}^{i-2} (2j-k+s)`, or `None` if the division
/// is not exact.
pub fn difference_product(k: usize, i: usize, j: usize) -> Option<BigInt> {
    let x = 2 * j as i64 - k as i64;
    let prod: BigInt = (1 - i as i64..=i as i64 - 2).map(|s| BigInt::from(x + s)).product();
    let fact: BigInt = (1..=2 * i as i64 - 2).map(BigInt::from).product();
    let (q, r) = prod.div_rem(&fact);
    r.is_zero().then_some(q)
}

/// The same difference as a binomial coefficient, split on the sign of
/// `2j-k+i-2`.
pub fn difference_binomial(k: usize, i: usize, j: usize) -> BigInt {
    let top = 2 * j as i64 - k as i64 + i as i64 - 2;
    let bottom = BigInt::from(2 * i - 2);
    let top = if top >= 0 {
        top
    } else {
        -2 * j as i64 + k as i64 + i as i64 - 1
    };
    if top < 2 * i as i64 - 2 {
        return BigInt::zero();
    }
    binomial(BigInt::from(top), bottom)
}

/// Whether `σ_{i,j} = σ_{i,j+1}` is predicted, i.e.
/// `floor((k-i+3)/2) <= j < floor((k+i+1)/2)`.
pub fn on_plateau(k: usize, i: usize, j: usize) -> bool {
    (k + 3 - i) / 2 <= j && j < (k + i + 1) / 2
}

/// Checks every identity satisfied by the `σ^(k)` table. Brute agreement is
/// included for `k <= BRUTE_MAX_K`.
pub fn sigma_identity_checks(k: usize) -> VerificationReport {
    let spec = SystemSpec { n: 2 * k + 1, k };
    let mut r = VerificationReport::new("sigma", spec);
    if k == 0 || k > MAX_K {
        r.error("range", format!("k must lie in 1..={MAX_K}"));
        return r;
    }
    let s = |kk: usize, i: usize, j: usize| weighted(kk, i, j);
    let mismatches = |f: &dyn Fn(usize) -> Option<String>, js: std::ops::RangeInclusive<usize>| {
        js.filter_map(f).collect::<Vec<_>>().join("; ")
    };

    for i in 1..=k {
        if k <= BRUTE_MAX_K {
            let w = mismatches(
                &|j| {
                    let (a, b) = (brute(k, i, j), s(k, i, j));
                    (a != b).then(|| format!("(k,i,j)=({k},{i},{j}) brute {a} weighted {b}"))
                },
                1..=k,
            );
            r.exact(format!("brute=weighted i={i}"), w.is_empty(), || w);
        }

        let (a, b) = (s(k, i, 1), closed_row1(k, i));
        r.exact(format!("closed-row1 i={i}"), a == b, || {
            format!("(k,i,j)=({k},{i},1) sigma {a} binomial {b}")
        });

        if i >= 2 {
            let rhs: BigInt = (1..=k - i + 1).map(|t| BigInt::from(t) * s(k - t, i - 1, 1)).sum();
            let lhs = s(k, i, 1);
            r.exact(format!("recurrence-1 i={i}"), lhs == rhs, || {
                format!("(k,i,j)=({k},{i},1) lhs {lhs} rhs {rhs}")
            });

            if k >= 2 {
                let w = mismatches(
                    &|j| {
                        let lhs = s(k, i, j);
                        let rhs = s(k - 1, i, j - 1)
                            + (1..j).map(|t| s(k - t, i - 1, j - t)).sum::<BigInt>();
                        (lhs != rhs).then(|| format!("(k,i,j)=({k},{i},{j}) lhs {lhs} rhs {rhs}"))
                    },
                    2..=k,
                );
                r.exact(format!("recurrence-2 i={i}"), w.is_empty(), || w);
            }
        }

        if k >= 2 {
            let w = mismatches(
                &|j| {
                    let d = s(k, i, j) - s(k, i, j + 1);
                    match difference_product(k, i, j) {
                        Some(p) if p == d => None,
                        other => Some(format!("(k,i,j)=({k},{i},{j}) difference {d} product {other:?}")),
                    }
                },
                1..=k - 1,
            );
            r.exact(format!("difference-product i={i}"), w.is_empty(), || w);

            let w = mismatches(
                &|j| {
                    let d = s(k, i, j) - s(k, i, j + 1);
                    let b = difference_binomial(k, i, j);
                    (d != b).then(|| format!("(k,i,j)=({k},{i},{j}) difference {d} binomial {b}"))
                },
                1..=k - 1,
            );
            r.exact(format!("difference-binomial i={i}"), w.is_empty(), || w);

            let w = mismatches(
                &|j| {
                    let (a, b) = (s(k, i, j), s(k, i, j + 1));
                    let ok = a >= b && ((a == b) == on_plateau(k, i, j));
                    (!ok).then(|| format!("(k,i,j)=({k},{i},{j}) values {a},{b}"))
                },
                1..=k - 1,
            );
            r.exact(format!("plateau i={i}"), w.is_empty(), || w);
        }
    }

    let w = mismatches(
        &|j| {
            let (a, b) = (s(k, 1, j), s(k, k, j));
            (a != BigInt::from(k - j + 1) || b != BigInt::from(1))
                .then(|| format!("j={j} first row {a} last row {b}"))
        },
        1..=k,
    );
    r.exact("boundary-rows", w.is_empty(), || w);
    r
}

/// `ρ`: keeps `m_1..m_{i+1}` and raises the remaining entries by one,
/// mapping `S_i^(n-1,k)` into `S_i^(n,k)`.
pub fn rho_lift(tuple: &IndexTuple, source: SystemSpec) -> Result<IndexTuple> {
    if !satisfies_inequalities(source, tuple.entries()) {
        return Err(Error::InvalidArgument(format!(
            "{tuple} is not in S_{}^{source}",
            tuple.half_len()
        )));
    }
    let i = tuple.half_len();
    let v = tuple
        .entries()
        .iter()
        .enumerate()
        .map(|(s, &m)| if s <= i { m } else { m + 1 })
        .collect();
    IndexTuple::new(v)
}

/// `#S_{i,j}^(n,k)`: tuples of `S_i` with `j` among `m_1..m_{i+1}`.
pub fn count_s_ij(spec: SystemSpec, i: usize, j: usize) -> usize {
    enumerate_s(spec, i, EnumerationMethod::Inequalities)
        .iter()
        .filter(|t| t.entries()[..=i].contains(&j))
        .count()
}

/// `#Ŝ_{i,j}^(n,k)`.
pub fn count_hat_s_ij(spec: SystemSpec, i: usize, j: usize) -> usize {
    let hats: BTreeSet<Vec<usize>> = enumerate_s(spec, i, EnumerationMethod::Inequalities)
        .iter()
        .map(IndexTuple::hat)
        .collect();
    hats.iter().filter(|h| h[..i].contains(&j)).count()
}

/// The matrix `∂K_i/∂x_j(1)`, `i, j = 1..k`, from exact derivatives.
pub fn k_jacobian_at_one(spec: SystemSpec) -> Result<Vec<Vec<i64>>> {
    let ones = vec![Rational::from_integer(1.into()); spec.n];
    (1..=spec.k)
        .map(|i| {
            let ki = k_poly(spec, i)?;
            (1..=spec.k)
                .map(|j| {
                    let v = ki.partial_derivative(j - 1)?.evaluate(&ones)?;
                    v.to_integer()
                        .to_i64()
                        .ok_or_else(|| Error::Unsupported("derivative value exceeds i64".into()))
                })
                .collect()
        })
        .collect()
}
