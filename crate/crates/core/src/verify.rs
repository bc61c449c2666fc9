//! Verification suites: involutivity, functional independence, rank of the
//! commuting subfamily, and the structural identities of the Poisson maps.
//!
//! Every identity is an exact computation; a failure is recorded in the
//! report with a witness, never raised as an error.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dynamics;
use crate::error::{Error, Result};
use crate::exactalg::{int, LaurentPolynomial, Rational};
use crate::integrals::{
    base_rational_integrals, cyclic_permute, cyclic_shift_tuple, enumerate_s, hamiltonian, k_poly,
    EnumerationMethod, IntegralFamily,
};
use crate::linalg;
use crate::poisson::{
    apply_psi, pullback_phi, pullback_phi_or_identity, rank_and_nullvector, reduce_iota, reduction_chain,
    PoissonStructure, ReductionCase, SystemSpec,
};
use crate::report::VerificationReport;
use crate::sigma::{count_s_ij, k_jacobian_at_one, on_plateau, weighted};

/// Resampling budget for the vector-field span check.
pub const SPAN_ATTEMPTS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Involution,
    Independence,
    Rank,
    Structure,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Involution, Suite::Independence, Suite::Rank, Suite::Structure];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Involution => "involution",
            Suite::Independence => "independence",
            Suite::Rank => "rank",
            Suite::Structure => "structure",
        }
    }

    /// Whether the suite applies to `spec`; independence and rank need
    /// `n > 2k + 1`.
    pub fn applies(self, spec: SystemSpec) -> bool {
        match self {
            Suite::Involution | Suite::Structure => true,
            Suite::Independence | Suite::Rank => spec.is_interior(),
        }
    }

    pub fn run(self, spec: SystemSpec, seed: u64) -> Result<VerificationReport> {
        let start = Instant::now();
        let mut r = match self {
            Suite::Involution => involution_suite(spec),
            Suite::Independence => independence_suite(spec, seed),
            Suite::Rank => noncommutative_rank_suite(spec, seed),
            Suite::Structure => structure_suite(spec),
        }?;
        r.elapsed = Some(start.elapsed());
        Ok(r)
    }
}

fn spec_seed(seed: u64, spec: SystemSpec) -> u64 {
    seed ^ ((spec.n as u64) << 32 | spec.k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// A point of the positive orthant with small random rational coordinates.
pub fn random_rational_point(n: usize, rng: &mut impl Rng) -> Vec<Rational> {
    (0..n)
        .map(|_| Rational::new(rng.random_range(1..=29).into(), rng.random_range(1..=11).into()))
        .collect()
}

fn ones(n: usize) -> Vec<Rational> {
    vec![int(1); n]
}

fn gradient_at(f: &LaurentPolynomial, point: &[Rational], vars: usize) -> Result<Vec<Rational>> {
    (0..vars).map(|j| f.partial_derivative(j)?.evaluate(point)).collect()
}

fn matrix_text(m: &[Vec<Rational>]) -> String {
    m.iter()
        .map(|r| format!("[{}]", r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Pairwise brackets of `K_0..K_k`, of every `K_i` with every `H_l`, and of
/// the Liouville subset `H_1..H_{r-1}`.
pub fn involution_suite(spec: SystemSpec) -> Result<VerificationReport> {
    let fam = IntegralFamily::build(spec)?;
    let ps = PoissonStructure::new(spec);
    let mut r = VerificationReport::new("involution", spec);
    let k = &fam.polys;
    let h = fam.h();
    for i in 0..k.len() {
        for j in i + 1..k.len() {
            r.zero(format!("{{K{i},K{j}}}"), &ps.bracket(&k[i], &k[j])?);
        }
    }
    for (i, ki) in k.iter().enumerate() {
        for (l, hl) in h.iter().enumerate() {
            r.zero(format!("{{K{i},H{}}}", l + 1), &ps.bracket(ki, hl)?);
        }
    }
    let liouville = spec.r().saturating_sub(1).min(h.len());
    for a in 0..liouville {
        for b in a + 1..liouville {
            r.zero(format!("{{H{},H{}}}", a + 1, b + 1), &ps.bracket(h[a], h[b])?);
        }
    }
    Ok(r)
}

/// The shifted Jacobian at `1` with its block structure, the `Λ` plateau,
/// and exact ranks at `1` and at a random rational point.
pub fn independence_suite(spec: SystemSpec, seed: u64) -> Result<VerificationReport> {
    if !spec.is_interior() {
        return Err(Error::InvalidArgument(format!("independence needs n > 2k+1, got {spec}")));
    }
    let SystemSpec { n, k } = spec;
    let fam = IntegralFamily::build(spec)?;
    let ham = hamiltonian(n);
    let p = fam.p();
    let mut rows_f: Vec<LaurentPolynomial> = fam
        .h()
        .iter()
        .zip(&p)
        .map(|(hl, pl)| *hl - &ham.scale(&int(*pl)))
        .collect();
    rows_f.push(ham.clone());
    rows_f.extend(
        fam.polys[1..]
            .iter()
            .zip(&fam.q)
            .map(|(ki, qi)| ki - &ham.scale(&int(*qi))),
    );
    let cols = n - k;
    let jac: Vec<Vec<Rational>> = rows_f
        .iter()
        .map(|f| gradient_at(f, &ones(n), cols))
        .collect::<Result<_>>()?;
    let nh = fam.rationals.len();
    let mut r = VerificationReport::new("independence", spec);

    let zero = |rows: std::ops::Range<usize>, cs: std::ops::Range<usize>| {
        rows.clone()
            .all(|i| cs.clone().all(|j| num_traits::Zero::is_zero(&jac[i][j])))
    };
    r.exact("upper-left zero block", zero(0..nh, 0..k), || matrix_text(&jac[..nh]));
    r.exact("row of ones", jac[nh].iter().all(|v| *v == int(1)), || {
        matrix_text(&jac[nh..=nh])
    });
    r.exact("lower-right zero block", zero(nh + 1..nh + 1 + k, k..cols), || {
        matrix_text(&jac[nh + 1..])
    });

    let lambda: Vec<Vec<Rational>> = jac[nh + 1..].iter().map(|row| row[..k].to_vec()).collect();
    let mut bad = Vec::new();
    for i in 1..=k {
        for j in 1..k {
            let (a, b) = (&lambda[i - 1][j - 1], &lambda[i - 1][j]);
            if a < b || ((a == b) != on_plateau(k, i, j)) {
                bad.push(format!("(i,j)=({i},{j}): {a}, {b}"));
            }
        }
    }
    r.exact("lambda plateau", bad.is_empty(), || bad.join("; "));

    let mut bad = Vec::new();
    for i in 1..=k {
        for j in 1..=k {
            let expect = int(count_s_ij(spec, i, j) as i64 - fam.q[i - 1]);
            if lambda[i - 1][j - 1] != expect {
                bad.push(format!("(i,j)=({i},{j}): {} vs {expect}", lambda[i - 1][j - 1]));
            }
        }
    }
    r.exact("lambda = #S_ij - q_i", bad.is_empty(), || bad.join("; "));

    if k > 0 {
        let prev = SystemSpec { n: n - 1, k };
        let kprev = k_jacobian_at_one(prev)?;
        let (_, qprev) = crate::integrals::shift_constants(prev)?;
        let mut bad = Vec::new();
        for i in 1..=k {
            for j in 1..=k {
                let d = &lambda[i - 1][j - 1] - int(kprev[i - 1][j - 1] - qprev[i - 1]);
                let s = weighted(k, i, j);
                if d != Rational::from_integer(s.clone()) {
                    bad.push(format!("(i,j)=({i},{j}): step {d} sigma {s}"));
                }
            }
        }
        r.exact(format!("lambda step from {prev} = sigma"), bad.is_empty(), || bad.join("; "));
    }

    let rank1 = linalg::rank(&jac);
    r.exact(format!("rank at 1 = {}", n - k - 1), rank1 == n - k - 1, || {
        format!("rank {rank1}: {}", matrix_text(&jac))
    });

    let mut rng = ChaCha8Rng::seed_from_u64(spec_seed(seed, spec));
    let pt = random_rational_point(n, &mut rng);
    let mut full: Vec<Vec<Rational>> = fam
        .h()
        .iter()
        .map(|f| gradient_at(f, &pt, n))
        .collect::<Result<_>>()?;
    for f in &fam.polys {
        full.push(gradient_at(f, &pt, n)?);
    }
    let rank_pt = linalg::rank(&full);
    r.exact(format!("rank at random point = {}", n - k - 1), rank_pt == n - k - 1, || {
        format!("rank {rank_pt} at {}: {}", matrix_text(std::slice::from_ref(&pt)), matrix_text(&full))
    });
    Ok(r)
}

/// Span of the Hamiltonian vector fields of `K_0..K_k` at a seeded random
/// point, and agreement of `X_H` with the numerical vector field.
pub fn noncommutative_rank_suite(spec: SystemSpec, seed: u64) -> Result<VerificationReport> {
    if !spec.is_interior() {
        return Err(Error::InvalidArgument(format!("rank suite needs n > 2k+1, got {spec}")));
    }
    let n = spec.n;
    let ps = PoissonStructure::new(spec);
    let fields: Vec<Vec<LaurentPolynomial>> = (0..=spec.k)
        .map(|i| ps.hamiltonian_vector_field(&k_poly(spec, i)?))
        .collect::<Result<_>>()?;
    let mut r = VerificationReport::new("rank", spec);

    let mut rng = ChaCha8Rng::seed_from_u64(spec_seed(seed, spec));
    let mut last = (0, Vec::new());
    let mut ok = false;
    for _ in 0..SPAN_ATTEMPTS {
        let pt = random_rational_point(n, &mut rng);
        let m: Vec<Vec<Rational>> = fields
            .iter()
            .map(|f| f.iter().map(|c| c.evaluate(&pt)).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        let rk = linalg::rank(&m);
        if rk == spec.k + 1 {
            ok = true;
            break;
        }
        last = (rk, m);
    }
    r.exact(format!("span of X_K0..X_K{} = {}", spec.k, spec.k + 1), ok, || {
        format!("rank {} after {SPAN_ATTEMPTS} samples: {}", last.0, matrix_text(&last.1))
    });

    let xh: Vec<Rational> = ps
        .hamiltonian_vector_field(&hamiltonian(n))?
        .iter()
        .map(|c| c.evaluate(&ones(n)))
        .collect::<Result<_>>()?;
    let numeric = dynamics::vector_field(spec, &vec![1.0; n])?;
    let agree = xh
        .iter()
        .zip(&numeric)
        .all(|(e, f)| Rational::from_float(*f).is_some_and(|v| v == *e));
    r.exact("X_H(1) = vector_field(1)", agree, || {
        format!("exact {} numeric {numeric:?}", matrix_text(std::slice::from_ref(&xh)))
    });
    Ok(r)
}

/// Casimir, Poisson and anti-Poisson maps, hyperplane reductions, the
/// factorization of the rational integrals, cyclic invariance, Jacobi and
/// integral counts.
pub fn structure_suite(spec: SystemSpec) -> Result<VerificationReport> {
    let SystemSpec { n, k } = spec;
    let ps = PoissonStructure::new(spec);
    let fam = IntegralFamily::build(spec)?;
    let x = |i: usize| LaurentPolynomial::var(n, i);
    let mut r = VerificationReport::new("structure", spec);

    let (rank, null) = rank_and_nullvector(spec)?;
    let expect_rank = if n % 2 == 0 { n } else { n - 1 };
    r.exact(format!("rank A = {expect_rank}"), rank == expect_rank && null.is_some() == (n % 2 == 1), || {
        format!("rank {rank}")
    });
    if let Some(c) = &fam.casimir {
        let bad: Vec<String> = (0..n)
            .filter_map(|i| {
                let b = ps.bracket(c, &x(i)).ok()?;
                (!b.is_zero()).then(|| format!("{{C,x{}}} = {b}", i + 1))
            })
            .collect();
        r.exact("Casimir", bad.is_empty(), || bad.join("; "));
    }

    let mut bad = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let (xa, xb, xc) = (x(a), x(b), x(c));
                let j = ps.bracket(&xa, &ps.bracket(&xb, &xc)?)?
                    + ps.bracket(&xb, &ps.bracket(&xc, &xa)?)?
                    + ps.bracket(&xc, &ps.bracket(&xa, &xb)?)?;
                if !j.is_zero() {
                    bad.push(format!("({},{},{}): {j}", a + 1, b + 1, c + 1));
                }
            }
        }
    }
    r.exact("Jacobi on coordinates", bad.is_empty(), || bad.join("; "));

    let mut bad = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let lhs = apply_psi(&ps.bracket(&x(a), &x(b))?);
            let rhs = ps.bracket(&apply_psi(&x(a)), &apply_psi(&x(b)))?;
            if lhs != -rhs.clone() {
                bad.push(format!("(x{},x{}): {lhs} vs {rhs}", a + 1, b + 1));
            }
        }
    }
    r.exact("psi anti-Poisson", bad.is_empty(), || bad.join("; "));

    if k > 0 {
        let m = spec.m();
        let base = PoissonStructure::new(SystemSpec { n: m, k: 0 });
        let y = |i: usize| LaurentPolynomial::var(m, i);
        let mut bad = Vec::new();
        for a in 0..m {
            for b in a + 1..m {
                let lhs = pullback_phi(&base.bracket(&y(a), &y(b))?, spec)?;
                let rhs = ps.bracket(&pullback_phi(&y(a), spec)?, &pullback_phi(&y(b), spec)?)?;
                if lhs != rhs {
                    bad.push(format!("(y{},y{}): {lhs} vs {rhs}", a + 1, b + 1));
                }
            }
        }
        r.exact("phi Poisson", bad.is_empty(), || bad.join("; "));
        r.zero("phi*(sum y) - K_k", &(pullback_phi(&hamiltonian(m), spec)? - fam.polys[k].clone()));
    }

    if spec.m() >= 2 {
        let base = base_rational_integrals(spec.m())?;
        let mut bad = Vec::new();
        for (l, ri) in fam.rationals.iter().enumerate() {
            let sum = ri
                .sum_vars
                .iter()
                .fold(LaurentPolynomial::zero(n), |acc, &v| acc + x(v));
            let direct = pullback_phi_or_identity(&base[l], spec)?;
            if &ri.hat * &sum != ri.poly || direct != ri.poly {
                bad.push(format!("H{} ({})", l + 1, ri.source));
            }
        }
        r.exact("H = hat * partial sum = pullback", bad.is_empty(), || bad.join("; "));
    }

    // Poisson submanifolds: the hyperplanes through which LV(n,k) sits in
    // LV(n+1,k) (interior position) and in LV(n+1,k+1) (last position).
    let mut ambients = vec![(SystemSpec { n: n + 1, k }, k + 1)];
    if n >= 2 * k + 2 {
        ambients.push((SystemSpec { n: n + 1, k: k + 1 }, n));
    }
    for (src, ell) in ambients {
        let sps = PoissonStructure::new(src);
        let xs = |i: usize| LaurentPolynomial::var(n + 1, i);
        let mut bad = Vec::new();
        let mut target = None;
        for a in 0..=n {
            for b in a + 1..=n {
                if a == ell || b == ell {
                    continue;
                }
                let (lhs, t, _) = reduce_iota(&sps.bracket(&xs(a), &xs(b))?, ell, src)?;
                let (fa, _, _) = reduce_iota(&xs(a), ell, src)?;
                let (fb, _, _) = reduce_iota(&xs(b), ell, src)?;
                target = Some(t);
                let rhs = PoissonStructure::new(t).bracket(&fa, &fb)?;
                if lhs != rhs {
                    bad.push(format!("(x{},x{})", a + 1, b + 1));
                }
            }
        }
        let id = format!("x{} = 0 in {src} is a Poisson submanifold", ell + 1);
        r.exact(id, bad.is_empty() && target == Some(spec), || {
            format!("target {target:?}; {}", bad.join("; "))
        });

        let mut bad = Vec::new();
        for i in 0..=src.k {
            let (red, t, case) = reduce_iota(&k_poly(src, i)?, ell, src)?;
            let expect = if i <= t.k { k_poly(t, i)? } else { LaurentPolynomial::zero(n) };
            if red != expect {
                bad.push(format!("K{i} ({case:?})"));
            }
        }
        r.exact(format!("K_i of {src} restrict to K_i of {spec}"), bad.is_empty(), || bad.join("; "));
    }

    let chain = reduction_chain(spec);
    let expect: Vec<SystemSpec> = (1..=k).map(|t| SystemSpec { n: n - t, k: k - t }).collect();
    let mut ok = chain == expect;
    let mut cur = spec;
    for &next in &chain {
        for i in 0..=next.k {
            match reduce_iota(&k_poly(cur, i)?, cur.n - 1, cur) {
                Ok((p, t, ReductionCase::Last)) if t == next && p == k_poly(next, i)? => {}
                _ => ok = false,
            }
        }
        cur = next;
    }
    r.exact("reduction chain", ok, || {
        format!("{:?}", chain.iter().map(|s| s.to_string()).collect::<Vec<_>>())
    });

    if spec.is_cyclic() {
        let mut bad = Vec::new();
        for (i, ki) in fam.polys.iter().enumerate() {
            let set = enumerate_s(spec, i, EnumerationMethod::Inequalities);
            let mut shifted: Vec<_> = set.iter().map(|t| cyclic_shift_tuple(t, n)).collect();
            shifted.sort();
            if cyclic_permute(ki) != *ki || shifted != set {
                bad.push(format!("K{i}"));
            }
        }
        r.exact("cyclic invariance", bad.is_empty(), || bad.join("; "));
    }

    if spec.is_interior() {
        let total = fam.len();
        r.exact(format!("integral count = {}", n - k - 1), total == n - k - 1, || total.to_string());
        let liouville = (k + 1) + spec.r() - 1;
        r.exact(
            format!("Liouville count = {}", (n + 1) / 2),
            liouville == (n + 1) / 2 && spec.r() - 1 <= fam.rationals.len(),
            || liouville.to_string(),
        );
    }
    Ok(r)
}

/// Bounded worker pool; `LVINT_THREADS` caps its size.
pub fn thread_pool() -> rayon::ThreadPool {
    let threads = std::env::var("LVINT_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .unwrap_or(0);
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
}

/// Runs `suites` for every spec with `2 <= n <= max_n`, skipping suites that
/// do not apply. Reports are sorted by `(n, k, suite)`.
pub fn run_all(max_n: usize, seed: u64, suites: &[Suite]) -> Vec<VerificationReport> {
    let jobs: Vec<(SystemSpec, Suite)> = SystemSpec::all_up_to(2, max_n)
        .into_iter()
        .flat_map(|s| suites.iter().filter(move |su| su.applies(s)).map(move |&su| (s, su)))
        .collect();
    let mut out: Vec<(SystemSpec, Suite, VerificationReport)> = thread_pool().install(|| {
        jobs.par_iter()
            .map(|&(s, su)| {
                let rep = su.run(s, seed).unwrap_or_else(|e| {
                    let mut r = VerificationReport::new(su.name(), s);
                    r.error("suite", e);
                    r
                });
                (s, su, rep)
            })
            .collect()
    });
    out.sort_by_key(|(s, su, _)| (*s, *su));
    out.into_iter().map(|(_, _, r)| r).collect()
}
