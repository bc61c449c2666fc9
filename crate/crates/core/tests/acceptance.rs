//! Acceptance gate: one PASS/FAIL line per criterion. Exits nonzero if any
//! criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use lvint_core::dynamics::{integrate_many, seeded_points};
use lvint_core::integrals::k_poly;
use lvint_core::lax::{char_poly_k, lax_residual};
use lvint_core::poisson::{build_a, rank_and_nullvector};
use lvint_core::sigma::sigma_identity_checks;
use lvint_core::verify::{run_all, Suite};
use lvint_core::{LaurentPolynomial, SystemSpec};

const MAX_N: usize = 9;
const SEED: u64 = 20240917;
const FLOW_T_END: f64 = 20.0;
const FLOW_TOL: f64 = 1e-12;
const FLOW_MAX_DRIFT: f64 = 1e-8;
const FLOW_POINTS: usize = 10;
const SIGMA_MAX_K: usize = 8;
const LAX_SPECTRAL_MAX_KAPPA: usize = 4;
const LAX_RESIDUAL_MAX_KAPPA: usize = 3;
const A_RANK_MAX_N: usize = 12;

struct Outcome {
    ok: bool,
    detail: String,
}

fn suite_criterion(suite: Suite) -> Outcome {
    let reports = run_all(MAX_N, SEED, &[suite]);
    let checks: usize = reports.iter().map(|r| r.checks.len()).sum();
    let failed: Vec<String> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| r.to_string())
        .collect();
    Outcome {
        ok: failed.is_empty() && !reports.is_empty(),
        detail: if failed.is_empty() {
            format!("{} specs, {checks} exact checks", reports.len())
        } else {
            failed.join("\n")
        },
    }
}

fn ac1() -> Outcome {
    suite_criterion(Suite::Involution)
}

fn ac2() -> Outcome {
    let mut bad = Vec::new();
    let mut count = 0;
    for kappa in 1..=LAX_SPECTRAL_MAX_KAPPA {
        for tail in 0..=kappa {
            let cp = match char_poly_k(kappa, tail) {
                Ok(cp) => cp,
                Err(e) => {
                    bad.push(format!("kappa {kappa} tail {tail}: {e}"));
                    continue;
                }
            };
            let red = cp.reduced_spec();
            for (i, ki) in cp.k.iter().enumerate() {
                let expect = if i <= red.k {
                    k_poly(red, i).unwrap()
                } else {
                    LaurentPolynomial::zero(red.n)
                };
                if *ki != expect {
                    bad.push(format!("kappa {kappa} tail {tail} K{i}"));
                }
                count += 1;
            }
        }
    }
    Outcome {
        ok: bad.is_empty(),
        detail: if bad.is_empty() {
            format!("{count} coefficient polynomials match")
        } else {
            bad.join("; ")
        },
    }
}

fn ac3() -> Outcome {
    let mut bad = Vec::new();
    for kappa in 1..=LAX_RESIDUAL_MAX_KAPPA {
        match lax_residual(kappa) {
            Ok((r1, r2)) => {
                if !r1.is_zero() {
                    bad.push(format!("R1 kappa {kappa}"));
                }
                if !r2.is_zero() {
                    bad.push(format!("R2 kappa {kappa}"));
                }
            }
            Err(e) => bad.push(format!("kappa {kappa}: {e}")),
        }
    }
    Outcome {
        ok: bad.is_empty(),
        detail: if bad.is_empty() {
            format!("both residuals vanish for kappa <= {LAX_RESIDUAL_MAX_KAPPA}")
        } else {
            bad.join("; ")
        },
    }
}

fn ac4() -> Outcome {
    let mut failed = Vec::new();
    let mut checks = 0;
    for k in 1..=SIGMA_MAX_K {
        let r = sigma_identity_checks(k);
        checks += r.checks.len();
        if !r.passed() {
            failed.push(r.to_string());
        }
    }
    Outcome {
        ok: failed.is_empty(),
        detail: if failed.is_empty() {
            format!("k <= {SIGMA_MAX_K}, {checks} identity groups")
        } else {
            failed.join("\n")
        },
    }
}

fn ac5() -> Outcome {
    let a = suite_criterion(Suite::Independence);
    let b = suite_criterion(Suite::Rank);
    Outcome {
        ok: a.ok && b.ok,
        detail: format!("jacobian: {}; vector fields: {}", a.detail, b.detail),
    }
}

fn ac6() -> Outcome {
    let mut worst = 0.0f64;
    let mut bad = Vec::new();
    let mut runs = 0;
    for spec in SystemSpec::all_up_to(2, MAX_N) {
        let pts = seeded_points(spec.n, SEED ^ (spec.n * 16 + spec.k) as u64, FLOW_POINTS);
        for (p, res) in integrate_many(spec, &pts, FLOW_T_END, FLOW_TOL).into_iter().enumerate() {
            runs += 1;
            match res {
                Ok(rec) => {
                    for (name, d) in rec.max_drifts() {
                        worst = worst.max(d);
                        if !(d <= FLOW_MAX_DRIFT) {
                            bad.push(format!("{spec} point {p} {name}: {d:e}"));
                        }
                    }
                }
                Err(e) => bad.push(format!("{spec} point {p}: {e}")),
            }
        }
    }
    Outcome {
        ok: bad.is_empty(),
        detail: if bad.is_empty() {
            format!("{runs} trajectories, worst relative drift {worst:.2e}")
        } else {
            bad.join("; ")
        },
    }
}

fn ac7() -> Outcome {
    suite_criterion(Suite::Structure)
}

fn ac8() -> Outcome {
    let mut bad = Vec::new();
    let mut count = 0;
    for spec in SystemSpec::all_up_to(1, A_RANK_MAX_N) {
        count += 1;
        let expect = if spec.n % 2 == 0 { spec.n } else { spec.n - 1 };
        match rank_and_nullvector(spec) {
            Ok((rank, null)) => {
                if rank != expect {
                    bad.push(format!("{spec}: rank {rank}"));
                }
                match (spec.n % 2, null) {
                    (1, Some(v)) => {
                        // integer check of A v = 0 independent of the rational path
                        let a = build_a(spec).rows();
                        let v: Vec<i64> = v.iter().map(|r| r.to_integer().try_into().unwrap()).collect();
                        let zero = a
                            .iter()
                            .all(|row| row.iter().zip(&v).map(|(x, y)| i64::from(*x) * y).sum::<i64>() == 0);
                        if !zero || v.iter().all(|x| *x == 0) {
                            bad.push(format!("{spec}: null vector {v:?}"));
                        }
                    }
                    (0, None) => {}
                    _ => bad.push(format!("{spec}: unexpected null vector presence")),
                }
            }
            Err(e) => bad.push(format!("{spec}: {e}")),
        }
    }
    Outcome {
        ok: bad.is_empty(),
        detail: if bad.is_empty() {
            format!("{count} specs with n <= {A_RANK_MAX_N}")
        } else {
            bad.join("; ")
        },
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, &str, fn() -> Outcome); 8] = [
        ("AC1", "symbolic involutivity, n <= 9, exact", ac1),
        ("AC2", "spectral equivalence, kappa <= 4, all zero tails, exact", ac2),
        ("AC3", "Lax identities, kappa <= 3, exact", ac3),
        ("AC4", "sigma-table identities, k <= 8, exact", ac4),
        ("AC5", "independence rank n-k-1 and span k+1, n <= 9, exact", ac5),
        ("AC6", "conservation, t in [0,20], tol 1e-12, drift <= 1e-8", ac6),
        ("AC7", "structural identities, n <= 9, exact", ac7),
        ("AC8", "rank of A_k with verified null vector, n <= 12, exact", ac8),
    ];
    let mut all = true;
    for (id, title, f) in criteria {
        let start = Instant::now();
        let o = f();
        all &= o.ok;
        println!(
            "[{}] {id} {title} ({:.1?}): {}",
            if o.ok { "PASS" } else { "FAIL" },
            start.elapsed(),
            o.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
