//! The flow `ẋ_i = Σ_j (A_k)_{ij} x_i x_j` in floating point, integrated
//! with an adaptive Dormand-Prince 5(4) scheme, and drift monitoring of all
//! first integrals along the trajectory.

use ode_solvers::continuous_output_model::ContinuousOutputModel;
use ode_solvers::{DVector, Dopri5, System};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::LaurentPolynomial;
use crate::integrals::IntegralFamily;
use crate::poisson::{build_a, SystemSpec};

/// Number of dense-output intervals; a trajectory has `SAMPLES + 1` points.
pub const SAMPLES: usize = 200;
pub const MIN_TOL: f64 = 1e-14;
pub const MAX_TOL: f64 = 1e-3;
/// Coordinates below this abort the run.
pub const HYPERPLANE_GUARD: f64 = 1e-300;

fn a_matrix(spec: SystemSpec) -> Vec<Vec<f64>> {
    build_a(spec)
        .rows()
        .into_iter()
        .map(|r| r.into_iter().map(f64::from).collect())
        .collect()
}

fn field_into(a: &[Vec<f64>], x: &[f64], out: &mut [f64]) {
    for (i, row) in a.iter().enumerate() {
        let s: f64 = row.iter().zip(x).map(|(aij, xj)| aij * xj).sum();
        out[i] = x[i] * s;
    }
}

/// `ẋ` at `state`.
pub fn vector_field(spec: SystemSpec, state: &[f64]) -> Result<Vec<f64>> {
    if state.len() != spec.n {
        return Err(Error::VariableCountMismatch {
            left: spec.n,
            right: state.len(),
        });
    }
    if let Some(i) = state.iter().position(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(format!("state component x{} is not finite", i + 1)));
    }
    let mut out = vec![0.0; spec.n];
    field_into(&a_matrix(spec), state, &mut out);
    Ok(out)
}

struct LvField {
    a: Vec<Vec<f64>>,
    sign: f64,
}

impl System<f64, DVector<f64>> for LvField {
    fn system(&self, _t: f64, y: &DVector<f64>, dy: &mut DVector<f64>) {
        field_into(&self.a, y.as_slice(), dy.as_mut_slice());
        if self.sign < 0.0 {
            dy.neg_mut();
        }
    }
}

/// A Laurent polynomial compiled for repeated evaluation in `f64`.
#[derive(Debug, Clone)]
pub struct FloatPoly {
    nvars: usize,
    terms: Vec<(f64, Vec<(usize, i32)>)>,
}

impl FloatPoly {
    pub fn compile(p: &LaurentPolynomial) -> Self {
        use num_traits::ToPrimitive;
        let terms = p
            .terms()
            .map(|(e, c)| {
                let factors = e
                    .as_slice()
                    .iter()
                    .enumerate()
                    .filter(|&(_, &k)| k != 0)
                    .map(|(v, &k)| (v, k))
                    .collect();
                (c.to_f64().unwrap_or(f64::NAN), factors)
            })
            .collect();
        FloatPoly {
            nvars: p.nvars(),
            terms,
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.nvars);
        self.terms
            .iter()
            .map(|(c, f)| f.iter().fold(*c, |acc, &(v, k)| acc * x[v].powi(k)))
            .sum()
    }
}

/// Integrates the (optionally time-reversed) flow and returns dense output
/// at `samples + 1` equally spaced times in `[0, t_end]`.
pub fn solve(
    spec: SystemSpec,
    x0: &[f64],
    t_end: f64,
    tol: f64,
    samples: usize,
    reversed: bool,
) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    if x0.len() != spec.n {
        return Err(Error::VariableCountMismatch {
            left: spec.n,
            right: x0.len(),
        });
    }
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("initial point is not finite".into()));
    }
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(Error::InvalidArgument(format!("t_end must be positive, got {t_end}")));
    }
    if !(MIN_TOL..=MAX_TOL).contains(&tol) {
        return Err(Error::InvalidArgument(format!(
            "tolerance {tol} outside [{MIN_TOL:e}, {MAX_TOL:e}]"
        )));
    }
    if samples == 0 {
        return Err(Error::InvalidArgument("need at least one sample interval".into()));
    }
    let field = LvField {
        a: a_matrix(spec),
        sign: if reversed { -1.0 } else { 1.0 },
    };
    // relative control only: coordinates decay by many orders of magnitude
    // and an absolute floor at tol lets them cross x_i = 0
    let mut stepper = Dopri5::new(
        field,
        0.0,
        t_end,
        t_end,
        DVector::from_column_slice(x0),
        tol,
        HYPERPLANE_GUARD,
    );
    // sampled from the continuous model: the stepper's own dense grid
    // extrapolates its final point
    let mut model = ContinuousOutputModel::default();
    let outcome = stepper.integrate_with_continuous_output_model(&mut model);
    let last = stepper.y_out().last().map(|y| y.as_slice().to_vec());
    let mut times = Vec::with_capacity(samples + 1);
    let mut states = Vec::with_capacity(samples + 1);
    if let (Ok(_), Some(last)) = (&outcome, last) {
        times.push(0.0);
        states.push(x0.to_vec());
        for s in 1..samples {
            let t = t_end * s as f64 / samples as f64;
            let y = model.evaluate(t).ok_or_else(|| {
                Error::Consistency(format!("no dense output covers t = {t}"))
            })?;
            times.push(t);
            states.push(y.as_slice().to_vec());
        }
        times.push(t_end);
        states.push(last);
    }

    for (t, x) in times.iter().zip(&states) {
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Overflow { t: *t });
        }
        if let Some(i) = x.iter().position(|v| v.abs() < HYPERPLANE_GUARD) {
            if x0[i].abs() >= HYPERPLANE_GUARD {
                return Err(Error::NearHyperplane { var: i + 1, t: *t });
            }
        }
    }
    if let Err(e) = outcome {
        use ode_solvers::dop_shared::IntegrationError as E;
        return Err(match e {
            E::StepSizeUnderflow { x } => Error::StepUnderflow { t: x },
            E::MaxNumStepReached { x, n_step } => Error::IntegrationFailed {
                t: x,
                detail: format!("step budget of {n_step} exhausted"),
            },
            E::StiffnessDetected { x } => Error::IntegrationFailed {
                t: x,
                detail: "problem became stiff".into(),
            },
        });
    }
    Ok((times, states))
}

/// Sampled trajectory with the relative drift of every first integral.
#[derive(Debug, Clone, Serialize)]
pub struct TrajectoryRecord {
    pub spec: SystemSpec,
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    /// `K0.., H1.., C`.
    pub drift_names: Vec<String>,
    /// `drifts[s][q]`: integral `q` at sample `s`.
    pub drifts: Vec<Vec<f64>>,
}

impl TrajectoryRecord {
    /// Largest drift seen for each integral.
    pub fn max_drifts(&self) -> Vec<(String, f64)> {
        self.drift_names
            .iter()
            .enumerate()
            .map(|(q, name)| {
                let m = self.drifts.iter().map(|d| d[q]).fold(0.0, f64::max);
                (name.clone(), m)
            })
            .collect()
    }

    pub fn worst_drift(&self) -> f64 {
        self.drifts.iter().flatten().copied().fold(0.0, f64::max)
    }

    /// Column names for tabular output: `t, x1..xn, <integrals>`.
    pub fn header(&self) -> Vec<String> {
        let mut h = vec!["t".to_string()];
        h.extend((1..=self.spec.n).map(|i| format!("x{i}")));
        h.extend(self.drift_names.iter().cloned());
        h
    }

    pub fn rows(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        self.times.iter().enumerate().map(|(s, t)| {
            let mut r = vec![*t];
            r.extend(&self.states[s]);
            r.extend(&self.drifts[s]);
            r
        })
    }
}

/// Every integral of the family plus the Casimir for odd `n`, named.
pub fn monitored_integrals(spec: SystemSpec) -> Result<Vec<(String, LaurentPolynomial)>> {
    let fam = IntegralFamily::build(spec)?;
    Ok(fam.named().into_iter().map(|(n, p)| (n, p.clone())).collect())
}

/// Integrates `LV(n,k)` from `x0` over `[0, t_end]` and records drifts
/// `|I(x(t)) - I(x0)| / max(1, |I(x0)|)`.
pub fn integrate(spec: SystemSpec, x0: &[f64], t_end: f64, tol: f64) -> Result<TrajectoryRecord> {
    let integrals = monitored_integrals(spec)?;
    let compiled: Vec<FloatPoly> = integrals.iter().map(|(_, p)| FloatPoly::compile(p)).collect();
    let (times, states) = solve(spec, x0, t_end, tol, SAMPLES, false)?;
    let base: Vec<f64> = compiled.iter().map(|f| f.eval(x0)).collect();
    if let Some(q) = base.iter().position(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "integral {} is undefined at the initial point",
            integrals[q].0
        )));
    }
    let drifts = states
        .iter()
        .map(|x| {
            compiled
                .iter()
                .zip(&base)
                .map(|(f, b)| (f.eval(x) - b).abs() / b.abs().max(1.0))
                .collect()
        })
        .collect();
    Ok(TrajectoryRecord {
        spec,
        times,
        states,
        drift_names: integrals.into_iter().map(|(n, _)| n).collect(),
        drifts,
    })
}

/// Runs [`integrate`] for several initial points in parallel; results keep
/// the input order.
pub fn integrate_many(
    spec: SystemSpec,
    points: &[Vec<f64>],
    t_end: f64,
    tol: f64,
) -> Vec<Result<TrajectoryRecord>> {
    points.par_iter().map(|x0| integrate(spec, x0, t_end, tol)).collect()
}

/// Integrates forward to `t_end`, then the reversed field back for the same
/// time, and returns `max_i |x_i - x0_i| / max_i |x0_i|`.
pub fn time_reversal_error(spec: SystemSpec, x0: &[f64], t_end: f64, tol: f64) -> Result<f64> {
    let (_, fwd) = solve(spec, x0, t_end, tol, 1, false)?;
    let mid = fwd.last().expect("nonempty trajectory");
    let (_, back) = solve(spec, mid, t_end, tol, 1, true)?;
    let end = back.last().expect("nonempty trajectory");
    let scale = x0.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let err = end.iter().zip(x0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(err / scale.max(f64::MIN_POSITIVE))
}

/// For each monitored integral, the largest `|∇I(x) · ẋ|` over the samples
/// of `record`, with `∇I` taken from exact partial derivatives.
pub fn chain_rule_residuals(record: &TrajectoryRecord) -> Result<Vec<(String, f64)>> {
    let spec = record.spec;
    let a = a_matrix(spec);
    let mut out = Vec::new();
    for (name, p) in monitored_integrals(spec)? {
        let grad: Vec<FloatPoly> = p.gradient().iter().map(FloatPoly::compile).collect();
        let mut worst = 0.0f64;
        let mut f = vec![0.0; spec.n];
        for x in &record.states {
            field_into(&a, x, &mut f);
            let d: f64 = grad.iter().zip(&f).map(|(g, fi)| g.eval(x) * fi).sum();
            worst = worst.max(d.abs());
        }
        out.push((name, worst));
    }
    Ok(out)
}

/// `count` points drawn uniformly from `[0.5, 1.5]^n` with a ChaCha8 stream.
pub fn seeded_points(n: usize, seed: u64, count: usize) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (0..n).map(|_| rng.random_range(0.5..1.5)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrals::{hamiltonian, k_poly};
    use crate::lax::char_poly_k;

    fn spec(n: usize, k: usize) -> SystemSpec {
        SystemSpec { n, k }
    }

    #[test]
    fn field_examples() {
        assert_eq!(vector_field(spec(5, 1), &[0.0; 5]).unwrap(), vec![0.0; 5]);
        let (a, b) = (1.5, -0.25);
        assert_eq!(vector_field(spec(2, 0), &[a, b]).unwrap(), vec![a * b, -a * b]);
        let v = vector_field(spec(7, 2), &[0.3, 1.2, -0.7, 2.0, 0.1, 0.9, 1.4]).unwrap();
        assert!(v.iter().sum::<f64>().abs() < 1e-14);
        assert!(vector_field(spec(3, 1), &[1.0, f64::NAN, 1.0]).is_err());
        assert!(vector_field(spec(3, 1), &[1.0, 1.0]).is_err());
    }

    #[test]
    fn field_matches_exact_hamiltonian_flow() {
        use crate::exactalg::Rational;
        use crate::poisson::PoissonStructure;
        use num_traits::ToPrimitive;
        let s = spec(6, 2);
        let xs = [0.5, 1.25, 0.75, 2.0, 1.5, 0.25];
        let pt: Vec<Rational> = xs
            .iter()
            .map(|v| Rational::from_float(*v).unwrap())
            .collect();
        let exact: Vec<f64> = PoissonStructure::new(s)
            .hamiltonian_vector_field(&hamiltonian(6))
            .unwrap()
            .iter()
            .map(|c| c.evaluate(&pt).unwrap().to_f64().unwrap())
            .collect();
        assert_eq!(vector_field(s, &xs).unwrap(), exact);
    }

    #[test]
    fn rejects_bad_arguments() {
        let x0 = [1.0; 5];
        assert!(integrate(spec(5, 1), &x0, 0.0, 1e-10).is_err());
        assert!(integrate(spec(5, 1), &x0, 1.0, 1e-2).is_err());
        assert!(integrate(spec(5, 1), &x0, 1.0, 1e-15).is_err());
        assert!(integrate(spec(5, 1), &x0[..4], 1.0, 1e-8).is_err());
    }

    #[test]
    fn two_dim_hamiltonian() {
        let r = integrate(spec(2, 0), &[1.0, 1.0], 5.0, 1e-10).unwrap();
        assert!(r.times.len() > 100);
        assert!(r.times.windows(2).all(|w| w[0] < w[1]));
        for x in &r.states {
            assert!((x[0] + x[1] - 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn ones_point_drift() {
        let tol = 1e-10;
        let r = integrate(spec(5, 1), &[1.0; 5], 10.0, tol).unwrap();
        assert_eq!(r.drift_names, vec!["K0", "K1", "H1", "C"]);
        assert!(r.max_drifts()[0].1 <= 10.0 * tol);
        assert!(r.states.last().unwrap() != &vec![1.0; 5]);
    }

    #[test]
    fn random_point_conservation() {
        let x0 = &seeded_points(5, 7, 1)[0];
        let r = integrate(spec(5, 1), x0, 20.0, 1e-12).unwrap();
        for (name, d) in r.max_drifts() {
            assert!(d <= 1e-8, "{name} drift {d}");
        }
    }

    #[test]
    fn reversal_and_chain_rule() {
        let x0 = &seeded_points(6, 11, 1)[0];
        assert!(time_reversal_error(spec(6, 1), x0, 20.0, 1e-12).unwrap() < 1e-6);
        let r = integrate(spec(6, 1), x0, 5.0, 1e-10).unwrap();
        for (name, d) in chain_rule_residuals(&r).unwrap() {
            assert!(d <= 1e-10, "{name} residual {d}");
        }
    }

    #[test]
    fn float_poly_matches_exact() {
        let p = LaurentPolynomial::parse(3, "x1^2*x3^-1 - 3/2*x2 + 7").unwrap();
        let f = FloatPoly::compile(&p);
        let x = [2.0, 4.0, 0.5];
        assert!((f.eval(&x) - p.evaluate_f64(&x).unwrap()).abs() < 1e-12);
        let k = k_poly(spec(7, 3), 2).unwrap();
        let y = [0.9, 1.1, 0.7, 1.3, 0.8, 1.2, 1.05];
        assert!((FloatPoly::compile(&k).eval(&y) - k.evaluate_f64(&y).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn spectral_values_constant_along_flow() {
        // det(X + λM - μ Id) at fixed (λ, μ), tail variables zero in the reduced system
        for (kappa, tail) in [(1, 0), (2, 0), (2, 1), (3, 2)] {
            let cp = char_poly_k(kappa, tail).unwrap();
            let red = cp.reduced_spec();
            let det = FloatPoly::compile(&cp.det);
            let n_full = 2 * kappa + 1;
            let x0 = &seeded_points(red.n, 3 + kappa as u64, 1)[0];
            let r = integrate(red, x0, 10.0, 1e-12).unwrap();
            let eval = |x: &[f64], lam: f64, mu: f64| {
                let mut v = x.to_vec();
                v.resize(n_full, 0.0);
                v.push(lam);
                v.push(mu);
                det.eval(&v)
            };
            for (lam, mu) in [(0.7, 0.3), (-1.1, 0.45)] {
                let d0 = eval(x0, lam, mu);
                for x in &r.states {
                    assert!((eval(x, lam, mu) - d0).abs() <= 1e-8 * d0.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn seeded_points_are_reproducible() {
        let a = seeded_points(4, 42, 3);
        assert_eq!(a, seeded_points(4, 42, 3));
        assert_ne!(a, seeded_points(4, 43, 3));
        assert!(a.iter().flatten().all(|v| (0.5..1.5).contains(v)));
    }

    #[test]
    fn parallel_matches_serial() {
        let pts = seeded_points(5, 1, 4);
        let par = integrate_many(spec(5, 2), &pts, 3.0, 1e-10);
        for (p, r) in pts.iter().zip(par) {
            let s = integrate(spec(5, 2), p, 3.0, 1e-10).unwrap();
            assert_eq!(r.unwrap().states, s.states);
        }
    }

    #[test]
    fn decaying_coordinates_stay_positive() {
        // k = 0 pushes the tail coordinates far below tol by t = 20
        let x0 = seeded_points(9, 7, 1).remove(0);
        let r = integrate(spec(9, 0), &x0, 20.0, 1e-12).unwrap();
        let min = r.states.iter().flatten().cloned().fold(f64::INFINITY, f64::min);
        assert!(min > 0.0 && min < 1e-20, "min {min:e}");
        assert!(r.worst_drift() <= 1e-8);
    }
}
