use std::collections::BTreeSet;

use lvint_core::integrals::{
    cyclic_permute, cyclic_shift_tuple, enumerate_s, hamiltonian, k_poly, EnumerationMethod,
};
use lvint_core::poisson::bracket;
use lvint_core::{IndexTuple, IntegralFamily, LaurentPolynomial, SystemSpec};

fn s_set(spec: SystemSpec, i: usize) -> BTreeSet<IndexTuple> {
    enumerate_s(spec, i, EnumerationMethod::Inequalities).into_iter().collect()
}

#[test]
fn enumeration_methods_agree() {
    for spec in SystemSpec::all_up_to(1, 10) {
        for i in 0..=spec.k {
            let a = enumerate_s(spec, i, EnumerationMethod::Inequalities);
            let b = enumerate_s(spec, i, EnumerationMethod::Submatrix);
            assert_eq!(a, b, "{spec} i={i}");
        }
    }
}

#[test]
fn enumerated_tuples_have_free_middle() {
    for spec in SystemSpec::all_up_to(3, 10) {
        let (n, k) = (spec.n, spec.k);
        for i in 1..=k {
            let set = s_set(spec, i);
            for t in &set {
                let m = t.entries();
                assert!(m[i - 1] <= k, "{spec} {t}");
                assert!(m[i + 1] > n - k, "{spec} {t}");
                for v in k + 1..n - k + 1 {
                    let moved = IndexTuple::new(t.with_middle(v)).unwrap();
                    assert!(set.contains(&moved), "{spec} {t} -> {moved}");
                }
            }
        }
    }
}

#[test]
fn boundary_sets_are_cyclically_invariant() {
    for k in 0..=4 {
        let spec = SystemSpec::new(2 * k + 1, k).unwrap();
        for i in 0..=k {
            let set = s_set(spec, i);
            let shifted: BTreeSet<_> = set.iter().map(|t| cyclic_shift_tuple(t, spec.n)).collect();
            assert_eq!(set, shifted, "{spec} i={i}");
            let ki = k_poly(spec, i).unwrap();
            assert_eq!(cyclic_permute(&ki), ki, "{spec} K{i}");
        }
    }
}

#[test]
fn k_polys_are_homogeneous_with_unit_coefficients() {
    let one = lvint_core::exactalg::int(1);
    for spec in SystemSpec::all_up_to(1, 10) {
        for i in 0..=spec.k {
            let ki = k_poly(spec, i).unwrap();
            assert!(!ki.is_zero());
            for (e, c) in ki.terms() {
                assert_eq!(e.degree(), 2 * i as i64 + 1, "{spec} K{i}");
                assert!(e.as_slice().iter().all(|&x| x == 0 || x == 1));
                assert_eq!(*c, one);
            }
        }
    }
}

#[test]
fn family_members_are_first_integrals() {
    for spec in SystemSpec::all_up_to(2, 9) {
        let h = hamiltonian(spec.n);
        let fam = IntegralFamily::build(spec).unwrap();
        for (name, f) in fam.named() {
            let b = bracket(f, &h, spec).unwrap();
            assert!(b.is_zero(), "{spec} {{{name}, H}} = {b}");
        }
    }
}

#[test]
fn hat_terms_commute_with_their_variables() {
    for spec in SystemSpec::all_up_to(3, 9).into_iter().filter(|s| s.is_interior()) {
        let fam = IntegralFamily::build(spec).unwrap();
        for ri in &fam.rationals {
            for &j in &ri.sum_vars {
                let term = LaurentPolynomial::var(spec.n, j).checked_mul(&ri.hat).unwrap();
                for s in term.support_vars() {
                    let b = bracket(&LaurentPolynomial::var(spec.n, s), &term, spec).unwrap();
                    assert!(b.is_zero(), "{spec} {} x{} x{}", ri.source, j + 1, s + 1);
                }
            }
        }
    }
}

#[test]
fn polynomial_involution_up_to_eleven() {
    for spec in SystemSpec::all_up_to(10, 11) {
        let ks: Vec<_> = (0..=spec.k).map(|i| k_poly(spec, i).unwrap()).collect();
        for a in 0..ks.len() {
            for b in a + 1..ks.len() {
                let br = bracket(&ks[a], &ks[b], spec).unwrap();
                assert!(br.is_zero(), "{spec} {{K{a}, K{b}}}");
            }
        }
    }
}
