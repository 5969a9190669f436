//! Property tests for the Pauli algebra and the statevector kernels.

use cluster_floquet::dense;
use cluster_floquet::pauli::{Axis, PauliString, PauliSum};
use num_complex::Complex64;
use proptest::prelude::*;

fn arb_string(n: u32) -> impl Strategy<Value = PauliString> {
    let bits = 1u128 << n;
    (0..bits, 0..bits, 0u8..4).prop_map(move |(x, z, p)| {
        let mut s = PauliString::identity(n);
        for i in 1..=n {
            let bit = 1u128 << (i - 1);
            let axis = match (x & bit != 0, z & bit != 0) {
                (false, false) => continue,
                (true, false) => Axis::X,
                (false, true) => Axis::Z,
                (true, true) => Axis::Y,
            };
            s = s
                .multiply(&PauliString::single(n, i, axis).unwrap())
                .unwrap();
        }
        s.with_extra_phase(p)
    })
}

fn arb_hermitian_sum(n: u32, max_terms: usize) -> impl Strategy<Value = PauliSum> {
    let bits = 1u128 << n;
    proptest::collection::vec(((0..bits, 0..bits), -2.0f64..2.0), 1..=max_terms).prop_map(
        move |terms| {
            let mut sum = PauliSum::new(n);
            for ((x, z), c) in terms {
                sum.add_term(x, z, c);
            }
            sum
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplication_is_associative(
        a in arb_string(10),
        b in arb_string(10),
        c in arb_string(10),
    ) {
        let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn dense_realization_is_faithful(a in arb_string(5), b in arb_string(5)) {
        let prod = a.multiply(&b).unwrap();
        let lhs = a.to_dense().unwrap() * b.to_dense().unwrap();
        prop_assert!(dense::max_abs_diff(&lhs, &prod.to_dense().unwrap()) < 1e-12);
    }

    #[test]
    fn commutator_antisymmetry(
        a in arb_hermitian_sum(6, 6),
        b in arb_hermitian_sum(6, 6),
    ) {
        let ab = a.commutator(&b).unwrap();
        let mut ba = b.commutator(&a).unwrap();
        ba.scale(-1.0);
        prop_assert_eq!(ab, ba);
    }

    #[test]
    fn commutator_bilinearity(
        a in arb_hermitian_sum(5, 4),
        b in arb_hermitian_sum(5, 4),
        c in arb_hermitian_sum(5, 4),
        alpha in -3.0f64..3.0,
    ) {
        // [alpha a + b, c] = alpha [a, c] + [b, c]
        let mut lhs_arg = a.clone();
        lhs_arg.scale(alpha);
        lhs_arg.add_assign(&b).unwrap();
        let lhs = lhs_arg.commutator(&c).unwrap();
        let mut rhs = a.commutator(&c).unwrap();
        rhs.scale(alpha);
        rhs.add_assign(&b.commutator(&c).unwrap()).unwrap();
        let mut diff = lhs;
        diff.axpy(-1.0, &rhs).unwrap();
        prop_assert!(diff.frobenius_norm() < 1e-9);
    }

    #[test]
    fn hermiticity_closure_under_commutators(
        a in arb_hermitian_sum(6, 6),
        b in arb_hermitian_sum(6, 6),
    ) {
        // the commutator of Hermitian sums stays Hermitian: its dense form
        // has no anti-Hermitian residual
        let comm = a.commutator(&b).unwrap();
        let m = comm.to_dense().unwrap();
        prop_assert!(dense::anti_hermitian_residual(&m) < 1e-12);
    }

    #[test]
    fn norm_identity_against_dense_trace(sum in arb_hermitian_sum(6, 8)) {
        let m = sum.to_dense().unwrap();
        let dim = m.nrows();
        let tr: Complex64 = (&m * &m).diagonal().iter().sum();
        let dense_norm = (tr.re / dim as f64).sqrt();
        prop_assert!((sum.frobenius_norm() - dense_norm).abs() < 1e-10);
    }

    #[test]
    fn adjoint_is_involutive_and_dense_faithful(a in arb_string(4)) {
        prop_assert_eq!(a.adjoint().adjoint(), a);
        let lhs = a.adjoint().to_dense().unwrap();
        let rhs = a.to_dense().unwrap().adjoint();
        prop_assert!(dense::max_abs_diff(&lhs, &rhs) < 1e-14);
    }

    #[test]
    fn text_format_round_trips(sum in arb_hermitian_sum(7, 10)) {
        let text = sum.to_text();
        let back = PauliSum::from_text(7, &text).unwrap();
        prop_assert_eq!(sum, back);
    }
}
