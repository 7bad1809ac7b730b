use cfriend::outcome::Outcome;
use cfriend::tensor::{
    dagger, kron, matmul, partial_trace, partial_trace_matrix, projector_from_bloch, BlochVector,
    Complex64, ComplexMatrix, DensityMatrix,
};
use cfriend::wigner::lab_map_f;
use proptest::prelude::*;

fn unit_vector() -> impl Strategy<Value = BlochVector> {
    (0.0..std::f64::consts::PI, 0.0..std::f64::consts::TAU)
        .prop_map(|(t, p)| BlochVector::from_angles(t, p))
}

fn complex_matrix(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n * n).prop_map(move |v| {
        ComplexMatrix::new(
            n,
            n,
            v.into_iter().map(|(r, i)| Complex64::new(r, i)).collect(),
        )
        .unwrap()
    })
}

fn hermitian(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    complex_matrix(n).prop_map(|m| m.hermitian_part())
}

#[test]
fn kron_examples() {
    assert!(
        kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(2))
            .approx_eq(&ComplexMatrix::identity(4), 0.0)
    );
    let p = ComplexMatrix::diag(&[1.0, 0.0]);
    assert!(kron(&p, &p).approx_eq(&ComplexMatrix::diag(&[1.0, 0.0, 0.0, 0.0]), 0.0));
    let xx = kron(&cfriend::tensor::pauli::x(), &cfriend::tensor::pauli::x());
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    assert_eq!(
        xx.apply(&[one, zero, zero, zero]).unwrap(),
        vec![zero, zero, zero, one]
    );
}

#[test]
fn projector_examples() {
    let up = projector_from_bloch(&BlochVector::z_axis(), Outcome::Plus);
    assert!(up.approx_eq(&ComplexMatrix::diag(&[1.0, 0.0]), 1e-15));
    let minus_x = projector_from_bloch(&BlochVector::x_axis(), Outcome::Minus);
    let expected = ComplexMatrix::from_real(2, 2, &[0.5, -0.5, -0.5, 0.5]).unwrap();
    assert!(minus_x.approx_eq(&expected, 1e-15));
    assert!(BlochVector::new(1.0, 1.0, 0.0).is_err());
}

#[test]
fn lab_state_traces_to_the_mixture() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let plus = DensityMatrix::from_pure(&[Complex64::new(h, 0.0), Complex64::new(h, 0.0)]).unwrap();
    let lab = lab_map_f(&plus).unwrap();
    let system = partial_trace(&lab, &[2, 4], 0).unwrap();
    let mixture = DensityMatrix::new(ComplexMatrix::diag(&[0.5, 0.5])).unwrap();
    assert!(system.approx_eq(&mixture, 1e-15));
}

#[test]
fn mismatched_products_are_rejected() {
    let a = ComplexMatrix::identity(2);
    let b = ComplexMatrix::identity(3);
    assert!(matmul(&a, &b).is_err());
    assert!(a.add(&b).is_err());
    assert!(ComplexMatrix::zeros(2, 3).trace().is_err());
}

proptest! {
    #[test]
    fn projectors_are_idempotent_and_complete(n in unit_vector()) {
        let p = projector_from_bloch(&n, Outcome::Plus);
        let q = projector_from_bloch(&n, Outcome::Minus);
        prop_assert!(matmul(&p, &p).unwrap().approx_eq(&p, 1e-12));
        prop_assert!(p.add(&q).unwrap().approx_eq(&ComplexMatrix::identity(2), 1e-12));
        prop_assert!(p.hermiticity_error() < 1e-15);
        prop_assert!((p.trace().unwrap().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn partial_trace_is_linear_and_trace_preserving(
        a in hermitian(4), b in hermitian(4), s in -2.0..2.0f64, keep in 0usize..2
    ) {
        let ta = partial_trace_matrix(&a, &[2, 2], keep).unwrap();
        let tb = partial_trace_matrix(&b, &[2, 2], keep).unwrap();
        let combo = a.add(&b.scale_real(s)).unwrap();
        let tc = partial_trace_matrix(&combo, &[2, 2], keep).unwrap();
        prop_assert!(tc.approx_eq(&ta.add(&tb.scale_real(s)).unwrap(), 1e-12));
        prop_assert!((ta.trace().unwrap() - a.trace().unwrap()).norm() < 1e-12);
    }

    #[test]
    fn dagger_distributes_over_kron(a in complex_matrix(2), b in complex_matrix(4)) {
        prop_assert!(dagger(&kron(&a, &b)).approx_eq(&kron(&dagger(&a), &dagger(&b)), 0.0));
    }

    #[test]
    fn mixed_product_property(a in complex_matrix(2), b in complex_matrix(2), c in complex_matrix(2), d in complex_matrix(2)) {
        let lhs = matmul(&kron(&a, &b), &kron(&c, &d)).unwrap();
        let rhs = kron(&matmul(&a, &c).unwrap(), &matmul(&b, &d).unwrap());
        prop_assert!(lhs.approx_eq(&rhs, 1e-12));
    }
}
