//! Hand-computed values and direct matrix formulas checked against the library.

use jordan_core::amplification::{amplify, complexify, entangled_witness, transpose};
use jordan_core::element::Block;
use jordan_core::frame::{sum_detect, Frame};
use jordan_core::poset::Variant;
use jordan_core::reconstruction::{induce_oracle, projection_map, reconstruct};
use jordan_core::spectral::{dyadic_expand, spectral_decompose};
use jordan_core::{random, Algebra, Element, Field, LinearMap, PosetFragment, Projection};
use nalgebra::DMatrix;
use num_complex::Complex64;

type CMatrix = DMatrix<Complex64>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn herm3() -> (CMatrix, CMatrix) {
    let a = CMatrix::from_row_slice(
        3,
        3,
        &[
            c(1.0, 0.0),
            c(2.0, 1.0),
            c(0.0, -1.0),
            c(2.0, -1.0),
            c(-1.0, 0.0),
            c(0.5, 0.0),
            c(0.0, 1.0),
            c(0.5, 0.0),
            c(3.0, 0.0),
        ],
    );
    let b = CMatrix::from_row_slice(
        3,
        3,
        &[
            c(0.0, 0.0),
            c(1.0, 0.0),
            c(1.0, 1.0),
            c(1.0, 0.0),
            c(2.0, 0.0),
            c(0.0, 2.0),
            c(1.0, -1.0),
            c(0.0, -2.0),
            c(-2.0, 0.0),
        ],
    );
    (a, b)
}

#[test]
fn matrix_jordan_product_is_symmetrized_product() {
    let (a, b) = herm3();
    let x = Element::complex_matrix(a.clone()).unwrap();
    let y = Element::complex_matrix(b.clone()).unwrap();
    let expected = (&a * &b + &b * &a) * c(0.5, 0.0);
    assert!((x.jordan(&y).unwrap().matrix().unwrap() - expected).norm() < 1e-14);
}

#[test]
fn quadratic_representation_is_aba() {
    let (a, b) = herm3();
    let x = Element::complex_matrix(a.clone()).unwrap();
    let y = Element::complex_matrix(b.clone()).unwrap();
    let expected = &a * &b * &a;
    assert!((x.u(&y).unwrap().matrix().unwrap() - expected).norm() < 1e-12);
}

#[test]
fn spin_product_by_hand() {
    // (1, (1, 0)) ∘ (2, (0, 3)) = (1·2 + 0, 1·(0, 3) + 2·(1, 0)) = (2, (2, 3))
    let p = Element::spin(1.0, &[1.0, 0.0])
        .jordan(&Element::spin(2.0, &[0.0, 3.0]))
        .unwrap();
    match p.block(0) {
        Block::Spin { lambda, v } => {
            assert_eq!(*lambda, 2.0);
            assert_eq!(v.as_slice(), &[2.0, 3.0]);
        }
        _ => panic!("spin block expected"),
    }
}

#[test]
fn spin_spectrum_and_norm_by_hand() {
    let x = Element::spin(1.0, &[3.0, 4.0]);
    let mut ev = x.eigenvalues();
    ev.sort_by(f64::total_cmp);
    assert_eq!(ev, vec![-4.0, 6.0]);
    assert_eq!(x.norm(), 6.0);
    let d = spectral_decompose(&x);
    assert_eq!(d.eigenvalues(), vec![6.0, -4.0]);
    assert!(
        d.pairs()[0]
            .1
            .element()
            .distance(&Element::spin(0.5, &[0.3, 0.4]))
            < 1e-15
    );
}

#[test]
fn dyadic_digits_by_hand() {
    // 0.75 = 0.11₂, 0.3 = 0.0100110011…₂
    let x = Element::diag(&[0.75, 0.3]);
    let e = dyadic_expand(&x, 6).unwrap();
    let expected = [
        [1.0, 0.0],
        [1.0, 1.0],
        [0.0, 0.0],
        [0.0, 0.0],
        [0.0, 1.0],
        [0.0, 1.0],
    ];
    for (p, d) in e.digits.iter().zip(expected) {
        assert!(p.element().distance(&Element::diag(&d)) < 1e-15, "{d:?}");
    }
    assert!((e.residual_norm() - (0.3 - 0.25 - 1.0 / 32.0 - 1.0 / 64.0)).abs() < 1e-15);
}

#[test]
fn sum_detection_on_diagonal_projections() {
    let p = |d: &[f64]| Projection::new(Element::diag(d)).unwrap();
    assert!(sum_detect(
        &p(&[1.0, 0.0, 0.0]),
        &p(&[0.0, 1.0, 0.0]),
        &p(&[1.0, 1.0, 0.0])
    )
    .unwrap());
    assert!(!sum_detect(
        &p(&[1.0, 0.0, 0.0]),
        &p(&[0.0, 1.0, 0.0]),
        &p(&[0.0, 0.0, 1.0])
    )
    .unwrap());
    assert!(!sum_detect(
        &p(&[1.0, 0.0, 0.0]),
        &p(&[0.0, 1.0, 0.0]),
        &p(&[1.0, 1.0, 1.0])
    )
    .unwrap());
}

#[test]
fn partial_transpose_of_witness_by_index_swap() {
    for n in [2usize, 3] {
        let big = amplify(&complexify(&transpose(n)).unwrap());
        let x = entangled_witness(n);
        let lib = big.apply(&x).unwrap();
        // transpose each n × n block in place
        let mut manual = x.clone();
        for bi in 0..2 {
            for bj in 0..2 {
                for i in 0..n {
                    for j in 0..n {
                        manual[(bi * n + i, bj * n + j)] = x[(bi * n + j, bj * n + i)];
                    }
                }
            }
        }
        assert!((&lib - &manual).norm() < 1e-14);
        let re = DMatrix::from_fn(2 * n, 2 * n, |i, j| manual[(i, j)].re);
        let mut ev: Vec<f64> = re.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        assert!((ev[0] + 0.5).abs() < 1e-14);
        assert!(ev[1..]
            .iter()
            .all(|l| l.abs() < 1e-14 || (l - 0.5).abs() < 1e-14));
    }
}

/// Coordinate matrix of `x ↦ u x u*` assembled from explicit basis images.
fn conjugation_matrix(u: &CMatrix) -> DMatrix<f64> {
    let a = Algebra::herm(u.nrows(), Field::Complex);
    let cols: Vec<_> = Element::basis(&a)
        .iter()
        .map(|e| {
            let m = u * e.matrix().unwrap() * u.adjoint();
            Element::complex_matrix((&m + m.adjoint()) * c(0.5, 0.0))
                .unwrap()
                .coords()
        })
        .collect();
    DMatrix::from_columns(&cols)
}

#[test]
fn reconstruction_matches_conjugation_matrix() {
    let a = Algebra::herm(3, Field::Complex);
    let mut rng = random::rng(41);
    let u = random::unitary(3, Field::Complex, &mut rng);
    let psi = LinearMap::new(&a, &a, conjugation_matrix(&u)).unwrap();
    let xs: Vec<Element> = (0..5).map(|_| random::element(&a, &mut rng)).collect();
    let frag = PosetFragment::build(&a, Variant::As, &xs).unwrap();
    let oracle = induce_oracle(
        &jordan_core::reconstruction::certify_jordan(&psi).unwrap(),
        &frag,
    )
    .unwrap();
    let pm = projection_map(&oracle, &frag, Variant::As).unwrap();
    assert!(pm.len() >= 9);
    let rec = reconstruct(&oracle, &frag, Variant::As).unwrap();
    assert!((rec.map.matrix() - conjugation_matrix(&u)).norm() < 1e-10);
}

#[test]
fn frame_from_diagonal_has_expected_height() {
    let p = |d: &[f64]| Projection::new(Element::diag(d)).unwrap();
    let f = Frame::new(
        &Algebra::herm(4, Field::Real),
        vec![p(&[1.0, 1.0, 0.0, 0.0]), p(&[0.0, 0.0, 1.0, 0.0])],
    )
    .unwrap();
    assert_eq!(f.height(), 2);
    assert_eq!(f.span_dim(), 2);
    assert!(!f.is_unital());
}
