//! Seeded random sampling of elements, projections and symmetries.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra::{Algebra, Factor, Field};
use crate::element::{Block, Element};
use crate::linear_map::LinearMap;
use crate::projection::Projection;
use crate::spectral::spectral_decompose;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `stream` of the generator seeded by `seed`.
pub fn rng_stream(seed: u64, stream: u64) -> SampleRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Element with independent standard normal coordinates.
pub fn element<R: Rng + ?Sized>(algebra: &Algebra, rng: &mut R) -> Element {
    let c = DVector::from_fn(algebra.dim(), |_, _| normal(rng));
    Element::from_coords(algebra, &c).expect("dimension matches")
}

/// A square `x²` of a random element.
pub fn positive<R: Rng + ?Sized>(algebra: &Algebra, rng: &mut R) -> Element {
    element(algebra, rng).square()
}

/// Element with spectrum in `[0, 1]`: the spectral frame of a random element
/// relabelled with uniform eigenvalues.
pub fn unit_interval<R: Rng + ?Sized>(algebra: &Algebra, rng: &mut R) -> Element {
    let d = spectral_decompose(&element(algebra, rng));
    d.pairs()
        .iter()
        .fold(Element::zero(algebra), |acc, (_, p)| {
            acc.add_unchecked(&p.scale(rng.gen_range(0.0..=1.0)))
        })
}

pub fn unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(n, |_, _| normal(rng));
        let norm = v.norm();
        if norm > 1e-6 {
            return v / norm;
        }
    }
}

/// Haar-distributed unitary (complex) or orthogonal (real) `n × n` matrix.
pub fn unitary<R: Rng + ?Sized>(n: usize, field: Field, rng: &mut R) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(n, n, |_, _| match field {
        Field::Real => Complex64::new(normal(rng), 0.0),
        Field::Complex => Complex64::new(normal(rng), normal(rng)),
    });
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    // fix the phases so the distribution is Haar
    let phases = DVector::from_fn(n, |i, _| {
        let d = r[(i, i)];
        if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        }
    });
    DMatrix::from_fn(n, n, |i, j| q[(i, j)] * phases[j])
}

/// Random projection: a uniformly chosen rank in each factor, with a
/// Haar-random range.
pub fn projection<R: Rng + ?Sized>(algebra: &Algebra, rng: &mut R) -> Projection {
    let blocks = algebra
        .factors()
        .iter()
        .map(|f| match *f {
            Factor::Herm { n, field } => {
                let rank = rng.gen_range(0..=n);
                Block::Matrix(rank_projection(n, rank, field, rng))
            }
            Factor::Spin { n } => match rng.gen_range(0..3) {
                0 => Block::Spin {
                    lambda: 0.0,
                    v: DVector::zeros(n),
                },
                1 => Block::Spin {
                    lambda: 0.5,
                    v: unit_vector(n, rng) * 0.5,
                },
                _ => Block::Spin {
                    lambda: 1.0,
                    v: DVector::zeros(n),
                },
            },
            Factor::Real => Block::Real(if rng.gen_bool(0.5) { 1.0 } else { 0.0 }),
        })
        .collect();
    Projection::new(Element::new(algebra, blocks).expect("hermitian blocks"))
        .expect("constructed idempotent")
}

/// Random nonzero projection.
pub fn nonzero_projection<R: Rng + ?Sized>(algebra: &Algebra, rng: &mut R) -> Projection {
    loop {
        let p = projection(algebra, rng);
        if !p.is_zero() {
            return p;
        }
    }
}

/// Orthogonal projection onto the span of the first `rank` columns of a random unitary.
pub fn rank_projection<R: Rng + ?Sized>(
    n: usize,
    rank: usize,
    field: Field,
    rng: &mut R,
) -> DMatrix<Complex64> {
    let u = unitary(n, field, rng);
    let cols = u.columns(0, rank);
    let p = cols * cols.adjoint();
    (&p + p.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Random Jordan automorphism preserving every factor: conjugation by a
/// Haar unitary on matrix factors (followed by the transpose when
/// `transpose` is set), a Haar rotation of the vector part on spin factors,
/// the identity on `ℝ`.
pub fn automorphism<R: Rng + ?Sized>(algebra: &Algebra, transpose: bool, rng: &mut R) -> LinearMap {
    let actions: Vec<DMatrix<Complex64>> = algebra
        .factors()
        .iter()
        .map(|f| match *f {
            Factor::Herm { n, field } => unitary(n, field, rng),
            Factor::Spin { n } => unitary(n, Field::Real, rng),
            Factor::Real => DMatrix::identity(1, 1),
        })
        .collect();
    LinearMap::from_fn(algebra, algebra, |x| {
        let blocks = x
            .blocks()
            .iter()
            .zip(&actions)
            .map(|(b, u)| match b {
                Block::Matrix(m) => {
                    let c = u * m * u.adjoint();
                    let c = if transpose { c.transpose() } else { c };
                    Block::Matrix((&c + c.adjoint()) * Complex64::new(0.5, 0.0))
                }
                Block::Spin { lambda, v } => {
                    let o = u.map(|z| z.re);
                    Block::Spin {
                        lambda: *lambda,
                        v: o * v,
                    }
                }
                Block::Real(r) => Block::Real(*r),
            })
            .collect();
        Element::new(algebra, blocks).expect("automorphic image")
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitary_is_unitary() {
        let mut r = rng(1);
        for field in [Field::Real, Field::Complex] {
            let u = unitary(4, field, &mut r);
            let e = &u * u.adjoint() - DMatrix::identity(4, 4);
            assert!(e.iter().all(|z| z.norm() < 1e-12));
        }
    }

    #[test]
    fn seeded_streams_are_reproducible() {
        let a = Algebra::spin(3);
        let x = element(&a, &mut rng_stream(5, 2));
        let y = element(&a, &mut rng_stream(5, 2));
        let z = element(&a, &mut rng_stream(5, 3));
        assert_eq!(x, y);
        assert_ne!(x, z);
    }

    #[test]
    fn unit_interval_spectrum() {
        let a = Algebra::herm(4, Field::Complex);
        let mut r = rng(3);
        for _ in 0..10 {
            let x = unit_interval(&a, &mut r);
            assert!(x.min_eigenvalue() >= -1e-12 && x.max_eigenvalue() <= 1.0 + 1e-12);
        }
    }
}
