//! Spectral decomposition, range projections, functional calculus and the
//! greedy dyadic expansion by projections.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::element::{Block, Element};
use crate::error::{Error, Result};
use crate::linalg::hermitian_eigen;
use crate::projection::Projection;
use crate::tolerance::{DELTA_CLUSTER, TAU_ALG};

/// `x = Σ λᵢ pᵢ` with distinct eigenvalues sorted in descending order and
/// `Σ pᵢ = 1` (the zero eigenvalue, when present, is listed explicitly).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pairs: Vec<(f64, Projection)>,
}

/// One rank-one (or minimal spin) piece before clustering.
struct Piece {
    value: f64,
    factor: usize,
    block: Block,
}

fn matrix_pieces(factor: usize, m: &DMatrix<Complex64>, out: &mut Vec<Piece>) {
    let (values, vectors) = hermitian_eigen(m);
    for (k, value) in values.into_iter().enumerate() {
        let v = vectors.column(k);
        let proj = v * v.adjoint();
        out.push(Piece {
            value,
            factor,
            block: Block::Matrix(proj),
        });
    }
}

fn spin_pieces(factor: usize, lambda: f64, v: &DVector<f64>, out: &mut Vec<Piece>) {
    let r = v.norm();
    if r == 0.0 {
        out.push(Piece {
            value: lambda,
            factor,
            block: Block::Spin {
                lambda: 1.0,
                v: DVector::zeros(v.len()),
            },
        });
        return;
    }
    let xi = v / r;
    out.push(Piece {
        value: lambda + r,
        factor,
        block: Block::Spin {
            lambda: 0.5,
            v: &xi * 0.5,
        },
    });
    out.push(Piece {
        value: lambda - r,
        factor,
        block: Block::Spin {
            lambda: 0.5,
            v: &xi * -0.5,
        },
    });
}

fn add_block(acc: &mut Block, b: &Block) {
    match (acc, b) {
        (Block::Matrix(a), Block::Matrix(b)) => *a += b,
        (Block::Spin { lambda, v }, Block::Spin { lambda: m, v: w }) => {
            *lambda += m;
            *v += w;
        }
        (Block::Real(x), Block::Real(y)) => *x += y,
        _ => unreachable!("pieces of one factor share a block kind"),
    }
}

/// Spectral decomposition with the default clustering gap `δ_cluster`.
pub fn spectral_decompose(x: &Element) -> SpectralDecomposition {
    spectral_decompose_with_gap(x, DELTA_CLUSTER)
}

/// Spectral decomposition; eigenvalues closer than `gap` (single linkage)
/// share one projection, labelled by their mean.
pub fn spectral_decompose_with_gap(x: &Element, gap: f64) -> SpectralDecomposition {
    let algebra = x.algebra();
    let mut pieces = Vec::new();
    for (i, b) in x.blocks().iter().enumerate() {
        match b {
            Block::Matrix(m) => matrix_pieces(i, m, &mut pieces),
            Block::Spin { lambda, v } => spin_pieces(i, *lambda, v, &mut pieces),
            Block::Real(r) => pieces.push(Piece {
                value: *r,
                factor: i,
                block: Block::Real(1.0),
            }),
        }
    }
    pieces.sort_by(|a, b| b.value.total_cmp(&a.value));

    let mut clusters: Vec<Vec<Piece>> = Vec::new();
    for piece in pieces {
        match clusters.last_mut() {
            Some(c) if c.last().is_some_and(|p| p.value - piece.value <= gap) => c.push(piece),
            _ => clusters.push(vec![piece]),
        }
    }

    let pairs = clusters
        .into_iter()
        .map(|cluster| {
            let value = cluster.iter().map(|p| p.value).sum::<f64>() / cluster.len() as f64;
            let mut e = Element::zero(algebra).into_blocks();
            for p in &cluster {
                add_block(&mut e[p.factor], &p.block);
            }
            let e = Element::from_blocks_unchecked(algebra, e).hermitize();
            (value, Projection::trusted(e))
        })
        .collect();
    SpectralDecomposition { pairs }
}

impl SpectralDecomposition {
    pub fn pairs(&self) -> &[(f64, Projection)] {
        &self.pairs
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.pairs.iter().map(|(l, _)| *l).collect()
    }

    pub fn projections(&self) -> Vec<&Projection> {
        self.pairs.iter().map(|(_, p)| p).collect()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// `Σ λᵢ pᵢ`.
    pub fn reconstruct(&self) -> Element {
        let algebra = self.pairs[0].1.algebra();
        self.pairs
            .iter()
            .fold(Element::zero(algebra), |acc, (l, p)| {
                acc.add_unchecked(&p.scale(*l))
            })
    }

    /// `Σ f(λᵢ) pᵢ`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Element {
        let algebra = self.pairs[0].1.algebra();
        self.pairs
            .iter()
            .fold(Element::zero(algebra), |acc, (l, p)| {
                acc.add_unchecked(&p.scale(f(*l)))
            })
    }

    /// Sum of the projections whose eigenvalue satisfies `keep`.
    pub fn projection_where(&self, keep: impl Fn(f64) -> bool) -> Projection {
        let algebra = self.pairs[0].1.algebra();
        let e = self
            .pairs
            .iter()
            .filter(|(l, _)| keep(*l))
            .fold(Element::zero(algebra), |acc, (_, p)| acc.add_unchecked(p));
        Projection::trusted(e)
    }

    pub fn to_doc(&self) -> SpectralDoc {
        SpectralDoc {
            eigenvalues: self.eigenvalues(),
            projections: self
                .pairs
                .iter()
                .map(|(_, p)| p.element().clone())
                .collect(),
        }
    }
}

/// JSON form of a decomposition.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectralDoc {
    pub eigenvalues: Vec<f64>,
    pub projections: Vec<Element>,
}

/// Range projection `r(x)` of a positive element: spectral projections with
/// eigenvalue above `δ_cluster`.
pub fn range_projection(x: &Element) -> Result<Projection> {
    range_projection_with(x, DELTA_CLUSTER)
}

pub fn range_projection_with(x: &Element, threshold: f64) -> Result<Projection> {
    let min = x.min_eigenvalue();
    if min < -TAU_ALG * (1.0 + x.norm()) {
        return Err(Error::NotPositive {
            min_eigenvalue: min,
        });
    }
    Ok(spectral_decompose(x).projection_where(|l| l > threshold))
}

/// Functional calculus `f(x) = Σ f(λᵢ) pᵢ`. Intended for `f(0) = 0`, which
/// keeps the result inside the (possibly non-unital) algebra generated by `x`.
pub fn apply_function(x: &Element, f: impl Fn(f64) -> f64) -> Element {
    spectral_decompose(x).map(f)
}

/// Result of [`dyadic_expand`].
#[derive(Debug, Clone)]
pub struct DyadicExpansion {
    pub digits: Vec<Projection>,
    /// `x − Σ 2⁻ⁿ pₙ`.
    pub residual: Element,
}

impl DyadicExpansion {
    /// `Σ_{n ≤ N} 2⁻ⁿ pₙ`.
    pub fn partial_sum(&self) -> Element {
        let algebra = self.residual.algebra();
        self.digits
            .iter()
            .enumerate()
            .fold(Element::zero(algebra), |acc, (k, p)| {
                acc.add_unchecked(&p.scale(0.5f64.powi(k as i32 + 1)))
            })
    }

    pub fn residual_norm(&self) -> f64 {
        self.residual.norm()
    }
}

/// Eigenvalue snapping in the greedy digit loop: an eigenvalue within this
/// distance of the threshold `2⁻ⁿ` takes the terminating branch.
const DIGIT_SNAP: f64 = 8.0 * f64::EPSILON;

/// Greedy binary digits of `0 ≤ x ≤ 1` by projections:
/// `r₀ = x`, `pₙ = χ_{[2⁻ⁿ, ∞)}(r_{n−1})`, `rₙ = r_{n−1} − 2⁻ⁿ pₙ`.
///
/// Every `r_n` is a function of `x`, so the loop runs on the eigenvalues of
/// `x` and assembles each digit from the spectral projections of `x`.
pub fn dyadic_expand(x: &Element, digits: usize) -> Result<DyadicExpansion> {
    let scale = 1.0 + x.norm();
    let (min, max) = (x.min_eigenvalue(), x.max_eigenvalue());
    if min < -TAU_ALG * scale || max > 1.0 + TAU_ALG * scale {
        return Err(Error::OutsideUnitInterval { min, max });
    }
    let decomposition = spectral_decompose(x);
    let mut remainders: Vec<f64> = decomposition
        .eigenvalues()
        .into_iter()
        .map(|l| l.clamp(0.0, 1.0))
        .collect();
    let mut out = Vec::with_capacity(digits);
    let algebra = x.algebra();
    for n in 1..=digits {
        let step = 0.5f64.powi(n as i32);
        let mut p = Element::zero(algebra);
        for (r, (_, proj)) in remainders.iter_mut().zip(decomposition.pairs()) {
            if *r >= step - DIGIT_SNAP {
                *r = (*r - step).max(0.0);
                p = p.add_unchecked(proj);
            }
        }
        out.push(Projection::trusted(p));
    }
    let mut expansion = DyadicExpansion {
        digits: out,
        residual: Element::zero(algebra),
    };
    expansion.residual = x.sub_unchecked(&expansion.partial_sum());
    Ok(expansion)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DyadicDoc {
    pub digits: Vec<Element>,
    pub residual_norm: f64,
}

impl From<&DyadicExpansion> for DyadicDoc {
    fn from(e: &DyadicExpansion) -> Self {
        DyadicDoc {
            digits: e.digits.iter().map(|p| p.element().clone()).collect(),
            residual_norm: e.residual_norm(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Algebra;

    #[test]
    fn diagonal_with_repeated_eigenvalue() {
        let d = spectral_decompose(&Element::diag(&[3.0, 1.0, 3.0]));
        assert_eq!(d.len(), 2);
        assert!((d.pairs()[0].0 - 3.0).abs() < 1e-14);
        assert!(d.pairs()[0].1.distance(&Element::diag(&[1.0, 0.0, 1.0])) < 1e-14);
        assert!((d.pairs()[1].0 - 1.0).abs() < 1e-14);
        assert!(d.pairs()[1].1.distance(&Element::diag(&[0.0, 1.0, 0.0])) < 1e-14);
    }

    #[test]
    fn spin_element_decomposition() {
        let x = Element::spin(2.0, &[1.0, 0.0]);
        let d = spectral_decompose(&x);
        assert_eq!(d.eigenvalues(), vec![3.0, 1.0]);
        assert_eq!(d.pairs()[0].1.element(), &Element::spin(0.5, &[0.5, 0.0]));
        assert_eq!(d.pairs()[1].1.element(), &Element::spin(0.5, &[-0.5, 0.0]));
        for (_, p) in d.pairs() {
            assert!(p.square().distance(p) < 1e-15);
        }
        assert!(d.reconstruct().distance(&x) < 1e-15);
    }

    #[test]
    fn zero_decomposes_to_unit() {
        let a = Algebra::spin(3);
        let d = spectral_decompose(&Element::zero(&a));
        assert_eq!(d.len(), 1);
        assert_eq!(d.pairs()[0].0, 0.0);
        assert!(d.pairs()[0].1.is_unit());
    }

    #[test]
    fn range_projections() {
        let r = range_projection(&Element::diag(&[2.0, 0.0, 5.0])).unwrap();
        assert!(r.distance(&Element::diag(&[1.0, 0.0, 1.0])) < 1e-14);

        let p = Element::spin(0.5, &[0.5, 0.0, 0.0]);
        assert!(range_projection(&p).unwrap().distance(&p) < 1e-15);

        let r = range_projection_with(&Element::diag(&[1e-12, 1.0]), 1e-10).unwrap();
        assert!(r.distance(&Element::diag(&[0.0, 1.0])) < 1e-15);

        assert!(matches!(
            range_projection(&Element::diag(&[-1.0, 1.0])),
            Err(Error::NotPositive { .. })
        ));
    }

    #[test]
    fn function_calculus() {
        let x = Element::diag(&[2.0, -1.0]);
        assert!(apply_function(&x, |t| t).distance(&x) < 1e-14);
        assert!(apply_function(&x, |t| t * t).distance(&Element::diag(&[4.0, 1.0])) < 1e-14);
        let x = Element::diag(&[3.0, 0.5]);
        let y = apply_function(&x, |t| (t - 1.0).max(0.0));
        assert!(y.distance(&Element::diag(&[2.0, 0.0])) < 1e-14);
    }

    #[test]
    fn dyadic_three_quarters() {
        let a = Algebra::herm(2, crate::algebra::Field::Real);
        let x = Element::unit(&a).scale(0.75);
        let e = dyadic_expand(&x, 2).unwrap();
        assert!(e.digits.iter().all(Projection::is_unit));
        assert!(e.residual_norm() < 1e-15);
    }

    #[test]
    fn dyadic_one_half() {
        let e = dyadic_expand(&Element::diag(&[1.0, 0.5]), 2).unwrap();
        assert!(e.digits[0].distance(&Element::diag(&[1.0, 1.0])) < 1e-15);
        assert!(e.digits[1].distance(&Element::diag(&[1.0, 0.0])) < 1e-15);
        assert!((e.residual_norm() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn dyadic_zero_and_range_errors() {
        let e = dyadic_expand(&Element::diag(&[0.0, 0.0]), 3).unwrap();
        assert_eq!(e.digits.len(), 3);
        assert!(e.digits.iter().all(Projection::is_zero));
        assert!(matches!(
            dyadic_expand(&Element::diag(&[1.5, 0.0]), 3),
            Err(Error::OutsideUnitInterval { .. })
        ));
        assert!(matches!(
            dyadic_expand(&Element::diag(&[-0.1, 0.0]), 3),
            Err(Error::OutsideUnitInterval { .. })
        ));
    }
}
