//! Projections (idempotents), the center and central covers.

use std::ops::Deref;

use nalgebra::DVector;

use crate::algebra::{Algebra, Factor};
use crate::element::{Block, Element};
use crate::error::{Error, Result};
use crate::linalg;
use crate::spectral;
use crate::tolerance::{TAU_ALG, TAU_IDEM};

/// An idempotent element with cached per-factor ranks.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    element: Element,
    ranks: Vec<usize>,
}

impl Deref for Projection {
    type Target = Element;
    fn deref(&self) -> &Element {
        &self.element
    }
}

fn block_rank(b: &Block) -> usize {
    b.trace().round().max(0.0) as usize
}

impl Projection {
    /// Checks `p∘p = p` within `τ_idem`.
    pub fn new(element: Element) -> Result<Self> {
        let defect = element.square().distance(&element);
        if defect > TAU_IDEM * (1.0 + element.norm()) {
            return Err(Error::NotProjection { defect });
        }
        Ok(Self::trusted(element))
    }

    /// Wraps an element already known to be idempotent.
    pub(crate) fn trusted(element: Element) -> Self {
        let ranks = element.blocks().iter().map(block_rank).collect();
        Self { element, ranks }
    }

    /// Nearest projection: the spectral projection of `x` on eigenvalues above ½.
    pub fn snap(x: &Element) -> Self {
        let d = spectral::spectral_decompose(x);
        let mut acc = Element::zero(x.algebra());
        for (lambda, p) in d.pairs() {
            if *lambda > 0.5 {
                acc = acc.add_unchecked(p);
            }
        }
        Self::trusted(acc)
    }

    pub fn zero(algebra: &Algebra) -> Self {
        Self::trusted(Element::zero(algebra))
    }

    pub fn unit(algebra: &Algebra) -> Self {
        Self::trusted(Element::unit(algebra))
    }

    pub fn element(&self) -> &Element {
        &self.element
    }

    pub fn into_element(self) -> Element {
        self.element
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn rank(&self) -> usize {
        self.ranks.iter().sum()
    }

    /// Projections have norm 0 or 1, so ½ separates them robustly.
    pub fn is_zero(&self) -> bool {
        self.ranks.iter().all(|&r| r == 0)
    }

    pub fn is_unit(&self) -> bool {
        self.ranks
            .iter()
            .zip(self.algebra().factors())
            .all(|(&r, f)| r == f.rank())
    }

    /// `1 − p`.
    pub fn complement(&self) -> Projection {
        Self::trusted(Element::unit(self.algebra()).sub_unchecked(&self.element))
    }

    /// `p∘q = 0` within `τ_alg`.
    pub fn is_orthogonal_to(&self, other: &Projection) -> bool {
        self.algebra() == other.algebra()
            && self.element.jordan_unchecked(&other.element).norm() <= TAU_ALG * 10.0
    }

    /// Sum of two orthogonal projections.
    pub fn orthogonal_sum(&self, other: &Projection) -> Result<Projection> {
        if !self.is_orthogonal_to(other) {
            return Err(Error::NotOrthogonal {
                first: 0,
                second: 1,
            });
        }
        Ok(Self::trusted(self.element.add_unchecked(&other.element)))
    }

    /// Close in norm within `tol`.
    pub fn approx_eq(&self, other: &Projection, tol: f64) -> bool {
        self.algebra() == other.algebra()
            && self.ranks == other.ranks
            && self.distance(other) <= tol
    }

    /// Smallest central projection dominating `p`: the sum of the units of
    /// the factors where `p` is nonzero.
    pub fn central_cover(&self) -> Projection {
        let a = self.algebra();
        let mut acc = Element::zero(a);
        for (i, &r) in self.ranks.iter().enumerate() {
            if r > 0 {
                acc = acc.add_unchecked(&Element::factor_unit(a, i));
            }
        }
        Self::trusted(acc)
    }

    /// Real dimension of `U_p(A)`, the rank of `U_p` on the coordinate basis.
    pub fn compression_dim(&self) -> usize {
        self.element.u_map().rank(1e-9)
    }

    /// Real dimension of `U_p(span S)` for a subspace spanned by `elements`.
    pub fn compression_dim_in(&self, elements: &[Element]) -> usize {
        if elements.is_empty() {
            return 0;
        }
        let cols: Vec<DVector<f64>> = elements
            .iter()
            .map(|x| self.element.u_unchecked(x).coords())
            .collect();
        linalg::numerical_rank(&nalgebra::DMatrix::from_columns(&cols), 1e-9)
    }
}

impl Algebra {
    /// Minimal central projections: one factor unit per factor.
    pub fn center(&self) -> Vec<Projection> {
        (0..self.factor_count())
            .map(|i| Projection::trusted(Element::factor_unit(self, i)))
            .collect()
    }

    /// Real dimension of `U_p(A)` for a projection `p`.
    pub fn u_compression_dim(&self, p: &Projection) -> Result<usize> {
        if p.algebra() != self {
            return Err(Error::AlgebraMismatch);
        }
        Ok(p.compression_dim())
    }
}

/// Expected `dim U_p(A)` from the per-factor ranks: `r(r+1)/2` or `r²` in
/// matrix factors, `1` for a minimal spin projection and `n+1` for the
/// spin unit. Used as an independent cross-check of the numerical rank.
pub fn compression_dim_from_ranks(algebra: &Algebra, ranks: &[usize]) -> usize {
    algebra
        .factors()
        .iter()
        .zip(ranks)
        .map(|(f, &r)| match *f {
            Factor::Herm {
                field: crate::algebra::Field::Real,
                ..
            } => r * (r + 1) / 2,
            Factor::Herm {
                field: crate::algebra::Field::Complex,
                ..
            } => r * r,
            Factor::Spin { n } => match r {
                0 => 0,
                1 => 1,
                _ => n + 1,
            },
            Factor::Real => r,
        })
        .sum()
}
