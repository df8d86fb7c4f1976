//! Real-linear maps between descriptor algebras, expressed in their
//! orthonormal coordinates.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::linalg;
use crate::tolerance::TAU_COMMUTE;

/// Properties established by an audit. A flag is only ever set by the audit
/// that checks it.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapFlags {
    pub additive_on_projections: bool,
    pub jordan: bool,
    pub unital: bool,
    pub bijective: bool,
    pub two_positive: bool,
}

/// Dense matrix of a linear map `domain → codomain`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearMap {
    domain: Algebra,
    codomain: Algebra,
    #[serde(with = "row_major")]
    matrix: DMatrix<f64>,
    #[serde(default)]
    flags: MapFlags,
}

impl LinearMap {
    pub fn new(domain: &Algebra, codomain: &Algebra, matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.shape() != (codomain.dim(), domain.dim()) {
            return Err(Error::DimensionMismatch {
                expected: codomain.dim() * domain.dim(),
                found: matrix.len(),
            });
        }
        Ok(Self {
            domain: domain.clone(),
            codomain: codomain.clone(),
            matrix,
            flags: MapFlags::default(),
        })
    }

    pub fn identity(algebra: &Algebra) -> Self {
        let d = algebra.dim();
        Self::new(algebra, algebra, DMatrix::identity(d, d)).expect("square identity")
    }

    /// Matrix of `f` evaluated on the coordinate basis of `domain`.
    pub fn from_fn(domain: &Algebra, codomain: &Algebra, f: impl Fn(&Element) -> Element) -> Self {
        let cols: Vec<_> = Element::basis(domain)
            .iter()
            .map(|b| {
                let img = f(b);
                assert_eq!(img.algebra(), codomain, "image outside the codomain");
                img.coords()
            })
            .collect();
        let matrix = if cols.is_empty() {
            DMatrix::zeros(codomain.dim(), 0)
        } else {
            DMatrix::from_columns(&cols)
        };
        Self::new(domain, codomain, matrix).expect("shape from basis")
    }

    pub fn domain(&self) -> &Algebra {
        &self.domain
    }

    pub fn codomain(&self) -> &Algebra {
        &self.codomain
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn flags(&self) -> MapFlags {
        self.flags
    }

    pub(crate) fn flags_mut(&mut self) -> &mut MapFlags {
        &mut self.flags
    }

    /// Copy without any verified flags.
    pub fn unflagged(&self) -> Self {
        Self {
            flags: MapFlags::default(),
            ..self.clone()
        }
    }

    pub fn apply(&self, x: &Element) -> Result<Element> {
        if x.algebra() != &self.domain {
            return Err(Error::AlgebraMismatch);
        }
        Element::from_coords(&self.codomain, &(&self.matrix * x.coords()))
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &LinearMap) -> Result<LinearMap> {
        if other.codomain != self.domain {
            return Err(Error::AlgebraMismatch);
        }
        LinearMap::new(&other.domain, &self.codomain, &self.matrix * &other.matrix)
    }

    /// Operator norm of `self − other` in coordinates.
    pub fn distance(&self, other: &LinearMap) -> f64 {
        linalg::op_norm(&(&self.matrix - &other.matrix))
    }

    pub fn op_norm(&self) -> f64 {
        linalg::op_norm(&self.matrix)
    }

    pub fn rank(&self, rel_tol: f64) -> usize {
        linalg::numerical_rank(&self.matrix, rel_tol)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("map serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let map: LinearMap = serde_json::from_str(s)?;
        // Flags read from disk are not trusted.
        let map = map.unflagged();
        Self::new(&map.domain, &map.codomain, map.matrix)
    }
}

impl Element {
    /// Matrix of left Jordan multiplication `T_a(b) = a∘b`.
    pub fn t_map(&self) -> LinearMap {
        LinearMap::from_fn(self.algebra(), self.algebra(), |b| self.jordan_unchecked(b))
    }

    /// Matrix of the quadratic representation `U_a`.
    pub fn u_map(&self) -> LinearMap {
        LinearMap::from_fn(self.algebra(), self.algebra(), |b| self.u_unchecked(b))
    }

    /// Norm of the commutator `T_a T_b − T_b T_a`.
    pub fn commutator_norm(&self, other: &Element) -> Result<f64> {
        if self.algebra() != other.algebra() {
            return Err(Error::AlgebraMismatch);
        }
        let ta = self.t_map();
        let tb = other.t_map();
        let c = ta.matrix() * tb.matrix() - tb.matrix() * ta.matrix();
        Ok(linalg::op_norm(&c))
    }

    /// `T_a T_b = T_b T_a` within `τ_commute` relative to `(1+‖a‖)(1+‖b‖)`.
    pub fn operator_commutes(&self, other: &Element) -> bool {
        self.operator_commutes_within(other, TAU_COMMUTE)
    }

    pub fn operator_commutes_within(&self, other: &Element, tol: f64) -> bool {
        match self.commutator_norm(other) {
            Ok(c) => c <= tol * (1.0 + self.norm()) * (1.0 + other.norm()),
            Err(_) => false,
        }
    }
}

mod row_major {
    use nalgebra::DMatrix;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &DMatrix<f64>, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<f64>> = m.row_iter().map(|r| r.iter().copied().collect()).collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<DMatrix<f64>, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(d)?;
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(serde::de::Error::custom("ragged matrix"));
        }
        Ok(DMatrix::from_fn(r, c, |i, j| rows[i][j]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;
    use nalgebra::DVector;

    #[test]
    fn t_map_of_unit_is_identity() {
        for a in [Algebra::herm(3, Field::Complex), Algebra::spin(4)] {
            let t = Element::unit(&a).t_map();
            assert!(t.distance(&LinearMap::identity(&a)) < 1e-15);
        }
    }

    #[test]
    fn t_map_applied_to_off_diagonal() {
        let a = Element::diag(&[1.0, 0.0]);
        let s = Element::real_matrix(DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0])).unwrap();
        let got = a.t_map().apply(&s).unwrap();
        let want =
            Element::real_matrix(DMatrix::from_row_slice(2, 2, &[0.0, 0.5, 0.5, 0.0])).unwrap();
        assert!(got.distance(&want) < 1e-15);
    }

    #[test]
    fn spin_t_map_sends_basis_vector_to_unit() {
        let e1 = Element::spin(0.0, &[1.0, 0.0]);
        let got = e1.t_map().apply(&e1).unwrap();
        assert!(got.distance(&Element::unit(e1.algebra())) < 1e-15);
    }

    #[test]
    fn operator_commutation_examples() {
        let p = Element::diag(&[1.0, 0.0, 2.0]);
        let q = Element::diag(&[0.0, 3.0, 1.0]);
        assert!(p.operator_commutes(&q));

        let p = Element::diag(&[1.0, 0.0]);
        let s = Element::real_matrix(DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0])).unwrap();
        assert!(!p.operator_commutes(&s));

        let a = Element::spin(1.0, &[1.0, 0.0, 0.0]);
        let b = Element::spin(2.0, &[3.0, 0.0, 0.0]);
        assert!(a.operator_commutes(&b));
        let c = Element::spin(2.0, &[0.0, 3.0, 0.0]);
        assert!(!a.operator_commutes(&c));
    }

    #[test]
    fn json_drops_flags() {
        let a = Algebra::spin(2);
        let mut m = LinearMap::identity(&a);
        m.flags_mut().jordan = true;
        let back = LinearMap::from_json(&m.to_json()).unwrap();
        assert!(!back.flags().jordan);
        assert_eq!(back.matrix(), m.matrix());
        let x = Element::from_coords(&a, &DVector::from_vec(vec![1.0, 2.0, 3.0])).unwrap();
        assert_eq!(back.apply(&x).unwrap(), x);
    }
}
