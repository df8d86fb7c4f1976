//! Associative subalgebras represented by their frames of minimal
//! projections, and the order/orthogonality structure between them.
//!
//! A finite-dimensional associative JB algebra is `span{p₁,…,p_k}` for a
//! unique set of nonzero pairwise orthogonal projections, so a [`Frame`] is
//! a faithful handle on an element of `AS(A)`, and a [`UnitalFrame`] on an
//! element of `ASU(A)`.

use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, Factor};
use crate::element::{Block, Element};
use crate::error::{Error, Result};
use crate::linalg;
use crate::projection::Projection;
use crate::random;
use crate::spectral::spectral_decompose;
use crate::tolerance::{DELTA_CLUSTER, TAU_ALG};

/// Tolerance for membership of a projection in the span of a frame.
fn membership_tol(q: &Element) -> f64 {
    TAU_ALG * (1.0 + q.coords().norm())
}

/// Nonzero pairwise orthogonal projections in canonical order.
#[derive(Debug, Clone)]
pub struct Frame {
    algebra: Algebra,
    projections: Vec<Projection>,
}

fn canonical_cmp(a: &Projection, b: &Projection) -> Ordering {
    let ta = a.trace().round() as i64;
    let tb = b.trace().round() as i64;
    tb.cmp(&ta).then_with(|| {
        let ca = a.coords();
        let cb = b.coords();
        for (x, y) in ca.iter().zip(cb.iter()) {
            let (x, y) = ((x * 1e6).round() as i64, (y * 1e6).round() as i64);
            match y.cmp(&x) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    })
}

impl Frame {
    /// Validates orthogonality and nonvanishing, then sorts canonically
    /// (descending trace, then descending rounded coordinates).
    pub fn new(algebra: &Algebra, projections: Vec<Projection>) -> Result<Self> {
        for (i, p) in projections.iter().enumerate() {
            if p.algebra() != algebra {
                return Err(Error::AlgebraMismatch);
            }
            if p.is_zero() {
                return Err(Error::ZeroProjection(i));
            }
        }
        for i in 0..projections.len() {
            for j in i + 1..projections.len() {
                if !projections[i].is_orthogonal_to(&projections[j]) {
                    return Err(Error::NotOrthogonal {
                        first: i,
                        second: j,
                    });
                }
            }
        }
        let mut projections = projections;
        projections.sort_by(canonical_cmp);
        Ok(Self {
            algebra: algebra.clone(),
            projections,
        })
    }

    /// The zero algebra.
    pub fn empty(algebra: &Algebra) -> Self {
        Self {
            algebra: algebra.clone(),
            projections: Vec::new(),
        }
    }

    /// `span{1}`.
    pub fn unit(algebra: &Algebra) -> Self {
        Self {
            algebra: algebra.clone(),
            projections: vec![Projection::unit(algebra)],
        }
    }

    /// `span{p}`.
    pub fn atom(p: Projection) -> Result<Self> {
        let algebra = p.algebra().clone();
        Self::new(&algebra, vec![p])
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn projections(&self) -> &[Projection] {
        &self.projections
    }

    pub fn len(&self) -> usize {
        self.projections.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projections.is_empty()
    }

    /// `Σ pᵢ`, the unit of the spanned algebra.
    pub fn sum(&self) -> Element {
        self.projections
            .iter()
            .fold(Element::zero(&self.algebra), |acc, p| acc.add_unchecked(p))
    }

    pub fn is_unital(&self) -> bool {
        !self.is_empty() && self.sum().distance(&Element::unit(&self.algebra)) <= TAU_ALG * 10.0
    }

    /// Height in `AS(A)`: the number of minimal projections.
    pub fn height(&self) -> usize {
        self.projections.len()
    }

    /// Dimension of the linear span, computed numerically from coordinates.
    pub fn span_dim(&self) -> usize {
        span_rank(self.projections.iter().map(|p| p.element()))
    }

    /// Whether `x` lies in the span of the frame.
    pub fn contains_element(&self, x: &Element) -> bool {
        x.algebra() == &self.algebra && self.span_residual(x) <= membership_tol(x)
    }

    /// Distance from `x` to the span (frame projections are orthogonal in
    /// the trace form, so the normal equations are diagonal).
    fn span_residual(&self, x: &Element) -> f64 {
        let c = x.coords();
        let mut fit = DVector::zeros(c.len());
        for p in &self.projections {
            let pc = p.coords();
            fit += &pc * (c.dot(&pc) / pc.norm_squared());
        }
        (c - fit).norm()
    }

    /// `span D ⊆ span C` (`self` is C).
    pub fn includes(&self, other: &Frame) -> bool {
        self.algebra == other.algebra && other.projections.iter().all(|q| self.contains_element(q))
    }

    /// Same subalgebra.
    pub fn same_span(&self, other: &Frame) -> bool {
        self.len() == other.len() && self.includes(other) && other.includes(self)
    }

    /// `x∘y = 0` for all `x ∈ span C`, `y ∈ span D`.
    pub fn is_orthogonal_to(&self, other: &Frame) -> bool {
        self.algebra == other.algebra
            && self
                .projections
                .iter()
                .all(|p| other.projections.iter().all(|q| p.is_orthogonal_to(q)))
    }

    /// `C ⊳ D`: inclusion with height dropping by exactly one.
    pub fn covers(&self, other: &Frame) -> bool {
        self.height() == other.height() + 1 && self.includes(other)
    }

    /// Atoms of `AS(A)` are one-dimensional: `span{p}`.
    pub fn is_atom_as(&self) -> bool {
        self.len() == 1
    }

    /// Frame of the intersection `span C ∩ span D`.
    pub fn intersect(&self, other: &Frame) -> Result<Frame> {
        if self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch);
        }
        if self.is_empty() || other.is_empty() {
            return Ok(Frame::empty(&self.algebra));
        }
        let cols: Vec<DVector<f64>> = self
            .projections
            .iter()
            .map(|p| p.coords())
            .chain(other.projections.iter().map(|q| -q.coords()))
            .collect();
        let m = DMatrix::from_columns(&cols);
        let null = linalg::null_space(&m, 1e-9);
        let k = self.len();
        let basis: Vec<Element> = null
            .column_iter()
            .map(|c| {
                self.projections
                    .iter()
                    .zip(c.iter().take(k))
                    .fold(Element::zero(&self.algebra), |acc, (p, &w)| {
                        acc.add_unchecked(&p.scale(w))
                    })
            })
            .collect();
        if basis.is_empty() {
            return Ok(Frame::empty(&self.algebra));
        }
        generate_assoc(&basis)
    }

    /// Orthonormal-coordinates basis of the spanned algebra.
    pub fn span_basis(&self) -> Vec<Element> {
        self.projections
            .iter()
            .map(|p| p.element().clone())
            .collect()
    }

    /// An explicit maximal chain `C = X_k ⊳ X_{k−1} ⊳ … ⊳ X_1 ⊳ {0}`,
    /// dropping the last projection at each step.
    pub fn explicit_chain(&self) -> Vec<Frame> {
        (0..=self.len())
            .rev()
            .map(|m| Frame {
                algebra: self.algebra.clone(),
                projections: self.projections[..m].to_vec(),
            })
            .collect()
    }

    /// Image under a map on elements, re-validated and canonicalized.
    pub fn map_projections(
        &self,
        codomain: &Algebra,
        f: impl Fn(&Projection) -> Result<Projection>,
    ) -> Result<Frame> {
        let images = self.projections.iter().map(f).collect::<Result<Vec<_>>>()?;
        Frame::new(codomain, images)
    }

    pub fn to_doc(&self) -> FrameDoc {
        FrameDoc {
            projections: self.span_basis(),
        }
    }

    pub fn from_doc(algebra: &Algebra, doc: FrameDoc) -> Result<Frame> {
        let projections = doc
            .projections
            .into_iter()
            .map(|e| {
                if e.algebra() != algebra {
                    return Err(Error::AlgebraMismatch);
                }
                Projection::new(e)
            })
            .collect::<Result<Vec<_>>>()?;
        Frame::new(algebra, projections)
    }
}

/// Numerical rank of the coordinate vectors of `elements`.
pub fn span_rank<'a>(elements: impl Iterator<Item = &'a Element>) -> usize {
    let cols: Vec<DVector<f64>> = elements.map(Element::coords).collect();
    if cols.is_empty() {
        return 0;
    }
    linalg::numerical_rank(&DMatrix::from_columns(&cols), 1e-9)
}

/// JSON form `{"projections":[element, …]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrameDoc {
    pub projections: Vec<Element>,
}

/// A frame whose projections sum to the unit: an element of `ASU(A)`.
#[derive(Debug, Clone)]
pub struct UnitalFrame(Frame);

impl UnitalFrame {
    pub fn new(frame: Frame) -> Result<Self> {
        let defect = frame.sum().distance(&Element::unit(frame.algebra()));
        if frame.is_empty() || defect > TAU_ALG * 10.0 {
            return Err(Error::NotUnital { defect });
        }
        Ok(Self(frame))
    }

    /// Unital frame `(p, 1 − p)` for a projection `p ∉ {0, 1}`, or `(1)` otherwise.
    pub fn from_projection(p: &Projection) -> Result<Self> {
        let algebra = p.algebra().clone();
        if p.is_zero() || p.is_unit() {
            return Ok(Self(Frame::unit(&algebra)));
        }
        Self::new(Frame::new(&algebra, vec![p.clone(), p.complement()])?)
    }

    pub fn frame(&self) -> &Frame {
        &self.0
    }

    pub fn into_frame(self) -> Frame {
        self.0
    }

    /// Atoms of `ASU(A)` are `span{p, 1−p}`.
    pub fn is_atom_asu(&self) -> bool {
        self.0.len() == 2
    }

    /// Proper unital subalgebra of dimension `k − 1` obtained by merging the
    /// first and last projections of the canonical order.
    pub fn proper_unital_subalgebra(&self) -> Result<UnitalFrame> {
        let k = self.0.len();
        if k < 2 {
            return Err(Error::FrameTooSmall {
                size: k,
                required: 2,
            });
        }
        let ps = self.0.projections();
        let merged = Projection::trusted(ps[0].add_unchecked(&ps[k - 1]));
        let mut rest: Vec<Projection> = ps[1..k - 1].to_vec();
        rest.push(merged);
        Ok(UnitalFrame(Frame::new(self.0.algebra(), rest)?))
    }

    /// Maximal among unital associative subalgebras iff every frame
    /// projection has a one-dimensional compression `U_p(A)`.
    pub fn is_maximal(&self) -> bool {
        self.0
            .projections()
            .iter()
            .all(|p| p.compression_dim() == 1)
    }
}

impl std::ops::Deref for UnitalFrame {
    type Target = Frame;
    fn deref(&self) -> &Frame {
        &self.0
    }
}

/// Frame of the associative algebra `JB(x₁, …, x_n)` generated by pairwise
/// operator-commuting elements: the nonzero joint spectral pieces, minus the
/// piece on which every generator vanishes.
pub fn generate_assoc(generators: &[Element]) -> Result<Frame> {
    let Some(first) = generators.first() else {
        return Err(Error::Precondition(
            "at least one generator is required".into(),
        ));
    };
    let algebra = first.algebra().clone();
    if generators.iter().any(|g| g.algebra() != &algebra) {
        return Err(Error::AlgebraMismatch);
    }
    for i in 0..generators.len() {
        for j in i + 1..generators.len() {
            let defect = generators[i].commutator_norm(&generators[j])?;
            let scale = (1.0 + generators[i].norm()) * (1.0 + generators[j].norm());
            if defect > crate::tolerance::TAU_COMMUTE * scale {
                return Err(Error::NotOperatorCommuting {
                    first: i,
                    second: j,
                    defect,
                });
            }
        }
    }

    // (piece, whether some generator is nonzero on it)
    let mut pieces: Vec<(Projection, bool)> = vec![(Projection::unit(&algebra), false)];
    for g in generators {
        let zero_gap = DELTA_CLUSTER * (1.0 + g.norm());
        let d = spectral_decompose(g);
        let mut next = Vec::with_capacity(pieces.len() * d.len());
        for (p, seen) in &pieces {
            for (lambda, q) in d.pairs() {
                let r = p.u_unchecked(q).hermitize();
                if r.trace() > 0.5 {
                    next.push((Projection::trusted(r), *seen || lambda.abs() > zero_gap));
                }
            }
        }
        pieces = next;
    }
    let kept = pieces
        .into_iter()
        .filter(|(_, seen)| *seen)
        .map(|(p, _)| p)
        .collect();
    Frame::new(&algebra, kept)
}

/// Whether `span{p, q, z}` is a two-dimensional associative subalgebra, for
/// nonzero orthogonal `p`, `q` and a nonzero `z ∉ {p, q}`.
pub fn sum_detect(p: &Projection, q: &Projection, z: &Projection) -> Result<bool> {
    let tol = TAU_ALG * 10.0;
    if p.algebra() != q.algebra() || p.algebra() != z.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    if p.is_zero() {
        return Err(Error::Precondition("p is zero".into()));
    }
    if q.is_zero() {
        return Err(Error::Precondition("q is zero".into()));
    }
    if !p.is_orthogonal_to(q) {
        return Err(Error::Precondition("p and q are not orthogonal".into()));
    }
    if z.is_zero() {
        return Err(Error::Precondition("z is zero".into()));
    }
    if z.approx_eq(p, tol) || z.approx_eq(q, tol) {
        return Err(Error::Precondition("z coincides with p or q".into()));
    }
    let elements = [p.element(), q.element(), z.element()];
    if span_rank(elements.into_iter()) != 2 {
        return Ok(false);
    }
    if !(p.operator_commutes(z) && q.operator_commutes(z)) {
        return Ok(false);
    }
    let generated = generate_assoc(&[
        p.element().clone(),
        q.element().clone(),
        z.element().clone(),
    ])?;
    Ok(generated.len() == 2)
}

/// `½(1 + ξ)` in `V_n`, `n = ξ.len()`.
pub fn spin_projection(xi: &[f64]) -> Result<Projection> {
    let norm = DVector::from_row_slice(xi).norm();
    if (norm - 1.0).abs() > TAU_ALG * 10.0 {
        return Err(Error::NotUnitVector { norm });
    }
    if xi.len() < 2 {
        return Err(Error::InvalidDescriptor("spin factor needs n >= 2".into()));
    }
    let half: Vec<f64> = xi.iter().map(|x| 0.5 * x).collect();
    Ok(Projection::trusted(Element::spin(0.5, &half)))
}

/// The unital frame `A_ξ = span{½(1+ξ), ½(1−ξ)}`.
pub fn spin_frame(xi: &[f64]) -> Result<UnitalFrame> {
    let p = spin_projection(xi)?;
    UnitalFrame::from_projection(&p)
}

/// Whether the unital frame is a maximal associative unital subalgebra.
pub fn is_maximal_assoc(algebra: &Algebra, frame: &Frame) -> Result<bool> {
    if frame.algebra() != algebra {
        return Err(Error::AlgebraMismatch);
    }
    let unital = UnitalFrame::new(frame.clone())?;
    Ok(unital.is_maximal())
}

/// Whether `A` has a two-dimensional maximal associative unital subalgebra:
/// exactly when `A` is a single Type I₂ factor or `ℝ ⊕ ℝ`.
pub fn classify_two_dim_maximal(algebra: &Algebra) -> bool {
    algebra.is_type_i2_factor() || algebra.is_real_pair()
}

/// Minimal projection of factor `index`, embedded in `A`.
pub fn minimal_projection<R: Rng + ?Sized>(
    algebra: &Algebra,
    index: usize,
    rng: &mut R,
) -> Projection {
    let mut blocks = Element::zero(algebra).into_blocks();
    blocks[index] = match algebra.factors()[index] {
        Factor::Herm { n, field } => Block::Matrix(random::rank_projection(n, 1, field, rng)),
        Factor::Spin { n } => Block::Spin {
            lambda: 0.5,
            v: random::unit_vector(n, rng) * 0.5,
        },
        Factor::Real => Block::Real(1.0),
    };
    Projection::trusted(Element::from_blocks_unchecked(algebra, blocks))
}

/// Searches sampled two-element unital frames `(p, 1 − p)` with `p` minimal
/// for one that is maximal. Cross-check for [`classify_two_dim_maximal`].
pub fn search_two_dim_maximal<R: Rng + ?Sized>(
    algebra: &Algebra,
    samples: usize,
    rng: &mut R,
) -> bool {
    (0..samples.max(algebra.factor_count())).any(|s| {
        let index = s % algebra.factor_count();
        let p = minimal_projection(algebra, index, rng);
        if p.complement().is_zero() {
            return false;
        }
        UnitalFrame::from_projection(&p)
            .map(|f| f.is_maximal())
            .unwrap_or(false)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;

    fn p(d: &[f64]) -> Projection {
        Projection::new(Element::diag(d)).unwrap()
    }

    fn frame(ps: &[&[f64]]) -> Frame {
        let a = Algebra::herm(ps[0].len(), Field::Real);
        Frame::new(&a, ps.iter().map(|d| p(d)).collect()).unwrap()
    }

    const E11: &[f64] = &[1.0, 0.0, 0.0];
    const E22: &[f64] = &[0.0, 1.0, 0.0];
    const E33: &[f64] = &[0.0, 0.0, 1.0];
    const E12: &[f64] = &[1.0, 1.0, 0.0];
    const E23: &[f64] = &[0.0, 1.0, 1.0];
    const E13: &[f64] = &[1.0, 0.0, 1.0];

    #[test]
    fn frame_validation() {
        let a = Algebra::herm(3, Field::Real);
        assert!(matches!(
            Frame::new(&a, vec![p(E11), p(E12)]),
            Err(Error::NotOrthogonal { .. })
        ));
        assert!(matches!(
            Frame::new(&a, vec![p(E11), Projection::zero(&a)]),
            Err(Error::ZeroProjection(1))
        ));
    }

    #[test]
    fn canonical_order() {
        let f = frame(&[E33, E11, E22]);
        assert!(f.projections()[0].distance(&Element::diag(E11)) == 0.0);
        assert!(f.projections()[2].distance(&Element::diag(E33)) == 0.0);
        let g = frame(&[E22, E13]);
        assert_eq!(g.projections()[0].rank(), 2);
    }

    #[test]
    fn generation_examples() {
        let f = generate_assoc(&[Element::diag(&[3.0, 1.0, 3.0])]).unwrap();
        assert!(f.same_span(&frame(&[E13, E22])));

        let f = generate_assoc(&[Element::diag(E12), Element::diag(E23)]).unwrap();
        assert!(f.same_span(&frame(&[E11, E22, E33])));

        let mut r = random::rng(11);
        let a = Algebra::herm(3, Field::Complex);
        let q = random::nonzero_projection(&a, &mut r);
        let f = generate_assoc(&[q.element().clone(), q.complement().into_element()]).unwrap();
        if q.is_unit() {
            assert_eq!(f.len(), 1);
        } else {
            assert_eq!(f.len(), 2);
            assert!(f.is_unital());
        }
    }

    #[test]
    fn generation_non_unital_and_errors() {
        let f = generate_assoc(&[Element::diag(&[2.0, 0.0, 0.0])]).unwrap();
        assert_eq!(f.len(), 1);
        assert!(!f.is_unital());
        let s = Element::real_matrix(DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0])).unwrap();
        let err = generate_assoc(&[Element::diag(&[1.0, 0.0]), s]).unwrap_err();
        assert!(matches!(
            err,
            Error::NotOperatorCommuting {
                first: 0,
                second: 1,
                ..
            }
        ));
    }

    #[test]
    fn inclusion_examples() {
        assert!(frame(&[E11, E22, E33]).includes(&frame(&[E12])));
        let a2 = |d: &[&[f64]]| frame(d);
        assert!(!a2(&[E11, E22]).includes(&a2(&[E33])));
        assert!(!a2(&[E12, E33]).includes(&a2(&[E11])));
        assert!(a2(&[E11]).includes(&Frame::empty(&Algebra::herm(3, Field::Real))));
    }

    #[test]
    fn intersection_examples() {
        let c = frame(&[E11, E22, E33]);
        assert!(c.intersect(&c).unwrap().same_span(&c));
        let d = frame(&[E11, E23]);
        assert!(c.intersect(&d).unwrap().same_span(&d));
        assert!(frame(&[E11]).intersect(&frame(&[E22])).unwrap().is_empty());
    }

    #[test]
    fn orthogonality_examples() {
        assert!(frame(&[E11]).is_orthogonal_to(&frame(&[E22])));
        assert!(!frame(&[E11]).is_orthogonal_to(&frame(&[E12])));
        let empty = Frame::empty(&Algebra::herm(3, Field::Real));
        assert!(empty.is_orthogonal_to(&frame(&[E12])));
    }

    #[test]
    fn heights_and_covers() {
        assert_eq!(Frame::empty(&Algebra::herm(3, Field::Real)).height(), 0);
        assert_eq!(frame(&[E11]).height(), 1);
        assert_eq!(frame(&[E11, E22, E33]).height(), 3);
        assert!(frame(&[&[1.0, 0.0], &[0.0, 1.0]]).covers(&frame(&[&[1.0, 1.0]])));
        assert!(!frame(&[E11, E22, E33]).covers(&frame(&[E11])));
        let c = frame(&[E11, E22]);
        assert!(!c.covers(&c));
    }

    #[test]
    fn atoms() {
        assert!(frame(&[E11]).is_atom_as());
        let u = UnitalFrame::new(frame(&[E11, E23])).unwrap();
        assert!(u.is_atom_asu());
        let full = UnitalFrame::new(frame(&[E11, E22, E33])).unwrap();
        assert!(!full.is_atom_as() && !full.is_atom_asu());
        assert!(matches!(
            UnitalFrame::new(frame(&[E11])),
            Err(Error::NotUnital { .. })
        ));
    }

    #[test]
    fn lemma_merge() {
        let full = UnitalFrame::new(frame(&[E11, E22, E33])).unwrap();
        let merged = full.proper_unital_subalgebra().unwrap();
        assert!(merged.same_span(&frame(&[E13, E22])));
        assert!(full.includes(&merged) && !merged.includes(&full));

        let pair = UnitalFrame::new(frame(&[E11, E23])).unwrap();
        let unit = pair.proper_unital_subalgebra().unwrap();
        assert_eq!(unit.len(), 1);
        assert!(unit.is_unital());

        let one = UnitalFrame::new(Frame::unit(&Algebra::herm(3, Field::Real))).unwrap();
        assert!(matches!(
            one.proper_unital_subalgebra(),
            Err(Error::FrameTooSmall { .. })
        ));
    }

    #[test]
    fn maximality() {
        for k in 2..=4 {
            let a = Algebra::herm(k, Field::Complex);
            let ps = (0..k)
                .map(|i| {
                    let mut d = vec![0.0; k];
                    d[i] = 1.0;
                    let m = DMatrix::from_diagonal(&DVector::from_vec(d))
                        .map(|x| num_complex::Complex64::new(x, 0.0));
                    Projection::new(Element::complex_matrix(m).unwrap()).unwrap()
                })
                .collect();
            let f = Frame::new(&a, ps).unwrap();
            assert!(is_maximal_assoc(&a, &f).unwrap());
        }
        let f = frame(&[E11, E23]);
        assert!(!is_maximal_assoc(&Algebra::herm(3, Field::Real), &f).unwrap());
        assert!(matches!(
            is_maximal_assoc(&Algebra::herm(3, Field::Real), &frame(&[E11])),
            Err(Error::NotUnital { .. })
        ));
        let s = 1.0 / 3f64.sqrt();
        let f = spin_frame(&[s, s, s]).unwrap();
        assert!(is_maximal_assoc(&Algebra::spin(3), &f).unwrap());
    }

    #[test]
    fn two_dim_maximal_classification() {
        let mut r = random::rng(2);
        let rr = Algebra::new(vec![Factor::Real, Factor::Real]).unwrap();
        let cases = [
            (Algebra::spin(3), true),
            (rr, true),
            (Algebra::herm(3, Field::Real), false),
            (Algebra::herm(2, Field::Complex), true),
            (
                Algebra::new(vec![
                    Factor::Herm {
                        n: 2,
                        field: Field::Real,
                    },
                    Factor::Real,
                ])
                .unwrap(),
                false,
            ),
        ];
        for (a, expect) in cases {
            assert_eq!(classify_two_dim_maximal(&a), expect, "{a}");
            assert_eq!(search_two_dim_maximal(&a, 20, &mut r), expect, "{a}");
        }
    }

    #[test]
    fn sum_detection() {
        assert!(sum_detect(&p(E11), &p(E22), &p(E12)).unwrap());
        assert!(!sum_detect(&p(E11), &p(E22), &p(E13)).unwrap());
        assert!(!sum_detect(&p(E11), &p(E22), &p(E33)).unwrap());
        assert!(sum_detect(&p(E11), &p(E22), &p(E11)).is_err());
        assert!(sum_detect(&p(E11), &p(E12), &p(E33)).is_err());
    }

    #[test]
    fn spin_frames() {
        let q = spin_projection(&[1.0, 0.0]).unwrap();
        assert_eq!(q.element(), &Element::spin(0.5, &[0.5, 0.0]));
        assert!(q.square().distance(&q) < 1e-15);
        let s = 0.6;
        let f = spin_frame(&[s, 0.8, 0.0]).unwrap();
        assert!(f.is_unital());
        let g = spin_frame(&[-s, -0.8, 0.0]).unwrap();
        assert!(f.same_span(&g));
        assert!(matches!(
            spin_projection(&[1.0, 1.0]),
            Err(Error::NotUnitVector { .. })
        ));
    }

    #[test]
    fn explicit_chain_is_covering() {
        let f = frame(&[E11, E22, E33]);
        let chain = f.explicit_chain();
        assert_eq!(chain.len(), 4);
        for w in chain.windows(2) {
            assert!(w[0].includes(&w[1]));
            assert_eq!(w[0].span_dim(), w[1].span_dim() + 1);
        }
        assert!(chain.last().unwrap().is_empty());
    }
}
