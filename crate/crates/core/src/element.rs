//! Elements of a descriptor algebra and the primitive Jordan operations.
//!
//! Matrix blocks are stored as complex matrices for both fields; a real
//! symmetric block simply carries zero imaginary parts. Spin blocks are the
//! pair `(λ, v)` standing for `λ1 + v`.

use std::f64::consts::SQRT_2;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{Algebra, Factor, Field};
use crate::error::{Error, Result};
use crate::tolerance::TAU_SYM;

/// One factor component of an [`Element`].
#[derive(Debug, Clone, PartialEq)]
pub enum Block {
    Matrix(DMatrix<Complex64>),
    Spin { lambda: f64, v: DVector<f64> },
    Real(f64),
}

impl Block {
    fn zero(f: &Factor) -> Block {
        match *f {
            Factor::Herm { n, .. } => Block::Matrix(DMatrix::zeros(n, n)),
            Factor::Spin { n } => Block::Spin {
                lambda: 0.0,
                v: DVector::zeros(n),
            },
            Factor::Real => Block::Real(0.0),
        }
    }

    fn unit(f: &Factor) -> Block {
        match *f {
            Factor::Herm { n, .. } => Block::Matrix(DMatrix::identity(n, n)),
            Factor::Spin { n } => Block::Spin {
                lambda: 1.0,
                v: DVector::zeros(n),
            },
            Factor::Real => Block::Real(1.0),
        }
    }

    fn zip(&self, other: &Block, f: impl Fn(f64, f64) -> f64) -> Block {
        match (self, other) {
            (Block::Matrix(a), Block::Matrix(b)) => {
                Block::Matrix(a.zip_map(b, |x, y| Complex64::new(f(x.re, y.re), f(x.im, y.im))))
            }
            (Block::Spin { lambda: l, v }, Block::Spin { lambda: m, v: w }) => Block::Spin {
                lambda: f(*l, *m),
                v: v.zip_map(w, &f),
            },
            (Block::Real(x), Block::Real(y)) => Block::Real(f(*x, *y)),
            _ => unreachable!("blocks validated against a shared descriptor"),
        }
    }

    fn scale(&self, s: f64) -> Block {
        match self {
            Block::Matrix(a) => Block::Matrix(a * Complex64::new(s, 0.0)),
            Block::Spin { lambda, v } => Block::Spin {
                lambda: s * lambda,
                v: v * s,
            },
            Block::Real(x) => Block::Real(s * x),
        }
    }

    fn jordan(&self, other: &Block) -> Block {
        match (self, other) {
            (Block::Matrix(a), Block::Matrix(b)) => {
                let ab = a * b;
                let ba = b * a;
                Block::Matrix((ab + ba) * Complex64::new(0.5, 0.0))
            }
            (Block::Spin { lambda: l, v }, Block::Spin { lambda: m, v: w }) => Block::Spin {
                lambda: l * m + v.dot(w),
                v: w * *l + v * *m,
            },
            (Block::Real(x), Block::Real(y)) => Block::Real(x * y),
            _ => unreachable!("blocks validated against a shared descriptor"),
        }
    }

    /// Eigenvalues of the block (spin blocks: `λ ± ‖v‖`).
    pub fn eigenvalues(&self) -> Vec<f64> {
        match self {
            Block::Matrix(a) => crate::linalg::hermitian_eigenvalues(a),
            Block::Spin { lambda, v } => {
                let r = v.norm();
                vec![lambda + r, lambda - r]
            }
            Block::Real(x) => vec![*x],
        }
    }

    /// Factor norm: operator norm for matrices, `|λ| + ‖v‖₂` for spin blocks.
    pub fn norm(&self) -> f64 {
        match self {
            Block::Matrix(a) if a.nrows() == 0 => 0.0,
            Block::Matrix(_) => self.eigenvalues().iter().fold(0.0, |m, x| m.max(x.abs())),
            Block::Spin { lambda, v } => lambda.abs() + v.norm(),
            Block::Real(x) => x.abs(),
        }
    }

    /// Spectral norm `max |eigenvalue|`.
    pub fn spectral_norm(&self) -> f64 {
        self.eigenvalues().iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Trace normalized so that minimal projections have trace one.
    pub fn trace(&self) -> f64 {
        match self {
            Block::Matrix(a) => a.diagonal().iter().map(|z| z.re).sum(),
            Block::Spin { lambda, .. } => 2.0 * lambda,
            Block::Real(x) => *x,
        }
    }

    /// Entrywise maximal absolute value, used for zero tests.
    pub fn max_abs(&self) -> f64 {
        match self {
            Block::Matrix(a) => a.iter().fold(0.0, |m, z| m.max(z.norm())),
            Block::Spin { lambda, v } => v.iter().fold(lambda.abs(), |m, x| m.max(x.abs())),
            Block::Real(x) => x.abs(),
        }
    }

    fn check(&self, index: usize, factor: &Factor) -> Result<()> {
        match (self, factor) {
            (Block::Matrix(a), Factor::Herm { n, field }) => {
                if a.nrows() != *n || a.ncols() != *n {
                    return Err(Error::BlockShape {
                        block: index,
                        reason: format!("expected {n}x{n}, got {}x{}", a.nrows(), a.ncols()),
                    });
                }
                let scale = 1.0 + a.iter().fold(0.0_f64, |m, z| m.max(z.norm()));
                let deviation = (a - a.adjoint())
                    .iter()
                    .fold(0.0_f64, |m, z| m.max(z.norm()));
                if deviation > TAU_SYM * scale {
                    return Err(Error::NotSelfAdjoint {
                        block: index,
                        deviation,
                    });
                }
                if *field == Field::Real {
                    let im = a.iter().fold(0.0_f64, |m, z| m.max(z.im.abs()));
                    if im > TAU_SYM * scale {
                        return Err(Error::BlockShape {
                            block: index,
                            reason: "imaginary entries in a real symmetric block".into(),
                        });
                    }
                }
                Ok(())
            }
            (Block::Spin { v, .. }, Factor::Spin { n }) if v.len() == *n => Ok(()),
            (Block::Real(_), Factor::Real) => Ok(()),
            _ => Err(Error::BlockShape {
                block: index,
                reason: format!("block does not match factor {factor}"),
            }),
        }
    }
}

/// An element of a descriptor algebra: one block per factor.
#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    algebra: Algebra,
    blocks: Vec<Block>,
}

impl Element {
    /// Builds an element, checking block shapes and self-adjointness.
    pub fn new(algebra: &Algebra, blocks: Vec<Block>) -> Result<Self> {
        if blocks.len() != algebra.factor_count() {
            return Err(Error::DimensionMismatch {
                expected: algebra.factor_count(),
                found: blocks.len(),
            });
        }
        for (i, (b, f)) in blocks.iter().zip(algebra.factors()).enumerate() {
            b.check(i, f)?;
        }
        Ok(Self {
            algebra: algebra.clone(),
            blocks,
        })
    }

    pub(crate) fn from_blocks_unchecked(algebra: &Algebra, blocks: Vec<Block>) -> Self {
        Self {
            algebra: algebra.clone(),
            blocks,
        }
    }

    pub fn zero(algebra: &Algebra) -> Self {
        let blocks = algebra.factors().iter().map(Block::zero).collect();
        Self {
            algebra: algebra.clone(),
            blocks,
        }
    }

    pub fn unit(algebra: &Algebra) -> Self {
        let blocks = algebra.factors().iter().map(Block::unit).collect();
        Self {
            algebra: algebra.clone(),
            blocks,
        }
    }

    /// The unit of factor `index`, zero in every other factor.
    pub fn factor_unit(algebra: &Algebra, index: usize) -> Self {
        let mut e = Self::zero(algebra);
        e.blocks[index] = Block::unit(&algebra.factors()[index]);
        e
    }

    /// A single real symmetric matrix as an element of `Sym(n, ℝ)`.
    pub fn real_matrix(m: DMatrix<f64>) -> Result<Self> {
        let n = m.nrows();
        let algebra = Algebra::herm(n, Field::Real);
        if n == 1 {
            return Self::new(&algebra, vec![Block::Real(m[(0, 0)])]);
        }
        Self::new(
            &algebra,
            vec![Block::Matrix(m.map(|x| Complex64::new(x, 0.0)))],
        )
    }

    /// A single hermitian matrix as an element of `Herm(n, ℂ)`.
    pub fn complex_matrix(m: DMatrix<Complex64>) -> Result<Self> {
        let algebra = Algebra::herm(m.nrows(), Field::Complex);
        Self::new(&algebra, vec![Block::Matrix(m)])
    }

    /// Diagonal real symmetric matrix.
    pub fn diag(entries: &[f64]) -> Self {
        Self::real_matrix(DMatrix::from_diagonal(&DVector::from_row_slice(entries)))
            .expect("diagonal matrices are symmetric")
    }

    /// `λ1 + v` in the spin factor `V_n`, `n = v.len()`.
    pub fn spin(lambda: f64, v: &[f64]) -> Self {
        let algebra = Algebra::spin(v.len());
        Self {
            algebra,
            blocks: vec![Block::Spin {
                lambda,
                v: DVector::from_row_slice(v),
            }],
        }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block(&self, index: usize) -> &Block {
        &self.blocks[index]
    }

    pub fn into_blocks(self) -> Vec<Block> {
        self.blocks
    }

    /// The matrix of the first block, when it is a matrix block.
    pub fn matrix(&self) -> Option<&DMatrix<Complex64>> {
        match self.blocks.first() {
            Some(Block::Matrix(m)) => Some(m),
            _ => None,
        }
    }

    fn same_algebra(&self, other: &Element) -> Result<()> {
        if self.algebra == other.algebra {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    /// Jordan product `a∘b`.
    pub fn jordan(&self, other: &Element) -> Result<Element> {
        self.same_algebra(other)?;
        Ok(self.jordan_unchecked(other))
    }

    pub(crate) fn jordan_unchecked(&self, other: &Element) -> Element {
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.jordan(b))
            .collect();
        Element {
            algebra: self.algebra.clone(),
            blocks,
        }
    }

    pub fn square(&self) -> Element {
        self.jordan_unchecked(self)
    }

    /// Quadratic representation `U_a(b) = 2a∘(a∘b) − a²∘b`.
    pub fn u(&self, b: &Element) -> Result<Element> {
        self.same_algebra(b)?;
        Ok(self.u_unchecked(b))
    }

    pub(crate) fn u_unchecked(&self, b: &Element) -> Element {
        let ab = self.jordan_unchecked(b);
        let first = self.jordan_unchecked(&ab).scale(2.0);
        let second = self.square().jordan_unchecked(b);
        first.sub_unchecked(&second)
    }

    pub fn scale(&self, s: f64) -> Element {
        Element {
            algebra: self.algebra.clone(),
            blocks: self.blocks.iter().map(|b| b.scale(s)).collect(),
        }
    }

    fn zip_unchecked(&self, other: &Element, f: impl Fn(f64, f64) -> f64 + Copy) -> Element {
        Element {
            algebra: self.algebra.clone(),
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a.zip(b, f))
                .collect(),
        }
    }

    pub(crate) fn add_unchecked(&self, other: &Element) -> Element {
        self.zip_unchecked(other, |x, y| x + y)
    }

    pub(crate) fn sub_unchecked(&self, other: &Element) -> Element {
        self.zip_unchecked(other, |x, y| x - y)
    }

    pub fn checked_add(&self, other: &Element) -> Result<Element> {
        self.same_algebra(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn checked_sub(&self, other: &Element) -> Result<Element> {
        self.same_algebra(other)?;
        Ok(self.sub_unchecked(other))
    }

    /// Maximum over factors of the factor norm (spin blocks use `|λ| + ‖v‖₂`).
    pub fn norm(&self) -> f64 {
        self.blocks.iter().fold(0.0, |m, b| m.max(b.norm()))
    }

    /// Maximum absolute eigenvalue. Agrees with [`Element::norm`]: for a spin
    /// block `max |λ ± ‖v‖| = |λ| + ‖v‖`.
    pub fn spectral_norm(&self) -> f64 {
        self.blocks
            .iter()
            .fold(0.0, |m, b| m.max(b.spectral_norm()))
    }

    /// Norm of `self − other`.
    pub fn distance(&self, other: &Element) -> f64 {
        assert_eq!(
            self.algebra, other.algebra,
            "distance between different algebras"
        );
        self.sub_unchecked(other).norm()
    }

    pub fn max_abs(&self) -> f64 {
        self.blocks.iter().fold(0.0, |m, b| m.max(b.max_abs()))
    }

    pub fn trace(&self) -> f64 {
        self.blocks.iter().map(Block::trace).sum()
    }

    /// All eigenvalues with multiplicity, unsorted.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.blocks.iter().flat_map(Block::eigenvalues).collect()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().into_iter().fold(f64::INFINITY, f64::min)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues()
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Positive within `tol` relative to the norm.
    pub fn is_positive(&self, tol: f64) -> bool {
        self.min_eigenvalue() >= -tol * (1.0 + self.norm())
    }

    /// Coordinates in the orthonormal basis of the descriptor (see [`Element::basis`]).
    pub fn coords(&self) -> DVector<f64> {
        let mut out = Vec::with_capacity(self.algebra.dim());
        for (b, f) in self.blocks.iter().zip(self.algebra.factors()) {
            match (b, f) {
                (Block::Matrix(m), Factor::Herm { n, field }) => {
                    let n = *n;
                    out.extend((0..n).map(|i| m[(i, i)].re));
                    for i in 0..n {
                        for j in i + 1..n {
                            out.push(SQRT_2 * m[(i, j)].re);
                        }
                    }
                    if *field == Field::Complex {
                        for i in 0..n {
                            for j in i + 1..n {
                                out.push(SQRT_2 * m[(i, j)].im);
                            }
                        }
                    }
                }
                (Block::Spin { lambda, v }, _) => {
                    out.push(*lambda);
                    out.extend(v.iter());
                }
                (Block::Real(x), _) => out.push(*x),
                _ => unreachable!("blocks validated against the descriptor"),
            }
        }
        DVector::from_vec(out)
    }

    /// Inverse of [`Element::coords`].
    pub fn from_coords(algebra: &Algebra, c: &DVector<f64>) -> Result<Element> {
        if c.len() != algebra.dim() {
            return Err(Error::DimensionMismatch {
                expected: algebra.dim(),
                found: c.len(),
            });
        }
        let mut k = 0;
        let mut next = || {
            let x = c[k];
            k += 1;
            x
        };
        let mut blocks = Vec::with_capacity(algebra.factor_count());
        for f in algebra.factors() {
            blocks.push(match *f {
                Factor::Herm { n, field } => {
                    let mut m = DMatrix::<Complex64>::zeros(n, n);
                    for i in 0..n {
                        m[(i, i)] = Complex64::new(next(), 0.0);
                    }
                    for i in 0..n {
                        for j in i + 1..n {
                            let x = next() / SQRT_2;
                            m[(i, j)].re = x;
                            m[(j, i)].re = x;
                        }
                    }
                    if field == Field::Complex {
                        for i in 0..n {
                            for j in i + 1..n {
                                let y = next() / SQRT_2;
                                m[(i, j)].im = y;
                                m[(j, i)].im = -y;
                            }
                        }
                    }
                    Block::Matrix(m)
                }
                Factor::Spin { n } => {
                    let lambda = next();
                    let v = DVector::from_iterator(n, (0..n).map(|_| next()));
                    Block::Spin { lambda, v }
                }
                Factor::Real => Block::Real(next()),
            });
        }
        Ok(Element {
            algebra: algebra.clone(),
            blocks,
        })
    }

    /// Ordered orthonormal basis for the trace form: per hermitian factor the
    /// diagonal units, then `(E_ij + E_ji)/√2`, then `i(E_ij − E_ji)/√2`
    /// (complex only); per spin factor `1, e₁, …, e_n`.
    pub fn basis(algebra: &Algebra) -> Vec<Element> {
        let d = algebra.dim();
        (0..d)
            .map(|k| {
                let mut c = DVector::zeros(d);
                c[k] = 1.0;
                Element::from_coords(algebra, &c).expect("dimension matches")
            })
            .collect()
    }

    /// Coordinate inner product (the normalized trace form `⟨a, b⟩`).
    pub fn inner(&self, other: &Element) -> f64 {
        self.coords().dot(&other.coords())
    }

    /// Symmetrizes matrix blocks, removing rounding drift from hermiticity.
    pub(crate) fn hermitize(mut self) -> Element {
        for b in &mut self.blocks {
            if let Block::Matrix(m) = b {
                let h = (&*m + m.adjoint()) * Complex64::new(0.5, 0.0);
                *m = h;
            }
        }
        self
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        self.checked_add(rhs).expect("addition within one algebra")
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        self.checked_sub(rhs)
            .expect("subtraction within one algebra")
    }
}

impl Mul<&Element> for f64 {
    type Output = Element;
    fn mul(self, rhs: &Element) -> Element {
        rhs.scale(self)
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale(-1.0)
    }
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawBlock {
    Spin { lambda: f64, v: Vec<f64> },
    Real(f64),
    RealRows(Vec<Vec<f64>>),
    ComplexRows(Vec<Vec<[f64; 2]>>),
}

#[derive(Serialize, Deserialize)]
struct RawElement {
    blocks: Vec<RawBlock>,
}

impl Element {
    fn to_raw(&self) -> RawElement {
        let blocks = self
            .blocks
            .iter()
            .zip(self.algebra.factors())
            .map(|(b, f)| match (b, f) {
                (
                    Block::Matrix(m),
                    Factor::Herm {
                        field: Field::Real, ..
                    },
                ) => RawBlock::RealRows(
                    m.row_iter()
                        .map(|r| r.iter().map(|z| z.re).collect())
                        .collect(),
                ),
                (Block::Matrix(m), _) => RawBlock::ComplexRows(
                    m.row_iter()
                        .map(|r| r.iter().map(|z| [z.re, z.im]).collect())
                        .collect(),
                ),
                (Block::Spin { lambda, v }, _) => RawBlock::Spin {
                    lambda: *lambda,
                    v: v.iter().copied().collect(),
                },
                (Block::Real(x), _) => RawBlock::Real(*x),
            })
            .collect();
        RawElement { blocks }
    }

    fn from_raw(raw: RawElement) -> Result<Element> {
        let mut factors = Vec::with_capacity(raw.blocks.len());
        let mut blocks = Vec::with_capacity(raw.blocks.len());
        for (i, b) in raw.blocks.into_iter().enumerate() {
            let rows_ok = |n: usize, mut lens: std::vec::IntoIter<usize>| {
                if lens.all(|l| l == n) {
                    Ok(())
                } else {
                    Err(Error::BlockShape {
                        block: i,
                        reason: "matrix is not square".into(),
                    })
                }
            };
            match b {
                RawBlock::Real(x) => {
                    factors.push(Factor::Real);
                    blocks.push(Block::Real(x));
                }
                RawBlock::Spin { lambda, v } => {
                    factors.push(Factor::Spin { n: v.len() });
                    blocks.push(Block::Spin {
                        lambda,
                        v: DVector::from_vec(v),
                    });
                }
                RawBlock::RealRows(rows) => {
                    let n = rows.len();
                    rows_ok(n, rows.iter().map(Vec::len).collect::<Vec<_>>().into_iter())?;
                    if n == 1 {
                        factors.push(Factor::Real);
                        blocks.push(Block::Real(rows[0][0]));
                    } else {
                        factors.push(Factor::Herm {
                            n,
                            field: Field::Real,
                        });
                        blocks.push(Block::Matrix(DMatrix::from_fn(n, n, |r, c| {
                            Complex64::new(rows[r][c], 0.0)
                        })));
                    }
                }
                RawBlock::ComplexRows(rows) => {
                    let n = rows.len();
                    rows_ok(n, rows.iter().map(Vec::len).collect::<Vec<_>>().into_iter())?;
                    if n == 1 {
                        factors.push(Factor::Real);
                        blocks.push(Block::Real(rows[0][0][0]));
                    } else {
                        factors.push(Factor::Herm {
                            n,
                            field: Field::Complex,
                        });
                        blocks.push(Block::Matrix(DMatrix::from_fn(n, n, |r, c| {
                            Complex64::new(rows[r][c][0], rows[r][c][1])
                        })));
                    }
                }
            }
        }
        let algebra = Algebra::new(factors)?;
        Element::new(&algebra, blocks)
    }

    /// Parses `{"blocks":[...]}`; the descriptor is inferred from the block shapes.
    pub fn from_json(s: &str) -> Result<Element> {
        Ok(serde_json::from_str(s)?)
    }

    /// Parses an element and checks that it lives in `algebra`.
    pub fn from_json_in(algebra: &Algebra, s: &str) -> Result<Element> {
        let e = Element::from_json(s)?;
        if e.algebra != *algebra {
            return Err(Error::AlgebraMismatch);
        }
        Ok(e)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("element serializes")
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_raw().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawElement::deserialize(d)?;
        Element::from_raw(raw).map_err(serde::de::Error::custom)
    }
}
