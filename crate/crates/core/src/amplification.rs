//! The complex matrix layer `M_n(ℂ)`, its 2×2 amplification
//! `M₂(𝒜) = M₂ ⊗ 𝒜`, and the Choi-type 2-positivity test that separates
//! `*`-isomorphisms from anti-isomorphisms among unital Jordan maps.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, Factor, Field};
use crate::element::{Block, Element};
use crate::error::{Error, Result};
use crate::linalg;
use crate::linear_map::LinearMap;
use crate::random;
use crate::tolerance::{TAU_ALG, TAU_RECON};

type CMatrix = DMatrix<Complex64>;

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// The full matrix algebra `M_n(ℂ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarAlgebra {
    pub n: usize,
}

impl StarAlgebra {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDescriptor(
                "matrix size must be positive".into(),
            ));
        }
        Ok(Self { n })
    }

    /// The self-adjoint part as a descriptor algebra.
    pub fn self_adjoint_part(&self) -> Algebra {
        Algebra::herm(self.n, Field::Complex)
    }

    pub fn unit(&self) -> CMatrix {
        CMatrix::identity(self.n, self.n)
    }

    /// Matrix unit `e_ij`.
    pub fn unit_matrix(&self, i: usize, j: usize) -> CMatrix {
        let mut m = CMatrix::zeros(self.n, self.n);
        m[(i, j)] = ONE;
        m
    }

    pub fn contains(&self, x: &CMatrix) -> bool {
        x.shape() == (self.n, self.n)
    }
}

/// An element of `M₂(𝒜)`: a `2n × 2n` matrix read as 2×2 blocks of size `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplifiedElement {
    n: usize,
    matrix: CMatrix,
}

impl AmplifiedElement {
    pub fn new(n: usize, matrix: CMatrix) -> Result<Self> {
        if matrix.shape() != (2 * n, 2 * n) {
            return Err(Error::DimensionMismatch {
                expected: 4 * n * n,
                found: matrix.len(),
            });
        }
        Ok(Self { n, matrix })
    }

    /// `p ⊗ q`, whose block `(i, j)` is `p_ij q`.
    pub fn tensor(p: &CMatrix, q: &CMatrix) -> Result<Self> {
        if p.shape() != (2, 2) || !q.is_square() {
            return Err(Error::Precondition(
                "tensor expects a 2×2 and a square matrix".into(),
            ));
        }
        Self::new(q.nrows(), p.kronecker(q))
    }

    /// `1 ⊗ x`: `x` on both diagonal blocks.
    pub fn diagonal(x: &CMatrix) -> Result<Self> {
        Self::tensor(&CMatrix::identity(2, 2), x)
    }

    pub fn from_blocks(blocks: [[CMatrix; 2]; 2]) -> Result<Self> {
        let n = blocks[0][0].nrows();
        let mut m = CMatrix::zeros(2 * n, 2 * n);
        for (i, row) in blocks.iter().enumerate() {
            for (j, b) in row.iter().enumerate() {
                if b.shape() != (n, n) {
                    return Err(Error::DimensionMismatch {
                        expected: n * n,
                        found: b.len(),
                    });
                }
                m.view_mut((i * n, j * n), (n, n)).copy_from(b);
            }
        }
        Self::new(n, m)
    }

    pub fn block(&self, i: usize, j: usize) -> CMatrix {
        self.matrix
            .view((i * self.n, j * self.n), (self.n, self.n))
            .into_owned()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }
}

/// Complex-linear map `M_n(ℂ) → M_m(ℂ)` on column-major vectorizations.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexLinearMap {
    n_in: usize,
    n_out: usize,
    matrix: CMatrix,
}

impl ComplexLinearMap {
    pub fn from_fn(n_in: usize, n_out: usize, f: impl Fn(&CMatrix) -> CMatrix) -> Self {
        let mut matrix = CMatrix::zeros(n_out * n_out, n_in * n_in);
        for j in 0..n_in {
            for i in 0..n_in {
                let mut e = CMatrix::zeros(n_in, n_in);
                e[(i, j)] = ONE;
                let img = f(&e);
                assert_eq!(img.shape(), (n_out, n_out), "image has the wrong size");
                matrix
                    .column_mut(i + n_in * j)
                    .copy_from_slice(img.as_slice());
            }
        }
        Self {
            n_in,
            n_out,
            matrix,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n_in: n,
            n_out: n,
            matrix: CMatrix::identity(n * n, n * n),
        }
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn n_out(&self) -> usize {
        self.n_out
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &CMatrix) -> Result<CMatrix> {
        if x.shape() != (self.n_in, self.n_in) {
            return Err(Error::DimensionMismatch {
                expected: self.n_in * self.n_in,
                found: x.len(),
            });
        }
        let v = &self.matrix * CMatrix::from_column_slice(x.len(), 1, x.as_slice());
        Ok(CMatrix::from_column_slice(
            self.n_out,
            self.n_out,
            v.as_slice(),
        ))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ComplexLinearMap) -> Result<ComplexLinearMap> {
        if other.n_out != self.n_in {
            return Err(Error::DimensionMismatch {
                expected: self.n_in,
                found: other.n_out,
            });
        }
        Ok(Self {
            n_in: other.n_in,
            n_out: self.n_out,
            matrix: &self.matrix * &other.matrix,
        })
    }

    /// Operator norm of the difference of the vectorized matrices.
    pub fn distance(&self, other: &ComplexLinearMap) -> f64 {
        if self.matrix.shape() != other.matrix.shape() {
            return f64::INFINITY;
        }
        linalg::op_norm_c(&(&self.matrix - &other.matrix))
    }
}

fn herm_size(a: &Algebra) -> Result<usize> {
    match a.factors() {
        [Factor::Herm {
            n,
            field: Field::Complex,
        }] => Ok(*n),
        _ => Err(Error::Precondition(format!(
            "{a} is not a full complex matrix algebra"
        ))),
    }
}

fn herm_element(a: &Algebra, m: CMatrix) -> Element {
    let h = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
    Element::new(a, vec![Block::Matrix(h)]).expect("hermitized matrix")
}

/// `ρ(x + iy) = ρ(x) + iρ(y)` for a real-linear `ρ` on self-adjoint parts.
pub fn complexify(rho: &LinearMap) -> Result<ComplexLinearMap> {
    let n = herm_size(rho.domain())?;
    let m = herm_size(rho.codomain())?;
    let dom = rho.domain().clone();
    let apply = |h: CMatrix| -> CMatrix {
        let img = rho.apply(&herm_element(&dom, h)).expect("domain element");
        img.matrix().expect("matrix block").clone()
    };
    let half = Complex64::new(0.5, 0.0);
    Ok(ComplexLinearMap::from_fn(n, m, |z| {
        let x = (z + z.adjoint()) * half;
        let y = (z - z.adjoint()) * (half / I);
        apply(x) + apply(y) * I
    }))
}

/// `Ψ = id ⊗ ρ`: `ρ` applied to each of the four blocks.
pub fn amplify(rho: &ComplexLinearMap) -> ComplexLinearMap {
    let (n, m) = (rho.n_in, rho.n_out);
    ComplexLinearMap::from_fn(2 * n, 2 * m, |x| {
        let x = AmplifiedElement::new(n, x.clone()).expect("amplified shape");
        let blocks = [0, 1].map(|i| [0, 1].map(|j| rho.apply(&x.block(i, j)).expect("block size")));
        AmplifiedElement::from_blocks(blocks)
            .expect("block sizes")
            .into_matrix()
    })
}

/// Pairwise orthogonal nonzero self-adjoint projections in `M_n(ℂ)`.
#[derive(Debug, Clone)]
pub struct AbelianFrame {
    n: usize,
    projections: Vec<CMatrix>,
}

impl AbelianFrame {
    pub fn new(n: usize, projections: Vec<CMatrix>) -> Result<Self> {
        for (i, p) in projections.iter().enumerate() {
            if p.shape() != (n, n) {
                return Err(Error::DimensionMismatch {
                    expected: n * n,
                    found: p.len(),
                });
            }
            let sym = (p - p.adjoint()).norm();
            if sym > TAU_ALG * (1.0 + p.norm()) {
                return Err(Error::NotSelfAdjoint {
                    block: i,
                    deviation: sym,
                });
            }
            let defect = (p * p - p).norm();
            if defect > TAU_ALG * (1.0 + p.norm()) {
                return Err(Error::NotProjection { defect });
            }
            if p.norm() < 0.5 {
                return Err(Error::ZeroProjection(i));
            }
            for (j, q) in projections.iter().enumerate().take(i) {
                if (p * q).norm() > TAU_ALG * 10.0 {
                    return Err(Error::NotOrthogonal {
                        first: j,
                        second: i,
                    });
                }
            }
        }
        Ok(Self { n, projections })
    }

    /// `{e₁₁, …, e_nn}`.
    pub fn diagonal(n: usize) -> Self {
        let s = StarAlgebra { n };
        Self {
            n,
            projections: (0..n).map(|i| s.unit_matrix(i, i)).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn projections(&self) -> &[CMatrix] {
        &self.projections
    }

    pub fn len(&self) -> usize {
        self.projections.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projections.is_empty()
    }

    pub fn is_unital(&self) -> bool {
        let sum = self
            .projections
            .iter()
            .fold(CMatrix::zeros(self.n, self.n), |acc, p| acc + p);
        (sum - CMatrix::identity(self.n, self.n)).norm() <= TAU_ALG * 10.0
    }

    /// All products commute and distinct members annihilate each other.
    pub fn is_abelian(&self) -> bool {
        let tol = TAU_ALG * 10.0;
        self.projections.iter().enumerate().all(|(i, p)| {
            self.projections.iter().enumerate().all(|(j, q)| {
                let pq = p * q;
                (&pq - q * p).norm() <= tol && (i == j || pq.norm() <= tol)
            })
        })
    }
}

/// Frame of `C ⊗ D` in `M₂(𝒜)`: all `p ⊗ q`.
pub fn tensor_abelian(c: &AbelianFrame, d: &AbelianFrame) -> Result<AbelianFrame> {
    if c.n != 2 {
        return Err(Error::Precondition("first factor must live in M2".into()));
    }
    let projections = c
        .projections
        .iter()
        .flat_map(|p| d.projections.iter().map(move |q| p.kronecker(q)))
        .collect();
    AbelianFrame::new(2 * d.n, projections)
}

/// `X* = ½ Σ_{i,j<2} e_ij ⊗ e_ij` in `M₂(M_n)`, `n ≥ 2`: the maximally
/// entangled projection on the top-left `2 × 2` corner.
pub fn entangled_witness(n: usize) -> CMatrix {
    let s = StarAlgebra { n };
    let mut x = CMatrix::zeros(2 * n, 2 * n);
    for i in 0..2 {
        for j in 0..2 {
            let mut e = CMatrix::zeros(2, 2);
            e[(i, j)] = ONE;
            x += e.kronecker(&s.unit_matrix(i, j));
        }
    }
    x * Complex64::new(0.5, 0.0)
}

fn sorted_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut ev = crate::linalg::hermitian_eigenvalues(m);
    ev.sort_by(f64::total_cmp);
    ev
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TwoPositivityReport {
    pub n: usize,
    /// Spectrum of `Ψ(X*)`, ascending.
    pub witness_eigenvalues: Vec<f64>,
    pub witness_min_eigenvalue: f64,
    pub trials: usize,
    pub random_min_eigenvalue: f64,
    /// Minimum over index pairs `a < b` of the smallest eigenvalue of the
    /// restricted Choi matrix `½ Σ_{i,j∈{a,b}} e_ij ⊗ ρ(e_ij)`.
    pub pair_choi_min_eigenvalue: f64,
    /// Smallest eigenvalue of the full Choi matrix `Σ e_ij ⊗ ρ(e_ij)`.
    pub choi_min_eigenvalue: f64,
    pub two_positive: bool,
}

/// Searches for a positive `X ∈ M₂(M_n)` with `Ψ(X)` not positive, using
/// the entangled witness, `trials` random positive `X` and the restricted
/// Choi matrices. Requires `ρ` flagged Jordan.
pub fn two_positivity_test<R: Rng + ?Sized>(
    rho: &LinearMap,
    trials: usize,
    rng: &mut R,
) -> Result<TwoPositivityReport> {
    if !rho.flags().jordan {
        return Err(Error::Precondition("map is not flagged Jordan".into()));
    }
    let c = complexify(rho)?;
    let n = c.n_in;
    if n < 2 {
        return Err(Error::Precondition("2-positivity needs n >= 2".into()));
    }
    let psi = amplify(&c);
    let witness = psi.apply(&entangled_witness(n))?;
    let witness_eigenvalues = sorted_eigenvalues(&witness);
    let witness_min_eigenvalue = witness_eigenvalues[0];

    let mut random_min_eigenvalue = f64::INFINITY;
    for _ in 0..trials {
        let g = random_complex(2 * n, rng);
        let x = &g * g.adjoint();
        let x = &x / Complex64::new(linalg::op_norm_c(&x).max(1e-300), 0.0);
        random_min_eigenvalue = random_min_eigenvalue.min(sorted_eigenvalues(&psi.apply(&x)?)[0]);
    }

    let s = StarAlgebra { n };
    let mut pair_choi_min_eigenvalue = f64::INFINITY;
    for a in 0..n {
        for b in a + 1..n {
            let mut x = CMatrix::zeros(2 * n, 2 * n);
            for (k, &i) in [a, b].iter().enumerate() {
                for (l, &j) in [a, b].iter().enumerate() {
                    let mut e = CMatrix::zeros(2, 2);
                    e[(k, l)] = Complex64::new(0.5, 0.0);
                    x += e.kronecker(&c.apply(&s.unit_matrix(i, j))?);
                }
            }
            pair_choi_min_eigenvalue = pair_choi_min_eigenvalue.min(sorted_eigenvalues(&x)[0]);
        }
    }

    let mut choi = CMatrix::zeros(n * c.n_out, n * c.n_out);
    for i in 0..n {
        for j in 0..n {
            choi += s
                .unit_matrix(i, j)
                .kronecker(&c.apply(&s.unit_matrix(i, j))?);
        }
    }
    let choi_min_eigenvalue = sorted_eigenvalues(&choi)[0];

    let two_positive = witness_min_eigenvalue >= -TAU_ALG
        && random_min_eigenvalue >= -TAU_ALG
        && pair_choi_min_eigenvalue >= -TAU_ALG;
    Ok(TwoPositivityReport {
        n,
        witness_eigenvalues,
        witness_min_eigenvalue,
        trials,
        random_min_eigenvalue: if trials == 0 {
            0.0
        } else {
            random_min_eigenvalue
        },
        pair_choi_min_eigenvalue,
        choi_min_eigenvalue,
        two_positive,
    })
}

fn random_complex<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    use rand_distr::StandardNormal;
    CMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    StarIsomorphism,
    Rejected,
    NotAmplified,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AmplificationReport {
    pub n: usize,
    pub alfa_checked: usize,
    /// Largest `‖Ψ(p⊗q) − p⊗q′‖` over sampled pairs.
    pub alfa_residual: f64,
    /// First `(p, q)` sample indices where `Ψ(p⊗q) ∉ p ⊗ (projections)`.
    pub violating_pair: Option<(usize, usize)>,
    /// `‖Ψ − amplify(ρ)‖` for `ρ` read off the corner block.
    pub amplified_form_residual: f64,
    /// `‖ρ − complexify(ψ)‖`.
    pub rho_matches_psi: f64,
    pub two_positivity: Option<TwoPositivityReport>,
    pub verdict: Verdict,
}

/// Audits a candidate amplification `Ψ` of the Jordan map `ψ`: the tensor
/// condition `Ψ(p⊗q) = p⊗q′` on sampled projections, the amplified form
/// `Ψ = id ⊗ ρ`, `ρ = ψ`, and finally 2-positivity of `ψ`.
pub fn amplification_audit<R: Rng + ?Sized>(
    psi: &LinearMap,
    big_psi: &ComplexLinearMap,
    samples: usize,
    rng: &mut R,
) -> Result<AmplificationReport> {
    if !psi.flags().jordan {
        return Err(Error::Precondition("map is not flagged Jordan".into()));
    }
    let n = herm_size(psi.domain())?;
    if big_psi.n_in != 2 * n || big_psi.n_out != 2 * herm_size(psi.codomain())? {
        return Err(Error::DimensionMismatch {
            expected: 2 * n,
            found: big_psi.n_in,
        });
    }
    let m = big_psi.n_out / 2;
    let tol = TAU_RECON;

    let mut ps: Vec<CMatrix> = vec![
        StarAlgebra { n: 2 }.unit_matrix(0, 0),
        StarAlgebra { n: 2 }.unit_matrix(1, 1),
    ];
    let mut qs: Vec<CMatrix> = vec![StarAlgebra { n }.unit()];
    for _ in 0..samples {
        ps.push(random::rank_projection(2, 1, Field::Complex, rng));
        let rank = rng.gen_range(1..=n);
        qs.push(random::rank_projection(n, rank, Field::Complex, rng));
    }

    let mut alfa_residual = 0.0f64;
    let mut violating_pair = None;
    let mut alfa_checked = 0;
    'outer: for (i, p) in ps.iter().enumerate() {
        for (j, q) in qs.iter().enumerate() {
            alfa_checked += 1;
            let y = AmplifiedElement::new(m, big_psi.apply(&p.kronecker(q))?)?;
            // least-squares q′ with y ≈ p ⊗ q′
            let mut q_prime = CMatrix::zeros(m, m);
            for a in 0..2 {
                for b in 0..2 {
                    q_prime += y.block(a, b) * p[(a, b)].conj();
                }
            }
            q_prime /= Complex64::new(p.norm_squared(), 0.0);
            let fit = (y.matrix() - p.kronecker(&q_prime)).norm();
            let idem =
                (&q_prime * &q_prime - &q_prime).norm() + (&q_prime - q_prime.adjoint()).norm();
            let nonzero = q_prime.norm() > 0.5;
            alfa_residual = alfa_residual.max(fit).max(idem);
            if fit > tol || idem > tol || !nonzero {
                violating_pair = Some((i, j));
                break 'outer;
            }
        }
    }

    let mut report = AmplificationReport {
        n,
        alfa_checked,
        alfa_residual,
        violating_pair,
        amplified_form_residual: f64::NAN,
        rho_matches_psi: f64::NAN,
        two_positivity: None,
        verdict: Verdict::NotAmplified,
    };
    if violating_pair.is_some() {
        return Ok(report);
    }

    let e11 = StarAlgebra { n: 2 }.unit_matrix(0, 0);
    let rho = ComplexLinearMap::from_fn(n, m, |x| {
        let y = AmplifiedElement::new(m, big_psi.apply(&e11.kronecker(x)).expect("size"))
            .expect("size");
        y.block(0, 0)
    });
    report.amplified_form_residual = big_psi.distance(&amplify(&rho));
    if report.amplified_form_residual > tol {
        return Ok(report);
    }
    report.rho_matches_psi = rho.distance(&complexify(psi)?);
    let two = two_positivity_test(psi, samples, rng)?;
    report.verdict = if report.rho_matches_psi <= tol && two.two_positive {
        Verdict::StarIsomorphism
    } else {
        Verdict::Rejected
    };
    report.two_positivity = Some(two);
    Ok(report)
}

/// `x ↦ u x u*` on `Herm(n, ℂ)`.
pub fn conjugation(u: &CMatrix) -> LinearMap {
    let a = Algebra::herm(u.nrows(), Field::Complex);
    LinearMap::from_fn(&a, &a, |x| {
        herm_element(&a, u * x.matrix().expect("matrix block") * u.adjoint())
    })
}

/// `x ↦ xᵀ` on `Herm(n, ℂ)`.
pub fn transpose(n: usize) -> LinearMap {
    let a = Algebra::herm(n, Field::Complex);
    LinearMap::from_fn(&a, &a, |x| {
        herm_element(&a, x.matrix().expect("matrix block").transpose())
    })
}

/// Swaps the diagonal blocks of `M₂(𝒜)` and keeps the off-diagonal ones.
pub fn swap_diagonal_blocks(n: usize) -> ComplexLinearMap {
    ComplexLinearMap::from_fn(2 * n, 2 * n, |x| {
        let x = AmplifiedElement::new(n, x.clone()).expect("amplified shape");
        AmplifiedElement::from_blocks([
            [x.block(1, 1), x.block(0, 1)],
            [x.block(1, 0), x.block(0, 0)],
        ])
        .expect("block sizes")
        .into_matrix()
    })
}
