use nalgebra::{DMatrix, DVector};

use crate::algebra::Algebra;
use crate::element::Element;
use crate::frame::{sum_detect, Frame};
use crate::linalg;
use crate::linear_map::LinearMap;
use crate::poset::{PosetFragment, Variant};
use crate::projection::Projection;
use crate::random;
use crate::tolerance::TAU_RECON;

use super::{AuditReport, IsoOracle};

/// Matching tolerance between projections recovered from different frames.
const MATCH_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MappingError {
    #[error("image of atom {frame} is not an atom")]
    NonAtomImage { frame: usize },
    #[error("atom {frame}: both assignments are compatible with the compressions and no frame of size >= 3 separates them; enlarge the fragment")]
    Ambiguous { frame: usize },
    #[error("atom {frame}: compression dimensions match neither assignment")]
    CompressionMismatch { frame: usize },
    #[error("atom {frame}: inconsistent assignment across frames")]
    Conflict { frame: usize },
    #[error("no projection constraints")]
    Empty,
    #[error("no linear map fits the projection data (residual {residual:.3e})")]
    Inconsistent { residual: f64 },
}

/// The map `p ↦ ψ(p)` on sample projections.
#[derive(Debug, Clone)]
pub struct ProjectionMap {
    domain: Algebra,
    codomain: Algebra,
    pairs: Vec<(Projection, Projection)>,
    pub(crate) additive: bool,
}

impl ProjectionMap {
    pub fn new(domain: &Algebra, codomain: &Algebra) -> Self {
        Self {
            domain: domain.clone(),
            codomain: codomain.clone(),
            pairs: Vec::new(),
            additive: false,
        }
    }

    pub fn domain(&self) -> &Algebra {
        &self.domain
    }

    pub fn codomain(&self) -> &Algebra {
        &self.codomain
    }

    pub fn pairs(&self) -> &[(Projection, Projection)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Set by a passing [`additivity_audit`] inside the pipeline.
    pub fn is_additive(&self) -> bool {
        self.additive
    }

    pub fn get(&self, p: &Projection) -> Option<&Projection> {
        self.pairs
            .iter()
            .find(|(d, _)| d.approx_eq(p, MATCH_TOL))
            .map(|(_, q)| q)
    }

    /// Adds `p ↦ q`; returns `false` if `p` is already mapped elsewhere.
    pub fn insert(&mut self, p: Projection, q: Projection) -> bool {
        match self.get(&p) {
            Some(existing) => existing.approx_eq(&q, MATCH_TOL),
            None => {
                self.pairs.push((p, q));
                true
            }
        }
    }

    /// Overwrites the image of `p` (or adds it); clears the additivity flag.
    pub fn set(&mut self, p: Projection, q: Projection) {
        self.additive = false;
        match self
            .pairs
            .iter_mut()
            .find(|(d, _)| d.approx_eq(&p, MATCH_TOL))
        {
            Some(pair) => pair.1 = q,
            None => self.pairs.push((p, q)),
        }
    }
}

/// Reads `ψ(p)` off the atom images. In `AS` the atom `span{p}` goes to
/// `span{ψ(p)}`. In `ASU` the atom `span{p, 1−p}` goes to `span{q, 1−q}`
/// and the assignment is fixed by compression dimension, then checked (or
/// decided) by the frames of size at least three in which `p` or `1−p` is a
/// single member.
pub fn projection_map(
    oracle: &IsoOracle,
    fragment: &PosetFragment,
    variant: Variant,
) -> Result<ProjectionMap, MappingError> {
    let mut map = ProjectionMap::new(fragment.algebra(), oracle.codomain());
    let frames = fragment.frames();
    for i in fragment.atoms(variant) {
        let image = oracle.image(i);
        match variant {
            Variant::As => {
                if image.len() != 1 {
                    return Err(MappingError::NonAtomImage { frame: i });
                }
                let p = frames[i].projections()[0].clone();
                if !map.insert(p, image.projections()[0].clone()) {
                    return Err(MappingError::Conflict { frame: i });
                }
            }
            Variant::Asu => {
                if image.len() != 2 {
                    return Err(MappingError::NonAtomImage { frame: i });
                }
                let (p, pc) = (&frames[i].projections()[0], &frames[i].projections()[1]);
                let (q, qc) = (&image.projections()[0], &image.projections()[1]);
                let straight = asu_assignment(fragment, oracle, i, p, pc, q, qc)?;
                let (a, b) = if straight { (q, qc) } else { (qc, q) };
                if !(map.insert(p.clone(), a.clone()) && map.insert(pc.clone(), b.clone())) {
                    return Err(MappingError::Conflict { frame: i });
                }
            }
        }
    }
    if variant == Variant::Asu {
        let unit_a = Projection::unit(fragment.algebra());
        let unit_b = Projection::unit(oracle.codomain());
        if !map.insert(unit_a, unit_b) {
            return Err(MappingError::Conflict { frame: usize::MAX });
        }
    }
    Ok(map)
}

/// `true` for `p ↦ q, 1−p ↦ 1−q`, `false` for the swapped assignment.
fn asu_assignment(
    fragment: &PosetFragment,
    oracle: &IsoOracle,
    atom: usize,
    p: &Projection,
    pc: &Projection,
    q: &Projection,
    qc: &Projection,
) -> Result<bool, MappingError> {
    let (dp, dpc) = (p.compression_dim(), pc.compression_dim());
    let (dq, dqc) = (q.compression_dim(), qc.compression_dim());
    let by_dim = match (dp == dq && dpc == dqc, dp == dqc && dpc == dq) {
        (true, false) => Some(true),
        (false, true) => Some(false),
        (true, true) => None,
        (false, false) => return Err(MappingError::CompressionMismatch { frame: atom }),
    };

    let mut vote: Option<bool> = by_dim;
    for (j, x) in fragment.frames().iter().enumerate() {
        if x.len() < 3 {
            continue;
        }
        let holds = |r: &Projection| x.projections().iter().any(|s| s.approx_eq(r, MATCH_TOL));
        let image = oracle.image(j);
        let shows = |r: &Projection| {
            image
                .projections()
                .iter()
                .any(|s| s.approx_eq(r, MATCH_TOL))
        };
        let decided = if holds(p) {
            Some(shows(q))
        } else if holds(pc) {
            Some(shows(qc))
        } else {
            None
        };
        if let Some(d) = decided {
            match vote {
                None => vote = Some(d),
                Some(v) if v != d => return Err(MappingError::Conflict { frame: atom }),
                _ => {}
            }
        }
    }
    vote.ok_or(MappingError::Ambiguous { frame: atom })
}

/// `{ψ(p) : p ∈ F}` spans `φ(F)` for every frame whose projections are all mapped.
pub fn frame_consistency_audit(
    map: &ProjectionMap,
    oracle: &IsoOracle,
    fragment: &PosetFragment,
) -> AuditReport {
    let mut report = AuditReport::new("frame-consistency");
    for (i, f) in fragment.frames().iter().enumerate() {
        let images: Option<Vec<Projection>> = f
            .projections()
            .iter()
            .map(|p| map.get(p).cloned())
            .collect();
        let Some(images) = images else {
            report.fail(format!("frame {i} has unmapped projections"));
            continue;
        };
        let ok = Frame::new(map.codomain(), images)
            .map(|g| g.same_span(oracle.image(i)))
            .unwrap_or(false);
        report.record(ok, 0.0, || {
            format!("ψ does not carry frame {i} onto its oracle image")
        });
    }
    report
}

/// For every sampled orthogonal pair `p, q` with `p + q` also sampled,
/// checks that `span{ψ(p), ψ(q), ψ(p+q)}` is a two-dimensional associative
/// subalgebra, i.e. `ψ(p+q) = ψ(p) + ψ(q)`.
pub fn additivity_audit(map: &ProjectionMap) -> AuditReport {
    let mut report = AuditReport::new("additivity");
    let pairs = map.pairs();
    for i in 0..pairs.len() {
        for j in i + 1..pairs.len() {
            let (p, q) = (&pairs[i].0, &pairs[j].0);
            if p.is_zero() || q.is_zero() || !p.is_orthogonal_to(q) {
                continue;
            }
            let sum = Projection::trusted(p.add_unchecked(q));
            let Some(z) = map.get(&sum) else { continue };
            let (pi, qj) = (&pairs[i].1, &pairs[j].1);
            let target = pi.add_unchecked(qj);
            let residual = (z.coords() - target.coords()).norm();
            let ok = matches!(sum_detect(pi, qj, z), Ok(true));
            report.record(ok, residual, || {
                format!("ψ(p{i} + p{j}) ≠ ψ(p{i}) + ψ(p{j})")
            });
        }
    }
    report
}

/// Least-squares linear map through the projection constraints.
#[derive(Debug, Clone)]
pub struct Extension {
    pub map: LinearMap,
    pub rank: usize,
    pub unique: bool,
    pub residual: f64,
}

/// Solves `L(pᵢ) = ψ(pᵢ)` in coordinates. Uniqueness holds when the
/// constraints have rank `dim A`; a residual above `τ_recon` means no
/// linear map fits.
pub fn linear_extension(map: &ProjectionMap) -> Result<Extension, MappingError> {
    if map.is_empty() {
        return Err(MappingError::Empty);
    }
    let p_cols: Vec<DVector<f64>> = map.pairs().iter().map(|(p, _)| p.coords()).collect();
    let q_cols: Vec<DVector<f64>> = map.pairs().iter().map(|(_, q)| q.coords()).collect();
    let p = DMatrix::from_columns(&p_cols);
    let q = DMatrix::from_columns(&q_cols);
    let rank = linalg::numerical_rank(&p, 1e-9);
    let l = &q * linalg::pseudo_inverse(&p, 1e-9);
    let residual = (&l * &p - &q)
        .column_iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    if residual > TAU_RECON {
        return Err(MappingError::Inconsistent { residual });
    }
    let mut linear =
        LinearMap::new(map.domain(), map.codomain(), l).expect("shape from constraints");
    linear.flags_mut().additive_on_projections = map.is_additive();
    Ok(Extension {
        map: linear,
        rank,
        unique: rank == map.domain().dim(),
        residual,
    })
}

/// Result of [`jordan_audit`].
#[derive(Debug, Clone)]
pub struct JordanAudit {
    pub report: AuditReport,
    pub jordan: bool,
    pub bijective: bool,
    pub unital: bool,
    pub unital_required: bool,
}

impl JordanAudit {
    pub fn passed(&self) -> bool {
        self.jordan && self.bijective && (self.unital || !self.unital_required)
    }

    /// Sets exactly the flags whose checks passed.
    pub fn apply_flags(&self, map: &mut LinearMap) {
        let flags = map.flags_mut();
        flags.jordan = self.jordan;
        flags.bijective = self.bijective;
        flags.unital = self.unital;
    }
}

const JORDAN_RANDOM_PAIRS: usize = 24;
const JORDAN_SEED: u64 = 0x6a6f7264;

/// Checks `L(x∘y) = L(x)∘L(y)` on all basis pairs and on random pairs,
/// bijectivity, and `L(1) = 1`.
pub fn jordan_audit(map: &LinearMap, unital_required: bool) -> JordanAudit {
    let mut report = AuditReport::new("jordan");
    let domain = map.domain();
    let scale = (1.0 + map.op_norm()).powi(2);
    let tol = TAU_RECON * scale;
    let check = |x: &Element, y: &Element, report: &mut AuditReport, label: &dyn Fn() -> String| {
        let lhs = map.apply(&x.jordan_unchecked(y)).expect("domain element");
        let rhs = map
            .apply(x)
            .expect("domain element")
            .jordan_unchecked(&map.apply(y).expect("domain element"));
        let dev = (lhs.coords() - rhs.coords()).norm();
        report.record(dev <= tol, dev, || {
            format!("{}: deviation {dev:.3e}", label())
        });
    };
    let basis = Element::basis(domain);
    for i in 0..basis.len() {
        for j in i..basis.len() {
            check(&basis[i], &basis[j], &mut report, &|| {
                format!("basis pair ({i}, {j})")
            });
        }
    }
    let mut rng = random::rng(JORDAN_SEED);
    for k in 0..JORDAN_RANDOM_PAIRS {
        let x = random::element(domain, &mut rng);
        let y = random::element(domain, &mut rng);
        let x = x.scale(1.0 / x.coords().norm().max(1e-300));
        let y = y.scale(1.0 / y.coords().norm().max(1e-300));
        check(&x, &y, &mut report, &|| format!("random pair {k}"));
    }
    let jordan = report.passed;

    let bijective = domain.dim() == map.codomain().dim() && map.rank(1e-9) == domain.dim();
    report.record(bijective, 0.0, || "map is not bijective".into());
    let unit_image = map.apply(&Element::unit(domain)).expect("domain element");
    let unit_defect = (unit_image.coords() - Element::unit(map.codomain()).coords()).norm();
    let unital = unit_defect <= TAU_RECON * scale;
    if unital_required {
        report.record(unital, unit_defect, || {
            format!("L(1) ≠ 1 (defect {unit_defect:.3e})")
        });
    }
    JordanAudit {
        report,
        jordan,
        bijective,
        unital,
        unital_required,
    }
}

/// Runs [`jordan_audit`] and returns the map flagged Jordan, bijective and
/// (when it holds) unital.
pub fn certify_jordan(map: &LinearMap) -> Result<LinearMap, Box<JordanAudit>> {
    let audit = jordan_audit(map, false);
    if !audit.passed() {
        return Err(Box::new(audit));
    }
    let mut out = map.clone();
    audit.apply_flags(&mut out);
    Ok(out)
}

/// `L(span F) = φ(F)` for every fragment frame.
pub fn implementation_audit(
    map: &LinearMap,
    oracle: &IsoOracle,
    fragment: &PosetFragment,
) -> AuditReport {
    let mut report = AuditReport::new("implementation");
    for (i, f) in fragment.frames().iter().enumerate() {
        let mut defect = 0.0f64;
        let images: Option<Vec<Projection>> = f
            .projections()
            .iter()
            .map(|p| {
                let x = map.apply(p).ok()?;
                defect = defect.max(x.square().distance(&x));
                Projection::new(x).ok()
            })
            .collect();
        let ok = images
            .and_then(|ps| Frame::new(map.codomain(), ps).ok())
            .map(|g| g.same_span(oracle.image(i)))
            .unwrap_or(false);
        report.record(ok, defect, || {
            format!("L does not carry frame {i} onto its oracle image")
        });
    }
    report
}
