use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, Factor};
use crate::element::{Block, Element};
use crate::error::{Error, Result};
use crate::frame::{spin_frame, Frame};
use crate::linear_map::LinearMap;
use crate::poset::{PosetFragment, Variant};
use crate::projection::Projection;
use crate::random;
use crate::tolerance::TAU_RECON;

use super::{
    hypothesis_violation, implementation_audit, jordan_audit, order_audit, orthogonality_audit,
    reconstruct, AuditReport, IsoOracle, Stage,
};

/// `σ(λ1 + v) = λ1 − v` on `V_n`.
pub fn spin_flip(n: usize) -> Result<LinearMap> {
    if n < 2 {
        return Err(Error::InvalidDescriptor("spin factor needs n >= 2".into()));
    }
    let a = Algebra::spin(n);
    Ok(LinearMap::from_fn(&a, &a, |x| match x.block(0) {
        Block::Spin { lambda, v } => Element::spin(*lambda, (-v).as_slice()),
        _ => unreachable!("spin algebra has one spin block"),
    }))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpinFlipReport {
    pub n: usize,
    pub jordan: AuditReport,
    /// Operator norm of `σ − id` in coordinates.
    pub distance_from_identity: f64,
    /// `σ(A_ξ) = A_ξ` for every sampled unit vector `ξ`.
    pub fixes_frames: AuditReport,
    /// `‖σ² − id‖`.
    pub involution_defect: f64,
    /// The ASU reconstruction guard refuses `V_n`.
    pub asu_guard_refuses: bool,
    pub passed: bool,
}

/// The flip `σ` is a Jordan automorphism different from the identity that
/// fixes every maximal associative unital subalgebra `A_ξ`, so it
/// implements the identity order automorphism of `ASU(V_n)`.
pub fn spin_flip_counterexample(
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<(LinearMap, SpinFlipReport)> {
    let mut sigma = spin_flip(n)?;
    let a = sigma.domain().clone();
    let audit = jordan_audit(&sigma, true);
    audit.apply_flags(&mut sigma);
    let jordan_ok = audit.passed();

    let distance_from_identity = sigma.distance(&LinearMap::identity(&a));
    let mut fixes = AuditReport::new("fixes-spin-frames");
    let mut rng = random::rng(seed);
    for k in 0..samples {
        let xi = random::unit_vector(n, &mut rng);
        let frame = spin_frame(xi.as_slice())?;
        let image = frame.map_projections(&a, |p| Projection::new(sigma.apply(p)?))?;
        let p = &frame.projections()[0];
        let swapped = sigma.apply(p)?.distance(&p.complement());
        report_fix(&mut fixes, image.same_span(&frame), swapped, k);
    }
    let involution_defect = sigma.compose(&sigma)?.distance(&LinearMap::identity(&a));
    let asu_guard_refuses = hypothesis_violation(&a, Variant::Asu).is_some();
    let passed = jordan_ok
        && distance_from_identity >= 1.0
        && fixes.passed
        && involution_defect <= TAU_RECON
        && asu_guard_refuses;
    let report = SpinFlipReport {
        n,
        jordan: audit.report,
        distance_from_identity,
        fixes_frames: fixes,
        involution_defect,
        asu_guard_refuses,
        passed,
    };
    Ok((sigma, report))
}

fn report_fix(report: &mut AuditReport, same: bool, swapped: f64, k: usize) {
    report.record(same && swapped <= TAU_RECON, swapped, || {
        format!("σ moves A_ξ for sample {k}")
    });
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PermutationRow {
    /// Images of the atoms `span{(1,0)}, span{(0,1)}, span{(1,1)}`.
    pub permutation: [usize; 3],
    pub order_preserving: bool,
    pub orthogonality_preserving: bool,
    /// Name of the Jordan automorphism implementing it, if any.
    pub implemented_by: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RrPermutationReport {
    pub rows: Vec<PermutationRow>,
    /// Every Jordan automorphism of `ℝ ⊕ ℝ` fixes the unit, hence `span{(1,1)}`.
    pub automorphisms_unital: bool,
    /// Stage at which reconstruction from the `(1,0) ↔ (1,1)` swap stops.
    pub swap_stops_at: Option<Stage>,
    pub passed: bool,
}

const PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// Over `ℝ ⊕ ℝ`, all six permutations of the three atoms of `AS` preserve
/// order, only those fixing `span{(1,1)}` preserve orthogonality, and only
/// those are implemented by Jordan automorphisms.
pub fn rr_atom_permutation_counterexample() -> Result<RrPermutationReport> {
    let a = Algebra::new(vec![Factor::Real, Factor::Real])?;
    let pt =
        |x: f64, y: f64| Projection::new(Element::new(&a, vec![Block::Real(x), Block::Real(y)])?);
    let atoms = [pt(1.0, 0.0)?, pt(0.0, 1.0)?, pt(1.0, 1.0)?];
    let atom_frames = atoms
        .iter()
        .map(|p| Frame::atom(p.clone()))
        .collect::<Result<Vec<_>>>()?;
    let full = Frame::new(&a, vec![atoms[0].clone(), atoms[1].clone()])?;
    let mut frames = vec![Frame::empty(&a)];
    frames.extend(atom_frames.iter().cloned());
    frames.push(full.clone());
    let fragment = PosetFragment::from_frames(&a, frames)?;

    let identity = LinearMap::identity(&a);
    let flip = LinearMap::from_fn(&a, &a, |x| match x.blocks() {
        [Block::Real(u), Block::Real(v)] => {
            Element::new(&a, vec![Block::Real(*v), Block::Real(*u)]).expect("real blocks")
        }
        _ => unreachable!("two real blocks"),
    });
    let automorphisms = [("identity", identity), ("flip", flip)];
    let automorphisms_unital = automorphisms
        .iter()
        .all(|(_, m)| jordan_audit(m, true).passed());

    let oracle_for = |perm: &[usize; 3]| -> Result<IsoOracle> {
        let mut images = vec![Frame::empty(&a)];
        images.extend(perm.iter().map(|&k| atom_frames[k].clone()));
        images.push(full.clone());
        IsoOracle::new(&a, images)
    };

    let mut rows = Vec::new();
    for perm in &PERMUTATIONS {
        let oracle = oracle_for(perm)?;
        let implemented_by = automorphisms
            .iter()
            .find(|(_, m)| implementation_audit(m, &oracle, &fragment).passed)
            .map(|(name, _)| name.to_string());
        rows.push(PermutationRow {
            permutation: *perm,
            order_preserving: order_audit(&oracle, &fragment).passed,
            orthogonality_preserving: orthogonality_audit(&oracle, &fragment).passed,
            implemented_by,
        });
    }
    let swap_stops_at = reconstruct(&oracle_for(&[2, 1, 0])?, &fragment, Variant::As)
        .err()
        .map(|e| e.stage);

    let fixes_unit_atom = |perm: &[usize; 3]| perm[2] == 2;
    let passed = automorphisms_unital
        && swap_stops_at == Some(Stage::Orthogonality)
        && rows.iter().all(|r| {
            let expected_impl = match r.permutation {
                [0, 1, 2] => Some("identity"),
                [1, 0, 2] => Some("flip"),
                _ => None,
            };
            r.order_preserving
                && r.orthogonality_preserving == fixes_unit_atom(&r.permutation)
                && r.implemented_by.as_deref() == expected_impl
        });
    Ok(RrPermutationReport {
        rows,
        automorphisms_unital,
        swap_stops_at,
        passed,
    })
}
