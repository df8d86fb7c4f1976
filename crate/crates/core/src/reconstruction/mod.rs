//! Recovering a Jordan isomorphism from an order isomorphism between finite
//! fragments of `ASU` or `AS`.
//!
//! The pipeline is sequential: oracle audits, the projection map read off
//! the atoms, frame consistency, additivity on orthogonal pairs, an exact
//! linear extension with a rank certificate, a Jordan audit and a final
//! check that the recovered map implements the oracle.

mod counterexample;
mod oracle;
mod pipeline;

use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::frame::classify_two_dim_maximal;
use crate::linear_map::LinearMap;
use crate::poset::{PosetFragment, Variant};

pub use counterexample::{
    rr_atom_permutation_counterexample, spin_flip, spin_flip_counterexample, PermutationRow,
    RrPermutationReport, SpinFlipReport,
};
pub use oracle::{induce_oracle, order_audit, orthogonality_audit, IsoOracle, OracleDoc};
pub use pipeline::{
    additivity_audit, certify_jordan, frame_consistency_audit, implementation_audit, jordan_audit,
    linear_extension, projection_map, Extension, JordanAudit, MappingError, ProjectionMap,
};

/// Outcome of one audit: failures are data, not errors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub name: String,
    pub passed: bool,
    pub checked: usize,
    pub max_residual: f64,
    pub failures: Vec<String>,
}

impl AuditReport {
    pub fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            passed: true,
            checked: 0,
            max_residual: 0.0,
            failures: Vec::new(),
        }
    }

    pub fn record(&mut self, ok: bool, residual: f64, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if residual.is_finite() {
            self.max_residual = self.max_residual.max(residual);
        }
        if !ok {
            self.passed = false;
            self.failures.push(describe());
        }
    }

    pub fn fail(&mut self, message: String) {
        self.record(false, 0.0, || message);
    }
}

/// Pipeline stage names, in execution order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Hypothesis,
    Oracle,
    Order,
    Orthogonality,
    ProjectionMap,
    FrameConsistency,
    Additivity,
    LinearExtension,
    Jordan,
    Implementation,
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = serde_json::to_value(self).expect("stage serializes");
        write!(f, "{}", s.as_str().unwrap_or("?"))
    }
}

/// Structured failure naming the stage that stopped the pipeline, with the
/// audits run up to that point.
#[derive(Debug, Clone, Serialize, Deserialize, thiserror::Error)]
#[error("reconstruction failed at stage {stage}: {message}")]
pub struct ReconstructionError {
    pub stage: Stage,
    pub message: String,
    pub audits: Vec<AuditReport>,
}

/// A successful reconstruction.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Reconstruction {
    pub map: LinearMap,
    /// Constraint rank equals `dim A`.
    pub unique: bool,
    pub constraint_rank: usize,
    pub residual: f64,
    pub audits: Vec<AuditReport>,
}

/// Whether the theorem for `variant` applies to `algebra`. For `ASU` the
/// algebra must not have a two-dimensional maximal associative unital
/// subalgebra; for `AS` it must have no Type I₂ summand.
pub fn hypothesis_violation(algebra: &Algebra, variant: Variant) -> Option<String> {
    match variant {
        Variant::Asu if classify_two_dim_maximal(algebra) => Some(format!(
            "{algebra} is a Type I2 factor or R+R: ASU does not determine the Jordan structure"
        )),
        Variant::As if algebra.has_type_i2_summand() => Some(format!(
            "{algebra} has a Type I2 summand: AS does not determine the Jordan structure"
        )),
        _ => None,
    }
}

/// Runs the whole pipeline and returns a fully flagged map or the failing stage.
pub fn reconstruct(
    oracle: &IsoOracle,
    fragment: &PosetFragment,
    variant: Variant,
) -> Result<Reconstruction, ReconstructionError> {
    let mut audits: Vec<AuditReport> = Vec::new();
    macro_rules! bail {
        ($stage:expr, $msg:expr) => {
            return Err(ReconstructionError {
                stage: $stage,
                message: $msg,
                audits,
            })
        };
    }
    macro_rules! audit {
        ($stage:expr, $report:expr) => {{
            let report = $report;
            let ok = report.passed;
            let summary = report.failures.first().cloned().unwrap_or_default();
            audits.push(report);
            if !ok {
                bail!($stage, summary);
            }
        }};
    }

    if let Some(reason) = hypothesis_violation(fragment.algebra(), variant) {
        bail!(Stage::Hypothesis, reason);
    }
    if let Err(e) = oracle.check_shape(fragment, variant) {
        bail!(Stage::Oracle, e);
    }
    audit!(Stage::Order, order_audit(oracle, fragment));
    if variant == Variant::As {
        audit!(Stage::Orthogonality, orthogonality_audit(oracle, fragment));
    }
    let mut pmap = match projection_map(oracle, fragment, variant) {
        Ok(m) => m,
        Err(e) => bail!(Stage::ProjectionMap, e.to_string()),
    };
    audit!(
        Stage::FrameConsistency,
        frame_consistency_audit(&pmap, oracle, fragment)
    );
    let additivity = additivity_audit(&pmap);
    pmap.additive = additivity.passed;
    audit!(Stage::Additivity, additivity);

    let ext = match linear_extension(&pmap) {
        Ok(e) => e,
        Err(e) => bail!(Stage::LinearExtension, e.to_string()),
    };
    if !ext.unique {
        bail!(
            Stage::LinearExtension,
            format!(
                "constraint rank {} < dim {}: the fragment does not span, extension is not unique",
                ext.rank,
                fragment.algebra().dim()
            )
        );
    }
    let mut map = ext.map;
    let jordan = jordan_audit(&map, variant == Variant::Asu);
    jordan.apply_flags(&mut map);
    let passed = jordan.passed();
    audits.push(jordan.report);
    if !passed {
        let summary = audits
            .last()
            .and_then(|a| a.failures.first().cloned())
            .unwrap_or_default();
        bail!(Stage::Jordan, summary);
    }
    audit!(
        Stage::Implementation,
        implementation_audit(&map, oracle, fragment)
    );
    Ok(Reconstruction {
        map,
        unique: ext.unique,
        constraint_rank: ext.rank,
        residual: ext.residual,
        audits,
    })
}
