use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::frame::{Frame, FrameDoc};
use crate::linear_map::LinearMap;
use crate::poset::{PosetFragment, Variant};
use crate::projection::Projection;

use super::AuditReport;

/// A finite table `frames[i] ↦ images[i]` from a fragment of `A` into frames of `B`.
#[derive(Debug, Clone)]
pub struct IsoOracle {
    codomain: Algebra,
    images: Vec<Frame>,
}

impl IsoOracle {
    pub fn new(codomain: &Algebra, images: Vec<Frame>) -> Result<Self> {
        if images.iter().any(|f| f.algebra() != codomain) {
            return Err(Error::AlgebraMismatch);
        }
        Ok(Self {
            codomain: codomain.clone(),
            images,
        })
    }

    /// Identity table on a fragment.
    pub fn identity(fragment: &PosetFragment) -> Self {
        Self {
            codomain: fragment.algebra().clone(),
            images: fragment.frames().to_vec(),
        }
    }

    pub fn codomain(&self) -> &Algebra {
        &self.codomain
    }

    pub fn images(&self) -> &[Frame] {
        &self.images
    }

    pub fn image(&self, index: usize) -> &Frame {
        &self.images[index]
    }

    /// Replaces one image (used to build corrupted oracles).
    pub fn with_image(mut self, index: usize, frame: Frame) -> Result<Self> {
        if frame.algebra() != &self.codomain {
            return Err(Error::AlgebraMismatch);
        }
        self.images[index] = frame;
        Ok(self)
    }

    pub(crate) fn check_shape(
        &self,
        fragment: &PosetFragment,
        variant: Variant,
    ) -> std::result::Result<(), String> {
        if self.images.len() != fragment.len() {
            return Err(format!(
                "oracle has {} images for {} frames",
                self.images.len(),
                fragment.len()
            ));
        }
        if variant == Variant::Asu {
            for (i, (f, g)) in fragment.frames().iter().zip(&self.images).enumerate() {
                if !f.is_unital() {
                    return Err(format!("frame {i} is not unital"));
                }
                if !g.is_unital() {
                    return Err(format!("image of frame {i} is not unital"));
                }
            }
        }
        Ok(())
    }

    pub fn to_doc(&self) -> OracleDoc {
        OracleDoc {
            codomain: self.codomain.clone(),
            images: self.images.iter().map(Frame::to_doc).collect(),
        }
    }

    pub fn from_doc(doc: OracleDoc) -> Result<Self> {
        let images = doc
            .images
            .into_iter()
            .map(|f| Frame::from_doc(&doc.codomain, f))
            .collect::<Result<Vec<_>>>()?;
        Self::new(&doc.codomain, images)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("oracle serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_doc(serde_json::from_str(s)?)
    }
}

/// JSON form `{"codomain":…, "images":[frame, …]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleDoc {
    pub codomain: Algebra,
    pub images: Vec<FrameDoc>,
}

/// The oracle implemented by a verified Jordan isomorphism: each frame goes
/// to the frame of `ψ(span F)`.
pub fn induce_oracle(psi: &LinearMap, fragment: &PosetFragment) -> Result<IsoOracle> {
    if !psi.flags().jordan {
        return Err(Error::Precondition("map is not flagged Jordan".into()));
    }
    if psi.domain() != fragment.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let images = fragment
        .frames()
        .iter()
        .map(|f| f.map_projections(psi.codomain(), |p| Projection::new(psi.apply(p)?)))
        .collect::<Result<Vec<_>>>()?;
    IsoOracle::new(psi.codomain(), images)
}

/// Inclusion is preserved in both directions: `F ⊆ G ⇔ φ(F) ⊆ φ(G)`. This
/// also forces injectivity.
pub fn order_audit(oracle: &IsoOracle, fragment: &PosetFragment) -> AuditReport {
    let mut report = AuditReport::new("order");
    let frames = fragment.frames();
    for i in 0..frames.len() {
        for j in 0..frames.len() {
            if i == j {
                continue;
            }
            let before = fragment.includes(j, i);
            let after = oracle.images[j].includes(&oracle.images[i]);
            report.record(before == after, 0.0, || {
                format!("frame {i} ⊆ frame {j} is {before} but holds {after} for the images")
            });
        }
    }
    report
}

/// Orthogonality is preserved in both directions.
pub fn orthogonality_audit(oracle: &IsoOracle, fragment: &PosetFragment) -> AuditReport {
    let mut report = AuditReport::new("orthogonality");
    let frames = fragment.frames();
    for i in 0..frames.len() {
        for j in i + 1..frames.len() {
            let before = fragment.orthogonal(i, j);
            let after = oracle.images[i].is_orthogonal_to(&oracle.images[j]);
            report.record(before == after, 0.0, || {
                format!("frames {i} ⊥ {j} is {before} but holds {after} for the images")
            });
        }
    }
    report
}
