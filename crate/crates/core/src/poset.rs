//! Finite fragments of the posets `AS(A)` and `ASU(A)`.

use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::frame::{generate_assoc, span_rank, Frame, FrameDoc, UnitalFrame};
use crate::projection::Projection;

/// Which poset a fragment samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Unital associative subalgebras, ordered by inclusion.
    Asu,
    /// All associative subalgebras, with inclusion and orthogonality.
    As,
}

impl std::str::FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "asu" => Ok(Variant::Asu),
            "as" => Ok(Variant::As),
            other => Err(Error::Precondition(format!("unknown variant `{other}`"))),
        }
    }
}

/// A finite set of frames together with their inclusion and orthogonality
/// relations. The relations are always recomputed from the frames.
#[derive(Debug, Clone)]
pub struct PosetFragment {
    algebra: Algebra,
    frames: Vec<Frame>,
    /// `(i, j)` with `i ≠ j` and `frames[i] ⊆ frames[j]`.
    order: Vec<(usize, usize)>,
    /// `(i, j)` with `i < j` and `frames[i] ⊥ frames[j]`.
    orth: Vec<(usize, usize)>,
}

impl PosetFragment {
    /// Fragment on the given frames; duplicates (same span) are dropped,
    /// keeping first occurrences.
    pub fn from_frames(algebra: &Algebra, frames: Vec<Frame>) -> Result<Self> {
        let mut unique: Vec<Frame> = Vec::with_capacity(frames.len());
        for f in frames {
            if f.algebra() != algebra {
                return Err(Error::AlgebraMismatch);
            }
            if !unique.iter().any(|g| g.same_span(&f)) {
                unique.push(f);
            }
        }
        Ok(Self::with_relations(algebra, unique))
    }

    fn with_relations(algebra: &Algebra, frames: Vec<Frame>) -> Self {
        let (order, orth) = relations(&frames);
        Self {
            algebra: algebra.clone(),
            frames,
            order,
            orth,
        }
    }

    /// Fragment generated from sample elements: their full spectral frames,
    /// all merges of two projections inside those frames (the construction
    /// behind proper unital subalgebras), pairwise intersections, and the
    /// atoms over every projection that occurs. For [`Variant::Asu`] the
    /// atoms are `span{p, 1−p}` and the unit algebra is included; for
    /// [`Variant::As`] they are `span{p}`.
    pub fn build(algebra: &Algebra, variant: Variant, elements: &[Element]) -> Result<Self> {
        let unit = Element::unit(algebra);
        let mut maximal = Vec::new();
        for x in elements {
            if x.algebra() != algebra {
                return Err(Error::AlgebraMismatch);
            }
            maximal.push(generate_assoc(&[x.clone(), unit.clone()])?);
        }
        let mut frames: Vec<Frame> = maximal.clone();
        for f in &maximal {
            frames.extend(merges(f)?);
        }
        for i in 0..maximal.len() {
            for j in i + 1..maximal.len() {
                let meet = maximal[i].intersect(&maximal[j])?;
                if !meet.is_empty() {
                    frames.push(meet);
                }
            }
        }
        let mut samples: Vec<Projection> = Vec::new();
        for f in &frames {
            for p in f.projections() {
                push_unique(&mut samples, p);
            }
        }
        match variant {
            Variant::As => {
                for p in samples {
                    frames.push(Frame::atom(p)?);
                }
            }
            Variant::Asu => {
                frames.push(Frame::unit(algebra));
                for p in samples {
                    if !p.is_unit() {
                        frames.push(UnitalFrame::from_projection(&p)?.into_frame());
                    }
                }
            }
        }
        Self::from_frames(algebra, frames)
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn order(&self) -> &[(usize, usize)] {
        &self.order
    }

    pub fn orth(&self) -> &[(usize, usize)] {
        &self.orth
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn includes(&self, i: usize, j: usize) -> bool {
        i == j || self.order.contains(&(j, i))
    }

    pub fn orthogonal(&self, i: usize, j: usize) -> bool {
        self.orth.contains(&(i.min(j), i.max(j)))
    }

    /// Every projection occurring in some frame, without repetition.
    pub fn sample_projections(&self) -> Vec<Projection> {
        let mut out = Vec::new();
        for f in &self.frames {
            for p in f.projections() {
                push_unique(&mut out, p);
            }
        }
        out
    }

    /// The sample projections span the whole algebra.
    pub fn is_spanning(&self) -> bool {
        let samples = self.sample_projections();
        span_rank(samples.iter().map(|p| p.element())) == self.algebra.dim()
    }

    /// Indices of atoms of the given poset.
    pub fn atoms(&self, variant: Variant) -> Vec<usize> {
        (0..self.frames.len())
            .filter(|&i| match variant {
                Variant::As => self.frames[i].is_atom_as(),
                Variant::Asu => self.frames[i].len() == 2 && self.frames[i].is_unital(),
            })
            .collect()
    }

    pub fn heights(&self) -> Vec<usize> {
        self.frames.iter().map(Frame::height).collect()
    }

    /// For each frame: `Some(maximal)` when it is unital, `None` otherwise.
    pub fn maximal_flags(&self) -> Vec<Option<bool>> {
        self.frames
            .iter()
            .map(|f| UnitalFrame::new(f.clone()).ok().map(|u| u.is_maximal()))
            .collect()
    }

    /// Whether the stored relations agree with the ones recomputed from the frames.
    pub fn relations_consistent(&self) -> bool {
        let (order, orth) = relations(&self.frames);
        order == self.order && orth == self.orth
    }

    pub fn to_doc(&self) -> FragmentDoc {
        FragmentDoc {
            algebra: self.algebra.clone(),
            frames: self.frames.iter().map(Frame::to_doc).collect(),
            order: self.order.iter().map(|&(i, j)| [i, j]).collect(),
            orth: self.orth.iter().map(|&(i, j)| [i, j]).collect(),
            spanning: self.is_spanning(),
        }
    }

    /// Rebuilds frames from JSON and checks the stored relations against them.
    pub fn from_doc(doc: FragmentDoc) -> Result<Self> {
        let frames = doc
            .frames
            .into_iter()
            .map(|f| Frame::from_doc(&doc.algebra, f))
            .collect::<Result<Vec<_>>>()?;
        let fragment = Self::with_relations(&doc.algebra, frames);
        let order: Vec<(usize, usize)> = doc.order.iter().map(|p| (p[0], p[1])).collect();
        let orth: Vec<(usize, usize)> = doc.orth.iter().map(|p| (p[0], p[1])).collect();
        if !(doc.order.is_empty() && doc.orth.is_empty())
            && (sorted(order) != fragment.order || sorted(orth) != fragment.orth)
        {
            return Err(Error::Precondition(
                "stored relations disagree with the frames".into(),
            ));
        }
        Ok(fragment)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("fragment serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_doc(serde_json::from_str(s)?)
    }
}

fn sorted(mut v: Vec<(usize, usize)>) -> Vec<(usize, usize)> {
    v.sort_unstable();
    v
}

type Relations = Vec<(usize, usize)>;

fn relations(frames: &[Frame]) -> (Relations, Relations) {
    let mut order = Vec::new();
    let mut orth = Vec::new();
    for (i, a) in frames.iter().enumerate() {
        for (j, b) in frames.iter().enumerate() {
            if i != j && b.includes(a) {
                order.push((i, j));
            }
            if i < j && a.is_orthogonal_to(b) {
                orth.push((i, j));
            }
        }
    }
    (order, orth)
}

fn push_unique(out: &mut Vec<Projection>, p: &Projection) {
    if !out.iter().any(|q| q.approx_eq(p, 1e-7)) {
        out.push(p.clone());
    }
}

/// All frames obtained from `f` by merging two of its projections.
fn merges(f: &Frame) -> Result<Vec<Frame>> {
    let ps = f.projections();
    let mut out = Vec::new();
    for i in 0..ps.len() {
        for j in i + 1..ps.len() {
            let mut rest: Vec<Projection> = ps
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != i && k != j)
                .map(|(_, p)| p.clone())
                .collect();
            rest.push(Projection::trusted(ps[i].add_unchecked(&ps[j])));
            out.push(Frame::new(f.algebra(), rest)?);
        }
    }
    Ok(out)
}

/// JSON form `{"algebra":…, "frames":[…], "order":[[i,j],…], "orth":[[i,j],…], "spanning":…}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FragmentDoc {
    pub algebra: Algebra,
    pub frames: Vec<FrameDoc>,
    #[serde(default)]
    pub order: Vec<[usize; 2]>,
    #[serde(default)]
    pub orth: Vec<[usize; 2]>,
    #[serde(default)]
    pub spanning: bool,
}
