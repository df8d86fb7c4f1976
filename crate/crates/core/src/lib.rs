//! Finite-dimensional Jordan operator algebras and the ordered structures of
//! their associative subalgebras.
//!
//! Algebras are finite direct sums of hermitian matrix factors, spin factors
//! and copies of `ℝ` ([`Algebra`]). Associative subalgebras are handled
//! through their frames of minimal projections ([`Frame`]), which makes the
//! posets `AS(A)` and `ASU(A)` computable. The [`reconstruction`] module
//! recovers a Jordan isomorphism from an order (and orthogonality)
//! preserving map between finite fragments of these posets, and
//! [`amplification`] separates `*`-isomorphisms from anti-isomorphisms via
//! the 2×2 amplification and a Choi-type 2-positivity test.

pub mod algebra;
pub mod amplification;
pub mod element;
pub mod error;
pub mod frame;
pub mod linalg;
pub mod linear_map;
pub mod poset;
pub mod projection;
pub mod random;
pub mod reconstruction;
pub mod spectral;
pub mod suite;
pub mod tolerance;

pub use algebra::{Algebra, Factor, Field};
pub use element::{Block, Element};
pub use error::{Error, Result};
pub use frame::{Frame, UnitalFrame};
pub use linear_map::{LinearMap, MapFlags};
pub use poset::PosetFragment;
pub use projection::Projection;
pub use spectral::{DyadicExpansion, SpectralDecomposition};
