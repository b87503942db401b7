//! Multidimensional persistent-homology rank invariants of finite simplicial
//! complexes, computed leaf by leaf over a foliation of `Δ⁺` by half-planes,
//! together with the (multidimensional) matching distance between them.
//!
//! The pipeline for two filtered complexes `(X, φ)` and `(Y, ψ)` with
//! `φ, ψ` valued in `ℝⁿ`:
//!
//! 1. pick a leaf `(λ, β)` ([`foliation::leaf_through`] or a grid),
//! 2. reduce `φ` to the scalar `F(x) = maxᵢ (φᵢ(x) − βᵢ)/λᵢ`
//!    ([`foliation::reduce_function`]),
//! 3. compute its persistence diagram ([`homology`], [`diagram`]),
//! 4. compare diagrams with the bottleneck distance ([`matching`]),
//! 5. weight by `minᵢ λᵢ` and take the maximum over leaves ([`multidist`]).

pub mod complex;
pub mod diagram;
pub mod error;
pub mod foliation;
pub mod homology;
pub mod io;
pub mod linalg;
pub mod matching;
pub mod multidist;
pub mod random;
pub mod scalar;

pub use complex::{build_complex, ScalarFiltration, SimplicialComplex, VectorFiltration};
pub use diagram::{DiagramPoint, PersistenceDiagram};
pub use error::{Error, Result};
pub use foliation::{AdmissiblePair, LeafCoordinates, Scheme};
pub use linalg::FieldSpec;
pub use multidist::{FilteredComplex, GridSpec};
pub use scalar::{Extended, ExtendedReal, Rational, Scalar};
