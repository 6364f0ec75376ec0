//! Exact symbolic engine for anchored bundles with connection over a
//! coordinate chart: free (almost-)Lie algebroids truncated at a bracket
//! depth, Cartan connection extension, compatibility tensors, induced
//! representations and universal morphisms onto finite-rank Lie algebroids.
//!
//! Everything is computed in a differential algebra of rational functions
//! over the rationals, so every identity check is an exact zero test.

mod algebroid;
mod bracket;
mod bundle;
mod chart;
mod error;
mod finite;
mod gcd;
mod parse;
mod poly;
mod scalar;
mod tensor;

pub use algebroid::{
    fr_representation_apply, CartanExtension, CotensorSection, FreeAlgebroid, FreeSection,
};
pub use bracket::{
    canonicalize_almost, enumerate_basis, graded_dimension, is_canonical, normalize,
    normalize_lie, Flavor, SignedCombination, TreeMonomial,
};
pub use bundle::{
    check_compatibility, combined_apply, combined_e_connection, e_connection_apply,
    AnchoredBundle, Connection, EDerivation, ESection,
};
pub use chart::Chart;
pub use error::{Error, Result};
pub use finite::{
    extend_morphism, ACotensor, ASection, AnchoredMorphism, AxiomReport, AxiomViolation,
    FiniteLieAlgebroid,
};
pub use scalar::Scalar;
pub use tensor::{render_tensor, TensorField, TensorType};
