//! Exact-arithmetic machinery for higher-order Fourier analysis on finite
//! abelian groups of bounded rank: canonical group decompositions and
//! subgroup ladders, polynomial maps in the multi-binomial basis, Host-Kra
//! cube sets, Gowers uniformity norms, and the nilsequence extension
//! pipeline (split and non-split steps, polynomial-orbit linearization,
//! ladder iteration, character-twist assembly).
//!
//! Everything algebraic is computed over exact rationals; floating point
//! appears only in the analytic layer (norms and correlations).

pub mod abgroup;
pub mod cli;
pub mod cubes;
pub mod error;
pub mod extension;
pub mod gowers;
pub mod hpoint;
pub mod json;
pub mod ladder;
pub mod matrix;
pub mod nilseq;
pub mod orbit;
pub mod polymap;
pub mod report;
pub mod rat;
pub mod torus;

pub use abgroup::{
    annihilator, canonical_from_relations, subgroup_from_generators, Character, FinAbGroup,
    GroupElement, IsoPair, SubgroupEmbedding,
};
pub use error::{Error, Result};
pub use rat::Rat;
pub use torus::TorusPoint;
