//! Verification and exploration toolkit for spectral supersaturation
//! results on triangles and bowties: extremal-family constructors, exact
//! substructure counting, spectral radii with exact quotient polynomials,
//! executable theorem predicates, isomorph-free enumeration, and
//! stochastic extremal search.

pub mod canon;
pub mod cli;
pub mod construct;
pub mod count;
pub mod enumerate;
pub mod graph;
pub mod graph6;
pub mod poly;
pub mod registry;
pub mod report;
pub mod search;
pub mod spectral;
pub mod theorems;
