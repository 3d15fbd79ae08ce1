//! Exact computations with the operadic categories `Cat Lie`, `Cat Ass^u`,
//! `Cat Com`, `Cat Com^u`, the free-group action on `Cat Ass^u`, the induction
//! functor from `Cat Lie`-modules to analytic functors on `gr^op`, and the
//! Koszul complexes of the Com/Lie pair.

pub mod combinat;
pub mod error;
pub mod exactlin;
pub mod funcalc;
pub mod gract;
pub mod induction;
pub mod koszul;
pub mod liemod;
pub mod operads;
pub mod par;
pub mod propcat;

pub use error::{Error, Result};
