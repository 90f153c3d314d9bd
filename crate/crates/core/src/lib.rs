//! Belief reasoning over inconsistent and incomplete probabilistic
//! information: Belnap-Dunn logic on events, non-standard probabilities
//! from several sources, and many-valued upper logics of belief with exact
//! decision procedures.

pub mod algebras;
pub mod bd_core;
pub mod formulas;
pub mod luk_decide;
pub mod random;
pub mod rational;
pub mod report;
pub mod sources;
pub mod two_layer;
