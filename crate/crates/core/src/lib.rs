//! Nominal terms with fixed-point and freshness constraints.
//!
//! The crate provides decision procedures for three judgement systems
//! (freshness/α-equivalence, fixed-point constraints with either variable
//! rule, and ν-quantified strong fixed-point contexts), the translations
//! between freshness and strong fixed-point judgements, a proof checker for
//! the fixed-point equality rules, concrete nominal Σ-algebras for
//! validating judgements semantically, and a validator for candidate
//! solutions of nominal (C-)unification problems.

pub mod demos;
pub mod deriv_fix;
pub mod deriv_fresh;
pub mod deriv_strong;
pub mod derivation;
pub mod gen;
pub mod permgroups;
pub mod semantics;
pub mod suites;
pub mod syntax;
pub mod terms;
pub mod unify_validate;
