//! Nonlinear realization of SL(2,R)×R on the coset fields `(ρ, s, u)`.

pub mod algebra;
pub mod forms;

pub use algebra::{bracket_check, bracket_relations, BracketRelation, Generator, GeneratorName};
pub use forms::{
    act_infinitesimal, impose_constraints, invariance_residual, maurer_cartan, reduced_invariant,
    ConstrainedFields, GoldstonePoint, GroupParams, MCForms,
};
