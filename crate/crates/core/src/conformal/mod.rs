//! Term engine for the free bc–βγ vertex superalgebra.
//!
//! Field-mode indexing only: the Virasoro modes `Lₙ` of the literature are
//! `L_(n+1)` here.

mod checks;
mod element;
mod generator;
mod modes;
mod products;

pub use checks::{
    check_virasoro, equivariant_charge, fermion_charge, grading, is_primary, mode_eigenvalue,
    monomial_grade, Grade, GradingKind, VirasoroFailure,
};
pub use element::{Monomial, VAElement};
pub use generator::{AlgebraContext, Generator, Kind, Profile};
pub use products::{
    divided_translate, lambda_bracket, linear_combination, mode_commutator, normal_product,
    nth_product, skew_product, translate, vacuum, LambdaPolynomial,
};

pub(crate) use generator::canonicalize;
pub(crate) use products::apply_mode;
