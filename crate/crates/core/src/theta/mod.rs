//! Relation systems for measures and their solutions.

mod domain;
mod measures;
mod solve;
mod system;

pub use domain::{
    check_domain, effective_aut_base, is_prime, smallest_admissible_prime, CoefficientDomain,
};
pub use measures::{
    count_measures, evaluate_embedding, sign_measure, verify_assignment, verify_assignments,
    CountReport, VerifyReport, VerifyViolation, ViolationKind,
};
pub use solve::{regular_filter, satisfies, solve, MeasureAssignment};
pub use system::{build_relation_system, LinearRelation, QuadraticRelation, RelationSystem};
