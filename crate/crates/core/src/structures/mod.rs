//! Finite relational structures, canonical forms and class definitions.

mod canon;
mod class;
mod classfile;
mod enumerate;
mod record;
mod structure;

pub use canon::{
    canonical_form, canonical_form_colored, canonical_labeling, certificate, CanonicalStructure,
    Certificate, Labeling,
};
pub use class::{Axiom, ClassDefinition, ClassKind, Forbidden};
pub use classfile::{load_class, parse_class};
pub use enumerate::{aut_check, divides_power_of, enumerate_structures, AutReport, AutViolation};
pub use record::StructureRecord;
pub use structure::{embeddings, Embedding, RelationSymbol, Signature, Structure};

/// `join(a, b)`: see [`ClassDefinition::join`].
pub fn join(a: &ClassDefinition, b: &ClassDefinition) -> ClassDefinition {
    ClassDefinition::join(a, b)
}

/// `colored(a, s)`: see [`ClassDefinition::colored`].
pub fn colored(a: &ClassDefinition, s: usize) -> crate::Result<ClassDefinition> {
    ClassDefinition::colored(a, s)
}
