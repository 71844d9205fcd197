use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::structure::{Signature, Structure};
use crate::error::Result;

/// Human-readable form of a structure: its size and, per relation name, the
/// list of tuples that hold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureRecord {
    pub size: usize,
    pub relations: BTreeMap<String, Vec<Vec<usize>>>,
}

impl StructureRecord {
    pub fn new(sig: &Signature, s: &Structure) -> Self {
        let relations = sig
            .relations()
            .iter()
            .enumerate()
            .map(|(k, r)| (r.name.clone(), s.tuples(k)))
            .collect();
        StructureRecord {
            size: s.size(),
            relations,
        }
    }

    pub fn to_structure(&self, sig: &Signature) -> Result<Structure> {
        let tuples: Vec<Vec<Vec<usize>>> = sig
            .relations()
            .iter()
            .map(|r| self.relations.get(&r.name).cloned().unwrap_or_default())
            .collect();
        Structure::from_tuples(&sig.arities(), self.size, &tuples)
    }
}
