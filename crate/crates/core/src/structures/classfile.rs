//! TOML class-definition files.
//!
//! ```toml
//! name = "triangle-free-graphs"
//! aut_base = 2            # optional claimed m for AUT(m)
//!
//! [[relation]]
//! name = "e"
//! arity = 2
//!
//! [[axiom]]
//! tag = "irreflexive-symmetric"   # or strict-total-order, unary-exactly-one-of-group
//! relations = ["e"]
//!
//! [[forbidden]]
//! size = 3
//! relations = ["e"]       # optional, defaults to every relation
//! tuples = { e = [[0, 1], [1, 0], [1, 2], [2, 1], [0, 2], [2, 0]] }
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use super::class::{Axiom, ClassDefinition, ClassKind, Forbidden};
use super::structure::{Signature, Structure};
use crate::error::{Error, Result};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassFile {
    name: String,
    aut_base: Option<u64>,
    #[serde(default)]
    relation: Vec<RelationEntry>,
    #[serde(default)]
    axiom: Vec<AxiomEntry>,
    #[serde(default)]
    forbidden: Vec<ForbiddenEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RelationEntry {
    name: String,
    arity: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AxiomEntry {
    tag: String,
    relations: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ForbiddenEntry {
    size: usize,
    relations: Option<Vec<String>>,
    #[serde(default)]
    tuples: BTreeMap<String, Vec<Vec<usize>>>,
}

pub fn parse_class(text: &str) -> Result<ClassDefinition> {
    let file: ClassFile = toml::from_str(text).map_err(|e| Error::ClassFile(e.to_string()))?;
    let sig = Signature::new(file.relation.iter().map(|r| (r.name.clone(), r.arity)))?;
    let lookup = |name: &str| {
        sig.index_of(name)
            .ok_or_else(|| Error::ClassFile(format!("unknown relation `{name}`")))
    };
    let mut axioms = Vec::new();
    for a in &file.axiom {
        let rels = a
            .relations
            .iter()
            .map(|n| lookup(n))
            .collect::<Result<Vec<_>>>()?;
        match a.tag.as_str() {
            "strict-total-order" => axioms.extend(rels.into_iter().map(Axiom::StrictTotalOrder)),
            "irreflexive-symmetric" => {
                axioms.extend(rels.into_iter().map(Axiom::IrreflexiveSymmetric))
            }
            "unary-exactly-one-of-group" => axioms.push(Axiom::ExactlyOneOf(rels)),
            other => return Err(Error::ClassFile(format!("unknown axiom tag `{other}`"))),
        }
    }
    let mut forbidden = Vec::new();
    for f in &file.forbidden {
        let rels = match &f.relations {
            Some(names) => names
                .iter()
                .map(|n| lookup(n))
                .collect::<Result<Vec<_>>>()?,
            None => (0..sig.len()).collect(),
        };
        for key in f.tuples.keys() {
            let r = lookup(key)?;
            if !rels.contains(&r) {
                return Err(Error::ClassFile(format!(
                    "forbidden pattern lists tuples of `{key}` outside its relations"
                )));
            }
        }
        let arities: Vec<usize> = rels.iter().map(|&r| sig.relations()[r].arity).collect();
        let tuples: Vec<Vec<Vec<usize>>> = rels
            .iter()
            .map(|&r| {
                f.tuples
                    .get(&sig.relations()[r].name)
                    .cloned()
                    .unwrap_or_default()
            })
            .collect();
        let pattern = Structure::from_tuples(&arities, f.size, &tuples)?;
        forbidden.push(Forbidden {
            relations: rels,
            pattern,
        });
    }
    ClassDefinition::new(
        ClassKind::User(file.name),
        sig,
        axioms,
        forbidden,
        file.aut_base,
    )
}

pub fn load_class(path: &Path) -> Result<ClassDefinition> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::ClassFile(format!("{}: {e}", path.display())))?;
    parse_class(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::enumerate_structures;

    const ORDERS: &str = r#"
name = "orders"
aut_base = 1
[[relation]]
name = "lt"
arity = 2
[[axiom]]
tag = "strict-total-order"
relations = ["lt"]
"#;

    #[test]
    fn user_orders_match_builtin() {
        let c = parse_class(ORDERS).unwrap();
        assert_eq!(c.name(), "user:orders");
        assert_eq!(
            c.theory_key(),
            ClassDefinition::linear_orders().theory_key()
        );
        assert_eq!(enumerate_structures(&c, 4).len(), 1);
    }

    #[test]
    fn triangle_free_graphs() {
        let text = r#"
name = "triangle-free"
[[relation]]
name = "e"
arity = 2
[[axiom]]
tag = "irreflexive-symmetric"
relations = ["e"]
[[forbidden]]
size = 3
tuples = { e = [[0, 1], [1, 0], [1, 2], [2, 1], [0, 2], [2, 0]] }
"#;
        let c = parse_class(text).unwrap();
        // graphs on 3 vertices: 4 classes, minus the triangle
        assert_eq!(enumerate_structures(&c, 3).len(), 3);
    }

    #[test]
    fn forbidding_the_two_chain() {
        let text = format!("{ORDERS}\n[[forbidden]]\nsize = 2\ntuples = {{ lt = [[0, 1]] }}\n");
        let c = parse_class(&text).unwrap();
        assert_eq!(enumerate_structures(&c, 1).len(), 1);
        assert_eq!(enumerate_structures(&c, 2).len(), 0);
    }

    #[test]
    fn errors() {
        assert!(parse_class("name = 3").is_err());
        assert!(parse_class(
            "name = \"x\"\n[[axiom]]\ntag = \"strict-total-order\"\nrelations = [\"lt\"]"
        )
        .is_err());
        let bad_tag = ORDERS.replace("strict-total-order", "partial-order");
        assert!(parse_class(&bad_tag).is_err());
        let bad_tuple =
            format!("{ORDERS}\n[[forbidden]]\nsize = 2\ntuples = {{ lt = [[0, 5]] }}\n");
        assert!(parse_class(&bad_tuple).is_err());
    }
}
