use rayon::prelude::*;
use serde::Serialize;

use crate::context::Context;
use crate::structures::{Structure, StructureRecord};

use super::enumerate::{count_amalgams, Identification};

/// Which pairs of extensions a scan ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanMode {
    /// Pairs of one-point extensions of each base.
    OnePoint,
    /// All pairs of extensions up to the size bound.
    Exhaustive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub property: String,
    pub mode: ScanMode,
    pub bound: usize,
    pub passed: bool,
    /// Number of (base, left, right) triples examined.
    pub checked: u64,
    pub counterexample: Option<DiagramWitness>,
}

/// A failing diagram. `left` and `right` contain `base` as their prefix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagramWitness {
    pub base: StructureRecord,
    pub left: StructureRecord,
    pub right: StructureRecord,
    pub amalgamations: usize,
}

/// Checks that every pair of one-point extensions (or, in exhaustive mode,
/// every pair of extensions of size at most `bound`) of every base of size
/// below `bound` has an odd number of amalgamations.
pub fn oddness_scan(ctx: &Context, bound: usize, mode: ScanMode) -> ScanReport {
    scan(
        ctx,
        "oddness",
        bound,
        mode,
        Identification::Allowed,
        None,
        &|c| c % 2 == 1,
    )
}

pub fn amalgamation_property_scan(ctx: &Context, bound: usize) -> ScanReport {
    scan(
        ctx,
        "amalgamation",
        bound,
        ScanMode::Exhaustive,
        Identification::Allowed,
        Some(1),
        &|c| c >= 1,
    )
}

pub fn strong_amalgamation_scan(ctx: &Context, bound: usize) -> ScanReport {
    scan(
        ctx,
        "strong-amalgamation",
        bound,
        ScanMode::Exhaustive,
        Identification::Forbidden,
        Some(1),
        &|c| c >= 1,
    )
}

fn scan(
    ctx: &Context,
    property: &str,
    bound: usize,
    mode: ScanMode,
    ident: Identification,
    limit: Option<usize>,
    ok: &(dyn Fn(usize) -> bool + Sync),
) -> ScanReport {
    let bases: Vec<Structure> = (0..bound)
        .flat_map(|n| {
            ctx.structures(n)
                .iter()
                .map(|c| c.structure.clone())
                .collect::<Vec<_>>()
        })
        .collect();
    let class = ctx.class();
    let results: Vec<(u64, Option<DiagramWitness>)> = bases
        .par_iter()
        .map(|x| {
            let k = x.size();
            let exts: Vec<Structure> = match mode {
                ScanMode::OnePoint => class.extensions_of(x),
                ScanMode::Exhaustive => (1..=bound - k)
                    .flat_map(|e| ctx.extensions_over(x, e))
                    .collect(),
            };
            let mut checked = 0;
            for (i, y) in exts.iter().enumerate() {
                for z in &exts[i..] {
                    checked += 1;
                    let c = count_amalgams(class, k, y, z, ident, limit);
                    if !ok(c) {
                        let sig = class.signature();
                        let w = DiagramWitness {
                            base: StructureRecord::new(sig, x),
                            left: StructureRecord::new(sig, y),
                            right: StructureRecord::new(sig, z),
                            amalgamations: c,
                        };
                        return (checked, Some(w));
                    }
                }
            }
            (checked, None)
        })
        .collect();
    let mut checked = 0;
    let mut counterexample = None;
    for (c, w) in results {
        checked += c;
        if w.is_some() {
            counterexample = w;
            break;
        }
    }
    ScanReport {
        property: property.to_string(),
        mode,
        bound,
        passed: counterexample.is_none(),
        checked,
        counterexample,
    }
}
