use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::amalgamation::{for_each_amalgam, Identification};
use crate::context::Context;
use crate::error::{Error, Result};
use crate::marked::{reduced_certificate, MinimalMarkedClass, MinimalMarkedTable};
use crate::structures::Structure;

/// `lhs = constant + Σ terms`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct LinearRelation {
    pub lhs: usize,
    pub constant: u64,
    pub terms: Vec<usize>,
}

/// `left.0 · left.1 = right.0 · right.1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct QuadraticRelation {
    pub left: (usize, usize),
    pub right: (usize, usize),
}

impl QuadraticRelation {
    fn normalized(a: (usize, usize), b: (usize, usize)) -> Option<Self> {
        let sort = |(x, y): (usize, usize)| if x <= y { (x, y) } else { (y, x) };
        let (a, b) = (sort(a), sort(b));
        match a.cmp(&b) {
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Less => Some(QuadraticRelation { left: a, right: b }),
            std::cmp::Ordering::Greater => Some(QuadraticRelation { left: b, right: a }),
        }
    }
}

/// Relations satisfied by the generator values of every measure, built from
/// structures of size at most `bound`.
#[derive(Clone, Debug, Serialize)]
pub struct RelationSystem {
    pub bound: usize,
    pub variables: Vec<MinimalMarkedClass>,
    pub linear: Vec<LinearRelation>,
    pub quadratic: Vec<QuadraticRelation>,
    #[serde(skip)]
    pub(crate) table: Arc<MinimalMarkedTable>,
}

impl RelationSystem {
    pub fn table(&self) -> &MinimalMarkedTable {
        &self.table
    }

    /// Plain-text export: a variable table followed by one relation per line.
    ///
    /// ```text
    /// V v0 <certificate hex>
    /// L v0 = 1 + v1 + v2
    /// Q v1*v1 = v1*v3
    /// ```
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# bound {}", self.bound).unwrap();
        for v in &self.variables {
            writeln!(out, "V v{} {}", v.id, v.class.certificate).unwrap();
        }
        for l in &self.linear {
            write!(out, "L v{} = {}", l.lhs, l.constant).unwrap();
            for t in &l.terms {
                write!(out, " + v{t}").unwrap();
            }
            out.push('\n');
        }
        for q in &self.quadratic {
            writeln!(
                out,
                "Q v{}*v{} = v{}*v{}",
                q.left.0, q.left.1, q.right.0, q.right.1
            )
            .unwrap();
        }
        out
    }
}

/// Variable id of the reduction of `(w, mark)`.
pub(crate) fn var_of(
    ctx: &Context,
    table: &MinimalMarkedTable,
    w: &Structure,
    mark: usize,
) -> Result<usize> {
    let cert = reduced_certificate(ctx, w, mark);
    table.id_of(&cert).ok_or_else(|| {
        Error::Precondition(format!(
            "minimal marked structure {} missing from the table",
            cert
        ))
    })
}

pub(crate) fn complete_table(ctx: &Context, bound: usize) -> Result<Arc<MinimalMarkedTable>> {
    let table = ctx.minimal_marked(bound);
    if !table.complete {
        return Err(Error::Precondition(format!(
            "minimal marked structures of {} are not complete at bound {bound}",
            ctx.class().name()
        )));
    }
    Ok(table)
}

pub fn build_relation_system(ctx: &Context, bound: usize) -> Result<RelationSystem> {
    if bound < 2 {
        return Err(Error::InvalidArgument(
            "relation systems need bound at least 2".into(),
        ));
    }
    let table = complete_table(ctx, bound)?;
    let class = ctx.class();

    let bases: Vec<Structure> = (0..=bound - 2)
        .flat_map(|n| {
            ctx.structures(n)
                .iter()
                .map(|c| c.structure.clone())
                .collect::<Vec<_>>()
        })
        .collect();
    let linear: Vec<Vec<LinearRelation>> = bases
        .par_iter()
        .map(|x| -> Result<Vec<LinearRelation>> {
            let k = x.size();
            let exts = class.extensions_of(x);
            let mut out = Vec::new();
            for y in &exts {
                let lhs = var_of(ctx, &table, y, k)?;
                for z in &exts {
                    let mut constant = 0u64;
                    let mut terms = Vec::new();
                    let mut err = None;
                    for_each_amalgam(class, k, y, z, Identification::Allowed, &mut |am| {
                        if am.identified > 0 {
                            constant += 1;
                        } else {
                            match var_of(ctx, &table, &am.result, k) {
                                Ok(v) => terms.push(v),
                                Err(e) => {
                                    err = Some(e);
                                    return false;
                                }
                            }
                        }
                        true
                    });
                    if let Some(e) = err {
                        return Err(e);
                    }
                    terms.sort_unstable();
                    // `v = v` carries no information
                    if !(constant == 0 && terms == [lhs]) {
                        out.push(LinearRelation {
                            lhs,
                            constant,
                            terms,
                        });
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    let tops: Vec<Structure> = (2..=bound)
        .flat_map(|n| {
            ctx.structures(n)
                .iter()
                .map(|c| c.structure.clone())
                .collect::<Vec<_>>()
        })
        .collect();
    let quadratic: Vec<Vec<QuadraticRelation>> = tops
        .par_iter()
        .map(|w| -> Result<Vec<QuadraticRelation>> {
            let n = w.size();
            let mut out = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    let w_b = w.without_point(b);
                    let w_a = w.without_point(a);
                    let left = (var_of(ctx, &table, &w_b, a)?, var_of(ctx, &table, w, b)?);
                    let right = (
                        var_of(ctx, &table, &w_a, b - 1)?,
                        var_of(ctx, &table, w, a)?,
                    );
                    out.extend(QuadraticRelation::normalized(left, right));
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    let linear: BTreeSet<LinearRelation> = linear.into_iter().flatten().collect();
    let quadratic: BTreeSet<QuadraticRelation> = quadratic.into_iter().flatten().collect();
    Ok(RelationSystem {
        bound,
        variables: table.classes.clone(),
        linear: linear.into_iter().collect(),
        quadratic: quadratic.into_iter().collect(),
        table,
    })
}
