use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use super::domain::{
    check_domain, effective_aut_base, smallest_admissible_prime, CoefficientDomain,
};
use super::solve::{regular_filter, solve, MeasureAssignment};
use super::system::{build_relation_system, complete_table, var_of, RelationSystem};
use crate::amalgamation::{for_each_amalgam, oddness_scan, self_pairs, Identification, ScanMode};
use crate::context::Context;
use crate::error::{Error, Result};
use crate::marked::MinimalMarkedTable;
use crate::structures::{aut_check, canonical_labeling, Embedding, Structure, StructureRecord};

/// Generators along the one-point factorization of `w[..k] → w`, adding
/// points in increasing order.
fn prefix_monomial(
    ctx: &Context,
    table: &MinimalMarkedTable,
    w: &Structure,
    k: usize,
) -> Result<Vec<usize>> {
    let mut mono = Vec::with_capacity(w.size() - k);
    for t in k..w.size() {
        let prefix: Vec<usize> = (0..=t).collect();
        mono.push(var_of(ctx, table, &w.induced(&prefix), t)?);
    }
    mono.sort_unstable();
    Ok(mono)
}

/// Monomial of the inclusion of the points `sub` into `w`, memoized up to
/// isomorphism of the pair.
struct Monomials<'a> {
    ctx: &'a Context,
    table: &'a MinimalMarkedTable,
    memo: HashMap<Vec<u8>, Vec<usize>>,
}

impl Monomials<'_> {
    fn of(&mut self, w: &Structure, sub: &[bool]) -> Result<Vec<usize>> {
        let colors: Vec<u32> = sub.iter().map(|&b| u32::from(!b)).collect();
        let lab = canonical_labeling(w, &colors);
        let key = lab.certificate.as_bytes().to_vec();
        if let Some(m) = self.memo.get(&key) {
            return Ok(m.clone());
        }
        // canonical labeling puts color 0 (the subset) first
        let cw = lab.apply(w);
        let k = sub.iter().filter(|&&b| b).count();
        let m = prefix_monomial(self.ctx, self.table, &cw, k)?;
        self.memo.insert(key, m.clone());
        Ok(m)
    }
}

fn eval_monomial(domain: CoefficientDomain, values: &[i64], mono: &[usize]) -> i64 {
    mono.iter().fold(domain.norm(1), |acc, &v| {
        domain.norm_wide(acc as i128 * values[v] as i128)
    })
}

/// Value of the measure on an arbitrary embedding: the product of the
/// generator values along a factorization into one-point extensions.
pub fn evaluate_embedding(
    ctx: &Context,
    system: &RelationSystem,
    assignment: &MeasureAssignment,
    i: &Embedding,
) -> Result<i64> {
    if !ctx.class().is_member(i.codomain())? {
        return Err(Error::NotMember {
            class: ctx.class().name(),
        });
    }
    let (yp, _) = i.codomain_in_prefix_form();
    let mono = prefix_monomial(ctx, &system.table, &yp, i.domain().size())?;
    Ok(eval_monomial(assignment.domain, &assignment.values, &mono))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub bound: usize,
    pub passed: bool,
    /// Number of relations evaluated, counting each once per base.
    pub checked: usize,
    pub violation: Option<VerifyViolation>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    /// The value of `X → Y` differs from the sum over the amalgamations of
    /// `Y` and `X′` over `X`.
    Amalgamation,
    /// Adding the two points of a two-point extension `X → Y` in the two
    /// possible orders gives different values (`one_point` is then `Y` with
    /// only the second point).
    Factorization,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyViolation {
    pub kind: ViolationKind,
    pub base: StructureRecord,
    pub extension: StructureRecord,
    pub one_point: StructureRecord,
    pub lhs: i64,
    pub rhs: i64,
}

/// `lhs = Σ rhs` on monomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Check {
    kind: ViolationKind,
    lhs: Vec<usize>,
    rhs: Vec<Vec<usize>>,
}

/// Checks every assignment against the amalgamation relation for all
/// `X → Y` with `|Y| ≤ bound` against one-point `X → X′`, and checks that
/// two-point extensions with `|Y| ≤ bound` have the same value whichever
/// point is added first. Relations are evaluated as they are generated, so
/// memory stays proportional to the extensions of a single base.
pub fn verify_assignments(
    ctx: &Context,
    system: &RelationSystem,
    assignments: &[MeasureAssignment],
    bound: usize,
) -> Result<Vec<VerifyReport>> {
    let class = ctx.class();
    let sig = class.signature();
    let bases: Vec<Structure> = (0..bound)
        .flat_map(|n| {
            ctx.structures(n)
                .iter()
                .map(|c| c.structure.clone())
                .collect::<Vec<_>>()
        })
        .collect();
    let per_base: Vec<(usize, Vec<Option<VerifyViolation>>)> = bases
        .par_iter()
        .map(|x| -> Result<(usize, Vec<Option<VerifyViolation>>)> {
            let k = x.size();
            let mut monos = Monomials {
                ctx,
                table: &system.table,
                memo: HashMap::new(),
            };
            let mut seen = HashSet::new();
            let mut first: Vec<Option<VerifyViolation>> = vec![None; assignments.len()];
            let mut evaluate = |check: Check, y: &Structure, z: &Structure| {
                if seen.contains(&check) {
                    return;
                }
                for (a, slot) in assignments.iter().zip(first.iter_mut()) {
                    if slot.is_some() {
                        continue;
                    }
                    let d = a.domain;
                    let lhs = d.norm(eval_monomial(d, &a.values, &check.lhs));
                    let rhs = d.norm_wide(
                        check
                            .rhs
                            .iter()
                            .map(|m| eval_monomial(d, &a.values, m) as i128)
                            .sum(),
                    );
                    if lhs != rhs {
                        *slot = Some(VerifyViolation {
                            kind: check.kind,
                            base: StructureRecord::new(sig, x),
                            extension: StructureRecord::new(sig, y),
                            one_point: StructureRecord::new(sig, z),
                            lhs,
                            rhs,
                        });
                    }
                }
                seen.insert(check);
            };
            let points = class.extensions_of(x);
            for e in 1..=bound - k {
                for y in ctx.extensions_over(x, e) {
                    let lhs = prefix_monomial(ctx, &system.table, &y, k)?;
                    if e == 2 {
                        let mut order: Vec<usize> = (0..k).collect();
                        order.extend([k + 1, k]);
                        let other = prefix_monomial(ctx, &system.table, &y.induced(&order), k)?;
                        let check = Check {
                            kind: ViolationKind::Factorization,
                            lhs: lhs.clone(),
                            rhs: vec![other],
                        };
                        evaluate(check, &y, &y.induced(&order[..k + 1]));
                    }
                    for z in &points {
                        let mut rhs = Vec::new();
                        let mut err = None;
                        for_each_amalgam(class, k, &y, z, Identification::Allowed, &mut |am| {
                            let mut sub = vec![false; am.result.size()];
                            for &p in &am.z_map {
                                sub[p] = true;
                            }
                            match monos.of(&am.result, &sub) {
                                Ok(m) => rhs.push(m),
                                Err(e) => {
                                    err = Some(e);
                                    return false;
                                }
                            }
                            true
                        });
                        if let Some(e) = err {
                            return Err(e);
                        }
                        rhs.sort();
                        let check = Check {
                            kind: ViolationKind::Amalgamation,
                            lhs: lhs.clone(),
                            rhs,
                        };
                        evaluate(check, &y, z);
                    }
                }
            }
            drop(evaluate);
            Ok((seen.len(), first))
        })
        .collect::<Result<_>>()?;
    let checked = per_base.iter().map(|(n, _)| n).sum();
    let mut firsts: Vec<Option<VerifyViolation>> = vec![None; assignments.len()];
    for (_, base) in per_base {
        for (slot, v) in firsts.iter_mut().zip(base) {
            if slot.is_none() {
                *slot = v;
            }
        }
    }
    Ok(firsts
        .into_iter()
        .map(|violation| VerifyReport {
            bound,
            passed: violation.is_none(),
            checked,
            violation,
        })
        .collect())
}

pub fn verify_assignment(
    ctx: &Context,
    system: &RelationSystem,
    assignment: &MeasureAssignment,
    bound: usize,
) -> Result<VerifyReport> {
    Ok(verify_assignments(ctx, system, std::slice::from_ref(assignment), bound)?.remove(0))
}

/// The measure `μ = (−1)^n` on each generator, where `n` counts the
/// non-identifying self-amalgamations of the generator up to swapping the
/// two new points.
pub fn sign_measure(ctx: &Context, bound: usize) -> Result<MeasureAssignment> {
    let aut = aut_check(ctx, 1, bound);
    if !aut.passed {
        return Err(Error::Precondition("the sign measure needs AUT(1)".into()));
    }
    let odd = oddness_scan(ctx, bound, ScanMode::OnePoint);
    if !odd.passed {
        return Err(Error::Precondition(format!(
            "{} is not odd",
            ctx.class().name()
        )));
    }
    let table = complete_table(ctx, bound)?;
    let values = table
        .classes
        .par_iter()
        .map(|c| {
            if self_pairs(ctx.class(), &c.class.structure, c.class.mark) % 2 == 0 {
                1
            } else {
                -1
            }
        })
        .collect();
    Ok(MeasureAssignment {
        domain: CoefficientDomain::RestrictedIntegers,
        values,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountReport {
    pub bound: usize,
    pub domain: CoefficientDomain,
    /// Number of measures at this bound.
    pub count: usize,
    pub regular: usize,
    /// Number of variables `r`.
    pub variables: usize,
    /// The `m` of AUT(m) used for admissibility.
    pub aut_base: u64,
    /// Smallest prime `p` not dividing `m`.
    pub prime: u64,
    /// `p^r`, absent on overflow.
    pub count_bound: Option<u64>,
    /// `(p − 1)^r`, absent on overflow.
    pub regular_bound: Option<u64>,
    pub within_bounds: bool,
}

/// Solutions together with the `n ≤ p^r`, `regular ≤ (p−1)^r` bound checks.
pub fn count_measures(
    ctx: &Context,
    bound: usize,
    domain: CoefficientDomain,
) -> Result<(RelationSystem, Vec<MeasureAssignment>, CountReport)> {
    check_domain(ctx, domain, bound)?;
    let system = build_relation_system(ctx, bound)?;
    let solutions = solve(&system, domain);
    let regular = regular_filter(&solutions).len();
    let m = effective_aut_base(ctx, bound);
    let p = smallest_admissible_prime(m);
    let r = system.variables.len() as u32;
    let count_bound = p.checked_pow(r);
    let regular_bound = (p - 1).checked_pow(r);
    let within = count_bound.is_none_or(|b| solutions.len() as u64 <= b)
        && regular_bound.is_none_or(|b| regular as u64 <= b);
    let report = CountReport {
        bound,
        domain,
        count: solutions.len(),
        regular,
        variables: r as usize,
        aut_base: m,
        prime: p,
        count_bound,
        regular_bound,
        within_bounds: within,
    };
    Ok((system, solutions, report))
}
