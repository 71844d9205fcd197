//! Marked structures, extraneous points and minimal marked structures.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::amalgamation::separated;
use crate::context::Context;
use crate::error::{Error, Result};
use crate::structures::{canonical_labeling, Certificate, ClassDefinition, Structure};

/// A structure with a distinguished point. Stands for the one-point
/// extension `structure ∖ mark → structure`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MarkedStructure {
    pub structure: Structure,
    pub mark: usize,
}

impl MarkedStructure {
    pub fn new(structure: Structure, mark: usize) -> Result<Self> {
        if mark >= structure.size() {
            return Err(Error::InvalidArgument(format!(
                "mark {mark} out of range 0..{}",
                structure.size()
            )));
        }
        Ok(MarkedStructure { structure, mark })
    }

    /// Mark-pinned canonical form.
    pub fn canonical(&self) -> MarkedClass {
        let colors = mark_colors(self.structure.size(), self.mark);
        let lab = canonical_labeling(&self.structure, &colors);
        MarkedClass {
            structure: lab.apply(&self.structure),
            mark: lab.perm[self.mark],
            certificate: lab.certificate,
        }
    }

    pub fn certificate(&self) -> Certificate {
        crate::structures::certificate(
            &self.structure,
            &mark_colors(self.structure.size(), self.mark),
        )
    }
}

fn mark_colors(n: usize, mark: usize) -> Vec<u32> {
    (0..n).map(|i| u32::from(i != mark)).collect()
}

/// A marked structure in mark-pinned canonical labeling.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct MarkedClass {
    #[serde(skip)]
    pub structure: Structure,
    pub mark: usize,
    pub certificate: Certificate,
}

impl MarkedClass {
    fn from_certificate(cert: &Certificate, arities: &[usize]) -> MarkedClass {
        let (structure, colors) = cert.decode(arities).expect("cached certificate decodes");
        let mark = colors
            .iter()
            .position(|&c| c == 0)
            .expect("mark color present");
        MarkedClass {
            structure,
            mark,
            certificate: cert.clone(),
        }
    }

    pub fn size(&self) -> usize {
        self.structure.size()
    }

    pub fn marked(&self) -> MarkedStructure {
        MarkedStructure {
            structure: self.structure.clone(),
            mark: self.mark,
        }
    }
}

/// A minimal marked structure together with its variable id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinimalMarkedClass {
    pub id: usize,
    #[serde(flatten)]
    pub class: MarkedClass,
}

/// `y` is separated from the mark.
pub fn is_extraneous(class: &ClassDefinition, m: &MarkedStructure, y: usize) -> Result<bool> {
    if y == m.mark {
        return Err(Error::InvalidArgument(
            "the mark is never extraneous".into(),
        ));
    }
    if y >= m.structure.size() {
        return Err(Error::InvalidArgument(format!(
            "point {y} out of range 0..{}",
            m.structure.size()
        )));
    }
    if !class.is_member(&m.structure)? {
        return Err(Error::NotMember {
            class: class.name(),
        });
    }
    Ok(separated(class, &m.structure, &[y], &[m.mark]))
}

pub(crate) fn extraneous_points(class: &ClassDefinition, m: &MarkedStructure) -> Vec<usize> {
    (0..m.structure.size())
        .filter(|&y| y != m.mark && separated(class, &m.structure, &[y], &[m.mark]))
        .collect()
}

fn first_extraneous(class: &ClassDefinition, m: &MarkedStructure) -> Option<usize> {
    (0..m.structure.size())
        .find(|&y| y != m.mark && separated(class, &m.structure, &[y], &[m.mark]))
}

/// Delete extraneous points until none is left; the result is mark-pinned
/// canonical.
pub fn reduce(ctx: &Context, m: &MarkedStructure) -> Result<MarkedClass> {
    if m.mark >= m.structure.size() {
        return Err(Error::InvalidArgument("mark out of range".into()));
    }
    if !ctx.class().is_member(&m.structure)? {
        return Err(Error::NotMember {
            class: ctx.class().name(),
        });
    }
    Ok(reduce_unchecked(ctx, m))
}

pub(crate) fn reduce_unchecked(ctx: &Context, m: &MarkedStructure) -> MarkedClass {
    let cert = reduced_certificate(ctx, &m.structure, m.mark);
    MarkedClass::from_certificate(&cert, &ctx.class().arities())
}

/// Certificate of the reduction of `(w, mark)`; builds the canonical copy
/// only when the reduction is not memoized yet.
pub(crate) fn reduced_certificate(ctx: &Context, w: &Structure, mark: usize) -> Certificate {
    let lab = canonical_labeling(w, &mark_colors(w.size(), mark));
    if let Some(c) = ctx.reductions.get(&lab.certificate) {
        return c.clone();
    }
    let canon = MarkedClass {
        structure: lab.apply(w),
        mark: lab.perm[mark],
        certificate: lab.certificate,
    };
    reduce_cert(ctx, canon)
}

fn reduce_cert(ctx: &Context, canon: MarkedClass) -> Certificate {
    if let Some(c) = ctx.reductions.get(&canon.certificate) {
        return c.clone();
    }
    let m = canon.marked();
    let out = match first_extraneous(ctx.class(), &m) {
        None => canon.certificate.clone(),
        Some(y) => {
            let smaller = MarkedStructure {
                structure: m.structure.without_point(y),
                mark: if y < m.mark { m.mark - 1 } else { m.mark },
            };
            reduce_cert(ctx, smaller.canonical())
        }
    };
    ctx.reductions.insert(canon.certificate, out.clone());
    out
}

/// Minimal marked structures of size at most `bound`, ids in certificate
/// order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinimalMarkedTable {
    pub bound: usize,
    pub classes: Vec<MinimalMarkedClass>,
    /// No minimal marked structure has exactly `bound` points.
    pub complete: bool,
    #[serde(skip)]
    index: HashMap<Certificate, usize>,
}

impl MinimalMarkedTable {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn max_size(&self) -> usize {
        self.classes
            .iter()
            .map(|c| c.class.size())
            .max()
            .unwrap_or(0)
    }

    pub fn id_of(&self, cert: &Certificate) -> Option<usize> {
        self.index.get(cert).copied()
    }

    /// Rebuild a table from the certificates of its classes (e.g. read from a
    /// cache). Fails if a certificate does not decode to a marked structure.
    pub fn from_certificates(
        bound: usize,
        certs: &[Certificate],
        arities: &[usize],
    ) -> Result<Self> {
        let mut found = Vec::with_capacity(certs.len());
        for c in certs {
            let (structure, colors) = c.decode(arities).ok_or_else(|| {
                Error::InvalidArgument(format!("certificate {c} does not decode"))
            })?;
            let mark = match colors.iter().filter(|&&x| x == 0).count() {
                1 => colors.iter().position(|&x| x == 0).unwrap(),
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "certificate {c} is not marked"
                    )))
                }
            };
            found.push(MarkedClass {
                structure,
                mark,
                certificate: c.clone(),
            });
        }
        Ok(Self::from_classes(bound, found))
    }

    pub(crate) fn from_classes(bound: usize, found: Vec<MarkedClass>) -> Self {
        let mut sorted: BTreeMap<Certificate, MarkedClass> = BTreeMap::new();
        for c in found {
            sorted.entry(c.certificate.clone()).or_insert(c);
        }
        let complete = sorted.values().all(|c| c.size() < bound);
        let classes: Vec<MinimalMarkedClass> = sorted
            .into_values()
            .enumerate()
            .map(|(id, class)| MinimalMarkedClass { id, class })
            .collect();
        let index = classes
            .iter()
            .map(|c| (c.class.certificate.clone(), c.id))
            .collect();
        MinimalMarkedTable {
            bound,
            classes,
            complete,
            index,
        }
    }
}

impl Context {
    pub fn minimal_marked(&self, bound: usize) -> Arc<MinimalMarkedTable> {
        if let Some(t) = self.minimal.read().unwrap().get(&bound) {
            return t.clone();
        }
        let table = Arc::new(self.compute_minimal(bound));
        self.minimal
            .write()
            .unwrap()
            .entry(bound)
            .or_insert(table)
            .clone()
    }

    /// Every minimal-marked table computed so far, by bound.
    pub fn minimal_snapshot(&self) -> Vec<Arc<MinimalMarkedTable>> {
        self.minimal.read().unwrap().values().cloned().collect()
    }

    /// Install a precomputed table.
    pub fn seed_minimal(&self, table: MinimalMarkedTable) {
        self.minimal
            .write()
            .unwrap()
            .entry(table.bound)
            .or_insert_with(|| Arc::new(table));
    }

    fn compute_minimal(&self, bound: usize) -> MinimalMarkedTable {
        let all: Vec<Structure> = (1..=bound)
            .flat_map(|n| {
                self.structures(n)
                    .iter()
                    .map(|c| c.structure.clone())
                    .collect::<Vec<_>>()
            })
            .collect();
        let found: Vec<MarkedClass> = all
            .par_iter()
            .flat_map_iter(|x| {
                let class = self.class();
                (0..x.size())
                    .filter_map(|mark| {
                        let m = MarkedStructure {
                            structure: x.clone(),
                            mark,
                        };
                        first_extraneous(class, &m).is_none().then(|| m.canonical())
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        MinimalMarkedTable::from_classes(bound, found)
    }
}

/// Enumerate minimal marked structures up to `bound` points.
pub fn enumerate_minimal_marked(ctx: &Context, bound: usize) -> Result<Arc<MinimalMarkedTable>> {
    if bound == 0 {
        return Err(Error::InvalidArgument("bound must be at least 1".into()));
    }
    Ok(ctx.minimal_marked(bound))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FmmReport {
    pub bound: usize,
    pub count: usize,
    pub max_size: usize,
    pub complete: bool,
    /// Present when complete: every marked structure of size `n ≤ bound`
    /// has at least `n − max_size` extraneous points.
    pub extraneous_check: Option<ExtraneousCheck>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtraneousCheck {
    pub checked: u64,
    pub passed: bool,
    pub violation: Option<ExtraneousViolation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtraneousViolation {
    pub certificate: Certificate,
    pub size: usize,
    pub extraneous: usize,
}

pub fn fmm_certificate(ctx: &Context, bound: usize) -> Result<FmmReport> {
    let table = enumerate_minimal_marked(ctx, bound)?;
    let max_size = table.max_size();
    let extraneous_check = table.complete.then(|| {
        let marked: Vec<MarkedStructure> = (1..=bound)
            .flat_map(|n| {
                ctx.structures(n)
                    .iter()
                    .flat_map(|c| {
                        (0..n).map(|mark| MarkedStructure {
                            structure: c.structure.clone(),
                            mark,
                        })
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        let results: Vec<Option<ExtraneousViolation>> = marked
            .par_iter()
            .map(|m| {
                let n = m.structure.size();
                let e = extraneous_points(ctx.class(), m).len();
                (e + max_size < n).then(|| ExtraneousViolation {
                    certificate: m.certificate(),
                    size: n,
                    extraneous: e,
                })
            })
            .collect();
        let violation = results.into_iter().flatten().next();
        ExtraneousCheck {
            checked: marked.len() as u64,
            passed: violation.is_none(),
            violation,
        }
    });
    Ok(FmmReport {
        bound,
        count: table.len(),
        max_size,
        complete: table.complete,
        extraneous_check,
    })
}
