use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::canon::{canonical_form, canonical_form_colored, CanonicalStructure, Certificate};
use super::class::ClassDefinition;
use super::structure::Structure;
use crate::context::Context;

impl Context {
    /// One representative per isomorphism class of `n`-element members,
    /// sorted by certificate.
    pub fn structures(&self, n: usize) -> Arc<Vec<CanonicalStructure>> {
        if let Some(level) = self.levels.read().unwrap().get(n) {
            return level.clone();
        }
        let mut guard = self.levels.write().unwrap();
        if guard.is_empty() {
            let empty = Structure::empty(&self.class().arities(), 0);
            guard.push(Arc::new(vec![canonical_form(&empty)]));
        }
        while guard.len() <= n {
            let prev = guard.last().unwrap().clone();
            let next = next_level(self.class(), &prev);
            guard.push(Arc::new(next));
        }
        guard[n].clone()
    }

    /// All members of size at most `n`, smallest first.
    pub fn structures_up_to(&self, n: usize) -> Vec<CanonicalStructure> {
        (0..=n)
            .flat_map(|k| self.structures(k).iter().cloned().collect::<Vec<_>>())
            .collect()
    }

    /// Extensions `y ⊇ x` with `extra` new points, one per isomorphism class
    /// over `x` (isomorphisms fixing `x` pointwise). Each result has `x` as
    /// its prefix `0..x.size()`. Sorted by pinned certificate.
    pub fn extensions_over(&self, x: &Structure, extra: usize) -> Vec<Structure> {
        let k = x.size();
        let mut current = vec![x.clone()];
        for _ in 0..extra {
            let mut seen: BTreeMap<Certificate, Structure> = BTreeMap::new();
            for w in &current {
                for y in self.class().extensions_of(w) {
                    let colors = pinned_colors(k, y.size());
                    let c = canonical_form_colored(&y, &colors);
                    seen.entry(c.certificate).or_insert(c.structure);
                }
            }
            current = seen.into_values().collect();
        }
        current
    }
}

/// Colors pinning points `0..k` individually; the remaining points share one
/// color greater than all of them.
fn pinned_colors(k: usize, n: usize) -> Vec<u32> {
    (0..n)
        .map(|i| if i < k { i as u32 } else { k as u32 })
        .collect()
}

fn next_level(class: &ClassDefinition, prev: &[CanonicalStructure]) -> Vec<CanonicalStructure> {
    let found: Vec<Vec<CanonicalStructure>> = prev
        .par_iter()
        .map(|c| {
            let mut local = Vec::new();
            let mut seen = HashSet::new();
            for y in class.extensions_of(&c.structure) {
                let cf = canonical_form(&y);
                if seen.insert(cf.certificate.clone()) {
                    local.push(cf);
                }
            }
            local
        })
        .collect();
    let mut all: BTreeMap<Certificate, CanonicalStructure> = BTreeMap::new();
    for c in found.into_iter().flatten() {
        all.entry(c.certificate.clone()).or_insert(c);
    }
    all.into_values().collect()
}

/// One representative per isomorphism class of `n`-element members of
/// `class`, sorted by certificate.
pub fn enumerate_structures(class: &ClassDefinition, n: usize) -> Vec<CanonicalStructure> {
    Context::new(class.clone()).structures(n).as_ref().clone()
}

/// Outcome of an AUT(m) scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AutReport {
    pub m: u64,
    pub bound: usize,
    pub passed: bool,
    pub checked: usize,
    /// First structure (smallest size, then certificate) whose automorphism
    /// group order has a prime factor not dividing `m`.
    pub violation: Option<AutViolation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AutViolation {
    pub size: usize,
    pub certificate: Certificate,
    pub aut_order: u64,
}

/// Checks that `|Aut(X)|` divides a power of `m` for every member of size at
/// most `bound`.
pub fn aut_check(ctx: &Context, m: u64, bound: usize) -> AutReport {
    let mut checked = 0;
    for n in 0..=bound {
        for c in ctx.structures(n).iter() {
            checked += 1;
            if !divides_power_of(c.aut_order, m) {
                return AutReport {
                    m,
                    bound,
                    passed: false,
                    checked,
                    violation: Some(AutViolation {
                        size: n,
                        certificate: c.certificate.clone(),
                        aut_order: c.aut_order,
                    }),
                };
            }
        }
    }
    AutReport {
        m,
        bound,
        passed: true,
        checked,
        violation: None,
    }
}

/// Whether every prime factor of `x` divides `m`.
pub fn divides_power_of(mut x: u64, m: u64) -> bool {
    if x == 0 {
        return false;
    }
    loop {
        let g = gcd(x, m);
        if g == 1 {
            return x == 1;
        }
        while x % g == 0 {
            x /= g;
        }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
