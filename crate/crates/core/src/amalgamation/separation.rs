use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::structures::{ClassDefinition, Structure};

use super::enumerate::{count_amalgams, for_each_amalgam, Identification};

/// Is `A` separated from `B` in `structure`?
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationQuery {
    pub structure: Structure,
    pub part_a: Vec<usize>,
    pub part_b: Vec<usize>,
}

impl SeparationQuery {
    pub fn new(structure: Structure, part_a: Vec<usize>, part_b: Vec<usize>) -> Result<Self> {
        let n = structure.size();
        let mut seen = vec![false; n];
        for &p in part_a.iter().chain(&part_b) {
            if p >= n {
                return Err(Error::InvalidArgument(format!(
                    "point {p} out of range 0..{n}"
                )));
            }
            if seen[p] {
                return Err(Error::InvalidArgument(format!("point {p} listed twice")));
            }
            seen[p] = true;
        }
        Ok(SeparationQuery {
            structure,
            part_a,
            part_b,
        })
    }
}

/// True iff `X∖A` and `X∖B` have exactly one amalgamation over `X∖(A∪B)`.
pub fn is_separated(class: &ClassDefinition, q: &SeparationQuery) -> Result<bool> {
    if !class.is_member(&q.structure)? {
        return Err(Error::NotMember {
            class: class.name(),
        });
    }
    Ok(separated(class, &q.structure, &q.part_a, &q.part_b))
}

pub(crate) fn separated(class: &ClassDefinition, x: &Structure, a: &[usize], b: &[usize]) -> bool {
    let (base_len, y, z) = split(x, a, b);
    count_amalgams(class, base_len, &y, &z, Identification::Allowed, Some(2)) == 1
}

/// Returns the common base size together with `X∖B` and `X∖A`, each with
/// `X∖(A∪B)` as prefix.
fn split(x: &Structure, a: &[usize], b: &[usize]) -> (usize, Structure, Structure) {
    let rest: Vec<usize> = (0..x.size())
        .filter(|p| !a.contains(p) && !b.contains(p))
        .collect();
    let mut ya = rest.clone();
    ya.extend(a.iter().copied());
    let mut zb = rest.clone();
    zb.extend(b.iter().copied());
    (rest.len(), x.induced(&ya), x.induced(&zb))
}

/// Number of classes of non-identifying amalgamations of the one-point
/// extension `x → y` (new point `point`) with itself, where two amalgams are
/// also equivalent if they differ by swapping the two copies of the new point.
pub fn self_pair_class_count(
    class: &ClassDefinition,
    x: &Structure,
    y: &Structure,
    point: usize,
) -> Result<usize> {
    if point >= y.size() {
        return Err(Error::InvalidArgument(format!(
            "point {point} out of range 0..{}",
            y.size()
        )));
    }
    if y.without_point(point) != *x {
        return Err(Error::InvalidEmbedding(
            "extension minus its point is not the given base".into(),
        ));
    }
    if !class.is_member(y)? {
        return Err(Error::NotMember {
            class: class.name(),
        });
    }
    Ok(self_pairs(class, y, point))
}

pub(crate) fn self_pairs(class: &ClassDefinition, y: &Structure, point: usize) -> usize {
    let mut order: Vec<usize> = (0..y.size()).filter(|&p| p != point).collect();
    let k = order.len();
    order.push(point);
    let yp = y.induced(&order);
    let mut swap: Vec<usize> = (0..k + 2).collect();
    swap.swap(k, k + 1);
    let mut classes = HashSet::new();
    for_each_amalgam(class, k, &yp, &yp, Identification::Forbidden, &mut |am| {
        let mut e1 = Vec::new();
        am.result.encode_into(&mut e1);
        let mut e2 = Vec::new();
        am.result.permuted(&swap).encode_into(&mut e2);
        classes.insert(e1.min(e2));
        true
    });
    classes.len()
}
