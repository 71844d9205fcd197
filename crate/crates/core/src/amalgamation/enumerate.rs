use std::cmp::Reverse;

use crate::error::{Error, Result};
use crate::structures::{ClassDefinition, Embedding, Structure};

/// Whether amalgamations may identify points outside the base.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Identification {
    Allowed,
    /// Strong amalgamations only: the two sides meet exactly in the base.
    Forbidden,
}

/// One amalgamation of `y` and `z` over their common prefix, in a fixed
/// labeling: the points of `y` keep their labels, and the points of `z` that
/// are not identified with a point of `y` follow in increasing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Amalgam {
    pub result: Structure,
    /// Image of every point of `z` in `result`.
    pub z_map: Vec<usize>,
    pub identified: usize,
}

/// Visit every amalgamation of `y` and `z` over the shared prefix
/// `0..base`. Two amalgamations are equivalent iff they coincide in this
/// labeling (legs determine an equivalence completely since the images
/// cover the result), so each is visited exactly once. Stops early when
/// `visit` returns `false`; returns `false` in that case.
pub(crate) fn for_each_amalgam(
    class: &ClassDefinition,
    base: usize,
    y: &Structure,
    z: &Structure,
    mode: Identification,
    visit: &mut dyn FnMut(Amalgam) -> bool,
) -> bool {
    let ky = y.size() - base;
    let kz = z.size() - base;
    let mut matching: Vec<Option<usize>> = Vec::with_capacity(kz);
    let mut used = vec![false; ky];
    match_points(class, base, y, z, mode, &mut matching, &mut used, visit)
}

#[allow(clippy::too_many_arguments)]
fn match_points(
    class: &ClassDefinition,
    base: usize,
    y: &Structure,
    z: &Structure,
    mode: Identification,
    matching: &mut Vec<Option<usize>>,
    used: &mut [bool],
    visit: &mut dyn FnMut(Amalgam) -> bool,
) -> bool {
    let kz = z.size() - base;
    if matching.len() == kz {
        return complete_matching(class, base, y, z, matching, visit);
    }
    // identifications first, so larger identifications come out earlier
    if mode == Identification::Allowed {
        for u in 0..used.len() {
            if used[u] {
                continue;
            }
            matching.push(Some(u));
            if matched_consistent(base, y, z, matching) {
                used[u] = true;
                let go = match_points(class, base, y, z, mode, matching, used, visit);
                used[u] = false;
                if !go {
                    matching.pop();
                    return false;
                }
            }
            matching.pop();
        }
    }
    matching.push(None);
    let go = match_points(class, base, y, z, mode, matching, used, visit);
    matching.pop();
    go
}

/// The last entry of `matching` identifies z-point `base + t` with a y-point;
/// check all tuples among base and identified points that involve it.
fn matched_consistent(
    base: usize,
    y: &Structure,
    z: &Structure,
    matching: &[Option<usize>],
) -> bool {
    let t = matching.len() - 1;
    let Some(_) = matching[t] else { return true };
    // z-points in the identified region, with their y-images
    let mut zs: Vec<usize> = (0..base).collect();
    let mut ys: Vec<usize> = (0..base).collect();
    for (i, m) in matching.iter().enumerate() {
        if let Some(u) = m {
            zs.push(base + i);
            ys.push(base + u);
        }
    }
    let last = zs.len() - 1;
    let m = zs.len();
    let mut idx_buf = Vec::new();
    let mut zt = Vec::new();
    let mut yt = Vec::new();
    for rel in 0..z.relation_count() {
        let k = z.arity(rel);
        idx_buf.resize(k, 0);
        zt.resize(k, 0);
        yt.resize(k, 0);
        for idx in 0..m.pow(k as u32) {
            let mut rest = idx;
            let mut hits = false;
            for slot in (0..k).rev() {
                idx_buf[slot] = rest % m;
                rest /= m;
                hits |= idx_buf[slot] == last;
            }
            if !hits {
                continue;
            }
            for s in 0..k {
                zt[s] = zs[idx_buf[s]];
                yt[s] = ys[idx_buf[s]];
            }
            if z.holds(rel, &zt) != y.holds(rel, &yt) {
                return false;
            }
        }
    }
    true
}

fn complete_matching(
    class: &ClassDefinition,
    base: usize,
    y: &Structure,
    z: &Structure,
    matching: &[Option<usize>],
    visit: &mut dyn FnMut(Amalgam) -> bool,
) -> bool {
    let mut z_map = vec![usize::MAX; z.size()];
    let mut w_to_z: Vec<Option<usize>> = vec![None; y.size()];
    for (i, slot) in z_map.iter_mut().enumerate().take(base) {
        *slot = i;
        w_to_z[i] = Some(i);
    }
    let mut pending = Vec::new();
    let mut identified = 0;
    for (t, m) in matching.iter().enumerate() {
        match m {
            Some(u) => {
                z_map[base + t] = base + u;
                w_to_z[base + u] = Some(base + t);
                identified += 1;
            }
            None => pending.push(base + t),
        }
    }
    grow(
        class,
        y.clone(),
        z,
        &pending,
        &mut z_map,
        &mut w_to_z,
        identified,
        visit,
    )
}

#[allow(clippy::too_many_arguments)]
fn grow(
    class: &ClassDefinition,
    w: Structure,
    z: &Structure,
    pending: &[usize],
    z_map: &mut Vec<usize>,
    w_to_z: &mut Vec<Option<usize>>,
    identified: usize,
    visit: &mut dyn FnMut(Amalgam) -> bool,
) -> bool {
    let Some((&b, rest)) = pending.split_first() else {
        return visit(Amalgam {
            result: w,
            z_map: z_map.clone(),
            identified,
        });
    };
    let p = w.size();
    w_to_z.push(Some(b));
    z_map[b] = p;
    let fixed = |rel: usize, t: &[usize]| -> Option<bool> {
        if t.len() > 8 {
            let zt = t.iter().map(|&v| w_to_z[v]).collect::<Option<Vec<_>>>()?;
            return Some(z.holds(rel, &zt));
        }
        let mut zt = [0usize; 8];
        let zt = &mut zt[..t.len()];
        for (slot, &v) in zt.iter_mut().zip(t) {
            *slot = w_to_z[v]?;
        }
        Some(z.holds(rel, zt))
    };
    let mut next = Vec::new();
    class.extend_point(&w, &fixed, &mut next);
    let mut go = true;
    for w2 in next {
        if !grow(class, w2, z, rest, z_map, w_to_z, identified, visit) {
            go = false;
            break;
        }
    }
    w_to_z.pop();
    z_map[b] = usize::MAX;
    go
}

/// Number of amalgamations, counting no further than `limit`.
pub(crate) fn count_amalgams(
    class: &ClassDefinition,
    base: usize,
    y: &Structure,
    z: &Structure,
    mode: Identification,
    limit: Option<usize>,
) -> usize {
    let mut count = 0;
    for_each_amalgam(class, base, y, z, mode, &mut |_| {
        count += 1;
        limit.is_none_or(|l| count < l)
    });
    count
}

/// A completed amalgamation square: `left_leg ∘ left = right_leg ∘ right`
/// and the images of the two legs cover `result`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmalgamationDiagram {
    pub base: Structure,
    pub left: Embedding,
    pub right: Embedding,
    pub result: Structure,
    pub left_leg: Embedding,
    pub right_leg: Embedding,
    /// Number of points of `right`'s codomain outside the base that are
    /// identified with points of `left`'s codomain.
    pub identified: usize,
}

/// All amalgamations of `i: X → Y` and `j: X → Z` up to diagram
/// equivalence, larger identifications first, then by result encoding.
pub fn enumerate_amalgamations(
    class: &ClassDefinition,
    i: &Embedding,
    j: &Embedding,
) -> Result<Vec<AmalgamationDiagram>> {
    if i.domain() != j.domain() {
        return Err(Error::InvalidEmbedding(
            "embeddings have different domains".into(),
        ));
    }
    for e in [i, j] {
        if !class.is_member(e.codomain())? {
            return Err(Error::NotMember {
                class: class.name(),
            });
        }
    }
    let base = i.domain().size();
    let (yp, y_order) = i.codomain_in_prefix_form();
    let (zp, z_order) = j.codomain_in_prefix_form();
    let mut found = Vec::new();
    for_each_amalgam(class, base, &yp, &zp, Identification::Allowed, &mut |a| {
        found.push(a);
        true
    });
    let mut keyed: Vec<(Reverse<usize>, Vec<usize>, Vec<u8>, Amalgam)> = found
        .into_iter()
        .map(|a| {
            let mut enc = Vec::new();
            a.result.encode_into(&mut enc);
            (Reverse(a.identified), a.z_map.clone(), enc, a)
        })
        .collect();
    keyed.sort_by(|x, y| (&x.0, &x.1, &x.2).cmp(&(&y.0, &y.1, &y.2)));
    let mut out = Vec::with_capacity(keyed.len());
    for (_, _, _, a) in keyed {
        let mut left_map = vec![0; yp.size()];
        for (t, &orig) in y_order.iter().enumerate() {
            left_map[orig] = t;
        }
        let mut right_map = vec![0; zp.size()];
        for (t, &orig) in z_order.iter().enumerate() {
            right_map[orig] = a.z_map[t];
        }
        let left_leg = Embedding::new(i.codomain().clone(), a.result.clone(), left_map)?;
        let right_leg = Embedding::new(j.codomain().clone(), a.result.clone(), right_map)?;
        out.push(AmalgamationDiagram {
            base: i.domain().clone(),
            left: i.clone(),
            right: j.clone(),
            result: a.result,
            left_leg,
            right_leg,
            identified: a.identified,
        });
    }
    Ok(out)
}
