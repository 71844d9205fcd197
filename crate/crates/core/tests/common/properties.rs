//! Property checks shared by the unit-style tests and the acceptance target.
//! Each returns the number of cases checked, or a description of the first failure.

use std::collections::{BTreeSet, HashMap};

use amalgam::amalgamation::{
    enumerate_amalgamations, is_separated, AmalgamationDiagram, SeparationQuery,
};
use amalgam::marked::{is_extraneous, reduce, MarkedStructure};
use amalgam::structures::{canonical_form, Certificate, ClassDefinition, Embedding, Structure};
use amalgam::Context;
use rand::seq::SliceRandom;
use rand::Rng;

use super::{all_tuples, naive_amalgams, naive_isomorphic, relabel, tuple_sets};

pub type Checked = Result<usize, String>;

pub fn incl(x: &Structure, y: &Structure) -> Embedding {
    Embedding::new(x.clone(), y.clone(), (0..x.size()).collect()).unwrap()
}

/// Every (X, Y, Z) with Y and Z extensions of X in prefix form, |X| ≤ `max_base`
/// and |Y|, |Z| ≤ `max_side`.
pub fn diagrams(
    ctx: &Context,
    max_base: usize,
    max_side: usize,
) -> Vec<(Structure, Structure, Structure)> {
    let mut out = Vec::new();
    for b in 0..=max_base.min(max_side) {
        for x in ctx.structures(b).iter() {
            let exts: Vec<Structure> = (0..=max_side - b)
                .flat_map(|k| ctx.extensions_over(&x.structure, k))
                .collect();
            for y in &exts {
                for z in &exts {
                    out.push((x.structure.clone(), y.clone(), z.clone()));
                }
            }
        }
    }
    out
}

/// Amalgams agree with brute force over all relation contents. Diagrams whose
/// labeled search space exceeds 2^`max_bits` are skipped; returns (compared, skipped).
pub fn amalgams_match_oracle(
    class: &ClassDefinition,
    max_base: usize,
    max_side: usize,
    max_bits: usize,
) -> Result<(usize, usize), String> {
    let ctx = Context::new(class.clone());
    let (mut compared, mut skipped) = (0, 0);
    for (x, y, z) in diagrams(&ctx, max_base, max_side) {
        let Some(expected) = naive_amalgams(class, x.size(), &y, &z, max_bits) else {
            skipped += 1;
            continue;
        };
        let found = enumerate_amalgamations(class, &incl(&x, &y), &incl(&x, &z))
            .map_err(|e| e.to_string())?;
        let identity: Vec<usize> = (0..y.size()).collect();
        let mut keys = BTreeSet::new();
        for d in &found {
            if d.left_leg.map() != identity.as_slice() {
                return Err(format!("{}: left leg not the identity", class.name()));
            }
            keys.insert((tuple_sets(&d.result), d.right_leg.map().to_vec()));
        }
        if keys.len() != found.len() {
            return Err(format!("{}: duplicate diagrams over {x:?}", class.name()));
        }
        if keys != expected {
            return Err(format!(
                "{}: {} amalgams, oracle {} for {x:?} {y:?} {z:?}",
                class.name(),
                keys.len(),
                expected.len()
            ));
        }
        compared += 1;
    }
    Ok((compared, skipped))
}

fn legs_agree(d: &AmalgamationDiagram) -> bool {
    let a: Vec<usize> = d.left.map().iter().map(|&p| d.left_leg.map()[p]).collect();
    let b: Vec<usize> = d
        .right
        .map()
        .iter()
        .map(|&p| d.right_leg.map()[p])
        .collect();
    let mut covered = vec![false; d.result.size()];
    for &p in d.left_leg.map().iter().chain(d.right_leg.map()) {
        covered[p] = true;
    }
    a == b && covered.iter().all(|&c| c)
}

/// Whether some isomorphism `d.result → e.result` takes d's legs to e's legs swapped.
fn swap_iso(d: &AmalgamationDiagram, e: &AmalgamationDiagram) -> bool {
    if d.result.size() != e.result.size() {
        return false;
    }
    let mut h = vec![usize::MAX; d.result.size()];
    let pairs = d
        .left_leg
        .map()
        .iter()
        .zip(e.right_leg.map())
        .chain(d.right_leg.map().iter().zip(e.left_leg.map()));
    for (&from, &to) in pairs {
        if h[from] != usize::MAX && h[from] != to {
            return false;
        }
        h[from] = to;
    }
    Embedding::new(d.result.clone(), e.result.clone(), h).is_ok()
}

/// Swapping the two sides is a bijection on amalgams. Classes with several
/// relations are limited to amalgams of at most `heavy_limit` points.
pub fn amalgams_symmetric(
    class: &ClassDefinition,
    max_base: usize,
    max_side: usize,
    heavy_limit: usize,
) -> Checked {
    let ctx = Context::new(class.clone());
    let heavy = class.signature().len() > 1;
    let mut checked = 0;
    for (x, y, z) in diagrams(&ctx, max_base, max_side) {
        if heavy && y.size() + z.size() - x.size() > heavy_limit {
            continue;
        }
        let i = incl(&x, &y);
        let j = incl(&x, &z);
        let dij = enumerate_amalgamations(class, &i, &j).map_err(|e| e.to_string())?;
        let dji = enumerate_amalgamations(class, &j, &i).map_err(|e| e.to_string())?;
        let fail = |why: &str| format!("{}: {why} for {x:?} {y:?} {z:?}", class.name());
        if dij.len() != dji.len() {
            return Err(fail("counts differ"));
        }
        let mut used = vec![false; dji.len()];
        for d in &dij {
            if !legs_agree(d) {
                return Err(fail("legs disagree"));
            }
            let k = (0..dji.len())
                .find(|&k| !used[k] && swap_iso(d, &dji[k]))
                .ok_or_else(|| fail("no swapped partner"))?;
            used[k] = true;
        }
        checked += 1;
    }
    Ok(checked)
}

pub fn separated(class: &ClassDefinition, x: &Structure, a: &[usize], b: &[usize]) -> bool {
    is_separated(
        class,
        &SeparationQuery::new(x.clone(), a.to_vec(), b.to_vec()).unwrap(),
    )
    .unwrap()
}

/// For disjoint nonempty A, B, C: A∪B is separated from C in X iff A is
/// separated from C in X and B from C in X∖A. Exhaustive over sizes `sizes`.
pub fn separation_composes_law(
    class: &ClassDefinition,
    sizes: std::ops::RangeInclusive<usize>,
) -> Checked {
    let ctx = Context::new(class.clone());
    let mut checked = 0;
    for n in sizes {
        for c in ctx.structures(n).iter() {
            let x = &c.structure;
            for code in 0..4usize.pow(n as u32) {
                let mut parts = [vec![], vec![], vec![]];
                let mut rest = code;
                for p in 0..n {
                    if rest % 4 < 3 {
                        parts[rest % 4].push(p);
                    }
                    rest /= 4;
                }
                let [a, b, cc] = &parts;
                if a.is_empty() || b.is_empty() || cc.is_empty() {
                    continue;
                }
                let ab: Vec<usize> = a.iter().chain(b).copied().collect();
                let lhs = separated(class, x, &ab, cc);
                let keep: Vec<usize> = (0..n).filter(|p| !a.contains(p)).collect();
                let pos = |p: &usize| keep.iter().position(|q| q == p).unwrap();
                let xa = x.induced(&keep);
                let b2: Vec<usize> = b.iter().map(pos).collect();
                let c2: Vec<usize> = cc.iter().map(pos).collect();
                let rhs = separated(class, x, a, cc) && separated(class, &xa, &b2, &c2);
                if lhs != rhs {
                    return Err(format!("{} {x:?} A={a:?} B={b:?} C={cc:?}", class.name()));
                }
                checked += 1;
            }
        }
    }
    Ok(checked)
}

/// Every certificate reachable by deleting extraneous points in any order,
/// stopping only when no point is extraneous.
fn terminal_reductions(
    class: &ClassDefinition,
    m: &MarkedStructure,
    memo: &mut HashMap<Certificate, BTreeSet<Certificate>>,
) -> BTreeSet<Certificate> {
    let cert = m.certificate();
    if let Some(r) = memo.get(&cert) {
        return r.clone();
    }
    let n = m.structure.size();
    let mut out = BTreeSet::new();
    for y in (0..n).filter(|&y| y != m.mark) {
        if is_extraneous(class, m, y).unwrap() {
            let keep: Vec<usize> = (0..n).filter(|&p| p != y).collect();
            let mark = keep.iter().position(|&p| p == m.mark).unwrap();
            let smaller = MarkedStructure::new(m.structure.induced(&keep), mark).unwrap();
            out.extend(terminal_reductions(class, &smaller, memo));
        }
    }
    if out.is_empty() {
        out.insert(cert.clone());
    }
    memo.insert(cert, out.clone());
    out
}

/// All deletion orders of extraneous points end in the same class, which is
/// what `reduce` returns, also for a relabeled copy. Sizes 1..=`max_size`.
pub fn reduction_order_independent(class: &ClassDefinition, max_size: usize) -> Checked {
    let ctx = Context::new(class.clone());
    let mut memo = HashMap::new();
    let mut checked = 0;
    for n in 1..=max_size {
        for c in ctx.structures(n).iter() {
            for mark in 0..n {
                let m = MarkedStructure::new(c.structure.clone(), mark).unwrap();
                let ends = terminal_reductions(class, &m, &mut memo);
                let r = reduce(&ctx, &m).map_err(|e| e.to_string())?;
                if ends.len() != 1 {
                    return Err(format!(
                        "{}: {} terminal classes for {m:?}",
                        class.name(),
                        ends.len()
                    ));
                }
                if ends.into_iter().next().unwrap() != r.certificate {
                    return Err(format!("{}: reduce disagrees for {m:?}", class.name()));
                }
                let mut perm: Vec<usize> = (0..n).collect();
                perm.rotate_left(1);
                let moved = MarkedStructure::new(relabel(&c.structure, &perm), perm[mark]).unwrap();
                if reduce(&ctx, &moved).map_err(|e| e.to_string())?.certificate != r.certificate {
                    return Err(format!(
                        "{}: relabeling changes the reduction of {m:?}",
                        class.name()
                    ));
                }
                checked += 1;
            }
        }
    }
    Ok(checked)
}

pub fn random_structure(
    rng: &mut impl Rng,
    arities: &[usize],
    n: usize,
    density: f64,
) -> Structure {
    let mut s = Structure::empty(arities, n);
    for (r, &k) in arities.iter().enumerate() {
        for t in all_tuples(n, k) {
            if rng.gen_bool(density) {
                s.set(r, &t, true);
            }
        }
    }
    s
}

/// The canonical form of `s` is unchanged by a random relabeling, is idempotent
/// and is isomorphic to `s`.
pub fn canonical_form_invariant(rng: &mut impl Rng, s: &Structure) -> Result<(), String> {
    let n = s.size();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let t = relabel(s, &perm);
    let cs = canonical_form(s);
    let ct = canonical_form(&t);
    if cs.certificate != ct.certificate || cs.structure != ct.structure {
        return Err(format!(
            "relabeling {perm:?} changes the canonical form of {s:?}"
        ));
    }
    if cs.aut_order != ct.aut_order {
        return Err(format!(
            "relabeling {perm:?} changes the automorphism count of {s:?}"
        ));
    }
    let again = canonical_form(&cs.structure);
    if again.structure != cs.structure || again.certificate != cs.certificate {
        return Err(format!("canonical form of {s:?} is not idempotent"));
    }
    if !naive_isomorphic(s, &cs.structure) {
        return Err(format!("canonical form of {s:?} is not isomorphic to it"));
    }
    Ok(())
}
