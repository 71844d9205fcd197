#![allow(dead_code)]

pub mod properties;

use std::collections::BTreeSet;

use amalgam::structures::{ClassDefinition, Structure};

pub fn chain(n: usize) -> Structure {
    let mut s = Structure::empty(&[2], n);
    for i in 0..n {
        for j in i + 1..n {
            s.set(0, &[i, j], true);
        }
    }
    s
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                go(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Every tuple of points of `n` of length `k`, in lexicographic order.
pub fn all_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t: Vec<usize>| {
                (0..n).map(move |p| {
                    let mut t = t.clone();
                    t.push(p);
                    t
                })
            })
            .collect();
    }
    out
}

pub fn tuple_sets(s: &Structure) -> Vec<Vec<Vec<usize>>> {
    (0..s.relation_count()).map(|r| s.tuples(r)).collect()
}

/// `s` with point `p` moved to `perm[p]`, computed tuple by tuple.
pub fn relabel(s: &Structure, perm: &[usize]) -> Structure {
    let tuples: Vec<Vec<Vec<usize>>> = (0..s.relation_count())
        .map(|r| {
            s.tuples(r)
                .into_iter()
                .map(|t| t.iter().map(|&p| perm[p]).collect())
                .collect()
        })
        .collect();
    Structure::from_tuples(&s.arities(), s.size(), &tuples).unwrap()
}

/// Lexicographically least relabeling over all permutations.
pub fn naive_canonical_key(s: &Structure) -> Vec<Vec<Vec<usize>>> {
    permutations(s.size())
        .into_iter()
        .map(|p| {
            let mut t = tuple_sets(&relabel(s, &p));
            for r in &mut t {
                r.sort();
            }
            t
        })
        .min()
        .unwrap()
}

pub fn naive_isomorphic(a: &Structure, b: &Structure) -> bool {
    a.size() == b.size() && naive_canonical_key(a) == naive_canonical_key(b)
}

pub fn naive_automorphisms(s: &Structure) -> usize {
    permutations(s.size())
        .into_iter()
        .filter(|p| relabel(s, p) == *s)
        .count()
}

/// Every labeled member of `class` on `n` points, by running over all
/// relation contents. Returns `None` when that is more than `2^max_bits`.
pub fn labeled_members(
    class: &ClassDefinition,
    n: usize,
    max_bits: usize,
) -> Option<Vec<Structure>> {
    let arities = class.arities();
    let slots: Vec<(usize, Vec<usize>)> = arities
        .iter()
        .enumerate()
        .flat_map(|(r, &k)| all_tuples(n, k).into_iter().map(move |t| (r, t)))
        .collect();
    if slots.len() > max_bits {
        return None;
    }
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << slots.len()) {
        let mut s = Structure::empty(&arities, n);
        for (b, (r, t)) in slots.iter().enumerate() {
            if mask >> b & 1 == 1 {
                s.set(*r, t, true);
            }
        }
        if class.is_member(&s).unwrap() {
            out.push(s);
        }
    }
    Some(out)
}

/// Amalgamations of `y` and `z` over the shared prefix `0..base`, by
/// brute force over point identifications and the contents of every tuple
/// not inside `y` or inside `z`. Each amalgamation is normalized so that
/// `y` keeps its labels and the remaining points of `z` follow in order;
/// it is returned as (tuples of the result, image of each point of `z`).
/// `None` when more than `max_bits` tuples are free.
pub fn naive_amalgams(
    class: &ClassDefinition,
    base: usize,
    y: &Structure,
    z: &Structure,
    max_bits: usize,
) -> Option<BTreeSet<(Vec<Vec<Vec<usize>>>, Vec<usize>)>> {
    let ky = y.size() - base;
    let kz = z.size() - base;
    let mut out = BTreeSet::new();
    for matching in partial_injections(kz, ky) {
        let unmatched = matching.iter().filter(|m| m.is_none()).count();
        let n = y.size() + unmatched;
        let mut z_map: Vec<usize> = (0..base).collect();
        let mut next = y.size();
        for m in &matching {
            match m {
                Some(u) => z_map.push(base + u),
                None => {
                    z_map.push(next);
                    next += 1;
                }
            }
        }
        let mut inv = vec![None; n];
        for (zp, &w) in z_map.iter().enumerate() {
            inv[w] = Some(zp);
        }
        let arities = class.arities();
        let mut fixed = Structure::empty(&arities, n);
        let mut free = Vec::new();
        let mut consistent = true;
        for (r, &k) in arities.iter().enumerate() {
            for t in all_tuples(n, k) {
                let in_y = t.iter().all(|&p| p < y.size());
                let zt: Option<Vec<usize>> = t.iter().map(|&p| inv[p]).collect();
                match (in_y, zt) {
                    (true, Some(zt)) => {
                        if y.holds(r, &t) != z.holds(r, &zt) {
                            consistent = false;
                        }
                        fixed.set(r, &t, y.holds(r, &t));
                    }
                    (true, None) => fixed.set(r, &t, y.holds(r, &t)),
                    (false, Some(zt)) => fixed.set(r, &t, z.holds(r, &zt)),
                    (false, None) => free.push((r, t)),
                }
            }
        }
        if !consistent {
            continue;
        }
        if free.len() > max_bits {
            return None;
        }
        for mask in 0u64..(1u64 << free.len()) {
            let mut w = fixed.clone();
            for (b, (r, t)) in free.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    w.set(*r, t, true);
                }
            }
            if class.is_member(&w).unwrap() {
                out.insert((tuple_sets(&w), z_map.clone()));
            }
        }
    }
    Some(out)
}

/// All partial injections `0..k → 0..m`.
pub fn partial_injections(k: usize, m: usize) -> Vec<Vec<Option<usize>>> {
    fn go(
        k: usize,
        used: &mut Vec<bool>,
        cur: &mut Vec<Option<usize>>,
        out: &mut Vec<Vec<Option<usize>>>,
    ) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        cur.push(None);
        go(k, used, cur, out);
        cur.pop();
        for u in 0..used.len() {
            if !used[u] {
                used[u] = true;
                cur.push(Some(u));
                go(k, used, cur, out);
                cur.pop();
                used[u] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(k, &mut vec![false; m], &mut Vec::new(), &mut out);
    out
}

/// Built-in classes small enough for exhaustive checks.
pub fn small_classes() -> Vec<ClassDefinition> {
    vec![
        ClassDefinition::finite_sets(),
        ClassDefinition::linear_orders(),
        ClassDefinition::colored_linear_orders(1).unwrap(),
        ClassDefinition::colored_linear_orders(2).unwrap(),
        ClassDefinition::colored_sets(2).unwrap(),
        ClassDefinition::s_permutations(2).unwrap(),
    ]
}

/// Every subset of `items`.
pub fn subsets(items: &[usize]) -> Vec<Vec<usize>> {
    (0u32..1 << items.len())
        .map(|m| {
            items
                .iter()
                .enumerate()
                .filter(|(i, _)| m >> i & 1 == 1)
                .map(|(_, &p)| p)
                .collect()
        })
        .collect()
}
