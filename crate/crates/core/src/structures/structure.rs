use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A relation symbol: a name and an arity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RelationSymbol {
    pub name: String,
    pub arity: usize,
}

/// Ordered list of relation symbols. The order is part of the identity of a
/// signature: relation `k` of every structure over it is the `k`-th symbol.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    relations: Vec<RelationSymbol>,
}

impl Signature {
    pub fn new<I, S>(relations: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let mut out = Vec::new();
        for (name, arity) in relations {
            let name = name.into();
            if arity == 0 {
                return Err(Error::InvalidSignature(format!(
                    "relation `{name}` has arity 0"
                )));
            }
            if out.iter().any(|r: &RelationSymbol| r.name == name) {
                return Err(Error::InvalidSignature(format!(
                    "duplicate relation `{name}`"
                )));
            }
            out.push(RelationSymbol { name, arity });
        }
        Ok(Signature { relations: out })
    }

    pub fn empty() -> Self {
        Signature::default()
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn relations(&self) -> &[RelationSymbol] {
        &self.relations
    }

    pub fn arities(&self) -> Vec<usize> {
        self.relations.iter().map(|r| r.arity).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.relations.iter().position(|r| r.name == name)
    }

    /// Concatenation used by joins. Relations are renamed by side so the
    /// result never has clashing names: `l.<name>` for the left operand and
    /// `r.<name>` for the right one.
    pub fn concat(&self, other: &Signature) -> Signature {
        let mut relations = Vec::with_capacity(self.len() + other.len());
        for r in &self.relations {
            relations.push(RelationSymbol {
                name: format!("l.{}", r.name),
                arity: r.arity,
            });
        }
        for r in &other.relations {
            relations.push(RelationSymbol {
                name: format!("r.{}", r.name),
                arity: r.arity,
            });
        }
        Signature { relations }
    }
}

/// Tuple set of one relation on `{0..n}`, stored as a dense bitset indexed by
/// the base-`n` value of the tuple.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Relation {
    arity: u8,
    bits: Vec<u64>,
}

impl Relation {
    fn empty(arity: usize, n: usize) -> Self {
        let cells = n.pow(arity as u32);
        Relation {
            arity: arity as u8,
            bits: vec![0; cells.div_ceil(64)],
        }
    }

    #[inline]
    fn get(&self, idx: usize) -> bool {
        self.bits[idx >> 6] >> (idx & 63) & 1 == 1
    }

    #[inline]
    fn set(&mut self, idx: usize, value: bool) {
        if value {
            self.bits[idx >> 6] |= 1 << (idx & 63);
        } else {
            self.bits[idx >> 6] &= !(1 << (idx & 63));
        }
    }
}

fn for_each_set_bit(rel: &Relation, mut f: impl FnMut(usize)) {
    for (wi, &word) in rel.bits.iter().enumerate() {
        let mut w = word;
        while w != 0 {
            f(wi * 64 + w.trailing_zeros() as usize);
            w &= w - 1;
        }
    }
}

#[inline]
fn tuple_index(n: usize, tuple: &[usize]) -> usize {
    tuple.iter().fold(0, |acc, &t| acc * n + t)
}

/// Decode a base-`n` index into `out`.
#[inline]
pub(crate) fn index_tuple(n: usize, mut idx: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = idx % n;
        idx /= n;
    }
}

/// A finite relational structure on the universe `{0..size}`.
///
/// The structure does not carry its signature, only the arities; operations
/// that need names take the signature from the class.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Structure {
    size: usize,
    relations: Vec<Relation>,
}

impl Structure {
    pub fn empty(arities: &[usize], size: usize) -> Self {
        Structure {
            size,
            relations: arities.iter().map(|&a| Relation::empty(a, size)).collect(),
        }
    }

    /// Build a structure from explicit tuple lists, one per relation.
    pub fn from_tuples(arities: &[usize], size: usize, tuples: &[Vec<Vec<usize>>]) -> Result<Self> {
        if tuples.len() != arities.len() {
            return Err(Error::SignatureMismatch(format!(
                "expected {} relations, got {}",
                arities.len(),
                tuples.len()
            )));
        }
        let mut s = Structure::empty(arities, size);
        for (r, list) in tuples.iter().enumerate() {
            for t in list {
                if t.len() != arities[r] {
                    return Err(Error::SignatureMismatch(format!(
                        "tuple {t:?} in relation {r} has arity {}, expected {}",
                        t.len(),
                        arities[r]
                    )));
                }
                if let Some(&bad) = t.iter().find(|&&x| x >= size) {
                    return Err(Error::InvalidStructure(format!(
                        "tuple entry {bad} out of range 0..{size}"
                    )));
                }
                s.set(r, t, true);
            }
        }
        Ok(s)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn relation_count(&self) -> usize {
        self.relations.len()
    }

    pub fn arity(&self, rel: usize) -> usize {
        self.relations[rel].arity as usize
    }

    pub fn arities(&self) -> Vec<usize> {
        self.relations.iter().map(|r| r.arity as usize).collect()
    }

    #[inline]
    pub fn holds(&self, rel: usize, tuple: &[usize]) -> bool {
        debug_assert_eq!(tuple.len(), self.arity(rel));
        self.relations[rel].get(tuple_index(self.size, tuple))
    }

    /// Visit the base-`n` index of every tuple of `rel`, increasing.
    pub(crate) fn for_each_tuple_index(&self, rel: usize, f: impl FnMut(usize)) {
        for_each_set_bit(&self.relations[rel], f);
    }

    #[inline]
    pub fn holds2(&self, rel: usize, a: usize, b: usize) -> bool {
        self.relations[rel].get(a * self.size + b)
    }

    #[inline]
    pub fn set(&mut self, rel: usize, tuple: &[usize], value: bool) {
        let idx = tuple_index(self.size, tuple);
        self.relations[rel].set(idx, value);
    }

    /// All tuples of relation `rel`, in lexicographic order.
    pub fn tuples(&self, rel: usize) -> Vec<Vec<usize>> {
        let k = self.arity(rel);
        let cells = self.size.pow(k as u32);
        let mut out = Vec::new();
        let mut buf = vec![0; k];
        for idx in 0..cells {
            if self.relations[rel].get(idx) {
                index_tuple(self.size, idx, &mut buf);
                out.push(buf.clone());
            }
        }
        out
    }

    pub fn tuple_count(&self, rel: usize) -> usize {
        self.relations[rel]
            .bits
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    /// Induced substructure on `points`; point `points[i]` becomes `i`.
    pub fn induced(&self, points: &[usize]) -> Structure {
        let m = points.len();
        let n = self.size;
        let mut out = self.empty_like(m);
        if m == 0 {
            return out;
        }
        for (rel, dst) in self.relations.iter().zip(out.relations.iter_mut()) {
            let k = rel.arity as usize;
            let cells = m.pow(k as u32);
            // odometer over small tuples, tracking the big index incrementally
            let mut small = vec![0usize; k];
            let pw: Vec<usize> = (0..k).map(|i| n.pow((k - 1 - i) as u32)).collect();
            let mut big: usize = pw.iter().map(|&w| w * points[0]).sum();
            for idx in 0..cells {
                if rel.get(big) {
                    dst.set(idx, true);
                }
                let mut pos = k;
                while pos > 0 {
                    pos -= 1;
                    big -= pw[pos] * points[small[pos]];
                    small[pos] += 1;
                    if small[pos] < m {
                        big += pw[pos] * points[small[pos]];
                        break;
                    }
                    small[pos] = 0;
                    big += pw[pos] * points[0];
                }
            }
        }
        out
    }

    fn empty_like(&self, size: usize) -> Structure {
        Structure {
            size,
            relations: self
                .relations
                .iter()
                .map(|r| Relation::empty(r.arity as usize, size))
                .collect(),
        }
    }

    /// Relabel: old point `i` becomes `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Structure {
        let n = self.size;
        debug_assert_eq!(perm.len(), n);
        let mut out = self.empty_like(n);
        for (rel, dst) in self.relations.iter().zip(out.relations.iter_mut()) {
            let k = rel.arity as usize;
            for_each_set_bit(rel, |idx| {
                let mut rest = idx;
                let mut target = 0;
                let mut w = 1;
                for _ in 0..k {
                    target += perm[rest % n] * w;
                    rest /= n;
                    w *= n;
                }
                dst.set(target, true);
            });
        }
        out
    }

    /// Copy with one extra point `size` that occurs in no tuple.
    pub fn with_new_point(&self) -> Structure {
        let n = self.size;
        let m = n + 1;
        let mut out = self.empty_like(m);
        for (rel, dst) in self.relations.iter().zip(out.relations.iter_mut()) {
            let k = rel.arity as usize;
            for_each_set_bit(rel, |idx| {
                let mut rest = idx;
                let mut target = 0;
                let mut w = 1;
                for _ in 0..k {
                    target += (rest % n) * w;
                    rest /= n;
                    w *= m;
                }
                dst.set(target, true);
            });
        }
        out
    }

    /// Induced substructure on all points but `p`; points above `p` shift down.
    pub fn without_point(&self, p: usize) -> Structure {
        let keep: Vec<usize> = (0..self.size).filter(|&i| i != p).collect();
        self.induced(&keep)
    }

    /// Projection onto a subset of the relations (in the given order).
    pub fn project(&self, rels: &[usize]) -> Structure {
        Structure {
            size: self.size,
            relations: rels.iter().map(|&r| self.relations[r].clone()).collect(),
        }
    }

    /// Concatenate the relations of two structures on the same universe.
    pub fn concat(&self, other: &Structure) -> Structure {
        debug_assert_eq!(self.size, other.size);
        let mut relations = self.relations.clone();
        relations.extend(other.relations.iter().cloned());
        Structure {
            size: self.size,
            relations,
        }
    }

    /// Dense encoding of the relation contents: every relation's bitset in
    /// tuple-index order, little-endian within each byte.
    pub(crate) fn encode_into(&self, out: &mut Vec<u8>) {
        for rel in &self.relations {
            let len = self.size.pow(rel.arity as u32).div_ceil(8);
            let start = out.len();
            for w in &rel.bits {
                out.extend_from_slice(&w.to_le_bytes());
            }
            out.truncate(start + len);
        }
    }

    /// Appends the encoding of `self.permuted(perm)` without building it.
    pub(crate) fn encode_permuted_into(&self, perm: &[usize], out: &mut Vec<u8>) {
        let n = self.size;
        for rel in &self.relations {
            let k = rel.arity as usize;
            let start = out.len();
            out.resize(start + n.pow(k as u32).div_ceil(8), 0);
            for_each_set_bit(rel, |idx| {
                let mut rest = idx;
                let mut target = 0;
                let mut w = 1;
                for _ in 0..k {
                    target += perm[rest % n] * w;
                    rest /= n;
                    w *= n;
                }
                out[start + (target >> 3)] |= 1 << (target & 7);
            });
        }
    }

    pub(crate) fn decode(
        arities: &[usize],
        size: usize,
        bytes: &[u8],
    ) -> Option<(Structure, usize)> {
        let mut s = Structure::empty(arities, size);
        let mut pos = 0;
        for rel in s.relations.iter_mut() {
            let cells = size.pow(rel.arity as u32);
            let len = cells.div_ceil(8);
            let chunk = bytes.get(pos..pos + len)?;
            for idx in 0..cells {
                if chunk[idx >> 3] >> (idx & 7) & 1 == 1 {
                    rel.set(idx, true);
                }
            }
            pos += len;
        }
        Some((s, pos))
    }
}

impl fmt::Debug for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Structure({}", self.size)?;
        for rel in 0..self.relations.len() {
            write!(f, "; R{rel}=")?;
            let ts = self.tuples(rel);
            f.debug_list().entries(ts.iter()).finish()?;
        }
        write!(f, ")")
    }
}

/// An injective, relation-preserving and -reflecting map between structures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    domain: Structure,
    codomain: Structure,
    map: Vec<usize>,
}

impl Embedding {
    pub fn new(domain: Structure, codomain: Structure, map: Vec<usize>) -> Result<Self> {
        if map.len() != domain.size() {
            return Err(Error::InvalidEmbedding(
                "map length differs from domain size".into(),
            ));
        }
        if domain.arities() != codomain.arities() {
            return Err(Error::SignatureMismatch(
                "embedding between different signatures".into(),
            ));
        }
        let mut seen = vec![false; codomain.size()];
        for &m in &map {
            if m >= codomain.size() || std::mem::replace(&mut seen[m], true) {
                return Err(Error::InvalidEmbedding(format!(
                    "map {map:?} is not injective into {}",
                    codomain.size()
                )));
            }
        }
        if codomain.induced(&map) != domain {
            return Err(Error::InvalidEmbedding(format!(
                "map {map:?} does not preserve relations"
            )));
        }
        Ok(Embedding {
            domain,
            codomain,
            map,
        })
    }

    /// The identity embedding of a structure.
    pub fn identity(s: Structure) -> Self {
        let map = (0..s.size()).collect();
        Embedding {
            domain: s.clone(),
            codomain: s,
            map,
        }
    }

    pub fn domain(&self) -> &Structure {
        &self.domain
    }

    pub fn codomain(&self) -> &Structure {
        &self.codomain
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn is_isomorphism(&self) -> bool {
        self.domain.size() == self.codomain.size()
    }

    /// Codomain relabeled so that the image of the domain is the prefix
    /// `0..domain.size()` (in map order) and the remaining points follow in
    /// increasing order.
    pub fn codomain_in_prefix_form(&self) -> (Structure, Vec<usize>) {
        let mut order = self.map.clone();
        let mut used = vec![false; self.codomain.size()];
        for &m in &self.map {
            used[m] = true;
        }
        order.extend((0..self.codomain.size()).filter(|&p| !used[p]));
        (self.codomain.induced(&order), order)
    }
}

/// All induced embeddings of `x` into `y`, in lexicographic order of maps.
pub fn embeddings(x: &Structure, y: &Structure) -> Result<Vec<Embedding>> {
    if x.arities() != y.arities() {
        return Err(Error::SignatureMismatch(
            "embeddings between different signatures".into(),
        ));
    }
    let mut out = Vec::new();
    for_each_embedding_map(x, y, None, &mut |map| {
        out.push(Embedding {
            domain: x.clone(),
            codomain: y.clone(),
            map: map.to_vec(),
        });
        true
    });
    Ok(out)
}

/// Backtracking search over induced embeddings `x -> y`. If `must_hit` is
/// given, only maps whose image contains that point are reported. The
/// callback returns `false` to stop the search.
pub(crate) fn for_each_embedding_map(
    x: &Structure,
    y: &Structure,
    must_hit: Option<usize>,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if x.size() > y.size() {
        return true;
    }
    let mut map = Vec::with_capacity(x.size());
    let mut used = vec![false; y.size()];
    extend_map(x, y, must_hit, &mut map, &mut used, visit)
}

fn extend_map(
    x: &Structure,
    y: &Structure,
    must_hit: Option<usize>,
    map: &mut Vec<usize>,
    used: &mut [bool],
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    let i = map.len();
    if i == x.size() {
        if let Some(h) = must_hit {
            if !map.contains(&h) {
                return true;
            }
        }
        return visit(map);
    }
    for cand in 0..y.size() {
        if used[cand] {
            continue;
        }
        map.push(cand);
        if consistent_prefix(x, y, map) {
            used[cand] = true;
            let go_on = extend_map(x, y, must_hit, map, used, visit);
            used[cand] = false;
            if !go_on {
                map.pop();
                return false;
            }
        }
        map.pop();
    }
    true
}

/// Checks every tuple over `0..map.len()` that involves the last mapped point.
fn consistent_prefix(x: &Structure, y: &Structure, map: &[usize]) -> bool {
    let m = map.len();
    let last = m - 1;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for rel in 0..x.relation_count() {
        let k = x.arity(rel);
        xs.resize(k, 0);
        ys.resize(k, 0);
        let cells = m.pow(k as u32);
        for idx in 0..cells {
            index_tuple(m, idx, &mut xs);
            if !xs.contains(&last) {
                continue;
            }
            for (yv, &xv) in ys.iter_mut().zip(xs.iter()) {
                *yv = map[xv];
            }
            if x.holds(rel, &xs) != y.holds(rel, &ys) {
                return false;
            }
        }
    }
    true
}
