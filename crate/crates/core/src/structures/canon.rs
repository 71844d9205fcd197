//! Canonical labeling of small structures.
//!
//! Individualization-refinement: the vertex partition is refined by the
//! multiset of (relation, cell pattern) signatures of the tuples each vertex
//! occurs in, then the first non-singleton cell is branched on. Every leaf is
//! a labeling; the canonical one has the smallest encoding, and the number of
//! leaves reaching that encoding is the order of the automorphism group.
//!
//! Vertex colors give an initial ordered partition. They are how points are
//! pinned: a marked point, or the base of an extension, gets its own color.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::structure::{index_tuple, Structure};

/// Byte string identifying an isomorphism class (of a possibly colored
/// structure). Equal certificates ⇔ isomorphic, for structures over the same
/// signature. Ordering is bytewise.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Certificate(#[serde(with = "hex_bytes")] Vec<u8>);

impl Certificate {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_hex(s: &str) -> Option<Certificate> {
        hex_bytes::decode(s).map(Certificate)
    }

    /// Size of the structure the certificate was computed from.
    pub fn size(&self) -> usize {
        self.0[0] as usize
    }

    /// Recover the canonical structure and its color vector.
    pub fn decode(&self, arities: &[usize]) -> Option<(Structure, Vec<u32>)> {
        let n = *self.0.first()? as usize;
        let colors: Vec<u32> = self.0.get(1..1 + n)?.iter().map(|&c| c as u32).collect();
        let (s, used) = Structure::decode(arities, n, &self.0[1 + n..])?;
        (1 + n + used == self.0.len()).then_some((s, colors))
    }
}

impl fmt::Debug for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Certificate({})", self.to_hex())
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

mod hex_bytes {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(bytes: &[u8], s: S) -> Result<S::Ok, S::Error> {
        let hex: String = bytes.iter().map(|b| format!("{b:02x}")).collect();
        s.serialize_str(&hex)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<u8>, D::Error> {
        let s = String::deserialize(d)?;
        decode(&s).ok_or_else(|| serde::de::Error::custom("invalid hex certificate"))
    }

    pub fn decode(s: &str) -> Option<Vec<u8>> {
        if s.len() % 2 != 0 {
            return None;
        }
        (0..s.len())
            .step_by(2)
            .map(|i| u8::from_str_radix(s.get(i..i + 2)?, 16).ok())
            .collect()
    }
}

/// A structure in canonical labeling together with its certificate and the
/// order of its (color-preserving) automorphism group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CanonicalStructure {
    pub structure: Structure,
    pub certificate: Certificate,
    pub aut_order: u64,
}

/// Result of a canonical labeling run on a concrete structure.
#[derive(Clone, Debug)]
pub struct Labeling {
    /// `perm[old] = new`.
    pub perm: Vec<usize>,
    pub certificate: Certificate,
    pub aut_order: u64,
}

impl Labeling {
    pub fn apply(&self, s: &Structure) -> Structure {
        s.permuted(&self.perm)
    }
}

pub fn canonical_form(s: &Structure) -> CanonicalStructure {
    canonical_form_colored(s, &vec![0; s.size()])
}

pub fn canonical_form_colored(s: &Structure, colors: &[u32]) -> CanonicalStructure {
    let lab = canonical_labeling(s, colors);
    CanonicalStructure {
        structure: lab.apply(s),
        certificate: lab.certificate,
        aut_order: lab.aut_order,
    }
}

/// Certificate of `s` with the given point colors. Colors must be < 256.
pub fn certificate(s: &Structure, colors: &[u32]) -> Certificate {
    canonical_labeling(s, colors).certificate
}

pub fn canonical_labeling(s: &Structure, colors: &[u32]) -> Labeling {
    let n = s.size();
    assert_eq!(colors.len(), n, "one color per point");
    assert!(n < 256, "structures are limited to 255 points");
    let mut distinct: Vec<u32> = colors.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let cells: Vec<u32> = colors
        .iter()
        .map(|c| distinct.binary_search(c).unwrap() as u32)
        .collect();
    let mut search = Search {
        s,
        colors,
        best: None,
        best_count: 0,
    };
    search.run(cells);
    let (enc, perm) = search.best.expect("at least one leaf");
    Labeling {
        perm,
        certificate: Certificate(enc),
        aut_order: search.best_count,
    }
}

struct Search<'a> {
    s: &'a Structure,
    colors: &'a [u32],
    best: Option<(Vec<u8>, Vec<usize>)>,
    best_count: u64,
}

impl Search<'_> {
    fn run(&mut self, mut cells: Vec<u32>) {
        let k = refine(self.s, &mut cells);
        let n = self.s.size();
        if k == n {
            self.leaf(cells.iter().map(|&c| c as usize).collect());
            return;
        }
        // first non-singleton cell
        let mut counts = vec![0usize; k];
        for &c in &cells {
            counts[c as usize] += 1;
        }
        let target = counts.iter().position(|&c| c > 1).unwrap() as u32;
        for v in 0..n {
            if cells[v] != target {
                continue;
            }
            let mut next = cells.clone();
            for (u, c) in next.iter_mut().enumerate() {
                if *c > target || (*c == target && u != v) {
                    *c += 1;
                }
            }
            self.run(next);
        }
    }

    fn leaf(&mut self, perm: Vec<usize>) {
        let enc = encode(self.s, self.colors, &perm);
        match &self.best {
            Some((b, _)) if *b < enc => {}
            Some((b, _)) if *b == enc => self.best_count += 1,
            _ => {
                self.best = Some((enc, perm));
                self.best_count = 1;
            }
        }
    }
}

fn encode(s: &Structure, colors: &[u32], perm: &[usize]) -> Vec<u8> {
    let n = s.size();
    let mut out = Vec::with_capacity(1 + n + 16);
    out.push(n as u8);
    let mut by_label = vec![0u8; n];
    for (old, &new) in perm.iter().enumerate() {
        by_label[new] = colors[old] as u8;
    }
    out.extend_from_slice(&by_label);
    s.encode_permuted_into(perm, &mut out);
    out
}

/// Refine `cells` (cell index per vertex, indices ordered) to a stable
/// partition. Returns the number of cells.
fn refine(s: &Structure, cells: &mut [u32]) -> usize {
    let n = s.size();
    let mut k = count_cells(cells);
    if k == n {
        return k;
    }
    k = split_by_degrees(s, cells, k);
    if k == n {
        return k;
    }
    let mut sigs: Vec<Vec<u64>> = vec![Vec::new(); n];
    let mut buf = Vec::new();
    loop {
        for sig in sigs.iter_mut() {
            sig.clear();
        }
        for rel in 0..s.relation_count() {
            let a = s.arity(rel);
            buf.resize(a, 0);
            s.for_each_tuple_index(rel, |idx| {
                index_tuple(n, idx, &mut buf);
                for (pos, &v) in buf.iter().enumerate() {
                    if buf[..pos].contains(&v) {
                        continue;
                    }
                    let mut code = rel as u64;
                    for &w in buf.iter() {
                        let c = if w == v { 0xff } else { cells[w] as u64 };
                        code = (code << 8) | c;
                    }
                    sigs[v].push(code);
                }
            });
        }
        let mut order: Vec<usize> = (0..n).collect();
        for sig in sigs.iter_mut() {
            sig.sort_unstable();
        }
        order.sort_by(|&x, &y| cells[x].cmp(&cells[y]).then_with(|| sigs[x].cmp(&sigs[y])));
        let mut next = vec![0u32; n];
        let mut id = 0u32;
        for w in 0..n {
            if w > 0 {
                let (p, q) = (order[w - 1], order[w]);
                if cells[p] != cells[q] || sigs[p] != sigs[q] {
                    id += 1;
                }
            }
            next[order[w]] = id;
        }
        let nk = id as usize + 1;
        cells.copy_from_slice(&next);
        if nk == k || nk == n {
            return nk;
        }
        k = nk;
    }
}

/// Cheap first pass: split cells by how often each vertex occurs at each
/// position of each relation.
fn split_by_degrees(s: &Structure, cells: &mut [u32], k: usize) -> usize {
    let n = s.size();
    let width: usize = (0..s.relation_count()).map(|r| s.arity(r)).sum();
    if width == 0 {
        return k;
    }
    let mut deg = vec![0u32; n * width];
    let mut offset = 0;
    for rel in 0..s.relation_count() {
        let a = s.arity(rel);
        s.for_each_tuple_index(rel, |idx| {
            let mut rest = idx;
            for pos in (0..a).rev() {
                deg[(rest % n) * width + offset + pos] += 1;
                rest /= n;
            }
        });
        offset += a;
    }
    let key = |v: usize| (cells[v], &deg[v * width..(v + 1) * width]);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| key(x).cmp(&key(y)));
    let mut next = vec![0u32; n];
    let mut id = 0u32;
    for w in 1..n {
        if key(order[w - 1]) != key(order[w]) {
            id += 1;
        }
        next[order[w]] = id;
    }
    cells.copy_from_slice(&next);
    id as usize + 1
}

fn count_cells(cells: &[u32]) -> usize {
    cells.iter().copied().max().map_or(0, |m| m as usize + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> Structure {
        let mut s = Structure::empty(&[2], n);
        for i in 0..n {
            for j in i + 1..n {
                s.set(0, &[i, j], true);
            }
        }
        s
    }

    #[test]
    fn empty_structure() {
        let c = canonical_form(&Structure::empty(&[2], 0));
        assert_eq!(c.aut_order, 1);
        assert_eq!(c.structure.size(), 0);
    }

    #[test]
    fn plain_sets_have_full_symmetry() {
        assert_eq!(canonical_form(&Structure::empty(&[], 3)).aut_order, 6);
        assert_eq!(canonical_form(&Structure::empty(&[], 5)).aut_order, 120);
    }

    #[test]
    fn chains_are_rigid() {
        let c = canonical_form(&chain(3));
        assert_eq!(c.aut_order, 1);
        let reversed = chain(3).permuted(&[2, 1, 0]);
        assert_eq!(canonical_form(&reversed).certificate, c.certificate);
    }

    #[test]
    fn colors_pin_points() {
        let s = Structure::empty(&[], 3);
        let c = canonical_form_colored(&s, &[1, 0, 0]);
        assert_eq!(c.aut_order, 2);
        let c2 = canonical_form_colored(&s, &[0, 0, 1]);
        assert_eq!(c.certificate, c2.certificate);
        let c3 = canonical_form_colored(&s, &[0, 1, 1]);
        assert_ne!(c.certificate, c3.certificate);
    }

    #[test]
    fn certificate_decodes() {
        let c = canonical_form_colored(&chain(4), &[0, 0, 3, 0]);
        let (s, colors) = c.certificate.decode(&[2]).unwrap();
        assert_eq!(s, c.structure);
        assert_eq!(colors, vec![0, 0, 0, 3]);
        let hex = c.certificate.to_hex();
        assert_eq!(Certificate::from_hex(&hex).unwrap(), c.certificate);
    }

    #[test]
    fn cycle_automorphisms() {
        // directed 4-cycle
        let mut s = Structure::empty(&[2], 4);
        for i in 0..4 {
            s.set(0, &[i, (i + 1) % 4], true);
        }
        assert_eq!(canonical_form(&s).aut_order, 4);
    }
}
