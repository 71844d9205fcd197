//! Class definitions: built-in classes, joins, colorings and user classes
//! given by axiom tags plus forbidden induced substructures.
//!
//! Every class compiles down to the same representation: a signature, a set
//! of axiom tags (each covering some relations) and a list of forbidden
//! patterns. Both kinds of condition are closed under induced substructures,
//! so every class here is hereditary.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::structure::{for_each_embedding_map, index_tuple, Signature, Structure};
use crate::error::{Error, Result};

/// Condition tag attached to one or more relations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axiom {
    /// Binary relation is a strict total order.
    StrictTotalOrder(usize),
    /// Binary relation is irreflexive and symmetric (a simple graph).
    IrreflexiveSymmetric(usize),
    /// Every point lies in exactly one of these unary relations.
    ExactlyOneOf(Vec<usize>),
}

/// A forbidden induced substructure over a sub-signature. A structure is
/// excluded if its projection onto `relations` has an induced copy of
/// `pattern`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Forbidden {
    pub relations: Vec<usize>,
    pub pattern: Structure,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ClassKind {
    FiniteSets,
    LinearOrders,
    SPermutations(usize),
    ColoredLinearOrders(usize),
    /// Sets with an `s`-coloring: the coloring half of `Colored`.
    ColoredSets(usize),
    Join(Box<ClassDefinition>, Box<ClassDefinition>),
    Colored(Box<ClassDefinition>, usize),
    User(String),
}

/// How the one-point extension generator fills the tuples of a new point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Unit {
    Order(usize),
    Graph(usize),
    OneOf(Vec<usize>),
    Free(usize),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ClassDefinition {
    kind: ClassKind,
    signature: Signature,
    axioms: Vec<Axiom>,
    forbidden: Vec<Forbidden>,
    aut_base: Option<u64>,
    units: Vec<Unit>,
}

impl fmt::Debug for ClassDefinition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ClassDefinition({})", self.name())
    }
}

impl fmt::Display for ClassDefinition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl ClassDefinition {
    /// General constructor used by user classes and combinators.
    pub fn new(
        kind: ClassKind,
        signature: Signature,
        axioms: Vec<Axiom>,
        forbidden: Vec<Forbidden>,
        aut_base: Option<u64>,
    ) -> Result<Self> {
        let arities = signature.arities();
        let mut owner = vec![None; arities.len()];
        let mut units = Vec::new();
        for (ai, ax) in axioms.iter().enumerate() {
            let (rels, want): (Vec<usize>, usize) = match ax {
                Axiom::StrictTotalOrder(r) => (vec![*r], 2),
                Axiom::IrreflexiveSymmetric(r) => (vec![*r], 2),
                Axiom::ExactlyOneOf(g) => {
                    if g.is_empty() {
                        return Err(Error::InvalidClass("empty exactly-one-of group".into()));
                    }
                    (g.clone(), 1)
                }
            };
            for r in rels {
                let Some(&arity) = arities.get(r) else {
                    return Err(Error::InvalidClass(format!(
                        "axiom refers to missing relation {r}"
                    )));
                };
                if arity != want {
                    return Err(Error::InvalidClass(format!(
                        "axiom {ax:?} needs arity {want}, relation `{}` has arity {arity}",
                        signature.relations()[r].name
                    )));
                }
                if owner[r].replace(ai).is_some() {
                    return Err(Error::InvalidClass(format!(
                        "relation `{}` carries more than one axiom",
                        signature.relations()[r].name
                    )));
                }
            }
            units.push(match ax {
                Axiom::StrictTotalOrder(r) => Unit::Order(*r),
                Axiom::IrreflexiveSymmetric(r) => Unit::Graph(*r),
                Axiom::ExactlyOneOf(g) => Unit::OneOf(g.clone()),
            });
        }
        for (r, o) in owner.iter().enumerate() {
            if o.is_none() {
                units.push(Unit::Free(r));
            }
        }
        for f in &forbidden {
            if f.relations.iter().any(|&r| r >= arities.len()) {
                return Err(Error::InvalidClass(
                    "forbidden pattern refers to missing relation".into(),
                ));
            }
            let want: Vec<usize> = f.relations.iter().map(|&r| arities[r]).collect();
            if f.pattern.arities() != want {
                return Err(Error::InvalidClass(
                    "forbidden pattern is over a different signature".into(),
                ));
            }
        }
        if aut_base == Some(0) {
            return Err(Error::InvalidClass("aut_base must be positive".into()));
        }
        Ok(ClassDefinition {
            kind,
            signature,
            axioms,
            forbidden,
            aut_base,
            units,
        })
    }

    pub fn finite_sets() -> Self {
        Self::new(
            ClassKind::FiniteSets,
            Signature::empty(),
            vec![],
            vec![],
            None,
        )
        .unwrap()
    }

    pub fn linear_orders() -> Self {
        let sig = Signature::new([("lt", 2)]).unwrap();
        Self::new(
            ClassKind::LinearOrders,
            sig,
            vec![Axiom::StrictTotalOrder(0)],
            vec![],
            Some(1),
        )
        .unwrap()
    }

    /// Finite sets with `s` independent total orders.
    pub fn s_permutations(s: usize) -> Result<Self> {
        if s == 0 {
            return Err(Error::InvalidArgument("s must be at least 1".into()));
        }
        let sig = Signature::new((1..=s).map(|i| (format!("lt{i}"), 2)))?;
        let axioms = (0..s).map(Axiom::StrictTotalOrder).collect();
        Self::new(ClassKind::SPermutations(s), sig, axioms, vec![], Some(1))
    }

    pub fn colored_sets(s: usize) -> Result<Self> {
        if s == 0 {
            return Err(Error::InvalidArgument("s must be at least 1".into()));
        }
        let sig = Signature::new((1..=s).map(|i| (format!("c{i}"), 1)))?;
        Self::new(
            ClassKind::ColoredSets(s),
            sig,
            vec![Axiom::ExactlyOneOf((0..s).collect())],
            vec![],
            None,
        )
    }

    /// Total orders with an `s`-coloring of the points.
    pub fn colored_linear_orders(s: usize) -> Result<Self> {
        if s == 0 {
            return Err(Error::InvalidArgument("s must be at least 1".into()));
        }
        let sig = Signature::new(
            std::iter::once(("lt".to_string(), 2)).chain((1..=s).map(|i| (format!("c{i}"), 1))),
        )?;
        let axioms = vec![
            Axiom::StrictTotalOrder(0),
            Axiom::ExactlyOneOf((1..=s).collect()),
        ];
        Self::new(
            ClassKind::ColoredLinearOrders(s),
            sig,
            axioms,
            vec![],
            Some(1),
        )
    }

    /// Structures carrying an `a`-structure and a `b`-structure on the same
    /// set, with no interaction between the two.
    pub fn join(a: &ClassDefinition, b: &ClassDefinition) -> Self {
        Self::join_with_kind(
            ClassKind::Join(Box::new(a.clone()), Box::new(b.clone())),
            a,
            b,
            join_aut(a, b),
        )
    }

    /// The `s`-colored structures of `a`.
    pub fn colored(a: &ClassDefinition, s: usize) -> Result<Self> {
        let c = Self::colored_sets(s)?;
        Ok(Self::join_with_kind(
            ClassKind::Colored(Box::new(a.clone()), s),
            a,
            &c,
            a.aut_base,
        ))
    }

    fn join_with_kind(
        kind: ClassKind,
        a: &ClassDefinition,
        b: &ClassDefinition,
        aut: Option<u64>,
    ) -> Self {
        let off = a.signature.len();
        let shift = |ax: &Axiom| match ax {
            Axiom::StrictTotalOrder(r) => Axiom::StrictTotalOrder(r + off),
            Axiom::IrreflexiveSymmetric(r) => Axiom::IrreflexiveSymmetric(r + off),
            Axiom::ExactlyOneOf(g) => Axiom::ExactlyOneOf(g.iter().map(|r| r + off).collect()),
        };
        let mut axioms = a.axioms.clone();
        axioms.extend(b.axioms.iter().map(shift));
        let mut forbidden = a.forbidden.clone();
        forbidden.extend(b.forbidden.iter().map(|f| Forbidden {
            relations: f.relations.iter().map(|r| r + off).collect(),
            pattern: f.pattern.clone(),
        }));
        Self::new(
            kind,
            a.signature.concat(&b.signature),
            axioms,
            forbidden,
            aut,
        )
        .expect("join of valid classes is valid")
    }

    pub fn kind(&self) -> &ClassKind {
        &self.kind
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn arities(&self) -> Vec<usize> {
        self.signature.arities()
    }

    pub fn axioms(&self) -> &[Axiom] {
        &self.axioms
    }

    pub fn forbidden(&self) -> &[Forbidden] {
        &self.forbidden
    }

    /// The claimed `m` for AUT(m), if any.
    pub fn aut_base(&self) -> Option<u64> {
        self.aut_base
    }

    pub fn with_aut_base(mut self, m: Option<u64>) -> Result<Self> {
        if m == Some(0) {
            return Err(Error::InvalidClass("aut_base must be positive".into()));
        }
        self.aut_base = m;
        Ok(self)
    }

    /// Selector-style name, e.g. `colored-linear-orders:2` or
    /// `join(linear-orders,linear-orders)`.
    pub fn name(&self) -> String {
        match &self.kind {
            ClassKind::FiniteSets => "finite-sets".into(),
            ClassKind::LinearOrders => "linear-orders".into(),
            ClassKind::SPermutations(s) => format!("s-permutations:{s}"),
            ClassKind::ColoredLinearOrders(s) => format!("colored-linear-orders:{s}"),
            ClassKind::ColoredSets(s) => format!("colored-sets:{s}"),
            ClassKind::Join(a, b) => format!("join({},{})", a.name(), b.name()),
            ClassKind::Colored(a, s) => format!("colored({},{s})", a.name()),
            ClassKind::User(n) => format!("user:{n}"),
        }
    }

    /// Stable textual description of the compiled class (signature, axioms,
    /// forbidden patterns). Classes with equal keys have equal members.
    pub fn theory_key(&self) -> String {
        let mut out = String::new();
        for r in self.signature.relations() {
            out.push_str(&format!("rel {} {};", r.name, r.arity));
        }
        for a in &self.axioms {
            out.push_str(&format!("ax {a:?};"));
        }
        for f in &self.forbidden {
            let mut bytes = Vec::new();
            f.pattern.encode_into(&mut bytes);
            let hex: String = bytes.iter().map(|b| format!("{b:02x}")).collect();
            out.push_str(&format!(
                "forbid {:?} {} {hex};",
                f.relations,
                f.pattern.size()
            ));
        }
        out
    }

    /// Size of the largest substructure an axiom or forbidden pattern looks
    /// at. A structure whose every substructure of at most this size is a
    /// member is a member.
    pub fn locality(&self) -> usize {
        let mut k = 0;
        for u in &self.units {
            k = k.max(match u {
                Unit::Order(_) => 3,
                Unit::Graph(_) => 2,
                Unit::OneOf(_) => 1,
                Unit::Free(_) => 0,
            });
        }
        self.forbidden
            .iter()
            .map(|f| f.pattern.size())
            .fold(k, usize::max)
    }

    fn check_signature(&self, s: &Structure) -> Result<()> {
        if s.arities() != self.arities() {
            return Err(Error::SignatureMismatch(format!(
                "structure arities {:?} do not match class {} ({:?})",
                s.arities(),
                self.name(),
                self.arities()
            )));
        }
        Ok(())
    }

    pub fn is_member(&self, s: &Structure) -> Result<bool> {
        self.check_signature(s)?;
        Ok(self.contains(s))
    }

    pub(crate) fn contains(&self, s: &Structure) -> bool {
        let n = s.size();
        for u in &self.units {
            let ok = match u {
                Unit::Order(r) => is_strict_total_order(s, *r),
                Unit::Graph(r) => (0..n).all(|i| {
                    !s.holds2(*r, i, i)
                        && (i + 1..n).all(|j| s.holds2(*r, i, j) == s.holds2(*r, j, i))
                }),
                Unit::OneOf(g) => {
                    (0..n).all(|i| g.iter().filter(|&&r| s.holds(r, &[i])).count() == 1)
                }
                Unit::Free(_) => true,
            };
            if !ok {
                return false;
            }
        }
        self.forbidden.iter().all(|f| !has_pattern(s, f, None))
    }

    /// Membership of `s`, assuming `s` minus point `p` is already a member.
    #[cfg(test)]
    pub(crate) fn contains_through(&self, s: &Structure, p: usize) -> bool {
        let n = s.size();
        for u in &self.units {
            let ok = match u {
                Unit::Order(r) => order_ok_through(s, *r, p),
                Unit::Graph(r) => {
                    !s.holds2(*r, p, p) && (0..n).all(|j| s.holds2(*r, p, j) == s.holds2(*r, j, p))
                }
                Unit::OneOf(g) => g.iter().filter(|&&r| s.holds(r, &[p])).count() == 1,
                Unit::Free(_) => true,
            };
            if !ok {
                return false;
            }
        }
        self.forbidden.iter().all(|f| !has_pattern(s, f, Some(p)))
    }

    /// All members `w` with `w` minus its last point equal to `base`, whose
    /// tuples through the new point agree with `fixed` wherever `fixed`
    /// returns `Some`. `base` must be a member. Output order is deterministic.
    pub(crate) fn extend_point(
        &self,
        base: &Structure,
        fixed: &dyn Fn(usize, &[usize]) -> Option<bool>,
        out: &mut Vec<Structure>,
    ) {
        let w = base.with_new_point();
        self.extend_units(0, w, fixed, out);
    }

    fn extend_units(
        &self,
        ui: usize,
        w: Structure,
        fixed: &dyn Fn(usize, &[usize]) -> Option<bool>,
        out: &mut Vec<Structure>,
    ) {
        let p = w.size() - 1;
        if ui == self.units.len() {
            if self.forbidden.iter().all(|f| !has_pattern(&w, f, Some(p))) {
                out.push(w);
            }
            return;
        }
        let agrees = |r: usize, t: &[usize], v: bool| fixed(r, t).is_none_or(|f| f == v);
        match &self.units[ui] {
            Unit::Order(r) => {
                let r = *r;
                if !agrees(r, &[p, p], false) {
                    return;
                }
                // rank of each old point = number of old points below it
                let rank: Vec<usize> = (0..p)
                    .map(|y| (0..p).filter(|&z| w.holds2(r, z, y)).count())
                    .collect();
                for q in 0..=p {
                    let ok = (0..p).all(|y| {
                        let above = rank[y] >= q;
                        agrees(r, &[p, y], above) && agrees(r, &[y, p], !above)
                    });
                    if !ok {
                        continue;
                    }
                    let mut next = w.clone();
                    for y in 0..p {
                        if rank[y] >= q {
                            next.set(r, &[p, y], true);
                        } else {
                            next.set(r, &[y, p], true);
                        }
                    }
                    self.extend_units(ui + 1, next, fixed, out);
                }
            }
            Unit::Graph(r) => {
                let r = *r;
                if !agrees(r, &[p, p], false) {
                    return;
                }
                let mut choices = Vec::with_capacity(p);
                for y in 0..p {
                    let a = fixed(r, &[p, y]);
                    let b = fixed(r, &[y, p]);
                    let opts: Vec<bool> = match (a, b) {
                        (Some(x), Some(z)) if x != z => return,
                        (Some(x), _) | (_, Some(x)) => vec![x],
                        (None, None) => vec![false, true],
                    };
                    choices.push(opts);
                }
                let mut pick = vec![0usize; p];
                loop {
                    let mut next = w.clone();
                    for y in 0..p {
                        if choices[y][pick[y]] {
                            next.set(r, &[p, y], true);
                            next.set(r, &[y, p], true);
                        }
                    }
                    self.extend_units(ui + 1, next, fixed, out);
                    if !advance(&mut pick, &choices) {
                        break;
                    }
                }
            }
            Unit::OneOf(g) => {
                for &chosen in g {
                    if g.iter().all(|&r| agrees(r, &[p], r == chosen)) {
                        let mut next = w.clone();
                        next.set(chosen, &[p], true);
                        self.extend_units(ui + 1, next, fixed, out);
                    }
                }
            }
            Unit::Free(r) => {
                let r = *r;
                let k = w.arity(r);
                let n = w.size();
                let mut tuples = Vec::new();
                let mut choices = Vec::new();
                let mut buf = vec![0; k];
                for idx in 0..n.pow(k as u32) {
                    index_tuple(n, idx, &mut buf);
                    if !buf.contains(&p) {
                        continue;
                    }
                    let opts = match fixed(r, &buf) {
                        Some(v) => vec![v],
                        None => vec![false, true],
                    };
                    tuples.push(buf.clone());
                    choices.push(opts);
                }
                let mut pick = vec![0usize; tuples.len()];
                loop {
                    let mut next = w.clone();
                    for (t, (opts, &i)) in tuples.iter().zip(choices.iter().zip(&pick)) {
                        if opts[i] {
                            next.set(r, t, true);
                        }
                    }
                    self.extend_units(ui + 1, next, fixed, out);
                    if !advance(&mut pick, &choices) {
                        break;
                    }
                }
            }
        }
    }

    /// Every member one-point extension of `x`, the new point being `x.size()`.
    /// Extensions over `x` are pairwise non-isomorphic over `x`, since an
    /// isomorphism fixing `x` pointwise is the identity.
    pub fn one_point_extensions(&self, x: &Structure) -> Result<Vec<(Structure, usize)>> {
        self.check_signature(x)?;
        if !self.contains(x) {
            return Err(Error::NotMember { class: self.name() });
        }
        let mut out = Vec::new();
        self.extend_point(x, &|_, _| None, &mut out);
        let p = x.size();
        Ok(out.into_iter().map(|s| (s, p)).collect())
    }

    pub(crate) fn extensions_of(&self, x: &Structure) -> Vec<Structure> {
        let mut out = Vec::new();
        self.extend_point(x, &|_, _| None, &mut out);
        out
    }
}

fn join_aut(a: &ClassDefinition, b: &ClassDefinition) -> Option<u64> {
    match (a.aut_base, b.aut_base) {
        (Some(x), Some(y)) => Some(gcd(x, y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn advance(pick: &mut [usize], choices: &[Vec<bool>]) -> bool {
    for i in (0..pick.len()).rev() {
        if pick[i] + 1 < choices[i].len() {
            pick[i] += 1;
            for j in pick.iter_mut().skip(i + 1) {
                *j = 0;
            }
            return true;
        }
    }
    false
}

fn is_strict_total_order(s: &Structure, r: usize) -> bool {
    let n = s.size();
    for i in 0..n {
        if s.holds2(r, i, i) {
            return false;
        }
        for j in i + 1..n {
            if s.holds2(r, i, j) == s.holds2(r, j, i) {
                return false;
            }
        }
    }
    // a tournament is transitive iff its out-degrees are 0..n-1
    let mut deg: Vec<usize> = (0..n)
        .map(|i| (0..n).filter(|&j| s.holds2(r, i, j)).count())
        .collect();
    deg.sort_unstable();
    deg.iter().enumerate().all(|(i, &d)| i == d)
}

#[cfg(test)]
fn order_ok_through(s: &Structure, r: usize, p: usize) -> bool {
    let n = s.size();
    if s.holds2(r, p, p) {
        return false;
    }
    for y in 0..n {
        if y != p && s.holds2(r, p, y) == s.holds2(r, y, p) {
            return false;
        }
    }
    // no 3-cycle through p: y < p < z forces y < z
    for y in 0..n {
        if y == p || !s.holds2(r, y, p) {
            continue;
        }
        for z in 0..n {
            if z != p && z != y && s.holds2(r, p, z) && !s.holds2(r, y, z) {
                return false;
            }
        }
    }
    true
}

fn has_pattern(s: &Structure, f: &Forbidden, through: Option<usize>) -> bool {
    let proj = s.project(&f.relations);
    let mut found = false;
    for_each_embedding_map(&f.pattern, &proj, through, &mut |_| {
        found = true;
        false
    });
    found
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
    fn linear_order_membership() {
        let lo = ClassDefinition::linear_orders();
        assert!(lo.is_member(&chain(2)).unwrap());
        assert!(!lo.is_member(&Structure::empty(&[2], 2)).unwrap());
        let mut cyc = Structure::empty(&[2], 3);
        cyc.set(0, &[0, 1], true);
        cyc.set(0, &[1, 2], true);
        cyc.set(0, &[2, 0], true);
        assert!(!lo.is_member(&cyc).unwrap());
        assert!(lo.is_member(&Structure::empty(&[], 1)).is_err());
    }

    #[test]
    fn two_orders_are_members() {
        let sp = ClassDefinition::s_permutations(2).unwrap();
        let a = chain(3);
        for perm in [[0, 1, 2], [2, 0, 1], [1, 2, 0], [2, 1, 0]] {
            let s = a.concat(&a.permuted(&perm));
            assert!(sp.is_member(&s).unwrap());
        }
    }

    #[test]
    fn extension_counts() {
        let lo = ClassDefinition::linear_orders();
        assert_eq!(lo.one_point_extensions(&chain(0)).unwrap().len(), 1);
        assert_eq!(lo.one_point_extensions(&chain(1)).unwrap().len(), 2);
        assert_eq!(lo.one_point_extensions(&chain(4)).unwrap().len(), 5);
        for s in 1..4 {
            let c = ClassDefinition::colored_linear_orders(s).unwrap();
            let empty = Structure::empty(&c.arities(), 0);
            assert_eq!(c.one_point_extensions(&empty).unwrap().len(), s);
        }
        let g = ClassDefinition::new(
            ClassKind::User("graphs".into()),
            Signature::new([("e", 2)]).unwrap(),
            vec![Axiom::IrreflexiveSymmetric(0)],
            vec![],
            None,
        )
        .unwrap();
        let e2 = Structure::empty(&[2], 2);
        assert_eq!(g.one_point_extensions(&e2).unwrap().len(), 4);
    }

    #[test]
    fn local_check_agrees_with_global() {
        let sp = ClassDefinition::s_permutations(2).unwrap();
        let base = chain(3).concat(&chain(3).permuted(&[1, 2, 0]));
        let exts = sp.extensions_of(&base);
        assert_eq!(exts.len(), 16);
        for w in &exts {
            assert!(sp.contains(w));
            assert!(sp.contains_through(w, 3));
        }
    }

    #[test]
    fn forbidden_patterns() {
        // graphs without an edge: only edgeless graphs survive
        let edge = Structure::from_tuples(&[2], 2, &[vec![vec![0, 1], vec![1, 0]]]).unwrap();
        let g = ClassDefinition::new(
            ClassKind::User("edgeless".into()),
            Signature::new([("e", 2)]).unwrap(),
            vec![Axiom::IrreflexiveSymmetric(0)],
            vec![Forbidden {
                relations: vec![0],
                pattern: edge.clone(),
            }],
            None,
        )
        .unwrap();
        assert!(!g.is_member(&edge).unwrap());
        assert_eq!(
            g.one_point_extensions(&Structure::empty(&[2], 3))
                .unwrap()
                .len(),
            1
        );
    }

    #[test]
    fn invalid_classes() {
        let sig = Signature::new([("lt", 2), ("c", 1)]).unwrap();
        assert!(ClassDefinition::new(
            ClassKind::User("x".into()),
            sig.clone(),
            vec![Axiom::StrictTotalOrder(1)],
            vec![],
            None
        )
        .is_err());
        assert!(ClassDefinition::new(
            ClassKind::User("x".into()),
            sig.clone(),
            vec![Axiom::StrictTotalOrder(0), Axiom::IrreflexiveSymmetric(0)],
            vec![],
            None
        )
        .is_err());
        assert!(ClassDefinition::s_permutations(0).is_err());
    }

    #[test]
    fn join_names_and_aut() {
        let lo = ClassDefinition::linear_orders();
        let j = ClassDefinition::join(&lo, &lo);
        assert_eq!(j.name(), "join(linear-orders,linear-orders)");
        assert_eq!(j.aut_base(), Some(1));
        let fs = ClassDefinition::finite_sets();
        assert_eq!(ClassDefinition::join(&fs, &fs).aut_base(), None);
        assert_eq!(
            ClassDefinition::colored(&lo, 2).unwrap().aut_base(),
            Some(1)
        );
    }
}
