//! Finite abelian groups as products of cyclic factors and field-additive
//! factors, with subsets and difference multisets on top.
//!
//! Elements are canonical residue tuples and every listing (elements,
//! subsets, multiset supports) is emitted in lexicographic coordinate order,
//! so identical inputs produce byte-identical output. All values are
//! immutable after construction and all operations are pure.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::galois::{FieldElement, FieldSpec};

/// One direct factor of the group: Z_n, or the additive group of a field.
///
/// Field factors stay first-class (rather than flattening to Z_p^d) so the
/// multiplicative structure remains available to the constructions that need
/// it.
#[derive(Debug, Clone)]
pub enum GroupFactor {
    Cyclic(u64),
    Field(Arc<FieldSpec>),
}

impl GroupFactor {
    pub fn size(&self) -> u64 {
        match self {
            GroupFactor::Cyclic(n) => *n,
            GroupFactor::Field(f) => f.order(),
        }
    }
}

impl PartialEq for GroupFactor {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (GroupFactor::Cyclic(a), GroupFactor::Cyclic(b)) => a == b,
            (GroupFactor::Field(a), GroupFactor::Field(b)) => a == b,
            _ => false,
        }
    }
}
impl Eq for GroupFactor {}

/// One coordinate of a group element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coord {
    Z(u64),
    F(FieldElement),
}

/// Element of a [`GroupSpec`]: one residue (or field element) per factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    coords: Vec<Coord>,
}

impl GroupElement {
    pub fn coords(&self) -> &[Coord] {
        &self.coords
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            match c {
                Coord::Z(v) => write!(f, "{v}")?,
                Coord::F(e) => write!(f, "{e}")?,
            }
        }
        write!(f, ")")
    }
}

/// A finite abelian group given as a direct product of factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSpec {
    factors: Vec<GroupFactor>,
    order: u64,
}

/// Direct product of cyclic groups Z_{n_i}, optionally extended by the
/// additive group of a finite field as the last factor.
pub fn make_group(cyclic_orders: &[u64], field_factor: Option<Arc<FieldSpec>>) -> Result<GroupSpec> {
    let mut factors: Vec<GroupFactor> = Vec::new();
    for &n in cyclic_orders {
        if n == 0 {
            return Err(Error::Parameter("cyclic factor orders must be >= 1".into()));
        }
        factors.push(GroupFactor::Cyclic(n));
    }
    if let Some(f) = field_factor {
        factors.push(GroupFactor::Field(f));
    }
    GroupSpec::product(factors)
}

impl GroupSpec {
    pub fn product(factors: Vec<GroupFactor>) -> Result<GroupSpec> {
        let mut order: u64 = 1;
        for f in &factors {
            order = order
                .checked_mul(f.size())
                .ok_or_else(|| Error::Parameter("group order overflows u64".into()))?;
        }
        Ok(GroupSpec { factors, order })
    }

    pub fn cyclic(n: u64) -> Result<GroupSpec> {
        make_group(&[n], None)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn factors(&self) -> &[GroupFactor] {
        &self.factors
    }

    pub fn zero(&self) -> GroupElement {
        let coords = self
            .factors
            .iter()
            .map(|f| match f {
                GroupFactor::Cyclic(_) => Coord::Z(0),
                GroupFactor::Field(fs) => Coord::F(fs.zero()),
            })
            .collect();
        GroupElement { coords }
    }

    pub fn contains(&self, e: &GroupElement) -> bool {
        e.coords.len() == self.factors.len()
            && e.coords.iter().zip(&self.factors).all(|(c, f)| match (c, f) {
                (Coord::Z(v), GroupFactor::Cyclic(n)) => v < n,
                (Coord::F(x), GroupFactor::Field(fs)) => fs.contains(x),
                _ => false,
            })
    }

    /// Rank of an element in lexicographic coordinate order.
    pub fn index_of(&self, e: &GroupElement) -> usize {
        let mut idx: u64 = 0;
        for (c, f) in e.coords.iter().zip(&self.factors) {
            let (r, size) = match (c, f) {
                (Coord::Z(v), GroupFactor::Cyclic(n)) => (*v, *n),
                (Coord::F(x), GroupFactor::Field(fs)) => (fs.rank(x), fs.order()),
                _ => panic!("element does not match group structure"),
            };
            idx = idx * size + r;
        }
        idx as usize
    }

    pub fn element_at(&self, idx: usize) -> GroupElement {
        let mut ranks = vec![0u64; self.factors.len()];
        let mut v = idx as u64;
        for (slot, f) in ranks.iter_mut().zip(&self.factors).rev() {
            *slot = v % f.size();
            v /= f.size();
        }
        let coords = ranks
            .into_iter()
            .zip(&self.factors)
            .map(|(r, f)| match f {
                GroupFactor::Cyclic(_) => Coord::Z(r),
                GroupFactor::Field(fs) => Coord::F(fs.element_at(r)),
            })
            .collect();
        GroupElement { coords }
    }

    /// All elements in lexicographic order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order as usize).map(|i| self.element_at(i))
    }

    /// Build an element from raw coordinates, validating each residue.
    pub fn element(&self, coords: Vec<Coord>) -> Result<GroupElement> {
        let e = GroupElement { coords };
        if self.contains(&e) {
            Ok(e)
        } else {
            Err(Error::NotInGroup(e.to_string()))
        }
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let coords = a
            .coords
            .iter()
            .zip(&b.coords)
            .zip(&self.factors)
            .map(|((x, y), f)| match (x, y, f) {
                (Coord::Z(u), Coord::Z(v), GroupFactor::Cyclic(n)) => Coord::Z((u + v) % n),
                (Coord::F(u), Coord::F(v), GroupFactor::Field(fs)) => Coord::F(fs.add(u, v)),
                _ => panic!("element does not match group structure"),
            })
            .collect();
        GroupElement { coords }
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        let coords = a
            .coords
            .iter()
            .zip(&self.factors)
            .map(|(x, f)| match (x, f) {
                (Coord::Z(u), GroupFactor::Cyclic(n)) => Coord::Z((n - u) % n),
                (Coord::F(u), GroupFactor::Field(fs)) => Coord::F(fs.neg(u)),
                _ => panic!("element does not match group structure"),
            })
            .collect();
        GroupElement { coords }
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.add(a, &self.neg(b))
    }

    /// Integer scalar multiple c·a (c may be negative).
    pub fn scalar_mul(&self, c: i64, a: &GroupElement) -> GroupElement {
        let coords = a
            .coords
            .iter()
            .zip(&self.factors)
            .map(|(x, f)| match (x, f) {
                (Coord::Z(u), GroupFactor::Cyclic(n)) => {
                    let m = c.rem_euclid(*n as i64) as u64;
                    Coord::Z(u * m % n)
                }
                (Coord::F(u), GroupFactor::Field(fs)) => {
                    let p = fs.characteristic();
                    let m = c.rem_euclid(p as i64) as u64;
                    Coord::F(FieldElement(
                        u.coeffs().iter().map(|&v| v * m % p).collect(),
                    ))
                }
                _ => panic!("element does not match group structure"),
            })
            .collect();
        GroupElement { coords }
    }

    /// Parse the canonical element syntax `(a,b,...)`, with field-factor
    /// coordinates written as coefficient tuples (or a bare residue for
    /// degree-1 fields).
    pub fn parse_element(&self, s: &str) -> Result<GroupElement> {
        let toks = split_tuple(s.trim())
            .ok_or_else(|| Error::Malformed(format!("bad element syntax: {s}")))?;
        if toks.len() != self.factors.len() {
            return Err(Error::Malformed(format!(
                "element {s} has {} coordinates, group has {} factors",
                toks.len(),
                self.factors.len()
            )));
        }
        let mut coords = Vec::with_capacity(toks.len());
        for (tok, f) in toks.iter().zip(&self.factors) {
            match f {
                GroupFactor::Cyclic(_) => {
                    let v: u64 = tok
                        .parse()
                        .map_err(|_| Error::Malformed(format!("bad residue: {tok}")))?;
                    coords.push(Coord::Z(v));
                }
                GroupFactor::Field(fs) => {
                    let cs: Vec<u64> = if tok.starts_with('(') {
                        split_tuple(tok)
                            .ok_or_else(|| Error::Malformed(format!("bad field tuple: {tok}")))?
                            .iter()
                            .map(|t| {
                                t.parse()
                                    .map_err(|_| Error::Malformed(format!("bad coefficient: {t}")))
                            })
                            .collect::<Result<_>>()?
                    } else {
                        vec![tok
                            .parse()
                            .map_err(|_| Error::Malformed(format!("bad residue: {tok}")))?]
                    };
                    if cs.len() != fs.degree() {
                        return Err(Error::Malformed(format!(
                            "field coordinate {tok} has {} coefficients, expected {}",
                            cs.len(),
                            fs.degree()
                        )));
                    }
                    coords.push(Coord::F(FieldElement(cs)));
                }
            }
        }
        self.element(coords)
    }
}

/// Split a top-level `(a,b,(c,d),...)` into its comma-separated tokens.
fn split_tuple(s: &str) -> Option<Vec<String>> {
    let inner = s.strip_prefix('(')?.strip_suffix(')')?;
    let mut toks = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for ch in inner.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth = depth.checked_sub(1)?;
                cur.push(ch);
            }
            ',' if depth == 0 => {
                toks.push(cur.trim().to_string());
                cur = String::new();
            }
            _ => cur.push(ch),
        }
    }
    if depth != 0 {
        return None;
    }
    if !cur.trim().is_empty() || !toks.is_empty() {
        toks.push(cur.trim().to_string());
    }
    Some(toks)
}

/// An ordered, duplicate-free subset of a group. Kept sorted so reports are
/// byte-stable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subset {
    group: GroupSpec,
    elems: Vec<GroupElement>,
}

impl Subset {
    pub fn new(group: GroupSpec, mut elems: Vec<GroupElement>) -> Result<Subset> {
        for e in &elems {
            if !group.contains(e) {
                return Err(Error::NotInGroup(e.to_string()));
            }
        }
        elems.sort();
        if elems.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Parameter("subset contains duplicate elements".into()));
        }
        Ok(Subset { group, elems })
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elems
    }

    pub fn contains(&self, e: &GroupElement) -> bool {
        self.elems.binary_search(e).is_ok()
    }

    pub fn translate(&self, g: &GroupElement) -> Subset {
        let mut elems: Vec<GroupElement> =
            self.elems.iter().map(|e| self.group.add(e, g)).collect();
        elems.sort();
        Subset {
            group: self.group.clone(),
            elems,
        }
    }

    /// Element indices (sorted), the fast handle used by designs and search.
    pub fn indices(&self) -> Vec<usize> {
        self.elems.iter().map(|e| self.group.index_of(e)).collect()
    }

    /// True if the subset is closed under addition and contains 0.
    pub fn is_subgroup(&self) -> bool {
        if !self.contains(&self.group.zero()) {
            return false;
        }
        for a in &self.elems {
            for b in &self.elems {
                if !self.contains(&self.group.add(a, b)) {
                    return false;
                }
            }
        }
        true
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elems.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// Multiset of group elements with nonnegative multiplicities, indexed
/// densely by element rank. Holds difference multisets of subsets and
/// families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferenceMultiset {
    group: GroupSpec,
    counts: Vec<u64>,
}

impl DifferenceMultiset {
    pub fn zero(group: GroupSpec) -> DifferenceMultiset {
        let n = group.order() as usize;
        DifferenceMultiset {
            group,
            counts: vec![0; n],
        }
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn count(&self, e: &GroupElement) -> u64 {
        self.counts[self.group.index_of(e)]
    }

    pub fn count_at(&self, idx: usize) -> u64 {
        self.counts[idx]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Nonzero entries in lexicographic element order.
    pub fn support(&self) -> impl Iterator<Item = (GroupElement, u64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (self.group.element_at(i), c))
    }

    fn add_assign(&mut self, other: &DifferenceMultiset) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }
}

/// The multiset of ordered differences x - y over x, y in S, diagonal pairs
/// included: the count at 0 is |S| and the total count is |S|^2.
pub fn delta_multiset(s: &Subset) -> Result<DifferenceMultiset> {
    if s.is_empty() {
        return Err(Error::Parameter("difference multiset of an empty subset".into()));
    }
    let group = s.group().clone();
    let mut counts = vec![0u64; group.order() as usize];
    for x in s.elements() {
        for y in s.elements() {
            let d = group.sub(x, y);
            counts[group.index_of(&d)] += 1;
        }
    }
    Ok(DifferenceMultiset { group, counts })
}

/// Pointwise sum of the per-block difference multisets of a family.
pub fn delta_family(family: &[Subset]) -> Result<DifferenceMultiset> {
    let first = family
        .first()
        .ok_or_else(|| Error::Parameter("difference multiset of an empty family".into()))?;
    let mut acc = DifferenceMultiset::zero(first.group().clone());
    for s in family {
        if s.group() != first.group() {
            return Err(Error::Parameter(
                "family blocks must all live in the same group".into(),
            ));
        }
        acc.add_assign(&delta_multiset(s)?);
    }
    Ok(acc)
}

/// The cyclic subgroup generated by one element.
pub fn cyclic_subgroup(group: &GroupSpec, generator: &GroupElement) -> Result<Subset> {
    if !group.contains(generator) {
        return Err(Error::NotInGroup(generator.to_string()));
    }
    let zero = group.zero();
    let mut elems = vec![zero.clone()];
    let mut cur = generator.clone();
    while cur != zero {
        elems.push(cur.clone());
        cur = group.add(&cur, generator);
    }
    Subset::new(group.clone(), elems)
}

/// The cosets of a subgroup, listed in order of their minimal representative.
pub fn cosets(group: &GroupSpec, subgroup: &Subset) -> Result<Vec<Subset>> {
    if subgroup.group() != group {
        return Err(Error::Parameter("subgroup belongs to a different group".into()));
    }
    if !subgroup.is_subgroup() {
        return Err(Error::Parameter(format!(
            "{subgroup} is not closed under addition"
        )));
    }
    let n = group.order() as usize;
    let mut covered = vec![false; n];
    let mut out = Vec::new();
    for idx in 0..n {
        if covered[idx] {
            continue;
        }
        let rep = group.element_at(idx);
        let coset = subgroup.translate(&rep);
        for e in coset.elements() {
            covered[group.index_of(e)] = true;
        }
        out.push(coset);
    }
    Ok(out)
}
