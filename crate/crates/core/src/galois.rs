//! Finite fields F_{p^d}, primitive elements and discrete logs, cyclotomic
//! classes and cyclotomic numbers, and the group-ring identity check.
//!
//! Everything here is exact and deterministic: the modulus polynomial is the
//! lexicographically least monic irreducible of its degree (coefficients
//! compared low-degree-first), the primitive element is the least element in
//! coefficient lex order of full multiplicative order, and class listings are
//! sorted. Two builds of the same field are identical, so every downstream
//! report is byte-stable.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Element of F_{p^d}: a coefficient tuple of length d over Z_p,
/// low-degree-first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(pub Vec<u64>);

impl FieldElement {
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for FieldElement {
    /// Degree-1 elements print as plain residues; larger degrees print the
    /// full coefficient tuple, e.g. `(1,2)` for 1 + 2x.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            write!(f, "{}", self.0[0])
        } else {
            write!(f, "(")?;
            for (i, c) in self.0.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{c}")?;
            }
            write!(f, ")")
        }
    }
}

/// A fully built finite field F_{p^d} with precomputed exp/log tables.
#[derive(Debug)]
pub struct FieldSpec {
    p: u64,
    d: usize,
    order: u64,
    /// Monic irreducible modulus, low-degree-first, length d+1.
    modulus: Vec<u64>,
    primitive: FieldElement,
    /// exp[k] = primitive^k for k in 0..order-1.
    exp: Vec<FieldElement>,
    /// Discrete log by element rank; None at zero.
    log: Vec<Option<u64>>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.d == other.d && self.modulus == other.modulus
    }
}
impl Eq for FieldSpec {}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// Decompose a prime power q = p^d; None if q is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, usize)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q.is_multiple_of(p) {
            let mut rest = q;
            let mut d = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                d += 1;
            }
            return if rest == 1 { Some((p, d)) } else { None };
        }
        p += 1;
    }
    Some((q, 1))
}

// --- polynomial helpers over Z_p, low-degree-first coefficient vectors ---

fn poly_trim(a: &mut Vec<u64>) {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
}

#[allow(clippy::needless_range_loop)]
fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r: Vec<u64> = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = mod_inv(b[db], p);
    while r.len() > db {
        let dr = r.len() - 1;
        let factor = r[dr] * lead_inv % p;
        if factor != 0 {
            for i in 0..=db {
                let idx = dr - db + i;
                r[idx] = (r[idx] + p - factor * b[i] % p) % p;
            }
        }
        r.pop();
        poly_trim(&mut r);
    }
    r
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // p is prime, a != 0: Fermat.
    mod_pow(a % p, p - 2, p)
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

fn poly_is_zero(a: &[u64]) -> bool {
    a.iter().all(|&c| c == 0)
}

/// Trial division by every monic polynomial of degree 1..=deg/2.
fn poly_irreducible(poly: &[u64], p: u64) -> bool {
    let deg = poly.len() - 1;
    for div_deg in 1..=deg / 2 {
        for n in 0..p.pow(div_deg as u32) {
            let mut divisor = vec![0u64; div_deg + 1];
            let mut v = n;
            for c in divisor.iter_mut().take(div_deg) {
                *c = v % p;
                v /= p;
            }
            divisor[div_deg] = 1;
            if poly_is_zero(&poly_rem(poly, &divisor, p)) {
                return false;
            }
        }
    }
    true
}

/// Build F_{p^d} deterministically.
///
/// The modulus is the lexicographically least monic irreducible of degree d
/// over Z_p (coefficients compared low-degree-first) and the primitive
/// element is the least element, in coefficient lex order, of multiplicative
/// order p^d - 1.
pub fn build_field(p: u64, d: usize) -> Result<Arc<FieldSpec>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if d < 1 {
        return Err(Error::Parameter("field degree must be >= 1".into()));
    }
    let order = p.checked_pow(d as u32).ok_or_else(|| {
        Error::Parameter(format!("field order p^d overflows: p={p}, d={d}"))
    })?;

    let modulus = if d == 1 {
        vec![0, 1] // x itself; arithmetic is plain mod p
    } else {
        find_least_irreducible(p, d)
    };

    let mut field = FieldSpec {
        p,
        d,
        order,
        modulus,
        primitive: FieldElement(vec![0; d]),
        exp: Vec::new(),
        log: Vec::new(),
    };

    let primitive = find_least_primitive(&field)?;
    let mut exp = Vec::with_capacity((order - 1) as usize);
    let mut log = vec![None; order as usize];
    let mut cur = field.one();
    for k in 0..order - 1 {
        exp.push(cur.clone());
        log[field.rank(&cur) as usize] = Some(k);
        cur = field.mul(&cur, &primitive);
    }
    field.primitive = primitive;
    field.exp = exp;
    field.log = log;
    Ok(Arc::new(field))
}

fn find_least_irreducible(p: u64, d: usize) -> Vec<u64> {
    // lex order over (c_0, ..., c_{d-1}), c_0 most significant
    let total = p.pow(d as u32);
    for n in 0..total {
        let mut coeffs = vec![0u64; d];
        let mut v = n;
        for i in (0..d).rev() {
            coeffs[i] = v % p;
            v /= p;
        }
        let mut poly = coeffs.clone();
        poly.push(1);
        if poly_irreducible(&poly, p) {
            return poly;
        }
    }
    unreachable!("an irreducible of every degree exists over Z_p")
}

fn find_least_primitive(field: &FieldSpec) -> Result<FieldElement> {
    let q = field.order;
    for rank in 1..q {
        let cand = field.element_at(rank);
        if field.multiplicative_order(&cand) == q - 1 {
            return Ok(cand);
        }
    }
    Err(Error::Parameter(format!(
        "no primitive element found in field of order {q}"
    )))
}

impl FieldSpec {
    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn primitive_element(&self) -> &FieldElement {
        &self.primitive
    }

    /// Human-readable modulus, high degree first, e.g. `x^2 + 1`.
    pub fn modulus_string(&self) -> String {
        if self.d == 1 {
            return format!("x (prime field Z_{})", self.p);
        }
        let mut terms = Vec::new();
        for (i, &c) in self.modulus.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let t = match (i, c) {
                (0, c) => format!("{c}"),
                (1, 1) => "x".to_string(),
                (1, c) => format!("{c}x"),
                (i, 1) => format!("x^{i}"),
                (i, c) => format!("{c}x^{i}"),
            };
            terms.push(t);
        }
        terms.join(" + ")
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(vec![0; self.d])
    }

    pub fn one(&self) -> FieldElement {
        let mut c = vec![0; self.d];
        c[0] = 1;
        FieldElement(c)
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        x.0.len() == self.d && x.0.iter().all(|&c| c < self.p)
    }

    /// Rank of an element in coefficient lex order (c_0 most significant);
    /// ranks enumerate the field 0..order.
    pub fn rank(&self, x: &FieldElement) -> u64 {
        x.0.iter().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn element_at(&self, rank: u64) -> FieldElement {
        let mut coeffs = vec![0u64; self.d];
        let mut v = rank;
        for i in (0..self.d).rev() {
            coeffs[i] = v % self.p;
            v /= self.p;
        }
        FieldElement(coeffs)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order).map(|r| self.element_at(r))
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| (x + y) % self.p)
                .collect(),
        )
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        FieldElement(a.0.iter().map(|&x| (self.p - x) % self.p).collect())
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let mut prod = vec![0u64; 2 * self.d - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        // reduce modulo the monic modulus
        for i in (self.d..prod.len()).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for (j, &m) in self.modulus.iter().enumerate().take(self.d) {
                let idx = i - self.d + j;
                prod[idx] = (prod[idx] + self.p - c * m % self.p) % self.p;
            }
        }
        prod.truncate(self.d);
        FieldElement(prod)
    }

    pub fn pow(&self, a: &FieldElement, mut e: u64) -> FieldElement {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn multiplicative_order(&self, a: &FieldElement) -> u64 {
        if a.is_zero() {
            return 0;
        }
        let one = self.one();
        let mut cur = a.clone();
        let mut ord = 1;
        while cur != one {
            cur = self.mul(&cur, a);
            ord += 1;
            if ord > self.order {
                unreachable!("multiplicative order exceeded group order");
            }
        }
        ord
    }

    /// Discrete log with respect to the canonical primitive element.
    pub fn log(&self, a: &FieldElement) -> Option<u64> {
        self.log[self.rank(a) as usize]
    }

    pub fn exp(&self, k: u64) -> &FieldElement {
        &self.exp[(k % (self.order - 1)) as usize]
    }
}

/// Cyclotomic classes of order e together with all e^2 cyclotomic numbers
/// (i,j) = |C_i ∩ (C_j + 1)|, computed by direct intersection counting.
#[derive(Debug)]
pub struct CyclotomicTable {
    field: Arc<FieldSpec>,
    e: u64,
    class_size: u64,
    classes: Vec<Vec<FieldElement>>,
    numbers: Vec<Vec<u64>>,
    class_of: Vec<Option<usize>>, // by rank; None at zero
}

pub fn cyclotomic_classes(field: &Arc<FieldSpec>, e: u64) -> Result<CyclotomicTable> {
    let q = field.order();
    if e == 0 || !(q - 1).is_multiple_of(e) {
        return Err(Error::Parameter(format!(
            "class order must divide the multiplicative group order: e={e}, q-1={}",
            q - 1
        )));
    }
    let class_size = (q - 1) / e;
    let mut classes: Vec<Vec<FieldElement>> = vec![Vec::new(); e as usize];
    let mut class_of: Vec<Option<usize>> = vec![None; q as usize];
    for x in field.elements() {
        if let Some(l) = field.log(&x) {
            let i = (l % e) as usize;
            class_of[field.rank(&x) as usize] = Some(i);
            classes[i].push(x);
        }
    }
    for c in &mut classes {
        c.sort();
    }
    let mut numbers = vec![vec![0u64; e as usize]; e as usize];
    for (j, class) in classes.iter().enumerate() {
        let one = field.one();
        for x in class {
            let y = field.add(x, &one);
            if let Some(i) = class_of[field.rank(&y) as usize] {
                numbers[i][j] += 1;
            }
        }
    }
    Ok(CyclotomicTable {
        field: Arc::clone(field),
        e,
        class_size,
        classes,
        numbers,
        class_of,
    })
}

impl CyclotomicTable {
    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn order(&self) -> u64 {
        self.e
    }

    pub fn class_size(&self) -> u64 {
        self.class_size
    }

    pub fn class(&self, i: usize) -> &[FieldElement] {
        &self.classes[i]
    }

    pub fn class_index(&self, x: &FieldElement) -> Option<usize> {
        self.class_of[self.field.rank(x) as usize]
    }

    /// The set C_j ∪ {0}; for classes of order p+1 over F_{p^2} these are the
    /// additive subgroups of order p (the lines through the origin).
    pub fn class_with_zero(&self, j: usize) -> Vec<FieldElement> {
        let mut s = self.classes[j].clone();
        s.push(self.field.zero());
        s.sort();
        s
    }

    pub fn number(&self, i: usize, j: usize) -> Result<u64> {
        if i >= self.e as usize || j >= self.e as usize {
            return Err(Error::Parameter(format!(
                "cyclotomic number index out of range: ({i},{j}) with e={}",
                self.e
            )));
        }
        Ok(self.numbers[i][j])
    }
}

/// Outcome of expanding one group-ring product against its closed form.
#[derive(Debug, Clone)]
pub struct GroupRingCheck {
    pub i: usize,
    pub j: usize,
    /// Multiplicity attached to the identity element by the closed form.
    pub a_ij: u64,
    pub holds: bool,
    /// First element where the two sides differ: (element, direct, closed form).
    pub first_discrepancy: Option<(FieldElement, u64, u64)>,
}

/// Expand C_i · (-C_j) by direct convolution of differences and compare with
/// a_ij·1 + Σ_k (j-i, k-i)·C_k, where a_ij is the class size when the class
/// size is even and j = i, or when it is odd and j = i + e/2 (e even), and 0
/// otherwise.
pub fn verify_group_ring_identity(table: &CyclotomicTable, i: usize, j: usize) -> GroupRingCheck {
    let field = &table.field;
    let q = field.order() as usize;
    let e = table.e as usize;
    let f = table.class_size;

    let mut direct = vec![0u64; q];
    for x in table.class(i) {
        for y in table.class(j) {
            let z = field.sub(x, y);
            direct[field.rank(&z) as usize] += 1;
        }
    }

    let mut closed = vec![0u64; q];
    #[allow(clippy::if_same_then_else)]
    let a_ij = if f.is_multiple_of(2) && j == i {
        f
    } else if f % 2 == 1 && table.e.is_multiple_of(2) && j == (i + e / 2) % e {
        f
    } else {
        0
    };
    closed[field.rank(&field.zero()) as usize] = a_ij;
    for k in 0..e {
        let row = (j + e - i) % e;
        let col = (k + e - i) % e;
        let coeff = table.numbers[row][col];
        if coeff == 0 {
            continue;
        }
        for z in table.class(k) {
            closed[field.rank(z) as usize] += coeff;
        }
    }

    let mut first = None;
    for r in 0..q {
        if direct[r] != closed[r] {
            first = Some((field.element_at(r as u64), direct[r], closed[r]));
            break;
        }
    }
    GroupRingCheck {
        i,
        j,
        a_ij,
        holds: first.is_none(),
        first_discrepancy: first,
    }
}

/// For classes of order p+1 over F_{p^2} and S_j = C_j ∪ {0}, return the
/// vector |(x - S_j) ∩ C_i| over all i. For x outside S_j every coordinate
/// i ≠ j equals 1.
pub fn intersection_property_check(
    field: &Arc<FieldSpec>,
    j: usize,
    x: &FieldElement,
) -> Result<Vec<u64>> {
    if field.degree() != 2 {
        return Err(Error::Parameter(
            "intersection property is stated over F_{p^2}".into(),
        ));
    }
    let p = field.characteristic();
    let table = cyclotomic_classes(field, p + 1)?;
    if j > p as usize {
        return Err(Error::Parameter(format!(
            "class index out of range: j={j}, classes 0..={p}"
        )));
    }
    let s_j = table.class_with_zero(j);
    if s_j.contains(x) {
        return Err(Error::Parameter(format!(
            "x must lie outside S_j = C_j ∪ {{0}}; got x = {x} in S_{j}"
        )));
    }
    let mut counts = vec![0u64; (p + 1) as usize];
    for s in &s_j {
        let diff = field.sub(x, s);
        if let Some(i) = table.class_index(&diff) {
            counts[i] += 1;
        }
    }
    Ok(counts)
}
