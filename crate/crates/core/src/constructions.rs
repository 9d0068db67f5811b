//! The construction catalog: builders for every difference set and
//! difference family in the workbench, each paired with the parameter tuple
//! it claims.
//!
//! Claimed tuples are recorded verbatim as `(tuple_first, tuple_second)`
//! with no assumption about which entry is the in-set value; the verifier
//! compares them against computed profiles and reports orientation
//! separately. Constructions never self-certify.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::galois::{build_field, cyclotomic_classes, FieldElement, FieldSpec};
use crate::group::{make_group, Coord, GroupElement, GroupFactor, GroupSpec, Subset};
use crate::group::cyclic_subgroup;

/// The parameter tuple a construction claims for itself, stored exactly as
/// the catalog prints it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimedProfile {
    pub v: u64,
    pub k: u64,
    /// Claimed number of blocks (1 for difference sets).
    pub n: u64,
    pub tuple_first: u64,
    pub tuple_second: u64,
    pub source: String,
}

/// Construction id and the parameters that produced a family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub id: String,
    pub params: BTreeMap<String, String>,
}

/// A family of blocks together with its claimed profile and provenance.
#[derive(Debug, Clone)]
pub struct ConstructedFamily {
    pub group: GroupSpec,
    pub blocks: Vec<Subset>,
    pub claimed: ClaimedProfile,
    pub provenance: Provenance,
    /// Anomalies the builder noticed (duplicate blocks, block-count
    /// disagreements) without refusing to construct.
    pub flags: Vec<String>,
}

impl ConstructedFamily {
    pub fn block_size(&self) -> usize {
        self.blocks.first().map_or(0, |b| b.len())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    A,
    B,
}

impl std::str::FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Variant> {
        match s {
            "A" | "a" => Ok(Variant::A),
            "B" | "b" => Ok(Variant::B),
            _ => Err(Error::Parameter(format!("variant must be A or B, got {s}"))),
        }
    }
}

/// Which product shape a theta family is built over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ThetaBase {
    /// Blocks Σ0 × S_i ∪ Σ1 × S_j inside Z_m × F_{p^2}, m even.
    Sigma { m: u64 },
    /// Blocks {0,3} × S_i ∪ {1,4} × S_j inside Z_6 × F_{p^2}.
    Z6,
}

/// Pairing pattern over the index set I.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ThetaPattern {
    /// A perfect matching of I into κ ordered pairs. `None` pairs up
    /// consecutive members of sorted I.
    Theta0(Option<Vec<(usize, usize)>>),
    /// The cyclic chain (i_2κ, i_1), (i_1, i_2), ..., (i_2κ-1, i_2κ): 2κ
    /// ordered pairs.
    Theta1,
}

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

fn require_odd_prime(p: u64, constraint: &str) -> Result<()> {
    if !is_prime(p) || p == 2 {
        return Err(Error::Parameter(format!("{constraint}: got p = {p}")));
    }
    Ok(())
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The sets S_i = C_i ∪ {0} for the order-(p+1) cyclotomic classes of
/// F_{p^2}: the additive lines through the origin.
fn lines(p: u64) -> Result<(Arc<FieldSpec>, Vec<Vec<FieldElement>>)> {
    let field = build_field(p, 2)?;
    let table = cyclotomic_classes(&field, p + 1)?;
    let lines = (0..=p as usize).map(|i| table.class_with_zero(i)).collect();
    Ok((field, lines))
}

fn pair_block(
    group: &GroupSpec,
    left: &[u64],
    right: &[u64],
    s_left: &[FieldElement],
    s_right: &[FieldElement],
) -> Result<Subset> {
    let mut elems = Vec::with_capacity(left.len() * s_left.len() + right.len() * s_right.len());
    for &h in left {
        for z in s_left {
            elems.push(group.element(vec![Coord::Z(h), Coord::F(z.clone())])?);
        }
    }
    for &h in right {
        for z in s_right {
            elems.push(group.element(vec![Coord::Z(h), Coord::F(z.clone())])?);
        }
    }
    Subset::new(group.clone(), elems)
}

fn sigma_halves(m: u64) -> (Vec<u64>, Vec<u64>) {
    let evens: Vec<u64> = (0..m).step_by(2).collect();
    let odds: Vec<u64> = (1..m).step_by(2).collect();
    (evens, odds)
}

fn params_map(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn check_index_pair(p: u64, i: usize, j: usize) -> Result<()> {
    if i > p as usize || j > p as usize {
        return Err(Error::Parameter(format!(
            "class indices must lie in 0..={p}: got ({i},{j})"
        )));
    }
    if i == j {
        return Err(Error::Parameter(format!(
            "class indices must differ: got ({i},{j})"
        )));
    }
    Ok(())
}

/// Single block Σ0 × S_i' ∪ Σ1 × S_j' in Z_m × F_{p^2}; claims
/// ((m/2)^2 p(p+3), (3/4)m^2 p).
pub fn sigma_product_set(m: u64, p: u64, i: usize, j: usize) -> Result<ConstructedFamily> {
    if m == 0 || !m.is_multiple_of(2) {
        return Err(Error::Parameter(format!(
            "m even, p an odd prime: got m = {m}"
        )));
    }
    require_odd_prime(p, "m even, p an odd prime")?;
    check_index_pair(p, i, j)?;

    let (field, s) = lines(p)?;
    let group = make_group(&[m], Some(field))?;
    let (evens, odds) = sigma_halves(m);
    let block = pair_block(&group, &evens, &odds, &s[i], &s[j])?;
    assert_eq!(block.len() as u64, m * p);

    let claimed = ClaimedProfile {
        v: m * p * p,
        k: m * p,
        n: 1,
        tuple_first: (m / 2) * (m / 2) * p * (p + 3),
        tuple_second: 3 * m * m * p / 4,
        source: "th30: ((m/2)^2 p(p+3), (3/4)m^2 p)".into(),
    };
    Ok(ConstructedFamily {
        group,
        blocks: vec![block],
        claimed,
        provenance: Provenance {
            id: "th30".into(),
            params: params_map(&[
                ("m", m.to_string()),
                ("p", p.to_string()),
                ("i", i.to_string()),
                ("j", j.to_string()),
            ]),
        },
        flags: Vec::new(),
    })
}

/// Single block {0,3} × S_i' ∪ {1,4} × S_j' in Z_6 × F_{p^2}; claims
/// (20p, 8p). Distinct from the Σ-shape with m = 6, whose block has size 6p.
pub fn z6_product_set(p: u64, i: usize, j: usize) -> Result<ConstructedFamily> {
    require_odd_prime(p, "p an odd prime")?;
    check_index_pair(p, i, j)?;

    let (field, s) = lines(p)?;
    let group = make_group(&[6], Some(field))?;
    let block = pair_block(&group, &[0, 3], &[1, 4], &s[i], &s[j])?;
    assert_eq!(block.len() as u64, 4 * p);

    let claimed = ClaimedProfile {
        v: 6 * p * p,
        k: 4 * p,
        n: 1,
        tuple_first: 20 * p,
        tuple_second: 8 * p,
        source: "th31: (20p, 8p)".into(),
    };
    Ok(ConstructedFamily {
        group,
        blocks: vec![block],
        claimed,
        provenance: Provenance {
            id: "th31".into(),
            params: params_map(&[
                ("p", p.to_string()),
                ("i", i.to_string()),
                ("j", j.to_string()),
            ]),
        },
        flags: Vec::new(),
    })
}

/// A power function x^s on F_{p^m} together with its preimage classes, used
/// as the graph-of-a-function difference set.
#[derive(Debug, Clone)]
pub struct PlanarFunction {
    pub field: Arc<FieldSpec>,
    pub exponent: u64,
}

impl PlanarFunction {
    pub fn evaluate(&self, x: &FieldElement) -> FieldElement {
        self.field.pow(x, self.exponent)
    }

    /// The preimage class C_b = {x : x^s = b}.
    pub fn preimage(&self, b: &FieldElement) -> Vec<FieldElement> {
        self.field
            .elements()
            .filter(|x| &self.evaluate(x) == b)
            .collect()
    }

    /// Certify perfect nonlinearity: for every a ≠ 0 the difference map
    /// x ↦ f(x+a) - f(x) must be a bijection. Returns the witnessing (a, b)
    /// pair hit twice when the certificate fails.
    pub fn certify_perfect_nonlinearity(&self) -> std::result::Result<(), (FieldElement, FieldElement)> {
        let q = self.field.order() as usize;
        for a in self.field.elements() {
            if a.is_zero() {
                continue;
            }
            let mut seen = vec![false; q];
            for x in self.field.elements() {
                let d = self
                    .field
                    .sub(&self.evaluate(&self.field.add(&x, &a)), &self.evaluate(&x));
                let r = self.field.rank(&d) as usize;
                if seen[r] {
                    return Err((a, d));
                }
                seen[r] = true;
            }
        }
        Ok(())
    }
}

fn planar_exponent_in_menu(p: u64, m: u64, s: u64) -> bool {
    if s == 2 {
        return true;
    }
    // s = p^k + 1 with m/gcd(m,k) odd
    let mut pk = p;
    let mut k = 1u64;
    while pk < s {
        if pk + 1 == s && (m / gcd(m, k)) % 2 == 1 {
            return true;
        }
        match pk.checked_mul(p) {
            Some(next) => pk = next,
            None => break,
        }
        k += 1;
    }
    // s = (3^k + 1)/2 with p = 3, k odd, gcd(m,k) = 1
    if p == 3 {
        let mut t = 3u64;
        let mut k = 1u64;
        while t.div_ceil(2) <= s {
            if t.div_ceil(2) == s && k % 2 == 1 && gcd(m, k) == 1 {
                return true;
            }
            match t.checked_mul(3) {
                Some(next) => t = next,
                None => break,
            }
            k += 1;
        }
    }
    false
}

/// The graph {(f(x), x)} of a certified planar power function, a single
/// block of size n = p^m in F_{p^m} × F_{p^m}; claims (2n-1, n-1).
pub fn planar_set(p: u64, m_exp: u32, s: u64) -> Result<ConstructedFamily> {
    require_odd_prime(p, "p an odd prime")?;
    if m_exp < 1 {
        return Err(Error::Parameter("exponent degree m must be >= 1".into()));
    }
    if !planar_exponent_in_menu(p, m_exp as u64, s) {
        return Err(Error::Parameter(format!(
            "s must be 2, p^k+1 with m/gcd(m,k) odd, or (3^k+1)/2 with p=3, k odd, gcd(m,k)=1: got s = {s}"
        )));
    }

    let field = build_field(p, m_exp as usize)?;
    let f = PlanarFunction {
        field: Arc::clone(&field),
        exponent: s,
    };
    if let Err((a, b)) = f.certify_perfect_nonlinearity() {
        return Err(Error::Parameter(format!(
            "perfect-nonlinearity certificate failed at shift a = {a}, repeated difference b = {b}"
        )));
    }

    let group = GroupSpec::product(vec![
        GroupFactor::Field(Arc::clone(&field)),
        GroupFactor::Field(Arc::clone(&field)),
    ])?;
    let mut elems = Vec::with_capacity(field.order() as usize);
    for x in field.elements() {
        let fx = f.evaluate(&x);
        elems.push(group.element(vec![Coord::F(fx), Coord::F(x)])?);
    }
    let block = Subset::new(group.clone(), elems)?;
    let n = field.order();
    assert_eq!(block.len() as u64, n);

    let claimed = ClaimedProfile {
        v: n * n,
        k: n,
        n: 1,
        tuple_first: 2 * n - 1,
        tuple_second: n - 1,
        source: "th32: (2n-1, n-1)".into(),
    };
    Ok(ConstructedFamily {
        group,
        blocks: vec![block],
        claimed,
        provenance: Provenance {
            id: "th32".into(),
            params: params_map(&[
                ("p", p.to_string()),
                ("m", m_exp.to_string()),
                ("s", s.to_string()),
            ]),
        },
        flags: Vec::new(),
    })
}

/// Single block of size 4l in Z_2 × Z_4l built from the cosets of H = <4>;
/// claims (6l^2, 10l^2). Variant B swaps which Z_2 level carries which coset
/// pair.
pub fn mod4_pair_set(l: u64, variant: Variant) -> Result<ConstructedFamily> {
    if l < 1 {
        return Err(Error::Parameter(format!(
            "n = 4l for positive integer l: got l = {l}"
        )));
    }
    let n = 4 * l;
    let group = make_group(&[2, n], None)?;
    let zn = GroupSpec::cyclic(n)?;
    let h = cyclic_subgroup(&zn, &zn.element(vec![Coord::Z(4 % n)])?)?;
    assert_eq!(h.len() as u64, l);
    let coset = |i: u64| -> Vec<u64> {
        h.elements()
            .iter()
            .map(|e| match e.coords()[0] {
                Coord::Z(v) => (v + i) % n,
                _ => unreachable!(),
            })
            .collect()
    };
    let mut low: Vec<u64> = coset(0);
    low.extend(coset(1));
    let mut high: Vec<u64> = coset(0);
    high.extend(coset(3));
    let (low_level, high_level) = match variant {
        Variant::A => (0u64, 1u64),
        Variant::B => (1u64, 0u64),
    };
    let mut elems = Vec::with_capacity((4 * l) as usize);
    for &x in &low {
        elems.push(group.element(vec![Coord::Z(low_level), Coord::Z(x)])?);
    }
    for &x in &high {
        elems.push(group.element(vec![Coord::Z(high_level), Coord::Z(x)])?);
    }
    let block = Subset::new(group.clone(), elems)?;
    assert_eq!(block.len() as u64, 4 * l);

    let claimed = ClaimedProfile {
        v: 8 * l,
        k: 4 * l,
        n: 1,
        tuple_first: 6 * l * l,
        tuple_second: 10 * l * l,
        source: "th33: (6l^2, 10l^2)".into(),
    };
    Ok(ConstructedFamily {
        group,
        blocks: vec![block],
        claimed,
        provenance: Provenance {
            id: "th33".into(),
            params: params_map(&[
                ("l", l.to_string()),
                ("variant", format!("{variant:?}")),
            ]),
        },
        flags: Vec::new(),
    })
}

/// The family S_l = (pl-1)·{0,...,p^(u-1)-1} mod p^u for l = 1..p^(u-1);
/// claims ((p^(u-1)-1) p^(u-1) p^(u-2), p^u + (p^(u-1)-1) p^(u-1) p^(u-2)).
pub fn multiplier_family(p: u64, u: u32) -> Result<ConstructedFamily> {
    require_odd_prime(p, "p an odd prime, u >= 2 an integer")?;
    if u < 2 {
        return Err(Error::Parameter(format!(
            "p an odd prime, u >= 2 an integer: got u = {u}"
        )));
    }
    let n = p.pow(u);
    let k = p.pow(u - 1);
    let group = GroupSpec::cyclic(n)?;
    let base: Vec<u64> = (0..k).collect();
    let mut blocks = Vec::with_capacity(k as usize);
    for l in 1..=k {
        let mult = (p as u128 * l as u128 - 1) % n as u128;
        let elems: Vec<GroupElement> = base
            .iter()
            .map(|&s| {
                let v = (mult * s as u128 % n as u128) as u64;
                group.element(vec![Coord::Z(v)])
            })
            .collect::<Result<_>>()?;
        blocks.push(Subset::new(group.clone(), elems)?);
    }
    let mut flags = Vec::new();
    let mut sorted = blocks.clone();
    sorted.sort_by(|a, b| a.elements().cmp(b.elements()));
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        flags.push("duplicate blocks: family is not a collection of distinct k-subsets".into());
    }

    let beta = (k - 1) * k * p.pow(u - 2);
    let claimed = ClaimedProfile {
        v: n,
        k,
        n: k,
        tuple_first: beta,
        tuple_second: n + beta,
        source: "th41: ((p^(u-1)-1) p^(u-1) p^(u-2), p^u + (p^(u-1)-1) p^(u-1) p^(u-2))".into(),
    };
    Ok(ConstructedFamily {
        group,
        blocks,
        claimed,
        provenance: Provenance {
            id: "th41".into(),
            params: params_map(&[("p", p.to_string()), ("u", u.to_string())]),
        },
        flags,
    })
}

fn validate_index_set(p: u64, set: &[usize]) -> Result<Vec<usize>> {
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != set.len() {
        return Err(Error::Parameter("index set I contains repeats".into()));
    }
    if sorted.is_empty() || !sorted.len().is_multiple_of(2) {
        return Err(Error::Parameter(format!(
            "|I| = 2κ for a positive integer κ: got |I| = {}",
            set.len()
        )));
    }
    if let Some(&max) = sorted.last() {
        if max > p as usize {
            return Err(Error::Parameter(format!(
                "I ⊆ {{0,...,{p}}}: got index {max}"
            )));
        }
    }
    Ok(sorted)
}

fn theta_pairs(sorted: &[usize], pattern: &ThetaPattern) -> Result<Vec<(usize, usize)>> {
    match pattern {
        ThetaPattern::Theta0(None) => Ok(sorted.chunks(2).map(|c| (c[0], c[1])).collect()),
        ThetaPattern::Theta0(Some(pairs)) => {
            if pairs.len() * 2 != sorted.len() {
                return Err(Error::Parameter(format!(
                    "a perfect matching of I needs {} pairs, got {}",
                    sorted.len() / 2,
                    pairs.len()
                )));
            }
            let mut seen = Vec::new();
            for &(i, j) in pairs {
                if i == j {
                    return Err(Error::Parameter(format!("pair ({i},{j}) repeats an index")));
                }
                for x in [i, j] {
                    if !sorted.contains(&x) {
                        return Err(Error::Parameter(format!("pair index {x} is outside I")));
                    }
                    if seen.contains(&x) {
                        return Err(Error::Parameter(format!(
                            "index {x} appears in more than one ordered pair"
                        )));
                    }
                    seen.push(x);
                }
            }
            Ok(pairs.clone())
        }
        ThetaPattern::Theta1 => {
            let n = sorted.len();
            let mut pairs = Vec::with_capacity(n);
            pairs.push((sorted[n - 1], sorted[0]));
            for w in sorted.windows(2) {
                pairs.push((w[0], w[1]));
            }
            Ok(pairs)
        }
    }
}

type BlockBuilder = Box<dyn Fn(usize, usize) -> Result<Subset>>;

/// Family with one Σ- or Z6-shaped block per ordered pair of the chosen
/// pattern over I.
pub fn theta_family(
    base: &ThetaBase,
    p: u64,
    set: &[usize],
    pattern: &ThetaPattern,
) -> Result<ConstructedFamily> {
    require_odd_prime(p, "p an odd prime")?;
    let sorted = validate_index_set(p, set)?;
    let kappa = (sorted.len() / 2) as u64;
    let pairs = theta_pairs(&sorted, pattern)?;

    let (field, s) = lines(p)?;
    let (group, build): (GroupSpec, BlockBuilder) = match base {
        ThetaBase::Sigma { m } => {
            if *m == 0 || m % 2 != 0 {
                return Err(Error::Parameter(format!("m even: got m = {m}")));
            }
            let group = make_group(&[*m], Some(field))?;
            let (evens, odds) = sigma_halves(*m);
            let g2 = group.clone();
            let s2 = s.clone();
            (
                group,
                Box::new(move |i, j| pair_block(&g2, &evens, &odds, &s2[i], &s2[j])),
            )
        }
        ThetaBase::Z6 => {
            let group = make_group(&[6], Some(field))?;
            let g2 = group.clone();
            let s2 = s.clone();
            (
                group,
                Box::new(move |i, j| pair_block(&g2, &[0, 3], &[1, 4], &s2[i], &s2[j])),
            )
        }
    };

    let mut blocks = Vec::with_capacity(pairs.len());
    for &(i, j) in &pairs {
        blocks.push(build(i, j)?);
    }
    let mut flags = Vec::new();
    let mut check = blocks.clone();
    check.sort_by(|a, b| a.elements().cmp(b.elements()));
    if check.windows(2).any(|w| w[0] == w[1]) {
        flags.push("duplicate blocks produced by the pattern".into());
    }

    let chain = matches!(pattern, ThetaPattern::Theta1);
    let (id, claimed) = match (base, chain) {
        (ThetaBase::Sigma { m }, false) => {
            let alpha1 = (m / 2) * (m / 2) * p * (p + 3);
            let beta1 = 3 * m * m * p / 4;
            (
                "th40",
                ClaimedProfile {
                    v: m * p * p,
                    k: m * p,
                    n: kappa,
                    tuple_first: alpha1 + (kappa - 1) * beta1,
                    tuple_second: kappa * beta1,
                    source: "th40: ((m/2)^2 p(p+3) + (κ-1)(3/4)m^2 p, κ(3/4)m^2 p)".into(),
                },
            )
        }
        (ThetaBase::Sigma { m }, true) => {
            let alpha1 = (m / 2) * (m / 2) * p * (p + 3);
            let beta1 = 3 * m * m * p / 4;
            flags.push(format!(
                "printed family size κ = {kappa} but the chain pattern yields {} blocks",
                2 * kappa
            ));
            (
                "cor40",
                ClaimedProfile {
                    v: m * p * p,
                    k: m * p,
                    n: kappa,
                    tuple_first: alpha1 + (2 * kappa - 1) * beta1,
                    tuple_second: kappa * 3 * m * m * p / 2,
                    source: "cor40: ((m/2)^2 p(p+3) + (2κ-1)(3/4)m^2 p, κ(3/2)m^2 p)".into(),
                },
            )
        }
        (ThetaBase::Z6, false) => (
            "cor41",
            ClaimedProfile {
                v: 6 * p * p,
                k: 4 * p,
                n: kappa,
                tuple_first: 20 * p + 8 * (kappa - 1) * p,
                tuple_second: 8 * kappa * p,
                source: "cor41: (20p + 8(κ-1)p, 8κp)".into(),
            },
        ),
        (ThetaBase::Z6, true) => (
            "cor41",
            ClaimedProfile {
                v: 6 * p * p,
                k: 4 * p,
                n: 2 * kappa,
                tuple_first: 20 * p + 8 * (2 * kappa - 1) * p,
                tuple_second: 16 * kappa * p,
                source: "cor41: (20p + 8(2κ-1)p, 16κp)".into(),
            },
        ),
    };

    let mut params = params_map(&[
        ("p", p.to_string()),
        (
            "set",
            sorted
                .iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(","),
        ),
        ("pattern", if chain { "theta1".into() } else { "theta0".into() }),
    ]);
    if let ThetaBase::Sigma { m } = base {
        params.insert("m".into(), m.to_string());
    }
    if let ThetaPattern::Theta0(Some(p0)) = pattern {
        params.insert(
            "pairs".into(),
            p0.iter()
                .map(|(a, b)| format!("{a}:{b}"))
                .collect::<Vec<_>>()
                .join(","),
        );
    }

    Ok(ConstructedFamily {
        group,
        blocks,
        claimed,
        provenance: Provenance {
            id: id.into(),
            params,
        },
        flags,
    })
}

/// Family {H ∪ (H + g_i)} where {H ± g_i} partitions G \ H; claims
/// (n + m(m-1), 2m^2).
pub fn coset_pair_family(
    group: GroupSpec,
    subgroup_gen: &GroupElement,
    reps: &[GroupElement],
) -> Result<ConstructedFamily> {
    let n = group.order();
    if n.is_multiple_of(2) || is_prime(n) || n == 1 {
        return Err(Error::Parameter(format!(
            "G Abelian of odd, composite order: got order {n}"
        )));
    }
    let h = cyclic_subgroup(&group, subgroup_gen)?;
    let m = h.len() as u64;
    if m == 1 || m == n {
        return Err(Error::Parameter(format!(
            "H must be a proper, nontrivial subgroup: <{subgroup_gen}> has order {m}"
        )));
    }
    let kappa = (n / m - 1) / 2;
    if reps.len() as u64 != kappa {
        return Err(Error::Parameter(format!(
            "κ = (n/m - 1)/2 = {kappa} coset representatives required, got {}",
            reps.len()
        )));
    }

    // {H ± g_i} must partition G \ H
    let mut seen: Vec<Subset> = vec![h.clone()];
    for g in reps {
        for signed in [g.clone(), group.neg(g)] {
            let coset = h.translate(&signed);
            if seen.contains(&coset) {
                return Err(Error::Parameter(format!(
                    "{{H ± g_i}} is not a partition of G \\ H: coset {coset} repeats"
                )));
            }
            seen.push(coset);
        }
    }
    if (seen.len() as u64) * m != n {
        return Err(Error::Parameter(
            "{H ± g_i} does not cover G \\ H".into(),
        ));
    }

    let mut blocks = Vec::with_capacity(reps.len());
    for g in reps {
        let mut elems: Vec<GroupElement> = h.elements().to_vec();
        elems.extend(h.translate(g).elements().iter().cloned());
        blocks.push(Subset::new(group.clone(), elems)?);
    }

    let claimed = ClaimedProfile {
        v: n,
        k: 2 * m,
        n: kappa,
        tuple_first: n + m * (m - 1),
        tuple_second: 2 * m * m,
        source: "th42: (n + m(m-1), 2m^2)".into(),
    };
    let params = params_map(&[
        (
            "group",
            group
                .factors()
                .iter()
                .map(|f| f.size().to_string())
                .collect::<Vec<_>>()
                .join("x"),
        ),
        ("h_gen", subgroup_gen.to_string()),
        (
            "reps",
            reps.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(";"),
        ),
    ]);
    Ok(ConstructedFamily {
        group,
        blocks,
        claimed,
        provenance: Provenance {
            id: "th42".into(),
            params,
        },
        flags: Vec::new(),
    })
}

/// Typed dispatcher over the whole catalog, used by the CLI and the atlas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Construction {
    Th30 { m: u64, p: u64, i: usize, j: usize },
    Th31 { p: u64, i: usize, j: usize },
    Th32 { p: u64, m: u32, s: u64 },
    Th33 { l: u64, variant: Variant },
    Th41 { p: u64, u: u32 },
    Th40 { m: u64, p: u64, set: Vec<usize>, pairs: Option<Vec<(usize, usize)>> },
    Cor40 { m: u64, p: u64, set: Vec<usize> },
    Cor41 { p: u64, set: Vec<usize>, chain: bool },
    Th42 { orders: Vec<u64>, h_gen: String, reps: Vec<String> },
}

impl Construction {
    pub fn id(&self) -> &'static str {
        match self {
            Construction::Th30 { .. } => "th30",
            Construction::Th31 { .. } => "th31",
            Construction::Th32 { .. } => "th32",
            Construction::Th33 { .. } => "th33",
            Construction::Th41 { .. } => "th41",
            Construction::Th40 { .. } => "th40",
            Construction::Cor40 { .. } => "cor40",
            Construction::Cor41 { .. } => "cor41",
            Construction::Th42 { .. } => "th42",
        }
    }

    pub fn build(&self) -> Result<ConstructedFamily> {
        match self {
            Construction::Th30 { m, p, i, j } => sigma_product_set(*m, *p, *i, *j),
            Construction::Th31 { p, i, j } => z6_product_set(*p, *i, *j),
            Construction::Th32 { p, m, s } => planar_set(*p, *m, *s),
            Construction::Th33 { l, variant } => mod4_pair_set(*l, *variant),
            Construction::Th41 { p, u } => multiplier_family(*p, *u),
            Construction::Th40 { m, p, set, pairs } => theta_family(
                &ThetaBase::Sigma { m: *m },
                *p,
                set,
                &ThetaPattern::Theta0(pairs.clone()),
            ),
            Construction::Cor40 { m, p, set } => {
                theta_family(&ThetaBase::Sigma { m: *m }, *p, set, &ThetaPattern::Theta1)
            }
            Construction::Cor41 { p, set, chain } => {
                let pattern = if *chain {
                    ThetaPattern::Theta1
                } else {
                    ThetaPattern::Theta0(None)
                };
                theta_family(&ThetaBase::Z6, *p, set, &pattern)
            }
            Construction::Th42 { orders, h_gen, reps } => {
                let group = make_group(orders, None)?;
                let gen = group.parse_element(h_gen)?;
                let reps: Vec<GroupElement> = reps
                    .iter()
                    .map(|r| group.parse_element(r))
                    .collect::<Result<_>>()?;
                coset_pair_family(group, &gen, &reps)
            }
        }
    }

    /// The printed parameter tuple for these parameters, without keeping the
    /// family.
    pub fn claimed_profile(&self) -> Result<ClaimedProfile> {
        Ok(self.build()?.claimed)
    }
}
