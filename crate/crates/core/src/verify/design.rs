//! Block designs as exact incidence structures, with the partial geometric
//! certification done two independent ways: direct flag counting, and the
//! integer matrix identity A·Aᵀ·A = n'A + α'J.

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// An incidence structure over labelled points. Blocks are sorted index
/// lists; nothing about the group survives here, so user-supplied designs
/// plug into the same checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Design {
    point_labels: Vec<String>,
    blocks: Vec<Vec<usize>>,
}

impl Design {
    pub fn new(point_labels: Vec<String>, blocks: Vec<Vec<usize>>) -> Result<Design> {
        let v = point_labels.len();
        let mut sorted_blocks = blocks;
        for b in &mut sorted_blocks {
            b.sort_unstable();
            if b.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Malformed("block repeats a point".into()));
            }
            if b.iter().any(|&p| p >= v) {
                return Err(Error::Malformed("block names a point outside the design".into()));
            }
        }
        Ok(Design {
            point_labels,
            blocks: sorted_blocks,
        })
    }

    pub fn v(&self) -> usize {
        self.point_labels.len()
    }

    pub fn b(&self) -> usize {
        self.blocks.len()
    }

    pub fn point_labels(&self) -> &[String] {
        &self.point_labels
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn incidence(&self) -> IntMatrix {
        let mut a = IntMatrix::zeros(self.v(), self.b());
        for (j, block) in self.blocks.iter().enumerate() {
            for &p in block {
                a.set(p, j, 1);
            }
        }
        a
    }

    pub fn from_incidence(point_labels: Vec<String>, a: &IntMatrix) -> Result<Design> {
        let mut blocks = vec![Vec::new(); a.cols()];
        for r in 0..a.rows() {
            for (c, block) in blocks.iter_mut().enumerate() {
                match a.get(r, c) {
                    0 => {}
                    1 => block.push(r),
                    other => {
                        return Err(Error::Malformed(format!(
                            "incidence entries must be 0/1, found {other}"
                        )))
                    }
                }
            }
        }
        Design::new(point_labels, blocks)
    }

    pub fn replication_numbers(&self) -> Vec<u64> {
        let mut r = vec![0u64; self.v()];
        for block in &self.blocks {
            for &p in block {
                r[p] += 1;
            }
        }
        r
    }

    /// Constant block size and replication number, or the offending
    /// point/block.
    pub fn tactical(&self) -> Result<(u64, u64)> {
        let k = self.blocks.first().map_or(0, |b| b.len()) as u64;
        for (j, block) in self.blocks.iter().enumerate() {
            if block.len() as u64 != k {
                return Err(Error::NotTactical(format!(
                    "block {j} has size {}, expected {k}",
                    block.len()
                )));
            }
        }
        let reps = self.replication_numbers();
        let r = reps.first().copied().unwrap_or(0);
        for (p, &rp) in reps.iter().enumerate() {
            if rp != r {
                return Err(Error::NotTactical(format!(
                    "point {} has replication {rp}, expected {r}",
                    self.point_labels[p]
                )));
            }
        }
        Ok((k, r))
    }

    /// Pair index matrix r_xy, by direct block iteration (no matrix algebra).
    pub fn pair_index_matrix(&self) -> Vec<Vec<u64>> {
        let v = self.v();
        let mut r = vec![vec![0u64; v]; v];
        for block in &self.blocks {
            for (a, &x) in block.iter().enumerate() {
                for &y in &block[a + 1..] {
                    r[x][y] += 1;
                    r[y][x] += 1;
                }
            }
        }
        r
    }

    /// Copy with one incidence bit flipped; the raw material of mutation
    /// tests.
    pub fn flip_incidence(&self, point: usize, block: usize) -> Design {
        let mut blocks = self.blocks.clone();
        match blocks[block].binary_search(&point) {
            Ok(pos) => {
                blocks[block].remove(pos);
            }
            Err(pos) => blocks[block].insert(pos, point),
        }
        Design {
            point_labels: self.point_labels.clone(),
            blocks,
        }
    }
}

/// Certification outcome for the partial geometric property, from either
/// route.
///
/// `alpha_prime` and `beta_prime` are attached as in the matrix identity:
/// α' is the constant on non-incident entries of A·Aᵀ·A (equivalently the
/// anti-flag s value) and β' the flag s value, with
/// n' = r + k + β' − α' − 1. The two notations in circulation disagree on
/// which letter goes where; this crate solves for the constants from the
/// data and never trusts a printed attachment.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct PgReport {
    pub route: &'static str,
    pub v: usize,
    pub b: usize,
    pub k: u64,
    pub r: u64,
    pub s_flag_values: Vec<u64>,
    pub s_antiflag_values: Vec<u64>,
    pub is_partial_geometric: bool,
    pub alpha_prime: Option<i64>,
    pub beta_prime: Option<i64>,
    pub n_prime: Option<i64>,
    /// For the matrix route: whether A·Aᵀ·A − n'A − α'J vanished exactly.
    pub residual_zero: Option<bool>,
    pub first_violation: Option<String>,
}

/// Direct flag counting: s(u,b) = Σ_{w∈b\{u}} (r_uw − 1) on flags and
/// Σ_{w∈b} r_uw on anti-flags, checked for constancy on each class.
#[allow(clippy::needless_range_loop)]
pub fn s_counts(design: &Design) -> Result<PgReport> {
    let (k, r) = design.tactical()?;
    let pair = design.pair_index_matrix();
    let mut flag_vals = std::collections::BTreeSet::new();
    let mut anti_vals = std::collections::BTreeSet::new();
    let mut first_violation = None;

    for (j, block) in design.blocks().iter().enumerate() {
        for u in 0..design.v() {
            let incident = block.binary_search(&u).is_ok();
            let mut s = 0u64;
            for &w in block {
                if w == u {
                    continue;
                }
                let ruw = pair[u][w];
                s += if incident { ruw - 1 } else { ruw };
            }
            if incident {
                flag_vals.insert(s);
            } else {
                anti_vals.insert(s);
            }
            if first_violation.is_none() && (flag_vals.len() > 1 || anti_vals.len() > 1) {
                first_violation = Some(format!(
                    "s({},{j}) breaks constancy",
                    design.point_labels()[u]
                ));
            }
        }
    }

    let is_pg = flag_vals.len() == 1 && anti_vals.len() <= 1;
    let beta = flag_vals.iter().next().map(|&x| x as i64);
    // a design without anti-flags (k = v) satisfies the identity with α' = 0
    let alpha = anti_vals.iter().next().map(|&x| x as i64).or(Some(0));
    let n_prime = match (alpha, beta) {
        (Some(a), Some(b)) if is_pg => Some(r as i64 + k as i64 + b - a - 1),
        _ => None,
    };
    Ok(PgReport {
        route: "flag-count",
        v: design.v(),
        b: design.b(),
        k,
        r,
        s_flag_values: flag_vals.into_iter().collect(),
        s_antiflag_values: anti_vals.into_iter().collect(),
        is_partial_geometric: is_pg,
        alpha_prime: if is_pg { alpha } else { None },
        beta_prime: if is_pg { beta } else { None },
        n_prime,
        residual_zero: None,
        first_violation: if is_pg { None } else { first_violation },
    })
}

/// Matrix route: compute A·Aᵀ·A exactly, solve (n', α') from one incident and
/// one non-incident entry, then assert the identity globally together with
/// AJ = rJ and JA = kJ.
pub fn pg_check_matrix(design: &Design) -> Result<PgReport> {
    let (k, r) = design.tactical()?;
    let a = design.incidence();
    let (v, b) = (a.rows(), a.cols());

    for (i, s) in a.row_sums().iter().enumerate() {
        if *s != r as i64 {
            return Err(Error::NotTactical(format!(
                "row sum at point {} is {s}, expected r = {r}",
                design.point_labels()[i]
            )));
        }
    }
    for (j, s) in a.col_sums().iter().enumerate() {
        if *s != k as i64 {
            return Err(Error::NotTactical(format!(
                "column sum at block {j} is {s}, expected k = {k}"
            )));
        }
    }

    let m = a.mul(&a.transpose()).mul(&a);

    let mut flag_vals = std::collections::BTreeSet::new();
    let mut anti_vals = std::collections::BTreeSet::new();
    for i in 0..v {
        for j in 0..b {
            if a.get(i, j) == 1 {
                flag_vals.insert(m.get(i, j));
            } else {
                anti_vals.insert(m.get(i, j));
            }
        }
    }

    let is_pg = flag_vals.len() == 1 && anti_vals.len() <= 1;
    let mut report = PgReport {
        route: "matrix",
        v,
        b,
        k,
        r,
        s_flag_values: flag_vals
            .iter()
            .map(|&x| (x - (r as i64 + k as i64 - 1)).max(0) as u64)
            .collect(),
        s_antiflag_values: anti_vals.iter().map(|&x| x as u64).collect(),
        is_partial_geometric: is_pg,
        alpha_prime: None,
        beta_prime: None,
        n_prime: None,
        residual_zero: None,
        first_violation: None,
    };

    if !is_pg {
        let offending = m
            .first_difference(&{
                let mut expect = IntMatrix::zeros(v, b);
                let f = flag_vals.iter().next().copied().unwrap_or(0);
                let n = anti_vals.iter().next().copied().unwrap_or(0);
                for i in 0..v {
                    for j in 0..b {
                        expect.set(i, j, if a.get(i, j) == 1 { f } else { n });
                    }
                }
                expect
            })
            .map(|(i, j, got, want)| {
                format!("entry ({i},{j}) of A·Aᵀ·A is {got}, first class value {want}")
            });
        report.first_violation = offending;
        return Ok(report);
    }

    let flag_entry = *flag_vals.iter().next().expect("design has at least one flag");
    let alpha = anti_vals.iter().next().copied().unwrap_or(0);
    let n_prime = flag_entry - alpha;

    // assert the identity globally: M == n'A + alpha J
    let mut expect = IntMatrix::ones(v, b);
    for i in 0..v {
        for j in 0..b {
            expect.set(i, j, alpha + n_prime * a.get(i, j));
        }
    }
    let residual_zero = m == expect;
    report.alpha_prime = Some(alpha);
    report.beta_prime = Some(n_prime + alpha + 1 - r as i64 - k as i64);
    report.n_prime = Some(n_prime);
    report.residual_zero = Some(residual_zero);
    report.is_partial_geometric = residual_zero;
    Ok(report)
}

/// The two routes agree when both certify with identical constants, or both
/// refuse.
pub fn reports_agree(direct: &PgReport, matrix: &PgReport) -> bool {
    if direct.is_partial_geometric != matrix.is_partial_geometric {
        return false;
    }
    if !direct.is_partial_geometric {
        return true;
    }
    direct.alpha_prime == matrix.alpha_prime
        && direct.beta_prime == matrix.beta_prime
        && direct.n_prime == matrix.n_prime
}
