//! Workbench command implementations shared by the `pgd` binary and the
//! test suites.

pub mod atlas;
pub mod search;

use serde::Serialize;

use pgd_core::error::{Error, Result};
use pgd_core::galois::{build_field, prime_power};
use pgd_core::group::{GroupFactor, GroupSpec};
use pgd_core::verify::{
    a1_srg_check, index_profile, pg_check_matrix, reports_agree, s_counts, Design, IndexProfile,
    PgReport, TwoIndexReport, Verdict, VerdictScope,
};

/// Exit codes, one per fidelity verdict plus the infrastructure outcomes.
pub mod exit_code {
    pub const OK: i32 = 0;
    pub const MALFORMED: i32 = 1;
    pub const PARAMETER: i32 = 2;
    pub const ORDER_SWAPPED: i32 = 3;
    pub const VALUE_MISMATCH: i32 = 4;
    pub const NOT_PG: i32 = 5;
    pub const SPACE_TOO_LARGE: i32 = 6;
}

pub fn verdict_exit(v: Verdict) -> i32 {
    match v {
        Verdict::Pass => exit_code::OK,
        Verdict::OrderSwapped => exit_code::ORDER_SWAPPED,
        Verdict::ValueMismatch => exit_code::VALUE_MISMATCH,
        Verdict::NotPg => exit_code::NOT_PG,
    }
}

pub fn error_exit(e: &Error) -> i32 {
    match e {
        Error::Parameter(_) | Error::NotPrime(_) => exit_code::PARAMETER,
        _ => exit_code::MALFORMED,
    }
}

/// Parse a group spec like `2x4`, `z2xz4`, `9`, `f9`, or `6xf9`; `fQ`
/// factors are the additive groups of the fields F_Q.
pub fn parse_group_spec(s: &str) -> Result<GroupSpec> {
    let mut factors = Vec::new();
    for tok in s.to_ascii_lowercase().split('x') {
        let tok = tok.trim();
        if tok.is_empty() {
            return Err(Error::Malformed(format!("empty factor in group spec {s}")));
        }
        if let Some(q) = tok.strip_prefix('f') {
            let q: u64 = q
                .parse()
                .map_err(|_| Error::Malformed(format!("bad field factor {tok}")))?;
            let (p, d) = prime_power(q)
                .ok_or_else(|| Error::Parameter(format!("field order {q} is not a prime power")))?;
            factors.push(GroupFactor::Field(build_field(p, d)?));
        } else {
            let tok = tok.strip_prefix('z').unwrap_or(tok);
            let n: u64 = tok
                .parse()
                .map_err(|_| Error::Malformed(format!("bad cyclic factor {tok}")))?;
            if n == 0 {
                return Err(Error::Parameter("cyclic factor orders must be >= 1".into()));
            }
            factors.push(GroupFactor::Cyclic(n));
        }
    }
    GroupSpec::product(factors)
}

pub fn parse_scope(s: &str) -> Result<VerdictScope> {
    match s {
        "both" => Ok(VerdictScope::Both),
        "window" => Ok(VerdictScope::WindowOnly),
        "blockwise" => Ok(VerdictScope::BlockwiseOnly),
        _ => Err(Error::Parameter(format!(
            "semantics must be both, window or blockwise: got {s}"
        ))),
    }
}

/// Full design-level check: tactical, both partial geometric routes, the
/// index profile, and the two-index pipeline when it applies.
#[derive(Debug, Clone, Serialize)]
pub struct DesignCheck {
    pub v: usize,
    pub b: usize,
    pub tactical: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tactical_failure: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flag_count: Option<PgReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<PgReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub routes_agree: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub indices: Option<IndexProfile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub two_index: Option<TwoIndexReport>,
}

pub fn check_design(design: &Design) -> DesignCheck {
    match design.tactical() {
        Err(e) => DesignCheck {
            v: design.v(),
            b: design.b(),
            tactical: false,
            tactical_failure: Some(e.to_string()),
            flag_count: None,
            matrix: None,
            routes_agree: None,
            indices: None,
            two_index: None,
        },
        Ok(_) => {
            let direct = s_counts(design).expect("tactical design");
            let matrix = pg_check_matrix(design).expect("tactical design");
            let agree = reports_agree(&direct, &matrix);
            let profile = index_profile(design);
            let two_index = if profile.two_index {
                a1_srg_check(design).ok()
            } else {
                None
            };
            DesignCheck {
                v: design.v(),
                b: design.b(),
                tactical: true,
                tactical_failure: None,
                flag_count: Some(direct),
                matrix: Some(matrix),
                routes_agree: Some(agree),
                indices: Some(profile),
                two_index,
            }
        }
    }
}

pub fn design_check_text(check: &DesignCheck) -> String {
    let mut out = format!("points: {}  blocks: {}\n", check.v, check.b);
    if !check.tactical {
        out.push_str(&format!(
            "tactical: no ({})\n",
            check.tactical_failure.as_deref().unwrap_or("unknown")
        ));
        return out;
    }
    let fc = check.flag_count.as_ref().unwrap();
    out.push_str(&format!("tactical: yes  k = {}  r = {}\n", fc.k, fc.r));
    out.push_str(&format!(
        "partial geometric (flag count): {}  (matrix identity): {}  agree: {}\n",
        fc.is_partial_geometric,
        check.matrix.as_ref().unwrap().is_partial_geometric,
        check.routes_agree.unwrap(),
    ));
    if fc.is_partial_geometric {
        out.push_str(&format!(
            "alpha' = {:?}  beta' = {:?}  n' = {:?}\n",
            fc.alpha_prime, fc.beta_prime, fc.n_prime
        ));
    }
    if let Some(ix) = &check.indices {
        out.push_str(&format!(
            "pair indices: {:?}  two-index: {}  2-adesign: {}\n",
            ix.index_values, ix.two_index, ix.is_2adesign
        ));
    }
    if let Some(ti) = &check.two_index {
        out.push_str(&format!(
            "special class (flag constancy): {}  nu = {:?}  zeta = {:?}\n",
            ti.in_special_class, ti.nu, ti.zeta
        ));
        match &ti.srg {
            Some(s) => out.push_str(&format!(
                "A1 strongly regular: (v,k',a,b) = ({},{},{},{})  kappa check: {}\n",
                s.v, s.k_prime, s.a, s.b, s.kappa_matches
            )),
            None => out.push_str(&format!(
                "A1 not strongly regular: {}\n",
                ti.srg_failure.as_deref().unwrap_or("unknown")
            )),
        }
    }
    out
}
