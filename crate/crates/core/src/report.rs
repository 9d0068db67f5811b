//! Canonical on-disk formats: the family JSON document, the fidelity JSON
//! record, and plain-text incidence grids.
//!
//! All serialization is deterministic (struct field order, BTreeMap params,
//! sorted block listings), so rebuilding the same family reproduces its
//! documents byte for byte.

use serde::{Deserialize, Serialize};

use crate::constructions::{ClaimedProfile, ConstructedFamily, Provenance};
use crate::error::{Error, Result};
use crate::galois::build_field;
use crate::group::{GroupFactor, GroupSpec, Subset};
use crate::verify::{Design, FidelityRecord};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum FactorDoc {
    Cyclic {
        order: u64,
    },
    Field {
        p: u64,
        degree: usize,
        /// Redundant (the modulus is determined by (p, degree)); kept in the
        /// document header for human readers and validated when present.
        #[serde(skip_serializing_if = "Option::is_none")]
        modulus: Option<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDoc {
    pub factors: Vec<FactorDoc>,
    pub order: u64,
}

impl GroupDoc {
    pub fn from_group(group: &GroupSpec) -> GroupDoc {
        let factors = group
            .factors()
            .iter()
            .map(|f| match f {
                GroupFactor::Cyclic(n) => FactorDoc::Cyclic { order: *n },
                GroupFactor::Field(fs) => FactorDoc::Field {
                    p: fs.characteristic(),
                    degree: fs.degree(),
                    modulus: Some(fs.modulus_string()),
                },
            })
            .collect();
        GroupDoc {
            factors,
            order: group.order(),
        }
    }

    pub fn to_group(&self) -> Result<GroupSpec> {
        let mut factors = Vec::with_capacity(self.factors.len());
        for f in &self.factors {
            match f {
                FactorDoc::Cyclic { order } => {
                    if *order == 0 {
                        return Err(Error::Malformed("cyclic factor of order 0".into()));
                    }
                    factors.push(GroupFactor::Cyclic(*order));
                }
                FactorDoc::Field { p, degree, modulus } => {
                    let field = build_field(*p, *degree)?;
                    if let Some(m) = modulus {
                        if m != &field.modulus_string() {
                            return Err(Error::Malformed(format!(
                                "modulus {m} does not match the canonical modulus {}",
                                field.modulus_string()
                            )));
                        }
                    }
                    factors.push(GroupFactor::Field(field));
                }
            }
        }
        let group = GroupSpec::product(factors)?;
        if group.order() != self.order {
            return Err(Error::Malformed(format!(
                "declared order {} does not match the factor product {}",
                self.order,
                group.order()
            )));
        }
        Ok(group)
    }
}

/// The family document `{group, blocks, claimed, provenance}` with elements
/// in canonical text syntax.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyDocument {
    pub group: GroupDoc,
    pub blocks: Vec<Vec<String>>,
    pub claimed: ClaimedProfile,
    pub provenance: Provenance,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub flags: Vec<String>,
}

impl FamilyDocument {
    pub fn from_family(family: &ConstructedFamily) -> FamilyDocument {
        FamilyDocument {
            group: GroupDoc::from_group(&family.group),
            blocks: family
                .blocks
                .iter()
                .map(|b| b.elements().iter().map(|e| e.to_string()).collect())
                .collect(),
            claimed: family.claimed.clone(),
            provenance: family.provenance.clone(),
            flags: family.flags.clone(),
        }
    }

    pub fn to_family(&self) -> Result<ConstructedFamily> {
        let group = self.group.to_group()?;
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for block in &self.blocks {
            let elems = block
                .iter()
                .map(|s| group.parse_element(s))
                .collect::<Result<Vec<_>>>()?;
            blocks.push(Subset::new(group.clone(), elems)?);
        }
        // claimed v and k must describe the document's own group and blocks
        // (the claimed block count is deliberately not checked: one catalog
        // entry prints a count its pattern does not produce, and the
        // discrepancy is carried as a flag instead)
        if self.claimed.v != group.order() {
            return Err(Error::Malformed(format!(
                "claimed v = {} but the group has order {}",
                self.claimed.v,
                group.order()
            )));
        }
        if let Some(first) = blocks.first() {
            if self.claimed.k != first.len() as u64 {
                return Err(Error::Malformed(format!(
                    "claimed k = {} but blocks have size {}",
                    self.claimed.k,
                    first.len()
                )));
            }
        } else {
            return Err(Error::Malformed("document contains no blocks".into()));
        }
        Ok(ConstructedFamily {
            group,
            blocks,
            claimed: self.claimed.clone(),
            provenance: self.provenance.clone(),
            flags: self.flags.clone(),
        })
    }
}

pub fn family_to_json(family: &ConstructedFamily) -> String {
    let doc = FamilyDocument::from_family(family);
    let mut s = serde_json::to_string_pretty(&doc).expect("family documents always serialize");
    s.push('\n');
    s
}

pub fn family_from_json(text: &str) -> Result<ConstructedFamily> {
    let doc: FamilyDocument = serde_json::from_str(text)?;
    doc.to_family()
}

pub fn fidelity_to_json(record: &FidelityRecord) -> String {
    let mut s = serde_json::to_string_pretty(record).expect("fidelity records always serialize");
    s.push('\n');
    s
}

/// Incidence matrix as a plain-text 0/1 grid with a `v b k r` header line.
pub fn design_to_grid(design: &Design) -> Result<String> {
    let (k, r) = design.tactical()?;
    let a = design.incidence();
    let mut out = format!("{} {} {k} {r}\n", design.v(), design.b());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            out.push(if a.get(i, j) == 1 { '1' } else { '0' });
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn design_from_grid(text: &str) -> Result<Design> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Malformed("empty incidence grid".into()))?;
    let nums: Vec<u64> = header
        .split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| Error::Malformed(format!("bad header token: {t}")))
        })
        .collect::<Result<_>>()?;
    let [v, b, k, r] = nums[..] else {
        return Err(Error::Malformed(
            "incidence grid header must be `v b k r`".into(),
        ));
    };
    let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); b as usize];
    let mut rows = 0usize;
    for (i, line) in lines.enumerate() {
        let line = line.trim();
        if line.len() as u64 != b {
            return Err(Error::Malformed(format!(
                "row {i} has {} entries, expected b = {b}",
                line.len()
            )));
        }
        for (j, ch) in line.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => blocks[j].push(i),
                _ => {
                    return Err(Error::Malformed(format!(
                        "incidence entries must be 0/1, found {ch}"
                    )))
                }
            }
        }
        rows += 1;
    }
    if rows as u64 != v {
        return Err(Error::Malformed(format!(
            "grid has {rows} rows, header declares v = {v}"
        )));
    }
    let labels = (0..v).map(|i| format!("p{i}")).collect();
    let design = Design::new(labels, blocks)?;
    let (dk, dr) = design.tactical()?;
    if (dk, dr) != (k, r) {
        return Err(Error::Malformed(format!(
            "header declares k = {k}, r = {r} but the grid has k = {dk}, r = {dr}"
        )));
    }
    Ok(design)
}
