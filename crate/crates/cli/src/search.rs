//! Exhaustive search for single-block difference sets with two-valued
//! window profiles.
//!
//! Candidates are k-subsets of the group, optionally anchored at 0 (the
//! profile is translation invariant, so fixing 0 loses nothing up to
//! translation). The hot loop works on a precomputed difference table of
//! element indices; every hit is re-verified through the ordinary profile
//! machinery before it is emitted. The candidate space is split on the
//! first free element and the partitions run independently; results are
//! merged back in rank order, so output is deterministic.

use rayon::prelude::*;
use serde::Serialize;

use pgd_core::group::{GroupSpec, Subset};
use pgd_core::verify::{family_profile, Semantics};

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub group: GroupSpec,
    pub k: usize,
    pub fix_zero: bool,
    pub semantics: Semantics,
    /// Maximum number of candidates before the search refuses to start.
    pub budget: u64,
    /// Keep only the lexicographically least translate of each hit.
    pub dedup_translates: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchHit {
    pub subset: Vec<String>,
    pub in_value: u64,
    pub off_value: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchOutcome {
    pub group: String,
    pub k: usize,
    pub fix_zero: bool,
    pub semantics: String,
    pub candidates: u64,
    pub hits: Vec<SearchHit>,
}

#[derive(Debug)]
pub enum SearchFailure {
    /// Candidate count exceeds the budget; carries the count.
    SpaceTooLarge(u128),
    Core(pgd_core::Error),
}

impl std::fmt::Display for SearchFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SearchFailure::SpaceTooLarge(n) => {
                write!(f, "search space of {n} candidates exceeds the budget")
            }
            SearchFailure::Core(e) => write!(f, "{e}"),
        }
    }
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i + 1) as u128;
    }
    acc
}

/// Next ascending k-combination below `v`, lexicographic order. Returns
/// false when exhausted.
fn next_combination(idx: &mut [usize], v: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < v - (k - i) {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

struct Tables {
    v: usize,
    /// diff[x][y] = index of element_x - element_y.
    diff: Vec<Vec<u32>>,
}

fn build_tables(group: &GroupSpec) -> Tables {
    let v = group.order() as usize;
    let elems: Vec<_> = group.elements().collect();
    let mut diff = vec![vec![0u32; v]; v];
    for (x, ex) in elems.iter().enumerate() {
        for (y, ey) in elems.iter().enumerate() {
            diff[x][y] = group.index_of(&group.sub(ex, ey)) as u32;
        }
    }
    Tables { v, diff }
}

/// Window profile of one candidate over the index tables; returns
/// (in, off) when two-valued.
fn profile_candidate(t: &Tables, subset: &[usize], delta: &mut [u64]) -> Option<(u64, u64)> {
    delta.fill(0);
    for &a in subset {
        for &b in subset {
            delta[t.diff[a][b] as usize] += 1;
        }
    }
    let mut in_val: Option<u64> = None;
    let mut off_val: Option<u64> = None;
    let mut members = vec![false; t.v];
    for &s in subset {
        members[s] = true;
    }
    for x in 0..t.v {
        let mut sum = 0u64;
        for &y in subset {
            sum += delta[t.diff[x][y] as usize];
        }
        let slot = if members[x] { &mut in_val } else { &mut off_val };
        match slot {
            None => *slot = Some(sum),
            Some(v) if *v != sum => return None,
            _ => {}
        }
    }
    Some((in_val?, off_val?))
}

/// True when `subset` (sorted indices, containing 0) is the
/// lexicographically least among its translates that contain 0.
fn is_canonical_translate(t: &Tables, subset: &[usize]) -> bool {
    for &s in subset {
        if s == 0 {
            continue;
        }
        let mut shifted: Vec<usize> = subset.iter().map(|&x| t.diff[x][s] as usize).collect();
        shifted.sort_unstable();
        if shifted.as_slice() < subset {
            return false;
        }
    }
    true
}

pub fn search(opts: &SearchOptions) -> Result<SearchOutcome, SearchFailure> {
    let group = &opts.group;
    let v = group.order() as usize;
    if opts.k == 0 || opts.k > v {
        return Err(SearchFailure::Core(pgd_core::Error::Parameter(format!(
            "block size k must lie in 1..={v}: got {}",
            opts.k
        ))));
    }
    let space = if opts.fix_zero {
        binomial(v as u64 - 1, opts.k as u64 - 1)
    } else {
        binomial(v as u64, opts.k as u64)
    };
    if space > opts.budget as u128 {
        return Err(SearchFailure::SpaceTooLarge(space));
    }

    let tables = build_tables(group);

    // partition on the first free coordinate and walk each partition
    // independently
    let (anchor, free): (Vec<usize>, usize) = if opts.fix_zero {
        (vec![0], opts.k - 1)
    } else {
        (vec![], opts.k)
    };
    let start = if opts.fix_zero { 1 } else { 0 };
    let firsts: Vec<usize> = if free == 0 {
        vec![usize::MAX] // single empty-tail partition
    } else {
        (start..=v - free).collect()
    };

    let partitions: Vec<(u64, Vec<SearchHit>)> = firsts
        .par_iter()
        .map(|&first| {
            let mut delta = vec![0u64; v];
            let mut candidates = 0u64;
            let mut hits = Vec::new();
            let mut emit = |subset: &[usize], candidates: &mut u64, hits: &mut Vec<SearchHit>| {
                *candidates += 1;
                if let Some((iv, ov)) = profile_candidate(&tables, subset, &mut delta) {
                    if opts.dedup_translates
                        && opts.fix_zero
                        && !is_canonical_translate(&tables, subset)
                    {
                        return;
                    }
                    // re-verify through the ordinary machinery before emitting
                    let elems = subset.iter().map(|&i| group.element_at(i)).collect();
                    let block = Subset::new(group.clone(), elems).expect("indices are distinct");
                    let profile = family_profile(std::slice::from_ref(&block), opts.semantics)
                        .expect("single nonempty block");
                    assert!(
                        profile.two_valued
                            && profile.in_value() == Some(iv)
                            && profile.off_value() == Some(ov),
                        "fast profile disagrees with the reference profile"
                    );
                    hits.push(SearchHit {
                        subset: block.elements().iter().map(|e| e.to_string()).collect(),
                        in_value: iv,
                        off_value: ov,
                    });
                }
            };

            if free == 0 {
                emit(&anchor, &mut candidates, &mut hits);
                return (candidates, hits);
            }
            let tail = free - 1;
            let mut idx: Vec<usize> = (0..=tail).map(|i| first + i).collect();
            if *idx.last().unwrap() >= v {
                return (candidates, hits);
            }
            loop {
                let mut subset = anchor.clone();
                subset.extend_from_slice(&idx);
                emit(&subset, &mut candidates, &mut hits);
                if tail == 0 {
                    break;
                }
                // advance only the part after `first`
                let (_, rest) = idx.split_at_mut(1);
                if !next_combination(rest, v) {
                    break;
                }
            }
            (candidates, hits)
        })
        .collect();

    let mut candidates = 0u64;
    let mut hits = Vec::new();
    for (c, h) in partitions {
        candidates += c;
        hits.extend(h);
    }

    Ok(SearchOutcome {
        group: group
            .factors()
            .iter()
            .map(|f| f.size().to_string())
            .collect::<Vec<_>>()
            .join("x"),
        k: opts.k,
        fix_zero: opts.fix_zero,
        semantics: opts.semantics.name().to_string(),
        candidates,
        hits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use pgd_core::group::make_group;

    #[test]
    fn combination_successor_is_lexicographic() {
        let mut idx = vec![0, 1, 2];
        let mut seen = vec![idx.clone()];
        while next_combination(&mut idx, 5) {
            seen.push(idx.clone());
        }
        assert_eq!(seen.len(), 10);
        let mut sorted = seen.clone();
        sorted.sort();
        assert_eq!(seen, sorted);
    }

    #[test]
    fn fixed_zero_candidate_count() {
        let group = make_group(&[2, 4], None).unwrap();
        let outcome = search(&SearchOptions {
            group,
            k: 4,
            fix_zero: true,
            semantics: Semantics::Window,
            budget: 10_000_000,
            dedup_translates: false,
        })
        .unwrap();
        assert_eq!(outcome.candidates, 35); // C(7,3)
    }

    #[test]
    fn budget_refusal() {
        let group = make_group(&[30], None).unwrap();
        let err = search(&SearchOptions {
            group,
            k: 15,
            fix_zero: false,
            semantics: Semantics::Window,
            budget: 10_000_000,
            dedup_translates: false,
        })
        .unwrap_err();
        match err {
            SearchFailure::SpaceTooLarge(n) => assert_eq!(n, 155117520),
            other => panic!("unexpected failure: {other}"),
        }
    }

    #[test]
    fn dedup_keeps_one_representative_per_translation_class() {
        let group = make_group(&[2, 4], None).unwrap();
        let base = SearchOptions {
            group: group.clone(),
            k: 4,
            fix_zero: true,
            semantics: Semantics::Window,
            budget: 10_000_000,
            dedup_translates: false,
        };
        let full = search(&base).unwrap();
        let deduped = search(&SearchOptions {
            dedup_translates: true,
            ..base
        })
        .unwrap();
        assert!(deduped.hits.len() < full.hits.len());
        assert!(deduped.hits.iter().all(|h| full.hits.contains(h)));

        // group the full hit list into translation classes and compare counts
        let canon = |subset: &[String]| -> Vec<Vec<String>> {
            let elems: Vec<_> = subset.iter().map(|s| group.parse_element(s).unwrap()).collect();
            let s = Subset::new(group.clone(), elems).unwrap();
            let mut translates: Vec<Vec<String>> = s
                .elements()
                .iter()
                .map(|e| {
                    s.translate(&group.neg(e))
                        .elements()
                        .iter()
                        .map(|x| x.to_string())
                        .collect()
                })
                .collect();
            translates.sort();
            translates
        };
        let mut classes: Vec<Vec<Vec<String>>> = full.hits.iter().map(|h| canon(&h.subset)).collect();
        classes.sort();
        classes.dedup();
        assert_eq!(deduped.hits.len(), classes.len());
        // every emitted representative is the least translate containing 0
        for h in &deduped.hits {
            assert_eq!(&h.subset, &canon(&h.subset)[0]);
        }
    }

    #[test]
    fn field_plane_triples_all_hit() {
        // in the additive plane of F_9, a zero-anchored triple is either a
        // line through 0 (profile (9,0)) or in general position (profile
        // (5,2)); all 28 candidates are hits
        let group = crate::parse_group_spec("f9").unwrap();
        let outcome = search(&SearchOptions {
            group,
            k: 3,
            fix_zero: true,
            semantics: Semantics::Window,
            budget: 10_000_000,
            dedup_translates: false,
        })
        .unwrap();
        assert_eq!(outcome.candidates, 28);
        assert_eq!(outcome.hits.len(), 28);
        let lines = outcome
            .hits
            .iter()
            .filter(|h| (h.in_value, h.off_value) == (9, 0))
            .count();
        let generic = outcome
            .hits
            .iter()
            .filter(|h| (h.in_value, h.off_value) == (5, 2))
            .count();
        assert_eq!((lines, generic), (4, 24));
    }

    #[test]
    fn subgroup_hits_in_z9() {
        let group = make_group(&[9], None).unwrap();
        let outcome = search(&SearchOptions {
            group,
            k: 3,
            fix_zero: true,
            semantics: Semantics::Window,
            budget: 10_000_000,
            dedup_translates: false,
        })
        .unwrap();
        let subgroup = outcome
            .hits
            .iter()
            .find(|h| h.subset == vec!["(0)", "(3)", "(6)"])
            .expect("the subgroup {0,3,6} is a hit");
        assert_eq!((subgroup.in_value, subgroup.off_value), (9, 0));
    }
}
