//! `pgd`: construct catalogued difference sets and families, verify their
//! profiles, develop them into designs, certify the designs and their
//! digraphs, sweep a parameter atlas, and search small groups exhaustively.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use pgd_cli::atlas::{run_atlas, summary_table, AtlasOptions};
use pgd_cli::search::{search, SearchFailure, SearchOptions};
use pgd_cli::{
    check_design, design_check_text, error_exit, exit_code, parse_group_spec, parse_scope,
    verdict_exit,
};
use pgd_core::constructions::Construction;
use pgd_core::dsrg::{antiflag_graph, dsrg_check, export_graph, flag_graph, ExportFormat};
use pgd_core::error::Error;
use pgd_core::report::{
    design_from_grid, design_to_grid, family_from_json, family_to_json, fidelity_to_json,
};
use pgd_core::verify::{develop, develop_multiset, pgds_verdict};

#[derive(Parser)]
#[command(
    name = "pgd",
    version,
    about = "Exact workbench for difference sets, partial geometric designs and their digraphs"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Write output to this file (atlas: directory) instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Report format: json or text.
    #[arg(long, global = true, default_value = "json")]
    format: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a catalogued family and emit its JSON document.
    Construct {
        #[command(subcommand)]
        which: ConstructCmd,
    },
    /// Check a family document against its claimed tuple (exit 0 PASS,
    /// 3 ORDER-SWAPPED, 4 VALUE-MISMATCH, 5 NOT-PG).
    Verify {
        file: PathBuf,
        /// Semantics to consult: both, window or blockwise.
        #[arg(long, default_value = "both")]
        semantics: String,
    },
    /// Expand a family document into its development and emit the incidence
    /// grid.
    Develop {
        file: PathBuf,
        /// Keep coincident translates as repeated blocks.
        #[arg(long)]
        multiset: bool,
    },
    /// Run the design-level checks on an incidence grid.
    CheckDesign { file: PathBuf },
    /// Build the flag or anti-flag graph of a development (family document)
    /// or of an incidence grid, certify it, and export it.
    Dsrg {
        file: PathBuf,
        /// Which graph: flag or antiflag.
        #[arg(long, default_value = "flag")]
        graph: String,
        /// Export format: edge-list, dot or matrix.
        #[arg(long, default_value = "edge-list")]
        export: String,
    },
    /// Sweep the catalog at small parameters and write an atlas.
    Atlas {
        /// Primes to sweep, comma separated.
        #[arg(long, default_value = "3,5")]
        pset: String,
        #[arg(long, default_value_t = 200)]
        max_v: u64,
        #[arg(long, default_value_t = 600)]
        max_blocks: usize,
        #[arg(long, default_value_t = 1200)]
        max_graph_vertices: usize,
    },
    /// Exhaustively search a group for blocks with two-valued profiles
    /// (exit 6 when the space exceeds the budget).
    Search {
        /// Group spec such as 2x4, 9 or 6xf9.
        #[arg(long)]
        group: String,
        #[arg(long)]
        k: usize,
        /// Restrict to subsets containing 0.
        #[arg(long)]
        fix_zero: bool,
        /// window or blockwise (identical for single blocks).
        #[arg(long, default_value = "window")]
        semantics: String,
        /// Candidate budget.
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
        /// Keep one representative per translation class.
        #[arg(long)]
        dedup: bool,
    },
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Σ-product block in Z_m x F_p².
    Th30 {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
    },
    /// {0,3}/{1,4}-product block in Z_6 x F_p².
    Th31 {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
    },
    /// Graph of a certified planar power function x^s on F_p^m.
    Th32 {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        s: u64,
    },
    /// Coset-pair block in Z_2 x Z_4l.
    Th33 {
        #[arg(long)]
        l: u64,
        #[arg(long, default_value = "A")]
        variant: String,
    },
    /// Multiplier family in Z_p^u.
    Th41 {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        u: u32,
    },
    /// Σ-product family over a perfect matching of the index set.
    Th40 {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        p: u64,
        /// Index set, comma separated, e.g. 0,1,2,3.
        #[arg(long)]
        set: String,
        /// Explicit matching, e.g. 0:1,2:3 (default pairs consecutive
        /// members).
        #[arg(long)]
        pairs: Option<String>,
    },
    /// Σ-product family over the cyclic chain of the index set.
    Cor40 {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        set: String,
    },
    /// Z_6-product family over a matching (theta0) or chain (theta1).
    Cor41 {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        set: String,
        #[arg(long, default_value = "theta0")]
        pattern: String,
    },
    /// Subgroup-coset-pair family over an abelian group of odd composite
    /// order.
    Th42 {
        /// Group spec such as 15 or 3x5.
        #[arg(long)]
        group: String,
        /// Generator of the subgroup H, canonical element syntax.
        #[arg(long)]
        h_gen: String,
        /// Coset representatives, semicolon separated.
        #[arg(long)]
        reps: String,
    },
}

fn parse_usize_list(s: &str) -> Result<Vec<usize>, Error> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::Malformed(format!("bad index {t}")))
        })
        .collect()
}

fn parse_pairs(s: &str) -> Result<Vec<(usize, usize)>, Error> {
    s.split(',')
        .map(|t| {
            let (a, b) = t
                .split_once(':')
                .ok_or_else(|| Error::Malformed(format!("bad pair {t}, expected i:j")))?;
            Ok((
                a.trim()
                    .parse()
                    .map_err(|_| Error::Malformed(format!("bad pair index {a}")))?,
                b.trim()
                    .parse()
                    .map_err(|_| Error::Malformed(format!("bad pair index {b}")))?,
            ))
        })
        .collect()
}

impl ConstructCmd {
    fn to_construction(&self) -> Result<Construction, Error> {
        Ok(match self {
            ConstructCmd::Th30 { m, p, i, j } => Construction::Th30 {
                m: *m,
                p: *p,
                i: *i,
                j: *j,
            },
            ConstructCmd::Th31 { p, i, j } => Construction::Th31 {
                p: *p,
                i: *i,
                j: *j,
            },
            ConstructCmd::Th32 { p, m, s } => Construction::Th32 {
                p: *p,
                m: *m,
                s: *s,
            },
            ConstructCmd::Th33 { l, variant } => Construction::Th33 {
                l: *l,
                variant: variant.parse()?,
            },
            ConstructCmd::Th41 { p, u } => Construction::Th41 { p: *p, u: *u },
            ConstructCmd::Th40 { m, p, set, pairs } => Construction::Th40 {
                m: *m,
                p: *p,
                set: parse_usize_list(set)?,
                pairs: pairs.as_deref().map(parse_pairs).transpose()?,
            },
            ConstructCmd::Cor40 { m, p, set } => Construction::Cor40 {
                m: *m,
                p: *p,
                set: parse_usize_list(set)?,
            },
            ConstructCmd::Cor41 { p, set, pattern } => Construction::Cor41 {
                p: *p,
                set: parse_usize_list(set)?,
                chain: match pattern.as_str() {
                    "theta0" => false,
                    "theta1" => true,
                    other => {
                        return Err(Error::Parameter(format!(
                            "pattern must be theta0 or theta1: got {other}"
                        )))
                    }
                },
            },
            ConstructCmd::Th42 { group, h_gen, reps } => {
                let spec = parse_group_spec(group)?;
                let orders = spec
                    .factors()
                    .iter()
                    .map(|f| match f {
                        pgd_core::group::GroupFactor::Cyclic(n) => Ok(*n),
                        _ => Err(Error::Parameter(
                            "th42 takes a product of cyclic factors".into(),
                        )),
                    })
                    .collect::<Result<Vec<u64>, Error>>()?;
                let h_gen = normalize_element(h_gen);
                let reps = reps
                    .split(';')
                    .map(|r| normalize_element(r.trim()))
                    .collect();
                Construction::Th42 {
                    orders,
                    h_gen,
                    reps,
                }
            }
        })
    }
}

/// Accept `5` as shorthand for `(5)` in single-coordinate element flags.
fn normalize_element(s: &str) -> String {
    if s.starts_with('(') {
        s.to_string()
    } else {
        format!("({s})")
    }
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| Error::Malformed(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn read_input(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path)
        .map_err(|e| Error::Malformed(format!("cannot read {}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<i32, Error> {
    match cli.cmd {
        Cmd::Construct { which } => {
            let family = which.to_construction()?.build()?;
            emit(&cli.out, &family_to_json(&family))?;
            Ok(exit_code::OK)
        }
        Cmd::Verify { file, semantics } => {
            let scope = parse_scope(&semantics)?;
            let family = family_from_json(&read_input(&file)?)?;
            let record = pgds_verdict(&family, scope)?;
            let rendered = if cli.format == "text" {
                format!(
                    "{}: verdict {} (semantics {}), computed (in,off) = ({},{}), claimed ({},{})\n",
                    record.construction,
                    record.verdict.name(),
                    record.semantics_used,
                    record.in_value.map_or("-".to_string(), |v| v.to_string()),
                    record.off_value.map_or("-".to_string(), |v| v.to_string()),
                    record.claimed[0],
                    record.claimed[1],
                )
            } else {
                fidelity_to_json(&record)
            };
            emit(&cli.out, &rendered)?;
            Ok(verdict_exit(record.verdict))
        }
        Cmd::Develop { file, multiset } => {
            let family = family_from_json(&read_input(&file)?)?;
            let (design, stats) = if multiset {
                develop_multiset(&family)?
            } else {
                develop(&family)?
            };
            let mut grid = design_to_grid(&design)?;
            if stats.collapsed > 0 {
                eprintln!(
                    "note: {} of {} translate instances collapsed",
                    stats.collapsed, stats.translate_instances
                );
            }
            if cli.format == "text" {
                grid = format!(
                    "# development: {} distinct blocks from {} translates\n{grid}",
                    stats.distinct_blocks, stats.translate_instances
                );
            }
            emit(&cli.out, &grid)?;
            Ok(exit_code::OK)
        }
        Cmd::CheckDesign { file } => {
            let design = design_from_grid(&read_input(&file)?)?;
            let report = check_design(&design);
            let rendered = if cli.format == "text" {
                design_check_text(&report)
            } else {
                let mut s = serde_json::to_string_pretty(&report).map_err(Error::Json)?;
                s.push('\n');
                s
            };
            emit(&cli.out, &rendered)?;
            Ok(exit_code::OK)
        }
        Cmd::Dsrg {
            file,
            graph,
            export,
        } => {
            let text = read_input(&file)?;
            let design = if text.trim_start().starts_with('{') {
                let family = family_from_json(&text)?;
                develop(&family)?.0
            } else {
                design_from_grid(&text)?
            };
            let g = match graph.as_str() {
                "flag" => flag_graph(&design)?,
                "antiflag" => antiflag_graph(&design)?,
                other => {
                    return Err(Error::Parameter(format!(
                        "graph must be flag or antiflag: got {other}"
                    )))
                }
            };
            let format: ExportFormat = export.parse()?;
            let cert = dsrg_check(&g);
            if let Err(e) = &cert {
                eprintln!("note: not directed strongly regular: {e}");
            }
            emit(&cli.out, &export_graph(&g, format, cert.ok().as_ref()))?;
            Ok(exit_code::OK)
        }
        Cmd::Atlas {
            pset,
            max_v,
            max_blocks,
            max_graph_vertices,
        } => {
            let pset = if pset.trim().is_empty() {
                Vec::new()
            } else {
                pset.split(',')
                    .map(|t| {
                        t.trim()
                            .parse()
                            .map_err(|_| Error::Malformed(format!("bad prime {t}")))
                    })
                    .collect::<Result<Vec<u64>, Error>>()?
            };
            let opts = AtlasOptions {
                pset,
                max_v,
                max_blocks,
                max_graph_vertices,
            };
            let outcome = run_atlas(&opts);
            match &cli.out {
                Some(dir) => {
                    fs::create_dir_all(dir).map_err(|e| {
                        Error::Malformed(format!("cannot create {}: {e}", dir.display()))
                    })?;
                    for (i, entry) in outcome.entries.iter().enumerate() {
                        let path = dir.join(format!("{:03}-{}.json", i, entry.id));
                        let mut body = serde_json::to_string_pretty(entry).map_err(Error::Json)?;
                        body.push('\n');
                        fs::write(&path, body).map_err(|e| {
                            Error::Malformed(format!("cannot write {}: {e}", path.display()))
                        })?;
                    }
                    let summary = summary_table(&outcome);
                    fs::write(dir.join("summary.txt"), &summary)
                        .map_err(|e| Error::Malformed(format!("cannot write summary: {e}")))?;
                    print!("{summary}");
                }
                None => {
                    if cli.format == "text" {
                        print!("{}", summary_table(&outcome));
                    } else {
                        let mut body =
                            serde_json::to_string_pretty(&outcome).map_err(Error::Json)?;
                        body.push('\n');
                        print!("{body}");
                    }
                }
            }
            Ok(exit_code::OK)
        }
        Cmd::Search {
            group,
            k,
            fix_zero,
            semantics,
            budget,
            dedup,
        } => {
            let sem = match semantics.as_str() {
                "window" => pgd_core::verify::Semantics::Window,
                "blockwise" => pgd_core::verify::Semantics::Blockwise,
                other => {
                    return Err(Error::Parameter(format!(
                        "semantics must be window or blockwise: got {other}"
                    )))
                }
            };
            let opts = SearchOptions {
                group: parse_group_spec(&group)?,
                k,
                fix_zero,
                semantics: sem,
                budget,
                dedup_translates: dedup,
            };
            match search(&opts) {
                Ok(outcome) => {
                    let rendered = if cli.format == "text" {
                        let mut s = format!(
                            "searched {} candidates in {} (k={}): {} hits\n",
                            outcome.candidates,
                            outcome.group,
                            outcome.k,
                            outcome.hits.len()
                        );
                        for h in &outcome.hits {
                            s.push_str(&format!(
                                "{{{}}} in={} off={}\n",
                                h.subset.join(","),
                                h.in_value,
                                h.off_value
                            ));
                        }
                        s
                    } else {
                        let mut s = serde_json::to_string_pretty(&outcome).map_err(Error::Json)?;
                        s.push('\n');
                        s
                    };
                    emit(&cli.out, &rendered)?;
                    Ok(exit_code::OK)
                }
                Err(SearchFailure::SpaceTooLarge(n)) => {
                    eprintln!("error: search space of {n} candidates exceeds the budget {budget}");
                    Ok(exit_code::SPACE_TOO_LARGE)
                }
                Err(SearchFailure::Core(e)) => Err(e),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_exit(&e) as u8)
        }
    }
}
