//! Flag and anti-flag digraphs of a tactical configuration, directed strong
//! regularity certificates, and graph export.
//!
//! Both graphs put pairs (u, b) on the vertices and draw an edge to (w, c)
//! exactly when u ∈ c; the flag graph keeps incident pairs (excluding the
//! self-loop via (u,b) ≠ (w,c)), the anti-flag graph keeps non-incident
//! pairs, where u ∉ b already forbids loops. Certificates are extracted
//! from the exact square of the adjacency matrix, never predicted.

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::verify::Design;

/// A loop-free digraph over (point, block) pairs with its 0/1 adjacency
/// matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    pub kind: &'static str,
    pub vertex_labels: Vec<String>,
    adj: IntMatrix,
    /// Construction notes carried into reports.
    pub notes: Vec<String>,
}

impl Digraph {
    pub fn order(&self) -> usize {
        self.adj.rows()
    }

    pub fn adjacency(&self) -> &IntMatrix {
        &self.adj
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.adj.rows() {
            for j in 0..self.adj.cols() {
                if self.adj.get(i, j) == 1 {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn from_adjacency(adj: IntMatrix, kind: &'static str) -> Result<Digraph> {
        if adj.rows() != adj.cols() {
            return Err(Error::Malformed("adjacency matrix must be square".into()));
        }
        for i in 0..adj.rows() {
            if adj.get(i, i) != 0 {
                return Err(Error::Design(format!("loop at vertex {i}")));
            }
        }
        let labels = (0..adj.rows()).map(|i| i.to_string()).collect();
        Ok(Digraph {
            kind,
            vertex_labels: labels,
            adj,
            notes: Vec::new(),
        })
    }
}

/// Vertices sorted by (point, block content, block index) so numbering is
/// reproducible for any input design.
fn sorted_pairs(design: &Design, incident: bool) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for u in 0..design.v() {
        for (j, block) in design.blocks().iter().enumerate() {
            if block.binary_search(&u).is_ok() == incident {
                pairs.push((u, j));
            }
        }
    }
    pairs.sort_by(|&(u1, j1), &(u2, j2)| {
        (u1, &design.blocks()[j1], j1).cmp(&(u2, &design.blocks()[j2], j2))
    });
    pairs
}

fn build_graph(design: &Design, incident: bool) -> Digraph {
    let pairs = sorted_pairs(design, incident);
    let n = pairs.len();
    let mut adj = IntMatrix::zeros(n, n);
    for (row, &(u, b)) in pairs.iter().enumerate() {
        for (col, &(w, c)) in pairs.iter().enumerate() {
            if (u, b) == (w, c) {
                continue;
            }
            if design.blocks()[c].binary_search(&u).is_ok() {
                adj.set(row, col, 1);
            }
        }
    }
    let labels = pairs
        .iter()
        .map(|&(u, j)| format!("({},b{})", design.point_labels()[u], j))
        .collect();
    let mut notes = Vec::new();
    let kind = if incident {
        "flag"
    } else {
        notes.push("vertex set read as the non-incident pairs u ∉ b".to_string());
        "anti-flag"
    };
    Digraph {
        kind,
        vertex_labels: labels,
        adj,
        notes,
    }
}

/// Flag graph: vertices are incident pairs, edges (u,b) → (w,c) whenever the
/// pairs differ and u ∈ c.
pub fn flag_graph(design: &Design) -> Result<Digraph> {
    design.tactical()?;
    Ok(build_graph(design, true))
}

/// Anti-flag graph: vertices are non-incident pairs, edges whenever u ∈ c.
pub fn antiflag_graph(design: &Design) -> Result<Digraph> {
    design.tactical()?;
    Ok(build_graph(design, false))
}

/// Graph construction without the tactical gate, for mutation experiments
/// where the certificate is expected to fail.
pub fn flag_graph_unchecked(design: &Design) -> Digraph {
    build_graph(design, true)
}

pub fn antiflag_graph_unchecked(design: &Design) -> Digraph {
    build_graph(design, false)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct DsrgCertificate {
    pub v: usize,
    pub k: i64,
    pub t: i64,
    pub lambda: i64,
    pub mu: i64,
}

/// Extract (v,k,t,λ,μ) from row/column sums and the exact square of the
/// adjacency matrix, asserting constancy of every class. The failure message
/// names the first violating vertex pair.
pub fn dsrg_check(graph: &Digraph) -> Result<DsrgCertificate> {
    let a = &graph.adj;
    let n = a.rows();
    for i in 0..n {
        if a.get(i, i) != 0 {
            return Err(Error::Design(format!(
                "loop at vertex {}",
                graph.vertex_labels[i]
            )));
        }
    }

    let row = a.row_sums();
    let k = *row.first().unwrap_or(&0);
    if let Some(i) = row.iter().position(|&s| s != k) {
        return Err(Error::Design(format!(
            "out-degree at {} is {}, expected k = {k}",
            graph.vertex_labels[i], row[i]
        )));
    }
    let col = a.col_sums();
    if let Some(i) = col.iter().position(|&s| s != k) {
        return Err(Error::Design(format!(
            "in-degree at {} is {}, expected k = {k}",
            graph.vertex_labels[i], col[i]
        )));
    }

    let sq = a.mul(a);
    let t = sq.get(0, 0);
    let mut lambda = None;
    let mut mu = None;
    for i in 0..n {
        for j in 0..n {
            let e = sq.get(i, j);
            if i == j {
                if e != t {
                    return Err(Error::Design(format!(
                        "t is not constant: {} at {}, {} at {}",
                        t, graph.vertex_labels[0], e, graph.vertex_labels[i]
                    )));
                }
            } else if a.get(i, j) == 1 {
                match lambda {
                    None => lambda = Some(e),
                    Some(l) if l != e => {
                        return Err(Error::Design(format!(
                            "lambda is not constant: {l} vs {e} at ({}, {})",
                            graph.vertex_labels[i], graph.vertex_labels[j]
                        )))
                    }
                    _ => {}
                }
            } else {
                match mu {
                    None => mu = Some(e),
                    Some(m) if m != e => {
                        return Err(Error::Design(format!(
                            "mu is not constant: {m} vs {e} at ({}, {})",
                            graph.vertex_labels[i], graph.vertex_labels[j]
                        )))
                    }
                    _ => {}
                }
            }
        }
    }
    Ok(DsrgCertificate {
        v: n,
        k,
        t,
        lambda: lambda.unwrap_or(0),
        mu: mu.unwrap_or(0),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    EdgeList,
    Dot,
    Matrix,
}

impl std::str::FromStr for ExportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<ExportFormat> {
        match s {
            "edge-list" => Ok(ExportFormat::EdgeList),
            "dot" => Ok(ExportFormat::Dot),
            "matrix" => Ok(ExportFormat::Matrix),
            _ => Err(Error::Parameter(format!(
                "unknown graph format {s}; expected edge-list, dot or matrix"
            ))),
        }
    }
}

/// Deterministic text export. The edge-list header carries the certificate
/// parameters when one is supplied.
pub fn export_graph(
    graph: &Digraph,
    format: ExportFormat,
    cert: Option<&DsrgCertificate>,
) -> String {
    match format {
        ExportFormat::EdgeList => {
            let mut out = match cert {
                Some(c) => format!(
                    "# dsrg v={} k={} t={} lambda={} mu={}\n",
                    c.v, c.k, c.t, c.lambda, c.mu
                ),
                None => format!("# digraph v={}\n", graph.order()),
            };
            for (i, j) in graph.edges() {
                out.push_str(&format!("{i} {j}\n"));
            }
            out
        }
        ExportFormat::Dot => {
            let mut out = String::from("digraph g {\n");
            for i in 0..graph.order() {
                out.push_str(&format!("  {i};\n"));
            }
            for (i, j) in graph.edges() {
                out.push_str(&format!("  {i} -> {j};\n"));
            }
            out.push_str("}\n");
            out
        }
        ExportFormat::Matrix => {
            let mut out = String::new();
            for i in 0..graph.order() {
                for j in 0..graph.order() {
                    out.push(if graph.adj.get(i, j) == 1 { '1' } else { '0' });
                }
                out.push('\n');
            }
            out
        }
    }
}

/// Read a 0/1 grid (the `matrix` export) back into a matrix.
pub fn parse_matrix_grid(text: &str) -> Result<IntMatrix> {
    let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    if lines.is_empty() {
        return Err(Error::Malformed("empty matrix grid".into()));
    }
    let cols = lines[0].trim().len();
    let mut m = IntMatrix::zeros(lines.len(), cols);
    for (i, line) in lines.iter().enumerate() {
        let line = line.trim();
        if line.len() != cols {
            return Err(Error::Malformed(format!(
                "row {i} has {} entries, expected {cols}",
                line.len()
            )));
        }
        for (j, ch) in line.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => m.set(i, j, 1),
                _ => {
                    return Err(Error::Malformed(format!(
                        "matrix grid entries must be 0/1, found {ch}"
                    )))
                }
            }
        }
    }
    Ok(m)
}

/// Read the `dot` export back into an adjacency matrix.
pub fn parse_dot(text: &str) -> Result<IntMatrix> {
    let mut n = 0usize;
    let mut edges = Vec::new();
    for line in text.lines() {
        let line = line.trim().trim_end_matches(';');
        if line.is_empty() || line.starts_with("digraph") || line == "}" {
            continue;
        }
        if let Some((a, b)) = line.split_once("->") {
            let i: usize = a
                .trim()
                .parse()
                .map_err(|_| Error::Malformed(format!("bad dot edge: {line}")))?;
            let j: usize = b
                .trim()
                .parse()
                .map_err(|_| Error::Malformed(format!("bad dot edge: {line}")))?;
            edges.push((i, j));
        } else {
            let i: usize = line
                .parse()
                .map_err(|_| Error::Malformed(format!("bad dot node: {line}")))?;
            n = n.max(i + 1);
        }
    }
    let mut m = IntMatrix::zeros(n, n);
    for (i, j) in edges {
        if i >= n || j >= n {
            return Err(Error::Malformed("dot edge names an undeclared vertex".into()));
        }
        m.set(i, j, 1);
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair_design_3() -> Design {
        Design::new(
            vec!["1".into(), "2".into(), "3".into()],
            vec![vec![0, 1], vec![0, 2], vec![1, 2]],
        )
        .unwrap()
    }

    #[test]
    fn flag_graph_of_pair_design() {
        let d = pair_design_3();
        let g = flag_graph(&d).unwrap();
        assert_eq!(g.order(), 6);
        // every out-degree is rk - 1 = 3
        assert!(g.adjacency().row_sums().iter().all(|&s| s == 3));
        // hand-squared 6x6 adjacency gives (6,3,2,1,2)
        let cert = dsrg_check(&g).unwrap();
        assert_eq!(
            cert,
            DsrgCertificate {
                v: 6,
                k: 3,
                t: 2,
                lambda: 1,
                mu: 2
            }
        );
    }

    #[test]
    fn antiflag_graph_of_pair_design() {
        let d = pair_design_3();
        let g = antiflag_graph(&d).unwrap();
        assert_eq!(g.order(), 3);
        assert_eq!(g.edges().len(), 6);
        // complete bidirected triangle: no non-adjacent pairs, mu defaults 0
        let cert = dsrg_check(&g).unwrap();
        assert_eq!(
            cert,
            DsrgCertificate {
                v: 3,
                k: 2,
                t: 2,
                lambda: 1,
                mu: 0
            }
        );
    }

    #[test]
    fn unequal_row_sums_fail() {
        let mut adj = IntMatrix::zeros(3, 3);
        adj.set(0, 1, 1);
        let g = Digraph::from_adjacency(adj, "custom").unwrap();
        assert!(dsrg_check(&g).is_err());
    }

    #[test]
    fn non_tactical_design_rejected_at_graph_build() {
        let d = Design::new(
            vec!["1".into(), "2".into(), "3".into()],
            vec![vec![0, 1], vec![0, 2]],
        )
        .unwrap();
        assert!(flag_graph(&d).is_err());
        assert!(antiflag_graph(&d).is_err());
    }

    #[test]
    fn single_block_design_graph_still_builds() {
        // block = all points: tactical with r = 1, k = v
        let d = Design::new(
            vec!["1".into(), "2".into(), "3".into()],
            vec![vec![0, 1, 2]],
        )
        .unwrap();
        let g = flag_graph(&d).unwrap();
        assert_eq!(g.order(), 3);
        assert!(dsrg_check(&g).is_ok());
    }

    #[test]
    fn export_round_trips() {
        let d = pair_design_3();
        let g = flag_graph(&d).unwrap();

        let grid = export_graph(&g, ExportFormat::Matrix, None);
        let parsed = parse_matrix_grid(&grid).unwrap();
        assert_eq!(&parsed, g.adjacency());

        let dot = export_graph(&g, ExportFormat::Dot, None);
        let from_dot = parse_dot(&dot).unwrap();
        assert_eq!(from_dot, parsed);

        let cert = dsrg_check(&g).unwrap();
        let el = export_graph(&g, ExportFormat::EdgeList, Some(&cert));
        assert!(el.starts_with("# dsrg v=6 k=3 t=2 lambda=1 mu=2\n"));
        assert_eq!(el.lines().count(), 1 + g.edges().len());
    }

    #[test]
    fn empty_edge_digraph_exports_header_only() {
        let g = Digraph::from_adjacency(IntMatrix::zeros(2, 2), "custom").unwrap();
        let el = export_graph(&g, ExportFormat::EdgeList, None);
        assert_eq!(el, "# digraph v=2\n");
    }

    #[test]
    fn one_bit_mutation_breaks_a_certificate() {
        let d = pair_design_3();
        let flags_ok = dsrg_check(&flag_graph(&d).unwrap()).is_ok();
        let anti_ok = dsrg_check(&antiflag_graph(&d).unwrap()).is_ok();
        assert!(flags_ok && anti_ok);

        let mutated = d.flip_incidence(2, 0);
        let flag_fail = dsrg_check(&flag_graph_unchecked(&mutated)).is_err();
        let anti_fail = dsrg_check(&antiflag_graph_unchecked(&mutated)).is_err();
        assert!(flag_fail || anti_fail);
    }
}
