//! Nation-to-nation collaboration graphs for one (specialty, year) slice.
//!
//! Every internationally coauthored record adds one to the co-publication
//! count of each unordered country pair it contains (full counting).
//! Edge weights are Salton cosines `n_ij / sqrt(n_i * n_j)`, where `n_i` is the
//! number of international records in the slice involving country `i`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{PublicationRecord, ALL_FIELDS};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IsolatePolicy {
    Keep,
    #[default]
    Drop,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMode {
    #[default]
    Edges,
    /// Legacy convention: every undirected link counted once per direction.
    Arcs,
}

impl FromStr for IsolatePolicy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "keep" => Ok(Self::Keep),
            "drop" => Ok(Self::Drop),
            _ => Err(Error::Invalid(format!(
                "isolate policy {s:?}; expected keep or drop"
            ))),
        }
    }
}

impl FromStr for CountMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edges" => Ok(Self::Edges),
            "arcs" => Ok(Self::Arcs),
            _ => Err(Error::Invalid(format!(
                "count mode {s:?}; expected edges or arcs"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    GraphMl,
    Dot,
    EdgeListCsv,
}

impl FromStr for ExportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "graphml" => Ok(Self::GraphMl),
            "dot" => Ok(Self::Dot),
            "csv" | "edgelist_csv" | "edgelist" => Ok(Self::EdgeListCsv),
            _ => Err(Error::UnknownFormat(s.to_string())),
        }
    }
}

impl fmt::Display for ExportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::GraphMl => "graphml",
            Self::Dot => "dot",
            Self::EdgeListCsv => "csv",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub copub_count: u64,
    pub cosine: f64,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct BuildOptions {
    pub isolate_policy: IsolatePolicy,
    pub count_mode: CountMode,
    /// Accept records from any specialty and label the network `All-Fields`.
    pub all_fields: bool,
}

/// Undirected country graph. Node indices refer to `nodes`, which is sorted.
/// Edge keys are `(i, j)` with `i < j`.
#[derive(Debug, Clone, PartialEq)]
pub struct CollabNetwork {
    pub specialty: String,
    pub year: i32,
    pub nodes: Vec<String>,
    pub edges: BTreeMap<(usize, usize), Edge>,
    /// `n_i` per node; `None` when the network was loaded from an edge list.
    pub node_strength: Option<Vec<u64>>,
    pub isolate_policy: IsolatePolicy,
    pub count_mode: CountMode,
}

impl CollabNetwork {
    pub fn build(records: &[&PublicationRecord], opts: BuildOptions) -> Result<Self> {
        let first = records.first().ok_or(Error::EmptySlice)?;
        let year = first.year;
        if let Some(r) = records.iter().find(|r| r.year != year) {
            return Err(Error::MixedSlice(format!("years {} and {}", year, r.year)));
        }
        let specialty = if opts.all_fields {
            ALL_FIELDS.to_string()
        } else {
            if let Some(r) = records.iter().find(|r| r.specialty != first.specialty) {
                return Err(Error::MixedSlice(format!(
                    "specialties {:?} and {:?}",
                    first.specialty, r.specialty
                )));
            }
            first.specialty.clone()
        };

        let mut pair_counts: BTreeMap<(&str, &str), u64> = BTreeMap::new();
        let mut strength: BTreeMap<&str, u64> = BTreeMap::new();
        let mut seen: BTreeSet<&str> = BTreeSet::new();
        for rec in records {
            let codes: Vec<&str> = rec.countries.iter().map(String::as_str).collect();
            seen.extend(codes.iter().copied());
            if codes.len() < 2 {
                continue;
            }
            for (a, &ci) in codes.iter().enumerate() {
                *strength.entry(ci).or_default() += 1;
                for &cj in &codes[a + 1..] {
                    *pair_counts.entry((ci, cj)).or_default() += 1;
                }
            }
        }

        let nodes: Vec<String> = match opts.isolate_policy {
            IsolatePolicy::Keep => seen.iter().map(|s| s.to_string()).collect(),
            IsolatePolicy::Drop => strength.keys().map(|s| s.to_string()).collect(),
        };
        let index: BTreeMap<&str, usize> = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        let node_strength = nodes
            .iter()
            .map(|n| strength.get(n.as_str()).copied().unwrap_or(0))
            .collect();
        let edges = pair_counts
            .into_iter()
            .map(|((a, b), copub_count)| {
                (
                    (index[a], index[b]),
                    Edge {
                        copub_count,
                        cosine: 0.0,
                    },
                )
            })
            .collect();

        let mut net = CollabNetwork {
            specialty,
            year,
            nodes,
            edges,
            node_strength: Some(node_strength),
            isolate_policy: opts.isolate_policy,
            count_mode: opts.count_mode,
        };
        net.cosine_weights()?;
        Ok(net)
    }

    /// Fills `cosine` on every edge from co-publication counts and node strengths.
    pub fn cosine_weights(&mut self) -> Result<()> {
        let strength = self
            .node_strength
            .as_ref()
            .ok_or_else(|| Error::Internal("node strengths unavailable".into()))?;
        for (&(i, j), edge) in self.edges.iter_mut() {
            let (ni, nj) = (strength[i], strength[j]);
            if ni == 0 || nj == 0 {
                return Err(Error::Internal(format!(
                    "edge {}-{} has an endpoint with zero strength",
                    self.nodes[i], self.nodes[j]
                )));
            }
            edge.cosine = edge.copub_count as f64 / ((ni as f64) * (nj as f64)).sqrt();
        }
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Stored undirected edges.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edge count under the network's counting convention.
    pub fn reported_edge_count(&self) -> usize {
        match self.count_mode {
            CountMode::Edges => self.edges.len(),
            CountMode::Arcs => 2 * self.edges.len(),
        }
    }

    pub fn weight(&self, a: &str, b: &str) -> Option<&Edge> {
        let i = self.nodes.binary_search_by(|n| n.as_str().cmp(a)).ok()?;
        let j = self.nodes.binary_search_by(|n| n.as_str().cmp(b)).ok()?;
        self.edges.get(&(i.min(j), i.max(j)))
    }

    /// Loads an edge list with columns `source,target[,copub_count[,cosine]]`.
    /// Missing counts default to 1 and missing cosines to 0.
    pub fn from_edgelist_csv<R: std::io::Read>(
        reader: R,
        has_header: bool,
        specialty: &str,
        year: i32,
    ) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(has_header)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut raw: Vec<(String, String, Edge)> = Vec::new();
        for row in rdr.records() {
            let row = row?;
            if row.len() < 2 {
                return Err(Error::Invalid(format!(
                    "edge row needs source,target: {row:?}"
                )));
            }
            let (a, b) = (row[0].to_string(), row[1].to_string());
            if a == b {
                return Err(Error::Invalid(format!("self-loop on {a}")));
            }
            let copub_count = match row.get(2).filter(|s| !s.is_empty()) {
                Some(s) => s
                    .parse::<u64>()
                    .map_err(|e| Error::Invalid(format!("copub_count {s:?}: {e}")))?,
                None => 1,
            };
            let cosine = match row.get(3).filter(|s| !s.is_empty()) {
                Some(s) => s
                    .parse::<f64>()
                    .map_err(|e| Error::Invalid(format!("cosine {s:?}: {e}")))?,
                None => 0.0,
            };
            raw.push((
                a,
                b,
                Edge {
                    copub_count,
                    cosine,
                },
            ));
        }
        let nodes: Vec<String> = raw
            .iter()
            .flat_map(|(a, b, _)| [a.clone(), b.clone()])
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let index: BTreeMap<&str, usize> = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        let mut edges = BTreeMap::new();
        for (a, b, e) in &raw {
            let (i, j) = (index[a.as_str()], index[b.as_str()]);
            if edges.insert((i.min(j), i.max(j)), *e).is_some() {
                return Err(Error::Invalid(format!("duplicate edge {a}-{b}")));
            }
        }
        Ok(CollabNetwork {
            specialty: specialty.to_string(),
            year,
            nodes,
            edges,
            node_strength: None,
            isolate_policy: IsolatePolicy::Drop,
            count_mode: CountMode::Edges,
        })
    }

    /// Serializes nodes and edges in lexicographic country-code order.
    pub fn export<W: Write>(&self, format: ExportFormat, header: bool, w: &mut W) -> Result<()> {
        match format {
            ExportFormat::EdgeListCsv => self.write_csv(header, w),
            ExportFormat::GraphMl => self.write_graphml(w),
            ExportFormat::Dot => self.write_dot(w),
        }
    }

    pub fn export_to_vec(&self, format: ExportFormat) -> Result<Vec<u8>> {
        let mut buf = Vec::new();
        self.export(format, true, &mut buf)?;
        Ok(buf)
    }

    fn write_csv<W: Write>(&self, header: bool, w: &mut W) -> Result<()> {
        if header {
            w.write_all(b"source,target,copub_count,cosine\n")?;
        }
        for (&(i, j), e) in &self.edges {
            writeln!(
                w,
                "{},{},{},{:?}",
                self.nodes[i], self.nodes[j], e.copub_count, e.cosine
            )?;
        }
        Ok(())
    }

    fn write_graphml<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, r#"<?xml version="1.0" encoding="UTF-8"?>"#)?;
        writeln!(
            w,
            r#"<graphml xmlns="http://graphml.graphdrawing.org/xmlns" xmlns:xsi="http://www.w3.org/2001/XMLSchema-instance" xsi:schemaLocation="http://graphml.graphdrawing.org/xmlns http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd">"#
        )?;
        writeln!(
            w,
            r#"  <key id="specialty" for="graph" attr.name="specialty" attr.type="string"/>"#
        )?;
        writeln!(
            w,
            r#"  <key id="year" for="graph" attr.name="year" attr.type="int"/>"#
        )?;
        writeln!(
            w,
            r#"  <key id="copub_count" for="edge" attr.name="copub_count" attr.type="long"/>"#
        )?;
        writeln!(
            w,
            r#"  <key id="cosine" for="edge" attr.name="cosine" attr.type="double"/>"#
        )?;
        writeln!(w, r#"  <graph id="G" edgedefault="undirected">"#)?;
        writeln!(
            w,
            r#"    <data key="specialty">{}</data>"#,
            xml_escape(&self.specialty)
        )?;
        writeln!(w, r#"    <data key="year">{}</data>"#, self.year)?;
        for n in &self.nodes {
            writeln!(w, r#"    <node id="{}"/>"#, xml_escape(n))?;
        }
        for (&(i, j), e) in &self.edges {
            writeln!(
                w,
                r#"    <edge source="{}" target="{}"><data key="copub_count">{}</data><data key="cosine">{:?}</data></edge>"#,
                xml_escape(&self.nodes[i]),
                xml_escape(&self.nodes[j]),
                e.copub_count,
                e.cosine
            )?;
        }
        writeln!(w, "  </graph>")?;
        writeln!(w, "</graphml>")?;
        Ok(())
    }

    fn write_dot<W: Write>(&self, w: &mut W) -> Result<()> {
        let name = if self.specialty.is_empty() {
            "G".to_string()
        } else {
            format!("{} {}", self.specialty, self.year)
        };
        writeln!(w, "graph {} {{", dot_quote(&name))?;
        for n in &self.nodes {
            writeln!(w, "  {};", dot_quote(n))?;
        }
        for (&(i, j), e) in &self.edges {
            writeln!(
                w,
                "  {} -- {} [copub_count={}, cosine={:?}];",
                dot_quote(&self.nodes[i]),
                dot_quote(&self.nodes[j]),
                e.copub_count,
                e.cosine
            )?;
        }
        writeln!(w, "}}")?;
        Ok(())
    }
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

fn dot_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}
