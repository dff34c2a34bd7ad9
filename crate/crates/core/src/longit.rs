//! Change tables and convergence shares across snapshot years.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::NetworkStats;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrendPoint {
    pub year: i32,
    pub nodes: usize,
    pub edges: usize,
    pub diameter: Option<usize>,
}

impl From<&NetworkStats> for TrendPoint {
    fn from(s: &NetworkStats) -> Self {
        TrendPoint {
            year: s.year,
            nodes: s.n_nodes,
            edges: s.n_edges,
            diameter: Some(s.diameter),
        }
    }
}

/// One specialty's snapshots, strictly increasing in year.
#[derive(Debug, Clone, PartialEq)]
pub struct TrendSeries {
    pub specialty: String,
    points: Vec<TrendPoint>,
}

impl TrendSeries {
    pub fn new(specialty: impl Into<String>, mut points: Vec<TrendPoint>) -> Result<Self> {
        let specialty = specialty.into();
        points.sort_by_key(|p| p.year);
        if let Some(w) = points.windows(2).find(|w| w[0].year == w[1].year) {
            return Err(Error::Invalid(format!(
                "{specialty}: year {} appears twice",
                w[0].year
            )));
        }
        if points.is_empty() {
            return Err(Error::Invalid(format!("{specialty}: no snapshots")));
        }
        Ok(TrendSeries { specialty, points })
    }

    pub fn points(&self) -> &[TrendPoint] {
        &self.points
    }

    pub fn years(&self) -> Vec<i32> {
        self.points.iter().map(|p| p.year).collect()
    }

    /// `nodes_t / nodes_final`
    pub fn node_shares(&self) -> Vec<f64> {
        let last = self.points.last().unwrap().nodes as f64;
        self.points.iter().map(|p| p.nodes as f64 / last).collect()
    }

    /// `edges_t / edges_final`
    pub fn edge_shares(&self) -> Vec<f64> {
        let last = self.points.last().unwrap().edges as f64;
        self.points.iter().map(|p| p.edges as f64 / last).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DiameterTrend {
    Decrease,
    NoChange,
    Increase,
}

impl DiameterTrend {
    /// Cell text as printed in the change table.
    pub fn label(self) -> &'static str {
        match self {
            Self::Decrease => "Decrease",
            Self::NoChange => "no change",
            Self::Increase => "Increase",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Growth {
    pub node_change: i64,
    pub edge_growth_pct: f64,
    /// Percent growth rounded half-up to an integer, computed exactly.
    pub edge_growth_pct_rounded: i64,
    pub diameter_trend: Option<DiameterTrend>,
}

fn round_half_up_ratio(num: i128, den: i128) -> i64 {
    (2 * num + den).div_euclid(2 * den) as i64
}

/// First-versus-last comparison; intermediate years are ignored.
pub fn growth(series: &TrendSeries) -> Result<Growth> {
    let pts = series.points();
    if pts.len() < 2 {
        return Err(Error::Invalid(format!(
            "{}: growth needs at least two years",
            series.specialty
        )));
    }
    let (first, last) = (pts[0], pts[pts.len() - 1]);
    if first.edges == 0 {
        return Err(Error::Invalid(format!(
            "{}: no edges in {}, growth undefined",
            series.specialty, first.year
        )));
    }
    let diff = last.edges as i128 - first.edges as i128;
    let diameter_trend = match (first.diameter, last.diameter) {
        (Some(a), Some(b)) => Some(match b.cmp(&a) {
            std::cmp::Ordering::Less => DiameterTrend::Decrease,
            std::cmp::Ordering::Equal => DiameterTrend::NoChange,
            std::cmp::Ordering::Greater => DiameterTrend::Increase,
        }),
        _ => None,
    };
    Ok(Growth {
        node_change: last.nodes as i64 - first.nodes as i64,
        edge_growth_pct: 100.0 * diff as f64 / first.edges as f64,
        edge_growth_pct_rounded: round_half_up_ratio(100 * diff, first.edges as i128),
        diameter_trend,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShareCurve {
    pub specialty: String,
    pub node_shares: Vec<f64>,
    pub edge_shares: Vec<f64>,
    /// False when some node share falls from one year to the next.
    pub monotone: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Convergence {
    pub years: Vec<i32>,
    pub curves: Vec<ShareCurve>,
    /// Mean node share across specialties per year.
    pub pooled_node_shares: Vec<f64>,
    pub pooled_edge_shares: Vec<f64>,
}

impl Convergence {
    pub fn non_monotone(&self) -> impl Iterator<Item = &str> {
        self.curves
            .iter()
            .filter(|c| !c.monotone)
            .map(|c| c.specialty.as_str())
    }
}

pub fn convergence(series: &[TrendSeries]) -> Result<Convergence> {
    let first = series
        .first()
        .ok_or_else(|| Error::Invalid("no series".into()))?;
    let years = first.years();
    if let Some(s) = series.iter().find(|s| s.years() != years) {
        return Err(Error::Invalid(format!(
            "year grid of {} ({:?}) differs from {} ({:?})",
            s.specialty,
            s.years(),
            first.specialty,
            years
        )));
    }
    let curves: Vec<ShareCurve> = series
        .iter()
        .map(|s| {
            let node_shares = s.node_shares();
            let monotone = node_shares.windows(2).all(|w| w[1] >= w[0]);
            ShareCurve {
                specialty: s.specialty.clone(),
                edge_shares: s.edge_shares(),
                node_shares,
                monotone,
            }
        })
        .collect();
    let pooled = |f: fn(&ShareCurve) -> &Vec<f64>| -> Vec<f64> {
        (0..years.len())
            .map(|t| curves.iter().map(|c| f(c)[t]).sum::<f64>() / curves.len() as f64)
            .collect()
    };
    Ok(Convergence {
        pooled_node_shares: pooled(|c| &c.node_shares),
        pooled_edge_shares: pooled(|c| &c.edge_shares),
        years,
        curves,
    })
}

#[derive(Debug, Deserialize)]
struct StatsRow {
    specialty: String,
    year: i32,
    nodes: usize,
    edges: usize,
    #[serde(default)]
    diameter: Option<usize>,
}

/// Reads stats CSV rows (at least `specialty,year,nodes,edges`, optionally
/// `diameter`; other columns ignored) into per-specialty series, in order of
/// first appearance.
pub fn read_series_csv<R: std::io::Read>(
    readers: impl IntoIterator<Item = R>,
) -> Result<Vec<TrendSeries>> {
    let mut order: Vec<String> = Vec::new();
    let mut points: BTreeMap<String, Vec<TrendPoint>> = BTreeMap::new();
    for reader in readers {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        for row in rdr.deserialize() {
            let row: StatsRow = row?;
            if !points.contains_key(&row.specialty) {
                order.push(row.specialty.clone());
            }
            points.entry(row.specialty).or_default().push(TrendPoint {
                year: row.year,
                nodes: row.nodes,
                edges: row.edges,
                diameter: row.diameter,
            });
        }
    }
    order
        .into_iter()
        .map(|s| {
            let pts = points.remove(&s).unwrap();
            TrendSeries::new(s, pts)
        })
        .collect()
}

pub const TREND_CSV_HEADER: &str =
    "specialty,year,nodes,edges,node_share,edge_share,diameter,node_change,edge_growth_pct,diameter_trend";

/// One row per (specialty, year); growth columns filled on the final year.
pub fn write_trend_csv<W: Write>(series: &[TrendSeries], mut w: W) -> Result<()> {
    writeln!(w, "{TREND_CSV_HEADER}")?;
    let mut wtr = csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(&mut w);
    for s in series {
        let g = growth(s).ok();
        let (ns, es) = (s.node_shares(), s.edge_shares());
        let last = s.points().len() - 1;
        for (t, p) in s.points().iter().enumerate() {
            let (nc, eg, dt) = match (t == last, g) {
                (true, Some(g)) => (
                    g.node_change.to_string(),
                    g.edge_growth_pct.to_string(),
                    g.diameter_trend
                        .map(|d| d.label().to_string())
                        .unwrap_or_default(),
                ),
                _ => Default::default(),
            };
            wtr.write_record([
                s.specialty.clone(),
                p.year.to_string(),
                p.nodes.to_string(),
                p.edges.to_string(),
                ns[t].to_string(),
                es[t].to_string(),
                p.diameter.map(|d| d.to_string()).unwrap_or_default(),
                nc,
                eg,
                dt,
            ])?;
        }
    }
    wtr.flush()?;
    Ok(())
}

/// Node/edge/diameter rows per specialty with a first-to-last change column.
pub fn render_table2(series: &[TrendSeries]) -> Result<String> {
    let years = series.first().map(|s| s.years()).unwrap_or_default();
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut header = vec!["Field".to_string(), "Net Measure".to_string()];
    header.extend(years.iter().map(|y| y.to_string()));
    header.push(match (years.first(), years.last()) {
        (Some(a), Some(b)) => format!("Change between {a} and {b}"),
        _ => "Change".to_string(),
    });
    rows.push(header);
    for s in series {
        if s.years() != years {
            return Err(Error::Invalid(format!(
                "{}: year grid differs",
                s.specialty
            )));
        }
        let g = growth(s)?;
        let mut nodes = vec![s.specialty.clone(), "Nodes".into()];
        nodes.extend(s.points().iter().map(|p| p.nodes.to_string()));
        nodes.push(g.node_change.to_string());
        let mut edges = vec![String::new(), "Edges".into()];
        edges.extend(s.points().iter().map(|p| p.edges.to_string()));
        edges.push(format!("{}%", g.edge_growth_pct_rounded));
        let mut diam = vec![String::new(), "Diameter".into()];
        diam.extend(
            s.points()
                .iter()
                .map(|p| p.diameter.map(|d| d.to_string()).unwrap_or_default()),
        );
        diam.push(
            g.diameter_trend
                .map(|d| d.label().to_string())
                .unwrap_or_default(),
        );
        rows.extend([nodes, edges, diam]);
    }
    let cols = rows[0].len();
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for r in &rows {
        let cells: Vec<String> = r
            .iter()
            .enumerate()
            .map(|(c, v)| {
                if c < 2 {
                    format!("{v:<w$}", w = widths[c])
                } else {
                    format!("{v:>w$}", w = widths[c])
                }
            })
            .collect();
        let _ = writeln!(out, "{}", cells.join("  ").trim_end());
    }
    Ok(out)
}
