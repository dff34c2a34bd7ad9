//! Seeded synthetic corpora grown by preferential attachment.
//!
//! Randomness comes from ChaCha20 (`rand_chacha::ChaCha20Rng`), a counter-based
//! generator. Structural draws (year, journal, team size, countries) use
//! stream 0 and citation draws use stream 1, so changing the citation model or
//! the attachment strength never shifts the other stream.
//!
//! A paper picks its countries one at a time, without replacement, with
//! probability proportional to `(participation + 1)^attachment_strength`,
//! where `participation` counts the country's earlier papers.

use std::collections::BTreeMap;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Gamma, Poisson};
use serde::{Deserialize, Serialize};

use crate::corpus::{PublicationRecord, SpecialtyMap, OTHER};
use crate::countries;
use crate::error::{Error, Result};
use crate::metrics::Graph;
use crate::netbuild::{BuildOptions, CollabNetwork};

const STRUCTURE_STREAM: u64 = 0;
const CITATION_STREAM: u64 = 1;

/// Journals outside the specialty map, so `other` records exist too.
const GENERAL_JOURNALS: [&str; 3] = ["Nature", "Science", "PLOS ONE"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CitationCell {
    pub field: String,
    pub year: i32,
    pub doctype: String,
    pub mean: f64,
}

/// Negative-binomial citation counts: Poisson with a Gamma-distributed rate of
/// mean `mean` and shape `dispersion` (variance `mean + mean² / dispersion`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CitationModel {
    #[serde(default)]
    pub cells: Vec<CitationCell>,
    pub default_mean: f64,
    pub dispersion: f64,
}

impl Default for CitationModel {
    fn default() -> Self {
        CitationModel {
            cells: Vec::new(),
            default_mean: 8.0,
            dispersion: 1.5,
        }
    }
}

impl CitationModel {
    fn mean_for(&self, field: &str, year: i32, doctype: &str) -> f64 {
        self.cells
            .iter()
            .find(|c| c.field == field && c.year == year && c.doctype == doctype)
            .map(|c| c.mean)
            .unwrap_or(self.default_mean)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub seed: u64,
    pub n_countries: usize,
    pub n_papers: usize,
    pub years: Vec<i32>,
    /// `(team size in countries, probability)`.
    pub countries_per_paper: Vec<(usize, f64)>,
    pub attachment_strength: f64,
    #[serde(default)]
    pub citation_model: CitationModel,
    #[serde(default = "default_doctypes")]
    pub doctypes: Vec<String>,
}

fn default_doctypes() -> Vec<String> {
    vec!["ar".into(), "re".into()]
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 42,
            n_countries: 120,
            n_papers: 5000,
            years: vec![2008, 2013],
            countries_per_paper: vec![(1, 0.35), (2, 0.35), (3, 0.15), (4, 0.1), (5, 0.05)],
            attachment_strength: 1.0,
            citation_model: CitationModel::default(),
            doctypes: default_doctypes(),
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_countries < 2 {
            return Err(Error::Config("n_countries must be at least 2".into()));
        }
        if self.n_papers < 1 {
            return Err(Error::Config("n_papers must be at least 1".into()));
        }
        if self.years.is_empty() || self.doctypes.is_empty() {
            return Err(Error::Config("years and doctypes must be non-empty".into()));
        }
        if self.countries_per_paper.is_empty() {
            return Err(Error::Config("countries_per_paper is empty".into()));
        }
        let total: f64 = self.countries_per_paper.iter().map(|(_, p)| p).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Config(format!(
                "countries_per_paper sums to {total}, not 1"
            )));
        }
        for &(k, p) in &self.countries_per_paper {
            if k == 0 || p.is_nan() || p < 0.0 {
                return Err(Error::Config(format!("bad team-size entry ({k}, {p})")));
            }
            if k > self.n_countries {
                return Err(Error::Config(format!(
                    "team size {k} exceeds n_countries {}",
                    self.n_countries
                )));
            }
        }
        if !self.attachment_strength.is_finite() || self.attachment_strength < 0.0 {
            return Err(Error::Config(
                "attachment_strength must be finite and >= 0".into(),
            ));
        }
        let cm = &self.citation_model;
        let bad_mean = |m: f64| m.is_nan() || m < 0.0;
        if cm.dispersion.is_nan()
            || cm.dispersion <= 0.0
            || bad_mean(cm.default_mean)
            || cm.cells.iter().any(|c| bad_mean(c.mean))
        {
            return Err(Error::Config(
                "citation means must be >= 0 and dispersion > 0".into(),
            ));
        }
        Ok(())
    }
}

/// Fenwick tree over non-negative weights supporting proportional sampling.
struct WeightTree {
    tree: Vec<f64>,
    weights: Vec<f64>,
}

impl WeightTree {
    fn new(weights: Vec<f64>) -> Self {
        let mut t = WeightTree {
            tree: vec![0.0; weights.len() + 1],
            weights: vec![0.0; weights.len()],
        };
        for (i, w) in weights.into_iter().enumerate() {
            t.set(i, w);
        }
        t
    }

    fn set(&mut self, i: usize, w: f64) {
        let delta = w - self.weights[i];
        self.weights[i] = w;
        let mut k = i + 1;
        while k < self.tree.len() {
            self.tree[k] += delta;
            k += k & k.wrapping_neg();
        }
    }

    fn total(&self) -> f64 {
        let mut k = self.weights.len();
        let mut s = 0.0;
        while k > 0 {
            s += self.tree[k];
            k &= k - 1;
        }
        s
    }

    /// Index whose cumulative interval contains `target` in `[0, total)`.
    fn find(&self, mut target: f64) -> usize {
        let n = self.weights.len();
        let mut pos = 0;
        let mut step = n.next_power_of_two();
        while step > 0 {
            let next = pos + step;
            if next <= n && self.tree[next] <= target {
                target -= self.tree[next];
                pos = next;
            }
            step >>= 1;
        }
        // rounding can land on a zero-weight slot; walk to the nearest live one
        let mut i = pos.min(n - 1);
        if self.weights[i] == 0.0 {
            if let Some(j) = (i..n).find(|&j| self.weights[j] > 0.0) {
                i = j;
            } else if let Some(j) = (0..i).rev().find(|&j| self.weights[j] > 0.0) {
                i = j;
            }
        }
        i
    }
}

fn attachment_weight(participation: u64, strength: f64) -> f64 {
    ((participation + 1) as f64).powf(strength)
}

fn draw_size<R: Rng>(table: &[(usize, f64)], rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for &(k, p) in table {
        acc += p;
        if u < acc {
            return k;
        }
    }
    table.last().unwrap().0
}

/// Preferential-attachment draws over country indices. Returns each paper's
/// countries in draw order and the final participation counts.
pub fn simulate_attachment(
    n_countries: usize,
    n_papers: usize,
    countries_per_paper: &[(usize, f64)],
    attachment_strength: f64,
    seed: u64,
) -> (Vec<Vec<usize>>, Vec<u64>) {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(STRUCTURE_STREAM);
    let mut papers = Vec::with_capacity(n_papers);
    let mut participation = vec![0u64; n_countries];
    let mut tree = WeightTree::new(vec![1.0; n_countries]);
    for _ in 0..n_papers {
        let size = draw_size(countries_per_paper, &mut rng);
        let picked = pick_countries(&mut tree, size, &mut rng);
        for &c in &picked {
            participation[c] += 1;
            tree.set(c, attachment_weight(participation[c], attachment_strength));
        }
        papers.push(picked);
    }
    (papers, participation)
}

fn pick_countries<R: Rng>(tree: &mut WeightTree, size: usize, rng: &mut R) -> Vec<usize> {
    let mut picked = Vec::with_capacity(size);
    let mut saved = Vec::with_capacity(size);
    for _ in 0..size {
        let u: f64 = rng.random();
        let c = tree.find(u * tree.total());
        saved.push(tree.weights[c]);
        tree.set(c, 0.0);
        picked.push(c);
    }
    for (&c, &w) in picked.iter().zip(&saved) {
        tree.set(c, w);
    }
    picked
}

/// One generated paper with every random draw that produced it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruthEntry {
    pub id: String,
    pub year: i32,
    pub journal: String,
    pub specialty: String,
    pub field: String,
    pub doctype: String,
    /// Country codes in draw order.
    pub countries: Vec<String>,
    pub citations: u64,
}

impl TruthEntry {
    pub fn to_record(&self) -> PublicationRecord {
        PublicationRecord {
            id: self.id.clone(),
            year: self.year,
            journal: self.journal.clone(),
            specialty: self.specialty.clone(),
            field: self.field.clone(),
            doctype: self.doctype.clone(),
            countries: self.countries.iter().cloned().collect(),
            citations: self.citations,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Generated {
    pub entries: Vec<TruthEntry>,
}

/// Discipline key used as the FWCI field for a specialty label.
pub fn field_key(specialty: &str) -> String {
    if specialty == OTHER {
        "general".to_string()
    } else {
        specialty.to_lowercase().replace(' ', "_")
    }
}

pub fn generate(config: &GenConfig) -> Result<Generated> {
    config.validate()?;
    let universe = countries::universe();
    if config.n_countries > universe.len() {
        return Err(Error::Config(format!(
            "n_countries {} exceeds the {} known country codes",
            config.n_countries,
            universe.len()
        )));
    }
    let codes = &universe[..config.n_countries];
    let map = SpecialtyMap::bundled();
    let mut journals: Vec<(String, String)> = map
        .iter()
        .map(|(j, s)| (j.to_string(), s.to_string()))
        .collect();
    journals.extend(
        GENERAL_JOURNALS
            .iter()
            .map(|j| (j.to_string(), OTHER.to_string())),
    );

    let mut rng = ChaCha20Rng::seed_from_u64(config.seed);
    rng.set_stream(STRUCTURE_STREAM);
    let mut cite_rng = ChaCha20Rng::seed_from_u64(config.seed);
    cite_rng.set_stream(CITATION_STREAM);

    let mut participation = vec![0u64; config.n_countries];
    let mut tree = WeightTree::new(vec![1.0; config.n_countries]);
    let width = config.n_papers.to_string().len().max(6);
    let mut entries = Vec::with_capacity(config.n_papers);
    for i in 0..config.n_papers {
        let year = config.years[rng.random_range(0..config.years.len())];
        let (journal, specialty) = &journals[rng.random_range(0..journals.len())];
        let doctype = &config.doctypes[rng.random_range(0..config.doctypes.len())];
        let size = draw_size(&config.countries_per_paper, &mut rng);
        let picked = pick_countries(&mut tree, size, &mut rng);
        for &c in &picked {
            participation[c] += 1;
            tree.set(
                c,
                attachment_weight(participation[c], config.attachment_strength),
            );
        }
        let field = field_key(specialty);
        let mean = config.citation_model.mean_for(&field, year, doctype);
        let citations = draw_citations(mean, config.citation_model.dispersion, &mut cite_rng);
        entries.push(TruthEntry {
            id: format!("P{:0width$}", i + 1),
            year,
            journal: journal.clone(),
            specialty: specialty.clone(),
            field,
            doctype: doctype.clone(),
            countries: picked.iter().map(|&c| codes[c].to_string()).collect(),
            citations,
        });
    }
    Ok(Generated { entries })
}

fn draw_citations<R: Rng>(mean: f64, dispersion: f64, rng: &mut R) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    let rate = Gamma::new(dispersion, mean / dispersion)
        .expect("validated gamma parameters")
        .sample(rng);
    if rate <= 0.0 {
        return 0;
    }
    Poisson::new(rate)
        .map(|p| p.sample(rng) as u64)
        .unwrap_or(0)
}

#[derive(Serialize)]
struct InputLine<'a> {
    id: &'a str,
    year: i32,
    journal: &'a str,
    field: &'a str,
    doctype: &'a str,
    countries: &'a [String],
    citations: u64,
}

impl Generated {
    /// Newline-delimited records in the ingest input format.
    pub fn write_records<W: Write>(&self, mut w: W) -> Result<()> {
        for e in &self.entries {
            let line = InputLine {
                id: &e.id,
                year: e.year,
                journal: &e.journal,
                field: &e.field,
                doctype: &e.doctype,
                countries: &e.countries,
                citations: e.citations,
            };
            serde_json::to_writer(&mut w, &line)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    /// Ground-truth CSV: `id,year,journal,specialty,field,doctype,countries,citations`,
    /// countries `;`-joined in draw order.
    pub fn write_truth_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(w);
        wtr.write_record([
            "id",
            "year",
            "journal",
            "specialty",
            "field",
            "doctype",
            "countries",
            "citations",
        ])?;
        for e in &self.entries {
            wtr.write_record([
                e.id.as_str(),
                &e.year.to_string(),
                &e.journal,
                &e.specialty,
                &e.field,
                &e.doctype,
                &e.countries.join(";"),
                &e.citations.to_string(),
            ])?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn records(&self) -> Vec<PublicationRecord> {
        self.entries.iter().map(TruthEntry::to_record).collect()
    }
}

/// Connected random graph with exactly `nodes` nodes and `edges` edges: a
/// random recursive tree topped up with uniformly drawn extra edges.
pub fn shaped_graph(nodes: usize, edges: usize, seed: u64) -> Result<Graph> {
    if nodes < 2 || edges + 1 < nodes || edges > nodes * (nodes - 1) / 2 {
        return Err(Error::Config(format!(
            "no connected simple graph with {nodes} nodes and {edges} edges"
        )));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..nodes).collect();
    for i in (1..nodes).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    let mut set = std::collections::BTreeSet::new();
    for i in 1..nodes {
        let j = rng.random_range(0..i);
        let (a, b) = (order[i], order[j]);
        set.insert((a.min(b), a.max(b)));
    }
    let max = nodes * (nodes - 1) / 2;
    if edges * 2 > max {
        // dense: shuffle the complement and take what is needed
        let mut rest: Vec<(usize, usize)> = (0..nodes)
            .flat_map(|a| (a + 1..nodes).map(move |b| (a, b)))
            .filter(|e| !set.contains(e))
            .collect();
        for i in (1..rest.len()).rev() {
            rest.swap(i, rng.random_range(0..=i));
        }
        let need = edges - set.len();
        set.extend(rest.into_iter().take(need));
    } else {
        while set.len() < edges {
            let a = rng.random_range(0..nodes);
            let b = rng.random_range(0..nodes);
            if a != b {
                set.insert((a.min(b), a.max(b)));
            }
        }
    }
    Graph::from_edges(nodes, set)
}

/// A collaboration network whose graph is [`shaped_graph`], realized as one
/// two-country paper per edge.
pub fn shaped_network(
    specialty: &str,
    year: i32,
    nodes: usize,
    edges: usize,
    seed: u64,
) -> Result<CollabNetwork> {
    let universe = countries::universe();
    if nodes > universe.len() {
        return Err(Error::Config(format!(
            "{nodes} nodes exceed the country universe"
        )));
    }
    let g = shaped_graph(nodes, edges, seed)?;
    let records: Vec<PublicationRecord> = g
        .edges()
        .enumerate()
        .map(|(k, (a, b))| PublicationRecord {
            id: format!("E{k:06}"),
            year,
            journal: String::new(),
            specialty: specialty.to_string(),
            field: field_key(specialty),
            doctype: "ar".into(),
            countries: [universe[a].to_string(), universe[b].to_string()]
                .into_iter()
                .collect(),
            citations: 0,
        })
        .collect();
    let refs: Vec<&PublicationRecord> = records.iter().collect();
    CollabNetwork::build(&refs, BuildOptions::default())
}

/// Linear preferential attachment: each new node links to `m` distinct
/// existing nodes chosen with probability proportional to degree. Starts
/// from a clique on `m + 1` nodes.
pub fn barabasi_albert(n: usize, m: usize, seed: u64) -> Result<Graph> {
    if m < 1 || n <= m {
        return Err(Error::Config(format!(
            "barabasi_albert needs n > m >= 1 (n={n}, m={m})"
        )));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(n * m);
    // every edge endpoint, so uniform picks are degree-proportional
    let mut ends: Vec<usize> = Vec::with_capacity(2 * n * m);
    for a in 0..=m {
        for b in a + 1..=m {
            edges.push((a, b));
            ends.extend([a, b]);
        }
    }
    let mut targets = Vec::with_capacity(m);
    for v in m + 1..n {
        targets.clear();
        while targets.len() < m {
            let t = ends[rng.random_range(0..ends.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            edges.push((v, t));
            ends.extend([v, t]);
        }
    }
    Graph::from_edges(n, edges)
}

/// Participation counts by country code over a generated corpus.
pub fn participation_counts(generated: &Generated) -> BTreeMap<String, u64> {
    let mut out = BTreeMap::new();
    for e in &generated.entries {
        for c in &e.countries {
            *out.entry(c.clone()).or_default() += 1;
        }
    }
    out
}
