//! Field-weighted citation impact and country-combination observations.
//!
//! Baselines are the mean citation count of each (field, year, doctype) cell
//! of the ingested corpus. A paper's FWCI is its citations divided by its
//! cell's baseline, so FWCI averages to exactly 1 within every usable cell.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, PublicationRecord};
use crate::error::{Error, Result};

/// Offset added to the combination mean before taking the log.
pub const LOG_OFFSET: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CellKey {
    pub field: String,
    pub year: i32,
    pub doctype: String,
}

impl CellKey {
    pub fn of(rec: &PublicationRecord) -> Self {
        CellKey {
            field: rec.field.clone(),
            year: rec.year,
            doctype: rec.doctype.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellBaseline {
    pub mean_citations: f64,
    pub papers: usize,
}

impl CellBaseline {
    /// Cells whose papers were never cited cannot normalize anything.
    pub fn usable(&self) -> bool {
        self.mean_citations > 0.0
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct FwciBaselines {
    cells: BTreeMap<CellKey, CellBaseline>,
}

impl FwciBaselines {
    pub fn compute<'a>(records: impl IntoIterator<Item = &'a PublicationRecord>) -> Self {
        let mut sums: BTreeMap<CellKey, (u64, usize)> = BTreeMap::new();
        for rec in records {
            let e = sums.entry(CellKey::of(rec)).or_default();
            e.0 += rec.citations;
            e.1 += 1;
        }
        let cells = sums
            .into_iter()
            .map(|(k, (total, papers))| {
                (
                    k,
                    CellBaseline {
                        mean_citations: total as f64 / papers as f64,
                        papers,
                    },
                )
            })
            .collect();
        FwciBaselines { cells }
    }

    pub fn from_corpus(corpus: &Corpus) -> Self {
        Self::compute(corpus.records())
    }

    pub fn get(&self, key: &CellKey) -> Option<&CellBaseline> {
        self.cells.get(key)
    }

    pub fn cells(&self) -> impl Iterator<Item = (&CellKey, &CellBaseline)> {
        self.cells.iter()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// FWCI of one record, or the reason it cannot be computed.
    pub fn fwci(&self, rec: &PublicationRecord) -> std::result::Result<f64, String> {
        let key = CellKey::of(rec);
        match self.cells.get(&key) {
            None => Err(format!(
                "no baseline for field {:?}, year {}, doctype {:?}",
                key.field, key.year, key.doctype
            )),
            Some(cell) if !cell.usable() => Err(format!(
                "zero baseline for field {:?}, year {}, doctype {:?}",
                key.field, key.year, key.doctype
            )),
            Some(cell) => Ok(rec.citations as f64 / cell.mean_citations),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComboObservation {
    /// Sorted, duplicate-free country codes.
    pub combo: Vec<String>,
    pub year: i32,
    pub country_count: usize,
    pub publication_count: usize,
    pub mean_fwci: f64,
    pub log_fwci: f64,
}

impl ComboObservation {
    pub fn new(
        mut combo: Vec<String>,
        year: i32,
        publication_count: usize,
        mean_fwci: f64,
    ) -> Self {
        combo.sort();
        combo.dedup();
        ComboObservation {
            country_count: combo.len(),
            combo,
            year,
            publication_count,
            mean_fwci,
            log_fwci: (mean_fwci + LOG_OFFSET).ln(),
        }
    }

    /// Hyphen-joined codes, e.g. `CN-DE-US`.
    pub fn combo_id(&self) -> String {
        self.combo.join("-")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Exclusion {
    pub id: String,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ObservationSet {
    /// Ordered by (combo_id, year).
    pub observations: Vec<ComboObservation>,
    pub exclusions: Vec<Exclusion>,
    pub single_country: usize,
}

impl ObservationSet {
    pub fn retained_records(&self) -> usize {
        self.observations.iter().map(|o| o.publication_count).sum()
    }
}

/// Groups international records by (country set, year) and averages FWCI.
pub fn build_observations(
    records: &[&PublicationRecord],
    baselines: &FwciBaselines,
) -> ObservationSet {
    let mut groups: BTreeMap<(String, i32), (Vec<String>, f64, usize)> = BTreeMap::new();
    let mut set = ObservationSet::default();
    for rec in records {
        if !rec.is_international() {
            set.single_country += 1;
            continue;
        }
        let fwci = match baselines.fwci(rec) {
            Ok(v) => v,
            Err(reason) => {
                set.exclusions.push(Exclusion {
                    id: rec.id.clone(),
                    reason,
                });
                continue;
            }
        };
        let combo: Vec<String> = rec.countries.iter().cloned().collect();
        let entry = groups
            .entry((combo.join("-"), rec.year))
            .or_insert_with(|| (combo, 0.0, 0));
        entry.1 += fwci;
        entry.2 += 1;
    }
    set.observations = groups
        .into_iter()
        .map(|((_, year), (combo, total, count))| {
            ComboObservation::new(combo, year, count, total / count as f64)
        })
        .collect();
    set
}

pub const OBSERVATION_CSV_HEADER: &str =
    "combo_id,year,country_count,publication_count,mean_fwci,log_fwci";

pub fn write_observations_csv<W: Write>(obs: &[ComboObservation], mut w: W) -> Result<()> {
    writeln!(w, "{OBSERVATION_CSV_HEADER}")?;
    for o in obs {
        writeln!(
            w,
            "{},{},{},{},{:?},{:?}",
            o.combo_id(),
            o.year,
            o.country_count,
            o.publication_count,
            o.mean_fwci,
            o.log_fwci
        )?;
    }
    Ok(())
}

#[derive(Debug, Deserialize)]
struct ObservationRow {
    combo_id: String,
    year: i32,
    country_count: usize,
    publication_count: usize,
    mean_fwci: f64,
    log_fwci: Option<f64>,
}

pub fn read_observations_csv<R: std::io::Read>(reader: R) -> Result<Vec<ComboObservation>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut out = Vec::new();
    for row in rdr.deserialize() {
        let row: ObservationRow = row?;
        let combo: Vec<String> = row.combo_id.split('-').map(str::to_string).collect();
        let obs = ComboObservation::new(combo, row.year, row.publication_count, row.mean_fwci);
        if obs.country_count != row.country_count {
            return Err(Error::Invalid(format!(
                "combo {} lists {} countries but country_count is {}",
                row.combo_id, obs.country_count, row.country_count
            )));
        }
        if let Some(l) = row.log_fwci {
            if (l - obs.log_fwci).abs() > 1e-9 * l.abs().max(1.0) {
                return Err(Error::Invalid(format!(
                    "combo {} log_fwci {l} inconsistent with mean_fwci {}",
                    row.combo_id, row.mean_fwci
                )));
            }
        }
        out.push(obs);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(id: &str, year: i32, countries: &[&str], citations: u64) -> PublicationRecord {
        PublicationRecord {
            id: id.into(),
            year,
            journal: "J".into(),
            specialty: "Virology".into(),
            field: "vir".into(),
            doctype: "ar".into(),
            countries: countries.iter().map(|s| s.to_string()).collect(),
            citations,
        }
    }

    #[test]
    fn baseline_means_and_zero_cells() {
        let recs = [
            rec("a", 2013, &["US"], 2),
            rec("b", 2013, &["US"], 4),
            rec("c", 2008, &["US"], 0),
            rec("d", 2008, &["FR"], 0),
        ];
        let b = FwciBaselines::compute(&recs);
        let key = CellKey::of(&recs[0]);
        assert_eq!(b.get(&key).unwrap().mean_citations, 3.0);
        let zero = b.get(&CellKey::of(&recs[2])).unwrap();
        assert!(!zero.usable());
        assert!(b.fwci(&recs[2]).unwrap_err().contains("zero baseline"));
    }

    #[test]
    fn fwci_values() {
        let recs = [
            rec("a", 2013, &["US"], 2),
            rec("b", 2013, &["US"], 2),
            rec("c", 2013, &["US"], 0),
            rec("d", 2013, &["US"], 0),
        ];
        let b = FwciBaselines::compute(&recs);
        assert_eq!(b.fwci(&recs[0]).unwrap(), 2.0);
        assert_eq!(b.fwci(&recs[2]).unwrap(), 0.0);
        let at_average = FwciBaselines::compute(&recs[..2]);
        assert_eq!(at_average.fwci(&recs[0]).unwrap(), 1.0);
        let orphan = rec("z", 1999, &["US"], 3);
        assert!(at_average.fwci(&orphan).is_err());
    }

    #[test]
    fn seventeen_point_one_eight_times_the_average() {
        // 20 papers averaging 100 citations; the cited one has 1718
        let mut recs: Vec<PublicationRecord> = (0..18)
            .map(|i| rec(&format!("p{i}"), 2013, &["US"], 0))
            .collect();
        recs.push(rec("q", 2013, &["US"], 282));
        recs.push(rec("star", 2013, &["US"], 1718));
        let b = FwciBaselines::compute(&recs);
        assert_eq!(b.get(&CellKey::of(&recs[0])).unwrap().mean_citations, 100.0);
        assert!((b.fwci(&recs[19]).unwrap() - 17.18).abs() < 1e-12);
    }

    #[test]
    fn two_record_aggregate() {
        let recs = [
            rec("a", 2013, &["US", "CN"], 1),
            rec("b", 2013, &["CN", "US"], 3),
        ];
        let refs: Vec<_> = recs.iter().collect();
        let b = FwciBaselines::compute(&recs);
        let set = build_observations(&refs, &b);
        assert_eq!(set.observations.len(), 1);
        let o = &set.observations[0];
        assert_eq!(o.publication_count, 2);
        assert_eq!(o.mean_fwci, 1.0);
        assert_eq!(o.country_count, 2);
        assert_eq!(o.combo_id(), "CN-US");
        assert_eq!(o.log_fwci, 1.1f64.ln());
    }

    #[test]
    fn canonical_order_and_years_kept_apart() {
        let recs = [
            rec("a", 2013, &["US", "DE", "CN"], 1),
            rec("b", 2008, &["US", "DE", "CN"], 1),
            rec("c", 2013, &["FR"], 1),
        ];
        let refs: Vec<_> = recs.iter().collect();
        let set = build_observations(&refs, &FwciBaselines::compute(&recs));
        assert_eq!(set.single_country, 1);
        assert_eq!(set.observations.len(), 2);
        assert_eq!(set.observations[0].combo_id(), "CN-DE-US");
        assert_eq!(set.observations[0].year, 2008);
        assert_eq!(set.observations[1].year, 2013);
        assert_eq!(set.observations[0].country_count, 3);
    }

    #[test]
    fn csv_round_trip() {
        let obs = vec![ComboObservation::new(
            vec!["US".into(), "CN".into()],
            2013,
            2,
            2.0,
        )];
        let mut buf = Vec::new();
        write_observations_csv(&obs, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with(OBSERVATION_CSV_HEADER));
        assert!(text.contains("CN-US,2013,2,2,2.0,"));
        assert_eq!(read_observations_csv(buf.as_slice()).unwrap(), obs);
        let bad = "combo_id,year,country_count,publication_count,mean_fwci,log_fwci\nCN-US,2013,3,1,1.0,\n";
        assert!(read_observations_csv(bad.as_bytes()).is_err());
    }
}
