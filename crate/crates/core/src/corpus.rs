//! Publication records: ingestion, validation, specialty resolution and slicing.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::countries;
use crate::error::{Error, Result};

/// The six specialties covered by the bundled journal map.
pub const SPECIALTIES: [&str; 6] = [
    "Astrophysics",
    "Mathematical Logic",
    "Polymer Science",
    "Seismology",
    "Soil Science",
    "Virology",
];

/// Fallback label for journals outside the map.
pub const OTHER: &str = "other";

/// Pseudo-specialty naming a whole-corpus slice.
pub const ALL_FIELDS: &str = "All-Fields";

pub const MIN_YEAR: i32 = 1900;
pub const MAX_YEAR: i32 = 2100;

const BUNDLED_MAP: &str = include_str!("../data/specialty_map.csv");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublicationRecord {
    pub id: String,
    pub year: i32,
    pub journal: String,
    pub specialty: String,
    pub field: String,
    pub doctype: String,
    pub countries: BTreeSet<String>,
    pub citations: u64,
}

impl PublicationRecord {
    pub fn is_international(&self) -> bool {
        self.countries.len() >= 2
    }
}

fn normalize_journal(name: &str) -> String {
    name.split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
}

/// Journal name -> specialty label.
#[derive(Debug, Clone)]
pub struct SpecialtyMap {
    /// normalized name -> (name as listed, specialty)
    entries: BTreeMap<String, (String, String)>,
    universe: Vec<String>,
}

impl SpecialtyMap {
    /// The Appendix-style journal lists shipped with the crate.
    pub fn bundled() -> Self {
        Self::from_csv(BUNDLED_MAP.as_bytes(), &SPECIALTIES)
            .expect("bundled specialty map is valid")
    }

    /// Reads a two-column `journal,specialty` CSV with a header row.
    pub fn from_csv<R: std::io::Read>(reader: R, universe: &[&str]) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut entries = BTreeMap::new();
        for row in rdr.records() {
            let row = row?;
            if row.len() != 2 {
                return Err(Error::SpecialtyMap(format!(
                    "expected 2 columns, got {} in {:?}",
                    row.len(),
                    row
                )));
            }
            let listed = row[0].to_string();
            let journal = normalize_journal(&listed);
            let specialty = row[1].to_string();
            if !universe.contains(&specialty.as_str()) {
                return Err(Error::SpecialtyMap(format!(
                    "specialty {specialty:?} not in universe ({})",
                    universe.join(", ")
                )));
            }
            if entries
                .insert(journal.clone(), (listed, specialty))
                .is_some()
            {
                return Err(Error::SpecialtyMap(format!(
                    "duplicate journal {journal:?}"
                )));
            }
        }
        Ok(Self {
            entries,
            universe: universe.iter().map(|s| s.to_string()).collect(),
        })
    }

    pub fn resolve(&self, journal: &str) -> &str {
        self.entries
            .get(&normalize_journal(journal))
            .map(|(_, s)| s.as_str())
            .unwrap_or(OTHER)
    }

    /// Configured specialty labels, without the `other` fallback.
    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Journal names as listed with their specialty, sorted by normalized name.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.values().map(|(j, s)| (j.as_str(), s.as_str()))
    }
}

#[derive(Debug, Deserialize)]
struct RawRecord {
    id: Option<String>,
    year: Option<i64>,
    journal: Option<String>,
    field: Option<String>,
    doctype: Option<String>,
    countries: Option<Vec<String>>,
    citations: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rejection {
    pub id: String,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IngestReport {
    /// Lines accepted, including ones that replaced an earlier record with the same id.
    pub accepted: usize,
    pub rejected: Vec<Rejection>,
    /// Accepted lines whose id was already present.
    pub replaced: usize,
}

impl IngestReport {
    pub fn total(&self) -> usize {
        self.accepted + self.rejected.len()
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(w);
        wtr.write_record(["id", "reason"])?;
        for r in &self.rejected {
            wtr.write_record([&r.id, &r.reason])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Validated records keyed by id. Immutable once built.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    records: BTreeMap<String, PublicationRecord>,
}

fn validate(raw: RawRecord, map: &SpecialtyMap) -> std::result::Result<PublicationRecord, String> {
    let id = raw.id.ok_or("missing field id")?;
    if id.trim().is_empty() {
        return Err("empty id".into());
    }
    let year = raw.year.ok_or("missing field year")?;
    if !(MIN_YEAR as i64..=MAX_YEAR as i64).contains(&year) {
        return Err(format!("year {year} outside [{MIN_YEAR}, {MAX_YEAR}]"));
    }
    let journal = raw.journal.ok_or("missing field journal")?;
    let field = raw.field.ok_or("missing field field")?;
    let doctype = raw.doctype.ok_or("missing field doctype")?;
    let citations = raw.citations.ok_or("missing field citations")?;
    if citations < 0 {
        return Err(format!("negative citation count {citations}"));
    }
    let raw_countries = raw.countries.ok_or("missing field countries")?;
    let mut countries = BTreeSet::new();
    for code in &raw_countries {
        match countries::normalize(code) {
            Some(c) => {
                countries.insert(c.to_string());
            }
            None => return Err(format!("unknown country code {code}")),
        }
    }
    if countries.is_empty() {
        return Err("empty country set".into());
    }
    let specialty = map.resolve(&journal).to_string();
    Ok(PublicationRecord {
        id,
        year: year as i32,
        journal,
        specialty,
        field,
        doctype,
        countries,
        citations: citations as u64,
    })
}

impl Corpus {
    /// Reads newline-delimited JSON records. Blank lines are skipped and do not
    /// count towards the input total. Malformed lines are rejected, not fatal.
    pub fn ingest<R: BufRead>(source: R, map: &SpecialtyMap) -> Result<(Corpus, IngestReport)> {
        let mut corpus = Corpus::default();
        let mut report = IngestReport::default();
        for (lineno, line) in source.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let fallback_id = format!("line:{}", lineno + 1);
            let raw: RawRecord = match serde_json::from_str(&line) {
                Ok(r) => r,
                Err(e) => {
                    let id = serde_json::from_str::<serde_json::Value>(&line)
                        .ok()
                        .and_then(|v| v.get("id").and_then(|i| i.as_str()).map(str::to_string))
                        .unwrap_or(fallback_id);
                    report.rejected.push(Rejection {
                        id,
                        reason: format!("malformed record: {e}"),
                    });
                    continue;
                }
            };
            let id_hint = raw.id.clone().unwrap_or(fallback_id);
            match validate(raw, map) {
                Ok(rec) => {
                    report.accepted += 1;
                    if corpus.records.insert(rec.id.clone(), rec).is_some() {
                        report.replaced += 1;
                    }
                }
                Err(reason) => report.rejected.push(Rejection {
                    id: id_hint,
                    reason,
                }),
            }
        }
        Ok((corpus, report))
    }

    pub fn from_records(records: impl IntoIterator<Item = PublicationRecord>) -> Self {
        Corpus {
            records: records.into_iter().map(|r| (r.id.clone(), r)).collect(),
        }
    }

    /// Reads a corpus previously written by [`Corpus::write_jsonl`].
    pub fn read_jsonl<R: BufRead>(source: R) -> Result<Self> {
        let mut records = BTreeMap::new();
        for line in source.lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: PublicationRecord = serde_json::from_str(&line)?;
            records.insert(rec.id.clone(), rec);
        }
        Ok(Corpus { records })
    }

    /// One JSON object per line, ordered by id.
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> Result<()> {
        for rec in self.records.values() {
            serde_json::to_writer(&mut w, rec)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&PublicationRecord> {
        self.records.get(id)
    }

    /// Records in id order.
    pub fn records(&self) -> impl Iterator<Item = &PublicationRecord> {
        self.records.values()
    }

    /// Records with the given specialty and year, ordered by id. `All-Fields`
    /// selects every record of the year.
    pub fn filter(
        &self,
        specialty: &str,
        year: i32,
        map: &SpecialtyMap,
    ) -> Result<Vec<&PublicationRecord>> {
        let all = specialty == ALL_FIELDS;
        if !all && specialty != OTHER && !map.universe().iter().any(|s| s == specialty) {
            let mut valid: Vec<String> = map.universe().to_vec();
            valid.push(OTHER.to_string());
            valid.push(ALL_FIELDS.to_string());
            return Err(Error::UnknownSpecialty {
                label: specialty.to_string(),
                valid,
            });
        }
        Ok(self
            .records
            .values()
            .filter(|r| r.year == year && (all || r.specialty == specialty))
            .collect())
    }

    /// Distinct (specialty, year) keys present, sorted.
    pub fn slices(&self) -> BTreeSet<(String, i32)> {
        self.records
            .values()
            .map(|r| (r.specialty.clone(), r.year))
            .collect()
    }

    pub fn years(&self) -> BTreeSet<i32> {
        self.records.values().map(|r| r.year).collect()
    }
}
