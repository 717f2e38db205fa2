use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequence::{CorrelationTable, Grid, Outcome};

/// Outcome keys in file order: `++`, `+-`, `-+`, `--`.
pub const OUTCOME_KEYS: [&str; 4] = ["++", "+-", "-+", "--"];

/// Counts `n(ab)` for one setting pair, indexed `[a][b]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SettingCounts {
    pub n: [[u64; 2]; 2],
}

impl SettingCounts {
    pub fn new(pp: u64, pm: u64, mp: u64, mm: u64) -> Self {
        Self { n: [[pp, pm], [mp, mm]] }
    }

    pub fn get(&self, a: Outcome, b: Outcome) -> u64 {
        self.n[a.index()][b.index()]
    }

    pub fn total(&self) -> u64 {
        self.n.iter().flatten().sum()
    }

    /// `n(ab) / sum n`.
    pub fn frequency(&self, a: Outcome, b: Outcome) -> f64 {
        self.get(a, b) as f64 / self.total() as f64
    }
}

/// Validated counts for all four setting pairs, plus metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct CountsRecord {
    pub label: String,
    pub claimed_initial_purity: Option<f64>,
    settings: [[SettingCounts; 2]; 2],
}

impl CountsRecord {
    pub fn new(label: impl Into<String>, claimed_initial_purity: Option<f64>, settings: [[SettingCounts; 2]; 2]) -> Result<Self> {
        for (x, row) in settings.iter().enumerate() {
            for (y, s) in row.iter().enumerate() {
                if s.total() == 0 {
                    return Err(Error::InvalidInput(format!("setting pair ({x},{y}) has no counts")));
                }
            }
        }
        if let Some(p) = claimed_initial_purity {
            if !(0.5..=1.0).contains(&p) {
                return Err(Error::InvalidInput(format!("claimed_initial_purity = {p} outside [0.5, 1]")));
            }
        }
        Ok(Self { label: label.into(), claimed_initial_purity, settings })
    }

    pub fn setting(&self, x: usize, y: usize) -> &SettingCounts {
        &self.settings[x][y]
    }

    /// `n_xy`.
    pub fn shots(&self, x: usize, y: usize) -> u64 {
        self.settings[x][y].total()
    }

    pub fn empirical_table(&self) -> CorrelationTable {
        let mut grid: Grid = [[[[0.0; 2]; 2]; 2]; 2];
        for x in 0..2 {
            for y in 0..2 {
                for a in Outcome::BOTH {
                    for b in Outcome::BOTH {
                        grid[x][y][a.index()][b.index()] = self.settings[x][y].frequency(a, b);
                    }
                }
            }
        }
        CorrelationTable::new(grid).expect("frequencies form a valid table")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawRecord =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("malformed counts JSON: {e}")))?;
        raw.validate()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&RawRecord::from(self)).expect("serializable");
        s.push('\n');
        s
    }
}

/// Reads and validates a counts file.
pub fn ingest_counts(path: impl AsRef<Path>) -> Result<CountsRecord> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    CountsRecord::from_json(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn write_counts(record: &CountsRecord, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, record.to_json())?;
    Ok(())
}

// File representation. Counts are read as signed integers so that negative
// values produce a field-level message instead of a generic type error.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRecord {
    label: String,
    claimed_initial_purity: Option<f64>,
    settings: Vec<RawSetting>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSetting {
    x: u8,
    y: u8,
    counts: BTreeMap<String, i64>,
}

impl RawRecord {
    fn validate(self) -> Result<CountsRecord> {
        let mut seen = [[None::<SettingCounts>; 2]; 2];
        for (i, s) in self.settings.iter().enumerate() {
            if s.x > 1 || s.y > 1 {
                return Err(Error::Parse(format!("settings[{i}]: setting pair ({},{}) outside {{0,1}}", s.x, s.y)));
            }
            let mut n = [0u64; 4];
            for (k, key) in OUTCOME_KEYS.iter().enumerate() {
                let v = *s
                    .counts
                    .get(*key)
                    .ok_or_else(|| Error::Parse(format!("settings[{i}].counts: missing key \"{key}\"")))?;
                if v < 0 {
                    return Err(Error::Parse(format!("settings[{i}].counts[\"{key}\"]: negative count {v}")));
                }
                n[k] = v as u64;
            }
            if let Some(extra) = s.counts.keys().find(|k| !OUTCOME_KEYS.contains(&k.as_str())) {
                return Err(Error::Parse(format!("settings[{i}].counts: unknown key \"{extra}\"")));
            }
            let slot = &mut seen[s.x as usize][s.y as usize];
            if slot.is_some() {
                return Err(Error::Parse(format!("settings[{i}]: setting pair ({},{}) repeated", s.x, s.y)));
            }
            *slot = Some(SettingCounts::new(n[0], n[1], n[2], n[3]));
        }
        let mut settings = [[SettingCounts::default(); 2]; 2];
        for x in 0..2 {
            for y in 0..2 {
                settings[x][y] =
                    seen[x][y].ok_or_else(|| Error::Parse(format!("setting pair ({x},{y}) absent")))?;
            }
        }
        CountsRecord::new(self.label, self.claimed_initial_purity, settings)
    }
}

impl From<&CountsRecord> for RawRecord {
    fn from(r: &CountsRecord) -> Self {
        let mut settings = Vec::with_capacity(4);
        for x in 0..2u8 {
            for y in 0..2u8 {
                let s = &r.settings[x as usize][y as usize];
                let counts = OUTCOME_KEYS
                    .iter()
                    .zip(s.n.iter().flatten())
                    .map(|(k, &v)| (k.to_string(), v as i64))
                    .collect();
                settings.push(RawSetting { x, y, counts });
            }
        }
        Self { label: r.label.clone(), claimed_initial_purity: r.claimed_initial_purity, settings }
    }
}
