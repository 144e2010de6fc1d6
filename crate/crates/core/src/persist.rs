//! On-disk formats for enumeration runs.
//!
//! A run directory holds `counts.csv`, `summary.json` and, when
//! representatives are emitted, one `levels/wNNN.ndjson` file per level.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::enumerator::{ClassTable, EnumerationStats, LevelCount, LevelSink};
use crate::error::{Error, Result};
use crate::geometry::{ConvexLatticePolygon, LatticePoint};
use crate::invariants::{compute_invariants, InvariantVector};

pub const COUNTS_FILE: &str = "counts.csv";
pub const SUMMARY_FILE: &str = "summary.json";
pub const LEVELS_DIR: &str = "levels";

pub fn counts_csv(table: &ClassTable) -> String {
    let mut out = String::from("w,count\n");
    for row in table.rows() {
        out.push_str(&format!("{},{}\n", row.w, row.count));
    }
    out.push_str(&format!("# total={}\n", table.total()));
    out
}

/// Parses a counts document, checking the trailing total against the rows.
pub fn parse_counts_csv(text: &str) -> Result<(Vec<LevelCount>, u64)> {
    let mut lines = text.lines();
    if lines.next() != Some("w,count") {
        return Err(Error::Parse("missing `w,count` header".into()));
    }
    let mut rows = Vec::new();
    let mut total = None;
    for line in lines {
        if let Some(t) = line.strip_prefix("# total=") {
            total = Some(t.trim().parse::<u64>().map_err(|e| Error::Parse(e.to_string()))?);
            continue;
        }
        let (w, count) = line
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("bad row {line:?}")))?;
        rows.push(LevelCount {
            w: w.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad w in {line:?}")))?,
            count: count
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad count in {line:?}")))?,
        });
    }
    let total = total.ok_or_else(|| Error::Parse("missing total line".into()))?;
    let sum: u64 = rows.iter().map(|r| r.count).sum();
    if sum != total {
        return Err(Error::Parse(format!("rows sum to {sum}, total says {total}")));
    }
    Ok((rows, total))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepresentativeRecord {
    pub w: usize,
    pub hull: Vec<LatticePoint>,
    pub points: usize,
    pub invariants: InvariantVector,
}

impl RepresentativeRecord {
    pub fn of(polygon: &ConvexLatticePolygon) -> Self {
        Self {
            w: polygon.len(),
            hull: polygon.hull().to_vec(),
            points: polygon.len(),
            invariants: compute_invariants(polygon),
        }
    }

    /// Rebuilds the polygon from its hull.
    pub fn polygon(&self) -> Result<ConvexLatticePolygon> {
        ConvexLatticePolygon::from_generators(&self.hull)
    }
}

pub fn level_file_name(w: usize) -> String {
    format!("w{w:03}.ndjson")
}

pub fn read_level(path: &Path) -> Result<Vec<RepresentativeRecord>> {
    fs::read_to_string(path)?
        .lines()
        .filter(|l| !l.is_empty())
        .map(|l| serde_json::from_str(l).map_err(|e| Error::Parse(e.to_string())))
        .collect()
}

/// Writes one newline-delimited file per level with `w ≤ max_w`.
pub struct DirectorySink {
    dir: PathBuf,
    max_w: Option<usize>,
    written: Vec<usize>,
}

impl DirectorySink {
    pub fn new(out: &Path, max_w: Option<usize>) -> io::Result<Self> {
        let dir = out.join(LEVELS_DIR);
        fs::create_dir_all(&dir)?;
        Ok(Self {
            dir,
            max_w,
            written: Vec::new(),
        })
    }

    pub fn written(&self) -> &[usize] {
        &self.written
    }
}

impl LevelSink for DirectorySink {
    fn write_level(&mut self, w: usize, representatives: &[ConvexLatticePolygon]) -> io::Result<()> {
        if self.max_w.is_some_and(|cap| w > cap) {
            return Ok(());
        }
        let mut file = BufWriter::new(File::create(self.dir.join(level_file_name(w)))?);
        for p in representatives {
            serde_json::to_writer(&mut file, &RepresentativeRecord::of(p))?;
            file.write_all(b"\n")?;
        }
        file.flush()?;
        self.written.push(w);
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub region: String,
    pub total: u64,
    pub rows: Vec<LevelCount>,
    pub stats: EnumerationStats,
    pub vertex_bound: Option<f64>,
}

pub fn write_run(out: &Path, table: &ClassTable, summary: &RunSummary) -> Result<()> {
    fs::create_dir_all(out)?;
    fs::write(out.join(COUNTS_FILE), counts_csv(table))?;
    let mut json = serde_json::to_string_pretty(summary).map_err(|e| Error::Parse(e.to_string()))?;
    json.push('\n');
    fs::write(out.join(SUMMARY_FILE), json)?;
    Ok(())
}
