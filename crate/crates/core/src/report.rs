// SPDX-License-Identifier: Apache-2.0

//! Stacked bar charts and the end-to-end pipeline.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::aggregator::{
    aggregate_authors, aggregate_commits, assign_author_years, domain_drift, drift_to_tsv,
    method_disagreement, OffsetBand, Slot, TableKind, YearRegionTable, DEFAULT_AUTHOR_THRESHOLD,
    DISAGREEMENT_FILE, DOMAIN_DRIFT_FILE,
};
use crate::error::{Error, Result};
use crate::geolocator::{geolocate_all, GeolocationStats};
use crate::ingest::{dedupe_commits, parse_commit_tsv};
use crate::refs::{sha256_hex, Refs, RegionTaxonomy};
use crate::tz::tzdb_version;

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("cannot chart an empty {0} table")]
    EmptyTable(&'static str),
}

impl ReportError {
    pub fn reason(&self) -> &'static str {
        match self {
            ReportError::EmptyTable(_) => "empty table",
        }
    }
}

/// Colors for the bundled region ids. Other ids get a color derived from
/// a hash of the id.
pub const PALETTE: &[(&str, &str)] = &[
    ("north-america", "#1f77b4"),
    ("caribbean", "#aec7e8"),
    ("central-south-america", "#ff7f0e"),
    ("europe-west", "#2ca02c"),
    ("europe-north", "#98df8a"),
    ("europe-south", "#d62728"),
    ("europe-east", "#ff9896"),
    ("russia", "#9467bd"),
    ("middle-east", "#c5b0d5"),
    ("north-africa", "#8c564b"),
    ("africa", "#e6550d"),
    ("central-south-asia", "#e377c2"),
    ("east-asia", "#f7b6d2"),
    ("japan", "#bcbd22"),
    ("korea", "#dbdb8d"),
    ("south-east-asia", "#17becf"),
    ("australia-nz", "#9edae5"),
    ("pacific", "#393b79"),
];

pub const UNRESOLVED_COLOR: &str = "#bdbdbd";

pub fn region_color(region_id: &str) -> String {
    if let Some((_, c)) = PALETTE.iter().find(|(id, _)| *id == region_id) {
        return (*c).to_owned();
    }
    // FNV-1a, then keep channels in a mid range so text stays readable.
    let h = region_id.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x100_0000_01b3)
    });
    let ch = |shift: u32| 0x30 + ((h >> shift) & 0xff) as u8 % 0xa0;
    format!("#{:02x}{:02x}{:02x}", ch(0), ch(8), ch(16))
}

fn slot_color(slot: Slot, taxonomy: &RegionTaxonomy) -> String {
    match slot {
        Slot::Region(r) => region_color(taxonomy.id(r)),
        Slot::Unresolved => UNRESOLVED_COLOR.to_owned(),
    }
}

fn slot_name(slot: Slot, taxonomy: &RegionTaxonomy) -> &str {
    match slot {
        Slot::Region(r) => &taxonomy.region(r).display_name,
        Slot::Unresolved => "Unresolved",
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
            c => out.push(c),
        }
    }
    out
}

const PLOT_TOP: f64 = 40.0;
const PLOT_LEFT: f64 = 50.0;
const PLOT_HEIGHT: f64 = 300.0;
const BAR_STEP: f64 = 14.0;
const BAR_WIDTH: f64 = 12.0;
const LEGEND_WIDTH: f64 = 200.0;

/// Renders one bar per year with slices stacked bottom-up in taxonomy order
/// and unresolved on top. Slice heights are each row's share of its year's
/// total count; output depends only on the table contents.
pub fn emit_stacked_chart(
    table: &YearRegionTable,
    taxonomy: &RegionTaxonomy,
    which: TableKind,
) -> Result<String, ReportError> {
    if table.is_empty() {
        return Err(ReportError::EmptyTable(which.as_str()));
    }
    let mut rows = table.rows.clone();
    rows.sort_by_key(|r| (r.year, r.slot));
    let mut by_year: BTreeMap<i32, Vec<_>> = BTreeMap::new();
    for r in &rows {
        by_year.entry(r.year).or_default().push(*r);
    }
    let mut slots: Vec<Slot> = rows.iter().map(|r| r.slot).collect();
    slots.sort();
    slots.dedup();

    let plot_width = by_year.len() as f64 * BAR_STEP;
    let legend_x = PLOT_LEFT + plot_width + 20.0;
    let width = legend_x + LEGEND_WIDTH;
    let legend_height = slots.len() as f64 * 16.0 + PLOT_TOP;
    let height = (PLOT_TOP + PLOT_HEIGHT + 50.0).max(legend_height);
    let bottom = PLOT_TOP + PLOT_HEIGHT;
    let title = match which {
        TableKind::Commits => "Ratio of commits per region",
        TableKind::Authors => "Ratio of active authors per region",
    };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif" font-size="10">"#
    );
    let _ = writeln!(s, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    let _ = writeln!(
        s,
        r#"<text x="{PLOT_LEFT:.0}" y="20" font-size="13">{title}</text>"#
    );

    // Y axis with gridlines every 25%.
    for i in 0..=4 {
        let y = bottom - PLOT_HEIGHT * f64::from(i) / 4.0;
        let _ = writeln!(
            s,
            r##"<line x1="{PLOT_LEFT:.0}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#dddddd"/>"##,
            PLOT_LEFT + plot_width
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.0}" y="{:.2}" text-anchor="end">{}%</text>"#,
            PLOT_LEFT - 4.0,
            y + 3.0,
            i * 25
        );
    }

    let label_every = by_year.len().div_ceil(25).max(1);
    for (i, (year, year_rows)) in by_year.iter().enumerate() {
        let x = PLOT_LEFT + i as f64 * BAR_STEP + (BAR_STEP - BAR_WIDTH) / 2.0;
        let _ = writeln!(s, r#"<g data-year="{year}">"#);
        // Heights come from counts so a table read back from TSV draws the
        // same chart as the in-memory one.
        let total: u64 = year_rows.iter().map(|r| r.count).sum();
        let mut y = bottom;
        for r in year_rows {
            let ratio = r.count as f64 / total as f64;
            let h = ratio * PLOT_HEIGHT;
            y -= h;
            let _ = writeln!(
                s,
                r#"<rect x="{x:.2}" y="{y:.3}" width="{BAR_WIDTH:.2}" height="{h:.3}" fill="{}"><title>{year} {}: {} ({:.6})</title></rect>"#,
                slot_color(r.slot, taxonomy),
                xml_escape(slot_name(r.slot, taxonomy)),
                r.count,
                ratio
            );
        }
        let _ = writeln!(s, "</g>");
        if i % label_every == 0 {
            let cx = x + BAR_WIDTH / 2.0;
            let ly = bottom + 8.0;
            let _ = writeln!(
                s,
                r#"<text x="{cx:.2}" y="{ly:.2}" text-anchor="end" transform="rotate(-90 {cx:.2} {ly:.2})">{year}</text>"#
            );
        }
    }

    // Legend lists slots top-down in the same order they appear on a bar.
    for (i, slot) in slots.iter().rev().enumerate() {
        let y = PLOT_TOP + i as f64 * 16.0;
        let _ = writeln!(
            s,
            r#"<rect x="{legend_x:.2}" y="{y:.2}" width="10" height="10" fill="{}"/>"#,
            slot_color(*slot, taxonomy)
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}">{}</text>"#,
            legend_x + 14.0,
            y + 9.0,
            xml_escape(slot_name(*slot, taxonomy))
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

pub const COMMITS_CHART_FILE: &str = "commits.svg";
pub const AUTHORS_CHART_FILE: &str = "authors.svg";
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub commits: PathBuf,
    pub refs_dir: PathBuf,
    pub out_dir: PathBuf,
    pub author_threshold: u32,
    pub drop_unresolved: bool,
    /// Inclusive year range; commits outside it are dropped before
    /// geolocation.
    pub years: Option<(i32, i32)>,
    pub parallelism: usize,
    pub disagreement_band: OffsetBand,
    /// Email domains for the drift table. `None` skips it.
    pub drift_domains: Option<Vec<String>>,
}

impl RunConfig {
    pub fn new(
        commits: impl Into<PathBuf>,
        refs_dir: impl Into<PathBuf>,
        out_dir: impl Into<PathBuf>,
    ) -> Self {
        RunConfig {
            commits: commits.into(),
            refs_dir: refs_dir.into(),
            out_dir: out_dir.into(),
            author_threshold: DEFAULT_AUTHOR_THRESHOLD,
            drop_unresolved: false,
            years: None,
            parallelism: 1,
            disagreement_band: OffsetBand {
                lo_minutes: 0,
                hi_minutes: 180,
            },
            drift_domains: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.author_threshold < 1 {
            return Err(Error::Config("author threshold must be at least 1".into()));
        }
        if let Some((lo, hi)) = self.years {
            if lo > hi {
                return Err(Error::Config(format!("year range {lo}..{hi} is empty")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ManifestConfig {
    pub author_threshold: u32,
    pub drop_unresolved: bool,
    pub years: Option<(i32, i32)>,
    pub disagreement_band_minutes: (i16, i16),
    pub drift_domains: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct InputSummary {
    pub file: String,
    pub sha256: String,
    pub records: u64,
    pub skipped_rows: BTreeMap<String, u64>,
    pub duplicates: u64,
    pub outside_year_range: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub tool_version: &'static str,
    pub tzdb_version: &'static str,
    pub config: ManifestConfig,
    pub input: InputSummary,
    pub refs: BTreeMap<String, String>,
    pub geolocation: GeolocationStats,
    pub active_author_years: u64,
    pub disagreement_commits: u64,
    pub disagreement_rate: f64,
    /// SHA-256 of each output file except this manifest.
    pub outputs: BTreeMap<String, String>,
}

/// Runs ingest → filter → geolocate → aggregate → report and writes the
/// outputs into `config.out_dir`. Returns the manifest that was written.
pub fn run_pipeline(config: &RunConfig) -> Result<Manifest> {
    config.validate()?;
    let refs = Refs::load(&config.refs_dir)?;

    let raw = fs::read(&config.commits).map_err(|e| Error::io(&config.commits, e))?;
    let parsed = parse_commit_tsv(BufReader::new(raw.as_slice()))?;
    let mut skipped_rows: BTreeMap<String, u64> = BTreeMap::new();
    for s in &parsed.skipped {
        *skipped_rows.entry(s.reason.to_string()).or_default() += 1;
    }
    let records = parsed.records.len() as u64;
    let deduped = dedupe_commits(parsed.records);
    let mut commits = deduped.commits;
    let before = commits.len();
    if let Some((lo, hi)) = config.years {
        commits.retain(|c| (lo..=hi).contains(&c.year()));
    }
    let outside_year_range = (before - commits.len()) as u64;

    let (results, stats) = geolocate_all(&commits, &refs, config.parallelism);
    let commit_table = aggregate_commits(&results, config.drop_unresolved);
    let assignments = assign_author_years(&commits, &results, config.author_threshold)?;
    let author_table = aggregate_authors(&assignments, config.drop_unresolved);
    let disagreement = method_disagreement(&commits, &refs, config.disagreement_band);

    let mut files: Vec<(&str, String)> = vec![
        (
            TableKind::Commits.file_name(),
            commit_table.to_tsv(TableKind::Commits, &refs.taxonomy),
        ),
        (
            TableKind::Authors.file_name(),
            author_table.to_tsv(TableKind::Authors, &refs.taxonomy),
        ),
        (DISAGREEMENT_FILE, disagreement.to_tsv(&refs.taxonomy)),
        (
            COMMITS_CHART_FILE,
            emit_stacked_chart(&commit_table, &refs.taxonomy, TableKind::Commits)?,
        ),
        (
            AUTHORS_CHART_FILE,
            emit_stacked_chart(&author_table, &refs.taxonomy, TableKind::Authors)?,
        ),
    ];
    if let Some(domains) = &config.drift_domains {
        let rows = domain_drift(&commits, &results, domains)?;
        files.push((DOMAIN_DRIFT_FILE, drift_to_tsv(&rows, &refs.taxonomy)));
    }

    let manifest = Manifest {
        tool: "geodiverse",
        tool_version: crate::TOOL_VERSION,
        tzdb_version: tzdb_version(),
        config: ManifestConfig {
            author_threshold: config.author_threshold,
            drop_unresolved: config.drop_unresolved,
            years: config.years,
            disagreement_band_minutes: (
                config.disagreement_band.lo_minutes,
                config.disagreement_band.hi_minutes,
            ),
            drift_domains: config.drift_domains.clone(),
        },
        input: InputSummary {
            file: file_name(&config.commits),
            sha256: sha256_hex(&raw),
            records,
            skipped_rows,
            duplicates: deduped.duplicates as u64,
            outside_year_range,
        },
        refs: refs.digests.clone(),
        geolocation: stats,
        active_author_years: assignments.len() as u64,
        disagreement_commits: disagreement.total(),
        disagreement_rate: disagreement.disagreement_rate(),
        outputs: files
            .iter()
            .map(|(name, body)| ((*name).to_owned(), sha256_hex(body.as_bytes())))
            .collect(),
    };

    fs::create_dir_all(&config.out_dir).map_err(|e| Error::io(&config.out_dir, e))?;
    for (name, body) in &files {
        write_file(&config.out_dir.join(name), body.as_bytes())?;
    }
    let mut json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    json.push('\n');
    write_file(&config.out_dir.join(MANIFEST_FILE), json.as_bytes())?;
    Ok(manifest)
}

fn file_name(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default()
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}
