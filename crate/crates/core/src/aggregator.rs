// SPDX-License-Identifier: Apache-2.0

//! Yearly per-region tables and the dual-method diagnostics.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geolocator::{cctld_region, email_domain, offset_name_decision, GeolocationResult};
use crate::ingest::{AuthorKey, CommitRecord};
use crate::name_filter::classify_name;
use crate::refs::{Refs, RegionIdx, RegionTaxonomy, UNRESOLVED_ID};

/// Minimum commits in a year for an author to count as active.
pub const DEFAULT_AUTHOR_THRESHOLD: u32 = 5;

/// A chart category: a taxonomy region, or unresolved (ordered last).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    Region(RegionIdx),
    Unresolved,
}

impl From<Option<RegionIdx>> for Slot {
    fn from(region: Option<RegionIdx>) -> Self {
        region.map_or(Slot::Unresolved, Slot::Region)
    }
}

impl Slot {
    pub fn label(self, taxonomy: &RegionTaxonomy) -> &str {
        match self {
            Slot::Region(r) => taxonomy.id(r),
            Slot::Unresolved => UNRESOLVED_ID,
        }
    }

    pub fn parse(label: &str, taxonomy: &RegionTaxonomy) -> Option<Slot> {
        match label {
            UNRESOLVED_ID => Some(Slot::Unresolved),
            id => taxonomy.get(id).map(Slot::Region),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    Commits,
    Authors,
}

impl TableKind {
    pub fn header(self) -> &'static str {
        match self {
            TableKind::Commits => "year\tregion_id\tcommit_count\tcommit_ratio",
            TableKind::Authors => "year\tregion_id\tauthor_count\tauthor_ratio",
        }
    }

    pub fn file_name(self) -> &'static str {
        match self {
            TableKind::Commits => "commits_by_year_region.tsv",
            TableKind::Authors => "authors_by_year_region.tsv",
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TableKind::Commits => "commits",
            TableKind::Authors => "authors",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YearRegionRow {
    pub year: i32,
    pub slot: Slot,
    pub count: u64,
    /// Share of the year's total, in [0, 1].
    pub ratio: f64,
}

/// Rows sorted by (year, taxonomy order, unresolved last). Years without
/// data have no rows.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct YearRegionTable {
    pub rows: Vec<YearRegionRow>,
}

/// Exact counts per (year, slot). Merging is commutative and associative.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Tally {
    counts: BTreeMap<(i32, Slot), u64>,
}

impl Tally {
    pub fn add(&mut self, year: i32, slot: Slot) {
        *self.counts.entry((year, slot)).or_default() += 1;
    }

    pub fn merge(&mut self, other: &Tally) {
        for (key, n) in &other.counts {
            *self.counts.entry(*key).or_default() += n;
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Converts counts to a table with within-year ratios. With
    /// `drop_unresolved` the unresolved slot is removed before normalizing.
    pub fn to_table(&self, drop_unresolved: bool) -> YearRegionTable {
        let kept = || {
            self.counts
                .iter()
                .filter(move |((_, slot), _)| !(drop_unresolved && *slot == Slot::Unresolved))
        };
        let mut year_totals: BTreeMap<i32, u64> = BTreeMap::new();
        for ((year, _), n) in kept() {
            *year_totals.entry(*year).or_default() += n;
        }
        let rows = kept()
            .filter(|(_, &n)| n > 0)
            .map(|(&(year, slot), &count)| YearRegionRow {
                year,
                slot,
                count,
                ratio: count as f64 / year_totals[&year] as f64,
            })
            .collect();
        YearRegionTable { rows }
    }
}

impl YearRegionTable {
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn years(&self) -> Vec<i32> {
        let mut years: Vec<i32> = self.rows.iter().map(|r| r.year).collect();
        years.dedup();
        years
    }

    /// Per year, the sum of ratios. Each is 1 up to rounding.
    pub fn ratio_sums(&self) -> BTreeMap<i32, f64> {
        let mut sums = BTreeMap::new();
        for r in &self.rows {
            *sums.entry(r.year).or_default() += r.ratio;
        }
        sums
    }

    pub fn to_tsv(&self, kind: TableKind, taxonomy: &RegionTaxonomy) -> String {
        let mut out = String::new();
        out.push_str(kind.header());
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{:.6}",
                r.year,
                r.slot.label(taxonomy),
                r.count,
                r.ratio
            );
        }
        out
    }

    /// Reads a table back from [`Self::to_tsv`] output.
    pub fn from_tsv(text: &str, kind: TableKind, taxonomy: &RegionTaxonomy) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        if lines.next().map(|(_, l)| l) != Some(kind.header()) {
            return Err(Error::Config(format!(
                "{} table must start with `{}`",
                kind.as_str(),
                kind.header()
            )));
        }
        let mut rows = Vec::new();
        for (i, line) in lines.filter(|(_, l)| !l.is_empty()) {
            let bad = || Error::Config(format!("table line {}: malformed row", i + 1));
            let fields: Vec<&str> = line.split('\t').collect();
            let [year, region, count, ratio] = fields[..] else {
                return Err(bad());
            };
            rows.push(YearRegionRow {
                year: year.parse().map_err(|_| bad())?,
                slot: Slot::parse(region, taxonomy).ok_or_else(bad)?,
                count: count.parse().map_err(|_| bad())?,
                ratio: ratio.parse().map_err(|_| bad())?,
            });
        }
        rows.sort_by_key(|r| (r.year, r.slot));
        Ok(YearRegionTable { rows })
    }
}

pub fn tally_commits<'a>(results: impl IntoIterator<Item = &'a GeolocationResult>) -> Tally {
    let mut tally = Tally::default();
    for r in results {
        tally.add(r.year, r.region.into());
    }
    tally
}

/// Commit counts and ratios per (year, region).
pub fn aggregate_commits<'a>(
    results: impl IntoIterator<Item = &'a GeolocationResult>,
    drop_unresolved: bool,
) -> YearRegionTable {
    tally_commits(results).to_table(drop_unresolved)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuthorYearAssignment {
    pub author: AuthorKey,
    pub year: i32,
    pub slot: Slot,
    pub commit_count_in_year: u64,
}

/// One region per active author-year: the plurality of that author's
/// resolved commits in the year, ties to the earlier region in taxonomy
/// order. Author-years with every commit unresolved are `Unresolved`.
/// `commits` and `results` are parallel slices.
pub fn assign_author_years(
    commits: &[CommitRecord],
    results: &[GeolocationResult],
    threshold: u32,
) -> Result<Vec<AuthorYearAssignment>> {
    if threshold < 1 {
        return Err(Error::Config("author threshold must be at least 1".into()));
    }
    if commits.len() != results.len() {
        return Err(Error::Config("commits and results differ in length".into()));
    }
    type Key<'a> = (&'a [u8], &'a [u8], i32);
    let mut groups: HashMap<Key<'_>, (u64, BTreeMap<RegionIdx, u64>)> = HashMap::new();
    for (c, r) in commits.iter().zip(results) {
        debug_assert_eq!(c.sha1, r.sha1);
        let (total, regions) = groups
            .entry((&c.author_name, &c.author_email, r.year))
            .or_default();
        *total += 1;
        if let Some(region) = r.region {
            *regions.entry(region).or_default() += 1;
        }
    }
    let mut out: Vec<AuthorYearAssignment> = groups
        .into_iter()
        .filter(|(_, (total, _))| *total >= u64::from(threshold))
        .map(|((name, email, year), (total, regions))| {
            // max_by_key keeps the last maximum; iterate in reverse so the
            // earliest region wins ties.
            let slot = regions
                .iter()
                .rev()
                .max_by_key(|(_, &n)| n)
                .map_or(Slot::Unresolved, |(&r, _)| Slot::Region(r));
            AuthorYearAssignment {
                author: AuthorKey {
                    name: name.to_vec(),
                    email: email.to_vec(),
                },
                year,
                slot,
                commit_count_in_year: total,
            }
        })
        .collect();
    out.sort_by(|a, b| (a.year, &a.author).cmp(&(b.year, &b.author)));
    Ok(out)
}

pub fn aggregate_authors(
    assignments: &[AuthorYearAssignment],
    drop_unresolved: bool,
) -> YearRegionTable {
    let mut tally = Tally::default();
    for a in assignments {
        tally.add(a.year, a.slot);
    }
    tally.to_table(drop_unresolved)
}

/// Inclusive UTC offset range, in minutes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OffsetBand {
    pub lo_minutes: i16,
    pub hi_minutes: i16,
}

impl OffsetBand {
    pub fn from_hours(lo: f64, hi: f64) -> Result<OffsetBand> {
        let to_minutes = |h: f64| -> Result<i16> {
            let m = (h * 60.0).round();
            if !m.is_finite() || m.abs() >= 1440.0 {
                return Err(Error::Config(format!(
                    "offset band endpoint {h} out of range"
                )));
            }
            Ok(m as i16)
        };
        let band = OffsetBand {
            lo_minutes: to_minutes(lo)?,
            hi_minutes: to_minutes(hi)?,
        };
        if band.lo_minutes > band.hi_minutes {
            return Err(Error::Config(format!("offset band [{lo}, {hi}] is empty")));
        }
        Ok(band)
    }

    pub fn contains(&self, minutes: i16) -> bool {
        (self.lo_minutes..=self.hi_minutes).contains(&minutes)
    }
}

pub const DISAGREEMENT_FILE: &str = "disagreement.tsv";
pub const DISAGREEMENT_HEADER: &str = "email_region\toffset_name_region\tcommit_count\tshare";

/// Both methods applied independently to the same commits.
#[derive(Debug, Clone, PartialEq)]
pub struct DisagreementReport {
    pub band: OffsetBand,
    /// (email-method region, offset/name-method slot) → commits.
    pub matrix: BTreeMap<(RegionIdx, Slot), u64>,
}

impl DisagreementReport {
    pub fn total(&self) -> u64 {
        self.matrix.values().sum()
    }

    fn share(&self, n: u64) -> f64 {
        match self.total() {
            0 => 0.0,
            total => n as f64 / total as f64,
        }
    }

    pub fn email_share(&self, region: RegionIdx) -> f64 {
        self.share(
            self.matrix
                .iter()
                .filter(|((e, _), _)| *e == region)
                .map(|(_, n)| n)
                .sum(),
        )
    }

    pub fn offset_name_share(&self, slot: Slot) -> f64 {
        self.share(
            self.matrix
                .iter()
                .filter(|((_, o), _)| *o == slot)
                .map(|(_, n)| n)
                .sum(),
        )
    }

    /// Share of commits where the two methods disagree.
    pub fn disagreement_rate(&self) -> f64 {
        self.share(
            self.matrix
                .iter()
                .filter(|((e, o), _)| Slot::Region(*e) != *o)
                .map(|(_, n)| n)
                .sum(),
        )
    }

    pub fn to_tsv(&self, taxonomy: &RegionTaxonomy) -> String {
        let mut out = format!("{DISAGREEMENT_HEADER}\n");
        for (&(email, offset_name), &n) in &self.matrix {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{:.6}",
                taxonomy.id(email),
                offset_name.label(taxonomy),
                n,
                self.share(n)
            );
        }
        out
    }
}

/// Compares the methods on commits whose offset is in `band` and whose
/// email has a mapped ccTLD. The offset/name side runs without fallback, so
/// its failures show up as `Unresolved`.
pub fn method_disagreement(
    commits: &[CommitRecord],
    refs: &Refs,
    band: OffsetBand,
) -> DisagreementReport {
    let mut matrix = BTreeMap::new();
    for c in commits
        .iter()
        .filter(|c| band.contains(c.utc_offset_minutes))
    {
        let Some(email_region) = cctld_region(&c.author_email, &refs.cctld) else {
            continue;
        };
        let offset_name = classify_name(&c.author_name)
            .plausible_name()
            .and_then(|name| {
                offset_name_decision(name, c.author_timestamp, c.utc_offset_minutes, refs).region
            });
        *matrix
            .entry((email_region, Slot::from(offset_name)))
            .or_default() += 1;
    }
    DisagreementReport { band, matrix }
}

pub const DOMAIN_DRIFT_FILE: &str = "domain_drift.tsv";
pub const DOMAIN_DRIFT_HEADER: &str = "year\tregion_id\tcommit_count\tshare";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftRow {
    pub year: i32,
    pub slot: Slot,
    pub commit_count: u64,
    pub share: f64,
}

fn normalize_domain(d: &str) -> String {
    d.trim().trim_start_matches(['@', '.']).to_ascii_lowercase()
}

/// True when the email's domain is `domain` or a subdomain of it,
/// case-insensitively.
pub fn email_in_domain(email: &[u8], domain: &str) -> bool {
    let Some(host) = email_domain(email) else {
        return false;
    };
    let host = host.to_ascii_lowercase();
    let d = domain.as_bytes();
    host == d
        || (host.len() > d.len() && host.ends_with(d) && host[host.len() - d.len() - 1] == b'.')
}

/// Per-year region shares among commits whose author email is in one of
/// `domains`. Years with no matching commit have no rows.
pub fn domain_drift(
    commits: &[CommitRecord],
    results: &[GeolocationResult],
    domains: &[String],
) -> Result<Vec<DriftRow>> {
    let domains: Vec<String> = domains
        .iter()
        .map(|d| normalize_domain(d))
        .filter(|d| !d.is_empty())
        .collect();
    if domains.is_empty() {
        return Err(Error::Config("domain list is empty".into()));
    }
    let matching = commits
        .iter()
        .zip(results)
        .filter(|(c, _)| domains.iter().any(|d| email_in_domain(&c.author_email, d)))
        .map(|(_, r)| r);
    let table = tally_commits(matching).to_table(false);
    Ok(table
        .rows
        .into_iter()
        .map(|r| DriftRow {
            year: r.year,
            slot: r.slot,
            commit_count: r.count,
            share: r.ratio,
        })
        .collect())
}

pub fn drift_to_tsv(rows: &[DriftRow], taxonomy: &RegionTaxonomy) -> String {
    let mut out = format!("{DOMAIN_DRIFT_HEADER}\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{:.6}",
            r.year,
            r.slot.label(taxonomy),
            r.commit_count,
            r.share
        );
    }
    out
}
