// SPDX-License-Identifier: Apache-2.0

//! Per-commit routing between the two geolocation methods.
//!
//! Commits with a non-zero UTC offset go through the offset/name scorer;
//! commits at UTC+00:00 use the email ccTLD only. When the offset/name path
//! produces no region (rejected name, no candidate place, all-zero scores)
//! the commit falls back to the email method. Anything still unplaced is
//! `Unresolved`.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::ingest::{CommitRecord, Sha1};
use crate::name_filter::{classify_name, tokenize_name, NameVerdict};
use crate::refs::{CcTldMap, Refs, RegionIdx};
use crate::scorer::{decide_region, score_places, RegionDecision};
use crate::tz::OffsetQuery;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    EmailCcTld,
    OffsetName,
    Unresolved,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::EmailCcTld => "email-cctld",
            Method::OffsetName => "offset-name",
            Method::Unresolved => "unresolved",
        }
    }

    pub fn parse(s: &str) -> Option<Method> {
        [Method::EmailCcTld, Method::OffsetName, Method::Unresolved]
            .into_iter()
            .find(|m| m.as_str() == s)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeolocationResult {
    pub sha1: Sha1,
    /// `None` exactly when `method` is `Unresolved`.
    pub region: Option<RegionIdx>,
    pub method: Method,
    pub tied: bool,
    /// UTC calendar year of the author timestamp.
    pub year: i32,
}

/// The part of an email after its last `@`, if any.
pub fn email_domain(email: &[u8]) -> Option<&[u8]> {
    let at = email.iter().rposition(|&b| b == b'@')?;
    Some(email[at + 1..].trim_ascii())
}

/// Region of the email's top-level label, when that label is a mapped ccTLD.
pub fn cctld_region(email: &[u8], map: &CcTldMap) -> Option<RegionIdx> {
    let domain = email_domain(email)?;
    let dot = domain.iter().rposition(|&b| b == b'.')?;
    map.lookup(&domain[dot + 1..])
}

/// Runs the offset/name method alone, without routing or fallback.
pub fn offset_name_decision(
    name: &str,
    instant: i64,
    offset_minutes: i16,
    refs: &Refs,
) -> RegionDecision {
    let tokens = tokenize_name(name);
    let candidates = refs.tz.candidate_places(OffsetQuery {
        instant,
        offset_minutes,
    });
    let scores = score_places(&tokens, &candidates, &refs.places, &refs.names);
    decide_region(&scores, &refs.places, &refs.taxonomy)
}

pub fn geolocate_commit(
    commit: &CommitRecord,
    verdict: &NameVerdict,
    refs: &Refs,
) -> GeolocationResult {
    let mut result = GeolocationResult {
        sha1: commit.sha1,
        region: None,
        method: Method::Unresolved,
        tied: false,
        year: commit.year(),
    };
    if commit.utc_offset_minutes != 0 {
        if let Some(name) = verdict.plausible_name() {
            let decision = offset_name_decision(
                name,
                commit.author_timestamp,
                commit.utc_offset_minutes,
                refs,
            );
            if decision.region.is_some() {
                result.region = decision.region;
                result.method = Method::OffsetName;
                result.tied = decision.tied;
                return result;
            }
        }
    }
    if let Some(region) = cctld_region(&commit.author_email, &refs.cctld) {
        result.region = Some(region);
        result.method = Method::EmailCcTld;
    }
    result
}

/// Counters recorded in run metadata.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct GeolocationStats {
    pub commits: u64,
    pub email_cctld: u64,
    pub offset_name: u64,
    pub unresolved: u64,
    /// Ties broken by taxonomy order.
    pub ties: u64,
    /// Non-zero-offset commits that did not get an offset/name region.
    pub offset_name_fallbacks: u64,
    /// Commits whose author name failed the plausibility filters.
    pub rejected_name_commits: u64,
}

impl GeolocationStats {
    fn record(&mut self, commit: &CommitRecord, verdict: &NameVerdict, result: &GeolocationResult) {
        self.commits += 1;
        match result.method {
            Method::EmailCcTld => self.email_cctld += 1,
            Method::OffsetName => self.offset_name += 1,
            Method::Unresolved => self.unresolved += 1,
        }
        self.ties += u64::from(result.tied);
        if commit.utc_offset_minutes != 0 && result.method != Method::OffsetName {
            self.offset_name_fallbacks += 1;
        }
        if verdict.plausible_name().is_none() {
            self.rejected_name_commits += 1;
        }
    }

    pub fn merge(&mut self, other: &GeolocationStats) {
        self.commits += other.commits;
        self.email_cctld += other.email_cctld;
        self.offset_name += other.offset_name;
        self.unresolved += other.unresolved;
        self.ties += other.ties;
        self.offset_name_fallbacks += other.offset_name_fallbacks;
        self.rejected_name_commits += other.rejected_name_commits;
    }
}

/// Name verdicts for every distinct author name in `commits`.
pub fn classify_names(commits: &[CommitRecord]) -> HashMap<&[u8], NameVerdict> {
    let mut verdicts = HashMap::new();
    for c in commits {
        verdicts
            .entry(c.author_name.as_slice())
            .or_insert_with(|| classify_name(&c.author_name));
    }
    verdicts
}

const CHUNK: usize = 4096;

/// Geolocates every commit, preserving input order.
///
/// `parallelism` ≤ 1 runs on the calling thread. Results never depend on it.
pub fn geolocate_all(
    commits: &[CommitRecord],
    refs: &Refs,
    parallelism: usize,
) -> (Vec<GeolocationResult>, GeolocationStats) {
    let verdicts = classify_names(commits);
    let run = |chunk: &[CommitRecord]| {
        let mut stats = GeolocationStats::default();
        let results: Vec<GeolocationResult> = chunk
            .iter()
            .map(|c| {
                let verdict = &verdicts[c.author_name.as_slice()];
                let r = geolocate_commit(c, verdict, refs);
                stats.record(c, verdict, &r);
                r
            })
            .collect();
        (results, stats)
    };
    if parallelism <= 1 {
        return run(commits);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism)
        .build()
        .expect("thread pool");
    let shards: Vec<(Vec<GeolocationResult>, GeolocationStats)> =
        pool.install(|| commits.par_chunks(CHUNK).map(run).collect());
    let mut results = Vec::with_capacity(commits.len());
    let mut stats = GeolocationStats::default();
    for (r, s) in shards {
        results.extend(r);
        stats.merge(&s);
    }
    (results, stats)
}

pub const GEOLOCATION_HEADER: &str = "sha1\tyear\tregion_id\tmethod\ttied";

pub fn format_result_row(result: &GeolocationResult, refs: &Refs) -> String {
    let region = result
        .region
        .map_or(crate::refs::UNRESOLVED_ID, |r| refs.taxonomy.id(r));
    format!(
        "{}\t{}\t{}\t{}\t{}",
        result.sha1, result.year, region, result.method, result.tied
    )
}

/// Parses a geolocation TSV written with [`GEOLOCATION_HEADER`].
pub fn parse_results(text: &str, refs: &Refs) -> Result<Vec<GeolocationResult>, String> {
    let mut lines = text.lines().enumerate();
    if lines.next().map(|(_, l)| l) != Some(GEOLOCATION_HEADER) {
        return Err(format!("expected header `{GEOLOCATION_HEADER}`"));
    }
    lines
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, line)| {
            let bad = |what: &str| format!("line {}: {what}", i + 1);
            let fields: Vec<&str> = line.split('\t').collect();
            let [sha1, year, region, method, tied] = fields[..] else {
                return Err(bad("expected 5 fields"));
            };
            let region = match region {
                crate::refs::UNRESOLVED_ID => None,
                id => Some(refs.taxonomy.get(id).ok_or_else(|| bad("unknown region"))?),
            };
            let method = Method::parse(method).ok_or_else(|| bad("unknown method"))?;
            if region.is_none() != (method == Method::Unresolved) {
                return Err(bad("region and method disagree"));
            }
            Ok(GeolocationResult {
                sha1: Sha1::parse(sha1.as_bytes()).ok_or_else(|| bad("bad sha1"))?,
                year: year.parse().map_err(|_| bad("bad year"))?,
                region,
                method,
                tied: tied.parse().map_err(|_| bad("bad tied flag"))?,
            })
        })
        .collect()
}
