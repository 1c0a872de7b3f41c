// SPDX-License-Identifier: Apache-2.0

//! Commit metadata ingestion: the neutral commit TSV, `git log` exports,
//! SHA1 dedup and the ⟨name, email⟩ author universe.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::io::{self, BufRead, Write};

use jiff::tz::Offset;

use crate::tsv;

pub const COMMIT_TSV_HEADER: &str =
    "sha1\tauthor_name\tauthor_email\tauthor_timestamp\ttz_offset_minutes";

/// Arguments for `git` producing the record format read by [`parse_git_log`].
///
/// Each commit is `%H 0x1F %an 0x1F %ae 0x1F %at 0x1F %ad 0x1E`, with
/// `--date=raw` so that `%ad` ends in the `±HHMM` author offset.
pub const GIT_LOG_ARGS: &[&str] = &[
    "log",
    "--no-show-signature",
    "--date=raw",
    "--format=%H%x1f%an%x1f%ae%x1f%at%x1f%ad%x1e",
];

/// Largest accepted |offset|, exclusive.
pub const MAX_OFFSET_MINUTES: i32 = 1440;

/// Latest accepted author timestamp (9999-12-30T00:00:00Z).
const MAX_TIMESTAMP: i64 = 253_402_128_000;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sha1([u8; 20]);

impl Sha1 {
    /// Parses exactly 40 lowercase hex digits.
    pub fn parse(text: &[u8]) -> Option<Sha1> {
        if text.len() != 40 || !text.iter().all(|b| matches!(b, b'0'..=b'9' | b'a'..=b'f')) {
            return None;
        }
        let mut bytes = [0u8; 20];
        hex::decode_to_slice(text, &mut bytes).ok()?;
        Some(Sha1(bytes))
    }

    pub fn from_bytes(bytes: [u8; 20]) -> Sha1 {
        Sha1(bytes)
    }

    pub fn as_bytes(&self) -> &[u8; 20] {
        &self.0
    }
}

impl fmt::Display for Sha1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&hex::encode(self.0))
    }
}

impl fmt::Debug for Sha1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sha1({self})")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommitRecord {
    pub sha1: Sha1,
    pub author_name: Vec<u8>,
    pub author_email: Vec<u8>,
    /// Seconds since the Unix epoch, UTC. Never negative.
    pub author_timestamp: i64,
    pub utc_offset_minutes: i16,
}

impl CommitRecord {
    /// Calendar year of the author timestamp, in UTC.
    pub fn year(&self) -> i32 {
        year_of(self.author_timestamp)
    }

    pub fn author_key(&self) -> AuthorKey {
        AuthorKey {
            name: self.author_name.clone(),
            email: self.author_email.clone(),
        }
    }
}

/// Calendar year of a Unix timestamp in UTC.
pub fn year_of(timestamp: i64) -> i32 {
    let ts = jiff::Timestamp::from_second(timestamp.clamp(0, MAX_TIMESTAMP))
        .expect("clamped timestamp is in range");
    i32::from(Offset::UTC.to_datetime(ts).year())
}

/// An author identity: the byte-exact ⟨name, email⟩ pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AuthorKey {
    pub name: Vec<u8>,
    pub email: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SkipReason {
    WrongFieldCount(usize),
    BadSha1,
    BadEscape,
    NonIntegerTimestamp,
    NegativeTimestamp,
    TimestampOutOfRange,
    NonIntegerOffset,
    OffsetOutOfRange,
    BadOffsetFormat,
}

impl fmt::Display for SkipReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SkipReason::WrongFieldCount(n) => write!(f, "expected 5 fields, found {n}"),
            SkipReason::BadSha1 => f.write_str("bad sha1"),
            SkipReason::BadEscape => f.write_str("bad escape"),
            SkipReason::NonIntegerTimestamp => f.write_str("non-integer timestamp"),
            SkipReason::NegativeTimestamp => f.write_str("negative timestamp"),
            SkipReason::TimestampOutOfRange => f.write_str("timestamp out of range"),
            SkipReason::NonIntegerOffset => f.write_str("non-integer offset"),
            SkipReason::OffsetOutOfRange => f.write_str("offset out of range"),
            SkipReason::BadOffsetFormat => f.write_str("unparsable offset"),
        }
    }
}

/// A row or record that could not be parsed. `line` is 1-based: the physical
/// line for TSV input, the record ordinal for git-log input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedRow {
    pub line: usize,
    pub reason: SkipReason,
}

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("missing header: expected `{expected}`, found `{found}`")]
    MissingHeader {
        expected: &'static str,
        found: String,
    },
    #[error("read error: {0}")]
    Io(#[from] io::Error),
}

impl IngestError {
    pub fn reason(&self) -> &'static str {
        match self {
            IngestError::MissingHeader { .. } => "missing header",
            IngestError::Io(_) => "io error",
        }
    }
}

#[derive(Debug)]
pub enum ParsedRow {
    Record(CommitRecord),
    Skipped(SkippedRow),
}

#[derive(Debug, Default)]
pub struct ParsedCommits {
    pub records: Vec<CommitRecord>,
    pub skipped: Vec<SkippedRow>,
}

impl ParsedCommits {
    fn push(&mut self, row: ParsedRow) {
        match row {
            ParsedRow::Record(r) => self.records.push(r),
            ParsedRow::Skipped(s) => self.skipped.push(s),
        }
    }
}

/// Streaming reader over the commit TSV. Blank lines are ignored.
pub struct CommitTsvReader<R> {
    input: R,
    line: usize,
    buf: Vec<u8>,
}

impl<R: BufRead> CommitTsvReader<R> {
    pub fn new(mut input: R) -> Result<Self, IngestError> {
        let mut buf = Vec::new();
        input.read_until(b'\n', &mut buf)?;
        let header = trim_newline(&buf);
        if header != COMMIT_TSV_HEADER.as_bytes() {
            return Err(IngestError::MissingHeader {
                expected: COMMIT_TSV_HEADER,
                found: String::from_utf8_lossy(header).into_owned(),
            });
        }
        Ok(CommitTsvReader {
            input,
            line: 1,
            buf,
        })
    }
}

impl<R: BufRead> Iterator for CommitTsvReader<R> {
    type Item = Result<ParsedRow, IngestError>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            self.buf.clear();
            match self.input.read_until(b'\n', &mut self.buf) {
                Ok(0) => return None,
                Ok(_) => {}
                Err(e) => return Some(Err(e.into())),
            }
            self.line += 1;
            let line = trim_newline(&self.buf);
            if line.is_empty() {
                continue;
            }
            let row = match parse_tsv_row(line) {
                Ok(record) => ParsedRow::Record(record),
                Err(reason) => ParsedRow::Skipped(SkippedRow {
                    line: self.line,
                    reason,
                }),
            };
            return Some(Ok(row));
        }
    }
}

fn trim_newline(line: &[u8]) -> &[u8] {
    line.strip_suffix(b"\n").unwrap_or(line)
}

fn parse_tsv_row(line: &[u8]) -> Result<CommitRecord, SkipReason> {
    let fields: Vec<&[u8]> = tsv::split_fields(line).collect();
    let [sha1, name, email, timestamp, offset] = fields[..] else {
        return Err(SkipReason::WrongFieldCount(fields.len()));
    };
    let sha1 = Sha1::parse(sha1).ok_or(SkipReason::BadSha1)?;
    let author_name = tsv::unescape(name).map_err(|_| SkipReason::BadEscape)?;
    let author_email = tsv::unescape(email).map_err(|_| SkipReason::BadEscape)?;
    let author_timestamp = parse_timestamp(timestamp)?;
    let offset: i64 = parse_int(offset).ok_or(SkipReason::NonIntegerOffset)?;
    Ok(CommitRecord {
        sha1,
        author_name,
        author_email,
        author_timestamp,
        utc_offset_minutes: check_offset(offset)?,
    })
}

fn parse_int(field: &[u8]) -> Option<i64> {
    std::str::from_utf8(field).ok()?.parse().ok()
}

fn parse_timestamp(field: &[u8]) -> Result<i64, SkipReason> {
    let ts = parse_int(field).ok_or(SkipReason::NonIntegerTimestamp)?;
    if ts < 0 {
        Err(SkipReason::NegativeTimestamp)
    } else if ts > MAX_TIMESTAMP {
        Err(SkipReason::TimestampOutOfRange)
    } else {
        Ok(ts)
    }
}

fn check_offset(minutes: i64) -> Result<i16, SkipReason> {
    if minutes.abs() >= i64::from(MAX_OFFSET_MINUTES) {
        return Err(SkipReason::OffsetOutOfRange);
    }
    Ok(minutes as i16)
}

/// Parses a commit TSV, collecting valid records and per-row skip reports.
pub fn parse_commit_tsv<R: BufRead>(input: R) -> Result<ParsedCommits, IngestError> {
    let mut parsed = ParsedCommits::default();
    for row in CommitTsvReader::new(input)? {
        parsed.push(row?);
    }
    Ok(parsed)
}

/// Formats one record as a TSV line, without the trailing newline.
pub fn format_commit_row(record: &CommitRecord) -> String {
    let mut line = String::with_capacity(80 + record.author_name.len() + record.author_email.len());
    line.push_str(&record.sha1.to_string());
    line.push('\t');
    tsv::escape_into(&record.author_name, &mut line);
    line.push('\t');
    tsv::escape_into(&record.author_email, &mut line);
    line.push('\t');
    line.push_str(&record.author_timestamp.to_string());
    line.push('\t');
    line.push_str(&record.utc_offset_minutes.to_string());
    line
}

pub fn write_commit_tsv<'a, W: Write>(
    out: &mut W,
    records: impl IntoIterator<Item = &'a CommitRecord>,
) -> io::Result<()> {
    writeln!(out, "{COMMIT_TSV_HEADER}")?;
    for record in records {
        writeln!(out, "{}", format_commit_row(record))?;
    }
    Ok(())
}

/// Parses a `git log` export produced with [`GIT_LOG_ARGS`].
pub fn parse_git_log<R: BufRead>(mut input: R) -> Result<ParsedCommits, IngestError> {
    let mut parsed = ParsedCommits::default();
    let mut buf = Vec::new();
    let mut ordinal = 0;
    loop {
        buf.clear();
        if input.read_until(0x1e, &mut buf)? == 0 {
            break;
        }
        let record = buf.strip_suffix(&[0x1e]).unwrap_or(&buf);
        let record = trim_leading_newlines(record);
        if record.iter().all(u8::is_ascii_whitespace) {
            continue;
        }
        ordinal += 1;
        parsed.push(match parse_git_record(record) {
            Ok(r) => ParsedRow::Record(r),
            Err(reason) => ParsedRow::Skipped(SkippedRow {
                line: ordinal,
                reason,
            }),
        });
    }
    Ok(parsed)
}

fn trim_leading_newlines(mut record: &[u8]) -> &[u8] {
    while let [b'\n' | b'\r', rest @ ..] = record {
        record = rest;
    }
    record
}

fn parse_git_record(record: &[u8]) -> Result<CommitRecord, SkipReason> {
    let fields: Vec<&[u8]> = record.split(|&b| b == 0x1f).collect();
    let [sha1, name, email, timestamp, date] = fields[..] else {
        return Err(SkipReason::WrongFieldCount(fields.len()));
    };
    let sha1 = Sha1::parse(sha1).ok_or(SkipReason::BadSha1)?;
    let author_timestamp = parse_timestamp(timestamp)?;
    // `%ad` with --date=raw is "<seconds> <±HHMM>"; the offset is the last word.
    let offset = date
        .split(u8::is_ascii_whitespace)
        .rfind(|w| !w.is_empty())
        .ok_or(SkipReason::BadOffsetFormat)?;
    let minutes = parse_hhmm_offset(offset).ok_or(SkipReason::BadOffsetFormat)?;
    Ok(CommitRecord {
        sha1,
        author_name: name.to_vec(),
        author_email: email.to_vec(),
        author_timestamp,
        utc_offset_minutes: check_offset(minutes.into())?,
    })
}

/// Converts a git `±HHMM` offset to signed minutes. `-0000` yields 0.
pub fn parse_hhmm_offset(text: &[u8]) -> Option<i32> {
    let [sign, h1, h2, m1, m2] = *text else {
        return None;
    };
    let sign = match sign {
        b'+' => 1,
        b'-' => -1,
        _ => return None,
    };
    let digit = |b: u8| b.is_ascii_digit().then(|| i32::from(b - b'0'));
    let hours = digit(h1)? * 10 + digit(h2)?;
    let minutes = digit(m1)? * 10 + digit(m2)?;
    if minutes >= 60 {
        return None;
    }
    Some(sign * (hours * 60 + minutes))
}

#[derive(Debug, Default)]
pub struct Deduped {
    pub commits: Vec<CommitRecord>,
    pub duplicates: usize,
}

/// Keeps the first occurrence of each SHA1, preserving input order.
pub fn dedupe_commits(commits: impl IntoIterator<Item = CommitRecord>) -> Deduped {
    let mut seen = HashSet::new();
    let mut out = Deduped::default();
    for commit in commits {
        if seen.insert(commit.sha1) {
            out.commits.push(commit);
        } else {
            out.duplicates += 1;
        }
    }
    out
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AuthorStats {
    pub total: u64,
    pub per_year: BTreeMap<i32, u64>,
}

/// Distinct ⟨name, email⟩ authors with their commit counts, ordered by key.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AuthorUniverse {
    pub authors: BTreeMap<AuthorKey, AuthorStats>,
}

impl AuthorUniverse {
    pub fn len(&self) -> usize {
        self.authors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.authors.is_empty()
    }

    pub fn get(&self, key: &AuthorKey) -> Option<&AuthorStats> {
        self.authors.get(key)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&AuthorKey, &AuthorStats)> {
        self.authors.iter()
    }

    pub fn total_commits(&self) -> u64 {
        self.authors.values().map(|s| s.total).sum()
    }
}

/// Builds the author universe from SHA1-deduplicated commits.
pub fn extract_authors(commits: &[CommitRecord]) -> AuthorUniverse {
    let mut stats: HashMap<(&[u8], &[u8]), AuthorStats> = HashMap::new();
    for commit in commits {
        let entry = stats
            .entry((&commit.author_name, &commit.author_email))
            .or_default();
        entry.total += 1;
        *entry.per_year.entry(commit.year()).or_default() += 1;
    }
    AuthorUniverse {
        authors: stats
            .into_iter()
            .map(|((name, email), s)| {
                let key = AuthorKey {
                    name: name.to_vec(),
                    email: email.to_vec(),
                };
                (key, s)
            })
            .collect(),
    }
}
