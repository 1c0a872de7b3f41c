// SPDX-License-Identifier: Apache-2.0

//! `geodiverse` command-line tool.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::{Command as Process, ExitCode};

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use geodiverse_core::aggregator::{
    aggregate_authors, aggregate_commits, assign_author_years, domain_drift, drift_to_tsv,
    method_disagreement, OffsetBand, TableKind, YearRegionTable, DEFAULT_AUTHOR_THRESHOLD,
    DISAGREEMENT_FILE, DOMAIN_DRIFT_FILE,
};
use geodiverse_core::geolocator::{
    format_result_row, geolocate_all, parse_results, GeolocationResult, GEOLOCATION_HEADER,
};
use geodiverse_core::ingest::{
    dedupe_commits, extract_authors, parse_commit_tsv, parse_git_log, write_commit_tsv,
    CommitRecord, GIT_LOG_ARGS,
};
use geodiverse_core::name_filter::{classify_name, lookup_key, tokenize_name, RejectReason};
use geodiverse_core::refs::{NameList, Refs};
use geodiverse_core::report::{emit_stacked_chart, run_pipeline, write_file, RunConfig};
use geodiverse_core::scorer::{decide_region, score_places};
use geodiverse_core::tsv;
use geodiverse_core::tz::{tzdb_version, OffsetQuery};
use geodiverse_core::{Error, Result, TOOL_VERSION};

#[derive(Parser)]
#[command(
    name = "geodiverse",
    about = "Geolocate commit authors and chart regional diversity"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Convert a repository's history (or saved git-log output) to commit TSV.
    IngestGit(IngestGitArgs),
    /// Load and cross-check the reference data.
    ValidateRefs(RefsArg),
    /// Classify every distinct author name.
    FilterAuthors(FilterArgs),
    /// Assign a region to every commit.
    Geolocate(GeolocateArgs),
    /// Build yearly tables from commits and geolocation results.
    Aggregate(AggregateArgs),
    /// Draw a stacked bar chart from a yearly table.
    Plot(PlotArgs),
    /// Run the whole pipeline.
    Run(RunArgs),
    /// Show the offset/name scoring breakdown for one name.
    Score(ScoreArgs),
}

#[derive(Args)]
struct RefsArg {
    /// Reference data directory.
    #[arg(long, env = "GEODIVERSE_REFS", default_value = "data/refs")]
    refs: PathBuf,
}

#[derive(Args)]
struct IngestGitArgs {
    /// Repository to run `git log` in.
    #[arg(long, conflicts_with = "input", required_unless_present = "input")]
    repo: Option<PathBuf>,
    /// File with output of `git log` using the tool's format.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct FilterArgs {
    #[arg(long)]
    commits: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct Pipeline {
    #[arg(long)]
    commits: PathBuf,
    #[command(flatten)]
    refs: RefsArg,
    /// Inclusive year range, e.g. 1990..2020.
    #[arg(long, value_parser = parse_years, allow_hyphen_values = true)]
    years: Option<(i32, i32)>,
    /// Worker threads for geolocation.
    #[arg(long, default_value_t = 1)]
    parallelism: usize,
}

#[derive(Args)]
struct GeolocateArgs {
    #[command(flatten)]
    pipeline: Pipeline,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct TableOptions {
    /// Minimum commits in a year for an author to be active.
    #[arg(long, default_value_t = DEFAULT_AUTHOR_THRESHOLD)]
    author_threshold: u32,
    /// Renormalize over resolved commits only.
    #[arg(long)]
    drop_unresolved: bool,
    /// UTC offset band in hours for the method comparison, e.g. 0..3.
    #[arg(long, value_parser = parse_band, default_value = "0..3", allow_hyphen_values = true)]
    disagreement_band: OffsetBand,
    /// Comma-separated email domains for the drift table.
    #[arg(long, value_delimiter = ',')]
    domains: Option<Vec<String>>,
}

#[derive(Args)]
struct AggregateArgs {
    #[command(flatten)]
    pipeline: Pipeline,
    /// Geolocation TSV written by `geolocate`.
    #[arg(long)]
    geolocation: PathBuf,
    #[command(flatten)]
    options: TableOptions,
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Commits,
    Authors,
}

impl From<Which> for TableKind {
    fn from(w: Which) -> Self {
        match w {
            Which::Commits => TableKind::Commits,
            Which::Authors => TableKind::Authors,
        }
    }
}

#[derive(Args)]
struct PlotArgs {
    #[arg(long)]
    table: PathBuf,
    #[arg(long, value_enum)]
    kind: Which,
    #[command(flatten)]
    refs: RefsArg,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    pipeline: Pipeline,
    #[command(flatten)]
    options: TableOptions,
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct ScoreArgs {
    #[arg(long)]
    name: String,
    /// UTC offset in minutes.
    #[arg(long, allow_hyphen_values = true)]
    offset: i16,
    /// Instant as RFC 3339 (2020-01-15T12:00:00Z) or Unix seconds.
    #[arg(long)]
    when: String,
    #[command(flatten)]
    refs: RefsArg,
}

fn parse_range<T: std::str::FromStr>(s: &str) -> Result<(T, T), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected LO..HI, got `{s}`"))?;
    let p = |v: &str| {
        v.trim()
            .parse::<T>()
            .map_err(|_| format!("bad number `{v}`"))
    };
    Ok((p(lo)?, p(hi)?))
}

fn parse_years(s: &str) -> Result<(i32, i32), String> {
    parse_range(s)
}

fn parse_band(s: &str) -> Result<OffsetBand, String> {
    let (lo, hi) = parse_range::<f64>(s)?;
    OffsetBand::from_hours(lo, hi).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let version: &'static str =
        Box::leak(format!("{TOOL_VERSION} (tzdb {})", tzdb_version()).into_boxed_str());
    let matches = Cli::command().version(version).get_matches();
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let line = serde_json::json!({ "error": e.reason(), "detail": e.to_string() });
            eprintln!("{line}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::IngestGit(a) => ingest_git(a),
        Cmd::ValidateRefs(a) => validate_refs(&a.refs),
        Cmd::FilterAuthors(a) => filter_authors(a),
        Cmd::Geolocate(a) => geolocate(a),
        Cmd::Aggregate(a) => aggregate(a),
        Cmd::Plot(a) => plot(a),
        Cmd::Run(a) => run(a),
        Cmd::Score(a) => score(a),
    }
}

fn print_json(value: &impl Serialize) {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    // A closed pipe (e.g. `| head`) is not an error worth reporting.
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| Error::io(path, e))
}

fn ingest_git(a: IngestGitArgs) -> Result<()> {
    let log = match (&a.repo, &a.input) {
        (Some(repo), _) => {
            let out = Process::new("git")
                .arg("-C")
                .arg(repo)
                .args(GIT_LOG_ARGS)
                .output()
                .map_err(|e| Error::io(repo, e))?;
            if !out.status.success() {
                return Err(Error::Config(format!(
                    "git log failed: {}",
                    String::from_utf8_lossy(&out.stderr).trim()
                )));
            }
            out.stdout
        }
        (None, Some(input)) => read(input)?,
        (None, None) => unreachable!("clap requires one source"),
    };
    let parsed = parse_git_log(BufReader::new(log.as_slice()))?;
    let mut file = fs::File::create(&a.out).map_err(|e| Error::io(&a.out, e))?;
    write_commit_tsv(&mut file, &parsed.records)
        .and_then(|()| file.flush())
        .map_err(|e| Error::io(&a.out, e))?;
    print_json(&serde_json::json!({
        "commits": parsed.records.len(),
        "skipped": parsed.skipped.len(),
    }));
    Ok(())
}

fn validate_refs(dir: &Path) -> Result<()> {
    let refs = Refs::load(dir)?;
    let problems = refs.integrity_problems();
    if !problems.is_empty() {
        return Err(Error::Config(problems.join("; ")));
    }
    print_json(&serde_json::json!({
        "regions": refs.taxonomy.len(),
        "places": refs.places.len(),
        "cctlds": refs.cctld.len(),
        "forenames": refs.names.list(NameList::Forenames).len(),
        "surnames": refs.names.list(NameList::Surnames).len(),
        "tz_intervals": refs.tz.interval_count(),
        "tzdb_version": tzdb_version(),
        "digests": refs.digests,
    }));
    Ok(())
}

/// Reads, deduplicates and year-filters a commit TSV.
fn load_commits(path: &Path, years: Option<(i32, i32)>) -> Result<Vec<CommitRecord>> {
    let raw = read(path)?;
    let parsed = parse_commit_tsv(BufReader::new(raw.as_slice()))?;
    for s in &parsed.skipped {
        eprintln!("{}:{}: skipped: {}", path.display(), s.line, s.reason);
    }
    let mut commits = dedupe_commits(parsed.records).commits;
    if let Some((lo, hi)) = years {
        if lo > hi {
            return Err(Error::Config(format!("year range {lo}..{hi} is empty")));
        }
        commits.retain(|c| (lo..=hi).contains(&c.year()));
    }
    Ok(commits)
}

fn filter_authors(a: FilterArgs) -> Result<()> {
    let commits = load_commits(&a.commits, None)?;
    let universe = extract_authors(&commits);
    let mut out = String::from("author_name\tauthor_email\tcommit_count\tverdict\treason\n");
    let mut summary: BTreeMap<&str, u64> = BTreeMap::new();
    let mut plausible = 0u64;
    for (key, stats) in universe.iter() {
        let verdict = classify_name(&key.name);
        let (label, reason) = match verdict.reason() {
            None => {
                plausible += 1;
                ("plausible", "")
            }
            Some(r) => {
                *summary.entry(r.as_str()).or_default() += 1;
                ("rejected", r.as_str())
            }
        };
        out.push_str(&format!(
            "{}\t{}\t{}\t{label}\t{reason}\n",
            tsv::escape(&key.name),
            tsv::escape(&key.email),
            stats.total
        ));
    }
    write_file(&a.out, out.as_bytes())?;
    let rejected: BTreeMap<&str, u64> = RejectReason::ALL
        .iter()
        .map(|r| (r.as_str(), summary.get(r.as_str()).copied().unwrap_or(0)))
        .collect();
    print_json(&serde_json::json!({
        "authors": universe.len(),
        "plausible": plausible,
        "rejected": rejected,
    }));
    Ok(())
}

fn geolocate(a: GeolocateArgs) -> Result<()> {
    let refs = Refs::load(&a.pipeline.refs.refs)?;
    let commits = load_commits(&a.pipeline.commits, a.pipeline.years)?;
    let (results, stats) = geolocate_all(&commits, &refs, a.pipeline.parallelism);
    let mut out = format!("{GEOLOCATION_HEADER}\n");
    for r in &results {
        out.push_str(&format_result_row(r, &refs));
        out.push('\n');
    }
    write_file(&a.out, out.as_bytes())?;
    let mut meta_path = a.out.clone().into_os_string();
    meta_path.push(".meta.json");
    let meta = serde_json::json!({
        "tool_version": TOOL_VERSION,
        "tzdb_version": tzdb_version(),
        "refs": refs.digests,
        "stats": stats,
    });
    let mut meta = serde_json::to_string_pretty(&meta).expect("serializable");
    meta.push('\n');
    write_file(Path::new(&meta_path), meta.as_bytes())?;
    print_json(&stats);
    Ok(())
}

fn aggregate(a: AggregateArgs) -> Result<()> {
    let refs = Refs::load(&a.pipeline.refs.refs)?;
    let commits = load_commits(&a.pipeline.commits, a.pipeline.years)?;
    let text = String::from_utf8(read(&a.geolocation)?)
        .map_err(|_| Error::Config("geolocation file is not UTF-8".into()))?;
    let parsed = parse_results(&text, &refs).map_err(Error::Config)?;
    let by_sha: HashMap<_, GeolocationResult> = parsed.into_iter().map(|r| (r.sha1, r)).collect();
    let results = commits
        .iter()
        .map(|c| {
            by_sha.get(&c.sha1).copied().ok_or_else(|| {
                Error::Config(format!("no geolocation result for commit {}", c.sha1))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    write_tables(&commits, &results, &refs, &a.options, &a.out_dir)
}

fn write_tables(
    commits: &[CommitRecord],
    results: &[GeolocationResult],
    refs: &Refs,
    o: &TableOptions,
    out_dir: &Path,
) -> Result<()> {
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let t = &refs.taxonomy;
    let commit_table = aggregate_commits(results, o.drop_unresolved);
    let assignments = assign_author_years(commits, results, o.author_threshold)?;
    let author_table = aggregate_authors(&assignments, o.drop_unresolved);
    let disagreement = method_disagreement(commits, refs, o.disagreement_band);
    for (kind, table) in [
        (TableKind::Commits, &commit_table),
        (TableKind::Authors, &author_table),
    ] {
        write_file(
            &out_dir.join(kind.file_name()),
            table.to_tsv(kind, t).as_bytes(),
        )?;
    }
    write_file(
        &out_dir.join(DISAGREEMENT_FILE),
        disagreement.to_tsv(t).as_bytes(),
    )?;
    if let Some(domains) = &o.domains {
        let rows = domain_drift(commits, results, domains)?;
        write_file(
            &out_dir.join(DOMAIN_DRIFT_FILE),
            drift_to_tsv(&rows, t).as_bytes(),
        )?;
    }
    Ok(())
}

fn plot(a: PlotArgs) -> Result<()> {
    let refs = Refs::load(&a.refs.refs)?;
    let text = String::from_utf8(read(&a.table)?)
        .map_err(|_| Error::Config("table is not UTF-8".into()))?;
    let kind = TableKind::from(a.kind);
    let table = YearRegionTable::from_tsv(&text, kind, &refs.taxonomy)?;
    let svg = emit_stacked_chart(&table, &refs.taxonomy, kind)?;
    write_file(&a.out, svg.as_bytes())
}

fn run(a: RunArgs) -> Result<()> {
    let mut config = RunConfig::new(&a.pipeline.commits, &a.pipeline.refs.refs, &a.out_dir);
    config.author_threshold = a.options.author_threshold;
    config.drop_unresolved = a.options.drop_unresolved;
    config.years = a.pipeline.years;
    config.parallelism = a.pipeline.parallelism;
    config.disagreement_band = a.options.disagreement_band;
    config.drift_domains = a.options.domains;
    let manifest = run_pipeline(&config)?;
    print_json(&serde_json::json!({
        "commits": manifest.geolocation.commits,
        "outputs": manifest.outputs.keys().collect::<Vec<_>>(),
    }));
    Ok(())
}

fn parse_when(s: &str) -> Result<i64> {
    if let Ok(secs) = s.parse::<i64>() {
        return Ok(secs);
    }
    s.parse::<jiff::Timestamp>()
        .map(|t| t.as_second())
        .map_err(|e| Error::Config(format!("bad --when `{s}`: {e}")))
}

fn score(a: ScoreArgs) -> Result<()> {
    let refs = Refs::load(&a.refs.refs)?;
    let instant = parse_when(&a.when)?;
    let verdict = classify_name(a.name.as_bytes());
    let Some(name) = verdict.plausible_name() else {
        print_json(&serde_json::json!({
            "name": a.name,
            "rejected": verdict.reason().map(RejectReason::as_str),
        }));
        return Ok(());
    };
    let tokens = tokenize_name(name);
    let candidates = refs.tz.candidate_places(OffsetQuery {
        instant,
        offset_minutes: a.offset,
    });
    let scores = score_places(&tokens, &candidates, &refs.places, &refs.names);
    let decision = decide_region(&scores, &refs.places, &refs.taxonomy);
    let places: Vec<_> = scores
        .iter()
        .filter(|s| s.score > 0.0)
        .map(|s| {
            let place = refs.places.place(s.place);
            let terms: Vec<_> = tokens
                .iter()
                .flat_map(|tok| {
                    [
                        ("forename", NameList::Forenames),
                        ("surname", NameList::Surnames),
                    ]
                    .into_iter()
                    .filter_map(|(label, list)| {
                        let f = refs.names.frequency(list, &lookup_key(tok), s.place);
                        (f > 0.0).then(|| {
                            serde_json::json!({
                                "token": tok, "list": label, "frequency": f,
                                "contribution": place.population as f64 * f,
                            })
                        })
                    })
                    .collect::<Vec<_>>()
                })
                .collect();
            serde_json::json!({
                "place": place.id,
                "region": refs.taxonomy.id(place.region),
                "population": place.population,
                "score": s.score,
                "terms": terms,
            })
        })
        .collect();
    let region_scores: BTreeMap<&str, f64> = decision
        .region_scores
        .iter()
        .map(|(r, v)| (refs.taxonomy.id(*r), *v))
        .collect();
    print_json(&serde_json::json!({
        "name": name,
        "tokens": tokens,
        "instant": instant,
        "offset_minutes": a.offset,
        "candidate_places": candidates.len(),
        "places": places,
        "region_scores": region_scores,
        "region": decision.region.map(|r| refs.taxonomy.id(r)),
        "tied": decision.tied,
    }));
    Ok(())
}
