// SPDX-License-Identifier: Apache-2.0

//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::fs;
use std::io::BufReader;
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use chrono::{Offset, TimeZone as _};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use geodiverse_core::aggregator::{
    aggregate_authors, assign_author_years, method_disagreement, tally_commits, OffsetBand, Slot,
    Tally,
};
use geodiverse_core::geolocator::{geolocate_all, GeolocationResult, Method};
use geodiverse_core::ingest::{parse_commit_tsv, CommitRecord, Sha1};
use geodiverse_core::name_filter::{classify_name, NameVerdict, RejectReason};
use geodiverse_core::refs::{
    parse_cctld_map, parse_name_frequencies, parse_places, parse_regions, NameList, PlaceIdx, Refs,
    RegionIdx,
};
use geodiverse_core::scorer::{decide_region, score_places};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn bundled_refs() -> Refs {
    Refs::load(&root().join("data/refs")).expect("bundled refs")
}

fn demo_commits() -> Vec<CommitRecord> {
    let raw = fs::read(root().join("data/demo/commits.tsv")).unwrap();
    parse_commit_tsv(BufReader::new(raw.as_slice()))
        .unwrap()
        .records
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn filter_conformance() -> Outcome {
    use RejectReason::*;
    let fixture: Vec<(Vec<u8>, Option<RejectReason>)> = vec![
        (b"Eric Allman".to_vec(), None),
        (b"Keith Bostic".to_vec(), None),
        ("José García".into(), None),
        ("Zoë O'Brien".into(), None),
        ("Jean-Luc Picard".into(), None),
        ("王伟".into(), None),
        ("Сергей Иванов".into(), None),
        ("e\u{301}mile Zola".into(), None),
        (b"John Smith 3rd".to_vec(), None),
        (b"Ann Lee @ home".to_vec(), None),
        ("A".repeat(100).into(), None),
        (b"\xff\xfeBob".to_vec(), Some(NotUtf8)),
        (b"Caf\xe9 Owner".to_vec(), Some(NotUtf8)),
        (b"bostic@bsdi.com".to_vec(), Some(IsEmail)),
        (b"  root@localhost.localdomain  ".to_vec(), Some(IsEmail)),
        (b"".to_vec(), Some(BlankOnly)),
        (b"   ".to_vec(), Some(BlankOnly)),
        (b"\t\n".to_vec(), Some(BlankOnly)),
        ("\u{3000}".into(), Some(BlankOnly)),
        (b"???".to_vec(), Some(TooManyNonLetters)),
        (b"x_1_2_3".to_vec(), Some(TooManyNonLetters)),
        (b"R2-D2".to_vec(), Some(TooManyNonLetters)),
        (b"J.R. Smith".to_vec(), Some(TooManyNonLetters)),
        (b"user@host".to_vec(), Some(TooManyNonLetters)),
        ("A".repeat(101).into(), Some(TooLong)),
    ];
    assert_eq!(fixture.len(), 25);
    let start = Instant::now();
    for (raw, want) in &fixture {
        let got = classify_name(raw).reason();
        check(got == *want, || {
            format!(
                "{:?}: got {got:?}, want {want:?}",
                String::from_utf8_lossy(raw)
            )
        })?;
    }
    for reason in RejectReason::ALL {
        check(fixture.iter().any(|(_, r)| *r == Some(reason)), || {
            format!("fixture lacks {reason:?}")
        })?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut counts: BTreeMap<&str, u64> = BTreeMap::new();
    for _ in 0..100_000 {
        let len = rng.gen_range(0..160);
        let bytes: Vec<u8> = (0..len).map(|_| rng.gen()).collect();
        let verdict = panic::catch_unwind(|| classify_name(&bytes))
            .map_err(|_| format!("panic on {bytes:?}"))?;
        let label = match &verdict {
            NameVerdict::Plausible(_) => "plausible",
            NameVerdict::Rejected(r) => r.as_str(),
        };
        *counts.entry(label).or_default() += 1;
    }
    let elapsed = start.elapsed();
    check(counts.values().sum::<u64>() == 100_000, || {
        "verdict count".into()
    })?;
    check(elapsed < Duration::from_secs(5), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "25/25 fixture verdicts; 1e5 fuzz inputs in {elapsed:.2?}"
    ))
}

struct ScorerFixture {
    regions: usize,
    /// (region, population)
    places: Vec<(usize, u64)>,
    /// (list, token, place, frequency)
    incidences: Vec<(NameList, String, usize, f64)>,
    tokens: Vec<String>,
    candidates: Vec<usize>,
}

impl ScorerFixture {
    fn random(rng: &mut ChaCha8Rng) -> Self {
        let regions = rng.gen_range(1..=3);
        let n_places = rng.gen_range(1..=5);
        let places = (0..n_places)
            .map(|_| (rng.gen_range(0..regions), rng.gen_range(1..100_000_000)))
            .collect();
        let mut incidences = Vec::new();
        for t in 0..6 {
            for list in [NameList::Forenames, NameList::Surnames] {
                for p in 0..n_places {
                    if rng.gen_bool(0.4) {
                        incidences.push((list, format!("tok{t}"), p, rng.gen_range(1e-6..0.05)));
                    }
                }
            }
        }
        let tokens = (0..rng.gen_range(0..=4))
            .map(|_| format!("tok{}", rng.gen_range(0..8)))
            .collect();
        let candidates = (0..n_places).filter(|_| rng.gen_bool(0.8)).collect();
        ScorerFixture {
            regions,
            places,
            incidences,
            tokens,
            candidates,
        }
    }

    fn refs(&self, k: f64) -> Refs {
        let mut regions = String::from("region_id\tdisplay_name\n");
        for r in 0..self.regions {
            regions += &format!("r{r}\tRegion {r}\n");
        }
        let taxonomy = parse_regions(regions.as_bytes()).unwrap();
        let mut places = String::from("place_id\tdisplay_name\tregion_id\tpopulation\ttz_ids\n");
        for (i, (r, pop)) in self.places.iter().enumerate() {
            places += &format!("p{i}\tPlace {i}\tr{r}\t{pop}\tUTC\n");
        }
        let places = parse_places(places.as_bytes(), &taxonomy).unwrap();
        let mut lists = [String::new(), String::new()];
        for l in &mut lists {
            l.push_str("token\tplace_id\tfrequency\n");
        }
        for (list, tok, p, f) in &self.incidences {
            let i = usize::from(*list == NameList::Surnames);
            lists[i] += &format!("{tok}\tp{p}\t{:e}\n", f * k);
        }
        let names =
            parse_name_frequencies(lists[0].as_bytes(), lists[1].as_bytes(), &places).unwrap();
        let cctld = parse_cctld_map(b"cctld\tregion_id\nzz\tr0\n", &taxonomy).unwrap();
        Refs::from_parts(taxonomy, places, cctld, names)
    }

    /// Region totals recomputed from the raw fixture.
    fn brute_force(&self) -> Vec<f64> {
        let mut totals = vec![0.0; self.regions];
        for &p in &self.candidates {
            let (region, pop) = self.places[p];
            for tok in &self.tokens {
                for (_, t, place, f) in &self.incidences {
                    if t == tok && *place == p {
                        totals[region] += pop as f64 * f;
                    }
                }
            }
        }
        totals
    }
}

fn decide(fx: &ScorerFixture, refs: &Refs) -> geodiverse_core::scorer::RegionDecision {
    let candidates: Vec<PlaceIdx> = fx
        .candidates
        .iter()
        .map(|p| refs.places.get(&format!("p{p}")).unwrap())
        .collect();
    let scores = score_places(&fx.tokens, &candidates, &refs.places, &refs.names);
    decide_region(&scores, &refs.places, &refs.taxonomy)
}

fn scorer_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut decided = 0;
    for n in 0..50 {
        let fx = ScorerFixture::random(&mut rng);
        let refs = fx.refs(1.0);
        let d = decide(&fx, &refs);
        let brute = fx.brute_force();
        let max = brute.iter().copied().fold(0.0, f64::max);
        let want = (max > 0.0).then(|| brute.iter().position(|&s| max - s <= 1e-9 * max).unwrap());
        check(d.region.map(|r| usize::from(r.0)) == want, || {
            format!(
                "fixture {n}: region {:?} vs brute force {want:?} ({brute:?})",
                d.region
            )
        })?;
        for (r, &b) in brute.iter().enumerate() {
            let got = d
                .region_scores
                .get(&RegionIdx(r as u16))
                .copied()
                .unwrap_or(0.0);
            check((got - b).abs() <= 1e-9 * got.abs().max(b.abs()), || {
                format!("fixture {n}: region {r} score {got} vs {b}")
            })?;
        }
        for k in [10.0, 0.1] {
            let scaled = decide(&fx, &fx.refs(k));
            check(scaled.region == d.region && scaled.tied == d.tied, || {
                format!("fixture {n}: scale {k} changed the decision")
            })?;
        }
        decided += usize::from(want.is_some());
    }
    Ok(format!(
        "50 fixtures ({decided} with a region) match brute force; argmax stable for k=10, 0.1"
    ))
}

fn chrono_minutes(tz_id: &str, instant: i64) -> i16 {
    let tz: chrono_tz::Tz = tz_id.parse().unwrap();
    let utc = chrono::DateTime::from_timestamp(instant, 0)
        .unwrap()
        .naive_utc();
    (tz.offset_from_utc_datetime(&utc).fix().local_minus_utc() / 60) as i16
}

fn utc(s: &str) -> i64 {
    chrono::DateTime::parse_from_rfc3339(s).unwrap().timestamp()
}

fn timezone_correctness() -> Outcome {
    let refs = bundled_refs();
    // Instants on both sides of DST switches and rule changes.
    let pairs = [
        ("fr", "2020-01-15T12:00:00Z", Some(&[60][..])),
        ("fr", "2020-07-15T12:00:00Z", Some(&[120][..])),
        ("fr", "2021-03-28T00:59:59Z", Some(&[60][..])),
        ("fr", "2021-03-28T01:00:00Z", Some(&[120][..])),
        ("us-east", "2006-04-01T12:00:00Z", None),
        ("us-east", "2007-03-12T12:00:00Z", None),
        ("us-east", "2020-11-01T05:59:59Z", None),
        ("us-east", "2020-11-01T06:00:00Z", None),
        ("gb", "2019-03-31T00:30:00Z", None),
        ("gb", "2019-03-31T01:30:00Z", None),
        ("au-east", "2020-10-04T15:59:59Z", None),
        ("au-east", "2020-10-04T16:00:00Z", None),
        ("nz", "2021-04-03T13:59:59Z", None),
        ("nz", "2021-04-03T14:00:00Z", None),
        ("br-east", "2018-12-01T12:00:00Z", None),
        ("br-east", "2019-12-01T12:00:00Z", None),
        ("ru-moscow", "2011-01-15T12:00:00Z", None),
        ("ru-moscow", "2013-01-15T12:00:00Z", None),
        ("ru-moscow", "2015-01-15T12:00:00Z", None),
        ("jp", "2020-07-15T12:00:00Z", Some(&[540][..])),
    ];
    for (place_id, when, pinned) in pairs {
        let idx = refs
            .places
            .get(place_id)
            .ok_or_else(|| format!("no place {place_id}"))?;
        let place = refs.places.place(idx);
        let instant = utc(when);
        let got = refs.tz.offsets_at(idx, instant).offsets;
        let mut want: Vec<i16> = place
            .tz_ids
            .iter()
            .map(|z| chrono_minutes(z, instant))
            .collect();
        want.sort_unstable();
        want.dedup();
        check(got == want, || {
            format!("{place_id} at {when}: {got:?} vs chrono-tz {want:?}")
        })?;
        if let Some(p) = pinned {
            check(got == p, || {
                format!("{place_id} at {when}: {got:?} vs {p:?}")
            })?;
        }
    }
    Ok(format!(
        "20 (place, instant) pairs match chrono-tz (tzdb {} vs {})",
        geodiverse_core::tz::tzdb_version(),
        chrono_tz::IANA_TZDB_VERSION
    ))
}

fn routing_invariant() -> Outcome {
    let refs = bundled_refs();
    let commits = demo_commits();
    check(commits.len() == 1000, || {
        format!("demo corpus has {} commits", commits.len())
    })?;
    let (results, stats) = geolocate_all(&commits, &refs, 4);
    check(results.len() == commits.len(), || "result count".into())?;
    let mut zero_offset = 0;
    for (c, r) in commits.iter().zip(&results) {
        check(c.sha1 == r.sha1, || format!("order mismatch at {}", c.sha1))?;
        check(
            r.region.is_none() == (r.method == Method::Unresolved),
            || format!("{} inconsistent", c.sha1),
        )?;
        if c.utc_offset_minutes == 0 {
            zero_offset += 1;
            check(r.method != Method::OffsetName, || {
                format!("{} at UTC used offset/name", c.sha1)
            })?;
        }
    }
    Ok(format!(
        "1000 results, {zero_offset} at offset 0 with none via offset/name ({} email, {} offset/name, {} unresolved)",
        stats.email_cctld, stats.offset_name, stats.unresolved
    ))
}

fn synthetic_result(i: u32, year: i32, region: Option<u16>) -> GeolocationResult {
    let mut sha = [0u8; 20];
    sha[..4].copy_from_slice(&i.to_be_bytes());
    GeolocationResult {
        sha1: Sha1::from_bytes(sha),
        region: region.map(RegionIdx),
        method: if region.is_some() {
            Method::EmailCcTld
        } else {
            Method::Unresolved
        },
        tied: false,
        year,
    }
}

fn aggregation() -> Outcome {
    let refs = bundled_refs();
    let commits = demo_commits();
    let (results, _) = geolocate_all(&commits, &refs, 1);
    let whole = tally_commits(&results);
    for drop in [false, true] {
        let assignments = assign_author_years(&commits, &results, 5).unwrap();
        for table in [whole.to_table(drop), aggregate_authors(&assignments, drop)] {
            for (year, sum) in table.ratio_sums() {
                check((sum - 1.0).abs() <= 1e-9, || {
                    format!("{year}: ratios sum to {sum}")
                })?;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for shards in [2, 3, 7, 16] {
        let mut shuffled = results.clone();
        shuffled.shuffle(&mut rng);
        let mut merged = Tally::default();
        for chunk in shuffled.chunks(shuffled.len().div_ceil(shards)) {
            merged.merge(&tally_commits(chunk));
        }
        check(merged == whole, || {
            format!("{shards}-way shard merge differs")
        })?;
        check(merged.to_table(false) == whole.to_table(false), || {
            "table differs".into()
        })?;
    }

    // Authors with 1..=8 commits in 2010; only those with at least 5 count.
    let mut fx_commits = Vec::new();
    let mut fx_results = Vec::new();
    let mut id = 0;
    for n in 1..=8u32 {
        for _ in 0..n {
            let r = synthetic_result(id, 2010, Some(0));
            fx_commits.push(CommitRecord {
                sha1: r.sha1,
                author_name: format!("Author {n}").into_bytes(),
                author_email: format!("a{n}@example.fr").into_bytes(),
                author_timestamp: 1_270_000_000,
                utc_offset_minutes: 60,
            });
            fx_results.push(r);
            id += 1;
        }
    }
    let active = assign_author_years(&fx_commits, &fx_results, 5).unwrap();
    let names: Vec<String> = active
        .iter()
        .map(|a| String::from_utf8_lossy(&a.author.name).into_owned())
        .collect();
    check(
        names == ["Author 5", "Author 6", "Author 7", "Author 8"],
        || format!("active: {names:?}"),
    )?;
    let table = aggregate_authors(&active, false);
    check(table.rows.len() == 1 && table.rows[0].count == 4, || {
        format!("{table:?}")
    })?;
    Ok("ratio sums within 1e-9; 2/3/7/16-way shard merges exact; threshold 5 keeps exactly the 5..8-commit authors".into())
}

fn outputs(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect()
}

fn golden_run() -> Outcome {
    let start = Instant::now();
    let tmp = tempfile::tempdir().unwrap();
    let mut runs = Vec::new();
    for (i, parallelism) in [(0, "1"), (1, "4")] {
        let out = tmp.path().join(format!("run{i}"));
        let status = Command::new(env!("CARGO_BIN_EXE_geodiverse"))
            .current_dir(root())
            .args([
                "run",
                "--commits",
                "data/demo/commits.tsv",
                "--refs",
                "data/refs",
                "--parallelism",
                parallelism,
            ])
            .arg("--out-dir")
            .arg(&out)
            .output()
            .unwrap();
        check(status.status.success(), || {
            String::from_utf8_lossy(&status.stderr).into_owned()
        })?;
        runs.push(outputs(&out));
    }
    let elapsed = start.elapsed();
    check(runs[0].len() == 6, || {
        format!("{} output files", runs[0].len())
    })?;
    check(runs[0] == runs[1], || "two invocations differ".into())?;
    let golden = outputs(&PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/demo"));
    for (name, bytes) in &golden {
        check(runs[0].get(name) == Some(bytes), || {
            format!("{name} differs from golden")
        })?;
    }
    check(golden.len() == 6, || "golden set incomplete".into())?;
    check(elapsed < Duration::from_secs(30), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "6 files byte-identical across 2 runs and to golden; {elapsed:.2?} total"
    ))
}

fn synthetic_commits(refs: &Refs, n: usize) -> Vec<CommitRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let first: Vec<&String> = refs.names.list(NameList::Forenames).keys().collect();
    let last: Vec<&String> = refs.names.list(NameList::Surnames).keys().collect();
    let mut first = first;
    let mut last = last;
    first.sort();
    last.sort();
    let tlds = [
        "com", "org", "de", "fr", "jp", "in", "br", "net", "gh", "cn",
    ];
    (0..n)
        .map(|i| {
            let idx = PlaceIdx(rng.gen_range(0..refs.places.len() as u32));
            let instant = rng.gen_range(631_152_000..1_609_459_200i64);
            let offsets = refs.tz.offsets_at(idx, instant).offsets;
            let mut sha = [0u8; 20];
            sha[..8].copy_from_slice(&(i as u64).to_be_bytes());
            let name = format!(
                "{} {}",
                first[rng.gen_range(0..first.len())],
                last[rng.gen_range(0..last.len())]
            );
            CommitRecord {
                sha1: Sha1::from_bytes(sha),
                author_email: format!("u{}@x.{}", i % 5000, tlds[i % tlds.len()]).into_bytes(),
                author_name: name.into_bytes(),
                author_timestamp: instant,
                utc_offset_minutes: offsets[rng.gen_range(0..offsets.len())],
            }
        })
        .collect()
}

fn throughput() -> Outcome {
    let refs = bundled_refs();
    let commits = synthetic_commits(&refs, 300_000);
    // Warm the offset cache.
    let _ = geolocate_all(&commits, &refs, 1);
    let mut best = f64::INFINITY;
    for _ in 0..3 {
        let start = Instant::now();
        let (results, _) = geolocate_all(&commits, &refs, 1);
        best = best.min(start.elapsed().as_secs_f64());
        check(results.len() == commits.len(), || "result count".into())?;
    }
    let rate = commits.len() as f64 / best;
    check(rate >= 100_000.0, || {
        format!("{rate:.0} commits/s single-threaded")
    })?;
    Ok(format!(
        "{rate:.0} commits/s on one thread, warm cache (300k synthetic commits)"
    ))
}

fn diagnostic_fidelity() -> Outcome {
    let taxonomy =
        parse_regions(b"region_id\tdisplay_name\neurope-west\tWE\nafrica\tAF\neast-asia\tEA\n")
            .unwrap();
    let places = parse_places(
        b"place_id\tdisplay_name\tregion_id\tpopulation\ttz_ids\n\
          fr\tFrance\teurope-west\t1000\tEurope/Paris\n\
          gh\tGhana\tafrica\t500\tAfrica/Accra\n\
          jp\tJapan\teast-asia\t100\tAsia/Tokyo\n\
          ng\tNigeria\tafrica\t2000\tAfrica/Lagos\n",
        &taxonomy,
    )
    .unwrap();
    let names = parse_name_frequencies(
        b"token\tplace_id\tfrequency\neric\tfr\t0.5\neric\tng\t0.1\nkwame\tgh\t0.5\nkwame\tng\t0.5\n",
        b"token\tplace_id\tfrequency\n",
        &places,
    )
    .unwrap();
    let cctld = parse_cctld_map(
        b"cctld\tregion_id\nfr\teurope-west\nng\tafrica\ngh\tafrica\njp\teast-asia\n",
        &taxonomy,
    )
    .unwrap();
    let refs = Refs::from_parts(taxonomy, places, cctld, names);

    // 2020-01-15: Paris and Lagos are both at +60, Accra at 0.
    let winter = 1_579_089_600;
    let plan: [(&str, &str, i16); 10] = [
        ("Eric A", "a@x.fr", 60),  // fr 500 > ng 200: europe-west / europe-west
        ("Eric B", "b@x.fr", 60),  // same
        ("Eric C", "c@x.fr", 60),  // same
        ("Kwame D", "d@x.fr", 60), // ng 1000: europe-west / africa
        ("Kwame E", "e@x.fr", 60), // same
        ("Kwame F", "f@x.ng", 60), // africa / africa
        ("???", "g@x.ng", 60),     // rejected name: africa / unresolved
        ("Eric H", "h@x.gh", 0),   // only gh at 0, no eric there: africa / unresolved
        ("Eric I", "i@x.com", 60), // no ccTLD: excluded
        ("Eric J", "j@x.jp", 540), // outside [0, 3] h: excluded
    ];
    let commits: Vec<CommitRecord> = plan
        .iter()
        .enumerate()
        .map(|(i, (name, email, off))| CommitRecord {
            sha1: Sha1::from_bytes([i as u8 + 1; 20]),
            author_name: name.as_bytes().to_vec(),
            author_email: email.as_bytes().to_vec(),
            author_timestamp: winter,
            utc_offset_minutes: *off,
        })
        .collect();
    let report = method_disagreement(&commits, &refs, OffsetBand::from_hours(0.0, 3.0).unwrap());
    let r = |id: &str| refs.taxonomy.get(id).unwrap();
    let (we, af, ea) = (r("europe-west"), r("africa"), r("east-asia"));
    let expect_matrix: BTreeMap<(RegionIdx, Slot), u64> = [
        ((we, Slot::Region(we)), 3),
        ((we, Slot::Region(af)), 2),
        ((af, Slot::Region(af)), 1),
        ((af, Slot::Unresolved), 2),
    ]
    .into();
    check(report.matrix == expect_matrix, || {
        format!("matrix {:?}", report.matrix)
    })?;
    let checks = [
        ("email europe-west", report.email_share(we), 5.0 / 8.0),
        ("email africa", report.email_share(af), 3.0 / 8.0),
        ("email east-asia", report.email_share(ea), 0.0),
        (
            "offset/name europe-west",
            report.offset_name_share(Slot::Region(we)),
            3.0 / 8.0,
        ),
        (
            "offset/name africa",
            report.offset_name_share(Slot::Region(af)),
            3.0 / 8.0,
        ),
        (
            "offset/name unresolved",
            report.offset_name_share(Slot::Unresolved),
            2.0 / 8.0,
        ),
        ("disagreement rate", report.disagreement_rate(), 4.0 / 8.0),
    ];
    for (what, got, want) in checks {
        check(got == want, || format!("{what}: {got} vs {want}"))?;
    }
    let tsv = report.to_tsv(&refs.taxonomy);
    check(
        tsv.lines().nth(1) == Some("europe-west\teurope-west\t3\t0.375000"),
        || tsv.clone(),
    )?;
    Ok("8 in-band commits: email 5/8 europe-west, 3/8 africa; offset/name 3/8, 3/8, 2/8 unresolved; rate 1/2".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("filter conformance", filter_conformance),
        ("scorer oracle equivalence", scorer_oracle),
        ("timezone correctness", timezone_correctness),
        ("routing invariant", routing_invariant),
        ("aggregation", aggregation),
        ("end-to-end golden run", golden_run),
        ("throughput", throughput),
        ("diagnostic fidelity", diagnostic_fidelity),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, run) in criteria {
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
