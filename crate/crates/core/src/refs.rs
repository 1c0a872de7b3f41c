// SPDX-License-Identifier: Apache-2.0

//! Reference data: region taxonomy, places, ccTLD map and name frequencies.
//!
//! Every file is a UTF-8 TSV with a fixed header line. Blank lines and lines
//! starting with `#` are ignored. Text fields use the escaping rule of
//! [`crate::tsv`]. All cross references are checked at load time, so a
//! loaded [`Refs`] is internally consistent.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::name_filter::lookup_key;
use crate::tsv;
use crate::tz::{self, TzResolver};

pub const REGIONS_FILE: &str = "regions.tsv";
pub const PLACES_FILE: &str = "places.tsv";
pub const CCTLD_FILE: &str = "cctld.tsv";
pub const FORENAMES_FILE: &str = "forenames.tsv";
pub const SURNAMES_FILE: &str = "surnames.tsv";

pub const REGIONS_HEADER: &str = "region_id\tdisplay_name";
pub const PLACES_HEADER: &str = "place_id\tdisplay_name\tregion_id\tpopulation\ttz_ids";
pub const CCTLD_HEADER: &str = "cctld\tregion_id";
pub const NAMES_HEADER: &str = "token\tplace_id\tfrequency";

/// Reserved label for commits no method could place.
pub const UNRESOLVED_ID: &str = "unresolved";

#[derive(Debug, thiserror::Error)]
pub enum RefError {
    #[error("refs not found: {0}")]
    NotFound(PathBuf),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{file}: expected header `{expected}`")]
    BadHeader {
        file: String,
        expected: &'static str,
    },
    #[error("{file}: no data rows")]
    Empty { file: String },
    #[error("{file}:{line}: {message}")]
    Malformed {
        file: String,
        line: usize,
        message: String,
    },
    #[error("{file}: duplicate id `{id}`")]
    Duplicate { file: String, id: String },
    #[error("{file}: unknown region ids: {}", .ids.join(", "))]
    UnknownRegions { file: String, ids: Vec<String> },
    #[error("{file}: unknown place ids: {}", .ids.join(", "))]
    UnknownPlaces { file: String, ids: Vec<String> },
    #[error("{file}: unresolvable timezone ids: {}", .ids.join(", "))]
    UnknownTimezones { file: String, ids: Vec<String> },
}

impl RefError {
    pub fn reason(&self) -> &'static str {
        match self {
            RefError::NotFound(_) => "refs not found",
            RefError::Io { .. } => "io error",
            _ => "invalid reference data",
        }
    }

    fn malformed(file: &str, line: usize, message: impl Into<String>) -> Self {
        RefError::Malformed {
            file: file.to_owned(),
            line,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RegionIdx(pub u16);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlaceIdx(pub u32);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    pub id: String,
    pub display_name: String,
}

/// Ordered world regions. Order drives chart stacking and tie-breaking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionTaxonomy {
    regions: Vec<Region>,
    index: HashMap<String, RegionIdx>,
}

impl RegionTaxonomy {
    pub fn new(regions: Vec<Region>) -> Result<Self, RefError> {
        let mut index = HashMap::new();
        for (i, r) in regions.iter().enumerate() {
            if r.id == UNRESOLVED_ID {
                return Err(RefError::malformed(
                    REGIONS_FILE,
                    i + 2,
                    "`unresolved` is reserved",
                ));
            }
            if index.insert(r.id.clone(), RegionIdx(i as u16)).is_some() {
                return Err(RefError::Duplicate {
                    file: REGIONS_FILE.into(),
                    id: r.id.clone(),
                });
            }
        }
        if regions.is_empty() {
            return Err(RefError::Empty {
                file: REGIONS_FILE.into(),
            });
        }
        Ok(RegionTaxonomy { regions, index })
    }

    pub fn len(&self) -> usize {
        self.regions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regions.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<RegionIdx> {
        self.index.get(id).copied()
    }

    pub fn region(&self, idx: RegionIdx) -> &Region {
        &self.regions[usize::from(idx.0)]
    }

    pub fn id(&self, idx: RegionIdx) -> &str {
        &self.region(idx).id
    }

    pub fn iter(&self) -> impl Iterator<Item = (RegionIdx, &Region)> {
        self.regions
            .iter()
            .enumerate()
            .map(|(i, r)| (RegionIdx(i as u16), r))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Place {
    pub id: String,
    pub display_name: String,
    pub region: RegionIdx,
    pub population: u64,
    pub tz_ids: Vec<String>,
}

/// Places sorted by `place_id`; [`PlaceIdx`] order is id order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaceTable {
    places: Vec<Place>,
    index: HashMap<String, PlaceIdx>,
}

impl PlaceTable {
    pub fn new(mut places: Vec<Place>) -> Result<Self, RefError> {
        places.sort_by(|a, b| a.id.cmp(&b.id));
        if let Some(w) = places.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(RefError::Duplicate {
                file: PLACES_FILE.into(),
                id: w[0].id.clone(),
            });
        }
        let index = places
            .iter()
            .enumerate()
            .map(|(i, p)| (p.id.clone(), PlaceIdx(i as u32)))
            .collect();
        Ok(PlaceTable { places, index })
    }

    pub fn len(&self) -> usize {
        self.places.len()
    }

    pub fn is_empty(&self) -> bool {
        self.places.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<PlaceIdx> {
        self.index.get(id).copied()
    }

    pub fn place(&self, idx: PlaceIdx) -> &Place {
        &self.places[idx.0 as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = (PlaceIdx, &Place)> {
        self.places
            .iter()
            .enumerate()
            .map(|(i, p)| (PlaceIdx(i as u32), p))
    }
}

/// Two-letter ccTLD → region.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CcTldMap {
    map: HashMap<[u8; 2], RegionIdx>,
}

impl CcTldMap {
    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Case-insensitive lookup; anything but two ASCII letters misses.
    pub fn lookup(&self, label: &[u8]) -> Option<RegionIdx> {
        let [a, b] = *label else { return None };
        if !a.is_ascii_alphabetic() || !b.is_ascii_alphabetic() {
            return None;
        }
        self.map
            .get(&[a.to_ascii_lowercase(), b.to_ascii_lowercase()])
            .copied()
    }

    pub fn insert(&mut self, cctld: &str, region: RegionIdx) -> bool {
        match cctld.as_bytes() {
            &[a, b] if a.is_ascii_lowercase() && b.is_ascii_lowercase() => {
                self.map.insert([a, b], region).is_none()
            }
            _ => false,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[u8; 2], RegionIdx)> {
        self.map.iter().map(|(k, v)| (k, *v))
    }
}

/// A place and the fraction of its population bearing a name.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NameIncidence {
    pub place: PlaceIdx,
    pub frequency: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NameList {
    Forenames,
    Surnames,
}

/// Per-place incidence of forename and surname tokens, keyed case-insensitively.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct NameFrequencyTable {
    forenames: HashMap<String, Vec<NameIncidence>>,
    surnames: HashMap<String, Vec<NameIncidence>>,
}

impl NameFrequencyTable {
    pub fn list(&self, which: NameList) -> &HashMap<String, Vec<NameIncidence>> {
        match which {
            NameList::Forenames => &self.forenames,
            NameList::Surnames => &self.surnames,
        }
    }

    /// Incidences of `token` in one list, ordered by place.
    pub fn lookup(&self, which: NameList, token: &str) -> &[NameIncidence] {
        self.list(which)
            .get(&lookup_key(token))
            .map_or(&[], Vec::as_slice)
    }

    /// Frequency of `token` at `place` in one list, 0 when absent.
    pub fn frequency(&self, which: NameList, token: &str, place: PlaceIdx) -> f64 {
        self.lookup(which, token)
            .iter()
            .find(|n| n.place == place)
            .map_or(0.0, |n| n.frequency)
    }

    pub fn insert(
        &mut self,
        which: NameList,
        token: &str,
        incidence: NameIncidence,
    ) -> Result<(), String> {
        let map = match which {
            NameList::Forenames => &mut self.forenames,
            NameList::Surnames => &mut self.surnames,
        };
        let entries = map.entry(lookup_key(token)).or_default();
        match entries.binary_search_by_key(&incidence.place, |n| n.place) {
            Ok(_) => Err(format!("duplicate entry for token `{token}`")),
            Err(pos) => {
                entries.insert(pos, incidence);
                Ok(())
            }
        }
    }
}

struct Row<'a> {
    file: &'a str,
    line: usize,
    fields: Vec<&'a str>,
}

impl<'a> Row<'a> {
    fn fields<const N: usize>(&self) -> Result<[&'a str; N], RefError> {
        self.fields
            .as_slice()
            .try_into()
            .map_err(|_| self.error(format!("expected {N} fields, found {}", self.fields.len())))
    }

    fn text(&self, field: &str) -> Result<String, RefError> {
        tsv::unescape(field.as_bytes())
            .ok()
            .and_then(|b| String::from_utf8(b).ok())
            .ok_or_else(|| self.error("bad escape"))
    }

    fn error(&self, message: impl Into<String>) -> RefError {
        RefError::malformed(self.file, self.line, message)
    }
}

/// Data rows after the expected header line.
fn rows<'a>(
    file: &'a str,
    text: &'a str,
    header: &'static str,
) -> Result<impl Iterator<Item = Row<'a>>, RefError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !is_skippable(l));
    if lines.next().map(|(_, l)| l) != Some(header) {
        return Err(RefError::BadHeader {
            file: file.to_owned(),
            expected: header,
        });
    }
    Ok(lines.map(move |(i, l)| Row {
        file,
        line: i + 1,
        fields: l.split('\t').collect(),
    }))
}

fn is_skippable(line: &str) -> bool {
    line.trim().is_empty() || line.starts_with('#')
}

fn is_token(id: &str) -> bool {
    !id.is_empty()
        && id.len() <= 64
        && id
            .bytes()
            .all(|b| b.is_ascii_alphanumeric() || matches!(b, b'-' | b'_' | b'.'))
}

fn utf8<'a>(file: &str, bytes: &'a [u8]) -> Result<&'a str, RefError> {
    std::str::from_utf8(bytes).map_err(|e| RefError::malformed(file, 0, format!("not UTF-8: {e}")))
}

pub fn parse_regions(content: &[u8]) -> Result<RegionTaxonomy, RefError> {
    let file = REGIONS_FILE;
    let rows = rows(file, utf8(file, content)?, REGIONS_HEADER)?;
    let mut regions = Vec::new();
    for row in rows {
        let [id, name] = row.fields()?;
        if !is_token(id) {
            return Err(row.error(format!("bad region id `{id}`")));
        }
        regions.push(Region {
            id: id.to_owned(),
            display_name: row.text(name)?,
        });
    }
    RegionTaxonomy::new(regions)
}

pub fn parse_places(content: &[u8], taxonomy: &RegionTaxonomy) -> Result<PlaceTable, RefError> {
    let file = PLACES_FILE;
    let rows = rows(file, utf8(file, content)?, PLACES_HEADER)?;
    let mut places = Vec::new();
    let mut unknown_regions = Vec::new();
    let mut unknown_zones = Vec::new();
    for row in rows {
        let [id, name, region, population, tz_ids] = row.fields()?;
        if !is_token(id) {
            return Err(row.error(format!("bad place id `{id}`")));
        }
        let population: u64 = population.parse().ok().filter(|&p| p > 0).ok_or_else(|| {
            row.error(format!(
                "population must be a positive integer, got `{population}`"
            ))
        })?;
        let tz_ids: Vec<String> = tz_ids
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::to_owned)
            .collect();
        if tz_ids.is_empty() {
            return Err(row.error("no timezone ids"));
        }
        for tz_id in &tz_ids {
            if tz::zone(tz_id).is_none() {
                unknown_zones.push(format!("{id}:{tz_id}"));
            }
        }
        let Some(region) = taxonomy.get(region) else {
            unknown_regions.push(region.to_owned());
            continue;
        };
        places.push(Place {
            id: id.to_owned(),
            display_name: row.text(name)?,
            region,
            population,
            tz_ids,
        });
    }
    if !unknown_regions.is_empty() {
        return Err(RefError::UnknownRegions {
            file: file.into(),
            ids: dedup_sorted(unknown_regions),
        });
    }
    if !unknown_zones.is_empty() {
        return Err(RefError::UnknownTimezones {
            file: file.into(),
            ids: unknown_zones,
        });
    }
    if places.is_empty() {
        return Err(RefError::Empty { file: file.into() });
    }
    PlaceTable::new(places)
}

pub fn parse_cctld_map(content: &[u8], taxonomy: &RegionTaxonomy) -> Result<CcTldMap, RefError> {
    let file = CCTLD_FILE;
    let rows = rows(file, utf8(file, content)?, CCTLD_HEADER)?;
    let mut map = CcTldMap::default();
    let mut unknown = Vec::new();
    for row in rows {
        let [cctld, region] = row.fields()?;
        if cctld.len() != 2 || !cctld.bytes().all(|b| b.is_ascii_alphabetic()) {
            return Err(row.error(format!(
                "ccTLD must be exactly two ASCII letters, got `{cctld}`"
            )));
        }
        let Some(region) = taxonomy.get(region) else {
            unknown.push(region.to_owned());
            continue;
        };
        if !map.insert(&cctld.to_ascii_lowercase(), region) {
            return Err(RefError::Duplicate {
                file: file.into(),
                id: cctld.to_owned(),
            });
        }
    }
    if !unknown.is_empty() {
        return Err(RefError::UnknownRegions {
            file: file.into(),
            ids: dedup_sorted(unknown),
        });
    }
    if map.is_empty() {
        return Err(RefError::Empty { file: file.into() });
    }
    Ok(map)
}

fn parse_name_list(
    file: &str,
    content: &[u8],
    which: NameList,
    places: &PlaceTable,
    table: &mut NameFrequencyTable,
) -> Result<(), RefError> {
    let rows = rows(file, utf8(file, content)?, NAMES_HEADER)?;
    let mut unknown = Vec::new();
    for row in rows {
        let [token, place, frequency] = row.fields()?;
        let token = row.text(token)?;
        if token.is_empty() {
            return Err(row.error("empty token"));
        }
        let frequency: f64 = frequency
            .parse()
            .ok()
            .filter(|f: &f64| (0.0..=1.0).contains(f))
            .ok_or_else(|| row.error(format!("frequency must be in [0, 1], got `{frequency}`")))?;
        let Some(place) = places.get(place) else {
            unknown.push(place.to_owned());
            continue;
        };
        table
            .insert(which, &token, NameIncidence { place, frequency })
            .map_err(|m| row.error(m))?;
    }
    if !unknown.is_empty() {
        return Err(RefError::UnknownPlaces {
            file: file.into(),
            ids: dedup_sorted(unknown),
        });
    }
    Ok(())
}

pub fn parse_name_frequencies(
    forenames: &[u8],
    surnames: &[u8],
    places: &PlaceTable,
) -> Result<NameFrequencyTable, RefError> {
    let mut table = NameFrequencyTable::default();
    parse_name_list(
        FORENAMES_FILE,
        forenames,
        NameList::Forenames,
        places,
        &mut table,
    )?;
    parse_name_list(
        SURNAMES_FILE,
        surnames,
        NameList::Surnames,
        places,
        &mut table,
    )?;
    Ok(table)
}

fn dedup_sorted(mut ids: Vec<String>) -> Vec<String> {
    ids.sort();
    ids.dedup();
    ids
}

fn read(path: &Path) -> Result<Vec<u8>, RefError> {
    std::fs::read(path).map_err(|source| RefError::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn load_regions(path: &Path) -> Result<RegionTaxonomy, RefError> {
    parse_regions(&read(path)?)
}

pub fn load_places(path: &Path, taxonomy: &RegionTaxonomy) -> Result<PlaceTable, RefError> {
    parse_places(&read(path)?, taxonomy)
}

pub fn load_cctld_map(path: &Path, taxonomy: &RegionTaxonomy) -> Result<CcTldMap, RefError> {
    parse_cctld_map(&read(path)?, taxonomy)
}

pub fn load_name_frequencies(
    forename_path: &Path,
    surname_path: &Path,
    places: &PlaceTable,
) -> Result<NameFrequencyTable, RefError> {
    parse_name_frequencies(&read(forename_path)?, &read(surname_path)?, places)
}

/// All reference tables plus the timezone resolver built over the places.
pub struct Refs {
    pub taxonomy: RegionTaxonomy,
    pub places: PlaceTable,
    pub cctld: CcTldMap,
    pub names: NameFrequencyTable,
    pub tz: TzResolver,
    /// SHA-256 of each reference file, keyed by file name.
    pub digests: BTreeMap<String, String>,
}

impl fmt::Debug for Refs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Refs")
            .field("regions", &self.taxonomy.len())
            .field("places", &self.places.len())
            .field("cctlds", &self.cctld.len())
            .field("digests", &self.digests)
            .finish()
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Refs {
    pub fn from_parts(
        taxonomy: RegionTaxonomy,
        places: PlaceTable,
        cctld: CcTldMap,
        names: NameFrequencyTable,
    ) -> Self {
        let tz = TzResolver::new(&places);
        Refs {
            taxonomy,
            places,
            cctld,
            names,
            tz,
            digests: BTreeMap::new(),
        }
    }

    /// Loads and validates the five reference files from `dir`.
    pub fn load(dir: &Path) -> Result<Refs, RefError> {
        if !dir.is_dir() {
            return Err(RefError::NotFound(dir.to_owned()));
        }
        let mut digests = BTreeMap::new();
        let mut load = |name: &str| -> Result<Vec<u8>, RefError> {
            let bytes = read(&dir.join(name))?;
            digests.insert(name.to_owned(), sha256_hex(&bytes));
            Ok(bytes)
        };
        let regions = load(REGIONS_FILE)?;
        let places = load(PLACES_FILE)?;
        let cctld = load(CCTLD_FILE)?;
        let forenames = load(FORENAMES_FILE)?;
        let surnames = load(SURNAMES_FILE)?;

        let taxonomy = parse_regions(&regions)?;
        let places = parse_places(&places, &taxonomy)?;
        let cctld = parse_cctld_map(&cctld, &taxonomy)?;
        let names = parse_name_frequencies(&forenames, &surnames, &places)?;
        let mut refs = Refs::from_parts(taxonomy, places, cctld, names);
        refs.digests = digests;
        Ok(refs)
    }

    /// Re-checks every cross reference. Returns one message per problem.
    pub fn integrity_problems(&self) -> Vec<String> {
        let mut problems = Vec::new();
        let n_regions = self.taxonomy.len();
        for (_, place) in self.places.iter() {
            if usize::from(place.region.0) >= n_regions {
                problems.push(format!("place {} has no region", place.id));
            }
            if place.population == 0 {
                problems.push(format!("place {} has zero population", place.id));
            }
            for tz_id in &place.tz_ids {
                if tz::zone(tz_id).is_none() {
                    problems.push(format!("place {} has unknown timezone {tz_id}", place.id));
                }
            }
        }
        for (cctld, region) in self.cctld.iter() {
            if usize::from(region.0) >= n_regions {
                problems.push(format!(
                    "ccTLD {} has no region",
                    String::from_utf8_lossy(cctld)
                ));
            }
        }
        for which in [NameList::Forenames, NameList::Surnames] {
            for (token, entries) in self.names.list(which) {
                for n in entries {
                    if n.place.0 as usize >= self.places.len() {
                        problems.push(format!("name {token} refers to a missing place"));
                    }
                    if !(0.0..=1.0).contains(&n.frequency) {
                        problems.push(format!("name {token} has frequency {}", n.frequency));
                    }
                }
            }
        }
        problems
    }
}
