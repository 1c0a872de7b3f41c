// SPDX-License-Identifier: Apache-2.0

//! Historical UTC offset resolution against the bundled IANA database.
//!
//! [`TzResolver`] splits time into intervals at every offset transition of
//! every zone used by the place table, up to [`CACHE_HORIZON`]. Inside one
//! interval each zone has a single offset, so the offset → places answer is
//! computed once per interval, on first use, and then shared read-only.

use std::borrow::Cow;
use std::sync::OnceLock;

use jiff::tz::{TimeZone, TimeZoneDatabase};
use jiff::Timestamp;

use crate::refs::{Place, PlaceIdx, PlaceTable};

/// End of the cached range, 2100-01-01T00:00:00Z. Later instants are
/// resolved without the cache.
pub const CACHE_HORIZON: i64 = 4_102_444_800;

fn db() -> &'static TimeZoneDatabase {
    static DB: OnceLock<TimeZoneDatabase> = OnceLock::new();
    DB.get_or_init(TimeZoneDatabase::bundled)
}

/// Version of the compiled-in timezone database, e.g. `2025b`.
pub fn tzdb_version() -> &'static str {
    jiff_tzdb::VERSION.unwrap_or("unknown")
}

/// Looks up a zone in the bundled database, never the host's.
pub fn zone(tz_id: &str) -> Option<TimeZone> {
    db().get(tz_id).ok()
}

fn timestamp(instant: i64) -> Timestamp {
    let clamped = instant.clamp(Timestamp::MIN.as_second(), Timestamp::MAX.as_second());
    Timestamp::from_second(clamped).expect("clamped to the supported range")
}

/// Whole minutes east of UTC, truncated toward zero.
fn offset_minutes(tz: &TimeZone, ts: Timestamp) -> i16 {
    (tz.to_offset(ts).seconds() / 60) as i16
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OffsetQuery {
    /// Seconds since the Unix epoch, UTC.
    pub instant: i64,
    pub offset_minutes: i16,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OffsetsAt {
    /// Distinct offsets in effect across the place's zones, ascending.
    pub offsets: Vec<i16>,
    /// Set when the instant precedes the first recorded transition of some
    /// zone; that zone's earliest rule was used.
    pub extrapolated: bool,
}

struct Zone {
    tz: TimeZone,
    first_transition: Option<i64>,
}

impl Zone {
    fn new(tz: TimeZone) -> Self {
        let first_transition = tz
            .following(Timestamp::MIN)
            .next()
            .map(|t| t.timestamp().as_second());
        Zone {
            tz,
            first_transition,
        }
    }

    fn extrapolated(&self, instant: i64) -> bool {
        self.first_transition.is_some_and(|first| instant < first)
    }
}

/// Offsets in effect for each of a place's zones at `instant`.
pub fn offsets_at(place: &Place, instant: i64) -> OffsetsAt {
    let ts = timestamp(instant);
    let mut offsets = Vec::with_capacity(place.tz_ids.len());
    let mut extrapolated = false;
    for tz_id in &place.tz_ids {
        let Some(tz) = zone(tz_id) else { continue };
        let zone = Zone::new(tz);
        extrapolated |= zone.extrapolated(instant);
        offsets.push(offset_minutes(&zone.tz, ts));
    }
    offsets.sort_unstable();
    offsets.dedup();
    OffsetsAt {
        offsets,
        extrapolated,
    }
}

/// Places whose offset set at the query instant contains the query offset,
/// in place-id order. Uncached reference path.
pub fn candidate_places(query: OffsetQuery, places: &PlaceTable) -> Vec<PlaceIdx> {
    places
        .iter()
        .filter(|(_, p)| {
            offsets_at(p, query.instant)
                .offsets
                .contains(&query.offset_minutes)
        })
        .map(|(idx, _)| idx)
        .collect()
}

/// Offset → places for one interval, sorted by (offset, place).
struct Bucket {
    offsets: Vec<i16>,
    places: Vec<PlaceIdx>,
}

impl Bucket {
    fn matching(&self, offset: i16) -> &[PlaceIdx] {
        let lo = self.offsets.partition_point(|&o| o < offset);
        let hi = self.offsets.partition_point(|&o| o <= offset);
        &self.places[lo..hi]
    }
}

pub struct TzResolver {
    zones: Vec<Zone>,
    /// Zone indices per place, indexed by `PlaceIdx`.
    place_zones: Vec<Vec<usize>>,
    /// Interval start instants; interval `k` is `[starts[k], starts[k+1])`.
    starts: Vec<i64>,
    buckets: Vec<OnceLock<Bucket>>,
}

impl TzResolver {
    /// Builds the interval index. Zone ids missing from the database are
    /// ignored; [`crate::refs`] rejects them before this point.
    pub fn new(places: &PlaceTable) -> Self {
        let mut ids: Vec<&str> = places
            .iter()
            .flat_map(|(_, p)| p.tz_ids.iter().map(String::as_str))
            .collect();
        ids.sort_unstable();
        ids.dedup();
        let (ids, zones): (Vec<&str>, Vec<Zone>) = ids
            .into_iter()
            .filter_map(|id| zone(id).map(|tz| (id, Zone::new(tz))))
            .unzip();

        let place_zones = places
            .iter()
            .map(|(_, p)| {
                p.tz_ids
                    .iter()
                    .filter_map(|id| ids.binary_search(&id.as_str()).ok())
                    .collect()
            })
            .collect();

        let mut starts = vec![0];
        for z in &zones {
            starts.extend(
                z.tz.following(timestamp(0))
                    .map(|t| t.timestamp().as_second())
                    .take_while(|&s| s < CACHE_HORIZON),
            );
        }
        starts.sort_unstable();
        starts.dedup();
        let buckets = starts.iter().map(|_| OnceLock::new()).collect();
        TzResolver {
            zones,
            place_zones,
            starts,
            buckets,
        }
    }

    /// Offsets of one place at `instant`, from the resolver's zone set.
    pub fn offsets_at(&self, place: PlaceIdx, instant: i64) -> OffsetsAt {
        let ts = timestamp(instant);
        let zones = &self.place_zones[place.0 as usize];
        let mut offsets: Vec<i16> = zones
            .iter()
            .map(|&z| offset_minutes(&self.zones[z].tz, ts))
            .collect();
        offsets.sort_unstable();
        offsets.dedup();
        OffsetsAt {
            offsets,
            extrapolated: zones.iter().any(|&z| self.zones[z].extrapolated(instant)),
        }
    }

    /// Places compatible with the query, in place-id order.
    pub fn candidate_places(&self, query: OffsetQuery) -> Cow<'_, [PlaceIdx]> {
        match self.interval(query.instant) {
            Some(k) => {
                let bucket = self.buckets[k].get_or_init(|| self.build_bucket(self.starts[k]));
                Cow::Borrowed(bucket.matching(query.offset_minutes))
            }
            None => Cow::Owned(
                self.build_bucket(query.instant)
                    .matching(query.offset_minutes)
                    .to_vec(),
            ),
        }
    }

    fn interval(&self, instant: i64) -> Option<usize> {
        if !(0..CACHE_HORIZON).contains(&instant) {
            return None;
        }
        Some(self.starts.partition_point(|&s| s <= instant) - 1)
    }

    fn build_bucket(&self, instant: i64) -> Bucket {
        let ts = timestamp(instant);
        let zone_offsets: Vec<i16> = self
            .zones
            .iter()
            .map(|z| offset_minutes(&z.tz, ts))
            .collect();
        let mut pairs: Vec<(i16, PlaceIdx)> = self
            .place_zones
            .iter()
            .enumerate()
            .flat_map(|(p, zones)| {
                let zone_offsets = &zone_offsets;
                zones
                    .iter()
                    .map(move |&z| (zone_offsets[z], PlaceIdx(p as u32)))
            })
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        let (offsets, places) = pairs.into_iter().unzip();
        Bucket { offsets, places }
    }

    /// Number of intervals in the index.
    pub fn interval_count(&self) -> usize {
        self.starts.len()
    }

    /// Number of intervals whose answer has been computed.
    pub fn cached_intervals(&self) -> usize {
        self.buckets.iter().filter(|b| b.get().is_some()).count()
    }
}
