// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::OnceLock;

use chrono::{Offset, TimeZone as _};
use geodiverse_core::refs::Refs;

pub fn workspace_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn refs_dir() -> PathBuf {
    workspace_root().join("data/refs")
}

pub fn bundled_refs() -> &'static Refs {
    static REFS: OnceLock<Refs> = OnceLock::new();
    REFS.get_or_init(|| Refs::load(&refs_dir()).expect("bundled refs load"))
}

/// UTC offset in minutes from chrono-tz, truncated toward zero.
pub fn chrono_offset_minutes(tz_id: &str, instant: i64) -> i16 {
    let tz: chrono_tz::Tz = tz_id.parse().expect("zone known to chrono-tz");
    let utc = chrono::DateTime::from_timestamp(instant, 0)
        .unwrap()
        .naive_utc();
    let secs = tz.offset_from_utc_datetime(&utc).fix().local_minus_utc();
    i16::try_from(secs / 60).unwrap()
}
