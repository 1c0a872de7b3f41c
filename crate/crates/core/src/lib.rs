// SPDX-License-Identifier: Apache-2.0

//! Geolocation of version-control commit authors to world regions.
//!
//! Two signals are combined per commit. Commits with a non-zero UTC offset are
//! located by intersecting the places that observed that offset at commit time
//! with how common the author's name tokens are in each of them
//! (population × per-capita frequency, summed per region). Commits recorded at
//! UTC+00:00 are located from the country-code TLD of the author email. The
//! located commits are then aggregated into yearly per-region commit and
//! active-author tables and rendered as stacked bar charts.
//!
//! The pipeline stages map onto modules:
//!
//! * [`ingest`]: commit TSV and git-log parsing, dedup, author extraction
//! * [`name_filter`]: author-name plausibility filters and tokenization
//! * [`refs`]: region taxonomy, places, ccTLD map, name frequencies
//! * [`tz`]: historical UTC offset resolution with a per-interval cache
//! * [`scorer`]: population × frequency scoring and region decision
//! * [`geolocator`]: the routing rule between the two methods
//! * [`aggregator`]: yearly tables and the dual-method diagnostics
//! * [`report`]: end-to-end pipeline, SVG charts and the run manifest

pub mod aggregator;
pub mod error;
pub mod geolocator;
pub mod ingest;
pub mod name_filter;
pub mod refs;
pub mod report;
pub mod scorer;
pub mod tsv;
pub mod tz;

pub use error::{Error, Result};

/// Tool version recorded in every manifest.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
