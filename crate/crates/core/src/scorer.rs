// SPDX-License-Identifier: Apache-2.0

//! Offset/name scoring.
//!
//! A candidate place scores the expected number of people bearing the
//! author's name tokens there: for every token and for both the forename and
//! surname lists, population × per-capita frequency, summed. Place scores are
//! summed per region and the region with the highest total wins.

use std::collections::BTreeMap;

use crate::refs::{NameFrequencyTable, NameList, PlaceIdx, PlaceTable, RegionIdx, RegionTaxonomy};

/// Relative tolerance under which two region totals count as tied.
pub const TIE_EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaceScore {
    pub place: PlaceIdx,
    /// Expected bearer count, persons.
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionDecision {
    pub region: Option<RegionIdx>,
    /// Summed score for every region that had a candidate place.
    pub region_scores: BTreeMap<RegionIdx, f64>,
    pub tied: bool,
}

/// Scores each candidate. Tokens are looked up case-insensitively; each
/// occurrence of a repeated token contributes again. Zero scores are kept.
pub fn score_places(
    tokens: &[String],
    candidates: &[PlaceIdx],
    places: &PlaceTable,
    names: &NameFrequencyTable,
) -> Vec<PlaceScore> {
    let mut scores: Vec<PlaceScore> = candidates
        .iter()
        .map(|&place| PlaceScore { place, score: 0.0 })
        .collect();
    for token in tokens {
        for list in [NameList::Forenames, NameList::Surnames] {
            for incidence in names.lookup(list, token) {
                // `candidates` is in place order on every pipeline path, but a
                // linear scan keeps arbitrary orders correct.
                for s in scores.iter_mut().filter(|s| s.place == incidence.place) {
                    let population = places.place(s.place).population as f64;
                    s.score += population * incidence.frequency;
                }
            }
        }
    }
    scores
}

/// Sums place scores per region and picks the maximum.
///
/// No candidates or an all-zero total gives no region. Regions within
/// [`TIE_EPSILON`] of the maximum are tied; the earliest in taxonomy order
/// wins and `tied` is set.
pub fn decide_region(
    place_scores: &[PlaceScore],
    places: &PlaceTable,
    taxonomy: &RegionTaxonomy,
) -> RegionDecision {
    let mut region_scores: BTreeMap<RegionIdx, f64> = BTreeMap::new();
    for s in place_scores {
        *region_scores
            .entry(places.place(s.place).region)
            .or_default() += s.score;
    }
    debug_assert!(region_scores
        .keys()
        .all(|r| usize::from(r.0) < taxonomy.len()));

    let max = region_scores.values().copied().fold(0.0_f64, f64::max);
    if max <= 0.0 {
        return RegionDecision {
            region: None,
            region_scores,
            tied: false,
        };
    }
    let mut top = region_scores
        .iter()
        .filter(|(_, &s)| max - s <= TIE_EPSILON * max)
        .map(|(&r, _)| r);
    // BTreeMap iteration is taxonomy order.
    let region = top.next();
    let tied = top.next().is_some();
    RegionDecision {
        region,
        region_scores,
        tied,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::refs::{parse_name_frequencies, parse_places, parse_regions};
    use proptest::prelude::*;

    fn refs() -> (RegionTaxonomy, PlaceTable, NameFrequencyTable) {
        let taxonomy = parse_regions(
            b"region_id\tdisplay_name\neurope-west\tWestern Europe\nafrica\tAfrica\nasia\tAsia\n",
        )
        .unwrap();
        let places = parse_places(
            b"place_id\tdisplay_name\tregion_id\tpopulation\ttz_ids\n\
              gh\tGhana\tafrica\t30000000\tAfrica/Accra\n\
              fr\tFrance\teurope-west\t67000000\tEurope/Paris\n\
              ng\tNigeria\tafrica\t200000000\tAfrica/Lagos\n\
              in\tIndia\tasia\t1000000000\tAsia/Kolkata\n",
            &taxonomy,
        )
        .unwrap();
        let names = parse_name_frequencies(
            b"token\tplace_id\tfrequency\neric\tgh\t0.02\neric\tfr\t0.005\nmartin\tfr\t0.001\n",
            b"token\tplace_id\tfrequency\nmartin\tfr\t0.004\nmartin\tgh\t0.0001\n",
            &places,
        )
        .unwrap();
        (taxonomy, places, names)
    }

    fn tokens(t: &[&str]) -> Vec<String> {
        t.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn eric_in_ghana_and_france() {
        let (taxonomy, places, names) = refs();
        let gh = places.get("gh").unwrap();
        let fr = places.get("fr").unwrap();
        let scores = score_places(&tokens(&["Eric"]), &[gh, fr], &places, &names);
        assert_eq!(
            scores[0],
            PlaceScore {
                place: gh,
                score: 600_000.0
            }
        );
        assert_eq!(
            scores[1],
            PlaceScore {
                place: fr,
                score: 335_000.0
            }
        );

        let decision = decide_region(&scores, &places, &taxonomy);
        assert_eq!(decision.region, taxonomy.get("africa"));
        assert!(!decision.tied);
        assert_eq!(
            decision.region_scores[&taxonomy.get("africa").unwrap()],
            600_000.0
        );
    }

    #[test]
    fn no_tokens_scores_zero() {
        let (taxonomy, places, names) = refs();
        let all: Vec<PlaceIdx> = places.iter().map(|(i, _)| i).collect();
        let scores = score_places(&[], &all, &places, &names);
        assert_eq!(scores.len(), 4);
        assert!(scores.iter().all(|s| s.score == 0.0));
        assert_eq!(decide_region(&scores, &places, &taxonomy).region, None);
    }

    #[test]
    fn both_lists_contribute() {
        let (_, places, names) = refs();
        let fr = places.get("fr").unwrap();
        let scores = score_places(&tokens(&["Martin"]), &[fr], &places, &names);
        // 67e6 × (0.001 + 0.004)
        assert!((scores[0].score - 335_000.0).abs() < 1e-6);
    }

    #[test]
    fn ties_go_to_taxonomy_order() {
        let (taxonomy, places, _) = refs();
        let gh = places.get("gh").unwrap();
        let fr = places.get("fr").unwrap();
        let scores = [
            PlaceScore {
                place: gh,
                score: 500_000.0,
            },
            PlaceScore {
                place: fr,
                score: 500_000.0,
            },
        ];
        let decision = decide_region(&scores, &places, &taxonomy);
        assert_eq!(decision.region, taxonomy.get("europe-west"));
        assert!(decision.tied);
    }

    #[test]
    fn near_ties_within_epsilon() {
        let (taxonomy, places, _) = refs();
        let gh = places.get("gh").unwrap();
        let fr = places.get("fr").unwrap();
        let scores = [
            PlaceScore {
                place: gh,
                score: 1e6,
            },
            PlaceScore {
                place: fr,
                score: 1e6 * (1.0 - 1e-12),
            },
        ];
        let decision = decide_region(&scores, &places, &taxonomy);
        assert!(decision.tied);
        assert_eq!(decision.region, taxonomy.get("europe-west"));
        let scores = [
            PlaceScore {
                place: gh,
                score: 1e6,
            },
            PlaceScore {
                place: fr,
                score: 1e6 * (1.0 - 1e-6),
            },
        ];
        let decision = decide_region(&scores, &places, &taxonomy);
        assert!(!decision.tied);
        assert_eq!(decision.region, taxonomy.get("africa"));
    }

    #[test]
    fn region_sums_places() {
        let (taxonomy, places, _) = refs();
        let scores = [
            PlaceScore {
                place: places.get("gh").unwrap(),
                score: 200.0,
            },
            PlaceScore {
                place: places.get("ng").unwrap(),
                score: 200.0,
            },
            PlaceScore {
                place: places.get("fr").unwrap(),
                score: 300.0,
            },
        ];
        let decision = decide_region(&scores, &places, &taxonomy);
        assert_eq!(decision.region, taxonomy.get("africa"));
        assert_eq!(
            decision.region_scores[&taxonomy.get("africa").unwrap()],
            400.0
        );
    }

    #[test]
    fn empty_candidates_decide_nothing() {
        let (taxonomy, places, _) = refs();
        let decision = decide_region(&[], &places, &taxonomy);
        assert_eq!(decision.region, None);
        assert!(decision.region_scores.is_empty());
    }

    proptest! {
        #[test]
        fn additivity_over_disjoint_token_lists(
            split in 0usize..4,
            pick in proptest::collection::vec(0usize..4, 4),
        ) {
            let (_, places, names) = refs();
            let vocab = ["Eric", "Martin", "Nobody", "eric"];
            let all: Vec<String> = pick.iter().map(|&i| vocab[i].to_string()).collect();
            let (a, b) = all.split_at(split);
            let candidates: Vec<PlaceIdx> = places.iter().map(|(i, _)| i).collect();
            let whole = score_places(&all, &candidates, &places, &names);
            let sa = score_places(a, &candidates, &places, &names);
            let sb = score_places(b, &candidates, &places, &names);
            for ((w, x), y) in whole.iter().zip(&sa).zip(&sb) {
                let sum = x.score + y.score;
                prop_assert!((w.score - sum).abs() <= 1e-9 * w.score.abs().max(1.0));
            }
        }
    }
}
