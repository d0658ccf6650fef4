//! Repeated n-gram distance extraction and divisor analysis.
//!
//! A repeating key of length k tends to place identical plaintext fragments
//! under identical key alignment, so repeated ciphertext n-grams sit at
//! distances that are multiples of k. This module extracts those distances
//! and tallies how many each candidate divisor divides; it deliberately stops
//! short of picking a single key length, because the distance evidence alone
//! is often ambiguous.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::text::NormalizedText;

/// One repeated n-gram occurrence pair. Positions are 1-based starts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepeatMatch {
    pub ngram: String,
    pub pos_a: usize,
    pub pos_b: usize,
    pub distance: u64,
}

/// Distance evidence for one text and one n-gram size.
///
/// `matches` holds every unordered occurrence pair of every repeated n-gram.
/// `distances` is the sorted list of distinct distance values those pairs
/// produce: when an n-gram occurs three times, the long pair distance is the
/// sum of the two short ones and repeats add no information, so the distance
/// list collapses duplicates while `matches` keeps the full evidence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KasiskiReport {
    pub ngram_size: usize,
    pub matches: Vec<RepeatMatch>,
    pub distances: Vec<u64>,
    /// gcd of all distances; `None` when there are no repeats.
    pub overall_gcd: Option<u64>,
}

/// Divisibility tally over a distance list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorCensus {
    /// (d, number of distances divisible by d) for d = 2..=d_max.
    pub counts: Vec<(u64, usize)>,
    pub overall_gcd: u64,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// gcd over a slice; `None` when empty.
pub fn gcd_of(values: &[u64]) -> Option<u64> {
    values.iter().copied().reduce(gcd)
}

/// Finds every n-gram that occurs at least twice and reports all unordered
/// occurrence-pair distances. Needs n >= 2 and a text at least n long.
pub fn find_repeat_distances(text: &NormalizedText, n: usize) -> Result<KasiskiReport> {
    if n < 2 {
        return Err(Error::NgramTooSmall(n));
    }
    let letters = text.letters();
    if letters.len() < n {
        return Err(Error::TextShorterThanNgram {
            len: letters.len(),
            n,
        });
    }

    let mut positions: BTreeMap<&[u8], Vec<usize>> = BTreeMap::new();
    for start in 0..=letters.len() - n {
        positions
            .entry(&letters[start..start + n])
            .or_default()
            .push(start + 1);
    }

    let mut matches = Vec::new();
    for (gram, occ) in positions {
        if occ.len() < 2 {
            continue;
        }
        let ngram: String = gram.iter().map(|&l| (b'A' + l) as char).collect();
        for i in 0..occ.len() {
            for j in i + 1..occ.len() {
                matches.push(RepeatMatch {
                    ngram: ngram.clone(),
                    pos_a: occ[i],
                    pos_b: occ[j],
                    distance: (occ[j] - occ[i]) as u64,
                });
            }
        }
    }
    matches.sort_by(|a, b| (a.pos_a, a.pos_b, &a.ngram).cmp(&(b.pos_a, b.pos_b, &b.ngram)));

    let mut distances: Vec<u64> = matches.iter().map(|m| m.distance).collect();
    distances.sort_unstable();
    distances.dedup();

    let overall_gcd = gcd_of(&distances);
    Ok(KasiskiReport {
        ngram_size: n,
        matches,
        distances,
        overall_gcd,
    })
}

/// For each d in 2..=d_max, counts how many of the distances d divides, and
/// reports the overall gcd. Errors on an empty distance list: no repeats
/// means the test is inconclusive.
pub fn divisor_census(distances: &[u64], d_max: u64) -> Result<DivisorCensus> {
    if distances.is_empty() {
        return Err(Error::KasiskiInconclusive);
    }
    if d_max < 2 {
        return Err(Error::DivisorCeilingTooSmall(d_max as usize));
    }
    let counts = (2..=d_max)
        .map(|d| (d, distances.iter().filter(|&&x| x % d == 0).count()))
        .collect();
    Ok(DivisorCensus {
        counts,
        overall_gcd: gcd_of(distances).expect("nonempty"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_repeat() {
        let t = NormalizedText::normalize("ABCABC");
        let rep = find_repeat_distances(&t, 3).unwrap();
        assert_eq!(rep.distances, vec![3]);
        assert_eq!(rep.overall_gcd, Some(3));
        // only ABC repeats (positions 1 and 4)
        assert_eq!(rep.matches.len(), 1);
        let abc: Vec<_> = rep.matches.iter().filter(|m| m.ngram == "ABC").collect();
        assert_eq!(abc.len(), 1);
        assert_eq!((abc[0].pos_a, abc[0].pos_b), (1, 4));
    }

    #[test]
    fn triple_occurrence_keeps_all_pairs_but_dedups_distances() {
        // XYZ at 1, 4, 7: pairs (1,4), (1,7), (4,7) but distances {3, 6}
        let t = NormalizedText::normalize("XYZXYZXYZ");
        let rep = find_repeat_distances(&t, 3).unwrap();
        let xyz: Vec<_> = rep.matches.iter().filter(|m| m.ngram == "XYZ").collect();
        assert_eq!(xyz.len(), 3);
        assert_eq!(rep.distances, vec![3, 6]);
    }

    #[test]
    fn no_repeats_is_a_report_not_an_error() {
        let t = NormalizedText::normalize("ABCDEFG");
        let rep = find_repeat_distances(&t, 3).unwrap();
        assert!(rep.matches.is_empty());
        assert!(rep.distances.is_empty());
        assert_eq!(rep.overall_gcd, None);
        assert!(matches!(
            divisor_census(&rep.distances, 20),
            Err(Error::KasiskiInconclusive)
        ));
    }

    #[test]
    fn census_counts_and_gcds() {
        let census = divisor_census(&[80, 122, 176], 20).unwrap();
        assert_eq!(census.overall_gcd, 2);
        let count_of = |d: u64| census.counts.iter().find(|&&(dd, _)| dd == d).unwrap().1;
        assert_eq!(count_of(2), 3);
        assert_eq!(count_of(16), 2); // 80 and 176
        assert_eq!(gcd_of(&[80, 176]), Some(16));
    }

    #[test]
    fn rejects_bad_sizes() {
        let t = NormalizedText::normalize("AB");
        assert!(matches!(
            find_repeat_distances(&t, 1),
            Err(Error::NgramTooSmall(1))
        ));
        assert!(matches!(
            find_repeat_distances(&t, 3),
            Err(Error::TextShorterThanNgram { .. })
        ));
    }
}
