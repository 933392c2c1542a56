//! Binning of opinions into `R` equal-width bins of [0, 1] and the Simpson
//! and Shannon opinion diversity indices over the resulting counts.
//!
//! Bins are half-open `[(i-1)/R, i/R)` except the last, which also holds
//! the value 1. Proportions for the Shannon index are `c_i / n_f`;
//! logarithms are natural.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dynamics::OpinionVector;
use crate::error::{Error, Result};

/// Distance within which an opinion is treated as sitting exactly on a bin
/// boundary. Closed-form opinions such as `i / n_f` pick up solver rounding.
pub const DEFAULT_SNAP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinHistogram {
    #[serde(rename = "R")]
    bins: usize,
    n_f: usize,
    counts: Vec<usize>,
}

impl BinHistogram {
    /// Builds a histogram directly from counts.
    pub fn from_counts(counts: Vec<usize>) -> Result<Self> {
        if counts.len() < 2 {
            return Err(Error::TooFewBins(counts.len()));
        }
        Ok(BinHistogram {
            bins: counts.len(),
            n_f: counts.iter().sum(),
            counts,
        })
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn total(&self) -> usize {
        self.n_f
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("histogram serializes")
    }
}

/// Index (0-based) of the bin holding `value`.
fn bin_index(value: f64, bins: usize, snap_tol: f64) -> Result<usize> {
    if !(value >= -snap_tol && value <= 1.0 + snap_tol) {
        return Err(Error::OpinionOutOfRange(value));
    }
    let scaled = value * bins as f64;
    let nearest = scaled.round();
    let index = if (value - nearest / bins as f64).abs() <= snap_tol {
        nearest as usize
    } else {
        scaled.floor() as usize
    };
    Ok(index.min(bins - 1))
}

pub fn bin_opinions(x: &OpinionVector, bins: usize) -> Result<BinHistogram> {
    bin_values(x.values(), bins, DEFAULT_SNAP_TOL)
}

pub fn bin_opinions_snapped(x: &OpinionVector, bins: usize, snap_tol: f64) -> Result<BinHistogram> {
    bin_values(x.values(), bins, snap_tol)
}

/// Bins raw opinion values.
pub fn bin_values(values: &[f64], bins: usize, snap_tol: f64) -> Result<BinHistogram> {
    if bins < 2 {
        return Err(Error::TooFewBins(bins));
    }
    let mut counts = vec![0usize; bins];
    for &v in values {
        counts[bin_index(v, bins, snap_tol)?] += 1;
    }
    Ok(BinHistogram {
        bins,
        n_f: values.len(),
        counts,
    })
}

/// `1 - sum c_i (c_i - 1) / (n_f (n_f - 1))`.
pub fn simpson_index(h: &BinHistogram) -> Result<f64> {
    let nf = h.total();
    if nf < 2 {
        return Err(Error::TooFewFollowers(nf));
    }
    let same: usize = h.counts.iter().map(|&c| c * c.saturating_sub(1)).sum();
    Ok(1.0 - same as f64 / (nf * (nf - 1)) as f64)
}

/// `-sum p_i ln p_i` with `p_i = c_i / n_f` and `0 ln 0 = 0`.
pub fn shannon_index(h: &BinHistogram) -> f64 {
    let nf = h.total() as f64;
    let entropy: f64 = h
        .counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / nf;
            -p * p.ln()
        })
        .sum();
    // A single occupied bin sums to -0.0.
    entropy.max(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiversityScore {
    pub simpson: f64,
    pub shannon: f64,
}

impl DiversityScore {
    pub fn of(h: &BinHistogram) -> Result<Self> {
        Ok(DiversityScore {
            simpson: simpson_index(h)?,
            shannon: shannon_index(h),
        })
    }

    pub fn get(&self, measure: Measure) -> f64 {
        match measure {
            Measure::Simpson => self.simpson,
            Measure::Shannon => self.shannon,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Simpson,
    Shannon,
}

impl Measure {
    pub const ALL: [Measure; 2] = [Measure::Simpson, Measure::Shannon];
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Measure::Simpson => "simpson",
            Measure::Shannon => "shannon",
        })
    }
}

/// Upper bound on an index for `n_f` opinions in `R` bins, available in
/// closed form for `R = n_f` and `R = 2`.
pub fn max_diversity(n_f: usize, bins: usize, measure: Measure) -> Result<f64> {
    if measure == Measure::Simpson && n_f < 2 {
        return Err(Error::TooFewFollowers(n_f));
    }
    if bins == n_f {
        return Ok(match measure {
            Measure::Simpson => 1.0,
            Measure::Shannon => (n_f as f64).ln(),
        });
    }
    if bins != 2 {
        return Err(Error::UnsupportedBinCount {
            bins,
            followers: n_f,
        });
    }
    let lo = n_f / 2;
    let hi = n_f - lo;
    let h = BinHistogram::from_counts(vec![lo, hi])?;
    Ok(match measure {
        Measure::Simpson => simpson_index(&h)?,
        Measure::Shannon => shannon_index(&h),
    })
}

/// Bin count requested relative to the follower count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BinSpec {
    /// One bin per follower.
    Followers,
    Fixed(usize),
}

impl BinSpec {
    pub fn resolve(self, n_f: usize) -> usize {
        match self {
            BinSpec::Followers => n_f,
            BinSpec::Fixed(r) => r,
        }
    }
}

impl fmt::Display for BinSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BinSpec::Followers => f.write_str("nf"),
            BinSpec::Fixed(r) => write!(f, "{r}"),
        }
    }
}

impl FromStr for BinSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "nf" | "n_f" => Ok(BinSpec::Followers),
            t => t.parse().map(BinSpec::Fixed).map_err(|_| Error::Parse {
                line: 0,
                msg: format!("bin count `{s}`: expected `nf` or an integer"),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn hist(counts: &[usize]) -> BinHistogram {
        BinHistogram::from_counts(counts.to_vec()).unwrap()
    }

    #[test]
    fn binning_examples() {
        let h = bin_values(&[0.25, 0.5, 0.75], 3, DEFAULT_SNAP_TOL).unwrap();
        assert_eq!(h.counts(), &[1, 1, 1]);
        let h = bin_values(&[0.25, 0.5, 0.75, 1.0], 4, DEFAULT_SNAP_TOL).unwrap();
        assert_eq!(h.counts(), &[0, 1, 1, 2]);
        let h = bin_values(&[1.0; 6], 5, DEFAULT_SNAP_TOL).unwrap();
        assert_eq!(h.counts(), &[0, 0, 0, 0, 6]);
        assert_eq!(h.total(), 6);
    }

    #[test]
    fn boundary_semantics() {
        for r in 2..=12usize {
            for i in 0..r {
                let h = bin_values(&[i as f64 / r as f64], r, DEFAULT_SNAP_TOL).unwrap();
                assert_eq!(h.counts()[i], 1, "value {i}/{r}");
            }
            let h = bin_values(&[1.0], r, DEFAULT_SNAP_TOL).unwrap();
            assert_eq!(h.counts()[r - 1], 1);
        }
        // Rounding just below a boundary snaps onto it.
        let h = bin_values(&[0.5 - 1e-12], 2, DEFAULT_SNAP_TOL).unwrap();
        assert_eq!(h.counts(), &[0, 1]);
        // Snapping disabled restores the raw half-open rule.
        let h = bin_values(&[0.5 - 1e-12], 2, 0.0).unwrap();
        assert_eq!(h.counts(), &[1, 0]);
        let h = bin_values(&[1.0 + 1e-12, -1e-12], 2, DEFAULT_SNAP_TOL).unwrap();
        assert_eq!(h.counts(), &[1, 1]);
    }

    #[test]
    fn binning_errors() {
        assert_eq!(
            bin_values(&[1.2], 3, DEFAULT_SNAP_TOL),
            Err(Error::OpinionOutOfRange(1.2))
        );
        assert!(matches!(
            bin_values(&[f64::NAN], 3, DEFAULT_SNAP_TOL),
            Err(Error::OpinionOutOfRange(_))
        ));
        assert_eq!(bin_values(&[0.5], 1, DEFAULT_SNAP_TOL), Err(Error::TooFewBins(1)));
    }

    #[test]
    fn index_examples() {
        let uniform = hist(&[1; 9]);
        assert_eq!(simpson_index(&uniform).unwrap(), 1.0);
        assert!((shannon_index(&uniform) - 9f64.ln()).abs() < 1e-12);

        let lump = hist(&[0, 0, 9, 0]);
        assert_eq!(simpson_index(&lump).unwrap(), 0.0);
        assert_eq!(shannon_index(&lump), 0.0);

        assert_eq!(simpson_index(&hist(&[1, 0])), Err(Error::TooFewFollowers(1)));
        assert_eq!(shannon_index(&hist(&[0, 0])), 0.0);
    }

    #[test]
    fn max_diversity_closed_forms() {
        assert!((max_diversity(9, 9, Measure::Shannon).unwrap() - 9f64.ln()).abs() < 1e-15);
        assert_eq!(max_diversity(9, 9, Measure::Simpson).unwrap(), 1.0);
        // c = (2, 2): 1 - 2 * 2 / 12.
        assert!((max_diversity(4, 2, Measure::Simpson).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        // c = (2, 3).
        let want = -(0.4f64 * 0.4f64.ln() + 0.6 * 0.6f64.ln());
        assert!((max_diversity(5, 2, Measure::Shannon).unwrap() - want).abs() < 1e-15);
        assert_eq!(
            max_diversity(9, 3, Measure::Simpson),
            Err(Error::UnsupportedBinCount {
                bins: 3,
                followers: 9
            })
        );
        assert_eq!(max_diversity(1, 2, Measure::Simpson), Err(Error::TooFewFollowers(1)));
    }

    /// The two-bin bound is the best split: exhaustive over all (c1, c2).
    #[test]
    fn two_bin_bound_is_best_split() {
        for nf in 2..=60usize {
            for measure in Measure::ALL {
                let bound = max_diversity(nf, 2, measure).unwrap();
                let best = (0..=nf)
                    .map(|c1| DiversityScore::of(&hist(&[c1, nf - c1])).unwrap().get(measure))
                    .fold(f64::NEG_INFINITY, f64::max);
                assert!((best - bound).abs() < 1e-12, "nf={nf} {measure}");
            }
        }
    }

    /// Simpson hits its R = n_f maximum exactly when no bin holds two.
    #[test]
    fn simpson_maximum_iff_all_counts_at_most_one() {
        fn compositions(total: usize, parts: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if parts == 1 {
                prefix.push(total);
                out.push(prefix.clone());
                prefix.pop();
                return;
            }
            for c in 0..=total {
                prefix.push(c);
                compositions(total - c, parts - 1, prefix, out);
                prefix.pop();
            }
        }
        for nf in 2..=8 {
            let mut all = Vec::new();
            compositions(nf, nf, &mut Vec::new(), &mut all);
            let max = max_diversity(nf, nf, Measure::Simpson).unwrap();
            for counts in all {
                let s = simpson_index(&hist(&counts)).unwrap();
                assert_eq!(s == max, counts.iter().all(|&c| c <= 1), "{counts:?}");
            }
        }
    }

    #[test]
    fn bin_spec_parsing() {
        assert_eq!("nf".parse::<BinSpec>().unwrap(), BinSpec::Followers);
        assert_eq!("2".parse::<BinSpec>().unwrap(), BinSpec::Fixed(2));
        assert!("two".parse::<BinSpec>().is_err());
        assert_eq!(BinSpec::Followers.resolve(9), 9);
        assert_eq!(BinSpec::Fixed(2).resolve(9), 2);
    }

    #[test]
    fn histogram_json() {
        let h = hist(&[0, 1, 1, 2]);
        assert_eq!(h.to_json(), r#"{"R":4,"n_f":4,"counts":[0,1,1,2]}"#);
        let back: BinHistogram = serde_json::from_str(&h.to_json()).unwrap();
        assert_eq!(back, h);
    }

    proptest! {
        #[test]
        fn binning_conserves_total(values in prop::collection::vec(0.0f64..=1.0, 0..40), r in 2usize..20) {
            let h = bin_values(&values, r, DEFAULT_SNAP_TOL).unwrap();
            prop_assert_eq!(h.counts().iter().sum::<usize>(), values.len());
            prop_assert_eq!(h.total(), values.len());
        }

        #[test]
        fn indices_within_bounds(counts in prop::collection::vec(0usize..8, 2..12)) {
            let h = hist(&counts);
            prop_assume!(h.total() >= 2);
            let s = simpson_index(&h).unwrap();
            let e = shannon_index(&h);
            prop_assert!((0.0..=1.0).contains(&s));
            prop_assert!(e >= 0.0 && e <= (counts.len() as f64).ln() + 1e-12);
        }

        #[test]
        fn indices_ignore_bin_order(counts in prop::collection::vec(0usize..8, 2..12), seed in any::<u64>()) {
            let h = hist(&counts);
            prop_assume!(h.total() >= 2);
            let mut shuffled = counts.clone();
            let len = shuffled.len();
            shuffled.rotate_left((seed as usize) % len);
            shuffled.swap(0, (seed as usize / 7) % len);
            let p = hist(&shuffled);
            prop_assert_eq!(simpson_index(&h).unwrap(), simpson_index(&p).unwrap());
            prop_assert!((shannon_index(&h) - shannon_index(&p)).abs() < 1e-12);
        }
    }
}
