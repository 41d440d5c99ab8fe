//! Finite rational grids standing in for ℝ in the checking harnesses.
//!
//! An exhaustive grid enumerates exactly the reduced rationals `p/q` with
//! `|p/q| ≤ R` and `1 ≤ q ≤ D`, sorted ascending; a sampled grid draws a
//! reproducible sequence of points in the same bounds from a seeded stream
//! cipher, so identical seeds give identical reports on every platform.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::rational::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GridError {
    #[error("grid range bound must be positive, got {0}")]
    NonPositiveRange(Rational),
    #[error("grid denominator bound must be at least 1")]
    ZeroDenomBound,
    #[error("sample count must be at least 1")]
    ZeroSampleCount,
}

/// Exhaustive enumeration or seeded sampling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GridMode {
    Exhaustive,
    Sampled { count: usize, seed: u64 },
}

/// A finite verification domain: reduced rationals `p/q` with `|p/q| ≤ R`
/// and `q ≤ D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridSpec {
    mode: GridMode,
    range_bound: Rational,
    denom_bound: u32,
}

impl GridSpec {
    pub const DEFAULT_RANGE: i64 = 4;
    pub const DEFAULT_DENOM: u32 = 16;

    pub fn new(mode: GridMode, range_bound: Rational, denom_bound: u32) -> Result<Self, GridError> {
        if !range_bound.is_positive() {
            return Err(GridError::NonPositiveRange(range_bound));
        }
        if denom_bound == 0 {
            return Err(GridError::ZeroDenomBound);
        }
        if let GridMode::Sampled { count: 0, .. } = mode {
            return Err(GridError::ZeroSampleCount);
        }
        Ok(GridSpec {
            mode,
            range_bound,
            denom_bound,
        })
    }

    pub fn exhaustive(range_bound: Rational, denom_bound: u32) -> Result<Self, GridError> {
        Self::new(GridMode::Exhaustive, range_bound, denom_bound)
    }

    /// The default grid: exhaustive, R = 4, D = 16 (641 points).
    pub fn default_exhaustive() -> Self {
        Self::exhaustive(int(Self::DEFAULT_RANGE), Self::DEFAULT_DENOM).expect("valid defaults")
    }

    pub fn sampled(
        range_bound: Rational,
        denom_bound: u32,
        count: usize,
        seed: u64,
    ) -> Result<Self, GridError> {
        Self::new(GridMode::Sampled { count, seed }, range_bound, denom_bound)
    }

    pub fn mode(&self) -> &GridMode {
        &self.mode
    }

    pub fn range_bound(&self) -> &Rational {
        &self.range_bound
    }

    pub fn denom_bound(&self) -> u32 {
        self.denom_bound
    }

    pub fn is_exhaustive(&self) -> bool {
        matches!(self.mode, GridMode::Exhaustive)
    }

    /// Grid points in enumeration order: ascending for exhaustive grids,
    /// draw order for sampled ones.
    pub fn points(&self) -> Vec<Rational> {
        match self.mode {
            GridMode::Exhaustive => self.exhaustive_points(),
            GridMode::Sampled { count, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..count).map(|_| self.draw(&mut rng)).collect()
            }
        }
    }

    /// Sampled tuple rows for multi-variable checks; each row is `arity`
    /// independent draws from the same stream.
    pub(crate) fn sample_tuples(&self, arity: usize) -> Option<Vec<Vec<Rational>>> {
        match self.mode {
            GridMode::Exhaustive => None,
            GridMode::Sampled { count, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                Some(
                    (0..count)
                        .map(|_| (0..arity).map(|_| self.draw(&mut rng)).collect())
                        .collect(),
                )
            }
        }
    }

    fn numer_bound(&self, q: u32) -> i64 {
        // ⌊R·q⌋ as an i64; absurdly large grids are a configuration error.
        (&self.range_bound * int(i64::from(q)))
            .floor()
            .to_i64()
            .filter(|b| *b <= 100_000_000)
            .expect("grid range bound too large to enumerate")
    }

    fn exhaustive_points(&self) -> Vec<Rational> {
        let mut points = Vec::new();
        for q in 1..=self.denom_bound {
            let bound = self.numer_bound(q);
            for p in -bound..=bound {
                if num_integer::gcd(p.unsigned_abs(), u64::from(q)) == 1 {
                    points.push(Rational::new(p, i64::from(q)).expect("q >= 1"));
                }
            }
        }
        points.sort();
        points
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> Rational {
        let q = rng.gen_range(1..=self.denom_bound);
        let bound = self.numer_bound(q);
        let p = rng.gen_range(-bound..=bound);
        Rational::new(p, i64::from(q)).expect("q >= 1")
    }

    /// Summary block embedded in structured reports.
    pub fn summary(&self) -> GridSummary {
        let (mode, count, seed) = match self.mode {
            GridMode::Exhaustive => ("exhaustive", self.exhaustive_points().len(), None),
            GridMode::Sampled { count, seed } => ("sampled", count, Some(seed)),
        };
        GridSummary {
            mode,
            range: self.range_bound.clone(),
            denom: self.denom_bound,
            count,
            seed,
        }
    }
}

/// Serialized description of the grid a report was produced on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GridSummary {
    pub mode: &'static str,
    #[serde(rename = "R")]
    pub range: Rational,
    #[serde(rename = "D")]
    pub denom: u32,
    pub count: usize,
    pub seed: Option<u64>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use std::collections::BTreeSet;

    #[test]
    fn default_grid_is_sorted_reduced_and_sized() {
        let grid = GridSpec::default_exhaustive();
        let points = grid.points();
        // 9 integers-with-small-numerators at q=1 plus 8·φ(q) for q = 2..16.
        assert_eq!(points.len(), 641);
        assert!(points.windows(2).all(|w| w[0] < w[1]));
        assert!(points.contains(&int(0)));
        assert!(points.contains(&int(-4)) && points.contains(&int(4)));
        assert!(points.contains(&rat(-63, 16)));
        let bound = int(4);
        assert!(points.iter().all(|x| x.abs() <= bound));
    }

    #[test]
    fn small_grid_enumerates_exactly() {
        let grid = GridSpec::exhaustive(int(1), 2).unwrap();
        let expected: Vec<Rational> = [
            rat(-1, 1),
            rat(-1, 2),
            rat(0, 1),
            rat(1, 2),
            rat(1, 1),
        ]
        .to_vec();
        assert_eq!(grid.points(), expected);
    }

    #[test]
    fn fractional_range_bound_truncates() {
        let grid = GridSpec::exhaustive(rat(3, 2), 2).unwrap();
        let points = grid.points();
        assert!(points.contains(&rat(3, 2)));
        assert!(!points.contains(&int(2)));
        assert!(points.iter().all(|x| x.abs() <= rat(3, 2)));
    }

    #[test]
    fn sampling_is_reproducible_and_in_bounds() {
        let grid = GridSpec::sampled(int(4), 16, 500, 0xfeed).unwrap();
        let a = grid.points();
        let b = grid.points();
        assert_eq!(a, b);
        assert_eq!(a.len(), 500);
        let full: BTreeSet<_> = GridSpec::default_exhaustive().points().into_iter().collect();
        assert!(a.iter().all(|x| full.contains(x)));

        let other = GridSpec::sampled(int(4), 16, 500, 0xfeee).unwrap();
        assert_ne!(a, other.points());
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(GridSpec::exhaustive(int(0), 16).is_err());
        assert!(GridSpec::exhaustive(int(-1), 16).is_err());
        assert!(GridSpec::exhaustive(int(4), 0).is_err());
        assert!(GridSpec::sampled(int(4), 16, 0, 1).is_err());
    }
}
