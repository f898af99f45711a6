//! Seeded random chart points and polynomials for the verification sweeps.
//! A seed fully determines the sample stream, so every report is replayable.

use crate::cartan::{CartanDatum, Degree};
use crate::chart::ChartPoint;
use crate::poly::Poly;
use crate::rat::Rat;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

/// Ranges for the random small rationals.
#[derive(Debug, Clone, Copy)]
pub struct SampleConfig {
    /// Numerators are drawn from -max_numer..=max_numer.
    pub max_numer: i64,
    /// Denominators are drawn from min_denom..=max_denom.
    pub min_denom: i64,
    pub max_denom: i64,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig { max_numer: 10_000, min_denom: 1, max_denom: 10_000 }
    }
}

impl SampleConfig {
    /// Coordinates bounded by 1 in magnitude with well-separated values,
    /// keeping exponential flows and fixed-step integration tame.
    pub fn flow_friendly() -> Self {
        SampleConfig { max_numer: 10, min_denom: 11, max_denom: 16 }
    }
}

pub fn rng_for_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn sample_rat(rng: &mut ChaCha8Rng, cfg: &SampleConfig) -> Rat {
    let numer = rng.random_range(-cfg.max_numer..=cfg.max_numer);
    let denom = rng.random_range(cfg.min_denom..=cfg.max_denom);
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

fn sample_nonzero_rat(rng: &mut ChaCha8Rng, cfg: &SampleConfig) -> Rat {
    loop {
        let r = sample_rat(rng, cfg);
        if !num_traits::Zero::is_zero(&r) {
            return r;
        }
    }
}

/// A random point of the chart: globally distinct x, nonzero y, all entries
/// small rationals. Rejection sampling on the invariants.
pub fn sample_chart_point(
    cartan: &CartanDatum,
    alpha: &Degree,
    rng: &mut ChaCha8Rng,
    cfg: &SampleConfig,
) -> ChartPoint {
    let mut seen: BTreeSet<Rat> = BTreeSet::new();
    let mut x: Vec<Vec<Rat>> = Vec::with_capacity(cartan.rank());
    let mut y: Vec<Vec<Rat>> = Vec::with_capacity(cartan.rank());
    for i in 0..cartan.rank() {
        let a = alpha.coeff(i) as usize;
        let mut xs = Vec::with_capacity(a);
        let mut ys = Vec::with_capacity(a);
        for _ in 0..a {
            let v = loop {
                let candidate = sample_rat(rng, cfg);
                if seen.insert(candidate.clone()) {
                    break candidate;
                }
            };
            xs.push(v);
            ys.push(sample_nonzero_rat(rng, cfg));
        }
        x.push(xs);
        y.push(ys);
    }
    ChartPoint::new(cartan.clone(), alpha.clone(), x, y).expect("sampler respects invariants")
}

/// A batch of seeded points; entry k uses the stream of a single RNG, so
/// the whole batch is a pure function of the seed.
pub fn sample_chart_points(
    cartan: &CartanDatum,
    alpha: &Degree,
    seed: u64,
    count: usize,
    cfg: &SampleConfig,
) -> Vec<ChartPoint> {
    let mut rng = rng_for_seed(seed);
    (0..count)
        .map(|_| sample_chart_point(cartan, alpha, &mut rng, cfg))
        .collect()
}

/// Random polynomial of degree at most `max_deg` (possibly lower or zero).
pub fn sample_poly(rng: &mut ChaCha8Rng, max_deg: usize, cfg: &SampleConfig) -> Poly<Rat> {
    let len = rng.random_range(0..=max_deg + 1);
    Poly::from_coeffs((0..len).map(|_| sample_rat(rng, cfg)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampling_is_deterministic() {
        let cartan = CartanDatum::from_name("A2").unwrap();
        let alpha = Degree::new(vec![2, 1]);
        let a = sample_chart_points(&cartan, &alpha, 7, 5, &SampleConfig::default());
        let b = sample_chart_points(&cartan, &alpha, 7, 5, &SampleConfig::default());
        assert_eq!(a, b);
        let c = sample_chart_points(&cartan, &alpha, 8, 5, &SampleConfig::default());
        assert_ne!(a, c);
    }

    #[test]
    fn flow_friendly_points_are_bounded() {
        let cartan = CartanDatum::from_name("A1").unwrap();
        let alpha = Degree::new(vec![3]);
        let cfg = SampleConfig::flow_friendly();
        for pt in sample_chart_points(&cartan, &alpha, 42, 20, &cfg) {
            for k in 0..3 {
                let x = crate::rat::rat_to_f64(pt.x(0, k));
                assert!(x.abs() < 1.0);
            }
        }
    }
}
