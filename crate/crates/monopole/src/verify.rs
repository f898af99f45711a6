//! Batch verification sweeps over seeded random chart points: the Jacobi
//! identity, the inverse identity Ω·P = Id, the divided-difference oracle
//! against the bracket table, full rank, and chart round-trips. Sweeps run
//! in parallel over points (under the `parallel` feature) with order-stable
//! reports; every failure embeds a standalone reproducer.

use crate::cartan::{CartanError, CartanSpec, Degree};
use crate::chart::{from_polys, ChartError, ChartPoint, PointJson};
use crate::oracle::{oracle_xy, oracle_yy_mixed, oracle_yy_same};
use crate::par::map_slice;
use crate::poisson::{
    bivector_matrix, bracket_coords, identity_matrix, jacobiator, symplectic_matrix, ChartLayout,
    CoordIndex,
};
use crate::rat::format_rat;
use crate::sample::{sample_chart_points, SampleConfig};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Cartan(#[from] CartanError),
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error("invalid configuration: {0}")]
    BadConfig(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub cartan: CartanSpec,
    pub alpha: Vec<u32>,
    pub seed: u64,
    pub points: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JacobiFailure {
    pub point: PointJson,
    pub triple: [String; 3],
    pub value: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JacobiReport {
    pub points: usize,
    pub triples: usize,
    pub failures: Vec<JacobiFailure>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InverseFailure {
    pub point: PointJson,
    pub row: usize,
    pub col: usize,
    pub value: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InverseReport {
    pub points: usize,
    pub failures: Vec<InverseFailure>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleFailure {
    pub point: PointJson,
    pub comparison: String,
    pub oracle: String,
    pub table: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleReport {
    pub points: usize,
    pub comparisons: usize,
    pub failures: Vec<OracleFailure>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RankFailure {
    pub point: PointJson,
    pub rank: usize,
    pub expected: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    pub jacobi: JacobiReport,
    pub inverse: InverseReport,
    pub oracle: OracleReport,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.jacobi.failures.is_empty()
            && self.inverse.failures.is_empty()
            && self.oracle.failures.is_empty()
    }
}

/// Jacobiator of every unordered coordinate triple at one point.
/// Returns (triples checked, failures).
pub fn jacobi_check_point(pt: &ChartPoint) -> (usize, Vec<JacobiFailure>) {
    let layout = ChartLayout::new(pt.alpha());
    let coords: Vec<CoordIndex> = layout.coords().collect();
    let n = coords.len();
    let mut triples = 0;
    let mut failures = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                triples += 1;
                let value = jacobiator(pt, coords[i], coords[j], coords[k])
                    .expect("coordinates in range");
                if !value.is_zero() {
                    failures.push(JacobiFailure {
                        point: pt.to_json(),
                        triple: [coords[i].label(), coords[j].label(), coords[k].label()],
                        value: format_rat(&value),
                    });
                }
            }
        }
    }
    (triples, failures)
}

/// Ω·P compared entrywise against the identity at one point.
pub fn inverse_check_point(pt: &ChartPoint) -> Vec<InverseFailure> {
    let product = symplectic_matrix(pt).compose_with(&bivector_matrix(pt));
    let id = identity_matrix(product.len());
    let mut failures = Vec::new();
    for (r, row) in product.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            if v != &id[r][c] {
                failures.push(InverseFailure {
                    point: pt.to_json(),
                    row: r,
                    col: c,
                    value: format_rat(v),
                });
            }
        }
    }
    failures
}

/// Every divided-difference oracle value against the bracket table at one
/// point. Returns (comparisons, failures).
pub fn oracle_check_point(pt: &ChartPoint) -> (usize, Vec<OracleFailure>) {
    let pc = pt.to_polys();
    let rank = pt.cartan().rank();
    let roots: Vec<Vec<_>> = (0..rank).map(|i| pt.x_block(i).to_vec()).collect();
    let mut comparisons = 0;
    let mut failures = Vec::new();
    let mut check = |comparison: String, oracle_value, table_value| {
        comparisons += 1;
        if oracle_value != table_value {
            failures.push(OracleFailure {
                point: pt.to_json(),
                comparison,
                oracle: format_rat(&oracle_value),
                table: format_rat(&table_value),
            });
        }
    };
    for i in 0..rank {
        let a = pt.alpha().coeff(i) as usize;
        for k in 0..a {
            let oracle_value = oracle_xy(&pc, &roots, i, k).expect("valid chart data");
            let table_value =
                bracket_coords(pt, CoordIndex::x(i, k), CoordIndex::y(i, k)).expect("in range");
            check(format!("{{{}, {}}}", CoordIndex::x(i, k).label(), CoordIndex::y(i, k).label()),
                oracle_value, table_value);
            for l in 0..a {
                if l == k {
                    continue;
                }
                let oracle_value = oracle_yy_same(&pc, &roots, i, k, l).expect("valid chart data");
                let table_value = bracket_coords(pt, CoordIndex::y(i, k), CoordIndex::y(i, l))
                    .expect("in range");
                check(
                    format!("{{{}, {}}}", CoordIndex::y(i, k).label(), CoordIndex::y(i, l).label()),
                    oracle_value,
                    table_value,
                );
            }
            for j in 0..rank {
                if j == i {
                    continue;
                }
                for l in 0..pt.alpha().coeff(j) as usize {
                    let oracle_value =
                        oracle_yy_mixed(&pc, &roots, (i, k), (j, l)).expect("distinct roots");
                    let table_value = bracket_coords(pt, CoordIndex::y(i, k), CoordIndex::y(j, l))
                        .expect("in range");
                    check(
                        format!(
                            "{{{}, {}}}",
                            CoordIndex::y(i, k).label(),
                            CoordIndex::y(j, l).label()
                        ),
                        oracle_value,
                        table_value,
                    );
                }
            }
        }
    }
    (comparisons, failures)
}

/// Exact rank at one point; must be 2|α|.
pub fn rank_check_point(pt: &ChartPoint) -> Option<RankFailure> {
    let rank = bivector_matrix(pt).rank();
    let expected = pt.dimension();
    (rank != expected).then(|| RankFailure { point: pt.to_json(), rank, expected })
}

/// from_polys ∘ to_polys must be the identity at one point.
pub fn roundtrip_check_point(pt: &ChartPoint) -> bool {
    let pc = pt.to_polys();
    let roots: Vec<Vec<_>> =
        (0..pt.cartan().rank()).map(|i| pt.x_block(i).to_vec()).collect();
    match from_polys(&pc, &roots) {
        Ok(back) => back == *pt,
        Err(_) => false,
    }
}

pub fn jacobi_sweep(points: &[ChartPoint]) -> JacobiReport {
    let results = map_slice(points, jacobi_check_point);
    let mut triples = 0;
    let mut failures = Vec::new();
    for (t, mut f) in results {
        triples += t;
        failures.append(&mut f);
    }
    JacobiReport { points: points.len(), triples, failures }
}

pub fn inverse_sweep(points: &[ChartPoint]) -> InverseReport {
    let failures = map_slice(points, inverse_check_point).into_iter().flatten().collect();
    InverseReport { points: points.len(), failures }
}

pub fn oracle_sweep(points: &[ChartPoint]) -> OracleReport {
    let results = map_slice(points, oracle_check_point);
    let mut comparisons = 0;
    let mut failures = Vec::new();
    for (c, mut f) in results {
        comparisons += c;
        failures.append(&mut f);
    }
    OracleReport { points: points.len(), comparisons, failures }
}

pub fn rank_sweep(points: &[ChartPoint]) -> Vec<RankFailure> {
    map_slice(points, rank_check_point).into_iter().flatten().collect()
}

pub fn roundtrip_sweep(points: &[ChartPoint]) -> usize {
    map_slice(points, |pt| roundtrip_check_point(pt) as usize)
        .into_iter()
        .sum()
}

/// Samples the configured number of seeded points and runs the Jacobi,
/// inverse, and oracle sweeps.
pub fn run_verify(config: &VerifyConfig) -> Result<VerifyReport, VerifyError> {
    let cartan = config.cartan.build()?;
    if config.alpha.len() != cartan.rank() {
        return Err(VerifyError::BadConfig(format!(
            "alpha has {} entries, datum has rank {}",
            config.alpha.len(),
            cartan.rank()
        )));
    }
    if config.points == 0 {
        return Err(VerifyError::BadConfig("need at least one sample point".into()));
    }
    let alpha = Degree::new(config.alpha.clone());
    let points = sample_chart_points(&cartan, &alpha, config.seed, config.points, &SampleConfig::default());
    Ok(VerifyReport {
        config: config.clone(),
        jacobi: jacobi_sweep(&points),
        inverse: inverse_sweep(&points),
        oracle: oracle_sweep(&points),
    })
}
