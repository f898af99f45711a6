//! The étale coordinate chart: colored (x, y) tuples, their polynomial
//! avatars (p_i monic, q_i of lower degree), and exact conversions both ways.

use crate::cartan::{CartanDatum, CartanError, CartanSpec, Degree};
use crate::poly::{Poly, PolyError};
use crate::rat::{format_rat, parse_rat, rat_to_f64, Rat, RatError};
use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

/// Relative tolerance for root verification in float mode:
/// accept x when |p(x)| <= 1e-9 · (1+|x|)^deg.
pub const FLOAT_ROOT_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChartError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("coincident x-coordinates at (color {0}, slot {1}) and (color {2}, slot {3})")]
    CoincidentX(usize, usize, usize, usize),
    #[error("zero y-coordinate at (color {color}, slot {slot}): point lies outside the chart")]
    ZeroY { color: usize, slot: usize },
    #[error("{value} is not a root of p_{color}")]
    NotARoot { color: usize, value: String },
    #[error("p_{color} must be monic of degree {expected}")]
    NotMonic { color: usize, expected: usize },
    #[error("q_{color} must have degree < {bound}")]
    DegreeTooHigh { color: usize, bound: usize },
    #[error("float root verification failed for color {color}: |p(x)| = {residual:e}")]
    FloatRootCheck { color: usize, residual: f64 },
    #[error(transparent)]
    Cartan(#[from] CartanError),
    #[error(transparent)]
    Rat(#[from] RatError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A point of the open chart: per color i, the a_i pairwise-distinct roots
/// x_i^k (distinct across all colors) and the nonzero values y_i^k.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartPoint {
    cartan: CartanDatum,
    alpha: Degree,
    x: Vec<Vec<Rat>>,
    y: Vec<Vec<Rat>>,
}

impl ChartPoint {
    pub fn new(
        cartan: CartanDatum,
        alpha: Degree,
        x: Vec<Vec<Rat>>,
        y: Vec<Vec<Rat>>,
    ) -> Result<Self, ChartError> {
        if alpha.rank() != cartan.rank() {
            return Err(ChartError::ShapeMismatch(format!(
                "degree has rank {}, datum has rank {}",
                alpha.rank(),
                cartan.rank()
            )));
        }
        if x.len() != cartan.rank() || y.len() != cartan.rank() {
            return Err(ChartError::ShapeMismatch("one coordinate block per color required".into()));
        }
        for i in 0..cartan.rank() {
            let a = alpha.coeff(i) as usize;
            if x[i].len() != a || y[i].len() != a {
                return Err(ChartError::ShapeMismatch(format!(
                    "color {i} needs {a} coordinate pairs, got {} x and {} y",
                    x[i].len(),
                    y[i].len()
                )));
            }
        }
        check_globally_distinct(&x)?;
        for (i, ys) in y.iter().enumerate() {
            for (k, v) in ys.iter().enumerate() {
                if v.is_zero() {
                    return Err(ChartError::ZeroY { color: i, slot: k });
                }
            }
        }
        Ok(ChartPoint { cartan, alpha, x, y })
    }

    pub fn cartan(&self) -> &CartanDatum {
        &self.cartan
    }

    pub fn alpha(&self) -> &Degree {
        &self.alpha
    }

    pub fn x(&self, color: usize, slot: usize) -> &Rat {
        &self.x[color][slot]
    }

    pub fn y(&self, color: usize, slot: usize) -> &Rat {
        &self.y[color][slot]
    }

    pub fn x_block(&self, color: usize) -> &[Rat] {
        &self.x[color]
    }

    pub fn y_block(&self, color: usize) -> &[Rat] {
        &self.y[color]
    }

    /// 2|α|, the number of chart coordinates.
    pub fn dimension(&self) -> usize {
        dimension(&self.alpha)
    }

    /// The polynomial avatar: p_i monic with roots x_i^•, q_i the unique
    /// lower-degree polynomial with q_i(x_i^k) = y_i^k.
    pub fn to_polys(&self) -> PolyChart {
        let mut p = Vec::with_capacity(self.cartan.rank());
        let mut q = Vec::with_capacity(self.cartan.rank());
        for i in 0..self.cartan.rank() {
            p.push(Poly::monic_from_roots(&self.x[i]));
            // nodes are distinct by the chart invariant
            q.push(Poly::lagrange_lower(&self.x[i], &self.y[i]).expect("chart invariant"));
        }
        PolyChart { cartan: self.cartan.clone(), alpha: self.alpha.clone(), p, q }
    }

    /// Lossy conversion for the flow integrator.
    pub fn to_float(&self) -> ChartPointC {
        ChartPointC {
            cartan: self.cartan.clone(),
            alpha: self.alpha.clone(),
            x: self.x.iter().map(|b| b.iter().map(|v| Complex64::new(rat_to_f64(v), 0.0)).collect()).collect(),
            y: self.y.iter().map(|b| b.iter().map(|v| Complex64::new(rat_to_f64(v), 0.0)).collect()).collect(),
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self, ChartError> {
        let dto: PointJson = serde_json::from_str(s)
            .map_err(|e| ChartError::ShapeMismatch(format!("invalid point JSON: {e}")))?;
        dto.build()
    }

    pub fn to_json(&self) -> PointJson {
        PointJson::from_point(self)
    }
}

fn check_globally_distinct(x: &[Vec<Rat>]) -> Result<(), ChartError> {
    let mut seen: BTreeMap<&Rat, (usize, usize)> = BTreeMap::new();
    for (i, block) in x.iter().enumerate() {
        for (k, v) in block.iter().enumerate() {
            if let Some(&(pi, pk)) = seen.get(v) {
                return Err(ChartError::CoincidentX(pi, pk, i, k));
            }
            seen.insert(v, (i, k));
        }
    }
    Ok(())
}

/// Per color: p_i monic of degree a_i and q_i of degree < a_i.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyChart {
    cartan: CartanDatum,
    alpha: Degree,
    p: Vec<Poly<Rat>>,
    q: Vec<Poly<Rat>>,
}

impl PolyChart {
    pub fn new(
        cartan: CartanDatum,
        alpha: Degree,
        p: Vec<Poly<Rat>>,
        q: Vec<Poly<Rat>>,
    ) -> Result<Self, ChartError> {
        if alpha.rank() != cartan.rank() || p.len() != cartan.rank() || q.len() != cartan.rank() {
            return Err(ChartError::ShapeMismatch("one (p, q) pair per color required".into()));
        }
        for i in 0..cartan.rank() {
            let a = alpha.coeff(i) as usize;
            if p[i].degree() != Some(a) || !p[i].is_monic() {
                return Err(ChartError::NotMonic { color: i, expected: a });
            }
            if let Some(dq) = q[i].degree() {
                if dq >= a {
                    return Err(ChartError::DegreeTooHigh { color: i, bound: a });
                }
            }
        }
        Ok(PolyChart { cartan, alpha, p, q })
    }

    pub fn cartan(&self) -> &CartanDatum {
        &self.cartan
    }

    pub fn alpha(&self) -> &Degree {
        &self.alpha
    }

    pub fn p(&self, color: usize) -> &Poly<Rat> {
        &self.p[color]
    }

    pub fn q(&self, color: usize) -> &Poly<Rat> {
        &self.q[color]
    }

    pub fn from_json_str(s: &str) -> Result<(Self, Option<Vec<Vec<Rat>>>), ChartError> {
        let dto: PolyChartJson = serde_json::from_str(s)
            .map_err(|e| ChartError::ShapeMismatch(format!("invalid polychart JSON: {e}")))?;
        dto.build()
    }

    pub fn to_json(&self, roots: Option<&[Vec<Rat>]>) -> PolyChartJson {
        PolyChartJson::from_polychart(self, roots)
    }
}

/// Recovers the chart point from polynomial data and its exact roots.
///
/// The caller supplies the roots; they are verified by evaluation rather
/// than computed, which keeps the exact path closed under the rationals.
pub fn from_polys(pc: &PolyChart, roots: &[Vec<Rat>]) -> Result<ChartPoint, ChartError> {
    if roots.len() != pc.cartan.rank() {
        return Err(ChartError::ShapeMismatch("one root list per color required".into()));
    }
    for (i, block) in roots.iter().enumerate() {
        let a = pc.alpha.coeff(i) as usize;
        if block.len() != a {
            return Err(ChartError::ShapeMismatch(format!(
                "color {i} needs {a} roots, got {}",
                block.len()
            )));
        }
        for r in block {
            if !pc.p[i].eval(r).is_zero() {
                return Err(ChartError::NotARoot { color: i, value: format_rat(r) });
            }
        }
    }
    check_globally_distinct(roots)?;
    let mut y = Vec::with_capacity(roots.len());
    for (i, block) in roots.iter().enumerate() {
        let mut ys = Vec::with_capacity(block.len());
        for (k, r) in block.iter().enumerate() {
            let v = pc.q[i].eval(r);
            if v.is_zero() {
                return Err(ChartError::ZeroY { color: i, slot: k });
            }
            ys.push(v);
        }
        y.push(ys);
    }
    ChartPoint::new(pc.cartan.clone(), pc.alpha.clone(), roots.to_vec(), y)
}

/// 2|α|: the dimension of the chart for degree α.
pub fn dimension(alpha: &Degree) -> usize {
    2 * alpha.total()
}

/// Float-coefficient chart point for the flow integrator.
#[derive(Debug, Clone)]
pub struct ChartPointC {
    pub cartan: CartanDatum,
    pub alpha: Degree,
    pub x: Vec<Vec<Complex64>>,
    pub y: Vec<Vec<Complex64>>,
}

/// Roots of a complex polynomial via the eigenvalues of its companion matrix.
pub fn complex_roots(p: &Poly<Complex64>) -> Result<Vec<Complex64>, ChartError> {
    let Some(deg) = p.degree() else {
        return Err(ChartError::ShapeMismatch("cannot extract roots of the zero polynomial".into()));
    };
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lead = p.leading().cloned().expect("nonzero");
    let n = deg;
    let mut m = nalgebra::DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        m[(i, n - 1)] = -p.coeff(i) / lead;
    }
    let eig = m
        .eigenvalues()
        .ok_or_else(|| ChartError::ShapeMismatch("eigenvalue iteration failed".into()))?;
    Ok(eig.iter().cloned().collect())
}

/// Float-mode companion to `from_polys` for imported polynomial data:
/// roots come from the companion matrix and are accepted when
/// |p(x)| <= `FLOAT_ROOT_TOL` · (1+|x|)^deg.
pub fn from_polys_f64(
    cartan: CartanDatum,
    alpha: Degree,
    p: &[Poly<Complex64>],
    q: &[Poly<Complex64>],
) -> Result<ChartPointC, ChartError> {
    if p.len() != cartan.rank() || q.len() != cartan.rank() || alpha.rank() != cartan.rank() {
        return Err(ChartError::ShapeMismatch("one (p, q) pair per color required".into()));
    }
    let mut x = Vec::with_capacity(p.len());
    let mut y = Vec::with_capacity(p.len());
    for (i, pi) in p.iter().enumerate() {
        let a = alpha.coeff(i) as usize;
        if pi.degree() != Some(a) {
            return Err(ChartError::NotMonic { color: i, expected: a });
        }
        let roots = complex_roots(pi)?;
        for r in &roots {
            let bound = FLOAT_ROOT_TOL * (1.0 + r.norm()).powi(a as i32);
            let residual = pi.eval(r).norm();
            if residual > bound {
                return Err(ChartError::FloatRootCheck { color: i, residual });
            }
        }
        let ys: Vec<Complex64> = roots.iter().map(|r| q[i].eval(r)).collect();
        x.push(roots);
        y.push(ys);
    }
    Ok(ChartPointC { cartan, alpha, x, y })
}

// ---------------------------------------------------------------------------
// JSON forms: rationals as strings, maps keyed by 1-based color labels.

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointJson {
    pub cartan: CartanSpec,
    pub alpha: BTreeMap<String, u32>,
    pub x: BTreeMap<String, Vec<String>>,
    pub y: BTreeMap<String, Vec<String>>,
}

fn labelled_blocks(
    rank: usize,
    map: &BTreeMap<String, Vec<String>>,
) -> Result<Vec<Vec<Rat>>, ChartError> {
    let mut out = vec![Vec::new(); rank];
    for (label, vals) in map {
        let idx: usize = label
            .parse()
            .map_err(|_| ChartError::ShapeMismatch(format!("bad color label {label:?}")))?;
        if idx == 0 || idx > rank {
            return Err(ChartError::ShapeMismatch(format!("color label {label} out of range 1..={rank}")));
        }
        out[idx - 1] = vals.iter().map(|s| parse_rat(s)).collect::<Result<_, _>>()?;
    }
    Ok(out)
}

fn blocks_to_map(blocks: &[Vec<Rat>]) -> BTreeMap<String, Vec<String>> {
    blocks
        .iter()
        .enumerate()
        .map(|(i, b)| ((i + 1).to_string(), b.iter().map(format_rat).collect()))
        .collect()
}

fn alpha_from_map(rank: usize, map: &BTreeMap<String, u32>) -> Result<Degree, ChartError> {
    let mut coeffs = vec![0u32; rank];
    for (label, &a) in map {
        let idx: usize = label
            .parse()
            .map_err(|_| ChartError::ShapeMismatch(format!("bad color label {label:?}")))?;
        if idx == 0 || idx > rank {
            return Err(ChartError::ShapeMismatch(format!("color label {label} out of range 1..={rank}")));
        }
        coeffs[idx - 1] = a;
    }
    Ok(Degree::new(coeffs))
}

fn alpha_to_map(alpha: &Degree) -> BTreeMap<String, u32> {
    alpha
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, &a)| ((i + 1).to_string(), a))
        .collect()
}

impl PointJson {
    pub fn build(&self) -> Result<ChartPoint, ChartError> {
        let cartan = self.cartan.build()?;
        let alpha = alpha_from_map(cartan.rank(), &self.alpha)?;
        let x = labelled_blocks(cartan.rank(), &self.x)?;
        let y = labelled_blocks(cartan.rank(), &self.y)?;
        ChartPoint::new(cartan, alpha, x, y)
    }

    pub fn from_point(pt: &ChartPoint) -> Self {
        let cartan = match pt.cartan.name() {
            Some(name) => CartanSpec::Name(name.to_owned()),
            None => CartanSpec::Matrix { dot: pt.cartan.dot_matrix().to_vec() },
        };
        PointJson {
            cartan,
            alpha: alpha_to_map(&pt.alpha),
            x: blocks_to_map(&pt.x),
            y: blocks_to_map(&pt.y),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolyChartJson {
    pub cartan: CartanSpec,
    pub alpha: BTreeMap<String, u32>,
    pub p: BTreeMap<String, Vec<String>>,
    pub q: BTreeMap<String, Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub roots: Option<BTreeMap<String, Vec<String>>>,
}

impl PolyChartJson {
    pub fn build(&self) -> Result<(PolyChart, Option<Vec<Vec<Rat>>>), ChartError> {
        let cartan = self.cartan.build()?;
        let rank = cartan.rank();
        let alpha = alpha_from_map(rank, &self.alpha)?;
        let p = labelled_blocks(rank, &self.p)?
            .into_iter()
            .map(Poly::from_coeffs)
            .collect();
        let q = labelled_blocks(rank, &self.q)?
            .into_iter()
            .map(Poly::from_coeffs)
            .collect();
        let pc = PolyChart::new(cartan, alpha, p, q)?;
        let roots = match &self.roots {
            Some(map) => Some(labelled_blocks(rank, map)?),
            None => None,
        };
        Ok((pc, roots))
    }

    pub fn from_polychart(pc: &PolyChart, roots: Option<&[Vec<Rat>]>) -> Self {
        let cartan = match pc.cartan.name() {
            Some(name) => CartanSpec::Name(name.to_owned()),
            None => CartanSpec::Matrix { dot: pc.cartan.dot_matrix().to_vec() },
        };
        let poly_map = |ps: &[Poly<Rat>]| {
            ps.iter()
                .enumerate()
                .map(|(i, poly)| {
                    ((i + 1).to_string(), poly.coeffs().iter().map(format_rat).collect())
                })
                .collect()
        };
        PolyChartJson {
            cartan,
            alpha: alpha_to_map(&pc.alpha),
            p: poly_map(&pc.p),
            q: poly_map(&pc.q),
            roots: roots.map(blocks_to_map),
        }
    }
}
