//! The Poisson bivector and symplectic form in chart coordinates: bracket
//! evaluation, Leibniz extension to polynomial functions, the closed-form
//! Jacobiator, rank, and the exact inverse identity Ω·P = Id.
//!
//! Coordinate table, with i·j the symmetric form of the datum:
//!   {x_i^k, x_j^l} = 0
//!   {x_i^k, y_j^l} = δ_ij δ_kl y_j^l
//!   {y_i^k, y_j^l} = i·j · y_i^k y_j^l / (x_i^k - x_j^l)   for i ≠ j
//!   {y_i^k, y_i^l} = 0

use crate::cartan::{CartanDatum, Degree};
use crate::chart::ChartPoint;
use crate::mpoly::MPoly;
use crate::rat::{Coeff, Rat};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PoissonError {
    #[error("coordinate {0} out of range for this chart")]
    IndexOutOfRange(String),
    #[error("point left the chart: coincident x-coordinates or vanishing y")]
    OutsideChart,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoordKind {
    X,
    Y,
}

/// Address of a chart coordinate: kind, color, and slot (all 0-based here;
/// the CLI syntax `x:i:k` is 1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CoordIndex {
    pub kind: CoordKind,
    pub color: usize,
    pub slot: usize,
}

impl CoordIndex {
    pub fn x(color: usize, slot: usize) -> Self {
        CoordIndex { kind: CoordKind::X, color, slot }
    }

    pub fn y(color: usize, slot: usize) -> Self {
        CoordIndex { kind: CoordKind::Y, color, slot }
    }

    /// 1-based display form matching the CLI syntax.
    pub fn label(&self) -> String {
        let kind = match self.kind {
            CoordKind::X => "x",
            CoordKind::Y => "y",
        };
        format!("{kind}:{}:{}", self.color + 1, self.slot + 1)
    }

    /// Parses the 1-based `x:i:k` / `y:i:k` syntax.
    pub fn parse(s: &str) -> Result<Self, PoissonError> {
        let bad = || PoissonError::IndexOutOfRange(s.to_owned());
        let mut parts = s.split(':');
        let kind = match parts.next() {
            Some("x") => CoordKind::X,
            Some("y") => CoordKind::Y,
            _ => return Err(bad()),
        };
        let color: usize = parts.next().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
        let slot: usize = parts.next().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
        if parts.next().is_some() || color == 0 || slot == 0 {
            return Err(bad());
        }
        Ok(CoordIndex { kind, color: color - 1, slot: slot - 1 })
    }
}

/// Linearization of the 2|α| chart coordinates: all x ascending in
/// (color, slot), then all y in the same order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartLayout {
    alpha: Degree,
    offsets: Vec<usize>,
    half: usize,
}

impl ChartLayout {
    pub fn new(alpha: &Degree) -> Self {
        let mut offsets = Vec::with_capacity(alpha.rank());
        let mut acc = 0usize;
        for i in 0..alpha.rank() {
            offsets.push(acc);
            acc += alpha.coeff(i) as usize;
        }
        ChartLayout { alpha: alpha.clone(), offsets, half: acc }
    }

    pub fn alpha(&self) -> &Degree {
        &self.alpha
    }

    /// Total number of coordinates, 2|α|.
    pub fn dim(&self) -> usize {
        2 * self.half
    }

    pub fn position(&self, c: CoordIndex) -> Result<usize, PoissonError> {
        if c.color >= self.alpha.rank() || c.slot >= self.alpha.coeff(c.color) as usize {
            return Err(PoissonError::IndexOutOfRange(c.label()));
        }
        let base = self.offsets[c.color] + c.slot;
        Ok(match c.kind {
            CoordKind::X => base,
            CoordKind::Y => self.half + base,
        })
    }

    pub fn coord(&self, position: usize) -> Result<CoordIndex, PoissonError> {
        if position >= self.dim() {
            return Err(PoissonError::IndexOutOfRange(position.to_string()));
        }
        let (kind, base) = if position < self.half {
            (CoordKind::X, position)
        } else {
            (CoordKind::Y, position - self.half)
        };
        let color = self
            .offsets
            .iter()
            .rposition(|&off| off <= base)
            .expect("offsets start at 0");
        Ok(CoordIndex { kind, color, slot: base - self.offsets[color] })
    }

    pub fn coords(&self) -> impl Iterator<Item = CoordIndex> + '_ {
        (0..self.dim()).map(|p| self.coord(p).expect("in range"))
    }

    /// Flattens nested per-color blocks into the linear coordinate order.
    pub fn flatten<C: Clone>(&self, x: &[Vec<C>], y: &[Vec<C>]) -> Vec<C> {
        let mut out = Vec::with_capacity(self.dim());
        for block in x {
            out.extend(block.iter().cloned());
        }
        for block in y {
            out.extend(block.iter().cloned());
        }
        out
    }
}

/// Bracket of two coordinates over any coefficient field, reading the
/// flattened coordinate vector. Fails with `OutsideChart` if it must divide
/// by a vanishing x-difference.
pub fn bracket_entry<C: Coeff>(
    cartan: &CartanDatum,
    layout: &ChartLayout,
    coords: &[C],
    a: CoordIndex,
    b: CoordIndex,
) -> Result<C, PoissonError> {
    let pa = layout.position(a)?;
    let pb = layout.position(b)?;
    Ok(match (a.kind, b.kind) {
        (CoordKind::X, CoordKind::X) => C::zero(),
        (CoordKind::X, CoordKind::Y) => {
            if a.color == b.color && a.slot == b.slot {
                coords[pb].clone()
            } else {
                C::zero()
            }
        }
        (CoordKind::Y, CoordKind::X) => {
            if a.color == b.color && a.slot == b.slot {
                -coords[pa].clone()
            } else {
                C::zero()
            }
        }
        (CoordKind::Y, CoordKind::Y) => {
            if a.color == b.color {
                C::zero()
            } else {
                let dot = cartan
                    .dot(a.color, b.color)
                    .map_err(|_| PoissonError::IndexOutOfRange(a.label()))?;
                if dot == 0 {
                    return Ok(C::zero());
                }
                let xa = coords[layout.position(CoordIndex::x(a.color, a.slot))?].clone();
                let xb = coords[layout.position(CoordIndex::x(b.color, b.slot))?].clone();
                let delta = xa - xb;
                if delta.is_zero() {
                    return Err(PoissonError::OutsideChart);
                }
                C::from_int(dot) * coords[pa].clone() * coords[pb].clone() / delta
            }
        }
    })
}

/// ∂{ξ_a, ξ_b}/∂ξ_d in closed form; the table's entry grammar is tiny, so
/// every partial is one of a handful of explicit expressions.
pub fn bracket_partial<C: Coeff>(
    cartan: &CartanDatum,
    layout: &ChartLayout,
    coords: &[C],
    a: CoordIndex,
    b: CoordIndex,
    d: CoordIndex,
) -> Result<C, PoissonError> {
    layout.position(d)?;
    Ok(match (a.kind, b.kind) {
        (CoordKind::X, CoordKind::X) => C::zero(),
        (CoordKind::X, CoordKind::Y) => {
            // entry is y_b when a,b match, else the zero function
            if a.color == b.color && a.slot == b.slot && d == CoordIndex::y(b.color, b.slot) {
                C::one()
            } else {
                C::zero()
            }
        }
        (CoordKind::Y, CoordKind::X) => {
            if a.color == b.color && a.slot == b.slot && d == CoordIndex::y(a.color, a.slot) {
                -C::one()
            } else {
                C::zero()
            }
        }
        (CoordKind::Y, CoordKind::Y) => {
            if a.color == b.color {
                return Ok(C::zero());
            }
            let dot = cartan
                .dot(a.color, b.color)
                .map_err(|_| PoissonError::IndexOutOfRange(a.label()))?;
            if dot == 0 {
                return Ok(C::zero());
            }
            let ya = coords[layout.position(a)?].clone();
            let yb = coords[layout.position(b)?].clone();
            let xa = coords[layout.position(CoordIndex::x(a.color, a.slot))?].clone();
            let xb = coords[layout.position(CoordIndex::x(b.color, b.slot))?].clone();
            let delta = xa - xb;
            if delta.is_zero() {
                return Err(PoissonError::OutsideChart);
            }
            let scale = C::from_int(dot);
            if d == a {
                scale * yb / delta
            } else if d == b {
                scale * ya / delta
            } else if d == CoordIndex::x(a.color, a.slot) {
                -(scale * ya * yb) / (delta.clone() * delta)
            } else if d == CoordIndex::x(b.color, b.slot) {
                scale * ya * yb / (delta.clone() * delta)
            } else {
                C::zero()
            }
        }
    })
}

/// The 2|α|×2|α| matrix of the bivector at a chart point.
#[derive(Debug, Clone, PartialEq)]
pub struct BracketMatrix {
    entries: Vec<Vec<Rat>>,
}

/// The 2|α|×2|α| matrix of the symplectic form at a chart point.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMatrix {
    entries: Vec<Vec<Rat>>,
}

fn flat_coords(pt: &ChartPoint) -> (ChartLayout, Vec<Rat>) {
    let layout = ChartLayout::new(pt.alpha());
    let mut x = Vec::new();
    let mut y = Vec::new();
    for i in 0..pt.cartan().rank() {
        x.push(pt.x_block(i).to_vec());
        y.push(pt.y_block(i).to_vec());
    }
    let coords = layout.flatten(&x, &y);
    (layout, coords)
}

/// {ξ_a, ξ_b} at an exact chart point. Chart invariants guarantee every
/// divisor is nonzero, so only bad indices can fail.
pub fn bracket_coords(pt: &ChartPoint, a: CoordIndex, b: CoordIndex) -> Result<Rat, PoissonError> {
    let (layout, coords) = flat_coords(pt);
    bracket_entry(pt.cartan(), &layout, &coords, a, b)
}

/// The full bivector matrix over any coefficient field.
pub fn bivector_entries<C: Coeff>(
    cartan: &CartanDatum,
    layout: &ChartLayout,
    coords: &[C],
) -> Result<Vec<Vec<C>>, PoissonError> {
    let dim = layout.dim();
    let all: Vec<CoordIndex> = layout.coords().collect();
    let mut rows = Vec::with_capacity(dim);
    for &a in &all {
        let mut row = Vec::with_capacity(dim);
        for &b in &all {
            row.push(bracket_entry(cartan, layout, coords, a, b)?);
        }
        rows.push(row);
    }
    Ok(rows)
}

pub fn bivector_matrix(pt: &ChartPoint) -> BracketMatrix {
    let (layout, coords) = flat_coords(pt);
    let entries = bivector_entries(pt.cartan(), &layout, &coords).expect("chart invariant");
    BracketMatrix { entries }
}

pub fn symplectic_matrix(pt: &ChartPoint) -> SymplecticMatrix {
    let (layout, coords) = flat_coords(pt);
    let dim = layout.dim();
    let all: Vec<CoordIndex> = layout.coords().collect();
    let mut entries = vec![vec![Rat::zero(); dim]; dim];
    for (r, &a) in all.iter().enumerate() {
        for (c, &b) in all.iter().enumerate() {
            entries[r][c] = match (a.kind, b.kind) {
                (CoordKind::Y, CoordKind::Y) => Rat::zero(),
                (CoordKind::X, CoordKind::Y) => {
                    if a.color == b.color && a.slot == b.slot {
                        let y = &coords[layout.position(CoordIndex::y(a.color, a.slot)).unwrap()];
                        -(Rat::one() / y.clone())
                    } else {
                        Rat::zero()
                    }
                }
                (CoordKind::Y, CoordKind::X) => {
                    if a.color == b.color && a.slot == b.slot {
                        let y = &coords[layout.position(CoordIndex::y(a.color, a.slot)).unwrap()];
                        Rat::one() / y.clone()
                    } else {
                        Rat::zero()
                    }
                }
                (CoordKind::X, CoordKind::X) => {
                    if a.color == b.color {
                        Rat::zero()
                    } else {
                        let dot = pt.cartan().dot(a.color, b.color).expect("valid colors");
                        if dot == 0 {
                            Rat::zero()
                        } else {
                            let xa = pt.x(a.color, a.slot);
                            let xb = pt.x(b.color, b.slot);
                            Rat::from_int(dot) / (xa.clone() - xb.clone())
                        }
                    }
                }
            };
        }
    }
    SymplecticMatrix { entries }
}

impl BracketMatrix {
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<Rat>] {
        &self.entries
    }

    pub fn entry(&self, r: usize, c: usize) -> &Rat {
        &self.entries[r][c]
    }

    pub fn is_antisymmetric(&self) -> bool {
        is_antisymmetric(&self.entries)
    }

    /// Exact rank by Gaussian elimination over the rationals.
    pub fn rank(&self) -> usize {
        matrix_rank(self.entries.clone())
    }
}

impl SymplecticMatrix {
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<Rat>] {
        &self.entries
    }

    pub fn entry(&self, r: usize, c: usize) -> &Rat {
        &self.entries[r][c]
    }

    pub fn is_antisymmetric(&self) -> bool {
        is_antisymmetric(&self.entries)
    }

    /// Exact product Ω·P; equals the identity on the chart.
    pub fn compose_with(&self, p: &BracketMatrix) -> Vec<Vec<Rat>> {
        mat_mul(&self.entries, &p.entries)
    }
}

fn is_antisymmetric(m: &[Vec<Rat>]) -> bool {
    let n = m.len();
    (0..n).all(|r| (0..n).all(|c| m[r][c] == -m[c][r].clone()))
}

fn mat_mul(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let n = a.len();
    let mut out = vec![vec![Rat::zero(); n]; n];
    for r in 0..n {
        for c in 0..n {
            let mut acc = Rat::zero();
            for k in 0..n {
                if !a[r][k].is_zero() && !b[k][c].is_zero() {
                    acc += a[r][k].clone() * b[k][c].clone();
                }
            }
            out[r][c] = acc;
        }
    }
    out
}

pub fn identity_matrix(n: usize) -> Vec<Vec<Rat>> {
    let mut m = vec![vec![Rat::zero(); n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Rat::one();
    }
    m
}

fn matrix_rank(mut m: Vec<Vec<Rat>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        let Some(pivot) = (row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, pivot);
        let lead = m[row][col].clone();
        for r in row + 1..rows {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone() / lead.clone();
            for c in col..cols {
                let sub = factor.clone() * m[row][c].clone();
                m[r][c] -= sub;
            }
        }
        row += 1;
        rank += 1;
        if row == rows {
            break;
        }
    }
    rank
}

/// Exact rank of the bivector at a point; equals 2|α| everywhere on the chart.
pub fn rank(pt: &ChartPoint) -> usize {
    bivector_matrix(pt).rank()
}

/// {{ξ_a,ξ_b},ξ_c} + {{ξ_b,ξ_c},ξ_a} + {{ξ_c,ξ_a},ξ_b} via the closed-form
/// partials of the bracket table; identically zero on the chart.
pub fn jacobiator(
    pt: &ChartPoint,
    a: CoordIndex,
    b: CoordIndex,
    c: CoordIndex,
) -> Result<Rat, PoissonError> {
    let (layout, coords) = flat_coords(pt);
    jacobiator_in(pt.cartan(), &layout, &coords, a, b, c)
}

pub fn jacobiator_in<C: Coeff>(
    cartan: &CartanDatum,
    layout: &ChartLayout,
    coords: &[C],
    a: CoordIndex,
    b: CoordIndex,
    c: CoordIndex,
) -> Result<C, PoissonError> {
    let mut acc = C::zero();
    for d in layout.coords() {
        for &(u, v, w) in &[(a, b, c), (b, c, a), (c, a, b)] {
            let partial = bracket_partial(cartan, layout, coords, u, v, d)?;
            if partial.is_zero() {
                continue;
            }
            let outer = bracket_entry(cartan, layout, coords, d, w)?;
            acc = acc + partial * outer;
        }
    }
    Ok(acc)
}

/// Leibniz extension: {f, g} = Σ ∂f/∂ξ_a · P^{ab} · ∂g/∂ξ_b at the point.
pub fn bracket_functions(
    pt: &ChartPoint,
    f: &MPoly<Rat>,
    g: &MPoly<Rat>,
) -> Result<Rat, PoissonError> {
    let (layout, coords) = flat_coords(pt);
    let dim = layout.dim();
    if f.nvars() != dim || g.nvars() != dim {
        return Err(PoissonError::IndexOutOfRange(format!(
            "function in {} variables on a {dim}-dimensional chart",
            f.nvars()
        )));
    }
    let df: Vec<Rat> = (0..dim).map(|k| f.partial(k).eval(&coords)).collect();
    let dg: Vec<Rat> = (0..dim).map(|k| g.partial(k).eval(&coords)).collect();
    let all: Vec<CoordIndex> = layout.coords().collect();
    let mut acc = Rat::zero();
    for (pa, &ia) in all.iter().enumerate() {
        if df[pa].is_zero() {
            continue;
        }
        for (pb, &ib) in all.iter().enumerate() {
            if dg[pb].is_zero() {
                continue;
            }
            let p_ab = bracket_entry(pt.cartan(), &layout, &coords, ia, ib)?;
            if !p_ab.is_zero() {
                acc += df[pa].clone() * p_ab * dg[pb].clone();
            }
        }
    }
    Ok(acc)
}

pub fn matrix_to_json(entries: &[Vec<Rat>]) -> serde_json::Value {
    serde_json::Value::Array(
        entries
            .iter()
            .map(|row| {
                serde_json::Value::Array(
                    row.iter()
                        .map(|v| serde_json::Value::String(crate::rat::format_rat(v)))
                        .collect(),
                )
            })
            .collect(),
    )
}
