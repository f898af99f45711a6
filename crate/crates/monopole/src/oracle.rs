//! Independent recomputation of the brackets from polynomial data through
//! the divided-difference section T with (z-w)·T = p(z)q(w) - q(z)p(w),
//! plus the rank-1 verification of the tensor-square scalars.
//!
//! The oracle consumes only the (p_i, q_i) polynomials and the root list; it
//! never reads stored y-values, so agreement with the coordinate bracket
//! table is a genuine cross-check. The two dual-pairing sign factors (one
//! from the antisymmetric combination, one from the lowering-operator
//! pairing, both -1) cancel, so no global sign adjustment is needed to land
//! on the convention {x, y} = +y.

use crate::chart::PolyChart;
use crate::poly::BiPoly;
use crate::rat::{rat, rat_int, Rat};
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
    #[error("coincident evaluation points x_{0}^{1} = x_{2}^{3}")]
    CoincidentEvaluation(usize, usize, usize, usize),
}

fn root(pc: &PolyChart, roots: &[Vec<Rat>], i: usize, k: usize) -> Result<Rat, OracleError> {
    let r = roots
        .get(i)
        .and_then(|b| b.get(k))
        .ok_or_else(|| OracleError::InvariantViolation(format!("no root at color {i}, slot {k}")))?;
    if !pc.p(i).eval(r).is_zero() {
        return Err(OracleError::InvariantViolation(format!(
            "supplied value is not a root of p_{i}"
        )));
    }
    Ok(r.clone())
}

/// T_i(x_i^k, x_i^k) / p_i'(x_i^k): recovers the bracket {x_i^k, y_i^k},
/// which must come out as y_i^k = q_i(x_i^k).
pub fn oracle_xy(pc: &PolyChart, roots: &[Vec<Rat>], i: usize, k: usize) -> Result<Rat, OracleError> {
    let x = root(pc, roots, i, k)?;
    let t = BiPoly::antisym_quotient(pc.p(i), pc.q(i))
        .map_err(|e| OracleError::InvariantViolation(e.to_string()))?;
    let denom = pc.p(i).derivative().eval(&x);
    if denom.is_zero() {
        return Err(OracleError::InvariantViolation(format!(
            "p_{i} has a multiple root at slot {k}"
        )));
    }
    Ok(t.bi_eval(&x, &x) / denom)
}

/// T_i evaluated at two distinct roots of p_i: both numerator terms carry a
/// factor of p_i at a root, so the value is 0, matching {y_i^k, y_i^l} = 0.
pub fn oracle_yy_same(
    pc: &PolyChart,
    roots: &[Vec<Rat>],
    i: usize,
    k: usize,
    l: usize,
) -> Result<Rat, OracleError> {
    if k == l {
        return Err(OracleError::InvariantViolation("slots k and l must differ".into()));
    }
    let xk = root(pc, roots, i, k)?;
    let xl = root(pc, roots, i, l)?;
    let t = BiPoly::antisym_quotient(pc.p(i), pc.q(i))
        .map_err(|e| OracleError::InvariantViolation(e.to_string()))?;
    Ok(t.bi_eval(&xk, &xl))
}

/// Mixed-color divided difference at (x_i^k, x_j^l): the terms carrying
/// p_i(z) or p_j(w) vanish at the evaluation point, and the surviving
/// middle term has coefficient i·j, giving
/// i·j · q_i(x_i^k) · q_j(x_j^l) / (x_i^k - x_j^l).
pub fn oracle_yy_mixed(
    pc: &PolyChart,
    roots: &[Vec<Rat>],
    a: (usize, usize),
    b: (usize, usize),
) -> Result<Rat, OracleError> {
    let (i, k) = a;
    let (j, l) = b;
    if i == j {
        return Err(OracleError::InvariantViolation("colors must differ".into()));
    }
    let dot = pc
        .cartan()
        .dot(i, j)
        .map_err(|e| OracleError::InvariantViolation(e.to_string()))?;
    let xi = root(pc, roots, i, k)?;
    let xj = root(pc, roots, j, l)?;
    if xi == xj {
        return Err(OracleError::CoincidentEvaluation(i, k, j, l));
    }
    if dot == 0 {
        return Ok(Rat::zero());
    }
    let numer = rat_int(dot) * pc.q(i).eval(&xi) * pc.q(j).eval(&xj);
    Ok(numer / (xi - xj))
}

/// The tensor-square scalar table at rank 1, together with the projection
/// denominator it cancels against.
#[derive(Debug, Clone, PartialEq)]
pub struct CasimirTable {
    /// Scalar on the top (Cartan product) summand.
    pub top_scalar: Rat,
    /// Scalar on the lower summand of the same-color tensor square.
    pub same_color_scalar: Rat,
    /// Projection denominator for the same-color case.
    pub same_color_denominator: Rat,
}

impl CasimirTable {
    /// scalar / denominator, the factor actually consumed downstream: -1.
    pub fn same_color_ratio(&self) -> Rat {
        self.same_color_scalar.clone() / self.same_color_denominator.clone()
    }
}

/// Scalar on the lower mixed-color summand: i·j - 2.
pub fn mixed_color_scalar(dot: i64) -> i64 {
    dot - 2
}

/// Projection denominator for the mixed-color case, the same i·j - 2;
/// the ratio consumed downstream is therefore 1.
pub fn mixed_color_denominator(dot: i64) -> i64 {
    dot - 2
}

fn kron(a: &[[Rat; 2]; 2], b: &[[Rat; 2]; 2]) -> Vec<Vec<Rat>> {
    let mut m = vec![vec![Rat::zero(); 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    m[2 * i + k][2 * j + l] = a[i][j].clone() * b[k][l].clone();
                }
            }
        }
    }
    m
}

fn apply(m: &[Vec<Rat>], v: &[Rat; 4]) -> [Rat; 4] {
    std::array::from_fn(|r| {
        (0..4).fold(Rat::zero(), |acc, c| acc + m[r][c].clone() * v[c].clone())
    })
}

/// Scalar of `m` acting on the span of `v`; None if `m·v` is not parallel.
fn scalar_on(m: &[Vec<Rat>], v: &[Rat; 4]) -> Option<Rat> {
    let image = apply(m, v);
    let pivot = v.iter().position(|c| !c.is_zero())?;
    let scalar = image[pivot].clone() / v[pivot].clone();
    for c in 0..4 {
        if image[c] != scalar.clone() * v[c].clone() {
            return None;
        }
    }
    Some(scalar)
}

/// Builds the rank-1 two-dimensional representation, forms the dual-basis
/// operator Σ ξ^k ⊗ ξ_k with dual bases taken against the trace form,
/// subtracts (ω,ω) = 1/2, and reads off the scalars on the two irreducible
/// summands of the tensor square: 0 on the symmetric part, -2 on the
/// antisymmetric line.
pub fn casimir_scalars_rank1() -> CasimirTable {
    let z = Rat::zero;
    let o = Rat::one;
    let e: [[Rat; 2]; 2] = [[z(), o()], [z(), z()]];
    let f: [[Rat; 2]; 2] = [[z(), z()], [o(), z()]];
    let h: [[Rat; 2]; 2] = [[o(), z()], [z(), -o()]];
    // trace form: <E,F> = 1, <H,H> = 2, so the dual basis of (E,F,H) is (F,E,H/2)
    let mut op = kron(&e, &f);
    let ef = kron(&f, &e);
    let hh = kron(&h, &h);
    for r in 0..4 {
        for c in 0..4 {
            op[r][c] += ef[r][c].clone() + rat(1, 2) * hh[r][c].clone();
        }
    }
    // subtract (ω,ω) = 1/2 on the diagonal
    for (r, row) in op.iter_mut().enumerate() {
        row[r] -= rat(1, 2);
    }
    // symmetric summand: v⊗v, v⊗Fv + Fv⊗v, Fv⊗Fv; antisymmetric line: v⊗Fv - Fv⊗v
    let sym: [[Rat; 4]; 3] = [
        [o(), z(), z(), z()],
        [z(), o(), o(), z()],
        [z(), z(), z(), o()],
    ];
    let top_scalar = sym
        .iter()
        .map(|v| scalar_on(&op, v).expect("symmetric summand is invariant"))
        .reduce(|a, b| {
            assert_eq!(a, b, "scalar action on the symmetric summand");
            a
        })
        .unwrap();
    let anti: [Rat; 4] = [z(), o(), -o(), z()];
    let same_color_scalar = scalar_on(&op, &anti).expect("antisymmetric line is invariant");
    CasimirTable {
        top_scalar,
        same_color_scalar,
        same_color_denominator: rat_int(2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{CartanDatum, Degree};
    use crate::chart::ChartPoint;
    use crate::poisson::{bracket_coords, CoordIndex};
    use crate::rat::rat;

    fn a1_chart(xs: &[i64], ys: &[i64]) -> (ChartPoint, PolyChart, Vec<Vec<Rat>>) {
        let pt = ChartPoint::new(
            CartanDatum::from_name("A1").unwrap(),
            Degree::new(vec![xs.len() as u32]),
            vec![xs.iter().map(|&v| rat_int(v)).collect()],
            vec![ys.iter().map(|&v| rat_int(v)).collect()],
        )
        .unwrap();
        let pc = pt.to_polys();
        let roots = vec![pt.x_block(0).to_vec()];
        (pt, pc, roots)
    }

    #[test]
    fn oracle_xy_degree_two() {
        // p = z^2 - z, q = z + 1, so T = zw + z + w - 1
        let (_, pc, roots) = a1_chart(&[0, 1], &[1, 2]);
        // T(0,0)/p'(0) = (-1)/(-1) = 1
        assert_eq!(oracle_xy(&pc, &roots, 0, 0).unwrap(), rat_int(1));
        // T(1,1)/p'(1) = 2/1 = 2
        assert_eq!(oracle_xy(&pc, &roots, 0, 1).unwrap(), rat_int(2));
    }

    #[test]
    fn oracle_xy_degree_one() {
        let (_, pc, roots) = a1_chart(&[7], &[9]);
        assert_eq!(oracle_xy(&pc, &roots, 0, 0).unwrap(), rat_int(9));
    }

    #[test]
    fn oracle_yy_same_vanishes() {
        let (_, pc, roots) = a1_chart(&[0, 1], &[1, 2]);
        assert_eq!(oracle_yy_same(&pc, &roots, 0, 0, 1).unwrap(), rat_int(0));
        // p = (z-1)(z-2), q = z
        let (_, pc, roots) = a1_chart(&[1, 2], &[1, 2]);
        assert_eq!(oracle_yy_same(&pc, &roots, 0, 0, 1).unwrap(), rat_int(0));
        assert_eq!(oracle_yy_same(&pc, &roots, 0, 1, 0).unwrap(), rat_int(0));
    }

    fn a2_running_example() -> (ChartPoint, PolyChart, Vec<Vec<Rat>>) {
        let pt = ChartPoint::new(
            CartanDatum::from_name("A2").unwrap(),
            Degree::new(vec![1, 1]),
            vec![vec![rat_int(0)], vec![rat_int(2)]],
            vec![vec![rat_int(1)], vec![rat_int(3)]],
        )
        .unwrap();
        let pc = pt.to_polys();
        let roots = vec![pt.x_block(0).to_vec(), pt.x_block(1).to_vec()];
        (pt, pc, roots)
    }

    #[test]
    fn oracle_yy_mixed_matches_table() {
        let (pt, pc, roots) = a2_running_example();
        let v = oracle_yy_mixed(&pc, &roots, (0, 0), (1, 0)).unwrap();
        assert_eq!(v, rat(3, 2));
        assert_eq!(v, bracket_coords(&pt, CoordIndex::y(0, 0), CoordIndex::y(1, 0)).unwrap());
        // swapping the arguments negates the divided difference
        let w = oracle_yy_mixed(&pc, &roots, (1, 0), (0, 0)).unwrap();
        assert_eq!(w, -v);
    }

    #[test]
    fn oracle_yy_mixed_orthogonal_colors() {
        // A3 colors 1 and 3 have i·j = 0
        let pt = ChartPoint::new(
            CartanDatum::from_name("A3").unwrap(),
            Degree::new(vec![1, 0, 1]),
            vec![vec![rat_int(0)], vec![], vec![rat_int(5)]],
            vec![vec![rat_int(2)], vec![], vec![rat_int(7)]],
        )
        .unwrap();
        let pc = pt.to_polys();
        let roots = vec![pt.x_block(0).to_vec(), vec![], pt.x_block(2).to_vec()];
        assert_eq!(oracle_yy_mixed(&pc, &roots, (0, 0), (2, 0)).unwrap(), rat_int(0));
    }

    #[test]
    fn oracle_rejects_bad_input() {
        let (_, pc, roots) = a1_chart(&[0, 1], &[1, 2]);
        assert!(matches!(
            oracle_yy_same(&pc, &roots, 0, 1, 1),
            Err(OracleError::InvariantViolation(_))
        ));
        let bad_roots = vec![vec![rat_int(5), rat_int(6)]];
        assert!(matches!(
            oracle_xy(&pc, &bad_roots, 0, 0),
            Err(OracleError::InvariantViolation(_))
        ));
    }

    #[test]
    fn casimir_scalars() {
        let table = casimir_scalars_rank1();
        assert_eq!(table.top_scalar, rat_int(0));
        assert_eq!(table.same_color_scalar, rat_int(-2));
        assert_eq!(table.same_color_ratio(), rat_int(-1));
        assert_eq!(mixed_color_scalar(-1), -3);
        assert_eq!(mixed_color_denominator(-1), -3);
    }
}
