//! Symplectic-leaf combinatorics for the parabolic spaces: antidominance,
//! special lifts of a parabolic degree, enumeration with an exact search
//! box, and leaf dimensions.

use crate::cartan::{CartanDatum, CartanError, Degree};
use crate::rat::Rat;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LeavesError {
    #[error("support violation: coefficient {coeff} at color {color} outside J")]
    SupportViolation { color: usize, coeff: u32 },
    #[error("J contains color {0}, datum has rank {1}")]
    BadSubset(usize, usize),
    #[error(transparent)]
    Cartan(#[from] CartanError),
}

/// Which reading of the lift condition to apply.
///
/// `Literal` requires the J-part of α - β to be antidominant, which over a
/// finite-type datum forces α = β. `Lemma` requires ⟨α, j'⟩ ≤ 0 for all
/// j ∈ J, the condition the immersion argument actually uses; this is the
/// reading under which the lift set is generally nontrivial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LiftConvention {
    Literal,
    Lemma,
}

/// A parabolic datum: the subset J and a degree β supported off J.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParabolicDatum {
    cartan: CartanDatum,
    in_j: Vec<bool>,
    beta: Degree,
}

impl ParabolicDatum {
    /// `j` lists the colors of J, 0-based.
    pub fn new(cartan: CartanDatum, j: &[usize], beta: Degree) -> Result<Self, LeavesError> {
        let rank = cartan.rank();
        let mut in_j = vec![false; rank];
        for &c in j {
            if c >= rank {
                return Err(LeavesError::BadSubset(c, rank));
            }
            in_j[c] = true;
        }
        if beta.rank() != rank {
            return Err(LeavesError::BadSubset(beta.rank(), rank));
        }
        for (color, &flag) in in_j.iter().enumerate() {
            if flag && beta.coeff(color) != 0 {
                return Err(LeavesError::SupportViolation { color, coeff: beta.coeff(color) });
            }
        }
        Ok(ParabolicDatum { cartan, in_j, beta })
    }

    pub fn cartan(&self) -> &CartanDatum {
        &self.cartan
    }

    pub fn beta(&self) -> &Degree {
        &self.beta
    }

    pub fn j_colors(&self) -> Vec<usize> {
        self.in_j
            .iter()
            .enumerate()
            .filter_map(|(c, &f)| f.then_some(c))
            .collect()
    }

    pub fn contains(&self, color: usize) -> bool {
        self.in_j.get(color).copied().unwrap_or(false)
    }
}

/// γ supported on J is antidominant when ⟨γ, j'⟩ ≤ 0 for every j ∈ J.
pub fn is_antidominant(
    cartan: &CartanDatum,
    gamma: &Degree,
    j: &[usize],
) -> Result<bool, LeavesError> {
    let mut in_j = vec![false; cartan.rank()];
    for &c in j {
        if c >= cartan.rank() {
            return Err(LeavesError::BadSubset(c, cartan.rank()));
        }
        in_j[c] = true;
    }
    for color in 0..cartan.rank() {
        if !in_j[color] && gamma.coeff(color) != 0 {
            return Err(LeavesError::SupportViolation { color, coeff: gamma.coeff(color) });
        }
    }
    for &jc in j {
        if cartan.degree_root_pairing(gamma, jc)?.is_positive() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Does α lift β under the chosen convention? α must agree with β off J.
pub fn is_special_lift(alpha: &Degree, pd: &ParabolicDatum, convention: LiftConvention) -> bool {
    if alpha.rank() != pd.cartan.rank() {
        return false;
    }
    for color in 0..pd.cartan.rank() {
        if !pd.contains(color) && alpha.coeff(color) != pd.beta.coeff(color) {
            return false;
        }
    }
    let j = pd.j_colors();
    match convention {
        LiftConvention::Literal => {
            let Some(gamma) = alpha.checked_sub(&pd.beta) else {
                return false;
            };
            is_antidominant(&pd.cartan, &gamma, &j).unwrap_or(false)
        }
        LiftConvention::Lemma => j.iter().all(|&jc| {
            !pd.cartan
                .degree_root_pairing(alpha, jc)
                .expect("valid color")
                .is_positive()
        }),
    }
}

/// The finite set of special lifts, ordered lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialLiftSet {
    pub convention: LiftConvention,
    pub lifts: Vec<Degree>,
}

impl SpecialLiftSet {
    /// 2|α| for each lift.
    pub fn dimensions(&self) -> Vec<usize> {
        self.lifts.iter().map(leaf_dimension).collect()
    }
}

/// Componentwise bound on the J-part: γ ≤ A_J⁻¹ b, where
/// b_j = -Σ_{i∉J} β_i ⟨i, j'⟩ ≥ 0 and A_J is the Cartan matrix of the
/// J-subsystem (whose inverse is entrywise nonnegative in finite type).
fn lift_box(pd: &ParabolicDatum) -> Result<Vec<u32>, LeavesError> {
    let j = pd.j_colors();
    if j.is_empty() {
        return Ok(Vec::new());
    }
    let m = j.len();
    // A_J[r][c] = <e_{j_c}, j_r'> over the J-colors only
    let mut a = vec![vec![Rat::zero(); m]; m];
    for (r, &jr) in j.iter().enumerate() {
        for (c, &jc) in j.iter().enumerate() {
            a[r][c] = Rat::from(BigInt::from(pd.cartan.cartan_entry(jr, jc)?));
        }
    }
    let mut b = vec![Rat::zero(); m];
    for (r, &jr) in j.iter().enumerate() {
        let mut acc = BigInt::zero();
        for color in 0..pd.cartan.rank() {
            if !pd.contains(color) {
                acc -= BigInt::from(pd.beta.coeff(color)) * BigInt::from(pd.cartan.cartan_entry(jr, color)?);
            }
        }
        debug_assert!(!acc.is_negative());
        b[r] = Rat::from(acc);
    }
    let bound = solve_exact(a, b);
    Ok(bound
        .into_iter()
        .map(|v| {
            if v.is_negative() {
                0
            } else {
                v.floor().to_integer().to_u32().unwrap_or(u32::MAX)
            }
        })
        .collect())
}

/// Solves A x = b by exact Gaussian elimination; A is invertible for
/// finite-type subsystems.
fn solve_exact(mut a: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> Vec<Rat> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .expect("finite-type Cartan matrix is invertible");
        a.swap(col, pivot);
        b.swap(col, pivot);
        let lead = a[col][col].clone();
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone() / lead.clone();
            for c in col..n {
                let sub = factor.clone() * a[col][c].clone();
                a[r][c] -= sub;
            }
            let sub = factor * b[col].clone();
            b[r] -= sub;
        }
    }
    (0..n).map(|r| b[r].clone() / a[r][r].clone()).collect()
}

fn scan_box(pd: &ParabolicDatum, convention: LiftConvention, bounds: &[u32]) -> Vec<Degree> {
    let j = pd.j_colors();
    let mut lifts = Vec::new();
    let mut gamma = vec![0u32; j.len()];
    loop {
        let mut coeffs = pd.beta.coeffs().to_vec();
        for (pos, &color) in j.iter().enumerate() {
            coeffs[color] = gamma[pos];
        }
        let alpha = Degree::new(coeffs);
        if is_special_lift(&alpha, pd, convention) {
            lifts.push(alpha);
        }
        // next point of the box, odometer-style
        let mut k = j.len();
        loop {
            if k == 0 {
                lifts.sort();
                return lifts;
            }
            k -= 1;
            if gamma[k] < bounds[k] {
                gamma[k] += 1;
                for slot in gamma.iter_mut().skip(k + 1) {
                    *slot = 0;
                }
                break;
            }
        }
    }
}

/// All special lifts of β, found by scanning the exact search box.
pub fn enumerate_special_lifts(
    pd: &ParabolicDatum,
    convention: LiftConvention,
) -> Result<SpecialLiftSet, LeavesError> {
    let bounds = lift_box(pd)?;
    let lifts = scan_box(pd, convention, &bounds);
    Ok(SpecialLiftSet { convention, lifts })
}

/// Brute-force oracle: scans a strictly larger box (the exact bound plus
/// `margin` in every J-direction).
pub fn brute_force_special_lifts(
    pd: &ParabolicDatum,
    convention: LiftConvention,
    margin: u32,
) -> Result<Vec<Degree>, LeavesError> {
    let bounds: Vec<u32> = lift_box(pd)?.into_iter().map(|b| b + margin).collect();
    Ok(scan_box(pd, convention, &bounds))
}

/// 2|α|: the dimension of the leaf indexed by α.
pub fn leaf_dimension(alpha: &Degree) -> usize {
    2 * alpha.total()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2_case() -> ParabolicDatum {
        ParabolicDatum::new(
            CartanDatum::from_name("A2").unwrap(),
            &[1],
            Degree::new(vec![2, 0]),
        )
        .unwrap()
    }

    #[test]
    fn antidominance_examples() {
        let a2 = CartanDatum::from_name("A2").unwrap();
        assert!(is_antidominant(&a2, &Degree::zero(2), &[1]).unwrap());
        // <e_2, 2'> = 2 > 0
        assert!(!is_antidominant(&a2, &Degree::new(vec![0, 1]), &[1]).unwrap());
        // positive definiteness: no nonzero nonnegative vector is antidominant on all of I
        for gamma in [[1u32, 0], [0, 1], [1, 1], [2, 1], [3, 3]] {
            assert!(!is_antidominant(&a2, &Degree::new(gamma.to_vec()), &[0, 1]).unwrap());
        }
        // support violation
        assert!(matches!(
            is_antidominant(&a2, &Degree::new(vec![1, 1]), &[1]),
            Err(LeavesError::SupportViolation { .. })
        ));
    }

    #[test]
    fn special_lift_examples() {
        let pd = a2_case();
        let beta = Degree::new(vec![2, 0]);
        assert!(is_special_lift(&beta, &pd, LiftConvention::Literal));
        assert!(is_special_lift(&beta, &pd, LiftConvention::Lemma));
        // α = (2,1): <α,2'> = -2 + 2 = 0 ≤ 0, so a lift under Lemma only
        let alpha = Degree::new(vec![2, 1]);
        assert!(is_special_lift(&alpha, &pd, LiftConvention::Lemma));
        assert!(!is_special_lift(&alpha, &pd, LiftConvention::Literal));
        // α = (2,2): <α,2'> = 2 > 0, no lift under either reading
        let alpha = Degree::new(vec![2, 2]);
        assert!(!is_special_lift(&alpha, &pd, LiftConvention::Lemma));
        assert!(!is_special_lift(&alpha, &pd, LiftConvention::Literal));
        // off-J mismatch
        assert!(!is_special_lift(&Degree::new(vec![1, 0]), &pd, LiftConvention::Lemma));
    }

    #[test]
    fn enumeration_examples() {
        let pd = a2_case();
        let lemma = enumerate_special_lifts(&pd, LiftConvention::Lemma).unwrap();
        assert_eq!(lemma.lifts, vec![Degree::new(vec![2, 0]), Degree::new(vec![2, 1])]);
        assert_eq!(lemma.dimensions(), vec![4, 6]);
        let literal = enumerate_special_lifts(&pd, LiftConvention::Literal).unwrap();
        assert_eq!(literal.lifts, vec![Degree::new(vec![2, 0])]);
    }

    #[test]
    fn empty_j_gives_beta_back() {
        let pd = ParabolicDatum::new(
            CartanDatum::from_name("B2").unwrap(),
            &[],
            Degree::new(vec![1, 2]),
        )
        .unwrap();
        for convention in [LiftConvention::Lemma, LiftConvention::Literal] {
            let set = enumerate_special_lifts(&pd, convention).unwrap();
            assert_eq!(set.lifts, vec![Degree::new(vec![1, 2])]);
        }
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for name in ["A2", "B2", "G2"] {
            let cartan = CartanDatum::from_name(name).unwrap();
            for j_mask in 0u32..4 {
                let j: Vec<usize> = (0..2).filter(|&c| j_mask & (1 << c) != 0).collect();
                for b0 in 0..3u32 {
                    for b1 in 0..3u32 {
                        let mut beta = vec![b0, b1];
                        for &c in &j {
                            beta[c] = 0;
                        }
                        let pd =
                            ParabolicDatum::new(cartan.clone(), &j, Degree::new(beta)).unwrap();
                        for convention in [LiftConvention::Lemma, LiftConvention::Literal] {
                            let fast = enumerate_special_lifts(&pd, convention).unwrap();
                            let slow = brute_force_special_lifts(&pd, convention, 3).unwrap();
                            assert_eq!(fast.lifts, slow, "{name} J={j:?} conv={convention:?}");
                            assert!(fast.lifts.contains(pd.beta()), "beta missing");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn literal_collapses_to_beta() {
        // regression trap for the convention discrepancy: over a finite-type
        // datum the literal reading admits only γ = 0
        for name in ["A2", "A3", "B2", "G2"] {
            let cartan = CartanDatum::from_name(name).unwrap();
            let rank = cartan.rank();
            let j: Vec<usize> = (1..rank).collect();
            let mut beta = vec![0u32; rank];
            beta[0] = 2;
            let pd = ParabolicDatum::new(cartan, &j, Degree::new(beta.clone())).unwrap();
            let set = enumerate_special_lifts(&pd, LiftConvention::Literal).unwrap();
            assert_eq!(set.lifts, vec![Degree::new(beta)], "{name}");
        }
    }

    #[test]
    fn lemma_lift_set_monotone_in_beta() {
        // enlarging β off J never shrinks the lift set (as a set of γ-parts)
        let cartan = CartanDatum::from_name("A3").unwrap();
        let j = vec![2usize];
        let small = ParabolicDatum::new(cartan.clone(), &j, Degree::new(vec![1, 1, 0])).unwrap();
        let large = ParabolicDatum::new(cartan, &j, Degree::new(vec![2, 2, 0])).unwrap();
        let gamma_parts = |set: &SpecialLiftSet| -> Vec<u32> {
            set.lifts.iter().map(|a| a.coeff(2)).collect()
        };
        let small_set = enumerate_special_lifts(&small, LiftConvention::Lemma).unwrap();
        let large_set = enumerate_special_lifts(&large, LiftConvention::Lemma).unwrap();
        for g in gamma_parts(&small_set) {
            assert!(gamma_parts(&large_set).contains(&g));
        }
    }

    #[test]
    fn leaf_dimension_examples() {
        assert_eq!(leaf_dimension(&Degree::new(vec![2, 1])), 6);
        assert_eq!(leaf_dimension(&Degree::zero(3)), 0);
    }

    #[test]
    fn parabolic_datum_validation() {
        let a2 = CartanDatum::from_name("A2").unwrap();
        assert!(matches!(
            ParabolicDatum::new(a2.clone(), &[1], Degree::new(vec![1, 1])),
            Err(LeavesError::SupportViolation { .. })
        ));
        assert!(matches!(
            ParabolicDatum::new(a2, &[5], Degree::new(vec![1, 0])),
            Err(LeavesError::BadSubset(5, 2))
        ));
    }
}
