//! Cartan data: the index set with its symmetric bilinear form, Cartan
//! integers, degree vectors, and the coweight/root pairings everything
//! downstream consumes.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CartanError {
    #[error("unknown type name {0:?}")]
    UnknownName(String),
    #[error("malformed matrix: {0}")]
    MalformedMatrix(String),
    #[error("not finite type: leading principal minor {index} is non-positive")]
    NotFiniteType { index: usize },
    #[error("index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
}

/// A finite-type Cartan datum: the index set `0..rank` together with the
/// symmetric form `i·j` and the derived Cartan integers.
///
/// `cartan[i][j] = 2(i·j)/(j·j)`, so row `i` lists the pairings of every
/// simple coweight against the simple root `i'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartanDatum {
    name: Option<String>,
    dot: Vec<Vec<i64>>,
    d: Vec<i64>,
    cartan: Vec<Vec<i64>>,
}

impl CartanDatum {
    /// Builds a named datum: `A1..`, `B2..`, `C2..`, `D4..`, `E6..E8`, `F4`, `G2`.
    pub fn from_name(name: &str) -> Result<Self, CartanError> {
        let unknown = || CartanError::UnknownName(name.to_owned());
        let mut chars = name.chars();
        let letter = chars.next().ok_or_else(unknown)?;
        let rank: usize = chars.as_str().parse().map_err(|_| unknown())?;
        let dot = match (letter, rank) {
            ('A', n) if n >= 1 => simply_laced_chain(n),
            ('B', n) if n >= 2 => {
                // long nodes first, the last node short
                let mut m = scaled_chain(n, 4, -2);
                m[n - 1][n - 1] = 2;
                m
            }
            ('C', n) if n >= 2 => {
                // short nodes first, the last node long
                let mut m = simply_laced_chain(n);
                m[n - 1][n - 1] = 4;
                m[n - 2][n - 1] = -2;
                m[n - 1][n - 2] = -2;
                m
            }
            ('D', n) if n >= 4 => {
                let mut m = simply_laced_chain(n - 1);
                for row in m.iter_mut() {
                    row.push(0);
                }
                m.push(vec![0; n]);
                m[n - 1][n - 1] = 2;
                // the extra node hangs off node n-2 of the chain
                m[n - 1][n - 3] = -1;
                m[n - 3][n - 1] = -1;
                m
            }
            ('E', n) if (6..=8).contains(&n) => {
                // chain 1-3-4-...-n with node 2 attached to node 4
                let mut m = vec![vec![0i64; n]; n];
                for (i, row) in m.iter_mut().enumerate() {
                    row[i] = 2;
                }
                let mut link = |a: usize, b: usize| {
                    m[a][b] = -1;
                    m[b][a] = -1;
                };
                link(0, 2);
                for k in 2..n - 1 {
                    link(k, k + 1);
                }
                link(1, 3);
                m
            }
            ('F', 4) => vec![
                vec![4, -2, 0, 0],
                vec![-2, 4, -2, 0],
                vec![0, -2, 2, -1],
                vec![0, 0, -1, 2],
            ],
            ('G', 2) => vec![vec![2, -3], vec![-3, 6]],
            _ => return Err(unknown()),
        };
        let mut datum = Self::from_dot_matrix(dot)?;
        datum.name = Some(name.to_owned());
        Ok(datum)
    }

    /// Builds and validates a datum from an explicit symmetric form.
    /// Reducible (block-diagonal) data are accepted.
    pub fn from_dot_matrix(dot: Vec<Vec<i64>>) -> Result<Self, CartanError> {
        let n = dot.len();
        let malformed = |msg: String| CartanError::MalformedMatrix(msg);
        for (i, row) in dot.iter().enumerate() {
            if row.len() != n {
                return Err(malformed(format!("row {i} has length {}, expected {n}", row.len())));
            }
            if ![2, 4, 6].contains(&row[i]) {
                return Err(malformed(format!("diagonal entry {i} is {}, expected 2, 4 or 6", row[i])));
            }
            for (j, &v) in row.iter().enumerate() {
                if v != dot[j][i] {
                    return Err(malformed(format!("asymmetric at ({i},{j})")));
                }
                if i != j && v > 0 {
                    return Err(malformed(format!("positive off-diagonal entry at ({i},{j})")));
                }
            }
        }
        let d: Vec<i64> = (0..n).map(|i| dot[i][i] / 2).collect();
        let mut cartan = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                let num = 2 * dot[i][j];
                if num % dot[j][j] != 0 {
                    return Err(malformed(format!(
                        "2(i·j)/(j·j) is not an integer at ({i},{j})"
                    )));
                }
                cartan[i][j] = num / dot[j][j];
                if i != j && !(-3..=0).contains(&cartan[i][j]) {
                    return Err(malformed(format!(
                        "Cartan integer {} out of range at ({i},{j})",
                        cartan[i][j]
                    )));
                }
            }
        }
        // finite type <=> the symmetric form is positive definite
        for k in 1..=n {
            if leading_minor(&dot, k) <= BigInt::from(0) {
                return Err(CartanError::NotFiniteType { index: k });
            }
        }
        Ok(CartanDatum { name: None, dot, d, cartan })
    }

    pub fn rank(&self) -> usize {
        self.dot.len()
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// The symmetric form i·j.
    pub fn dot(&self, i: usize, j: usize) -> Result<i64, CartanError> {
        self.check_index(i)?;
        self.check_index(j)?;
        Ok(self.dot[i][j])
    }

    /// The symmetrizer d_i = (i·i)/2.
    pub fn symmetrizer(&self, i: usize) -> Result<i64, CartanError> {
        self.check_index(i)?;
        Ok(self.d[i])
    }

    /// The Cartan integer 2(i·j)/(j·j).
    pub fn cartan_entry(&self, i: usize, j: usize) -> Result<i64, CartanError> {
        self.check_index(i)?;
        self.check_index(j)?;
        Ok(self.cartan[i][j])
    }

    pub fn dot_matrix(&self) -> &[Vec<i64>] {
        &self.dot
    }

    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// ⟨γ, j'⟩ = Σ_k γ_k · 2(k·j)/(k·k) for an arbitrary integer vector γ.
    pub fn coweight_root_pairing(&self, gamma: &[BigInt], j: usize) -> Result<BigInt, CartanError> {
        self.check_index(j)?;
        if gamma.len() != self.rank() {
            return Err(CartanError::IndexOutOfRange { index: gamma.len(), rank: self.rank() });
        }
        let mut acc = BigInt::from(0);
        for (k, g) in gamma.iter().enumerate() {
            acc += g * BigInt::from(self.cartan[j][k]);
        }
        Ok(acc)
    }

    /// Same pairing for a nonnegative degree vector.
    pub fn degree_root_pairing(&self, alpha: &Degree, j: usize) -> Result<BigInt, CartanError> {
        let gamma: Vec<BigInt> = alpha.coeffs().iter().map(|&a| BigInt::from(a)).collect();
        self.coweight_root_pairing(&gamma, j)
    }

    fn check_index(&self, i: usize) -> Result<(), CartanError> {
        if i < self.rank() {
            Ok(())
        } else {
            Err(CartanError::IndexOutOfRange { index: i, rank: self.rank() })
        }
    }
}

fn simply_laced_chain(n: usize) -> Vec<Vec<i64>> {
    scaled_chain(n, 2, -1)
}

fn scaled_chain(n: usize, diag: i64, edge: i64) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0i64; n]; n];
    for i in 0..n {
        m[i][i] = diag;
        if i + 1 < n {
            m[i][i + 1] = edge;
            m[i + 1][i] = edge;
        }
    }
    m
}

/// Exact determinant of the leading k×k submatrix (Bareiss elimination).
fn leading_minor(m: &[Vec<i64>], k: usize) -> BigInt {
    let mut a: Vec<Vec<BigInt>> = (0..k)
        .map(|i| (0..k).map(|j| BigInt::from(m[i][j])).collect())
        .collect();
    let mut prev = BigInt::from(1);
    let mut sign = 1i64;
    for p in 0..k {
        if a[p][p] == BigInt::from(0) {
            let Some(swap) = (p + 1..k).find(|&r| a[r][p] != BigInt::from(0)) else {
                return BigInt::from(0);
            };
            a.swap(p, swap);
            sign = -sign;
        }
        for i in p + 1..k {
            for j in p + 1..k {
                let num = &a[i][j] * &a[p][p] - &a[i][p] * &a[p][j];
                a[i][j] = num / &prev;
            }
        }
        prev = a[p][p].clone();
        for row in a.iter_mut().skip(p + 1) {
            row[p] = BigInt::from(0);
        }
    }
    a[k - 1][k - 1].clone() * sign
}

/// A degree vector α = Σ a_i·i with nonnegative coefficients.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Degree(Vec<u32>);

impl Degree {
    pub fn new(coeffs: Vec<u32>) -> Self {
        Degree(coeffs)
    }

    pub fn zero(rank: usize) -> Self {
        Degree(vec![0; rank])
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    /// |α| = Σ a_i.
    pub fn total(&self) -> usize {
        self.0.iter().map(|&a| a as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    /// Componentwise difference, None if any coefficient would go negative.
    pub fn checked_sub(&self, other: &Degree) -> Option<Degree> {
        if self.rank() != other.rank() {
            return None;
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| a.checked_sub(b))
            .collect::<Option<Vec<_>>>()
            .map(Degree)
    }

    pub fn add(&self, other: &Degree) -> Degree {
        Degree(self.0.iter().zip(&other.0).map(|(&a, &b)| a + b).collect())
    }
}

impl std::fmt::Display for Degree {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// External form of a Cartan datum: a type name or an explicit matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CartanSpec {
    Name(String),
    Matrix { dot: Vec<Vec<i64>> },
}

impl CartanSpec {
    pub fn build(&self) -> Result<CartanDatum, CartanError> {
        match self {
            CartanSpec::Name(name) => CartanDatum::from_name(name),
            CartanSpec::Matrix { dot } => CartanDatum::from_dot_matrix(dot.clone()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a1_is_the_simply_laced_point() {
        let c = CartanDatum::from_name("A1").unwrap();
        assert_eq!(c.dot_matrix(), &[vec![2]]);
        assert_eq!(c.dot(0, 0).unwrap(), 2);
    }

    #[test]
    fn a2_dot_equals_cartan() {
        let c = CartanDatum::from_name("A2").unwrap();
        assert_eq!(c.dot_matrix(), &[vec![2, -1], vec![-1, 2]]);
        assert_eq!(c.cartan_matrix(), &[vec![2, -1], vec![-1, 2]]);
        assert_eq!(c.dot(0, 1).unwrap(), -1);
    }

    #[test]
    fn a3_non_adjacent_nodes_are_orthogonal() {
        let c = CartanDatum::from_name("A3").unwrap();
        assert_eq!(c.dot(0, 2).unwrap(), 0);
    }

    #[test]
    fn g2_cartan_integers() {
        let c = CartanDatum::from_name("G2").unwrap();
        assert_eq!(c.dot_matrix(), &[vec![2, -3], vec![-3, 6]]);
        assert_eq!(c.symmetrizer(0).unwrap(), 1);
        assert_eq!(c.symmetrizer(1).unwrap(), 3);
        assert_eq!(c.cartan_entry(0, 1).unwrap(), -1);
        assert_eq!(c.cartan_entry(1, 0).unwrap(), -3);
    }

    #[test]
    fn cartan_entries_match_the_pairing_table() {
        // cartan[j][k] must equal <e_k, j'> = 2(k·j)/(k·k) for every named type.
        for name in ["A1", "A4", "B2", "B3", "C3", "D4", "E6", "F4", "G2"] {
            let c = CartanDatum::from_name(name).unwrap();
            let n = c.rank();
            for j in 0..n {
                for k in 0..n {
                    let mut e = vec![BigInt::from(0); n];
                    e[k] = BigInt::from(1);
                    let pairing = c.coweight_root_pairing(&e, j).unwrap();
                    assert_eq!(pairing, BigInt::from(2 * c.dot(k, j).unwrap() / c.dot(k, k).unwrap()));
                    assert_eq!(pairing, BigInt::from(c.cartan_entry(j, k).unwrap()));
                }
            }
        }
    }

    #[test]
    fn fundamental_weight_pairing_is_kronecker() {
        // <i, omega_j> = delta_ij: degree coefficients are the weight pairings.
        let alpha = Degree::new(vec![0, 1, 0]);
        assert_eq!(alpha.coeff(1), 1);
        assert_eq!(alpha.coeff(0), 0);
    }

    #[test]
    fn pairing_examples() {
        let a2 = CartanDatum::from_name("A2").unwrap();
        let g = |v: [i64; 2]| [BigInt::from(v[0]), BigInt::from(v[1])];
        assert_eq!(a2.coweight_root_pairing(&g([0, 1]), 1).unwrap(), BigInt::from(2));
        assert_eq!(a2.coweight_root_pairing(&g([1, 0]), 1).unwrap(), BigInt::from(-1));
        let a1 = CartanDatum::from_name("A1").unwrap();
        assert_eq!(a1.coweight_root_pairing(&[BigInt::from(0)], 0).unwrap(), BigInt::from(0));
    }

    #[test]
    fn pairing_is_linear() {
        let c = CartanDatum::from_name("B3").unwrap();
        let u = [BigInt::from(2), BigInt::from(-1), BigInt::from(3)];
        let v = [BigInt::from(-5), BigInt::from(4), BigInt::from(1)];
        for j in 0..3 {
            let sum: Vec<BigInt> = u.iter().zip(&v).map(|(a, b)| a + b).collect();
            assert_eq!(
                c.coweight_root_pairing(&sum, j).unwrap(),
                c.coweight_root_pairing(&u, j).unwrap() + c.coweight_root_pairing(&v, j).unwrap()
            );
        }
    }

    #[test]
    fn positive_definiteness_small_box() {
        // every nonzero integer vector with entries in [-3,3] has positive norm
        for name in ["A1", "A2", "A3", "B2", "B3", "C3", "D4", "G2", "F4"] {
            let c = CartanDatum::from_name(name).unwrap();
            let n = c.rank();
            let mut v = vec![-3i64; n];
            loop {
                if v.iter().any(|&x| x != 0) {
                    let mut q = 0i64;
                    for i in 0..n {
                        for j in 0..n {
                            q += v[i] * v[j] * c.dot(i, j).unwrap();
                        }
                    }
                    assert!(q > 0, "{name}: form not positive at {v:?}");
                }
                let mut k = 0;
                loop {
                    if k == n {
                        break;
                    }
                    v[k] += 1;
                    if v[k] <= 3 {
                        break;
                    }
                    v[k] = -3;
                    k += 1;
                }
                if k == n {
                    break;
                }
            }
        }
    }

    #[test]
    fn rejects_non_finite_type() {
        // affine A1: determinant zero
        let err = CartanDatum::from_dot_matrix(vec![vec![2, -2], vec![-2, 2]]).unwrap_err();
        assert_eq!(err, CartanError::NotFiniteType { index: 2 });
    }

    #[test]
    fn rejects_malformed_matrices() {
        assert!(matches!(
            CartanDatum::from_dot_matrix(vec![vec![2, -1], vec![0, 2]]),
            Err(CartanError::MalformedMatrix(_))
        ));
        assert!(matches!(
            CartanDatum::from_dot_matrix(vec![vec![3]]),
            Err(CartanError::MalformedMatrix(_))
        ));
        assert!(matches!(
            CartanDatum::from_dot_matrix(vec![vec![2, 1], vec![1, 2]]),
            Err(CartanError::MalformedMatrix(_))
        ));
        // 2(i·j)/(j·j) fails integrality
        assert!(matches!(
            CartanDatum::from_dot_matrix(vec![vec![2, -3], vec![-3, 4]]),
            Err(CartanError::MalformedMatrix(_))
        ));
    }

    #[test]
    fn reducible_data_accepted() {
        let c = CartanDatum::from_dot_matrix(vec![vec![2, 0], vec![0, 6]]).unwrap();
        assert_eq!(c.cartan_entry(0, 1).unwrap(), 0);
        assert_eq!(c.rank(), 2);
    }

    #[test]
    fn unknown_names_rejected() {
        for bad in ["H4", "A0", "B1", "D3", "E9", "F5", "G3", "", "42", "Axx"] {
            assert!(matches!(CartanDatum::from_name(bad), Err(CartanError::UnknownName(_))), "{bad}");
        }
    }

    #[test]
    fn all_named_types_validate() {
        for name in [
            "A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "A9", "B2", "B3", "B4", "C2", "C3",
            "D4", "D5", "E6", "E7", "E8", "F4", "G2",
        ] {
            let c = CartanDatum::from_name(name).unwrap();
            assert_eq!(c.name(), Some(name));
        }
    }

    #[test]
    fn cartan_spec_json_forms() {
        let named: CartanSpec = serde_json::from_str("\"A2\"").unwrap();
        assert_eq!(named, CartanSpec::Name("A2".into()));
        let matrix: CartanSpec = serde_json::from_str(r#"{"dot": [[2,-1],[-1,2]]}"#).unwrap();
        assert_eq!(matrix.build().unwrap(), CartanDatum::from_name("A2").unwrap().clone_unnamed());
    }

    impl CartanDatum {
        fn clone_unnamed(&self) -> Self {
            let mut c = self.clone();
            c.name = None;
            c
        }
    }

    #[test]
    fn degree_arithmetic() {
        let a = Degree::new(vec![2, 1]);
        assert_eq!(a.total(), 3);
        assert_eq!(Degree::zero(2).total(), 0);
        let b = Degree::new(vec![2, 0]);
        assert_eq!(a.checked_sub(&b), Some(Degree::new(vec![0, 1])));
        assert_eq!(b.checked_sub(&a), None);
        assert_eq!(a.to_string(), "2,1");
    }
}
