//! Exact univariate and bivariate polynomial arithmetic over a generic
//! coefficient field, plus the interpolation and divided-difference kernels
//! the chart and the bracket oracle are built from.

use crate::rat::Coeff;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("duplicate interpolation node at positions {0} and {1}")]
    DuplicateNode(usize, usize),
    #[error("node/value lists have lengths {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("inexact division: nonzero remainder (arithmetic bug)")]
    InexactDivision,
}

/// Univariate polynomial, coefficients ascending, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly<C> {
    coeffs: Vec<C>,
}

impl<C: Coeff> Poly<C> {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: C) -> Self {
        Poly::from_coeffs(vec![c])
    }

    pub fn one() -> Self {
        Poly::constant(C::one())
    }

    /// The monomial z.
    pub fn var() -> Self {
        Poly::from_coeffs(vec![C::zero(), C::one()])
    }

    pub fn from_coeffs(coeffs: Vec<C>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> C {
        self.coeffs.get(k).cloned().unwrap_or_else(C::zero)
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        matches!(self.leading(), Some(c) if *c == C::one())
    }

    pub fn eval(&self, t: &C) -> C {
        let mut acc = C::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t.clone() + c.clone();
        }
        acc
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Poly<C> {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| C::from_int(k as i64) * c.clone())
            .collect();
        Poly::from_coeffs(coeffs)
    }

    pub fn add(&self, rhs: &Poly<C>) -> Poly<C> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        Poly::from_coeffs(coeffs)
    }

    pub fn sub(&self, rhs: &Poly<C>) -> Poly<C> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect();
        Poly::from_coeffs(coeffs)
    }

    pub fn neg(&self) -> Poly<C> {
        Poly::from_coeffs(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn mul(&self, rhs: &Poly<C>) -> Poly<C> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![C::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: &C) -> Poly<C> {
        Poly::from_coeffs(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Monic polynomial with the given roots; the empty list gives 1.
    pub fn monic_from_roots(roots: &[C]) -> Poly<C> {
        let mut p = Poly::one();
        for r in roots {
            p = p.mul(&Poly::from_coeffs(vec![-r.clone(), C::one()]));
        }
        p
    }

    /// Quotient by the linear factor (z - r); the caller must know r is a
    /// root, the remainder is discarded.
    pub fn deflate(&self, r: &C) -> Poly<C> {
        if self.is_zero() {
            return Poly::zero();
        }
        let d = self.coeffs.len() - 1;
        let mut q = vec![C::zero(); d];
        let mut carry = C::zero();
        for k in (0..d).rev() {
            carry = self.coeffs[k + 1].clone() + r.clone() * carry;
            q[k] = carry.clone();
        }
        Poly::from_coeffs(q)
    }

    /// The unique polynomial of degree < n through the n given points.
    pub fn lagrange_lower(nodes: &[C], values: &[C]) -> Result<Poly<C>, PolyError> {
        if nodes.len() != values.len() {
            return Err(PolyError::LengthMismatch(nodes.len(), values.len()));
        }
        for i in 0..nodes.len() {
            for j in i + 1..nodes.len() {
                if nodes[i] == nodes[j] {
                    return Err(PolyError::DuplicateNode(i, j));
                }
            }
        }
        let master = Poly::monic_from_roots(nodes);
        let master_deriv = master.derivative();
        let mut acc = Poly::zero();
        for (x, y) in nodes.iter().zip(values) {
            // y * master(z) / (master'(x) * (z - x))
            let basis = master.deflate(x);
            let w = y.clone() / master_deriv.eval(x);
            acc = acc.add(&basis.scale(&w));
        }
        Ok(acc)
    }
}

/// Bivariate polynomial: `grid[m][n]` is the coefficient of z^m w^n.
/// Trailing all-zero rows and columns are trimmed.
#[derive(Debug, Clone, PartialEq)]
pub struct BiPoly<C> {
    grid: Vec<Vec<C>>,
}

impl<C: Coeff> BiPoly<C> {
    pub fn zero() -> Self {
        BiPoly { grid: Vec::new() }
    }

    pub fn from_grid(grid: Vec<Vec<C>>) -> Self {
        let mut b = BiPoly { grid };
        b.trim();
        b
    }

    fn trim(&mut self) {
        let width = self.grid.iter().map(Vec::len).max().unwrap_or(0);
        for row in &mut self.grid {
            row.resize(width, C::zero());
        }
        while matches!(self.grid.last(), Some(row) if row.iter().all(Zero::is_zero)) {
            self.grid.pop();
        }
        let mut width = self.grid.iter().map(Vec::len).max().unwrap_or(0);
        while width > 0 && self.grid.iter().all(|row| row[width - 1].is_zero()) {
            width -= 1;
        }
        for row in &mut self.grid {
            row.truncate(width);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn grid(&self) -> &[Vec<C>] {
        &self.grid
    }

    pub fn coeff(&self, m: usize, n: usize) -> C {
        self.grid
            .get(m)
            .and_then(|row| row.get(n))
            .cloned()
            .unwrap_or_else(C::zero)
    }

    pub fn bi_eval(&self, z: &C, w: &C) -> C {
        let mut acc = C::zero();
        for row in self.grid.iter().rev() {
            let mut row_acc = C::zero();
            for c in row.iter().rev() {
                row_acc = row_acc * w.clone() + c.clone();
            }
            acc = acc * z.clone() + row_acc;
        }
        acc
    }

    /// Restriction to the diagonal z = w = t as a univariate polynomial.
    pub fn diagonal(&self) -> Poly<C> {
        let mut acc = Poly::zero();
        for (m, row) in self.grid.iter().enumerate() {
            for (n, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    let mut mono = vec![C::zero(); m + n + 1];
                    mono[m + n] = c.clone();
                    acc = acc.add(&Poly::from_coeffs(mono));
                }
            }
        }
        acc
    }

    /// The divided difference T(z,w) with (z-w)·T = p(z)q(w) - q(z)p(w).
    ///
    /// The numerator is antisymmetric, hence always divisible; a nonzero
    /// remainder can only come from an arithmetic bug and is reported as
    /// `InexactDivision`. Division is synthetic in z with w as a parameter.
    pub fn antisym_quotient(p: &Poly<C>, q: &Poly<C>) -> Result<BiPoly<C>, PolyError> {
        // numerator coefficients c_m(w) of z^m, each a polynomial in w
        let deg = p.coeffs().len().max(q.coeffs().len());
        if deg == 0 {
            return Ok(BiPoly::zero());
        }
        let width = deg;
        let mut numer: Vec<Vec<C>> = vec![vec![C::zero(); width]; deg];
        for m in 0..deg {
            for n in 0..width {
                numer[m][n] = p.coeff(m) * q.coeff(n) - q.coeff(m) * p.coeff(n);
            }
        }
        // divide Σ c_m z^m by (z - w): t_{m-1} = c_m + w·t_m, top down
        let mul_w = |v: &[C]| -> Vec<C> {
            let mut out = vec![C::zero(); v.len() + 1];
            for (k, c) in v.iter().enumerate() {
                out[k + 1] = c.clone();
            }
            out
        };
        let add = |a: &[C], b: &[C]| -> Vec<C> {
            let n = a.len().max(b.len());
            (0..n)
                .map(|k| {
                    let x = a.get(k).cloned().unwrap_or_else(C::zero);
                    let y = b.get(k).cloned().unwrap_or_else(C::zero);
                    x + y
                })
                .collect()
        };
        let top = deg - 1;
        let mut quotient: Vec<Vec<C>> = vec![Vec::new(); top];
        let mut carry = numer[top].clone();
        for m in (1..=top).rev() {
            quotient[m - 1] = carry.clone();
            carry = add(&numer[m - 1], &mul_w(&carry));
        }
        if carry.iter().any(|c| !c.is_zero()) {
            return Err(PolyError::InexactDivision);
        }
        Ok(BiPoly::from_grid(quotient))
    }
}
