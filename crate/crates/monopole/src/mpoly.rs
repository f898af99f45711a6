//! Sparse multivariate polynomials in the chart coordinates, used for
//! Hamiltonians and for Leibniz-extended brackets of functions.

use crate::rat::Coeff;
use std::collections::BTreeMap;

/// Sparse polynomial in `nvars` variables; keys are exponent vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct MPoly<C> {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, C>,
}

impl<C: Coeff> MPoly<C> {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, idx: usize) -> Self {
        assert!(idx < nvars, "variable index out of range");
        let mut expo = vec![0; nvars];
        expo[idx] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(expo, C::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &C)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    fn add_term(&mut self, expo: Vec<u32>, c: C) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(expo.len(), self.nvars);
        match self.terms.entry(expo) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                let sum = slot.get().clone() + c;
                if sum.is_zero() {
                    slot.remove();
                } else {
                    slot.insert(sum);
                }
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in rhs.terms.iter() {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in self.terms.iter() {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, k: &C) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in self.terms.iter() {
            out.add_term(e.clone(), c.clone() * k.clone());
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in self.terms.iter() {
            for (eb, cb) in rhs.terms.iter() {
                let expo: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(expo, ca.clone() * cb.clone());
            }
        }
        out
    }

    /// Formal partial derivative with respect to variable `idx`.
    pub fn partial(&self, idx: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in self.terms.iter() {
            let k = e[idx];
            if k == 0 {
                continue;
            }
            let mut expo = e.clone();
            expo[idx] = k - 1;
            out.add_term(expo, C::from_int(k as i64) * c.clone());
        }
        out
    }

    pub fn eval(&self, point: &[C]) -> C {
        assert_eq!(point.len(), self.nvars);
        let mut acc = C::zero();
        for (e, c) in self.terms.iter() {
            let mut term = c.clone();
            for (k, &expo) in e.iter().enumerate() {
                for _ in 0..expo {
                    term = term * point[k].clone();
                }
            }
            acc = acc + term;
        }
        acc
    }

    /// True if no variable in `vars` appears.
    pub fn independent_of(&self, vars: &[usize]) -> bool {
        self.terms.keys().all(|e| vars.iter().all(|&v| e[v] == 0))
    }

    /// Coefficient-wise conversion to another scalar.
    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> MPoly<D> {
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in self.terms.iter() {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    /// Elementary symmetric polynomial e_m in the given variables.
    pub fn elementary_symmetric(nvars: usize, vars: &[usize], m: usize) -> Self {
        if m > vars.len() {
            return Self::zero(nvars);
        }
        let mut acc = Self::zero(nvars);
        let mut idx: Vec<usize> = (0..m).collect();
        loop {
            let mut expo = vec![0u32; nvars];
            for &pos in &idx {
                expo[vars[pos]] = 1;
            }
            acc.add_term(expo, C::one());
            // next m-combination of 0..vars.len()
            let mut k = m;
            loop {
                if k == 0 {
                    return acc;
                }
                k -= 1;
                if idx[k] < vars.len() - (m - k) {
                    idx[k] += 1;
                    for t in k + 1..m {
                        idx[t] = idx[t - 1] + 1;
                    }
                    break;
                }
            }
            if m == 0 {
                return acc;
            }
        }
    }
}
