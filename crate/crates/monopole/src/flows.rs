//! The integrable system: Hamiltonian vector fields of symmetric functions
//! of the x-coordinates, fixed-step RK4 integration in complex double
//! precision, the closed-form exponential solution for x-only Hamiltonians,
//! and conservation / commutation reports.

use crate::cartan::CartanDatum;
use crate::chart::ChartPointC;
use crate::mpoly::MPoly;
use crate::poisson::{bivector_entries, ChartLayout, CoordIndex, CoordKind, PoissonError};
use crate::rat::{rat_to_f64, Coeff, Rat};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlowError {
    #[error("trajectory left the chart at t = {0}")]
    LeftChart(f64),
    #[error("step size must be positive, got {0}")]
    BadStep(f64),
    #[error("Hamiltonian must involve only x-coordinates")]
    NotXOnly,
    #[error("cannot parse Hamiltonian term {0:?}")]
    BadHamiltonian(String),
    #[error(transparent)]
    Poisson(#[from] PoissonError),
}

/// Float-chart membership bounds: minimal pairwise x-gap and minimal |y|.
#[derive(Debug, Clone, Copy)]
pub struct ChartTolerance {
    pub min_x_gap: f64,
    pub min_y_abs: f64,
}

impl Default for ChartTolerance {
    fn default() -> Self {
        ChartTolerance { min_x_gap: 1e-8, min_y_abs: 1e-12 }
    }
}

/// A polynomial Hamiltonian in the chart coordinates, with the x-only flag
/// (no y-coordinate appears) decided at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    label: String,
    poly: MPoly<Rat>,
    x_only: bool,
}

impl Hamiltonian {
    pub fn from_poly(label: impl Into<String>, poly: MPoly<Rat>, layout: &ChartLayout) -> Result<Self, FlowError> {
        if poly.nvars() != layout.dim() {
            return Err(FlowError::BadHamiltonian(format!(
                "polynomial in {} variables on a {}-dimensional chart",
                poly.nvars(),
                layout.dim()
            )));
        }
        let y_vars: Vec<usize> = layout
            .coords()
            .filter(|c| c.kind == CoordKind::Y)
            .map(|c| layout.position(c).expect("in range"))
            .collect();
        let x_only = poly.independent_of(&y_vars);
        Ok(Hamiltonian { label: label.into(), poly, x_only })
    }

    /// The coordinate function ξ_c itself.
    pub fn coordinate(layout: &ChartLayout, c: CoordIndex) -> Result<Self, FlowError> {
        let pos = layout.position(c)?;
        Self::from_poly(c.label(), MPoly::var(layout.dim(), pos), layout)
    }

    /// e_m of the x-coordinates of one color.
    pub fn elementary_symmetric_x(layout: &ChartLayout, color: usize, m: usize) -> Result<Self, FlowError> {
        if color >= layout.alpha().rank() {
            return Err(FlowError::BadHamiltonian(format!("color {} out of range", color + 1)));
        }
        let vars: Vec<usize> = (0..layout.alpha().coeff(color) as usize)
            .map(|k| layout.position(CoordIndex::x(color, k)).expect("in range"))
            .collect();
        let poly = MPoly::elementary_symmetric(layout.dim(), &vars, m);
        Self::from_poly(format!("e{m}:{}", color + 1), poly, layout)
    }

    /// Parses sums of terms: `x:i:k`, `y:i:k`, and `e<m>:<color>` (1-based),
    /// joined by `+`.
    pub fn parse(spec: &str, layout: &ChartLayout) -> Result<Self, FlowError> {
        let mut acc = MPoly::<Rat>::zero(layout.dim());
        for term in spec.split('+') {
            let term = term.trim();
            let parsed = if term.starts_with("x:") || term.starts_with("y:") {
                let c = CoordIndex::parse(term).map_err(|_| FlowError::BadHamiltonian(term.into()))?;
                let pos = layout.position(c)?;
                MPoly::var(layout.dim(), pos)
            } else if let Some(rest) = term.strip_prefix('e') {
                let (m, color) = rest
                    .split_once(':')
                    .and_then(|(m, c)| Some((m.parse::<usize>().ok()?, c.parse::<usize>().ok()?)))
                    .ok_or_else(|| FlowError::BadHamiltonian(term.into()))?;
                if color == 0 || color > layout.alpha().rank() {
                    return Err(FlowError::BadHamiltonian(term.into()));
                }
                Self::elementary_symmetric_x(layout, color - 1, m)?.poly
            } else {
                return Err(FlowError::BadHamiltonian(term.into()));
            };
            acc = acc.add(&parsed);
        }
        Self::from_poly(spec, acc, layout)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn poly(&self) -> &MPoly<Rat> {
        &self.poly
    }

    pub fn is_x_only(&self) -> bool {
        self.x_only
    }

    pub fn complex_poly(&self) -> MPoly<Complex64> {
        self.poly.map_coeffs(|c| Complex64::new(rat_to_f64(c), 0.0))
    }

    pub fn eval_f64(&self, state: &[Complex64]) -> Complex64 {
        self.complex_poly().eval(state)
    }
}

/// v = P·dH over any coefficient field; x-components vanish for x-only H.
pub fn vector_field_in<C: Coeff>(
    cartan: &CartanDatum,
    layout: &ChartLayout,
    h: &MPoly<C>,
    state: &[C],
) -> Result<Vec<C>, PoissonError> {
    let dim = layout.dim();
    let grad: Vec<C> = (0..dim).map(|k| h.partial(k).eval(state)).collect();
    let p = bivector_entries(cartan, layout, state)?;
    Ok((0..dim)
        .map(|a| {
            (0..dim).fold(C::zero(), |acc, b| {
                if grad[b].is_zero() || p[a][b].is_zero() {
                    acc
                } else {
                    acc + p[a][b].clone() * grad[b].clone()
                }
            })
        })
        .collect())
}

/// The Hamiltonian vector field at a float chart state.
pub fn hamiltonian_vector_field(
    cartan: &CartanDatum,
    layout: &ChartLayout,
    h: &Hamiltonian,
    state: &[Complex64],
) -> Result<Vec<Complex64>, FlowError> {
    Ok(vector_field_in(cartan, layout, &h.complex_poly(), state)?)
}

/// Checks the float-tolerance chart membership of a state.
pub fn inside_chart(layout: &ChartLayout, state: &[Complex64], tol: &ChartTolerance) -> bool {
    let half = layout.dim() / 2;
    let xs = &state[..half];
    let ys = &state[half..];
    for (a, xa) in xs.iter().enumerate() {
        for xb in xs.iter().skip(a + 1) {
            if (xa - xb).norm() <= tol.min_x_gap {
                return false;
            }
        }
    }
    ys.iter().all(|y| y.norm() > tol.min_y_abs)
}

/// A fixed-step trajectory: strictly increasing times, every sample inside
/// the float-tolerance chart.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<Complex64>>,
    pub step: f64,
    pub method: &'static str,
}

/// Classical fixed-step RK4 for dξ/dt = P(ξ)·dH(ξ), aborting cleanly when
/// the state approaches a coordinate collision or a vanishing y.
pub fn integrate(
    cartan: &CartanDatum,
    layout: &ChartLayout,
    h: &Hamiltonian,
    state0: &[Complex64],
    t_end: f64,
    dt: f64,
    tol: &ChartTolerance,
) -> Result<Trajectory, FlowError> {
    if !dt.is_finite() || dt <= 0.0 {
        return Err(FlowError::BadStep(dt));
    }
    if !inside_chart(layout, state0, tol) {
        return Err(FlowError::LeftChart(0.0));
    }
    let hc = h.complex_poly();
    let field = |state: &[Complex64]| vector_field_in(cartan, layout, &hc, state);
    let mut times = vec![0.0];
    let mut states = vec![state0.to_vec()];
    let mut t = 0.0;
    let mut state = state0.to_vec();
    let dim = layout.dim();
    while t < t_end - 1e-15 {
        let step = dt.min(t_end - t);
        let k1 = field(&state)?;
        let k2 = field(&offset(&state, &k1, step / 2.0))?;
        let k3 = field(&offset(&state, &k2, step / 2.0))?;
        let k4 = field(&offset(&state, &k3, step))?;
        for a in 0..dim {
            state[a] += step / 6.0 * (k1[a] + 2.0 * k2[a] + 2.0 * k3[a] + k4[a]);
        }
        t += step;
        if !inside_chart(layout, &state, tol) {
            return Err(FlowError::LeftChart(t));
        }
        times.push(t);
        states.push(state.clone());
    }
    Ok(Trajectory { times, states, step: dt, method: "rk4" })
}

fn offset(state: &[Complex64], dir: &[Complex64], h: f64) -> Vec<Complex64> {
    state.iter().zip(dir).map(|(s, d)| s + h * d).collect()
}

/// Exact solution for an x-only Hamiltonian: x is frozen and each
/// y_i^k(t) = y_i^k(0) · exp(-t · ∂H/∂x_i^k(x(0))).
pub fn closed_form_x_flow(
    layout: &ChartLayout,
    h: &Hamiltonian,
    state0: &[Complex64],
    t: f64,
) -> Result<Vec<Complex64>, FlowError> {
    if !h.is_x_only() {
        return Err(FlowError::NotXOnly);
    }
    let hc = h.complex_poly();
    let mut state = state0.to_vec();
    for c in layout.coords() {
        if c.kind != CoordKind::Y {
            continue;
        }
        let x_pos = layout.position(CoordIndex::x(c.color, c.slot))?;
        let y_pos = layout.position(c)?;
        let rate = hc.partial(x_pos).eval(state0);
        state[y_pos] = state0[y_pos] * (-t * rate).exp();
    }
    Ok(state)
}

/// Max relative drift of each function along the trajectory:
/// max_t |f(ξ(t)) - f(ξ(0))| / (1 + |f(ξ(0))|).
pub fn conservation_report(traj: &Trajectory, functions: &[Hamiltonian]) -> Vec<f64> {
    functions
        .iter()
        .map(|f| {
            let initial = f.eval_f64(&traj.states[0]);
            let scale = 1.0 + initial.norm();
            traj.states
                .iter()
                .map(|s| (f.eval_f64(s) - initial).norm() / scale)
                .fold(0.0, f64::max)
        })
        .collect()
}

/// Runs the two flows in both orders for time t each and returns the
/// max-norm discrepancy of the endpoints; both Hamiltonians must be x-only.
pub fn commute_check(
    cartan: &CartanDatum,
    layout: &ChartLayout,
    h1: &Hamiltonian,
    h2: &Hamiltonian,
    state0: &[Complex64],
    t: f64,
    dt: f64,
    tol: &ChartTolerance,
) -> Result<f64, FlowError> {
    if !h1.is_x_only() || !h2.is_x_only() {
        return Err(FlowError::NotXOnly);
    }
    let flow = |h: &Hamiltonian, s: &[Complex64]| -> Result<Vec<Complex64>, FlowError> {
        let traj = integrate(cartan, layout, h, s, t, dt, tol)?;
        Ok(traj.states.last().expect("nonempty").clone())
    };
    let forward = flow(h2, &flow(h1, state0)?)?;
    let reverse = flow(h1, &flow(h2, state0)?)?;
    Ok(forward
        .iter()
        .zip(&reverse)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max))
}

/// Converts a float chart point to the flat state vector.
pub fn state_from_point(layout: &ChartLayout, pt: &ChartPointC) -> Vec<Complex64> {
    layout.flatten(&pt.x, &pt.y)
}
