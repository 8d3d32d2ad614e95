//! Numerical solutions of Taubes-form vortex equations and residual
//! evaluation for candidate solutions.
//!
//! The supported numerical geometry is radial: all vortices coincident at
//! the origin with multiplicity `m`. The substitution `u = m log r + v`
//! removes the delta source exactly and leaves
//!
//! ```text
//! v'' + v'/r = Ω(r) [ C_0 - Σ_{n>=1} C_{2n} r^{2nm} e^{2nv} ],   v'(0) = 0,
//! ```
//!
//! which is discretized on a logarithmically graded grid and solved by a
//! damped Newton iteration on the tridiagonal linearization. Arbitrary 2D
//! divisor placements are verification-only, through [`residual_field`].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::catalog::EquationSpec;
use crate::error::{Result, VortexError};
use crate::liouville::Divisor;
use crate::surface::{laplace_beltrami, ScalarField, SurfaceChart};

/// Default grading strength of the radial grid (0 = uniform).
pub const DEFAULT_GRADING: f64 = 2.5;

/// Default Newton tolerance on the discrete residual sup-norm.
pub const DEFAULT_TOL: f64 = 1e-10;

const MAX_NEWTON_ITERATIONS: usize = 200;
const MAX_HALVINGS: usize = 60;

/// Background conformal factor of a radial problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Background {
    /// `Ω(r) = 4/(1 + K_0 r^2)^2`.
    ConstantCurvature(f64),
    /// Arbitrary per-node samples, e.g. a Baptista factor with a conical
    /// zero `r^{2a} (smooth)` at the origin; length must match the grid.
    Samples(Vec<f64>),
}

/// Boundary condition at `r = R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BoundaryCondition {
    /// `u(R) = u_vac` with `P(e^{2 u_vac}) = 0`; fails when the vortex
    /// polynomial has no positive vacuum.
    VacuumDecay,
    /// `u(R)` prescribed (e.g. from a closed form).
    Dirichlet(f64),
    /// `u'(R) = 0`.
    NeumannZero,
}

/// Radially reduced vortex problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialProblem {
    pub equation: EquationSpec,
    /// Vortex multiplicity at the origin; `0` solves the vacuum problem
    /// without a source.
    pub multiplicity: u32,
    pub background: Background,
    pub radius: f64,
    pub boundary: BoundaryCondition,
    /// Grading strength of the grid, `r = R (e^{σt} - 1)/(e^σ - 1)`.
    pub grading: f64,
}

impl RadialProblem {
    /// Problem on a constant-curvature background.
    pub fn new(
        equation: EquationSpec,
        multiplicity: u32,
        k0: f64,
        radius: f64,
        boundary: BoundaryCondition,
    ) -> Self {
        RadialProblem {
            equation,
            multiplicity,
            background: Background::ConstantCurvature(k0),
            radius,
            boundary,
            grading: DEFAULT_GRADING,
        }
    }
}

/// Graded radial grid, uniform in the stretched coordinate `t in [0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    pub radius: f64,
    pub grading: f64,
    pub r: Vec<f64>,
    /// `1/g'(t_i)^2` (second-derivative weight).
    alpha: Vec<f64>,
    /// `1/(r g') - g''/g'^3` (first-derivative weight), unusable at `r=0`.
    beta: Vec<f64>,
    dt: f64,
}

impl RadialGrid {
    pub fn new(radius: f64, points: usize, grading: f64) -> Result<Self> {
        if points < 8 {
            return Err(VortexError::Precondition(
                "radial grid needs at least 8 points".into(),
            ));
        }
        if !(radius > 0.0) || !(grading > 0.0) {
            return Err(VortexError::Precondition(
                "radius and grading must be positive".into(),
            ));
        }
        let n = points;
        let dt = 1.0 / (n - 1) as f64;
        let em1 = grading.exp_m1();
        let mut r = Vec::with_capacity(n);
        let mut alpha = Vec::with_capacity(n);
        let mut beta = Vec::with_capacity(n);
        for i in 0..n {
            let t = i as f64 * dt;
            let e = (grading * t).exp();
            let ri = radius * (e - 1.0) / em1;
            let gp = radius * grading * e / em1;
            let gpp = radius * grading * grading * e / em1;
            r.push(ri);
            alpha.push(1.0 / (gp * gp));
            beta.push(if i == 0 {
                0.0
            } else {
                1.0 / (ri * gp) - gpp / (gp * gp * gp)
            });
        }
        Ok(RadialGrid {
            radius,
            grading,
            r,
            alpha,
            beta,
            dt,
        })
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    /// Discrete `v'' + v'/r` at interior node `i`, in the stretched
    /// coordinate.
    fn flat_radial_laplacian(&self, v: &[f64], i: usize) -> f64 {
        let dt2 = self.dt * self.dt;
        let vtt = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / dt2;
        let vt = (v[i + 1] - v[i - 1]) / (2.0 * self.dt);
        self.alpha[i] * vtt + self.beta[i] * vt
    }
}

/// Outcome of a radial solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub converged: bool,
    pub iterations: usize,
    /// Sup-norm of the discrete residual at the final iterate, measured in
    /// the `Δu - P(e^{2u})` form wherever the metric weight allows (each
    /// row is divided by `max(Ω_i, 1)`; see [`scaled_residual_sup`]).
    pub residual_sup: f64,
    /// `(1/2π) ∫ P(e^{2u}) Ω dA` over the solved disc.
    pub flux: f64,
    /// Residual sup-norm after each iteration.
    pub residual_history: Vec<f64>,
    pub warnings: Vec<String>,
    /// Wall-clock time; informational only, excluded from any equality or
    /// reproducibility comparison of reports.
    pub wall_time_ms: f64,
}

/// Solved radial profile with everything needed for later diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialSolution {
    pub equation: EquationSpec,
    pub multiplicity: u32,
    pub grid: RadialGrid,
    /// Background factor at the nodes.
    pub omega: Vec<f64>,
    /// Regular part `v`; the full field is `u = m log r + v`.
    pub v: Vec<f64>,
    pub report: SolveReport,
}

impl RadialSolution {
    /// `u_i = m log r_i + v_i` (`-inf` at the origin when `m >= 1`).
    pub fn u_values(&self) -> Vec<f64> {
        let m = self.multiplicity as f64;
        self.grid
            .r
            .iter()
            .zip(&self.v)
            .map(|(&r, &v)| if r == 0.0 && m > 0.0 { f64::NEG_INFINITY } else { m * r.ln() + v })
            .collect()
    }

    /// `e^{2u}` at the nodes, finite everywhere.
    pub fn higgs_squared_values(&self) -> Vec<f64> {
        let m = self.multiplicity;
        self.grid
            .r
            .iter()
            .zip(&self.v)
            .map(|(&r, &v)| r.powi(2 * m as i32) * (2.0 * v).exp())
            .collect()
    }

    /// Discrete positive Laplacian `Δu = -(v''+v'/r)/Ω` at interior nodes;
    /// `None` at the endpoints.
    pub fn discrete_laplacian_u(&self) -> Vec<Option<f64>> {
        let n = self.grid.len();
        (0..n)
            .map(|i| {
                if i == 0 || i + 1 == n {
                    None
                } else {
                    Some(-self.grid.flat_radial_laplacian(&self.v, i) / self.omega[i])
                }
            })
            .collect()
    }

    /// Discrete residual of `equation` for this profile (the solver's own
    /// convergence measure, recomputed).
    pub fn discrete_residual(&self) -> Vec<f64> {
        discrete_residual(
            &self.grid,
            &self.v,
            &self.omega,
            &self.equation,
            self.multiplicity,
        )
    }
}

fn resolve_background(bg: &Background, grid: &RadialGrid) -> Result<Vec<f64>> {
    match bg {
        Background::ConstantCurvature(k0) => {
            let chart = SurfaceChart::new(*k0);
            if grid.radius >= chart.valid_radius() {
                return Err(VortexError::OutOfChart {
                    point: Complex64::new(grid.radius, 0.0),
                    valid_radius: chart.valid_radius(),
                });
            }
            Ok(grid
                .r
                .iter()
                .map(|&r| {
                    let s = 1.0 + k0 * r * r;
                    4.0 / (s * s)
                })
                .collect())
        }
        Background::Samples(values) => {
            if values.len() != grid.len() {
                return Err(VortexError::GridMismatch(format!(
                    "background has {} samples, grid has {} nodes",
                    values.len(),
                    grid.len()
                )));
            }
            Ok(values.clone())
        }
    }
}

/// `F(r, v) = Ω [ C_0 - Σ C_{2n} r^{2nm} e^{2nv} ]` and its `v`-derivative.
fn forcing(eq: &EquationSpec, m: u32, omega: f64, r: f64, v: f64) -> (f64, f64) {
    let mut f = eq.c(0);
    let mut df = 0.0;
    for n in 1..eq.coefficients.len() {
        let c = eq.coefficients[n];
        if c == 0.0 {
            continue;
        }
        let pow = (2 * n as u32 * m) as i32;
        let term = c * r.powi(pow) * (2.0 * n as f64 * v).exp();
        f -= term;
        df -= 2.0 * n as f64 * term;
    }
    (omega * f, omega * df)
}

/// Discrete residual of the `v`-form equation; the two boundary rows carry
/// the regularity and boundary-condition residuals of the last solve
/// context, so only rows `1..n-1` are meaningful for external profiles.
pub fn discrete_residual(
    grid: &RadialGrid,
    v: &[f64],
    omega: &[f64],
    eq: &EquationSpec,
    m: u32,
) -> Vec<f64> {
    let n = grid.len();
    let mut out = vec![0.0; n];
    // Regularity row: v''+v'/r -> 2 v'' at r = 0 with a symmetric ghost.
    let dt2 = grid.dt * grid.dt;
    let (f0, _) = forcing(eq, m, omega[0], 0.0, v[0]);
    out[0] = 4.0 * grid.alpha[0] * (v[1] - v[0]) / dt2 - f0;
    for i in 1..n - 1 {
        let (f, _) = forcing(eq, m, omega[i], grid.r[i], v[i]);
        out[i] = grid.flat_radial_laplacian(v, i) - f;
    }
    out
}

fn thomas_solve(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = upper[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - lower[i] * c[i - 1];
        c[i] = if i + 1 < n { upper[i] / m } else { 0.0 };
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / m;
    }
    let mut x = d;
    for i in (0..n - 1).rev() {
        let xi = x[i] - c[i] * x[i + 1];
        x[i] = xi;
    }
    x
}

struct Discretization<'a> {
    grid: &'a RadialGrid,
    omega: &'a [f64],
    eq: &'a EquationSpec,
    m: u32,
    boundary: BoundaryRow,
}

#[derive(Clone, Copy)]
enum BoundaryRow {
    Dirichlet(f64),
    /// `v_t` target at the outer node (from `u'(R) = 0`).
    Neumann(f64),
}

impl Discretization<'_> {
    fn residual(&self, v: &[f64]) -> Vec<f64> {
        let n = self.grid.len();
        let mut e = discrete_residual(self.grid, v, self.omega, self.eq, self.m);
        match self.boundary {
            BoundaryRow::Dirichlet(vb) => e[n - 1] = v[n - 1] - vb,
            BoundaryRow::Neumann(vt_target) => {
                let dt = self.grid.dt;
                let i = n - 1;
                let ghost = v[i - 1] + 2.0 * dt * vt_target;
                let vtt = (ghost - 2.0 * v[i] + v[i - 1]) / (dt * dt);
                let vt = vt_target;
                let (f, _) = forcing(self.eq, self.m, self.omega[i], self.grid.r[i], v[i]);
                e[i] = self.grid.alpha[i] * vtt + self.grid.beta[i] * vt - f;
            }
        }
        e
    }

    fn jacobian(&self, v: &[f64]) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let n = self.grid.len();
        let dt = self.grid.dt;
        let dt2 = dt * dt;
        let mut lower = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut upper = vec![0.0; n];
        let (_, df0) = forcing(self.eq, self.m, self.omega[0], 0.0, v[0]);
        diag[0] = -4.0 * self.grid.alpha[0] / dt2 - df0;
        upper[0] = 4.0 * self.grid.alpha[0] / dt2;
        for i in 1..n - 1 {
            let a = self.grid.alpha[i];
            let b = self.grid.beta[i];
            let (_, df) = forcing(self.eq, self.m, self.omega[i], self.grid.r[i], v[i]);
            lower[i] = a / dt2 - b / (2.0 * dt);
            diag[i] = -2.0 * a / dt2 - df;
            upper[i] = a / dt2 + b / (2.0 * dt);
        }
        let i = n - 1;
        match self.boundary {
            BoundaryRow::Dirichlet(_) => {
                diag[i] = 1.0;
            }
            BoundaryRow::Neumann(_) => {
                let a = self.grid.alpha[i];
                let (_, df) = forcing(self.eq, self.m, self.omega[i], self.grid.r[i], v[i]);
                lower[i] = 2.0 * a / dt2;
                diag[i] = -2.0 * a / dt2 - df;
            }
        }
        (lower, diag, upper)
    }
}

/// Sup-norm of a discrete residual vector with each row divided by
/// `max(Ω_i, 1)`: the residual of `Δu = P(e^{2u})` itself wherever the
/// metric is at least unit-sized, falling back to the flat-Laplacian form
/// where the (Baptista) background degenerates. The absolute form would be
/// pinned to a rounding floor of order `Ω·eps` near a hyperbolic boundary.
pub fn scaled_residual_sup(residual: &[f64], omega: &[f64]) -> f64 {
    residual
        .iter()
        .zip(omega)
        .fold(0.0, |m, (&e, &om)| m.max(e.abs() / om.max(1.0)))
}

/// Scaled L2 merit used by the line search; smoother than the sup-norm.
fn merit(residual: &[f64], omega: &[f64]) -> f64 {
    residual
        .iter()
        .zip(omega)
        .map(|(&e, &om)| {
            let s = e / om.max(1.0);
            s * s
        })
        .sum::<f64>()
        .sqrt()
}

/// Solve a radial problem with `points` nodes to residual tolerance `tol`.
///
/// Newton divergence is reported through `report.converged = false` with
/// the iteration trace attached, not as an error.
pub fn solve_radial(prob: &RadialProblem, points: usize, tol: f64) -> Result<RadialSolution> {
    let start = std::time::Instant::now();
    if !prob.equation.is_admissible() {
        return Err(VortexError::PositiveFluxViolation {
            pattern: prob.equation.coefficients.clone(),
        });
    }
    let grid = RadialGrid::new(prob.radius, points, prob.grading)?;
    let omega = resolve_background(&prob.background, &grid)?;
    let m = prob.multiplicity;
    let mf = m as f64;

    let mut warnings = Vec::new();
    let vacuum = prob.equation.vacuum_higgs_squared();
    if let Some(w) = vacuum {
        // Linearization about the vacuum: modes obey (flat) ∇²δ = -μ Ω δ
        // with μ = dP/du; μ > 0 gives oscillatory rather than decaying
        // tails in this sign convention.
        let mu = prob.equation.vortex_polynomial_du(w);
        if mu > 0.0 {
            warnings.push(format!(
                "oscillatory linearization about the vacuum (dP/du = {mu:.3} > 0)"
            ));
        }
    }

    let boundary = match prob.boundary {
        BoundaryCondition::VacuumDecay => {
            let w = vacuum.ok_or_else(|| {
                VortexError::UnsupportedEquation(format!(
                    "{:?} has no vacuum; use a Dirichlet boundary value",
                    prob.equation.coefficients
                ))
            })?;
            BoundaryRow::Dirichlet(0.5 * w.ln() - mf * prob.radius.ln())
        }
        BoundaryCondition::Dirichlet(u_r) => BoundaryRow::Dirichlet(u_r - mf * prob.radius.ln()),
        BoundaryCondition::NeumannZero => {
            // u'(R) = 0 -> v'(R) = -m/R; convert to the stretched slope.
            let gp_end = 1.0 / grid.alpha.last().unwrap().sqrt();
            BoundaryRow::Neumann(-mf / prob.radius * gp_end)
        }
    };

    let disc = Discretization {
        grid: &grid,
        omega: &omega,
        eq: &prob.equation,
        m,
        boundary,
    };

    // Initial profile: vortex-like rise to the boundary value.
    let v_end = match boundary {
        BoundaryRow::Dirichlet(vb) => vb,
        BoundaryRow::Neumann(_) => match vacuum {
            Some(w) => 0.5 * w.ln() - mf * prob.radius.ln(),
            None => 0.0,
        },
    };
    let s = (0.5 * prob.radius).min(1.0);
    let s2 = s * s;
    let r2_end = prob.radius * prob.radius;
    let mut v: Vec<f64> = grid
        .r
        .iter()
        .map(|&r| v_end + mf * ((r2_end + s2) / (r * r + s2)).ln())
        .collect();

    let mut residual = disc.residual(&v);
    let mut res_norm = sup_norm(&residual);
    let mut history = vec![res_norm];
    let mut converged = res_norm < tol;
    let mut iterations = 0;

    while !converged && iterations < MAX_NEWTON_ITERATIONS {
        iterations += 1;
        let (lower, diag, upper) = disc.jacobian(&v);
        let rhs: Vec<f64> = residual.iter().map(|&e| -e).collect();
        let delta = thomas_solve(&lower, &diag, &upper, &rhs);
        if delta.iter().any(|d| !d.is_finite()) {
            warnings.push("singular linearization encountered".into());
            break;
        }

        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..=MAX_HALVINGS {
            let trial: Vec<f64> = v
                .iter()
                .zip(&delta)
                .map(|(&vi, &di)| vi + lambda * di)
                .collect();
            let trial_residual = disc.residual(&trial);
            let trial_norm = sup_norm(&trial_residual);
            if trial_norm < res_norm && trial_norm.is_finite() {
                v = trial;
                residual = trial_residual;
                res_norm = trial_norm;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        history.push(res_norm);
        if !accepted {
            break;
        }
        if res_norm < tol {
            converged = true;
        }
    }

    // Flux over the solved disc: ∫ P(e^{2u}) Ω r dr (trapezoid).
    let w_vals: Vec<f64> = grid
        .r
        .iter()
        .zip(&v)
        .map(|(&r, &vi)| r.powi(2 * m as i32) * (2.0 * vi).exp())
        .collect();
    let mut flux = 0.0;
    for i in 0..grid.len() - 1 {
        let f0 = prob.equation.vortex_polynomial(w_vals[i]) * omega[i] * grid.r[i];
        let f1 = prob.equation.vortex_polynomial(w_vals[i + 1]) * omega[i + 1] * grid.r[i + 1];
        flux += 0.5 * (f0 + f1) * (grid.r[i + 1] - grid.r[i]);
    }

    Ok(RadialSolution {
        equation: prob.equation.clone(),
        multiplicity: m,
        grid,
        omega,
        v,
        report: SolveReport {
            converged,
            iterations,
            residual_sup: res_norm,
            flux,
            residual_history: history,
            warnings,
            wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
        },
    })
}

// ---------------------------------------------------------------------------
// 2D residual evaluation
// ---------------------------------------------------------------------------

/// Pointwise residual `Δu - P(e^{2u})` on sampled fields, with the
/// Laplacian taken against the supplied conformal factor (background or
/// Baptista). Points near the divisor are flagged, not evaluated.
pub fn residual_field(
    equation: &EquationSpec,
    u: &ScalarField,
    omega: &ScalarField,
    divisor: &Divisor,
) -> Result<ScalarField> {
    let mut u = u.clone();
    let excl = if u.exclusion_radius > 0.0 {
        u.exclusion_radius
    } else {
        crate::surface::DEFAULT_EXCLUSION_RADIUS
    };
    for (ix, iy, z) in u.grid.iter_points() {
        if divisor
            .points
            .iter()
            .any(|&(p, _)| (z - p).norm() <= excl)
        {
            let idx = u.grid.index(ix, iy);
            u.flags[idx] = true;
        }
    }
    let lap = laplace_beltrami(omega, &u)?;
    let mut out = lap.clone();
    for i in 0..out.values.len() {
        if out.flags[i] {
            continue;
        }
        let w = (2.0 * u.values[i]).exp();
        out.values[i] = lap.values[i] - equation.vortex_polynomial(w);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Superposition on Baptista backgrounds
// ---------------------------------------------------------------------------

/// The equation governing an added vortex on the Baptista background of a
/// known solution: the constant term `C_0` is replaced by `C_{2n}`.
///
/// Two-term equations map among themselves (Taubes to Taubes, Popov to
/// Popov, Ambjorn-Olesen and Jackiw-Pi to Popov, the mixed quartic
/// patterns to the doubly-positive quartic, Bradlow to Laplace); for
/// anything with two or more higher coefficients no Baptista mapping
/// exists.
pub fn superpose_equation(eq: &EquationSpec) -> Result<(EquationSpec, u32)> {
    let higher: Vec<usize> = eq.nonzero_indices().into_iter().filter(|&n| n > 0).collect();
    let n = match higher.as_slice() {
        [] => 1,
        [k] => *k,
        _ => {
            return Err(VortexError::UnsupportedEquation(format!(
                "{:?} has no Baptista superposition law",
                eq.coefficients
            )))
        }
    };
    let c2n = eq.c(n);
    let mut coeffs = vec![0.0; eq.coefficients.len().max(n + 1)];
    coeffs[0] = c2n;
    coeffs[n] = c2n;
    Ok((EquationSpec::new(coeffs), n as u32))
}

/// Result of adding `k` coincident vortices to a known radial solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuperposeOutcome {
    /// Equation solved for the added field `u_2`.
    pub mapped_equation: EquationSpec,
    /// Baptista order used for the background.
    pub order: u32,
    /// The added field's solve.
    pub addition: RadialSolution,
    /// `v_1 + v_2`, the regular part of the composite field with
    /// multiplicity `m + k`.
    pub composite_v: Vec<f64>,
    /// Sup-norm of the composite's discrete residual in the original
    /// equation (interior rows).
    pub composite_residual_sup: f64,
}

/// Add `k` coincident vortices at the origin to `base` by solving the
/// mapped equation on the Baptista background `Ω_{2n} = Ω_0 e^{2n u_1}`,
/// on the same grid. The composite `u_1 + u_2` satisfies the original
/// equation with multiplicity `m + k`; its discrete residual is computed
/// and reported.
pub fn solve_superposed(
    base: &RadialSolution,
    k: u32,
    tol: f64,
    boundary: Option<BoundaryCondition>,
) -> Result<SuperposeOutcome> {
    let (mapped, n) = superpose_equation(&base.equation)?;
    let m = base.multiplicity;
    // Baptista background on the same grid: Ω_0 r^{2nm} e^{2n v_1}.
    let baptista: Vec<f64> = base
        .grid
        .r
        .iter()
        .zip(&base.v)
        .zip(&base.omega)
        .map(|((&r, &v1), &om)| om * r.powi((2 * n * m) as i32) * (2.0 * n as f64 * v1).exp())
        .collect();

    let boundary = boundary.unwrap_or({
        // The Laplace image has an empty polynomial; pin u_2(R) = 0 there.
        if mapped.is_zero() {
            BoundaryCondition::Dirichlet(0.0)
        } else {
            BoundaryCondition::VacuumDecay
        }
    });
    let prob = RadialProblem {
        equation: mapped.clone(),
        multiplicity: k,
        background: Background::Samples(baptista),
        radius: base.grid.radius,
        boundary,
        grading: base.grid.grading,
    };
    let addition = solve_radial(&prob, base.grid.len(), tol)?;

    let composite_v: Vec<f64> = base
        .v
        .iter()
        .zip(&addition.v)
        .map(|(&a, &b)| a + b)
        .collect();
    let res = discrete_residual(
        &base.grid,
        &composite_v,
        &base.omega,
        &base.equation,
        m + k,
    );
    let composite_residual_sup = res[1..res.len() - 1]
        .iter()
        .fold(0.0f64, |acc, &x| acc.max(x.abs()));

    Ok(SuperposeOutcome {
        mapped_equation: mapped,
        order: n,
        addition,
        composite_v,
        composite_residual_sup,
    })
}

// ---------------------------------------------------------------------------
// Reinterpretation of the two-higher-term equations on their own Baptista
// background
// ---------------------------------------------------------------------------

/// For a solution of `Δu + δ/Ω_0 = C_2 e^{2u} + C_4 e^{4u}`, the same
/// profile satisfies the two-term equation with constant term `-C_2` and
/// coefficient `C_4` on the Baptista background `Ω_2 = Ω_0 e^{2u}`
/// (Chern-Simons becomes Taubes on its own Baptista manifold).
///
/// Returns the sup-norm of the pointwise difference between the original
/// and reinterpreted discrete residuals over interior nodes with
/// `r >= exclusion`.
pub fn reinterpret_on_baptista_check(sol: &RadialSolution, exclusion: f64) -> Result<f64> {
    let eq = &sol.equation;
    if eq.c(0) != 0.0 || eq.c(1) == 0.0 || eq.c(2) == 0.0 || eq.coefficients.len() != 3 {
        return Err(VortexError::UnsupportedEquation(format!(
            "{:?} is not a two-higher-term (C_2, C_4) pattern",
            eq.coefficients
        )));
    }
    let (c2, c4) = (eq.c(1), eq.c(2));
    let w = sol.higgs_squared_values();
    let lap = sol.discrete_laplacian_u();
    let mut worst = 0.0f64;
    for i in 1..sol.grid.len() - 1 {
        if sol.grid.r[i] < exclusion {
            continue;
        }
        let lap_u = lap[i].expect("interior node");
        let r1 = lap_u - (c2 * w[i] + c4 * w[i] * w[i]);
        // Reinterpreted: Δ_{g_2} u - (C_2 + C_4 e^{2u}) with Ω_2 = Ω e^{2u}.
        let r2 = lap_u / w[i] - (c2 + c4 * w[i]);
        worst = worst.max((r2 - r1).abs());
    }
    Ok(worst)
}

// ---------------------------------------------------------------------------
// Constant-term elimination for three-term equations
// ---------------------------------------------------------------------------

/// The substitution `u = u' - (x/2) log Ω_0` with `x K_0 = C_0` removes the
/// constant term from a three-term equation at the price of
/// metric-dependent coefficients `C_2/Ω_0^x` and `C_4/Ω_0^{2x}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantTermTransform {
    pub equation: EquationSpec,
    pub x: f64,
    pub k0: f64,
}

impl ConstantTermTransform {
    pub fn new(equation: EquationSpec, x: f64, k0: f64) -> Result<Self> {
        let nonzero = equation.nonzero_indices();
        if nonzero != vec![0, 1, 2] {
            return Err(VortexError::UnsupportedEquation(format!(
                "{:?} does not have all of C_0, C_2, C_4 switched on",
                equation.coefficients
            )));
        }
        if (x * k0 - equation.c(0)).abs() > 1e-12 * equation.c(0).abs().max(1.0) {
            return Err(VortexError::Precondition(format!(
                "x K_0 = {} does not match C_0 = {}",
                x * k0,
                equation.c(0)
            )));
        }
        Ok(ConstantTermTransform { equation, x, k0 })
    }

    fn omega0(&self, z: Complex64) -> f64 {
        let s = 1.0 + self.k0 * z.norm_sqr();
        4.0 / (s * s)
    }

    /// Metric-dependent coefficients `(C_2/Ω_0^x, C_4/Ω_0^{2x})` of the
    /// transformed equation, in the curved (`Δ_{g_0}`) form.
    pub fn coefficient_fields(&self, z: Complex64) -> (f64, f64) {
        let om = self.omega0(z);
        (
            self.equation.c(1) / om.powf(self.x),
            self.equation.c(2) / om.powf(2.0 * self.x),
        )
    }

    /// Coefficients of the flat form `-4 ∂∂̄ u' = c_2(z) e^{2u'} + c_4(z)
    /// e^{4u'}`: `(C_2 Ω_0^{1-x}, C_4 Ω_0^{1-2x})`.
    pub fn flat_coefficient_fields(&self, z: Complex64) -> (f64, f64) {
        let om = self.omega0(z);
        (
            self.equation.c(1) * om.powf(1.0 - self.x),
            self.equation.c(2) * om.powf(1.0 - 2.0 * self.x),
        )
    }

    /// `u = u' - (x/2) log Ω_0`.
    pub fn substitute(&self, u_prime: f64, z: Complex64) -> f64 {
        u_prime - 0.5 * self.x * self.omega0(z).ln()
    }

    /// Residual of the original equation at a point, given `u` and its
    /// positive Laplacian.
    pub fn residual_original(&self, u: f64, lap_u: f64) -> f64 {
        let w = (2.0 * u).exp();
        lap_u - self.equation.vortex_polynomial(w)
    }

    /// Residual of the transformed equation, given `u'` and its positive
    /// Laplacian.
    pub fn residual_transformed(&self, u_prime: f64, lap_u_prime: f64, z: Complex64) -> f64 {
        let (c2, c4) = self.coefficient_fields(z);
        lap_u_prime - (c2 * (2.0 * u_prime).exp() + c4 * (4.0 * u_prime).exp())
    }

    /// Pointwise equivalence of the two residual forms for a smooth test
    /// field with analytically known positive Laplacian: substituting
    /// `u = u' - (x/2) log Ω_0` shifts the Laplacian by `-x K_0` exactly.
    /// Returns the worst absolute mismatch over the points.
    pub fn verify(
        &self,
        u_prime: impl Fn(Complex64) -> f64,
        lap_u_prime: impl Fn(Complex64) -> f64,
        points: &[Complex64],
    ) -> f64 {
        let mut worst = 0.0f64;
        for &z in points {
            let up = u_prime(z);
            let lap_up = lap_u_prime(z);
            let u = self.substitute(up, z);
            let lap_u = lap_up - self.x * self.k0;
            let r_orig = self.residual_original(u, lap_u);
            let r_tr = self.residual_transformed(up, lap_up, z);
            worst = worst.max((r_orig - r_tr).abs());
        }
        worst
    }
}
