//! Closed-form integrable solutions built from rational maps.
//!
//! For the integrable two-term equation of order `n`,
//! `Δu + δ_D/Ω_0 = -C_0 + C_{2n} e^{2nu}` on the background with
//! `K_0 = n C_0`, a holomorphic map `f = p/q` generates the solution
//!
//! ```text
//! |φ|^2 = e^{2u} = | (1 + n C_0 |z|^2) W(z) / B(z) |^{2/n},
//! W = p'q - pq',          B = |q|^2 + n C_{2n} |p|^2,
//! ```
//!
//! whose zeros sit at the ramification points of `f` (the roots of `W`)
//! with multiplicity equal to the ramification index minus one. The
//! homogeneous form in `(p, q)` stays finite across poles of `f`.
//!
//! `n = 1` covers Taubes, Popov, Ambjorn-Olesen, Jackiw-Pi (`C_0 = 0`) and
//! Bradlow (`C_2 = 0`); `n = 2` the quartic generalizations; larger `n`
//! the infinite order-`n` family.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::catalog::EquationSpec;
use crate::error::{Result, VortexError};
use crate::surface::SurfaceChart;

// ---------------------------------------------------------------------------
// Polynomials
// ---------------------------------------------------------------------------

/// Dense polynomial with complex coefficients, ascending powers.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    /// Build from ascending coefficients; exact trailing zeros are trimmed.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().map_or(false, |c| c.norm() == 0.0) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Polynomial::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// The monomial `z^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![Complex64::ZERO; k + 1];
        coeffs[k] = Complex64::ONE;
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Degree; the zero polynomial and constants report 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::zero();
        }
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![Complex64::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Polynomial::new(coeffs)
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![Complex64::ZERO; len];
        for (i, &a) in self.coeffs.iter().enumerate() {
            coeffs[i] += a;
        }
        for (i, &b) in other.coeffs.iter().enumerate() {
            coeffs[i] -= b;
        }
        Polynomial::new(coeffs)
    }

    /// Coefficients reversed against nominal degree `d` (the `w = 1/z`
    /// substitution with its pole cleared): returns `w^d p(1/w)`.
    pub fn reversed(&self, d: usize) -> Polynomial {
        let mut coeffs = vec![Complex64::ZERO; d + 1];
        for (k, &c) in self.coeffs.iter().enumerate() {
            coeffs[d - k] = c;
        }
        Polynomial::new(coeffs)
    }

    /// Drop trailing coefficients negligible against the largest one;
    /// guards against degree inflation from catastrophic cancellation.
    pub fn trim_relative(&self, eps: f64) -> Polynomial {
        let scale = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let mut coeffs = self.coeffs.clone();
        while coeffs.last().map_or(false, |c| c.norm() <= eps * scale) {
            coeffs.pop();
        }
        Polynomial::new(coeffs)
    }

    /// All complex roots by the Durand-Kerner simultaneous iteration.
    ///
    /// Roots of multiplicity `m` come back as a cluster of radius roughly
    /// `eps^{1/m}`; see [`cluster_roots`] for multiplicity recovery.
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        let deg = self.degree();
        if self.is_zero() || deg == 0 {
            return Ok(Vec::new());
        }
        let lead = self.coeffs[deg];
        let monic: Vec<Complex64> = self.coeffs.iter().map(|&c| c / lead).collect();

        // Cauchy bound on root magnitudes.
        let bound = 1.0 + monic[..deg].iter().map(|c| c.norm()).fold(0.0, f64::max);
        let seed = Complex64::from_polar(1.0, 1.1526);
        let mut zs: Vec<Complex64> = (0..deg)
            .map(|k| bound * 0.7 * seed.powu(k as u32 + 1))
            .collect();

        let eval = |z: Complex64| {
            let mut acc = Complex64::ZERO;
            for &c in monic.iter().rev() {
                acc = acc * z + c;
            }
            acc
        };

        let max_iter = 800;
        for iter in 0..max_iter {
            let mut max_step = 0.0f64;
            for k in 0..deg {
                let mut denom = Complex64::ONE;
                for j in 0..deg {
                    if j != k {
                        denom *= zs[k] - zs[j];
                    }
                }
                if denom.norm() == 0.0 {
                    zs[k] += Complex64::new(1e-8 * (k as f64 + 1.0), 1e-8);
                    continue;
                }
                let step = eval(zs[k]) / denom;
                zs[k] -= step;
                max_step = max_step.max(step.norm() / (1.0 + zs[k].norm()));
            }
            if max_step < 1e-14 && iter > 0 {
                break;
            }
        }

        // Backward-error acceptance: |p(z)| must be small against the
        // coefficient scale at z. Multiple roots stagnate in position but
        // still reach a tiny backward error.
        let mut worst = 0.0f64;
        for &z in &zs {
            let mut scale = 0.0;
            let mut zn = 1.0;
            for c in &monic {
                scale += c.norm().max(1.0) * zn;
                zn *= z.norm();
            }
            worst = worst.max(eval(z).norm() / scale.max(1e-300));
        }
        if worst > 1e-8 {
            return Err(VortexError::RootFindingFailed {
                residual: worst,
                iterations: max_iter,
            });
        }
        Ok(zs)
    }
}

/// Merge near-coincident roots into `(center, multiplicity)` pairs and
/// polish each center with Newton on the `(m-1)`-th derivative of `poly`
/// (a simple root of that derivative), recovering full precision.
pub fn cluster_roots(poly: &Polynomial, roots: &[Complex64]) -> Vec<(Complex64, u32)> {
    let mut clusters: Vec<(Complex64, Vec<Complex64>)> = Vec::new();
    for &z in roots {
        let tol = 1e-6 * z.norm().max(1.0);
        match clusters
            .iter_mut()
            .find(|(center, _)| (z - *center).norm() <= tol)
        {
            Some((center, members)) => {
                members.push(z);
                let n = members.len() as f64;
                *center = members.iter().sum::<Complex64>() / n;
            }
            None => clusters.push((z, vec![z])),
        }
    }

    clusters
        .into_iter()
        .map(|(center, members)| {
            let m = members.len() as u32;
            let mut g = poly.clone();
            for _ in 1..m {
                g = g.derivative();
            }
            let gp = g.derivative();
            let mut c = center;
            for _ in 0..25 {
                let denom = gp.eval(c);
                if denom.norm() == 0.0 {
                    break;
                }
                let step = g.eval(c) / denom;
                let next = c - step;
                if (next - center).norm() > 1e-5 * center.norm().max(1.0) {
                    break;
                }
                c = next;
                if step.norm() <= 1e-16 * (1.0 + c.norm()) {
                    break;
                }
            }
            (c, m)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Rational maps and divisors
// ---------------------------------------------------------------------------

/// Reduced rational map `f(z) = p(z)/q(z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalMap {
    numerator: Polynomial,
    denominator: Polynomial,
}

impl RationalMap {
    /// Construct and validate: `q` nonzero, degree at least one, and no
    /// common root of `p` and `q`.
    pub fn new(numerator: Polynomial, denominator: Polynomial) -> Result<Self> {
        if denominator.is_zero() {
            return Err(VortexError::InvalidMap("denominator is zero".into()));
        }
        let d = numerator.degree().max(denominator.degree());
        if d < 1 || numerator.is_zero() {
            return Err(VortexError::InvalidMap(
                "map must have degree at least one".into(),
            ));
        }
        if denominator.degree() >= 1 {
            for root in denominator.roots()? {
                let scale: f64 = numerator
                    .coeffs()
                    .iter()
                    .enumerate()
                    .map(|(k, c)| c.norm() * root.norm().max(1.0).powi(k as i32))
                    .sum();
                if numerator.eval(root).norm() <= 1e-10 * scale.max(1e-300) {
                    return Err(VortexError::InvalidMap(format!(
                        "numerator and denominator share a root near {root}"
                    )));
                }
            }
        }
        Ok(RationalMap {
            numerator,
            denominator,
        })
    }

    /// Polynomial map `f = p`.
    pub fn polynomial(p: Polynomial) -> Result<Self> {
        RationalMap::new(p, Polynomial::from_real(&[1.0]))
    }

    /// The monomial map `z^k`.
    pub fn monomial(k: usize) -> Self {
        RationalMap {
            numerator: Polynomial::monomial(k),
            denominator: Polynomial::from_real(&[1.0]),
        }
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.denominator
    }

    /// `max(deg p, deg q)`, the degree as a sphere map.
    pub fn degree(&self) -> usize {
        self.numerator.degree().max(self.denominator.degree())
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.numerator.eval(z) / self.denominator.eval(z)
    }

    /// `W = p'q - pq'`, the numerator of `f'`; its roots are the finite
    /// ramification points, counted with multiplicity.
    pub fn wronskian(&self) -> Polynomial {
        self.numerator
            .derivative()
            .mul(&self.denominator)
            .sub(&self.numerator.mul(&self.denominator.derivative()))
            .trim_relative(1e-13)
    }

    /// The map in the `w = 1/z` chart, `f~(w) = f(1/w)`, as a rational map.
    pub fn flipped(&self) -> RationalMap {
        let d = self.degree();
        RationalMap {
            numerator: self.numerator.reversed(d),
            denominator: self.denominator.reversed(d),
        }
    }
}

/// Effective divisor: distinct finite points with multiplicities, plus an
/// optional multiplicity at infinity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Divisor {
    pub points: Vec<(Complex64, u32)>,
    /// Multiplicity at infinity (0 when absent).
    pub infinity: u32,
}

impl Divisor {
    pub fn empty() -> Self {
        Divisor {
            points: Vec::new(),
            infinity: 0,
        }
    }

    /// Total degree including infinity.
    pub fn degree(&self) -> u32 {
        self.points.iter().map(|&(_, m)| m).sum::<u32>() + self.infinity
    }

    pub fn finite_points(&self) -> Vec<Complex64> {
        self.points.iter().map(|&(z, _)| z).collect()
    }
}

/// Ramification divisor of `f`: roots of `W = p'q - pq'` with multiplicity.
///
/// With `include_infinity` the `w = 1/z` chart is accounted for as well;
/// the total degree then equals `2d - 2` (Riemann-Hurwitz on the sphere).
pub fn ramification_divisor(f: &RationalMap, include_infinity: bool) -> Result<Divisor> {
    let w = f.wronskian();
    let raw = w.roots()?;
    let mut points = cluster_roots(&w, &raw);
    points.sort_by(|a, b| {
        (a.0.re, a.0.im)
            .partial_cmp(&(b.0.re, b.0.im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let found: u32 = points.iter().map(|&(_, m)| m).sum();
    let expected = if w.is_zero() { 0 } else { w.degree() as u32 };
    if found != expected {
        return Err(VortexError::RootFindingFailed {
            residual: f64::NAN,
            iterations: 0,
        });
    }
    let infinity = if include_infinity {
        (2 * f.degree() as u32).saturating_sub(2) - found
    } else {
        0
    };
    Ok(Divisor { points, infinity })
}

// ---------------------------------------------------------------------------
// Closed-form solutions
// ---------------------------------------------------------------------------

/// One stereographic side of a closed-form solution.
///
/// All quantities are evaluated homogeneously in `(p, q)` so that poles of
/// `f` never overflow: with `a = alpha + beta |z|^2`,
/// `B = |q|^2 + n C_{2n} |p|^2` and `W` the wronskian,
///
/// ```text
/// Ω_0 = 4/a^2,    e^{2nu} = (a W / B)^2,    Ω_{2n} = 4 W^2 / B^2.
/// ```
///
/// On the principal chart `a = 1 + n C_0 |z|^2`; on the flipped chart
/// (`w = 1/z`, map and wronskian reversed) the factor becomes
/// `a = n C_0 + |w|^2` and the same formulas hold.
#[derive(Debug, Clone)]
pub(crate) struct ChartSide {
    map: RationalMap,
    wronskian: Polynomial,
    alpha: f64,
    beta: f64,
    n: u32,
    c0: f64,
    c2n: f64,
}

impl ChartSide {
    fn chart_factor(&self, z: Complex64) -> f64 {
        self.alpha + self.beta * z.norm_sqr()
    }

    fn b(&self, z: Complex64) -> f64 {
        let p = self.map.numerator().eval(z);
        let q = self.map.denominator().eval(z);
        q.norm_sqr() + self.n as f64 * self.c2n * p.norm_sqr()
    }

    pub(crate) fn omega0(&self, z: Complex64) -> f64 {
        let a = self.chart_factor(z);
        4.0 / (a * a)
    }

    /// `e^{2nu} = (a W / B)^2`.
    pub(crate) fn higgs_2n(&self, z: Complex64) -> f64 {
        let t = self.chart_factor(z) * self.wronskian.eval(z).norm() / self.b(z);
        t * t
    }

    /// `|φ|^2 = |a W / B|^{2/n}`; errors on the pole locus `B = 0`.
    pub(crate) fn higgs_squared(&self, z: Complex64) -> Result<f64> {
        let a = self.chart_factor(z);
        let w = self.wronskian.eval(z).norm();
        let b = self.b(z);
        let scale = self.map.numerator().eval(z).norm_sqr()
            + self.map.denominator().eval(z).norm_sqr();
        if b.abs() <= 1e-14 * scale.max(1e-300) {
            return Err(VortexError::PoleEncountered {
                point: z,
                detail: format!("1 + {} C_{} |f|^2 vanishes", self.n, 2 * self.n),
            });
        }
        Ok((a * w / b).abs().powf(2.0 / self.n as f64))
    }

    /// `Ω_{2n} = Ω_0 e^{2nu} = 4 W^2 / B^2`, smooth across the divisor.
    pub(crate) fn omega_baptista(&self, z: Complex64) -> f64 {
        let t = self.wronskian.eval(z).norm() / self.b(z);
        4.0 * t * t
    }

    /// Flux density `P(e^{2u}) Ω_0 = (-C_0 + C_{2n} e^{2nu}) Ω_0`.
    pub(crate) fn flux_density(&self, z: Complex64) -> f64 {
        (-self.c0 + self.c2n * self.higgs_2n(z)) * self.omega0(z)
    }

    /// `Ω_{2m} = Ω_0 |φ|^{2m}` for an arbitrary Baptista order `m`.
    pub(crate) fn omega_baptista_order(&self, z: Complex64, m: u32) -> Result<f64> {
        if m == self.n {
            return Ok(self.omega_baptista(z));
        }
        Ok(self.omega0(z) * self.higgs_squared(z)?.powi(m as i32))
    }
}

/// Closed-form solution of the integrable order-`n` equation generated by
/// a rational map.
#[derive(Debug, Clone)]
pub struct ClosedFormSolution {
    equation: EquationSpec,
    map: RationalMap,
    n: u32,
    chart: SurfaceChart,
    divisor: Divisor,
    side: ChartSide,
}

impl ClosedFormSolution {
    /// Build a solution for a canonical integrable equation. The chart
    /// curvature is forced to `K_0 = n C_0` rather than taken on trust.
    pub fn new(equation: EquationSpec, map: RationalMap, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(VortexError::Precondition("order n must be >= 1".into()));
        }
        if !equation.is_admissible() {
            return Err(VortexError::PositiveFluxViolation {
                pattern: equation.coefficients.clone(),
            });
        }
        let higher: Vec<usize> = equation
            .nonzero_indices()
            .into_iter()
            .filter(|&k| k > 0)
            .collect();
        let ok = match higher.as_slice() {
            [] => true,
            [k] => *k == n as usize,
            _ => false,
        };
        if !ok {
            return Err(VortexError::UnsupportedEquation(format!(
                "{:?} is not an integrable order-{} pattern",
                equation.coefficients, n
            )));
        }
        let c0 = equation.c(0);
        let c2n = equation.c(n as usize);
        if (c0 != 0.0 && c0.abs() != 1.0) || (c2n != 0.0 && c2n.abs() != 1.0) {
            return Err(VortexError::Precondition(
                "closed forms expect canonical (0/±1) coefficients; normalize first".into(),
            ));
        }
        let chart = SurfaceChart::new(n as f64 * c0);
        let divisor = ramification_divisor(&map, false)?;
        let side = ChartSide {
            wronskian: map.wronskian(),
            map: map.clone(),
            alpha: 1.0,
            beta: n as f64 * c0,
            n,
            c0,
            c2n,
        };
        Ok(ClosedFormSolution {
            equation,
            map,
            n,
            chart,
            divisor,
            side,
        })
    }

    /// Convenience: order-`n` family member with signs `(c0, c2n)`.
    pub fn order_n(c0: i8, c2n: i8, n: u32, map: RationalMap) -> Result<Self> {
        let mut coeffs = vec![0.0; n as usize + 1];
        coeffs[0] = c0 as f64;
        coeffs[n as usize] = c2n as f64;
        ClosedFormSolution::new(EquationSpec::new(coeffs), map, n)
    }

    pub fn equation(&self) -> &EquationSpec {
        &self.equation
    }

    pub fn map(&self) -> &RationalMap {
        &self.map
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    pub fn chart(&self) -> SurfaceChart {
        self.chart
    }

    pub fn divisor(&self) -> &Divisor {
        &self.divisor
    }

    /// Divisor including the ramification at infinity (sphere counting).
    pub fn divisor_with_infinity(&self) -> Result<Divisor> {
        ramification_divisor(&self.map, true)
    }

    fn check_in_chart(&self, z: Complex64) -> Result<()> {
        if !self.chart.contains(z) {
            return Err(VortexError::OutOfChart {
                point: z,
                valid_radius: self.chart.valid_radius(),
            });
        }
        Ok(())
    }

    /// `|φ|^2 = e^{2u}` at `z`.
    pub fn higgs_squared(&self, z: Complex64) -> Result<f64> {
        self.check_in_chart(z)?;
        self.side.higgs_squared(z)
    }

    /// `u = log|φ|`; `-inf` exactly on the divisor.
    pub fn u(&self, z: Complex64) -> Result<f64> {
        Ok(0.5 * self.higgs_squared(z)?.ln())
    }

    /// Background factor `Ω_0(z)`.
    pub fn omega0(&self, z: Complex64) -> Result<f64> {
        self.check_in_chart(z)?;
        Ok(self.side.omega0(z))
    }

    /// Own-order Baptista factor `Ω_{2n}(z)`, smooth across the divisor.
    pub fn omega_baptista(&self, z: Complex64) -> Result<f64> {
        self.check_in_chart(z)?;
        Ok(self.side.omega_baptista(z))
    }

    /// `Ω_{2m} = Ω_0 |φ|^{2m}` for any order `m`.
    pub fn omega_baptista_order(&self, z: Complex64, m: u32) -> Result<f64> {
        self.check_in_chart(z)?;
        self.side.omega_baptista_order(z, m)
    }

    /// Exact positive Laplacian `Δu` away from the divisor, from the closed
    /// form of `∂_z ∂_z̄ u`.
    pub fn laplacian_u(&self, z: Complex64) -> Result<f64> {
        self.check_in_chart(z)?;
        let a = 1.0 + self.n as f64 * self.side.c0 * z.norm_sqr();
        let b = self.side.b(z);
        let w2 = self.side.wronskian.eval(z).norm_sqr();
        let ddbar = self.side.c0 / (a * a) - self.side.c2n * w2 / (b * b);
        Ok(-(a * a) * ddbar)
    }

    /// Exact residual `Δu - P(e^{2u})` away from the divisor; vanishes to
    /// rounding wherever the solution is defined.
    pub fn residual_analytic(&self, z: Complex64) -> Result<f64> {
        let lap = self.laplacian_u(z)?;
        let w = self.higgs_squared(z)?;
        Ok(lap - self.equation.vortex_polynomial(w))
    }

    /// View of the `w = 1/z` chart side (map and wronskian reversed).
    pub(crate) fn flipped_side(&self) -> ChartSide {
        let flipped = self.map.flipped();
        ChartSide {
            wronskian: flipped.wronskian(),
            map: flipped,
            alpha: self.n as f64 * self.side.c0,
            beta: 1.0,
            n: self.n,
            c0: self.side.c0,
            c2n: self.side.c2n,
        }
    }

    pub(crate) fn side(&self) -> &ChartSide {
        &self.side
    }
}

/// Bradlow solution on the hyperbolic disc: `C_2 := 0` in the `n = 1`
/// closed form, `e^{2u} = (1 - |z|^2)^2 |f'|^2`.
pub fn set_c2_zero_bradlow(map: RationalMap) -> Result<ClosedFormSolution> {
    ClosedFormSolution::new(EquationSpec::new(vec![-1.0, 0.0]), map, 1)
}

// ---------------------------------------------------------------------------
// Laplace vortices
// ---------------------------------------------------------------------------

/// Superposition of logarithmic charges, `u = Σ c_i log|z - z_i|`,
/// harmonic away from the charge points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaplaceSolution {
    pub charges: Vec<(Complex64, f64)>,
}

/// Build a Laplace-vortex solution from positive charges.
pub fn laplace_solution(charges: Vec<(Complex64, f64)>) -> Result<LaplaceSolution> {
    if charges.iter().any(|&(_, c)| c <= 0.0) {
        return Err(VortexError::Precondition(
            "Laplace vortex charges must be positive".into(),
        ));
    }
    Ok(LaplaceSolution { charges })
}

impl LaplaceSolution {
    pub fn u(&self, z: Complex64) -> f64 {
        self.charges
            .iter()
            .map(|&(p, c)| c * (z - p).norm().ln())
            .sum()
    }
}

// ---------------------------------------------------------------------------
// Singular backgrounds
// ---------------------------------------------------------------------------

/// Background metric, singular at the ramification points of `f`, on which
/// the pair `(u, Ω_0)` solves the two-term equation in `e^{2u}`, `e^{4u}`:
///
/// ```text
/// Ω_0 = 4 (1 + C_4|f|^2)^2 / (1 - C_2|z|^2)^4 · |f'|^{-2},
/// e^{2u} = (1 - C_2|z|^2)^2 / (1 + C_4|f|^2)^2 · |f'|^2.
/// ```
///
/// The construction tunes the Baptista factor `Ω_2 = Ω_0 e^{2u}` to the
/// constant-curvature `4/(1 - C_2|z|^2)^2`, which integrates the equation
/// at the price of metric singularities where `f' = 0`.
#[derive(Debug, Clone)]
pub struct SingularBackground {
    map: RationalMap,
    wronskian: Polynomial,
    c2: f64,
    c4: f64,
}

impl SingularBackground {
    /// `(c2, c4)` must be an admissible two-term sign pattern:
    /// `(+1,-1)`, `(-1,+1)` or `(+1,+1)`.
    pub fn new(map: RationalMap, c2: f64, c4: f64) -> Result<Self> {
        if c2.abs() != 1.0 || c4.abs() != 1.0 {
            return Err(VortexError::Precondition(
                "singular background expects unit coefficients".into(),
            ));
        }
        let spec = EquationSpec::new(vec![0.0, c2, c4]);
        if !spec.is_admissible() {
            return Err(VortexError::PositiveFluxViolation {
                pattern: spec.coefficients,
            });
        }
        Ok(SingularBackground {
            wronskian: map.wronskian(),
            map,
            c2,
            c4,
        })
    }

    pub fn equation(&self) -> EquationSpec {
        EquationSpec::new(vec![0.0, self.c2, self.c4])
    }

    pub fn map(&self) -> &RationalMap {
        &self.map
    }

    /// The tuned Baptista factor lives on the unit disc when `C_2 = +1`.
    pub fn valid_radius(&self) -> f64 {
        if self.c2 > 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    }

    fn pieces(&self, z: Complex64) -> (f64, f64, f64) {
        let d = 1.0 - self.c2 * z.norm_sqr();
        let w2 = self.wronskian.eval(z).norm_sqr();
        let p = self.map.numerator().eval(z);
        let q = self.map.denominator().eval(z);
        let b4 = q.norm_sqr() + self.c4 * p.norm_sqr();
        (d, w2, b4)
    }

    /// The singular conformal factor; errors where it diverges (at the
    /// ramification points of the generating map).
    pub fn omega0(&self, z: Complex64) -> Result<f64> {
        if z.norm() >= self.valid_radius() {
            return Err(VortexError::OutOfChart {
                point: z,
                valid_radius: self.valid_radius(),
            });
        }
        let (d, w2, b4) = self.pieces(z);
        let scale = self.map.numerator().eval(z).norm_sqr()
            + self.map.denominator().eval(z).norm_sqr();
        if w2 <= 1e-28 * scale.max(1e-300) {
            return Err(VortexError::DivergentPoint {
                point: z,
                detail: "ramification point of the generating map".into(),
            });
        }
        Ok(4.0 * b4 * b4 / (d.powi(4) * w2))
    }

    /// `e^{2u} = (1 - C_2|z|^2)^2 W^2 / B_4^2`.
    pub fn higgs_squared(&self, z: Complex64) -> f64 {
        let (d, w2, b4) = self.pieces(z);
        d * d * w2 / (b4 * b4)
    }

    /// Exact residual of `Δu = C_2 e^{2u} + C_4 e^{4u}` with the singular
    /// `Ω_0`, away from ramification points.
    pub fn residual_analytic(&self, z: Complex64) -> Result<f64> {
        let omega0 = self.omega0(z)?;
        let (d, w2, b4) = self.pieces(z);
        let ddbar_u = -self.c2 / (d * d) - self.c4 * w2 / (b4 * b4);
        let lap = -4.0 / omega0 * ddbar_u;
        let e2u = self.higgs_squared(z);
        Ok(lap - (self.c2 * e2u + self.c4 * e2u * e2u))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn roots_of_quadratic_match_formula() {
        // z^2 - 3z + 2 = (z-1)(z-2)
        let p = Polynomial::from_real(&[2.0, -3.0, 1.0]);
        let mut roots = p.roots().unwrap();
        roots.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((roots[0] - c(1.0, 0.0)).norm() < 1e-12);
        assert!((roots[1] - c(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn roots_complex_pair() {
        let p = Polynomial::from_real(&[1.0, 0.0, 1.0]); // z^2 + 1
        let roots = p.roots().unwrap();
        assert_eq!(roots.len(), 2);
        for r in &roots {
            assert!(r.re.abs() < 1e-12);
            assert!((r.im.abs() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn clustered_double_root_is_polished() {
        // (z - 0.5)^2 (z + 2) = z^3 + z^2 - 1.75 z + 0.5
        let p = Polynomial::from_real(&[0.5, -1.75, 1.0, 1.0]);
        let roots = p.roots().unwrap();
        let clusters = cluster_roots(&p, &roots);
        let double = clusters.iter().find(|(_, m)| *m == 2).expect("double root");
        assert!((double.0 - c(0.5, 0.0)).norm() < 1e-12, "{double:?}");
    }

    #[test]
    fn ramification_of_square_map() {
        let f = RationalMap::monomial(2);
        let div = ramification_divisor(&f, false).unwrap();
        assert_eq!(div.points.len(), 1);
        assert!(div.points[0].0.norm() < 1e-12);
        assert_eq!(div.points[0].1, 1);
        assert_eq!(div.infinity, 0);
    }

    #[test]
    fn ramification_of_cubic_minus_linear() {
        // f = z^3 - 3z, f' = 3z^2 - 3: ramification at ±1 (quadratic
        // formula oracle).
        let f = RationalMap::polynomial(Polynomial::from_real(&[0.0, -3.0, 0.0, 1.0])).unwrap();
        let div = ramification_divisor(&f, false).unwrap();
        assert_eq!(div.points.len(), 2);
        let pts = div.finite_points();
        assert!((pts[0] - c(-1.0, 0.0)).norm() < 1e-12);
        assert!((pts[1] - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn ramification_with_infinity_matches_flipped_chart() {
        // Oracle: flip to w = 1/z by hand, f~ = w^{-2} has wronskian -2w,
        // a simple zero at w = 0. The sphere total is 2d - 2 = 2.
        let f = RationalMap::monomial(2);
        let div = ramification_divisor(&f, true).unwrap();
        assert_eq!(div.degree(), 2);
        assert_eq!(div.infinity, 1);
        let wf = f.flipped().wronskian();
        let at_zero = wf.roots().unwrap().iter().filter(|r| r.norm() < 1e-10).count();
        assert_eq!(at_zero as u32, div.infinity);
    }

    #[test]
    fn ramification_of_cubic_has_double_point() {
        // f = z^3: W = 3z^2, double ramification at the origin.
        let f = RationalMap::monomial(3);
        let div = ramification_divisor(&f, true).unwrap();
        assert_eq!(div.points.len(), 1);
        assert_eq!(div.points[0].1, 2);
        assert!(div.points[0].0.norm() < 1e-9);
        assert_eq!(div.degree(), 4); // 2d - 2
    }

    #[test]
    fn reduced_form_is_enforced() {
        // (z^2 - 1)/(z - 1) shares the root z = 1
        let p = Polynomial::from_real(&[-1.0, 0.0, 1.0]);
        let q = Polynomial::from_real(&[-1.0, 1.0]);
        assert!(matches!(
            RationalMap::new(p, q),
            Err(VortexError::InvalidMap(_))
        ));
    }

    #[test]
    fn taubes_identity_map_is_vacuum() {
        let sol = ClosedFormSolution::order_n(-1, -1, 1, RationalMap::monomial(1)).unwrap();
        for z in [c(0.0, 0.0), c(0.3, -0.2), c(0.0, 0.9)] {
            let v = sol.higgs_squared(z).unwrap();
            assert!((v - 1.0).abs() < 1e-14, "{z}: {v}");
        }
    }

    #[test]
    fn jackiw_pi_square_map_value() {
        // |φ|^2 = |f'|^2/(1+|f|^2)^2 at z = 1: 4/4 = 1
        let sol = ClosedFormSolution::order_n(0, 1, 1, RationalMap::monomial(2)).unwrap();
        let v = sol.higgs_squared(c(1.0, 0.0)).unwrap();
        assert!((v - 1.0).abs() < 1e-14, "{v}");
    }

    #[test]
    fn order_two_vanishes_at_ramification_point() {
        let sol = ClosedFormSolution::order_n(-1, 1, 2, RationalMap::monomial(2)).unwrap();
        assert_eq!(sol.higgs_squared(c(0.0, 0.0)).unwrap(), 0.0);
    }

    #[test]
    fn bradlow_closed_form_values() {
        let sol = set_c2_zero_bradlow(RationalMap::monomial(2)).unwrap();
        assert_eq!(sol.higgs_squared(c(0.0, 0.0)).unwrap(), 0.0);
        // (1 - 0.25)^2 |2 · 0.5|^2 = 0.5625
        let v = sol.higgs_squared(c(0.5, 0.0)).unwrap();
        assert!((v - 0.5625).abs() < 1e-14, "{v}");
    }

    #[test]
    fn closed_form_residual_vanishes_analytically() {
        let cases: Vec<ClosedFormSolution> = vec![
            ClosedFormSolution::order_n(-1, -1, 1, RationalMap::monomial(2)).unwrap(),
            ClosedFormSolution::order_n(1, 1, 1, RationalMap::monomial(2)).unwrap(),
            ClosedFormSolution::order_n(-1, 1, 1, RationalMap::monomial(3)).unwrap(),
            ClosedFormSolution::order_n(0, 1, 1, RationalMap::monomial(2)).unwrap(),
            ClosedFormSolution::order_n(-1, 1, 2, RationalMap::monomial(2)).unwrap(),
            ClosedFormSolution::order_n(0, 1, 2, RationalMap::monomial(3)).unwrap(),
            ClosedFormSolution::order_n(-1, 1, 3, RationalMap::monomial(2)).unwrap(),
        ];
        for sol in &cases {
            let rmax = (0.8 * sol.chart().valid_radius()).min(1.3);
            for k in 0..24 {
                let th = 0.26 * k as f64;
                let rad = rmax * (0.2 + 0.8 * k as f64 / 24.0);
                let z = c(rad * th.cos(), rad * th.sin());
                if sol.divisor().points.iter().any(|&(p, _)| (z - p).norm() < 0.1) {
                    continue;
                }
                let r = sol.residual_analytic(z).unwrap();
                assert!(r.abs() < 1e-10, "{:?} at {z}: {r}", sol.equation());
            }
        }
    }

    #[test]
    fn zero_set_matches_divisor() {
        let sol = ClosedFormSolution::order_n(-1, -1, 1, RationalMap::monomial(3)).unwrap();
        for &(p, _) in &sol.divisor().points {
            let near = sol.higgs_squared(p + c(1e-6, 0.0)).unwrap();
            assert!(near < 1e-10, "{near}");
        }
        assert!(sol.higgs_squared(c(0.4, 0.3)).unwrap() > 1e-6);
    }

    #[test]
    fn local_zero_order_from_log_log_slope() {
        // |φ|^2 ~ r^{2 N_k} near a multiplicity-N_k zero
        let sol = ClosedFormSolution::order_n(-1, -1, 1, RationalMap::monomial(3)).unwrap();
        let nk = sol.divisor().points[0].1 as f64; // 2
        let radii: Vec<f64> = (0..8).map(|i| 1e-4 * 10f64.powf(i as f64 * 2.0 / 7.0)).collect();
        let lx: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
        let ly: Vec<f64> = radii
            .iter()
            .map(|&r| sol.higgs_squared(c(r, 0.0)).unwrap().ln())
            .collect();
        let mx = lx.iter().sum::<f64>() / lx.len() as f64;
        let my = ly.iter().sum::<f64>() / ly.len() as f64;
        let mut num = 0.0;
        let mut den = 0.0;
        for i in 0..lx.len() {
            num += (lx[i] - mx) * (ly[i] - my);
            den += (lx[i] - mx) * (lx[i] - mx);
        }
        let slope = num / den;
        assert!((slope - 2.0 * nk).abs() < 0.01, "slope {slope}");
    }

    #[test]
    fn phase_rotation_of_map_changes_nothing() {
        let base = RationalMap::monomial(2);
        let rot = RationalMap::polynomial(Polynomial::new(vec![
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::from_polar(1.0, 1.234),
        ]))
        .unwrap();
        let a = ClosedFormSolution::order_n(1, 1, 1, base).unwrap();
        let b = ClosedFormSolution::order_n(1, 1, 1, rot).unwrap();
        for z in [c(0.3, 0.2), c(-0.5, 0.55), c(1.2, -0.7)] {
            let va = a.higgs_squared(z).unwrap();
            let vb = b.higgs_squared(z).unwrap();
            assert!((va - vb).abs() <= 1e-14 * va.max(1.0), "{va} vs {vb}");
        }
    }

    #[test]
    fn laplace_solution_values_and_harmonicity() {
        let sol = laplace_solution(vec![(c(0.0, 0.0), 1.0)]).unwrap();
        let e = std::f64::consts::E;
        assert!((sol.u(c(e, 0.0)) - 1.0).abs() < 1e-14);
        // harmonic away from charges
        let h = 1e-3;
        let z = c(0.7, 0.4);
        let lap = (sol.u(z + c(h, 0.0)) + sol.u(z - c(h, 0.0)) + sol.u(z + c(0.0, h))
            + sol.u(z - c(0.0, h))
            - 4.0 * sol.u(z))
            / (h * h);
        assert!(lap.abs() < 1e-5, "{lap}");
        // superposition is additive
        let two = laplace_solution(vec![(c(0.0, 0.0), 1.0), (c(1.0, 0.0), 2.0)]).unwrap();
        let sa = laplace_solution(vec![(c(0.0, 0.0), 1.0)]).unwrap();
        let sb = laplace_solution(vec![(c(1.0, 0.0), 2.0)]).unwrap();
        let z = c(0.3, -0.8);
        assert!((two.u(z) - sa.u(z) - sb.u(z)).abs() < 1e-14);
    }

    #[test]
    fn laplace_solution_rejects_nonpositive_charges() {
        assert!(laplace_solution(vec![(c(0.0, 0.0), -1.0)]).is_err());
        assert!(laplace_solution(vec![(c(0.0, 0.0), 0.0)]).is_err());
    }

    #[test]
    fn singular_background_chern_simons_value() {
        let bg = SingularBackground::new(RationalMap::monomial(2), 1.0, -1.0).unwrap();
        // 4 (1 - 0.0625)^2 / 0.75^4 / |f'(0.5)|^2 = 100/9
        let v = bg.omega0(c(0.5, 0.0)).unwrap();
        assert!((v - 100.0 / 9.0).abs() < 1e-12, "{v}");
    }

    #[test]
    fn singular_background_diverges_at_ramification() {
        let bg = SingularBackground::new(RationalMap::monomial(2), 1.0, -1.0).unwrap();
        assert!(matches!(
            bg.omega0(c(0.0, 0.0)),
            Err(VortexError::DivergentPoint { .. })
        ));
        let near = bg.omega0(c(1e-3, 0.0)).unwrap();
        let far = bg.omega0(c(0.3, 0.0)).unwrap();
        assert!(near > 1e4 * far, "near {near}, far {far}");
    }

    #[test]
    fn singular_background_residual_vanishes() {
        for (c2, c4) in [(1.0, -1.0), (-1.0, 1.0), (1.0, 1.0)] {
            let bg = SingularBackground::new(RationalMap::monomial(2), c2, c4).unwrap();
            for z in [c(0.3, 0.1), c(0.5, -0.4), c(0.05, 0.6)] {
                let r = bg.residual_analytic(z).unwrap();
                assert!(r.abs() < 1e-10, "({c2},{c4}) at {z}: {r}");
            }
        }
    }

    #[test]
    fn singular_background_rejects_double_negative() {
        assert!(SingularBackground::new(RationalMap::monomial(2), -1.0, -1.0).is_err());
    }

    #[test]
    fn order_pairing_is_enforced() {
        // C_4 nonzero demands n = 2, not n = 1
        let spec = EquationSpec::new(vec![-1.0, 0.0, 1.0]);
        assert!(ClosedFormSolution::new(spec.clone(), RationalMap::monomial(2), 1).is_err());
        let sol = ClosedFormSolution::new(spec, RationalMap::monomial(2), 2).unwrap();
        assert_eq!(sol.chart().curvature, -2.0);
    }

    #[test]
    fn taubes_pole_ring_is_surfaced() {
        // f = z^3 - 3z pushes |f| through 1 inside the disc; on the ring
        // the solution formula has a pole.
        let f = RationalMap::polynomial(Polynomial::from_real(&[0.0, -3.0, 0.0, 1.0])).unwrap();
        let sol = ClosedFormSolution::order_n(-1, -1, 1, f).unwrap();
        // r^3 - 3r = -1 near r ~ 0.347
        let mut lo = 0.3;
        let mut hi = 0.4;
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if mid * mid * mid - 3.0 * mid + 1.0 > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let r = 0.5 * (lo + hi);
        match sol.higgs_squared(c(r, 0.0)) {
            Err(VortexError::PoleEncountered { .. }) => {}
            Ok(v) => assert!(v > 1e10, "near-pole value should blow up, got {v}"),
            Err(e) => panic!("unexpected error {e}"),
        }
        // and the equation still holds on both sides of the ring
        for rr in [r - 0.05, r + 0.05] {
            let res = sol.residual_analytic(c(rr, 0.0)).unwrap();
            assert!(res.abs() < 1e-9, "at r={rr}: {res}");
        }
    }
}
