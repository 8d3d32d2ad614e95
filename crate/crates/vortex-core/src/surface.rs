//! Constant-curvature background geometry and finite-difference operators.
//!
//! Conventions used throughout the crate:
//!
//! - the background conformal factor is `Ω_0(z) = 4 / (1 + K_0 |z|^2)^2`;
//! - the Laplacian is the *positive* (Hodge) one,
//!   `Δ u = -(4/Ω) ∂_z ∂_z̄ u = -(u_xx + u_yy)/Ω`;
//! - the Gauss curvature of a conformal factor `Ω` is
//!   `K = -(2/Ω) ∂_z ∂_z̄ log Ω`;
//! - the order-`n` Baptista factor is `Ω_{2n} = Ω_0 e^{2nu}`, degenerate at
//!   the vortex zeros for `n > 0`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, VortexError};

/// Which model surface a chart covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChartKind {
    /// Flat plane, `K_0 = 0`.
    Plane,
    /// Poincaré disc of radius `1/sqrt(-K_0)`, `K_0 < 0`.
    Disc,
    /// Stereographic chart of the round sphere, `K_0 > 0`.
    SphereChart,
}

/// Constant-curvature background chart.
///
/// For `K_0 < 0` the chart is only valid strictly inside the disc of radius
/// `1/sqrt(|K_0|)`; for `K_0 >= 0` the whole plane is admissible (the sphere
/// chart misses a single point at infinity, handled by a second chart where
/// global integrals are needed).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceChart {
    pub curvature: f64,
    pub kind: ChartKind,
}

impl SurfaceChart {
    pub fn new(curvature: f64) -> Self {
        let kind = if curvature > 0.0 {
            ChartKind::SphereChart
        } else if curvature < 0.0 {
            ChartKind::Disc
        } else {
            ChartKind::Plane
        };
        SurfaceChart { curvature, kind }
    }

    pub fn flat() -> Self {
        Self::new(0.0)
    }

    /// Radius of validity; infinite for `K_0 >= 0`.
    pub fn valid_radius(&self) -> f64 {
        if self.curvature < 0.0 {
            1.0 / (-self.curvature).sqrt()
        } else {
            f64::INFINITY
        }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.norm() < self.valid_radius()
    }

    /// `Ω_0(z) = 4 / (1 + K_0 |z|^2)^2`.
    pub fn conformal_factor(&self, z: Complex64) -> Result<f64> {
        if !self.contains(z) {
            return Err(VortexError::OutOfChart {
                point: z,
                valid_radius: self.valid_radius(),
            });
        }
        let s = 1.0 + self.curvature * z.norm_sqr();
        Ok(4.0 / (s * s))
    }

    /// Radial form of the conformal factor, `r >= 0`.
    pub fn conformal_factor_radial(&self, r: f64) -> Result<f64> {
        self.conformal_factor(Complex64::new(r, 0.0))
    }
}

/// Order of a Baptista rescaling, `Ω_{2n} = Ω_0 e^{2nu}`; `n = 0` is the
/// background itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaptistaOrder(pub u32);

/// Structured Cartesian sampling grid, row-major in `y` then `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x0: f64,
    pub y0: f64,
    pub nx: usize,
    pub ny: usize,
    /// Uniform spacing in both directions.
    pub h: f64,
}

impl GridSpec {
    /// Square patch of `(2*half + 1)^2` nodes centered on `center`.
    pub fn centered(center: Complex64, half: usize, h: f64) -> Self {
        let n = 2 * half + 1;
        GridSpec {
            x0: center.re - half as f64 * h,
            y0: center.im - half as f64 * h,
            nx: n,
            ny: n,
            h,
        }
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn point(&self, ix: usize, iy: usize) -> Complex64 {
        Complex64::new(
            self.x0 + ix as f64 * self.h,
            self.y0 + iy as f64 * self.h,
        )
    }

    pub fn index(&self, ix: usize, iy: usize) -> usize {
        iy * self.nx + ix
    }

    pub fn iter_points(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        let nx = self.nx;
        (0..self.ny).flat_map(move |iy| (0..nx).map(move |ix| (ix, iy, self.point(ix, iy))))
    }

    /// Largest distance from the chart origin to any grid node.
    fn max_radius(&self) -> f64 {
        let corners = [
            self.point(0, 0),
            self.point(self.nx - 1, 0),
            self.point(0, self.ny - 1),
            self.point(self.nx - 1, self.ny - 1),
        ];
        corners.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Real scalar field sampled on a structured grid inside a chart.
///
/// Nodes close to a divisor point (within `exclusion_radius`) or carrying a
/// non-finite sample are flagged; flagged nodes are skipped by derivative
/// operators and by sup-norms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarField {
    pub grid: GridSpec,
    pub values: Vec<f64>,
    pub flags: Vec<bool>,
    pub chart: SurfaceChart,
    pub exclusion_radius: f64,
}

/// Default exclusion radius around divisor points, in chart units.
pub const DEFAULT_EXCLUSION_RADIUS: f64 = 0.05;

impl ScalarField {
    /// Sample `f` on `grid`, flagging nodes near `excluded_points` and nodes
    /// where `f` is not finite. Every node must lie inside the chart.
    pub fn sample(
        chart: SurfaceChart,
        grid: GridSpec,
        excluded_points: &[Complex64],
        exclusion_radius: f64,
        mut f: impl FnMut(Complex64) -> f64,
    ) -> Result<Self> {
        if grid.max_radius() >= chart.valid_radius() {
            return Err(VortexError::OutOfChart {
                point: Complex64::new(grid.max_radius(), 0.0),
                valid_radius: chart.valid_radius(),
            });
        }
        let mut values = Vec::with_capacity(grid.len());
        let mut flags = Vec::with_capacity(grid.len());
        for (_, _, z) in grid.iter_points() {
            let near = excluded_points
                .iter()
                .any(|&p| (z - p).norm() <= exclusion_radius);
            let v = f(z);
            values.push(v);
            flags.push(near || !v.is_finite());
        }
        Ok(ScalarField {
            grid,
            values,
            flags,
            chart,
            exclusion_radius,
        })
    }

    pub fn value(&self, ix: usize, iy: usize) -> f64 {
        self.values[self.grid.index(ix, iy)]
    }

    pub fn flagged(&self, ix: usize, iy: usize) -> bool {
        self.flags[self.grid.index(ix, iy)]
    }

    /// Sup-norm over unflagged nodes; `None` when every node is flagged.
    pub fn sup_norm(&self) -> Option<f64> {
        self.values
            .iter()
            .zip(&self.flags)
            .filter(|(_, &fl)| !fl)
            .map(|(v, _)| v.abs())
            .fold(None, |acc, v| Some(acc.map_or(v, |m: f64| m.max(v))))
    }

    /// Pointwise map, keeping grid and flags.
    pub fn map(&self, mut f: impl FnMut(f64) -> f64) -> ScalarField {
        let mut out = self.clone();
        for v in &mut out.values {
            *v = f(*v);
        }
        out
    }

    fn check_same_grid(&self, other: &ScalarField) -> Result<()> {
        if self.grid != other.grid {
            return Err(VortexError::GridMismatch(format!(
                "{:?} vs {:?}",
                self.grid, other.grid
            )));
        }
        Ok(())
    }
}

/// `Ω_0` sampled on a grid.
pub fn conformal_factor_field(chart: SurfaceChart, grid: GridSpec) -> Result<ScalarField> {
    ScalarField::sample(chart, grid, &[], 0.0, |z| {
        chart.conformal_factor(z).unwrap_or(f64::NAN)
    })
}

/// Baptista factor `Ω_{2n} = Ω_0 e^{2nu}` from a sampled `u`.
///
/// `n = 0` returns `Ω_0` bit-exactly.
pub fn baptista_factor(u: &ScalarField, n: BaptistaOrder) -> Result<ScalarField> {
    let omega0 = conformal_factor_field(u.chart, u.grid)?;
    if n.0 == 0 {
        return Ok(omega0);
    }
    let mut out = u.clone();
    for i in 0..out.values.len() {
        let v = omega0.values[i] * (2.0 * n.0 as f64 * u.values[i]).exp();
        out.values[i] = v;
        out.flags[i] = out.flags[i] || !v.is_finite();
    }
    Ok(out)
}

/// Margin (in nodes) kept away from the grid boundary and from flagged
/// nodes when applying second-difference stencils.
const STENCIL_MARGIN: usize = 2;

/// Apply `-(g_xx + g_yy) / W` with 5-point central differences, where `g`
/// is `transform` applied to `field` and `W` is a per-node weight.
///
/// Output nodes are flagged if they sit within [`STENCIL_MARGIN`] nodes of
/// the grid boundary or of any flagged input node.
fn stencil_apply(
    field: &ScalarField,
    weight: impl Fn(usize) -> f64,
    transform: impl Fn(f64) -> f64,
) -> ScalarField {
    let g = &field.grid;
    let h2 = g.h * g.h;
    let mut out = field.clone();
    // Dilate input flags by the stencil margin.
    let mut blocked = vec![false; g.len()];
    for iy in 0..g.ny {
        for ix in 0..g.nx {
            if field.flagged(ix, iy) {
                let m = STENCIL_MARGIN as isize;
                for dy in -m..=m {
                    for dx in -m..=m {
                        let jx = ix as isize + dx;
                        let jy = iy as isize + dy;
                        if jx >= 0 && jy >= 0 && (jx as usize) < g.nx && (jy as usize) < g.ny {
                            blocked[g.index(jx as usize, jy as usize)] = true;
                        }
                    }
                }
            }
        }
    }
    for iy in 0..g.ny {
        for ix in 0..g.nx {
            let i = g.index(ix, iy);
            let near_boundary = ix < STENCIL_MARGIN
                || iy < STENCIL_MARGIN
                || ix + STENCIL_MARGIN >= g.nx
                || iy + STENCIL_MARGIN >= g.ny;
            if near_boundary || blocked[i] {
                out.values[i] = f64::NAN;
                out.flags[i] = true;
                continue;
            }
            let c = transform(field.value(ix, iy));
            let lap_flat = (transform(field.value(ix + 1, iy))
                + transform(field.value(ix - 1, iy))
                + transform(field.value(ix, iy + 1))
                + transform(field.value(ix, iy - 1))
                - 4.0 * c)
                / h2;
            out.values[i] = -lap_flat / weight(i);
            out.flags[i] = false;
        }
    }
    out
}

/// Positive Laplace–Beltrami operator `Δ u = -(u_xx + u_yy)/Ω` on sampled
/// fields, for an arbitrary conformal factor `Ω` (background or Baptista).
pub fn laplace_beltrami(omega: &ScalarField, u: &ScalarField) -> Result<ScalarField> {
    omega.check_same_grid(u)?;
    let mut merged = u.clone();
    for i in 0..merged.flags.len() {
        merged.flags[i] = merged.flags[i] || omega.flags[i];
    }
    Ok(stencil_apply(&merged, |i| omega.values[i], |v| v))
}

/// Laplace–Beltrami against the chart's own background factor.
pub fn laplace_beltrami_chart(u: &ScalarField) -> Result<ScalarField> {
    let omega0 = conformal_factor_field(u.chart, u.grid)?;
    laplace_beltrami(&omega0, u)
}

/// Gauss curvature `K = -(log Ω)_xx+yy / (2Ω)` of a sampled conformal
/// factor. Fails if `Ω <= 0` at an unflagged node.
pub fn gauss_curvature(omega: &ScalarField) -> Result<ScalarField> {
    for (i, (&v, &fl)) in omega.values.iter().zip(&omega.flags).enumerate() {
        if !fl && v <= 0.0 {
            return Err(VortexError::NonPositiveConformalFactor { index: i, value: v });
        }
    }
    Ok(stencil_apply(
        omega,
        |i| 2.0 * omega.values[i],
        |v| v.ln(),
    ))
}

/// `Δ u` at a single point by a local 5-point probe of a callable, using
/// the supplied conformal factor callable.
pub fn laplacian_probe(
    omega: impl Fn(Complex64) -> f64,
    u: impl Fn(Complex64) -> f64,
    z: Complex64,
    h: f64,
) -> f64 {
    let lap_flat = (u(z + Complex64::new(h, 0.0))
        + u(z - Complex64::new(h, 0.0))
        + u(z + Complex64::new(0.0, h))
        + u(z - Complex64::new(0.0, h))
        - 4.0 * u(z))
        / (h * h);
    -lap_flat / omega(z)
}

/// Gauss curvature of a conformal factor callable at a single point.
pub fn gauss_curvature_probe(omega: impl Fn(Complex64) -> f64, z: Complex64, h: f64) -> f64 {
    let lg = |w: Complex64| omega(w).ln();
    let lap_flat = (lg(z + Complex64::new(h, 0.0))
        + lg(z - Complex64::new(h, 0.0))
        + lg(z + Complex64::new(0.0, h))
        + lg(z - Complex64::new(0.0, h))
        - 4.0 * lg(z))
        / (h * h);
    -lap_flat / (2.0 * omega(z))
}
