//! Enumeration and classification of Taubes-form vortex equations.
//!
//! An equation of order `L` is the sign pattern of its vortex coefficients
//! `(C_0, C_2, ..., C_{2L})`; magnitudes can be scaled away (up to the
//! residual family parameters of type III and higher) by shifting `u` and
//! rescaling the coordinate. A pattern is admissible when the flux integral
//! of the vortex polynomial can be positive: the sign vector of
//! `(-C_0, C_2, ..., C_{2L})` must contain at least one `+1`. The all-zero
//! (Laplace) pattern is kept as the single harmonic case.

use serde::{Deserialize, Serialize};

use crate::error::{Result, VortexError};

/// Vortex coefficients `(C_0, C_2, ..., C_{2L})`.
///
/// The empty coefficient vector is the `L = -1` bookkeeping case (no
/// right-hand side at all), which coincides with the Laplace equation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquationSpec {
    pub coefficients: Vec<f64>,
}

impl EquationSpec {
    pub fn new(coefficients: Vec<f64>) -> Self {
        EquationSpec { coefficients }
    }

    pub fn from_signs(signs: &[i8]) -> Self {
        EquationSpec::new(signs.iter().map(|&s| s as f64).collect())
    }

    /// Highest power `L`; `-1` for the empty spec.
    pub fn order(&self) -> i64 {
        self.coefficients.len() as i64 - 1
    }

    /// `C_{2n}`, zero when the slot is absent.
    pub fn c(&self, n: usize) -> f64 {
        self.coefficients.get(n).copied().unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|&c| c == 0.0)
    }

    /// Indices `n` with `C_{2n} != 0`.
    pub fn nonzero_indices(&self) -> Vec<usize> {
        self.coefficients
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0.0)
            .map(|(n, _)| n)
            .collect()
    }

    /// Positive flux admissibility; the all-zero pattern is admitted.
    pub fn is_admissible(&self) -> bool {
        if self.is_zero() {
            return true;
        }
        self.coefficients
            .iter()
            .enumerate()
            .any(|(n, &c)| if n == 0 { c < 0.0 } else { c > 0.0 })
    }

    /// True when every coefficient the scaling rules can fix is exactly ±1.
    pub fn is_canonical(&self) -> bool {
        match normalize(self) {
            Ok((canon, _)) => canon.coefficients == self.coefficients,
            Err(_) => false,
        }
    }

    /// Vortex polynomial `P(w) = -C_0 + Σ_{n>=1} C_{2n} w^n` of `w = e^{2u}`.
    pub fn vortex_polynomial(&self, w: f64) -> f64 {
        let mut acc = -self.c(0);
        let mut wn = 1.0;
        for n in 1..self.coefficients.len() {
            wn *= w;
            acc += self.coefficients[n] * wn;
        }
        acc
    }

    /// `dP/du = Σ 2n C_{2n} e^{2nu}` evaluated at `w = e^{2u}`.
    pub fn vortex_polynomial_du(&self, w: f64) -> f64 {
        let mut acc = 0.0;
        let mut wn = 1.0;
        for n in 1..self.coefficients.len() {
            wn *= w;
            acc += 2.0 * n as f64 * self.coefficients[n] * wn;
        }
        acc
    }

    /// Smallest positive root of `P(e^{2u}) = 0`, as `e^{2 u_vac}`, when one
    /// exists. The smallest root is the branch continuously connected to the
    /// two-term vacua as the extra coefficients are switched off.
    pub fn vacuum_higgs_squared(&self) -> Option<f64> {
        let c0 = self.c(0);
        let c2 = self.c(1);
        let c4 = self.c(2);
        if self.coefficients.len() > 3 {
            return None;
        }
        let mut roots = Vec::new();
        if c4 == 0.0 {
            if c2 != 0.0 {
                roots.push(c0 / c2);
            }
        } else {
            // c4 w^2 + c2 w - c0 = 0
            let disc = c2 * c2 + 4.0 * c4 * c0;
            if disc >= 0.0 {
                let sq = disc.sqrt();
                roots.push((-c2 + sq) / (2.0 * c4));
                roots.push((-c2 - sq) / (2.0 * c4));
            }
        }
        roots
            .into_iter()
            .filter(|&w| w > 0.0)
            .fold(None, |acc: Option<f64>, w| {
                Some(acc.map_or(w, |m| m.min(w)))
            })
    }
}

/// Type label: how many coefficients are switched on, which ones, and with
/// which signs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeLabel {
    /// Number of nonvanishing coefficients.
    pub class: usize,
    /// The `2n` subscripts of the nonvanishing coefficients.
    pub indices: Vec<usize>,
    /// Signs of the nonvanishing coefficients, in subscript order.
    pub signs: Vec<i8>,
    /// Canonical name, when the pattern has one.
    pub name: Option<String>,
}

fn roman(m: usize) -> String {
    const ONES: [&str; 10] = ["", "I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX"];
    let mut m = m;
    let mut s = String::new();
    while m >= 10 {
        s.push('X');
        m -= 10;
    }
    s.push_str(ONES[m]);
    s
}

impl TypeLabel {
    /// Systematic type string, e.g. `type 0`, `I_2^+`, `II_02^--`,
    /// `III_024^-++`.
    pub fn type_string(&self) -> String {
        if self.class == 0 {
            return "type 0".to_string();
        }
        let sub: Vec<String> = self.indices.iter().map(|i| i.to_string()).collect();
        let sub = if self.indices.iter().all(|&i| i < 10) {
            sub.concat()
        } else {
            sub.join(",")
        };
        let sup: String = self
            .signs
            .iter()
            .map(|&s| if s > 0 { '+' } else { '-' })
            .collect();
        format!("{}_{}^{}", roman(self.class), sub, sup)
    }
}

impl std::fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.type_string())
    }
}

/// Named sign patterns, trailing zeros ignored.
const NAMED_PATTERNS: [(&[i8], &str); 7] = [
    (&[], "Laplace"),
    (&[-1], "Bradlow"),
    (&[0, 1], "Jackiw-Pi"),
    (&[-1, -1], "Taubes"),
    (&[1, 1], "Popov"),
    (&[-1, 1], "Ambjorn-Olesen"),
    (&[0, 1, -1], "Chern-Simons"),
];

fn sign_pattern(spec: &EquationSpec) -> Vec<i8> {
    let mut signs: Vec<i8> = spec
        .coefficients
        .iter()
        .map(|&c| {
            if c > 0.0 {
                1
            } else if c < 0.0 {
                -1
            } else {
                0
            }
        })
        .collect();
    while signs.last() == Some(&0) {
        signs.pop();
    }
    signs
}

/// Canonical name of a sign pattern, if it has one.
pub fn canonical_name(spec: &EquationSpec) -> Option<&'static str> {
    let signs = sign_pattern(spec);
    NAMED_PATTERNS
        .iter()
        .find(|(pat, _)| *pat == signs.as_slice())
        .map(|(_, name)| *name)
}

/// Canonical spec for a name (case-insensitive, with common aliases).
pub fn lookup_name(name: &str) -> Option<EquationSpec> {
    let key = name.trim().to_ascii_lowercase().replace([' ', '_'], "-");
    let signs: &[i8] = match key.as_str() {
        "laplace" => &[0, 0, 0],
        "bradlow" => &[-1, 0, 0],
        "jackiw-pi" | "jp" => &[0, 1, 0],
        "taubes" => &[-1, -1, 0],
        "popov" => &[1, 1, 0],
        "ambjorn-olesen" | "ambjoern-olesen" | "ao" => &[-1, 1, 0],
        "chern-simons" | "cs" => &[0, 1, -1],
        _ => return None,
    };
    Some(EquationSpec::from_signs(signs))
}

/// Number of admissible vortex equations at order `L >= -1`:
/// `3^{L+1} - 2^{L+1} + 1`.
pub fn hilbert_function(order: i64) -> u64 {
    assert!(order >= -1, "order must be >= -1");
    let e = (order + 1) as u32;
    3u64.pow(e) - 2u64.pow(e) + 1
}

/// Number of equations of each type class `m = 0..=L+1` at order `L`:
/// `1` for `m = 0` and `binom(L+1, m) (2^m - 1)` otherwise.
pub fn type_counts(order: i64) -> Vec<u64> {
    assert!(order >= -1);
    let slots = (order + 1) as u64;
    let mut binom = 1u64;
    (0..=slots)
        .map(|m| {
            if m == 0 {
                1
            } else {
                binom = binom * (slots - m + 1) / m;
                binom * (2u64.pow(m as u32) - 1)
            }
        })
        .collect()
}

/// Classify a spec into its type label; fails on inadmissible patterns.
pub fn classify(spec: &EquationSpec) -> Result<TypeLabel> {
    if !spec.is_admissible() {
        return Err(VortexError::PositiveFluxViolation {
            pattern: spec.coefficients.clone(),
        });
    }
    let indices: Vec<usize> = spec.nonzero_indices().iter().map(|&n| 2 * n).collect();
    let signs: Vec<i8> = spec
        .nonzero_indices()
        .iter()
        .map(|&n| if spec.c(n) > 0.0 { 1 } else { -1 })
        .collect();
    Ok(TypeLabel {
        class: indices.len(),
        indices,
        signs,
        name: canonical_name(spec).map(str::to_string),
    })
}

/// Exhaustively list every admissible sign pattern at order `L >= -1`,
/// classified. The list length equals [`hilbert_function`].
///
/// Order: by type class, then subscripts, then sign tuple (`-` before `+`).
pub fn enumerate(order: i64) -> Vec<(EquationSpec, TypeLabel)> {
    assert!(order >= -1, "order must be >= -1");
    if order == -1 {
        let spec = EquationSpec::new(Vec::new());
        let label = classify(&spec).expect("empty spec is admissible");
        return vec![(spec, label)];
    }
    let slots = (order + 1) as usize;
    let mut specs = Vec::new();
    let total = 3usize.pow(slots as u32);
    for code in 0..total {
        let mut c = code;
        let mut signs = Vec::with_capacity(slots);
        for _ in 0..slots {
            signs.push((c % 3) as i8 - 1);
            c /= 3;
        }
        let spec = EquationSpec::from_signs(&signs);
        if spec.is_admissible() {
            specs.push(spec);
        }
    }
    let mut out: Vec<(EquationSpec, TypeLabel)> = specs
        .into_iter()
        .map(|s| {
            let label = classify(&s).expect("admissible by construction");
            (s, label)
        })
        .collect();
    out.sort_by(|(a, la), (b, lb)| {
        (la.class, &la.indices)
            .cmp(&(lb.class, &lb.indices))
            .then_with(|| {
                let sa = sign_pattern(a);
                let sb = sign_pattern(b);
                sa.cmp(&sb)
            })
    });
    out
}

/// Rescaling connecting an arbitrary-coefficient equation to its canonical
/// form: a canonical solution `v` maps to the original solution via
/// `u(z) = v(z / z_scale) + u_shift`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rescaling {
    pub u_shift: f64,
    pub z_scale: f64,
    /// Family parameters `(2n, value)` that the two scaling freedoms cannot
    /// fix; present for type III and higher.
    pub residual_coefficients: Vec<(usize, f64)>,
}

impl Rescaling {
    pub fn identity() -> Self {
        Rescaling {
            u_shift: 0.0,
            z_scale: 1.0,
            residual_coefficients: Vec::new(),
        }
    }

    /// Reconstruct the original coefficients from a canonical spec:
    /// `C_{2n} = C̃_{2n} e^{-2 n u_shift} / z_scale^2`.
    pub fn apply_to(&self, canonical: &EquationSpec) -> EquationSpec {
        let lam2 = self.z_scale * self.z_scale;
        let coeffs = canonical
            .coefficients
            .iter()
            .enumerate()
            .map(|(n, &c)| c * (-2.0 * n as f64 * self.u_shift).exp() / lam2)
            .collect();
        EquationSpec::new(coeffs)
    }
}

/// Normalize an arbitrary-coefficient admissible equation.
///
/// The two freedoms are a constant shift of `u` (scaling each `C_{2n}` by
/// `e^{2ns}`) and a coordinate rescaling `z -> z_scale * z` (scaling every
/// coefficient and the background curvature by `z_scale^{-2}`... applied
/// here as multiplying all coefficients by `lambda^2`). Conventions:
///
/// - `C_0`, when present, is scaled to ±1 by the coordinate freedom;
/// - the lowest nonvanishing higher coefficient is scaled to ±1 by the
///   `u`-shift (for `C_0 = 0` the two lowest are fixed using both freedoms);
/// - anything left over is reported as residual family parameters.
pub fn normalize(spec: &EquationSpec) -> Result<(EquationSpec, Rescaling)> {
    if !spec.is_admissible() {
        return Err(VortexError::PositiveFluxViolation {
            pattern: spec.coefficients.clone(),
        });
    }
    if spec.is_zero() {
        return Ok((spec.clone(), Rescaling::identity()));
    }
    let nonzero = spec.nonzero_indices();
    let higher: Vec<usize> = nonzero.iter().copied().filter(|&n| n > 0).collect();
    let has_c0 = nonzero.contains(&0);

    // lambda^2 multiplies every coefficient; s shifts u.
    let (lam2, s, fixed): (f64, f64, Vec<usize>) = if has_c0 {
        let lam2 = 1.0 / spec.c(0).abs();
        match higher.first() {
            Some(&a) => {
                let s = (spec.c(0).abs() / spec.c(a).abs()).ln() / (2.0 * a as f64);
                (lam2, s, vec![0, a])
            }
            None => (lam2, 0.0, vec![0]),
        }
    } else if higher.len() == 1 {
        let a = higher[0];
        let s = -spec.c(a).abs().ln() / (2.0 * a as f64);
        (1.0, s, vec![a])
    } else {
        let a = higher[0];
        let b = higher[1];
        let s = (spec.c(a).abs() / spec.c(b).abs()).ln() / (2.0 * (b - a) as f64);
        let lam2 = 1.0 / (spec.c(a).abs() * (2.0 * a as f64 * s).exp());
        (lam2, s, vec![a, b])
    };

    let mut coeffs = Vec::with_capacity(spec.coefficients.len());
    let mut residual = Vec::new();
    for (n, &c) in spec.coefficients.iter().enumerate() {
        if c == 0.0 {
            coeffs.push(0.0);
            continue;
        }
        if fixed.contains(&n) {
            coeffs.push(c.signum());
        } else {
            let v = c * lam2 * (2.0 * n as f64 * s).exp();
            coeffs.push(v);
            residual.push((2 * n, v));
        }
    }
    Ok((
        EquationSpec::new(coeffs),
        Rescaling {
            u_shift: s,
            z_scale: lam2.sqrt(),
            residual_coefficients: residual,
        },
    ))
}

/// Upper bound on the number of residual family parameters at order `L`.
pub fn family_dimension_bound(order: i64) -> usize {
    order.max(1).saturating_sub(1) as usize
}

/// True when closed-form solutions via a holomorphic map exist: at most one
/// higher coefficient may be switched on.
pub fn is_integrable(spec: &EquationSpec) -> bool {
    if !spec.is_admissible() {
        return false;
    }
    spec.nonzero_indices().iter().filter(|&&n| n > 0).count() <= 1
}

/// Geometry of the background and Baptista manifolds for an integrable
/// equation, as displayed in the catalog tables: `H^2`, `R^2`, `S^2` for
/// constant negative/zero/positive curvature, `-` for non-constant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeometryColumns {
    pub m0: String,
    pub m2: String,
    pub m4: String,
}

fn geometry_symbol(sign: f64) -> String {
    if sign > 0.0 {
        "S^2"
    } else if sign < 0.0 {
        "H^2"
    } else {
        "R^2"
    }
    .to_string()
}

/// Geometry columns for an integrable spec of order `<= 2`; `None` for
/// non-integrable ones.
pub fn integrable_geometry(spec: &EquationSpec) -> Option<GeometryColumns> {
    if !is_integrable(spec) || spec.coefficients.len() > 3 {
        return None;
    }
    let higher: Vec<usize> = spec.nonzero_indices().into_iter().filter(|&n| n > 0).collect();
    match higher.first() {
        None => Some(GeometryColumns {
            // Laplace / Bradlow: the Baptista curvatures vanish with the
            // higher coefficients.
            m0: geometry_symbol(spec.c(0)),
            m2: geometry_symbol(0.0),
            m4: geometry_symbol(0.0),
        }),
        Some(&nstar) => {
            let k0 = nstar as f64 * spec.c(0);
            let kb = nstar as f64 * spec.c(nstar);
            Some(GeometryColumns {
                m0: geometry_symbol(k0),
                m2: if nstar == 1 {
                    geometry_symbol(kb)
                } else {
                    "-".to_string()
                },
                m4: if nstar == 2 {
                    geometry_symbol(kb)
                } else {
                    "-".to_string()
                },
            })
        }
    }
}

/// One row of the exported catalog.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogRow {
    pub coefficients: Vec<f64>,
    #[serde(rename = "type")]
    pub type_label: String,
    pub name: Option<String>,
    pub integrable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub geometry: Option<GeometryColumns>,
}

/// The classification of the twenty order-2 equations, in the conventional
/// presentation order (by type, with the historically named rows leading
/// their blocks).
const ORDER2_TABLE: [[i8; 3]; 20] = [
    [0, 0, 0],
    [-1, 0, 0],
    [0, 1, 0],
    [0, 0, 1],
    [-1, -1, 0],
    [1, 1, 0],
    [-1, 1, 0],
    [-1, 0, -1],
    [1, 0, 1],
    [-1, 0, 1],
    [0, 1, -1],
    [0, -1, 1],
    [0, 1, 1],
    [-1, -1, 1],
    [-1, 1, 1],
    [1, -1, 1],
    [1, 1, 1],
    [-1, -1, -1],
    [-1, 1, -1],
    [1, 1, -1],
];

/// Catalog rows at order `L`, in presentation order.
pub fn catalog_rows(order: i64) -> Vec<CatalogRow> {
    let entries: Vec<EquationSpec> = if order == 2 {
        ORDER2_TABLE
            .iter()
            .map(|signs| EquationSpec::from_signs(signs))
            .collect()
    } else {
        enumerate(order).into_iter().map(|(s, _)| s).collect()
    };
    entries
        .into_iter()
        .map(|spec| {
            let label = classify(&spec).expect("catalog rows are admissible");
            CatalogRow {
                type_label: label.type_string(),
                name: label.name.clone(),
                integrable: is_integrable(&spec),
                geometry: integrable_geometry(&spec),
                coefficients: spec.coefficients,
            }
        })
        .collect()
}

fn sign_cell(c: f64) -> String {
    if c > 0.0 {
        "+1".to_string()
    } else if c < 0.0 {
        "-1".to_string()
    } else {
        "0".to_string()
    }
}

/// Aligned-text classification table for order 2 (all twenty equations).
pub fn render_classification_table() -> String {
    let mut out = String::new();
    out.push_str("type         name            C0  C2  C4\n");
    for row in catalog_rows(2) {
        let name = row.name.as_deref().unwrap_or("-");
        let line = format!(
            "{:<12} {:<15} {:>2}  {:>2}  {:>2}",
            row.type_label,
            name,
            sign_cell(row.coefficients[0]),
            sign_cell(row.coefficients[1]),
            sign_cell(row.coefficients[2]),
        );
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// Aligned-text table of the ten integrable order-2 equations with the
/// geometries of the background and Baptista manifolds.
pub fn render_integrable_table() -> String {
    let mut out = String::new();
    out.push_str("type         name            C0  C2  C4  M0   M2   M4\n");
    for row in catalog_rows(2).into_iter().filter(|r| r.integrable) {
        let name = row.name.as_deref().unwrap_or("-");
        let geo = row.geometry.expect("integrable rows carry geometry");
        let line = format!(
            "{:<12} {:<15} {:>2}  {:>2}  {:>2}  {:<4} {:<4} {:<4}",
            row.type_label,
            name,
            sign_cell(row.coefficients[0]),
            sign_cell(row.coefficients[1]),
            sign_cell(row.coefficients[2]),
            geo.m0,
            geo.m2,
            geo.m4,
        );
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hilbert_function_values() {
        assert_eq!(hilbert_function(-1), 1);
        assert_eq!(hilbert_function(0), 2);
        assert_eq!(hilbert_function(1), 6);
        assert_eq!(hilbert_function(2), 20);
        assert_eq!(hilbert_function(3), 66);
        assert_eq!(hilbert_function(4), 212);
        assert_eq!(hilbert_function(5), 666);
    }

    #[test]
    fn enumerate_counts_match_hilbert_function() {
        for order in -1..=6 {
            assert_eq!(
                enumerate(order).len() as u64,
                hilbert_function(order),
                "order {order}"
            );
        }
    }

    #[test]
    fn type_counts_order_two() {
        assert_eq!(type_counts(2), vec![1, 3, 9, 7]);
    }

    #[test]
    fn type_counts_sum_to_hilbert_function() {
        for order in 0..=8 {
            let sum: u64 = type_counts(order).iter().sum();
            assert_eq!(sum, hilbert_function(order), "order {order}");
        }
    }

    #[test]
    fn enumerate_order_zero_names() {
        let list = enumerate(0);
        let names: Vec<Option<String>> = list.iter().map(|(_, l)| l.name.clone()).collect();
        assert_eq!(list.len(), 2);
        assert!(names.contains(&Some("Laplace".to_string())));
        assert!(names.contains(&Some("Bradlow".to_string())));
    }

    #[test]
    fn enumerate_order_one_names() {
        let list = enumerate(1);
        assert_eq!(list.len(), 6);
        let names: Vec<String> = list.iter().filter_map(|(_, l)| l.name.clone()).collect();
        for expected in ["Laplace", "Bradlow", "Jackiw-Pi", "Taubes", "Popov", "Ambjorn-Olesen"] {
            assert!(names.iter().any(|n| n == expected), "missing {expected}");
        }
    }

    #[test]
    fn labels_unique_within_order() {
        for order in 0..=4 {
            let list = enumerate(order);
            let mut seen = std::collections::HashSet::new();
            for (_, label) in &list {
                assert!(seen.insert(label.type_string()), "duplicate {label}");
            }
        }
    }

    #[test]
    fn classify_known_rows() {
        let cs = classify(&EquationSpec::from_signs(&[0, 1, -1])).unwrap();
        assert_eq!(cs.type_string(), "II_24^+-");
        assert_eq!(cs.name.as_deref(), Some("Chern-Simons"));

        let taubes = classify(&EquationSpec::from_signs(&[-1, -1, 0])).unwrap();
        assert_eq!(taubes.type_string(), "II_02^--");
        assert_eq!(taubes.name.as_deref(), Some("Taubes"));

        let laplace = classify(&EquationSpec::from_signs(&[0, 0, 0])).unwrap();
        assert_eq!(laplace.type_string(), "type 0");
        assert_eq!(laplace.name.as_deref(), Some("Laplace"));
    }

    #[test]
    fn classify_rejects_inadmissible() {
        // (-C_0, C_2, C_4) = (-1, -1, 0): no positive entry
        let bad = EquationSpec::from_signs(&[1, -1, 0]);
        assert!(matches!(
            classify(&bad),
            Err(VortexError::PositiveFluxViolation { .. })
        ));
    }

    #[test]
    fn normalize_taubes_magnitudes() {
        let (canon, resc) = normalize(&EquationSpec::new(vec![-3.0, -5.0, 0.0])).unwrap();
        assert_eq!(canon.coefficients, vec![-1.0, -1.0, 0.0]);
        assert!((resc.u_shift - (-0.5 * (5.0f64 / 3.0).ln())).abs() < 1e-14);
        assert!((resc.z_scale - 3.0f64.powf(-0.5)).abs() < 1e-14);
        assert!(resc.residual_coefficients.is_empty());
    }

    #[test]
    fn normalize_jackiw_pi_shift_only() {
        let (canon, resc) = normalize(&EquationSpec::new(vec![0.0, 2.0, 0.0])).unwrap();
        assert_eq!(canon.coefficients, vec![0.0, 1.0, 0.0]);
        assert!((resc.u_shift - (-0.5 * 2.0f64.ln())).abs() < 1e-14);
        assert!((resc.z_scale - 1.0).abs() < 1e-14);
    }

    #[test]
    fn normalize_type_iii_residual_family() {
        let (canon, resc) = normalize(&EquationSpec::new(vec![-2.0, 4.0, 1.0])).unwrap();
        assert_eq!(canon.coefficients[0], -1.0);
        assert_eq!(canon.coefficients[1], 1.0);
        // C_4' = C_4 |C_0| / |C_2|^2 = 1 * 2 / 16
        assert!((canon.coefficients[2] - 0.125).abs() < 1e-14);
        assert_eq!(resc.residual_coefficients.len(), 1);
        assert_eq!(resc.residual_coefficients[0].0, 4);
    }

    #[test]
    fn normalize_round_trip_examples() {
        for coeffs in [
            vec![-3.0, -5.0, 0.0],
            vec![0.0, 2.0, 0.0],
            vec![-2.0, 4.0, 1.0],
            vec![0.0, 3.0, -7.0],
            vec![-0.25, 0.0, 6.0],
        ] {
            let spec = EquationSpec::new(coeffs.clone());
            let (canon, resc) = normalize(&spec).unwrap();
            let back = resc.apply_to(&canon);
            for (a, b) in coeffs.iter().zip(&back.coefficients) {
                assert!(
                    (a - b).abs() <= 1e-12 * a.abs().max(1.0),
                    "{coeffs:?} -> {back:?}"
                );
            }
        }
    }

    #[test]
    fn normalize_idempotent_on_canonical() {
        for (spec, _) in enumerate(2) {
            let (canon, resc) = normalize(&spec).unwrap();
            assert_eq!(canon.coefficients, spec.coefficients);
            assert!(resc.u_shift.abs() < 1e-15);
            assert!((resc.z_scale - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn integrable_subset_is_ten_rows_at_order_two() {
        let rows = catalog_rows(2);
        let integrable: Vec<&CatalogRow> = rows.iter().filter(|r| r.integrable).collect();
        assert_eq!(integrable.len(), 10);
        // Chern-Simons and every type III row are not integrable
        for row in &rows {
            if row.name.as_deref() == Some("Chern-Simons") || row.type_label.starts_with("III") {
                assert!(!row.integrable, "{}", row.type_label);
            }
        }
    }

    #[test]
    fn geometry_columns_match_known_rows() {
        let geo = |signs: &[i8]| integrable_geometry(&EquationSpec::from_signs(signs)).unwrap();
        let g = geo(&[-1, -1, 0]); // Taubes
        assert_eq!((g.m0.as_str(), g.m2.as_str(), g.m4.as_str()), ("H^2", "H^2", "-"));
        let g = geo(&[-1, 0, 1]); // II_04^-+
        assert_eq!((g.m0.as_str(), g.m2.as_str(), g.m4.as_str()), ("H^2", "-", "S^2"));
        let g = geo(&[-1, 0, 0]); // Bradlow
        assert_eq!((g.m0.as_str(), g.m2.as_str(), g.m4.as_str()), ("H^2", "R^2", "R^2"));
        let g = geo(&[0, 0, 1]); // I_4^+
        assert_eq!((g.m0.as_str(), g.m2.as_str(), g.m4.as_str()), ("R^2", "-", "S^2"));
    }

    #[test]
    fn vacuum_roots() {
        // Taubes: 1 - w = 0
        let w = EquationSpec::from_signs(&[-1, -1, 0]).vacuum_higgs_squared();
        assert_eq!(w, Some(1.0));
        // Chern-Simons: w - w^2 = 0 -> w = 1
        let w = EquationSpec::from_signs(&[0, 1, -1]).vacuum_higgs_squared();
        assert_eq!(w, Some(1.0));
        // II_24^++: no positive root
        let w = EquationSpec::from_signs(&[0, 1, 1]).vacuum_higgs_squared();
        assert_eq!(w, None);
        // III^---: 1 - w - w^2 = 0 -> w = (sqrt(5)-1)/2
        let w = EquationSpec::from_signs(&[-1, -1, -1])
            .vacuum_higgs_squared()
            .unwrap();
        assert!((w - (5.0f64.sqrt() - 1.0) / 2.0).abs() < 1e-14);
        // Bradlow: P = 1, no vacuum
        let w = EquationSpec::from_signs(&[-1, 0, 0]).vacuum_higgs_squared();
        assert_eq!(w, None);
    }

    #[test]
    fn lookup_names_resolve() {
        assert_eq!(
            lookup_name("Taubes").unwrap().coefficients,
            vec![-1.0, -1.0, 0.0]
        );
        assert_eq!(
            lookup_name("ao").unwrap().coefficients,
            vec![-1.0, 1.0, 0.0]
        );
        assert!(lookup_name("nonesuch").is_none());
    }
}
