//! Analytic Wigner functions for the states this crate manufactures, a
//! numeric evaluator for arbitrary truncated states, and grid utilities.
//!
//! Conventions: a phase-space point is `alpha = x + i p`; the vacuum peaks at
//! `W(0,0) = 2/pi` and every Wigner function integrates to one over
//! `dx dp`.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_4, PI, SQRT_2};

use crate::error::{Error, Result};
use crate::fock::{displacement_action, DensityMatrix, StateVector};
use crate::states::{HalfFinished, TargetCat};

/// `2/pi`, the peak value of a pure Gaussian Wigner function.
pub const TWO_OVER_PI: f64 = 2.0 / PI;

/// Default evaluation window, generous enough for every bundled example.
pub const DEFAULT_WINDOW: GridWindow = GridWindow {
    x_min: -6.0,
    x_max: 6.0,
    p_min: -6.0,
    p_max: 6.0,
};

/// Default grid resolution per axis.
pub const DEFAULT_GRID_POINTS: usize = 301;

/// A point `(x, p)` of phase space, i.e. `alpha = x + i p`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub x: f64,
    pub p: f64,
}

impl PhasePoint {
    pub fn new(x: f64, p: f64) -> Self {
        Self { x, p }
    }

    pub fn as_complex(&self) -> C64 {
        C64::new(self.x, self.p)
    }
}

impl From<(f64, f64)> for PhasePoint {
    fn from((x, p): (f64, f64)) -> Self {
        Self { x, p }
    }
}

/// Rectangular phase-space window.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridWindow {
    pub x_min: f64,
    pub x_max: f64,
    pub p_min: f64,
    pub p_max: f64,
}

impl Default for GridWindow {
    fn default() -> Self {
        DEFAULT_WINDOW
    }
}

impl GridWindow {
    fn validate(&self) -> Result<()> {
        let ok = self.x_min.is_finite()
            && self.x_max.is_finite()
            && self.p_min.is_finite()
            && self.p_max.is_finite()
            && self.x_min < self.x_max
            && self.p_min < self.p_max;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter {
                reason: format!(
                    "degenerate phase-space window [{}, {}] x [{}, {}]",
                    self.x_min, self.x_max, self.p_min, self.p_max
                ),
            })
        }
    }
}

fn sign_of(q_sign: i8) -> Result<f64> {
    match q_sign {
        1 => Ok(1.0),
        -1 => Ok(-1.0),
        _ => Err(Error::InvalidParameter {
            reason: format!("parity sign must be +1 or -1, got {q_sign}"),
        }),
    }
}

/// Wigner function of the balanced superposition of `|alpha>` and `|-alpha>`
/// (even for `q_sign = +1`, odd for `-1`), with a possibly complex center.
///
/// Two displaced Gaussian lobes plus an origin-centered interference ridge
/// whose phase is set by the lobe separation.
pub fn w_scs(q_sign: i8, alpha: C64, at: PhasePoint) -> Result<f64> {
    let s = sign_of(q_sign)?;
    let denom = 1.0 + s * (-2.0 * alpha.norm_sqr()).exp();
    if denom <= 1e-12 {
        return Err(Error::DegenerateCat {
            alpha_scs: alpha.norm(),
            q: s * FRAC_PI_4,
        });
    }
    let (xs, ps) = (alpha.re, alpha.im);
    let lobe = |cx: f64, cp: f64| {
        TWO_OVER_PI * (-2.0 * (at.x - cx).powi(2) - 2.0 * (at.p - cp).powi(2)).exp()
    };
    let ridge = TWO_OVER_PI
        * (-2.0 * at.x * at.x - 2.0 * at.p * at.p).exp()
        * (4.0 * (at.x * ps - at.p * xs)).cos();
    Ok((0.5 * (lobe(xs, ps) + lobe(-xs, -ps)) + s * ridge) / denom)
}

/// [`w_scs`] for an arbitrary superposition angle: weights `cos(q)` and
/// `sin(q)` on the two lobes instead of the balanced `1/sqrt(2)`.
pub fn w_scs_q(q: f64, alpha: C64, at: PhasePoint) -> Result<f64> {
    if !q.is_finite() {
        return Err(Error::InvalidParameter {
            reason: "superposition angle must be finite".to_string(),
        });
    }
    let (cq, sq) = (q.cos(), q.sin());
    let denom = 1.0 + 2.0 * cq * sq * (-2.0 * alpha.norm_sqr()).exp();
    if denom <= 1e-12 {
        return Err(Error::DegenerateCat {
            alpha_scs: alpha.norm(),
            q,
        });
    }
    let (xs, ps) = (alpha.re, alpha.im);
    let lobe = |cx: f64, cp: f64| {
        TWO_OVER_PI * (-2.0 * (at.x - cx).powi(2) - 2.0 * (at.p - cp).powi(2)).exp()
    };
    let ridge = TWO_OVER_PI
        * (-2.0 * at.x * at.x - 2.0 * at.p * at.p).exp()
        * (4.0 * (at.x * ps - at.p * xs)).cos();
    Ok((cq * cq * lobe(xs, ps) + sq * sq * lobe(-xs, -ps) + 2.0 * cq * sq * ridge) / denom)
}

/// Wigner function of the displaced squeezed cat `D(xi) S(r) |cat>`.
///
/// Displacement shifts the argument and squeezing rescales the quadratures
/// (`x` offsets shrink by `e^r`, `p` offsets by `e^-r`, area preserved), so
/// the function is the bare-cat one evaluated on the transformed frame; the
/// exponents below carry the scale factors explicitly.
pub fn w_dsscs(q_sign: i8, cat: &TargetCat, at: PhasePoint) -> Result<f64> {
    let s = sign_of(q_sign)?;
    if (cat.q() - s * FRAC_PI_4).abs() > 1e-9 {
        return Err(Error::InvalidParameter {
            reason: format!(
                "parity sign {q_sign} does not match the target's superposition angle {}",
                cat.q()
            ),
        });
    }
    let a = cat.alpha_scs();
    let r = cat.squeeze();
    let xi = cat.disp();
    let denom = 1.0 + s * (-2.0 * a * a).exp();
    if denom <= 1e-12 {
        return Err(Error::DegenerateCat {
            alpha_scs: a,
            q: cat.q(),
        });
    }
    let u = (at.x - xi.re) * (-r).exp();
    let v = (at.p - xi.im) * r.exp();
    let lobes = 0.5
        * ((-2.0 * u * u + 4.0 * u * a - 2.0 * a * a - 2.0 * v * v).exp()
            + (-2.0 * u * u - 4.0 * u * a - 2.0 * a * a - 2.0 * v * v).exp());
    let ridge = (-2.0 * u * u - 2.0 * v * v).exp() * (4.0 * a * v).cos();
    Ok(TWO_OVER_PI * (lobes + s * ridge) / denom)
}

/// Wigner function of the circuit intermediate `D(center)(|0> + a1|1> +
/// a2|2>)/norm`: displaced-Fock Wigner polynomials plus their cross terms.
pub fn w_halffinished(h: &HalfFinished, center: C64, at: PhasePoint) -> f64 {
    let a1 = h.a1();
    let a2 = h.a2_or_zero();
    let d = at.as_complex() - center;
    let m2 = d.norm_sqr();
    let y = TWO_OVER_PI * (-2.0 * m2).exp();
    let diag = y
        + a1.norm_sqr() * y * (4.0 * m2 - 1.0)
        + a2.norm_sqr() * y * (8.0 * m2 * m2 - 8.0 * m2 + 1.0);
    let x01 = 4.0 * y * (a1.conj() * d).re;
    let x02 = 4.0 * SQRT_2 * y * (a2.conj() * d * d).re;
    let x12 = 4.0 * SQRT_2 * y * (2.0 * m2 - 1.0) * (a1 * a2.conj() * d).re;
    (diag + x01 + x02 + x12) / h.norm_sqr()
}

/// Relative mass a displacement may pile against the truncation edge before
/// the numeric Wigner value is considered unusable.
const NUMERIC_EDGE_MASS_LIMIT: f64 = 1e-8;

/// Numeric Wigner value of an arbitrary density matrix as the parity
/// expectation in the displaced frame:
/// `W(alpha) = (2/pi) sum_n (-1)^n <n| D(-alpha) rho D(-alpha)^dag |n>`.
///
/// The displacement is applied with the norm-preserving banded-generator
/// integrator rather than assembled matrix elements (elementwise recurrences
/// go parasitic deep in the classically forbidden region once `dim` is
/// large). Since the integrator is exactly unitary on the truncated space,
/// truncation error surfaces as probability piling up against the top of the
/// basis, which is checked and reported rather than silently folded in.
pub fn w_numeric(rho: &DensityMatrix, at: PhasePoint) -> Result<f64> {
    let dim = rho.dim();
    let gamma = -at.as_complex();
    let trace: f64 = (0..dim).map(|n| rho.matrix()[(n, n)].re).sum();
    if trace < 1e-300 {
        return Err(Error::BadDensityMatrix {
            reason: "vanishing trace".to_string(),
        });
    }
    // moved = D(-alpha) rho D(-alpha)^dag, one integrator pass per column of
    // rho and one per column of the intermediate adjoint; only the diagonal
    // is kept. diag(E D^dag)[m] = conj((D E^dag)[m, m]) with E = D rho.
    let mut e = DMatrix::<C64>::zeros(dim, dim);
    for j in 0..dim {
        let col = displacement_action(gamma, &rho.matrix().column(j).into_owned());
        e.column_mut(j).copy_from(&col);
    }
    let e_adj = e.adjoint();
    let mut diag = vec![0.0f64; dim];
    for (m, value) in diag.iter_mut().enumerate() {
        let f = displacement_action(gamma, &e_adj.column(m).into_owned());
        *value = f[m].re;
    }
    let start = dim - dim.div_ceil(8);
    let edge: f64 = diag[start..].iter().sum::<f64>() / trace;
    if edge > NUMERIC_EDGE_MASS_LIMIT {
        return Err(Error::NumericCheck {
            reason: format!(
                "displacement to (x={}, p={}) piles relative mass {:.3e} against the truncation edge; increase the dimension",
                at.x, at.p, edge
            ),
        });
    }
    let mut acc = 0.0;
    for (n, value) in diag.iter().enumerate() {
        let parity = if n % 2 == 0 { 1.0 } else { -1.0 };
        acc += parity * value;
    }
    Ok(TWO_OVER_PI * acc / trace)
}

/// [`w_numeric`] specialized to a pure state, without forming the density
/// matrix: `W(alpha) = (2/pi) sum_n (-1)^n |<n|D(-alpha)|psi>|^2` (one
/// integrator pass per point).
pub fn w_numeric_state(psi: &StateVector, at: PhasePoint) -> Result<f64> {
    let dim = psi.dim();
    let amps = psi.amps();
    let norm_sqr: f64 = amps.iter().map(|c| c.norm_sqr()).sum();
    if norm_sqr < 1e-300 {
        return Err(Error::ZeroNorm {
            norm: norm_sqr.sqrt(),
        });
    }
    let moved = displacement_action(-at.as_complex(), amps);
    let start = dim - dim.div_ceil(8);
    let edge: f64 = moved.as_slice()[start..]
        .iter()
        .map(|c| c.norm_sqr())
        .sum::<f64>()
        / norm_sqr;
    if edge > NUMERIC_EDGE_MASS_LIMIT {
        return Err(Error::NumericCheck {
            reason: format!(
                "displacement to (x={}, p={}) piles relative mass {:.3e} against the truncation edge; increase the dimension",
                at.x, at.p, edge
            ),
        });
    }
    let mut acc = 0.0;
    for (n, value) in moved.iter().enumerate() {
        let parity = if n % 2 == 0 { 1.0 } else { -1.0 };
        acc += parity * value.norm_sqr();
    }
    Ok(TWO_OVER_PI * acc / norm_sqr)
}

/// A state whose Wigner function can be tabulated on a grid.
#[derive(Clone, Debug)]
pub enum WignerSource {
    /// Balanced coherent superposition with the given parity sign and center.
    Scs { q_sign: i8, alpha: C64 },
    /// Displaced squeezed cat target.
    Dsscs { q_sign: i8, cat: TargetCat },
    /// Circuit intermediate at a displacement center.
    HalfFinished { h: HalfFinished, center: C64 },
    /// Any truncated pure state, evaluated numerically.
    NumericPure(StateVector),
    /// Any truncated density matrix, evaluated numerically.
    Numeric(DensityMatrix),
}

impl WignerSource {
    /// Wigner value of the source at one phase-space point.
    pub fn eval(&self, at: PhasePoint) -> Result<f64> {
        match self {
            WignerSource::Scs { q_sign, alpha } => w_scs(*q_sign, *alpha, at),
            WignerSource::Dsscs { q_sign, cat } => w_dsscs(*q_sign, cat, at),
            WignerSource::HalfFinished { h, center } => Ok(w_halffinished(h, *center, at)),
            WignerSource::NumericPure(psi) => w_numeric_state(psi, at),
            WignerSource::Numeric(rho) => w_numeric(rho, at),
        }
    }
}

/// Wigner values tabulated on a rectangular grid, rows indexed by `p` and
/// columns by `x`, endpoints included on both axes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WignerGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
    pub p_min: f64,
    pub p_max: f64,
    pub np: usize,
    /// Row-major by `p`: `values[j * nx + i] = W(x_i, p_j)`.
    pub values: Vec<f64>,
}

impl WignerGrid {
    /// Value at column `i` (the `x` index) and row `j` (the `p` index).
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nx + i]
    }

    pub fn xs(&self) -> Vec<f64> {
        axis(self.x_min, self.x_max, self.nx)
    }

    pub fn ps(&self) -> Vec<f64> {
        axis(self.p_min, self.p_max, self.np)
    }

    fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }

    fn dp(&self) -> f64 {
        (self.p_max - self.p_min) / (self.np - 1) as f64
    }

    /// Riemann estimate of `integral W dx dp`; near one for a well-contained
    /// state.
    pub fn norm(&self) -> f64 {
        let total: f64 = self.values.iter().sum();
        total * self.dx() * self.dp()
    }

    fn validate(&self) -> Result<()> {
        GridWindow {
            x_min: self.x_min,
            x_max: self.x_max,
            p_min: self.p_min,
            p_max: self.p_max,
        }
        .validate()?;
        if self.nx < 2 || self.np < 2 {
            return Err(Error::InvalidParameter {
                reason: format!("grid needs at least 2x2 points, got {}x{}", self.nx, self.np),
            });
        }
        if self.values.len() != self.nx * self.np {
            return Err(Error::InvalidParameter {
                reason: format!(
                    "grid holds {} values but declares {}x{} points",
                    self.values.len(),
                    self.nx,
                    self.np
                ),
            });
        }
        if !self.values.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidParameter {
                reason: "grid contains non-finite values".to_string(),
            });
        }
        Ok(())
    }

    /// Plain-text rendering: a four-line header (format tag, axis
    /// descriptions, checksum norm) followed by one whitespace-separated row
    /// of `x` values per `p` row.  Deterministic — no timestamps.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str("# wigner v1\n");
        s.push_str(&format!("# {} {} {}\n", self.x_min, self.x_max, self.nx));
        s.push_str(&format!("# {} {} {}\n", self.p_min, self.p_max, self.np));
        s.push_str(&format!("# norm {}\n", self.norm()));
        for j in 0..self.np {
            // Scientific notation: exact round-trip like default formatting,
            // but far-tail values stay a few dozen bytes instead of a page
            // of leading zeros.
            let row: Vec<String> = (0..self.nx)
                .map(|i| format!("{:e}", self.value(i, j)))
                .collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    /// Parses [`Self::to_text`] output, checking the declared shape, value
    /// finiteness, and the header checksum.
    pub fn from_text(s: &str) -> Result<Self> {
        let bad = |reason: String| Error::InvalidParameter { reason };
        let mut lines = s.lines();
        let magic = lines.next().ok_or_else(|| bad("empty grid file".into()))?;
        if magic.trim() != "# wigner v1" {
            return Err(bad(format!("unrecognized grid header {magic:?}")));
        }
        let parse_axis = |line: Option<&str>, what: &str| -> Result<(f64, f64, usize)> {
            let line = line.ok_or_else(|| bad(format!("missing {what} axis header")))?;
            let parts: Vec<&str> = line.trim_start_matches('#').split_whitespace().collect();
            if parts.len() != 3 {
                return Err(bad(format!("malformed {what} axis header {line:?}")));
            }
            let lo: f64 = parts[0]
                .parse()
                .map_err(|_| bad(format!("bad {what} axis bound {:?}", parts[0])))?;
            let hi: f64 = parts[1]
                .parse()
                .map_err(|_| bad(format!("bad {what} axis bound {:?}", parts[1])))?;
            let n: usize = parts[2]
                .parse()
                .map_err(|_| bad(format!("bad {what} axis count {:?}", parts[2])))?;
            Ok((lo, hi, n))
        };
        let (x_min, x_max, nx) = parse_axis(lines.next(), "x")?;
        let (p_min, p_max, np) = parse_axis(lines.next(), "p")?;
        let norm_line = lines.next().ok_or_else(|| bad("missing norm header".into()))?;
        let norm_parts: Vec<&str> = norm_line.trim_start_matches('#').split_whitespace().collect();
        if norm_parts.len() != 2 || norm_parts[0] != "norm" {
            return Err(bad(format!("malformed norm header {norm_line:?}")));
        }
        let declared_norm: f64 = norm_parts[1]
            .parse()
            .map_err(|_| bad(format!("bad norm value {:?}", norm_parts[1])))?;
        let mut values = Vec::with_capacity(nx.saturating_mul(np));
        for (j, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let row: Vec<f64> = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<f64>()
                        .map_err(|_| bad(format!("bad grid value {t:?} in row {j}")))
                })
                .collect::<Result<_>>()?;
            if row.len() != nx {
                return Err(bad(format!(
                    "row {j} holds {} values, expected {nx}",
                    row.len()
                )));
            }
            values.extend(row);
        }
        let grid = WignerGrid {
            x_min,
            x_max,
            nx,
            p_min,
            p_max,
            np,
            values,
        };
        grid.validate()?;
        let norm = grid.norm();
        if (norm - declared_norm).abs() > 1e-9 {
            return Err(bad(format!(
                "grid checksum mismatch: header norm {declared_norm}, recomputed {norm}"
            )));
        }
        Ok(grid)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("grid serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let grid: WignerGrid = serde_json::from_str(s)?;
        grid.validate()?;
        Ok(grid)
    }
}

fn axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
        .collect()
}

/// Tabulates a source on a grid; rows are evaluated in parallel and stored
/// in deterministic row order.
pub fn fill_grid(
    source: &WignerSource,
    window: GridWindow,
    nx: usize,
    np: usize,
) -> Result<WignerGrid> {
    window.validate()?;
    if nx < 2 || np < 2 {
        return Err(Error::InvalidParameter {
            reason: format!("grid needs at least 2x2 points, got {nx}x{np}"),
        });
    }
    let xs = axis(window.x_min, window.x_max, nx);
    let ps = axis(window.p_min, window.p_max, np);
    let rows: Vec<Vec<f64>> = ps
        .par_iter()
        .map(|&p| -> Result<Vec<f64>> {
            xs.iter()
                .map(|&x| source.eval(PhasePoint::new(x, p)))
                .collect()
        })
        .collect::<Result<_>>()?;
    let mut values = Vec::with_capacity(nx * np);
    for row in rows {
        values.extend(row);
    }
    Ok(WignerGrid {
        x_min: window.x_min,
        x_max: window.x_max,
        nx,
        p_min: window.p_min,
        p_max: window.p_max,
        np,
        values,
    })
}

/// Quadrature distributions obtained by integrating the grid along the other
/// axis: `(x marginal, p marginal)`, each a plain Riemann sum.
pub fn marginals(grid: &WignerGrid) -> (Vec<f64>, Vec<f64>) {
    let dx = grid.dx();
    let dp = grid.dp();
    let mut x_marg = vec![0.0; grid.nx];
    let mut p_marg = vec![0.0; grid.np];
    for j in 0..grid.np {
        for i in 0..grid.nx {
            let w = grid.value(i, j);
            x_marg[i] += w * dp;
            p_marg[j] += w * dx;
        }
    }
    (x_marg, p_marg)
}

/// Mean of a marginal distribution (normalizing by its own mass).
pub fn marginal_mean(axis_points: &[f64], marginal: &[f64]) -> f64 {
    let mass: f64 = marginal.iter().sum();
    let weighted: f64 = axis_points
        .iter()
        .zip(marginal)
        .map(|(a, m)| a * m)
        .sum();
    weighted / mass
}
