//! Fidelity evaluation and maximization for circuit outputs against displaced
//! squeezed cat-state targets, plus reproduction of the bundled reference
//! tables.
//!
//! The objective is evaluated in a displacement-free frame: the overlap
//! between the circuit's center-frame superposition `(c0, c1, c2)` and
//! `S(r) D(-gamma) |cat>` has a closed form built from three-term recurrences
//! for squeezed-coherent amplitudes, so a single evaluation costs a handful of
//! flops regardless of the Fock dimension.  A truncated-matrix route over the
//! physical states (`fidelity_sq_physical`) provides an independent
//! cross-check.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};

use crate::circuit::{coeffs_from_circuit, invert_odd_params, Branch};
use crate::error::{Error, Result};
use crate::fock::{displacement_action, inner, normalize, StateVector, MAX_SQUEEZE};
use crate::reference::{TABLE1, TABLE2, TABLE2_ODD_15_AS_LISTED, TABLE3};
use crate::states::{
    dsscs, half_finished_state, scs_normalization, HalfFinished, TargetCat,
};

/// Unnormalized amplitudes `(c0, c1, c2)` of the superposition a circuit
/// leaves at its displacement center.
///
/// Unlike the ratio form `(1, a1, a2)`, this covers the pure-photon boundary
/// (`c0 = 0`), where the ratio diverges.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoreAmps {
    pub c0: C64,
    pub c1: C64,
    pub c2: C64,
}

impl CoreAmps {
    pub fn new(c0: C64, c1: C64, c2: C64) -> Self {
        Self { c0, c1, c2 }
    }

    /// Pure single-photon core `(0, 1, 0)` — the vacuum-seed limit of the
    /// one-addition circuit.
    pub fn photon() -> Self {
        Self::new(C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0))
    }

    /// Ratio form `(1, a1, a2)`; `a2 = None` for a two-term superposition.
    pub fn from_ratios(a1: C64, a2: Option<C64>) -> Self {
        Self::new(
            C64::new(1.0, 0.0),
            a1,
            a2.unwrap_or_else(|| C64::new(0.0, 0.0)),
        )
    }

    pub fn from_half_finished(h: &HalfFinished) -> Self {
        Self::from_ratios(h.a1(), h.a2())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c0.norm_sqr() + self.c1.norm_sqr() + self.c2.norm_sqr()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.c0.conj(), self.c1.conj(), self.c2.conj())
    }

    fn is_finite(&self) -> bool {
        [self.c0, self.c1, self.c2]
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

/// Frame displacement left over when a circuit centered at `alpha_in_total`
/// approximates a target displaced by `alpha_disp` and squeezed by `r`:
/// commuting the residual displacement past the squeezing gives
/// `gamma = delta cosh r - conj(delta) sinh r` with `delta = alpha_in_total -
/// alpha_disp`.
pub fn gamma_transform(alpha_in_total: C64, alpha_disp: C64, r: f64) -> C64 {
    let delta = alpha_in_total - alpha_disp;
    delta * r.cosh() - delta.conj() * r.sinh()
}

/// Inverse of [`gamma_transform`] in the `delta` argument:
/// `delta = Re(gamma) e^r + i Im(gamma) e^(-r)`.
pub fn gamma_transform_inverse(gamma: C64, r: f64) -> C64 {
    C64::new(gamma.re * r.exp(), gamma.im * (-r).exp())
}

/// Fidelity evaluator for one `(order, q, alpha_scs)` target family.
#[derive(Clone, Debug)]
pub struct FidelityProblem {
    order: u8,
    q: f64,
    alpha_scs: f64,
    dim: usize,
    n_q: f64,
    cos_q: f64,
    sin_q: f64,
}

/// Amplitudes `<n|S(r)|b>` for `n = 0, 1, 2` of a squeezed coherent state.
///
/// Writing `S(r) D(b) = D(bt) S(r)` with `bt = b cosh r + conj(b) sinh r`,
/// the state is annihilated by `cosh(r) a - sinh(r) a^dag - (bt cosh r -
/// conj(bt) sinh r)`, which yields a three-term recurrence seeded by the
/// vacuum overlap `sech(r)^(1/2) exp(-|bt|^2/2 + conj(bt)^2 tanh(r)/2)`.
fn squeezed_coherent_low(b: C64, r: f64) -> [C64; 3] {
    let ch = r.cosh();
    let th = r.tanh();
    let bt = b * ch + b.conj() * r.sinh();
    let exponent = C64::new(-0.5 * bt.norm_sqr(), 0.0) + 0.5 * th * bt.conj() * bt.conj();
    let g0 = (1.0 / ch).sqrt() * exponent.exp();
    let s = bt - bt.conj() * th;
    let g1 = s * g0;
    let g2 = (s * g1 + th * g0) / SQRT_2;
    [g0, g1, g2]
}

impl FidelityProblem {
    pub fn new(order: u8, q: f64, alpha_scs: f64, dim: usize) -> Result<Self> {
        if !(order == 1 || order == 2) {
            return Err(Error::InvalidParameter {
                reason: format!("order must be 1 or 2, got {order}"),
            });
        }
        if dim < 8 {
            return Err(Error::InvalidDimension { dim, min: 8 });
        }
        if !(alpha_scs.is_finite() && alpha_scs > 0.0) {
            return Err(Error::InvalidParameter {
                reason: format!("alpha_scs must be positive, got {alpha_scs}"),
            });
        }
        let n_q = scs_normalization(q, alpha_scs)?;
        Ok(Self {
            order,
            q,
            alpha_scs,
            dim,
            n_q,
            cos_q: q.cos(),
            sin_q: q.sin(),
        })
    }

    pub fn order(&self) -> u8 {
        self.order
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn alpha_scs(&self) -> f64 {
        self.alpha_scs
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Low-order amplitudes of `S(r) D(-gamma) |cat>`: the target pulled back
    /// into the circuit's center frame.
    fn chi_low(&self, gamma: C64, r: f64) -> [C64; 3] {
        let alpha = C64::new(self.alpha_scs, 0.0);
        // D(-gamma) D(b) = exp(i Im(-gamma conj(b))) D(b - gamma)
        let phase_p = C64::new(0.0, (-gamma * alpha.conj()).im).exp();
        let phase_m = C64::new(0.0, (gamma * alpha.conj()).im).exp();
        let gp = squeezed_coherent_low(alpha - gamma, r);
        let gm = squeezed_coherent_low(-alpha - gamma, r);
        let wp = self.n_q * self.cos_q * phase_p;
        let wm = self.n_q * self.sin_q * phase_m;
        [
            wp * gp[0] + wm * gm[0],
            wp * gp[1] + wm * gm[1],
            wp * gp[2] + wm * gm[2],
        ]
    }

    /// Closed-form squared fidelity; no validation, safe fallbacks (used in
    /// the optimizer's hot loop).
    fn fidelity_raw(&self, core: &CoreAmps, gamma: C64, r: f64) -> f64 {
        let n2 = core.norm_sqr();
        if !(n2 > 0.0) || !n2.is_finite() {
            return 0.0;
        }
        let chi = self.chi_low(gamma, r);
        let ov = chi[0].conj() * core.c0 + chi[1].conj() * core.c1 + chi[2].conj() * core.c2;
        ov.norm_sqr() / n2
    }

    /// Squared fidelity between the center-frame superposition `core` and the
    /// target pulled back by the frame parameters `(gamma, r)`.
    pub fn fidelity_sq(&self, core: &CoreAmps, gamma: C64, r: f64) -> Result<f64> {
        if !core.is_finite() || !(gamma.re.is_finite() && gamma.im.is_finite()) {
            return Err(Error::InvalidParameter {
                reason: "non-finite fidelity arguments".to_string(),
            });
        }
        if !r.is_finite() || r.abs() > MAX_SQUEEZE {
            return Err(Error::SqueezeOutOfRange {
                r,
                max: MAX_SQUEEZE,
            });
        }
        if core.norm_sqr() < 1e-300 {
            return Err(Error::ZeroNorm {
                norm: core.norm_sqr().sqrt(),
            });
        }
        Ok(self.fidelity_raw(core, gamma, r))
    }

    /// Squared fidelity computed on truncated Fock vectors: the circuit state
    /// displaced to `beta` against the target displaced by `alpha_disp` and
    /// squeezed by `r`.  Independent cross-check for [`Self::fidelity_sq`]
    /// with `gamma = gamma_transform(beta, alpha_disp, r)`.
    pub fn fidelity_sq_physical(
        &self,
        h: &HalfFinished,
        beta: C64,
        alpha_disp: C64,
        r: f64,
    ) -> Result<f64> {
        let target = dsscs(&TargetCat::new(self.alpha_scs, self.q, alpha_disp, r)?, self.dim)?;
        let core = half_finished_state(h, self.dim)?;
        let moved = displacement_action(beta, core.amps());
        let state = normalize(&StateVector::from_dvector(moved, 1.0))?;
        Ok(inner(&target, &state)?.norm_sqr())
    }
}

/// Knobs controlling [`maximize`].
#[derive(Clone, Debug)]
pub struct OptConfig {
    /// Fock dimension used by matrix-route cross-checks and table reports.
    pub dim: usize,
    /// Independent restarts of the simplex search.
    pub restarts: usize,
    /// Base seed; restart `k` draws its start from a stream seeded with
    /// `seed + k`.
    pub seed: u64,
    /// Objective-evaluation budget per restart.
    pub max_evals: usize,
    /// Simplex spread at which a restart stops.
    pub obj_tol: f64,
    /// Search over fully complex parameters instead of the imaginary-axis
    /// family the targets' symmetry selects.
    pub full_complex: bool,
    /// Run restarts on the thread pool (the reduction is order-deterministic
    /// either way).
    pub parallel: bool,
}

impl Default for OptConfig {
    fn default() -> Self {
        Self {
            dim: 100,
            restarts: 16,
            seed: 7,
            max_evals: 4000,
            obj_tol: 1e-10,
            full_complex: false,
            parallel: true,
        }
    }
}

/// Best parameters found for one `(order, q, alpha_scs)` problem.
#[derive(Clone, Debug, Serialize)]
pub struct OptResult {
    pub order: u8,
    pub q: f64,
    pub alpha_scs: f64,
    pub fidelity_sq: f64,
    #[serde(with = "crate::ser::c64_pair_opt")]
    pub a1: Option<C64>,
    #[serde(with = "crate::ser::c64_pair_opt")]
    pub a2: Option<C64>,
    #[serde(with = "crate::ser::c64_pair")]
    pub gamma: C64,
    pub r: f64,
    #[serde(with = "crate::ser::c64_pair")]
    pub alpha_in: C64,
    #[serde(with = "crate::ser::c64_pair_opt")]
    pub alpha_1: Option<C64>,
    #[serde(with = "crate::ser::c64_pair")]
    pub alpha_disp: C64,
    pub restarts_used: usize,
    pub evals: usize,
    pub converged: bool,
    /// Best objective value (as a fidelity) after each restart, in restart
    /// order; non-decreasing by construction.
    pub restart_bests: Vec<f64>,
}

impl OptResult {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("optimizer result serializes")
    }
}

// ---------------------------------------------------------------------------
// Nelder-Mead simplex search (deterministic, penalty-boxed).

struct NmOutcome {
    x: Vec<f64>,
    f: f64,
    evals: usize,
}

fn nelder_mead<F: Fn(&[f64]) -> f64>(
    f: &F,
    x0: &[f64],
    steps: &[f64],
    max_evals: usize,
    tol: f64,
) -> NmOutcome {
    let n = x0.len();
    let mut evals = 0usize;
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let fx0 = f(x0);
    evals += 1;
    simplex.push((x0.to_vec(), fx0));
    for i in 0..n {
        let mut xi = x0.to_vec();
        xi[i] += steps[i];
        let fi = f(&xi);
        evals += 1;
        simplex.push((xi, fi));
    }
    let order = |s: &mut Vec<(Vec<f64>, f64)>| {
        s.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    };
    order(&mut simplex);
    while evals < max_evals && simplex[n].1 - simplex[0].1 > tol {
        let mut centroid = vec![0.0; n];
        for p in &simplex[..n] {
            for j in 0..n {
                centroid[j] += p.0[j];
            }
        }
        for c in centroid.iter_mut() {
            *c /= n as f64;
        }
        let worst = simplex[n].clone();
        let along = |t: f64| -> Vec<f64> {
            (0..n).map(|j| centroid[j] + t * (centroid[j] - worst.0[j])).collect()
        };
        let xr = along(1.0);
        let fr = f(&xr);
        evals += 1;
        if fr < simplex[0].1 {
            let xe = along(2.0);
            let fe = f(&xe);
            evals += 1;
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
        } else {
            let (xc, fc) = if fr < worst.1 {
                let xc = along(0.5);
                let fc = f(&xc);
                evals += 1;
                (xc, fc)
            } else {
                let xc = along(-0.5);
                let fc = f(&xc);
                evals += 1;
                (xc, fc)
            };
            if fc < fr.min(worst.1) {
                simplex[n] = (xc, fc);
            } else {
                let best = simplex[0].0.clone();
                for p in simplex.iter_mut().skip(1) {
                    for j in 0..n {
                        p.0[j] = best[j] + 0.5 * (p.0[j] - best[j]);
                    }
                    p.1 = f(&p.0);
                    evals += 1;
                }
            }
        }
        order(&mut simplex);
    }
    NmOutcome {
        x: simplex[0].0.clone(),
        f: simplex[0].1,
        evals,
    }
}

// ---------------------------------------------------------------------------
// Search-space plumbing.

#[derive(Clone, Copy, Debug, PartialEq)]
enum Mode {
    Restricted1,
    Restricted2,
    Full1,
    Full2,
}

/// Sampling box and initial simplex steps; the trailing coordinate is `r`
/// unless it is held fixed.
fn search_space(mode: Mode, fixed_r: bool) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let (mut lo, mut hi, mut steps) = match mode {
        Mode::Restricted1 => (vec![-0.95, -3.0], vec![0.95, 3.0], vec![0.2, 0.3]),
        Mode::Restricted2 => (
            vec![-6.0, -3.0, -3.0],
            vec![6.0, 3.0, 3.0],
            vec![0.4, 0.3, 0.3],
        ),
        Mode::Full1 => (
            vec![-6.0, -6.0, -3.0, -3.0],
            vec![6.0, 6.0, 3.0, 3.0],
            vec![0.3, 0.3, 0.3, 0.3],
        ),
        Mode::Full2 => (
            vec![-6.0, -6.0, -3.0, -3.0, -3.0, -3.0],
            vec![6.0, 6.0, 3.0, 3.0, 3.0, 3.0],
            vec![0.3, 0.3, 0.3, 0.3, 0.3, 0.3],
        ),
    };
    if !fixed_r {
        lo.push(-0.9);
        hi.push(0.3);
        steps.push(0.15);
    }
    (lo, hi, steps)
}

/// Maps a search point to `(core, gamma, r)`.
///
/// The restricted modes parameterize the imaginary-axis family the real-`q`,
/// real-`alpha_scs` targets select: order 1 uses a signed interior coordinate
/// `t` with core `(t, i(1-|t|))`, which keeps the pure-photon optimum (`t=0`)
/// away from any boundary; order 2 uses `(1, iu, w)` with `gamma = ig`.
fn decode(mode: Mode, x: &[f64], fixed_r: Option<f64>) -> (CoreAmps, C64, f64) {
    let r = fixed_r.unwrap_or_else(|| *x.last().expect("non-empty search point"));
    match mode {
        Mode::Restricted1 => {
            let t = x[0];
            let core = CoreAmps::new(
                C64::new(t, 0.0),
                C64::new(0.0, 1.0 - t.abs()),
                C64::new(0.0, 0.0),
            );
            (core, C64::new(0.0, x[1]), r)
        }
        Mode::Restricted2 => {
            let core = CoreAmps::new(
                C64::new(1.0, 0.0),
                C64::new(0.0, x[0]),
                C64::new(x[1], 0.0),
            );
            (core, C64::new(0.0, x[2]), r)
        }
        Mode::Full1 => {
            let core = CoreAmps::from_ratios(C64::new(x[0], x[1]), None);
            (core, C64::new(x[2], x[3]), r)
        }
        Mode::Full2 => {
            let core = CoreAmps::from_ratios(C64::new(x[0], x[1]), Some(C64::new(x[2], x[3])));
            (core, C64::new(x[4], x[5]), r)
        }
    }
}

/// Soft quadratic walls keeping the simplex inside a sane region.
fn penalty(mode: Mode, x: &[f64], fixed_r: bool) -> f64 {
    let wall = |v: f64, lim: f64| {
        let e = v.abs() - lim;
        if e > 0.0 {
            e * e
        } else {
            0.0
        }
    };
    let mut p = match mode {
        Mode::Restricted1 => wall(x[0], 0.999) + wall(x[1], 6.0),
        Mode::Restricted2 => wall(x[0], 12.0) + wall(x[1], 8.0) + wall(x[2], 6.0),
        Mode::Full1 => wall(x[0], 12.0) + wall(x[1], 12.0) + wall(x[2], 6.0) + wall(x[3], 6.0),
        Mode::Full2 => {
            wall(x[0], 12.0)
                + wall(x[1], 12.0)
                + wall(x[2], 8.0)
                + wall(x[3], 8.0)
                + wall(x[4], 6.0)
                + wall(x[5], 6.0)
        }
    };
    if !fixed_r {
        p += wall(*x.last().expect("non-empty search point"), 1.4);
    }
    1e3 * p
}

/// Conjugation maps every optimum onto a mirror optimum of equal fidelity;
/// pick the orientation with `Im(a1) >= 0` so reports are reproducible.
fn canonicalize(core: CoreAmps, gamma: C64) -> (CoreAmps, C64) {
    let a1_im = (core.c1 * core.c0.conj()).im;
    if a1_im < -1e-12 {
        (core.conj(), gamma.conj())
    } else {
        (core, gamma)
    }
}

/// Physical circuit settings recovered from a center-frame optimum.
struct Recovered {
    a1: Option<C64>,
    a2: Option<C64>,
    alpha_in: C64,
    alpha_1: Option<C64>,
    alpha_disp: C64,
}

fn recover(order: u8, core: &CoreAmps, gamma: C64, r: f64) -> Result<Recovered> {
    let delta = gamma_transform_inverse(gamma, r);
    if order == 1 {
        let a1 = if core.c0.norm() > 1e-9 * core.c1.norm() {
            Some(core.c1 / core.c0)
        } else {
            None
        };
        let alpha_in = match a1 {
            Some(a) if a.norm() > 1e-12 => (C64::new(1.0, 0.0) / a).conj(),
            _ => C64::new(0.0, 0.0),
        };
        Ok(Recovered {
            a1,
            a2: None,
            alpha_in,
            alpha_1: None,
            alpha_disp: alpha_in - delta,
        })
    } else {
        if core.c0.norm() < 1e-12 {
            return Err(Error::DegenerateCircuit {
                reason: "two-addition optimum lost its vacuum component".to_string(),
            });
        }
        let a1 = core.c1 / core.c0;
        let a2 = core.c2 / core.c0;
        let (alpha_in, alpha_1) = invert_odd_params(a1, a2, 1)?;
        Ok(Recovered {
            a1: Some(a1),
            a2: Some(a2),
            alpha_in,
            alpha_1: Some(alpha_1),
            alpha_disp: alpha_in + alpha_1 - delta,
        })
    }
}

/// Maximizes the target fidelity over the circuit's free parameters.
pub fn maximize(order: u8, q: f64, alpha_scs: f64, cfg: &OptConfig) -> Result<OptResult> {
    maximize_with(order, q, alpha_scs, None, cfg)
}

/// [`maximize`] with the squeezing optionally held at a fixed value (used by
/// the gate table, where one `r` serves both parities).
pub fn maximize_with(
    order: u8,
    q: f64,
    alpha_scs: f64,
    fixed_r: Option<f64>,
    cfg: &OptConfig,
) -> Result<OptResult> {
    let prob = FidelityProblem::new(order, q, alpha_scs, cfg.dim)?;
    if cfg.restarts == 0 {
        return Err(Error::InvalidParameter {
            reason: "restarts must be at least 1".to_string(),
        });
    }
    if let Some(r) = fixed_r {
        if !r.is_finite() || r.abs() > MAX_SQUEEZE {
            return Err(Error::SqueezeOutOfRange {
                r: fixed_r.unwrap_or(f64::NAN),
                max: MAX_SQUEEZE,
            });
        }
    }
    let mode = match (order, cfg.full_complex) {
        (1, false) => Mode::Restricted1,
        (2, false) => Mode::Restricted2,
        (1, true) => Mode::Full1,
        _ => Mode::Full2,
    };
    let (lo, hi, steps) = search_space(mode, fixed_r.is_some());
    let objective = |x: &[f64]| -> f64 {
        let (core, gamma, r) = decode(mode, x, fixed_r);
        let f = prob.fidelity_raw(&core, gamma, r);
        if !f.is_finite() {
            return 1e10;
        }
        -f + penalty(mode, x, fixed_r.is_some())
    };
    let run_one = |k: usize| -> NmOutcome {
        // Restart 0 is deterministic from the box midpoint (the low-excursion
        // corner of every family, e.g. the bare-photon core in the
        // single-addition mode); the rest sample the box.
        let x0: Vec<f64> = if k == 0 {
            lo.iter().zip(&hi).map(|(&a, &b)| 0.5 * (a + b)).collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(k as u64));
            lo.iter()
                .zip(&hi)
                .map(|(&a, &b)| rng.gen_range(a..b))
                .collect()
        };
        nelder_mead(&objective, &x0, &steps, cfg.max_evals, cfg.obj_tol)
    };
    let outcomes: Vec<NmOutcome> = if cfg.parallel {
        (0..cfg.restarts).into_par_iter().map(run_one).collect()
    } else {
        (0..cfg.restarts).map(run_one).collect()
    };

    // Order-deterministic reduction: the reported optimum depends only on the
    // restart index ordering, never on thread scheduling.
    let mut best_f = f64::INFINITY;
    let mut best_x: &[f64] = &[];
    let mut evals = 0usize;
    let mut restart_bests = Vec::with_capacity(cfg.restarts);
    for o in &outcomes {
        evals += o.evals;
        if o.f < best_f {
            best_f = o.f;
            best_x = &o.x;
        }
        restart_bests.push(-best_f);
    }
    let window = (cfg.restarts / 4).max(1);
    let converged = cfg.restarts > window
        && restart_bests[cfg.restarts - 1] - restart_bests[cfg.restarts - 1 - window] <= 1e-9;

    let (core, gamma, r) = decode(mode, best_x, fixed_r);
    let (core, gamma) = canonicalize(core, gamma);
    let rec = recover(order, &core, gamma, r)?;
    let fidelity_sq = prob.fidelity_raw(&core, gamma, r);
    Ok(OptResult {
        order,
        q,
        alpha_scs,
        fidelity_sq,
        a1: rec.a1,
        a2: rec.a2,
        gamma,
        r,
        alpha_in: rec.alpha_in,
        alpha_1: rec.alpha_1,
        alpha_disp: rec.alpha_disp,
        restarts_used: cfg.restarts,
        evals,
        converged,
        restart_bests,
    })
}

/// The two cat targets a putative qubit rotation at angle `q` would have to
/// distinguish: the `q`-weighted cat and its `q - pi/2` partner.
pub fn rotation_targets(q: f64, alpha_scs: f64) -> Result<(TargetCat, TargetCat)> {
    Ok((
        TargetCat::bare(alpha_scs, q)?,
        TargetCat::bare(alpha_scs, q - FRAC_PI_2)?,
    ))
}

// ---------------------------------------------------------------------------
// Reference-table reproduction.

fn ser_q_sign<S: Serializer>(v: &i8, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(if *v > 0 { "+" } else { "-" })
}

/// One emitted table line.
#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub alpha_scs: f64,
    #[serde(rename = "q", serialize_with = "ser_q_sign")]
    pub q_sign: i8,
    pub branch: Branch,
    pub f_computed: f64,
    pub f_paper: f64,
    pub df: f64,
    #[serde(with = "crate::ser::c64_pair")]
    pub alpha_in: C64,
    #[serde(with = "crate::ser::c64_pair_opt")]
    pub alpha_1: Option<C64>,
    #[serde(with = "crate::ser::c64_pair")]
    pub alpha_disp: C64,
    pub r: f64,
    #[serde(with = "crate::ser::c64_pair_opt")]
    pub a1: Option<C64>,
    #[serde(with = "crate::ser::c64_pair_opt")]
    pub a2: Option<C64>,
    #[serde(with = "crate::ser::c64_pair")]
    pub gamma: C64,
    pub converged: bool,
}

/// A reproduced reference table with its worst fidelity deviation.
#[derive(Clone, Debug, Serialize)]
pub struct TableReport {
    pub table: u8,
    pub max_abs_df: f64,
    pub notes: Vec<String>,
    pub rows: Vec<TableRow>,
}

impl TableReport {
    /// Stable CSV rendering (header fixed, default float formatting, no
    /// timestamps — reruns are byte-identical).
    pub fn to_csv(&self) -> String {
        let mut s = String::from(
            "alpha_scs,q,branch,F_computed,F_paper,dF,alpha_in_re,alpha_in_im,alpha_1_re,alpha_1_im,alpha_disp_re,alpha_disp_im,r,converged\n",
        );
        for row in &self.rows {
            let a1c = row.alpha_1.unwrap_or_else(|| C64::new(0.0, 0.0));
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                row.alpha_scs,
                if row.q_sign > 0 { "+" } else { "-" },
                row.branch,
                row.f_computed,
                row.f_paper,
                row.df,
                row.alpha_in.re,
                row.alpha_in.im,
                a1c.re,
                a1c.im,
                row.alpha_disp.re,
                row.alpha_disp.im,
                row.r,
                row.converged,
            ));
        }
        s
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("table report serializes")
    }
}

fn row_from_result(res: &OptResult, q_sign: i8, branch: Branch, f_paper: f64) -> TableRow {
    TableRow {
        alpha_scs: res.alpha_scs,
        q_sign,
        branch,
        f_computed: res.fidelity_sq,
        f_paper,
        df: res.fidelity_sq - f_paper,
        alpha_in: res.alpha_in,
        alpha_1: res.alpha_1,
        alpha_disp: res.alpha_disp,
        r: res.r,
        a1: res.a1,
        a2: res.a2,
        gamma: res.gamma,
        converged: res.converged,
    }
}

/// The partner-root row of a two-addition optimum: same coefficients and
/// frame, the other solution of the seed quadratic.  Its circuit center is
/// the branch-a seed, so the target displacement shifts accordingly.
fn branch_b_row(res: &OptResult, q_sign: i8, f_paper: f64) -> Result<TableRow> {
    let a1 = res.a1.ok_or_else(|| Error::InvalidParameter {
        reason: "branch-b rows need a two-addition result".to_string(),
    })?;
    let a2 = res.a2.ok_or_else(|| Error::InvalidParameter {
        reason: "branch-b rows need a two-addition result".to_string(),
    })?;
    let (alpha_in_b, alpha_1_b) = invert_odd_params(a1, a2, -1)?;
    let delta = gamma_transform_inverse(res.gamma, res.r);
    Ok(TableRow {
        alpha_scs: res.alpha_scs,
        q_sign,
        branch: Branch::B,
        f_computed: res.fidelity_sq,
        f_paper,
        df: res.fidelity_sq - f_paper,
        alpha_in: alpha_in_b,
        alpha_1: Some(alpha_1_b),
        alpha_disp: alpha_in_b + alpha_1_b - delta,
        r: res.r,
        a1: res.a1,
        a2: res.a2,
        gamma: res.gamma,
        converged: res.converged,
    })
}

/// Re-derives reference table 1, 2, or 3 by running the optimizer.
pub fn reproduce_table(which: u8, cfg: &OptConfig) -> Result<TableReport> {
    match which {
        1 => table1(cfg),
        2 => table2(cfg),
        3 => table3(cfg),
        _ => Err(Error::InvalidParameter {
            reason: format!("no reference table {which}; choose 1, 2, or 3"),
        }),
    }
}

fn finalize(table: u8, rows: Vec<TableRow>, notes: Vec<String>) -> TableReport {
    let max_abs_df = rows.iter().map(|r| r.df.abs()).fold(0.0, f64::max);
    TableReport {
        table,
        max_abs_df,
        notes,
        rows,
    }
}

fn table1(cfg: &OptConfig) -> Result<TableReport> {
    let notes = vec![
        "single-addition circuit: alpha_1 is reported as zero (no intermediate displacement)"
            .to_string(),
        "odd-structure optima sit at a vacuum seed approximating an undisplaced target"
            .to_string(),
    ];
    let mut rows = Vec::with_capacity(2 * TABLE1.len());
    for t in &TABLE1 {
        let even = maximize(1, FRAC_PI_4, t.alpha_scs, cfg)?;
        rows.push(row_from_result(&even, 1, Branch::A, t.f_plus));
        let odd = maximize(1, -FRAC_PI_4, t.alpha_scs, cfg)?;
        rows.push(row_from_result(&odd, -1, Branch::A, t.f_minus));
    }
    Ok(finalize(1, rows, notes))
}

fn table2(cfg: &OptConfig) -> Result<TableReport> {
    let notes = vec![
        format!(
            "alpha_scs=1.5 odd: the tabulated source lists F = {TABLE2_ODD_15_AS_LISTED}, which duplicates the 1.3 row; F_paper uses 0.973453, the value direct evaluation at the listed parameters confirms"
        ),
        "branch b is the partner root of the seed quadratic: same coefficients and fidelity, displaced target".to_string(),
    ];
    let mut rows = Vec::with_capacity(4 * TABLE2.len());
    for t in &TABLE2 {
        let even = maximize(2, FRAC_PI_4, t.alpha_scs, cfg)?;
        rows.push(row_from_result(&even, 1, Branch::A, t.f_plus));
        rows.push(branch_b_row(&even, 1, t.f_plus)?);
        let odd = maximize(2, -FRAC_PI_4, t.alpha_scs, cfg)?;
        rows.push(row_from_result(&odd, -1, Branch::A, t.f_minus));
        rows.push(branch_b_row(&odd, -1, t.f_minus)?);
    }
    Ok(finalize(2, rows, notes))
}

fn table3(cfg: &OptConfig) -> Result<TableReport> {
    let mut notes = vec![
        "per row: squeezing fixed, odd side re-optimized, even side forced by the shared intermediate displacement (alpha_in = -alpha_1/2, gamma = 0)".to_string(),
    ];
    let mut rows = Vec::with_capacity(2 * TABLE3.len());
    let mut worst_beta_dev = 0.0f64;
    for t in &TABLE3 {
        let odd = maximize_with(2, -FRAC_PI_4, t.alpha_scs, Some(t.r), cfg)?;
        let alpha_1 = odd.alpha_1.ok_or_else(|| Error::DegenerateCircuit {
            reason: "gate table requires the two-addition circuit".to_string(),
        })?;

        let alpha_in_plus = -alpha_1 / 2.0;
        let h_plus = coeffs_from_circuit(alpha_in_plus, alpha_1)?;
        let even_prob = FidelityProblem::new(2, FRAC_PI_4, t.alpha_scs, cfg.dim)?;
        let f_plus = even_prob.fidelity_sq(
            &CoreAmps::from_half_finished(&h_plus),
            C64::new(0.0, 0.0),
            t.r,
        )?;
        rows.push(TableRow {
            alpha_scs: t.alpha_scs,
            q_sign: 1,
            branch: Branch::A,
            f_computed: f_plus,
            f_paper: t.f_plus,
            df: f_plus - t.f_plus,
            alpha_in: alpha_in_plus,
            alpha_1: Some(alpha_1),
            alpha_disp: -alpha_in_plus,
            r: t.r,
            a1: Some(h_plus.a1()),
            a2: h_plus.a2(),
            gamma: C64::new(0.0, 0.0),
            converged: odd.converged,
        });
        rows.push(row_from_result(&odd, -1, Branch::A, t.f_minus));

        // One common shift serves both inputs by construction; report how far
        // it sits from the tabulated value.
        let beta = (alpha_in_plus + odd.alpha_in) / 2.0;
        worst_beta_dev = worst_beta_dev.max((beta - C64::new(0.0, t.beta_im)).norm());
    }
    notes.push(format!(
        "largest deviation of the derived common shift from the tabulated beta: {worst_beta_dev:.2e}"
    ));
    Ok(finalize(3, rows, notes))
}
