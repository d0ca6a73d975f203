//! Photon-addition / displacement circuits on a coherent seed, parameter
//! inversion between circuit settings and superposition coefficients, and the
//! displacing Hadamard gate built from them.
//!
//! A circuit starts from a coherent seed and applies a left-to-right sequence
//! of creation-operator kicks and displacements.  With one addition the output
//! is a displaced two-term superposition; with two additions separated by an
//! intermediate displacement it is a displaced three-term superposition whose
//! coefficient ratios `(a1, a2)` are closed-form functions of the seed and the
//! intermediate shift.

use nalgebra::DVector;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::SQRT_2;

use crate::error::{Error, Result};
use crate::fock::{displacement_action, mix, normalize, outer, DensityMatrix, StateVector};
use crate::states::{coherent, HalfFinished};

/// Largest tolerated occupation fraction in the top eighth of the basis for a
/// circuit output; more mass there means the cutoff clipped the state.
const TAIL_LIMIT: f64 = 1e-8;

/// One element of a photon-addition circuit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CircuitStep {
    /// Apply the creation operator (unnormalized photon addition).
    AddPhoton,
    /// Apply the displacement operator with the given amplitude.
    Displace(C64),
}

/// Wire format for [`CircuitStep`]: `{"add": true}` or `{"displace": [re, im]}`.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum StepRepr {
    Add { add: bool },
    Displace { displace: [f64; 2] },
}

impl From<CircuitStep> for StepRepr {
    fn from(step: CircuitStep) -> Self {
        match step {
            CircuitStep::AddPhoton => StepRepr::Add { add: true },
            CircuitStep::Displace(b) => StepRepr::Displace {
                displace: [b.re, b.im],
            },
        }
    }
}

impl TryFrom<StepRepr> for CircuitStep {
    type Error = String;

    fn try_from(repr: StepRepr) -> std::result::Result<Self, String> {
        match repr {
            StepRepr::Add { add: true } => Ok(CircuitStep::AddPhoton),
            StepRepr::Add { add: false } => {
                Err("\"add\" must be true when present".to_string())
            }
            StepRepr::Displace { displace: [re, im] } => {
                Ok(CircuitStep::Displace(C64::new(re, im)))
            }
        }
    }
}

impl Serialize for CircuitStep {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StepRepr::from(*self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for CircuitStep {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = StepRepr::deserialize(d)?;
        CircuitStep::try_from(repr).map_err(serde::de::Error::custom)
    }
}

/// Serializable description of a full circuit run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitSpec {
    /// Coherent seed amplitude, encoded as `[re, im]`.
    #[serde(with = "crate::ser::c64_pair")]
    pub seed: C64,
    /// Fock-space dimension for the run.
    pub dim: usize,
    /// Steps applied left to right.
    pub steps: Vec<CircuitStep>,
}

impl CircuitSpec {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("circuit spec serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Creation operator applied directly to an amplitude vector.
fn raise(v: &DVector<C64>) -> DVector<C64> {
    let dim = v.len();
    let mut out = DVector::from_element(dim, C64::new(0.0, 0.0));
    for n in 0..dim - 1 {
        out[n + 1] = ((n + 1) as f64).sqrt() * v[n];
    }
    out
}

/// Runs a circuit and returns the normalized output.
///
/// The state is renormalized once, at the end; the discarded norm is folded
/// into the output's `scale`, so the scale tracks the product of the
/// creation-operator norms (displacements are norm-preserving).
///
/// The cumulative excursion `(|seed| + sum of |displacements|)^2` must stay
/// below `dim / 4`, and after the run at most `1e-8` of the probability mass
/// may sit in the top eighth of the basis; otherwise the truncated basis
/// cannot represent the output faithfully and an error is returned.
pub fn run_circuit(spec: &CircuitSpec) -> Result<StateVector> {
    let mut excursion = spec.seed.norm();
    for step in &spec.steps {
        if let CircuitStep::Displace(b) = step {
            excursion += b.norm();
        }
    }
    if excursion * excursion > spec.dim as f64 / 4.0 {
        return Err(Error::TruncationUnsafe {
            alpha_sq: excursion * excursion,
            limit: spec.dim as f64 / 4.0,
        });
    }

    let seed = coherent(spec.seed, spec.dim)?;
    let mut amps = seed.amps().clone();
    for step in &spec.steps {
        amps = match step {
            CircuitStep::AddPhoton => raise(&amps),
            CircuitStep::Displace(b) => displacement_action(*b, &amps),
        };
    }

    let raw = StateVector::from_dvector(amps, 1.0);
    if raw.tail_mass() > TAIL_LIMIT {
        return Err(Error::TailMass {
            tail: raw.tail_mass(),
            limit: TAIL_LIMIT,
        });
    }
    normalize(&raw)
}

/// Coefficient ratios `(a1, a2)` of the three-term superposition left at the
/// center `alpha_in + alpha_1` by the two-addition circuit
/// (seed `alpha_in`, intermediate displacement `alpha_1`).
pub fn coeffs_from_circuit(alpha_in: C64, alpha_1: C64) -> Result<HalfFinished> {
    let u = alpha_in.conj();
    let v = alpha_1.conj();
    if u.norm() < 1e-12 {
        return Err(Error::DegenerateCircuit {
            reason: "seed amplitude is zero; coefficient ratios are undefined".to_string(),
        });
    }
    if (v + u).norm() < 1e-12 {
        return Err(Error::DegenerateCircuit {
            reason: "alpha_1 + alpha_in is zero; the circuit center collapses onto the seed"
                .to_string(),
        });
    }
    let den = u * (v + u);
    let a1 = (v + 2.0 * u) / den;
    let a2 = C64::new(SQRT_2, 0.0) / den;
    HalfFinished::order2(a1, a2)
}

/// Recovers circuit settings from an even-structure optimum (`a1 = 0`,
/// real `a2 > 0`): returns `(alpha_in, alpha_1, alpha_disp)` with
/// `alpha_in = sign * i * sqrt(sqrt(2)/a2)`, `alpha_1 = -2 alpha_in`,
/// `alpha_disp = -alpha_in`.  `sign = -1` selects the mirrored settings.
pub fn invert_even_params(a2: f64, sign: i8) -> Result<(C64, C64, C64)> {
    if !(a2.is_finite() && a2 > 0.0) {
        return Err(Error::InvalidParameter {
            reason: format!("a2 must be a positive finite real, got {a2}"),
        });
    }
    if !(sign == 1 || sign == -1) {
        return Err(Error::InvalidParameter {
            reason: format!("sign must be +1 or -1, got {sign}"),
        });
    }
    let mag = (SQRT_2 / a2).sqrt();
    let alpha_in = C64::new(0.0, sign as f64 * mag);
    Ok((alpha_in, -2.0 * alpha_in, -alpha_in))
}

/// Recovers circuit settings `(alpha_in, alpha_1)` from general coefficient
/// ratios `(a1, a2)` by solving the quadratic
/// `u^2 - sqrt(2) (a1/a2) u + sqrt(2)/a2 = 0` for `u = conj(alpha_in)`.
///
/// `branch = +1` takes the root `u = a1/(sqrt(2) a2) - sqrt(D)/2` with
/// `conj(alpha_1) = +sqrt(D)` ("a"); `branch = -1` takes the other root ("b").
/// Both describe the same output state.  `D = 2 (a1/a2)^2 - 4 sqrt(2)/a2` uses
/// the principal complex square root.
pub fn invert_odd_params(a1: C64, a2: C64, branch: i8) -> Result<(C64, C64)> {
    if a2.norm() < 1e-12 {
        return Err(Error::DegenerateCircuit {
            reason: "a2 is zero; a two-addition circuit always has a2 != 0".to_string(),
        });
    }
    if !(branch == 1 || branch == -1) {
        return Err(Error::InvalidParameter {
            reason: format!("branch must be +1 (a) or -1 (b), got {branch}"),
        });
    }
    let ratio = a1 / a2;
    let d = 2.0 * ratio * ratio - 4.0 * C64::new(SQRT_2, 0.0) / a2;
    let sd = d.sqrt();
    let b = branch as f64;
    let u = ratio / SQRT_2 - b * sd / 2.0;
    let v = b * sd;
    if u.norm() < 1e-12 {
        return Err(Error::DegenerateCircuit {
            reason: "recovered seed amplitude is zero".to_string(),
        });
    }
    Ok((u.conj(), v.conj()))
}

/// Which quadratic root a parameter set was built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    A,
    B,
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Branch::A => write!(f, "a"),
            Branch::B => write!(f, "b"),
        }
    }
}

/// Parameter block for the displacing Hadamard gate.
///
/// The gate encodes a qubit in coherent amplitudes `±alpha_hg`, shifts by a
/// common `beta`, and runs the two-addition circuit with a shared intermediate
/// displacement `alpha_1` and a shared squeezing `r` for both inputs.  The
/// invariants tying the fields together are enforced at construction:
///
/// * `alpha_in_plus  = +alpha_hg + beta_plus`
/// * `alpha_in_minus = -alpha_hg + beta_minus`
/// * `|alpha_hg| = alpha_scs * exp(-gamma_absorb)`
#[derive(Clone, Debug)]
pub struct HadamardParams {
    pub alpha_scs: f64,
    pub r: f64,
    pub alpha_1: C64,
    pub alpha_hg: C64,
    pub beta_plus: C64,
    pub beta_minus: C64,
    pub alpha_in_plus: C64,
    pub alpha_in_minus: C64,
    pub alpha_plus: C64,
    pub alpha_minus: C64,
    pub gamma_absorb: f64,
    pub branch: Branch,
}

impl HadamardParams {
    /// Validates and stores a fully specified parameter block.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        alpha_scs: f64,
        r: f64,
        alpha_1: C64,
        alpha_hg: C64,
        beta_plus: C64,
        beta_minus: C64,
        alpha_in_plus: C64,
        alpha_in_minus: C64,
        alpha_plus: C64,
        alpha_minus: C64,
        gamma_absorb: f64,
        branch: Branch,
    ) -> Result<Self> {
        if !(alpha_scs.is_finite() && alpha_scs > 0.0) {
            return Err(Error::InvalidParameter {
                reason: format!("alpha_scs must be positive, got {alpha_scs}"),
            });
        }
        if !(gamma_absorb.is_finite() && gamma_absorb >= 0.0) {
            return Err(Error::InvalidParameter {
                reason: format!("gamma_absorb must be nonnegative, got {gamma_absorb}"),
            });
        }
        let d_plus = (alpha_in_plus - (alpha_hg + beta_plus)).norm();
        if d_plus > 1e-9 {
            return Err(Error::InvalidParameter {
                reason: format!(
                    "alpha_in_plus does not equal alpha_hg + beta_plus (off by {d_plus:.3e})"
                ),
            });
        }
        let d_minus = (alpha_in_minus - (-alpha_hg + beta_minus)).norm();
        if d_minus > 1e-9 {
            return Err(Error::InvalidParameter {
                reason: format!(
                    "alpha_in_minus does not equal -alpha_hg + beta_minus (off by {d_minus:.3e})"
                ),
            });
        }
        let d_abs = (alpha_hg.norm() - alpha_scs * (-gamma_absorb).exp()).abs();
        if d_abs > 1e-9 {
            return Err(Error::InvalidParameter {
                reason: format!(
                    "|alpha_hg| does not equal alpha_scs*exp(-gamma_absorb) (off by {d_abs:.3e})"
                ),
            });
        }
        Ok(Self {
            alpha_scs,
            r,
            alpha_1,
            alpha_hg,
            beta_plus,
            beta_minus,
            alpha_in_plus,
            alpha_in_minus,
            alpha_plus,
            alpha_minus,
            gamma_absorb,
            branch,
        })
    }

    /// Assembles a consistent block from the circuit-level quantities alone.
    ///
    /// `alpha_hg` and the common shift are derived as the half-difference and
    /// half-sum of the two seeds, so the stored fields satisfy the gate
    /// invariants exactly; `alpha_plus` is fixed to `-alpha_in_plus` (the
    /// even-structure relation) and the absorption factor follows from
    /// `|alpha_hg|`.  Requires `|alpha_hg| <= alpha_scs`.
    pub fn derive(
        alpha_scs: f64,
        r: f64,
        alpha_1: C64,
        alpha_in_plus: C64,
        alpha_in_minus: C64,
        alpha_minus: C64,
        branch: Branch,
    ) -> Result<Self> {
        let alpha_hg = (alpha_in_plus - alpha_in_minus) / 2.0;
        let beta = (alpha_in_plus + alpha_in_minus) / 2.0;
        if alpha_hg.norm() < 1e-12 {
            return Err(Error::InvalidParameter {
                reason: "alpha_in_plus equals alpha_in_minus; the qubit encoding is degenerate"
                    .to_string(),
            });
        }
        if alpha_hg.norm() > alpha_scs * (1.0 + 1e-12) {
            return Err(Error::InvalidParameter {
                reason: format!(
                    "|alpha_hg| = {} exceeds alpha_scs = {alpha_scs}; no attenuation maps one onto the other",
                    alpha_hg.norm()
                ),
            });
        }
        let gamma_absorb = (alpha_scs / alpha_hg.norm()).ln();
        Self::new(
            alpha_scs,
            r,
            alpha_1,
            alpha_hg,
            beta,
            beta,
            alpha_in_plus,
            alpha_in_minus,
            -alpha_in_plus,
            alpha_minus,
            gamma_absorb,
            branch,
        )
    }
}

/// Runs the Hadamard-gate circuit on the basis input `±alpha_hg`.
///
/// The seed is `input_sign * alpha_hg + beta_(sign)` and the circuit is
/// `[AddPhoton, Displace(alpha_1), AddPhoton]`.
pub fn hadamard_gate(input_sign: i8, params: &HadamardParams, dim: usize) -> Result<StateVector> {
    let (sign, beta) = match input_sign {
        1 => (1.0, params.beta_plus),
        -1 => (-1.0, params.beta_minus),
        _ => {
            return Err(Error::InvalidParameter {
                reason: format!("input_sign must be +1 or -1, got {input_sign}"),
            })
        }
    };
    let spec = CircuitSpec {
        seed: sign * params.alpha_hg + beta,
        dim,
        steps: vec![
            CircuitStep::AddPhoton,
            CircuitStep::Displace(params.alpha_1),
            CircuitStep::AddPhoton,
        ],
    };
    run_circuit(&spec)
}

/// Front-end conditioning for a gate fed directly with `±alpha_scs`: a 90°
/// phase rotation followed by attenuation `exp(-gamma)` maps the amplitude
/// onto the gate's `±alpha_hg = ±i alpha_scs exp(-gamma)` encoding.
pub fn preprocess_front_end(alpha_scs: f64, gamma: f64) -> Result<C64> {
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(Error::InvalidParameter {
            reason: format!("absorption exponent must be nonnegative, got {gamma}"),
        });
    }
    Ok(C64::new(0.0, alpha_scs * (-gamma).exp()))
}

/// Detector imperfection: with probability `dark_prob` the heralded output is
/// replaced by `fallback`.
#[derive(Clone, Debug)]
pub struct NoiseModel {
    dark_prob: f64,
    fallback: DensityMatrix,
}

impl NoiseModel {
    pub fn new(dark_prob: f64, fallback: DensityMatrix) -> Result<Self> {
        if !(0.0..=1.0).contains(&dark_prob) || !dark_prob.is_finite() {
            return Err(Error::InvalidParameter {
                reason: format!("dark_prob must lie in [0, 1], got {dark_prob}"),
            });
        }
        Ok(Self {
            dark_prob,
            fallback,
        })
    }

    pub fn dark_prob(&self) -> f64 {
        self.dark_prob
    }

    pub fn fallback(&self) -> &DensityMatrix {
        &self.fallback
    }
}

/// Mixes the ideal pure output with the noise model's fallback state:
/// `(1 - P) |ideal><ideal| + P fallback`.
pub fn noisy_output(ideal: &StateVector, noise: &NoiseModel) -> Result<DensityMatrix> {
    if ideal.dim() != noise.fallback.dim() {
        return Err(Error::DimensionMismatch {
            left: ideal.dim(),
            right: noise.fallback.dim(),
        });
    }
    let pure = outer(ideal)?;
    mix(&[
        (1.0 - noise.dark_prob, pure),
        (noise.dark_prob, noise.fallback.clone()),
    ])
}
