//! Spectral ingredients of the random environment.
//!
//! Everything in the model is expressed through Fourier-space data on the
//! unit disk:
//!
//! * a smooth compactly supported radial bump `V̂(p) = û(|p|)²` with
//!   `V̂(0) = 1` and `V̂ = 0` outside `|p| < 1`;
//! * a per-wavevector relaxation rate `m(p)` (a power of `|p|`, or a
//!   log-corrected square);
//! * the incompressible spectral density
//!   `S(p) = (2π)⁻² V̂(p) (p⊥ ⊗ p⊥)/|p|²` with `p⊥ = (p₂, −p₁)`;
//! * the space-time covariance `R(t, x) = ∫ cos(p·x) e^{−m(p) t} S(p) dp`,
//!   evaluated by adaptive polar quadrature. `R` is the oracle against which
//!   the synthesized field is validated.

use std::f64::consts::{E, TAU};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::quad::{self, QuadError};

/// Default infrared exclusion radius: wavevectors with `|p| ≤ ir_cutoff` are
/// never sampled. The excluded spectral mass is `O(cutoff²)` because the
/// trace density is bounded.
pub const DEFAULT_IR_CUTOFF: f64 = 1e-6;

/// Spectral-profile parameters. The bump profile itself is fixed (see
/// [`bump_radial`]); the cutoff radius of its support is 1 by construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpectralKernel {
    /// Infrared exclusion radius for mode sampling, in `(0, 1)`.
    pub ir_cutoff: f64,
}

impl Default for SpectralKernel {
    fn default() -> Self {
        Self {
            ir_cutoff: DEFAULT_IR_CUTOFF,
        }
    }
}

impl SpectralKernel {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.ir_cutoff > 0.0 && self.ir_cutoff < 0.5) {
            return Err(format!(
                "ir_cutoff must lie in (0, 0.5), got {}",
                self.ir_cutoff
            ));
        }
        Ok(())
    }
}

/// Relaxation-rate family for the environment dynamics.
///
/// * `Power { s }` — `m(p) = |p|^{2s}` with `s ≥ 0`; `s = 0` pins every
///   rate to 1 (pure Ornstein–Uhlenbeck refresh), `s = 1` is the heat rate.
/// * `LogModified { gamma }` — `m(p) = |p|² (log(e + |p|⁻²))^γ` with
///   `γ > 0`, a logarithmic speed-up of the `s = 1` rates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum DynamicsSpec {
    Power { s: f64 },
    LogModified { gamma: f64 },
}

impl DynamicsSpec {
    /// The rate as a function of `r = |p| ≥ 0`, continuously extended to
    /// `r = 0` (value 1 for `Power { s: 0 }`, else 0).
    pub fn rate_radial(self, r: f64) -> f64 {
        debug_assert!(r >= 0.0);
        match self {
            DynamicsSpec::Power { s } => {
                if s == 0.0 {
                    1.0
                } else if s == 0.5 {
                    r
                } else if s == 1.0 {
                    r * r
                } else {
                    r.powf(2.0 * s)
                }
            }
            DynamicsSpec::LogModified { gamma } => {
                if r == 0.0 {
                    0.0
                } else {
                    let r2 = r * r;
                    r2 * (E + 1.0 / r2).ln().powf(gamma)
                }
            }
        }
    }

    pub fn validate(self) -> Result<(), String> {
        match self {
            DynamicsSpec::Power { s } => {
                if !(s.is_finite() && s >= 0.0) {
                    return Err(format!("power dynamics needs s ≥ 0, got {s}"));
                }
            }
            DynamicsSpec::LogModified { gamma } => {
                if !(gamma.is_finite() && gamma > 0.0) {
                    return Err(format!("log_modified dynamics needs gamma > 0, got {gamma}"));
                }
            }
        }
        Ok(())
    }
}

/// The relaxation rate `m(p)` for a 2-vector argument.
pub fn dynamics_rate(p: [f64; 2], dynamics: DynamicsSpec) -> f64 {
    dynamics.rate_radial((p[0] * p[0] + p[1] * p[1]).sqrt())
}

/// The radial bump `û(r) = exp(1 − 1/(1 − r²))` for `r < 1`, zero outside:
/// smooth, compactly supported, `û(0) = 1`.
pub fn bump_radial(r: f64) -> f64 {
    let r = r.abs();
    if r >= 1.0 {
        return 0.0;
    }
    (1.0 - 1.0 / (1.0 - r * r)).exp()
}

/// Radial profile of `V̂`: the squared bump.
pub fn v_hat_radial(r: f64) -> f64 {
    let u = bump_radial(r);
    u * u
}

/// `V̂(p) = û(|p|)²` — nonnegative, radial, `V̂(0) = 1`, zero outside the
/// unit ball.
pub fn mollifier_hat(p: [f64; 2]) -> f64 {
    v_hat_radial((p[0] * p[0] + p[1] * p[1]).sqrt())
}

/// Total spectral mass `Z_V = ∫_{ℝ²} V̂(p) dp = 2π ∫₀¹ r V̂(r) dr` (cached).
pub fn mollifier_mass() -> f64 {
    static CACHE: OnceLock<f64> = OnceLock::new();
    *CACHE.get_or_init(|| {
        TAU * quad::integrate(|r| r * v_hat_radial(r), 0.0, 1.0, 1e-14, 0.0)
            .expect("smooth bounded integrand on [0,1]")
            .value
    })
}

/// The incompressible spectral density
/// `S(p) = (2π)⁻² V̂(p) (p⊥ ⊗ p⊥)/|p|²` with `p⊥ = (p₂, −p₁)`.
///
/// Symmetric and positive semidefinite; `S(p)·p` vanishes identically, and
/// the returned entries reproduce that cancellation to within a couple of
/// ulps (a rounded symmetric matrix cannot annihilate `p` bitwise in both
/// rows at once). The projection direction is ill-defined at `p = 0`, which
/// is rejected.
pub fn spectral_density(p: [f64; 2]) -> [[f64; 2]; 2] {
    let norm2 = p[0] * p[0] + p[1] * p[1];
    assert!(
        norm2 > 0.0,
        "spectral_density is undefined at p = 0 (projection direction is ambiguous)"
    );
    let scale = mollifier_hat(p) / (TAU * TAU * norm2);
    let off = -scale * p[0] * p[1];
    [[scale * p[1] * p[1], off], [off, scale * p[0] * p[0]]]
}

/// Space-time covariance by adaptive polar quadrature with the default
/// absolute tolerance `1e-10` per entry.
pub fn covariance_quadrature(
    t: f64,
    x: [f64; 2],
    dynamics: DynamicsSpec,
) -> Result<[[f64; 2]; 2], QuadError> {
    covariance_quadrature_tol(t, x, dynamics, 1e-10)
}

/// `R(t, x) = ∫_{|p|<1} cos(p·x) e^{−m(p) t} S(p) dp`, adaptive
/// Gauss–Kronrod in radius, auto-refined periodic trapezoid in angle.
///
/// In polar coordinates `p = r(cos θ, sin θ)` the projector becomes
/// `(p⊥ ⊗ p⊥)/r² = [[sin²θ, −sinθcosθ], [−sinθcosθ, cos²θ]]`, so each entry
/// is a 1-d radial integral of `r V̂(r) e^{−m(r)t}` against a smooth angular
/// factor. Non-convergence surfaces the achieved error estimate.
pub fn covariance_quadrature_tol(
    t: f64,
    x: [f64; 2],
    dynamics: DynamicsSpec,
    abs_tol: f64,
) -> Result<[[f64; 2]; 2], QuadError> {
    assert!(t >= 0.0, "covariance requires t ≥ 0");
    assert!(abs_tol > 0.0);
    let angular_tol = abs_tol * 0.1;

    let entry = |index: usize| -> Result<f64, QuadError> {
        let radial = |r: f64| -> f64 {
            let weight = v_hat_radial(r);
            if weight == 0.0 {
                return 0.0;
            }
            let damp = (-dynamics.rate_radial(r) * t).exp();
            let (angular, _) = quad::periodic_trapezoid_auto(
                |theta| {
                    let (sin_t, cos_t) = theta.sin_cos();
                    let phase = (r * (x[0] * cos_t + x[1] * sin_t)).cos();
                    let projector = match index {
                        0 => sin_t * sin_t,
                        1 => -sin_t * cos_t,
                        _ => cos_t * cos_t,
                    };
                    phase * projector
                },
                angular_tol,
            );
            r * weight * damp * angular / (TAU * TAU)
        };
        Ok(quad::integrate_with_budget(&radial, 0.0, 1.0, abs_tol, 0.0, 4096)?.value)
    };

    let r00 = entry(0)?;
    let r01 = entry(1)?;
    let r11 = entry(2)?;
    Ok([[r00, r01], [r01, r11]])
}
