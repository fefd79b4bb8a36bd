//! Design inversion for a single unknown by bisection.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::{achieved_tangential_v, evaluate_mission, rate_to_tangential_v, MissionError, MissionReport, MissionSpec};

/// Sizes below this are returned with a plausibility warning.
pub const SUB_ATOMIC_SIZE_M: f64 = 1e-10;

const MAX_ITERATIONS: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Unknown {
    Chi0,
    ParticleSize,
    ActiveMassFraction,
}

impl Unknown {
    pub fn name(self) -> &'static str {
        match self {
            Unknown::Chi0 => "chi0",
            Unknown::ParticleSize => "particle_size",
            Unknown::ActiveMassFraction => "active_mass_fraction",
        }
    }

    pub fn default_bracket(self) -> (f64, f64) {
        match self {
            Unknown::Chi0 | Unknown::ActiveMassFraction => (1e-8, 1.0),
            Unknown::ParticleSize => (1e-11, 1e-6),
        }
    }

    fn set(self, spec: &MissionSpec, value: f64) -> MissionSpec {
        let mut s = *spec;
        match self {
            Unknown::Chi0 => s.chi0 = value,
            Unknown::ParticleSize => s.particle_size = value,
            Unknown::ActiveMassFraction => s.active_mass_fraction = value,
        }
        s
    }
}

impl fmt::Display for Unknown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Unknown {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "chi0" => Ok(Unknown::Chi0),
            "particle_size" => Ok(Unknown::ParticleSize),
            "active_mass_fraction" | "fraction" => Ok(Unknown::ActiveMassFraction),
            other => Err(format!(
                "unknown `{other}`; expected chi0, particle_size or active_mass_fraction"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Solution {
    pub unknown: Unknown,
    pub value: f64,
    pub report: MissionReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

/// Solves over the default bracket of `unknown`.
pub fn solve_for_unknown(spec: &MissionSpec, unknown: Unknown) -> Result<Solution, MissionError> {
    let (lo, hi) = unknown.default_bracket();
    solve_for_unknown_in(spec, unknown, lo, hi)
}

/// Finds the value of `unknown` in [lo, hi] at which the achieved tangential
/// speed equals the required one. The value already in `spec` for that field
/// is ignored.
pub fn solve_for_unknown_in(spec: &MissionSpec, unknown: Unknown, lo: f64, hi: f64) -> Result<Solution, MissionError> {
    if !(lo.is_finite() && hi.is_finite() && 0.0 < lo && lo < hi) {
        return Err(MissionError::InvalidSpec(vec![format!(
            "bracket [{lo}, {hi}] must satisfy 0 < lo < hi"
        )]));
    }
    // Validate everything except the unknown by filling it with a legal value.
    unknown.set(spec, lo).validate()?;
    let required = rate_to_tangential_v(spec.target_rate, spec.wheel_radius).value;
    let residual = |x: f64| -> Result<f64, MissionError> {
        Ok(achieved_tangential_v(&unknown.set(spec, x))?.value / required - 1.0)
    };

    let infeasible = || MissionError::Infeasible { unknown, lo, hi };
    let (mut a, mut b) = (lo, hi);
    let (fa, fb) = (residual(a)?, residual(b)?);
    let root = if fa == 0.0 {
        a
    } else if fb == 0.0 {
        b
    } else if fa.signum() == fb.signum() {
        return Err(infeasible());
    } else {
        let rising = fb > 0.0;
        let mut exact = None;
        for _ in 0..MAX_ITERATIONS {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            let f = residual(mid)?;
            if f == 0.0 {
                exact = Some(mid);
                break;
            }
            if (f > 0.0) == rising {
                b = mid;
            } else {
                a = mid;
            }
        }
        // Report the end of the final bracket that meets the target.
        exact.unwrap_or(if rising { b } else { a })
    };

    let solved = unknown.set(spec, root);
    let mut report = evaluate_mission(&solved)?;
    report.solved_unknown = Some((unknown.name().to_string(), root));
    let warning = (unknown == Unknown::ParticleSize && root < SUB_ATOMIC_SIZE_M)
        .then(|| format!("solved particle size {root:e} m is below atomic scale ({SUB_ATOMIC_SIZE_M:e} m)"));
    Ok(Solution {
        unknown,
        value: root,
        report,
        warning,
    })
}
