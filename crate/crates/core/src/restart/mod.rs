//! Restart schemes wrapped around the averaged primal-dual methods.

mod driver;
mod engine;
mod theory;

pub use driver::{
    run_restarted, ConvergenceTrace, GapNorm, SolutionSource, SolveOptions, SolveOutcome,
    SolveStatus, TraceRecord,
};
pub use theory::{
    sharpness_in_method_norm, theoretical_linear_rate_check, TheoryCheckConfig, TheoryReport,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::steps::{Iterate, MethodConstants};

/// Default contraction factor `β = e⁻¹`.
pub const DEFAULT_BETA: f64 = 0.36787944117144233;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum RestartScheme {
    NoRestart,
    /// Restart every `period` inner iterations.
    Fixed { period: usize },
    /// Restart once the normalized gap of the average has dropped by `β`
    /// relative to the previous anchor; the first epoch ends at `t = τ₀`.
    Adaptive { beta: f64, tau0: usize },
    /// Adaptive, but the restart candidate is the last iterate whenever its
    /// gap is smaller than that of the average.
    Flexible { beta: f64, tau0: usize },
}

impl RestartScheme {
    pub fn adaptive() -> Self {
        RestartScheme::Adaptive {
            beta: DEFAULT_BETA,
            tau0: 1,
        }
    }

    pub fn flexible() -> Self {
        RestartScheme::Flexible {
            beta: DEFAULT_BETA,
            tau0: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            RestartScheme::NoRestart => Ok(()),
            RestartScheme::Fixed { period } if period >= 1 => Ok(()),
            RestartScheme::Fixed { .. } => Err(Error::InvalidParameter(
                "fixed restart period must be at least 1".into(),
            )),
            RestartScheme::Adaptive { beta, tau0 } | RestartScheme::Flexible { beta, tau0 } => {
                if !(beta > 0.0 && beta < 1.0) {
                    Err(Error::InvalidParameter(format!(
                        "restart beta must lie in (0, 1), got {beta}"
                    )))
                } else if tau0 == 0 {
                    Err(Error::InvalidParameter("tau0 must be at least 1".into()))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Whether the scheme compares gaps (and so needs gap evaluations).
    pub fn is_gap_based(&self) -> bool {
        matches!(
            self,
            RestartScheme::Adaptive { .. } | RestartScheme::Flexible { .. }
        )
    }
}

impl std::str::FromStr for RestartScheme {
    type Err = Error;

    /// Accepts `none`, `fixed:N`, `adaptive` and `flexible`.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        match lower.split_once(':') {
            Some(("fixed", n)) => n
                .parse()
                .map(|period| RestartScheme::Fixed { period })
                .map_err(|_| Error::InvalidParameter(format!("bad fixed period `{n}`"))),
            _ => match lower.as_str() {
                "none" | "no-restart" => Ok(RestartScheme::NoRestart),
                "adaptive" => Ok(RestartScheme::adaptive()),
                "flexible" => Ok(RestartScheme::flexible()),
                _ => Err(Error::InvalidParameter(format!("unknown restart scheme `{s}`"))),
            },
        }
    }
}

/// Restart length `t⋆ = ⌈2C(q + 2)/(αβ)⌉` after which a fixed-frequency
/// restart contracts the distance to the optimal set by `β` on an
/// `α`-sharp problem.
pub fn fixed_frequency_tstar(constants: MethodConstants, alpha: f64, beta: f64) -> Result<usize> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "sharpness must be positive, got {alpha}"
        )));
    }
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "beta must lie in (0, 1), got {beta}"
        )));
    }
    let t = (2.0 * constants.c * (constants.q + 2.0) / (alpha * beta)).ceil();
    if !(t.is_finite() && t < usize::MAX as f64) {
        return Err(Error::InvalidParameter("restart length overflows".into()));
    }
    Ok((t as usize).max(1))
}

/// Epoch bookkeeping: outer index `n`, inner index `t`, anchor `z^{n,0}`,
/// running average `z̄^{n,t}` and the gap of the anchor measured against the
/// previous anchor.
#[derive(Debug, Clone)]
pub struct RestartState<T> {
    pub outer: usize,
    pub inner: usize,
    pub anchor: T,
    pub average: T,
    pub anchor_gap: Option<f64>,
    pub restart_lengths: Vec<usize>,
}

impl<T: Iterate> RestartState<T> {
    pub fn new(start: T) -> Self {
        Self {
            outer: 0,
            inner: 0,
            average: start.clone(),
            anchor: start,
            anchor_gap: None,
            restart_lengths: Vec::new(),
        }
    }

    /// `z̄ ← (t/(t+1))·z̄ + (1/(t+1))·ẑ`, then `t ← t + 1`.
    pub fn push_target(&mut self, target: &T) {
        self.inner += 1;
        if self.inner == 1 {
            self.average = target.clone();
        } else {
            self.average.blend(target, 1.0 / self.inner as f64);
        }
    }

    /// Starts epoch `n + 1` at `new_anchor`.
    pub fn restart(&mut self, new_anchor: T, anchor_gap: Option<f64>) {
        self.restart_lengths.push(self.inner);
        self.outer += 1;
        self.inner = 0;
        self.average = new_anchor.clone();
        self.anchor = new_anchor;
        self.anchor_gap = anchor_gap;
    }

    /// Restart test for the current epoch. `gap_now` is the normalized gap
    /// of the restart candidate at radius `‖candidate − anchor‖`.
    pub fn should_restart(&self, scheme: &RestartScheme, gap_now: Option<f64>) -> bool {
        match *scheme {
            RestartScheme::NoRestart => false,
            RestartScheme::Fixed { period } => self.inner >= period,
            RestartScheme::Adaptive { beta, tau0 } | RestartScheme::Flexible { beta, tau0 } => {
                if self.outer == 0 {
                    self.inner >= tau0
                } else {
                    match (gap_now, self.anchor_gap) {
                        (Some(now), Some(prev)) => now <= beta * prev,
                        _ => false,
                    }
                }
            }
        }
    }
}

/// Free-function form of [`RestartState::should_restart`].
pub fn should_restart<T: Iterate>(
    state: &RestartState<T>,
    scheme: &RestartScheme,
    gap_now: Option<f64>,
) -> bool {
    state.should_restart(scheme, gap_now)
}
