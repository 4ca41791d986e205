//! Time-dependent weight functions and temporal walk weights.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Result, TwcError};
use crate::tempgraph::{TemporalEdge, Timestamp};

/// A weight `Φ(t1, t2)` for waiting at a node from `t1` until `t2 >= t1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "alpha", rename_all = "snake_case")]
pub enum WeightFunction {
    /// `α` regardless of times; a walk of length `ℓ` weighs `α^(ℓ-1)`.
    ConstantAlpha(f64),
    /// `1 / (1 + t2 - t1)`.
    InverseWaiting,
    /// `α / (1 + t2 - t1)`.
    Combined(f64),
    One,
}

impl WeightFunction {
    pub fn constant_alpha(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(WeightFunction::ConstantAlpha(alpha))
    }

    pub fn combined(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(WeightFunction::Combined(alpha))
    }

    /// Evaluates `Φ(t1, t2)`, rejecting `t1 > t2`.
    pub fn eval(&self, t1: Timestamp, t2: Timestamp) -> Result<f64> {
        if t1 > t2 {
            return Err(TwcError::Contract(format!(
                "weight function evaluated backwards in time ({t1} > {t2})"
            )));
        }
        Ok(self.value(t1, t2))
    }

    /// Unchecked evaluation for the hot loops; callers guarantee `t1 <= t2`.
    #[inline]
    pub(crate) fn value(&self, t1: Timestamp, t2: Timestamp) -> f64 {
        debug_assert!(t1 <= t2);
        match *self {
            WeightFunction::ConstantAlpha(a) => a,
            WeightFunction::InverseWaiting => 1.0 / (1.0 + (t2 - t1) as f64),
            WeightFunction::Combined(a) => a / (1.0 + (t2 - t1) as f64),
            WeightFunction::One => 1.0,
        }
    }

    /// `true` for `Φ ≡ 1`, which admits the linear-time combination.
    pub fn is_one(&self) -> bool {
        matches!(self, WeightFunction::One)
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(TwcError::Config(format!("alpha must lie in (0, 1), got {alpha}")))
    }
}

impl fmt::Display for WeightFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightFunction::ConstantAlpha(a) => write!(f, "alpha:{a}"),
            WeightFunction::InverseWaiting => f.write_str("time"),
            WeightFunction::Combined(a) => write!(f, "combined:{a}"),
            WeightFunction::One => f.write_str("one"),
        }
    }
}

/// Parses `alpha:<v>`, `time`, `combined:<v>` or `one`.
impl FromStr for WeightFunction {
    type Err = TwcError;

    fn from_str(s: &str) -> Result<Self> {
        let parse_alpha = |v: &str| {
            v.parse::<f64>()
                .map_err(|_| TwcError::Config(format!("invalid alpha `{v}`")))
        };
        match s.split_once(':') {
            Some(("alpha", v)) => WeightFunction::constant_alpha(parse_alpha(v)?),
            Some(("combined", v)) => WeightFunction::combined(parse_alpha(v)?),
            None if s == "time" => Ok(WeightFunction::InverseWaiting),
            None if s == "one" => Ok(WeightFunction::One),
            _ => Err(TwcError::Config(format!(
                "unknown weight function `{s}` (expected alpha:<v>, time, combined:<v> or one)"
            ))),
        }
    }
}

/// Weights for incoming walks, outgoing walks, and the wait between them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeightConfig {
    pub phi_in: WeightFunction,
    pub phi_out: WeightFunction,
    pub phi_m: WeightFunction,
}

impl WeightConfig {
    /// `phi` for both walk directions, `phi_m` between them.
    pub fn symmetric(phi: WeightFunction, phi_m: WeightFunction) -> Self {
        WeightConfig {
            phi_in: phi,
            phi_out: phi,
            phi_m,
        }
    }
}

impl Default for WeightConfig {
    fn default() -> Self {
        Self::symmetric(WeightFunction::One, WeightFunction::One)
    }
}

/// Product of `Φ(t_i + δ, t_{i+1})` over consecutive edges; 1 for walks of length 0 or 1.
pub fn walk_weight(f: &WeightFunction, walk: &[TemporalEdge], delta: Timestamp) -> Result<f64> {
    let mut weight = 1.0;
    for pair in walk.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if a.dst != b.src {
            return Err(TwcError::Contract(format!(
                "walk breaks between node {} and node {}",
                a.dst.0, b.src.0
            )));
        }
        let arrival = a.t + delta;
        if arrival > b.t {
            return Err(TwcError::Contract(format!(
                "edge at time {} cannot follow an arrival at {arrival}",
                b.t
            )));
        }
        weight *= f.value(arrival, b.t);
    }
    Ok(weight)
}
