//! Loss functions of the estimation error and their local scaling behaviour.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum LossKind {
    /// `rho(e) = |e|^t`.
    Power(f64),
    /// Caller-supplied loss. `omega` is the limit `rho(s u) / rho(u)` as `u -> 0`;
    /// `local_order` is the exponent `p` with `rho(u) ~ u^p` near zero, when known.
    Custom { name: String, rho: ScalarFn, omega: Option<ScalarFn>, local_order: Option<f64> },
}

#[derive(Clone)]
pub struct LossSpec {
    pub kind: LossKind,
    pub convex: bool,
    pub symmetric: bool,
}

impl fmt::Debug for LossSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LossSpec")
            .field("kind", &self.describe())
            .field("convex", &self.convex)
            .field("symmetric", &self.symmetric)
            .finish()
    }
}

impl LossSpec {
    /// `|e|^t`, convex exactly when `t >= 1`.
    pub fn power(t: f64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::invalid(format!("power loss exponent must be positive, got {t}")));
        }
        Ok(LossSpec { kind: LossKind::Power(t), convex: t >= 1.0, symmetric: true })
    }

    pub fn mse() -> Self {
        LossSpec { kind: LossKind::Power(2.0), convex: true, symmetric: true }
    }

    /// `1{|e| >= delta}`. Neither convex nor concave; minimal at the edge points
    /// of a two-point test whose spacing is `delta`.
    pub fn threshold(delta: f64) -> Result<Self> {
        if !(delta > 0.0) {
            return Err(Error::invalid("threshold loss needs a positive width"));
        }
        Ok(LossSpec::custom(
            format!("threshold({delta})"),
            move |e: f64| if e.abs() >= delta { 1.0 } else { 0.0 },
            None::<fn(f64) -> f64>,
            None,
            false,
            true,
        ))
    }

    pub fn custom<R, W>(
        name: impl Into<String>,
        rho: R,
        omega: Option<W>,
        local_order: Option<f64>,
        convex: bool,
        symmetric: bool,
    ) -> Self
    where
        R: Fn(f64) -> f64 + Send + Sync + 'static,
        W: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        LossSpec {
            kind: LossKind::Custom {
                name: name.into(),
                rho: Arc::new(rho),
                omega: omega.map(|w| Arc::new(w) as ScalarFn),
                local_order,
            },
            convex,
            symmetric,
        }
    }

    /// The exponent `t` for power losses.
    pub fn power_exponent(&self) -> Option<f64> {
        match self.kind {
            LossKind::Power(t) => Some(t),
            LossKind::Custom { .. } => None,
        }
    }

    /// Exponent `p` such that `rho(u) ~ u^p` as `u -> 0`.
    pub fn local_order(&self) -> Option<f64> {
        match &self.kind {
            LossKind::Power(t) => Some(*t),
            LossKind::Custom { local_order, .. } => *local_order,
        }
    }

    pub fn is_concave_power(&self) -> bool {
        matches!(self.kind, LossKind::Power(t) if t <= 1.0)
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            LossKind::Power(t) if *t == 2.0 => "mse".to_string(),
            LossKind::Power(t) => format!("power({t})"),
            LossKind::Custom { name, .. } => name.clone(),
        }
    }
}

/// Evaluates `rho(eps)`.
pub fn eval_rho(loss: &LossSpec, eps: f64) -> f64 {
    match &loss.kind {
        LossKind::Power(t) => {
            if *t == 2.0 {
                eps * eps
            } else {
                eps.abs().powf(*t)
            }
        }
        LossKind::Custom { rho, .. } => rho(eps),
    }
}

/// The scaling function `omega(s) = lim_{u -> 0} rho(s u) / rho(u)`.
pub fn omega(loss: &LossSpec, s: f64) -> Result<f64> {
    match &loss.kind {
        LossKind::Power(t) => Ok(if *t == 2.0 { s * s } else { s.abs().powf(*t) }),
        LossKind::Custom { omega: Some(w), .. } => Ok(w(s)),
        LossKind::Custom { name, omega: None, .. } => {
            Err(Error::Unsupported(format!("loss `{name}` has no scaling function; supply omega explicitly")))
        }
    }
}

/// Spot-checks the loss axioms on a sign-symmetric grid: `rho(0) = 0`,
/// monotone away from the origin, and (when flagged) symmetry and midpoint
/// convexity.
pub fn validate(loss: &LossSpec) -> Result<()> {
    let r0 = eval_rho(loss, 0.0);
    if r0 != 0.0 {
        return Err(Error::InvariantViolation(format!("rho(0) = {r0}, expected 0")));
    }
    let grid: Vec<f64> = (1..=64).map(|k| 0.05 * k as f64).collect();
    let mut prev_pos = 0.0;
    let mut prev_neg = 0.0;
    for &e in &grid {
        let (p, n) = (eval_rho(loss, e), eval_rho(loss, -e));
        if p < prev_pos || n < prev_neg {
            return Err(Error::InvariantViolation(format!("rho is not monotone away from zero near |e| = {e}")));
        }
        if loss.symmetric && (p - n).abs() > 1e-12 * p.abs().max(1.0) {
            return Err(Error::InvariantViolation(format!("rho flagged symmetric but rho({e}) != rho(-{e})")));
        }
        prev_pos = p;
        prev_neg = n;
    }
    if loss.convex {
        for &a in &grid {
            for &b in &[-3.1, -0.7, 0.0, 0.4, 2.3] {
                let mid = eval_rho(loss, 0.5 * (a + b));
                let chord = 0.5 * (eval_rho(loss, a) + eval_rho(loss, b));
                if mid > chord + 1e-12 * chord.abs().max(1.0) {
                    return Err(Error::InvariantViolation(format!(
                        "rho flagged convex but midpoint convexity fails on ({a}, {b})"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// What the rate sequence is indexed by.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateVariable {
    /// Number of observations `n`.
    SampleSize,
    /// Observation time `T` of a continuous-time model.
    ObservationTime,
}

impl RateVariable {
    pub fn symbol(self) -> &'static str {
        match self {
            RateVariable::SampleSize => "n",
            RateVariable::ObservationTime => "T",
        }
    }
}

/// Test-point spacing `xi_n = n^-gamma` and risk normalization `zeta_n = n^p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePower {
    pub xi_exponent: f64,
    pub zeta_exponent: f64,
    pub variable: RateVariable,
}

impl RatePower {
    /// `zeta_n = 1 / rho(xi_n)`, so `p = order * gamma` for a loss behaving like
    /// `u^order` near zero.
    pub fn for_loss(xi_exponent: f64, variable: RateVariable, loss: &LossSpec) -> Result<Self> {
        if !(xi_exponent > 0.0) {
            return Err(Error::invalid("spacing exponent must be positive"));
        }
        let order = loss
            .local_order()
            .ok_or_else(|| Error::Unsupported(format!("loss `{}` has no known local order", loss.describe())))?;
        Ok(RatePower { xi_exponent, zeta_exponent: order * xi_exponent, variable })
    }
}

impl fmt::Display for RatePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.variable.symbol(), self.zeta_exponent)
    }
}
