//! The strictly increasing comparison functions used by the contraction and
//! domination conditions, with finite-sample validation.
//!
//! A member of the class maps positive reals to reals and satisfies three
//! conditions: strict monotonicity, divergence to negative infinity exactly
//! when the argument tends to zero, and `alpha^k * F(alpha) -> 0` for some
//! exponent `k` in `(0, 1)`. The first is checkable on any finite grid; the
//! other two are asymptotic, so [`FFunction::probe_f2_f3`] only reports a
//! finite-sample diagnostic and never a proof. The four canonical kinds are
//! known to satisfy all three analytically.

use crate::error::{Error, Result};
use crate::real::Real;

/// Shape of the comparison function.
#[derive(Debug, Clone, PartialEq)]
pub enum FKind<T: Real> {
    /// `ln(alpha)`
    Log,
    /// `ln(alpha) + alpha`
    LogPlusLinear,
    /// `-1 / sqrt(alpha)`
    NegInvSqrt,
    /// `ln(alpha^2 + alpha)`
    LogQuadratic,
    /// A finite table of `(alpha, F(alpha))` samples over strictly increasing
    /// positive abscissae. Evaluation outside the sampled abscissae is an
    /// error; monotonicity of the ordinates is checked by
    /// [`FFunction::validate_f1`], not at construction, so deliberately
    /// broken tables can be probed.
    CustomTable(Vec<(T, T)>),
}

/// A comparison function together with the exponent witnessing its tail
/// condition.
///
/// Default exponents: `0.5` for the logarithmic kinds, `0.75` for
/// `-1/sqrt(alpha)` — there `alpha^k * F(alpha) = -alpha^(k - 1/2)`, so any
/// exponent above one half works and nothing below does. For custom tables
/// the exponent is advisory only.
#[derive(Debug, Clone, PartialEq)]
pub struct FFunction<T: Real> {
    kind: FKind<T>,
    k_exponent: T,
}

impl<T: Real> FFunction<T> {
    pub fn log() -> Self {
        FFunction { kind: FKind::Log, k_exponent: T::from_f64_lit(0.5) }
    }

    pub fn log_plus_linear() -> Self {
        FFunction { kind: FKind::LogPlusLinear, k_exponent: T::from_f64_lit(0.5) }
    }

    pub fn neg_inv_sqrt() -> Self {
        FFunction { kind: FKind::NegInvSqrt, k_exponent: T::from_f64_lit(0.75) }
    }

    pub fn log_quadratic() -> Self {
        FFunction { kind: FKind::LogQuadratic, k_exponent: T::from_f64_lit(0.5) }
    }

    /// Builds a custom table; abscissae must be positive, strictly
    /// increasing, and finite.
    pub fn custom_table(samples: Vec<(T, T)>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidTable("needs at least one sample".into()));
        }
        for window in samples.windows(2) {
            if !(window[0].0 < window[1].0) {
                return Err(Error::InvalidTable(format!(
                    "abscissae must be strictly increasing, got {} then {}",
                    window[0].0, window[1].0
                )));
            }
        }
        for &(alpha, value) in &samples {
            if !(alpha > T::zero() && alpha.is_finite()) {
                return Err(Error::InvalidTable(format!("abscissa {alpha} must be positive")));
            }
            if !value.is_finite() {
                return Err(Error::InvalidTable(format!("ordinate at {alpha} is not finite")));
            }
        }
        Ok(FFunction { kind: FKind::CustomTable(samples), k_exponent: T::from_f64_lit(0.5) })
    }

    /// Replaces the tail exponent; must lie strictly inside `(0, 1)`.
    pub fn with_k(mut self, k: T) -> Result<Self> {
        if !(k > T::zero() && k < T::one()) {
            return Err(Error::InvalidKExponent(k.to_f64_lossy()));
        }
        self.k_exponent = k;
        Ok(self)
    }

    /// The canonical kinds by their short names `f1`..`f4`.
    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "f1" => Some(Self::log()),
            "f2" => Some(Self::log_plus_linear()),
            "f3" => Some(Self::neg_inv_sqrt()),
            "f4" => Some(Self::log_quadratic()),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            FKind::Log => "f1",
            FKind::LogPlusLinear => "f2",
            FKind::NegInvSqrt => "f3",
            FKind::LogQuadratic => "f4",
            FKind::CustomTable(_) => "custom",
        }
    }

    pub fn kind(&self) -> &FKind<T> {
        &self.kind
    }

    pub fn k_exponent(&self) -> T {
        self.k_exponent
    }

    /// Evaluates `F(alpha)`; `alpha` must be positive, and for custom tables
    /// one of the sampled abscissae.
    pub fn eval(&self, alpha: T) -> Result<T> {
        if !(alpha > T::zero()) {
            return Err(Error::NonPositiveArgument(alpha.to_f64_lossy()));
        }
        match &self.kind {
            FKind::Log => Ok(alpha.ln()),
            FKind::LogPlusLinear => Ok(alpha.ln() + alpha),
            FKind::NegInvSqrt => Ok(-(T::one() / alpha.sqrt())),
            FKind::LogQuadratic => Ok((alpha * alpha + alpha).ln()),
            FKind::CustomTable(samples) => samples
                .iter()
                .find(|(a, _)| *a == alpha)
                .map(|&(_, v)| v)
                .ok_or_else(|| Error::UnsampledPoint(alpha.to_f64_lossy())),
        }
    }

    /// Checks strict monotonicity across consecutive points of an ascending
    /// positive grid; reports the first violating pair.
    pub fn validate_f1(&self, grid: &[T]) -> Result<MonotonicityVerdict<T>> {
        if grid.len() < 2 {
            return Err(Error::InvalidGrid("needs at least two points".into()));
        }
        for &alpha in grid {
            if !(alpha > T::zero() && alpha.is_finite()) {
                return Err(Error::InvalidGrid(format!("grid point {alpha} must be positive")));
            }
        }
        for window in grid.windows(2) {
            if !(window[0] < window[1]) {
                return Err(Error::InvalidGrid(format!(
                    "grid must be strictly ascending, got {} then {}",
                    window[0], window[1]
                )));
            }
        }
        for window in grid.windows(2) {
            let (alpha, beta) = (window[0], window[1]);
            let f_alpha = self.eval(alpha)?;
            let f_beta = self.eval(beta)?;
            if !(f_alpha < f_beta) {
                return Ok(MonotonicityVerdict {
                    holds: false,
                    witness: Some(MonotonicityWitness { alpha, beta, f_alpha, f_beta }),
                });
            }
        }
        Ok(MonotonicityVerdict { holds: true, witness: None })
    }

    /// Finite-sample diagnostic for the two asymptotic conditions along a
    /// strictly decreasing positive probe sequence of at least five terms.
    ///
    /// The probe is consistent when the values decrease monotonically, the
    /// decrease trend reaches the floor (directly, or because the step sizes
    /// are not shrinking, or by geometric extrapolation of the shrinking
    /// steps), and `alpha^k * F(alpha)` shrinks in magnitude over the last
    /// three terms. This is a diagnostic over samples, not a proof of either
    /// condition.
    pub fn probe_f2_f3(&self, alphas: &[T], floor: Option<T>) -> Result<AsymptoticsProbe<T>> {
        if alphas.len() < 5 {
            return Err(Error::InvalidProbe("needs at least five terms".into()));
        }
        for &alpha in alphas {
            if !(alpha > T::zero() && alpha.is_finite()) {
                return Err(Error::InvalidProbe(format!("term {alpha} must be positive")));
            }
        }
        for window in alphas.windows(2) {
            if !(window[0] > window[1]) {
                return Err(Error::InvalidProbe(format!(
                    "terms must be strictly decreasing, got {} then {}",
                    window[0], window[1]
                )));
            }
        }
        let floor = floor.unwrap_or_else(|| T::from_f64_lit(-1e3));

        let mut f_values = Vec::with_capacity(alphas.len());
        let mut weighted = Vec::with_capacity(alphas.len());
        for &alpha in alphas {
            let value = self.eval(alpha)?;
            f_values.push(value);
            weighted.push(alpha.powf(self.k_exponent) * value);
        }

        let monotone_decreasing = f_values.windows(2).all(|w| w[0] > w[1]);

        // Divergence trend: the last value is already past the floor, or the
        // step sizes are not shrinking (the decrease cannot level off), or
        // the geometric tail the shrinking steps describe still crosses it.
        let len = f_values.len();
        let last = f_values[len - 1];
        let delta_last = f_values[len - 2] - last;
        let delta_prev = f_values[len - 3] - f_values[len - 2];
        let reaches_floor = if last <= floor {
            true
        } else if !monotone_decreasing || delta_last <= T::zero() || delta_prev <= T::zero() {
            false
        } else if delta_last >= delta_prev {
            true
        } else {
            let ratio = delta_last / delta_prev;
            let tail_limit = last - delta_last * ratio / (T::one() - ratio);
            tail_limit <= floor
        };

        let tail = &weighted[len - 3..];
        let weighted_shrinking = tail.windows(2).all(|w| w[1].abs() <= w[0].abs());

        let consistent = monotone_decreasing && reaches_floor && weighted_shrinking;
        Ok(AsymptoticsProbe {
            f_values,
            weighted,
            floor,
            monotone_decreasing,
            reaches_floor,
            weighted_shrinking,
            consistent,
        })
    }
}

/// Verdict of the finite monotonicity check.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityVerdict<T: Real> {
    pub holds: bool,
    pub witness: Option<MonotonicityWitness<T>>,
}

/// First consecutive grid pair on which monotonicity fails.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityWitness<T: Real> {
    pub alpha: T,
    pub beta: T,
    pub f_alpha: T,
    pub f_beta: T,
}

/// Finite-sample diagnostic record for the asymptotic conditions.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticsProbe<T: Real> {
    /// `F(alpha_i)` along the probe.
    pub f_values: Vec<T>,
    /// `alpha_i^k * F(alpha_i)` along the probe.
    pub weighted: Vec<T>,
    /// Floor the decrease trend must reach.
    pub floor: T,
    pub monotone_decreasing: bool,
    pub reaches_floor: bool,
    pub weighted_shrinking: bool,
    /// Conjunction of the three observations; diagnostic only.
    pub consistent: bool,
}
