//! Entropy and extropy measures: the real Shannon/Rényi family and their
//! hyperbolic extensions.
//!
//! Inside entropy sums `0·ln 0` is taken as `0`, per idempotent component.
//! The standalone [`Hyperbolic::ln`] still rejects non-positive components.
//! The Rényi-type hyperbolic measures and the extropies are defined for
//! case-`Full` distributions only.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::calculus::{
    hyp_derivative, hyp_limit, lhopital_check, ComponentFunction, DifferentiableFunction,
    LhopitalReport, LHOPITAL_TOL,
};
use crate::error::{Error, Result};
use crate::hyperbolic::{Hyperbolic, HyperbolicInterval, ZeroPowZero};
use crate::probability::{Distribution, HyperbolicDistribution, RealDistribution};

/// `x ln x` with `0 ln 0 = 0`.
fn xlnx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

fn entropy_sum(p: impl Iterator<Item = f64>) -> f64 {
    -p.map(xlnx).sum::<f64>()
}

/// `S(P) = −Σ p ln p`.
pub fn shannon(p: &RealDistribution) -> f64 {
    entropy_sum(p.probs().iter().copied())
}

/// `J(P) = −Σ (1 − p) ln(1 − p)`.
pub fn extropy(p: &RealDistribution) -> f64 {
    entropy_sum(p.probs().iter().map(|&x| 1.0 - x))
}

/// Both sides of the entropy/extropy duality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DualityCheck {
    /// `J(P)`.
    pub lhs: f64,
    /// `Σ S(p_s, 1 − p_s) − S(P)`.
    pub rhs: f64,
    /// `S(P)`.
    pub dual_lhs: f64,
    /// `Σ S(p_s, 1 − p_s) − J(P)`.
    pub dual_rhs: f64,
}

impl DualityCheck {
    pub fn max_gap(&self) -> f64 {
        (self.lhs - self.rhs)
            .abs()
            .max((self.dual_lhs - self.dual_rhs).abs())
    }
}

pub fn extropy_duality_check(p: &RealDistribution) -> DualityCheck {
    let binary: f64 = p.probs().iter().map(|&x| -(xlnx(x) + xlnx(1.0 - x))).sum();
    let s = shannon(p);
    let j = extropy(p);
    DualityCheck {
        lhs: j,
        rhs: binary - s,
        dual_lhs: s,
        dual_rhs: binary - j,
    }
}

fn check_real_order(q: f64) -> Result<()> {
    if !q.is_finite() {
        return Err(Error::NonFinite(q));
    }
    if q < 0.0 {
        return Err(Error::NegativeOrder(q));
    }
    Ok(())
}

/// `ln Σ q^a` for the normalized weights `q = p / Σp`, `a > 0`.
///
/// Near `a = 1` the sum is close to 1 and is written as
/// `ln(1 + Σ q·(q^(a−1) − 1))` with `expm1`/`ln_1p`, which keeps full relative
/// accuracy where the naive form cancels. Far from it a log-sum-exp is used.
fn log_power_sum(p: &[f64], a: f64) -> f64 {
    let ln_total = p.iter().sum::<f64>().ln();
    let lq: Vec<f64> = p
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| x.ln() - ln_total)
        .collect();
    let excess: f64 = lq
        .iter()
        .map(|&l| {
            let t = (a - 1.0) * l;
            if t.abs() < 1.0 {
                l.exp() * t.exp_m1()
            } else {
                (a * l).exp() - l.exp()
            }
        })
        .sum();
    if excess.abs() <= 0.5 {
        return excess.ln_1p();
    }
    let peak = lq.iter().map(|&l| a * l).fold(f64::NEG_INFINITY, f64::max);
    peak + lq.iter().map(|&l| (a * l - peak).exp()).sum::<f64>().ln()
}

/// `d/da ln Σ q^a = Σ q^a ln q / Σ q^a`.
fn log_power_sum_derivative(p: &[f64], a: f64) -> f64 {
    let ln_total = p.iter().sum::<f64>().ln();
    let (num, den) = p
        .iter()
        .filter(|&&x| x > 0.0)
        .fold((0.0, 0.0), |(n, d), &x| {
            let lq = x.ln() - ln_total;
            let qa = (a * lq).exp();
            (n + qa * lq, d + qa)
        });
    num / den
}

/// `ln Σ p^a` for one idempotent component, with `0^0 = 1`.
fn order_log_sum(p: &[f64], a: f64) -> f64 {
    if a == 0.0 {
        (p.len() as f64).ln()
    } else {
        log_power_sum(p, a)
    }
}

/// `R_q(P) = ln(Σ p^q) / (1 − q)`; `q = 0` is Hartley, `q = 1` is rejected.
pub fn renyi(p: &RealDistribution, q: f64) -> Result<f64> {
    check_real_order(q)?;
    if q == 1.0 {
        return Err(Error::OrderOne);
    }
    Ok(order_log_sum(p.probs(), q) / (1.0 - q))
}

/// `ln N`, counting every state (`0^0 = 1`).
pub fn hartley(p: &RealDistribution) -> f64 {
    (p.len() as f64).ln()
}

/// `−ln Σ p²`.
pub fn collision(p: &RealDistribution) -> f64 {
    -p.probs().iter().map(|&x| x * x).sum::<f64>().ln()
}

/// Rényi extropy
/// `[−(N−1) ln(N−1) + (N−1) ln Σ(1−p)^q] / (1−q)`; zero for `N = 1`.
pub fn renyi_extropy(p: &RealDistribution, q: f64) -> Result<f64> {
    check_real_order(q)?;
    if q == 1.0 {
        return Err(Error::OrderOne);
    }
    Ok(renyi_extropy_component(p.probs(), q))
}

/// With `r = (1 − p)/(N − 1)`, itself a distribution, the extropy equals
/// `(N − 1)·(R_q(r) − ln(N − 1))`; that form avoids the cancellation of the
/// bracket near `q = 1`.
fn renyi_extropy_component(p: &[f64], q: f64) -> f64 {
    let m = p.len() as f64 - 1.0;
    if m == 0.0 {
        return 0.0;
    }
    let complement: Vec<f64> = p.iter().map(|&x| 1.0 - x).collect();
    m * (order_log_sum(&complement, q) / (1.0 - q) - m.ln())
}

fn first_zero(p: &[f64]) -> Option<usize> {
    p.iter().position(|&x| x == 0.0)
}

/// `G(t) = Σ p^(−t)` for each component.
fn generating_function(p1: Vec<f64>, p2: Vec<f64>) -> DifferentiableFunction {
    let g = |p: Vec<f64>| move |t: f64| p.iter().map(|&x| x.powf(-t)).sum::<f64>();
    DifferentiableFunction::numeric(ComponentFunction::new(
        g(p1),
        g(p2),
        HyperbolicInterval::whole(),
    ))
}

/// `lim_{ξ→−1_D} G'(ξ)` with `G'` from finite differences.
fn generating_limit(g: &DifferentiableFunction) -> Result<Hyperbolic> {
    let derivative = |xi: Hyperbolic| hyp_derivative(g, xi).unwrap_or(Hyperbolic::splat(f64::NAN));
    hyp_limit(&derivative, -Hyperbolic::ONE)
}

/// Shannon entropy recovered from the generating function `Σ p^(−t)`:
/// the limit of its finite-difference derivative as `t → −1`.
pub fn shannon_via_generating(p: &RealDistribution) -> Result<f64> {
    if let Some(i) = first_zero(p.probs()) {
        return Err(Error::ZeroProbability(i));
    }
    let g = generating_function(p.probs().to_vec(), p.probs().to_vec());
    Ok(generating_limit(&g)?.x1)
}

/// `S_f(B) = −Σ ρ Log_D ρ`, componentwise. Valid in every case; a zero
/// component contributes zero.
pub fn strong_shannon_hyp(b: &HyperbolicDistribution) -> Hyperbolic {
    Hyperbolic::new(
        entropy_sum(b.rho().iter().map(|r| r.x1)),
        entropy_sum(b.rho().iter().map(|r| r.x2)),
    )
}

/// `S_f` via the hyperbolic generating function `Σ ρ^(−ξ)`, differentiated
/// numerically and taken to the limit `ξ → −1_D`.
pub fn strong_shannon_via_generating(b: &HyperbolicDistribution) -> Result<Hyperbolic> {
    b.require_full("the generating-function rewrite")?;
    if let Some(index) = b.rho().iter().position(|r| r.is_zero_divisor_or_zero()) {
        return Err(Error::ZeroComponent { index });
    }
    let g = generating_function(b.component(0), b.component(1));
    generating_limit(&g)
}

fn check_hyp_order(alpha: Hyperbolic) -> Result<()> {
    if !alpha.is_finite() {
        return Err(Error::NonFinite(if alpha.x1.is_finite() {
            alpha.x2
        } else {
            alpha.x1
        }));
    }
    if !alpha.succ(Hyperbolic::ZERO) {
        return Err(Error::NonPositiveOrder(alpha.to_string()));
    }
    Ok(())
}

fn check_off_unit_line(alpha: Hyperbolic) -> Result<()> {
    if (Hyperbolic::ONE - alpha).is_zero_divisor_or_zero() {
        return Err(Error::OrderOnZeroDivisorLine(alpha.to_string()));
    }
    Ok(())
}

/// `𝓡_α(B) = Log_D(Σ ρ^α) / (1_D − α)`. `Log_D(Σ ρ^α)` is evaluated per
/// idempotent component in a cancellation-free form (see [`renyi`]).
pub fn renyi_hyp(b: &HyperbolicDistribution, alpha: Hyperbolic) -> Result<Hyperbolic> {
    check_hyp_order(alpha)?;
    check_off_unit_line(alpha)?;
    b.require_full("the hyperbolic Rényi entropy")?;
    let log_sum = Hyperbolic::new(
        order_log_sum(&b.component(0), alpha.x1),
        order_log_sum(&b.component(1), alpha.x2),
    );
    log_sum.checked_div(Hyperbolic::ONE - alpha)
}

/// Extension of [`renyi_hyp`] that accepts orders with a component equal to
/// 1 (or 0), dispatching per component to Shannon (or Hartley).
pub fn renyi_hyp_mixed(b: &HyperbolicDistribution, alpha: Hyperbolic) -> Result<Hyperbolic> {
    if !alpha.is_finite() || !alpha.succeq(Hyperbolic::ZERO) {
        return Err(Error::NonPositiveOrder(alpha.to_string()));
    }
    let (p1, p2) = b.projections()?;
    let component = |p: &RealDistribution, a: f64| {
        if a == 1.0 {
            Ok(shannon(p))
        } else {
            renyi(p, a)
        }
    };
    Ok(Hyperbolic::new(
        component(&p1, alpha.x1)?,
        component(&p2, alpha.x2)?,
    ))
}

/// `lim_{α→1_D} 𝓡_α(B)` by two routes, with the `S_f` reference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenyiLimit {
    /// Limit of `𝓡_α` along `α = 1_D ± t·1_D`.
    pub direct: Hyperbolic,
    /// L'Hôpital on `Log_D(Σρ^α) / (1_D − α)`.
    pub lhopital: LhopitalReport,
    /// `S_f(B)`.
    pub reference: Hyperbolic,
}

impl RenyiLimit {
    /// Largest componentwise gap of either route from the reference.
    pub fn max_gap(&self) -> f64 {
        self.direct
            .max_abs_diff(self.reference)
            .max(self.lhopital.lhs.max_abs_diff(self.reference))
            .max(self.lhopital.rhs.max_abs_diff(self.reference))
    }
}

/// Evaluates the Shannon limit of the hyperbolic Rényi entropy both directly
/// and through the hyperbolic L'Hôpital rule; fails with `NonConvergent` if
/// either disagrees with `S_f` by more than `1e-6`.
pub fn renyi_hyp_limit(b: &HyperbolicDistribution) -> Result<RenyiLimit> {
    b.require_full("the Rényi limit")?;
    if let Some(index) = b.rho().iter().position(|r| r.is_zero_divisor_or_zero()) {
        return Err(Error::ZeroComponent { index });
    }
    let reference = strong_shannon_hyp(b);

    let along = |alpha: Hyperbolic| renyi_hyp(b, alpha).unwrap_or(Hyperbolic::splat(f64::NAN));
    let direct = hyp_limit(&along, Hyperbolic::ONE)?;

    let (p1, p2) = (b.component(0), b.component(1));
    let log_sum = |p: Vec<f64>| move |a: f64| log_power_sum(&p, a);
    let log_sum_prime = |p: Vec<f64>| move |a: f64| log_power_sum_derivative(&p, a);
    let whole = HyperbolicInterval::whole();
    let numerator = DifferentiableFunction::analytic(
        ComponentFunction::new(log_sum(p1.clone()), log_sum(p2.clone()), whole),
        ComponentFunction::new(log_sum_prime(p1), log_sum_prime(p2), whole),
    );
    let denominator = crate::calculus::elementary::reflect(1.0);
    let lhopital = lhopital_check(&numerator, &denominator, Hyperbolic::ONE)?;

    let result = RenyiLimit {
        direct,
        lhopital,
        reference,
    };
    if !lhopital.agree || result.max_gap() > LHOPITAL_TOL {
        return Err(Error::NonConvergent(format!(
            "Rényi limit routes disagree with S_f = {reference}: direct {direct}, \
             L'Hôpital {} / {}",
            lhopital.lhs, lhopital.rhs
        )));
    }
    Ok(result)
}

/// `R_0` per component: `(ln N)·1_D`, with `0^0 = 1`.
pub fn hartley_hyp(b: &HyperbolicDistribution) -> Result<Hyperbolic> {
    b.require_full("the hyperbolic Hartley entropy")?;
    let mut sum = Hyperbolic::ZERO;
    for r in b.rho() {
        sum += r.pow_with(Hyperbolic::ZERO, ZeroPowZero::One)?;
    }
    sum.ln()
}

/// `R_2` per component: `−Log_D(Σ ρ²)`.
pub fn collision_hyp(b: &HyperbolicDistribution) -> Result<Hyperbolic> {
    b.require_full("the hyperbolic collision entropy")?;
    let sum: Hyperbolic = b.rho().iter().map(|&r| r * r).sum();
    Ok(-sum.ln()?)
}

/// `J_f(B) = −Σ (1_D − ρ) Log_D(1_D − ρ)`, componentwise.
pub fn strong_extropy_hyp(b: &HyperbolicDistribution) -> Result<Hyperbolic> {
    b.require_full("the hyperbolic extropy")?;
    Ok(Hyperbolic::new(
        entropy_sum(b.rho().iter().map(|r| 1.0 - r.x1)),
        entropy_sum(b.rho().iter().map(|r| 1.0 - r.x2)),
    ))
}

/// Value of the hyperbolic Rényi extropy. For `N = 1` the `(Ñ − 1_D)`
/// prefactor vanishes; the value is then `0_D` and `degenerate` is set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenyiExtropyValue {
    pub value: Hyperbolic,
    pub degenerate: bool,
}

/// `𝓙_α(B) = (1_D − α)^(−1) [−(Ñ−1_D) Log_D(Ñ−1_D) + (Ñ−1_D) Log_D Σ(1_D−ρ)^α]`.
pub fn renyi_extropy_hyp(
    b: &HyperbolicDistribution,
    alpha: Hyperbolic,
) -> Result<RenyiExtropyValue> {
    if !alpha.is_finite() || !alpha.succeq(Hyperbolic::ZERO) {
        return Err(Error::NonPositiveOrder(alpha.to_string()));
    }
    check_off_unit_line(alpha)?;
    b.require_full("the hyperbolic Rényi extropy")?;
    if b.len() == 1 {
        return Ok(RenyiExtropyValue {
            value: Hyperbolic::ZERO,
            degenerate: true,
        });
    }
    let value = Hyperbolic::new(
        renyi_extropy_component(&b.component(0), alpha.x1),
        renyi_extropy_component(&b.component(1), alpha.x2),
    );
    Ok(RenyiExtropyValue {
        value,
        degenerate: false,
    })
}

/// Every measure the crate can evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Shannon,
    Extropy,
    Renyi,
    Hartley,
    Collision,
    RenyiExtropy,
    ShannonViaGenerating,
    StrongShannonHyp,
    StrongShannonViaGenerating,
    StrongExtropyHyp,
    RenyiHyp,
    RenyiHypMixed,
    HartleyHyp,
    CollisionHyp,
    RenyiExtropyHyp,
}

impl Measure {
    pub const ALL: [Measure; 15] = [
        Measure::Shannon,
        Measure::Extropy,
        Measure::Renyi,
        Measure::Hartley,
        Measure::Collision,
        Measure::RenyiExtropy,
        Measure::ShannonViaGenerating,
        Measure::StrongShannonHyp,
        Measure::StrongShannonViaGenerating,
        Measure::StrongExtropyHyp,
        Measure::RenyiHyp,
        Measure::RenyiHypMixed,
        Measure::HartleyHyp,
        Measure::CollisionHyp,
        Measure::RenyiExtropyHyp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Shannon => "shannon",
            Measure::Extropy => "extropy",
            Measure::Renyi => "renyi",
            Measure::Hartley => "hartley",
            Measure::Collision => "collision",
            Measure::RenyiExtropy => "renyi_extropy",
            Measure::ShannonViaGenerating => "shannon_via_generating",
            Measure::StrongShannonHyp => "strong_shannon_hyp",
            Measure::StrongShannonViaGenerating => "strong_shannon_via_generating",
            Measure::StrongExtropyHyp => "strong_extropy_hyp",
            Measure::RenyiHyp => "renyi_hyp",
            Measure::RenyiHypMixed => "renyi_hyp_mixed",
            Measure::HartleyHyp => "hartley_hyp",
            Measure::CollisionHyp => "collision_hyp",
            Measure::RenyiExtropyHyp => "renyi_extropy_hyp",
        }
    }

    pub fn needs_order(self) -> bool {
        matches!(
            self,
            Measure::Renyi
                | Measure::RenyiExtropy
                | Measure::RenyiHyp
                | Measure::RenyiHypMixed
                | Measure::RenyiExtropyHyp
        )
    }

    /// Hyperbolic measures act on hyperbolic distributions; real ones on
    /// real distributions.
    pub fn is_hyperbolic(self) -> bool {
        self >= Measure::StrongShannonHyp
    }

    /// Evaluates on a real distribution. Real measures require a real order
    /// (`x·1_D`); hyperbolic measures see the embedded distribution.
    pub fn eval_real(self, p: &RealDistribution, order: Option<Hyperbolic>) -> Result<Hyperbolic> {
        if self.is_hyperbolic() {
            return self.eval_hyp(&HyperbolicDistribution::embed(p), order);
        }
        let q = match (self.needs_order(), order) {
            (true, Some(o)) if o.x1 == o.x2 => Some(o.x1),
            (true, Some(o)) => {
                return Err(Error::Domain(format!(
                    "{} takes a real order, got {o}",
                    self.name()
                )))
            }
            (true, None) => return Err(Error::Domain(format!("{} needs an order", self.name()))),
            (false, _) => None,
        };
        let v = match self {
            Measure::Shannon => shannon(p),
            Measure::Extropy => extropy(p),
            Measure::Renyi => renyi(p, q.unwrap())?,
            Measure::Hartley => hartley(p),
            Measure::Collision => collision(p),
            Measure::RenyiExtropy => renyi_extropy(p, q.unwrap())?,
            Measure::ShannonViaGenerating => shannon_via_generating(p)?,
            _ => unreachable!("hyperbolic measures handled above"),
        };
        Ok(Hyperbolic::splat(v))
    }

    /// Evaluates on a hyperbolic distribution. A real measure is applied to
    /// each idempotent projection of a case-`Full` distribution.
    pub fn eval_hyp(
        self,
        b: &HyperbolicDistribution,
        order: Option<Hyperbolic>,
    ) -> Result<Hyperbolic> {
        let alpha =
            || order.ok_or_else(|| Error::Domain(format!("{} needs an order", self.name())));
        match self {
            Measure::StrongShannonHyp => Ok(strong_shannon_hyp(b)),
            Measure::StrongShannonViaGenerating => strong_shannon_via_generating(b),
            Measure::StrongExtropyHyp => strong_extropy_hyp(b),
            Measure::RenyiHyp => renyi_hyp(b, alpha()?),
            Measure::RenyiHypMixed => renyi_hyp_mixed(b, alpha()?),
            Measure::HartleyHyp => hartley_hyp(b),
            Measure::CollisionHyp => collision_hyp(b),
            Measure::RenyiExtropyHyp => renyi_extropy_hyp(b, alpha()?).map(|v| v.value),
            real => {
                let (p1, p2) = b.projections()?;
                let (o1, o2) = match order {
                    Some(o) => (Some(Hyperbolic::splat(o.x1)), Some(Hyperbolic::splat(o.x2))),
                    None => (None, None),
                };
                Ok(Hyperbolic::new(
                    real.eval_real(&p1, o1)?.x1,
                    real.eval_real(&p2, o2)?.x1,
                ))
            }
        }
    }

    pub fn eval(self, d: &Distribution, order: Option<Hyperbolic>) -> Result<EntropyValue> {
        let value = match d {
            Distribution::Real(p) => self.eval_real(p, order)?,
            Distribution::Hyperbolic(b) => self.eval_hyp(b, order)?,
        };
        Ok(EntropyValue {
            value,
            measure: self,
            order: if self.needs_order() { order } else { None },
            n: d.len(),
        })
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        Measure::ALL
            .into_iter()
            .find(|m| m.name() == key)
            .ok_or_else(|| Error::InvalidFormat(format!("unknown measure {s:?}")))
    }
}

/// Parses an order written as `a1,a2` (idempotent components) or as a
/// single real `a` meaning `a·1_D`.
pub fn parse_order(s: &str) -> Result<Hyperbolic> {
    let parse = |t: &str| {
        t.trim().parse::<f64>().map_err(|_| Error::Parse {
            input: s.to_string(),
            reason: "expected `a1,a2` or a single real".into(),
        })
    };
    match s.split_once(',') {
        Some((a, b)) => Ok(Hyperbolic::new(parse(a)?, parse(b)?)),
        None => Ok(Hyperbolic::splat(parse(s)?)),
    }
}

/// A measurement tagged with the measure and order that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyValue {
    pub value: Hyperbolic,
    pub measure: Measure,
    pub order: Option<Hyperbolic>,
    #[serde(rename = "N")]
    pub n: usize,
}
