//! Hyperbolic differentiation, numerical limits, the componentwise
//! L'Hôpital check, Cauchy–Riemann residuals and sampling-based
//! convexity/concavity probes.
//!
//! Functions are given in idempotent form `F(ξ) = F1(x1)·e1 + F2(x2)·e2`
//! ([`ComponentFunction`]). Limits and derivatives only ever step along
//! `t·1_D`, never along the zero-divisor axes.
//!
//! User-supplied callables must be reentrant; they may be invoked from
//! several threads when a caller parallelises work.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hyperbolic::{Hyperbolic, HyperbolicInterval};
use crate::rng::SeededRng;

/// Absolute threshold used to flag non-convergent limits.
pub const LIMIT_TOL: f64 = 1e-8;
/// Threshold for the Cauchy–Riemann residuals.
pub const CR_TOL: f64 = 1e-6;
/// Agreement threshold between the two sides of a L'Hôpital check.
pub const LHOPITAL_TOL: f64 = 1e-6;
/// Slack applied to convexity/concavity inequalities.
pub const CONCAVITY_SLACK: f64 = 1e-10;
/// Default number of sampled (pair, λ) triples for [`concavity_probe`].
pub const DEFAULT_PROBE_SAMPLES: usize = 10_000;

/// Relative finite-difference step; the absolute floor is the same value.
const FD_STEP: f64 = 1e-6;
/// Derivative components below this magnitude count as zero.
const ZERO_DERIVATIVE_TOL: f64 = 1e-10;

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A map `D → D` with a domain.
pub trait HypFunction {
    fn eval(&self, xi: Hyperbolic) -> Hyperbolic;

    fn domain(&self) -> HyperbolicInterval {
        HyperbolicInterval::whole()
    }
}

impl<F> HypFunction for F
where
    F: Fn(Hyperbolic) -> Hyperbolic,
{
    fn eval(&self, xi: Hyperbolic) -> Hyperbolic {
        self(xi)
    }
}

/// An arbitrary (not necessarily idempotent-form) map with an explicit domain.
pub struct GeneralMap<F> {
    f: F,
    domain: HyperbolicInterval,
}

impl<F: Fn(Hyperbolic) -> Hyperbolic> GeneralMap<F> {
    pub fn new(f: F, domain: HyperbolicInterval) -> Self {
        GeneralMap { f, domain }
    }
}

impl<F: Fn(Hyperbolic) -> Hyperbolic> HypFunction for GeneralMap<F> {
    fn eval(&self, xi: Hyperbolic) -> Hyperbolic {
        (self.f)(xi)
    }

    fn domain(&self) -> HyperbolicInterval {
        self.domain
    }
}

/// `F(ξ) = f1(x1)·e1 + f2(x2)·e2` on an order interval.
#[derive(Clone)]
pub struct ComponentFunction {
    f1: RealFn,
    f2: RealFn,
    domain: HyperbolicInterval,
}

impl ComponentFunction {
    pub fn new<F1, F2>(f1: F1, f2: F2, domain: HyperbolicInterval) -> Self
    where
        F1: Fn(f64) -> f64 + Send + Sync + 'static,
        F2: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        ComponentFunction {
            f1: Arc::new(f1),
            f2: Arc::new(f2),
            domain,
        }
    }

    /// Same real function on both components.
    pub fn uniform<F>(f: F, domain: HyperbolicInterval) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let f: RealFn = Arc::new(f);
        ComponentFunction {
            f1: f.clone(),
            f2: f,
            domain,
        }
    }

    pub fn from_arcs(f1: RealFn, f2: RealFn, domain: HyperbolicInterval) -> Self {
        ComponentFunction { f1, f2, domain }
    }

    pub fn component(&self, i: usize) -> &RealFn {
        match i {
            0 => &self.f1,
            1 => &self.f2,
            _ => panic!("component index {i} out of range"),
        }
    }

    pub fn domain(&self) -> HyperbolicInterval {
        self.domain
    }

    pub fn eval(&self, xi: Hyperbolic) -> Hyperbolic {
        Hyperbolic::new((self.f1)(xi.x1), (self.f2)(xi.x2))
    }

    /// `a·self + b·other`, on the domain of `self`.
    pub fn lin_comb(&self, a: Hyperbolic, other: &ComponentFunction, b: Hyperbolic) -> Self {
        let (f1, g1) = (self.f1.clone(), other.f1.clone());
        let (f2, g2) = (self.f2.clone(), other.f2.clone());
        ComponentFunction::new(
            move |x| a.x1 * f1(x) + b.x1 * g1(x),
            move |x| a.x2 * f2(x) + b.x2 * g2(x),
            self.domain,
        )
    }
}

impl fmt::Debug for ComponentFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ComponentFunction")
            .field("domain", &self.domain)
            .finish_non_exhaustive()
    }
}

impl HypFunction for ComponentFunction {
    fn eval(&self, xi: Hyperbolic) -> Hyperbolic {
        ComponentFunction::eval(self, xi)
    }

    fn domain(&self) -> HyperbolicInterval {
        self.domain
    }
}

/// A component function with an optional analytic derivative. Without one,
/// derivatives come from Richardson-extrapolated central differences.
#[derive(Clone, Debug)]
pub struct DifferentiableFunction {
    pub value: ComponentFunction,
    pub derivative: Option<ComponentFunction>,
}

impl DifferentiableFunction {
    pub fn numeric(value: ComponentFunction) -> Self {
        DifferentiableFunction {
            value,
            derivative: None,
        }
    }

    pub fn analytic(value: ComponentFunction, derivative: ComponentFunction) -> Self {
        DifferentiableFunction {
            value,
            derivative: Some(derivative),
        }
    }

    pub fn domain(&self) -> HyperbolicInterval {
        self.value.domain()
    }

    /// Drops the analytic derivative, forcing finite differences.
    pub fn without_derivative(&self) -> Self {
        Self::numeric(self.value.clone())
    }

    /// `a·self + b·other`. The result carries an analytic derivative only if
    /// both operands do.
    pub fn lin_comb(&self, a: Hyperbolic, other: &DifferentiableFunction, b: Hyperbolic) -> Self {
        let value = self.value.lin_comb(a, &other.value, b);
        let derivative = match (&self.derivative, &other.derivative) {
            (Some(df), Some(dg)) => Some(df.lin_comb(a, dg, b)),
            _ => None,
        };
        DifferentiableFunction { value, derivative }
    }
}

impl HypFunction for DifferentiableFunction {
    fn eval(&self, xi: Hyperbolic) -> Hyperbolic {
        self.value.eval(xi)
    }

    fn domain(&self) -> HyperbolicInterval {
        self.value.domain()
    }
}

/// Central difference with step `h`, extrapolated once with the `h/2`
/// estimate: `(4·D(h/2) − D(h)) / 3`.
pub fn central_difference_richardson(f: &dyn Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    let d = |h: f64| {
        // use the representable step actually taken
        let hp = (x + h) - x;
        let hm = x - (x - h);
        (f(x + hp) - f(x - hm)) / (hp + hm)
    };
    let coarse = d(h);
    let fine = d(h / 2.0);
    (4.0 * fine - coarse) / 3.0
}

fn fd_step(x: f64, margin: f64) -> f64 {
    let h = FD_STEP.max(FD_STEP * x.abs());
    // keep the stencil inside the domain
    if margin.is_finite() {
        h.min(margin / 2.0)
    } else {
        h
    }
}

fn require_interior(domain: &HyperbolicInterval, xi: Hyperbolic) -> Result<()> {
    if domain.contains_interior(xi) {
        Ok(())
    } else {
        Err(Error::OutsideDomain(xi.to_string()))
    }
}

/// Finite-difference hyperbolic derivative of a component function.
pub fn fd_derivative(f: &ComponentFunction, xi: Hyperbolic) -> Result<Hyperbolic> {
    let domain = f.domain();
    require_interior(&domain, xi)?;
    let margin = domain.margin(xi);
    let d1 = central_difference_richardson(&**f.component(0), xi.x1, fd_step(xi.x1, margin.x1));
    let d2 = central_difference_richardson(&**f.component(1), xi.x2, fd_step(xi.x2, margin.x2));
    Ok(Hyperbolic::new(d1, d2))
}

/// The hyperbolic derivative `F1'(x1)·e1 + F2'(x2)·e2`.
pub fn hyp_derivative(f: &DifferentiableFunction, xi: Hyperbolic) -> Result<Hyperbolic> {
    match &f.derivative {
        Some(d) => {
            require_interior(&f.domain(), xi)?;
            Ok(d.eval(xi))
        }
        None => fd_derivative(&f.value, xi),
    }
}

/// Largest componentwise |analytic − finite difference| over `points`
/// uniformly drawn from `sample_box` (which must lie in the domain).
pub fn derivative_discrepancy(
    f: &DifferentiableFunction,
    sample_box: &HyperbolicInterval,
    points: usize,
    seed: u64,
) -> Result<f64> {
    let analytic = f
        .derivative
        .as_ref()
        .ok_or_else(|| Error::HypothesisViolated("function has no analytic derivative".into()))?;
    let mut rng = SeededRng::new(seed);
    let mut worst = 0.0f64;
    for _ in 0..points {
        let xi = sample_point(&mut rng, sample_box)?;
        let fd = fd_derivative(&f.value, xi)?;
        worst = worst.max(fd.max_abs_diff(analytic.eval(xi)));
    }
    Ok(worst)
}

/// Uniform draw from the interior of a bounded interval.
pub fn sample_point(rng: &mut SeededRng, domain: &HyperbolicInterval) -> Result<Hyperbolic> {
    if !domain.is_bounded() {
        return Err(Error::Domain(
            "cannot sample from an unbounded domain".into(),
        ));
    }
    let (lo, hi) = (domain.lo(), domain.hi());
    Ok(Hyperbolic::new(
        rng.uniform_in(lo.x1, hi.x1),
        rng.uniform_in(lo.x2, hi.x2),
    ))
}

/// Residuals of the Cauchy–Riemann type equations for `F = u + k·v`
/// written in the `{1, k}` coordinates `ξ = x + k·y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CauchyRiemann {
    /// `|∂u/∂x − ∂v/∂y|`.
    pub residual_ux_vy: f64,
    /// `|∂u/∂y − ∂v/∂x|`.
    pub residual_uy_vx: f64,
    pub holds: bool,
}

impl CauchyRiemann {
    /// Both residuals packed as `r1·e1 + r2·e2`.
    pub fn residuals(&self) -> Hyperbolic {
        Hyperbolic::new(self.residual_ux_vy, self.residual_uy_vx)
    }
}

/// Checks `u_x = v_y` and `u_y = v_x` by finite differences at `xi`.
pub fn check_cauchy_riemann<F: HypFunction + ?Sized>(
    f: &F,
    xi: Hyperbolic,
) -> Result<CauchyRiemann> {
    check_cauchy_riemann_with(f, xi, CR_TOL)
}

pub fn check_cauchy_riemann_with<F: HypFunction + ?Sized>(
    f: &F,
    xi: Hyperbolic,
    tol: f64,
) -> Result<CauchyRiemann> {
    let domain = f.domain();
    require_interior(&domain, xi)?;
    let (x0, y0) = xi.to_unit_k();
    // moving x or y by h moves each idempotent coordinate by at most h
    let margin = domain.margin(xi);
    let room = margin.x1.min(margin.x2);
    let hx = fd_step(x0, room);
    let hy = fd_step(y0, room);

    let u = |x: f64, y: f64| f.eval(Hyperbolic::from_unit_k(x, y)).to_unit_k().0;
    let v = |x: f64, y: f64| f.eval(Hyperbolic::from_unit_k(x, y)).to_unit_k().1;

    let ux = central_difference_richardson(&|x| u(x, y0), x0, hx);
    let uy = central_difference_richardson(&|y| u(x0, y), y0, hy);
    let vx = central_difference_richardson(&|x| v(x, y0), x0, hx);
    let vy = central_difference_richardson(&|y| v(x0, y), y0, hy);

    let r1 = (ux - vy).abs();
    let r2 = (uy - vx).abs();
    Ok(CauchyRiemann {
        residual_ux_vy: r1,
        residual_uy_vx: r2,
        holds: r1 < tol && r2 < tol,
    })
}

/// A limit estimate with its convergence diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitEstimate {
    pub value: Hyperbolic,
    /// Per component, the smallest spread between consecutive extrapolated
    /// terms (the window the estimate was taken from).
    pub spread: Hyperbolic,
    /// Per component, the gap between the limits from above and below.
    pub side_gap: Hyperbolic,
}

/// Number of terms `t_n = 10^(-3-n)`, `n = 0..=10`.
const LIMIT_TERMS: usize = 11;

fn limit_steps() -> [f64; LIMIT_TERMS] {
    let mut t = [0.0; LIMIT_TERMS];
    for (n, slot) in t.iter_mut().enumerate() {
        *slot = 10f64.powi(-3 - n as i32);
    }
    t
}

/// One-sided estimate from a sequence sampled at `t_n = 10^(-3-n)`.
///
/// Each pair of neighbours is extrapolated assuming an error linear in `t`,
/// then the estimate is taken where three consecutive extrapolants agree
/// best. Early terms carry truncation error, late terms rounding noise.
fn one_sided(seq: &[f64; LIMIT_TERMS]) -> (f64, f64) {
    let mut rich = [0.0; LIMIT_TERMS - 1];
    for n in 0..LIMIT_TERMS - 1 {
        rich[n] = (10.0 * seq[n + 1] - seq[n]) / 9.0;
    }
    let mut best = (rich[1], f64::INFINITY);
    for n in 0..rich.len() - 2 {
        let spread = (rich[n + 1] - rich[n])
            .abs()
            .max((rich[n + 2] - rich[n + 1]).abs());
        if spread < best.1 {
            best = (rich[n + 1], spread);
        }
    }
    best
}

/// `lim_{ξ→ξ0} F(ξ)` along `ξ0 ± t_n·1_D`.
pub fn hyp_limit<F: HypFunction + ?Sized>(f: &F, xi0: Hyperbolic) -> Result<Hyperbolic> {
    hyp_limit_detailed(f, xi0, LIMIT_TOL).map(|e| e.value)
}

/// Like [`hyp_limit`], returning diagnostics and using tolerance `tol`
/// (scaled by `max(1, |limit|)` per component).
pub fn hyp_limit_detailed<F: HypFunction + ?Sized>(
    f: &F,
    xi0: Hyperbolic,
    tol: f64,
) -> Result<LimitEstimate> {
    let steps = limit_steps();
    let mut above = [Hyperbolic::ZERO; LIMIT_TERMS];
    let mut below = [Hyperbolic::ZERO; LIMIT_TERMS];
    for (n, &t) in steps.iter().enumerate() {
        above[n] = f.eval(xi0 + Hyperbolic::splat(t));
        below[n] = f.eval(xi0 - Hyperbolic::splat(t));
        for v in [above[n], below[n]] {
            if !v.is_finite() {
                return Err(Error::NonConvergent(format!(
                    "non-finite value {v} at distance {t:e} from {xi0}"
                )));
            }
        }
    }

    let mut value = [0.0; 2];
    let mut spread = [0.0; 2];
    let mut gap = [0.0; 2];
    for i in 0..2 {
        let seq_above = above.map(|v| v.component(i));
        let seq_below = below.map(|v| v.component(i));
        let (la, sa) = one_sided(&seq_above);
        let (lb, sb) = one_sided(&seq_below);
        let limit = 0.5 * (la + lb);
        let scaled_tol = tol * limit.abs().max(1.0);
        let (s, g) = (sa.max(sb), (la - lb).abs());
        if s > scaled_tol || g > scaled_tol {
            return Err(Error::NonConvergent(format!(
                "component e{} at {xi0}: spread {s:e}, side gap {g:e}, tolerance {scaled_tol:e}",
                i + 1
            )));
        }
        value[i] = limit;
        spread[i] = s;
        gap[i] = g;
    }
    Ok(LimitEstimate {
        value: Hyperbolic::new(value[0], value[1]),
        spread: Hyperbolic::new(spread[0], spread[1]),
        side_gap: Hyperbolic::new(gap[0], gap[1]),
    })
}

/// Outcome of a hyperbolic L'Hôpital check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LhopitalReport {
    /// `lim F/G`.
    pub lhs: Hyperbolic,
    /// `lim F'/G'`.
    pub rhs: Hyperbolic,
    pub agree: bool,
}

/// Verifies `lim F/G = lim F'/G'` at a `0/0` point `xi0`.
pub fn lhopital_check(
    f: &DifferentiableFunction,
    g: &DifferentiableFunction,
    xi0: Hyperbolic,
) -> Result<LhopitalReport> {
    for (name, h) in [("F", f), ("G", g)] {
        let lim = hyp_limit(h, xi0)?;
        if !lim.approx_eq(Hyperbolic::ZERO, LIMIT_TOL) {
            return Err(Error::HypothesisViolated(format!(
                "lim {name} at {xi0} is {lim}, not 0"
            )));
        }
    }
    let g_prime = hyp_derivative(g, xi0)?;
    if g_prime.x1.abs() <= ZERO_DERIVATIVE_TOL || g_prime.x2.abs() <= ZERO_DERIVATIVE_TOL {
        return Err(Error::HypothesisViolated(format!(
            "G'({xi0}) = {g_prime} is a zero divisor or zero"
        )));
    }

    let ratio = |xi: Hyperbolic| {
        let (fv, gv) = (f.value.eval(xi), g.value.eval(xi));
        Hyperbolic::new(fv.x1 / gv.x1, fv.x2 / gv.x2)
    };
    let lhs = hyp_limit(&ratio, xi0)?;

    let derivative_ratio = |xi: Hyperbolic| match (hyp_derivative(f, xi), hyp_derivative(g, xi)) {
        (Ok(fp), Ok(gp)) => Hyperbolic::new(fp.x1 / gp.x1, fp.x2 / gp.x2),
        _ => Hyperbolic::splat(f64::NAN),
    };
    let rhs = hyp_limit(&derivative_ratio, xi0)?;

    Ok(LhopitalReport {
        lhs,
        rhs,
        agree: lhs.max_abs_diff(rhs) < LHOPITAL_TOL,
    })
}

/// A sampled triple that violates convexity or concavity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcavityWitness {
    pub xi: Hyperbolic,
    pub chi: Hyperbolic,
    pub lambda: Hyperbolic,
    /// `F((1−λ)ξ + λχ)`.
    pub at_mix: Hyperbolic,
    /// `(1−λ)F(ξ) + λF(χ)`.
    pub chord: Hyperbolic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConcavityReport {
    pub concave: bool,
    pub convex: bool,
    /// Counterexamples to concavity (at most [`MAX_WITNESSES`]).
    pub concavity_witnesses: Vec<ConcavityWitness>,
    /// Counterexamples to convexity (at most [`MAX_WITNESSES`]).
    pub convexity_witnesses: Vec<ConcavityWitness>,
}

pub const MAX_WITNESSES: usize = 8;

/// Samples comparable pairs `ξ ⪯ χ` in the domain and `λ ∈ [0, 1_D]`, and
/// tests the convexity and concavity inequalities componentwise.
pub fn concavity_probe(
    f: &ComponentFunction,
    samples: usize,
    seed: u64,
) -> Result<ConcavityReport> {
    let domain = f.domain();
    if !domain.is_bounded() {
        return Err(Error::Domain(
            "concavity probe needs a bounded domain".into(),
        ));
    }
    if samples == 0 || (domain.hi() - domain.lo()).is_zero_divisor_or_zero() {
        return Err(Error::EmptyDomain(format!(
            "no interior to sample in [{}, {}]",
            domain.lo(),
            domain.hi()
        )));
    }
    let mut rng = SeededRng::new(seed);
    let mut report = ConcavityReport {
        concave: true,
        convex: true,
        concavity_witnesses: Vec::new(),
        convexity_witnesses: Vec::new(),
    };
    for _ in 0..samples {
        let a = sample_point(&mut rng, &domain)?;
        let b = sample_point(&mut rng, &domain)?;
        let (xi, chi) = (a.meet(b), a.join(b));
        let lambda = Hyperbolic::new(rng.uniform(), rng.uniform());
        let one_minus = Hyperbolic::ONE - lambda;
        let at_mix = f.eval(one_minus * xi + lambda * chi);
        let chord = one_minus * f.eval(xi) + lambda * f.eval(chi);
        let witness = ConcavityWitness {
            xi,
            chi,
            lambda,
            at_mix,
            chord,
        };
        let slack = chord.modulus_k().map(|c| CONCAVITY_SLACK * c.max(1.0));
        if (at_mix + slack).x1 < chord.x1 || (at_mix + slack).x2 < chord.x2 {
            report.concave = false;
            if report.concavity_witnesses.len() < MAX_WITNESSES {
                report.concavity_witnesses.push(witness);
            }
        }
        if (at_mix - slack).x1 > chord.x1 || (at_mix - slack).x2 > chord.x2 {
            report.convex = false;
            if report.convexity_witnesses.len() < MAX_WITNESSES {
                report.convexity_witnesses.push(witness);
            }
        }
    }
    Ok(report)
}

/// Elementary functions with analytic derivatives.
pub mod elementary {
    use super::*;

    pub fn identity() -> DifferentiableFunction {
        DifferentiableFunction::analytic(
            ComponentFunction::uniform(|x| x, HyperbolicInterval::whole()),
            ComponentFunction::uniform(|_| 1.0, HyperbolicInterval::whole()),
        )
    }

    /// `ξ ↦ ξ^n` for an integer `n ≥ 1`.
    pub fn monomial(n: i32) -> DifferentiableFunction {
        DifferentiableFunction::analytic(
            ComponentFunction::uniform(move |x| x.powi(n), HyperbolicInterval::whole()),
            ComponentFunction::uniform(
                move |x| n as f64 * x.powi(n - 1),
                HyperbolicInterval::whole(),
            ),
        )
    }

    /// `ξ ↦ ξ^n − c·1_D`.
    pub fn shifted_monomial(n: i32, c: f64) -> DifferentiableFunction {
        DifferentiableFunction::analytic(
            ComponentFunction::uniform(move |x| x.powi(n) - c, HyperbolicInterval::whole()),
            ComponentFunction::uniform(
                move |x| n as f64 * x.powi(n - 1),
                HyperbolicInterval::whole(),
            ),
        )
    }

    /// `Log_D` on the positive cone (or a sub-interval of it).
    pub fn log_on(domain: HyperbolicInterval) -> DifferentiableFunction {
        DifferentiableFunction::analytic(
            ComponentFunction::uniform(f64::ln, domain),
            ComponentFunction::uniform(|x| 1.0 / x, domain),
        )
    }

    pub fn log() -> DifferentiableFunction {
        log_on(HyperbolicInterval::positive())
    }

    pub fn exp() -> DifferentiableFunction {
        DifferentiableFunction::analytic(
            ComponentFunction::uniform(f64::exp, HyperbolicInterval::whole()),
            ComponentFunction::uniform(f64::exp, HyperbolicInterval::whole()),
        )
    }

    /// `ξ ↦ ξ^α` on the positive cone, for a hyperbolic exponent `α`.
    pub fn power(alpha: Hyperbolic) -> DifferentiableFunction {
        let (a1, a2) = (alpha.x1, alpha.x2);
        DifferentiableFunction::analytic(
            ComponentFunction::new(
                move |x| x.powf(a1),
                move |x| x.powf(a2),
                HyperbolicInterval::positive(),
            ),
            ComponentFunction::new(
                move |x| a1 * x.powf(a1 - 1.0),
                move |x| a2 * x.powf(a2 - 1.0),
                HyperbolicInterval::positive(),
            ),
        )
    }

    /// `ξ ↦ c·1_D − ξ`.
    pub fn reflect(c: f64) -> DifferentiableFunction {
        DifferentiableFunction::analytic(
            ComponentFunction::uniform(move |x| c - x, HyperbolicInterval::whole()),
            ComponentFunction::uniform(|_| -1.0, HyperbolicInterval::whole()),
        )
    }
}
