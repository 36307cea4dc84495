//! Hyperbolic (split-complex) numbers in the idempotent basis.
//!
//! A hyperbolic number `a + b·k` with `k² = 1` is stored as its idempotent
//! coordinates `(x1, x2) = (a + b, a - b)`, i.e. `x1·e1 + x2·e2` with
//! `e1 = (1 + k)/2` and `e2 = (1 - k)/2`. In this basis every ring operation,
//! the partial order, the modulus and the elementary functions act
//! independently on the two components.
//!
//! ```
//! use hyperentropy::Hyperbolic;
//!
//! let k = Hyperbolic::K;
//! assert_eq!(k * k, Hyperbolic::ONE);
//! assert_eq!(Hyperbolic::E1 * Hyperbolic::E2, Hyperbolic::ZERO);
//! ```

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Componentwise absolute tolerance used by [`Hyperbolic::approx_eq_default`].
pub const DEFAULT_APPROX_TOL: f64 = 1e-12;

/// An element `x1·e1 + x2·e2` of the hyperbolic plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Hyperbolic {
    /// Coefficient of `e1`.
    pub x1: f64,
    /// Coefficient of `e2`.
    pub x2: f64,
}

/// Result of comparing two hyperbolic numbers under the strict componentwise
/// order. Unlike `std::cmp::Ordering` it has an explicit incomparable state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HypOrdering {
    Less,
    Equal,
    Greater,
    Incomparable,
}

/// How `0^0` is evaluated by [`Hyperbolic::pow_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ZeroPowZero {
    /// `0^0` is a domain error.
    #[default]
    Reject,
    /// `0^0 = 1`, the counting convention behind the Hartley entropy.
    One,
}

impl Hyperbolic {
    pub const ZERO: Hyperbolic = Hyperbolic::new(0.0, 0.0);
    pub const ONE: Hyperbolic = Hyperbolic::new(1.0, 1.0);
    pub const E1: Hyperbolic = Hyperbolic::new(1.0, 0.0);
    pub const E2: Hyperbolic = Hyperbolic::new(0.0, 1.0);
    /// The hyperbolic unit `k`, equal to `e1 - e2`.
    pub const K: Hyperbolic = Hyperbolic::new(1.0, -1.0);

    /// Builds `x1·e1 + x2·e2` without checking finiteness.
    pub const fn new(x1: f64, x2: f64) -> Self {
        Hyperbolic { x1, x2 }
    }

    /// Builds `x1·e1 + x2·e2`, rejecting NaN and infinities.
    pub fn try_new(x1: f64, x2: f64) -> Result<Self> {
        for x in [x1, x2] {
            if !x.is_finite() {
                return Err(Error::NonFinite(x));
            }
        }
        Ok(Hyperbolic { x1, x2 })
    }

    /// The embedding `x ↦ x·e1 + x·e2` of the reals.
    pub fn embed_real(x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::NonFinite(x));
        }
        Ok(Self::splat(x))
    }

    /// Unchecked embedding of a real, `x·1_D`.
    pub const fn splat(x: f64) -> Self {
        Hyperbolic { x1: x, x2: x }
    }

    /// Converts from the `{1, k}` basis: `a + b·k`.
    pub fn from_unit_k(a: f64, b: f64) -> Self {
        Hyperbolic::new(a + b, a - b)
    }

    /// Coordinates `(a, b)` in the `{1, k}` basis.
    pub fn to_unit_k(self) -> (f64, f64) {
        ((self.x1 + self.x2) / 2.0, (self.x1 - self.x2) / 2.0)
    }

    pub fn components(self) -> [f64; 2] {
        [self.x1, self.x2]
    }

    pub fn component(self, i: usize) -> f64 {
        match i {
            0 => self.x1,
            1 => self.x2,
            _ => panic!("hyperbolic component index {i} out of range"),
        }
    }

    /// Applies `f` to each idempotent component.
    pub fn map(self, mut f: impl FnMut(f64) -> f64) -> Self {
        Hyperbolic::new(f(self.x1), f(self.x2))
    }

    /// Combines two numbers component by component.
    pub fn zip_with(self, other: Self, mut f: impl FnMut(f64, f64) -> f64) -> Self {
        Hyperbolic::new(f(self.x1, other.x1), f(self.x2, other.x2))
    }

    pub fn is_finite(self) -> bool {
        self.x1.is_finite() && self.x2.is_finite()
    }

    /// Membership in the set of zero divisors: exactly one component is zero.
    pub fn is_zero_divisor(self) -> bool {
        (self.x1 == 0.0) != (self.x2 == 0.0)
    }

    /// Zero divisors together with zero itself (`x1·x2 = 0`).
    pub fn is_zero_divisor_or_zero(self) -> bool {
        self.x1 == 0.0 || self.x2 == 0.0
    }

    /// Strictly positive: `0 ≺ self`.
    pub fn is_positive(self) -> bool {
        self.x1 > 0.0 && self.x2 > 0.0
    }

    /// Division; fails when the divisor has a zero component.
    pub fn checked_div(self, rhs: Self) -> Result<Self> {
        if rhs.is_zero_divisor_or_zero() {
            return Err(Error::DivisionByZeroDivisor(rhs.to_string()));
        }
        Ok(Hyperbolic::new(self.x1 / rhs.x1, self.x2 / rhs.x2))
    }

    pub fn recip(self) -> Result<Self> {
        Hyperbolic::ONE.checked_div(self)
    }

    /// Comparison under the strict order `≺`.
    ///
    /// `Less` requires both components strictly smaller, `Equal` both equal;
    /// any other combination (including one equal and one smaller component)
    /// is `Incomparable`. Use [`preceq`](Self::preceq) for the non-strict order.
    pub fn hyp_cmp(self, other: Self) -> HypOrdering {
        if self.x1 == other.x1 && self.x2 == other.x2 {
            HypOrdering::Equal
        } else if self.x1 < other.x1 && self.x2 < other.x2 {
            HypOrdering::Less
        } else if self.x1 > other.x1 && self.x2 > other.x2 {
            HypOrdering::Greater
        } else {
            HypOrdering::Incomparable
        }
    }

    /// `self ⪯ other`: componentwise `≤`.
    pub fn preceq(self, other: Self) -> bool {
        self.x1 <= other.x1 && self.x2 <= other.x2
    }

    /// `self ≺ other`: componentwise `<`.
    pub fn prec(self, other: Self) -> bool {
        self.x1 < other.x1 && self.x2 < other.x2
    }

    pub fn succeq(self, other: Self) -> bool {
        other.preceq(self)
    }

    pub fn succ(self, other: Self) -> bool {
        other.prec(self)
    }

    /// Componentwise minimum (the meet of the order).
    pub fn meet(self, other: Self) -> Self {
        self.zip_with(other, f64::min)
    }

    /// Componentwise maximum (the join of the order).
    pub fn join(self, other: Self) -> Self {
        self.zip_with(other, f64::max)
    }

    /// The hyperbolic modulus `|x1|·e1 + |x2|·e2`.
    pub fn modulus_k(self) -> Self {
        self.map(f64::abs)
    }

    /// The hyperbolic metric `|x1 - y1|·e1 + |x2 - y2|·e2`.
    pub fn metric_dk(self, other: Self) -> Self {
        (self - other).modulus_k()
    }

    /// Hyperbolic power `a1^b1·e1 + a2^b2·e2` with `0^0` rejected.
    pub fn pow(self, exponent: Self) -> Result<Self> {
        self.pow_with(exponent, ZeroPowZero::Reject)
    }

    /// Hyperbolic power with an explicit `0^0` convention.
    ///
    /// A zero base component with a positive exponent gives 0. Negative base
    /// components are rejected.
    pub fn pow_with(self, exponent: Self, zero_pow_zero: ZeroPowZero) -> Result<Self> {
        let c1 = real_pow(self.x1, exponent.x1, zero_pow_zero)?;
        let c2 = real_pow(self.x2, exponent.x2, zero_pow_zero)?;
        Ok(Hyperbolic::new(c1, c2))
    }

    /// Integer power, valid for any base.
    pub fn powi(self, n: i32) -> Self {
        self.map(|x| x.powi(n))
    }

    /// The hyperbolic logarithm `ln x1·e1 + ln x2·e2` (natural log).
    pub fn ln(self) -> Result<Self> {
        if !self.is_positive() {
            return Err(Error::Domain(format!(
                "logarithm needs both components > 0, got {self}"
            )));
        }
        Ok(self.map(f64::ln))
    }

    pub fn exp(self) -> Self {
        self.map(f64::exp)
    }

    /// Componentwise absolute-tolerance equality.
    pub fn approx_eq(self, other: Self, tol: f64) -> bool {
        (self.x1 - other.x1).abs() <= tol && (self.x2 - other.x2).abs() <= tol
    }

    pub fn approx_eq_default(self, other: Self) -> bool {
        self.approx_eq(other, DEFAULT_APPROX_TOL)
    }

    /// Largest componentwise absolute difference.
    pub fn max_abs_diff(self, other: Self) -> f64 {
        (self.x1 - other.x1).abs().max((self.x2 - other.x2).abs())
    }

    /// Renders in the `{1, k}` basis as `a+bk`.
    pub fn to_unit_k_string(self) -> String {
        let (a, b) = self.to_unit_k();
        format!("{a}{b:+}k")
    }
}

fn real_pow(base: f64, exponent: f64, zero_pow_zero: ZeroPowZero) -> Result<f64> {
    if base > 0.0 {
        Ok(base.powf(exponent))
    } else if base == 0.0 {
        if exponent > 0.0 {
            Ok(0.0)
        } else if exponent == 0.0 && zero_pow_zero == ZeroPowZero::One {
            Ok(1.0)
        } else {
            Err(Error::Domain(format!("0^{exponent} is undefined")))
        }
    } else {
        Err(Error::Domain(format!(
            "power of negative base component {base}"
        )))
    }
}

impl Add for Hyperbolic {
    type Output = Hyperbolic;
    fn add(self, rhs: Self) -> Self {
        Hyperbolic::new(self.x1 + rhs.x1, self.x2 + rhs.x2)
    }
}

impl Sub for Hyperbolic {
    type Output = Hyperbolic;
    fn sub(self, rhs: Self) -> Self {
        Hyperbolic::new(self.x1 - rhs.x1, self.x2 - rhs.x2)
    }
}

impl Mul for Hyperbolic {
    type Output = Hyperbolic;
    fn mul(self, rhs: Self) -> Self {
        Hyperbolic::new(self.x1 * rhs.x1, self.x2 * rhs.x2)
    }
}

impl Mul<f64> for Hyperbolic {
    type Output = Hyperbolic;
    fn mul(self, rhs: f64) -> Self {
        Hyperbolic::new(self.x1 * rhs, self.x2 * rhs)
    }
}

impl Mul<Hyperbolic> for f64 {
    type Output = Hyperbolic;
    fn mul(self, rhs: Hyperbolic) -> Hyperbolic {
        rhs * self
    }
}

impl Neg for Hyperbolic {
    type Output = Hyperbolic;
    fn neg(self) -> Self {
        Hyperbolic::new(-self.x1, -self.x2)
    }
}

impl AddAssign for Hyperbolic {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl SubAssign for Hyperbolic {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl MulAssign for Hyperbolic {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl Sum for Hyperbolic {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Hyperbolic::ZERO, Add::add)
    }
}

impl<'a> Sum<&'a Hyperbolic> for Hyperbolic {
    fn sum<I: Iterator<Item = &'a Self>>(iter: I) -> Self {
        iter.copied().sum()
    }
}

impl From<(f64, f64)> for Hyperbolic {
    fn from((x1, x2): (f64, f64)) -> Self {
        Hyperbolic::new(x1, x2)
    }
}

/// Idempotent form `x1*e1+x2*e2`.
impl fmt::Display for Hyperbolic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*e1{:+}*e2", self.x1, self.x2)
    }
}

/// Parses either `x1*e1+x2*e2`, `a+bk`, or a bare real `x` (read as `x·1_D`).
impl FromStr for Hyperbolic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let fail = |reason: &str| Error::Parse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        if compact.is_empty() {
            return Err(fail("empty input"));
        }
        let num = |t: &str| -> Result<f64> {
            let v: f64 = t.parse().map_err(|_| fail(&format!("bad number {t:?}")))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(fail("non-finite component"))
            }
        };

        if let Some(head) = compact.strip_suffix("*e2") {
            let (x1, rest) = head
                .split_once("*e1")
                .ok_or_else(|| fail("missing *e1 term"))?;
            if !(rest.starts_with('+') || rest.starts_with('-')) {
                return Err(fail("expected sign before the e2 coefficient"));
            }
            return Ok(Hyperbolic::new(num(x1)?, num(rest)?));
        }

        if let Some(head) = compact.strip_suffix('k') {
            let bytes = head.as_bytes();
            let split = (1..bytes.len()).rev().find(|&i| {
                (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E')
            });
            let coeff = |t: &str| -> Result<f64> {
                match t {
                    "" | "+" => Ok(1.0),
                    "-" => Ok(-1.0),
                    _ => num(t),
                }
            };
            let (a, b) = match split {
                Some(i) => (num(&head[..i])?, coeff(&head[i..])?),
                None => (0.0, coeff(head)?),
            };
            return Ok(Hyperbolic::from_unit_k(a, b));
        }

        Ok(Hyperbolic::splat(num(&compact)?))
    }
}

/// An order interval `[lo, hi]_D` (closed) or `(lo, hi)_D` (open).
///
/// Bounds may be infinite to describe unbounded domains such as the whole
/// plane or the positive cone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolicInterval {
    lo: Hyperbolic,
    hi: Hyperbolic,
    closed: bool,
}

impl HyperbolicInterval {
    /// Closed interval; requires `lo ⪯ hi` and `hi - lo` not a zero divisor.
    pub fn closed(lo: Hyperbolic, hi: Hyperbolic) -> Result<Self> {
        Self::check_bounds(lo, hi)?;
        let width = hi - lo;
        if width.is_zero_divisor() {
            return Err(Error::InvalidInterval(format!(
                "hi - lo = {width} is a zero divisor"
            )));
        }
        Ok(HyperbolicInterval {
            lo,
            hi,
            closed: true,
        })
    }

    /// Open interval; requires `lo ≺ hi` so that it is non-empty.
    pub fn open(lo: Hyperbolic, hi: Hyperbolic) -> Result<Self> {
        Self::check_bounds(lo, hi)?;
        if !lo.prec(hi) {
            return Err(Error::InvalidInterval(format!(
                "open interval ({lo}, {hi}) is empty"
            )));
        }
        Ok(HyperbolicInterval {
            lo,
            hi,
            closed: false,
        })
    }

    /// The whole plane.
    pub fn whole() -> Self {
        HyperbolicInterval {
            lo: Hyperbolic::splat(f64::NEG_INFINITY),
            hi: Hyperbolic::splat(f64::INFINITY),
            closed: false,
        }
    }

    /// The positive cone `D+ = {ξ : 0 ≺ ξ}`.
    pub fn positive() -> Self {
        HyperbolicInterval {
            lo: Hyperbolic::ZERO,
            hi: Hyperbolic::splat(f64::INFINITY),
            closed: false,
        }
    }

    /// The unit interval `[0, 1_D]_D`.
    pub fn unit() -> Self {
        HyperbolicInterval {
            lo: Hyperbolic::ZERO,
            hi: Hyperbolic::ONE,
            closed: true,
        }
    }

    fn check_bounds(lo: Hyperbolic, hi: Hyperbolic) -> Result<()> {
        if lo.x1.is_nan() || lo.x2.is_nan() || hi.x1.is_nan() || hi.x2.is_nan() {
            return Err(Error::InvalidInterval("NaN bound".into()));
        }
        if !lo.preceq(hi) {
            return Err(Error::InvalidInterval(format!("{lo} is not ⪯ {hi}")));
        }
        Ok(())
    }

    pub fn lo(&self) -> Hyperbolic {
        self.lo
    }

    pub fn hi(&self) -> Hyperbolic {
        self.hi
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn contains(&self, xi: Hyperbolic) -> bool {
        if self.closed {
            self.lo.preceq(xi) && xi.preceq(self.hi)
        } else {
            self.lo.prec(xi) && xi.prec(self.hi)
        }
    }

    /// Strict interior membership, regardless of whether the interval is closed.
    pub fn contains_interior(&self, xi: Hyperbolic) -> bool {
        self.lo.prec(xi) && xi.prec(self.hi)
    }

    /// Distance from an interior point to the boundary, per component.
    pub fn margin(&self, xi: Hyperbolic) -> Hyperbolic {
        (xi - self.lo).meet(self.hi - xi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn h(x1: f64, x2: f64) -> Hyperbolic {
        Hyperbolic::new(x1, x2)
    }

    #[test]
    fn idempotents_and_unit() {
        assert_eq!(Hyperbolic::E1 * Hyperbolic::E2, Hyperbolic::ZERO);
        assert_eq!(Hyperbolic::E1 * Hyperbolic::E1, Hyperbolic::E1);
        assert_eq!(Hyperbolic::E2 * Hyperbolic::E2, Hyperbolic::E2);
        assert_eq!(Hyperbolic::K * Hyperbolic::K, Hyperbolic::ONE);
        assert_eq!(Hyperbolic::from_unit_k(0.0, 1.0), Hyperbolic::K);
        assert_eq!(Hyperbolic::from_unit_k(0.5, 0.5), Hyperbolic::E1);
        assert_eq!(Hyperbolic::from_unit_k(0.5, -0.5), Hyperbolic::E2);
    }

    #[test]
    fn division() {
        let x = h(3.0, 5.0);
        assert_eq!(x.checked_div(x).unwrap(), Hyperbolic::ONE);
        assert!(matches!(
            x.checked_div(Hyperbolic::E1),
            Err(Error::DivisionByZeroDivisor(_))
        ));
        assert!(x.checked_div(Hyperbolic::ZERO).is_err());
    }

    #[test]
    fn embedding() {
        assert_eq!(Hyperbolic::embed_real(1.0).unwrap(), Hyperbolic::ONE);
        assert_eq!(Hyperbolic::embed_real(0.0).unwrap(), Hyperbolic::ZERO);
        assert_eq!(Hyperbolic::embed_real(2.5).unwrap(), h(2.5, 2.5));
        assert!(matches!(
            Hyperbolic::embed_real(f64::NAN),
            Err(Error::NonFinite(_))
        ));
        assert!(Hyperbolic::embed_real(f64::INFINITY).is_err());
    }

    #[test]
    fn zero_divisors() {
        assert!(h(1.0, 0.0).is_zero_divisor());
        assert!(h(0.0, -2.0).is_zero_divisor());
        assert!(!Hyperbolic::ZERO.is_zero_divisor());
        assert!(Hyperbolic::ZERO.is_zero_divisor_or_zero());
        assert!(!h(1.0, 2.0).is_zero_divisor_or_zero());
    }

    #[test]
    fn ordering() {
        assert_eq!(h(1.0, 2.0).hyp_cmp(h(3.0, 4.0)), HypOrdering::Less);
        assert_eq!(h(3.0, 4.0).hyp_cmp(h(1.0, 2.0)), HypOrdering::Greater);
        assert_eq!(h(1.0, 4.0).hyp_cmp(h(3.0, 2.0)), HypOrdering::Incomparable);
        assert_eq!(h(1.0, 4.0).hyp_cmp(h(1.0, 4.0)), HypOrdering::Equal);
        // one equal component: ⪯ holds but ≺ does not
        assert_eq!(h(1.0, 2.0).hyp_cmp(h(1.0, 3.0)), HypOrdering::Incomparable);
        assert!(h(1.0, 2.0).preceq(h(1.0, 3.0)));
        assert!(!h(1.0, 2.0).prec(h(1.0, 3.0)));
        assert!(h(3.0, 4.0).succ(h(1.0, 2.0)));
        assert!(h(3.0, 4.0).succeq(h(3.0, 2.0)));
    }

    #[test]
    fn modulus_and_metric() {
        assert_eq!((-Hyperbolic::ONE).modulus_k(), Hyperbolic::ONE);
        assert_eq!(h(3.0, -4.0).modulus_k(), h(3.0, 4.0));
        assert_eq!(Hyperbolic::ZERO.modulus_k(), Hyperbolic::ZERO);
        let x = h(1.5, -2.0);
        assert_eq!(x.metric_dk(x), Hyperbolic::ZERO);
        assert_eq!(Hyperbolic::ZERO.metric_dk(Hyperbolic::ONE), Hyperbolic::ONE);
        assert_eq!(h(1.0, 5.0).metric_dk(h(4.0, 1.0)), h(3.0, 4.0));
    }

    #[test]
    fn powers() {
        let half = Hyperbolic::splat(0.5);
        assert_eq!(h(4.0, 9.0).pow(half).unwrap(), h(2.0, 3.0));
        let a = h(0.3, 7.0);
        assert_eq!(a.pow(Hyperbolic::ZERO).unwrap(), Hyperbolic::ONE);
        assert_eq!(a.pow(Hyperbolic::ONE).unwrap(), a);
        assert_eq!(h(0.0, 4.0).pow(half).unwrap(), h(0.0, 2.0));
        assert!(h(-1.0, 4.0).pow(half).is_err());
        assert!(h(0.0, 4.0).pow(Hyperbolic::ZERO).is_err());
        assert!(h(0.0, 4.0).pow(-Hyperbolic::ONE).is_err());
        assert_eq!(
            h(0.0, 4.0)
                .pow_with(Hyperbolic::ZERO, ZeroPowZero::One)
                .unwrap(),
            Hyperbolic::ONE
        );
        assert!(h(0.0, 4.0)
            .pow_with(-Hyperbolic::ONE, ZeroPowZero::One)
            .is_err());
    }

    #[test]
    fn logarithm() {
        assert_eq!(Hyperbolic::ONE.ln().unwrap(), Hyperbolic::ZERO);
        let e = std::f64::consts::E;
        let l = h(e, e * e).ln().unwrap();
        assert!(l.approx_eq(h(1.0, 2.0), 1e-15));
        assert!(h(0.0, 1.0).ln().is_err());
        assert!(h(1.0, -1.0).ln().is_err());
    }

    #[test]
    fn display_and_parse() {
        let x = h(3.0, -4.5);
        assert_eq!(x.to_string(), "3*e1-4.5*e2");
        assert_eq!("3*e1-4.5*e2".parse::<Hyperbolic>().unwrap(), x);
        assert_eq!(
            " 3 * e1 + 5 * e2 ".parse::<Hyperbolic>().unwrap(),
            h(3.0, 5.0)
        );
        assert_eq!(
            "1e1*e1+2e-1*e2".parse::<Hyperbolic>().unwrap(),
            h(10.0, 0.2)
        );
        assert_eq!("2+3k".parse::<Hyperbolic>().unwrap(), h(5.0, -1.0));
        assert_eq!("2-3k".parse::<Hyperbolic>().unwrap(), h(-1.0, 5.0));
        assert_eq!(
            "-1e-3+2e+0k".parse::<Hyperbolic>().unwrap(),
            Hyperbolic::from_unit_k(-1e-3, 2.0)
        );
        assert_eq!("k".parse::<Hyperbolic>().unwrap(), Hyperbolic::K);
        assert_eq!("-k".parse::<Hyperbolic>().unwrap(), -Hyperbolic::K);
        assert_eq!("2.5".parse::<Hyperbolic>().unwrap(), Hyperbolic::splat(2.5));
        assert_eq!(x.to_unit_k_string(), "-0.75+3.75k");
        assert_eq!(x.to_unit_k_string().parse::<Hyperbolic>().unwrap(), x);
        for bad in ["", "abc", "1*e1", "1*e12*e2", "1+xk", "nan"] {
            assert!(bad.parse::<Hyperbolic>().is_err(), "{bad}");
        }
    }

    #[test]
    fn intervals() {
        let unit = HyperbolicInterval::closed(Hyperbolic::ZERO, Hyperbolic::ONE).unwrap();
        assert_eq!(unit, HyperbolicInterval::unit());
        assert!(unit.contains(h(0.0, 1.0)));
        assert!(!unit.contains_interior(h(0.0, 0.5)));
        assert!(unit.contains_interior(h(0.2, 0.5)));
        assert!(!unit.contains(h(0.2, 1.5)));
        assert!(HyperbolicInterval::closed(Hyperbolic::ZERO, Hyperbolic::E1).is_err());
        assert!(HyperbolicInterval::closed(Hyperbolic::ONE, Hyperbolic::ZERO).is_err());
        assert!(HyperbolicInterval::closed(h(1.0, 2.0), h(3.0, 1.0)).is_err());
        assert!(HyperbolicInterval::closed(Hyperbolic::ONE, Hyperbolic::ONE).is_ok());
        assert!(HyperbolicInterval::open(Hyperbolic::ZERO, Hyperbolic::E1).is_err());
        let open = HyperbolicInterval::open(Hyperbolic::ZERO, Hyperbolic::ONE).unwrap();
        assert!(!open.contains(h(0.0, 0.5)));
        assert!(HyperbolicInterval::whole().contains(h(-1e300, 1e300)));
        assert!(!HyperbolicInterval::whole().is_bounded());
        assert!(HyperbolicInterval::positive().contains(h(1e-300, 2.0)));
        assert_eq!(unit.margin(h(0.25, 0.9)), h(0.25, 1.0 - 0.9));
    }

    fn finite() -> impl Strategy<Value = f64> {
        -1e6..1e6f64
    }

    fn hyp() -> impl Strategy<Value = Hyperbolic> {
        (finite(), finite()).prop_map(|(a, b)| Hyperbolic::new(a, b))
    }

    proptest! {
        #[test]
        fn ring_ops_match_componentwise_real_ops(x in hyp(), y in hyp()) {
            prop_assert_eq!(x + y, h(x.x1 + y.x1, x.x2 + y.x2));
            prop_assert_eq!(x - y, h(x.x1 - y.x1, x.x2 - y.x2));
            prop_assert_eq!(x * y, h(x.x1 * y.x1, x.x2 * y.x2));
            prop_assert_eq!(x * y, y * x);
            prop_assert_eq!(x + y, y + x);
        }

        #[test]
        fn associativity_and_distributivity(x in hyp(), y in hyp(), z in hyp()) {
            // reassociation differs by at most two roundings of the operands' magnitude
            let bound = |a: f64, b: f64, c: f64| 2.0 * f64::EPSILON * (a.abs() + b.abs() + c.abs());
            let l = (x + y) + z;
            let r = x + (y + z);
            prop_assert!((l.x1 - r.x1).abs() <= bound(x.x1, y.x1, z.x1));
            prop_assert!((l.x2 - r.x2).abs() <= bound(x.x2, y.x2, z.x2));
            let l = x * (y + z);
            let r = x * y + x * z;
            let scale = |a: f64, b: f64, c: f64| (a * b).abs() + (a * c).abs();
            prop_assert!((l.x1 - r.x1).abs() <= 4.0 * f64::EPSILON * scale(x.x1, y.x1, z.x1));
            prop_assert!((l.x2 - r.x2).abs() <= 4.0 * f64::EPSILON * scale(x.x2, y.x2, z.x2));
        }

        #[test]
        fn unit_k_round_trip(a in finite(), b in finite()) {
            let x = Hyperbolic::from_unit_k(a, b);
            let (a2, b2) = x.to_unit_k();
            let tol = 2.0 * f64::EPSILON * (a.abs() + b.abs()).max(f64::MIN_POSITIVE);
            prop_assert!((a - a2).abs() <= tol && (b - b2).abs() <= tol);
        }

        #[test]
        fn text_round_trip(x in hyp()) {
            prop_assert_eq!(x.to_string().parse::<Hyperbolic>().unwrap(), x);
        }

        #[test]
        fn order_is_partial_order(x in hyp(), y in hyp(), z in hyp()) {
            prop_assert!(x.preceq(x));
            if x.preceq(y) && y.preceq(x) { prop_assert_eq!(x, y); }
            if x.preceq(y) && y.preceq(z) { prop_assert!(x.preceq(z)); }
            let xy = x.hyp_cmp(y);
            let yx = y.hyp_cmp(x);
            match xy {
                HypOrdering::Less => prop_assert_eq!(yx, HypOrdering::Greater),
                HypOrdering::Greater => prop_assert_eq!(yx, HypOrdering::Less),
                other => prop_assert_eq!(yx, other),
            }
        }

        #[test]
        fn triangle_inequality(x in hyp(), y in hyp(), z in hyp()) {
            let lhs = x.metric_dk(z);
            let rhs = x.metric_dk(y) + y.metric_dk(z);
            // allow one rounding of slack per component
            let slack = rhs.map(|v| v * 4.0 * f64::EPSILON);
            prop_assert!(lhs.preceq(rhs + slack));
        }

        #[test]
        fn log_of_power(a1 in 1e-3..1e3f64, a2 in 1e-3..1e3f64, b1 in -5.0..5.0f64, b2 in -5.0..5.0f64) {
            let a = h(a1, a2);
            let b = h(b1, b2);
            let lhs = a.pow(b).unwrap().ln().unwrap();
            let rhs = b * a.ln().unwrap();
            prop_assert!(lhs.approx_eq(rhs, 1e-12 * rhs.modulus_k().x1.max(rhs.modulus_k().x2).max(1.0)));
        }

        #[test]
        fn transcendental_ops_are_componentwise(a1 in 1e-6..1e6f64, a2 in 1e-6..1e6f64, b1 in -3.0..3.0f64, b2 in -3.0..3.0f64) {
            let a = h(a1, a2);
            prop_assert_eq!(a.ln().unwrap(), h(a1.ln(), a2.ln()));
            prop_assert_eq!(a.pow(h(b1, b2)).unwrap(), h(a1.powf(b1), a2.powf(b2)));
            prop_assert_eq!(h(b1, b2).exp(), h(b1.exp(), b2.exp()));
        }
    }
}
