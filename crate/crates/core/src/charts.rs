//! Single-variable chart functions `phi(x)` and the Darboux chart
//! `F(x) = integral of dx / phi(x)`.
//!
//! Closed-form families use fixed antiderivatives:
//!
//! | family           | phi          | F                      | default interval |
//! |------------------|--------------|------------------------|------------------|
//! | `Constant(c)`    | `c`          | `x / c`                | `(-inf, inf)`    |
//! | `Power(1)`       | `x`          | `ln x`                 | `(0, inf)`       |
//! | `Power(k >= 2)`  | `x^k`        | `x^(1-k) / (1-k)`      | `(0, inf)`       |
//! | `Affine(a, b)`   | `a x + b`    | `ln abs(a x + b) / a`  | `(-b/a, inf)`    |
//! | `Logistic`       | `x (1 - x)`  | `ln(x / (1 - x))`      | `(0, 1)`         |
//! | `Exponential(l)` | `exp(l x)`   | `-exp(-l x) / l`       | `(-inf, inf)`    |
//!
//! Affine charts may also live on the component left of the root. Custom
//! charts integrate `1 / phi` numerically from a fixed anchor point.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::expr::{self, EvalError, Expr, ExprError};
use crate::linalg::Rational;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChartError {
    #[error("{x} is outside the chart interval {interval}")]
    OutsideInterval { x: f64, interval: Interval },
    #[error("{y} is outside the chart range {range}")]
    OutsideRange { y: f64, range: Interval },
    #[error("invalid chart: {0}")]
    Invalid(String),
    #[error(
        "interval {interval} is not contained in the nonvanishing interval {allowed} of {family}"
    )]
    IntervalMismatch {
        family: String,
        interval: Interval,
        allowed: Interval,
    },
    #[error("custom chart expression: {0}")]
    Expr(#[from] ExprError),
    #[error("custom chart evaluation at {x}: {source}")]
    Eval { x: f64, source: EvalError },
    #[error("quadrature did not reach tolerance between {from} and {to}")]
    Quadrature { from: f64, to: f64 },
}

/// Open interval `(lo, hi)`; endpoints may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const REAL_LINE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };
    pub const POSITIVE: Interval = Interval {
        lo: 0.0,
        hi: f64::INFINITY,
    };
    pub const UNIT: Interval = Interval { lo: 0.0, hi: 1.0 };

    pub fn new(lo: f64, hi: f64) -> Result<Self, ChartError> {
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(ChartError::Invalid(format!(
                "empty or malformed interval ({lo}, {hi})"
            )));
        }
        Ok(Interval { lo, hi })
    }

    pub fn contains(&self, x: f64) -> bool {
        x > self.lo && x < self.hi
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        self.lo >= other.lo && self.hi <= other.hi
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    /// Intersection, `None` when empty.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        Interval::new(self.lo.max(other.lo), self.hi.min(other.hi)).ok()
    }

    /// A bounded window inside the interval: unbounded sides are cut at
    /// distance `span` from the finite end (or at `+-span/2` when both are).
    pub fn window(&self, span: f64) -> Interval {
        match (self.lo.is_finite(), self.hi.is_finite()) {
            (true, true) => *self,
            (true, false) => Interval {
                lo: self.lo,
                hi: self.lo + span,
            },
            (false, true) => Interval {
                lo: self.hi - span,
                hi: self.hi,
            },
            (false, false) => Interval {
                lo: -span / 2.0,
                hi: span / 2.0,
            },
        }
    }
}

fn fmt_endpoint(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x}")
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", fmt_endpoint(self.lo), fmt_endpoint(self.hi))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Endpoint {
    Num(f64),
    Text(String),
}

impl Endpoint {
    fn from_f64(x: f64) -> Self {
        if x.is_infinite() {
            Endpoint::Text(fmt_endpoint(x))
        } else {
            Endpoint::Num(x)
        }
    }

    fn to_f64(&self) -> Result<f64, String> {
        match self {
            Endpoint::Num(x) => Ok(*x),
            Endpoint::Text(s) => match s.trim() {
                "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
                "-inf" | "-infinity" => Ok(f64::NEG_INFINITY),
                other => other
                    .parse::<f64>()
                    .map_err(|_| format!("invalid endpoint {other:?}")),
            },
        }
    }
}

/// Serialized as `[lo, hi]` with `"inf"` / `"-inf"` sentinels. Deserialization
/// also accepts interval notation strings such as `"(0, 1)"`; a closed bracket
/// is rejected because chart domains are open.
impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        [Endpoint::from_f64(self.lo), Endpoint::from_f64(self.hi)].serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Pair([Endpoint; 2]),
            Notation(String),
        }
        let (lo, hi) = match Repr::deserialize(deserializer)? {
            Repr::Pair([lo, hi]) => (
                lo.to_f64().map_err(D::Error::custom)?,
                hi.to_f64().map_err(D::Error::custom)?,
            ),
            Repr::Notation(s) => parse_notation(&s).map_err(D::Error::custom)?,
        };
        Interval::new(lo, hi).map_err(D::Error::custom)
    }
}

fn parse_notation(s: &str) -> Result<(f64, f64), String> {
    let t = s.trim();
    let open = t.chars().next().ok_or("empty interval")?;
    let close = t.chars().last().ok_or("empty interval")?;
    if open == '[' || close == ']' {
        return Err(format!("interval {t} is closed; domain must be open"));
    }
    if open != '(' || close != ')' {
        return Err(format!("malformed interval {t:?}"));
    }
    let inner = &t[1..t.len() - 1];
    let (lo, hi) = inner
        .split_once(',')
        .ok_or_else(|| format!("malformed interval {t:?}"))?;
    let lo = Endpoint::Text(lo.to_string()).to_f64()?;
    let hi = Endpoint::Text(hi.to_string()).to_f64()?;
    Ok((lo, hi))
}

/// Numerically integrated chart with a symbolic `phi` and `phi'`.
#[derive(Debug, Clone, PartialEq)]
pub struct CustomChart {
    source: String,
    phi: Expr,
    dphi: Expr,
    anchor: f64,
    sign: f64,
}

impl CustomChart {
    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn anchor(&self) -> f64 {
        self.anchor
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ChartFamily {
    Constant(Rational),
    Power(u32),
    Affine { a: Rational, b: Rational },
    Logistic,
    Exponential(Rational),
    Custom(CustomChart),
}

impl ChartFamily {
    pub fn name(&self) -> &'static str {
        match self {
            ChartFamily::Constant(_) => "constant",
            ChartFamily::Power(_) => "power",
            ChartFamily::Affine { .. } => "affine",
            ChartFamily::Logistic => "logistic",
            ChartFamily::Exponential(_) => "exp",
            ChartFamily::Custom(_) => "custom",
        }
    }
}

/// One factor `phi^i(x^i)` together with the open interval on which it is
/// nonvanishing.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartFunction {
    family: ChartFamily,
    interval: Interval,
}

const QUAD_TOL: f64 = 1e-12;
const SIGN_GRID: usize = 1024;

impl ChartFunction {
    pub fn constant(c: Rational) -> Result<Self, ChartError> {
        if c.is_zero() {
            return Err(ChartError::Invalid("constant chart must be nonzero".into()));
        }
        Ok(ChartFunction {
            family: ChartFamily::Constant(c),
            interval: Interval::REAL_LINE,
        })
    }

    /// `phi = 1`.
    pub fn unit() -> Self {
        Self::constant(Rational::one()).expect("1 is nonzero")
    }

    pub fn power(k: u32) -> Result<Self, ChartError> {
        if k == 0 {
            return Err(ChartError::Invalid(
                "power chart needs k >= 1 (use constant for k = 0)".into(),
            ));
        }
        Ok(ChartFunction {
            family: ChartFamily::Power(k),
            interval: Interval::POSITIVE,
        })
    }

    pub fn affine(a: Rational, b: Rational) -> Result<Self, ChartError> {
        if a.is_zero() {
            return Err(ChartError::Invalid(
                "affine chart needs a != 0 (use constant)".into(),
            ));
        }
        let root = (-&b / &a).to_f64();
        Ok(ChartFunction {
            family: ChartFamily::Affine { a, b },
            interval: Interval {
                lo: root,
                hi: f64::INFINITY,
            },
        })
    }

    pub fn logistic() -> Self {
        ChartFunction {
            family: ChartFamily::Logistic,
            interval: Interval::UNIT,
        }
    }

    pub fn exponential(lambda: Rational) -> Result<Self, ChartError> {
        if lambda.is_zero() {
            return Err(ChartError::Invalid(
                "exponential chart needs lambda != 0".into(),
            ));
        }
        Ok(ChartFunction {
            family: ChartFamily::Exponential(lambda),
            interval: Interval::REAL_LINE,
        })
    }

    /// Custom `phi` given as an expression in `x` (or `x1`), on `interval`
    /// (the whole line when `None`). Nonvanishing is checked by sign
    /// agreement on a 1024-point grid, which is a heuristic.
    pub fn custom(source: &str, interval: Option<Interval>) -> Result<Self, ChartError> {
        let phi = expr::parse(source, 1)?;
        let dphi = phi.differentiate(0);
        let interval = interval.unwrap_or(Interval::REAL_LINE);
        let anchor = anchor_point(&interval);
        let mut sign = 0.0;
        for x in sign_grid(&interval) {
            let v = phi
                .evaluate(&[x])
                .map_err(|source| ChartError::Eval { x, source })?;
            if !v.is_finite() || v == 0.0 || (sign != 0.0 && v.signum() != sign) {
                return Err(ChartError::Invalid(format!(
                    "custom chart {source:?} vanishes or changes sign near x = {x} on {interval}"
                )));
            }
            sign = v.signum();
        }
        Ok(ChartFunction {
            family: ChartFamily::Custom(CustomChart {
                source: source.to_string(),
                phi,
                dphi,
                anchor,
                sign,
            }),
            interval,
        })
    }

    /// Narrow the chart to `interval`, which must lie inside the current
    /// nonvanishing interval. Affine charts may instead switch to the
    /// component left of the root.
    pub fn with_interval(mut self, interval: Interval) -> Result<Self, ChartError> {
        let allowed = match &self.family {
            ChartFamily::Affine { a, b } => {
                let root = (-b / a).to_f64();
                if interval.hi <= root {
                    Interval {
                        lo: f64::NEG_INFINITY,
                        hi: root,
                    }
                } else {
                    Interval {
                        lo: root,
                        hi: f64::INFINITY,
                    }
                }
            }
            _ => self.interval,
        };
        if !interval.is_subset_of(&allowed) {
            return Err(ChartError::IntervalMismatch {
                family: self.family.name().to_string(),
                interval,
                allowed,
            });
        }
        if let ChartFamily::Custom(c) = &self.family {
            // re-anchor and re-validate on the new interval
            let source = c.source.clone();
            return Self::custom(&source, Some(interval));
        }
        self.interval = interval;
        Ok(self)
    }

    pub fn family(&self) -> &ChartFamily {
        &self.family
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    fn check(&self, x: f64) -> Result<(), ChartError> {
        if self.interval.contains(x) {
            Ok(())
        } else {
            Err(ChartError::OutsideInterval {
                x,
                interval: self.interval,
            })
        }
    }

    pub fn phi(&self, x: f64) -> Result<f64, ChartError> {
        self.check(x)?;
        Ok(match &self.family {
            ChartFamily::Constant(c) => c.to_f64(),
            ChartFamily::Power(k) => x.powi(*k as i32),
            ChartFamily::Affine { a, b } => a.to_f64() * x + b.to_f64(),
            ChartFamily::Logistic => x * (1.0 - x),
            ChartFamily::Exponential(l) => (l.to_f64() * x).exp(),
            ChartFamily::Custom(c) => c
                .phi
                .evaluate(&[x])
                .map_err(|source| ChartError::Eval { x, source })?,
        })
    }

    pub fn phi_prime(&self, x: f64) -> Result<f64, ChartError> {
        self.check(x)?;
        Ok(match &self.family {
            ChartFamily::Constant(_) => 0.0,
            ChartFamily::Power(k) => *k as f64 * x.powi(*k as i32 - 1),
            ChartFamily::Affine { a, .. } => a.to_f64(),
            ChartFamily::Logistic => 1.0 - 2.0 * x,
            ChartFamily::Exponential(l) => {
                let l = l.to_f64();
                l * (l * x).exp()
            }
            ChartFamily::Custom(c) => c
                .dphi
                .evaluate(&[x])
                .map_err(|source| ChartError::Eval { x, source })?,
        })
    }

    /// `F(x)`, strictly monotone on the interval.
    pub fn forward(&self, x: f64) -> Result<f64, ChartError> {
        self.check(x)?;
        match &self.family {
            ChartFamily::Custom(c) => integrate_reciprocal(c, c.anchor, x),
            _ => Ok(self.closed_forward(x)),
        }
    }

    // closed-form F, also valid at the (possibly infinite) endpoints as a limit
    fn closed_forward(&self, x: f64) -> f64 {
        match &self.family {
            ChartFamily::Constant(c) => x / c.to_f64(),
            ChartFamily::Power(1) => x.ln(),
            ChartFamily::Power(k) => {
                let e = 1.0 - *k as f64;
                x.powf(e) / e
            }
            ChartFamily::Affine { a, b } => {
                let a = a.to_f64();
                (a * x + b.to_f64()).abs().ln() / a
            }
            ChartFamily::Logistic => (x / (1.0 - x)).ln(),
            ChartFamily::Exponential(l) => {
                let l = l.to_f64();
                -(-l * x).exp() / l
            }
            ChartFamily::Custom(_) => unreachable!("custom charts are integrated numerically"),
        }
    }

    /// Image of the interval under `F`, for closed-form families.
    pub fn range(&self) -> Option<Interval> {
        if matches!(self.family, ChartFamily::Custom(_)) {
            return None;
        }
        let a = self.closed_forward(self.interval.lo);
        let b = self.closed_forward(self.interval.hi);
        Some(Interval {
            lo: a.min(b),
            hi: a.max(b),
        })
    }

    /// `F^-1(y)`.
    pub fn inverse(&self, y: f64) -> Result<f64, ChartError> {
        if let ChartFamily::Custom(c) = &self.family {
            return self.custom_inverse(c, y);
        }
        let range = self.range().expect("closed form");
        if !range.contains(y) {
            return Err(ChartError::OutsideRange { y, range });
        }
        let x = match &self.family {
            ChartFamily::Constant(c) => y * c.to_f64(),
            ChartFamily::Power(1) => y.exp(),
            ChartFamily::Power(k) => {
                let e = 1.0 - *k as f64;
                (y * e).powf(1.0 / e)
            }
            ChartFamily::Affine { a, b } => {
                let (a, b) = (a.to_f64(), b.to_f64());
                // sign of a x + b on the chosen component
                let side = if self.interval.lo >= -b / a {
                    a.signum()
                } else {
                    -a.signum()
                };
                (side * (a * y).exp() - b) / a
            }
            ChartFamily::Logistic => {
                if y >= 0.0 {
                    1.0 / (1.0 + (-y).exp())
                } else {
                    let e = y.exp();
                    e / (1.0 + e)
                }
            }
            ChartFamily::Exponential(l) => {
                let l = l.to_f64();
                -(-l * y).ln() / l
            }
            ChartFamily::Custom(_) => unreachable!(),
        };
        // rounding can land exactly on an endpoint
        if self.interval.contains(x) {
            Ok(x)
        } else {
            Err(ChartError::OutsideRange { y, range })
        }
    }

    fn custom_inverse(&self, c: &CustomChart, y: f64) -> Result<f64, ChartError> {
        // F is increasing when phi > 0
        let g = |x: f64| -> Result<f64, ChartError> {
            Ok(c.sign * (integrate_reciprocal(c, c.anchor, x)? - y))
        };
        let out_of_range = || ChartError::OutsideRange {
            y,
            range: self.interval,
        };
        let g0 = g(c.anchor)?;
        if g0 == 0.0 {
            return Ok(c.anchor);
        }
        // expand from the anchor toward the endpoint on the side of the root
        let toward_hi = g0 < 0.0;
        let end = if toward_hi {
            self.interval.hi
        } else {
            self.interval.lo
        };
        let (mut inner, mut outer) = (c.anchor, c.anchor);
        let mut found = false;
        let mut step = 1.0;
        for _ in 0..200 {
            let candidate = if end.is_finite() {
                end - (end - c.anchor) * 0.5f64.powf(step)
            } else if toward_hi {
                c.anchor + 2f64.powf(step) - 1.0
            } else {
                c.anchor - 2f64.powf(step) + 1.0
            };
            if !self.interval.contains(candidate) || candidate == outer {
                break;
            }
            inner = outer;
            outer = candidate;
            let gv = g(outer)?;
            if gv == 0.0 {
                return Ok(outer);
            }
            if (gv > 0.0) == toward_hi {
                found = true;
                break;
            }
            step += 1.0;
        }
        if !found {
            return Err(out_of_range());
        }
        let (mut lo, mut hi) = if toward_hi {
            (inner, outer)
        } else {
            (outer, inner)
        };
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let gm = g(mid)?;
            if gm == 0.0 {
                return Ok(mid);
            }
            if gm < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-9 * (1.0 + lo.abs().max(hi.abs())) {
                break;
            }
        }
        // Newton polish, F'(x) = 1/phi(x)
        let mut x = 0.5 * (lo + hi);
        for _ in 0..4 {
            let phi = self.phi(x)?;
            let next = x - (integrate_reciprocal(c, c.anchor, x)? - y) * phi;
            // the root may sit exactly on a bisection point
            if !(next >= lo && next <= hi) {
                break;
            }
            x = next;
        }
        Ok(x)
    }

    /// Human-readable formula for `F` in the variable `var`; the flag tells
    /// whether it needs parentheses as a factor.
    pub fn antiderivative_text(&self, var: &str) -> (String, bool) {
        match &self.family {
            ChartFamily::Constant(c) if c.is_one() => (var.to_string(), false),
            ChartFamily::Constant(c) => (format!("{var}/{}", wrap(c)), true),
            ChartFamily::Power(1) => (format!("ln({var})"), false),
            ChartFamily::Power(k) => {
                let m = k - 1;
                let coeff = if m == 1 {
                    String::new()
                } else {
                    format!("1/{m}*")
                };
                (format!("-{coeff}{var}^(-{m})"), true)
            }
            ChartFamily::Affine { a, b } => {
                let inner = affine_text(a, b, var);
                let right_of_root = self.interval.lo >= (-b / a).to_f64();
                let positive_side = right_of_root == a.is_positive();
                let arg = if positive_side {
                    inner
                } else {
                    format!("-({inner})")
                };
                if a.is_one() {
                    (format!("ln({arg})"), false)
                } else {
                    (format!("ln({arg})/{}", wrap(a)), true)
                }
            }
            ChartFamily::Logistic => (format!("ln({var}/(1 - {var}))"), false),
            ChartFamily::Exponential(l) if l.is_one() => (format!("-exp(-{var})"), true),
            ChartFamily::Exponential(l) => (format!("-exp(-{}*{var})/{}", wrap(l), wrap(l)), true),
            ChartFamily::Custom(c) => (format!("int_{}^{var} 1/({}) dt", c.anchor, c.source), true),
        }
    }
}

fn wrap(r: &Rational) -> String {
    if r.is_integer() && !r.is_negative() {
        r.to_string()
    } else {
        format!("({r})")
    }
}

fn affine_text(a: &Rational, b: &Rational, var: &str) -> String {
    let lead = if a.is_one() {
        var.to_string()
    } else {
        format!("{}*{var}", wrap(a))
    };
    if b.is_zero() {
        lead
    } else if b.is_negative() {
        format!("{lead} - {}", -b)
    } else {
        format!("{lead} + {b}")
    }
}

fn anchor_point(interval: &Interval) -> f64 {
    if interval.is_bounded() {
        0.5 * (interval.lo + interval.hi)
    } else if interval.contains(0.0) {
        0.0
    } else if interval.contains(1.0) {
        1.0
    } else if interval.lo.is_finite() {
        interval.lo + 1.0
    } else {
        interval.hi - 1.0
    }
}

// interior grid; unbounded sides are compactified
fn sign_grid(interval: &Interval) -> impl Iterator<Item = f64> + '_ {
    (1..=SIGN_GRID).map(move |i| {
        let u = i as f64 / (SIGN_GRID + 1) as f64;
        match (interval.lo.is_finite(), interval.hi.is_finite()) {
            (true, true) => interval.lo + u * (interval.hi - interval.lo),
            (true, false) => interval.lo + u / (1.0 - u),
            (false, true) => interval.hi - (1.0 - u) / u,
            (false, false) => (std::f64::consts::PI * (u - 0.5)).tan(),
        }
    })
}

fn integrate_reciprocal(c: &CustomChart, from: f64, to: f64) -> Result<f64, ChartError> {
    if from == to {
        return Ok(0.0);
    }
    let f = |x: f64| -> Result<f64, ChartError> {
        let v = c
            .phi
            .evaluate(&[x])
            .map_err(|source| ChartError::Eval { x, source })?;
        Ok(1.0 / v)
    };
    let fa = f(from)?;
    let fb = f(to)?;
    let m = 0.5 * (from + to);
    let fm = f(m)?;
    let whole = simpson(from, to, fa, fm, fb);
    adaptive_simpson(&f, from, to, fa, fm, fb, whole, QUAD_TOL, 50)
        .map_err(|_| ChartError::Quadrature { from, to })
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive_simpson<F>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64, ChartError>
where
    F: Fn(f64) -> Result<f64, ChartError>,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm)?;
    let frm = f(rm)?;
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol || (m - a).abs() <= f64::EPSILON * m.abs().max(1.0) {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 || !delta.is_finite() {
        return Err(ChartError::Quadrature { from: a, to: b });
    }
    Ok(
        adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)?
            + adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)?,
    )
}

/// Model-file form of a chart, e.g. `{"family":"power","k":2}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartDescriptor {
    #[serde(flatten)]
    pub family: FamilyDescriptor,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interval: Option<Interval>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum FamilyDescriptor {
    Constant {
        c: Rational,
    },
    Power {
        k: u32,
    },
    Affine {
        a: Rational,
        b: Rational,
    },
    Logistic,
    #[serde(alias = "exponential")]
    Exp {
        lambda: Rational,
    },
    Custom {
        expr: String,
    },
}

impl ChartDescriptor {
    pub fn build(&self) -> Result<ChartFunction, ChartError> {
        let chart = match &self.family {
            FamilyDescriptor::Constant { c } => ChartFunction::constant(c.clone())?,
            FamilyDescriptor::Power { k } => ChartFunction::power(*k)?,
            FamilyDescriptor::Affine { a, b } => ChartFunction::affine(a.clone(), b.clone())?,
            FamilyDescriptor::Logistic => ChartFunction::logistic(),
            FamilyDescriptor::Exp { lambda } => ChartFunction::exponential(lambda.clone())?,
            FamilyDescriptor::Custom { expr } => return ChartFunction::custom(expr, self.interval),
        };
        match self.interval {
            Some(iv) => chart.with_interval(iv),
            None => Ok(chart),
        }
    }
}

impl From<&ChartFunction> for ChartDescriptor {
    fn from(chart: &ChartFunction) -> Self {
        let family = match &chart.family {
            ChartFamily::Constant(c) => FamilyDescriptor::Constant { c: c.clone() },
            ChartFamily::Power(k) => FamilyDescriptor::Power { k: *k },
            ChartFamily::Affine { a, b } => FamilyDescriptor::Affine {
                a: a.clone(),
                b: b.clone(),
            },
            ChartFamily::Logistic => FamilyDescriptor::Logistic,
            ChartFamily::Exponential(l) => FamilyDescriptor::Exp { lambda: l.clone() },
            ChartFamily::Custom(c) => FamilyDescriptor::Custom {
                expr: c.source.clone(),
            },
        };
        let default = ChartDescriptor {
            family: family.clone(),
            interval: None,
        }
        .build()
        .map(|c| c.interval)
        .ok();
        let interval = (default != Some(chart.interval)).then_some(chart.interval);
        ChartDescriptor { family, interval }
    }
}
