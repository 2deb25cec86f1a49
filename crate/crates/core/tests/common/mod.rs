#![allow(dead_code)]

use rand::Rng;
use separable_poisson::charts::{ChartFunction, Interval};
use separable_poisson::linalg::{CoefficientMatrix, Rational, RationalMatrix};
use separable_poisson::structure::{DomainBox, SeparableStructure};

/// `p/q` with `q` in `1..=max_den`, value in `[-bound, bound]`.
pub fn random_rational<R: Rng>(rng: &mut R, bound: i64, max_den: i64) -> Rational {
    let q = rng.random_range(1..=max_den);
    let p = rng.random_range(-bound * q..=bound * q);
    Rational::new(p, q).unwrap()
}

pub fn random_nonzero_rational<R: Rng>(rng: &mut R, bound: i64, max_den: i64) -> Rational {
    loop {
        let r = random_rational(rng, bound, max_den);
        if !r.is_zero() {
            return r;
        }
    }
}

/// Random skew matrix with entries in `[-5, 5]`; about a quarter of the
/// upper entries are zero so that degenerate ranks show up.
pub fn random_skew<R: Rng>(rng: &mut R, n: usize) -> CoefficientMatrix {
    let mut m = RationalMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let v = if rng.random_bool(0.25) {
                Rational::zero()
            } else {
                random_rational(rng, 5, 3)
            };
            m[(i, j)] = v.clone();
            m[(j, i)] = -v;
        }
    }
    CoefficientMatrix::new(m).unwrap()
}

pub const CUSTOM_SOURCES: &[&str] = &["1 + x^2", "2 + x/(1 + x^2)", "exp(x/2) + 1"];

/// One chart of a randomly chosen family with its default interval.
pub fn random_chart<R: Rng>(rng: &mut R) -> ChartFunction {
    match rng.random_range(0..6) {
        0 => ChartFunction::constant(random_nonzero_rational(rng, 5, 2)).unwrap(),
        1 => ChartFunction::power(rng.random_range(1..=3)).unwrap(),
        2 => ChartFunction::affine(
            random_nonzero_rational(rng, 3, 2),
            random_rational(rng, 3, 2),
        )
        .unwrap(),
        3 => ChartFunction::logistic(),
        4 => ChartFunction::exponential(random_nonzero_rational(rng, 1, 2)).unwrap(),
        _ => ChartFunction::custom(
            CUSTOM_SOURCES[rng.random_range(0..CUSTOM_SOURCES.len())],
            None,
        )
        .unwrap(),
    }
}

/// A random open sub-interval of `iv` cut to width at most `span`.
pub fn random_subinterval<R: Rng>(rng: &mut R, iv: Interval, span: f64) -> Interval {
    let w = iv.window(span);
    let width = w.hi - w.lo;
    let lo = w.lo + rng.random_range(0.0..0.3) * width;
    let hi = w.hi - rng.random_range(0.0..0.3) * width;
    Interval::new(lo, hi).unwrap()
}

/// Random separable structure of dimension `n` whose domain is a random
/// bounded box inside the chart intervals.
pub fn random_structure<R: Rng>(rng: &mut R, n: usize, span: f64) -> SeparableStructure {
    let a = random_skew(rng, n);
    let charts: Vec<ChartFunction> = (0..n).map(|_| random_chart(rng)).collect();
    let domain = charts
        .iter()
        .map(|c| random_subinterval(rng, c.interval(), span))
        .collect();
    SeparableStructure::new(a, charts, DomainBox::new(domain)).unwrap()
}
