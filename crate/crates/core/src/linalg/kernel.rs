use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{CoefficientMatrix, Rational};

/// Basis of `Ker(A)`, each vector scaled to coprime integers with its first
/// nonzero entry positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelBasis {
    dim: usize,
    vectors: Vec<Vec<Rational>>,
}

impl KernelBasis {
    pub fn vectors(&self) -> &[Vec<Rational>] {
        &self.vectors
    }

    /// Number of basis vectors, `n - rank(A)`.
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Ambient dimension `n`.
    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// Exact null space of `A` from its reduced row echelon form; one vector per
/// free column, in column order.
pub fn kernel_basis(a: &CoefficientMatrix) -> KernelBasis {
    let n = a.dim();
    let mut rref = a.as_matrix().clone();
    let pivots = rref.row_reduce();
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let vectors = (0..n)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Rational::zero(); n];
            v[free] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -&rref[(row, free)];
            }
            normalize(v)
        })
        .collect();
    KernelBasis { dim: n, vectors }
}

/// Scale a nonzero rational vector to coprime integers, first nonzero positive.
pub(crate) fn normalize(v: Vec<Rational>) -> Vec<Rational> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if gcd.is_zero() {
        return v;
    }
    let sign = match ints.iter().find(|x| !x.is_zero()) {
        Some(first) if first.is_negative() => -BigInt::one(),
        _ => BigInt::one(),
    };
    ints.into_iter()
        .map(|x| Rational::from_integer(x / &gcd * &sign))
        .collect()
}
