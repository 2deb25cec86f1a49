//! Skew-symmetric congruence canonical form.
//!
//! For a skew `A` we build an invertible `P` with
//! `P A P^T = diag(D, .., D, 0, .., 0)`, `D = [[0, 1], [-1, 0]]`, by symmetric
//! pair elimination: pick the first nonzero entry `(i, j)` of the trailing
//! block in row-major order, move it to position `(p, p + 1)`, scale it to 1
//! and clear the rest of rows/columns `p` and `p + 1` with paired row and
//! column operations. Every operation is mirrored on the rows of `P`.

use super::{CoefficientMatrix, LinalgError, Rational, RationalMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceResult {
    /// The invertible change of basis.
    pub p: RationalMatrix,
    /// Rank of `A`, always even.
    pub rank: usize,
    /// `P A P^T`.
    pub canonical: RationalMatrix,
}

impl CongruenceResult {
    pub fn blocks(&self) -> usize {
        self.rank / 2
    }
}

/// `diag(D_1, .., D_{rank/2}, 0, .., 0)` of size `n`.
pub fn canonical_form(n: usize, rank: usize) -> RationalMatrix {
    let mut m = RationalMatrix::zeros(n, n);
    for b in 0..rank / 2 {
        m[(2 * b, 2 * b + 1)] = Rational::one();
        m[(2 * b + 1, 2 * b)] = -Rational::one();
    }
    m
}

pub fn skew_canonical_congruence(a: &CoefficientMatrix) -> CongruenceResult {
    let n = a.dim();
    let mut b = a.as_matrix().clone();
    let mut p = RationalMatrix::identity(n);
    let mut pos = 0;

    while pos + 1 < n {
        let Some((i, j)) = first_nonzero(&b, pos) else {
            break;
        };
        // Skew symmetry forces j > i >= pos for the first hit in row-major order.
        swap(&mut b, &mut p, i, pos);
        swap(&mut b, &mut p, j, pos + 1);

        let inv = b[(pos, pos + 1)].recip().expect("pivot is nonzero");
        scale(&mut b, &mut p, pos, &inv);

        for k in pos + 2..n {
            let beta = b[(k, pos)].clone();
            let alpha = -&b[(k, pos + 1)];
            if alpha.is_zero() && beta.is_zero() {
                continue;
            }
            combine(&mut b, &mut p, k, pos, &alpha, pos + 1, &beta);
        }
        pos += 2;
    }

    CongruenceResult {
        p,
        rank: pos,
        canonical: b,
    }
}

/// `P A P^T`, exact.
pub fn congruence_apply(
    p: &RationalMatrix,
    a: &CoefficientMatrix,
) -> Result<CoefficientMatrix, LinalgError> {
    if p.ncols() != a.dim() || !p.is_square() {
        return Err(LinalgError::DimensionMismatch {
            left: (p.nrows(), p.ncols()),
            right: (a.dim(), a.dim()),
        });
    }
    let out = p.mul(a.as_matrix())?.mul(&p.transpose())?;
    CoefficientMatrix::new(out)
}

fn first_nonzero(b: &RationalMatrix, from: usize) -> Option<(usize, usize)> {
    let n = b.nrows();
    (from..n)
        .flat_map(|i| (from..n).map(move |j| (i, j)))
        .find(|&(i, j)| !b[(i, j)].is_zero())
}

fn swap(b: &mut RationalMatrix, p: &mut RationalMatrix, i: usize, j: usize) {
    b.swap_rows(i, j);
    b.swap_cols(i, j);
    p.swap_rows(i, j);
}

fn scale(b: &mut RationalMatrix, p: &mut RationalMatrix, row: usize, factor: &Rational) {
    let n = b.nrows();
    for j in 0..n {
        b[(row, j)] = &b[(row, j)] * factor;
        p[(row, j)] = &p[(row, j)] * factor;
    }
    for i in 0..n {
        b[(i, row)] = &b[(i, row)] * factor;
    }
}

/// Row and column `k` += `alpha` * (row/col `r1`) + `beta` * (row/col `r2`).
fn combine(
    b: &mut RationalMatrix,
    p: &mut RationalMatrix,
    k: usize,
    r1: usize,
    alpha: &Rational,
    r2: usize,
    beta: &Rational,
) {
    let n = b.nrows();
    for j in 0..n {
        let db = alpha * &b[(r1, j)] + beta * &b[(r2, j)];
        b[(k, j)] += &db;
        let dp = alpha * &p[(r1, j)] + beta * &p[(r2, j)];
        p[(k, j)] += &dp;
    }
    for i in 0..n {
        let db = alpha * &b[(i, r1)] + beta * &b[(i, r2)];
        b[(i, k)] += &db;
    }
}
