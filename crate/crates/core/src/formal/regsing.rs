//! Nonresonance and gauge normalization of regular singular connections.

use crate::algebra::{exact_roots, solve_sylvester, LaurentMatrix, Matrix, Poly, Scalar};
use crate::error::{DsError, Result};

/// Distinct eigenvalues of a square matrix, all required to be in `Q(i)`.
pub fn exact_eigenvalues(m: &Matrix) -> Result<Vec<Scalar>> {
    if !m.is_square() {
        return Err(DsError::invalid("eigenvalues need a square matrix"));
    }
    exact_roots(&Poly::new(m.char_poly()))
}

/// No two eigenvalues differ by a nonzero integer.
pub fn is_nonresonant(b0: &Matrix) -> Result<bool> {
    Ok(resonant_pair(b0)?.is_none())
}

fn resonant_pair(b0: &Matrix) -> Result<Option<(Scalar, Scalar)>> {
    let eigs = exact_eigenvalues(b0)?;
    for (i, a) in eigs.iter().enumerate() {
        for b in &eigs[i + 1..] {
            if a.differs_by_nonzero_integer(b) {
                return Ok(Some((a.clone(), b.clone())));
            }
        }
    }
    Ok(None)
}

/// Gauge `g = I + g_1 z + ... + g_{N-1} z^{N-1}` (known mod `z^N`) taking
/// `d + M dz/z`, `M = B_0 + B_1 z + ...`, to `d + B_0 dz/z`. Each `g_k`
/// solves `(B_0 + k) g_k - g_k B_0 = sum_{i<k} g_i B_{k-i}`.
pub fn regsing_normalize(m: &LaurentMatrix, order: i64) -> Result<LaurentMatrix> {
    if order < 1 {
        return Err(DsError::invalid("normalization order must be at least 1"));
    }
    if let Some(t) = m.trunc() {
        if t < order {
            return Err(DsError::InsufficientTruncation { need: order, have: t });
        }
    }
    if m.min_degree().is_some_and(|d| d < 0) {
        return Err(DsError::precondition(
            "connection matrix has negative powers of z; not in regular singular form",
        ));
    }
    let n = m.n();
    let b: Vec<Matrix> = (0..order)
        .map(|k| m.coeff(k).expect("checked against truncation"))
        .collect();
    if let Some((x, y)) = resonant_pair(&b[0])? {
        return Err(DsError::Resonant(x.to_string(), y.to_string()));
    }
    let mut g = vec![Matrix::identity(n)];
    for k in 1..order as usize {
        let rhs = (0..k).fold(Matrix::zeros(n, n), |acc, i| &acc + &(&g[i] * &b[k - i]));
        let shifted = &b[0] + &Matrix::scalar(n, &Scalar::from_int(k as i64));
        g.push(solve_sylvester(&shifted, &b[0], &rhs)?);
    }
    LaurentMatrix::from_terms(
        n,
        g.into_iter().enumerate().map(|(k, gk)| (k as i64, gk)).collect(),
        Some(order),
    )
}

/// `g M g^{-1} - z g' g^{-1}` modulo `z^order`. `g` must be a power series
/// with invertible constant term.
pub fn gauge_transform(g: &LaurentMatrix, m: &LaurentMatrix, order: i64) -> Result<LaurentMatrix> {
    let ginv = series_inverse(g, order)?;
    let conj = g.mul(m).mul(&ginv);
    Ok(conj.sub(&g.euler_derivative().mul(&ginv)).with_trunc(Some(order)))
}

/// Inverse of a power series matrix with invertible constant term, modulo
/// `z^order` (capped by the truncation of `g`).
pub fn series_inverse(g: &LaurentMatrix, order: i64) -> Result<LaurentMatrix> {
    if g.min_degree().is_some_and(|d| d < 0) {
        return Err(DsError::precondition("series inverse needs a power series"));
    }
    let order = g.trunc().map_or(order, |t| t.min(order));
    let n = g.n();
    let g0inv = g.coeff(0).unwrap_or_else(|| Matrix::zeros(n, n)).inverse()?;
    let mut h = vec![g0inv.clone()];
    for k in 1..order {
        // sum_{i<=k} g_i h_{k-i} = 0
        let mut acc = Matrix::zeros(n, n);
        for i in 1..=k {
            if let Some(gi) = g.coeff(i) {
                acc = &acc + &(&gi * &h[(k - i) as usize]);
            }
        }
        h.push(-&(&g0inv * &acc));
    }
    LaurentMatrix::from_terms(
        n,
        h.into_iter().enumerate().map(|(k, m)| (k as i64, m)).collect(),
        Some(order),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::matrix::Matrix;

    fn diag(v: &[Scalar]) -> Matrix {
        Matrix::diagonal(v)
    }

    #[test]
    fn resonance_checks() {
        assert!(is_nonresonant(&diag(&[Scalar::zero(), Scalar::ratio(1, 2)])).unwrap());
        assert!(!is_nonresonant(&diag(&[Scalar::zero(), Scalar::from_int(3)])).unwrap());
        let nil = Matrix::from_i64_rows(&[&[0, 1, 5], &[0, 0, 2], &[0, 0, 0]]);
        assert!(is_nonresonant(&nil).unwrap());
        let irr = Matrix::from_i64_rows(&[&[0, 2], &[1, 0]]);
        assert!(matches!(is_nonresonant(&irr), Err(DsError::EigenvaluesOutsideField)));
    }

    #[test]
    fn constant_connection_needs_no_gauge() {
        let b0 = diag(&[Scalar::zero(), Scalar::ratio(1, 2)]);
        let g = regsing_normalize(&LaurentMatrix::constant(b0), 5).unwrap();
        assert_eq!(g, LaurentMatrix::identity(2).with_trunc(Some(5)));
    }

    #[test]
    fn first_order_correction() {
        let b0 = diag(&[Scalar::zero(), Scalar::ratio(1, 2)]);
        let m = LaurentMatrix::constant(b0.clone())
            .add(&LaurentMatrix::monomial(2, 0, 1, 1, Scalar::one()));
        let g = regsing_normalize(&m, 3).unwrap();
        // (B0 + 1) g1 - g1 B0 = E12 forces g1 = 2 E12
        assert_eq!(g.coeff(1).unwrap(), Matrix::unit(2, 0, 1).scale(&Scalar::from_int(2)));
        assert!(g.coeff(2).unwrap().is_zero());
        let out = gauge_transform(&g, &m, 3).unwrap();
        assert!(out.agrees_below(&LaurentMatrix::constant(b0), 3));
    }

    #[test]
    fn rejects_bad_input() {
        let res = LaurentMatrix::constant(diag(&[Scalar::zero(), Scalar::one()]));
        assert!(matches!(regsing_normalize(&res, 3), Err(DsError::Resonant(..))));
        let short = LaurentMatrix::identity(2).with_trunc(Some(2));
        assert!(matches!(
            regsing_normalize(&short, 3),
            Err(DsError::InsufficientTruncation { need: 3, have: 2 })
        ));
        let polar = LaurentMatrix::monomial(2, 0, 1, -1, Scalar::one());
        assert!(regsing_normalize(&polar, 3).is_err());
    }
}
