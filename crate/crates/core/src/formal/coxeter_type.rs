//! Maximally ramified formal types `d + p(ω^{-1}) dz/z`.

use num_integer::Integer;
use num_rational::Rational64;

use crate::algebra::{LaurentMatrix, Scalar};
use crate::error::{DsError, Result};

/// `ω_n^{-1} = sum_i E_{i+1,i} + z^{-1} E_{1n}`; its `n`-th power is `z^{-1} I`.
pub fn omega_inverse(n: usize) -> LaurentMatrix {
    let mut m = LaurentMatrix::monomial(n, 0, n - 1, -1, Scalar::one());
    for i in 0..n.saturating_sub(1) {
        m = m.add(&LaurentMatrix::monomial(n, i + 1, i, 0, Scalar::one()));
    }
    m
}

/// Connection matrix of the Frenkel-Gross connection, slope `1/n`.
pub fn frenkel_gross(n: usize) -> LaurentMatrix {
    omega_inverse(n)
}

/// Connection matrix of the Airy connection `z^{-1} ω_n^{-1}`, slope `(n+1)/n`.
pub fn airy(n: usize) -> LaurentMatrix {
    omega_inverse(n).shift(-1)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoxeterFormalType {
    n: usize,
    r: usize,
    /// Coefficients of `p`, constant term first; length `r + 1`.
    coeffs: Vec<Scalar>,
}

impl CoxeterFormalType {
    pub fn new(n: usize, r: usize, coeffs: Vec<Scalar>) -> Result<Self> {
        if n == 0 || r == 0 {
            return Err(DsError::invalid("n and r must be positive"));
        }
        if n.gcd(&r) != 1 {
            return Err(DsError::precondition(format!("gcd(r, n) = gcd({r}, {n}) must be 1")));
        }
        if coeffs.len() != r + 1 {
            return Err(DsError::invalid(format!(
                "p must have degree r = {r}: expected {} coefficients, got {}",
                r + 1,
                coeffs.len()
            )));
        }
        if coeffs[r].is_zero() {
            return Err(DsError::invalid("leading coefficient of p must be nonzero"));
        }
        Ok(CoxeterFormalType { n, r, coeffs })
    }

    /// The monomial type `p(x) = c x^r + p0`.
    pub fn monomial(n: usize, r: usize, c: Scalar, p0: Scalar) -> Result<Self> {
        let mut coeffs = vec![Scalar::zero(); r + 1];
        coeffs[r] = c;
        coeffs[0] = &coeffs[0] + &p0;
        CoxeterFormalType::new(n, r, coeffs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn p0(&self) -> &Scalar {
        &self.coeffs[0]
    }

    pub fn slope(&self) -> Rational64 {
        Rational64::new(self.r as i64, self.n as i64)
    }

    /// Trace of the residue of `p(ω^{-1}) dz/z`, which is `n p(0)`.
    pub fn residue_trace(&self) -> Scalar {
        self.p0().scale_int(self.n as i64)
    }

    /// `p(ω_n^{-1})` as an exact Laurent matrix.
    pub fn matrix(&self) -> LaurentMatrix {
        let w = omega_inverse(self.n);
        let mut power = LaurentMatrix::identity(self.n);
        let mut out = LaurentMatrix::zero(self.n);
        for c in &self.coeffs {
            if !c.is_zero() {
                out = out.add(&power.scale(c));
            }
            power = power.mul(&w);
        }
        out
    }
}
