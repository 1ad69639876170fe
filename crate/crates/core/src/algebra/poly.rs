//! Univariate polynomials over `Q(i)` and exact root extraction.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One};

use super::scalar::Scalar;
use crate::error::{DsError, Result};

/// Coefficients from the constant term upward, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly(Vec<Scalar>);

impl Poly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Scalar {
        self.0.last().cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.0
            .iter()
            .rev()
            .fold(Scalar::zero(), |acc, c| &(&acc * x) + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.scale_int(k as i64))
                .collect(),
        )
    }

    pub fn monic(&self) -> Poly {
        match self.0.last() {
            None => self.clone(),
            Some(lead) => {
                let inv = lead.inv().expect("nonzero leading coefficient");
                Poly(self.0.iter().map(|c| c * &inv).collect())
            }
        }
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let mut rem = self.0.clone();
        let dl = d.leading().inv().unwrap();
        let dd = d.degree();
        if rem.len() < d.0.len() {
            return (Poly::new(Vec::new()), self.clone());
        }
        let mut quot = vec![Scalar::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &dl;
            if c.is_zero() {
                continue;
            }
            for (i, di) in d.0.iter().enumerate() {
                rem[k + i] -= &(&c * di);
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Product of the distinct irreducible factors, monic.
    pub fn squarefree_part(&self) -> Poly {
        if self.degree() == 0 {
            return self.monic();
        }
        self.div_rem(&self.gcd(&self.derivative())).0.monic()
    }

    fn to_complex(&self) -> Vec<Complex64> {
        self.0
            .iter()
            .map(|c| {
                let (re, im) = c.to_f64_pair();
                Complex64::new(re, im)
            })
            .collect()
    }
}

/// Simultaneous Newton iteration (Aberth) on all roots of a monic
/// polynomial given in floating point.
fn aberth(coeffs: &[Complex64]) -> Vec<Complex64> {
    let deg = coeffs.len() - 1;
    let eval = |x: Complex64| -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for c in coeffs.iter().rev() {
            dp = dp * x + p;
            p = p * x + c;
        }
        (p, dp)
    };
    let bound = 1.0 + coeffs[..deg].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| Complex64::from_polar(bound, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / deg as f64))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..deg {
            let (p, dp) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..deg)
                .filter(|&j| j != i)
                .map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

fn round_to(x: f64, den: &BigInt) -> Option<BigRational> {
    let den_f = num_traits::ToPrimitive::to_f64(den)?;
    let num = (x * den_f).round();
    Some(BigRational::new(BigInt::from_f64(num)?, den.clone()))
}

/// The distinct roots of `p`, provided they all lie in `Q(i)`.
///
/// Floating-point roots of the squarefree part are rounded to the lattice
/// `(1/D) Z[i]` with `D` the common denominator of the monic squarefree
/// part (any Gaussian-rational root lies there), then confirmed by exact
/// evaluation and divided out.
pub fn exact_roots(p: &Poly) -> Result<Vec<Scalar>> {
    if p.is_zero() {
        return Err(DsError::invalid("the zero polynomial has no finite root set"));
    }
    let mut rest = p.squarefree_part();
    let mut roots = Vec::new();
    while rest.degree() > 0 {
        if rest.degree() == 1 {
            roots.push(-&rest.coeffs()[0]);
            break;
        }
        let den = rest
            .coeffs()
            .iter()
            .fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, &c.denominator_lcm()));
        let approx = aberth(&rest.to_complex());
        let mut found = None;
        for z in approx {
            let (Some(re), Some(im)) = (round_to(z.re, &den), round_to(z.im, &den)) else {
                continue;
            };
            let cand = Scalar::new(re, im);
            if rest.eval(&cand).is_zero() {
                found = Some(cand);
                break;
            }
        }
        let Some(root) = found else {
            return Err(DsError::EigenvaluesOutsideField);
        };
        let linear = Poly::new(vec![-&root, Scalar::one()]);
        rest = rest.div_rem(&linear).0;
        roots.push(root);
    }
    Ok(roots)
}
