//! Truncated Laurent-series matrices `sum_k M_k z^k`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::matrix::Matrix;
use super::scalar::Scalar;
use crate::error::{DsError, Result};

/// A matrix of Laurent series with finitely many negative powers.
///
/// `trunc = Some(N)` means every coefficient of degree `>= N` is unknown;
/// `None` means the stored terms are the whole (finite) expansion.
/// Zero coefficient matrices are never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentMatrix {
    n: usize,
    terms: BTreeMap<i64, Matrix>,
    trunc: Option<i64>,
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl LaurentMatrix {
    pub fn zero(n: usize) -> Self {
        LaurentMatrix {
            n,
            terms: BTreeMap::new(),
            trunc: None,
        }
    }

    pub fn identity(n: usize) -> Self {
        LaurentMatrix::constant(Matrix::identity(n))
    }

    pub fn constant(m: Matrix) -> Self {
        let mut out = LaurentMatrix::zero(m.rows());
        out.set_term(0, m);
        out
    }

    /// `c * E_{ab} z^k` (0-based indices).
    pub fn monomial(n: usize, a: usize, b: usize, k: i64, c: Scalar) -> Self {
        let mut m = Matrix::zeros(n, n);
        m[(a, b)] = c;
        let mut out = LaurentMatrix::zero(n);
        out.set_term(k, m);
        out
    }

    pub fn from_terms(n: usize, terms: Vec<(i64, Matrix)>, trunc: Option<i64>) -> Result<Self> {
        let mut out = LaurentMatrix {
            n,
            terms: BTreeMap::new(),
            trunc,
        };
        for (deg, m) in terms {
            if m.rows() != n || m.cols() != n {
                return Err(DsError::invalid(format!(
                    "term of degree {deg} is {}x{}, expected {n}x{n}",
                    m.rows(),
                    m.cols()
                )));
            }
            if let Some(t) = trunc {
                if deg >= t {
                    return Err(DsError::invalid(format!(
                        "term of degree {deg} is at or beyond the truncation order {t}"
                    )));
                }
            }
            if out.terms.contains_key(&deg) {
                return Err(DsError::invalid(format!("degree {deg} listed twice")));
            }
            out.set_term(deg, m);
        }
        Ok(out)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn trunc(&self) -> Option<i64> {
        self.trunc
    }

    pub fn with_trunc(mut self, trunc: Option<i64>) -> Self {
        self.trunc = min_opt(self.trunc, trunc);
        if let Some(t) = self.trunc {
            self.terms.retain(|&d, _| d < t);
        }
        self
    }

    fn set_term(&mut self, deg: i64, m: Matrix) {
        if m.is_zero() {
            self.terms.remove(&deg);
        } else {
            self.terms.insert(deg, m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Matrix)> {
        self.terms.iter().map(|(d, m)| (*d, m))
    }

    /// Coefficient of `z^deg`; `None` when `deg` is beyond the truncation.
    pub fn coeff(&self, deg: i64) -> Option<Matrix> {
        if self.trunc.is_some_and(|t| deg >= t) {
            return None;
        }
        Some(
            self.terms
                .get(&deg)
                .cloned()
                .unwrap_or_else(|| Matrix::zeros(self.n, self.n)),
        )
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Lowest degree that may carry a nonzero coefficient.
    fn valuation(&self) -> Option<i64> {
        min_opt(self.min_degree(), self.trunc)
    }

    /// No known nonzero term (says nothing about degrees beyond `trunc`).
    pub fn is_known_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Scalar) -> LaurentMatrix {
        let mut out = LaurentMatrix::zero(self.n);
        out.trunc = self.trunc;
        for (d, m) in &self.terms {
            out.set_term(*d, m.scale(c));
        }
        out
    }

    /// Multiplies by `z^k`.
    pub fn shift(&self, k: i64) -> LaurentMatrix {
        LaurentMatrix {
            n: self.n,
            terms: self.terms.iter().map(|(d, m)| (d + k, m.clone())).collect(),
            trunc: self.trunc.map(|t| t + k),
        }
    }

    /// `z d/dz`, i.e. `M_k -> k M_k`.
    pub fn euler_derivative(&self) -> LaurentMatrix {
        let mut out = LaurentMatrix::zero(self.n);
        out.trunc = self.trunc;
        for (d, m) in &self.terms {
            out.set_term(*d, m.scale(&Scalar::from_int(*d)));
        }
        out
    }

    pub fn add(&self, rhs: &LaurentMatrix) -> LaurentMatrix {
        assert_eq!(self.n, rhs.n);
        let trunc = min_opt(self.trunc, rhs.trunc);
        let mut out = LaurentMatrix {
            n: self.n,
            terms: BTreeMap::new(),
            trunc,
        };
        let degs: std::collections::BTreeSet<i64> =
            self.terms.keys().chain(rhs.terms.keys()).copied().collect();
        for d in degs {
            if trunc.is_some_and(|t| d >= t) {
                continue;
            }
            let m = match (self.terms.get(&d), rhs.terms.get(&d)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            };
            out.set_term(d, m);
        }
        out
    }

    pub fn sub(&self, rhs: &LaurentMatrix) -> LaurentMatrix {
        self.add(&rhs.scale(&Scalar::from_int(-1)))
    }

    pub fn mul(&self, rhs: &LaurentMatrix) -> LaurentMatrix {
        assert_eq!(self.n, rhs.n);
        let trunc = match (self.valuation(), rhs.valuation()) {
            // one factor is exactly zero
            (None, _) | (_, None) => None,
            (Some(va), Some(vb)) => {
                min_opt(self.trunc.map(|t| t + vb), rhs.trunc.map(|t| t + va))
            }
        };
        let mut acc: BTreeMap<i64, Matrix> = BTreeMap::new();
        for (da, a) in &self.terms {
            for (db, b) in &rhs.terms {
                let d = da + db;
                if trunc.is_some_and(|t| d >= t) {
                    continue;
                }
                let p = a * b;
                match acc.get_mut(&d) {
                    Some(m) => *m = &*m + &p,
                    None => {
                        acc.insert(d, p);
                    }
                }
            }
        }
        let mut out = LaurentMatrix {
            n: self.n,
            terms: BTreeMap::new(),
            trunc,
        };
        for (d, m) in acc {
            out.set_term(d, m);
        }
        out
    }

    pub fn pow(&self, e: u32) -> LaurentMatrix {
        let mut result = LaurentMatrix::identity(self.n);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Substitutes `z = 1`; only meaningful for exact (untruncated) input.
    pub fn eval_at_one(&self) -> Matrix {
        self.terms
            .values()
            .fold(Matrix::zeros(self.n, self.n), |acc, m| &acc + m)
    }

    /// Equality of all coefficients below `order` (both must be known there).
    pub fn agrees_below(&self, other: &LaurentMatrix, order: i64) -> bool {
        let lo = self
            .min_degree()
            .into_iter()
            .chain(other.min_degree())
            .min()
            .unwrap_or(order);
        (lo..order).all(|d| match (self.coeff(d), other.coeff(d)) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    deg: i64,
    entries: Vec<Vec<Scalar>>,
}

#[derive(Serialize, Deserialize)]
struct LaurentJson {
    n: usize,
    #[serde(default)]
    trunc: Option<i64>,
    terms: Vec<TermJson>,
}

impl Serialize for LaurentMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LaurentJson {
            n: self.n,
            trunc: self.trunc,
            terms: self
                .terms
                .iter()
                .map(|(d, m)| TermJson {
                    deg: *d,
                    entries: m.to_rows(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let raw = LaurentJson::deserialize(d)?;
        let mut terms = Vec::with_capacity(raw.terms.len());
        for t in raw.terms {
            let m = Matrix::from_rows(t.entries).map_err(D::Error::custom)?;
            terms.push((t.deg, m));
        }
        LaurentMatrix::from_terms(raw.n, terms, raw.trunc).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_truncation_tracks_unknown_degrees() {
        // a = I + O(z^3), b = z^{-1} E12 + O(z^2)
        let a = LaurentMatrix::identity(2).with_trunc(Some(3));
        let b = LaurentMatrix::monomial(2, 0, 1, -1, Scalar::one()).with_trunc(Some(2));
        let p = a.mul(&b);
        assert_eq!(p.trunc(), Some(2));
        assert_eq!(p.coeff(-1).unwrap(), Matrix::unit(2, 0, 1));
        assert!(p.coeff(2).is_none());
    }

    #[test]
    fn exact_powers() {
        // (E12 z^{-1} + E21)^2 = z^{-1} I
        let x = LaurentMatrix::monomial(2, 0, 1, -1, Scalar::one())
            .add(&LaurentMatrix::monomial(2, 1, 0, 0, Scalar::one()));
        let sq = x.pow(2);
        assert_eq!(sq, LaurentMatrix::identity(2).shift(-1));
        assert_eq!(sq.trunc(), None);
    }

    #[test]
    fn rejects_terms_beyond_truncation() {
        let r = LaurentMatrix::from_terms(1, vec![(2, Matrix::identity(1))], Some(2));
        assert!(r.is_err());
    }

    #[test]
    fn json_roundtrip() {
        let txt = r#"{"n":2,"trunc":3,"terms":[{"deg":-1,"entries":[[[0,1,0,1],[1,1,0,1]],[[0,1,0,1],[0,1,0,1]]]}]}"#;
        let m: LaurentMatrix = serde_json::from_str(txt).unwrap();
        assert_eq!(m.min_degree(), Some(-1));
        assert_eq!(serde_json::to_string(&m).unwrap(), txt);
    }
}
