//! Standard parahorics of `GL_n` via lattice chains, their filtrations,
//! leading strata and slope certification.

use num_rational::Rational64;
use serde::Serialize;

use crate::algebra::LaurentMatrix;
use crate::error::{DsError, Result};

/// The stabilizer of the chain `L^0 ⊃ L^1 ⊃ ... ⊃ L^e = z L^0` where `L^j`
/// has basis `{z e_i : i > n - k_j} ∪ {e_i : i <= n - k_j}` and
/// `J = {k_0 = 0 < k_1 < ... < k_{e-1}}`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct StandardParahoric {
    n: usize,
    ks: Vec<usize>,
}

impl StandardParahoric {
    pub fn new(n: usize, mut ks: Vec<usize>) -> Result<Self> {
        ks.sort_unstable();
        ks.dedup();
        if n == 0 || ks.first() != Some(&0) {
            return Err(DsError::invalid("J must contain 0"));
        }
        if ks.iter().any(|&k| k >= n) {
            return Err(DsError::invalid(format!("elements of J must be < n = {n}")));
        }
        Ok(StandardParahoric { n, ks })
    }

    /// `GL_n(o)`, i.e. `J = {0}`.
    pub fn maximal(n: usize) -> Self {
        StandardParahoric { n, ks: vec![0] }
    }

    /// The Iwahori subgroup, `J = Z/nZ`.
    pub fn iwahori(n: usize) -> Self {
        StandardParahoric {
            n,
            ks: (0..n).collect(),
        }
    }

    /// All `2^(n-1)` standard parahorics, `J` in lexicographic order.
    pub fn all(n: usize) -> Vec<StandardParahoric> {
        let mut out: Vec<StandardParahoric> = (0u64..1 << (n - 1))
            .map(|mask| {
                let mut ks = vec![0];
                ks.extend((1..n).filter(|k| mask >> (k - 1) & 1 == 1));
                StandardParahoric { n, ks }
            })
            .collect();
        out.sort_by(|a, b| a.ks.cmp(&b.ks));
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn j_set(&self) -> &[usize] {
        &self.ks
    }

    /// Period `e = |J|`.
    pub fn period(&self) -> usize {
        self.ks.len()
    }

    /// Block sizes `k_j - k_{j-1}`, with `k_e = n`.
    pub fn block_sizes(&self) -> Vec<usize> {
        let mut bounds = self.ks.clone();
        bounds.push(self.n);
        bounds.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// `z^m e_c ∈ L^t` (`c` 1-based).
    pub fn lattice_contains(&self, t: i64, m: i64, c: usize) -> bool {
        let e = self.period() as i64;
        let (q, j) = (t.div_euclid(e), t.rem_euclid(e) as usize);
        m - q >= 1 || (m == q && c <= self.n - self.ks[j])
    }

    /// Largest `t` with `z^m e_c ∈ L^t`.
    fn lattice_level(&self, m: i64, c: usize) -> i64 {
        let e = self.period() as i64;
        let mut t = (m + 1) * e;
        while !self.lattice_contains(t, m, c) {
            t -= 1;
        }
        t
    }

    /// `max{j : k_j <= n - c}` for 1-based `c`.
    fn level(&self, c: usize) -> i64 {
        self.ks.iter().rposition(|&k| k + c <= self.n).expect("k_0 = 0") as i64
    }

    /// Largest `s` with `E_ab z^k L^i ⊂ L^(i+s)` for all `i`, found by
    /// pushing each basis vector of one period of the chain through the
    /// monomial (`a`, `b` 0-based).
    pub fn filtration_degree_by_definition(&self, a: usize, b: usize, k: i64) -> i64 {
        let e = self.period() as i64;
        let (a1, b1) = (a + 1, b + 1);
        (0..e)
            .map(|i| {
                let shift = i64::from(b1 > self.n - self.ks[i as usize]);
                self.lattice_level(shift + k, a1) - i
            })
            .min()
            .expect("period is positive")
    }

    /// Closed form `k e + lvl(a) - lvl(b)` (`a`, `b` 0-based).
    pub fn filtration_degree(&self, a: usize, b: usize, k: i64) -> i64 {
        k * self.period() as i64 + self.level(a + 1) - self.level(b + 1)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Stratum {
    pub parahoric: StandardParahoric,
    /// Depth numerator `r`; the depth is `r / e`.
    pub r: i64,
    /// Homogeneous leading part, of filtration degree `-r`.
    #[serde(skip)]
    pub leading: LaurentMatrix,
}

impl Stratum {
    pub fn depth(&self) -> Rational64 {
        Rational64::new(self.r, self.parahoric.period() as i64)
    }

    /// The leading part is not nilpotent. It is homogeneous for a grading
    /// in which different powers of `z` in one entry have different degrees,
    /// so substituting `z = 1` is injective on homogeneous elements and
    /// commutes with products.
    pub fn is_fundamental(&self) -> bool {
        !self.leading.eval_at_one().pow(self.parahoric.n() as u32).is_zero()
    }
}

/// Leading stratum of `d + M dz/z` with respect to `p`.
pub fn leading_stratum(p: &StandardParahoric, m: &LaurentMatrix) -> Result<Stratum> {
    if m.n() != p.n() {
        return Err(DsError::invalid("matrix size does not match the parahoric"));
    }
    if m.is_known_zero() {
        return Err(DsError::precondition("zero connection matrix has no leading stratum"));
    }
    let n = m.n();
    let mut monomials = Vec::new();
    for (k, c) in m.terms() {
        for a in 0..n {
            for b in 0..n {
                if !c[(a, b)].is_zero() {
                    monomials.push((p.filtration_degree(a, b, k), a, b, k));
                }
            }
        }
    }
    let min_deg = monomials.iter().map(|t| t.0).min().expect("nonzero matrix");
    if let Some(t) = m.trunc() {
        // unknown monomials sit in degree >= t e - (e - 1)
        let e = p.period() as i64;
        if min_deg > t * e - e {
            let need = (min_deg + e).div_euclid(e) + i64::from((min_deg + e).rem_euclid(e) != 0);
            return Err(DsError::InsufficientTruncation { need, have: t });
        }
    }
    let mut leading = LaurentMatrix::zero(n);
    for &(deg, a, b, k) in &monomials {
        if deg == min_deg {
            let coeff = m.coeff(k).expect("known term")[(a, b)].clone();
            leading = leading.add(&LaurentMatrix::monomial(n, a, b, k, coeff));
        }
    }
    Ok(Stratum {
        parahoric: p.clone(),
        r: -min_deg,
        leading,
    })
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SlopeCertificate {
    /// A fundamental stratum of this depth exists, so this is the slope.
    CertifiedSlope { slope: Rational64, j_set: Vec<usize> },
    /// Every leading stratum in this trivialization is nilpotent; the slope
    /// is at most this value.
    UpperBoundOnly { bound: Rational64, j_set: Vec<usize> },
    /// Some parahoric sees no pole (or `M = 0`); not claimed to be proved.
    RegularSingularCandidate,
}

/// Scans every standard parahoric in the given trivialization.
pub fn certify_slope(m: &LaurentMatrix) -> Result<SlopeCertificate> {
    if m.is_known_zero() || m.min_degree().is_some_and(|d| d >= 0) {
        return Ok(SlopeCertificate::RegularSingularCandidate);
    }
    let mut best_fund: Option<(Rational64, Vec<usize>)> = None;
    let mut best_any: Option<(Rational64, Vec<usize>)> = None;
    for p in StandardParahoric::all(m.n()) {
        let s = leading_stratum(&p, m)?;
        if s.r <= 0 {
            return Ok(SlopeCertificate::RegularSingularCandidate);
        }
        let d = s.depth();
        let better = |cur: &Option<(Rational64, Vec<usize>)>| cur.as_ref().is_none_or(|c| d < c.0);
        if better(&best_any) {
            best_any = Some((d, p.j_set().to_vec()));
        }
        if s.is_fundamental() && better(&best_fund) {
            best_fund = Some((d, p.j_set().to_vec()));
        }
    }
    Ok(match (best_fund, best_any) {
        (Some((slope, j_set)), _) => SlopeCertificate::CertifiedSlope { slope, j_set },
        (None, Some((bound, j_set))) => SlopeCertificate::UpperBoundOnly { bound, j_set },
        (None, None) => unreachable!("at least one parahoric is scanned"),
    })
}
