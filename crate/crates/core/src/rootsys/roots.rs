//! Generalized Cartan matrices of quivers and their root systems.

use num_rational::Rational64;

use super::quiver::Quiver;
use crate::algebra::Scalar;
use crate::error::{DsError, Result};

/// How arrows between distinct vertices enter the off-diagonal entries.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum EdgeCounting {
    /// `C_ij = -(#arrows between i and j in either direction)`; symmetric.
    #[default]
    Undirected,
    /// `C_ij = -(#arrows i -> j)`. Not symmetric in general; kept only to
    /// check how sensitive a verdict is to the counting convention.
    Directed,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize)]
pub enum RootClass {
    RealRoot,
    ImaginaryRoot,
    NotRoot,
}

impl RootClass {
    pub fn is_root(self) -> bool {
        self != RootClass::NotRoot
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CartanMatrix {
    entries: Vec<Vec<i64>>,
}

impl CartanMatrix {
    pub fn from_quiver(q: &Quiver, counting: EdgeCounting) -> Result<Self> {
        let n = q.num_vertices();
        let mut entries = vec![vec![0i64; n]; n];
        for (i, row) in entries.iter_mut().enumerate() {
            row[i] = 2;
        }
        for &(t, h) in q.arrows() {
            if t == h {
                return Err(DsError::QuiverLoop(q.vertices()[t].clone()));
            }
            entries[t][h] -= 1;
            if counting == EdgeCounting::Undirected {
                entries[h][t] -= 1;
            }
        }
        Ok(CartanMatrix { entries })
    }

    /// From explicit entries; checks the diagonal is 2 and off-diagonal entries are <= 0.
    pub fn from_entries(entries: Vec<Vec<i64>>) -> Result<Self> {
        let n = entries.len();
        for (i, row) in entries.iter().enumerate() {
            if row.len() != n {
                return Err(DsError::invalid("Cartan matrix is not square"));
            }
            for (j, &c) in row.iter().enumerate() {
                if (i == j && c != 2) || (i != j && c > 0) {
                    return Err(DsError::invalid(format!("bad Cartan entry ({i},{j}) = {c}")));
                }
            }
        }
        Ok(CartanMatrix { entries })
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| (0..i).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    fn check_len(&self, beta: &[i64]) {
        assert_eq!(beta.len(), self.size(), "vector length does not match the Cartan matrix");
    }

    /// `beta^t C e_i`.
    pub fn pairing(&self, beta: &[i64], i: usize) -> i64 {
        beta.iter().zip(&self.entries).map(|(b, row)| b * row[i]).sum()
    }

    /// `beta^t C gamma`.
    pub fn form(&self, beta: &[i64], gamma: &[i64]) -> i64 {
        self.check_len(beta);
        self.check_len(gamma);
        (0..self.size()).map(|i| beta[i] * self.row_dot(i, gamma)).sum()
    }

    fn row_dot(&self, i: usize, gamma: &[i64]) -> i64 {
        self.entries[i].iter().zip(gamma).map(|(c, g)| c * g).sum()
    }

    /// `2 p(beta) = 2 - beta^t C beta`.
    pub fn twice_p(&self, beta: &[i64]) -> i64 {
        2 - self.form(beta, beta)
    }

    /// `p(beta) = 1 - beta^t C beta / 2`.
    pub fn p_value(&self, beta: &[i64]) -> Rational64 {
        Rational64::new(self.twice_p(beta), 2)
    }

    /// Simple reflection `s_i(beta) = beta - (beta^t C e_i) e_i`.
    pub fn reflect(&self, i: usize, beta: &[i64]) -> Vec<i64> {
        self.check_len(beta);
        let mut out = beta.to_vec();
        out[i] -= self.pairing(beta, i);
        out
    }

    /// Whether the support of `beta` is connected in the graph with an edge
    /// wherever `C_ij` or `C_ji` is nonzero.
    pub fn support_connected(&self, beta: &[i64]) -> bool {
        let support: Vec<usize> = (0..beta.len()).filter(|&i| beta[i] != 0).collect();
        let Some(&start) = support.first() else {
            return false;
        };
        let mut seen = vec![false; beta.len()];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &w in &support {
                if !seen[w] && (self.entries[v][w] != 0 || self.entries[w][v] != 0) {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        support.iter().all(|&v| seen[v])
    }

    /// Kac descent: reflect while some pairing is positive, which strictly
    /// lowers the height. A simple root reached on the way means real; the
    /// fundamental region (all pairings <= 0, connected support) means
    /// imaginary.
    pub fn classify_root(&self, beta: &[i64]) -> Result<RootClass> {
        self.check_len(beta);
        if beta.iter().all(|&b| b == 0) {
            return Err(DsError::precondition("cannot classify the zero vector"));
        }
        let pos = beta.iter().any(|&b| b > 0);
        let neg = beta.iter().any(|&b| b < 0);
        if pos && neg {
            return Ok(RootClass::NotRoot);
        }
        let mut cur: Vec<i64> = beta.iter().map(|b| b.abs()).collect();
        let bound = 4 * cur.iter().sum::<i64>() as usize;
        for _ in 0..=bound {
            if cur.iter().sum::<i64>() == 1 {
                return Ok(RootClass::RealRoot);
            }
            if !self.support_connected(&cur) {
                return Ok(RootClass::NotRoot);
            }
            match (0..self.size()).find(|&i| cur[i] > 0 && self.pairing(&cur, i) > 0) {
                None => return Ok(RootClass::ImaginaryRoot),
                Some(i) => {
                    cur = self.reflect(i, &cur);
                    if cur[i] < 0 {
                        return Ok(RootClass::NotRoot);
                    }
                }
            }
        }
        Err(DsError::HeightBoundExceeded(bound))
    }

    /// All positive roots `beta <= alpha` componentwise, in lexicographic
    /// order. `budget` caps the number of candidate vectors examined.
    pub fn positive_roots_leq(&self, alpha: &[i64], budget: usize) -> Result<Vec<Vec<i64>>> {
        self.check_len(alpha);
        if alpha.iter().any(|&a| a < 0) {
            return Err(DsError::precondition("dimension vector has a negative entry"));
        }
        let total: u128 = alpha.iter().map(|&a| a as u128 + 1).product();
        if total > budget as u128 {
            return Err(DsError::BudgetExceeded(budget));
        }
        let mut out = Vec::new();
        let mut cur = vec![0i64; alpha.len()];
        loop {
            if cur.iter().any(|&c| c != 0) && self.classify_root(&cur)?.is_root() {
                out.push(cur.clone());
            }
            // odometer increment, last coordinate fastest
            let mut k = alpha.len();
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                if cur[k] < alpha[k] {
                    cur[k] += 1;
                    break;
                }
                cur[k] = 0;
            }
        }
    }
}

/// `beta . lambda = sum_i beta_i lambda_i`.
pub fn pair_with_lambda(beta: &[i64], lambda: &[Scalar]) -> Scalar {
    assert_eq!(beta.len(), lambda.len(), "vector length does not match lambda");
    beta.iter()
        .zip(lambda)
        .filter(|(b, _)| **b != 0)
        .map(|(b, l)| l.scale_int(*b))
        .sum()
}
