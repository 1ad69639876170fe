//! Adjoint orbits in `gl_n` described by Jordan data.

use serde::{Deserialize, Serialize};

use super::matrix::Matrix;
use super::partition::Partition;
use super::scalar::Scalar;
use crate::error::{DsError, Result};

/// One eigenvalue with its Jordan block sizes.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct EigenBlock {
    pub eig: Scalar,
    pub partition: Partition,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
struct OrbitSpecRaw {
    n: usize,
    blocks: Vec<EigenBlock>,
}

/// An adjoint orbit: distinct eigenvalues, each with a Jordan-type partition.
///
/// Block order is preserved as given; it only matters as a tie-break when
/// choosing a default factor sequence.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "OrbitSpecRaw", into = "OrbitSpecRaw")]
pub struct OrbitSpec {
    n: usize,
    blocks: Vec<EigenBlock>,
}

impl TryFrom<OrbitSpecRaw> for OrbitSpec {
    type Error = DsError;
    fn try_from(raw: OrbitSpecRaw) -> Result<Self> {
        OrbitSpec::new(raw.n, raw.blocks.into_iter().map(|b| (b.eig, b.partition)).collect())
    }
}

impl From<OrbitSpec> for OrbitSpecRaw {
    fn from(o: OrbitSpec) -> Self {
        OrbitSpecRaw {
            n: o.n,
            blocks: o.blocks,
        }
    }
}

impl OrbitSpec {
    pub fn new(n: usize, blocks: Vec<(Scalar, Partition)>) -> Result<Self> {
        for (i, (e, p)) in blocks.iter().enumerate() {
            if p.is_empty() {
                return Err(DsError::invalid(format!("eigenvalue {e} has an empty partition")));
            }
            if blocks[..i].iter().any(|(f, _)| f == e) {
                return Err(DsError::invalid(format!("eigenvalue {e} listed twice")));
            }
        }
        let total: usize = blocks.iter().map(|(_, p)| p.weight()).sum();
        if total != n {
            return Err(DsError::invalid(format!(
                "partition weights sum to {total}, expected n = {n}"
            )));
        }
        Ok(OrbitSpec {
            n,
            blocks: blocks
                .into_iter()
                .map(|(eig, partition)| EigenBlock { eig, partition })
                .collect(),
        })
    }

    /// Nilpotent orbit with the given Jordan type.
    pub fn nilpotent(p: Partition) -> Self {
        let n = p.weight();
        OrbitSpec::new(n, vec![(Scalar::zero(), p)]).expect("single eigenvalue")
    }

    /// Semisimple orbit with pairwise distinct eigenvalues.
    pub fn regular_semisimple(eigs: &[Scalar]) -> Result<Self> {
        OrbitSpec::new(
            eigs.len(),
            eigs.iter().map(|e| (e.clone(), Partition::column(1))).collect(),
        )
    }

    /// The scalar orbit `{cI}`.
    pub fn scalar(n: usize, c: Scalar) -> Self {
        OrbitSpec::new(n, vec![(c, Partition::column(n))]).expect("single eigenvalue")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[EigenBlock] {
        &self.blocks
    }

    pub fn eigenvalues(&self) -> impl Iterator<Item = &Scalar> {
        self.blocks.iter().map(|b| &b.eig)
    }

    pub fn partition_of(&self, eig: &Scalar) -> Option<&Partition> {
        self.blocks.iter().find(|b| &b.eig == eig).map(|b| &b.partition)
    }

    pub fn is_scalar(&self) -> bool {
        self.blocks.len() == 1 && self.blocks[0].partition.largest() == 1
    }

    pub fn is_nilpotent(&self) -> bool {
        self.blocks.iter().all(|b| b.eig.is_zero())
    }

    pub fn trace(&self) -> Scalar {
        self.blocks
            .iter()
            .map(|b| b.eig.scale_int(b.partition.weight() as i64))
            .sum()
    }

    pub fn det(&self) -> Scalar {
        self.blocks.iter().fold(Scalar::one(), |acc, b| {
            acc * b.eig.pow(b.partition.weight() as u32)
        })
    }

    /// Degree of the minimal polynomial.
    pub fn min_poly_degree(&self) -> usize {
        self.blocks.iter().map(|b| b.partition.largest()).sum()
    }

    /// `n^2 - sum_eta sum_i (dual(mu_eta)_i)^2`.
    pub fn dim(&self) -> usize {
        self.n * self.n
            - self
                .blocks
                .iter()
                .map(|b| b.partition.centralizer_dim())
                .sum::<usize>()
    }

    /// Errors if two eigenvalues differ by a nonzero integer.
    pub fn check_nonresonant(&self) -> Result<()> {
        for (i, a) in self.blocks.iter().enumerate() {
            for b in &self.blocks[i + 1..] {
                if a.eig.differs_by_nonzero_integer(&b.eig) {
                    return Err(DsError::Resonant(a.eig.to_string(), b.eig.to_string()));
                }
            }
        }
        Ok(())
    }

    pub fn is_nonresonant(&self) -> bool {
        self.check_nonresonant().is_ok()
    }

    /// Negated orbit `-O`.
    pub fn negated(&self) -> OrbitSpec {
        OrbitSpec {
            n: self.n,
            blocks: self
                .blocks
                .iter()
                .map(|b| EigenBlock {
                    eig: -&b.eig,
                    partition: b.partition.clone(),
                })
                .collect(),
        }
    }

    /// Same orbit regardless of eigenvalue listing order.
    pub fn same_orbit(&self, other: &OrbitSpec) -> bool {
        self.n == other.n
            && self.blocks.len() == other.blocks.len()
            && self
                .blocks
                .iter()
                .all(|b| other.partition_of(&b.eig) == Some(&b.partition))
    }

    /// Round-robin over the distinct eigenvalues, ordered by decreasing
    /// largest Jordan block (ties keep input order). Each eigenvalue appears
    /// as often as its largest block.
    pub fn default_factor_sequence(&self) -> Vec<Scalar> {
        let mut order: Vec<&EigenBlock> = self.blocks.iter().collect();
        order.sort_by_key(|b| std::cmp::Reverse(b.partition.largest()));
        let mut remaining: Vec<usize> = order.iter().map(|b| b.partition.largest()).collect();
        let mut seq = Vec::with_capacity(self.min_poly_degree());
        while remaining.iter().any(|&r| r > 0) {
            for (b, r) in order.iter().zip(remaining.iter_mut()) {
                if *r > 0 {
                    seq.push(b.eig.clone());
                    *r -= 1;
                }
            }
        }
        seq
    }

    /// Checks that `seq` lists every eigenvalue exactly (largest block) times.
    pub fn validate_factor_sequence(&self, seq: &[Scalar]) -> Result<()> {
        for x in seq {
            if self.partition_of(x).is_none() {
                return Err(DsError::invalid(format!(
                    "factor {x} is not an eigenvalue of the orbit"
                )));
            }
        }
        for b in &self.blocks {
            let count = seq.iter().filter(|x| **x == b.eig).count();
            if count != b.partition.largest() {
                return Err(DsError::invalid(format!(
                    "eigenvalue {} appears {count} times in the factor sequence, expected {}",
                    b.eig,
                    b.partition.largest()
                )));
            }
        }
        Ok(())
    }

    /// Rank of `prod_{l <= j} (C - seq_l)` for any `C` in the orbit.
    pub fn rank_after_factors(&self, seq: &[Scalar], j: usize) -> Result<usize> {
        self.validate_factor_sequence(seq)?;
        if j > seq.len() {
            return Err(DsError::invalid(format!(
                "j = {j} exceeds the factor sequence length {}",
                seq.len()
            )));
        }
        let prefix = &seq[..j];
        Ok(self
            .blocks
            .iter()
            .map(|b| {
                let t = prefix.iter().filter(|x| **x == b.eig).count();
                b.partition
                    .parts()
                    .iter()
                    .map(|&mu| mu.saturating_sub(t))
                    .sum::<usize>()
            })
            .sum())
    }

    /// Jordan normal form representative (upper-triangular blocks).
    pub fn jordan_matrix(&self) -> Matrix {
        let mut m = Matrix::zeros(self.n, self.n);
        let mut pos = 0;
        for b in &self.blocks {
            for &size in b.partition.parts() {
                for k in 0..size {
                    m[(pos + k, pos + k)] = b.eig.clone();
                    if k + 1 < size {
                        m[(pos + k, pos + k + 1)] = Scalar::one();
                    }
                }
                pos += size;
            }
        }
        m
    }
}
