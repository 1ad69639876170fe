//! Crawley-Boevey's quiver data for tuples of adjoint orbits, and the
//! resulting existence and rigidity decisions for Fuchsian connections.

use serde::Serialize;

use crate::algebra::{OrbitSpec, Scalar};
use crate::error::{DsError, Result};
use crate::rootsys::{
    pair_with_lambda, sigma_lambda_report, CartanMatrix, EdgeCounting, Quiver, RootClass,
    SigmaReport,
};

/// Star-shaped quiver with dimension and deformation vectors.
#[derive(Clone, Debug)]
pub struct CbData {
    pub quiver: Quiver,
    pub alpha: Vec<i64>,
    pub lambda: Vec<Scalar>,
    pub factor_seqs: Vec<Vec<Scalar>>,
}

impl CbData {
    pub fn cartan(&self) -> CartanMatrix {
        CartanMatrix::from_quiver(&self.quiver, EdgeCounting::Undirected)
            .expect("star quivers are loop-free")
    }

    pub fn vertex_labels(&self) -> Vec<String> {
        vertex_labels(&self.alpha, &self.lambda)
    }

    pub fn to_dot(&self) -> String {
        self.quiver.to_dot("Q", Some(&self.vertex_labels()))
    }
}

pub(crate) fn vertex_labels(alpha: &[i64], lambda: &[Scalar]) -> Vec<String> {
    alpha
        .iter()
        .zip(lambda)
        .map(|(a, l)| format!("alpha={a} lambda={l}"))
        .collect()
}

/// Builds `(Q, alpha, lambda)`.
///
/// The sink is `"0"`; orbit `i` (1-based) contributes the arm
/// `[i,d_i-1] -> ... -> [i,1] -> 0`. `alpha_[i,j]` is the rank of
/// `prod_{l<=j} (C_i - eta_il)`, which makes `alpha . lambda = -sum Tr`.
pub fn build_cb_data(orbits: &[OrbitSpec], seqs: Option<&[Vec<Scalar>]>) -> Result<CbData> {
    let Some(first) = orbits.first() else {
        return Err(DsError::invalid("at least one orbit is required"));
    };
    let n = first.n();
    for (i, o) in orbits.iter().enumerate() {
        if o.n() != n {
            return Err(DsError::invalid(format!(
                "orbit {} has size {}, expected {n}",
                i + 1,
                o.n()
            )));
        }
        o.check_nonresonant()?;
    }
    let factor_seqs: Vec<Vec<Scalar>> = match seqs {
        Some(s) => {
            if s.len() != orbits.len() {
                return Err(DsError::invalid(format!(
                    "{} factor sequences given for {} orbits",
                    s.len(),
                    orbits.len()
                )));
            }
            for (o, seq) in orbits.iter().zip(s) {
                o.validate_factor_sequence(seq)?;
            }
            s.to_vec()
        }
        None => orbits.iter().map(|o| o.default_factor_sequence()).collect(),
    };

    let mut quiver = Quiver::new();
    let sink = quiver.add_vertex("0")?;
    let mut alpha = vec![n as i64];
    let mut lambda = vec![-factor_seqs.iter().map(|s| s[0].clone()).sum::<Scalar>()];
    for (i, (o, seq)) in orbits.iter().zip(&factor_seqs).enumerate() {
        let mut prev = sink;
        for j in 1..seq.len() {
            let v = quiver.add_vertex(format!("[{},{}]", i + 1, j))?;
            quiver.add_arrow(v, prev)?;
            alpha.push(o.rank_after_factors(seq, j)? as i64);
            lambda.push(&seq[j - 1] - &seq[j]);
            prev = v;
        }
    }
    let data = CbData {
        quiver,
        alpha,
        lambda,
        factor_seqs,
    };
    let trace_sum: Scalar = orbits.iter().map(|o| o.trace()).sum();
    debug_assert_eq!(pair_with_lambda(&data.alpha, &data.lambda), -trace_sum);
    Ok(data)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Rigidity {
    Empty,
    RigidSingleton,
    Infinite,
}

#[derive(Clone, Debug)]
pub struct FuchsianVerdict {
    pub exists: bool,
    pub rigidity: Rigidity,
    pub report: SigmaReport,
    pub data: CbData,
}

pub fn fuchsian_decide(
    orbits: &[OrbitSpec],
    seqs: Option<&[Vec<Scalar>]>,
    budget: usize,
) -> Result<FuchsianVerdict> {
    let data = build_cb_data(orbits, seqs)?;
    let report = sigma_lambda_report(&data.cartan(), &data.alpha, &data.lambda, budget)?;
    let rigidity = match (report.member, report.class) {
        (false, _) => Rigidity::Empty,
        (true, RootClass::RealRoot) => Rigidity::RigidSingleton,
        (true, RootClass::ImaginaryRoot) => Rigidity::Infinite,
        (true, RootClass::NotRoot) => unreachable!("members of Sigma are roots"),
    };
    Ok(FuchsianVerdict {
        exists: report.member,
        rigidity,
        report,
        data,
    })
}

pub fn fuchsian_ds_exists(orbits: &[OrbitSpec], budget: usize) -> Result<bool> {
    Ok(fuchsian_decide(orbits, None, budget)?.exists)
}

pub fn fuchsian_rigidity(orbits: &[OrbitSpec], budget: usize) -> Result<Rigidity> {
    Ok(fuchsian_decide(orbits, None, budget)?.rigidity)
}
