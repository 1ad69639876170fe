//! Unramified formal types, the associated quiver with base and path
//! vertices, the unramified existence test and the rank-2 point counts.

use serde::{Deserialize, Serialize};

use crate::algebra::{OrbitSpec, Scalar};
use crate::error::{DsError, Result};
use crate::fuchsian::vertex_labels;
use crate::rootsys::{
    lambda_roots, pair_with_lambda, CartanMatrix, DecompositionSearch, EdgeCounting, Quiver,
    RootClass,
};

/// One block `q_j(z) I + R_j` of an unramified formal type.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct UnramBlock {
    /// Coefficients of `z^-1, z^-2, ...`; trailing zeros are dropped.
    pub q: Vec<Scalar>,
    pub dim: usize,
    pub residue: OrbitSpec,
}

impl UnramBlock {
    pub fn new(mut q: Vec<Scalar>, residue: OrbitSpec) -> Self {
        while q.last().is_some_and(|c| c.is_zero()) {
            q.pop();
        }
        UnramBlock {
            q,
            dim: residue.n(),
            residue,
        }
    }

    /// Pole order of `q_j` in `z^-1`.
    pub fn degree(&self) -> usize {
        self.q.len()
    }
}

#[derive(Deserialize)]
struct UnramRaw {
    blocks: Vec<UnramBlock>,
}

/// `sum_j (q_j(z) I_{V_j} + R_j) dz/z` with pairwise distinct `q_j`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "UnramRaw")]
pub struct UnramFormalType {
    blocks: Vec<UnramBlock>,
}

impl TryFrom<UnramRaw> for UnramFormalType {
    type Error = DsError;
    fn try_from(raw: UnramRaw) -> Result<Self> {
        UnramFormalType::new(raw.blocks)
    }
}

/// `deg_{z^-1}(p - q)`.
fn degree_of_difference(p: &[Scalar], q: &[Scalar]) -> usize {
    let len = p.len().max(q.len());
    let zero = Scalar::zero();
    (0..len)
        .rev()
        .find(|&k| p.get(k).unwrap_or(&zero) != q.get(k).unwrap_or(&zero))
        .map_or(0, |k| k + 1)
}

impl UnramFormalType {
    pub fn new(blocks: Vec<UnramBlock>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(DsError::invalid("a formal type needs at least one block"));
        }
        let blocks: Vec<UnramBlock> = blocks
            .into_iter()
            .map(|b| {
                if b.dim != b.residue.n() {
                    return Err(DsError::invalid(format!(
                        "block of dimension {} carries a residue of size {}",
                        b.dim,
                        b.residue.n()
                    )));
                }
                Ok(UnramBlock::new(b.q, b.residue))
            })
            .collect::<Result<_>>()?;
        for (i, b) in blocks.iter().enumerate() {
            if blocks[..i].iter().any(|c| c.q == b.q) {
                return Err(DsError::invalid("exponential factors q_j must be pairwise distinct"));
            }
        }
        Ok(UnramFormalType { blocks })
    }

    /// A regular singular type `R dz/z`.
    pub fn regular(residue: OrbitSpec) -> Self {
        UnramFormalType {
            blocks: vec![UnramBlock::new(Vec::new(), residue)],
        }
    }

    pub fn blocks(&self) -> &[UnramBlock] {
        &self.blocks
    }

    pub fn n(&self) -> usize {
        self.blocks.iter().map(|b| b.dim).sum()
    }

    pub fn slope(&self) -> usize {
        self.blocks.iter().map(|b| b.degree()).max().unwrap_or(0)
    }

    pub fn is_regular(&self) -> bool {
        self.blocks.len() == 1 && self.blocks[0].q.is_empty()
    }

    /// Sum of the residue traces.
    pub fn residue_trace(&self) -> Scalar {
        self.blocks.iter().map(|b| b.residue.trace()).sum()
    }
}

/// The quiver on the blocks of one type: `deg(q_j - q_j') - 1` arrows
/// `j -> j'` for `j < j'`. Vertices are named `1..=l`.
pub fn build_base_quiver(d: &UnramFormalType) -> Quiver {
    let mut q = Quiver::new();
    for j in 1..=d.blocks.len() {
        q.add_vertex(j.to_string()).expect("fresh ids");
    }
    for (j, bj) in d.blocks.iter().enumerate() {
        for (jp, bjp) in d.blocks.iter().enumerate().skip(j + 1) {
            let m = degree_of_difference(&bj.q, &bjp.q).saturating_sub(1);
            q.add_arrows(j, jp, m).expect("distinct vertices");
        }
    }
    q
}

/// Which decompositions the decomposition condition quantifies over.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize)]
pub enum EllMode {
    /// `l > 2` parts.
    #[default]
    GreaterThanTwo,
    /// `l >= 2` parts.
    AtLeastTwo,
}

impl EllMode {
    fn min_parts(self) -> usize {
        match self {
            EllMode::GreaterThanTwo => 3,
            EllMode::AtLeastTwo => 2,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct UnramOptions {
    pub ell_mode: EllMode,
    pub counting: EdgeCounting,
    pub budget: usize,
    /// Accept input with no irregular type, using type 0 as the base. Off by
    /// default; on, an all-regular input reproduces the Fuchsian star.
    pub allow_regular_base: bool,
}

impl Default for UnramOptions {
    fn default() -> Self {
        UnramOptions {
            ell_mode: EllMode::default(),
            counting: EdgeCounting::default(),
            budget: crate::rootsys::DEFAULT_BUDGET,
            allow_regular_base: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct HiroeData {
    pub quiver: Quiver,
    pub base_vertices: Vec<usize>,
    pub path_vertices: Vec<usize>,
    pub alpha: Vec<i64>,
    pub lambda: Vec<Scalar>,
    /// Each pair `(A, B)` demands `sum_{v in A} beta_v = sum_{v in B} beta_v`.
    pub lattice: Vec<(Vec<usize>, Vec<usize>)>,
    /// Input index of the type placed at position `i`.
    pub type_order: Vec<usize>,
}

impl HiroeData {
    pub fn in_lattice(&self, beta: &[i64]) -> bool {
        self.lattice.iter().all(|(a, b)| {
            a.iter().map(|&v| beta[v]).sum::<i64>() == b.iter().map(|&v| beta[v]).sum::<i64>()
        })
    }

    pub fn vertex_labels(&self) -> Vec<String> {
        vertex_labels(&self.alpha, &self.lambda)
    }

    pub fn to_dot(&self) -> String {
        self.quiver.to_dot("Q", Some(&self.vertex_labels()))
    }
}

pub fn build_hiroe_data(types: &[UnramFormalType], opts: &UnramOptions) -> Result<HiroeData> {
    let Some(first) = types.first() else {
        return Err(DsError::invalid("at least one formal type is required"));
    };
    let n = first.n();
    for (i, t) in types.iter().enumerate() {
        if t.n() != n {
            return Err(DsError::invalid(format!(
                "type {} has rank {}, expected {n}",
                i + 1,
                t.n()
            )));
        }
        for b in &t.blocks {
            b.residue.check_nonresonant()?;
        }
    }
    let lead = match types.iter().position(|t| !t.is_regular()) {
        Some(i) => i,
        None if opts.allow_regular_base => 0,
        None => {
            return Err(DsError::precondition(
                "at least one formal type must be irregular",
            ))
        }
    };
    let mut type_order = vec![lead];
    type_order.extend((0..types.len()).filter(|&i| i != lead));
    let ordered: Vec<&UnramFormalType> = type_order.iter().map(|&i| &types[i]).collect();
    let is_base = |i: usize| i == 0 || ordered[i].blocks.len() >= 2;

    let mut quiver = Quiver::new();
    let mut alpha = Vec::new();
    let mut lambda = Vec::new();
    let mut base_vertices = Vec::new();
    let mut path_vertices = Vec::new();
    let mut base_ids: Vec<Vec<usize>> = vec![Vec::new(); ordered.len()];
    let seqs: Vec<Vec<Vec<Scalar>>> = ordered
        .iter()
        .map(|t| t.blocks.iter().map(|b| b.residue.default_factor_sequence()).collect())
        .collect();

    // base vertices and arrows inside each base type
    for (i, t) in ordered.iter().enumerate() {
        if !is_base(i) {
            continue;
        }
        for (j, b) in t.blocks.iter().enumerate() {
            let v = quiver.add_vertex(format!("[{},{}]", i, j + 1))?;
            base_ids[i].push(v);
            base_vertices.push(v);
            alpha.push(b.dim as i64);
            let mut l = -&seqs[i][j][0];
            if i == 0 {
                for (ip, tp) in ordered.iter().enumerate().skip(1) {
                    if tp.blocks.len() == 1 {
                        l -= &seqs[ip][0][0];
                    }
                }
            }
            lambda.push(l);
        }
        let inner = build_base_quiver(t);
        for &(a, b) in inner.arrows() {
            quiver.add_arrow(base_ids[i][a], base_ids[i][b])?;
        }
    }
    // arrows [0,j] -> [i,j'] between different base types
    for i in 1..ordered.len() {
        if !is_base(i) {
            continue;
        }
        for &a in &base_ids[0] {
            for &b in &base_ids[i] {
                quiver.add_arrow(a, b)?;
            }
        }
    }
    // one path per residue
    for (i, t) in ordered.iter().enumerate() {
        for (j, b) in t.blocks.iter().enumerate() {
            let seq = &seqs[i][j];
            let mut prev: Option<usize> = None;
            for k in 1..seq.len() {
                let v = quiver.add_vertex(format!("[{},{},{}]", i, j + 1, k))?;
                path_vertices.push(v);
                alpha.push(b.residue.rank_after_factors(seq, k)? as i64);
                lambda.push(&seq[k - 1] - &seq[k]);
                match prev {
                    Some(p) => quiver.add_arrow(v, p)?,
                    None if is_base(i) => quiver.add_arrow(v, base_ids[i][j])?,
                    None => {
                        for &w in &base_ids[0] {
                            quiver.add_arrow(v, w)?;
                        }
                    }
                }
                prev = Some(v);
            }
        }
    }
    let lattice = (1..ordered.len())
        .filter(|&i| ordered[i].blocks.len() >= 2)
        .map(|i| (base_ids[0].clone(), base_ids[i].clone()))
        .collect();
    let data = HiroeData {
        quiver,
        base_vertices,
        path_vertices,
        alpha,
        lambda,
        lattice,
        type_order,
    };
    assert!(data.in_lattice(&data.alpha), "constructed alpha must lie in L");
    Ok(data)
}

#[derive(Clone, Debug)]
pub struct UnramVerdict {
    pub exists: bool,
    pub class: RootClass,
    pub alpha_dot_lambda_zero: bool,
    /// Decomposition condition evaluated with more than two parts.
    pub exists_ell_gt_2: bool,
    /// Decomposition condition evaluated with at least two parts.
    pub exists_ell_ge_2: bool,
    pub notes: Vec<String>,
    pub data: HiroeData,
}

/// Root condition: `alpha` is a positive root with `alpha . lambda = 0`.
/// The decomposition condition runs over decompositions whose parts are positive roots in
/// `L` orthogonal to `lambda`; it is evaluated for both readings of the
/// part count and the requested one decides.
pub fn unramified_decide(types: &[UnramFormalType], opts: &UnramOptions) -> Result<UnramVerdict> {
    let data = build_hiroe_data(types, opts)?;
    let cartan = CartanMatrix::from_quiver(&data.quiver, opts.counting)?;
    let class = cartan.classify_root(&data.alpha)?;
    let dot_zero = pair_with_lambda(&data.alpha, &data.lambda).is_zero();
    let mut notes = Vec::new();
    if data.type_order[0] != 0 {
        notes.push(format!(
            "type {} moved to position 0 as the leading irregular type",
            data.type_order[0] + 1
        ));
    }
    let (mut gt2, mut ge2) = (false, false);
    if class.is_root() && dot_zero {
        let parts: Vec<Vec<i64>> = lambda_roots(&cartan, &data.alpha, &data.lambda, opts.budget)?
            .into_iter()
            .filter(|b| data.in_lattice(b))
            .collect();
        let target = cartan.twice_p(&data.alpha);
        let mut search = DecompositionSearch::new(&cartan, parts, opts.budget);
        let mut holds = |mode: EllMode| -> Result<bool> {
            Ok(search
                .best(&data.alpha, mode.min_parts())?
                .is_none_or(|best| best < target))
        };
        gt2 = holds(EllMode::GreaterThanTwo)?;
        ge2 = holds(EllMode::AtLeastTwo)?;
    }
    if gt2 != ge2 {
        notes.push(format!(
            "the decomposition condition is sensitive to the part count: l > 2 gives {gt2}, l >= 2 gives {ge2}"
        ));
    }
    let exists = match opts.ell_mode {
        EllMode::GreaterThanTwo => gt2,
        EllMode::AtLeastTwo => ge2,
    };
    Ok(UnramVerdict {
        exists,
        class,
        alpha_dot_lambda_zero: dot_zero,
        exists_ell_gt_2: gt2,
        exists_ell_ge_2: ge2,
        notes,
        data,
    })
}

pub fn unramified_ds_exists(types: &[UnramFormalType], opts: &UnramOptions) -> Result<bool> {
    Ok(unramified_decide(types, opts)?.exists)
}

/// Number of points of the moduli space for a rank-2 type `d` of slope 1
/// together with a regular singular orbit `o`, by the closed-form case
/// analysis of the two normal forms of `d`.
pub fn count_rank2_moduli(d: &UnramFormalType, o: &OrbitSpec) -> Result<u64> {
    if d.n() != 2 || o.n() != 2 {
        return Err(DsError::precondition("rank 2 formal type and orbit required"));
    }
    if d.slope() != 1 {
        return Err(DsError::precondition("formal type must have slope 1"));
    }
    o.check_nonresonant()?;
    match d.blocks() {
        // diag(a, b) z^-1 + diag(c, d) with a != b
        [b1, b2] => {
            let c = b1.residue.trace();
            let dd = b2.residue.trace();
            let minus_trace = -(&c + &dd);
            if o.trace() != minus_trace {
                return Ok(0);
            }
            if o.is_scalar() {
                // minimal polynomial of degree 1 forces c = d and u = v = 0
                return Ok(u64::from(c == dd));
            }
            if o.det() != &c * &dd {
                Ok(1)
            } else if c != dd {
                Ok(3)
            } else {
                Ok(2)
            }
        }
        // a = b: the truncated orbit is a single GL_2(C)-orbit
        [b] => {
            b.residue.check_nonresonant()?;
            Ok(u64::from(o.same_orbit(&b.residue.negated())))
        }
        _ => unreachable!("rank 2 has at most two blocks"),
    }
}
