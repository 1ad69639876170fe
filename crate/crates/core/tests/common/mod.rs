//! Shared generators and independent oracles for the integration tests.

#![allow(dead_code)]

use dskit::algebra::{LaurentMatrix, Matrix, OrbitSpec, Partition, Scalar};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn s(v: i64) -> Scalar {
    Scalar::from_int(v)
}

pub fn q(a: i64, b: i64) -> Scalar {
    Scalar::ratio(a, b)
}

pub fn gauss(re: (i64, i64), im: (i64, i64)) -> Scalar {
    Scalar::from_parts(re.0, re.1, im.0, im.1).unwrap()
}

/// Sevenths with small imaginary parts: two distinct ones never differ by a
/// nonzero integer.
pub fn eigen_pool() -> Vec<Scalar> {
    let mut out = Vec::new();
    for re in -3..=3 {
        for im in [-1, 0, 1] {
            out.push(gauss((re, 7), (im, 3)));
        }
    }
    out
}

pub fn random_partition(rng: &mut ChaCha8Rng, m: usize) -> Partition {
    let mut left = m;
    let mut parts = Vec::new();
    while left > 0 {
        let p = rng.gen_range(1..=left);
        parts.push(p);
        left -= p;
    }
    Partition::from_unsorted(parts)
}

/// Random orbit of size `n` with eigenvalues from the nonresonant pool.
pub fn random_orbit(rng: &mut ChaCha8Rng, n: usize) -> OrbitSpec {
    let mut pool = eigen_pool();
    pool.shuffle(rng);
    let mut left = n;
    let mut blocks = Vec::new();
    let mut k = 0;
    while left > 0 {
        let m = rng.gen_range(1..=left);
        blocks.push((pool[k].clone(), random_partition(rng, m)));
        k += 1;
        left -= m;
    }
    OrbitSpec::new(n, blocks).unwrap()
}

/// Random orbit that is not a scalar matrix (needs `n >= 2`).
pub fn random_nonscalar_orbit(rng: &mut ChaCha8Rng, n: usize) -> OrbitSpec {
    loop {
        let o = random_orbit(rng, n);
        if !o.is_scalar() {
            return o;
        }
    }
}

pub fn random_small_matrix(rng: &mut ChaCha8Rng, n: usize, range: i64) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            m[(a, b)] = s(rng.gen_range(-range..=range));
        }
    }
    m
}

/// Unit lower times unit upper triangular integer matrix, hence invertible.
pub fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let mut l = Matrix::identity(n);
    let mut u = Matrix::identity(n);
    for a in 0..n {
        for b in 0..a {
            l[(a, b)] = s(rng.gen_range(-2..=2));
            u[(b, a)] = s(rng.gen_range(-2..=2));
        }
    }
    &l * &u
}

/// A random conjugate of the Jordan form of a random nonresonant orbit.
pub fn random_nonresonant_matrix(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let o = random_orbit(rng, n);
    let p = random_invertible(rng, n);
    &(&p * &o.jordan_matrix()) * &p.inverse().unwrap()
}

/// Rank of `m - c`.
pub fn rank_shifted(m: &Matrix, c: &Scalar) -> usize {
    (m - &Matrix::scalar(m.rows(), c)).rank()
}

/// Jordan type at eigenvalue `c` from the ranks of powers of `m - c`: the
/// number of blocks of size `>= k` is `rank(N^{k-1}) - rank(N^k)`.
pub fn jordan_type_at(m: &Matrix, c: &Scalar) -> Vec<usize> {
    let n = m.rows();
    let shifted = m - &Matrix::scalar(n, c);
    let mut ranks = vec![n];
    let mut p = Matrix::identity(n);
    for _ in 0..n {
        p = &p * &shifted;
        ranks.push(p.rank());
    }
    let at_least: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    let mut parts = Vec::new();
    for k in 0..n {
        let exact = at_least[k] - at_least.get(k + 1).copied().unwrap_or(0);
        for _ in 0..exact {
            parts.push(k + 1);
        }
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    parts
}

/// Whether `m` lies in the orbit `o`: same Jordan type at every eigenvalue
/// of `o` and the sizes add up to `n`.
pub fn matrix_in_orbit(m: &Matrix, o: &OrbitSpec) -> bool {
    let mut total = 0;
    for b in o.blocks() {
        let jt = jordan_type_at(m, &b.eig);
        if jt != b.partition.parts() {
            return false;
        }
        total += jt.iter().sum::<usize>();
    }
    total == m.rows()
}

/// `dim O = n^2 - dim ker ad(A)` computed from the `n^2 x n^2` matrix of
/// `X -> AX - XA`.
pub fn orbit_dim_by_commutant(o: &OrbitSpec) -> usize {
    let a = o.jordan_matrix();
    let n = o.n();
    let mut ad = Matrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let mut x = Matrix::zeros(n, n);
            x[(i, j)] = s(1);
            let img = &(&a * &x) - &(&x * &a);
            for r in 0..n {
                for c in 0..n {
                    ad[(r * n + c, i * n + j)] = img[(r, c)].clone();
                }
            }
        }
    }
    ad.rank()
}

/// `g M - z g' - B0 g` modulo `z^order`, by direct substitution.
pub fn gauge_defect(g: &LaurentMatrix, m: &LaurentMatrix, b0: &Matrix, order: i64) -> LaurentMatrix {
    let lhs = g.mul(m).sub(&g.euler_derivative());
    lhs.sub(&LaurentMatrix::constant(b0.clone()).mul(g))
        .with_trunc(Some(order))
}

/// D4 oracle: traces cancel and no choice of one eigenvalue per orbit sums
/// to zero.
pub fn d4_oracle(eigs: &[[Scalar; 2]; 3]) -> bool {
    let trace: Scalar = eigs.iter().map(|e| &e[0] + &e[1]).sum();
    if !trace.is_zero() {
        return false;
    }
    for mask in 0..8 {
        let sum: Scalar = (0..3).map(|i| eigs[i][(mask >> i) & 1].clone()).sum();
        if sum.is_zero() {
            return false;
        }
    }
    true
}

/// Point count of the rank-2 moduli space with a diagonal slope-1 type
/// `diag(a, b) z^-1 + diag(c, d)`, `a != b`, by listing torus-orbit
/// representatives `(u, v)` of the off-diagonal part of the residue and
/// testing membership of `-Res` in `o` with a Jordan-type oracle.
pub fn rank2_count_oracle(c: &Scalar, d: &Scalar, o: &OrbitSpec) -> u64 {
    let res = |u: Scalar, v: Scalar| {
        Matrix::from_rows(vec![vec![-c, -&u], vec![-&v, -d]]).unwrap()
    };
    let mut reps = vec![(s(0), s(0)), (s(1), s(0))];
    // (u, 1): det(-Res) = cd - u fixes u once det(o) is known
    let u = &(c * d) - &o.det();
    reps.push((u, s(1)));
    reps.into_iter()
        .filter(|(u, v)| matrix_in_orbit(&res(u.clone(), v.clone()), o))
        .count() as u64
}
