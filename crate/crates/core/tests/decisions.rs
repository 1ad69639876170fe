//! Decision procedures against independent oracles and structural
//! invariants.

mod common;

use common::*;
use dskit::algebra::{partitions_of, LaurentMatrix, OrbitSpec, Partition, Scalar};
use dskit::coxeter::{
    coxeter_ds_decide, ds_generator, is_rigid_coxeter_gl, rigid_table_simple_type, CharPolySpec,
    CoxeterFormalType, Family, SimpleTypeQuery,
};
use dskit::formal::{certify_slope, leading_stratum, SlopeCertificate, StandardParahoric};
use dskit::fuchsian::{build_cb_data, fuchsian_decide, fuchsian_ds_exists, Rigidity};
use dskit::rootsys::DEFAULT_BUDGET;
use dskit::unramified::{
    build_hiroe_data, count_rank2_moduli, unramified_ds_exists, UnramBlock, UnramFormalType,
    UnramOptions,
};
use num_rational::Rational64;
use rand::seq::SliceRandom;
use rand::Rng;

/// Rank 2 with regular semisimple or scalar orbits. Scalars only shift
/// the others. With `k` nonscalar orbits: `k <= 2` is always empty, `k = 3`
/// needs every one-per-orbit eigenvalue sum (shifted by the scalars) to be
/// nonzero, and `k >= 4` needs only the trace condition.
fn rank2_oracle(orbits: &[OrbitSpec]) -> bool {
    let trace: Scalar = orbits.iter().map(|o| o.trace()).sum();
    if !trace.is_zero() {
        return false;
    }
    let shift: Scalar = orbits
        .iter()
        .filter(|o| o.is_scalar())
        .map(|o| o.blocks()[0].eig.clone())
        .sum();
    let eigs: Vec<Vec<Scalar>> = orbits
        .iter()
        .filter(|o| !o.is_scalar())
        .map(|o| o.eigenvalues().cloned().collect())
        .collect();
    match eigs.len() {
        0..=2 => false,
        3 => (0..8).all(|mask| {
            let sum: Scalar = (0..3).map(|i| eigs[i][(mask >> i) & 1].clone()).sum();
            !(&sum + &shift).is_zero()
        }),
        _ => true,
    }
}

fn rank2_instance(rng: &mut rand_chacha::ChaCha8Rng) -> Vec<OrbitSpec> {
    let vals: Vec<Scalar> = (-3..=3).map(|k| q(k, 4)).chain([gauss((0, 1), (1, 4))]).collect();
    let k = rng.gen_range(1..=6);
    let mut orbits: Vec<OrbitSpec> = (0..k)
        .map(|_| {
            if rng.gen_bool(0.2) {
                OrbitSpec::scalar(2, vals.choose(rng).unwrap().clone())
            } else {
                loop {
                    let (x, y) = (vals.choose(rng).unwrap(), vals.choose(rng).unwrap());
                    if let Ok(o) = OrbitSpec::regular_semisimple(&[x.clone(), y.clone()]) {
                        if o.is_nonresonant() {
                            break o;
                        }
                    }
                }
            }
        })
        .collect();
    if rng.gen_bool(0.75) {
        // move the last orbit so that the traces cancel
        let total: Scalar = orbits.iter().map(|o| o.trace()).sum();
        let shift = -total * q(1, 2);
        let last = orbits.pop().unwrap();
        let blocks = last.blocks().iter().map(|b| (&b.eig + &shift, b.partition.clone())).collect();
        orbits.push(OrbitSpec::new(2, blocks).unwrap());
    }
    orbits
}

#[test]
fn rank_two_fuchsian_matches_the_oracle() {
    let mut rng = rng(21);
    let (mut yes, mut no) = (0, 0);
    for _ in 0..400 {
        let orbits = rank2_instance(&mut rng);
        let want = rank2_oracle(&orbits);
        let v = fuchsian_decide(&orbits, None, DEFAULT_BUDGET).unwrap();
        assert_eq!(v.exists, want, "{orbits:?}");
        if want {
            let nonscalar = orbits.iter().filter(|o| !o.is_scalar()).count();
            let rig = if nonscalar == 3 { Rigidity::RigidSingleton } else { Rigidity::Infinite };
            assert_eq!(v.rigidity, rig, "{orbits:?}");
            yes += 1;
        } else {
            no += 1;
        }
    }
    assert!(yes > 50 && no > 50, "{yes} / {no}");
}

#[test]
fn fuchsian_invariant_under_permutation_and_translation() {
    let mut rng = rng(22);
    for _ in 0..120 {
        let n = rng.gen_range(2..=3);
        let k = rng.gen_range(2..=4);
        let mut orbits: Vec<OrbitSpec> = (0..k).map(|_| random_orbit(&mut rng, n)).collect();
        let total: Scalar = orbits.iter().map(|o| o.trace()).sum();
        let last = orbits.pop().unwrap();
        let fix = -total * q(1, n as i64);
        orbits.push(OrbitSpec::new(n, last.blocks().iter().map(|b| (&b.eig + &fix, b.partition.clone())).collect()).unwrap());
        let base = fuchsian_ds_exists(&orbits, DEFAULT_BUDGET).unwrap();

        let mut perm = orbits.clone();
        perm.shuffle(&mut rng);
        assert_eq!(fuchsian_ds_exists(&perm, DEFAULT_BUDGET).unwrap(), base);

        let shifts: Vec<Scalar> = (0..k - 1).map(|_| q(rng.gen_range(-5..=5), 3)).collect();
        let last_shift = -shifts.iter().cloned().sum::<Scalar>();
        let moved: Vec<OrbitSpec> = orbits
            .iter()
            .zip(shifts.iter().chain([&last_shift]))
            .map(|(o, t)| {
                OrbitSpec::new(n, o.blocks().iter().map(|b| (&b.eig + t, b.partition.clone())).collect()).unwrap()
            })
            .collect();
        assert_eq!(fuchsian_ds_exists(&moved, DEFAULT_BUDGET).unwrap(), base, "{orbits:?}");
    }
}

#[test]
fn affine_d4_is_infinite() {
    let eigs = [(q(1, 2), q(-1, 3)), (q(1, 5), q(1, 7)), (q(2, 5), q(-1, 4)), (q(1, 9), s(0))];
    let mut orbits: Vec<OrbitSpec> = eigs
        .iter()
        .map(|(x, y)| OrbitSpec::regular_semisimple(&[x.clone(), y.clone()]).unwrap())
        .collect();
    let total: Scalar = orbits.iter().map(|o| o.trace()).sum();
    orbits[3] = OrbitSpec::regular_semisimple(&[q(1, 9), -&total]).unwrap();
    let v = fuchsian_decide(&orbits, None, DEFAULT_BUDGET).unwrap();
    assert_eq!(v.data.alpha, vec![2, 1, 1, 1, 1]);
    assert_eq!(v.data.cartan().p_value(&v.data.alpha), Rational64::from_integer(1));
    assert_eq!(v.rigidity, Rigidity::Infinite);
}

#[test]
fn explicit_factor_sequences_change_labels_not_answers() {
    let mut rng = rng(23);
    for _ in 0..60 {
        let orbits: Vec<OrbitSpec> = (0..3).map(|_| random_nonscalar_orbit(&mut rng, 3)).collect();
        let mut seqs: Vec<Vec<Scalar>> = orbits.iter().map(|o| o.default_factor_sequence()).collect();
        for s in &mut seqs {
            s.reverse();
        }
        let a = fuchsian_decide(&orbits, None, DEFAULT_BUDGET).unwrap();
        let b = fuchsian_decide(&orbits, Some(&seqs), DEFAULT_BUDGET).unwrap();
        assert_eq!(a.exists, b.exists, "{orbits:?}");
    }
}

#[test]
fn all_regular_types_reproduce_the_star() {
    let mut rng = rng(24);
    let opts = UnramOptions {
        allow_regular_base: true,
        ..Default::default()
    };
    for _ in 0..60 {
        let n = rng.gen_range(1..=3);
        let k = rng.gen_range(1..=4);
        let orbits: Vec<OrbitSpec> = (0..k).map(|_| random_orbit(&mut rng, n)).collect();
        let types: Vec<UnramFormalType> = orbits.iter().cloned().map(UnramFormalType::regular).collect();
        let cb = build_cb_data(&orbits, None).unwrap();
        let h = build_hiroe_data(&types, &opts).unwrap();
        // "[0,1]" <-> "0" and "[i,1,k]" <-> "[i+1,k]"
        let rename = |id: &str| -> String {
            if id == "[0,1]" {
                return "0".into();
            }
            let nums: Vec<usize> = id
                .trim_matches(|c| c == '[' || c == ']')
                .split(',')
                .map(|x| x.parse().unwrap())
                .collect();
            format!("[{},{}]", nums[0] + 1, nums[2])
        };
        let hv: Vec<String> = h.quiver.vertices().iter().map(|v| rename(v)).collect();
        assert_eq!(hv, cb.quiver.vertices());
        assert_eq!(h.alpha, cb.alpha);
        assert_eq!(h.lambda, cb.lambda);
        let mut ha: Vec<(usize, usize)> = h.quiver.arrows().to_vec();
        let mut ca: Vec<(usize, usize)> = cb.quiver.arrows().to_vec();
        ha.sort();
        ca.sort();
        assert_eq!(ha, ca);
    }
}

#[test]
fn nonempty_rank_two_moduli_have_points() {
    let vals = [q(1, 3), q(1, 5), q(-1, 3), gauss((0, 1), (1, 2))];
    for c in &vals {
        for d in &vals {
            let ty = UnramFormalType::new(vec![
                UnramBlock::new(vec![s(1)], OrbitSpec::scalar(1, c.clone())),
                UnramBlock::new(vec![s(2)], OrbitSpec::scalar(1, d.clone())),
            ])
            .unwrap();
            let mut orbits = vec![
                OrbitSpec::scalar(2, -c),
                OrbitSpec::new(2, vec![(-c, Partition::row(2))]).unwrap(),
                OrbitSpec::regular_semisimple(&[q(1, 7), -&(&(c + d) + &q(1, 7))]).unwrap(),
                OrbitSpec::regular_semisimple(&[q(1, 7), q(2, 7)]).unwrap(),
            ];
            if c != d {
                orbits.push(OrbitSpec::regular_semisimple(&[-c, -d]).unwrap());
            }
            for o in orbits.into_iter().filter(|o| o.is_nonresonant()) {
                let types = [ty.clone(), UnramFormalType::regular(o.clone())];
                if unramified_ds_exists(&types, &UnramOptions::default()).unwrap() {
                    assert!(count_rank2_moduli(&ty, &o).unwrap() >= 1, "c={c} d={d} {o:?}");
                }
            }
        }
    }
}

fn two_eigenvalue_orbits(n: usize) -> Vec<OrbitSpec> {
    let mut out = Vec::new();
    for m in 1..n {
        for p in partitions_of(m) {
            for p2 in partitions_of(n - m) {
                out.push(OrbitSpec::new(n, vec![(q(1, 3), p.clone()), (q(-1, 5), p2)]).unwrap());
            }
        }
    }
    out
}

#[test]
fn coxeter_existence_is_upward_closed() {
    for n in 2..=6usize {
        for r in (1..=n + 1).filter(|r| num_integer::gcd(*r, n) == 1) {
            for group in [partitions_of(n).into_iter().map(OrbitSpec::nilpotent).collect(), two_eigenvalue_orbits(n)] {
                // pick p0 so that the trace condition holds for this group
                let p0 = -group[0].trace() * q(1, n as i64);
                let f = CoxeterFormalType::monomial(n, r, s(1), p0).unwrap();
                for a in &group {
                    if !coxeter_ds_decide(&f, a).unwrap() {
                        continue;
                    }
                    for b in &group {
                        let above = a.blocks().iter().all(|x| {
                            b.partition_of(&x.eig)
                                .is_some_and(|y| x.partition.weight() == y.weight() && x.partition.dominance_leq(y).unwrap())
                        });
                        if above {
                            assert!(coxeter_ds_decide(&f, b).unwrap(), "n={n} r={r}: {a:?} -> {b:?}");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn filter_generator_matches_block_count() {
    for m in 1..=9 {
        for r in 1..=m + 1 {
            let g = Partition::min_with_at_most_parts(r, m).unwrap();
            for p in partitions_of(m) {
                assert_eq!(g.dominance_leq(&p).unwrap(), p.num_parts() <= r, "m={m} r={r} {p}");
            }
        }
    }
}

#[test]
fn type_a_row_agrees_with_gl() {
    for n in 2..=12usize {
        for r in (1..=2 * n + 3).filter(|r| num_integer::gcd(*r, n) == 1) {
            let q = SimpleTypeQuery::new(Family::A, n - 1, r).unwrap();
            let gen = ds_generator(r, &CharPolySpec::nilpotent(n)).unwrap();
            let gl = is_rigid_coxeter_gl(n, r, &gen).unwrap();
            for conj in [false, true] {
                assert_eq!(rigid_table_simple_type(&q, conj), gl, "n={n} r={r}");
            }
        }
    }
}

#[test]
fn coxeter_types_give_fundamental_iwahori_strata() {
    let mut rng = rng(25);
    for n in 1..=6usize {
        for r in (1..=7usize).filter(|r| num_integer::gcd(*r, n) == 1) {
            let mut coeffs: Vec<Scalar> = (0..r).map(|_| q(rng.gen_range(-3..=3), 2)).collect();
            coeffs.push(q(rng.gen_range(1..=4), 3));
            let f = CoxeterFormalType::new(n, r, coeffs).unwrap();
            let st = leading_stratum(&StandardParahoric::iwahori(n), &f.matrix()).unwrap();
            assert!(st.is_fundamental(), "n={n} r={r}");
            assert_eq!(st.depth(), Rational64::new(r as i64, n as i64));
            assert_eq!(f.slope(), st.depth());
            assert_eq!(
                certify_slope(&f.matrix()).unwrap(),
                SlopeCertificate::CertifiedSlope { slope: st.depth(), j_set: (0..n).collect() }
            );
        }
    }
}

#[test]
fn certified_slope_is_a_lower_bound_for_every_stratum() {
    let mut rng = rng(26);
    let mut certified = 0;
    for _ in 0..150 {
        let n = rng.gen_range(1..=4);
        let lo = rng.gen_range(-3..=-1i64);
        let mut m = LaurentMatrix::zero(n);
        for k in lo..=1 {
            let mut c = random_small_matrix(&mut rng, n, 2);
            // sparse entries make nilpotent leading terms common
            for a in 0..n {
                for b in 0..n {
                    if rng.gen_bool(0.6) {
                        c[(a, b)] = s(0);
                    }
                }
            }
            m = m.add(&LaurentMatrix::constant(c).shift(k));
        }
        if let SlopeCertificate::CertifiedSlope { slope, .. } = certify_slope(&m).unwrap() {
            certified += 1;
            for p in StandardParahoric::all(n) {
                let st = leading_stratum(&p, &m).unwrap();
                assert!(st.depth() >= slope, "{m:?} at {:?}", p.j_set());
            }
        }
    }
    assert!(certified > 30);
}

#[test]
fn iwahori_closed_form() {
    for n in 1..=6usize {
        let p = StandardParahoric::iwahori(n);
        for a in 0..n {
            for b in 0..n {
                for k in -3..=3i64 {
                    let want = k * n as i64 + b as i64 - a as i64;
                    assert_eq!(p.filtration_degree(a, b, k), want);
                    assert_eq!(p.filtration_degree_by_definition(a, b, k), want);
                }
            }
        }
    }
}
