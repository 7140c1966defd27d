use proptest::prelude::*;
use twostep::combinat::{dim_forms, macaulay_growth};
use twostep::exactla::{Field, Fp, Subspace, Q};
use twostep::fixtures::{load, Fixture};
use twostep::ideals::*;
use twostep::profiles::*;
use twostep::search::{enumerate_domain, Domain};
use twostep::tangent::*;
use twostep::Exec;

/// Discards the case when the generic construction cannot realize the
/// profile: e.g. at (n, k, h_k, h_{k+1}) = (3, 2, 3, 8) every kernel
/// element of `[x y z]` carries a second, Koszul-type linear syzygy.
fn usable<F: Field>(r: Result<GradedIdeal<F>, IdealError>) -> Result<GradedIdeal<F>, TestCaseError> {
    match r {
        Ok(i) => Ok(i),
        Err(IdealError::SamplerExhausted { .. }) => Err(TestCaseError::reject("sampler exhausted")),
        Err(e) => Err(TestCaseError::fail(e.to_string())),
    }
}

fn sampled<F: Field>(p: &TwoStepProfile, seed: u64) -> Result<GradedIdeal<F>, TestCaseError> {
    usable(sample_two_step(p, seed, &SamplerConfig::default()))
}

fn samplable(max_n: usize, max_k: usize) -> impl Strategy<Value = TwoStepProfile> {
    (2..=max_n, 1..=max_k)
        .prop_flat_map(|(n, k)| (Just(n), Just(k), 1..dim_forms(n, k)))
        .prop_flat_map(|(n, k, hk)| {
            let lo = macaulay_growth(n, k, hk).unwrap();
            (Just(n), Just(k), Just(hk), lo..dim_forms(n, k + 1))
        })
        .prop_map(|(n, k, hk, hk1)| TwoStepProfile::new(n, k, hk, hk1).unwrap())
        .prop_filter("generic sampler regime", |p| {
            matches!(classify(p), SyzygyRegime::NoSyzygies | SyzygyRegime::VeryFew)
        })
}

fn fixture_ideal(name: &str) -> GradedIdeal<Q> {
    match load(name).unwrap() {
        Fixture::Ideal(i) => i,
        Fixture::Nesting(_) => panic!("{name} is a nesting"),
    }
}

fn fixture_nesting(name: &str) -> Nesting<Q> {
    match load(name).unwrap() {
        Fixture::Nesting(n) => n,
        Fixture::Ideal(_) => panic!("{name} is a single ideal"),
    }
}

/// Re-spans each graded piece with an invertible integer combination of
/// its basis rows.
fn rebased<F: Field>(i: &GradedIdeal<F>, mix: &[i64]) -> GradedIdeal<F> {
    let remix = |s: &Subspace<F>| {
        let b = s.basis();
        let rows: Vec<Vec<F>> = (0..b.len())
            .map(|r| {
                // Row r plus a multiple of every later row: unitriangular.
                let mut v = b[r].clone();
                for (c, later) in b.iter().enumerate().skip(r + 1) {
                    let f = F::from_i64(mix[(r * 7 + c) % mix.len()]);
                    for (a, x) in v.iter_mut().zip(later) {
                        *a = a.plus(&f.times(x));
                    }
                }
                v
            })
            .rev()
            .collect();
        Subspace::from_rows(s.ambient_dim(), rows)
    };
    GradedIdeal::new(i.n(), i.k(), remix(i.lo()), remix(i.hi())).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn degree_one_tangents_follow_the_closed_form(p in samplable(4, 3), seed in any::<u64>()) {
        let i: GradedIdeal<Fp> = sampled(&p, seed)?;
        prop_assert_eq!(hom_graded(&i, 1).dim, p.hk * p.qk1());
        prop_assert_eq!(hom_graded(&i, 2).dim, 0);
        prop_assert_eq!(hom_graded(&i, 3).dim, 0);
    }

    #[test]
    fn degree_zero_tangents_meet_the_lower_bound(p in samplable(4, 2), seed in any::<u64>()) {
        let i: GradedIdeal<Fp> = sampled(&p, seed)?;
        prop_assert!(hom_graded(&i, 0).dim >= expected_tangent_dims(&p).t0_lower);
    }

    #[test]
    fn presentation_system_matches_the_full_oracle(
        k in 1usize..=3,
        hk in 1usize..=3,
        extra in 0usize..=3,
        seed in any::<u64>(),
    ) {
        let n = 2;
        let hk = hk.min(dim_forms(n, k) - 1);
        let lo = macaulay_growth(n, k, hk).unwrap();
        let hk1 = (lo + extra).min(dim_forms(n, k + 1) - 1);
        let p = TwoStepProfile::new(n, k, hk, hk1).unwrap();
        prop_assume!(matches!(classify(&p), SyzygyRegime::NoSyzygies | SyzygyRegime::VeryFew));
        let i: GradedIdeal<Q> = sampled(&p, seed)?;
        for t in -(k as i64 + 3)..=2 {
            prop_assert_eq!(hom_graded(&i, t).dim, oracle::hom_dim(&i, t), "t = {}", t);
        }
    }

    #[test]
    fn verdict_is_independent_of_the_chosen_bases(p in samplable(3, 2), seed in any::<u64>(), mix in prop::collection::vec(-3i64..=3, 5..12)) {
        let i: GradedIdeal<Fp> = sampled(&p, seed)?;
        let j = rebased(&i, &mix);
        prop_assert_eq!(tangent_report(&i, Exec::Sequential), tangent_report(&j, Exec::Sequential));
    }
}

#[test]
fn homomorphism_bases_satisfy_the_relations() {
    let p = TwoStepProfile::new(3, 2, 3, 9).unwrap();
    let i: GradedIdeal<Q> = sample_two_step(&p, 5, &SamplerConfig::default()).unwrap();
    let sys = TangentSystem::new(&i);
    for t in -3..=1 {
        let h = sys.hom(t);
        assert_eq!(h.dim, h.basis.len());
        for v in &h.basis {
            assert!(sys.is_homomorphism(t, v), "t = {t}");
        }
    }
    for d in sys.derivations() {
        assert!(sys.is_homomorphism(-1, &d));
    }
}

#[test]
fn nested_degree_one_tangents_are_additive() {
    for (n, r, k) in [(2, 2, 3), (3, 2, 1), (2, 3, 2)] {
        let dom = Domain::new(n, r, k).unwrap();
        let points: Vec<Vec<usize>> = enumerate_domain(&dom)
            .filter(|pt| {
                NestedProfile::from_point(n, k, pt)
                    .map(|np| np.regimes().iter().all(|g| !matches!(g, SyzygyRegime::Few | SyzygyRegime::Lots)))
                    .unwrap_or(false)
            })
            .step_by(7)
            .take(6)
            .collect();
        assert!(!points.is_empty());
        for pt in points {
            let np = NestedProfile::from_point(n, k, &pt).unwrap();
            let nest: Nesting<Fp> = sample_nested(&np, 3, &SamplerConfig::default()).unwrap();
            let total: usize = np.levels.iter().map(|p| p.hk * p.qk1()).sum();
            assert_eq!(nested_hom_graded(&nest, 1), total, "{pt:?}");
        }
    }
}

#[test]
fn nested_system_matches_the_full_oracle() {
    let np = NestedProfile::from_point(3, 1, &[2, 6, 0, 6, 1, 11]).unwrap();
    let nest: Nesting<Fp> = sample_nested(&np, 9, &SamplerConfig::default()).unwrap();
    let sys = NestedTangentSystem::new(&nest);
    for t in -4..=1 {
        let d = sys.dim(t);
        assert_eq!(d, oracle::nested_hom_dim(&nest, t), "t = {t}");
        assert_eq!(d, sys.dim_joint(t), "t = {t}");
    }
}

#[test]
fn nested_systems_agree_over_both_fields() {
    let np = NestedProfile::from_point(2, 2, &[1, 3, 0, 2]).unwrap();
    let nest: Nesting<Q> = sample_nested(&np, 4, &SamplerConfig::default()).unwrap();
    let fp = nest.to_fp().unwrap();
    for t in -4..=1 {
        assert_eq!(nested_hom_graded(&nest, t), nested_hom_graded(&fp, t), "t = {t}");
    }
}

#[test]
fn length_78_fixture_values() {
    let i = fixture_ideal("iarrobino78");
    assert_eq!(i.hilbert_function().values, vec![1, 3, 6, 10, 15, 21, 17, 5]);
    assert_eq!(i.colength(), 78);
    assert_eq!((i.profile().hk, i.profile().hk1), (11, 31));
    let b = betti_slice(&i);
    assert_eq!(b.beta1_k1, 2);
    let rep = tangent_report(&i.to_fp().unwrap(), Exec::Parallel);
    assert_eq!(rep.t1, 55);
    assert!(!rep.tnt);
}

#[test]
fn four_variable_nesting_has_trivial_negative_tangents() {
    let nest = fixture_nesting("nested-a4");
    let hfs: Vec<Vec<usize>> = nest.hilbert_functions().into_iter().map(|h| h.values).collect();
    assert_eq!(hfs, vec![vec![1, 2], vec![1, 4, 2]]);
    let over_q = nested_tangent_report(&nest, Exec::Sequential);
    let over_p = nested_tangent_report(&nest.to_fp().unwrap(), Exec::Sequential);
    assert!(over_q.tnt);
    assert_eq!(over_q, over_p);
}

#[test]
fn printed_cubic_is_special_and_a_random_cubic_is_not() {
    let first = tangent_report(&fixture_ideal("sixvar-first").to_fp().unwrap(), Exec::Parallel);
    assert!(first.tnt);
    let printed = fixture_ideal("sixvar-second");
    assert_eq!(printed.hilbert_function().values, vec![1, 6, 12, 6]);
    let rep = tangent_report(&printed.to_fp().unwrap(), Exec::Parallel);
    assert_eq!((rep.dim(-1), rep.derivation_rank), (8, 6));
    assert!(!rep.tnt);
    let generic = fixture_ideal("sixvar-generic");
    assert_eq!(generic.hilbert_function().values, vec![1, 6, 12, 6]);
    let rep = tangent_report(&generic.to_fp().unwrap(), Exec::Parallel);
    assert_eq!((rep.dim(-1), rep.derivation_rank), (6, 6));
    assert!(rep.tnt);
}
