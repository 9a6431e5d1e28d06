use std::collections::HashSet;

use proptest::prelude::*;
use tchakaloff::cubature::DEFAULT_PRODUCT_CAP;
use tchakaloff::*;

fn bits(row: &[f64]) -> Vec<u64> {
    row.iter().map(|x| x.to_bits()).collect()
}

#[test]
fn constructed_nodes_are_drawn_points() {
    for (s, m) in [(1, 4), (2, 3), (3, 2)] {
        let basis = enumerate_monomials(s, m).unwrap();
        let target = analytic_moment_vector(&basis).unwrap();
        let config = ConstructionConfig::with_seed(1234);
        let cub = construct_exact(Distribution::UniformCube, &basis, &target, &config).unwrap();
        let CubatureProvenance::ExactConstruction { pool_size, .. } = cub.provenance else {
            panic!("unexpected provenance");
        };
        let drawn = sample_uniform_cube(s, pool_size, config.seed, config.stream_id);
        let pool: HashSet<Vec<u64>> = drawn.points.rows().map(bits).collect();
        for node in cub.nodes.rows() {
            assert!(pool.contains(&bits(node)));
        }
        assert!(cub.len() <= basis.len());
        let report = verify(&cub, &basis, &target, 1e-9);
        assert!(report.passed(), "{report}");
    }
}

#[test]
fn growth_schedule_doubles_from_d() {
    let basis = enumerate_monomials(2, 2).unwrap();
    let target = analytic_moment_vector(&basis).unwrap();
    for seed in 0..10 {
        let cub = construct_exact(
            Distribution::UniformCube,
            &basis,
            &target,
            &ConstructionConfig::with_seed(seed),
        )
        .unwrap();
        let CubatureProvenance::ExactConstruction { pool_size, .. } = cub.provenance else {
            unreachable!()
        };
        // pools visited: 6, 12, 24, ...
        assert_eq!(pool_size % 6, 0);
        assert!((pool_size / 6).is_power_of_two(), "pool {pool_size}");
    }
}

#[test]
fn compression_reproduces_sample_means() {
    let basis = enumerate_monomials(3, 2).unwrap();
    let samples = sample_uniform_cube(3, 2000, 77, 1);
    let cub = compress_empirical(&samples, &basis, &LpOptions::default()).unwrap();
    assert!(cub.len() <= basis.len());
    let f = |x: &[f64]| 2.0 - x[0] + 3.0 * x[1] * x[2] - 0.5 * x[2] * x[2];
    let plain: f64 = samples.points.rows().map(f).sum::<f64>() / samples.len() as f64;
    assert!((integrate_fn(&cub, f) - plain).abs() <= 1e-9);
}

#[test]
fn compression_of_gaussian_samples() {
    let basis = enumerate_monomials(2, 3).unwrap();
    let samples = sample_gaussian(2, 5000, 3, 0);
    let cub = compress_empirical(&samples, &basis, &LpOptions::default()).unwrap();
    let emp = empirical_moments(&samples, &basis).unwrap();
    assert!(verify(&cub, &basis, &emp, 1e-9).passed());
}

#[test]
fn reduced_product_stays_exact() {
    let basis1 = enumerate_monomials(1, 3).unwrap();
    let target1 = analytic_moment_vector(&basis1).unwrap();
    let pts = PointSet::from_rows(1, &[[0.0], [0.5], [1.0]]).unwrap();
    let simpson = subsample(&pts, &basis1, &target1, &LpOptions::default()).unwrap();

    for k in [2u32, 3] {
        let prod = product_cubature(&simpson, k, DEFAULT_PRODUCT_CAP).unwrap();
        assert_eq!(prod.len(), 3usize.pow(k));
        let basis = enumerate_monomials(k as usize, 3).unwrap();
        let exact = analytic_moment_vector(&basis).unwrap();
        assert!(verify(&prod, &basis, &exact, 1e-12).residuals_ok());

        let moments = prod.moments(&basis).unwrap();
        let own = MomentVector::new(
            std::iter::once(1.0).chain(moments[1..].iter().copied()).collect(),
            MomentProvenance::UserSupplied,
        )
        .unwrap();
        let reduced = subsample(&prod.nodes, &basis, &own, &LpOptions::default()).unwrap();
        assert!(reduced.len() <= basis.len());
        let report = verify(&reduced, &basis, &exact, 1e-12);
        assert!(report.residuals_ok(), "{report}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn empirical_target_is_always_feasible(seed in any::<u64>(), n in 1usize..200, m in 1u32..4) {
        let basis = enumerate_monomials(2, m).unwrap();
        let samples = sample_uniform_cube(2, n, seed, 0);
        let cub = compress_empirical(&samples, &basis, &LpOptions::default()).unwrap();
        prop_assert!(cub.len() <= basis.len().min(n));
        prop_assert!(cub.weights.iter().all(|&w| w > 0.0));
        prop_assert!((cub.weight_sum() - 1.0).abs() <= 1e-12);
        let emp = empirical_moments(&samples, &basis).unwrap();
        prop_assert!(verify(&cub, &basis, &emp, 1e-9).residuals_ok());
    }
}
