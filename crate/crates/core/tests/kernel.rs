use std::f64::consts::PI;
use twocharge::ensemble::{brute_force_correlation, density_mass, partition_function, population_law};
use twocharge::kernel::*;
use twocharge::skewpoly::FamilyKind;

const CAPITAL: KernelBasis = KernelBasis::Skew(FamilyKind::Capital);
const MONIC: KernelBasis = KernelBasis::Skew(FamilyKind::Monic);

#[test]
fn two_particle_values() {
    let ctx = build_context(2, MONIC, 1.0).unwrap();
    let z = 3.0 * PI.sqrt();
    assert!((ctx.density_charge1(0.0) - 2.0 / z).abs() < 1e-14);
    assert!((ctx.density_charge2(0.0) - 1.0 / z).abs() < 1e-14);
    assert!((ctx.kappa_eps(0.0, 0.0, KernelOp::Identity, KernelOp::Eps1) - 1.0 / z).abs() < 1e-14);
    // R_{2,0}(x, y) = |x - y| w(x) w(y) / Z and R_{0,1}(y) = w(y)^2 / Z
    for (x, y) in [(0.3, -0.5), (1.2, 0.1), (-2.0, 1.5)] {
        let want = (x - y as f64).abs() * (-(x * x + y * y) / 2.0f64).exp() / z;
        assert!((ctx.correlation(&[x, y], &[]).unwrap() - want).abs() < 1e-13);
        assert!((ctx.density_charge2(x) - (-x * x).exp() / z).abs() < 1e-14);
    }
}

#[test]
fn basis_invariance() {
    for n in [2usize, 4, 6, 8] {
        for x2 in [0.5, 1.0, 2.0] {
            let skew = build_context(n, CAPITAL, x2).unwrap();
            let mono = build_context(n, KernelBasis::Monomial, x2).unwrap();
            for &(x, y) in &[(0.1, -0.7), (1.3, 0.4), (-2.2, 2.0), (0.0, 3.0)] {
                for (l, r) in [
                    (KernelOp::Identity, KernelOp::Identity),
                    (KernelOp::Identity, KernelOp::Eps1),
                    (KernelOp::Eps1, KernelOp::Eps1),
                    (KernelOp::Eps2, KernelOp::Eps1),
                ] {
                    let a = skew.kappa_eps(x, y, l, r);
                    let b = mono.kappa_eps(x, y, l, r);
                    assert!((a - b).abs() <= 1e-7 * a.abs().max(1e-3), "N={n} X={x2} ({x},{y}) {l:?} {r:?}: {a} vs {b}");
                }
            }
        }
    }
}

#[test]
fn family_kind_does_not_matter() {
    let a = build_context(10, CAPITAL, 1.0).unwrap();
    let b = build_context(10, MONIC, 1.0).unwrap();
    for x in [-3.0, -0.5, 0.0, 1.7] {
        for sp in [Species::One, Species::Two] {
            let (u, v) = (a.density(sp, x), b.density(sp, x));
            assert!((u - v).abs() < 1e-10 * u.abs().max(1e-6));
        }
    }
}

#[test]
fn moment_closure() {
    for n in [2usize, 4, 8, 16] {
        let law = population_law(n).unwrap();
        let ctx = build_context(n, CAPITAL, 1.0).unwrap();
        let l = density_mass(&ctx, Species::One).unwrap();
        let m = density_mass(&ctx, Species::Two).unwrap();
        assert!((l / law.mean_l() - 1.0).abs() < 1e-6, "N={n}: {l}");
        assert!((m / law.mean_m() - 1.0).abs() < 1e-6, "N={n}: {m}");
    }
}

#[test]
fn moment_closure_away_from_unit_fugacity() {
    // E_X(L) = X d/dX ln Z(X), and L + 2M = N
    let h = 1e-4;
    for n in [4usize, 10] {
        for x2 in [0.5, 2.0] {
            let lnz = |u: f64| partition_function(n, x2 * u.exp()).unwrap().ln_product;
            let mean_l = (lnz(h) - lnz(-h)) / (2.0 * h);
            let ctx = build_context(n, CAPITAL, x2).unwrap();
            let l = density_mass(&ctx, Species::One).unwrap();
            let m = density_mass(&ctx, Species::Two).unwrap();
            assert!((l / mean_l - 1.0).abs() < 1e-6, "N={n} X={x2}: {l} vs {mean_l}");
            assert!((l + 2.0 * m - n as f64).abs() < 1e-6);
        }
    }
}

#[test]
fn diagonal_reduction_and_symmetries() {
    let ctx = build_context(6, CAPITAL, 1.0).unwrap();
    for x in [-2.5, -0.3, 0.0, 0.8, 2.1] {
        assert!((ctx.correlation(&[x], &[]).unwrap() - ctx.density_charge1(x)).abs() < 1e-14);
        assert!((ctx.correlation(&[], &[x]).unwrap() - ctx.density_charge2(x)).abs() < 1e-14);
        assert!(ctx.kappa(x, x).abs() < 1e-15);
        for y in [-1.0, 0.6] {
            let l = ctx.kappa_eps(x, y, KernelOp::Eps1, KernelOp::Identity);
            let r = ctx.kappa_eps(y, x, KernelOp::Identity, KernelOp::Eps1);
            assert!((l + r).abs() < 1e-14);
        }
        for sp in [Species::One, Species::Two] {
            let (a, b) = (ctx.scaled_density(sp, x / 2.0), ctx.scaled_density(sp, -x / 2.0));
            assert!((a - b).abs() < 1e-13);
        }
    }
    assert!(ctx.correlation(&[0.4, 0.4], &[]).unwrap().abs() < 1e-15);
    assert!(ctx.correlation(&[], &[]).is_err());
}

#[test]
fn matches_direct_integrals_at_two() {
    for (xs, ys) in [
        (vec![0.7], vec![]),
        (vec![], vec![-0.4]),
        (vec![0.2, -1.1], vec![]),
        (vec![], vec![]),
    ] {
        if xs.is_empty() && ys.is_empty() {
            continue;
        }
        let ctx = build_context(2, CAPITAL, 1.5).unwrap();
        let k = ctx.correlation(&xs, &ys).unwrap();
        let b = brute_force_correlation(2, 1.5, &xs, &ys).unwrap();
        assert!((k - b).abs() <= 1e-8 * b.abs().max(1e-12), "{xs:?} {ys:?}: {k} vs {b}");
    }
}

#[test]
fn two_point_functions_are_nonnegative() {
    let ctx = build_context(12, CAPITAL, 1.0).unwrap();
    for i in 0..20 {
        let x = -3.0 + 0.31 * i as f64;
        for y in [-2.0, 0.05, 1.9] {
            assert!(ctx.correlation(&[x, y], &[]).unwrap() >= 0.0);
            assert!(ctx.correlation(&[x], &[y]).unwrap() >= 0.0);
            assert!(ctx.correlation(&[], &[x, y]).unwrap() >= 0.0);
        }
    }
    assert_eq!(ctx.clipped_count(), 0);
}

#[test]
fn context_limits() {
    assert!(build_context(3, CAPITAL, 1.0).is_err());
    assert!(build_context(0, CAPITAL, 1.0).is_err());
    assert!(build_context(MAX_N + 2, CAPITAL, 1.0).is_err());
    assert!(build_context(MONOMIAL_MAX_N + 2, KernelBasis::Monomial, 1.0).is_err());
    assert!(build_context(MAX_N, CAPITAL, 1.0).is_ok());
}
