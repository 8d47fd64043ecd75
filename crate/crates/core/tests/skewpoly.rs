use std::f64::consts::PI;
use twocharge::psi::PsiSeries;
use twocharge::quadrature::QuadratureSpec;
use twocharge::skewpoly::*;
use twocharge::specfun::{laguerre, laguerre_all, ln_gamma, ln_hermite_norm};

const FUGACITIES: [f64; 3] = [0.0, 1.0, 2.0];

fn grid() -> impl Iterator<Item = f64> {
    (0..=40).map(|i| -5.0 + 0.25 * i as f64)
}

#[test]
fn capital_ladder() {
    for x2 in FUGACITIES {
        let fam = build_family(7, x2, FamilyKind::Capital).unwrap();
        for n in 0..=6 {
            let even = fam.member(2 * n).unwrap();
            let odd = fam.member(2 * n + 1).unwrap();
            let d = even.derivative();
            for x in grid() {
                assert!((d.eval(x) + 0.5 * odd.eval(x)).abs() < 1e-9);
                assert!((odd.epsilon1(x) - 2.0 * even.eval(x)).abs() < 1e-9 * even.coeffs.iter().map(|c| c.abs()).fold(1.0, f64::max));
            }
        }
    }
}

#[test]
fn monic_ladder() {
    for x2 in FUGACITIES {
        let fam = build_family(7, x2, FamilyKind::Monic).unwrap();
        for n in 0..=6 {
            let even = fam.member(2 * n).unwrap();
            let odd = fam.member(2 * n + 1).unwrap();
            let scale = even.coeffs.iter().map(|c| c.abs()).fold(1.0, f64::max);
            for x in grid() {
                assert!((even.derivative().eval(x) + odd.eval(x)).abs() < 1e-9 * scale);
                assert!((odd.epsilon1(x) - even.eval(x)).abs() < 1e-9 * scale);
            }
        }
    }
}

#[test]
fn monic_members_are_monic() {
    // leading psi coefficient of x^n e^{-x^2/2} is pi^{1/4} sqrt(n!/2^n)
    let fam = build_family(5, 1.0, FamilyKind::Monic).unwrap();
    for n in 0..10usize {
        let p = fam.member(n).unwrap();
        let lead = PsiSeries::monomial(n).coeff(n);
        assert!((p.coeff(n) / lead - 1.0).abs() < 1e-12, "n = {n}");
    }
}

#[test]
fn rescaled_coefficient_recurrence() {
    // b_k = L_k^{-1/2}(-X^2): (k+1) b_{k+1} = (2k + 1/2 + X^2) b_k - (k - 1/2) b_{k-1}
    for x2 in FUGACITIES {
        let s = x2 * x2;
        let b = laguerre_all(11, -0.5, -s);
        for k in 1..=10usize {
            let kf = k as f64;
            let lhs = (kf + 1.0) * b[k + 1];
            let rhs = (2.0 * kf + 0.5 + s) * b[k] - (kf - 0.5) * b[k - 1];
            assert!((lhs - rhs).abs() < 1e-10 * lhs.abs().max(1.0));
        }
    }
}

#[test]
fn printed_recurrence_fails_at_k1() {
    // -(k+1) b_{k+1} + (2k + 1/2 - X^2) b_k - (k + 1/2) b_{k-1} at k = 1, X = 1
    let b = laguerre_all(2, -0.5, -1.0);
    let v = -2.0 * b[2] + (2.5 - 1.0) * b[1] - 1.5 * b[0];
    assert!((v + 4.0).abs() < 1e-12);
}

#[test]
fn coefficients_match_laguerre_sum() {
    // capital P_2m(x) = sum_k a_k H_2k(x) with a_k = k!/(2k)! L_k(-X^2)
    for x2 in FUGACITIES {
        let fam = build_family(6, x2, FamilyKind::Capital).unwrap();
        for m in 0..6usize {
            let p = fam.member(2 * m).unwrap();
            for k in 0..=m {
                let kf = k as f64;
                let a = (ln_gamma(kf + 1.0).unwrap() - ln_gamma(2.0 * kf + 1.0).unwrap()).exp()
                    * laguerre(k, -0.5, -x2 * x2);
                let want = a * (0.5 * ln_hermite_norm(2 * k)).exp();
                assert!((p.coeff(2 * k) - want).abs() < 1e-12 * want.abs().max(1.0));
                assert_eq!(p.coeff(2 * k + 1), 0.0);
            }
        }
    }
}

#[test]
fn even_laguerre_form() {
    for x2 in FUGACITIES {
        let fam = build_family(6, x2, FamilyKind::Capital).unwrap();
        for m in 0..6usize {
            for x in [-2.3, -0.4, 0.0, 0.9, 3.1] {
                let w = (-x * x / 2.0f64).exp();
                let got = fam.eval_tilde(2 * m, x).unwrap() / w;
                let want = capital_even_laguerre_form(m, x2, x);
                assert!((got - want).abs() < 1e-9 * want.abs().max(1.0), "m={m} X={x2} x={x}");
            }
        }
    }
}

#[test]
fn odd_alternate_form_with_corrected_sign() {
    for x2 in [0.5, 1.0, 1.5] {
        let fam = build_family(6, x2, FamilyKind::Capital).unwrap();
        for j in 0..=5usize {
            let mut printed_gap: f64 = 0.0;
            for x in [-1.7, -0.6, 0.3, 1.2, 2.4] {
                let w = (-x * x / 2.0f64).exp();
                let got = fam.eval_tilde(2 * j + 1, x).unwrap() / w;
                let fixed = capital_odd_laguerre_form(j, x2, x, -1.0);
                assert!((got - fixed).abs() < 1e-9 * got.abs().max(1.0), "j={j} X={x2} x={x}");
                printed_gap = printed_gap.max((got - capital_odd_laguerre_form(j, x2, x, 1.0)).abs());
            }
            if j > 0 {
                assert!(printed_gap > 1e-3, "the printed sign should differ for j = {j}");
            }
        }
    }
}

#[test]
fn hermite_skew_4_pairing() {
    // <H_2m, H_2n+1>_4 = h_{2n+1} [m = n] - h_{2n+2} [m = n + 1]
    for m in 0..6usize {
        for n in 0..6usize {
            let v = skew_inner_4(&PsiSeries::hermite(2 * m), &PsiSeries::hermite(2 * n + 1));
            let mut want = 0.0;
            if m == n {
                want += ln_hermite_norm(2 * n + 1).exp();
            }
            if m == n + 1 {
                want -= ln_hermite_norm(2 * n + 2).exp();
            }
            assert!((v - want).abs() < 1e-10 * want.abs().max(1.0), "m={m} n={n}: {v} vs {want}");
        }
    }
}

#[test]
fn normalization_adjudication() {
    let sp = PI.sqrt();
    let cap = build_family(1, 1.0, FamilyKind::Capital).unwrap();
    let spec = QuadratureSpec::default().tightened(10.0);
    let measured = skew_inner_x(cap.member(0).unwrap(), cap.member(1).unwrap(), 1.0, &spec).unwrap();
    assert!((measured / (6.0 * sp) - 1.0).abs() < 1e-8);
    assert!((capital_norm(0, 1.0).unwrap() / (6.0 * sp) - 1.0).abs() < 1e-14);
    let monic = build_family(1, 1.0, FamilyKind::Monic).unwrap();
    let r0 = skew_inner_x(monic.member(0).unwrap(), monic.member(1).unwrap(), 1.0, &spec).unwrap();
    assert!((r0 / (3.0 * sp) - 1.0).abs() < 1e-8);
    for j in 0..8usize {
        let jf = j as f64;
        let ratio = (laguerre(j + 1, -0.5, -1.0) / laguerre(j, -0.5, -1.0)).ln();
        let alternate = (4f64.ln() + ln_gamma(jf + 2.0).unwrap() + ln_gamma(jf + 0.5).unwrap()
            - ln_gamma(jf + 1.0).unwrap()
            + ratio)
            .exp();
        let measured = build_family(j + 1, 1.0, FamilyKind::Monic).unwrap().r_measured()[j];
        let fact = ln_gamma(jf + 1.0).unwrap().exp();
        assert!((measured / monic_norm(j, 1.0).unwrap() - 1.0).abs() < 1e-8);
        assert!((measured / alternate - fact / 2.0).abs() < 1e-6 * fact);
    }
}

#[test]
fn residuals_small_through_degree_16() {
    for x2 in FUGACITIES {
        for kind in [FamilyKind::Capital, FamilyKind::Monic] {
            let fam = build_family(8, x2, kind).unwrap();
            assert!(fam.max_residual() <= 1e-8);
            let spec = QuadratureSpec::default().tightened(10.0);
            // independent check of a few entries by adaptive quadrature
            let r = fam.r_closed();
            for (a, b) in [(0usize, 1usize), (2, 5), (6, 7), (3, 12), (14, 15)] {
                let v = skew_inner_x(fam.member(a).unwrap(), fam.member(b).unwrap(), x2, &spec).unwrap();
                let want = if a % 2 == 0 && b == a + 1 { r[a / 2] } else { 0.0 };
                let scale = 1f64.max(r[a / 2]).max(r[b / 2]);
                assert!((v - want).abs() <= 1e-8 * scale, "{kind:?} X={x2} ({a},{b}): {v} vs {want}");
            }
        }
    }
}

#[test]
fn large_families_build() {
    for kind in [FamilyKind::Capital, FamilyKind::Monic] {
        let fam = build_family(64, 1.0, kind).unwrap();
        assert!(fam.max_residual() < 1e-9);
    }
}

#[test]
fn telescoping_ratio() {
    for j in [1usize, 2, 5, 12, 40] {
        for x2 in [0.0, 0.5, 2.0] {
            let mut acc = 0.0;
            for i in 0..j {
                acc += ln_monic_norm(i, x2).unwrap() - ln_monic_norm(i, 1.0).unwrap();
            }
            let want = (laguerre(j, -0.5, -x2 * x2) / laguerre(j, -0.5, -1.0)).ln();
            assert!((acc - want).abs() < 1e-11 * want.abs().max(1.0));
            let mut cap = 0.0;
            for i in 0..j {
                cap += ln_capital_norm(i, x2).unwrap() - ln_capital_norm(i, 1.0).unwrap();
            }
            // capital constants carry L_i L_{i+1}, so only the X-independent factors cancel
            let l = |k: usize, s: f64| laguerre(k, -0.5, -s * s).ln();
            let want_cap: f64 = (0..j).map(|i| l(i, x2) + l(i + 1, x2) - l(i, 1.0) - l(i + 1, 1.0)).sum();
            assert!((cap - want_cap).abs() < 1e-11 * want_cap.abs().max(1.0));
        }
    }
}

#[test]
fn gram_matches_adaptive_quadrature() {
    let gram = SkewGram::new(12);
    let spec = QuadratureSpec::default().tightened(10.0);
    for (m, n) in [(0usize, 1usize), (2, 7), (5, 10), (11, 12), (3, 3)] {
        let a = PsiSeries::basis(m);
        let b = PsiSeries::basis(n);
        let adaptive = skew_inner_1(&a, &b, &spec).unwrap();
        assert!((gram.form_1(&a, &b) - adaptive).abs() < 1e-12);
        assert_eq!(gram.form_4(&a, &b), skew_inner_4(&a, &b));
    }
}

#[test]
fn bad_inputs() {
    assert!(build_family(0, 1.0, FamilyKind::Monic).is_err());
    assert!(build_family(2, -1.0, FamilyKind::Monic).is_err());
    assert!(build_family(2, f64::NAN, FamilyKind::Monic).is_err());
    let small = SkewGram::new(3);
    assert!(build_family_with(2, 1.0, FamilyKind::Monic, &small).is_err());
    let fam = build_family(2, 1.0, FamilyKind::Monic).unwrap();
    assert!(fam.member(4).is_err());
}
