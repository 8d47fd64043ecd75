use proptest::prelude::*;
use rand::Rng;
use twocharge::ensemble::population_law;
use twocharge::kernel::{build_context, KernelBasis};
use twocharge::quadrature::{integrate_interval, integrate_line, QuadratureSpec};
use twocharge::sampler::*;
use twocharge::skewpoly::FamilyKind;

/// Mean and batch-means standard error (50 batches), which absorbs chain autocorrelation.
fn batch_mean(xs: &[f64]) -> (f64, f64) {
    let nb = 50;
    let size = xs.len() / nb;
    let means: Vec<f64> = (0..nb)
        .map(|b| xs[b * size..(b + 1) * size].iter().sum::<f64>() / size as f64)
        .collect();
    let mu = means.iter().sum::<f64>() / nb as f64;
    let var = means.iter().map(|m| (m - mu).powi(2)).sum::<f64>() / (nb - 1) as f64;
    (mu, (var / nb as f64).sqrt())
}

#[test]
fn single_charge_two_particle_is_gaussian() {
    let config = ChainConfig { seed: 7, ..ChainConfig::default() };
    let (samples, stats) = sample_positions(0, 1, &config, 100_000).unwrap();
    let sq: Vec<f64> = samples.iter().map(|s| s.beta[0] * s.beta[0]).collect();
    let (var, se) = batch_mean(&sq);
    assert!((var - 0.5).abs() < 3.0 * se, "{var} +- {se}");
    let r = stats.rate();
    assert!(r > ACCEPTANCE_RANGE.0 && r < ACCEPTANCE_RANGE.1, "acceptance {r}");
}

#[test]
fn pair_separation_matches_quadrature() {
    let config = ChainConfig { seed: 11, ..ChainConfig::default() };
    let (samples, _) = sample_positions(2, 0, &config, 100_000).unwrap();
    let gaps: Vec<f64> = samples.iter().map(|s| (s.alpha[0] - s.alpha[1]).abs()).collect();
    let (mean, se) = batch_mean(&gaps);
    // E|a - b| = int int |a-b|^2 w w / int int |a-b| w w
    let spec = QuadratureSpec::default().tightened(10.0);
    let w = |x: f64| (-0.5 * x * x).exp();
    let moment = |p: i32| {
        integrate_line(
            |a| w(a) * integrate_interval(|b| (a - b).abs().powi(p) * w(b), -14.0, 14.0, &[a], &spec).unwrap().value,
            &spec,
        )
        .unwrap()
    };
    let want = moment(2) / moment(1);
    assert!((want - std::f64::consts::PI.sqrt()).abs() < 1e-9);
    assert!((mean - want).abs() < 3.0 * se, "{mean} +- {se} vs {want}");
}

#[test]
fn population_frequencies_at_four() {
    let law = population_law(4).unwrap();
    let mut rng = ChainConfig { seed: 3, ..ChainConfig::default() }.rng(0);
    let draws = 100_000;
    let mut counts = [0u64; 3];
    for _ in 0..draws {
        let (l, m) = sample_population(&law, &mut rng);
        assert_eq!(l + 2 * m, 4);
        counts[m] += 1;
    }
    for (m, &c) in counts.iter().enumerate() {
        let p = law.entries()[m].prob;
        let sd = (draws as f64 * p * (1.0 - p)).sqrt();
        assert!((c as f64 - draws as f64 * p).abs() < 3.0 * sd, "M={m}: {c}");
    }
}

#[test]
fn two_state_toy_chain_is_balanced() {
    // target pi(1)/pi(0) = e^{-0.7}; propose the other state each step
    let mut rng = ChainConfig { seed: 5, ..ChainConfig::default() }.rng(0);
    let log_pi = [0.0, -0.7];
    let mut state = 0usize;
    let mut trace = Vec::with_capacity(200_000);
    for _ in 0..200_000 {
        let next = 1 - state;
        if metropolis_accept(log_pi[next] - log_pi[state], rng.random::<f64>()) {
            state = next;
        }
        trace.push(state as f64);
    }
    let want = (-0.7f64).exp() / (1.0 + (-0.7f64).exp());
    let (got, se) = batch_mean(&trace);
    assert!((got - want).abs() < 3.0 * se, "{got} +- {se} vs {want}");
}

#[test]
fn acceptance_rule_edges() {
    assert!(metropolis_accept(0.0, 0.999));
    assert!(metropolis_accept(0.5, 0.999));
    assert!(!metropolis_accept(f64::NEG_INFINITY, 1e-300));
    assert!(!metropolis_accept(f64::NAN, 0.1));
    assert!(metropolis_accept(-1.0, 0.3));
    assert!(!metropolis_accept(-1.0, 0.4));
}

proptest! {
    #[test]
    fn boltzmann_is_permutation_invariant(
        alpha in prop::collection::vec(-3.0f64..3.0, 0..6),
        beta in prop::collection::vec(-3.0f64..3.0, 0..5),
        shift in 0usize..6,
    ) {
        let s = ParticleState { alpha: alpha.clone(), beta: beta.clone() };
        let mut a = alpha;
        let mut b = beta;
        a.reverse();
        if !b.is_empty() {
            let k = shift % b.len();
            b.rotate_left(k);
        }
        let t = ParticleState { alpha: a, beta: b };
        let (x, y) = (log_boltzmann(&s), log_boltzmann(&t));
        prop_assert!(x == y || (x.is_nan() && y.is_nan()));
    }
}

#[test]
fn window_counts_match_integrated_density() {
    let n = 8;
    let law = population_law(n).unwrap();
    let config = ChainConfig { seed: 42, ..ChainConfig::default() };
    let run = run_ensemble(&law, &config, 25_000, (-4.0, 4.0, 20), (-1.0, 1.0)).unwrap();
    let ctx = build_context(n, KernelBasis::Skew(FamilyKind::Capital), 1.0).unwrap();
    let spec = QuadratureSpec::default().tightened(10.0);
    let exact1 = integrate_interval(|x| ctx.density_charge1(x), -1.0, 1.0, &[], &spec).unwrap().value;
    let exact2 = integrate_interval(|x| ctx.density_charge2(x), -1.0, 1.0, &[], &spec).unwrap().value;
    let (m1, m2) = (run.window_charge1, run.window_charge2);
    assert!((m1.mean() - exact1).abs() < 3.0 * m1.std_error(), "{} +- {} vs {exact1}", m1.mean(), m1.std_error());
    assert!((m2.mean() - exact2).abs() < 3.0 * m2.std_error(), "{} +- {} vs {exact2}", m2.mean(), m2.std_error());
    assert_eq!(run.samples, 100_000);
    assert_eq!(run.per_chain_acceptance.len(), 4);
}

#[test]
fn runs_are_deterministic() {
    let law = population_law(6).unwrap();
    let config = ChainConfig { seed: 9, chain_count: 3, ..ChainConfig::default() };
    let a = run_ensemble(&law, &config, 2_000, (-3.0, 3.0, 12), (-0.5, 0.5)).unwrap();
    let b = run_ensemble(&law, &config, 2_000, (-3.0, 3.0, 12), (-0.5, 0.5)).unwrap();
    assert_eq!(a, b);
    let other = ChainConfig { seed: 10, ..config };
    assert_ne!(a, run_ensemble(&law, &other, 2_000, (-3.0, 3.0, 12), (-0.5, 0.5)).unwrap());
}

#[test]
fn config_validation() {
    let law = population_law(4).unwrap();
    let bad = ChainConfig { chain_count: 0, ..ChainConfig::default() };
    assert!(run_ensemble(&law, &bad, 10, (-1.0, 1.0, 4), (0.0, 1.0)).is_err());
    let bad = ChainConfig { proposal_scale: Some(-1.0), ..ChainConfig::default() };
    assert!(sample_positions(2, 1, &bad, 10).is_err());
    assert!(Histogram::new(1.0, 1.0, 3).is_err());
}
