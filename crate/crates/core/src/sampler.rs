//! Monte Carlo sampling: the population `(L, M)` is drawn exactly from its
//! law, then positions come from a random-walk Metropolis chain for that sector.

use crate::ensemble::PopulationLaw;
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

/// Positions of the charge-1 (`alpha`) and charge-2 (`beta`) particles.
#[derive(Clone, Debug, PartialEq)]
pub struct ParticleState {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
}

impl ParticleState {
    pub fn charge(&self) -> usize {
        self.alpha.len() + 2 * self.beta.len()
    }

    /// Evenly spread, species interleaved, on `[-sqrt N, sqrt N]`.
    pub fn spread(l: usize, m: usize) -> Self {
        let total = l + m;
        let half = ((l + 2 * m) as f64).sqrt().max(1.0);
        let mut alpha = Vec::with_capacity(l);
        let mut beta = Vec::with_capacity(m);
        for i in 0..total {
            let x = -half + 2.0 * half * (i as f64 + 0.5) / total as f64;
            if (i % 2 == 0 && alpha.len() < l) || beta.len() == m {
                alpha.push(x);
            } else {
                beta.push(x);
            }
        }
        ParticleState { alpha, beta }
    }
}

/// `ln` of the sector density up to its normalization:
/// `sum ln|a_j - a_k| + 4 sum ln|b_m - b_n| + 2 sum ln|a - b| - sum a^2/2 - sum b^2`.
/// Coincident points give `-inf`. Each species is summed in sorted order so
/// the value is exactly invariant under relabelling.
pub fn log_boltzmann(state: &ParticleState) -> f64 {
    let mut a = state.alpha.clone();
    let mut b = state.beta.clone();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let mut v = 0.0;
    for (i, &x) in a.iter().enumerate() {
        v -= 0.5 * x * x;
        for &y in &a[i + 1..] {
            v += (x - y).abs().ln();
        }
        for &y in &b {
            v += 2.0 * (x - y).abs().ln();
        }
    }
    for (i, &x) in b.iter().enumerate() {
        v -= x * x;
        for &y in &b[i + 1..] {
            v += 4.0 * (x - y).abs().ln();
        }
    }
    v
}

/// Terms of [`log_boltzmann`] that involve particle `idx` of the given species at position `x`.
fn local_energy(state: &ParticleState, species_one: bool, idx: usize, x: f64) -> f64 {
    let (a, b) = (&state.alpha, &state.beta);
    if species_one {
        let mut v = -0.5 * x * x;
        for (j, &y) in a.iter().enumerate() {
            if j != idx {
                v += (x - y).abs().ln();
            }
        }
        for &y in b {
            v += 2.0 * (x - y).abs().ln();
        }
        v
    } else {
        let mut v = -x * x;
        for &y in a {
            v += 2.0 * (x - y).abs().ln();
        }
        for (j, &y) in b.iter().enumerate() {
            if j != idx {
                v += 4.0 * (x - y).abs().ln();
            }
        }
        v
    }
}

/// Metropolis rule: accept when `ln u < log_ratio`, with `u` uniform on (0, 1).
pub fn metropolis_accept(log_ratio: f64, u: f64) -> bool {
    if log_ratio.is_nan() {
        return false;
    }
    log_ratio >= 0.0 || u.ln() < log_ratio
}

/// Inverse-CDF draw of `(L, M)`.
pub fn sample_population<R: Rng + ?Sized>(law: &PopulationLaw, rng: &mut R) -> (usize, usize) {
    population_from_uniform(law, rng.random::<f64>())
}

/// The `(L, M)` whose CDF interval (entries by decreasing `L`) contains `u`.
pub fn population_from_uniform(law: &PopulationLaw, u: f64) -> (usize, usize) {
    let mut acc = 0.0;
    for e in law.entries() {
        acc += e.prob;
        if u < acc {
            return (e.l, e.m);
        }
    }
    let last = law.entries().last().expect("law has at least one entry");
    (last.l, last.m)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainConfig {
    pub seed: u64,
    /// Sweeps discarded when a sector chain starts.
    pub burn_in: usize,
    /// Sweeps between kept samples.
    pub thinning: usize,
    /// Initial single-site proposal width; `None` means `0.5 / sqrt N`.
    pub proposal_scale: Option<f64>,
    pub chain_count: usize,
    /// Proposals used to tune the width toward [`TARGET_ACCEPTANCE`] at the start of burn-in.
    pub adapt_steps: usize,
}

impl Default for ChainConfig {
    fn default() -> Self {
        ChainConfig {
            seed: 42,
            burn_in: 200,
            thinning: 5,
            proposal_scale: None,
            chain_count: 4,
            adapt_steps: 1000,
        }
    }
}

impl ChainConfig {
    fn validate(&self) -> Result<()> {
        if self.chain_count == 0 || self.thinning == 0 {
            return Err(Error::Domain("chain count and thinning must be positive".into()));
        }
        if let Some(s) = self.proposal_scale {
            if !(s > 0.0) || !s.is_finite() {
                return Err(Error::Domain(format!("proposal scale must be positive, got {s}")));
            }
        }
        Ok(())
    }

    fn initial_scale(&self, n: usize) -> f64 {
        self.proposal_scale.unwrap_or(0.5 / (n.max(1) as f64).sqrt())
    }

    /// Generator for chain `index`: one seed, independent streams.
    pub fn rng(&self, index: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index as u64);
        rng
    }
}

pub const TARGET_ACCEPTANCE: f64 = 0.3;

/// Acceptance rates outside this range draw a warning.
pub const ACCEPTANCE_RANGE: (f64, f64) = (0.1, 0.7);

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct AcceptanceStats {
    pub proposed: u64,
    pub accepted: u64,
}

impl AcceptanceStats {
    pub fn rate(&self) -> f64 {
        if self.proposed == 0 {
            0.0
        } else {
            self.accepted as f64 / self.proposed as f64
        }
    }

    pub fn merge(&mut self, other: &AcceptanceStats) {
        self.proposed += other.proposed;
        self.accepted += other.accepted;
    }
}

/// Single-site Gaussian random-walk Metropolis chain in one `(L, M)` sector.
#[derive(Clone, Debug)]
pub struct SectorChain {
    state: ParticleState,
    energy: f64,
    scale: f64,
    stats: AcceptanceStats,
}

impl SectorChain {
    /// Starts from [`ParticleState::spread`], adapts the width, then burns in.
    pub fn new<R: Rng + ?Sized>(l: usize, m: usize, config: &ChainConfig, rng: &mut R) -> Self {
        let state = ParticleState::spread(l, m);
        let energy = log_boltzmann(&state);
        let mut chain = SectorChain {
            state,
            energy,
            scale: config.initial_scale(l + 2 * m),
            stats: AcceptanceStats::default(),
        };
        chain.adapt(config.adapt_steps, rng);
        for _ in 0..config.burn_in {
            chain.sweep(rng);
        }
        chain.stats = AcceptanceStats::default();
        chain
    }

    fn particles(&self) -> usize {
        self.state.alpha.len() + self.state.beta.len()
    }

    fn propose<R: Rng + ?Sized>(&mut self, site: usize, rng: &mut R) -> bool {
        let l = self.state.alpha.len();
        let (one, idx) = if site < l { (true, site) } else { (false, site - l) };
        let old = if one { self.state.alpha[idx] } else { self.state.beta[idx] };
        let step: f64 = rng.sample(StandardNormal);
        let new = old + self.scale * step;
        let delta = local_energy(&self.state, one, idx, new) - local_energy(&self.state, one, idx, old);
        self.stats.proposed += 1;
        if metropolis_accept(delta, rng.random::<f64>()) {
            if one {
                self.state.alpha[idx] = new;
            } else {
                self.state.beta[idx] = new;
            }
            self.energy += delta;
            self.stats.accepted += 1;
            true
        } else {
            false
        }
    }

    /// One proposal per particle, in order.
    pub fn sweep<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        for site in 0..self.particles() {
            self.propose(site, rng);
        }
    }

    /// Multiplicative width tuning every 100 proposals.
    fn adapt<R: Rng + ?Sized>(&mut self, steps: usize, rng: &mut R) {
        let n = self.particles();
        if n == 0 {
            return;
        }
        let mut window = 0usize;
        let mut hits = 0usize;
        for k in 0..steps {
            if self.propose(k % n, rng) {
                hits += 1;
            }
            window += 1;
            if window == 100 {
                let rate = hits as f64 / window as f64;
                self.scale *= (rate - TARGET_ACCEPTANCE).exp();
                window = 0;
                hits = 0;
            }
        }
    }

    pub fn state(&self) -> &ParticleState {
        &self.state
    }

    pub fn log_density(&self) -> f64 {
        self.energy
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn stats(&self) -> AcceptanceStats {
        self.stats
    }

    /// Runs `thinning` sweeps and returns the new state.
    pub fn next_sample<R: Rng + ?Sized>(&mut self, thinning: usize, rng: &mut R) -> &ParticleState {
        for _ in 0..thinning {
            self.sweep(rng);
        }
        &self.state
    }
}

fn warn_acceptance(stats: &AcceptanceStats, what: &str) {
    let r = stats.rate();
    if stats.proposed > 0 && (r < ACCEPTANCE_RANGE.0 || r > ACCEPTANCE_RANGE.1) {
        log::warn!("acceptance rate {r:.3} for {what} is outside [{}, {}]", ACCEPTANCE_RANGE.0, ACCEPTANCE_RANGE.1);
    }
}

/// `count` thinned position samples from one chain in the `(L, M)` sector.
pub fn sample_positions(
    l: usize,
    m: usize,
    config: &ChainConfig,
    count: usize,
) -> Result<(Vec<ParticleState>, AcceptanceStats)> {
    config.validate()?;
    if l + m == 0 {
        return Err(Error::Domain("sector has no particles".into()));
    }
    let mut rng = config.rng(0);
    let mut chain = SectorChain::new(l, m, config, &mut rng);
    let samples = (0..count)
        .map(|_| chain.next_sample(config.thinning, &mut rng).clone())
        .collect();
    warn_acceptance(&chain.stats(), &format!("sector ({l}, {m})"));
    Ok((samples, chain.stats()))
}

/// Equal-width bins on `[lo, hi)`; values outside are tallied separately.
#[derive(Clone, Debug, PartialEq)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u64>,
    pub outside: u64,
}

impl Histogram {
    pub fn new(lo: f64, hi: f64, bins: usize) -> Result<Self> {
        if !(lo < hi) || bins == 0 {
            return Err(Error::Domain(format!("bad histogram range [{lo}, {hi}) with {bins} bins")));
        }
        Ok(Histogram {
            lo,
            hi,
            counts: vec![0; bins],
            outside: 0,
        })
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn width(&self) -> f64 {
        (self.hi - self.lo) / self.bins() as f64
    }

    pub fn edges(&self, bin: usize) -> (f64, f64) {
        let w = self.width();
        (self.lo + bin as f64 * w, self.lo + (bin + 1) as f64 * w)
    }

    pub fn add(&mut self, x: f64) {
        if x >= self.lo && x < self.hi {
            let b = (((x - self.lo) / self.width()) as usize).min(self.bins() - 1);
            self.counts[b] += 1;
        } else {
            self.outside += 1;
        }
    }

    pub fn merge(&mut self, other: &Histogram) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.outside += other.outside;
    }
}

/// Running sum and sum of squares of a per-sample count.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CountMoments {
    pub samples: u64,
    pub sum: f64,
    pub sum_sq: f64,
}

impl CountMoments {
    pub fn add(&mut self, v: f64) {
        self.samples += 1;
        self.sum += v;
        self.sum_sq += v * v;
    }

    pub fn merge(&mut self, o: &CountMoments) {
        self.samples += o.samples;
        self.sum += o.sum;
        self.sum_sq += o.sum_sq;
    }

    pub fn mean(&self) -> f64 {
        self.sum / self.samples as f64
    }

    /// Standard error of the mean, treating samples as independent.
    pub fn std_error(&self) -> f64 {
        let n = self.samples as f64;
        let var = (self.sum_sq / n - self.mean().powi(2)).max(0.0);
        (var / n).sqrt()
    }
}

/// Tallies pooled over all chains.
#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleRun {
    pub n: usize,
    pub samples: u64,
    /// Draws of each population, indexed by `M`.
    pub population_counts: Vec<u64>,
    pub charge1: Histogram,
    pub charge2: Histogram,
    /// Number of charge-1 and charge-2 particles per sample inside `window`.
    pub window: (f64, f64),
    pub window_charge1: CountMoments,
    pub window_charge2: CountMoments,
    pub acceptance: AcceptanceStats,
    pub per_chain_acceptance: Vec<AcceptanceStats>,
}

/// Grand-ensemble sampling: each kept sample draws `(L, M)` exactly, then
/// advances that sector's persistent chain by `thinning` sweeps. Chains run in
/// parallel and are merged in index order, so results depend only on the config.
pub fn run_ensemble(
    law: &PopulationLaw,
    config: &ChainConfig,
    steps_per_chain: usize,
    hist_range: (f64, f64, usize),
    window: (f64, f64),
) -> Result<EnsembleRun> {
    config.validate()?;
    let n = law.n();
    let (lo, hi, bins) = hist_range;
    let empty = EnsembleRun {
        n,
        samples: 0,
        population_counts: vec![0; law.entries().len()],
        charge1: Histogram::new(lo, hi, bins)?,
        charge2: Histogram::new(lo, hi, bins)?,
        window,
        window_charge1: CountMoments::default(),
        window_charge2: CountMoments::default(),
        acceptance: AcceptanceStats::default(),
        per_chain_acceptance: Vec::new(),
    };
    let runs: Vec<EnsembleRun> = (0..config.chain_count)
        .into_par_iter()
        .map(|c| {
            let mut rng = config.rng(c);
            let mut run = empty.clone();
            let mut chains: Vec<Option<SectorChain>> = vec![None; law.entries().len()];
            for _ in 0..steps_per_chain {
                let (l, m) = sample_population(law, &mut rng);
                let chain = chains[m].get_or_insert_with(|| SectorChain::new(l, m, config, &mut rng));
                let s = chain.next_sample(config.thinning, &mut rng);
                run.samples += 1;
                run.population_counts[m] += 1;
                let inside = |x: &f64| *x >= window.0 && *x <= window.1;
                run.window_charge1.add(s.alpha.iter().filter(|x| inside(x)).count() as f64);
                run.window_charge2.add(s.beta.iter().filter(|x| inside(x)).count() as f64);
                for &x in &s.alpha {
                    run.charge1.add(x);
                }
                for &x in &s.beta {
                    run.charge2.add(x);
                }
            }
            let mut acc = AcceptanceStats::default();
            for (m, ch) in chains.iter().enumerate() {
                if let Some(ch) = ch {
                    warn_acceptance(&ch.stats(), &format!("chain {c}, sector M = {m}"));
                    acc.merge(&ch.stats());
                }
            }
            run.acceptance = acc;
            run.per_chain_acceptance = vec![acc];
            run
        })
        .collect();
    let mut total = empty;
    for r in &runs {
        total.samples += r.samples;
        for (a, b) in total.population_counts.iter_mut().zip(&r.population_counts) {
            *a += b;
        }
        total.charge1.merge(&r.charge1);
        total.charge2.merge(&r.charge2);
        total.window_charge1.merge(&r.window_charge1);
        total.window_charge2.merge(&r.window_charge2);
        total.acceptance.merge(&r.acceptance);
        total.per_chain_acceptance.push(r.acceptance);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::population_law;

    #[test]
    fn boltzmann_examples() {
        let one = ParticleState { alpha: vec![], beta: vec![0.0] };
        assert_eq!(log_boltzmann(&one), 0.0);
        let pair = ParticleState { alpha: vec![0.0, 1.0], beta: vec![] };
        assert!((log_boltzmann(&pair) + 0.5).abs() < 1e-15);
        let clash = ParticleState { alpha: vec![0.3, 0.3], beta: vec![] };
        assert_eq!(log_boltzmann(&clash), f64::NEG_INFINITY);
    }

    #[test]
    fn local_energy_difference_matches_full() {
        let mut s = ParticleState::spread(3, 2);
        let before = log_boltzmann(&s);
        let d = local_energy(&s, false, 1, 0.77) - local_energy(&s, false, 1, s.beta[1]);
        s.beta[1] = 0.77;
        assert!((log_boltzmann(&s) - before - d).abs() < 1e-12);
    }

    #[test]
    fn population_inverse_cdf() {
        let law = population_law(2).unwrap();
        assert_eq!(population_from_uniform(&law, 0.5), (2, 0));
        assert_eq!(population_from_uniform(&law, 0.7), (0, 1));
    }

    #[test]
    fn spread_is_valid() {
        for (l, m) in [(0, 4), (8, 0), (2, 3), (4, 2)] {
            let s = ParticleState::spread(l, m);
            assert_eq!((s.alpha.len(), s.beta.len()), (l, m));
            assert!(log_boltzmann(&s).is_finite());
        }
    }
}
