//! Population statistics, partition functions and brute-force oracles.
//!
//! The grand partition function is `Z(X) = sum_{L+2M=N} X^L Z_{L,M}` with
//! `Z_{L,M} = 1/(L! M!) int Omega`, where for weight `w`
//! `Omega = prod w(a) prod w(b)^2 prod|a_j - a_k| prod|b_m - b_n|^4 prod|a - b|^2`.

use crate::error::{Error, Result};
use crate::kernel::{KernelContext, Species};
use crate::linalg::{pfaffian, SkewMatrix};
use crate::quadrature::{epsilon1_numeric, integrate_interval, integrate_interval_try, integrate_line, QuadratureSpec};
use crate::skewpoly::{build_family, ln_monic_norm, skew_inner_1, skew_inner_4, FamilyKind};
use crate::specfun::{bessel_j, laguerre_log, lgamma};
use std::f64::consts::{PI, SQRT_2};

/// Largest `N` accepted by [`population_law`].
pub const POPULATION_MAX_N: usize = 100_000;

/// Largest `N` for the Pfaffian route of [`partition_function`].
pub const PFAFFIAN_ROUTE_MAX_N: usize = 16;

/// Largest `N` for the brute-force sector oracles.
pub const BRUTE_FORCE_MAX_N: usize = 4;

/// Neumaier compensated sum.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    sum + c
}

fn check_even_n(n: usize) -> Result<usize> {
    if n == 0 || n % 2 == 1 {
        return Err(Error::Domain(format!("total charge N must be even and positive, got {n}")));
    }
    Ok(n / 2)
}

/// One population vector with its probability.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PopulationEntry {
    pub l: usize,
    pub m: usize,
    pub prob: f64,
    /// `ln(2^L / (L! M!))`.
    pub ln_weight: f64,
}

/// Exact law of `(L, M)` at fugacity 1.
#[derive(Clone, Debug)]
pub struct PopulationLaw {
    n: usize,
    entries: Vec<PopulationEntry>,
    ln_norm: f64,
    mean_l: f64,
    var_l: f64,
}

/// `Prob(L, M) = [2^L/(L! M!)] / sum_{l+2m=N} 2^l/(l! m!)` for even `L`.
pub fn population_law(n: usize) -> Result<PopulationLaw> {
    let j = check_even_n(n)?;
    if n > POPULATION_MAX_N {
        return Err(Error::Domain(format!("N = {n} exceeds {POPULATION_MAX_N}")));
    }
    let mut entries: Vec<PopulationEntry> = (0..=j)
        .map(|m| {
            let l = n - 2 * m;
            PopulationEntry {
                l,
                m,
                prob: 0.0,
                ln_weight: l as f64 * 2f64.ln() - lgamma(l as f64 + 1.0) - lgamma(m as f64 + 1.0),
            }
        })
        .collect();
    // Weights relative to the mode via w_{m+1}/w_m = L(L-1)/(4(m+1)), so the
    // large lgamma values never enter the probabilities.
    let mode = (0..=j)
        .max_by(|&a, &b| entries[a].ln_weight.total_cmp(&entries[b].ln_weight))
        .unwrap_or(0);
    let ln_ratio = |m: usize| {
        let l = (n - 2 * m) as f64;
        (l * (l - 1.0)).ln() - (4.0 * (m as f64 + 1.0)).ln()
    };
    let mut rel = vec![0.0; j + 1];
    for m in mode + 1..=j {
        rel[m] = rel[m - 1] + ln_ratio(m - 1);
    }
    for m in (0..mode).rev() {
        rel[m] = rel[m + 1] - ln_ratio(m);
    }
    let scaled = compensated_sum(rel.iter().map(|r| r.exp()));
    let ln_norm = entries[mode].ln_weight + scaled.ln();
    for (e, r) in entries.iter_mut().zip(&rel) {
        e.prob = r.exp() / scaled;
    }
    let mean_l = mean_closed_form(j)?;
    let var_l = 4.0 * j as f64 - mean_l - mean_l * mean_l;
    Ok(PopulationLaw {
        n,
        entries,
        ln_norm,
        mean_l,
        var_l,
    })
}

/// `E(L) = 2 L^{1/2}_{J-1}(-1) / L^{-1/2}_J(-1)`.
fn mean_closed_form(j: usize) -> Result<f64> {
    let num = laguerre_log(j - 1, 0.5, -1.0)?;
    let den = laguerre_log(j, -0.5, -1.0)?;
    Ok(2.0 * num.div(den).value())
}

impl PopulationLaw {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Entries ordered by decreasing `L`.
    pub fn entries(&self) -> &[PopulationEntry] {
        &self.entries
    }

    /// `ln sum 2^l/(l! m!)`.
    pub fn ln_norm(&self) -> f64 {
        self.ln_norm
    }

    pub fn mean_l(&self) -> f64 {
        self.mean_l
    }

    pub fn var_l(&self) -> f64 {
        self.var_l
    }

    pub fn mean_m(&self) -> f64 {
        (self.n as f64 - self.mean_l) / 2.0
    }

    /// `Prob(L, M)`; zero off the support.
    pub fn prob(&self, l: usize, m: usize) -> f64 {
        if l + 2 * m != self.n || l % 2 == 1 {
            return 0.0;
        }
        self.entries[m].prob
    }

    /// Probability that `L = l`.
    pub fn prob_l(&self, l: usize) -> f64 {
        if l > self.n || (self.n - l) % 2 == 1 {
            return 0.0;
        }
        self.prob(l, (self.n - l) / 2)
    }

    pub fn mean_from_pmf(&self) -> f64 {
        compensated_sum(self.entries.iter().map(|e| e.l as f64 * e.prob))
    }

    pub fn var_from_pmf(&self) -> f64 {
        let mu = self.mean_from_pmf();
        compensated_sum(self.entries.iter().map(|e| (e.l as f64 - mu).powi(2) * e.prob))
    }

    /// `sum_L Prob(L) X^L`.
    pub fn generating(&self, fugacity: f64) -> f64 {
        if fugacity == 0.0 {
            return self.prob_l(0);
        }
        compensated_sum(
            self.entries
                .iter()
                .map(|e| (e.prob.ln() + e.l as f64 * fugacity.ln()).exp()),
        )
    }
}

/// The two independent evaluations of `Z(X)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PartitionFunction {
    /// `ln prod_j r_j^{(X)}` from the closed-form monic normalizations.
    pub ln_product: f64,
    /// `Pf(X^2 A + B)` over the monic family with quadrature-assembled forms (small `N` only).
    pub pfaffian: Option<f64>,
}

impl PartitionFunction {
    pub fn product(&self) -> f64 {
        self.ln_product.exp()
    }
}

pub fn partition_function(n: usize, fugacity: f64) -> Result<PartitionFunction> {
    let j = check_even_n(n)?;
    let ln_product = compensated_sum(
        (0..j)
            .map(|i| ln_monic_norm(i, fugacity))
            .collect::<Result<Vec<_>>>()?,
    );
    let pfaffian = if n <= PFAFFIAN_ROUTE_MAX_N {
        Some(pfaffian_route_monic(n, fugacity)?)
    } else {
        None
    };
    Ok(PartitionFunction {
        ln_product,
        pfaffian,
    })
}

fn pfaffian_route_monic(n: usize, fugacity: f64) -> Result<f64> {
    let fam = build_family(n / 2, fugacity, FamilyKind::Monic)?;
    let spec = QuadratureSpec::for_degree(n);
    let p = fam.members();
    let mut c = SkewMatrix::zeros(n);
    for a in 0..n {
        for b in a + 1..n {
            let one = if fugacity == 0.0 {
                0.0
            } else {
                skew_inner_1(&p[a], &p[b], &spec)?
            };
            c.set(a, b, fugacity * fugacity * one + skew_inner_4(&p[a], &p[b]));
        }
    }
    pfaffian(&c)
}

/// `Pf(X^2 A + B)` over monomials for an arbitrary positive weight `w`:
/// `A_jk = int int w(x) w(y) x^j y^k sgn(y - x)`, `B_jk = int w^2 (x^j (y^k)' - x^k (x^j)')`.
pub fn partition_pfaffian_general(
    n: usize,
    fugacity: f64,
    weight: &dyn Fn(f64) -> f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    check_even_n(n)?;
    let mut c = SkewMatrix::zeros(n);
    for j in 0..n {
        for k in j + 1..n {
            let a = if fugacity == 0.0 {
                0.0
            } else {
                let inner = |x: f64| -> Result<f64> {
                    let e = epsilon1_numeric(|y| weight(y) * y.powi(k as i32), x, spec)?;
                    Ok(weight(x) * x.powi(j as i32) * e)
                };
                2.0 * crate::quadrature::integrate_line_try(inner, &[], spec)?
            };
            let b = (k as f64 - j as f64)
                * integrate_line(|x| weight(x).powi(2) * x.powi((j + k) as i32 - 1), spec)?;
            c.set(j, k, fugacity * fugacity * a + b);
        }
    }
    pfaffian(&c)
}

fn omega(alpha: &[f64], beta: &[f64], weight: &dyn Fn(f64) -> f64) -> f64 {
    let mut v = 1.0;
    for (i, &a) in alpha.iter().enumerate() {
        v *= weight(a);
        for &a2 in &alpha[i + 1..] {
            v *= (a - a2).abs();
        }
        for &b in beta {
            v *= (a - b) * (a - b);
        }
    }
    for (i, &b) in beta.iter().enumerate() {
        let wb = weight(b);
        v *= wb * wb;
        for &b2 in &beta[i + 1..] {
            v *= (b - b2).powi(4);
        }
    }
    v
}

/// `int Omega` over `free_a` extra charge-1 and `free_b` extra charge-2
/// positions, each species restricted to increasing order (which absorbs the
/// `1/(L! M!)` symmetry factor), with the given positions held fixed.
pub fn sector_integral(
    fixed_alpha: &[f64],
    fixed_beta: &[f64],
    free_a: usize,
    free_b: usize,
    weight: &dyn Fn(f64) -> f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let mut a = fixed_alpha.to_vec();
    let mut b = fixed_beta.to_vec();
    let r = spec.truncation_radius;
    nested(&mut a, &mut b, free_a, free_b, -r, -r, weight, spec)
}

#[allow(clippy::too_many_arguments)]
fn nested(
    a: &mut Vec<f64>,
    b: &mut Vec<f64>,
    la: usize,
    lb: usize,
    lo_a: f64,
    lo_b: f64,
    weight: &dyn Fn(f64) -> f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if la == 0 && lb == 0 {
        return Ok(omega(a, b, weight));
    }
    let r = spec.truncation_radius;
    let breaks: Vec<f64> = a.iter().chain(b.iter()).copied().collect();
    if la > 0 {
        let est = integrate_interval_try(
            |t| {
                a.push(t);
                let v = nested(a, b, la - 1, lb, t, lo_b, weight, spec);
                a.pop();
                v
            },
            lo_a,
            r,
            &breaks,
            spec,
        )?;
        Ok(est.value)
    } else {
        let est = integrate_interval_try(
            |t| {
                b.push(t);
                let v = nested(a, b, la, lb - 1, lo_a, t, weight, spec);
                b.pop();
                v
            },
            lo_b,
            r,
            &breaks,
            spec,
        )?;
        Ok(est.value)
    }
}

/// Quadrature settings for the nested sector oracles.
pub fn brute_force_spec() -> QuadratureSpec {
    QuadratureSpec {
        abs_tol: 1e-13,
        rel_tol: 1e-10,
        truncation_radius: 9.0,
        max_subdivisions: 400,
    }
}

pub fn gaussian_weight(x: f64) -> f64 {
    (-0.5 * x * x).exp()
}

/// Sector values `Z_{L,M}` and their fugacity-weighted sum.
#[derive(Clone, Debug, PartialEq)]
pub struct SectorSum {
    /// `(L, M, Z_{L,M})`, decreasing `L`.
    pub sectors: Vec<(usize, usize, f64)>,
    pub total: f64,
}

/// `Z(X)` by direct nested quadrature of every sector, for the Gaussian weight.
pub fn brute_force_z(n: usize, fugacity: f64) -> Result<SectorSum> {
    brute_force_z_weighted(n, fugacity, &gaussian_weight, &brute_force_spec())
}

pub fn brute_force_z_weighted(
    n: usize,
    fugacity: f64,
    weight: &dyn Fn(f64) -> f64,
    spec: &QuadratureSpec,
) -> Result<SectorSum> {
    let j = check_even_n(n)?;
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::Domain(format!(
            "brute-force quadrature is limited to N <= {BRUTE_FORCE_MAX_N}"
        )));
    }
    let mut sectors = Vec::new();
    let mut total = 0.0;
    for m in 0..=j {
        let l = n - 2 * m;
        let z = sector_integral(&[], &[], l, m, weight, spec)?;
        total += fugacity.powi(l as i32) * z;
        sectors.push((l, m, z));
    }
    Ok(SectorSum { sectors, total })
}

/// Direct-integral evaluation of `R_{l,m}` for the Gaussian weight, with the
/// partition function computed once.
#[derive(Clone, Debug)]
pub struct BruteForceOracle {
    n: usize,
    fugacity: f64,
    z: SectorSum,
    spec: QuadratureSpec,
}

impl BruteForceOracle {
    pub fn new(n: usize, fugacity: f64) -> Result<Self> {
        Ok(BruteForceOracle {
            n,
            fugacity,
            z: brute_force_z(n, fugacity)?,
            spec: brute_force_spec(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn partition(&self) -> &SectorSum {
        &self.z
    }

    /// `R_{l,m} = (1/Z) sum_{L,M} X^L / ((L-l)! (M-m)!) int Omega` over the free positions.
    pub fn correlation(&self, xs: &[f64], ys: &[f64]) -> Result<f64> {
        let mut acc = 0.0;
        for &(l, m, _) in &self.z.sectors {
            if l < xs.len() || m < ys.len() {
                continue;
            }
            let part =
                sector_integral(xs, ys, l - xs.len(), m - ys.len(), &gaussian_weight, &self.spec)?;
            acc += self.fugacity.powi(l as i32) * part;
        }
        Ok(acc / self.z.total)
    }
}

/// One-off [`BruteForceOracle::correlation`].
pub fn brute_force_correlation(n: usize, fugacity: f64, xs: &[f64], ys: &[f64]) -> Result<f64> {
    BruteForceOracle::new(n, fugacity)?.correlation(xs, ys)
}

/// Large-`N` expansions `(sqrt(2N) - 1 + 1/(3 sqrt N), sqrt(2N) - 4/3)` for the mean and variance of `L`.
pub fn asymptotic_moments(n: usize) -> (f64, f64) {
    let nf = n as f64;
    let s = (2.0 * nf).sqrt();
    (s - 1.0 + 1.0 / (3.0 * nf.sqrt()), s - 4.0 / 3.0)
}

/// Expansions matching the exact moments: `(sqrt(2N) - 1 + 1/sqrt(2N), sqrt(2N) - 2)`.
pub fn corrected_asymptotic_moments(n: usize) -> (f64, f64) {
    let s = (2.0 * n as f64).sqrt();
    (s - 1.0 + 1.0 / s, s - 2.0)
}

/// One grid point of the local limit profile of `L`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CltPoint {
    pub c: f64,
    /// Even lattice site nearest to `sqrt(2N) + (2N)^{1/4} c`.
    pub k: usize,
    /// `(2N)^{1/4} Prob(L = k)`.
    pub scaled_pmf: f64,
    /// `scaled_pmf / 2`: `L` lives on even integers, so the pmf carries twice the density.
    pub lattice_corrected: f64,
    /// Standard normal density at `c`.
    pub gaussian: f64,
}

pub fn local_clt_profile(n: usize, c_grid: &[f64]) -> Result<Vec<CltPoint>> {
    let law = population_law(n)?;
    let s = (2.0 * n as f64).sqrt();
    let q = s.sqrt();
    c_grid
        .iter()
        .map(|&c| {
            let target = s + q * c;
            let k = 2.0 * (target / 2.0).round();
            if k < 0.0 || k > n as f64 {
                return Err(Error::Domain(format!(
                    "c = {c} maps to L = {k}, outside [0, {n}]"
                )));
            }
            let k = k as usize;
            let scaled = q * law.prob_l(k);
            Ok(CltPoint {
                c,
                k,
                scaled_pmf: scaled,
                lattice_corrected: scaled / 2.0,
                gaussian: (-0.5 * c * c).exp() / (2.0 * PI).sqrt(),
            })
        })
        .collect()
}

/// Exact tail mass of `|L/sqrt(2N) - 1| >= eps` against `C N e^{-min(eps,1) sqrt(2N)}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailCheck {
    pub lhs: f64,
    /// The bound with `C = 10`.
    pub rhs: f64,
    /// Smallest `C` for which the bound holds at this `(N, eps)`.
    pub fitted_c: f64,
}

impl TailCheck {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs
    }
}

pub const TAIL_CONSTANT: f64 = 10.0;

pub fn tail_bound_check(n: usize, eps: f64) -> Result<TailCheck> {
    if !(eps > 0.0) {
        return Err(Error::Domain(format!("epsilon must be positive, got {eps}")));
    }
    let law = population_law(n)?;
    let s = (2.0 * n as f64).sqrt();
    let lhs = compensated_sum(
        law.entries()
            .iter()
            .filter(|e| (e.l as f64 / s - 1.0).abs() >= eps)
            .map(|e| e.prob),
    );
    let base = n as f64 * (-eps.min(1.0) * s).exp();
    Ok(TailCheck {
        lhs,
        rhs: TAIL_CONSTANT * base,
        fitted_c: lhs / base,
    })
}

/// `sin(sqrt2 t) / (sqrt2 t)`, the transform of the uniform law on `[-sqrt 2, sqrt 2]`.
pub fn limit_s1(t: f64) -> f64 {
    let u = SQRT_2 * t;
    if u.abs() < 1e-8 {
        1.0 - u * u / 6.0
    } else {
        u.sin() / u
    }
}

/// `(sqrt2 / t) J1(sqrt2 t)`, the transform of the semicircle law on `[-sqrt 2, sqrt 2]`.
pub fn limit_s2(t: f64) -> f64 {
    let u = SQRT_2 * t;
    if u.abs() < 1e-8 {
        1.0 - u * u / 8.0
    } else {
        2.0 * bessel_j(1, u).expect("order 1 is supported") / u
    }
}

/// Limit densities: uniform `1/(2 sqrt 2)` and semicircle `sqrt(2 - x^2)/pi` on `[-sqrt 2, sqrt 2]`.
pub fn limit_density(species: Species, x: f64) -> f64 {
    if x.abs() > SQRT_2 {
        return 0.0;
    }
    match species {
        Species::One => 1.0 / (2.0 * SQRT_2),
        Species::Two => (2.0 - x * x).sqrt() / PI,
    }
}

/// Half-width of the interval that carries the scaled densities.
fn scaled_support(ctx: &KernelContext) -> f64 {
    let nf = ctx.n() as f64;
    ((2.0 * nf).sqrt() + 8.0) / nf.sqrt()
}

/// `int e^{itx} s(x) dx` for the scaled density; the imaginary part must vanish.
pub fn fourier_scaled_density(ctx: &KernelContext, species: Species, t: f64) -> Result<f64> {
    let r = scaled_support(ctx);
    let spec = QuadratureSpec::default().with_tolerances(1e-10, 1e-9);
    let breaks = [-SQRT_2, 0.0, SQRT_2];
    let re = integrate_interval(|x| (t * x).cos() * ctx.scaled_density(species, x), -r, r, &breaks, &spec)?;
    let im = integrate_interval(|x| (t * x).sin() * ctx.scaled_density(species, x), -r, r, &breaks, &spec)?;
    if im.value.abs() > 1e-8 {
        return Err(Error::Tolerance(format!(
            "imaginary part of the transform is {:e}",
            im.value
        )));
    }
    Ok(re.value)
}

/// `int R dx` of a one-point density.
pub fn density_mass(ctx: &KernelContext, species: Species) -> Result<f64> {
    let spec = QuadratureSpec::for_degree(ctx.n()).with_tolerances(1e-12, 1e-11);
    integrate_line(|x| ctx.density(species, x), &spec)
}
