//! Skew inner products on weighted polynomials and the explicit
//! skew-orthogonal families for the Gaussian weight.
//!
//! Two bilinear forms act on `f~ = w f`, `w(x) = e^{-x^2/2}`:
//! `<f|g>_1 = int (f~ eps1 g~ - g~ eps1 f~)` and `<f|g>_4 = int w^2 (f g' - g f')`.
//! The fugacity form is `<f|g>_X = X^2 <f|g>_1 + <f|g>_4`.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::psi::{PsiPoint, PsiSeries};
use crate::quadrature::{integrate_line, QuadratureSpec};
use crate::specfun::{laguerre, laguerre_log_all, lgamma, SignedLog};
use std::f64::consts::PI;

/// Which normalization of the skew-orthogonal family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    /// `P_2m = sum_k a_k H_2k` with `a_k = k!/(2k)! L_k^{(-1/2)}(-X^2)`, `P_2m+1 = 2x P_2m - 2 P_2m'`.
    Capital,
    /// Monic rescaling of the capital family.
    Monic,
}

/// `<f|g>_1` by adaptive quadrature with the closed-form `eps1`. The absolute
/// tolerance is taken relative to the coefficient norms of `f` and `g`.
pub fn skew_inner_1(f: &PsiSeries, g: &PsiSeries, spec: &QuadratureSpec) -> Result<f64> {
    let scale = f.l2_inner(f).sqrt() * g.l2_inner(g).sqrt();
    if scale == 0.0 {
        return Ok(0.0);
    }
    let spec = spec.with_tolerances(spec.abs_tol * scale, spec.rel_tol);
    integrate_line(|x| f.eval(x) * g.epsilon1(x) - g.eval(x) * f.epsilon1(x), &spec)
}

/// `<f|g>_4`, exact through the derivative rule of the basis.
pub fn skew_inner_4(f: &PsiSeries, g: &PsiSeries) -> f64 {
    f.derivative_pairing(g)
}

/// `X^2 <f|g>_1 + <f|g>_4`.
pub fn skew_inner_x(f: &PsiSeries, g: &PsiSeries, fugacity: f64, spec: &QuadratureSpec) -> Result<f64> {
    let one = if fugacity == 0.0 {
        0.0
    } else {
        skew_inner_1(f, g, spec)?
    };
    Ok(fugacity * fugacity * one + skew_inner_4(f, g))
}

/// Both skew forms evaluated on every pair of basis functions `psi_m, psi_n`, `m, n <= nmax`.
#[derive(Clone, Debug)]
pub struct SkewGram {
    pub form1: Matrix,
    pub form4: Matrix,
}

impl SkewGram {
    /// The `eps1` form comes from a fixed composite Kronrod rule on a mesh of
    /// width at most 1/8, fine enough for degree a few hundred.
    pub fn new(nmax: usize) -> Self {
        let n = nmax + 1;
        let r = QuadratureSpec::for_degree(nmax).truncation_radius;
        let segments = (2.0 * r / 0.125).ceil() as usize;
        let h = 2.0 * r / segments as f64;
        let (nodes, weights) = crate::quadrature::kronrod_rule();
        let mut e = Matrix::zeros(n, n);
        for s in 0..segments {
            let a = -r + s as f64 * h;
            for (t, wt) in nodes.iter().zip(&weights) {
                let x = a + 0.5 * h * (1.0 + t);
                let p = PsiPoint::new(nmax, x);
                let w = 0.5 * h * wt;
                for m in 0..n {
                    let pm = w * p.psi[m];
                    if pm == 0.0 {
                        continue;
                    }
                    // only opposite parities pair to something nonzero
                    let mut k = 1 - m % 2;
                    while k < n {
                        e[(m, k)] += pm * p.eps[k];
                        k += 2;
                    }
                }
            }
        }
        let form1 = Matrix::from_fn(n, n, |i, j| e[(i, j)] - e[(j, i)]);
        let form4 = Matrix::from_fn(n, n, |i, j| {
            if j == i + 1 {
                (2.0 * j as f64).sqrt()
            } else if i == j + 1 {
                -(2.0 * i as f64).sqrt()
            } else {
                0.0
            }
        });
        SkewGram { form1, form4 }
    }

    pub fn dim(&self) -> usize {
        self.form1.rows()
    }

    fn bilinear(m: &Matrix, f: &PsiSeries, g: &PsiSeries) -> f64 {
        let mut s = 0.0;
        for (i, &fi) in f.coeffs.iter().enumerate() {
            if fi == 0.0 {
                continue;
            }
            for (j, &gj) in g.coeffs.iter().enumerate() {
                s += fi * m[(i, j)] * gj;
            }
        }
        s
    }

    pub fn form_1(&self, f: &PsiSeries, g: &PsiSeries) -> f64 {
        Self::bilinear(&self.form1, f, g)
    }

    pub fn form_4(&self, f: &PsiSeries, g: &PsiSeries) -> f64 {
        Self::bilinear(&self.form4, f, g)
    }

    pub fn form_x(&self, f: &PsiSeries, g: &PsiSeries, fugacity: f64) -> f64 {
        fugacity * fugacity * self.form_1(f, g) + self.form_4(f, g)
    }
}

/// `ln` of `<P~_2m | P~_2m+1>_X` for the capital family:
/// `4 pi (m+1)! / Gamma(m+1/2) L_m(-X^2) L_{m+1}(-X^2)`.
pub fn ln_capital_norm(m: usize, fugacity: f64) -> Result<f64> {
    let l = laguerre_log_all(m + 1, -0.5, -fugacity * fugacity)?;
    Ok((4.0 * PI).ln() + lgamma(m as f64 + 2.0) - lgamma(m as f64 + 0.5)
        + l[m].ln_abs
        + l[m + 1].ln_abs)
}

pub fn capital_norm(m: usize, fugacity: f64) -> Result<f64> {
    Ok(ln_capital_norm(m, fugacity)?.exp())
}

/// `ln r_j` for the monic family: `r_j = 2 (j+1)! Gamma(j+1/2) L_{j+1}(-X^2) / L_j(-X^2)`.
pub fn ln_monic_norm(j: usize, fugacity: f64) -> Result<f64> {
    let l = laguerre_log_all(j + 1, -0.5, -fugacity * fugacity)?;
    Ok(2f64.ln() + lgamma(j as f64 + 2.0) + lgamma(j as f64 + 0.5) + l[j + 1].ln_abs
        - l[j].ln_abs)
}

pub fn monic_norm(j: usize, fugacity: f64) -> Result<f64> {
    Ok(ln_monic_norm(j, fugacity)?.exp())
}

/// Unweighted capital even polynomial as the Laguerre sum
/// `sum_{k<=m} (-1)^k L_k(-X^2)/L_k(0) L_k(x^2)`, all with parameter -1/2.
pub fn capital_even_laguerre_form(m: usize, fugacity: f64, x: f64) -> f64 {
    let lx = laguerre_all_at(m, -0.5, -fugacity * fugacity);
    let l0 = laguerre_all_at(m, -0.5, 0.0);
    let lt = laguerre_all_at(m, -0.5, x * x);
    (0..=m)
        .map(|k| if k % 2 == 0 { 1.0 } else { -1.0 } * lx[k] / l0[k] * lt[k])
        .sum()
}

/// Unweighted capital odd polynomial in its Laguerre form
///
/// `s 4 X^2 x sum_{k<j} (-1)^k L^{1/2}_k(-X^2)/L^{1/2}_k(0) L^{1/2}_k(x^2)
///  + 2 x (-1)^j L^{-1/2}_j(-X^2)/L^{-1/2}_j(0) L^{1/2}_j(x^2)`.
///
/// `first_term_sign = -1` gives the polynomial `2x P_2j - 2 P_2j'`.
pub fn capital_odd_laguerre_form(j: usize, fugacity: f64, x: f64, first_term_sign: f64) -> f64 {
    let x2 = fugacity * fugacity;
    let mut sum = 0.0;
    for k in 0..j {
        let sgn = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sgn * laguerre(k, 0.5, -x2) / laguerre(k, 0.5, 0.0) * laguerre(k, 0.5, x * x);
    }
    let sj = if j % 2 == 0 { 1.0 } else { -1.0 };
    first_term_sign * 4.0 * x2 * x * sum
        + 2.0 * x * sj * laguerre(j, -0.5, -x2) / laguerre(j, -0.5, 0.0) * laguerre(j, 0.5, x * x)
}

fn laguerre_all_at(k: usize, alpha: f64, x: f64) -> Vec<f64> {
    crate::specfun::laguerre_all(k, alpha, x)
}

/// A complete skew-orthogonal family of degrees `0..2J` for the fugacity form.
#[derive(Clone, Debug)]
pub struct SkewOPFamily {
    pairs: usize,
    fugacity: f64,
    kind: FamilyKind,
    members: Vec<PsiSeries>,
    ln_r_closed: Vec<f64>,
    r_measured: Vec<f64>,
    max_residual: f64,
}

/// Relative tolerance for the skew-orthogonality check done at construction.
pub const SKEW_RESIDUAL_TOL: f64 = 1e-8;

/// Builds the family with `J = pairs` and checks skew-orthogonality.
pub fn build_family(pairs: usize, fugacity: f64, kind: FamilyKind) -> Result<SkewOPFamily> {
    let gram = SkewGram::new(2 * pairs);
    build_family_with(pairs, fugacity, kind, &gram)
}

/// As [`build_family`], reusing precomputed basis Gram matrices (dimension at least `2J + 1`).
pub fn build_family_with(
    pairs: usize,
    fugacity: f64,
    kind: FamilyKind,
    gram: &SkewGram,
) -> Result<SkewOPFamily> {
    if pairs == 0 {
        return Err(Error::Domain("a family needs at least one pair".into()));
    }
    if !(fugacity >= 0.0) || !fugacity.is_finite() {
        return Err(Error::Domain(format!(
            "fugacity must be a nonnegative number, got {fugacity}"
        )));
    }
    if gram.dim() < 2 * pairs + 1 {
        return Err(Error::Dimension(format!(
            "Gram matrices of dimension {} are too small for {} pairs",
            gram.dim(),
            pairs
        )));
    }
    let x2 = fugacity * fugacity;
    let lag = laguerre_log_all(pairs, -0.5, -x2)?;
    let lag0 = laguerre_log_all(pairs, -0.5, 0.0)?;
    // ln of the psi_2k coefficient of P~_2m: ln(k!/(2k)! L_k) + ln sqrt(h_2k)
    let ln_coef: Vec<SignedLog> = (0..pairs)
        .map(|k| {
            let kf = k as f64;
            let ln_sqrt_h = 0.5 * (0.5 * PI.ln() + 2.0 * kf * 2f64.ln() + lgamma(2.0 * kf + 1.0));
            SignedLog {
                sign: lag[k].sign,
                ln_abs: lgamma(kf + 1.0) - lgamma(2.0 * kf + 1.0) + lag[k].ln_abs + ln_sqrt_h,
            }
        })
        .collect();

    let mut members = Vec::with_capacity(2 * pairs);
    let mut ln_r_closed = Vec::with_capacity(pairs);
    for m in 0..pairs {
        let ln_scale = match kind {
            FamilyKind::Capital => 0.0,
            FamilyKind::Monic => lag0[m].ln_abs + lgamma(m as f64 + 1.0) - lag[m].ln_abs,
        };
        let mut coeffs = vec![0.0; 2 * m + 1];
        for (k, c) in ln_coef.iter().enumerate().take(m + 1) {
            coeffs[2 * k] = c.sign * (c.ln_abs + ln_scale).exp();
        }
        let even = PsiSeries::new(coeffs);
        let odd = match kind {
            FamilyKind::Capital => even.derivative().scale(-2.0),
            FamilyKind::Monic => even.derivative().scale(-1.0),
        };
        members.push(even);
        members.push(odd);
        ln_r_closed.push(match kind {
            FamilyKind::Capital => {
                (4.0 * PI).ln() + lgamma(m as f64 + 2.0) - lgamma(m as f64 + 0.5)
                    + lag[m].ln_abs
                    + lag[m + 1].ln_abs
            }
            FamilyKind::Monic => {
                2f64.ln() + lgamma(m as f64 + 2.0) + lgamma(m as f64 + 0.5) + lag[m + 1].ln_abs
                    - lag[m].ln_abs
            }
        });
    }

    let n = 2 * pairs;
    let mut r_measured = vec![0.0; pairs];
    let mut max_residual: f64 = 0.0;
    for a in 0..n {
        for b in a + 1..n {
            let v = gram.form_x(&members[a], &members[b], fugacity);
            let expected = if a % 2 == 0 && b == a + 1 {
                r_measured[a / 2] = v;
                ln_r_closed[a / 2].exp()
            } else {
                0.0
            };
            let scale = 1f64
                .max(ln_r_closed[a / 2].exp())
                .max(ln_r_closed[b / 2].exp());
            let resid = (v - expected).abs() / scale;
            max_residual = max_residual.max(resid);
        }
    }
    if max_residual > SKEW_RESIDUAL_TOL {
        return Err(Error::Tolerance(format!(
            "skew-orthogonality residual {max_residual:e} exceeds {SKEW_RESIDUAL_TOL:e} \
             (J = {pairs}, X = {fugacity}, {kind:?})"
        )));
    }
    Ok(SkewOPFamily {
        pairs,
        fugacity,
        kind,
        members,
        ln_r_closed,
        r_measured,
        max_residual,
    })
}

impl SkewOPFamily {
    /// Number of (even, odd) pairs `J`; degrees run over `0..2J`.
    pub fn pairs(&self) -> usize {
        self.pairs
    }

    pub fn fugacity(&self) -> f64 {
        self.fugacity
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    /// Weighted member `p~_n` as a basis expansion.
    pub fn member(&self, n: usize) -> Result<&PsiSeries> {
        self.members.get(n).ok_or(Error::Index {
            index: n,
            limit: self.members.len(),
        })
    }

    pub fn members(&self) -> &[PsiSeries] {
        &self.members
    }

    /// `p~_n(x) = w(x) p_n(x)`.
    pub fn eval_tilde(&self, n: usize, x: f64) -> Result<f64> {
        Ok(self.member(n)?.eval(x))
    }

    /// Closed-form normalizations `r_j`.
    pub fn r_closed(&self) -> Vec<f64> {
        self.ln_r_closed.iter().map(|v| v.exp()).collect()
    }

    pub fn ln_r_closed(&self) -> &[f64] {
        &self.ln_r_closed
    }

    /// Normalizations re-measured from the skew forms.
    pub fn r_measured(&self) -> &[f64] {
        &self.r_measured
    }

    /// Largest relative skew-orthogonality residual seen at construction.
    pub fn max_residual(&self) -> f64 {
        self.max_residual
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_pairings() {
        let spec = QuadratureSpec::default();
        let one = PsiSeries::monomial(0);
        let x = PsiSeries::monomial(1);
        let sp = PI.sqrt();
        assert!(skew_inner_1(&one, &one, &spec).unwrap().abs() < 1e-14);
        assert!((skew_inner_1(&one, &x, &spec).unwrap() - 2.0 * sp).abs() < 1e-11);
        assert!((skew_inner_4(&one, &x) - sp).abs() < 1e-14);
        assert_eq!(skew_inner_4(&x, &x), 0.0);
        assert!((skew_inner_x(&one, &x, 0.0, &spec).unwrap() - sp).abs() < 1e-14);
        assert!((skew_inner_x(&one, &x, 1.0, &spec).unwrap() - 3.0 * sp).abs() < 1e-11);
        assert!((skew_inner_x(&one, &x, 2.0, &spec).unwrap() - 9.0 * sp).abs() < 1e-10);
    }

    #[test]
    fn small_families() {
        let cap = build_family(1, 1.0, FamilyKind::Capital).unwrap();
        assert!((cap.eval_tilde(0, 0.3).unwrap() - (-0.045f64).exp()).abs() < 1e-14);
        assert!((cap.eval_tilde(1, 0.3).unwrap() - 0.6 * (-0.045f64).exp()).abs() < 1e-14);
        assert!((cap.r_measured()[0] - 6.0 * PI.sqrt()).abs() < 1e-9);
        let monic = build_family(1, 1.0, FamilyKind::Monic).unwrap();
        assert!((monic.r_measured()[0] - 3.0 * PI.sqrt()).abs() < 1e-9);
        assert!((monic.eval_tilde(1, 2.0).unwrap() - 2.0 * (-2.0f64).exp()).abs() < 1e-14);
        let cap2 = build_family(2, 1.0, FamilyKind::Capital).unwrap();
        assert!((cap2.eval_tilde(2, 0.0).unwrap() + 0.5).abs() < 1e-14);
        assert!(cap2.eval_tilde(4, 0.0).is_err());
    }

    #[test]
    fn closed_norms() {
        assert!((capital_norm(0, 1.0).unwrap() - 6.0 * PI.sqrt()).abs() < 1e-13);
        assert!((monic_norm(0, 1.0).unwrap() - 3.0 * PI.sqrt()).abs() < 1e-13);
        assert!((monic_norm(1, 1.0).unwrap() - 19.0 * PI.sqrt() / 6.0).abs() < 1e-13);
    }
}
