//! Weighted polynomials `w(x) p(x)`, `w(x) = e^{-x^2/2}`, stored as finite
//! expansions in the normalized Hermite functions `psi_n`.
//!
//! In this basis differentiation, multiplication by `x` and the half-signed
//! integral `eps1 f(x) = 1/2 int f(y) sgn(y - x) dy` all have closed forms.

use crate::error::{Error, Result};
use crate::specfun::{erf, hermite_psi_all, ln_hermite_norm};
use std::f64::consts::{PI, SQRT_2};

/// `sum_n coeffs[n] psi_n(x)`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct PsiSeries {
    pub coeffs: Vec<f64>,
}

/// Values of `psi_n`, `psi_n'` and `eps1 psi_n` at a point, for `n <= nmax`.
#[derive(Clone, Debug)]
pub struct PsiPoint {
    pub x: f64,
    pub psi: Vec<f64>,
    pub dpsi: Vec<f64>,
    pub eps: Vec<f64>,
}

impl PsiPoint {
    pub fn new(nmax: usize, x: f64) -> Self {
        let ext = hermite_psi_all(nmax + 1, x);
        let psi = ext[..=nmax].to_vec();
        let dpsi = (0..=nmax)
            .map(|n| {
                let nf = n as f64;
                let down = if n > 0 { (nf / 2.0).sqrt() * ext[n - 1] } else { 0.0 };
                down - ((nf + 1.0) / 2.0).sqrt() * ext[n + 1]
            })
            .collect();
        let eps = epsilon1_from_psi(&ext, nmax, x);
        PsiPoint { x, psi, dpsi, eps }
    }

    pub fn len(&self) -> usize {
        self.psi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.psi.is_empty()
    }
}

/// `eps1 psi_n(x)` for `n <= nmax`, given `psi_0..psi_{nmax+1}` at `x`.
fn epsilon1_from_psi(psi: &[f64], nmax: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; nmax + 1];
    // G_k = int_0^x psi_2k, so eps1 psi_2k = -G_k.
    let mut g = PI.powf(-0.25) * (PI / 2.0).sqrt() * erf(x / SQRT_2);
    // A_k = int_{-inf}^x psi_{2k+1}, so eps1 psi_{2k+1} = -A_k.
    let mut a = -SQRT_2 * psi[0];
    let mut k = 0usize;
    loop {
        let even = 2 * k;
        if even > nmax {
            break;
        }
        out[even] = -g;
        let odd = even + 1;
        if odd > nmax {
            break;
        }
        out[odd] = -a;
        let kf = k as f64;
        g = (((2.0 * kf + 1.0) / 2.0).sqrt() * g - psi[odd]) / (kf + 1.0).sqrt();
        if even + 2 < psi.len() {
            a = ((kf + 1.0).sqrt() * a - psi[even + 2]) / (kf + 1.5).sqrt();
        }
        k += 1;
    }
    out
}

/// `eps1 psi_n(x)` for `n <= nmax`.
pub fn epsilon1_psi_all(nmax: usize, x: f64) -> Vec<f64> {
    let psi = hermite_psi_all(nmax + 2, x);
    epsilon1_from_psi(&psi, nmax, x)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl PsiSeries {
    pub fn new(coeffs: Vec<f64>) -> Self {
        PsiSeries { coeffs }
    }

    pub fn zero() -> Self {
        PsiSeries { coeffs: Vec::new() }
    }

    /// `psi_n` itself.
    pub fn basis(n: usize) -> Self {
        let mut c = vec![0.0; n + 1];
        c[n] = 1.0;
        PsiSeries { coeffs: c }
    }

    /// `x^n e^{-x^2/2}`.
    pub fn monomial(n: usize) -> Self {
        let mut s = PsiSeries {
            coeffs: vec![PI.powf(0.25)],
        };
        for _ in 0..n {
            s = s.mul_x();
        }
        s
    }

    /// `H_n(x) e^{-x^2/2}`.
    pub fn hermite(n: usize) -> Self {
        let mut s = Self::basis(n);
        s.coeffs[n] = (0.5 * ln_hermite_norm(n)).exp();
        s
    }

    /// `w(x) p(x)` for a polynomial given by its monomial coefficients.
    pub fn from_monomials(poly: &[f64]) -> Self {
        let mut acc = PsiSeries::zero();
        let mut xn = PsiSeries::monomial(0);
        for (i, &c) in poly.iter().enumerate() {
            if i > 0 {
                xn = xn.mul_x();
            }
            if c != 0.0 {
                acc = acc.add(&xn.scale(c));
            }
        }
        acc
    }

    /// Highest index with a nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|&c| c != 0.0)
    }

    pub fn coeff(&self, n: usize) -> f64 {
        self.coeffs.get(n).copied().unwrap_or(0.0)
    }

    pub fn add(&self, other: &PsiSeries) -> PsiSeries {
        let n = self.coeffs.len().max(other.coeffs.len());
        PsiSeries {
            coeffs: (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect(),
        }
    }

    pub fn scale(&self, c: f64) -> PsiSeries {
        PsiSeries {
            coeffs: self.coeffs.iter().map(|v| v * c).collect(),
        }
    }

    /// Multiplication by `x`.
    pub fn mul_x(&self) -> PsiSeries {
        let mut out = vec![0.0; self.coeffs.len() + 1];
        for (n, &c) in self.coeffs.iter().enumerate() {
            let nf = n as f64;
            out[n + 1] += c * ((nf + 1.0) / 2.0).sqrt();
            if n > 0 {
                out[n - 1] += c * (nf / 2.0).sqrt();
            }
        }
        PsiSeries { coeffs: out }
    }

    /// Derivative of the weighted function.
    pub fn derivative(&self) -> PsiSeries {
        let mut out = vec![0.0; self.coeffs.len() + 1];
        for (n, &c) in self.coeffs.iter().enumerate() {
            let nf = n as f64;
            out[n + 1] -= c * ((nf + 1.0) / 2.0).sqrt();
            if n > 0 {
                out[n - 1] += c * (nf / 2.0).sqrt();
            }
        }
        PsiSeries { coeffs: out }
    }

    pub fn eval(&self, x: f64) -> f64 {
        if self.coeffs.is_empty() {
            return 0.0;
        }
        dot(&self.coeffs, &hermite_psi_all(self.coeffs.len() - 1, x))
    }

    /// Value from precomputed basis values (`values.len() >= coeffs.len()`).
    pub fn eval_with(&self, values: &[f64]) -> f64 {
        dot(&self.coeffs, values)
    }

    /// `eps1` of the series at `x`, in closed form.
    pub fn epsilon1(&self, x: f64) -> f64 {
        if self.coeffs.is_empty() {
            return 0.0;
        }
        dot(&self.coeffs, &epsilon1_psi_all(self.coeffs.len() - 1, x))
    }

    /// `int f g dx` over the line (orthonormality of the basis).
    pub fn l2_inner(&self, other: &PsiSeries) -> f64 {
        dot(&self.coeffs, &other.coeffs)
    }

    /// `int w^2 (f g' - g f') dx` for the underlying polynomials, which equals
    /// `int (F G' - G F') dx` for the weighted functions.
    pub fn derivative_pairing(&self, other: &PsiSeries) -> f64 {
        self.l2_inner(&other.derivative()) - other.l2_inner(&self.derivative())
    }

    /// Fails unless every odd coefficient vanishes.
    pub fn check_even(&self) -> Result<()> {
        match self.coeffs.iter().skip(1).step_by(2).position(|&c| c != 0.0) {
            None => Ok(()),
            Some(i) => Err(Error::Domain(format!(
                "expected an even weighted polynomial, found a psi_{} component",
                2 * i + 1
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_matches_direct_evaluation() {
        for n in 0..8 {
            let s = PsiSeries::monomial(n);
            for x in [-1.7f64, 0.0, 0.4, 2.2] {
                let want = x.powi(n as i32) * (-x * x / 2.0).exp();
                assert!((s.eval(x) - want).abs() < 1e-13, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn derivative_of_gaussian_monomial() {
        // (x e^{-x^2/2})' = (1 - x^2) e^{-x^2/2}
        let d = PsiSeries::monomial(1).derivative();
        for x in [-1.0f64, 0.3, 2.0] {
            let want = (1.0 - x * x) * (-x * x / 2.0).exp();
            assert!((d.eval(x) - want).abs() < 1e-14);
        }
    }

    #[test]
    fn epsilon1_of_psi0_is_an_erf() {
        for x in [-2.0, -0.3, 0.0, 0.9, 4.0] {
            let want = -(PI.powf(0.25) / SQRT_2) * erf(x / SQRT_2);
            assert!((PsiSeries::basis(0).epsilon1(x) - want).abs() < 1e-15);
        }
    }

    #[test]
    fn epsilon1_of_odd_gaussian_moment() {
        // eps1 (y e^{-y^2/2}) at 0 is int_0^inf y e^{-y^2/2} dy = 1
        assert!((PsiSeries::monomial(1).epsilon1(0.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn even_check() {
        assert!(PsiSeries::monomial(2).check_even().is_ok());
        assert!(PsiSeries::monomial(3).check_even().is_err());
    }
}
