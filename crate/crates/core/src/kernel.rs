//! Kernel seed `kappa_N`, the 2x2 matrix kernels and the Pfaffian correlation functions.

use crate::error::{Error, Result};
use crate::linalg::{inverse_transpose, pfaffian, Matrix, SkewMatrix};
use crate::psi::{PsiPoint, PsiSeries};
use crate::skewpoly::{build_family_with, FamilyKind, SkewGram, SkewOPFamily};
use std::sync::atomic::{AtomicUsize, Ordering};

/// Largest `N` for which contexts are built.
pub const MAX_N: usize = 128;

/// Largest `N` for the raw-monomial basis, whose skew Gram matrix degrades quickly.
pub const MONOMIAL_MAX_N: usize = 16;

/// Negative correlation values smaller than this (relative to the entry scale) are clipped.
pub const NEGATIVE_CLIP_TOL: f64 = 1e-9;

/// Which polynomial basis feeds the kernel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelBasis {
    /// Skew-orthogonal family; `zeta` is block diagonal in closed form.
    Skew(FamilyKind),
    /// Monomials `x^k`; `zeta = (C^p)^{-T}` with `C^p` assembled numerically.
    Monomial,
}

/// Species of a particle: charge 1 or charge 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Species {
    One,
    Two,
}

/// Operator applied to one argument of `kappa_N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelOp {
    Identity,
    /// `eps1 f(x) = 1/2 int f(y) sgn(y - x) dy`.
    Eps1,
    /// `eps2 = d/dx`.
    Eps2,
}

impl Species {
    fn op(self) -> KernelOp {
        match self {
            Species::One => KernelOp::Eps1,
            Species::Two => KernelOp::Eps2,
        }
    }
}

/// Everything needed to evaluate `kappa_N` and the correlation functions.
#[derive(Debug)]
pub struct KernelContext {
    n: usize,
    fugacity: f64,
    basis: KernelBasis,
    members: Vec<PsiSeries>,
    zeta: Matrix,
    /// `kappa_N(x, y) = psi(x)^T coef psi(y)`.
    coef: Matrix,
    family: Option<SkewOPFamily>,
    clipped: AtomicUsize,
}

/// Builds the context for `N` particles' worth of charge.
pub fn build_context(n: usize, basis: KernelBasis, fugacity: f64) -> Result<KernelContext> {
    if n == 0 || n % 2 == 1 {
        return Err(Error::Domain(format!("total charge N must be even and positive, got {n}")));
    }
    if n > MAX_N {
        return Err(Error::Domain(format!("N = {n} exceeds the dense limit {MAX_N}")));
    }
    let pairs = n / 2;
    let gram = SkewGram::new(n);
    let (members, zeta, family) = match basis {
        KernelBasis::Skew(kind) => {
            let fam = build_family_with(pairs, fugacity, kind, &gram)?;
            let r = fam.r_closed();
            let mut zeta = Matrix::zeros(n, n);
            for (j, rj) in r.iter().enumerate() {
                zeta[(2 * j, 2 * j + 1)] = 1.0 / rj;
                zeta[(2 * j + 1, 2 * j)] = -1.0 / rj;
            }
            (fam.members().to_vec(), zeta, Some(fam))
        }
        KernelBasis::Monomial => {
            if n > MONOMIAL_MAX_N {
                return Err(Error::Domain(format!(
                    "monomial basis is limited to N <= {MONOMIAL_MAX_N}; use a skew-orthogonal family"
                )));
            }
            let members: Vec<PsiSeries> = (0..n).map(PsiSeries::monomial).collect();
            let c = Matrix::from_fn(n, n, |j, k| gram.form_x(&members[j], &members[k], fugacity));
            let zeta = match inverse_transpose(&c) {
                Ok((z, _)) => z,
                Err(Error::IllConditioned { condition }) => {
                    return Err(Error::Domain(format!(
                        "skew Gram matrix of the monomials is ill-conditioned \
                         (condition {condition:e}); use a skew-orthogonal family"
                    )))
                }
                Err(e) => return Err(e),
            };
            (members, zeta, None)
        }
    };
    let nb = members.iter().map(|m| m.coeffs.len()).max().unwrap_or(0);
    let b = Matrix::from_fn(n, nb, |j, i| members[j].coeff(i));
    let coef = b.transpose().mul(&zeta)?.mul(&b)?;
    Ok(KernelContext {
        n,
        fugacity,
        basis,
        members,
        zeta,
        coef,
        family,
        clipped: AtomicUsize::new(0),
    })
}

/// Basis values at one point, reusable across kernel evaluations.
#[derive(Clone, Debug)]
pub struct KernelPoint(PsiPoint);

impl KernelPoint {
    fn values(&self, op: KernelOp) -> &[f64] {
        match op {
            KernelOp::Identity => &self.0.psi,
            KernelOp::Eps1 => &self.0.eps,
            KernelOp::Eps2 => &self.0.dpsi,
        }
    }
}

impl KernelContext {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn fugacity(&self) -> f64 {
        self.fugacity
    }

    pub fn basis(&self) -> KernelBasis {
        self.basis
    }

    /// The matrix `zeta = (C^p)^{-T}`.
    pub fn zeta(&self) -> &Matrix {
        &self.zeta
    }

    /// Weighted basis polynomials `p~_j` used to build `kappa_N`.
    pub fn members(&self) -> &[PsiSeries] {
        &self.members
    }

    pub fn family(&self) -> Option<&SkewOPFamily> {
        self.family.as_ref()
    }

    /// Number of correlation values clipped from tiny negatives to zero.
    pub fn clipped_count(&self) -> usize {
        self.clipped.load(Ordering::Relaxed)
    }

    pub fn point(&self, x: f64) -> KernelPoint {
        KernelPoint(PsiPoint::new(self.coef.rows().saturating_sub(1), x))
    }

    /// `(L kappa_N R)(x, y)` from precomputed points.
    pub fn kappa_at(&self, x: &KernelPoint, y: &KernelPoint, left: KernelOp, right: KernelOp) -> f64 {
        let u = x.values(left);
        let v = y.values(right);
        let nb = self.coef.rows();
        let mut s = 0.0;
        for i in 0..nb {
            if u[i] == 0.0 {
                continue;
            }
            let mut row = 0.0;
            for j in 0..nb {
                row += self.coef[(i, j)] * v[j];
            }
            s += u[i] * row;
        }
        s
    }

    /// `kappa_N(x, y) = sum_jk p~_j(x) zeta_jk p~_k(y)`.
    pub fn kappa(&self, x: f64, y: f64) -> f64 {
        self.kappa_eps(x, y, KernelOp::Identity, KernelOp::Identity)
    }

    /// `kappa_N` with `left` applied in `x` and `right` applied in `y`.
    pub fn kappa_eps(&self, x: f64, y: f64, left: KernelOp, right: KernelOp) -> f64 {
        self.kappa_at(&self.point(x), &self.point(y), left, right)
    }

    /// The 2x2 block `K^{a,b}(x, y)`.
    pub fn block_at(&self, a: Species, x: &KernelPoint, b: Species, y: &KernelPoint) -> [[f64; 2]; 2] {
        let id = KernelOp::Identity;
        let mut k = [
            [self.kappa_at(x, y, id, id), self.kappa_at(x, y, id, b.op())],
            [self.kappa_at(x, y, a.op(), id), self.kappa_at(x, y, a.op(), b.op())],
        ];
        // charge-1 points carry weight X w
        let f = self.species_factor(a) * self.species_factor(b);
        if f != 1.0 {
            k.iter_mut().flatten().for_each(|v| *v *= f);
        }
        if a == Species::One && b == Species::One {
            k[1][1] += 0.25 * sgn(x.0.x - y.0.x);
        }
        k
    }

    fn species_factor(&self, s: Species) -> f64 {
        match s {
            Species::One => self.fugacity,
            Species::Two => 1.0,
        }
    }

    pub fn block(&self, a: Species, x: f64, b: Species, y: f64) -> [[f64; 2]; 2] {
        self.block_at(a, &self.point(x), b, &self.point(y))
    }

    /// The antisymmetric matrix whose Pfaffian gives `R_{l,m} / 2^l`.
    pub fn correlation_matrix(&self, xs: &[f64], ys: &[f64]) -> SkewMatrix {
        let pts: Vec<(Species, KernelPoint)> = xs
            .iter()
            .map(|&x| (Species::One, self.point(x)))
            .chain(ys.iter().map(|&y| (Species::Two, self.point(y))))
            .collect();
        let k = pts.len();
        let mut m = SkewMatrix::zeros(2 * k);
        for i in 0..k {
            for j in i..k {
                let blk = self.block_at(pts[i].0, &pts[i].1, pts[j].0, &pts[j].1);
                for a in 0..2 {
                    for b in 0..2 {
                        let (r, c) = (2 * i + a, 2 * j + b);
                        if r < c {
                            m.set(r, c, blk[a][b]);
                        }
                    }
                }
            }
        }
        m
    }

    /// `R_{l,m}(xs; ys) = 2^l Pf[...]`.
    pub fn correlation(&self, xs: &[f64], ys: &[f64]) -> Result<f64> {
        if xs.is_empty() && ys.is_empty() {
            return Err(Error::Domain("correlation needs at least one point".into()));
        }
        let m = self.correlation_matrix(xs, ys);
        let pf = pfaffian(&m)?;
        let value = 2f64.powi(xs.len() as i32) * pf;
        if value >= 0.0 {
            return Ok(value);
        }
        let entry_scale = (0..m.dim())
            .flat_map(|i| (0..m.dim()).map(move |j| (i, j)))
            .map(|(i, j)| m.get(i, j).abs())
            .fold(0.0, f64::max);
        let scale = 2f64.powi(xs.len() as i32) * entry_scale.powi((xs.len() + ys.len()) as i32);
        if value >= -NEGATIVE_CLIP_TOL * scale.max(f64::MIN_POSITIVE) {
            self.clipped.fetch_add(1, Ordering::Relaxed);
            log::warn!("clipping correlation value {value:e} to zero");
            Ok(0.0)
        } else {
            Err(Error::Tolerance(format!(
                "correlation function is negative: {value:e} (scale {scale:e})"
            )))
        }
    }

    /// Charge-1 density `R_{1,0}(x) = 2 X^2 (kappa eps1)(x, x)`.
    pub fn density_charge1(&self, x: f64) -> f64 {
        let p = self.point(x);
        2.0 * self.fugacity * self.fugacity * self.kappa_at(&p, &p, KernelOp::Identity, KernelOp::Eps1)
    }

    /// Charge-2 density `R_{0,1}(x) = (kappa eps2)(x, x)`.
    pub fn density_charge2(&self, x: f64) -> f64 {
        let p = self.point(x);
        self.kappa_at(&p, &p, KernelOp::Identity, KernelOp::Eps2)
    }

    pub fn density(&self, species: Species, x: f64) -> f64 {
        match species {
            Species::One => self.density_charge1(x),
            Species::Two => self.density_charge2(x),
        }
    }

    /// Densities on the scale where the supports fill `[-sqrt 2, sqrt 2]`:
    /// `s1(x) = R_{1,0}(sqrt(N) x) / sqrt 2`, `s2(x) = (2 / sqrt N) R_{0,1}(sqrt(N) x)`.
    pub fn scaled_density(&self, species: Species, x: f64) -> f64 {
        let rn = (self.n as f64).sqrt();
        match species {
            Species::One => self.density_charge1(rn * x) / std::f64::consts::SQRT_2,
            Species::Two => 2.0 / rn * self.density_charge2(rn * x),
        }
    }
}

fn sgn(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}
