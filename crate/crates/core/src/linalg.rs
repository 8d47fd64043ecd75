//! Dense real matrices, antisymmetric matrices and Pfaffians.

use crate::error::{Error, Result};

/// Refuse to invert matrices whose infinity-norm condition number exceeds this.
pub const CONDITION_LIMIT: f64 = 1e12;

/// Largest dimension accepted by the cofactor-expansion Pfaffian.
pub const ORACLE_MAX_DIM: usize = 12;

/// Largest dimension accepted by the perfect-matching Pfaffian.
pub const MATCHING_MAX_DIM: usize = 8;

/// Largest dimension accepted by the subset-sum expansion of `Pf(A + B)`.
pub const SUM_EXPANSION_MAX_DIM: usize = 10;

/// Row-major dense real matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Self::from_fn(r, c, |i, j| rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension("shape mismatch in subtraction".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)].abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Dense antisymmetric matrix. Writes through [`SkewMatrix::set`] keep `a_ji = -a_ij`.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewMatrix {
    inner: Matrix,
}

impl SkewMatrix {
    pub fn zeros(n: usize) -> Self {
        SkewMatrix {
            inner: Matrix::zeros(n, n),
        }
    }

    /// Builds the matrix from its strict upper triangle `f(i, j)`, `i < j`.
    pub fn from_upper(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut s = Self::zeros(n);
        for i in 0..n {
            for j in i + 1..n {
                s.set(i, j, f(i, j));
            }
        }
        s
    }

    /// Accepts a square matrix if it is antisymmetric to within `tol` (absolute).
    ///
    /// The stored matrix is the exact antisymmetric part.
    pub fn from_matrix(m: &Matrix, tol: f64) -> Result<Self> {
        if m.rows != m.cols {
            return Err(Error::Dimension("antisymmetric matrix must be square".into()));
        }
        let n = m.rows;
        for i in 0..n {
            for j in i..n {
                let r = (m[(i, j)] + m[(j, i)]).abs();
                if r > tol {
                    return Err(Error::Domain(format!(
                        "matrix is not antisymmetric: |a[{i},{j}] + a[{j},{i}]| = {r:e}"
                    )));
                }
            }
        }
        Ok(Self::from_upper(n, |i, j| 0.5 * (m[(i, j)] - m[(j, i)])))
    }

    pub fn dim(&self) -> usize {
        self.inner.rows
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.inner[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        if i == j {
            debug_assert!(v == 0.0, "diagonal of an antisymmetric matrix is zero");
            return;
        }
        self.inner[(i, j)] = v;
        self.inner[(j, i)] = -v;
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.inner
    }

    pub fn add(&self, other: &SkewMatrix) -> Result<SkewMatrix> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension(format!(
                "cannot add {0}x{0} and {1}x{1}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(SkewMatrix::from_upper(self.dim(), |i, j| {
            self.get(i, j) + other.get(i, j)
        }))
    }

    pub fn scaled(&self, c: f64) -> SkewMatrix {
        SkewMatrix::from_upper(self.dim(), |i, j| c * self.get(i, j))
    }

    /// Principal submatrix on the given (increasing) indices.
    pub fn principal(&self, idx: &[usize]) -> SkewMatrix {
        SkewMatrix::from_upper(idx.len(), |a, b| self.get(idx[a], idx[b]))
    }

    /// `X A X^T`, again antisymmetric.
    pub fn congruence(&self, x: &Matrix) -> Result<SkewMatrix> {
        let xa = x.mul(&self.inner)?;
        let m = xa.mul(&x.transpose())?;
        SkewMatrix::from_matrix(&m, f64::INFINITY)
    }
}

/// A strictly increasing selection of indices from `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexSubset {
    n: usize,
    indices: Vec<usize>,
}

impl IndexSubset {
    pub fn new(n: usize, indices: Vec<usize>) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain("subset indices must be strictly increasing".into()));
        }
        if let Some(&last) = indices.last() {
            if last >= n {
                return Err(Error::Index {
                    index: last,
                    limit: n,
                });
            }
        }
        Ok(IndexSubset { n, indices })
    }

    /// Subset whose members are the set bits of `mask`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        IndexSubset {
            n,
            indices: (0..n).filter(|i| mask >> i & 1 == 1).collect(),
        }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn complement(&self) -> IndexSubset {
        IndexSubset {
            n: self.n,
            indices: (0..self.n).filter(|i| !self.indices.contains(i)).collect(),
        }
    }

    /// Sign of the permutation that lists the subset first and its complement after.
    pub fn sign(&self) -> f64 {
        // Each member i must hop over the (i - position) smaller non-members.
        let hops: usize = self
            .indices
            .iter()
            .enumerate()
            .map(|(pos, &i)| i - pos)
            .sum();
        if hops % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

/// Pfaffian by skew-symmetric Gaussian elimination with partial pivoting.
///
/// Odd dimensions are an error; see [`pfaffian_allow_odd`].
pub fn pfaffian(a: &SkewMatrix) -> Result<f64> {
    if a.dim() % 2 == 1 {
        return Err(Error::Domain(format!(
            "Pfaffian of odd dimension {} requested",
            a.dim()
        )));
    }
    Ok(pfaffian_ltl(a.as_matrix().clone()))
}

/// Like [`pfaffian`] but returns 0 for odd dimensions.
pub fn pfaffian_allow_odd(a: &SkewMatrix) -> f64 {
    if a.dim() % 2 == 1 {
        0.0
    } else {
        pfaffian_ltl(a.as_matrix().clone())
    }
}

fn pfaffian_ltl(mut m: Matrix) -> f64 {
    let n = m.rows;
    let mut pf = 1.0;
    let mut k = 0;
    while k + 1 < n {
        let mut kp = k + 1;
        let mut best = m[(k + 1, k)].abs();
        for i in k + 2..n {
            let v = m[(i, k)].abs();
            if v > best {
                best = v;
                kp = i;
            }
        }
        if kp != k + 1 {
            for j in 0..n {
                let t = m[(k + 1, j)];
                m[(k + 1, j)] = m[(kp, j)];
                m[(kp, j)] = t;
            }
            for i in 0..n {
                let t = m[(i, k + 1)];
                m[(i, k + 1)] = m[(i, kp)];
                m[(i, kp)] = t;
            }
            pf = -pf;
        }
        if m[(k + 1, k)] == 0.0 {
            return 0.0;
        }
        let pivot = m[(k, k + 1)];
        pf *= pivot;
        if k + 2 < n {
            let tau: Vec<f64> = (k + 2..n).map(|j| m[(k, j)] / pivot).collect();
            let col: Vec<f64> = (k + 2..n).map(|i| m[(i, k + 1)]).collect();
            for (a, i) in (k + 2..n).enumerate() {
                for (b, j) in (k + 2..n).enumerate() {
                    m[(i, j)] += tau[a] * col[b] - col[a] * tau[b];
                }
            }
        }
        k += 2;
    }
    pf
}

/// Pfaffian by expansion along the first row. Exponential cost; a test oracle.
pub fn pfaffian_oracle(a: &SkewMatrix) -> Result<f64> {
    let n = a.dim();
    if n % 2 == 1 {
        return Err(Error::Domain("Pfaffian of odd dimension requested".into()));
    }
    if n > ORACLE_MAX_DIM {
        return Err(Error::Domain(format!(
            "expansion oracle refuses dimension {n} > {ORACLE_MAX_DIM}"
        )));
    }
    let idx: Vec<usize> = (0..n).collect();
    Ok(expand_first_row(a, &idx))
}

fn expand_first_row(a: &SkewMatrix, idx: &[usize]) -> f64 {
    if idx.is_empty() {
        return 1.0;
    }
    let first = idx[0];
    let mut total = 0.0;
    for p in 1..idx.len() {
        let rest: Vec<usize> = idx[1..]
            .iter()
            .enumerate()
            .filter(|&(q, _)| q + 1 != p)
            .map(|(_, &i)| i)
            .collect();
        let sign = if p % 2 == 1 { 1.0 } else { -1.0 };
        total += sign * a.get(first, idx[p]) * expand_first_row(a, &rest);
    }
    total
}

/// Pfaffian as a signed sum over perfect matchings. A second test oracle.
pub fn pfaffian_matching_sum(a: &SkewMatrix) -> Result<f64> {
    let n = a.dim();
    if n % 2 == 1 {
        return Err(Error::Domain("Pfaffian of odd dimension requested".into()));
    }
    if n > MATCHING_MAX_DIM {
        return Err(Error::Domain(format!(
            "matching-sum oracle refuses dimension {n} > {MATCHING_MAX_DIM}"
        )));
    }
    let mut total = 0.0;
    let mut perm = Vec::with_capacity(n);
    let mut used = vec![false; n];
    matchings(a, &mut used, &mut perm, &mut total);
    Ok(total)
}

fn matchings(a: &SkewMatrix, used: &mut [bool], perm: &mut Vec<usize>, total: &mut f64) {
    let Some(i) = used.iter().position(|u| !u) else {
        let mut inversions = 0;
        for x in 0..perm.len() {
            for y in x + 1..perm.len() {
                if perm[x] > perm[y] {
                    inversions += 1;
                }
            }
        }
        let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
        let prod: f64 = perm.chunks(2).map(|p| a.get(p[0], p[1])).product();
        *total += sign * prod;
        return;
    };
    used[i] = true;
    for j in i + 1..used.len() {
        if used[j] {
            continue;
        }
        used[j] = true;
        perm.push(i);
        perm.push(j);
        matchings(a, used, perm, total);
        perm.truncate(perm.len() - 2);
        used[j] = false;
    }
    used[i] = false;
}

/// `Pf(A + B)` as the sum over even subsets `t` of `sgn(t) Pf(A_t) Pf(B_t')`.
pub fn pfaffian_sum_expansion(a: &SkewMatrix, b: &SkewMatrix) -> Result<f64> {
    let n = a.dim();
    if b.dim() != n {
        return Err(Error::Dimension(format!(
            "Pfaffian sum needs equal dimensions, got {n} and {}",
            b.dim()
        )));
    }
    if n % 2 == 1 {
        return Err(Error::Domain("Pfaffian of odd dimension requested".into()));
    }
    if n > SUM_EXPANSION_MAX_DIM {
        return Err(Error::Domain(format!(
            "sum expansion refuses dimension {n} > {SUM_EXPANSION_MAX_DIM}"
        )));
    }
    let mut total = 0.0;
    for mask in 0u64..(1u64 << n) {
        if mask.count_ones() % 2 == 1 {
            continue;
        }
        let t = IndexSubset::from_mask(n, mask);
        let tc = t.complement();
        let pa = pfaffian_ltl(a.principal(t.indices()).inner);
        let pb = pfaffian_ltl(b.principal(tc.indices()).inner);
        total += t.sign() * pa * pb;
    }
    Ok(total)
}

/// LU factorization with partial pivoting, `P A = L U`.
#[derive(Clone, Debug)]
pub struct Lu {
    lu: Matrix,
    perm: Vec<usize>,
    sign: f64,
    singular: bool,
}

impl Lu {
    pub fn new(a: &Matrix) -> Result<Self> {
        if a.rows != a.cols {
            return Err(Error::Dimension("LU needs a square matrix".into()));
        }
        let n = a.rows;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let mut singular = false;
        for k in 0..n {
            let mut p = k;
            for i in k + 1..n {
                if lu[(i, k)].abs() > lu[(p, k)].abs() {
                    p = i;
                }
            }
            if lu[(p, k)] == 0.0 {
                singular = true;
                continue;
            }
            if p != k {
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = t;
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let d = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / d;
                lu[(i, k)] = f;
                if f != 0.0 {
                    for j in k + 1..n {
                        lu[(i, j)] -= f * lu[(k, j)];
                    }
                }
            }
        }
        Ok(Lu {
            lu,
            perm,
            sign,
            singular,
        })
    }

    pub fn determinant(&self) -> f64 {
        if self.singular {
            return 0.0;
        }
        (0..self.lu.rows).map(|i| self.lu[(i, i)]).product::<f64>() * self.sign
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.lu.rows;
        if self.singular {
            return Err(Error::IllConditioned {
                condition: f64::INFINITY,
            });
        }
        if b.len() != n {
            return Err(Error::Dimension("right-hand side length".into()));
        }
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                x[i] -= self.lu[(i, j)] * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                x[i] -= self.lu[(i, j)] * x[j];
            }
            x[i] /= self.lu[(i, i)];
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        let n = self.lu.rows;
        let mut inv = Matrix::zeros(n, n);
        let mut e = vec![0.0; n];
        for j in 0..n {
            e.iter_mut().for_each(|v| *v = 0.0);
            e[j] = 1.0;
            let col = self.solve(&e)?;
            for i in 0..n {
                inv[(i, j)] = col[i];
            }
        }
        Ok(inv)
    }
}

pub fn determinant(a: &Matrix) -> Result<f64> {
    Ok(Lu::new(a)?.determinant())
}

/// `C^{-T}` together with the infinity-norm condition number of `C`.
pub fn inverse_transpose(c: &Matrix) -> Result<(Matrix, f64)> {
    let lu = Lu::new(c)?;
    let inv = lu.inverse()?;
    let condition = c.norm_inf() * inv.norm_inf();
    if !condition.is_finite() || condition > CONDITION_LIMIT {
        return Err(Error::IllConditioned { condition });
    }
    Ok((inv.transpose(), condition))
}

/// Vandermonde matrix with plain columns for `alpha` and (value, derivative)
/// column pairs for each `beta`, plus its determinant.
pub fn confluent_vandermonde(alpha: &[f64], beta: &[f64]) -> Result<(Matrix, f64)> {
    let n = alpha.len() + 2 * beta.len();
    let mut v = Matrix::zeros(n, n);
    for (c, &a) in alpha.iter().enumerate() {
        let mut p = 1.0;
        for r in 0..n {
            v[(r, c)] = p;
            p *= a;
        }
    }
    for (m, &b) in beta.iter().enumerate() {
        let c = alpha.len() + 2 * m;
        let mut p = 1.0;
        for r in 0..n {
            v[(r, c)] = p;
            if r + 1 < n {
                v[(r + 1, c + 1)] = (r + 1) as f64 * p;
            }
            p *= b;
        }
    }
    let det = determinant(&v)?;
    Ok((v, det))
}

/// `prod_{j<k}(a_k - a_j) prod_{m<n}(b_m - b_n)^4 prod(a - b)^2`.
pub fn interaction_product(alpha: &[f64], beta: &[f64]) -> f64 {
    let mut p = 1.0;
    for k in 0..alpha.len() {
        for j in 0..k {
            p *= alpha[k] - alpha[j];
        }
    }
    for m in 0..beta.len() {
        for n in m + 1..beta.len() {
            p *= (beta[m] - beta[n]).powi(4);
        }
    }
    for a in alpha {
        for b in beta {
            p *= (a - b).powi(2);
        }
    }
    p
}
