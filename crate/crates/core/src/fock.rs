//! Truncated Fock-space oracle.
//!
//! Operators become dense `D x D` matrices over `|0>, ..., |D-1>`. An ordered
//! polynomial is evaluated by converting it to normal order and summing
//! `c (A†)^p A^q` with plain matrix products. Normal-ordered products are
//! exact on every level of the truncated space (lowering first never leaves
//! it), so the only approximation left in a comparison is the cutoff of the
//! symbolic side. Edge levels are still excluded from distances via an
//! interior margin.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Sub};

use crate::error::{Error, Result};
use crate::ordered::{convert_poly, CoherentForm, OrderParameter, OrderedExp, OrderedPoly};
use crate::scalar::{abs, cdivr, rdiv, real, Cx, Real};

pub const MAX_DIM: usize = 128;

/// Levels excluded from [`matrix_distance`] by default.
pub const DEFAULT_MARGIN: usize = 5;

fn check_dim(dim: usize, min: usize) -> Result<()> {
    if dim < min || dim > MAX_DIM {
        Err(Error::BadDimension { dim, min, max: MAX_DIM })
    } else {
        Ok(())
    }
}

/// Dense complex matrix on the truncated Fock basis, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct FockMatrix<R: Real = f64> {
    dim: usize,
    data: Vec<Cx<R>>,
}

impl<R: Real> FockMatrix<R> {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![Cx::new(R::zero(), R::zero()); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for k in 0..dim {
            m[(k, k)] = real(R::one());
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Cx<R> {
        self.data[row * self.dim + col]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scale(&self, c: Cx<R>) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|&z| z * c).collect() }
    }

    pub fn trace(&self) -> Cx<R> {
        (0..self.dim).fold(Cx::new(R::zero(), R::zero()), |acc, k| acc + self[(k, k)])
    }

    /// `X^k`, with `X^0 = I`.
    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::identity(self.dim), |acc, _| &acc * self)
    }

    /// `|v><w|`.
    pub fn outer(v: &[Cx<R>], w: &[Cx<R>]) -> Self {
        assert_eq!(v.len(), w.len());
        let dim = v.len();
        let mut out = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                out[(i, j)] = v[i] * w[j].conj();
            }
        }
        out
    }

    pub fn apply(&self, v: &[Cx<R>]) -> Vec<Cx<R>> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| {
                (0..self.dim).fold(Cx::new(R::zero(), R::zero()), |acc, j| acc + self[(i, j)] * v[j])
            })
            .collect()
    }

    /// Round entries to `f64`.
    pub fn lower(&self) -> FockMatrix<f64> {
        FockMatrix { dim: self.dim, data: self.data.iter().map(|&z| crate::scalar::lower(z)).collect() }
    }
}

impl<R: Real> Index<(usize, usize)> for FockMatrix<R> {
    type Output = Cx<R>;
    fn index(&self, (i, j): (usize, usize)) -> &Cx<R> {
        &self.data[i * self.dim + j]
    }
}

impl<R: Real> IndexMut<(usize, usize)> for FockMatrix<R> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cx<R> {
        &mut self.data[i * self.dim + j]
    }
}

impl<R: Real> Mul for &FockMatrix<R> {
    type Output = FockMatrix<R>;

    fn mul(self, rhs: &FockMatrix<R>) -> FockMatrix<R> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in product");
        let d = self.dim;
        let zero = R::zero();
        let mut out = FockMatrix::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self[(i, k)];
                if a.re == zero && a.im == zero {
                    continue;
                }
                for j in 0..d {
                    let b = rhs[(k, j)];
                    out[(i, j)] = out[(i, j)] + a * b;
                }
            }
        }
        out
    }
}

impl<R: Real> Add for &FockMatrix<R> {
    type Output = FockMatrix<R>;
    fn add(self, rhs: &FockMatrix<R>) -> FockMatrix<R> {
        assert_eq!(self.dim, rhs.dim);
        FockMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a + b).collect(),
        }
    }
}

impl<R: Real> Sub for &FockMatrix<R> {
    type Output = FockMatrix<R>;
    fn sub(self, rhs: &FockMatrix<R>) -> FockMatrix<R> {
        assert_eq!(self.dim, rhs.dim);
        FockMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a - b).collect(),
        }
    }
}

/// Lowering and raising matrices `(A, A†)` with `A[k-1][k] = sqrt(k)`.
pub fn ladder<R: Real>(dim: usize) -> Result<(FockMatrix<R>, FockMatrix<R>)> {
    check_dim(dim, 2)?;
    let mut a = FockMatrix::zeros(dim);
    for k in 1..dim {
        a[(k - 1, k)] = real(R::of(k as f64).sqrt());
    }
    let ad = a.adjoint();
    Ok((a, ad))
}

/// Matrix of an ordered polynomial: convert to normal order, then
/// `sum c_{p,q} (A†)^p A^q`.
pub fn eval_poly<R: Real>(poly: &OrderedPoly<R>, dim: usize) -> Result<FockMatrix<R>> {
    let normal = convert_poly(poly, OrderParameter::NORMAL)?;
    let (a, ad) = ladder::<R>(dim)?;
    // powers beyond dim - 1 vanish identically
    let mut raise = vec![FockMatrix::identity(dim)];
    let mut lower = vec![FockMatrix::identity(dim)];
    let mut out = FockMatrix::zeros(dim);
    for (p, q, c) in normal.terms() {
        let (p, q) = (p as usize, q as usize);
        if p >= dim || q >= dim {
            continue;
        }
        while raise.len() <= p {
            let next = raise.last().map(|m| m * &ad).unwrap_or_else(|| FockMatrix::identity(dim));
            raise.push(next);
        }
        while lower.len() <= q {
            let next = lower.last().map(|m| m * &a).unwrap_or_else(|| FockMatrix::identity(dim));
            lower.push(next);
        }
        let term = &raise[p] * &lower[q];
        for (o, t) in out.data.iter_mut().zip(&term.data) {
            *o = *o + c * *t;
        }
    }
    Ok(out)
}

/// Cutoff for tight oracle checks of ordered exponentials. At series ratio
/// 1/2 and `D = 40` the interior levels settle to double-double rounding by
/// about 300 terms.
pub const ORACLE_CUTOFF: u32 = 400;

/// `|lambda| (1 - s) / 2`: the geometric ratio of the normal-ordered series
/// of `{e^{lambda a†a}}_s`. At or above 1 the oracle image diverges as the
/// cutoff grows, whatever the working precision.
pub fn series_ratio<R: Real>(e: &OrderedExp<R>) -> f64 {
    abs(e.lambda) * (1.0 - e.order.value()) / 2.0
}

/// Oracle image of an ordered exponential, expanded to `cutoff` terms.
///
/// Same truncated series as [`exp_to_poly`](crate::ordered::exp_to_poly)
/// followed by [`eval_poly`], but each term
/// `lambda^k / k! {(a†)^(p+k) a^(q+k)}_s` goes to normal order on the fly and
/// is summed per normal monomial with a ratio recurrence in `k`.
/// The bare weight `lambda^k / k!` is never stored, so cutoffs far past its
/// underflow point stay meaningful.
pub fn eval_exp<R: Real>(e: &OrderedExp<R>, dim: usize, cutoff: u32) -> Result<FockMatrix<R>> {
    check_dim(dim, 1)?;
    let hermite = e.hermite_part()?;
    let tau = real(R::of(e.order.contraction_to(OrderParameter::NORMAL)));
    let rate = e.lambda * tau;
    let top = dim as u32;
    let mut normal = Vec::new();
    for (p, q, c) in hermite.terms() {
        // normal monomial (a†)^pp a^qq collects k = pp - p + i for i contractions
        for pp in 0..top {
            if pp + q < p || pp + q - p >= top {
                continue;
            }
            let qq = pp + q - p;
            let k0 = pp.saturating_sub(p);
            if k0 > cutoff {
                continue;
            }
            let i0 = p.saturating_sub(pp);
            let mut term = real(R::one());
            for j in 1..=k0 {
                term = cdivr(term * e.lambda, R::of(j as f64));
            }
            for j in 0..i0 {
                let f = R::of(((p - j) * (q - j)) as f64);
                term = cdivr(term * tau * real(f), R::of((j + 1) as f64));
            }
            let mut sum = term;
            for (i, k) in (i0..).zip(k0..cutoff) {
                let num = R::of(((p + k + 1) as f64) * ((q + k + 1) as f64));
                let den = R::of(((k + 1) as f64) * ((i + 1) as f64));
                term = cdivr(term * rate * real(num), den);
                if term.re == R::zero() && term.im == R::zero() {
                    break;
                }
                sum = sum + term;
            }
            normal.push((pp, qq, c * sum));
        }
    }
    eval_poly(&OrderedPoly::from_terms(OrderParameter::NORMAL, normal), dim)
}

/// Oracle image of a coherent-projector expansion.
pub fn eval_coherent<R: Real>(form: &CoherentForm<R>, dim: usize, cutoff: u32) -> Result<FockMatrix<R>> {
    eval_poly(&form.to_poly(cutoff)?.poly, dim)
}

/// `E_{nm} = |n><m|`.
pub fn basis_projector<R: Real>(n: usize, m: usize, dim: usize) -> Result<FockMatrix<R>> {
    check_dim(dim, 1)?;
    if n >= dim || m >= dim {
        return Err(Error::IndexOutOfRange { row: n, col: m, dim });
    }
    let mut out = FockMatrix::zeros(dim);
    out[(n, m)] = real(R::one());
    Ok(out)
}

/// Largest tolerated dropped probability `sum_{k >= D} |beta|^(2k) e^{-|beta|^2} / k!`.
pub const COHERENT_TAIL_TOL: f64 = 1e-12;

/// Truncated coherent state `v_k = e^{-|beta|^2/2} beta^k / sqrt(k!)`.
pub fn coherent_vector<R: Real>(beta: Cx<R>, dim: usize) -> Result<Vec<Cx<R>>> {
    check_dim(dim, 1)?;
    let mean: f64 = beta.norm_sqr().approx();
    // Poisson tail past dim - 1, summed in f64
    let mut term = <f64 as num_traits::Float>::exp(-mean);
    for k in 1..=dim {
        term *= mean / k as f64;
    }
    let mut tail = 0.0f64;
    let mut k = dim;
    loop {
        tail += term;
        k += 1;
        term *= mean / k as f64;
        if term == 0.0 || (k as f64 > mean && term <= tail * 1e-17) {
            break;
        }
    }
    if tail >= COHERENT_TAIL_TOL {
        return Err(Error::TruncationTooCoarse { tail, dim });
    }
    let mut out = Vec::with_capacity(dim);
    let mut v = real(rdiv(-beta.norm_sqr(), R::of(2.0)).exp());
    for k in 0..dim {
        if k > 0 {
            v = cdivr(v * beta, R::of(k as f64).sqrt());
        }
        out.push(v);
    }
    Ok(out)
}

/// Max-abs entry difference over the leading `(D - margin)` block.
pub fn matrix_distance<R: Real>(x: &FockMatrix<R>, y: &FockMatrix<R>, margin: usize) -> Result<f64> {
    if x.dim != y.dim {
        return Err(Error::DimensionMismatch { left: x.dim, right: y.dim });
    }
    let keep = x.dim.saturating_sub(margin);
    let mut worst = 0.0f64;
    for i in 0..keep {
        for j in 0..keep {
            worst = worst.max(abs(x[(i, j)] - y[(i, j)]));
        }
    }
    Ok(worst)
}
