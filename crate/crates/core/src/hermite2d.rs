//! Incomplete 2-D Hermite polynomials
//!
//! ```text
//! h_{m,n}(x, y | tau) = sum_{i=0}^{min(m,n)} C(m,i) C(n,i) i! tau^i x^(m-i) y^(n-i)
//! ```
//!
//! together with ordinary Laguerre polynomials and the closed forms tying
//! them together (generating function, single-axis partial sums, diagonal
//! Laguerre relation). The coefficient table is exact (big integers) and capped at
//! `m + n <= DEGREE_CAP`; evaluation always goes through that table.

use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::scalar::{cdiv, cdivr, factorial, powu, real, Cx, Real};

/// Largest `m + n` for which exact integer contraction coefficients are built.
pub const DEGREE_CAP: usize = 64;

/// Exact contraction coefficients `c_i = C(m,i) C(n,i) i!` of `h_{m,n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct H2Coeffs {
    m: u32,
    n: u32,
    terms: Vec<(u32, BigUint)>,
}

impl H2Coeffs {
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `(i, c_i)` for `i = 0..=min(m, n)`.
    pub fn terms(&self) -> &[(u32, BigUint)] {
        &self.terms
    }

    pub fn max_coeff(&self) -> BigUint {
        self.terms.iter().map(|(_, c)| c).max().cloned().unwrap_or_else(BigUint::one)
    }
}

/// Exact coefficient table of `h_{m,n}`.
pub fn h2_coeffs(m: u32, n: u32) -> Result<H2Coeffs> {
    let degree = (m + n) as usize;
    if degree > DEGREE_CAP {
        return Err(Error::DegreeTooLarge { degree, cap: DEGREE_CAP });
    }
    let k = m.min(n);
    let mut terms = Vec::with_capacity(k as usize + 1);
    // c_{i+1} = c_i (m-i)(n-i) / (i+1), exact at every step
    let mut c = BigUint::one();
    for i in 0..=k {
        if i > 0 {
            c = c * (m - i + 1) * (n - i + 1) / i;
        }
        terms.push((i, c.clone()));
    }
    Ok(H2Coeffs { m, n, terms })
}

/// `h_{m,n}(x, y | tau)` via the exact coefficient table.
pub fn h2_eval<R: Real>(m: u32, n: u32, x: Cx<R>, y: Cx<R>, tau: Cx<R>) -> Result<Cx<R>> {
    let table = h2_coeffs(m, n)?;
    Ok(eval_table(&table, x, y, tau))
}

/// Evaluate a prebuilt table; lets hot loops skip the rebuild.
pub fn eval_table<R: Real>(table: &H2Coeffs, x: Cx<R>, y: Cx<R>, tau: Cx<R>) -> Cx<R> {
    let (m, n) = (table.m, table.n);
    let k = m.min(n);
    // powers x^(m-k..=m), y^(n-k..=n)
    let mut xp = powu(x, m - k);
    let mut yp = powu(y, n - k);
    let mut acc = Cx::new(R::zero(), R::zero());
    // Horner in tau from the highest contraction down: i = k, k-1, ..., 0
    for (i, c) in table.terms.iter().rev() {
        let i = *i;
        let term = real(R::of_big(c)) * xp * yp;
        acc = if i == k { term } else { acc * tau + term };
        xp = xp * x;
        yp = yp * y;
    }
    acc
}

/// Ordinary Laguerre polynomial `L_n(z)` by the three-term recurrence
/// `(k+1) L_{k+1} = (2k+1-z) L_k - k L_{k-1}`.
pub fn laguerre_eval<R: Real>(n: u32, z: Cx<R>) -> Cx<R> {
    let one = real(R::one());
    if n == 0 {
        return one;
    }
    let mut prev = one;
    let mut cur = one - z;
    for k in 1..n {
        let kf = R::of(k as f64);
        let next = cdivr(real(R::of((2 * k + 1) as f64)) * cur - z * cur - real(kf) * prev, kf + R::one());
        prev = cur;
        cur = next;
    }
    cur
}

/// `h_{n,n}(x, y | tau)` through the Laguerre relation
/// `tau^n n! L_n(-x y / tau)`. Only defined for `tau != 0`.
pub fn h2_diag_via_laguerre<R: Real>(n: u32, x: Cx<R>, y: Cx<R>, tau: Cx<R>) -> Result<Cx<R>> {
    if tau.re == R::zero() && tau.im == R::zero() {
        return Err(Error::ZeroTau);
    }
    let z = cdiv(-(x * y), tau);
    Ok(powu(tau, n) * real(factorial::<R>(n)) * laguerre_eval(n, z))
}

/// Which index of `h_{m,n}` a single-axis partial sum runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// `sum_m lam^m / m! h_{m,n}`, closed form `(y + tau lam)^n e^{lam x}`.
    First,
    /// `sum_n lam^n / n! h_{m,n}`, closed form `(x + tau lam)^m e^{lam y}`.
    Second,
}

/// Closed form of the single-axis partial sum; `fixed` is the index not
/// summed over.
pub fn h2_partial_sum_closed<R: Real>(
    fixed: u32,
    lam: Cx<R>,
    x: Cx<R>,
    y: Cx<R>,
    tau: Cx<R>,
    axis: Axis,
) -> Cx<R> {
    match axis {
        Axis::First => powu(y + tau * lam, fixed) * (lam * x).exp(),
        Axis::Second => powu(x + tau * lam, fixed) * (lam * y).exp(),
    }
}

/// Truncated series `sum_{k <= terms} lam^k / k! h` along `axis`.
pub fn h2_partial_sum_series<R: Real>(
    fixed: u32,
    lam: Cx<R>,
    x: Cx<R>,
    y: Cx<R>,
    tau: Cx<R>,
    axis: Axis,
    terms: u32,
) -> Result<Cx<R>> {
    let mut acc = Cx::new(R::zero(), R::zero());
    let mut weight = real(R::one());
    for k in 0..=terms {
        if k > 0 {
            weight = cdivr(weight * lam, R::of(k as f64));
        }
        let h = match axis {
            Axis::First => h2_eval(k, fixed, x, y, tau)?,
            Axis::Second => h2_eval(fixed, k, x, y, tau)?,
        };
        acc = acc + weight * h;
    }
    Ok(acc)
}

/// Truncated double generating series
/// `sum_{m,n <= terms} lam^m mu^n / (m! n!) h_{m,n}(x, y | tau)`.
pub fn h2_generating_series<R: Real>(
    lam: Cx<R>,
    mu: Cx<R>,
    x: Cx<R>,
    y: Cx<R>,
    tau: Cx<R>,
    terms: u32,
) -> Result<Cx<R>> {
    let mut acc = Cx::new(R::zero(), R::zero());
    let mut wm = real(R::one());
    for m in 0..=terms {
        if m > 0 {
            wm = cdivr(wm * lam, R::of(m as f64));
        }
        let mut wn = real(R::one());
        for n in 0..=terms {
            if n > 0 {
                wn = cdivr(wn * mu, R::of(n as f64));
            }
            acc = acc + wm * wn * h2_eval(m, n, x, y, tau)?;
        }
    }
    Ok(acc)
}

/// `e^{lam x + mu y + tau lam mu}`.
pub fn h2_generating_closed<R: Real>(lam: Cx<R>, mu: Cx<R>, x: Cx<R>, y: Cx<R>, tau: Cx<R>) -> Cx<R> {
    (lam * x + mu * y + tau * lam * mu).exp()
}
