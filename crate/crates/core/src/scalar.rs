//! Real scalar abstraction.
//!
//! Everything symbolic in this crate is generic over a real type `R`, with
//! complex coefficients stored as `Complex<R>`. Two instances ship: `f64` for
//! everyday evaluation and [`TwoFloat`] (double-double, ~32 significant
//! digits) for the Fock-space oracle, where normal-ordered expansions cancel
//! alternating binomial sums of size 1e13 and beyond.

use core::fmt::Debug;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
pub use twofloat::TwoFloat;

/// A real field usable as the coefficient type of ordered polynomials.
pub trait Real: Float + FloatConst + Debug + Send + Sync + 'static {
    /// Lift an `f64` exactly.
    fn of(x: f64) -> Self;
    /// Nearest `f64`.
    fn approx(self) -> f64;
    /// Lift an unsigned integer; exact while it fits the mantissa.
    fn of_uint(n: u128) -> Self;
    /// Nearest value to an arbitrary-size integer.
    fn of_big(n: &BigUint) -> Self;
    /// `self / rhs` to full working precision.
    fn quot(self, rhs: Self) -> Self;
}

impl Real for f64 {
    #[inline]
    fn of(x: f64) -> Self {
        x
    }
    #[inline]
    fn approx(self) -> f64 {
        self
    }
    #[inline]
    fn of_uint(n: u128) -> Self {
        n as f64
    }
    #[inline]
    fn of_big(n: &BigUint) -> Self {
        n.to_f64().unwrap_or(f64::INFINITY)
    }
    #[inline]
    fn quot(self, rhs: Self) -> Self {
        self / rhs
    }
}

impl Real for TwoFloat {
    #[inline]
    fn of(x: f64) -> Self {
        TwoFloat::from(x)
    }
    #[inline]
    fn approx(self) -> f64 {
        self.hi() + self.lo()
    }
    #[inline]
    fn of_uint(n: u128) -> Self {
        TwoFloat::from(n)
    }
    fn of_big(n: &BigUint) -> Self {
        let hi = n.to_f64().unwrap_or(f64::INFINITY);
        if !hi.is_finite() {
            return TwoFloat::from(hi);
        }
        let rest = BigInt::from(n.clone()) - BigInt::from_f64(hi).unwrap_or_default();
        TwoFloat::new_add(hi, rest.to_f64().unwrap_or(0.0))
    }
    // twofloat 0.8.4 forms the residual 1 - hi*(1/hi) without an fma, so its
    // `/` and `recip` keep only f64 accuracy. Long division by the leading
    // word needs exact products only.
    fn quot(self, rhs: Self) -> Self {
        let d = rhs.hi();
        let q1 = self.hi() / d;
        let r = self - rhs * q1;
        let q2 = r.hi() / d;
        let r = r - rhs * q2;
        let q3 = r.hi() / d;
        TwoFloat::new_add(q1, q2) + q3
    }
}

/// Complex number over `R`.
pub type Cx<R> = Complex<R>;

/// Double-double complex, the oracle's working precision.
pub type Cdd = Complex<TwoFloat>;

#[inline]
pub fn cx<R: Real>(re: f64, im: f64) -> Cx<R> {
    Complex::new(R::of(re), R::of(im))
}

#[inline]
pub fn real<R: Real>(x: R) -> Cx<R> {
    Complex::new(x, R::zero())
}

/// Lift a `Complex64` into `Complex<R>`.
#[inline]
pub fn lift<R: Real>(z: Complex<f64>) -> Cx<R> {
    Complex::new(R::of(z.re), R::of(z.im))
}

/// Round a `Complex<R>` to `Complex64`.
#[inline]
pub fn lower<R: Real>(z: Cx<R>) -> Complex<f64> {
    Complex::new(z.re.approx(), z.im.approx())
}

/// `|z|` as `f64`. `Complex::norm` over `TwoFloat` squares without scaling
/// and flushes magnitudes below ~1e-154 to zero.
#[inline]
pub fn abs<R: Real>(z: Cx<R>) -> f64 {
    Float::hypot(z.re.approx(), z.im.approx())
}

/// Real quotient at full precision.
#[inline]
pub fn rdiv<R: Real>(a: R, b: R) -> R {
    a.quot(b)
}

/// Complex by real quotient at full precision.
#[inline]
pub fn cdivr<R: Real>(z: Cx<R>, r: R) -> Cx<R> {
    Complex::new(z.re.quot(r), z.im.quot(r))
}

/// Complex quotient at full precision.
pub fn cdiv<R: Real>(z: Cx<R>, w: Cx<R>) -> Cx<R> {
    if w.im == R::zero() {
        return cdivr(z, w.re);
    }
    cdivr(z * w.conj(), w.norm_sqr())
}

/// Integer power by repeated squaring; `z^0 = 1` including `0^0`.
/// `x^e` by squaring, with `0^0 = 1`. twofloat's `powi` returns NaN for
/// `0^0`.
pub fn rpowu<R: Real>(x: R, mut e: u32) -> R {
    let mut base = x;
    let mut acc = R::one();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base;
        }
        base = base * base;
        e >>= 1;
    }
    acc
}

pub fn powu<R: Real>(z: Cx<R>, mut e: u32) -> Cx<R> {
    let mut base = z;
    let mut acc = Cx::new(R::one(), R::zero());
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base;
        }
        base = base * base;
        e >>= 1;
    }
    acc
}

/// `n!` in `R` (floating, not exact beyond the mantissa).
pub fn factorial<R: Real>(n: u32) -> R {
    (1..=n).fold(R::one(), |acc, k| acc * R::of(k as f64))
}
