//! Polynomials and exponential closed forms under a single s-ordering symbol.
//!
//! Inside `{...}_s` the ladder symbols `a†`, `a` commute, so a polynomial is a
//! map from exponent pairs `(p, q)` (meaning `a†^p a^q`) to complex
//! coefficients. Moving between orderings uses the contraction rule
//!
//! ```text
//! {a†^p a^q}_s = sum_i C(p,i) C(q,i) i! ((t-s)/2)^i {a†^(p-i) a^(q-i)}_t
//! ```
//!
//! which is the coefficient image of `h_{p,q}(., . | (t-s)/2)`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::hermite2d::{eval_table, h2_coeffs, H2Coeffs};
use crate::scalar::{abs, cdiv, cdivr, factorial, lift, lower, powu, rdiv, real, rpowu, Cx, Real};

/// Largest total degree `p + q` a polynomial conversion will handle.
///
/// Conversions compute contraction weights in the coefficient field by ratio
/// recurrence, so this bounds work, not exactness. Exact integer tables stay
/// capped at [`crate::hermite2d::DEGREE_CAP`].
pub const POLY_DEGREE_CAP: usize = 1024;

/// Coefficients with magnitude below this are dropped (true underflow only).
pub const PRUNE: f64 = 1e-300;

/// Default number of exponential-series terms kept by [`exp_to_poly`].
pub const DEFAULT_CUTOFF: u32 = 40;

const POLE_EPS: f64 = 1e-14;

/// Ordering label `s`: 1 normal, 0 Weyl (symmetric), -1 antinormal.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct OrderParameter(f64);

impl OrderParameter {
    pub const NORMAL: Self = Self(1.0);
    pub const WEYL: Self = Self(0.0);
    pub const ANTINORMAL: Self = Self(-1.0);

    /// # Panics
    /// If `s` is not finite.
    pub fn new(s: f64) -> Self {
        assert!(s.is_finite(), "ordering parameter must be finite, got {s}");
        Self(s)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// The reflected parameter `-s`.
    pub fn reflected(self) -> Self {
        Self(-self.0)
    }

    /// Contraction weight `(t - s) / 2` for moving from `self` to `to`.
    pub fn contraction_to(self, to: OrderParameter) -> f64 {
        (to.0 - self.0) / 2.0
    }
}

impl From<f64> for OrderParameter {
    fn from(s: f64) -> Self {
        Self::new(s)
    }
}

impl fmt::Display for OrderParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `sum c_{p,q} {a†^p a^q}_s`, kept normalized (no stored zeros).
#[derive(Debug, Clone, PartialEq)]
pub struct OrderedPoly<R: Real = f64> {
    order: OrderParameter,
    terms: BTreeMap<(u32, u32), Cx<R>>,
}

impl<R: Real> OrderedPoly<R> {
    pub fn zero(order: OrderParameter) -> Self {
        Self { order, terms: BTreeMap::new() }
    }

    pub fn constant(order: OrderParameter, c: Cx<R>) -> Self {
        let mut poly = Self::zero(order);
        poly.add_term(0, 0, c);
        poly
    }

    pub fn monomial(order: OrderParameter, p: u32, q: u32, c: Cx<R>) -> Self {
        let mut poly = Self::zero(order);
        poly.add_term(p, q, c);
        poly
    }

    /// Build from `(p, q, c)` triples; repeated keys are summed.
    pub fn from_terms<I>(order: OrderParameter, terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32, Cx<R>)>,
    {
        let mut poly = Self::zero(order);
        for (p, q, c) in terms {
            poly.accumulate(p, q, c);
        }
        poly.prune();
        poly
    }

    pub fn order(&self) -> OrderParameter {
        self.order
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `{a†^p a^q}`; zero when absent.
    pub fn coeff(&self, p: u32, q: u32) -> Cx<R> {
        self.terms
            .get(&(p, q))
            .copied()
            .unwrap_or_else(|| Cx::new(R::zero(), R::zero()))
    }

    /// Terms in ascending `(p, q)` order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, Cx<R>)> + '_ {
        self.terms.iter().map(|(&(p, q), &c)| (p, q, c))
    }

    /// Largest `p + q`; zero for the empty polynomial.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(|&(p, q)| (p + q) as usize).max().unwrap_or(0)
    }

    /// Add `c {a†^p a^q}` and drop the key if it cancels to underflow.
    pub fn add_term(&mut self, p: u32, q: u32, c: Cx<R>) {
        self.accumulate(p, q, c);
        if let Some(&v) = self.terms.get(&(p, q)) {
            if abs(v) < PRUNE {
                self.terms.remove(&(p, q));
            }
        }
    }

    fn accumulate(&mut self, p: u32, q: u32, c: Cx<R>) {
        let slot = self
            .terms
            .entry((p, q))
            .or_insert_with(|| Cx::new(R::zero(), R::zero()));
        *slot = *slot + c;
    }

    fn prune(&mut self) {
        // NaN stays visible
        self.terms.retain(|_, c| abs(*c) >= PRUNE || abs(*c).is_nan());
    }

    pub fn scale(&self, factor: Cx<R>) -> Self {
        Self::from_terms(self.order, self.terms().map(|(p, q, c)| (p, q, c * factor)))
    }

    /// Sum of two polynomials under the same ordering symbol.
    ///
    /// # Panics
    /// If the orderings differ; convert one side first.
    pub fn plus(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order, "adding polynomials under different orderings");
        Self::from_terms(self.order, self.terms().chain(other.terms()))
    }

    /// Coefficient-map equality with relative tolerance `rel_tol` on matched
    /// keys. A key present on one side only must be below `rel_tol` relative
    /// to the largest coefficient.
    pub fn approx_eq(&self, other: &Self, rel_tol: f64) -> bool {
        self.max_coeff_diff(other).is_some_and(|d| d <= rel_tol)
    }

    /// Largest relative coefficient mismatch, or `None` if the orderings
    /// differ.
    pub fn max_coeff_diff(&self, other: &Self) -> Option<f64> {
        if self.order != other.order {
            return None;
        }
        let scale = self
            .terms
            .values()
            .chain(other.terms.values())
            .map(|&c| abs(c))
            .fold(0.0f64, f64::max);
        let mut worst = 0.0f64;
        for key in self.terms.keys().chain(other.terms.keys()) {
            let a = self.coeff(key.0, key.1);
            let b = other.coeff(key.0, key.1);
            let denom = match (self.terms.contains_key(key), other.terms.contains_key(key)) {
                (true, true) => abs(a).max(abs(b)),
                _ => scale,
            };
            if denom > 0.0 {
                worst = worst.max(abs(a - b) / denom);
            }
        }
        Some(worst)
    }

    /// Round coefficients to `f64`.
    pub fn lower(&self) -> OrderedPoly<f64> {
        OrderedPoly::from_terms(self.order, self.terms().map(|(p, q, c)| (p, q, lower(c))))
    }

    /// Classical value at `a† -> x`, `a -> y` (ordering label ignored).
    pub fn eval_classical(&self, x: Cx<R>, y: Cx<R>) -> Cx<R> {
        self.terms()
            .map(|(p, q, c)| c * powu(x, p) * powu(y, q))
            .fold(Cx::new(R::zero(), R::zero()), |a, b| a + b)
    }
}

impl OrderedPoly<f64> {
    /// Lift `f64` coefficients into another real type.
    pub fn lift<R: Real>(&self) -> OrderedPoly<R> {
        OrderedPoly::from_terms(self.order, self.terms().map(|(p, q, c)| (p, q, lift(c))))
    }
}

fn check_degree(degree: usize) -> Result<()> {
    if degree > POLY_DEGREE_CAP {
        Err(Error::DegreeTooLarge { degree, cap: POLY_DEGREE_CAP })
    } else {
        Ok(())
    }
}

/// Add `c {a†^p a^q}_s` re-expressed at the target ordering into `out`.
/// `tau = (t - s) / 2`.
fn push_converted<R: Real>(
    out: &mut BTreeMap<(u32, u32), Cx<R>>,
    p: u32,
    q: u32,
    c: Cx<R>,
    tau: Cx<R>,
) {
    let mut weight = c;
    for i in 0..=p.min(q) {
        if i > 0 {
            // C(p,i) C(q,i) i! tau^i from the i-1 term
            let ratio = rdiv(R::of(((p - i + 1) as f64) * ((q - i + 1) as f64)), R::of(i as f64));
            weight = weight * tau * real(ratio);
        }
        let slot = out
            .entry((p - i, q - i))
            .or_insert_with(|| Cx::new(R::zero(), R::zero()));
        *slot = *slot + weight;
        if tau.re == R::zero() && tau.im == R::zero() {
            break;
        }
    }
}

/// `{a†^p a^q}_s` re-expressed at ordering `t`.
pub fn convert_monomial<R: Real>(
    p: u32,
    q: u32,
    s: OrderParameter,
    t: OrderParameter,
) -> Result<OrderedPoly<R>> {
    check_degree((p + q) as usize)?;
    let tau = real(R::of(s.contraction_to(t)));
    let mut out = BTreeMap::new();
    push_converted(&mut out, p, q, real(R::one()), tau);
    let mut poly = OrderedPoly { order: t, terms: out };
    poly.prune();
    Ok(poly)
}

/// Term-by-term conversion of `poly` to ordering `t`.
pub fn convert_poly<R: Real>(poly: &OrderedPoly<R>, t: OrderParameter) -> Result<OrderedPoly<R>> {
    check_degree(poly.degree())?;
    if poly.order == t {
        return Ok(OrderedPoly { order: t, terms: poly.terms.clone() });
    }
    let tau = real(R::of(poly.order.contraction_to(t)));
    let mut out = BTreeMap::new();
    for (p, q, c) in poly.terms() {
        push_converted(&mut out, p, q, c, tau);
    }
    let mut result = OrderedPoly { order: t, terms: out };
    result.prune();
    Ok(result)
}

/// Normal-ordered expansion of `(a†a)^k`, built by right-multiplying with
/// `a†a`: `a†^p a^q a†a = a†^(p+1) a^(q+1) + q a†^p a^q`.
pub fn number_op_power<R: Real>(k: u32) -> Result<OrderedPoly<R>> {
    check_degree(2 * k as usize)?;
    let one = real(R::one());
    let mut poly = OrderedPoly::constant(OrderParameter::NORMAL, one);
    for _ in 0..k {
        let mut next = OrderedPoly::zero(OrderParameter::NORMAL);
        for (p, q, c) in poly.terms() {
            next.accumulate(p + 1, q + 1, c);
            if q > 0 {
                next.accumulate(p, q, c * real(R::of(q as f64)));
            }
        }
        next.prune();
        poly = next;
    }
    Ok(poly)
}

/// `c {h_{n,m}(a†, a | kappa) e^{lambda a†a}}_s`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderedExp<R: Real = f64> {
    pub prefactor: Cx<R>,
    pub n: u32,
    pub m: u32,
    pub kappa: Cx<R>,
    pub lambda: Cx<R>,
    pub order: OrderParameter,
}

impl<R: Real> OrderedExp<R> {
    /// `c {e^{lambda a†a}}_s`.
    pub fn pure(prefactor: Cx<R>, lambda: Cx<R>, order: OrderParameter) -> Self {
        Self {
            prefactor,
            n: 0,
            m: 0,
            kappa: Cx::new(R::zero(), R::zero()),
            lambda,
            order,
        }
    }

    pub fn is_pure(&self) -> bool {
        self.n == 0 && self.m == 0
    }

    fn require_pure(&self) -> Result<()> {
        if self.is_pure() {
            Ok(())
        } else {
            Err(Error::NotPureExponential { n: self.n, m: self.m })
        }
    }

    /// `c h_{n,m}(a†, a | kappa)` as a polynomial (the `lambda = 0` part).
    pub fn hermite_part(&self) -> Result<OrderedPoly<R>> {
        let table = h2_coeffs(self.n, self.m)?;
        let mut poly = OrderedPoly::zero(self.order);
        let mut kappa_pow = real(R::one());
        for (i, ci) in table.terms() {
            let i = *i;
            if i > 0 {
                kappa_pow = kappa_pow * self.kappa;
            }
            poly.accumulate(self.n - i, self.m - i, self.prefactor * kappa_pow * real(R::of_big(ci)));
        }
        poly.prune();
        Ok(poly)
    }

    /// Classical symbol `c h_{n,m}(x, y | kappa) e^{lambda x y}`.
    pub fn symbol(&self, x: Cx<R>, y: Cx<R>) -> Result<Cx<R>> {
        let table: H2Coeffs = h2_coeffs(self.n, self.m)?;
        Ok(self.prefactor * eval_table(&table, x, y, self.kappa) * (self.lambda * x * y).exp())
    }
}

/// `{e^{lambda a†a}}_s = f {e^{g a†a}}_t` with `f = 2 / (2 - lambda (t - s))`,
/// `g = lambda f`. The input must be a pure exponential (`n = m = 0`).
pub fn exp_reorder<R: Real>(e: &OrderedExp<R>, t: OrderParameter) -> Result<OrderedExp<R>> {
    e.require_pure()?;
    let two = real(R::of(2.0));
    let shift = e.lambda * real(R::of(t.value() - e.order.value()));
    let den = two - shift;
    if abs(den) <= POLE_EPS {
        return Err(Error::OrderingPole { value: lower(shift).re });
    }
    let f = cdiv(two, den);
    Ok(OrderedExp {
        prefactor: e.prefactor * f,
        n: 0,
        m: 0,
        kappa: e.kappa,
        lambda: e.lambda * f,
        order: t,
    })
}

/// `a†^n_left {e^{lambda a†a}}_s a^m_right
///   = kappa^(n_left+m_right) {h_{n_left,m_right}(a†, a | tau_/kappa) e^{lambda a†a}}_s`
/// with `tau_ = (s - 1)/2` and `kappa = tau_ lambda + 1`.
pub fn sandwich<R: Real>(e: &OrderedExp<R>, n_left: u32, m_right: u32) -> Result<OrderedExp<R>> {
    e.require_pure()?;
    let tau_minus = real(R::of((e.order.value() - 1.0) / 2.0));
    let kappa = tau_minus * e.lambda + real(R::one());
    if abs(kappa) <= POLE_EPS {
        return Err(Error::DegenerateKappa { s: e.order.value() });
    }
    Ok(OrderedExp {
        prefactor: e.prefactor * powu(kappa, n_left + m_right),
        n: n_left,
        m: m_right,
        kappa: cdiv(tau_minus, kappa),
        lambda: e.lambda,
        order: e.order,
    })
}

/// `|n><m| = (n! m!)^(-1/2) f^(n+m+1) {h_{n,m}(a†, a | kappa) e^{-f a†a}}_t`
/// with `f = 2 / (t + 1)` and `kappa = (t^2 - 1) / 4`.
pub fn projector<R: Real>(n: u32, m: u32, t: OrderParameter) -> Result<OrderedExp<R>> {
    let tv = t.value();
    if (tv + 1.0).abs() <= POLE_EPS {
        return Err(Error::AntinormalPole);
    }
    let f = rdiv(R::of(2.0), R::of(tv + 1.0));
    let kappa = rdiv(R::of(tv) * R::of(tv) - R::one(), R::of(4.0));
    let norm = (factorial::<R>(n) * factorial::<R>(m)).sqrt();
    Ok(OrderedExp {
        prefactor: real(rdiv(rpowu(f, n + m + 1), norm)),
        n,
        m,
        kappa: real(kappa),
        lambda: real(-f),
        order: t,
    })
}

/// Diagonal projector in Laguerre form:
/// `|n><n| = f^(2n+1) kappa^n {L_n(-a†a / kappa) e^{-f a†a}}_t`.
///
/// `kappa^n L_n(-x/kappa) = sum_k C(n,k) kappa^(n-k) x^k / k!` is regular at
/// `kappa = 0`, so `t = 1` is allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct LaguerreProjector<R: Real = f64> {
    /// `f^(2n+1)`.
    pub prefactor: R,
    pub n: u32,
    pub kappa: R,
    pub lambda: R,
    pub order: OrderParameter,
}

pub fn projector_laguerre<R: Real>(n: u32, t: OrderParameter) -> Result<LaguerreProjector<R>> {
    let tv = t.value();
    if (tv + 1.0).abs() <= POLE_EPS {
        return Err(Error::AntinormalPole);
    }
    let f = rdiv(R::of(2.0), R::of(tv + 1.0));
    Ok(LaguerreProjector {
        prefactor: rpowu(f, 2 * n + 1),
        n,
        kappa: rdiv(R::of(tv) * R::of(tv) - R::one(), R::of(4.0)),
        lambda: -f,
        order: t,
    })
}

impl<R: Real> LaguerreProjector<R> {
    /// `f^(2n+1) kappa^n L_n(-a†a / kappa)` as a polynomial, via the
    /// explicit Laguerre coefficients `C(n,k) (-1)^k / k!`.
    pub fn polynomial_part(&self) -> OrderedPoly<R> {
        let n = self.n;
        let mut poly = OrderedPoly::zero(self.order);
        let mut binom = R::one();
        for k in 0..=n {
            if k > 0 {
                binom = rdiv(binom * R::of((n - k + 1) as f64), R::of(k as f64));
            }
            let c = rdiv(self.prefactor * binom * rpowu(self.kappa, n - k), factorial::<R>(k));
            poly.accumulate(k, k, real(c));
        }
        poly.prune();
        poly
    }

    /// The same operator as an [`OrderedExp`] (`h_{n,n}` form).
    pub fn to_ordered_exp(&self) -> OrderedExp<R> {
        OrderedExp {
            prefactor: real(rdiv(self.prefactor, factorial::<R>(self.n))),
            n: self.n,
            m: self.n,
            kappa: real(self.kappa),
            lambda: real(self.lambda),
            order: self.order,
        }
    }
}

/// Polynomial truncation of an ordered exponential plus a size estimate of
/// the first dropped series term.
#[derive(Debug, Clone, PartialEq)]
pub struct Expansion<R: Real = f64> {
    pub poly: OrderedPoly<R>,
    pub cutoff: u32,
    pub tail: f64,
}

/// Expand `e^{lambda a†a} = sum_{k <= cutoff} lambda^k / k! (a†a)^k` inside
/// the ordering symbol and multiply by the Hermite part.
///
/// `tail` is `|c| |lambda|^(N+1) / (N+1)! * max_i |c_i kappa^i|`.
pub fn exp_to_poly<R: Real>(e: &OrderedExp<R>, cutoff: u32) -> Result<Expansion<R>> {
    check_degree((e.n + e.m) as usize + 2 * cutoff as usize)?;
    let hermite = e.hermite_part()?;
    let mut out = OrderedPoly::zero(e.order);
    let mut weight = real(R::one());
    for k in 0..=cutoff {
        if k > 0 {
            weight = cdivr(weight * e.lambda, R::of(k as f64));
        }
        if weight.re == R::zero() && weight.im == R::zero() {
            break;
        }
        for (p, q, c) in hermite.terms() {
            out.accumulate(p + k, q + k, c * weight);
        }
    }
    out.prune();
    let next = lower(cdivr(weight * e.lambda, R::of((cutoff + 1) as f64))).norm();
    let hmax = hermite.terms().map(|(_, _, c)| abs(c)).fold(0.0f64, f64::max);
    Ok(Expansion { poly: out, cutoff, tail: next * hmax })
}

/// `|beta><beta| = 2/(1-t) {exp[-2/(1-t) (beta* - a†)(beta - a)]}_{-t}`,
/// a Gaussian centred at `beta` ordered at `-t`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentForm<R: Real = f64> {
    pub prefactor: R,
    pub center: Cx<R>,
    pub rate: R,
    pub order: OrderParameter,
}

pub fn coherent_projector<R: Real>(beta: Cx<R>, t: OrderParameter) -> Result<CoherentForm<R>> {
    let tv = t.value();
    if (1.0 - tv).abs() <= POLE_EPS {
        return Err(Error::CoherentPole);
    }
    let rate = rdiv(R::of(2.0), R::of(1.0 - tv));
    Ok(CoherentForm { prefactor: rate, center: beta, rate, order: t.reflected() })
}

impl<R: Real> CoherentForm<R> {
    /// Classical kernel `prefactor * exp(-rate |beta - alpha|^2)` with
    /// `x = alpha*`, `y = alpha`.
    pub fn symbol(&self, x: Cx<R>, y: Cx<R>) -> Cx<R> {
        let u = self.center.conj() - x;
        let v = self.center - y;
        real(self.prefactor) * (-(real(self.rate)) * u * v).exp()
    }

    /// When the centre is zero this is the ordered exponential
    /// `prefactor {e^{-rate a†a}}`.
    pub fn as_ordered_exp(&self) -> Option<OrderedExp<R>> {
        (self.center.re == R::zero() && self.center.im == R::zero()).then(|| {
            OrderedExp::pure(real(self.prefactor), real(-self.rate), self.order)
        })
    }

    /// Expand `sum_{k <= cutoff} (-rate)^k / k! (beta* - a†)^k (beta - a)^k`
    /// binomially inside the ordering symbol.
    pub fn to_poly(&self, cutoff: u32) -> Result<Expansion<R>> {
        check_degree(2 * cutoff as usize)?;
        let bc = self.center.conj();
        let b = self.center;
        let mut out = OrderedPoly::zero(self.order);
        let mut weight = real(self.prefactor);
        // binomial rows of (bc - x)^k: coefficient of x^p is C(k,p) bc^(k-p) (-1)^p
        let mut row: Vec<R> = alloc::vec![R::one()];
        for k in 0..=cutoff {
            if k > 0 {
                weight = cdivr(weight * real(-self.rate), R::of(k as f64));
                let mut next = alloc::vec![R::one(); k as usize + 1];
                for j in 1..k as usize {
                    next[j] = row[j - 1] + row[j];
                }
                row = next;
            }
            for p in 0..=k {
                let left = real(row[p as usize]) * powu(bc, k - p) * sign::<R>(p);
                for q in 0..=k {
                    let right = real(row[q as usize]) * powu(b, k - q) * sign::<R>(q);
                    out.accumulate(p, q, weight * left * right);
                }
            }
        }
        out.prune();
        let r = self.rate.approx();
        let spread = 1.0 + abs(self.center);
        let mut tail = self.prefactor.approx();
        for k in 1..=cutoff + 1 {
            tail *= r * spread * spread / k as f64;
        }
        Ok(Expansion { poly: out, cutoff, tail })
    }
}

fn sign<R: Real>(p: u32) -> Cx<R> {
    if p.is_multiple_of(2) {
        real(R::one())
    } else {
        real(-R::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    type P = OrderedPoly<f64>;

    fn c(re: f64) -> Cx<f64> {
        cx(re, 0.0)
    }

    fn op(s: f64) -> OrderParameter {
        OrderParameter::new(s)
    }

    #[test]
    fn convert_identity_when_orders_match() {
        let poly = convert_monomial::<f64>(3, 2, op(0.3), op(0.3)).unwrap();
        assert_eq!(poly, P::monomial(op(0.3), 3, 2, c(1.0)));
    }

    #[test]
    fn convert_two_two_coefficients() {
        let (s, t) = (-0.4, 0.7);
        let tau = (t - s) / 2.0;
        let poly = convert_monomial::<f64>(2, 2, op(s), op(t)).unwrap();
        assert_eq!(poly.len(), 3);
        assert_eq!(poly.coeff(2, 2), c(1.0));
        assert!((poly.coeff(1, 1).re - 4.0 * tau).abs() < 1e-15);
        assert!((poly.coeff(0, 0).re - 2.0 * tau * tau).abs() < 1e-15);
    }

    #[test]
    fn antinormal_number_operator_to_normal() {
        // a a† = a†a + 1
        let poly = convert_monomial::<f64>(1, 1, op(-1.0), op(1.0)).unwrap();
        assert_eq!(poly, P::from_terms(op(1.0), [(1, 1, c(1.0)), (0, 0, c(1.0))]));
    }

    #[test]
    fn number_op_powers() {
        let k1 = number_op_power::<f64>(1).unwrap();
        assert_eq!(k1, P::monomial(op(1.0), 1, 1, c(1.0)));
        let k2 = number_op_power::<f64>(2).unwrap();
        assert_eq!(k2, P::from_terms(op(1.0), [(2, 2, c(1.0)), (1, 1, c(1.0))]));
        // Stirling numbers of the second kind: (a†a)^3 = a†^3a^3 + 3 a†^2a^2 + a†a
        let k3 = number_op_power::<f64>(3).unwrap();
        assert_eq!(
            k3,
            P::from_terms(op(1.0), [(3, 3, c(1.0)), (2, 2, c(3.0)), (1, 1, c(1.0))])
        );
    }

    #[test]
    fn worked_example_four_terms_reduce_to_normal_form() {
        for &s in &[-1.0, -0.5, 0.0, 0.5, 1.0] {
            let tp = (s + 1.0) / 2.0;
            let tm = (s - 1.0) / 2.0;
            let poly = P::from_terms(
                op(s),
                [(2, 2, c(1.0)), (1, 1, c(tp + 3.0 * tm)), (0, 0, c(tp * tm + tm * tm))],
            );
            let normal = convert_poly(&poly, op(1.0)).unwrap();
            let expect = number_op_power::<f64>(2).unwrap();
            assert!(normal.approx_eq(&expect, 1e-12), "s = {s}: {normal:?}");
        }
    }

    #[test]
    fn exp_reorder_examples() {
        let e = OrderedExp::pure(c(1.0), c(0.3), op(0.2));
        let same = exp_reorder(&e, op(0.2)).unwrap();
        assert_eq!(same.prefactor, c(1.0));
        assert_eq!(same.lambda, c(0.3));

        let t = 0.5;
        let e = OrderedExp::pure(c(1.0), c(-1.0), op(1.0));
        let r = exp_reorder(&e, op(t)).unwrap();
        assert!((r.prefactor.re - 2.0 / (t + 1.0)).abs() < 1e-15);
        assert!((r.lambda.re + 2.0 / (t + 1.0)).abs() < 1e-15);

        // lambda (t - s) = 2
        let e = OrderedExp::pure(c(1.0), c(2.0), op(0.0));
        assert!(matches!(exp_reorder(&e, op(1.0)), Err(Error::OrderingPole { .. })));

        let not_pure = projector::<f64>(1, 0, op(0.5)).unwrap();
        assert!(matches!(exp_reorder(&not_pure, op(1.0)), Err(Error::NotPureExponential { .. })));
    }

    #[test]
    fn sandwich_trivial_cases() {
        let e = OrderedExp::pure(c(1.5), c(-0.5), op(0.0));
        assert_eq!(sandwich(&e, 0, 0).unwrap().prefactor, c(1.5));
        let normal = OrderedExp::pure(c(1.0), c(-0.7), op(1.0));
        let s = sandwich(&normal, 3, 2).unwrap();
        assert_eq!(s.prefactor, c(1.0));
        assert_eq!(s.kappa, c(0.0));
        // tau_ = (s-1)/2 = -1, lambda = 1 -> kappa = 0
        let bad = OrderedExp::pure(c(1.0), c(1.0), op(-1.0));
        assert!(matches!(sandwich(&bad, 1, 1), Err(Error::DegenerateKappa { .. })));
    }

    #[test]
    fn projector_at_normal_order_is_standard_form() {
        let p = projector::<f64>(2, 3, op(1.0)).unwrap();
        assert!((p.prefactor.re - 1.0 / (2.0f64 * 6.0).sqrt()).abs() < 1e-15);
        assert_eq!(p.kappa, c(0.0));
        assert_eq!(p.lambda, c(-1.0));
        assert_eq!(projector::<f64>(0, 0, op(-1.0)), Err(Error::AntinormalPole));
    }

    #[test]
    fn projector_equals_reorder_then_sandwich() {
        for &t in &[-0.5, 0.0, 0.5, 0.9] {
            for (n, m) in [(0, 0), (2, 1), (1, 3), (4, 4)] {
                let norm = 1.0 / (factorial::<f64>(n) * factorial::<f64>(m)).sqrt();
                let vac = OrderedExp::pure(c(norm), c(-1.0), op(1.0));
                let built = sandwich(&exp_reorder(&vac, op(t)).unwrap(), n, m).unwrap();
                let direct = projector::<f64>(n, m, op(t)).unwrap();
                assert!((built.prefactor - direct.prefactor).norm() < 1e-13 * direct.prefactor.norm());
                assert!((built.kappa - direct.kappa).norm() < 1e-15);
                assert!((built.lambda - direct.lambda).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn laguerre_form_matches_hermite_form() {
        for &t in &[-0.5, 0.0, 0.5, 1.0] {
            for n in 0..=5 {
                let lag = projector_laguerre::<f64>(n, op(t)).unwrap();
                let h = projector::<f64>(n, n, op(t)).unwrap().hermite_part().unwrap();
                assert!(lag.polynomial_part().approx_eq(&h, 1e-12), "n = {n}, t = {t}");
            }
        }
    }

    #[test]
    fn laguerre_form_in_double_double_at_zero_kappa() {
        use crate::scalar::TwoFloat;
        for n in 0..=4 {
            let lag = projector_laguerre::<TwoFloat>(n, op(1.0)).unwrap().polynomial_part();
            let h = projector::<TwoFloat>(n, n, op(1.0)).unwrap().hermite_part().unwrap();
            assert!(!lag.is_empty(), "n = {n}");
            assert!(lag.approx_eq(&h, 1e-25), "n = {n}");
        }
    }

    #[test]
    fn exp_to_poly_examples() {
        let e = OrderedExp { lambda: c(0.0), ..projector::<f64>(2, 1, op(0.5)).unwrap() };
        let ex = exp_to_poly(&e, 10).unwrap();
        assert_eq!(ex.poly, e.hermite_part().unwrap());
        assert_eq!(ex.tail, 0.0);

        let lam = 0.4;
        let e = OrderedExp::pure(c(1.0), c(lam), op(0.0));
        let ex = exp_to_poly(&e, 6).unwrap();
        assert_eq!(ex.poly.len(), 7);
        for k in 0..=6 {
            let want = lam.powi(k as i32) / factorial::<f64>(k);
            assert!((ex.poly.coeff(k, k).re - want).abs() < 1e-16);
        }
        assert!((ex.tail - lam.powi(7) / 5040.0).abs() < 1e-18);
    }

    #[test]
    fn coherent_projector_zero_centre_is_ordered_exp() {
        let t = 0.3;
        let form = coherent_projector::<f64>(c(0.0), op(t)).unwrap();
        let e = form.as_ordered_exp().unwrap();
        assert_eq!(e.order, op(-t));
        assert!((e.prefactor.re - 2.0 / (1.0 - t)).abs() < 1e-15);
        assert!((e.lambda.re + 2.0 / (1.0 - t)).abs() < 1e-15);
        assert_eq!(coherent_projector::<f64>(c(0.0), op(1.0)), Err(Error::CoherentPole));
        // t -> -1: unit rate, normal order
        let nf = coherent_projector::<f64>(cx(0.3, 0.1), op(-1.0)).unwrap();
        assert_eq!(nf.rate, 1.0);
        assert_eq!(nf.order, OrderParameter::NORMAL);
    }

    #[test]
    fn coherent_expansion_matches_symbol() {
        let form = coherent_projector::<f64>(cx(0.7, 0.2), op(-0.5)).unwrap();
        let ex = form.to_poly(40).unwrap();
        let (x, y) = (cx(0.3, -0.4), cx(0.3, 0.4));
        let a = ex.poly.eval_classical(x, y);
        let b = form.symbol(x, y);
        assert!((a - b).norm() < 1e-12);
    }
}
