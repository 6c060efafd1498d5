//! Quasiprobability symbols and phase-space trace pairing.
//!
//! Conventions: the symbol *at parameter t* of an operator `F` is the
//! function `W_F(alpha, t)` whose `(-t)`-ordering gives `F`. A `t`-ordered
//! closed form therefore yields the symbol at `-t` by `a† -> alpha*`,
//! `a -> alpha`, and
//!
//! ```text
//! Tr(F G) = \int d^2 alpha / pi  W_F(alpha, -t) W_G(alpha, t)
//! ```
//!
//! pairs opposite parameters. So `<m|F|n> = Tr(F |n><m|)` pairs
//! [`w_projector`] (the `t`-ordering symbol of `|n><m|`) with the
//! `(-t)`-ordering symbol of `F`, see [`classical_symbol`].
//!
//! Quadrature is a uniform midpoint tensor rule on `[-L, L]^2`; the
//! integrands are entire functions times Gaussians, where it converges
//! spectrally. Reductions use Neumaier summation in a fixed node order.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::hermite2d::{eval_table, h2_coeffs};
use crate::ordered::{coherent_projector, convert_poly, projector, OrderParameter, OrderedPoly};
use crate::scalar::powu;

pub const DEFAULT_HALF_WIDTH: f64 = 6.0;
pub const DEFAULT_POINTS: usize = 160;

/// Tolerance of the Gaussian calibration identity.
pub const CALIBRATION_TOL: f64 = 1e-8;

/// Uniform midpoint grid over `[-L, L]^2` with `N` points per axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureGrid {
    half_width: f64,
    points: usize,
}

impl Default for QuadratureGrid {
    fn default() -> Self {
        Self { half_width: DEFAULT_HALF_WIDTH, points: DEFAULT_POINTS }
    }
}

impl QuadratureGrid {
    /// `points` must be positive and even so the grid is symmetric under
    /// `alpha -> -alpha` and `alpha -> alpha*`.
    pub fn new(half_width: f64, points: usize) -> Result<Self> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::BadGrid("half-width must be positive and finite"));
        }
        if points == 0 || !points.is_multiple_of(2) {
            return Err(Error::BadGrid("points per axis must be positive and even"));
        }
        Ok(Self { half_width, points })
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.points as f64
    }

    /// Area element per node (without the `1/pi`).
    pub fn weight(&self) -> f64 {
        let h = self.spacing();
        h * h
    }

    /// Grid with half the spacing.
    pub fn refined(&self) -> Self {
        Self { half_width: self.half_width, points: self.points * 2 }
    }

    /// Nodes row-major: rows run over `y` ascending, `x` ascending within a row.
    pub fn nodes(&self) -> impl Iterator<Item = Complex64> + '_ {
        let n = self.points;
        (0..n).flat_map(move |j| {
            (0..n).map(move |i| Complex64::new(axis(self.half_width, n, i), axis(self.half_width, n, j)))
        })
    }

    /// `(1/pi) sum_nodes w f(alpha)`.
    pub fn integrate<F>(&self, mut f: F) -> Complex64
    where
        F: FnMut(Complex64) -> Complex64,
    {
        let mut re = Neumaier::default();
        let mut im = Neumaier::default();
        for alpha in self.nodes() {
            let v = f(alpha);
            re.add(v.re);
            im.add(v.im);
        }
        Complex64::new(re.total(), im.total()) * (self.weight() / PI)
    }

    /// `(1/pi) \int e^{-|alpha|^2}`, exactly 1 in the continuum.
    pub fn calibration(&self) -> f64 {
        self.integrate(|a| Complex64::new(Float::exp(-a.norm_sqr()), 0.0)).re
    }

    pub fn is_calibrated(&self) -> bool {
        (self.calibration() - 1.0).abs() <= CALIBRATION_TOL
    }
}

fn axis(half_width: f64, n: usize, i: usize) -> f64 {
    -half_width + (i as f64 + 0.5) * (2.0 * half_width / n as f64)
}

#[derive(Default)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

/// `t`-ordering symbol of `|n><m|`:
/// `(n! m!)^(-1/2) f^(n+m+1) h_{n,m}(alpha*, alpha | kappa) e^{-f |alpha|^2}`,
/// `f = 2/(t+1)`, `kappa = (t^2-1)/4`.
pub fn w_projector(n: u32, m: u32, alpha: Complex64, t: OrderParameter) -> Result<Complex64> {
    projector::<f64>(n, m, t)?.symbol(alpha.conj(), alpha)
}

/// Reusable form of [`w_projector`] for quadrature loops.
pub fn projector_symbol(n: u32, m: u32, t: OrderParameter) -> Result<impl Fn(Complex64) -> Complex64> {
    let e = projector::<f64>(n, m, t)?;
    let table = h2_coeffs(n, m)?;
    Ok(move |alpha: Complex64| {
        e.prefactor * eval_table(&table, alpha.conj(), alpha, e.kappa) * (e.lambda * alpha.norm_sqr()).exp()
    })
}

/// Symbol at parameter `t` of `|beta><beta|`:
/// `2/(1-t) exp(-2 |beta - alpha|^2 / (1-t))`.
pub fn w_coherent(beta: Complex64, alpha: Complex64, t: OrderParameter) -> Result<f64> {
    Ok(coherent_projector::<f64>(beta, t)?.symbol(alpha.conj(), alpha).re)
}

/// `(1/pi) sum w Wf Wg` over the grid.
pub fn trace_pair<F, G>(wf: F, wg: G, grid: &QuadratureGrid) -> Complex64
where
    F: Fn(Complex64) -> Complex64,
    G: Fn(Complex64) -> Complex64,
{
    grid.integrate(|a| wf(a) * wg(a))
}

/// Classical symbol of `poly` read at ordering `order`: convert, then
/// substitute `a† -> alpha*`, `a -> alpha`.
pub fn classical_symbol(
    poly: &OrderedPoly<f64>,
    order: OrderParameter,
) -> Result<impl Fn(Complex64) -> Complex64> {
    let converted = convert_poly(poly, order)?;
    Ok(move |alpha: Complex64| converted.eval_classical(alpha.conj(), alpha))
}

/// Both sides of the Hermite integration identity
///
/// ```text
/// beta*^n beta^m = 2 f^(n+m+1) e^{|beta|^2} / (1-t)
///     \int d^2alpha/pi h_{n,m}(alpha*, alpha | kappa) e^{-f|alpha|^2 - 2|beta-alpha|^2/(1-t)}
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationCheck {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub abs_err: f64,
}

impl IntegrationCheck {
    /// `rhs / lhs`, meaningful when `lhs` is away from zero.
    pub fn ratio(&self) -> Complex64 {
        self.rhs / self.lhs
    }
}

pub fn verify_integration_formula(
    n: u32,
    m: u32,
    beta: Complex64,
    t: OrderParameter,
    grid: &QuadratureGrid,
) -> Result<IntegrationCheck> {
    let tv = t.value();
    if !(tv > -1.0 && tv < 1.0) {
        return Err(Error::OutOfRange { t: tv });
    }
    let f = 2.0 / (1.0 + tv);
    let rate = 2.0 / (1.0 - tv);
    let kappa = Complex64::new((tv * tv - 1.0) / 4.0, 0.0);
    let table = h2_coeffs(n, m)?;
    let integral = grid.integrate(|a| {
        let h = eval_table(&table, a.conj(), a, kappa);
        h * Float::exp(-f * a.norm_sqr() - rate * (beta - a).norm_sqr())
    });
    let rhs = integral * (rate * Float::powi(f, (n + m + 1) as i32) * Float::exp(beta.norm_sqr()));
    let lhs = powu(beta.conj(), n) * powu(beta, m);
    Ok(IntegrationCheck { lhs, rhs, abs_err: (lhs - rhs).norm() })
}

/// A symbol tabulated on the nodes of a midpoint grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexGrid {
    pub half_width: f64,
    pub points: usize,
    /// Row-major, same order as [`ComplexGrid::coords`].
    pub values: Vec<Complex64>,
}

impl ComplexGrid {
    /// `(x, y)` of node `k` (rows over `y`, `x` fastest).
    pub fn coords(&self, k: usize) -> (f64, f64) {
        let (j, i) = (k / self.points, k % self.points);
        (axis(self.half_width, self.points, i), axis(self.half_width, self.points, j))
    }

    /// Index of the node closest to `alpha`.
    pub fn nearest(&self, alpha: Complex64) -> usize {
        let h = 2.0 * self.half_width / self.points as f64;
        let clamp = |v: f64| (Float::round((v + self.half_width) / h - 0.5).max(0.0) as usize).min(self.points - 1);
        clamp(alpha.im) * self.points + clamp(alpha.re)
    }
}

/// Tabulate `symbol` on an `N x N` midpoint grid over `[-L, L]^2`.
pub fn sample_grid<F>(symbol: F, half_width: f64, points: usize) -> Result<ComplexGrid>
where
    F: Fn(Complex64) -> Complex64,
{
    if !(half_width.is_finite() && half_width > 0.0) || points == 0 {
        return Err(Error::BadGrid("need positive half-width and at least one point"));
    }
    let mut values = Vec::with_capacity(points * points);
    for j in 0..points {
        for i in 0..points {
            let alpha = Complex64::new(axis(half_width, points, i), axis(half_width, points, j));
            values.push(symbol(alpha));
        }
    }
    Ok(ComplexGrid { half_width, points, values })
}
