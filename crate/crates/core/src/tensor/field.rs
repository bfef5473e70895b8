//! Chart points and closed-form fields with exact derivatives.
//!
//! Every field is a closure evaluated on [`Jet5`] coordinates, so a single
//! evaluation yields the value, gradient and Hessian. Four-dimensional fields
//! live on the same closures and simply ignore (or are independent of) the
//! coordinate `t̄`; their derivative indices are the jet slots `1..=4`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::jet::Jet5;
use super::linalg::{self, Mat};
use crate::error::{Error, Result};

/// Index of the hidden time coordinate `t̄`.
pub const TBAR: usize = 0;
/// Index of the observable time coordinate `t`.
pub const T: usize = 1;

/// Point `(t̄, t, x, y, z)` of the five-dimensional chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChartPoint5 {
    pub coords: [f64; 5],
}

/// Point `(t, x, y, z)` of the four-dimensional chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChartPoint4 {
    pub coords: [f64; 4],
}

impl ChartPoint5 {
    pub fn new(coords: [f64; 5]) -> Self {
        debug_assert!(coords.iter().all(|c| c.is_finite()));
        ChartPoint5 { coords }
    }

    pub fn tbar(&self) -> f64 {
        self.coords[TBAR]
    }

    pub fn spacetime(&self) -> ChartPoint4 {
        ChartPoint4 {
            coords: [self.coords[1], self.coords[2], self.coords[3], self.coords[4]],
        }
    }

    pub fn shifted(&self, axis: usize, delta: f64) -> Self {
        let mut c = self.coords;
        c[axis] += delta;
        ChartPoint5 { coords: c }
    }
}

impl ChartPoint4 {
    pub fn new(coords: [f64; 4]) -> Self {
        debug_assert!(coords.iter().all(|c| c.is_finite()));
        ChartPoint4 { coords }
    }

    /// Embeds the point at hidden time `tbar`.
    pub fn at_tbar(&self, tbar: f64) -> ChartPoint5 {
        let c = self.coords;
        ChartPoint5 {
            coords: [tbar, c[0], c[1], c[2], c[3]],
        }
    }
}

type ScalarFn = dyn Fn(&[Jet5; 5]) -> Jet5 + Send + Sync;

/// Real field with exact partial derivatives up to second order.
#[derive(Clone)]
pub struct ScalarField(Arc<ScalarFn>);

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ScalarField(..)")
    }
}

impl ScalarField {
    pub fn new(f: impl Fn(&[Jet5; 5]) -> Jet5 + Send + Sync + 'static) -> Self {
        ScalarField(Arc::new(f))
    }

    pub fn constant(c: f64) -> Self {
        Self::new(move |_| Jet5::constant(c))
    }

    /// The coordinate function `x^axis`.
    pub fn coordinate(axis: usize) -> Self {
        Self::new(move |x| x[axis])
    }

    pub fn eval(&self, x: &[Jet5; 5]) -> Jet5 {
        (self.0)(x)
    }

    pub fn jet(&self, p: &ChartPoint5) -> Jet5 {
        self.eval(&Jet5::seed(&p.coords))
    }

    pub fn jet4(&self, p: &ChartPoint4) -> Jet5 {
        self.jet(&p.at_tbar(0.0))
    }

    pub fn value(&self, p: &ChartPoint5) -> f64 {
        self.eval(&p.coords.map(Jet5::constant)).v
    }

    pub fn value_at(&self, coords: &[f64; 5]) -> f64 {
        self.eval(&coords.map(Jet5::constant)).v
    }

    /// Pointwise map through a jet function, e.g. `rho.map(|r| r.sqrt())`.
    pub fn map(&self, f: impl Fn(Jet5) -> Jet5 + Send + Sync + 'static) -> Self {
        let inner = self.clone();
        Self::new(move |x| f(inner.eval(x)))
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(move |v| v.scale(c))
    }
}

impl Add for ScalarField {
    type Output = ScalarField;
    fn add(self, rhs: ScalarField) -> ScalarField {
        ScalarField::new(move |x| self.eval(x) + rhs.eval(x))
    }
}

impl Sub for ScalarField {
    type Output = ScalarField;
    fn sub(self, rhs: ScalarField) -> ScalarField {
        ScalarField::new(move |x| self.eval(x) - rhs.eval(x))
    }
}

impl Mul for ScalarField {
    type Output = ScalarField;
    fn mul(self, rhs: ScalarField) -> ScalarField {
        ScalarField::new(move |x| self.eval(x) * rhs.eval(x))
    }
}

impl Neg for ScalarField {
    type Output = ScalarField;
    fn neg(self) -> ScalarField {
        self.scale(-1.0)
    }
}

type SymFn4 = dyn Fn(&[Jet5; 5]) -> [[Jet5; 4]; 4] + Send + Sync;
type SymFn5 = dyn Fn(&[Jet5; 5]) -> [[Jet5; 5]; 5] + Send + Sync;

/// Symmetric rank-2 field with indices in the four-dimensional block.
///
/// Only the upper triangle returned by the closure is read; the lower
/// triangle is mirrored, so symmetry is exact.
#[derive(Clone)]
pub struct SymField4(Arc<SymFn4>);

impl fmt::Debug for SymField4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("SymField4(..)")
    }
}

impl SymField4 {
    pub fn new(f: impl Fn(&[Jet5; 5]) -> [[Jet5; 4]; 4] + Send + Sync + 'static) -> Self {
        SymField4(Arc::new(f))
    }

    pub fn zero() -> Self {
        Self::new(|_| [[Jet5::constant(0.0); 4]; 4])
    }

    pub fn eval(&self, x: &[Jet5; 5]) -> [[Jet5; 4]; 4] {
        let mut m = (self.0)(x);
        for a in 0..4 {
            for b in 0..a {
                m[a][b] = m[b][a];
            }
        }
        m
    }

    pub fn jets(&self, p: &ChartPoint5) -> [[Jet5; 4]; 4] {
        self.eval(&Jet5::seed(&p.coords))
    }

    pub fn values(&self, p: &ChartPoint5) -> Mat<4> {
        let m = self.eval(&p.coords.map(Jet5::constant));
        m.map(|row| row.map(|j| j.v))
    }

    /// Component `(mu, nu)` as a scalar field.
    pub fn component(&self, mu: usize, nu: usize) -> ScalarField {
        let inner = self.clone();
        ScalarField::new(move |x| inner.eval(x)[mu][nu])
    }
}

/// Four-dimensional metric `ĝ_{μν}` with signature `(+,−,−,−)`.
#[derive(Clone, Debug)]
pub struct MetricField4(SymField4);

impl MetricField4 {
    pub fn new(f: impl Fn(&[Jet5; 5]) -> [[Jet5; 4]; 4] + Send + Sync + 'static) -> Self {
        MetricField4(SymField4::new(f))
    }

    pub fn from_sym(f: SymField4) -> Self {
        MetricField4(f)
    }

    pub fn minkowski() -> Self {
        Self::new(|_| {
            let mut m = [[Jet5::constant(0.0); 4]; 4];
            m[0][0] = Jet5::constant(1.0);
            for i in 1..4 {
                m[i][i] = Jet5::constant(-1.0);
            }
            m
        })
    }

    pub fn as_sym(&self) -> &SymField4 {
        &self.0
    }

    pub fn eval(&self, x: &[Jet5; 5]) -> [[Jet5; 4]; 4] {
        self.0.eval(x)
    }

    pub fn values(&self, p: &ChartPoint4) -> Mat<4> {
        self.0.values(&p.at_tbar(0.0))
    }

    /// Constant rescaling `λ ĝ`.
    pub fn scaled(&self, lambda: f64) -> Self {
        let inner = self.clone();
        Self::new(move |x| inner.eval(x).map(|row| row.map(|j| j.scale(lambda))))
    }

    /// Checks `det ĝ < 0` and eigenvalue signs `(+,−,−,−)` at `p`.
    pub fn check_signature(&self, p: &ChartPoint4) -> Result<()> {
        let g = self.values(p);
        check_signature(&g, 1, &p.coords)
    }
}

/// Five-dimensional metric `g_{AB}` with signature `(+,+,−,−,−)`.
#[derive(Clone)]
pub struct MetricField5(Arc<SymFn5>);

impl fmt::Debug for MetricField5 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("MetricField5(..)")
    }
}

impl MetricField5 {
    pub fn new(f: impl Fn(&[Jet5; 5]) -> [[Jet5; 5]; 5] + Send + Sync + 'static) -> Self {
        MetricField5(Arc::new(f))
    }

    pub fn flat() -> Self {
        Self::new(|_| {
            let mut m = [[Jet5::constant(0.0); 5]; 5];
            for (i, row) in m.iter_mut().enumerate() {
                row[i] = Jet5::constant(if i < 2 { 1.0 } else { -1.0 });
            }
            m
        })
    }

    /// `g = lapse² dt̄² + ĝ`, the block form with no mixed `t̄` components.
    pub fn block(lapse_squared: ScalarField, spacetime: SymField4) -> Self {
        Self::new(move |x| {
            let mut m = [[Jet5::constant(0.0); 5]; 5];
            m[0][0] = lapse_squared.eval(x);
            let h = spacetime.eval(x);
            for a in 0..4 {
                for b in a..4 {
                    m[a + 1][b + 1] = h[a][b];
                }
            }
            m
        })
    }

    pub fn eval(&self, x: &[Jet5; 5]) -> [[Jet5; 5]; 5] {
        let mut m = (self.0)(x);
        for a in 0..5 {
            for b in 0..a {
                m[a][b] = m[b][a];
            }
        }
        m
    }

    pub fn jets(&self, p: &ChartPoint5) -> [[Jet5; 5]; 5] {
        self.eval(&Jet5::seed(&p.coords))
    }

    pub fn values(&self, p: &ChartPoint5) -> Mat<5> {
        self.eval(&p.coords.map(Jet5::constant))
            .map(|row| row.map(|j| j.v))
    }

    pub fn component(&self, a: usize, b: usize) -> ScalarField {
        let inner = self.clone();
        ScalarField::new(move |x| inner.eval(x)[a][b])
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        let inner = self.clone();
        Self::new(move |x| inner.eval(x).map(|row| row.map(|j| j.scale(lambda))))
    }

    /// The `(t, x, y, z)` block at fixed `t̄`, as a symmetric field.
    pub fn spacetime_block(&self) -> SymField4 {
        let inner = self.clone();
        SymField4::new(move |x| {
            let m = inner.eval(x);
            std::array::from_fn(|a| std::array::from_fn(|b| m[a + 1][b + 1]))
        })
    }

    /// Checks `det g < 0` and eigenvalue signs `(+,+,−,−,−)` at `p`.
    pub fn check_signature(&self, p: &ChartPoint5) -> Result<()> {
        let g = self.values(p);
        check_signature(&g, 2, &p.coords)
    }
}

fn check_signature<const N: usize>(g: &Mat<N>, plus: usize, at: &[f64]) -> Result<()> {
    let d = linalg::det(g);
    if !(d < 0.0) {
        return Err(Error::SignatureViolation {
            point: at.to_vec(),
            detail: format!("det g = {d:e} is not negative"),
        });
    }
    let signs = linalg::eigen_signs(g, 1e-14);
    let expected: [i8; N] = std::array::from_fn(|i| if i < plus { 1 } else { -1 });
    if signs != expected {
        return Err(Error::SignatureViolation {
            point: at.to_vec(),
            detail: format!("eigenvalue signs {signs:?}, expected {expected:?}"),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_arithmetic_composes() {
        let x = ScalarField::coordinate(2);
        let f = x.clone() * x + ScalarField::constant(1.0);
        let j = f.jet(&ChartPoint5::new([0.0, 0.0, 1.5, 0.0, 0.0]));
        assert_eq!(j.v, 3.25);
        assert_eq!(j.g[2], 3.0);
        assert_eq!(j.h[2][2], 2.0);
    }

    #[test]
    fn upper_triangle_is_mirrored() {
        let g = MetricField5::new(|x| {
            let mut m = [[Jet5::constant(0.0); 5]; 5];
            for i in 0..5 {
                m[i][i] = Jet5::constant(if i < 2 { 1.0 } else { -1.0 });
            }
            m[1][3] = x[2] * 0.1;
            m[3][1] = Jet5::constant(99.0);
            m
        });
        let v = g.values(&ChartPoint5::new([0.0, 0.0, 2.0, 0.0, 0.0]));
        assert_eq!(v[3][1], v[1][3]);
        assert_eq!(v[3][1], 0.2);
    }

    #[test]
    fn flat_metric_has_declared_signature() {
        let p = ChartPoint5::new([0.1, 0.2, 0.3, 0.4, 0.5]);
        MetricField5::flat().check_signature(&p).unwrap();
        MetricField4::minkowski()
            .check_signature(&p.spacetime())
            .unwrap();
    }

    #[test]
    fn wrong_signature_is_reported() {
        let p = ChartPoint5::new([0.0; 5]);
        let bad = MetricField5::flat().scaled(-1.0);
        assert!(matches!(
            bad.check_signature(&p),
            Err(Error::SignatureViolation { .. })
        ));
    }
}
