//! Central finite differences used to cross-check exact derivatives.
//!
//! First derivatives use the fourth-order five-point stencil. Second
//! derivatives are fourth order as well: the diagonal five-point stencil, and
//! nested first-derivative stencils for mixed partials.

use super::field::{ChartPoint5, ScalarField};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Partial {
    First(usize),
    Second(usize, usize),
}

fn shift<const N: usize>(p: &[f64; N], i: usize, d: f64) -> [f64; N] {
    let mut q = *p;
    q[i] += d;
    q
}

fn first<const N: usize>(f: &impl Fn(&[f64; N]) -> f64, p: &[f64; N], i: usize, h: f64) -> f64 {
    let e = |k: f64| f(&shift(p, i, k * h));
    (-e(2.0) + 8.0 * e(1.0) - 8.0 * e(-1.0) + e(-2.0)) / (12.0 * h)
}

pub fn fd_oracle_partial<const N: usize>(
    f: impl Fn(&[f64; N]) -> f64,
    p: &[f64; N],
    dir: Partial,
    h: f64,
) -> f64 {
    match dir {
        Partial::First(i) => first(&f, p, i, h),
        Partial::Second(i, j) if i == j => {
            let e = |k: f64| f(&shift(p, i, k * h));
            (-e(2.0) + 16.0 * e(1.0) - 30.0 * e(0.0) + 16.0 * e(-1.0) - e(-2.0)) / (12.0 * h * h)
        }
        Partial::Second(i, j) => {
            let inner = |q: &[f64; N]| first(&f, q, j, h);
            first(&inner, p, i, h)
        }
    }
}

/// Largest discrepancy between the exact jet of `f` and the oracle over all
/// first and second partials at `p`.
pub fn max_derivative_discrepancy(f: &ScalarField, p: &ChartPoint5, h: f64) -> f64 {
    let j = f.jet(p);
    let eval = |c: &[f64; 5]| f.value_at(c);
    let mut worst = 0.0_f64;
    for a in 0..5 {
        let d = fd_oracle_partial(eval, &p.coords, Partial::First(a), h);
        worst = worst.max((d - j.g[a]).abs());
        for b in a..5 {
            let d2 = fd_oracle_partial(eval, &p.coords, Partial::Second(a, b), h);
            worst = worst.max((d2 - j.h[a][b]).abs());
        }
    }
    worst
}
