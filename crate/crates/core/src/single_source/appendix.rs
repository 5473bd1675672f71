//! The shrinkage objective at the true source and parameters:
//! `f(a) = ln det A(a) + U' A(a)^-1 U / sigma2` with `A(a) = a H + (1 - a) L`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AppendixF {
    pub f: f64,
    pub f1: f64,
    pub f2: f64,
    pub df1: f64,
    pub df2: f64,
    pub d2f1: f64,
    pub d2f2: f64,
}

impl AppendixF {
    pub fn df(&self, sigma2: f64) -> f64 {
        self.df1 + self.df2 / sigma2
    }
}

fn check(lambda: &DMatrix<f64>, h: &DMatrix<f64>, u: &DVector<f64>) -> Result<()> {
    let n = lambda.nrows();
    for found in [lambda.ncols(), h.nrows(), h.ncols(), u.len()] {
        if found != n {
            return Err(Error::DimensionMismatch { expected: n, found });
        }
    }
    Ok(())
}

/// `f`, `f1`, `f2` and their analytic first and second derivatives in `alpha`.
pub fn appendix_f(
    alpha: f64,
    lambda: &DMatrix<f64>,
    h: &DMatrix<f64>,
    u: &DVector<f64>,
    sigma2: f64,
) -> Result<AppendixF> {
    check(lambda, h, u)?;
    let a = h * alpha + lambda * (1.0 - alpha);
    let chol = a.cholesky().ok_or(Error::NotPositiveDefinite)?;
    let diff = h - lambda;
    let f1 = 2.0 * chol.l_dirty().diagonal().iter().map(|x| x.ln()).sum::<f64>();
    let ainv_u = chol.solve(u);
    let f2 = u.dot(&ainv_u);
    // X = A^-1 (H - L)
    let x = chol.solve(&diff);
    let df1 = x.trace();
    let d2f1 = -(&x * &x).trace();
    let w = &diff * &ainv_u;
    let df2 = -ainv_u.dot(&w);
    let d2f2 = 2.0 * w.dot(&chol.solve(&w));
    Ok(AppendixF {
        f: f1 + f2 / sigma2,
        f1,
        f2,
        df1,
        df2,
        d2f1,
        d2f2,
    })
}

/// Central finite differences `(f1', f2', f1'', f2'')` with step `step`.
pub fn appendix_fd(
    alpha: f64,
    lambda: &DMatrix<f64>,
    h: &DMatrix<f64>,
    u: &DVector<f64>,
    step: f64,
) -> Result<(f64, f64, f64, f64)> {
    let at = |a: f64| appendix_f(a, lambda, h, u, 1.0).map(|v| (v.f1, v.f2));
    let (m1, m2) = at(alpha - step)?;
    let (c1, c2) = at(alpha)?;
    let (p1, p2) = at(alpha + step)?;
    Ok((
        (p1 - m1) / (2.0 * step),
        (p2 - m2) / (2.0 * step),
        (p1 - 2.0 * c1 + m1) / (step * step),
        (p2 - 2.0 * c2 + m2) / (step * step),
    ))
}
