//! Finite-difference derivatives along geodesics.
//!
//! Along a unit-speed geodesic `γ` through `p`, `(f∘γ)″(0) = Ddf(γ′, γ′)` since
//! `∇_{γ′}γ′ = 0`. The central second difference of `f∘γ` therefore gives the
//! Hessian diagonal with `O(ε²)` error, polarization gives off-diagonal
//! entries, and traces over an orthonormal frame give `Δ` and each `Δ_i`.
//! One Richardson step `(4D(ε/2) − D(ε))/3` raises the order to `O(ε⁴)`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::oracle::eigenfunction::ScalarField;
use crate::oracle::geometry::{Embedding, Frame, ProductPoint, TangentVector};

pub const DEFAULT_EPSILON: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdStep {
    pub epsilon: f64,
    pub richardson: bool,
}

impl Default for FdStep {
    fn default() -> Self {
        Self {
            epsilon: DEFAULT_EPSILON,
            richardson: true,
        }
    }
}

impl FdStep {
    pub fn raw(epsilon: f64) -> Self {
        Self {
            epsilon,
            richardson: false,
        }
    }

    pub fn refined(epsilon: f64) -> Self {
        Self {
            epsilon,
            richardson: true,
        }
    }

    /// `ε` must lie in `(0, inj/4)`; directions passed to the stencils have
    /// norm at most `√2`, which keeps every sample inside the injectivity ball.
    pub fn check(&self, e: &Embedding) -> Result<()> {
        let ok = self.epsilon.is_finite()
            && self.epsilon > 0.0
            && self.epsilon * core::f64::consts::SQRT_2 < e.injectivity_radius() / 4.0;
        if ok {
            Ok(())
        } else {
            Err(Error::BadStep(self.epsilon))
        }
    }

    fn apply<F: Fn(f64) -> Result<f64>>(&self, d: F) -> Result<f64> {
        let coarse = d(self.epsilon)?;
        if !self.richardson {
            return Ok(coarse);
        }
        let fine = d(self.epsilon / 2.0)?;
        Ok((4.0 * fine - coarse) / 3.0)
    }
}

/// Finite-difference engine bound to one embedded manifold.
#[derive(Debug, Clone)]
pub struct Fd<'a> {
    pub embedding: &'a Embedding,
    pub step: FdStep,
}

impl<'a> Fd<'a> {
    pub fn new(embedding: &'a Embedding, step: FdStep) -> Result<Self> {
        step.check(embedding)?;
        Ok(Self { embedding, step })
    }

    /// `(f∘γ)″(0)` for the geodesic with initial velocity `v`.
    pub fn second_derivative<F: ScalarField + ?Sized>(
        &self,
        f: &F,
        p: &ProductPoint,
        v: &TangentVector,
    ) -> Result<f64> {
        let center = f.eval(p);
        self.step.apply(|eps| {
            let plus = f.eval(&self.embedding.geodesic(p, v, eps)?);
            let minus = f.eval(&self.embedding.geodesic(p, v, -eps)?);
            Ok((plus - 2.0 * center + minus) / (eps * eps))
        })
    }

    /// `df(v)` by central differences.
    pub fn first_derivative<F: ScalarField + ?Sized>(
        &self,
        f: &F,
        p: &ProductPoint,
        v: &TangentVector,
    ) -> Result<f64> {
        self.step.apply(|eps| {
            let plus = f.eval(&self.embedding.geodesic(p, v, eps)?);
            let minus = f.eval(&self.embedding.geodesic(p, v, -eps)?);
            Ok((plus - minus) / (2.0 * eps))
        })
    }

    /// `Ddf(u, v)`; off-diagonal values by polarization
    /// `(f″(u+v) − f″(u−v))/4`.
    pub fn hessian<F: ScalarField + ?Sized>(
        &self,
        f: &F,
        p: &ProductPoint,
        u: &TangentVector,
        v: &TangentVector,
    ) -> Result<f64> {
        if u == v {
            return self.second_derivative(f, p, u);
        }
        let plus = self.second_derivative(f, p, &u.sum(v))?;
        let minus = self.second_derivative(f, p, &u.difference(v))?;
        Ok((plus - minus) / 4.0)
    }

    /// Hessian matrix in `frame`.
    pub fn hessian_matrix<F: ScalarField + ?Sized>(
        &self,
        f: &F,
        p: &ProductPoint,
        frame: &Frame,
    ) -> Result<Vec<Vec<f64>>> {
        self.embedding.check_frame(p, frame)?;
        let n = frame.len();
        let mut h = alloc::vec![alloc::vec![0.0; n]; n];
        for (a, u) in frame.vectors.iter().enumerate() {
            for (b, w) in frame.vectors.iter().enumerate().skip(a) {
                let v = self.hessian(f, p, u, w)?;
                h[a][b] = v;
                h[b][a] = v;
            }
        }
        Ok(h)
    }

    /// `Δf = tr Ddf` over `frame`, or over the standard frame when `None`.
    pub fn laplacian<F: ScalarField + ?Sized>(
        &self,
        f: &F,
        p: &ProductPoint,
        frame: Option<&Frame>,
    ) -> Result<f64> {
        let owned;
        let frame = match frame {
            Some(fr) => {
                self.embedding.check_frame(p, fr)?;
                fr
            }
            None => {
                owned = self.embedding.standard_frame(p)?;
                &owned
            }
        };
        let mut acc = 0.0;
        for v in &frame.vectors {
            acc += self.second_derivative(f, p, v)?;
        }
        Ok(acc)
    }

    /// `Δ_i f`, the trace of `Ddf` over the tangent space of factor `i`.
    pub fn partial_laplacian<F: ScalarField + ?Sized>(
        &self,
        f: &F,
        p: &ProductPoint,
        factor: usize,
    ) -> Result<f64> {
        if factor >= self.embedding.factor_count() {
            return Err(Error::FactorCountMismatch {
                expected: self.embedding.factor_count(),
                got: factor + 1,
            });
        }
        let frame = self.embedding.standard_frame(p)?;
        let mut acc = 0.0;
        for (v, owner) in frame.vectors.iter().zip(&frame.factor_of) {
            if *owner == Some(factor) {
                acc += self.second_derivative(f, p, v)?;
            }
        }
        Ok(acc)
    }

    /// `|df|²` over the standard frame.
    pub fn gradient_norm_sq<F: ScalarField + ?Sized>(
        &self,
        f: &F,
        p: &ProductPoint,
    ) -> Result<f64> {
        let frame = self.embedding.standard_frame(p)?;
        let mut acc = 0.0;
        for v in &frame.vectors {
            let d = self.first_derivative(f, p, v)?;
            acc += d * d;
        }
        Ok(acc)
    }
}

/// Least-squares slope of `log y` against `log x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    use num_traits::Float;
    let lx: Vec<f64> = xs.iter().map(|x| Float::ln(*x)).collect();
    let ly: Vec<f64> = ys.iter().map(|y| Float::ln(*y)).collect();
    let k = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
