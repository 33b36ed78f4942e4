//! Tensor-product quadrature on products of round spheres.
//!
//! `S^m` is sliced by the polar cosine `t = x_0`: `dV_{S^m} = (1 − t²)^{(m−2)/2}
//! dt dV_{S^{m−1}}`. For even `m` the weight is polynomial and Gauss–Legendre
//! in `t` is used. For odd `m ≥ 3` the weight has a `√(1 − t²)` factor, which
//! Gauss–Chebyshev of the second kind integrates exactly. Circles use the
//! uniform rule. Each rule is exact on polynomials in the ambient coordinates
//! of degree `< min(2·polar, azimuth)`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::oracle::eigenfunction::ScalarField;
use crate::oracle::geometry::{Embedding, ProductPoint};
use crate::oracle::pairwise_sum;

/// Largest total dimension accepted by [`QuadratureRule::new`].
pub const MAX_QUADRATURE_DIM: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeCounts {
    /// Nodes per polar-cosine axis.
    pub polar: usize,
    /// Nodes per circle.
    pub azimuth: usize,
}

impl Default for NodeCounts {
    fn default() -> Self {
        Self {
            polar: 6,
            azimuth: 10,
        }
    }
}

/// Gauss–Legendre nodes and weights on `[−1, 1]` by Newton iteration.
pub fn gauss_legendre(count: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; count];
    let mut weights = vec![0.0; count];
    let nf = count as f64;
    for i in 0..count.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=count {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = x;
        weights[i] = w;
        nodes[count - 1 - i] = -x;
        weights[count - 1 - i] = w;
    }
    (nodes, weights)
}

/// Gauss–Chebyshev nodes and weights of the second kind for `∫ f(t) √(1 − t²) dt`.
pub fn gauss_chebyshev_second(count: usize) -> (Vec<f64>, Vec<f64>) {
    let h = PI / (count as f64 + 1.0);
    (1..=count)
        .map(|j| {
            let th = j as f64 * h;
            (th.cos(), h * th.sin() * th.sin())
        })
        .unzip()
}

/// Rule on the unit sphere `S^m ⊂ ℝ^{m+1}`.
fn unit_sphere_rule(m: usize, nodes: NodeCounts) -> (Vec<Vec<f64>>, Vec<f64>) {
    if m == 1 {
        let w = 2.0 * PI / nodes.azimuth as f64;
        return (0..nodes.azimuth)
            .map(|j| {
                let th = 2.0 * PI * j as f64 / nodes.azimuth as f64;
                (vec![th.cos(), th.sin()], w)
            })
            .unzip();
    }
    let (ts, tw) = if m.is_multiple_of(2) {
        let (t, w) = gauss_legendre(nodes.polar);
        let w = t
            .iter()
            .zip(w)
            .map(|(t, w)| w * (1.0 - t * t).powi((m as i32 - 2) / 2))
            .collect::<Vec<_>>();
        (t, w)
    } else {
        let (t, w) = gauss_chebyshev_second(nodes.polar);
        let w = t
            .iter()
            .zip(w)
            .map(|(t, w)| w * (1.0 - t * t).powi((m as i32 - 3) / 2))
            .collect::<Vec<_>>();
        (t, w)
    };
    let (sub_pts, sub_w) = unit_sphere_rule(m - 1, nodes);
    let mut pts = Vec::with_capacity(ts.len() * sub_pts.len());
    let mut ws = Vec::with_capacity(ts.len() * sub_pts.len());
    for (t, w) in ts.iter().zip(&tw) {
        let r = (1.0 - t * t).max(0.0).sqrt();
        for (y, v) in sub_pts.iter().zip(&sub_w) {
            let mut x = Vec::with_capacity(m + 1);
            x.push(*t);
            x.extend(y.iter().map(|c| r * c));
            pts.push(x);
            ws.push(w * v);
        }
    }
    (pts, ws)
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub points: Vec<ProductPoint>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn new(e: &Embedding, nodes: NodeCounts) -> Result<Self> {
        if e.dim() > MAX_QUADRATURE_DIM {
            return Err(Error::DimensionTooLarge(e.dim() as u32));
        }
        if nodes.polar == 0 || nodes.azimuth == 0 {
            return Err(Error::NonPositive {
                what: "node count",
                value: "0".into(),
            });
        }
        let mut points = vec![ProductPoint {
            components: Vec::new(),
        }];
        let mut weights = vec![1.0];
        for (&d, &r) in e.dims().iter().zip(e.radii()) {
            let (pts, ws) = unit_sphere_rule(d, nodes);
            let vol_scale = r.powi(d as i32);
            let mut next_pts = Vec::with_capacity(points.len() * pts.len());
            let mut next_w = Vec::with_capacity(points.len() * pts.len());
            for (p, w) in points.iter().zip(&weights) {
                for (x, v) in pts.iter().zip(&ws) {
                    let mut q = p.clone();
                    q.components.push(x.iter().map(|c| c * r).collect());
                    next_pts.push(q);
                    next_w.push(w * v * vol_scale);
                }
            }
            points = next_pts;
            weights = next_w;
        }
        Ok(Self { points, weights })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `Σ w_j v_j` for precomputed node values, by pairwise summation.
    pub fn integrate_values(&self, values: &[f64]) -> f64 {
        let terms: Vec<f64> = self
            .weights
            .iter()
            .zip(values)
            .map(|(w, v)| w * v)
            .collect();
        pairwise_sum(&terms)
    }

    pub fn integrate<F: ScalarField + ?Sized>(&self, f: &F) -> f64 {
        let values: Vec<f64> = self.points.iter().map(|p| f.eval(p)).collect();
        self.integrate_values(&values)
    }

    pub fn volume(&self) -> f64 {
        pairwise_sum(&self.weights)
    }
}
