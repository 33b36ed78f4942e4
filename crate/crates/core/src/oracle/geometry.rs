//! Points, tangent vectors, frames and geodesics on an embedded product of
//! round spheres. Factor `S^m(ρ)` sits in `ℝ^{m+1}` as the sphere of radius `ρ`.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::manifold::ProductManifold;
use crate::rational;

const TANGENT_TOL: f64 = 1e-10;
const FRAME_TOL: f64 = 1e-10;

/// Float view of a [`ProductManifold`] used by the oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    dims: Vec<usize>,
    radii: Vec<f64>,
    radii_sq: Vec<f64>,
}

impl Embedding {
    pub fn new(m: &ProductManifold) -> Self {
        let dims = m.factors().iter().map(|f| f.dim() as usize).collect();
        let radii_sq: Vec<f64> = m
            .factors()
            .iter()
            .map(|f| rational::to_f64(f.radius_sq()))
            .collect();
        let radii = radii_sq.iter().map(|r| r.sqrt()).collect();
        Self {
            dims,
            radii,
            radii_sq,
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn radii_sq(&self) -> &[f64] {
        &self.radii_sq
    }

    pub fn factor_count(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Injectivity radius `π min ρ_i`.
    pub fn injectivity_radius(&self) -> f64 {
        core::f64::consts::PI * self.radii.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// The point whose every component is `ρ_i e_0`.
    pub fn base_point(&self) -> ProductPoint {
        ProductPoint {
            components: self
                .dims
                .iter()
                .zip(&self.radii)
                .map(|(&d, &r)| {
                    let mut c = vec![0.0; d + 1];
                    c[0] = r;
                    c
                })
                .collect(),
        }
    }

    /// Uniformly distributed point: a normalized Gaussian vector per factor.
    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> ProductPoint {
        let components = self
            .dims
            .iter()
            .zip(&self.radii)
            .map(|(&d, &r)| loop {
                let v: Vec<f64> = (0..=d).map(|_| gaussian(rng)).collect();
                let len = norm(&v);
                if len > 1e-8 {
                    break v.iter().map(|x| x * r / len).collect();
                }
            })
            .collect();
        ProductPoint { components }
    }

    /// Orthonormal frame in which each vector lies in a single factor, ordered
    /// by factor.
    pub fn standard_frame(&self, p: &ProductPoint) -> Result<Frame> {
        let mut vectors = Vec::with_capacity(self.dim());
        let mut factor_of = Vec::with_capacity(self.dim());
        for (i, &d) in self.dims.iter().enumerate() {
            let pi = &p.components[i];
            let unit_p: Vec<f64> = pi.iter().map(|x| x / norm(pi)).collect();
            // Start from the ambient axes least aligned with p.
            let mut axes: Vec<usize> = (0..=d).collect();
            axes.sort_by(|&a, &b| unit_p[a].abs().total_cmp(&unit_p[b].abs()));
            let mut basis: Vec<Vec<f64>> = vec![unit_p];
            for axis in axes {
                if basis.len() == d + 1 {
                    break;
                }
                let mut v = vec![0.0; d + 1];
                v[axis] = 1.0;
                for _ in 0..2 {
                    for b in &basis {
                        let c = dot(&v, b);
                        for (x, y) in v.iter_mut().zip(b) {
                            *x -= c * y;
                        }
                    }
                }
                let len = norm(&v);
                if len > 1e-6 {
                    basis.push(v.iter().map(|x| x / len).collect());
                }
            }
            if basis.len() != d + 1 {
                return Err(Error::DegenerateFrame);
            }
            for b in basis.into_iter().skip(1) {
                let mut t = TangentVector::zero(self);
                t.components[i] = b;
                vectors.push(t);
                factor_of.push(Some(i));
            }
        }
        Ok(Frame { vectors, factor_of })
    }

    /// `frame` rotated by a random orthogonal matrix. The result mixes factors.
    pub fn rotate_frame<R: Rng + ?Sized>(&self, frame: &Frame, rng: &mut R) -> Frame {
        let n = frame.vectors.len();
        let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n);
        while rows.len() < n {
            let mut v: Vec<f64> = (0..n).map(|_| gaussian(rng)).collect();
            for _ in 0..2 {
                for r in &rows {
                    let c = dot(&v, r);
                    for (x, y) in v.iter_mut().zip(r) {
                        *x -= c * y;
                    }
                }
            }
            let len = norm(&v);
            if len > 1e-6 {
                rows.push(v.iter().map(|x| x / len).collect());
            }
        }
        let vectors = rows
            .iter()
            .map(|row| {
                let mut t = TangentVector::zero(self);
                for (c, e) in row.iter().zip(&frame.vectors) {
                    t.add_scaled(*c, e);
                }
                t
            })
            .collect();
        Frame {
            vectors,
            factor_of: vec![None; n],
        }
    }

    /// Checks that `frame` is an orthonormal basis of `T_pM`.
    pub fn check_frame(&self, p: &ProductPoint, frame: &Frame) -> Result<()> {
        if frame.vectors.len() != self.dim() {
            return Err(Error::DegenerateFrame);
        }
        for (a, u) in frame.vectors.iter().enumerate() {
            self.check_tangent(p, u)?;
            for (b, v) in frame.vectors.iter().enumerate() {
                let want = if a == b { 1.0 } else { 0.0 };
                if (u.dot(v) - want).abs() > FRAME_TOL {
                    return Err(Error::DegenerateFrame);
                }
            }
        }
        Ok(())
    }

    pub fn check_tangent(&self, p: &ProductPoint, v: &TangentVector) -> Result<()> {
        for ((pi, vi), r) in p.components.iter().zip(&v.components).zip(&self.radii) {
            let d = dot(pi, vi);
            if d.abs() > TANGENT_TOL * r * norm(vi).max(1.0) {
                return Err(Error::NotTangent(d));
            }
        }
        Ok(())
    }

    /// Product geodesic `γ(t)` with `γ(0) = p`, `γ′(0) = v`.
    pub fn geodesic(&self, p: &ProductPoint, v: &TangentVector, t: f64) -> Result<ProductPoint> {
        if v.components.iter().all(|c| norm(c) == 0.0) {
            return Err(Error::ZeroTangent);
        }
        let components = p
            .components
            .iter()
            .zip(&v.components)
            .zip(&self.radii)
            .map(|((pi, vi), &r)| {
                if norm(vi) == 0.0 {
                    Ok(pi.clone())
                } else {
                    geodesic(r, pi, vi, t)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ProductPoint { components })
    }
}

/// Great circle on the sphere of radius `radius`:
/// `γ(t) = p cos(|v|t/ρ) + ρ (v/|v|) sin(|v|t/ρ)`.
pub fn geodesic(radius: f64, p: &[f64], v: &[f64], t: f64) -> Result<Vec<f64>> {
    let speed = norm(v);
    if speed == 0.0 {
        return Err(Error::ZeroTangent);
    }
    let d = dot(p, v);
    if d.abs() > TANGENT_TOL * radius * speed.max(1.0) {
        return Err(Error::NotTangent(d));
    }
    let theta = speed * t / radius;
    let (sin, cos) = (theta.sin(), theta.cos());
    Ok(p.iter()
        .zip(v)
        .map(|(x, y)| x * cos + radius * y / speed * sin)
        .collect())
}

/// Point of the embedded product: one ambient vector per factor.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductPoint {
    pub components: Vec<Vec<f64>>,
}

impl ProductPoint {
    /// Rescales each component to its factor radius.
    pub fn renormalize(&mut self, e: &Embedding) {
        for (c, r) in self.components.iter_mut().zip(&e.radii) {
            let len = norm(c);
            for x in c.iter_mut() {
                *x *= r / len;
            }
        }
    }

    /// Largest `| |p_i| − ρ_i |`.
    pub fn radius_defect(&self, e: &Embedding) -> f64 {
        self.components
            .iter()
            .zip(&e.radii)
            .map(|(c, r)| (norm(c) - r).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    pub components: Vec<Vec<f64>>,
}

impl TangentVector {
    pub fn zero(e: &Embedding) -> Self {
        Self {
            components: e.dims.iter().map(|&d| vec![0.0; d + 1]).collect(),
        }
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| dot(a, b))
            .sum()
    }

    pub fn add_scaled(&mut self, c: f64, other: &Self) {
        for (a, b) in self.components.iter_mut().zip(&other.components) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += c * y;
            }
        }
    }

    pub fn sum(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(1.0, other);
        out
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(-1.0, other);
        out
    }
}

/// Orthonormal tangent frame at a point. `factor_of[a]` names the factor
/// containing vector `a` when it lies in a single factor.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub vectors: Vec<TangentVector>,
    pub factor_of: Vec<Option<usize>>,
}

impl Frame {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
