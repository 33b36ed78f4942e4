//! Separated joint eigenfunctions `φ = Π_i P_i(x_i/ρ_i)` with each `P_i` a
//! homogeneous harmonic polynomial of degree `k_i` in `m_i + 1` variables.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::manifold::ProductManifold;
use crate::oracle::geometry::{dot, Embedding, ProductPoint, TangentVector};
use crate::oracle::harmonic::{harmonic_basis, HarmonicPolynomial};
use crate::rational::{self, Rational};
use crate::spectrum::JointEigenvalue;

/// A function on the embedded product, evaluated pointwise.
pub trait ScalarField {
    fn eval(&self, p: &ProductPoint) -> f64;
}

impl<F: Fn(&ProductPoint) -> f64> ScalarField for F {
    fn eval(&self, p: &ProductPoint) -> f64 {
        self(p)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeparatedEigenfunction {
    mode: JointEigenvalue,
    factors: Vec<HarmonicPolynomial>,
    radii: Vec<f64>,
    radii_sq: Vec<f64>,
    scale: f64,
}

impl SeparatedEigenfunction {
    /// Generic member of the joint eigenspace at `levels`: factor `i` uses
    /// the basis combination with weights `(−1)^j (j + 2)/(j + 1)`, so no
    /// factor reduces to a single monomial.
    pub fn generic(m: &ProductManifold, levels: &[u32]) -> Result<Self> {
        Self::build(m, levels, |basis| {
            let w: Vec<Rational> = (0..basis.len() as i64)
                .map(|j| {
                    let sign = if j % 2 == 0 { 1 } else { -1 };
                    rational::ratio(sign * (j + 2), j + 1)
                })
                .collect();
            Ok(HarmonicPolynomial::combine(basis, &w))
        })
    }

    /// The product of the `picks[i]`-th basis polynomial of each factor.
    pub fn basis_element(m: &ProductManifold, levels: &[u32], picks: &[usize]) -> Result<Self> {
        if picks.len() != levels.len() {
            return Err(Error::FactorCountMismatch {
                expected: levels.len(),
                got: picks.len(),
            });
        }
        let mut it = picks.iter().zip(levels);
        Self::build(m, levels, |basis| {
            let (&index, &level) = it.next().expect("one pick per factor");
            basis.get(index).cloned().ok_or(Error::BasisIndex {
                level,
                index,
                available: basis.len(),
            })
        })
    }

    fn build<F>(m: &ProductManifold, levels: &[u32], mut choose: F) -> Result<Self>
    where
        F: FnMut(&[HarmonicPolynomial]) -> Result<HarmonicPolynomial>,
    {
        if levels.len() != m.factor_count() {
            return Err(Error::FactorCountMismatch {
                expected: m.factor_count(),
                got: levels.len(),
            });
        }
        let mut factors = Vec::with_capacity(levels.len());
        for (f, &k) in m.factors().iter().zip(levels) {
            let basis = harmonic_basis(f.dim() as usize + 1, k)?;
            factors.push(choose(&basis)?);
        }
        let e = Embedding::new(m);
        Ok(Self {
            mode: JointEigenvalue::from_levels(m, levels),
            factors,
            radii: e.radii().to_vec(),
            radii_sq: e.radii_sq().to_vec(),
            scale: 1.0,
        })
    }

    /// Same function multiplied by `c`.
    pub fn scaled(mut self, c: f64) -> Self {
        self.scale *= c;
        self
    }

    pub fn mode(&self) -> &JointEigenvalue {
        &self.mode
    }

    pub fn factors(&self) -> &[HarmonicPolynomial] {
        &self.factors
    }

    /// Total Laplace eigenvalue `λ` as a float.
    pub fn lambda(&self) -> f64 {
        rational::to_f64(&self.mode.total)
    }

    fn factor_values(&self, p: &ProductPoint) -> Vec<f64> {
        self.factors
            .iter()
            .zip(&p.components)
            .zip(&self.radii)
            .map(|((poly, x), r)| {
                let y: Vec<f64> = x.iter().map(|v| v / r).collect();
                poly.eval(&y)
            })
            .collect()
    }

    /// Tangential derivative of factor `i` along `v_i`.
    fn factor_derivative(&self, i: usize, p: &ProductPoint, v: &[f64]) -> f64 {
        let r = self.radii[i];
        let y: Vec<f64> = p.components[i].iter().map(|x| x / r).collect();
        dot(&self.factors[i].gradient(&y), v) / r
    }

    /// Riemannian Hessian of factor `i` on `(u_i, v_i)`:
    /// `D²F(u, v) − k F ⟨u, v⟩/ρ²` for the degree-`k` homogeneous extension `F`.
    fn factor_hessian(&self, i: usize, p: &ProductPoint, u: &[f64], v: &[f64]) -> f64 {
        let r = self.radii[i];
        let y: Vec<f64> = p.components[i].iter().map(|x| x / r).collect();
        let h = self.factors[i].hessian(&y);
        let d2: f64 = h
            .iter()
            .zip(u)
            .map(|(row, ua)| ua * dot(row, v))
            .sum::<f64>()
            / self.radii_sq[i];
        let k = f64::from(self.factors[i].degree());
        d2 - k * self.factors[i].eval(&y) * dot(u, v) / self.radii_sq[i]
    }

    /// Exact differential `dφ(v)`.
    pub fn differential(&self, p: &ProductPoint, v: &TangentVector) -> f64 {
        let vals = self.factor_values(p);
        let mut acc = 0.0;
        for i in 0..vals.len() {
            let others: f64 = product_except(&vals, &[i]);
            acc += self.factor_derivative(i, p, &v.components[i]) * others;
        }
        self.scale * acc
    }

    /// Exact Riemannian Hessian `Ddφ(u, v)`.
    pub fn hessian(&self, p: &ProductPoint, u: &TangentVector, v: &TangentVector) -> f64 {
        let vals = self.factor_values(p);
        let count = vals.len();
        let mut acc = 0.0;
        for i in 0..count {
            acc += self.factor_hessian(i, p, &u.components[i], &v.components[i])
                * product_except(&vals, &[i]);
            for j in 0..count {
                if i != j {
                    acc += self.factor_derivative(i, p, &u.components[i])
                        * self.factor_derivative(j, p, &v.components[j])
                        * product_except(&vals, &[i, j]);
                }
            }
        }
        self.scale * acc
    }
}

fn product_except(vals: &[f64], skip: &[usize]) -> f64 {
    vals.iter()
        .enumerate()
        .filter(|(i, _)| !skip.contains(i))
        .map(|(_, v)| v)
        .product()
}

impl ScalarField for SeparatedEigenfunction {
    fn eval(&self, p: &ProductPoint) -> f64 {
        self.scale * self.factor_values(p).iter().product::<f64>()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn mode_matches_spectrum() {
        let m = ProductManifold::unit_product(&[2, 3]).unwrap();
        let phi = SeparatedEigenfunction::generic(&m, &[2, 1]).unwrap();
        assert_eq!(phi.mode().total, int(9));
        assert!(phi.factors().iter().all(HarmonicPolynomial::is_harmonic));
        assert!(SeparatedEigenfunction::generic(&m, &[1]).is_err());
    }

    #[test]
    fn hessian_trace_is_minus_lambda() {
        let m = ProductManifold::new(alloc::vec![
            crate::SphereFactor::new(2, rational::ratio(1, 2)).unwrap(),
            crate::SphereFactor::unit(1).unwrap(),
        ])
        .unwrap();
        let e = Embedding::new(&m);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for levels in [[1u32, 0], [2, 1], [0, 3], [3, 2]] {
            let phi = SeparatedEigenfunction::generic(&m, &levels).unwrap();
            for _ in 0..10 {
                let p = e.random_point(&mut rng);
                let f = e.standard_frame(&p).unwrap();
                let tr: f64 = f.vectors.iter().map(|v| phi.hessian(&p, v, v)).sum();
                let want = -phi.lambda() * phi.eval(&p);
                assert!((tr - want).abs() < 1e-11 * (1.0 + want.abs()), "{levels:?}");
            }
        }
    }
}
