//! Homogeneous harmonic polynomials in `d` ambient variables.
//!
//! Bases are computed, not tabulated: the Euclidean Laplacian maps degree-`k`
//! monomials onto degree-`(k−2)` monomials and its exact rational null space is
//! the space of degree-`k` harmonics. Restricted to the sphere of radius `ρ`
//! in `ℝ^d`, such a polynomial is a Laplace eigenfunction with eigenvalue
//! `k(k + d − 2)/ρ²`.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

pub const MAX_DEGREE: u32 = 8;

/// All exponent vectors of total degree `degree` in `vars` variables, in
/// lexicographically decreasing order.
pub fn monomials(vars: usize, degree: u32) -> Vec<Vec<u32>> {
    fn rec(vars: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == vars {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e);
            rec(vars, left - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if vars == 0 {
        return out;
    }
    rec(vars, degree, &mut Vec::new(), &mut out);
    out
}

/// Euclidean Laplacian of `Σ c_a x^a`, as a coefficient table.
pub fn euclidean_laplacian(terms: &[(Vec<u32>, Rational)]) -> Vec<(Vec<u32>, Rational)> {
    let mut out: Vec<(Vec<u32>, Rational)> = Vec::new();
    for (exps, c) in terms {
        for i in 0..exps.len() {
            if exps[i] < 2 {
                continue;
            }
            let mut e = exps.clone();
            e[i] -= 2;
            let factor = rational::int(i64::from(exps[i]) * i64::from(exps[i] - 1));
            match out.iter_mut().find(|(x, _)| *x == e) {
                Some((_, acc)) => *acc += c * &factor,
                None => out.push((e, c * &factor)),
            }
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

/// Null space of a rational matrix (rows × cols) by reduced row echelon form.
fn null_space(mut a: Vec<Vec<Rational>>, cols: usize) -> Vec<Vec<Rational>> {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = Rational::one() / &a[r][c];
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let pivot_row = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); cols];
        v[free] = Rational::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -a[row][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// A homogeneous polynomial with exact coefficients and a float copy for
/// evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicPolynomial {
    vars: usize,
    degree: u32,
    terms: Vec<(Vec<u32>, Rational)>,
    terms_f64: Vec<(Vec<u32>, f64)>,
}

impl HarmonicPolynomial {
    fn from_terms(vars: usize, degree: u32, terms: Vec<(Vec<u32>, Rational)>) -> Self {
        let terms_f64 = terms
            .iter()
            .map(|(e, c)| (e.clone(), rational::to_f64(c)))
            .collect();
        Self {
            vars,
            degree,
            terms,
            terms_f64,
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> &[(Vec<u32>, Rational)] {
        &self.terms
    }

    /// Linear combination of basis polynomials of the same degree.
    pub fn combine(basis: &[HarmonicPolynomial], weights: &[Rational]) -> Self {
        assert!(!basis.is_empty() && basis.len() == weights.len());
        let (vars, degree) = (basis[0].vars, basis[0].degree);
        let mut terms: Vec<(Vec<u32>, Rational)> = Vec::new();
        for (p, w) in basis.iter().zip(weights) {
            for (e, c) in &p.terms {
                match terms.iter_mut().find(|(x, _)| x == e) {
                    Some((_, acc)) => *acc += c * w,
                    None => terms.push((e.clone(), c * w)),
                }
            }
        }
        terms.retain(|(_, c)| !c.is_zero());
        Self::from_terms(vars, degree, terms)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms_f64.iter().map(|(e, c)| c * monomial(x, e)).sum()
    }

    /// Ambient gradient.
    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.vars];
        for (e, c) in &self.terms_f64 {
            for i in 0..self.vars {
                if e[i] == 0 {
                    continue;
                }
                let mut d = e.clone();
                d[i] -= 1;
                g[i] += c * f64::from(e[i]) * monomial(x, &d);
            }
        }
        g
    }

    /// Ambient Hessian matrix.
    pub fn hessian(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let mut h = vec![vec![0.0; self.vars]; self.vars];
        for (e, c) in &self.terms_f64 {
            for i in 0..self.vars {
                for j in 0..self.vars {
                    let mut d = e.clone();
                    let mut coef = *c;
                    if d[i] == 0 {
                        continue;
                    }
                    coef *= f64::from(d[i]);
                    d[i] -= 1;
                    if d[j] == 0 {
                        continue;
                    }
                    coef *= f64::from(d[j]);
                    d[j] -= 1;
                    h[i][j] += coef * monomial(x, &d);
                }
            }
        }
        h
    }

    pub fn is_harmonic(&self) -> bool {
        euclidean_laplacian(&self.terms).is_empty()
    }
}

fn monomial(x: &[f64], e: &[u32]) -> f64 {
    let mut acc = 1.0;
    for (xi, &k) in x.iter().zip(e) {
        for _ in 0..k {
            acc *= xi;
        }
    }
    acc
}

/// Basis of degree-`degree` harmonic polynomials in `vars` variables.
pub fn harmonic_basis(vars: usize, degree: u32) -> Result<Vec<HarmonicPolynomial>> {
    if degree > MAX_DEGREE {
        return Err(Error::DegreeTooLarge(degree));
    }
    let cols = monomials(vars, degree);
    if degree < 2 {
        return Ok(cols
            .into_iter()
            .map(|e| HarmonicPolynomial::from_terms(vars, degree, vec![(e, Rational::one())]))
            .collect());
    }
    let rows = monomials(vars, degree - 2);
    let mut matrix = vec![vec![Rational::zero(); cols.len()]; rows.len()];
    for (j, e) in cols.iter().enumerate() {
        for (img, c) in euclidean_laplacian(&[(e.clone(), Rational::one())]) {
            let i = rows.iter().position(|r| *r == img).expect("image monomial");
            matrix[i][j] = c;
        }
    }
    Ok(null_space(matrix, cols.len())
        .into_iter()
        .map(|v| {
            let terms = cols
                .iter()
                .zip(v)
                .filter(|(_, c)| !c.is_zero())
                .map(|(e, c)| (e.clone(), c))
                .collect();
            HarmonicPolynomial::from_terms(vars, degree, terms)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::harmonic_dimension;

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(3, 2).len(), 6);
        assert_eq!(monomials(2, 5).len(), 6);
        assert_eq!(monomials(4, 3).len(), 20);
        assert_eq!(monomials(1, 4), [vec![4]]);
    }

    #[test]
    fn nullspace_dimension_matches_multiplicity_formula() {
        for m in 1..=4u32 {
            for k in 0..=6u32 {
                let basis = harmonic_basis(m as usize + 1, k).unwrap();
                assert_eq!(basis.len() as u64, harmonic_dimension(m, k), "m={m} k={k}");
                assert!(basis.iter().all(HarmonicPolynomial::is_harmonic));
            }
        }
    }

    #[test]
    fn circle_harmonics_are_real_and_imaginary_parts() {
        let b = harmonic_basis(2, 3).unwrap();
        assert_eq!(b.len(), 2);
        // Re (x + iy)^3 = x³ − 3xy² vanishes at angle π/6.
        let (c, s) = (3f64.sqrt() / 2.0, 0.5);
        let vals: Vec<f64> = b.iter().map(|p| p.eval(&[c, s])).collect();
        assert!(vals.iter().all(|v| v.is_finite()));
        assert!(b.iter().all(HarmonicPolynomial::is_harmonic));
    }

    #[test]
    fn derivatives_match_differences() {
        let b = harmonic_basis(3, 3).unwrap();
        let p = HarmonicPolynomial::combine(
            &b,
            &[
                rational::int(1),
                rational::ratio(1, 2),
                rational::ratio(-2, 3),
                rational::int(2),
                rational::ratio(1, 5),
                rational::int(-1),
                rational::ratio(3, 7),
            ],
        );
        let x = [0.3, -0.7, 0.5];
        let g = p.gradient(&x);
        let h = p.hessian(&x);
        let e = 1e-5;
        for i in 0..3 {
            let mut xp = x;
            let mut xm = x;
            xp[i] += e;
            xm[i] -= e;
            let fd = (p.eval(&xp) - p.eval(&xm)) / (2.0 * e);
            assert!((fd - g[i]).abs() < 1e-8);
            let gp = p.gradient(&xp);
            let gm = p.gradient(&xm);
            for j in 0..3 {
                assert!(((gp[j] - gm[j]) / (2.0 * e) - h[j][i]).abs() < 1e-7);
            }
        }
        let trace: f64 = (0..3).map(|i| h[i][i]).sum();
        assert!(trace.abs() < 1e-12);
    }

    #[test]
    fn degree_guard() {
        assert_eq!(harmonic_basis(3, 9).unwrap_err(), Error::DegreeTooLarge(9));
    }
}
