//! Finite-difference and quadrature checks of the exact symbol formulas.
//!
//! `oracle_apply_a` differences only `Δφ` and the partial Laplacians; `Δ²φ =
//! λ²φ` comes from the eigenfunction structure. The integral checks compare
//! quadratures of pointwise expressions against `symbol · ∫φ²`:
//!
//! ```text
//! |s′*φ|² = |Ddφ − (Δφ)g − φr|²
//!        = |Ddφ|² + (n − 2)(Δφ)² + φ²|r|² − 2φ⟨Ddφ, r⟩ + 2sφΔφ
//! ```
//!
//! and the rearrangement `∫{n(Δφ)² − 2s|dφ|² − |Ddφ|² + φ²|r|²} = ∫φ𝒜φ`.
//! Relative errors are taken against the sum of the absolute analytic term
//! values, which is the size of the quantities that cancel.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use crate::error::{Error, Result};
use crate::manifold::{GeometryData, ProductManifold};
use crate::operators::{self, OperatorKind};
use crate::oracle::eigenfunction::{ScalarField, SeparatedEigenfunction};
use crate::oracle::fd::{log_log_slope, Fd, FdStep};
use crate::oracle::geometry::{Embedding, ProductPoint};
use crate::oracle::quadrature::{NodeCounts, QuadratureRule};
use crate::oracle::{NodeMap, Sequential};
use crate::rational::{self, Rational};
use crate::spectrum::JointEigenvalue;

pub const DEFAULT_IDENTITY_TOLERANCE: f64 = 1e-4;
pub const DEFAULT_APPLY_TOLERANCE: f64 = 1e-3;
/// Sample points with `|φ(p)|` below this fraction of the pilot maximum are
/// skipped, since the check divides by `φ(p)`.
pub const REJECT_FRACTION: f64 = 0.1;
const PILOT_SAMPLES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSettings {
    pub step: FdStep,
    pub nodes: NodeCounts,
    pub identity_tolerance: f64,
    pub apply_tolerance: f64,
    pub samples: usize,
}

impl Default for OracleSettings {
    fn default() -> Self {
        Self {
            step: FdStep::default(),
            nodes: NodeCounts::default(),
            identity_tolerance: DEFAULT_IDENTITY_TOLERANCE,
            apply_tolerance: DEFAULT_APPLY_TOLERANCE,
            samples: 20,
        }
    }
}

/// Finite-difference evaluation of `𝒜φ(p)`.
pub fn oracle_apply_a(
    geom: &GeometryData,
    fd: &Fd<'_>,
    phi: &SeparatedEigenfunction,
    p: &ProductPoint,
) -> Result<f64> {
    let frame = fd.embedding.standard_frame(p)?;
    let mut lap = 0.0;
    let mut partial = alloc::vec![0.0; fd.embedding.factor_count()];
    for (v, owner) in frame.vectors.iter().zip(&frame.factor_of) {
        let d = fd.second_derivative(phi, p, v)?;
        lap += d;
        partial[owner.expect("standard frame vectors lie in one factor")] += d;
    }
    let value = phi.eval(p);
    let lambda = phi.lambda();
    let n1 = f64::from(geom.n) - 1.0;
    let s = rational::to_f64(&geom.s);
    let r2 = rational::to_f64(&geom.ricci_norm_sq);
    let contraction: f64 = geom
        .ricci_eigs
        .iter()
        .zip(&partial)
        .map(|(c, d)| rational::to_f64(c) * d)
        .sum();
    Ok(n1 * lambda * lambda * value + 2.0 * s * lap - contraction + r2 * value)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApplyReport {
    pub levels: Vec<u32>,
    pub total: Rational,
    pub symbol: Rational,
    pub samples: usize,
    pub rejected: usize,
    /// Largest `|𝒜φ(p)/φ(p) − symbol|` over accepted samples.
    pub max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Compares `oracle_apply_a(φ)/φ` with the exact symbol at random points.
pub fn check_apply_a<R: Rng + ?Sized>(
    m: &ProductManifold,
    levels: &[u32],
    settings: &OracleSettings,
    rng: &mut R,
) -> Result<ApplyReport> {
    let geom = m.geometry();
    let e = Embedding::new(m);
    let fd = Fd::new(&e, settings.step)?;
    let phi = SeparatedEigenfunction::generic(m, levels)?;
    let symbol = operators::symbol(&geom, &OperatorKind::A, phi.mode())?;
    let exact = rational::to_f64(&symbol);

    let pilot = (0..PILOT_SAMPLES)
        .map(|_| phi.eval(&e.random_point(rng)).abs())
        .fold(0.0, f64::max);
    let floor = REJECT_FRACTION * pilot;
    let mut accepted = 0;
    let mut rejected = 0;
    let mut max_deviation: f64 = 0.0;
    while accepted < settings.samples {
        let p = e.random_point(rng);
        let v = phi.eval(&p);
        if v.abs() < floor || v == 0.0 {
            rejected += 1;
            if rejected > 100 * settings.samples.max(1) {
                return Err(Error::Consistency(format!(
                    "no usable sample points for mode {levels:?}"
                )));
            }
            continue;
        }
        let a = oracle_apply_a(&geom, &fd, &phi, &p)?;
        max_deviation = max_deviation.max((a / v - exact).abs());
        accepted += 1;
    }
    Ok(ApplyReport {
        levels: levels.to_vec(),
        total: phi.mode().total.clone(),
        symbol,
        samples: accepted,
        rejected,
        max_deviation,
        tolerance: settings.apply_tolerance,
        passed: max_deviation <= settings.apply_tolerance,
    })
}

/// One integrated term: quadrature value against the analytic prediction.
#[derive(Debug, Clone, PartialEq)]
pub struct TermCheck {
    pub name: &'static str,
    pub quadrature: f64,
    pub analytic: f64,
}

impl TermCheck {
    pub fn deviation(&self) -> f64 {
        (self.quadrature - self.analytic).abs()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub check: &'static str,
    pub levels: Vec<u32>,
    pub symbol: Rational,
    /// `∫φ²` by quadrature.
    pub norm_sq: f64,
    /// Quadrature of the full integrand.
    pub lhs: f64,
    /// `symbol · ∫φ²`.
    pub rhs: f64,
    pub terms: Vec<TermCheck>,
    pub scale: f64,
    pub relative_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl IdentityReport {
    fn finish(
        check: &'static str,
        phi: &SeparatedEigenfunction,
        symbol: Rational,
        norm_sq: f64,
        lhs: f64,
        terms: Vec<TermCheck>,
        tolerance: f64,
    ) -> Self {
        let rhs = rational::to_f64(&symbol) * norm_sq;
        let scale = terms
            .iter()
            .map(|t| t.analytic.abs())
            .sum::<f64>()
            .max(norm_sq);
        let worst_term = terms.iter().map(TermCheck::deviation).fold(0.0, f64::max);
        let relative_error = (lhs - rhs).abs().max(worst_term) / scale;
        Self {
            check,
            levels: phi.mode().levels.clone(),
            symbol,
            norm_sq,
            lhs,
            rhs,
            terms,
            scale,
            relative_error,
            tolerance,
            passed: relative_error <= tolerance,
        }
    }

    /// Per-term breakdown for failure messages.
    pub fn diagnostic(&self) -> String {
        let mut out = format!(
            "{} mode {:?}: lhs {:.12e} rhs {:.12e} relative error {:.3e} (tolerance {:.1e})",
            self.check, self.levels, self.lhs, self.rhs, self.relative_error, self.tolerance
        );
        for t in &self.terms {
            out.push_str(&format!(
                "; {} quadrature {:.12e} analytic {:.12e}",
                t.name, t.quadrature, t.analytic
            ));
        }
        out
    }

    pub fn ensure(&self) -> Result<()> {
        if self.passed {
            Ok(())
        } else {
            Err(Error::Tolerance(self.diagnostic()))
        }
    }
}

struct Context<'a> {
    geom: GeometryData,
    embedding: &'a Embedding,
    rule: QuadratureRule,
    fd: Fd<'a>,
    phi: SeparatedEigenfunction,
    symbol: Rational,
}

impl<'a> Context<'a> {
    fn new(
        m: &ProductManifold,
        embedding: &'a Embedding,
        levels: &[u32],
        settings: &OracleSettings,
    ) -> Result<Self> {
        let geom = m.geometry();
        let rule = QuadratureRule::new(embedding, settings.nodes)?;
        let fd = Fd::new(embedding, settings.step)?;
        let phi = SeparatedEigenfunction::generic(m, levels)?;
        let symbol = operators::symbol(&geom, &OperatorKind::A, phi.mode())?;
        Ok(Self {
            geom,
            embedding,
            rule,
            fd,
            phi,
            symbol,
        })
    }

    /// Column `k` of the per-node table, integrated.
    fn integrate_column<const K: usize>(&self, table: &[[f64; K]], k: usize) -> f64 {
        let col: Vec<f64> = table.iter().map(|row| row[k]).collect();
        self.rule.integrate_values(&col)
    }
}

fn collect<const K: usize>(rows: Vec<Result<[f64; K]>>) -> Result<Vec<[f64; K]>> {
    rows.into_iter().collect()
}

fn f(r: &Rational) -> f64 {
    rational::to_f64(r)
}

/// `∫|s′*φ|²` against `symbol(𝒜) · ∫φ²` for the generic eigenfunction at `levels`.
pub fn verify_lstar_identity<M: NodeMap>(
    m: &ProductManifold,
    levels: &[u32],
    settings: &OracleSettings,
    map: &M,
) -> Result<IdentityReport> {
    let e = Embedding::new(m);
    let ctx = Context::new(m, &e, levels, settings)?;
    let n = ctx.geom.n as usize;
    let s = f(&ctx.geom.s);
    let r2 = f(&ctx.geom.ricci_norm_sq);
    let c: Vec<f64> = ctx.geom.ricci_eigs.iter().map(f).collect();

    // Columns: φ², |s′*φ|², |Ddφ|², (Δφ)², φ⟨Ddφ, r⟩, φΔφ.
    let table = collect(map.map_nodes(ctx.rule.len(), |j| {
        let p = &ctx.rule.points[j];
        let frame = ctx.embedding.standard_frame(p)?;
        let h = ctx.fd.hessian_matrix(&ctx.phi, p, &frame)?;
        let v = ctx.phi.eval(p);
        let ricci: Vec<f64> = frame
            .factor_of
            .iter()
            .map(|o| c[o.expect("standard frame")])
            .collect();
        let lap: f64 = (0..n).map(|a| h[a][a]).sum();
        let mut lstar_sq = 0.0;
        let mut hess_sq = 0.0;
        let mut contraction = 0.0;
        for (a, row) in h.iter().enumerate() {
            for (b, hab) in row.iter().enumerate() {
                let diag = if a == b { lap + v * ricci[a] } else { 0.0 };
                let t = hab - diag;
                lstar_sq += t * t;
                hess_sq += hab * hab;
            }
            contraction += row[a] * ricci[a];
        }
        Ok([
            v * v,
            lstar_sq,
            hess_sq,
            lap * lap,
            v * contraction,
            v * lap,
        ])
    }))?;
    let norm_sq = ctx.integrate_column(&table, 0);
    let lhs = ctx.integrate_column(&table, 1);

    let lambda = f(&ctx.phi.mode().total);
    let sum_c = f(&operators::ricci_contraction(&ctx.geom, ctx.phi.mode()));
    let nf = n as f64;
    let terms = alloc::vec![
        TermCheck {
            name: "hessian_sq",
            quadrature: ctx.integrate_column(&table, 2),
            analytic: (lambda * lambda - sum_c) * norm_sq,
        },
        TermCheck {
            name: "laplacian_sq_times_n_minus_2",
            quadrature: (nf - 2.0) * ctx.integrate_column(&table, 3),
            analytic: (nf - 2.0) * lambda * lambda * norm_sq,
        },
        TermCheck {
            name: "potential",
            quadrature: r2 * norm_sq,
            analytic: r2 * norm_sq,
        },
        TermCheck {
            name: "ricci_contraction_times_minus_2",
            quadrature: -2.0 * ctx.integrate_column(&table, 4),
            analytic: 2.0 * sum_c * norm_sq,
        },
        TermCheck {
            name: "laplacian_times_2s",
            quadrature: 2.0 * s * ctx.integrate_column(&table, 5),
            analytic: -2.0 * s * lambda * norm_sq,
        },
    ];
    Ok(IdentityReport::finish(
        "lstar_identity",
        &ctx.phi,
        ctx.symbol,
        norm_sq,
        lhs,
        terms,
        settings.identity_tolerance,
    ))
}

/// The four integrated Bochner terms against the exact per-mode values.
pub fn verify_bochner<M: NodeMap>(
    m: &ProductManifold,
    levels: &[u32],
    settings: &OracleSettings,
    map: &M,
) -> Result<IdentityReport> {
    let e = Embedding::new(m);
    let ctx = Context::new(m, &e, levels, settings)?;
    let n = ctx.geom.n as usize;

    // Columns: φ², (Δφ)², |dφ|², |Ddφ|².
    let table = collect(map.map_nodes(ctx.rule.len(), |j| {
        let p = &ctx.rule.points[j];
        let frame = ctx.embedding.standard_frame(p)?;
        let h = ctx.fd.hessian_matrix(&ctx.phi, p, &frame)?;
        let v = ctx.phi.eval(p);
        let lap: f64 = (0..n).map(|a| h[a][a]).sum();
        let hess_sq: f64 = h.iter().flatten().map(|x| x * x).sum();
        let grad_sq = ctx.fd.gradient_norm_sq(&ctx.phi, p)?;
        Ok([v * v, lap * lap, grad_sq, hess_sq])
    }))?;
    let norm_sq = ctx.integrate_column(&table, 0);
    let exact = operators::bochner_identity_terms(&ctx.geom, ctx.phi.mode())?;
    let nf = n as f64;
    let s = f(&ctx.geom.s);
    let terms = alloc::vec![
        TermCheck {
            name: "laplacian_sq",
            quadrature: nf * ctx.integrate_column(&table, 1),
            analytic: f(&exact.laplacian_sq) * norm_sq,
        },
        TermCheck {
            name: "gradient",
            quadrature: -2.0 * s * ctx.integrate_column(&table, 2),
            analytic: f(&exact.gradient) * norm_sq,
        },
        TermCheck {
            name: "hessian",
            quadrature: -ctx.integrate_column(&table, 3),
            analytic: f(&exact.hessian) * norm_sq,
        },
        TermCheck {
            name: "potential",
            quadrature: f(&ctx.geom.ricci_norm_sq) * norm_sq,
            analytic: f(&exact.potential) * norm_sq,
        },
    ];
    let lhs = terms.iter().map(|t| t.quadrature).sum();
    Ok(IdentityReport::finish(
        "bochner",
        &ctx.phi,
        ctx.symbol,
        norm_sq,
        lhs,
        terms,
        settings.identity_tolerance,
    ))
}

/// `φ` rescaled to unit L² norm under `rule`.
pub fn normalize(phi: SeparatedEigenfunction, rule: &QuadratureRule) -> SeparatedEigenfunction {
    let norm_sq = rule.integrate(&|p: &ProductPoint| phi.eval(p).powi(2));
    phi.scaled(1.0 / norm_sq.sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub operator: &'static str,
    pub epsilons: Vec<f64>,
    pub errors: Vec<f64>,
    pub slope: f64,
}

pub const CONVERGENCE_EPSILONS: [f64; 3] = [1e-2, 5e-3, 2.5e-3];

/// Observed order of the unrefined stencils for `Δ`, `Δ_0`, an off-diagonal
/// Hessian entry and `dφ`, measured against the exact derivatives at `p`.
pub fn convergence_orders(
    m: &ProductManifold,
    phi: &SeparatedEigenfunction,
    p: &ProductPoint,
) -> Result<Vec<ConvergenceReport>> {
    let e = Embedding::new(m);
    let frame = e.standard_frame(p)?;
    let (u, w) = (&frame.vectors[0], &frame.vectors[frame.len() - 1]);
    let v = phi.eval(p);
    let lambda0 = f(&phi.mode().components[0]);
    let exact = [
        -phi.lambda() * v,
        -lambda0 * v,
        phi.hessian(p, u, w),
        phi.differential(p, u),
    ];
    let names = ["laplacian", "partial_laplacian", "hessian", "gradient"];
    let mut errors = [[0.0; 3]; 4];
    for (k, &eps) in CONVERGENCE_EPSILONS.iter().enumerate() {
        let fd = Fd::new(&e, FdStep::raw(eps))?;
        let got = [
            fd.laplacian(phi, p, Some(&frame))?,
            fd.partial_laplacian(phi, p, 0)?,
            fd.hessian(phi, p, u, w)?,
            fd.first_derivative(phi, p, u)?,
        ];
        for op in 0..4 {
            errors[op][k] = (got[op] - exact[op]).abs();
        }
    }
    Ok(names
        .iter()
        .zip(errors)
        .map(|(name, errs)| ConvergenceReport {
            operator: name,
            epsilons: CONVERGENCE_EPSILONS.to_vec(),
            errors: errs.to_vec(),
            slope: log_log_slope(&CONVERGENCE_EPSILONS, &errs),
        })
        .collect())
}

/// All modes with total `≤ cutoff`, in spectrum order.
pub fn modes_up_to(m: &ProductManifold, cutoff: &Rational) -> Vec<JointEigenvalue> {
    crate::spectrum::enumerate_joint(m, cutoff).collect()
}

/// Sequential convenience wrapper around [`verify_lstar_identity`].
pub fn verify_lstar_identity_seq(
    m: &ProductManifold,
    levels: &[u32],
    settings: &OracleSettings,
) -> Result<IdentityReport> {
    verify_lstar_identity(m, levels, settings, &Sequential)
}

/// Sequential convenience wrapper around [`verify_bochner`].
pub fn verify_bochner_seq(
    m: &ProductManifold,
    levels: &[u32],
    settings: &OracleSettings,
) -> Result<IdentityReport> {
    verify_bochner(m, levels, settings, &Sequential)
}
