//! The numerical oracle: per-mode pointwise, integrated and convergence checks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use sprime_core::oracle::checks::{
    check_apply_a, convergence_orders, modes_up_to, verify_bochner, verify_lstar_identity,
};
use sprime_core::oracle::quadrature::MAX_QUADRATURE_DIM;
use sprime_core::oracle::{
    ApplyReport, ConvergenceReport, Embedding, IdentityReport, NodeMap, OracleSettings,
    SeparatedEigenfunction,
};
use sprime_core::rational::{self, Rational};
use sprime_core::ProductManifold;

use crate::error::CliError;
use crate::report::{exact, levels_text, Report, Table};

pub const DEFAULT_ORACLE_CUTOFF: i64 = 8;
/// Accepted band for observed finite-difference orders.
pub const ORDER_BAND: (f64, f64) = (1.7, 2.3);

/// Maps quadrature nodes on the rayon pool; results stay in index order, so
/// sums are identical for every thread count.
#[derive(Debug, Clone, Copy, Default)]
pub struct Rayon;

impl NodeMap for Rayon {
    fn map_nodes<T, F>(&self, count: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..count).into_par_iter().map(f).collect()
    }
}

/// Independent stream per mode so results do not depend on evaluation order.
pub fn mode_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

pub fn parse_levels(text: &str, factors: usize) -> Result<Vec<Vec<u32>>, CliError> {
    text.split(';')
        .map(|mode| {
            let levels = mode
                .split(',')
                .map(|k| k.trim().parse::<u32>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| CliError::Usage(format!("invalid levels {text:?}")))?;
            if levels.len() != factors {
                return Err(CliError::Usage(format!(
                    "mode {mode:?} has {} levels but the manifold has {factors} factors",
                    levels.len()
                )));
            }
            Ok(levels)
        })
        .collect()
}

pub fn select_modes(
    m: &ProductManifold,
    levels: Option<&str>,
    cutoff: &Rational,
) -> Result<Vec<Vec<u32>>, CliError> {
    match levels {
        Some(text) => parse_levels(text, m.factor_count()),
        None => Ok(modes_up_to(m, cutoff)
            .into_iter()
            .map(|j| j.levels)
            .collect()),
    }
}

/// Errors below this are roundoff; the stencil is exact for the function
/// (for example the vanishing off-diagonal Hessian of a level-1 harmonic).
pub const ROUNDOFF_FLOOR: f64 = 1e-10;

pub fn stencil_exact(r: &ConvergenceReport) -> bool {
    r.errors.iter().all(|&e| e <= ROUNDOFF_FLOOR)
}

pub fn order_ok(r: &ConvergenceReport) -> bool {
    stencil_exact(r) || (ORDER_BAND.0..=ORDER_BAND.1).contains(&r.slope)
}

#[derive(Debug, Clone)]
pub struct ModeChecks {
    pub levels: Vec<u32>,
    pub apply: ApplyReport,
    /// Absent when the dimension exceeds the quadrature limit.
    pub lstar: Option<IdentityReport>,
    pub bochner: Option<IdentityReport>,
    /// Absent for the constant mode, whose derivatives vanish identically.
    pub convergence: Option<Vec<ConvergenceReport>>,
}

impl ModeChecks {
    pub fn passed(&self) -> bool {
        self.apply.passed
            && self.lstar.as_ref().is_none_or(|r| r.passed)
            && self.bochner.as_ref().is_none_or(|r| r.passed)
            && self
                .convergence
                .as_ref()
                .is_none_or(|c| c.iter().all(order_ok))
    }
}

pub fn run_mode(
    m: &ProductManifold,
    levels: &[u32],
    index: usize,
    settings: &OracleSettings,
    seed: u64,
) -> Result<ModeChecks, CliError> {
    let mut rng = mode_rng(seed, index);
    let apply = check_apply_a(m, levels, settings, &mut rng)?;
    let (lstar, bochner) = if m.dim() as usize <= MAX_QUADRATURE_DIM {
        (
            Some(verify_lstar_identity(m, levels, settings, &Rayon)?),
            Some(verify_bochner(m, levels, settings, &Rayon)?),
        )
    } else {
        (None, None)
    };
    let convergence = if levels.iter().all(|&k| k == 0) {
        None
    } else {
        let phi = SeparatedEigenfunction::generic(m, levels)?;
        let p = Embedding::new(m).random_point(&mut rng);
        Some(convergence_orders(m, &phi, &p)?)
    };
    Ok(ModeChecks {
        levels: levels.to_vec(),
        apply,
        lstar,
        bochner,
        convergence,
    })
}

pub fn apply_json(r: &ApplyReport) -> Value {
    json!({
        "levels": r.levels,
        "total": exact(&r.total),
        "symbol": exact(&r.symbol),
        "samples": r.samples,
        "rejected": r.rejected,
        "max_deviation": r.max_deviation,
        "tolerance": r.tolerance,
        "passed": r.passed,
    })
}

pub fn identity_json(r: &IdentityReport) -> Value {
    json!({
        "check": r.check,
        "levels": r.levels,
        "symbol": exact(&r.symbol),
        "norm_sq": r.norm_sq,
        "lhs": r.lhs,
        "rhs": r.rhs,
        "terms": r.terms.iter().map(|t| json!({
            "name": t.name,
            "quadrature": t.quadrature,
            "analytic": t.analytic,
        })).collect::<Vec<_>>(),
        "scale": r.scale,
        "relative_error": r.relative_error,
        "tolerance": r.tolerance,
        "passed": r.passed,
    })
}

pub fn convergence_json(r: &ConvergenceReport) -> Value {
    json!({
        "operator": r.operator,
        "epsilons": r.epsilons,
        "errors": r.errors,
        "slope": r.slope,
        "exact": stencil_exact(r),
        "passed": order_ok(r),
    })
}

fn pass(ok: bool) -> String {
    if ok { "PASS" } else { "FAIL" }.into()
}

pub fn oracle(
    m: &ProductManifold,
    modes: &[Vec<u32>],
    settings: &OracleSettings,
    seed: u64,
) -> Result<(Report, bool), CliError> {
    let checks = modes
        .par_iter()
        .enumerate()
        .map(|(i, levels)| run_mode(m, levels, i, settings, seed))
        .collect::<Result<Vec<_>, _>>()?;
    let passed = checks.iter().all(ModeChecks::passed);
    let mut t = Table::new(["status", "levels", "check", "measured", "tolerance"]);
    for c in &checks {
        let lv = levels_text(&c.levels);
        t.push([
            pass(c.apply.passed),
            lv.clone(),
            format!("apply_a symbol={}", rational::to_exact(&c.apply.symbol)),
            format!("{:e}", c.apply.max_deviation),
            format!("{:e}", c.apply.tolerance),
        ]);
        for r in c.lstar.iter().chain(&c.bochner) {
            t.push([
                pass(r.passed),
                lv.clone(),
                r.check.to_string(),
                format!("{:e}", r.relative_error),
                format!("{:e}", r.tolerance),
            ]);
        }
        for r in c.convergence.iter().flatten() {
            t.push([
                pass(order_ok(r)),
                lv.clone(),
                format!("order_{}", r.operator),
                if stencil_exact(r) {
                    "exact".into()
                } else {
                    format!("{:.3}", r.slope)
                },
                format!("{}..{}", ORDER_BAND.0, ORDER_BAND.1),
            ]);
        }
    }
    let result = json!({
        "manifold": m.label(),
        "settings": {
            "epsilon": settings.step.epsilon,
            "richardson": settings.step.richardson,
            "polar_nodes": settings.nodes.polar,
            "azimuth_nodes": settings.nodes.azimuth,
            "samples": settings.samples,
        },
        "modes": checks.iter().map(|c| json!({
            "levels": c.levels,
            "apply": apply_json(&c.apply),
            "lstar_identity": c.lstar.as_ref().map(identity_json),
            "bochner": c.bochner.as_ref().map(identity_json),
            "convergence": c.convergence.as_ref().map(|v| v.iter().map(convergence_json).collect::<Vec<_>>()),
            "passed": c.passed(),
        })).collect::<Vec<_>>(),
        "passed": passed,
    });
    Ok((
        Report {
            command: "oracle",
            result,
            table: t,
        },
        passed,
    ))
}
