//! The reproduction suite behind `sprime verify`.
//!
//! Each row checks one closed-form statement about products of round spheres
//! against the exact enumeration or the numerical oracle. Rows run in
//! parallel; the report lists them in the fixed order below.

use rayon::prelude::*;
use serde_json::json;
use sprime_core::bounds::{
    bound_suite, evaluate_suite, superharmonic_bound, threshold_check, BoundName, SuiteInputs,
    Verdict,
};
use sprime_core::operators::{self, symbol_lower_bound, OperatorKind};
use sprime_core::oracle::checks::{
    check_apply_a, convergence_orders, verify_bochner, verify_lstar_identity,
};
use sprime_core::oracle::{Embedding, OracleSettings, SeparatedEigenfunction};
use sprime_core::rational::{self, int, ratio, Rational};
use sprime_core::spectrum::{first_nonzero, harmonic_dimension};
use sprime_core::variational::{self, VariationalResult};
use sprime_core::{ProductManifold, SphereFactor};

use crate::descriptor::load_manifold;
use crate::error::CliError;
use crate::oracle_run::{mode_rng, order_ok, select_modes, Rayon};
use crate::report::{Report, Table};

/// Deliberate defects for exercising the failure path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Fault {
    /// Negates the symbol used by the exact minimization rows.
    SymbolSign,
}

#[derive(Debug, Clone)]
pub struct VerifyContext {
    pub settings: OracleSettings,
    pub seed: u64,
    pub fault: Option<Fault>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub id: &'static str,
    pub description: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = fn(&VerifyContext) -> Result<Outcome, CliError>;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Result<Outcome, CliError> {
    Ok(Outcome {
        passed,
        detail: detail.into(),
    })
}

const ROWS: &[(&str, &str, Check)] = &[
    (
        "s2xs3_kernel",
        "nu(S2xS3) = 0, kernel = level-1 harmonics of S2 at lambda = s/(n-1) = 2",
        s2xs3_kernel,
    ),
    (
        "sm_sm_nu",
        "nu(S^m x S^m) = m for m = 2..5 with termination certificate",
        sm_sm_nu,
    ),
    (
        "sphere_kernels",
        "nu(S^n) = 0, kernel at lambda = s/(n-1) = n of dim n+1, n = 2..6",
        sphere_kernels,
    ),
    (
        "sn_sn1_kernels",
        "nu(S^n x S^(n+1)) = 0, kernel at s/(n-1), n = 2..4",
        sn_sn1_kernels,
    ),
    (
        "mu_bracket",
        "-|r|^2 <= mu <= -s^2/n on the kernel examples, equality on spheres",
        mu_bracket,
    ),
    (
        "unequal_cap",
        "nu(S^m x S^(m+k)) <= min{(m+k)(k-1)^2, m(k+1)^2}",
        unequal_cap,
    ),
    (
        "superharmonic_optimal",
        "superharmonic bound at k = n-1 equals lambda1(S^n) = n, n = 2..10",
        superharmonic_optimal,
    ),
    (
        "bound_suites",
        "no bound violated on the kernel examples and S^m x S^m",
        bound_suites,
    ),
    (
        "alpha_star",
        "alpha*(S2xS2) = 1/2, min symbol of A_alpha* is 0, nu/|r|^2 = alpha*",
        alpha_star,
    ),
    (
        "scaling",
        "nu(t^2 g) t^4 = nu(g) for t^2 in {1/4, 1, 9}",
        scaling,
    ),
    (
        "sweep_no_violation",
        "no bound violated on S2(t)xS2 and S2(t)xS3, t = j/8, j = 2..51",
        sweep_no_violation,
    ),
    (
        "lichnerowicz",
        "lambda1 >= n k/(n-1), equality exactly on the round spheres",
        lichnerowicz,
    ),
    (
        "gap_threshold",
        "(n-1) lambda1 >= 2s + |r| forces nu >= s^2/n on S2 x S1(1/100) x S1(1/100)",
        gap_threshold,
    ),
    (
        "oracle_apply",
        "finite-difference A(phi)/phi matches the symbol on S2xS2 and S3, total <= 8",
        oracle_apply,
    ),
    (
        "oracle_lstar",
        "integral of |s'* phi|^2 equals symbol * integral of phi^2 on the same modes",
        oracle_lstar,
    ),
    (
        "oracle_bochner",
        "integrated Bochner terms match their exact values on the same modes",
        oracle_bochner,
    ),
    (
        "fd_order",
        "unrefined stencils converge at order 2 +- 0.3",
        fd_order,
    ),
];

fn m(desc: &str) -> ProductManifold {
    load_manifold(desc).expect("built-in descriptor")
}

fn unit(dims: &[u32]) -> ProductManifold {
    ProductManifold::unit_product(dims).expect("built-in manifold")
}

fn ex(r: &Rational) -> String {
    rational::to_exact(r)
}

/// `ν` under the context's fault setting.
fn nu(ctx: &VerifyContext, m: &ProductManifold) -> Result<VariationalResult, CliError> {
    Ok(match ctx.fault {
        None => variational::nu(m)?,
        Some(Fault::SymbolSign) => variational::minimize_by(m, &OperatorKind::A, |g, mode| {
            operators::symbol(g, &OperatorKind::A, mode).map(|q| -q)
        })?,
    })
}

/// Multiplicity of the level-1 harmonics on factors whose first eigenvalue is `lambda`.
fn level_one_multiplicity(m: &ProductManifold, lambda: &Rational) -> u64 {
    m.factors()
        .iter()
        .filter(|f| sprime_core::spectrum::factor_eigenvalue(f, 1) == *lambda)
        .map(|f| harmonic_dimension(f.dim(), 1))
        .sum()
}

fn kernel_check(ctx: &VerifyContext, m: &ProductManifold) -> Result<Option<String>, CliError> {
    let res = nu(ctx, m)?;
    let expected = m.geometry().kernel_eigenvalue();
    let dim = level_one_multiplicity(m, &expected);
    let ok = res.value == int(0)
        && res.kernel_dim == dim
        && dim > 0
        && res.minimizers.iter().all(|j| j.total == expected);
    Ok((!ok).then(|| {
        format!(
            "{m}: nu = {}, kernel_dim = {} (expected {dim} at lambda {})",
            ex(&res.value),
            res.kernel_dim,
            ex(&expected)
        )
    }))
}

fn kernel_rows(ctx: &VerifyContext, ms: &[ProductManifold]) -> Result<Outcome, CliError> {
    for m in ms {
        if let Some(why) = kernel_check(ctx, m)? {
            return outcome(false, why);
        }
    }
    outcome(true, format!("{} manifolds", ms.len()))
}

fn s2xs3_kernel(ctx: &VerifyContext) -> Result<Outcome, CliError> {
    kernel_rows(ctx, &[unit(&[2, 3])])
}

fn spheres() -> Vec<ProductManifold> {
    (2..=6)
        .map(|n| ProductManifold::sphere(n).expect("sphere"))
        .collect()
}

fn sn_sn1() -> Vec<ProductManifold> {
    (2..=4).map(|n| unit(&[n, n + 1])).collect()
}

fn kernel_examples() -> Vec<ProductManifold> {
    let mut v = spheres();
    v.push(unit(&[2, 3]));
    v.extend(sn_sn1());
    v
}

fn sm_sm_nu(ctx: &VerifyContext) -> Result<Outcome, CliError> {
    let mut values = Vec::new();
    for d in 2..=5u32 {
        let m = unit(&[d, d]);
        let res = nu(ctx, &m)?;
        let g = m.geometry();
        let cert = &res.certificate;
        let cert_ok = cert.witness >= res.value
            && symbol_lower_bound(&g, &int(0), &cert.cutoff) == cert.witness;
        if res.value != int(i64::from(d)) || !cert_ok {
            return outcome(
                false,
                format!(
                    "{m}: nu = {}, certificate {}",
                    ex(&res.value),
                    cert.statement()
                ),
            );
        }
        values.push(ex(&res.value));
    }
    outcome(true, format!("nu = {}", values.join(", ")))
}

fn sphere_kernels(ctx: &VerifyContext) -> Result<Outcome, CliError> {
    kernel_rows(ctx, &spheres())
}

fn sn_sn1_kernels(ctx: &VerifyContext) -> Result<Outcome, CliError> {
    kernel_rows(ctx, &sn_sn1())
}

fn mu_bracket(_: &VerifyContext) -> Result<Outcome, CliError> {
    let examples = kernel_examples();
    for m in &examples {
        let g = m.geometry();
        let mu = variational::mu(m)?.value;
        let upper = -g.s_sq_over_n();
        let lower = -g.ricci_norm_sq.clone();
        let ok = lower <= mu && mu <= upper && (!g.is_einstein || mu == upper);
        if !ok {
            return outcome(
                false,
                format!(
                    "{m}: mu = {} not in [{}, {}]",
                    ex(&mu),
                    ex(&lower),
                    ex(&upper)
                ),
            );
        }
    }
    outcome(true, format!("{} manifolds", examples.len()))
}

fn unequal_cap(ctx: &VerifyContext) -> Result<Outcome, CliError> {
    let mut parts = Vec::new();
    for (a, k) in [(2i64, 2i64), (2, 3), (3, 2)] {
        let m = unit(&[a as u32, (a + k) as u32]);
        let value = nu(ctx, &m)?.value;
        let cap = int((a + k) * (k - 1) * (k - 1)).min(int(a * (k + 1) * (k + 1)));
        if value > cap {
            return outcome(false, format!("{m}: nu = {} > {}", ex(&value), ex(&cap)));
        }
        parts.push(format!("{m}: {} <= {}", ex(&value), ex(&cap)));
    }
    outcome(true, parts.join("; "))
}

fn superharmonic_optimal(_: &VerifyContext) -> Result<Outcome, CliError> {
    for n in 2..=10u32 {
        let nf = f64::from(n);
        let bound = superharmonic_bound(n, nf * (nf - 1.0), nf - 1.0);
        let lambda1 = rational::to_f64(&first_nonzero(&ProductManifold::sphere(n)?));
        let ok = bound
            .is_some_and(|b| (b - nf).abs() <= 1e-12 * nf && (b - lambda1).abs() <= 1e-12 * nf);
        if !ok {
            return outcome(
                false,
                format!("n = {n}: bound {bound:?}, lambda1 = {lambda1}"),
            );
        }
    }
    outcome(true, "n = 2..10")
}

fn no_violation(ms: &[ProductManifold]) -> Result<Option<String>, CliError> {
    for m in ms {
        if let Some(r) = bound_suite(m, None)?
            .into_iter()
            .find(|r| r.verdict == Verdict::Violated)
        {
            return Ok(Some(format!(
                "{m}: {} violated (bound {:?}, observed {})",
                r.name.id(),
                r.bound_value,
                r.observed
            )));
        }
    }
    Ok(None)
}

fn bound_suites(_: &VerifyContext) -> Result<Outcome, CliError> {
    let mut ms = kernel_examples();
    ms.extend((2..=5).map(|d| unit(&[d, d])));
    match no_violation(&ms)? {
        Some(why) => outcome(false, why),
        None => outcome(true, format!("{} manifolds", ms.len())),
    }
}

fn alpha_star(_: &VerifyContext) -> Result<Outcome, CliError> {
    let rep = variational::alpha_star_report(&unit(&[2, 2]))?;
    let ok = rep.alpha_star == ratio(1, 2)
        && rep.at_alpha_star.value == int(0)
        && &rep.nu / &rep.ricci_norm_sq == rep.alpha_star;
    outcome(
        ok,
        format!(
            "alpha* = {}, nu = {}, |r|^2 = {}, min symbol at alpha* = {}",
            ex(&rep.alpha_star),
            ex(&rep.nu),
            ex(&rep.ricci_norm_sq),
            ex(&rep.at_alpha_star.value)
        ),
    )
}

pub fn scaling_manifolds() -> Vec<ProductManifold> {
    vec![m("S2xS2"), m("S2xS3"), m("S2(1/4)xS3(2)xS1(3)")]
}

fn scaling(ctx: &VerifyContext) -> Result<Outcome, CliError> {
    for base in scaling_manifolds() {
        let nu0 = nu(ctx, &base)?.value;
        for t in [ratio(1, 4), int(1), int(9)] {
            let scaled = nu(ctx, &base.scale(&t)?)?.value;
            if &scaled * &t * &t != nu0 {
                return outcome(
                    false,
                    format!(
                        "{base} at t^2 = {}: {} vs {}",
                        ex(&t),
                        ex(&scaled),
                        ex(&nu0)
                    ),
                );
            }
        }
    }
    outcome(true, "3 manifolds x 3 scales")
}

/// `S²(t)×S^d(1)` for `t = j/8`, `j = 2..51`.
pub fn sweep_family(d: u32) -> Vec<ProductManifold> {
    (2..=51)
        .map(|j| {
            let first = SphereFactor::new(2, ratio(j, 8)).expect("positive radius");
            ProductManifold::new(vec![first, SphereFactor::unit(d).expect("sphere")])
                .expect("product")
        })
        .collect()
}

fn sweep_no_violation(_: &VerifyContext) -> Result<Outcome, CliError> {
    let ms: Vec<_> = sweep_family(2).into_iter().chain(sweep_family(3)).collect();
    let failures: Vec<Option<String>> = ms
        .par_chunks(10)
        .map(no_violation)
        .collect::<Result<_, _>>()?;
    match failures.into_iter().flatten().next() {
        Some(why) => outcome(false, why),
        None => outcome(true, format!("{} grid points", ms.len())),
    }
}

fn lichnerowicz(_: &VerifyContext) -> Result<Outcome, CliError> {
    let mut ms = spheres();
    ms.extend([unit(&[2, 2]), unit(&[2, 3]), m("S2(1/2)xS3")]);
    for m in &ms {
        let g = m.geometry();
        let lambda1 = first_nonzero(m);
        let lower = sprime_core::bounds::lichnerowicz_lower_exact(g.n, &g.ricci_lower);
        let ok = lambda1 >= lower && (m.factor_count() > 1 || lambda1 == lower);
        if !ok {
            return outcome(
                false,
                format!("{m}: lambda1 = {} vs {}", ex(&lambda1), ex(&lower)),
            );
        }
    }
    outcome(true, format!("{} manifolds", ms.len()))
}

fn gap_threshold(_: &VerifyContext) -> Result<Outcome, CliError> {
    let m = m("S2xS1(1/100)xS1(1/100)");
    let g = m.geometry();
    let nu = variational::nu(&m)?.value;
    let r = threshold_check(&g, &first_nonzero(&m), &nu);
    let suite = evaluate_suite(&SuiteInputs::compute(&m, None)?);
    let ok = r.hypothesis_ok
        && r.verdict == Verdict::Satisfied
        && suite
            .iter()
            .filter(|x| x.name == BoundName::GapThreshold)
            .all(|x| x.verdict == Verdict::Satisfied);
    outcome(
        ok,
        format!("{m}: nu = {} >= s^2/n = {}", ex(&nu), ex(&g.s_sq_over_n())),
    )
}

/// The oracle manifolds and every mode with total `≤ 8`.
pub fn oracle_modes() -> Vec<(ProductManifold, Vec<Vec<u32>>)> {
    [unit(&[2, 2]), unit(&[3])]
        .into_iter()
        .map(|m| {
            let modes = select_modes(&m, None, &int(8)).expect("enumeration");
            (m, modes)
        })
        .collect()
}

fn flat_modes() -> Vec<(usize, ProductManifold, Vec<u32>)> {
    oracle_modes()
        .into_iter()
        .flat_map(|(m, modes)| modes.into_iter().map(move |l| (m.clone(), l)))
        .enumerate()
        .map(|(i, (m, l))| (i, m, l))
        .collect()
}

fn oracle_apply(ctx: &VerifyContext) -> Result<Outcome, CliError> {
    let reports = flat_modes()
        .par_iter()
        .map(|(i, m, l)| {
            check_apply_a(m, l, &ctx.settings, &mut mode_rng(ctx.seed, *i)).map(|r| (m.label(), r))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let worst = reports
        .iter()
        .map(|(_, r)| r.max_deviation)
        .fold(0.0, f64::max);
    let count: usize = reports.iter().map(|(_, r)| r.samples).sum();
    match reports.iter().find(|(_, r)| !r.passed) {
        Some((label, r)) => outcome(
            false,
            format!(
                "{label} {:?}: deviation {:e} > {:e}",
                r.levels, r.max_deviation, r.tolerance
            ),
        ),
        None => outcome(
            true,
            format!(
                "{} modes, {count} points, max deviation {worst:.3e}",
                reports.len()
            ),
        ),
    }
}

fn identity_row(
    ctx: &VerifyContext,
    check: fn(
        &ProductManifold,
        &[u32],
        &OracleSettings,
        &Rayon,
    ) -> sprime_core::Result<sprime_core::oracle::IdentityReport>,
) -> Result<Outcome, CliError> {
    let reports = flat_modes()
        .par_iter()
        .map(|(_, m, l)| check(m, l, &ctx.settings, &Rayon).map(|r| (m.label(), r)))
        .collect::<Result<Vec<_>, _>>()?;
    let worst = reports
        .iter()
        .map(|(_, r)| r.relative_error)
        .fold(0.0, f64::max);
    match reports.iter().find(|(_, r)| !r.passed) {
        Some((label, r)) => outcome(false, format!("{label}: {}", r.diagnostic())),
        None => outcome(
            true,
            format!("{} modes, max relative error {worst:.3e}", reports.len()),
        ),
    }
}

fn oracle_lstar(ctx: &VerifyContext) -> Result<Outcome, CliError> {
    identity_row(ctx, verify_lstar_identity::<Rayon>)
}

fn oracle_bochner(ctx: &VerifyContext) -> Result<Outcome, CliError> {
    identity_row(ctx, verify_bochner::<Rayon>)
}

/// Fixed evaluation point, independent of the seed, so the order estimate
/// is a property of the stencils alone.
const FD_ORDER_SEED: u64 = 9;

fn fd_order(_: &VerifyContext) -> Result<Outcome, CliError> {
    let mut slopes = Vec::new();
    for (m, levels) in [(unit(&[2, 2]), vec![1, 2]), (unit(&[3]), vec![2])] {
        let phi = SeparatedEigenfunction::generic(&m, &levels)?;
        let p = Embedding::new(&m).random_point(&mut mode_rng(FD_ORDER_SEED, 0));
        for r in convergence_orders(&m, &phi, &p)? {
            if !order_ok(&r) {
                return outcome(false, format!("{m} {}: slope {:.3}", r.operator, r.slope));
            }
            slopes.push(r.slope);
        }
    }
    let (lo, hi) = slopes
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &s| {
            (a.min(s), b.max(s))
        });
    outcome(
        true,
        format!("{} slopes in [{lo:.3}, {hi:.3}]", slopes.len()),
    )
}

pub fn run_rows(ctx: &VerifyContext) -> Vec<Row> {
    ROWS.par_iter()
        .map(|(id, description, check)| {
            let (passed, detail) = match check(ctx) {
                Ok(o) => (o.passed, o.detail),
                Err(e) => (false, format!("error: {e}")),
            };
            Row {
                id,
                description,
                passed,
                detail,
            }
        })
        .collect()
}

pub fn verify(ctx: &VerifyContext) -> (Report, Option<Row>) {
    let rows = run_rows(ctx);
    let first_failure = rows.iter().find(|r| !r.passed).cloned();
    let mut t = Table::new(["status", "id", "description", "detail"]);
    for r in &rows {
        t.push([
            if r.passed { "PASS" } else { "FAIL" },
            r.id,
            r.description,
            r.detail.as_str(),
        ]);
    }
    let report = Report {
        command: "verify",
        result: json!({
            "rows": rows.iter().map(|r| json!({
                "id": r.id,
                "description": r.description,
                "passed": r.passed,
                "detail": r.detail,
            })).collect::<Vec<_>>(),
            "passed": first_failure.is_none(),
            "first_failure": first_failure.as_ref().map(|r| r.id),
        }),
        table: t,
    };
    (report, first_failure)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(fault: Option<Fault>) -> VerifyContext {
        VerifyContext {
            settings: OracleSettings::default(),
            seed: 0,
            fault,
        }
    }

    #[test]
    fn row_ids_are_unique() {
        let mut ids: Vec<_> = ROWS.iter().map(|r| r.0).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), ROWS.len());
    }

    #[test]
    fn exact_rows_pass() {
        for (id, _, check) in ROWS
            .iter()
            .filter(|r| !r.0.starts_with("oracle") && r.0 != "fd_order")
        {
            let o = check(&ctx(None)).unwrap();
            assert!(o.passed, "{id}: {}", o.detail);
        }
    }

    #[test]
    fn fault_breaks_the_first_row() {
        assert!(!s2xs3_kernel(&ctx(Some(Fault::SymbolSign)))
            .map(|o| o.passed)
            .unwrap_or(false));
    }

    #[test]
    fn sweep_family_has_fifty_points() {
        assert_eq!(sweep_family(2).len(), 50);
        assert_eq!(sweep_family(3)[6].label(), "S2(1)xS3(1)");
    }

    #[test]
    fn oracle_mode_set() {
        let modes = oracle_modes();
        assert_eq!(modes[0].1.len(), 8);
        assert_eq!(modes[1].1, vec![vec![0], vec![1], vec![2]]);
    }
}
