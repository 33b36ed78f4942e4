//! Exact subcommands: describe, spectrum, nu, mu, alpha-star, kernel, bounds.

use serde_json::{json, Value};
use sprime_core::bounds::{bound_suite, BoundReport, Direction, SuiteInputs, Verdict};
use sprime_core::operators::OperatorKind;
use sprime_core::rational::{self, Rational};
use sprime_core::spectrum::{enumerate_joint, first_nonzero};
use sprime_core::variational::{self, VariationalResult};
use sprime_core::ProductManifold;

use crate::error::CliError;
use crate::report::{
    components_text, decimal, exact, levels_text, mode_json, opt_f64, Report, Table,
};

pub const DEFAULT_SPECTRUM_CUTOFF: i64 = 10;

pub fn describe(m: &ProductManifold) -> Report {
    let g = m.geometry();
    let lambda1 = first_nonzero(m);
    let kernel_eig = g.kernel_eigenvalue();
    let result = json!({
        "manifold": m.label(),
        "dim": g.n,
        "factors": m.factors().iter().map(|f| json!({
            "dim": f.dim(),
            "radius_sq": exact(f.radius_sq()),
            "ricci": exact(&f.ricci()),
        })).collect::<Vec<_>>(),
        "scalar_curvature": exact(&g.s),
        "ricci_norm_sq": exact(&g.ricci_norm_sq),
        "ricci_lower": exact(&g.ricci_lower),
        "traceless_ricci_norm_sq": exact(&g.z_norm_sq),
        "einstein": g.is_einstein,
        "lambda1": exact(&lambda1),
        "kernel_eigenvalue": exact(&kernel_eig),
    });
    let mut t = Table::new(["quantity", "exact", "value"]);
    t.push(["manifold".into(), m.label(), String::new()]);
    t.push(["dim".into(), g.n.to_string(), String::new()]);
    for (i, f) in m.factors().iter().enumerate() {
        t.push([format!("factor{i}.dim"), f.dim().to_string(), String::new()]);
        t.push(row(&format!("factor{i}.radius_sq"), f.radius_sq()));
        t.push(row(&format!("factor{i}.ricci"), &f.ricci()));
    }
    t.push(row("scalar_curvature", &g.s));
    t.push(row("ricci_norm_sq", &g.ricci_norm_sq));
    t.push(row("ricci_lower", &g.ricci_lower));
    t.push(row("traceless_ricci_norm_sq", &g.z_norm_sq));
    t.push(["einstein".into(), g.is_einstein.to_string(), String::new()]);
    t.push(row("lambda1", &lambda1));
    t.push(row("kernel_eigenvalue", &kernel_eig));
    Report {
        command: "describe",
        result,
        table: t,
    }
}

fn row(name: &str, r: &Rational) -> [String; 3] {
    [name.into(), rational::to_exact(r), decimal(r)]
}

/// CSV columns: `levels` and `components` are `;`-joined per factor.
pub fn spectrum(m: &ProductManifold, cutoff: &Rational) -> Report {
    let modes: Vec<_> = enumerate_joint(m, cutoff).collect();
    let mut t = Table::new([
        "levels",
        "components",
        "total",
        "total_value",
        "multiplicity",
    ]);
    for j in &modes {
        t.push([
            levels_text(&j.levels),
            components_text(&j.components),
            rational::to_exact(&j.total),
            decimal(&j.total),
            j.multiplicity.to_string(),
        ]);
    }
    Report {
        command: "spectrum",
        result: json!({
            "manifold": m.label(),
            "cutoff": exact(cutoff),
            "modes": modes.iter().map(mode_json).collect::<Vec<_>>(),
        }),
        table: t,
    }
}

fn variational_json(m: &ProductManifold, res: &VariationalResult) -> Value {
    json!({
        "manifold": m.label(),
        "operator": res.kind.name(),
        "alpha": exact(&res.kind.alpha_value()),
        "value": exact(&res.value),
        "kernel_dim": res.kernel_dim,
        "minimizers": res.minimizers.iter().map(mode_json).collect::<Vec<_>>(),
        "certificate": {
            "cutoff": exact(&res.certificate.cutoff),
            "witness": exact(&res.certificate.witness),
            "modes_examined": res.certificate.modes_examined,
            "statement": res.certificate.statement(),
        },
    })
}

fn variational_table(res: &VariationalResult) -> Table {
    let mut t = Table::new(["quantity", "exact", "value"]);
    t.push(["operator".into(), res.kind.name(), String::new()]);
    t.push(row("minimum", &res.value));
    t.push([
        "kernel_dim".into(),
        res.kernel_dim.to_string(),
        String::new(),
    ]);
    for j in &res.minimizers {
        t.push([
            "minimizer".into(),
            format!(
                "levels {} total {}",
                levels_text(&j.levels),
                rational::to_exact(&j.total)
            ),
            format!("multiplicity {}", j.multiplicity),
        ]);
    }
    t.push(row("certificate.cutoff", &res.certificate.cutoff));
    t.push(row("certificate.witness", &res.certificate.witness));
    t.push([
        "certificate.modes_examined".into(),
        res.certificate.modes_examined.to_string(),
        String::new(),
    ]);
    t
}

fn variational_report(
    command: &'static str,
    m: &ProductManifold,
    res: &VariationalResult,
) -> Report {
    Report {
        command,
        result: variational_json(m, res),
        table: variational_table(res),
    }
}

/// `ν`, or the minimum of the `𝒜_α` symbol when `alpha` is given.
pub fn nu(m: &ProductManifold, alpha: Option<&Rational>) -> Result<Report, CliError> {
    let res = match alpha {
        None => variational::nu(m)?,
        Some(a) => variational::minimize_symbol(m, &OperatorKind::alpha(a.clone())?)?,
    };
    Ok(variational_report("nu", m, &res))
}

pub fn mu(m: &ProductManifold) -> Result<Report, CliError> {
    Ok(variational_report("mu", m, &variational::mu(m)?))
}

pub fn alpha_star(m: &ProductManifold) -> Result<Report, CliError> {
    let rep = variational::alpha_star_report(m)?;
    let ratio = &rep.nu / &rep.ricci_norm_sq;
    let equality = ratio == rep.alpha_star;
    let min_at = &rep.at_alpha_star.value;
    let mut t = Table::new(["quantity", "exact", "value"]);
    t.push(row("alpha_star", &rep.alpha_star));
    t.push(row("nu", &rep.nu));
    t.push(row("ricci_norm_sq", &rep.ricci_norm_sq));
    t.push(row("nu_over_ricci_norm_sq", &ratio));
    t.push([
        "ratio_equals_alpha_star".into(),
        equality.to_string(),
        String::new(),
    ]);
    t.push(row("min_symbol_at_alpha_star", min_at));
    t.push([
        "kernel_dim_at_alpha_star".into(),
        rep.at_alpha_star.kernel_dim.to_string(),
        String::new(),
    ]);
    Ok(Report {
        command: "alpha-star",
        result: json!({
            "manifold": m.label(),
            "alpha_star": exact(&rep.alpha_star),
            "nu": exact(&rep.nu),
            "ricci_norm_sq": exact(&rep.ricci_norm_sq),
            "nu_over_ricci_norm_sq": exact(&ratio),
            "ratio_equals_alpha_star": equality,
            "at_alpha_star": variational_json(m, &rep.at_alpha_star),
        }),
        table: t,
    })
}

pub fn kernel(m: &ProductManifold) -> Result<Report, CliError> {
    let rep = variational::kernel_report(m)?;
    let g = m.geometry();
    let mut t = Table::new(["quantity", "exact", "value"]);
    t.push(row("nu", &rep.nu));
    t.push([
        "kernel_dim".into(),
        rep.kernel_dim.to_string(),
        String::new(),
    ]);
    t.push(row("expected_laplace_eigenvalue", &g.kernel_eigenvalue()));
    if let Some(l) = &rep.laplace_eigenvalue {
        t.push(row("laplace_eigenvalue", l));
    }
    for j in &rep.kernel_modes {
        t.push([
            "kernel_mode".into(),
            format!(
                "levels {} total {}",
                levels_text(&j.levels),
                rational::to_exact(&j.total)
            ),
            format!("multiplicity {}", j.multiplicity),
        ]);
    }
    Ok(Report {
        command: "kernel",
        result: json!({
            "manifold": m.label(),
            "nu": exact(&rep.nu),
            "kernel_dim": rep.kernel_dim,
            "expected_laplace_eigenvalue": exact(&g.kernel_eigenvalue()),
            "laplace_eigenvalue": rep.laplace_eigenvalue.as_ref().map(exact),
            "kernel_modes": rep.kernel_modes.iter().map(mode_json).collect::<Vec<_>>(),
        }),
        table: t,
    })
}

pub fn bound_json(r: &BoundReport) -> Value {
    json!({
        "name": r.name.id(),
        "direction": direction_id(r.name.direction()),
        "hypothesis_ok": r.hypothesis_ok,
        "reason": r.reason,
        "bound": r.bound_value,
        "observed": r.observed,
        "verdict": r.verdict.id(),
        "slack": r.slack,
    })
}

fn direction_id(d: Direction) -> &'static str {
    match d {
        Direction::Upper => "upper",
        Direction::Lower => "lower",
    }
}

pub const BOUND_COLUMNS: [&str; 7] = [
    "name",
    "direction",
    "hypothesis_ok",
    "bound",
    "observed",
    "verdict",
    "slack",
];

pub fn bound_row(r: &BoundReport) -> [String; 7] {
    [
        r.name.id().into(),
        direction_id(r.name.direction()).into(),
        r.hypothesis_ok.to_string(),
        opt_f64(r.bound_value),
        format!("{}", r.observed),
        r.verdict.id().into(),
        opt_f64(r.slack),
    ]
}

/// The bound suite; a violated bound is a verification failure.
pub fn bounds(m: &ProductManifold, k: Option<&Rational>) -> Result<(Report, bool), CliError> {
    let inputs = SuiteInputs::compute(m, k)?;
    let reports = bound_suite(m, k)?;
    let mut t = Table::new(BOUND_COLUMNS.iter().copied().chain(["reason"]));
    for r in &reports {
        t.push(bound_row(r).into_iter().chain([r.reason.clone()]));
    }
    let violated = reports.iter().any(|r| r.verdict == Verdict::Violated);
    let report = Report {
        command: "bounds",
        result: json!({
            "manifold": m.label(),
            "inputs": {
                "lambda1": exact(&inputs.lambda1),
                "nu": exact(&inputs.nu),
                "k": exact(&inputs.k),
                "scalar_curvature": exact(&inputs.geom.s),
                "ricci_norm_sq": exact(&inputs.geom.ricci_norm_sq),
                "superharmonic_witness": inputs.witness.as_ref().map(|w| mode_json(&w.mode)),
            },
            "reports": reports.iter().map(bound_json).collect::<Vec<_>>(),
            "violated": violated,
        }),
        table: t,
    };
    Ok((report, !violated))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descriptor::load_manifold;

    #[test]
    fn spectrum_rows_are_exact() {
        let m = load_manifold("S2xS2").unwrap();
        let r = spectrum(&m, &rational::int(2));
        assert_eq!(r.table.rows.len(), 3);
        assert_eq!(r.table.rows[1][..3], ["0;1", "0/1;2/1", "2/1"]);
        assert_eq!(r.table.rows[1][4], "3");
    }

    #[test]
    fn nu_report_carries_certificate() {
        let m = load_manifold("S2xS2").unwrap();
        let r = nu(&m, None).unwrap();
        assert_eq!(r.result["value"]["exact"], "2/1");
        assert!(r.result["certificate"]["statement"]
            .as_str()
            .unwrap()
            .contains("symbol"));
        let r = nu(&m, Some(&rational::ratio(1, 2))).unwrap();
        assert_eq!(r.result["value"]["exact"], "0/1");
    }

    #[test]
    fn alpha_star_equality_reported() {
        let r = alpha_star(&load_manifold("S2xS2").unwrap()).unwrap();
        assert_eq!(r.result["alpha_star"]["exact"], "1/2");
        assert_eq!(r.result["ratio_equals_alpha_star"], true);
        assert_eq!(r.result["at_alpha_star"]["value"]["exact"], "0/1");
    }

    #[test]
    fn kernel_of_s2xs3() {
        let r = kernel(&load_manifold("S2xS3").unwrap()).unwrap();
        assert_eq!(r.result["kernel_dim"], 3);
        assert_eq!(r.result["laplace_eigenvalue"]["exact"], "2/1");
    }

    #[test]
    fn bounds_pass_on_round_sphere() {
        let (r, ok) = bounds(&load_manifold("S3").unwrap(), None).unwrap();
        assert!(ok);
        assert_eq!(r.table.rows.len(), 7);
    }
}
