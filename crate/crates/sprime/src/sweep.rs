//! One-parameter families over a rational grid of squared radii.
//!
//! Grid forms: `a,b,c` (explicit list) or `start:stop:count` (count points,
//! endpoints included, exact rational spacing). An empty string is the empty
//! grid.
//!
//! CSV columns per grid point: `t`, `t_value`, `manifold`, `nu`, `nu_value`,
//! `kernel_dim`, `lambda1`, `lambda1_value`, `violated`, then one verdict
//! column per bound id.

use rayon::prelude::*;
use serde_json::json;
use sprime_core::bounds::{bound_suite, Verdict};
use sprime_core::rational::{self, Rational};
use sprime_core::spectrum::first_nonzero;
use sprime_core::variational;

use crate::commands::bound_json;
use crate::descriptor::Template;
use crate::error::CliError;
use crate::report::{decimal, exact, mode_json, Report, Table};

pub fn parse_grid(text: &str) -> Result<Vec<Rational>, CliError> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    let bad = |why: String| CliError::Usage(format!("invalid grid {text:?}: {why}"));
    let parse = |s: &str| rational::parse(s.trim()).map_err(|e| bad(e.to_string()));
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [single] => single.split(',').map(parse).collect(),
        [start, stop, count] => {
            let (start, stop) = (parse(start)?, parse(stop)?);
            let count: i64 = count
                .trim()
                .parse()
                .map_err(|_| bad("count is not a non-negative integer".into()))?;
            match count {
                c if c < 0 => Err(bad("count is negative".into())),
                0 => Ok(Vec::new()),
                1 => Ok(vec![start]),
                c => {
                    let step = (&stop - &start) / rational::int(c - 1);
                    Ok((0..c).map(|i| &start + &step * rational::int(i)).collect())
                }
            }
        }
        _ => Err(bad("expected a,b,... or start:stop:count".into())),
    }
}

/// `None` for the empty grid, which produces no output at all.
pub fn sweep(template: &str, grid: &str) -> Result<Option<(Report, bool)>, CliError> {
    let template = Template::parse(template)?;
    if !template.has_param() {
        return Err(CliError::Usage(
            "sweep template must contain a t radius".into(),
        ));
    }
    let points = parse_grid(grid)?;
    if points.is_empty() {
        return Ok(None);
    }
    let manifolds = points
        .iter()
        .map(|t| template.instantiate(Some(t)))
        .collect::<Result<Vec<_>, _>>()?;
    let rows = manifolds
        .par_iter()
        .map(|m| -> Result<_, CliError> {
            let res = variational::nu(m)?;
            Ok((res, first_nonzero(m), bound_suite(m, None)?))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let bound_ids: Vec<&str> = rows[0].2.iter().map(|r| r.name.id()).collect();
    let mut t = Table::new(
        [
            "t",
            "t_value",
            "manifold",
            "nu",
            "nu_value",
            "kernel_dim",
            "lambda1",
            "lambda1_value",
            "violated",
        ]
        .into_iter()
        .chain(bound_ids.iter().copied()),
    );
    let mut json_rows = Vec::new();
    let mut any_violated = false;
    for ((tp, m), (res, l1, reports)) in points.iter().zip(&manifolds).zip(&rows) {
        let violated = reports
            .iter()
            .filter(|r| r.verdict == Verdict::Violated)
            .count();
        any_violated |= violated > 0;
        t.push(
            [
                rational::to_exact(tp),
                decimal(tp),
                m.label(),
                rational::to_exact(&res.value),
                decimal(&res.value),
                res.kernel_dim.to_string(),
                rational::to_exact(l1),
                decimal(l1),
                violated.to_string(),
            ]
            .into_iter()
            .chain(reports.iter().map(|r| r.verdict.id().to_string())),
        );
        json_rows.push(json!({
            "t": exact(tp),
            "manifold": m.label(),
            "nu": exact(&res.value),
            "kernel_dim": res.kernel_dim,
            "minimizers": res.minimizers.iter().map(mode_json).collect::<Vec<_>>(),
            "lambda1": exact(l1),
            "bounds": reports.iter().map(bound_json).collect::<Vec<_>>(),
            "violated": violated,
        }));
    }
    let report = Report {
        command: "sweep",
        result: json!({ "points": json_rows, "violated": any_violated }),
        table: t,
    };
    Ok(Some((report, !any_violated)))
}
