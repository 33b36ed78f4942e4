//! Manifold descriptors.
//!
//! Inline grammar (whitespace ignored):
//!
//! ```text
//! product := factor ("x" factor)*
//! factor  := "S" ["^"] dim ["(" radius_sq ")"]
//! radius_sq := rational | "t"          ("t" only in sweep templates)
//! rational  := int | int "/" int | decimal
//! ```
//!
//! `S2(1/4)xS3` is `S²` of squared radius `1/4` times a unit `S³`. The
//! parenthesized value is always the squared radius.
//!
//! File form (TOML):
//!
//! ```toml
//! [[factor]]
//! dim = 2
//! radius_sq = "1/4"   # optional, default "1"
//! ```

use std::path::Path;

use serde::Deserialize;
use sprime_core::rational::{self, Rational};
use sprime_core::{ProductManifold, SphereFactor};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Radius {
    Fixed(Rational),
    Param,
}

/// A product whose squared radii may reference the sweep parameter `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Template {
    pub factors: Vec<(u32, Radius)>,
}

impl Template {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(CliError::Usage("empty manifold descriptor".into()));
        }
        let factors = s
            .split(['x', 'X', '×'])
            .map(|f| parse_factor(f, text))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { factors })
    }

    pub fn has_param(&self) -> bool {
        self.factors.iter().any(|(_, r)| *r == Radius::Param)
    }

    /// Substitutes `t` and builds the manifold.
    pub fn instantiate(&self, t: Option<&Rational>) -> Result<ProductManifold, CliError> {
        let factors = self
            .factors
            .iter()
            .map(|(d, r)| {
                let rsq = match (r, t) {
                    (Radius::Fixed(v), _) => v.clone(),
                    (Radius::Param, Some(t)) => t.clone(),
                    (Radius::Param, None) => {
                        return Err(CliError::Usage(
                            "descriptor uses the sweep parameter t outside a sweep".into(),
                        ))
                    }
                };
                SphereFactor::new(*d, rsq).map_err(CliError::from)
            })
            .collect::<Result<Vec<_>, _>>()?;
        ProductManifold::new(factors).map_err(CliError::from)
    }
}

fn parse_factor(f: &str, whole: &str) -> Result<(u32, Radius), CliError> {
    let bad = |why: &str| CliError::Usage(format!("bad factor {f:?} in {whole:?}: {why}"));
    let rest = f
        .strip_prefix('S')
        .or_else(|| f.strip_prefix('s'))
        .ok_or_else(|| bad("expected S<dim>"))?;
    let rest = rest.strip_prefix('^').unwrap_or(rest);
    let (dim_text, radius_text) = match rest.find('(') {
        Some(i) => {
            let inner = rest[i + 1..]
                .strip_suffix(')')
                .ok_or_else(|| bad("missing ')'"))?;
            (&rest[..i], Some(inner))
        }
        None => (rest, None),
    };
    let dim: u32 = dim_text
        .parse()
        .map_err(|_| bad("dimension is not an integer"))?;
    let radius = match radius_text {
        None => Radius::Fixed(rational::one()),
        Some("t") => Radius::Param,
        Some(r) => Radius::Fixed(rational::parse(r).map_err(|e| bad(&e.to_string()))?),
    };
    Ok((dim, radius))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileDescriptor {
    factor: Vec<FileFactor>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileFactor {
    dim: u32,
    #[serde(default)]
    radius_sq: Option<RationalText>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RationalText {
    Int(i64),
    Text(String),
}

/// Parses the TOML file form.
pub fn parse_file_descriptor(text: &str) -> Result<ProductManifold, CliError> {
    let d: FileDescriptor =
        toml::from_str(text).map_err(|e| CliError::Usage(format!("manifold file: {e}")))?;
    let factors = d
        .factor
        .into_iter()
        .map(|f| {
            let rsq = match f.radius_sq {
                None => rational::one(),
                Some(RationalText::Int(v)) => rational::int(v),
                Some(RationalText::Text(t)) => rational::parse(&t).map_err(CliError::from)?,
            };
            SphereFactor::new(f.dim, rsq).map_err(CliError::from)
        })
        .collect::<Result<Vec<_>, _>>()?;
    ProductManifold::new(factors).map_err(CliError::from)
}

/// Inline descriptor, or a path to a `.toml` descriptor file.
pub fn load_manifold(arg: &str) -> Result<ProductManifold, CliError> {
    let path = Path::new(arg);
    if arg.ends_with(".toml") || path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {arg}: {e}")))?;
        return parse_file_descriptor(&text);
    }
    Template::parse(arg)?.instantiate(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use sprime_core::rational::{int, ratio};

    #[test]
    fn inline_forms() {
        let m = load_manifold("S2(1/4)xS3").unwrap();
        assert_eq!(m.label(), "S2(1/4)xS3(1)");
        let m = load_manifold(" S^2 x S^2 (0.5) ").unwrap();
        assert_eq!(m.factors()[1].radius_sq(), &ratio(1, 2));
        assert_eq!(load_manifold("S1xS1xS2(9)").unwrap().dim(), 4);
        assert_eq!(load_manifold(&m.label()).unwrap(), m);
    }

    #[test]
    fn inline_errors() {
        for bad in [
            "", "S", "P2", "S2(1/4", "S2(0)", "S2(-1)", "S1", "S0xS2", "S2(a)", "S2(t)",
        ] {
            assert!(load_manifold(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn templates() {
        let t = Template::parse("S2(t)xS3(1)").unwrap();
        assert!(t.has_param());
        let m = t.instantiate(Some(&int(2))).unwrap();
        assert_eq!(m.label(), "S2(2)xS3(1)");
        assert!(t.instantiate(Some(&int(0))).is_err());
    }

    #[test]
    fn file_form() {
        let m = parse_file_descriptor(
            "[[factor]]\ndim = 2\nradius_sq = \"1/4\"\n\n[[factor]]\ndim = 3\n\n[[factor]]\ndim = 1\nradius_sq = 9\n",
        )
        .unwrap();
        assert_eq!(m.label(), "S2(1/4)xS3(1)xS1(9)");
        assert!(parse_file_descriptor("[[factor]]\ndim = 2\ncolor = 1\n").is_err());
        assert!(parse_file_descriptor("factor = []\n").is_err());
    }
}
