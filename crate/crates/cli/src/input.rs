//! File formats read by the command line.

use std::path::Path;

use derbra::error::{Error, Result};
use derbra::gla::{StructureGLA, TermJson};
use derbra::graded::Elem;
use derbra::polygeo::{self, Dims, ElementJson, Form, Mv};
use derbra::vdata::VDataJson;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::arg(format!("cannot read {}: {}", path.display(), e)))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {}", path.display(), e)))
}

/// A V-data description, tagged by `kind`.
#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum VDataFile {
    /// Structure constants, an abelian subspace, projection and `Δ`.
    Structure(VDataJson),
    /// Multivector fields on a vector bundle with a Poisson bivector.
    Coisotropic { pi: ElementJson },
    /// The twisted Poisson algebra of forms and multivector fields on `ℝ^m`.
    TwistedPoisson { dims: usize },
}

/// An element `(shift, abelian)`; for the twisted Poisson algebra the two
/// parts are the form and the multivector field.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementFile<T> {
    #[serde(alias = "form")]
    pub shift: Option<T>,
    #[serde(alias = "multivector")]
    pub abelian: Option<T>,
}

pub fn structure_terms(g: &StructureGLA, terms: &Option<Vec<TermJson>>) -> Result<Elem<usize>> {
    derbra::vdata::parse_terms(g, terms.as_deref().unwrap_or(&[]))
}

pub fn structure_json(g: &StructureGLA, e: &Elem<usize>) -> Value {
    Value::Array(
        e.iter()
            .map(|(k, c)| {
                json!({
                    "coef_num": c.numer().to_string(),
                    "coef_den": c.denom().to_string(),
                    "basis": g.names()[*k],
                })
            })
            .collect(),
    )
}

pub fn structure_text(g: &StructureGLA, e: &Elem<usize>) -> String {
    if e.is_zero() {
        return "0".into();
    }
    let parts: Vec<String> = e.iter().map(|(k, c)| format!("{}*{}", c, g.names()[*k])).collect();
    parts.join(" + ")
}

/// Parse an element literal over `dims`; a missing literal is zero.
pub fn geometric(dims: &Dims, lit: &Option<ElementJson>) -> Result<Mv> {
    match lit {
        None => Ok(Mv::zero()),
        Some(l) if l.terms.is_empty() => Ok(Mv::zero()),
        Some(l) => {
            if l.dims != *dims {
                return Err(Error::Parse(format!("element over {:?}, expected {:?}", l.dims, dims)));
            }
            l.parse()
        }
    }
}

pub fn geometric_json(dims: &Dims, u: &Mv) -> Value {
    serde_json::to_value(ElementJson::from_elem(dims, u, None)).expect("serializable")
}

/// Data at a point of the twisted Poisson algebra: `(H, π)` and a gauge
/// parameter `(B, X)`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointFile {
    pub dims: usize,
    #[serde(default)]
    pub h: Option<ElementJson>,
    #[serde(default)]
    pub pi: Option<ElementJson>,
    #[serde(default)]
    pub b: Option<ElementJson>,
    #[serde(default)]
    pub x: Option<ElementJson>,
}

pub struct Point {
    pub dims: Dims,
    pub h: Form,
    pub pi: Mv,
    pub b: Form,
    pub x: Mv,
}

impl PointFile {
    pub fn parse(&self) -> Result<Point> {
        let dims = Dims::plain(self.dims);
        let arity = |u: &Mv, want: usize, what: &str| -> Result<()> {
            match polygeo::arity(u) {
                Some(a) if a as usize != want => Err(Error::arg(format!("{} must have degree {}", what, want))),
                _ => Ok(()),
            }
        };
        let p = Point {
            dims,
            h: geometric(&dims, &self.h)?,
            pi: geometric(&dims, &self.pi)?,
            b: geometric(&dims, &self.b)?,
            x: geometric(&dims, &self.x)?,
        };
        arity(&p.h, 3, "h")?;
        arity(&p.pi, 2, "pi")?;
        arity(&p.b, 2, "b")?;
        arity(&p.x, 1, "x")?;
        Ok(p)
    }
}

pub fn parse_rational(s: &str) -> Result<derbra::graded::Scalar> {
    polygeo::parse_coef(&Value::String(s.to_string()))
}
