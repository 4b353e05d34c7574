//! Graded Lie algebras: the trait every backend implements, and finite
//! dimensional algebras given by structure constants.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded::{sign_scalar, BasisKey, Elem, Homogeneity, Scalar};
use crate::linalg::span_basis;

/// A graded Lie algebra with degree-0 bracket, graded antisymmetry and the
/// graded Leibniz rule.
pub trait GradedLieAlgebra: Send + Sync {
    type Key: BasisKey;

    fn degree(&self, key: &Self::Key) -> i64;

    fn bracket(&self, x: &Elem<Self::Key>, y: &Elem<Self::Key>) -> Elem<Self::Key>;

    fn homogeneity(&self, x: &Elem<Self::Key>) -> Homogeneity {
        x.homogeneity(|k| self.degree(k))
    }

    /// `[..[[x, a_1], a_2], .., a_n]`
    fn nested_bracket(&self, x: &Elem<Self::Key>, args: &[Elem<Self::Key>]) -> Elem<Self::Key> {
        let mut acc = x.clone();
        for a in args {
            if acc.is_zero() {
                break;
            }
            acc = self.bracket(&acc, a);
        }
        acc
    }
}

/// Residual of the graded Jacobi identity
/// `[a,[b,c]] - [[a,b],c] - (-1)^{|a||b|}[b,[a,c]]` for homogeneous `a, b`.
pub fn jacobi_residual<L: GradedLieAlgebra>(
    lie: &L,
    a: &Elem<L::Key>,
    b: &Elem<L::Key>,
    c: &Elem<L::Key>,
) -> Elem<L::Key> {
    let da = match lie.homogeneity(a) {
        Homogeneity::Homogeneous(d) => d,
        _ => 0,
    };
    let db = match lie.homogeneity(b) {
        Homogeneity::Homogeneous(d) => d,
        _ => 0,
    };
    let mut r = lie.bracket(a, &lie.bracket(b, c));
    r -= &lie.bracket(&lie.bracket(a, b), c);
    r.add_scaled(&lie.bracket(b, &lie.bracket(a, c)), &-sign_scalar(da * db));
    r
}

/// Residual of graded antisymmetry `[a,b] + (-1)^{|a||b|}[b,a]`.
pub fn antisymmetry_residual<L: GradedLieAlgebra>(
    lie: &L,
    a: &Elem<L::Key>,
    b: &Elem<L::Key>,
) -> Elem<L::Key> {
    let da = match lie.homogeneity(a) {
        Homogeneity::Homogeneous(d) => d,
        _ => 0,
    };
    let db = match lie.homogeneity(b) {
        Homogeneity::Homogeneous(d) => d,
        _ => 0,
    };
    let mut r = lie.bracket(a, b);
    r.add_scaled(&lie.bracket(b, a), &sign_scalar(da * db));
    r
}

/// Finite-dimensional graded Lie algebra given by structure constants on a
/// named basis. Entries are looked up as given; a missing `(i, j)` entry is
/// derived from `(j, i)` by graded antisymmetry, and pairs listed in neither
/// order bracket to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureGLA {
    names: Vec<String>,
    degrees: Vec<i64>,
    table: BTreeMap<(usize, usize), Elem<usize>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GlaViolation {
    Degree {
        left: String,
        right: String,
        result: Elem<usize>,
    },
    Antisymmetry {
        left: String,
        right: String,
        residual: Elem<usize>,
    },
    Jacobi {
        a: String,
        b: String,
        c: String,
        residual: Elem<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct GlaReport {
    pub violations: Vec<GlaViolation>,
}

impl GlaReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl StructureGLA {
    pub fn new(basis: Vec<(String, i64)>) -> Self {
        let (names, degrees) = basis.into_iter().unzip();
        StructureGLA {
            names,
            degrees,
            table: BTreeMap::new(),
        }
    }

    /// Set `[b_i, b_j]`. Entries with a zero result are still recorded so
    /// that explicit zeros take part in the antisymmetry check.
    pub fn set_bracket(&mut self, i: usize, j: usize, result: Elem<usize>) -> Result<()> {
        let n = self.dim();
        if i >= n || j >= n || result.keys().any(|k| *k >= n) {
            return Err(Error::arg(format!("bracket entry ({}, {}) outside basis", i, j)));
        }
        self.table.insert((i, j), result);
        Ok(())
    }

    pub fn with_bracket(mut self, i: usize, j: usize, result: Elem<usize>) -> Self {
        self.set_bracket(i, j, result).expect("valid bracket entry");
        self
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn elem(&self, name: &str) -> Elem<usize> {
        Elem::basis(self.index_of(name).unwrap_or_else(|| panic!("no basis element {}", name)))
    }

    pub fn basis_elems(&self) -> Vec<Elem<usize>> {
        (0..self.dim()).map(Elem::basis).collect()
    }

    pub fn basis_of_degree(&self, d: i64) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degrees[i] == d).collect()
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> Elem<usize> {
        if let Some(r) = self.table.get(&(i, j)) {
            return r.clone();
        }
        if let Some(r) = self.table.get(&(j, i)) {
            return r.scaled(&-sign_scalar(self.degrees[i] * self.degrees[j]));
        }
        Elem::zero()
    }

    fn check_member(&self, x: &Elem<usize>) -> Result<()> {
        if x.keys().any(|k| *k >= self.dim()) {
            return Err(Error::arg("element does not belong to this algebra"));
        }
        Ok(())
    }

    pub fn try_bracket(&self, x: &Elem<usize>, y: &Elem<usize>) -> Result<Elem<usize>> {
        self.check_member(x)?;
        self.check_member(y)?;
        Ok(self.bracket(x, y))
    }

    /// Checks degree additivity, antisymmetry and Jacobi on all basis
    /// pairs and triples.
    pub fn verify(&self) -> GlaReport {
        let mut report = GlaReport::default();
        let n = self.dim();
        for (&(i, j), r) in &self.table {
            let d = self.degrees[i] + self.degrees[j];
            if r.keys().any(|k| self.degrees[*k] != d) {
                report.violations.push(GlaViolation::Degree {
                    left: self.names[i].clone(),
                    right: self.names[j].clone(),
                    result: r.clone(),
                });
            }
        }
        for i in 0..n {
            for j in i..n {
                let raw = |a: usize, b: usize| {
                    self.table
                        .get(&(a, b))
                        .cloned()
                        .or_else(|| {
                            self.table.get(&(b, a)).map(|r| {
                                r.scaled(&-sign_scalar(self.degrees[a] * self.degrees[b]))
                            })
                        })
                        .unwrap_or_default()
                };
                let mut res = raw(i, j);
                res.add_scaled(&raw(j, i), &sign_scalar(self.degrees[i] * self.degrees[j]));
                if !res.is_zero() {
                    report.violations.push(GlaViolation::Antisymmetry {
                        left: self.names[j].clone(),
                        right: self.names[i].clone(),
                        residual: res,
                    });
                }
            }
        }
        let basis = self.basis_elems();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let r = jacobi_residual(self, &basis[a], &basis[b], &basis[c]);
                    if !r.is_zero() {
                        report.violations.push(GlaViolation::Jacobi {
                            a: self.names[a].clone(),
                            b: self.names[b].clone(),
                            c: self.names[c].clone(),
                            residual: r,
                        });
                    }
                }
            }
        }
        report
    }

    /// `D = [delta, ·]` as a basis-indexed linear map.
    pub fn adjoint(&self, delta: &Elem<usize>) -> Result<LinearMap> {
        self.check_member(delta)?;
        if !self.homogeneity(delta).admits(1) {
            return Err(Error::arg("adjoint requires a homogeneous element of degree 1"));
        }
        Ok(LinearMap {
            images: (0..self.dim())
                .map(|i| self.bracket(delta, &Elem::basis(i)))
                .collect(),
        })
    }

    /// Smallest `c` such that every bracket of `c + 1` elements vanishes,
    /// computed from the lower central series; `None` if not nilpotent.
    pub fn nilpotency_class(&self) -> Option<usize> {
        let basis = self.basis_elems();
        let mut current = span_basis(&basis);
        let mut class = 0usize;
        while !current.is_empty() {
            class += 1;
            let mut next = Vec::new();
            for b in &basis {
                for v in &current {
                    next.push(self.bracket(b, v));
                }
            }
            let next = span_basis(&next);
            if next.len() == current.len() {
                return None;
            }
            current = next;
        }
        Some(class.saturating_sub(0))
    }

    pub fn to_json(&self) -> GlaJson {
        GlaJson {
            basis: self
                .names
                .iter()
                .zip(&self.degrees)
                .map(|(n, d)| BasisJson {
                    name: n.clone(),
                    degree: *d,
                })
                .collect(),
            brackets: self
                .table
                .iter()
                .map(|(&(i, j), r)| BracketJson {
                    left: self.names[i].clone(),
                    right: self.names[j].clone(),
                    result: r
                        .iter()
                        .map(|(k, c)| TermJson {
                            coef_num: c.numer().to_string(),
                            coef_den: c.denom().to_string(),
                            basis: self.names[*k].clone(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &GlaJson) -> Result<Self> {
        let mut g = StructureGLA::new(j.basis.iter().map(|b| (b.name.clone(), b.degree)).collect());
        let idx = |name: &str| {
            g.index_of(name)
                .ok_or_else(|| Error::Parse(format!("unknown basis element {:?}", name)))
        };
        let mut entries = Vec::new();
        for br in &j.brackets {
            let (l, r) = (idx(&br.left)?, idx(&br.right)?);
            let mut res = Elem::zero();
            for t in &br.result {
                res.add_term(idx(&t.basis)?, parse_scalar(&t.coef_num, &t.coef_den)?);
            }
            entries.push((l, r, res));
        }
        for (l, r, res) in entries {
            g.set_bracket(l, r, res)?;
        }
        Ok(g)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let j: GlaJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&j)
    }
}

pub(crate) fn parse_scalar(num: &str, den: &str) -> Result<Scalar> {
    let n: num_bigint::BigInt = num
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad numerator {:?}", num)))?;
    let d: num_bigint::BigInt = den
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad denominator {:?}", den)))?;
    if d.is_zero() {
        return Err(Error::Parse("zero denominator".into()));
    }
    Ok(Scalar::new(n, d))
}

impl GradedLieAlgebra for StructureGLA {
    type Key = usize;

    fn degree(&self, key: &usize) -> i64 {
        self.degrees[*key]
    }

    fn bracket(&self, x: &Elem<usize>, y: &Elem<usize>) -> Elem<usize> {
        let mut out = Elem::zero();
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                out.add_scaled(&self.bracket_basis(*i, *j), &(a * b));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GlaJson {
    pub basis: Vec<BasisJson>,
    #[serde(default)]
    pub brackets: Vec<BracketJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct BasisJson {
    pub name: String,
    pub degree: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct BracketJson {
    pub left: String,
    pub right: String,
    pub result: Vec<TermJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TermJson {
    #[serde(deserialize_with = "crate::json::de_bigint_string")]
    pub coef_num: String,
    #[serde(default = "one_string", deserialize_with = "crate::json::de_bigint_string")]
    pub coef_den: String,
    pub basis: String,
}

fn one_string() -> String {
    "1".to_string()
}

/// Linear endomorphism of a finite-dimensional algebra, by basis images.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap {
    pub images: Vec<Elem<usize>>,
}

impl LinearMap {
    pub fn apply(&self, x: &Elem<usize>) -> Elem<usize> {
        x.linear_map(|k| self.images[*k].clone())
    }

    pub fn compose(&self, inner: &LinearMap) -> LinearMap {
        LinearMap {
            images: inner.images.iter().map(|v| self.apply(v)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(|v| v.is_zero())
    }

    pub fn scaled(&self, c: &Scalar) -> LinearMap {
        LinearMap {
            images: self.images.iter().map(|v| v.scaled(c)).collect(),
        }
    }
}

/// A graded Lie algebra with a degree-1 differential given on the basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Dgla {
    pub algebra: StructureGLA,
    pub differential: LinearMap,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DglaViolation {
    Gla(GlaViolation),
    Degree { basis: String, image: Elem<usize> },
    NotSquareZero { basis: String, image: Elem<usize> },
    NotDerivation { left: String, right: String, residual: Elem<usize> },
}

impl Dgla {
    pub fn verify(&self) -> Vec<DglaViolation> {
        let g = &self.algebra;
        let mut out: Vec<DglaViolation> = g.verify().violations.into_iter().map(DglaViolation::Gla).collect();
        let n = g.dim();
        for i in 0..n {
            let img = &self.differential.images[i];
            if img.keys().any(|k| g.degrees[*k] != g.degrees[i] + 1) {
                out.push(DglaViolation::Degree {
                    basis: g.names[i].clone(),
                    image: img.clone(),
                });
            }
            let dd = self.differential.apply(img);
            if !dd.is_zero() {
                out.push(DglaViolation::NotSquareZero {
                    basis: g.names[i].clone(),
                    image: dd,
                });
            }
        }
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (Elem::basis(i), Elem::basis(j));
                let mut r = self.differential.apply(&g.bracket(&a, &b));
                r -= &g.bracket(&self.differential.apply(&a), &b);
                r.add_scaled(
                    &g.bracket(&a, &self.differential.apply(&b)),
                    &-sign_scalar(g.degrees[i]),
                );
                if !r.is_zero() {
                    out.push(DglaViolation::NotDerivation {
                        left: g.names[i].clone(),
                        right: g.names[j].clone(),
                        residual: r,
                    });
                }
            }
        }
        out
    }
}

/// `L_0 = span(h)`, `L_1 = span(e)`, `[h, e] = e`.
pub fn sample_gla() -> StructureGLA {
    StructureGLA::new(vec![("h".into(), 0), ("e".into(), 1)])
        .with_bracket(0, 1, Elem::basis(1))
}

/// All brackets zero.
pub fn abelian(basis: Vec<(String, i64)>) -> StructureGLA {
    StructureGLA::new(basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::int;

    #[test]
    fn sample_brackets() {
        let g = sample_gla();
        let (h, e) = (g.elem("h"), g.elem("e"));
        assert_eq!(g.bracket(&h, &e), e);
        assert!(g.bracket(&h, &h).is_zero());
        assert!(g.bracket(&e, &e).is_zero());
        assert_eq!(g.bracket(&e, &h), -&e);
        assert!(g.verify().ok());
    }

    #[test]
    fn mismatched_algebra_is_rejected() {
        let g = sample_gla();
        assert!(g.try_bracket(&Elem::basis(5), &g.elem("e")).is_err());
    }

    #[test]
    fn inconsistent_antisymmetry_is_reported() {
        let g = sample_gla().with_bracket(1, 0, Elem::basis(1));
        let r = g.verify();
        assert!(r.violations.iter().any(|v| matches!(v,
            GlaViolation::Antisymmetry { left, right, .. }
                if (left == "e" && right == "h") || (left == "h" && right == "e"))));
    }

    #[test]
    fn degree_violation_is_reported() {
        let g = StructureGLA::new(vec![("h".into(), 0), ("e".into(), 1), ("f".into(), 2)])
            .with_bracket(0, 1, Elem::basis(2));
        assert!(g
            .verify()
            .violations
            .iter()
            .any(|v| matches!(v, GlaViolation::Degree { .. })));
    }

    #[test]
    fn adjoint_examples() {
        let g = sample_gla();
        let zero = g.adjoint(&Elem::zero()).unwrap();
        assert!(zero.is_zero());
        let d = g.adjoint(&g.elem("e")).unwrap();
        assert_eq!(d.apply(&g.elem("h")), -&g.elem("e"));
        // [e, e] = 0 so D^2 = 0
        assert!(d.compose(&d).is_zero());
        assert!(g.adjoint(&g.elem("h")).is_err());
    }

    #[test]
    fn adjoint_square_is_half_adjoint_of_square() {
        // odd x with [x, x] != 0: L_1 = span(x), L_2 = span(z), [x, x] = z
        let g = StructureGLA::new(vec![("x".into(), 1), ("z".into(), 2)])
            .with_bracket(0, 0, Elem::basis(1));
        assert!(g.verify().ok());
        let x = g.elem("x");
        let d = g.adjoint(&x).unwrap();
        let sq = g.bracket(&x, &x);
        let half_ad_sq = LinearMap {
            images: (0..g.dim())
                .map(|i| g.bracket(&sq, &Elem::basis(i)).scaled(&crate::graded::ratio(1, 2)))
                .collect(),
        };
        assert_eq!(d.compose(&d), half_ad_sq);
    }

    #[test]
    fn json_round_trip() {
        let g = sample_gla();
        let text = serde_json::to_string(&g.to_json()).unwrap();
        assert_eq!(StructureGLA::parse(&text).unwrap(), g);
        let lit = r#"{"basis":[{"name":"h","degree":0},{"name":"e","degree":1}],
            "brackets":[{"left":"h","right":"e","result":[{"coef_num":3,"coef_den":2,"basis":"e"}]}]}"#;
        let g2 = StructureGLA::parse(lit).unwrap();
        assert_eq!(g2.bracket(&g2.elem("h"), &g2.elem("e")), Elem::term(1, crate::graded::ratio(3, 2)));
        assert!(StructureGLA::parse("{").is_err());
    }

    #[test]
    fn nilpotency() {
        assert_eq!(abelian(vec![("a".into(), 0)]).nilpotency_class(), Some(1));
        assert_eq!(sample_gla().nilpotency_class(), None);
    }

    #[test]
    fn dgla_checks() {
        let g = abelian(vec![("a".into(), 0), ("b".into(), 1)]);
        let ok = Dgla {
            algebra: g.clone(),
            differential: LinearMap {
                images: vec![Elem::basis(1), Elem::zero()],
            },
        };
        assert!(ok.verify().is_empty());
        let bad = Dgla {
            algebra: g,
            differential: LinearMap {
                images: vec![Elem::term(1, int(1)), Elem::basis(0)],
            },
        };
        assert!(!bad.verify().is_empty());
    }
}
