//! Polynomial multivector fields and differential forms on `ℝ^m × ℝ^k`
//! (base coordinates `x`, fiber coordinates `p`, plus inert parameters),
//! the Schouten bracket and the coisotropic V-data.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gla::GradedLieAlgebra;
use crate::graded::{int, Elem, Scalar};
use crate::linfty::Filtration;
use crate::poly::{self, Mono, Poly};
use crate::vdata::VData;

/// Coordinates are indexed `0..base` (the `x`), then `base..base+fiber`
/// (the `p`); parameters follow and are never differentiated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dims {
    pub base: usize,
    #[serde(default)]
    pub fiber: usize,
    #[serde(default)]
    pub params: usize,
}

impl Dims {
    pub fn plain(m: usize) -> Self {
        Dims { base: m, fiber: 0, params: 0 }
    }

    pub fn bundle(m: usize, k: usize) -> Self {
        Dims { base: m, fiber: k, params: 0 }
    }

    pub fn with_params(self, params: usize) -> Self {
        Dims { params, ..self }
    }

    pub fn coords(&self) -> usize {
        self.base + self.fiber
    }

    pub fn nvars(&self) -> usize {
        self.coords() + self.params
    }

    pub fn is_fiber(&self, i: usize) -> bool {
        i >= self.base && i < self.coords()
    }

    pub fn fiber_mask(&self) -> u32 {
        ((1u32 << self.coords()) - 1) & !((1u32 << self.base) - 1)
    }

    pub fn var_name(&self, i: usize) -> String {
        if i < self.base {
            format!("x{}", i + 1)
        } else if i < self.coords() {
            format!("p{}", i - self.base + 1)
        } else if self.params == 1 {
            "t".to_string()
        } else {
            format!("t{}", i - self.coords() + 1)
        }
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        (0..self.nvars()).find(|&i| self.var_name(i) == name)
    }
}

/// A coefficient monomial times a wedge of coordinate vectors (or
/// coordinate 1-forms), the wedge given as a bit mask in increasing order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MvKey {
    pub wedge: u32,
    pub mono: Mono,
}

impl MvKey {
    pub fn arity(&self) -> u32 {
        self.wedge.count_ones()
    }
}

/// Polynomial multivector field; also used for differential forms, with
/// the wedge read as `dx_I`.
pub type Mv = Elem<MvKey>;
pub type Form = Elem<MvKey>;

pub fn term(coef: Poly, wedge: u32) -> Mv {
    let mut out = Mv::zero();
    for (m, c) in coef.iter() {
        out.add_term(MvKey { wedge, mono: m.clone() }, c.clone());
    }
    out
}

pub fn function(f: Poly) -> Mv {
    term(f, 0)
}

/// `∂_i` (or `dx_i`) with coefficient one.
pub fn coord(dims: &Dims, i: usize) -> Mv {
    term(poly::one(dims.nvars()), 1 << i)
}

pub fn wedge_of(dims: &Dims, idx: &[usize]) -> Mv {
    let mut out = function(poly::one(dims.nvars()));
    for &i in idx {
        out = wedge(&out, &coord(dims, i));
    }
    out
}

/// Part of an element with wedge mask `w`, as a polynomial.
pub fn coefficient(u: &Mv, w: u32) -> Poly {
    let mut out = Poly::zero();
    for (k, c) in u.iter() {
        if k.wedge == w {
            out.add_term(k.mono.clone(), c.clone());
        }
    }
    out
}

/// Sign of `ξ_A ∧ ξ_B = ± ξ_{A∪B}`, or `None` if the masks overlap.
pub fn wedge_sign(a: u32, b: u32) -> Option<i64> {
    if a & b != 0 {
        return None;
    }
    let mut inv = 0u32;
    let mut bb = b;
    while bb != 0 {
        let j = bb.trailing_zeros();
        inv += (a >> (j + 1)).count_ones();
        bb &= bb - 1;
    }
    Some(if inv % 2 == 0 { 1 } else { -1 })
}

/// `∂_l ξ_I / ∂ξ_i` as (sign, remaining mask).
pub(crate) fn left_deriv(w: u32, i: usize) -> Option<(i64, u32)> {
    if w & (1 << i) == 0 {
        return None;
    }
    let below = (w & ((1u32 << i) - 1)).count_ones();
    Some((if below % 2 == 0 { 1 } else { -1 }, w & !(1 << i)))
}

/// `∂_r ξ_I / ∂ξ_i` as (sign, remaining mask).
pub(crate) fn right_deriv(w: u32, i: usize) -> Option<(i64, u32)> {
    if w & (1 << i) == 0 {
        return None;
    }
    let above = (w >> (i + 1)).count_ones();
    Some((if above % 2 == 0 { 1 } else { -1 }, w & !(1 << i)))
}

pub(crate) fn mono_deriv(m: &Mono, i: usize) -> Option<(Mono, i64)> {
    if m[i] == 0 {
        return None;
    }
    let mut d = m.clone();
    d[i] -= 1;
    Some((d, m[i] as i64))
}

/// Graded-commutative product of multivectors (or forms).
pub fn wedge(u: &Mv, v: &Mv) -> Mv {
    let mut out = Mv::zero();
    for (ku, cu) in u.iter() {
        for (kv, cv) in v.iter() {
            if let Some(s) = wedge_sign(ku.wedge, kv.wedge) {
                out.add_term(
                    MvKey {
                        wedge: ku.wedge | kv.wedge,
                        mono: poly::mono_mul(&ku.mono, &kv.mono),
                    },
                    cu * cv * int(s),
                );
            }
        }
    }
    out
}

pub fn scale_by_poly(u: &Mv, f: &Poly) -> Mv {
    wedge(&function(f.clone()), u)
}

/// `∂u/∂v_i` applied to coefficients.
pub fn coeff_deriv(u: &Mv, i: usize) -> Mv {
    let mut out = Mv::zero();
    for (k, c) in u.iter() {
        if let Some((m, e)) = mono_deriv(&k.mono, i) {
            out.add_term(MvKey { wedge: k.wedge, mono: m }, c * int(e));
        }
    }
    out
}

/// Schouten bracket of single terms `f ξ_I`, `g ξ_J`:
/// `Σ_i ∂_r(fξ_I)/∂ξ_i ∧ ∂(gξ_J)/∂x_i − ∂(fξ_I)/∂x_i ∧ ∂_l(gξ_J)/∂ξ_i`.
fn schouten_terms(coords: usize, ku: &MvKey, cu: &Scalar, kv: &MvKey, cv: &Scalar, out: &mut Mv) {
    for i in 0..coords {
        if let (Some((s, rest)), Some((dm, e))) = (right_deriv(ku.wedge, i), mono_deriv(&kv.mono, i)) {
            if let Some(s2) = wedge_sign(rest, kv.wedge) {
                out.add_term(
                    MvKey {
                        wedge: rest | kv.wedge,
                        mono: poly::mono_mul(&ku.mono, &dm),
                    },
                    cu * cv * int(s * s2 * e),
                );
            }
        }
        if let (Some((dm, e)), Some((s, rest))) = (mono_deriv(&ku.mono, i), left_deriv(kv.wedge, i)) {
            if let Some(s2) = wedge_sign(ku.wedge, rest) {
                out.add_term(
                    MvKey {
                        wedge: ku.wedge | rest,
                        mono: poly::mono_mul(&dm, &kv.mono),
                    },
                    -(cu * cv * int(s * s2 * e)),
                );
            }
        }
    }
}

/// Multivector fields with the Schouten bracket, graded by arity minus one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Schouten {
    pub dims: Dims,
}

impl GradedLieAlgebra for Schouten {
    type Key = MvKey;

    fn degree(&self, key: &MvKey) -> i64 {
        key.arity() as i64 - 1
    }

    fn bracket(&self, x: &Mv, y: &Mv) -> Mv {
        let mut out = Mv::zero();
        for (ku, cu) in x.iter() {
            for (kv, cv) in y.iter() {
                schouten_terms(self.dims.coords(), ku, cu, kv, cv, &mut out);
            }
        }
        out
    }
}

pub fn check_member(dims: &Dims, u: &Mv) -> Result<()> {
    if u.keys().any(|k| k.mono.len() != dims.nvars() || k.wedge >> dims.coords() != 0) {
        return Err(Error::arg("element does not live on this space"));
    }
    Ok(())
}

pub fn schouten(dims: &Dims, u: &Mv, v: &Mv) -> Result<Mv> {
    check_member(dims, u)?;
    check_member(dims, v)?;
    Ok(Schouten { dims: *dims }.bracket(u, v))
}

/// Homogeneous arity of a nonzero element, if all terms agree.
pub fn arity(u: &Mv) -> Option<u32> {
    let mut it = u.keys().map(|k| k.arity());
    let first = it.next()?;
    if it.all(|a| a == first) {
        Some(first)
    } else {
        None
    }
}

pub fn de_rham(dims: &Dims, w: &Form) -> Form {
    let mut out = Form::zero();
    for (k, c) in w.iter() {
        for i in 0..dims.coords() {
            if let (Some((dm, e)), Some(s)) = (mono_deriv(&k.mono, i), wedge_sign(1 << i, k.wedge)) {
                out.add_term(
                    MvKey {
                        wedge: k.wedge | (1 << i),
                        mono: dm,
                    },
                    c * int(e * s),
                );
            }
        }
    }
    out
}

/// `ι_Y w` for a vector field `Y`, contracting the first slot.
pub fn interior(y: &Mv, w: &Form) -> Form {
    let mut out = Form::zero();
    for (ky, cy) in y.iter() {
        debug_assert_eq!(ky.arity(), 1);
        let i = ky.wedge.trailing_zeros() as usize;
        for (kw, cw) in w.iter() {
            if let Some((s, rest)) = left_deriv(kw.wedge, i) {
                out.add_term(
                    MvKey {
                        wedge: rest,
                        mono: poly::mono_mul(&ky.mono, &kw.mono),
                    },
                    cy * cw * int(s),
                );
            }
        }
    }
    out
}

/// `π^♯ξ = ι_ξ π` for a 1-form `ξ`; zero when `π` is a function.
pub fn sharp(pi: &Mv, xi: &Form) -> Result<Mv> {
    if xi.keys().any(|k| k.arity() != 1) {
        return Err(Error::arg("sharp expects a 1-form"));
    }
    Ok(sharp_unchecked(pi, xi))
}

fn sharp_unchecked(pi: &Mv, xi: &Form) -> Mv {
    let mut out = Mv::zero();
    for (kx, cx) in xi.iter() {
        let i = kx.wedge.trailing_zeros() as usize;
        for (kp, cp) in pi.iter() {
            if let Some((s, rest)) = left_deriv(kp.wedge, i) {
                out.add_term(
                    MvKey {
                        wedge: rest,
                        mono: poly::mono_mul(&kp.mono, &kx.mono),
                    },
                    cp * cx * int(s),
                );
            }
        }
    }
    out
}

fn permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    if n == 0 {
        return vec![(Vec::new(), 1)];
    }
    let mut out = Vec::new();
    for (p, s) in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            let moved = (p.len() - pos) as i64;
            out.push((q, if moved % 2 == 0 { s } else { -s }));
        }
    }
    out
}

/// `(π_1^♯ ∧ .. ∧ π_n^♯) w` for an `n`-form `w`: on `ξ_1 ∧ .. ∧ ξ_n`,
/// `Σ_σ (-1)^σ π_1^♯(ξ_σ(1)) ∧ .. ∧ π_n^♯(ξ_σ(n))`.
pub fn multi_sharp(dims: &Dims, pis: &[Mv], w: &Form) -> Result<Mv> {
    let n = pis.len();
    if w.keys().any(|k| k.arity() as usize != n) {
        return Err(Error::arg(format!("multi_sharp with {} fields needs a {}-form", n, n)));
    }
    let perms = permutations(n);
    let mut out = Mv::zero();
    for (kw, cw) in w.iter() {
        let idx: Vec<usize> = (0..dims.coords()).filter(|i| kw.wedge & (1 << i) != 0).collect();
        let coef = function(Elem::term(kw.mono.clone(), cw.clone()));
        for (p, s) in &perms {
            let mut acc = coef.clone();
            for (j, pi) in pis.iter().enumerate() {
                if acc.is_zero() {
                    break;
                }
                acc = wedge(&acc, &sharp_unchecked(pi, &coord(dims, idx[p[j]])));
            }
            out.add_scaled(&acc, &int(*s));
        }
    }
    Ok(out)
}

/// `|·|_pol` of a key: fiber degree of the coefficient minus the number of
/// `∂p` factors.
pub fn pol_degree_key(dims: &Dims, k: &MvKey) -> i64 {
    let dp: u32 = (dims.base..dims.coords()).map(|i| k.mono[i]).sum();
    dp as i64 - (k.wedge & dims.fiber_mask()).count_ones() as i64
}

pub fn pol_degree(dims: &Dims, u: &Mv) -> Option<i64> {
    u.keys().map(|k| pol_degree_key(dims, k)).max()
}

/// Restrict to `p = 0` and keep the purely vertical terms.
pub fn coiso_projection(dims: &Dims, u: &Mv) -> Mv {
    u.filter(|k| in_vertical_constant(dims, k))
}

/// Keys of fiberwise constant vertical multivectors.
pub fn in_vertical_constant(dims: &Dims, k: &MvKey) -> bool {
    k.wedge & !dims.fiber_mask() == 0 && (dims.base..dims.coords()).all(|i| k.mono[i] == 0)
}

/// A section `Σ_j φ_j(x) ∂p_j` of the normal bundle.
pub fn is_section(dims: &Dims, phi: &Mv) -> bool {
    phi.keys()
        .all(|k| k.arity() == 1 && in_vertical_constant(dims, k))
}

/// Pushforward along the time-one flow of a section `φ`: coefficients are
/// substituted `p ↦ p − φ(x)` and `∂x_i ↦ ∂x_i + Σ_j ∂_iφ_j ∂p_j`.
pub fn fiber_translate(dims: &Dims, u: &Mv, phi: &Mv) -> Result<Mv> {
    check_member(dims, u)?;
    if !is_section(dims, phi) {
        return Err(Error::arg("fiber translation needs a vertical section with base coefficients"));
    }
    let n = dims.nvars();
    let comps: Vec<Poly> = (0..dims.fiber)
        .map(|j| coefficient(phi, 1 << (dims.base + j)))
        .collect();
    let mut images: Vec<Option<Poly>> = vec![None; n];
    for j in 0..dims.fiber {
        images[dims.base + j] = Some(&poly::var(n, dims.base + j) - &comps[j]);
    }
    let legs: Vec<Mv> = (0..dims.coords())
        .map(|i| {
            let mut v = coord(dims, i);
            if i < dims.base {
                for j in 0..dims.fiber {
                    v += &term(poly::deriv(&comps[j], i), 1 << (dims.base + j));
                }
            }
            v
        })
        .collect();
    let mut out = Mv::zero();
    for (k, c) in u.iter() {
        let mut acc = function(poly::substitute(&Elem::term(k.mono.clone(), c.clone()), &images, n));
        for i in 0..dims.coords() {
            if k.wedge & (1 << i) != 0 {
                acc = wedge(&acc, &legs[i]);
            }
        }
        out += &acc;
    }
    Ok(out)
}

/// All keys with wedge over the coordinates and coefficient monomials of
/// total degree at most `max_deg` in the coordinates.
pub fn basis_keys(dims: &Dims, max_deg: u32) -> Vec<MvKey> {
    let monos = monomials(dims.coords(), max_deg);
    let mut out = Vec::new();
    for w in 0..(1u32 << dims.coords()) {
        for m in &monos {
            let mut mono = m.clone();
            mono.resize(dims.nvars(), 0);
            out.push(MvKey { wedge: w, mono });
        }
    }
    out
}

pub fn monomials(n: usize, max_deg: u32) -> Vec<Mono> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for m in &out {
            let used: u32 = m.iter().sum();
            for e in 0..=(max_deg - used) {
                let mut m2 = m.clone();
                m2.push(e);
                next.push(m2);
            }
        }
        out = next;
    }
    out
}

/// `(χ(ℝ^m×ℝ^k)[1], Γ(∧νC)[1], restriction-projection, π)` with
/// `C = {p = 0}`, filtered by minus the polynomial degree.
pub fn coiso_vdata(dims: &Dims, pi: &Mv, sample_degree: u32) -> Result<VData<Schouten>> {
    check_member(dims, pi)?;
    if arity(pi).map(|a| a != 2).unwrap_or(false) {
        return Err(Error::arg("expected a bivector"));
    }
    let lie = Schouten { dims: *dims };
    let jac = lie.bracket(pi, pi);
    if !jac.is_zero() {
        return Err(Error::Validation(format!("[pi, pi] = {:?} is not zero", jac)));
    }
    let d = *dims;
    let d2 = *dims;
    let d3 = *dims;
    Ok(VData {
        lie: Arc::new(lie),
        in_a: Arc::new(move |k: &MvKey| in_vertical_constant(&d, k)),
        proj: Arc::new(move |k: &MvKey| {
            if in_vertical_constant(&d2, k) {
                Elem::basis(k.clone())
            } else {
                Elem::zero()
            }
        }),
        delta: pi.clone(),
        filtration: Some(Filtration::new(move |k: &MvKey| -pol_degree_key(&d3, k), 0, dims.fiber as i64)),
        nilpotency: None,
        sample: basis_keys(dims, sample_degree),
    })
}

/// JSON element literal for multivectors and forms.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ElementJson {
    pub dims: Dims,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    pub terms: Vec<TermLiteral>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TermLiteral {
    pub coef: serde_json::Value,
    #[serde(default)]
    pub monomial: BTreeMap<String, u32>,
    /// 1-based coordinate indices, `x` first then `p`.
    #[serde(default)]
    pub wedge: Vec<usize>,
}

pub fn parse_coef(v: &serde_json::Value) -> Result<Scalar> {
    match v {
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(int)
            .ok_or_else(|| Error::Parse(format!("coefficient {} is not an integer", n))),
        serde_json::Value::String(s) => {
            let (num, den) = s.split_once('/').unwrap_or((s.as_str(), "1"));
            crate::gla::parse_scalar(num, den)
        }
        _ => Err(Error::Parse(format!("bad coefficient {}", v))),
    }
}

pub fn format_coef(c: &Scalar) -> serde_json::Value {
    if c.is_integer() {
        match i64::try_from(c.numer().clone()) {
            Ok(n) => serde_json::Value::from(n),
            Err(_) => serde_json::Value::from(c.to_string()),
        }
    } else {
        serde_json::Value::from(c.to_string())
    }
}

impl ElementJson {
    pub fn parse(&self) -> Result<Mv> {
        let dims = self.dims;
        if dims.coords() > 16 {
            return Err(Error::Parse("too many coordinates".into()));
        }
        let mut out = Mv::zero();
        for t in &self.terms {
            let mut mono = vec![0u32; dims.nvars()];
            for (name, e) in &t.monomial {
                let i = dims
                    .var_index(name)
                    .ok_or_else(|| Error::Parse(format!("unknown variable {:?}", name)))?;
                mono[i] += e;
            }
            let mut idx = Vec::new();
            for &w in &t.wedge {
                if w == 0 || w > dims.coords() {
                    return Err(Error::Parse(format!("wedge index {} out of range", w)));
                }
                idx.push(w - 1);
            }
            let c = parse_coef(&t.coef)?;
            let w = wedge_of(&dims, &idx);
            out.add_scaled(&scale_by_poly(&w, &Elem::basis(mono)), &c);
        }
        Ok(out)
    }

    pub fn from_elem(dims: &Dims, u: &Mv, kind: Option<&str>) -> Self {
        ElementJson {
            dims: *dims,
            kind: kind.map(str::to_string),
            terms: u
                .iter()
                .map(|(k, c)| TermLiteral {
                    coef: format_coef(c),
                    monomial: k
                        .mono
                        .iter()
                        .enumerate()
                        .filter(|(_, e)| **e > 0)
                        .map(|(i, e)| (dims.var_name(i), *e))
                        .collect(),
                    wedge: (0..dims.coords()).filter(|i| k.wedge & (1 << i) != 0).map(|i| i + 1).collect(),
                })
                .collect(),
        }
    }
}

/// Human-readable rendering, e.g. `2*x1*p1^2 ∂x1∧∂p1`.
pub fn render(dims: &Dims, u: &Mv, form: bool) -> String {
    if u.is_zero() {
        return "0".into();
    }
    let mut parts = Vec::new();
    for (k, c) in u.iter() {
        let mut factors = Vec::new();
        if !c.is_one() || (k.mono.iter().all(|e| *e == 0) && k.wedge == 0) {
            factors.push(format!("{}", c));
        }
        for (i, e) in k.mono.iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(dims.var_name(i)),
                _ => factors.push(format!("{}^{}", dims.var_name(i), e)),
            }
        }
        let legs: Vec<String> = (0..dims.coords())
            .filter(|i| k.wedge & (1 << i) != 0)
            .map(|i| if form { format!("d{}", dims.var_name(i)) } else { format!("∂{}", dims.var_name(i)) })
            .collect();
        let mut s = factors.join("*");
        if !legs.is_empty() {
            if !s.is_empty() {
                s.push(' ');
            }
            s.push_str(&legs.join("∧"));
        }
        parts.push(s);
    }
    parts.join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gla::{antisymmetry_residual, jacobi_residual};
    use crate::graded::ratio;
    use crate::linfty::{mc_residual, mc_summands, LInftyOne, DEFAULT_MAX_TERMS};

    fn x(d: &Dims, i: usize) -> Poly {
        poly::var(d.nvars(), i)
    }

    #[test]
    fn schouten_examples() {
        let d = Dims::plain(2);
        let s = Schouten { dims: d };
        assert!(s.bracket(&coord(&d, 0), &coord(&d, 1)).is_zero());
        let x1d2 = scale_by_poly(&coord(&d, 1), &x(&d, 0));
        assert_eq!(s.bracket(&x1d2, &coord(&d, 0)), -coord(&d, 1));
        let pi = scale_by_poly(&wedge_of(&d, &[0, 1]), &x(&d, 0));
        assert!(s.bracket(&pi, &pi).is_zero());
        // [X, f] = X(f)
        let f = function(poly::mul(&x(&d, 0), &x(&d, 1)));
        assert_eq!(s.bracket(&coord(&d, 0), &f), function(x(&d, 1)));
    }

    #[test]
    fn schouten_is_graded_lie_on_small_basis() {
        let d = Dims::plain(2);
        let s = Schouten { dims: d };
        let keys = basis_keys(&d, 2);
        let elems: Vec<Mv> = keys.iter().map(|k| Elem::basis(k.clone())).collect();
        for a in elems.iter().step_by(3) {
            for b in elems.iter().step_by(2) {
                assert!(antisymmetry_residual(&s, a, b).is_zero());
                for c in elems.iter().step_by(5) {
                    assert!(jacobi_residual(&s, a, b, c).is_zero(), "{:?} {:?} {:?}", a, b, c);
                }
            }
        }
    }

    #[test]
    fn de_rham_examples() {
        let d = Dims::plain(3);
        let w = scale_by_poly(&coord(&d, 1), &x(&d, 0));
        assert_eq!(de_rham(&d, &w), wedge_of(&d, &[0, 1]));
        assert!(de_rham(&d, &wedge_of(&d, &[0, 1, 2])).is_zero());
        let w = scale_by_poly(&coord(&d, 2), &poly::mul(&x(&d, 0), &x(&d, 1)));
        assert!(de_rham(&d, &de_rham(&d, &w)).is_zero());
    }

    #[test]
    fn sharp_examples() {
        let d = Dims::plain(3);
        let pi = wedge_of(&d, &[0, 1]);
        assert_eq!(sharp(&pi, &coord(&d, 0)).unwrap(), coord(&d, 1));
        assert!(sharp(&pi, &coord(&d, 2)).unwrap().is_zero());
        assert!(sharp(&function(x(&d, 0)), &coord(&d, 0)).unwrap().is_zero());
        assert!(sharp(&pi, &wedge_of(&d, &[0, 1])).is_err());
        assert_eq!(multi_sharp(&d, &[pi.clone()], &coord(&d, 1)).unwrap(), sharp(&pi, &coord(&d, 1)).unwrap());
        let h = wedge_of(&d, &[0, 1, 2]);
        assert!(multi_sharp(&d, &[pi.clone(), pi.clone(), pi.clone()], &h).unwrap().is_zero());
        // π^♯dx1 ∧ π^♯dx2 − π^♯dx2 ∧ π^♯dx1 = ∂2∧(−∂1) − (−∂1)∧∂2 = 2 ∂1∧∂2
        let two = multi_sharp(&d, &[pi.clone(), pi.clone()], &wedge_of(&d, &[0, 1])).unwrap();
        assert_eq!(two, pi.scaled(&int(2)));
    }

    #[test]
    fn projection_examples() {
        let d = Dims::bundle(1, 2);
        assert!(coiso_projection(&d, &wedge_of(&d, &[0, 1])).is_zero());
        let v = wedge_of(&d, &[1, 2]);
        assert_eq!(coiso_projection(&d, &v), v);
        assert!(coiso_projection(&d, &scale_by_poly(&v, &x(&d, 1))).is_zero());
    }

    #[test]
    fn translate_examples() {
        let d = Dims::bundle(1, 1);
        let p = x(&d, 1);
        let u = scale_by_poly(&coord(&d, 0), &p);
        assert_eq!(fiber_translate(&d, &u, &Mv::zero()).unwrap(), u);
        let f = poly::constant(d.nvars(), int(3));
        let phi = scale_by_poly(&coord(&d, 1), &f);
        let expect = scale_by_poly(&coord(&d, 0), &(&p - &f));
        assert_eq!(fiber_translate(&d, &u, &phi).unwrap(), expect);
        // non-constant section: the ∂x leg picks up f'∂p
        let f = x(&d, 0);
        let phi = scale_by_poly(&coord(&d, 1), &f);
        let s = Schouten { dims: d };
        let exp = crate::vdata::exp_ad(&s, &u, &phi, 16).unwrap();
        assert_eq!(fiber_translate(&d, &u, &phi).unwrap(), exp);
        assert!(fiber_translate(&d, &u, &u).is_err());
    }

    #[test]
    fn coiso_examples() {
        let d = Dims::bundle(1, 1);
        let pi = wedge_of(&d, &[0, 1]);
        let v = coiso_vdata(&d, &pi, 1).unwrap();
        assert!(!v.is_curved());
        assert!(v.validate().ok());
        assert!(v.check_filtration().is_empty());
        let d2 = Dims::bundle(1, 2);
        let v2 = coiso_vdata(&d2, &wedge_of(&d2, &[1, 2]), 1).unwrap();
        assert!(v2.is_curved());
        // phi = f ∂p is MC iff graph(-phi) coisotropic; π = ∂x∧∂p: always
        let phi = scale_by_poly(&coord(&d, 1), &poly::mul(&x(&d, 0), &x(&d, 0)));
        let s = v.small_algebra();
        let r = mc_residual(&s, &phi, DEFAULT_MAX_TERMS).unwrap();
        assert!(r.vanishes());
        assert_ne!(r.terminated_by, crate::linfty::Termination::Truncation);
        let pol = pol_degree(&d, &pi).unwrap();
        for (n, t) in mc_summands(&s, &phi, 8).iter().enumerate() {
            if n as i64 > pol + 2 {
                assert!(t.is_zero());
            }
        }
        let _ = ratio(1, 2);
        assert!(s.filtration().is_some());
    }

    #[test]
    fn literal_round_trip() {
        let d = Dims::bundle(1, 2);
        let u = scale_by_poly(&wedge_of(&d, &[0, 2]), &(&x(&d, 1) + &poly::constant(d.nvars(), ratio(1, 3))));
        let j = ElementJson::from_elem(&d, &u, None);
        let text = serde_json::to_string(&j).unwrap();
        let back: ElementJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.parse().unwrap(), u);
        assert!(render(&d, &u, false).contains("∂x1∧∂p2"));
    }
}
