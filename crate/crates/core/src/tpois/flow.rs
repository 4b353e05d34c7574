//! Affine diffeomorphisms, the graph transform `π ↦ e^B π`, the action of
//! `Ω² ⋊ Aff` and flow curves of gauge fields.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gla::GradedLieAlgebra;
use crate::graded::{inv_factorial, int, Scalar};
use crate::poly::{self, Poly};
use crate::polygeo::{self, coefficient, de_rham, interior, term, wedge, Dims, Form, Mv, MvKey, Schouten};

use super::wedge_pi_tilde;

type Matrix = Vec<Vec<Poly>>;

/// `x ↦ A x + b` with rational `A` (invertible) and `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineDiffeo {
    pub a: Vec<Vec<Scalar>>,
    pub b: Vec<Scalar>,
}

fn const_matrix(a: &[Vec<Scalar>]) -> Matrix {
    a.iter()
        .map(|row| row.iter().map(|c| poly::constant(0, c.clone())).collect())
        .collect()
}

impl AffineDiffeo {
    pub fn identity(m: usize) -> Self {
        AffineDiffeo {
            a: (0..m).map(|i| (0..m).map(|j| int((i == j) as i64)).collect()).collect(),
            b: vec![Scalar::zero(); m],
        }
    }

    pub fn new(a: Vec<Vec<Scalar>>, b: Vec<Scalar>) -> Result<Self> {
        let m = b.len();
        if a.len() != m || a.iter().any(|r| r.len() != m) {
            return Err(Error::arg("affine map with mismatched dimensions"));
        }
        let out = AffineDiffeo { a, b };
        if out.det().is_zero() {
            return Err(Error::arg("affine map is not invertible"));
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.b.len()
    }

    pub fn det(&self) -> Scalar {
        poly::constant_value(&poly::det(&const_matrix(&self.a), 0)).unwrap_or_default()
    }

    pub fn inverse(&self) -> Self {
        let d = self.det();
        let adj = poly::adjugate(&const_matrix(&self.a), 0);
        let ai: Vec<Vec<Scalar>> = adj
            .iter()
            .map(|row| row.iter().map(|p| poly::constant_value(p).unwrap_or_default() / &d).collect())
            .collect();
        let bi = ai
            .iter()
            .map(|row| -row.iter().zip(&self.b).map(|(x, y)| x * y).sum::<Scalar>())
            .collect();
        AffineDiffeo { a: ai, b: bi }
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &AffineDiffeo) -> Self {
        let m = self.dim();
        let a = (0..m)
            .map(|i| (0..m).map(|j| (0..m).map(|k| &self.a[i][k] * &other.a[k][j]).sum()).collect())
            .collect();
        let b = (0..m)
            .map(|i| &self.b[i] + (0..m).map(|k| &self.a[i][k] * &other.b[k]).sum::<Scalar>())
            .collect();
        AffineDiffeo { a, b }
    }

    pub fn to_map(&self, dims: &Dims) -> AffineMap {
        let n = dims.nvars();
        let lift = |f: &AffineDiffeo| {
            (
                f.a.iter()
                    .map(|r| r.iter().map(|c| poly::constant(n, c.clone())).collect())
                    .collect(),
                f.b.iter().map(|c| poly::constant(n, c.clone())).collect(),
            )
        };
        let (m, c) = lift(self);
        let (inv_m, inv_c) = lift(&self.inverse());
        AffineMap { m, c, inv_m, inv_c }
    }
}

/// Affine map whose matrix and translation may depend on parameters, with
/// its inverse given explicitly.
#[derive(Debug, Clone)]
pub struct AffineMap {
    pub m: Matrix,
    pub c: Vec<Poly>,
    pub inv_m: Matrix,
    pub inv_c: Vec<Poly>,
}

fn images(dims: &Dims, m: &Matrix, c: &[Poly]) -> Vec<Option<Poly>> {
    let n = dims.nvars();
    let mut out = vec![None; n];
    for i in 0..dims.base {
        let mut e = c[i].clone();
        for j in 0..dims.base {
            e += &poly::mul(&m[i][j], &poly::var(n, j));
        }
        out[i] = Some(e);
    }
    out
}

fn transform(dims: &Dims, u: &Mv, subst: &[Option<Poly>], leg: impl Fn(usize) -> Mv) -> Mv {
    let n = dims.nvars();
    let legs: Vec<Mv> = (0..dims.base).map(leg).collect();
    let mut out = Mv::zero();
    for (k, c) in u.iter() {
        let coef = poly::substitute(&Poly::term(k.mono.clone(), c.clone()), subst, n);
        let mut acc = polygeo::function(coef);
        for (i, l) in legs.iter().enumerate() {
            if k.wedge & (1 << i) != 0 {
                acc = wedge(&acc, l);
            }
        }
        out += &acc;
    }
    out
}

impl AffineMap {
    fn inverse(&self) -> AffineMap {
        AffineMap {
            m: self.inv_m.clone(),
            c: self.inv_c.clone(),
            inv_m: self.m.clone(),
            inv_c: self.c.clone(),
        }
    }

    /// `φ^* w`
    pub fn pullback(&self, dims: &Dims, w: &Form) -> Form {
        let subst = images(dims, &self.m, &self.c);
        transform(dims, w, &subst, |i| {
            let mut l = Form::zero();
            for j in 0..dims.base {
                l += &term(self.m[i][j].clone(), 1 << j);
            }
            l
        })
    }

    /// `φ_* u`
    pub fn pushforward(&self, dims: &Dims, u: &Mv) -> Mv {
        let subst = images(dims, &self.inv_m, &self.inv_c);
        transform(dims, u, &subst, |j| {
            let mut l = Mv::zero();
            for i in 0..dims.base {
                l += &term(self.m[i][j].clone(), 1 << i);
            }
            l
        })
    }

    /// `(φ^{-1})^* w`
    pub fn push_form(&self, dims: &Dims, w: &Form) -> Form {
        self.inverse().pullback(dims, w)
    }
}

/// Antisymmetric coefficient matrix of a bivector or 2-form.
pub fn two_matrix(dims: &Dims, u: &Mv) -> Matrix {
    let m = dims.base;
    let n = dims.nvars();
    let mut out = vec![vec![Poly::zero(); m]; m];
    for i in 0..m {
        for j in (i + 1)..m {
            let c = coefficient(u, (1 << i) | (1 << j));
            out[j][i] = -&c;
            out[i][j] = c;
        }
    }
    let _ = n;
    out
}

fn from_two_matrix(dims: &Dims, a: &Matrix) -> Result<Mv> {
    let m = dims.base;
    let mut out = Mv::zero();
    for i in 0..m {
        if !a[i][i].is_zero() {
            return Err(Error::Validation("graph transform is not antisymmetric".into()));
        }
        for j in (i + 1)..m {
            if a[i][j] != -&a[j][i] {
                return Err(Error::Validation("graph transform is not antisymmetric".into()));
            }
            out += &term(a[i][j].clone(), (1 << i) | (1 << j));
        }
    }
    Ok(out)
}

fn mat_mul(a: &Matrix, b: &Matrix, n: usize) -> Matrix {
    let m = a.len();
    (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut s = Poly::zero();
                    for k in 0..m {
                        s += &poly::mul(&a[i][k], &b[k][j]);
                    }
                    let _ = n;
                    s
                })
                .collect()
        })
        .collect()
}

/// `e^B π` as numerator and denominator: `(e^Bπ)^♯ = π^♯(1 + B^♭π^♯)^{-1}`
/// has matrix `(1 + ΠB)^{-1} Π = adj(1 + ΠB) Π / det(1 + ΠB)`. The
/// determinant may depend on parameters but not on the coordinates.
pub fn e_b_pi_fraction(dims: &Dims, b: &Form, pi: &Mv) -> Result<(Mv, Poly)> {
    polygeo::check_member(dims, b)?;
    polygeo::check_member(dims, pi)?;
    if polygeo::arity(b).map(|a| a != 2).unwrap_or(false) || polygeo::arity(pi).map(|a| a != 2).unwrap_or(false) {
        return Err(Error::arg("graph transform needs a 2-form and a bivector"));
    }
    let n = dims.nvars();
    let p = two_matrix(dims, pi);
    let bm = two_matrix(dims, b);
    let mut k = mat_mul(&p, &bm, n);
    for (i, row) in k.iter_mut().enumerate() {
        row[i] += &poly::one(n);
    }
    let det = poly::det(&k, n);
    if det.is_zero() {
        return Err(Error::OutOfCategory("not a graph".into()));
    }
    if !poly::free_of(&det, |i| i < dims.coords()) {
        return Err(Error::OutOfCategory(
            "graph transform leaves the polynomial category".into(),
        ));
    }
    let adj = poly::adjugate(&k, n);
    let num = from_two_matrix(dims, &mat_mul(&adj, &p, n))?;
    Ok((num, det))
}

pub fn e_b_pi(dims: &Dims, b: &Form, pi: &Mv) -> Result<Mv> {
    let (num, det) = e_b_pi_fraction(dims, b, pi)?;
    match poly::constant_value(&det) {
        Some(d) if !d.is_zero() => Ok(num.scaled(&d.recip())),
        _ => Err(Error::OutOfCategory(
            "graph transform leaves the polynomial category".into(),
        )),
    }
}

/// `(B, φ)·(H, π) = ((φ^{-1})^*H − dB, e^B φ_*π)`
pub fn group_act(dims: &Dims, b: &Form, phi: &AffineDiffeo, h: &Form, pi: &Mv) -> Result<(Form, Mv)> {
    if phi.dim() != dims.base {
        return Err(Error::arg("affine map of the wrong dimension"));
    }
    polygeo::check_member(dims, h)?;
    let map = phi.to_map(dims);
    let h2 = &map.push_form(dims, h) - &de_rham(dims, b);
    let pi2 = e_b_pi(dims, b, &map.pushforward(dims, pi))?;
    Ok((h2, pi2))
}

/// `(B_1, φ_1)(B_2, φ_2) = (B_1 + (φ_1^{-1})^*B_2, φ_1 ∘ φ_2)`
pub fn group_mul(dims: &Dims, g1: (&Form, &AffineDiffeo), g2: (&Form, &AffineDiffeo)) -> (Form, AffineDiffeo) {
    let map = g1.1.to_map(dims);
    (g1.0 + &map.push_form(dims, g2.0), g1.1.compose(g2.1))
}

/// `X = A x + b`, or `None` if some coefficient is not affine.
pub fn affine_parts(dims: &Dims, x: &Mv) -> Option<(Vec<Vec<Scalar>>, Vec<Scalar>)> {
    let m = dims.base;
    let mut a = vec![vec![Scalar::zero(); m]; m];
    let mut b = vec![Scalar::zero(); m];
    for (k, c) in x.iter() {
        if k.arity() != 1 || k.mono[dims.coords()..].iter().any(|e| *e > 0) {
            return None;
        }
        let i = k.wedge.trailing_zeros() as usize;
        let deg: u32 = k.mono.iter().sum();
        match deg {
            0 => b[i] += c,
            1 => {
                let j = k.mono.iter().position(|e| *e == 1)?;
                a[i][j] += c;
            }
            _ => return None,
        }
    }
    Some((a, b))
}

fn is_nilpotent(a: &[Vec<Scalar>]) -> bool {
    let m = a.len();
    let mut p = AffineDiffeo {
        a: a.to_vec(),
        b: vec![Scalar::zero(); m],
    };
    let base = p.clone();
    for _ in 1..m.max(1) {
        p = p.compose(&base);
    }
    p.a.iter().all(|r| r.iter().all(Zero::is_zero))
}

/// The flow of `−X` for `X = Ax + b` with `A` nilpotent, at time `s·t`
/// where `t` is the last parameter: `x ↦ e^{−stA}x − ∫_0^{st} e^{−rA} b dr`.
fn flow_map(dims: &Dims, a: &[Vec<Scalar>], b: &[Scalar], s: i64) -> AffineMap {
    let n = dims.nvars();
    let m = dims.base;
    let tv = poly::var(n, n - 1);
    let t = poly::mul(&poly::constant(n, int(s)), &tv);
    let at = |tt: &Poly| -> (Matrix, Vec<Poly>) {
        let mut e = vec![vec![Poly::zero(); m]; m];
        let mut c = vec![Poly::zero(); m];
        let mut pw: Vec<Vec<Scalar>> = AffineDiffeo::identity(m).a;
        for k in 0..=m {
            let sign = if k % 2 == 0 { int(1) } else { int(-1) };
            let tk = poly::pow(tt, k, n);
            let tk1 = poly::pow(tt, k + 1, n);
            for i in 0..m {
                let mut bi = Scalar::zero();
                for j in 0..m {
                    let coef = &pw[i][j] * &sign * inv_factorial(k);
                    e[i][j] += &tk.scaled(&coef);
                    bi += &pw[i][j] * &b[j];
                }
                c[i] += &tk1.scaled(&(-(&sign * bi * inv_factorial(k + 1))));
            }
            pw = (0..m)
                .map(|i| (0..m).map(|j| (0..m).map(|l| &pw[i][l] * &a[l][j]).sum()).collect())
                .collect();
        }
        (e, c)
    };
    let (mm, c) = at(&t);
    let (inv_m, inv_c) = at(&-&t);
    AffineMap { m: mm, c, inv_m, inv_c }
}

fn lift(dims: &Dims, u: &Mv) -> Mv {
    u.map_keys(|k| {
        let mut mono = k.mono.clone();
        mono.resize(dims.nvars() + 1, 0);
        MvKey { wedge: k.wedge, mono }
    })
}

/// `(H_t, π_t)` with `π_t = numerator / denominator(t)`, elements over the
/// coordinates plus a final parameter `t`.
#[derive(Debug, Clone)]
pub struct FlowCurve {
    pub dims: Dims,
    pub x: Mv,
    pub b: Form,
    pub h: Form,
    pub numerator: Mv,
    pub denominator: Poly,
    /// `C_t`, so that `π_t = (ψ_t)_* e^{C_t} π` with `ψ_t` the flow of `−X`.
    pub c: Form,
    map: AffineMap,
}

/// Integral curve of the gauge field of `(B, X)` through `(H, π)`:
/// `H_t = H − t dB`, `π_t = (ψ_t)_* e^{C_t} π` where `ψ_t` is the flow of
/// `−X` and `C_t = ∫_0^t ψ_s^*(B + ι_X H − s ι_X dB) ds`.
pub fn flow_curve(dims: &Dims, b: &Form, x: &Mv, h: &Form, pi: &Mv) -> Result<FlowCurve> {
    if dims.fiber != 0 || dims.params != 0 {
        return Err(Error::arg("flow curves live on a plain ℝ^m"));
    }
    for u in [b, x, h, pi] {
        polygeo::check_member(dims, u)?;
    }
    let (a, bv) = affine_parts(dims, x)
        .filter(|(a, _)| is_nilpotent(a))
        .ok_or_else(|| Error::Unsupported("vector field without a polynomial flow".into()))?;
    let dt = dims.with_params(1);
    let n = dt.nvars();
    let (b, x, h, pi) = (lift(dims, b), lift(dims, x), lift(dims, h), lift(dims, pi));
    let t = poly::var(n, n - 1);
    let map = flow_map(&dt, &a, &bv, 1);
    let db = de_rham(&dt, &b);
    let integrand_at_t = &(&b + &interior(&x, &h)) - &polygeo::scale_by_poly(&interior(&x, &db), &t);
    let g = map.pullback(&dt, &integrand_at_t);
    let c = integrate_t(&dt, &g);
    let (num, den) = e_b_pi_fraction(&dt, &c, &pi)?;
    let numerator = map.pushforward(&dt, &num);
    let h_t = &h - &polygeo::scale_by_poly(&db, &t);
    Ok(FlowCurve {
        dims: dt,
        x,
        b,
        h: h_t,
        numerator,
        denominator: den,
        c,
        map,
    })
}

fn integrate_t(dims: &Dims, w: &Form) -> Form {
    let n = dims.nvars();
    w.linear_map(|k| {
        let p = poly::integrate(&Poly::basis(k.mono.clone()), n - 1);
        term(p, k.wedge)
    })
}

fn d_dt(dims: &Dims, u: &Mv) -> Mv {
    polygeo::coeff_deriv(u, dims.nvars() - 1)
}

fn drop_t(dims: &Dims, u: &Mv) -> Mv {
    u.map_keys(|k| MvKey {
        wedge: k.wedge,
        mono: k.mono[..dims.nvars() - 1].to_vec(),
    })
}

fn at_t(dims: &Dims, u: &Mv, t: &Scalar) -> Mv {
    let n = dims.nvars();
    let mut out = Mv::zero();
    for (k, c) in u.iter() {
        let p = poly::eval_var(&Poly::term(k.mono.clone(), c.clone()), n - 1, t);
        out += &term(p, k.wedge);
    }
    drop_t(dims, &out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveCoefficient {
    pub power: u32,
    pub value: Mv,
}

impl FlowCurve {
    pub fn base_dims(&self) -> Dims {
        Dims {
            params: self.dims.params - 1,
            ..self.dims
        }
    }

    fn denominator_at(&self, t: &Scalar) -> Result<Scalar> {
        let q = poly::eval_var(&self.denominator, self.dims.nvars() - 1, t);
        match poly::constant_value(&q) {
            Some(v) if !v.is_zero() => Ok(v),
            _ => Err(Error::OutOfCategory(format!("the curve is not defined at t = {}", t))),
        }
    }

    pub fn at(&self, t: &Scalar) -> Result<(Form, Mv)> {
        let q = self.denominator_at(t)?;
        Ok((
            at_t(&self.dims, &self.h, t),
            at_t(&self.dims, &self.numerator, t).scaled(&q.recip()),
        ))
    }

    /// `d/dt` at `t = 0`.
    pub fn velocity_at_zero(&self) -> Result<(Form, Mv)> {
        let zero = Scalar::zero();
        let q0 = self.denominator_at(&zero)?;
        let dq = poly::deriv(&self.denominator, self.dims.nvars() - 1);
        let dq0 = poly::constant_value(&poly::eval_var(&dq, self.dims.nvars() - 1, &zero)).unwrap_or_default();
        let n0 = at_t(&self.dims, &self.numerator, &zero);
        let dn0 = at_t(&self.dims, &d_dt(&self.dims, &self.numerator), &zero);
        let v = &dn0.scaled(&q0) - &n0.scaled(&dq0);
        Ok((
            at_t(&self.dims, &d_dt(&self.dims, &self.h), &zero),
            v.scaled(&(&q0 * &q0).recip()),
        ))
    }

    /// Residual of `dπ_t/dt = [X, π_t] + ∧²π̃_t((ψ_t^{-1})^* dC_t/dt)` and
    /// `dH_t/dt = −dB`, cleared of denominators.
    pub fn ode_residual(&self) -> Result<(Form, Mv)> {
        let d = &self.dims;
        let n = d.nvars();
        let q = &self.denominator;
        let dq = poly::deriv(q, n - 1);
        let num = &self.numerator;
        let lhs = &polygeo::scale_by_poly(&d_dt(d, num), q) - &polygeo::scale_by_poly(num, &dq);
        let lie = Schouten { dims: *d }.bracket(&self.x, num);
        let cdot = self.map.push_form(d, &d_dt(d, &self.c));
        let rhs = &polygeo::scale_by_poly(&lie, q) + &wedge_pi_tilde(d, num, 2, &cdot)?;
        let hres = &d_dt(d, &self.h) + &de_rham(d, &self.b);
        Ok((hres, &lhs - &rhs))
    }

    pub fn satisfies_ode(&self) -> Result<bool> {
        let (a, b) = self.ode_residual()?;
        Ok(a.is_zero() && b.is_zero())
    }

    /// Coefficients of `t^k` in an element over the curve's dims.
    pub fn by_power(&self, u: &Mv) -> Vec<CurveCoefficient> {
        let n = self.dims.nvars();
        let mut powers: std::collections::BTreeMap<u32, Mv> = std::collections::BTreeMap::new();
        for (k, c) in u.iter() {
            let key = MvKey {
                wedge: k.wedge,
                mono: k.mono[..n - 1].to_vec(),
            };
            powers.entry(k.mono[n - 1]).or_default().add_term(key, c.clone());
        }
        powers
            .into_iter()
            .map(|(power, value)| CurveCoefficient { power, value })
            .collect()
    }

    pub fn denominator_by_power(&self) -> Vec<(u32, Scalar)> {
        let n = self.dims.nvars();
        self.denominator
            .iter()
            .map(|(m, c)| (m[n - 1], c.clone()))
            .collect()
    }

    pub fn is_polynomial(&self) -> bool {
        poly::constant_value(&self.denominator).map(|v| v.is_one()).unwrap_or(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::ratio;
    use crate::polygeo::{coord, wedge_of};
    use crate::sample;
    use crate::tpois::{gauge_y, is_mc};

    #[test]
    fn graph_transform_examples() {
        let d = Dims::plain(2);
        let pi = wedge_of(&d, &[0, 1]);
        assert_eq!(e_b_pi(&d, &Form::zero(), &pi).unwrap(), pi);
        let b = wedge_of(&d, &[0, 1]).scaled(&ratio(1, 2));
        let r = e_b_pi(&d, &b, &pi).unwrap();
        assert_eq!(r, pi.scaled(&int(2)));
        let d4 = Dims::plain(4);
        let pi4 = wedge_of(&d4, &[0, 1]);
        assert_eq!(e_b_pi(&d4, &wedge_of(&d4, &[2, 3]), &pi4).unwrap(), pi4);
        // 1 + ΠB = 0 here
        assert!(e_b_pi(&d, &wedge_of(&d, &[0, 1]), &pi).is_err());
        let xb = polygeo::scale_by_poly(&wedge_of(&d, &[0, 1]), &poly::var(2, 0));
        assert!(matches!(e_b_pi(&d, &xb, &pi), Err(Error::OutOfCategory(_))));
    }

    #[test]
    fn affine_action() {
        let d = Dims::plain(3);
        let mut r = sample::rng(2);
        let h = sample::form(&mut r, &d, 3, 1, 2);
        let pi = sample::poisson_bivector(&mut r, &d, 0, 1);
        let id = AffineDiffeo::identity(3);
        assert_eq!(group_act(&d, &Form::zero(), &id, &h, &pi).unwrap(), (h.clone(), pi.clone()));
        let phi = AffineDiffeo::new(sample::unimodular(&mut r, 3), vec![int(1), int(0), int(-2)]).unwrap();
        assert_eq!(phi.compose(&phi.inverse()), id);
        let psi = AffineDiffeo::new(sample::unimodular(&mut r, 3), vec![int(0), int(2), int(1)]).unwrap();
        let b1 = wedge_of(&d, &[0, 2]);
        let b2 = Form::zero();
        let once = group_act(&d, &b2, &psi, &h, &pi).unwrap();
        let twice = group_act(&d, &b1, &phi, &once.0, &once.1).unwrap();
        let (b, g) = group_mul(&d, (&b1, &phi), (&b2, &psi));
        assert_eq!(group_act(&d, &b, &g, &h, &pi).unwrap(), twice);
        assert!(is_mc(&d, &twice.0, &twice.1).unwrap());
    }

    #[test]
    fn curves() {
        let d = Dims::plain(3);
        let mut r = sample::rng(9);
        for with_x in [false, true] {
            for _ in 0..3 {
                let (b, x, h, pi) = sample::flow_case(&mut r, 2, with_x);
                let c = flow_curve(&d, &b, &x, &h, &pi).unwrap();
                assert!(c.satisfies_ode().unwrap());
                assert_eq!(c.at(&Scalar::zero()).unwrap(), (h.clone(), pi.clone()));
                assert_eq!(c.velocity_at_zero().unwrap(), gauge_y(&d, &b, &x, &h, &pi).unwrap());
                if !with_x {
                    let t = ratio(1, 7);
                    let (ht, pt) = c.at(&t).unwrap();
                    assert_eq!(ht, &h - &de_rham(&d, &b).scaled(&t));
                    assert_eq!(pt, e_b_pi(&d, &b.scaled(&t), &pi).unwrap());
                }
            }
        }
        let x = polygeo::scale_by_poly(&coord(&d, 0), &poly::var(3, 0));
        assert!(matches!(
            flow_curve(&d, &Form::zero(), &x, &Form::zero(), &Mv::zero()),
            Err(Error::Unsupported(_))
        ));
    }
}
