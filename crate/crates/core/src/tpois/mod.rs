//! The twisted Poisson L∞[1]-algebra `𝔏 = Ω^{≥1}[3] ⊕ χ[2]` on `ℝ^m`, its
//! Maurer-Cartan locus and gauge fields, the affine `Ω² ⋊ Diff` action and
//! flow curves.

mod flow;

pub use flow::*;

use crate::error::{Error, Result};
use crate::graded::{factorial, sign_scalar, Elem};
use crate::linfty::{gauge_field, koszul_sort, mc_residual, multilinear, LInftyOne, MCReport};
use crate::polygeo::{self, de_rham, interior, multi_sharp, Dims, Form, Mv, MvKey, Schouten};
use crate::gla::GradedLieAlgebra;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TKey {
    Form(MvKey),
    Mv(MvKey),
}

impl TKey {
    pub fn inner(&self) -> &MvKey {
        match self {
            TKey::Form(k) | TKey::Mv(k) => k,
        }
    }

    pub fn is_form(&self) -> bool {
        matches!(self, TKey::Form(_))
    }
}

pub type TElem = Elem<TKey>;

pub fn join(form: &Form, mv: &Mv) -> TElem {
    let mut out = form.map_keys(|k| TKey::Form(k.clone()));
    out += &mv.map_keys(|k| TKey::Mv(k.clone()));
    out
}

pub fn split(x: &TElem) -> (Form, Mv) {
    let f = x.filter(|k| k.is_form()).map_keys(|k| k.inner().clone());
    let u = x.filter(|k| !k.is_form()).map_keys(|k| k.inner().clone());
    (f, u)
}

/// `(1/n!)(π^♯ ∧ .. ∧ π^♯) w` for an `n`-form `w`.
pub fn wedge_pi_tilde(dims: &Dims, pi: &Mv, n: usize, w: &Form) -> Result<Mv> {
    let pis = vec![pi.clone(); n];
    Ok(multi_sharp(dims, &pis, w)?.scaled(&factorial(n).recip()))
}

/// `𝔏` on `ℝ^m`: forms of degree `q ≥ 1` sit in degree `q − 3`, multivector
/// fields of arity `s` in degree `s − 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TPois {
    pub dims: Dims,
}

impl TPois {
    pub fn new(dims: Dims) -> Result<Self> {
        if dims.fiber != 0 {
            return Err(Error::arg("the twisted Poisson algebra lives on a plain ℝ^m"));
        }
        Ok(TPois { dims })
    }

    pub fn check(&self, x: &TElem) -> Result<()> {
        let (f, u) = split(x);
        polygeo::check_member(&self.dims, &f)?;
        polygeo::check_member(&self.dims, &u)?;
        if f.keys().any(|k| k.wedge == 0) {
            return Err(Error::arg("0-forms are not part of the algebra"));
        }
        Ok(())
    }

    /// Brackets with the form (if any) first.
    fn eval_sorted(&self, comps: &[(bool, Elem<MvKey>)]) -> TElem {
        let forms = comps.iter().take_while(|(f, _)| *f).count();
        let n = comps.len();
        match (n, forms) {
            (1, 1) => join(&-de_rham(&self.dims, &comps[0].1), &Mv::zero()),
            (1, 0) => TElem::zero(),
            (2, 0) => {
                let (a, b) = (&comps[0].1, &comps[1].1);
                let a1 = polygeo::arity(a).unwrap_or(0) as i64;
                let s = Schouten { dims: self.dims }.bracket(a, b);
                join(&Form::zero(), &s.scaled(&sign_scalar(a1 + 1)))
            }
            (_, 1) => {
                let h = &comps[0].1;
                let pis: Vec<Mv> = comps[1..].iter().map(|(_, e)| e.clone()).collect();
                let k = pis.len() as i64;
                let e: i64 = pis
                    .iter()
                    .enumerate()
                    .map(|(i, p)| polygeo::arity(p).unwrap_or(0) as i64 * (k - 1 - i as i64))
                    .sum();
                match multi_sharp(&self.dims, &pis, h) {
                    Ok(r) => join(&Form::zero(), &r.scaled(&sign_scalar(e))),
                    Err(_) => TElem::zero(),
                }
            }
            _ => TElem::zero(),
        }
    }
}

impl LInftyOne for TPois {
    type Key = TKey;

    fn degree(&self, key: &TKey) -> i64 {
        match key {
            TKey::Form(k) => k.arity() as i64 - 3,
            TKey::Mv(k) => k.arity() as i64 - 2,
        }
    }

    fn curvature(&self) -> Option<TElem> {
        None
    }

    fn bracket(&self, args: &[TElem]) -> TElem {
        multilinear(
            args,
            |k| (k.is_form(), self.degree(k)),
            |parts| {
                let (sorted, eps) = koszul_sort(parts, |p| p.0 .1, |p| if p.0 .0 { 0 } else { 1 });
                let comps: Vec<(bool, Elem<MvKey>)> = sorted
                    .iter()
                    .map(|((f, _), e)| (*f, e.map_keys(|k| k.inner().clone())))
                    .collect();
                self.eval_sorted(&comps).scaled(&eps)
            },
        )
    }

    /// A nonzero bracket has at most one form, of degree equal to the
    /// number of multivector entries.
    fn termination_bound(&self) -> Option<usize> {
        Some((self.dims.base + 1).max(2))
    }
}

pub fn tpois_bracket(dims: &Dims, args: &[TElem]) -> Result<TElem> {
    let t = TPois::new(*dims)?;
    for a in args {
        t.check(a)?;
    }
    Ok(t.m(args))
}

/// Maurer-Cartan residual of `(H, π)`, i.e. `(−dH, ∧³π̃(H) − ½[π, π])`.
pub fn tpois_mc_residual(dims: &Dims, h: &Form, pi: &Mv) -> Result<(Form, Mv)> {
    let sq = polygeo::schouten(dims, pi, pi)?;
    let t = wedge_pi_tilde(dims, pi, 3, h)?;
    Ok((-de_rham(dims, h), &t - &sq.scaled(&crate::graded::ratio(1, 2))))
}

/// The Maurer-Cartan series of `𝔏` summed bracket by bracket.
pub fn series_mc_residual(dims: &Dims, h: &Form, pi: &Mv) -> Result<MCReport<TKey>> {
    let t = TPois::new(*dims)?;
    let x = join(h, pi);
    t.check(&x)?;
    mc_residual(&t, &x, 16)
}

/// Gauge vector field of `(B, X)` at `(H, π)`:
/// `(−dB, [X, π] + ∧²π̃(B + ι_X H))`.
pub fn gauge_y(dims: &Dims, b: &Form, x: &Mv, h: &Form, pi: &Mv) -> Result<(Form, Mv)> {
    let lx = polygeo::schouten(dims, x, pi)?;
    let c = b + &interior(x, h);
    let t = wedge_pi_tilde(dims, pi, 2, &c)?;
    Ok((-de_rham(dims, b), &lx + &t))
}

/// `gauge_y` through the generic series on `𝔏`.
pub fn series_gauge_y(dims: &Dims, b: &Form, x: &Mv, h: &Form, pi: &Mv) -> Result<(Form, Mv)> {
    let t = TPois::new(*dims)?;
    let z = join(b, x);
    let m = join(h, pi);
    t.check(&z)?;
    t.check(&m)?;
    let r = gauge_field(&t, &z, &m, 16)?;
    Ok(split(&r.residual))
}

/// Infinitesimal action of `(B, X)` at `(H, π)`: the derivative of the
/// affine action along `(tB, flow of −X)`, `(d ι_X H − dB, [X, π] + ∧²π̃(B))`.
pub fn action_generator(dims: &Dims, b: &Form, x: &Mv, h: &Form, pi: &Mv) -> Result<(Form, Mv)> {
    let lx = polygeo::schouten(dims, x, pi)?;
    let t = wedge_pi_tilde(dims, pi, 2, b)?;
    let first = &de_rham(dims, &interior(x, h)) - &de_rham(dims, b);
    Ok((first, &lx + &t))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorMatch {
    pub gauge: (Form, Mv),
    pub generator: (Form, Mv),
    pub matches: bool,
}

/// At a Maurer-Cartan point, the action generator of `(B + ι_X H, X)`
/// equals the gauge field of `(B, X)`.
pub fn generator_match(dims: &Dims, b: &Form, x: &Mv, h: &Form, pi: &Mv) -> Result<GeneratorMatch> {
    let (r1, r2) = tpois_mc_residual(dims, h, pi)?;
    if !r1.is_zero() || !r2.is_zero() {
        return Err(Error::NotMaurerCartan {
            residual: format!("{:?}", (r1, r2)),
        });
    }
    let gauge = gauge_y(dims, b, x, h, pi)?;
    let generator = action_generator(dims, &(b + &interior(x, h)), x, h, pi)?;
    let matches = gauge == generator;
    Ok(GeneratorMatch {
        gauge,
        generator,
        matches,
    })
}

/// `d/dε` at `ε = 0` of `tpois_mc_residual` at `(H + εY_H, π + εY_π)`.
pub fn residual_derivative(dims: &Dims, h: &Form, pi: &Mv, dh: &Form, dpi: &Mv) -> Result<(Form, Mv)> {
    let s = Schouten { dims: *dims };
    let sq = &s.bracket(pi, dpi) + &s.bracket(dpi, pi);
    let mut t = wedge_pi_tilde(dims, pi, 3, dh)?;
    let pis = [dpi.clone(), pi.clone(), pi.clone()];
    for r in 0..3 {
        let mut p = pis.clone();
        p.rotate_right(r);
        t += &multi_sharp(dims, &p, h)?.scaled(&factorial(3).recip());
    }
    Ok((-de_rham(dims, dh), &t - &sq.scaled(&crate::graded::ratio(1, 2))))
}

pub fn is_mc(dims: &Dims, h: &Form, pi: &Mv) -> Result<bool> {
    let (a, b) = tpois_mc_residual(dims, h, pi)?;
    Ok(a.is_zero() && b.is_zero())
}
