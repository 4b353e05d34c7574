//! Coordinate model of `T*[2]T*[1]ℝ^m`: polynomials in even `x_j` (weight
//! 0), `P_j` (weight 2) and odd `p_j`, `v_j` (weight 1) with the weight −2
//! Poisson bracket. With `Δ = Σ P_i v_i` and evaluation on the base as
//! projection it gives V-data whose big algebra reproduces the twisted
//! Poisson brackets, and serves as an oracle for them.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gla::GradedLieAlgebra;
use crate::graded::{int, Elem};
use crate::linfty::{Filtration, LInftyOne};
use crate::poly::Mono;
use crate::polygeo::{self, left_deriv, mono_deriv, right_deriv, wedge_sign, Dims, Form, Mv, MvKey};
use crate::vdata::{join_big, split_big, BigKey, VData};

/// Even part laid out as `x_1..x_m, P_1..P_m`, then parameters; odd part a
/// bit mask with `p_j` at bit `j` and `v_j` at bit `m + j`, multiplied in
/// increasing bit order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SKey {
    pub even: Mono,
    pub odd: u32,
}

pub type SuperPoly = Elem<SKey>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuperLie {
    pub m: usize,
    pub params: usize,
}

impl SuperLie {
    pub fn new(dims: &Dims) -> Result<Self> {
        if dims.fiber != 0 || dims.base > 15 {
            return Err(Error::arg("the coordinate model needs a plain ℝ^m, m ≤ 15"));
        }
        Ok(SuperLie {
            m: dims.base,
            params: dims.params,
        })
    }

    pub fn nvars(&self) -> usize {
        2 * self.m + self.params
    }

    pub fn weight(&self, k: &SKey) -> i64 {
        let p_deg: u32 = k.even[self.m..2 * self.m].iter().sum();
        k.odd.count_ones() as i64 + 2 * p_deg as i64
    }

    fn mask(&self) -> u32 {
        (1u32 << self.m) - 1
    }

    pub fn x(&self, j: usize) -> SuperPoly {
        self.even_var(j)
    }

    pub fn big_p(&self, j: usize) -> SuperPoly {
        self.even_var(self.m + j)
    }

    fn even_var(&self, i: usize) -> SuperPoly {
        let mut even = vec![0; self.nvars()];
        even[i] = 1;
        Elem::basis(SKey { even, odd: 0 })
    }

    pub fn p(&self, j: usize) -> SuperPoly {
        Elem::basis(SKey {
            even: vec![0; self.nvars()],
            odd: 1 << j,
        })
    }

    pub fn v(&self, j: usize) -> SuperPoly {
        Elem::basis(SKey {
            even: vec![0; self.nvars()],
            odd: 1 << (self.m + j),
        })
    }

    pub fn one(&self) -> SuperPoly {
        Elem::basis(SKey {
            even: vec![0; self.nvars()],
            odd: 0,
        })
    }

    /// `Σ_i P_i v_i`
    pub fn delta(&self) -> SuperPoly {
        let mut out = SuperPoly::zero();
        for i in 0..self.m {
            out += &mul(&self.big_p(i), &self.v(i));
        }
        out
    }

    pub fn check(&self, f: &SuperPoly) -> Result<()> {
        if f.keys().any(|k| k.even.len() != self.nvars() || k.odd >> (2 * self.m) != 0) {
            return Err(Error::arg("super polynomial of the wrong dimension"));
        }
        Ok(())
    }
}

/// Graded-commutative product.
pub fn mul(f: &SuperPoly, g: &SuperPoly) -> SuperPoly {
    let mut out = SuperPoly::zero();
    for (a, ca) in f.iter() {
        for (b, cb) in g.iter() {
            if let Some(s) = wedge_sign(a.odd, b.odd) {
                out.add_term(
                    SKey {
                        even: crate::poly::mono_mul(&a.even, &b.even),
                        odd: a.odd | b.odd,
                    },
                    ca * cb * int(s),
                );
            }
        }
    }
    out
}

fn push(out: &mut SuperPoly, even: Mono, a: u32, b: u32, c: &crate::graded::Scalar) {
    if let Some(s) = wedge_sign(a, b) {
        out.add_term(SKey { even, odd: a | b }, c * int(s));
    }
}

impl GradedLieAlgebra for SuperLie {
    type Key = SKey;

    fn degree(&self, key: &SKey) -> i64 {
        self.weight(key) - 2
    }

    /// `Σ_j ∂_r f/∂P_j ∂_l g/∂x_j − ∂_r f/∂x_j ∂_l g/∂P_j
    ///  + ∂_r f/∂p_j ∂_l g/∂v_j + ∂_r f/∂v_j ∂_l g/∂p_j`
    fn bracket(&self, f: &SuperPoly, g: &SuperPoly) -> SuperPoly {
        let m = self.m;
        let mut out = SuperPoly::zero();
        for (a, ca) in f.iter() {
            for (b, cb) in g.iter() {
                let c = ca * cb;
                for j in 0..m {
                    if let (Some((fa, ea)), Some((gb, eb))) = (mono_deriv(&a.even, m + j), mono_deriv(&b.even, j)) {
                        push(&mut out, crate::poly::mono_mul(&fa, &gb), a.odd, b.odd, &(&c * int(ea * eb)));
                    }
                    if let (Some((fa, ea)), Some((gb, eb))) = (mono_deriv(&a.even, j), mono_deriv(&b.even, m + j)) {
                        push(&mut out, crate::poly::mono_mul(&fa, &gb), a.odd, b.odd, &(&c * int(-ea * eb)));
                    }
                    for (left, right) in [(j, m + j), (m + j, j)] {
                        if let (Some((sa, ra)), Some((sb, rb))) = (right_deriv(a.odd, left), left_deriv(b.odd, right)) {
                            push(
                                &mut out,
                                crate::poly::mono_mul(&a.even, &b.even),
                                ra,
                                rb,
                                &(&c * int(sa * sb)),
                            );
                        }
                    }
                }
            }
        }
        out
    }
}

pub fn super_bracket(lie: &SuperLie, f: &SuperPoly, g: &SuperPoly) -> Result<SuperPoly> {
    lie.check(f)?;
    lie.check(g)?;
    Ok(lie.bracket(f, g))
}

/// Terms free of `P` and `v`.
pub fn on_base(lie: &SuperLie, k: &SKey) -> bool {
    k.odd >> lie.m == 0 && k.even[lie.m..2 * lie.m].iter().all(|e| *e == 0)
}

/// Set `P = v = 0`.
pub fn eval_on_base(lie: &SuperLie, f: &SuperPoly) -> SuperPoly {
    f.filter(|k| on_base(lie, k))
}

fn lift_even(lie: &SuperLie, mono: &Mono) -> Mono {
    let mut even = vec![0; lie.nvars()];
    even[..lie.m].copy_from_slice(&mono[..lie.m]);
    even[2 * lie.m..].copy_from_slice(&mono[lie.m..]);
    even
}

fn drop_even(lie: &SuperLie, even: &Mono) -> Mono {
    let mut mono = even[..lie.m].to_vec();
    mono.extend_from_slice(&even[2 * lie.m..]);
    mono
}

/// `∂_j ↦ p_j`
pub fn mv_to_super(lie: &SuperLie, u: &Mv) -> SuperPoly {
    u.map_keys(|k| SKey {
        even: lift_even(lie, &k.mono),
        odd: k.wedge,
    })
}

/// `dx_j ↦ v_j`
pub fn form_to_super(lie: &SuperLie, w: &Form) -> SuperPoly {
    w.map_keys(|k| SKey {
        even: lift_even(lie, &k.mono),
        odd: k.wedge << lie.m,
    })
}

fn free_of_p(lie: &SuperLie, k: &SKey) -> bool {
    k.even[lie.m..2 * lie.m].iter().all(|e| *e == 0)
}

pub fn super_to_mv(lie: &SuperLie, f: &SuperPoly) -> Result<Mv> {
    if !f.keys().all(|k| on_base(lie, k)) {
        return Err(Error::Validation("not a multivector field".into()));
    }
    Ok(f.map_keys(|k| MvKey {
        wedge: k.odd,
        mono: drop_even(lie, &k.even),
    }))
}

pub fn super_to_form(lie: &SuperLie, f: &SuperPoly) -> Result<Form> {
    if !f.keys().all(|k| free_of_p(lie, k) && k.odd & lie.mask() == 0) {
        return Err(Error::Validation("not a differential form".into()));
    }
    Ok(f.map_keys(|k| MvKey {
        wedge: k.odd >> lie.m,
        mono: drop_even(lie, &k.even),
    }))
}

/// Filtration degree `#p − #v`; brackets consume `p` and `v` in pairs.
pub fn filtration_degree(lie: &SuperLie, k: &SKey) -> i64 {
    (k.odd & lie.mask()).count_ones() as i64 - (k.odd >> lie.m).count_ones() as i64
}

/// Keys with `x`- and `P`-degree at most `max_deg` each, all odd parts.
pub fn basis_sample(lie: &SuperLie, max_deg: u32) -> Vec<SKey> {
    let xs = polygeo::monomials(lie.m, max_deg);
    let ps = polygeo::monomials(lie.m, max_deg);
    let mut out = Vec::new();
    for odd in 0..(1u32 << (2 * lie.m)) {
        for x in &xs {
            for p in &ps {
                let mut even = x.clone();
                even.extend_from_slice(p);
                even.resize(lie.nvars(), 0);
                out.push(SKey { even, odd });
            }
        }
    }
    out
}

/// `(C(T*[2]T*[1]ℝ^m)[2], C(T*[1]ℝ^m)[2], eval_on_base, Σ P_i v_i)`.
pub fn qgeom_vdata(dims: &Dims, sample_degree: Option<u32>) -> Result<VData<SuperLie>> {
    let lie = SuperLie::new(dims)?;
    let sample = sample_degree.map(|d| basis_sample(&lie, d)).unwrap_or_default();
    let (l1, l2, l3) = (lie, lie, lie);
    Ok(VData {
        lie: Arc::new(lie),
        in_a: Arc::new(move |k: &SKey| on_base(&l1, k)),
        proj: Arc::new(move |k: &SKey| {
            if on_base(&l2, k) {
                Elem::basis(k.clone())
            } else {
                Elem::zero()
            }
        }),
        delta: lie.delta(),
        filtration: Some(Filtration::new(move |k: &SKey| filtration_degree(&l3, k), 0, lie.m as i64)),
        nilpotency: None,
        sample,
    })
}

/// Derived bracket of pairs `(form, multivector)`: forms enter through
/// `L[1]`, multivector fields through `𝔞`, the big algebra is evaluated in
/// the coordinate model and the result translated back.
pub fn oracle_bracket(dims: &Dims, args: &[(Form, Mv)]) -> Result<(Form, Mv)> {
    let v = qgeom_vdata(dims, None)?;
    let lie = *v.lie;
    for (w, u) in args {
        polygeo::check_member(dims, w)?;
        polygeo::check_member(dims, u)?;
    }
    let big = v.big_algebra()?;
    let elems: Vec<Elem<BigKey<SKey>>> = args
        .iter()
        .map(|(w, u)| join_big(&form_to_super(&lie, w), &mv_to_super(&lie, u)))
        .collect();
    let out = big.m(&elems);
    let (l, a) = split_big(&out);
    let form = super_to_form(&lie, &l).map_err(|_| Error::Validation(format!("oracle produced {:?} outside the form image", l)))?;
    let mv = super_to_mv(&lie, &a)?;
    Ok((form, mv))
}
