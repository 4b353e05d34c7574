//! Seeded random elements: coefficients in `−3..=3`, bounded degrees.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graded::{int, Elem, Scalar};
use crate::poly::{self, Poly};
use crate::polygeo::{self, Dims, Form, Mv, MvKey};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for sample `index` of a run, so samples can be drawn
/// in parallel and still match a sequential run.
pub fn rng_for(seed: u64, index: usize) -> SampleRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index as u64 + 1);
    r
}

pub fn coef(r: &mut SampleRng) -> Scalar {
    int(r.gen_range(-3..=3))
}

pub fn nonzero_coef(r: &mut SampleRng) -> Scalar {
    let c: i64 = r.gen_range(1..=3);
    int(if r.gen_bool(0.5) { c } else { -c })
}

/// A polynomial in the first `coords` of `nvars` variables.
pub fn poly(r: &mut SampleRng, nvars: usize, coords: usize, max_deg: u32, terms: usize) -> Poly {
    let monos = polygeo::monomials(coords, max_deg);
    let mut out = Poly::zero();
    for _ in 0..terms {
        let mut m = monos.choose(r).expect("at least the constant monomial").clone();
        m.resize(nvars, 0);
        out.add_term(m, coef(r));
    }
    out
}

fn subsets(n: usize, k: usize) -> Vec<u32> {
    (0..(1u32 << n)).filter(|w| w.count_ones() as usize == k).collect()
}

/// Homogeneous element of the given arity (form degree), polynomial
/// coefficients of degree at most `max_deg` in the coordinates.
pub fn homogeneous(r: &mut SampleRng, dims: &Dims, arity: usize, max_deg: u32, terms: usize) -> Mv {
    let wedges = subsets(dims.coords(), arity);
    let monos = polygeo::monomials(dims.coords(), max_deg);
    let mut out = Mv::zero();
    if wedges.is_empty() {
        return out;
    }
    for _ in 0..terms {
        let mut mono = monos.choose(r).expect("nonempty").clone();
        mono.resize(dims.nvars(), 0);
        let wedge = *wedges.choose(r).expect("nonempty");
        out.add_term(MvKey { wedge, mono }, coef(r));
    }
    out
}

pub fn form(r: &mut SampleRng, dims: &Dims, degree: usize, max_deg: u32, terms: usize) -> Form {
    homogeneous(r, dims, degree, max_deg, terms)
}

/// Multivector with every key of polynomial degree `≤ max_pol`
/// (`deg_p(coefficient) − #∂p`).
pub fn pol_bounded(r: &mut SampleRng, dims: &Dims, arity: usize, max_pol: i64, max_deg: u32, terms: usize) -> Mv {
    let u = homogeneous(r, dims, arity, max_deg, terms * 2);
    let mut out = u.filter(|k| polygeo::pol_degree_key(dims, k) <= max_pol);
    out = Elem::from_terms(out.iter().take(terms).map(|(k, c)| (k.clone(), c.clone())));
    out
}

/// A constant vector with small integer entries.
pub fn const_vector(r: &mut SampleRng, dims: &Dims) -> Mv {
    let mut out = Mv::zero();
    for i in 0..dims.coords() {
        out.add_scaled(&polygeo::coord(dims, i), &coef(r));
    }
    out
}

/// `f · u ∧ w` with `u, w` constant: Poisson for every polynomial `f`.
pub fn poisson_bivector(r: &mut SampleRng, dims: &Dims, max_deg: u32, terms: usize) -> Mv {
    let u = const_vector(r, dims);
    let w = const_vector(r, dims);
    let f = poly(r, dims.nvars(), dims.coords(), max_deg, terms);
    polygeo::scale_by_poly(&polygeo::wedge(&u, &w), &f)
}

pub fn pick<T: Clone>(r: &mut SampleRng, items: &[T]) -> T {
    items.choose(r).expect("nonempty choice").clone()
}

pub fn range(r: &mut SampleRng, lo: usize, hi: usize) -> usize {
    r.gen_range(lo..=hi)
}

pub fn flip(r: &mut SampleRng) -> bool {
    r.gen_bool(0.5)
}

/// Constant invertible-over-ℤ-ish matrix: unit upper triangular times a
/// signed permutation, so the inverse stays integral.
pub fn unimodular(r: &mut SampleRng, n: usize) -> Vec<Vec<Scalar>> {
    let mut m: Vec<Vec<Scalar>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { int(1) } else if j > i { coef(r) } else { int(0) })
                .collect()
        })
        .collect();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(r);
    m = perm.iter().map(|&i| m[i].clone()).collect();
    if flip(r) && n > 0 {
        m[0] = m[0].iter().map(|c| -c).collect();
    }
    m
}

pub fn const_poly(dims: &Dims, c: Scalar) -> Poly {
    poly::constant(dims.nvars(), c)
}

/// Gauge data on `ℝ³` whose flow curve stays polynomial in `x`: a constant
/// bivector `π = u ∧ w`, `B = B_0 + θ ∧ γ` with `B_0` constant and `θ` the
/// constant covector killing `u, w`, and `X` zero or a constant vector in
/// the span of `u, w`. Returns `(B, X, H, π)`; `(H, π)` is Maurer-Cartan.
pub fn flow_case(r: &mut SampleRng, max_deg: u32, with_x: bool) -> (Form, Mv, Form, Mv) {
    let dims = Dims::plain(3);
    let (u, w) = loop {
        let u = const_vector(r, &dims);
        let w = const_vector(r, &dims);
        if !polygeo::wedge(&u, &w).is_zero() {
            break (u, w);
        }
    };
    let pi = polygeo::wedge(&u, &w);
    let comp = |v: &Mv, i: usize| polygeo::coefficient(v, 1 << i).iter().map(|(_, c)| c.clone()).sum::<Scalar>();
    let uc: Vec<Scalar> = (0..3).map(|i| comp(&u, i)).collect();
    let wc: Vec<Scalar> = (0..3).map(|i| comp(&w, i)).collect();
    let cross = [
        &uc[1] * &wc[2] - &uc[2] * &wc[1],
        &uc[2] * &wc[0] - &uc[0] * &wc[2],
        &uc[0] * &wc[1] - &uc[1] * &wc[0],
    ];
    let mut theta = Form::zero();
    for (i, c) in cross.iter().enumerate() {
        theta.add_scaled(&polygeo::coord(&dims, i), c);
    }
    let gamma = homogeneous(r, &dims, 1, max_deg, 3);
    let b0 = homogeneous(r, &dims, 2, 0, 2);
    let b = &b0 + &polygeo::wedge(&theta, &gamma);
    let h = homogeneous(r, &dims, 3, max_deg, 3);
    let x = if with_x {
        loop {
            let v = &u.scaled(&coef(r)) + &w.scaled(&coef(r));
            if !v.is_zero() {
                break v;
            }
        }
    } else {
        Mv::zero()
    };
    (b, x, h, pi)
}

/// A section `Σ_j f_j(x) ∂p_j` of the normal bundle of `{p = 0}`.
pub fn section(r: &mut SampleRng, dims: &Dims, max_deg: u32, terms: usize) -> Mv {
    let mut out = Mv::zero();
    for _ in 0..terms {
        let j = range(r, 0, dims.fiber - 1);
        let f = poly(r, dims.nvars(), dims.base, max_deg, 1);
        out += &polygeo::scale_by_poly(&polygeo::coord(dims, dims.base + j), &f);
    }
    out
}

/// Poisson bivector `f · u ∧ w` with `P(π) = 0` (multiplied by `p_1` when
/// needed).
pub fn flat_poisson(r: &mut SampleRng, dims: &Dims, max_deg: u32, terms: usize) -> Mv {
    let pi = poisson_bivector(r, dims, max_deg, terms);
    if polygeo::coiso_projection(dims, &pi).is_zero() {
        pi
    } else {
        polygeo::scale_by_poly(&pi, &poly::var(dims.nvars(), dims.base))
    }
}

/// Homogeneous element built from keys of one degree in `pool`.
pub fn from_pool<K: crate::graded::BasisKey>(r: &mut SampleRng, pool: &[K], degree: impl Fn(&K) -> i64) -> Elem<K> {
    let k0 = pick(r, pool);
    let d = degree(&k0);
    let same: Vec<&K> = pool.iter().filter(|k| degree(k) == d).collect();
    let mut e = Elem::term(k0.clone(), nonzero_coef(r));
    for _ in 0..range(r, 0, 2) {
        let k = (*same.choose(r).expect("contains k0")).clone();
        e.add_term(k, coef(r));
    }
    if e.is_zero() {
        e = Elem::basis(k0);
    }
    e
}
