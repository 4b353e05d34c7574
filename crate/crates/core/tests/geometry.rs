use derbra::graded::{int, ratio};
use derbra::poly;
use derbra::polygeo::{
    self, coord, de_rham, fiber_translate, function, schouten, sharp, term, wedge, wedge_of, Dims, Form, Mv,
};
use derbra::qgeom::oracle_bracket;
use derbra::sample;
use derbra::tpois::{gauge_y, generator_match, is_mc, join, series_gauge_y, split, tpois_bracket, tpois_mc_residual};
use proptest::prelude::*;

fn x(d: &Dims, i: usize) -> Mv {
    function(poly::var(d.nvars(), i))
}

#[test]
fn schouten_examples() {
    let d = Dims::plain(2);
    // [X, f] = X(f)
    assert_eq!(schouten(&d, &coord(&d, 0), &x(&d, 0)).unwrap(), function(poly::one(2)));
    assert_eq!(schouten(&d, &x(&d, 0), &coord(&d, 0)).unwrap(), -function(poly::one(2)));
    let x0_d1 = wedge(&x(&d, 0), &coord(&d, 1));
    assert_eq!(schouten(&d, &coord(&d, 0), &x0_d1).unwrap(), coord(&d, 1));
    assert!(schouten(&d, &wedge_of(&d, &[0, 1]), &wedge_of(&d, &[0, 1])).unwrap().is_zero());
    let e = Dims::plain(3);
    assert!(schouten(&d, &coord(&e, 2), &coord(&d, 0)).is_err());
}

#[test]
fn sharp_and_differential_examples() {
    let d = Dims::plain(2);
    let pi = wedge_of(&d, &[0, 1]);
    let dx0 = wedge_of(&d, &[0]);
    assert_eq!(sharp(&pi, &dx0).unwrap(), coord(&d, 1));
    assert!(sharp(&pi, &pi).is_err());
    let f = term(poly::mul(&poly::var(2, 0), &poly::var(2, 1)), 0);
    let df: Form = &wedge(&x(&d, 1), &wedge_of(&d, &[0])) + &wedge(&x(&d, 0), &wedge_of(&d, &[1]));
    assert_eq!(de_rham(&d, &f), df);
    assert!(de_rham(&d, &df).is_zero());
}

#[test]
fn twisted_poisson_examples() {
    let d = Dims::plain(3);
    let h = wedge_of(&d, &[0, 1, 2]);
    let pi = wedge_of(&d, &[0, 1]);
    assert!(is_mc(&d, &h, &pi).unwrap());
    assert!(is_mc(&d, &Form::zero(), &Mv::zero()).unwrap());
    // adding x1 ∂1∧∂3 breaks integrability
    let bad = &pi + &wedge(&x(&d, 0), &wedge_of(&d, &[0, 2]));
    let (r_form, r_mv) = tpois_mc_residual(&d, &h, &bad).unwrap();
    assert!(r_form.is_zero());
    assert_eq!(r_mv, -wedge_of(&d, &[0, 1, 2]));
    // with H = 0 only the Schouten square remains
    let (_, sq) = tpois_mc_residual(&d, &Form::zero(), &bad).unwrap();
    assert_eq!(sq, -schouten(&d, &bad, &bad).unwrap().scaled(&ratio(1, 2)));
}

#[test]
fn twisted_poisson_binary_brackets() {
    let d = Dims::plain(2);
    let dx0 = wedge_of(&d, &[0]);
    // m_2 of two vector fields is their Lie bracket
    let u = coord(&d, 0);
    let v = wedge(&x(&d, 0), &coord(&d, 1));
    let out = split(&tpois_bracket(&d, &[join(&Form::zero(), &u), join(&Form::zero(), &v)]).unwrap());
    assert!(out.0.is_zero());
    assert_eq!(out.1, coord(&d, 1));
    // forms bracket to zero among themselves
    let w = split(&tpois_bracket(&d, &[join(&dx0, &Mv::zero()), join(&dx0, &Mv::zero())]).unwrap());
    assert!(w.0.is_zero() && w.1.is_zero());
}

#[test]
fn gauge_at_a_point() {
    let d = Dims::plain(3);
    let h = wedge_of(&d, &[0, 1, 2]);
    let pi = wedge_of(&d, &[0, 1]);
    let b = &wedge_of(&d, &[0, 1]) - &wedge(&x(&d, 0), &wedge_of(&d, &[0, 2]));
    let v = coord(&d, 0);
    let y = gauge_y(&d, &b, &v, &h, &pi).unwrap();
    assert_eq!(series_gauge_y(&d, &b, &v, &h, &pi).unwrap(), y);
    assert!(generator_match(&d, &b, &v, &h, &pi).unwrap().matches);
    let bad = &pi + &wedge(&x(&d, 0), &wedge_of(&d, &[0, 2]));
    assert!(generator_match(&d, &b, &v, &h, &bad).is_err());
}

/// `Σ_k (1/k!) [..[u, φ], .. φ]`, which terminates for vertical sections.
fn exp_ad(d: &Dims, u: &Mv, phi: &Mv) -> Mv {
    let mut out = u.clone();
    let mut cur = u.clone();
    for k in 1..40 {
        cur = schouten(d, &cur, phi).unwrap().scaled(&ratio(1, k));
        if cur.is_zero() {
            return out;
        }
        out += &cur;
    }
    panic!("adjoint series did not terminate");
}

fn section(r: &mut sample::SampleRng, d: &Dims, max_deg: u32) -> Mv {
    let mut phi = Mv::zero();
    for j in 0..d.fiber {
        let f = sample::poly(r, d.nvars(), d.base, max_deg, 2);
        phi += &term(f, 1 << (d.base + j));
    }
    phi
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn schouten_jacobi(seed in any::<u64>(), arities in (0usize..3, 0usize..3, 0usize..3)) {
        let d = Dims::plain(2);
        let mut r = sample::rng(seed);
        let u = sample::homogeneous(&mut r, &d, arities.0, 2, 2);
        let v = sample::homogeneous(&mut r, &d, arities.1, 2, 2);
        let w = sample::homogeneous(&mut r, &d, arities.2, 2, 2);
        let s = |a: &Mv, b: &Mv| schouten(&d, a, b).unwrap();
        let (du, dv) = (arities.0 as i64 - 1, arities.1 as i64 - 1);
        let sign = if (du * dv).rem_euclid(2) == 1 { -1 } else { 1 };
        let lhs = s(&u, &s(&v, &w));
        let rhs = &s(&s(&u, &v), &w) + &s(&v, &s(&u, &w)).scaled(&int(sign));
        prop_assert_eq!(lhs, rhs);
        let anti = if (du * dv).rem_euclid(2) == 1 { 1 } else { -1 };
        prop_assert_eq!(s(&u, &v), s(&v, &u).scaled(&int(anti)));
    }

    #[test]
    fn de_rham_squares_to_zero(seed in any::<u64>(), m in 1usize..4, k in 0usize..3) {
        let d = Dims::plain(m);
        let mut r = sample::rng(seed);
        let w = sample::form(&mut r, &d, k.min(m), 3, 3);
        prop_assert!(de_rham(&d, &de_rham(&d, &w)).is_zero());
    }

    #[test]
    fn fiber_translation_is_the_exponential(seed in any::<u64>(), arity in 0usize..3) {
        let d = Dims::bundle(1, 2);
        let mut r = sample::rng(seed);
        let u = sample::homogeneous(&mut r, &d, arity, 2, 3);
        let phi = section(&mut r, &d, 2);
        prop_assert_eq!(fiber_translate(&d, &u, &phi).unwrap(), exp_ad(&d, &u, &phi));
    }

    #[test]
    fn coordinate_model_agrees_with_closed_form(seed in any::<u64>(), m in 1usize..3, n in 1usize..4) {
        let d = Dims::plain(m);
        let mut r = sample::rng(seed);
        let args: Vec<(Form, Mv)> = (0..n)
            .map(|i| {
                let form = if i == 0 { sample::form(&mut r, &d, m.min(3), 1, 2) } else { Form::zero() };
                (form, sample::homogeneous(&mut r, &d, 2.min(m), 1, 2))
            })
            .collect();
        let oracle = oracle_bracket(&d, &args).unwrap();
        let targs: Vec<_> = args.iter().map(|(f, u)| join(f, u)).collect();
        prop_assert_eq!(split(&tpois_bracket(&d, &targs).unwrap()), oracle);
    }
}

#[test]
fn section_sampler_is_vertical() {
    let d = Dims::bundle(2, 1);
    let mut r = sample::rng(1);
    for _ in 0..10 {
        assert!(polygeo::is_section(&d, &section(&mut r, &d, 2)));
    }
    assert!(!polygeo::is_section(&d, &coord(&d, 0)));
}
