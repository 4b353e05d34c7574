use std::sync::atomic::{AtomicUsize, Ordering};

use rand::seq::SliceRandom;

use crate::graded::{ratio, Scalar};
use crate::linfty::{mc_residual, mc_summands, LInftyOne, Termination};
use crate::poly;
use crate::polygeo::{self, de_rham, Dims, Form, Mv};
use crate::qgeom::{self, oracle_bracket};
use crate::sample::{self, SampleRng};
use crate::tpois::{
    e_b_pi, flow_curve, gauge_y, generator_match, group_act, join, residual_derivative,
    series_gauge_y, series_mc_residual, split, wedge_pi_tilde, AffineDiffeo, TElem, TPois,
};
use crate::vdata::join_big;

use super::algebra::coiso_dims;
use super::{check, RunConfig, SuiteReport};

fn args_text(args: &[(Form, Mv)]) -> String {
    format!("{:?}", args)
}

/// Direct brackets of `𝔏` against the coordinate-model oracle, per family:
/// unary, binary on multivectors, one form with multivectors.
pub fn oracle_suite(cfg: &RunConfig) -> SuiteReport {
    let mut report = SuiteReport::new("oracle", cfg);
    let deg = cfg.max_degree;
    let nonzero = AtomicUsize::new(0);
    let run = |report: &mut SuiteReport, family: &str, build: &(dyn Fn(&mut SampleRng, &Dims) -> Vec<(Form, Mv)> + Sync)| {
        report.run(family, cfg.samples, |r, _| {
            let d = Dims::plain(sample::range(r, 1, 3));
            let args = build(r, &d);
            let oracle = oracle_bracket(&d, &args)?;
            let targs: Vec<TElem> = args.iter().map(|(f, u)| join(f, u)).collect();
            let direct = split(&crate::tpois::tpois_bracket(&d, &targs)?);
            if !(direct.0.is_zero() && direct.1.is_zero()) {
                nonzero.fetch_add(1, Ordering::Relaxed);
            }
            Ok(check(direct == oracle, || {
                format!("m = {} args {}: direct {:?} oracle {:?}", d.base, args_text(&args), direct, oracle)
            }))
        });
    };
    run(&mut report, "unary", &|r, d| {
        if sample::range(r, 0, 3) > 0 {
            let q = sample::range(r, 1, d.base);
            vec![(sample::form(r, d, q, deg, 3), Mv::zero())]
        } else {
            let a = sample::range(r, 0, d.base);
            vec![(Form::zero(), sample::homogeneous(r, d, a, deg, 3))]
        }
    });
    run(&mut report, "binary-multivector", &|r, d| {
        (0..2)
            .map(|_| {
                let a = sample::range(r, 1, d.base);
                (Form::zero(), sample::homogeneous(r, d, a, deg, 3))
            })
            .collect()
    });
    run(&mut report, "form-with-multivectors", &|r, d| {
        let n = sample::range(r, 1, d.base.min(3));
        let q = if sample::range(r, 0, 3) == 0 { sample::range(r, 1, d.base) } else { n };
        let mut args = vec![(sample::form(r, d, q, deg, 3), Mv::zero())];
        for _ in 0..n {
            let a = if sample::range(r, 0, 3) > 0 { 2.min(d.base) } else { sample::range(r, 0, d.base) };
            args.push((Form::zero(), sample::homogeneous(r, d, a, deg, 3)));
        }
        args.shuffle(r);
        args
    });
    report.notes.push(format!("nonzero brackets: {}", nonzero.load(Ordering::Relaxed)));
    report
}

/// `(−dB, e^B π)` for the symplectic `∂1∧∂2 + ∂3∧∂4` on `ℝ⁴` and a 2-form
/// `B` supported on `dx1∧dx3`, `dx1∧dx4` (so `1 + ΠB` is unipotent): a
/// twisted Poisson pair with `H ≠ 0` in general.
pub fn twisted_pair(r: &mut SampleRng, max_deg: u32) -> crate::error::Result<(Form, Mv)> {
    let d = Dims::plain(4);
    let pi0 = &polygeo::wedge_of(&d, &[0, 1]) + &polygeo::wedge_of(&d, &[2, 3]);
    let g = sample::poly(r, d.nvars(), 4, max_deg, 2);
    let h = sample::poly(r, d.nvars(), 4, max_deg, 2);
    let b = &polygeo::scale_by_poly(&polygeo::wedge_of(&d, &[0, 2]), &g)
        + &polygeo::scale_by_poly(&polygeo::wedge_of(&d, &[0, 3]), &h);
    group_act(&d, &b, &AffineDiffeo::identity(4), &Form::zero(), &pi0)
}

/// A Maurer-Cartan point of `𝔏`: on `ℝ³` any `H` with a Poisson `π`, on
/// `ℝ⁴` a twisted pair.
pub fn mc_point(r: &mut SampleRng, max_deg: u32, four: bool) -> crate::error::Result<(Dims, Form, Mv)> {
    if four {
        let (h, pi) = twisted_pair(r, max_deg)?;
        Ok((Dims::plain(4), h, pi))
    } else {
        let d = Dims::plain(3);
        let h = sample::form(r, &d, 3, max_deg, 2);
        let pi = sample::poisson_bivector(r, &d, max_deg, 2);
        Ok((d, h, pi))
    }
}

/// Maurer-Cartan series of `𝔏` against `dH = 0` and `[π,π] = 2∧³π̃(H)`.
pub fn tpois_mc_suite(cfg: &RunConfig) -> SuiteReport {
    let mut report = SuiteReport::new("tpois-mc", cfg);
    let deg = cfg.max_degree;
    let positives = AtomicUsize::new(0);
    report.run("pairs", cfg.samples, |r, i| {
        let kind = i % 5;
        let (d, h, pi) = match kind {
            0 if i == 0 => {
                let d = Dims::plain(3);
                (d, polygeo::wedge_of(&d, &[0, 1, 2]), polygeo::wedge_of(&d, &[0, 1]))
            }
            0 | 2 => mc_point(r, deg, false)?,
            1 | 3 => mc_point(r, deg, true)?,
            _ => {
                let d = Dims::plain(sample::range(r, 3, 4));
                (d, sample::form(r, &d, 3, deg, 2), sample::homogeneous(r, &d, 2, deg, 3))
            }
        };
        let (h, pi) = match kind {
            2 => (h.clone(), &pi + &sample::homogeneous(r, &d, 2, deg, 1)),
            3 => (&h + &sample::form(r, &d, 3, deg, 1), pi),
            _ => (h, pi),
        };
        let series = series_mc_residual(&d, &h, &pi)?;
        let closed = de_rham(&d, &h).is_zero()
            && polygeo::schouten(&d, &pi, &pi)? == wedge_pi_tilde(&d, &pi, 3, &h)?.scaled(&Scalar::from_integer(2.into()));
        let positive = kind < 2;
        if closed {
            positives.fetch_add(1, Ordering::Relaxed);
        }
        let ok = series.vanishes() == closed && series.terminated_by == Termination::Bound && (!positive || closed);
        Ok(check(ok, || {
            format!("m = {} H {:?} pi {:?}: series {:?} closed form {}", d.base, h, pi, series.residual, closed)
        }))
    });
    report.notes.push(format!("Maurer-Cartan pairs: {}", positives.load(Ordering::Relaxed)));
    report
}

/// Maurer-Cartan sections of the coisotropic backend against the pushed
/// forward bivector.
pub fn coiso_suite(cfg: &RunConfig) -> SuiteReport {
    let mut report = SuiteReport::new("coiso", cfg);
    let d = coiso_dims();
    let deg = cfg.max_degree.min(2);
    let mt = cfg.max_terms;
    let vanishing = AtomicUsize::new(0);
    report.run("sections", (cfg.samples / 2).max(1), |r, i| {
        let phi = sample::section(r, &d, deg, 2);
        let pi = if i % 2 == 0 {
            let pi0 = sample::flat_poisson(r, &d, deg, 2);
            polygeo::fiber_translate(&d, &pi0, &-&phi)?
        } else {
            sample::poisson_bivector(r, &d, deg, 3)
        };
        let pol = polygeo::pol_degree(&d, &pi).unwrap_or(0);
        if pol > 2 {
            return Ok(Some(format!("generated bivector {:?} has polynomial degree {}", pi, pol)));
        }
        let v = polygeo::coiso_vdata(&d, &pi, 0)?;
        let small = v.small_algebra();
        let rep = mc_residual(&small, &phi, mt)?;
        let pushed = polygeo::coiso_projection(&d, &polygeo::fiber_translate(&d, &pi, &phi)?);
        let summands = mc_summands(&small, &phi, (pol + 5).max(0) as usize);
        if rep.vanishes() {
            vanishing.fetch_add(1, Ordering::Relaxed);
        }
        let tail_zero = summands.iter().enumerate().all(|(n, s)| n as i64 <= pol + 2 || s.is_zero());
        let ok = rep.vanishes() == pushed.is_zero()
            && rep.residual == pushed
            && tail_zero
            && rep.terminated_by != Termination::Truncation
            && (i % 2 == 1 || rep.vanishes());
        Ok(check(ok, || format!("pi {:?} phi {:?}: residual {:?} pushed {:?}", pi, phi, rep.residual, pushed)))
    });
    report.notes.push(format!("Maurer-Cartan sections: {}", vanishing.load(Ordering::Relaxed)));
    report
}

/// Gauge fields at Maurer-Cartan points: tangency, the generator identity
/// and agreement with the generic series.
pub fn gauge_suite(cfg: &RunConfig) -> SuiteReport {
    let mut report = SuiteReport::new("gauge", cfg);
    let deg = cfg.max_degree;
    let longest = AtomicUsize::new(0);
    report.run("points", (cfg.samples / 2).max(1), |r, i| {
        let (d, h, pi) = mc_point(r, deg, i % 3 == 2)?;
        let b = sample::form(r, &d, 2, deg, 2);
        let x = sample::homogeneous(r, &d, 1, deg, 2);
        let y = gauge_y(&d, &b, &x, &h, &pi)?;
        let (a, c) = residual_derivative(&d, &h, &pi, &y.0, &y.1)?;
        let gm = generator_match(&d, &b, &x, &h, &pi)?;
        let series = series_gauge_y(&d, &b, &x, &h, &pi)?;
        let t = TPois::new(d)?;
        let (z, m) = (join(&b, &x), join(&h, &pi));
        for k in 0..=t.termination_bound().unwrap_or(0) {
            let mut args = vec![m.clone(); k];
            args.push(z.clone());
            if !t.m(&args).is_zero() {
                longest.fetch_max(k, Ordering::Relaxed);
            }
        }
        let ok = a.is_zero() && c.is_zero() && gm.matches && series == y;
        Ok(check(ok, || format!("H {:?} pi {:?} B {:?} X {:?}", h, pi, b, x)))
    });
    report.notes.push(format!(
        "largest k with a nonzero gauge summand m_(k+1)(z, m^k): {}",
        longest.load(Ordering::Relaxed)
    ));
    report
}

/// Flow curves of gauge fields with `X = 0` and constant `X`.
pub fn flow_suite(cfg: &RunConfig) -> SuiteReport {
    let mut report = SuiteReport::new("flow", cfg);
    let deg = cfg.max_degree;
    let d = Dims::plain(3);
    let count = (cfg.samples / 5).max(1);
    for with_x in [false, true] {
        let case = if with_x { "constant-x" } else { "x-zero" };
        report.run(case, count, |r, _| {
            let (b, x, h, pi) = sample::flow_case(r, deg, with_x);
            let c = flow_curve(&d, &b, &x, &h, &pi)?;
            let mut ok = c.satisfies_ode()?
                && c.at(&Scalar::from_integer(0.into()))? == (h.clone(), pi.clone())
                && c.velocity_at_zero()? == gauge_y(&d, &b, &x, &h, &pi)?;
            if !with_x {
                let dt = c.dims;
                let t = poly::var(dt.nvars(), dt.nvars() - 1);
                let lifted: Form = b.map_keys(|k| {
                    let mut mono = k.mono.clone();
                    mono.push(0);
                    polygeo::MvKey { wedge: k.wedge, mono }
                });
                let tb = polygeo::scale_by_poly(&lifted, &t);
                ok &= c.c == tb;
                let s = ratio(1, 7);
                if let Ok((hs, ps)) = c.at(&s) {
                    ok &= hs == &h - &de_rham(&d, &b).scaled(&s) && ps == e_b_pi(&d, &b.scaled(&s), &pi)?;
                }
            }
            Ok(check(ok, || format!("B {:?} X {:?} H {:?} pi {:?}", b, x, h, pi)))
        });
    }
    report
}

/// Filtered V-data laws on basis elements, and Maurer-Cartan series on
/// filtered inputs that must stop by filtration or bound.
pub fn filtration_suite(cfg: &RunConfig) -> SuiteReport {
    let mut report = SuiteReport::new("filtration", cfg);
    let d = coiso_dims();
    let deg = cfg.max_degree.min(2);
    report.run("coiso/laws", 1, |r, _| {
        let pi = sample::poisson_bivector(r, &d, deg, 3);
        let v = polygeo::coiso_vdata(&d, &pi, deg)?;
        let bad = v.check_filtration();
        Ok(check(bad.is_empty(), || format!("{:?}", bad)))
    });
    report.run("qgeom/laws", 1, |_, _| {
        let v = qgeom::qgeom_vdata(&Dims::plain(2), Some(1))?;
        let bad = v.check_filtration();
        Ok(check(bad.is_empty(), || format!("{:?}", bad)))
    });
    let mt = cfg.max_terms;
    report.run("coiso/small-series", cfg.samples, |r, _| {
        let pi = sample::poisson_bivector(r, &d, deg, 3);
        let phi = sample::section(r, &d, deg, 2);
        let v = polygeo::coiso_vdata(&d, &pi, 0)?;
        let rep = mc_residual(&v.small_algebra(), &phi, mt)?;
        Ok(check(rep.terminated_by != Termination::Truncation, || format!("pi {:?} phi {:?}", pi, phi)))
    });
    report.run("coiso/big-series", cfg.samples, |r, _| {
        let pi = sample::flat_poisson(r, &d, deg, 2);
        let v = polygeo::coiso_vdata(&d, &pi, 0)?;
        let big = v.big_algebra()?;
        let alpha = join_big(&sample::homogeneous(r, &d, 2, deg, 2), &sample::section(r, &d, deg, 2));
        let rep = mc_residual(&big, &alpha, mt)?;
        Ok(check(rep.terminated_by != Termination::Truncation, || format!("pi {:?} alpha {:?}", pi, alpha)))
    });
    report.run("qgeom/big-series", cfg.samples, |r, _| {
        let m = sample::range(r, 2, 3);
        let d = Dims::plain(m);
        let v = qgeom::qgeom_vdata(&d, None)?;
        let lie = *v.lie;
        let big = v.big_algebra()?;
        let h = sample::form(r, &d, 3, deg, 2);
        let pi = sample::homogeneous(r, &d, 2, deg, 2);
        let alpha = join_big(&qgeom::form_to_super(&lie, &h), &qgeom::mv_to_super(&lie, &pi));
        let rep = mc_residual(&big, &alpha, mt)?;
        Ok(check(rep.terminated_by != Termination::Truncation, || format!("H {:?} pi {:?}", h, pi)))
    });
    report
}
