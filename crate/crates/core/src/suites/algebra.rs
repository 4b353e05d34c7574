use std::sync::atomic::{AtomicUsize, Ordering};

use crate::graded::{int, ratio, Elem, Scalar};
use crate::linfty::{mc_residual, relations_residual, twist, LInftyOne, Rescaled};
use crate::polygeo::{self, Dims, MvKey};
use crate::sample::{self, SampleRng};
use crate::tpois::{join, TKey, TPois};
use crate::vdata::{join_big, nilpotent_vdata, BigKey, VData};
use crate::gla::StructureGLA;

use super::{check, RunConfig, SuiteReport};

fn jacobi_case<A: LInftyOne>(report: &mut SuiteReport, name: &str, a: A, pool: &[A::Key], cfg: &RunConfig) {
    if cfg.fault {
        let broken = Rescaled {
            inner: a,
            arity: 2,
            factor: int(2),
        };
        jacobi_arities(report, name, &broken, pool, cfg);
    } else {
        jacobi_arities(report, name, &a, pool, cfg);
    }
}

fn jacobi_arities<A: LInftyOne>(report: &mut SuiteReport, name: &str, a: &A, pool: &[A::Key], cfg: &RunConfig) {
    for n in 1..=cfg.max_arity {
        report.run(&format!("{}/arity-{}", name, n), cfg.samples, |r, _| {
            let args: Vec<Elem<A::Key>> = (0..n).map(|_| sample::from_pool(r, pool, |k| a.degree(k))).collect();
            let res = relations_residual(a, &args)?;
            Ok(check(res.is_zero(), || format!("args {:?} residual {:?}", args, res)))
        });
    }
}

/// `φ = s a + (s²/2) b`, Maurer-Cartan in the small algebra of the
/// nilpotent example.
pub fn nilpotent_mc(s: i64) -> Elem<usize> {
    let g = crate::vdata::nilpotent_gla();
    &g.elem("a").scaled(&int(s)) + &g.elem("b").scaled(&ratio(s * s, 2))
}

/// `Δ' = α x2 + β x3 + γ y` with `γ` chosen so that
/// `P e^{[·,Ψ]}(Δ + Δ') = 0`; `[Δ + Δ', Δ + Δ'] = 0` holds automatically.
pub fn nilpotent_compatible_delta(v: &VData<StructureGLA>, psi: &Elem<usize>, alpha: &Scalar, beta: &Scalar) -> Elem<usize> {
    let g = v.lie.as_ref();
    let part = &g.elem("x2").scaled(alpha) + &g.elem("x3").scaled(beta);
    let shifted = v.exp_ad(&(&v.delta + &part), psi).expect("nilpotent");
    let c0 = v.project(&shifted).coeff(&g.index_of("y").expect("basis"));
    &part - &g.elem("y").scaled(&c0)
}

/// A Maurer-Cartan element `(Δ'[1], Φ')` of the big algebra of the
/// nilpotent example.
pub fn nilpotent_big_mc(r: &mut SampleRng, v: &VData<StructureGLA>) -> Elem<BigKey<usize>> {
    let g = v.lie.as_ref();
    let psi = &g.elem("a").scaled(&sample::coef(r)) + &g.elem("b").scaled(&sample::coef(r));
    let d = nilpotent_compatible_delta(v, &psi, &sample::coef(r), &sample::coef(r));
    join_big(&d, &psi)
}

fn big_pool<K: Clone>(all: &[K], in_a: impl Fn(&K) -> bool) -> Vec<BigKey<K>> {
    let mut out: Vec<BigKey<K>> = all.iter().cloned().map(BigKey::Shift).collect();
    out.extend(all.iter().filter(|k| in_a(k)).cloned().map(BigKey::Ab));
    out
}

pub fn coiso_dims() -> Dims {
    Dims::bundle(1, 2)
}

pub fn tpois_pool(dims: &Dims, max_deg: u32) -> Vec<TKey> {
    let keys = polygeo::basis_keys(dims, max_deg);
    let mut out: Vec<TKey> = keys.iter().filter(|k| k.wedge != 0).cloned().map(TKey::Form).collect();
    out.extend(keys.into_iter().map(TKey::Mv));
    out
}

/// Higher Jacobi identities for the small, big and twisted algebras of the
/// nilpotent example, the coisotropic backend on `ℝ¹×ℝ²` and `𝔏` on `ℝ³`.
pub fn jacobi_suite(cfg: &RunConfig) -> SuiteReport {
    let mut report = SuiteReport::new("jacobi", cfg);
    let mut r = sample::rng(cfg.seed);

    let v = nilpotent_vdata();
    let dim = v.lie.dim();
    let keys: Vec<usize> = (0..dim).collect();
    let a_keys: Vec<usize> = keys.iter().copied().filter(|k| v.in_a(&Elem::basis(*k))).collect();
    let bpool = big_pool(&keys, |k| a_keys.contains(k));
    jacobi_case(&mut report, "nilpotent/small", v.small_algebra(), &a_keys, cfg);
    let big = v.big_algebra().expect("flat example");
    jacobi_case(&mut report, "nilpotent/big", big.clone(), &bpool, cfg);
    let s = sample::range(&mut r, 1, 3) as i64;
    match twist(v.small_algebra(), nilpotent_mc(s), true) {
        Ok(t) => jacobi_case(&mut report, "nilpotent/small-twisted", t, &a_keys, cfg),
        Err(e) => report.notes.push(format!("nilpotent/small-twisted: {}", e)),
    }
    let alpha = nilpotent_big_mc(&mut r, &v);
    match twist(big, alpha, true) {
        Ok(t) => jacobi_case(&mut report, "nilpotent/big-twisted", t, &bpool, cfg),
        Err(e) => report.notes.push(format!("nilpotent/big-twisted: {}", e)),
    }

    let d = coiso_dims();
    let deg = cfg.max_degree.min(2);
    let mv_keys = polygeo::basis_keys(&d, deg);
    let vert: Vec<MvKey> = mv_keys.iter().filter(|k| polygeo::in_vertical_constant(&d, k)).cloned().collect();
    let curved = sample::poisson_bivector(&mut r, &d, deg, 3);
    match polygeo::coiso_vdata(&d, &curved, 1) {
        Ok(cv) => jacobi_case(&mut report, "coiso/small", cv.small_algebra(), &vert, cfg),
        Err(e) => report.notes.push(format!("coiso/small: {}", e)),
    }
    let flat = sample::flat_poisson(&mut r, &d, deg, 3);
    match polygeo::coiso_vdata(&d, &flat, 1).and_then(|fv| fv.big_algebra()) {
        Ok(b) => {
            let pool = big_pool(&polygeo::basis_keys(&d, 1), |k| polygeo::in_vertical_constant(&d, k));
            jacobi_case(&mut report, "coiso/big", b, &pool, cfg);
        }
        Err(e) => report.notes.push(format!("coiso/big: {}", e)),
    }
    let phi = sample::section(&mut r, &d, deg, 2);
    let translated = polygeo::fiber_translate(&d, &flat, &-&phi).expect("section");
    match polygeo::coiso_vdata(&d, &translated, 1).and_then(|tv| twist(tv.small_algebra(), phi, true)) {
        Ok(t) => jacobi_case(&mut report, "coiso/small-twisted", t, &vert, cfg),
        Err(e) => report.notes.push(format!("coiso/small-twisted: {}", e)),
    }

    let d3 = Dims::plain(3);
    let tpool = tpois_pool(&d3, deg);
    let t = TPois::new(d3).expect("plain");
    jacobi_case(&mut report, "tpois", t, &tpool, cfg);
    let h = sample::form(&mut r, &d3, 3, deg, 2);
    let pi = sample::poisson_bivector(&mut r, &d3, deg, 2);
    match twist(t, join(&h, &pi), true) {
        Ok(tw) => jacobi_case(&mut report, "tpois-twisted", tw, &tpool, cfg),
        Err(e) => report.notes.push(format!("tpois-twisted: {}", e)),
    }
    report
}

/// Both sides of the Maurer-Cartan correspondence for perturbations of
/// V-data, on the nilpotent example and the coisotropic backend.
pub fn machine_suite(cfg: &RunConfig) -> SuiteReport {
    let mut report = SuiteReport::new("machine", cfg);
    let v = nilpotent_vdata();
    let g = v.lie.clone();
    let deg1: Vec<usize> = g.basis_of_degree(1);
    let mt = cfg.max_terms;
    let both = AtomicUsize::new(0);
    report.run("nilpotent", 2 * cfg.samples, |r, i| {
        let phi = nilpotent_mc(sample::range(r, 0, 6) as i64 - 3);
        let ptilde = &g.elem("a").scaled(&sample::coef(r)) + &g.elem("b").scaled(&sample::coef(r));
        let engineered = i % 4 == 0;
        let dtilde = if engineered {
            nilpotent_compatible_delta(&v, &(&phi + &ptilde), &sample::coef(r), &sample::coef(r))
        } else {
            sample::from_pool(r, &deg1, |_| 1)
        };
        let rep = v.machine_check(&phi, &dtilde, &ptilde, mt)?;
        if rep.left_vanishes {
            both.fetch_add(1, Ordering::Relaxed);
        }
        let ok = rep.agree() && rep.componentwise && (!engineered || rep.left_vanishes);
        Ok(check(ok, || format!("phi {:?} dtilde {:?} ptilde {:?}: {:?}", phi, dtilde, ptilde, rep)))
    });
    let d = coiso_dims();
    let deg = cfg.max_degree.min(2);
    report.run("coiso", (cfg.samples / 2).max(1), |r, i| {
        let pi0 = sample::flat_poisson(r, &d, deg, 2);
        let phi = sample::section(r, &d, deg, 2);
        let pi = polygeo::fiber_translate(&d, &pi0, &-&phi)?;
        let cv = polygeo::coiso_vdata(&d, &pi, 1)?;
        let ptilde = sample::section(r, &d, deg, 2);
        let engineered = i % 2 == 0;
        let dtilde = if engineered {
            let other = sample::flat_poisson(r, &d, deg, 2);
            &polygeo::fiber_translate(&d, &other, &-&(&phi + &ptilde))? - &pi
        } else {
            sample::homogeneous(r, &d, 2, 1, 2)
        };
        let rep = cv.machine_check(&phi, &dtilde, &ptilde, mt)?;
        if rep.left_vanishes {
            both.fetch_add(1, Ordering::Relaxed);
        }
        let ok = rep.agree() && rep.componentwise && (!engineered || rep.left_vanishes);
        Ok(check(ok, || format!("pi {:?} phi {:?} dtilde {:?} ptilde {:?}", pi, phi, dtilde, ptilde)))
    });
    report.notes.push(format!("samples where both sides vanish: {}", both.load(Ordering::Relaxed)));
    report
}

/// Twisting the big algebra by a Maurer-Cartan element agrees with the big
/// algebra of the twisted V-data.
pub fn truc_suite(cfg: &RunConfig) -> SuiteReport {
    let mut report = SuiteReport::new("truc", cfg);
    let v = nilpotent_vdata();
    let keys: Vec<usize> = (0..v.lie.dim()).collect();
    let pool = big_pool(&keys, |k| v.in_a(&Elem::basis(*k)));
    let mt = cfg.max_terms;
    let max_arity = cfg.max_arity;
    report.run("nilpotent", (cfg.samples / 2).max(1), |r, _| {
        let alpha = nilpotent_big_mc(r, &v);
        let big = v.big_algebra()?;
        let mc = mc_residual(&big, &alpha, mt)?;
        if !mc.vanishes() {
            return Ok(Some(format!("constructed element {:?} is not Maurer-Cartan", alpha)));
        }
        let twisted = twist(big, alpha.clone(), true)?;
        let tv = v.twist_vdata(&alpha, mt)?;
        let tbig = tv.big_algebra()?;
        for n in 1..=max_arity {
            for _ in 0..3 {
                let args: Vec<Elem<BigKey<usize>>> =
                    (0..n).map(|_| sample::from_pool(r, &pool, |k| tbig.degree(k))).collect();
                let (x, y) = (twisted.m(&args), tbig.m(&args));
                if x != y {
                    return Ok(Some(format!("alpha {:?} args {:?}: {:?} vs {:?}", alpha, args, x, y)));
                }
            }
        }
        Ok(None)
    });
    report
}
