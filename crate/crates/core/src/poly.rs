//! Sparse multivariate polynomials over the rationals, as elements keyed by
//! exponent vectors.

use num_traits::{One, Zero};

use crate::graded::{int, Elem, Scalar};

pub type Mono = Vec<u32>;
pub type Poly = Elem<Mono>;

pub fn constant(n: usize, c: Scalar) -> Poly {
    Elem::term(vec![0; n], c)
}

pub fn one(n: usize) -> Poly {
    constant(n, Scalar::one())
}

pub fn var(n: usize, i: usize) -> Poly {
    let mut m = vec![0; n];
    m[i] = 1;
    Elem::basis(m)
}

pub fn mono_mul(a: &Mono, b: &Mono) -> Mono {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::zero();
    for (ma, ca) in a.iter() {
        for (mb, cb) in b.iter() {
            out.add_term(mono_mul(ma, mb), ca * cb);
        }
    }
    out
}

pub fn pow(a: &Poly, n: usize, nvars: usize) -> Poly {
    let mut out = one(nvars);
    for _ in 0..n {
        out = mul(&out, a);
    }
    out
}

/// `∂a/∂v_i`
pub fn deriv(a: &Poly, i: usize) -> Poly {
    let mut out = Poly::zero();
    for (m, c) in a.iter() {
        if m[i] > 0 {
            let mut d = m.clone();
            d[i] -= 1;
            out.add_term(d, c * int(m[i] as i64));
        }
    }
    out
}

/// Antiderivative in `v_i` with zero constant term.
pub fn integrate(a: &Poly, i: usize) -> Poly {
    let mut out = Poly::zero();
    for (m, c) in a.iter() {
        let mut d = m.clone();
        d[i] += 1;
        let e = d[i] as i64;
        out.add_term(d, c / int(e));
    }
    out
}

/// Set the listed variables to zero.
pub fn at_zero(a: &Poly, vars: impl Fn(usize) -> bool) -> Poly {
    a.filter(|m| m.iter().enumerate().all(|(i, e)| *e == 0 || !vars(i)))
}

/// Set variable `i` to the rational value `v`.
pub fn eval_var(a: &Poly, i: usize, v: &Scalar) -> Poly {
    let mut out = Poly::zero();
    for (m, c) in a.iter() {
        let mut d = m.clone();
        let e = d[i];
        d[i] = 0;
        let mut f = Scalar::one();
        for _ in 0..e {
            f *= v;
        }
        out.add_term(d, c * f);
    }
    out
}

/// Substitute `v_i ↦ images[i]` for every variable with an image.
pub fn substitute(a: &Poly, images: &[Option<Poly>], nvars: usize) -> Poly {
    let mut out = Poly::zero();
    for (m, c) in a.iter() {
        let mut kept = m.clone();
        let mut term = one(nvars);
        for (i, e) in m.iter().enumerate() {
            if let Some(img) = &images[i] {
                kept[i] = 0;
                if *e > 0 {
                    term = mul(&term, &pow(img, *e as usize, nvars));
                }
            }
        }
        out.add_scaled(&mul(&term, &Elem::basis(kept)), c);
    }
    out
}

/// Total degree in the variables selected by `vars`; `None` for zero.
pub fn degree_in(a: &Poly, vars: impl Fn(usize) -> bool) -> Option<u32> {
    a.keys()
        .map(|m| m.iter().enumerate().filter(|(i, _)| vars(*i)).map(|(_, e)| *e).sum())
        .max()
}

/// True if no variable selected by `vars` occurs.
pub fn free_of(a: &Poly, vars: impl Fn(usize) -> bool) -> bool {
    degree_in(a, vars).unwrap_or(0) == 0
}

pub fn constant_value(a: &Poly) -> Option<Scalar> {
    match a.len() {
        0 => Some(Scalar::zero()),
        1 => {
            let (m, c) = a.iter().next().expect("one term");
            if m.iter().all(|e| *e == 0) {
                Some(c.clone())
            } else {
                None
            }
        }
        _ => None,
    }
}

/// Determinant of a square polynomial matrix by cofactor expansion.
pub fn det(m: &[Vec<Poly>], nvars: usize) -> Poly {
    let n = m.len();
    if n == 0 {
        return one(nvars);
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut out = Poly::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Poly>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, p)| p.clone()).collect())
            .collect();
        let sign = if j % 2 == 0 { int(1) } else { int(-1) };
        out.add_scaled(&mul(&m[0][j], &det(&minor, nvars)), &sign);
    }
    out
}

/// Adjugate: `adj(M)·M = M·adj(M) = det(M)·1`.
pub fn adjugate(m: &[Vec<Poly>], nvars: usize) -> Vec<Vec<Poly>> {
    let n = m.len();
    let mut out = vec![vec![Poly::zero(); n]; n];
    if n == 1 {
        out[0][0] = one(nvars);
        return out;
    }
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<Poly>> = m
                .iter()
                .enumerate()
                .filter(|(r, _)| *r != i)
                .map(|(_, row)| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, p)| p.clone()).collect())
                .collect();
            let sign = if (i + j) % 2 == 0 { int(1) } else { int(-1) };
            out[j][i] = det(&minor, nvars).scaled(&sign);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn calculus_rules() {
        let x = var(2, 0);
        let y = var(2, 1);
        let p = &mul(&x, &x) + &mul(&x, &y);
        assert_eq!(deriv(&p, 0), &x.scaled(&int(2)) + &y);
        assert_eq!(deriv(&integrate(&p, 1), 1), p);
        let shifted = substitute(&p, &[Some(&x + &one(2)), None], 2);
        assert_eq!(eval_var(&shifted, 0, &int(-1)), eval_var(&p, 0, &int(0)));
        assert_eq!(degree_in(&p, |i| i == 1), Some(1));
    }

    #[test]
    fn adjugate_identity() {
        let x = var(1, 0);
        let m = vec![vec![one(1), x.clone()], vec![Poly::zero(), one(1).scaled(&int(3))]];
        let d = det(&m, 1);
        assert_eq!(d, constant(1, int(3)));
        let a = adjugate(&m, 1);
        for i in 0..2 {
            for j in 0..2 {
                let mut s = Poly::zero();
                for k in 0..2 {
                    s += &mul(&a[i][k], &m[k][j]);
                }
                assert_eq!(s, if i == j { d.clone() } else { Poly::zero() });
            }
        }
    }
}
