//! Curved L∞[1]-algebras: the evaluator interface, higher Jacobi residuals,
//! Maurer-Cartan series, twisting, gauge fields and décalage.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graded::{
    decalage_sign, inv_factorial, koszul_sign_unchecked, unshuffles, BasisKey, Elem,
    Homogeneity, Permutation, Scalar,
};

pub const DEFAULT_MAX_ARITY: usize = 5;
pub const DEFAULT_MAX_TERMS: usize = 12;

/// Decreasing filtration given by a degree on basis keys; an element lies in
/// `F^p` iff every key has degree at least `p`. Brackets satisfy
/// `m_n(F^{p_1},..,F^{p_n}) ⊂ F^{p_1+..+p_n+shift}` and `F^{top+1} = 0`.
#[derive(Clone)]
pub struct Filtration<K> {
    key_degree: Arc<dyn Fn(&K) -> i64 + Send + Sync>,
    pub bracket_shift: i64,
    pub top: i64,
}

impl<K: BasisKey> Filtration<K> {
    pub fn new(key_degree: impl Fn(&K) -> i64 + Send + Sync + 'static, bracket_shift: i64, top: i64) -> Self {
        Filtration {
            key_degree: Arc::new(key_degree),
            bracket_shift,
            top,
        }
    }

    pub fn key_degree(&self, k: &K) -> i64 {
        (self.key_degree)(k)
    }

    /// Largest `p` with `x ∈ F^p`; `None` for zero.
    pub fn of(&self, x: &Elem<K>) -> Option<i64> {
        x.keys().map(|k| self.key_degree(k)).min()
    }

    pub fn with_shift(&self, bracket_shift: i64) -> Self {
        Filtration {
            key_degree: self.key_degree.clone(),
            bracket_shift,
            top: self.top,
        }
    }

    pub fn map_keys<J: BasisKey>(&self, f: impl Fn(&J) -> K + Send + Sync + 'static) -> Filtration<J> {
        let inner = self.key_degree.clone();
        Filtration {
            key_degree: Arc::new(move |j| inner(&f(j))),
            bracket_shift: self.bracket_shift,
            top: self.top,
        }
    }
}

/// A (possibly curved) L∞[1]-algebra: graded-symmetric multibrackets of
/// degree one.
pub trait LInftyOne: Send + Sync {
    type Key: BasisKey;

    fn degree(&self, key: &Self::Key) -> i64;

    /// `m_0`; `None` for a non-curved algebra.
    fn curvature(&self) -> Option<Elem<Self::Key>>;

    /// `m_n` for `n = args.len() ≥ 1`.
    fn bracket(&self, args: &[Elem<Self::Key>]) -> Elem<Self::Key>;

    /// `N` such that `m_n = 0` for every `n > N`.
    fn termination_bound(&self) -> Option<usize> {
        None
    }

    fn filtration(&self) -> Option<Filtration<Self::Key>> {
        None
    }

    /// Algebra-specific count of the summands `k = 0, 1, ..` of
    /// `Σ_k m_{|fixed|+k}(rep^k, fixed)` that can be nonzero.
    fn series_length(&self, _rep: &Elem<Self::Key>, _fixed: &[Elem<Self::Key>]) -> Option<usize> {
        None
    }

    fn homogeneity(&self, x: &Elem<Self::Key>) -> Homogeneity {
        x.homogeneity(|k| self.degree(k))
    }

    /// `m_n` for any `n ≥ 0`.
    fn m(&self, args: &[Elem<Self::Key>]) -> Elem<Self::Key> {
        if args.is_empty() {
            self.curvature().unwrap_or_default()
        } else if args.iter().any(|a| a.is_zero()) {
            Elem::zero()
        } else {
            self.bracket(args)
        }
    }

    fn is_curved(&self) -> bool {
        self.curvature().is_some()
    }
}

impl<T: LInftyOne + ?Sized> LInftyOne for Arc<T> {
    type Key = T::Key;
    fn degree(&self, key: &Self::Key) -> i64 {
        (**self).degree(key)
    }
    fn curvature(&self) -> Option<Elem<Self::Key>> {
        (**self).curvature()
    }
    fn bracket(&self, args: &[Elem<Self::Key>]) -> Elem<Self::Key> {
        (**self).bracket(args)
    }
    fn termination_bound(&self) -> Option<usize> {
        (**self).termination_bound()
    }
    fn filtration(&self) -> Option<Filtration<Self::Key>> {
        (**self).filtration()
    }
    fn series_length(&self, rep: &Elem<Self::Key>, fixed: &[Elem<Self::Key>]) -> Option<usize> {
        (**self).series_length(rep, fixed)
    }
}

/// Split every argument into components by `class`, evaluate `eval` on each
/// tuple of components and sum.
pub fn multilinear<K: BasisKey, C: Ord + Clone>(
    args: &[Elem<K>],
    class: impl Fn(&K) -> C,
    mut eval: impl FnMut(&[(C, Elem<K>)]) -> Elem<K>,
) -> Elem<K> {
    let parts: Vec<Vec<(C, Elem<K>)>> = args
        .iter()
        .map(|a| {
            let mut m: BTreeMap<C, Elem<K>> = BTreeMap::new();
            for (k, c) in a.iter() {
                m.entry(class(k)).or_default().add_term(k.clone(), c.clone());
            }
            m.into_iter().collect()
        })
        .collect();
    let mut out = Elem::zero();
    if parts.iter().any(|p| p.is_empty()) {
        return out;
    }
    let mut idx = vec![0usize; parts.len()];
    loop {
        let tuple: Vec<(C, Elem<K>)> = idx.iter().zip(&parts).map(|(&i, p)| p[i].clone()).collect();
        out += &eval(&tuple);
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return out;
            }
            idx[pos] += 1;
            if idx[pos] < parts[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Stable sort of homogeneous components by `rank`, returning the sorted
/// tuple and the Koszul sign `ε` with `m(original) = ε·m(sorted)`.
pub fn koszul_sort<T: Clone>(items: &[T], degree: impl Fn(&T) -> i64, rank: impl Fn(&T) -> u8) -> (Vec<T>, Scalar) {
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by_key(|&i| rank(&items[i]));
    let degrees: Vec<i64> = items.iter().map(&degree).collect();
    let eps = koszul_sign_unchecked(&order, &degrees);
    (order.iter().map(|&i| items[i].clone()).collect(), Scalar::from_integer(eps.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Termination {
    Bound,
    Filtration,
    Truncation,
}

impl std::fmt::Display for Termination {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Termination::Bound => "bound",
            Termination::Filtration => "filtration",
            Termination::Truncation => "truncation",
        })
    }
}

/// Value of a series `Σ_k c_k m_{fixed+k}(...)` together with how the
/// summation was stopped.
#[derive(Debug, Clone, PartialEq)]
pub struct MCReport<K: Ord> {
    pub residual: Elem<K>,
    pub terms_evaluated: usize,
    pub terminated_by: Termination,
}

impl<K: BasisKey> MCReport<K> {
    pub fn is_exact(&self) -> bool {
        self.terminated_by != Termination::Truncation
    }

    /// Exactly zero and provably complete.
    pub fn vanishes(&self) -> bool {
        self.is_exact() && self.residual.is_zero()
    }
}

pub type SeriesReport<K> = MCReport<K>;

/// Number of powers `k = 0, 1, ..` of the repeated argument to evaluate in
/// `Σ_k m_{|fixed|+k}(rep^k, fixed)` before every later summand provably
/// vanishes, or `max_terms` when nothing guarantees it.
fn series_plan<A: LInftyOne + ?Sized>(
    a: &A,
    rep: &Elem<A::Key>,
    fixed: &[Elem<A::Key>],
    max_terms: usize,
) -> (usize, Termination) {
    if fixed.iter().any(|x| x.is_zero()) {
        return (0, Termination::Bound);
    }
    if let Some(n) = a.termination_bound() {
        return ((n + 1).saturating_sub(fixed.len()), Termination::Bound);
    }
    if rep.is_zero() {
        return (1, Termination::Bound);
    }
    if let Some(k) = a.series_length(rep, fixed) {
        return (k, Termination::Filtration);
    }
    if let Some(f) = a.filtration() {
        let fr = f.of(rep).expect("nonzero");
        if fr >= 1 {
            let base: i64 = fixed.iter().map(|x| f.of(x).expect("nonzero")).sum::<i64>() + f.bracket_shift;
            let mut k = 0i64;
            while k * fr + base <= f.top {
                k += 1;
            }
            return (k as usize, Termination::Filtration);
        }
    }
    (max_terms, Termination::Truncation)
}

fn repeated<K: BasisKey>(rep: &Elem<K>, k: usize, fixed: &[Elem<K>]) -> Vec<Elem<K>> {
    let mut v = vec![rep.clone(); k];
    v.extend_from_slice(fixed);
    v
}

fn require_degree<A: LInftyOne + ?Sized>(a: &A, x: &Elem<A::Key>, d: i64, what: &str) -> Result<()> {
    if a.homogeneity(x).admits(d) {
        Ok(())
    } else {
        Err(Error::arg(format!("{} must be homogeneous of degree {}", what, d)))
    }
}

/// `Σ_n (1/n!) m_n(φ,..,φ)`, from `n = 0` when curved.
pub fn mc_residual<A: LInftyOne + ?Sized>(a: &A, phi: &Elem<A::Key>, max_terms: usize) -> Result<MCReport<A::Key>> {
    require_degree(a, phi, 0, "Maurer-Cartan candidate")?;
    if a.termination_bound().is_none() && !phi.is_zero() && a.series_length(phi, &[]).is_none() {
        if let Some(f) = a.filtration() {
            if f.of(phi).unwrap_or(i64::MAX) < 1 {
                return Err(Error::arg("Maurer-Cartan candidate must lie in F^1"));
            }
        }
    }
    let (count, terminated_by) = series_plan(a, phi, &[], max_terms);
    let mut residual = a.curvature().unwrap_or_default();
    let mut terms = 1;
    for n in 1..count {
        residual.add_scaled(&a.m(&repeated(phi, n, &[])), &inv_factorial(n));
        terms += 1;
    }
    Ok(MCReport {
        residual,
        terms_evaluated: terms,
        terminated_by,
    })
}

/// Every summand `(1/n!) m_n(φ^n)` of the MC series up to `upto`, for
/// inspecting where the series stops.
pub fn mc_summands<A: LInftyOne + ?Sized>(a: &A, phi: &Elem<A::Key>, upto: usize) -> Vec<Elem<A::Key>> {
    (0..=upto)
        .map(|n| a.m(&repeated(phi, n, &[])).scaled(&inv_factorial(n)))
        .collect()
}

/// `Σ_{i+j=n+1} Σ_{σ ∈ Sh(i,n-i)} ε(σ) m_j(m_i(v_σ(1..i)), v_σ(i+1..n))`,
/// with `i = 0` included for curved algebras.
pub fn relations_residual<A: LInftyOne + ?Sized>(a: &A, args: &[Elem<A::Key>]) -> Result<Elem<A::Key>> {
    let n = args.len();
    if n == 0 {
        return Err(Error::arg("relations are indexed by n >= 1"));
    }
    let mut degrees = Vec::with_capacity(n);
    for x in args {
        match a.homogeneity(x) {
            Homogeneity::Mixed => return Err(Error::arg("relations need homogeneous arguments")),
            Homogeneity::Zero => degrees.push(0),
            Homogeneity::Homogeneous(d) => degrees.push(d),
        }
    }
    let mut out = Elem::zero();
    let first = if a.is_curved() { 0 } else { 1 };
    for i in first..=n {
        for s in unshuffles(i, n)? {
            let eps = koszul_sign_unchecked(s.images(), &degrees);
            let permuted = s.apply(args);
            let inner = a.m(&permuted[..i]);
            if inner.is_zero() {
                continue;
            }
            let mut outer_args = vec![inner];
            outer_args.extend_from_slice(&permuted[i..]);
            out.add_scaled(&a.m(&outer_args), &Scalar::from_integer(eps.into()));
        }
    }
    Ok(out)
}

/// `m_n(v_σ) - ε(σ) m_n(v)`; zero for a graded-symmetric bracket.
pub fn symmetry_residual<A: LInftyOne + ?Sized>(
    a: &A,
    args: &[Elem<A::Key>],
    sigma: &Permutation,
) -> Result<Elem<A::Key>> {
    let degrees: Vec<i64> = args
        .iter()
        .map(|x| match a.homogeneity(x) {
            Homogeneity::Homogeneous(d) => Ok(d),
            Homogeneity::Zero => Ok(0),
            Homogeneity::Mixed => Err(Error::arg("symmetry needs homogeneous arguments")),
        })
        .collect::<Result<_>>()?;
    let eps = crate::graded::koszul_sign(sigma, &degrees)?;
    let mut r = a.m(&sigma.apply(args));
    r.add_scaled(&a.m(args), &-Scalar::from_integer(eps.into()));
    Ok(r)
}

/// `A_α`: `m^α_n(x) = Σ_k (1/k!) m_{n+k}(α,..,α, x)`.
pub struct Twisted<A: LInftyOne> {
    base: A,
    alpha: Elem<A::Key>,
    curvature: Option<Elem<A::Key>>,
}

/// Twist by a degree-0 element. With `check` the element must be
/// Maurer-Cartan; the series must terminate through a bound or filtration.
pub fn twist<A: LInftyOne>(a: A, alpha: Elem<A::Key>, check: bool) -> Result<Twisted<A>> {
    require_degree(&a, &alpha, 0, "twisting element")?;
    if !alpha.is_zero() && a.termination_bound().is_none() {
        let ok = a
            .filtration()
            .map(|f| f.of(&alpha).unwrap_or(i64::MAX) >= 1)
            .unwrap_or(false);
        if !ok {
            return Err(Error::NonTerminating(
                "twisting series needs a termination bound or a filtration with the element in F^1".into(),
            ));
        }
    }
    let rep = mc_residual(&a, &alpha, DEFAULT_MAX_TERMS)?;
    if check && !rep.residual.is_zero() {
        return Err(Error::NotMaurerCartan {
            residual: format!("{:?}", rep.residual),
        });
    }
    let curvature = if rep.residual.is_zero() { None } else { Some(rep.residual) };
    Ok(Twisted { base: a, alpha, curvature })
}

impl<A: LInftyOne> Twisted<A> {
    pub fn alpha(&self) -> &Elem<A::Key> {
        &self.alpha
    }

    pub fn base(&self) -> &A {
        &self.base
    }
}

impl<A: LInftyOne> LInftyOne for Twisted<A> {
    type Key = A::Key;

    fn degree(&self, key: &Self::Key) -> i64 {
        self.base.degree(key)
    }

    fn curvature(&self) -> Option<Elem<Self::Key>> {
        self.curvature.clone()
    }

    fn bracket(&self, args: &[Elem<Self::Key>]) -> Elem<Self::Key> {
        let (count, _) = series_plan(&self.base, &self.alpha, args, DEFAULT_MAX_TERMS);
        let mut out = Elem::zero();
        for k in 0..count {
            let t = self.base.m(&repeated(&self.alpha, k, args));
            out.add_scaled(&t, &inv_factorial(k));
        }
        out
    }

    fn termination_bound(&self) -> Option<usize> {
        self.base.termination_bound()
    }

    fn filtration(&self) -> Option<Filtration<Self::Key>> {
        self.base.filtration()
    }
}

/// `𝒴^z|_m = Σ_k (1/k!) m_{k+1}(z, m,..,m)`.
pub fn gauge_field<A: LInftyOne + ?Sized>(
    a: &A,
    z: &Elem<A::Key>,
    m: &Elem<A::Key>,
    max_terms: usize,
) -> Result<SeriesReport<A::Key>> {
    require_degree(a, z, -1, "gauge parameter")?;
    require_degree(a, m, 0, "base point")?;
    let fixed = [z.clone()];
    let (count, terminated_by) = series_plan(a, m, &fixed, max_terms);
    let mut out = Elem::zero();
    let mut terms = 0;
    for k in 0..count {
        out.add_scaled(&a.m(&repeated(m, k, &fixed)), &inv_factorial(k));
        terms += 1;
    }
    Ok(MCReport {
        residual: out,
        terms_evaluated: terms,
        terminated_by,
    })
}

/// An L∞-algebra in the antisymmetric convention: `l_k` of degree `2 - k`.
pub trait LInfty: Send + Sync {
    type Key: BasisKey;
    fn degree(&self, key: &Self::Key) -> i64;
    fn curvature(&self) -> Option<Elem<Self::Key>>;
    fn bracket(&self, args: &[Elem<Self::Key>]) -> Elem<Self::Key>;
    fn max_arity(&self) -> Option<usize> {
        None
    }
}

/// The L∞[1]-structure on `V[1]`: keys are shared with `V`, degrees drop by
/// one, `m_n(v_1[1],..,v_n[1]) = ± l_n(v_1,..,v_n)[1]` with the décalage sign.
pub struct Desuspended<L: LInfty>(pub L);

pub fn from_antisymmetric<L: LInfty>(l: L) -> Desuspended<L> {
    Desuspended(l)
}

fn degrees_of<K: BasisKey>(args: &[Elem<K>], deg: impl Fn(&K) -> i64) -> Option<Vec<i64>> {
    args.iter()
        .map(|x| match x.homogeneity(&deg) {
            Homogeneity::Homogeneous(d) => Some(d),
            _ => None,
        })
        .collect()
}

/// Evaluate a sign-twisted bracket on homogeneous components.
fn decalage_eval<K: BasisKey>(
    args: &[Elem<K>],
    v_degree: impl Fn(&K) -> i64 + Copy,
    inner: impl Fn(&[Elem<K>]) -> Elem<K>,
) -> Elem<K> {
    multilinear(args, v_degree, |parts| {
        let comps: Vec<Elem<K>> = parts.iter().map(|(_, e)| e.clone()).collect();
        let degs = degrees_of(&comps, v_degree).expect("components are homogeneous");
        inner(&comps).scaled(&Scalar::from_integer(decalage_sign(&degs).into()))
    })
}

impl<L: LInfty> LInftyOne for Desuspended<L> {
    type Key = L::Key;

    fn degree(&self, key: &Self::Key) -> i64 {
        self.0.degree(key) - 1
    }

    fn curvature(&self) -> Option<Elem<Self::Key>> {
        self.0.curvature()
    }

    fn bracket(&self, args: &[Elem<Self::Key>]) -> Elem<Self::Key> {
        decalage_eval(args, |k| self.0.degree(k), |c| self.0.bracket(c))
    }

    fn termination_bound(&self) -> Option<usize> {
        self.0.max_arity()
    }
}

/// Literal inverse of [`from_antisymmetric`]: `l_n(v) = ± m_n(v[1])` on the
/// space with degrees raised by one.
pub struct Suspended<A: LInftyOne>(pub A);

pub fn to_antisymmetric<A: LInftyOne>(a: A) -> Suspended<A> {
    Suspended(a)
}

impl<A: LInftyOne> LInfty for Suspended<A> {
    type Key = A::Key;

    fn degree(&self, key: &Self::Key) -> i64 {
        self.0.degree(key) + 1
    }

    fn curvature(&self) -> Option<Elem<Self::Key>> {
        self.0.curvature()
    }

    fn bracket(&self, args: &[Elem<Self::Key>]) -> Elem<Self::Key> {
        decalage_eval(args, |k| self.0.degree(k) + 1, |c| self.0.m(c))
    }

    fn max_arity(&self) -> Option<usize> {
        self.0.termination_bound()
    }
}

/// A graded Lie algebra, or a DGLA, as an L∞-algebra with `l_1 = d`,
/// `l_2 = [·,·]`.
pub struct LieAsLInfty<G: crate::gla::GradedLieAlgebra> {
    pub lie: G,
    pub differential: Option<Arc<dyn Fn(&Elem<G::Key>) -> Elem<G::Key> + Send + Sync>>,
}

impl<G: crate::gla::GradedLieAlgebra> LInfty for LieAsLInfty<G> {
    type Key = G::Key;

    fn degree(&self, key: &Self::Key) -> i64 {
        self.lie.degree(key)
    }

    fn curvature(&self) -> Option<Elem<Self::Key>> {
        None
    }

    fn bracket(&self, args: &[Elem<Self::Key>]) -> Elem<Self::Key> {
        match args.len() {
            1 => self.differential.as_ref().map(|d| d(&args[0])).unwrap_or_default(),
            2 => self.lie.bracket(&args[0], &args[1]),
            _ => Elem::zero(),
        }
    }

    fn max_arity(&self) -> Option<usize> {
        Some(2)
    }
}

/// Residual of the antisymmetric-convention relations
/// `Σ (-1)^{i(j-1)} Σ_σ χ(σ) l_j(l_i(..), ..)`.
pub fn antisymmetric_relations_residual<L: LInfty>(l: &L, args: &[Elem<L::Key>]) -> Result<Elem<L::Key>> {
    let n = args.len();
    let degrees = degrees_of(args, |k| l.degree(k))
        .ok_or_else(|| Error::arg("relations need homogeneous arguments"))?;
    let mut out = Elem::zero();
    let first = if l.curvature().is_some() { 0 } else { 1 };
    let ev = |xs: &[Elem<L::Key>]| {
        if xs.is_empty() {
            l.curvature().unwrap_or_default()
        } else {
            l.bracket(xs)
        }
    };
    for i in first..=n {
        let j = n + 1 - i;
        for s in unshuffles(i, n)? {
            let chi = koszul_sign_unchecked(s.images(), &degrees) * s.parity_sign();
            let permuted = s.apply(args);
            let inner = ev(&permuted[..i]);
            if inner.is_zero() {
                continue;
            }
            let mut outer = vec![inner];
            outer.extend_from_slice(&permuted[i..]);
            let sign = chi * if (i * (j + 1)) % 2 == 0 { 1 } else { -1 };
            out.add_scaled(&ev(&outer), &Scalar::from_integer(sign.into()));
        }
    }
    Ok(out)
}

/// Scales `m_arity` by a constant; used to inject faults.
pub struct Rescaled<A: LInftyOne> {
    pub inner: A,
    pub arity: usize,
    pub factor: Scalar,
}

impl<A: LInftyOne> LInftyOne for Rescaled<A> {
    type Key = A::Key;
    fn degree(&self, key: &Self::Key) -> i64 {
        self.inner.degree(key)
    }
    fn curvature(&self) -> Option<Elem<Self::Key>> {
        self.inner.curvature()
    }
    fn bracket(&self, args: &[Elem<Self::Key>]) -> Elem<Self::Key> {
        let v = self.inner.bracket(args);
        if args.len() == self.arity {
            v.scaled(&self.factor)
        } else {
            v
        }
    }
    fn termination_bound(&self) -> Option<usize> {
        self.inner.termination_bound()
    }
    fn filtration(&self) -> Option<Filtration<Self::Key>> {
        self.inner.filtration()
    }
    fn series_length(&self, rep: &Elem<Self::Key>, fixed: &[Elem<Self::Key>]) -> Option<usize> {
        self.inner.series_length(rep, fixed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gla::{sample_gla, StructureGLA};
    use crate::graded::{int, ratio};

    fn gla_one(g: StructureGLA) -> Desuspended<LieAsLInfty<StructureGLA>> {
        from_antisymmetric(LieAsLInfty { lie: g, differential: None })
    }

    /// Free-ish nilpotent example: x, y degree 1, z degree 2 = [x,y].
    fn heis() -> StructureGLA {
        StructureGLA::new(vec![("x".into(), 1), ("y".into(), 1), ("z".into(), 2)])
            .with_bracket(0, 1, Elem::basis(2))
    }

    #[test]
    fn gla_desuspension_sign() {
        let g = sample_gla();
        let (h, e) = (g.elem("h"), g.elem("e"));
        let a = gla_one(g);
        assert_eq!(a.m(&[h.clone(), e.clone()]), e.clone());
        // (-1)^{|e|} [e, h] = -(-e) = e
        assert_eq!(a.m(&[e.clone(), h.clone()]), e);
        assert!(a.m(&[h.clone()]).is_zero());
        assert_eq!(a.degree(&1), 0);
    }

    #[test]
    fn zero_structure_stays_zero() {
        let a = gla_one(crate::gla::abelian(vec![("u".into(), 0), ("w".into(), 3)]));
        for args in [vec![Elem::basis(0usize)], vec![Elem::basis(0), Elem::basis(1)]] {
            assert!(a.m(&args).is_zero());
        }
    }

    #[test]
    fn relations_for_desuspended_gla() {
        for g in [sample_gla(), heis()] {
            let a = gla_one(g.clone());
            let n = g.dim();
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let args = [Elem::basis(i), Elem::basis(j), Elem::basis(k)];
                        assert!(relations_residual(&a, &args).unwrap().is_zero());
                    }
                    let args = [Elem::basis(i), Elem::basis(j)];
                    assert!(relations_residual(&a, &args).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn relations_for_dgla() {
        // d a = b on an abelian algebra
        let g = crate::gla::abelian(vec![("a".into(), 0), ("b".into(), 1)]);
        let l = LieAsLInfty {
            lie: g,
            differential: Some(Arc::new(|x: &Elem<usize>| x.linear_map(|k| if *k == 0 { Elem::basis(1) } else { Elem::zero() }))),
        };
        let a = from_antisymmetric(l);
        assert_eq!(a.m(&[Elem::basis(0)]), Elem::basis(1));
        assert!(relations_residual(&a, &[Elem::basis(0)]).unwrap().is_zero());
    }

    #[test]
    fn round_trip_decalage() {
        let g = heis();
        let l = LieAsLInfty { lie: g.clone(), differential: None };
        let back = to_antisymmetric(from_antisymmetric(l));
        for i in 0..3 {
            for j in 0..3 {
                let args = [Elem::basis(i), Elem::basis(j)];
                assert_eq!(back.bracket(&args), crate::gla::GradedLieAlgebra::bracket(&g, &args[0], &args[1]));
            }
        }
        assert!(antisymmetric_relations_residual(&back, &[Elem::basis(0), Elem::basis(1), Elem::basis(0)])
            .unwrap()
            .is_zero());
    }

    #[test]
    fn mc_trivial_cases() {
        let a = gla_one(heis());
        let r = mc_residual(&a, &Elem::zero(), DEFAULT_MAX_TERMS).unwrap();
        assert!(r.vanishes());
        // x, y of degree 0 in V[1]; phi = x: m2(x,x)/2 = -[x,x]/2 = 0
        let r = mc_residual(&a, &Elem::basis(0), DEFAULT_MAX_TERMS).unwrap();
        assert!(r.vanishes());
        let r = mc_residual(&a, &(&Elem::basis(0) + &Elem::basis(1)), DEFAULT_MAX_TERMS).unwrap();
        // ½ (m2(x,y) + m2(y,x)) = -[x,y] = -z
        assert_eq!(r.residual, Elem::term(2, int(-1)));
        assert!(mc_residual(&a, &Elem::basis(2), 4).is_err());
    }

    #[test]
    fn twist_by_zero_is_identity() {
        let a = gla_one(heis());
        let t = twist(gla_one(heis()), Elem::zero(), true).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let args = [Elem::basis(i), Elem::basis(j)];
                assert_eq!(t.m(&args), a.m(&args));
            }
        }
        assert!(!t.is_curved());
    }

    #[test]
    fn twist_mc_correspondence() {
        let a = gla_one(heis());
        let alpha = Elem::term(0, ratio(3, 2));
        let t = twist(gla_one(heis()), alpha.clone(), true).unwrap();
        for beta in [Elem::basis(1), Elem::term(0, int(2)), Elem::zero()] {
            let lhs = mc_residual(&t, &beta, 8).unwrap().residual.is_zero();
            let rhs = mc_residual(&a, &(&alpha + &beta), 8).unwrap().residual.is_zero();
            assert_eq!(lhs, rhs);
        }
        assert!(twist(gla_one(heis()), &Elem::basis(0) + &Elem::basis(1), true).is_err());
    }

    #[test]
    fn gauge_trivial_cases() {
        let a = gla_one(heis());
        assert!(gauge_field(&a, &Elem::zero(), &Elem::basis(0), 8).unwrap().residual.is_zero());
        assert!(gauge_field(&a, &Elem::basis(0), &Elem::zero(), 8).is_err());
    }

    #[test]
    fn symmetry_on_gla() {
        let a = gla_one(heis());
        let s = Permutation::from_one_based(&[2, 1]).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let r = symmetry_residual(&a, &[Elem::basis(i), Elem::basis(j)], &s).unwrap();
                assert!(r.is_zero());
            }
        }
    }
}
