//! V-data `(L, 𝔞, P, Δ)` and the two derived-bracket algebras built from
//! them: the small algebra on `𝔞` and the big algebra on `L[1] ⊕ 𝔞`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gla::{parse_scalar, GradedLieAlgebra, StructureGLA, TermJson};
use crate::graded::{inv_factorial, ratio, sign_scalar, BasisKey, Elem, Homogeneity};
use crate::linfty::{koszul_sort, mc_residual, multilinear, Filtration, LInftyOne, MCReport};

pub type KeyMap<K> = Arc<dyn Fn(&K) -> Elem<K> + Send + Sync>;
pub type KeyPred<K> = Arc<dyn Fn(&K) -> bool + Send + Sync>;

const EXP_CAP: usize = 64;

pub struct VData<L: GradedLieAlgebra> {
    pub lie: Arc<L>,
    /// Membership of basis keys in `𝔞`.
    pub in_a: KeyPred<L::Key>,
    /// `P` on basis keys, extended linearly.
    pub proj: KeyMap<L::Key>,
    pub delta: Elem<L::Key>,
    /// Filtration of `L` (bracket shift 0).
    pub filtration: Option<Filtration<L::Key>>,
    /// Every bracket of `c + 1` elements of `L` vanishes.
    pub nilpotency: Option<usize>,
    /// Finite set of basis keys used by validation.
    pub sample: Vec<L::Key>,
}

impl<L: GradedLieAlgebra> Clone for VData<L> {
    fn clone(&self) -> Self {
        VData {
            lie: self.lie.clone(),
            in_a: self.in_a.clone(),
            proj: self.proj.clone(),
            delta: self.delta.clone(),
            filtration: self.filtration.clone(),
            nilpotency: self.nilpotency,
            sample: self.sample.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum VDataViolation<K: Ord> {
    ProjectionNotIdempotent { witness: Elem<K> },
    ImageOutsideA { witness: Elem<K> },
    NotIdentityOnA { witness: Elem<K> },
    NotAbelian { left: Elem<K>, right: Elem<K>, bracket: Elem<K> },
    KernelNotSubalgebra { left: Elem<K>, right: Elem<K>, projection: Elem<K> },
    DeltaDegree { delta: Elem<K> },
    DeltaNotSquareZero { square: Elem<K> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct VDataReport<K: Ord> {
    pub violations: Vec<VDataViolation<K>>,
    pub curved: bool,
}

impl<K: Ord> VDataReport<K> {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FiltrationViolation<K: Ord> {
    Bracket { left: Elem<K>, right: Elem<K> },
    DegreeZeroNotInF1 { witness: Elem<K> },
    Projection { witness: Elem<K> },
}

/// `e^{[·,φ]} x`, summed until the iterated bracket vanishes.
pub fn exp_ad<L: GradedLieAlgebra>(lie: &L, x: &Elem<L::Key>, phi: &Elem<L::Key>, cap: usize) -> Result<Elem<L::Key>> {
    let mut out = x.clone();
    let mut t = x.clone();
    for n in 1..=cap {
        t = lie.bracket(&t, phi);
        if t.is_zero() {
            return Ok(out);
        }
        out.add_scaled(&t, &inv_factorial(n));
    }
    Err(Error::NonTerminating(format!(
        "e^[.,phi] still has nonzero term {:?} after {} steps",
        t, cap
    )))
}

impl<L: GradedLieAlgebra + 'static> VData<L> {
    pub fn project(&self, x: &Elem<L::Key>) -> Elem<L::Key> {
        x.linear_map(|k| (self.proj)(k))
    }

    pub fn in_a(&self, x: &Elem<L::Key>) -> bool {
        x.keys().all(|k| (self.in_a)(k))
    }

    pub fn is_curved(&self) -> bool {
        !self.project(&self.delta).is_zero()
    }

    pub fn degree(&self, k: &L::Key) -> i64 {
        self.lie.degree(k)
    }

    fn exp_cap(&self, x: &Elem<L::Key>) -> usize {
        match (&self.filtration, self.nilpotency) {
            (_, Some(c)) => c + 1,
            (Some(f), None) => {
                let fx = f.of(x).unwrap_or(f.top);
                EXP_CAP.max((f.top - fx + 2).max(0) as usize)
            }
            _ => EXP_CAP,
        }
    }

    pub fn exp_ad(&self, x: &Elem<L::Key>, phi: &Elem<L::Key>) -> Result<Elem<L::Key>> {
        exp_ad(self.lie.as_ref(), x, phi, self.exp_cap(x))
    }

    /// Checks the V-data axioms on the basis sample.
    pub fn validate(&self) -> VDataReport<L::Key> {
        let mut violations = Vec::new();
        let basis: Vec<Elem<L::Key>> = self.sample.iter().cloned().map(Elem::basis).collect();
        for x in &basis {
            let px = self.project(x);
            if self.project(&px) != px {
                violations.push(VDataViolation::ProjectionNotIdempotent { witness: x.clone() });
            }
            if !self.in_a(&px) {
                violations.push(VDataViolation::ImageOutsideA { witness: x.clone() });
            }
            if self.in_a(x) && px != *x {
                violations.push(VDataViolation::NotIdentityOnA { witness: x.clone() });
            }
        }
        let a_basis: Vec<&Elem<L::Key>> = basis.iter().filter(|x| self.in_a(x)).collect();
        for (i, x) in a_basis.iter().enumerate() {
            for y in &a_basis[i..] {
                let b = self.lie.bracket(x, y);
                if !b.is_zero() {
                    violations.push(VDataViolation::NotAbelian {
                        left: (*x).clone(),
                        right: (*y).clone(),
                        bracket: b,
                    });
                }
            }
        }
        let kernel: Vec<Elem<L::Key>> = basis
            .iter()
            .map(|x| x - &self.project(x))
            .filter(|x| !x.is_zero())
            .collect();
        for (i, x) in kernel.iter().enumerate() {
            for y in &kernel[i..] {
                let p = self.project(&self.lie.bracket(x, y));
                if !p.is_zero() {
                    violations.push(VDataViolation::KernelNotSubalgebra {
                        left: x.clone(),
                        right: y.clone(),
                        projection: p,
                    });
                }
            }
        }
        if !self.delta.homogeneity(|k| self.lie.degree(k)).admits(1) {
            violations.push(VDataViolation::DeltaDegree { delta: self.delta.clone() });
        }
        let sq = self.lie.bracket(&self.delta, &self.delta);
        if !sq.is_zero() {
            violations.push(VDataViolation::DeltaNotSquareZero { square: sq });
        }
        VDataReport {
            violations,
            curved: self.is_curved(),
        }
    }

    /// Filtered V-data axioms on sample pairs: brackets of filtration
    /// degree zero, `𝔞_0 ⊂ F^1`, `P` of filtration degree zero.
    pub fn check_filtration(&self) -> Vec<FiltrationViolation<L::Key>> {
        let Some(f) = &self.filtration else {
            return Vec::new();
        };
        let mut out = Vec::new();
        let basis: Vec<Elem<L::Key>> = self.sample.iter().cloned().map(Elem::basis).collect();
        for x in &basis {
            for y in &basis {
                let b = self.lie.bracket(x, y);
                if let (Some(fb), Some(fx), Some(fy)) = (f.of(&b), f.of(x), f.of(y)) {
                    if fb < fx + fy {
                        out.push(FiltrationViolation::Bracket {
                            left: x.clone(),
                            right: y.clone(),
                        });
                    }
                }
            }
            if self.in_a(x) && self.lie.homogeneity(x) == Homogeneity::Homogeneous(0) && f.of(x).unwrap_or(1) < 1 {
                out.push(FiltrationViolation::DegreeZeroNotInF1 { witness: x.clone() });
            }
            if let (Some(fp), Some(fx)) = (f.of(&self.project(x)), f.of(x)) {
                if fp < fx {
                    out.push(FiltrationViolation::Projection { witness: x.clone() });
                }
            }
        }
        out
    }

    fn require_a0(&self, phi: &Elem<L::Key>) -> Result<()> {
        if !self.in_a(phi) || !self.lie.homogeneity(phi).admits(0) {
            return Err(Error::arg("expected an element of degree 0 in the abelian subalgebra"));
        }
        Ok(())
    }

    fn exp_terminates(&self, phi: &Elem<L::Key>) -> bool {
        phi.is_zero()
            || self.nilpotency.is_some()
            || self.filtration.as_ref().map(|f| f.of(phi).unwrap_or(1) >= 1).unwrap_or(false)
    }

    /// The V-data with `P` replaced by `P_φ = P ∘ e^{[·,φ]}`.
    pub fn p_phi(&self, phi: &Elem<L::Key>) -> Result<VData<L>> {
        self.require_a0(phi)?;
        if !self.exp_terminates(phi) {
            return Err(Error::NonTerminating(
                "e^[.,phi] needs a nilpotent algebra or phi in F^1".into(),
            ));
        }
        if phi.is_zero() {
            return Ok(self.clone());
        }
        for k in &self.sample {
            self.exp_ad(&Elem::basis(k.clone()), phi)?;
        }
        let base = self.clone();
        let phi = phi.clone();
        let mut out = self.clone();
        out.proj = Arc::new(move |k: &L::Key| {
            let e = base
                .exp_ad(&Elem::basis(k.clone()), &phi)
                .expect("termination checked when the projection was built");
            base.project(&e)
        });
        Ok(out)
    }

    pub fn small_algebra(&self) -> SmallAlgebra<L> {
        let p_delta = self.project(&self.delta);
        SmallAlgebra {
            v: self.clone(),
            curvature: if p_delta.is_zero() { None } else { Some(p_delta) },
        }
    }

    pub fn big_algebra(&self) -> Result<BigAlgebra<L>> {
        if self.is_curved() {
            return Err(Error::arg("the big algebra needs Delta in the kernel of P"));
        }
        Ok(BigAlgebra { v: self.clone() })
    }

    /// `(L, 𝔞, P_{Φ'}, Δ + Δ')` for a Maurer-Cartan element `(Δ'[1], Φ')`
    /// of the big algebra.
    pub fn twist_vdata(&self, alpha: &Elem<BigKey<L::Key>>, max_terms: usize) -> Result<VData<L>> {
        let big = self.big_algebra()?;
        let rep = mc_residual(&big, alpha, max_terms)?;
        if !rep.vanishes() {
            return Err(Error::NotMaurerCartan {
                residual: format!("{:?}", rep.residual),
            });
        }
        let (dprime, phiprime) = split_big(alpha);
        let mut out = self.p_phi(&phiprime)?;
        out.delta = &self.delta + &dprime;
        Ok(out)
    }

    /// Both sides of the Maurer-Cartan correspondence for a perturbation
    /// `(Δ̃, Φ̃)` around `Φ ∈ MC(𝔞^P_Δ)`.
    pub fn machine_check(
        &self,
        phi: &Elem<L::Key>,
        dtilde: &Elem<L::Key>,
        ptilde: &Elem<L::Key>,
        max_terms: usize,
    ) -> Result<MachineReport<L::Key>> {
        self.require_a0(phi)?;
        self.require_a0(ptilde)?;
        if !self.lie.homogeneity(dtilde).admits(1) {
            return Err(Error::arg("the perturbation of Delta must have degree 1"));
        }
        let small = self.small_algebra();
        let base_mc = mc_residual(&small, phi, max_terms)?;
        if !base_mc.vanishes() {
            return Err(Error::NotMaurerCartan {
                residual: format!("{:?}", base_mc.residual),
            });
        }
        let total = &self.delta + dtilde;
        let square = self.lie.bracket(&total, &total);
        let shifted = self.exp_ad(&total, &(phi + ptilde))?;
        let left_mc = self.project(&shifted);

        let right_v = self.p_phi(phi)?;
        let big = right_v.big_algebra()?;
        let alpha = &dtilde.map_keys(|k| BigKey::Shift(k.clone())) + &ptilde.map_keys(|k| BigKey::Ab(k.clone()));
        let right = mc_residual(&big, &alpha, max_terms)?;
        let (rl, ra) = split_big(&right.residual);

        let left_vanishes = square.is_zero() && left_mc.is_zero();
        let right_vanishes = right.vanishes();
        let componentwise = rl == square.scaled(&-ratio(1, 2)) && ra == left_mc;
        Ok(MachineReport {
            square,
            left_mc,
            right,
            left_vanishes,
            right_vanishes,
            componentwise,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MachineReport<K: Ord> {
    /// `[Δ+Δ̃, Δ+Δ̃]`
    pub square: Elem<K>,
    /// `P e^{[·,Φ+Φ̃]}(Δ+Δ̃)`
    pub left_mc: Elem<K>,
    /// MC residual of `(Δ̃[1], Φ̃)` in the big algebra of `(L, 𝔞, P_Φ, Δ)`.
    pub right: MCReport<BigKey<K>>,
    pub left_vanishes: bool,
    pub right_vanishes: bool,
    /// The right residual equals `(-½[Δ+Δ̃,Δ+Δ̃][1], P e^{[·,Φ+Φ̃]}(Δ+Δ̃))`.
    pub componentwise: bool,
}

impl<K: Ord> MachineReport<K> {
    pub fn agree(&self) -> bool {
        self.left_vanishes == self.right_vanishes
    }
}

/// `𝔞^P_Δ`: `m_0 = PΔ`, `m_n(a_1..a_n) = P[..[[Δ,a_1],a_2]..,a_n]`.
pub struct SmallAlgebra<L: GradedLieAlgebra> {
    v: VData<L>,
    curvature: Option<Elem<L::Key>>,
}

impl<L: GradedLieAlgebra + 'static> SmallAlgebra<L> {
    pub fn vdata(&self) -> &VData<L> {
        &self.v
    }
}

impl<L: GradedLieAlgebra + 'static> LInftyOne for SmallAlgebra<L> {
    type Key = L::Key;

    fn degree(&self, key: &L::Key) -> i64 {
        self.v.lie.degree(key)
    }

    fn curvature(&self) -> Option<Elem<L::Key>> {
        self.curvature.clone()
    }

    fn bracket(&self, args: &[Elem<L::Key>]) -> Elem<L::Key> {
        self.v.project(&self.v.lie.nested_bracket(&self.v.delta, args))
    }

    fn termination_bound(&self) -> Option<usize> {
        self.v.nilpotency.map(|c| c.saturating_sub(1))
    }

    fn filtration(&self) -> Option<Filtration<L::Key>> {
        let f = self.v.filtration.as_ref()?;
        let shift = f.of(&self.v.delta).unwrap_or(f.top + 1);
        Some(f.with_shift(shift))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BigKey<K> {
    /// `x[1]` for a basis key `x` of `L`.
    Shift(K),
    /// A basis key of `𝔞`.
    Ab(K),
}

impl<K> BigKey<K> {
    pub fn inner(&self) -> &K {
        match self {
            BigKey::Shift(k) | BigKey::Ab(k) => k,
        }
    }

    pub fn is_shift(&self) -> bool {
        matches!(self, BigKey::Shift(_))
    }
}

/// Split an element of `L[1] ⊕ 𝔞` into its `L` and `𝔞` parts.
pub fn split_big<K: BasisKey>(x: &Elem<BigKey<K>>) -> (Elem<K>, Elem<K>) {
    let l = x.filter(|k| k.is_shift()).map_keys(|k| k.inner().clone());
    let a = x.filter(|k| !k.is_shift()).map_keys(|k| k.inner().clone());
    (l, a)
}

pub fn join_big<K: BasisKey>(l: &Elem<K>, a: &Elem<K>) -> Elem<BigKey<K>> {
    &l.map_keys(|k| BigKey::Shift(k.clone())) + &a.map_keys(|k| BigKey::Ab(k.clone()))
}

/// `(L[1] ⊕ 𝔞)^P_Δ`.
pub struct BigAlgebra<L: GradedLieAlgebra> {
    v: VData<L>,
}

impl<L: GradedLieAlgebra> Clone for BigAlgebra<L> {
    fn clone(&self) -> Self {
        BigAlgebra { v: self.v.clone() }
    }
}

impl<L: GradedLieAlgebra + 'static> BigAlgebra<L> {
    pub fn vdata(&self) -> &VData<L> {
        &self.v
    }

    fn ad_delta(&self, x: &Elem<L::Key>) -> Elem<L::Key> {
        self.v.lie.bracket(&self.v.delta, x)
    }

    fn eval_sorted(&self, comps: &[(BigKey<()>, Elem<L::Key>)]) -> Elem<BigKey<L::Key>> {
        let shifts = comps.iter().take_while(|(c, _)| matches!(c, BigKey::Shift(_))).count();
        let n = comps.len();
        let to_shift = |e: &Elem<L::Key>| e.map_keys(|k| BigKey::Shift(k.clone()));
        let to_ab = |e: &Elem<L::Key>| e.map_keys(|k| BigKey::Ab(k.clone()));
        let rest: Vec<Elem<L::Key>> = comps[shifts.min(n)..].iter().map(|(_, e)| e.clone()).collect();
        match (n, shifts) {
            (1, 1) => {
                let x = &comps[0].1;
                &to_shift(&-self.ad_delta(x)) + &to_ab(&self.v.project(x))
            }
            (2, 2) => {
                let (x, y) = (&comps[0].1, &comps[1].1);
                let dx = match self.v.lie.homogeneity(x) {
                    Homogeneity::Homogeneous(d) => d,
                    _ => 0,
                };
                to_shift(&self.v.lie.bracket(x, y).scaled(&sign_scalar(dx)))
            }
            (_, 1) => to_ab(&self.v.project(&self.v.lie.nested_bracket(&comps[0].1, &rest))),
            (_, 0) => to_ab(&self.v.project(&self.v.lie.nested_bracket(&self.v.delta, &rest))),
            _ => Elem::zero(),
        }
    }
}

impl<L: GradedLieAlgebra + 'static> LInftyOne for BigAlgebra<L> {
    type Key = BigKey<L::Key>;

    fn degree(&self, key: &Self::Key) -> i64 {
        match key {
            BigKey::Shift(k) => self.v.lie.degree(k) - 1,
            BigKey::Ab(k) => self.v.lie.degree(k),
        }
    }

    fn curvature(&self) -> Option<Elem<Self::Key>> {
        None
    }

    fn bracket(&self, args: &[Elem<Self::Key>]) -> Elem<Self::Key> {
        multilinear(
            args,
            |k| {
                let class = if k.is_shift() { BigKey::Shift(()) } else { BigKey::Ab(()) };
                (class, self.degree(k))
            },
            |parts| {
                let (sorted, eps) = koszul_sort(parts, |p| p.0 .1, |p| if p.0 .0.is_shift() { 0 } else { 1 });
                let comps: Vec<(BigKey<()>, Elem<L::Key>)> = sorted
                    .iter()
                    .map(|((c, _), e)| (c.clone(), e.map_keys(|k| k.inner().clone())))
                    .collect();
                self.eval_sorted(&comps).scaled(&eps)
            },
        )
    }

    fn termination_bound(&self) -> Option<usize> {
        self.v.nilpotency.map(|c| c.max(2))
    }

    fn filtration(&self) -> Option<Filtration<Self::Key>> {
        let f = self.v.filtration.clone()?;
        let c = f.of(&self.v.delta).unwrap_or(0).min(0);
        let g = f.clone();
        Some(Filtration::new(
            move |k: &BigKey<L::Key>| match k {
                BigKey::Shift(x) => g.key_degree(x) - c,
                BigKey::Ab(x) => g.key_degree(x),
            },
            c,
            f.top - c,
        ))
    }

    /// Nonzero brackets take at most two entries from `L[1]`, so only the
    /// `𝔞` part of the repeated argument has to lie in `F^1`.
    fn series_length(&self, rep: &Elem<Self::Key>, fixed: &[Elem<Self::Key>]) -> Option<usize> {
        let f = self.v.filtration.as_ref()?;
        let (x, a) = split_big(rep);
        if a.is_zero() {
            return Some(3);
        }
        let fa = f.of(&a)?;
        if fa < 1 {
            return None;
        }
        let mut xr = fa;
        if let Some(fx) = f.of(&x) {
            xr = xr.min(fx);
        }
        if let Some(fd) = f.of(&self.v.delta) {
            xr = xr.min(fd + fa);
        }
        let mut base = xr;
        for g in fixed {
            let (gl, ga) = split_big(g);
            let parts = [f.of(&gl), f.of(&ga), f.of(&self.v.delta).map(|d| d + f.of(&ga).unwrap_or(0))];
            base += parts.iter().flatten().copied().min()?;
        }
        let mut k = 1i64;
        while (k - 1) * fa + base <= f.top {
            k += 1;
        }
        Some((k as usize).max(3))
    }
}

/// The big algebra on `L'[1] ⊕ 𝔞` for a bracket-closed, `D`-stable `L'`.
pub struct Restricted<L: GradedLieAlgebra> {
    big: BigAlgebra<L>,
    member: KeyPred<L::Key>,
}

impl<L: GradedLieAlgebra + 'static> Restricted<L> {
    pub fn contains(&self, x: &Elem<BigKey<L::Key>>) -> bool {
        x.keys().all(|k| match k {
            BigKey::Shift(k) => (self.member)(k),
            BigKey::Ab(k) => (self.big.v.in_a)(k),
        })
    }
}

pub fn restrict<L: GradedLieAlgebra + 'static>(big: BigAlgebra<L>, member: KeyPred<L::Key>) -> Result<Restricted<L>> {
    let v = &big.v;
    let inside: Vec<Elem<L::Key>> = v
        .sample
        .iter()
        .filter(|k| member(k))
        .cloned()
        .map(Elem::basis)
        .collect();
    let closed = |e: &Elem<L::Key>| e.keys().all(|k| member(k));
    for x in &inside {
        let dx = v.lie.bracket(&v.delta, x);
        if !closed(&dx) {
            return Err(Error::Validation(format!("subspace not stable under D: D({:?}) = {:?}", x, dx)));
        }
        for y in &inside {
            let b = v.lie.bracket(x, y);
            if !closed(&b) {
                return Err(Error::Validation(format!(
                    "subspace not closed under the bracket: [{:?}, {:?}] = {:?}",
                    x, y, b
                )));
            }
        }
    }
    Ok(Restricted { big, member })
}

impl<L: GradedLieAlgebra + 'static> LInftyOne for Restricted<L> {
    type Key = BigKey<L::Key>;
    fn degree(&self, key: &Self::Key) -> i64 {
        self.big.degree(key)
    }
    fn curvature(&self) -> Option<Elem<Self::Key>> {
        None
    }
    fn bracket(&self, args: &[Elem<Self::Key>]) -> Elem<Self::Key> {
        self.big.bracket(args)
    }
    fn termination_bound(&self) -> Option<usize> {
        self.big.termination_bound()
    }
    fn filtration(&self) -> Option<Filtration<Self::Key>> {
        self.big.filtration()
    }
    fn series_length(&self, rep: &Elem<Self::Key>, fixed: &[Elem<Self::Key>]) -> Option<usize> {
        self.big.series_length(rep, fixed)
    }
}

/// A seven-dimensional nilpotent graded Lie algebra with
/// `L_0 = span(a, b)`, `L_1 = span(x1, x2, x3, y)`, `L_2 = span(z)` and
/// brackets `[a,x1] = x2`, `[a,x2] = x3`, `[a,x3] = y`, `[b,x1] = x3`,
/// `[b,x2] = y`, `[x1,x1] = z`.
pub fn nilpotent_gla() -> StructureGLA {
    let names = [("a", 0), ("b", 0), ("x1", 1), ("x2", 1), ("x3", 1), ("y", 1), ("z", 2)];
    let g = StructureGLA::new(names.iter().map(|(n, d)| (n.to_string(), *d)).collect());
    let e = |n: &str| g.elem(n);
    let i = |n: &str| g.index_of(n).expect("known name");
    let entries = [
        ("a", "x1", "x2"),
        ("a", "x2", "x3"),
        ("a", "x3", "y"),
        ("b", "x1", "x3"),
        ("b", "x2", "y"),
        ("x1", "x1", "z"),
    ];
    let mut out = g.clone();
    for (l, r, v) in entries {
        out.set_bracket(i(l), i(r), e(v)).expect("valid entry");
    }
    out
}

/// V-data on [`nilpotent_gla`] with `𝔞 = span(a, b, y)`, `P` the projection
/// along `span(x1, x2, x3, z)` and `Δ = x2`.
pub fn nilpotent_vdata() -> VData<StructureGLA> {
    let g = nilpotent_gla();
    let in_a: Vec<bool> = g.names().iter().map(|n| matches!(n.as_str(), "a" | "b" | "y")).collect();
    structure_vdata(g.clone(), in_a, g.elem("x2")).expect("valid example")
}

/// V-data on a structure-constant algebra with `𝔞` spanned by the flagged
/// basis elements and `P` the projection along the others.
pub fn structure_vdata(g: StructureGLA, in_a: Vec<bool>, delta: Elem<usize>) -> Result<VData<StructureGLA>> {
    if in_a.len() != g.dim() {
        return Err(Error::arg("membership flags do not match the basis"));
    }
    let proj: Vec<Elem<usize>> = (0..g.dim())
        .map(|i| if in_a[i] { Elem::basis(i) } else { Elem::zero() })
        .collect();
    structure_vdata_with_projection(g, in_a, proj, delta)
}

pub fn structure_vdata_with_projection(
    g: StructureGLA,
    in_a: Vec<bool>,
    proj: Vec<Elem<usize>>,
    delta: Elem<usize>,
) -> Result<VData<StructureGLA>> {
    if proj.len() != g.dim() || delta.keys().any(|k| *k >= g.dim()) {
        return Err(Error::arg("projection or Delta does not match the basis"));
    }
    let nilpotency = g.nilpotency_class();
    let sample = (0..g.dim()).collect();
    let in_a = Arc::new(in_a);
    let proj = Arc::new(proj);
    Ok(VData {
        lie: Arc::new(g),
        in_a: Arc::new(move |k: &usize| in_a[*k]),
        proj: Arc::new(move |k: &usize| proj[*k].clone()),
        delta,
        filtration: None,
        nilpotency,
        sample,
    })
}

/// JSON descriptor of a V-data over a structure-constant algebra.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VDataJson {
    pub gla: crate::gla::GlaJson,
    /// Names of the basis elements spanning `𝔞`.
    pub abelian: Vec<String>,
    /// Images of basis elements under `P`; unlisted elements map to
    /// themselves if in `𝔞` and to zero otherwise.
    #[serde(default)]
    pub projection: Vec<ProjectionJson>,
    #[serde(default)]
    pub delta: Vec<TermJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProjectionJson {
    pub basis: String,
    pub image: Vec<TermJson>,
}

pub fn parse_terms(g: &StructureGLA, terms: &[TermJson]) -> Result<Elem<usize>> {
    let mut e = Elem::zero();
    for t in terms {
        let k = g
            .index_of(&t.basis)
            .ok_or_else(|| Error::Parse(format!("unknown basis element {:?}", t.basis)))?;
        e.add_term(k, parse_scalar(&t.coef_num, &t.coef_den)?);
    }
    Ok(e)
}

impl VDataJson {
    pub fn build(&self) -> Result<VData<StructureGLA>> {
        let g = StructureGLA::from_json(&self.gla)?;
        let mut in_a = vec![false; g.dim()];
        for n in &self.abelian {
            let i = g
                .index_of(n)
                .ok_or_else(|| Error::Parse(format!("unknown basis element {:?}", n)))?;
            in_a[i] = true;
        }
        let mut proj: Vec<Elem<usize>> = (0..g.dim())
            .map(|i| if in_a[i] { Elem::basis(i) } else { Elem::zero() })
            .collect();
        for p in &self.projection {
            let i = g
                .index_of(&p.basis)
                .ok_or_else(|| Error::Parse(format!("unknown basis element {:?}", p.basis)))?;
            proj[i] = parse_terms(&g, &p.image)?;
        }
        let delta = parse_terms(&g, &self.delta)?;
        structure_vdata_with_projection(g, in_a, proj, delta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::int;
    use crate::linfty::{relations_residual, twist, DEFAULT_MAX_TERMS};

    fn v() -> VData<StructureGLA> {
        nilpotent_vdata()
    }

    #[test]
    fn example_is_valid() {
        let g = nilpotent_gla();
        assert!(g.verify().ok(), "{:?}", g.verify());
        assert_eq!(g.nilpotency_class(), Some(4));
        let r = v().validate();
        assert!(r.ok(), "{:?}", r);
        assert!(!r.curved);
    }

    #[test]
    fn abelian_and_square_violations() {
        let g = nilpotent_gla();
        let in_a: Vec<bool> = g.names().iter().map(|n| matches!(n.as_str(), "a" | "x1")).collect();
        let bad = structure_vdata(g.clone(), in_a, g.elem("x1")).unwrap();
        let r = bad.validate();
        assert!(r.violations.iter().any(|x| matches!(x, VDataViolation::NotAbelian { .. })));
        assert!(r.violations.iter().any(|x| matches!(x, VDataViolation::DeltaNotSquareZero { .. })));
    }

    #[test]
    fn small_algebra_mc_set() {
        let v = v();
        let s = v.small_algebra();
        let g = nilpotent_gla();
        let (a, b) = (g.elem("a"), g.elem("b"));
        // MC iff t = s^2 / 2 for phi = s a + t b
        let phi = &a.scaled(&int(2)) + &b.scaled(&int(2));
        assert!(mc_residual(&s, &phi, DEFAULT_MAX_TERMS).unwrap().vanishes());
        let phi = &a.scaled(&int(2)) + &b.scaled(&int(1));
        assert!(!mc_residual(&s, &phi, DEFAULT_MAX_TERMS).unwrap().residual.is_zero());
        // Remark: phi MC iff P_phi(Delta) = 0
        let pp = v.p_phi(&(&a.scaled(&int(2)) + &b.scaled(&int(2)))).unwrap();
        assert!(pp.project(&v.delta).is_zero());
    }

    #[test]
    fn big_algebra_basic_brackets() {
        let v = v();
        let big = v.big_algebra().unwrap();
        let g = nilpotent_gla();
        let x1 = g.elem("x1").map_keys(|k| BigKey::Shift(*k));
        let r = big.m(&[x1.clone(), x1.clone()]);
        // (-1)^{|x1|}[x1,x1][1] = -z[1]
        assert_eq!(r, Elem::term(BigKey::Shift(g.index_of("z").unwrap()), int(-1)));
        for i in 0..g.dim() {
            for j in 0..g.dim() {
                for k in 0..g.dim() {
                    for (p, q, r) in [(true, true, false), (true, false, false), (false, false, false), (true, false, true)] {
                        let mk = |s: bool, i: usize| Elem::basis(if s { BigKey::Shift(i) } else { BigKey::Ab(i) });
                        if (!p && !v.in_a(&Elem::basis(i))) || (!q && !v.in_a(&Elem::basis(j))) || (!r && !v.in_a(&Elem::basis(k))) {
                            continue;
                        }
                        let args = [mk(p, i), mk(q, j), mk(r, k)];
                        assert!(relations_residual(&big, &args).unwrap().is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn delta_zero_gives_p_on_unary() {
        let g = nilpotent_gla();
        let in_a: Vec<bool> = g.names().iter().map(|n| matches!(n.as_str(), "a" | "b" | "y")).collect();
        let v0 = structure_vdata(g.clone(), in_a, Elem::zero()).unwrap();
        let big = v0.big_algebra().unwrap();
        let x = g.elem("x3");
        let ax = g.elem("a");
        assert!(big.m(&[x.map_keys(|k| BigKey::Shift(*k))]).is_zero());
        assert_eq!(big.m(&[ax.map_keys(|k| BigKey::Shift(*k))]), ax.map_keys(|k| BigKey::Ab(*k)));
        // twisting (L, a, P, 0) by (Delta[1], 0) reproduces Delta = x2
        let alpha = g.elem("x2").map_keys(|k| BigKey::Shift(*k));
        let tv = v0.twist_vdata(&alpha, DEFAULT_MAX_TERMS).unwrap();
        assert_eq!(tv.delta, g.elem("x2"));
    }

    #[test]
    fn machine_trivial_and_twist_compat() {
        let v = v();
        let g = nilpotent_gla();
        let phi = &g.elem("a").scaled(&int(2)) + &g.elem("b").scaled(&int(2));
        let r = v.machine_check(&phi, &Elem::zero(), &Elem::zero(), DEFAULT_MAX_TERMS).unwrap();
        assert!(r.left_vanishes && r.right_vanishes && r.componentwise);

        // x3[1] is Maurer-Cartan; adding x1[1] brings in {x1[1], x1[1]} = -z[1]
        let alpha = join_big(&g.elem("x3"), &Elem::zero());
        let big = v.big_algebra().unwrap();
        assert!(mc_residual(&big, &alpha, DEFAULT_MAX_TERMS).unwrap().vanishes());
        let bad = join_big(&(&g.elem("x3") + &g.elem("x1")), &Elem::zero());
        assert!(!mc_residual(&big, &bad, DEFAULT_MAX_TERMS).unwrap().vanishes());

        let twisted = twist(big, alpha.clone(), true).unwrap();
        let tv = v.twist_vdata(&alpha, DEFAULT_MAX_TERMS).unwrap();
        let tbig = tv.big_algebra().unwrap();
        let all: Vec<Elem<BigKey<usize>>> = (0..g.dim())
            .flat_map(|i| {
                let mut out = vec![Elem::basis(BigKey::Shift(i))];
                if v.in_a(&Elem::basis(i)) {
                    out.push(Elem::basis(BigKey::Ab(i)));
                }
                out
            })
            .collect();
        for x in &all {
            assert_eq!(twisted.m(&[x.clone()]), tbig.m(&[x.clone()]));
            for y in &all {
                assert_eq!(twisted.m(&[x.clone(), y.clone()]), tbig.m(&[x.clone(), y.clone()]));
            }
        }
    }

    #[test]
    fn restriction_to_kernel() {
        let v = v();
        let big = v.big_algebra().unwrap();
        let g = nilpotent_gla();
        let ker: Vec<bool> = g.names().iter().map(|n| !matches!(n.as_str(), "a" | "b" | "y")).collect();
        let ker2 = ker.clone();
        assert!(restrict(big, Arc::new(move |k: &usize| ker2[*k])).is_ok());
        let big = v.big_algebra().unwrap();
        // span(x1) is not closed: [x1, x1] = z
        assert!(restrict(big, Arc::new(|k: &usize| *k == 2)).is_err());
    }
}
