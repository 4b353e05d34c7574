//! Graded-vector-space substrate: exact scalars, sparse elements over an
//! arbitrary ordered basis, Koszul signs, unshuffles and the décalage sign.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Exact rational scalar. `BigRational` keeps numerator and denominator
/// reduced with a positive denominator.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

/// `(-1)^e` as a scalar.
pub fn sign_scalar(e: i64) -> Scalar {
    if e.rem_euclid(2) == 0 {
        Scalar::one()
    } else {
        -Scalar::one()
    }
}

/// `1 / n!`
pub fn inv_factorial(n: usize) -> Scalar {
    let mut f = BigInt::one();
    for k in 2..=n {
        f *= BigInt::from(k);
    }
    Scalar::new(BigInt::one(), f)
}

pub fn factorial(n: usize) -> Scalar {
    inv_factorial(n).recip()
}

/// Keys of a sparse basis.
pub trait BasisKey: Ord + Clone + Debug + Send + Sync + 'static {}
impl<T: Ord + Clone + Debug + Send + Sync + 'static> BasisKey for T {}

/// Homogeneity of an element with respect to a degree function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Homogeneity {
    Zero,
    Homogeneous(i64),
    Mixed,
}

impl Homogeneity {
    /// True if the element may be regarded as having degree `d`.
    pub fn admits(self, d: i64) -> bool {
        match self {
            Homogeneity::Zero => true,
            Homogeneity::Homogeneous(e) => e == d,
            Homogeneity::Mixed => false,
        }
    }
}

/// Sparse exact linear combination of basis keys. Zero coefficients are
/// never stored.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem<K: Ord> {
    terms: BTreeMap<K, Scalar>,
}

impl<K: Ord + Debug> Debug for Elem<K> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})·{:?}", c, k)?;
        }
        Ok(())
    }
}

impl<K: Ord> Default for Elem<K> {
    fn default() -> Self {
        Elem {
            terms: BTreeMap::new(),
        }
    }
}

impl<K: BasisKey> Elem<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(k: K) -> Self {
        Self::term(k, Scalar::one())
    }

    pub fn term(k: K, c: Scalar) -> Self {
        let mut e = Self::zero();
        e.add_term(k, c);
        e
    }

    pub fn from_terms<I: IntoIterator<Item = (K, Scalar)>>(it: I) -> Self {
        let mut e = Self::zero();
        for (k, c) in it {
            e.add_term(k, c);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, k: &K) -> Scalar {
        self.terms.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Scalar)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    pub fn add_term(&mut self, k: K, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(k) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v * c);
        }
    }

    pub fn scaled(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Elem {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    /// Keep only the terms whose key satisfies `pred`.
    pub fn filter(&self, pred: impl Fn(&K) -> bool) -> Self {
        Elem {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| pred(k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// Relabel every key; colliding images are summed.
    pub fn map_keys<J: BasisKey>(&self, f: impl Fn(&K) -> J) -> Elem<J> {
        Elem::from_terms(self.terms.iter().map(|(k, v)| (f(k), v.clone())))
    }

    /// Apply a linear map given on basis keys.
    pub fn linear_map<J: BasisKey>(&self, f: impl Fn(&K) -> Elem<J>) -> Elem<J> {
        let mut out = Elem::zero();
        for (k, v) in &self.terms {
            out.add_scaled(&f(k), v);
        }
        out
    }

    pub fn homogeneity(&self, degree: impl Fn(&K) -> i64) -> Homogeneity {
        let mut it = self.terms.keys().map(degree);
        match it.next() {
            None => Homogeneity::Zero,
            Some(d) => {
                if it.all(|e| e == d) {
                    Homogeneity::Homogeneous(d)
                } else {
                    Homogeneity::Mixed
                }
            }
        }
    }

    /// Split into homogeneous components indexed by degree.
    pub fn split_by_degree(&self, degree: impl Fn(&K) -> i64) -> BTreeMap<i64, Self> {
        let mut out: BTreeMap<i64, Self> = BTreeMap::new();
        for (k, v) in &self.terms {
            out.entry(degree(k))
                .or_default()
                .terms
                .insert(k.clone(), v.clone());
        }
        out
    }

    pub fn max_abs_coeff(&self) -> Scalar {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Scalar::zero)
    }
}

impl<K: BasisKey> AddAssign<&Elem<K>> for Elem<K> {
    fn add_assign(&mut self, rhs: &Elem<K>) {
        for (k, v) in &rhs.terms {
            self.add_term(k.clone(), v.clone());
        }
    }
}

impl<K: BasisKey> SubAssign<&Elem<K>> for Elem<K> {
    fn sub_assign(&mut self, rhs: &Elem<K>) {
        for (k, v) in &rhs.terms {
            self.add_term(k.clone(), -v.clone());
        }
    }
}

impl<K: BasisKey> Add<&Elem<K>> for &Elem<K> {
    type Output = Elem<K>;
    fn add(self, rhs: &Elem<K>) -> Elem<K> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<K: BasisKey> Sub<&Elem<K>> for &Elem<K> {
    type Output = Elem<K>;
    fn sub(self, rhs: &Elem<K>) -> Elem<K> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<K: BasisKey> Add for Elem<K> {
    type Output = Elem<K>;
    fn add(mut self, rhs: Elem<K>) -> Elem<K> {
        self += &rhs;
        self
    }
}

impl<K: BasisKey> Sub for Elem<K> {
    type Output = Elem<K>;
    fn sub(mut self, rhs: Elem<K>) -> Elem<K> {
        self -= &rhs;
        self
    }
}

impl<K: BasisKey> Neg for &Elem<K> {
    type Output = Elem<K>;
    fn neg(self) -> Elem<K> {
        Elem {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.clone(), -v.clone()))
                .collect(),
        }
    }
}

impl<K: BasisKey> Neg for Elem<K> {
    type Output = Elem<K>;
    fn neg(self) -> Elem<K> {
        -&self
    }
}

/// A permutation of `{0..n}`; `images[i]` is the image of position `i`.
/// (Printed and parsed 1-based at the interfaces.)
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, Error> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::arg(format!("not a permutation: {:?}", images)));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn from_one_based(images: &[usize]) -> Result<Self, Error> {
        if images.iter().any(|&i| i == 0) {
            return Err(Error::arg("1-based permutation contains 0"));
        }
        Self::new(images.iter().map(|i| i - 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.images.iter().map(|i| i + 1).collect()
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (i, &s) in self.images.iter().enumerate() {
            inv[s] = i;
        }
        Permutation { images: inv }
    }

    /// Sign `(-1)^σ` as ±1.
    pub fn parity_sign(&self) -> i64 {
        let mut inv = 0usize;
        for a in 0..self.images.len() {
            for b in a + 1..self.images.len() {
                if self.images[a] > self.images[b] {
                    inv += 1;
                }
            }
        }
        if inv % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Reorder a slice: `out[i] = items[σ(i)]`.
    pub fn apply<T: Clone>(&self, items: &[T]) -> Vec<T> {
        self.images.iter().map(|&i| items[i].clone()).collect()
    }
}

/// Koszul sign ±1 of `σ` acting on entries of the given degrees, defined by
/// `v_{σ(1)} ⋯ v_{σ(n)} = ε(σ) v_1 ⋯ v_n` in the free graded-commutative
/// algebra. Each inverted pair contributes `(-1)^{|v_i||v_j|}`.
pub fn koszul_sign(sigma: &Permutation, degrees: &[i64]) -> Result<i64, Error> {
    if sigma.len() != degrees.len() {
        return Err(Error::arg(format!(
            "permutation of size {} applied to {} degrees",
            sigma.len(),
            degrees.len()
        )));
    }
    Ok(koszul_sign_unchecked(sigma.images(), degrees))
}

pub(crate) fn koszul_sign_unchecked(images: &[usize], degrees: &[i64]) -> i64 {
    let mut odd_swaps = 0i64;
    for a in 0..images.len() {
        for b in a + 1..images.len() {
            if images[a] > images[b] {
                odd_swaps += (degrees[images[a]] * degrees[images[b]]).rem_euclid(2);
            }
        }
    }
    if odd_swaps % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `χ(σ) = ε(σ)·(-1)^σ`.
pub fn chi_sign(sigma: &Permutation, degrees: &[i64]) -> Result<i64, Error> {
    Ok(koszul_sign(sigma, degrees)? * sigma.parity_sign())
}

/// All `(i, n-i)`-unshuffles, ascending on both blocks, ordered
/// lexicographically by the first block.
pub fn unshuffles(i: usize, n: usize) -> Result<Vec<Permutation>, Error> {
    if i > n {
        return Err(Error::arg(format!("unshuffle block {} exceeds {}", i, n)));
    }
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(i);
    fn rec(
        start: usize,
        i: usize,
        n: usize,
        chosen: &mut Vec<usize>,
        out: &mut Vec<Permutation>,
    ) {
        if chosen.len() == i {
            let mut images = chosen.clone();
            images.extend((0..n).filter(|k| !chosen.contains(k)));
            out.push(Permutation { images });
            return;
        }
        for k in start..n {
            chosen.push(k);
            rec(k + 1, i, n, chosen, out);
            chosen.pop();
        }
    }
    rec(0, i, n, &mut chosen, &mut out);
    Ok(out)
}

/// Sign ±1 relating `l_n` on `V` to `m_n` on `V[1]`:
/// `(-1)^{(n-1)|v_1| + (n-2)|v_2| + ⋯ + |v_{n-1}|}` with degrees taken in `V`.
pub fn decalage_sign(degrees: &[i64]) -> i64 {
    let n = degrees.len() as i64;
    let e: i64 = degrees
        .iter()
        .enumerate()
        .map(|(i, d)| (n - 1 - i as i64) * d)
        .sum();
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut r = 1usize;
    for j in 0..k {
        r = r * (n - j) / (j + 1);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(v: &[usize]) -> Permutation {
        Permutation::from_one_based(v).unwrap()
    }

    #[test]
    fn koszul_examples() {
        assert_eq!(koszul_sign(&Permutation::identity(3), &[1, 3, 5]).unwrap(), 1);
        assert_eq!(koszul_sign(&perm(&[2, 1]), &[1, 1]).unwrap(), -1);
        assert_eq!(koszul_sign(&perm(&[2, 1]), &[2, 1]).unwrap(), 1);
        assert!(koszul_sign(&perm(&[2, 1]), &[1]).is_err());
    }

    #[test]
    fn chi_examples() {
        assert_eq!(chi_sign(&Permutation::identity(2), &[1, 1]).unwrap(), 1);
        assert_eq!(chi_sign(&perm(&[2, 1]), &[1, 1]).unwrap(), 1);
        assert_eq!(chi_sign(&perm(&[2, 1]), &[0, 0]).unwrap(), -1);
    }

    #[test]
    fn unshuffle_examples() {
        let u = unshuffles(1, 2).unwrap();
        assert_eq!(
            u.iter().map(|p| p.one_based()).collect::<Vec<_>>(),
            vec![vec![1, 2], vec![2, 1]]
        );
        assert_eq!(unshuffles(2, 3).unwrap().len(), 3);
        assert_eq!(unshuffles(0, 4).unwrap(), vec![Permutation::identity(4)]);
        assert!(unshuffles(3, 2).is_err());
        for n in 0..=7 {
            for i in 0..=n {
                let us = unshuffles(i, n).unwrap();
                assert_eq!(us.len(), binomial(n, i));
                for s in &us {
                    let im = s.images();
                    assert!(im[..i].windows(2).all(|w| w[0] < w[1]));
                    assert!(im[i..].windows(2).all(|w| w[0] < w[1]));
                }
            }
        }
    }

    #[test]
    fn decalage_examples() {
        assert_eq!(decalage_sign(&[7]), 1);
        assert_eq!(decalage_sign(&[1, 5]), -1);
        assert_eq!(decalage_sign(&[1, 1, 0]), -1);
    }

    #[test]
    fn elem_arithmetic_cancels() {
        let a: Elem<u8> = Elem::from_terms([(1, int(2)), (2, ratio(1, 3))]);
        let b = Elem::from_terms([(1, int(-2))]);
        let s = &a + &b;
        assert_eq!(s, Elem::term(2, ratio(1, 3)));
        assert!((&a - &a).is_zero());
        assert_eq!(a.homogeneity(|k| *k as i64), Homogeneity::Mixed);
        assert_eq!(s.homogeneity(|_| 4), Homogeneity::Homogeneous(4));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn perm_strategy(n: usize) -> impl Strategy<Value = Permutation> {
            Just((0..n).collect::<Vec<_>>())
                .prop_shuffle()
                .prop_map(|v| Permutation::new(v).unwrap())
        }

        proptest! {
            #[test]
            fn koszul_is_multiplicative(
                (s, t, d) in (1usize..7).prop_flat_map(|n| (
                    perm_strategy(n), perm_strategy(n), prop::collection::vec(-3i64..4, n)))
            ) {
                let st = s.compose(&t);
                let lhs = koszul_sign(&st, &d).unwrap();
                let rhs = koszul_sign(&s, &d).unwrap() * koszul_sign(&t, &s.apply(&d)).unwrap();
                prop_assert_eq!(lhs, rhs);
            }

            #[test]
            fn chi_inverse_cancels(
                (s, d) in (1usize..7).prop_flat_map(|n| (perm_strategy(n), prop::collection::vec(-3i64..4, n)))
            ) {
                let a = chi_sign(&s, &d).unwrap();
                let b = chi_sign(&s.inverse(), &s.apply(&d)).unwrap();
                prop_assert_eq!(a * b, 1);
            }

            #[test]
            fn elem_is_a_vector_space(
                a in prop::collection::btree_map(0u8..6, -5i64..6, 0..5),
                b in prop::collection::btree_map(0u8..6, -5i64..6, 0..5),
                c in prop::collection::btree_map(0u8..6, -5i64..6, 0..5),
                s in -4i64..5,
            ) {
                let mk = |m: &std::collections::BTreeMap<u8, i64>| Elem::from_terms(m.iter().map(|(k, v)| (*k, int(*v))));
                let (a, b, c) = (mk(&a), mk(&b), mk(&c));
                prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
                prop_assert_eq!(&a + &b, &b + &a);
                prop_assert_eq!((&a + &b).scaled(&int(s)), &a.scaled(&int(s)) + &b.scaled(&int(s)));
                prop_assert!(a.iter().all(|(_, v)| !v.is_zero()));
            }
        }
    }
}
