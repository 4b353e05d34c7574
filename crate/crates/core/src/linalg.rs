//! Row reduction over the rationals, enough to compute spans of finitely
//! many sparse elements.

use num_traits::Zero;

use crate::graded::{BasisKey, Elem};

/// Echelon basis of the span of `vectors`. Each row leads with a distinct
/// key (coefficient one) at which every later row vanishes; rows must be
/// used in order.
pub fn span_basis<K: BasisKey>(vectors: &[Elem<K>]) -> Vec<Elem<K>> {
    let mut rows: Vec<Elem<K>> = Vec::new();
    for v in vectors {
        let mut r = v.clone();
        for b in &rows {
            let lead = b.keys().next().expect("basis rows are nonzero");
            let c = r.coeff(lead);
            if !c.is_zero() {
                r.add_scaled(b, &-c);
            }
        }
        let lead = r.keys().next().cloned();
        if let Some(lead) = lead {
            let inv = r.coeff(&lead).recip();
            rows.push(r.scaled(&inv));
        }
    }
    rows
}

/// Reduce `v` modulo the span of an echelon basis from [`span_basis`].
pub fn reduce<K: BasisKey>(v: &Elem<K>, basis: &[Elem<K>]) -> Elem<K> {
    let mut r = v.clone();
    for b in basis {
        let lead = b.keys().next().expect("basis rows are nonzero");
        let c = r.coeff(lead);
        if !c.is_zero() {
            r.add_scaled(b, &-c);
        }
    }
    r
}

pub fn in_span<K: BasisKey>(v: &Elem<K>, basis: &[Elem<K>]) -> bool {
    reduce(v, basis).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::int;

    #[test]
    fn span_of_dependent_vectors() {
        let a: Elem<u8> = Elem::from_terms([(0, int(1)), (1, int(2))]);
        let b = Elem::from_terms([(0, int(2)), (1, int(4))]);
        let c = Elem::from_terms([(1, int(1)), (2, int(1))]);
        let basis = span_basis(&[a.clone(), b, c.clone()]);
        assert_eq!(basis.len(), 2);
        assert!(in_span(&(&a + &c), &basis));
        assert!(!in_span(&Elem::basis(2u8), &basis));
    }
}
