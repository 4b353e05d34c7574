use derbra::graded::{binomial, chi_sign, decalage_sign, koszul_sign, unshuffles, Permutation};
use proptest::prelude::*;

fn perm(one_based: &[usize]) -> Permutation {
    Permutation::from_one_based(one_based).unwrap()
}

#[test]
fn koszul_examples() {
    assert_eq!(koszul_sign(&perm(&[1, 2, 3]), &[1, 3, 5]).unwrap(), 1);
    assert_eq!(koszul_sign(&perm(&[2, 1]), &[1, 1]).unwrap(), -1);
    assert_eq!(koszul_sign(&perm(&[2, 1]), &[2, 1]).unwrap(), 1);
    assert!(koszul_sign(&perm(&[2, 1]), &[1]).is_err());
    assert!(Permutation::from_one_based(&[1, 1]).is_err());
}

#[test]
fn chi_examples() {
    assert_eq!(chi_sign(&perm(&[1, 2]), &[3, 4]).unwrap(), 1);
    assert_eq!(chi_sign(&perm(&[2, 1]), &[1, 1]).unwrap(), 1);
    assert_eq!(chi_sign(&perm(&[2, 1]), &[0, 0]).unwrap(), -1);
}

#[test]
fn unshuffle_examples() {
    let u: Vec<Vec<usize>> = unshuffles(1, 2).unwrap().iter().map(|p| p.one_based()).collect();
    assert_eq!(u, vec![vec![1, 2], vec![2, 1]]);
    assert_eq!(unshuffles(2, 3).unwrap().len(), 3);
    assert_eq!(unshuffles(0, 4).unwrap(), vec![Permutation::identity(4)]);
    assert!(unshuffles(3, 2).is_err());
}

#[test]
fn decalage_examples() {
    assert_eq!(decalage_sign(&[7]), 1);
    assert_eq!(decalage_sign(&[1, 5]), -1);
    assert_eq!(decalage_sign(&[1, 1, 0]), -1);
}

/// Sign of reordering a word of graded letters by adjacent swaps.
fn bubble_sign(word: &[(usize, i64)]) -> i64 {
    let mut w = word.to_vec();
    let mut sign = 1;
    for i in 0..w.len() {
        for j in 0..w.len() - 1 - i {
            if w[j].0 > w[j + 1].0 {
                if (w[j].1 * w[j + 1].1).rem_euclid(2) == 1 {
                    sign = -sign;
                }
                w.swap(j, j + 1);
            }
        }
    }
    sign
}

fn perm_and_degrees() -> impl Strategy<Value = (Vec<usize>, Vec<i64>)> {
    (1usize..7).prop_flat_map(|n| (Just((0..n).collect::<Vec<_>>()).prop_shuffle(), prop::collection::vec(-3i64..4, n)))
}

proptest! {
    #[test]
    fn koszul_matches_adjacent_swaps((images, degrees) in perm_and_degrees()) {
        let s = Permutation::new(images.clone()).unwrap();
        let word: Vec<(usize, i64)> = images.iter().map(|&i| (i, degrees[i])).collect();
        prop_assert_eq!(koszul_sign(&s, &degrees).unwrap(), bubble_sign(&word));
    }

    #[test]
    fn koszul_cocycle((a, degrees) in perm_and_degrees(), seed in any::<u64>()) {
        let n = a.len();
        let sigma = Permutation::new(a).unwrap();
        let mut b: Vec<usize> = (0..n).collect();
        b.rotate_left((seed as usize) % n);
        if seed % 2 == 0 { b.reverse(); }
        let tau = Permutation::new(b).unwrap();
        let moved = sigma.apply(&degrees);
        let lhs = koszul_sign(&sigma.compose(&tau), &degrees).unwrap();
        let rhs = koszul_sign(&tau, &moved).unwrap() * koszul_sign(&sigma, &degrees).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn even_degrees_give_plain_parity((images, degrees) in perm_and_degrees()) {
        let s = Permutation::new(images).unwrap();
        let even: Vec<i64> = degrees.iter().map(|d| 2 * d).collect();
        prop_assert_eq!(chi_sign(&s, &even).unwrap(), s.parity_sign());
    }

    #[test]
    fn unshuffles_are_counted_by_binomials(n in 0usize..8, i in 0usize..8) {
        prop_assume!(i <= n);
        let all = unshuffles(i, n).unwrap();
        prop_assert_eq!(all.len(), binomial(n, i));
        for p in &all {
            let im = p.images();
            prop_assert!(im[..i].windows(2).all(|w| w[0] < w[1]));
            prop_assert!(im[i..].windows(2).all(|w| w[0] < w[1]));
        }
    }
}
