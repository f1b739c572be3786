use coxeter_core::group::{bruhat_leq_by_subwords, enumerate};
use coxeter_core::rational::frac;
use coxeter_core::roots::roots_up_to_height;
use coxeter_core::{CoxeterDatum, GroupElement, Realization, Q};
use proptest::prelude::*;

const DATA: [&str; 9] = ["A1", "A2", "A3", "B2", "G2", "A1xA1", "~A1", "~A2", "rank2:3,3"];

fn realization(k: usize) -> Realization {
    Realization::new(CoxeterDatum::named(DATA[k]).unwrap())
}

fn vector(dim: usize) -> impl Strategy<Value = Vec<Q>> {
    prop::collection::vec((-20i64..20, 1i64..7).prop_map(|(n, d)| frac(n, d)), dim)
}

proptest! {
    #[test]
    fn reflections_are_involutions(k in 0..DATA.len(), seed in prop::collection::vec((-20i64..20, 1i64..7), 4)) {
        let re = realization(k);
        let v: Vec<Q> = seed.iter().take(re.dim()).map(|&(n, d)| frac(n, d)).collect();
        prop_assume!(v.len() == re.dim());
        for i in 0..re.rank() {
            prop_assert_eq!(re.reflect(i, &re.reflect(i, &v)), v.clone());
        }
    }

    #[test]
    fn reduce_is_canonical(k in 0..DATA.len(), word in prop::collection::vec(0usize..3, 0..12)) {
        let re = realization(k);
        let word: Vec<usize> = word.into_iter().filter(|&i| i < re.rank()).collect();
        let w = GroupElement::from_word(&re, &word);
        let mut m = coxeter_core::Matrix::identity(re.dim());
        for &i in &word {
            m = &m * re.reflection_matrix(i);
        }
        prop_assert_eq!(w.matrix(), &m);
        let again = GroupElement::from_word(&re, w.word());
        prop_assert_eq!(again.length(), w.length());
        prop_assert_eq!(again.word(), w.word());
        prop_assert!(w.length() <= word.len());
        prop_assert_eq!(w.length() % 2, word.len() % 2);
    }

    #[test]
    fn inverse_and_product(k in 0..DATA.len(), a in prop::collection::vec(0usize..3, 0..8), b in prop::collection::vec(0usize..3, 0..8)) {
        let re = realization(k);
        let a: Vec<usize> = a.into_iter().filter(|&i| i < re.rank()).collect();
        let b: Vec<usize> = b.into_iter().filter(|&i| i < re.rank()).collect();
        let u = GroupElement::from_word(&re, &a);
        let w = GroupElement::from_word(&re, &b);
        prop_assert!(u.mul(&re, &u.inverse(&re)).is_identity());
        let ab: Vec<usize> = a.iter().chain(&b).copied().collect();
        prop_assert_eq!(u.mul(&re, &w), GroupElement::from_word(&re, &ab));
    }

    #[test]
    fn root_action_matches_linear_forms(k in 0..DATA.len(), word in prop::collection::vec(0usize..3, 0..8), v in vector(4)) {
        let re = realization(k);
        let word: Vec<usize> = word.into_iter().filter(|&i| i < re.rank()).collect();
        let v = &v[..re.dim()];
        let w = GroupElement::from_word(&re, &word);
        let winv = w.inverse(&re);
        // (wα)(v) = α(w⁻¹v)
        for i in 0..re.rank() {
            let mut c = vec![0; re.rank()];
            c[i] = 1;
            let wa = w.apply_root(&c);
            prop_assert_eq!(re.eval_root(&wa, v), re.eval_simple(i, &winv.apply(v)));
        }
    }
}

#[test]
fn roots_satisfy_sign_invariant() {
    for name in DATA {
        let d = CoxeterDatum::named(name).unwrap();
        let roots = roots_up_to_height(&d, 8);
        for r in &roots {
            assert!(r.coeffs.iter().all(|&c| c >= 0) || r.coeffs.iter().all(|&c| c <= 0));
            assert!(r.coeffs.iter().any(|&c| c != 0));
            assert!(roots.contains(&r.negate()));
        }
        // no root is a positive multiple of another
        for a in &roots {
            for b in &roots {
                if a != b {
                    let g = |r: &[i64]| r.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
                    let pa: Vec<i64> = a.coeffs.iter().map(|x| x / g(&a.coeffs)).collect();
                    let pb: Vec<i64> = b.coeffs.iter().map(|x| x / g(&b.coeffs)).collect();
                    assert!(pa != pb || a.is_positive() != b.is_positive(), "{name}");
                }
            }
        }
    }
}

#[test]
fn bfs_lengths_and_bruhat_agree_with_oracles() {
    for name in ["A2", "B2", "G2", "A3", "~A1"] {
        let re = realization(DATA.iter().position(|d| *d == name).unwrap());
        let all: Vec<usize> = (0..re.rank()).collect();
        let (layers, _) = enumerate(&re, &all, 5, 10_000);
        let elems: Vec<&GroupElement> = layers.iter().flatten().collect();
        for (depth, layer) in layers.iter().enumerate() {
            for w in layer {
                assert_eq!(GroupElement::from_word(&re, w.word()).length(), depth);
            }
        }
        for u in &elems {
            for w in &elems {
                assert_eq!(
                    GroupElement::bruhat_leq(&re, u, w),
                    bruhat_leq_by_subwords(&re, u, w),
                    "{name} {:?} {:?}",
                    u.word(),
                    w.word()
                );
            }
        }
    }
}
