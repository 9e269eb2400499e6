mod common;

use proptest::prelude::*;
use stabcoh::lfunctor::{boxtimes, hom, is_tame, l0, l1, ls, tensor, FunctorError};
use stabcoh::{Atom, ModuleExpr};

use common::{fg_module_at, module, module_at};

fn m(text: &str) -> ModuleExpr {
    ModuleExpr::parse(text, Some(2)).unwrap()
}

#[test]
fn atom_table() {
    assert_eq!(l0(&m("Z(2)")), m("Zp"));
    assert_eq!(l0(&m("Q/Z(2)")), m("0"));
    assert_eq!(l0(&m("Z/8 + Z/2")), m("Z/8 + Z/2"));
    assert_eq!(l1(&m("Q/Z(2)")), m("Zp"));
    assert_eq!(l1(&m("Z(2)")), m("0"));
    assert_eq!(l1(&m("Z/2^5")), m("0"));
    assert_eq!(ls(&m("Q/Z(2)"), 2), m("0"));
    assert_eq!(ls(&m("Z(2) + Z/4"), 3), m("0"));
    assert_eq!(ls(&m("0"), 2), m("0"));
    assert!(is_tame(&m("Z/4")));
    assert!(!is_tame(&m("Q/Z(2)")));
    assert!(is_tame(&m("Z(2)")));
}

/// `|Z/p^a ⊗ Z/p^b|` as the number of bilinear maps into `Z/p^c`, `c` large:
/// such a map is fixed by `x = f(1, 1)` with `p^a x = p^b x = 0`.
fn cyclic_tensor_order(p: u64, a: u32, b: u32) -> u64 {
    let q = p.pow(a.max(b) + 1);
    (0..q).filter(|x| x * p.pow(a) % q == 0 && x * p.pow(b) % q == 0).count() as u64
}

#[test]
fn cyclic_tensor_by_bilinear_maps() {
    for (a, b) in [(2, 3), (1, 1), (4, 2), (3, 3)] {
        let got = tensor(&ModuleExpr::cyclic(2, a), &ModuleExpr::cyclic(2, b)).unwrap();
        // 1 ⊗ 1 generates, so the tensor is cyclic of the counted order
        assert_eq!(got.length(), Some(cyclic_tensor_order(2, a, b).trailing_zeros() as u64));
        assert_eq!(got.atoms().len(), 1);
    }
    assert_eq!(tensor(&m("Z/4"), &m("Z/8")).unwrap(), m("Z/4"));
}

#[test]
fn prufer_tensor_z2_vanishes_in_the_colimit() {
    // Q/Z(2) = colim Z/2^r along x -> 2x; tensoring with Z/2 gives
    // Z/2 at every stage, generated by 1 ⊗ 1, and the transition doubles it
    let stage = |r: u32| cyclic_tensor_order(2, r, 1);
    for r in 1..8 {
        assert_eq!(stage(r), 2);
        let generator_image = 2 % stage(r + 1);
        assert_eq!(generator_image, 0);
    }
    assert_eq!(tensor(&m("Q/Z(2)"), &m("Z/2")).unwrap(), m("0"));
}

#[test]
fn completed_tensor_by_truncation() {
    // (Z2 ⊗ Z2)/2^k = Z/2^k ⊗ Z/2^k is cyclic of order 2^k with surjective
    // transitions, so the limit is Z2
    for k in 1..10 {
        assert_eq!(cyclic_tensor_order(2, k, k), 1 << k);
    }
    assert_eq!(boxtimes(&m("Zp"), &m("Zp")).unwrap(), m("Zp"));
    // (Z2 ⊗ Z/2^r)/2^k = Z/2^min(k, r); along r the transition doubles the
    // generator, so every class dies k steps later and the colimit is zero
    for k in 1..6u32 {
        for r in 1..10u32 {
            let order = cyclic_tensor_order(2, k, r);
            let later = cyclic_tensor_order(2, k, r + k);
            assert_eq!((1u64 << k) % later, 0, "2^k kills stage {r} + {k}");
            assert!(order <= 1 << k);
        }
    }
    assert_eq!(boxtimes(&m("Zp"), &m("Q/Z(2)")).unwrap(), m("0"));
    assert_eq!(boxtimes(&m("Z/4"), &m("Z/8")).unwrap(), m("Z/4"));
}

#[test]
fn hom_by_enumeration() {
    // continuous maps Z2 + Z2 -> Z/4 factor through (Z/4)^2 and are fixed by
    // the images of the two generators
    let homs: Vec<(u64, u64)> = (0..4).flat_map(|a| (0..4).map(move |b| (a, b))).collect();
    let killed_by_two = homs.iter().filter(|(a, b)| 2 * a % 4 == 0 && 2 * b % 4 == 0).count();
    assert_eq!((homs.len(), killed_by_two), (16, 4));
    assert_eq!(hom(&m("Zp + Zp"), &m("Z/4")).unwrap(), m("Z/4 + Z/4"));
    assert_eq!(hom(&m("Z(2)"), &m("Q/Z(2)")).unwrap(), m("Q/Z(2)"));
    assert!(matches!(hom(&m("Z/4"), &m("Z/4")), Err(FunctorError::NotProjective(_))));
    assert!(matches!(hom(&m("Zp"), &m("Z(2)")), Err(FunctorError::OutsideAtomClass { .. })));
    assert!(matches!(tensor(&m("Zp"), &m("Zp")), Err(FunctorError::OutsideAtomClass { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn text_round_trip(x in module()) {
        prop_assert_eq!(ModuleExpr::parse(&x.to_string(), Some(x.prime())).unwrap(), x);
    }

    #[test]
    fn completion_axioms(x in module(), s in 2u32..6) {
        prop_assert_eq!(l0(&l0(&x)), l0(&x));
        prop_assert!(l1(&l0(&x)).is_zero());
        prop_assert!(ls(&l0(&x), s).is_zero());
        prop_assert!(ls(&x, s).is_zero());
        prop_assert_eq!(is_tame(&x), x.count(Atom::PruferQuotient) == 0);
    }

    #[test]
    fn additivity((x, y) in (2u64..4).prop_filter("prime", |p| *p != 4).prop_flat_map(|p| (module_at(p), module_at(p)))) {
        let sum = x.sum(&y);
        prop_assert_eq!(l0(&sum), l0(&x).sum(&l0(&y)));
        prop_assert_eq!(l1(&sum), l1(&x).sum(&l1(&y)));
    }

    #[test]
    fn boxtimes_is_completed_tensor((x, y) in module_at(2).prop_flat_map(|x| (Just(x), fg_module_at(2)))) {
        let t = tensor(&x, &y).unwrap();
        prop_assert_eq!(boxtimes(&x, &y).unwrap(), l0(&t));
        prop_assert_eq!(boxtimes(&y, &x).unwrap(), l0(&tensor(&y, &x).unwrap()));
    }

    #[test]
    fn hom_commutes_with_completion(r in 0usize..4, f in 0usize..4) {
        let free = ModuleExpr::repeated(2, Atom::LocalFree, f);
        let target = ModuleExpr::repeated(2, Atom::LocalFree, r);
        prop_assert_eq!(l0(&hom(&free, &target).unwrap()), hom(&l0(&free), &l0(&target)).unwrap());
    }

    #[test]
    fn short_exact_cyclic_sequences(a in 1u32..8, b in 1u32..8) {
        let (left, mid, right) =
            (ModuleExpr::cyclic(3, a), ModuleExpr::cyclic(3, a + b), ModuleExpr::cyclic(3, b));
        let len = |x: &ModuleExpr| l0(x).length().unwrap() as i64;
        prop_assert_eq!(len(&left) - len(&mid) + len(&right), 0);
        for x in [&left, &mid, &right] {
            prop_assert!(l1(x).is_zero());
        }
    }
}
