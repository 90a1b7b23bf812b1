//! Affine length against the alcove model: `ℓ(s)` counts the hyperplanes
//! `⟨x, α⟩ = n` separating a point of the base alcove from its image.
//! With `t(λ∨)w` acting by `x ↦ λ∨ + w x`, `s_0` reflects in `⟨x, θ⟩ = −1`,
//! so the base alcove is `{−1 < ⟨x, α⟩ < 0 : α > 0}`.

use hecke::{CartanType, Coweight, RootSystem};
use num_rational::Rational64;
use proptest::prelude::*;

fn alcove_point(rs: &RootSystem) -> Coweight {
    let l = rs.rank() as i64;
    Coweight::new((0..l).map(|i| Rational64::new(-1, 50 + 7 * i)).collect())
}

fn separating(rs: &RootSystem, translation: &[i64], perm_word: &[usize]) -> usize {
    let w = rs.from_word(perm_word).unwrap();
    let x = alcove_point(rs);
    let image = Coweight::from_ints(translation).add(&rs.act_coweight(&w, &x).unwrap());
    rs.positive_roots()
        .map(|id| {
            let a = rs.pair_root(&x, id);
            let b = rs.pair_root(&image, id);
            assert!(a > Rational64::from_integer(-1) && a < Rational64::from_integer(0));
            assert!(!b.is_integer());
            (b.floor().to_integer() - a.floor().to_integer()).unsigned_abs() as usize
        })
        .sum()
}

fn systems() -> Vec<RootSystem> {
    vec![
        RootSystem::new(CartanType::A, 2).unwrap(),
        RootSystem::new(CartanType::B, 3).unwrap(),
        RootSystem::new(CartanType::C, 3).unwrap(),
        RootSystem::new(CartanType::D, 4).unwrap(),
        RootSystem::new(CartanType::G2, 2).unwrap(),
    ]
}

#[test]
fn dominant_translations_cross_their_inversion_hyperplanes() {
    for rs in systems() {
        for i in 0..rs.rank() {
            let lam = Coweight::fundamental(rs.rank(), i);
            let t = rs.translation(&lam).unwrap();
            assert_eq!(rs.affine_length(&t), separating(&rs, t.translation_ints(), &[]));
            for beta in rs.inversion_set(&t) {
                assert!(rs.is_positive(beta.root));
                assert!(beta.level >= 0 && beta.level < rs.pair_root_int(t.translation_ints(), beta.root));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn length_is_hyperplane_count(
        which in 0usize..5,
        shift in proptest::collection::vec(-3i64..=3, 4),
        word in proptest::collection::vec(0usize..4, 0..10),
    ) {
        let rs = &systems()[which];
        let l = rs.rank();
        let shift = &shift[..l];
        let word: Vec<usize> = word.into_iter().map(|i| i % l).collect();
        let w = rs.from_word(&word).unwrap();
        let s = rs.affine_element(&Coweight::from_ints(shift), &w).unwrap();
        prop_assert_eq!(rs.affine_length(&s), separating(rs, shift, &word));
    }
}
