//! Affine roots and the (extended) affine Weyl group `t(λ∨)·w`.

use std::fmt;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootsys::{Coweight, RootId, RootSystem};
use crate::weyl::WeylElement;

/// The affine root `(α, n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AffineRoot {
    pub root: RootId,
    pub level: i64,
}

/// A Coxeter generator of the affine Weyl group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    /// `s_{0,j}` for the `j`-th irreducible component.
    Affine(usize),
    /// The finite simple reflection `s_i` (0-based).
    Simple(usize),
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Affine(0) => write!(f, "0"),
            Generator::Affine(j) => write!(f, "0.{}", j + 1),
            Generator::Simple(i) => write!(f, "{}", i + 1),
        }
    }
}

impl Serialize for Generator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `t(λ∨)·w` with integral `λ∨`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineWeylElement {
    translation: Vec<i64>,
    finite: WeylElement,
}

/// JSON form: `{"translation": [..], "finite": "[..]"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineDoc {
    pub translation: Coweight,
    pub finite: String,
}

impl AffineWeylElement {
    pub fn translation(&self) -> Coweight {
        Coweight::from_ints(&self.translation)
    }

    pub fn translation_ints(&self) -> &[i64] {
        &self.translation
    }

    pub fn finite(&self) -> &WeylElement {
        &self.finite
    }

    pub fn to_doc(&self) -> AffineDoc {
        AffineDoc {
            translation: self.translation(),
            finite: self.finite.to_string(),
        }
    }
}

impl fmt::Display for AffineWeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}·{}", self.translation(), self.finite)
    }
}

impl Serialize for AffineWeylElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_doc().serialize(s)
    }
}

/// Outcome of the exchange-property descent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordDescent {
    pub length: usize,
    /// `s = word[0] word[1] ⋯ · remainder`.
    pub word: Vec<Generator>,
    /// Length-zero part; the identity unless `s` is extended.
    pub remainder: AffineWeylElement,
}

impl RootSystem {
    fn integral(&self, lambda: &Coweight) -> Result<Vec<i64>> {
        self.check_coweight(lambda)?;
        lambda
            .integer_coeffs()
            .ok_or_else(|| Error::NonIntegralCoweight(lambda.to_string()))
    }

    pub fn affine_element(&self, lambda: &Coweight, w: &WeylElement) -> Result<AffineWeylElement> {
        let translation = self.integral(lambda)?;
        Ok(AffineWeylElement {
            translation,
            finite: w.clone(),
        })
    }

    /// The translation `t(λ∨)`.
    pub fn translation(&self, lambda: &Coweight) -> Result<AffineWeylElement> {
        self.affine_element(lambda, &self.identity())
    }

    pub fn affine_identity(&self) -> AffineWeylElement {
        AffineWeylElement {
            translation: vec![0; self.rank()],
            finite: self.identity(),
        }
    }

    pub fn affine_from_doc(&self, doc: &AffineDoc) -> Result<AffineWeylElement> {
        let w = self.parse_weyl(&doc.finite)?;
        self.affine_element(&doc.translation, &w)
    }

    /// Affine generators first, one per component, then `s_1, …, s_l`.
    pub fn generators(&self) -> Vec<Generator> {
        (0..self.components().len())
            .map(Generator::Affine)
            .chain((0..self.rank()).map(Generator::Simple))
            .collect()
    }

    /// `s_{0,j} = s_θ t(θ∨) = t(−θ∨) s_θ`, or a finite simple reflection.
    pub fn affine_generator(&self, g: Generator) -> AffineWeylElement {
        match g {
            Generator::Affine(j) => {
                let theta = self.highest_roots()[j];
                let coroot = self.coroot(theta).neg();
                AffineWeylElement {
                    translation: coroot.integer_coeffs().expect("coroots are integral"),
                    finite: self.reflection(theta),
                }
            }
            Generator::Simple(i) => AffineWeylElement {
                translation: vec![0; self.rank()],
                finite: self.simple_reflection(i),
            },
        }
    }

    /// `α_{0,j} = (−θ_j, 1)` or `(α_i, 0)`.
    pub fn simple_affine_root(&self, g: Generator) -> AffineRoot {
        match g {
            Generator::Affine(j) => AffineRoot {
                root: self.negate(self.highest_roots()[j]),
                level: 1,
            },
            Generator::Simple(i) => AffineRoot {
                root: self.simple_root_id(i),
                level: 0,
            },
        }
    }

    pub fn affine_from_word(&self, word: &[Generator]) -> AffineWeylElement {
        word.iter().fold(self.affine_identity(), |acc, &g| {
            self.affine_compose(&acc, &self.affine_generator(g))
        })
    }

    fn act_ints(&self, w: &WeylElement, lambda: &[i64]) -> Vec<i64> {
        let c = self
            .act_coweight(w, &Coweight::from_ints(lambda))
            .expect("rank matches");
        c.coeffs().iter().map(|x| x.to_integer()).collect()
    }

    /// `(t(λ)w)(t(μ)v) = t(λ + wμ)·wv`.
    pub fn affine_compose(&self, s: &AffineWeylElement, t: &AffineWeylElement) -> AffineWeylElement {
        let moved = self.act_ints(&s.finite, &t.translation);
        AffineWeylElement {
            translation: s.translation.iter().zip(&moved).map(|(a, b)| a + b).collect(),
            finite: s.finite.compose(&t.finite),
        }
    }

    /// `(t(λ)w)⁻¹ = t(−w⁻¹λ)·w⁻¹`.
    pub fn affine_inverse(&self, s: &AffineWeylElement) -> AffineWeylElement {
        let inv = s.finite.inverse();
        let moved = self.act_ints(&inv, &s.translation);
        AffineWeylElement {
            translation: moved.iter().map(|x| -x).collect(),
            finite: inv,
        }
    }

    /// `t(λ)w · (α, n) = (wα, n + ⟨λ, wα⟩)`.
    pub fn affine_act(&self, s: &AffineWeylElement, beta: AffineRoot) -> AffineRoot {
        let root = self.act_root(&s.finite, beta.root);
        AffineRoot {
            root,
            level: beta.level + self.pair_root_int(&s.translation, root),
        }
    }

    pub fn is_affine_positive(&self, beta: AffineRoot) -> bool {
        beta.level > 0 || (beta.level == 0 && self.is_positive(beta.root))
    }

    /// Whether `λ∨` lies outside the coroot lattice.
    pub fn is_extended(&self, s: &AffineWeylElement) -> bool {
        !self.in_coroot_lattice(&s.translation())
    }

    /// Admissible levels `n_lo..=n_hi` for the finite root `α` in `Φ_af^s`.
    fn inversion_levels(&self, s: &AffineWeylElement, inv: &WeylElement, id: RootId) -> (i64, i64) {
        let m = self.pair_root_int(&s.translation, id);
        let lo = if self.is_positive(id) { 0 } else { 1 };
        let back_positive = self.is_positive(self.act_root(inv, id));
        let hi = m - i64::from(back_positive);
        (lo, hi)
    }

    /// `Φ_af^s = {β > 0 : s⁻¹β < 0}`, computed level interval by level interval.
    pub fn inversion_set(&self, s: &AffineWeylElement) -> Vec<AffineRoot> {
        let inv = s.finite.inverse();
        let mut out = Vec::new();
        for id in self.all_roots() {
            let (lo, hi) = self.inversion_levels(s, &inv, id);
            out.extend((lo..=hi).map(|level| AffineRoot { root: id, level }));
        }
        out.sort();
        out
    }

    /// `ℓ(s) = #Φ_af^s`, which also gives `ℓ(sε) = ℓ(s)` for extended elements.
    pub fn affine_length(&self, s: &AffineWeylElement) -> usize {
        let inv = s.finite.inverse();
        self.all_roots()
            .map(|id| {
                let (lo, hi) = self.inversion_levels(s, &inv, id);
                (hi - lo + 1).max(0).to_usize().unwrap()
            })
            .sum()
    }

    pub fn in_inversion_set(&self, s: &AffineWeylElement, beta: AffineRoot) -> bool {
        self.is_affine_positive(beta) && !self.is_affine_positive(self.affine_act(&self.affine_inverse(s), beta))
    }

    /// Reduced word by descent: while some generator's simple affine root lies
    /// in `Φ_af^s`, take the least such `g` and replace `s` by `g·s`.
    pub fn length_via_word(&self, s: &AffineWeylElement, budget: usize) -> Result<WordDescent> {
        let gens = self.generators();
        let mut cur = s.clone();
        let mut word = Vec::new();
        loop {
            let inv = self.affine_inverse(&cur);
            let next = gens.iter().copied().find(|&g| {
                let beta = self.simple_affine_root(g);
                !self.is_affine_positive(self.affine_act(&inv, beta))
            });
            let Some(g) = next else { break };
            if word.len() == budget {
                return Err(Error::BudgetExceeded(budget));
            }
            word.push(g);
            cur = self.affine_compose(&self.affine_generator(g), &cur);
        }
        Ok(WordDescent {
            length: word.len(),
            word,
            remainder: cur,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::CartanType;
    use num_rational::Rational64;
    use proptest::prelude::*;

    fn rs(t: CartanType, l: usize) -> RootSystem {
        RootSystem::new(t, l).unwrap()
    }

    #[test]
    fn translation_shifts_levels() {
        let a1 = rs(CartanType::A, 1);
        let t = a1.translation(&a1.simple_coroot(0)).unwrap();
        let beta = AffineRoot { root: 0, level: 0 };
        assert_eq!(a1.affine_act(&t, beta), AffineRoot { root: 0, level: 2 });
    }

    #[test]
    fn affine_generator_negates_its_root() {
        for sys in [rs(CartanType::A, 1), rs(CartanType::C, 3), rs(CartanType::G2, 2)] {
            let theta = sys.highest_roots()[0];
            let s0 = sys.affine_generator(Generator::Affine(0));
            let alpha0 = sys.simple_affine_root(Generator::Affine(0));
            let img = sys.affine_act(&s0, alpha0);
            assert_eq!(img, AffineRoot { root: theta, level: -1 });
            assert!(!sys.is_affine_positive(img));
        }
    }

    #[test]
    fn inverse_translation_on_simple_root() {
        let a3 = rs(CartanType::A, 3);
        let lam = Coweight::from_ints(&[1, 2, 0]);
        let t = a3.translation(&lam).unwrap();
        let tinv = a3.affine_inverse(&t);
        for i in 0..3 {
            let beta = a3.simple_affine_root(Generator::Simple(i));
            let img = a3.affine_act(&tinv, beta);
            assert_eq!(img.level, -a3.pair_root_int(&[1, 2, 0], beta.root));
        }
    }

    #[test]
    fn inversion_set_examples() {
        let a2 = rs(CartanType::A, 2);
        for i in 0..2 {
            let s = a2.affine_generator(Generator::Simple(i));
            assert_eq!(a2.inversion_set(&s), vec![a2.simple_affine_root(Generator::Simple(i))]);
        }
        assert!(a2.inversion_set(&a2.affine_identity()).is_empty());

        let lam = [2i64, 1];
        let t = a2.translation(&Coweight::from_ints(&lam)).unwrap();
        let mut expected = Vec::new();
        for id in a2.positive_roots() {
            for n in 0..a2.pair_root_int(&lam, id) {
                expected.push(AffineRoot { root: id, level: n });
            }
        }
        expected.sort();
        assert_eq!(a2.inversion_set(&t), expected);
    }

    #[test]
    fn lengths() {
        let a2 = rs(CartanType::A, 2);
        let theta = a2.highest_roots()[0];
        let t = a2.translation(&a2.coroot(theta)).unwrap();
        assert_eq!(a2.affine_length(&t), 4);
        assert_eq!(a2.affine_length(&a2.affine_identity()), 0);
    }

    #[test]
    fn descent_examples() {
        let a1 = rs(CartanType::A, 1);
        let s0 = a1.affine_generator(Generator::Affine(0));
        let d = a1.length_via_word(&s0, 1).unwrap();
        assert_eq!(d.word, vec![Generator::Affine(0)]);

        let t = a1.translation(&a1.simple_coroot(0)).unwrap();
        let d = a1.length_via_word(&t, 2).unwrap();
        assert_eq!(d.length, 2);
        assert_eq!(d.word, vec![Generator::Simple(0), Generator::Affine(0)]);
        assert_eq!(a1.affine_from_word(&d.word), t);
        assert!(matches!(a1.length_via_word(&t, 1), Err(Error::BudgetExceeded(1))));
    }

    #[test]
    fn extended_elements_descend_to_length_zero() {
        let a2 = rs(CartanType::A, 2);
        let t = a2.translation(&Coweight::fundamental(2, 0)).unwrap();
        assert!(a2.is_extended(&t));
        let len = a2.affine_length(&t);
        assert_eq!(len, 2);
        let d = a2.length_via_word(&t, len).unwrap();
        assert_eq!(d.length, len);
        assert_eq!(a2.affine_length(&d.remainder), 0);
        assert!(!d.remainder.finite().is_identity());
        let rebuilt = a2.affine_compose(&a2.affine_from_word(&d.word), &d.remainder);
        assert_eq!(rebuilt, t);
    }

    #[test]
    fn json_round_trip() {
        let c2 = rs(CartanType::C, 2);
        let s = c2
            .affine_element(&Coweight::from_ints(&[1, -2]), &c2.parse_weyl("[2,-1]").unwrap())
            .unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"translation":[1,-2],"finite":"[2,-1]"}"#);
        let doc: AffineDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(c2.affine_from_doc(&doc).unwrap(), s);
        let half = Coweight::new(vec![Rational64::new(1, 2), Rational64::from_integer(0)]);
        assert!(matches!(c2.translation(&half), Err(Error::NonIntegralCoweight(_))));
    }

    fn random_element(sys: &RootSystem, d: &[i64], word: &[usize]) -> AffineWeylElement {
        let dq: Vec<Rational64> = d.iter().map(|&x| Rational64::from_integer(x)).collect();
        let lam = sys.from_coroot_basis(&dq).unwrap();
        let w = sys.from_word(word).unwrap();
        sys.affine_element(&lam, &w).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn routes_agree_and_exchange_holds(
            which in 0usize..4,
            d in proptest::collection::vec(-3i64..4, 3),
            word in proptest::collection::vec(0usize..3, 0..8),
        ) {
            let sys = match which {
                0 => rs(CartanType::A, 2),
                1 => rs(CartanType::B, 2),
                2 => rs(CartanType::G2, 2),
                _ => rs(CartanType::A, 3),
            };
            let l = sys.rank();
            let word: Vec<usize> = word.into_iter().map(|i| i % l).collect();
            let s = random_element(&sys, &d[..l], &word);
            let len = sys.affine_length(&s);
            prop_assert_eq!(sys.inversion_set(&s).len(), len);
            let desc = sys.length_via_word(&s, len).unwrap();
            prop_assert_eq!(desc.length, len);
            prop_assert!(desc.remainder == sys.affine_identity());
            prop_assert_eq!(sys.affine_from_word(&desc.word), s.clone());
            for g in sys.generators() {
                let beta = sys.simple_affine_root(g);
                let gs = sys.affine_compose(&sys.affine_generator(g), &s);
                let here = sys.in_inversion_set(&s, beta);
                let there = sys.in_inversion_set(&gs, beta);
                prop_assert!(here != there);
                prop_assert_eq!(here, sys.affine_length(&gs) < len);
            }
        }

        #[test]
        fn closed_form_matches_membership(
            d in proptest::collection::vec(-2i64..3, 2),
            word in proptest::collection::vec(0usize..2, 0..6),
        ) {
            let sys = rs(CartanType::C, 2);
            let s = random_element(&sys, &d, &word);
            let set = sys.inversion_set(&s);
            for id in sys.all_roots() {
                for level in -12..=12 {
                    let beta = AffineRoot { root: id, level };
                    prop_assert_eq!(set.contains(&beta), sys.in_inversion_set(&s, beta));
                }
            }
        }
    }
}
