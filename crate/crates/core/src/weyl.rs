//! Finite Weyl group elements as signed permutations of the ambient space.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rootsys::{Coweight, RootId, RootSystem};

/// Largest group the library is willing to list element by element.
pub const MAX_ENUMERATION: u128 = 10_000_000;

/// An element of W.
///
/// `perm` is one-line notation: `w(e_i) = sign(perm[i]) · e_{|perm[i]|}`. The
/// word is a witness `w = s_{word[0]} s_{word[1]} ⋯` and plays no part in
/// equality.
#[derive(Clone, Debug)]
pub struct WeylElement {
    perm: Vec<i32>,
    word: Vec<usize>,
}

impl PartialEq for WeylElement {
    fn eq(&self, other: &Self) -> bool {
        self.perm == other.perm
    }
}

impl Eq for WeylElement {}

impl Hash for WeylElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.perm.hash(state);
    }
}

impl PartialOrd for WeylElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for WeylElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.perm.cmp(&other.perm)
    }
}

impl WeylElement {
    pub fn perm(&self) -> &[i32] {
        &self.perm
    }

    /// Simple-reflection indices (0-based) of the witness word.
    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| p == i as i32 + 1)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        let perm = other
            .perm
            .iter()
            .map(|&v| v.signum() * self.perm[v.unsigned_abs() as usize - 1])
            .collect();
        let mut word = self.word.clone();
        word.extend_from_slice(&other.word);
        WeylElement { perm, word }
    }

    pub fn inverse(&self) -> WeylElement {
        let mut perm = vec![0; self.perm.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            perm[p.unsigned_abs() as usize - 1] = p.signum() * (i as i32 + 1);
        }
        let word = self.word.iter().rev().copied().collect();
        WeylElement { perm, word }
    }

    /// Image of an ambient vector.
    pub fn act_vector<T>(&self, v: &[T]) -> Vec<T>
    where
        T: Clone + Zero + std::ops::Neg<Output = T>,
    {
        let mut out = vec![T::zero(); v.len()];
        for (i, x) in v.iter().enumerate() {
            let p = self.perm[i];
            let target = p.unsigned_abs() as usize - 1;
            out[target] = if p > 0 { x.clone() } else { -x.clone() };
        }
        out
    }

    /// The ambient action matrix (column `i` is the image of `e_i`).
    pub fn action_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.perm.len();
        let mut m = vec![vec![0; n]; n];
        for (i, &p) in self.perm.iter().enumerate() {
            m[p.unsigned_abs() as usize - 1][i] = i64::from(p.signum());
        }
        m
    }

    /// Replaces the witness word.
    pub fn with_word(mut self, word: Vec<usize>) -> WeylElement {
        self.word = word;
        self
    }

    /// 1-based word, as printed to users.
    pub fn word_display(&self) -> String {
        let parts: Vec<String> = self.word.iter().map(|i| (i + 1).to_string()).collect();
        format!("[{}]", parts.join(","))
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.perm.iter().map(|p| p.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl Serialize for WeylElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// Parses one-line notation such as `[2,-1,3]` (brackets optional).
pub fn parse_signed_permutation(s: &str) -> Result<Vec<i32>> {
    let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|x| {
            x.trim()
                .parse::<i32>()
                .map_err(|_| Error::Parse(format!("bad permutation entry `{}` in `{s}`", x.trim())))
        })
        .collect()
}

impl RootSystem {
    pub fn identity(&self) -> WeylElement {
        WeylElement {
            perm: (1..=self.ambient_dim() as i32).collect(),
            word: Vec::new(),
        }
    }

    /// The simple reflection `s_i` (0-based).
    pub fn simple_reflection(&self, i: usize) -> WeylElement {
        WeylElement {
            perm: self.simple_reflection_perm(i).to_vec(),
            word: vec![i],
        }
    }

    /// `s_{word[0]} s_{word[1]} ⋯` (0-based indices).
    pub fn from_word(&self, word: &[usize]) -> Result<WeylElement> {
        let mut w = self.identity();
        for &i in word {
            if i >= self.rank() {
                return Err(Error::IndexOutOfRange {
                    index: i + 1,
                    max: self.rank(),
                });
            }
            w = w.compose(&self.simple_reflection(i));
        }
        Ok(w)
    }

    /// Validates a signed permutation as an element of W and attaches its
    /// reduced word.
    pub fn weyl_element(&self, perm: Vec<i32>) -> Result<WeylElement> {
        let n = self.ambient_dim();
        let describe = |p: &[i32]| {
            let parts: Vec<String> = p.iter().map(|x| x.to_string()).collect();
            format!("[{}]", parts.join(","))
        };
        if perm.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: perm.len(),
            });
        }
        let mut hit = vec![false; n];
        for &p in &perm {
            let k = p.unsigned_abs() as usize;
            if k == 0 || k > n || hit[k - 1] {
                return Err(Error::NotInWeylGroup(describe(&perm)));
            }
            hit[k - 1] = true;
        }
        let w = WeylElement { perm, word: Vec::new() };
        for r in self.roots() {
            if self.root_id(&w.act_vector(&r.euclid)).is_none() {
                return Err(Error::NotInWeylGroup(describe(&w.perm)));
            }
        }
        let (word, rest) = self.descend(&w);
        if !rest.is_identity() {
            return Err(Error::NotInWeylGroup(describe(&w.perm)));
        }
        Ok(w.with_word(word))
    }

    pub fn parse_weyl(&self, s: &str) -> Result<WeylElement> {
        self.weyl_element(parse_signed_permutation(s)?)
    }

    /// `w(α)`.
    pub fn act_root(&self, w: &WeylElement, id: RootId) -> RootId {
        self.root_id(&w.act_vector(&self.root(id).euclid))
            .expect("Weyl group elements permute the roots")
    }

    /// `w·λ∨` in the fundamental-coweight basis, via `⟨wλ∨, α_j⟩ = ⟨λ∨, w⁻¹α_j⟩`.
    pub fn act_coweight(&self, w: &WeylElement, lambda: &Coweight) -> Result<Coweight> {
        self.check_coweight(lambda)?;
        let inv = w.inverse();
        Ok(Coweight::new(
            (0..self.rank())
                .map(|j| self.pair_root(lambda, self.act_root(&inv, self.simple_root_id(j))))
                .collect(),
        ))
    }

    /// `#{α > 0 : wα < 0}`.
    pub fn length(&self, w: &WeylElement) -> usize {
        self.positive_roots()
            .filter(|&id| !self.is_positive(self.act_root(w, id)))
            .count()
    }

    /// Least `i` with `w⁻¹(α_i) < 0`.
    fn least_left_descent(&self, w: &WeylElement) -> Option<usize> {
        let inv = w.inverse();
        (0..self.rank()).find(|&i| {
            let img = inv.act_vector(&self.root(self.simple_root_id(i)).euclid);
            !self.is_positive(self.root_id(&img).expect("root"))
        })
    }

    /// Strips least left descents; returns the word and what is left (a
    /// diagram automorphism, the identity for elements of W).
    fn descend(&self, w: &WeylElement) -> (Vec<usize>, WeylElement) {
        let mut word = Vec::new();
        let mut cur = w.clone();
        while let Some(i) = self.least_left_descent(&cur) {
            word.push(i);
            cur = self.simple_reflection(i).compose(&cur);
        }
        (word, cur)
    }

    /// The lexicographically least reduced word of `w`.
    pub fn reduced_word(&self, w: &WeylElement) -> Vec<usize> {
        self.descend(w).0
    }

    /// `w` with its witness word replaced by the reduced word.
    pub fn canonical(&self, w: &WeylElement) -> WeylElement {
        w.clone().with_word(self.reduced_word(w))
    }

    /// The reflection in the root `α`.
    pub fn reflection(&self, id: RootId) -> WeylElement {
        let (word, j) = self.root_witness(id);
        let w = self.from_word(word).expect("witness word is valid");
        w.compose(&self.simple_reflection(j)).compose(&w.inverse())
    }

    /// The longest element `w₀` and the involution `ω` with `w₀(α_i) = −α_{ω(i)}`.
    pub fn longest_element(&self) -> (WeylElement, Vec<usize>) {
        let mut w = self.identity();
        while let Some(i) = (0..self.rank()).find(|&i| self.is_positive(self.act_root(&w, self.simple_root_id(i)))) {
            w = w.compose(&self.simple_reflection(i));
        }
        let omega = (0..self.rank())
            .map(|i| {
                let img = self.negate(self.act_root(&w, self.simple_root_id(i)));
                (0..self.rank())
                    .find(|&j| self.simple_root_id(j) == img)
                    .expect("w0 maps simple roots to negative simple roots")
            })
            .collect();
        (w, omega)
    }

    /// Minimal-length representatives of `W / Stab(λ∨)` for dominant `λ∨`,
    /// sorted by length and then by reduced word.
    pub fn minimal_coset_reps(&self, lambda: &Coweight) -> Result<Vec<WeylElement>> {
        self.check_coweight(lambda)?;
        if !lambda.is_dominant() {
            return Err(Error::NonDominant(lambda.to_string()));
        }
        let orbit = self.orbit_traversal(lambda);
        let mut reps: Vec<WeylElement> = orbit.into_iter().map(|(_, w)| w).collect();
        reps.par_iter_mut().for_each(|w| {
            let word = self.reduced_word(w);
            w.word = word;
        });
        reps.sort_by(|a, b| a.word.len().cmp(&b.word.len()).then_with(|| a.word.cmp(&b.word)));
        Ok(reps)
    }

    /// Breadth-first traversal of `W·λ∨` along length-increasing edges.
    fn orbit_traversal(&self, lambda: &Coweight) -> Vec<(Coweight, WeylElement)> {
        let mut seen: HashMap<Coweight, usize> = HashMap::new();
        let mut out = vec![(lambda.clone(), self.identity())];
        seen.insert(lambda.clone(), 0);
        let mut k = 0;
        while k < out.len() {
            for i in 0..self.rank() {
                let (mu, w) = &out[k];
                let c = mu.coeffs()[i];
                if !c.is_positive() {
                    continue;
                }
                // s_i μ = μ − ⟨μ, α_i⟩ α_i∨
                let coroot = self.simple_coroot(i);
                let next = Coweight::new(
                    mu.coeffs()
                        .iter()
                        .zip(coroot.coeffs())
                        .map(|(a, b)| a - c * b)
                        .collect(),
                );
                if seen.contains_key(&next) {
                    continue;
                }
                let rep = self.simple_reflection(i).compose(w);
                seen.insert(next.clone(), out.len());
                out.push((next, rep));
            }
            k += 1;
        }
        out
    }

    /// The orbit `W·λ∨` (any coweight), in traversal order of its dominant
    /// representative.
    pub fn coweight_orbit(&self, lambda: &Coweight) -> Result<Vec<Coweight>> {
        let dom = self.dominant_representative(lambda)?;
        Ok(self.orbit_traversal(&dom).into_iter().map(|(mu, _)| mu).collect())
    }

    /// The dominant coweight in the orbit of `λ∨`.
    pub fn dominant_representative(&self, lambda: &Coweight) -> Result<Coweight> {
        self.check_coweight(lambda)?;
        let mut mu = lambda.clone();
        while let Some(i) = (0..self.rank()).find(|&i| mu.coeffs()[i].is_negative()) {
            let c = mu.coeffs()[i];
            let coroot = self.simple_coroot(i);
            mu = Coweight::new(
                mu.coeffs()
                    .iter()
                    .zip(coroot.coeffs())
                    .map(|(a, b)| a - c * b)
                    .collect(),
            );
        }
        Ok(mu)
    }

    /// Every element of W, sorted by length and then by reduced word.
    pub fn weyl_elements(&self) -> Result<Vec<WeylElement>> {
        let order = self.weyl_order();
        if order > MAX_ENUMERATION {
            return Err(Error::GroupTooLarge(order));
        }
        let rho = Coweight::from_ints(&vec![1; self.rank()]);
        self.minimal_coset_reps(&rho)
    }

    /// Closure of a generating set under composition.
    pub fn generated_subgroup(&self, gens: &[WeylElement]) -> Vec<WeylElement> {
        let mut seen: HashSet<WeylElement> = HashSet::new();
        let mut out = vec![self.identity()];
        seen.insert(self.identity());
        let mut queue: VecDeque<usize> = VecDeque::from([0]);
        while let Some(k) = queue.pop_front() {
            for g in gens {
                let next = out[k].compose(g);
                if seen.insert(next.clone()) {
                    queue.push_back(out.len());
                    out.push(next);
                }
            }
        }
        out.sort();
        out
    }

    /// Images of every root in `roots` under every element, with multiplicity.
    pub fn orbit(&self, elements: &[WeylElement], roots: &[RootId]) -> Vec<RootId> {
        elements
            .par_iter()
            .flat_map_iter(|w| roots.iter().map(move |&r| self.act_root(w, r)))
            .collect()
    }

    /// Orbit images with multiplicity, grouped by root.
    pub fn orbit_multiplicities(&self, elements: &[WeylElement], roots: &[RootId]) -> BTreeMap<RootId, usize> {
        let mut m = BTreeMap::new();
        for r in self.orbit(elements, roots) {
            *m.entry(r).or_insert(0) += 1;
        }
        m
    }

    /// Images of a coweight under each element, with multiplicity.
    pub fn coweight_images(&self, elements: &[WeylElement], lambda: &Coweight) -> Result<Vec<Coweight>> {
        elements.iter().map(|w| self.act_coweight(w, lambda)).collect()
    }

    /// Matrix of `w` on coweights, in the fundamental-coweight basis (column
    /// `i` is `w·λ_i∨`).
    pub fn coweight_matrix(&self, w: &WeylElement) -> Vec<Vec<Rational64>> {
        let cols: Vec<Coweight> = (0..self.rank())
            .map(|i| {
                self.act_coweight(w, &Coweight::fundamental(self.rank(), i))
                    .expect("rank matches")
            })
            .collect();
        (0..self.rank())
            .map(|r| cols.iter().map(|c| c.coeffs()[r]).collect())
            .collect()
    }
}
