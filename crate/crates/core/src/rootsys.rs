//! Root systems in their standard Euclidean realizations.
//!
//! Roots are stored with integer Euclidean coordinates together with their
//! coefficients in the simple roots. Coweights live in the basis of
//! fundamental coweights, so that `⟨λ∨, α⟩` is a dot product with the
//! simple-root coefficients of `α`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg;
use crate::snf::{smith_normal_form, Smith};

/// Index of a root inside [`RootSystem::roots`].
pub type RootId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CartanType {
    A,
    B,
    C,
    D,
    G2,
}

impl CartanType {
    fn min_rank(self) -> usize {
        match self {
            CartanType::A => 1,
            CartanType::B | CartanType::C | CartanType::G2 => 2,
            CartanType::D => 3,
        }
    }

    fn rank_ok(self, rank: usize) -> bool {
        match self {
            CartanType::G2 => rank == 2,
            t => rank >= t.min_rank(),
        }
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CartanType::A => "A",
            CartanType::B => "B",
            CartanType::C => "C",
            CartanType::D => "D",
            CartanType::G2 => "G2",
        };
        f.write_str(s)
    }
}

impl FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(CartanType::A),
            "B" => Ok(CartanType::B),
            "C" => Ok(CartanType::C),
            "D" => Ok(CartanType::D),
            "G" | "G2" => Ok(CartanType::G2),
            _ => Err(Error::UnsupportedType(s.to_string())),
        }
    }
}

/// An irreducible summand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Component {
    pub cartan_type: CartanType,
    pub rank: usize,
    /// Simple roots of this component, as indices into the whole system.
    pub simple: Vec<usize>,
    pub ambient_offset: usize,
    pub ambient_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Root {
    pub euclid: Vec<i64>,
    /// Coefficients in the simple roots.
    pub coeffs: Vec<i64>,
    /// Squared length.
    pub norm: i64,
}

impl Root {
    pub fn height(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    pub fn is_positive(&self) -> bool {
        self.coeffs.iter().any(|&c| c > 0)
    }
}

/// A coweight in the basis of fundamental coweights.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coweight {
    coeffs: Vec<Rational64>,
}

impl Coweight {
    pub fn new(coeffs: Vec<Rational64>) -> Self {
        Coweight { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Coweight {
            coeffs: coeffs.iter().map(|&c| Rational64::from_integer(c)).collect(),
        }
    }

    pub fn zero(rank: usize) -> Self {
        Coweight {
            coeffs: vec![Rational64::zero(); rank],
        }
    }

    /// The fundamental coweight with index `i` (0-based).
    pub fn fundamental(rank: usize, i: usize) -> Self {
        let mut c = Coweight::zero(rank);
        c.coeffs[i] = Rational64::one();
        c
    }

    pub fn coeffs(&self) -> &[Rational64] {
        &self.coeffs
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn integer_coeffs(&self) -> Option<Vec<i64>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    pub fn is_dominant(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    pub fn add(&self, other: &Coweight) -> Coweight {
        Coweight::new(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Coweight) -> Coweight {
        Coweight::new(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Coweight {
        Coweight::new(self.coeffs.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: i64) -> Coweight {
        Coweight::new(self.coeffs.iter().map(|a| a * k).collect())
    }
}

impl fmt::Display for Coweight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum JsonRational {
    Int(i64),
    Text(String),
}

/// Parses `"3"`, `"-1/2"` and friends.
pub fn parse_rational(s: &str) -> Result<Rational64> {
    let s = s.trim();
    let bad = || Error::Parse(format!("`{s}` is not a rational number"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Rational64::new(n, d))
        }
        None => s.parse::<i64>().map(Rational64::from_integer).map_err(|_| bad()),
    }
}

impl Serialize for Coweight {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let items: Vec<JsonRational> = self
            .coeffs
            .iter()
            .map(|c| {
                if c.is_integer() {
                    JsonRational::Int(c.to_integer())
                } else {
                    JsonRational::Text(c.to_string())
                }
            })
            .collect();
        items.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Coweight {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let items = Vec::<JsonRational>::deserialize(deserializer)?;
        let coeffs = items
            .into_iter()
            .map(|x| match x {
                JsonRational::Int(n) => Ok(Rational64::from_integer(n)),
                JsonRational::Text(s) => parse_rational(&s).map_err(serde::de::Error::custom),
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Coweight::new(coeffs))
    }
}

/// A weight in the basis of simple roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weight {
    pub coeffs: Vec<Rational64>,
}

/// Class of a coweight in `Λ∨/Λ_r∨`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FundamentalGroupElement {
    /// Residues, one per invariant factor.
    pub class_vector: Vec<i64>,
    /// Invariant factors greater than one.
    pub invariant_factors: Vec<i64>,
}

impl FundamentalGroupElement {
    pub fn identity(invariant_factors: Vec<i64>) -> Self {
        FundamentalGroupElement {
            class_vector: vec![0; invariant_factors.len()],
            invariant_factors,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.class_vector.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, 1)
    }

    pub fn scale(&self, k: i64) -> Self {
        let class_vector = self
            .class_vector
            .iter()
            .zip(&self.invariant_factors)
            .map(|(&c, &d)| (c * k).rem_euclid(d))
            .collect();
        FundamentalGroupElement {
            class_vector,
            invariant_factors: self.invariant_factors.clone(),
        }
    }

    fn combine(&self, other: &Self, sign: i64) -> Self {
        let class_vector = self
            .class_vector
            .iter()
            .zip(&other.class_vector)
            .zip(&self.invariant_factors)
            .map(|((&a, &b), &d)| (a + sign * b).rem_euclid(d))
            .collect();
        FundamentalGroupElement {
            class_vector,
            invariant_factors: self.invariant_factors.clone(),
        }
    }

    /// Order of this element.
    pub fn order(&self) -> i64 {
        self.class_vector
            .iter()
            .zip(&self.invariant_factors)
            .map(|(&c, &d)| d / c.gcd(&d))
            .fold(1, |acc, x| acc.lcm(&x))
    }

    pub fn group_order(&self) -> i64 {
        self.invariant_factors.iter().product()
    }
}

impl fmt::Display for FundamentalGroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.invariant_factors.is_empty() {
            return write!(f, "0 in trivial group");
        }
        let group: Vec<String> = self.invariant_factors.iter().map(|d| format!("Z/{d}")).collect();
        let class: Vec<String> = self.class_vector.iter().map(|c| c.to_string()).collect();
        write!(f, "({}) in {}", class.join(", "), group.join(" x "))
    }
}

/// Canonical JSON form of a root system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootSystemDoc {
    #[serde(rename = "type")]
    pub type_label: String,
    pub rank: usize,
    pub simple_roots: Vec<Vec<i64>>,
    pub cartan: Vec<Vec<i64>>,
    pub positive_roots: usize,
    pub dim: usize,
    pub fundamental_group: Vec<i64>,
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    label: String,
    components: Vec<Component>,
    rank: usize,
    ambient_dim: usize,
    simple: Vec<Vec<i64>>,
    roots: Vec<Root>,
    n_pos: usize,
    index: HashMap<Vec<i64>, RootId>,
    component_of_root: Vec<usize>,
    long_norm: Vec<i64>,
    cartan: Vec<Vec<i64>>,
    inverse_cartan: Vec<Vec<Rational64>>,
    highest: Vec<RootId>,
    witnesses: Vec<(Vec<usize>, usize)>,
    simple_perms: Vec<Vec<i32>>,
    smith: Smith,
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn unit(n: usize, i: usize, scale: i64) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = scale;
    v
}

/// Simple roots and simple-reflection permutations of one irreducible block,
/// in local coordinates.
fn block(t: CartanType, l: usize) -> (usize, Vec<Vec<i64>>, Vec<Vec<i32>>) {
    let swap = |n: usize, i: usize| -> Vec<i32> {
        let mut p: Vec<i32> = (1..=n as i32).collect();
        p.swap(i, i + 1);
        p
    };
    let diff = |n: usize, i: usize| -> Vec<i64> {
        let mut v = vec![0; n];
        v[i] = 1;
        v[i + 1] = -1;
        v
    };
    match t {
        CartanType::A => {
            let n = l + 1;
            let roots = (0..l).map(|i| diff(n, i)).collect();
            let perms = (0..l).map(|i| swap(n, i)).collect();
            (n, roots, perms)
        }
        CartanType::B | CartanType::C | CartanType::D => {
            let n = l;
            let mut roots: Vec<Vec<i64>> = (0..l - 1).map(|i| diff(n, i)).collect();
            let mut perms: Vec<Vec<i32>> = (0..l - 1).map(|i| swap(n, i)).collect();
            let mut last: Vec<i32> = (1..=n as i32).collect();
            match t {
                CartanType::B => {
                    roots.push(unit(n, l - 1, 1));
                    last[l - 1] = -(l as i32);
                }
                CartanType::C => {
                    roots.push(unit(n, l - 1, 2));
                    last[l - 1] = -(l as i32);
                }
                _ => {
                    let mut v = vec![0; n];
                    v[l - 2] = 1;
                    v[l - 1] = 1;
                    roots.push(v);
                    last[l - 2] = -(l as i32);
                    last[l - 1] = -(l as i32 - 1);
                }
            }
            perms.push(last);
            (n, roots, perms)
        }
        CartanType::G2 => {
            let roots = vec![vec![1, -1, 0], vec![-2, 1, 1]];
            let perms = vec![vec![2, 1, 3], vec![-1, -3, -2]];
            (3, roots, perms)
        }
    }
}

fn connected_components(cartan: &[Vec<i64>]) -> Vec<Vec<usize>> {
    let n = cartan.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut k = 0;
        while k < comp.len() {
            let i = comp[k];
            for j in 0..n {
                if !seen[j] && (cartan[i][j] != 0 || cartan[j][i] != 0) {
                    seen[j] = true;
                    comp.push(j);
                }
            }
            k += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

impl RootSystem {
    /// Builds the irreducible root system of the given type and rank.
    pub fn new(cartan_type: CartanType, rank: usize) -> Result<Self> {
        Self::direct_sum(&[(cartan_type, rank)])
    }

    /// Parses a type label such as `"C"` (with `rank`) or `"A1xB2"` (where `rank`
    /// must equal the total rank).
    pub fn from_label(label: &str, rank: usize) -> Result<Self> {
        if let Ok(t) = label.parse::<CartanType>() {
            return Self::new(t, rank);
        }
        let mut parts = Vec::new();
        for piece in label.split(['x', 'X', '+']) {
            let piece = piece.trim();
            let split = piece
                .find(|c: char| c.is_ascii_digit())
                .ok_or_else(|| Error::UnsupportedType(label.to_string()))?;
            let (family, digits) = piece.split_at(split);
            let (t, r) = if family.eq_ignore_ascii_case("G") && digits == "2" {
                (CartanType::G2, 2)
            } else {
                let r: usize = digits.parse().map_err(|_| Error::UnsupportedType(label.to_string()))?;
                (family.parse::<CartanType>()?, r)
            };
            parts.push((t, r));
        }
        let rs = Self::direct_sum(&parts)?;
        if rs.rank != rank {
            return Err(Error::InvalidRank {
                label: label.to_string(),
                rank,
            });
        }
        Ok(rs)
    }

    /// Builds the orthogonal direct sum of irreducible systems.
    pub fn direct_sum(parts: &[(CartanType, usize)]) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::UnsupportedType(String::new()));
        }
        let mut ambient_dim = 0;
        let mut rank = 0;
        let mut blocks = Vec::new();
        for &(t, l) in parts {
            if !t.rank_ok(l) {
                return Err(Error::InvalidRank {
                    label: t.to_string(),
                    rank: l,
                });
            }
            let (n, roots, perms) = block(t, l);
            blocks.push((t, l, ambient_dim, n, roots, perms));
            ambient_dim += n;
            rank += l;
        }

        let mut simple = Vec::with_capacity(rank);
        let mut simple_perms = Vec::with_capacity(rank);
        for (_, _, offset, n, roots, perms) in &blocks {
            for r in roots {
                let mut v = vec![0; ambient_dim];
                v[*offset..offset + n].copy_from_slice(r);
                simple.push(v);
            }
            for p in perms {
                let mut full: Vec<i32> = (1..=ambient_dim as i32).collect();
                for (k, &x) in p.iter().enumerate() {
                    full[offset + k] = x.signum() * (x.abs() + *offset as i32);
                }
                simple_perms.push(full);
            }
        }

        let norms: Vec<i64> = simple.iter().map(|a| dot(a, a)).collect();
        let cartan: Vec<Vec<i64>> = (0..rank)
            .map(|i| (0..rank).map(|j| 2 * dot(&simple[i], &simple[j]) / norms[i]).collect())
            .collect();

        // Close the simple roots under simple reflections, remembering a word.
        let mut found: Vec<(Vec<i64>, Vec<i64>, Vec<usize>, usize)> = Vec::new();
        let mut seen: HashMap<Vec<i64>, usize> = HashMap::new();
        for (j, a) in simple.iter().enumerate() {
            seen.insert(a.clone(), found.len());
            found.push((a.clone(), unit(rank, j, 1), Vec::new(), j));
        }
        let mut k = 0;
        while k < found.len() {
            for i in 0..rank {
                let (e, c, word, j) = &found[k];
                let m = 2 * dot(e, &simple[i]) / norms[i];
                if m == 0 {
                    continue;
                }
                let e2: Vec<i64> = e.iter().zip(&simple[i]).map(|(x, y)| x - m * y).collect();
                if seen.contains_key(&e2) {
                    continue;
                }
                let mut c2 = c.clone();
                c2[i] -= m;
                let mut w2 = vec![i];
                w2.extend_from_slice(word);
                let j = *j;
                seen.insert(e2.clone(), found.len());
                found.push((e2, c2, w2, j));
            }
            k += 1;
        }

        let mut positives: Vec<_> = found.iter().filter(|r| r.1.iter().any(|&x| x > 0)).cloned().collect();
        positives.sort_by(|a, b| {
            let ha: i64 = a.1.iter().sum();
            let hb: i64 = b.1.iter().sum();
            ha.cmp(&hb).then_with(|| b.1.cmp(&a.1))
        });
        let n_pos = positives.len();
        let mut roots = Vec::with_capacity(2 * n_pos);
        let mut witnesses = Vec::with_capacity(2 * n_pos);
        for (e, c, _, _) in &positives {
            roots.push(Root {
                euclid: e.clone(),
                coeffs: c.clone(),
                norm: dot(e, e),
            });
        }
        for (e, c, _, _) in &positives {
            roots.push(Root {
                euclid: e.iter().map(|x| -x).collect(),
                coeffs: c.iter().map(|x| -x).collect(),
                norm: dot(e, e),
            });
        }
        let mut index = HashMap::with_capacity(2 * n_pos);
        for (id, r) in roots.iter().enumerate() {
            index.insert(r.euclid.clone(), id);
        }
        for r in &roots {
            let (_, _, w, j) = &found[seen[&r.euclid]];
            witnesses.push((w.clone(), *j));
        }

        let comps = connected_components(&cartan);
        let mut component_of_simple = vec![0; rank];
        for (ci, c) in comps.iter().enumerate() {
            for &i in c {
                component_of_simple[i] = ci;
            }
        }
        let component_of_root: Vec<usize> = roots
            .iter()
            .map(|r| component_of_simple[r.coeffs.iter().position(|&x| x != 0).unwrap()])
            .collect();
        let mut long_norm = vec![0; comps.len()];
        for (id, r) in roots.iter().enumerate() {
            let c = component_of_root[id];
            long_norm[c] = long_norm[c].max(r.norm);
        }
        let highest: Vec<RootId> = (0..comps.len())
            .map(|c| {
                (0..n_pos)
                    .filter(|&id| component_of_root[id] == c)
                    .max_by_key(|&id| roots[id].height())
                    .unwrap()
            })
            .collect();

        // Match the Cartan-derived components to the construction blocks.
        let mut components = Vec::with_capacity(comps.len());
        for c in comps {
            let first = c[0];
            let mut start = 0;
            let (t, l, offset, n) = blocks
                .iter()
                .find_map(|(t, l, offset, n, _, _)| {
                    let hit = (start..start + l).contains(&first);
                    start += l;
                    hit.then_some((*t, *l, *offset, *n))
                })
                .unwrap();
            debug_assert_eq!(c.len(), l);
            components.push(Component {
                cartan_type: t,
                rank: l,
                simple: c,
                ambient_offset: offset,
                ambient_dim: n,
            });
        }

        let cartan_q: Vec<Vec<Rational64>> = cartan
            .iter()
            .map(|row| row.iter().map(|&x| Rational64::from_integer(x)).collect())
            .collect();
        let inverse_cartan = linalg::inverse(&cartan_q).expect("Cartan matrix is invertible");
        let smith = smith_normal_form(&linalg::transpose(&cartan));

        let label = components
            .iter()
            .map(|c| match c.cartan_type {
                CartanType::G2 => "G2".to_string(),
                t => format!("{t}{}", c.rank),
            })
            .collect::<Vec<_>>()
            .join("x");

        Ok(RootSystem {
            label,
            components,
            rank,
            ambient_dim,
            simple,
            roots,
            n_pos,
            index,
            component_of_root,
            long_norm,
            cartan,
            inverse_cartan,
            highest,
            witnesses,
            simple_perms,
            smith,
        })
    }

    /// Label such as `C3` or `A1xA2`.
    pub fn label(&self) -> &str {
        &self.label
    }

    /// Family letter for irreducible systems, the full label otherwise.
    pub fn type_label(&self) -> String {
        match self.components.as_slice() {
            [c] => c.cartan_type.to_string(),
            _ => self.label.clone(),
        }
    }

    pub fn is_irreducible(&self) -> bool {
        self.components.len() == 1
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn simple_roots(&self) -> &[Vec<i64>] {
        &self.simple
    }

    /// All roots: positives first (by height), then their negatives in the same order.
    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn root(&self, id: RootId) -> &Root {
        &self.roots[id]
    }

    pub fn num_positive(&self) -> usize {
        self.n_pos
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = RootId> {
        0..self.n_pos
    }

    pub fn all_roots(&self) -> impl Iterator<Item = RootId> {
        0..2 * self.n_pos
    }

    pub fn is_positive(&self, id: RootId) -> bool {
        id < self.n_pos
    }

    pub fn negate(&self, id: RootId) -> RootId {
        if id < self.n_pos {
            id + self.n_pos
        } else {
            id - self.n_pos
        }
    }

    /// The id of the simple root `α_i` (0-based).
    pub fn simple_root_id(&self, i: usize) -> RootId {
        self.index[&self.simple[i]]
    }

    pub fn root_id(&self, euclid: &[i64]) -> Option<RootId> {
        self.index.get(euclid).copied()
    }

    /// Looks up a root by simple-root coefficients.
    pub fn root_by_coeffs(&self, coeffs: &[i64]) -> Result<RootId> {
        if coeffs.len() != self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                got: coeffs.len(),
            });
        }
        self.roots
            .iter()
            .position(|r| r.coeffs == coeffs)
            .ok_or_else(|| Error::RootNotInSystem(format!("{coeffs:?}")))
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn inverse_cartan(&self) -> &[Vec<Rational64>] {
        &self.inverse_cartan
    }

    pub fn dim(&self) -> usize {
        2 * self.n_pos + self.rank
    }

    /// Highest root of each irreducible component.
    pub fn highest_roots(&self) -> &[RootId] {
        &self.highest
    }

    pub fn component_of_root(&self, id: RootId) -> usize {
        self.component_of_root[id]
    }

    /// Long roots are those of maximal length in their component; in a
    /// simply-laced component every root is long.
    pub fn is_long(&self, id: RootId) -> bool {
        self.roots[id].norm == self.long_norm[self.component_of_root[id]]
    }

    /// Word `[i_1, …, i_k]` and simple index `j` with `α = s_{i_1}⋯s_{i_k}(α_j)`.
    pub fn root_witness(&self, id: RootId) -> (&[usize], usize) {
        let (w, j) = &self.witnesses[id];
        (w, *j)
    }

    /// One-line signed permutation of the simple reflection `s_i`.
    pub fn simple_reflection_perm(&self, i: usize) -> &[i32] {
        &self.simple_perms[i]
    }

    /// Order of the Weyl group.
    pub fn weyl_order(&self) -> u128 {
        let fact = |n: usize| (1..=n as u128).product::<u128>();
        self.components
            .iter()
            .map(|c| match c.cartan_type {
                CartanType::A => fact(c.rank + 1),
                CartanType::B | CartanType::C => (1u128 << c.rank) * fact(c.rank),
                CartanType::D => (1u128 << (c.rank - 1)) * fact(c.rank),
                CartanType::G2 => 12,
            })
            .product()
    }

    fn check_rank(&self, got: usize) -> Result<()> {
        if got != self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                got,
            });
        }
        Ok(())
    }

    pub fn check_coweight(&self, lambda: &Coweight) -> Result<()> {
        self.check_rank(lambda.rank())
    }

    /// `⟨λ∨, α⟩` for a root id. The coweight must have the right length.
    pub fn pair_root(&self, lambda: &Coweight, id: RootId) -> Rational64 {
        debug_assert_eq!(lambda.rank(), self.rank);
        let mut acc = Rational64::zero();
        for (c, &n) in lambda.coeffs.iter().zip(&self.roots[id].coeffs) {
            if n != 0 {
                acc += c * n;
            }
        }
        acc
    }

    /// Integer pairing `⟨λ∨, α⟩` for integral coweights stored as integer vectors.
    pub fn pair_root_int(&self, lambda: &[i64], id: RootId) -> i64 {
        dot(lambda, &self.roots[id].coeffs)
    }

    /// `⟨λ∨, α⟩` checked for dimensions.
    pub fn pairing(&self, lambda: &Coweight, id: RootId) -> Result<Rational64> {
        self.check_coweight(lambda)?;
        if id >= self.roots.len() {
            return Err(Error::RootNotInSystem(format!("#{id}")));
        }
        Ok(self.pair_root(lambda, id))
    }

    /// `⟨λ∨, μ⟩` for a weight given in simple-root coordinates.
    pub fn pairing_weight(&self, lambda: &Coweight, mu: &Weight) -> Result<Rational64> {
        self.check_coweight(lambda)?;
        self.check_rank(mu.coeffs.len())?;
        Ok(lambda
            .coeffs
            .iter()
            .zip(&mu.coeffs)
            .fold(Rational64::zero(), |acc, (a, b)| acc + a * b))
    }

    pub fn root_weight(&self, id: RootId) -> Weight {
        Weight {
            coeffs: self.roots[id]
                .coeffs
                .iter()
                .map(|&c| Rational64::from_integer(c))
                .collect(),
        }
    }

    /// Half the sum of the positive roots.
    pub fn rho(&self) -> Weight {
        let mut coeffs = vec![Rational64::zero(); self.rank];
        for r in &self.roots[..self.n_pos] {
            for (acc, &c) in coeffs.iter_mut().zip(&r.coeffs) {
                *acc += Rational64::new(c, 2);
            }
        }
        Weight { coeffs }
    }

    /// Fundamental weight `λ_i` (0-based) in simple-root coordinates.
    pub fn fundamental_weight(&self, i: usize) -> Weight {
        Weight {
            coeffs: self.inverse_cartan.iter().map(|row| row[i]).collect(),
        }
    }

    /// `⟨λ∨, 2ρ⟩`, summed directly over the positive roots.
    pub fn two_rho_pairing(&self, lambda: &Coweight) -> Rational64 {
        self.positive_roots()
            .fold(Rational64::zero(), |acc, id| acc + self.pair_root(lambda, id))
    }

    /// Fundamental coweight `λ_i∨` (0-based).
    pub fn fundamental_coweight(&self, i: usize) -> Result<Coweight> {
        if i >= self.rank {
            return Err(Error::IndexOutOfRange {
                index: i + 1,
                max: self.rank,
            });
        }
        Ok(Coweight::fundamental(self.rank, i))
    }

    /// Coroot `α∨` of a root, in the fundamental-coweight basis.
    pub fn coroot(&self, id: RootId) -> Coweight {
        let r = &self.roots[id];
        Coweight::from_ints(
            &self
                .simple
                .iter()
                .map(|a| 2 * dot(&r.euclid, a) / r.norm)
                .collect::<Vec<_>>(),
        )
    }

    /// Simple coroot `α_i∨` (0-based): row `i` of the Cartan matrix.
    pub fn simple_coroot(&self, i: usize) -> Coweight {
        Coweight::from_ints(&self.cartan[i])
    }

    /// Coefficients of `λ∨` in the simple coroots.
    pub fn to_coroot_basis(&self, lambda: &Coweight) -> Vec<Rational64> {
        (0..self.rank)
            .map(|k| {
                (0..self.rank).fold(Rational64::zero(), |acc, j| {
                    acc + lambda.coeffs[j] * self.inverse_cartan[j][k]
                })
            })
            .collect()
    }

    pub fn from_coroot_basis(&self, d: &[Rational64]) -> Result<Coweight> {
        self.check_rank(d.len())?;
        Ok(Coweight::new(
            (0..self.rank)
                .map(|j| (0..self.rank).fold(Rational64::zero(), |acc, k| acc + d[k] * self.cartan[k][j]))
                .collect(),
        ))
    }

    pub fn in_coroot_lattice(&self, lambda: &Coweight) -> bool {
        self.to_coroot_basis(lambda).iter().all(|x| x.is_integer())
    }

    /// Euclidean coordinates of a coweight, identifying coroots with `2α/(α,α)`.
    pub fn coweight_euclidean(&self, lambda: &Coweight) -> Vec<Rational64> {
        let d = self.to_coroot_basis(lambda);
        let mut v = vec![Rational64::zero(); self.ambient_dim];
        for (k, a) in self.simple.iter().enumerate() {
            let norm = dot(a, a);
            for (x, &y) in v.iter_mut().zip(a) {
                *x += d[k] * Rational64::new(2 * y, norm);
            }
        }
        v
    }

    /// Invariant factors (> 1) of `Λ∨/Λ_r∨`.
    pub fn fundamental_group(&self) -> Vec<i64> {
        self.smith.diagonal.iter().copied().filter(|&d| d > 1).collect()
    }

    pub fn fundamental_group_order(&self) -> i64 {
        self.fundamental_group().iter().product()
    }

    pub fn fundamental_group_identity(&self) -> FundamentalGroupElement {
        FundamentalGroupElement::identity(self.fundamental_group())
    }

    /// Class of an integral coweight in the fundamental group.
    pub fn fundamental_group_class(&self, lambda: &Coweight) -> Result<FundamentalGroupElement> {
        self.check_coweight(lambda)?;
        let x = lambda
            .integer_coeffs()
            .ok_or_else(|| Error::NonIntegralCoweight(lambda.to_string()))?;
        let mut class_vector = Vec::new();
        let mut invariant_factors = Vec::new();
        for (row, &d) in self.smith.u.iter().zip(&self.smith.diagonal) {
            if d > 1 {
                class_vector.push(dot(row, &x).rem_euclid(d));
                invariant_factors.push(d);
            }
        }
        Ok(FundamentalGroupElement {
            class_vector,
            invariant_factors,
        })
    }

    /// The kernel coweight `ξ_i = Σ_k a^{ik} α_k∨` (0-based `i`).
    pub fn kernel_coweight(&self, i: usize) -> Result<Coweight> {
        if i >= self.rank {
            return Err(Error::IndexOutOfRange {
                index: i + 1,
                max: self.rank,
            });
        }
        self.from_coroot_basis(&self.inverse_cartan[i])
    }

    pub fn to_doc(&self) -> RootSystemDoc {
        RootSystemDoc {
            type_label: self.type_label(),
            rank: self.rank,
            simple_roots: self.simple.clone(),
            cartan: self.cartan.clone(),
            positive_roots: self.n_pos,
            dim: self.dim(),
            fundamental_group: self.fundamental_group(),
        }
    }
}

impl Serialize for RootSystem {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_doc().serialize(serializer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    fn all_small() -> Vec<RootSystem> {
        let mut v = Vec::new();
        for l in 1..=8 {
            v.push(RootSystem::new(CartanType::A, l).unwrap());
        }
        for l in 2..=8 {
            v.push(RootSystem::new(CartanType::B, l).unwrap());
            v.push(RootSystem::new(CartanType::C, l).unwrap());
        }
        for l in 3..=8 {
            v.push(RootSystem::new(CartanType::D, l).unwrap());
        }
        v.push(RootSystem::new(CartanType::G2, 2).unwrap());
        v
    }

    #[test]
    fn c3_counts() {
        let rs = RootSystem::new(CartanType::C, 3).unwrap();
        assert_eq!(rs.num_positive(), 9);
        assert_eq!(rs.dim(), 21);
    }

    #[test]
    fn a1_is_trivial() {
        let rs = RootSystem::new(CartanType::A, 1).unwrap();
        assert_eq!(rs.num_positive(), 1);
        assert_eq!(rs.cartan(), &[vec![2]]);
    }

    #[test]
    fn g2_lengths_and_determinant() {
        let rs = RootSystem::new(CartanType::G2, 2).unwrap();
        let long = rs.positive_roots().filter(|&id| rs.is_long(id)).count();
        assert_eq!(long, 3);
        assert_eq!(rs.num_positive() - long, 3);
        assert_eq!(rs.cartan(), &[vec![2, -3], vec![-1, 2]]);
        assert_eq!(rs.fundamental_group_order(), 1);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            RootSystem::new(CartanType::D, 2),
            Err(Error::InvalidRank { .. })
        ));
        assert!(matches!(
            RootSystem::new(CartanType::G2, 3),
            Err(Error::InvalidRank { .. })
        ));
        assert!(matches!("E".parse::<CartanType>(), Err(Error::UnsupportedType(_))));
    }

    #[test]
    fn classical_positive_root_counts() {
        for rs in all_small() {
            let c = &rs.components()[0];
            let l = c.rank;
            let expected = match c.cartan_type {
                CartanType::A => l * (l + 1) / 2,
                CartanType::B | CartanType::C => l * l,
                CartanType::D => l * (l - 1),
                CartanType::G2 => 6,
            };
            assert_eq!(rs.num_positive(), expected, "{}", rs.label());
        }
    }

    #[test]
    fn cartan_invariants() {
        for rs in all_small() {
            let a = rs.cartan();
            for i in 0..rs.rank() {
                assert_eq!(a[i][i], 2);
                for j in 0..rs.rank() {
                    if i != j {
                        assert!(a[i][j] <= 0);
                    }
                }
            }
            let aq: Vec<Vec<Rational64>> = a
                .iter()
                .map(|r| r.iter().map(|&x| Rational64::from_integer(x)).collect())
                .collect();
            assert_eq!(linalg::mul(&aq, rs.inverse_cartan()), linalg::identity(rs.rank()));
        }
    }

    #[test]
    fn roots_split_into_positive_and_negative() {
        for rs in all_small() {
            let n = rs.num_positive();
            assert_eq!(rs.roots().len(), 2 * n);
            for id in 0..n {
                assert!(rs.root(id).coeffs.iter().all(|&c| c >= 0));
                let neg = rs.negate(id);
                assert!(!rs.is_positive(neg));
                let minus: Vec<i64> = rs.root(id).euclid.iter().map(|x| -x).collect();
                assert_eq!(rs.root(neg).euclid, minus);
            }
        }
    }

    #[test]
    fn a_type_lives_in_zero_sum_hyperplane() {
        let rs = RootSystem::new(CartanType::A, 4).unwrap();
        for r in rs.roots() {
            assert_eq!(r.euclid.iter().sum::<i64>(), 0);
        }
    }

    #[test]
    fn rho_two_ways() {
        for rs in all_small() {
            let half_sum = rs.rho();
            let mut fund = vec![Rational64::zero(); rs.rank()];
            for i in 0..rs.rank() {
                for (acc, c) in fund.iter_mut().zip(rs.fundamental_weight(i).coeffs) {
                    *acc += c;
                }
            }
            assert_eq!(half_sum.coeffs, fund, "{}", rs.label());
            for i in 0..rs.rank() {
                let p = rs.pairing_weight(&rs.simple_coroot(i), &half_sum).unwrap();
                assert_eq!(p, q(1, 1));
            }
        }
    }

    #[test]
    fn euclidean_coroots_match_coweights() {
        // Cross-check ⟨λ∨, α⟩ computed through Euclidean coordinates.
        for rs in all_small() {
            for i in 0..rs.rank() {
                let e = rs.coweight_euclidean(&Coweight::fundamental(rs.rank(), i));
                for id in rs.all_roots() {
                    let via_euclid: Rational64 = e
                        .iter()
                        .zip(&rs.root(id).euclid)
                        .fold(Rational64::zero(), |acc, (x, &y)| acc + x * y);
                    assert_eq!(via_euclid, rs.pair_root(&Coweight::fundamental(rs.rank(), i), id));
                }
            }
        }
    }

    #[test]
    fn first_fundamental_coweight_is_first_unit_vector() {
        for t in [CartanType::B, CartanType::C, CartanType::D] {
            let rs = RootSystem::new(t, 4).unwrap();
            let e = rs.coweight_euclidean(&Coweight::fundamental(4, 0));
            assert_eq!(e, vec![q(1, 1), q(0, 1), q(0, 1), q(0, 1)]);
        }
    }

    #[test]
    fn highest_root_dominates() {
        for rs in all_small() {
            let theta = rs.highest_roots()[0];
            for id in rs.all_roots() {
                let r = rs.root(id);
                assert!(rs.root(theta).coeffs.iter().zip(&r.coeffs).all(|(a, b)| a >= b));
            }
        }
    }

    #[test]
    fn pairing_examples() {
        let a3 = RootSystem::new(CartanType::A, 3).unwrap();
        let p = a3.pairing_weight(&Coweight::fundamental(3, 1), &a3.rho()).unwrap();
        assert_eq!(p, q(2, 1));
        let g2 = RootSystem::new(CartanType::G2, 2).unwrap();
        let p = g2.pairing_weight(&Coweight::fundamental(2, 0), &g2.rho()).unwrap();
        assert_eq!(p, q(5, 1));
        for i in 0..3 {
            for j in 0..3 {
                let v = a3.pairing(&Coweight::fundamental(3, i), a3.simple_root_id(j)).unwrap();
                assert_eq!(v, q(i64::from(i == j), 1));
            }
        }
        assert!(matches!(
            a3.pairing(&Coweight::zero(2), 0),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn simple_coroots_pair_to_cartan() {
        for rs in all_small() {
            for i in 0..rs.rank() {
                assert_eq!(rs.coroot(rs.simple_root_id(i)), rs.simple_coroot(i));
                for j in 0..rs.rank() {
                    let v = rs.pair_root(&rs.simple_coroot(i), rs.simple_root_id(j));
                    assert_eq!(v, Rational64::from_integer(rs.cartan()[i][j]));
                }
            }
        }
    }

    #[test]
    fn fundamental_groups() {
        let cases = [
            (CartanType::A, 3, vec![4]),
            (CartanType::B, 3, vec![2]),
            (CartanType::C, 4, vec![2]),
            (CartanType::D, 4, vec![2, 2]),
            (CartanType::D, 5, vec![4]),
            (CartanType::G2, 2, vec![]),
        ];
        for (t, l, factors) in cases {
            let rs = RootSystem::new(t, l).unwrap();
            assert_eq!(rs.fundamental_group(), factors);
        }
        let a3 = RootSystem::new(CartanType::A, 3).unwrap();
        let c = a3.fundamental_group_class(&Coweight::fundamental(3, 1)).unwrap();
        assert_eq!(c.order(), 2);
        for i in 0..3 {
            assert!(a3.fundamental_group_class(&a3.simple_coroot(i)).unwrap().is_identity());
        }
        assert!(matches!(
            a3.fundamental_group_class(&Coweight::new(vec![q(1, 2), q(0, 1), q(0, 1)])),
            Err(Error::NonIntegralCoweight(_))
        ));
    }

    #[test]
    fn group_order_is_cartan_determinant() {
        for rs in all_small() {
            let aq: Vec<Vec<Rational64>> = rs
                .cartan()
                .iter()
                .map(|r| r.iter().map(|&x| Rational64::from_integer(x)).collect())
                .collect();
            assert_eq!(
                Rational64::from_integer(rs.fundamental_group_order()),
                linalg::det(&aq).abs()
            );
        }
    }

    #[test]
    fn kernel_coweights() {
        let a3 = RootSystem::new(CartanType::A, 3).unwrap();
        let xi = a3.kernel_coweight(1).unwrap();
        assert_eq!(a3.to_coroot_basis(&xi), vec![q(1, 2), q(1, 1), q(1, 2)]);
        let a1 = RootSystem::new(CartanType::A, 1).unwrap();
        assert_eq!(a1.kernel_coweight(0).unwrap(), Coweight::fundamental(1, 0));
        assert_eq!(a1.to_coroot_basis(&Coweight::fundamental(1, 0)), vec![q(1, 2)]);
        // In type C the first fundamental coweight is the sum of all simple coroots.
        let c4 = RootSystem::new(CartanType::C, 4).unwrap();
        assert_eq!(c4.to_coroot_basis(&c4.kernel_coweight(0).unwrap()), vec![q(1, 1); 4]);
        assert!(matches!(a3.kernel_coweight(3), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn kernel_coweights_are_dual_to_simple_roots() {
        for rs in all_small() {
            for i in 0..rs.rank() {
                let xi = rs.kernel_coweight(i).unwrap();
                for j in 0..rs.rank() {
                    let v = rs.pair_root(&xi, rs.simple_root_id(j));
                    assert_eq!(v, q(i64::from(i == j), 1));
                }
            }
        }
    }

    #[test]
    fn parameter_closed_forms() {
        for l in 1..=8i64 {
            let a = RootSystem::new(CartanType::A, l as usize).unwrap();
            for i in 1..=l {
                let p = a.two_rho_pairing(&Coweight::fundamental(l as usize, i as usize - 1));
                assert_eq!(p + 1, q(i * (l + 1 - i) + 1, 1));
            }
        }
        for l in 2..=8i64 {
            let b = RootSystem::new(CartanType::B, l as usize).unwrap();
            let c = RootSystem::new(CartanType::C, l as usize).unwrap();
            for i in 1..=l {
                let lam = Coweight::fundamental(l as usize, i as usize - 1);
                assert_eq!(b.two_rho_pairing(&lam) + 1, q(i * (2 * l - i) + 1, 1));
                let expected = if i < l {
                    i * (2 * l - i + 1) + 1
                } else {
                    l * (l + 1) / 2 + 1
                };
                assert_eq!(c.two_rho_pairing(&lam) + 1, q(expected, 1));
            }
        }
    }

    #[test]
    fn reducible_systems_split_into_components() {
        let rs = RootSystem::direct_sum(&[(CartanType::A, 1), (CartanType::B, 2)]).unwrap();
        assert_eq!(rs.label(), "A1xB2");
        assert_eq!(rs.components().len(), 2);
        assert_eq!(rs.highest_roots().len(), 2);
        assert_eq!(rs.num_positive(), 1 + 4);
        assert_eq!(rs.fundamental_group(), vec![2, 2]);
        let again = RootSystem::from_label("A1xB2", 3).unwrap();
        assert_eq!(again.cartan(), rs.cartan());
        assert!(RootSystem::from_label("A1xB2", 4).is_err());
    }

    #[test]
    fn json_document() {
        let rs = RootSystem::new(CartanType::C, 2).unwrap();
        let v = serde_json::to_value(&rs).unwrap();
        assert_eq!(v["type"], "C");
        assert_eq!(v["rank"], 2);
        assert_eq!(v["cartan"], serde_json::json!([[2, -2], [-1, 2]]));
        assert_eq!(v["simple_roots"], serde_json::json!([[1, -1], [0, 2]]));
    }

    #[test]
    fn coweight_json_round_trip() {
        let c = Coweight::new(vec![q(1, 1), q(-1, 2)]);
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"[1,"-1/2"]"#);
        let back: Coweight = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }

    proptest! {
        #[test]
        fn fundamental_group_class_is_additive(
            a in proptest::collection::vec(-6i64..6, 4),
            b in proptest::collection::vec(-6i64..6, 4),
        ) {
            let rs = RootSystem::new(CartanType::D, 4).unwrap();
            let x = Coweight::from_ints(&a);
            let y = Coweight::from_ints(&b);
            let sum = rs.fundamental_group_class(&x.add(&y)).unwrap();
            let parts = rs.fundamental_group_class(&x).unwrap()
                .add(&rs.fundamental_group_class(&y).unwrap());
            prop_assert_eq!(sum, parts);
        }

        #[test]
        fn coroot_lattice_has_trivial_class(d in proptest::collection::vec(-5i64..5, 3)) {
            let rs = RootSystem::new(CartanType::A, 3).unwrap();
            let dq: Vec<Rational64> = d.iter().map(|&x| Rational64::from_integer(x)).collect();
            let lam = rs.from_coroot_basis(&dq).unwrap();
            prop_assert!(rs.in_coroot_lattice(&lam));
            prop_assert!(rs.fundamental_group_class(&lam).unwrap().is_identity());
        }
    }
}
