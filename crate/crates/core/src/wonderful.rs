//! Tangent calculus on the torus closure of the wonderful compactification.
//!
//! Matrices have rows indexed by the chart basis
//! `dA(x_α) (α ∈ Φ⁺), dA(y_α) (α ∈ Φ⁺), dA(e_1), …, dA(e_l)` and columns by
//! the Lie algebra basis `x_α, y_α, h_1, …, h_l` with `h_i = α_i∨`. Positive
//! roots appear in the order of [`RootSystem::positive_roots`].

use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::rootsys::{RootId, RootSystem};
use crate::weyl::WeylElement;

/// A point `(z_1, …, z_l)` of the torus closure chart.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorusPoint {
    pub z: Vec<BigRational>,
}

impl TorusPoint {
    pub fn new(z: Vec<BigRational>) -> Self {
        TorusPoint { z }
    }

    pub fn from_ints(z: &[i64]) -> Self {
        TorusPoint {
            z: z.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect(),
        }
    }

    pub fn from_rationals(z: &[Rational64]) -> Self {
        TorusPoint {
            z: z.iter().map(linalg::to_big).collect(),
        }
    }

    /// The boundary point `z_I`: coordinate `i` is 0 when bit `i` of `mask` is set.
    pub fn boundary(rank: usize, mask: u32) -> Self {
        TorusPoint::from_ints(
            &(0..rank)
                .map(|i| if mask >> i & 1 == 1 { 0 } else { 1 })
                .collect::<Vec<_>>(),
        )
    }

    /// A random point with coordinates `p/q`, `|p| ≤ 9`, `1 ≤ q ≤ 9`; zero is allowed.
    pub fn random<R: Rng>(rank: usize, rng: &mut R) -> Self {
        TorusPoint {
            z: (0..rank)
                .map(|_| linalg::big(rng.gen_range(-9..=9), rng.gen_range(1..=9)))
                .collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.z.len()
    }

    pub fn zero_set(&self) -> Vec<usize> {
        (0..self.z.len()).filter(|&i| self.z[i].is_zero()).collect()
    }
}

impl fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.z.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl Serialize for TorusPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let parts: Vec<String> = self.z.iter().map(|x| x.to_string()).collect();
        parts.serialize(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl std::str::FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" | "L" | "l" => Ok(Side::Left),
            "right" | "R" | "r" => Ok(Side::Right),
            _ => Err(Error::Parse(format!("side must be left or right, got `{s}`"))),
        }
    }
}

/// Matrix of `dL` or `dR` at a torus point, or of its transpose.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangentMap {
    pub side: Side,
    pub twist: Option<WeylElement>,
    pub transposed: bool,
    pub matrix: Matrix<BigRational>,
}

struct JsonEntry<'a>(&'a BigRational);

impl Serialize for JsonEntry<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.0.numer();
        let d = self.0.denom();
        match (n.to_i64(), d.to_i64()) {
            (Some(n), Some(d)) => [n, d].serialize(s),
            _ => [n.to_string(), d.to_string()].serialize(s),
        }
    }
}

impl Serialize for TangentMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let rows: Vec<Vec<JsonEntry>> = self.matrix.iter().map(|r| r.iter().map(JsonEntry).collect()).collect();
        let mut st = s.serialize_struct("TangentMap", 4)?;
        st.serialize_field("side", &self.side)?;
        st.serialize_field("twist", &self.twist.as_ref().map(|w| w.to_string()))?;
        st.serialize_field("transposed", &self.transposed)?;
        st.serialize_field("matrix", &rows)?;
        st.end()
    }
}

/// Killing form data in the basis `x_α, y_α, h_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KillingData {
    /// `κ(h_i, h_j)`.
    pub toral_gram: Matrix<Rational64>,
    /// `κ(x_α, y_α)` per positive root.
    pub root_constants: Vec<Rational64>,
}

impl KillingData {
    /// `c_α = 1/k_α`.
    pub fn inverse_constants(&self) -> Vec<Rational64> {
        self.root_constants.iter().map(|k| k.recip()).collect()
    }
}

/// Outcome of comparing `dL κ̃ dLᵗ` with `dR κ̃ dRᵗ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LrCheck {
    pub holds: bool,
    /// First differing entry `(row, col, left, right)`.
    pub witness: Option<(usize, usize, BigRational, BigRational)>,
}

/// Aggregate of an lr-transpose sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub label: String,
    pub boundary_points: usize,
    pub random_points: usize,
    pub failures: usize,
    pub transpose_mismatches: usize,
}

fn big_int(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn monomial(z: &[BigRational], exps: &[i64]) -> BigRational {
    let mut m = BigRational::one();
    for (zi, &e) in z.iter().zip(exps) {
        debug_assert!(e >= 0);
        for _ in 0..e {
            m *= zi;
        }
    }
    m
}

impl RootSystem {
    /// Size `2|Φ⁺| + l` of the tangent matrices.
    pub fn tangent_dim(&self) -> usize {
        2 * self.num_positive() + self.rank()
    }

    /// Row/column labels of the tangent matrices.
    pub fn tangent_basis_labels(&self) -> (Vec<String>, Vec<String>) {
        let root = |id: RootId| {
            let c: Vec<String> = self.root(id).coeffs.iter().map(|x| x.to_string()).collect();
            c.join("")
        };
        let mut rows = Vec::new();
        let mut cols = Vec::new();
        for id in self.positive_roots() {
            rows.push(format!("dA(x_{})", root(id)));
            cols.push(format!("x_{}", root(id)));
        }
        for id in self.positive_roots() {
            rows.push(format!("dA(y_{})", root(id)));
            cols.push(format!("y_{}", root(id)));
        }
        for i in 0..self.rank() {
            rows.push(format!("dA(e_{})", i + 1));
            cols.push(format!("h_{}", i + 1));
        }
        (rows, cols)
    }

    fn check_point(&self, z: &TorusPoint) -> Result<()> {
        if z.rank() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                got: z.rank(),
            });
        }
        Ok(())
    }

    /// Exponents `⟨λ_i∨, ν⁻¹α⟩` of the monomial attached to `α` in the `ν`-chart.
    pub fn twisted_exponents(&self, nu: &WeylElement, alpha: RootId) -> Vec<i64> {
        let back = self.act_root(&nu.inverse(), alpha);
        self.root(back).coeffs.clone()
    }

    /// Core builder: `beta_exps[k]` are the monomial exponents of the `k`-th
    /// positive slot, `toral[i]` the coroot-basis coefficients of the toral
    /// argument of column `h_i`.
    fn tangent_matrix(
        &self,
        z: &TorusPoint,
        side: Side,
        beta_exps: &[Vec<i64>],
        toral: &[Vec<i64>],
    ) -> Matrix<BigRational> {
        let p = self.num_positive();
        let l = self.rank();
        let n = self.tangent_dim();
        let mut m = vec![vec![BigRational::zero(); n]; n];
        for (k, exps) in beta_exps.iter().enumerate() {
            let mono = monomial(&z.z, exps);
            match side {
                Side::Left => {
                    m[k][k] = -BigRational::one();
                    m[p + k][p + k] = mono;
                }
                Side::Right => {
                    m[k][k] = -mono;
                    m[p + k][p + k] = BigRational::one();
                }
            }
        }
        let a = self.cartan();
        for (i, d) in toral.iter().enumerate() {
            for j in 0..l {
                // −Σ_k d_k a_kj z_j
                let s: i64 = (0..l).map(|k| d[k] * a[k][j]).sum();
                if s != 0 {
                    m[2 * p + j][2 * p + i] = -big_int(s) * &z.z[j];
                }
            }
        }
        m
    }

    fn untwisted_exps(&self) -> Vec<Vec<i64>> {
        self.positive_roots().map(|id| self.root(id).coeffs.clone()).collect()
    }

    fn unit_toral(&self) -> Vec<Vec<i64>> {
        (0..self.rank())
            .map(|i| (0..self.rank()).map(|k| i64::from(i == k)).collect())
            .collect()
    }

    /// `dL` or `dR` at `z`.
    pub fn infinitesimal_action(&self, z: &TorusPoint, side: Side) -> Result<TangentMap> {
        self.check_point(z)?;
        Ok(TangentMap {
            side,
            twist: None,
            transposed: false,
            matrix: self.tangent_matrix(z, side, &self.untwisted_exps(), &self.unit_toral()),
        })
    }

    /// The dual map `dA* → g*`, assembled from the dual-basis formulas.
    pub fn infinitesimal_transpose(&self, z: &TorusPoint, side: Side) -> Result<TangentMap> {
        self.check_point(z)?;
        let p = self.num_positive();
        let l = self.rank();
        let n = self.tangent_dim();
        let mut m = vec![vec![BigRational::zero(); n]; n];
        for id in self.positive_roots() {
            let mono = monomial(&z.z, &self.root(id).coeffs);
            // image of dA(x_α)* is along x_α*, image of dA(y_α)* along y_α*
            let (x, y) = match side {
                Side::Left => (-BigRational::one(), mono),
                Side::Right => (-mono, BigRational::one()),
            };
            m[id][id] = x;
            m[p + id][p + id] = y;
        }
        let a = self.cartan();
        for i in 0..l {
            // dA(e_i)* ↦ −z_i Σ_j a_ji h_j*
            for j in 0..l {
                if a[j][i] != 0 {
                    m[2 * p + j][2 * p + i] = -big_int(a[j][i]) * &z.z[i];
                }
            }
        }
        Ok(TangentMap {
            side,
            twist: None,
            transposed: true,
            matrix: m,
        })
    }

    /// `dL` at `ν·z` in the `ν`-chart. Slot `k` holds the root `α = ν·β_k`
    /// where `β_k` is the `k`-th positive root; column `h_i` is evaluated on
    /// `ν⁻¹·h_i`.
    pub fn twisted_action(&self, z: &TorusPoint, nu: &WeylElement) -> Result<TangentMap> {
        self.check_point(z)?;
        let exps: Vec<Vec<i64>> = self
            .positive_roots()
            .map(|beta| self.twisted_exponents(nu, self.act_root(nu, beta)))
            .collect();
        let inv = nu.inverse();
        let toral: Vec<Vec<i64>> = (0..self.rank())
            .map(|i| {
                let img = self.act_coweight(&inv, &self.simple_coroot(i)).expect("rank");
                self.to_coroot_basis(&img).iter().map(|x| x.to_integer()).collect()
            })
            .collect();
        Ok(TangentMap {
            side: Side::Left,
            twist: Some(nu.clone()),
            transposed: false,
            matrix: self.tangent_matrix(z, Side::Left, &exps, &toral),
        })
    }

    /// Toral Gram matrix and root constants of the Killing form.
    pub fn killing_data(&self) -> Result<KillingData> {
        let l = self.rank();
        let a = self.cartan();
        // ⟨α_i∨, α⟩ for every root
        let pair: Vec<Vec<i64>> = self
            .all_roots()
            .map(|id| {
                (0..l)
                    .map(|i| (0..l).map(|k| a[i][k] * self.root(id).coeffs[k]).sum())
                    .collect()
            })
            .collect();
        let gram: Matrix<Rational64> = (0..l)
            .map(|i| {
                (0..l)
                    .map(|j| Rational64::from_integer(pair.iter().map(|v| v[i] * v[j]).sum()))
                    .collect()
            })
            .collect();
        let data = KillingData {
            toral_gram: gram,
            root_constants: Vec::new(),
        };
        let mut constants = Vec::with_capacity(self.num_positive());
        for id in self.positive_roots() {
            let coroot = self.to_coroot_basis(&self.coroot(id));
            let k = self.root_constant_with(&data, id, &coroot)?;
            for j in 0..l {
                let h: Vec<Rational64> = (0..l).map(|x| Rational64::from_integer(i64::from(x == j))).collect();
                if let Ok(other) = self.root_constant_with(&data, id, &h) {
                    assert_eq!(other, k, "root constant depends on the test vector");
                }
            }
            constants.push(k);
        }
        Ok(KillingData {
            root_constants: constants,
            ..data
        })
    }

    /// `κ(α∨, h)/α(h)` for `h` given in the coroot basis.
    pub fn root_constant_with(&self, data: &KillingData, id: RootId, h: &[Rational64]) -> Result<Rational64> {
        let l = self.rank();
        let coroot = self.to_coroot_basis(&self.coroot(id));
        let mut kappa = Rational64::zero();
        for i in 0..l {
            for j in 0..l {
                kappa += coroot[i] * data.toral_gram[i][j] * h[j];
            }
        }
        let h_cw = self.from_coroot_basis(h)?;
        let alpha_h = self.pair_root(&h_cw, id);
        if alpha_h.is_zero() {
            return Err(Error::DegeneratePairing(format!("{:?}", self.root(id).coeffs)));
        }
        Ok(kappa / alpha_h)
    }

    /// The map `κ̃ : g* → g` as a matrix (rows `g`, columns `g*`).
    pub fn killing_inverse_matrix(&self, data: &KillingData) -> Matrix<BigRational> {
        let p = self.num_positive();
        let n = self.tangent_dim();
        let mut k = vec![vec![BigRational::zero(); n]; n];
        for (idx, c) in data.inverse_constants().iter().enumerate() {
            let c = linalg::to_big(c);
            k[p + idx][idx] = c.clone();
            k[idx][p + idx] = c;
        }
        let g_inv = linalg::inverse(&data.toral_gram).expect("Killing form is nondegenerate");
        for (i, row) in g_inv.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                k[2 * p + i][2 * p + j] = linalg::to_big(x);
            }
        }
        k
    }

    /// Compares `dL κ̃ dLᵗ` with `dR κ̃ dRᵗ` exactly.
    pub fn check_lr_transpose(&self, z: &TorusPoint) -> Result<LrCheck> {
        let data = self.killing_data()?;
        self.check_lr_transpose_with(z, &self.killing_inverse_matrix(&data))
    }

    fn check_lr_transpose_with(&self, z: &TorusPoint, kinv: &Matrix<BigRational>) -> Result<LrCheck> {
        let dl = self.infinitesimal_action(z, Side::Left)?.matrix;
        let dr = self.infinitesimal_action(z, Side::Right)?.matrix;
        let dlt = self.infinitesimal_transpose(z, Side::Left)?.matrix;
        let drt = self.infinitesimal_transpose(z, Side::Right)?.matrix;
        let left = linalg::mul(&linalg::mul(&dl, kinv), &dlt);
        let right = linalg::mul(&linalg::mul(&dr, kinv), &drt);
        for (i, (rl, rr)) in left.iter().zip(&right).enumerate() {
            for (j, (a, b)) in rl.iter().zip(rr).enumerate() {
                if a != b {
                    return Ok(LrCheck {
                        holds: false,
                        witness: Some((i, j, a.clone(), b.clone())),
                    });
                }
            }
        }
        Ok(LrCheck {
            holds: true,
            witness: None,
        })
    }

    /// Runs the lr-transpose identity at every boundary point and at random
    /// points, and compares the transpose builders with matrix transposes.
    pub fn lr_transpose_sweep(&self, random_points: usize, transpose_points: usize, seed: u64) -> Result<SweepReport> {
        use rand::SeedableRng;
        let data = self.killing_data()?;
        let kinv = self.killing_inverse_matrix(&data);
        let l = self.rank();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut points: Vec<TorusPoint> = (0..1u32 << l).map(|m| TorusPoint::boundary(l, m)).collect();
        let boundary = points.len();
        points.extend((0..random_points.max(transpose_points)).map(|_| TorusPoint::random(l, &mut rng)));
        let results: Vec<(bool, bool)> = points
            .par_iter()
            .enumerate()
            .map(|(idx, z)| {
                let lr = idx < boundary + random_points;
                let ok = !lr || self.check_lr_transpose_with(z, &kinv).map(|c| c.holds).unwrap_or(false);
                let tp = idx >= boundary && idx < boundary + transpose_points;
                let tok = !tp
                    || [Side::Left, Side::Right].iter().all(|&s| {
                        let m = self.infinitesimal_action(z, s).unwrap().matrix;
                        let t = self.infinitesimal_transpose(z, s).unwrap().matrix;
                        linalg::transpose(&m) == t
                    });
                (ok, tok)
            })
            .collect();
        Ok(SweepReport {
            label: self.label().to_string(),
            boundary_points: boundary,
            random_points,
            failures: results.iter().filter(|r| !r.0).count(),
            transpose_mismatches: results.iter().filter(|r| !r.1).count(),
        })
    }

    /// `(z_{ω(1)}, …, z_{ω(l)})`.
    pub fn inversion_on_torus(&self, z: &TorusPoint) -> Result<TorusPoint> {
        self.check_point(z)?;
        let (_, omega) = self.longest_element();
        Ok(TorusPoint {
            z: omega.iter().map(|&w| z.z[w].clone()).collect(),
        })
    }

    /// `|Φ⁺| + #{α > 0 : supp α ∩ I = ∅} + #{j : z_j ≠ 0}` for the zero set `I`.
    pub fn predicted_degeneration_rank(&self, zero_set: &[usize]) -> usize {
        let free = self
            .positive_roots()
            .filter(|&id| zero_set.iter().all(|&i| self.root(id).coeffs[i] == 0))
            .count();
        self.num_positive() + free + (self.rank() - zero_set.len())
    }

    /// Rank of `dL` at `z`, computed by elimination.
    pub fn degeneration_rank(&self, z: &TorusPoint) -> Result<usize> {
        Ok(linalg::rank(&self.infinitesimal_action(z, Side::Left)?.matrix))
    }
}
