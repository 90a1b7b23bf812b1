//! Modification schemes: twisted simple modifications checked against the
//! parameter count, root-bundle degrees, toral lines and topological type.

mod obstruction;
mod preset;
mod search;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_rational::Rational64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::rootsys::{FundamentalGroupElement, RootId, RootSystem};
use crate::weyl::WeylElement;

pub use obstruction::{Feasibility, ObstructionReport, TypeAggregate};
pub use preset::{c_rotation, preset, Family, A3_IDENTITY_NOTE};
pub use search::{search, Certificate, SearchOptions, SearchOutcome, TwistPool};

/// Fixed line carried by every report.
pub const GENERICITY_DISCLAIMER: &str = "conditions are combinatorial and necessary; \
the points are assumed to be in general position on the curve";

/// `points` modifications of type `−ν·λ_i∨`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeEntry {
    pub twist: WeylElement,
    /// 0-based fundamental coweight index.
    pub coweight: usize,
    pub points: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModificationScheme {
    pub genus: u64,
    pub entries: Vec<SchemeEntry>,
    /// Remarks attached by whoever built the scheme.
    pub notes: Vec<String>,
}

impl ModificationScheme {
    pub fn new(genus: u64, entries: Vec<SchemeEntry>) -> Self {
        ModificationScheme {
            genus,
            entries,
            notes: Vec::new(),
        }
    }

    /// `M = Σ k`.
    pub fn total_points(&self) -> u64 {
        self.entries.iter().map(|e| e.points).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum DegreeMode {
    /// Every root degree at least `g`.
    #[default]
    AtLeast,
    /// Every root degree exactly `g`.
    Exact,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParamCount {
    pub n: u64,
    pub target: u64,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootDegree {
    /// Simple-root coefficients.
    pub root: Vec<i64>,
    pub euclid: Vec<i64>,
    pub long: bool,
    pub degree: i64,
    /// `(entry index, multiplicity per point)` for every contributing entry.
    pub sources: Vec<(usize, i64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ToralLine {
    /// Primitive direction in fundamental-coweight coordinates.
    pub direction: Vec<i64>,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchemeReport {
    #[serde(rename = "type")]
    pub label: String,
    pub genus: u64,
    pub mode: DegreeMode,
    pub total_points: u64,
    pub param_count: ParamCount,
    pub root_degrees: Vec<RootDegree>,
    pub min_degree: i64,
    pub degrees_ok: bool,
    pub toral_lines: Vec<ToralLine>,
    pub spanning: bool,
    pub per_line_ok: bool,
    pub top_type: FundamentalGroupElement,
    pub top_type_trivial: bool,
    pub verdict: Verdict,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
    pub disclaimer: String,
}

impl SchemeReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Human-readable summary, root degrees grouped by length class.
    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let flag = |ok: bool| if ok { "ok" } else { "FAIL" };
        let _ = writeln!(
            s,
            "scheme for {} at genus {} ({} points)",
            self.label, self.genus, self.total_points
        );
        let _ = writeln!(
            s,
            "  parameters   N = {}  target = {}  [{}]",
            self.param_count.n,
            self.param_count.target,
            flag(self.param_count.ok)
        );
        let mode = match self.mode {
            DegreeMode::AtLeast => ">=",
            DegreeMode::Exact => "=",
        };
        let _ = writeln!(
            s,
            "  root degrees min = {}  required {} {}  [{}]",
            self.min_degree,
            mode,
            self.genus,
            flag(self.degrees_ok)
        );
        for (title, long) in [("long", true), ("short", false)] {
            let group: Vec<&RootDegree> = self.root_degrees.iter().filter(|r| r.long == long).collect();
            if group.is_empty() {
                continue;
            }
            let _ = writeln!(s, "    {title} roots:");
            for r in group {
                let _ = writeln!(s, "      {:<24} deg {}", format!("{:?}", r.euclid), r.degree);
            }
        }
        let _ = writeln!(
            s,
            "  toral lines  {} lines  spanning [{}]  count >= g [{}]",
            self.toral_lines.len(),
            flag(self.spanning),
            flag(self.per_line_ok)
        );
        for line in &self.toral_lines {
            let _ = writeln!(s, "      {:<24} x{}", format!("{:?}", line.direction), line.count);
        }
        let _ = writeln!(
            s,
            "  top type     {}{}",
            self.top_type,
            if self.top_type_trivial { " (trivial)" } else { "" }
        );
        for note in &self.notes {
            let _ = writeln!(s, "  note: {note}");
        }
        let _ = writeln!(s, "  {}", self.disclaimer);
        let verdict = match self.verdict {
            Verdict::Pass => "PASS".to_string(),
            Verdict::Fail => format!("FAIL ({})", self.failures.join(", ")),
        };
        let _ = writeln!(s, "verdict: {verdict}");
        s
    }
}

/// On-disk scheme format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeFile {
    #[serde(rename = "type")]
    pub type_label: String,
    pub rank: usize,
    pub genus: u64,
    pub entries: Vec<SchemeFileEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeFileEntry {
    pub twist: String,
    /// 1-based.
    pub coweight: usize,
    pub points: u64,
}

impl SchemeFile {
    pub fn from_scheme(rs: &RootSystem, scheme: &ModificationScheme) -> SchemeFile {
        SchemeFile {
            type_label: rs.type_label(),
            rank: rs.rank(),
            genus: scheme.genus,
            entries: scheme
                .entries
                .iter()
                .map(|e| SchemeFileEntry {
                    twist: e.twist.to_string(),
                    coweight: e.coweight + 1,
                    points: e.points,
                })
                .collect(),
            notes: scheme.notes.clone(),
        }
    }

    /// Builds the root system and validates every entry.
    pub fn resolve(&self) -> Result<(RootSystem, ModificationScheme)> {
        let rs = RootSystem::from_label(&self.type_label, self.rank)?;
        let mut entries = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            if e.coweight == 0 || e.coweight > rs.rank() {
                return Err(Error::IndexOutOfRange {
                    index: e.coweight,
                    max: rs.rank(),
                });
            }
            if e.points == 0 {
                return Err(Error::Parse("entry with zero points".to_string()));
            }
            entries.push(SchemeEntry {
                twist: rs.parse_weyl(&e.twist)?,
                coweight: e.coweight - 1,
                points: e.points,
            });
        }
        let scheme = ModificationScheme {
            genus: self.genus,
            entries,
            notes: self.notes.clone(),
        };
        Ok((rs, scheme))
    }
}

impl RootSystem {
    /// `2⟨λ_i∨, ρ⟩ + 1`, the parameter count of one simple modification.
    pub fn simple_parameter_count(&self, i: usize) -> u64 {
        let lam = crate::rootsys::Coweight::fundamental(self.rank(), i);
        (self.two_rho_pairing(&lam) + 1).to_u64().expect("nonnegative integer")
    }

    /// `N = Σ k·(2⟨λ_i∨, ρ⟩ + 1)`.
    pub fn parameter_count(&self, scheme: &ModificationScheme) -> u64 {
        scheme
            .entries
            .iter()
            .map(|e| e.points * self.simple_parameter_count(e.coweight))
            .sum()
    }

    /// `max{0, ⟨λ_i∨, ν⁻¹α⟩}`.
    pub fn entry_multiplicity(&self, entry: &SchemeEntry, alpha: RootId) -> i64 {
        let back = self.act_root(&entry.twist.inverse(), alpha);
        self.root(back).coeffs[entry.coweight].max(0)
    }

    /// `deg D_α = Σ k·max{0, ⟨λ_i∨, ν⁻¹α⟩}`.
    pub fn root_degree(&self, scheme: &ModificationScheme, alpha: RootId) -> Result<i64> {
        if alpha >= self.roots().len() {
            return Err(Error::RootNotInSystem(format!("#{alpha}")));
        }
        Ok(scheme
            .entries
            .iter()
            .map(|e| e.points as i64 * self.entry_multiplicity(e, alpha))
            .sum())
    }

    /// Root degree for a root given by Euclidean coordinates.
    pub fn root_degree_of_vector(&self, scheme: &ModificationScheme, euclid: &[i64]) -> Result<i64> {
        let id = self
            .root_id(euclid)
            .ok_or_else(|| Error::RootNotInSystem(format!("{euclid:?}")))?;
        self.root_degree(scheme, id)
    }

    /// Canonical direction of the line through `ν·ξ_i`.
    pub fn toral_direction(&self, entry: &SchemeEntry) -> Vec<i64> {
        let xi = self.kernel_coweight(entry.coweight).expect("index validated");
        let img = self.act_coweight(&entry.twist, &xi).expect("rank matches");
        linalg::primitive_direction(img.coeffs()).expect("nonzero")
    }

    /// Toral lines with aggregated point counts, sorted by direction.
    pub fn toral_lines(&self, scheme: &ModificationScheme) -> Vec<ToralLine> {
        let mut lines: BTreeMap<Vec<i64>, u64> = BTreeMap::new();
        for e in &scheme.entries {
            *lines.entry(self.toral_direction(e)).or_insert(0) += e.points;
        }
        lines
            .into_iter()
            .map(|(direction, count)| ToralLine { direction, count })
            .collect()
    }

    /// Evaluates all conditions on a scheme.
    pub fn verify(&self, scheme: &ModificationScheme, mode: DegreeMode) -> SchemeReport {
        let g = scheme.genus;
        let n = self.parameter_count(scheme);
        let target = g * self.dim() as u64;
        let param_count = ParamCount {
            n,
            target,
            ok: n == target,
        };

        let root_degrees: Vec<RootDegree> = self
            .all_roots()
            .map(|id| {
                let sources: Vec<(usize, i64)> = scheme
                    .entries
                    .iter()
                    .enumerate()
                    .filter_map(|(k, e)| {
                        let m = self.entry_multiplicity(e, id);
                        (m > 0).then_some((k, m))
                    })
                    .collect();
                let degree = sources.iter().map(|&(k, m)| scheme.entries[k].points as i64 * m).sum();
                RootDegree {
                    root: self.root(id).coeffs.clone(),
                    euclid: self.root(id).euclid.clone(),
                    long: self.is_long(id),
                    degree,
                    sources,
                }
            })
            .collect();
        let min_degree = root_degrees.iter().map(|r| r.degree).min().unwrap_or(0);
        let degrees_ok = root_degrees.iter().all(|r| match mode {
            DegreeMode::AtLeast => r.degree >= g as i64,
            DegreeMode::Exact => r.degree == g as i64,
        });

        let toral_lines = self.toral_lines(scheme);
        let rank_of = |lines: &[&ToralLine]| {
            let m: Vec<Vec<Rational64>> = lines
                .iter()
                .map(|l| l.direction.iter().map(|&x| Rational64::from_integer(x)).collect())
                .collect();
            if m.is_empty() {
                0
            } else {
                linalg::rank(&m)
            }
        };
        let all: Vec<&ToralLine> = toral_lines.iter().collect();
        let heavy: Vec<&ToralLine> = toral_lines.iter().filter(|l| l.count >= g).collect();
        let spanning = rank_of(&all) == self.rank();
        let per_line_ok = rank_of(&heavy) == self.rank();

        let types: Vec<_> = scheme
            .entries
            .iter()
            .map(|e| (crate::rootsys::Coweight::fundamental(self.rank(), e.coweight), e.points))
            .collect();
        let top_type = self
            .modification_type_sum(&types)
            .expect("fundamental coweights are integral");

        let mut failures = Vec::new();
        if !param_count.ok {
            failures.push("param_count".to_string());
        }
        if !degrees_ok {
            failures.push("root_degrees".to_string());
        }
        if !spanning {
            failures.push("toral_spanning".to_string());
        }
        if !per_line_ok {
            failures.push("toral_counts".to_string());
        }
        let verdict = if failures.is_empty() {
            Verdict::Pass
        } else {
            Verdict::Fail
        };

        SchemeReport {
            label: self.label().to_string(),
            genus: g,
            mode,
            total_points: scheme.total_points(),
            param_count,
            root_degrees,
            min_degree,
            degrees_ok,
            toral_lines,
            spanning,
            per_line_ok,
            top_type_trivial: top_type.is_identity(),
            top_type,
            verdict,
            failures,
            notes: scheme.notes.clone(),
            disclaimer: GENERICITY_DISCLAIMER.to_string(),
        }
    }

    /// Determinant of `ξ_i, ν·ξ_i, …, ν^{count−1}·ξ_i` written in the coroot basis.
    pub fn kernel_orbit_determinant(&self, nu: &WeylElement, i: usize) -> Result<Rational64> {
        let mut v = self.kernel_coweight(i)?;
        let mut rows = Vec::with_capacity(self.rank());
        for _ in 0..self.rank() {
            rows.push(self.to_coroot_basis(&v));
            v = self.act_coweight(nu, &v)?;
        }
        Ok(linalg::det(&rows))
    }
}

/// `(−1)^{l−1} − 2^{−l}`.
pub fn stated_c_determinant(l: usize) -> Rational64 {
    let sign = if l % 2 == 1 { 1 } else { -1 };
    Rational64::from_integer(sign) - Rational64::new(1, 1 << l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::CartanType;

    #[test]
    fn empty_scheme_has_zero_degrees() {
        let rs = RootSystem::new(CartanType::B, 3).unwrap();
        let s = ModificationScheme::new(2, Vec::new());
        for id in rs.all_roots() {
            assert_eq!(rs.root_degree(&s, id).unwrap(), 0);
        }
        assert!(matches!(rs.root_degree(&s, 999), Err(Error::RootNotInSystem(_))));
        assert!(matches!(
            rs.root_degree_of_vector(&s, &[5, 0, 0]),
            Err(Error::RootNotInSystem(_))
        ));
        let report = rs.verify(&s, DegreeMode::AtLeast);
        assert_eq!(report.verdict, Verdict::Fail);
        assert_eq!(report.failures.len(), 4);
    }

    #[test]
    fn degree_bookkeeping() {
        let rs = RootSystem::new(CartanType::C, 3).unwrap();
        let entries = vec![
            SchemeEntry {
                twist: rs.from_word(&[0, 2]).unwrap(),
                coweight: 0,
                points: 3,
            },
            SchemeEntry {
                twist: rs.from_word(&[1]).unwrap(),
                coweight: 2,
                points: 2,
            },
        ];
        let s = ModificationScheme::new(4, entries);
        let total: i64 = rs.all_roots().map(|id| rs.root_degree(&s, id).unwrap()).sum();
        assert_eq!(total as u64 + s.total_points(), rs.parameter_count(&s));
    }

    #[test]
    fn file_round_trip() {
        let rs = RootSystem::new(CartanType::C, 2).unwrap();
        let s = ModificationScheme::new(
            2,
            vec![SchemeEntry {
                twist: rs.parse_weyl("[2,-1]").unwrap(),
                coweight: 1,
                points: 3,
            }],
        );
        let file = SchemeFile::from_scheme(&rs, &s);
        let text = serde_json::to_string(&file).unwrap();
        assert_eq!(
            text,
            r#"{"type":"C","rank":2,"genus":2,"entries":[{"twist":"[2,-1]","coweight":2,"points":3}]}"#
        );
        let parsed: SchemeFile = serde_json::from_str(&text).unwrap();
        let (rs2, s2) = parsed.resolve().unwrap();
        assert_eq!(rs2.label(), "C2");
        assert_eq!(s2, s);
    }

    #[test]
    fn file_validation() {
        let bad_index = SchemeFile {
            type_label: "A".into(),
            rank: 2,
            genus: 2,
            entries: vec![SchemeFileEntry {
                twist: "[1,2,3]".into(),
                coweight: 3,
                points: 1,
            }],
            notes: vec![],
        };
        assert!(matches!(bad_index.resolve(), Err(Error::IndexOutOfRange { .. })));
        let bad_twist = SchemeFile {
            entries: vec![SchemeFileEntry {
                twist: "[-1,2,3]".into(),
                coweight: 1,
                points: 1,
            }],
            ..bad_index
        };
        assert!(matches!(bad_twist.resolve(), Err(Error::NotInWeylGroup(_))));
    }

    #[test]
    fn stated_determinant_values() {
        assert_eq!(stated_c_determinant(2), Rational64::new(-5, 4));
        assert_eq!(stated_c_determinant(3), Rational64::new(7, 8));
    }
}
