//! Twist-invariant aggregate screen for parameter schemes.

use std::fmt::Write as _;

use num_rational::Rational64;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::rootsys::{Coweight, RootSystem};

const NODE_CAP: u64 = 20_000_000;

/// Root sums of one simple type, split by root length.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TypeAggregate {
    /// 1-based fundamental coweight index.
    pub coweight: usize,
    /// `Σ ⟨λ_i∨, α⟩` over short positive roots.
    pub short: u64,
    /// `Σ ⟨λ_i∨, α⟩` over long positive roots.
    pub long: u64,
    /// `short + long + 1`.
    pub parameters: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Feasibility {
    Feasible,
    Infeasible,
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionReport {
    #[serde(rename = "type")]
    pub label: String,
    pub genus: u64,
    pub dim: u64,
    /// Number of short roots in Φ (both signs).
    pub short_roots: u64,
    pub long_roots: u64,
    pub aggregates: Vec<TypeAggregate>,
    /// `g·dim`.
    pub target: u64,
    /// `g·|Φ_short|` and `g·|Φ_long|`.
    pub short_needed: u64,
    pub long_needed: u64,
    /// Upper bound `g·l` on the number of points implied by the constraints.
    pub max_total_points: u64,
    pub verdict: Feasibility,
    /// Counts `k_i` of a feasible solution, when one exists.
    pub witness: Option<Vec<u64>>,
    pub nodes: u64,
    pub certificate: Vec<String>,
}

impl ObstructionReport {
    pub fn is_infeasible(&self) -> bool {
        self.verdict == Feasibility::Infeasible
    }

    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "aggregate screen for {} at genus {}", self.label, self.genus);
        let _ = writeln!(
            s,
            "  dim = {}  |short| = {}  |long| = {}",
            self.dim, self.short_roots, self.long_roots
        );
        let _ = writeln!(s, "  type  short  long  parameters");
        for a in &self.aggregates {
            let _ = writeln!(
                s,
                "  {:>4}  {:>5}  {:>4}  {:>10}",
                a.coweight, a.short, a.long, a.parameters
            );
        }
        let _ = writeln!(
            s,
            "  need: sum k p = {}, sum k s >= {}, sum k t >= {}",
            self.target, self.short_needed, self.long_needed
        );
        for line in &self.certificate {
            let _ = writeln!(s, "  {line}");
        }
        let verdict = match self.verdict {
            Feasibility::Feasible => "FEASIBLE",
            Feasibility::Infeasible => "INFEASIBLE",
            Feasibility::Undecided => "UNDECIDED",
        };
        let _ = writeln!(s, "verdict: {verdict}");
        s
    }
}

struct Enumerator<'a> {
    aggs: &'a [TypeAggregate],
    short_needed: u64,
    long_needed: u64,
    nodes: u64,
    counts: Vec<u64>,
}

impl Enumerator<'_> {
    fn run(&mut self, i: usize, remaining: u64, short: u64, long: u64) -> Option<bool> {
        self.nodes += 1;
        if self.nodes > NODE_CAP {
            return None;
        }
        if remaining == 0 {
            return Some(short >= self.short_needed && long >= self.long_needed);
        }
        if i == self.aggs.len() {
            return Some(false);
        }
        // Optimistic remaining contributions by best ratio over the other types.
        let rest = &self.aggs[i..];
        let bound = |f: fn(&TypeAggregate) -> u64| {
            rest.iter()
                .map(|a| Rational64::new(f(a) as i64, a.parameters as i64))
                .max()
                .unwrap()
                * remaining as i64
        };
        if Rational64::from_integer(short as i64) + bound(|a| a.short)
            < Rational64::from_integer(self.short_needed as i64)
            || Rational64::from_integer(long as i64) + bound(|a| a.long)
                < Rational64::from_integer(self.long_needed as i64)
        {
            return Some(false);
        }
        let a = &self.aggs[i];
        let max_k = remaining / a.parameters;
        for k in 0..=max_k {
            self.counts[i] = k;
            match self.run(
                i + 1,
                remaining - k * a.parameters,
                short + k * a.short,
                long + k * a.long,
            ) {
                Some(true) => return Some(true),
                Some(false) => {}
                None => return None,
            }
        }
        self.counts[i] = 0;
        Some(false)
    }
}

impl RootSystem {
    /// Short/long aggregates of every simple type.
    pub fn type_aggregates(&self) -> Vec<TypeAggregate> {
        (0..self.rank())
            .map(|i| {
                let lam = Coweight::fundamental(self.rank(), i);
                let (mut short, mut long) = (0u64, 0u64);
                for id in self.positive_roots() {
                    let v = self.pair_root(&lam, id).to_u64().unwrap();
                    if self.is_long(id) {
                        long += v;
                    } else {
                        short += v;
                    }
                }
                TypeAggregate {
                    coweight: i + 1,
                    short,
                    long,
                    parameters: short + long + 1,
                }
            })
            .collect()
    }

    /// Decides the aggregate integer system by bounded enumeration.
    pub fn obstruction_analysis(&self, genus: u64) -> ObstructionReport {
        let aggregates = self.type_aggregates();
        let long_roots = self.all_roots().filter(|&id| self.is_long(id)).count() as u64;
        let short_roots = 2 * self.num_positive() as u64 - long_roots;
        let dim = self.dim() as u64;
        let target = genus * dim;
        let short_needed = genus * short_roots;
        let long_needed = genus * long_roots;

        let mut en = Enumerator {
            aggs: &aggregates,
            short_needed,
            long_needed,
            nodes: 0,
            counts: vec![0; aggregates.len()],
        };
        let outcome = en.run(0, target, 0, 0);
        let nodes = en.nodes;
        let counts = en.counts.clone();

        let mut certificate = Vec::new();
        certificate.push(format!(
            "sum_i k_i (s_i + t_i) >= g |Phi| forces M = sum_i k_i <= g l = {}",
            genus * self.rank() as u64
        ));
        let verdict = match outcome {
            Some(true) => {
                certificate.push(format!("witness k = {counts:?}"));
                Feasibility::Feasible
            }
            Some(false) => {
                let ratio = |need: u64, f: fn(&TypeAggregate) -> u64| {
                    need > 0
                        && aggregates.iter().all(|a| {
                            Rational64::new(f(a) as i64, a.parameters as i64)
                                < Rational64::new(need as i64, target as i64)
                        })
                };
                if ratio(short_needed, |a| a.short) {
                    certificate.push(format!(
                        "s_i / p_i < |Phi_short| / dim = {}/{} for every type, so sum k s < g |Phi_short| for every genus",
                        short_roots, dim
                    ));
                } else if ratio(long_needed, |a| a.long) {
                    certificate.push(format!(
                        "t_i / p_i < |Phi_long| / dim = {}/{} for every type, so sum k t < g |Phi_long| for every genus",
                        long_roots, dim
                    ));
                } else {
                    certificate.push(format!(
                        "exhaustive enumeration of k_i <= {target}/p_i finds no solution"
                    ));
                }
                Feasibility::Infeasible
            }
            None => {
                certificate.push(format!("enumeration stopped after {NODE_CAP} nodes"));
                Feasibility::Undecided
            }
        };
        ObstructionReport {
            label: self.label().to_string(),
            genus,
            dim,
            short_roots,
            long_roots,
            aggregates,
            target,
            short_needed,
            long_needed,
            max_total_points: genus * self.rank() as u64,
            witness: (verdict == Feasibility::Feasible).then_some(counts),
            verdict,
            nodes,
            certificate,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::CartanType;

    #[test]
    fn g2_aggregates() {
        let g2 = RootSystem::new(CartanType::G2, 2).unwrap();
        let a = g2.type_aggregates();
        assert_eq!((a[0].short, a[0].long, a[0].parameters), (4, 6, 11));
        assert_eq!((a[1].short, a[1].long, a[1].parameters), (2, 4, 7));
        let r = g2.obstruction_analysis(2);
        assert!(r.is_infeasible());
        assert!(r.certificate.iter().any(|c| c.contains("every genus")));
    }

    #[test]
    fn g2_against_plain_enumeration() {
        let g2 = RootSystem::new(CartanType::G2, 2).unwrap();
        for g in 1..=6u64 {
            let mut any = false;
            for k1 in 0..=14 * g / 11 {
                for k2 in 0..=14 * g / 7 {
                    if 11 * k1 + 7 * k2 == 14 * g && 4 * k1 + 2 * k2 >= 6 * g && 6 * k1 + 4 * k2 >= 6 * g {
                        any = true;
                    }
                }
            }
            assert!(!any);
            assert!(g2.obstruction_analysis(g).is_infeasible());
        }
    }

    #[test]
    fn simply_laced_has_no_short_roots() {
        let a3 = RootSystem::new(CartanType::A, 3).unwrap();
        let r = a3.obstruction_analysis(2);
        assert_eq!(r.short_roots, 0);
        assert!(r.aggregates.iter().all(|a| a.short == 0));
        assert_eq!(r.verdict, Feasibility::Feasible);
    }

    #[test]
    fn classical_presets_pass_the_screen() {
        for (t, l) in [(CartanType::C, 3), (CartanType::D, 4), (CartanType::B, 3)] {
            let rs = RootSystem::new(t, l).unwrap();
            let r = rs.obstruction_analysis(2);
            assert_ne!(r.verdict, Feasibility::Undecided);
            if t != CartanType::B {
                assert_eq!(r.verdict, Feasibility::Feasible);
            }
        }
    }
}
