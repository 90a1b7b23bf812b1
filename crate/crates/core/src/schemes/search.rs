//! Backtracking search for schemes that pass [`RootSystem::verify`].

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rootsys::{Coweight, RootSystem};
use crate::weyl::WeylElement;

use super::obstruction::ObstructionReport;
use super::{DegreeMode, ModificationScheme, SchemeEntry, SchemeReport};

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum TwistPool {
    /// Minimal coset representatives of every allowed fundamental coweight.
    #[default]
    Cosets,
    /// The subgroup generated by the given elements.
    Generated(Vec<WeylElement>),
    /// Exactly these elements.
    Explicit(Vec<WeylElement>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Allowed 0-based coweight indices; `None` allows all.
    pub coweights: Option<Vec<usize>>,
    pub pool: TwistPool,
    pub mode: DegreeMode,
    pub node_budget: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            coweights: None,
            pool: TwistPool::Cosets,
            mode: DegreeMode::AtLeast,
            node_budget: 5_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// `g·dim` is not a nonnegative combination of the available parameter counts.
    ParameterCount { target: u64, parameters: Vec<u64> },
    /// The aggregate screen is infeasible.
    Aggregate(ObstructionReport),
    /// Every candidate in the pool was tried.
    Exhausted { nodes: u64, variables: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found {
        scheme: ModificationScheme,
        report: Box<SchemeReport>,
        nodes: u64,
    },
    Infeasible(Certificate),
}

struct Variable {
    coweight: usize,
    twist: WeylElement,
    params: u64,
    /// `(root id, multiplicity)` for roots with positive multiplicity.
    contrib: Vec<(usize, i64)>,
}

struct Search<'a> {
    rs: &'a RootSystem,
    vars: Vec<Variable>,
    genus: i64,
    mode: DegreeMode,
    budget: u64,
    nodes: u64,
    /// `reach[pos][r]`: `r` is a combination of the parameters of `vars[pos..]`.
    reach: Vec<Vec<bool>>,
    /// Best ratio `(mult, params)` per root over `vars[pos..]`.
    best: Vec<Vec<Option<(i64, i64)>>>,
    min_params: Vec<u64>,
    max_points: u64,
    degrees: Vec<i64>,
    counts: Vec<u64>,
    points: u64,
}

fn coin_reachable(params: &[u64], target: u64) -> Vec<bool> {
    let mut reach = vec![false; target as usize + 1];
    reach[0] = true;
    for &p in params {
        for r in p as usize..=target as usize {
            if reach[r - p as usize] {
                reach[r] = true;
            }
        }
    }
    reach
}

impl Search<'_> {
    fn scheme(&self) -> ModificationScheme {
        let entries = self
            .vars
            .iter()
            .zip(&self.counts)
            .filter(|(_, &k)| k > 0)
            .map(|(v, &k)| SchemeEntry {
                twist: v.twist.clone(),
                coweight: v.coweight,
                points: k,
            })
            .collect();
        ModificationScheme::new(self.genus as u64, entries)
    }

    fn degrees_ok(&self) -> bool {
        self.degrees.iter().all(|&d| match self.mode {
            DegreeMode::AtLeast => d >= self.genus,
            DegreeMode::Exact => d == self.genus,
        })
    }

    fn dfs(&mut self, pos: usize, remaining: u64) -> Result<Option<SchemeReport>> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::SearchBudgetExceeded(self.budget));
        }
        if remaining == 0 {
            if !self.degrees_ok() {
                return Ok(None);
            }
            let report = self.rs.verify(&self.scheme(), self.mode);
            return Ok(report.passed().then_some(report));
        }
        if pos == self.vars.len() || !self.reach[pos][remaining as usize] {
            return Ok(None);
        }
        if self.points + remaining / self.min_params[pos] < self.max_points {
            return Ok(None);
        }
        for (id, &d) in self.degrees.iter().enumerate() {
            let deficit = self.genus - d;
            if deficit <= 0 {
                continue;
            }
            match self.best[pos][id] {
                Some((c, p)) if c * remaining as i64 >= deficit * p => {}
                _ => return Ok(None),
            }
        }

        let params = self.vars[pos].params;
        let contrib = self.vars[pos].contrib.clone();
        let max_k = (remaining / params).min(self.max_points - self.points);
        let mut k = 0;
        loop {
            if k > 0 {
                self.counts[pos] = k;
            }
            if let Some(found) = self.dfs(pos + 1, remaining - k * params)? {
                return Ok(Some(found));
            }
            if k == max_k {
                break;
            }
            k += 1;
            self.points += 1;
            let mut overflow = false;
            for &(id, m) in &contrib {
                self.degrees[id] += m;
                overflow |= self.mode == DegreeMode::Exact && self.degrees[id] > self.genus;
            }
            if overflow {
                break;
            }
        }
        for &(id, m) in &contrib {
            self.degrees[id] -= m * k as i64;
        }
        self.points -= k;
        self.counts[pos] = 0;
        Ok(None)
    }
}

/// Searches for a scheme of genus `genus` passing the parameter, degree and
/// toral conditions. Variables are explored in (coweight index, twist length,
/// reduced word) order with counts ascending, and the first pass is returned.
pub fn search(rs: &RootSystem, genus: u64, options: &SearchOptions) -> Result<SearchOutcome> {
    let l = rs.rank();
    let mut allowed: Vec<usize> = options.coweights.clone().unwrap_or_else(|| (0..l).collect());
    allowed.sort_unstable();
    allowed.dedup();
    if let Some(&bad) = allowed.iter().find(|&&i| i >= l) {
        return Err(Error::IndexOutOfRange { index: bad + 1, max: l });
    }
    let pool: Option<Vec<WeylElement>> = match &options.pool {
        TwistPool::Cosets => None,
        TwistPool::Generated(gens) => Some(rs.generated_subgroup(gens)),
        TwistPool::Explicit(list) => Some(list.clone()),
    };

    let mut vars = Vec::new();
    for &i in &allowed {
        let lam = Coweight::fundamental(l, i);
        let mut twists: Vec<WeylElement> = match &pool {
            None => rs.minimal_coset_reps(&lam)?,
            Some(p) => p.iter().map(|w| rs.canonical(w)).collect(),
        };
        twists.sort_by(|a, b| a.word().len().cmp(&b.word().len()).then_with(|| a.word().cmp(b.word())));
        let mut seen = HashSet::new();
        for twist in twists {
            let image = rs.act_coweight(&twist, &lam)?;
            if !seen.insert(image) {
                continue;
            }
            let contrib: Vec<(usize, i64)> = rs
                .all_roots()
                .filter_map(|id| {
                    let back = rs.act_root(&twist.inverse(), id);
                    let m = rs.root(back).coeffs[i];
                    (m > 0).then_some((id, m))
                })
                .collect();
            vars.push(Variable {
                coweight: i,
                twist,
                params: rs.simple_parameter_count(i),
                contrib,
            });
        }
    }

    let target = genus * rs.dim() as u64;
    let all_params: Vec<u64> = vars.iter().map(|v| v.params).collect();
    if !coin_reachable(&all_params, target)[target as usize] {
        let mut parameters = all_params.clone();
        parameters.sort_unstable();
        parameters.dedup();
        return Ok(SearchOutcome::Infeasible(Certificate::ParameterCount {
            target,
            parameters,
        }));
    }
    let screen = rs.obstruction_analysis(genus);
    if screen.is_infeasible() {
        return Ok(SearchOutcome::Infeasible(Certificate::Aggregate(screen)));
    }

    let n = vars.len();
    let nroots = rs.roots().len();
    let mut reach = vec![Vec::new(); n + 1];
    let mut best = vec![vec![None; nroots]; n + 1];
    let mut min_params = vec![u64::MAX; n + 1];
    reach[n] = coin_reachable(&[], target);
    for pos in (0..n).rev() {
        reach[pos] = coin_reachable(&all_params[pos..], target);
        min_params[pos] = min_params[pos + 1].min(vars[pos].params);
        best[pos] = best[pos + 1].clone();
        let p = vars[pos].params as i64;
        for &(id, m) in &vars[pos].contrib {
            let better = match best[pos][id] {
                None => true,
                Some((c, q)) => m * q > c * p,
            };
            if better {
                best[pos][id] = Some((m, p));
            }
        }
    }

    let variables = vars.len();
    let mut s = Search {
        rs,
        vars,
        genus: genus as i64,
        mode: options.mode,
        budget: options.node_budget,
        nodes: 0,
        reach,
        best,
        min_params,
        max_points: genus * l as u64,
        degrees: vec![0; nroots],
        counts: vec![0; variables],
        points: 0,
    };
    match s.dfs(0, target)? {
        Some(report) => Ok(SearchOutcome::Found {
            scheme: s.scheme(),
            report: Box::new(report),
            nodes: s.nodes,
        }),
        None => Ok(SearchOutcome::Infeasible(Certificate::Exhausted {
            nodes: s.nodes,
            variables,
        })),
    }
}
