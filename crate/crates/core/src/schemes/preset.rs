//! The explicit schemes for A3, C_l and D_l.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::rootsys::{CartanType, RootSystem};
use crate::weyl::WeylElement;

use super::{ModificationScheme, SchemeEntry};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    A3,
    Cl,
    Dl,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A3" => Ok(Family::A3),
            "C" | "CL" => Ok(Family::Cl),
            "D" | "DL" => Ok(Family::Dl),
            _ => Err(Error::UnsupportedType(s.to_string())),
        }
    }
}

/// Note attached to the A3 scheme.
pub const A3_IDENTITY_NOTE: &str =
    "identity twist inferred as the sixth class next to (1 3), (2 3), (1 4), (2 4), (1 4)(2 3)";

fn transposition(n: usize, a: usize, b: usize) -> Vec<i32> {
    let mut p: Vec<i32> = (1..=n as i32).collect();
    p.swap(a, b);
    p
}

/// The C_l rotation `e_i ↦ e_{i+1}`, `e_l ↦ −e_1`.
pub fn c_rotation(rs: &RootSystem) -> Result<WeylElement> {
    let l = rs.rank();
    let mut p: Vec<i32> = (2..=l as i32).collect();
    p.push(-1);
    rs.weyl_element(p)
}

/// Builds the paper-style scheme for a family.
pub fn preset(family: Family, rank: usize, genus: u64) -> Result<(RootSystem, ModificationScheme)> {
    if genus == 0 || genus % 2 == 1 {
        return Err(Error::OddGenus(genus));
    }
    let k = genus / 2;
    let bad_rank = |label: &str| Error::InvalidRank {
        label: label.to_string(),
        rank,
    };
    let (rs, twists, coweight, notes) = match family {
        Family::A3 => {
            if rank != 3 {
                return Err(bad_rank("A3"));
            }
            let rs = RootSystem::new(CartanType::A, 3)?;
            let twists = [
                "[1,2,3,4]",
                "[3,2,1,4]",
                "[1,3,2,4]",
                "[4,2,3,1]",
                "[1,4,3,2]",
                "[4,3,2,1]",
            ]
            .iter()
            .map(|s| rs.parse_weyl(s))
            .collect::<Result<Vec<_>>>()?;
            (rs, twists, 1, vec![A3_IDENTITY_NOTE.to_string()])
        }
        Family::Cl => {
            if rank < 2 {
                return Err(bad_rank("C"));
            }
            let rs = RootSystem::new(CartanType::C, rank)?;
            let nu = c_rotation(&rs)?;
            let mut twists = Vec::with_capacity(2 * rank);
            let mut cur = rs.identity();
            for _ in 0..2 * rank {
                twists.push(rs.canonical(&cur));
                cur = nu.compose(&cur);
            }
            (rs, twists, 0, Vec::new())
        }
        Family::Dl => {
            if rank < 3 {
                return Err(bad_rank("D"));
            }
            let rs = RootSystem::new(CartanType::D, rank)?;
            let n = rank;
            let second: Vec<i32> = if rank.is_multiple_of(2) {
                (1..=n as i32).map(|x| -x).collect()
            } else {
                (1..=n as i32).map(|x| if (x as usize) < n { -x } else { x }).collect()
            };
            let second = rs.weyl_element(second)?;
            let mut twists = Vec::with_capacity(2 * rank);
            for i in 0..n {
                twists.push(rs.weyl_element(transposition(n, 0, i))?);
            }
            for i in 0..n {
                let t = rs.weyl_element(transposition(n, 0, i))?;
                twists.push(rs.canonical(&t.compose(&second)));
            }
            (rs, twists, 0, Vec::new())
        }
    };
    let entries = twists
        .into_iter()
        .map(|twist| SchemeEntry {
            twist,
            coweight,
            points: k,
        })
        .collect();
    Ok((rs, ModificationScheme { genus, entries, notes }))
}
