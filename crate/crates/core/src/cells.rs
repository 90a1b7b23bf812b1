//! Cell dimensions of affine Grassmannian orbits and related bookkeeping.

use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rootsys::{Coweight, FundamentalGroupElement, RootSystem};
use crate::weyl::WeylElement;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub rep: WeylElement,
    pub dimension: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellDecomposition {
    pub base: Coweight,
    pub cells: Vec<Cell>,
    pub top_dimension: usize,
    /// Coefficient of `q^d` at index `d`.
    pub poincare: Vec<usize>,
    pub in_coroot_lattice: bool,
    /// Component of the affine Grassmannian containing the orbit.
    pub component_class: FundamentalGroupElement,
    /// `max_α ⟨λ∨, α⟩`, the jet order after which the orbit is homogeneous.
    pub jet_bound: i64,
}

impl CellDecomposition {
    pub fn poincare_string(&self) -> String {
        poincare_string(&self.poincare)
    }
}

pub fn poincare_string(coeffs: &[usize]) -> String {
    let mut terms = Vec::new();
    for (d, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let var = match d {
            0 => String::new(),
            1 => "q".to_string(),
            _ => format!("q^{d}"),
        };
        terms.push(match (c, var.is_empty()) {
            (_, true) => c.to_string(),
            (1, false) => var,
            (_, false) => format!("{c}{var}"),
        });
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

impl RootSystem {
    fn dominant_integral(&self, lambda: &Coweight) -> Result<()> {
        self.check_coweight(lambda)?;
        if !lambda.is_integral() {
            return Err(Error::NonIntegralCoweight(lambda.to_string()));
        }
        if !lambda.is_dominant() {
            return Err(Error::NonDominant(lambda.to_string()));
        }
        Ok(())
    }

    /// `dim Gr^{λ∨} = 2⟨λ∨, ρ⟩`, checked against the root sum and the
    /// inversion-set count.
    pub fn cell_dimension(&self, lambda: &Coweight) -> Result<usize> {
        self.dominant_integral(lambda)?;
        let via_rho = self.pairing_weight(lambda, &self.rho())? * 2;
        let via_roots = self.two_rho_pairing(lambda);
        let via_inversions = self.affine_length(&self.translation(lambda)?);
        assert_eq!(via_rho, via_roots, "2<λ,ρ> disagrees with the root sum");
        assert_eq!(
            via_rho,
            Rational64::from_integer(via_inversions as i64),
            "2<λ,ρ> disagrees with the inversion count"
        );
        Ok(via_inversions)
    }

    /// Cells `w·t(λ∨)` indexed by minimal coset representatives.
    pub fn decompose(&self, lambda: &Coweight) -> Result<CellDecomposition> {
        self.dominant_integral(lambda)?;
        let reps = self.minimal_coset_reps(lambda)?;
        let cells: Vec<Cell> = reps
            .into_par_iter()
            .map(|w| {
                // w·t(λ∨) = t(w·λ∨)·w
                let moved = self.act_coweight(&w, lambda).expect("rank checked");
                let wt = self.affine_element(&moved, &w).expect("integral");
                Cell {
                    dimension: self.affine_length(&wt),
                    rep: w,
                }
            })
            .collect();
        let top_dimension = cells.iter().map(|c| c.dimension).max().unwrap_or(0);
        let mut poincare = vec![0; top_dimension + 1];
        for c in &cells {
            poincare[c.dimension] += 1;
        }
        let jet_bound = self
            .positive_roots()
            .map(|id| self.pair_root(lambda, id))
            .max()
            .unwrap_or_else(Rational64::zero)
            .to_integer();
        Ok(CellDecomposition {
            base: lambda.clone(),
            cells,
            top_dimension,
            poincare,
            in_coroot_lattice: self.in_coroot_lattice(lambda),
            component_class: self.fundamental_group_class(lambda)?,
            jet_bound,
        })
    }

    /// `Σ k·[μ∨]` in the fundamental group, starting from the trivial class.
    pub fn modification_type_sum(&self, types: &[(Coweight, u64)]) -> Result<FundamentalGroupElement> {
        let mut acc = self.fundamental_group_identity();
        for (mu, k) in types {
            let c = self.fundamental_group_class(mu)?;
            acc = acc.add(&c.scale(*k as i64));
        }
        Ok(acc)
    }

    /// Dimension of the deformation space of the cocharacter `−Σ r_i λ_i∨`.
    pub fn deformation_dimension(&self, r: &[u64]) -> Result<u64> {
        if r.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                got: r.len(),
            });
        }
        if r.iter().all(|&x| x == 0) {
            return Err(Error::ZeroCocharacter);
        }
        let lam = Coweight::from_ints(&r.iter().map(|&x| x as i64).collect::<Vec<_>>());
        let roots = self.two_rho_pairing(&lam).to_u64().unwrap();
        Ok(roots + r.iter().sum::<u64>())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::CartanType;
    use proptest::prelude::*;

    fn rs(t: CartanType, l: usize) -> RootSystem {
        RootSystem::new(t, l).unwrap()
    }

    #[test]
    fn dimension_examples() {
        let a1 = rs(CartanType::A, 1);
        assert_eq!(a1.cell_dimension(&a1.simple_coroot(0)).unwrap(), 2);
        assert_eq!(a1.cell_dimension(&Coweight::zero(1)).unwrap(), 0);
        assert_eq!(a1.cell_dimension(&Coweight::fundamental(1, 0)).unwrap(), 1);
        assert!(matches!(
            a1.cell_dimension(&Coweight::from_ints(&[-2])),
            Err(Error::NonDominant(_))
        ));
    }

    #[test]
    fn rank_one_decomposition() {
        let a1 = rs(CartanType::A, 1);
        let d = a1.decompose(&a1.simple_coroot(0)).unwrap();
        let dims: Vec<usize> = d.cells.iter().map(|c| c.dimension).collect();
        assert_eq!(dims, vec![2, 1]);
        assert_eq!(d.poincare, vec![0, 1, 1]);
        assert_eq!(d.poincare_string(), "q^2 + q");
        assert!(d.in_coroot_lattice);
        assert_eq!(d.jet_bound, 2);

        let zero = a1.decompose(&Coweight::zero(1)).unwrap();
        assert_eq!(zero.cells.len(), 1);
        assert_eq!(zero.poincare, vec![1]);
    }

    #[test]
    fn a2_highest_coroot() {
        let a2 = rs(CartanType::A, 2);
        let theta = a2.coroot(a2.highest_roots()[0]);
        let d = a2.decompose(&theta).unwrap();
        assert_eq!(d.top_dimension, 4);
        assert_eq!(d.cells.len(), 6);
        assert_eq!(d.poincare.iter().sum::<usize>(), 6);
    }

    #[test]
    fn top_cell_is_unique_and_belongs_to_identity() {
        for sys in [rs(CartanType::A, 3), rs(CartanType::C, 3), rs(CartanType::G2, 2)] {
            for i in 0..sys.rank() {
                let lam = Coweight::fundamental(sys.rank(), i);
                let d = sys.decompose(&lam).unwrap();
                assert_eq!(d.top_dimension, sys.cell_dimension(&lam).unwrap());
                let top: Vec<&Cell> = d.cells.iter().filter(|c| c.dimension == d.top_dimension).collect();
                assert_eq!(top.len(), 1);
                assert!(top[0].rep.is_identity());
            }
        }
    }

    #[test]
    fn non_coroot_lattice_records_component() {
        let c3 = rs(CartanType::C, 3);
        let d = c3.decompose(&Coweight::fundamental(3, 2)).unwrap();
        assert!(!d.in_coroot_lattice);
        assert!(!d.component_class.is_identity());
        let d1 = c3.decompose(&Coweight::fundamental(3, 0)).unwrap();
        assert!(d1.in_coroot_lattice);
    }

    #[test]
    fn modification_types() {
        let a3 = rs(CartanType::A, 3);
        let lam2 = Coweight::fundamental(3, 1);
        for k in 1..4 {
            assert!(a3
                .modification_type_sum(&[(lam2.clone(), 6 * k)])
                .unwrap()
                .is_identity());
        }
        assert!(a3.modification_type_sum(&[(lam2.clone(), 1)]).unwrap().order() == 2);
        assert!(a3.modification_type_sum(&[]).unwrap().is_identity());
        let c3 = rs(CartanType::C, 3);
        assert!(c3
            .modification_type_sum(&[(Coweight::fundamental(3, 0), 1)])
            .unwrap()
            .is_identity());
        assert!(!c3
            .modification_type_sum(&[(Coweight::fundamental(3, 2), 1)])
            .unwrap()
            .is_identity());
    }

    #[test]
    fn deformation_dimensions() {
        let g2 = rs(CartanType::G2, 2);
        assert_eq!(g2.deformation_dimension(&[0, 1]).unwrap(), 7);
        assert_eq!(g2.deformation_dimension(&[1, 0]).unwrap(), 11);
        let c3 = rs(CartanType::C, 3);
        assert_eq!(c3.deformation_dimension(&[1, 0, 0]).unwrap(), 7);
        assert_eq!(c3.deformation_dimension(&[0, 0, 0]), Err(Error::ZeroCocharacter));
        for i in 0..3 {
            let mut r = [0u64; 3];
            r[i] = 1;
            let lam = Coweight::fundamental(3, i);
            assert_eq!(
                c3.deformation_dimension(&r).unwrap() as usize,
                c3.cell_dimension(&lam).unwrap() + 1
            );
        }
    }

    proptest! {
        #[test]
        fn dimension_is_additive(
            a in proptest::collection::vec(0i64..3, 3),
            b in proptest::collection::vec(0i64..3, 3),
        ) {
            let sys = rs(CartanType::B, 3);
            let x = Coweight::from_ints(&a);
            let y = Coweight::from_ints(&b);
            prop_assert_eq!(
                sys.cell_dimension(&x.add(&y)).unwrap(),
                sys.cell_dimension(&x).unwrap() + sys.cell_dimension(&y).unwrap()
            );
        }

        #[test]
        fn poincare_counts_cosets(a in proptest::collection::vec(0i64..3, 3)) {
            let sys = rs(CartanType::A, 3);
            let lam = Coweight::from_ints(&a);
            let d = sys.decompose(&lam).unwrap();
            prop_assert_eq!(d.poincare.iter().sum::<usize>(), sys.coweight_orbit(&lam).unwrap().len());
        }
    }
}
