use crate::action::RackAction;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::perm::Perm;
use crate::rack::FiniteRack;
use std::collections::HashMap;

/// Default cap on the number of elements enumerated by a closure.
pub const DEFAULT_CLOSURE_CAP: usize = 1_000_000;

/// A permutation group given by generators, with its elements enumerated
/// breadth-first from the identity (deterministic order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationGroup {
    pub degree: usize,
    pub generators: Vec<Perm>,
    pub elements: Vec<Perm>,
}

impl PermutationGroup {
    /// Enumerates the closure of the generators under product, up to `cap`
    /// elements. Inverses come for free in a finite closure.
    pub fn closure(degree: usize, generators: Vec<Perm>, cap: usize) -> Result<Self> {
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::Malformed(format!(
                    "generator degree {} does not match {degree}",
                    g.degree()
                )));
            }
        }
        let mut elements = vec![Perm::identity(degree)];
        let mut index: HashMap<Perm, usize> = HashMap::new();
        index.insert(elements[0].clone(), 0);
        let mut frontier = 0;
        while frontier < elements.len() {
            let current = elements[frontier].clone();
            frontier += 1;
            for g in &generators {
                let next = current.then(g);
                if !index.contains_key(&next) {
                    if elements.len() >= cap {
                        return Err(Error::Resource {
                            what: "permutation group closure".into(),
                            cap,
                            reached: elements.len() + 1,
                        });
                    }
                    index.insert(next.clone(), elements.len());
                    elements.push(next);
                }
            }
        }
        Ok(PermutationGroup {
            degree,
            generators,
            elements,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn position(&self, p: &Perm) -> Option<usize> {
        self.elements.iter().position(|q| q == p)
    }

    /// Elements fixing the point `x`, in enumeration order.
    pub fn stabilizer(&self, x: usize) -> Vec<usize> {
        self.elements
            .iter()
            .enumerate()
            .filter(|(_, p)| p.apply(x) == x)
            .map(|(i, _)| i)
            .collect()
    }

    /// Orbits of the group on the permuted points, sorted by least element.
    pub fn point_orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree];
        let mut orbits = Vec::new();
        for start in 0..self.degree {
            if seen[start] {
                continue;
            }
            let mut orbit = vec![start];
            seen[start] = true;
            let mut i = 0;
            while i < orbit.len() {
                let x = orbit[i];
                i += 1;
                for g in &self.generators {
                    let y = g.apply(x);
                    if !seen[y] {
                        seen[y] = true;
                        orbit.push(y);
                    }
                }
            }
            orbit.sort_unstable();
            orbits.push(orbit);
        }
        orbits
    }

    /// The abstract multiplication table of the enumerated closure.
    pub fn to_finite_group(&self) -> Result<FiniteGroup> {
        let index: HashMap<&Perm, usize> = self
            .elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        let n = self.elements.len();
        let mut cayley = vec![vec![0; n]; n];
        for (i, p) in self.elements.iter().enumerate() {
            for (j, q) in self.elements.iter().enumerate() {
                cayley[i][j] = *index
                    .get(&p.then(q))
                    .ok_or_else(|| Error::Inconsistency("closure not closed".into()))?;
            }
        }
        FiniteGroup::from_cayley(cayley)
    }
}

/// The operator image of a rack together with extra acted sets: the
/// permutation group on the disjoint union `R ⊔ X₁ ⊔ …` generated by one
/// permutation per rack element `r`, acting as `(− ◁ r)` on `R` and
/// `(− · r)` on each set.
///
/// Point layout: `R` occupies `0..|R|`, then each extra set in order.
pub fn operator_image(
    rack: &FiniteRack,
    extra_sets: &[&RackAction],
    cap: usize,
) -> Result<PermutationGroup> {
    let mut degree = rack.size;
    for a in extra_sets {
        if a.rack != *rack {
            return Err(Error::Incompatible(
                "operator image needs actions of the same rack".into(),
            ));
        }
        degree += a.set_size;
    }
    let mut generators = Vec::with_capacity(rack.size);
    for r in 0..rack.size {
        let mut images = Vec::with_capacity(degree);
        for a in 0..rack.size {
            images.push(rack.op(a, r));
        }
        let mut offset = rack.size;
        for set in extra_sets {
            for x in 0..set.set_size {
                images.push(offset + set.apply(x, r));
            }
            offset += set.set_size;
        }
        generators.push(Perm::from_images(images)?);
    }
    PermutationGroup::closure(degree, generators, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rack::conj_rack;

    #[test]
    fn trivial_rack_gives_trivial_group() {
        let g = operator_image(&FiniteRack::trivial(3), &[], DEFAULT_CLOSURE_CAP).unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn two_element_rack_gives_order_two() {
        let g = operator_image(
            &FiniteRack::two_element_cyclic(),
            &[],
            DEFAULT_CLOSURE_CAP,
        )
        .unwrap();
        assert_eq!(g.order(), 2);
    }

    #[test]
    fn dihedral_three_gives_s3() {
        let g = operator_image(&FiniteRack::dihedral(3), &[], DEFAULT_CLOSURE_CAP).unwrap();
        assert_eq!(g.order(), 6);
        let abstract_group = g.to_finite_group().unwrap();
        assert!(!abstract_group.is_abelian());
    }

    #[test]
    fn generators_satisfy_the_defining_relator() {
        for rack in [
            FiniteRack::dihedral(3),
            FiniteRack::two_element_cyclic(),
            conj_rack(&FiniteGroup::symmetric(3)),
        ] {
            let g = operator_image(&rack, &[], DEFAULT_CLOSURE_CAP).unwrap();
            for r in 0..rack.size {
                for rp in 0..rack.size {
                    let lhs = &g.generators[rack.op(r, rp)];
                    let rhs = g.generators[r].conjugate_by(&g.generators[rp]);
                    assert_eq!(*lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn closure_cap_is_enforced() {
        let d = FiniteRack::dihedral(5);
        assert!(matches!(
            operator_image(&d, &[], 3),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn stabilizer_sizes_multiply_to_order() {
        let g = operator_image(&FiniteRack::dihedral(3), &[], DEFAULT_CLOSURE_CAP).unwrap();
        for x in 0..3 {
            let stab = g.stabilizer(x);
            let orbit_len = g.point_orbits().iter().find(|o| o.contains(&x)).unwrap().len();
            assert_eq!(stab.len() * orbit_len, g.order());
        }
    }
}
