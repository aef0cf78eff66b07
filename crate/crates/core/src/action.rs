use crate::error::{Error, Result};
use crate::rack::FiniteRack;
use crate::report::ValidationReport;
use serde::{Deserialize, Serialize};

/// A right action of a rack on a finite set: `action[x][r] = x · r`, each
/// `· r` a bijection, with `(x·r)·r' = (x·r')·(r ◁ r')`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RackAction {
    pub rack: FiniteRack,
    pub set_size: usize,
    pub action: Vec<Vec<usize>>,
}

impl RackAction {
    pub fn apply(&self, x: usize, r: usize) -> usize {
        self.action[x][r]
    }

    /// Inverse translation: the unique `y` with `y · r = x`.
    pub fn apply_inv(&self, x: usize, r: usize) -> usize {
        (0..self.set_size)
            .find(|&y| self.action[y][r] == x)
            .expect("translation of a valid action is a bijection")
    }

    /// The rack acting on its own carrier by `x · r = x ◁ r`.
    pub fn self_action(rack: &FiniteRack) -> RackAction {
        RackAction {
            set_size: rack.size,
            action: rack.table.clone(),
            rack: rack.clone(),
        }
    }

    /// The action fixing every point of a set of size `m`.
    pub fn trivial(rack: &FiniteRack, m: usize) -> RackAction {
        RackAction {
            rack: rack.clone(),
            set_size: m,
            action: (0..m).map(|x| vec![x; rack.size]).collect(),
        }
    }

    pub fn shape_check(&self) -> Result<()> {
        if self.action.len() != self.set_size {
            return Err(Error::Malformed(format!(
                "action has {} rows, set size is {}",
                self.action.len(),
                self.set_size
            )));
        }
        for row in &self.action {
            if row.len() != self.rack.size {
                return Err(Error::Malformed("ragged action table".into()));
            }
            for &v in row {
                if v >= self.set_size {
                    return Err(Error::Malformed(format!(
                        "action value {v} out of range 0..{}",
                        self.set_size
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Checks per-element bijectivity and the action compatibility law on all
/// triples `(x, r, r')`.
pub fn validate_action(a: &RackAction) -> Result<ValidationReport> {
    a.shape_check()?;
    let mut report = ValidationReport::new();
    for r in 0..a.rack.size {
        let mut seen = vec![false; a.set_size];
        for x in 0..a.set_size {
            seen[a.action[x][r]] = true;
        }
        if seen.contains(&false) {
            report.record("translation_bijective", &[r]);
        }
    }
    for x in 0..a.set_size {
        for r in 0..a.rack.size {
            for rp in 0..a.rack.size {
                let lhs = a.apply(a.apply(x, r), rp);
                let rhs = a.apply(a.apply(x, rp), a.rack.op(r, rp));
                if lhs != rhs {
                    report.record("action_compatibility", &[x, r, rp]);
                }
            }
        }
    }
    Ok(report)
}

/// True iff the action is by automorphisms of `source`, a rack structure on
/// the acted set: `(x ◁ y) · r = (x · r) ◁ (y · r)`.
pub fn acts_by_automorphisms(a: &RackAction, source: &FiniteRack) -> Result<bool> {
    a.shape_check()?;
    if source.size != a.set_size {
        return Err(Error::Incompatible(format!(
            "source rack has size {}, acted set has size {}",
            source.size, a.set_size
        )));
    }
    for x in 0..a.set_size {
        for y in 0..a.set_size {
            for r in 0..a.rack.size {
                if a.apply(source.op(x, y), r) != source.op(a.apply(x, r), a.apply(y, r)) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// The hemi-semi-direct product rack on `X × R`:
/// `(x, r) ◁ (x', r') = (x · r', r ◁ r')`.
///
/// Pairs are indexed as `x * |R| + r`.
pub fn hemi_semi_direct(a: &RackAction) -> Result<FiniteRack> {
    let report = validate_action(a)?;
    if !report.valid {
        let v = report.first().unwrap();
        return Err(Error::Precondition {
            condition: format!("action axiom `{}`", v.law),
            witness: v.witness.clone(),
        });
    }
    let nr = a.rack.size;
    let total = a.set_size * nr;
    let idx = |x: usize, r: usize| x * nr + r;
    let mut table = vec![vec![0; total]; total];
    for x in 0..a.set_size {
        for r in 0..nr {
            for xp in 0..a.set_size {
                for rp in 0..nr {
                    table[idx(x, r)][idx(xp, rp)] = idx(a.apply(x, rp), a.rack.op(r, rp));
                }
            }
        }
    }
    FiniteRack::new(table, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rack::{are_isomorphic, FiniteRack};

    #[test]
    fn self_action_is_valid() {
        for rack in [
            FiniteRack::trivial(3),
            FiniteRack::two_element_cyclic(),
            FiniteRack::dihedral(3),
        ] {
            let a = RackAction::self_action(&rack);
            assert!(validate_action(&a).unwrap().valid);
        }
    }

    #[test]
    fn trivial_action_is_valid() {
        let a = RackAction::trivial(&FiniteRack::dihedral(3), 4);
        assert!(validate_action(&a).unwrap().valid);
    }

    #[test]
    fn mutated_action_reports_the_broken_triple() {
        let mut a = RackAction::self_action(&FiniteRack::dihedral(3));
        a.action[0][1] = 0; // was 2
        let report = validate_action(&a).unwrap();
        assert!(!report.valid);
        assert!(report
            .violations
            .iter()
            .any(|v| v.law == "action_compatibility" || v.law == "translation_bijective"));
    }

    #[test]
    fn self_action_acts_by_automorphisms() {
        let rack = FiniteRack::dihedral(3);
        let a = RackAction::self_action(&rack);
        assert!(acts_by_automorphisms(&a, &rack).unwrap());
    }

    #[test]
    fn trivial_action_acts_by_automorphisms() {
        let rack = FiniteRack::dihedral(3);
        let a = RackAction::trivial(&rack, 3);
        assert!(acts_by_automorphisms(&a, &FiniteRack::trivial(3)).unwrap());
        assert!(acts_by_automorphisms(&a, &rack).unwrap());
    }

    #[test]
    fn automorphism_law_detects_mutated_source() {
        let rack = FiniteRack::dihedral(3);
        let a = RackAction::self_action(&rack);
        let mut bad = rack.clone();
        bad.table[0][1] = 0; // no longer the dihedral table
        assert!(!acts_by_automorphisms(&a, &bad).unwrap());
    }

    #[test]
    fn hemi_on_a_point_is_isomorphic_to_the_rack() {
        let rack = FiniteRack::dihedral(3);
        let a = RackAction::trivial(&rack, 1);
        let h = hemi_semi_direct(&a).unwrap();
        assert!(are_isomorphic(&h, &rack));
    }

    #[test]
    fn hemi_dihedral_self_action_example() {
        let rack = FiniteRack::dihedral(3);
        let a = RackAction::self_action(&rack);
        let h = hemi_semi_direct(&a).unwrap();
        // (0,1) ◁ (0,2) = (0·2, 1◁2) = (1, 0)
        let idx = |x: usize, r: usize| x * 3 + r;
        assert_eq!(h.op(idx(0, 1), idx(0, 2)), idx(1, 0));
        assert!(h.validate().unwrap().valid);
    }

    #[test]
    fn hemi_with_trivial_action_keeps_second_factor() {
        let rack = FiniteRack::dihedral(3);
        let a = RackAction::trivial(&rack, 2);
        let h = hemi_semi_direct(&a).unwrap();
        let idx = |x: usize, r: usize| x * 3 + r;
        for x in 0..2 {
            for r in 0..3 {
                for xp in 0..2 {
                    for rp in 0..3 {
                        assert_eq!(h.op(idx(x, r), idx(xp, rp)), idx(x, rack.op(r, rp)));
                    }
                }
            }
        }
    }
}
