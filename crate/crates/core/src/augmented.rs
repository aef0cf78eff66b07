use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::rack::FiniteRack;
use crate::report::ValidationReport;
use serde::{Deserialize, Serialize};

/// An augmented rack `p : X → G`: a right `G`-set `X` with
/// `p(x · g) = g⁻¹ p(x) g`. `group_action[x][g] = x · g`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AugmentedRack {
    pub group: FiniteGroup,
    pub set_size: usize,
    pub group_action: Vec<Vec<usize>>,
    pub p: Vec<usize>,
}

impl AugmentedRack {
    pub fn act(&self, x: usize, g: usize) -> usize {
        self.group_action[x][g]
    }

    /// `X = G` acting on itself by conjugation, `p = id`.
    pub fn conjugation(group: &FiniteGroup) -> AugmentedRack {
        let n = group.size;
        AugmentedRack {
            set_size: n,
            group_action: (0..n).map(|x| (0..n).map(|g| group.conj(x, g)).collect()).collect(),
            p: (0..n).collect(),
            group: group.clone(),
        }
    }

    pub fn shape_check(&self) -> Result<()> {
        if self.group_action.len() != self.set_size || self.p.len() != self.set_size {
            return Err(Error::Malformed(
                "augmented rack tables do not match the set size".into(),
            ));
        }
        for row in &self.group_action {
            if row.len() != self.group.size {
                return Err(Error::Malformed("ragged group action table".into()));
            }
            for &v in row {
                if v >= self.set_size {
                    return Err(Error::Malformed(format!(
                        "group action value {v} out of range 0..{}",
                        self.set_size
                    )));
                }
            }
        }
        for &g in &self.p {
            if g >= self.group.size {
                return Err(Error::Malformed(format!(
                    "augmentation value {g} out of range 0..{}",
                    self.group.size
                )));
            }
        }
        Ok(())
    }
}

/// Checks the right-action laws (identity, compatibility, bijectivity) and
/// the augmentation identity on all pairs.
pub fn validate_augmented(ar: &AugmentedRack) -> Result<ValidationReport> {
    ar.shape_check()?;
    let mut report = ValidationReport::new();
    let e = ar.group.identity;
    for x in 0..ar.set_size {
        if ar.act(x, e) != x {
            report.record("action_identity", &[x]);
        }
    }
    for g in 0..ar.group.size {
        let mut seen = vec![false; ar.set_size];
        for x in 0..ar.set_size {
            seen[ar.act(x, g)] = true;
        }
        if seen.contains(&false) {
            report.record("action_bijective", &[g]);
        }
    }
    for x in 0..ar.set_size {
        for g in 0..ar.group.size {
            for h in 0..ar.group.size {
                if ar.act(ar.act(x, g), h) != ar.act(x, ar.group.mul(g, h)) {
                    report.record("action_compatibility", &[x, g, h]);
                }
            }
        }
    }
    for x in 0..ar.set_size {
        for g in 0..ar.group.size {
            if ar.p[ar.act(x, g)] != ar.group.conj(ar.p[x], g) {
                report.record("augmentation_identity", &[x, g]);
            }
        }
    }
    Ok(report)
}

/// The rack structure an augmentation induces on its set:
/// `x ◁ y = x · p(y)`. The map `p` then lands in the conjugation rack of
/// `G` as a rack morphism.
pub fn induced_rack_of_augmented(ar: &AugmentedRack) -> Result<FiniteRack> {
    let report = validate_augmented(ar)?;
    if !report.valid {
        let v = report.first().unwrap();
        return Err(Error::Precondition {
            condition: format!("augmented rack axiom `{}`", v.law),
            witness: v.witness.clone(),
        });
    }
    let table = (0..ar.set_size)
        .map(|x| (0..ar.set_size).map(|y| ar.act(x, ar.p[y])).collect())
        .collect();
    FiniteRack::new(table, None)
}

/// The tensor product of two augmented racks over the same group: the
/// product set with the diagonal action and `p(x, y) = p₁(x) p₂(y)`.
/// Pairs are indexed as `x * |Y| + y`.
pub fn tensor_augmented(a1: &AugmentedRack, a2: &AugmentedRack) -> Result<AugmentedRack> {
    if a1.group != a2.group {
        return Err(Error::Incompatible(
            "tensor product needs augmented racks over the same group".into(),
        ));
    }
    for (name, a) in [("left", a1), ("right", a2)] {
        let report = validate_augmented(a)?;
        if !report.valid {
            return Err(Error::Precondition {
                condition: format!("{name} factor is not an augmented rack"),
                witness: report.first().unwrap().witness.clone(),
            });
        }
    }
    let (m1, m2) = (a1.set_size, a2.set_size);
    let idx = |x: usize, y: usize| x * m2 + y;
    let mut group_action = vec![vec![0; a1.group.size]; m1 * m2];
    let mut p = vec![0; m1 * m2];
    for x in 0..m1 {
        for y in 0..m2 {
            for g in 0..a1.group.size {
                group_action[idx(x, y)][g] = idx(a1.act(x, g), a2.act(y, g));
            }
            p[idx(x, y)] = a1.group.mul(a1.p[x], a2.p[y]);
        }
    }
    Ok(AugmentedRack {
        group: a1.group.clone(),
        set_size: m1 * m2,
        group_action,
        p,
    })
}

/// The braiding `c : X ⊗ Y → Y ⊗ X`, `c(x, y) = (y, x · p₂(y))`, as the
/// image list on pair indices (`X ⊗ Y` indexed `x * |Y| + y`, the target
/// `y * |X| + x'`).
pub fn braiding(a1: &AugmentedRack, a2: &AugmentedRack) -> Result<Vec<usize>> {
    if a1.group != a2.group {
        return Err(Error::Incompatible(
            "braiding needs augmented racks over the same group".into(),
        ));
    }
    let (m1, m2) = (a1.set_size, a2.set_size);
    let mut map = vec![0; m1 * m2];
    for x in 0..m1 {
        for y in 0..m2 {
            map[x * m2 + y] = y * m1 + a1.act(x, a2.p[y]);
        }
    }
    Ok(map)
}
