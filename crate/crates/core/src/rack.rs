use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::perm::Perm;
use crate::report::ValidationReport;
use serde::{Deserialize, Serialize};

/// A finite right rack as an operation table, `table[a][b] = a ◁ b`.
///
/// The two rack axioms: for each `b` the column map `a ↦ a ◁ b` is a
/// bijection, and `(a ◁ b) ◁ c = (a ◁ c) ◁ (b ◁ c)`. A pointed rack
/// additionally carries a basepoint `e` with `e ◁ x = e` and `x ◁ e = x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteRack {
    pub size: usize,
    pub table: Vec<Vec<usize>>,
    pub basepoint: Option<usize>,
}

impl FiniteRack {
    /// Builds and fully validates a rack; use [`validate_rack`] to get the
    /// detailed report instead of the first failure.
    pub fn new(table: Vec<Vec<usize>>, basepoint: Option<usize>) -> Result<Self> {
        let report = validate_rack(&table, basepoint)?;
        if !report.valid {
            let v = report.first().unwrap();
            return Err(Error::Precondition {
                condition: format!("rack axiom `{}`", v.law),
                witness: v.witness.clone(),
            });
        }
        Ok(FiniteRack {
            size: table.len(),
            table,
            basepoint,
        })
    }

    /// Builds without validating. For callers that construct tables already
    /// known to satisfy the axioms, or that want to validate separately.
    pub fn from_table_unchecked(table: Vec<Vec<usize>>, basepoint: Option<usize>) -> Self {
        FiniteRack {
            size: table.len(),
            table,
            basepoint,
        }
    }

    pub fn op(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    /// The inverse operation: the unique `z` with `z ◁ b = a`.
    pub fn op_inv(&self, a: usize, b: usize) -> usize {
        (0..self.size)
            .find(|&z| self.table[z][b] == a)
            .expect("column of a valid rack is a bijection")
    }

    pub fn is_quandle(&self) -> bool {
        (0..self.size).all(|a| self.table[a][a] == a)
    }

    pub fn validate(&self) -> Result<ValidationReport> {
        validate_rack(&self.table, self.basepoint)
    }

    /// The trivial rack `a ◁ b = a` on `n` elements.
    pub fn trivial(n: usize) -> Self {
        let table = (0..n).map(|a| vec![a; n]).collect();
        FiniteRack {
            size: n,
            table,
            basepoint: None,
        }
    }

    /// The dihedral quandle on `Z/n`, `a ◁ b = 2b - a mod n`.
    pub fn dihedral(n: usize) -> Self {
        let table = (0..n)
            .map(|a| (0..n).map(|b| (2 * b + n - a % n) % n).collect())
            .collect();
        FiniteRack {
            size: n,
            table,
            basepoint: None,
        }
    }

    /// The two-element rack with `a ◁ b = 1 - a`; its associated group is
    /// infinite cyclic even though the canonical map identifies the two
    /// elements.
    pub fn two_element_cyclic() -> Self {
        FiniteRack {
            size: 2,
            table: vec![vec![1, 1], vec![0, 0]],
            basepoint: None,
        }
    }

    /// Relabels elements by `sigma`: the rack with table
    /// `t'[σa][σb] = σ(t[a][b])`.
    pub fn relabel(&self, sigma: &Perm) -> FiniteRack {
        let n = self.size;
        let mut table = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                table[sigma.apply(a)][sigma.apply(b)] = sigma.apply(self.table[a][b]);
            }
        }
        FiniteRack {
            size: n,
            table,
            basepoint: self.basepoint.map(|e| sigma.apply(e)),
        }
    }
}

/// Checks both rack axioms (and the pointed axioms when a basepoint is
/// given) on a raw table, reporting every failing instance.
///
/// Out-of-range entries or a ragged table are malformed input, not an axiom
/// failure, and come back as `Err`.
pub fn validate_rack(table: &[Vec<usize>], basepoint: Option<usize>) -> Result<ValidationReport> {
    let n = table.len();
    for row in table {
        if row.len() != n {
            return Err(Error::Malformed("ragged rack table".into()));
        }
        for &e in row {
            if e >= n {
                return Err(Error::Malformed(format!(
                    "rack table entry {e} out of range 0..{n}"
                )));
            }
        }
    }
    if let Some(e) = basepoint {
        if e >= n {
            return Err(Error::Malformed(format!(
                "basepoint {e} out of range 0..{n}"
            )));
        }
    }
    let mut report = ValidationReport::new();
    for b in 0..n {
        let mut seen = vec![false; n];
        for a in 0..n {
            seen[table[a][b]] = true;
        }
        if seen.iter().any(|&s| !s) {
            report.record("column_bijective", &[b]);
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if table[table[a][b]][c] != table[table[a][c]][table[b][c]] {
                    report.record("self_distributivity", &[a, b, c]);
                }
            }
        }
    }
    if let Some(e) = basepoint {
        for x in 0..n {
            if table[e][x] != e {
                report.record("pointed_unit_absorbs", &[x]);
            }
            if table[x][e] != x {
                report.record("pointed_unit_fixes", &[x]);
            }
        }
    }
    Ok(report)
}

/// Checks the left-rack axioms on `left_table[a][b] = a ▷ b`: each row map
/// `b ↦ a ▷ b` bijective and `a ▷ (b ▷ c) = (a ▷ b) ▷ (a ▷ c)`.
pub fn validate_left_rack(left_table: &[Vec<usize>]) -> Result<ValidationReport> {
    let n = left_table.len();
    for row in left_table {
        if row.len() != n {
            return Err(Error::Malformed("ragged left-rack table".into()));
        }
        for &e in row {
            if e >= n {
                return Err(Error::Malformed(format!(
                    "left-rack table entry {e} out of range 0..{n}"
                )));
            }
        }
    }
    let mut report = ValidationReport::new();
    for a in 0..n {
        let mut seen = vec![false; n];
        for b in 0..n {
            seen[left_table[a][b]] = true;
        }
        if seen.iter().any(|&s| !s) {
            report.record("row_bijective", &[a]);
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if left_table[a][left_table[b][c]]
                    != left_table[left_table[a][b]][left_table[a][c]]
                {
                    report.record("left_self_distributivity", &[a, b, c]);
                }
            }
        }
    }
    Ok(report)
}

/// Converts a left rack to the corresponding right rack by inverting each
/// translation: `z ◁ x` is the unique `y` with `x ▷ y = z`.
pub fn left_to_right(left_table: &[Vec<usize>]) -> Result<FiniteRack> {
    let report = validate_left_rack(left_table)?;
    if !report.valid {
        let v = report.first().unwrap();
        return Err(Error::Precondition {
            condition: format!("left-rack axiom `{}`", v.law),
            witness: v.witness.clone(),
        });
    }
    let n = left_table.len();
    let mut table = vec![vec![0; n]; n];
    for x in 0..n {
        for y in 0..n {
            // x ▷ y = z  becomes  z ◁ x = y
            table[left_table[x][y]][x] = y;
        }
    }
    FiniteRack::new(table, None)
}

/// Inverse of [`left_to_right`]: recovers `x ▷ y` as the unique `z` with
/// `z ◁ x = y`.
pub fn right_to_left(rack: &FiniteRack) -> Vec<Vec<usize>> {
    let n = rack.size;
    let mut left = vec![vec![0; n]; n];
    for z in 0..n {
        for x in 0..n {
            left[x][rack.table[z][x]] = z;
        }
    }
    left
}

/// The conjugation rack of a group: `g ◁ h = h⁻¹ g h`, pointed at the
/// identity.
pub fn conj_rack(group: &FiniteGroup) -> FiniteRack {
    let n = group.size;
    let table = (0..n)
        .map(|g| (0..n).map(|h| group.conj(g, h)).collect())
        .collect();
    FiniteRack {
        size: n,
        table,
        basepoint: Some(group.identity),
    }
}

/// The finest partition of the carrier closed under `a ∼ a ◁ b` (and hence
/// under the inverse operation), as sorted orbit lists in order of their
/// smallest element.
pub fn orbits(rack: &FiniteRack) -> Vec<Vec<usize>> {
    let n = rack.size;
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let root = find(parent, parent[x]);
            parent[x] = root;
        }
        parent[x]
    }
    for a in 0..n {
        for b in 0..n {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, rack.table[a][b]));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut class_of = vec![usize::MAX; n];
    for x in 0..n {
        let r = find(&mut parent, x);
        if class_of[r] == usize::MAX {
            class_of[r] = classes.len();
            classes.push(Vec::new());
        }
        classes[class_of[r]].push(x);
    }
    classes
}

/// The bijection `a ↦ a ◁ b`. The assignment `b ↦ inner_permutation(R, b)`
/// is a rack morphism into the conjugation rack of the symmetric group
/// (products taken apply-left-first).
pub fn inner_permutation(rack: &FiniteRack, b: usize) -> Perm {
    Perm::from_images((0..rack.size).map(|a| rack.table[a][b]).collect())
        .expect("column of a valid rack is a bijection")
}

/// A map between two racks, to be checked for the homomorphism law.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RackMorphism {
    pub source: FiniteRack,
    pub target: FiniteRack,
    pub map: Vec<usize>,
}

impl RackMorphism {
    pub fn identity(rack: &FiniteRack) -> Self {
        RackMorphism {
            source: rack.clone(),
            target: rack.clone(),
            map: (0..rack.size).collect(),
        }
    }
}

/// Checks `μ(a ◁ b) = μ(a) ◁ μ(b)` on all pairs.
pub fn validate_morphism(m: &RackMorphism) -> Result<ValidationReport> {
    if m.map.len() != m.source.size {
        return Err(Error::Malformed(format!(
            "morphism map has length {}, source has size {}",
            m.map.len(),
            m.source.size
        )));
    }
    for &v in &m.map {
        if v >= m.target.size {
            return Err(Error::Malformed(format!(
                "morphism value {v} out of range 0..{}",
                m.target.size
            )));
        }
    }
    let mut report = ValidationReport::new();
    for a in 0..m.source.size {
        for b in 0..m.source.size {
            if m.map[m.source.op(a, b)] != m.target.op(m.map[a], m.map[b]) {
                report.record("morphism_law", &[a, b]);
            }
        }
    }
    Ok(report)
}

/// Canonical form: the lexicographically smallest relabelled table over all
/// permutations of the carrier (flattened row-major comparison). Two racks
/// are isomorphic iff their canonical forms agree.
pub fn canonical_form(rack: &FiniteRack) -> FiniteRack {
    let mut best: Option<FiniteRack> = None;
    for sigma in Perm::all(rack.size) {
        if let Some(e) = rack.basepoint {
            // pointed racks are canonicalized over basepoint-preserving
            // relabellings, with the basepoint sent to 0
            if sigma.apply(e) != 0 {
                continue;
            }
        }
        let candidate = rack.relabel(&sigma);
        if best.as_ref().map_or(true, |b| candidate.table < b.table) {
            best = Some(candidate);
        }
    }
    best.expect("at least the identity relabelling applies")
}

/// Isomorphism test by canonical form.
pub fn are_isomorphic(a: &FiniteRack, b: &FiniteRack) -> bool {
    a.size == b.size && canonical_form(a).table == canonical_form(b).table
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_element_rack_is_valid() {
        let r = validate_rack(&[vec![0]], None).unwrap();
        assert!(r.valid);
    }

    #[test]
    fn paper_two_element_rack_is_valid() {
        // a ◁ b = 1 - a
        let r = validate_rack(&[vec![1, 1], vec![0, 0]], None).unwrap();
        assert!(r.valid);
    }

    #[test]
    fn non_bijective_column_is_reported() {
        let r = validate_rack(&[vec![0, 0], vec![0, 1]], None).unwrap();
        assert!(!r.valid);
        assert_eq!(r.first().unwrap().law, "column_bijective");
        assert_eq!(r.first().unwrap().witness, vec![0]);
    }

    #[test]
    fn out_of_range_entry_is_malformed() {
        assert!(matches!(
            validate_rack(&[vec![0, 2], vec![1, 0]], None),
            Err(Error::Malformed(_))
        ));
    }

    #[test]
    fn pointed_axioms_checked() {
        let mut t = FiniteRack::trivial(3);
        t.basepoint = Some(0);
        assert!(t.validate().unwrap().valid);
        // dihedral quandle has no unit: 0 ◁ 1 = 2 ≠ 0
        let d = FiniteRack::dihedral(3);
        let r = validate_rack(&d.table, Some(0)).unwrap();
        assert!(!r.valid);
    }

    #[test]
    fn paper_left_table_converts_to_right() {
        // x ▷ x = y, x ▷ y = x, y ▷ y = x, y ▷ x = y  with x = 0, y = 1
        let left = vec![vec![1, 0], vec![1, 0]];
        let rack = left_to_right(&left).unwrap();
        assert_eq!(rack.table, vec![vec![1, 1], vec![0, 0]]);
    }

    #[test]
    fn trivial_left_rack_converts_to_trivial() {
        // a ▷ b = b
        let left = vec![vec![0, 1, 2]; 3];
        let rack = left_to_right(&left).unwrap();
        assert_eq!(rack.table, FiniteRack::trivial(3).table);
    }

    #[test]
    fn dihedral_left_table_converts_by_column_inversion() {
        // a ▷ b = 2a - b mod 3; the oracle inverts each translation directly
        let n = 3;
        let left: Vec<Vec<usize>> = (0..n)
            .map(|a| (0..n).map(|b| (2 * a + n - b) % n).collect())
            .collect();
        let rack = left_to_right(&left).unwrap();
        for z in 0..n {
            for x in 0..n {
                let y = (0..n).find(|&y| left[x][y] == z).unwrap();
                assert_eq!(rack.op(z, x), y);
            }
        }
        assert_eq!(rack.table, FiniteRack::dihedral(3).table);
    }

    #[test]
    fn left_right_roundtrip_is_identity() {
        for left in [
            vec![vec![1, 0], vec![1, 0]],
            vec![vec![0, 1, 2]; 3],
            (0..3usize)
                .map(|a| (0..3).map(|b| (2 * a + 3 - b) % 3).collect())
                .collect::<Vec<_>>(),
        ] {
            let rack = left_to_right(&left).unwrap();
            assert_eq!(right_to_left(&rack), left);
        }
    }

    #[test]
    fn rejects_non_left_rack() {
        // rows bijective but not left self-distributive
        let bad = vec![vec![1, 0, 2], vec![0, 1, 2], vec![0, 2, 1]];
        assert!(left_to_right(&bad).is_err());
    }

    #[test]
    fn conj_of_z2_is_trivial() {
        let rack = conj_rack(&FiniteGroup::cyclic(2));
        assert_eq!(rack.table, FiniteRack::trivial(2).table);
        assert_eq!(rack.basepoint, Some(0));
        assert!(rack.validate().unwrap().valid);
    }

    #[test]
    fn conj_of_trivial_group() {
        let rack = conj_rack(&FiniteGroup::trivial());
        assert_eq!(rack.size, 1);
        assert!(rack.validate().unwrap().valid);
    }

    #[test]
    fn conj_s3_orbits_are_conjugacy_classes() {
        let s3 = FiniteGroup::symmetric(3);
        let rack = conj_rack(&s3);
        assert!(rack.validate().unwrap().valid);
        // oracle: conjugacy classes by brute force over the group
        let mut class_sizes: Vec<usize> = {
            let mut seen = vec![false; 6];
            let mut sizes = Vec::new();
            for g in 0..6 {
                if seen[g] {
                    continue;
                }
                let mut class: Vec<usize> = (0..6).map(|h| s3.conj(g, h)).collect();
                class.sort_unstable();
                class.dedup();
                for &x in &class {
                    seen[x] = true;
                }
                sizes.push(class.len());
            }
            sizes
        };
        class_sizes.sort_unstable();
        let mut orbit_sizes: Vec<usize> = orbits(&rack).iter().map(|o| o.len()).collect();
        orbit_sizes.sort_unstable();
        assert_eq!(orbit_sizes, class_sizes);
        assert_eq!(orbit_sizes, vec![1, 2, 3]);
    }

    #[test]
    fn orbit_examples() {
        assert_eq!(orbits(&FiniteRack::trivial(4)).len(), 4);
        assert_eq!(orbits(&FiniteRack::two_element_cyclic()).len(), 1);
        assert_eq!(orbits(&FiniteRack::dihedral(3)).len(), 1);
    }

    #[test]
    fn inner_permutation_examples() {
        let t = FiniteRack::trivial(3);
        for b in 0..3 {
            assert!(inner_permutation(&t, b).is_identity());
        }
        let two = FiniteRack::two_element_cyclic();
        for b in 0..2 {
            assert_eq!(inner_permutation(&two, b).images(), &[1, 0]);
        }
        let d = FiniteRack::dihedral(3);
        assert_eq!(inner_permutation(&d, 0).images(), &[0, 2, 1]);
    }

    #[test]
    fn inner_permutation_is_conjugation_morphism() {
        for rack in [
            FiniteRack::two_element_cyclic(),
            FiniteRack::dihedral(3),
            conj_rack(&FiniteGroup::symmetric(3)),
        ] {
            for b in 0..rack.size {
                for c in 0..rack.size {
                    let lhs = inner_permutation(&rack, rack.op(b, c));
                    let rhs = inner_permutation(&rack, b)
                        .conjugate_by(&inner_permutation(&rack, c));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn morphism_validation_examples() {
        let d = FiniteRack::dihedral(3);
        let id = RackMorphism::identity(&d);
        assert!(validate_morphism(&id).unwrap().valid);

        // constant map to the basepoint of a pointed rack
        let mut pointed = FiniteRack::trivial(2);
        pointed.basepoint = Some(0);
        let constant = RackMorphism {
            source: d.clone(),
            target: pointed,
            map: vec![0, 0, 0],
        };
        assert!(validate_morphism(&constant).unwrap().valid);

        // swap on the trivial rack of size 2
        let t2 = FiniteRack::trivial(2);
        let swap = RackMorphism {
            source: t2.clone(),
            target: t2,
            map: vec![1, 0],
        };
        assert!(validate_morphism(&swap).unwrap().valid);

        // a non-morphism: collapse dihedral to one orbit element unevenly
        let bad = RackMorphism {
            source: d.clone(),
            target: d,
            map: vec![0, 0, 1],
        };
        assert!(!validate_morphism(&bad).unwrap().valid);
    }

    #[test]
    fn canonical_form_identifies_isomorphic_racks() {
        let d = FiniteRack::dihedral(3);
        for sigma in Perm::all(3) {
            assert!(are_isomorphic(&d, &d.relabel(&sigma)));
        }
        assert!(!are_isomorphic(&d, &FiniteRack::trivial(3)));
    }
}
