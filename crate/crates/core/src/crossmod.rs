use crate::action::{validate_action, RackAction};
use crate::augmented::{validate_augmented, AugmentedRack};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::rack::{conj_rack, FiniteRack};
use crate::report::ValidationReport;
use serde::{Deserialize, Serialize};

/// A crossed module of racks, stored in its reduced form: a target rack
/// `R`, an `R`-set `X` and an equivariant map `p : X → R`. The rack
/// structure on `X` is not stored; Peiffer's identity makes it the derived
/// table `x ◁ y = x · p(y)`, and any user-supplied source table is treated
/// as a claim to verify against it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossedModule {
    pub target: FiniteRack,
    pub set_size: usize,
    pub action: Vec<Vec<usize>>,
    pub p: Vec<usize>,
}

/// The same data read as a generalized augmented rack: a rack `R`, an
/// `R`-set and a map satisfying `p(x · r) = p(x) ◁ r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneralizedAugmentedRack {
    pub rack: FiniteRack,
    pub set_size: usize,
    pub action: Vec<Vec<usize>>,
    pub p: Vec<usize>,
}

impl CrossedModule {
    /// The identity crossed module `id : R → R` with the self-action.
    pub fn identity(rack: &FiniteRack) -> CrossedModule {
        CrossedModule {
            target: rack.clone(),
            set_size: rack.size,
            action: rack.table.clone(),
            p: (0..rack.size).collect(),
        }
    }

    pub fn act(&self, x: usize, r: usize) -> usize {
        self.action[x][r]
    }

    pub fn rack_action(&self) -> RackAction {
        RackAction {
            rack: self.target.clone(),
            set_size: self.set_size,
            action: self.action.clone(),
        }
    }

    /// The derived source table `x ◁ y = x · p(y)`.
    pub fn source_table(&self) -> Vec<Vec<usize>> {
        (0..self.set_size)
            .map(|x| (0..self.set_size).map(|y| self.act(x, self.p[y])).collect())
            .collect()
    }

    pub fn shape_check(&self) -> Result<()> {
        self.rack_action().shape_check()?;
        if self.p.len() != self.set_size {
            return Err(Error::Malformed(format!(
                "p has length {}, set size is {}",
                self.p.len(),
                self.set_size
            )));
        }
        for &r in &self.p {
            if r >= self.target.size {
                return Err(Error::Malformed(format!(
                    "p value {r} out of range 0..{}",
                    self.target.size
                )));
            }
        }
        Ok(())
    }
}

/// The derived source rack of a crossed module, validated.
pub fn induced_rack_of_crossmod(cm: &CrossedModule) -> Result<FiniteRack> {
    let report = validate_crossed_module(cm, None)?;
    if !report.valid {
        let v = report.first().unwrap();
        return Err(Error::Precondition {
            condition: format!("crossed module axiom `{}`", v.law),
            witness: v.witness.clone(),
        });
    }
    FiniteRack::new(cm.source_table(), None)
}

/// Checks a crossed module: the action laws, equivariance
/// `p(x · s) = p(x) ◁ s`, that the action is by automorphisms of the
/// derived source rack, that the derived table is a rack, and, when a user
/// source table is supplied, that it equals the derived one (Peiffer).
pub fn validate_crossed_module(
    cm: &CrossedModule,
    user_source: Option<&[Vec<usize>]>,
) -> Result<ValidationReport> {
    cm.shape_check()?;
    let mut report = validate_action(&cm.rack_action())?;
    for x in 0..cm.set_size {
        for s in 0..cm.target.size {
            if cm.p[cm.act(x, s)] != cm.target.op(cm.p[x], s) {
                report.record("equivariance", &[x, s]);
            }
        }
    }
    let source = cm.source_table();
    for x in 0..cm.set_size {
        for y in 0..cm.set_size {
            for s in 0..cm.target.size {
                if cm.act(source[x][y], s) != source[cm.act(x, s)][cm.act(y, s)] {
                    report.record("action_by_automorphisms", &[x, y, s]);
                }
            }
        }
    }
    let derived = crate::rack::validate_rack(&source, None)?;
    for v in derived.violations {
        report.record(&format!("derived_source_{}", v.law), &v.witness);
    }
    if let Some(user) = user_source {
        if user.len() != cm.set_size || user.iter().any(|row| row.len() != cm.set_size) {
            return Err(Error::Malformed("user source table has the wrong shape".into()));
        }
        for x in 0..cm.set_size {
            for y in 0..cm.set_size {
                if user[x][y] != source[x][y] {
                    report.record("peiffer_identity", &[x, y]);
                }
            }
        }
    }
    Ok(report)
}

/// Checks the generalized-augmented-rack laws alone: a valid rack action and
/// `p(x · r) = p(x) ◁ r`.
pub fn validate_gen_augmented(gar: &GeneralizedAugmentedRack) -> Result<ValidationReport> {
    let action = RackAction {
        rack: gar.rack.clone(),
        set_size: gar.set_size,
        action: gar.action.clone(),
    };
    let mut report = validate_action(&action)?;
    if gar.p.len() != gar.set_size {
        return Err(Error::Malformed("p length does not match the set size".into()));
    }
    for &r in &gar.p {
        if r >= gar.rack.size {
            return Err(Error::Malformed("p value out of range".into()));
        }
    }
    for x in 0..gar.set_size {
        for r in 0..gar.rack.size {
            if gar.p[action.apply(x, r)] != gar.rack.op(gar.p[x], r) {
                report.record("generalized_augmentation", &[x, r]);
            }
        }
    }
    Ok(report)
}

/// Forgets the (derived) source rack structure.
pub fn gen_augmented_from_crossmod(cm: &CrossedModule) -> GeneralizedAugmentedRack {
    GeneralizedAugmentedRack {
        rack: cm.target.clone(),
        set_size: cm.set_size,
        action: cm.action.clone(),
        p: cm.p.clone(),
    }
}

/// Rebuilds the crossed module; the rack structure on the set is recovered
/// as the derived table.
pub fn crossmod_from_gen_augmented(gar: &GeneralizedAugmentedRack) -> CrossedModule {
    CrossedModule {
        target: gar.rack.clone(),
        set_size: gar.set_size,
        action: gar.action.clone(),
        p: gar.p.clone(),
    }
}

/// Round trip through the generalized-augmented-rack presentation; the
/// correspondence is bijective, so this is the identity on valid input.
pub fn roundtrip_crossmod(cm: &CrossedModule) -> CrossedModule {
    crossmod_from_gen_augmented(&gen_augmented_from_crossmod(cm))
}

/// Round trip in the other direction.
pub fn roundtrip_genaug(gar: &GeneralizedAugmentedRack) -> GeneralizedAugmentedRack {
    gen_augmented_from_crossmod(&crossmod_from_gen_augmented(gar))
}

/// An augmented rack is a crossed module of racks: the target is the
/// conjugation rack of `G`, acting through the group action.
pub fn crossmod_from_augmented(ar: &AugmentedRack) -> CrossedModule {
    CrossedModule {
        target: conj_rack(&ar.group),
        set_size: ar.set_size,
        action: ar.group_action.clone(),
        p: ar.p.clone(),
    }
}

/// A crossed module of groups `μ : M → N`: `μ` a homomorphism, `N` acting
/// on `M` on the right by automorphisms, `μ` equivariant, and (unless the
/// caller opts out) Peiffer's identity `m · μ(m') = m'⁻¹ m m'`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupCrossedModule {
    pub m: FiniteGroup,
    pub n: FiniteGroup,
    pub mu: Vec<usize>,
    pub action: Vec<Vec<usize>>,
}

impl GroupCrossedModule {
    pub fn act(&self, m: usize, n: usize) -> usize {
        self.action[m][n]
    }

    /// The identity crossed module of groups `id : G → G` with conjugation.
    pub fn identity(group: &FiniteGroup) -> GroupCrossedModule {
        let k = group.size;
        GroupCrossedModule {
            m: group.clone(),
            n: group.clone(),
            mu: (0..k).collect(),
            action: (0..k).map(|m| (0..k).map(|n| group.conj(m, n)).collect()).collect(),
        }
    }
}

/// Validates a crossed module of groups. `require_peiffer` distinguishes the
/// full notion from the weaker data (equivariant homomorphism plus action by
/// automorphisms) that already suffices for the semi-direct category.
pub fn validate_group_crossmod(
    gcm: &GroupCrossedModule,
    require_peiffer: bool,
) -> Result<ValidationReport> {
    let (sm, sn) = (gcm.m.size, gcm.n.size);
    if gcm.mu.len() != sm || gcm.action.len() != sm {
        return Err(Error::Malformed("crossed module tables do not match |M|".into()));
    }
    for row in &gcm.action {
        if row.len() != sn || row.iter().any(|&v| v >= sm) {
            return Err(Error::Malformed("bad action table".into()));
        }
    }
    if gcm.mu.iter().any(|&v| v >= sn) {
        return Err(Error::Malformed("bad mu values".into()));
    }
    let mut report = ValidationReport::new();
    for a in 0..sm {
        for b in 0..sm {
            if gcm.mu[gcm.m.mul(a, b)] != gcm.n.mul(gcm.mu[a], gcm.mu[b]) {
                report.record("mu_homomorphism", &[a, b]);
            }
        }
    }
    for m in 0..sm {
        if gcm.act(m, gcm.n.identity) != m {
            report.record("action_identity", &[m]);
        }
        for g in 0..sn {
            for h in 0..sn {
                if gcm.act(gcm.act(m, g), h) != gcm.act(m, gcm.n.mul(g, h)) {
                    report.record("action_compatibility", &[m, g, h]);
                }
            }
        }
    }
    for a in 0..sm {
        for b in 0..sm {
            for g in 0..sn {
                if gcm.act(gcm.m.mul(a, b), g) != gcm.m.mul(gcm.act(a, g), gcm.act(b, g)) {
                    report.record("action_by_automorphisms", &[a, b, g]);
                }
            }
        }
    }
    for m in 0..sm {
        for g in 0..sn {
            if gcm.mu[gcm.act(m, g)] != gcm.n.conj(gcm.mu[m], g) {
                report.record("mu_equivariance", &[m, g]);
            }
        }
    }
    if require_peiffer {
        for a in 0..sm {
            for b in 0..sm {
                if gcm.act(a, gcm.mu[b]) != gcm.m.conj(a, b) {
                    report.record("peiffer_identity", &[a, b]);
                }
            }
        }
    }
    Ok(report)
}

/// Passing a crossed module of groups through the conjugation functor gives
/// a crossed module of racks.
pub fn rack_crossmod_from_group_crossmod(gcm: &GroupCrossedModule) -> Result<CrossedModule> {
    let report = validate_group_crossmod(gcm, true)?;
    if !report.valid {
        let v = report.first().unwrap();
        return Err(Error::Precondition {
            condition: format!("group crossed module axiom `{}`", v.law),
            witness: v.witness.clone(),
        });
    }
    Ok(CrossedModule {
        target: conj_rack(&gcm.n),
        set_size: gcm.m.size,
        action: gcm.action.clone(),
        p: gcm.mu.clone(),
    })
}

/// The covering-style assembly: given augmented racks
/// `p₁ : X₁ → G₁`, `p₀ : X₀ → G₀`, maps `α : X₁ → X₀`, `β : G₁ → G₀` and a
/// right `G₀`-action `∘` on `X₁`, checks
///
/// 1. `x * g = x ∘ β(g)`,
/// 2. `α(x ∘ g) = α(x) · g`,
/// 3. `(y * p₁(x)) ∘ g = (y ∘ g) * p₁(x ∘ g)`,
///
/// together with the ambient preconditions (`β` a homomorphism, `∘` an
/// action, the square `p₀ ∘ α = β ∘ p₁`), and on success returns the crossed
/// module `α : X₁ →` induced rack of `a₀`, with `X₀` acting via
/// `x ⊳ y = x ∘ p₀(y)`.
pub fn assemble_from_pair(
    a1: &AugmentedRack,
    a0: &AugmentedRack,
    alpha: &[usize],
    beta: &[usize],
    circ: &[Vec<usize>],
) -> Result<CrossedModule> {
    for (name, a) in [("a1", a1), ("a0", a0)] {
        let report = validate_augmented(a)?;
        if !report.valid {
            return Err(Error::Precondition {
                condition: format!("{name} is not an augmented rack"),
                witness: report.first().unwrap().witness.clone(),
            });
        }
    }
    let (m1, g1) = (a1.set_size, a1.group.size);
    let (m0, g0) = (a0.set_size, a0.group.size);
    if alpha.len() != m1 || alpha.iter().any(|&v| v >= m0) {
        return Err(Error::Malformed("alpha is not a map X1 -> X0".into()));
    }
    if beta.len() != g1 || beta.iter().any(|&v| v >= g0) {
        return Err(Error::Malformed("beta is not a map G1 -> G0".into()));
    }
    if circ.len() != m1 || circ.iter().any(|row| row.len() != g0 || row.iter().any(|&v| v >= m1)) {
        return Err(Error::Malformed("circ is not a table X1 x G0 -> X1".into()));
    }
    for g in 0..g1 {
        for h in 0..g1 {
            if beta[a1.group.mul(g, h)] != a0.group.mul(beta[g], beta[h]) {
                return Err(Error::precondition("beta_homomorphism", &[g, h]));
            }
        }
    }
    // every remaining condition is collected, so a failure report names all
    // violated conditions with witnesses, not just the first
    let mut report = ValidationReport::new();
    for x in 0..m1 {
        if circ[x][a0.group.identity] != x {
            report.record("circ_action_identity", &[x]);
        }
        for g in 0..g0 {
            for h in 0..g0 {
                if circ[circ[x][g]][h] != circ[x][a0.group.mul(g, h)] {
                    report.record("circ_action_compatibility", &[x, g, h]);
                }
            }
        }
    }
    for g in 0..g0 {
        let mut seen = vec![false; m1];
        for x in 0..m1 {
            seen[circ[x][g]] = true;
        }
        if seen.contains(&false) {
            report.record("circ_translation_bijective", &[g]);
        }
    }
    for x in 0..m1 {
        if a0.p[alpha[x]] != beta[a1.p[x]] {
            report.record("square_commutes", &[x]);
        }
    }
    for x in 0..m1 {
        for g in 0..g1 {
            if alpha[a1.act(x, g)] != a0.act(alpha[x], beta[g]) {
                report.record("alpha_equivariant_over_beta", &[x, g]);
            }
        }
    }
    for x in 0..m1 {
        for g in 0..g1 {
            if a1.act(x, g) != circ[x][beta[g]] {
                report.record("condition_1", &[x, g]);
            }
        }
    }
    for x in 0..m1 {
        for g in 0..g0 {
            if alpha[circ[x][g]] != a0.act(alpha[x], g) {
                report.record("condition_2", &[x, g]);
            }
        }
    }
    for y in 0..m1 {
        for x in 0..m1 {
            for g in 0..g0 {
                let lhs = circ[a1.act(y, a1.p[x])][g];
                let rhs = a1.act(circ[y][g], a1.p[circ[x][g]]);
                if lhs != rhs {
                    report.record("condition_3", &[y, x, g]);
                }
            }
        }
    }
    if !report.valid {
        return Err(Error::ConditionsFailed(report));
    }
    let target = crate::augmented::induced_rack_of_augmented(a0)?;
    let action = (0..m1)
        .map(|x| (0..m0).map(|y| circ[x][a0.p[y]]).collect())
        .collect();
    Ok(CrossedModule {
        target,
        set_size: m1,
        action,
        p: alpha.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::augmented::induced_rack_of_augmented;
    use crate::rack::{validate_morphism, RackMorphism};

    #[test]
    fn identity_crossed_module_is_valid() {
        for rack in [
            FiniteRack::trivial(3),
            FiniteRack::two_element_cyclic(),
            FiniteRack::dihedral(3),
        ] {
            let cm = CrossedModule::identity(&rack);
            assert!(validate_crossed_module(&cm, Some(&rack.table)).unwrap().valid);
            assert_eq!(induced_rack_of_crossmod(&cm).unwrap().table, rack.table);
        }
    }

    #[test]
    fn map_to_point_is_valid_iff_induced_rack_trivial() {
        let point = FiniteRack::trivial(1);
        let cm = CrossedModule {
            target: point,
            set_size: 3,
            action: vec![vec![0], vec![1], vec![2]],
            p: vec![0, 0, 0],
        };
        assert!(validate_crossed_module(&cm, None).unwrap().valid);
        assert_eq!(
            induced_rack_of_crossmod(&cm).unwrap().table,
            FiniteRack::trivial(3).table
        );
        // the same data with a nontrivial claimed source table fails Peiffer
        let claimed = FiniteRack::dihedral(3).table;
        let report = validate_crossed_module(&cm, Some(&claimed)).unwrap();
        assert!(report.violations.iter().any(|v| v.law == "peiffer_identity"));
    }

    #[test]
    fn group_crossmod_z2_to_z2_through_conj() {
        let z2 = FiniteGroup::cyclic(2);
        let gcm = GroupCrossedModule::identity(&z2);
        assert!(validate_group_crossmod(&gcm, true).unwrap().valid);
        let cm = rack_crossmod_from_group_crossmod(&gcm).unwrap();
        assert!(validate_crossed_module(&cm, None).unwrap().valid);
    }

    #[test]
    fn group_crossmod_s3_through_conj() {
        let s3 = FiniteGroup::symmetric(3);
        let gcm = GroupCrossedModule::identity(&s3);
        let cm = rack_crossmod_from_group_crossmod(&gcm).unwrap();
        assert!(validate_crossed_module(&cm, None).unwrap().valid);
    }

    #[test]
    fn induced_p_is_a_morphism_to_the_target() {
        let cm = CrossedModule::identity(&FiniteRack::dihedral(3));
        let m = RackMorphism {
            source: induced_rack_of_crossmod(&cm).unwrap(),
            target: cm.target.clone(),
            map: cm.p.clone(),
        };
        assert!(validate_morphism(&m).unwrap().valid);
    }

    #[test]
    fn roundtrips_are_identities() {
        let cm = CrossedModule::identity(&FiniteRack::two_element_cyclic());
        assert_eq!(roundtrip_crossmod(&cm), cm);
        let gar = gen_augmented_from_crossmod(&cm);
        assert!(validate_gen_augmented(&gar).unwrap().valid);
        assert_eq!(roundtrip_genaug(&gar), gar);
    }

    #[test]
    fn genaug_with_constant_p_roundtrips() {
        let rack = FiniteRack::trivial(2);
        let gar = GeneralizedAugmentedRack {
            rack: rack.clone(),
            set_size: 3,
            action: vec![vec![0, 0], vec![1, 1], vec![2, 2]],
            p: vec![0, 0, 0],
        };
        assert!(validate_gen_augmented(&gar).unwrap().valid);
        assert_eq!(roundtrip_genaug(&gar), gar);
    }

    #[test]
    fn augmented_rack_becomes_crossed_module() {
        let s3 = FiniteGroup::symmetric(3);
        let ar = AugmentedRack::conjugation(&s3);
        let cm = crossmod_from_augmented(&ar);
        assert!(validate_crossed_module(&cm, None).unwrap().valid);
    }

    #[test]
    fn assemble_identity_covering() {
        let s3 = FiniteGroup::symmetric(3);
        let ar = AugmentedRack::conjugation(&s3);
        let alpha: Vec<usize> = (0..ar.set_size).collect();
        let beta: Vec<usize> = (0..s3.size).collect();
        let circ = ar.group_action.clone();
        let cm = assemble_from_pair(&ar, &ar, &alpha, &beta, &circ).unwrap();
        assert!(validate_crossed_module(&cm, None).unwrap().valid);
        // equal to the standard crossed module built from a0 directly
        let standard = CrossedModule::identity(&induced_rack_of_augmented(&ar).unwrap());
        assert_eq!(cm, standard);
    }

    #[test]
    fn assemble_rejects_non_homomorphism() {
        let z4 = FiniteGroup::cyclic(4);
        let ar = AugmentedRack::conjugation(&z4);
        let alpha: Vec<usize> = (0..4).collect();
        let beta = vec![0, 2, 1, 3]; // not a homomorphism of Z/4
        let circ = ar.group_action.clone();
        match assemble_from_pair(&ar, &ar, &alpha, &beta, &circ) {
            Err(Error::Precondition { condition, witness }) => {
                assert_eq!(condition, "beta_homomorphism");
                assert_eq!(witness.len(), 2);
            }
            other => panic!("expected beta_homomorphism failure, got {other:?}"),
        }
    }

    #[test]
    fn assemble_names_condition_3_on_mutated_circ() {
        let s3 = FiniteGroup::symmetric(3);
        let ar = AugmentedRack::conjugation(&s3);
        let alpha: Vec<usize> = (0..6).collect();
        let beta: Vec<usize> = (0..6).collect();
        let mut circ = ar.group_action.clone();
        // one mutated entry of circ; the report must name condition_3 with a
        // witness among the violated conditions
        let old = circ[2][1];
        circ[2][1] = if old == 0 { 1 } else { 0 };
        let err = assemble_from_pair(&ar, &ar, &alpha, &beta, &circ).unwrap_err();
        match err {
            Error::ConditionsFailed(report) => {
                assert!(report
                    .violations
                    .iter()
                    .any(|v| v.law == "condition_3" && v.witness.len() == 3));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }
}
