use crate::crossmod::{validate_group_crossmod, CrossedModule, GroupCrossedModule};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::rack::{conj_rack, validate_morphism, FiniteRack, RackMorphism};
use crate::report::ValidationReport;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// A strict 2-rack: a category object in racks. `R0` is the rack of
/// objects, `R1` the rack of morphisms, and `comp` lists one triple
/// `[f, g, g∘f]` per composable pair (`t(f) = s(g)`). Both racks must be
/// pointed; the basepoint of `R1` is both the rack unit and the identity
/// arrow of the basepoint object.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Strict2Rack {
    pub r0: FiniteRack,
    pub r1: FiniteRack,
    pub s: Vec<usize>,
    pub t: Vec<usize>,
    pub i: Vec<usize>,
    pub comp: Vec<[usize; 3]>,
}

/// A strict 2-group with the same incidence structure over group carriers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Strict2Group {
    pub g0: FiniteGroup,
    pub g1: FiniteGroup,
    pub s: Vec<usize>,
    pub t: Vec<usize>,
    pub i: Vec<usize>,
    pub comp: Vec<[usize; 3]>,
}

/// A 1-cat rack: a pointed rack with a subrack `N` and two retractions
/// `s, t : R → N` whose kernels act trivially on each other.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OneCatRack {
    pub rack: FiniteRack,
    pub subrack: Vec<usize>,
    pub s: Vec<usize>,
    pub t: Vec<usize>,
}

impl Strict2Rack {
    /// The discrete 2-rack on a pointed rack: only identity arrows.
    pub fn discrete(rack: &FiniteRack) -> Result<Strict2Rack> {
        if rack.basepoint.is_none() {
            return Err(Error::precondition("rack_pointed", &[]));
        }
        let n = rack.size;
        Ok(Strict2Rack {
            r0: rack.clone(),
            r1: rack.clone(),
            s: (0..n).collect(),
            t: (0..n).collect(),
            i: (0..n).collect(),
            comp: (0..n).map(|f| [f, f, f]).collect(),
        })
    }

    fn comp_map(&self) -> HashMap<(usize, usize), usize> {
        self.comp.iter().map(|&[f, g, h]| ((f, g), h)).collect()
    }
}

fn shape_check_2rack(x: &Strict2Rack) -> Result<()> {
    let (n0, n1) = (x.r0.size, x.r1.size);
    if x.s.len() != n1 || x.t.len() != n1 || x.i.len() != n0 {
        return Err(Error::Malformed("s, t, i lengths do not match".into()));
    }
    if x.s.iter().chain(&x.t).any(|&v| v >= n0) || x.i.iter().any(|&v| v >= n1) {
        return Err(Error::Malformed("s, t or i value out of range".into()));
    }
    for &[f, g, h] in &x.comp {
        if f >= n1 || g >= n1 || h >= n1 {
            return Err(Error::Malformed("comp entry out of range".into()));
        }
    }
    Ok(())
}

/// Full validation of a strict 2-rack: rack and pointedness axioms on both
/// levels, structure maps are pointed rack morphisms with `s∘i = t∘i = id`,
/// `comp` is total exactly on composable pairs, the category laws hold, and
/// composition satisfies the middle four exchange, i.e. it is a rack
/// morphism on the fiber product.
pub fn validate_2rack(x: &Strict2Rack) -> Result<ValidationReport> {
    shape_check_2rack(x)?;
    let mut report = ValidationReport::new();
    report.absorb(prefixed(x.r0.validate()?, "r0_"));
    report.absorb(prefixed(x.r1.validate()?, "r1_"));
    let (e0, e1) = match (x.r0.basepoint, x.r1.basepoint) {
        (Some(e0), Some(e1)) => (e0, e1),
        _ => {
            report.record("pointed_racks_required", &[]);
            return Ok(report);
        }
    };
    for (name, map, src, dst) in [
        ("s", &x.s, &x.r1, &x.r0),
        ("t", &x.t, &x.r1, &x.r0),
        ("i", &x.i, &x.r0, &x.r1),
    ] {
        let m = RackMorphism {
            source: src.clone(),
            target: dst.clone(),
            map: map.clone(),
        };
        for v in validate_morphism(&m)?.violations {
            report.record(&format!("{name}_morphism"), &v.witness);
        }
    }
    if x.s[e1] != e0 {
        report.record("s_pointed", &[e1]);
    }
    if x.t[e1] != e0 {
        report.record("t_pointed", &[e1]);
    }
    if x.i[e0] != e1 {
        report.record("i_pointed", &[e0]);
    }
    for a in 0..x.r0.size {
        if x.s[x.i[a]] != a {
            report.record("s_section", &[a]);
        }
        if x.t[x.i[a]] != a {
            report.record("t_section", &[a]);
        }
    }
    // comp is a function defined exactly on composable pairs
    let comp = x.comp_map();
    if comp.len() != x.comp.len() {
        report.record("comp_duplicate_pair", &[]);
    }
    for &[f, g, h] in &x.comp {
        if x.t[f] != x.s[g] {
            report.record("comp_on_non_composable", &[f, g]);
            continue;
        }
        if x.s[h] != x.s[f] || x.t[h] != x.t[g] {
            report.record("comp_endpoints", &[f, g, h]);
        }
    }
    for f in 0..x.r1.size {
        for g in 0..x.r1.size {
            if x.t[f] == x.s[g] && !comp.contains_key(&(f, g)) {
                report.record("comp_missing_pair", &[f, g]);
            }
        }
    }
    if !report.valid {
        // the remaining laws need a total composition to quantify over
        return Ok(report);
    }
    for f in 0..x.r1.size {
        if comp[&(x.i[x.s[f]], f)] != f {
            report.record("left_identity", &[f]);
        }
        if comp[&(f, x.i[x.t[f]])] != f {
            report.record("right_identity", &[f]);
        }
    }
    for f in 0..x.r1.size {
        for g in 0..x.r1.size {
            if x.t[f] != x.s[g] {
                continue;
            }
            for h in 0..x.r1.size {
                if x.t[g] != x.s[h] {
                    continue;
                }
                if comp[&(comp[&(f, g)], h)] != comp[&(f, comp[&(g, h)])] {
                    report.record("associativity", &[f, g, h]);
                }
            }
        }
    }
    // middle four exchange on all pairs of composable pairs
    for &[f1, g1, c1] in &x.comp {
        for &[f2, g2, c2] in &x.comp {
            let lhs = comp[&(x.r1.op(f1, f2), x.r1.op(g1, g2))];
            let rhs = x.r1.op(c1, c2);
            if lhs != rhs {
                report.record("middle_four_exchange", &[f1, g1, f2, g2]);
            }
        }
    }
    Ok(report)
}

fn prefixed(r: ValidationReport, prefix: &str) -> ValidationReport {
    let mut out = ValidationReport::new();
    let total = r.total;
    for v in r.violations {
        out.record(&format!("{prefix}{}", v.law), &v.witness);
    }
    out.total = total;
    out.valid = total == 0;
    out
}

/// Outcome of checking whether `ker(s)` and `ker(t)` act trivially on each
/// other; for a valid strict 2-rack this always holds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelActionScan {
    pub trivial: bool,
    pub witnesses: Vec<[usize; 2]>,
}

pub fn kernels_act_trivially(x: &Strict2Rack) -> Result<KernelActionScan> {
    shape_check_2rack(x)?;
    let e0 = x
        .r0
        .basepoint
        .ok_or_else(|| Error::precondition("r0_pointed", &[]))?;
    let ker_s: Vec<usize> = (0..x.r1.size).filter(|&f| x.s[f] == e0).collect();
    let ker_t: Vec<usize> = (0..x.r1.size).filter(|&f| x.t[f] == e0).collect();
    let mut witnesses = Vec::new();
    for &a in &ker_s {
        for &b in &ker_t {
            if x.r1.op(a, b) != a {
                witnesses.push([a, b]);
            }
        }
    }
    for &a in &ker_t {
        for &b in &ker_s {
            if x.r1.op(a, b) != a {
                witnesses.push([a, b]);
            }
        }
    }
    Ok(KernelActionScan {
        trivial: witnesses.is_empty(),
        witnesses,
    })
}

/// The underlying 1-cat rack: `R := R1`, `N := i(R0)`, retractions `i∘s`
/// and `i∘t`.
pub fn to_1cat_rack(x: &Strict2Rack) -> Result<OneCatRack> {
    if x.r1.basepoint.is_none() || x.r0.basepoint.is_none() {
        return Err(Error::precondition("racks_pointed", &[]));
    }
    let report = validate_2rack(x)?;
    if !report.valid {
        let v = report.first().unwrap();
        return Err(Error::Precondition {
            condition: format!("2-rack axiom `{}`", v.law),
            witness: v.witness.clone(),
        });
    }
    let mut subrack: Vec<usize> = x.i.clone();
    subrack.sort_unstable();
    subrack.dedup();
    Ok(OneCatRack {
        rack: x.r1.clone(),
        subrack,
        s: x.s.iter().map(|&a| x.i[a]).collect(),
        t: x.t.iter().map(|&a| x.i[a]).collect(),
    })
}

pub fn validate_1cat_rack(oc: &OneCatRack) -> Result<ValidationReport> {
    let n = oc.rack.size;
    if oc.s.len() != n || oc.t.len() != n {
        return Err(Error::Malformed("s, t lengths do not match the rack".into()));
    }
    if oc.s.iter().chain(&oc.t).any(|&v| v >= n) || oc.subrack.iter().any(|&v| v >= n) {
        return Err(Error::Malformed("value out of range".into()));
    }
    let mut report = ValidationReport::new();
    report.absorb(prefixed(oc.rack.validate()?, "rack_"));
    let e = match oc.rack.basepoint {
        Some(e) => e,
        None => {
            report.record("pointed_rack_required", &[]);
            return Ok(report);
        }
    };
    let in_sub = |v: usize| oc.subrack.binary_search(&v).is_ok();
    if !in_sub(e) {
        report.record("subrack_contains_unit", &[e]);
    }
    for &a in &oc.subrack {
        for &b in &oc.subrack {
            if !in_sub(oc.rack.op(a, b)) {
                report.record("subrack_closed", &[a, b]);
            }
        }
    }
    for (name, map) in [("s", &oc.s), ("t", &oc.t)] {
        for f in 0..n {
            if !in_sub(map[f]) {
                report.record(&format!("{name}_lands_in_subrack"), &[f]);
            }
        }
        for a in 0..n {
            for b in 0..n {
                if map[oc.rack.op(a, b)] != oc.rack.op(map[a], map[b]) {
                    report.record(&format!("{name}_morphism"), &[a, b]);
                }
            }
        }
        for &a in &oc.subrack {
            if map[a] != a {
                report.record(&format!("{name}_retraction"), &[a]);
            }
        }
    }
    let ker_s: Vec<usize> = (0..n).filter(|&f| oc.s[f] == e).collect();
    let ker_t: Vec<usize> = (0..n).filter(|&f| oc.t[f] == e).collect();
    for &a in &ker_s {
        for &b in &ker_t {
            if oc.rack.op(a, b) != a {
                report.record("kernels_act_trivially", &[a, b]);
            }
            if oc.rack.op(b, a) != b {
                report.record("kernels_act_trivially", &[b, a]);
            }
        }
    }
    Ok(report)
}

/// The standard construction: `X := ker(s)` with `R0` acting by
/// `x · r = x ◁ i(r)` and the map `t|X`. The result is a crossed module of
/// racks with `X` carrying the derived rack structure.
pub fn standard_construction(x: &Strict2Rack) -> Result<CrossedModule> {
    let report = validate_2rack(x)?;
    if !report.valid {
        let v = report.first().unwrap();
        return Err(Error::Precondition {
            condition: format!("2-rack axiom `{}`", v.law),
            witness: v.witness.clone(),
        });
    }
    let e0 = x.r0.basepoint.expect("validated 2-rack is pointed");
    let kernel: Vec<usize> = (0..x.r1.size).filter(|&f| x.s[f] == e0).collect();
    let index_of = |f: usize| -> Result<usize> {
        kernel
            .binary_search(&f)
            .map_err(|_| Error::Inconsistency("action does not preserve ker(s)".into()))
    };
    let mut action = vec![vec![0; x.r0.size]; kernel.len()];
    for (xi, &f) in kernel.iter().enumerate() {
        for r in 0..x.r0.size {
            action[xi][r] = index_of(x.r1.op(f, x.i[r]))?;
        }
    }
    Ok(CrossedModule {
        target: x.r0.clone(),
        set_size: kernel.len(),
        action,
        p: kernel.iter().map(|&f| x.t[f]).collect(),
    })
}

/// Compares the rack product `ker(s)` inherits from `R1` with the derived
/// product `x · p(y)` of the standard construction. The scan records
/// evidence; nothing is asserted about agreement in general.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeifferScan {
    pub compared: usize,
    pub agree: bool,
    /// Disagreeing pairs as elements of `R1`.
    pub witnesses: Vec<[usize; 2]>,
}

pub fn peiffer_discrepancy_scan(x: &Strict2Rack) -> Result<PeifferScan> {
    let report = validate_2rack(x)?;
    if !report.valid {
        let v = report.first().unwrap();
        return Err(Error::Precondition {
            condition: format!("2-rack axiom `{}`", v.law),
            witness: v.witness.clone(),
        });
    }
    let e0 = x.r0.basepoint.expect("validated 2-rack is pointed");
    let kernel: Vec<usize> = (0..x.r1.size).filter(|&f| x.s[f] == e0).collect();
    let mut witnesses = Vec::new();
    for &a in &kernel {
        for &b in &kernel {
            let induced = x.r1.op(a, x.i[x.t[b]]);
            let inherited = x.r1.op(a, b);
            if induced != inherited {
                witnesses.push([a, b]);
            }
        }
    }
    Ok(PeifferScan {
        compared: kernel.len() * kernel.len(),
        agree: witnesses.is_empty(),
        witnesses,
    })
}

/// The semi-direct category of an equivariant homomorphism `μ : M → N`
/// with `N` acting on `M` by automorphisms (Peiffer not needed): objects
/// `N`, morphisms `M ⋊ N` (pairs indexed `m * |N| + n`), `s(m,n) = n`,
/// `t(m,n) = μ(m)n`, `i(n) = (1,n)`, and composition
/// `(m₂, μ(m₁)n) ∘ (m₁, n) = (m₂m₁, n)`.
pub fn two_group_from_group_crossmod(gcm: &GroupCrossedModule) -> Result<Strict2Group> {
    let report = validate_group_crossmod(gcm, false)?;
    if !report.valid {
        let v = report.first().unwrap();
        return Err(Error::Precondition {
            condition: format!("hypothesis `{}`", v.law),
            witness: v.witness.clone(),
        });
    }
    let (m_size, n_size) = (gcm.m.size, gcm.n.size);
    let idx = |m: usize, n: usize| m * n_size + n;
    let total = m_size * n_size;
    let mut cayley = vec![vec![0; total]; total];
    for m1 in 0..m_size {
        for n1 in 0..n_size {
            for m2 in 0..m_size {
                for n2 in 0..n_size {
                    // (m1, n1)(m2, n2) = (m1 (m2 · n1⁻¹), n1 n2)
                    let twisted = gcm.act(m2, gcm.n.inv(n1));
                    cayley[idx(m1, n1)][idx(m2, n2)] =
                        idx(gcm.m.mul(m1, twisted), gcm.n.mul(n1, n2));
                }
            }
        }
    }
    let g1 = FiniteGroup::from_cayley(cayley)?;
    let mut s = vec![0; total];
    let mut t = vec![0; total];
    for m in 0..m_size {
        for n in 0..n_size {
            s[idx(m, n)] = n;
            t[idx(m, n)] = gcm.n.mul(gcm.mu[m], n);
        }
    }
    let i: Vec<usize> = (0..n_size).map(|n| idx(gcm.m.identity, n)).collect();
    let mut comp = Vec::new();
    for m1 in 0..m_size {
        for n1 in 0..n_size {
            let f = idx(m1, n1);
            for m2 in 0..m_size {
                let g = idx(m2, t[f]);
                comp.push([f, g, idx(gcm.m.mul(m2, m1), n1)]);
            }
        }
    }
    let out = Strict2Group {
        g0: gcm.n.clone(),
        g1,
        s,
        t,
        i,
        comp,
    };
    let check = validate_2group(&out, false)?;
    if !check.valid {
        return Err(Error::Inconsistency(
            "semi-direct category fails the category laws".into(),
        ));
    }
    Ok(out)
}

/// Validates a strict 2-group: `s`, `t`, `i` homomorphisms with
/// `s∘i = t∘i = id`, a total associative unital composition on composable
/// pairs, and (when `require_mfe`) the middle four exchange, making the
/// composition a homomorphism on the fiber product.
pub fn validate_2group(x: &Strict2Group, require_mfe: bool) -> Result<ValidationReport> {
    let (n0, n1) = (x.g0.size, x.g1.size);
    if x.s.len() != n1 || x.t.len() != n1 || x.i.len() != n0 {
        return Err(Error::Malformed("s, t, i lengths do not match".into()));
    }
    if x.s.iter().chain(&x.t).any(|&v| v >= n0) || x.i.iter().any(|&v| v >= n1) {
        return Err(Error::Malformed("s, t or i value out of range".into()));
    }
    for &[f, g, h] in &x.comp {
        if f >= n1 || g >= n1 || h >= n1 {
            return Err(Error::Malformed("comp entry out of range".into()));
        }
    }
    let mut report = ValidationReport::new();
    report.absorb(prefixed(x.g0.validate(), "g0_"));
    report.absorb(prefixed(x.g1.validate(), "g1_"));
    for (name, map, hom_src, hom_dst) in [
        ("s", &x.s, &x.g1, &x.g0),
        ("t", &x.t, &x.g1, &x.g0),
        ("i", &x.i, &x.g0, &x.g1),
    ] {
        for a in 0..hom_src.size {
            for b in 0..hom_src.size {
                if map[hom_src.mul(a, b)] != hom_dst.mul(map[a], map[b]) {
                    report.record(&format!("{name}_homomorphism"), &[a, b]);
                }
            }
        }
    }
    for n in 0..n0 {
        if x.s[x.i[n]] != n {
            report.record("s_section", &[n]);
        }
        if x.t[x.i[n]] != n {
            report.record("t_section", &[n]);
        }
    }
    let comp: HashMap<(usize, usize), usize> =
        x.comp.iter().map(|&[f, g, h]| ((f, g), h)).collect();
    if comp.len() != x.comp.len() {
        report.record("comp_duplicate_pair", &[]);
    }
    for &[f, g, h] in &x.comp {
        if x.t[f] != x.s[g] {
            report.record("comp_on_non_composable", &[f, g]);
        } else if x.s[h] != x.s[f] || x.t[h] != x.t[g] {
            report.record("comp_endpoints", &[f, g, h]);
        }
    }
    for f in 0..n1 {
        for g in 0..n1 {
            if x.t[f] == x.s[g] && !comp.contains_key(&(f, g)) {
                report.record("comp_missing_pair", &[f, g]);
            }
        }
    }
    if !report.valid {
        return Ok(report);
    }
    for f in 0..n1 {
        if comp[&(x.i[x.s[f]], f)] != f {
            report.record("left_identity", &[f]);
        }
        if comp[&(f, x.i[x.t[f]])] != f {
            report.record("right_identity", &[f]);
        }
    }
    for f in 0..n1 {
        for g in 0..n1 {
            if x.t[f] != x.s[g] {
                continue;
            }
            for h in 0..n1 {
                if x.t[g] != x.s[h] {
                    continue;
                }
                if comp[&(comp[&(f, g)], h)] != comp[&(f, comp[&(g, h)])] {
                    report.record("associativity", &[f, g, h]);
                }
            }
        }
    }
    if require_mfe {
        for &[f1, g1, c1] in &x.comp {
            for &[f2, g2, c2] in &x.comp {
                let lhs = comp[&(x.g1.mul(f1, f2), x.g1.mul(g1, g2))];
                let rhs = x.g1.mul(c1, c2);
                if lhs != rhs {
                    report.record("middle_four_exchange", &[f1, g1, f2, g2]);
                }
            }
        }
    }
    Ok(report)
}

/// The conjugation functor applied levelwise sends a strict 2-group to a
/// strict 2-rack.
pub fn conj_2rack(x: &Strict2Group) -> Result<Strict2Rack> {
    let report = validate_2group(x, true)?;
    if !report.valid {
        let v = report.first().unwrap();
        return Err(Error::Precondition {
            condition: format!("2-group axiom `{}`", v.law),
            witness: v.witness.clone(),
        });
    }
    Ok(Strict2Rack {
        r0: conj_rack(&x.g0),
        r1: conj_rack(&x.g1),
        s: x.s.clone(),
        t: x.t.clone(),
        i: x.i.clone(),
        comp: x.comp.clone(),
    })
}

/// The semi-direct 2-group of an augmented rack whose set is an abelian
/// group with a linear action and whose augmentation is a homomorphism.
/// Every hypothesis is checked and failures are reported by name.
pub fn two_group_from_abelian_augmented(
    x_group: &FiniteGroup,
    ar: &crate::augmented::AugmentedRack,
) -> Result<Strict2Group> {
    if x_group.size != ar.set_size {
        return Err(Error::Malformed(
            "group structure does not match the augmented rack's set".into(),
        ));
    }
    let report = crate::augmented::validate_augmented(ar)?;
    if !report.valid {
        let v = report.first().unwrap();
        return Err(Error::Precondition {
            condition: format!("augmented rack axiom `{}`", v.law),
            witness: v.witness.clone(),
        });
    }
    if !x_group.is_abelian() {
        return Err(Error::precondition("x_abelian", &[]));
    }
    for a in 0..x_group.size {
        for b in 0..x_group.size {
            if ar.p[x_group.mul(a, b)] != ar.group.mul(ar.p[a], ar.p[b]) {
                return Err(Error::precondition("p_homomorphism", &[a, b]));
            }
        }
    }
    for a in 0..x_group.size {
        for b in 0..x_group.size {
            for g in 0..ar.group.size {
                if ar.act(x_group.mul(a, b), g) != x_group.mul(ar.act(a, g), ar.act(b, g)) {
                    return Err(Error::precondition("action_linear", &[a, b, g]));
                }
            }
        }
    }
    let gcm = GroupCrossedModule {
        m: x_group.clone(),
        n: ar.group.clone(),
        mu: ar.p.clone(),
        action: ar.group_action.clone(),
    };
    two_group_from_group_crossmod(&gcm)
}

/// Extracts the crossed module of groups of a strict 2-group:
/// `M' = ker(s)` with `μ = t|M'` and `N = G0` acting by conjugation with
/// identity arrows. Returns the crossed module together with the kernel
/// elements (as indices into `G1`) that realize `M'`.
pub fn extract_group_crossmod(x: &Strict2Group) -> Result<(GroupCrossedModule, Vec<usize>)> {
    let report = validate_2group(x, true)?;
    if !report.valid {
        let v = report.first().unwrap();
        return Err(Error::Precondition {
            condition: format!("2-group axiom `{}`", v.law),
            witness: v.witness.clone(),
        });
    }
    let kernel: Vec<usize> = (0..x.g1.size)
        .filter(|&f| x.s[f] == x.g0.identity)
        .collect();
    let index_of = |f: usize| -> Result<usize> {
        kernel
            .binary_search(&f)
            .map_err(|_| Error::Inconsistency("ker(s) is not closed".into()))
    };
    let k = kernel.len();
    let mut cayley = vec![vec![0; k]; k];
    for (a, &fa) in kernel.iter().enumerate() {
        for (b, &fb) in kernel.iter().enumerate() {
            cayley[a][b] = index_of(x.g1.mul(fa, fb))?;
        }
    }
    let m = FiniteGroup::from_cayley(cayley)?;
    let mut action = vec![vec![0; x.g0.size]; k];
    for (a, &fa) in kernel.iter().enumerate() {
        for n in 0..x.g0.size {
            action[a][n] = index_of(x.g1.conj(fa, x.i[n]))?;
        }
    }
    let gcm = GroupCrossedModule {
        m,
        n: x.g0.clone(),
        mu: kernel.iter().map(|&f| x.t[f]).collect(),
        action,
    };
    Ok((gcm, kernel))
}
