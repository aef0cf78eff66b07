use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::rack::{canonical_form, FiniteRack};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Which class of racks to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RackFlavor {
    /// All racks.
    Racks,
    /// Racks with `a ◁ a = a`.
    Quandles,
    /// Racks carrying a unit element, normalized to element 0.
    Pointed,
}

/// Default cap on the order accepted by [`enumerate_racks`].
pub const DEFAULT_ENUMERATION_CAP: usize = 5;

/// One representative per isomorphism class of racks of order `n`, as
/// canonical forms (lexicographically minimal table over relabellings) in
/// increasing table order.
///
/// A rack is stored per column: `cols[b]` is the translation `a ↦ a ◁ b`.
/// Self-distributivity says the column of `b ◁ c` is the conjugate of the
/// column of `b` by the column of `c`, which drives the propagation below.
pub fn enumerate_racks(n: usize, flavor: RackFlavor, cap: usize) -> Result<Vec<FiniteRack>> {
    if n > cap {
        return Err(Error::Resource {
            what: "rack enumeration order".into(),
            cap,
            reached: n,
        });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let perms = Perm::all(n);
    let mut tables: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut state: Vec<Option<Perm>> = vec![None; n];
    if flavor == RackFlavor::Pointed {
        // unit element 0: x ◁ 0 = x forces the first column to be trivial
        if !assign_column(&mut state, 0, Perm::identity(n), flavor) {
            return Ok(Vec::new());
        }
    }
    search(&mut state, &perms, flavor, &mut tables);

    let basepoint = (flavor == RackFlavor::Pointed).then_some(0);
    let canon: BTreeSet<Vec<Vec<usize>>> = tables
        .into_par_iter()
        .map(|table| canonical_form(&FiniteRack::from_table_unchecked(table, basepoint)).table)
        .collect();
    Ok(canon
        .into_iter()
        .map(|table| FiniteRack::from_table_unchecked(table, basepoint))
        .collect())
}

/// Every rack (resp. quandle) of order `1..=n`, one per isomorphism class.
pub fn racks_up_to(n: usize, flavor: RackFlavor) -> Vec<FiniteRack> {
    (1..=n)
        .flat_map(|k| enumerate_racks(k, flavor, n.max(DEFAULT_ENUMERATION_CAP)).unwrap())
        .collect()
}

fn column_admissible(b: usize, p: &Perm, flavor: RackFlavor) -> bool {
    match flavor {
        RackFlavor::Racks => true,
        RackFlavor::Quandles => p.apply(b) == b,
        RackFlavor::Pointed => {
            // 0 ◁ x = 0 for every column; column 0 itself is pinned separately
            p.apply(0) == 0 && (b != 0 || p.is_identity())
        }
    }
}

/// Assigns a column and closes under the conjugation constraint. Returns
/// false on contradiction.
fn assign_column(state: &mut Vec<Option<Perm>>, b: usize, p: Perm, flavor: RackFlavor) -> bool {
    if let Some(existing) = &state[b] {
        return *existing == p;
    }
    if !column_admissible(b, &p, flavor) {
        return false;
    }
    state[b] = Some(p);
    // propagate: for every assigned pair (x, y), the column of x ◁ y is
    // determined
    loop {
        let mut pending: Option<(usize, Perm)> = None;
        'scan: for x in 0..state.len() {
            for y in 0..state.len() {
                let (fx, fy) = match (&state[x], &state[y]) {
                    (Some(fx), Some(fy)) => (fx, fy),
                    _ => continue,
                };
                let target = fy.apply(x);
                let required = fx.conjugate_by(fy);
                match &state[target] {
                    Some(existing) => {
                        if *existing != required {
                            return false;
                        }
                    }
                    None => {
                        pending = Some((target, required));
                        break 'scan;
                    }
                }
            }
        }
        match pending {
            Some((target, required)) => {
                if !column_admissible(target, &required, flavor) {
                    return false;
                }
                state[target] = Some(required);
            }
            None => return true,
        }
    }
}

fn search(
    state: &mut Vec<Option<Perm>>,
    perms: &[Perm],
    flavor: RackFlavor,
    out: &mut Vec<Vec<Vec<usize>>>,
) {
    let next = match state.iter().position(|c| c.is_none()) {
        Some(i) => i,
        None => {
            let n = state.len();
            let mut table = vec![vec![0; n]; n];
            for (b, col) in state.iter().enumerate() {
                let col = col.as_ref().unwrap();
                for a in 0..n {
                    table[a][b] = col.apply(a);
                }
            }
            out.push(table);
            return;
        }
    };
    for p in perms {
        let mut branch = state.clone();
        if assign_column(&mut branch, next, p.clone(), flavor) {
            search(&mut branch, perms, flavor, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rack::{are_isomorphic, validate_rack};

    /// Independent definitional checker used as the enumeration oracle:
    /// filters all n^(n*n) tables and counts isomorphism classes by orbit
    /// counting under relabelling, with no canonical-form machinery.
    fn oracle_count(n: usize, quandles: bool) -> usize {
        let mut tables: Vec<Vec<Vec<usize>>> = Vec::new();
        let cells = n * n;
        let total = n.pow(cells as u32);
        'outer: for code in 0..total {
            let mut c = code;
            let mut table = vec![vec![0; n]; n];
            for a in 0..n {
                for b in 0..n {
                    table[a][b] = c % n;
                    c /= n;
                }
            }
            for b in 0..n {
                let mut seen = vec![false; n];
                for a in 0..n {
                    seen[table[a][b]] = true;
                }
                if seen.contains(&false) {
                    continue 'outer;
                }
            }
            for a in 0..n {
                for b in 0..n {
                    for cc in 0..n {
                        if table[table[a][b]][cc] != table[table[a][cc]][table[b][cc]] {
                            continue 'outer;
                        }
                    }
                }
            }
            if quandles && (0..n).any(|a| table[a][a] != a) {
                continue 'outer;
            }
            tables.push(table);
        }
        // orbit counting under simultaneous relabelling
        let mut remaining: Vec<Vec<Vec<usize>>> = tables;
        let mut classes = 0;
        while let Some(rep) = remaining.pop() {
            classes += 1;
            let rack = FiniteRack::from_table_unchecked(rep, None);
            let orbit: Vec<Vec<Vec<usize>>> = Perm::all(n)
                .into_iter()
                .map(|s| rack.relabel(&s).table)
                .collect();
            remaining.retain(|t| !orbit.contains(t));
        }
        classes
    }

    #[test]
    fn order_one() {
        assert_eq!(enumerate_racks(1, RackFlavor::Racks, 5).unwrap().len(), 1);
    }

    #[test]
    fn order_three_counts_match_oracle() {
        let racks = enumerate_racks(3, RackFlavor::Racks, 5).unwrap();
        assert_eq!(racks.len(), oracle_count(3, false));
        assert_eq!(racks.len(), 6);
        let quandles = enumerate_racks(3, RackFlavor::Quandles, 5).unwrap();
        assert_eq!(quandles.len(), oracle_count(3, true));
        assert_eq!(quandles.len(), 3);
    }

    #[test]
    fn order_two_counts_match_oracle() {
        assert_eq!(
            enumerate_racks(2, RackFlavor::Racks, 5).unwrap().len(),
            oracle_count(2, false)
        );
    }

    #[test]
    fn outputs_are_valid_and_pairwise_non_isomorphic() {
        for n in 1..=4 {
            let racks = enumerate_racks(n, RackFlavor::Racks, 5).unwrap();
            for r in &racks {
                assert!(validate_rack(&r.table, None).unwrap().valid);
            }
            for i in 0..racks.len() {
                for j in i + 1..racks.len() {
                    assert!(!are_isomorphic(&racks[i], &racks[j]));
                }
            }
        }
    }

    #[test]
    fn quandles_satisfy_idempotence() {
        for q in enumerate_racks(4, RackFlavor::Quandles, 5).unwrap() {
            assert!(q.is_quandle());
        }
    }

    #[test]
    fn pointed_racks_have_units() {
        let pointed = enumerate_racks(3, RackFlavor::Pointed, 5).unwrap();
        assert!(!pointed.is_empty());
        for p in &pointed {
            assert_eq!(p.basepoint, Some(0));
            assert!(p.validate().unwrap().valid);
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            enumerate_racks(6, RackFlavor::Racks, 5),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn deterministic_output_order() {
        let a = enumerate_racks(3, RackFlavor::Racks, 5).unwrap();
        let b = enumerate_racks(3, RackFlavor::Racks, 5).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    #[ignore = "order 5 takes a while in debug builds"]
    fn order_five_is_internally_consistent() {
        let racks = enumerate_racks(5, RackFlavor::Racks, 5).unwrap();
        assert!(racks.len() > 100);
        for r in &racks {
            assert!(validate_rack(&r.table, None).unwrap().valid);
        }
    }
}
