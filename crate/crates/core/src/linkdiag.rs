use crate::error::{Error, Result};
use crate::rack::FiniteRack;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// One crossing of an arc-labelled diagram. `arcs = [a, b, c, d]` lists
/// counterclockwise from the incoming under-arc: `a` in, `c` out, and the
/// over-arc on both remaining slots (`d = b`, arcs run underpass to
/// underpass, so the over-strand is not cut). `sign` is `+1` or `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossing {
    pub arcs: [usize; 4],
    pub sign: i8,
}

impl Crossing {
    pub fn under_in(&self) -> usize {
        self.arcs[0]
    }
    pub fn over(&self) -> usize {
        self.arcs[1]
    }
    pub fn under_out(&self) -> usize {
        self.arcs[2]
    }
}

/// A link diagram over arc labels, with its components (arcs connected
/// through underpasses).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkDiagram {
    pub crossings: Vec<Crossing>,
    pub arcs: Vec<usize>,
    pub components: Vec<Vec<usize>>,
}

/// Checks arc bookkeeping: over slots agree, and every arc either starts at
/// exactly one crossing (as under-out) and ends at exactly one (as
/// under-in), or closes up with no underpass at all.
fn validate_bookkeeping(crossings: &[Crossing], declared_loops: &[usize]) -> Result<LinkDiagram> {
    let mut arcs: Vec<usize> = declared_loops.to_vec();
    for c in crossings {
        if c.sign != 1 && c.sign != -1 {
            return Err(Error::Parse {
                pos: 0,
                msg: format!("crossing sign must be ±1, got {}", c.sign),
            });
        }
        if c.arcs[3] != c.arcs[1] {
            return Err(Error::Parse {
                pos: 0,
                msg: format!(
                    "over-strand slots disagree: {} vs {}",
                    c.arcs[1], c.arcs[3]
                ),
            });
        }
        arcs.extend_from_slice(&c.arcs);
    }
    arcs.sort_unstable();
    arcs.dedup();
    if arcs.iter().any(|&a| a == 0) {
        return Err(Error::Parse {
            pos: 0,
            msg: "arc labels start at 1".into(),
        });
    }
    let mut in_count: BTreeMap<usize, usize> = BTreeMap::new();
    let mut out_count: BTreeMap<usize, usize> = BTreeMap::new();
    for c in crossings {
        *in_count.entry(c.under_in()).or_default() += 1;
        *out_count.entry(c.under_out()).or_default() += 1;
    }
    for &a in &arcs {
        let (i, o) = (
            in_count.get(&a).copied().unwrap_or(0),
            out_count.get(&a).copied().unwrap_or(0),
        );
        if !((i == 1 && o == 1) || (i == 0 && o == 0)) {
            return Err(Error::Parse {
                pos: 0,
                msg: format!("arc {a} dangles: {i} under-in, {o} under-out"),
            });
        }
    }
    // components: arcs joined through underpasses
    let index: BTreeMap<usize, usize> = arcs.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let mut parent: Vec<usize> = (0..arcs.len()).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    for c in crossings {
        let (a, b) = (index[&c.under_in()], index[&c.under_out()]);
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut comps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &a) in arcs.iter().enumerate() {
        comps.entry(find(&mut parent, i)).or_default().push(a);
    }
    Ok(LinkDiagram {
        crossings: crossings.to_vec(),
        arcs,
        components: comps.into_values().collect(),
    })
}

/// Parses a PD-style code. Terms are `X[a,b,c,d]` (optionally `X+`/`X-` to
/// set the sign; default positive) and `O[k]` for a crossingless loop; the
/// whole code `[]` is the one-arc unknot. Terms may be separated by spaces
/// or commas.
pub fn parse_pd(code: &str) -> Result<LinkDiagram> {
    let src: Vec<char> = code.chars().collect();
    let mut pos = 0;
    let mut crossings = Vec::new();
    let mut loops = Vec::new();
    let skip_ws = |pos: &mut usize| {
        while *pos < src.len() && (src[*pos].is_whitespace() || src[*pos] == ',') {
            *pos += 1;
        }
    };
    skip_ws(&mut pos);
    if pos < src.len() && src[pos] == '[' && pos + 1 < src.len() && src[pos + 1] == ']' {
        let mut end = pos + 2;
        skip_ws(&mut end);
        if end == src.len() {
            return validate_bookkeeping(&[], &[1]);
        }
    }
    while pos < src.len() {
        skip_ws(&mut pos);
        if pos >= src.len() {
            break;
        }
        match src[pos] {
            'X' => {
                pos += 1;
                let sign = match src.get(pos) {
                    Some('+') => {
                        pos += 1;
                        1
                    }
                    Some('-') => {
                        pos += 1;
                        -1
                    }
                    _ => 1,
                };
                let nums = parse_bracketed(&src, &mut pos, 4)?;
                crossings.push(Crossing {
                    arcs: [nums[0], nums[1], nums[2], nums[3]],
                    sign,
                });
            }
            'O' => {
                pos += 1;
                let nums = parse_bracketed(&src, &mut pos, 1)?;
                loops.push(nums[0]);
            }
            other => {
                return Err(Error::Parse {
                    pos,
                    msg: format!("expected 'X' or 'O', found {other:?}"),
                })
            }
        }
    }
    if crossings.is_empty() && loops.is_empty() {
        return Err(Error::Parse {
            pos: 0,
            msg: "empty code (use [] for the unknot)".into(),
        });
    }
    validate_bookkeeping(&crossings, &loops)
}

fn parse_bracketed(src: &[char], pos: &mut usize, count: usize) -> Result<Vec<usize>> {
    if src.get(*pos) != Some(&'[') {
        return Err(Error::Parse {
            pos: *pos,
            msg: "expected '['".into(),
        });
    }
    *pos += 1;
    let mut nums = Vec::with_capacity(count);
    for k in 0..count {
        if k > 0 {
            while src.get(*pos).is_some_and(|c| c.is_whitespace()) {
                *pos += 1;
            }
            if src.get(*pos) != Some(&',') {
                return Err(Error::Parse {
                    pos: *pos,
                    msg: "expected ','".into(),
                });
            }
            *pos += 1;
        }
        while src.get(*pos).is_some_and(|c| c.is_whitespace()) {
            *pos += 1;
        }
        let start = *pos;
        while src.get(*pos).is_some_and(char::is_ascii_digit) {
            *pos += 1;
        }
        if start == *pos {
            return Err(Error::Parse {
                pos: *pos,
                msg: "expected a number".into(),
            });
        }
        let text: String = src[start..*pos].iter().collect();
        nums.push(text.parse::<usize>().map_err(|e| Error::Parse {
            pos: start,
            msg: e.to_string(),
        })?);
    }
    while src.get(*pos).is_some_and(|c| c.is_whitespace()) {
        *pos += 1;
    }
    if src.get(*pos) != Some(&']') {
        return Err(Error::Parse {
            pos: *pos,
            msg: "expected ']'".into(),
        });
    }
    *pos += 1;
    Ok(nums)
}

/// Builds the diagram of a braid closure. Letters are `±i` for the `i`-th
/// elementary braid (1-based, `i < strands`); positive means the strand
/// moving up from position `i` passes over. Arcs are created at underpasses
/// and identified around the closure.
pub fn diagram_from_braid(word: &[i32], strands: usize) -> Result<LinkDiagram> {
    if strands == 0 {
        return Err(Error::Malformed("braid needs at least one strand".into()));
    }
    for &letter in word {
        let i = letter.unsigned_abs() as usize;
        if letter == 0 || i >= strands {
            return Err(Error::Malformed(format!(
                "braid letter {letter} outside ±1..±{}",
                strands - 1
            )));
        }
    }
    let mut cur: Vec<usize> = (1..=strands).collect();
    let mut fresh = strands;
    let mut crossings = Vec::with_capacity(word.len());
    for &letter in word {
        let p = letter.unsigned_abs() as usize - 1;
        fresh += 1;
        if letter > 0 {
            // strand at p passes over; the one at p+1 is cut
            let over = cur[p];
            let under = cur[p + 1];
            crossings.push(Crossing {
                arcs: [under, over, fresh, over],
                sign: 1,
            });
            cur[p] = fresh;
            cur[p + 1] = over;
        } else {
            let over = cur[p + 1];
            let under = cur[p];
            crossings.push(Crossing {
                arcs: [under, over, fresh, over],
                sign: -1,
            });
            cur[p] = over;
            cur[p + 1] = fresh;
        }
    }
    // close up: the arc leaving position p is the arc that entered it
    let mut parent: Vec<usize> = (0..=fresh).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    for p in 0..strands {
        let (a, b) = (find(&mut parent, cur[p]), find(&mut parent, p + 1));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut canonical: BTreeMap<usize, usize> = BTreeMap::new();
    let mut rename = |label: usize, parent: &mut Vec<usize>, canonical: &mut BTreeMap<usize, usize>| {
        let root = find(parent, label);
        let next = canonical.len() + 1;
        *canonical.entry(root).or_insert(next)
    };
    // deterministic relabelling: first by strand start, then crossing order
    let mut loops = Vec::new();
    for p in 1..=strands {
        let label = rename(p, &mut parent, &mut canonical);
        let involved = crossings
            .iter()
            .any(|c| c.arcs.iter().any(|&a| find(&mut parent, a) == find(&mut parent, p)));
        if !involved {
            loops.push(label);
        }
    }
    let crossings: Vec<Crossing> = crossings
        .iter()
        .map(|c| {
            let a = rename(c.arcs[0], &mut parent, &mut canonical);
            let b = rename(c.arcs[1], &mut parent, &mut canonical);
            let cc = rename(c.arcs[2], &mut parent, &mut canonical);
            Crossing {
                arcs: [a, b, cc, b],
                sign: c.sign,
            }
        })
        .collect();
    loops.sort_unstable();
    loops.dedup();
    match validate_bookkeeping(&crossings, &loops) {
        Ok(d) => Ok(d),
        Err(Error::Parse { msg, .. }) => Err(Error::Inconsistency(format!(
            "braid closure produced bad bookkeeping: {msg}"
        ))),
        Err(e) => Err(e),
    }
}

/// A relation `a ◁ b = c` between arc generators (`inverse` flags
/// `a ◁⁻¹ b = c`, from negative crossings).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringRelation {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub inverse: bool,
}

/// A presentation of the fundamental rack of a framed link diagram: one
/// generator per arc and one relation per crossing (blackboard framing).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RackPresentation {
    pub labels: Vec<usize>,
    pub relations: Vec<ColoringRelation>,
}

impl RackPresentation {
    pub fn generators(&self) -> usize {
        self.labels.len()
    }
}

/// Reads the Wirtinger-style relations off the crossings: at a positive
/// crossing with over-arc `b`, incoming under-arc `a` and outgoing `c`, the
/// relation is `a ◁ b = c`; negative crossings carry the inverse flag.
pub fn fundamental_rack_presentation(d: &LinkDiagram) -> RackPresentation {
    let index: BTreeMap<usize, usize> = d.arcs.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let relations = d
        .crossings
        .iter()
        .map(|c| ColoringRelation {
            a: index[&c.under_in()],
            b: index[&c.over()],
            c: index[&c.under_out()],
            inverse: c.sign < 0,
        })
        .collect();
    RackPresentation {
        labels: d.arcs.clone(),
        relations,
    }
}

/// Counts rack colorings: assignments of rack elements to generators
/// satisfying every relation, by exact backtracking (parallel over the
/// first generator's color).
pub fn count_colorings(p: &RackPresentation, rack: &FiniteRack) -> Result<u64> {
    for rel in &p.relations {
        if rel.a >= p.generators() || rel.b >= p.generators() || rel.c >= p.generators() {
            return Err(Error::Malformed("relation references a missing generator".into()));
        }
    }
    if p.generators() == 0 {
        return Ok(1);
    }
    let count = (0..rack.size)
        .into_par_iter()
        .map(|first| {
            let mut colors = vec![usize::MAX; p.generators()];
            colors[0] = first;
            branch(p, rack, &mut colors, 1)
        })
        .sum();
    Ok(count)
}

fn branch(p: &RackPresentation, rack: &FiniteRack, colors: &mut Vec<usize>, next: usize) -> u64 {
    let consistent = p.relations.iter().all(|rel| {
        let (a, b, c) = (colors[rel.a], colors[rel.b], colors[rel.c]);
        if a == usize::MAX || b == usize::MAX || c == usize::MAX {
            return true;
        }
        if rel.inverse {
            rack.op(c, b) == a
        } else {
            rack.op(a, b) == c
        }
    });
    if !consistent {
        return 0;
    }
    if next == colors.len() {
        return 1;
    }
    let mut total = 0;
    for color in 0..rack.size {
        colors[next] = color;
        total += branch(p, rack, colors, next + 1);
    }
    colors[next] = usize::MAX;
    total
}

/// Checks that coloring counts agree across each pair of diagrams; pairs
/// are expected to be related by framed (Reidemeister II/III) rewrites.
pub fn coloring_invariance_check(
    pairs: &[(LinkDiagram, LinkDiagram)],
    rack: &FiniteRack,
) -> Result<bool> {
    for (before, after) in pairs {
        let c1 = count_colorings(&fundamental_rack_presentation(before), rack)?;
        let c2 = count_colorings(&fundamental_rack_presentation(after), rack)?;
        if c1 != c2 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The standard trefoil diagram (closure of the positive 2-braid cubed).
pub fn trefoil() -> LinkDiagram {
    diagram_from_braid(&[1, 1, 1], 2).expect("trefoil braid closes")
}

/// The Hopf link (closure of the positive 2-braid squared).
pub fn hopf_link() -> LinkDiagram {
    diagram_from_braid(&[1, 1], 2).expect("hopf braid closes")
}

/// Framed rewrite pairs bundled for the invariance suite: the trefoil
/// against its R2-stabilized diagram, and a 3-strand trefoil diagram
/// against its R3 rewrite.
pub fn bundled_rewrite_pairs() -> Vec<(LinkDiagram, LinkDiagram)> {
    vec![
        (
            trefoil(),
            diagram_from_braid(&[1, 1, 1, 1, -1], 2).expect("R2 pair"),
        ),
        (
            diagram_from_braid(&[1, 2, 1, 2], 3).expect("R3 base"),
            diagram_from_braid(&[2, 1, 2, 2], 3).expect("R3 rewrite"),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force coloring oracle: tries every assignment directly.
    fn oracle_count(p: &RackPresentation, rack: &FiniteRack) -> u64 {
        let g = p.generators();
        let total = rack.size.pow(g as u32);
        let mut count = 0;
        for code in 0..total {
            let mut colors = Vec::with_capacity(g);
            let mut c = code;
            for _ in 0..g {
                colors.push(c % rack.size);
                c /= rack.size;
            }
            let ok = p.relations.iter().all(|rel| {
                if rel.inverse {
                    rack.op(colors[rel.c], colors[rel.b]) == colors[rel.a]
                } else {
                    rack.op(colors[rel.a], colors[rel.b]) == colors[rel.c]
                }
            });
            if ok {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn unknot_parses() {
        let d = parse_pd("[]").unwrap();
        assert_eq!(d.arcs, vec![1]);
        assert!(d.crossings.is_empty());
        assert_eq!(d.components.len(), 1);
    }

    #[test]
    fn trefoil_has_three_arcs_and_positive_crossings() {
        let d = trefoil();
        assert_eq!(d.arcs.len(), 3);
        assert_eq!(d.crossings.len(), 3);
        assert!(d.crossings.iter().all(|c| c.sign == 1));
        assert_eq!(d.components.len(), 1);
        // the same diagram via the text form
        let t = parse_pd("X[2,1,3,1] X[1,3,2,3] X[3,2,1,2]").unwrap();
        assert_eq!(t.crossings.len(), 3);
        assert_eq!(t.arcs, d.arcs);
    }

    #[test]
    fn dangling_arc_is_a_parse_error() {
        assert!(matches!(
            parse_pd("X[1,2,3,2]"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn bad_over_slots_are_rejected() {
        assert!(matches!(
            parse_pd("X[1,2,3,4]"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn trefoil_presentation_relations() {
        let p = fundamental_rack_presentation(&trefoil());
        assert_eq!(p.generators(), 3);
        assert_eq!(p.relations.len(), 3);
        // cyclically a ◁ b = c over the three arcs
        for rel in &p.relations {
            assert!(!rel.inverse);
            assert_ne!(rel.a, rel.b);
            assert_ne!(rel.b, rel.c);
            assert_ne!(rel.a, rel.c);
        }
    }

    #[test]
    fn hopf_link_presentation() {
        let d = hopf_link();
        assert_eq!(d.arcs.len(), 2);
        assert_eq!(d.components.len(), 2);
        let p = fundamental_rack_presentation(&d);
        assert_eq!(p.relations.len(), 2);
    }

    #[test]
    fn unknot_colorings_count_the_rack() {
        let p = fundamental_rack_presentation(&parse_pd("[]").unwrap());
        for rack in [FiniteRack::trivial(5), FiniteRack::dihedral(3)] {
            assert_eq!(count_colorings(&p, &rack).unwrap(), rack.size as u64);
        }
    }

    #[test]
    fn trefoil_colorings_match_oracle() {
        let p = fundamental_rack_presentation(&trefoil());
        let d3 = FiniteRack::dihedral(3);
        assert_eq!(count_colorings(&p, &d3).unwrap(), oracle_count(&p, &d3));
        assert_eq!(count_colorings(&p, &d3).unwrap(), 9);
        let t3 = FiniteRack::trivial(3);
        assert_eq!(count_colorings(&p, &t3).unwrap(), oracle_count(&p, &t3));
    }

    #[test]
    fn counts_are_bounded_by_free_colorings() {
        let d3 = FiniteRack::dihedral(3);
        for d in [trefoil(), hopf_link()] {
            let p = fundamental_rack_presentation(&d);
            let count = count_colorings(&p, &d3).unwrap();
            assert!(count <= (d3.size as u64).pow(p.generators() as u32));
        }
    }

    #[test]
    fn rewrite_pairs_preserve_counts() {
        let d3 = FiniteRack::dihedral(3);
        assert!(coloring_invariance_check(&bundled_rewrite_pairs(), &d3).unwrap());
        // and against the oracle on both sides of each pair
        for (a, b) in bundled_rewrite_pairs() {
            let pa = fundamental_rack_presentation(&a);
            let pb = fundamental_rack_presentation(&b);
            assert_eq!(oracle_count(&pa, &d3), oracle_count(&pb, &d3));
        }
    }

    #[test]
    fn relabelling_does_not_change_counts() {
        // the same trefoil with arc labels permuted in the text code
        let d1 = parse_pd("X[2,1,3,1] X[1,3,2,3] X[3,2,1,2]").unwrap();
        let d2 = parse_pd("X[3,2,1,2] X[2,1,3,1] X[1,3,2,3]").unwrap();
        let d3 = FiniteRack::dihedral(3);
        let c1 = count_colorings(&fundamental_rack_presentation(&d1), &d3).unwrap();
        let c2 = count_colorings(&fundamental_rack_presentation(&d2), &d3).unwrap();
        assert_eq!(c1, c2);
    }

    #[test]
    fn kink_preserves_quandle_counts_but_not_rack_counts() {
        let kinked = diagram_from_braid(&[1, 1, 1, 2], 3).unwrap();
        let d3 = FiniteRack::dihedral(3);
        let base = count_colorings(&fundamental_rack_presentation(&trefoil()), &d3).unwrap();
        let with_kink = count_colorings(&fundamental_rack_presentation(&kinked), &d3).unwrap();
        assert_eq!(base, with_kink);
        // the cyclic 2-element rack is not a quandle: the kink changes the count
        let r2 = FiniteRack::two_element_cyclic();
        let base = count_colorings(&fundamental_rack_presentation(&trefoil()), &r2).unwrap();
        let with_kink = count_colorings(&fundamental_rack_presentation(&kinked), &r2).unwrap();
        assert_ne!(base, with_kink);
    }

    #[test]
    fn negative_crossings_use_the_inverse_relation() {
        let d = diagram_from_braid(&[-1, -1], 2).unwrap();
        let p = fundamental_rack_presentation(&d);
        assert!(p.relations.iter().all(|r| r.inverse));
        let d3 = FiniteRack::dihedral(3);
        assert_eq!(count_colorings(&p, &d3).unwrap(), oracle_count(&p, &d3));
    }
}
