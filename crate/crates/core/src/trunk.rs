use crate::action::{validate_action, RackAction};
use crate::crossmod::{validate_crossed_module, CrossedModule};
use crate::error::{Error, Result};
use crate::rack::FiniteRack;
use crate::report::ValidationReport;
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
}

/// A trunk: a directed multigraph with a set of preferred squares. Each
/// square is a quadruple of edge ids `[a, b, c, d]` with fixed side roles
///
/// ```text
///      C --c--> D
///      ^        ^
///      b        d
///      |        |
///      A --a--> B
/// ```
///
/// so `a` is the bottom, `b` the left, `c` the top and `d` the right side.
/// `identities`, when present, give the chosen edge `e_A : A → A` per
/// vertex, and every edge `a : A → B` must have `(a, e_A, a, e_B)`
/// preferred.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trunk {
    pub vertices: usize,
    pub edges: Vec<Edge>,
    pub squares: Vec<[usize; 4]>,
    pub identities: Option<Vec<usize>>,
}

impl Trunk {
    pub fn shape_check(&self) -> Result<()> {
        for e in &self.edges {
            if e.src >= self.vertices || e.dst >= self.vertices {
                return Err(Error::Malformed("edge endpoint out of range".into()));
            }
        }
        for sq in &self.squares {
            if sq.iter().any(|&e| e >= self.edges.len()) {
                return Err(Error::Malformed("square side out of range".into()));
            }
        }
        if let Some(ids) = &self.identities {
            if ids.len() != self.vertices || ids.iter().any(|&e| e >= self.edges.len()) {
                return Err(Error::Malformed("identities do not give one edge per vertex".into()));
            }
        }
        Ok(())
    }
}

/// Structural validation: square sides must close up into the oriented
/// square shape, and identity edges (when present) must be loops with their
/// degenerate squares preferred.
pub fn validate_trunk(t: &Trunk) -> Result<ValidationReport> {
    t.shape_check()?;
    let mut report = ValidationReport::new();
    for (k, &[a, b, c, d]) in t.squares.iter().enumerate() {
        let (ea, eb, ec, ed) = (t.edges[a], t.edges[b], t.edges[c], t.edges[d]);
        if ea.src != eb.src || eb.dst != ec.src || ea.dst != ed.src || ec.dst != ed.dst {
            report.record("square_shape", &[k, a, b, c, d]);
        }
    }
    if let Some(ids) = &t.identities {
        let square_set: HashSet<[usize; 4]> = t.squares.iter().copied().collect();
        for (v, &e) in ids.iter().enumerate() {
            if t.edges[e].src != v || t.edges[e].dst != v {
                report.record("identity_is_loop", &[v, e]);
            }
        }
        for (a, edge) in t.edges.iter().enumerate() {
            let sq = [a, ids[edge.src], a, ids[edge.dst]];
            if !square_set.contains(&sq) {
                report.record("identity_square_preferred", &[a]);
            }
        }
    }
    Ok(report)
}

/// The two corner axioms. C1: every pair of edges `a : A → B`, `b : A → C`
/// bounds exactly one preferred square as bottom and left side. C2: every
/// corner configuration of three preferred squares extends to a cube of
/// preferred squares.
pub fn validate_corner(t: &Trunk) -> Result<ValidationReport> {
    let mut report = validate_trunk(t)?;
    if !report.valid {
        return Ok(report);
    }
    let mut by_bottom_left: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    let mut by_bottom: HashMap<usize, Vec<usize>> = HashMap::new();
    for (k, &[a, b, _, _]) in t.squares.iter().enumerate() {
        by_bottom_left.entry((a, b)).or_default().push(k);
        by_bottom.entry(a).or_default().push(k);
    }
    let mut edges_from: HashMap<usize, Vec<usize>> = HashMap::new();
    for (e, edge) in t.edges.iter().enumerate() {
        edges_from.entry(edge.src).or_default().push(e);
    }
    for a in 0..t.edges.len() {
        for b in 0..t.edges.len() {
            if t.edges[a].src != t.edges[b].src {
                continue;
            }
            match by_bottom_left.get(&(a, b)).map_or(0, Vec::len) {
                1 => {}
                0 => report.record("c1_no_square", &[a, b]),
                _ => report.record("c1_square_not_unique", &[a, b]),
            }
        }
    }
    if !report.valid {
        return Ok(report);
    }
    let square_set: HashSet<[usize; 4]> = t.squares.iter().copied().collect();
    let empty: Vec<usize> = Vec::new();
    for (k1, &[a, b, c1, d1]) in t.squares.iter().enumerate() {
        for &k2 in by_bottom.get(&d1).unwrap_or(&empty) {
            let [_, left2, top2, right2] = t.squares[k2];
            for &k3 in by_bottom.get(&c1).unwrap_or(&empty) {
                let [_, left3, top3, right3] = t.squares[k3];
                if right3 != right2 {
                    continue;
                }
                // complete the cube: an edge x from the base corner with
                // squares (a, x, u, left2), (b, x, v, left3) and
                // (u, v, top3, top2) all preferred
                let base = t.edges[a].src;
                let found = edges_from.get(&base).unwrap_or(&empty).iter().any(|&x| {
                    let p = by_bottom_left
                        .get(&(a, x))
                        .and_then(|v| v.first())
                        .map(|&k| t.squares[k]);
                    let q = by_bottom_left
                        .get(&(b, x))
                        .and_then(|v| v.first())
                        .map(|&k| t.squares[k]);
                    match (p, q) {
                        (Some([_, _, u, pr]), Some([_, _, v, qr])) => {
                            pr == left2 && qr == left3 && square_set.contains(&[u, v, top3, top2])
                        }
                        _ => false,
                    }
                });
                if !found {
                    report.record("c2_incomplete", &[k1, k2, k3]);
                }
            }
        }
    }
    Ok(report)
}

/// The rack trunk: one vertex, one edge per element, one preferred square
/// per ordered pair recording `a ◁ b` (bottom `a`, left `b`, top `a ◁ b`,
/// right `b`).
pub fn rack_trunk(rack: &FiniteRack) -> Trunk {
    let n = rack.size;
    let edges = vec![Edge { src: 0, dst: 0 }; n];
    let mut squares = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            squares.push([a, b, rack.op(a, b), b]);
        }
    }
    Trunk {
        vertices: 1,
        edges,
        squares,
        identities: rack.basepoint.map(|e| vec![e]),
    }
}

/// Edge id of `(x, r)` in an action trunk over a rack of size `nr`.
pub fn action_edge(nr: usize, x: usize, r: usize) -> usize {
    x * nr + r
}

/// The action rack trunk of an `R`-set `X`: vertices `X`, an edge
/// `(x, r) : x → x·r` per pair, and a preferred square per `(x, r, r')`
/// with bottom `(x, r)`, left `(x, r')`, top `(x·r', r ◁ r')` and right
/// `(x·r, r')`.
pub fn action_rack_trunk(a: &RackAction) -> Result<Trunk> {
    let report = validate_action(a)?;
    if !report.valid {
        let v = report.first().unwrap();
        return Err(Error::Precondition {
            condition: format!("action axiom `{}`", v.law),
            witness: v.witness.clone(),
        });
    }
    let nr = a.rack.size;
    let mut edges = Vec::with_capacity(a.set_size * nr);
    for x in 0..a.set_size {
        for r in 0..nr {
            edges.push(Edge {
                src: x,
                dst: a.apply(x, r),
            });
        }
    }
    let mut squares = Vec::with_capacity(a.set_size * nr * nr);
    for x in 0..a.set_size {
        for r in 0..nr {
            for rp in 0..nr {
                squares.push([
                    action_edge(nr, x, r),
                    action_edge(nr, x, rp),
                    action_edge(nr, a.apply(x, rp), a.rack.op(r, rp)),
                    action_edge(nr, a.apply(x, r), rp),
                ]);
            }
        }
    }
    // identities exist when the rack is pointed and its unit acts trivially
    let identities = a.rack.basepoint.and_then(|e| {
        (0..a.set_size)
            .all(|x| a.apply(x, e) == x)
            .then(|| (0..a.set_size).map(|x| action_edge(nr, x, e)).collect())
    });
    Ok(Trunk {
        vertices: a.set_size,
        edges,
        squares,
        identities,
    })
}

/// The extended rack trunk: the action trunk of the rack acting on itself.
pub fn extended_rack_trunk(rack: &FiniteRack) -> Result<Trunk> {
    action_rack_trunk(&RackAction::self_action(rack))
}

/// The two binary operations a corner trunk carries on its edges, read off
/// the C1 squares, together with the verification of the three birack
/// identities on all triples of edges with a common source.
#[derive(Debug, Clone)]
pub struct CornerOps {
    lhd: HashMap<(usize, usize), usize>,
    rhd: HashMap<(usize, usize), usize>,
}

impl CornerOps {
    /// `a ◁ b`: the top edge of the square with bottom `a`, left `b`.
    pub fn lhd(&self, a: usize, b: usize) -> Option<usize> {
        self.lhd.get(&(a, b)).copied()
    }

    /// `a ▷ b`: the right edge of the square with bottom `a`, left `b`.
    pub fn rhd(&self, a: usize, b: usize) -> Option<usize> {
        self.rhd.get(&(a, b)).copied()
    }
}

pub fn corner_ops(t: &Trunk) -> Result<CornerOps> {
    let report = validate_corner(t)?;
    if !report.valid {
        let v = report.first().unwrap();
        return Err(Error::Precondition {
            condition: format!("corner axiom `{}`", v.law),
            witness: v.witness.clone(),
        });
    }
    let mut lhd = HashMap::new();
    let mut rhd = HashMap::new();
    for &[a, b, c, d] in &t.squares {
        lhd.insert((a, b), c);
        rhd.insert((a, b), d);
    }
    let ops = CornerOps { lhd, rhd };
    // the three birack identities of a corner trunk, over every triple of
    // edges with a common source; any failure means C2 was violated upstream
    for a in 0..t.edges.len() {
        for b in 0..t.edges.len() {
            if t.edges[a].src != t.edges[b].src {
                continue;
            }
            for c in 0..t.edges.len() {
                if t.edges[a].src != t.edges[c].src {
                    continue;
                }
                let check = (|| -> Option<bool> {
                    let i1 = ops.lhd(ops.lhd(a, b)?, ops.rhd(b, c)?)?
                        == ops.lhd(ops.lhd(a, c)?, ops.lhd(b, c)?)?;
                    let i2 = ops.rhd(ops.rhd(b, c)?, ops.rhd(b, a)?)?
                        == ops.rhd(ops.lhd(b, c)?, ops.rhd(c, a)?)?;
                    let i3 = ops.lhd(ops.rhd(b, a)?, ops.rhd(b, c)?)?
                        == ops.rhd(ops.lhd(b, c)?, ops.lhd(a, c)?)?;
                    Some(i1 && i2 && i3)
                })();
                match check {
                    Some(true) => {}
                    _ => {
                        return Err(Error::Inconsistency(format!(
                            "birack identity fails on edges ({a}, {b}, {c})"
                        )))
                    }
                }
            }
        }
    }
    Ok(ops)
}

/// A map of trunks: a vertex map and an edge map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrunkMap {
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
}

/// Checks that the map preserves sources, targets, identities (when both
/// trunks have them) and preferred squares.
pub fn validate_trunk_map(map: &TrunkMap, src: &Trunk, dst: &Trunk) -> Result<ValidationReport> {
    src.shape_check()?;
    dst.shape_check()?;
    if map.vertex_map.len() != src.vertices || map.edge_map.len() != src.edges.len() {
        return Err(Error::Malformed("map sizes do not match the source trunk".into()));
    }
    if map.vertex_map.iter().any(|&v| v >= dst.vertices)
        || map.edge_map.iter().any(|&e| e >= dst.edges.len())
    {
        return Err(Error::Malformed("map value out of range".into()));
    }
    let mut report = ValidationReport::new();
    for (e, edge) in src.edges.iter().enumerate() {
        let image = dst.edges[map.edge_map[e]];
        if image.src != map.vertex_map[edge.src] || image.dst != map.vertex_map[edge.dst] {
            report.record("incidence_preserved", &[e]);
        }
    }
    if let (Some(src_ids), Some(dst_ids)) = (&src.identities, &dst.identities) {
        for v in 0..src.vertices {
            if map.edge_map[src_ids[v]] != dst_ids[map.vertex_map[v]] {
                report.record("identities_preserved", &[v]);
            }
        }
    }
    let dst_squares: HashSet<[usize; 4]> = dst.squares.iter().copied().collect();
    for (k, sq) in src.squares.iter().enumerate() {
        let image = [
            map.edge_map[sq[0]],
            map.edge_map[sq[1]],
            map.edge_map[sq[2]],
            map.edge_map[sq[3]],
        ];
        if !dst_squares.contains(&image) {
            report.record("squares_preserved", &[k]);
        }
    }
    Ok(report)
}

/// The trunkified form of a crossed module: the induced map from the action
/// trunk of `X` to the extended trunk of `R`, `x ↦ p(x)` on vertices and
/// `(x, r) ↦ (p(x), r)` on edges. Square preservation is exactly the
/// equivariance of `p`.
pub fn trunkified_from_crossmod(cm: &CrossedModule) -> Result<TrunkMap> {
    let report = validate_crossed_module(cm, None)?;
    if !report.valid {
        let v = report.first().unwrap();
        return Err(Error::Precondition {
            condition: format!("crossed module axiom `{}`", v.law),
            witness: v.witness.clone(),
        });
    }
    let nr = cm.target.size;
    let mut edge_map = Vec::with_capacity(cm.set_size * nr);
    for x in 0..cm.set_size {
        for r in 0..nr {
            edge_map.push(action_edge(nr, cm.p[x], r));
        }
    }
    Ok(TrunkMap {
        vertex_map: cm.p.clone(),
        edge_map,
    })
}

/// Recovers the crossed module from a trunk map between the action trunk of
/// a given action and the extended trunk of its rack. The map must have the
/// induced shape (`(x, r) ↦ (p(x), r)`, same `r`); square preservation then
/// certifies equivariance.
pub fn crossmod_from_trunkified(map: &TrunkMap, action: &RackAction) -> Result<CrossedModule> {
    let src = action_rack_trunk(action)?;
    let dst = extended_rack_trunk(&action.rack)?;
    if map.vertex_map.len() != action.set_size {
        return Err(Error::Malformed("vertex map does not match the acted set".into()));
    }
    let nr = action.rack.size;
    for x in 0..action.set_size {
        for r in 0..nr {
            let expected = action_edge(nr, map.vertex_map[x], r);
            if map.edge_map.get(action_edge(nr, x, r)) != Some(&expected) {
                return Err(Error::precondition("edge_map_has_induced_shape", &[x, r]));
            }
        }
    }
    let report = validate_trunk_map(map, &src, &dst)?;
    if !report.valid {
        let v = report.first().unwrap();
        return Err(Error::Precondition {
            condition: format!("trunk map law `{}`", v.law),
            witness: v.witness.clone(),
        });
    }
    let cm = CrossedModule {
        target: action.rack.clone(),
        set_size: action.set_size,
        action: action.action.clone(),
        p: map.vertex_map.clone(),
    };
    let check = validate_crossed_module(&cm, None)?;
    if !check.valid {
        return Err(Error::Inconsistency(
            "trunk map validated but the crossed module does not".into(),
        ));
    }
    Ok(cm)
}
