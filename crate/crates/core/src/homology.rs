use crate::crossmod::CrossedModule;
use crate::error::{Error, Result};
use crate::nerve::CubicalComplex;
use crate::permgroup::operator_image;
use crate::snf::smith_normal_form;
use serde::{Deserialize, Serialize};

/// Integer homology of one degree: the free rank and the torsion
/// coefficients (each greater than one, in divisibility order).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeHomology {
    pub k: usize,
    pub betti: usize,
    pub torsion: Vec<u128>,
}

/// `H_k` for every degree `k ≤ dim − 1` of the complex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyResult {
    pub degrees: Vec<DegreeHomology>,
}

/// Computes `H_k = ker ∂_k / im ∂_{k+1}` via Smith normal forms: the betti
/// number is `dim C_k − rank ∂_k − rank ∂_{k+1}` and the torsion of `H_k`
/// consists of the invariant factors of `∂_{k+1}` exceeding one.
pub fn homology(c: &CubicalComplex) -> Result<HomologyResult> {
    if c.dim == 0 {
        return Ok(HomologyResult {
            degrees: Vec::new(),
        });
    }
    let snfs: Vec<_> = c
        .boundaries
        .iter()
        .map(smith_normal_form)
        .collect::<Result<_>>()?;
    let mut degrees = Vec::with_capacity(c.dim);
    for k in 0..c.dim {
        let rank_k = if k == 0 { 0 } else { snfs[k].rank };
        let rank_k1 = snfs[k + 1].rank;
        let betti = c.cube_count(k) - rank_k - rank_k1;
        let torsion = snfs[k + 1]
            .factors
            .iter()
            .copied()
            .filter(|&d| d > 1)
            .collect();
        degrees.push(DegreeHomology { k, betti, torsion });
    }
    Ok(HomologyResult { degrees })
}

/// One point of the stabilizer comparison in [`covering_check`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizerPair {
    pub x: usize,
    pub stab_x_order: usize,
    pub stab_px_order: usize,
}

/// A group element (as its image list on `R ⊔ X`) fixing `x` but moving
/// `p(x)`, disproving the covering criterion for the given data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringWitness {
    pub x: usize,
    pub element_index: usize,
    pub images: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringCheck {
    pub covering: bool,
    pub group_order: usize,
    pub stabilizers: Vec<StabilizerPair>,
    pub witness: Option<CoveringWitness>,
}

/// The finite covering criterion: inside the operator image acting on
/// `R ⊔ X`, every stabilizer `Stab(x)` must be contained in `Stab(p(x))`.
/// For a valid crossed module this holds (equivariance transports the
/// action along `p`); the check runs on raw data, so a non-equivariant map
/// can fail and yields a witness element.
pub fn covering_check(cm: &CrossedModule, closure_cap: usize) -> Result<CoveringCheck> {
    cm.shape_check()?;
    let action = cm.rack_action();
    let bijective = (0..cm.target.size)
        .all(|r| {
            let mut seen = vec![false; cm.set_size];
            for x in 0..cm.set_size {
                seen[action.apply(x, r)] = true;
            }
            !seen.contains(&false)
        });
    if !bijective {
        return Err(Error::Malformed(
            "action table is not a family of bijections".into(),
        ));
    }
    let image = operator_image(&cm.target, &[&action], closure_cap)?;
    let offset = cm.target.size;
    let mut stabilizers = Vec::with_capacity(cm.set_size);
    for x in 0..cm.set_size {
        let point = offset + x;
        let target_point = cm.p[x];
        let mut stab_x = 0;
        let mut stab_px = 0;
        for (idx, perm) in image.elements.iter().enumerate() {
            let fixes_x = perm.apply(point) == point;
            if perm.apply(target_point) == target_point {
                stab_px += 1;
                if fixes_x {
                    stab_x += 1;
                }
            } else if fixes_x {
                return Ok(CoveringCheck {
                    covering: false,
                    group_order: image.order(),
                    stabilizers,
                    witness: Some(CoveringWitness {
                        x,
                        element_index: idx,
                        images: perm.images().to_vec(),
                    }),
                });
            }
        }
        stabilizers.push(StabilizerPair {
            x,
            stab_x_order: stab_x,
            stab_px_order: stab_px,
        });
    }
    Ok(CoveringCheck {
        covering: true,
        group_order: image.order(),
        stabilizers,
        witness: None,
    })
}
