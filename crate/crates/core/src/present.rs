use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::perm::Perm;
use crate::rack::FiniteRack;
use crate::snf::{row_in_lattice, smith_normal_form, IntMatrix};
use serde::{Deserialize, Serialize};
use std::collections::{HashSet, VecDeque};

/// A word over the generators of a presentation: nonzero signed indices,
/// `+(i+1)` for generator `i`, `-(i+1)` for its inverse.
pub type Word = Vec<i32>;

/// Cancels adjacent inverse pairs until none remain.
pub fn free_reduce(word: &[i32]) -> Word {
    let mut out: Word = Vec::with_capacity(word.len());
    for &letter in word {
        if out.last().is_some_and(|&prev| prev == -letter) {
            out.pop();
        } else {
            out.push(letter);
        }
    }
    out
}

pub fn invert_word(word: &[i32]) -> Word {
    word.iter().rev().map(|&l| -l).collect()
}

/// A finitely presented group: `generators` symbols and freely reduced
/// relator words.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupPresentation {
    pub generators: usize,
    pub relators: Vec<Word>,
}

impl GroupPresentation {
    pub fn check_word(&self, word: &[i32]) -> Result<()> {
        for &letter in word {
            if letter == 0 || letter.unsigned_abs() as usize > self.generators {
                return Err(Error::Malformed(format!(
                    "letter {letter} outside ±1..±{}",
                    self.generators
                )));
            }
        }
        Ok(())
    }

    pub fn exponent_vector(&self, word: &[i32]) -> Vec<i64> {
        let mut v = vec![0i64; self.generators];
        for &letter in word {
            let idx = letter.unsigned_abs() as usize - 1;
            v[idx] += if letter > 0 { 1 } else { -1 };
        }
        v
    }

    /// The relator exponent matrix (rows = relators).
    pub fn relator_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(self.relators.iter().map(|r| self.exponent_vector(r)).collect())
    }
}

/// The associated-group presentation of a rack: one generator per element,
/// one relator `y⁻¹ x⁻¹ y (x ◁ y)` per ordered pair, i.e. the relation
/// `i(x ◁ y) = y⁻¹ x y`. Relators come freely reduced, in lexicographic
/// `(x, y)` order.
pub fn as_presentation(rack: &FiniteRack) -> GroupPresentation {
    let n = rack.size;
    let mut relators = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let gx = (x + 1) as i32;
            let gy = (y + 1) as i32;
            let gxy = (rack.op(x, y) + 1) as i32;
            relators.push(free_reduce(&[-gy, -gx, gy, gxy]));
        }
    }
    GroupPresentation {
        generators: n,
        relators,
    }
}

/// The invariant factors of the abelianized presentation: `rank` free
/// summands plus one torsion summand `Z/d` per listed coefficient (each
/// greater than one, in divisibility order).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Abelianization {
    pub rank: usize,
    pub torsion: Vec<u128>,
}

pub fn abelianization(p: &GroupPresentation) -> Result<Abelianization> {
    if p.relators.is_empty() {
        return Ok(Abelianization {
            rank: p.generators,
            torsion: Vec::new(),
        });
    }
    let snf = smith_normal_form(&p.relator_matrix())?;
    Ok(Abelianization {
        rank: p.generators - snf.rank,
        torsion: snf.factors.into_iter().filter(|&d| d > 1).collect(),
    })
}

/// Verdict of the bounded word problem. Both definite answers are sound;
/// `Unknown` only means the budget ran out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WordVerdict {
    Equal,
    Distinct,
    Unknown,
}

/// Budget for the breadth-first rewriting search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewriteBudget {
    pub max_visited: usize,
    pub max_len: usize,
}

impl Default for RewriteBudget {
    fn default() -> Self {
        RewriteBudget {
            max_visited: 100_000,
            max_len: 16,
        }
    }
}

/// Decides `w1 = w2` in the presented group within a budget.
///
/// `Equal` comes from breadth-first relator insertion (every move multiplies
/// by a conjugate of a relator, so reachability is sound). `Distinct` comes
/// from a separating invariant: the abelianization, or any of the supplied
/// permutation quotients (generator images that are checked to satisfy all
/// relators). Otherwise `Unknown`.
pub fn word_equality(
    p: &GroupPresentation,
    w1: &[i32],
    w2: &[i32],
    budget: RewriteBudget,
    quotients: &[Vec<Perm>],
) -> Result<WordVerdict> {
    p.check_word(w1)?;
    p.check_word(w2)?;
    for q in quotients {
        if q.len() != p.generators {
            return Err(Error::Malformed(
                "quotient must give one permutation per generator".into(),
            ));
        }
        for r in &p.relators {
            if !eval_word_perm(q, r).is_identity() {
                return Err(Error::precondition("quotient_respects_relators", &[]));
            }
        }
    }
    let start = free_reduce(w1);
    let goal = free_reduce(w2);
    if start == goal {
        return Ok(WordVerdict::Equal);
    }

    if p.relators.is_empty() {
        // free group: distinct freely reduced words are distinct elements
        return Ok(WordVerdict::Distinct);
    }
    // separating invariants first: they are cheap and decide many pairs
    let e1 = p.exponent_vector(&start);
    let e2 = p.exponent_vector(&goal);
    let diff: Vec<i64> = e1.iter().zip(&e2).map(|(a, b)| a - b).collect();
    if !row_in_lattice(&p.relator_matrix(), &diff)? {
        return Ok(WordVerdict::Distinct);
    }
    for q in quotients {
        if eval_word_perm(q, &start) != eval_word_perm(q, &goal) {
            return Ok(WordVerdict::Distinct);
        }
    }

    let moves: Vec<Word> = p
        .relators
        .iter()
        .filter(|r| !r.is_empty())
        .flat_map(|r| [r.clone(), invert_word(r)])
        .collect();
    let mut visited: HashSet<Word> = HashSet::new();
    let mut queue: VecDeque<Word> = VecDeque::new();
    visited.insert(start.clone());
    queue.push_back(start);
    while let Some(word) = queue.pop_front() {
        for mv in &moves {
            for pos in 0..=word.len() {
                let mut candidate = Vec::with_capacity(word.len() + mv.len());
                candidate.extend_from_slice(&word[..pos]);
                candidate.extend_from_slice(mv);
                candidate.extend_from_slice(&word[pos..]);
                let candidate = free_reduce(&candidate);
                if candidate == goal {
                    return Ok(WordVerdict::Equal);
                }
                if candidate.len() > budget.max_len || visited.contains(&candidate) {
                    continue;
                }
                if visited.len() >= budget.max_visited {
                    return Ok(WordVerdict::Unknown);
                }
                visited.insert(candidate.clone());
                queue.push_back(candidate);
            }
        }
    }
    // the search space was exhausted below the length bound without finding
    // the goal; that is still only bounded evidence
    Ok(WordVerdict::Unknown)
}

fn eval_word_perm(images: &[Perm], word: &[i32]) -> Perm {
    let degree = images.first().map_or(0, Perm::degree);
    let mut acc = Perm::identity(degree);
    for &letter in word {
        let idx = letter.unsigned_abs() as usize - 1;
        let p = if letter > 0 {
            images[idx].clone()
        } else {
            images[idx].inverse()
        };
        acc = acc.then(&p);
    }
    acc
}

/// The universal property of the associated group: a rack morphism
/// `f : R → Conj(G)` extends to `As(R) → G` on generators. Every relator is
/// checked to map to the identity; with the morphism precondition this
/// cannot fail.
pub fn extend_to_group_hom(
    rack: &FiniteRack,
    group: &FiniteGroup,
    f: &[usize],
) -> Result<Vec<usize>> {
    if f.len() != rack.size || f.iter().any(|&v| v >= group.size) {
        return Err(Error::Malformed("f is not a map R -> G".into()));
    }
    for a in 0..rack.size {
        for b in 0..rack.size {
            if f[rack.op(a, b)] != group.conj(f[a], f[b]) {
                return Err(Error::precondition("f_rack_morphism_into_conj", &[a, b]));
            }
        }
    }
    let presentation = as_presentation(rack);
    for (i, r) in presentation.relators.iter().enumerate() {
        if group.eval_word(f, r) != group.identity {
            return Err(Error::Inconsistency(format!(
                "relator {i} does not map to the identity despite the universal property"
            )));
        }
    }
    Ok(f.to_vec())
}
