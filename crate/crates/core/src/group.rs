use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::report::ValidationReport;
use serde::{Deserialize, Serialize};

/// A finite group given by its multiplication table, `cayley[g][h] = g*h`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroup {
    pub size: usize,
    pub cayley: Vec<Vec<usize>>,
    pub inverse: Vec<usize>,
    pub identity: usize,
}

impl FiniteGroup {
    /// Builds a group from a bare multiplication table, locating the identity
    /// and inverses and checking every group law.
    pub fn from_cayley(cayley: Vec<Vec<usize>>) -> Result<Self> {
        let n = cayley.len();
        if n == 0 {
            return Err(Error::Malformed("empty group table".into()));
        }
        for row in &cayley {
            if row.len() != n {
                return Err(Error::Malformed("ragged group table".into()));
            }
            for &e in row {
                if e >= n {
                    return Err(Error::Malformed(format!(
                        "group table entry {e} out of range 0..{n}"
                    )));
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| cayley[e][g] == g && cayley[g][e] == g))
            .ok_or_else(|| Error::Malformed("group table has no identity".into()))?;
        let mut inverse = vec![usize::MAX; n];
        for g in 0..n {
            inverse[g] = (0..n)
                .find(|&h| cayley[g][h] == identity && cayley[h][g] == identity)
                .ok_or_else(|| Error::Malformed(format!("element {g} has no inverse")))?;
        }
        let group = FiniteGroup {
            size: n,
            cayley,
            inverse,
            identity,
        };
        let report = group.validate();
        if !report.valid {
            let v = report.first().unwrap();
            return Err(Error::Malformed(format!(
                "group law `{}` fails at {:?}",
                v.law, v.witness
            )));
        }
        Ok(group)
    }

    /// Checks associativity, identity and inverse laws on the stored table.
    pub fn validate(&self) -> ValidationReport {
        let n = self.size;
        let mut report = ValidationReport::new();
        for g in 0..n {
            if self.mul(self.identity, g) != g || self.mul(g, self.identity) != g {
                report.record("identity", &[g]);
            }
            let h = self.inverse[g];
            if self.mul(g, h) != self.identity || self.mul(h, g) != self.identity {
                report.record("inverse", &[g]);
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        report.record("associativity", &[a, b, c]);
                    }
                }
            }
        }
        report
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.cayley[g][h]
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inverse[g]
    }

    /// `h^{-1} g h`.
    pub fn conj(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(self.inv(h), g), h)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.size).all(|g| (0..self.size).all(|h| self.mul(g, h) == self.mul(h, g)))
    }

    pub fn trivial() -> Self {
        FiniteGroup {
            size: 1,
            cayley: vec![vec![0]],
            inverse: vec![0],
            identity: 0,
        }
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0);
        let cayley = (0..n)
            .map(|g| (0..n).map(|h| (g + h) % n).collect())
            .collect();
        let inverse = (0..n).map(|g| (n - g) % n).collect();
        FiniteGroup {
            size: n,
            cayley,
            inverse,
            identity: 0,
        }
    }

    /// The symmetric group on `deg` points; element order is the
    /// lexicographic order of image lists, product is apply-left-first.
    pub fn symmetric(deg: usize) -> Self {
        let perms = Perm::all(deg);
        Self::from_perms(&perms).expect("symmetric group table")
    }

    /// Builds the abstract group of a closed set of permutations.
    pub fn from_perms(perms: &[Perm]) -> Result<Self> {
        let index = |p: &Perm| -> Result<usize> {
            perms
                .iter()
                .position(|q| q == p)
                .ok_or_else(|| Error::Malformed("permutation set not closed under product".into()))
        };
        let n = perms.len();
        let mut cayley = vec![vec![0; n]; n];
        for (i, p) in perms.iter().enumerate() {
            for (j, q) in perms.iter().enumerate() {
                cayley[i][j] = index(&p.then(q))?;
            }
        }
        FiniteGroup::from_cayley(cayley)
    }

    /// Evaluates a signed-index word (`±(i+1)` encodes generator `i`) against
    /// a list of group elements standing for the generators.
    pub fn eval_word(&self, images: &[usize], word: &[i32]) -> usize {
        let mut acc = self.identity;
        for &letter in word {
            let idx = (letter.unsigned_abs() as usize) - 1;
            let g = if letter > 0 {
                images[idx]
            } else {
                self.inv(images[idx])
            };
            acc = self.mul(acc, g);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_groups_validate() {
        for n in 1..=8 {
            assert!(FiniteGroup::cyclic(n).validate().valid);
        }
    }

    #[test]
    fn symmetric_three_has_order_six() {
        let s3 = FiniteGroup::symmetric(3);
        assert_eq!(s3.size, 6);
        assert!(s3.validate().valid);
        assert!(!s3.is_abelian());
    }

    #[test]
    fn from_cayley_rejects_broken_tables() {
        // a "table" with no identity
        assert!(FiniteGroup::from_cayley(vec![vec![1, 0], vec![1, 0]]).is_err());
        assert!(FiniteGroup::from_cayley(vec![vec![0, 1], vec![1, 2]]).is_err());
    }

    #[test]
    fn conj_matches_definition() {
        let s3 = FiniteGroup::symmetric(3);
        for g in 0..6 {
            for h in 0..6 {
                let lhs = s3.conj(g, h);
                let rhs = s3.mul(s3.mul(s3.inv(h), g), h);
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn eval_word_respects_inverses() {
        let s3 = FiniteGroup::symmetric(3);
        for g in 0..6 {
            let w = [1, -1];
            assert_eq!(s3.eval_word(&[g], &w), s3.identity);
        }
    }
}
