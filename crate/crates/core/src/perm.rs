use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// A permutation of `{0..n-1}` stored as its image list.
///
/// Products are taken left-to-right: `(p * q)(x) = q(p(x))`, written
/// [`Perm::then`]. With this convention a right action of a rack or group on
/// a set is a morphism into the permutations, which keeps conjugation
/// formulas in the same order as the algebra they model.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    /// Builds from an image list, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &y in &images {
            if y >= n {
                return Err(Error::Malformed(format!(
                    "permutation image {y} out of range 0..{n}"
                )));
            }
            if seen[y] {
                return Err(Error::Malformed(format!("permutation repeats image {y}")));
            }
            seen[y] = true;
        }
        Ok(Perm(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// `self.then(q)` applies `self` first: the product `self * q`.
    pub fn then(&self, q: &Perm) -> Perm {
        Perm(self.0.iter().map(|&x| q.0[x]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (x, &y) in self.0.iter().enumerate() {
            inv[y] = x;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(x, &y)| x == y)
    }

    /// `q^{-1} * self * q` in the left-to-right product.
    pub fn conjugate_by(&self, q: &Perm) -> Perm {
        q.inverse().then(self).then(q)
    }

    /// All permutations of `{0..n-1}` in lexicographic order of image lists.
    pub fn all(n: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut current: Vec<usize> = (0..n).collect();
        loop {
            out.push(Perm(current.clone()));
            if !next_permutation(&mut current) {
                break;
            }
        }
        out
    }
}

fn next_permutation(a: &mut [usize]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_is_left_to_right() {
        let p = Perm::from_images(vec![1, 0, 2]).unwrap();
        let q = Perm::from_images(vec![0, 2, 1]).unwrap();
        // (p * q)(0) = q(p(0)) = q(1) = 2
        assert_eq!(p.then(&q).apply(0), 2);
    }

    #[test]
    fn inverse_cancels() {
        for p in Perm::all(4) {
            assert!(p.then(&p.inverse()).is_identity());
            assert!(p.inverse().then(&p).is_identity());
        }
    }

    #[test]
    fn all_has_factorial_size() {
        assert_eq!(Perm::all(4).len(), 24);
        assert_eq!(Perm::all(1).len(), 1);
        assert_eq!(Perm::all(0).len(), 1);
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Perm::from_images(vec![0, 0]).is_err());
        assert!(Perm::from_images(vec![2, 0]).is_err());
    }
}
