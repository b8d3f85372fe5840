//! Finite topological spaces on at most 64 points, opens as bitmasks.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lattice::{set_name, FiniteLattice};

pub type Mask = u64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSpace {
    names: Vec<String>,
    /// Sorted by (cardinality, mask).
    opens: Vec<Mask>,
    /// Minimal open neighbourhood of each point.
    nbhd: Vec<Mask>,
}

pub fn full(n: usize) -> Mask {
    if n == 64 {
        Mask::MAX
    } else {
        (1 << n) - 1
    }
}

pub fn bits(m: Mask) -> impl Iterator<Item = usize> {
    (0..64).filter(move |&i| m >> i & 1 == 1)
}

impl FiniteSpace {
    /// Validates that `opens` is a topology; the family must be listed in full.
    pub fn new(names: Vec<String>, opens: Vec<Mask>) -> Result<Self> {
        let n = names.len();
        if n > 64 {
            return Err(Error::TooLarge(format!("{n} points (at most 64 supported)")));
        }
        let all = full(n);
        let mut opens = opens;
        opens.sort_by_key(|&m| (m.count_ones(), m));
        opens.dedup();
        if let Some(&m) = opens.iter().find(|&&m| m & !all != 0) {
            return Err(Error::NotTopology(format!("open {m:#b} mentions unknown points")));
        }
        if opens.binary_search_by_key(&(0, 0), |&m| (m.count_ones(), m)).is_err() {
            return Err(Error::NotTopology("∅ is missing".into()));
        }
        if !opens.contains(&all) {
            return Err(Error::NotTopology("the whole space is missing".into()));
        }
        let pts: Vec<&str> = names.iter().map(String::as_str).collect();
        for &a in &opens {
            for &b in &opens {
                for (c, what) in [(a | b, "union"), (a & b, "intersection")] {
                    if !opens.contains(&c) {
                        return Err(Error::NotTopology(format!(
                            "{what} of {} and {} is not open",
                            set_name(a, &pts),
                            set_name(b, &pts)
                        )));
                    }
                }
            }
        }
        let nbhd = (0..n)
            .map(|x| {
                opens
                    .iter()
                    .filter(|&&o| o >> x & 1 == 1)
                    .fold(all, |acc, &o| acc & o)
            })
            .collect();
        Ok(FiniteSpace { names, opens, nbhd })
    }

    /// The topology generated by a subbasis.
    pub fn generated(names: Vec<String>, subbasis: &[Mask]) -> Result<Self> {
        let n = names.len();
        if n > 64 {
            return Err(Error::TooLarge(format!("{n} points (at most 64 supported)")));
        }
        let all = full(n);
        let nbhd: Vec<Mask> = (0..n)
            .map(|x| {
                subbasis
                    .iter()
                    .filter(|&&o| o >> x & 1 == 1)
                    .fold(all, |acc, &o| acc & o)
            })
            .collect();
        let mut opens = vec![0];
        for &b in &nbhd {
            let extra: Vec<Mask> = opens.iter().map(|&o| o | b).collect();
            opens.extend(extra);
            opens.sort_unstable();
            opens.dedup();
        }
        opens.push(all);
        Self::new(names, opens)
    }

    pub fn discrete(names: Vec<String>) -> Result<Self> {
        let subbasis: Vec<Mask> = (0..names.len()).map(|i| 1 << i).collect();
        Self::generated(names, &subbasis)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|s| s == name)
    }

    pub fn opens(&self) -> &[Mask] {
        &self.opens
    }

    pub fn all(&self) -> Mask {
        full(self.len())
    }

    pub fn is_open(&self, m: Mask) -> bool {
        self.opens
            .binary_search_by_key(&(m.count_ones(), m), |&o| (o.count_ones(), o))
            .is_ok()
    }

    pub fn open_index(&self, m: Mask) -> Option<usize> {
        self.opens
            .binary_search_by_key(&(m.count_ones(), m), |&o| (o.count_ones(), o))
            .ok()
    }

    pub fn nbhd(&self, x: usize) -> Mask {
        self.nbhd[x]
    }

    /// Specialisation order: `x ⊑ y` iff `y ∈ N(x)`, i.e. `x ∈ cl{y}`.
    pub fn specializes(&self, x: usize, y: usize) -> bool {
        self.nbhd[x] >> y & 1 == 1
    }

    pub fn t0_failure(&self) -> Option<(usize, usize)> {
        (0..self.len())
            .flat_map(|x| (x + 1..self.len()).map(move |y| (x, y)))
            .find(|&(x, y)| self.nbhd[x] == self.nbhd[y])
    }

    pub fn require_t0(&self) -> Result<()> {
        match self.t0_failure() {
            None => Ok(()),
            Some((x, y)) => Err(Error::NotTopology(format!(
                "not T0: `{}` and `{}` have the same neighbourhoods",
                self.names[x], self.names[y]
            ))),
        }
    }

    pub fn set_name(&self, m: Mask) -> String {
        let pts: Vec<&str> = self.names.iter().map(String::as_str).collect();
        set_name(m, &pts)
    }

    /// The frame of opens; element ids are positions in [`Self::opens`].
    pub fn frame(&self) -> Arc<FiniteLattice> {
        let names = self.opens.iter().map(|&m| self.set_name(m)).collect();
        Arc::new(FiniteLattice::from_sets(names, &self.opens).expect("topologies are lattices"))
    }

    pub fn image(&self, f: &[usize], m: Mask) -> Mask {
        bits(m).fold(0, |acc, x| acc | 1 << f[x])
    }

    pub fn preimage(f: &[usize], m: Mask) -> Mask {
        f.iter()
            .enumerate()
            .filter(|&(_, &y)| m >> y & 1 == 1)
            .fold(0, |acc, (x, _)| acc | 1 << x)
    }

    /// `f : self → dst` is continuous iff it maps each `N(x)` into `N(f(x))`.
    pub fn continuity_failure(&self, dst: &FiniteSpace, f: &[usize]) -> Option<usize> {
        (0..self.len()).find(|&x| self.image(f, self.nbhd[x]) & !dst.nbhd(f[x]) != 0)
    }

    /// Open maps send each minimal neighbourhood to an open set.
    pub fn openness_failure(&self, dst: &FiniteSpace, f: &[usize]) -> Option<usize> {
        (0..self.len()).find(|&x| !dst.is_open(self.image(f, self.nbhd[x])))
    }

    pub fn is_homeomorphism(&self, dst: &FiniteSpace, f: &[usize]) -> bool {
        let mut seen: Mask = 0;
        for &y in f {
            seen |= 1 << y;
        }
        self.len() == dst.len()
            && seen == dst.all()
            && self.continuity_failure(dst, f).is_none()
            && self.openness_failure(dst, f).is_none()
    }

    /// Local homeomorphism at every point, witnessed on minimal neighbourhoods.
    pub fn local_homeo_failure(&self, dst: &FiniteSpace, f: &[usize]) -> Option<usize> {
        (0..self.len()).find(|&x| {
            let w = self.nbhd[x];
            self.image(f, w).count_ones() != w.count_ones()
                || self
                    .opens
                    .iter()
                    .filter(|&&o| o & !w == 0)
                    .any(|&o| !dst.is_open(self.image(f, o)))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn sierpinski() -> FiniteSpace {
        FiniteSpace::new(names(&["0", "1"]), vec![0, 0b10, 0b11]).unwrap()
    }

    #[test]
    fn sierpinski_basics() {
        let s = sierpinski();
        assert_eq!(s.nbhd(0), 0b11);
        assert_eq!(s.nbhd(1), 0b10);
        assert!(s.t0_failure().is_none());
        assert_eq!(s.frame().len(), 3);
    }

    #[test]
    fn rejects_non_topologies() {
        let e = FiniteSpace::new(names(&["0", "1", "2"]), vec![0, 1, 2, 7]).unwrap_err();
        assert!(matches!(e, Error::NotTopology(_)));
        let e = FiniteSpace::new(names(&["0", "1"]), vec![0, 1]).unwrap_err();
        assert!(matches!(e, Error::NotTopology(_)));
    }

    #[test]
    fn indiscrete_is_not_t0() {
        let s = FiniteSpace::new(names(&["0", "1"]), vec![0, 3]).unwrap();
        assert_eq!(s.t0_failure(), Some((0, 1)));
    }

    #[test]
    fn generated_product_of_sierpinski() {
        // points ab with a the first coordinate; bit index = 2a + b
        let sub = [0b1100, 0b1010];
        let s = FiniteSpace::generated(names(&["00", "01", "10", "11"]), &sub).unwrap();
        assert_eq!(s.opens().len(), 6);
    }

    #[test]
    fn maps() {
        let s = sierpinski();
        let d = FiniteSpace::discrete(names(&["0", "1"])).unwrap();
        assert!(d.continuity_failure(&s, &[0, 1]).is_none());
        assert_eq!(s.continuity_failure(&d, &[0, 1]), Some(0));
        assert!(!d.is_homeomorphism(&s, &[0, 1]));
        assert!(s.is_homeomorphism(&s, &[0, 1]));
        let pt = FiniteSpace::discrete(names(&["*"])).unwrap();
        assert!(s.openness_failure(&pt, &[0, 0]).is_none());
        assert_eq!(s.local_homeo_failure(&pt, &[0, 0]), Some(0));
        assert!(d.local_homeo_failure(&pt, &[0, 0]).is_none());
    }
}
