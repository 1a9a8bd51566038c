use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};

use super::atom::Atom;

/// A finite-support permutation of atoms.
///
/// Kept both as the swap list it was written with (rightmost swap applied
/// first) and as a normalised map holding only the moved atoms. Equality,
/// ordering and hashing look at the map alone.
#[derive(Clone, Debug)]
pub struct Perm {
    swaps: Vec<(Atom, Atom)>,
    map: BTreeMap<Atom, Atom>,
}

impl Perm {
    pub fn id() -> Perm {
        Perm {
            swaps: Vec::new(),
            map: BTreeMap::new(),
        }
    }

    pub fn swap(a: Atom, b: Atom) -> Perm {
        Perm::from_swaps([(a, b)])
    }

    /// Builds `(a1 b1)∘(a2 b2)∘…`; trivial swaps `(a a)` are dropped.
    pub fn from_swaps(swaps: impl IntoIterator<Item = (Atom, Atom)>) -> Perm {
        let swaps: Vec<(Atom, Atom)> = swaps.into_iter().filter(|(a, b)| a != b).collect();
        let mut map: BTreeMap<Atom, Atom> = BTreeMap::new();
        for (a, b) in swaps.iter().rev() {
            // pre-compose with (a b): the new image of x is (a b)(old(x))
            let touched: BTreeSet<Atom> = map
                .keys()
                .cloned()
                .chain([a.clone(), b.clone()])
                .collect();
            let mut next = BTreeMap::new();
            for x in touched {
                let y = map.get(&x).cloned().unwrap_or_else(|| x.clone());
                let z = if &y == a {
                    b.clone()
                } else if &y == b {
                    a.clone()
                } else {
                    y
                };
                if z != x {
                    next.insert(x, z);
                }
            }
            map = next;
        }
        Perm { swaps, map }
    }

    /// Builds a permutation from an explicit mapping, which must be a
    /// bijection on its keys. Fixed points are discarded. The display swap
    /// list is recovered from the cycle decomposition.
    pub fn from_map(mapping: BTreeMap<Atom, Atom>) -> Option<Perm> {
        let map: BTreeMap<Atom, Atom> = mapping.into_iter().filter(|(a, b)| a != b).collect();
        let keys: BTreeSet<&Atom> = map.keys().collect();
        let values: BTreeSet<&Atom> = map.values().collect();
        if keys != values || values.len() != map.len() {
            return None;
        }
        let mut swaps = Vec::new();
        let mut seen = BTreeSet::new();
        for start in map.keys() {
            if seen.contains(start) {
                continue;
            }
            let mut cycle = vec![start.clone()];
            seen.insert(start.clone());
            let mut cur = map[start].clone();
            while &cur != start {
                seen.insert(cur.clone());
                cycle.push(cur.clone());
                cur = map[&cur].clone();
            }
            // (x1 x2 … xk) = (x1 xk)∘…∘(x1 x2)
            for x in cycle[1..].iter().rev() {
                swaps.push((cycle[0].clone(), x.clone()));
            }
        }
        Some(Perm { swaps, map })
    }

    pub fn apply(&self, a: &Atom) -> Atom {
        self.map.get(a).cloned().unwrap_or_else(|| a.clone())
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        let mut map = BTreeMap::new();
        for a in self.map.keys().chain(other.map.keys()) {
            let image = self.apply(&other.apply(a));
            if &image != a {
                map.insert(a.clone(), image);
            }
        }
        let swaps = self.swaps.iter().chain(other.swaps.iter()).cloned().collect();
        Perm { swaps, map }
    }

    pub fn inverse(&self) -> Perm {
        Perm {
            swaps: self.swaps.iter().rev().cloned().collect(),
            map: self.map.iter().map(|(a, b)| (b.clone(), a.clone())).collect(),
        }
    }

    /// `self^rho = rho ∘ self ∘ rho⁻¹`.
    pub fn conjugate(&self, rho: &Perm) -> Perm {
        rho.compose(&self.compose(&rho.inverse()))
    }

    /// Renames the atoms of the swap list.
    pub fn rename_atoms(&self, f: &impl Fn(&Atom) -> Atom) -> Perm {
        Perm::from_swaps(self.swaps().iter().map(|(a, b)| (f(a), f(b))))
    }

    pub fn is_id(&self) -> bool {
        self.map.is_empty()
    }

    pub fn domain(&self) -> BTreeSet<Atom> {
        self.map.keys().cloned().collect()
    }

    pub fn moves(&self, a: &Atom) -> bool {
        self.map.contains_key(a)
    }

    pub fn swaps(&self) -> &[(Atom, Atom)] {
        &self.swaps
    }

    pub fn mapping(&self) -> &BTreeMap<Atom, Atom> {
        &self.map
    }

    /// The same permutation, re-spelled from its normal form.
    pub fn normalized(&self) -> Perm {
        Perm::from_map(self.map.clone()).expect("normal form is a bijection")
    }

    /// Every atom the swap list mentions, including ones that cancel out.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        self.swaps
            .iter()
            .flat_map(|(a, b)| [a.clone(), b.clone()])
            .collect()
    }
}

impl Default for Perm {
    fn default() -> Self {
        Perm::id()
    }
}

impl PartialEq for Perm {
    fn eq(&self, other: &Self) -> bool {
        self.map == other.map
    }
}

impl Eq for Perm {}

impl Hash for Perm {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.map.hash(state);
    }
}

impl PartialOrd for Perm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Perm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.map.cmp(&other.map)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.swaps.is_empty() {
            return f.write_str("id");
        }
        for (a, b) in &self.swaps {
            write!(f, "({a} {b})")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(s: &str) -> Atom {
        Atom::user(s)
    }

    fn sw(a: &str, b: &str) -> Perm {
        Perm::swap(at(a), at(b))
    }

    #[test]
    fn swap_and_identity() {
        assert_eq!(sw("a", "b").apply(&at("a")), at("b"));
        assert_eq!(Perm::id().apply(&at("c")), at("c"));
        assert!(sw("a", "a").is_id());
        assert_eq!(sw("a", "a").to_string(), "id");
    }

    #[test]
    fn composition_applies_right_factor_first() {
        let p = sw("a", "b").compose(&sw("c", "d"));
        assert_eq!(p.apply(&at("c")), at("d"));
        // (a b)∘(b c): a -> a -> b, b -> c -> c, c -> b -> a
        let q = sw("a", "b").compose(&sw("b", "c"));
        assert_eq!(q.apply(&at("a")), at("b"));
        assert_eq!(q.apply(&at("b")), at("c"));
        assert_eq!(q.apply(&at("c")), at("a"));
        assert_eq!(q, Perm::from_swaps([(at("a"), at("b")), (at("b"), at("c"))]));
    }

    #[test]
    fn inverse_and_conjugate() {
        assert!(sw("a", "b").compose(&sw("a", "b").inverse()).is_id());
        assert_eq!(sw("a", "b").conjugate(&Perm::id()), sw("a", "b"));
        assert_eq!(sw("a", "b").conjugate(&sw("b", "c")), sw("a", "c"));
    }

    #[test]
    fn equality_ignores_spelling() {
        let p = Perm::from_swaps([(at("a"), at("b")), (at("b"), at("a"))]);
        assert!(p.is_id());
        assert_eq!(p, Perm::id());
        assert_eq!(p.to_string(), "(a b)(b a)");
    }

    #[test]
    fn from_map_recovers_swaps() {
        let cyc: BTreeMap<Atom, Atom> = [
            (at("a"), at("b")),
            (at("b"), at("c")),
            (at("c"), at("a")),
        ]
        .into_iter()
        .collect();
        let p = Perm::from_map(cyc).unwrap();
        assert_eq!(Perm::from_swaps(p.swaps().iter().cloned()), p);
        assert_eq!(p.apply(&at("a")), at("b"));
        let not_bijective: BTreeMap<Atom, Atom> =
            [(at("a"), at("b")), (at("c"), at("b"))].into_iter().collect();
        assert!(Perm::from_map(not_bijective).is_none());
    }
}
