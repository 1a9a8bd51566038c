//! Disagreement sets, pointwise fixing, and membership in finitely
//! generated permutation groups.
//!
//! Membership is decided by exhaustive closure. The carrier is first split
//! into the connected components of the generators' domains: generators
//! living in different components commute and have disjoint support, so the
//! generated group is the direct product of the per-component groups. Only
//! those component groups are ever enumerated, and the carrier bound applies
//! to each component separately.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use thiserror::Error;

use crate::terms::{Atom, Perm};

pub const DEFAULT_CARRIER_BOUND: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("carrier component of {size} atoms exceeds the bound {bound}")]
    CarrierBoundExceeded { size: usize, bound: usize },
}

/// Atoms on which `p` and `q` disagree.
pub fn ds(p: &Perm, q: &Perm) -> BTreeSet<Atom> {
    let mut atoms = p.domain();
    atoms.extend(q.domain());
    atoms.into_iter().filter(|a| p.apply(a) != q.apply(a)).collect()
}

/// True iff `p` fixes every atom of `b`.
pub fn fixes_pointwise(p: &Perm, b: &BTreeSet<Atom>) -> bool {
    b.iter().all(|a| p.apply(a) == *a)
}

/// A finite generating set together with the atoms it acts on.
#[derive(Clone, Debug)]
pub struct GenSet {
    generators: Vec<Perm>,
    carrier: BTreeSet<Atom>,
    bound: usize,
}

/// One connected component: its atoms and the generators acting on it,
/// encoded as image vectors over the component's atom indices.
struct Component {
    atoms: Vec<Atom>,
    gens: Vec<Vec<u8>>,
}

impl GenSet {
    pub fn new(generators: impl IntoIterator<Item = Perm>) -> GenSet {
        let generators: Vec<Perm> = generators.into_iter().filter(|g| !g.is_id()).collect();
        let carrier = generators.iter().flat_map(Perm::domain).collect();
        GenSet {
            generators,
            carrier,
            bound: DEFAULT_CARRIER_BOUND,
        }
    }

    pub fn with_bound(mut self, bound: usize) -> GenSet {
        self.bound = bound;
        self
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn carrier(&self) -> &BTreeSet<Atom> {
        &self.carrier
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    fn components(&self) -> Result<Vec<Component>, GroupError> {
        // union-find over carrier atoms
        let atoms: Vec<Atom> = self.carrier.iter().cloned().collect();
        let index: BTreeMap<&Atom, usize> = atoms.iter().enumerate().map(|(i, a)| (a, i)).collect();
        let mut parent: Vec<usize> = (0..atoms.len()).collect();
        fn find(parent: &mut [usize], i: usize) -> usize {
            let mut r = i;
            while parent[r] != r {
                r = parent[r];
            }
            let mut j = i;
            while parent[j] != r {
                let next = parent[j];
                parent[j] = r;
                j = next;
            }
            r
        }
        for g in &self.generators {
            let dom: Vec<usize> = g.domain().iter().map(|a| index[a]).collect();
            for w in dom.windows(2) {
                let (x, y) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                parent[x] = y;
            }
        }
        let mut groups: BTreeMap<usize, Vec<Atom>> = BTreeMap::new();
        for (i, a) in atoms.iter().enumerate() {
            let root = find(&mut parent, i);
            groups.entry(root).or_default().push(a.clone());
        }
        let mut out = Vec::new();
        for (_, comp_atoms) in groups {
            if comp_atoms.len() > self.bound {
                return Err(GroupError::CarrierBoundExceeded {
                    size: comp_atoms.len(),
                    bound: self.bound,
                });
            }
            let members: BTreeSet<&Atom> = comp_atoms.iter().collect();
            let gens = self
                .generators
                .iter()
                .filter(|g| g.domain().iter().any(|a| members.contains(a)))
                .map(|g| encode(g, &comp_atoms))
                .collect();
            out.push(Component {
                atoms: comp_atoms,
                gens,
            });
        }
        Ok(out)
    }

    /// Decides whether `pi` lies in the generated group.
    pub fn contains(&self, pi: &Perm) -> Result<bool, GroupError> {
        if pi.is_id() {
            return Ok(true);
        }
        if !pi.domain().is_subset(&self.carrier) {
            return Ok(false);
        }
        for comp in self.components()? {
            let members: BTreeSet<&Atom> = comp.atoms.iter().collect();
            if comp.atoms.iter().any(|a| !members.contains(&pi.apply(a))) {
                return Ok(false);
            }
            let target = encode(pi, &comp.atoms);
            if !closure(&comp.gens, comp.atoms.len()).contains(&target) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Every element of the generated group. The result is the product of
    /// the component groups, so only call this on small generating sets.
    pub fn elements(&self) -> Result<Vec<Perm>, GroupError> {
        let mut acc = vec![Perm::id()];
        for comp in self.components()? {
            let group = closure(&comp.gens, comp.atoms.len());
            let perms: Vec<Perm> = group.iter().map(|img| decode(img, &comp.atoms)).collect();
            acc = acc
                .iter()
                .flat_map(|p| perms.iter().map(move |q| p.compose(q)))
                .collect();
        }
        acc.sort();
        Ok(acc)
    }

    /// Order of the generated group.
    pub fn order(&self) -> Result<u128, GroupError> {
        let mut n: u128 = 1;
        for comp in self.components()? {
            n *= closure(&comp.gens, comp.atoms.len()).len() as u128;
        }
        Ok(n)
    }
}

fn encode(p: &Perm, atoms: &[Atom]) -> Vec<u8> {
    let index: BTreeMap<&Atom, u8> = atoms.iter().enumerate().map(|(i, a)| (a, i as u8)).collect();
    atoms.iter().map(|a| index[&p.apply(a)]).collect()
}

fn decode(img: &[u8], atoms: &[Atom]) -> Perm {
    let map = atoms
        .iter()
        .zip(img)
        .map(|(a, &j)| (a.clone(), atoms[j as usize].clone()))
        .collect();
    Perm::from_map(map).expect("closure elements are bijections")
}

/// BFS closure under left multiplication by generators. In a finite group
/// this already yields inverses.
fn closure(gens: &[Vec<u8>], n: usize) -> HashSet<Vec<u8>> {
    let id: Vec<u8> = (0..n as u8).collect();
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q: Vec<u8> = p.iter().map(|&i| g[i as usize]).collect();
            if seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    seen
}

/// Membership of `pi` in the group generated by `gens`, default bound.
pub fn group_member(pi: &Perm, gens: &GenSet) -> Result<bool, GroupError> {
    gens.contains(pi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sw(a: &str, b: &str) -> Perm {
        Perm::swap(Atom::user(a), Atom::user(b))
    }

    fn set(names: &[&str]) -> BTreeSet<Atom> {
        names.iter().map(|n| Atom::user(n)).collect()
    }

    #[test]
    fn disagreement_sets() {
        assert_eq!(ds(&sw("a", "b"), &Perm::id()), set(&["a", "b"]));
        assert!(ds(&sw("a", "b"), &sw("a", "b")).is_empty());
        assert_eq!(
            ds(&sw("a", "b"), &sw("a", "b").compose(&sw("c", "d"))),
            set(&["c", "d"])
        );
    }

    #[test]
    fn pointwise_fixing() {
        assert!(!fixes_pointwise(&sw("a", "b"), &set(&["a", "b"])));
        assert!(fixes_pointwise(&Perm::id(), &set(&["a", "b"])));
        assert!(fixes_pointwise(&sw("c", "d"), &set(&["a", "b"])));
    }

    #[test]
    fn klein_four_group() {
        let g = GenSet::new([sw("a", "b"), sw("c", "d")]);
        assert!(!g.contains(&sw("a", "c")).unwrap());
        assert!(g.contains(&Perm::id()).unwrap());
        assert!(g.contains(&sw("a", "b").compose(&sw("c", "d"))).unwrap());
        assert_eq!(g.order().unwrap(), 4);
        assert_eq!(g.elements().unwrap().len(), 4);
    }

    #[test]
    fn outside_carrier_is_rejected_without_enumeration() {
        let big: Vec<Perm> = (0..9).map(|i| sw(&format!("a{i}"), &format!("a{}", i + 1))).collect();
        let g = GenSet::new(big);
        assert!(!g.contains(&sw("x", "y")).unwrap());
        assert!(matches!(
            g.contains(&sw("a0", "a1")),
            Err(GroupError::CarrierBoundExceeded { size: 10, bound: 8 })
        ));
    }

    #[test]
    fn bound_applies_per_component() {
        let gens: Vec<Perm> = (0..6).map(|i| sw(&format!("x{i}"), &format!("y{i}"))).collect();
        let g = GenSet::new(gens);
        assert_eq!(g.carrier().len(), 12);
        assert!(g.contains(&sw("x0", "y0").compose(&sw("x5", "y5"))).unwrap());
        assert!(!g.contains(&sw("x0", "x1")).unwrap());
    }

    #[test]
    fn transpositions_generate_symmetric_group() {
        let g = GenSet::new([sw("a", "b"), sw("b", "c"), sw("c", "d")]);
        assert_eq!(g.order().unwrap(), 24);
        assert!(g.contains(&sw("a", "d")).unwrap());
    }
}
