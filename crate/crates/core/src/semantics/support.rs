use std::collections::BTreeSet;

use super::{fix_sem, SemError, SigmaAlgebra};
use crate::permgroups::fixes_pointwise;
use crate::terms::{Atom, Perm};

pub const DEFAULT_UNIVERSE_BOUND: usize = 8;

/// Universes up to this size also get every permutation, not just swaps.
const ALL_PERMS_UP_TO: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportCheck {
    /// No permutation over the universe fixes the element without fixing
    /// its support pointwise.
    pub strong: bool,
    pub witness: Option<Perm>,
    pub checked: usize,
}

/// Searches for `π` with `π ⋏ x` but `π ∉ Fix(supp x)`, over the swaps of
/// `universe ∪ supp(x)` and, for small universes, all its permutations.
pub fn strong_support_check<M: SigmaAlgebra>(
    m: &M,
    x: &M::Elem,
    universe: &BTreeSet<Atom>,
    bound: usize,
) -> Result<SupportCheck, SemError> {
    let supp = m.supp(x);
    let atoms: Vec<Atom> = universe.union(&supp).cloned().collect();
    if atoms.len() > bound {
        return Err(SemError::UniverseBoundExceeded {
            size: atoms.len(),
            bound,
        });
    }
    let mut checked = 0;
    let mut test = |pi: Perm| {
        checked += 1;
        (fix_sem(m, &pi, x) && !fixes_pointwise(&pi, &supp)).then_some(pi)
    };
    let swaps = atoms.iter().enumerate().flat_map(|(i, a)| {
        atoms[i + 1..]
            .iter()
            .map(move |b| Perm::swap(a.clone(), b.clone()))
    });
    let mut witness = swaps.into_iter().find_map(&mut test);
    if witness.is_none() && atoms.len() <= ALL_PERMS_UP_TO {
        witness = permutations(&atoms).find_map(&mut test);
    }
    Ok(SupportCheck {
        strong: witness.is_none(),
        witness,
        checked,
    })
}

/// Every permutation of `atoms`, as bijections of that set.
fn permutations(atoms: &[Atom]) -> impl Iterator<Item = Perm> + '_ {
    let n = atoms.len();
    let mut idx: Vec<usize> = (0..n).collect();
    let mut first = true;
    std::iter::from_fn(move || {
        if first {
            first = false;
        } else if !next_permutation(&mut idx) {
            return None;
        }
        let map = atoms
            .iter()
            .zip(idx.iter())
            .filter(|(a, &j)| **a != atoms[j])
            .map(|(a, &j)| (a.clone(), atoms[j].clone()))
            .collect();
        Some(Perm::from_map(map).expect("index permutation is a bijection"))
    })
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("pivot has a successor");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}
