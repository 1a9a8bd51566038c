//! Seeded random generators for terms, contexts, judgements and model
//! elements. Every generator draws from a caller-supplied RNG, so a fixed
//! seed reproduces a run exactly.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::deriv_fix::{FixBody, FixContext, FixJudgement};
use crate::deriv_fresh::{FreshBody, FreshContext, FreshJudgement};
use crate::deriv_strong::{NuJudgement, StrongBody, StrongContext};
use crate::semantics::{GroundMod, PFin, SigmaAlgebra, Singleton, Words};
use crate::terms::{Atom, Perm, Symbol, Term, Var};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Size limits for generated syntax.
#[derive(Clone, Debug)]
pub struct GenConfig {
    /// Atoms `a1 .. a<atoms>`.
    pub atoms: usize,
    pub vars: usize,
    pub depth: usize,
    /// Term-formers with their arities.
    pub symbols: Vec<(Symbol, usize)>,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            atoms: 6,
            vars: 2,
            depth: 4,
            symbols: [("app", 2), ("lam", 1), ("+", 2), ("g", 2), ("h", 1), ("0", 0)]
                .into_iter()
                .map(|(f, n)| (Symbol::new(f), n))
                .collect(),
        }
    }
}

impl GenConfig {
    pub fn atom_pool(&self) -> Vec<Atom> {
        (1..=self.atoms).map(|i| Atom::user(&format!("a{i}"))).collect()
    }

    pub fn var_pool(&self) -> Vec<Var> {
        ["X", "Y", "Z", "W"].iter().take(self.vars.max(1)).map(|x| Var::new(x)).collect()
    }

    /// Ground-only configuration for sampling model elements.
    pub fn ground(&self) -> GenConfig {
        GenConfig {
            vars: 0,
            ..self.clone()
        }
    }
}

pub fn pick<'a, T, R: Rng>(r: &mut R, xs: &'a [T]) -> &'a T {
    xs.choose(r).expect("pool is non-empty")
}

/// A product of `0..=max_swaps` swaps of distinct atoms from `pool`.
pub fn perm<R: Rng>(r: &mut R, pool: &[Atom], max_swaps: usize) -> Perm {
    let n = r.gen_range(0..=max_swaps);
    Perm::from_swaps((0..n).map(|_| {
        let two: Vec<&Atom> = pool.choose_multiple(r, 2).collect();
        (two[0].clone(), two[1].clone())
    }))
}

/// A non-identity swap product.
pub fn nontrivial_perm<R: Rng>(r: &mut R, pool: &[Atom], max_swaps: usize) -> Perm {
    loop {
        let p = perm(r, pool, max_swaps.max(1));
        if !p.is_id() {
            return p;
        }
    }
}

/// A term of depth at most `depth`.
pub fn term<R: Rng>(r: &mut R, cfg: &GenConfig, depth: usize) -> Term {
    term_over(r, cfg, depth, &cfg.atom_pool())
}

fn term_over<R: Rng>(r: &mut R, cfg: &GenConfig, depth: usize, atoms: &[Atom]) -> Term {
    let vars = cfg.var_pool();
    let leaf = |r: &mut R| -> Term {
        let nullary: Vec<&Symbol> = cfg.symbols.iter().filter(|(_, n)| *n == 0).map(|(f, _)| f).collect();
        match r.gen_range(0..10) {
            0..=4 if !atoms.is_empty() => Term::Atom(pick(r, atoms).clone()),
            5..=8 if cfg.vars > 0 => Term::Susp(perm(r, &cfg.atom_pool(), 2), pick(r, &vars).clone()),
            _ if !nullary.is_empty() => Term::App((*pick(r, &nullary)).clone(), Vec::new()),
            _ if !atoms.is_empty() => Term::Atom(pick(r, atoms).clone()),
            _ => Term::App(Symbol::new("0"), Vec::new()),
        }
    };
    if depth == 0 || r.gen_bool(0.25) {
        return leaf(r);
    }
    let formers: Vec<&(Symbol, usize)> = cfg.symbols.iter().filter(|(_, n)| *n > 0).collect();
    if formers.is_empty() || r.gen_bool(0.3) {
        let a = pick(r, &cfg.atom_pool()).clone();
        let mut inner: Vec<Atom> = atoms.to_vec();
        if !inner.contains(&a) {
            inner.push(a.clone());
        }
        return Term::Abs(a, Box::new(term_over(r, cfg, depth - 1, &inner)));
    }
    let (f, n) = (*pick(r, &formers)).clone();
    Term::App(f, (0..n).map(|_| term_over(r, cfg, depth - 1, atoms)).collect())
}

/// A ground term whose free atoms come from `free`; binders range over the
/// whole pool.
pub fn ground_term<R: Rng>(r: &mut R, cfg: &GenConfig, depth: usize, free: &[Atom]) -> Term {
    term_over(r, &cfg.ground(), depth, free)
}

pub fn fix_context<R: Rng>(r: &mut R, cfg: &GenConfig, max_len: usize) -> FixContext {
    let pool = cfg.atom_pool();
    let vars = cfg.var_pool();
    let mut ctx = FixContext::new();
    for _ in 0..r.gen_range(0..=max_len) {
        ctx.insert(nontrivial_perm(r, &pool, 2), pick(r, &vars).clone());
    }
    ctx
}

/// A permutation likely to be derivably fixed: a product of context
/// permutations, the identity, or a random swap product.
fn likely_fixing<R: Rng>(r: &mut R, cfg: &GenConfig, ctx: &FixContext) -> Perm {
    let perms: Vec<Perm> = ctx.iter().map(|(p, _)| p.clone()).collect();
    match r.gen_range(0..6) {
        0..=2 if !perms.is_empty() => {
            let mut acc = Perm::id();
            for _ in 0..r.gen_range(1..=3) {
                acc = acc.compose(pick(r, &perms));
            }
            acc
        }
        3 => Perm::id(),
        _ => nontrivial_perm(r, &cfg.atom_pool(), 2),
    }
}

/// Renames one binder to a pool atom, as an α-variant candidate.
fn rename_binder<R: Rng>(r: &mut R, cfg: &GenConfig, t: &Term) -> Term {
    match t {
        Term::Abs(a, body) if r.gen_bool(0.6) => {
            let c = pick(r, &cfg.atom_pool()).clone();
            Term::Abs(c.clone(), Box::new(body.act(&Perm::swap(a.clone(), c))))
        }
        Term::Abs(a, body) => Term::Abs(a.clone(), Box::new(rename_binder(r, cfg, body))),
        Term::App(f, args) if !args.is_empty() => {
            let i = r.gen_range(0..args.len());
            let mut args = args.clone();
            args[i] = rename_binder(r, cfg, &args[i]);
            Term::App(f.clone(), args)
        }
        _ => t.clone(),
    }
}

/// Fixed-point judgements skewed towards derivable ones.
pub fn fix_judgement<R: Rng>(r: &mut R, cfg: &GenConfig) -> FixJudgement {
    let ctx = fix_context(r, cfg, 3);
    let t = term(r, cfg, cfg.depth);
    let body = if r.gen_bool(0.5) {
        FixBody::Fix(likely_fixing(r, cfg, &ctx), t)
    } else {
        let s = match r.gen_range(0..3) {
            0 => t.act(&likely_fixing(r, cfg, &ctx)),
            1 => rename_binder(r, cfg, &t),
            _ => {
                let moved = t.act(&likely_fixing(r, cfg, &ctx));
                rename_binder(r, cfg, &moved)
            }
        };
        FixBody::Eq(s, t)
    };
    FixJudgement { context: ctx, body }
}

pub fn fresh_context<R: Rng>(r: &mut R, cfg: &GenConfig, max_len: usize) -> FreshContext {
    let pool = cfg.atom_pool();
    let vars = cfg.var_pool();
    let mut ctx = FreshContext::new();
    for _ in 0..r.gen_range(0..=max_len) {
        ctx.insert(pick(r, &pool).clone(), pick(r, &vars).clone());
    }
    ctx
}

/// Freshness-system judgements, half `a # t` and half `s ≈ t`.
pub fn fresh_judgement<R: Rng>(r: &mut R, cfg: &GenConfig) -> FreshJudgement {
    let ctx = fresh_context(r, cfg, 4);
    let pool = cfg.atom_pool();
    let t = term(r, cfg, cfg.depth);
    let body = if r.gen_bool(0.5) {
        FreshBody::Fresh(pick(r, &pool).clone(), t)
    } else {
        let s = match r.gen_range(0..3) {
            0 => rename_binder(r, cfg, &t),
            1 => t.act(&perm(r, &pool, 1)),
            _ => t.clone(),
        };
        FreshBody::Alpha(s, t)
    };
    FreshJudgement { context: ctx, body }
}

/// A strong context `ν c̄. (a c) ⋏ X, ...` with one new name per constraint.
pub fn strong_context<R: Rng>(r: &mut R, cfg: &GenConfig, max_len: usize) -> StrongContext {
    let pool = cfg.atom_pool();
    let vars = cfg.var_pool();
    let mut ctx = StrongContext::new();
    for i in 0..r.gen_range(0..=max_len) {
        ctx.insert(
            pick(r, &pool).clone(),
            Atom::fresh(&format!("c{}", i + 1)),
            pick(r, &vars).clone(),
        );
    }
    ctx
}

/// Strong judgements with a fixed-point body `π ⋏ t`, where `π` may move
/// new names as well as ordinary atoms.
pub fn strong_fix_judgement<R: Rng>(r: &mut R, cfg: &GenConfig) -> NuJudgement {
    let ctx = strong_context(r, cfg, 4);
    let mut pool = cfg.atom_pool();
    pool.extend(ctx.nu_atoms().iter().cloned());
    let pi = match r.gen_range(0..3) {
        0 if !ctx.is_empty() => {
            let (a, c, _) = pick(r, &ctx.iter().cloned().collect::<Vec<_>>()).clone();
            Perm::swap(a, c)
        }
        _ => perm(r, &pool, 2),
    };
    let t = term(r, cfg, cfg.depth);
    NuJudgement::new([], ctx, StrongBody::Fix(pi, t))
}

/// Strong judgements in the shape the back-translation accepts: either
/// `(a c') ⋏ t` with `c'` a name new to everything, or `s ≈ t`.
pub fn strong_translatable_judgement<R: Rng>(r: &mut R, cfg: &GenConfig) -> NuJudgement {
    let ctx = strong_context(r, cfg, 4);
    let pool = cfg.atom_pool();
    let t = term(r, cfg, cfg.depth);
    if r.gen_bool(0.5) {
        let c = Atom::fresh(&format!("c{}", ctx.len() + 1));
        let a = pick(r, &pool).clone();
        NuJudgement::new([c.clone()], ctx, StrongBody::Fix(Perm::swap(a, c), t))
    } else {
        let s = match r.gen_range(0..3) {
            0 => rename_binder(r, cfg, &t),
            1 => t.act(&perm(r, &pool, 1)),
            _ => t.clone(),
        };
        NuJudgement::new([], ctx, StrongBody::Alpha(s, t))
    }
}

/// Atoms for model elements: the generator pool plus two spare atoms.
pub fn value_atoms(cfg: &GenConfig) -> Vec<Atom> {
    (1..=cfg.atoms + 2).map(|i| Atom::user(&format!("a{i}"))).collect()
}

/// Random elements of a model, unconstrained or fixed by given permutations.
pub trait Sample: SigmaAlgebra {
    fn sample<R: Rng>(&self, r: &mut R, cfg: &GenConfig) -> Self::Elem;

    /// An element fixed by every permutation in `gens`.
    fn sample_fixed<R: Rng>(&self, r: &mut R, cfg: &GenConfig, gens: &[Perm]) -> Self::Elem;
}

fn avoiding(cfg: &GenConfig, gens: &[Perm]) -> Vec<Atom> {
    let moved: BTreeSet<Atom> = gens.iter().flat_map(Perm::domain).collect();
    value_atoms(cfg).into_iter().filter(|a| !moved.contains(a)).collect()
}

impl Sample for Singleton {
    fn sample<R: Rng>(&self, _: &mut R, _: &GenConfig) {}

    fn sample_fixed<R: Rng>(&self, _: &mut R, _: &GenConfig, _: &[Perm]) {}
}

impl Sample for PFin {
    fn sample<R: Rng>(&self, r: &mut R, cfg: &GenConfig) -> BTreeSet<Atom> {
        value_atoms(cfg).into_iter().filter(|_| r.gen_bool(0.35)).collect()
    }

    /// Closes a random set under the generated group.
    fn sample_fixed<R: Rng>(&self, r: &mut R, cfg: &GenConfig, gens: &[Perm]) -> BTreeSet<Atom> {
        let mut out = self.sample(r, cfg);
        loop {
            let next: BTreeSet<Atom> = out
                .iter()
                .cloned()
                .chain(gens.iter().flat_map(|g| out.iter().map(|a| g.apply(a))))
                .collect();
            if next == out {
                return out;
            }
            out = next;
        }
    }
}

impl Sample for Words {
    fn sample<R: Rng>(&self, r: &mut R, cfg: &GenConfig) -> Vec<Atom> {
        let pool = value_atoms(cfg);
        let n = r.gen_range(0..=4);
        pool.choose_multiple(r, n).cloned().collect()
    }

    fn sample_fixed<R: Rng>(&self, r: &mut R, cfg: &GenConfig, gens: &[Perm]) -> Vec<Atom> {
        let pool = avoiding(cfg, gens);
        let n = r.gen_range(0..=pool.len().min(4));
        pool.choose_multiple(r, n).cloned().collect()
    }
}

impl Sample for GroundMod {
    fn sample<R: Rng>(&self, r: &mut R, cfg: &GenConfig) -> Term {
        let g = ground_term(r, cfg, cfg.depth.min(3), &value_atoms(cfg));
        self.canon(&g)
    }

    /// Free names avoid every moved atom; in a commutative theory, a single
    /// swap can also be absorbed by `+(g, γ·g)`.
    fn sample_fixed<R: Rng>(&self, r: &mut R, cfg: &GenConfig, gens: &[Perm]) -> Term {
        let comm = !self.is_strong();
        if comm && gens.len() == 1 && gens[0].compose(&gens[0]).is_id() && r.gen_bool(0.5) {
            let g = ground_term(r, cfg, 2, &value_atoms(cfg));
            let pair = Term::App(Symbol::new("+"), vec![g.clone(), g.act(&gens[0])]);
            return self.canon(&pair);
        }
        let g = ground_term(r, cfg, cfg.depth.min(3), &avoiding(cfg, gens));
        self.canon(&g)
    }
}
