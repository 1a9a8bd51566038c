//! Explicit derivation trees for the fixed-point equality rules, their JSON
//! form, and a checker for arbitrary theories.

use std::collections::BTreeSet;
use std::fmt;

use serde_json::{json, Map, Value};
use thiserror::Error;

use super::{FixBody, FixContext, FixJudgement, VarRuleMode};
use crate::permgroups::{GenSet, DEFAULT_CARRIER_BOUND};
use crate::syntax;
use crate::terms::{Atom, Parser, Perm, Signature, Subst, Symbol, Term, Var};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    Refl,
    Symm,
    Tran,
    Ax { axiom: String, pi: Perm, sigma: Subst },
    CongAbs,
    /// 1-based argument position
    CongF { position: usize },
    Fr { pi: Perm, var: Var },
    /// `(a b)·t = t` with fresh `c1 c2 d1 d2`
    Perm { a: Atom, b: Atom, fresh: [Atom; 4] },
    FixA,
    FixF,
    FixVar,
    FixAbs { fresh: [Atom; 2] },
}

impl Rule {
    pub fn label(&self) -> &'static str {
        match self {
            Rule::Refl => "refl",
            Rule::Symm => "symm",
            Rule::Tran => "tran",
            Rule::Ax { .. } => "ax",
            Rule::CongAbs => "cong_abs",
            Rule::CongF { .. } => "cong_f",
            Rule::Fr { .. } => "fr",
            Rule::Perm { .. } => "perm",
            Rule::FixA => "fix_a",
            Rule::FixF => "fix_f",
            Rule::FixVar => "fix_var",
            Rule::FixAbs { .. } => "fix_abs",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofTree {
    pub rule: Rule,
    pub conclusion: FixJudgement,
    pub premises: Vec<ProofTree>,
}

impl ProofTree {
    pub fn leaf(rule: Rule, conclusion: FixJudgement) -> ProofTree {
        ProofTree::node(rule, conclusion, Vec::new())
    }

    pub fn node(rule: Rule, conclusion: FixJudgement, premises: Vec<ProofTree>) -> ProofTree {
        ProofTree {
            rule,
            conclusion,
            premises,
        }
    }

    pub(crate) fn with_conclusion(mut self, conclusion: FixJudgement) -> ProofTree {
        self.conclusion = conclusion;
        self
    }

    fn eq_sides(&self) -> Option<(&Term, &Term)> {
        match &self.conclusion.body {
            FixBody::Eq(s, t) => Some((s, t)),
            FixBody::Fix(..) => None,
        }
    }

    /// `tran` of two equality proofs.
    pub fn tran(ctx: &FixContext, left: ProofTree, right: ProofTree) -> ProofTree {
        let s = left.eq_sides().expect("equality proof").0.clone();
        let t = right.eq_sides().expect("equality proof").1.clone();
        ProofTree::node(Rule::Tran, FixJudgement::eq(ctx.clone(), s, t), vec![left, right])
    }

    /// Right-nested `tran` over a non-empty chain `t0 = t1, t1 = t2, …`.
    pub fn chain(ctx: &FixContext, mut steps: Vec<ProofTree>) -> ProofTree {
        let mut acc = steps.pop().expect("non-empty chain");
        while let Some(step) = steps.pop() {
            acc = ProofTree::tran(ctx, step, acc);
        }
        acc
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(ProofTree::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.premises.iter().map(ProofTree::depth).max().unwrap_or(0)
    }

    /// Rule labels, pre-order.
    pub fn rules(&self) -> Vec<&'static str> {
        let mut out = vec![self.rule.label()];
        for p in &self.premises {
            out.extend(p.rules());
        }
        out
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(0, &mut out);
        out
    }

    fn render_into(&self, depth: usize, out: &mut String) {
        out.push_str(&"  ".repeat(depth));
        out.push_str(&format!("{}  ({})\n", self.conclusion, self.rule.label()));
        for p in &self.premises {
            p.render_into(depth + 1, out);
        }
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("rule".into(), json!(self.rule.label()));
        m.insert("conclusion".into(), json!(self.conclusion.to_string()));
        match &self.rule {
            Rule::Ax { axiom, pi, sigma } => {
                m.insert("axiom".into(), json!(axiom));
                m.insert("pi".into(), json!(pi.to_string()));
                m.insert("sigma".into(), json!(sigma_text(sigma)));
            }
            Rule::CongF { position } => {
                m.insert("position".into(), json!(position));
            }
            Rule::Fr { pi, var } => {
                m.insert("pi".into(), json!(pi.to_string()));
                m.insert("var".into(), json!(var.to_string()));
            }
            Rule::Perm { a, b, fresh } => {
                m.insert("swap".into(), json!([a.to_string(), b.to_string()]));
                m.insert("fresh".into(), json!(fresh.iter().map(ToString::to_string).collect::<Vec<_>>()));
            }
            Rule::FixAbs { fresh } => {
                m.insert("fresh".into(), json!(fresh.iter().map(ToString::to_string).collect::<Vec<_>>()));
            }
            _ => {}
        }
        if !self.premises.is_empty() {
            m.insert(
                "premises".into(),
                Value::Array(self.premises.iter().map(ProofTree::to_json).collect()),
            );
        }
        Value::Object(m)
    }

    pub fn from_json(v: &Value, sig: &Signature) -> Result<ProofTree, ProofFormatError> {
        from_json_at(v, sig, "root")
    }

    pub fn from_json_str(text: &str, sig: &Signature) -> Result<ProofTree, ProofFormatError> {
        let v: Value = serde_json::from_str(text).map_err(|e| ProofFormatError {
            path: "root".into(),
            reason: e.to_string(),
        })?;
        ProofTree::from_json(&v, sig)
    }
}

impl fmt::Display for ProofTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

fn sigma_text(sigma: &Subst) -> String {
    sigma
        .iter()
        .map(|(x, t)| format!("{x} := {t}"))
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed proof tree at {path}: {reason}")]
pub struct ProofFormatError {
    pub path: String,
    pub reason: String,
}

fn from_json_at(v: &Value, sig: &Signature, path: &str) -> Result<ProofTree, ProofFormatError> {
    let err = |reason: String| ProofFormatError {
        path: path.to_string(),
        reason,
    };
    let obj = v.as_object().ok_or_else(|| err("expected an object".into()))?;
    let field = |name: &str| -> Result<&str, ProofFormatError> {
        obj.get(name)
            .and_then(Value::as_str)
            .ok_or_else(|| err(format!("missing string field `{name}`")))
    };
    let atoms = |name: &str, n: usize| -> Result<Vec<Atom>, ProofFormatError> {
        let arr = obj
            .get(name)
            .and_then(Value::as_array)
            .ok_or_else(|| err(format!("missing array field `{name}`")))?;
        if arr.len() != n {
            return Err(err(format!("`{name}` must list {n} atoms")));
        }
        arr.iter()
            .map(|a| {
                let text = a.as_str().ok_or_else(|| err(format!("`{name}` entries must be strings")))?;
                parse_atom(text, sig).map_err(err)
            })
            .collect()
    };
    let perm = |name: &str| -> Result<Perm, ProofFormatError> {
        let text = field(name)?;
        let mut p = Parser::new(text, sig).map_err(|e| err(e.to_string()))?.allow_fresh(true);
        let pi = p.perm().map_err(|e| err(e.to_string()))?;
        p.finish().map_err(|e| err(e.to_string()))?;
        Ok(pi)
    };
    let label = field("rule")?;
    let conclusion = syntax::parse_fix_judgement_internal(field("conclusion")?, sig)
        .map_err(|e| err(format!("conclusion: {e}")))?;
    let rule = match label {
        "refl" => Rule::Refl,
        "symm" => Rule::Symm,
        "tran" => Rule::Tran,
        "ax" => {
            let sigma_src = obj.get("sigma").and_then(Value::as_str).unwrap_or("");
            let sigma = syntax::parse_subst_internal(sigma_src, sig).map_err(|e| err(format!("sigma: {e}")))?;
            Rule::Ax {
                axiom: field("axiom")?.to_string(),
                pi: if obj.contains_key("pi") { perm("pi")? } else { Perm::id() },
                sigma,
            }
        }
        "cong_abs" => Rule::CongAbs,
        "cong_f" => Rule::CongF {
            position: obj
                .get("position")
                .and_then(Value::as_u64)
                .ok_or_else(|| err("missing integer field `position`".into()))? as usize,
        },
        "fr" => {
            let name = field("var")?;
            if !name.chars().next().is_some_and(char::is_uppercase) {
                return Err(err(format!("`{name}` is not an unknown")));
            }
            Rule::Fr {
                pi: perm("pi")?,
                var: Var::new(name),
            }
        }
        "perm" => {
            let ab = atoms("swap", 2)?;
            let f = atoms("fresh", 4)?;
            Rule::Perm {
                a: ab[0].clone(),
                b: ab[1].clone(),
                fresh: [f[0].clone(), f[1].clone(), f[2].clone(), f[3].clone()],
            }
        }
        "fix_a" => Rule::FixA,
        "fix_f" => Rule::FixF,
        "fix_var" => Rule::FixVar,
        "fix_abs" => {
            let f = atoms("fresh", 2)?;
            Rule::FixAbs {
                fresh: [f[0].clone(), f[1].clone()],
            }
        }
        other => return Err(err(format!("unknown rule `{other}`"))),
    };
    let premises = match obj.get("premises") {
        None => Vec::new(),
        Some(Value::Array(items)) => items
            .iter()
            .enumerate()
            .map(|(i, p)| from_json_at(p, sig, &format!("{path}.{}", i + 1)))
            .collect::<Result<_, _>>()?,
        Some(_) => return Err(err("`premises` must be an array".into())),
    };
    Ok(ProofTree {
        rule,
        conclusion,
        premises,
    })
}

fn parse_atom(text: &str, sig: &Signature) -> Result<Atom, String> {
    let mut p = Parser::new(text, sig).map_err(|e| e.to_string())?.allow_fresh(true);
    let a = p.atom().map_err(|e| e.to_string())?;
    p.finish().map_err(|e| e.to_string())?;
    Ok(a)
}

/// An axiom `Υ' ⊢ t = u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Axiom {
    pub name: String,
    pub context: FixContext,
    pub lhs: Term,
    pub rhs: Term,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theory {
    pub name: String,
    pub signature: Signature,
    pub axioms: Vec<Axiom>,
}

impl Theory {
    /// No axioms.
    pub fn core(signature: Signature) -> Theory {
        Theory {
            name: "CORE".into(),
            signature,
            axioms: Vec::new(),
        }
    }

    /// `f(X, Y) = f(Y, X)` for every commutative symbol of the signature.
    pub fn c(signature: Signature) -> Theory {
        let axioms = signature
            .commutative_symbols()
            .map(|f| Axiom {
                name: Theory::c_axiom_name(f),
                context: FixContext::new(),
                lhs: Term::App(f.clone(), vec![Term::var("X"), Term::var("Y")]),
                rhs: Term::App(f.clone(), vec![Term::var("Y"), Term::var("X")]),
            })
            .collect();
        Theory {
            name: "C".into(),
            signature,
            axioms,
        }
    }

    pub fn c_axiom_name(f: &Symbol) -> String {
        format!("C({f})")
    }

    pub fn with_axiom(mut self, axiom: Axiom) -> Theory {
        self.axioms.push(axiom);
        self
    }

    pub fn axiom(&self, name: &str) -> Option<&Axiom> {
        self.axioms.iter().find(|a| a.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("rule mismatch at {path}: {reason}")]
pub struct RuleMismatch {
    /// `root`, then 1-based premise indices: `root.2.1`
    pub path: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofReport {
    pub nodes: usize,
    pub uses_fr: bool,
    pub axioms_used: BTreeSet<String>,
}

/// Checks every node of `tree`, reporting the first invalid one in
/// pre-order.
pub fn verify_proof(tree: &ProofTree, theory: &Theory, mode: VarRuleMode) -> Result<ProofReport, RuleMismatch> {
    let mut report = ProofReport {
        nodes: 0,
        uses_fr: false,
        axioms_used: BTreeSet::new(),
    };
    verify_at(tree, theory, mode, "root", &mut report)?;
    Ok(report)
}

fn verify_at(
    tree: &ProofTree,
    theory: &Theory,
    mode: VarRuleMode,
    path: &str,
    report: &mut ProofReport,
) -> Result<(), RuleMismatch> {
    check_node(tree, theory, mode, report).map_err(|reason| RuleMismatch {
        path: path.to_string(),
        reason,
    })?;
    report.nodes += 1;
    for (i, p) in tree.premises.iter().enumerate() {
        verify_at(p, theory, mode, &format!("{path}.{}", i + 1), report)?;
    }
    Ok(())
}

fn premise_count(tree: &ProofTree, n: usize) -> Result<(), String> {
    if tree.premises.len() == n {
        Ok(())
    } else {
        Err(format!(
            "{} takes {n} premise(s), found {}",
            tree.rule.label(),
            tree.premises.len()
        ))
    }
}

fn eq_of(j: &FixJudgement) -> Result<(&Term, &Term), String> {
    match &j.body {
        FixBody::Eq(s, t) => Ok((s, t)),
        FixBody::Fix(..) => Err(format!("expected an equality, found `{}`", j.body)),
    }
}

fn fix_of(j: &FixJudgement) -> Result<(&Perm, &Term), String> {
    match &j.body {
        FixBody::Fix(p, t) => Ok((p, t)),
        FixBody::Eq(..) => Err(format!("expected a fixed-point constraint, found `{}`", j.body)),
    }
}

fn same_context(tree: &ProofTree) -> Result<(), String> {
    for (i, p) in tree.premises.iter().enumerate() {
        if p.conclusion.context != tree.conclusion.context {
            return Err(format!("premise {} has a different context", i + 1));
        }
    }
    Ok(())
}

fn expect_premise(tree: &ProofTree, i: usize, want: &FixJudgement) -> Result<(), String> {
    let got = &tree.premises[i].conclusion;
    if got == want {
        Ok(())
    } else {
        Err(format!("premise {} should be `{want}`, found `{got}`", i + 1))
    }
}

fn check_fresh_atoms(fresh: &[Atom], avoid: &BTreeSet<Atom>) -> Result<(), String> {
    let distinct: BTreeSet<&Atom> = fresh.iter().collect();
    if distinct.len() != fresh.len() {
        return Err("the fresh atoms must be pairwise distinct".into());
    }
    if let Some(a) = fresh.iter().find(|a| avoid.contains(a)) {
        return Err(format!("{a} is not fresh: it occurs in the conclusion"));
    }
    Ok(())
}

fn check_signature(j: &FixJudgement, sig: &Signature) -> Result<(), String> {
    let terms: Vec<&Term> = match &j.body {
        FixBody::Fix(_, t) => vec![t],
        FixBody::Eq(s, t) => vec![s, t],
    };
    for t in terms {
        sig.check_term(t).map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn check_node(tree: &ProofTree, theory: &Theory, mode: VarRuleMode, report: &mut ProofReport) -> Result<(), String> {
    let concl = &tree.conclusion;
    let ctx = &concl.context;
    check_signature(concl, &theory.signature)?;
    match &tree.rule {
        Rule::Refl => {
            premise_count(tree, 0)?;
            let (s, t) = eq_of(concl)?;
            if s != t {
                return Err(format!("refl needs identical sides, found `{s}` and `{t}`"));
            }
        }
        Rule::Symm => {
            premise_count(tree, 1)?;
            same_context(tree)?;
            let (s, t) = eq_of(concl)?;
            expect_premise(tree, 0, &FixJudgement::eq(ctx.clone(), t.clone(), s.clone()))?;
        }
        Rule::Tran => {
            premise_count(tree, 2)?;
            same_context(tree)?;
            let (s, v) = eq_of(concl)?;
            let (s1, u1) = eq_of(&tree.premises[0].conclusion)?;
            let (u2, v2) = eq_of(&tree.premises[1].conclusion)?;
            if s1 != s || v2 != v {
                return Err("the outer sides of the premises do not match the conclusion".into());
            }
            if u1 != u2 {
                return Err(format!("middle terms differ: `{u1}` and `{u2}`"));
            }
        }
        Rule::Ax { axiom, pi, sigma } => {
            same_context(tree)?;
            let ax = theory
                .axiom(axiom)
                .ok_or_else(|| format!("axiom `{axiom}` is not in theory {}", theory.name))?;
            for (_, u) in sigma.iter() {
                theory.signature.check_term(u).map_err(|e| e.to_string())?;
            }
            let (s, t) = eq_of(concl)?;
            let want_s = ax.lhs.subst(sigma).act(pi);
            let want_t = ax.rhs.subst(sigma).act(pi);
            if *s != want_s || *t != want_t {
                return Err(format!("instance of `{axiom}` is `{want_s} = {want_t}`"));
            }
            let required: BTreeSet<FixBody> = ax
                .context
                .iter()
                .map(|(p, x)| FixBody::Fix(p.conjugate(pi), Term::Susp(Perm::id(), x.clone()).subst(sigma).act(pi)))
                .collect();
            let given: BTreeSet<FixBody> = tree.premises.iter().map(|p| p.conclusion.body.clone()).collect();
            if required != given || tree.premises.len() != required.len() {
                let want: Vec<String> = required.iter().map(ToString::to_string).collect();
                return Err(format!("premises must be exactly {{{}}}", want.join(", ")));
            }
            report.axioms_used.insert(axiom.clone());
        }
        Rule::CongAbs => {
            premise_count(tree, 1)?;
            same_context(tree)?;
            let (s, t) = eq_of(concl)?;
            match (s, t) {
                (Term::Abs(a, s1), Term::Abs(b, t1)) if a == b => {
                    expect_premise(tree, 0, &FixJudgement::eq(ctx.clone(), (**s1).clone(), (**t1).clone()))?;
                }
                _ => return Err("cong_abs needs abstractions over the same atom".into()),
            }
        }
        Rule::CongF { position } => {
            premise_count(tree, 1)?;
            same_context(tree)?;
            let (s, t) = eq_of(concl)?;
            let (Term::App(f, xs), Term::App(g, ys)) = (s, t) else {
                return Err("cong_f needs applications on both sides".into());
            };
            if f != g || xs.len() != ys.len() {
                return Err(format!("cong_f needs the same head, found {f} and {g}"));
            }
            let k = *position;
            if k == 0 || k > xs.len() {
                return Err(format!("position {k} is out of range for {f}"));
            }
            if xs.iter().zip(ys).enumerate().any(|(i, (u, v))| i + 1 != k && u != v) {
                return Err(format!("arguments other than position {k} differ"));
            }
            expect_premise(tree, 0, &FixJudgement::eq(ctx.clone(), xs[k - 1].clone(), ys[k - 1].clone()))?;
        }
        Rule::Fr { pi, var } => {
            premise_count(tree, 1)?;
            eq_of(concl)?;
            let dom = ctx.dom_of(var);
            if !pi.domain().is_subset(&dom) {
                return Err(format!("dom({pi}) is not contained in dom(perm(Υ|{var}))"));
            }
            let mut wider = ctx.clone();
            wider.insert(pi.clone(), var.clone());
            expect_premise(tree, 0, &FixJudgement { context: wider, body: concl.body.clone() })?;
            report.uses_fr = true;
        }
        Rule::Perm { a, b, fresh } => {
            premise_count(tree, 2)?;
            let (l, t) = eq_of(concl)?;
            let ab = Perm::swap(a.clone(), b.clone());
            if *l != t.act(&ab) {
                return Err(format!("left side should be ({a} {b})·{t}"));
            }
            let mut avoid = concl.mentioned_atoms();
            avoid.insert(a.clone());
            avoid.insert(b.clone());
            check_fresh_atoms(fresh, &avoid)?;
            let [c1, c2, d1, d2] = fresh;
            let vars = t.vars();
            expect_premise(
                tree,
                0,
                &FixJudgement::fix(ctx.extended(c1, c2, &vars), Perm::swap(a.clone(), c1.clone()), t.clone()),
            )?;
            expect_premise(
                tree,
                1,
                &FixJudgement::fix(ctx.extended(d1, d2, &vars), Perm::swap(b.clone(), d1.clone()), t.clone()),
            )?;
        }
        Rule::FixA => {
            premise_count(tree, 0)?;
            let (pi, t) = fix_of(concl)?;
            match t {
                Term::Atom(a) if pi.apply(a) == *a => {}
                Term::Atom(a) => return Err(format!("{pi} moves {a}")),
                _ => return Err("fix_a needs an atom".into()),
            }
        }
        Rule::FixF => {
            same_context(tree)?;
            let (pi, t) = fix_of(concl)?;
            let Term::App(_, args) = t else {
                return Err("fix_f needs an application".into());
            };
            premise_count(tree, args.len())?;
            for (i, u) in args.iter().enumerate() {
                expect_premise(tree, i, &FixJudgement::fix(ctx.clone(), pi.clone(), u.clone()))?;
            }
        }
        Rule::FixVar => {
            premise_count(tree, 0)?;
            let (pi, t) = fix_of(concl)?;
            let Term::Susp(rho, x) = t else {
                return Err("fix_var needs a suspension".into());
            };
            let g = pi.conjugate(&rho.inverse());
            let ok = match mode {
                VarRuleMode::SubsetDom => g.domain().is_subset(&ctx.dom_of(x)),
                VarRuleMode::GroupGenerated => GenSet::new(ctx.perms_of(x))
                    .with_bound(DEFAULT_CARRIER_BOUND)
                    .contains(&g)
                    .map_err(|e| e.to_string())?,
            };
            if !ok {
                return Err(format!("side condition of fix_var fails for {g} ({})", mode.name()));
            }
        }
        Rule::FixAbs { fresh } => {
            premise_count(tree, 1)?;
            let (pi, t) = fix_of(concl)?;
            let Term::Abs(a, body) = t else {
                return Err("fix_abs needs an abstraction".into());
            };
            check_fresh_atoms(fresh, &concl.mentioned_atoms())?;
            let [c1, c2] = fresh;
            expect_premise(
                tree,
                0,
                &FixJudgement::fix(
                    ctx.extended(c1, c2, &body.vars()),
                    pi.clone(),
                    body.act(&Perm::swap(a.clone(), c1.clone())),
                ),
            )?;
        }
    }
    Ok(())
}
