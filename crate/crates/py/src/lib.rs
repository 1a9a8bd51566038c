//! Python bindings: terms, permutations, the three decision procedures,
//! translations, model evaluation and the candidate validator.

use nomfix::deriv_fix::{check_judgement, verify_proof as verify_tree, FixOptions, ProofTree, Theory, VarRuleMode};
use nomfix::deriv_fresh::{check_alpha, check_fresh, FreshBody};
use nomfix::deriv_strong::{
    check_strong, render_strong_context, translate_fix_to_fresh, translate_fresh_judgement, translate_fresh_to_fix,
    translate_strong_judgement,
};
use nomfix::derivation::EqTheory;
use nomfix::permgroups::GenSet;
use nomfix::semantics::ModelKind;
use nomfix::syntax::{
    parse_fix_judgement, parse_fresh_context, parse_fresh_judgement, parse_judgement, parse_strong_context,
    parse_strong_judgement, parse_subst, Judgement,
};
use nomfix::terms::{parse_perm, parse_term, Atom, Signature};
use nomfix::unify_validate::{parse_candidate, parse_problem, validate as validate_candidate};
use nomfix::{demos, terms};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn theory(name: &str, sig: &Signature) -> PyResult<EqTheory> {
    match name.to_ascii_lowercase().as_str() {
        "core" => Ok(EqTheory::Core),
        "c" => Ok(EqTheory::c_of(sig)),
        other => Err(err(format!("unknown theory `{other}` (expected core or c)"))),
    }
}

/// A finite permutation of atoms, written as a product of swaps.
#[pyclass(name = "Perm", frozen, eq, hash, from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyPerm(terms::Perm);

#[pymethods]
impl PyPerm {
    #[new]
    #[pyo3(signature = (text = ""))]
    fn new(text: &str) -> PyResult<Self> {
        if text.trim().is_empty() || text.trim() == "id" {
            return Ok(PyPerm(terms::Perm::id()));
        }
        parse_perm(text).map(PyPerm).map_err(err)
    }

    #[staticmethod]
    fn swap(a: &str, b: &str) -> Self {
        PyPerm(terms::Perm::swap(Atom::user(a), Atom::user(b)))
    }

    /// `self ∘ other`: `other` applies first.
    fn compose(&self, other: &PyPerm) -> Self {
        PyPerm(self.0.compose(&other.0))
    }

    fn inverse(&self) -> Self {
        PyPerm(self.0.inverse())
    }

    fn apply(&self, a: &str) -> String {
        self.0.apply(&Atom::user(a)).to_string()
    }

    fn domain(&self) -> Vec<String> {
        self.0.domain().iter().map(ToString::to_string).collect()
    }

    fn __mul__(&self, other: &PyPerm) -> Self {
        self.compose(other)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Perm('{}')", self.0)
    }
}

/// A nominal term over the built-in signature.
#[pyclass(name = "Term", frozen, eq, hash, from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyTerm(terms::Term);

#[pymethods]
impl PyTerm {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        parse_term(text, &Signature::builtin()).map(PyTerm).map_err(err)
    }

    /// The permutation action `π·t`.
    fn act(&self, pi: &PyPerm) -> Self {
        PyTerm(self.0.act(&pi.0))
    }

    /// Applies a substitution written `X := t; Y := u`.
    fn subst(&self, sigma: &str) -> PyResult<Self> {
        let s = parse_subst(sigma, &Signature::builtin()).map_err(err)?;
        Ok(PyTerm(self.0.subst(&s)))
    }

    fn atoms(&self) -> Vec<String> {
        self.0.atoms().iter().map(ToString::to_string).collect()
    }

    fn vars(&self) -> Vec<String> {
        self.0.vars().iter().map(ToString::to_string).collect()
    }

    fn is_ground(&self) -> bool {
        self.0.is_ground()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Term('{}')", self.0)
    }
}

/// Result of a decision procedure.
#[pyclass(name = "Verdict", frozen, get_all)]
struct PyVerdict {
    system: String,
    judgement: String,
    derivable: bool,
    /// JSON text of the derivation tree, when one was built.
    derivation: Option<String>,
    failure: Option<String>,
}

#[pymethods]
impl PyVerdict {
    fn __bool__(&self) -> bool {
        self.derivable
    }

    fn __repr__(&self) -> String {
        format!("Verdict(system='{}', derivable={})", self.system, if self.derivable { "True" } else { "False" })
    }
}

/// Decides a judgement. `system` is fresh, fix, fix-gvar or strong-fix; by
/// default it is read off the text.
#[pyfunction]
#[pyo3(signature = (judgement, system = None, theory = "core"))]
fn check(judgement: &str, system: Option<&str>, theory: &str) -> PyResult<PyVerdict> {
    let sig = Signature::builtin();
    let th = self::theory(theory, &sig)?;
    let j = match system {
        None => parse_judgement(judgement, &sig),
        Some("fresh") => parse_fresh_judgement(judgement, &sig).map(Judgement::Fresh),
        Some("fix" | "fix-gvar") => parse_fix_judgement(judgement, &sig).map(Judgement::Fix),
        Some("strong-fix") => parse_strong_judgement(judgement, &sig).map(Judgement::Strong),
        Some(other) => return Err(err(format!("unknown system `{other}`"))),
    }
    .map_err(err)?;
    let shown = j.to_string();
    let to_json = |v: serde_json::Value| v.to_string();
    let (name, derivable, derivation, failure) = match j {
        Judgement::Fresh(fj) => {
            let v = match &fj.body {
                FreshBody::Fresh(a, t) => check_fresh(&fj.context, a, t),
                FreshBody::Alpha(s, t) => check_alpha(&fj.context, s, t, &th),
            };
            let d = v.derivation.map(|d| serde_json::to_string(&d).expect("derivations serialize"));
            ("fresh", v.derivable, d, v.failure)
        }
        Judgement::Fix(xj) => {
            let gvar = system == Some("fix-gvar");
            let mode = if gvar { VarRuleMode::GroupGenerated } else { VarRuleMode::SubsetDom };
            let v = check_judgement(&xj, &th, &FixOptions::mode(mode)).map_err(err)?;
            let d = v.derivation.as_ref().map(|t| to_json(t.to_json()));
            (if gvar { "fix-gvar" } else { "fix" }, v.derivable, d, v.failure)
        }
        Judgement::Strong(sj) => {
            let v = check_strong(&sj, &th).map_err(err)?;
            let d = v.derivation.map(|d| serde_json::to_string(&d).expect("derivations serialize"));
            ("strong-fix", v.derivable, d, v.failure)
        }
    };
    Ok(PyVerdict {
        system: name.into(),
        judgement: shown,
        derivable,
        derivation,
        failure,
    })
}

/// Translates a context or judgement: `fresh-to-fix` or `fix-to-fresh`.
#[pyfunction]
fn translate(direction: &str, text: &str) -> PyResult<String> {
    let sig = Signature::builtin();
    let judgement = text.contains("|-") || text.contains('⊢');
    match (direction, judgement) {
        ("fresh-to-fix", true) => Ok(translate_fresh_judgement(&parse_fresh_judgement(text, &sig).map_err(err)?).to_string()),
        ("fresh-to-fix", false) => Ok(render_strong_context(&translate_fresh_to_fix(
            &parse_fresh_context(text, &sig).map_err(err)?,
        ))),
        ("fix-to-fresh", true) => translate_strong_judgement(&parse_strong_judgement(text, &sig).map_err(err)?)
            .map(|j| j.to_string())
            .map_err(err),
        ("fix-to-fresh", false) => Ok(translate_fix_to_fresh(&parse_strong_context(text, &sig).map_err(err)?).to_string()),
        (other, _) => Err(err(format!("unknown direction `{other}`"))),
    }
}

/// Interprets a term in a model; returns the element in display form.
#[pyfunction]
fn eval(model: &str, valuation: &str, term: &str) -> PyResult<String> {
    let m: ModelKind = model.parse().map_err(err)?;
    m.eval(&Signature::builtin(), term, valuation).map_err(err)
}

/// Whether a judgement holds in a model under one valuation.
#[pyfunction]
fn validity(model: &str, valuation: &str, judgement: &str) -> PyResult<bool> {
    let m: ModelKind = model.parse().map_err(err)?;
    Ok(m.validity(&Signature::builtin(), judgement, valuation).map_err(err)?.valid)
}

/// Membership of `pi` in the group generated by `gens`.
#[pyfunction]
fn group_contains(gens: Vec<PyPerm>, pi: &PyPerm) -> PyResult<bool> {
    GenSet::new(gens.into_iter().map(|p| p.0)).contains(&pi.0).map_err(err)
}

/// Checks a JSON proof tree; returns `None` when valid and the first
/// mismatch otherwise.
#[pyfunction]
#[pyo3(signature = (proof_json, theory = "core", system = "fix"))]
fn verify_proof(proof_json: &str, theory: &str, system: &str) -> PyResult<Option<String>> {
    let sig = Signature::builtin();
    let tree = ProofTree::from_json_str(proof_json, &sig).map_err(err)?;
    let th = match theory {
        "core" => Theory::core(sig),
        "c" | "C" => Theory::c(sig),
        other => return Err(err(format!("unknown theory `{other}`"))),
    };
    let mode = match system {
        "fix" => VarRuleMode::SubsetDom,
        "fix-gvar" => VarRuleMode::GroupGenerated,
        other => return Err(err(format!("unknown system `{other}`"))),
    };
    Ok(verify_tree(&tree, &th, mode).err().map(|e| e.to_string()))
}

/// Validates a candidate against a problem, both in file syntax. Returns
/// `valid`, `valid-with-residual` or `invalid`.
#[pyfunction]
fn validate(problem: &str, candidate: &str) -> PyResult<String> {
    let sig = Signature::builtin();
    let p = parse_problem(problem, &sig).map_err(err)?;
    let c = parse_candidate(candidate, &sig).map_err(err)?;
    Ok(validate_candidate(&p, &c).map_err(err)?.outcome.to_string())
}

/// Runs a packaged scenario; returns `(reproduced, summary, lines)`.
#[pyfunction]
fn demo(name: &str) -> PyResult<(bool, String, Vec<String>)> {
    let d = demos::run(name).ok_or_else(|| err(format!("unknown demo `{name}`")))?;
    Ok((d.reproduced, d.summary, d.lines))
}

#[pymodule]
fn nomfix_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPerm>()?;
    m.add_class::<PyTerm>()?;
    m.add_class::<PyVerdict>()?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(translate, m)?)?;
    m.add_function(wrap_pyfunction!(eval, m)?)?;
    m.add_function(wrap_pyfunction!(validity, m)?)?;
    m.add_function(wrap_pyfunction!(group_contains, m)?)?;
    m.add_function(wrap_pyfunction!(verify_proof, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add_function(wrap_pyfunction!(demo, m)?)?;
    Ok(())
}
