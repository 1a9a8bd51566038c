//! Command implementations behind the `nomfix` binary. Every command returns
//! a [`Report`]; the binary prints it and exits with its code.

use std::fmt;

use nomfix::deriv_fix::{check_judgement, verify_proof, FixOptions, ProofTree, Theory, VarRuleMode};
use nomfix::deriv_fresh::{check_alpha, check_fresh, FreshBody};
use nomfix::deriv_strong::{
    check_strong, render_strong_context, translate_fix_to_fresh, translate_fresh_judgement, translate_fresh_to_fix,
    translate_strong_judgement,
};
use nomfix::derivation::EqTheory;
use nomfix::semantics::ModelKind;
use nomfix::syntax::{
    parse_fix_judgement, parse_fresh_context, parse_fresh_judgement, parse_judgement,
    parse_strong_context, parse_strong_judgement, parse_subst, Judgement,
};
use nomfix::terms::{Signature, Subst};
use nomfix::unify_validate::{instantiate_and_check, parse_candidate, parse_problem, validate, Candidate, Outcome};
use nomfix::{demos, suites};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// `true`/`false`, or one of the tags `valid-with-residual` and `error`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ReportVerdict {
    Bool(bool),
    Tag(String),
}

impl ReportVerdict {
    pub fn error() -> ReportVerdict {
        ReportVerdict::Tag("error".into())
    }

    pub fn residual() -> ReportVerdict {
        ReportVerdict::Tag("valid-with-residual".into())
    }

    fn exit_code(&self) -> i32 {
        match self {
            ReportVerdict::Bool(true) => EXIT_YES,
            ReportVerdict::Bool(false) => EXIT_NO,
            ReportVerdict::Tag(t) if t == "valid-with-residual" => EXIT_YES,
            ReportVerdict::Tag(_) => EXIT_INPUT,
        }
    }
}

impl fmt::Display for ReportVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReportVerdict::Bool(b) => write!(f, "{b}"),
            ReportVerdict::Tag(t) => f.write_str(t),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub system: String,
    pub verdict: ReportVerdict,
    /// Human-readable result lines.
    #[serde(default)]
    pub output: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derivation: Option<Value>,
    #[serde(default)]
    pub diagnostics: Vec<String>,
    /// Command-specific structured payload.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<Value>,
    pub exit_code: i32,
}

impl Report {
    pub fn new(command: &str, system: &str, verdict: ReportVerdict) -> Report {
        let exit_code = verdict.exit_code();
        Report {
            command: command.into(),
            system: system.into(),
            verdict,
            output: Vec::new(),
            derivation: None,
            diagnostics: Vec::new(),
            data: None,
            exit_code,
        }
    }

    pub fn error(command: &str, system: &str, message: impl Into<String>) -> Report {
        let mut r = Report::new(command, system, ReportVerdict::error());
        r.diagnostics.push(message.into());
        r
    }

    fn line(mut self, s: impl Into<String>) -> Report {
        self.output.push(s.into());
        self
    }

    fn data(mut self, v: impl Serialize) -> Report {
        self.data = Some(serde_json::to_value(v).expect("report payloads serialize"));
        self
    }

    /// The text printed without `--json`.
    pub fn render(&self, show_proof: bool) -> String {
        let mut out = String::new();
        for l in &self.output {
            out.push_str(l);
            out.push('\n');
        }
        if show_proof {
            if let Some(d) = &self.derivation {
                out.push_str(&render_tree(d, 0));
            }
        }
        for d in &self.diagnostics {
            out.push_str(&format!("note: {d}\n"));
        }
        out
    }
}

/// Indented rendering of either serialized tree shape.
fn render_tree(v: &Value, depth: usize) -> String {
    let concl = v.get("conclusion").and_then(Value::as_str).unwrap_or("?");
    let rule = v.get("rule").and_then(Value::as_str).unwrap_or("?");
    let mut out = format!("{}{concl}  ({rule})\n", "  ".repeat(depth));
    if let Some(ps) = v.get("premises").and_then(Value::as_array) {
        for p in ps {
            out.push_str(&render_tree(p, depth + 1));
        }
    }
    out
}

/// Options shared by every command.
#[derive(Clone, Debug)]
pub struct Settings {
    pub signature: Signature,
    pub theory: TheoryChoice,
    pub carrier_bound: usize,
}

impl Default for Settings {
    fn default() -> Settings {
        Settings {
            signature: Signature::builtin(),
            theory: TheoryChoice::Core,
            carrier_bound: FixOptions::default().carrier_bound,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TheoryChoice {
    Core,
    C,
}

impl TheoryChoice {
    pub fn parse(s: &str) -> Option<TheoryChoice> {
        match s.to_ascii_lowercase().as_str() {
            "core" => Some(TheoryChoice::Core),
            "c" => Some(TheoryChoice::C),
            _ => None,
        }
    }

    fn eq_theory(self, sig: &Signature) -> EqTheory {
        match self {
            TheoryChoice::Core => EqTheory::Core,
            TheoryChoice::C => EqTheory::c_of(sig),
        }
    }
}

pub const SYSTEMS: [&str; 4] = ["fresh", "fix", "fix-gvar", "strong-fix"];

fn verdict_report(
    command: &str,
    system: &str,
    judgement: &str,
    derivable: bool,
    derivation: Option<Value>,
    failure: Option<String>,
) -> Report {
    let mut r = Report::new(command, system, ReportVerdict::Bool(derivable)).line(format!(
        "{}: {judgement}",
        if derivable { "derivable" } else { "not derivable" }
    ));
    r.derivation = derivation;
    r.diagnostics.extend(failure);
    r
}

/// Decides a judgement. `system` is one of [`SYSTEMS`]; `None` picks the
/// system from the shape of the text.
pub fn cmd_check(system: Option<&str>, text: &str, settings: &Settings) -> Report {
    let sig = &settings.signature;
    let parsed = match system {
        None => parse_judgement(text, sig).map(|j| {
            let name = match j {
                Judgement::Fresh(_) => "fresh",
                Judgement::Fix(_) => "fix",
                Judgement::Strong(_) => "strong-fix",
            };
            (name, j)
        }),
        Some(s @ "fresh") => parse_fresh_judgement(text, sig).map(|j| (s, Judgement::Fresh(j))),
        Some(s @ ("fix" | "fix-gvar")) => parse_fix_judgement(text, sig).map(|j| (s, Judgement::Fix(j))),
        Some(s @ "strong-fix") => parse_strong_judgement(text, sig).map(|j| (s, Judgement::Strong(j))),
        Some(other) => {
            return Report::error(
                "check",
                other,
                format!("unknown system `{other}` (expected one of {})", SYSTEMS.join(", ")),
            )
        }
    };
    let (name, j) = match parsed {
        Ok(p) => p,
        Err(e) => return Report::error("check", system.unwrap_or("auto"), format!("parse error: {e}")),
    };
    let theory = settings.theory.eq_theory(sig);
    let shown = j.to_string();
    match j {
        Judgement::Fresh(fj) => {
            let v = match &fj.body {
                FreshBody::Fresh(a, t) => check_fresh(&fj.context, a, t),
                FreshBody::Alpha(s, t) => check_alpha(&fj.context, s, t, &theory),
            };
            let d = v.derivation.map(|d| serde_json::to_value(d).expect("derivations serialize"));
            verdict_report("check", name, &shown, v.derivable, d, v.failure)
        }
        Judgement::Fix(xj) => {
            let mode = if name == "fix-gvar" {
                VarRuleMode::GroupGenerated
            } else {
                VarRuleMode::SubsetDom
            };
            let opts = FixOptions {
                carrier_bound: settings.carrier_bound,
                ..FixOptions::mode(mode)
            };
            match check_judgement(&xj, &theory, &opts) {
                Ok(v) => {
                    let d = v.derivation.as_ref().map(ProofTree::to_json);
                    verdict_report("check", name, &shown, v.derivable, d, v.failure)
                }
                Err(e) => Report::error("check", name, e.to_string()),
            }
        }
        Judgement::Strong(sj) => match check_strong(&sj, &theory) {
            Ok(v) => {
                let d = v.derivation.map(|d| serde_json::to_value(d).expect("derivations serialize"));
                verdict_report("check", name, &shown, v.derivable, d, v.failure)
            }
            Err(e) => Report::error("check", name, e.to_string()),
        },
    }
}

/// Translates a context, or a whole judgement when the text contains `|-`.
pub fn cmd_translate(direction: &str, text: &str, settings: &Settings) -> Report {
    let sig = &settings.signature;
    let is_judgement = text.contains("|-") || text.contains('⊢');
    let result: Result<String, String> = match direction {
        "fresh-to-fix" if is_judgement => parse_fresh_judgement(text, sig)
            .map(|j| translate_fresh_judgement(&j).to_string())
            .map_err(|e| format!("parse error: {e}")),
        "fresh-to-fix" => parse_fresh_context(text, sig)
            .map(|c| render_strong_context(&translate_fresh_to_fix(&c)))
            .map_err(|e| format!("parse error: {e}")),
        "fix-to-fresh" if is_judgement => match parse_strong_judgement(text, sig) {
            Ok(j) => translate_strong_judgement(&j).map(|f| f.to_string()).map_err(|e| e.to_string()),
            Err(e) => Err(format!("parse error: {e}")),
        },
        "fix-to-fresh" => parse_strong_context(text, sig)
            .map(|c| translate_fix_to_fresh(&c).to_string())
            .map_err(|e| format!("parse error: {e}")),
        other => Err(format!(
            "unknown direction `{other}` (expected fresh-to-fix or fix-to-fresh)"
        )),
    };
    match result {
        Ok(out) => Report::new("translate", direction, ReportVerdict::Bool(true)).line(out),
        Err(e) => Report::error("translate", direction, e),
    }
}

fn model(name: &str) -> Result<ModelKind, String> {
    name.parse::<ModelKind>().map_err(|e| e.to_string())
}

/// Interprets a term in a model.
pub fn cmd_eval(model_name: &str, valuation: &str, term: &str, settings: &Settings) -> Report {
    let m = match model(model_name) {
        Ok(m) => m,
        Err(e) => return Report::error("eval", model_name, e),
    };
    match m.eval(&settings.signature, term, valuation) {
        Ok(v) => Report::new("eval", m.name(), ReportVerdict::Bool(true)).line(v),
        Err(e) => Report::error("eval", m.name(), e.to_string()),
    }
}

/// Checks a judgement in a model under one valuation.
pub fn cmd_validity(model_name: &str, valuation: &str, judgement: &str, settings: &Settings) -> Report {
    let m = match model(model_name) {
        Ok(m) => m,
        Err(e) => return Report::error("validity", model_name, e),
    };
    match m.validity(&settings.signature, judgement, valuation) {
        Ok(v) => {
            Report::new("validity", m.name(), ReportVerdict::Bool(v.valid))
                .line(format!("{}: {}", if v.valid { "valid" } else { "invalid" }, v.judgement))
                .line(format!("context valid: {}", v.context_valid))
                .line(format!("body holds: {}", v.body_holds))
                .line(format!("values: {} vs {}", v.values.0, v.values.1))
                .data(&v)
        }
        Err(e) => Report::error("validity", m.name(), e.to_string()),
    }
}

/// Runs a packaged scenario.
pub fn cmd_demo(name: &str) -> Report {
    match demos::run(name) {
        Some(d) => {
            let mut r = Report::new("demo", name, ReportVerdict::Bool(d.reproduced));
            r.output = d.lines.clone();
            r.output.push(d.summary.clone());
            if let Some(div) = &d.divergence {
                r.diagnostics.push(format!("reproduction failure at {div}"));
            }
            r.data(&d)
        }
        None => Report::error(
            "demo",
            name,
            format!("unknown demo `{name}` (expected one of {})", demos::DEMO_NAMES.join(", ")),
        ),
    }
}

/// Checks a proof tree in JSON form against CORE or C.
pub fn cmd_verify(json: &str, system: Option<&str>, settings: &Settings) -> Report {
    let sys = system.unwrap_or("fix");
    let mode = match sys {
        "fix" => VarRuleMode::SubsetDom,
        "fix-gvar" => VarRuleMode::GroupGenerated,
        other => return Report::error("verify", other, "verify accepts the fix and fix-gvar systems"),
    };
    let sig = &settings.signature;
    // a whole `--json` report is accepted as well as a bare tree
    let parsed = match serde_json::from_str::<Value>(json) {
        Ok(Value::Object(mut m)) if !m.contains_key("rule") && m.contains_key("derivation") => {
            ProofTree::from_json(&m.remove("derivation").expect("checked"), sig)
        }
        _ => ProofTree::from_json_str(json, sig),
    };
    let tree = match parsed {
        Ok(t) => t,
        Err(e) => return Report::error("verify", sys, e.to_string()),
    };
    let theory = match settings.theory {
        TheoryChoice::Core => Theory::core(sig.clone()),
        TheoryChoice::C => Theory::c(sig.clone()),
    };
    match verify_proof(&tree, &theory, mode) {
        Ok(rep) => Report::new("verify", sys, ReportVerdict::Bool(true))
            .line(format!("valid proof of {}", tree.conclusion))
            .line(format!("{} nodes, fr used: {}", rep.nodes, rep.uses_fr)),
        Err(e) => Report::new("verify", sys, ReportVerdict::Bool(false))
            .line(format!("invalid proof of {}", tree.conclusion))
            .line(e.to_string()),
    }
}

/// Validates a candidate solution; with `instance`, checks that ground
/// instance of a fix-pair candidate instead.
pub fn cmd_validate(problem: &str, candidate: &str, instance: Option<&str>, settings: &Settings) -> Report {
    let sig = &settings.signature;
    let problem = match parse_problem(problem, sig) {
        Ok(p) => p,
        Err(e) => return Report::error("validate", "problem", e.to_string()),
    };
    let cand = match parse_candidate(candidate, sig) {
        Ok(c) => c,
        Err(e) => return Report::error("validate", "candidate", e.to_string()),
    };
    let result = match instance {
        None => validate(&problem, &cand),
        Some(text) => {
            let Candidate::FixPair { upsilon, sigma } = &cand else {
                return Report::error("validate", cand.format_name(), "--instance needs a fix-pair candidate");
            };
            let delta: Subst = match parse_subst(text, sig) {
                Ok(d) => d,
                Err(e) => return Report::error("validate", cand.format_name(), format!("parse error: {e}")),
            };
            instantiate_and_check(&problem, upsilon, sigma, &delta)
        }
    };
    match result {
        Ok(rep) => {
            let verdict = match rep.outcome {
                Outcome::Valid => ReportVerdict::Bool(true),
                Outcome::ValidWithResidual => ReportVerdict::residual(),
                Outcome::Invalid => ReportVerdict::Bool(false),
            };
            let mut r = Report::new("validate", cand.format_name(), verdict).line(rep.outcome.to_string());
            for c in &rep.constraints {
                r.output.push(format!(
                    "  {} {}: {}{}",
                    if c.ok { "ok  " } else { "FAIL" },
                    c.kind,
                    c.constraint,
                    c.detail.as_ref().map(|d| format!(" ({d})")).unwrap_or_default()
                ));
            }
            r.data(&rep)
        }
        Err(e) => Report::error("validate", cand.format_name(), e.to_string()),
    }
}

/// Runs a randomized property suite.
pub fn cmd_suite(name: &str, seed: u64) -> Report {
    let Some(reports) = suites::run_named(name, seed) else {
        return Report::error(
            "suite",
            name,
            format!("unknown suite `{name}` (expected one of {})", suites::SUITE_NAMES.join(", ")),
        );
    };
    let ok = reports.iter().all(|r| r.passed());
    let mut r = Report::new("suite", name, ReportVerdict::Bool(ok));
    for s in &reports {
        r.output.push(format!(
            "{:<28} {} cases, {} checks, {} violations, {} ms",
            s.name, s.cases, s.checks, s.violations, s.elapsed_ms
        ));
        for n in &s.notes {
            r.output.push(format!("  {n}"));
        }
        for e in &s.examples {
            r.diagnostics.push(format!("{}: {e}", s.name));
        }
    }
    r.data(&reports)
}

/// Reads a signature file in `symbol/arity [comm]` form.
pub fn load_signature(text: &str) -> Result<Signature, String> {
    Signature::parse(text).map_err(|e| e.to_string())
}
