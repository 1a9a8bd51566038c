use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::models::{GroundMod, PFin, Singleton, Words};
use super::{
    body_holds, context_valid, fresh_context_valid, fresh_judgement_valid, interpret, SemError, SigmaAlgebra, Valuation,
};
use crate::deriv_fix::{FixBody, FixJudgement};
use crate::deriv_fresh::{FreshBody, FreshJudgement};
use crate::syntax::{parse_judgement, Judgement};
use crate::terms::{parse_term, Signature, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ModelKind {
    Singleton,
    PFin,
    Words,
    GroundAlpha,
    GroundAlphaC,
}

impl ModelKind {
    pub const ALL: [ModelKind; 5] = [
        ModelKind::Singleton,
        ModelKind::PFin,
        ModelKind::Words,
        ModelKind::GroundAlpha,
        ModelKind::GroundAlphaC,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Singleton => "singleton",
            ModelKind::PFin => "pfin",
            ModelKind::Words => "words",
            ModelKind::GroundAlpha => "ground-alpha",
            ModelKind::GroundAlphaC => "ground-alpha-c",
        }
    }

    pub fn is_strong(self) -> bool {
        !matches!(self, ModelKind::PFin | ModelKind::GroundAlphaC)
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = SemError;

    fn from_str(s: &str) -> Result<ModelKind, SemError> {
        ModelKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| SemError::UnknownModel(s.into()))
    }
}

/// Outcome of checking one judgement under one valuation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidityReport {
    pub model: String,
    pub judgement: String,
    pub valuation: Vec<(String, String)>,
    pub context_valid: bool,
    pub body_holds: bool,
    /// Context validity implies the body.
    pub valid: bool,
    /// The two compared values: both sides of an equation, `π·⟦t⟧` and
    /// `⟦t⟧` for a fixed-point body, `a` and `supp ⟦t⟧` for freshness.
    pub values: (String, String),
}

/// Splits `X := v; Y := w` (or one binding per line) into parsed pairs.
fn parse_valuation<M: SigmaAlgebra>(m: &M, sig: &Signature, text: &str) -> Result<Valuation<M::Elem>, SemError> {
    let mut val = Valuation::new();
    for item in text.split([';', '\n']).map(str::trim).filter(|s| !s.is_empty()) {
        let (x, v) = item
            .split_once(":=")
            .ok_or_else(|| SemError::Syntax(format!("expected `X := value`, got `{item}`")))?;
        let x = x.trim();
        if !x.chars().next().is_some_and(char::is_uppercase) {
            return Err(SemError::Syntax(format!("`{x}` is not an unknown")));
        }
        val.insert(Var::new(x), m.parse_elem(v, sig)?);
    }
    Ok(val)
}

fn show_valuation<M: SigmaAlgebra>(m: &M, val: &Valuation<M::Elem>) -> Vec<(String, String)> {
    val.iter().map(|(x, e)| (x.to_string(), m.show(e))).collect()
}

fn eval_in<M: SigmaAlgebra>(m: &M, sig: &Signature, term: &str, valuation: &str) -> Result<String, SemError> {
    let t = parse_term(term, sig).map_err(|e| SemError::Syntax(e.to_string()))?;
    let val = parse_valuation(m, sig, valuation)?;
    Ok(m.show(&interpret(m, &val, &t)?))
}

fn fix_report<M: SigmaAlgebra>(m: &M, val: &Valuation<M::Elem>, j: &FixJudgement) -> Result<ValidityReport, SemError> {
    let ctx = context_valid(m, val, &j.context)?;
    let holds = body_holds(m, val, &j.body)?;
    let values = match &j.body {
        FixBody::Fix(pi, t) => {
            let x = interpret(m, val, t)?;
            (m.show(&m.act(pi, &x)), m.show(&x))
        }
        FixBody::Eq(s, t) => (m.show(&interpret(m, val, s)?), m.show(&interpret(m, val, t)?)),
    };
    Ok(ValidityReport {
        model: m.name().into(),
        judgement: j.to_string(),
        valuation: show_valuation(m, val),
        context_valid: ctx,
        body_holds: holds,
        valid: !ctx || holds,
        values,
    })
}

fn fresh_report<M: SigmaAlgebra>(
    m: &M,
    val: &Valuation<M::Elem>,
    j: &FreshJudgement,
) -> Result<ValidityReport, SemError> {
    let context_ok = fresh_context_valid(m, val, &j.context)?;
    let valid = fresh_judgement_valid(m, val, j)?;
    let (holds, values) = match &j.body {
        FreshBody::Fresh(a, t) => {
            let supp = m.supp(&interpret(m, val, t)?);
            let shown: Vec<String> = supp.iter().map(ToString::to_string).collect();
            (!supp.contains(a), (a.to_string(), format!("{{{}}}", shown.join(", "))))
        }
        FreshBody::Alpha(s, t) => {
            let (x, y) = (interpret(m, val, s)?, interpret(m, val, t)?);
            (x == y, (m.show(&x), m.show(&y)))
        }
    };
    Ok(ValidityReport {
        model: m.name().into(),
        judgement: j.to_string(),
        valuation: show_valuation(m, val),
        context_valid: context_ok,
        body_holds: holds,
        valid,
        values,
    })
}

fn validity_in<M: SigmaAlgebra>(
    m: &M,
    sig: &Signature,
    judgement: &str,
    valuation: &str,
) -> Result<ValidityReport, SemError> {
    let j = parse_judgement(judgement, sig).map_err(|e| SemError::Syntax(e.to_string()))?;
    let val = parse_valuation(m, sig, valuation)?;
    match j {
        Judgement::Fix(j) => fix_report(m, &val, &j),
        Judgement::Fresh(j) => fresh_report(m, &val, &j),
        Judgement::Strong(_) => Err(SemError::Syntax(
            "strong judgements have no direct reading; translate them first".into(),
        )),
    }
}

macro_rules! dispatch {
    ($kind:expr, $sig:expr, |$m:ident| $body:expr) => {
        match $kind {
            ModelKind::Singleton => {
                let $m = &Singleton;
                $body
            }
            ModelKind::PFin => {
                let $m = &PFin;
                $body
            }
            ModelKind::Words => {
                let $m = &Words;
                $body
            }
            ModelKind::GroundAlpha => {
                let $m = &GroundMod::alpha();
                $body
            }
            ModelKind::GroundAlphaC => {
                let $m = &GroundMod::alpha_c($sig);
                $body
            }
        }
    };
}

impl ModelKind {
    /// `⟦term⟧` under a textual valuation, printed in the model's notation.
    pub fn eval(self, sig: &Signature, term: &str, valuation: &str) -> Result<String, SemError> {
        dispatch!(self, sig, |m| eval_in(m, sig, term, valuation))
    }

    /// Checks a fixed-point or freshness judgement under a textual valuation.
    pub fn validity(self, sig: &Signature, judgement: &str, valuation: &str) -> Result<ValidityReport, SemError> {
        dispatch!(self, sig, |m| validity_in(m, sig, judgement, valuation))
    }
}
