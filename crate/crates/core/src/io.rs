//! JSON formats.
//!
//! Pencil:
//! ```json
//! {"fiber": {"model": "torus"}, "cycles": [[1,0],[0,1]]}
//! {"fiber": {"model": "sp", "genus": 2}, "cycles": [[1,0,0,0]]}
//! {"fiber": {"model": "disc", "punctures": 3}, "cycles": ["x2 x3", "x1 x3"]}
//! ```
//! Homology entries that do not fit in an `i64` are written as decimal strings.
//!
//! Automorphism: `{"braid": "s1 S2", "fiber_element": [[1,0],[0,1]]}`, where the
//! fiber element is a matrix for homology models, a braid word for the disc
//! model, and the identity when omitted.
//!
//! Local perturbation instance: polynomials map comma-separated exponent
//! tuples to `[re, im]`, e.g. `{"p": {"2": [1,0], "0": [-0.25,0]}, "q": {"0": [0.5,0]},
//! "kappa": 0.5, "delta": 0.1, "pexp": 2}`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::fiber::{Cycle, FiberElement, FiberError, FiberModel, HomologyClass, IntMatrix};
use crate::pencil::{Automorphism, Pencil, PencilError};
use crate::transversal::{LocalTransInstance, Monomial, Polynomial, TransversalError};
use crate::wordcore::{Braid, FreeWord, WordError};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Schema(String),
    #[error(transparent)]
    Fiber(#[from] FiberError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Pencil(#[from] PencilError),
    #[error(transparent)]
    Transversal(#[from] TransversalError),
}

fn schema<T>(msg: impl Into<String>) -> Result<T, IoError> {
    Err(IoError::Schema(msg.into()))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FiberDoc {
    model: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    genus: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    punctures: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PencilDoc {
    fiber: FiberDoc,
    cycles: Vec<Value>,
}

fn model_from_doc(f: &FiberDoc) -> Result<FiberModel, IoError> {
    let model = match (f.model.as_str(), f.genus, f.punctures) {
        ("torus", None, None) => FiberModel::Torus,
        ("sp", Some(genus), None) => FiberModel::Symplectic { genus },
        ("disc", None, Some(punctures)) => FiberModel::Disc { punctures },
        ("torus" | "sp" | "disc", _, _) => {
            return schema(format!("model {:?} takes {}", f.model, match f.model.as_str() {
                "torus" => "no parameters",
                "sp" => "exactly a genus",
                _ => "exactly a puncture count",
            }))
        }
        (m, _, _) => return schema(format!("unknown fiber model {m:?}")),
    };
    model.validate()?;
    Ok(model)
}

fn doc_from_model(m: FiberModel) -> FiberDoc {
    match m {
        FiberModel::Torus => FiberDoc { model: "torus".into(), genus: None, punctures: None },
        FiberModel::Symplectic { genus } => FiberDoc { model: "sp".into(), genus: Some(genus), punctures: None },
        FiberModel::Disc { punctures } => FiberDoc { model: "disc".into(), genus: None, punctures: Some(punctures) },
    }
}

/// Integers are JSON numbers, or decimal strings when they do not fit in an `i64`.
fn int_vec(v: &Value) -> Result<Vec<BigInt>, IoError> {
    let Some(arr) = v.as_array() else {
        return schema(format!("expected an integer array, got {v}"));
    };
    arr.iter()
        .map(|x| {
            let n = match x {
                Value::Number(n) => n.as_i64().map(BigInt::from),
                Value::String(s) => s.parse().ok(),
                _ => None,
            };
            n.ok_or_else(|| IoError::Schema(format!("expected an integer, got {x}")))
        })
        .collect()
}

fn int_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(n) => json!(n),
        None => json!(x.to_string()),
    }
}

fn int_vec_json(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int_json).collect())
}

fn parse_cycle(model: FiberModel, v: &Value) -> Result<Cycle, IoError> {
    match model {
        FiberModel::Torus => {
            let e = int_vec(v)?;
            if e.len() != 2 {
                return schema(format!("torus cycle must have 2 entries, got {v}"));
            }
            Ok(Cycle::Torus(HomologyClass::from_big(e)?))
        }
        FiberModel::Symplectic { genus } => {
            let e = int_vec(v)?;
            if e.len() != 2 * genus {
                return schema(format!("genus-{genus} cycle must have {} entries, got {v}", 2 * genus));
            }
            Ok(Cycle::Symplectic(HomologyClass::from_big(e)?))
        }
        FiberModel::Disc { punctures } => {
            let Some(s) = v.as_str() else {
                return schema(format!("disc cycle must be a word string, got {v}"));
            };
            Ok(Cycle::disc(&FreeWord::parse(punctures, s)?)?)
        }
    }
}

fn cycle_json(c: &Cycle) -> Value {
    match c {
        Cycle::Torus(h) | Cycle::Symplectic(h) => int_vec_json(h.entries()),
        Cycle::Disc(d) => json!(d.word().to_string()),
    }
}

pub fn parse_pencil(text: &str) -> Result<Pencil, IoError> {
    let doc: PencilDoc = serde_json::from_str(text)?;
    let model = model_from_doc(&doc.fiber)?;
    let cycles = doc.cycles.iter().map(|v| parse_cycle(model, v)).collect::<Result<Vec<_>, _>>()?;
    Ok(Pencil::new(model, cycles)?)
}

pub fn pencil_json(p: &Pencil) -> Value {
    json!({
        "fiber": doc_from_model(p.fiber()),
        "cycles": p.cycles().iter().map(cycle_json).collect::<Vec<_>>(),
    })
}

pub fn cycle_to_json(c: &Cycle) -> Value {
    cycle_json(c)
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct AutomorphismDoc {
    braid: String,
    #[serde(default)]
    fiber_element: Option<Value>,
}

/// Parses an automorphism for a pencil on `strands` strands over `model`.
pub fn parse_automorphism(text: &str, model: FiberModel, strands: usize) -> Result<Automorphism, IoError> {
    let doc: AutomorphismDoc = serde_json::from_str(text)?;
    let braid = Braid::parse(strands, &doc.braid)?;
    let fiber = match (&doc.fiber_element, model) {
        (None, m) => m.identity(),
        (Some(Value::String(s)), FiberModel::Disc { punctures }) => FiberElement::Disc(Braid::parse(punctures, s)?),
        (Some(v @ Value::Array(_)), FiberModel::Torus | FiberModel::Symplectic { .. }) => {
            let rows = v
                .as_array()
                .expect("matched an array")
                .iter()
                .map(int_vec)
                .collect::<Result<Vec<_>, _>>()?;
            let m = IntMatrix::from_big_rows(&rows)?;
            let e = match model {
                FiberModel::Torus => FiberElement::Torus(m),
                _ => FiberElement::Symplectic(m),
            };
            model.check_element(&e)?;
            e
        }
        (Some(v), _) => return schema(format!("fiber element {v} does not fit the fiber model")),
    };
    Ok(Automorphism::new(braid, fiber))
}

pub fn fiber_element_json(g: &FiberElement) -> Value {
    match g {
        FiberElement::Torus(m) | FiberElement::Symplectic(m) => {
            Value::Array(m.rows().iter().map(|r| int_vec_json(r)).collect())
        }
        FiberElement::Disc(b) => json!(b.to_string()),
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    p: BTreeMap<String, [f64; 2]>,
    q: BTreeMap<String, [f64; 2]>,
    kappa: f64,
    delta: f64,
    #[serde(default = "default_pexp")]
    pexp: u32,
}

fn default_pexp() -> u32 {
    2
}

fn parse_polynomial(map: &BTreeMap<String, [f64; 2]>) -> Result<Polynomial, IoError> {
    let mut vars = None;
    let mut terms = Vec::new();
    for (key, [re, im]) in map {
        let exps = key
            .split(',')
            .map(|s| s.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| IoError::Schema(format!("bad monomial key {key:?}")))?;
        match vars {
            None => vars = Some(exps.len()),
            Some(n) if n != exps.len() => return schema(format!("monomial {key:?} has the wrong arity")),
            _ => {}
        }
        terms.push(Monomial { exps, coeff: Complex64::new(*re, *im) });
    }
    let Some(vars) = vars else {
        return schema("polynomial has no terms");
    };
    Ok(Polynomial::new(vars, terms)?)
}

pub fn polynomial_json(p: &Polynomial) -> Value {
    let map: BTreeMap<String, [f64; 2]> = p
        .terms
        .iter()
        .map(|t| {
            let key = t.exps.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",");
            (key, [t.coeff.re, t.coeff.im])
        })
        .collect();
    json!(map)
}

pub fn parse_instance(text: &str) -> Result<LocalTransInstance, IoError> {
    let doc: InstanceDoc = serde_json::from_str(text)?;
    let p = parse_polynomial(&doc.p)?;
    let q = parse_polynomial(&doc.q)?;
    if p.vars != q.vars {
        return schema("p and q have different numbers of variables");
    }
    Ok(LocalTransInstance { p, q, kappa: doc.kappa, delta: doc.delta, pexp: doc.pexp })
}

pub fn instance_json(inst: &LocalTransInstance) -> Value {
    json!({
        "p": polynomial_json(&inst.p),
        "q": polynomial_json(&inst.q),
        "kappa": inst.kappa,
        "delta": inst.delta,
        "pexp": inst.pexp,
    })
}
