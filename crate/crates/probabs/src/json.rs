//! JSON renderings of core results. Rationals are always strings in
//! `num/den` form (integers without a denominator); unbounded expected
//! rewards are the string `"inf"`.
//!
//! MDP documents follow this schema:
//!
//! ```text
//! {
//!   "format": "probabs-mdp", "version": 1,
//!   "initial": [state ids],
//!   "labels": { name: [ids of states where the label holds] },
//!   "states": [ { "id": 0, "name": "x=0",
//!                 "actions": [ [ { "to": 1, "p": "1/2" }, ... ], ... ] } ]
//! }
//! ```
//!
//! `name` is optional; each action is one distribution over successors.

use std::collections::BTreeMap;

use probabs_core::abstraction::{ComponentReport, IpReport, StateDiff, Witness};
use probabs_core::mdp::{normalize, Distribution, Mdp, QueryResult, Value};
use probabs_core::rabin::{RabinState, Report, Tourist};
use probabs_core::rational::parse_rational;
use probabs_core::semantics::{Expectation, StateSpace};
use probabs_core::Rational;
use serde_json::{json, Map, Value as Json};

use crate::config::RunConfig;

pub const MDP_FORMAT: &str = "probabs-mdp";
pub const MDP_VERSION: u64 = 1;

pub fn rational(r: &Rational) -> Json {
    Json::String(r.to_string())
}

pub fn value(v: &Value) -> Json {
    Json::String(v.to_string())
}

/// Wraps a result with the run metadata.
pub fn document(config: &RunConfig, result: Json) -> Json {
    json!({
        "meta": {
            "tool": "probabs",
            "version": env!("CARGO_PKG_VERSION"),
            "config": config,
        },
        "result": result,
    })
}

pub fn valuation(space: &StateSpace, state: usize) -> Json {
    let vals = space.valuation(state);
    let map: Map<String, Json> = space.vars().iter().zip(vals).map(|(d, v)| (d.name.clone(), json!(v))).collect();
    Json::Object(map)
}

/// One entry per state, in state order.
pub fn expectation(space: &StateSpace, e: &Expectation) -> Json {
    Json::Array(
        e.iter()
            .enumerate()
            .map(|(s, v)| json!({ "state": space.describe(s), "valuation": valuation(space, s), "value": rational(v) }))
            .collect(),
    )
}

fn diffs(d: &[StateDiff]) -> Json {
    Json::Array(
        d.iter()
            .map(|d| json!({ "state": d.state, "valuation": d.valuation, "wp": rational(&d.wp), "cubed": rational(&d.cubed) }))
            .collect(),
    )
}

fn witness(w: &Witness) -> Json {
    match w {
        Witness::Predicate { index, text, differing } => json!({
            "kind": "predicate",
            "index": index,
            "predicate": text,
            "differing": diffs(differing),
        }),
        Witness::Cube { signature, differing } => json!({
            "kind": "cube",
            "cube": signature,
            "differing": diffs(differing),
        }),
    }
}

fn component(c: &ComponentReport) -> Json {
    json!({
        "program": c.program,
        "verdict": verdict(c.verdict.is_preserving()),
        "fast_path_passed": c.fast_path_passed,
        "predicates": c.predicates.iter().map(|p| json!({
            "index": p.index,
            "predicate": p.text,
            "cubed": p.cubed,
        })).collect::<Vec<_>>(),
        "cubes": c.cubes.iter().map(|k| json!({
            "cube": k.signature,
            "preserved": k.preserved,
        })).collect::<Vec<_>>(),
        "witness": c.witness.as_ref().map(witness),
    })
}

fn verdict(preserving: bool) -> &'static str {
    if preserving {
        "preserving"
    } else {
        "not-preserving"
    }
}

/// Verdict, then the first witness (predicate text, offending cube truth
/// vector and differing states) and the per-component details.
pub fn ip_report(r: &IpReport) -> Json {
    let first = r.witness().map(|(i, w)| {
        let mut j = witness(w);
        j["component"] = json!(i);
        j
    });
    json!({
        "verdict": verdict(r.verdict.is_preserving()),
        "predicates": r.predicates,
        "cube_count": r.cube_count,
        "witness": first,
        "components": r.components.iter().map(component).collect::<Vec<_>>(),
    })
}

/// Per-state values of a query, named by `name`, plus the optimum over
/// the chosen initial states.
pub fn query_result(r: &QueryResult, name: impl Fn(usize) -> String, initial: &[usize], optimum: &Value) -> Json {
    json!({
        "exact": r.exact,
        "iterations": r.iterations,
        "residual": r.residual,
        "optimum": value(optimum),
        "states": initial.iter().map(|&s| json!({ "id": s, "state": name(s), "value": value(&r.values[s]) })).collect::<Vec<_>>(),
    })
}

fn distribution(d: &Distribution) -> Json {
    Json::Array(d.iter().map(|(t, p)| json!({ "to": t, "p": rational(p) })).collect())
}

pub fn mdp(m: &Mdp) -> Json {
    let labels: Map<String, Json> = m
        .labels()
        .iter()
        .map(|(name, bits)| (name.clone(), json!((0..bits.len()).filter(|&s| bits[s]).collect::<Vec<_>>())))
        .collect();
    let states: Vec<Json> = (0..m.len())
        .map(|s| {
            let mut j = json!({ "id": s });
            if let Some(n) = m.name(s) {
                j["name"] = json!(n);
            }
            j["actions"] = Json::Array(m.actions(s).iter().map(distribution).collect());
            j
        })
        .collect();
    json!({
        "format": MDP_FORMAT,
        "version": MDP_VERSION,
        "initial": m.initial(),
        "labels": labels,
        "states": states,
    })
}

fn field<'a>(j: &'a Json, key: &str) -> Result<&'a Json, String> {
    j.get(key).ok_or_else(|| format!("missing field `{key}`"))
}

fn index(j: &Json) -> Result<usize, String> {
    j.as_u64().map(|v| v as usize).ok_or_else(|| format!("expected a state id, found {j}"))
}

fn array<'a>(j: &'a Json, what: &str) -> Result<&'a Vec<Json>, String> {
    j.as_array().ok_or_else(|| format!("`{what}` must be an array"))
}

/// Reads a document written by [`mdp`]. The usual MDP validation applies:
/// every state needs an action and every action must sum to one.
pub fn read_mdp(j: &Json) -> Result<Mdp, String> {
    if field(j, "format")?.as_str() != Some(MDP_FORMAT) {
        return Err(format!("not a {MDP_FORMAT} document"));
    }
    if field(j, "version")?.as_u64() != Some(MDP_VERSION) {
        return Err(format!("unsupported version {}", j["version"]));
    }
    let states = array(field(j, "states")?, "states")?;
    let mut actions = Vec::with_capacity(states.len());
    let mut names = Vec::with_capacity(states.len());
    for (i, s) in states.iter().enumerate() {
        if index(field(s, "id")?)? != i {
            return Err(format!("state {i} has id {}", s["id"]));
        }
        names.push(s.get("name").and_then(Json::as_str).map(String::from));
        let mut acts = Vec::new();
        for a in array(field(s, "actions")?, "actions")? {
            let mut dist = Vec::new();
            for e in array(a, "action")? {
                let to = index(field(e, "to")?)?;
                let p = field(e, "p")?
                    .as_str()
                    .and_then(parse_rational)
                    .ok_or_else(|| format!("bad probability {} in state {i}", e["p"]))?;
                dist.push((to, p));
            }
            acts.push(normalize(dist));
        }
        actions.push(acts);
    }
    let initial = array(field(j, "initial")?, "initial")?.iter().map(index).collect::<Result<_, _>>()?;
    let mut m = Mdp::new(actions, initial).map_err(|e| e.to_string())?;
    let labels = field(j, "labels")?.as_object().ok_or("`labels` must be an object")?;
    for (name, ids) in labels {
        let mut bits = vec![false; m.len()];
        for id in array(ids, name)? {
            let s = index(id)?;
            *bits.get_mut(s).ok_or_else(|| format!("label `{name}` mentions state {s}"))? = true;
        }
        m = m.with_label(name, bits).map_err(|e| e.to_string())?;
    }
    if names.iter().all(Option::is_some) && !names.is_empty() {
        m = m.with_names(names.into_iter().flatten().collect());
    }
    Ok(m)
}

fn tourists(ts: &[Tourist]) -> Json {
    Json::Array(ts.iter().map(|t| json!({ "pad": t.pad, "served": t.served })).collect())
}

pub fn rabin_state(s: &RabinState) -> Json {
    json!({
        "L": s.board_l,
        "R": s.board_r,
        "lout": tourists(&s.lout),
        "rout": tourists(&s.rout),
        "lin": s.lin,
        "rin": s.rin,
        "fresh": s.fresh,
    })
}

/// Termination curve (exact and as floats), expected rounds and the
/// per-split breakdown.
pub fn rabin_report(r: &Report) -> Json {
    let curve: Vec<Json> = r
        .curve
        .iter()
        .map(|c| {
            json!({
                "t": c.t,
                "pmin": rational(&c.pmin),
                "pmax": rational(&c.pmax),
            })
        })
        .collect();
    let splits: BTreeMap<String, Json> = r
        .splits
        .iter()
        .map(|s| (format!("{},{}", s.a, s.b), json!({ "rmin": value(&s.rmin), "rmax": value(&s.rmax) })))
        .collect();
    json!({
        "tourists": r.tourists,
        "convention": crate::table::convention_name(r.convention),
        "states": r.states,
        "transitions": r.transitions,
        "unslotted": r.unslotted,
        "rmin": value(&r.rmin),
        "rmax": value(&r.rmax),
        "splits": splits,
        "curve": curve,
    })
}
