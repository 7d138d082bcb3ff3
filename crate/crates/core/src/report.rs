//! JSON payloads for the command-line tool.
//!
//! Objects use `serde_json`'s default map, so keys come out sorted and the
//! output is byte-stable. Integers beyond 2⁵³ in absolute value are written
//! as decimal strings.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde_json::{json, Map, Value};

use crate::balance::BalanceVerdict;
use crate::certify::{BSWitness, DistortionCertificate};
use crate::conj_graph::ConjugacyGraph;
use crate::model::GraphOfGroups;
use crate::parametrize::{Certificate, Verdict};
use crate::text::{serialize, TextError};

const SAFE: u64 = 1 << 53;

pub fn int(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) if v.unsigned_abs() <= SAFE => json!(v),
        _ => Value::String(x.to_string()),
    }
}

/// `"p/q"`, or `"p"` when the denominator is one.
pub fn rational(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn error(err: &str, position: Option<(usize, usize)>) -> Value {
    let (line, column) = match position {
        Some((l, c)) => (json!(l), json!(c)),
        None => (Value::Null, Value::Null),
    };
    json!({ "error": err, "line": line, "column": column })
}

pub fn text_error(e: &TextError) -> Value {
    error(&e.to_string(), e.position())
}

pub fn check(graph: &GraphOfGroups) -> Value {
    json!({
        "valid": true,
        "vertices": graph.vertices().iter().map(|v| v.name.clone()).collect::<Vec<_>>(),
        "edges": graph.edges().iter().map(|e| e.name.clone()).collect::<Vec<_>>(),
        "spanning_tree": graph.spanning_tree().into_iter().collect::<Vec<_>>(),
    })
}

pub fn balance_entry(graph: &GraphOfGroups, e: usize, verdict: &BalanceVerdict) -> Value {
    let mut m = Map::new();
    m.insert("id".into(), json!(graph.edge(e).name));
    m.insert("verdict".into(), json!(verdict.to_string()));
    if let BalanceVerdict::Unbalanced(c) = verdict {
        m.insert("modulus".into(), json!(rational(&c.modulus)));
        m.insert("cycle".into(), json!(c.render(graph)));
    }
    Value::Object(m)
}

pub fn balance(graph: &GraphOfGroups, verdicts: &[(usize, BalanceVerdict)]) -> Value {
    json!({ "edges": verdicts.iter().map(|(e, v)| balance_entry(graph, *e, v)).collect::<Vec<_>>() })
}

pub fn conjugacy_graph(graph: &GraphOfGroups, cg: &ConjugacyGraph) -> Value {
    json!({
        "class": cg.class,
        "edges": cg.delta.edges().iter().map(|e| e.name.clone()).collect::<Vec<_>>(),
        "graph": serialize(&cg.delta),
        "provenance_verified": cg.verify_provenance(graph),
    })
}

fn phi(cert: &Certificate) -> Value {
    let m: Map<String, Value> = cert
        .phi
        .entries(&cert.conjugacy_graph.delta)
        .into_iter()
        .map(|(k, d)| (k, json!([u8::from(d.reflect), int(&d.shift)])))
        .collect();
    Value::Object(m)
}

/// Short witness form used inside verdicts.
pub fn witness_summary(graph: &GraphOfGroups, w: &BSWitness) -> Value {
    json!({
        "a": w.a.render(graph),
        "s": w.s.render(graph),
        "i": int(&w.i),
        "j": int(&w.j),
    })
}

pub fn witness(graph: &GraphOfGroups, edge: usize, w: &BSWitness) -> Value {
    let mut v = witness_summary(graph, w);
    let m = v.as_object_mut().expect("summary is an object");
    m.insert("edge".into(), json!(graph.edge(edge).name));
    m.insert("vertex".into(), json!(graph.vertex(w.vertex).name));
    m.insert("transcript".into(), json!(w.transcript.render(graph)));
    m.insert("verified".into(), json!(w.verify(graph)));
    v
}

/// `with_graphs` adds each conjugacy graph in text form (the `parametrize`
/// command); `verdict` leaves it out.
pub fn verdict(graph: &GraphOfGroups, v: &Verdict, with_graphs: bool) -> Value {
    let verified = v.verify(graph);
    match v {
        Verdict::Hhg { certificates } => {
            let certs: Vec<Value> = certificates
                .iter()
                .map(|c| {
                    let mut o = json!({ "class": c.class, "phi": phi(c) });
                    if with_graphs {
                        o["graph"] = json!(serialize(&c.conjugacy_graph.delta));
                    }
                    o
                })
                .collect();
            json!({ "status": v.status(), "certificates": certs, "verified": verified })
        }
        Verdict::NotHhg { edge, witness, .. } => {
            let mut o = json!({
                "status": v.status(),
                "witness": witness_summary(graph, witness),
                "verified": verified,
            });
            if with_graphs {
                o["edge"] = json!(graph.edge(*edge).name);
            }
            o
        }
    }
}

pub fn no_witness() -> Value {
    json!({ "status": "HHG", "witness": Value::Null })
}

pub fn distortion(graph: &GraphOfGroups, edge: usize, w: &BSWitness, c: &DistortionCertificate) -> Value {
    let mut v = witness(graph, edge, w);
    let rows: Vec<Value> = c
        .rows
        .iter()
        .map(|r| {
            json!({
                "k": r.k,
                "word": r.word.render(graph),
                "exponent": int(&r.exponent),
                "letter_length": int(&r.letter_length),
                "length_bound": int(&r.length_bound),
                "ratio": rational(&r.ratio()),
                "verified": r.verified,
            })
        })
        .collect();
    let m = v.as_object_mut().expect("witness is an object");
    m.insert("swapped".into(), json!(c.swapped));
    m.insert("table".into(), json!(rows));
    m.insert("ratios_decreasing".into(), json!(c.ratios_decreasing(2)));
    m.insert("verified".into(), json!(w.verify(graph) && c.all_verified()));
    v
}
