//! JSON output. Object keys come out sorted.

use gradekit_core::lattice::{GradeMatrix, Violation};
use gradekit_core::structure::all_tuples;
use gradekit_core::{GradeId, RawStructure, Signature, Structure, Symbol};
use serde_json::{json, Map, Value};

fn symbols(syms: &[Symbol]) -> Value {
    Value::Array(syms.iter().map(|s| json!({ "name": s.name, "arity": s.arity })).collect())
}

pub fn signature_to_json(sig: &Signature) -> Value {
    json!({ "predicates": symbols(sig.predicates()), "functions": symbols(sig.functions()) })
}

pub fn structure_to_json(s: &Structure) -> Value {
    let sig = s.signature();
    let names = |t: &[usize]| Value::Array(t.iter().map(|&e| Value::from(s.name(e))).collect());
    let mut preds = Map::new();
    for (p, sym) in sig.predicates().iter().enumerate() {
        preds.insert(sym.name.clone(), Value::Array(s.tuples(p).map(|t| names(&t)).collect()));
    }
    let mut funcs = Map::new();
    for (f, sym) in sig.functions().iter().enumerate() {
        let entries = all_tuples(s.size(), sym.arity)
            .map(|t| json!({ "args": names(&t), "value": s.name(s.apply(f, &t)) }))
            .collect();
        funcs.insert(sym.name.clone(), Value::Array(entries));
    }
    json!({
        "signature": signature_to_json(sig),
        "domain": s.elements(),
        "predicates": preds,
        "functions": funcs,
    })
}

fn strings(v: &Value) -> Option<Vec<String>> {
    v.as_array()?.iter().map(|x| x.as_str().map(String::from)).collect()
}

fn symbols_from(v: &Value) -> Option<Vec<Symbol>> {
    v.as_array()?
        .iter()
        .map(|s| Some(Symbol::new(s.get("name")?.as_str()?, s.get("arity")?.as_u64()? as usize)))
        .collect()
}

/// Reads the output of [`structure_to_json`] back, without validation.
pub fn raw_structure_from_json(v: &Value) -> Result<RawStructure, String> {
    let bad = |what: &str| format!("json: malformed {what}");
    let sig = v.get("signature").ok_or_else(|| bad("signature"))?;
    let preds = symbols_from(sig.get("predicates").unwrap_or(&Value::Null)).ok_or_else(|| bad("predicates"))?;
    let funcs = symbols_from(sig.get("functions").unwrap_or(&Value::Null)).ok_or_else(|| bad("functions"))?;
    let signature = Signature::new(preds, funcs).map_err(|e| format!("json: {e}"))?;
    let mut raw = RawStructure::new(signature);
    raw.domain = v.get("domain").and_then(strings).ok_or_else(|| bad("domain"))?;
    if let Some(ps) = v.get("predicates").and_then(Value::as_object) {
        for (name, tuples) in ps {
            let ts = tuples.as_array().ok_or_else(|| bad("tuples"))?;
            let ts: Option<Vec<Vec<String>>> = ts.iter().map(strings).collect();
            raw.predicates.insert(name.clone(), ts.ok_or_else(|| bad("tuples"))?);
        }
    }
    if let Some(fs) = v.get("functions").and_then(Value::as_object) {
        for (name, entries) in fs {
            let es = entries.as_array().ok_or_else(|| bad("table"))?;
            let mut table = Vec::new();
            for e in es {
                let args = e.get("args").and_then(strings).ok_or_else(|| bad("table"))?;
                let value = e.get("value").and_then(Value::as_str).ok_or_else(|| bad("table"))?;
                table.push((args, value.to_string()));
            }
            raw.functions.insert(name.clone(), table);
        }
    }
    Ok(raw)
}

pub fn grade_row_to_json(s: &Structure, a: usize, b: usize, row: &[bool; 12]) -> Value {
    let grades: Map<String, Value> = GradeId::ALL.iter().map(|g| (g.name().to_string(), Value::Bool(row[g.index()]))).collect();
    json!({ "a": s.name(a), "b": s.name(b), "grades": grades })
}

pub fn grade_matrix_to_json(s: &Structure, m: &GradeMatrix) -> Value {
    let mut pairs = Vec::new();
    for a in 0..m.size() {
        for b in 0..m.size() {
            pairs.push(grade_row_to_json(s, a, b, m.row(a, b)));
        }
    }
    json!({ "pairs": pairs })
}

pub fn violations_to_json(s: &Structure, vs: &[Violation]) -> Value {
    Value::Array(
        vs.iter()
            .map(|v| json!({ "a": s.name(v.a), "b": s.name(v.b), "from": v.from.name(), "to": v.to.name() }))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use gradekit_core::gallery;
    use gradekit_core::lattice::grade_matrix;

    #[test]
    fn round_trip() {
        for (name, s) in gallery::all() {
            let v = structure_to_json(&s);
            let back = raw_structure_from_json(&v).unwrap().build().unwrap();
            assert_eq!(back, s, "{name}");
        }
    }

    #[test]
    fn keys_sorted() {
        let text = structure_to_json(&gallery::f()).to_string();
        let d = text.find("\"domain\"").unwrap();
        let f = text.find("\"functions\"").unwrap();
        let p = text.find("\"predicates\"").unwrap();
        let s = text.find("\"signature\"").unwrap();
        assert!(d < f && f < p && p < s);
    }

    #[test]
    fn row_for_a() {
        let a = gallery::a();
        let m = grade_matrix(&a, 10).unwrap();
        let v = grade_row_to_json(&a, 0, 1, m.row(0, 1));
        assert_eq!(v["grades"]["id"], false);
        assert_eq!(v["grades"]["indiscNeqFull"], true);
        assert_eq!(grade_matrix_to_json(&a, &m)["pairs"].as_array().unwrap().len(), 4);
    }
}
