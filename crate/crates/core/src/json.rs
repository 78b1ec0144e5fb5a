//! JSON file formats for algebras, matrices, logics and translations.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Serialize, Serializer};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::algebra::finite::cell_count;
use crate::algebra::{FiniteAlgebra, Signature, Term};
use crate::logic::{LogicKind, LogicPresentation, Rule};
use crate::translation::Translation;
use crate::{Error, Matrix, Result, Subset};

fn parse_err(what: &str, detail: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{what}: {detail}"))
}

pub fn signature_to_value(sig: &Signature) -> Value {
    Value::Object(sig.symbols().map(|(s, a)| (s.to_string(), json!(a))).collect())
}

pub fn signature_from_value(v: &Value) -> Result<Signature> {
    let obj = v.as_object().ok_or_else(|| parse_err("signature", "expected an object"))?;
    let mut sig = Signature::new();
    for (k, a) in obj {
        let arity = a
            .as_u64()
            .ok_or_else(|| parse_err("signature", format!("arity of `{k}` must be a non-negative integer")))?;
        sig.add(k, arity as usize)?;
    }
    Ok(sig)
}

fn nest(table: &[usize], n: usize, arity: usize) -> Value {
    if arity == 0 {
        return json!(table[0]);
    }
    let stride = table.len() / n;
    Value::Array((0..n).map(|i| nest(&table[i * stride..(i + 1) * stride], n, arity - 1)).collect())
}

fn flatten(v: &Value, n: usize, arity: usize, sym: &str, out: &mut Vec<usize>) -> Result<()> {
    if arity == 0 {
        let x = v
            .as_u64()
            .ok_or_else(|| parse_err("ops", format!("`{sym}`: expected an integer entry")))?;
        out.push(x as usize);
        return Ok(());
    }
    let arr = v
        .as_array()
        .ok_or_else(|| parse_err("ops", format!("`{sym}`: expected nested arrays of depth {arity}")))?;
    if arr.len() != n {
        return Err(parse_err("ops", format!("`{sym}`: expected {n} rows, found {}", arr.len())));
    }
    arr.iter().try_for_each(|row| flatten(row, n, arity - 1, sym, out))
}

pub fn algebra_to_value(alg: &FiniteAlgebra) -> Value {
    let ops: Map<String, Value> = alg
        .signature()
        .symbols()
        .enumerate()
        .map(|(i, (s, a))| (s.to_string(), nest(alg.table(i), alg.size(), a)))
        .collect();
    json!({
        "name": alg.name(),
        "signature": signature_to_value(alg.signature()),
        "size": alg.size(),
        "ops": ops,
    })
}

pub fn algebra_from_value(v: &Value) -> Result<FiniteAlgebra> {
    let name = v.get("name").and_then(Value::as_str).unwrap_or("A").to_string();
    let sig = signature_from_value(v.get("signature").ok_or_else(|| parse_err("algebra", "missing `signature`"))?)?;
    let size = v
        .get("size")
        .and_then(Value::as_u64)
        .ok_or_else(|| parse_err("algebra", "missing or invalid `size`"))? as usize;
    let ops = v
        .get("ops")
        .and_then(Value::as_object)
        .ok_or_else(|| parse_err("algebra", "missing `ops` object"))?;
    let mut tables = BTreeMap::new();
    for (sym, table) in ops {
        let arity = sig.arity(sym).ok_or_else(|| Error::UnknownSymbol(sym.clone()))?;
        let mut flat = Vec::with_capacity(cell_count(size, arity)?);
        flatten(table, size, arity, sym, &mut flat)?;
        tables.insert(sym.clone(), flat);
    }
    FiniteAlgebra::new(name, sig, size, tables)
}

pub fn matrix_to_value(m: &Matrix) -> Value {
    json!({ "algebra": algebra_to_value(m.algebra()), "filter": m.filter().to_vec() })
}

fn subset_from_value(v: &Value, what: &str) -> Result<Subset> {
    let arr = v.as_array().ok_or_else(|| parse_err(what, "expected an array of elements"))?;
    arr.iter()
        .map(|x| x.as_u64().map(|x| x as usize).ok_or_else(|| parse_err(what, "expected integers")))
        .collect()
}

/// Reads a matrix; `{"path": ..}` algebras are resolved against `base`.
pub fn matrix_from_value(v: &Value, base: &Path) -> Result<Matrix> {
    let a = v.get("algebra").ok_or_else(|| parse_err("matrix", "missing `algebra`"))?;
    let alg = match a.get("path").and_then(Value::as_str) {
        Some(p) => load_algebra(&base.join(p))?,
        None => algebra_from_value(a)?,
    };
    let filter = subset_from_value(v.get("filter").ok_or_else(|| parse_err("matrix", "missing `filter`"))?, "filter")?;
    Matrix::new(alg, filter)
}

pub fn rule_to_value(r: &Rule) -> Value {
    json!({
        "premises": r.premises().iter().map(ToString::to_string).collect::<Vec<_>>(),
        "conclusion": r.conclusion().to_string(),
    })
}

pub fn rule_from_value(v: &Value, sig: &Signature) -> Result<Rule> {
    let premises = match v.get("premises") {
        None => Vec::new(),
        Some(p) => p
            .as_array()
            .ok_or_else(|| parse_err("rule", "`premises` must be an array"))?
            .iter()
            .map(|t| term_from_value(t, sig))
            .collect::<Result<_>>()?,
    };
    let conclusion = term_from_value(v.get("conclusion").ok_or_else(|| parse_err("rule", "missing `conclusion`"))?, sig)?;
    Ok(Rule::new(premises, conclusion))
}

pub fn term_from_value(v: &Value, sig: &Signature) -> Result<Term> {
    Term::parse(v.as_str().ok_or_else(|| parse_err("term", "expected an s-expression string"))?, sig)
}

pub fn logic_to_value(l: &LogicPresentation) -> Value {
    let mut obj = Map::new();
    obj.insert("name".into(), json!(l.name));
    obj.insert("signature".into(), signature_to_value(&l.signature));
    obj.insert("variable_budget".into(), json!(l.variable_budget));
    match &l.kind {
        LogicKind::Rules(rs) => {
            obj.insert("kind".into(), json!("rules"));
            obj.insert("rules".into(), Value::Array(rs.iter().map(rule_to_value).collect()));
        }
        LogicKind::Matrices(ms) => {
            obj.insert("kind".into(), json!("matrices"));
            obj.insert("matrices".into(), Value::Array(ms.iter().map(matrix_to_value).collect()));
        }
    }
    Value::Object(obj)
}

pub fn logic_from_value(v: &Value, base: &Path) -> Result<LogicPresentation> {
    let name = v.get("name").and_then(Value::as_str).unwrap_or("L").to_string();
    let sig = signature_from_value(v.get("signature").ok_or_else(|| parse_err("logic", "missing `signature`"))?)?;
    let kind = v.get("kind").and_then(Value::as_str).ok_or_else(|| parse_err("logic", "missing `kind`"))?;
    let mut l = match kind {
        "rules" => {
            let rules = v
                .get("rules")
                .and_then(Value::as_array)
                .ok_or_else(|| parse_err("logic", "missing `rules` array"))?
                .iter()
                .map(|r| rule_from_value(r, &sig))
                .collect::<Result<_>>()?;
            LogicPresentation::from_rules(name, sig, rules)?
        }
        "matrices" => {
            let ms = v
                .get("matrices")
                .and_then(Value::as_array)
                .ok_or_else(|| parse_err("logic", "missing `matrices` array"))?
                .iter()
                .map(|m| matrix_from_value(m, base))
                .collect::<Result<_>>()?;
            LogicPresentation::from_matrices(name, sig, ms)?
        }
        other => return Err(parse_err("logic", format!("unknown kind `{other}`"))),
    };
    if let Some(b) = v.get("variable_budget") {
        let b = b.as_u64().ok_or_else(|| parse_err("logic", "`variable_budget` must be an integer"))?;
        if b == 0 {
            return Err(parse_err("logic", "`variable_budget` must be positive"));
        }
        l.variable_budget = b as usize;
    }
    Ok(l)
}

pub fn translation_to_value(t: &Translation) -> Value {
    json!({
        "source": signature_to_value(t.source()),
        "target": signature_to_value(t.target()),
        "map": t.map().iter().map(|(k, v)| (k.to_string(), json!(v.to_string()))).collect::<Map<_, _>>(),
    })
}

pub fn translation_from_value(v: &Value) -> Result<Translation> {
    let source = signature_from_value(v.get("source").ok_or_else(|| parse_err("translation", "missing `source`"))?)?;
    let target = signature_from_value(v.get("target").ok_or_else(|| parse_err("translation", "missing `target`"))?)?;
    let map = v
        .get("map")
        .and_then(Value::as_object)
        .ok_or_else(|| parse_err("translation", "missing `map` object"))?;
    let mut images = BTreeMap::new();
    for (sym, t) in map {
        images.insert(sym.clone(), term_from_value(t, &target)?);
    }
    Translation::new(source, target, images)
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| parse_err(&path.display().to_string(), e))?;
    serde_json::from_str(&text).map_err(|e| parse_err(&path.display().to_string(), e))
}

fn base_of(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

pub fn load_algebra(path: &Path) -> Result<FiniteAlgebra> {
    algebra_from_value(&read_json(path)?)
}

pub fn load_matrix(path: &Path) -> Result<Matrix> {
    matrix_from_value(&read_json(path)?, &base_of(path))
}

pub fn load_logic(path: &Path) -> Result<LogicPresentation> {
    logic_from_value(&read_json(path)?, &base_of(path))
}

pub fn load_translation(path: &Path) -> Result<Translation> {
    translation_from_value(&read_json(path)?)
}

/// Hex SHA-256 of a byte string.
pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Order-sensitive fingerprint of an algebra inventory (first 16 hex digits).
pub fn inventory_fingerprint(algs: &[FiniteAlgebra]) -> String {
    let v = Value::Array(algs.iter().map(algebra_to_value).collect());
    sha256_hex(v.to_string().as_bytes())[..16].to_string()
}

impl Serialize for FiniteAlgebra {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        algebra_to_value(self).serialize(s)
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        matrix_to_value(self).serialize(s)
    }
}

impl Serialize for Term {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algebra_roundtrip() {
        let sig = Signature::from_pairs([("→", 2), ("c", 0), ("n", 1)]).unwrap();
        let alg = FiniteAlgebra::from_fn("T", sig, 3, |s, a| match s {
            "→" => (a[0] + 2 * a[1]) % 3,
            "c" => 2,
            _ => (a[0] + 1) % 3,
        })
        .unwrap();
        let v = algebra_to_value(&alg);
        assert_eq!(v["ops"]["c"], json!(2));
        assert_eq!(v["ops"]["→"][1], json!([1, 0, 2]));
        assert_eq!(algebra_from_value(&v).unwrap(), alg);
    }

    #[test]
    fn malformed_algebras() {
        let bad = json!({"signature": {"f": 1}, "size": 2, "ops": {"f": [0]}});
        assert!(algebra_from_value(&bad).is_err());
        let bad = json!({"signature": {"f": 1}, "size": 2, "ops": {"f": [0, 5]}});
        assert!(algebra_from_value(&bad).is_err());
        let bad = json!({"signature": {"f": 1}, "size": 2, "ops": {"g": [0, 1]}});
        assert!(algebra_from_value(&bad).is_err());
    }

    #[test]
    fn logic_roundtrip() {
        let sig = Signature::from_pairs([("→", 2)]).unwrap();
        let mp = Rule::new(
            [Term::var("x"), Term::parse("(→ x y)", &sig).unwrap()],
            Term::var("y"),
        );
        let l = LogicPresentation::from_rules("N", sig, vec![mp]).unwrap();
        let v = logic_to_value(&l);
        assert_eq!(logic_from_value(&v, Path::new(".")).unwrap(), l);
    }

    #[test]
    fn fingerprints_are_stable() {
        let sig = Signature::from_pairs([("f", 1)]).unwrap();
        let a = FiniteAlgebra::from_fn("A", sig, 2, |_, a| a[0]).unwrap();
        let one = std::slice::from_ref(&a);
        assert_eq!(inventory_fingerprint(one), inventory_fingerprint(one));
        assert_ne!(inventory_fingerprint(one), inventory_fingerprint(&[a.clone(), a.clone()]));
    }
}
