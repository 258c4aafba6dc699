use std::fmt::Write;

use serde_json::Value;

/// Indented `key: value` listing; arrays of scalars stay on one line.
pub fn pretty(doc: &Value) -> String {
    let mut out = String::new();
    walk(doc, 0, &mut out);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Null => Some("-".into()),
        Value::Bool(_) | Value::Number(_) => Some(v.to_string()),
        Value::Array(items) if items.iter().all(scalar_leaf) => Some(format!(
            "[{}]",
            items
                .iter()
                .filter_map(scalar)
                .collect::<Vec<_>>()
                .join(", ")
        )),
        _ => None,
    }
}

fn scalar_leaf(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.iter().all(|x| !x.is_array() && !x.is_object()),
        Value::Object(_) => false,
        _ => true,
    }
}

fn walk(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match scalar(x) {
                    Some(s) => writeln!(out, "{pad}{k}: {s}").unwrap(),
                    None => {
                        writeln!(out, "{pad}{k}:").unwrap();
                        walk(x, depth + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                match scalar(x) {
                    Some(s) => writeln!(out, "{pad}[{i}] {s}").unwrap(),
                    None => {
                        writeln!(out, "{pad}[{i}]").unwrap();
                        walk(x, depth + 1, out);
                    }
                }
            }
        }
        other => writeln!(out, "{pad}{}", scalar(other).unwrap_or_default()).unwrap(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_listing() {
        let v: Value =
            serde_json::from_str(r#"{"a": 1, "b": {"c": [1, 2]}, "d": [{"e": "x"}]}"#).unwrap();
        assert_eq!(pretty(&v), "a: 1\nb:\n  c: [1, 2]\nd:\n  [0]\n    e: x\n");
    }
}
