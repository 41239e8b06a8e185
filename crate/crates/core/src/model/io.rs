//! JSON file formats.
//!
//! ```text
//! instance:    {"agents": n, "items": ["a", ...], "values": [[[v]]]}   values[i][k][j]
//! allocation:  {"assignment": {"a": 1, "b": 2}}                        1-based agents
//! pdm:         {"agents": n, "issues": [{"name", "choices", "values": [[v]]}]}
//! outcome:     {"choices": {"a": 2}}                                   1-based choice index
//! ```
//!
//! Each `v` is a JSON integer or a string `"p/q"`. Errors carry the JSON path
//! of the offending node.

use std::io::Read;

use serde_json::{json, Map, Value as Json};

use super::{Allocation, Instance, Issue, PdmInstance, PdmOutcome};
use crate::error::{Error, Result};
use crate::value::Value;

fn parse_document(text: &str) -> Result<Json> {
    Ok(serde_json::from_str(text)?)
}

fn object<'a>(node: &'a Json, path: &str) -> Result<&'a Map<String, Json>> {
    node.as_object()
        .ok_or_else(|| Error::schema(path, "expected an object"))
}

fn field<'a>(obj: &'a Map<String, Json>, key: &str, path: &str) -> Result<&'a Json> {
    obj.get(key)
        .ok_or_else(|| Error::schema(path, format!("missing field {key:?}")))
}

fn array<'a>(node: &'a Json, path: &str) -> Result<&'a Vec<Json>> {
    node.as_array().ok_or_else(|| Error::schema(path, "expected an array"))
}

fn positive_count(node: &Json, path: &str) -> Result<usize> {
    match node.as_u64() {
        Some(n) if n >= 1 => Ok(n as usize),
        _ => Err(Error::schema(path, "expected a positive integer")),
    }
}

fn string(node: &Json, path: &str) -> Result<String> {
    node.as_str()
        .map(str::to_owned)
        .ok_or_else(|| Error::schema(path, "expected a string"))
}

fn value(node: &Json, path: &str) -> Result<Value> {
    match node {
        Json::Number(num) => {
            if let Some(v) = num.as_i64() {
                Ok(Value::from(v))
            } else if let Some(v) = num.as_u64() {
                Ok(Value::from_int(v as i128))
            } else {
                Err(Error::schema(
                    path,
                    format!("{num} is not an integer; write fractions as \"p/q\""),
                ))
            }
        }
        Json::String(s) => s.parse().map_err(|e| Error::schema(path, format!("{e}"))),
        _ => Err(Error::schema(path, "expected an integer or a \"p/q\" string")),
    }
}

fn sized<'a>(node: &'a Json, path: &str, expected: usize) -> Result<&'a Vec<Json>> {
    let arr = array(node, path)?;
    if arr.len() != expected {
        return Err(Error::Dimension {
            path: path.to_string(),
            expected,
            found: arr.len(),
        });
    }
    Ok(arr)
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    instance_from_json(&parse_document(text)?)
}

pub fn load_instance<R: Read>(mut source: R) -> Result<Instance> {
    let mut text = String::new();
    source.read_to_string(&mut text)?;
    parse_instance(&text)
}

pub fn instance_from_json(doc: &Json) -> Result<Instance> {
    let root = object(doc, "$")?;
    let n = positive_count(field(root, "agents", "$")?, "agents")?;
    let items = array(field(root, "items", "$")?, "items")?
        .iter()
        .enumerate()
        .map(|(k, it)| string(it, &format!("items[{k}]")))
        .collect::<Result<Vec<_>>>()?;
    let m = items.len();
    let rows = sized(field(root, "values", "$")?, "values", n)?;
    let mut values = Vec::with_capacity(n);
    for (i, row) in rows.iter().enumerate() {
        let row_path = format!("values[{i}]");
        let cells = sized(row, &row_path, m)?;
        let mut per_item = Vec::with_capacity(m);
        for (k, cell) in cells.iter().enumerate() {
            let cell_path = format!("{row_path}[{k}]");
            let entries = sized(cell, &cell_path, n)?;
            per_item.push(
                entries
                    .iter()
                    .enumerate()
                    .map(|(j, v)| value(v, &format!("{cell_path}[{j}]")))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        values.push(per_item);
    }
    Instance::new(n, items, values)
}

pub fn instance_to_json(inst: &Instance) -> Json {
    let n = inst.agents();
    let values: Vec<Json> = (0..n)
        .map(|i| {
            Json::Array(
                (0..inst.num_items())
                    .map(|k| Json::Array(inst.item_row(i, k).iter().map(value_to_json).collect()))
                    .collect(),
            )
        })
        .collect();
    json!({ "agents": n, "items": inst.items(), "values": values })
}

/// Integers are written as JSON numbers when they fit, everything else as "p/q".
pub fn value_to_json(v: &Value) -> Json {
    if v.is_integer() {
        if let Ok(small) = i64::try_from(v.numer()) {
            return Json::from(small);
        }
    }
    Json::String(v.to_string())
}

pub fn parse_allocation(inst: &Instance, text: &str) -> Result<Allocation> {
    allocation_from_json(inst, &parse_document(text)?)
}

pub fn allocation_from_json(inst: &Instance, doc: &Json) -> Result<Allocation> {
    let root = object(doc, "$")?;
    let assignment = object(field(root, "assignment", "$")?, "assignment")?;
    let mut owner = vec![None; inst.num_items()];
    for (name, agent) in assignment {
        let path = format!("assignment.{name}");
        let k = inst
            .item_index(name)
            .ok_or_else(|| Error::schema(&path, "unknown item"))?;
        let j = match agent.as_u64() {
            Some(j) if j >= 1 && (j as usize) <= inst.agents() => j as usize - 1,
            _ => {
                return Err(Error::schema(
                    &path,
                    format!("expected an agent number in 1..={}", inst.agents()),
                ))
            }
        };
        owner[k] = Some(j);
    }
    let owner = owner
        .into_iter()
        .enumerate()
        .map(|(k, o)| {
            o.ok_or_else(|| Error::schema("assignment", format!("item {:?} is not assigned", inst.items()[k])))
        })
        .collect::<Result<Vec<_>>>()?;
    Allocation::new(owner, inst.agents())
}

pub fn allocation_to_json(inst: &Instance, alloc: &Allocation) -> Json {
    let assignment: Map<String, Json> = inst
        .items()
        .iter()
        .zip(alloc.assignment())
        .map(|(name, &j)| (name.clone(), Json::from(j + 1)))
        .collect();
    json!({ "assignment": assignment })
}

pub fn parse_pdm(text: &str) -> Result<PdmInstance> {
    pdm_from_json(&parse_document(text)?)
}

pub fn pdm_from_json(doc: &Json) -> Result<PdmInstance> {
    let root = object(doc, "$")?;
    let n = positive_count(field(root, "agents", "$")?, "agents")?;
    let issues = array(field(root, "issues", "$")?, "issues")?;
    let mut out = Vec::with_capacity(issues.len());
    for (a, issue) in issues.iter().enumerate() {
        let path = format!("issues[{a}]");
        let obj = object(issue, &path)?;
        let name = string(field(obj, "name", &path)?, &format!("{path}.name"))?;
        let choices = array(field(obj, "choices", &path)?, &format!("{path}.choices"))?
            .iter()
            .enumerate()
            .map(|(t, c)| string(c, &format!("{path}.choices[{t}]")))
            .collect::<Result<Vec<_>>>()?;
        if choices.is_empty() {
            return Err(Error::schema(
                format!("{path}.choices"),
                "an issue needs at least one choice",
            ));
        }
        let rows = sized(field(obj, "values", &path)?, &format!("{path}.values"), n)?;
        let mut values = Vec::with_capacity(n);
        for (i, row) in rows.iter().enumerate() {
            let row_path = format!("{path}.values[{i}]");
            values.push(
                sized(row, &row_path, choices.len())?
                    .iter()
                    .enumerate()
                    .map(|(t, v)| value(v, &format!("{row_path}[{t}]")))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        out.push(Issue { name, choices, values });
    }
    PdmInstance::new(n, out)
}

pub fn pdm_to_json(pdm: &PdmInstance) -> Json {
    let issues: Vec<Json> = pdm
        .issues()
        .iter()
        .map(|issue| {
            let values: Vec<Json> = issue
                .values
                .iter()
                .map(|row| Json::Array(row.iter().map(value_to_json).collect()))
                .collect();
            json!({ "name": issue.name, "choices": issue.choices, "values": values })
        })
        .collect();
    json!({ "agents": pdm.agents(), "issues": issues })
}

pub fn parse_outcome(pdm: &PdmInstance, text: &str) -> Result<PdmOutcome> {
    let doc = parse_document(text)?;
    let root = object(&doc, "$")?;
    let choices = object(field(root, "choices", "$")?, "choices")?;
    let mut selected = vec![None; pdm.num_issues()];
    for (name, choice) in choices {
        let path = format!("choices.{name}");
        let a = pdm
            .issues()
            .iter()
            .position(|issue| &issue.name == name)
            .ok_or_else(|| Error::schema(&path, "unknown issue"))?;
        let count = pdm.issues()[a].choices.len();
        match choice.as_u64() {
            Some(t) if t >= 1 && (t as usize) <= count => selected[a] = Some(t as usize - 1),
            _ => return Err(Error::schema(&path, format!("expected a choice number in 1..={count}"))),
        }
    }
    let choices = selected
        .into_iter()
        .enumerate()
        .map(|(a, t)| {
            t.ok_or_else(|| Error::schema("choices", format!("issue {:?} has no choice", pdm.issues()[a].name)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PdmOutcome { choices })
}

pub fn outcome_to_json(pdm: &PdmInstance, outcome: &PdmOutcome) -> Json {
    let choices: Map<String, Json> = pdm
        .issues()
        .iter()
        .zip(&outcome.choices)
        .map(|(issue, &t)| (issue.name.clone(), Json::from(t + 1)))
        .collect();
    json!({ "choices": choices })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures;

    const SWAP_ENVY: &str = r#"{
        "agents": 2,
        "items": ["a", "b", "c"],
        "values": [
            [[3, 1], [1, 2], [2, 1]],
            [[1, 4], [2, 1], [3, 2]]
        ]
    }"#;

    #[test]
    fn parses_two_agent_document() {
        let inst = parse_instance(SWAP_ENVY).unwrap();
        assert_eq!(inst, fixtures::swap_envy_instance());
        assert_eq!(inst.value(0, 0, 0), Value::from(3));
        assert_eq!(inst.value(1, 0, 0), Value::from(1));
    }

    #[test]
    fn fractions_and_empty_items() {
        let inst = parse_instance(r#"{"agents": 1, "items": ["x"], "values": [[["-2/6"]]]}"#).unwrap();
        assert_eq!(inst.value(0, 0, 0).to_string(), "-1/3");
        let empty = parse_instance(r#"{"agents": 1, "items": [], "values": [[]]}"#).unwrap();
        assert_eq!(empty.num_items(), 0);
    }

    #[test]
    fn errors_name_the_json_path() {
        let three_rows = r#"{"agents": 2, "items": ["a"], "values": [[[1,1]],[[1,1]],[[1,1]]]}"#;
        let err = parse_instance(three_rows).unwrap_err();
        assert!(
            matches!(
                err,
                Error::Dimension {
                    expected: 2,
                    found: 3,
                    ..
                }
            ),
            "{err}"
        );

        let zero_den = r#"{"agents": 1, "items": ["a"], "values": [[["1/0"]]]}"#;
        let err = parse_instance(zero_den).unwrap_err();
        assert!(err.to_string().starts_with("values[0][0][0]"), "{err}");

        let float = r#"{"agents": 1, "items": ["a"], "values": [[[0.5]]]}"#;
        assert!(parse_instance(float)
            .unwrap_err()
            .to_string()
            .contains("values[0][0][0]"));

        let missing = r#"{"agents": 1, "items": []}"#;
        assert!(parse_instance(missing).unwrap_err().to_string().contains("values"));

        assert!(matches!(parse_instance("{not json"), Err(Error::Json(_))));
    }

    #[test]
    fn allocation_round_trip() {
        let inst = fixtures::swap_envy_instance();
        let alloc = parse_allocation(&inst, r#"{"assignment": {"a": 1, "b": 1, "c": 2}}"#).unwrap();
        assert_eq!(alloc.assignment(), &[0, 0, 1]);
        let back = allocation_to_json(&inst, &alloc);
        assert_eq!(back.to_string(), r#"{"assignment":{"a":1,"b":1,"c":2}}"#);
        assert!(parse_allocation(&inst, r#"{"assignment": {"a": 1, "b": 3, "c": 2}}"#).is_err());
        assert!(parse_allocation(&inst, r#"{"assignment": {"a": 1}}"#).is_err());
        assert!(parse_allocation(&inst, r#"{"assignment": {"a": 1, "b": 1, "c": 1, "z": 1}}"#).is_err());
    }

    #[test]
    fn instance_and_pdm_round_trip() {
        let inst = fixtures::no_efx_instance();
        assert_eq!(instance_from_json(&instance_to_json(&inst)).unwrap(), inst);
        let pdm = inst.to_public_decision();
        assert_eq!(pdm_from_json(&pdm_to_json(&pdm)).unwrap(), pdm);
        let outcome = PdmOutcome {
            choices: vec![2, 0, 1, 0, 0, 0, 2],
        };
        let text = outcome_to_json(&pdm, &outcome).to_string();
        assert_eq!(parse_outcome(&pdm, &text).unwrap(), outcome);
    }

    #[test]
    fn pdm_rejects_empty_choices_with_path() {
        let text = r#"{"agents": 1, "issues": [{"name": "x", "choices": [], "values": [[]]}]}"#;
        assert!(parse_pdm(text).unwrap_err().to_string().contains("issues[0].choices"));
    }
}
