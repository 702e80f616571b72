//! Group and space specs as accepted by `--group`.
//!
//! Two shapes are accepted: flat, `{"group": "gl", "n": 2}`, and nested,
//! `{"kind": "gl", "params": {"n": 2}}`.

use std::sync::Arc;

use frolic::group::{builtin_group, FrolicherGroup, GroupKind};
use frolic::space::{circle, coordinate_cross, euclidean, product, RPowerConfig, SpaceDescriptor};
use serde_json::{Map, Value};

/// A parsed `--group` argument.
#[derive(Clone, Debug, PartialEq)]
pub enum Target {
    Group(GroupKind),
    Space(SpaceKind),
}

/// Builtin spaces that carry no group structure.
#[derive(Clone, Debug, PartialEq)]
pub enum SpaceKind {
    Euclidean(usize),
    Circle,
    CoordinateCross,
    Product(Box<Target>, Box<Target>),
}

impl Target {
    pub fn label(&self) -> String {
        match self {
            Target::Group(k) => k.label(),
            Target::Space(SpaceKind::Euclidean(n)) => format!("euclidean({n})"),
            Target::Space(SpaceKind::Circle) => "circle".into(),
            Target::Space(SpaceKind::CoordinateCross) => "coordinate_cross".into(),
            Target::Space(SpaceKind::Product(a, b)) => format!("product({},{})", a.label(), b.label()),
        }
    }

    pub fn group(&self) -> Result<FrolicherGroup, String> {
        match self {
            Target::Group(k) => builtin_group(k).map_err(|e| e.to_string()),
            Target::Space(_) => Err(format!("`{}` is a space, not a group", self.label())),
        }
    }

    pub fn space(&self) -> Result<Arc<SpaceDescriptor>, String> {
        let built = match self {
            Target::Group(k) => return Ok(builtin_group(k).map_err(|e| e.to_string())?.space().clone()),
            Target::Space(SpaceKind::Euclidean(n)) => euclidean(*n),
            Target::Space(SpaceKind::Circle) => circle(),
            Target::Space(SpaceKind::CoordinateCross) => coordinate_cross(),
            Target::Space(SpaceKind::Product(a, b)) => product(&a.space()?, &b.space()?),
        };
        built.map(Arc::new).map_err(|e| e.to_string())
    }
}

/// Reads `text` as inline JSON, or as a path when it starts with `@`.
pub fn load(text: &str) -> Result<Target, String> {
    let body = match text.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?,
        None => text.to_string(),
    };
    let value: Value = serde_json::from_str(&body).map_err(|e| format!("invalid group JSON: {e}"))?;
    parse(&value)
}

pub fn parse(value: &Value) -> Result<Target, String> {
    let (kind, params) = split(value)?;
    let usize_param = |key: &str| -> Result<usize, String> {
        match params.get(key) {
            Some(v) => v
                .as_u64()
                .map(|n| n as usize)
                .ok_or_else(|| format!("`{key}` must be a non-negative integer")),
            None => Err(format!("`{kind}` requires `{key}`")),
        }
    };
    let target = match kind.as_str() {
        "gl" => Target::Group(GroupKind::Gl(usize_param("n")?)),
        "so3" => Target::Group(GroupKind::So3),
        "sl2" => Target::Group(GroupKind::Sl2),
        "heisenberg3" | "heisenberg" => Target::Group(GroupKind::Heisenberg3),
        "additive" => Target::Group(GroupKind::Additive(usize_param("n")?)),
        "torus2" => Target::Group(GroupKind::Torus2),
        "r_power" => Target::Group(GroupKind::RPower(r_power_config(&params)?)),
        "loop_group" => {
            let target = params.get("target").ok_or("`loop_group` requires `target`")?;
            let target = match target {
                Value::String(s) => parse(&Value::Object(Map::from_iter([("group".into(), Value::String(s.clone()))])))?,
                other => parse(other)?,
            };
            let Target::Group(target) = target else {
                return Err("loop_group target must be a group".into());
            };
            Target::Group(GroupKind::Loop { modes: usize_param("modes")?, target: Box::new(target) })
        }
        "euclidean" => Target::Space(SpaceKind::Euclidean(usize_param("n")?)),
        "circle" => Target::Space(SpaceKind::Circle),
        "coordinate_cross" => Target::Space(SpaceKind::CoordinateCross),
        "product" => {
            let factors = params
                .get("factors")
                .and_then(Value::as_array)
                .filter(|f| f.len() == 2)
                .ok_or("`product` requires `factors`, a list of two specs")?;
            Target::Space(SpaceKind::Product(Box::new(parse(&factors[0])?), Box::new(parse(&factors[1])?)))
        }
        other => return Err(format!("unknown kind `{other}`")),
    };
    Ok(target)
}

fn split(value: &Value) -> Result<(String, Map<String, Value>), String> {
    let obj = value.as_object().ok_or("group spec must be a JSON object")?;
    let kind = obj
        .get("group")
        .or_else(|| obj.get("kind"))
        .and_then(Value::as_str)
        .ok_or("group spec needs a string `group` or `kind`")?
        .to_string();
    let params = match obj.get("params") {
        Some(Value::Object(p)) => p.clone(),
        Some(_) => return Err("`params` must be an object".into()),
        None => obj
            .iter()
            .filter(|(k, _)| *k != "group" && *k != "kind")
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect(),
    };
    Ok((kind, params))
}

fn r_power_config(params: &Map<String, Value>) -> Result<RPowerConfig, String> {
    let mut config = RPowerConfig::default();
    if let Some(j) = params.get("J_size").or_else(|| params.get("n")) {
        config.j_size = j.as_u64().ok_or("`J_size` must be a positive integer")? as usize;
    }
    if let Some(s) = params.get("supports") {
        config.supports = serde_json::from_value(s.clone()).map_err(|_| "`supports` must be a list of index lists")?;
    }
    if let Some(seed) = params.get("seed") {
        config.seed = seed.as_u64().ok_or("`seed` must be an unsigned integer")?;
    }
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn flat_and_nested_forms_agree() {
        let a = parse(&json!({"group": "gl", "n": 2})).unwrap();
        let b = parse(&json!({"kind": "gl", "params": {"n": 2}})).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, Target::Group(GroupKind::Gl(2)));
    }

    #[test]
    fn loop_targets_and_products() {
        let l = parse(&json!({"group": "loop_group", "modes": 1, "target": "so3"})).unwrap();
        assert_eq!(l.label(), "loop_group(1,so3)");
        let p = parse(&json!({"kind": "product", "factors": [{"kind": "euclidean", "n": 2}, {"kind": "circle"}]})).unwrap();
        assert_eq!(p.space().unwrap().point_arity(), 4);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(parse(&json!({"group": "gl"})).is_err());
        assert!(parse(&json!({"group": "nope"})).is_err());
        assert!(parse(&json!([1, 2])).is_err());
        assert!(parse(&json!({"group": "r_power", "supports": "x"})).is_err());
        assert!(load("{not json").is_err());
    }
}
