use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

pub type ConfigMap = Map<String, Value>;

/// Reads a JSON object of parameters.
pub fn load(path: &Path) -> CliResult<ConfigMap> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    match serde_json::from_str(&text) {
        Ok(Value::Object(map)) => Ok(map),
        Ok(_) => Err(CliError::Usage(format!("{}: config must be a JSON object", path.display()))),
        Err(e) => Err(CliError::Usage(format!("{}: {e}", path.display()))),
    }
}

/// Lays the flags that were given on the command line over `base`.
pub fn overlay<T: Serialize>(mut base: ConfigMap, flags: &T) -> CliResult<ConfigMap> {
    let Value::Object(given) = serde_json::to_value(flags).map_err(|e| CliError::Usage(e.to_string()))? else {
        return Err(CliError::Usage("flags do not form an object".into()));
    };
    for (k, v) in given {
        if !v.is_null() {
            base.insert(k, v);
        }
    }
    Ok(base)
}

pub fn parse<P: DeserializeOwned>(map: ConfigMap) -> CliResult<P> {
    serde_json::from_value(Value::Object(map)).map_err(|e| CliError::Usage(format!("config: {e}")))
}

/// `key=v1,v2,…` or `key=start:stop:step`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub key: String,
    pub values: Vec<Value>,
}

impl Sweep {
    pub fn point(&self, base: &ConfigMap, i: usize) -> ConfigMap {
        let mut map = base.clone();
        map.insert(self.key.clone(), self.values[i].clone());
        map
    }
}

fn scalar(s: &str) -> Value {
    serde_json::from_str(s).unwrap_or_else(|_| Value::String(s.to_string()))
}

fn range(spec: &str) -> Result<Vec<Value>, String> {
    let parts: Vec<f64> = spec
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<Result<_, _>>()?;
    let [start, stop, step] = parts[..] else {
        return Err(format!("range `{spec}` needs start:stop:step"));
    };
    if !(step > 0.0) || stop < start {
        return Err(format!("range `{spec}` is empty"));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..n)
        .map(|i| {
            let v = start + i as f64 * step;
            Value::from((v * 1e12).round() / 1e12)
        })
        .collect())
}

impl FromStr for Sweep {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        let (key, rest) = s
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("sweep `{s}` must look like key=values")))?;
        let values = if rest.contains(':') {
            range(rest).map_err(CliError::Usage)?
        } else {
            rest.split(',').filter(|v| !v.trim().is_empty()).map(|v| scalar(v.trim())).collect()
        };
        if key.is_empty() || values.is_empty() {
            return Err(CliError::Usage(format!("sweep `{s}` has no values")));
        }
        Ok(Sweep {
            key: key.trim().to_string(),
            values,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde::Deserialize;
    use serde_json::json;

    #[derive(Serialize, Deserialize, Debug, PartialEq)]
    #[serde(deny_unknown_fields)]
    struct P {
        a: Option<f64>,
        kind: Option<String>,
    }

    #[test]
    fn flags_override_file() {
        let base = json!({"a": 1.0, "kind": "km"}).as_object().unwrap().clone();
        let flags = P { a: Some(0.6), kind: None };
        let p: P = parse(overlay(base, &flags).unwrap()).unwrap();
        assert_eq!(p, P { a: Some(0.6), kind: Some("km".into()) });
    }

    #[test]
    fn unknown_keys_rejected() {
        let base = json!({"b": 1}).as_object().unwrap().clone();
        assert!(matches!(parse::<P>(base), Err(CliError::Usage(_))));
    }

    #[test]
    fn sweep_lists_and_ranges() {
        let s: Sweep = "a=0.6,0.75,1".parse().unwrap();
        assert_eq!(s.key, "a");
        assert_eq!(s.values, vec![json!(0.6), json!(0.75), json!(1)]);
        let s: Sweep = "k=0.25:1.75:0.25".parse().unwrap();
        assert_eq!(s.values.len(), 7);
        assert_eq!(s.values[2], json!(0.75));
        let s: Sweep = "kind=km,peregrine".parse().unwrap();
        assert_eq!(s.values[1], json!("peregrine"));
        assert!("a".parse::<Sweep>().is_err());
        assert!("a=1:0:0.1".parse::<Sweep>().is_err());
    }
}
