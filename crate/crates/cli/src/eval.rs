use std::fmt::Write as _;
use std::str::FromStr;

use djet_core::geometry::LocalGeometry;
use djet_core::objects::{Component, Components};
use djet_core::PhasePoint;
use serde_json::{json, Map, Value};

use crate::{CliError, ModelSpec};

/// Object families printable by [`run_eval`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selector {
    /// `g*_{ij}`
    G,
    /// `g*^{ij}`
    Ginv,
    N,
    Cartan,
    Torsion,
    Curvature,
    Ricci,
    Sc,
    Einstein,
    Em,
}

impl Selector {
    fn objects(self) -> &'static [&'static str] {
        match self {
            Selector::G => &["g"],
            Selector::Ginv => &["ginv"],
            Selector::N => &["n1", "n2", "christoffel_h"],
            Selector::Cartan => &["cartan_a", "cartan_h", "cartan_c"],
            Selector::Torsion => &["torsion_r1", "torsion_p"],
            Selector::Curvature => &["curvature_r", "curvature_p", "curvature_s", "covariant_c", "deflection"],
            Selector::Ricci => &["ricci_r", "ricci_s"],
            Selector::Sc => &["sc"],
            Selector::Einstein => &[
                "einstein_11",
                "einstein_x",
                "einstein_p",
                "t11",
                "t_x",
                "t_p",
                "t_1i",
                "t_i1",
                "t_(i)1",
                "t_1(i)",
                "t_i(j)",
                "t_(i)j",
                "t_mixed_time",
                "e_mixed",
                "t_mixed",
            ],
            Selector::Em => &["em"],
        }
    }
}

impl FromStr for Selector {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Ok(match s.trim() {
            "g" => Selector::G,
            "ginv" => Selector::Ginv,
            "N" | "n" => Selector::N,
            "cartan" => Selector::Cartan,
            "torsion" => Selector::Torsion,
            "curvature" => Selector::Curvature,
            "ricci" => Selector::Ricci,
            "sc" => Selector::Sc,
            "einstein" => Selector::Einstein,
            "em" => Selector::Em,
            other => return Err(CliError::UnknownSelector(other.to_string())),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Pipeline {
    #[default]
    Generic,
    ClosedForm,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalOptions {
    pub selectors: Vec<Selector>,
    pub format: Format,
    pub pipeline: Pipeline,
}

/// Parses `t=..,x=[..],p=[..]`. Missing `t` and `x` default to zero; `p` is
/// required.
pub fn parse_point(text: &str) -> Result<PhasePoint, CliError> {
    let bad = |reason: String| CliError::BadPoint { text: text.to_string(), reason };
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let (mut t, mut x, mut p) = (None, None, None);
    let mut rest = compact.as_str();
    while !rest.is_empty() {
        let (key, after) = rest.split_once('=').ok_or_else(|| bad(format!("expected key=value at {rest:?}")))?;
        let (value, tail) = if let Some(inner) = after.strip_prefix('[') {
            let close = inner.find(']').ok_or_else(|| bad("unclosed '['".to_string()))?;
            (&inner[..close], &inner[close + 1..])
        } else {
            after.split_at(after.find(',').unwrap_or(after.len()))
        };
        rest = tail.strip_prefix(',').unwrap_or(tail);
        let numbers = value
            .split(',')
            .map(|s| s.parse::<f64>().map_err(|e| bad(format!("{key}: {e}"))))
            .collect::<Result<Vec<f64>, _>>()?;
        let slot = match key {
            "t" => &mut t,
            "x" => &mut x,
            "p" => &mut p,
            other => return Err(bad(format!("unknown key {other:?}"))),
        };
        if slot.replace(numbers).is_some() {
            return Err(bad(format!("{key} given twice")));
        }
    }
    let four = |name: &str, v: Vec<f64>| -> Result<[f64; 4], CliError> {
        v.try_into().map_err(|v: Vec<f64>| bad(format!("{name} needs 4 components, got {}", v.len())))
    };
    let t = match t.as_deref() {
        None => 0.0,
        Some([v]) => *v,
        Some(_) => return Err(bad("t is a scalar".to_string())),
    };
    let x = x.map(|v| four("x", v)).transpose()?.unwrap_or([0.0; 4]);
    let p = four("p", p.ok_or_else(|| bad("p is required".to_string()))?)?;
    Ok(PhasePoint::new(t, x, p)?)
}

/// Evaluates the model at `pt` and renders the selected objects.
pub fn run_eval(spec: &ModelSpec, pt: &PhasePoint, opts: &EvalOptions) -> Result<String, CliError> {
    let built = spec.build()?;
    if !built.admissible(pt) {
        return Err(CliError::BadPoint { text: pt.to_string(), reason: "h11 or the model is not admissible here".into() });
    }
    let bundle = match opts.pipeline {
        Pipeline::Generic => LocalGeometry::new(&built.generic, pt)?.bundle(),
        Pipeline::ClosedForm => built.model.bundle(pt)?,
    };
    let all = bundle.component_list();
    let families: Vec<(&str, Vec<&Component>)> = opts
        .selectors
        .iter()
        .flat_map(|s| s.objects())
        .map(|name| (*name, all.iter().filter(|c| c.object == *name).collect()))
        .collect();
    match opts.format {
        Format::Json => {
            let mut objects = Map::new();
            for (name, comps) in &families {
                let values: Vec<f64> = comps.iter().map(|c| c.value).collect();
                objects.insert(name.to_string(), nest(&values, comps[0].index.len()));
            }
            let point = json!({ "t": pt.t(), "x": pt.x(), "p": pt.p() });
            let pipeline = match opts.pipeline {
                Pipeline::Generic => "generic",
                Pipeline::ClosedForm => "closed-form",
            };
            let doc = json!({ "schema": "djet-eval/1", "model": spec, "pipeline": pipeline, "point": point, "objects": objects });
            Ok(serde_json::to_string_pretty(&doc)? + "\n")
        }
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "at {pt}");
            for (name, comps) in &families {
                let _ = writeln!(out, "\n{name}");
                let width = comps.iter().map(|c| c.label().len()).max().unwrap_or(0);
                for c in comps {
                    let _ = writeln!(out, "  {:<width$}  {:>24.16e}", c.label(), c.value);
                }
            }
            Ok(out)
        }
    }
}

/// Row-major flat values of a rank-`rank` object with extent 4 per index.
fn nest(values: &[f64], rank: usize) -> Value {
    if rank == 0 {
        return json!(values[0]);
    }
    Value::Array(values.chunks(values.len() / 4).map(|c| nest(c, rank - 1)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_points() {
        let pt = parse_point("t=0.5, x=[1,2,3,4], p=[1, 2, 3, 4]").unwrap();
        assert_eq!(pt.t(), 0.5);
        assert_eq!(pt.x(), [1.0, 2.0, 3.0, 4.0]);
        assert_eq!(pt.p(), [1.0, 2.0, 3.0, 4.0]);
        assert_eq!(parse_point("p=[1,1,1,1]").unwrap(), PhasePoint::unit());
        for bad in ["t=0", "p=[1,1,1]", "p=[1,1,1,-1]", "q=1,p=[1,1,1,1]", "p=[1,1,1,1", "t=a,p=[1,1,1,1]", "t=[1,2],p=[1,1,1,1]"] {
            assert!(parse_point(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn nests_row_major() {
        let v: Vec<f64> = (0..16).map(f64::from).collect();
        assert_eq!(nest(&v, 2)[1][2], json!(6.0));
        assert_eq!(nest(&[2.5], 0), json!(2.5));
    }

    #[test]
    fn selectors() {
        assert_eq!("ricci".parse::<Selector>().unwrap(), Selector::Ricci);
        assert!(matches!("bogus".parse::<Selector>(), Err(CliError::UnknownSelector(_))));
    }
}
