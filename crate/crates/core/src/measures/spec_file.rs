//! JSON measure specifications and the `name(args)` command-line grammar.

use std::path::Path;

use rug::Rational;
use serde::{Deserialize, Serialize};

use super::{parse_catalog, Catalog, Measure};
use crate::error::{Error, Result};
use crate::numeric::{format_rational, parse_rational};

/// A number in a spec file: a decimal string, or a plain JSON number.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Literal {
    Text(String),
    Number(serde_json::Number),
}

impl Literal {
    fn to_rational(&self) -> Result<Rational> {
        let text = match self {
            Literal::Text(s) => s.clone(),
            Literal::Number(n) => n.to_string(),
        };
        parse_rational(&text).map_err(|_| Error::InvalidSpec(format!("bad number '{text}'")))
    }

    fn from_rational(r: &Rational) -> Self {
        Literal::Text(format_rational(r))
    }
}

/// Serialized form of a [`Measure`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MeasureSpec {
    Discrete {
        atoms: Vec<(Literal, Literal)>,
    },
    Catalog {
        name: String,
        #[serde(default)]
        params: Vec<Literal>,
    },
    Augmented {
        base: Box<MeasureSpec>,
        #[serde(default)]
        add: Vec<(Literal, Literal)>,
        #[serde(default)]
        remove: Vec<(Literal, Literal)>,
    },
}

fn pairs(list: &[(Literal, Literal)]) -> Result<Vec<(Rational, Rational)>> {
    list.iter().map(|(p, w)| Ok((p.to_rational()?, w.to_rational()?))).collect()
}

impl MeasureSpec {
    pub fn to_measure(&self) -> Result<Measure> {
        match self {
            MeasureSpec::Discrete { atoms } => Measure::discrete(pairs(atoms)?),
            MeasureSpec::Catalog { name, params } => {
                let params = params.iter().map(Literal::to_rational).collect::<Result<Vec<_>>>()?;
                Ok(Measure::Catalog(Catalog::from_name(name, &params)?))
            }
            MeasureSpec::Augmented { base, add, remove } => {
                let mut m = base.to_measure()?;
                for (p, w) in pairs(add)? {
                    m = m.add_atom(&p, &w)?;
                }
                for (p, w) in pairs(remove)? {
                    m = m.remove_atom(&p, &w)?;
                }
                Ok(m)
            }
        }
    }

    pub fn from_measure(m: &Measure) -> Self {
        let lit = |atoms: &[super::Atom]| {
            atoms.iter().map(|a| (Literal::from_rational(&a.position), Literal::from_rational(&a.weight))).collect()
        };
        let catalog = |c: &Catalog| MeasureSpec::Catalog {
            name: c.name().to_string(),
            params: c.params().iter().map(Literal::from_rational).collect(),
        };
        match m {
            Measure::Discrete(atoms) => MeasureSpec::Discrete { atoms: lit(atoms) },
            Measure::Catalog(c) => catalog(c),
            Measure::Augmented { base, added, removed } => {
                MeasureSpec::Augmented { base: Box::new(catalog(base)), add: lit(added), remove: lit(removed) }
            }
        }
    }
}

/// Inline JSON (starting with `{`), a path to a JSON file, or a catalog expression.
pub fn parse_measure(spec: &str) -> Result<Measure> {
    let s = spec.trim();
    if s.starts_with('{') {
        return parse_json(s);
    }
    let looks_like_file = s.ends_with(".json") || s.contains('/') && !s.contains('(');
    if looks_like_file || Path::new(s).is_file() {
        let text = std::fs::read_to_string(s).map_err(|e| Error::InvalidSpec(format!("cannot read '{s}': {e}")))?;
        return parse_json(&text);
    }
    parse_catalog(s).map(Measure::Catalog)
}

fn parse_json(text: &str) -> Result<Measure> {
    let spec: MeasureSpec = serde_json::from_str(text).map_err(|e| Error::InvalidSpec(format!("measure JSON: {e}")))?;
    spec.to_measure()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_kinds() {
        let d = parse_measure(r#"{"kind":"discrete","atoms":[["0","1"],["2","0.5"]]}"#).unwrap();
        assert_eq!(d.atoms().len(), 2);
        assert_eq!(d.atoms()[1].weight, Rational::from((1, 2)));

        let c = parse_measure(r#"{"kind":"catalog","name":"uniform","params":["-1","1"]}"#).unwrap();
        assert_eq!(c, parse_measure("uniform(-1,1)").unwrap());

        let a = parse_measure(
            r#"{"kind":"augmented","base":{"kind":"catalog","name":"uniform_plus_atom","params":[1]},
                "add":[["0.5","2"]],"remove":[["1","1"]]}"#,
        )
        .unwrap();
        assert_eq!(a.to_string(), "uniform(-1,1) + atom(1/2,2)");
    }

    #[test]
    fn round_trip_through_json() {
        let m = parse_measure("gaussian").unwrap().add_atom(&Rational::from(3), &Rational::from(1)).unwrap();
        let json = serde_json::to_string(&MeasureSpec::from_measure(&m)).unwrap();
        assert_eq!(parse_measure(&json).unwrap(), m);
    }

    #[test]
    fn bad_specs() {
        assert!(parse_measure(r#"{"kind":"discrete","atoms":[["0","-1"]]}"#).is_err());
        assert!(parse_measure(r#"{"kind":"nope"}"#).is_err());
        assert!(parse_measure("/no/such/file.json").is_err());
        assert!(parse_measure(
            r#"{"kind":"augmented","base":{"kind":"catalog","name":"uniform"},"remove":[["0","1"]]}"#
        )
        .is_err());
    }
}
