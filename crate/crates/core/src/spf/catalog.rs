//! Serializable descriptions of integer networks built from a fixed set of
//! prefix-monotone components.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::stream::{Pull, Stream};

use super::network::{Component, Network, NetworkError, Sink, Source};
use super::Spf;

const INT: &str = "int";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ComponentSpec {
    Identity,
    Add {
        amount: i64,
    },
    Scale {
        factor: i64,
    },
    /// Keeps the messages congruent to `remainder` modulo `modulus`.
    KeepResidue {
        modulus: i64,
        remainder: i64,
    },
    Repeat {
        times: usize,
    },
    /// Emits `values` before copying its input.
    Prepend {
        values: Vec<i64>,
    },
    /// Two inputs, pointwise sum.
    ZipAdd,
}

impl ComponentSpec {
    pub fn build(&self) -> Arc<dyn Component<i64>> {
        match self {
            ComponentSpec::ZipAdd => Arc::new(ZipAdd),
            single => Arc::new(Single(single.to_spf())),
        }
    }

    fn to_spf(&self) -> Spf<i64, i64> {
        match *self {
            ComponentSpec::Identity => Spf::identity(),
            ComponentSpec::Add { amount } => Spf::lift_elementwise(move |x: i64| vec![x.wrapping_add(amount)]),
            ComponentSpec::Scale { factor } => Spf::lift_elementwise(move |x: i64| vec![x.wrapping_mul(factor)]),
            ComponentSpec::KeepResidue { modulus, remainder } => Spf::lift_elementwise(move |x: i64| {
                if modulus != 0 && x.rem_euclid(modulus) == remainder.rem_euclid(modulus) {
                    vec![x]
                } else {
                    vec![]
                }
            }),
            ComponentSpec::Repeat { times } => Spf::lift_elementwise(move |x: i64| vec![x; times]),
            ComponentSpec::Prepend { ref values } => {
                let head = values.clone();
                Spf::from_fn(move |s: &Stream<i64>| Stream::from_vec(head.clone()).concat(s))
            }
            ComponentSpec::ZipAdd => unreachable!("two-input component"),
        }
    }
}

struct Single(Spf<i64, i64>);

impl Component<i64> for Single {
    fn input_types(&self) -> Vec<String> {
        vec![INT.into()]
    }

    fn output_types(&self) -> Vec<String> {
        vec![INT.into()]
    }

    fn eval(&self, inputs: &[Stream<i64>]) -> Vec<Stream<i64>> {
        vec![self.0.apply(&inputs[0])]
    }
}

struct ZipAdd;

impl Component<i64> for ZipAdd {
    fn input_types(&self) -> Vec<String> {
        vec![INT.into(), INT.into()]
    }

    fn output_types(&self) -> Vec<String> {
        vec![INT.into()]
    }

    fn eval(&self, inputs: &[Stream<i64>]) -> Vec<Stream<i64>> {
        let zipped = inputs[0].zip(&inputs[1]);
        let mut next = 0usize;
        vec![Stream::from_source(
            Box::new(move || match zipped.step(next) {
                Pull::Item((a, b)) => {
                    next += 1;
                    Pull::Item(a.wrapping_add(b))
                }
                Pull::Skip => Pull::Skip,
                Pull::End => Pull::End,
            }),
            false,
        )]
    }
}

/// A channel endpoint: `name` for an external port, `component:port` otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Endpoint {
    External(String),
    Port(String, usize),
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::External(name) => f.write_str(name),
            Endpoint::Port(component, port) => write!(f, "{component}:{port}"),
        }
    }
}

impl FromStr for Endpoint {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.split_once(':') {
            None if !s.is_empty() => Ok(Endpoint::External(s.to_string())),
            None => Err("empty endpoint".into()),
            Some((component, port)) => port
                .parse()
                .map(|port| Endpoint::Port(component.to_string(), port))
                .map_err(|_| format!("bad port number in `{s}`")),
        }
    }
}

impl Serialize for Endpoint {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Endpoint {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        String::deserialize(deserializer)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedComponent {
    pub name: String,
    #[serde(flatten)]
    pub spec: ComponentSpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireSpec {
    pub from: Endpoint,
    pub to: Endpoint,
}

/// A network of integer components as stored in configuration files.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkConfig {
    #[serde(default)]
    pub inputs: Vec<String>,
    #[serde(default)]
    pub outputs: Vec<String>,
    pub components: Vec<NamedComponent>,
    pub wires: Vec<WireSpec>,
}

impl NetworkConfig {
    pub fn build(&self) -> Result<Network<i64>, NetworkError> {
        let mut net = Network::new();
        for name in &self.inputs {
            net.add_input(name.clone(), INT);
        }
        for name in &self.outputs {
            net.add_output(name.clone(), INT);
        }
        for c in &self.components {
            net.add_component(c.name.clone(), c.spec.build());
        }
        for wire in &self.wires {
            let from = match &wire.from {
                Endpoint::External(name) => Source::input(name.clone()),
                Endpoint::Port(c, p) => Source::port(c.clone(), *p),
            };
            let to = match &wire.to {
                Endpoint::External(name) => Sink::output(name.clone()),
                Endpoint::Port(c, p) => Sink::port(c.clone(), *p),
            };
            net.connect(from, to);
        }
        net.validate()?;
        Ok(net)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spf::fixpoint_solve;
    use crate::stream::EvalBudget;
    use std::collections::BTreeMap;

    #[test]
    fn loads_feedback_network_from_json() {
        // s = x + (<0> ⌢ s): running sums of x
        let json = r#"{
            "inputs": ["x"],
            "outputs": ["sums"],
            "components": [
                {"name": "add", "kind": "zip_add"},
                {"name": "delay", "kind": "prepend", "values": [0]}
            ],
            "wires": [
                {"from": "x", "to": "add:0"},
                {"from": "delay:0", "to": "add:1"},
                {"from": "add:0", "to": "delay:0"},
                {"from": "add:0", "to": "sums"}
            ]
        }"#;
        let config: NetworkConfig = serde_json::from_str(json).unwrap();
        let net = config.build().unwrap();
        let inputs = BTreeMap::from([("x".to_string(), vec![1, 2, 3, 4])]);
        let run = fixpoint_solve(&net, &inputs, 50, EvalBudget::new(100).unwrap()).unwrap();
        assert!(run.converged());
        assert_eq!(run.output("sums"), Some(&[1, 3, 6, 10][..]));

        let round_trip: NetworkConfig = serde_json::from_str(&serde_json::to_string(&config).unwrap()).unwrap();
        assert_eq!(round_trip, config);
    }

    #[test]
    fn endpoint_parsing() {
        assert_eq!("a:3".parse(), Ok(Endpoint::Port("a".into(), 3)));
        assert_eq!("x".parse(), Ok(Endpoint::External("x".into())));
        assert!("a:b".parse::<Endpoint>().is_err());
    }
}
