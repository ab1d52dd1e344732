//! Networks of stream-processing components, solved by Kleene iteration.
//!
//! Every channel starts empty. Each round re-evaluates every component on the
//! current (finite) channel contents; iteration stops when a round changes no
//! channel. Components must be prefix-monotone for the rounds to form an
//! ascending chain, which the solver does not verify.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::stream::{EvalBudget, Message, Stream};

use super::Spf;

/// A multi-port stream-processing component.
pub trait Component<M>: Send + Sync {
    /// Type label of each input port, in port order.
    fn input_types(&self) -> Vec<String>;
    /// Type label of each output port, in port order.
    fn output_types(&self) -> Vec<String>;
    /// One output stream per output port.
    fn eval(&self, inputs: &[Stream<M>]) -> Vec<Stream<M>>;
}

/// A single-port [`Spf`] with type labels for its two ports.
struct SpfComponent<M> {
    spf: Spf<M, M>,
    input_type: String,
    output_type: String,
}

impl<M: Message> Component<M> for SpfComponent<M> {
    fn input_types(&self) -> Vec<String> {
        vec![self.input_type.clone()]
    }

    fn output_types(&self) -> Vec<String> {
        vec![self.output_type.clone()]
    }

    fn eval(&self, inputs: &[Stream<M>]) -> Vec<Stream<M>> {
        vec![self.spf.apply(&inputs[0])]
    }
}

/// Where a wire takes its messages from.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Source {
    Input(String),
    Port { component: String, port: usize },
}

impl Source {
    pub fn input(name: impl Into<String>) -> Self {
        Source::Input(name.into())
    }

    pub fn port(component: impl Into<String>, port: usize) -> Self {
        Source::Port {
            component: component.into(),
            port,
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Input(name) => f.write_str(name),
            Source::Port { component, port } => write!(f, "{component}:{port}"),
        }
    }
}

/// Where a wire delivers its messages.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sink {
    Output(String),
    Port { component: String, port: usize },
}

impl Sink {
    pub fn output(name: impl Into<String>) -> Self {
        Sink::Output(name.into())
    }

    pub fn port(component: impl Into<String>, port: usize) -> Self {
        Sink::Port {
            component: component.into(),
            port,
        }
    }
}

impl fmt::Display for Sink {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sink::Output(name) => f.write_str(name),
            Sink::Port { component, port } => write!(f, "{component}:{port}"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NetworkError {
    #[error("name `{0}` is declared twice")]
    DuplicateName(String),
    #[error("unknown component `{0}`")]
    UnknownComponent(String),
    #[error("unknown external input `{0}`")]
    UnknownInput(String),
    #[error("unknown external output `{0}`")]
    UnknownOutput(String),
    #[error("port {endpoint} does not exist")]
    NoSuchPort { endpoint: String },
    #[error("input port {endpoint} is not driven by any wire")]
    Unconnected { endpoint: String },
    #[error("{endpoint} is driven by more than one wire")]
    MultipleDrivers { endpoint: String },
    #[error("wire {from} -> {to} connects type `{from_type}` to type `{to_type}`")]
    TypeMismatch {
        from: String,
        to: String,
        from_type: String,
        to_type: String,
    },
    #[error("no value supplied for external input `{0}`")]
    MissingInput(String),
    #[error("component `{component}` produced more than {limit} messages on port {port} in round {round}")]
    Unbounded {
        component: String,
        port: usize,
        round: usize,
        limit: usize,
    },
}

/// Components, external ports and the wires between them. Feedback is allowed.
pub struct Network<M> {
    inputs: Vec<(String, String)>,
    outputs: Vec<(String, String)>,
    components: Vec<(String, Arc<dyn Component<M>>)>,
    wires: Vec<(Source, Sink)>,
}

impl<M> Default for Network<M> {
    fn default() -> Self {
        Network {
            inputs: Vec::new(),
            outputs: Vec::new(),
            components: Vec::new(),
            wires: Vec::new(),
        }
    }
}

impl<M: Message + PartialEq> Network<M> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_input(&mut self, name: impl Into<String>, channel_type: impl Into<String>) -> &mut Self {
        self.inputs.push((name.into(), channel_type.into()));
        self
    }

    pub fn add_output(&mut self, name: impl Into<String>, channel_type: impl Into<String>) -> &mut Self {
        self.outputs.push((name.into(), channel_type.into()));
        self
    }

    pub fn add_component(&mut self, name: impl Into<String>, component: Arc<dyn Component<M>>) -> &mut Self {
        self.components.push((name.into(), component));
        self
    }

    /// Adds a single-port function whose ports carry `channel_type`.
    pub fn add_spf(&mut self, name: impl Into<String>, spf: Spf<M, M>, channel_type: impl Into<String>) -> &mut Self {
        let channel_type = channel_type.into();
        self.add_component(
            name,
            Arc::new(SpfComponent {
                spf,
                input_type: channel_type.clone(),
                output_type: channel_type,
            }),
        )
    }

    pub fn connect(&mut self, from: Source, to: Sink) -> &mut Self {
        self.wires.push((from, to));
        self
    }

    pub fn component_names(&self) -> impl Iterator<Item = &str> {
        self.components.iter().map(|(name, _)| name.as_str())
    }

    /// Checks the wiring: names resolve, ports exist, every component input
    /// and external output has exactly one driver, and wire types agree.
    pub fn validate(&self) -> Result<(), NetworkError> {
        self.resolve().map(|_| ())
    }

    fn component_index(&self, name: &str) -> Result<usize, NetworkError> {
        self.components
            .iter()
            .position(|(n, _)| n == name)
            .ok_or_else(|| NetworkError::UnknownComponent(name.to_string()))
    }

    fn source_type(&self, source: &Source) -> Result<String, NetworkError> {
        match source {
            Source::Input(name) => self
                .inputs
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, t)| t.clone())
                .ok_or_else(|| NetworkError::UnknownInput(name.clone())),
            Source::Port { component, port } => {
                let c = self.component_index(component)?;
                self.components[c]
                    .1
                    .output_types()
                    .get(*port)
                    .cloned()
                    .ok_or_else(|| NetworkError::NoSuchPort {
                        endpoint: source.to_string(),
                    })
            }
        }
    }

    fn sink_type(&self, sink: &Sink) -> Result<String, NetworkError> {
        match sink {
            Sink::Output(name) => self
                .outputs
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, t)| t.clone())
                .ok_or_else(|| NetworkError::UnknownOutput(name.clone())),
            Sink::Port { component, port } => {
                let c = self.component_index(component)?;
                self.components[c]
                    .1
                    .input_types()
                    .get(*port)
                    .cloned()
                    .ok_or_else(|| NetworkError::NoSuchPort {
                        endpoint: sink.to_string(),
                    })
            }
        }
    }

    /// Maps every sink to its driving source.
    fn resolve(&self) -> Result<BTreeMap<Sink, Source>, NetworkError> {
        let mut names = BTreeSet::new();
        let declared = self
            .inputs
            .iter()
            .map(|(n, _)| n)
            .chain(self.outputs.iter().map(|(n, _)| n))
            .chain(self.components.iter().map(|(n, _)| n));
        for name in declared {
            if !names.insert(name) {
                return Err(NetworkError::DuplicateName(name.clone()));
            }
        }

        let mut drivers = BTreeMap::new();
        for (from, to) in &self.wires {
            let from_type = self.source_type(from)?;
            let to_type = self.sink_type(to)?;
            if from_type != to_type {
                return Err(NetworkError::TypeMismatch {
                    from: from.to_string(),
                    to: to.to_string(),
                    from_type,
                    to_type,
                });
            }
            if drivers.insert(to.clone(), from.clone()).is_some() {
                return Err(NetworkError::MultipleDrivers {
                    endpoint: to.to_string(),
                });
            }
        }

        let required = self
            .components
            .iter()
            .flat_map(|(name, c)| (0..c.input_types().len()).map(move |port| Sink::port(name.clone(), port)))
            .chain(self.outputs.iter().map(|(name, _)| Sink::output(name.clone())));
        for sink in required {
            if !drivers.contains_key(&sink) {
                return Err(NetworkError::Unconnected {
                    endpoint: sink.to_string(),
                });
            }
        }
        Ok(drivers)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convergence {
    /// A round changed no channel.
    Converged,
    /// The round limit was reached first; the channels hold the latest approximation.
    BudgetExhausted,
}

/// Result of a fixpoint iteration.
#[derive(Clone, Debug)]
pub struct FixpointRun<M> {
    pub status: Convergence,
    /// Rounds evaluated, including the final one that changed nothing.
    pub rounds: usize,
    /// Final content of every channel, keyed by its source (`name` or `component:port`).
    pub channels: BTreeMap<String, Vec<M>>,
    /// Final content of every external output.
    pub outputs: BTreeMap<String, Vec<M>>,
    /// Channel contents after each round.
    pub history: Vec<BTreeMap<String, Vec<M>>>,
}

impl<M> FixpointRun<M> {
    pub fn converged(&self) -> bool {
        self.status == Convergence::Converged
    }

    pub fn output(&self, name: &str) -> Option<&[M]> {
        self.outputs.get(name).map(Vec::as_slice)
    }
}

/// Solves `net` for the given finite external inputs by Kleene iteration.
///
/// `limit` bounds the length of any channel; a component that exceeds it on
/// finite input is reported as [`NetworkError::Unbounded`].
pub fn fixpoint_solve<M: Message + PartialEq>(
    net: &Network<M>,
    external_inputs: &BTreeMap<String, Vec<M>>,
    max_rounds: usize,
    limit: EvalBudget,
) -> Result<FixpointRun<M>, NetworkError> {
    let drivers = net.resolve()?;
    for name in external_inputs.keys() {
        if !net.inputs.iter().any(|(n, _)| n == name) {
            return Err(NetworkError::UnknownInput(name.clone()));
        }
    }

    let mut channels: BTreeMap<Source, Vec<M>> = BTreeMap::new();
    for (name, _) in &net.inputs {
        let value = external_inputs
            .get(name)
            .ok_or_else(|| NetworkError::MissingInput(name.clone()))?;
        channels.insert(Source::input(name.clone()), value.clone());
    }
    for (name, component) in &net.components {
        for port in 0..component.output_types().len() {
            channels.insert(Source::port(name.clone(), port), Vec::new());
        }
    }

    let snapshot = |channels: &BTreeMap<Source, Vec<M>>| {
        channels
            .iter()
            .map(|(source, value)| (source.to_string(), value.clone()))
            .collect::<BTreeMap<_, _>>()
    };

    let mut history = Vec::new();
    let mut status = Convergence::BudgetExhausted;
    let mut rounds = 0;
    while rounds < max_rounds {
        rounds += 1;
        let mut next = channels.clone();
        let mut changed = false;
        for (name, component) in &net.components {
            let inputs: Vec<Stream<M>> = (0..component.input_types().len())
                .map(|port| {
                    let source = &drivers[&Sink::port(name.clone(), port)];
                    Stream::from_vec(channels[source].clone())
                })
                .collect();
            for (port, out) in component.eval(&inputs).into_iter().enumerate() {
                let value = out.to_vec_within(limit).ok_or_else(|| NetworkError::Unbounded {
                    component: name.clone(),
                    port,
                    round: rounds,
                    limit: limit.max_elements(),
                })?;
                let slot = next
                    .get_mut(&Source::port(name.clone(), port))
                    .expect("every output port has a channel");
                if *slot != value {
                    *slot = value;
                    changed = true;
                }
            }
        }
        channels = next;
        history.push(snapshot(&channels));
        if !changed {
            status = Convergence::Converged;
            break;
        }
    }

    let outputs = net
        .outputs
        .iter()
        .map(|(name, _)| {
            let source = &drivers[&Sink::output(name.clone())];
            (name.clone(), channels[source].clone())
        })
        .collect();
    Ok(FixpointRun {
        status,
        rounds,
        channels: snapshot(&channels),
        outputs,
        history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k() -> EvalBudget {
        EvalBudget::new(1000).unwrap()
    }

    fn inputs(pairs: &[(&str, Vec<i32>)]) -> BTreeMap<String, Vec<i32>> {
        pairs.iter().map(|(n, v)| (n.to_string(), v.clone())).collect()
    }

    #[test]
    fn identity_network_converges() {
        let mut net = Network::new();
        net.add_input("x", "int")
            .add_output("y", "int")
            .add_spf("id", Spf::identity(), "int")
            .connect(Source::input("x"), Sink::port("id", 0))
            .connect(Source::port("id", 0), Sink::output("y"));
        let run = fixpoint_solve(&net, &inputs(&[("x", vec![1, 2])]), 10, k()).unwrap();
        assert!(run.converged());
        assert!(run.rounds <= 2);
        assert_eq!(run.output("y"), Some(&[1, 2][..]));
    }

    #[test]
    fn silent_feedback_loop_is_least_fixpoint() {
        let mut net = Network::new();
        net.add_output("y", "int")
            .add_spf("mute", Spf::lift_elementwise(|_: i32| vec![]), "int")
            .connect(Source::port("mute", 0), Sink::port("mute", 0))
            .connect(Source::port("mute", 0), Sink::output("y"));
        let run = fixpoint_solve(&net, &BTreeMap::new(), 10, k()).unwrap();
        assert_eq!(run.status, Convergence::Converged);
        assert_eq!(run.rounds, 1);
        assert!(run.channels.values().all(Vec::is_empty));
    }

    #[test]
    fn growing_feedback_exhausts_rounds() {
        // y = <0> followed by y + 1: the least fixpoint is the infinite stream 0, 1, 2, ...
        let prepend_zero = Spf::from_fn(|s: &Stream<i32>| Stream::from(vec![0]).concat(&s.map(|x| x + 1)));
        let mut net = Network::new();
        net.add_output("y", "int")
            .add_spf("count", prepend_zero, "int")
            .connect(Source::port("count", 0), Sink::port("count", 0))
            .connect(Source::port("count", 0), Sink::output("y"));
        let run = fixpoint_solve(&net, &BTreeMap::new(), 5, k()).unwrap();
        assert_eq!(run.status, Convergence::BudgetExhausted);
        assert_eq!(run.output("y"), Some(&[0, 1, 2, 3, 4][..]));
        for pair in run.history.windows(2) {
            let (a, b) = (&pair[0]["count:0"], &pair[1]["count:0"]);
            assert!(b.starts_with(a));
        }
    }

    #[test]
    fn wiring_errors_are_reported() {
        let mut net: Network<i32> = Network::new();
        net.add_input("x", "int").add_spf("id", Spf::identity(), "int");
        assert_eq!(
            net.validate(),
            Err(NetworkError::Unconnected {
                endpoint: "id:0".into()
            })
        );

        net.connect(Source::input("x"), Sink::port("id", 0))
            .connect(Source::input("x"), Sink::port("id", 0));
        assert!(matches!(net.validate(), Err(NetworkError::MultipleDrivers { .. })));

        let mut typed: Network<i32> = Network::new();
        typed
            .add_input("x", "text")
            .add_spf("id", Spf::identity(), "int")
            .connect(Source::input("x"), Sink::port("id", 0));
        assert!(matches!(typed.validate(), Err(NetworkError::TypeMismatch { .. })));

        let mut ports: Network<i32> = Network::new();
        ports
            .add_input("x", "int")
            .add_spf("id", Spf::identity(), "int")
            .connect(Source::input("x"), Sink::port("id", 1));
        assert!(matches!(ports.validate(), Err(NetworkError::NoSuchPort { .. })));

        let mut missing: Network<i32> = Network::new();
        missing
            .add_input("x", "int")
            .add_spf("id", Spf::identity(), "int")
            .connect(Source::input("x"), Sink::port("id", 0));
        assert_eq!(
            fixpoint_solve(&missing, &BTreeMap::new(), 3, k()).unwrap_err(),
            NetworkError::MissingInput("x".into())
        );
    }

    #[test]
    fn unbounded_component_is_rejected() {
        let forever = Spf::from_fn(|_: &Stream<i32>| Stream::from(vec![1]).cycle().unwrap());
        let mut net = Network::new();
        net.add_output("y", "int")
            .add_spf("f", forever, "int")
            .connect(Source::port("f", 0), Sink::port("f", 0))
            .connect(Source::port("f", 0), Sink::output("y"));
        assert!(matches!(
            fixpoint_solve(&net, &BTreeMap::new(), 3, k()),
            Err(NetworkError::Unbounded { round: 1, .. })
        ));
    }
}
