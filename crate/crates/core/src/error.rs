use thiserror::Error;

/// Failures while reading or validating a graph or a broadcast.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("line {line}: malformed input: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("missing \"p bcast <n> <m>\" header")]
    MissingHeader,
    #[error("line {line}: duplicate header")]
    DuplicateHeader { line: usize },
    #[error("header announces {expected} edges but {found} were given")]
    EdgeCountMismatch { expected: usize, found: usize },
    #[error("line {line}: vertex {vertex} outside 1..={n}")]
    VertexOutOfRange { line: usize, vertex: u64, n: usize },
    #[error("line {line}: self-loop at vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("line {line}: duplicate edge {u}-{v}")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("line {line}: edge weight {weight} is below 1")]
    WeightBelowOne { line: usize, weight: u64 },
    #[error("graph has no vertices")]
    Empty,
    #[error("graph is disconnected: vertex {unreachable} cannot be reached from vertex 1")]
    Disconnected { unreachable: usize },
    #[error("broadcast covers {found} vertices but the graph has {expected}")]
    BroadcastSize { expected: usize, found: usize },
    #[error("broadcast references vertex {vertex} which is not in the graph")]
    UnknownVertex { vertex: u64 },
    #[error("vertex {vertex} is not broadcasting")]
    NotBroadcasting { vertex: usize },
    #[error("witness declares value {declared} but its broadcasters sum to {actual}")]
    WitnessTotal { declared: u64, actual: u64 },
}

/// Failures while reading, validating or converting tree decompositions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TdError {
    #[error("line {line}: malformed tree decomposition: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("missing \"s td <bags> <width+1> <n>\" header")]
    MissingHeader,
    #[error("decomposition is for {found} vertices but the graph has {expected}")]
    VertexCount { expected: usize, found: usize },
    #[error("decomposition tree is not a tree: {reason}")]
    NotATree { reason: String },
    #[error("vertex {vertex} appears in no bag")]
    VertexUncovered { vertex: usize },
    #[error("edge {u}-{v} is contained in no bag")]
    EdgeUncovered { u: usize, v: usize },
    #[error("bags containing vertex {vertex} do not induce a connected subtree")]
    Disconnected { vertex: usize },
    #[error("nice decomposition node {node}: {reason}")]
    NotNice { node: usize, reason: String },
}

/// Failures of the exact solvers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("p = {p} is outside 0..={diam}")]
    POutOfRange { p: u64, diam: u64 },
    #[error("k must be at least 1")]
    KOutOfRange,
    #[error("epsilon {num}/{den} is outside the open interval (0, 1/2)")]
    EpsilonOutOfRange { num: u64, den: u64 },
    #[error(transparent)]
    Decomposition(#[from] TdError),
    #[error("{node} bag mismatch: {reason}")]
    BagMismatch { node: &'static str, reason: String },
    #[error("vertex {vertex} broadcasts but is not a forgotten vertex of the node")]
    SupportOutsideForgotten { vertex: usize },
    #[error("graph with {n} vertices exceeds the dense distance limit required by the DP")]
    NoDenseMetric { n: usize },
    #[error("internal error: {0}")]
    Internal(String),
}

/// Failures of the truncation transforms.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("p must be at least 1")]
    PTooSmall,
    #[error("input broadcast is not {0}")]
    InvalidInput(&'static str),
    #[error("path-based truncation needs unit edge weights")]
    WeightedGraph,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("internal assertion failed: {0}")]
    Assertion(String),
}

/// Failures of the brute-force oracle.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance has {n} vertices, above the oracle cap of {cap}")]
    AboveCap { n: usize, cap: usize },
    #[error("p = {p} is outside 0..={diam}")]
    POutOfRange { p: u64, diam: u64 },
    #[error("graph enumeration supports 1..=6 vertices, got {0}")]
    EnumerationRange(usize),
}

/// Failures of the instance generators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReductionError {
    #[error("line {line}: malformed clique instance: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("class size n = {0} must be even")]
    OddClassSize(usize),
    #[error("need at least two color classes, got {0}")]
    TooFewClasses(usize),
    #[error("edge inside color class {class}")]
    ClassNotIndependent { class: usize },
    #[error("planted vertices are not a multicolored clique: v_{i}^{a} and v_{j}^{b} are not adjacent")]
    NotAClique { i: usize, a: usize, j: usize, b: usize },
    #[error("edge {u}-{v} has odd weight {weight}")]
    OddWeight { u: usize, v: usize, weight: u64 },
    #[error("edge {u}-{v} has weight {weight} above the diameter {diam}")]
    WeightAboveDiameter { u: usize, v: usize, weight: u64, diam: u64 },
    #[error("target {target} must exceed the diameter {diam}")]
    TargetTooSmall { target: u64, diam: u64 },
    #[error("scale factor must lie in (0, 1], got {0}")]
    BadScale(f64),
    #[error(transparent)]
    Graph(#[from] GraphError),
}
