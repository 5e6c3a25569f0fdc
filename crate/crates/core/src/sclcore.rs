//! The scl pipeline: assemble the linear program attached to a turn graph,
//! solve it exactly, and convert the optimum into a stable commutator
//! length with an integer certificate.
//!
//! Optimization convention: we normalize the degree at turn 1 to one and
//! maximize the total circuit weight. The reported value is then
//! `scl(w) = |w|/4 - value/2`, and after clearing denominators the integer
//! weight vector `u` satisfies `scl(w) = |w|/4 - (sum u_i) / (2 n)` with
//! `n` the common vertex load of `u`. Both identities are re-checked
//! exactly before a result is returned.

use num::{BigInt, BigRational, Integer, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::circuits::{enumerate_embedded_circuits, incidence, Circuit, IncidenceProfile};
use crate::error::{Error, Result};
use crate::ratlp::{simplex_solve, ExactLp, LpSolution};
use crate::turngraph::{build_turn_graph, TurnGraph, TurnIndex};
use crate::word::{in_commutator_subgroup, reduced_word, CyclicWord};

/// Nonnegative rational weights, indexed parallel to a circuit list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector(Vec<BigRational>);

impl WeightVector {
    pub fn new(coords: Vec<BigRational>) -> Result<WeightVector> {
        if coords.iter().any(|x| x.is_negative()) {
            return Err(Error::InvalidWeights("negative coordinate".into()));
        }
        Ok(WeightVector(coords))
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }
}

/// Nonnegative integer weights, indexed parallel to a circuit list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerWeights(Vec<BigInt>);

impl IntegerWeights {
    pub fn new(coords: Vec<BigInt>) -> Result<IntegerWeights> {
        if coords.iter().any(|x| x.is_negative()) {
            return Err(Error::InvalidWeights("negative coordinate".into()));
        }
        Ok(IntegerWeights(coords))
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn total(&self) -> BigInt {
        self.0.iter().sum()
    }

    pub fn to_rationals(&self) -> Vec<BigRational> {
        self.0
            .iter()
            .map(|x| BigRational::from_integer(x.clone()))
            .collect()
    }
}

/// Per-circuit incidence vectors, bundled for linear evaluation.
#[derive(Clone, Debug)]
pub struct IncidenceTable {
    profiles: Vec<IncidenceProfile>,
    num_turns: usize,
    num_edges: usize,
}

impl IncidenceTable {
    pub fn build(graph: &TurnGraph, circuits: &[Circuit]) -> IncidenceTable {
        IncidenceTable {
            profiles: circuits.iter().map(|c| incidence(c, graph)).collect(),
            num_turns: graph.len(),
            num_edges: graph.edges().len(),
        }
    }

    /// The vertex load `F_v(u)` at turn `v`.
    pub fn vertex_load(&self, weights: &[BigRational], v: TurnIndex) -> BigRational {
        assert_eq!(weights.len(), self.profiles.len());
        assert!(v >= 1 && v <= self.num_turns);
        self.profiles
            .iter()
            .zip(weights)
            .filter(|(p, u)| p.vertex_counts[v - 1] != 0 && !u.is_zero())
            .map(|(p, u)| u * BigRational::from_integer(p.vertex_counts[v - 1].into()))
            .sum()
    }

    /// The edge load `F_e(u)` over edge id `e`.
    pub fn edge_load(&self, weights: &[BigRational], e: usize) -> BigRational {
        assert_eq!(weights.len(), self.profiles.len());
        assert!(e < self.num_edges);
        self.profiles
            .iter()
            .zip(weights)
            .filter(|(p, u)| p.edge_counts[e] != 0 && !u.is_zero())
            .map(|(p, u)| u * BigRational::from_integer(p.edge_counts[e].into()))
            .sum()
    }
}

/// Build the exact LP for a turn graph and its circuit list:
/// one equality `F_e(u) = F_ebar(u)` per dual pair (identically-zero rows
/// and self-dual pairs are dropped), the normalization `F_{v_1}(u) = 1` at
/// turn 1, and the objective `maximize sum u_i`.
pub fn assemble_lp(graph: &TurnGraph, circuits: &[Circuit]) -> Result<ExactLp> {
    if circuits.is_empty() {
        return Err(Error::InvalidArgument(
            "cannot assemble an LP without circuits".into(),
        ));
    }
    let k = circuits.len();
    let table = IncidenceTable::build(graph, circuits);

    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    let mut rhs: Vec<BigRational> = Vec::new();
    for e in 0..graph.edges().len() {
        let d = graph.dual_id(e);
        if d <= e {
            continue; // the pair was already handled, or is self-dual
        }
        let row: Vec<BigRational> = table
            .profiles
            .iter()
            .map(|p| {
                BigRational::from_integer(
                    (p.edge_counts[e] as i64 - p.edge_counts[d] as i64).into(),
                )
            })
            .collect();
        if row.iter().any(|x| !x.is_zero()) {
            rows.push(row);
            rhs.push(BigRational::zero());
        }
    }
    let normalization: Vec<BigRational> = table
        .profiles
        .iter()
        .map(|p| BigRational::from_integer(p.vertex_counts[0].into()))
        .collect();
    rows.push(normalization);
    rhs.push(BigRational::one());

    ExactLp::new(vec![BigRational::one(); k], rows, rhs)
}

/// Multiply by the least common multiple of the denominators: the minimal
/// positive integer multiple of a rational weight vector.
pub fn scale_to_integer(weights: &WeightVector) -> Result<IntegerWeights> {
    if weights.is_zero() {
        return Err(Error::InvalidWeights(
            "the zero vector has no integer scaling".into(),
        ));
    }
    let mut scale = BigInt::one();
    for w in weights.coords() {
        scale = scale.lcm(w.denom());
    }
    let coords = weights
        .coords()
        .iter()
        .map(|w| (w * BigRational::from_integer(scale.clone())).to_integer())
        .collect();
    IntegerWeights::new(coords)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SclValue {
    Finite(BigRational),
    Infinite,
}

impl SclValue {
    pub fn as_finite(&self) -> Option<&BigRational> {
        match self {
            SclValue::Finite(v) => Some(v),
            SclValue::Infinite => None,
        }
    }
}

impl std::fmt::Display for SclValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SclValue::Finite(v) => write!(f, "{}", v),
            SclValue::Infinite => write!(f, "infinity"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SclResult {
    pub input: String,
    pub word: CyclicWord,
    pub removed: usize,
    pub scl: SclValue,
    /// Degree of the certificate surface; 0 when scl is infinite.
    pub n: u64,
    /// Full integer weight vector, parallel to `circuits`.
    pub integer_weights: IntegerWeights,
    /// The complete circuit list the LP was built over.
    pub circuits: Vec<Circuit>,
    pub lp_variables: usize,
    pub lp_constraints: usize,
}

impl SclResult {
    /// The circuits carrying positive weight, with their weights.
    pub fn circuits_used(&self) -> Vec<(&Circuit, &BigInt)> {
        self.circuits
            .iter()
            .zip(self.integer_weights.coords())
            .filter(|(_, u)| !u.is_zero())
            .collect()
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.scl, SclValue::Finite(_))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SclOptions {
    pub max_circuits: usize,
}

impl Default for SclOptions {
    fn default() -> Self {
        SclOptions {
            max_circuits: crate::circuits::DEFAULT_CIRCUIT_CAP,
        }
    }
}

/// `|w|/4` as a rational.
pub fn quarter_length(word: &CyclicWord) -> BigRational {
    BigRational::new(BigInt::from(word.len()), BigInt::from(4))
}

/// Full pipeline: parse, reduce, test the commutator subgroup, build the
/// turn graph, enumerate circuits, solve the LP, and certify the result.
pub fn compute_scl(text: &str, options: &SclOptions) -> Result<SclResult> {
    let (word, removed) = reduced_word(text)?;

    if !in_commutator_subgroup(&word) {
        return Ok(SclResult {
            input: text.to_string(),
            word,
            removed,
            scl: SclValue::Infinite,
            n: 0,
            integer_weights: IntegerWeights::new(Vec::new())?,
            circuits: Vec::new(),
            lp_variables: 0,
            lp_constraints: 0,
        });
    }

    let graph = build_turn_graph(&word);
    let circuits = enumerate_embedded_circuits(&graph, options.max_circuits)?;
    if circuits.is_empty() {
        return Err(Error::Internal(
            "no circuits in the turn graph of a commutator-subgroup word".into(),
        ));
    }
    let lp = assemble_lp(&graph, &circuits)?;
    let (value, point) = match simplex_solve(&lp) {
        LpSolution::Optimal { value, point, .. } => (value, point),
        LpSolution::Infeasible => {
            return Err(Error::Internal(
                "LP infeasible for a commutator-subgroup word".into(),
            ))
        }
        LpSolution::Unbounded => {
            return Err(Error::Internal(
                "LP unbounded: the normalized polyhedron must be bounded".into(),
            ))
        }
    };

    let scl = quarter_length(&word) - &value / BigRational::from_integer(2.into());
    let integer_weights = scale_to_integer(&WeightVector::new(point)?)?;

    let table = IncidenceTable::build(&graph, &circuits);
    let rational_weights = integer_weights.to_rationals();
    let degree = table.vertex_load(&rational_weights, 1);
    for v in 2..=graph.len() {
        if table.vertex_load(&rational_weights, v) != degree {
            return Err(Error::Internal(format!(
                "vertex load differs between turn 1 and turn {}",
                v
            )));
        }
    }
    if !degree.is_integer() || !degree.is_positive() {
        return Err(Error::Internal(format!(
            "certificate degree {} is not a positive integer",
            degree
        )));
    }
    let n: u64 = degree
        .to_integer()
        .try_into()
        .map_err(|_| Error::SurfaceTooLarge("certificate degree exceeds u64".into()))?;

    let accounted = quarter_length(&word)
        - BigRational::new(integer_weights.total(), BigInt::from(2) * BigInt::from(n));
    if accounted != scl {
        return Err(Error::Internal(format!(
            "certificate identity failed: {} != {}",
            accounted, scl
        )));
    }
    if scl.is_negative() || scl > quarter_length(&word) {
        return Err(Error::Internal(format!(
            "scl {} outside [0, |w|/4]",
            scl
        )));
    }

    Ok(SclResult {
        input: text.to_string(),
        word,
        removed,
        scl: SclValue::Finite(scl),
        n,
        integer_weights,
        circuits,
        lp_variables: lp.num_vars(),
        lp_constraints: lp.num_constraints(),
    })
}

// --- stable JSON schema ------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ResultJson {
    pub schema: u32,
    pub input: String,
    pub reduced: String,
    pub length: usize,
    pub scl: SclJson,
    pub n: u64,
    pub weights: Vec<WeightJson>,
    pub lp: LpJson,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum SclJson {
    Finite { num: String, den: String },
    Infinite(String),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct WeightJson {
    pub circuit: Vec<TurnIndex>,
    pub weight: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LpJson {
    pub variables: usize,
    pub constraints: usize,
}

impl SclResult {
    pub fn to_json_struct(&self) -> Result<ResultJson> {
        let scl = match &self.scl {
            SclValue::Finite(v) => SclJson::Finite {
                num: v.numer().to_string(),
                den: v.denom().to_string(),
            },
            SclValue::Infinite => SclJson::Infinite("infinite".to_string()),
        };
        let mut weights = Vec::new();
        for (circuit, weight) in self.circuits_used() {
            let weight: u64 = weight
                .try_into()
                .map_err(|_| Error::SurfaceTooLarge("circuit weight exceeds u64".into()))?;
            weights.push(WeightJson {
                circuit: circuit.turns().to_vec(),
                weight,
            });
        }
        Ok(ResultJson {
            schema: 1,
            input: self.input.clone(),
            reduced: self.word.to_string(),
            length: self.word.len(),
            scl,
            n: self.n,
            weights,
            lp: LpJson {
                variables: self.lp_variables,
                constraints: self.lp_constraints,
            },
        })
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string(&self.to_json_struct()?)
            .map_err(|e| Error::Internal(format!("result serialization failed: {}", e)))
    }
}

impl std::str::FromStr for ResultJson {
    type Err = Error;

    fn from_str(text: &str) -> Result<ResultJson> {
        serde_json::from_str(text)
            .map_err(|e| Error::InvalidArgument(format!("bad result JSON: {}", e)))
    }
}

impl ResultJson {
    /// Recompute `|w|/4 - (sum weights) / (2n)` from the serialized fields.
    pub fn recomputed_scl(&self) -> Option<BigRational> {
        if self.n == 0 {
            return None;
        }
        let total: BigInt = self.weights.iter().map(|w| BigInt::from(w.weight)).sum();
        Some(
            BigRational::new(BigInt::from(self.length), BigInt::from(4))
                - BigRational::new(total, BigInt::from(2) * BigInt::from(self.n)),
        )
    }
}
