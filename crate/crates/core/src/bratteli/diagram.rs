use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::{deserialize_big_vec, serialize_big_vec, ExactMatrix};
use crate::words::Substitution;

/// A Bratteli diagram materialised to a finite depth.
///
/// `transitions[n]` is the incidence matrix from level `n` to level `n + 1`:
/// entry `(i, j)` counts edges from vertex `i` to vertex `j`. Labels follow
/// `d_{n+1}(j) = Σᵢ transitions[n](i, j) · d_n(i)` from unit labels at level
/// 0. A substitution with letter-count matrix `M` has incidence `Mᵀ`, so
/// its labels are the lengths of the iterated images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BratteliDiagram {
    generator: Option<ExactMatrix>,
    labels: Vec<Vec<BigInt>>,
    transitions: Vec<ExactMatrix>,
}

fn next_labels(labels: &[BigInt], t: &ExactMatrix) -> Vec<BigInt> {
    (0..t.cols())
        .map(|j| (0..t.rows()).map(|i| t.get(i, j) * &labels[i]).sum())
        .collect()
}

impl BratteliDiagram {
    /// The stationary diagram with incidence `m` on every level.
    pub fn stationary(m: &ExactMatrix, depth: usize) -> Result<Self> {
        m.validate_substitution_matrix()?;
        let mut d = Self::from_transitions(vec![m.clone(); depth], m.rows())?;
        d.generator = Some(m.clone());
        Ok(d)
    }

    /// The stationary diagram of a square substitution.
    pub fn from_substitution(s: &Substitution, depth: usize) -> Result<Self> {
        if !s.is_square() {
            return Err(Error::domain("diagram of a substitution needs a square substitution"));
        }
        Self::stationary(&s.abelianize().transpose(), depth)
    }

    /// A diagram with the given transitions and unit labels on `base`
    /// vertices at level 0.
    pub fn from_transitions(transitions: Vec<ExactMatrix>, base: usize) -> Result<Self> {
        let mut labels = vec![vec![BigInt::one(); base]];
        for (n, t) in transitions.iter().enumerate() {
            if t.rows() != labels[n].len() {
                return Err(Error::validation(format!(
                    "transition {n} has {} rows but level {n} has {} vertices",
                    t.rows(),
                    labels[n].len()
                )));
            }
            t.validate_transition()?;
            let next = next_labels(&labels[n], t);
            labels.push(next);
        }
        Ok(Self {
            generator: None,
            labels,
            transitions,
        })
    }

    pub fn depth(&self) -> usize {
        self.transitions.len()
    }

    pub fn generator(&self) -> Option<&ExactMatrix> {
        self.generator.as_ref()
    }

    pub fn is_stationary(&self) -> bool {
        self.generator.is_some()
    }

    pub fn labels(&self) -> &[Vec<BigInt>] {
        &self.labels
    }

    pub fn transitions(&self) -> &[ExactMatrix] {
        &self.transitions
    }

    /// Checks the label rule and the edge conditions on every level.
    pub fn validate(&self) -> Result<()> {
        if self.labels.len() != self.transitions.len() + 1 {
            return Err(Error::validation("expected one more label vector than transitions"));
        }
        for (n, t) in self.transitions.iter().enumerate() {
            if t.rows() != self.labels[n].len() || t.cols() != self.labels[n + 1].len() {
                return Err(Error::validation(format!("transition {n} has the wrong shape")));
            }
            t.validate_transition()?;
            if next_labels(&self.labels[n], t) != self.labels[n + 1] {
                return Err(Error::validation(format!("label rule fails at level {}", n + 1)));
            }
        }
        if let Some(g) = &self.generator {
            if self.transitions.iter().any(|t| t != g) {
                return Err(Error::validation("stationary diagram with differing transitions"));
            }
        }
        Ok(())
    }

    /// Keeps the levels in `cuts` and multiplies the transitions between
    /// them. A constant stride from level 0 keeps the diagram stationary.
    pub fn telescope(&self, cuts: &[usize]) -> Result<Self> {
        if cuts.is_empty() {
            return Err(Error::domain("no cut levels"));
        }
        if cuts.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("cut levels must be strictly increasing"));
        }
        if *cuts.last().expect("nonempty") > self.depth() {
            return Err(Error::domain(format!(
                "cut level {} exceeds depth {}",
                cuts.last().expect("nonempty"),
                self.depth()
            )));
        }
        let mut transitions = Vec::with_capacity(cuts.len() - 1);
        for w in cuts.windows(2) {
            let mut prod = self.transitions[w[0]].clone();
            for t in &self.transitions[w[0] + 1..w[1]] {
                prod = &prod * t;
            }
            transitions.push(prod);
        }
        let labels = cuts.iter().map(|&c| self.labels[c].clone()).collect();
        let stride = cuts.get(1).map(|c| c - cuts[0]);
        let constant = cuts.windows(2).all(|w| Some(w[1] - w[0]) == stride);
        let generator = match (&self.generator, stride) {
            (Some(g), Some(k)) if cuts[0] == 0 && constant => Some(g.pow(k as u32)?),
            _ => None,
        };
        Ok(Self {
            generator,
            labels,
            transitions,
        })
    }

    /// Telescopes to levels `0, k, 2k, …`.
    pub fn telescope_stride(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::domain("stride must be positive"));
        }
        let cuts: Vec<usize> = (0..=self.depth()).step_by(k).collect();
        self.telescope(&cuts)
    }

    /// Graphviz rendering: one rank per level, vertices labelled with their
    /// dimension, one edge per incidence.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph bratteli {\n  rankdir=TB;\n  node [shape=circle];\n");
        for (n, labels) in self.labels.iter().enumerate() {
            let _ = writeln!(out, "  subgraph level{n} {{\n    rank=same;");
            for (v, d) in labels.iter().enumerate() {
                let _ = writeln!(out, "    v{n}_{v} [label=\"d={d}\"];");
            }
            out.push_str("  }\n");
        }
        for (n, t) in self.transitions.iter().enumerate() {
            for i in 0..t.rows() {
                for j in 0..t.cols() {
                    let count = t.get(i, j).to_usize().unwrap_or(usize::MAX);
                    for _ in 0..count.min(64) {
                        let _ = writeln!(out, "  v{n}_{i} -> v{}_{j};", n + 1);
                    }
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Serialize, Deserialize)]
struct DiagramRepr {
    stationary: bool,
    #[serde(default)]
    generator: Option<ExactMatrix>,
    depth: usize,
    labels: Vec<LabelRow>,
    transitions: Vec<ExactMatrix>,
}

struct LabelRow(Vec<BigInt>);

impl Serialize for LabelRow {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_big_vec(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for LabelRow {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        deserialize_big_vec(d).map(LabelRow)
    }
}

impl Serialize for BratteliDiagram {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DiagramRepr {
            stationary: self.is_stationary(),
            generator: self.generator.clone(),
            depth: self.depth(),
            labels: self.labels.iter().cloned().map(LabelRow).collect(),
            transitions: self.transitions.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BratteliDiagram {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = DiagramRepr::deserialize(d)?;
        if repr.stationary != repr.generator.is_some() {
            return Err(D::Error::custom("`stationary` must match the presence of `generator`"));
        }
        if repr.depth != repr.transitions.len() {
            return Err(D::Error::custom("`depth` must equal the number of transitions"));
        }
        let diagram = BratteliDiagram {
            generator: repr.generator,
            labels: repr.labels.into_iter().map(|l| l.0).collect(),
            transitions: repr.transitions,
        };
        diagram.validate().map_err(D::Error::custom)?;
        Ok(diagram)
    }
}
