use std::fmt::Write as _;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bratteli::BratteliDiagram;
use crate::error::{Error, Result};
use crate::words::{Alphabet, Substitution, Word};

/// A Bratteli diagram with a linear order on the incoming edges of every
/// vertex.
///
/// `maps[n]` is the level map from level `n` to level `n + 1` as a
/// rectangular substitution: its domain is the vertex set of level `n + 1`
/// and the image of a vertex lists the sources of its incoming edges in
/// increasing order. A stationary diagram has the same square substitution
/// on every level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedDiagram {
    base: BratteliDiagram,
    maps: Vec<Substitution>,
    generator: Option<Substitution>,
}

fn incidence(map: &Substitution) -> crate::ExactMatrix {
    map.abelianize().transpose()
}

impl OrderedDiagram {
    /// The stationary ordered diagram of `s`: the order word of vertex `l`
    /// is `s(l)` on every level.
    pub fn from_substitution(s: &Substitution, depth: usize) -> Result<Self> {
        if !s.is_square() {
            return Err(Error::domain("ordered diagram needs a square substitution"));
        }
        Ok(Self {
            base: BratteliDiagram::from_substitution(s, depth)?,
            maps: vec![s.clone(); depth],
            generator: Some(s.clone()),
        })
    }

    /// A diagram from consecutive level maps; `maps[n].codomain()` must be
    /// `maps[n − 1].domain()` in size.
    pub fn from_maps(maps: Vec<Substitution>) -> Result<Self> {
        let first = maps
            .first()
            .ok_or_else(|| Error::domain("at least one level map is needed"))?;
        let transitions = maps.iter().map(incidence).collect();
        let base = BratteliDiagram::from_transitions(transitions, first.codomain().len())?;
        Ok(Self {
            base,
            maps,
            generator: None,
        })
    }

    pub fn base(&self) -> &BratteliDiagram {
        &self.base
    }

    pub fn maps(&self) -> &[Substitution] {
        &self.maps
    }

    pub fn generator(&self) -> Option<&Substitution> {
        self.generator.as_ref()
    }

    pub fn depth(&self) -> usize {
        self.maps.len()
    }

    /// Number of vertices on `level`.
    pub fn width(&self, level: usize) -> usize {
        self.base.labels()[level].len()
    }

    /// Sources of the incoming edges of `vertex` on `level ≥ 1`, in order.
    pub fn order_word(&self, level: usize, vertex: usize) -> &Word {
        self.maps[level - 1].image(vertex)
    }

    /// Name of a vertex: the generator's letter when stationary, else its
    /// index.
    pub fn vertex_name(&self, level: usize, vertex: usize) -> String {
        match (&self.generator, level) {
            (Some(g), _) => g.domain().name(vertex).to_string(),
            (None, 0) => self.maps[0].codomain().name(vertex).to_string(),
            (None, l) => self.maps[l - 1].domain().name(vertex).to_string(),
        }
    }

    /// Telescopes to the given levels. The order on the new edges is the
    /// path order in which the last differing edge decides, so each new
    /// level map is the composition of the spanned maps.
    pub fn telescope(&self, cuts: &[usize]) -> Result<Self> {
        let base = self.base.telescope(cuts)?;
        let mut maps = Vec::with_capacity(cuts.len().saturating_sub(1));
        for w in cuts.windows(2) {
            let mut composite = self.maps[w[0]].clone();
            for upper in &self.maps[w[0] + 1..w[1]] {
                let upper = upper.with_alphabets(upper.domain().clone(), composite.domain().clone())?;
                composite = Substitution::compose(&composite, &upper)?;
            }
            maps.push(composite);
        }
        let stride = cuts.get(1).map(|c| c - cuts[0]);
        let constant = cuts.windows(2).all(|w| Some(w[1] - w[0]) == stride);
        let generator = match (&self.generator, stride) {
            (Some(g), Some(k)) if cuts[0] == 0 && constant => Some(g.power(k as u32)?),
            _ => None,
        };
        Ok(Self {
            base,
            maps,
            generator,
        })
    }

    /// Telescopes to levels `0, k, 2k, …`; for a stationary diagram this is
    /// the diagram of `σ^k`.
    pub fn telescope_stride(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::domain("stride must be positive"));
        }
        let cuts: Vec<usize> = (0..=self.depth()).step_by(k).collect();
        self.telescope(&cuts)
    }

    /// Graphviz rendering with edge ranks. With `color_extremes`, maximal
    /// edges are red and minimal edges green.
    pub fn to_dot(&self, color_extremes: bool) -> String {
        let mut out = String::from("digraph ordered_bratteli {\n  rankdir=TB;\n  node [shape=circle];\n");
        for (n, labels) in self.base.labels().iter().enumerate() {
            let _ = writeln!(out, "  subgraph level{n} {{\n    rank=same;");
            for (v, d) in labels.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "    v{n}_{v} [label=\"{}\\nd={d}\"];",
                    self.vertex_name(n, v)
                );
            }
            out.push_str("  }\n");
        }
        for (n, map) in self.maps.iter().enumerate() {
            for (v, word) in map.images().iter().enumerate() {
                let last = word.len() - 1;
                for (rank, &src) in word.iter().enumerate() {
                    let color = match (color_extremes, rank == 0, rank == last) {
                        (false, _, _) => "",
                        (true, true, true) => ", color=\"red:green\"",
                        (true, false, true) => ", color=red",
                        (true, true, false) => ", color=green",
                        (true, false, false) => "",
                    };
                    let _ = writeln!(
                        out,
                        "  v{n}_{src} -> v{}_{v} [label=\"{rank}\"{color}];",
                        n + 1
                    );
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Serialize)]
struct ReprOut<'a> {
    #[serde(flatten)]
    base: &'a BratteliDiagram,
    orders: Vec<&'a [Word]>,
}

#[derive(Deserialize)]
struct ReprIn {
    #[serde(flatten)]
    base: BratteliDiagram,
    orders: Vec<Vec<Word>>,
}

/// Diagram JSON plus `"orders"`: per level, per vertex, the source indices
/// in order.
impl Serialize for OrderedDiagram {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ReprOut {
            base: &self.base,
            orders: self.maps.iter().map(Substitution::images).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for OrderedDiagram {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = ReprIn::deserialize(d)?;
        if repr.orders.len() != repr.base.depth() {
            return Err(D::Error::custom("one order list per transition is required"));
        }
        let mut maps = Vec::with_capacity(repr.orders.len());
        for (n, words) in repr.orders.into_iter().enumerate() {
            let t = &repr.base.transitions()[n];
            let map = Substitution::new(
                Alphabet::standard(t.cols()),
                Alphabet::standard(t.rows()),
                words,
            )
            .map_err(D::Error::custom)?;
            if &incidence(&map) != t {
                return Err(D::Error::custom(format!(
                    "orders on level {} do not match the transition counts",
                    n + 1
                )));
            }
            maps.push(map);
        }
        let generator = if repr.base.is_stationary() {
            maps.first().cloned()
        } else {
            None
        };
        if let Some(g) = &generator {
            if maps.iter().any(|m| m != g) {
                return Err(D::Error::custom("stationary diagram with differing orders"));
            }
        }
        Ok(Self {
            base: repr.base,
            maps,
            generator,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sub(letters: &str, images: &[&str]) -> Substitution {
        Substitution::from_images(letters, images).unwrap()
    }

    #[test]
    fn order_words_are_images() {
        let s = sub("ab", &["ab", "ba"]);
        let d = OrderedDiagram::from_substitution(&s, 3).unwrap();
        for level in 1..=3 {
            assert_eq!(d.order_word(level, 0), &vec![0, 1]);
            assert_eq!(d.order_word(level, 1), &vec![1, 0]);
        }
        let one = OrderedDiagram::from_substitution(&sub("a", &["aa"]), 2).unwrap();
        assert_eq!(one.order_word(1, 0), &vec![0, 0]);
    }

    #[test]
    fn stride_telescope_is_power() {
        let fib = sub("ab", &["ab", "a"]);
        let d = OrderedDiagram::from_substitution(&fib, 6).unwrap();
        let t = d.telescope_stride(2).unwrap();
        let f2 = fib.power(2).unwrap();
        assert_eq!(t, OrderedDiagram::from_substitution(&f2, 3).unwrap());
        assert_eq!(t.order_word(1, 0), &vec![0, 1, 0]);
        assert_eq!(d.telescope_stride(1).unwrap(), d);
    }

    #[test]
    fn cut_telescope_composes() {
        let s = sub("ab", &["aaab", "aaab"]);
        let d = OrderedDiagram::from_substitution(&s, 2).unwrap();
        let t = d.telescope(&[0, 2]).unwrap();
        assert_eq!(t.maps()[0].images(), s.power(2).unwrap().images());
        let fib = sub("ab", &["ab", "a"]);
        let d = OrderedDiagram::from_substitution(&fib, 6).unwrap();
        let t = d.telescope(&[0, 1, 3, 6]).unwrap();
        assert_eq!(t.maps()[2].images(), fib.power(3).unwrap().images());
        t.base().validate().unwrap();
    }

    #[test]
    fn json_round_trip() {
        let fib = sub("ab", &["ab", "a"]);
        let d = OrderedDiagram::from_substitution(&fib, 2).unwrap();
        let json = serde_json::to_string(&d).unwrap();
        assert!(json.contains(r#""orders":[[[0,1],[0]],[[0,1],[0]]]"#), "{json}");
        let back: OrderedDiagram = serde_json::from_str(&json).unwrap();
        assert_eq!(back.maps()[0].images(), fib.images());
        let bad = json.replace(r#""orders":[[[0,1],[0]]"#, r#""orders":[[[0,0],[0]]"#);
        assert!(serde_json::from_str::<OrderedDiagram>(&bad).is_err());
    }

    #[test]
    fn dot_colors() {
        let fib = sub("ab", &["ab", "a"]);
        let d = OrderedDiagram::from_substitution(&fib, 1).unwrap();
        let dot = d.to_dot(true);
        assert!(dot.contains("v0_0 -> v1_0 [label=\"0\", color=green]"));
        assert!(dot.contains("v0_1 -> v1_0 [label=\"1\", color=red]"));
        assert!(dot.contains("v0_0 -> v1_1 [label=\"0\", color=\"red:green\"]"));
        assert!(!d.to_dot(false).contains("color"));
    }
}
