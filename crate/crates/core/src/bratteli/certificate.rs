//! Interleaving certificates for telescope equivalence.
//!
//! A [`ChainLink`] between stationary diagrams `L` and `R` is a chain
//! `C₁, …, C_{2t}` of level maps. The chain diagram has `L`'s vertices on
//! even levels and `R`'s vertices on odd levels, and
//!
//! * `C_{2i−1}·C_{2i} = L^{pᵢ}`: telescoping to even levels gives `L`,
//! * `C_{2i}·C_{2i+1} = R^{qᵢ}`: telescoping to odd levels gives `R`,
//!
//! where the chain continues forever by repeating its last two elements, so
//! `C_{2t}·C_{2t−1} = R^{q_t}` is checked as well. Level 0 carries unit
//! labels; level 1 must carry the labels of `R` at some level `k`.
//!
//! A [`Certificate`] is a link, optionally followed by further links through
//! intermediate generators (`via`), composing equivalences transitively.

use std::fmt::Debug;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::words::Substitution;

/// A level map usable in a chain: an incidence matrix or an ordered
/// (rectangular) substitution.
pub trait ChainElement: Clone + Debug {
    /// `(vertices on the source level, vertices on the target level)`.
    fn level_sizes(&self) -> (usize, usize);
    /// The map spanning two consecutive steps, `self` first.
    fn then(&self, next: &Self) -> Result<Self>;
    fn power_of(generator: &Self, k: u32) -> Result<Self>;
    /// Equality as level maps, ignoring letter names.
    fn same_map(&self, other: &Self) -> bool;
    /// Labels on the target level when the source level has unit labels.
    fn target_labels(&self) -> Vec<BigInt>;
    /// Labels of the stationary diagram of `generator` at level `k`.
    fn generator_labels(generator: &Self, k: u32) -> Result<Vec<BigInt>>;
    /// Every target vertex has an incoming edge and every source vertex an
    /// outgoing one.
    fn check_transition(&self) -> Result<()>;
}

impl ChainElement for ExactMatrix {
    fn level_sizes(&self) -> (usize, usize) {
        (self.rows(), self.cols())
    }

    fn then(&self, next: &Self) -> Result<Self> {
        self.multiply(next)
            .map_err(|e| Error::validation(e.to_string()))
    }

    fn power_of(generator: &Self, k: u32) -> Result<Self> {
        generator.pow(k)
    }

    fn same_map(&self, other: &Self) -> bool {
        self == other
    }

    fn target_labels(&self) -> Vec<BigInt> {
        self.col_sums()
    }

    fn generator_labels(generator: &Self, k: u32) -> Result<Vec<BigInt>> {
        Ok(generator.pow(k)?.col_sums())
    }

    fn check_transition(&self) -> Result<()> {
        self.validate_transition()
    }
}

impl ChainElement for Substitution {
    /// A substitution maps letters of level `i` (its domain) to words over
    /// level `i − 1` (its codomain).
    fn level_sizes(&self) -> (usize, usize) {
        (self.codomain().len(), self.domain().len())
    }

    fn then(&self, next: &Self) -> Result<Self> {
        if next.codomain().len() != self.domain().len() {
            return Err(Error::validation("chain alphabets do not line up"));
        }
        let next = next
            .with_alphabets(next.domain().clone(), self.domain().clone())
            .map_err(|e| Error::validation(e.to_string()))?;
        Substitution::compose(self, &next).map_err(|e| Error::validation(e.to_string()))
    }

    fn power_of(generator: &Self, k: u32) -> Result<Self> {
        generator.power(k)
    }

    fn same_map(&self, other: &Self) -> bool {
        self.domain().len() == other.domain().len()
            && self.codomain().len() == other.codomain().len()
            && self.images() == other.images()
    }

    fn target_labels(&self) -> Vec<BigInt> {
        self.images().iter().map(|w| BigInt::from(w.len())).collect()
    }

    fn generator_labels(generator: &Self, k: u32) -> Result<Vec<BigInt>> {
        Ok(generator.abelianize().pow(k)?.row_sums())
    }

    fn check_transition(&self) -> Result<()> {
        self.abelianize()
            .validate_transition()
            .map_err(|_| Error::validation(format!("some letter never occurs in {self}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainLink<T> {
    pub chain: Vec<T>,
    pub odd_powers: Vec<u32>,
    pub even_powers: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Via<T> {
    pub generator: T,
    #[serde(flatten)]
    pub link: ChainLink<T>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate<T> {
    #[serde(flatten)]
    pub link: ChainLink<T>,
    #[serde(default = "Vec::new", skip_serializing_if = "Vec::is_empty")]
    pub via: Vec<Via<T>>,
}

impl<T> Certificate<T> {
    pub fn direct(link: ChainLink<T>) -> Self {
        Self { link, via: Vec::new() }
    }

    /// Every level map in the certificate, across all links.
    pub fn maps(&self) -> impl Iterator<Item = &T> {
        self.link
            .chain
            .iter()
            .chain(self.via.iter().flat_map(|v| v.generator_and_chain()))
    }
}

impl<T> Via<T> {
    fn generator_and_chain(&self) -> impl Iterator<Item = &T> {
        std::iter::once(&self.generator).chain(self.link.chain.iter())
    }
}

impl<T: ChainElement> ChainLink<T> {
    /// Shapes, powers and transitions; any failure here is a malformed
    /// certificate rather than a false identity.
    fn check_shape(&self, left: &T, right: &T) -> Result<()> {
        let len = self.chain.len();
        if len < 2 || len % 2 == 1 {
            return Err(Error::validation(format!(
                "chain length must be even and at least 2, got {len}"
            )));
        }
        if self.odd_powers.len() != len / 2 || self.even_powers.len() != len / 2 {
            return Err(Error::validation(format!(
                "expected {} odd and even powers, got {} and {}",
                len / 2,
                self.odd_powers.len(),
                self.even_powers.len()
            )));
        }
        if self.odd_powers.iter().chain(&self.even_powers).any(|&p| p == 0) {
            return Err(Error::validation("powers must be positive"));
        }
        let (l, _) = left.level_sizes();
        let (r, _) = right.level_sizes();
        for (i, c) in self.chain.iter().enumerate() {
            let expected = if i % 2 == 0 { (l, r) } else { (r, l) };
            if c.level_sizes() != expected {
                return Err(Error::validation(format!(
                    "chain element {} has level sizes {:?}, expected {:?}",
                    i + 1,
                    c.level_sizes(),
                    expected
                )));
            }
            c.check_transition()?;
        }
        Ok(())
    }

    fn labels_match(&self, right: &T) -> Result<bool> {
        let target = self.chain[0].target_labels();
        let target_sum: BigInt = target.iter().sum();
        let mut prev: Option<Vec<BigInt>> = None;
        for k in 0..=4096u32 {
            let labels = T::generator_labels(right, k)?;
            if labels == target {
                return Ok(true);
            }
            let sum: BigInt = labels.iter().sum();
            if sum > target_sum || prev.as_ref() == Some(&labels) {
                return Ok(false);
            }
            prev = Some(labels);
        }
        Ok(false)
    }

    /// Checks the link between the stationary diagrams of `left` and
    /// `right`. With `periodic`, the wrap-around identity that makes the
    /// repeated tail valid is checked too; without it only the given prefix
    /// is certified.
    pub fn verify(&self, left: &T, right: &T, periodic: bool) -> Result<bool> {
        self.check_shape(left, right)?;
        let half = self.chain.len() / 2;
        for i in 0..half {
            let prod = self.chain[2 * i].then(&self.chain[2 * i + 1])?;
            if !prod.same_map(&T::power_of(left, self.odd_powers[i])?) {
                return Ok(false);
            }
        }
        for i in 0..half {
            let next = if 2 * i + 2 < self.chain.len() {
                &self.chain[2 * i + 2]
            } else if periodic {
                &self.chain[2 * i]
            } else {
                break;
            };
            let prod = self.chain[2 * i + 1].then(next)?;
            if !prod.same_map(&T::power_of(right, self.even_powers[i])?) {
                return Ok(false);
            }
        }
        self.labels_match(right)
    }
}

impl<T: ChainElement> Certificate<T> {
    /// Verifies every link of the certificate, left to right.
    pub fn verify(&self, left: &T, right: &T) -> Result<bool> {
        let mut gens: Vec<&T> = vec![left];
        gens.extend(self.via.iter().map(|v| &v.generator));
        gens.push(right);
        let links = std::iter::once(&self.link).chain(self.via.iter().map(|v| &v.link));
        for (i, link) in links.enumerate() {
            let (a, b) = (gens[i], gens[i + 1]);
            let (sa, ta) = a.level_sizes();
            let (sb, tb) = b.level_sizes();
            if sa != ta || sb != tb {
                return Err(Error::validation("generators must be square"));
            }
            if !link.verify(a, b, true)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn chain_length(&self) -> usize {
        self.link.chain.len() + self.via.iter().map(|v| v.link.chain.len()).sum::<usize>()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat;

    #[test]
    fn identity_link_verifies() {
        let f = mat![[1, 1], [1, 0]];
        let link = ChainLink {
            chain: vec![ExactMatrix::identity(2), f.clone()],
            odd_powers: vec![1],
            even_powers: vec![1],
        };
        assert!(link.verify(&f, &f, true).unwrap());
    }

    #[test]
    fn mismatched_products_are_false() {
        let c = mat![[1, 2], [0, 1]];
        let link = ChainLink {
            chain: vec![c.clone(), c.transpose()],
            odd_powers: vec![1],
            even_powers: vec![1],
        };
        let f = mat![[1, 1], [1, 0]];
        assert!(!link.verify(&f, &f, true).unwrap());
    }

    #[test]
    fn malformed_shapes_are_errors() {
        let f = mat![[1, 1], [1, 0]];
        let odd = ChainLink {
            chain: vec![f.clone()],
            odd_powers: vec![1],
            even_powers: vec![],
        };
        assert!(matches!(odd.verify(&f, &f, true), Err(Error::Validation(_))));
        let wrong = ChainLink {
            chain: vec![mat![[1, 1, 1], [1, 0, 1]], f.clone()],
            odd_powers: vec![1],
            even_powers: vec![1],
        };
        assert!(matches!(wrong.verify(&f, &f, true), Err(Error::Validation(_))));
    }

    #[test]
    fn json_shape() {
        let cert = Certificate::direct(ChainLink {
            chain: vec![mat![[1]], mat![[6]]],
            odd_powers: vec![1],
            even_powers: vec![1],
        });
        let json = serde_json::to_string(&cert).unwrap();
        assert_eq!(json, r#"{"chain":[[[1]],[[6]]],"odd_powers":[1],"even_powers":[1]}"#);
        let back: Certificate<ExactMatrix> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cert);
    }
}
