//! Exact symbolic substitutions, Bratteli diagrams and their invariants.
//!
//! The crate is organised bottom-up:
//!
//! * [`words`]: alphabets, words and (rectangular) substitutions.
//! * [`matrix`]: arbitrary-precision integer matrices, characteristic
//!   polynomials, Perron–Frobenius isolation and rationality.
//! * [`bratteli`]: unordered diagrams, telescoping, state splitting,
//!   supernatural numbers and the equivalence analyzer.
//! * [`ordered`]: ordered diagrams, extreme paths, the Vershik successor
//!   and the ordered equivalence analyzer.
//! * [`fibonacci`]: P/Q factorization and the Fibonacci-power family.
//!
//! ```
//! use subkit::words::Substitution;
//!
//! let fib = Substitution::from_images("ab", &["ab", "a"]).unwrap();
//! assert_eq!(fib.abelianize(), subkit::mat![[1, 1], [1, 0]]);
//! assert_eq!(fib.power(5).unwrap().image(0).len(), 13);
//! ```

pub mod bratteli;
pub mod budget;
pub mod cancel;
pub mod error;
pub mod fibonacci;
pub mod matrix;
pub mod ordered;
pub mod par;
pub mod words;

pub use budget::Preset;
pub use cancel::CancelToken;
pub use error::{Error, Result};
pub use matrix::ExactMatrix;
pub use par::Execution;
pub use words::{Alphabet, Substitution, Word};

/// Outcome of an equivalence analysis. Search exhaustion is `Unknown`,
/// never an error.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict<C> {
    Equivalent { certificate: C },
    Distinguished { invariant: String, detail: String },
    Unknown,
}

impl<C> Verdict<C> {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Verdict::Equivalent { .. })
    }

    pub fn certificate(&self) -> Option<&C> {
        match self {
            Verdict::Equivalent { certificate } => Some(certificate),
            _ => None,
        }
    }

    pub fn invariant(&self) -> Option<&str> {
        match self {
            Verdict::Distinguished { invariant, .. } => Some(invariant),
            _ => None,
        }
    }

    pub(crate) fn distinguished(invariant: &str, detail: impl Into<String>) -> Self {
        Verdict::Distinguished {
            invariant: invariant.to_string(),
            detail: detail.into(),
        }
    }
}
