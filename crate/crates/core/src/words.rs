//! Alphabets, words and symbolic substitutions.
//!
//! Words are index sequences into a canonical alphabet ordering; letter
//! names only matter for parsing and printing. A substitution maps each
//! letter of its *domain* (the new level) to a nonempty word over its
//! *codomain* (the previous level). Square substitutions have equal
//! alphabets.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;

/// A word as a sequence of letter indices. The alphabet is carried by the
/// substitution or diagram the word belongs to.
pub type Word = Vec<usize>;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Alphabet {
    letters: Vec<String>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(letters: impl IntoIterator<Item = S>) -> Result<Self> {
        let letters: Vec<String> = letters.into_iter().map(Into::into).collect();
        if letters.is_empty() {
            return Err(Error::domain("alphabet must be nonempty"));
        }
        let mut seen = BTreeSet::new();
        for l in &letters {
            if l.is_empty() || l.chars().any(|c| c.is_whitespace() || c.is_control()) {
                return Err(Error::domain(format!("invalid letter name {l:?}")));
            }
            if !seen.insert(l.as_str()) {
                return Err(Error::domain(format!("duplicate letter {l:?}")));
            }
        }
        Ok(Self { letters })
    }

    /// One letter per character of `letters`.
    pub fn from_chars(letters: &str) -> Result<Self> {
        Self::new(letters.chars().map(String::from))
    }

    /// `n` letters named `a, b, …, z, x26, x27, …`.
    pub fn standard(n: usize) -> Self {
        let letters = (0..n.max(1))
            .map(|i| {
                if i < 26 {
                    char::from(b'a' + i as u8).to_string()
                } else {
                    format!("x{i}")
                }
            })
            .collect();
        Self { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.letters[i]
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.letters.iter().position(|l| l == name)
    }

    fn single_char(&self) -> bool {
        self.letters.iter().all(|l| l.chars().count() == 1)
    }

    pub fn render(&self, word: &[usize]) -> String {
        let sep = if self.single_char() { "" } else { " " };
        word.iter()
            .map(|&i| self.letters[i].as_str())
            .collect::<Vec<_>>()
            .join(sep)
    }

    /// Reads a word: whitespace-separated names, a single name, or (when
    /// every character is a letter) one letter per character.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text.split_whitespace().nth(1).is_some() {
            return text
                .split_whitespace()
                .map(|t| {
                    self.index_of(t)
                        .ok_or_else(|| Error::domain(format!("unknown letter {t:?}")))
                })
                .collect();
        }
        if let Some(i) = self.index_of(text) {
            return Ok(vec![i]);
        }
        text.chars()
            .map(|c| {
                self.index_of(&c.to_string())
                    .ok_or_else(|| Error::domain(format!("unknown letter {c:?} in {text:?}")))
            })
            .collect()
    }
}

impl<'de> Deserialize<'de> for Alphabet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let letters = Vec::<String>::deserialize(d)?;
        Alphabet::new(letters).map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.letters.join(","))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Substitution {
    domain: Alphabet,
    codomain: Alphabet,
    images: Vec<Word>,
}

impl Substitution {
    pub fn new(domain: Alphabet, codomain: Alphabet, images: Vec<Word>) -> Result<Self> {
        if images.len() != domain.len() {
            return Err(Error::domain(format!(
                "{} images for {} letters",
                images.len(),
                domain.len()
            )));
        }
        for (i, w) in images.iter().enumerate() {
            if w.is_empty() {
                return Err(Error::domain(format!(
                    "image of {} is empty",
                    domain.name(i)
                )));
            }
            if let Some(&bad) = w.iter().find(|&&x| x >= codomain.len()) {
                return Err(Error::domain(format!(
                    "letter index {bad} out of range for image of {}",
                    domain.name(i)
                )));
            }
        }
        Ok(Self {
            domain,
            codomain,
            images,
        })
    }

    pub fn square(alphabet: Alphabet, images: Vec<Word>) -> Result<Self> {
        Self::new(alphabet.clone(), alphabet, images)
    }

    /// Square substitution over single-character letters.
    ///
    /// ```
    /// let s = subkit::Substitution::from_images("ab", &["ab", "a"]).unwrap();
    /// assert_eq!(s.to_string(), "a->ab, b->a");
    /// ```
    pub fn from_images(letters: &str, images: &[&str]) -> Result<Self> {
        let alphabet = Alphabet::from_chars(letters)?;
        let images = images
            .iter()
            .map(|w| alphabet.parse_word(w))
            .collect::<Result<Vec<_>>>()?;
        Self::square(alphabet, images)
    }

    /// Rectangular substitution from `domain` letters to words over
    /// `codomain` letters, both single-character.
    pub fn from_rect_images(domain: &str, codomain: &str, images: &[&str]) -> Result<Self> {
        let domain = Alphabet::from_chars(domain)?;
        let codomain = Alphabet::from_chars(codomain)?;
        let images = images
            .iter()
            .map(|w| codomain.parse_word(w))
            .collect::<Result<Vec<_>>>()?;
        Self::new(domain, codomain, images)
    }

    pub fn identity(alphabet: Alphabet) -> Self {
        let images = (0..alphabet.len()).map(|i| vec![i]).collect();
        Self {
            domain: alphabet.clone(),
            codomain: alphabet,
            images,
        }
    }

    pub fn domain(&self) -> &Alphabet {
        &self.domain
    }

    pub fn codomain(&self) -> &Alphabet {
        &self.codomain
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image(&self, letter: usize) -> &Word {
        &self.images[letter]
    }

    pub fn is_square(&self) -> bool {
        self.domain == self.codomain
    }

    pub fn image_lengths(&self) -> Vec<usize> {
        self.images.iter().map(Vec::len).collect()
    }

    fn require_square(&self, what: &str) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::domain(format!("{what} needs a square substitution")))
        }
    }

    /// Applies the substitution to a word over its domain.
    pub fn apply(&self, word: &[usize]) -> Word {
        let mut out = Vec::with_capacity(word.iter().map(|&l| self.images[l].len()).sum());
        for &l in word {
            out.extend_from_slice(&self.images[l]);
        }
        out
    }

    /// `l ↦ outer(inner(l))`: apply `inner`, then expand every letter of the
    /// result with `outer`. Requires `inner.codomain == outer.domain`.
    pub fn compose(outer: &Self, inner: &Self) -> Result<Self> {
        if inner.codomain != outer.domain {
            return Err(Error::domain(format!(
                "cannot compose: inner codomain {:?} differs from outer domain {:?}",
                inner.codomain, outer.domain
            )));
        }
        let images = inner.images.iter().map(|w| outer.apply(w)).collect();
        Ok(Self {
            domain: inner.domain.clone(),
            codomain: outer.codomain.clone(),
            images,
        })
    }

    /// `k`-fold self composition; `power(0)` is the identity.
    pub fn power(&self, k: u32) -> Result<Self> {
        self.require_square("power")?;
        let mut result = Self::identity(self.domain.clone());
        for _ in 0..k {
            result = Self::compose(self, &result)?;
        }
        Ok(result)
    }

    /// Letter-count matrix: entry `(i, j)` counts codomain letter `j` in
    /// the image of domain letter `i`.
    pub fn abelianize(&self) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(self.domain.len(), self.codomain.len());
        for (i, w) in self.images.iter().enumerate() {
            for &j in w {
                let v = m.get(i, j) + BigInt::one();
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn first_letter_map(&self) -> Result<Vec<usize>> {
        self.require_square("first_letter_map")?;
        Ok(self.images.iter().map(|w| w[0]).collect())
    }

    pub fn last_letter_map(&self) -> Result<Vec<usize>> {
        self.require_square("last_letter_map")?;
        Ok(self.images.iter().map(|w| w[w.len() - 1]).collect())
    }

    /// Both letter maps have a single cycle, and that cycle is a fixed point.
    pub fn is_proper(&self) -> Result<bool> {
        let unique_fixed = |map: &[usize]| {
            let cyc = cycle_vertices(map);
            cyc.len() == 1 && map[cyc[0]] == cyc[0]
        };
        Ok(unique_fixed(&self.first_letter_map()?) && unique_fixed(&self.last_letter_map()?))
    }

    /// The admissible words of length ≤ `k`: factors of some `σᵖ(l)`, `p ≥ 1`.
    pub fn factor_language(&self, k: usize) -> Result<FactorLanguage> {
        self.require_square("factor_language")?;
        if k == 0 {
            return Err(Error::domain("factor length bound must be positive"));
        }
        let mut factors = BTreeSet::new();
        let mut frontier = Vec::new();
        for w in &self.images {
            push_factors(w, k, &mut factors, &mut frontier);
        }
        while let Some(w) = frontier.pop() {
            let image = self.apply(&w);
            push_factors(&image, k, &mut factors, &mut frontier);
        }
        Ok(FactorLanguage { k, factors })
    }

    /// Renames letters: letter `i` of the result is letter `perm[i]` of
    /// `self`. Only meaningful for square substitutions.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        self.require_square("relabel")?;
        let n = self.domain.len();
        let mut inv = vec![usize::MAX; n];
        if perm.len() != n {
            return Err(Error::domain("permutation size mismatch"));
        }
        for (i, &p) in perm.iter().enumerate() {
            if p >= n || inv[p] != usize::MAX {
                return Err(Error::domain("not a permutation"));
            }
            inv[p] = i;
        }
        let images = perm
            .iter()
            .map(|&p| self.images[p].iter().map(|&x| inv[x]).collect())
            .collect();
        Ok(Self {
            domain: self.domain.clone(),
            codomain: self.domain.clone(),
            images,
        })
    }

    /// Same images over different alphabets of the same sizes.
    pub fn with_alphabets(&self, domain: Alphabet, codomain: Alphabet) -> Result<Self> {
        Self::new(domain, codomain, self.images.clone())
    }

    /// Parses the `.sub` text format.
    ///
    /// ```text
    /// letters: a b
    /// a -> ab
    /// b -> a
    /// ```
    ///
    /// Without a header the letters are the left-hand sides in order of
    /// appearance. Rectangular files use `letters_from:` and `letters_to:`.
    pub fn parse_sub(text: &str) -> Result<Self> {
        let mut letters: Option<(usize, Vec<String>)> = None;
        let mut from: Option<(usize, Vec<String>)> = None;
        let mut to: Option<(usize, Vec<String>)> = None;
        let mut rules: Vec<(usize, String, String)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some((key, rest)) = line.split_once(':') {
                let key = key.trim();
                let names: Vec<String> = rest.split_whitespace().map(String::from).collect();
                let slot = match key {
                    "letters" => &mut letters,
                    "letters_from" => &mut from,
                    "letters_to" => &mut to,
                    other => return Err(Error::parse(line_no, format!("unknown header {other:?}"))),
                };
                if slot.is_some() {
                    return Err(Error::parse(line_no, format!("duplicate header {key:?}")));
                }
                *slot = Some((line_no, names));
                continue;
            }
            let Some((lhs, rhs)) = line.split_once("->") else {
                return Err(Error::parse(line_no, format!("expected `x -> word`, got {line:?}")));
            };
            let lhs = lhs.trim();
            if lhs.is_empty() || lhs.split_whitespace().nth(1).is_some() {
                return Err(Error::parse(line_no, format!("bad left-hand side {lhs:?}")));
            }
            rules.push((line_no, lhs.to_string(), rhs.trim().to_string()));
        }
        if rules.is_empty() {
            return Err(Error::parse(0, "no rules"));
        }
        let alpha = |entry: Option<(usize, Vec<String>)>| -> Result<Option<Alphabet>> {
            entry
                .map(|(line, names)| Alphabet::new(names).map_err(|e| Error::parse(line, e.to_string())))
                .transpose()
        };
        let (domain, codomain) = match (alpha(letters)?, alpha(from)?, alpha(to)?) {
            (Some(a), None, None) => (a.clone(), a),
            (None, Some(f), Some(t)) => (f, t),
            (None, None, None) => {
                let mut names: Vec<String> = Vec::new();
                for (line, lhs, _) in &rules {
                    if names.contains(lhs) {
                        return Err(Error::parse(*line, format!("duplicate rule for {lhs:?}")));
                    }
                    names.push(lhs.clone());
                }
                let a = Alphabet::new(names).map_err(|e| Error::parse(0, e.to_string()))?;
                (a.clone(), a)
            }
            _ => {
                return Err(Error::parse(
                    0,
                    "use either `letters:` or both `letters_from:` and `letters_to:`",
                ))
            }
        };
        let mut images: Vec<Option<Word>> = vec![None; domain.len()];
        for (line, lhs, rhs) in rules {
            let i = domain
                .index_of(&lhs)
                .ok_or_else(|| Error::parse(line, format!("unknown letter {lhs:?}")))?;
            if images[i].is_some() {
                return Err(Error::parse(line, format!("duplicate rule for {lhs:?}")));
            }
            if rhs.is_empty() {
                return Err(Error::parse(line, format!("empty image for {lhs:?}")));
            }
            let w = codomain
                .parse_word(&rhs)
                .map_err(|e| Error::parse(line, e.to_string()))?;
            images[i] = Some(w);
        }
        let images = images
            .into_iter()
            .enumerate()
            .map(|(i, w)| w.ok_or_else(|| Error::parse(0, format!("no rule for {:?}", domain.name(i)))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(domain, codomain, images).map_err(|e| Error::parse(0, e.to_string()))
    }

    pub fn to_sub_text(&self) -> String {
        let mut out = String::new();
        if self.is_square() {
            out.push_str(&format!("letters: {}\n", self.domain.letters.join(" ")));
        } else {
            out.push_str(&format!("letters_from: {}\n", self.domain.letters.join(" ")));
            out.push_str(&format!("letters_to: {}\n", self.codomain.letters.join(" ")));
        }
        for (i, w) in self.images.iter().enumerate() {
            out.push_str(&format!(
                "{} -> {}\n",
                self.domain.name(i),
                self.codomain.render(w)
            ));
        }
        out
    }
}

fn push_factors(w: &[usize], k: usize, set: &mut BTreeSet<Word>, frontier: &mut Vec<Word>) {
    for start in 0..w.len() {
        for len in 1..=k.min(w.len() - start) {
            let f = w[start..start + len].to_vec();
            if set.insert(f.clone()) {
                frontier.push(f);
            }
        }
    }
}

/// Vertices lying on a cycle of the functional graph of `map`, ascending.
pub fn cycle_vertices(map: &[usize]) -> Vec<usize> {
    let n = map.len();
    (0..n)
        .filter(|&v| {
            let mut x = map[v];
            for _ in 0..n {
                if x == v {
                    return true;
                }
                x = map[x];
            }
            false
        })
        .collect()
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, w) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}->{}", self.domain.name(i), self.codomain.render(w))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct SubstitutionRepr {
    domain: Alphabet,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    codomain: Option<Alphabet>,
    images: Vec<ImageRepr>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ImageRepr {
    Text(String),
    Letters(Vec<String>),
}

impl Serialize for Substitution {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let single = self.codomain.single_char();
        let images = self
            .images
            .iter()
            .map(|w| {
                if single {
                    ImageRepr::Text(self.codomain.render(w))
                } else {
                    ImageRepr::Letters(w.iter().map(|&i| self.codomain.name(i).to_string()).collect())
                }
            })
            .collect();
        SubstitutionRepr {
            domain: self.domain.clone(),
            codomain: (!self.is_square()).then(|| self.codomain.clone()),
            images,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Substitution {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = SubstitutionRepr::deserialize(d)?;
        let codomain = repr.codomain.unwrap_or_else(|| repr.domain.clone());
        let images = repr
            .images
            .into_iter()
            .map(|img| match img {
                ImageRepr::Text(t) => codomain.parse_word(&t),
                ImageRepr::Letters(names) => names
                    .iter()
                    .map(|n| {
                        codomain
                            .index_of(n)
                            .ok_or_else(|| Error::domain(format!("unknown letter {n:?}")))
                    })
                    .collect(),
            })
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Substitution::new(repr.domain, codomain, images).map_err(D::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorLanguage {
    k: usize,
    factors: BTreeSet<Word>,
}

impl FactorLanguage {
    pub fn max_length(&self) -> usize {
        self.k
    }

    pub fn contains(&self, w: &[usize]) -> bool {
        self.factors.contains(w)
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Factors ordered by length, then lexicographically by letter index.
    pub fn iter(&self) -> impl Iterator<Item = &Word> {
        let mut v: Vec<&Word> = self.factors.iter().collect();
        v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        v.into_iter()
    }

    pub fn words(&self) -> &BTreeSet<Word> {
        &self.factors
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat;

    fn s(letters: &str, images: &[&str]) -> Substitution {
        Substitution::from_images(letters, images).unwrap()
    }

    #[test]
    fn composition_examples() {
        let s1 = s("ab", &["ab", "a"]);
        let s2 = s("ab", &["ba", "a"]);
        assert_eq!(Substitution::compose(&s1, &s1).unwrap(), s("ab", &["aba", "ab"]));
        let id = Substitution::identity(s1.domain().clone());
        assert_eq!(Substitution::compose(&id, &s1).unwrap(), s1);
        let s1sq = s1.power(2).unwrap();
        assert_eq!(
            Substitution::compose(&s1sq, &s2).unwrap(),
            s("ab", &["ababa", "aba"])
        );
    }

    #[test]
    fn compose_rejects_mismatch() {
        let a = s("ab", &["ab", "a"]);
        let b = s("xy", &["xy", "x"]);
        assert!(matches!(Substitution::compose(&a, &b), Err(Error::Domain(_))));
        let rect = Substitution::from_rect_images("xyz", "ab", &["a", "ab", "b"]).unwrap();
        assert!(rect.power(2).is_err());
        assert!(Substitution::compose(&a, &rect).is_ok());
    }

    #[test]
    fn powers() {
        let s1 = s("ab", &["ab", "a"]);
        assert_eq!(s1.power(2).unwrap().image(0), &vec![0, 1, 0]);
        assert_eq!(s1.power(0).unwrap(), Substitution::identity(s1.domain().clone()));
        assert_eq!(s1.power(5).unwrap().image(0).len(), 13);
    }

    #[test]
    fn abelianization_examples() {
        assert_eq!(s("ab", &["ab", "a"]).abelianize(), mat![[1, 1], [1, 0]]);
        assert_eq!(s("ab", &["aaab", "aaab"]).abelianize(), mat![[3, 1], [3, 1]]);
        let id = Substitution::identity(Alphabet::standard(3));
        assert_eq!(id.abelianize(), ExactMatrix::identity(3));
    }

    #[test]
    fn factor_languages() {
        let fib = s("ab", &["ab", "a"]).factor_language(2).unwrap();
        let words: Vec<Word> = fib.iter().cloned().collect();
        assert_eq!(words, vec![vec![0], vec![1], vec![0, 0], vec![0, 1], vec![1, 0]]);
        let lang = s("ab", &["aabb", "aabb"]).factor_language(2).unwrap();
        assert_eq!(lang.len(), 6);
        let prim = s("abc", &["abc", "ca", "b"]).factor_language(1).unwrap();
        assert_eq!(prim.len(), 3);
    }

    #[test]
    fn letter_maps_and_properness() {
        let s1 = s("ab", &["ab", "a"]);
        assert_eq!(s1.first_letter_map().unwrap(), vec![0, 0]);
        assert_eq!(s1.last_letter_map().unwrap(), vec![1, 0]);
        let s2 = s("ab", &["ba", "a"]);
        assert_eq!(s2.first_letter_map().unwrap(), vec![1, 0]);
        assert_eq!(s2.last_letter_map().unwrap(), vec![0, 0]);
        assert!(!s1.is_proper().unwrap());
        assert!(s("ab", &["aba", "aa"]).is_proper().unwrap());
        assert!(s("a", &["aa"]).is_proper().unwrap());
    }

    #[test]
    fn cycles() {
        assert_eq!(cycle_vertices(&[1, 0]), vec![0, 1]);
        assert_eq!(cycle_vertices(&[0, 0, 1]), vec![0]);
        assert_eq!(cycle_vertices(&[1, 2, 1, 0]), vec![1, 2]);
    }

    #[test]
    fn sub_format_round_trip() {
        let text = "# fibonacci\nletters: a b\na -> ab\nb -> a\n";
        let fib = Substitution::parse_sub(text).unwrap();
        assert_eq!(fib, s("ab", &["ab", "a"]));
        assert_eq!(Substitution::parse_sub(&fib.to_sub_text()).unwrap(), fib);
        assert_eq!(Substitution::parse_sub("a -> ab\nb -> a").unwrap(), fib);

        let multi = "letters: x0 x1\nx0 -> x0 x1\nx1 -> x0\n";
        let m = Substitution::parse_sub(multi).unwrap();
        assert_eq!(m.images(), fib.images());
        assert_eq!(Substitution::parse_sub(&m.to_sub_text()).unwrap(), m);

        let rect = "letters_from: x y z\nletters_to: a b\nx -> a\ny -> ab\nz -> b\n";
        let r = Substitution::parse_sub(rect).unwrap();
        assert!(!r.is_square());
        assert_eq!(Substitution::parse_sub(&r.to_sub_text()).unwrap(), r);
    }

    #[test]
    fn sub_format_errors() {
        assert!(matches!(
            Substitution::parse_sub("a -> ab\n"),
            Err(Error::Parse { .. })
        ));
        assert!(Substitution::parse_sub("a ab\n").is_err());
        assert!(Substitution::parse_sub("a ->\n").is_err());
        assert!(Substitution::parse_sub("letters: a b\na -> a\n").is_err());
        assert!(Substitution::parse_sub("").is_err());
    }

    #[test]
    fn json_round_trip() {
        let fib = s("ab", &["ab", "a"]);
        let json = serde_json::to_string(&fib).unwrap();
        assert_eq!(json, r#"{"domain":["a","b"],"images":["ab","a"]}"#);
        assert_eq!(serde_json::from_str::<Substitution>(&json).unwrap(), fib);
        let rect = Substitution::from_rect_images("xyz", "ab", &["a", "ab", "b"]).unwrap();
        let json = serde_json::to_string(&rect).unwrap();
        assert_eq!(serde_json::from_str::<Substitution>(&json).unwrap(), rect);
    }

    #[test]
    fn relabel_swaps_letters() {
        let s1 = s("ab", &["ab", "a"]);
        let swapped = s1.relabel(&[1, 0]).unwrap();
        assert_eq!(swapped, s("ab", &["b", "ba"]));
        assert_eq!(swapped.relabel(&[1, 0]).unwrap(), s1);
    }
}
