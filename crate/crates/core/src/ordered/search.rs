use std::collections::BTreeSet;

use crate::bratteli::{distinguish, Certificate, ChainLink, Via};
use crate::budget::Preset;
use crate::cancel::CancelToken;
use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::words::{Alphabet, Substitution, Word};
use crate::Verdict;

use super::paths::path_counts;

pub type OrderedCertificate = Certificate<Substitution>;
pub type OrderedVerdict = Verdict<OrderedCertificate>;

/// Limits for the ordered search. Exhausting them yields `Unknown`.
#[derive(Debug, Clone)]
pub struct OrderedBudget {
    /// Largest alphabet of an intermediate generator.
    pub max_alphabet: usize,
    /// Longest certificate chain, summed over all links.
    pub max_chain: usize,
    /// Largest power tried on either input.
    pub max_power: u32,
    /// Candidate first maps examined per `(p, k)` before giving up on it.
    pub max_candidates: usize,
    pub execution: Execution,
    pub cancel: CancelToken,
}

impl OrderedBudget {
    pub fn preset(preset: Preset) -> Self {
        let (max_alphabet, max_chain, max_power, max_candidates) = match preset {
            Preset::Small => (2, 4, 3, 50_000),
            Preset::Default => (3, 8, 4, 250_000),
            Preset::Large => (4, 12, 6, 2_000_000),
        };
        Self {
            max_alphabet,
            max_chain,
            max_power,
            max_candidates,
            execution: Execution::default(),
            cancel: CancelToken::new(),
        }
    }
}

impl Default for OrderedBudget {
    fn default() -> Self {
        Self::preset(Preset::Default)
    }
}

/// Decides or bounds telescope equivalence of the stationary ordered
/// diagrams of `s1` and `s2`.
pub fn analyze_ordered_equivalence(
    s1: &Substitution,
    s2: &Substitution,
    budget: &OrderedBudget,
) -> Result<OrderedVerdict> {
    if let Some(v) = ordered_battery(s1, s2, &budget.cancel)? {
        return Ok(v);
    }
    let candidates = [
        direct_link(s1, s2, budget)?.map(Certificate::direct),
        quotient_bridge(s1, s2, budget)?,
    ];
    for cert in candidates.into_iter().flatten() {
        if accept(&cert, s1, s2, budget) {
            return Ok(Verdict::Equivalent { certificate: cert });
        }
    }
    Ok(Verdict::Unknown)
}

/// Unordered invariants of the incidence matrices, then the numbers of
/// maximal and minimal paths.
pub(crate) fn ordered_battery(
    s1: &Substitution,
    s2: &Substitution,
    cancel: &CancelToken,
) -> Result<Option<OrderedVerdict>> {
    if !s1.is_square() || !s2.is_square() {
        return Err(Error::domain("ordered equivalence needs square substitutions"));
    }
    let (m1, m2) = (s1.abelianize().transpose(), s2.abelianize().transpose());
    if let Some(d) = distinguish(&m1, &m2, cancel)? {
        return Ok(Some(Verdict::distinguished(d.invariant, d.detail)));
    }
    let (c1, c2) = (path_counts(s1)?, path_counts(s2)?);
    if (c1.max_count, c1.min_count) != (c2.max_count, c2.min_count) {
        return Ok(Some(Verdict::distinguished(
            "max/min path counts",
            format!(
                "(max {}, min {}) vs (max {}, min {})",
                c1.max_count, c1.min_count, c2.max_count, c2.min_count
            ),
        )));
    }
    Ok(None)
}

pub(crate) fn accept(cert: &OrderedCertificate, s1: &Substitution, s2: &Substitution, budget: &OrderedBudget) -> bool {
    cert.chain_length() <= budget.max_chain.max(2) && matches!(cert.verify(s1, s2), Ok(true))
}

/// Distinct factors of the given length, sorted.
fn factors(words: &[Word], len: usize) -> Vec<Word> {
    let mut out = BTreeSet::new();
    for w in words {
        if w.len() >= len {
            for f in w.windows(len) {
                out.insert(f.to_vec());
            }
        }
    }
    out.into_iter().collect()
}

/// All ways to cut `word` into pieces from `pieces`, as index sequences, up
/// to `cap` of them.
fn parses(word: &[usize], pieces: &[Word], cap: usize) -> Vec<Word> {
    let n = word.len();
    // finishes[i]: the suffix from i can be cut
    let mut finishes = vec![false; n + 1];
    finishes[n] = true;
    for i in (0..n).rev() {
        finishes[i] = pieces
            .iter()
            .any(|p| word[i..].starts_with(p) && finishes[i + p.len()]);
    }
    let mut out = Vec::new();
    if !finishes[0] {
        return out;
    }
    fn walk(
        word: &[usize],
        pieces: &[Word],
        finishes: &[bool],
        at: usize,
        current: &mut Word,
        out: &mut Vec<Word>,
        cap: usize,
    ) {
        if out.len() >= cap {
            return;
        }
        if at == word.len() {
            out.push(current.clone());
            return;
        }
        for (b, p) in pieces.iter().enumerate() {
            if word[at..].starts_with(p) && finishes[at + p.len()] {
                current.push(b);
                walk(word, pieces, finishes, at + p.len(), current, out, cap);
                current.pop();
            }
        }
    }
    walk(word, pieces, &finishes, 0, &mut Vec::new(), &mut out, cap);
    out
}

const PARSE_CAP: usize = 64;
const SECOND_MAP_CAP: usize = 4096;

fn covers(images: &[Word], size: usize) -> bool {
    let mut seen = vec![false; size];
    for w in images {
        for &l in w {
            seen[l] = true;
        }
    }
    seen.into_iter().all(|s| s)
}

/// Looks for a two-map chain `(τ₁, τ₂)` with `τ₁∘τ₂ = s1^p` and
/// `τ₂∘τ₁ = s2^q`, where `τ₁` has the image lengths of `s2^k`. The period
/// repeats forever, so this is a full certificate. `k = 0` covers ordered
/// isomorphism (a letter bijection).
pub fn direct_link(
    s1: &Substitution,
    s2: &Substitution,
    budget: &OrderedBudget,
) -> Result<Option<ChainLink<Substitution>>> {
    let filter = LinkFilter {
        min_k: 0,
        first: &|_, _, _| true,
        second: &|_| true,
    };
    filtered_link(s1, s2, budget, &filter)
}

/// Restrictions on the maps tried by [`filtered_link`].
pub(crate) struct LinkFilter<'a> {
    pub min_k: u32,
    /// `(k, letter, candidate image)` for `τ₁`.
    pub first: &'a (dyn Fn(u32, usize, &[usize]) -> bool + Sync),
    pub second: &'a (dyn Fn(&Substitution) -> bool + Sync),
}

pub(crate) fn filtered_link(
    s1: &Substitution,
    s2: &Substitution,
    budget: &OrderedBudget,
    filter: &LinkFilter<'_>,
) -> Result<Option<ChainLink<Substitution>>> {
    let (a1, a2) = (s1.domain(), s2.domain());
    let max = budget.max_power;
    let powers1 = (0..=max).map(|p| s1.power(p)).collect::<Result<Vec<_>>>()?;
    let powers2 = (0..=max).map(|q| s2.power(q)).collect::<Result<Vec<_>>>()?;
    for p in 1..=max {
        let words = powers1[p as usize].images();
        for k in filter.min_k..=max {
            budget.cancel.check()?;
            let lens = powers2[k as usize].image_lengths();
            let options: Vec<Vec<Word>> = lens
                .iter()
                .enumerate()
                .map(|(b, &l)| {
                    let mut o = factors(words, l);
                    o.retain(|w| (filter.first)(k, b, w));
                    o
                })
                .collect();
            let total = options
                .iter()
                .try_fold(1usize, |acc, o| acc.checked_mul(o.len()))
                .filter(|&t| t > 0 && t <= budget.max_candidates);
            let Some(total) = total else { continue };
            let cancel = &budget.cancel;
            let hit = par::find_map_first(budget.execution, total, |index| {
                if cancel.is_cancelled() {
                    return None;
                }
                let mut rest = index;
                let first: Vec<Word> = options
                    .iter()
                    .map(|o| {
                        let w = o[rest % o.len()].clone();
                        rest /= o.len();
                        w
                    })
                    .collect();
                if !covers(&first, a1.len()) {
                    return None;
                }
                let tau1 = Substitution::new(a2.clone(), a1.clone(), first.clone()).ok()?;
                second_maps(words, &first, a2.len())
                    .into_iter()
                    .find_map(|second| {
                        let tau2 = Substitution::new(a1.clone(), a2.clone(), second).ok()?;
                        if !(filter.second)(&tau2) {
                            return None;
                        }
                        let back = Substitution::compose(&tau2, &tau1).ok()?;
                        let q = (1..=max).find(|&q| back.images() == powers2[q as usize].images())?;
                        Some(ChainLink {
                            chain: vec![tau1.clone(), tau2],
                            odd_powers: vec![p],
                            even_powers: vec![q],
                        })
                    })
            });
            budget.cancel.check()?;
            if hit.is_some() {
                return Ok(hit);
            }
        }
    }
    Ok(None)
}

/// Every `τ₂` with `τ₁∘τ₂ = words`, within the caps.
fn second_maps(words: &[Word], first: &[Word], size: usize) -> Vec<Vec<Word>> {
    let mut per_letter = Vec::with_capacity(words.len());
    for w in words {
        let ps = parses(w, first, PARSE_CAP);
        if ps.is_empty() {
            return Vec::new();
        }
        per_letter.push(ps);
    }
    let mut out: Vec<Vec<Word>> = vec![Vec::new()];
    for ps in &per_letter {
        let mut next = Vec::new();
        for prefix in &out {
            for p in ps {
                if next.len() >= SECOND_MAP_CAP {
                    break;
                }
                let mut v = prefix.clone();
                v.push(p.clone());
                next.push(v);
            }
        }
        out = next;
    }
    out.retain(|images| covers(images, size));
    out
}

/// Merges letters with identical images once. Returns the quotient and
/// the class of each letter, or `None` when all images are distinct.
fn merge_identical(s: &Substitution) -> Option<(Substitution, Vec<usize>)> {
    let mut reps: Vec<&Word> = Vec::new();
    let mut class = Vec::with_capacity(s.domain().len());
    for w in s.images() {
        let c = reps.iter().position(|r| *r == w).unwrap_or_else(|| {
            reps.push(w);
            reps.len() - 1
        });
        class.push(c);
    }
    if reps.len() == class.len() {
        return None;
    }
    let alphabet = Alphabet::standard(reps.len());
    let images = reps.iter().map(|w| w.iter().map(|&l| class[l]).collect()).collect();
    let quotient = Substitution::square(alphabet, images).ok()?;
    Some((quotient, class))
}

/// Links `s` to its quotient `x`: `τ₁([a]) = s(a)`, `τ₂(a) = [a]`.
fn link_to_quotient(s: &Substitution, x: &Substitution, class: &[usize]) -> Result<ChainLink<Substitution>> {
    let reps: Vec<Word> = (0..x.domain().len())
        .map(|c| s.image(class.iter().position(|&k| k == c).expect("class is inhabited")).clone())
        .collect();
    let tau1 = Substitution::new(x.domain().clone(), s.domain().clone(), reps)?;
    let tau2 = Substitution::new(s.domain().clone(), x.domain().clone(), class.iter().map(|&c| vec![c]).collect())?;
    Ok(ChainLink {
        chain: vec![tau1, tau2],
        odd_powers: vec![1],
        even_powers: vec![1],
    })
}

/// Links a quotient `x` back to `s`: `ρ₁(a) = [a]`, `ρ₂([a]) = s(a)`.
fn link_from_quotient(s: &Substitution, x: &Substitution, class: &[usize]) -> Result<ChainLink<Substitution>> {
    let mut reps = link_to_quotient(s, x, class)?.chain;
    let tau2 = reps.pop().expect("two maps");
    let tau1 = reps.pop().expect("two maps");
    Ok(ChainLink {
        chain: vec![tau2, tau1],
        odd_powers: vec![1],
        even_powers: vec![1],
    })
}

/// Quotient tower `s = X₀ → X₁ → …` under repeated merging of letters with
/// identical images.
fn quotient_tower(s: &Substitution) -> Vec<(Substitution, Vec<usize>)> {
    let mut out = Vec::new();
    let mut current = s.clone();
    while let Some((x, class)) = merge_identical(&current) {
        out.push((x.clone(), class));
        current = x;
    }
    out
}

/// `s1 → … → X₁ ~ X₂ ← … ← s2` through the quotient towers, with the direct
/// search bridging the two bottoms.
fn quotient_bridge(
    s1: &Substitution,
    s2: &Substitution,
    budget: &OrderedBudget,
) -> Result<Option<OrderedCertificate>> {
    let (t1, t2) = (quotient_tower(s1), quotient_tower(s2));
    if t1.is_empty() && t2.is_empty() {
        return Ok(None);
    }
    let bottom1 = t1.last().map_or(s1, |(x, _)| x).clone();
    let bottom2 = t2.last().map_or(s2, |(x, _)| x).clone();
    if bottom1.domain().len().max(bottom2.domain().len()) > budget.max_alphabet {
        return Ok(None);
    }
    // links in order, each paired with the generator it ends at
    let mut links: Vec<(ChainLink<Substitution>, Substitution)> = Vec::new();
    let mut top = s1.clone();
    for (x, class) in &t1 {
        links.push((link_to_quotient(&top, x, class)?, x.clone()));
        top = x.clone();
    }
    if !same_substitution(&bottom1, &bottom2) {
        let Some(middle) = direct_link(&bottom1, &bottom2, budget)? else {
            return Ok(None);
        };
        links.push((middle, bottom2.clone()));
    }
    // s2 = U₀, U₁, … with each Uᵢ₊₁ the quotient of Uᵢ
    let mut uppers = vec![s2.clone()];
    uppers.extend(t2.iter().map(|(x, _)| x.clone()));
    let mut upward = Vec::new();
    for (i, (x, class)) in t2.iter().enumerate() {
        upward.push((link_from_quotient(&uppers[i], x, class)?, uppers[i].clone()));
    }
    links.extend(upward.into_iter().rev());

    let mut links = links.into_iter();
    let Some((first, mut generator)) = links.next() else {
        return Ok(None);
    };
    let mut via = Vec::new();
    for (link, end) in links {
        via.push(Via {
            generator: generator.clone(),
            link,
        });
        generator = end;
    }
    Ok(Some(Certificate { link: first, via }))
}

fn same_substitution(a: &Substitution, b: &Substitution) -> bool {
    a.domain().len() == b.domain().len() && a.images() == b.images()
}
