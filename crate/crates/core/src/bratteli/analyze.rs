//! The unordered equivalence analyzer: an invariant battery followed by
//! bounded certificate searches. Every certificate is re-verified before it
//! is returned.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow};
use serde::{Deserialize, Serialize};

use super::certificate::{Certificate, ChainLink, Via};
use super::iso::isomorphic_stationary;
use super::supernatural::{rank_one_factors, supernatural};
use crate::budget::Preset;
use crate::cancel::CancelToken;
use crate::error::{Error, Result};
use crate::matrix::{compare_fields, pf_report_with, ExactMatrix, FieldCompatibility};
use crate::par::{self, Execution};
use crate::Verdict;

pub type UnorderedCertificate = Certificate<ExactMatrix>;
pub type UnorderedVerdict = Verdict<UnorderedCertificate>;

/// Search limits. Exhausting them yields `Unknown`.
#[derive(Debug, Clone)]
pub struct Budget {
    /// Largest power `p` or `q` tried on either generator.
    pub max_power: u32,
    /// Largest vertex count handed to the isomorphism search.
    pub max_alphabet: usize,
    /// Longest certificate chain produced.
    pub max_chain: usize,
    pub execution: Execution,
    pub cancel: CancelToken,
}

impl Budget {
    pub fn preset(preset: Preset) -> Self {
        let (max_power, max_alphabet, max_chain) = match preset {
            Preset::Small => (4, 6, 8),
            Preset::Default => (8, 8, 12),
            Preset::Large => (12, 10, 16),
        };
        Self {
            max_power,
            max_alphabet,
            max_chain,
            execution: Execution::default(),
            cancel: CancelToken::new(),
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self::preset(Preset::Default)
    }
}

/// The first invariant of the battery on which two generators differ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Distinction {
    pub invariant: &'static str,
    pub detail: String,
}

fn differ(invariant: &'static str, detail: String) -> Result<Option<Distinction>> {
    Ok(Some(Distinction { invariant, detail }))
}

/// Runs the invariant battery in order: primitivity, purely-aperiodic,
/// pf-field, invertibility (equal sizes only), non-nilpotent rank and
/// supernatural number (when both apply).
pub fn distinguish(
    m: &ExactMatrix,
    n: &ExactMatrix,
    cancel: &CancelToken,
) -> Result<Option<Distinction>> {
    m.validate_substitution_matrix()?;
    n.validate_substitution_matrix()?;
    let (pm, pn) = (m.is_primitive().0, n.is_primitive().0);
    if pm != pn {
        let word = |b: bool| if b { "primitive" } else { "not primitive" };
        return differ("primitivity", format!("{} vs {}", word(pm), word(pn)));
    }
    if pm {
        let rm = pf_report_with(m, cancel)?;
        let rn = pf_report_with(n, cancel)?;
        if rm.pf_is_rational != rn.pf_is_rational {
            let describe = |r: &crate::matrix::PfReport| match &r.pf_integer_value {
                Some(v) => format!("λ = {v} rational"),
                None => format!("λ ≈ {:.6} irrational", r.approx_value()),
            };
            return differ(
                "purely-aperiodic",
                format!("{} vs {}", describe(&rm), describe(&rn)),
            );
        }
        if compare_fields(&rm, &rn) == FieldCompatibility::Incompatible {
            return differ(
                "pf-field",
                format!(
                    "minimal polynomials {} and {} generate different fields",
                    rm.pf_minimal_polynomial, rn.pf_minimal_polynomial
                ),
            );
        }
    }
    cancel.check()?;
    if m.rows() == n.rows() {
        let (im, inv) = (m.is_invertible()?, n.is_invertible()?);
        if im != inv {
            let word = |b: bool| if b { "invertible" } else { "singular" };
            return differ("invertibility", format!("{} vs {}", word(im), word(inv)));
        }
    }
    let (rm, rn) = (m.non_nilpotent_rank()?, n.non_nilpotent_rank()?);
    if rm != rn {
        return differ("non-nilpotent-rank", format!("{rm} vs {rn}"));
    }
    if let (Some(a), Some(b)) = (supernatural(m), supernatural(n)) {
        if a != b {
            return differ("supernatural", format!("{a} vs {b}"));
        }
    }
    Ok(None)
}

type Search = fn(&ExactMatrix, &ExactMatrix, &Budget) -> Result<Option<UnorderedCertificate>>;

/// Decides or bounds telescope equivalence of the stationary diagrams of
/// `m` and `n`.
pub fn analyze_equivalence(
    m: &ExactMatrix,
    n: &ExactMatrix,
    budget: &Budget,
) -> Result<UnorderedVerdict> {
    if let Some(d) = distinguish(m, n, &budget.cancel)? {
        return Ok(Verdict::distinguished(d.invariant, d.detail));
    }
    let searches: [Search; 4] = [power_iso, split_bridge, rank_one_bridge, invertible_search];
    for search in searches {
        budget.cancel.check()?;
        if let Some(cert) = search(m, n, budget)? {
            if cert.chain_length() <= budget.max_chain.max(2) && cert.verify(m, n)? {
                return Ok(Verdict::Equivalent { certificate: cert });
            }
        }
    }
    Ok(Verdict::Unknown)
}

struct Powers {
    m: Vec<ExactMatrix>,
    n: Vec<ExactMatrix>,
}

impl Powers {
    fn new(m: &ExactMatrix, n: &ExactMatrix, max: u32) -> Result<Self> {
        let build = |a: &ExactMatrix| -> Result<Vec<ExactMatrix>> {
            let mut out = vec![ExactMatrix::identity(a.rows()), a.clone()];
            for _ in 2..=max {
                let next = out.last().expect("nonempty").multiply(a)?;
                out.push(next);
            }
            Ok(out)
        };
        Ok(Self {
            m: build(m)?,
            n: build(n)?,
        })
    }
}

/// `(p, q)` pairs ordered by `p + q`, then `p`.
fn power_pairs(max: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for total in 2..=2 * max {
        for p in 1..=max {
            if total > p && total - p <= max {
                out.push((p, total - p));
            }
        }
    }
    out
}

/// `M^p = Pᵀ·N^q·P`: the chain `(Pᵀ, N^q·P)`.
fn power_iso(m: &ExactMatrix, n: &ExactMatrix, budget: &Budget) -> Result<Option<UnorderedCertificate>> {
    if m.rows() != n.rows() || m.rows() > budget.max_alphabet {
        return Ok(None);
    }
    let powers = Powers::new(m, n, budget.max_power)?;
    let pairs = power_pairs(budget.max_power);
    let cancel = &budget.cancel;
    let hit = par::find_map_first(budget.execution, pairs.len(), |i| {
        if cancel.is_cancelled() {
            return None;
        }
        let (p, q) = pairs[i];
        isomorphic_stationary(&powers.m[p as usize], &powers.n[q as usize]).map(|perm| (p, q, perm))
    });
    budget.cancel.check()?;
    Ok(hit.map(|(p, q, perm)| {
        let pm = ExactMatrix::permutation(&perm);
        Certificate::direct(ChainLink {
            chain: vec![pm.transpose(), &powers.n[q as usize] * &pm],
            odd_powers: vec![p],
            even_powers: vec![q],
        })
    }))
}

/// Groups the columns of `big` into classes of equal columns, in order of
/// first occurrence, and returns the class of every column, one
/// representative per class and the quotient
/// `B[b][b'] = Σ_{j ∈ b} big[j][rep(b')]`.
fn column_quotient(big: &ExactMatrix, classes: usize) -> Option<(Vec<usize>, Vec<usize>, ExactMatrix)> {
    let mut reps: Vec<usize> = Vec::new();
    let mut class_of = Vec::with_capacity(big.cols());
    for j in 0..big.cols() {
        let col = big.column(j);
        match reps.iter().position(|&r| big.column(r) == col) {
            Some(c) => class_of.push(c),
            None => {
                class_of.push(reps.len());
                reps.push(j);
            }
        }
    }
    if reps.len() != classes {
        return None;
    }
    let mut quotient = ExactMatrix::zeros(classes, classes);
    for (j, &b) in class_of.iter().enumerate() {
        for (b2, &r) in reps.iter().enumerate() {
            let v = quotient.get(b, b2) + big.get(j, r);
            quotient.set(b, b2, v);
        }
    }
    Some((class_of, reps, quotient))
}

/// Factors `big = S·R` and `small = R·S` with `R` a 0/1 matrix assigning
/// every vertex of `big` to one vertex of `small`.
fn amalgamation(small: &ExactMatrix, big: &ExactMatrix) -> Option<(ExactMatrix, ExactMatrix)> {
    let (class_of, reps, quotient) = column_quotient(big, small.rows())?;
    let perm = isomorphic_stationary(small, &quotient)?;
    let mut r = ExactMatrix::zeros(small.rows(), big.rows());
    for (j, &b) in class_of.iter().enumerate() {
        let i = perm.iter().position(|&x| x == b).expect("perm is a bijection");
        r.set(i, j, BigInt::one());
    }
    let mut s = ExactMatrix::zeros(big.rows(), small.rows());
    for j in 0..big.rows() {
        for (i, &b) in perm.iter().enumerate() {
            s.set(j, i, big.get(j, reps[b]).clone());
        }
    }
    Some((r, s))
}

/// A single state splitting between powers of the two generators.
fn split_bridge(m: &ExactMatrix, n: &ExactMatrix, budget: &Budget) -> Result<Option<UnorderedCertificate>> {
    if m.rows() == n.rows() || m.rows().max(n.rows()) > budget.max_alphabet {
        return Ok(None);
    }
    let powers = Powers::new(m, n, budget.max_power)?;
    let pairs = power_pairs(budget.max_power);
    let m_small = m.rows() < n.rows();
    let hit = par::find_map_first(budget.execution, pairs.len(), |i| {
        if budget.cancel.is_cancelled() {
            return None;
        }
        let (p, q) = pairs[i];
        let (mp, nq) = (&powers.m[p as usize], &powers.n[q as usize]);
        let chain = if m_small {
            let (r, s) = amalgamation(mp, nq)?;
            vec![r, s]
        } else {
            let (r, s) = amalgamation(nq, mp)?;
            vec![s, r]
        };
        Some(ChainLink {
            chain,
            odd_powers: vec![p],
            even_powers: vec![q],
        })
    });
    budget.cancel.check()?;
    Ok(hit.map(Certificate::direct))
}

fn column(values: &[BigInt]) -> ExactMatrix {
    ExactMatrix::new(values.len(), 1, values.to_vec()).expect("nonempty")
}

fn row(values: &[BigInt]) -> ExactMatrix {
    ExactMatrix::new(1, values.len(), values.to_vec()).expect("nonempty")
}

/// `M = c·rᵀ` telescopes to `[s]` with `s = r·c`. Returns `s` and the link
/// `(α·c, β·rᵀ)` with `α·Σc = s^k` and `αβ = s^{p−1}`.
fn link_to_scalar(m: &ExactMatrix, max_power: u32) -> Option<(BigInt, ChainLink<ExactMatrix>)> {
    let (c, r) = rank_one_factors(m)?;
    let s: BigInt = r.iter().zip(&c).map(|(a, b)| a * b).sum();
    let total: BigInt = c.iter().sum();
    let k = (0..=64u32).find(|&k| Pow::pow(&s, k).is_multiple_of(&total))?;
    let alpha = Pow::pow(&s, k) / &total;
    let p = (1..=max_power.max(k + 1)).find(|&p| Pow::pow(&s, p - 1).is_multiple_of(&alpha))?;
    let beta = Pow::pow(&s, p - 1) / &alpha;
    let scaled = |v: &[BigInt], f: &BigInt| v.iter().map(|x| x * f).collect::<Vec<_>>();
    Some((
        s,
        ChainLink {
            chain: vec![column(&scaled(&c, &alpha)), row(&scaled(&r, &beta))],
            odd_powers: vec![p],
            even_powers: vec![p],
        },
    ))
}

/// The link `[s] ~ N` for `N = c·rᵀ` (or 1×1): `(α·rᵀ, β·c)` with
/// `s^{p} = t^{q}`, `t = r·c`, `αβ = t^{q−1}` and `α·r` a label vector of
/// `N`.
fn link_from_scalar(s: &BigInt, n: &ExactMatrix, max_power: u32) -> Option<ChainLink<ExactMatrix>> {
    let (c, r) = if n.rows() == 1 {
        (vec![n.get(0, 0).clone()], vec![BigInt::one()])
    } else {
        rank_one_factors(n)?
    };
    let t: BigInt = r.iter().zip(&c).map(|(a, b)| a * b).sum();
    let total: BigInt = c.iter().sum();
    let unit_row = r.iter().all(One::is_one);
    for (p, q) in power_pairs(max_power) {
        if Pow::pow(s, p) != Pow::pow(&t, q) {
            continue;
        }
        let top = Pow::pow(&t, q - 1);
        let mut alphas = Vec::new();
        if unit_row {
            alphas.push(BigInt::one());
        }
        for k in 1..=q {
            alphas.push(&total * Pow::pow(&t, k - 1));
        }
        if let Some(alpha) = alphas.into_iter().find(|a| top.is_multiple_of(a)) {
            let beta = &top / &alpha;
            let scaled = |v: &[BigInt], f: &BigInt| v.iter().map(|x| x * f).collect::<Vec<_>>();
            return Some(ChainLink {
                chain: vec![row(&scaled(&r, &alpha)), column(&scaled(&c, &beta))],
                odd_powers: vec![p],
                even_powers: vec![q],
            });
        }
    }
    None
}

/// Rank-one generators both telescope to a 1×1 diagram; link through it.
fn rank_one_bridge(m: &ExactMatrix, n: &ExactMatrix, budget: &Budget) -> Result<Option<UnorderedCertificate>> {
    let max = budget.max_power;
    if m.rows() == 1 {
        return Ok(link_from_scalar(m.get(0, 0), n, max).map(Certificate::direct));
    }
    let Some((s, left)) = link_to_scalar(m, max) else {
        return Ok(None);
    };
    let scalar = column(std::slice::from_ref(&s));
    if n == &scalar {
        return Ok(Some(Certificate::direct(left)));
    }
    Ok(link_from_scalar(&s, n, max).map(|right| Certificate {
        link: left,
        via: vec![Via {
            generator: scalar,
            link: right,
        }],
    }))
}

/// A witness for the invertible-case characterization: `J` non-negative
/// and invertible, strictly increasing `k₁ < k₂ < …` and `l₁ < l₂ < …`,
/// with column sums of `J` equal to those of `N^m`. It defines the chain
///
/// `C₁ = J`, `C₂ = J⁻¹M^{k₁}`, `C_{2i+1} = M^{−kᵢ}·J·N^{lᵢ}`,
/// `C_{2i+2} = N^{−lᵢ}·J⁻¹·M^{k_{i+1}}`,
///
/// which must consist of non-negative integer matrices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvertibleWitness {
    pub j: ExactMatrix,
    pub ks: Vec<u32>,
    pub ls: Vec<u32>,
    pub m: u32,
}

fn nonnegative(x: Option<ExactMatrix>) -> Option<ExactMatrix> {
    x.filter(ExactMatrix::is_nonnegative)
}

/// The chain a witness defines, or `None` if some element is not a
/// non-negative integer matrix.
pub fn witness_chain(
    m: &ExactMatrix,
    n: &ExactMatrix,
    w: &InvertibleWitness,
) -> Result<Option<Vec<ExactMatrix>>> {
    let size = m.rows();
    if !m.is_square() || !n.is_square() || n.rows() != size || w.j.rows() != size || !w.j.is_square() {
        return Err(Error::validation("witness matrices must be square of equal size"));
    }
    if w.ks.is_empty() || !(w.ls.len() == w.ks.len() || w.ls.len() + 1 == w.ks.len()) {
        return Err(Error::validation("need k₁ and one l for every k after the first"));
    }
    let increasing = |v: &[u32]| v.first().is_none_or(|&x| x > 0) && v.windows(2).all(|x| x[0] < x[1]);
    if !increasing(&w.ks) || !increasing(&w.ls) {
        return Err(Error::validation("k and l sequences must be strictly increasing and positive"));
    }
    if !w.j.is_nonnegative() || !w.j.is_invertible()? {
        return Ok(None);
    }
    let mut chain = vec![w.j.clone()];
    let Some(c2) = nonnegative(w.j.left_divide(&m.pow(w.ks[0])?)?) else {
        return Ok(None);
    };
    chain.push(c2);
    for (i, &l) in w.ls.iter().enumerate() {
        let mk = m.pow(w.ks[i])?;
        let nl = n.pow(l)?;
        let Some(odd) = nonnegative(mk.left_divide(&w.j.multiply(&nl)?)?) else {
            return Ok(None);
        };
        chain.push(odd);
        if let Some(&next) = w.ks.get(i + 1) {
            let Some(jinv_mk) = w.j.left_divide(&m.pow(next)?)? else {
                return Ok(None);
            };
            let Some(even) = nonnegative(nl.left_divide(&jinv_mk)?) else {
                return Ok(None);
            };
            chain.push(even);
        }
    }
    Ok(Some(chain))
}

/// Checks a witness prefix: every chain element it defines is a
/// non-negative integer matrix and the label condition holds.
pub fn verify_invertible_witness(m: &ExactMatrix, n: &ExactMatrix, w: &InvertibleWitness) -> Result<bool> {
    if witness_chain(m, n, w)?.is_none() {
        return Ok(false);
    }
    Ok(w.j.col_sums() == n.pow(w.m)?.col_sums())
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("pivot exists");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Tries witnesses `J = M^d·P` with arithmetic sequences `kᵢ = d + i·a`,
/// `lᵢ = i·b`, looking for a chain that becomes periodic.
fn invertible_search(m: &ExactMatrix, n: &ExactMatrix, budget: &Budget) -> Result<Option<UnorderedCertificate>> {
    let size = m.rows();
    if size != n.rows() || size > 6 || !m.is_invertible()? || !n.is_invertible()? {
        return Ok(None);
    }
    let steps = budget.max_power.min(4);
    let half = (budget.max_chain / 2).max(1);
    let mut perm: Vec<usize> = (0..size).collect();
    let mut labels: HashMap<Vec<BigInt>, u32> = HashMap::new();
    let mut np = ExactMatrix::identity(size);
    for k in 0..=budget.max_power * 2 {
        labels.entry(np.col_sums()).or_insert(k);
        np = np.multiply(n)?;
    }
    loop {
        budget.cancel.check()?;
        let p = ExactMatrix::permutation(&perm);
        for d in 0..=2u32 {
            let j = m.pow(d)?.multiply(&p)?;
            let Some(&label_power) = labels.get(&j.col_sums()) else {
                continue;
            };
            for a in 1..=steps {
                for b in 1..=steps {
                    let w = InvertibleWitness {
                        j: j.clone(),
                        ks: (1..=half as u32 + 1).map(|i| d + i * a).collect(),
                        ls: (1..=half as u32).map(|i| i * b).collect(),
                        m: label_power,
                    };
                    let Some(chain) = witness_chain(m, n, &w)? else {
                        continue;
                    };
                    // chain = C₁ … C_{2·half+1}; find t with C_{2t+1} = C_{2t−1}
                    // and C_{2t+2} = C_{2t}.
                    for t in 1..=half {
                        if chain[2 * t] == chain[2 * t - 2] && chain[2 * t + 1] == chain[2 * t - 1] {
                            let mut odd = vec![d + a];
                            odd.extend(std::iter::repeat_n(a, t - 1));
                            return Ok(Some(Certificate::direct(ChainLink {
                                chain: chain[..2 * t].to_vec(),
                                odd_powers: odd,
                                even_powers: vec![b; t],
                            })));
                        }
                    }
                }
            }
        }
        if !next_permutation(&mut perm) {
            return Ok(None);
        }
    }
}
