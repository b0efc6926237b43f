//! Shared generators and an independent certificate checker.
//!
//! The checker deliberately avoids `Certificate::verify`: it expands words
//! and multiplies matrices itself.

#![allow(dead_code)]

use num_bigint::BigInt;
use proptest::prelude::*;
use subkit::bratteli::{Certificate, ChainLink};
use subkit::{ExactMatrix, Substitution, Word};

pub fn sub(letters: &str, images: &[&str]) -> Substitution {
    Substitution::from_images(letters, images).unwrap()
}

pub fn sigma1() -> Substitution {
    sub("ab", &["ab", "a"])
}

pub fn sigma2() -> Substitution {
    sub("ab", &["ba", "a"])
}

pub fn matrix(rows: &[&[i64]]) -> ExactMatrix {
    ExactMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

/// Square substitution on up to `max_letters` letters with images of length
/// `1..=max_len`.
pub fn square_sub(max_letters: usize, max_len: usize) -> impl Strategy<Value = Substitution> {
    (1..=max_letters).prop_flat_map(move |n| rect_sub(n, n, max_len))
}

pub fn rect_sub(domain: usize, codomain: usize, max_len: usize) -> impl Strategy<Value = Substitution> {
    proptest::collection::vec(proptest::collection::vec(0..codomain, 1..=max_len), domain).prop_map(
        move |images| {
            Substitution::new(
                subkit::Alphabet::standard(domain),
                subkit::Alphabet::standard(codomain),
                images,
            )
            .unwrap()
        },
    )
}

/// Square substitution in which every letter occurs in some image, so it
/// defines a diagram.
pub fn covering_sub(max_letters: usize, max_len: usize) -> impl Strategy<Value = Substitution> {
    square_sub(max_letters, max_len).prop_filter("every letter occurs", |s| {
        (0..s.domain().len()).all(|l| s.images().iter().any(|w| w.contains(&l)))
    })
}

/// Square substitution with a primitive matrix, at least two letters and at
/// least one image longer than one letter.
pub fn primitive_sub(max_letters: usize, max_len: usize) -> impl Strategy<Value = Substitution> {
    (2..=max_letters)
        .prop_flat_map(move |n| rect_sub(n, n, max_len))
        .prop_filter("primitive with a long image", |s| {
            s.abelianize().is_primitive().0 && s.images().iter().any(|w| w.len() > 1)
        })
}

/// Non-negative square matrix with entries `0..=max`.
pub fn square_matrix(max_size: usize, max: i64) -> impl Strategy<Value = ExactMatrix> {
    (1..=max_size).prop_flat_map(move |n| {
        proptest::collection::vec(proptest::collection::vec(0..=max, n), n)
            .prop_map(|rows| ExactMatrix::from_rows(&rows).unwrap())
    })
}

pub fn primitive_matrix(max_size: usize, max: i64) -> impl Strategy<Value = ExactMatrix> {
    square_matrix(max_size, max).prop_filter("primitive", |m| m.is_primitive().0)
}

pub fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

// ---- independent checker ----

fn expand(images: &[Word], word: &[usize]) -> Word {
    word.iter().flat_map(|&l| images[l].iter().copied()).collect()
}

/// Images of `outer ∘ inner` (inner first).
fn compose_images(outer: &[Word], inner: &[Word]) -> Vec<Word> {
    inner.iter().map(|w| expand(outer, w)).collect()
}

fn power_images(s: &[Word], k: u32) -> Vec<Word> {
    let mut out: Vec<Word> = (0..s.len()).map(|l| vec![l]).collect();
    for _ in 0..k {
        out = compose_images(s, &out);
    }
    out
}

fn lengths(images: &[Word]) -> Vec<usize> {
    images.iter().map(Vec::len).collect()
}

fn check_sub_link(link: &ChainLink<Substitution>, left: &Substitution, right: &Substitution) -> bool {
    let c: Vec<&[Word]> = link.chain.iter().map(|t| t.images()).collect();
    let t = c.len();
    if t < 2 || t % 2 == 1 || link.odd_powers.len() != t / 2 || link.even_powers.len() != t / 2 {
        return false;
    }
    for i in 0..t / 2 {
        if compose_images(c[2 * i], c[2 * i + 1]) != power_images(left.images(), link.odd_powers[i]) {
            return false;
        }
        let next = if 2 * i + 2 < t { c[2 * i + 2] } else { c[2 * i] };
        if compose_images(c[2 * i + 1], next) != power_images(right.images(), link.even_powers[i]) {
            return false;
        }
    }
    let target = lengths(c[0]);
    (0..64).any(|k| lengths(&power_images(right.images(), k)) == target)
}

pub fn check_ordered(cert: &Certificate<Substitution>, s1: &Substitution, s2: &Substitution) -> bool {
    let mut gens = vec![s1.clone()];
    gens.extend(cert.via.iter().map(|v| v.generator.clone()));
    gens.push(s2.clone());
    let links = std::iter::once(&cert.link).chain(cert.via.iter().map(|v| &v.link));
    links.enumerate().all(|(i, link)| check_sub_link(link, &gens[i], &gens[i + 1]))
}

fn col_sums(m: &ExactMatrix) -> Vec<BigInt> {
    (0..m.cols()).map(|j| m.column(j).iter().sum()).collect()
}

fn mul(a: &ExactMatrix, b: &ExactMatrix) -> Option<ExactMatrix> {
    if a.cols() != b.rows() {
        return None;
    }
    let rows = (0..a.rows())
        .map(|i| {
            (0..b.cols())
                .map(|j| (0..a.cols()).map(|k| a.get(i, k) * b.get(k, j)).sum())
                .collect()
        })
        .collect();
    ExactMatrix::from_big_rows(rows).ok()
}

fn mpow(a: &ExactMatrix, k: u32) -> ExactMatrix {
    let mut out = ExactMatrix::identity(a.rows());
    for _ in 0..k {
        out = mul(&out, a).unwrap();
    }
    out
}

fn check_matrix_link(link: &ChainLink<ExactMatrix>, left: &ExactMatrix, right: &ExactMatrix) -> bool {
    let c = &link.chain;
    let t = c.len();
    if t < 2 || t % 2 == 1 || link.odd_powers.len() != t / 2 || link.even_powers.len() != t / 2 {
        return false;
    }
    if c.iter().any(|m| !m.is_nonnegative()) {
        return false;
    }
    for i in 0..t / 2 {
        if mul(&c[2 * i], &c[2 * i + 1]) != Some(mpow(left, link.odd_powers[i])) {
            return false;
        }
        let next = if 2 * i + 2 < t { &c[2 * i + 2] } else { &c[2 * i] };
        if mul(&c[2 * i + 1], next) != Some(mpow(right, link.even_powers[i])) {
            return false;
        }
    }
    let target = col_sums(&c[0]);
    (0..64).any(|k| col_sums(&mpow(right, k)) == target)
}

pub fn check_unordered(cert: &Certificate<ExactMatrix>, m: &ExactMatrix, n: &ExactMatrix) -> bool {
    let mut gens = vec![m.clone()];
    gens.extend(cert.via.iter().map(|v| v.generator.clone()));
    gens.push(n.clone());
    let links = std::iter::once(&cert.link).chain(cert.via.iter().map(|v| &v.link));
    links.enumerate().all(|(i, link)| check_matrix_link(link, &gens[i], &gens[i + 1]))
}

/// Fibonacci numbers with `f(1) = f(2) = 1`.
pub fn fib(n: usize) -> u64 {
    let (mut a, mut b) = (0u64, 1u64);
    for _ in 0..n {
        (a, b) = (b, a + b);
    }
    a
}
