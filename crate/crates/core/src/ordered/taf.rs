use std::fmt::Write as _;

use super::diagram::OrderedDiagram;
use crate::error::{Error, Result};

/// The standard TAF chain of an ordered diagram, one line per level.
///
/// Level `n` is `⊕ T_{d(v)}` over its vertices. From level 1 on the line
/// also lists each vertex's embedding as the sources of its incoming edges
/// in order, e.g. `a↦(a,b)`.
pub fn taf_description(d: &OrderedDiagram, depth: usize) -> Result<String> {
    if depth == 0 || depth > d.depth() {
        return Err(Error::domain(format!(
            "depth {depth} outside 1..={}",
            d.depth()
        )));
    }
    let mut out = String::new();
    for (n, labels) in d.base().labels()[..=depth].iter().enumerate() {
        let blocks: Vec<String> = labels.iter().map(|l| format!("T_{l}")).collect();
        let _ = write!(out, "A_{n} = {}", blocks.join(" ⊕ "));
        if n > 0 {
            let embeddings: Vec<String> = (0..labels.len())
                .map(|v| {
                    let sources: Vec<String> = d
                        .order_word(n, v)
                        .iter()
                        .map(|&u| d.vertex_name(n - 1, u))
                        .collect();
                    format!("{}↦({})", d.vertex_name(n, v), sources.join(","))
                })
                .collect();
            let _ = write!(out, "; {}", embeddings.join(", "));
        }
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Substitution;

    fn diagram(letters: &str, images: &[&str], depth: usize) -> OrderedDiagram {
        OrderedDiagram::from_substitution(&Substitution::from_images(letters, images).unwrap(), depth).unwrap()
    }

    #[test]
    fn thue_morse_chain() {
        let d = diagram("ab", &["ab", "ba"], 2);
        assert_eq!(
            taf_description(&d, 2).unwrap(),
            "A_0 = T_1 ⊕ T_1\nA_1 = T_2 ⊕ T_2; a↦(a,b), b↦(b,a)\nA_2 = T_4 ⊕ T_4; a↦(a,b), b↦(b,a)\n"
        );
    }

    #[test]
    fn fibonacci_chain() {
        let d = diagram("ab", &["ab", "a"], 3);
        let text = taf_description(&d, 3).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "A_0 = T_1 ⊕ T_1");
        assert_eq!(lines[1], "A_1 = T_2 ⊕ T_1; a↦(a,b), b↦(a)");
        assert_eq!(lines[3], "A_3 = T_5 ⊕ T_3; a↦(a,b), b↦(a)");
    }

    #[test]
    fn one_letter_tower() {
        let d = diagram("a", &["aaaaaa"], 3);
        let text = taf_description(&d, 3).unwrap();
        assert!(text.ends_with("A_3 = T_216; a↦(a,a,a,a,a,a)\n"));
        assert!(taf_description(&d, 0).is_err());
        assert!(taf_description(&d, 4).is_err());
    }
}
