//! Text format for tree-shift presentations.
//!
//! ```text
//! variant hom
//! k 2
//! kind sft
//! alphabet 0 1
//! length 2
//! forbidden 11
//! ```
//!
//! `markov_tree` lists `matrix` followed by its `row` lines, once per
//! direction. `explicit` has `alphabet`, `k`, `height` and one `block` line of
//! `address=symbol` pairs per forbidden block. A bare shift spec (starting
//! with `kind`) reads as `hom` with `k 2`.

use std::fmt;
use std::str::FromStr;

use super::TreeShiftSpec;
use crate::error::{Error, Result};
use crate::shift_core::format::{end_error, parse_lines, tokenize, Token};
use crate::shift_core::{AdjacencyMatrix, Alphabet};
use crate::tree_core::{Pattern, TreeWord};

fn alphabet_of(l: &[Token]) -> Result<Alphabet> {
    if l.len() < 2 {
        return Err(l[0].error("alphabet needs at least one symbol"));
    }
    Alphabet::new(l[1..].iter().map(|t| t.text.clone())).map_err(|e| l[1].error(e.to_string()))
}

fn row_of(l: &[Token]) -> Result<Vec<u8>> {
    l[1..]
        .iter()
        .map(|t| match t.text.as_str() {
            "0" => Ok(0),
            "1" => Ok(1),
            _ => Err(t.error("matrix entries must be 0 or 1")),
        })
        .collect()
}

fn block_of(l: &[Token], alphabet: &Alphabet, k: u8) -> Result<Pattern> {
    let mut labels = std::collections::BTreeMap::new();
    for t in &l[1..] {
        let (addr, sym) = t
            .text
            .split_once('=')
            .ok_or_else(|| t.error("expected address=symbol"))?;
        let w = TreeWord::parse(addr, k).map_err(|e| t.error(e.to_string()))?;
        let a = alphabet
            .index(sym)
            .ok_or_else(|| t.error(format!("unknown symbol {sym:?}")))?;
        if labels.insert(w, a).is_some() {
            return Err(t.error(format!("address {addr} given twice")));
        }
    }
    Pattern::new(k, labels).map_err(|e| l[0].error(e.to_string()))
}

fn take_k<'a>(k: &mut Option<(u8, &'a Token)>, l: &'a [Token]) -> Result<()> {
    if l.len() != 2 || k.is_some() {
        return Err(l[0].error("expected a single `k N` line"));
    }
    *k = Some((l[1].number()?, &l[1]));
    Ok(())
}

impl TreeShiftSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let lines = tokenize(text);
        let Some(first) = lines.first() else {
            return Err(end_error(text, "empty tree-shift spec"));
        };
        if first[0].text == "kind" {
            let shift = parse_lines(&lines, text)?;
            return TreeShiftSpec::hom(shift, 2).map_err(|e| first[0].error(e.to_string()));
        }
        if first[0].text != "variant" || first.len() != 2 {
            return Err(first[0].error("expected `variant <hom|markov_tree|explicit|layer_constant>`"));
        }
        let variant = &first[1];
        let rest = &lines[1..];
        let mut k: Option<(u8, &Token)> = None;
        match variant.text.as_str() {
            "hom" => {
                let mut body = Vec::new();
                for l in rest {
                    if l[0].text == "k" {
                        take_k(&mut k, l)?;
                    } else {
                        body.push(l.clone());
                    }
                }
                let shift = parse_lines(&body, text)?;
                let (k, at) = k.unwrap_or((2, variant));
                TreeShiftSpec::hom(shift, k).map_err(|e| at.error(e.to_string()))
            }
            "markov_tree" => {
                let mut alphabet = None;
                let mut matrices: Vec<Vec<Vec<u8>>> = Vec::new();
                for l in rest {
                    match l[0].text.as_str() {
                        "alphabet" if alphabet.is_none() => alphabet = Some(alphabet_of(l)?),
                        "matrix" if l.len() == 1 => matrices.push(Vec::new()),
                        "row" => match matrices.last_mut() {
                            Some(m) => m.push(row_of(l)?),
                            None => return Err(l[0].error("`row` before any `matrix`")),
                        },
                        _ => return Err(l[0].error(format!("unexpected directive {:?}", l[0].text))),
                    }
                }
                let alphabet = alphabet.ok_or_else(|| first[0].error("missing `alphabet` line"))?;
                let ms = matrices
                    .into_iter()
                    .map(|rows| AdjacencyMatrix::new(rows).map_err(|e| variant.error(e.to_string())))
                    .collect::<Result<Vec<_>>>()?;
                TreeShiftSpec::markov_tree(alphabet, ms).map_err(|e| variant.error(e.to_string()))
            }
            "explicit" | "layer_constant" => {
                let mut alphabet = None;
                let mut height: Option<usize> = None;
                let mut blocks = Vec::new();
                for l in rest {
                    match l[0].text.as_str() {
                        "alphabet" if alphabet.is_none() => alphabet = Some(alphabet_of(l)?),
                        "k" => take_k(&mut k, l)?,
                        "height" if l.len() == 2 && variant.text == "explicit" => height = Some(l[1].number()?),
                        "block" if variant.text == "explicit" => blocks.push(l),
                        _ => return Err(l[0].error(format!("unexpected directive {:?}", l[0].text))),
                    }
                }
                let alphabet = alphabet.ok_or_else(|| first[0].error("missing `alphabet` line"))?;
                let (k, at) = k.unwrap_or((2, variant));
                if variant.text == "layer_constant" {
                    return TreeShiftSpec::layer_constant(alphabet, k).map_err(|e| at.error(e.to_string()));
                }
                let mut forbidden = Vec::new();
                for l in blocks {
                    forbidden.push(block_of(l, &alphabet, k)?);
                }
                TreeShiftSpec::explicit(alphabet, k, forbidden, height).map_err(|e| variant.error(e.to_string()))
            }
            other => Err(variant.error(format!("unknown variant {other:?}"))),
        }
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl FromStr for TreeShiftSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        TreeShiftSpec::parse(s)
    }
}

impl fmt::Display for TreeShiftSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "variant {}", self.variant())?;
        match self {
            TreeShiftSpec::Hom { shift, k } => {
                writeln!(f, "k {k}")?;
                write!(f, "{shift}")
            }
            TreeShiftSpec::MarkovTree { alphabet, matrices } => {
                writeln!(f, "alphabet {}", alphabet.names().join(" "))?;
                for m in matrices {
                    writeln!(f, "matrix")?;
                    for r in m.rows() {
                        let cells: Vec<String> = r.iter().map(u8::to_string).collect();
                        writeln!(f, "row {}", cells.join(" "))?;
                    }
                }
                Ok(())
            }
            TreeShiftSpec::Explicit {
                alphabet,
                k,
                height,
                forbidden,
            } => {
                writeln!(f, "alphabet {}", alphabet.names().join(" "))?;
                writeln!(f, "k {k}")?;
                writeln!(f, "height {height}")?;
                for p in forbidden {
                    writeln!(f, "block {}", p.to_inline(alphabet))?;
                }
                Ok(())
            }
            TreeShiftSpec::LayerConstant { alphabet, k } => {
                writeln!(f, "alphabet {}", alphabet.names().join(" "))?;
                writeln!(f, "k {k}")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn round_trip(spec: &TreeShiftSpec) {
        let text = spec.to_text();
        let back = TreeShiftSpec::parse(&text).unwrap();
        assert_eq!(&back, spec, "{text}");
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn variants_round_trip() {
        round_trip(&TreeShiftSpec::hom(catalog::golden_mean(), 3).unwrap());
        round_trip(&TreeShiftSpec::hom(catalog::even_shift(), 2).unwrap());
        round_trip(&catalog::sibling_pair_sft());
        round_trip(&catalog::layer_constant());
        round_trip(&catalog::markov_cover_tree());
        round_trip(&TreeShiftSpec::explicit(Alphabet::binary(), 2, [], Some(1)).unwrap());
    }

    #[test]
    fn bare_shift_spec_is_binary_hom() {
        let t = TreeShiftSpec::parse("kind sft\nalphabet 0 1\nforbidden 11\n").unwrap();
        assert_eq!(t, TreeShiftSpec::hom(catalog::golden_mean(), 2).unwrap());
    }

    #[test]
    fn errors_point_at_tokens() {
        let e = TreeShiftSpec::parse("variant explicit\nalphabet 0 1\nk 2\nblock e=1 0=2\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 4, column: 11, .. }), "{e:?}");
        let e = TreeShiftSpec::parse("variant hom\nk 1\nkind sft\nalphabet 0 1\nforbidden 11\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, column: 3, .. }), "{e:?}");
        assert!(TreeShiftSpec::parse("").is_err());
        assert!(TreeShiftSpec::parse("variant trees\n").is_err());
    }
}
