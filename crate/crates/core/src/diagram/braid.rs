use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A braid word on `strands` strands; letter `±i` is `σ_i^{±1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawBraid")]
pub struct BraidWord {
    #[serde(rename = "k")]
    strands: usize,
    #[serde(rename = "word")]
    letters: Vec<i32>,
}

impl BraidWord {
    /// Validates generator range and that the closure is a knot.
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self> {
        if strands < 2 {
            return Err(Error::StrandCount(strands));
        }
        if let Some(&bad) = letters.iter().find(|&&l| l == 0 || l.unsigned_abs() as usize >= strands) {
            return Err(Error::GeneratorOutOfRange { letter: bad as i64, strands });
        }
        let b = BraidWord { strands, letters };
        let components = b.closure_components();
        if components != 1 {
            return Err(Error::BraidNotKnot { components });
        }
        Ok(b)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    /// Number of cycles of the underlying permutation.
    pub fn closure_components(&self) -> usize {
        let mut perm: Vec<usize> = (0..self.strands).collect();
        for &l in &self.letters {
            let i = l.unsigned_abs() as usize - 1;
            perm.swap(i, i + 1);
        }
        let mut seen = vec![false; self.strands];
        let mut cycles = 0;
        for s in 0..self.strands {
            if seen[s] {
                continue;
            }
            cycles += 1;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = perm[x];
            }
        }
        cycles
    }
}

impl std::fmt::Display for BraidWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "k={};", self.strands)?;
        for l in &self.letters {
            write!(f, " {l}")?;
        }
        Ok(())
    }
}

#[derive(Deserialize)]
struct BraidJson {
    braid: BraidWord,
}

#[derive(Deserialize)]
struct RawBraid {
    k: usize,
    word: Vec<i32>,
}

impl TryFrom<RawBraid> for BraidWord {
    type Error = Error;
    fn try_from(raw: RawBraid) -> Result<Self> {
        BraidWord::new(raw.k, raw.word)
    }
}

/// Parses `k=<strands>; w1 w2 ...` or `{"braid": {"k": .., "word": [..]}}`.
pub fn parse_braid(text: &str) -> Result<BraidWord> {
    let t = text.trim();
    if t.starts_with('{') {
        let parsed: BraidJson = serde_json::from_str(t).map_err(|e| Error::Syntax { offset: e.column(), message: e.to_string() })?;
        return Ok(parsed.braid);
    }
    let (head, body) = t.split_once(';').ok_or(Error::Syntax { offset: 0, message: "expected 'k=<strands>; <letters>'".into() })?;
    let k = head
        .trim()
        .strip_prefix("k")
        .map(str::trim_start)
        .and_then(|s| s.strip_prefix('='))
        .and_then(|s| s.trim().parse::<usize>().ok())
        .ok_or(Error::Syntax { offset: 0, message: "expected 'k=<strands>'".into() })?;
    let offset = head.len() + 1;
    let letters = body
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<i32>().map_err(|_| Error::Syntax { offset, message: format!("bad braid letter '{s}'") }))
        .collect::<Result<Vec<_>>>()?;
    BraidWord::new(k, letters)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trefoil_and_figure_eight() {
        let t = parse_braid("k=2; 1 1 1").unwrap();
        assert_eq!(t.letters(), &[1, 1, 1]);
        let f = parse_braid("k=3; 1 -2 1 -2").unwrap();
        assert_eq!(f.closure_components(), 1);
        assert_eq!(f.to_string(), "k=3; 1 -2 1 -2");
    }

    #[test]
    fn json_form() {
        let b = parse_braid(r#"{"braid": {"k": 2, "word": [1, 1, 1]}}"#).unwrap();
        assert_eq!(b, parse_braid("k=2; 1 1 1").unwrap());
    }

    #[test]
    fn links_are_rejected() {
        assert_eq!(parse_braid("k=2; 1 1").unwrap_err(), Error::BraidNotKnot { components: 2 });
        assert_eq!(parse_braid("k=2;").unwrap_err(), Error::BraidNotKnot { components: 2 });
        assert_eq!(parse_braid("k=3; 1 1 1").unwrap_err(), Error::BraidNotKnot { components: 2 });
    }

    #[test]
    fn range_errors() {
        assert_eq!(parse_braid("k=2; 1 2").unwrap_err(), Error::GeneratorOutOfRange { letter: 2, strands: 2 });
        assert_eq!(parse_braid("k=1; ").unwrap_err(), Error::StrandCount(1));
        assert!(matches!(parse_braid("1 1 1"), Err(Error::Syntax { .. })));
    }
}
