use serde::Deserialize;

use super::KnotDiagram;
use crate::error::{Error, Result};

#[derive(Deserialize)]
struct PdJson {
    pd: Vec<[u64; 4]>,
}

/// Parses `X(a,b,c,d) X(...) ...` (brackets, commas and a `PD[...]` wrapper are tolerated)
/// or the JSON form `{"pd": [[a,b,c,d], ...]}`. An explicit empty JSON list is the unknot;
/// empty text is an error.
pub fn parse_pd(text: &str) -> Result<KnotDiagram> {
    let trimmed = text.trim();
    if trimmed.starts_with('{') {
        let parsed: PdJson = serde_json::from_str(trimmed).map_err(|e| Error::Syntax { offset: e.column(), message: e.to_string() })?;
        if parsed.pd.is_empty() {
            return Ok(KnotDiagram::unknot());
        }
        if parsed.pd.iter().flatten().any(|&a| a == 0) {
            return Err(Error::Syntax { offset: 0, message: "arc labels must be positive".into() });
        }
        return KnotDiagram::from_pd(&parsed.pd);
    }
    KnotDiagram::from_pd(&parse_terms(text)?)
}

fn parse_terms(text: &str) -> Result<Vec<[u64; 4]>> {
    let mut p = Cursor { s: text.as_bytes(), i: 0 };
    p.skip_separators();
    let wrapped = p.eat_str("PD");
    let closer = if wrapped {
        p.skip_ws();
        match p.bump() {
            Some(b'[') => Some(b']'),
            Some(b'(') => Some(b')'),
            _ => return Err(p.error("expected '[' or '(' after PD")),
        }
    } else {
        None
    };
    let mut out = Vec::new();
    loop {
        p.skip_separators();
        match p.peek() {
            None if closer.is_none() => break,
            Some(c) if Some(c) == closer => {
                p.bump();
                p.skip_separators();
                if p.peek().is_some() {
                    return Err(p.error("trailing input after PD wrapper"));
                }
                break;
            }
            Some(b'X') => {
                p.bump();
                p.skip_ws();
                let close = match p.bump() {
                    Some(b'(') => b')',
                    Some(b'[') => b']',
                    _ => return Err(p.error("expected '(' or '[' after X")),
                };
                let mut tuple = [0u64; 4];
                for (k, slot) in tuple.iter_mut().enumerate() {
                    p.skip_ws();
                    *slot = p.number()?;
                    p.skip_ws();
                    let want = if k == 3 { close } else { b',' };
                    if p.bump() != Some(want) {
                        return Err(p.error(&format!("expected '{}'", want as char)));
                    }
                }
                out.push(tuple);
            }
            _ => return Err(p.error("expected X(a,b,c,d)")),
        }
    }
    if out.is_empty() {
        return Err(Error::EmptyDiagram);
    }
    Ok(out)
}

struct Cursor<'a> {
    s: &'a [u8],
    i: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<u8> {
        self.s.get(self.i).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek();
        self.i += c.is_some() as usize;
        c
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.i += 1;
        }
    }

    fn skip_separators(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace() || c == b',') {
            self.i += 1;
        }
    }

    fn eat_str(&mut self, lit: &str) -> bool {
        if self.s[self.i..].starts_with(lit.as_bytes()) {
            self.i += lit.len();
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<u64> {
        let start = self.i;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.i += 1;
        }
        let digits = std::str::from_utf8(&self.s[start..self.i]).expect("ascii digits");
        match digits.parse::<u64>() {
            Ok(0) => Err(Error::Syntax { offset: start, message: "arc labels must be positive".into() }),
            Ok(v) => Ok(v),
            Err(_) => Err(Error::Syntax { offset: start, message: "expected a positive integer".into() }),
        }
    }

    fn error(&self, message: &str) -> Error {
        Error::Syntax { offset: self.i, message: message.to_string() }
    }
}
