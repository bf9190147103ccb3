use std::iter::Peekable;
use std::str::CharIndices;

use super::{GaussError, Passage, Role};
use crate::words::Sign;

struct Cursor<'a> {
    text: &'a str,
    chars: Peekable<CharIndices<'a>>,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.chars.next_if(|(_, c)| c.is_whitespace()).is_some() {}
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.chars.peek().is_none()
    }

    fn error(&mut self, expected: &'static str) -> GaussError {
        let token = match self.chars.peek() {
            None => "end of line".to_string(),
            Some(&(start, _)) => {
                let rest = &self.text[start..];
                let end = rest.find(char::is_whitespace).unwrap_or(rest.len());
                rest[..end].to_string()
            }
        };
        GaussError::Syntax { line: self.line, token, expected }
    }

    fn int(&mut self, expected: &'static str) -> Result<u64, GaussError> {
        self.skip_ws();
        let start = match self.chars.peek() {
            Some(&(i, c)) if c.is_ascii_digit() => i,
            _ => return Err(self.error(expected)),
        };
        let mut end = start;
        while let Some((i, c)) = self.chars.next_if(|(_, c)| c.is_ascii_digit()) {
            end = i + c.len_utf8();
        }
        self.text[start..end].parse().map_err(|_| GaussError::Syntax {
            line: self.line,
            token: self.text[start..end].to_string(),
            expected,
        })
    }

    fn one_of(&mut self, options: &[char], expected: &'static str) -> Result<char, GaussError> {
        self.skip_ws();
        match self.chars.peek() {
            Some(&(_, c)) if options.contains(&c) => {
                self.chars.next();
                Ok(c)
            }
            _ => Err(self.error(expected)),
        }
    }
}

/// Splits on newlines and `/`, then reads `INT ":" passage*` per line.
pub(super) fn parse_components(text: &str) -> Result<Vec<Vec<Passage>>, GaussError> {
    let mut lines: Vec<(u64, Vec<Passage>)> = Vec::new();
    for (idx, raw) in text.split(['\n', '/']).enumerate() {
        if raw.trim().is_empty() {
            continue;
        }
        let mut cur = Cursor { text: raw, chars: raw.char_indices().peekable(), line: idx + 1 };
        let number = cur.int("component number")?;
        cur.one_of(&[':'], "`:`")?;
        let mut passages = Vec::new();
        while !cur.at_end() {
            let role = match cur.one_of(&['O', 'U'], "`O` or `U`")? {
                'O' => Role::Over,
                _ => Role::Under,
            };
            let id = cur.int("crossing id")?;
            let crossing = u32::try_from(id)
                .map_err(|_| GaussError::Syntax { line: cur.line, token: id.to_string(), expected: "crossing id" })?;
            let sign = match cur.one_of(&['+', '-'], "`+` or `-`")? {
                '+' => Sign::Plus,
                _ => Sign::Minus,
            };
            passages.push(Passage { crossing, role, sign });
        }
        lines.push((number, passages));
    }
    if lines.is_empty() {
        return Err(GaussError::ComponentNumbering("no components".into()));
    }
    for (expected, (number, _)) in (1u64..).zip(&lines) {
        if *number != expected {
            return Err(GaussError::ComponentNumbering(format!(
                "found component {number} where {expected} was expected"
            )));
        }
    }
    Ok(lines.into_iter().map(|(_, p)| p).collect())
}
