//! Recursive-descent parser for the polynomial grammar
//!
//! ```text
//! poly   := term (("+" | "-") term)*
//! term   := coeff? ("*"? factor)*
//! factor := "z" index ("^" uint)?
//! coeff  := int | int "/" uint
//! ```
//!
//! Whitespace is ignored everywhere, variable indices are 1-based and a sign
//! may precede the first term.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::Polynomial;
use crate::error::{Error, Result};
use crate::rational::Rational;

struct Cursor<'a> {
    /// Non-whitespace bytes paired with their offset in the source.
    chars: Vec<(usize, u8)>,
    pos: usize,
    source: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(source: &'a str) -> Self {
        let chars = source
            .bytes()
            .enumerate()
            .filter(|(_, b)| !b.is_ascii_whitespace())
            .collect();
        Cursor {
            chars,
            pos: 0,
            source,
        }
    }

    fn peek(&self) -> Option<u8> {
        self.chars.get(self.pos).map(|&(_, b)| b)
    }

    fn offset(&self) -> usize {
        self.chars
            .get(self.pos)
            .map_or(self.source.len(), |&(o, _)| o)
    }

    fn bump(&mut self) {
        self.pos += 1;
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.bump();
        }
        (self.pos > start).then(|| {
            self.chars[start..self.pos]
                .iter()
                .map(|&(_, b)| b as char)
                .collect()
        })
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::parse(self.offset(), message)
    }
}

pub(super) fn parse(text: &str, n: usize) -> Result<Polynomial> {
    let mut cur = Cursor::new(text);
    let mut terms: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();

    let mut negative = if cur.eat(b'-') {
        true
    } else {
        cur.eat(b'+');
        false
    };
    loop {
        let (exponents, mut coeff) = parse_term(&mut cur, n)?;
        if negative {
            coeff = -coeff;
        }
        let entry = terms.entry(exponents).or_insert_with(Rational::zero);
        *entry += coeff;

        match cur.peek() {
            None => break,
            Some(b'+') => negative = false,
            Some(b'-') => negative = true,
            Some(b) => return Err(cur.error(format!("unexpected character {:?}", b as char))),
        }
        cur.bump();
    }
    terms.retain(|_, c| !c.is_zero());
    Ok(Polynomial::from_terms_unchecked(n, terms))
}

fn parse_term(cur: &mut Cursor<'_>, n: usize) -> Result<(Vec<u32>, Rational)> {
    let start = cur.offset();
    let mut coeff = Rational::one();
    let mut seen_anything = false;

    if let Some(p) = cur.digits() {
        let p = BigInt::from_str(&p).expect("digits parse");
        let value = if cur.eat(b'/') {
            let q = cur
                .digits()
                .ok_or_else(|| cur.error("expected denominator"))?;
            let q = BigInt::from_str(&q).expect("digits parse");
            if q.is_zero() {
                return Err(cur.error("zero denominator"));
            }
            Rational::new(p, q)
        } else {
            Rational::from_integer(p)
        };
        coeff = value;
        seen_anything = true;
    }

    let mut exponents = vec![0u32; n];
    loop {
        let save = cur.pos;
        let star = cur.eat(b'*');
        if cur.peek() != Some(b'z') {
            if star {
                return Err(cur.error("expected variable after '*'"));
            }
            cur.pos = save;
            break;
        }
        if star && !seen_anything {
            return Err(Error::parse(start, "term cannot start with '*'"));
        }
        cur.bump();
        let index_offset = cur.offset();
        let index = cur
            .digits()
            .ok_or_else(|| cur.error("expected variable index"))?;
        let index: usize = index
            .parse()
            .map_err(|_| Error::parse(index_offset, "variable index too large"))?;
        if index == 0 || index > n {
            return Err(Error::VariableOutOfRange { index, n });
        }
        let power = if cur.eat(b'^') {
            let exp_offset = cur.offset();
            cur.digits()
                .ok_or_else(|| cur.error("expected exponent"))?
                .parse::<u32>()
                .map_err(|_| Error::parse(exp_offset, "exponent too large"))?
        } else {
            1
        };
        exponents[index - 1] = exponents[index - 1]
            .checked_add(power)
            .ok_or_else(|| cur.error("exponent too large"))?;
        seen_anything = true;
    }

    if !seen_anything {
        return Err(cur.error("expected a term"));
    }
    Ok((exponents, coeff))
}
