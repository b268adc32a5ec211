//! Textual web diagrams.
//!
//! Grammar, bit for bit:
//!
//! ```text
//! web n=<int> dom=[<int>,...] { <layer>* }
//! layer  ::=  "[" item ("," item)* "]"
//! item   ::=  id(<k>) | merge(<j>,<k>) | split(<j>,<k>) | ncap | ncup
//! ```
//!
//! Whitespace is free-form and `#` starts a comment that runs to the end of
//! the line. Syntax errors carry the 1-based line and column where scanning
//! stopped; structural problems (arity mismatches, oversized labels) come
//! back as validation errors naming the offending layer.

use crate::error::{Error, Result};
use crate::web::{Generator, Web, WebObject};

struct Scanner<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Scanner<'a> {
    fn new(src: &'a str) -> Scanner<'a> {
        Scanner { src: src.as_bytes(), pos: 0, line: 1, col: 1 }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { line: self.line, col: self.col, msg: msg.into() })
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_ascii_whitespace() {
                self.bump();
            } else if c == b'#' {
                while let Some(c) = self.peek() {
                    if c == b'\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn expect(&mut self, sym: u8) -> Result<()> {
        self.skip_trivia();
        match self.peek() {
            Some(c) if c == sym => {
                self.bump();
                Ok(())
            }
            Some(c) => self.err(format!("expected '{}', found '{}'", sym as char, c as char)),
            None => self.err(format!("expected '{}', found end of input", sym as char)),
        }
    }

    fn try_sym(&mut self, sym: u8) -> bool {
        self.skip_trivia();
        if self.peek() == Some(sym) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_trivia();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphabetic()) {
            self.bump();
        }
        if start == self.pos {
            return self.err("expected a name");
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn integer(&mut self) -> Result<usize> {
        self.skip_trivia();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.bump();
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("digits are ascii");
        text.parse().or_else(|_| self.err(format!("integer {text} is out of range")))
    }

    fn keyword(&mut self, word: &str) -> Result<()> {
        self.skip_trivia();
        let (line, col) = (self.line, self.col);
        let got = self.ident()?;
        if got != word {
            return Err(Error::Parse {
                line,
                col,
                msg: format!("expected '{word}', found '{got}'"),
            });
        }
        Ok(())
    }
}

fn parse_item(sc: &mut Scanner) -> Result<Generator> {
    sc.skip_trivia();
    let (line, col) = (sc.line, sc.col);
    let name = sc.ident()?;
    match name.as_str() {
        "ncap" => Ok(Generator::NCap),
        "ncup" => Ok(Generator::NCup),
        "id" => {
            sc.expect(b'(')?;
            let k = sc.integer()?;
            sc.expect(b')')?;
            Ok(Generator::Id(k))
        }
        "merge" | "split" => {
            sc.expect(b'(')?;
            let j = sc.integer()?;
            sc.expect(b',')?;
            let k = sc.integer()?;
            sc.expect(b')')?;
            Ok(if name == "merge" { Generator::Merge(j, k) } else { Generator::Split(j, k) })
        }
        other => Err(Error::Parse {
            line,
            col,
            msg: format!("unknown generator '{other}' (want id, merge, split, ncap, ncup)"),
        }),
    }
}

/// Parse one web declaration. Trailing whitespace and comments are fine;
/// anything else after the closing brace is an error.
pub fn parse(text: &str) -> Result<Web> {
    let mut sc = Scanner::new(text);
    sc.keyword("web")?;
    sc.keyword("n")?;
    sc.expect(b'=')?;
    let n = sc.integer()?;
    sc.keyword("dom")?;
    sc.expect(b'=')?;
    sc.expect(b'[')?;
    let mut dom = Vec::new();
    if !sc.try_sym(b']') {
        loop {
            dom.push(sc.integer()?);
            if sc.try_sym(b']') {
                break;
            }
            sc.expect(b',')?;
        }
    }
    sc.expect(b'{')?;
    let mut layers = Vec::new();
    loop {
        if sc.try_sym(b'}') {
            break;
        }
        sc.expect(b'[')?;
        let mut layer = vec![parse_item(&mut sc)?];
        while !sc.try_sym(b']') {
            sc.expect(b',')?;
            layer.push(parse_item(&mut sc)?);
        }
        layers.push(layer);
    }
    sc.skip_trivia();
    if sc.peek().is_some() {
        return sc.err("unexpected trailing input after the closing '}'");
    }
    Web::new(n, WebObject::new(dom), layers)
}
