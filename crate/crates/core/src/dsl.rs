//! Textual form of block models.
//!
//! The grammar is small enough to parse by hand:
//!
//! ```text
//! operator  := "sum(" primitive ("," primitive)* ")"
//! primitive := "pole(" scalar "," "ord=" nat "," "rank=" rank ")"
//!            | "quasinil(" scalar ")"
//!            | "cluster(" scalar "," "r=" scalar "," "q=" scalar ["," "rank=" rank] ")"
//! rank      := "fin" | "inf"
//! ```
//!
//! Scalars are Gaussian rationals in the same spelling [`GaussianRational`]
//! prints: `3`, `-1/2`, `1/2+1/3i`, `-i`. Whitespace, including newlines, is
//! allowed between tokens. The optional `rank=` argument of `cluster` sets the
//! rank of each diagonal cell; it defaults to `fin` and the renderer omits it
//! in that case, so rendering always produces the shortest canonical spelling.
//!
//! Parsing validates the resulting model, so `parse_operator` only returns
//! models whose profile is well formed. [`render_operator`] inverts it:
//! `parse_operator(&render_operator(&m), depth) == Ok(m)`.

use std::fmt;

use crate::blocks::{BlockModel, PrimitiveBlock};
use crate::error::CalcError;
use crate::profile::Rank;
use crate::scalar::GaussianRational;

/// Why a piece of operator text was rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DslError {
    /// The text does not match the grammar. Positions are 1-based.
    Syntax { line: u32, col: u32, message: String },
    /// The text parsed, but the model it describes is not well formed.
    Validation(CalcError),
}

impl fmt::Display for DslError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DslError::Syntax { line, col, message } => {
                write!(f, "syntax error at {line}:{col}: {message}")
            }
            DslError::Validation(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for DslError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            DslError::Syntax { .. } => None,
            DslError::Validation(e) => Some(e),
        }
    }
}

impl From<CalcError> for DslError {
    fn from(e: CalcError) -> Self {
        DslError::Validation(e)
    }
}

/// An operator held together with the text it was parsed from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorSource {
    pub text: String,
    pub parsed: BlockModel,
}

impl OperatorSource {
    pub fn parse(text: &str, depth: u32) -> Result<Self, DslError> {
        let parsed = parse_operator(text, depth)?;
        Ok(OperatorSource { text: text.to_owned(), parsed })
    }
}

/// Parses operator text and validates the resulting model.
pub fn parse_operator(text: &str, depth: u32) -> Result<BlockModel, DslError> {
    let mut scanner = Scanner::new(text);
    scanner.skip_ws();
    scanner.keyword("sum")?;
    scanner.punct('(')?;
    let mut blocks = vec![scanner.primitive()?];
    loop {
        scanner.skip_ws();
        scanner.mark();
        match scanner.bump() {
            Some(',') => blocks.push(scanner.primitive()?),
            Some(')') => break,
            _ => return Err(scanner.err_at_token("expected `,` or `)`")),
        }
    }
    scanner.skip_ws();
    if !scanner.at_end() {
        return Err(scanner.err_here("trailing input after `)`"));
    }
    Ok(BlockModel::new(blocks, depth)?)
}

/// Renders a model in the canonical spelling the parser accepts.
pub fn render_operator(model: &BlockModel) -> String {
    let mut out = String::from("sum(");
    for (i, block) in model.blocks().iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        match block {
            PrimitiveBlock::JordanPole { lambda, order, rank } => {
                out.push_str(&format!("pole({lambda}, ord={order}, rank={})", rank_name(*rank)));
            }
            PrimitiveBlock::QuasiNil { lambda } => {
                out.push_str(&format!("quasinil({lambda})"));
            }
            PrimitiveBlock::ClusterDiag { limit, scale, ratio, rank_each } => {
                out.push_str(&format!("cluster({limit}, r={scale}, q={ratio}"));
                if *rank_each == Rank::Infinite {
                    out.push_str(", rank=inf");
                }
                out.push(')');
            }
        }
    }
    out.push(')');
    out
}

fn rank_name(r: Rank) -> &'static str {
    match r {
        Rank::Finite => "fin",
        Rank::Infinite => "inf",
    }
}

/// Characters that can appear inside a scalar token. The scanner takes the
/// maximal run of these and hands it to the scalar parser, so `1/2+1/3i` is
/// one token while `cluster(1, r=1, ...)` still splits at the comma.
fn scalar_char(c: char) -> bool {
    c.is_ascii_digit() || matches!(c, '/' | '+' | '-' | 'i')
}

struct Scanner<'a> {
    src: &'a str,
    rest: std::str::Chars<'a>,
    line: u32,
    col: u32,
    token_line: u32,
    token_col: u32,
}

impl<'a> Scanner<'a> {
    fn new(src: &'a str) -> Self {
        Scanner { src, rest: src.chars(), line: 1, col: 1, token_line: 1, token_col: 1 }
    }

    fn peek(&self) -> Option<char> {
        self.rest.clone().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.rest.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn at_end(&self) -> bool {
        self.peek().is_none()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.bump();
        }
    }

    /// Marks the current position as the start of the next token, so errors
    /// raised later point at the token rather than past it.
    fn mark(&mut self) {
        self.token_line = self.line;
        self.token_col = self.col;
    }

    fn err_here(&self, message: impl Into<String>) -> DslError {
        DslError::Syntax { line: self.line, col: self.col, message: message.into() }
    }

    fn err_at_token(&self, message: impl Into<String>) -> DslError {
        DslError::Syntax { line: self.token_line, col: self.token_col, message: message.into() }
    }

    fn ident(&mut self) -> String {
        self.mark();
        let mut word = String::new();
        while self.peek().is_some_and(|c| c.is_ascii_alphabetic() || c == '_') {
            word.push(self.bump().unwrap());
        }
        word
    }

    fn keyword(&mut self, expected: &str) -> Result<(), DslError> {
        self.skip_ws();
        let word = self.ident();
        if word == expected {
            Ok(())
        } else if word.is_empty() {
            Err(self.err_here(format!("expected `{expected}`")))
        } else {
            Err(self.err_at_token(format!("expected `{expected}`, found `{word}`")))
        }
    }

    fn punct(&mut self, expected: char) -> Result<(), DslError> {
        self.skip_ws();
        self.mark();
        match self.bump() {
            Some(c) if c == expected => Ok(()),
            Some(c) => Err(self.err_at_token(format!("expected `{expected}`, found `{c}`"))),
            None => Err(self.err_here(format!("expected `{expected}`, found end of input"))),
        }
    }

    /// Reads `name=` with optional whitespace around the `=`.
    fn named(&mut self, name: &str) -> Result<(), DslError> {
        self.keyword(name)?;
        self.punct('=')
    }

    fn scalar(&mut self) -> Result<GaussianRational, DslError> {
        self.skip_ws();
        self.mark();
        let offset = self.src.len() - self.rest.as_str().len();
        let mut len = 0;
        while self.peek().is_some_and(scalar_char) {
            len += self.bump().unwrap().len_utf8();
        }
        let token = &self.src[offset..offset + len];
        if token.is_empty() {
            return Err(self.err_here("expected a scalar"));
        }
        token
            .parse::<GaussianRational>()
            .map_err(|e| self.err_at_token(format!("bad scalar `{token}`: {e}")))
    }

    fn nat(&mut self) -> Result<u32, DslError> {
        self.skip_ws();
        self.mark();
        let mut digits = String::new();
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            digits.push(self.bump().unwrap());
        }
        if digits.is_empty() {
            return Err(self.err_here("expected a number"));
        }
        digits
            .parse::<u32>()
            .map_err(|_| self.err_at_token(format!("number `{digits}` is too large")))
    }

    fn rank(&mut self) -> Result<Rank, DslError> {
        self.skip_ws();
        let word = self.ident();
        match word.as_str() {
            "fin" => Ok(Rank::Finite),
            "inf" => Ok(Rank::Infinite),
            "" => Err(self.err_here("expected `fin` or `inf`")),
            other => Err(self.err_at_token(format!("expected `fin` or `inf`, found `{other}`"))),
        }
    }

    fn primitive(&mut self) -> Result<PrimitiveBlock, DslError> {
        self.skip_ws();
        let word = self.ident();
        match word.as_str() {
            "pole" => {
                self.punct('(')?;
                let lambda = self.scalar()?;
                self.punct(',')?;
                self.named("ord")?;
                let order = self.nat()?;
                self.punct(',')?;
                self.named("rank")?;
                let rank = self.rank()?;
                self.punct(')')?;
                Ok(PrimitiveBlock::JordanPole { lambda, order, rank })
            }
            "quasinil" => {
                self.punct('(')?;
                let lambda = self.scalar()?;
                self.punct(')')?;
                Ok(PrimitiveBlock::QuasiNil { lambda })
            }
            "cluster" => {
                self.punct('(')?;
                let limit = self.scalar()?;
                self.punct(',')?;
                self.named("r")?;
                let scale = self.scalar()?;
                self.punct(',')?;
                self.named("q")?;
                let ratio = self.scalar()?;
                self.skip_ws();
                let rank_each = match self.peek() {
                    Some(',') => {
                        self.bump();
                        self.named("rank")?;
                        self.rank()?
                    }
                    _ => Rank::Finite,
                };
                self.punct(')')?;
                Ok(PrimitiveBlock::ClusterDiag { limit, scale, ratio, rank_each })
            }
            "" => Err(self.err_here("expected `pole`, `quasinil`, or `cluster`")),
            other => Err(self.err_at_token(format!(
                "expected `pole`, `quasinil`, or `cluster`, found `{other}`"
            ))),
        }
    }
}
