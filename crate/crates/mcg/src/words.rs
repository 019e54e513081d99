//! Words in the generators and the expression grammar used by ledgers and
//! the command line.
//!
//! # Grammar
//!
//! A word is a whitespace- (or `*`-) separated sequence of factors, composed
//! like functions: **the rightmost factor acts first**. Each factor is an
//! atom with optional postfix operators:
//!
//! * atoms — `1` (the identity), a parenthesized word, a generator letter,
//!   or a name defined by a ledger `def` line;
//! * generator letters — twists `A`, `B`, `C`, `E`, `F`, `Gamma`, `alpha`,
//!   `D1`, `D2` (capital letters denote right-handed Dehn twists about the
//!   like-named curves), the crosscap transposition `u`, the puncture slide
//!   `v`, the crosscap slide `y`, the reflections `rho1..rho4`, and the
//!   chain rotation `T`;
//! * subscripts — immediate digits (`alpha3`, `u12`) or a braced expression
//!   (`u{r+5}`, `v{r+3,p}`) in which `r`, `g`, `p`, and any bound family
//!   variables may appear with `+`/`-` arithmetic;
//! * postfixes — `^n` and `^{expr}` for integer powers (negative powers
//!   invert), and `^(w)` for conjugation: `x^(w) = w x w^-1`.
//!
//! Words are kept freely reduced: adjacent mutually-inverse letters cancel.

use crate::model::{self, Generator, ModelError, SurfaceParams};
use std::collections::BTreeMap;
use std::fmt;

/// Errors raised while parsing word expressions.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WordError {
    /// The text is not well-formed; `pos` is a byte offset into the input.
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    /// A well-formed letter that names no generator at these parameters.
    #[error("unknown generator: {name}")]
    UnknownGenerator { name: String },
}

/// Named subwords usable as atoms (populated from ledger `def` lines).
pub type Defs = BTreeMap<String, Word>;

/// Values for family variables bound during ledger expansion.
pub type Bindings = BTreeMap<String, i64>;

/// A freely reduced word in the generators. Letters are listed left to
/// right with the **rightmost letter acting first**; each letter carries an
/// exponent of `+1` or `-1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<(Generator, i8)>,
}

impl Word {
    /// The empty word.
    pub fn identity() -> Self {
        Word::default()
    }

    /// Builds a word from letters, freely reducing.
    pub fn from_letters(letters: Vec<(Generator, i8)>) -> Self {
        let mut w = Word::default();
        for l in letters {
            w.push(l);
        }
        w
    }

    fn push(&mut self, letter: (Generator, i8)) {
        debug_assert!(letter.1 == 1 || letter.1 == -1);
        if let Some(top) = self.letters.last() {
            if top.0 == letter.0 && top.1 + letter.1 == 0 {
                self.letters.pop();
                return;
            }
        }
        self.letters.push(letter);
    }

    /// The reduced letter sequence.
    pub fn letters(&self) -> &[(Generator, i8)] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// The inverse word (letters reversed, exponents flipped).
    pub fn invert(&self) -> Word {
        Word {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|&(g, e)| (g, -e))
                .collect(),
        }
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.invert() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..n.unsigned_abs() {
            out = &out * &base;
        }
        out
    }

    /// `f · self · f^-1`.
    pub fn conjugated_by(&self, f: &Word) -> Word {
        &(f * self) * &f.invert()
    }
}

impl std::ops::Mul for &Word {
    type Output = Word;
    /// Composition `self · rhs` (rhs acts first).
    fn mul(self, rhs: &Word) -> Word {
        let mut out = self.clone();
        for &l in &rhs.letters {
            out.push(l);
        }
        out
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (idx, (g, e)) in self.letters.iter().enumerate() {
            if idx > 0 {
                write!(f, " ")?;
            }
            write!(f, "{g}")?;
            if *e < 0 {
                write!(f, "^-1")?;
            }
        }
        Ok(())
    }
}

/// Renders a word in the grammar (inverse letters as `^-1`, identity as `1`).
pub fn print(w: &Word) -> String {
    w.to_string()
}

/// Parses a word expression with no definitions or bindings in scope.
pub fn parse(params: &SurfaceParams, text: &str) -> Result<Word, WordError> {
    parse_with(params, text, &Defs::new(), &Bindings::new())
}

/// Parses a word expression; `defs` supplies named subwords and `bindings`
/// supplies values for family variables appearing in braced expressions.
pub fn parse_with(
    params: &SurfaceParams,
    text: &str,
    defs: &Defs,
    bindings: &Bindings,
) -> Result<Word, WordError> {
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
        params,
        defs,
        bindings,
    };
    let w = p.parse_word(0)?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(w)
}

/// Whether `name` is acceptable as a ledger definition name: it must not
/// collide with a generator letter (a fixed identifier plus optional digits).
pub fn valid_def_name(name: &str) -> bool {
    if name.is_empty() || name == "1" {
        return false;
    }
    let mut chars = name.chars();
    if !chars.next().is_some_and(|c| c.is_ascii_alphabetic()) {
        return false;
    }
    if !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return false;
    }
    split_fixed_ident(name).is_none()
}

const FIXED_IDENTS: [&str; 14] = [
    "Gamma", "alpha", "rho", "D1", "D2", "A", "B", "C", "E", "F", "T", "u", "v", "y",
];

/// Splits an alphanumeric run into fixed identifier + digit suffix, if that
/// decomposition exists.
fn split_fixed_ident(run: &str) -> Option<(&'static str, &str)> {
    for ident in FIXED_IDENTS {
        if let Some(rest) = run.strip_prefix(ident) {
            if rest.chars().all(|c| c.is_ascii_digit()) {
                return Some((ident, rest));
            }
        }
    }
    None
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    params: &'a SurfaceParams,
    defs: &'a Defs,
    bindings: &'a Bindings,
}

impl<'a> Parser<'a> {
    fn syntax(&self, msg: &str) -> WordError {
        WordError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ') | Some(b'\t') | Some(b'*')) {
            self.pos += 1;
        }
    }

    fn parse_word(&mut self, depth: usize) -> Result<Word, WordError> {
        if depth > 64 {
            return Err(self.syntax("expression nested too deeply"));
        }
        let mut out = Word::identity();
        loop {
            self.skip_ws();
            match self.peek() {
                None | Some(b')') => break,
                _ => {
                    let f = self.parse_factor(depth)?;
                    out = &out * &f;
                }
            }
        }
        Ok(out)
    }

    fn parse_factor(&mut self, depth: usize) -> Result<Word, WordError> {
        let mut w = self.parse_atom(depth)?;
        loop {
            self.skip_ws();
            if self.peek() != Some(b'^') {
                break;
            }
            self.pos += 1;
            self.skip_ws();
            match self.peek() {
                Some(b'(') => {
                    self.pos += 1;
                    let f = self.parse_word(depth + 1)?;
                    if self.peek() != Some(b')') {
                        return Err(self.syntax("expected ')' after conjugator"));
                    }
                    self.pos += 1;
                    w = w.conjugated_by(&f);
                }
                Some(b'{') => {
                    self.pos += 1;
                    let n = self.parse_iexpr()?;
                    if self.peek() != Some(b'}') {
                        return Err(self.syntax("expected '}' after exponent"));
                    }
                    self.pos += 1;
                    w = w.pow(n);
                }
                Some(c) if c == b'-' || c == b'+' || c.is_ascii_digit() => {
                    let n = self.parse_signed_int()?;
                    w = w.pow(n);
                }
                _ => return Err(self.syntax("expected an exponent after '^'")),
            }
        }
        Ok(w)
    }

    fn parse_atom(&mut self, depth: usize) -> Result<Word, WordError> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let w = self.parse_word(depth + 1)?;
                if self.peek() != Some(b')') {
                    return Err(self.syntax("expected ')'"));
                }
                self.pos += 1;
                Ok(w)
            }
            Some(b'1') => {
                self.pos += 1;
                if self.peek().is_some_and(|c| c.is_ascii_alphanumeric()) {
                    return Err(self.syntax("unexpected digits after '1'"));
                }
                Ok(Word::identity())
            }
            Some(c) if c.is_ascii_alphabetic() => self.parse_letter(),
            Some(_) => Err(self.syntax("expected a letter, '(', or '1'")),
            None => Err(self.syntax("unexpected end of input")),
        }
    }

    fn parse_letter(&mut self) -> Result<Word, WordError> {
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_')
        {
            self.pos += 1;
        }
        let run = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii run");
        if let Some((ident, digits)) = split_fixed_ident(run) {
            let mut idx: Option<i64> = if digits.is_empty() {
                None
            } else {
                Some(digits.parse().map_err(|_| self.syntax("index too large"))?)
            };
            let mut idx2: Option<i64> = None;
            if idx.is_none() && self.peek() == Some(b'{') {
                self.pos += 1;
                idx = Some(self.parse_iexpr()?);
                if self.peek() == Some(b',') {
                    self.pos += 1;
                    idx2 = Some(self.parse_iexpr()?);
                }
                if self.peek() != Some(b'}') {
                    return Err(self.syntax("expected '}' after subscript"));
                }
                self.pos += 1;
            }
            let gen = self.build_generator(ident, idx, idx2)?;
            return Ok(Word::from_letters(vec![(gen, 1)]));
        }
        if let Some(w) = self.defs.get(run) {
            return Ok(w.clone());
        }
        Err(WordError::UnknownGenerator { name: run.into() })
    }

    fn build_generator(
        &self,
        ident: &str,
        idx: Option<i64>,
        idx2: Option<i64>,
    ) -> Result<Generator, WordError> {
        use crate::model::CurveSymbol as Sym;
        let named = |suffix: &Option<i64>| match suffix {
            Some(i) => format!("{ident}{i}"),
            None => ident.to_string(),
        };
        let one_index = || -> Result<i64, WordError> {
            match (idx, idx2) {
                (Some(i), None) => Ok(i),
                (None, _) => Err(WordError::Syntax {
                    pos: self.pos,
                    msg: format!("'{ident}' needs a subscript"),
                }),
                _ => Err(WordError::Syntax {
                    pos: self.pos,
                    msg: format!("'{ident}' takes a single subscript"),
                }),
            }
        };
        let as_u32 = |i: i64| -> Result<u32, WordError> {
            u32::try_from(i).map_err(|_| WordError::UnknownGenerator { name: named(&idx) })
        };
        let gen = match ident {
            "T" | "y" => {
                if idx.is_some() {
                    return Err(WordError::Syntax {
                        pos: self.pos,
                        msg: format!("'{ident}' takes no subscript"),
                    });
                }
                if ident == "T" {
                    Generator::ChainRotation
                } else {
                    Generator::CrosscapSlide(1)
                }
            }
            "u" => Generator::CrosscapTransposition(as_u32(one_index()?)?),
            "rho" => {
                let i = one_index()?;
                let k = u8::try_from(i)
                    .map_err(|_| WordError::UnknownGenerator { name: named(&idx) })?;
                Generator::Reflection(k)
            }
            "v" => match (idx, idx2) {
                (Some(i), Some(j)) => Generator::PunctureSlide(as_u32(i)?, as_u32(j)?),
                _ => {
                    return Err(WordError::Syntax {
                        pos: self.pos,
                        msg: "'v' needs two subscripts: v{i,j}".into(),
                    })
                }
            },
            _ => {
                let i = as_u32(one_index()?)?;
                let sym = match ident {
                    "A" => Sym::a(i),
                    "B" => Sym::b(i),
                    "C" => Sym::c(i),
                    "E" => Sym::e(i),
                    "F" => Sym::f(i),
                    "Gamma" => Sym::gamma(i),
                    "alpha" => Sym::alpha(i),
                    "D1" => Sym::d1(i),
                    "D2" => Sym::d2(i),
                    _ => unreachable!("fixed identifier"),
                };
                Generator::Twist(sym)
            }
        };
        model::validate_generator(self.params, &gen).map_err(|e| match e {
            ModelError::UnknownGenerator { name } | ModelError::UnknownCurve { name } => {
                WordError::UnknownGenerator { name }
            }
            other => WordError::Syntax {
                pos: self.pos,
                msg: other.to_string(),
            },
        })?;
        Ok(gen)
    }

    fn parse_signed_int(&mut self) -> Result<i64, WordError> {
        let mut sign = 1i64;
        match self.peek() {
            Some(b'-') => {
                sign = -1;
                self.pos += 1;
            }
            Some(b'+') => {
                self.pos += 1;
            }
            _ => {}
        }
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.syntax("expected digits"));
        }
        let digits = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
        let n: i64 = digits
            .parse()
            .map_err(|_| self.syntax("integer too large"))?;
        Ok(sign * n)
    }

    /// `[sign] term {(+|-) term}` where a term is an integer or a variable
    /// (`r`, `g`, `p`, or a bound family variable).
    fn parse_iexpr(&mut self) -> Result<i64, WordError> {
        self.skip_ws();
        let mut total = 0i64;
        let mut sign = 1i64;
        match self.peek() {
            Some(b'-') => {
                sign = -1;
                self.pos += 1;
            }
            Some(b'+') => {
                self.pos += 1;
            }
            _ => {}
        }
        loop {
            self.skip_ws();
            total += sign * self.parse_iterm()?;
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    sign = 1;
                    self.pos += 1;
                }
                Some(b'-') => {
                    sign = -1;
                    self.pos += 1;
                }
                _ => break,
            }
        }
        Ok(total)
    }

    fn parse_iterm(&mut self) -> Result<i64, WordError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => self.parse_signed_int(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_alphanumeric()) {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii");
                match name {
                    "r" => Ok(self.params.r as i64),
                    "g" => Ok(self.params.g as i64),
                    "p" => Ok(self.params.p as i64),
                    _ => self.bindings.get(name).copied().ok_or_else(|| {
                        WordError::Syntax {
                            pos: start,
                            msg: format!("unknown variable '{name}'"),
                        }
                    }),
                }
            }
            _ => Err(self.syntax("expected an integer or variable")),
        }
    }
}
