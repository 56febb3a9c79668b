//! Dirac-notation parser and printer.
//!
//! Grammar (whitespace insignificant, positions are 0-based byte offsets):
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := coeff? atom
//! atom   := ket | '(' expr ')' | '[' expr ']'
//! ket    := '|' [01]+ ('⟩'|'>')
//! coeff  := factor ('*'? factor)*
//! factor := '-' factor | decimal | int '/' int | 'i'
//!         | 'w' ('^' int)? | 'sqrt(' int ')' | '1/sqrt(' int ')'
//! ```
//!
//! `w` is reserved for the primitive cube root of unity `exp(2πi/3)`.
//! Both `>` and `⟩` close a ket; `()` and `[]` group interchangeably.
//! Implicit multiplication between factors is allowed only when the next
//! factor does not start with a digit, so stripping every space from a
//! parseable expression never changes its meaning (`2 2` would otherwise
//! collapse into `22`; write `2*2`).
//!
//! Amplitudes accumulate per basis index, leftmost ket character = party A
//! = most significant bit, then the state is normalized under the lenient
//! constructor rule (`parse_strict` applies the 1e-6 gate instead).

use num_complex::Complex64;

use crate::catalog::{OMEGA, OMEGA2};
use crate::error::{Error, Result};
use crate::state::StateVector;

/// Abstract syntax of a ket expression. Coefficients are folded to
/// complex values during parsing; the literal sub-grammar is closed.
#[derive(Debug, Clone, PartialEq)]
pub enum KetExpr {
    Sum(Vec<KetExpr>),
    Scaled(Complex64, Box<KetExpr>),
    Ket(String),
    Group(Box<KetExpr>),
}

/// Parses an expression into a normalized state (lenient normalization).
pub fn parse(text: &str) -> Result<StateVector> {
    let (expr, n) = parse_expr(text)?;
    StateVector::from_amplitudes(n, evaluate(&expr, n))
}

/// Parses with the strict norm gate: inputs whose norm deviates from 1 by
/// 1e-6 or more are rejected instead of renormalized.
pub fn parse_strict(text: &str) -> Result<StateVector> {
    let (expr, n) = parse_expr(text)?;
    StateVector::from_amplitudes_strict(n, evaluate(&expr, n))
}

/// Parses to the AST, returning the qubit count alongside.
pub fn parse_expr(text: &str) -> Result<(KetExpr, usize)> {
    let mut parser = Parser::new(text);
    parser.skip_ws();
    let expr = parser.expr()?;
    parser.skip_ws();
    if let Some(ch) = parser.peek() {
        return Err(parser.error(format!("unexpected '{ch}' after expression")));
    }
    let n = parser
        .ket_len
        .ok_or_else(|| parser.error("expression contains no ket".to_string()))?;
    Ok((expr, n))
}

fn evaluate(expr: &KetExpr, n: usize) -> Vec<Complex64> {
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    accumulate(expr, Complex64::new(1.0, 0.0), &mut amps);
    amps
}

fn accumulate(expr: &KetExpr, scale: Complex64, amps: &mut [Complex64]) {
    match expr {
        KetExpr::Sum(terms) => {
            for term in terms {
                accumulate(term, scale, amps);
            }
        }
        KetExpr::Scaled(coeff, inner) => accumulate(inner, scale * coeff, amps),
        KetExpr::Group(inner) => accumulate(inner, scale, amps),
        KetExpr::Ket(bits) => {
            let index = bits
                .chars()
                .fold(0usize, |acc, ch| (acc << 1) | (ch == '1') as usize);
            amps[index] += scale;
        }
    }
}

struct Parser {
    chars: Vec<(usize, char)>,
    len_bytes: usize,
    pos: usize,
    ket_len: Option<usize>,
}

impl Parser {
    fn new(text: &str) -> Self {
        Parser {
            chars: text.char_indices().collect(),
            len_bytes: text.len(),
            pos: 0,
            ket_len: None,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn byte_pos(&self) -> usize {
        self.chars
            .get(self.pos)
            .map_or(self.len_bytes, |&(b, _)| b)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn error(&self, message: String) -> Error {
        Error::Syntax {
            position: self.byte_pos(),
            message,
        }
    }

    fn expr(&mut self) -> Result<KetExpr> {
        let mut terms = vec![self.term()?];
        loop {
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.bump();
                    terms.push(self.term()?);
                }
                Some('-') => {
                    self.bump();
                    let term = self.term()?;
                    terms.push(KetExpr::Scaled(Complex64::new(-1.0, 0.0), Box::new(term)));
                }
                Some(')') | Some(']') | None => break,
                Some(ch) => {
                    return Err(self.error(format!("expected '+', '-', or end, found '{ch}'")))
                }
            }
        }
        if terms.len() == 1 {
            Ok(terms.pop().expect("one term"))
        } else {
            Ok(KetExpr::Sum(terms))
        }
    }

    fn term(&mut self) -> Result<KetExpr> {
        self.skip_ws();
        let coeff = self.coeff()?;
        self.skip_ws();
        let atom = self.atom()?;
        Ok(match coeff {
            Some(value) => KetExpr::Scaled(value, Box::new(atom)),
            None => atom,
        })
    }

    fn atom(&mut self) -> Result<KetExpr> {
        self.skip_ws();
        match self.peek() {
            Some('|') => self.ket(),
            Some(open @ ('(' | '[')) => {
                self.bump();
                let inner = self.expr()?;
                self.skip_ws();
                let close = if open == '(' { ')' } else { ']' };
                match self.bump() {
                    Some(c) if c == close => Ok(KetExpr::Group(Box::new(inner))),
                    _ => Err(self.error(format!("expected '{close}'"))),
                }
            }
            Some(ch) => Err(self.error(format!("expected a ket or group, found '{ch}'"))),
            None => Err(self.error("expected a ket or group, found end of input".to_string())),
        }
    }

    fn ket(&mut self) -> Result<KetExpr> {
        let start = self.byte_pos();
        self.bump(); // '|'
        let mut bits = String::new();
        while let Some(c @ ('0' | '1')) = self.peek() {
            bits.push(c);
            self.bump();
        }
        if bits.is_empty() {
            return Err(self.error("expected binary digits inside ket".to_string()));
        }
        match self.bump() {
            Some('>') | Some('⟩') => {}
            _ => return Err(self.error("expected '⟩' or '>' closing the ket".to_string())),
        }
        if bits.len() > crate::state::MAX_QUBITS {
            return Err(Error::UnsupportedSize {
                n: bits.len(),
                min: 1,
                max: crate::state::MAX_QUBITS,
            });
        }
        match self.ket_len {
            None => self.ket_len = Some(bits.len()),
            Some(expected) if expected != bits.len() => {
                return Err(Error::MixedKetLength {
                    position: start,
                    expected,
                    got: bits.len(),
                })
            }
            Some(_) => {}
        }
        Ok(KetExpr::Ket(bits))
    }

    /// Parses an optional coefficient: a product of factors. Juxtaposition
    /// stands for multiplication except before a digit, which requires an
    /// explicit '*'.
    fn coeff(&mut self) -> Result<Option<Complex64>> {
        self.skip_ws();
        if !self.at_factor_start() {
            return Ok(None);
        }
        let mut value = self.factor()?;
        loop {
            self.skip_ws();
            if self.peek() == Some('*') {
                self.bump();
                self.skip_ws();
                if self.at_factor_start() {
                    value *= self.factor()?;
                } else if matches!(self.peek(), Some('|') | Some('(') | Some('[')) {
                    // '*' may also separate the coefficient from its atom.
                    break;
                } else {
                    return Err(self.error("expected a factor after '*'".to_string()));
                }
            } else if self.at_factor_start()
                && !matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == '.')
            {
                value *= self.factor()?;
            } else {
                break;
            }
        }
        Ok(Some(value))
    }

    fn at_factor_start(&self) -> bool {
        matches!(
            self.peek(),
            Some('-') | Some('i') | Some('w') | Some('s') | Some('.')
        ) || matches!(self.peek(), Some(c) if c.is_ascii_digit())
    }

    fn factor(&mut self) -> Result<Complex64> {
        self.skip_ws();
        match self.peek() {
            Some('-') => {
                self.bump();
                self.skip_ws();
                // A bare sign before an atom acts as -1.
                if matches!(self.peek(), Some('|') | Some('(') | Some('[')) {
                    return Ok(Complex64::new(-1.0, 0.0));
                }
                if !self.at_factor_start() {
                    return Err(self.error("expected a factor after '-'".to_string()));
                }
                Ok(-self.factor()?)
            }
            Some('i') => {
                self.bump();
                Ok(Complex64::new(0.0, 1.0))
            }
            Some('w') => {
                self.bump();
                if self.peek() == Some('^') {
                    self.bump();
                    let k = self.unsigned_int()?;
                    Ok(omega_pow(k))
                } else {
                    Ok(OMEGA)
                }
            }
            Some('s') => {
                self.keyword("sqrt")?;
                self.expect('(')?;
                let k = self.unsigned_int()?;
                self.expect(')')?;
                Ok(Complex64::new((k as f64).sqrt(), 0.0))
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            _ => Err(self.error("expected a coefficient factor".to_string())),
        }
    }

    /// A decimal, an integer fraction `n/m`, or `n/sqrt(k)`.
    fn number(&mut self) -> Result<Complex64> {
        let (value, is_integer) = self.decimal()?;
        if is_integer && self.peek() == Some('/') {
            self.bump();
            self.skip_ws();
            if self.peek() == Some('s') {
                self.keyword("sqrt")?;
                self.expect('(')?;
                let k = self.unsigned_int()?;
                self.expect(')')?;
                if k == 0 {
                    return Err(self.error("division by sqrt(0)".to_string()));
                }
                return Ok(Complex64::new(value / (k as f64).sqrt(), 0.0));
            }
            let denominator = self.unsigned_int()?;
            if denominator == 0 {
                return Err(self.error("division by zero".to_string()));
            }
            return Ok(Complex64::new(value / denominator as f64, 0.0));
        }
        Ok(Complex64::new(value, 0.0))
    }

    fn decimal(&mut self) -> Result<(f64, bool)> {
        let start_byte = self.byte_pos();
        let start_pos = self.pos;
        let mut is_integer = true;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.bump();
        }
        if self.peek() == Some('.') {
            is_integer = false;
            self.bump();
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.bump();
            }
        }
        if matches!(self.peek(), Some('e') | Some('E')) {
            // Exponent only when digits follow (possibly signed).
            let mark = self.pos;
            self.bump();
            if matches!(self.peek(), Some('+') | Some('-')) {
                self.bump();
            }
            if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                is_integer = false;
                while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                    self.bump();
                }
            } else {
                self.pos = mark;
            }
        }
        if self.pos == start_pos {
            return Err(self.error("expected a number".to_string()));
        }
        let end_byte = self.byte_pos();
        let slice: String = self.chars[start_pos..self.pos].iter().map(|&(_, c)| c).collect();
        let value: f64 = slice.parse().map_err(|_| Error::Syntax {
            position: start_byte,
            message: format!("invalid number '{slice}' at bytes {start_byte}..{end_byte}"),
        })?;
        Ok((value, is_integer))
    }

    fn unsigned_int(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.bump();
        }
        if self.pos == start {
            return Err(self.error("expected an integer".to_string()));
        }
        let slice: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
        slice
            .parse()
            .map_err(|_| self.error(format!("integer '{slice}' out of range")))
    }

    fn keyword(&mut self, word: &str) -> Result<()> {
        for expected in word.chars() {
            match self.bump() {
                Some(c) if c == expected => {}
                _ => return Err(self.error(format!("expected '{word}'"))),
            }
        }
        Ok(())
    }

    fn expect(&mut self, expected: char) -> Result<()> {
        self.skip_ws();
        match self.bump() {
            Some(c) if c == expected => Ok(()),
            _ => Err(self.error(format!("expected '{expected}'"))),
        }
    }
}

fn omega_pow(k: u64) -> Complex64 {
    match k % 3 {
        0 => Complex64::new(1.0, 0.0),
        1 => OMEGA,
        _ => OMEGA2,
    }
}

/// Renders a state as a parseable expression: one term per nonzero real
/// part and one per nonzero imaginary part, basis-index order, magnitudes
/// to 12 significant digits. Amplitudes with `|c| ≤ threshold` are
/// dropped; an empty expansion renders as `"0"`.
pub fn print(state: &StateVector, threshold: f64) -> String {
    let n = state.n_qubits();
    let mut out = String::new();
    let push_term = |value: f64, suffix: &str, bits: &str, out: &mut String| {
        if out.is_empty() {
            if value < 0.0 {
                out.push('-');
            }
        } else if value < 0.0 {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(&format_significant(value.abs()));
        out.push_str(suffix);
        out.push('|');
        out.push_str(bits);
        out.push('>');
    };
    for index in 0..state.dim() {
        let amp = state.amplitude(index);
        if amp.norm() <= threshold {
            continue;
        }
        let bits: String = (0..n)
            .map(|q| {
                if (index >> (n - 1 - q)) & 1 == 1 {
                    '1'
                } else {
                    '0'
                }
            })
            .collect();
        if amp.re != 0.0 {
            push_term(amp.re, "", &bits, &mut out);
        }
        if amp.im != 0.0 {
            push_term(amp.im, "i", &bits, &mut out);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// 12 significant digits in plain decimal.
fn format_significant(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    format!("{:.*}", decimals, x)
}
