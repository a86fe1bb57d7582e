//! Text grammar for scalars, Laurent polynomials in `t`, and carrier
//! vectors.  Shared by the CLI (configs, seeds) and the reports; parsing the
//! canonical `Display` output reproduces the value bit-exactly.
//!
//! ```text
//! scalar   := ['-'] sterm (('+'|'-') sterm)*
//! sterm    := sfactor ('*' sfactor)*
//! sfactor  := rational | name ['^' ['-'] integer]
//! rational := integer ['/' integer]
//!
//! tpoly    := ['-'] tterm (('+'|'-') tterm)*          ; Laurent poly in t
//! tterm    := (sfactor | 't' '^' ['-'] integer) ('*' …)*
//!
//! vector   := '0' | ['-'] vterm (('+'|'-') vterm)*
//! vterm    := (coefficient | basis-factor) ('*' …)*
//! coefficient := rational | name ['^' …] | '(' scalar ')'
//! basis-factor := 'xi'
//!               | 't' '^' ['-'] integer
//!               | aux-symbol '^' integer               ; 'Dt' or 'ddt'
//!               | '(' 't' ('-'|'+') rational ')' '^' '-' integer
//! ```
//!
//! Whitespace is free; `*` between factors is required.  Parameter names
//! must belong to the declared ring — undeclared names are rejected, which
//! keeps the per-family parameter sets from colliding.  Pole factors must
//! match one of the fraction family's poles; the pole at `0` is written as a
//! negative power of `t`.

use std::sync::Arc;

use num::bigint::BigInt;
use num::BigRational;
use num_traits::Zero;

use crate::carriers::{BasisIndex, FamilySpec, TPoly, Vector};
use crate::scalars::{ParamRing, Rational, SymScalar};
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Tokenizer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(input: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let mut chars = input.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                chars.next();
            }
            '+' => {
                chars.next();
                out.push(Tok::Plus);
            }
            '-' => {
                chars.next();
                out.push(Tok::Minus);
            }
            '*' => {
                chars.next();
                out.push(Tok::Star);
            }
            '/' => {
                chars.next();
                out.push(Tok::Slash);
            }
            '^' => {
                chars.next();
                out.push(Tok::Caret);
            }
            '(' => {
                chars.next();
                out.push(Tok::LParen);
            }
            ')' => {
                chars.next();
                out.push(Tok::RParen);
            }
            '0'..='9' => {
                let mut digits = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        digits.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                let n = digits
                    .parse::<BigInt>()
                    .map_err(|_| Error::Parse(format!("bad integer literal '{digits}'")))?;
                out.push(Tok::Int(n));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut name = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        name.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Tok::Ident(name));
            }
            other => {
                return Err(Error::Parse(format!("unexpected character '{other}'")));
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn new(input: &str) -> Result<Parser> {
        Ok(Parser { toks: tokenize(input)?, pos: 0 })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(Error::Parse(format!("expected {what}")))
        }
    }

    fn done(&self) -> bool {
        self.pos == self.toks.len()
    }

    /// `integer ['/' integer]` (sign handled by callers).
    fn rational(&mut self) -> Result<Rational> {
        let numer = match self.next() {
            Some(Tok::Int(n)) => n,
            _ => return Err(Error::Parse("expected a number".into())),
        };
        if self.eat(&Tok::Slash) {
            let denom = match self.next() {
                Some(Tok::Int(n)) if !n.is_zero() => n,
                Some(Tok::Int(_)) => return Err(Error::Parse("zero denominator".into())),
                _ => return Err(Error::Parse("expected a denominator".into())),
            };
            Ok(BigRational::new(numer, denom))
        } else {
            Ok(BigRational::from_integer(numer))
        }
    }

    /// `['-'] integer`, bounded to i64.
    fn exponent(&mut self) -> Result<i64> {
        let neg = self.eat(&Tok::Minus);
        match self.next() {
            Some(Tok::Int(n)) => {
                let v: i64 = i64::try_from(&n)
                    .map_err(|_| Error::Parse("exponent out of range".into()))?;
                Ok(if neg { -v } else { v })
            }
            _ => Err(Error::Parse("expected an exponent".into())),
        }
    }
}

// ---------------------------------------------------------------------------
// Scalars
// ---------------------------------------------------------------------------

fn param_factor(ring: &Arc<ParamRing>, name: &str, exp: i64) -> Result<SymScalar> {
    if matches!(name, "t" | "xi" | "Dt" | "ddt") {
        return Err(Error::Parse(format!(
            "'{name}' is a basis symbol, not a scalar parameter"
        )));
    }
    let exp32: i32 = exp
        .try_into()
        .map_err(|_| Error::Parse("parameter exponent out of range".into()))?;
    let param = SymScalar::param(ring, name).map_err(|_| {
        Error::Parse(format!("parameter '{name}' is not declared in this context"))
    })?;
    param.pow_int(exp32).map_err(|e| Error::Parse(e.to_string()))
}

impl Parser {
    /// One multiplicand of a scalar monomial.
    fn scalar_factor(&mut self, ring: &Arc<ParamRing>) -> Result<SymScalar> {
        match self.peek().cloned() {
            Some(Tok::Int(_)) => Ok(SymScalar::from_rational(ring, self.rational()?)),
            Some(Tok::Ident(name)) => {
                self.next();
                let exp = if self.eat(&Tok::Caret) { self.exponent()? } else { 1 };
                param_factor(ring, &name, exp)
            }
            _ => Err(Error::Parse("expected a number or parameter".into())),
        }
    }

    fn scalar_term(&mut self, ring: &Arc<ParamRing>) -> Result<SymScalar> {
        let mut acc = self.scalar_factor(ring)?;
        while self.eat(&Tok::Star) {
            acc = acc
                .try_mul(&self.scalar_factor(ring)?)
                .map_err(|e| Error::Parse(e.to_string()))?;
        }
        Ok(acc)
    }

    fn scalar(&mut self, ring: &Arc<ParamRing>) -> Result<SymScalar> {
        let mut acc = SymScalar::zero(ring);
        let mut negative = self.eat(&Tok::Minus);
        loop {
            let term = self.scalar_term(ring)?;
            let signed = if negative { term.neg() } else { term };
            acc = acc.try_add(&signed).map_err(|e| Error::Parse(e.to_string()))?;
            match self.peek() {
                Some(Tok::Plus) => {
                    self.next();
                    negative = false;
                }
                Some(Tok::Minus) => {
                    self.next();
                    negative = true;
                }
                _ => break,
            }
        }
        Ok(acc)
    }
}

/// Parses a scalar over the declared ring.
pub fn parse_scalar(ring: &Arc<ParamRing>, input: &str) -> Result<SymScalar> {
    let mut p = Parser::new(input)?;
    if p.toks == [Tok::Int(BigInt::zero())] {
        return Ok(SymScalar::zero(ring));
    }
    let s = p.scalar(ring)?;
    if !p.done() {
        return Err(Error::Parse("trailing input after scalar".into()));
    }
    Ok(s)
}

/// Parses a plain rational number (used by configuration fields).
pub fn parse_rational(input: &str) -> Result<Rational> {
    let mut p = Parser::new(input)?;
    let neg = p.eat(&Tok::Minus);
    let q = p.rational()?;
    if !p.done() {
        return Err(Error::Parse("trailing input after number".into()));
    }
    Ok(if neg { -q } else { q })
}

// ---------------------------------------------------------------------------
// Laurent polynomials in t
// ---------------------------------------------------------------------------

/// Parses a Laurent polynomial in `t` with scalar coefficients, e.g.
/// `t^1 + 1/2`, `alpha`, `2*t^-1 - t^0`.
pub fn parse_tpoly(ring: &Arc<ParamRing>, input: &str) -> Result<TPoly> {
    let mut p = Parser::new(input)?;
    if p.toks == [Tok::Int(BigInt::zero())] {
        return Ok(TPoly::zero());
    }
    let mut pairs: Vec<(i64, SymScalar)> = Vec::new();
    let mut negative = p.eat(&Tok::Minus);
    loop {
        let mut coeff = SymScalar::one(ring);
        let mut tpow: Option<i64> = None;
        loop {
            match p.peek().cloned() {
                Some(Tok::Ident(name)) if name == "t" => {
                    p.next();
                    // Bare `t` abbreviates `t^1`.
                    let e = if p.eat(&Tok::Caret) { p.exponent()? } else { 1 };
                    if tpow.replace(e).is_some() {
                        return Err(Error::Parse("repeated t-power in one term".into()));
                    }
                }
                Some(Tok::Int(_)) | Some(Tok::Ident(_)) => {
                    coeff = coeff
                        .try_mul(&p.scalar_factor(ring)?)
                        .map_err(|e| Error::Parse(e.to_string()))?;
                }
                _ => return Err(Error::Parse("expected a polynomial term".into())),
            }
            if !p.eat(&Tok::Star) {
                break;
            }
        }
        let signed = if negative { coeff.neg() } else { coeff };
        pairs.push((tpow.unwrap_or(0), signed));
        match p.peek() {
            Some(Tok::Plus) => {
                p.next();
                negative = false;
            }
            Some(Tok::Minus) => {
                p.next();
                negative = true;
            }
            None => break,
            _ => return Err(Error::Parse("trailing input after polynomial".into())),
        }
    }
    TPoly::from_pairs(pairs)
}

/// Renders a Laurent polynomial in the same grammar (`Display` companion).
pub fn tpoly_to_text(p: &TPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut parts: Vec<String> = Vec::new();
    for (k, c) in p.terms() {
        let coeff = if c.is_one() {
            String::new()
        } else if c.term_count() > 1 {
            format!("({c}) * ")
        } else {
            format!("{c} * ")
        };
        if *k == 0 && !coeff.is_empty() {
            parts.push(coeff.trim_end_matches(" * ").to_string());
        } else if *k == 0 {
            parts.push("1".into());
        } else {
            parts.push(format!("{coeff}t^{k}"));
        }
    }
    parts.join(" + ")
}

// ---------------------------------------------------------------------------
// Vectors
// ---------------------------------------------------------------------------

struct TermBuilder {
    coeff: SymScalar,
    parity: u8,
    tpow: Option<i64>,
    aux: Option<u32>,
    pole: Option<(usize, u32)>,
}

impl TermBuilder {
    fn new(ring: &Arc<ParamRing>) -> TermBuilder {
        TermBuilder {
            coeff: SymScalar::one(ring),
            parity: 0,
            tpow: None,
            aux: None,
            pole: None,
        }
    }

    fn into_index(self, family: &FamilySpec) -> Result<(BasisIndex, SymScalar)> {
        let tpow = self.tpow.unwrap_or(0);
        let aux = self.aux.unwrap_or(0);
        if let Some(cap) = family.aux_cap() {
            if aux > cap {
                return Err(Error::Parse(format!(
                    "{}^{aux} exceeds this family's bound {cap}",
                    family.aux_symbol()
                )));
            }
        }
        let idx = match family {
            FamilySpec::OmegaLambda { .. } => {
                if tpow != 0 {
                    return Err(Error::Parse(
                        "the rank-two-free basis has no t-power factor".into(),
                    ));
                }
                BasisIndex::t_aux(self.parity, 0, aux)
            }
            FamilySpec::Fraction { .. } => match self.pole {
                Some((slot, order)) => {
                    if tpow != 0 {
                        return Err(Error::Parse(
                            "a pole factor cannot be combined with a t-power".into(),
                        ));
                    }
                    BasisIndex::frac_pole(self.parity, slot, order, family.pole_arity())
                }
                None => BasisIndex::frac_t(self.parity, tpow, family.pole_arity()),
            },
            _ => {
                if self.pole.is_some() {
                    return Err(Error::Parse("pole factors need the fraction family".into()));
                }
                BasisIndex::t_aux(self.parity, tpow, aux)
            }
        };
        Ok((idx, self.coeff))
    }
}

impl Parser {
    /// `'(' 't' ('-'|'+') rational ')' '^' '-' integer`, matched against the
    /// family's pole list.
    fn pole_factor(&mut self, family: &FamilySpec) -> Result<(usize, u32)> {
        self.expect(Tok::LParen, "'('")?;
        match self.next() {
            Some(Tok::Ident(name)) if name == "t" => {}
            _ => return Err(Error::Parse("expected 't' in pole factor".into())),
        }
        let plus = match self.next() {
            Some(Tok::Minus) => false,
            Some(Tok::Plus) => true,
            _ => return Err(Error::Parse("expected '+' or '-' in pole factor".into())),
        };
        let magnitude = self.rational()?;
        let value = if plus { -magnitude } else { magnitude };
        self.expect(Tok::RParen, "')'")?;
        self.expect(Tok::Caret, "'^' after pole")?;
        let order = self.exponent()?;
        if order >= 0 {
            return Err(Error::Parse("pole factors carry negative exponents".into()));
        }
        let poles = match family {
            FamilySpec::Fraction { poles, .. } => poles,
            _ => return Err(Error::Parse("pole factors need the fraction family".into())),
        };
        if value.is_zero() {
            return Err(Error::Parse(
                "the pole at 0 is written as a negative power of t".into(),
            ));
        }
        let slot = poles
            .iter()
            .position(|b| *b == value)
            .ok_or_else(|| Error::Parse(format!("no pole at {value} in this family")))?;
        let order: u32 = (-order)
            .try_into()
            .map_err(|_| Error::Parse("pole order out of range".into()))?;
        Ok((slot, order))
    }

    fn vector_term(
        &mut self,
        family: &FamilySpec,
        ring: &Arc<ParamRing>,
        negative: bool,
    ) -> Result<(BasisIndex, SymScalar)> {
        let mut term = TermBuilder::new(ring);
        if negative {
            term.coeff = term.coeff.neg();
        }
        loop {
            match self.peek().cloned() {
                Some(Tok::LParen) => {
                    // Pole factor begins "(t -" / "(t +"; anything else in
                    // parentheses is a scalar coefficient.
                    let is_pole = matches!(self.peek2(), Some(Tok::Ident(n)) if n == "t")
                        && matches!(self.toks.get(self.pos + 2), Some(Tok::Minus | Tok::Plus));
                    if is_pole {
                        let p = self.pole_factor(family)?;
                        if term.pole.replace(p).is_some() {
                            return Err(Error::Parse("repeated pole factor".into()));
                        }
                    } else {
                        self.next();
                        let s = self.scalar(ring)?;
                        self.expect(Tok::RParen, "')'")?;
                        term.coeff =
                            term.coeff.try_mul(&s).map_err(|e| Error::Parse(e.to_string()))?;
                    }
                }
                Some(Tok::Ident(name)) if name == "xi" => {
                    self.next();
                    if term.parity == 1 {
                        return Err(Error::Parse("repeated xi factor (xi² = 0)".into()));
                    }
                    term.parity = 1;
                }
                Some(Tok::Ident(name)) if name == "t" => {
                    self.next();
                    self.expect(Tok::Caret, "'^' after t")?;
                    let e = self.exponent()?;
                    if term.tpow.replace(e).is_some() {
                        return Err(Error::Parse("repeated t-power".into()));
                    }
                }
                Some(Tok::Ident(name)) if name == "Dt" || name == "ddt" => {
                    self.next();
                    if name != family.aux_symbol() || family.aux_cap() == Some(0) {
                        return Err(Error::Parse(format!(
                            "'{name}' is not a basis symbol of the {} family",
                            family.tag()
                        )));
                    }
                    self.expect(Tok::Caret, "'^' after operator symbol")?;
                    let e = self.exponent()?;
                    if e < 0 {
                        return Err(Error::Parse("operator powers are nonnegative".into()));
                    }
                    if term.aux.replace(e as u32).is_some() {
                        return Err(Error::Parse("repeated operator power".into()));
                    }
                }
                Some(Tok::Int(_)) | Some(Tok::Ident(_)) => {
                    let s = self.scalar_factor(ring)?;
                    term.coeff =
                        term.coeff.try_mul(&s).map_err(|e| Error::Parse(e.to_string()))?;
                }
                _ => return Err(Error::Parse("expected a vector term".into())),
            }
            if !self.eat(&Tok::Star) {
                break;
            }
        }
        term.into_index(family)
    }
}

/// Parses a vector over the given family and ring.
pub fn parse_vector(
    family: &Arc<FamilySpec>,
    ring: &Arc<ParamRing>,
    input: &str,
) -> Result<Vector> {
    let mut p = Parser::new(input)?;
    if p.toks == [Tok::Int(BigInt::zero())] {
        return Ok(Vector::zero(family, ring));
    }
    let mut v = Vector::zero(family, ring);
    let mut negative = p.eat(&Tok::Minus);
    loop {
        let (idx, coeff) = p.vector_term(family, ring, negative)?;
        v.add_term(idx, coeff);
        match p.peek() {
            Some(Tok::Plus) => {
                p.next();
                negative = p.eat(&Tok::Minus);
            }
            Some(Tok::Minus) => {
                p.next();
                negative = !p.eat(&Tok::Minus);
            }
            None => break,
            _ => return Err(Error::Parse("trailing input after vector".into())),
        }
    }
    Ok(v)
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat;

    fn ring() -> Arc<ParamRing> {
        ParamRing::new(&["b", "lambda"]).unwrap()
    }

    #[test]
    fn scalar_round_trips_canonical_text() {
        let r = ring();
        for text in [
            "0",
            "1",
            "-1",
            "3/2",
            "b",
            "-2*b^2",
            "b - 2*b^2",
            "lambda^-3",
            "1/2 + lambda",
            "2*b*lambda^2",
        ] {
            let parsed = parse_scalar(&r, text).unwrap();
            assert_eq!(parsed.to_string(), text, "canonical form of '{text}'");
            let reparsed = parse_scalar(&r, &parsed.to_string()).unwrap();
            assert_eq!(parsed, reparsed);
        }
    }

    #[test]
    fn scalar_rejects_undeclared_parameters() {
        let r = ParamRing::numeric();
        assert!(matches!(parse_scalar(&r, "b"), Err(Error::Parse(_))));
        let r2 = ring();
        assert!(matches!(parse_scalar(&r2, "mu"), Err(Error::Parse(_))));
        // Negative powers need a formally invertible parameter.
        assert!(parse_scalar(&r2, "b^-1").is_err());
        assert!(parse_scalar(&r2, "lambda^-1").is_ok());
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("-2").unwrap(), rat(-2, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn tpoly_round_trips() {
        let r = ring();
        for text in ["0", "1", "t^1", "t^1 + 1/2", "2 * t^-1 + t^3", "b * t^2"] {
            let parsed = parse_tpoly(&r, text).unwrap();
            let rendered = tpoly_to_text(&parsed);
            let reparsed = parse_tpoly(&r, &rendered).unwrap();
            assert_eq!(parsed, reparsed, "round trip of '{text}' via '{rendered}'");
        }
    }

    #[test]
    fn vector_round_trips_on_every_family() {
        let r = ring();
        let families: Vec<Arc<FamilySpec>> = vec![
            Arc::new(FamilySpec::laurent(TPoly::zero())),
            Arc::new(FamilySpec::omega(SymScalar::param(&r, "lambda").unwrap()).unwrap()),
            Arc::new(FamilySpec::degree_two(TPoly::monomial(1, SymScalar::one(&r)))),
            Arc::new(FamilySpec::degree_n(3).unwrap()),
            Arc::new(
                FamilySpec::fraction(vec![rat(0, 1), rat(1, 1), rat(-1, 2)], vec![
                    rat(1, 2),
                    rat(1, 2),
                    rat(1, 1),
                ])
                .unwrap(),
            ),
        ];
        let samples: Vec<Vec<&str>> = vec![
            vec!["t^0", "3/2 * xi*t^-2", "t^1 + -1 * xi*t^0", "(b - 2*b^2) * xi*t^3"],
            vec!["Dt^0", "xi*Dt^4", "lambda * Dt^1 + Dt^2"],
            vec!["t^0*Dt^0", "xi*t^-1*Dt^1", "2 * t^2*Dt^0"],
            vec!["t^0*ddt^0", "xi*t^1*ddt^2", "t^-2*ddt^1"],
            vec!["t^0", "(t-1)^-2", "xi*(t+1/2)^-1", "t^-3 + 2 * (t-1)^-1"],
        ];
        for (family, texts) in families.iter().zip(samples) {
            for text in texts {
                let v = parse_vector(family, &r, text).unwrap();
                let rendered = v.to_string();
                let reparsed = parse_vector(family, &r, &rendered).unwrap();
                assert_eq!(v, reparsed, "round trip of '{text}' via '{rendered}'");
            }
        }
    }

    #[test]
    fn printer_output_is_fixed_point_of_parsing() {
        let r = ring();
        let family = Arc::new(FamilySpec::laurent(TPoly::zero()));
        let text = "3/2 * t^2 + (b - 2*b^2) * xi*t^0";
        let v = parse_vector(&family, &r, text).unwrap();
        assert_eq!(v.to_string(), text);
    }

    #[test]
    fn vector_parser_rejects_malformed_input() {
        let r = ring();
        let laurent = Arc::new(FamilySpec::laurent(TPoly::zero()));
        let degree_n = Arc::new(FamilySpec::degree_n(2).unwrap());
        let fraction = Arc::new(
            FamilySpec::fraction(vec![rat(0, 1), rat(1, 1)], vec![rat(1, 2), rat(1, 2)]).unwrap(),
        );
        // Unknown parameter, doubled xi, missing exponent, wrong aux symbol,
        // aux beyond cap, unknown pole, pole at zero.
        assert!(parse_vector(&laurent, &r, "mu * t^0").is_err());
        assert!(parse_vector(&laurent, &r, "xi*xi*t^0").is_err());
        assert!(parse_vector(&laurent, &r, "t").is_err());
        assert!(parse_vector(&laurent, &r, "Dt^1").is_err());
        assert!(parse_vector(&degree_n, &r, "t^0*Dt^1").is_err());
        assert!(parse_vector(&degree_n, &r, "t^0*ddt^2").is_err());
        assert!(parse_vector(&fraction, &r, "(t-3)^-1").is_err());
        assert!(parse_vector(&fraction, &r, "(t-0)^-1").is_err());
    }

    #[test]
    fn whitespace_and_sign_forms_are_flexible() {
        let r = ring();
        let family = Arc::new(FamilySpec::laurent(TPoly::zero()));
        let a = parse_vector(&family, &r, "t^1 - 2 * xi*t^0").unwrap();
        let b = parse_vector(&family, &r, "t^1 + -2*xi * t^0").unwrap();
        assert_eq!(a, b);
    }
}
