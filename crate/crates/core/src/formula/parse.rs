use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{Formula, FormulaError, Language, Term};
use crate::signature::Signature;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Bang,
    Amp,
    Pipe,
    Arrow,
    DArrow,
    Equals,
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize, usize)>, FormulaError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let step = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => step(1, &mut i, &mut col),
            '(' => {
                out.push((Tok::LParen, l0, c0));
                step(1, &mut i, &mut col);
            }
            ')' => {
                out.push((Tok::RParen, l0, c0));
                step(1, &mut i, &mut col);
            }
            ',' => {
                out.push((Tok::Comma, l0, c0));
                step(1, &mut i, &mut col);
            }
            '.' => {
                out.push((Tok::Dot, l0, c0));
                step(1, &mut i, &mut col);
            }
            '!' | '~' | '¬' => {
                out.push((Tok::Bang, l0, c0));
                step(1, &mut i, &mut col);
            }
            '&' | '∧' => {
                out.push((Tok::Amp, l0, c0));
                step(1, &mut i, &mut col);
            }
            '|' | '∨' => {
                out.push((Tok::Pipe, l0, c0));
                step(1, &mut i, &mut col);
            }
            '=' => {
                out.push((Tok::Equals, l0, c0));
                step(1, &mut i, &mut col);
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                out.push((Tok::Arrow, l0, c0));
                step(2, &mut i, &mut col);
            }
            '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                out.push((Tok::DArrow, l0, c0));
                step(3, &mut i, &mut col);
            }
            c if c.is_ascii_alphanumeric() || c == '_' || c == '$' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '$') {
                    i += 1;
                    col += 1;
                }
                out.push((Tok::Ident(chars[start..i].iter().collect()), l0, c0));
            }
            _ => {
                return Err(FormulaError::Syntax { line, column: col, message: format!("unexpected character `{c}`") })
            }
        }
    }
    out.push((Tok::End, line, col));
    Ok(out)
}

impl Lexer {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> FormulaError {
        let (_, line, column) = self.toks[self.pos];
        FormulaError::Syntax { line, column, message: message.into() }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), FormulaError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn iff(&mut self) -> Result<Formula, FormulaError> {
        let mut left = self.implication()?;
        while *self.peek() == Tok::DArrow {
            self.bump();
            let right = self.implication()?;
            left = Formula::iff(left, right);
        }
        Ok(left)
    }

    fn implication(&mut self) -> Result<Formula, FormulaError> {
        let left = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let right = self.implication()?;
            return Ok(Formula::implies(left, right));
        }
        Ok(left)
    }

    fn disjunction(&mut self) -> Result<Formula, FormulaError> {
        let mut left = self.conjunction()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            left = Formula::or(left, self.conjunction()?);
        }
        Ok(left)
    }

    fn conjunction(&mut self) -> Result<Formula, FormulaError> {
        let mut left = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            left = Formula::and(left, self.unary()?);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula, FormulaError> {
        match self.peek().clone() {
            Tok::Bang => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Ident(k) if k == "forall" || k == "exists" => {
                self.bump();
                let v = match self.bump() {
                    Tok::Ident(v) if !is_keyword(&v) => v,
                    _ => return Err(self.error("expected a variable after quantifier")),
                };
                if *self.peek() == Tok::Dot {
                    self.bump();
                }
                let body = Box::new(self.iff()?);
                Ok(if k == "forall" { Formula::Forall(v, body) } else { Formula::Exists(v, body) })
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, FormulaError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.iff()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Ident(k) if k == "true" => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::Ident(_) => {
                let is_call = *self.peek2() == Tok::LParen;
                let t = self.term()?;
                if *self.peek() == Tok::Equals {
                    self.bump();
                    let r = self.term()?;
                    return Ok(Formula::Eq(t, r));
                }
                match t {
                    Term::App(p, args) if is_call => Ok(Formula::Atom(p, args)),
                    _ => Err(self.error("expected `=` after a term")),
                }
            }
            _ => Err(self.error("expected a formula")),
        }
    }

    fn term(&mut self) -> Result<Term, FormulaError> {
        let name = match self.bump() {
            Tok::Ident(n) if !is_keyword(&n) => n,
            _ => {
                self.pos = self.pos.saturating_sub(1);
                return Err(self.error("expected a term"));
            }
        };
        if *self.peek() != Tok::LParen {
            return Ok(Term::Var(name));
        }
        self.bump();
        let mut args = Vec::new();
        if *self.peek() != Tok::RParen {
            loop {
                args.push(self.term()?);
                if *self.peek() == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RParen, "`)` or `,`")?;
        Ok(Term::App(name, args))
    }
}

fn is_keyword(s: &str) -> bool {
    matches!(s, "forall" | "exists" | "true")
}

/// Parses without a signature. Bare identifiers become variables, and
/// `name(...)` is an atom unless followed by `=`.
pub fn parse_formula_unchecked(text: &str) -> Result<Formula, FormulaError> {
    let mut lx = Lexer { toks: lex(text)?, pos: 0 };
    let f = lx.iff()?;
    if *lx.peek() != Tok::End {
        return Err(lx.error("unexpected trailing input"));
    }
    Ok(f)
}

/// Parses `text` over `sig`, resolving constants and checking arities and
/// the identity restriction of `lang`.
pub fn parse_formula(text: &str, sig: &Signature, lang: Language) -> Result<Formula, FormulaError> {
    let f = resolve_constants(&parse_formula_unchecked(text)?, sig, &mut Vec::new());
    f.check(sig, lang)?;
    Ok(f)
}

fn resolve_term(t: &Term, sig: &Signature, bound: &[String]) -> Term {
    match t {
        Term::Var(v) if !bound.contains(v) && sig.function(v).is_some() => Term::App(v.clone(), Vec::new()),
        Term::Var(_) => t.clone(),
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| resolve_term(a, sig, bound)).collect()),
    }
}

fn resolve_constants(f: &Formula, sig: &Signature, bound: &mut Vec<String>) -> Formula {
    match f {
        Formula::True => Formula::True,
        Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(|t| resolve_term(t, sig, bound)).collect()),
        Formula::Eq(l, r) => Formula::Eq(resolve_term(l, sig, bound), resolve_term(r, sig, bound)),
        Formula::Not(a) => Formula::not(resolve_constants(a, sig, bound)),
        Formula::And(a, b) => Formula::and(resolve_constants(a, sig, bound), resolve_constants(b, sig, bound)),
        Formula::Or(a, b) => Formula::or(resolve_constants(a, sig, bound), resolve_constants(b, sig, bound)),
        Formula::Implies(a, b) => Formula::implies(resolve_constants(a, sig, bound), resolve_constants(b, sig, bound)),
        Formula::Iff(a, b) => Formula::iff(resolve_constants(a, sig, bound), resolve_constants(b, sig, bound)),
        Formula::Forall(v, a) | Formula::Exists(v, a) => {
            bound.push(v.clone());
            let body = resolve_constants(a, sig, bound);
            bound.pop();
            match f {
                Formula::Forall(..) => Formula::forall(v, body),
                _ => Formula::exists(v, body),
            }
        }
    }
}

impl core::str::FromStr for Formula {
    type Err = FormulaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula_unchecked(s)
    }
}
