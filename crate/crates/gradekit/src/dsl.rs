//! The text format for signatures and structures.
//!
//! ```text
//! signature { pred R/2; pred S/2; func f/1; const c; }
//! structure {
//!   domain = { a, b, c };
//!   R = { (a,b), (b,c) };
//!   edges S = { a-b };          # inserts (a,b) and (b,a)
//!   f = { a -> b, b -> b, c -> a };
//!   c = a;
//! }
//! ```
//!
//! Unary predicates may list bare elements (`P = { a, b }`). A random-generation
//! spec is a signature block followed by `density` lines:
//! `density = 0.5; density R = 0.2;`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use gradekit_core::signature::SignatureError;
use gradekit_core::{Diagnostics, RawStructure, Signature, Structure, Symbol};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("dsl: {line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("dsl: {0}")]
    Signature(#[from] SignatureError),
    #[error("dsl: invalid structure:\n{0}")]
    Invalid(Diagnostics),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Punct(&'static str),
    Eof,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, DslError> {
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
        } else if c == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                bump(&mut chars);
            }
        } else if c.is_ascii_alphanumeric() || c == '_' || c == '$' || c == '.' {
            let mut w = String::new();
            while chars.peek().is_some_and(|&c| c.is_ascii_alphanumeric() || c == '_' || c == '$' || c == '.') {
                w.push(bump(&mut chars));
            }
            out.push(Spanned { tok: Tok::Word(w), line: l, column: col });
        } else if c == '-' {
            bump(&mut chars);
            let p = if chars.peek() == Some(&'>') {
                bump(&mut chars);
                "->"
            } else {
                "-"
            };
            out.push(Spanned { tok: Tok::Punct(p), line: l, column: col });
        } else {
            let p = match c {
                '{' => "{",
                '}' => "}",
                '(' => "(",
                ')' => ")",
                ',' => ",",
                ';' => ";",
                '=' => "=",
                '/' => "/",
                other => {
                    return Err(DslError::Syntax { line: l, column: col, message: format!("unexpected character `{other}`") })
                }
            };
            bump(&mut chars);
            out.push(Spanned { tok: Tok::Punct(p), line: l, column: col });
        }
    }
    out.push(Spanned { tok: Tok::Eof, line, column });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

/// A structure description whose values are element names, before
/// sorting out which symbols are predicates and which are functions.
enum Item {
    Tuple(Vec<String>),
    Map(Vec<String>, String),
}

impl Parser {
    fn new(text: &str) -> Result<Self, DslError> {
        Ok(Parser { toks: lex(text)?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, DslError> {
        let t = &self.toks[self.pos];
        Err(DslError::Syntax { line: t.line, column: t.column, message: message.into() })
    }

    fn describe(&self) -> String {
        match self.peek() {
            Tok::Word(w) => format!("`{w}`"),
            Tok::Punct(p) => format!("`{p}`"),
            Tok::Eof => "end of input".into(),
        }
    }

    fn eat(&mut self, p: &str) -> bool {
        if matches!(self.peek(), Tok::Punct(q) if *q == p) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, p: &str) -> Result<(), DslError> {
        if self.eat(p) {
            Ok(())
        } else {
            self.err(format!("expected `{p}`, found {}", self.describe()))
        }
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Word(x) if x == w)
    }

    fn word(&mut self) -> Result<String, DslError> {
        match self.peek().clone() {
            Tok::Word(w) => {
                self.pos += 1;
                Ok(w)
            }
            _ => self.err(format!("expected a name, found {}", self.describe())),
        }
    }

    fn name(&mut self) -> Result<String, DslError> {
        let w = self.word()?;
        if w.contains('.') {
            self.pos -= 1;
            return self.err(format!("`{w}` is not a name"));
        }
        Ok(w)
    }

    fn keyword(&mut self, k: &str) -> Result<(), DslError> {
        if self.is_word(k) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected `{k}`, found {}", self.describe()))
        }
    }

    fn number<T: std::str::FromStr>(&mut self, what: &str) -> Result<T, DslError> {
        let w = self.word()?;
        w.parse().or_else(|_| {
            self.pos -= 1;
            self.err(format!("expected {what}, found `{w}`"))
        })
    }

    fn signature(&mut self) -> Result<Signature, DslError> {
        self.keyword("signature")?;
        self.expect("{")?;
        let (mut preds, mut funcs) = (Vec::new(), Vec::new());
        while !self.eat("}") {
            let kind = self.word()?;
            match kind.as_str() {
                "pred" | "func" => {
                    let n = self.name()?;
                    self.expect("/")?;
                    let a: usize = self.number("an arity")?;
                    if kind == "pred" { &mut preds } else { &mut funcs }.push(Symbol::new(n, a));
                }
                "const" => funcs.push(Symbol::new(self.name()?, 0)),
                _ => {
                    self.pos -= 1;
                    return self.err(format!("expected `pred`, `func`, `const` or `}}`, found `{kind}`"));
                }
            }
            if !self.eat(";") && !matches!(self.peek(), Tok::Punct("}")) {
                return self.err(format!("expected `;`, found {}", self.describe()));
            }
        }
        self.eat(";");
        Ok(Signature::new(preds, funcs)?)
    }

    fn tuple(&mut self) -> Result<Vec<String>, DslError> {
        if self.eat("(") {
            let mut t = Vec::new();
            if !self.eat(")") {
                loop {
                    t.push(self.name()?);
                    if self.eat(")") {
                        break;
                    }
                    self.expect(",")?;
                }
            }
            Ok(t)
        } else {
            Ok(vec![self.name()?])
        }
    }

    fn structure(&mut self, sig: Signature) -> Result<RawStructure, DslError> {
        self.keyword("structure")?;
        self.expect("{")?;
        let mut raw = RawStructure::new(sig);
        let mut domain_seen = false;
        while !self.eat("}") {
            if self.is_word("domain") {
                self.pos += 1;
                if domain_seen {
                    return self.err("domain declared twice");
                }
                domain_seen = true;
                self.expect("=")?;
                self.expect("{")?;
                if !self.eat("}") {
                    loop {
                        raw.domain.push(self.name()?);
                        if self.eat("}") {
                            break;
                        }
                        self.expect(",")?;
                    }
                }
            } else if self.is_word("edges") {
                self.pos += 1;
                let p = self.name()?;
                self.expect("=")?;
                self.expect("{")?;
                let entry = raw.predicates.entry(p).or_default();
                if !self.eat("}") {
                    loop {
                        let a = self.name()?;
                        self.expect("-")?;
                        let b = self.name()?;
                        entry.push(vec![a.clone(), b.clone()]);
                        if a != b {
                            entry.push(vec![b, a]);
                        }
                        if self.eat("}") {
                            break;
                        }
                        self.expect(",")?;
                    }
                }
            } else {
                let sym = self.name()?;
                self.expect("=")?;
                if self.eat("{") {
                    let mut items = Vec::new();
                    if !self.eat("}") {
                        loop {
                            let t = self.tuple()?;
                            items.push(if self.eat("->") { Item::Map(t, self.name()?) } else { Item::Tuple(t) });
                            if self.eat("}") {
                                break;
                            }
                            self.expect(",")?;
                        }
                    }
                    let is_func = raw.signature.function(&sym).is_some()
                        || (raw.signature.predicate(&sym).is_none() && items.iter().any(|i| matches!(i, Item::Map(..))));
                    for item in items {
                        match (item, is_func) {
                            (Item::Map(args, v), true) => raw.functions.entry(sym.clone()).or_default().push((args, v)),
                            (Item::Tuple(t), false) => raw.predicates.entry(sym.clone()).or_default().push(t),
                            (Item::Tuple(_), true) => return self.err(format!("`{sym}` is a function; entries need `->`")),
                            (Item::Map(..), false) => return self.err(format!("`{sym}` is a predicate; entries cannot use `->`")),
                        }
                    }
                    if is_func {
                        raw.functions.entry(sym).or_default();
                    } else {
                        raw.predicates.entry(sym).or_default();
                    }
                } else {
                    let v = self.name()?;
                    raw.functions.entry(sym).or_default().push((Vec::new(), v));
                }
            }
            if !self.eat(";") && !matches!(self.peek(), Tok::Punct("}")) {
                return self.err(format!("expected `;`, found {}", self.describe()));
            }
        }
        self.eat(";");
        Ok(raw)
    }

    fn end(&mut self) -> Result<(), DslError> {
        match self.peek() {
            Tok::Eof => Ok(()),
            _ => self.err(format!("unexpected {} after the last block", self.describe())),
        }
    }
}

/// Parses a signature block and a structure block without validating the
/// structure.
pub fn parse_raw_structure(text: &str) -> Result<RawStructure, DslError> {
    let mut p = Parser::new(text)?;
    let sig = p.signature()?;
    let raw = p.structure(sig)?;
    p.end()?;
    Ok(raw)
}

/// Parses and validates a structure.
pub fn parse_structure(text: &str) -> Result<Structure, DslError> {
    parse_raw_structure(text)?.build().map_err(DslError::Invalid)
}

/// Parses a lone signature block.
pub fn parse_signature(text: &str) -> Result<Signature, DslError> {
    let mut p = Parser::new(text)?;
    let sig = p.signature()?;
    p.end()?;
    Ok(sig)
}

/// Signature plus inclusion probabilities for random generation.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomSpec {
    pub signature: Signature,
    pub density: f64,
    /// Per-predicate overrides of `density`.
    pub overrides: BTreeMap<String, f64>,
}

impl RandomSpec {
    pub fn new(signature: Signature, density: f64) -> Self {
        RandomSpec { signature, density, overrides: BTreeMap::new() }
    }

    pub fn density_of(&self, pred: &str) -> f64 {
        self.overrides.get(pred).copied().unwrap_or(self.density)
    }
}

pub fn parse_random_spec(text: &str) -> Result<RandomSpec, DslError> {
    let mut p = Parser::new(text)?;
    let sig = p.signature()?;
    let mut spec = RandomSpec::new(sig, 0.5);
    while p.is_word("density") {
        p.pos += 1;
        let target = if p.eat("=") {
            None
        } else {
            let n = p.name()?;
            if spec.signature.predicate(&n).is_none() {
                p.pos -= 1;
                return p.err(format!("`{n}` is not a predicate"));
            }
            p.expect("=")?;
            Some(n)
        };
        let d: f64 = p.number("a probability")?;
        if !(0.0..=1.0).contains(&d) {
            p.pos -= 1;
            return p.err(format!("density {d} is outside [0, 1]"));
        }
        match target {
            Some(n) => {
                spec.overrides.insert(n, d);
            }
            None => spec.density = d,
        }
        p.expect(";")?;
    }
    p.end()?;
    Ok(spec)
}

pub fn signature_to_dsl(sig: &Signature) -> String {
    let mut decls: Vec<String> = sig.predicates().iter().map(|p| format!("pred {}/{};", p.name, p.arity)).collect();
    for f in sig.functions() {
        decls.push(if f.arity == 0 { format!("const {};", f.name) } else { format!("func {}/{};", f.name, f.arity) });
    }
    if decls.is_empty() {
        "signature { }\n".into()
    } else {
        format!("signature {{ {} }}\n", decls.join(" "))
    }
}

fn tuple_text(s: &Structure, t: &[usize]) -> String {
    if t.len() == 1 {
        s.name(t[0]).into()
    } else {
        format!("({})", t.iter().map(|&e| s.name(e)).collect::<Vec<_>>().join(","))
    }
}

/// Writes `s` in the DSL. Symmetric binary predicates use `edges`.
pub fn structure_to_dsl(s: &Structure) -> String {
    let sig = s.signature();
    let mut out = signature_to_dsl(sig);
    out += "structure {\n";
    let _ = writeln!(out, "  domain = {{ {} }};", s.elements().join(", "));
    for (p, sym) in sig.predicates().iter().enumerate() {
        let tuples: Vec<Vec<usize>> = s.tuples(p).collect();
        if sym.arity == 2 && !tuples.is_empty() && s.is_symmetric(p) {
            let edges: Vec<String> =
                tuples.iter().filter(|t| t[0] <= t[1]).map(|t| format!("{}-{}", s.name(t[0]), s.name(t[1]))).collect();
            let _ = writeln!(out, "  edges {} = {{ {} }};", sym.name, edges.join(", "));
        } else if tuples.is_empty() {
            let _ = writeln!(out, "  {} = {{ }};", sym.name);
        } else {
            let items: Vec<String> = tuples.iter().map(|t| tuple_text(s, t)).collect();
            let _ = writeln!(out, "  {} = {{ {} }};", sym.name, items.join(", "));
        }
    }
    for (f, sym) in sig.functions().iter().enumerate() {
        if sym.arity == 0 {
            let _ = writeln!(out, "  {} = {};", sym.name, s.name(s.apply(f, &[])));
            continue;
        }
        let items: Vec<String> = gradekit_core::structure::all_tuples(s.size(), sym.arity)
            .map(|t| format!("{} -> {}", tuple_text(s, &t), s.name(s.apply(f, &t))))
            .collect();
        let _ = writeln!(out, "  {} = {{ {} }};", sym.name, items.join(", "));
    }
    out += "}\n";
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use gradekit_core::gallery;

    #[test]
    fn example_parses() {
        let s = parse_structure(
            "signature { pred R/2; pred S/2; func f/1; const c; }
             structure {
               domain = { a, b, c };
               R = { (a,b), (b,c) };
               edges S = { a-b };          # sugar
               f = { a -> b, b -> b, c -> a };
               c = a;
             }",
        )
        .unwrap();
        assert_eq!(s.size(), 3);
        let sp = s.signature().predicate("S").unwrap();
        assert!(s.holds(sp, &[0, 1]) && s.holds(sp, &[1, 0]));
        assert_eq!(s.apply(1, &[]), 0);
        assert_eq!(s.apply(0, &[2]), 0);
    }

    #[test]
    fn gallery_round_trips() {
        for (name, s) in gallery::all() {
            let text = structure_to_dsl(&s);
            assert_eq!(parse_structure(&text).unwrap(), s, "{name}:\n{text}");
        }
    }

    #[test]
    fn a_and_f_from_text() {
        let a = parse_structure("signature { pred R/2; } structure { domain = { 1, 2 }; R = { }; }").unwrap();
        assert_eq!(a, gallery::a());
        let f = parse_structure("signature { func f/1; } structure { domain = {1,2}; f = { 1 -> 2, 2 -> 2 }; }").unwrap();
        assert_eq!(f, gallery::f());
        let one = parse_structure("signature { } structure { domain = { x }; }").unwrap();
        assert_eq!(one.size(), 1);
    }

    #[test]
    fn syntax_errors_have_positions() {
        let e = parse_structure("signature { pred R/2; }\nstructure {\n  domain = { a b };\n}").unwrap_err();
        assert_eq!(e, DslError::Syntax { line: 3, column: 16, message: "expected `,`, found `b`".into() });
        assert!(matches!(parse_structure("signature { pred R/x; }"), Err(DslError::Syntax { line: 1, .. })));
        assert!(matches!(parse_structure("signature { pred R/1; } structure { domain = {a}; R = { a -> a }; }"),
            Err(DslError::Syntax { .. })));
    }

    #[test]
    fn semantic_errors() {
        let e = parse_structure("signature { func f/1; } structure { domain = { a, b }; f = { a -> b }; }").unwrap_err();
        let DslError::Invalid(d) = e else { panic!() };
        assert!(d.to_string().contains("partial function"));
        let e = parse_structure("signature { pred R/2; } structure { domain = { a }; R = { (a,z) }; }").unwrap_err();
        let DslError::Invalid(d) = e else { panic!() };
        assert_eq!(d.len(), 1);
        assert!(matches!(parse_structure("signature { } structure { domain = { }; }"), Err(DslError::Invalid(_))));
        assert!(matches!(parse_structure("signature { pred R/2; pred R/1; } structure { domain = {a}; }"),
            Err(DslError::Signature(_))));
    }

    #[test]
    fn random_spec() {
        let spec = parse_random_spec("signature { pred R/2; pred P/1; } density = 0.3; density R = 0.8;").unwrap();
        assert_eq!(spec.density_of("R"), 0.8);
        assert_eq!(spec.density_of("P"), 0.3);
        assert!(parse_random_spec("signature { pred R/2; } density = 1.5;").is_err());
        assert!(parse_random_spec("signature { pred R/2; } density Q = 0.5;").is_err());
    }
}
