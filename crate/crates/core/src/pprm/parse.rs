//! Text format for XOR-of-products functions.
//!
//! Tokens: `xK` (variable K, 1-based), `~` (complement prefix), `+` (XOR),
//! `1` (constant), parentheses for factored `(group)(v1 + v2 + ..)` terms.
//! Whitespace is insignificant. Header lines may precede the expression:
//! `.n K` pins the variable count, `#` starts a comment line.
//!
//! `x2(x3 + x4)` is accepted as shorthand for `(x2)(x3 + x4)`.

use super::{BoolFunction, FactorVars, Group, Literal, ProductTerm, Term};
use crate::error::ParseError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok {
    Var(u32),
    Tilde,
    Plus,
    One,
    /// The zero function; only legal as the whole expression.
    Zero,
    Open,
    Close,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

impl Lexer {
    fn new(text: &str) -> Result<Self, ParseError> {
        let bytes = text.as_bytes();
        let mut toks = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i];
            match c {
                b' ' | b'\t' | b'\r' | b'\n' => i += 1,
                b'~' => {
                    toks.push((Tok::Tilde, i));
                    i += 1;
                }
                b'+' => {
                    toks.push((Tok::Plus, i));
                    i += 1;
                }
                b'(' => {
                    toks.push((Tok::Open, i));
                    i += 1;
                }
                b')' => {
                    toks.push((Tok::Close, i));
                    i += 1;
                }
                b'x' | b'X' => {
                    let start = i;
                    i += 1;
                    let ds = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    if ds == i {
                        return Err(ParseError::Syntax {
                            pos: start,
                            msg: "expected digits after 'x'".into(),
                        });
                    }
                    let var: u32 = text[ds..i].parse().map_err(|_| ParseError::Syntax {
                        pos: ds,
                        msg: "variable index too large".into(),
                    })?;
                    if var == 0 {
                        return Err(ParseError::ZeroIndex { pos: start });
                    }
                    toks.push((Tok::Var(var), start));
                }
                b'1' => {
                    toks.push((Tok::One, i));
                    i += 1;
                }
                b'0' => {
                    toks.push((Tok::Zero, i));
                    i += 1;
                }
                _ => {
                    return Err(ParseError::Syntax {
                        pos: i,
                        msg: format!("unexpected character {:?}", c as char),
                    })
                }
            }
        }
        Ok(Lexer { toks, at: 0 })
    }

    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.at).map(|&(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks
            .get(self.at)
            .or_else(|| self.toks.last())
            .map(|&(_, p)| p)
            .unwrap_or(0)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.peek();
        self.at += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        let pos = self.pos();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            _ => Err(ParseError::Syntax { pos, msg: format!("expected {what}") }),
        }
    }
}

struct Parser {
    lx: Lexer,
    strict: bool,
}

impl Parser {
    fn literal(&mut self) -> Result<Option<Literal>, ParseError> {
        match self.lx.peek() {
            Some(Tok::Tilde) => {
                let pos = self.lx.pos();
                self.lx.bump();
                match self.lx.bump() {
                    Some(Tok::Var(v)) => {
                        if self.strict {
                            return Err(ParseError::NegativeLiteral { var: v });
                        }
                        Ok(Some(Literal::neg(v)))
                    }
                    _ => Err(ParseError::Syntax { pos, msg: "expected variable after '~'".into() }),
                }
            }
            Some(Tok::Var(v)) => {
                self.lx.bump();
                Ok(Some(Literal::pos(v)))
            }
            _ => Ok(None),
        }
    }

    /// `factor+` where factor is a literal or the constant 1.
    fn product(&mut self) -> Result<ProductTerm, ParseError> {
        let start = self.lx.pos();
        let mut lits = Vec::new();
        let mut saw_one = false;
        loop {
            if let Some(Tok::One) = self.lx.peek() {
                self.lx.bump();
                saw_one = true;
                continue;
            }
            match self.literal()? {
                Some(l) => {
                    if lits.iter().any(|m: &Literal| m.var == l.var) {
                        return Err(ParseError::RepeatedVar { var: l.var, pos: self.lx.pos() });
                    }
                    lits.push(l);
                }
                None => break,
            }
        }
        if lits.is_empty() && !saw_one {
            return Err(ParseError::Syntax { pos: start, msg: "expected a term".into() });
        }
        ProductTerm::new(lits)
    }

    /// `( v1 + v2 + .. [+ 1] )` — single positive variables only.
    fn vars_parens(&mut self) -> Result<FactorVars, ParseError> {
        self.lx.expect(Tok::Open, "'('")?;
        let mut vars = Vec::new();
        let mut plus_one = false;
        loop {
            let pos = self.lx.pos();
            match self.lx.bump() {
                Some(Tok::Var(v)) => {
                    if vars.contains(&v) {
                        return Err(ParseError::RepeatedVar { var: v, pos });
                    }
                    vars.push(v);
                }
                Some(Tok::One) => {
                    if plus_one {
                        return Err(ParseError::Syntax {
                            pos,
                            msg: "constant 1 listed twice".into(),
                        });
                    }
                    plus_one = true;
                }
                _ => {
                    return Err(ParseError::Syntax {
                        pos,
                        msg: "expected variable or 1 in factor variables".into(),
                    })
                }
            }
            match self.lx.bump() {
                Some(Tok::Plus) => continue,
                Some(Tok::Close) => break,
                _ => {
                    return Err(ParseError::Syntax {
                        pos: self.lx.pos(),
                        msg: "expected '+' or ')'".into(),
                    })
                }
            }
        }
        Ok(FactorVars::new(vars, plus_one))
    }

    /// Contents of a factor-group parenthesis: an XOR of positive products,
    /// or the nested shape `xK(v1 + v2 + ..)`.
    fn group_body(&mut self) -> Result<Group, ParseError> {
        let start = self.lx.pos();
        let mut products = Vec::new();
        loop {
            let p = self.product()?;
            if !p.all_positive() {
                return Err(ParseError::Syntax {
                    pos: start,
                    msg: "factor groups use positive literals only".into(),
                });
            }
            if p.is_one() {
                return Err(ParseError::Syntax {
                    pos: start,
                    msg: "constant 1 is not a factor group".into(),
                });
            }
            if self.lx.peek() == Some(Tok::Open) {
                // nested xK(v..): only legal as the whole group
                if p.degree() != 1 || !products.is_empty() {
                    return Err(ParseError::Syntax {
                        pos: self.lx.pos(),
                        msg: "nested factor group must be a lone literal times an XOR".into(),
                    });
                }
                let lit = p.literals()[0].var;
                let inner = self.vars_parens()?;
                if inner.vars.contains(&lit) {
                    return Err(ParseError::OverlappingVars { var: lit });
                }
                return Ok(Group::LitXor(lit, inner));
            }
            products.push(p);
            match self.lx.peek() {
                Some(Tok::Plus) => {
                    self.lx.bump();
                }
                _ => break,
            }
        }
        Ok(Group::Xor(products))
    }

    /// One XOR addend: a product, or `(group)(vars)` in either spelled or
    /// `xK(vars)` shorthand form.
    fn term(&mut self) -> Result<Vec<Term>, ParseError> {
        if self.lx.peek() == Some(Tok::Open) {
            self.lx.bump();
            let group = self.group_body()?;
            self.lx.expect(Tok::Close, "')'")?;
            let vars = self.vars_parens()?;
            return Term::gv_or_collapse(group, vars);
        }
        let p = self.product()?;
        if self.lx.peek() == Some(Tok::Open) {
            if !p.all_positive() || p.is_one() {
                return Err(ParseError::Syntax {
                    pos: self.lx.pos(),
                    msg: "factor groups use positive literals only".into(),
                });
            }
            let vars = self.vars_parens()?;
            return Term::gv_or_collapse(Group::Xor(vec![p]), vars);
        }
        Ok(vec![Term::Product(p)])
    }

    fn expr(&mut self) -> Result<Vec<Term>, ParseError> {
        let mut terms = Vec::new();
        if self.lx.peek().is_none() {
            return Ok(terms);
        }
        if self.lx.peek() == Some(Tok::Zero) {
            self.lx.bump();
            return match self.lx.peek() {
                None => Ok(terms),
                Some(_) => Err(ParseError::Syntax {
                    pos: self.lx.pos(),
                    msg: "'0' must stand alone".into(),
                }),
            };
        }
        loop {
            terms.extend(self.term()?);
            match self.lx.bump() {
                Some(Tok::Plus) => continue,
                None => break,
                Some(_) => {
                    return Err(ParseError::Syntax {
                        pos: self.lx.pos(),
                        msg: "expected '+' between terms".into(),
                    })
                }
            }
        }
        Ok(terms)
    }
}

/// Parses `.pprm` text. `strict` rejects complemented literals.
///
/// The variable count is the largest index referenced, unless a `.n K`
/// header raises it (a header below the maximum referenced index is an
/// error).
pub fn parse_pprm(text: &str, strict: bool) -> Result<BoolFunction, ParseError> {
    let mut declared_n: Option<u32> = None;
    let mut body = String::new();
    for line in text.lines() {
        let trimmed = line.trim_start();
        if trimmed.starts_with('#') {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix(".n") {
            let val = rest.trim();
            let k: u32 = val
                .parse()
                .map_err(|_| ParseError::Header(format!(".n {val}")))?;
            declared_n = Some(k);
            continue;
        }
        if trimmed.starts_with('.') {
            return Err(ParseError::Header(trimmed.to_string()));
        }
        body.push_str(line);
        body.push(' ');
    }

    let mut parser = Parser { lx: Lexer::new(&body)?, strict };
    let terms = parser.expr()?;
    let max_var = terms.iter().map(Term::max_var).max().unwrap_or(0);
    let n = match declared_n {
        Some(k) if k < max_var => {
            return Err(ParseError::VarOutOfRange { var: max_var, n: k })
        }
        Some(k) => k,
        None => max_var,
    };
    BoolFunction::new(n, terms)
}
