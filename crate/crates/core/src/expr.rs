//! Tiny integer expression language for the embedded table data:
//! `+ - * / %`, comparisons, `&& ||`, `!`, parentheses and named variables.
//! Division is floor division; booleans are `0`/`1`.

use crate::error::{Error, Result};
use std::collections::HashMap;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(i64),
    Var(String),
    Op(&'static str),
    LParen,
    RParen,
}

const OPS: [&str; 14] = ["&&", "||", "<=", ">=", "==", "!=", "<", ">", "+", "-", "*", "/", "%", "!"];

fn lex(s: &str) -> Result<Vec<Tok>> {
    let b = s.as_bytes();
    let mut i = 0;
    let mut out = vec![];
    'outer: while i < b.len() {
        let c = b[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < b.len() && (b[i] as char).is_ascii_digit() {
                i += 1;
            }
            out.push(Tok::Num(s[start..i].parse().map_err(|_| Error::InvalidInput(format!("bad number in `{s}`")))?));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < b.len() && ((b[i] as char).is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push(Tok::Var(s[start..i].to_string()));
            continue;
        }
        if c == '(' {
            out.push(Tok::LParen);
            i += 1;
            continue;
        }
        if c == ')' {
            out.push(Tok::RParen);
            i += 1;
            continue;
        }
        for op in OPS {
            if s[i..].starts_with(op) {
                out.push(Tok::Op(op));
                i += op.len();
                continue 'outer;
            }
        }
        return Err(Error::InvalidInput(format!("unexpected `{c}` in `{s}`")));
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    vars: &'a HashMap<String, i64>,
    src: &'a str,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::InvalidInput(format!("{msg} in expression `{}`", self.src))
    }

    fn peek_op(&self) -> Option<&'static str> {
        match self.toks.get(self.pos) {
            Some(Tok::Op(o)) => Some(o),
            _ => None,
        }
    }

    fn binary(&mut self, level: usize) -> Result<i64> {
        const LEVELS: [&[&str]; 5] = [&["||"], &["&&"], &["<=", ">=", "==", "!=", "<", ">"], &["+", "-"], &["*", "/", "%"]];
        if level == LEVELS.len() {
            return self.unary();
        }
        let mut lhs = self.binary(level + 1)?;
        while let Some(op) = self.peek_op().filter(|o| LEVELS[level].contains(o)) {
            self.pos += 1;
            let rhs = self.binary(level + 1)?;
            lhs = match op {
                "||" => ((lhs != 0) || (rhs != 0)) as i64,
                "&&" => ((lhs != 0) && (rhs != 0)) as i64,
                "<=" => (lhs <= rhs) as i64,
                ">=" => (lhs >= rhs) as i64,
                "==" => (lhs == rhs) as i64,
                "!=" => (lhs != rhs) as i64,
                "<" => (lhs < rhs) as i64,
                ">" => (lhs > rhs) as i64,
                "+" => lhs + rhs,
                "-" => lhs - rhs,
                "*" => lhs * rhs,
                "/" | "%" if rhs == 0 => return Err(self.err("division by zero")),
                "/" => lhs.div_euclid(rhs),
                "%" => lhs.rem_euclid(rhs),
                _ => unreachable!(),
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<i64> {
        match self.peek_op() {
            Some("-") => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some("!") => {
                self.pos += 1;
                Ok((self.unary()? == 0) as i64)
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<i64> {
        let t = self.toks.get(self.pos).cloned().ok_or_else(|| self.err("unexpected end"))?;
        self.pos += 1;
        match t {
            Tok::Num(v) => Ok(v),
            Tok::Var(name) => self.vars.get(&name).copied().ok_or_else(|| self.err(&format!("unknown variable `{name}`"))),
            Tok::LParen => {
                let v = self.binary(0)?;
                match self.toks.get(self.pos) {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(v)
                    }
                    _ => Err(self.err("missing `)`")),
                }
            }
            _ => Err(self.err("unexpected token")),
        }
    }
}

/// Evaluates `src` with the given variable bindings.
pub fn eval(src: &str, vars: &HashMap<String, i64>) -> Result<i64> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, vars, src };
    let v = p.binary(0)?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

/// Replaces every `{expr}` in `template` by its value.
pub fn substitute(template: &str, vars: &HashMap<String, i64>) -> Result<String> {
    let mut out = String::new();
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let close = rest[open..].find('}').ok_or_else(|| Error::InvalidInput(format!("unbalanced braces in `{template}`")))? + open;
        out.push_str(&eval(&rest[open + 1..close], vars)?.to_string());
        rest = &rest[close + 1..];
    }
    out.push_str(rest);
    Ok(out)
}

/// Convenience constructor for variable maps.
pub fn vars(pairs: &[(&str, i64)]) -> HashMap<String, i64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}
