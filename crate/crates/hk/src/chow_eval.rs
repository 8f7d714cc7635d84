//! Expression language for `hk chow eval`.
//!
//! Grammar (whitespace ignored, `#` not supported):
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := atom ('*' atom)*
//! atom   := INT | CLASS | FUNC '(' BUNDLE ')' | '(' expr ')'
//! FUNC   := 'd2' | 'd2dual' | 'ctotal' | 'c' DIGITS
//! ```
//!
//! `d2` is the degeneracy class c1·c2 − 2·c3, `d2dual` the same for the dual
//! bundle, `cK` the K-th Chern class, and `ctotal` the full Chern class.
//!
//! Named bundles (each fixes the ring it lives in):
//!
//! | name                 | ring        | bundle                                   |
//! |----------------------|-------------|------------------------------------------|
//! | `tangent_p3`         | P3          | tangent bundle                           |
//! | `tangent_g24`        | G(2,4)      | tangent bundle                           |
//! | `affine_dual_g24`    | G(2,4)      | dual affine tangent bundle, rank 5       |
//! | `taut_sub`           | G(2,4)      | tautological subbundle                   |
//! | `taut_quot`          | G(2,4)      | tautological quotient bundle             |
//! | `t1_plus`            | P3          | doubled ∧²(T(−1))                        |
//! | `t1_plus_wedge_first`| P3          | doubled (∧²T)(−1), the other reading     |
//! | `t3_minus`           | G(2,4)      | U ⊕ Q∨                                   |
//! | `segre_literal`      | P1 × G(2,4) | rank-7 middle term of the sequence       |
//! | `segre_derived`      | P1 × G(2,4) | rank-6 dual affine tangent bundle        |
//!
//! Named basis classes: `h` on P3; `s1 s2 s11 s21 s22` on G(2,4); the same
//! five prefixed `seg_` plus `seg_t` (the P1 hyperplane) on P1 × G(2,4).
//! Classes can only be combined within one ring.

use hklat::chow::{
    affine_tangent_dual_g24, lagrangian_d2, lagrangian_d2_dual, pull_left, pull_right,
    ring_g24, ring_pn, ring_product, segre_tangent_class, t1_plus, t1_plus_wedge_first,
    t3_minus, tangent_g24, tangent_pn, taut_quot_g24, taut_sub_g24, ChernClass, ChowClass,
};
use hklat::{Error, Result};

/// Result of evaluating an expression: a bare scalar (no ring involved) or a
/// Chow class in some ring.
pub enum Value {
    Scalar(i64),
    Class(ChowClass),
}

fn err(msg: impl Into<String>) -> Error {
    Error::ParseError { line: 1, msg: msg.into() }
}

fn named_bundle(name: &str) -> Result<ChernClass> {
    match name {
        "tangent_p3" => tangent_pn(&ring_pn(3)?),
        "tangent_g24" => tangent_g24(&ring_g24()),
        "affine_dual_g24" => affine_tangent_dual_g24(&ring_g24()),
        "taut_sub" => taut_sub_g24(&ring_g24()),
        "taut_quot" => taut_quot_g24(&ring_g24()),
        "t1_plus" => t1_plus(&ring_pn(3)?),
        "t1_plus_wedge_first" => t1_plus_wedge_first(&ring_pn(3)?),
        "t3_minus" => t3_minus(&ring_g24()),
        "segre_literal" => Ok(segre_tangent_class()?.literal),
        "segre_derived" => Ok(segre_tangent_class()?.derived),
        _ => Err(err(format!("unknown bundle '{}'", name))),
    }
}

fn named_class(name: &str) -> Result<ChowClass> {
    match name {
        "h" => ChowClass::basis(&ring_pn(3)?, "h"),
        "s1" | "s2" | "s11" | "s21" | "s22" => ChowClass::basis(&ring_g24(), name),
        "seg_t" => {
            let p1 = ring_pn(1)?;
            let prod = ring_product(&p1, &ring_g24());
            pull_left(&prod, &ChowClass::basis(&p1, "h")?)
        }
        _ => {
            if let Some(label) = name.strip_prefix("seg_") {
                let g = ring_g24();
                let prod = ring_product(&ring_pn(1)?, &g);
                return pull_right(&prod, &ChowClass::basis(&g, label)?);
            }
            Err(err(format!("unknown class or bundle '{}'", name)))
        }
    }
}

fn apply_func(func: &str, bundle: &ChernClass) -> Result<ChowClass> {
    match func {
        "d2" => lagrangian_d2(bundle),
        "d2dual" => lagrangian_d2_dual(bundle),
        "ctotal" => Ok(bundle.total.clone()),
        _ => {
            let k: usize = func
                .strip_prefix('c')
                .and_then(|d| d.parse().ok())
                .ok_or_else(|| err(format!("unknown function '{}'", func)))?;
            Ok(bundle.c(k))
        }
    }
}

struct Tokens {
    chars: Vec<char>,
    pos: usize,
}

impl Tokens {
    fn new(input: &str) -> Tokens {
        Tokens { chars: input.chars().filter(|c| !c.is_whitespace()).collect(), pos: 0 }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn integer(&mut self) -> Result<i64> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse().map_err(|_| err(format!("bad integer at position {}", start)))
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.bump() == Some(c) {
            Ok(())
        } else {
            Err(err(format!("expected '{}' at position {}", c, self.pos)))
        }
    }
}

fn add_values(a: Value, b: Value) -> Result<Value> {
    match (a, b) {
        (Value::Scalar(x), Value::Scalar(y)) => Ok(Value::Scalar(
            x.checked_add(y).ok_or_else(|| err("scalar overflow"))?,
        )),
        (Value::Class(x), Value::Class(y)) => Ok(Value::Class(x.add(&y)?)),
        (Value::Class(x), Value::Scalar(s)) | (Value::Scalar(s), Value::Class(x)) => {
            // promote the scalar to s·1 in the class's ring
            let one = ChowClass::one(&x.ring).scale(s);
            Ok(Value::Class(x.add(&one)?))
        }
    }
}

fn mul_values(a: Value, b: Value) -> Result<Value> {
    match (a, b) {
        (Value::Scalar(x), Value::Scalar(y)) => Ok(Value::Scalar(
            x.checked_mul(y).ok_or_else(|| err("scalar overflow"))?,
        )),
        (Value::Class(x), Value::Class(y)) => Ok(Value::Class(x.mul(&y)?)),
        (Value::Class(x), Value::Scalar(s)) | (Value::Scalar(s), Value::Class(x)) => {
            Ok(Value::Class(x.scale(s)))
        }
    }
}

fn neg_value(v: Value) -> Value {
    match v {
        Value::Scalar(x) => Value::Scalar(-x),
        Value::Class(x) => Value::Class(x.neg()),
    }
}

fn parse_expr(t: &mut Tokens) -> Result<Value> {
    let mut acc = if t.peek() == Some('-') {
        t.bump();
        neg_value(parse_term(t)?)
    } else {
        parse_term(t)?
    };
    while let Some(op) = t.peek() {
        match op {
            '+' => {
                t.bump();
                acc = add_values(acc, parse_term(t)?)?;
            }
            '-' => {
                t.bump();
                acc = add_values(acc, neg_value(parse_term(t)?))?;
            }
            _ => break,
        }
    }
    Ok(acc)
}

fn parse_term(t: &mut Tokens) -> Result<Value> {
    let mut acc = parse_atom(t)?;
    while t.peek() == Some('*') {
        t.bump();
        acc = mul_values(acc, parse_atom(t)?)?;
    }
    Ok(acc)
}

fn parse_atom(t: &mut Tokens) -> Result<Value> {
    match t.peek() {
        Some('(') => {
            t.bump();
            let v = parse_expr(t)?;
            t.expect(')')?;
            Ok(v)
        }
        Some(c) if c.is_ascii_digit() => Ok(Value::Scalar(t.integer()?)),
        Some(c) if c.is_ascii_alphabetic() => {
            let name = t.ident();
            if t.peek() == Some('(') {
                t.bump();
                let arg = t.ident();
                t.expect(')')?;
                Ok(Value::Class(apply_func(&name, &named_bundle(&arg)?)?))
            } else {
                Ok(Value::Class(named_class(&name)?))
            }
        }
        Some(c) => Err(err(format!("unexpected '{}' at position {}", c, t.pos))),
        None => Err(err("unexpected end of expression")),
    }
}

/// Evaluate one expression to a scalar or a Chow class.
pub fn eval(input: &str) -> Result<Value> {
    let mut tokens = Tokens::new(input);
    let value = parse_expr(&mut tokens)?;
    if tokens.peek().is_some() {
        return Err(err(format!("trailing input at position {}", tokens.pos)));
    }
    Ok(value)
}
