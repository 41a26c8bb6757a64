//! Small expression grammar for scalars, roots and relations.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | ident | '(' expr ')'
//! ```
//!
//! `p/q` is ordinary division of integer literals.

use eulerseries::{Poly, RatFn, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{message}")]
pub struct ExprError {
    pub message: String,
    /// Byte offset into the expression text.
    pub offset: usize,
    pub code: &'static str,
}

impl ExprError {
    fn new(code: &'static str, offset: usize, message: impl Into<String>) -> Self {
        ExprError {
            message: message.into(),
            offset,
            code,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(i64),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n = src[start..i]
                .parse()
                .map_err(|_| ExprError::new("syntax", start, "integer literal too large"))?;
            out.push((Tok::Int(n), start));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(src[start..i].to_string()), start));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), i));
            i += 1;
        } else {
            return Err(ExprError::new("syntax", i, format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

/// Parsed expression tree; every node remembers where it started.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Int(i64, usize),
    Var(String, usize),
    Neg(Box<Expr>, usize),
    Add(Box<Expr>, Box<Expr>, usize),
    Sub(Box<Expr>, Box<Expr>, usize),
    Mul(Box<Expr>, Box<Expr>, usize),
    Div(Box<Expr>, Box<Expr>, usize),
    Pow(Box<Expr>, u32, usize),
}

impl Expr {
    pub fn offset(&self) -> usize {
        match self {
            Expr::Int(_, o)
            | Expr::Var(_, o)
            | Expr::Neg(_, o)
            | Expr::Add(_, _, o)
            | Expr::Sub(_, _, o)
            | Expr::Mul(_, _, o)
            | Expr::Div(_, _, o)
            | Expr::Pow(_, _, o) => *o,
        }
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, o)| *o)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            let at = self.here();
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?), at);
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?), at);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            let at = self.here();
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?), at);
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), at);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        let at = self.here();
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?), at));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        let at = self.here();
        if self.eat('^') {
            let exp_at = self.here();
            return match self.toks.get(self.pos) {
                Some((Tok::Int(n), _)) => {
                    let n = u32::try_from(*n).map_err(|_| ExprError::new("syntax", exp_at, "exponent too large"))?;
                    self.pos += 1;
                    Ok(Expr::Pow(Box::new(base), n, at))
                }
                _ => Err(ExprError::new("syntax", exp_at, "expected a nonnegative integer exponent")),
            };
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let at = self.here();
        match self.toks.get(self.pos).cloned() {
            Some((Tok::Int(n), _)) => {
                self.pos += 1;
                Ok(Expr::Int(n, at))
            }
            Some((Tok::Ident(s), _)) => {
                self.pos += 1;
                Ok(Expr::Var(s, at))
            }
            Some((Tok::Op('('), _)) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(ExprError::new("syntax", self.here(), "expected ')'"));
                }
                Ok(e)
            }
            Some((Tok::Op(c), _)) => Err(ExprError::new("syntax", at, format!("unexpected '{c}'"))),
            None => Err(ExprError::new("syntax", at, "unexpected end of expression")),
        }
    }
}

pub fn parse(src: &str) -> Result<Expr, ExprError> {
    let toks = tokenize(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: src.len(),
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(ExprError::new("syntax", p.here(), "trailing input"));
    }
    Ok(e)
}

/// Rational function in the single variable `var`.
pub fn eval_ratfn(e: &Expr, var: &str) -> Result<RatFn, ExprError> {
    ratfn_rec(e, Some(var))
}

fn ratfn_rec(e: &Expr, var: Option<&str>) -> Result<RatFn, ExprError> {
    Ok(match e {
        Expr::Int(n, _) => RatFn::from(Rational::from(*n)),
        Expr::Var(v, _) if Some(v.as_str()) == var => RatFn::t(),
        Expr::Var(v, o) => {
            let hint = var.map(|x| format!(", expected '{x}'")).unwrap_or_default();
            return Err(ExprError::new("unknown-variable", *o, format!("unknown variable '{v}'{hint}")));
        }
        Expr::Neg(a, _) => -&ratfn_rec(a, var)?,
        Expr::Add(a, b, _) => &ratfn_rec(a, var)? + &ratfn_rec(b, var)?,
        Expr::Sub(a, b, _) => &ratfn_rec(a, var)? - &ratfn_rec(b, var)?,
        Expr::Mul(a, b, _) => &ratfn_rec(a, var)? * &ratfn_rec(b, var)?,
        Expr::Div(a, b, o) => ratfn_rec(a, var)?
            .checked_div(&ratfn_rec(b, var)?)
            .map_err(|_| ExprError::new("division-by-zero", *o, "division by zero"))?,
        Expr::Pow(a, n, _) => ratfn_rec(a, var)?.pow(*n as i64).expect("nonnegative power"),
    })
}

/// Polynomial in `var`; division is only allowed by nonzero constants.
pub fn eval_poly(e: &Expr, var: &str) -> Result<Poly, ExprError> {
    let f = eval_ratfn(e, var)?;
    f.as_poly()
        .cloned()
        .ok_or_else(|| ExprError::new("not-polynomial", e.offset(), format!("expected a polynomial in '{var}'")))
}

/// Exact rational constant.
pub fn eval_rational(e: &Expr) -> Result<Rational, ExprError> {
    let f = ratfn_rec(e, None)?;
    Ok(f.as_constant().expect("no variables admitted"))
}

/// Homogeneous linear form `Σ c_i g_i` over the given generator names.
pub fn eval_linear(e: &Expr, gens: &[String]) -> Result<Vec<Rational>, ExprError> {
    let (c, v) = linear_rec(e, gens)?;
    if !c.is_zero() {
        return Err(ExprError::new(
            "degree-mismatch",
            e.offset(),
            "root has a constant term; roots must be homogeneous of degree 2",
        ));
    }
    Ok(v)
}

/// Affine form: constant part plus linear part.
fn linear_rec(e: &Expr, gens: &[String]) -> Result<(Rational, Vec<Rational>), ExprError> {
    let zero = || vec![Rational::zero(); gens.len()];
    let nonlinear = |o: usize| {
        ExprError::new("degree-mismatch", o, "root is not linear in the generators; roots must be homogeneous of degree 2")
    };
    Ok(match e {
        Expr::Int(n, _) => (Rational::from(*n), zero()),
        Expr::Var(name, o) => {
            let i = gens
                .iter()
                .position(|g| g == name)
                .ok_or_else(|| ExprError::new("unknown-generator", *o, format!("unknown generator '{name}'")))?;
            let mut v = zero();
            v[i] = Rational::one();
            (Rational::zero(), v)
        }
        Expr::Neg(a, _) => {
            let (c, v) = linear_rec(a, gens)?;
            (-c, v.into_iter().map(|x| -x).collect())
        }
        Expr::Add(a, b, _) | Expr::Sub(a, b, _) => {
            let (ca, va) = linear_rec(a, gens)?;
            let (cb, vb) = linear_rec(b, gens)?;
            if matches!(e, Expr::Add(..)) {
                (&ca + &cb, va.iter().zip(&vb).map(|(x, y)| x + y).collect())
            } else {
                (&ca - &cb, va.iter().zip(&vb).map(|(x, y)| x - y).collect())
            }
        }
        Expr::Mul(a, b, o) => {
            let (ca, va) = linear_rec(a, gens)?;
            let (cb, vb) = linear_rec(b, gens)?;
            let a_const = va.iter().all(Rational::is_zero);
            let b_const = vb.iter().all(Rational::is_zero);
            if a_const {
                (&ca * &cb, vb.iter().map(|x| &ca * x).collect())
            } else if b_const {
                (&ca * &cb, va.iter().map(|x| x * &cb).collect())
            } else {
                return Err(nonlinear(*o));
            }
        }
        Expr::Div(a, b, o) => {
            let (ca, va) = linear_rec(a, gens)?;
            let (cb, vb) = linear_rec(b, gens)?;
            if !vb.iter().all(Rational::is_zero) {
                return Err(nonlinear(*o));
            }
            if cb.is_zero() {
                return Err(ExprError::new("division-by-zero", *o, "division by zero"));
            }
            (&ca / &cb, va.iter().map(|x| x / &cb).collect())
        }
        Expr::Pow(a, n, o) => {
            let (c, v) = linear_rec(a, gens)?;
            if v.iter().all(Rational::is_zero) {
                (c.pow(*n as i32).expect("nonnegative power"), v)
            } else if *n == 1 {
                (c, v)
            } else if *n == 0 {
                (Rational::one(), zero())
            } else {
                return Err(nonlinear(*o));
            }
        }
    })
}

/// Exponent vector of a monomial like `x^2*y` over the given variable names.
pub fn eval_monomial(e: &Expr, vars: &[String]) -> Result<Vec<u32>, ExprError> {
    let bad = |o: usize| ExprError::new("not-monomial", o, "expected a product of variables with nonnegative powers");
    Ok(match e {
        Expr::Int(1, _) => vec![0; vars.len()],
        Expr::Var(name, o) => {
            let i = vars
                .iter()
                .position(|g| g == name)
                .ok_or_else(|| ExprError::new("unknown-variable", *o, format!("unknown variable '{name}'")))?;
            let mut v = vec![0; vars.len()];
            v[i] = 1;
            v
        }
        Expr::Mul(a, b, _) => {
            let x = eval_monomial(a, vars)?;
            let y = eval_monomial(b, vars)?;
            x.iter().zip(&y).map(|(p, q)| p + q).collect()
        }
        Expr::Pow(a, n, _) => eval_monomial(a, vars)?.iter().map(|p| p * n).collect(),
        other => return Err(bad(other.offset())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gens(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn rational_functions() {
        let f = eval_ratfn(&parse("1/(1 - t^2)").unwrap(), "t").unwrap();
        assert_eq!(f, RatFn::new(Poly::one(), Poly::one_minus_t_pow(2)).unwrap());
        let f = eval_ratfn(&parse("-(3/4)*t + 2").unwrap(), "t").unwrap();
        assert_eq!(f, RatFn::from(Poly::new(vec![Rational::from(2), Rational::new(-3, 4).unwrap()])));
    }

    #[test]
    fn linear_forms() {
        let g = gens(&["h1", "h2"]);
        assert_eq!(
            eval_linear(&parse("2*h1 - h2/3").unwrap(), &g).unwrap(),
            vec![Rational::from(2), Rational::new(-1, 3).unwrap()]
        );
        assert_eq!(eval_linear(&parse("3/4*h1").unwrap(), &g).unwrap()[0], Rational::new(3, 4).unwrap());
    }

    #[test]
    fn unknown_generator_is_located() {
        let err = eval_linear(&parse("2*h + q").unwrap(), &gens(&["h"])).unwrap_err();
        assert_eq!(err.code, "unknown-generator");
        assert_eq!(err.offset, 6);
        assert!(err.message.contains("'q'"));
    }

    #[test]
    fn degree_mismatch() {
        assert_eq!(eval_linear(&parse("h + 1").unwrap(), &gens(&["h"])).unwrap_err().code, "degree-mismatch");
        assert_eq!(eval_linear(&parse("h*h").unwrap(), &gens(&["h"])).unwrap_err().code, "degree-mismatch");
    }

    #[test]
    fn syntax_errors() {
        assert_eq!(parse("1 +").unwrap_err().offset, 3);
        assert_eq!(parse("(t").unwrap_err().message, "expected ')'");
        assert_eq!(parse("t $ 2").unwrap_err().offset, 2);
        assert!(parse("t^t").is_err());
    }

    #[test]
    fn relations_and_monomials() {
        let p = eval_poly(&parse("d^2 - 2*d").unwrap(), "d").unwrap();
        assert_eq!(p, Poly::from_ints(&[0, -2, 1]));
        let m = eval_monomial(&parse("x^2*y").unwrap(), &gens(&["x", "y", "z"])).unwrap();
        assert_eq!(m, vec![2, 1, 0]);
        assert!(eval_monomial(&parse("x + y").unwrap(), &gens(&["x", "y"])).is_err());
    }
}
