//! A small arithmetic-expression language over the variable `t`.
//!
//! Grammar, loosest to tightest binding:
//!
//! ```text
//! expr   := term { ("+" | "-") term }
//! term   := factor { ("*" | "/") factor }
//! factor := "-" factor | power
//! power  := atom [ "^" factor ]          (right-associative)
//! atom   := NUMBER | "t" | "pi" | "e" | NAME "(" expr {"," expr} ")" | "(" expr ")"
//! ```
//!
//! Functions: `sin cos exp ln sqrt abs pow(x,y)` plus the fractional
//! builtins `fexp(lambda, alpha, base)`, `fsin(omega, alpha, base)` and
//! `fcos(omega, alpha, base)`, whose parameters must not depend on `t`.
//! All identifiers are resolved at parse time; evaluation reports domain
//! violations (log of a nonpositive number, `0^negative`, ...) with the
//! byte offset of the offending operator.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Ln,
    Sqrt,
    Abs,
    Pow,
    FExp,
    FSin,
    FCos,
}

impl Func {
    fn lookup(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            "pow" => Func::Pow,
            "fexp" => Func::FExp,
            "fsin" => Func::FSin,
            "fcos" => Func::FCos,
            _ => return None,
        })
    }

    fn arity(&self) -> usize {
        match self {
            Func::Pow => 2,
            Func::FExp | Func::FSin | Func::FCos => 3,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var,
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>, usize),
    Call(Func, Vec<Expr>, usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at offset {}: {}", self.pos, self.msg)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalError {
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "evaluation error at offset {}: {}", self.pos, self.msg)
    }
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                toks.push((Tok::Plus, i));
                i += 1;
            }
            '-' => {
                toks.push((Tok::Minus, i));
                i += 1;
            }
            '*' => {
                toks.push((Tok::Star, i));
                i += 1;
            }
            '/' => {
                toks.push((Tok::Slash, i));
                i += 1;
            }
            '^' => {
                toks.push((Tok::Caret, i));
                i += 1;
            }
            '(' => {
                toks.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, i));
                i += 1;
            }
            ',' => {
                toks.push((Tok::Comma, i));
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                // Exponent only when digits follow, so `2*e` still lexes
                // the constant `e`.
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &src[start..i];
                let value: f64 = text.parse().map_err(|_| ParseError {
                    pos: start,
                    msg: format!("malformed number `{text}`"),
                })?;
                toks.push((Tok::Num(value), start));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                toks.push((Tok::Ident(src[start..i].to_string()), start));
            }
            _ => {
                return Err(ParseError {
                    pos: i,
                    msg: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    Ok(toks)
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

struct Parser<'a> {
    toks: &'a [(Tok, usize)],
    idx: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&(Tok, usize)> {
        self.toks.get(self.idx)
    }

    fn bump(&mut self) -> Option<&(Tok, usize)> {
        let t = self.toks.get(self.idx);
        self.idx += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<usize, ParseError> {
        match self.bump() {
            Some((t, p)) if *t == want => Ok(*p),
            Some((_, p)) => Err(ParseError {
                pos: *p,
                msg: format!("expected {what}"),
            }),
            None => Err(ParseError {
                pos: self.end,
                msg: format!("expected {what}, found end of input"),
            }),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        while let Some((tok, pos)) = self.peek().cloned() {
            let op = match tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => break,
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs), pos);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        while let Some((tok, pos)) = self.peek().cloned() {
            let op = match tok {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => break,
            };
            self.bump();
            let rhs = self.factor()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs), pos);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if let Some((Tok::Minus, _)) = self.peek() {
            self.bump();
            let inner = self.factor()?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if let Some((Tok::Caret, pos)) = self.peek().cloned() {
            self.bump();
            let exp = self.factor()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exp), pos));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let Some((tok, pos)) = self.bump().cloned() else {
            return Err(ParseError {
                pos: self.end,
                msg: "unexpected end of input".into(),
            });
        };
        match tok {
            Tok::Num(v) => Ok(Expr::Num(v)),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "closing `)`")?;
                Ok(inner)
            }
            Tok::Ident(name) => match name.as_str() {
                "t" => Ok(Expr::Var),
                "pi" => Ok(Expr::Num(std::f64::consts::PI)),
                "e" => Ok(Expr::Num(std::f64::consts::E)),
                _ => {
                    let Some(func) = Func::lookup(&name) else {
                        return Err(ParseError {
                            pos,
                            msg: format!("unknown identifier `{name}`"),
                        });
                    };
                    self.expect(Tok::LParen, "`(` after function name")?;
                    let mut args = vec![self.expr()?];
                    while let Some((Tok::Comma, _)) = self.peek() {
                        self.bump();
                        args.push(self.expr()?);
                    }
                    self.expect(Tok::RParen, "closing `)`")?;
                    if args.len() != func.arity() {
                        return Err(ParseError {
                            pos,
                            msg: format!(
                                "`{name}` takes {} argument(s), got {}",
                                func.arity(),
                                args.len()
                            ),
                        });
                    }
                    if matches!(func, Func::FExp | Func::FSin | Func::FCos)
                        && args.iter().any(contains_var)
                    {
                        return Err(ParseError {
                            pos,
                            msg: format!("`{name}` parameters must not depend on t"),
                        });
                    }
                    Ok(Expr::Call(func, args, pos))
                }
            },
            _ => Err(ParseError {
                pos,
                msg: "expected a number, `t`, a function call or `(`".into(),
            }),
        }
    }
}

fn contains_var(e: &Expr) -> bool {
    match e {
        Expr::Var => true,
        Expr::Num(_) => false,
        Expr::Neg(u) => contains_var(u),
        Expr::Bin(_, l, r, _) => contains_var(l) || contains_var(r),
        Expr::Call(_, args, _) => args.iter().any(contains_var),
    }
}

/// Parses `src` into an AST or a diagnostic with byte offset.
pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks: &toks,
        idx: 0,
        end: src.len(),
    };
    let e = p.expr()?;
    if let Some((_, pos)) = p.peek() {
        return Err(ParseError {
            pos: *pos,
            msg: "trailing input after expression".into(),
        });
    }
    Ok(e)
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

pub fn eval_expr(e: &Expr, t: f64) -> Result<f64, EvalError> {
    match e {
        Expr::Num(v) => Ok(*v),
        Expr::Var => Ok(t),
        Expr::Neg(u) => Ok(-eval_expr(u, t)?),
        Expr::Bin(op, l, r, pos) => {
            let a = eval_expr(l, t)?;
            let b = eval_expr(r, t)?;
            match op {
                BinOp::Add => Ok(a + b),
                BinOp::Sub => Ok(a - b),
                BinOp::Mul => Ok(a * b),
                BinOp::Div => {
                    if b == 0.0 {
                        Err(EvalError {
                            pos: *pos,
                            msg: "division by zero".into(),
                        })
                    } else {
                        Ok(a / b)
                    }
                }
                BinOp::Pow => checked_pow(a, b, *pos),
            }
        }
        Expr::Call(func, args, pos) => {
            let mut vals = Vec::with_capacity(args.len());
            for a in args {
                vals.push(eval_expr(a, t)?);
            }
            match func {
                Func::Sin => Ok(vals[0].sin()),
                Func::Cos => Ok(vals[0].cos()),
                Func::Exp => Ok(vals[0].exp()),
                Func::Ln => {
                    if vals[0] <= 0.0 {
                        Err(EvalError {
                            pos: *pos,
                            msg: format!("ln of a nonpositive number ({})", vals[0]),
                        })
                    } else {
                        Ok(vals[0].ln())
                    }
                }
                Func::Sqrt => {
                    if vals[0] < 0.0 {
                        Err(EvalError {
                            pos: *pos,
                            msg: format!("square root of a negative number ({})", vals[0]),
                        })
                    } else {
                        Ok(vals[0].sqrt())
                    }
                }
                Func::Abs => Ok(vals[0].abs()),
                Func::Pow => checked_pow(vals[0], vals[1], *pos),
                Func::FExp | Func::FSin | Func::FCos => {
                    let (coef, alpha, base) = (vals[0], vals[1], vals[2]);
                    if alpha <= 0.0 {
                        return Err(EvalError {
                            pos: *pos,
                            msg: format!("fractional order must be positive, got {alpha}"),
                        });
                    }
                    if t < base {
                        return Err(EvalError {
                            pos: *pos,
                            msg: format!("t = {t} lies left of the base point {base}"),
                        });
                    }
                    let u = coef * (t - base).powf(alpha) / alpha;
                    Ok(match func {
                        Func::FExp => u.exp(),
                        Func::FSin => u.sin(),
                        Func::FCos => u.cos(),
                        _ => unreachable!(),
                    })
                }
            }
        }
    }
}

fn checked_pow(a: f64, b: f64, pos: usize) -> Result<f64, EvalError> {
    if a == 0.0 && b < 0.0 {
        return Err(EvalError {
            pos,
            msg: "zero raised to a negative power".into(),
        });
    }
    if a < 0.0 && b.fract() != 0.0 {
        return Err(EvalError {
            pos,
            msg: format!("negative base {a} with non-integer exponent {b}"),
        });
    }
    Ok(a.powf(b))
}

// ---------------------------------------------------------------------------
// Symbolic derivative (exact hooks for the numeric operators)
// ---------------------------------------------------------------------------

fn num(v: f64) -> Expr {
    Expr::Num(v)
}

fn bin(op: BinOp, l: Expr, r: Expr, pos: usize) -> Expr {
    Expr::Bin(op, Box::new(l), Box::new(r), pos)
}

/// d/dt of the expression, as an expression.
pub fn differentiate(e: &Expr) -> Expr {
    let d = raw_derivative(e);
    simplify(&d)
}

fn raw_derivative(e: &Expr) -> Expr {
    match e {
        Expr::Num(_) => num(0.0),
        Expr::Var => num(1.0),
        Expr::Neg(u) => Expr::Neg(Box::new(raw_derivative(u))),
        Expr::Bin(op, l, r, pos) => {
            let (dl, dr) = (raw_derivative(l), raw_derivative(r));
            match op {
                BinOp::Add => bin(BinOp::Add, dl, dr, *pos),
                BinOp::Sub => bin(BinOp::Sub, dl, dr, *pos),
                BinOp::Mul => bin(
                    BinOp::Add,
                    bin(BinOp::Mul, dl, (**r).clone(), *pos),
                    bin(BinOp::Mul, (**l).clone(), dr, *pos),
                    *pos,
                ),
                BinOp::Div => bin(
                    BinOp::Div,
                    bin(
                        BinOp::Sub,
                        bin(BinOp::Mul, dl, (**r).clone(), *pos),
                        bin(BinOp::Mul, (**l).clone(), dr, *pos),
                        *pos,
                    ),
                    bin(BinOp::Mul, (**r).clone(), (**r).clone(), *pos),
                    *pos,
                ),
                BinOp::Pow => pow_derivative(l, r, dl, dr, *pos),
            }
        }
        Expr::Call(func, args, pos) => {
            let u = args[0].clone();
            let du = raw_derivative(&args[0]);
            let chain = |outer: Expr| bin(BinOp::Mul, outer, du.clone(), *pos);
            match func {
                Func::Sin => chain(Expr::Call(Func::Cos, vec![u], *pos)),
                Func::Cos => Expr::Neg(Box::new(chain(Expr::Call(Func::Sin, vec![u], *pos)))),
                Func::Exp => chain(Expr::Call(Func::Exp, vec![u], *pos)),
                Func::Ln => bin(BinOp::Div, du, u, *pos),
                Func::Sqrt => bin(
                    BinOp::Div,
                    du,
                    bin(
                        BinOp::Mul,
                        num(2.0),
                        Expr::Call(Func::Sqrt, vec![u], *pos),
                        *pos,
                    ),
                    *pos,
                ),
                // |u|' = u u' / |u| (sign of u), undefined at u = 0.
                Func::Abs => bin(
                    BinOp::Div,
                    bin(BinOp::Mul, u.clone(), du, *pos),
                    Expr::Call(Func::Abs, vec![u], *pos),
                    *pos,
                ),
                Func::Pow => pow_derivative(&args[0], &args[1], du, raw_derivative(&args[1]), *pos),
                // d/dt fexp(c, alpha, a) = c (t-a)^{alpha-1} fexp(c, alpha, a);
                // the sine/cosine pair rotates with the same prefactor.
                Func::FExp | Func::FSin | Func::FCos => {
                    let (c, alpha, base) = (args[0].clone(), args[1].clone(), args[2].clone());
                    let prefactor = bin(
                        BinOp::Mul,
                        c.clone(),
                        bin(
                            BinOp::Pow,
                            bin(BinOp::Sub, Expr::Var, base.clone(), *pos),
                            bin(BinOp::Sub, alpha.clone(), num(1.0), *pos),
                            *pos,
                        ),
                        *pos,
                    );
                    let rotated = match func {
                        Func::FExp => Expr::Call(Func::FExp, vec![c, alpha, base], *pos),
                        Func::FSin => Expr::Call(Func::FCos, vec![c, alpha, base], *pos),
                        Func::FCos => {
                            Expr::Neg(Box::new(Expr::Call(Func::FSin, vec![c, alpha, base], *pos)))
                        }
                        _ => unreachable!(),
                    };
                    bin(BinOp::Mul, prefactor, rotated, *pos)
                }
            }
        }
    }
}

fn pow_derivative(base: &Expr, exp: &Expr, dbase: Expr, dexp: Expr, pos: usize) -> Expr {
    if let Expr::Num(c) = exp {
        // c u^{c-1} u'
        return bin(
            BinOp::Mul,
            bin(
                BinOp::Mul,
                num(*c),
                bin(BinOp::Pow, base.clone(), num(c - 1.0), pos),
                pos,
            ),
            dbase,
            pos,
        );
    }
    // u^v (v' ln u + v u' / u)
    let u_pow_v = bin(BinOp::Pow, base.clone(), exp.clone(), pos);
    let term1 = bin(
        BinOp::Mul,
        dexp,
        Expr::Call(Func::Ln, vec![base.clone()], pos),
        pos,
    );
    let term2 = bin(
        BinOp::Div,
        bin(BinOp::Mul, exp.clone(), dbase, pos),
        base.clone(),
        pos,
    );
    bin(BinOp::Mul, u_pow_v, bin(BinOp::Add, term1, term2, pos), pos)
}

/// Constant folding and unit/zero elimination; keeps derivative chains
/// from ballooning.
pub fn simplify(e: &Expr) -> Expr {
    match e {
        Expr::Num(_) | Expr::Var => e.clone(),
        Expr::Neg(u) => match simplify(u) {
            Expr::Num(v) => num(-v),
            Expr::Neg(inner) => *inner,
            s => Expr::Neg(Box::new(s)),
        },
        Expr::Bin(op, l, r, pos) => {
            let (l, r) = (simplify(l), simplify(r));
            if let (Expr::Num(a), Expr::Num(b)) = (&l, &r) {
                let folded = match op {
                    BinOp::Add => Some(a + b),
                    BinOp::Sub => Some(a - b),
                    BinOp::Mul => Some(a * b),
                    BinOp::Div if *b != 0.0 => Some(a / b),
                    BinOp::Pow if !(*a < 0.0 && b.fract() != 0.0) && !(*a == 0.0 && *b < 0.0) => {
                        Some(a.powf(*b))
                    }
                    _ => None,
                };
                if let Some(v) = folded {
                    return num(v);
                }
            }
            match (op, &l, &r) {
                (BinOp::Add, Expr::Num(z), other) | (BinOp::Add, other, Expr::Num(z))
                    if *z == 0.0 =>
                {
                    other.clone()
                }
                (BinOp::Sub, other, Expr::Num(z)) if *z == 0.0 => other.clone(),
                (BinOp::Sub, Expr::Num(z), other) if *z == 0.0 => {
                    Expr::Neg(Box::new(other.clone()))
                }
                (BinOp::Mul, Expr::Num(z), _) | (BinOp::Mul, _, Expr::Num(z)) if *z == 0.0 => {
                    num(0.0)
                }
                (BinOp::Mul, Expr::Num(one), other) | (BinOp::Mul, other, Expr::Num(one))
                    if *one == 1.0 =>
                {
                    other.clone()
                }
                (BinOp::Div, Expr::Num(z), _) if *z == 0.0 => num(0.0),
                (BinOp::Div, other, Expr::Num(one)) if *one == 1.0 => other.clone(),
                (BinOp::Pow, other, Expr::Num(one)) if *one == 1.0 => other.clone(),
                (BinOp::Pow, _, Expr::Num(z)) if *z == 0.0 => num(1.0),
                _ => Expr::Bin(*op, Box::new(l), Box::new(r), *pos),
            }
        }
        Expr::Call(func, args, pos) => {
            let args: Vec<Expr> = args.iter().map(simplify).collect();
            Expr::Call(*func, args, *pos)
        }
    }
}

/// Wraps the expression as a `RealFn` with `hooks` symbolic derivatives.
/// Evaluation errors surface as NaN, which the numeric operators detect.
pub fn to_realfn(e: &Expr, hooks: u32) -> conformable::RealFn {
    let root = simplify(e);
    let as_closure = |expr: Expr| move |t: f64| eval_expr(&expr, t).unwrap_or(f64::NAN);
    let mut f = conformable::RealFn::new(as_closure(root.clone()));
    let mut cur = root;
    for _ in 0..hooks {
        cur = differentiate(&cur);
        f = f.with_deriv(as_closure(cur.clone()));
    }
    f
}
