//! Cubic polynomials and their Hessians.
//!
//! The Hessian of a polynomial of degree at most three is affine in `x`, so it
//! is exactly a linear parametric matrix: one coefficient matrix per variable
//! plus a constant matrix whose parameter is pinned to `[1, 1]`.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::definiteness::{
    decide_with, hertz_min_eig, rohn_min_eig_bound, strong_psd_interval, Decision, Goal, MethodChoice, Options,
    MAX_SIGN_DIMENSION,
};
use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalMatrix};
use crate::linalg::{Matrix, SymMatrix};
use crate::parametric::{ParameterBox, ParametricSymMatrix};

/// `coeff * x_{vars[0]} * x_{vars[1]} * x_{vars[2]}` with `x_0 = 1`; `vars`
/// sorted ascending.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Term {
    pub coeff: f64,
    pub vars: [usize; 3],
}

impl Term {
    pub fn degree(&self) -> usize {
        self.vars.iter().filter(|&&v| v != 0).count()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CubicPolynomial {
    n: usize,
    terms: Vec<Term>,
}

impl CubicPolynomial {
    /// Builds a normalized polynomial from `(coefficient, variable indices)`
    /// pairs; indices are 1-based, and each list holds at most three of them.
    pub fn new(n: usize, raw: &[(f64, Vec<usize>)]) -> Result<Self> {
        let mut merged: BTreeMap<[usize; 3], f64> = BTreeMap::new();
        for (coeff, vars) in raw {
            if vars.len() > 3 {
                return Err(Error::Degree {
                    pos: 0,
                    degree: vars.len() as u32,
                });
            }
            if let Some(&bad) = vars.iter().find(|&&v| v == 0 || v > n) {
                return Err(Error::UnknownVariable {
                    pos: 0,
                    name: format!("x{bad}"),
                });
            }
            let mut key = [0usize; 3];
            key[3 - vars.len()..].copy_from_slice(vars);
            key.sort_unstable();
            *merged.entry(key).or_insert(0.0) += coeff;
        }
        let terms = merged
            .into_iter()
            .filter(|&(_, c)| c != 0.0)
            .map(|(vars, coeff)| Term { coeff, vars })
            .collect();
        Ok(Self { n, terms })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Parser::new(text)?.polynomial()
    }

    /// Number of variables.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// The same polynomial viewed in `n` variables (`n` may only grow).
    pub fn with_dimension(&self, n: usize) -> Result<Self> {
        if n < self.n {
            return Err(Error::Dimension(format!(
                "polynomial uses x{} but only {n} variables requested",
                self.n
            )));
        }
        Ok(Self {
            n,
            terms: self.terms.clone(),
        })
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.n, "point has the wrong dimension");
        self.terms
            .iter()
            .map(|t| {
                t.vars
                    .iter()
                    .filter(|&&v| v != 0)
                    .fold(t.coeff, |acc, &v| acc * x[v - 1])
            })
            .sum()
    }
}

impl fmt::Display for CubicPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let (sign, mag) = if t.coeff < 0.0 { ("-", -t.coeff) } else { ("+", t.coeff) };
            match (i, sign) {
                (0, "-") => f.write_str("-")?,
                (0, _) => {}
                (_, s) => write!(f, " {s} ")?,
            }
            let mut powers: Vec<(usize, u32)> = Vec::new();
            for &v in t.vars.iter().filter(|&&v| v != 0) {
                match powers.last_mut() {
                    Some((last, k)) if *last == v => *k += 1,
                    _ => powers.push((v, 1)),
                }
            }
            let mut parts: Vec<String> = Vec::new();
            if mag != 1.0 || powers.is_empty() {
                parts.push(format!("{mag}"));
            }
            for (v, k) in powers {
                parts.push(if k == 1 { format!("x{v}") } else { format!("x{v}^{k}") });
            }
            f.write_str(&parts.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

fn resolve_variable(name: &str, pos: usize) -> Result<usize> {
    let unknown = || Error::UnknownVariable {
        pos,
        name: name.to_string(),
    };
    match name {
        "x" => Ok(1),
        "y" => Ok(2),
        "z" => Ok(3),
        _ => {
            let idx: usize = name
                .strip_prefix('x')
                .and_then(|d| d.parse().ok())
                .ok_or_else(unknown)?;
            if idx == 0 {
                Err(unknown())
            } else {
                Ok(idx)
            }
        }
    }
}

/// Resolves a variable name (`x3`, or one of the aliases `x`, `y`, `z`) to
/// its 1-based index.
pub fn variable_index(name: &str) -> Result<usize> {
    resolve_variable(name.trim(), 0)
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' => {
                toks.push((start, Tok::Plus));
                i += 1;
            }
            b'-' => {
                toks.push((start, Tok::Minus));
                i += 1;
            }
            b'*' => {
                toks.push((start, Tok::Star));
                i += 1;
            }
            b'^' => {
                toks.push((start, Tok::Caret));
                i += 1;
            }
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                // exponent only when a digit follows, so `2e` stays coefficient * e
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let lit = &text[start..i];
                let value: f64 = lit.parse().map_err(|_| Error::Parse {
                    pos: start,
                    message: format!("malformed number `{lit}`"),
                })?;
                toks.push((start, Tok::Num(value)));
            }
            c if c.is_ascii_alphabetic() => {
                i += 1;
                if c == b'x' {
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                toks.push((start, Tok::Var(resolve_variable(&text[start..i], start)?)));
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(Error::Parse {
                    pos: start,
                    message: format!("unexpected character `{ch}`"),
                });
            }
        }
    }
    Ok(toks)
}

impl Parser {
    fn new(text: &str) -> Result<Self> {
        Ok(Self {
            toks: tokenize(text)?,
            at: 0,
            end: text.len(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn polynomial(mut self) -> Result<CubicPolynomial> {
        if self.toks.is_empty() {
            return Err(Error::Parse {
                pos: 0,
                message: "empty expression".into(),
            });
        }
        let mut raw: Vec<(f64, Vec<usize>)> = Vec::new();
        let mut sign = match self.peek() {
            Some(Tok::Minus) => {
                self.at += 1;
                -1.0
            }
            Some(Tok::Plus) => {
                self.at += 1;
                1.0
            }
            _ => 1.0,
        };
        loop {
            let (coeff, vars) = self.term()?;
            raw.push((sign * coeff, vars));
            sign = match self.peek() {
                None => break,
                Some(Tok::Plus) => 1.0,
                Some(Tok::Minus) => -1.0,
                Some(_) => {
                    return Err(Error::Parse {
                        pos: self.pos(),
                        message: "expected `+` or `-`".into(),
                    })
                }
            };
            self.at += 1;
        }
        let n = raw.iter().flat_map(|(_, v)| v.iter().copied()).max().unwrap_or(0);
        CubicPolynomial::new(n, &raw)
    }

    fn term(&mut self) -> Result<(f64, Vec<usize>)> {
        let start = self.pos();
        let mut coeff = 1.0;
        let mut vars = Vec::new();
        let mut factors = 0;
        loop {
            match self.peek() {
                Some(Tok::Num(x)) => {
                    coeff *= *x;
                    self.at += 1;
                }
                Some(&Tok::Var(v)) => {
                    self.at += 1;
                    let mut power = 1u32;
                    if self.peek() == Some(&Tok::Caret) {
                        self.at += 1;
                        let pos = self.pos();
                        power = match self.peek() {
                            Some(&Tok::Num(e)) if e.fract() == 0.0 && e >= 1.0 => e.min(1e6) as u32,
                            _ => {
                                return Err(Error::Parse {
                                    pos,
                                    message: "exponent must be a positive integer".into(),
                                })
                            }
                        };
                        self.at += 1;
                    }
                    let degree = vars.len() as u32 + power;
                    if degree > 3 {
                        return Err(Error::Degree { pos: start, degree });
                    }
                    vars.extend(std::iter::repeat_n(v, power as usize));
                }
                _ => {
                    return Err(Error::Parse {
                        pos: self.pos(),
                        message: if factors == 0 {
                            "expected a number or variable".into()
                        } else {
                            "expected a factor after `*`".into()
                        },
                    })
                }
            }
            factors += 1;
            match self.peek() {
                Some(Tok::Star) => self.at += 1,
                Some(Tok::Num(_)) | Some(Tok::Var(_)) => {}
                _ => break,
            }
        }
        Ok((coeff, vars))
    }
}

/// Parses the polynomial grammar (`poly := term (('+'|'-') term)*`, implicit
/// multiplication, exponents 1..3, variables `x<i>` or `x`, `y`, `z`).
pub fn parse(text: &str) -> Result<CubicPolynomial> {
    CubicPolynomial::parse(text)
}

/// The Hessian of `f` as a parametric matrix over `domain` (one interval per
/// variable). Coefficient `k < n` multiplies `x_{k+1}`; the last coefficient
/// is the constant part, paired with the degenerate parameter `[1, 1]`.
pub fn hessian(f: &CubicPolynomial, domain: &ParameterBox) -> Result<ParametricSymMatrix> {
    let n = f.n();
    if domain.len() != n {
        return Err(Error::Dimension(format!(
            "polynomial has {n} variables but the box has {} intervals",
            domain.len()
        )));
    }
    // index n holds the constant matrix
    let mut coeffs = vec![Matrix::zeros(n, n); n + 1];
    for t in f.terms() {
        for a in 0..3 {
            for b in 0..3 {
                if a == b || t.vars[a] == 0 || t.vars[b] == 0 {
                    continue;
                }
                let rest = t.vars[3 - a - b];
                let target = if rest == 0 { n } else { rest - 1 };
                coeffs[target][(t.vars[a] - 1, t.vars[b] - 1)] += t.coeff;
            }
        }
    }
    let coeffs = coeffs.iter().map(SymMatrix::from_matrix).collect::<Result<Vec<_>>>()?;
    let mut params = domain.intervals().to_vec();
    params.push(Interval::point(1.0));
    ParametricSymMatrix::new(coeffs, ParameterBox::new(params))
}

/// Convexity verdict for a cubic on a box together with what the plain
/// interval relaxation of the Hessian says.
#[derive(Clone, Debug)]
pub struct ConvexityReport {
    pub decision: Decision,
    pub hessian: ParametricSymMatrix,
    pub relaxation: IntervalMatrix,
    /// Sign-vertex check of the relaxation; `None` when the dimension is too
    /// large to enumerate.
    pub relaxation_strong_psd: Option<bool>,
    pub hertz_min_eig: Option<f64>,
    pub rohn_bound: f64,
}

/// Decides convexity (strong positive semidefiniteness of the Hessian) of `f`
/// on `domain`.
pub fn certify_convexity(f: &CubicPolynomial, domain: &ParameterBox, opts: &Options) -> Result<ConvexityReport> {
    certify_convexity_with(f, domain, MethodChoice::Auto, opts)
}

pub fn certify_convexity_with(
    f: &CubicPolynomial,
    domain: &ParameterBox,
    choice: MethodChoice,
    opts: &Options,
) -> Result<ConvexityReport> {
    let h = hessian(f, domain)?;
    let decision = decide_with(&h, Goal::StrongPsd, choice, opts)?;
    let relaxation = h.relax();
    let small = h.n() <= MAX_SIGN_DIMENSION;
    let relaxation_strong_psd = if small {
        Some(strong_psd_interval(&relaxation)?)
    } else {
        None
    };
    let hertz = if small { Some(hertz_min_eig(&relaxation)?) } else { None };
    let rohn_bound = rohn_min_eig_bound(&relaxation)?;
    Ok(ConvexityReport {
        decision,
        hessian: h,
        relaxation,
        relaxation_strong_psd,
        hertz_min_eig: hertz,
        rohn_bound,
    })
}
