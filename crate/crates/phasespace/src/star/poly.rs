//! Polynomial symbols and the exact Moyal product on them.
//!
//! Text form accepted by [`PolySymbol::parse`]:
//!
//! ```text
//! expr   = ["+" | "-"] term { ("+" | "-") term }
//! term   = factor { "*" factor }
//! factor = atom ["^" uint]
//! atom   = number | "x" | "q" | "p" | "i" | "hbar" | "(" expr ")"
//! ```
//!
//! `q` is an alias for `x`. Whitespace is ignored.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::grid::PhaseGrid;
use crate::weyl::SampledSymbol;

/// Largest total degree a [`PolySymbol`] may carry.
pub const MAX_DEGREE: usize = 8;
const W: usize = MAX_DEGREE + 1;

/// `sum c[a][b] x^a p^b` with `a + b <= MAX_DEGREE`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySymbol {
    coeffs: [[Complex64; W]; W],
    hbar: f64,
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn falling(a: usize, k: usize) -> f64 {
    (a - k + 1..=a).map(|v| v as f64).product()
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|v| v as f64).product()
}

impl PolySymbol {
    pub fn zero(hbar: f64) -> Self {
        Self { coeffs: [[zero(); W]; W], hbar }
    }

    pub fn constant(c: Complex64, hbar: f64) -> Self {
        Self::monomial(c, 0, 0, hbar).expect("degree 0")
    }

    pub fn x(hbar: f64) -> Self {
        Self::monomial(1.0.into(), 1, 0, hbar).expect("degree 1")
    }

    pub fn p(hbar: f64) -> Self {
        Self::monomial(1.0.into(), 0, 1, hbar).expect("degree 1")
    }

    /// `c x^a p^b`.
    pub fn monomial(c: Complex64, a: usize, b: usize, hbar: f64) -> Result<Self> {
        if a + b > MAX_DEGREE {
            return Err(Error::DegreeOverflow { degree: a + b, max: MAX_DEGREE });
        }
        if !(c.re.is_finite() && c.im.is_finite()) {
            return Err(Error::NonFinite("PolySymbol::monomial"));
        }
        let mut s = Self::zero(hbar);
        s.coeffs[a][b] = c;
        Ok(s)
    }

    /// `p^2 / 2m + m omega^2 x^2 / 2`.
    pub fn harmonic(m: f64, omega: f64, hbar: f64) -> Self {
        let mut s = Self::zero(hbar);
        s.coeffs[0][2] = (0.5 / m).into();
        s.coeffs[2][0] = (0.5 * m * omega * omega).into();
        s
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn with_hbar(mut self, hbar: f64) -> Self {
        self.hbar = hbar;
        self
    }

    /// Coefficient of `x^a p^b`; zero outside the stored range.
    pub fn coeff(&self, a: usize, b: usize) -> Complex64 {
        if a < W && b < W {
            self.coeffs[a][b]
        } else {
            zero()
        }
    }

    /// Nonzero terms as `(a, b, c)`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..W).flat_map(move |a| {
            (0..W - a).filter_map(move |b| {
                let c = self.coeffs[a][b];
                (c != zero()).then_some((a, b, c))
            })
        })
    }

    /// Total degree; zero for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms().map(|(a, b, _)| a + b).max().unwrap_or(0)
    }

    pub fn is_real(&self) -> bool {
        self.terms().all(|(_, _, c)| c.im == 0.0)
    }

    pub fn eval(&self, x: f64, p: f64) -> Complex64 {
        self.terms().map(|(a, b, c)| c * x.powi(a as i32) * p.powi(b as i32)).sum()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut s = self.clone();
        for (a, b, c) in o.terms() {
            s.coeffs[a][b] += c;
        }
        s
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale((-1.0).into()))
    }

    pub fn scale(&self, k: Complex64) -> Self {
        let mut s = self.clone();
        s.coeffs.iter_mut().flatten().for_each(|c| *c *= k);
        s
    }

    pub fn conj(&self) -> Self {
        let mut s = self.clone();
        s.coeffs.iter_mut().flatten().for_each(|c| *c = c.conj());
        s
    }

    /// Pointwise product.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        let degree = self.degree() + o.degree();
        if degree > MAX_DEGREE && !(self.terms().next().is_none() || o.terms().next().is_none()) {
            return Err(Error::DegreeOverflow { degree, max: MAX_DEGREE });
        }
        let mut s = Self::zero(self.hbar);
        for (a, b, c) in self.terms() {
            for (a2, b2, c2) in o.terms() {
                s.coeffs[a + a2][b + b2] += c * c2;
            }
        }
        Ok(s)
    }

    /// `d^nx/dx^nx d^np/dp^np`.
    pub fn derivative(&self, nx: usize, np: usize) -> Self {
        let mut s = Self::zero(self.hbar);
        for (a, b, c) in self.terms() {
            if a >= nx && b >= np {
                s.coeffs[a - nx][b - np] += c * falling(a, nx) * falling(b, np);
            }
        }
        s
    }

    pub fn max_coeff_diff(&self, o: &Self) -> f64 {
        self.sub(o).terms().map(|(_, _, c)| c.norm()).fold(0.0, f64::max)
    }

    /// Samples on the grid.
    pub fn sample(&self, grid: PhaseGrid) -> SampledSymbol {
        SampledSymbol::from_fn(grid, self.to_string(), |x, p| self.eval(x, p))
    }

    /// Samples multiplied by the grid's smooth plateau window so that the
    /// result is effectively band-limited and decays before the edges.
    /// Values on the interior agree with [`PolySymbol::sample`] to the
    /// window's deviation from one there.
    pub fn sample_tapered(&self, grid: PhaseGrid, edge: f64, soft: f64) -> SampledSymbol {
        let w = grid.plateau(edge, soft);
        SampledSymbol::from_fn(grid, self.to_string(), |x, p| self.eval(x, p) * w(x, p))
    }

    /// Parses the grammar in the module docs.
    pub fn parse(text: &str, hbar: f64) -> Result<Self> {
        let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        if chars.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut p = Parser { s: &chars, i: 0, hbar };
        let v = p.expr()?;
        if p.i != chars.len() {
            return Err(Error::Parse(format!("unexpected '{}' at {}", chars[p.i], p.i)));
        }
        Ok(v)
    }
}

impl fmt::Display for PolySymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (a, b, c) in self.terms() {
            let negative = (c.im == 0.0 && c.re < 0.0) || (c.re == 0.0 && c.im < 0.0);
            let c = if negative { -c } else { c };
            match (first, negative) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, s) => write!(f, " {} ", if s { "-" } else { "+" })?,
            }
            first = false;
            let mut factors = Vec::new();
            if c.im == 0.0 {
                if c.re != 1.0 || a + b == 0 {
                    factors.push(c.re.to_string());
                }
            } else if c.re == 0.0 {
                factors.push(if c.im == 1.0 { "i".to_string() } else { format!("{}*i", c.im) });
            } else if c.im < 0.0 {
                factors.push(format!("({} - {}*i)", c.re, -c.im));
            } else {
                factors.push(format!("({} + {}*i)", c.re, c.im));
            }
            for (sym, k) in [("x", a), ("p", b)] {
                match k {
                    0 => {}
                    1 => factors.push(sym.to_string()),
                    _ => factors.push(format!("{sym}^{k}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    s: &'a [char],
    i: usize,
    hbar: f64,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.s.get(self.i).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<PolySymbol> {
        let neg = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let mut acc = self.term()?;
        if neg {
            acc = acc.scale((-1.0).into());
        }
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<PolySymbol> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            acc = acc.mul(&self.factor()?)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<PolySymbol> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let start = self.i;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.i += 1;
        }
        let k: usize = self.s[start..self.i]
            .iter()
            .collect::<String>()
            .parse()
            .map_err(|_| Error::Parse(format!("expected an exponent at {start}")))?;
        let mut out = PolySymbol::constant(1.0.into(), self.hbar);
        for _ in 0..k {
            out = out.mul(&base)?;
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<PolySymbol> {
        let h = self.hbar;
        match self.peek() {
            Some('(') => {
                self.i += 1;
                let v = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse(format!("missing ')' at {}", self.i)));
                }
                Ok(v)
            }
            Some('x') | Some('q') => {
                self.i += 1;
                Ok(PolySymbol::x(h))
            }
            Some('p') => {
                self.i += 1;
                Ok(PolySymbol::p(h))
            }
            Some('i') => {
                self.i += 1;
                Ok(PolySymbol::constant(Complex64::i(), h))
            }
            Some('h') => {
                if self.s[self.i..].starts_with(&['h', 'b', 'a', 'r']) {
                    self.i += 4;
                    Ok(PolySymbol::constant(h.into(), h))
                } else {
                    Err(Error::Parse(format!("unknown symbol at {}", self.i)))
                }
            }
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let start = self.i;
                while let Some(c) = self.peek() {
                    let exp_sign = (c == '+' || c == '-')
                        && self.i > start
                        && matches!(self.s[self.i - 1], 'e' | 'E');
                    if c.is_ascii_digit() || c == '.' || c == 'e' || c == 'E' || exp_sign {
                        self.i += 1;
                    } else {
                        break;
                    }
                }
                let t: String = self.s[start..self.i].iter().collect();
                let v: f64 = t.parse().map_err(|_| Error::Parse(format!("bad number '{t}'")))?;
                Ok(PolySymbol::constant(v.into(), h))
            }
            Some(c) => Err(Error::Parse(format!("unexpected '{c}' at {}", self.i))),
            None => Err(Error::Parse("unexpected end of input".into())),
        }
    }
}

/// Moyal product, exact on polynomials:
/// `sum_{m,n} (i hbar/2)^{m+n} (-1)^m / (m! n!) (d_p^m d_x^n f)(d_p^n d_x^m g)`.
pub fn star_poly(f: &PolySymbol, g: &PolySymbol) -> Result<PolySymbol> {
    let degree = f.degree() + g.degree();
    if degree > MAX_DEGREE {
        return Err(Error::DegreeOverflow { degree, max: MAX_DEGREE });
    }
    let ih2 = Complex64::new(0.0, 0.5 * f.hbar);
    let mut out = PolySymbol::zero(f.hbar);
    for m in 0..=MAX_DEGREE {
        for n in 0..=MAX_DEGREE - m {
            let a = f.derivative(n, m);
            let b = g.derivative(m, n);
            if a.terms().next().is_none() || b.terms().next().is_none() {
                continue;
            }
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            let k = ih2.powu((m + n) as u32) * (sign / (factorial(m) * factorial(n)));
            out = out.add(&a.mul(&b)?.scale(k));
        }
    }
    Ok(out)
}

/// `(f * g - g * f) / (i hbar)`.
pub fn moyal_bracket_poly(f: &PolySymbol, g: &PolySymbol) -> Result<PolySymbol> {
    let d = star_poly(f, g)?.sub(&star_poly(g, f)?);
    Ok(d.scale(Complex64::new(0.0, -1.0 / f.hbar)))
}

/// `df/dx dg/dp - df/dp dg/dx`.
pub fn poisson_bracket(f: &PolySymbol, g: &PolySymbol) -> Result<PolySymbol> {
    Ok(f.derivative(1, 0).mul(&g.derivative(0, 1))?.sub(&f.derivative(0, 1).mul(&g.derivative(1, 0))?))
}
