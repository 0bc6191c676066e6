//! Polynomials over `F_q`, Rabin's irreducibility test, enumeration of the
//! monic irreducibles other than `t`, and the blocks `J(f)` and `J_m(f)`.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::matrix::Matrix;

/// Polynomial in `t` with ascending coefficients; the zero polynomial has none.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Elem>,
}

/// Orders by degree, then by coefficients from `t^{d-1}` down to the constant
/// term (so each degree is scanned in increasing coefficient code).
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Poly {
    pub fn from_coeffs(mut coeffs: Vec<Elem>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly {
            coeffs: vec![Elem::ONE],
        }
    }

    /// The variable `t`.
    pub fn t() -> Poly {
        Poly {
            coeffs: vec![Elem::ZERO, Elem::ONE],
        }
    }

    pub fn constant(c: Elem) -> Poly {
        Poly::from_coeffs(vec![c])
    }

    /// `t - xi`.
    pub fn linear(xi: Elem, field: &Field) -> Poly {
        Poly {
            coeffs: vec![field.neg(xi), Elem::ONE],
        }
    }

    /// `t - 1`.
    pub fn t_minus_one(field: &Field) -> Poly {
        Poly::linear(Elem::ONE, field)
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree of a nonzero polynomial.
    pub fn deg(&self) -> usize {
        self.degree().expect("degree of the zero polynomial")
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).copied().unwrap_or(Elem::ZERO)
    }

    pub fn leading(&self) -> Elem {
        self.coeffs.last().copied().unwrap_or(Elem::ZERO)
    }

    pub fn constant_term(&self) -> Elem {
        self.coeff(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Elem::ONE
    }

    pub fn add(&self, other: &Poly, field: &Field) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::from_coeffs(
            (0..n)
                .map(|i| field.add(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Poly, field: &Field) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::from_coeffs(
            (0..n)
                .map(|i| field.sub(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn scale(&self, c: Elem, field: &Field) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|&a| field.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Poly, field: &Field) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Elem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = field.add(out[i + j], field.mul(a, b));
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn pow(&self, k: u32, field: &Field) -> Poly {
        (0..k).fold(Poly::one(), |acc, _| acc.mul(self, field))
    }

    /// Quotient and remainder.
    pub fn divmod(&self, divisor: &Poly, field: &Field) -> Result<(Poly, Poly)> {
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = field.inv_nz(divisor.leading());
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quo = vec![Elem::ZERO; rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = field.mul(rem[k], lead_inv);
            if c.is_zero() {
                continue;
            }
            quo[k - dd] = c;
            for (i, &b) in divisor.coeffs.iter().enumerate() {
                let idx = k - dd + i;
                rem[idx] = field.sub(rem[idx], field.mul(c, b));
            }
        }
        rem.truncate(dd);
        Ok((Poly::from_coeffs(quo), Poly::from_coeffs(rem)))
    }

    pub fn rem(&self, divisor: &Poly, field: &Field) -> Result<Poly> {
        Ok(self.divmod(divisor, field)?.1)
    }

    pub fn make_monic(&self, field: &Field) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(field.inv_nz(self.leading()), field)
    }

    /// Monic gcd (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Poly, field: &Field) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b, field).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.make_monic(field)
    }

    /// `self^k mod m`.
    pub fn pow_mod(&self, mut k: u64, m: &Poly, field: &Field) -> Result<Poly> {
        let mut base = self.rem(m, field)?;
        let mut acc = Poly::one().rem(m, field)?;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base, field).rem(m, field)?;
            }
            base = base.mul(&base, field).rem(m, field)?;
            k >>= 1;
        }
        Ok(acc)
    }

    /// Rabin's test: a monic `f` of degree `d` is irreducible iff
    /// `t^(q^d) = t mod f` and `gcd(t^(q^(d/r)) - t, f) = 1` for each prime `r | d`.
    pub fn is_irreducible(&self, field: &Field) -> bool {
        let Some(d) = self.degree() else {
            return false;
        };
        if d == 0 {
            return false;
        }
        if d == 1 {
            return true;
        }
        let f = self.make_monic(field);
        let q = field.q() as u64;
        // frob[i] = t^(q^i) mod f
        let mut frob = Vec::with_capacity(d + 1);
        frob.push(Poly::t().rem(&f, field).unwrap());
        for i in 1..=d {
            let next = frob[i - 1].pow_mod(q, &f, field).unwrap();
            frob.push(next);
        }
        let t = Poly::t().rem(&f, field).unwrap();
        if frob[d] != t {
            return false;
        }
        prime_divisors(d).into_iter().all(|r| {
            let h = frob[d / r].sub(&t, field);
            h.gcd(&f, field) == Poly::one()
        })
    }

    /// Evaluates at a square matrix by Horner's rule.
    pub fn eval_matrix(&self, a: &Matrix, field: &Field) -> Matrix {
        let n = a.rows();
        let mut acc = Matrix::zeros(n, n);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(a, field).expect("square");
            for i in 0..n {
                let v = field.add(acc.get(i, i), c);
                acc.set(i, i, v);
            }
        }
        acc
    }

    /// `J(f)`: ones on the superdiagonal and last row `(a_1, ..., a_d)` where
    /// `f = t^d - sum a_i t^(i-1)`.
    pub fn companion(&self, field: &Field) -> Matrix {
        debug_assert!(self.is_monic());
        let d = self.deg();
        let mut m = Matrix::zeros(d, d);
        for i in 0..d.saturating_sub(1) {
            m.set(i, i + 1, Elem::ONE);
        }
        for j in 0..d {
            m.set(d - 1, j, field.neg(self.coeff(j)));
        }
        m
    }

    /// `J_m(f)`: `m` diagonal copies of `J(f)` with `I_d` on the block superdiagonal.
    pub fn jordan_block(&self, m: usize, field: &Field) -> Matrix {
        let d = self.deg();
        let c = self.companion(field);
        let mut out = Matrix::zeros(d * m, d * m);
        for b in 0..m {
            for i in 0..d {
                for j in 0..d {
                    out.set(b * d + i, b * d + j, c.get(i, j));
                }
                if b + 1 < m {
                    out.set(b * d + i, (b + 1) * d + i, Elem::ONE);
                }
            }
        }
        out
    }

    /// Parses the polynomial grammar: terms `c`, `c*t^k`, `c*t`, `t^k`, `t`
    /// joined by `+`/`-`. Extension-field coefficients containing `+` or `-`
    /// must be parenthesised.
    pub fn parse(text: &str, field: &Field) -> Result<Poly> {
        let src = text.replace('\u{2212}', "-");
        let bytes = src.as_bytes();
        if src.trim().is_empty() {
            return Err(Error::parse(text, 0, "a polynomial"));
        }
        let mut terms: Vec<(usize, bool, &str)> = Vec::new();
        let mut depth = 0i32;
        let mut start = 0;
        let mut negative = false;
        let mut first = true;
        for (i, &b) in bytes.iter().enumerate() {
            match b {
                b'(' => depth += 1,
                b')' => {
                    depth -= 1;
                    if depth < 0 {
                        return Err(Error::parse(text, i, "balanced parentheses"));
                    }
                }
                b'+' | b'-' if depth == 0 => {
                    let piece = &src[start..i];
                    if piece.trim().is_empty() {
                        if !first {
                            return Err(Error::parse(text, i, "a term before the sign"));
                        }
                    } else {
                        terms.push((start, negative, piece));
                    }
                    first = false;
                    negative = b == b'-';
                    start = i + 1;
                }
                _ => {}
            }
        }
        if depth != 0 {
            return Err(Error::parse(text, bytes.len(), "closing parenthesis"));
        }
        let piece = &src[start..];
        if piece.trim().is_empty() {
            return Err(Error::parse(text, bytes.len(), "a term"));
        }
        terms.push((start, negative, piece));

        let mut coeffs: Vec<Elem> = Vec::new();
        for (pos, neg, term) in terms {
            let (c, k) = parse_term(term.trim(), field)
                .ok_or_else(|| Error::parse(text, pos, "c, c*t^k, c*t, t^k or t"))?;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, Elem::ZERO);
            }
            let c = if neg { field.neg(c) } else { c };
            coeffs[k] = field.add(coeffs[k], c);
        }
        Ok(Poly::from_coeffs(coeffs))
    }

    /// Descending-degree form, e.g. `t^2+2*t+1`.
    pub fn format(&self, field: &Field) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for k in (0..self.coeffs.len()).rev() {
            let c = self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            if !out.is_empty() {
                out.push('+');
            }
            let mut cs = field.format(c);
            if cs.contains('+') {
                cs = format!("({cs})");
            }
            match k {
                0 => out.push_str(&cs),
                _ => {
                    if c != Elem::ONE {
                        out.push_str(&cs);
                        out.push('*');
                    }
                    out.push('t');
                    if k > 1 {
                        out.push_str(&format!("^{k}"));
                    }
                }
            }
        }
        out
    }
}

fn parse_term(term: &str, field: &Field) -> Option<(Elem, usize)> {
    let (coef, k) = match term.rfind('t') {
        None => (term, 0usize),
        Some(i) => {
            let rest = term[i + 1..].trim();
            let k = if rest.is_empty() {
                1
            } else {
                rest.strip_prefix('^')?.trim().parse().ok()?
            };
            let coef = term[..i].trim();
            let coef = match coef.strip_suffix('*') {
                Some(c) => c.trim(),
                None if coef.is_empty() => "",
                None => return None,
            };
            (coef, k)
        }
    };
    let coef = coef.trim();
    let c = if coef.is_empty() {
        if k == 0 {
            return None;
        }
        Elem::ONE
    } else {
        let inner = coef
            .strip_prefix('(')
            .and_then(|c| c.strip_suffix(')'))
            .unwrap_or(coef);
        field.parse(inner).ok()?
    };
    Some((c, k))
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// All monic polynomials of degree `d`, in the polynomial order.
pub fn monic_polys(field: &Field, d: usize) -> impl Iterator<Item = Poly> + '_ {
    let q = field.q() as u64;
    let count = q.pow(d as u32);
    (0..count).map(move |code| {
        // code enumerates (a_{d-1}, ..., a_0) most-significant first.
        let mut coeffs = vec![Elem::ZERO; d + 1];
        let mut c = code;
        for slot in coeffs.iter_mut().take(d) {
            *slot = Elem((c % q) as u8);
            c /= q;
        }
        coeffs[d] = Elem::ONE;
        Poly::from_coeffs(coeffs)
    })
}

/// The monic irreducibles of degree at most `dmax` other than `t`, sorted.
pub fn enumerate_phi(field: &Field, dmax: usize) -> Vec<Poly> {
    let t = Poly::t();
    (1..=dmax)
        .flat_map(|d| monic_polys(field, d))
        .filter(|f| *f != t && f.is_irreducible(field))
        .collect()
}
