//! Finite fields `F_q`, `q = p^e`, with table-driven arithmetic.
//!
//! An element is stored as its code `c_0 + c_1 p + ... + c_{e-1} p^{e-1}` where
//! `c_0 + c_1 x + ... + c_{e-1} x^{e-1}` is its canonical representative modulo
//! the defining polynomial. For prime fields the code is the residue itself, so
//! `0` and `1` always have codes `0` and `1`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::Poly;

/// Fields larger than this are rejected unless a caller raises the limit.
pub const DEFAULT_MAX_Q: u32 = 25;

/// Hard ceiling: matrix entries are packed into single bytes.
pub const ABSOLUTE_MAX_Q: u32 = 255;

/// An element of some `F_q`, identified by its code.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(pub(crate) u8);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn code(self) -> u8 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct Inner {
    p: u32,
    e: u32,
    q: u32,
    /// Ascending coefficients of the monic defining polynomial (length e + 1), e > 1 only.
    modulus: Option<Vec<u32>>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    primitive: u8,
}

/// The field `F_q`. Cheap to clone; two values with the same `(p, e)` are equal.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.e == other.0.e
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.0.q)
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn digits(mut code: u32, p: u32, e: u32) -> Vec<u32> {
    (0..e)
        .map(|_| {
            let d = code % p;
            code /= p;
            d
        })
        .collect()
}

fn undigits(ds: &[u32], p: u32) -> u32 {
    ds.iter().rev().fold(0, |acc, &d| acc * p + d)
}

impl Field {
    /// `F_p`.
    pub fn prime(p: u32) -> Result<Field> {
        Field::new(p, 1)
    }

    /// `F_{p^e}` with the default size limit.
    pub fn new(p: u32, e: u32) -> Result<Field> {
        Field::with_limit(p, e, DEFAULT_MAX_Q)
    }

    /// `F_q` from the order alone.
    pub fn from_order(q: u32) -> Result<Field> {
        Field::from_order_with_limit(q, DEFAULT_MAX_Q)
    }

    pub fn from_order_with_limit(q: u32, max_q: u32) -> Result<Field> {
        if q < 2 {
            return Err(Error::InvalidField(format!("q = {q} is not a prime power")));
        }
        let p = (2..=q).find(|d| q.is_multiple_of(*d)).unwrap();
        let mut e = 0;
        let mut r = q;
        while r.is_multiple_of(p) {
            r /= p;
            e += 1;
        }
        if r != 1 {
            return Err(Error::InvalidField(format!("q = {q} is not a prime power")));
        }
        Field::with_limit(p, e, max_q)
    }

    pub fn with_limit(p: u32, e: u32, max_q: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("p = {p} is not prime")));
        }
        if e == 0 {
            return Err(Error::InvalidField("exponent e must be at least 1".into()));
        }
        let q = (p as u64).checked_pow(e).unwrap_or(u64::MAX);
        let limit = max_q.min(ABSOLUTE_MAX_Q) as u64;
        if q > limit {
            return Err(Error::InvalidField(format!(
                "q = {p}^{e} exceeds the configured bound {limit}"
            )));
        }
        let q = q as u32;
        if e == 1 {
            return Ok(Field(Arc::new(Self::prime_tables(p))));
        }
        let base = Field::prime(p)?;
        let modulus = Self::least_irreducible(&base, e);
        Ok(Field(Arc::new(Self::extension_tables(p, e, q, modulus))))
    }

    /// Least monic irreducible of degree `e` over `F_p`, scanning the lower
    /// coefficients by their code `a_0 + a_1 p + ...` in ascending order.
    fn least_irreducible(base: &Field, e: u32) -> Vec<u32> {
        let p = base.p();
        let count = p.pow(e);
        for code in 0..count {
            let mut coeffs: Vec<Elem> = digits(code, p, e)
                .into_iter()
                .map(|d| Elem(d as u8))
                .collect();
            coeffs.push(Elem::ONE);
            let f = Poly::from_coeffs(coeffs);
            if f.is_irreducible(base) {
                let mut m = digits(code, p, e);
                m.push(1);
                return m;
            }
        }
        unreachable!("an irreducible polynomial of every degree exists over F_p")
    }

    fn prime_tables(p: u32) -> Inner {
        let q = p as usize;
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for a in 0..q {
            for b in 0..q {
                add[a * q + b] = ((a + b) % q) as u8;
                mul[a * q + b] = ((a * b) % q) as u8;
            }
        }
        let neg = (0..q).map(|a| ((q - a) % q) as u8).collect();
        // Extended Euclid on integers.
        let inv = (0..q)
            .map(|a| {
                if a == 0 {
                    return 0;
                }
                let (mut r0, mut r1) = (q as i64, a as i64);
                let (mut s0, mut s1) = (0i64, 1i64);
                while r1 != 0 {
                    let quo = r0 / r1;
                    (r0, r1) = (r1, r0 - quo * r1);
                    (s0, s1) = (s1, s0 - quo * s1);
                }
                s0.rem_euclid(q as i64) as u8
            })
            .collect();
        let mut inner = Inner {
            p,
            e: 1,
            q: p,
            modulus: None,
            add,
            mul,
            neg,
            inv,
            primitive: 0,
        };
        inner.primitive = find_primitive(&inner);
        inner
    }

    fn extension_tables(p: u32, e: u32, q: u32, modulus: Vec<u32>) -> Inner {
        let qs = q as usize;
        let ed = e as usize;
        let mut add = vec![0u8; qs * qs];
        let mut mul = vec![0u8; qs * qs];
        for a in 0..q {
            let da = digits(a, p, e);
            for b in 0..q {
                let db = digits(b, p, e);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a as usize * qs + b as usize] = undigits(&sum, p) as u8;

                let mut prod = vec![0u32; 2 * ed - 1];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                for k in (ed..prod.len()).rev() {
                    let c = prod[k];
                    if c == 0 {
                        continue;
                    }
                    prod[k] = 0;
                    for (i, m) in modulus[..ed].iter().enumerate() {
                        let idx = k - ed + i;
                        prod[idx] = (prod[idx] + p * p - (c * m) % p) % p;
                    }
                }
                mul[a as usize * qs + b as usize] = undigits(&prod[..ed], p) as u8;
            }
        }
        let neg = (0..q)
            .map(|a| {
                let d: Vec<u32> = digits(a, p, e).iter().map(|x| (p - x) % p).collect();
                undigits(&d, p) as u8
            })
            .collect();
        let inv = (0..q)
            .map(|a| if a == 0 { 0 } else { poly_inverse_mod(a, p, e, &modulus) })
            .collect();
        let mut inner = Inner {
            p,
            e,
            q,
            modulus: Some(modulus),
            add,
            mul,
            neg,
            inv,
            primitive: 0,
        };
        inner.primitive = find_primitive(&inner);
        inner
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.0.p
    }

    #[inline]
    pub fn e(&self) -> u32 {
        self.0.e
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.0.q
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.0.q as usize
    }

    /// Ascending coefficients of the defining polynomial; `None` for prime fields.
    pub fn modulus(&self) -> Option<&[u32]> {
        self.0.modulus.as_deref()
    }

    /// A fixed generator of the multiplicative group.
    pub fn primitive(&self) -> Elem {
        Elem(self.0.primitive)
    }

    pub fn elem(&self, code: u32) -> Result<Elem> {
        if code >= self.0.q {
            return Err(Error::InvalidField(format!(
                "code {code} out of range for F_{}",
                self.0.q
            )));
        }
        Ok(Elem(code as u8))
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, k: i64) -> Elem {
        Elem(k.rem_euclid(self.0.p as i64) as u8)
    }

    /// All elements in code order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.0.q).map(|c| Elem(c as u8))
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Elem> {
        (1..self.0.q).map(|c| Elem(c as u8))
    }

    /// Coefficients `(c_0, ..., c_{e-1})` of the representative polynomial in `x`.
    pub fn coeffs(&self, a: Elem) -> Vec<u32> {
        digits(a.0 as u32, self.0.p, self.0.e)
    }

    pub fn from_coeffs(&self, cs: &[u32]) -> Result<Elem> {
        if cs.len() != self.0.e as usize || cs.iter().any(|&c| c >= self.0.p) {
            return Err(Error::InvalidField(format!(
                "coefficient tuple {cs:?} is not canonical for F_{}",
                self.0.q
            )));
        }
        Ok(Elem(undigits(cs, self.0.p) as u8))
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.0.add[a.0 as usize * self.0.q as usize + b.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.0.neg[a.0 as usize])
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.0.mul[a.0 as usize * self.0.q as usize + b.0 as usize])
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Elem(self.0.inv[a.0 as usize]))
    }

    /// Inverse without the zero check; callers guarantee `a != 0`.
    #[inline]
    pub(crate) fn inv_nz(&self, a: Elem) -> Elem {
        debug_assert!(!a.is_zero());
        Elem(self.0.inv[a.0 as usize])
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Square-and-multiply.
    pub fn pow(&self, a: Elem, mut k: u64) -> Elem {
        let mut base = a;
        let mut acc = Elem::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// Raw tables for hot loops: `(add, mul, neg, inv, q)`.
    #[inline]
    pub(crate) fn tables(&self) -> (&[u8], &[u8], &[u8], &[u8], usize) {
        (
            &self.0.add,
            &self.0.mul,
            &self.0.neg,
            &self.0.inv,
            self.0.q as usize,
        )
    }

    /// Textual form: a residue for prime fields, a polynomial in `x` otherwise.
    pub fn format(&self, a: Elem) -> String {
        if self.0.e == 1 {
            return a.0.to_string();
        }
        let cs = self.coeffs(a);
        let mut out = String::new();
        for (k, &c) in cs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !out.is_empty() {
                out.push('+');
            }
            match (k, c) {
                (0, c) => out.push_str(&c.to_string()),
                (1, 1) => out.push('x'),
                (1, c) => out.push_str(&format!("{c}*x")),
                (k, 1) => out.push_str(&format!("x^{k}")),
                (k, c) => out.push_str(&format!("{c}*x^{k}")),
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// Parses an element. Prime fields accept (possibly negative) integers;
    /// extension fields accept polynomials in `x` with integer coefficients.
    pub fn parse(&self, s: &str) -> Result<Elem> {
        let text = s.trim();
        if text.is_empty() {
            return Err(Error::parse(s, 0, "a field element"));
        }
        if self.0.e == 1 {
            return text
                .replace('\u{2212}', "-")
                .parse::<i64>()
                .map(|k| self.from_int(k))
                .map_err(|_| Error::parse(s, 0, "an integer residue"));
        }
        let text = text.replace('\u{2212}', "-");
        let mut acc = Elem::ZERO;
        let mut pos = 0;
        let bytes = text.as_bytes();
        while pos < bytes.len() {
            let mut negative = false;
            if bytes[pos] == b'+' || bytes[pos] == b'-' {
                negative = bytes[pos] == b'-';
                pos += 1;
            } else if pos != 0 {
                return Err(Error::parse(s, pos, "'+' or '-'"));
            }
            let start = pos;
            while pos < bytes.len() && bytes[pos] != b'+' && bytes[pos] != b'-' {
                pos += 1;
            }
            let term = text[start..pos].trim();
            let value = self
                .parse_x_term(term)
                .ok_or_else(|| Error::parse(s, start, "c, x, c*x, x^k or c*x^k"))?;
            acc = if negative {
                self.sub(acc, value)
            } else {
                self.add(acc, value)
            };
        }
        Ok(acc)
    }

    fn parse_x_term(&self, term: &str) -> Option<Elem> {
        let (coef, power) = match term.find('x') {
            None => (term, None),
            Some(i) => {
                let coef = term[..i].trim().trim_end_matches('*').trim();
                let rest = term[i + 1..].trim();
                let power = if rest.is_empty() {
                    1u64
                } else {
                    rest.strip_prefix('^')?.trim().parse().ok()?
                };
                (coef, Some(power))
            }
        };
        let c = if coef.is_empty() {
            power?;
            Elem::ONE
        } else {
            self.from_int(coef.parse::<i64>().ok()?)
        };
        let x = if self.0.e > 1 { Elem(self.0.p as u8) } else { Elem::ONE };
        Some(match power {
            None => c,
            Some(k) => self.mul(c, self.pow(x, k)),
        })
    }
}

fn find_primitive(inner: &Inner) -> u8 {
    let q = inner.q as usize;
    let order = inner.q - 1;
    // For extension fields prefer the generator x itself.
    let start = if inner.e > 1 { inner.p } else { 1 };
    let candidates = (start..inner.q).chain(1..start);
    for g in candidates {
        let mut x = 1u8;
        let mut k = 0;
        loop {
            x = inner.mul[x as usize * q + g as usize];
            k += 1;
            if x == 1 {
                break;
            }
        }
        if k == order {
            return g as u8;
        }
    }
    1
}

/// Inverse of the element with the given code by extended Euclid in `F_p[x]`.
fn poly_inverse_mod(code: u32, p: u32, e: u32, modulus: &[u32]) -> u8 {
    let pi = p as i64;
    let md = |v: i64| v.rem_euclid(pi);
    let inv_p = |a: i64| -> i64 {
        let a = md(a);
        (1..pi).find(|b| (a * b) % pi == 1).unwrap()
    };
    let trim = |v: &mut Vec<i64>| {
        while v.len() > 1 && *v.last().unwrap() == 0 {
            v.pop();
        }
    };
    let deg = |v: &Vec<i64>| -> isize {
        if v.len() == 1 && v[0] == 0 {
            -1
        } else {
            v.len() as isize - 1
        }
    };
    let mut r0: Vec<i64> = modulus.iter().map(|&c| c as i64).collect();
    let mut r1: Vec<i64> = digits(code, p, e).iter().map(|&c| c as i64).collect();
    trim(&mut r1);
    let mut s0: Vec<i64> = vec![0];
    let mut s1: Vec<i64> = vec![1];
    while deg(&r1) >= 0 {
        // (quotient, remainder) of r0 by r1
        let mut rem = r0.clone();
        let d1 = deg(&r1) as usize;
        let lead_inv = inv_p(r1[d1]);
        let mut quo = vec![0i64; rem.len().max(d1 + 1) - d1];
        while deg(&rem) >= d1 as isize {
            let dr = deg(&rem) as usize;
            let c = md(rem[dr] * lead_inv);
            quo[dr - d1] = c;
            for i in 0..=d1 {
                rem[dr - d1 + i] = md(rem[dr - d1 + i] - c * r1[i]);
            }
            trim(&mut rem);
        }
        trim(&mut quo);
        // s_next = s0 - quo * s1
        let mut prod = vec![0i64; quo.len() + s1.len() - 1];
        for (i, a) in quo.iter().enumerate() {
            for (j, b) in s1.iter().enumerate() {
                prod[i + j] = md(prod[i + j] + a * b);
            }
        }
        let len = prod.len().max(s0.len());
        let mut s2 = vec![0i64; len];
        for (i, v) in s2.iter_mut().enumerate() {
            *v = md(s0.get(i).copied().unwrap_or(0) - prod.get(i).copied().unwrap_or(0));
        }
        trim(&mut s2);
        r0 = std::mem::replace(&mut r1, rem);
        s0 = std::mem::replace(&mut s1, s2);
    }
    // r0 is a nonzero constant; normalise.
    let c = inv_p(r0[0]);
    let mut out: Vec<u32> = s0.iter().map(|&v| md(v * c) as u32).collect();
    out.resize(e as usize, 0);
    undigits(&out, p) as u8
}
