//! Conjugacy types of `GL_n(q)`: partition-valued maps on the monic
//! irreducibles other than `t`, their modified (size-independent) form,
//! canonical representatives, and the associated counting formulas.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed};

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::matrix::{char_poly_codes, mul_into, rank_in_place, Matrix};
use crate::poly::{enumerate_phi, Poly};

/// Weakly decreasing list of positive parts.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Sorts the parts into decreasing order; zero parts are rejected.
    pub fn new(mut parts: Vec<u32>) -> Result<Partition> {
        if parts.contains(&0) {
            return Err(Error::InvalidParameters("partition parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition(parts))
    }

    pub fn empty() -> Partition {
        Partition(Vec::new())
    }

    /// `(1^k)`.
    pub fn column(k: u32) -> Partition {
        Partition(vec![1; k as usize])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|λ|`.
    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `ℓ(λ)`.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// `n(λ) = Σ (i-1) λ_i`.
    pub fn n_lambda(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &p)| i as u64 * p as u64)
            .sum()
    }

    /// Multiplicities `m_i(λ)` keyed by part size.
    pub fn multiplicities(&self) -> BTreeMap<u32, u32> {
        let mut m = BTreeMap::new();
        for &p in &self.0 {
            *m.entry(p).or_insert(0) += 1;
        }
        m
    }

    pub fn conjugate(&self) -> Partition {
        let largest = self.0.first().copied().unwrap_or(0);
        Partition(
            (1..=largest)
                .map(|i| self.0.iter().filter(|&&p| p >= i).count() as u32)
                .collect(),
        )
    }

    /// Multiset union of parts.
    pub fn union(&self, other: &Partition) -> Partition {
        let mut parts = self.0.clone();
        parts.extend_from_slice(&other.0);
        Partition::new(parts).expect("positive parts")
    }

    /// All partitions of `n`, in reverse lexicographic order.
    pub fn all(n: u32) -> Vec<Partition> {
        fn rec(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if n == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=n.min(max)).rev() {
                cur.push(p);
                rec(n - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }

    pub fn parse(text: &str) -> Result<Partition> {
        let parts = text
            .split(',')
            .map(|s| s.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::parse(text, 0, "comma-separated positive integers"))?;
        Partition::new(parts).map_err(|_| Error::parse(text, 0, "positive parts"))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

/// Whether a type describes a matrix in a fixed `G_n` or an element of `G_∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Plain,
    Modified,
}

impl Role {
    fn name(self) -> &'static str {
        match self {
            Role::Plain => "plain",
            Role::Modified => "modified",
        }
    }
}

/// Partition-valued map on Φ, kept sorted by the polynomial order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GlType {
    role: Role,
    entries: BTreeMap<Poly, Partition>,
}

impl GlType {
    pub fn empty(role: Role) -> GlType {
        GlType {
            role,
            entries: BTreeMap::new(),
        }
    }

    /// Builds a type, merging repeated keys by multiset union of parts.
    pub fn from_entries(
        role: Role,
        entries: impl IntoIterator<Item = (Poly, Partition)>,
    ) -> Result<GlType> {
        let mut ty = GlType::empty(role);
        for (f, lambda) in entries {
            ty.insert(f, lambda)?;
        }
        Ok(ty)
    }

    /// Single cycle `(r)_f`.
    pub fn single(role: Role, f: Poly, parts: &[u32]) -> Result<GlType> {
        GlType::from_entries(role, [(f, Partition::new(parts.to_vec())?)])
    }

    pub fn insert(&mut self, f: Poly, lambda: Partition) -> Result<()> {
        if !f.is_monic() || f == Poly::t() || f.degree().unwrap_or(0) == 0 {
            return Err(Error::InvalidParameters(
                "type keys must be monic of positive degree and differ from t".into(),
            ));
        }
        if f.constant_term().is_zero() {
            return Err(Error::InvalidParameters("type keys must not be divisible by t".into()));
        }
        if lambda.is_empty() {
            return Ok(());
        }
        let merged = match self.entries.remove(&f) {
            Some(old) => old.union(&lambda),
            None => lambda,
        };
        self.entries.insert(f, merged);
        Ok(())
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn entries(&self) -> &BTreeMap<Poly, Partition> {
        &self.entries
    }

    pub fn get(&self, f: &Poly) -> Option<&Partition> {
        self.entries.get(f)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `‖λ‖ = Σ d(f) |λ(f)|`.
    pub fn norm(&self) -> usize {
        self.entries
            .iter()
            .map(|(f, p)| f.deg() * p.size() as usize)
            .sum()
    }

    /// `λ^e = λ(t-1)`.
    pub fn unipotent_part(&self, field: &Field) -> Partition {
        self.entries
            .get(&Poly::t_minus_one(field))
            .cloned()
            .unwrap_or_default()
    }

    /// `‖μ‖ + ℓ(μ^e)`: the least `n` with a nonempty class in `G_n` (modified types).
    pub fn min_size(&self, field: &Field) -> usize {
        self.norm() + self.unipotent_part(field).len()
    }

    pub fn fits(&self, n: usize, field: &Field) -> bool {
        match self.role {
            Role::Modified => self.min_size(field) <= n,
            Role::Plain => self.norm() == n,
        }
    }

    /// Key-wise multiset union `λ ∪ μ`.
    pub fn union(&self, other: &GlType) -> GlType {
        let mut out = self.clone();
        for (f, p) in &other.entries {
            out.insert(f.clone(), p.clone()).expect("valid key");
        }
        out
    }

    /// `det J_λ` for a plain type: `Π_f ((-1)^d f(0))^{|λ(f)|}`.
    pub fn determinant(&self, field: &Field) -> Elem {
        self.entries.iter().fold(Elem::ONE, |acc, (f, p)| {
            let mut c = f.constant_term();
            if f.deg() % 2 == 1 {
                c = field.neg(c);
            }
            field.mul(acc, field.pow(c, p.size() as u64))
        })
    }

    fn require(&self, role: Role) -> Result<()> {
        if self.role == role {
            Ok(())
        } else {
            Err(Error::RoleMismatch {
                expected: role.name(),
            })
        }
    }

    /// Semicolon-joined `partition@poly` items; the empty type is `∅`.
    pub fn format(&self, field: &Field) -> String {
        if self.entries.is_empty() {
            return "∅".into();
        }
        self.entries
            .iter()
            .map(|(f, p)| format!("{p}@{}", f.format(field)))
            .collect::<Vec<_>>()
            .join(";")
    }

    pub fn parse(text: &str, role: Role, field: &Field) -> Result<GlType> {
        let trimmed = text.trim();
        let mut ty = GlType::empty(role);
        if trimmed.is_empty() || trimmed == "∅" {
            return Ok(ty);
        }
        let mut offset = 0;
        for item in text.split(';') {
            let Some((parts, poly)) = item.split_once('@') else {
                return Err(Error::parse(text, offset, "partition@poly"));
            };
            let lambda = Partition::parse(parts)
                .map_err(|_| Error::parse(text, offset, "comma-separated positive parts"))?;
            let f = Poly::parse(poly, field).map_err(|e| match e {
                Error::Parse {
                    position, expected, ..
                } => Error::parse(text, offset + parts.len() + 1 + position, expected),
                other => other,
            })?;
            if !f.is_irreducible(field) {
                return Err(Error::parse(
                    text,
                    offset + parts.len() + 1,
                    "a monic irreducible polynomial",
                ));
            }
            ty.insert(f, lambda)
                .map_err(|_| Error::parse(text, offset + parts.len() + 1, "a monic irreducible other than t"))?;
            offset += item.len() + 1;
        }
        Ok(ty)
    }
}

// ---------------------------------------------------------------------------
// Type extraction
// ---------------------------------------------------------------------------

/// Precomputed irreducibles and a memo of characteristic-polynomial
/// factorizations, reused across many type extractions of one size.
#[derive(Clone)]
pub struct TypeContext {
    field: Field,
    n: usize,
    phi: Vec<Poly>,
    factors: HashMap<Poly, Vec<(usize, usize)>>,
    scratch: Vec<u8>,
    scratch2: Vec<u8>,
}

impl TypeContext {
    pub fn new(field: &Field, n: usize) -> TypeContext {
        TypeContext {
            field: field.clone(),
            n,
            phi: enumerate_phi(field, n),
            factors: HashMap::new(),
            scratch: vec![0; n * n],
            scratch2: vec![0; n * n],
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn factor(&mut self, cp: &Poly) -> Vec<(usize, usize)> {
        if let Some(f) = self.factors.get(cp) {
            return f.clone();
        }
        let field = &self.field;
        let mut rest = cp.clone();
        let mut out = Vec::new();
        for (idx, f) in self.phi.iter().enumerate() {
            let rd = rest.deg();
            if rd == 0 {
                break;
            }
            if f.deg() > rd {
                break;
            }
            let mut mult = 0;
            loop {
                let (quo, rem) = rest.divmod(f, field).expect("monic divisor");
                if !rem.is_zero() {
                    break;
                }
                rest = quo;
                mult += 1;
            }
            if mult > 0 {
                out.push((idx, mult));
            }
        }
        debug_assert_eq!(rest, Poly::one(), "characteristic polynomial fully factored");
        self.factors.insert(cp.clone(), out.clone());
        out
    }

    /// `f(g)` into `self.scratch`.
    fn eval_into_scratch(&mut self, f: &Poly, g: &[u8]) {
        let n = self.n;
        let field = &self.field;
        let acc = &mut self.scratch;
        acc.fill(0);
        for &c in f.coeffs().iter().rev() {
            mul_into(&acc.clone(), g, &mut self.scratch2, n, n, n, field);
            acc.copy_from_slice(&self.scratch2);
            for i in 0..n {
                acc[i * n + i] = field.add(Elem(acc[i * n + i]), c).code();
            }
        }
    }

    /// Kernel dimensions of `M, M^2, ...` for `M = f(g)`, stopping once `target` is reached.
    fn kernel_profile(&mut self, f: &Poly, g: &[u8], target: usize) -> Vec<usize> {
        let n = self.n;
        self.eval_into_scratch(f, g);
        let m = self.scratch.clone();
        let mut power = m.clone();
        let mut dims = Vec::new();
        let mut buf = vec![0u8; n * n];
        for _ in 0..n {
            buf.copy_from_slice(&power);
            let k = n - rank_in_place(&mut buf, n, n, &self.field);
            dims.push(k);
            if k >= target || (dims.len() > 1 && dims[dims.len() - 2] == k) {
                break;
            }
            let mut next = vec![0u8; n * n];
            mul_into(&power, &m, &mut next, n, n, n, &self.field);
            power = next;
        }
        dims
    }

    /// Plain type of an invertible `n x n` matrix.
    pub fn type_of(&mut self, g: &Matrix) -> Result<GlType> {
        if g.rows() != self.n || !g.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "type context for n = {} given a {}x{} matrix",
                self.n,
                g.rows(),
                g.cols()
            )));
        }
        self.type_of_codes(g.bytes())
    }

    pub(crate) fn type_of_codes(&mut self, g: &[u8]) -> Result<GlType> {
        let n = self.n;
        let cp = char_poly_codes(g, n, &self.field);
        if cp.constant_term().is_zero() {
            return Err(Error::Singular);
        }
        let mut ty = GlType::empty(Role::Plain);
        for (idx, mult) in self.factor(&cp) {
            let f = self.phi[idx].clone();
            let d = f.deg();
            let dims = self.kernel_profile(&f, g, d * mult);
            let mut prev = 0;
            let mut conj = Vec::new();
            for k in dims {
                if k == prev {
                    break;
                }
                conj.push(((k - prev) / d) as u32);
                prev = k;
            }
            let lambda = Partition(conj).conjugate();
            ty.entries.insert(f, lambda);
        }
        debug_assert_eq!(ty.norm(), n);
        Ok(ty)
    }

    /// Modified type of an invertible matrix.
    pub fn modified_type_of(&mut self, g: &Matrix) -> Result<GlType> {
        let ty = self.type_of(g)?;
        modify(&ty, &self.field)
    }

    pub(crate) fn modified_type_of_codes(&mut self, g: &[u8]) -> Result<GlType> {
        let ty = self.type_of_codes(g)?;
        modify(&ty, &self.field)
    }
}

/// Membership test for one fixed plain type, cheaper than full extraction.
#[derive(Clone)]
pub struct TypeMatcher {
    ctx: TypeContext,
    char_poly: Poly,
    /// (f, expected kernel dims of f(g)^i for i = 1..=largest part)
    profile: Vec<(Poly, Vec<usize>)>,
}

impl TypeMatcher {
    pub fn new(target: &GlType, field: &Field) -> Result<TypeMatcher> {
        target.require(Role::Plain)?;
        let n = target.norm();
        let mut char_poly = Poly::one();
        let mut profile = Vec::new();
        for (f, lambda) in target.entries() {
            char_poly = char_poly.mul(&f.pow(lambda.size(), field), field);
            let d = f.deg();
            let conj = lambda.conjugate();
            let mut acc = 0;
            let dims = conj
                .parts()
                .iter()
                .map(|&c| {
                    acc += d * c as usize;
                    acc
                })
                .collect();
            profile.push((f.clone(), dims));
        }
        Ok(TypeMatcher {
            ctx: TypeContext::new(field, n),
            char_poly,
            profile,
        })
    }

    pub fn matches_codes(&mut self, g: &[u8]) -> bool {
        let n = self.ctx.n;
        if char_poly_codes(g, n, &self.ctx.field) != self.char_poly {
            return false;
        }
        for i in 0..self.profile.len() {
            let (f, dims) = self.profile[i].clone();
            let target = *dims.last().unwrap();
            let got = self.ctx.kernel_profile(&f, g, target);
            if got != dims {
                return false;
            }
        }
        true
    }

    pub fn matches(&mut self, g: &Matrix) -> bool {
        g.rows() == self.ctx.n && self.matches_codes(g.bytes())
    }
}

/// Plain type of an invertible matrix.
pub fn type_of(g: &Matrix, field: &Field) -> Result<GlType> {
    if !g.is_square() {
        return Err(Error::DimensionMismatch("type of a non-square matrix".into()));
    }
    TypeContext::new(field, g.rows()).type_of(g)
}

pub fn modified_type_of(g: &Matrix, field: &Field) -> Result<GlType> {
    modify(&type_of(g, field)?, field)
}

/// Decrements each unipotent part, dropping zeros.
pub fn modify(lambda: &GlType, field: &Field) -> Result<GlType> {
    lambda.require(Role::Plain)?;
    let u = Poly::t_minus_one(field);
    let mut out = GlType::empty(Role::Modified);
    for (f, p) in &lambda.entries {
        let parts: Vec<u32> = if *f == u {
            p.parts().iter().filter(|&&x| x > 1).map(|x| x - 1).collect()
        } else {
            p.parts().to_vec()
        };
        if !parts.is_empty() {
            out.entries.insert(f.clone(), Partition(parts));
        }
    }
    Ok(out)
}

/// `μ↑n`: increments each unipotent part and pads with ones.
pub fn lift(mu: &GlType, n: usize, field: &Field) -> Result<GlType> {
    mu.require(Role::Modified)?;
    let needed = mu.min_size(field);
    if n < needed {
        return Err(Error::ClassEmpty {
            ty: mu.format(field),
            n,
            needed,
        });
    }
    let u = Poly::t_minus_one(field);
    let mut out = GlType::empty(Role::Plain);
    for (f, p) in &mu.entries {
        if *f != u {
            out.entries.insert(f.clone(), p.clone());
        }
    }
    let ue = mu.unipotent_part(field);
    let pad = n - mu.norm() - ue.len();
    let mut parts: Vec<u32> = ue.parts().iter().map(|x| x + 1).collect();
    parts.extend(std::iter::repeat_n(1, pad));
    if !parts.is_empty() {
        out.entries.insert(u, Partition(parts));
    }
    Ok(out)
}

/// `J_λ`: blocks `J_{λ_i(f)}(f)` in polynomial order, parts decreasing.
pub fn canonical_matrix(lambda: &GlType, field: &Field) -> Result<Matrix> {
    lambda.require(Role::Plain)?;
    let blocks: Vec<Matrix> = lambda
        .entries
        .iter()
        .flat_map(|(f, p)| p.parts().iter().map(move |&m| f.jordan_block(m as usize, field)))
        .collect();
    Ok(Matrix::block_diag(&blocks))
}

/// `rank(g - I)`, the reflection length.
pub fn reflection_length(g: &Matrix, field: &Field) -> Result<usize> {
    if !g.is_invertible(field) {
        return Err(Error::Singular);
    }
    let len = g.minus_identity(field).rank(field);
    debug_assert_eq!(len, modified_type_of(g, field)?.norm());
    Ok(len)
}

// ---------------------------------------------------------------------------
// Counting formulas
// ---------------------------------------------------------------------------

/// `[m]_q = (q^m - 1)/(q - 1)`.
pub fn q_int(q: u64, m: u32) -> BigUint {
    (0..m).map(|i| BigUint::from(q).pow(i)).sum()
}

/// `[m]_q! = [1][2]...[m]`.
pub fn q_factorial(q: u64, m: u32) -> BigUint {
    (1..=m).map(|i| q_int(q, i)).product()
}

pub fn q_binomial(q: u64, m: u32, b: u32) -> Result<BigUint> {
    if b > m {
        return Err(Error::InvalidParameters(format!(
            "q-binomial [{m} choose {b}] needs b <= m"
        )));
    }
    let num = q_factorial(q, m);
    let den = q_factorial(q, b) * q_factorial(q, m - b);
    debug_assert!(num.is_multiple_of(&den));
    Ok(num / den)
}

/// `a_λ(Q) = Q^{|λ| + 2n(λ)} Π_i φ_{m_i(λ)}(Q^{-1})` with `φ_m(x) = (1-x)...(1-x^m)`.
pub fn a_partition(lambda: &Partition, big_q: u64) -> BigUint {
    assert!(big_q >= 2, "a_partition needs Q >= 2");
    let qq = BigInt::from(big_q);
    let exponent = lambda.size() as u64 + 2 * lambda.n_lambda();
    let mut value = BigRational::from_integer(qq.clone().pow(exponent as u32));
    for (_, m) in lambda.multiplicities() {
        for j in 1..=m {
            let factor = BigRational::one() - BigRational::new(BigInt::one(), qq.clone().pow(j));
            value *= factor;
        }
    }
    assert!(
        value.is_integer() && value.is_positive(),
        "a_partition is a positive integer"
    );
    value.to_integer().to_biguint().unwrap()
}

/// `|A_λ| = Π_f a_{λ(f)}(q^{d(f)})`.
pub fn centralizer_order(lambda: &GlType, field: &Field) -> Result<BigUint> {
    lambda.require(Role::Plain)?;
    let q = field.q() as u64;
    Ok(lambda
        .entries
        .iter()
        .map(|(f, p)| a_partition(p, q.pow(f.deg() as u32)))
        .product())
}

/// `|GL_n(q)| = Π_{i<n} (q^n - q^i)`.
pub fn gl_order(n: usize, field: &Field) -> BigUint {
    let q = BigUint::from(field.q());
    let qn = Pow::pow(&q, n as u32);
    (0..n as u32).map(|i| &qn - Pow::pow(&q, i)).product()
}

/// `|𝒦_μ(n)| = |G_n| / |A_{μ↑n}|`.
pub fn class_size(mu: &GlType, n: usize, field: &Field) -> Result<BigUint> {
    let lifted = lift(mu, n, field)?;
    let order = gl_order(n, field);
    let cent = centralizer_order(&lifted, field)?;
    if !order.is_multiple_of(&cent) {
        return Err(Error::Invariant(format!(
            "centralizer order {cent} does not divide |G_{n}| = {order}"
        )));
    }
    Ok(order / cent)
}

/// All types over the given irreducibles with norm at most `max_norm`.
pub fn types_up_to_norm(phi: &[Poly], max_norm: usize, role: Role) -> Vec<GlType> {
    fn rec(
        phi: &[Poly],
        idx: usize,
        budget: usize,
        cur: &mut BTreeMap<Poly, Partition>,
        role: Role,
        out: &mut Vec<GlType>,
    ) {
        if idx == phi.len() {
            out.push(GlType {
                role,
                entries: cur.clone(),
            });
            return;
        }
        rec(phi, idx + 1, budget, cur, role, out);
        let f = &phi[idx];
        let d = f.deg();
        for size in 1..=budget / d {
            for p in Partition::all(size as u32) {
                cur.insert(f.clone(), p);
                rec(phi, idx + 1, budget - size * d, cur, role, out);
                cur.remove(f);
            }
        }
    }
    let mut out = Vec::new();
    let usable: Vec<Poly> = phi.iter().filter(|f| f.deg() <= max_norm).cloned().collect();
    rec(&usable, 0, max_norm, &mut BTreeMap::new(), role, &mut out);
    out.sort();
    out
}

/// All plain types of norm exactly `n`: the conjugacy classes of `G_n`.
pub fn plain_types(n: usize, field: &Field) -> Vec<GlType> {
    let phi = enumerate_phi(field, n.max(1));
    types_up_to_norm(&phi, n, Role::Plain)
        .into_iter()
        .filter(|t| t.norm() == n)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u32) -> Field {
        Field::from_order(q).unwrap()
    }

    fn ty(s: &str, role: Role, fq: &Field) -> GlType {
        GlType::parse(s, role, fq).unwrap()
    }

    #[test]
    fn partitions() {
        let p = Partition::new(vec![1, 3, 1]).unwrap();
        assert_eq!(p.parts(), &[3, 1, 1]);
        assert_eq!(p.size(), 5);
        assert_eq!(p.n_lambda(), 3);
        assert_eq!(p.conjugate().parts(), &[3, 1, 1]);
        assert_eq!(Partition::all(4).len(), 5);
        assert_eq!(Partition::all(0), vec![Partition::empty()]);
        assert!(Partition::new(vec![0]).is_err());
    }

    #[test]
    fn norms() {
        let f3 = f(3);
        assert_eq!(GlType::empty(Role::Plain).norm(), 0);
        assert_eq!(ty("2,1@t-1", Role::Plain, &f3).norm(), 3);
        assert_eq!(ty("2@t^2+1", Role::Plain, &f3).norm(), 4);
    }

    #[test]
    fn type_extraction() {
        let f3 = f(3);
        assert_eq!(
            type_of(&Matrix::identity(3), &f3).unwrap(),
            ty("1,1,1@t-1", Role::Plain, &f3)
        );
        let j2 = Poly::t_minus_one(&f3).jordan_block(2, &f3);
        let g = Matrix::block_diag(&[j2.clone(), Matrix::identity(1)]);
        assert_eq!(type_of(&g, &f3).unwrap(), ty("2,1@t-1", Role::Plain, &f3));
        let c = Poly::parse("t^2+1", &f3).unwrap().companion(&f3);
        assert_eq!(type_of(&c, &f3).unwrap(), ty("1@t^2+1", Role::Plain, &f3));
        let jj = Poly::parse("t^2+1", &f3).unwrap().jordan_block(2, &f3);
        assert_eq!(type_of(&jj, &f3).unwrap(), ty("2@t^2+1", Role::Plain, &f3));
        assert!(matches!(
            type_of(&Matrix::zeros(2, 2), &f3),
            Err(Error::Singular)
        ));
    }

    #[test]
    fn modify_and_lift() {
        let f3 = f(3);
        assert!(modify(&ty("1,1,1@t-1", Role::Plain, &f3), &f3).unwrap().is_empty());
        assert_eq!(
            modify(&ty("3,1@t-1;1@t-2", Role::Plain, &f3), &f3).unwrap(),
            ty("2@t-1;1@t-2", Role::Modified, &f3)
        );
        let j2 = Poly::t_minus_one(&f3).jordan_block(2, &f3);
        assert_eq!(
            modified_type_of(&j2, &f3).unwrap(),
            ty("1@t-1", Role::Modified, &f3)
        );
        assert_eq!(
            lift(&GlType::empty(Role::Modified), 3, &f3).unwrap(),
            ty("1,1,1@t-1", Role::Plain, &f3)
        );
        assert_eq!(
            lift(&ty("1@t-1", Role::Modified, &f3), 3, &f3).unwrap(),
            ty("2,1@t-1", Role::Plain, &f3)
        );
        assert_eq!(
            lift(&ty("1@t-2", Role::Modified, &f3), 3, &f3).unwrap(),
            ty("1@t-2;1,1@t-1", Role::Plain, &f3)
        );
        assert!(matches!(
            lift(&ty("1,1@t-1", Role::Modified, &f3), 3, &f3),
            Err(Error::ClassEmpty { needed: 4, .. })
        ));
        assert!(matches!(
            modify(&ty("1@t-1", Role::Modified, &f3), &f3),
            Err(Error::RoleMismatch { .. })
        ));
    }

    #[test]
    fn canonical_matrices() {
        let f3 = f(3);
        assert_eq!(
            canonical_matrix(&ty("1,1@t-1", Role::Plain, &f3), &f3).unwrap(),
            Matrix::identity(2)
        );
        assert_eq!(
            canonical_matrix(&ty("2@t-1", Role::Plain, &f3), &f3).unwrap(),
            Matrix::parse("1,1;0,1", &f3).unwrap()
        );
        assert_eq!(
            canonical_matrix(&ty("1@t-2;1@t-1", Role::Plain, &f3), &f3).unwrap(),
            Matrix::parse("2,0;0,1", &f3).unwrap()
        );
    }

    #[test]
    fn reflection_lengths() {
        let f3 = f(3);
        assert_eq!(reflection_length(&Matrix::identity(4), &f3).unwrap(), 0);
        let j2 = Poly::t_minus_one(&f3).jordan_block(2, &f3);
        let tv = Matrix::block_diag(&[j2, Matrix::identity(2)]);
        assert_eq!(reflection_length(&tv, &f3).unwrap(), 1);
        let nu = ty("1@t-1;1@t-2", Role::Modified, &f3);
        let g = canonical_matrix(&lift(&nu, 4, &f3).unwrap(), &f3).unwrap();
        assert_eq!(reflection_length(&g, &f3).unwrap(), 2);
    }

    #[test]
    fn q_numbers() {
        assert_eq!(q_int(3, 4), BigUint::from(40u32));
        assert_eq!(q_binomial(5, 2, 1).unwrap(), BigUint::from(6u32));
        assert_eq!(q_binomial(2, 4, 2).unwrap(), BigUint::from(35u32));
        assert!(q_binomial(2, 1, 2).is_err());
    }

    #[test]
    fn a_partition_examples() {
        for q in [2u64, 3, 5, 7] {
            assert_eq!(a_partition(&Partition(vec![1]), q), BigUint::from(q - 1));
            assert_eq!(
                a_partition(&Partition(vec![1, 1]), q),
                BigUint::from((q * q - 1) * (q * q - q))
            );
        }
        // |λ| = 2, n(λ) = 0, m_2 = 1: 3^2 (1 - 1/3) = 6
        assert_eq!(a_partition(&Partition(vec![2]), 3), BigUint::from(6u32));
    }

    #[test]
    fn centralizer_examples() {
        let f3 = f(3);
        let c = |s: &str| centralizer_order(&ty(s, Role::Plain, &f3), &f3).unwrap();
        assert_eq!(c("1,1@t-1"), BigUint::from(48u32));
        assert_eq!(c("1@t-2;1@t-1"), BigUint::from(4u32));
        assert_eq!(c("1@t^2+1"), BigUint::from(8u32));
        assert_eq!(gl_order(2, &f(2)), BigUint::from(6u32));
        assert_eq!(
            class_size(&ty("1@t-2", Role::Modified, &f3), 2, &f3).unwrap(),
            BigUint::from(12u32)
        );
        for n in 0..4 {
            assert_eq!(
                class_size(&GlType::empty(Role::Modified), n, &f3).unwrap(),
                BigUint::one()
            );
        }
    }

    #[test]
    fn class_equation() {
        for q in [2u32, 3, 5] {
            let fq = f(q);
            for n in 1..=3 {
                let total: BigUint = plain_types(n, &fq)
                    .iter()
                    .map(|t| gl_order(n, &fq) / centralizer_order(t, &fq).unwrap())
                    .sum();
                assert_eq!(total, gl_order(n, &fq), "q={q} n={n}");
            }
        }
    }

    #[test]
    fn round_trips() {
        for q in [2u32, 3] {
            let fq = f(q);
            let phi = enumerate_phi(&fq, 4);
            for mu in types_up_to_norm(&phi, 4, Role::Modified) {
                let k = mu.min_size(&fq);
                for n in k..=k + 1 {
                    assert_eq!(modify(&lift(&mu, n, &fq).unwrap(), &fq).unwrap(), mu);
                }
            }
            for n in 1..=4 {
                for lambda in plain_types(n, &fq) {
                    let j = canonical_matrix(&lambda, &fq).unwrap();
                    assert_eq!(type_of(&j, &fq).unwrap(), lambda);
                }
            }
        }
    }

    #[test]
    fn text_grammar() {
        let f3 = f(3);
        let t = ty("1@t-1;2,1@t^2+t+2", Role::Modified, &f3);
        assert_eq!(t.format(&f3), "1@t+2;2,1@t^2+t+2");
        assert_eq!(ty(&t.format(&f3), Role::Modified, &f3), t);
        assert_eq!(ty("∅", Role::Modified, &f3), GlType::empty(Role::Modified));
        assert_eq!(ty("", Role::Modified, &f3), GlType::empty(Role::Modified));
        assert!(GlType::parse("1@t", Role::Plain, &f3).is_err());
        assert!(GlType::parse("1@t^2+2", Role::Plain, &f3).is_err()); // reducible
        assert!(GlType::parse("0@t-1", Role::Plain, &f3).is_err());
        assert!(GlType::parse("1t-1", Role::Plain, &f3).is_err());
    }
}
