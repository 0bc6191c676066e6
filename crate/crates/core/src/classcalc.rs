//! Conjugacy-class enumeration and structure constants of class sums.
//!
//! For modified types `λ, μ, ν` and `n` large enough, the structure constant
//! `a^ν_{λμ}(n)` is the coefficient of `K_ν(n)` in `K_λ(n) K_μ(n)`. Two counting
//! routes are provided:
//!
//! - [`structure_constant_at`] fixes `z = J_{ν↑n}` and counts `g ∈ 𝒦_λ(n)` with
//!   `g⁻¹z ∈ 𝒦_μ(n)`, streaming over the smaller of the two classes.
//! - [`multiply_class_sums`] fixes one representative `g₀` of the larger class
//!   and classifies `g₀h` for every `h` in the smaller class; since every pair is
//!   conjugate to one with first entry `g₀`, the number of pairs landing in
//!   `𝒦_ν` is `|𝒦_λ| c_ν`, hence `a^ν = |𝒦_λ| c_ν / |𝒦_ν|`.
//!
//! [`multiply_oracle`] is the independent brute-force check over all pairs.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use indexmap::IndexSet;
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::gltype::{
    canonical_matrix, class_size, gl_order, lift, modified_type_of, reflection_length,
    type_of, types_up_to_norm, GlType, Role, TypeContext, TypeMatcher,
};
use crate::matrix::{conjugator, inverse_into, mul_into, Matrix, DEFAULT_CONJUGATOR_RETRIES};
use crate::poly::enumerate_phi;

/// Cardinality limits guarding the enumerations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    /// Largest class that may be materialized as a [`ClassOrbit`].
    pub class_memory: u64,
    /// Largest group that [`enumerate_group`] will stream.
    pub group_oracle: u64,
    /// Largest `|𝒦_λ|·|𝒦_μ|` handled by [`multiply_oracle`].
    pub pair_oracle: u64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            class_memory: 5_000_000,
            group_oracle: 10_000_000,
            pair_oracle: 100_000_000,
        }
    }
}

fn check_bound(what: impl Into<String>, size: &BigUint, bound: u64) -> Result<()> {
    if *size > BigUint::from(bound) {
        return Err(Error::ResourceBound {
            what: what.into(),
            size: size.to_string(),
            bound,
        });
    }
    Ok(())
}

fn require_modified(ty: &GlType) -> Result<()> {
    if ty.role() != Role::Modified {
        return Err(Error::RoleMismatch {
            expected: "modified",
        });
    }
    Ok(())
}

fn require_fit(ty: &GlType, n: usize, field: &Field) -> Result<()> {
    require_modified(ty)?;
    let needed = ty.min_size(field);
    if needed > n {
        return Err(Error::ClassEmpty {
            ty: ty.format(field),
            n,
            needed,
        });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Class orbits
// ---------------------------------------------------------------------------

/// All elements of one conjugacy class `𝒦_μ(n)`, stored by canonical bytes.
#[derive(Clone, Debug)]
pub struct ClassOrbit {
    modified: GlType,
    n: usize,
    rep: Matrix,
    elements: IndexSet<Box<[u8]>>,
    size: BigUint,
}

impl ClassOrbit {
    pub fn modified_type(&self) -> &GlType {
        &self.modified
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `J_{μ↑n}`.
    pub fn rep(&self) -> &Matrix {
        &self.rep
    }

    pub fn size(&self) -> &BigUint {
        &self.size
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, g: &Matrix) -> bool {
        g.rows() == self.n && self.elements.contains(g.bytes())
    }

    pub fn codes(&self, i: usize) -> &[u8] {
        self.elements.get_index(i).expect("index in range")
    }

    pub fn get(&self, i: usize) -> Matrix {
        Matrix::from_codes(self.n, self.n, self.codes(i).to_vec())
    }

    pub fn iter(&self) -> impl Iterator<Item = Matrix> + '_ {
        self.elements
            .iter()
            .map(|c| Matrix::from_codes(self.n, self.n, c.to_vec()))
    }
}

/// `D = diag(γ, 1, …, 1)`, the `n`-cycle `P`, and `T = I + E_{12}`, with inverses.
fn generators(n: usize, field: &Field) -> Vec<(Matrix, Matrix)> {
    let mut gens = Vec::new();
    let mut d = Matrix::identity(n);
    d.set(0, 0, field.primitive());
    gens.push(d);
    if n >= 2 {
        let mut p = Matrix::zeros(n, n);
        for i in 0..n {
            p.set((i + 1) % n, i, Elem::ONE);
        }
        gens.push(p);
        let mut t = Matrix::identity(n);
        t.set(0, 1, Elem::ONE);
        gens.push(t);
    }
    gens.into_iter()
        .map(|s| {
            let inv = s.inverse(field).expect("generators are invertible");
            (s, inv)
        })
        .collect()
}

/// Breadth-first closure of `J_{μ↑n}` under conjugation by the generators.
pub fn enumerate_class(mu: &GlType, n: usize, field: &Field, bounds: &Bounds) -> Result<ClassOrbit> {
    require_fit(mu, n, field)?;
    if n == 0 {
        return Err(Error::InvalidParameters("classes live in G_n with n >= 1".into()));
    }
    let size = class_size(mu, n, field)?;
    check_bound(format!("class {} in G_{n}", mu.format(field)), &size, bounds.class_memory)
        .map_err(|e| match e {
            Error::ResourceBound { what, size, bound } => Error::ResourceBound {
                what: format!("{what} (class too large to store; use the streaming count)"),
                size,
                bound,
            },
            other => other,
        })?;
    let expected = size.to_usize().expect("bounded");
    let rep = canonical_matrix(&lift(mu, n, field)?, field)?;
    let gens = generators(n, field);
    let mut elements: IndexSet<Box<[u8]>> = IndexSet::with_capacity(expected);
    elements.insert(rep.bytes().into());
    let mut tmp = vec![0u8; n * n];
    let mut out = vec![0u8; n * n];
    let mut head = 0;
    while head < elements.len() {
        let x: Box<[u8]> = elements[head].clone();
        head += 1;
        for (s, s_inv) in &gens {
            mul_into(s.bytes(), &x, &mut tmp, n, n, n, field);
            mul_into(&tmp, s_inv.bytes(), &mut out, n, n, n, field);
            if !elements.contains(out.as_slice()) {
                elements.insert(out.clone().into_boxed_slice());
            }
        }
    }
    if elements.len() != expected {
        return Err(Error::Invariant(format!(
            "orbit of {} in G_{n} has {} elements, class size formula gives {expected}",
            mu.format(field),
            elements.len()
        )));
    }
    Ok(ClassOrbit {
        modified: mu.clone(),
        n,
        rep,
        elements,
        size,
    })
}

// ---------------------------------------------------------------------------
// Whole-group enumeration (oracle support)
// ---------------------------------------------------------------------------

/// Streams every element of `GL_n(q)` once, row by row, pruning dependent prefixes.
pub struct GroupIter {
    n: usize,
    field: Field,
    vectors: u64,
    rows: Vec<u64>,
    started: bool,
    done: bool,
}

pub fn enumerate_group(n: usize, field: &Field, bounds: &Bounds) -> Result<GroupIter> {
    check_bound(format!("GL_{n}({})", field.q()), &gl_order(n, field), bounds.group_oracle)?;
    Ok(GroupIter {
        n,
        field: field.clone(),
        vectors: (field.q() as u64).pow(n as u32),
        rows: Vec::with_capacity(n),
        started: false,
        done: false,
    })
}

impl GroupIter {
    fn vector(&self, idx: u64) -> Vec<u8> {
        let q = self.field.q() as u64;
        let mut v = Vec::with_capacity(self.n);
        let mut c = idx;
        for _ in 0..self.n {
            v.push((c % q) as u8);
            c /= q;
        }
        v
    }

    fn independent(&self, cand: u64) -> bool {
        let depth = self.rows.len();
        let mut buf: Vec<u8> = self.rows.iter().flat_map(|&r| self.vector(r)).collect();
        buf.extend(self.vector(cand));
        crate::matrix::rank_in_place(&mut buf, depth + 1, self.n, &self.field) == depth + 1
    }

    fn seek(&self, from: u64) -> Option<u64> {
        (from..self.vectors).find(|&c| self.independent(c))
    }

    fn current(&self) -> Matrix {
        let data = self.rows.iter().flat_map(|&r| self.vector(r)).collect();
        Matrix::from_codes(self.n, self.n, data)
    }
}

impl Iterator for GroupIter {
    type Item = Matrix;

    fn next(&mut self) -> Option<Matrix> {
        if self.done {
            return None;
        }
        if self.n == 0 {
            self.done = true;
            return Some(Matrix::identity(0));
        }
        let mut from = if self.started {
            self.rows.pop().unwrap() + 1
        } else {
            self.started = true;
            0
        };
        loop {
            match self.seek(from) {
                Some(c) => {
                    self.rows.push(c);
                    if self.rows.len() == self.n {
                        return Some(self.current());
                    }
                    from = 0;
                }
                None => match self.rows.pop() {
                    Some(prev) => from = prev + 1,
                    None => {
                        self.done = true;
                        return None;
                    }
                },
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Expansions
// ---------------------------------------------------------------------------

/// `K_λ K_μ = Σ a^ν K_ν` restricted to nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expansion {
    pub q: u32,
    /// `None` for top-degree stable expansions.
    pub n: Option<usize>,
    pub lambda: GlType,
    pub mu: GlType,
    pub terms: BTreeMap<GlType, BigUint>,
}

impl Expansion {
    pub fn coefficient(&self, nu: &GlType) -> BigUint {
        self.terms.get(nu).cloned().unwrap_or_default()
    }

    /// `Σ a^ν |𝒦_ν(n)| = |𝒦_λ(n)| |𝒦_μ(n)|` together with the filtration bound.
    pub fn check_counting_identity(&self, field: &Field) -> Result<()> {
        let Some(n) = self.n else {
            return Ok(());
        };
        let top = self.lambda.norm() + self.mu.norm();
        let mut total = BigUint::zero();
        for (nu, a) in &self.terms {
            if nu.norm() > top || !nu.fits(n, field) {
                return Err(Error::Invariant(format!(
                    "term {} violates the norm filtration or does not fit G_{n}",
                    nu.format(field)
                )));
            }
            total += a * class_size(nu, n, field)?;
        }
        let expected = class_size(&self.lambda, n, field)? * class_size(&self.mu, n, field)?;
        if total != expected {
            return Err(Error::Invariant(format!(
                "counting identity fails: Σ a^ν|K_ν| = {total}, |K_λ||K_μ| = {expected}"
            )));
        }
        Ok(())
    }

    /// One record per line: canonical type, tab, decimal coefficient.
    pub fn to_machine(&self, field: &Field) -> String {
        let mut out = String::new();
        for (nu, a) in &self.terms {
            let _ = writeln!(out, "{}\t{}", nu.format(field), a);
        }
        out
    }

    pub fn parse_terms(text: &str, field: &Field) -> Result<BTreeMap<GlType, BigUint>> {
        let mut terms = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (ty, coef) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(text, lineno, "type<TAB>coefficient"))?;
            let ty = GlType::parse(ty, Role::Modified, field)?;
            let coef: BigUint = coef
                .trim()
                .parse()
                .map_err(|_| Error::parse(text, lineno, "a decimal coefficient"))?;
            terms.insert(ty, coef);
        }
        Ok(terms)
    }

    pub fn to_csv(&self, field: &Field) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["nu", "norm", "coefficient"]).expect("in-memory write");
        for (nu, a) in &self.terms {
            w.write_record([nu.format(field), nu.norm().to_string(), a.to_string()])
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }

    pub fn to_table(&self, field: &Field) -> String {
        let rows: Vec<(String, String, String)> = self
            .terms
            .iter()
            .map(|(nu, a)| (nu.format(field), nu.norm().to_string(), a.to_string()))
            .collect();
        let w0 = rows.iter().map(|r| r.0.chars().count()).max().unwrap_or(0).max(2);
        let w1 = rows.iter().map(|r| r.1.len()).max().unwrap_or(0).max(4);
        let mut out = String::new();
        let header = match self.n {
            Some(n) => format!(
                "K[{}] * K[{}] in Z(GL_{n}({}))",
                self.lambda.format(field),
                self.mu.format(field),
                self.q
            ),
            None => format!(
                "K[{}] * K[{}], top degree, stable (q = {})",
                self.lambda.format(field),
                self.mu.format(field),
                self.q
            ),
        };
        let _ = writeln!(out, "{header}");
        let _ = writeln!(out, "{:<w0$}  {:>w1$}  coefficient", "nu", "norm");
        for (ty, norm, a) in rows {
            let pad = w0 - ty.chars().count();
            let _ = writeln!(out, "{ty}{}  {norm:>w1$}  {a}", " ".repeat(pad));
        }
        out
    }
}

/// Every modified `ν` with `‖ν‖ ≤ max_norm` that fits in `G_n`, in canonical order.
pub fn enumerate_modified_types(max_norm: usize, n: usize, field: &Field) -> Vec<GlType> {
    let phi = enumerate_phi(field, max_norm.max(1));
    types_up_to_norm(&phi, max_norm, Role::Modified)
        .into_iter()
        .filter(|t| t.fits(n, field))
        .collect()
}

// ---------------------------------------------------------------------------
// Counting
// ---------------------------------------------------------------------------

fn invert_codes(a: &[u8], n: usize, field: &Field) -> Vec<u8> {
    let mut out = vec![0u8; n * n];
    assert!(inverse_into(a, &mut out, n, field), "class elements are invertible");
    out
}

/// Visits every element of `𝒦_μ(n)` in parallel and folds per-thread states.
///
/// Classes of norm 1 are generated directly as `I + u vᵀ` with `u` normalized
/// (first nonzero entry 1) and `vᵀu = ξ - 1`, so they never need to be stored.
/// Larger classes come from [`enumerate_class`]. The number of visited elements
/// is checked against the class size formula.
fn stream_class<T, I, F, R>(
    mu: &GlType,
    n: usize,
    field: &Field,
    bounds: &Bounds,
    init: I,
    fold: F,
    reduce: R,
) -> Result<T>
where
    T: Send,
    I: Fn() -> T + Sync + Send,
    F: Fn(T, &[u8]) -> T + Sync + Send,
    R: Fn(T, T) -> T + Sync + Send,
{
    let expected = class_size(mu, n, field)?;
    let (acc, seen) = if mu.norm() == 1 {
        let (f, _) = mu.entries().iter().next().expect("norm 1 has one entry");
        let xi = field.neg(f.constant_term());
        let c = field.sub(xi, Elem::ONE).code();
        let q = field.q() as usize;
        let total = q.pow(n as u32);
        let decode = |mut idx: usize, out: &mut [u8]| {
            for slot in out.iter_mut() {
                *slot = (idx % q) as u8;
                idx /= q;
            }
        };
        let us: Vec<Vec<u8>> = (1..total)
            .map(|i| {
                let mut u = vec![0u8; n];
                decode(i, &mut u);
                u
            })
            .filter(|u| u.iter().find(|&&x| x != 0) == Some(&1))
            .collect();
        us.par_iter()
            .fold(
                || (init(), 0u64, vec![0u8; n], vec![0u8; n * n]),
                |(mut acc, mut seen, mut v, mut buf), u| {
                    for idx in 1..total {
                        decode(idx, &mut v);
                        let dot = u
                            .iter()
                            .zip(&v)
                            .fold(Elem::ZERO, |s, (&a, &b)| field.add(s, field.mul(Elem(a), Elem(b))));
                        if dot.code() != c {
                            continue;
                        }
                        for i in 0..n {
                            for j in 0..n {
                                let mut e = field.mul(Elem(u[i]), Elem(v[j]));
                                if i == j {
                                    e = field.add(e, Elem::ONE);
                                }
                                buf[i * n + j] = e.code();
                            }
                        }
                        acc = fold(acc, &buf);
                        seen += 1;
                    }
                    (acc, seen, v, buf)
                },
            )
            .map(|(acc, seen, _, _)| (acc, seen))
            .reduce(|| (init(), 0), |a, b| (reduce(a.0, b.0), a.1 + b.1))
    } else {
        let orbit = enumerate_class(mu, n, field, bounds)?;
        let acc = (0..orbit.len())
            .into_par_iter()
            .fold(&init, |acc, i| fold(acc, orbit.codes(i)))
            .reduce(&init, &reduce);
        (acc, orbit.len() as u64)
    };
    if BigUint::from(seen) != expected {
        return Err(Error::Invariant(format!(
            "visited {seen} elements of {} in G_{n}, expected {expected}",
            mu.format(field)
        )));
    }
    Ok(acc)
}

fn merge_counts(mut a: HashMap<GlType, u64>, b: HashMap<GlType, u64>) -> HashMap<GlType, u64> {
    for (k, v) in b {
        *a.entry(k).or_insert(0) += v;
    }
    a
}

/// `a^ν_{λμ}(n)` by counting `g ∈ 𝒦_λ(n)` with `g⁻¹ J_{ν↑n} ∈ 𝒦_μ(n)`.
pub fn structure_constant_at(
    lambda: &GlType,
    mu: &GlType,
    nu: &GlType,
    n: usize,
    field: &Field,
    bounds: &Bounds,
) -> Result<BigUint> {
    require_fit(lambda, n, field)?;
    require_fit(mu, n, field)?;
    require_fit(nu, n, field)?;
    let z = canonical_matrix(&lift(nu, n, field)?, field)?;
    let size_l = class_size(lambda, n, field)?;
    let size_m = class_size(mu, n, field)?;
    let lambda_side = size_l <= size_m;
    let (stream, other) = if lambda_side { (lambda, mu) } else { (mu, lambda) };
    let matcher = TypeMatcher::new(&lift(other, n, field)?, field)?;
    let zc = z.bytes();
    let count = stream_class(
        stream,
        n,
        field,
        bounds,
        || (matcher.clone(), vec![0u8; n * n], 0u64),
        |(mut m, mut buf, acc), x| {
            let xi = invert_codes(x, n, field);
            if lambda_side {
                mul_into(&xi, zc, &mut buf, n, n, n, field);
            } else {
                mul_into(zc, &xi, &mut buf, n, n, n, field);
            }
            let hit = m.matches_codes(&buf) as u64;
            (m, buf, acc + hit)
        },
        |a, b| (a.0, a.1, a.2 + b.2),
    )?
    .2;
    Ok(BigUint::from(count))
}

/// Counts modified types of `g₀·h` (or `g·h₀`) over the smaller class.
fn fixed_rep_counts(
    lambda: &GlType,
    mu: &GlType,
    n: usize,
    field: &Field,
    bounds: &Bounds,
) -> Result<BTreeMap<GlType, BigUint>> {
    let size_l = class_size(lambda, n, field)?;
    let size_m = class_size(mu, n, field)?;
    // Stream the smaller class; the larger one contributes its representative.
    let stream_mu = size_m <= size_l;
    let (fixed, streamed, fixed_size) = if stream_mu {
        (lambda, mu, &size_l)
    } else {
        (mu, lambda, &size_m)
    };
    let rep = canonical_matrix(&lift(fixed, n, field)?, field)?;
    let ctx = TypeContext::new(field, n);
    let rc = rep.bytes();
    let (_, _, counts) = stream_class(
        streamed,
        n,
        field,
        bounds,
        || (ctx.clone(), vec![0u8; n * n], HashMap::new()),
        |(mut c, mut buf, mut acc), x| {
            if stream_mu {
                mul_into(rc, x, &mut buf, n, n, n, field);
            } else {
                mul_into(x, rc, &mut buf, n, n, n, field);
            }
            let nu = c
                .modified_type_of_codes(&buf)
                .expect("products of invertible matrices are invertible");
            *acc.entry(nu).or_insert(0u64) += 1;
            (c, buf, acc)
        },
        |a, b| (a.0, a.1, merge_counts(a.2, b.2)),
    )?;
    let mut terms = BTreeMap::new();
    for (nu, c) in counts {
        let pairs = fixed_size * BigUint::from(c);
        let size_nu = class_size(&nu, n, field)?;
        let (a, r) = pairs.div_rem(&size_nu);
        if !r.is_zero() {
            return Err(Error::Invariant(format!(
                "{} pairs land in class {} of size {size_nu}",
                pairs,
                nu.format(field)
            )));
        }
        terms.insert(nu, a);
    }
    Ok(terms)
}

/// Full expansion of `K_λ(n) K_μ(n)`.
pub fn multiply_class_sums(
    lambda: &GlType,
    mu: &GlType,
    n: usize,
    field: &Field,
    bounds: &Bounds,
) -> Result<Expansion> {
    require_fit(lambda, n, field)?;
    require_fit(mu, n, field)?;
    let terms = fixed_rep_counts(lambda, mu, n, field, bounds)?;
    let candidates: std::collections::HashSet<GlType> =
        enumerate_modified_types(lambda.norm() + mu.norm(), n, field)
            .into_iter()
            .collect();
    for nu in terms.keys() {
        if !candidates.contains(nu) {
            return Err(Error::Invariant(format!(
                "product term {} is outside the candidate set",
                nu.format(field)
            )));
        }
    }
    let exp = Expansion {
        q: field.q(),
        n: Some(n),
        lambda: lambda.clone(),
        mu: mu.clone(),
        terms,
    };
    exp.check_counting_identity(field)?;
    Ok(exp)
}

/// Brute force over all pairs `(g, h) ∈ 𝒦_λ(n) × 𝒦_μ(n)`.
pub fn multiply_oracle(
    lambda: &GlType,
    mu: &GlType,
    n: usize,
    field: &Field,
    bounds: &Bounds,
) -> Result<Expansion> {
    require_fit(lambda, n, field)?;
    require_fit(mu, n, field)?;
    let pairs = class_size(lambda, n, field)? * class_size(mu, n, field)?;
    check_bound("pair count for the brute-force product", &pairs, bounds.pair_oracle)?;
    let kl = enumerate_class(lambda, n, field, bounds)?;
    let km = enumerate_class(mu, n, field, bounds)?;
    let ctx = TypeContext::new(field, n);
    let counts: HashMap<GlType, u64> = (0..kl.len())
        .into_par_iter()
        .fold(
            || (ctx.clone(), vec![0u8; n * n], HashMap::new()),
            |(mut c, mut buf, mut acc), i| {
                let g = kl.codes(i);
                for j in 0..km.len() {
                    mul_into(g, km.codes(j), &mut buf, n, n, n, field);
                    let nu = c.modified_type_of_codes(&buf).expect("invertible");
                    *acc.entry(nu).or_insert(0u64) += 1;
                }
                (c, buf, acc)
            },
        )
        .map(|(_, _, acc)| acc)
        .reduce(HashMap::new, merge_counts);
    let mut terms = BTreeMap::new();
    for (nu, total) in counts {
        let size = class_size(&nu, n, field)?;
        let (a, r) = BigUint::from(total).div_rem(&size);
        if !r.is_zero() {
            return Err(Error::Invariant(format!(
                "class {} hit {total} times, not a multiple of its size {size}",
                nu.format(field)
            )));
        }
        terms.insert(nu, a);
    }
    Ok(Expansion {
        q: field.q(),
        n: Some(n),
        lambda: lambda.clone(),
        mu: mu.clone(),
        terms,
    })
}

fn require_top_degree(lambda: &GlType, mu: &GlType, nu: &GlType) -> Result<()> {
    if nu.norm() != lambda.norm() + mu.norm() {
        return Err(Error::NormMismatch(format!(
            "stable constants need ‖ν‖ = ‖λ‖ + ‖μ‖, got {} vs {} + {}",
            nu.norm(),
            lambda.norm(),
            mu.norm()
        )));
    }
    Ok(())
}

/// Top-degree `a^ν_{λμ}`, computed at the least `n` where `ν` lives.
pub fn stable_constant(
    lambda: &GlType,
    mu: &GlType,
    nu: &GlType,
    field: &Field,
    bounds: &Bounds,
) -> Result<BigUint> {
    require_modified(lambda)?;
    require_modified(mu)?;
    require_modified(nu)?;
    require_top_degree(lambda, mu, nu)?;
    let k = nu.min_size(field).max(1);
    // A factor that does not fit in G_k cannot occur in a length-additive triple.
    if !lambda.fits(k, field) || !mu.fits(k, field) {
        return Ok(BigUint::zero());
    }
    structure_constant_at(lambda, mu, nu, k, field, bounds)
}

/// All top-degree terms of `K_λ K_μ` in the stable center.
pub fn stable_product(
    lambda: &GlType,
    mu: &GlType,
    field: &Field,
    bounds: &Bounds,
) -> Result<Expansion> {
    require_modified(lambda)?;
    require_modified(mu)?;
    let top = lambda.norm() + mu.norm();
    let mut by_size: BTreeMap<usize, Vec<GlType>> = BTreeMap::new();
    for nu in enumerate_modified_types(top, 2 * top, field) {
        if nu.norm() == top {
            by_size.entry(nu.min_size(field).max(1)).or_default().push(nu);
        }
    }
    let mut terms = BTreeMap::new();
    for (k, nus) in by_size {
        if !lambda.fits(k, field) || !mu.fits(k, field) {
            continue;
        }
        let at_k = fixed_rep_counts(lambda, mu, k, field, bounds)?;
        for nu in nus {
            if let Some(a) = at_k.get(&nu) {
                terms.insert(nu, a.clone());
            }
        }
    }
    Ok(Expansion {
        q: field.q(),
        n: None,
        lambda: lambda.clone(),
        mu: mu.clone(),
        terms,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityReport {
    pub values: Vec<(usize, BigUint)>,
    pub stable: bool,
}

/// Recomputes a top-degree constant at each `n` and reports whether they agree.
pub fn verify_stability(
    lambda: &GlType,
    mu: &GlType,
    nu: &GlType,
    field: &Field,
    ns: &[usize],
    bounds: &Bounds,
) -> Result<StabilityReport> {
    require_top_degree(lambda, mu, nu)?;
    let values = ns
        .iter()
        .map(|&n| Ok((n, structure_constant_at(lambda, mu, nu, n, field, bounds)?)))
        .collect::<Result<Vec<_>>>()?;
    let stable = values.windows(2).all(|w| w[0].1 == w[1].1);
    Ok(StabilityReport { values, stable })
}

// ---------------------------------------------------------------------------
// Normal form of length-additive triples
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleNormalForm {
    pub z: Matrix,
    pub gbar: Matrix,
    pub hbar: Matrix,
    pub k: usize,
    pub nu: GlType,
}

/// Conjugates a length-additive pair into `diag(ḡ, I)`, `diag(h̄, I)` with `ḡ, h̄ ∈ G_k`.
pub fn normalize_triple<R: Rng + ?Sized>(
    g: &Matrix,
    h: &Matrix,
    field: &Field,
    rng: &mut R,
) -> Result<TripleNormalForm> {
    let n = g.rows();
    let gh = g.mul(h, field)?;
    let (lg, lh, lgh) = (
        reflection_length(g, field)?,
        reflection_length(h, field)?,
        reflection_length(&gh, field)?,
    );
    if lgh != lg + lh {
        return Err(Error::LengthNotAdditive {
            gh: lgh,
            sum: lg + lh,
        });
    }
    let nu = modified_type_of(&gh, field)?;
    let k = nu.min_size(field);
    let core = canonical_matrix(&lift(&nu, k, field)?, field)?;
    let target = Matrix::block_diag(&[core, Matrix::identity(n - k)]);
    let mut retries = DEFAULT_CONJUGATOR_RETRIES;
    let z = loop {
        match conjugator(&gh, &target, field, rng, retries) {
            Ok(Some(z)) => break z,
            Ok(None) => {
                return Err(Error::Invariant(
                    "gh is not conjugate to its own canonical form".into(),
                ))
            }
            Err(Error::Inconclusive { .. }) if retries < 1 << 14 => retries *= 4,
            Err(e) => return Err(e),
        }
    };
    let z_inv = z.inverse(field)?;
    let conj = |x: &Matrix| -> Result<Matrix> { z.mul(x, field)?.mul(&z_inv, field) };
    let (g2, h2, gh2) = (conj(g)?, conj(h)?, conj(&gh)?);
    let gbar = g2.submatrix(0, 0, k, k);
    let hbar = h2.submatrix(0, 0, k, k);
    let pad = Matrix::identity(n - k);
    let expect_g = Matrix::block_diag(&[gbar.clone(), pad.clone()]);
    let expect_h = Matrix::block_diag(&[hbar.clone(), pad.clone()]);
    let expect_gh = Matrix::block_diag(&[gbar.mul(&hbar, field)?, pad]);
    if g2 != expect_g || h2 != expect_h || gh2 != expect_gh {
        return Err(Error::Invariant(
            "conjugated pair is not block diagonal".into(),
        ));
    }
    if k > 0 {
        let prod_type = type_of(&gbar.mul(&hbar, field)?, field)?;
        if prod_type != lift(&nu, k, field)? {
            return Err(Error::Invariant("ḡh̄ has the wrong type".into()));
        }
        if modified_type_of(&gbar, field)? != modified_type_of(g, field)?
            || modified_type_of(&hbar, field)? != modified_type_of(h, field)?
        {
            return Err(Error::Invariant("corner blocks changed modified type".into()));
        }
    }
    Ok(TripleNormalForm {
        z,
        gbar,
        hbar,
        k,
        nu,
    })
}
