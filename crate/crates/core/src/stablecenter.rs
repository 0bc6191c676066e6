//! Closed-form predictions for top-degree structure constants, a harness that
//! compares them with direct computation, and exact polynomial fitting in `q`
//! and in `[n]_q`.
//!
//! Predictions are never trusted: [`check_case`] always recomputes the constant
//! with [`stable_constant`] and reports both numbers.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::classcalc::{
    enumerate_modified_types, stable_constant, stable_product, structure_constant_at, Bounds,
};
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::gltype::{q_binomial, q_int, GlType, Partition, Role};
use crate::poly::Poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Proved,
    Conjectural,
    ZeroByGrading,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Proved => "proved",
            Status::Conjectural => "conjectural",
            Status::ZeroByGrading => "zero-by-grading",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prediction {
    pub value: BigUint,
    pub status: Status,
    pub source: &'static str,
}

impl Prediction {
    fn new(value: impl Into<BigUint>, status: Status, source: &'static str) -> Prediction {
        Prediction {
            value: value.into(),
            status,
            source,
        }
    }
}

fn nonzero(x: Elem, what: &str) -> Result<()> {
    if x.is_zero() {
        return Err(Error::InvalidParameters(format!("{what} must be nonzero")));
    }
    Ok(())
}

fn q_of(field: &Field) -> u64 {
    field.q() as u64
}

/// Shape of a norm-2 modified type.
enum NormTwo {
    /// `(1)_{t-a} ∪ (1)_{t-b}`, including `a = b` as `(1,1)_{t-a}`.
    Union(Elem, Elem),
    /// `(2)_{t-a}`.
    Jordan(Elem),
    /// `(1)_f` with `deg f = 2`.
    Quadratic,
}

fn root_of_linear(f: &Poly, field: &Field) -> Elem {
    field.neg(f.constant_term())
}

fn classify_norm_two(nu: &GlType, field: &Field) -> Result<NormTwo> {
    if nu.role() != Role::Modified {
        return Err(Error::RoleMismatch {
            expected: "modified",
        });
    }
    if nu.norm() != 2 {
        return Err(Error::NormMismatch(format!(
            "expected a norm-2 type, got norm {}",
            nu.norm()
        )));
    }
    let entries: Vec<(&Poly, &Partition)> = nu.entries().iter().collect();
    Ok(match entries.as_slice() {
        [(f, p)] if f.deg() == 2 => {
            debug_assert_eq!(p.parts(), &[1]);
            NormTwo::Quadratic
        }
        [(f, p)] if p.parts() == [2] => NormTwo::Jordan(root_of_linear(f, field)),
        [(f, _)] => {
            let a = root_of_linear(f, field);
            NormTwo::Union(a, a)
        }
        [(f, _), (g, _)] => NormTwo::Union(root_of_linear(f, field), root_of_linear(g, field)),
        _ => unreachable!("norm 2 admits at most two entries"),
    })
}

const REFLECTION_TABLE: &str = "uniform table for two reflections";

/// `a^ν` for `λ = (1)_{t-ξ}`, `μ = (1)_{t-η}` and any `ν` of norm 2, from the uniform table.
pub fn predict_reflection_product(
    xi: Elem,
    eta: Elem,
    nu: &GlType,
    field: &Field,
) -> Result<Prediction> {
    nonzero(xi, "ξ")?;
    nonzero(eta, "η")?;
    let shape = classify_norm_two(nu, field)?;
    let q = q_of(field);
    if nu.determinant(field) != field.mul(xi, eta) {
        return Ok(Prediction::new(0u32, Status::ZeroByGrading, REFLECTION_TABLE));
    }
    let value: u64 = match shape {
        NormTwo::Union(a, b) if a != b => {
            let same = (a == xi && b == eta) || (a == eta && b == xi);
            if same {
                2 * q - 1
            } else {
                q - 1
            }
        }
        NormTwo::Union(a, _) => {
            if a == xi && a == eta {
                q * q + q
            } else {
                0
            }
        }
        NormTwo::Jordan(a) => {
            if a == xi || a == eta {
                2 * q
            } else {
                q
            }
        }
        NormTwo::Quadratic => q + 1,
    };
    Ok(Prediction::new(value, Status::Proved, REFLECTION_TABLE))
}

const UNIPOTENT_TIMES_SEMISIMPLE: &str = "unipotent reflection times semisimple reflection";
const UNIPOTENT_SQUARED: &str = "unipotent reflection squared";
const SEMISIMPLE_PAIR: &str = "two semisimple reflections";

/// The same constants from the three separate case lists (one or two unipotent
/// factors, or none), each with its own conditions rather than the uniform table.
pub fn predict_reflection_cases(
    xi: Elem,
    eta: Elem,
    nu: &GlType,
    field: &Field,
) -> Result<Prediction> {
    nonzero(xi, "ξ")?;
    nonzero(eta, "η")?;
    let shape = classify_norm_two(nu, field)?;
    let q = q_of(field);
    let one = Elem::ONE;
    let prod = field.mul(xi, eta);
    let quad_const = || -> Elem {
        let (f, _) = nu.entries().iter().next().expect("one entry");
        f.constant_term()
    };
    let (value, source): (u64, &'static str) = if xi == one && eta == one {
        let v = match shape {
            NormTwo::Union(a, b) if a == one && b == one => q * q + q,
            // Both eigenvalues equal to -1 gives (1,1)_{t+1}; see the ledger.
            NormTwo::Union(a, b) if field.mul(a, b) == one && a != one && a != b => q - 1,
            NormTwo::Union(..) => 0,
            NormTwo::Jordan(a) if a == one => 2 * q,
            NormTwo::Jordan(a) if field.mul(a, a) == one => q,
            NormTwo::Jordan(_) => 0,
            NormTwo::Quadratic if quad_const() == one => q + 1,
            NormTwo::Quadratic => 0,
        };
        (v, UNIPOTENT_SQUARED)
    } else if xi == one || eta == one {
        let e = if xi == one { eta } else { xi };
        let v = match shape {
            NormTwo::Union(a, b) if (a == one && b == e) || (a == e && b == one) => 2 * q - 1,
            NormTwo::Union(a, b) if field.mul(a, b) == e && a != b => q - 1,
            NormTwo::Union(..) => 0,
            NormTwo::Jordan(a) if field.mul(a, a) == e => q,
            NormTwo::Jordan(_) => 0,
            NormTwo::Quadratic if quad_const() == e => q + 1,
            NormTwo::Quadratic => 0,
        };
        (v, UNIPOTENT_TIMES_SEMISIMPLE)
    } else {
        let v = match shape {
            NormTwo::Union(a, b) if a != b && field.mul(a, b) == prod => {
                if (a == xi && b == eta) || (a == eta && b == xi) {
                    2 * q - 1
                } else {
                    q - 1
                }
            }
            NormTwo::Union(a, b) if a == b && a == xi && a == eta => q * q + q,
            NormTwo::Union(..) => 0,
            NormTwo::Jordan(a) if field.mul(a, a) == prod && a != xi && a != eta => q,
            NormTwo::Jordan(a) if a == xi && a == eta => 2 * q,
            NormTwo::Jordan(_) => 0,
            NormTwo::Quadratic if quad_const() == prod => q + 1,
            NormTwo::Quadratic => 0,
        };
        (v, SEMISIMPLE_PAIR)
    };
    Ok(Prediction::new(value, Status::Proved, source))
}

/// The families of `a^{λ∪μ}_{λμ}` (and one cycle-extension family) with closed forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnionCase {
    /// `λ = (1)_{t-ξ₁}`, `μ = (1)_{t-ξ₂} ∪ … ∪ (1)_{t-ξ_d}`, ξ's distinct: `(2q-1)^{d-1}`.
    DistinctEigenvalueUnion { xis: Vec<Elem> },
    /// `λ = (1^c)_{t-ξ}`, `μ = (1^d)_{t-ξ}`, `ξ ∉ {0,1}`: `q^{cd} [c+d choose c]`.
    RepeatedEigenvalueUnion { xi: Elem, c: u32, d: u32 },
    /// `λ = (1)_{t-ξ₁}`, `μ = (1^{c₁})_{t-ξ₁} ∪ (1^{c₂})_{t-ξ₂} ∪ …`:
    /// `q^{c₁}[c₁+1] Π_{i≥2} (2q^{cᵢ} - 1)`. `c₁` may be zero.
    MixedUnion { xis: Vec<Elem>, cs: Vec<u32> },
    /// `λ = (1)_{t-ξ}`, `μ = (1)_f`, `f ≠ t-ξ`: `2q_f - 1`.
    ReflectionTimesCycle { xi: Elem, f: Poly },
    /// `λ = (1)_{t-ξ}`, `μ = (1^{c₁})_{t-ξ} ∪ (1^{cᵢ})_{fᵢ}`:
    /// `q^{c₁}[c₁+1] Π (2 q_{fᵢ}^{cᵢ} - 1)`.
    GeneralUnion {
        xi: Elem,
        c1: u32,
        rest: Vec<(Poly, u32)>,
    },
    /// `λ = (1)_{t-ξ}`, `μ = (1)_{f'}`, `ν = (1)_f` with `deg f = deg f' + 1`:
    /// `[deg f]` when `f(0) = -ξ f'(0)`, zero otherwise.
    CycleExtension { xi: Elem, f_prime: Poly, f: Poly },
}

impl UnionCase {
    pub fn id(&self) -> &'static str {
        match self {
            UnionCase::DistinctEigenvalueUnion { .. } => "distinct-eigenvalue-union",
            UnionCase::RepeatedEigenvalueUnion { .. } => "repeated-eigenvalue-union",
            UnionCase::MixedUnion { .. } => "mixed-union",
            UnionCase::ReflectionTimesCycle { .. } => "reflection-times-cycle",
            UnionCase::GeneralUnion { .. } => "general-union",
            UnionCase::CycleExtension { .. } => "cycle-extension",
        }
    }

    pub fn describe(&self, field: &Field) -> String {
        let el = |x: &Elem| field.format(*x);
        let list = |xs: &[Elem]| xs.iter().map(el).collect::<Vec<_>>().join(",");
        let nums = |cs: &[u32]| cs.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        match self {
            UnionCase::DistinctEigenvalueUnion { xis } => format!("q={} xis={}", field.q(), list(xis)),
            UnionCase::RepeatedEigenvalueUnion { xi, c, d } => {
                format!("q={} xi={} c={c} d={d}", field.q(), el(xi))
            }
            UnionCase::MixedUnion { xis, cs } => {
                format!("q={} xis={} cs={}", field.q(), list(xis), nums(cs))
            }
            UnionCase::ReflectionTimesCycle { xi, f } => {
                format!("q={} xi={} f={}", field.q(), el(xi), f.format(field))
            }
            UnionCase::GeneralUnion { xi, c1, rest } => {
                let rest: Vec<String> = rest
                    .iter()
                    .map(|(f, c)| format!("{}:{c}", f.format(field)))
                    .collect();
                format!("q={} xi={} c1={c1} rest={}", field.q(), el(xi), rest.join(","))
            }
            UnionCase::CycleExtension { xi, f_prime, f } => format!(
                "q={} xi={} fprime={} f={}",
                field.q(),
                el(xi),
                f_prime.format(field),
                f.format(field)
            ),
        }
    }

    fn status(&self) -> Status {
        match self {
            UnionCase::DistinctEigenvalueUnion { .. } | UnionCase::RepeatedEigenvalueUnion { .. } => {
                Status::Proved
            }
            // Degree-two targets are covered by the two-reflection table.
            UnionCase::CycleExtension { f, .. } if f.deg() == 2 => Status::Proved,
            _ => Status::Conjectural,
        }
    }

    fn source(&self) -> &'static str {
        match self {
            UnionCase::DistinctEigenvalueUnion { .. } => "(2q-1)^(d-1)",
            UnionCase::RepeatedEigenvalueUnion { .. } => "q^(cd) [c+d choose c]",
            UnionCase::MixedUnion { .. } => "q^c1 [c1+1] prod (2q^ci - 1)",
            UnionCase::ReflectionTimesCycle { .. } => "2 q_f - 1",
            UnionCase::GeneralUnion { .. } => "q^c1 [c1+1] prod (2 q_fi^ci - 1)",
            UnionCase::CycleExtension { .. } => "[deg f]",
        }
    }

    fn validate(&self, field: &Field) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameters(format!("{}: {m}", self.id())));
        let distinct = |xs: &[Elem]| {
            let mut v: Vec<u8> = xs.iter().map(|x| x.code()).collect();
            v.sort_unstable();
            v.windows(2).all(|w| w[0] != w[1])
        };
        let irreducible = |f: &Poly| f.is_monic() && f.is_irreducible(field) && *f != Poly::t();
        match self {
            UnionCase::DistinctEigenvalueUnion { xis } => {
                if xis.len() < 2 {
                    return bad("needs at least two eigenvalues");
                }
                if xis.iter().any(|x| x.is_zero()) || !distinct(xis) {
                    return bad("eigenvalues must be nonzero and pairwise distinct");
                }
            }
            UnionCase::RepeatedEigenvalueUnion { xi, c, d } => {
                if xi.is_zero() || *xi == Elem::ONE {
                    return bad("ξ must lie outside {0, 1}");
                }
                if *c == 0 || *d == 0 {
                    return bad("c and d must be positive");
                }
            }
            UnionCase::MixedUnion { xis, cs } => {
                if xis.is_empty() || xis.len() != cs.len() {
                    return bad("one multiplicity per eigenvalue");
                }
                if xis.iter().any(|x| x.is_zero()) || !distinct(xis) {
                    return bad("eigenvalues must be nonzero and pairwise distinct");
                }
                if cs[1..].contains(&0) {
                    return bad("multiplicities after the first must be positive");
                }
            }
            UnionCase::ReflectionTimesCycle { xi, f } => {
                if xi.is_zero() || !irreducible(f) || *f == Poly::linear(*xi, field) {
                    return bad("need ξ ≠ 0 and f ∈ Φ different from t-ξ");
                }
            }
            UnionCase::GeneralUnion { xi, rest, .. } => {
                let own = Poly::linear(*xi, field);
                if xi.is_zero() || rest.iter().any(|(f, c)| *c == 0 || !irreducible(f) || *f == own) {
                    return bad("need ξ ≠ 0, positive multiplicities, fᵢ ∈ Φ other than t-ξ");
                }
                let mut fs: Vec<&Poly> = rest.iter().map(|(f, _)| f).collect();
                fs.sort();
                if fs.windows(2).any(|w| w[0] == w[1]) {
                    return bad("the fᵢ must be distinct");
                }
            }
            UnionCase::CycleExtension { xi, f_prime, f } => {
                if xi.is_zero() || !irreducible(f_prime) || !irreducible(f) {
                    return bad("need ξ ≠ 0 and f', f ∈ Φ");
                }
                if f.deg() != f_prime.deg() + 1 || f.deg() < 2 {
                    return bad("need deg f = deg f' + 1 >= 2");
                }
            }
        }
        Ok(())
    }

    /// `(λ, μ, ν)` as modified types.
    pub fn triple(&self, field: &Field) -> Result<(GlType, GlType, GlType)> {
        self.validate(field)?;
        let m = Role::Modified;
        let lin = |x: &Elem| Poly::linear(*x, field);
        let ones = |c: u32| vec![1u32; c as usize];
        let from = |items: Vec<(Poly, Vec<u32>)>| -> Result<GlType> {
            let mut t = GlType::empty(m);
            for (f, parts) in items {
                if !parts.is_empty() {
                    t.insert(f, Partition::new(parts)?)?;
                }
            }
            Ok(t)
        };
        let (lambda, mu) = match self {
            UnionCase::DistinctEigenvalueUnion { xis } => (
                from(vec![(lin(&xis[0]), vec![1])])?,
                from(xis[1..].iter().map(|x| (lin(x), vec![1])).collect())?,
            ),
            UnionCase::RepeatedEigenvalueUnion { xi, c, d } => (
                from(vec![(lin(xi), ones(*c))])?,
                from(vec![(lin(xi), ones(*d))])?,
            ),
            UnionCase::MixedUnion { xis, cs } => (
                from(vec![(lin(&xis[0]), vec![1])])?,
                from(xis.iter().zip(cs).map(|(x, &c)| (lin(x), ones(c))).collect())?,
            ),
            UnionCase::ReflectionTimesCycle { xi, f } => (
                from(vec![(lin(xi), vec![1])])?,
                from(vec![(f.clone(), vec![1])])?,
            ),
            UnionCase::GeneralUnion { xi, c1, rest } => {
                let mut items = vec![(lin(xi), ones(*c1))];
                items.extend(rest.iter().map(|(f, c)| (f.clone(), ones(*c))));
                (from(vec![(lin(xi), vec![1])])?, from(items)?)
            }
            UnionCase::CycleExtension { xi, f_prime, f } => {
                return Ok((
                    from(vec![(lin(xi), vec![1])])?,
                    from(vec![(f_prime.clone(), vec![1])])?,
                    from(vec![(f.clone(), vec![1])])?,
                ))
            }
        };
        let nu = lambda.union(&mu);
        Ok((lambda, mu, nu))
    }
}

/// Closed-form value for a [`UnionCase`].
pub fn predict_union(case: &UnionCase, field: &Field) -> Result<Prediction> {
    let (lambda, mu, nu) = case.triple(field)?;
    let source = case.source();
    if nu.determinant(field) != field.mul(lambda.determinant(field), mu.determinant(field)) {
        return Ok(Prediction::new(0u32, Status::ZeroByGrading, source));
    }
    let q = q_of(field);
    let qb = BigUint::from(q);
    let two_q_pow_minus_one = |e: u64| BigUint::from(2u32) * qb.pow(e as u32) - 1u32;
    let head = |c1: u32| qb.pow(c1) * q_int(q, c1 + 1);
    let value = match case {
        UnionCase::DistinctEigenvalueUnion { xis } => {
            two_q_pow_minus_one(1).pow(xis.len() as u32 - 1)
        }
        UnionCase::RepeatedEigenvalueUnion { c, d, .. } => {
            qb.pow(c * d) * q_binomial(q, c + d, *c)?
        }
        UnionCase::MixedUnion { cs, .. } => cs[1..]
            .iter()
            .fold(head(cs[0]), |acc, &c| acc * two_q_pow_minus_one(c as u64)),
        UnionCase::ReflectionTimesCycle { f, .. } => two_q_pow_minus_one(f.deg() as u64),
        UnionCase::GeneralUnion { c1, rest, .. } => rest.iter().fold(head(*c1), |acc, (f, c)| {
            acc * two_q_pow_minus_one(f.deg() as u64 * *c as u64)
        }),
        UnionCase::CycleExtension { f, .. } => q_int(q, f.deg() as u32),
    };
    Ok(Prediction {
        value,
        status: case.status(),
        source,
    })
}

// ---------------------------------------------------------------------------
// Comparison harness
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseReport {
    pub id: String,
    pub params: String,
    pub computed: BigUint,
    pub predicted: Prediction,
}

impl CaseReport {
    pub fn matches(&self) -> bool {
        self.computed == self.predicted.value
    }

    /// A mismatch that should fail a run (as opposed to a conjectural finding).
    pub fn is_failure(&self) -> bool {
        !self.matches() && self.predicted.status != Status::Conjectural
    }

    pub fn line(&self) -> String {
        format!(
            "{}\t{}\tcomputed={}\tpredicted={}\t{}\t{}",
            self.id,
            self.params,
            self.computed,
            self.predicted.value,
            self.predicted.status,
            if self.matches() { "match" } else if self.is_failure() { "MISMATCH" } else { "finding" }
        )
    }
}

/// Computes the constant directly and compares it with [`predict_union`].
pub fn check_case(case: &UnionCase, field: &Field, bounds: &Bounds) -> Result<CaseReport> {
    let predicted = predict_union(case, field)?;
    let (lambda, mu, nu) = case.triple(field)?;
    let computed = stable_constant(&lambda, &mu, &nu, field, bounds)?;
    Ok(CaseReport {
        id: case.id().into(),
        params: case.describe(field),
        computed,
        predicted,
    })
}

/// Every `(ξ, η, ν)` with `‖ν‖ = 2` over `field`, one stable product per `(ξ, η)`.
/// With `per_case` the three separate case lists are used instead of the uniform table.
pub fn reflection_sweep(field: &Field, per_case: bool, bounds: &Bounds) -> Result<Vec<CaseReport>> {
    let targets: Vec<GlType> = enumerate_modified_types(2, 4, field)
        .into_iter()
        .filter(|t| t.norm() == 2)
        .collect();
    let mut out = Vec::new();
    for xi in field.nonzero() {
        for eta in field.nonzero() {
            let lambda = GlType::single(Role::Modified, Poly::linear(xi, field), &[1])?;
            let mu = GlType::single(Role::Modified, Poly::linear(eta, field), &[1])?;
            let product = stable_product(&lambda, &mu, field, bounds)?;
            for nu in &targets {
                let predicted = if per_case {
                    predict_reflection_cases(xi, eta, nu, field)?
                } else {
                    predict_reflection_product(xi, eta, nu, field)?
                };
                out.push(CaseReport {
                    id: if per_case { "reflection-cases" } else { "reflection-product" }.into(),
                    params: format!(
                        "q={} xi={} eta={} nu={}",
                        field.q(),
                        field.format(xi),
                        field.format(eta),
                        nu.format(field)
                    ),
                    computed: product.coefficient(nu),
                    predicted,
                });
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Fitting
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FitVariable {
    Q,
    /// `x = [n]_q` for the given `q`.
    QInteger(u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FitResult {
    pub variable: FitVariable,
    pub points: Vec<(BigRational, BigRational)>,
    /// Ascending coefficients in the standard basis.
    pub coefficients: Vec<BigRational>,
    /// Ascending coefficients of `A(x + 1)`, i.e. `A` written in powers of `(q - 1)`.
    pub shifted: Vec<BigRational>,
    pub all_integer: bool,
    pub all_nonnegative_shifted: bool,
}

fn trim(mut c: Vec<BigRational>) -> Vec<BigRational> {
    while c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
    c
}

fn lagrange(points: &[(BigRational, BigRational)]) -> Vec<BigRational> {
    let mut acc = vec![BigRational::zero(); points.len()];
    for (i, (xi, yi)) in points.iter().enumerate() {
        // basis polynomial Π_{j≠i} (x - x_j)/(x_i - x_j), built ascending
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (k, b) in basis.iter().enumerate() {
                next[k + 1] += b;
                next[k] -= b * xj;
            }
            basis = next;
            denom *= xi - xj;
        }
        let scale = yi / denom;
        for (a, b) in acc.iter_mut().zip(&basis) {
            *a += b * &scale;
        }
    }
    trim(acc)
}

/// Coefficients of `p(x + 1)`.
fn taylor_shift(coeffs: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); coeffs.len()];
    for (k, c) in coeffs.iter().enumerate() {
        let mut binom = BigInt::one();
        for (i, slot) in out.iter_mut().enumerate().take(k + 1) {
            *slot += c * BigRational::from_integer(binom.clone());
            binom = binom * BigInt::from(k - i) / BigInt::from(i + 1);
        }
    }
    out
}

impl FitResult {
    fn from_points(variable: FitVariable, points: Vec<(BigRational, BigRational)>) -> Result<FitResult> {
        if points.len() < 2 {
            return Err(Error::InvalidParameters("fitting needs at least two points".into()));
        }
        for (i, (a, _)) in points.iter().enumerate() {
            if points[..i].iter().any(|(b, _)| a == b) {
                return Err(Error::InvalidParameters(format!("duplicate abscissa {a}")));
            }
        }
        let coefficients = lagrange(&points);
        let shifted = taylor_shift(&coefficients);
        let fit = FitResult {
            variable,
            all_integer: coefficients.iter().all(|c| c.is_integer()),
            all_nonnegative_shifted: shifted.iter().all(|c| !c.is_negative()),
            coefficients,
            shifted,
            points,
        };
        for (x, y) in &fit.points {
            if fit.evaluate(x) != *y {
                return Err(Error::Invariant(format!("fit does not reproduce ({x}, {y})")));
            }
        }
        Ok(fit)
    }

    pub fn evaluate(&self, x: &BigRational) -> BigRational {
        self.coefficients
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    /// The interpolant has as many free coefficients as points, so a fit of
    /// full degree `points - 1` does not confirm the degree.
    pub fn possibly_underdetermined(&self) -> bool {
        self.coefficients.len() == self.points.len()
    }

    fn var_name(&self) -> &'static str {
        match self.variable {
            FitVariable::Q => "q",
            FitVariable::QInteger(_) => "x",
        }
    }

    fn render(coeffs: &[BigRational], var: &str) -> String {
        let mut out = String::new();
        for (k, c) in coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { "-" } else { "+" });
            }
            let unit = mag.is_one() && k > 0;
            if !unit {
                if mag.is_integer() {
                    out.push_str(&mag.to_integer().to_string());
                } else {
                    out.push_str(&format!("({mag})"));
                }
            }
            match k {
                0 => {}
                1 if unit => out.push_str(var),
                1 => out.push_str(&format!("*{var}")),
                _ if unit => out.push_str(&format!("{var}^{k}")),
                _ => out.push_str(&format!("*{var}^{k}")),
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    pub fn polynomial(&self) -> String {
        Self::render(&self.coefficients, self.var_name())
    }

    /// `A(q)` written in powers of `(q-1)`.
    pub fn shifted_polynomial(&self) -> String {
        let base = match self.variable {
            FitVariable::Q => "(q-1)",
            FitVariable::QInteger(_) => "(x-1)",
        };
        Self::render(&self.shifted, base)
    }
}

fn rat(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

pub fn fit_polynomial_in_q(points: &[(u64, BigUint)]) -> Result<FitResult> {
    FitResult::from_points(
        FitVariable::Q,
        points
            .iter()
            .map(|(q, v)| (rat(*q), rat(BigInt::from(v.clone()))))
            .collect(),
    )
}

/// `a^ν_{λμ}(n)` for each `n`, interpolated in `x = [n]_q`.
pub fn fit_polynomial_in_n(
    lambda: &GlType,
    mu: &GlType,
    nu: &GlType,
    field: &Field,
    ns: &[usize],
    bounds: &Bounds,
) -> Result<FitResult> {
    let q = q_of(field);
    let points = ns
        .iter()
        .map(|&n| {
            let a = structure_constant_at(lambda, mu, nu, n, field, bounds)?;
            Ok((rat(BigInt::from(q_int(q, n as u32))), rat(BigInt::from(a))))
        })
        .collect::<Result<Vec<_>>>()?;
    FitResult::from_points(FitVariable::QInteger(field.q()), points)
}

// ---------------------------------------------------------------------------
// Families across q
// ---------------------------------------------------------------------------

/// A type whose labels are monic integer polynomials, reduced modulo each `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerType(pub Vec<(Vec<i64>, Vec<u32>)>);

impl IntegerType {
    /// `(1^c)_{t-a}` pieces from `(a, c)` pairs.
    pub fn linear(pieces: &[(i64, u32)]) -> IntegerType {
        IntegerType(
            pieces
                .iter()
                .map(|&(a, c)| (vec![-a, 1], vec![1; c as usize]))
                .collect(),
        )
    }

    /// `None` when a label becomes reducible or `t`, or two labels collide.
    pub fn reduce(&self, field: &Field) -> Option<GlType> {
        let mut out = GlType::empty(Role::Modified);
        for (coeffs, parts) in &self.0 {
            let f = Poly::from_coeffs(coeffs.iter().map(|&c| field.from_int(c)).collect());
            if f.deg() + 1 != coeffs.len() || !f.is_irreducible(field) || f == Poly::t() {
                return None;
            }
            if out.get(&f).is_some() {
                return None;
            }
            out.insert(f, Partition::new(parts.clone()).ok()?).ok()?;
        }
        Some(out)
    }
}

#[derive(Clone, Debug)]
pub struct Family {
    pub name: &'static str,
    pub lambda: IntegerType,
    pub mu: IntegerType,
    /// The closed form the family is expected to follow, evaluated at `q`.
    pub expected: fn(u64) -> BigUint,
    /// Degree in `q` of that closed form.
    pub degree: usize,
}

impl Family {
    pub fn nu(&self) -> IntegerType {
        // top-degree union: merge partitions for repeated labels
        let mut items = self.lambda.0.clone();
        for (f, p) in &self.mu.0 {
            match items.iter_mut().find(|(g, _)| g == f) {
                Some((_, parts)) => parts.extend(p),
                None => items.push((f.clone(), p.clone())),
            }
        }
        IntegerType(items)
    }
}

fn mixed(q: u64, c1: u32, rest: &[u32]) -> BigUint {
    let qb = BigUint::from(q);
    rest.iter().fold(qb.pow(c1) * q_int(q, c1 + 1), |acc, &c| {
        acc * (BigUint::from(2u32) * qb.pow(c) - 1u32)
    })
}

/// Small mixed-union families whose labels stay distinct and irreducible for q ∈ {3, 5, 7}.
pub fn mixed_union_families() -> Vec<Family> {
    vec![
        Family {
            name: "(1)_{t-2} * (1)_{t-1}",
            lambda: IntegerType::linear(&[(2, 1)]),
            mu: IntegerType::linear(&[(1, 1)]),
            expected: |q| mixed(q, 0, &[1]),
            degree: 1,
        },
        Family {
            name: "(1)_{t-2} * (1,1)_{t-1}",
            lambda: IntegerType::linear(&[(2, 1)]),
            mu: IntegerType::linear(&[(1, 2)]),
            expected: |q| mixed(q, 0, &[2]),
            degree: 2,
        },
        Family {
            name: "(1)_{t-1} * (1)_{t-1}",
            lambda: IntegerType::linear(&[(1, 1)]),
            mu: IntegerType::linear(&[(1, 1)]),
            expected: |q| mixed(q, 1, &[]),
            degree: 2,
        },
        Family {
            name: "(1)_{t-2} * (1)_{t-2}",
            lambda: IntegerType::linear(&[(2, 1)]),
            mu: IntegerType::linear(&[(2, 1)]),
            expected: |q| mixed(q, 1, &[]),
            degree: 2,
        },
        Family {
            name: "(1)_{t-2} * (1,1)_{t-2}",
            lambda: IntegerType::linear(&[(2, 1)]),
            mu: IntegerType::linear(&[(2, 2)]),
            expected: |q| mixed(q, 2, &[]),
            degree: 4,
        },
        Family {
            name: "(1)_{t-2} * (1)_{t-2} u (1)_{t-1}",
            lambda: IntegerType::linear(&[(2, 1)]),
            mu: IntegerType::linear(&[(2, 1), (1, 1)]),
            expected: |q| mixed(q, 1, &[1]),
            degree: 3,
        },
    ]
}

#[derive(Clone, Debug)]
pub struct FamilyFit {
    pub name: &'static str,
    pub degree: usize,
    /// `(q, computed, expected)` for each `q` where the family reduces.
    pub values: Vec<(u64, BigUint, BigUint)>,
    pub skipped: Vec<u64>,
    pub fit: Option<FitResult>,
}

impl FamilyFit {
    /// Enough points to pin down a polynomial of the family's degree.
    pub fn determined(&self) -> bool {
        self.values.len() > self.degree
    }

    /// Human-readable observations; empty when everything agrees.
    pub fn findings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (q, got, want) in &self.values {
            if got != want {
                out.push(format!("{}: q={q} computed {got}, closed form gives {want}", self.name));
            }
        }
        for q in &self.skipped {
            out.push(format!("{}: skipped q={q} (label reducible or colliding)", self.name));
        }
        match &self.fit {
            None => out.push(format!("{}: fewer than two usable q, no fit", self.name)),
            Some(_) if !self.determined() => out.push(format!(
                "{}: {} points cannot determine a degree-{} polynomial; fit not informative",
                self.name,
                self.values.len(),
                self.degree
            )),
            Some(fit) => {
                if !fit.all_integer {
                    out.push(format!("{}: fitted polynomial {} has non-integer coefficients", self.name, fit.polynomial()));
                }
                if !fit.all_nonnegative_shifted {
                    out.push(format!(
                        "{}: shifted form {} has a negative coefficient",
                        self.name,
                        fit.shifted_polynomial()
                    ));
                }
            }
        }
        out
    }
}

pub fn fit_family(family: &Family, qs: &[u32], bounds: &Bounds) -> Result<FamilyFit> {
    let mut values = Vec::new();
    let mut skipped = Vec::new();
    let nu = family.nu();
    for &q in qs {
        let field = Field::from_order(q)?;
        match (family.lambda.reduce(&field), family.mu.reduce(&field), nu.reduce(&field)) {
            (Some(l), Some(m), Some(n)) => {
                let a = stable_constant(&l, &m, &n, &field, bounds)?;
                values.push((q as u64, a, (family.expected)(q as u64)));
            }
            _ => skipped.push(q as u64),
        }
    }
    let fit = if values.len() >= 2 {
        let pts: Vec<(u64, BigUint)> = values.iter().map(|(q, a, _)| (*q, a.clone())).collect();
        Some(fit_polynomial_in_q(&pts)?)
    } else {
        None
    };
    Ok(FamilyFit {
        name: family.name,
        degree: family.degree,
        values,
        skipped,
        fit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u32) -> Field {
        Field::from_order(q).unwrap()
    }

    fn ty(s: &str, fq: &Field) -> GlType {
        GlType::parse(s, Role::Modified, fq).unwrap()
    }

    fn r(v: i64) -> BigRational {
        rat(v)
    }

    #[test]
    fn reflection_table_examples() {
        let f3 = f(3);
        let p = predict_reflection_product(f3.elem(2).unwrap(), f3.elem(2).unwrap(), &ty("1,1@t-2", &f3), &f3).unwrap();
        assert_eq!(p.value, BigUint::from(12u32));
        assert_eq!(p.status, Status::Proved);
        let p = predict_reflection_product(f3.elem(2).unwrap(), f3.elem(2).unwrap(), &ty("1@t^2+1", &f3), &f3).unwrap();
        assert_eq!(p.value, BigUint::from(4u32));
        let f5 = f(5);
        let p = predict_reflection_product(f5.elem(1).unwrap(), f5.elem(4).unwrap(), &ty("2@t-2", &f5), &f5).unwrap();
        assert_eq!(p.value, BigUint::from(5u32));
        let p = predict_reflection_product(f5.elem(1).unwrap(), f5.elem(4).unwrap(), &ty("2@t-1", &f5), &f5).unwrap();
        assert_eq!(p.status, Status::ZeroByGrading);
        assert!(matches!(
            predict_reflection_product(f5.elem(1).unwrap(), f5.elem(4).unwrap(), &ty("1@t-1", &f5), &f5),
            Err(Error::NormMismatch(_))
        ));
        assert!(predict_reflection_product(Elem::ZERO, f5.elem(4).unwrap(), &ty("2@t-2", &f5), &f5).is_err());
    }

    #[test]
    fn union_examples() {
        let f3 = f(3);
        let p = predict_union(
            &UnionCase::DistinctEigenvalueUnion {
                xis: vec![f3.elem(1).unwrap(), f3.elem(2).unwrap()],
            },
            &f3,
        )
        .unwrap();
        assert_eq!(p.value, BigUint::from(5u32));
        let p = predict_union(
            &UnionCase::RepeatedEigenvalueUnion {
                xi: f3.elem(2).unwrap(),
                c: 1,
                d: 1,
            },
            &f3,
        )
        .unwrap();
        assert_eq!(p.value, BigUint::from(12u32));
        let f_prime = Poly::parse("t^2+t+2", &f3).unwrap();
        let cubic = Poly::parse("t^3+2*t+2", &f3).unwrap();
        let case = UnionCase::CycleExtension {
            xi: f3.elem(2).unwrap(),
            f_prime,
            f: cubic,
        };
        let p = predict_union(&case, &f3).unwrap();
        assert_eq!((p.value, p.status), (BigUint::from(13u32), Status::Conjectural));
        assert!(predict_union(
            &UnionCase::DistinctEigenvalueUnion {
                xis: vec![f3.elem(2).unwrap(), f3.elem(2).unwrap()],
            },
            &f3
        )
        .is_err());
        assert!(predict_union(
            &UnionCase::RepeatedEigenvalueUnion {
                xi: f3.elem(1).unwrap(),
                c: 1,
                d: 1
            },
            &f3
        )
        .is_err());
    }

    #[test]
    fn check_case_examples() {
        let b = Bounds::default();
        let f3 = f(3);
        let rep = check_case(
            &UnionCase::DistinctEigenvalueUnion {
                xis: vec![f3.elem(1).unwrap(), f3.elem(2).unwrap()],
            },
            &f3,
            &b,
        )
        .unwrap();
        assert!(rep.matches(), "{}", rep.line());
        let rep = check_case(
            &UnionCase::MixedUnion {
                xis: vec![f3.elem(2).unwrap(), f3.elem(1).unwrap()],
                cs: vec![1, 1],
            },
            &f3,
            &b,
        )
        .unwrap();
        assert_eq!(rep.computed, BigUint::from(60u32));
        // Shape of the report line.
        assert!(rep.line().starts_with("mixed-union\tq=3 xis=2,1 cs=1,1\tcomputed=60\tpredicted=60"));
    }

    #[test]
    fn reflection_sweeps_agree() {
        let b = Bounds::default();
        for q in [2u32, 3] {
            for per_case in [false, true] {
                for rep in reflection_sweep(&f(q), per_case, &b).unwrap() {
                    assert!(rep.matches(), "{}", rep.line());
                }
            }
        }
    }

    #[test]
    fn case_lists_over_f5() {
        let b = Bounds::default();
        let f5 = f(5);
        for rep in reflection_sweep(&f5, true, &b).unwrap() {
            assert!(rep.matches(), "{}", rep.line());
        }
    }

    #[test]
    fn two_minus_one_eigenvalues_from_transvections() {
        // Two transvections never multiply to -I_2, so (1,1)_{t+1} has coefficient 0
        // even though ξ'η' = 1 and ξ' ≠ 1.
        let b = Bounds::default();
        let f3 = f(3);
        let u = ty("1@t-1", &f3);
        let a = stable_constant(&u, &u, &ty("1,1@t-2", &f3), &f3, &b).unwrap();
        assert!(a.is_zero());
    }

    #[test]
    fn fit_examples() {
        let pts = [(3u64, 17u32), (5, 49), (7, 97)].map(|(q, v)| (q, BigUint::from(v)));
        let fit = fit_polynomial_in_q(&pts).unwrap();
        assert_eq!(fit.coefficients, vec![r(-1), r(0), r(2)]);
        assert_eq!(fit.shifted, vec![r(1), r(4), r(2)]);
        assert!(fit.all_integer && fit.all_nonnegative_shifted);
        assert_eq!(fit.polynomial(), "2*q^2-1");
        assert_eq!(fit.shifted_polynomial(), "2*(q-1)^2+4*(q-1)+1");

        let constant = [(2u64, 7u32), (3, 7), (4, 7)].map(|(q, v)| (q, BigUint::from(v)));
        let fit = fit_polynomial_in_q(&constant).unwrap();
        assert_eq!(fit.coefficients, vec![r(7)]);
        assert!(!fit.possibly_underdetermined());

        let line = [(2u64, 3u32), (3, 4), (5, 6)].map(|(q, v)| (q, BigUint::from(v)));
        assert_eq!(fit_polynomial_in_q(&line).unwrap().polynomial(), "q+1");

        let dup = [(2u64, 3u32), (2, 4)].map(|(q, v)| (q, BigUint::from(v)));
        assert!(fit_polynomial_in_q(&dup).is_err());
        assert!(fit_polynomial_in_q(&dup[..1]).is_err());
    }

    #[test]
    fn fit_in_n_examples() {
        let b = Bounds::default();
        let f2 = f(2);
        let u = ty("1@t-1", &f2);
        let e = GlType::empty(Role::Modified);
        let fit = fit_polynomial_in_n(&u, &u, &e, &f2, &[2, 3, 4], &b).unwrap();
        for (n, (x, y)) in [2usize, 3, 4].iter().zip(&fit.points) {
            let size = crate::gltype::class_size(&u, *n, &f2).unwrap();
            assert_eq!(*y, rat(BigInt::from(size)));
            assert_eq!(fit.evaluate(x), *y);
        }
        let f3 = f(3);
        let u3 = ty("1@t-1", &f3);
        let fit = fit_polynomial_in_n(&u3, &u3, &u3, &f3, &[2, 3, 4], &b).unwrap();
        assert!(fit.points.iter().all(|(x, y)| fit.evaluate(x) == *y));
        let top = fit_polynomial_in_n(&u3, &u3, &ty("1,1@t-1", &f3), &f3, &[4, 5], &b).unwrap();
        assert_eq!(top.degree(), 0);
    }

    #[test]
    fn integer_labels() {
        let fam = IntegerType::linear(&[(2, 1), (-1, 1)]);
        assert!(fam.reduce(&f(3)).is_none());
        assert_eq!(fam.reduce(&f(5)).unwrap(), ty("1@t-2;1@t-4", &f(5)));
        assert!(IntegerType::linear(&[(3, 1)]).reduce(&f(3)).is_none());
        let fams = mixed_union_families();
        assert_eq!(fams[5].nu(), IntegerType(vec![(vec![-2, 1], vec![1, 1]), (vec![-1, 1], vec![1])]));
    }
}
