//! Self-check suites behind `glq verify`.
//!
//! Each suite recomputes a family of quantities two ways (or against a known
//! closed form) and reports one line per check. Conjectural comparisons land in
//! `findings` and never fail a suite.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::Pow;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classcalc::{
    enumerate_group, enumerate_modified_types, multiply_class_sums, multiply_oracle,
    normalize_triple, stable_product, structure_constant_at, Bounds,
};
use crate::error::Result;
use crate::field::Field;
use crate::gltype::{
    canonical_matrix, centralizer_order, gl_order, lift, modified_type_of, plain_types,
    reflection_length, GlType, Role,
};
use crate::matrix::Matrix;
use crate::poly::{monic_polys, Poly};
use crate::stablecenter::{
    check_case, fit_family, mixed_union_families, reflection_sweep, Status, UnionCase,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteLine {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: String,
    pub lines: Vec<SuiteLine>,
    pub findings: Vec<String>,
}

impl SuiteReport {
    fn new(suite: &str) -> SuiteReport {
        SuiteReport {
            suite: suite.into(),
            ..SuiteReport::default()
        }
    }

    fn push(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.lines.push(SuiteLine {
            name: name.into(),
            ok,
            detail: detail.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.ok)
    }

    pub fn failures(&self) -> usize {
        self.lines.iter().filter(|l| !l.ok).count()
    }
}

fn field(q: u32) -> Result<Field> {
    Field::from_order(q)
}

fn modified(text: &str, f: &Field) -> Result<GlType> {
    GlType::parse(text, Role::Modified, f)
}

/// Top-degree triples `(q, λ, μ, ν)` used for the stability checks.
pub const STABILITY_TRIPLES: &[(u32, &str, &str, &str)] = &[
    (2, "1@t-1", "1@t-1", "1,1@t-1"),
    (2, "1@t-1", "1@t-1", "2@t-1"),
    (2, "1@t-1", "1@t-1", "1@t^2+t+1"),
    (2, "1@t^2+t+1", "1@t-1", "1@t^2+t+1;1@t-1"),
    (2, "∅", "1@t-1", "1@t-1"),
    (3, "1@t-1", "1@t-2", "1@t-1;1@t-2"),
    (3, "1@t-2", "1@t-2", "1,1@t-2"),
    (3, "1@t-2", "1@t-2", "2@t-2"),
    (3, "1@t-1", "1@t-1", "1@t^2+1"),
    (3, "1@t-2", "1@t^2+t+2", "1@t-2;1@t^2+t+2"),
];

pub fn stability_suite(bounds: &Bounds) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("stability");
    for &(q, l, m, n) in STABILITY_TRIPLES {
        let f = field(q)?;
        let (l, m, nu) = (modified(l, &f)?, modified(m, &f)?, modified(n, &f)?);
        let k = nu.min_size(&f).max(1);
        let values = (k..k + 3)
            .map(|n| structure_constant_at(&l, &m, &nu, n, &f, bounds))
            .collect::<Result<Vec<_>>>()?;
        let ok = values.windows(2).all(|w| w[0] == w[1]);
        let shown: Vec<String> = values.iter().map(BigUint::to_string).collect();
        rep.push(
            format!("q={q} {} * {} -> {}", l.format(&f), m.format(&f), nu.format(&f)),
            ok,
            format!("n={}..{}: {}", k, k + 2, shown.join(", ")),
        );
    }
    Ok(rep)
}

pub fn oracle_suite(bounds: &Bounds) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("oracle");
    for (q, n) in [(2u32, 2usize), (2, 3), (3, 2)] {
        let f = field(q)?;
        let types = enumerate_modified_types(2, n, &f);
        let mut agree = 0usize;
        let mut total = 0usize;
        for l in &types {
            for m in &types {
                total += 1;
                let fast = multiply_class_sums(l, m, n, &f, bounds)?;
                let slow = multiply_oracle(l, m, n, &f, bounds)?;
                if fast == slow {
                    agree += 1;
                } else {
                    rep.push(
                        format!("q={q} n={n} {} * {}", l.format(&f), m.format(&f)),
                        false,
                        "fixed-representative and all-pairs expansions differ",
                    );
                }
            }
        }
        rep.push(
            format!("q={q} n={n}"),
            agree == total,
            format!("{agree}/{total} products agree"),
        );
    }
    Ok(rep)
}

/// Brute-force commutant sizes for every class of `G_n`, `n ≤ 3`, `q ∈ {2, 3}`,
/// and the split of `|A_{μ↑n}|` through `G_{n-k}` for `‖μ‖ ≤ 3`.
pub fn centralizer_suite(bounds: &Bounds) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("centralizers");
    for q in [2u32, 3] {
        let f = field(q)?;
        for n in 1..=3 {
            let types = plain_types(n, &f);
            let reps: Vec<Matrix> = types
                .iter()
                .map(|t| canonical_matrix(t, &f))
                .collect::<Result<_>>()?;
            let mut counts = vec![0u64; reps.len()];
            for g in enumerate_group(n, &f, bounds)? {
                for (c, j) in counts.iter_mut().zip(&reps) {
                    if g.mul(j, &f)? == j.mul(&g, &f)? {
                        *c += 1;
                    }
                }
            }
            let mut bad = Vec::new();
            for ((t, c), _) in types.iter().zip(&counts).zip(&reps) {
                let formula = centralizer_order(t, &f)?;
                if formula != BigUint::from(*c) {
                    bad.push(format!("{}: formula {formula}, counted {c}", t.format(&f)));
                }
            }
            rep.push(
                format!("q={q} n={n} commutants"),
                bad.is_empty(),
                if bad.is_empty() {
                    format!("{} classes", types.len())
                } else {
                    bad.join("; ")
                },
            );
        }
        let mut checked = 0;
        let mut bad = Vec::new();
        for mu in enumerate_modified_types(3, 9, &f) {
            let k = mu.min_size(&f);
            let r = mu.unipotent_part(&f).len() as u32;
            let base = centralizer_order(&lift(&mu, k, &f)?, &f)?;
            for n in k..=k + 2 {
                let lhs = centralizer_order(&lift(&mu, n, &f)?, &f)?;
                let m = (n - k) as u32;
                let rhs = &base * gl_order(n - k, &f) * Pow::pow(BigUint::from(q), 2 * r * m);
                checked += 1;
                if lhs != rhs {
                    bad.push(format!("{} at n={n}", mu.format(&f)));
                }
            }
        }
        rep.push(
            format!("q={q} centralizer split"),
            bad.is_empty(),
            if bad.is_empty() {
                format!("{checked} (μ, n) pairs")
            } else {
                bad.join("; ")
            },
        );
    }
    Ok(rep)
}

/// `g = I + XY` with `X` of size `n×r`, `Y` of size `r×n`.
fn random_low_length<R: Rng>(n: usize, r: usize, f: &Field, rng: &mut R) -> Matrix {
    loop {
        let x = Matrix::random(n, r, f, rng);
        let y = Matrix::random(r, n, f, rng);
        let g = Matrix::identity(n).add(&x.mul(&y, f).expect("shapes"), f).expect("shapes");
        if g.is_invertible(f) {
            return g;
        }
    }
}

/// Seeded length-additive pairs: `count` of them, spread over `q ∈ {2,3,5}` and `n ≤ 4`.
pub fn random_additive_pairs(seed: u64, count: usize) -> Result<Vec<(Field, Matrix, Matrix)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fields = [field(2)?, field(3)?, field(5)?];
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let f = &fields[out.len() % fields.len()];
        let n = rng.gen_range(1..=4usize);
        let r = rng.gen_range(0..=n);
        let s = rng.gen_range(0..=n - r);
        let g = random_low_length(n, r, f, &mut rng);
        let h = random_low_length(n, s, f, &mut rng);
        let gh = g.mul(&h, f)?;
        if reflection_length(&gh, f)? == reflection_length(&g, f)? + reflection_length(&h, f)? {
            out.push((f.clone(), g, h));
        }
    }
    Ok(out)
}

pub fn normal_form_suite(seed: u64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("normal-form");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6e66);
    let pairs = random_additive_pairs(seed, 100)?;
    let mut ok = 0;
    for (f, g, h) in &pairs {
        let n = g.rows();
        let nf = normalize_triple(g, h, f, &mut rng)?;
        let z_inv = nf.z.inverse(f)?;
        let pad = Matrix::identity(n - nf.k);
        let conj = |x: &Matrix| -> Result<Matrix> { nf.z.mul(x, f)?.mul(&z_inv, f) };
        let gbh = nf.gbar.mul(&nf.hbar, f)?;
        let good = conj(g)? == Matrix::block_diag(&[nf.gbar.clone(), pad.clone()])
            && conj(h)? == Matrix::block_diag(&[nf.hbar.clone(), pad.clone()])
            && conj(&g.mul(h, f)?)? == Matrix::block_diag(&[gbh, pad])
            && modified_type_of(&nf.gbar, f)? == modified_type_of(g, f)?
            && modified_type_of(&nf.hbar, f)? == modified_type_of(h, f)?;
        if good {
            ok += 1;
        } else {
            rep.push(
                format!("q={} g={} h={}", f.q(), g.format(f), h.format(f)),
                false,
                "block identities fail",
            );
        }
    }
    rep.push(
        format!("seed={seed}"),
        ok == pairs.len(),
        format!("{ok}/{} pairs normalized", pairs.len()),
    );
    Ok(rep)
}

/// Published coefficients of `λ∪μ` in `K_λ(n) K_μ(n)`: `(q, n, λ, μ, ν, a)`.
pub const UNION_PRODUCT_VALUES: &[(u32, usize, &str, &str, &str, u64)] = &[
    (3, 5, "1@t-2", "1,1@t-1", "1@t-2;1,1@t-1", 17),
    (3, 5, "1@t-1", "1@t-1;1@t-2", "1@t-2;1,1@t-1", 60),
    (3, 6, "1@t-2", "1@t-2;1,1@t-1", "1,1@t-2;1,1@t-1", 204),
    (5, 3, "1@t-2", "1,1@t-3", "1@t-2;1,1@t-3", 49),
    (5, 4, "1@t-2", "1,1,1@t-3", "1@t-2;1,1,1@t-3", 249),
    (5, 4, "1@t-2", "1,1@t-3;1@t-4", "1@t-2;1,1@t-3;1@t-4", 441),
    (5, 4, "1@t-4", "1@t-4;1,1@t-3", "1,1@t-4;1,1@t-3", 1470),
];

/// Cubic targets with their coefficients.
pub type Coefficients = Vec<(Poly, BigUint)>;

/// `(q, ξ, f', a)`: every cubic `f` with `f(0) = -ξ f'(0)` should get `a`.
pub const CUBIC_TARGET_VALUES: &[(u32, u32, &str, u64)] =
    &[(3, 2, "t^2+t+2", 13), (5, 2, "t^2+4*t+2", 31)];

/// Coefficients of every irreducible cubic in `K_{(1)_{t-ξ}} K_{(1)_{f'}}` at `n = 3`,
/// split by whether the constant term is the forced one.
pub fn cubic_targets(
    q: u32,
    xi: u32,
    f_prime: &str,
    bounds: &Bounds,
) -> Result<(Coefficients, Coefficients)> {
    let f = field(q)?;
    let xi = f.elem(xi)?;
    let fp = Poly::parse(f_prime, &f)?;
    let lambda = GlType::single(Role::Modified, Poly::linear(xi, &f), &[1])?;
    let mu = GlType::single(Role::Modified, fp.clone(), &[1])?;
    let exp = multiply_class_sums(&lambda, &mu, 3, &f, bounds)?;
    let forced = f.neg(f.mul(xi, fp.constant_term()));
    let mut hit = Vec::new();
    let mut other = Vec::new();
    for c in monic_polys(&f, 3).filter(|p| p.is_irreducible(&f)) {
        let nu = GlType::single(Role::Modified, c.clone(), &[1])?;
        let a = exp.coefficient(&nu);
        if c.constant_term() == forced {
            hit.push((c, a));
        } else {
            other.push((c, a));
        }
    }
    Ok((hit, other))
}

pub fn published_values_suite(bounds: &Bounds) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("paper4");
    for q in [2u32, 3] {
        let f = field(q)?;
        let rows = reflection_sweep(&f, false, bounds)?;
        let bad: Vec<String> = rows.iter().filter(|r| !r.matches()).map(|r| r.line()).collect();
        rep.push(
            format!("reflection table q={q}"),
            bad.is_empty(),
            if bad.is_empty() { format!("{} coefficients", rows.len()) } else { bad.join("; ") },
        );
    }
    for q in [2u32, 3, 5] {
        let f = field(q)?;
        let rows = reflection_sweep(&f, true, bounds)?;
        let bad: Vec<String> = rows.iter().filter(|r| !r.matches()).map(|r| r.line()).collect();
        rep.push(
            format!("reflection case lists q={q}"),
            bad.is_empty(),
            if bad.is_empty() { format!("{} coefficients", rows.len()) } else { bad.join("; ") },
        );
    }
    for &(q, n, l, m, nu, want) in UNION_PRODUCT_VALUES {
        let f = field(q)?;
        let exp = multiply_class_sums(&modified(l, &f)?, &modified(m, &f)?, n, &f, bounds)?;
        let got = exp.coefficient(&modified(nu, &f)?);
        rep.push(
            format!("union product q={q} n={n} {l} * {m}"),
            got == BigUint::from(want),
            format!("computed {got}, expected {want}"),
        );
    }
    for &(q, xi, fp, want) in CUBIC_TARGET_VALUES {
        let (hit, other) = cubic_targets(q, xi, fp, bounds)?;
        let ok = hit.iter().all(|(_, a)| *a == BigUint::from(want))
            && other.iter().all(|(_, a)| *a == BigUint::from(0u32));
        rep.push(
            format!("cubic targets q={q} xi={xi} f'={fp}"),
            ok,
            format!("{} cubics with the forced constant term, all {want}", hit.len()),
        );
    }
    let mut cases: Vec<(u32, UnionCase)> = Vec::new();
    for q in [3u32, 5] {
        let f = field(q)?;
        let nz: Vec<_> = f.nonzero().collect();
        for &a in &nz {
            for &b in &nz {
                if a != b {
                    cases.push((q, UnionCase::DistinctEigenvalueUnion { xis: vec![a, b] }));
                }
            }
        }
    }
    {
        let f5 = field(5)?;
        let nz: Vec<_> = f5.nonzero().collect();
        for (i, &a) in nz.iter().enumerate() {
            for (j, &b) in nz.iter().enumerate() {
                for (k, &c) in nz.iter().enumerate() {
                    if i != j && j < k && i != k {
                        cases.push((5, UnionCase::DistinctEigenvalueUnion { xis: vec![a, b, c] }));
                    }
                }
            }
        }
        let f3 = field(3)?;
        for (c, d) in [(1, 1), (1, 2), (2, 1)] {
            cases.push((
                3,
                UnionCase::RepeatedEigenvalueUnion {
                    xi: f3.elem(2)?,
                    c,
                    d,
                },
            ));
        }
    }
    rep.findings.push(
        "three pairwise distinct nonzero eigenvalues do not exist over F_3; that sweep is empty".into(),
    );
    for (q, case) in &cases {
        let f = field(*q)?;
        let r = check_case(case, &f, bounds)?;
        rep.push(r.id.clone() + " " + &r.params, r.matches(), r.line());
    }
    for fam in mixed_union_families() {
        let fit = fit_family(&fam, &[3, 5, 7], bounds)?;
        rep.findings.extend(fit.findings());
        if let (Some(fr), true) = (&fit.fit, fit.determined()) {
            rep.findings.push(format!(
                "{}: fitted {} = {}",
                fam.name,
                fr.polynomial(),
                fr.shifted_polynomial()
            ));
        }
    }
    let f3 = field(3)?;
    for xi in f3.nonzero() {
        for fp in monic_polys(&f3, 2).filter(|p| p.is_irreducible(&f3)) {
            for fc in monic_polys(&f3, 3).filter(|p| p.is_irreducible(&f3)) {
                let case = UnionCase::CycleExtension {
                    xi,
                    f_prime: fp.clone(),
                    f: fc,
                };
                let r = check_case(&case, &f3, bounds)?;
                if !r.matches() {
                    if r.predicted.status == Status::Conjectural {
                        rep.findings.push(r.line());
                    } else {
                        rep.push(r.id.clone() + " " + &r.params, false, r.line());
                    }
                }
            }
        }
    }
    Ok(rep)
}

/// Products whose expansion is in `cache`, recomputed and compared.
pub fn cross_check_cache(
    store: &crate::store::Store,
    bounds: &Bounds,
) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("cache");
    let mut fields: HashMap<u32, Field> = HashMap::new();
    for rec in store.records() {
        let e = &rec.expansion;
        let f = fields.entry(e.q).or_insert(field(e.q)?).clone();
        let fresh = match e.n {
            Some(n) => multiply_class_sums(&e.lambda, &e.mu, n, &f, bounds)?,
            None => stable_product(&e.lambda, &e.mu, &f, bounds)?,
        };
        rep.push(rec.key.clone(), fresh == *e, "cached expansion recomputed");
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_are_additive_and_reproducible() {
        let a = random_additive_pairs(11, 30).unwrap();
        let b = random_additive_pairs(11, 30).unwrap();
        assert_eq!(
            a.iter().map(|(_, g, h)| (g.clone(), h.clone())).collect::<Vec<_>>(),
            b.iter().map(|(_, g, h)| (g.clone(), h.clone())).collect::<Vec<_>>()
        );
        assert!(a.iter().any(|(_, g, h)| !g.is_identity() && !h.is_identity()));
    }

    #[test]
    fn small_suites_pass() {
        let b = Bounds::default();
        assert!(stability_suite(&b).unwrap().passed());
        assert!(normal_form_suite(5).unwrap().passed());
    }
}
