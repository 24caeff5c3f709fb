//! Exact arithmetic for the conductor square
//!
//! ```text
//!   R ──▶ D = k[X] localized at (X) and (X − 1)
//!   │          │
//!   ▼          ▼
//!   A ──i──▶ B = k[X]/(X²) × k[X]/((X − 1)²),    A = k[T]/(T²)
//! ```
//!
//! with `i(a + bt) = (a + bx, a + b(x − 1))`. Everything is computed modulo
//! the conductor `𝔣 = X²(X − 1)²D`, inside `B = D/𝔣`, over the rationals.
//! The same computation is repeated inside `D/𝔣²` as an independent guard.
//!
//! Not computed: the completion of `R` being a hypersurface and the
//! multiplicity-two argument. Neither reduces to finite-dimensional linear algebra.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub type Q = BigRational;

fn q(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

fn q_str(v: &Q) -> String {
    v.to_string()
}

/// A k-subspace of `k^n` held in reduced row-echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<Vec<Q>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn span(ambient: usize, vectors: &[Vec<Q>]) -> Self {
        let mut rows: Vec<Vec<Q>> = vectors.to_vec();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..ambient {
            let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
                continue;
            };
            rows.swap(rank, p);
            let scale = Q::one() / rows[rank][col].clone();
            for v in rows[rank].iter_mut() {
                *v = &*v * &scale;
            }
            let pivot_row = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && !row[col].is_zero() {
                    let f = row[col].clone();
                    for (v, pv) in row.iter_mut().zip(&pivot_row) {
                        *v = &*v - &f * pv;
                    }
                }
            }
            pivots.push(col);
            rank += 1;
        }
        rows.truncate(rank);
        Subspace {
            ambient,
            rows,
            pivots,
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Canonical basis (the RREF rows).
    pub fn basis(&self) -> &[Vec<Q>] {
        &self.rows
    }

    /// `v` reduced against the basis; zero iff `v` lies in the subspace.
    pub fn residual(&self, v: &[Q]) -> Vec<Q> {
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !out[p].is_zero() {
                let f = out[p].clone();
                for (o, r) in out.iter_mut().zip(row) {
                    *o = &*o - &f * r;
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        self.residual(v).iter().all(Zero::is_zero)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.rows.iter().all(|v| self.contains(v))
    }

    /// Coordinates of `v` (assumed inside) with respect to [`Self::basis`].
    pub fn coords(&self, v: &[Q]) -> Vec<Q> {
        self.pivots.iter().map(|&p| v[p].clone()).collect()
    }

    /// `{Σ cᵢ bᵢ : Σ cᵢ f(bᵢ) = 0}` over the basis `bᵢ` of `self`, for linear `f`.
    pub fn kernel_of(&self, f: impl Fn(&[Q]) -> Vec<Q>) -> Subspace {
        let images: Vec<Vec<Q>> = self.rows.iter().map(|b| f(b)).collect();
        let combos = left_kernel(&images);
        let vectors: Vec<Vec<Q>> = combos
            .iter()
            .map(|c| {
                let mut v = vec![Q::zero(); self.ambient];
                for (ci, b) in c.iter().zip(&self.rows) {
                    for (vi, bi) in v.iter_mut().zip(b) {
                        *vi = &*vi + ci * bi;
                    }
                }
                v
            })
            .collect();
        Subspace::span(self.ambient, &vectors)
    }

    pub fn whole(ambient: usize) -> Self {
        let vectors: Vec<Vec<Q>> = (0..ambient).map(|i| unit_vector(ambient, i)).collect();
        Subspace::span(ambient, &vectors)
    }
}

fn unit_vector(n: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    v[i] = Q::one();
    v
}

/// Basis of `{c : Σ cᵢ rowsᵢ = 0}`.
pub fn left_kernel(rows: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let k = rows.len();
    if k == 0 {
        return Vec::new();
    }
    let width = rows[0].len();
    // Reduce [rows | I]; rows of the identity block next to zero rows span the kernel.
    let mut aug: Vec<Vec<Q>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut v = r.clone();
            v.extend(unit_vector(k, i));
            v
        })
        .collect();
    let mut rank = 0;
    for col in 0..width {
        let Some(p) = (rank..k).find(|&r| !aug[r][col].is_zero()) else {
            continue;
        };
        aug.swap(rank, p);
        let pivot_row = aug[rank].clone();
        for (r, row) in aug.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let f = &row[col] / &pivot_row[col];
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v = &*v - &f * pv;
                }
            }
        }
        rank += 1;
    }
    aug[rank..].iter().map(|r| r[width..].to_vec()).collect()
}

/// `∏_f k[Y_f]/(Y_f^{n_f})`, coordinates ordered factor by factor, powers ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalProduct {
    factor_lengths: Vec<usize>,
}

impl LocalProduct {
    pub fn new(factor_lengths: Vec<usize>) -> Self {
        LocalProduct { factor_lengths }
    }

    pub fn dim(&self) -> usize {
        self.factor_lengths.iter().sum()
    }

    pub fn factor_count(&self) -> usize {
        self.factor_lengths.len()
    }

    fn offset(&self, f: usize) -> usize {
        self.factor_lengths[..f].iter().sum()
    }

    pub fn mul(&self, a: &[Q], b: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.dim()];
        for (f, &n) in self.factor_lengths.iter().enumerate() {
            let o = self.offset(f);
            for i in 0..n {
                if a[o + i].is_zero() {
                    continue;
                }
                for j in 0..n - i {
                    out[o + i + j] = &out[o + i + j] + &a[o + i] * &b[o + j];
                }
            }
        }
        out
    }

    pub fn one(&self) -> Vec<Q> {
        self.idempotent_sum(&(0..self.factor_count()).collect::<Vec<_>>())
    }

    /// The idempotent supported on factor `f`.
    pub fn idempotent(&self, f: usize) -> Vec<Q> {
        self.idempotent_sum(&[f])
    }

    fn idempotent_sum(&self, factors: &[usize]) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim()];
        for &f in factors {
            v[self.offset(f)] = Q::one();
        }
        v
    }

    /// Constant term of the `f`-th component.
    pub fn constant_term(&self, v: &[Q], f: usize) -> Q {
        v[self.offset(f)].clone()
    }

    pub fn is_unit(&self, v: &[Q]) -> bool {
        (0..self.factor_count()).all(|f| !self.constant_term(v, f).is_zero())
    }

    /// Truncation to `∏ k[Y_f]/(Y_f^{m_f})` with `m_f ≤ n_f`.
    pub fn truncate(&self, v: &[Q], target: &LocalProduct) -> Vec<Q> {
        let mut out = Vec::with_capacity(target.dim());
        for (f, &m) in target.factor_lengths.iter().enumerate() {
            let o = self.offset(f);
            out.extend_from_slice(&v[o..o + m]);
        }
        out
    }

    pub fn is_subalgebra(&self, sub: &Subspace) -> bool {
        sub.contains(&self.one())
            && sub
                .basis()
                .iter()
                .all(|a| sub.basis().iter().all(|b| sub.contains(&self.mul(a, b))))
    }

    /// `{β : β·W ⊆ W}`.
    pub fn idealizer(&self, w: &Subspace) -> Subspace {
        Subspace::whole(self.dim()).kernel_of(|beta| {
            w.basis()
                .iter()
                .flat_map(|wj| w.residual(&self.mul(beta, wj)))
                .collect()
        })
    }

    /// Nilradical of a subalgebra: radical of the trace form (characteristic 0).
    pub fn trace_radical(&self, sub: &Subspace) -> Subspace {
        let basis = sub.basis().to_vec();
        let trace = |a: &[Q]| -> Q {
            basis
                .iter()
                .enumerate()
                .map(|(j, bj)| sub.coords(&self.mul(a, bj))[j].clone())
                .fold(Q::zero(), |acc, x| acc + x)
        };
        sub.kernel_of(|a| basis.iter().map(|bj| trace(&self.mul(a, bj))).collect())
    }

    /// Non-units of a subalgebra, when they form a subspace. They do exactly
    /// when one of the sets `sub ∩ {constant term of factor f = 0}` contains
    /// all the others.
    pub fn non_units(&self, sub: &Subspace) -> Option<Subspace> {
        let parts: Vec<Subspace> = (0..self.factor_count())
            .map(|f| sub.kernel_of(|v| vec![self.constant_term(v, f)]))
            .collect();
        parts
            .iter()
            .find(|big| parts.iter().all(|p| big.contains_subspace(p)))
            .cloned()
    }

    pub fn is_ideal_of(&self, ideal: &Subspace, ring: &Subspace) -> bool {
        ring.contains_subspace(ideal)
            && ideal
                .basis()
                .iter()
                .all(|a| ring.basis().iter().all(|r| ideal.contains(&self.mul(a, r))))
    }

    pub fn square_is_zero(&self, ideal: &Subspace) -> bool {
        ideal
            .basis()
            .iter()
            .all(|a| ideal.basis().iter().all(|b| self.mul(a, b).iter().all(Zero::is_zero)))
    }
}

/// `a + b·t` in `A = k[T]/(T²)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AElement {
    pub a: Q,
    pub b: Q,
}

impl AElement {
    pub fn new(a: i64, b: i64) -> Self {
        AElement { a: q(a), b: q(b) }
    }

    pub fn mul(&self, other: &AElement) -> AElement {
        AElement {
            a: &self.a * &other.a,
            b: &self.a * &other.b + &self.b * &other.a,
        }
    }

    /// `i(a + bt) = (a + bx, a + b(x − 1))`.
    pub fn embed(&self) -> BElement {
        BElement {
            p: self.a.clone(),
            q: self.b.clone(),
            r: self.a.clone(),
            s: self.b.clone(),
        }
    }
}

/// `(p + q·x, r + s·(x − 1))` in `B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BElement {
    pub p: Q,
    pub q: Q,
    pub r: Q,
    pub s: Q,
}

impl BElement {
    pub fn new(p: i64, q_: i64, r: i64, s: i64) -> Self {
        BElement {
            p: q(p),
            q: q(q_),
            r: q(r),
            s: q(s),
        }
    }

    pub fn from_coords(v: &[Q]) -> Self {
        BElement {
            p: v[0].clone(),
            q: v[1].clone(),
            r: v[2].clone(),
            s: v[3].clone(),
        }
    }

    pub fn coords(&self) -> Vec<Q> {
        vec![self.p.clone(), self.q.clone(), self.r.clone(), self.s.clone()]
    }

    /// `x² = 0` in the first factor, `(x − 1)² = 0` in the second.
    pub fn mul(&self, o: &BElement) -> BElement {
        BElement {
            p: &self.p * &o.p,
            q: &self.p * &o.q + &self.q * &o.p,
            r: &self.r * &o.r,
            s: &self.r * &o.s + &self.s * &o.r,
        }
    }
}

impl Serialize for BElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        [q_str(&self.p), q_str(&self.q), q_str(&self.r), q_str(&self.s)].serialize(serializer)
    }
}

/// The fixed data of the example: `A`, `B`, `i`, and the images of `R` and `𝔪`.
#[derive(Clone, Debug)]
pub struct PullbackLab {
    pub b: LocalProduct,
    /// `i(A) = R/𝔣`.
    pub image_r: Subspace,
    /// `𝔪/𝔣 = k·μ` with `μ = (x, x − 1)`.
    pub image_m: Subspace,
    pub mu: BElement,
}

pub fn build_example() -> PullbackLab {
    let b = LocalProduct::new(vec![2, 2]);
    let image_r = Subspace::span(
        4,
        &[AElement::new(1, 0).embed().coords(), AElement::new(0, 1).embed().coords()],
    );
    let mu = AElement::new(0, 1).embed();
    // 𝔪 is the preimage of the maximal ideal tA of A.
    let image_m = Subspace::span(4, &[mu.coords()]);
    PullbackLab {
        b,
        image_r,
        image_m,
        mu,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LengthFacts {
    pub len_b: usize,
    pub len_a: usize,
    pub bass_gorenstein: bool,
}

/// `length(R̄/𝔣) = dim_k B` against `length(R/𝔣) = dim_k A`.
pub fn length_facts() -> LengthFacts {
    let lab = build_example();
    let len_b = lab.b.dim();
    let len_a = lab.image_r.dim();
    LengthFacts {
        len_b,
        len_a,
        bass_gorenstein: len_b == 2 * len_a,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RbarFacts {
    pub max_ideal_count: usize,
    pub two_generated_over_a: bool,
    /// A pair whose A-span is all of B.
    pub generators: Option<(BElement, BElement)>,
    /// Whether `{1, μ}` already worked.
    pub canonical_pair_works: bool,
    /// Largest possible dimension of the A-span of a single element.
    pub single_generator_max_dim: usize,
}

impl PullbackLab {
    /// `span{u, t·u}` where `t` acts as `μ`.
    pub fn a_span(&self, gens: &[BElement]) -> Subspace {
        let vectors: Vec<Vec<Q>> = gens
            .iter()
            .flat_map(|g| [g.coords(), self.mu.mul(g).coords()])
            .collect();
        Subspace::span(4, &vectors)
    }

    fn generates(&self, u: &BElement, v: &BElement) -> bool {
        self.a_span(&[u.clone(), v.clone()]).dim() == 4
    }

    /// Number of maximal ideals of `B`, from its idempotent decomposition.
    pub fn maximal_ideal_count(&self) -> Result<usize> {
        let one = self.b.one();
        let idempotents: Vec<Vec<Q>> = (0..self.b.factor_count()).map(|f| self.b.idempotent(f)).collect();
        let mut sum = vec![Q::zero(); 4];
        for (i, e) in idempotents.iter().enumerate() {
            if self.b.mul(e, e) != *e {
                return Err(Error::NotClosed(format!("factor {i} idempotent is not idempotent")));
            }
            for (j, other) in idempotents.iter().enumerate() {
                if i != j && self.b.mul(e, other).iter().any(|x| !x.is_zero()) {
                    return Err(Error::NotClosed("factor idempotents are not orthogonal".into()));
                }
            }
            for (s, x) in sum.iter_mut().zip(e) {
                *s = &*s + x;
            }
        }
        if sum != one {
            return Err(Error::NotClosed("factor idempotents do not sum to 1".into()));
        }
        // Each factor e·B is local with residue field k, so contributes one
        // maximal ideal.
        let mut count = 0;
        for e in &idempotents {
            let factor: Vec<Vec<Q>> = (0..4)
                .map(|i| self.b.mul(e, &unit_vector(4, i)))
                .collect();
            let factor = Subspace::span(4, &factor);
            let rad = self.b.trace_radical(&factor);
            if factor.dim() - rad.dim() == 1 {
                count += 1;
            } else {
                return Err(Error::NotClosed("a factor of B is not local with residue k".into()));
            }
        }
        let whole = Subspace::whole(4);
        if whole.dim() - self.b.trace_radical(&whole).dim() != count {
            return Err(Error::NotClosed("B/rad(B) does not split into the factors".into()));
        }
        Ok(count)
    }
}

pub fn rbar_facts() -> Result<RbarFacts> {
    let lab = build_example();
    let max_ideal_count = lab.maximal_ideal_count()?;
    let unit = AElement::new(1, 0).embed();
    let canonical_pair_works = lab.generates(&unit, &lab.mu);
    let generators = if canonical_pair_works {
        Some((unit, lab.mu.clone()))
    } else {
        let small: Vec<BElement> = (0..81)
            .map(|mut k| {
                let mut c = [0i64; 4];
                for slot in c.iter_mut() {
                    *slot = k % 3 - 1;
                    k /= 3;
                }
                BElement::new(c[0], c[1], c[2], c[3])
            })
            .collect();
        small
            .iter()
            .enumerate()
            .find_map(|(i, u)| {
                small[i + 1..]
                    .iter()
                    .find(|v| lab.generates(u, v))
                    .map(|v| (u.clone(), v.clone()))
            })
    };
    // span{u, μu} has at most two vectors.
    let single_generator_max_dim = 2;
    Ok(RbarFacts {
        max_ideal_count,
        two_generated_over_a: generators.is_some(),
        generators,
        canonical_pair_works,
        single_generator_max_dim,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeepGuard {
    /// `dim_k D/𝔣²`.
    pub ambient_dim: usize,
    /// `dim 𝔣/𝔣²`.
    pub conductor_dim: usize,
    pub dim_r: usize,
    pub dim_m: usize,
    pub dim_e: usize,
    /// `dim E/𝔣²` minus `dim 𝔣/𝔣²`.
    pub dim_e_mod_conductor: usize,
    pub is_ring: bool,
    pub is_local: bool,
    pub residue_dim: usize,
    /// Truncating to `B` gives exactly the `E` computed there.
    pub projects_onto_e_bar: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EndReport {
    pub dim_e_bar: usize,
    pub is_ring: bool,
    pub is_local: bool,
    pub residue_dim: usize,
    pub simple_over_r: bool,
    pub non_unit_dim: usize,
    pub non_units_square_zero: bool,
    /// Nilradical dimension from the trace form, as a cross-check.
    pub trace_radical_dim: usize,
    pub deep_guard: DeepGuard,
}

struct LocalData {
    is_ring: bool,
    is_local: bool,
    residue_dim: usize,
    non_unit_dim: usize,
    square_zero: bool,
    trace_radical_dim: usize,
}

fn analyse(alg: &LocalProduct, e: &Subspace) -> LocalData {
    let is_ring = alg.is_subalgebra(e);
    let trace_radical_dim = alg.trace_radical(e).dim();
    match alg.non_units(e) {
        Some(nu) if alg.is_ideal_of(&nu, e) => LocalData {
            is_ring,
            is_local: true,
            residue_dim: e.dim() - nu.dim(),
            non_unit_dim: nu.dim(),
            square_zero: alg.square_is_zero(&nu),
            trace_radical_dim,
        },
        _ => LocalData {
            is_ring,
            is_local: false,
            residue_dim: e.dim() - trace_radical_dim,
            non_unit_dim: 0,
            square_zero: false,
            trace_radical_dim,
        },
    }
}

/// `{β : β·𝔪 ⊆ 𝔪}` computed in `B`, then again in `D/𝔣²`.
pub fn end_of_m() -> Result<EndReport> {
    let lab = build_example();
    let e_bar = lab.b.idealizer(&lab.image_m);
    let local = analyse(&lab.b, &e_bar);
    if !local.is_ring {
        return Err(Error::NotClosed("End(m) mod f is not a ring".into()));
    }
    if !e_bar.contains_subspace(&lab.image_r) {
        return Err(Error::NotClosed("End(m) mod f does not contain R mod f".into()));
    }
    let deep_guard = deep_guard(&lab, &e_bar)?;
    Ok(EndReport {
        dim_e_bar: e_bar.dim(),
        is_ring: local.is_ring,
        is_local: local.is_local,
        residue_dim: local.residue_dim,
        simple_over_r: e_bar.dim() == lab.image_r.dim() + 1,
        non_unit_dim: local.non_unit_dim,
        non_units_square_zero: local.square_zero,
        trace_radical_dim: local.trace_radical_dim,
        deep_guard,
    })
}

/// `D/𝔣² ≅ k[X]/(X⁴) × k[Y]/(Y⁴)` with `Y = X − 1`; truncation mod `(X², Y²)`
/// is the map onto `B`.
fn deep_guard(lab: &PullbackLab, e_bar: &Subspace) -> Result<DeepGuard> {
    let big = LocalProduct::new(vec![4, 4]);
    let n = big.dim();
    let whole = Subspace::whole(n);
    let project = |v: &[Q]| big.truncate(v, &lab.b);
    let conductor = whole.kernel_of(|v| project(v));
    let r = whole.kernel_of(|v| lab.image_r.residual(&project(v)));
    let m = whole.kernel_of(|v| lab.image_m.residual(&project(v)));
    if !big.is_ideal_of(&conductor, &whole) || !m.contains_subspace(&conductor) {
        return Err(Error::NotClosed("conductor is not absorbed by m in D/f^2".into()));
    }
    let e = big.idealizer(&m);
    if !e.contains_subspace(&r) {
        return Err(Error::NotClosed("End(m) mod f^2 does not contain R".into()));
    }
    let local = analyse(&big, &e);
    let projected: Vec<Vec<Q>> = e.basis().iter().map(|v| project(v)).collect();
    let projects_onto_e_bar = Subspace::span(4, &projected) == *e_bar;
    Ok(DeepGuard {
        ambient_dim: n,
        conductor_dim: conductor.dim(),
        dim_r: r.dim(),
        dim_m: m.dim(),
        dim_e: e.dim(),
        dim_e_mod_conductor: e.dim() - conductor.dim(),
        is_ring: local.is_ring,
        is_local: local.is_local,
        residue_dim: local.residue_dim,
        projects_onto_e_bar,
    })
}

/// Every field of the example in one record.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PullbackReport {
    pub dim_image_r: usize,
    pub dim_image_m: usize,
    pub lengths: LengthFacts,
    pub rbar: RbarFacts,
    pub end_of_m: EndReport,
}

pub fn pullback_report() -> Result<PullbackReport> {
    let lab = build_example();
    Ok(PullbackReport {
        dim_image_r: lab.image_r.dim(),
        dim_image_m: lab.image_m.dim(),
        lengths: length_facts(),
        rbar: rbar_facts()?,
        end_of_m: end_of_m()?,
    })
}
