//! Finite-window structural probes: generator-orbit spans, submodule-closure
//! checks, extraction of the polynomial-in-`k` composite identities, and the
//! restricted-module contrast.
//!
//! All probes work over exact rationals inside a [`WindowSpec`].  They report
//! *finite-window evidence*: a filled orbit or an empty annihilator list is a
//! concrete computation on the window, never a claim about the full module.
//!
//! The span engine keeps a canonical fraction-free reduced echelon basis
//! (primitive integer rows, positive leading coefficients, full
//! back-reduction).  Canonicity makes probe outcomes independent of seed
//! presentation and of the order in which generator images arrive.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::bigint::BigInt;
use num::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::carriers::{BasisIndex, FamilySpec, Vector, WindowSpec};
use crate::modules::{act, ActionConfig};
use crate::report::Report;
use crate::scalars::{int, Rational, SymScalar};
use crate::superalgebras::{generators, Algebra, GenKind, Generator};
use crate::weyl::{weyl_word_apply, WeylGen};
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Exact row-space engine
// ---------------------------------------------------------------------------

/// Sparse integer row keyed by basis index; invariant: no zero entries.
type Row = BTreeMap<BasisIndex, BigInt>;

/// A subspace of a windowed carrier in canonical reduced echelon form.
///
/// Rows are primitive (content 1), have positive leading coefficients, are
/// sorted by pivot index, and are fully reduced against each other.  Two
/// vector sets span the same subspace iff they produce identical rows, so
/// equality of `RowSpace` values is exact subspace equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowSpace {
    rows: Vec<Row>,
}

/// Clears denominators and divides out the content, turning an exact rational
/// vector into a primitive integer row.  Fails on symbolic coefficients.
fn numeric_row(v: &Vector) -> Result<Row> {
    let mut rational: BTreeMap<BasisIndex, Rational> = BTreeMap::new();
    for (idx, c) in v.terms() {
        match c.to_rational() {
            Some(q) => {
                if !q.is_zero() {
                    rational.insert(idx.clone(), q);
                }
            }
            None => {
                return Err(Error::Config(format!(
                    "probe needs numeric coefficients; found symbolic scalar {c}"
                )))
            }
        }
    }
    let mut denom_lcm = BigInt::one();
    for q in rational.values() {
        denom_lcm = denom_lcm.lcm(q.denom());
    }
    let mut row: Row = BTreeMap::new();
    for (idx, q) in rational {
        let scaled = q * BigRational::from_integer(denom_lcm.clone());
        debug_assert!(scaled.is_integer());
        row.insert(idx, scaled.to_integer());
    }
    Ok(normalize(row))
}

/// Divides a row by its content and flips signs so the leading (smallest
/// index) coefficient is positive.  The zero row passes through unchanged.
fn normalize(mut row: Row) -> Row {
    row.retain(|_, c| !c.is_zero());
    if row.is_empty() {
        return row;
    }
    let mut content = BigInt::zero();
    for c in row.values() {
        content = content.gcd(c);
    }
    let leading_negative = row.values().next().map(|c| c.is_negative()).unwrap_or(false);
    if leading_negative {
        content = -content;
    }
    for c in row.values_mut() {
        *c /= &content;
    }
    row
}

/// `target·scale − other·factor`, dropping cancelled entries.
fn combine(target: &Row, scale: &BigInt, other: &Row, factor: &BigInt) -> Row {
    let mut out: Row = BTreeMap::new();
    for (idx, c) in target {
        out.insert(idx.clone(), c * scale);
    }
    for (idx, c) in other {
        let entry = out.entry(idx.clone()).or_insert_with(BigInt::zero);
        *entry -= c * factor;
        if entry.is_zero() {
            out.remove(idx);
        }
    }
    out
}

impl RowSpace {
    /// The zero subspace.
    pub fn new() -> RowSpace {
        RowSpace { rows: Vec::new() }
    }

    /// Number of basis rows (the subspace dimension).
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, mut row: Row) -> Row {
        for r in &self.rows {
            let pivot = r.keys().next().expect("rows are nonzero");
            if let Some(c) = row.get(pivot).cloned() {
                let lead = r[pivot].clone();
                row = normalize(combine(&row, &lead, r, &c));
                if row.is_empty() {
                    return row;
                }
            }
        }
        row
    }

    /// Adds a vector to the span; returns `true` when the rank grows.
    /// Symbolic coefficients are rejected.
    pub fn insert(&mut self, v: &Vector) -> Result<bool> {
        let row = self.reduce(numeric_row(v)?);
        if row.is_empty() {
            return Ok(false);
        }
        let pivot = row.keys().next().expect("nonzero").clone();
        // Back-reduce rows with smaller pivots (rows with larger pivots have
        // no entry at `pivot` because it precedes their leading index).
        let lead = row[&pivot].clone();
        for r in &mut self.rows {
            if let Some(c) = r.get(&pivot).cloned() {
                *r = normalize(combine(r, &lead, &row, &c));
            }
        }
        let pos = self
            .rows
            .partition_point(|r| r.keys().next().expect("nonzero") < &pivot);
        self.rows.insert(pos, row);
        Ok(true)
    }

    /// Exact membership test.
    pub fn contains(&self, v: &Vector) -> Result<bool> {
        Ok(self.reduce(numeric_row(v)?).is_empty())
    }

    /// Membership of a single basis vector.
    pub fn contains_index(&self, idx: &BasisIndex) -> bool {
        let mut row = Row::new();
        row.insert(idx.clone(), BigInt::one());
        self.reduce(row).is_empty()
    }

    /// The remainder of `v` after reduction against the span (zero iff member).
    pub fn remainder(&self, v: &Vector) -> Result<Vector> {
        let row = self.reduce(numeric_row(v)?);
        Ok(row_to_vector(&row, v.family(), v.ring()))
    }

    /// The canonical echelon rows as vectors over the given carrier.
    pub fn basis_vectors(
        &self,
        family: &Arc<FamilySpec>,
        ring: &Arc<crate::scalars::ParamRing>,
    ) -> Vec<Vector> {
        self.rows.iter().map(|r| row_to_vector(r, family, ring)).collect()
    }
}

impl Default for RowSpace {
    fn default() -> Self {
        RowSpace::new()
    }
}

fn row_to_vector(
    row: &Row,
    family: &Arc<FamilySpec>,
    ring: &Arc<crate::scalars::ParamRing>,
) -> Vector {
    let mut v = Vector::zero(family, ring);
    for (idx, c) in row {
        v.add_term(idx.clone(), SymScalar::from_rational(ring, BigRational::from_integer(c.clone())));
    }
    v
}

/// Rejects configurations whose action coefficients are not plain rationals
/// (orbit and span probes run in numeric mode only).
fn require_numeric(cfg: &ActionConfig) -> Result<()> {
    let mut symbolic: Vec<String> = Vec::new();
    if cfg.b().to_rational().is_none() {
        symbolic.push(format!("b = {}", cfg.b()));
    }
    match cfg.family().as_ref() {
        FamilySpec::LaurentSeries { alpha } => {
            if alpha.terms().any(|(_, c)| c.to_rational().is_none()) {
                symbolic.push("alpha(t)".into());
            }
        }
        FamilySpec::OmegaLambda { lambda } => {
            if lambda.to_rational().is_none() {
                symbolic.push(format!("lambda = {lambda}"));
            }
        }
        FamilySpec::DegreeTwo { f } => {
            if f.terms().any(|(_, c)| c.to_rational().is_none()) {
                symbolic.push("f(t)".into());
            }
        }
        FamilySpec::DegreeN { .. } | FamilySpec::Fraction { .. } => {}
    }
    if symbolic.is_empty() {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "numeric probe on symbolic parameters: {}",
            symbolic.join(", ")
        )))
    }
}

/// The distinguished generating basis vector of each family: `t⁰`, `D_t⁰`,
/// `t⁰D_t⁰`, `t⁰(d/dt)⁰`, or the pole-free `t⁰`.
pub fn cyclic_index(family: &FamilySpec) -> BasisIndex {
    match family {
        FamilySpec::Fraction { .. } => BasisIndex::frac_t(0, 0, family.pole_arity()),
        _ => BasisIndex::t(0, 0),
    }
}

/// Unit vector on the cyclic index.
pub fn cyclic_vector(cfg: &ActionConfig) -> Vector {
    Vector::basis(cfg.family(), cfg.ring(), cyclic_index(cfg.family()))
}

// ---------------------------------------------------------------------------
// Orbit span
// ---------------------------------------------------------------------------

/// Outcome of [`orbit_span`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitResult {
    /// Dimension of the computed span (within the window).
    pub span_dim: usize,
    /// Number of basis indices in the inner window.
    pub inner_window_dim: usize,
    /// Whether every inner-window basis vector lies in the span.
    pub filled_inner: bool,
    /// Inner-window basis indices missing from the span.
    pub missing: Vec<BasisIndex>,
    /// Expansion rounds performed (the final round witnesses the fixed point).
    pub rounds: u32,
}

/// Repeatedly applies every generator with `|mode| ≤ w.mode_bound` to the
/// span basis, keeping images that stay inside the window and discarding —
/// not projecting — images that leak outside it.  Stops at a fixed point or
/// after `max_rounds`.
///
/// Requires a fully numeric configuration and a nonzero seed supported inside
/// the window.
pub fn orbit_span(
    cfg: &ActionConfig,
    seed: &Vector,
    w: &WindowSpec,
    max_rounds: u32,
) -> Result<OrbitResult> {
    require_numeric(cfg)?;
    if seed.is_zero() {
        return Err(Error::Config("orbit seed must be nonzero".into()));
    }
    if seed.terms().any(|(idx, _)| !w.contains(idx, cfg.family())) {
        return Err(Error::Config("orbit seed must be supported inside the window".into()));
    }

    let gens: Vec<Generator> = generators(cfg.algebra(), w.mode_bound)
        .into_iter()
        .filter(|g| g.kind != GenKind::C)
        .collect();

    let mut span = RowSpace::new();
    span.insert(seed)?;

    let mut rounds = 0;
    while rounds < max_rounds {
        rounds += 1;
        let before = span.rank();
        let basis = span.basis_vectors(cfg.family(), cfg.ring());
        for v in &basis {
            for g in &gens {
                let image = act(cfg, g, v)?;
                let (_, leaked) = image.window_project(w);
                if leaked || image.is_zero() {
                    continue;
                }
                span.insert(&image)?;
            }
        }
        if span.rank() == before {
            break;
        }
    }

    let inner = w.basis(cfg.family(), true);
    let missing: Vec<BasisIndex> =
        inner.iter().filter(|idx| !span.contains_index(idx)).cloned().collect();
    Ok(OrbitResult {
        span_dim: span.rank(),
        inner_window_dim: inner.len(),
        filled_inner: missing.is_empty(),
        missing,
        rounds,
    })
}

/// Wraps [`orbit_span`] in a report: pass iff the inner window is filled.
pub fn orbit_report(
    cfg: &ActionConfig,
    seed: &Vector,
    w: &WindowSpec,
    max_rounds: u32,
) -> Result<Report> {
    let outcome = orbit_span(cfg, seed, w, max_rounds)?;
    let mut report = Report::new("probe-orbit", "orbit-fill");
    report
        .describe("algebra", cfg.algebra().name())
        .describe("family", cfg.family().tag())
        .describe("b", cfg.b())
        .describe("seed", seed)
        .describe(
            "window",
            format!(
                "tBound={} auxBound={} poleBound={} modeBound={}",
                w.t_bound, w.aux_bound, w.pole_bound, w.mode_bound
            ),
        );
    report
        .add_count("span-dim", outcome.span_dim as u64)
        .add_count("inner-window-dim", outcome.inner_window_dim as u64)
        .add_count("filled-inner", outcome.filled_inner as u64)
        .add_count("rounds", outcome.rounds as u64);
    if !outcome.filled_inner {
        for idx in &outcome.missing {
            report.fail(
                format!("inner index {}", idx.display_with(cfg.family())),
                "unit vector not in orbit span",
            );
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Submodule closure
// ---------------------------------------------------------------------------

/// A candidate subspace: either an explicit numeric spanning set, or a
/// predicate on basis indices (support description; works symbolically).
pub enum CandidateSpec {
    /// Span of explicit vectors (numeric coefficients required).
    Span { name: String, vectors: Vec<Vector> },
    /// All vectors supported on indices satisfying the predicate.
    Predicate { name: String, pred: Box<dyn Fn(&BasisIndex) -> bool> },
}

impl CandidateSpec {
    /// Candidate name for reports.
    pub fn name(&self) -> &str {
        match self {
            CandidateSpec::Span { name, .. } => name,
            CandidateSpec::Predicate { name, .. } => name,
        }
    }
}

/// Span of the cyclic vector alone.
pub fn candidate_cyclic_span(cfg: &ActionConfig) -> CandidateSpec {
    CandidateSpec::Span { name: "cyclic-span".into(), vectors: vec![cyclic_vector(cfg)] }
}

/// For a Laurent-series carrier: span of `t^i` and `(α(t) + i)·ξt^i` for all
/// `|i| ≤ w.t_bound`.  Requires numeric `α`.
pub fn candidate_alpha_line(cfg: &ActionConfig, w: &WindowSpec) -> Result<CandidateSpec> {
    let alpha = match cfg.family().as_ref() {
        FamilySpec::LaurentSeries { alpha } => alpha.clone(),
        _ => {
            return Err(Error::Config(
                "alpha-line candidate is defined for the Laurent-series family".into(),
            ))
        }
    };
    let mut vectors = Vec::new();
    for i in -w.t_bound..=w.t_bound {
        vectors.push(Vector::basis(cfg.family(), cfg.ring(), BasisIndex::t(0, i)));
        let mut odd = Vector::zero(cfg.family(), cfg.ring());
        for (k, c) in alpha.terms() {
            odd.add_term(BasisIndex::t(1, i + *k), c.clone());
        }
        odd.add_term(BasisIndex::t(1, i), SymScalar::from_int(cfg.ring(), i));
        if !odd.is_zero() {
            vectors.push(odd);
        }
    }
    Ok(CandidateSpec::Span { name: "alpha-line".into(), vectors })
}

/// The even part (all indices with ξ-degree 0).
pub fn candidate_even_part() -> CandidateSpec {
    CandidateSpec::Predicate { name: "even-part".into(), pred: Box::new(|idx| idx.parity == 0) }
}

/// Even part plus `D_t`·(odd part): indices that are even or carry `aux ≥ 1`.
pub fn candidate_even_plus_dt_odd() -> CandidateSpec {
    CandidateSpec::Predicate {
        name: "even-plus-dt-odd".into(),
        pred: Box::new(|idx| idx.parity == 0 || idx.aux >= 1),
    }
}

/// Checks that every generator with `|mode| ≤ w.mode_bound` maps the
/// candidate into itself on the window.
///
/// For a spanning-set candidate an image instance is *decided* when it stays
/// inside the window (membership is then exact); images that leak the window
/// are counted as skipped.  A non-member image fails the report and records
/// the escaping remainder.  Predicate candidates are support conditions and
/// are decided exactly for every instance, symbolic parameters included.
pub fn submodule_closure(
    cfg: &ActionConfig,
    candidate: &CandidateSpec,
    w: &WindowSpec,
) -> Result<Report> {
    let mut report = Report::new("probe-submodule", "submodule-closure");
    report
        .describe("algebra", cfg.algebra().name())
        .describe("family", cfg.family().tag())
        .describe("b", cfg.b())
        .describe("candidate", candidate.name())
        .describe("modeBound", w.mode_bound);

    let gens: Vec<Generator> = generators(cfg.algebra(), w.mode_bound)
        .into_iter()
        .filter(|g| g.kind != GenKind::C)
        .collect();

    match candidate {
        CandidateSpec::Span { vectors, .. } => {
            require_numeric(cfg)?;
            if vectors.is_empty() {
                return Err(Error::Config("candidate spanning set is empty".into()));
            }
            let mut span = RowSpace::new();
            for v in vectors {
                span.insert(v)?;
            }
            report.add_count("candidate-dim", span.rank() as u64);
            let mut decided = 0u64;
            for v in vectors {
                for g in &gens {
                    report.bump("instances");
                    let image = act(cfg, g, v)?;
                    let (_, leaked) = image.window_project(w);
                    if image.is_zero() || span.contains(&image)? {
                        decided += 1;
                        continue;
                    }
                    if leaked {
                        report.bump("skipped-leakage");
                        continue;
                    }
                    decided += 1;
                    let remainder = span.remainder(&image)?;
                    report.fail(format!("{g} · ({v})"), format!("escapes by {remainder}"));
                }
            }
            report.add_count("decided", decided);
            if decided == 0 && report.is_pass() {
                report.skip_leakage();
            }
        }
        CandidateSpec::Predicate { pred, .. } => {
            let sources: Vec<BasisIndex> = w
                .basis(cfg.family(), false)
                .into_iter()
                .filter(|idx| pred(idx))
                .collect();
            report.add_count("candidate-dim", sources.len() as u64);
            for idx in &sources {
                let v = Vector::basis(cfg.family(), cfg.ring(), idx.clone());
                for g in &gens {
                    report.bump("instances");
                    let image = act(cfg, g, &v)?;
                    for (out_idx, c) in image.terms() {
                        if !pred(out_idx) {
                            report.fail(
                                format!("{g} · {}", idx.display_with(cfg.family())),
                                format!(
                                    "escaping term ({c})·{}",
                                    out_idx.display_with(cfg.family())
                                ),
                            );
                        }
                    }
                }
            }
            report.add_count("decided", report_count(&report, "instances"));
        }
    }
    Ok(report)
}

fn report_count(report: &Report, key: &str) -> u64 {
    report.counts.get(key).copied().unwrap_or(0)
}

// ---------------------------------------------------------------------------
// Polynomial-in-k composite identities
// ---------------------------------------------------------------------------

/// Which two-generator composite to expand: `L_k G_{m−k}` or `G_k G_{m−k}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompositeKind {
    LThenG,
    GThenG,
}

impl CompositeKind {
    fn label(self) -> &'static str {
        match self {
            CompositeKind::LThenG => "L_k G_{m-k}",
            CompositeKind::GThenG => "G_k G_{m-k}",
        }
    }
}

fn composite_apply(
    cfg: &ActionConfig,
    kind: CompositeKind,
    k: i64,
    m: i64,
    v: &Vector,
) -> Result<Vector> {
    let inner = Generator::new(Algebra::R, GenKind::G, m - k)?;
    let outer_kind = match kind {
        CompositeKind::LThenG => GenKind::L,
        CompositeKind::GThenG => GenKind::G,
    };
    let outer = Generator::new(Algebra::R, outer_kind, k)?;
    act(cfg, &outer, &act(cfg, &inner, v)?)
}

/// Expands `w(k) = X_k G_{m−k} · v` as a polynomial in `k` and returns the
/// coefficient vectors keyed by degree (degrees 0–3; the cubic coefficient is
/// included so callers can verify it vanishes).
///
/// The expansion interpolates at `k ∈ {−1, 0, 1, 2}` and cross-checks the fit
/// at `k ∈ {−2, 3}`, so a composite that failed to be cubic in `k` is
/// detected rather than silently mis-fitted.
pub fn extract_k_polynomial(
    cfg: &ActionConfig,
    kind: CompositeKind,
    m: i64,
    v: &Vector,
) -> Result<BTreeMap<u32, Vector>> {
    if cfg.algebra() != Algebra::R {
        return Err(Error::Config(
            "composite k-expansion uses the N=1 generators L and G".into(),
        ));
    }
    let w_m1 = composite_apply(cfg, kind, -1, m, v)?;
    let w0 = composite_apply(cfg, kind, 0, m, v)?;
    let w1 = composite_apply(cfg, kind, 1, m, v)?;
    let w2 = composite_apply(cfg, kind, 2, m, v)?;

    // Unique cubic through the four nodes.
    let c0 = w0.clone();
    let c2 = w1.try_add(&w_m1)?.try_sub(&w0.scale_q(&int(2)))?.scale_q(&rational_half());
    let c3 = w2
        .try_sub(&w1.scale_q(&int(3)))?
        .try_add(&w0.scale_q(&int(3)))?
        .try_sub(&w_m1)?
        .scale_q(&rational_sixth());
    let c1 = w1.try_sub(&c0)?.try_sub(&c2)?.try_sub(&c3)?;

    // Guard nodes: the fit must reproduce the composite at k = −2 and k = 3.
    for k in [-2i64, 3] {
        let direct = composite_apply(cfg, kind, k, m, v)?;
        let fitted = eval_cubic(&c0, &c1, &c2, &c3, k)?;
        if direct.try_sub(&fitted)?.is_zero() {
            continue;
        }
        return Err(Error::Config(format!(
            "composite {} at m={m} is not cubic in k (node k={k} disagrees)",
            kind.label()
        )));
    }

    let mut out = BTreeMap::new();
    out.insert(0, c0);
    out.insert(1, c1);
    out.insert(2, c2);
    out.insert(3, c3);
    Ok(out)
}

fn rational_half() -> Rational {
    crate::scalars::rat(1, 2)
}

fn rational_sixth() -> Rational {
    crate::scalars::rat(1, 6)
}

fn eval_cubic(c0: &Vector, c1: &Vector, c2: &Vector, c3: &Vector, k: i64) -> Result<Vector> {
    let kq = int(k);
    let k2 = int(k * k);
    let k3 = int(k * k * k);
    c0.try_add(&c1.scale_q(&kq))?
        .try_add(&c2.scale_q(&k2))?
        .try_add(&c3.scale_q(&k3))
}

/// Verifies the two composite coefficient identities on every window basis
/// vector and every `|m| ≤ mode_bound`:
///
/// * the `k²`-coefficient of `L_k G_{m−k} · v` equals `b(1−2b)·t^m ξ v`, and
///   `G_k G_{m−k} · v` has no `k²` term;
/// * the `k`-coefficient of `G_k G_{m−k} · v` equals
///   `(2b·t^m + (1−4b)·ξ t^m ∂_ξ) v`;
/// * neither composite has a `k³` term.
///
/// Works with symbolic `b` (and symbolic family payloads).
pub fn check_k_identities(
    cfg: &ActionConfig,
    mode_bound: i64,
    window: &WindowSpec,
) -> Result<Report> {
    if cfg.algebra() != Algebra::R {
        return Err(Error::Config(
            "composite k-expansion uses the N=1 generators L and G".into(),
        ));
    }
    let mut report = Report::new("probe-identities", "k-identity");
    report
        .describe("family", cfg.family().tag())
        .describe("b", cfg.b())
        .describe("modeBound", mode_bound);

    let ring = cfg.ring();
    let b = cfg.b().clone();
    let one = SymScalar::one(ring);
    // b(1−2b) and the pair (2b, 1−4b).
    let lg_scalar = b.try_mul(&one.try_sub(&b.scale(&int(2)))?)?;
    let gg_plain = b.scale(&int(2));
    let gg_parity = one.try_sub(&b.scale(&int(4)))?;

    for m in -mode_bound..=mode_bound {
        for idx in window.basis(cfg.family(), false) {
            let v = Vector::basis(cfg.family(), cfg.ring(), idx.clone());
            report.bump("instances");

            let lg = extract_k_polynomial(cfg, CompositeKind::LThenG, m, &v)?;
            let gg = extract_k_polynomial(cfg, CompositeKind::GThenG, m, &v)?;
            let tag = format!("m={m}, v={}", idx.display_with(cfg.family()));

            for (name, coeffs) in [("LG", &lg), ("GG", &gg)] {
                if !coeffs[&3].is_zero() {
                    report.fail(
                        format!("{name} cubic term, {tag}"),
                        format!("{}", coeffs[&3]),
                    );
                }
            }
            if !gg[&2].is_zero() {
                report.fail(format!("GG quadratic term, {tag}"), format!("{}", gg[&2]));
            }

            let expected_lg =
                weyl_word_apply(&[WeylGen::Tpow(m), WeylGen::Xi], &v)?.scale(&lg_scalar);
            let lg_residual = lg[&2].try_sub(&expected_lg)?;
            if !lg_residual.is_zero() {
                report.fail(format!("LG k² coefficient, {tag}"), format!("{lg_residual}"));
            }

            let expected_gg = weyl_word_apply(&[WeylGen::Tpow(m)], &v)?
                .scale(&gg_plain)
                .try_add(
                    &weyl_word_apply(&[WeylGen::Tpow(m), WeylGen::Xi, WeylGen::DXi], &v)?
                        .scale(&gg_parity),
                )?;
            let gg_residual = gg[&1].try_sub(&expected_gg)?;
            if !gg_residual.is_zero() {
                report.fail(format!("GG k coefficient, {tag}"), format!("{gg_residual}"));
            }
            report.bump("coefficient-comparisons");
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Restricted-module contrast
// ---------------------------------------------------------------------------

/// Checks whether any positive mode `k ≤ mode_bound` annihilates `v` through
/// every non-central generator of that mode.  Restricted modules (highest
/// weight, Whittaker) always have such modes; the windowed families for
/// `b ∉ {0, 1/2}` should have none.
pub fn restricted_contrast(cfg: &ActionConfig, v: &Vector, mode_bound: i64) -> Result<Report> {
    if v.is_zero() {
        return Err(Error::Config("restricted contrast needs a nonzero vector".into()));
    }
    let mut report = Report::new("probe-restricted", "restricted-contrast");
    report
        .describe("algebra", cfg.algebra().name())
        .describe("family", cfg.family().tag())
        .describe("b", cfg.b())
        .describe("vector", v)
        .describe("modeBound", mode_bound);

    let kinds: Vec<GenKind> = match cfg.algebra() {
        Algebra::R => vec![GenKind::L, GenKind::G],
        Algebra::T => vec![GenKind::L, GenKind::H, GenKind::GPlus, GenKind::GMinus],
    };

    for k in 1..=mode_bound {
        report.bump("modes-checked");
        let mut all_zero = true;
        for &kind in &kinds {
            let g = Generator::new(cfg.algebra(), kind, k)?;
            if !act(cfg, &g, v)?.is_zero() {
                all_zero = false;
                break;
            }
        }
        if all_zero {
            report.bump("annihilating-modes");
            report.fail(
                format!("mode {k}"),
                "every generator of this mode annihilates the vector",
            );
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carriers::TPoly;
    use crate::modules::ActionConfig;
    use crate::scalars::{rat, ParamRing};

    fn laurent_cfg(alpha: TPoly, _ring: &Arc<ParamRing>, b: SymScalar) -> ActionConfig {
        ActionConfig::new(Algebra::R, Arc::new(FamilySpec::laurent(alpha)), b).unwrap()
    }

    fn numeric_laurent(alpha_num: i64, alpha_den: i64, b_num: i64, b_den: i64) -> ActionConfig {
        let ring = ParamRing::numeric();
        let alpha = TPoly::constant(SymScalar::from_rational(&ring, rat(alpha_num, alpha_den)));
        laurent_cfg(alpha, &ring, SymScalar::from_rational(&ring, rat(b_num, b_den)))
    }

    #[test]
    fn row_space_is_canonical_under_insertion_order() {
        let ring = ParamRing::numeric();
        let family = Arc::new(FamilySpec::laurent(TPoly::zero()));
        let mk = |pairs: &[(i64, i64)]| {
            let mut v = Vector::zero(&family, &ring);
            for &(tp, c) in pairs {
                v.add_term(BasisIndex::t(0, tp), SymScalar::from_int(&ring, c));
            }
            v
        };
        let vs = [mk(&[(0, 2), (1, 4)]), mk(&[(1, 3), (2, -1)]), mk(&[(0, 1), (2, 5)])];
        let mut forward = RowSpace::new();
        let mut backward = RowSpace::new();
        for v in &vs {
            forward.insert(v).unwrap();
        }
        for v in vs.iter().rev() {
            backward.insert(v).unwrap();
        }
        assert_eq!(forward, backward);
        assert_eq!(forward.rank(), 3);
        // Scaled copies do not grow the rank.
        assert!(!forward.insert(&vs[0].scale_q(&rat(-7, 3))).unwrap());
    }

    #[test]
    fn trivial_configuration_orbit_stays_one_dimensional() {
        let cfg = numeric_laurent(0, 1, 0, 1);
        let w = WindowSpec::new(6, 0, 0, 2).unwrap();
        let seed = cyclic_vector(&cfg);
        let out = orbit_span(&cfg, &seed, &w, 10).unwrap();
        assert_eq!(out.span_dim, 1);
        assert!(!out.filled_inner);
        assert_eq!(out.rounds, 1);
        // Inner window is |tpow| ≤ 4 in both parities; only t⁰ is spanned.
        assert_eq!(out.inner_window_dim, 18);
        assert_eq!(out.missing.len(), 17);
    }

    #[test]
    fn generic_laurent_orbit_fills_inner_window() {
        let cfg = numeric_laurent(1, 2, 1, 3);
        let w = WindowSpec::new(6, 0, 0, 2).unwrap();
        let out = orbit_span(&cfg, &cyclic_vector(&cfg), &w, 16).unwrap();
        assert!(out.filled_inner, "missing: {:?}", out.missing);
        assert_eq!(out.inner_window_dim, 18);
    }

    #[test]
    fn omega_orbit_fills_inner_window() {
        let ring = ParamRing::numeric();
        let family = Arc::new(FamilySpec::omega(SymScalar::from_int(&ring, 2)).unwrap());
        let cfg =
            ActionConfig::new(Algebra::T, family, SymScalar::from_rational(&ring, rat(1, 3)))
                .unwrap();
        let w = WindowSpec::new(6, 5, 0, 2).unwrap();
        let out = orbit_span(&cfg, &cyclic_vector(&cfg), &w, 16).unwrap();
        assert!(out.filled_inner, "missing: {:?}", out.missing);
        // One aux column per parity: 2·(auxBound+1) indices.
        assert_eq!(out.inner_window_dim, 12);
    }

    #[test]
    fn orbit_rejects_symbolic_parameters() {
        let ring = ParamRing::new(&["b"]).unwrap();
        let alpha = TPoly::constant(SymScalar::zero(&ring));
        let cfg = laurent_cfg(alpha, &ring, SymScalar::param(&ring, "b").unwrap());
        let w = WindowSpec::new(4, 0, 0, 2).unwrap();
        let err = orbit_span(&cfg, &cyclic_vector(&cfg), &w, 4).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn trivial_span_is_a_closed_submodule() {
        let cfg = numeric_laurent(0, 1, 0, 1);
        let w = WindowSpec::new(4, 0, 0, 2).unwrap();
        let report = submodule_closure(&cfg, &candidate_cyclic_span(&cfg), &w).unwrap();
        assert!(report.is_pass());
    }

    #[test]
    fn alpha_line_candidate_is_closed() {
        // α(t) = t, b = 1/2: span{t^i, (α+i)ξt^i} is generator-stable.
        let ring = ParamRing::numeric();
        let alpha = TPoly::monomial(1, SymScalar::one(&ring));
        let cfg = laurent_cfg(alpha, &ring, SymScalar::from_rational(&ring, rat(1, 2)));
        let w = WindowSpec::new(5, 0, 0, 2).unwrap();
        let candidate = candidate_alpha_line(&cfg, &w).unwrap();
        let report = submodule_closure(&cfg, &candidate, &w).unwrap();
        assert!(report.is_pass());
        assert!(report.counts["decided"] > 0);
    }

    #[test]
    fn even_part_alone_is_not_closed() {
        let cfg = numeric_laurent(1, 2, 1, 3);
        let w = WindowSpec::new(4, 0, 0, 2).unwrap();
        let report = submodule_closure(&cfg, &candidate_even_part(), &w).unwrap();
        assert!(!report.is_pass());
        // The escaping generator is odd: G_m sends the even part into ξ-terms.
        assert!(report.failures.iter().any(|f| f.instance.contains("G_")));
    }

    #[test]
    fn even_plus_dt_odd_is_closed_at_half() {
        let ring = ParamRing::numeric();
        let family = Arc::new(FamilySpec::omega(SymScalar::from_int(&ring, 2)).unwrap());
        let cfg =
            ActionConfig::new(Algebra::R, family, SymScalar::from_rational(&ring, rat(1, 2)))
                .unwrap();
        let w = WindowSpec::new(4, 6, 0, 2).unwrap();
        let report = submodule_closure(&cfg, &candidate_even_plus_dt_odd(), &w).unwrap();
        assert!(report.is_pass());
    }

    fn symbolic_cfg() -> ActionConfig {
        let ring = ParamRing::new(&["alpha", "b"]).unwrap();
        let alpha = TPoly::constant(SymScalar::param(&ring, "alpha").unwrap());
        laurent_cfg(alpha, &ring, SymScalar::param(&ring, "b").unwrap())
    }

    #[test]
    fn lg_quadratic_coefficient_matches_oracle() {
        let cfg = symbolic_cfg();
        let ring = cfg.ring().clone();
        let v = cyclic_vector(&cfg);
        let coeffs = extract_k_polynomial(&cfg, CompositeKind::LThenG, 0, &v).unwrap();
        // b(1−2b)·ξt⁰ = (b − 2b²)·ξt⁰.
        let b = SymScalar::param(&ring, "b").unwrap();
        let scalar = b.try_sub(&b.try_mul(&b).unwrap().scale(&int(2))).unwrap();
        let mut expected = Vector::zero(cfg.family(), &ring);
        expected.add_term(BasisIndex::t(1, 0), scalar);
        assert_eq!(coeffs[&2], expected);
        assert!(coeffs[&3].is_zero());
    }

    #[test]
    fn gg_linear_coefficient_matches_oracle() {
        let cfg = symbolic_cfg();
        let ring = cfg.ring().clone();
        let v = cyclic_vector(&cfg);
        let coeffs = extract_k_polynomial(&cfg, CompositeKind::GThenG, 0, &v).unwrap();
        // ∂_ξ kills t⁰, so the oracle reduces to 2b·t⁰.
        let b = SymScalar::param(&ring, "b").unwrap();
        let mut expected = Vector::zero(cfg.family(), &ring);
        expected.add_term(BasisIndex::t(0, 0), b.scale(&int(2)));
        assert_eq!(coeffs[&1], expected);
        assert!(coeffs[&2].is_zero());
        assert!(coeffs[&3].is_zero());
    }

    #[test]
    fn lg_quadratic_coefficient_vanishes_on_odd_vectors() {
        let cfg = symbolic_cfg();
        let v = Vector::basis(cfg.family(), cfg.ring(), BasisIndex::t(1, 0));
        let coeffs = extract_k_polynomial(&cfg, CompositeKind::LThenG, 1, &v).unwrap();
        assert!(coeffs[&2].is_zero());
    }

    #[test]
    fn k_identities_hold_symbolically_on_a_window() {
        let cfg = symbolic_cfg();
        let w = WindowSpec::new(3, 0, 0, 2).unwrap();
        let report = check_k_identities(&cfg, 2, &w).unwrap();
        assert!(report.is_pass(), "{}", report.to_json());
    }

    #[test]
    fn restricted_contrast_finds_no_annihilating_modes_generically() {
        let ring = ParamRing::numeric();
        let f = TPoly::monomial(1, SymScalar::one(&ring));
        let cfg = ActionConfig::new(
            Algebra::R,
            Arc::new(FamilySpec::degree_two(f)),
            SymScalar::from_rational(&ring, rat(1, 3)),
        )
        .unwrap();
        let v = cyclic_vector(&cfg);
        let report = restricted_contrast(&cfg, &v, 6).unwrap();
        assert!(report.is_pass());
        assert_eq!(report.counts.get("annihilating-modes"), None);
    }

    #[test]
    fn restricted_contrast_flags_the_trivial_configuration() {
        let cfg = numeric_laurent(0, 1, 0, 1);
        let v = cyclic_vector(&cfg);
        let report = restricted_contrast(&cfg, &v, 6).unwrap();
        assert!(!report.is_pass());
        assert_eq!(report.counts["annihilating-modes"], 6);
    }

    #[test]
    fn restricted_contrast_on_omega_family() {
        let ring = ParamRing::numeric();
        let family = Arc::new(FamilySpec::omega(SymScalar::from_int(&ring, 2)).unwrap());
        let cfg =
            ActionConfig::new(Algebra::T, family, SymScalar::from_rational(&ring, rat(1, 3)))
                .unwrap();
        let v = cyclic_vector(&cfg);
        let report = restricted_contrast(&cfg, &v, 6).unwrap();
        assert!(report.is_pass());
    }
}
