//! Window checks for module maps: explicit intertwiners between the
//! non-weight families, the parity-change involution, and exact dimensions
//! of window intertwiner spaces.
//!
//! An intertwiner is a linear map `U` with `U(x·v) = x·U(v)` for every
//! generator `x`.  The explicit maps here are checked by plain substitution
//! (both sides computed exactly; zero residual required).  Window
//! intertwiner-space dimensions are computed from the homogeneous linear
//! system of commuting constraints on a windowed map, with boundary rows
//! (those leaving the window) dropped.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::bigint::BigInt;
use num::BigRational;
use num_integer::binomial;
use num_traits::Zero;

use crate::carriers::{BasisIndex, FamilySpec, TPoly, Vector, WindowSpec};
use crate::modules::{act, ActionConfig};
use crate::report::Report;
use crate::scalars::{int, rat, ParamRing, Rational, SymScalar};
use crate::superalgebras::{generators, Algebra, GenKind, Generator};
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Map specification
// ---------------------------------------------------------------------------

/// Linear rule on basis indices: each source index maps to one target index
/// with a scalar multiplier, or is outside the map's domain.
type MapRule = Box<dyn Fn(&BasisIndex) -> Option<(BasisIndex, SymScalar)>>;

/// Source carrier of a map: a standard module restricted to admitted basis
/// indices, or the squared-odd-variable presentation of the rank-two-free
/// module (basis `y^k` even and `x·y^k` odd with `y = x²`, stored as
/// `(parity, aux=k)` indices).
enum Source {
    Module { cfg: ActionConfig, admit: Box<dyn Fn(&BasisIndex) -> bool> },
    Presentation(XPresentation),
}

/// Target carrier: a standard module, optionally followed by the projection
/// killing indices matched by `kill` (a window quotient).
enum Target {
    Module(ActionConfig),
    Quotient { cfg: ActionConfig, kill: Box<dyn Fn(&BasisIndex) -> bool> },
}

/// A named basis-index rewriting map between two module carriers.
pub struct MapSpec {
    name: &'static str,
    /// Whether the map exchanges even and odd components.
    parity_swap: bool,
    source: Source,
    target: Target,
    rule: MapRule,
    /// Human-readable parameter description for reports.
    params: String,
}

impl MapSpec {
    /// Map name for reports.
    pub fn name(&self) -> &'static str {
        self.name
    }

    /// Whether the map exchanges parities.
    pub fn parity_swap(&self) -> bool {
        self.parity_swap
    }
}

// ---------------------------------------------------------------------------
// x-presentation of the rank-two-free module
// ---------------------------------------------------------------------------

/// Exact evaluator for the presentation with even basis `y^k`, odd basis
/// `x·y^k`, where the N=1 generators act by
///
/// ```text
/// L_m · y^k   = μ^m (y − mα) (y − m)^k
/// L_m · x y^k = μ^m (y − m(α + 1/2)) x (y − m)^k
/// G_m · y^k   = μ^m x (y − m)^k
/// G_m · x y^k = μ^m (−y + 2mα) (y − m)^k
/// ```
///
/// Indices are stored as `(parity, tpow = 0, aux = k)`.
struct XPresentation {
    ring: Arc<ParamRing>,
    mu: SymScalar,
    alpha: SymScalar,
}

/// Sparse source combination: index → coefficient.
type SrcVec = BTreeMap<BasisIndex, SymScalar>;

fn src_add(dst: &mut SrcVec, idx: BasisIndex, c: SymScalar) -> Result<()> {
    if c.is_zero() {
        return Ok(());
    }
    match dst.remove(&idx) {
        None => {
            dst.insert(idx, c);
        }
        Some(old) => {
            let sum = old.try_add(&c)?;
            if !sum.is_zero() {
                dst.insert(idx, sum);
            }
        }
    }
    Ok(())
}

impl XPresentation {
    /// Binomial expansion of `(y − m)^k` as pairs `(power, coefficient)`.
    fn shifted_power(&self, k: u32, m: i64) -> Vec<(u32, Rational)> {
        let mut out = Vec::new();
        for j in 0..=k {
            let c = binomial(BigInt::from(k), BigInt::from(j));
            let sign = BigInt::from(-m).pow(k - j);
            out.push((j, BigRational::from_integer(c * sign)));
        }
        out
    }

    fn act(&self, g: &Generator, idx: &BasisIndex) -> Result<SrcVec> {
        let mut out = SrcVec::new();
        if g.kind == GenKind::C {
            return Ok(out);
        }
        let k = idx.aux;
        let m = g.mode;
        let mu_m = self.mu.pow_int(m as i32)?;
        let expansion = self.shifted_power(k, m);
        match (g.kind, idx.parity) {
            (GenKind::L, 0) => {
                // μ^m (y − mα)(y − m)^k.
                let m_alpha = self.alpha.scale(&int(m));
                for (j, c) in &expansion {
                    let cj = mu_m.scale(c);
                    src_add(&mut out, BasisIndex::t_aux(0, 0, j + 1), cj.clone())?;
                    src_add(&mut out, BasisIndex::t_aux(0, 0, *j), cj.try_mul(&m_alpha)?.neg())?;
                }
            }
            (GenKind::L, _) => {
                // μ^m (y − m(α + 1/2)) x (y − m)^k.
                let shift = self
                    .alpha
                    .try_add(&SymScalar::from_rational(&self.ring, rat(1, 2)))?
                    .scale(&int(m));
                for (j, c) in &expansion {
                    let cj = mu_m.scale(c);
                    src_add(&mut out, BasisIndex::t_aux(1, 0, j + 1), cj.clone())?;
                    src_add(&mut out, BasisIndex::t_aux(1, 0, *j), cj.try_mul(&shift)?.neg())?;
                }
            }
            (GenKind::G, 0) => {
                // μ^m x (y − m)^k.
                for (j, c) in &expansion {
                    src_add(&mut out, BasisIndex::t_aux(1, 0, *j), mu_m.scale(c))?;
                }
            }
            (GenKind::G, _) => {
                // μ^m (−y + 2mα)(y − m)^k.
                let two_m_alpha = self.alpha.scale(&int(2 * m));
                for (j, c) in &expansion {
                    let cj = mu_m.scale(c);
                    src_add(&mut out, BasisIndex::t_aux(0, 0, j + 1), cj.neg())?;
                    src_add(&mut out, BasisIndex::t_aux(0, 0, *j), cj.try_mul(&two_m_alpha)?)?;
                }
            }
            _ => {
                return Err(Error::Config(format!(
                    "generator {g} does not act on the x-presentation"
                )))
            }
        }
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// Builtin maps
// ---------------------------------------------------------------------------

/// φ: the even part plus `D_t`·(odd part) of the rank-two-free module at
/// `b = 1/2` maps onto the same carrier at `b = 0` with parities exchanged:
/// `D_t^n ↦ −ξD_t^n` and `ξD_t^n ↦ D_t^{n−1}` (for `n ≥ 1`).  `λ` symbolic.
pub fn phi_half() -> Result<MapSpec> {
    let ring = ParamRing::new(&["lambda"])?;
    let lambda = SymScalar::param(&ring, "lambda")?;
    let family = Arc::new(FamilySpec::omega(lambda)?);
    let half = SymScalar::from_rational(&ring, rat(1, 2));
    let source_cfg = ActionConfig::new(Algebra::R, family.clone(), half)?;
    let target_cfg = ActionConfig::new(Algebra::R, family, SymScalar::zero(&ring))?;
    let rule_ring = ring.clone();
    Ok(MapSpec {
        name: "phi-half",
        parity_swap: true,
        source: Source::Module {
            cfg: source_cfg,
            admit: Box::new(|idx| idx.parity == 0 || idx.aux >= 1),
        },
        target: Target::Module(target_cfg),
        rule: Box::new(move |idx| {
            if idx.parity == 0 {
                Some((
                    BasisIndex::t_aux(1, 0, idx.aux),
                    SymScalar::from_int(&rule_ring, -1),
                ))
            } else if idx.aux >= 1 {
                Some((
                    BasisIndex::t_aux(0, 0, idx.aux - 1),
                    SymScalar::one(&rule_ring),
                ))
            } else {
                None
            }
        }),
        params: "lambda symbolic, b: 1/2 -> 0".into(),
    })
}

/// ψ: the x-presentation (`y^k`, `x·y^k` with `y = x²`) maps onto the
/// rank-two-free module `Ω(μ)` at `b = 1/2 − α` with parities exchanged:
/// `y^k ↦ ξD_t^k` and `x·y^k ↦ −D_t^k`.  Both `μ` and `α` symbolic.
pub fn psi_presentation() -> Result<MapSpec> {
    let ring = ParamRing::new(&["mu", "alpha"])?;
    let mu = SymScalar::param(&ring, "mu")?;
    let alpha = SymScalar::param(&ring, "alpha")?;
    let family = Arc::new(FamilySpec::omega(mu.clone())?);
    let b = SymScalar::from_rational(&ring, rat(1, 2)).try_sub(&alpha)?;
    let target_cfg = ActionConfig::new(Algebra::R, family, b)?;
    let rule_ring = ring.clone();
    Ok(MapSpec {
        name: "psi-presentation",
        parity_swap: true,
        source: Source::Presentation(XPresentation { ring, mu, alpha }),
        target: Target::Module(target_cfg),
        rule: Box::new(move |idx| {
            if idx.parity == 0 {
                Some((BasisIndex::t_aux(1, 0, idx.aux), SymScalar::one(&rule_ring)))
            } else {
                Some((
                    BasisIndex::t_aux(0, 0, idx.aux),
                    SymScalar::from_int(&rule_ring, -1),
                ))
            }
        }),
        params: "mu, alpha symbolic; target b = 1/2 - alpha".into(),
    })
}

/// The quotient companion of φ on the Laurent carrier with `α = 0`: the
/// source `{t^n} ⊕ {ξt^n : n ≠ 0}` at `b = 1/2` maps onto the `b = 0` module
/// with the constant even vector killed, via `t^n ↦ ξt^n` and
/// `ξt^n ↦ −(1/n)t^n`.
pub fn psi_quotient() -> Result<MapSpec> {
    let ring = ParamRing::numeric();
    let family = Arc::new(FamilySpec::laurent(TPoly::zero()));
    let half = SymScalar::from_rational(&ring, rat(1, 2));
    let source_cfg = ActionConfig::new(Algebra::R, family.clone(), half)?;
    let target_cfg = ActionConfig::new(Algebra::R, family, SymScalar::zero(&ring))?;
    let rule_ring = ring.clone();
    Ok(MapSpec {
        name: "psi-quotient",
        parity_swap: true,
        source: Source::Module {
            cfg: source_cfg,
            admit: Box::new(|idx| idx.parity == 0 || idx.tpow != 0),
        },
        target: Target::Quotient {
            cfg: target_cfg,
            kill: Box::new(|idx| idx.parity == 0 && idx.tpow == 0),
        },
        rule: Box::new(move |idx| {
            if idx.parity == 0 {
                Some((BasisIndex::t(1, idx.tpow), SymScalar::one(&rule_ring)))
            } else if idx.tpow != 0 {
                Some((
                    BasisIndex::t(0, idx.tpow),
                    SymScalar::from_rational(&rule_ring, rat(-1, idx.tpow)),
                ))
            } else {
                None
            }
        }),
        params: "alpha = 0, b: 1/2 -> 0, constant even vector killed".into(),
    })
}

// ---------------------------------------------------------------------------
// Intertwiner check
// ---------------------------------------------------------------------------

fn rule_apply(
    spec: &MapSpec,
    terms: &SrcVec,
    family: &Arc<FamilySpec>,
    ring: &Arc<ParamRing>,
) -> Result<Vector> {
    let mut out = Vector::zero(family, ring);
    for (idx, c) in terms {
        match (spec.rule)(idx) {
            Some((target_idx, mult)) => out.add_term(target_idx, c.try_mul(&mult)?),
            None => {
                return Err(Error::Config(format!(
                    "map {} reached index outside its rule domain",
                    spec.name
                )))
            }
        }
    }
    Ok(out)
}

fn quotient_project(target: &Target, v: Vector) -> Vector {
    match target {
        Target::Module(_) => v,
        Target::Quotient { kill, .. } => {
            let mut out = Vector::zero(v.family(), v.ring());
            for (idx, c) in v.terms() {
                if !kill(idx) {
                    out.add_term(idx.clone(), c.clone());
                }
            }
            out
        }
    }
}

/// Checks `map(x·v) = x·map(v)` exactly for every generator with
/// `|mode| ≤ mode_bound` and every source basis vector enumerated by the
/// window.  Both sides are computed exactly; nothing is truncated.
pub fn check_intertwiner(spec: &MapSpec, mode_bound: i64, window: &WindowSpec) -> Result<Report> {
    let target_cfg = match &spec.target {
        Target::Module(cfg) => cfg,
        Target::Quotient { cfg, .. } => cfg,
    };
    let family = target_cfg.family().clone();
    let ring = target_cfg.ring().clone();

    let mut report = Report::new("check-iso", "intertwiner-map");
    report
        .describe("map", spec.name)
        .describe("paritySwap", spec.parity_swap)
        .describe("parameters", &spec.params)
        .describe("modeBound", mode_bound);

    let source_basis: Vec<BasisIndex> = match &spec.source {
        Source::Module { cfg, admit } => window
            .basis(cfg.family(), false)
            .into_iter()
            .filter(|idx| admit(idx))
            .collect(),
        Source::Presentation(_) => {
            let mut out = Vec::new();
            for parity in 0..=1u8 {
                for k in 0..=window.aux_bound {
                    out.push(BasisIndex::t_aux(parity, 0, k));
                }
            }
            out
        }
    };
    report.add_count("source-basis", source_basis.len() as u64);

    for g in generators(Algebra::R, mode_bound) {
        for s in &source_basis {
            report.bump("instances");
            // Left side: map(x · v), computed exactly in the source.
            let image: SrcVec = match &spec.source {
                Source::Module { cfg, .. } => {
                    let v = Vector::basis(cfg.family(), cfg.ring(), s.clone());
                    let img = act(cfg, &g, &v)?;
                    img.terms().map(|(i, c)| (i.clone(), c.clone())).collect()
                }
                Source::Presentation(p) => p.act(&g, s)?,
            };
            let lhs = rule_apply(spec, &image, &family, &ring)?;

            // Right side: x · map(v) in the target (projected for quotients).
            let mut base_terms = SrcVec::new();
            base_terms.insert(s.clone(), SymScalar::one(&ring));
            let mapped = rule_apply(spec, &base_terms, &family, &ring)?;
            let rhs = quotient_project(&spec.target, act(target_cfg, &g, &mapped)?);

            let residual = lhs.try_sub(&rhs)?;
            if !residual.is_zero() {
                report.fail(
                    format!("{g} on {}", s.display_with(target_cfg.family())),
                    format!("{residual}"),
                );
            }
        }
    }
    Ok(report)
}

/// Parity-change involution Π: flips the ξ-degree of every basis index.
pub fn parity_flip(v: &Vector) -> Vector {
    let mut out = Vector::zero(v.family(), v.ring());
    for (idx, c) in v.terms() {
        let mut flipped = idx.clone();
        flipped.parity = 1 - flipped.parity;
        out.add_term(flipped, c.clone());
    }
    out
}

// ---------------------------------------------------------------------------
// Window intertwiner spaces
// ---------------------------------------------------------------------------

/// Reduced echelon over ℚ keyed by unknown column; tracks rank only.
struct RatEchelon {
    rows: Vec<BTreeMap<usize, Rational>>,
}

impl RatEchelon {
    fn new() -> RatEchelon {
        RatEchelon { rows: Vec::new() }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn insert(&mut self, mut row: BTreeMap<usize, Rational>) {
        row.retain(|_, c| !c.is_zero());
        for r in &self.rows {
            let pivot = *r.keys().next().expect("rows are nonzero");
            if let Some(c) = row.get(&pivot).cloned() {
                let factor = &c / &r[&pivot];
                for (col, rc) in r {
                    let entry = row.entry(*col).or_insert_with(Rational::zero);
                    *entry -= &factor * rc;
                    if entry.is_zero() {
                        row.remove(col);
                    }
                }
            }
        }
        if row.is_empty() {
            return;
        }
        let pivot = *row.keys().next().expect("nonzero");
        let lead = row[&pivot].clone();
        for c in row.values_mut() {
            *c /= &lead;
        }
        let pos = self
            .rows
            .partition_point(|r| *r.keys().next().expect("nonzero") < pivot);
        self.rows.insert(pos, row);
    }
}

fn numeric_coeff(c: &SymScalar) -> Result<Rational> {
    c.to_rational().ok_or_else(|| {
        Error::Config("intertwiner-space computation needs numeric parameters".into())
    })
}

/// Dimension of the space of windowed linear maps `U` (defined on the source
/// window basis, restricted to `source_parity` when given, and respecting
/// `parity_swap`) that commute with every generator in `constraints`.
///
/// Constraint rows falling outside the target window are dropped, as is any
/// constraint whose source-side image reaches an index the windowed map does
/// not cover — the system is exact on the window and agnostic beyond it.
pub fn intertwiner_space_dim(
    source: &ActionConfig,
    target: &ActionConfig,
    constraints: &[Generator],
    parity_swap: bool,
    source_parity: Option<u8>,
    w: &WindowSpec,
) -> Result<usize> {
    let source_indices: Vec<BasisIndex> = w
        .basis(source.family(), false)
        .into_iter()
        .filter(|idx| source_parity.map_or(true, |p| idx.parity == p))
        .collect();
    let target_indices = w.basis(target.family(), false);

    let paired = |p: u8| -> u8 {
        if parity_swap {
            1 - p
        } else {
            p
        }
    };

    let mut column: BTreeMap<(BasisIndex, BasisIndex), usize> = BTreeMap::new();
    for s in &source_indices {
        for t in &target_indices {
            if t.parity == paired(s.parity) {
                let id = column.len();
                column.insert((s.clone(), t.clone()), id);
            }
        }
    }

    let mut echelon = RatEchelon::new();
    for g in constraints {
        if g.kind == GenKind::C {
            continue;
        }
        // Target images of paired basis vectors, computed once per generator.
        let mut target_images: BTreeMap<BasisIndex, Vector> = BTreeMap::new();
        for t in &target_indices {
            let v = Vector::basis(target.family(), target.ring(), t.clone());
            target_images.insert(t.clone(), act(target, g, &v)?);
        }

        'constraint: for s in &source_indices {
            let v = Vector::basis(source.family(), source.ring(), s.clone());
            let image = act(source, g, &v)?;
            // The left side U(x·v) needs U on every reached index: all of
            // them must be covered by the windowed map.
            for (idx, _) in image.terms() {
                let covered = w.contains(idx, source.family())
                    && source_parity.map_or(true, |p| idx.parity == p);
                if !covered {
                    continue 'constraint;
                }
            }

            // Row per in-window target index r:
            //   Σ_i image_i · u_{i,r}  −  Σ_t (x·e_t)_r · u_{s,t}  =  0.
            let mut rows: BTreeMap<BasisIndex, BTreeMap<usize, Rational>> = BTreeMap::new();
            for (i, c) in image.terms() {
                let q = numeric_coeff(c)?;
                for r in &target_indices {
                    if r.parity == paired(i.parity) {
                        let col = column[&(i.clone(), r.clone())];
                        let row = rows.entry(r.clone()).or_default();
                        *row.entry(col).or_insert_with(Rational::zero) += &q;
                    }
                }
            }
            for t in &target_indices {
                if t.parity != paired(s.parity) {
                    continue;
                }
                let col = column[&(s.clone(), t.clone())];
                for (r, c) in target_images[t].terms() {
                    if !w.contains(r, target.family()) {
                        continue; // boundary row: dropped
                    }
                    let q = numeric_coeff(c)?;
                    let row = rows.entry(r.clone()).or_default();
                    *row.entry(col).or_insert_with(Rational::zero) -= &q;
                }
            }
            for (_, row) in rows {
                echelon.insert(row);
            }
        }
    }
    Ok(column.len() - echelon.rank())
}

/// Evidence that the window intertwiner space between the rank-two-free
/// modules at `b = 1/3` and `b = 2` (λ = 2) is zero.
pub fn check_intertwiner_space_trivial(mode_bound: i64, w: &WindowSpec) -> Result<Report> {
    let ring = ParamRing::numeric();
    let family = Arc::new(FamilySpec::omega(SymScalar::from_int(&ring, 2))?);
    let source = ActionConfig::new(
        Algebra::R,
        family.clone(),
        SymScalar::from_rational(&ring, rat(1, 3)),
    )?;
    let target = ActionConfig::new(Algebra::R, family, SymScalar::from_int(&ring, 2))?;
    let constraints = generators(Algebra::R, mode_bound);
    let dim = intertwiner_space_dim(&source, &target, &constraints, false, None, w)?;

    let mut report = Report::new("check-iso", "intertwiner-space");
    report
        .describe("source", "rank-two-free, lambda = 2, b = 1/3")
        .describe("target", "rank-two-free, lambda = 2, b = 2")
        .describe("modeBound", mode_bound)
        .add_count("dimension", dim as u64);
    if dim != 0 {
        report.fail("window intertwiner space", format!("dimension {dim}, expected 0"));
    }
    Ok(report)
}

/// Parity-exchange witness separating the N=2 behaviour from the N=1 one:
/// on the Laurent carrier with `α = 1/2`, the space of even-to-odd windowed
/// maps commuting with the `H` modes (source `b = 1/2`, target `b = 0`) is
/// zero, while the same-shaped system for the N=1 algebra (constrained by
/// the `L` modes) admits the degree-preserving solution.
pub fn witness_non_isomorphism_t(mode_bound: i64, w: &WindowSpec) -> Result<Report> {
    let ring = ParamRing::numeric();
    let alpha = TPoly::constant(SymScalar::from_rational(&ring, rat(1, 2)));
    let family = Arc::new(FamilySpec::laurent(alpha));
    let half = SymScalar::from_rational(&ring, rat(1, 2));

    let mut report = Report::new("check-iso", "parity-witness");
    report
        .describe("family", "laurent, alpha = 1/2")
        .describe("b", "1/2 vs 0")
        .describe("modeBound", mode_bound);

    // N=2 side: H-mode constraints force the zero map.
    let source_t = ActionConfig::new(Algebra::T, family.clone(), half.clone())?;
    let target_t = ActionConfig::new(Algebra::T, family.clone(), SymScalar::zero(&ring))?;
    let h_modes: Vec<Generator> = (-mode_bound..=mode_bound)
        .map(|m| Generator::new(Algebra::T, GenKind::H, m))
        .collect::<Result<_>>()?;
    let dim_t = intertwiner_space_dim(&source_t, &target_t, &h_modes, true, Some(0), w)?;
    report.add_count("dimension-T", dim_t as u64);
    if dim_t != 0 {
        report.fail("H-mode system", format!("dimension {dim_t}, expected 0"));
    }

    // N=1 side: the same shape constrained by L modes keeps a solution.
    let source_r = ActionConfig::new(Algebra::R, family.clone(), half)?;
    let target_r = ActionConfig::new(Algebra::R, family, SymScalar::zero(&ring))?;
    let l_modes: Vec<Generator> = (-mode_bound..=mode_bound)
        .map(|m| Generator::new(Algebra::R, GenKind::L, m))
        .collect::<Result<_>>()?;
    let dim_r = intertwiner_space_dim(&source_r, &target_r, &l_modes, true, Some(0), w)?;
    report.add_count("dimension-R", dim_r as u64);
    if dim_r == 0 {
        report.fail("L-mode system", "dimension 0, expected at least 1");
    }
    Ok(report)
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_is_an_intertwiner() {
        let spec = phi_half().unwrap();
        let w = WindowSpec::new(4, 5, 0, 3).unwrap();
        let report = check_intertwiner(&spec, 3, &w).unwrap();
        assert!(report.is_pass(), "{}", report.to_json());
    }

    #[test]
    fn psi_is_an_intertwiner_symbolically() {
        let spec = psi_presentation().unwrap();
        let w = WindowSpec::new(4, 5, 0, 3).unwrap();
        let report = check_intertwiner(&spec, 3, &w).unwrap();
        assert!(report.is_pass(), "{}", report.to_json());
    }

    #[test]
    fn psi_quotient_is_an_intertwiner() {
        let spec = psi_quotient().unwrap();
        let w = WindowSpec::new(5, 0, 0, 3).unwrap();
        let report = check_intertwiner(&spec, 3, &w).unwrap();
        assert!(report.is_pass(), "{}", report.to_json());
    }

    #[test]
    fn phi_rule_is_undefined_on_the_bare_odd_vector() {
        let spec = phi_half().unwrap();
        assert!((spec.rule)(&BasisIndex::t_aux(1, 0, 0)).is_none());
        assert!((spec.rule)(&BasisIndex::t_aux(1, 0, 3)).is_some());
    }

    #[test]
    fn phi_composes_with_its_inverse_to_identity() {
        // Inverse rule: ξD_t^n ↦ −D_t^n and D_t^k ↦ ξD_t^{k+1}.
        let spec = phi_half().unwrap();
        let ring = ParamRing::new(&["lambda"]).unwrap();
        let inverse = |idx: &BasisIndex| -> (BasisIndex, SymScalar) {
            if idx.parity == 1 {
                (BasisIndex::t_aux(0, 0, idx.aux), SymScalar::from_int(&ring, -1))
            } else {
                (BasisIndex::t_aux(1, 0, idx.aux + 1), SymScalar::one(&ring))
            }
        };
        for aux in 0..=6u32 {
            for parity in 0..=1u8 {
                if parity == 1 && aux == 0 {
                    continue; // outside the source submodule
                }
                let source_idx = BasisIndex::t_aux(parity, 0, aux);
                let (mid, c1) = (spec.rule)(&source_idx).unwrap();
                let (back, c2) = inverse(&mid);
                assert_eq!(back, source_idx);
                assert!(c1.try_mul(&c2).unwrap().is_one());
            }
        }
        // And in the other order, starting from the target basis.
        for aux in 0..=6u32 {
            for parity in 0..=1u8 {
                let target_idx = BasisIndex::t_aux(parity, 0, aux);
                let (mid, c1) = inverse(&target_idx);
                let (back, c2) = (spec.rule)(&mid).unwrap();
                assert_eq!(back, target_idx);
                assert!(c1.try_mul(&c2).unwrap().is_one());
            }
        }
    }

    #[test]
    fn parity_flip_is_an_involution() {
        let ring = ParamRing::numeric();
        let family = Arc::new(FamilySpec::laurent(TPoly::zero()));
        let mut v = Vector::zero(&family, &ring);
        v.add_term(BasisIndex::t(0, 2), SymScalar::from_int(&ring, 3));
        v.add_term(BasisIndex::t(1, -1), SymScalar::from_rational(&ring, rat(1, 2)));
        let flipped = parity_flip(&v);
        assert_ne!(flipped, v);
        assert_eq!(parity_flip(&flipped), v);
    }

    #[test]
    fn identity_survives_the_intertwiner_system() {
        // Same module on both sides: the identity map commutes with all
        // generators, so the window system keeps at least one solution.
        let ring = ParamRing::numeric();
        let family = Arc::new(FamilySpec::omega(SymScalar::from_int(&ring, 2)).unwrap());
        let cfg = ActionConfig::new(
            Algebra::R,
            family,
            SymScalar::from_rational(&ring, rat(1, 3)),
        )
        .unwrap();
        let w = WindowSpec::new(4, 5, 0, 2).unwrap();
        let constraints = generators(Algebra::R, 2);
        let dim =
            intertwiner_space_dim(&cfg, &cfg, &constraints, false, None, &w).unwrap();
        assert!(dim >= 1);
    }

    #[test]
    fn distinct_b_values_admit_no_window_intertwiner() {
        let w = WindowSpec::new(4, 5, 0, 2).unwrap();
        let report = check_intertwiner_space_trivial(2, &w).unwrap();
        assert!(report.is_pass(), "{}", report.to_json());
        assert_eq!(report.counts["dimension"], 0);
    }

    #[test]
    fn parity_witness_separates_the_two_algebras() {
        let w = WindowSpec::new(4, 0, 0, 2).unwrap();
        let report = witness_non_isomorphism_t(2, &w).unwrap();
        assert!(report.is_pass(), "{}", report.to_json());
        assert_eq!(report.counts["dimension-T"], 0);
        assert!(report.counts["dimension-R"] >= 1);
    }
}
