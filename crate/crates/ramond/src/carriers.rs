//! The ℤ₂-graded vector carriers underlying each module family.
//!
//! Five concrete families are supported, each a quotient of the Weyl
//! superalgebra by a right ideal generated by one element τ:
//!
//! | family | τ | basis |
//! |--------|---|-------|
//! | `LaurentSeries` | `D_t − α(t)` | `t^k ξ^r`, `k ∈ ℤ` |
//! | `OmegaLambda`   | `t − λ`      | `D_t^n ξ^r`, `n ≥ 0` |
//! | `DegreeTwo`     | `D_t² − f(t)`| `ξ^r t^k D_t^a`, `a ∈ {0,1}` |
//! | `DegreeN`       | `(d/dt)^n − t` | `ξ^r t^k (d/dt)^a`, `a ≤ n−1` |
//! | `Fraction`      | `d/dt − Σ αᵢ/(t−bᵢ)` | `t^k ξ^r` and `(t−bᵢ)^{−j} ξ^r` |
//!
//! A [`BasisIndex`] names one basis vector by `(parity, tpow, aux, poles)`;
//! this tuple order is also the total order used for deterministic pivoting
//! in exact linear algebra. A [`Vector`] is a finitely supported
//! scalar-linear combination of basis indices.
//!
//! For the `Fraction` family the pole list starts with `b₀ = 0`, so a pure
//! pole in slot 0 *is* a negative power of `t`; canonical indices therefore
//! keep slot 0 of the pole multi-index at zero and fold such terms into
//! `tpow`. A canonical index is either a pure power (`poles` all zero) or a
//! pure pole `(t−bᵢ)^{−j}` with `tpow = 0`, `j ≥ 1`, and exactly one nonzero
//! slot `i ≥ 1`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::{Signed, Zero};

use crate::scalars::{ParamRing, Rational, SymScalar};
use crate::{Error, Result};

/// Parity of a vector: homogeneous even/odd, or a mix of both.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

/// A Laurent polynomial in `t` with symbolic-scalar coefficients, used for
/// the `α(t)` and `f(t)` family payloads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TPoly {
    coeffs: BTreeMap<i64, SymScalar>,
}

impl TPoly {
    /// The zero polynomial.
    pub fn zero() -> TPoly {
        TPoly { coeffs: BTreeMap::new() }
    }

    /// A constant polynomial.
    pub fn constant(c: SymScalar) -> TPoly {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(0, c);
        }
        TPoly { coeffs }
    }

    /// The monomial `c * t^k`.
    pub fn monomial(k: i64, c: SymScalar) -> TPoly {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(k, c);
        }
        TPoly { coeffs }
    }

    /// Builds from `(exponent, coefficient)` pairs, merging duplicates.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (i64, SymScalar)>) -> Result<TPoly> {
        let mut coeffs: BTreeMap<i64, SymScalar> = BTreeMap::new();
        for (k, c) in pairs {
            let merged = match coeffs.remove(&k) {
                Some(old) => old.try_add(&c)?,
                None => c,
            };
            if !merged.is_zero() {
                coeffs.insert(k, merged);
            }
        }
        Ok(TPoly { coeffs })
    }

    /// True iff this is the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Iterates `(t-exponent, coefficient)` in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&i64, &SymScalar)> {
        self.coeffs.iter()
    }

    /// Largest |exponent| occurring, 0 for the zero polynomial.
    pub fn degree_radius(&self) -> i64 {
        self.coeffs.keys().map(|k| k.abs()).max().unwrap_or(0)
    }
}

/// Specification of one carrier family, including its payload data.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec {
    /// Basis `t^k ξ^r`; `D_t` acts as multiplication by `α(t) + k`.
    LaurentSeries { alpha: TPoly },
    /// Basis `D_t^n ξ^r`; `t^m` acts as `λ^m (D_t − m)^n`.
    OmegaLambda { lambda: SymScalar },
    /// Basis `ξ^r t^k D_t^a` with `a ≤ 1`; `D_t²` rewrites to `f(t)`.
    DegreeTwo { f: TPoly },
    /// Basis `ξ^r t^k (d/dt)^a` with `a ≤ n−1`; `(d/dt)^n` rewrites to `t`.
    DegreeN { n: u32 },
    /// Basis of pure powers and pure poles; `d/dt` acts as the formal
    /// derivative plus multiplication by `Σ αᵢ/(t−bᵢ)`.
    Fraction { poles: Vec<Rational>, residues: Vec<Rational> },
}

impl FamilySpec {
    /// Laurent-series family with multiplier polynomial `α(t)`.
    pub fn laurent(alpha: TPoly) -> FamilySpec {
        FamilySpec::LaurentSeries { alpha }
    }

    /// Rank-two-free family; `λ` must be an invertible monomial (e.g. a
    /// nonzero rational, or the Laurent parameter `lambda` itself).
    pub fn omega(lambda: SymScalar) -> Result<FamilySpec> {
        lambda.inverse_monomial().map_err(|_| {
            Error::Config("omega family needs an invertible (single-monomial, nonzero) lambda".into())
        })?;
        Ok(FamilySpec::OmegaLambda { lambda })
    }

    /// Degree-two family with rewriting polynomial `f(t)`.
    pub fn degree_two(f: TPoly) -> FamilySpec {
        FamilySpec::DegreeTwo { f }
    }

    /// Degree-`n` family; requires `n ≥ 1`.
    pub fn degree_n(n: u32) -> Result<FamilySpec> {
        if n == 0 {
            return Err(Error::Config("degree-n family needs n >= 1".into()));
        }
        Ok(FamilySpec::DegreeN { n })
    }

    /// Fraction family. Requires `poles[0] = 0`, pairwise distinct poles,
    /// one residue per pole, and at least one non-integer residue.
    pub fn fraction(poles: Vec<Rational>, residues: Vec<Rational>) -> Result<FamilySpec> {
        if poles.is_empty() || !poles[0].is_zero() {
            return Err(Error::Config("fraction family needs poles starting with b0 = 0".into()));
        }
        if residues.len() != poles.len() {
            return Err(Error::Config("fraction family needs one residue per pole".into()));
        }
        for i in 0..poles.len() {
            for j in (i + 1)..poles.len() {
                if poles[i] == poles[j] {
                    return Err(Error::Config(format!(
                        "fraction family poles must be distinct, got {} twice",
                        poles[i]
                    )));
                }
            }
        }
        if residues.iter().all(|a| a.is_integer()) {
            return Err(Error::Config(
                "fraction family residue tuple must not be all-integer".into(),
            ));
        }
        Ok(FamilySpec::Fraction { poles, residues })
    }

    /// Upper bound on the `aux` slot imposed by the family itself
    /// (`None` = unbounded).
    pub fn aux_cap(&self) -> Option<u32> {
        match self {
            FamilySpec::LaurentSeries { .. } | FamilySpec::Fraction { .. } => Some(0),
            FamilySpec::OmegaLambda { .. } => None,
            FamilySpec::DegreeTwo { .. } => Some(1),
            FamilySpec::DegreeN { n } => Some(n - 1),
        }
    }

    /// Number of pole slots (0 for families without poles).
    pub fn pole_arity(&self) -> usize {
        match self {
            FamilySpec::Fraction { poles, .. } => poles.len(),
            _ => 0,
        }
    }

    /// Symbol used when printing the `aux` slot of this family.
    pub fn aux_symbol(&self) -> &'static str {
        match self {
            FamilySpec::DegreeN { .. } => "ddt",
            _ => "Dt",
        }
    }

    /// Short machine name of the family tag.
    pub fn tag(&self) -> &'static str {
        match self {
            FamilySpec::LaurentSeries { .. } => "laurent",
            FamilySpec::OmegaLambda { .. } => "omega",
            FamilySpec::DegreeTwo { .. } => "degree-two",
            FamilySpec::DegreeN { .. } => "degree-n",
            FamilySpec::Fraction { .. } => "fraction",
        }
    }
}

/// Index of one carrier basis vector.
///
/// The derived ordering — `(parity, tpow, aux, poles)` lexicographically —
/// is the deterministic elimination order used throughout the probes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct BasisIndex {
    /// ξ-degree: 0 (even) or 1 (odd).
    pub parity: u8,
    /// Exponent of `t`.
    pub tpow: i64,
    /// Power of `D_t` (rank-two free / degree-two) or `d/dt` (degree-n).
    pub aux: u32,
    /// Pole multi-index `(j_0, …, j_n)`: order of each `(t−bᵢ)^{−jᵢ}` factor.
    /// Empty for families without poles; slot 0 is always 0 (folded into
    /// `tpow` since `b₀ = 0`).
    pub poles: Vec<u32>,
}

impl BasisIndex {
    /// Pure power `t^k ξ^r` (pole-free families).
    pub fn t(parity: u8, tpow: i64) -> BasisIndex {
        BasisIndex { parity, tpow, aux: 0, poles: Vec::new() }
    }

    /// Index with an auxiliary power: `ξ^r t^k D_t^a` or `ξ^r t^k (d/dt)^a`.
    pub fn t_aux(parity: u8, tpow: i64, aux: u32) -> BasisIndex {
        BasisIndex { parity, tpow, aux, poles: Vec::new() }
    }

    /// Pure power for a fraction family with `arity` pole slots.
    pub fn frac_t(parity: u8, tpow: i64, arity: usize) -> BasisIndex {
        BasisIndex { parity, tpow, aux: 0, poles: vec![0; arity] }
    }

    /// Pure pole `(t−b_slot)^{−order} ξ^r` for a fraction family.
    pub fn frac_pole(parity: u8, slot: usize, order: u32, arity: usize) -> BasisIndex {
        debug_assert!(slot >= 1 && slot < arity && order >= 1);
        let mut poles = vec![0; arity];
        poles[slot] = order;
        BasisIndex { parity, tpow: 0, aux: 0, poles }
    }

    /// Total pole order (sum of the multi-index).
    pub fn pole_total(&self) -> u32 {
        self.poles.iter().sum()
    }

    /// Renders the index using the family's notation.
    pub fn display_with(&self, family: &FamilySpec) -> String {
        let mut parts: Vec<String> = Vec::new();
        if self.parity == 1 {
            parts.push("xi".to_string());
        }
        match family {
            FamilySpec::OmegaLambda { .. } => {
                // Basis D_t^n ξ^r: tpow is structurally zero.
                parts.push(format!("Dt^{}", self.aux));
            }
            FamilySpec::Fraction { poles, .. } => {
                if self.poles.iter().all(|&j| j == 0) {
                    parts.push(format!("t^{}", self.tpow));
                } else {
                    let slot = self.poles.iter().position(|&j| j > 0).unwrap();
                    let b = &poles[slot];
                    let base = if b.is_negative() {
                        format!("(t+{})", -b.clone())
                    } else {
                        format!("(t-{})", b)
                    };
                    parts.push(format!("{}^-{}", base, self.poles[slot]));
                }
            }
            _ => {
                parts.push(format!("t^{}", self.tpow));
                if self.aux > 0 || family.aux_cap() != Some(0) {
                    parts.push(format!("{}^{}", family.aux_symbol(), self.aux));
                }
            }
        }
        parts.join("*")
    }
}

/// Bounds describing a finite probe window plus the generator mode range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowSpec {
    /// Window keeps indices with `|tpow| ≤ t_bound`.
    pub t_bound: i64,
    /// Window keeps indices with `aux ≤ aux_bound` (also capped per family).
    pub aux_bound: u32,
    /// Window keeps indices with total pole order `≤ pole_bound`.
    pub pole_bound: u32,
    /// Generators with `|m| ≤ mode_bound` are applied by probes.
    pub mode_bound: i64,
}

impl WindowSpec {
    /// Validating constructor; requires `t_bound > mode_bound ≥ 0` so the
    /// inner window is nonempty.
    pub fn new(t_bound: i64, aux_bound: u32, pole_bound: u32, mode_bound: i64) -> Result<WindowSpec> {
        if mode_bound < 0 || t_bound <= mode_bound {
            return Err(Error::Config(format!(
                "window needs t_bound > mode_bound >= 0, got t_bound={t_bound} mode_bound={mode_bound}"
            )));
        }
        Ok(WindowSpec { t_bound, aux_bound, pole_bound, mode_bound })
    }

    fn aux_limit(&self, family: &FamilySpec) -> u32 {
        match family.aux_cap() {
            Some(cap) => cap.min(self.aux_bound),
            None => self.aux_bound,
        }
    }

    /// Whether `idx` lies inside the (outer) window.
    pub fn contains(&self, idx: &BasisIndex, family: &FamilySpec) -> bool {
        idx.tpow.abs() <= self.t_bound
            && idx.aux <= self.aux_limit(family)
            && idx.pole_total() <= self.pole_bound
    }

    /// Whether `idx` lies inside the inner window (`|tpow| ≤ t_bound −
    /// mode_bound`); this is the region whose coverage orbit probes report.
    pub fn contains_inner(&self, idx: &BasisIndex, family: &FamilySpec) -> bool {
        idx.tpow.abs() <= self.t_bound - self.mode_bound
            && idx.aux <= self.aux_limit(family)
            && idx.pole_total() <= self.pole_bound
    }

    /// Enumerates the window basis (or the inner-window basis) in canonical
    /// index order.
    pub fn basis(&self, family: &FamilySpec, inner: bool) -> Vec<BasisIndex> {
        let t_bound = if inner { self.t_bound - self.mode_bound } else { self.t_bound };
        let aux_max = self.aux_limit(family);
        let mut out = Vec::new();
        for parity in 0..=1u8 {
            match family {
                FamilySpec::OmegaLambda { .. } => {
                    for aux in 0..=aux_max {
                        out.push(BasisIndex::t_aux(parity, 0, aux));
                    }
                }
                FamilySpec::Fraction { poles, .. } => {
                    let arity = poles.len();
                    for tpow in -t_bound..=t_bound {
                        out.push(BasisIndex::frac_t(parity, tpow, arity));
                    }
                    for slot in 1..arity {
                        for order in 1..=self.pole_bound {
                            out.push(BasisIndex::frac_pole(parity, slot, order, arity));
                        }
                    }
                }
                _ => {
                    for tpow in -t_bound..=t_bound {
                        for aux in 0..=aux_max {
                            out.push(BasisIndex::t_aux(parity, tpow, aux));
                        }
                    }
                }
            }
        }
        out.sort();
        out
    }
}

/// A finitely supported scalar-linear combination of basis indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector {
    family: Arc<FamilySpec>,
    ring: Arc<ParamRing>,
    terms: BTreeMap<BasisIndex, SymScalar>,
}

impl Vector {
    /// The zero vector of a carrier.
    pub fn zero(family: &Arc<FamilySpec>, ring: &Arc<ParamRing>) -> Vector {
        Vector { family: family.clone(), ring: ring.clone(), terms: BTreeMap::new() }
    }

    /// A single-term vector `c · idx`.
    pub fn term(
        family: &Arc<FamilySpec>,
        ring: &Arc<ParamRing>,
        idx: BasisIndex,
        c: SymScalar,
    ) -> Vector {
        let mut v = Vector::zero(family, ring);
        v.add_term(idx, c);
        v
    }

    /// A basis vector with coefficient 1.
    pub fn basis(family: &Arc<FamilySpec>, ring: &Arc<ParamRing>, idx: BasisIndex) -> Vector {
        Vector::term(family, ring, idx, SymScalar::one(ring))
    }

    /// The carrier family.
    pub fn family(&self) -> &Arc<FamilySpec> {
        &self.family
    }

    /// The scalar ring.
    pub fn ring(&self) -> &Arc<ParamRing> {
        &self.ring
    }

    /// True iff no terms are stored.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored terms.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Iterates `(index, coefficient)` in canonical index order.
    pub fn terms(&self) -> impl Iterator<Item = (&BasisIndex, &SymScalar)> {
        self.terms.iter()
    }

    /// Coefficient of one index (zero if absent).
    pub fn coeff(&self, idx: &BasisIndex) -> SymScalar {
        self.terms.get(idx).cloned().unwrap_or_else(|| SymScalar::zero(&self.ring))
    }

    /// Adds `c · idx` in place, pruning on cancellation.
    pub fn add_term(&mut self, idx: BasisIndex, c: SymScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&idx) {
            None => {
                self.terms.insert(idx, c);
            }
            Some(old) => {
                let sum = old.try_add(&c).expect("vector terms share one ring");
                if !sum.is_zero() {
                    self.terms.insert(idx, sum);
                }
            }
        }
    }

    fn check_compat(&self, other: &Vector) -> Result<()> {
        if self.family != other.family {
            return Err(Error::Config(format!(
                "carrier family mismatch: {} vs {}",
                self.family.tag(),
                other.family.tag()
            )));
        }
        if self.ring != other.ring {
            return Err(Error::RingMismatch("vector rings differ".into()));
        }
        Ok(())
    }

    /// Exact sum; errors when families or rings differ.
    pub fn try_add(&self, other: &Vector) -> Result<Vector> {
        self.check_compat(other)?;
        let mut out = self.clone();
        for (idx, c) in &other.terms {
            out.add_term(idx.clone(), c.clone());
        }
        Ok(out)
    }

    /// Exact difference; errors when families or rings differ.
    pub fn try_sub(&self, other: &Vector) -> Result<Vector> {
        self.try_add(&other.neg())
    }

    /// Additive inverse.
    pub fn neg(&self) -> Vector {
        Vector {
            family: self.family.clone(),
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(i, c)| (i.clone(), c.neg())).collect(),
        }
    }

    /// Scales every coefficient by `c`.
    pub fn scale(&self, c: &SymScalar) -> Vector {
        if c.is_zero() {
            return Vector::zero(&self.family, &self.ring);
        }
        let mut out = Vector::zero(&self.family, &self.ring);
        for (idx, coeff) in &self.terms {
            out.add_term(idx.clone(), coeff.try_mul(c).expect("vector terms share one ring"));
        }
        out
    }

    /// Scales every coefficient by a rational constant.
    pub fn scale_q(&self, q: &Rational) -> Vector {
        if q.is_zero() {
            return Vector::zero(&self.family, &self.ring);
        }
        Vector {
            family: self.family.clone(),
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(i, c)| (i.clone(), c.scale(q))).collect(),
        }
    }

    /// The ℤ₂ parity of the vector (zero vector reported as `Even`; it is
    /// compatible with every parity check).
    pub fn parity(&self) -> Parity {
        let mut seen_even = false;
        let mut seen_odd = false;
        for idx in self.terms.keys() {
            if idx.parity == 0 {
                seen_even = true;
            } else {
                seen_odd = true;
            }
        }
        match (seen_even, seen_odd) {
            (true, true) => Parity::Mixed,
            (false, true) => Parity::Odd,
            _ => Parity::Even,
        }
    }

    /// True iff every term has ξ-degree `r` (vacuously true for zero).
    pub fn is_homogeneous_of(&self, r: u8) -> bool {
        self.terms.keys().all(|idx| idx.parity == r)
    }

    /// Substitutes rational parameter values in every coefficient.
    pub fn substitute(&self, bindings: &BTreeMap<String, Rational>) -> Result<Vector> {
        let mut out = Vector::zero(&self.family, &self.ring);
        for (idx, c) in &self.terms {
            out.add_term(idx.clone(), c.substitute(bindings)?);
        }
        Ok(out)
    }

    /// Restricts to the window; the flag reports whether any term was
    /// dropped.
    pub fn window_project(&self, w: &WindowSpec) -> (Vector, bool) {
        let mut out = Vector::zero(&self.family, &self.ring);
        let mut leaked = false;
        for (idx, c) in &self.terms {
            if w.contains(idx, &self.family) {
                out.add_term(idx.clone(), c.clone());
            } else {
                leaked = true;
            }
        }
        (out, leaked)
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (idx, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let coeff = if c.is_one() {
                String::new()
            } else if c.term_count() > 1 {
                format!("({}) * ", c)
            } else {
                format!("{} * ", c)
            };
            write!(f, "{}{}", coeff, idx.display_with(&self.family))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{int, rat};

    fn laurent_family() -> Arc<FamilySpec> {
        Arc::new(FamilySpec::laurent(TPoly::zero()))
    }

    #[test]
    fn add_cancels_to_zero() {
        let fam = laurent_family();
        let ring = ParamRing::numeric();
        let t2 = Vector::basis(&fam, &ring, BasisIndex::t(0, 2));
        assert!(t2.try_add(&t2.neg()).unwrap().is_zero());
    }

    #[test]
    fn add_keeps_distinct_odd_terms() {
        let fam = laurent_family();
        let ring = ParamRing::numeric();
        let a = Vector::basis(&fam, &ring, BasisIndex::t(1, 0));
        let b = Vector::basis(&fam, &ring, BasisIndex::t(1, 1));
        let sum = a.try_add(&b).unwrap();
        assert_eq!(sum.term_count(), 2);
        assert_eq!(sum.parity(), Parity::Odd);
    }

    #[test]
    fn symbolic_like_terms_merge() {
        let fam = laurent_family();
        let ring = ParamRing::new(&["alpha"]).unwrap();
        let alpha = SymScalar::param(&ring, "alpha").unwrap();
        let one = SymScalar::one(&ring);
        let idx = BasisIndex::t(1, 1);
        // (alpha + 1)·ξt¹ + (−alpha)·ξt¹ = ξt¹
        let u = Vector::term(&fam, &ring, idx.clone(), alpha.try_add(&one).unwrap());
        let v = Vector::term(&fam, &ring, idx.clone(), alpha.neg());
        let sum = u.try_add(&v).unwrap();
        assert_eq!(sum, Vector::basis(&fam, &ring, idx));
    }

    #[test]
    fn scale_examples() {
        let fam = laurent_family();
        let ring = ParamRing::new(&["b", "lambda"]).unwrap();
        let t3 = Vector::basis(&fam, &ring, BasisIndex::t(0, 3));
        assert!(t3.scale(&SymScalar::zero(&ring)).is_zero());

        let b = SymScalar::param(&ring, "b").unwrap();
        let xi = Vector::basis(&fam, &ring, BasisIndex::t(1, 0));
        assert_eq!(xi.scale(&b).coeff(&BasisIndex::t(1, 0)), b);

        let l = SymScalar::param(&ring, "lambda").unwrap();
        let lt0 = Vector::term(&fam, &ring, BasisIndex::t(0, 0), l.clone());
        let unscaled = lt0.scale(&l.pow_int(-1).unwrap());
        assert_eq!(unscaled, Vector::basis(&fam, &ring, BasisIndex::t(0, 0)));
    }

    #[test]
    fn window_projection_tracks_leaks() {
        let fam = laurent_family();
        let ring = ParamRing::numeric();
        let w = WindowSpec::new(4, 0, 0, 1).unwrap();

        let t5 = Vector::basis(&fam, &ring, BasisIndex::t(0, 5));
        let (p, leaked) = t5.window_project(&w);
        assert!(p.is_zero() && leaked);

        let mixed = Vector::basis(&fam, &ring, BasisIndex::t(0, 3))
            .try_add(&Vector::basis(&fam, &ring, BasisIndex::t(1, 6)))
            .unwrap();
        let (p, leaked) = mixed.window_project(&w);
        assert_eq!(p, Vector::basis(&fam, &ring, BasisIndex::t(0, 3)));
        assert!(leaked);

        let inside = Vector::basis(&fam, &ring, BasisIndex::t(1, 2));
        let (p, leaked) = inside.window_project(&w);
        assert_eq!(p, inside);
        assert!(!leaked);
    }

    #[test]
    fn family_validation() {
        assert!(FamilySpec::degree_n(0).is_err());
        assert!(FamilySpec::degree_n(2).is_ok());

        // b0 must be zero.
        assert!(FamilySpec::fraction(vec![int(1)], vec![rat(1, 2)]).is_err());
        // poles must be distinct.
        assert!(FamilySpec::fraction(vec![int(0), int(1), int(1)], vec![rat(1, 2); 3]).is_err());
        // residues must not all be integers.
        assert!(FamilySpec::fraction(vec![int(0), int(1)], vec![int(1), int(2)]).is_err());
        assert!(FamilySpec::fraction(vec![int(0), int(1)], vec![rat(1, 2), rat(1, 2)]).is_ok());

        // lambda must be invertible.
        let ring = ParamRing::new(&["b", "lambda"]).unwrap();
        let b = SymScalar::param(&ring, "b").unwrap();
        let one = SymScalar::one(&ring);
        assert!(FamilySpec::omega(b.try_add(&one).unwrap()).is_err());
        assert!(FamilySpec::omega(SymScalar::param(&ring, "lambda").unwrap()).is_ok());
        assert!(FamilySpec::omega(SymScalar::from_int(&ring, 2)).is_ok());
    }

    #[test]
    fn window_basis_enumeration() {
        let w = WindowSpec::new(2, 5, 2, 1).unwrap();

        let fam = FamilySpec::laurent(TPoly::zero());
        let basis = w.basis(&fam, false);
        // parities 2 × tpow in {-2..2}.
        assert_eq!(basis.len(), 10);
        assert!(basis.windows(2).all(|p| p[0] < p[1]));

        let omega = FamilySpec::omega(SymScalar::from_int(&ParamRing::numeric(), 2)).unwrap();
        // parities 2 × aux in {0..5}; tpow structurally 0.
        assert_eq!(w.basis(&omega, false).len(), 12);

        let frac = FamilySpec::fraction(vec![int(0), int(1)], vec![rat(1, 2), rat(1, 2)]).unwrap();
        // parities 2 × (powers 5 + poles 2).
        assert_eq!(w.basis(&frac, false).len(), 14);
        // inner window shrinks only the t-range: 2 × (3 + 2).
        assert_eq!(w.basis(&frac, true).len(), 10);

        let deg2 = FamilySpec::degree_two(TPoly::monomial(1, SymScalar::one(&ParamRing::numeric())));
        // parities 2 × tpow 5 × aux {0,1}.
        assert_eq!(w.basis(&deg2, false).len(), 20);
    }

    #[test]
    fn display_uses_family_notation() {
        let ring = ParamRing::numeric();
        let omega = Arc::new(FamilySpec::omega(SymScalar::from_int(&ring, 2)).unwrap());
        let v = Vector::basis(&omega, &ring, BasisIndex::t_aux(1, 0, 3));
        assert_eq!(v.to_string(), "xi*Dt^3");

        let frac = Arc::new(
            FamilySpec::fraction(vec![int(0), int(1), int(-2)], vec![rat(1, 2), rat(1, 2), rat(1, 2)])
                .unwrap(),
        );
        let p = Vector::basis(&frac, &ring, BasisIndex::frac_pole(0, 2, 2, 3));
        assert_eq!(p.to_string(), "(t+2)^-2");
        let q = Vector::basis(&frac, &ring, BasisIndex::frac_pole(1, 1, 1, 3));
        assert_eq!(q.to_string(), "xi*(t-1)^-1");
    }
}
