//! The two centrally extended Lie superalgebras and their exact structure
//! tables.
//!
//! Both algebras are ℤ₂-graded with one central element `C`:
//!
//! * `R` has even `L_m`, odd `G_m` (`m ∈ ℤ`) with
//!   - `[L_m, L_n] = (n−m) L_{m+n} + ((n³−n)/12) δ_{m+n,0} C`
//!   - `[L_m, G_n] = (n − m/2) G_{m+n}`
//!   - `[G_m, G_n] = −2 L_{m+n} − ((4m²−1)/12) δ_{m+n,0} C`
//! * `T` has even `L_m`, `H_m`, odd `G⁺_m`, `G⁻_m` with
//!   - `[L_m, L_n]` as above, `[L_m, H_n] = n H_{m+n}`
//!   - `[H_m, H_n] = −(m/3) δ_{m+n,0} C`
//!   - `[L_m, G^±_n] = (n − m/2) G^±_{m+n}`, `[H_m, G^±_n] = ±G^±_{m+n}`
//!   - `[G⁺_m, G⁻_n] = −2 L_{m+n} + (m−n) H_{m+n} − (1/3)(m² − 1/4) δ_{m+n,0} C`
//!   - `[G^±_m, G^±_n] = 0`
//!
//! The sign of every central term above is forced by the graded Jacobi
//! identity given the linear terms; see the Jacobi checker and the
//! mutation-sensitivity routine, which demonstrates that flipping any
//! single structure-constant sign breaks Jacobi at small modes.
//!
//! `R` embeds into `T` by `L_m ↦ L_m`, `C ↦ C`,
//! `G_m ↦ −(1/2) G⁺_m − G⁻_m`.
//!
//! Dropping `C`, `T` is realized by exact operators on `ℂ[t^{±1}] ⊗ Λ(ξ)`:
//! `L_m = t^m (D_t + (m/2) ξ∂_ξ)`, `H_m = t^m ξ∂_ξ`,
//! `G⁺_m = −2 t^m ξ D_t`, `G⁻_m = t^m ∂_ξ`; and for each scalar `b` the
//! twist `σ_b` shifts these by multiplication operators:
//! `σ_b(L_m) = L_m + mb·t^m`, `σ_b(H_m) = H_m − 2b·t^m`,
//! `σ_b(G⁺_m) = G⁺_m − 4bm·t^m ξ`, `σ_b(G⁻_m) = G⁻_m`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;


use crate::carriers::{FamilySpec, Vector, WindowSpec};
use crate::report::Report;
use crate::scalars::{int, rat, ParamRing, Rational, SymScalar};
use crate::weyl::{OperatorExpr, WeylGen};
use crate::{Error, Result};

/// Which of the two superalgebras an element lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Algebra {
    R,
    T,
}

impl Algebra {
    /// Short display name.
    pub fn name(self) -> &'static str {
        match self {
            Algebra::R => "R",
            Algebra::T => "T",
        }
    }
}

/// Kind tag of a generator. The declaration order is the canonical
/// ordering used to orient brackets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum GenKind {
    L,
    H,
    GPlus,
    GMinus,
    G,
    C,
}

impl GenKind {
    /// ℤ₂ parity: 0 for `L`, `H`, `C`; 1 for the odd generators.
    pub fn parity(self) -> u8 {
        match self {
            GenKind::L | GenKind::H | GenKind::C => 0,
            GenKind::GPlus | GenKind::GMinus | GenKind::G => 1,
        }
    }

    /// Printable symbol.
    pub fn symbol(self) -> &'static str {
        match self {
            GenKind::L => "L",
            GenKind::H => "H",
            GenKind::GPlus => "G+",
            GenKind::GMinus => "G-",
            GenKind::G => "G",
            GenKind::C => "C",
        }
    }

    /// Whether this kind exists in the given algebra.
    pub fn allowed_in(self, a: Algebra) -> bool {
        match (a, self) {
            (_, GenKind::L | GenKind::C) => true,
            (Algebra::R, GenKind::G) => true,
            (Algebra::T, GenKind::H | GenKind::GPlus | GenKind::GMinus) => true,
            _ => false,
        }
    }
}

/// One basis generator `kind_mode` of an algebra (`C` carries mode 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Generator {
    pub algebra: Algebra,
    pub kind: GenKind,
    pub mode: i64,
}

impl Generator {
    /// Validating constructor.
    pub fn new(algebra: Algebra, kind: GenKind, mode: i64) -> Result<Generator> {
        if !kind.allowed_in(algebra) {
            return Err(Error::Config(format!(
                "generator kind {} does not exist in algebra {}",
                kind.symbol(),
                algebra.name()
            )));
        }
        if kind == GenKind::C && mode != 0 {
            return Err(Error::Config("central element C carries no mode".into()));
        }
        Ok(Generator { algebra, kind, mode })
    }

    /// ℤ₂ parity of the generator.
    pub fn parity(&self) -> u8 {
        self.kind.parity()
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.kind == GenKind::C {
            write!(f, "C")
        } else {
            write!(f, "{}_{}", self.kind.symbol(), self.mode)
        }
    }
}

/// All generators of `algebra` with `|mode| ≤ mode_bound`, plus `C`.
pub fn generators(algebra: Algebra, mode_bound: i64) -> Vec<Generator> {
    let kinds: &[GenKind] = match algebra {
        Algebra::R => &[GenKind::L, GenKind::G],
        Algebra::T => &[GenKind::L, GenKind::H, GenKind::GPlus, GenKind::GMinus],
    };
    let mut out = Vec::new();
    for &kind in kinds {
        for mode in -mode_bound..=mode_bound {
            out.push(Generator { algebra, kind, mode });
        }
    }
    out.push(Generator { algebra, kind: GenKind::C, mode: 0 });
    out
}

/// A finite scalar-linear combination of generators of one algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    algebra: Algebra,
    ring: Arc<ParamRing>,
    terms: BTreeMap<(GenKind, i64), SymScalar>,
}

impl AlgebraElement {
    /// The zero element.
    pub fn zero(algebra: Algebra, ring: &Arc<ParamRing>) -> AlgebraElement {
        AlgebraElement { algebra, ring: ring.clone(), terms: BTreeMap::new() }
    }

    /// A single generator with coefficient 1.
    pub fn gen(g: &Generator, ring: &Arc<ParamRing>) -> AlgebraElement {
        let mut e = AlgebraElement::zero(g.algebra, ring);
        e.add_term(g.kind, g.mode, SymScalar::one(ring));
        e
    }

    /// Adds `c · kind_mode` in place, pruning on cancellation.
    pub fn add_term(&mut self, kind: GenKind, mode: i64, c: SymScalar) {
        if c.is_zero() {
            return;
        }
        let key = (kind, mode);
        match self.terms.remove(&key) {
            None => {
                self.terms.insert(key, c);
            }
            Some(old) => {
                let sum = old.try_add(&c).expect("element terms share one ring");
                if !sum.is_zero() {
                    self.terms.insert(key, sum);
                }
            }
        }
    }

    /// The ambient algebra.
    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    /// The scalar ring.
    pub fn ring(&self) -> &Arc<ParamRing> {
        &self.ring
    }

    /// True iff no terms remain.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterates `((kind, mode), coefficient)` in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&(GenKind, i64), &SymScalar)> {
        self.terms.iter()
    }

    /// Coefficient of one generator (zero if absent).
    pub fn coeff(&self, kind: GenKind, mode: i64) -> SymScalar {
        self.terms.get(&(kind, mode)).cloned().unwrap_or_else(|| SymScalar::zero(&self.ring))
    }

    /// Exact sum.
    pub fn try_add(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        if self.algebra != other.algebra {
            return Err(Error::Config("cannot add elements of different algebras".into()));
        }
        let mut out = self.clone();
        for ((k, m), c) in &other.terms {
            out.add_term(*k, *m, c.clone());
        }
        Ok(out)
    }

    /// Exact difference.
    pub fn try_sub(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.try_add(&other.neg())
    }

    /// Additive inverse.
    pub fn neg(&self) -> AlgebraElement {
        AlgebraElement {
            algebra: self.algebra,
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect(),
        }
    }

    /// Scales by a symbolic scalar.
    pub fn scale(&self, c: &SymScalar) -> AlgebraElement {
        let mut out = AlgebraElement::zero(self.algebra, &self.ring);
        for ((k, m), coeff) in &self.terms {
            out.add_term(*k, *m, coeff.try_mul(c).expect("element terms share one ring"));
        }
        out
    }

    /// Scales by a rational constant.
    pub fn scale_q(&self, q: &Rational) -> AlgebraElement {
        use num::Zero;
        if q.is_zero() {
            return AlgebraElement::zero(self.algebra, &self.ring);
        }
        AlgebraElement {
            algebra: self.algebra,
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(k, c)| (*k, c.scale(q))).collect(),
        }
    }

    /// Drops the central term (used when passing to centerless realizations).
    pub fn drop_central(&self) -> AlgebraElement {
        let mut out = self.clone();
        out.terms.retain(|(k, _), _| *k != GenKind::C);
        out
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((kind, mode), c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let gen = if *kind == GenKind::C {
                "C".to_string()
            } else {
                format!("{}_{}", kind.symbol(), mode)
            };
            if c.is_one() {
                write!(f, "{gen}")?;
            } else if c.term_count() > 1 {
                write!(f, "({c})*{gen}")?;
            } else {
                write!(f, "{c}*{gen}")?;
            }
        }
        Ok(())
    }
}

/// Address of one sign in the structure tables. Flipping a site negates
/// that term in every bracket that uses it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum TermSite {
    RLlLinear,
    RLlCentral,
    RLgLinear,
    RGgLinear,
    RGgCentral,
    TLlLinear,
    TLlCentral,
    TLhLinear,
    THhCentral,
    TLgpLinear,
    TLgmLinear,
    THgpLinear,
    THgmLinear,
    TGpGmL,
    TGpGmH,
    TGpGmCentral,
}

impl TermSite {
    /// Every sign site, in a fixed order.
    pub const ALL: [TermSite; 16] = [
        TermSite::RLlLinear,
        TermSite::RLlCentral,
        TermSite::RLgLinear,
        TermSite::RGgLinear,
        TermSite::RGgCentral,
        TermSite::TLlLinear,
        TermSite::TLlCentral,
        TermSite::TLhLinear,
        TermSite::THhCentral,
        TermSite::TLgpLinear,
        TermSite::TLgmLinear,
        TermSite::THgpLinear,
        TermSite::THgmLinear,
        TermSite::TGpGmL,
        TermSite::TGpGmH,
        TermSite::TGpGmCentral,
    ];

    /// Which algebra's table the site belongs to.
    pub fn algebra(self) -> Algebra {
        match self {
            TermSite::RLlLinear
            | TermSite::RLlCentral
            | TermSite::RLgLinear
            | TermSite::RGgLinear
            | TermSite::RGgCentral => Algebra::R,
            _ => Algebra::T,
        }
    }

    /// Human-readable label (`algebra:[x,y]→term`).
    pub fn label(self) -> &'static str {
        match self {
            TermSite::RLlLinear => "R:[L,L]->L",
            TermSite::RLlCentral => "R:[L,L]->C",
            TermSite::RLgLinear => "R:[L,G]->G",
            TermSite::RGgLinear => "R:[G,G]->L",
            TermSite::RGgCentral => "R:[G,G]->C",
            TermSite::TLlLinear => "T:[L,L]->L",
            TermSite::TLlCentral => "T:[L,L]->C",
            TermSite::TLhLinear => "T:[L,H]->H",
            TermSite::THhCentral => "T:[H,H]->C",
            TermSite::TLgpLinear => "T:[L,G+]->G+",
            TermSite::TLgmLinear => "T:[L,G-]->G-",
            TermSite::THgpLinear => "T:[H,G+]->G+",
            TermSite::THgmLinear => "T:[H,G-]->G-",
            TermSite::TGpGmL => "T:[G+,G-]->L",
            TermSite::TGpGmH => "T:[G+,G-]->H",
            TermSite::TGpGmCentral => "T:[G+,G-]->C",
        }
    }
}

/// A structure table: the standard one, possibly with some signs flipped.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StructureTable {
    flips: BTreeSet<TermSite>,
}

impl StructureTable {
    /// The verified table (no flips).
    pub fn standard() -> StructureTable {
        StructureTable { flips: BTreeSet::new() }
    }

    /// The standard table with one sign negated.
    pub fn flipped(site: TermSite) -> StructureTable {
        let mut flips = BTreeSet::new();
        flips.insert(site);
        StructureTable { flips }
    }

    /// True iff no sign is flipped.
    pub fn is_standard(&self) -> bool {
        self.flips.is_empty()
    }

    fn sign(&self, site: TermSite) -> i64 {
        if self.flips.contains(&site) {
            -1
        } else {
            1
        }
    }
}

fn delta(m: i64, n: i64) -> bool {
    m + n == 0
}

/// Bracket of two basis generators under `table`.
pub fn bracket_gen(
    table: &StructureTable,
    ring: &Arc<ParamRing>,
    a: &Generator,
    b: &Generator,
) -> Result<AlgebraElement> {
    if a.algebra != b.algebra {
        return Err(Error::Config("bracket of generators from different algebras".into()));
    }
    let alg = a.algebra;
    let mut out = AlgebraElement::zero(alg, ring);
    if a.kind == GenKind::C || b.kind == GenKind::C {
        return Ok(out);
    }
    // Orient via super-antisymmetry: [a,b] = −(−1)^{|a||b|} [b,a].
    if a.kind > b.kind {
        let swapped = bracket_gen(table, ring, b, a)?;
        let sign = if a.parity() == 1 && b.parity() == 1 { 1 } else { -1 };
        return Ok(swapped.scale_q(&int(sign)));
    }
    let (m, n) = (a.mode, b.mode);
    let q = |x: Rational| SymScalar::from_rational(ring, x);
    match (alg, a.kind, b.kind) {
        (Algebra::R, GenKind::L, GenKind::L) | (Algebra::T, GenKind::L, GenKind::L) => {
            let (lin, cen) = match alg {
                Algebra::R => (TermSite::RLlLinear, TermSite::RLlCentral),
                Algebra::T => (TermSite::TLlLinear, TermSite::TLlCentral),
            };
            out.add_term(GenKind::L, m + n, q(int((n - m) * table.sign(lin))));
            if delta(m, n) {
                out.add_term(GenKind::C, 0, q(rat((n * n * n - n) * table.sign(cen), 12)));
            }
        }
        (Algebra::R, GenKind::L, GenKind::G) => {
            let s = table.sign(TermSite::RLgLinear);
            out.add_term(GenKind::G, m + n, q(rat((2 * n - m) * s, 2)));
        }
        (Algebra::R, GenKind::G, GenKind::G) => {
            out.add_term(GenKind::L, m + n, q(int(-2 * table.sign(TermSite::RGgLinear))));
            if delta(m, n) {
                let s = table.sign(TermSite::RGgCentral);
                out.add_term(GenKind::C, 0, q(rat(-(4 * m * m - 1) * s, 12)));
            }
        }
        (Algebra::T, GenKind::L, GenKind::H) => {
            out.add_term(GenKind::H, m + n, q(int(n * table.sign(TermSite::TLhLinear))));
        }
        (Algebra::T, GenKind::H, GenKind::H) => {
            if delta(m, n) {
                out.add_term(GenKind::C, 0, q(rat(-m * table.sign(TermSite::THhCentral), 3)));
            }
        }
        (Algebra::T, GenKind::L, GenKind::GPlus) => {
            let s = table.sign(TermSite::TLgpLinear);
            out.add_term(GenKind::GPlus, m + n, q(rat((2 * n - m) * s, 2)));
        }
        (Algebra::T, GenKind::L, GenKind::GMinus) => {
            let s = table.sign(TermSite::TLgmLinear);
            out.add_term(GenKind::GMinus, m + n, q(rat((2 * n - m) * s, 2)));
        }
        (Algebra::T, GenKind::H, GenKind::GPlus) => {
            out.add_term(GenKind::GPlus, m + n, q(int(table.sign(TermSite::THgpLinear))));
        }
        (Algebra::T, GenKind::H, GenKind::GMinus) => {
            out.add_term(GenKind::GMinus, m + n, q(int(-table.sign(TermSite::THgmLinear))));
        }
        (Algebra::T, GenKind::GPlus, GenKind::GPlus)
        | (Algebra::T, GenKind::GMinus, GenKind::GMinus) => {}
        (Algebra::T, GenKind::GPlus, GenKind::GMinus) => {
            out.add_term(GenKind::L, m + n, q(int(-2 * table.sign(TermSite::TGpGmL))));
            out.add_term(GenKind::H, m + n, q(int((m - n) * table.sign(TermSite::TGpGmH))));
            if delta(m, n) {
                let s = table.sign(TermSite::TGpGmCentral);
                out.add_term(GenKind::C, 0, q(rat(-(4 * m * m - 1) * s, 12)));
            }
        }
        _ => {
            return Err(Error::Config(format!(
                "generator kinds {}/{} invalid in algebra {}",
                a.kind.symbol(),
                b.kind.symbol(),
                alg.name()
            )));
        }
    }
    Ok(out)
}

/// Bilinear extension of the bracket to elements, under `table`.
pub fn bracket_with(
    table: &StructureTable,
    x: &AlgebraElement,
    y: &AlgebraElement,
) -> Result<AlgebraElement> {
    if x.algebra != y.algebra {
        return Err(Error::Config("bracket of elements from different algebras".into()));
    }
    let ring = x.ring().clone();
    let mut out = AlgebraElement::zero(x.algebra, &ring);
    for ((ka, ma), ca) in x.terms() {
        for ((kb, mb), cb) in y.terms() {
            let ga = Generator { algebra: x.algebra, kind: *ka, mode: *ma };
            let gb = Generator { algebra: x.algebra, kind: *kb, mode: *mb };
            let br = bracket_gen(table, &ring, &ga, &gb)?;
            out = out.try_add(&br.scale(&ca.try_mul(cb)?))?;
        }
    }
    Ok(out)
}

/// Bracket of elements under the standard table.
pub fn bracket(x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
    bracket_with(&StructureTable::standard(), x, y)
}

/// Graded Jacobi sum
/// `(−1)^{|x||z|}[x,[y,z]] + (−1)^{|y||x|}[y,[z,x]] + (−1)^{|z||y|}[z,[x,y]]`
/// for basis generators.
fn jacobi_sum(
    table: &StructureTable,
    ring: &Arc<ParamRing>,
    x: &Generator,
    y: &Generator,
    z: &Generator,
) -> Result<AlgebraElement> {
    let sgn = |p: u8, q2: u8| if p == 1 && q2 == 1 { int(-1) } else { int(1) };
    let gx = AlgebraElement::gen(x, ring);
    let gy = AlgebraElement::gen(y, ring);
    let gz = AlgebraElement::gen(z, ring);
    let t1 = bracket_with(table, &gx, &bracket_gen(table, ring, y, z)?)?
        .scale_q(&sgn(x.parity(), z.parity()));
    let t2 = bracket_with(table, &gy, &bracket_gen(table, ring, z, x)?)?
        .scale_q(&sgn(y.parity(), x.parity()));
    let t3 = bracket_with(table, &gz, &bracket_gen(table, ring, x, y)?)?
        .scale_q(&sgn(z.parity(), y.parity()));
    t1.try_add(&t2)?.try_add(&t3)
}

/// Verifies super-antisymmetry and the graded Jacobi identity for every
/// generator triple with `|mode| ≤ mode_bound` (plus `C`), under `table`.
pub fn check_super_jacobi(
    algebra: Algebra,
    mode_bound: i64,
    table: &StructureTable,
) -> Result<Report> {
    let ring = ParamRing::numeric();
    let gens = generators(algebra, mode_bound);
    let mut report = Report::new("verify-algebra", "super-jacobi");
    report
        .describe("algebra", algebra.name())
        .describe("mode-bound", mode_bound)
        .describe("table", if table.is_standard() { "standard".into() } else { format!("{:?}", table.flips) });
    for a in &gens {
        for b in &gens {
            // Super-antisymmetry: [a,b] + (−1)^{|a||b|}[b,a] = 0.
            let ab = bracket_gen(table, &ring, a, b)?;
            let ba = bracket_gen(table, &ring, b, a)?;
            let sgn = if a.parity() == 1 && b.parity() == 1 { int(1) } else { int(-1) };
            let anti = ab.try_sub(&ba.scale_q(&sgn))?;
            report.bump("pairs");
            if !anti.is_zero() {
                report.fail(format!("antisymmetry ({a}, {b})"), anti);
            }
        }
    }
    for x in &gens {
        for y in &gens {
            for z in &gens {
                let j = jacobi_sum(table, &ring, x, y, z)?;
                report.bump("triples");
                if !j.is_zero() {
                    report.fail(format!("jacobi ({x}, {y}, {z})"), j);
                }
            }
        }
    }
    Ok(report)
}

/// The embedding `R → T`: `L_m ↦ L_m`, `C ↦ C`,
/// `G_m ↦ −(1/2)·G⁺_m − G⁻_m`.
pub fn phi_gen(g: &Generator, ring: &Arc<ParamRing>) -> Result<AlgebraElement> {
    if g.algebra != Algebra::R {
        return Err(Error::Config("the embedding is defined on R generators".into()));
    }
    let mut out = AlgebraElement::zero(Algebra::T, ring);
    match g.kind {
        GenKind::L => out.add_term(GenKind::L, g.mode, SymScalar::one(ring)),
        GenKind::C => out.add_term(GenKind::C, 0, SymScalar::one(ring)),
        GenKind::G => {
            out.add_term(GenKind::GPlus, g.mode, SymScalar::from_rational(ring, rat(-1, 2)));
            out.add_term(GenKind::GMinus, g.mode, SymScalar::from_int(ring, -1));
        }
        _ => unreachable!("R has only L, G, C"),
    }
    Ok(out)
}

/// Linear extension of the embedding to elements of `R`.
pub fn phi_element(x: &AlgebraElement) -> Result<AlgebraElement> {
    if x.algebra != Algebra::R {
        return Err(Error::Config("the embedding is defined on R elements".into()));
    }
    let ring = x.ring().clone();
    let mut out = AlgebraElement::zero(Algebra::T, &ring);
    for ((k, m), c) in x.terms() {
        let g = Generator { algebra: Algebra::R, kind: *k, mode: *m };
        out = out.try_add(&phi_gen(&g, &ring)?.scale(c))?;
    }
    Ok(out)
}

/// Verifies `Φ([x,y]) = [Φ(x), Φ(y)]` for all `R` generator pairs with
/// `|mode| ≤ mode_bound`, and that `Φ` maps distinct basis generators to
/// linearly independent images.
pub fn check_phi_homomorphism(mode_bound: i64) -> Result<Report> {
    let ring = ParamRing::numeric();
    let gens = generators(Algebra::R, mode_bound);
    let table = StructureTable::standard();
    let mut report = Report::new("verify-phi", "embedding-homomorphism");
    report.describe("mode-bound", mode_bound);
    for a in &gens {
        for b in &gens {
            let lhs = phi_element(&bracket_gen(&table, &ring, a, b)?)?;
            let rhs = bracket_with(&table, &phi_gen(a, &ring)?, &phi_gen(b, &ring)?)?;
            let diff = lhs.try_sub(&rhs)?;
            report.bump("pairs");
            if !diff.is_zero() {
                report.fail(format!("({a}, {b})"), diff);
            }
        }
    }
    // Injectivity on the spanned window: each image is nonzero and images
    // of distinct generators have disjoint leading supports.
    let mut leading = BTreeSet::new();
    for g in &gens {
        let img = phi_gen(g, &ring)?;
        report.bump("generators");
        let first_key = img.terms().next().map(|(key, _)| *key);
        match first_key {
            None => {
                report.fail(format!("image of {g}"), "0");
            }
            Some(key) => {
                if !leading.insert(key) {
                    report.fail(format!("image of {g}"), "duplicate leading generator");
                }
            }
        }
    }
    Ok(report)
}

/// The centerless operator realization of a `T` generator.
pub fn witt_op(g: &Generator, ring: &Arc<ParamRing>) -> Result<OperatorExpr> {
    if g.algebra != Algebra::T {
        return Err(Error::Config("the operator realization is defined for T".into()));
    }
    let m = g.mode;
    let mut op = OperatorExpr::new();
    match g.kind {
        GenKind::L => {
            op.push(SymScalar::one(ring), vec![WeylGen::Tpow(m), WeylGen::Dt]);
            op.push(
                SymScalar::from_rational(ring, rat(m, 2)),
                vec![WeylGen::Tpow(m), WeylGen::Xi, WeylGen::DXi],
            );
        }
        GenKind::H => {
            op.push(SymScalar::one(ring), vec![WeylGen::Tpow(m), WeylGen::Xi, WeylGen::DXi]);
        }
        GenKind::GPlus => {
            op.push(
                SymScalar::from_int(ring, -2),
                vec![WeylGen::Tpow(m), WeylGen::Xi, WeylGen::Dt],
            );
        }
        GenKind::GMinus => {
            op.push(SymScalar::one(ring), vec![WeylGen::Tpow(m), WeylGen::DXi]);
        }
        GenKind::C => {}
        _ => unreachable!("T has only L, H, G+, G-, C"),
    }
    Ok(op)
}

/// The `σ_b`-twisted realization: the centerless realization shifted by
/// multiplication operators proportional to `b`.
pub fn twisted_op(g: &Generator, b: &SymScalar) -> Result<OperatorExpr> {
    let ring = b.ring().clone();
    let mut op = witt_op(g, &ring)?;
    let m = g.mode;
    match g.kind {
        GenKind::L => {
            op.push(b.scale(&int(m)), vec![WeylGen::Tpow(m)]);
        }
        GenKind::H => {
            op.push(b.scale(&int(-2)), vec![WeylGen::Tpow(m)]);
        }
        GenKind::GPlus => {
            op.push(b.scale(&int(-4 * m)), vec![WeylGen::Tpow(m), WeylGen::Xi]);
        }
        GenKind::GMinus | GenKind::C => {}
        _ => unreachable!("T has only L, H, G+, G-, C"),
    }
    Ok(op)
}

/// Applies the realization of an element (central part dropped).
fn element_action(
    x: &AlgebraElement,
    v: &Vector,
    realize: &dyn Fn(&Generator) -> Result<OperatorExpr>,
) -> Result<Vector> {
    let mut out = Vector::zero(v.family(), v.ring());
    for ((k, m), c) in x.drop_central().terms() {
        let g = Generator { algebra: x.algebra(), kind: *k, mode: *m };
        let img = realize(&g)?.apply(v)?.scale(c);
        out = out.try_add(&img)?;
    }
    Ok(out)
}

/// Super-commutator of two realized generators applied to `v`.
fn realized_commutator(
    a: &Generator,
    b: &Generator,
    v: &Vector,
    realize: &dyn Fn(&Generator) -> Result<OperatorExpr>,
) -> Result<Vector> {
    let op_a = realize(a)?;
    let op_b = realize(b)?;
    let ab = op_a.apply(&op_b.apply(v)?)?;
    let ba = op_b.apply(&op_a.apply(v)?)?;
    let sign = if a.parity() == 1 && b.parity() == 1 { int(1) } else { int(-1) };
    ab.try_add(&ba.scale_q(&sign))
}

fn check_realization_with(
    check: &str,
    anchor: &str,
    realize: &dyn Fn(&Generator) -> Result<OperatorExpr>,
    family: &Arc<FamilySpec>,
    ring: &Arc<ParamRing>,
    mode_bound: i64,
    window: &WindowSpec,
) -> Result<Report> {
    let mut report = Report::new(check, anchor);
    report
        .describe("algebra", "T (centerless)")
        .describe("family", family.tag())
        .describe("mode-bound", mode_bound);
    let table = StructureTable::standard();
    let gens: Vec<Generator> = generators(Algebra::T, mode_bound)
        .into_iter()
        .filter(|g| g.kind != GenKind::C)
        .collect();
    let basis = window.basis(family, false);
    for a in &gens {
        for b in &gens {
            let expected = bracket_gen(&table, ring, a, b)?;
            for idx in &basis {
                let v = Vector::basis(family, ring, idx.clone());
                let lhs = realized_commutator(a, b, &v, realize)?;
                let rhs = element_action(&expected, &v, realize)?;
                let diff = lhs.try_sub(&rhs)?;
                report.bump("instances");
                if !diff.is_zero() {
                    report.fail(
                        format!("([{a}, {b}] on {})", idx.display_with(family)),
                        diff,
                    );
                }
            }
        }
    }
    Ok(report)
}

/// Verifies that the centerless realization satisfies every `T` bracket
/// (with `C = 0`) on all window basis vectors of the given carrier.
pub fn check_realization(
    family: &Arc<FamilySpec>,
    ring: &Arc<ParamRing>,
    mode_bound: i64,
    window: &WindowSpec,
) -> Result<Report> {
    let realize = |g: &Generator| witt_op(g, ring);
    check_realization_with("verify-algebra", "witt-realization", &realize, family, ring, mode_bound, window)
}

/// Verifies that the twist `σ_b` preserves every centerless `T` bracket:
/// `[σ_b(x), σ_b(y)] = σ_b([x, y])` on all window basis vectors.
pub fn check_twist(
    b: &SymScalar,
    family: &Arc<FamilySpec>,
    mode_bound: i64,
    window: &WindowSpec,
) -> Result<Report> {
    let ring = b.ring().clone();
    let realize = move |g: &Generator| twisted_op(g, b);
    let mut report = check_realization_with(
        "verify-twist",
        "twist-automorphism",
        &realize,
        family,
        &ring,
        mode_bound,
        window,
    )?;
    report.describe("b", b);
    Ok(report)
}

/// Flips each structure-table sign in turn and confirms the Jacobi checker
/// rejects every mutant at small modes.
pub fn check_mutation_sensitivity(mode_bound: i64) -> Result<Report> {
    let mut report = Report::new("verify-algebra", "mutation-sensitivity");
    report.describe("mode-bound", mode_bound);
    for site in TermSite::ALL {
        let mutant = StructureTable::flipped(site);
        let sub = check_super_jacobi(site.algebra(), mode_bound, &mutant)?;
        report.bump("mutants");
        if sub.is_pass() {
            report.fail(site.label(), "mutant passed the Jacobi check");
        } else {
            report.bump("detected");
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carriers::TPoly;

    fn r_gen(kind: GenKind, mode: i64) -> Generator {
        Generator::new(Algebra::R, kind, mode).unwrap()
    }

    fn t_gen(kind: GenKind, mode: i64) -> Generator {
        Generator::new(Algebra::T, kind, mode).unwrap()
    }

    #[test]
    fn generator_validation() {
        assert!(Generator::new(Algebra::R, GenKind::H, 1).is_err());
        assert!(Generator::new(Algebra::R, GenKind::GPlus, 1).is_err());
        assert!(Generator::new(Algebra::T, GenKind::G, 1).is_err());
        assert!(Generator::new(Algebra::T, GenKind::C, 2).is_err());
        assert!(Generator::new(Algebra::T, GenKind::C, 0).is_ok());
    }

    #[test]
    fn virasoro_bracket_with_central_charge() {
        let ring = ParamRing::numeric();
        let table = StructureTable::standard();
        // [L_2, L_{−2}] = −4 L_0 − (1/2) C
        let out = bracket_gen(&table, &ring, &r_gen(GenKind::L, 2), &r_gen(GenKind::L, -2)).unwrap();
        assert_eq!(out.coeff(GenKind::L, 0), SymScalar::from_int(&ring, -4));
        assert_eq!(out.coeff(GenKind::C, 0), SymScalar::from_rational(&ring, rat(-1, 2)));
    }

    #[test]
    fn odd_odd_brackets() {
        let ring = ParamRing::numeric();
        let table = StructureTable::standard();

        // [G_1, G_{−1}] = −2 L_0 − (1/4) C. The central sign is forced:
        // with +(1/4) C the triple (L_2, G_1, G_{−3}) violates Jacobi.
        let out = bracket_gen(&table, &ring, &r_gen(GenKind::G, 1), &r_gen(GenKind::G, -1)).unwrap();
        assert_eq!(out.coeff(GenKind::L, 0), SymScalar::from_int(&ring, -2));
        assert_eq!(out.coeff(GenKind::C, 0), SymScalar::from_rational(&ring, rat(-1, 4)));

        // [G⁺_1, G⁻_{−1}] = −2 L_0 + 2 H_0 − (1/4) C
        let out =
            bracket_gen(&table, &ring, &t_gen(GenKind::GPlus, 1), &t_gen(GenKind::GMinus, -1))
                .unwrap();
        assert_eq!(out.coeff(GenKind::L, 0), SymScalar::from_int(&ring, -2));
        assert_eq!(out.coeff(GenKind::H, 0), SymScalar::from_int(&ring, 2));
        assert_eq!(out.coeff(GenKind::C, 0), SymScalar::from_rational(&ring, rat(-1, 4)));

        // [G^±, G^±] = 0
        let pp = bracket_gen(&table, &ring, &t_gen(GenKind::GPlus, 2), &t_gen(GenKind::GPlus, -2))
            .unwrap();
        assert!(pp.is_zero());
        let mm =
            bracket_gen(&table, &ring, &t_gen(GenKind::GMinus, 1), &t_gen(GenKind::GMinus, 0))
                .unwrap();
        assert!(mm.is_zero());
    }

    #[test]
    fn mixed_brackets_in_t() {
        let ring = ParamRing::numeric();
        let table = StructureTable::standard();
        // [L_2, H_{−1}] = −H_1
        let out = bracket_gen(&table, &ring, &t_gen(GenKind::L, 2), &t_gen(GenKind::H, -1)).unwrap();
        assert_eq!(out.coeff(GenKind::H, 1), SymScalar::from_int(&ring, -1));
        // [H_2, H_{−2}] = −(2/3) C
        let out = bracket_gen(&table, &ring, &t_gen(GenKind::H, 2), &t_gen(GenKind::H, -2)).unwrap();
        assert_eq!(out.coeff(GenKind::C, 0), SymScalar::from_rational(&ring, rat(-2, 3)));
        // [H_1, G⁻_2] = −G⁻_3
        let out =
            bracket_gen(&table, &ring, &t_gen(GenKind::H, 1), &t_gen(GenKind::GMinus, 2)).unwrap();
        assert_eq!(out.coeff(GenKind::GMinus, 3), SymScalar::from_int(&ring, -1));
    }

    #[test]
    fn jacobi_holds_for_standard_tables() {
        for algebra in [Algebra::R, Algebra::T] {
            let rep = check_super_jacobi(algebra, 3, &StructureTable::standard()).unwrap();
            assert!(rep.is_pass(), "{}", rep.to_json());
        }
    }

    #[test]
    fn opposite_central_signs_fail_jacobi() {
        // Flipping the [G,G] central sign (the other sign convention)
        // breaks Jacobi already at small modes.
        let rep =
            check_super_jacobi(Algebra::R, 3, &StructureTable::flipped(TermSite::RGgCentral))
                .unwrap();
        assert!(!rep.is_pass());
        let rep =
            check_super_jacobi(Algebra::T, 3, &StructureTable::flipped(TermSite::TGpGmCentral))
                .unwrap();
        assert!(!rep.is_pass());
    }

    #[test]
    fn every_single_sign_flip_is_detected() {
        let rep = check_mutation_sensitivity(2).unwrap();
        assert!(rep.is_pass(), "{}", rep.to_json());
        assert_eq!(rep.counts["mutants"], 16);
        assert_eq!(rep.counts["detected"], 16);
    }

    #[test]
    fn embedding_maps_odd_generator_to_mixture() {
        let ring = ParamRing::numeric();
        let img = phi_gen(&r_gen(GenKind::G, 3), &ring).unwrap();
        assert_eq!(img.coeff(GenKind::GPlus, 3), SymScalar::from_rational(&ring, rat(-1, 2)));
        assert_eq!(img.coeff(GenKind::GMinus, 3), SymScalar::from_int(&ring, -1));
        assert_eq!(img.to_string(), "-1/2*G+_3 + -1*G-_3");

        let rep = check_phi_homomorphism(2).unwrap();
        assert!(rep.is_pass(), "{}", rep.to_json());
    }

    #[test]
    fn realization_and_twist_hold_on_small_window() {
        let ring = ParamRing::new(&["alpha", "b"]).unwrap();
        let alpha = SymScalar::param(&ring, "alpha").unwrap();
        let family = Arc::new(FamilySpec::laurent(TPoly::constant(alpha)));
        let window = WindowSpec::new(5, 0, 0, 2).unwrap();

        let rep = check_realization(&family, &ring, 2, &window).unwrap();
        assert!(rep.is_pass(), "{}", rep.to_json());

        let b = SymScalar::param(&ring, "b").unwrap();
        let rep = check_twist(&b, &family, 2, &window).unwrap();
        assert!(rep.is_pass(), "{}", rep.to_json());
    }
}
