//! Left action of the Weyl superalgebra generators on each carrier family.
//!
//! The even generators are `t^m` (`m ∈ ℤ`), `D_t = t·d/dt`, and `d/dt`;
//! the odd generators are `ξ` and `∂_ξ` with `ξ² = ∂_ξ² = 0` and
//! `∂_ξ ξ + ξ ∂_ξ = 1`. Each family stores canonical basis words, and
//! acting on the left by a generator rewrites the result back into basis
//! form using the family's defining relation:
//!
//! * `LaurentSeries`: `D_t · t^k ξ^r = (α(t) + k) t^k ξ^r`.
//! * `OmegaLambda`: `t^m · D_t^n ξ^r = λ^m (D_t − m)^n ξ^r`.
//! * `DegreeTwo`: a rightmost `D_t²` folds to multiplication by `f(t)`.
//! * `DegreeN`: a rightmost `(d/dt)^n` folds to multiplication by `t`.
//! * `Fraction`: `d/dt` differentiates and adds `Σᵢ αᵢ/(t−bᵢ)`, with
//!   products of poles split by exact partial fractions.
//!
//! `D_t` is primitive for the first three families (`d/dt = t⁻¹ D_t`);
//! `d/dt` is primitive for the last two (`D_t = t ∘ d/dt`). The fold rules
//! are right-ideal reductions: they apply only when the relation word
//! reaches the right end of a basis word, so e.g. `(d/dt)^n · u = t · u`
//! holds for the cyclic vector `u = 1` but not for general `u`.

use num::{BigInt, BigRational};
use num_integer::binomial;

use crate::carriers::{BasisIndex, FamilySpec, Vector};
use crate::scalars::{Rational, SymScalar};
use crate::{Error, Result};

/// One multiplicative generator of the Weyl superalgebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeylGen {
    /// Multiplication by `t^m`.
    Tpow(i64),
    /// The Euler operator `D_t = t · d/dt`.
    Dt,
    /// The plain derivative `d/dt`.
    DDt,
    /// Multiplication by `ξ`.
    Xi,
    /// The odd derivative `∂_ξ`.
    DXi,
}

/// Applies one generator to a vector, returning the exact rewritten result.
pub fn weyl_apply(g: WeylGen, v: &Vector) -> Result<Vector> {
    let family = v.family().clone();
    let ring = v.ring().clone();
    let mut out = Vector::zero(&family, &ring);
    match g {
        WeylGen::Xi => {
            for (idx, c) in v.terms() {
                if idx.parity == 0 {
                    let mut up = idx.clone();
                    up.parity = 1;
                    out.add_term(up, c.clone());
                }
            }
        }
        WeylGen::DXi => {
            for (idx, c) in v.terms() {
                if idx.parity == 1 {
                    let mut down = idx.clone();
                    down.parity = 0;
                    out.add_term(down, c.clone());
                }
            }
        }
        WeylGen::Tpow(0) => out = v.clone(),
        WeylGen::Tpow(m) => match family.as_ref() {
            FamilySpec::OmegaLambda { lambda } => {
                let lam_m = lambda
                    .pow_int(i32::try_from(m).map_err(|_| {
                        Error::Config(format!("t-power exponent {m} out of range"))
                    })?)?;
                for (idx, c) in v.terms() {
                    let shifted = shift_dt_power(&ring, idx, m)?;
                    let scaled = c.try_mul(&lam_m)?;
                    for (jdx, q) in shifted {
                        out.add_term(jdx, scaled.scale(&q));
                    }
                }
            }
            FamilySpec::Fraction { poles, .. } => {
                for (idx, c) in v.terms() {
                    if idx.poles.iter().all(|&j| j == 0) {
                        let mut up = idx.clone();
                        up.tpow += m;
                        out.add_term(up, c.clone());
                    } else {
                        let mut part = Vector::term(&family, &ring, idx.clone(), c.clone());
                        if m > 0 {
                            for _ in 0..m {
                                part = frac_mul_t(&part)?;
                            }
                        } else {
                            for _ in 0..(-m) {
                                part = frac_mul_pole(&part, 0, poles)?;
                            }
                        }
                        out = out.try_add(&part)?;
                    }
                }
            }
            _ => {
                for (idx, c) in v.terms() {
                    let mut up = idx.clone();
                    up.tpow += m;
                    out.add_term(up, c.clone());
                }
            }
        },
        WeylGen::Dt => match family.as_ref() {
            FamilySpec::LaurentSeries { alpha } => {
                for (idx, c) in v.terms() {
                    for (j, a) in alpha.terms() {
                        let mut up = idx.clone();
                        up.tpow += j;
                        out.add_term(up, c.try_mul(a)?);
                    }
                    out.add_term(idx.clone(), c.scale(&int_q(idx.tpow)));
                }
            }
            FamilySpec::OmegaLambda { .. } => {
                for (idx, c) in v.terms() {
                    let mut up = idx.clone();
                    up.aux += 1;
                    out.add_term(up, c.clone());
                }
            }
            FamilySpec::DegreeTwo { f } => {
                for (idx, c) in v.terms() {
                    if idx.aux == 0 {
                        // D_t·ξ^r t^k = ξ^r t^k (D_t + k)
                        out.add_term(BasisIndex::t_aux(idx.parity, idx.tpow, 1), c.clone());
                        out.add_term(idx.clone(), c.scale(&int_q(idx.tpow)));
                    } else {
                        // D_t·ξ^r t^k D_t = ξ^r t^k (f(t) + k D_t)
                        debug_assert_eq!(idx.aux, 1);
                        for (j, a) in f.terms() {
                            out.add_term(
                                BasisIndex::t_aux(idx.parity, idx.tpow + j, 0),
                                c.try_mul(a)?,
                            );
                        }
                        out.add_term(idx.clone(), c.scale(&int_q(idx.tpow)));
                    }
                }
            }
            // D_t = t ∘ d/dt for the families whose primitive is d/dt.
            FamilySpec::DegreeN { .. } | FamilySpec::Fraction { .. } => {
                out = weyl_apply(WeylGen::Tpow(1), &weyl_apply(WeylGen::DDt, v)?)?;
            }
        },
        WeylGen::DDt => match family.as_ref() {
            FamilySpec::DegreeN { n } => {
                for (idx, c) in v.terms() {
                    debug_assert!(idx.aux < *n, "degree-n carrier holds aux <= n-1");
                    // d/dt·ξ^r t^p δ^a = p ξ^r t^{p−1} δ^a + ξ^r t^p δ^{a+1},
                    // and a rightmost δ^n folds to t.
                    out.add_term(
                        BasisIndex::t_aux(idx.parity, idx.tpow - 1, idx.aux),
                        c.scale(&int_q(idx.tpow)),
                    );
                    if idx.aux + 1 < *n {
                        out.add_term(BasisIndex::t_aux(idx.parity, idx.tpow, idx.aux + 1), c.clone());
                    } else {
                        out.add_term(BasisIndex::t_aux(idx.parity, idx.tpow + 1, 0), c.clone());
                    }
                }
            }
            FamilySpec::Fraction { poles, residues } => {
                for (idx, c) in v.terms() {
                    let term = Vector::term(&family, &ring, idx.clone(), c.clone());
                    out = out.try_add(&frac_derivative(&term)?)?;
                    for (slot, a) in residues.iter().enumerate() {
                        let scaled = frac_mul_pole(&term, slot, poles)?.scale_q(a);
                        out = out.try_add(&scaled)?;
                    }
                }
            }
            // d/dt = t⁻¹ ∘ D_t for the families whose primitive is D_t.
            _ => {
                out = weyl_apply(WeylGen::Tpow(-1), &weyl_apply(WeylGen::Dt, v)?)?;
            }
        },
    }
    Ok(out)
}

/// Applies a word of generators, rightmost factor first.
pub fn weyl_word_apply(word: &[WeylGen], v: &Vector) -> Result<Vector> {
    let mut cur = v.clone();
    for g in word.iter().rev() {
        cur = weyl_apply(*g, &cur)?;
    }
    Ok(cur)
}

/// A finite sum `Σ cᵢ · wᵢ` of scalar-weighted generator words.
#[derive(Debug, Clone, Default)]
pub struct OperatorExpr {
    terms: Vec<(SymScalar, Vec<WeylGen>)>,
}

impl OperatorExpr {
    /// The zero operator.
    pub fn new() -> OperatorExpr {
        OperatorExpr { terms: Vec::new() }
    }

    /// Adds the term `c · word` (words apply rightmost-first).
    pub fn push(&mut self, c: SymScalar, word: Vec<WeylGen>) -> &mut Self {
        if !c.is_zero() {
            self.terms.push((c, word));
        }
        self
    }

    /// The stored terms.
    pub fn terms(&self) -> &[(SymScalar, Vec<WeylGen>)] {
        &self.terms
    }

    /// Applies the operator to a vector.
    pub fn apply(&self, v: &Vector) -> Result<Vector> {
        let mut out = Vector::zero(v.family(), v.ring());
        for (c, word) in &self.terms {
            let image = weyl_word_apply(word, v)?.scale(c);
            out = out.try_add(&image)?;
        }
        Ok(out)
    }
}

fn int_q(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Expands `(D_t − m)^n ξ^r` into `(index, rational)` pairs.
fn shift_dt_power(
    _ring: &std::sync::Arc<crate::scalars::ParamRing>,
    idx: &BasisIndex,
    m: i64,
) -> Result<Vec<(BasisIndex, Rational)>> {
    let n = idx.aux;
    let neg_m = BigInt::from(-m);
    let mut out = Vec::with_capacity(n as usize + 1);
    for i in 0..=n {
        let choose = binomial(BigInt::from(n), BigInt::from(i));
        let pow = neg_m.pow(n - i);
        out.push((
            BasisIndex::t_aux(idx.parity, 0, i),
            BigRational::from_integer(choose * pow),
        ));
    }
    Ok(out)
}

/// Multiplies a fraction-family vector by `t` (pole orders reduce via
/// `t·(t−b)^{−j} = (t−b)^{−(j−1)} + b·(t−b)^{−j}`).
fn frac_mul_t(v: &Vector) -> Result<Vector> {
    let family = v.family().clone();
    let ring = v.ring().clone();
    let poles = match family.as_ref() {
        FamilySpec::Fraction { poles, .. } => poles.clone(),
        _ => return Err(Error::Config("frac_mul_t needs a fraction family".into())),
    };
    let mut out = Vector::zero(&family, &ring);
    for (idx, c) in v.terms() {
        match idx.poles.iter().position(|&j| j > 0) {
            None => {
                let mut up = idx.clone();
                up.tpow += 1;
                out.add_term(up, c.clone());
            }
            Some(slot) => {
                let j = idx.poles[slot];
                let b = &poles[slot];
                if j == 1 {
                    out.add_term(BasisIndex::frac_t(idx.parity, 0, poles.len()), c.clone());
                } else {
                    out.add_term(
                        BasisIndex::frac_pole(idx.parity, slot, j - 1, poles.len()),
                        c.clone(),
                    );
                }
                out.add_term(idx.clone(), c.scale(b));
            }
        }
    }
    Ok(out)
}

/// Multiplies a fraction-family vector by `(t − b_slot)^{−1}`; slot 0 is
/// `t^{−1}`. Cross-pole products split by exact partial fractions.
fn frac_mul_pole(v: &Vector, slot: usize, poles: &[Rational]) -> Result<Vector> {
    let family = v.family().clone();
    let ring = v.ring().clone();
    let arity = poles.len();
    let mut out = Vector::zero(&family, &ring);
    for (idx, c) in v.terms() {
        let term = |jdx: BasisIndex, q: Rational| -> Vector {
            Vector::term(&family, &ring, jdx, c.scale(&q))
        };
        match idx.poles.iter().position(|&j| j > 0) {
            None => {
                let k = idx.tpow;
                if slot == 0 {
                    out.add_term(BasisIndex::frac_t(idx.parity, k - 1, arity), c.clone());
                } else if k == 0 {
                    out.add_term(BasisIndex::frac_pole(idx.parity, slot, 1, arity), c.clone());
                } else if k > 0 {
                    // t^k (t−b)^{−1} = t^{k−1} + b · t^{k−1} (t−b)^{−1}
                    let b = poles[slot].clone();
                    out.add_term(BasisIndex::frac_t(idx.parity, k - 1, arity), c.clone());
                    let rec = frac_mul_pole(
                        &term(BasisIndex::frac_t(idx.parity, k - 1, arity), b),
                        slot,
                        poles,
                    )?;
                    out = out.try_add(&rec)?;
                } else {
                    // t^k (t−b)^{−1} = (1/b) t^{k+1} (t−b)^{−1} − (1/b) t^k
                    let binv = poles[slot].recip();
                    let rec = frac_mul_pole(
                        &term(BasisIndex::frac_t(idx.parity, k + 1, arity), binv.clone()),
                        slot,
                        poles,
                    )?;
                    out = out.try_add(&rec)?;
                    out.add_term(BasisIndex::frac_t(idx.parity, k, arity), c.scale(&-binv));
                }
            }
            Some(i) if i == slot => {
                let mut up = idx.clone();
                up.poles[slot] += 1;
                out.add_term(up, c.clone());
            }
            Some(i) => {
                // (t−bᵢ)^{−j}(t−b_s)^{−1} = (t−bᵢ)^{−j}/(bᵢ−b_s)
                //                         + (t−bᵢ)^{−(j−1)}(t−b_s)^{−1}/(b_s−bᵢ)
                let j = idx.poles[i];
                let bi = poles[i].clone();
                let bs = poles[slot].clone();
                let d = (bi - bs).recip();
                out.add_term(idx.clone(), c.scale(&d));
                let lower = if j == 1 {
                    BasisIndex::frac_t(idx.parity, 0, arity)
                } else {
                    BasisIndex::frac_pole(idx.parity, i, j - 1, arity)
                };
                let rec = frac_mul_pole(&term(lower, -d), slot, poles)?;
                out = out.try_add(&rec)?;
            }
        }
    }
    Ok(out)
}

/// Formal `d/dt` on a fraction-family vector (no τ-correction).
fn frac_derivative(v: &Vector) -> Result<Vector> {
    let family = v.family().clone();
    let ring = v.ring().clone();
    let arity = family.pole_arity();
    let mut out = Vector::zero(&family, &ring);
    for (idx, c) in v.terms() {
        match idx.poles.iter().position(|&j| j > 0) {
            None => {
                if idx.tpow != 0 {
                    out.add_term(
                        BasisIndex::frac_t(idx.parity, idx.tpow - 1, arity),
                        c.scale(&int_q(idx.tpow)),
                    );
                }
            }
            Some(slot) => {
                let j = idx.poles[slot];
                out.add_term(
                    BasisIndex::frac_pole(idx.parity, slot, j + 1, arity),
                    c.scale(&int_q(-(j as i64))),
                );
            }
        }
    }
    Ok(out)
}
