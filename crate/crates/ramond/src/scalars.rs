//! Exact coefficient arithmetic.
//!
//! Every coefficient in this crate is a [`SymScalar`]: a finitely supported
//! ℚ-linear combination of monomials in a fixed, per-session set of formal
//! parameters (the [`ParamRing`]). Two of the parameter names, `lambda` and
//! `mu`, are *Laurent* parameters and may carry negative exponents (they are
//! invertible scale factors in the rank-two free carrier); all other
//! parameters are ordinary polynomial indeterminates.
//!
//! Invariants maintained by every operation:
//!
//! * rationals are always in lowest terms with positive denominator
//!   (guaranteed by [`num::BigRational`]);
//! * no zero coefficient is ever stored (canonical form);
//! * negative exponents appear only on Laurent parameters.
//!
//! There is no division of symbolic scalars and no floating point anywhere.

use num::{BigInt, BigRational, One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::{Error, Result};

/// Exact rational number (arbitrary precision, lowest terms, denominator > 0).
pub type Rational = BigRational;

/// Convenience constructor for a rational from an integer pair.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Convenience constructor for an integer rational.
pub fn int(n: i64) -> Rational {
    Rational::from(BigInt::from(n))
}

/// Exact integer power of a rational; negative exponents require a nonzero
/// base.
pub fn rat_pow(q: &Rational, e: i32) -> Result<Rational> {
    if e == 0 {
        return Ok(Rational::one());
    }
    if q.is_zero() && e < 0 {
        return Err(Error::ScalarDomain(
            "negative power of zero".to_string(),
        ));
    }
    let p = e.unsigned_abs();
    let n = q.numer().pow(p);
    let d = q.denom().pow(p);
    Ok(if e > 0 {
        Rational::new(n, d)
    } else {
        Rational::new(d, n)
    })
}

/// The declared set of formal parameters for one verification session.
///
/// Parameter order is significant: it fixes the exponent-vector layout and
/// the lexicographic monomial order used for canonical printing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamRing {
    names: Vec<String>,
    laurent: Vec<bool>,
}

/// Names that admit negative exponents.
const LAURENT_NAMES: [&str; 2] = ["lambda", "mu"];

impl ParamRing {
    /// Declares a ring with the given parameter names (order matters).
    ///
    /// Names must be unique, nonempty, and consist of ASCII alphanumerics or
    /// `_`, starting with a letter.
    pub fn new(names: &[&str]) -> Result<Arc<ParamRing>> {
        let mut seen = std::collections::BTreeSet::new();
        for name in names {
            if name.is_empty()
                || !name.chars().next().unwrap().is_ascii_alphabetic()
                || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
            {
                return Err(Error::Config(format!("invalid parameter name `{name}`")));
            }
            if !seen.insert(*name) {
                return Err(Error::Config(format!("duplicate parameter name `{name}`")));
            }
        }
        Ok(Arc::new(ParamRing {
            names: names.iter().map(|s| s.to_string()).collect(),
            laurent: names.iter().map(|s| LAURENT_NAMES.contains(s)).collect(),
        }))
    }

    /// The ring with no formal parameters (purely numeric sessions).
    pub fn numeric() -> Arc<ParamRing> {
        Arc::new(ParamRing { names: Vec::new(), laurent: Vec::new() })
    }

    /// Number of declared parameters.
    pub fn len(&self) -> usize {
        self.names.len()
    }

    /// True if no parameters are declared.
    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Position of a parameter name, if declared.
    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Declared names in order.
    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Whether the parameter at `idx` admits negative exponents.
    pub fn is_laurent(&self, idx: usize) -> bool {
        self.laurent[idx]
    }
}

/// A multivariate Laurent polynomial over ℚ in the session's parameters.
///
/// Stored as a map from exponent vectors (one slot per declared parameter)
/// to nonzero rational coefficients. The `BTreeMap` order is lexicographic on
/// the declared parameter order, which is also the canonical printing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymScalar {
    ring: Arc<ParamRing>,
    terms: BTreeMap<Vec<i32>, Rational>,
}

impl SymScalar {
    /// The zero scalar.
    pub fn zero(ring: &Arc<ParamRing>) -> SymScalar {
        SymScalar { ring: ring.clone(), terms: BTreeMap::new() }
    }

    /// The unit scalar.
    pub fn one(ring: &Arc<ParamRing>) -> SymScalar {
        SymScalar::from_rational(ring, Rational::one())
    }

    /// A constant scalar.
    pub fn from_rational(ring: &Arc<ParamRing>, q: Rational) -> SymScalar {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(vec![0; ring.len()], q);
        }
        SymScalar { ring: ring.clone(), terms }
    }

    /// A constant integer scalar.
    pub fn from_int(ring: &Arc<ParamRing>, n: i64) -> SymScalar {
        SymScalar::from_rational(ring, int(n))
    }

    /// The declared parameter `name`, as a degree-one monomial.
    pub fn param(ring: &Arc<ParamRing>, name: &str) -> Result<SymScalar> {
        let idx = ring
            .index(name)
            .ok_or_else(|| Error::Config(format!("parameter `{name}` not declared in ring")))?;
        let mut exps = vec![0; ring.len()];
        exps[idx] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(exps, Rational::one());
        Ok(SymScalar { ring: ring.clone(), terms })
    }

    /// A single monomial `coeff * prod(name_i ^ exps_i)`.
    pub fn monomial(ring: &Arc<ParamRing>, exps: Vec<i32>, coeff: Rational) -> Result<SymScalar> {
        if exps.len() != ring.len() {
            return Err(Error::Config(format!(
                "exponent vector length {} does not match ring arity {}",
                exps.len(),
                ring.len()
            )));
        }
        for (i, &e) in exps.iter().enumerate() {
            if e < 0 && !ring.is_laurent(i) {
                return Err(Error::ScalarDomain(format!(
                    "negative exponent on non-Laurent parameter `{}`",
                    ring.names()[i]
                )));
            }
        }
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exps, coeff);
        }
        Ok(SymScalar { ring: ring.clone(), terms })
    }

    /// The ring this scalar lives in.
    pub fn ring(&self) -> &Arc<ParamRing> {
        &self.ring
    }

    /// True iff this is the zero scalar.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True iff this is the unit scalar.
    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .map(|(e, c)| e.iter().all(|&x| x == 0) && c.is_one())
                .unwrap_or(false)
    }

    /// The constant value, if this scalar has no parameter dependence.
    pub fn to_rational(&self) -> Option<Rational> {
        if self.terms.is_empty() {
            return Some(Rational::zero());
        }
        if self.terms.len() == 1 {
            let (e, c) = self.terms.iter().next().unwrap();
            if e.iter().all(|&x| x == 0) {
                return Some(c.clone());
            }
        }
        None
    }

    /// Number of stored monomials.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Iterates over `(exponent vector, coefficient)` pairs in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &Rational)> {
        self.terms.iter()
    }

    fn check_ring(&self, other: &SymScalar) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch(format!(
                "{:?} vs {:?}",
                self.ring.names(),
                other.ring.names()
            )))
        }
    }

    /// Exact sum. Errors if the rings differ.
    pub fn try_add(&self, other: &SymScalar) -> Result<SymScalar> {
        self.check_ring(other)?;
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            match terms.entry(e.clone()) {
                std::collections::btree_map::Entry::Vacant(v) => {
                    v.insert(c.clone());
                }
                std::collections::btree_map::Entry::Occupied(mut o) => {
                    let sum = o.get() + c;
                    if sum.is_zero() {
                        o.remove();
                    } else {
                        *o.get_mut() = sum;
                    }
                }
            }
        }
        Ok(SymScalar { ring: self.ring.clone(), terms })
    }

    /// Exact difference. Errors if the rings differ.
    pub fn try_sub(&self, other: &SymScalar) -> Result<SymScalar> {
        self.try_add(&other.neg())
    }

    /// Exact product. Errors if the rings differ.
    pub fn try_mul(&self, other: &SymScalar) -> Result<SymScalar> {
        self.check_ring(other)?;
        let mut terms: BTreeMap<Vec<i32>, Rational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<i32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let prod = ca * cb;
                match terms.entry(exps) {
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(prod);
                    }
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        let sum = o.get() + &prod;
                        if sum.is_zero() {
                            o.remove();
                        } else {
                            *o.get_mut() = sum;
                        }
                    }
                }
            }
        }
        Ok(SymScalar { ring: self.ring.clone(), terms })
    }

    /// Additive inverse.
    pub fn neg(&self) -> SymScalar {
        SymScalar {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    /// Scales by a rational constant.
    pub fn scale(&self, q: &Rational) -> SymScalar {
        if q.is_zero() {
            return SymScalar::zero(&self.ring);
        }
        SymScalar {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * q)).collect(),
        }
    }

    /// Exact integer power. Negative exponents require a single invertible
    /// monomial (nonzero coefficient, Laurent-safe exponents after negation).
    pub fn pow_int(&self, e: i32) -> Result<SymScalar> {
        if e >= 0 {
            let mut acc = SymScalar::one(&self.ring);
            for _ in 0..e {
                acc = acc.try_mul(self)?;
            }
            return Ok(acc);
        }
        let inv = self.inverse_monomial()?;
        inv.pow_int(-e)
    }

    /// The multiplicative inverse, defined only for single-monomial scalars
    /// whose inverted exponents stay in the ring.
    pub fn inverse_monomial(&self) -> Result<SymScalar> {
        if self.terms.len() != 1 {
            return Err(Error::ScalarDomain(format!(
                "`{self}` is not an invertible monomial"
            )));
        }
        let (exps, coeff) = self.terms.iter().next().unwrap();
        let inv_exps: Vec<i32> = exps.iter().map(|&x| -x).collect();
        let inv_coeff = Rational::one() / coeff;
        SymScalar::monomial(&self.ring, inv_exps, inv_coeff)
    }

    /// Substitutes rational values for parameters. Every parameter that
    /// occurs in `self` must be bound; `lambda`/`mu` bindings must be nonzero.
    /// The result is a constant scalar over the same ring.
    pub fn substitute(&self, bindings: &BTreeMap<String, Rational>) -> Result<SymScalar> {
        for (name, value) in bindings {
            if LAURENT_NAMES.contains(&name.as_str()) && value.is_zero() {
                return Err(Error::ScalarDomain(format!(
                    "parameter `{name}` must be bound to a nonzero value"
                )));
            }
        }
        let mut values: Vec<Option<&Rational>> = vec![None; self.ring.len()];
        for (name, value) in bindings {
            if let Some(idx) = self.ring.index(name) {
                values[idx] = Some(value);
            }
        }
        let mut acc = Rational::zero();
        for (exps, coeff) in &self.terms {
            let mut term = coeff.clone();
            for (i, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let v = values[i].ok_or_else(|| {
                    Error::ScalarDomain(format!(
                        "parameter `{}` occurs but is unbound",
                        self.ring.names()[i]
                    ))
                })?;
                term *= rat_pow(v, e)?;
            }
            acc += term;
        }
        Ok(SymScalar::from_rational(&self.ring, acc))
    }
}

impl fmt::Display for SymScalar {
    /// Canonical text form: monomials in lexicographic exponent order,
    /// integer/fraction literals, explicit `*`, `^` for powers.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (exps, coeff)) in self.terms.iter().enumerate() {
            let neg = coeff.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = coeff.abs();
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || exps.iter().all(|&e| e == 0) {
                factors.push(mag.to_string());
            }
            for (j, &e) in exps.iter().enumerate() {
                if e == 1 {
                    factors.push(self.ring.names()[j].clone());
                } else if e != 0 {
                    factors.push(format!("{}^{}", self.ring.names()[j], e));
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring_b() -> Arc<ParamRing> {
        ParamRing::new(&["b"]).unwrap()
    }

    fn ring_bl() -> Arc<ParamRing> {
        ParamRing::new(&["b", "lambda"]).unwrap()
    }

    #[test]
    fn rational_sum() {
        let r = ParamRing::numeric();
        let a = SymScalar::from_rational(&r, rat(1, 2));
        let b = SymScalar::from_rational(&r, rat(1, 3));
        assert_eq!(a.try_add(&b).unwrap().to_rational().unwrap(), rat(5, 6));
    }

    #[test]
    fn additive_inverse_cancels() {
        let r = ring_b();
        let b = SymScalar::param(&r, "b").unwrap();
        assert!(b.try_add(&b.neg()).unwrap().is_zero());
    }

    #[test]
    fn like_terms_merge() {
        let r = ring_bl();
        let l = SymScalar::param(&r, "lambda").unwrap();
        let l2 = l.pow_int(2).unwrap();
        let sum = l2.try_add(&l2.scale(&int(3))).unwrap();
        assert_eq!(sum, l2.scale(&int(4)));
        assert_eq!(sum.term_count(), 1);
    }

    #[test]
    fn laurent_inverse_pair() {
        let r = ring_bl();
        let l = SymScalar::param(&r, "lambda").unwrap();
        let linv = l.pow_int(-1).unwrap();
        assert!(l.try_mul(&linv).unwrap().is_one());
    }

    #[test]
    fn non_laurent_negative_power_rejected() {
        let r = ring_b();
        let b = SymScalar::param(&r, "b").unwrap();
        assert!(b.pow_int(-1).is_err());
    }

    #[test]
    fn product_b_one_minus_two_b() {
        let r = ring_b();
        let b = SymScalar::param(&r, "b").unwrap();
        let one = SymScalar::one(&r);
        let expr = b.try_mul(&one.try_sub(&b.scale(&int(2))).unwrap()).unwrap();
        // b - 2b^2
        let expected = b.try_sub(&b.pow_int(2).unwrap().scale(&int(2))).unwrap();
        assert_eq!(expr, expected);
        assert_eq!(expr.to_string(), "b - 2*b^2");
    }

    #[test]
    fn virasoro_central_coefficient_at_mode_two() {
        // (n^3 - n)/12 at n = 2 is 1/2.
        let n = int(2);
        let val = (&n * &n * &n - &n) / int(12);
        assert_eq!(val, rat(1, 2));
    }

    #[test]
    fn substitute_roots_and_values() {
        let r = ring_bl();
        let b = SymScalar::param(&r, "b").unwrap();
        let expr = b.try_sub(&b.pow_int(2).unwrap().scale(&int(2))).unwrap(); // b - 2b^2
        let half: BTreeMap<String, Rational> = [("b".to_string(), rat(1, 2))].into();
        assert!(expr.substitute(&half).unwrap().is_zero());
        let third: BTreeMap<String, Rational> = [("b".to_string(), rat(1, 3))].into();
        assert_eq!(expr.substitute(&third).unwrap().to_rational().unwrap(), rat(1, 9));

        let l = SymScalar::param(&r, "lambda").unwrap().pow_int(2).unwrap();
        let l3: BTreeMap<String, Rational> = [("lambda".to_string(), int(3))].into();
        assert_eq!(l.substitute(&l3).unwrap().to_rational().unwrap(), int(9));
    }

    #[test]
    fn substitute_rejects_zero_laurent_binding() {
        let r = ring_bl();
        let l = SymScalar::param(&r, "lambda").unwrap();
        let zero: BTreeMap<String, Rational> = [("lambda".to_string(), int(0))].into();
        assert!(l.substitute(&zero).is_err());
    }

    #[test]
    fn substitute_requires_occurring_params() {
        let r = ring_b();
        let b = SymScalar::param(&r, "b").unwrap();
        assert!(b.substitute(&BTreeMap::new()).is_err());
        // Constants need no bindings.
        assert!(SymScalar::one(&r).substitute(&BTreeMap::new()).is_ok());
    }

    #[test]
    fn ring_mismatch_rejected() {
        let a = SymScalar::one(&ring_b());
        let b = SymScalar::one(&ring_bl());
        assert!(a.try_add(&b).is_err());
        assert!(a.try_mul(&b).is_err());
    }

    #[test]
    fn substitution_is_ring_homomorphism_spot() {
        let r = ring_bl();
        let b = SymScalar::param(&r, "b").unwrap();
        let l = SymScalar::param(&r, "lambda").unwrap();
        let x = b.try_add(&l.pow_int(-1).unwrap()).unwrap();
        let y = l.try_sub(&b.pow_int(3).unwrap()).unwrap();
        let bind: BTreeMap<String, Rational> =
            [("b".to_string(), rat(2, 5)), ("lambda".to_string(), rat(-3, 7))].into();
        let lhs = x.try_mul(&y).unwrap().substitute(&bind).unwrap();
        let rhs = x
            .substitute(&bind)
            .unwrap()
            .try_mul(&y.substitute(&bind).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn display_canonical_order() {
        let r = ring_bl();
        let b = SymScalar::param(&r, "b").unwrap();
        let l = SymScalar::param(&r, "lambda").unwrap();
        let expr = l
            .scale(&rat(1, 2))
            .try_add(&b.try_mul(&l).unwrap().scale(&int(-3)))
            .unwrap()
            .try_add(&SymScalar::from_int(&r, 7))
            .unwrap();
        assert_eq!(expr.to_string(), "7 + 1/2*lambda - 3*b*lambda");
    }
}
