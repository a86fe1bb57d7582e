//! Randomized invariants: ring and module axioms under random inputs,
//! canonicality of the echelon span, stability of the probes under
//! reparametrization, and parser/printer round trips.

use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;

use ramond::carriers::BasisIndex;
use ramond::probes::{cyclic_vector, orbit_span, RowSpace};
use ramond::scalars::rat;
use ramond::superalgebras::generators;
use ramond::text::{parse_scalar, parse_vector};
use ramond::{
    ActionConfig, Algebra, FamilySpec, ParamRing, Rational, SymScalar, TPoly, Vector, WindowSpec,
};

fn ring() -> Arc<ParamRing> {
    ParamRing::new(&["b", "lambda"]).unwrap()
}

fn laurent_half(ring: &Arc<ParamRing>) -> Arc<FamilySpec> {
    Arc::new(FamilySpec::laurent(TPoly::constant(SymScalar::from_rational(
        ring,
        rat(1, 2),
    ))))
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    (prop_oneof![-20i64..=-1, 1i64..=20], 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

/// Random scalar over the ring (b, lambda): `b` stays polynomial, `lambda`
/// may carry negative exponents.
fn scalar() -> impl Strategy<Value = SymScalar> {
    prop::collection::vec((0i32..=2, -2i32..=2, small_rational()), 0..4).prop_map(|terms| {
        let ring = ring();
        let mut acc = SymScalar::zero(&ring);
        for (eb, el, q) in terms {
            let m = SymScalar::monomial(&ring, vec![eb, el], q).unwrap();
            acc = acc.try_add(&m).unwrap();
        }
        acc
    })
}

/// Random vector on the rank-one Laurent carrier with symbolic coefficients.
fn vector() -> impl Strategy<Value = Vector> {
    prop::collection::vec((0u8..=1, -4i64..=4, scalar()), 0..4).prop_map(|terms| {
        let ring = ring();
        let family = laurent_half(&ring);
        let mut v = Vector::zero(&family, &ring);
        for (parity, tpow, c) in terms {
            v.add_term(BasisIndex::t(parity, tpow), c);
        }
        v
    })
}

/// Random vector with purely rational coefficients (for the echelon span).
fn numeric_vector() -> impl Strategy<Value = Vector> {
    prop::collection::vec((0u8..=1, -3i64..=3, small_rational()), 1..4).prop_map(|terms| {
        let ring = ParamRing::numeric();
        let family = laurent_half(&ring);
        let mut v = Vector::zero(&family, &ring);
        for (parity, tpow, q) in terms {
            v.add_term(BasisIndex::t(parity, tpow), SymScalar::from_rational(&ring, q));
        }
        v
    })
}

proptest! {
    #[test]
    fn scalar_arithmetic_is_a_commutative_ring(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(a.try_add(&b).unwrap(), b.try_add(&a).unwrap());
        prop_assert_eq!(
            a.try_add(&b).unwrap().try_add(&c).unwrap(),
            a.try_add(&b.try_add(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(a.try_mul(&b).unwrap(), b.try_mul(&a).unwrap());
        prop_assert_eq!(
            a.try_mul(&b).unwrap().try_mul(&c).unwrap(),
            a.try_mul(&b.try_mul(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(
            a.try_mul(&b.try_add(&c).unwrap()).unwrap(),
            a.try_mul(&b).unwrap().try_add(&a.try_mul(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(a.try_sub(&a).unwrap(), SymScalar::zero(&ring()));
    }

    #[test]
    fn substitution_is_a_ring_homomorphism(
        a in scalar(),
        b in scalar(),
        qb in small_rational(),
        ql in nonzero_rational(),
    ) {
        let mut bindings = BTreeMap::new();
        bindings.insert("b".to_string(), qb);
        bindings.insert("lambda".to_string(), ql);
        prop_assert_eq!(
            a.try_add(&b).unwrap().substitute(&bindings).unwrap(),
            a.substitute(&bindings).unwrap().try_add(&b.substitute(&bindings).unwrap()).unwrap()
        );
        prop_assert_eq!(
            a.try_mul(&b).unwrap().substitute(&bindings).unwrap(),
            a.substitute(&bindings).unwrap().try_mul(&b.substitute(&bindings).unwrap()).unwrap()
        );
    }

    #[test]
    fn vectors_form_a_module_over_the_scalars(u in vector(), v in vector(), c in scalar()) {
        prop_assert_eq!(u.try_add(&v).unwrap(), v.try_add(&u).unwrap());
        prop_assert_eq!(
            u.try_add(&v).unwrap().scale(&c),
            u.scale(&c).try_add(&v.scale(&c)).unwrap()
        );
        let ring = ring();
        let family = laurent_half(&ring);
        prop_assert_eq!(u.try_add(&u.neg()).unwrap(), Vector::zero(&family, &ring));
    }

    #[test]
    fn window_projection_is_idempotent_and_linear(u in vector(), v in vector()) {
        let w = WindowSpec::new(3, 0, 0, 2).unwrap();
        let (pu, _) = u.window_project(&w);
        let (ppu, leaked_again) = pu.window_project(&w);
        prop_assert_eq!(&ppu, &pu);
        prop_assert!(!leaked_again);
        let (psum, _) = u.try_add(&v).unwrap().window_project(&w);
        let (pv, _) = v.window_project(&w);
        prop_assert_eq!(psum, pu.try_add(&pv).unwrap());
    }

    #[test]
    fn echelon_span_is_insertion_order_independent(
        vs in prop::collection::vec(numeric_vector(), 1..5),
        scales in prop::collection::vec(nonzero_rational(), 4),
    ) {
        let mut forward = RowSpace::new();
        for v in &vs {
            forward.insert(v).unwrap();
        }
        let mut backward = RowSpace::new();
        for (v, q) in vs.iter().rev().zip(scales.iter().cycle()) {
            backward.insert(&v.scale_q(q)).unwrap();
        }
        prop_assert_eq!(&forward, &backward);
        for v in &vs {
            prop_assert!(forward.contains(v).unwrap());
        }
    }

    #[test]
    fn parser_inverts_the_printer_on_scalars(a in scalar()) {
        let text = a.to_string();
        prop_assert_eq!(parse_scalar(&ring(), &text).unwrap(), a);
    }

    #[test]
    fn parser_inverts_the_printer_on_vectors(v in vector()) {
        let ring = ring();
        let family = laurent_half(&ring);
        let text = v.to_string();
        prop_assert_eq!(parse_vector(&family, &ring, &text).unwrap(), v);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Acting with a symbolic weight and then specializing it agrees with
    /// acting at the specialized weight from the start.
    #[test]
    fn specialization_commutes_with_the_action(
        algebra in prop_oneof![Just(Algebra::R), Just(Algebra::T)],
        gen_ix in 0usize..32,
        parity in 0u8..=1,
        tpow in -3i64..=3,
        q in small_rational(),
    ) {
        let sym_ring = ParamRing::new(&["b"]).unwrap();
        let b = SymScalar::param(&sym_ring, "b").unwrap();
        let family = laurent_half(&sym_ring);
        let cfg_sym = ActionConfig::new(algebra, family.clone(), b).unwrap();

        let num_ring = ParamRing::numeric();
        let num_family = laurent_half(&num_ring);
        let cfg_num = ActionConfig::new(
            algebra,
            num_family.clone(),
            SymScalar::from_rational(&num_ring, q.clone()),
        )
        .unwrap();

        let gens = generators(algebra, 2);
        let g = &gens[gen_ix % gens.len()];
        let idx = BasisIndex::t(parity, tpow);

        let sym_image = ramond::modules::act(
            &cfg_sym,
            g,
            &Vector::basis(&family, &sym_ring, idx.clone()),
        )
        .unwrap();
        let mut bindings = BTreeMap::new();
        bindings.insert("b".to_string(), q);
        let specialized = sym_image.substitute(&bindings).unwrap();

        let num_image = ramond::modules::act(
            &cfg_num,
            g,
            &Vector::basis(&num_family, &num_ring, idx),
        )
        .unwrap();

        // The two live over different rings; compare their canonical text.
        prop_assert_eq!(specialized.to_string(), num_image.to_string());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    /// A wider window never sees a smaller orbit.
    #[test]
    fn orbit_dimension_is_monotone_in_the_window(small_t in 3i64..=4, extra in 1i64..=2) {
        let ring = ParamRing::numeric();
        let family = laurent_half(&ring);
        let cfg = ActionConfig::new(
            Algebra::R,
            family,
            SymScalar::from_rational(&ring, rat(1, 3)),
        )
        .unwrap();
        let seed = cyclic_vector(&cfg);
        let w_small = WindowSpec::new(small_t, 0, 0, 2).unwrap();
        let w_large = WindowSpec::new(small_t + extra, 0, 0, 2).unwrap();
        let out_small = orbit_span(&cfg, &seed, &w_small, 32).unwrap();
        let out_large = orbit_span(&cfg, &seed, &w_large, 32).unwrap();
        prop_assert!(out_small.span_dim <= out_large.span_dim);
    }

    /// At a weight with no proper invariant subspace, any basis seed fills
    /// the inner window.
    #[test]
    fn orbit_fill_is_seed_independent(parity in 0u8..=1, tpow in -2i64..=2) {
        let ring = ParamRing::numeric();
        let family = laurent_half(&ring);
        let cfg = ActionConfig::new(
            Algebra::R,
            family.clone(),
            SymScalar::from_rational(&ring, rat(1, 3)),
        )
        .unwrap();
        let seed = Vector::basis(&family, &ring, BasisIndex::t(parity, tpow));
        let w = WindowSpec::new(6, 0, 0, 2).unwrap();
        let out = orbit_span(&cfg, &seed, &w, 32).unwrap();
        prop_assert!(out.filled_inner, "missing: {:?}", out.missing);
    }
}
