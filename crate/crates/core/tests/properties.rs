use std::sync::{Arc, OnceLock};

use chiral_core::conjecture::{self, ConjectureWitness};
use chiral_core::polytope;
use chiral_core::{FieldCtx, FieldElement, Pgl, ProjElement};
use proptest::prelude::*;

/// Tabled and untabled fields of both parities.
const ORDERS: [u128; 8] = [7, 8, 9, 125, 1024, 2187, 1_000_003, 14_348_907];

fn fields() -> &'static Vec<Arc<FieldCtx>> {
    static F: OnceLock<Vec<Arc<FieldCtx>>> = OnceLock::new();
    F.get_or_init(|| ORDERS.iter().map(|&q| FieldCtx::of_order(q).unwrap()).collect())
}

fn element(f: &FieldCtx, code: u128) -> FieldElement {
    f.from_code(code % f.q()).unwrap()
}

fn matrix(pg: &Pgl, codes: [u128; 4]) -> Option<ProjElement> {
    let f = pg.field();
    pg.make(codes.map(|c| element(f, c))).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn field_axioms(i in 0..ORDERS.len(), a in any::<u128>(), b in any::<u128>(), c in any::<u128>()) {
        let f = &fields()[i];
        let (a, b, c) = (element(f, a), element(f, b), element(f, c));
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), FieldElement::ZERO);
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
            prop_assert_eq!(f.pow(a, f.q() - 1), FieldElement::ONE);
        }
        prop_assert_eq!(f.frobenius(a, f.degree()), a);
        prop_assert_eq!(f.frobenius(a, 1), f.pow(a, f.p() as u128));
    }

    #[test]
    fn square_roots(i in 0..ORDERS.len(), a in any::<u128>()) {
        let f = &fields()[i];
        let a = element(f, a);
        let sq = f.square(a);
        prop_assert!(f.is_square(sq));
        let r = f.sqrt(sq).unwrap();
        prop_assert_eq!(f.square(r), sq);
        if f.is_odd() && !a.is_zero() {
            // Euler's criterion.
            let euler = f.pow(a, (f.q() - 1) / 2) == FieldElement::ONE;
            prop_assert_eq!(f.is_square(a), euler);
        }
    }

    #[test]
    fn order_formula(i in 0..4usize, m in any::<[u128; 4]>()) {
        let pg = Pgl::new(Arc::clone(&fields()[i]));
        if let Some(g) = matrix(&pg, m) {
            let n = pg.order(&g);
            prop_assert_eq!(n, pg.order_naive(&g));
            prop_assert!(pg.pow(&g, n).is_identity());
        }
    }

    #[test]
    fn canonical_form_is_projective(i in 0..ORDERS.len(), m in any::<[u128; 4]>(), s in 1u128..) {
        let f = &fields()[i];
        let pg = Pgl::new(Arc::clone(f));
        let lambda = element(f, s);
        if let (Some(g), false) = (matrix(&pg, m), lambda.is_zero()) {
            let scaled = pg.make(g.0.map(|x| f.mul(x, lambda))).unwrap();
            prop_assert_eq!(scaled, g);
        }
    }
}

/// Witness shapes for the candidate relation test.
const SHAPES: [(u64, usize, usize); 4] = [(3, 3, 5), (5, 3, 5), (3, 5, 7), (7, 3, 5)];

fn witness(shape: usize, seed: u64) -> Option<ConjectureWitness> {
    let (p, e1, e2) = SHAPES[shape];
    conjecture::search_witness(p, e1, e2, 64, seed).unwrap().witness.map(|w| w.1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn candidate_relations(shape in 0..SHAPES.len(), seed in any::<u64>(), negate in any::<bool>()) {
        let w = witness(shape, seed);
        prop_assume!(w.is_some());
        let w = w.unwrap();
        let f = &w.big;
        prop_assert_eq!(f.square(f.sqrt(w.omega).unwrap()), w.omega);
        let (pg, t) = conjecture::build_candidate_signed(&w, negate).unwrap();
        prop_assert!(polytope::check_relations(&pg, &t));
        for s in t.as_array() {
            prop_assert!(pg.in_psl(&s));
        }
        prop_assert!(pg.trace(&pg.mul(&t.s1, &t.s2)).is_zero());
        prop_assert!(pg.trace(&pg.mul(&t.s2, &t.s3)).is_zero());
        prop_assert!(pg.trace(&pg.mul3(&t.s1, &t.s2, &t.s3)).is_zero());
    }

    #[test]
    fn sampling_is_seed_deterministic(seed in any::<u64>()) {
        let a = conjecture::sample_pairs(3, 3, 5, 300, seed).unwrap();
        let b = conjecture::sample_pairs(3, 3, 5, 300, seed).unwrap();
        prop_assert_eq!(a.primitive_squares, b.primitive_squares);
        prop_assert_eq!(a.squares, b.squares);
        prop_assert_eq!(a.witness.map(|w| (w.0, w.1.j1, w.1.j2)), b.witness.map(|w| (w.0, w.1.j1, w.1.j2)));
    }
}
