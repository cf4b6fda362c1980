use chiral_core::conjecture::{self, ExactMethod, IntersectionCheck, TraceFilter};
use chiral_core::polytope;
use chiral_core::{FieldCtx, FieldElement};

/// Legendre symbol of the norm down to GF(p), with squares mod p listed
/// directly.
fn is_square_by_norm(f: &FieldCtx, x: FieldElement) -> bool {
    let p = f.p() as u128;
    let norm = f.pow(x, (f.q() - 1) / (p - 1));
    let squares: Vec<FieldElement> = (1..p).map(|a| f.from_int((a * a % p) as i128)).collect();
    squares.contains(&norm)
}

#[test]
fn omega_squareness_matches_norm_oracle() {
    for (p, e1, e2) in [(3, 3, 5), (5, 3, 5), (7, 3, 5)] {
        let r = conjecture::search_witness(p, e1, e2, 256, 7).unwrap();
        let (_, w) = r.witness.expect("witness within 256 samples");
        assert!(is_square_by_norm(&w.big, w.omega));
        let root = w.big.sqrt(w.omega).unwrap();
        assert_eq!(w.big.square(root), w.omega);
        assert_eq!(conjecture::big_omega(&w.big, w.omega1, w.omega2), w.omega);
    }
    let f = FieldCtx::of_order(3u128.pow(15)).unwrap();
    for code in (1..f.q()).step_by(1_000_003) {
        let x = f.from_code(code).unwrap();
        assert_eq!(f.is_square(x), is_square_by_norm(&f, x), "code {code}");
    }
}

#[test]
fn sign_choice_gives_the_enantiomorph() {
    for (p, e1, e2) in [(3, 3, 5), (5, 3, 5)] {
        sign_choice(p, e1, e2);
    }
}

fn sign_choice(p: u64, e1: usize, e2: usize) {
    let r = conjecture::search_witness(p, e1, e2, 10_000, 1).unwrap();
    let (_, w) = r.witness.unwrap();
    let (pg, plus) = conjecture::build_candidate_signed(&w, false).unwrap();
    let (_, minus) = conjecture::build_candidate_signed(&w, true).unwrap();
    assert!(polytope::check_relations(&pg, &minus));
    assert_eq!(
        polytope::schlafli_of(&pg, &plus).unwrap(),
        polytope::schlafli_of(&pg, &minus).unwrap()
    );
    assert!(!polytope::are_equivalent(&pg, &plus, &minus));
    assert!(polytope::are_equivalent(&pg, &polytope::enantiomorph(&pg, &plus), &minus));
    // diag(1,-1) flips the sign of σ3 but moves σ1.
    let d = pg.make([w.big.one(), w.big.zero(), w.big.zero(), w.big.from_int(-1)]).unwrap();
    assert_eq!(pg.conj(&plus.s3, &d), minus.s3);
    assert_ne!(pg.conj(&plus.s1, &d), plus.s1);
}

#[test]
fn filter_detects_violation_outside_scope() {
    // e1 = 1: ⟨σ2, σ3⟩ has the full trace field and contains ⟨σ1, σ2⟩.
    let r = conjecture::sample_pairs(7, 1, 3, 10_000, 1).unwrap();
    let (_, w) = r.witness.expect("witness");
    let (pg, t) = conjecture::build_candidate(&w).unwrap();
    let filter = TraceFilter::new(&pg, &t);
    match filter.sample(2_000, 1) {
        IntersectionCheck::Sampled { violations, .. } => assert!(violations > 0),
        other => panic!("unexpected {other:?}"),
    }
    let v = conjecture::verify_candidate(&pg, &t, &w, 2_000, 1);
    assert_eq!(v.intersection, IntersectionCheck::Verified { holds: false, method: ExactMethod::Closure });
    assert!(!v.passes());
}

#[test]
fn search_rejects_bad_parameters() {
    assert!(conjecture::search_witness(3, 1, 5, 10, 1).is_err());
    assert!(conjecture::search_witness(3, 4, 5, 10, 1).is_err());
    assert!(conjecture::search_witness(9, 3, 5, 10, 1).is_err());
    assert!(conjecture::search_witness(2, 3, 5, 10, 1).is_err());
}
