use chiral_core::constructions;
use chiral_core::polytope::{self, RotationTriple};
use chiral_core::{FieldCtx, GroupKind, Pgl, ProjElement};

/// Whether some element of PΓL(2,q) sends `(a, b)` to `(a⁻¹, a²b)`, by
/// direct search.
fn reversing_element_exists(pg: &Pgl, a: &ProjElement, b: &ProjElement) -> bool {
    let target = (pg.inv(a), pg.mul3(a, a, b));
    (0..pg.field().degree()).any(|r| {
        let (fa, fb) = (pg.frobenius(a, r), pg.frobenius(b, r));
        pg.elements().any(|g| (pg.conj(&fa, &g), pg.conj(&fb, &g)) == target || (pg.conj(&fa, &pg.inv(&g)), pg.conj(&fb, &pg.inv(&g))) == target)
    })
}

#[test]
fn affine_faces_over_gf8_are_chiral() {
    // The automorphisms of E_8:C_7 are induced by PΓL(2,8).
    let pg = Pgl::new(FieldCtx::of_order(8).unwrap());
    let t: RotationTriple = constructions::pgl_triple(&pg, 1).unwrap();
    assert!(!reversing_element_exists(&pg, &t.s1, &t.s2));
    assert!(!reversing_element_exists(&pg, &t.s2, &t.s3));
    assert_eq!(polytope::directly_regular_pair(&pg, &t.s1, &t.s2), Ok(false));
    assert_eq!(polytope::directly_regular_pair(&pg, &t.s2, &t.s3), Ok(false));
}

#[test]
fn icosahedral_facets_are_directly_regular() {
    let pg = Pgl::new(FieldCtx::of_order(31).unwrap());
    let build = constructions::build_family_534(&pg).unwrap();
    assert!(!build.records.is_empty());
    for r in &build.records {
        assert_eq!(r.kind, GroupKind::Psl);
        let t = &r.triple;
        // {5,3} and {3,4}.
        assert_eq!(polytope::directly_regular_pair(&pg, &t.s1, &t.s2), Ok(true));
        assert_eq!(polytope::directly_regular_pair(&pg, &t.s2, &t.s3), Ok(true));
    }
}
