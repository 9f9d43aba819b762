//! Property-based checks of algebraic invariants on generated inputs.

use cyclochern_core::algebra::format_element;
use cyclochern_core::algebra::parse::parse_element;
use cyclochern_core::chern::{self, SignConvention};
use cyclochern_core::derham::{self, KahlerForm};
use cyclochern_core::homology;
use cyclochern_core::linalg::DenseMatrix;
use cyclochern_core::models;
use cyclochern_core::omega::{self, Form};
use cyclochern_core::{AlgMatrix, Algebra, Element, FDAlgebra, Monomial, PresentedAlgebra, Scalar};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn scalar() -> impl Strategy<Value = Scalar> {
    (-4i64..=4, -2i64..=2).prop_map(|(re, im)| Scalar::gaussian(re, im))
}

fn poly(alg: &PresentedAlgebra, terms: &[(Scalar, Vec<u32>)]) -> Element<Monomial> {
    let raw = Element::from_terms(terms.iter().map(|(c, e)| (Monomial(e.clone()), c.clone())));
    alg.normal_form(&raw).unwrap()
}

fn sphere_terms(max_deg: u32) -> impl Strategy<Value = Vec<(Scalar, Vec<u32>)>> {
    prop::collection::vec((scalar(), prop::collection::vec(0..=max_deg, 3)), 1..5)
}

/// A random form of degree `n` over an FD algebra, as coefficient/key pairs.
fn fd_form(alg: &FDAlgebra, n: usize, terms: &[(Scalar, Vec<usize>)]) -> Form<usize> {
    let d = alg.dim();
    Element::from_terms(terms.iter().map(|(c, raw)| {
        let mut key = vec![raw[0] % d];
        key.extend(raw[1..=n].iter().map(|k| 1 + k % (d - 1)));
        (key, c.clone())
    }))
}

fn raw_terms(n: usize) -> impl Strategy<Value = Vec<(Scalar, Vec<usize>)>> {
    prop::collection::vec((scalar(), prop::collection::vec(0usize..64, n + 1)), 1..6)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn normal_form_is_idempotent_and_linear(a in sphere_terms(5), b in sphere_terms(5), c in scalar()) {
        let s = models::sphere();
        let pa = poly(&s, &a);
        let pb = poly(&s, &b);
        prop_assert_eq!(s.normal_form(&pa).unwrap(), pa.clone());
        let raw_sum = Element::from_terms(a.iter().chain(&b).map(|(k, e)| (Monomial(e.clone()), k.clone())));
        let combined = s.normal_form(&pa.scaled(&c).add(&pb)).unwrap();
        prop_assert_eq!(combined, pa.scaled(&c).add(&pb));
        prop_assert_eq!(s.normal_form(&raw_sum).unwrap(), pa.add(&pb));
    }

    #[test]
    fn sphere_products_are_associative(a in sphere_terms(3), b in sphere_terms(3), c in sphere_terms(3)) {
        let s = models::sphere();
        let (pa, pb, pc) = (poly(&s, &a), poly(&s, &b), poly(&s, &c));
        let left = pa.mul(&pb, &s).unwrap().mul(&pc, &s).unwrap();
        let right = pa.mul(&pb.mul(&pc, &s).unwrap(), &s).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn printed_elements_parse_back(a in sphere_terms(4)) {
        let s = models::sphere();
        let p = poly(&s, &a);
        prop_assert_eq!(parse_element(&s, &format_element(&s, &p)).unwrap(), p);
    }

    #[test]
    fn operators_are_linear(n in 1usize..4, f in raw_terms(3), g in raw_terms(3), c in scalar()) {
        let alg = models::matrix_algebra_c(2);
        let (f, g) = (fd_form(&alg, n, &f), fd_form(&alg, n, &g));
        let combo = f.scaled(&c).add(&g);
        let b = |x: &Form<usize>| omega::b(&alg, x).unwrap();
        let big = |x: &Form<usize>| omega::connes_b(&alg, x);
        prop_assert_eq!(b(&combo), b(&f).scaled(&c).add(&b(&g)));
        prop_assert_eq!(big(&combo), big(&f).scaled(&c).add(&big(&g)));
    }

    #[test]
    fn karoubi_identity_on_random_forms(n in 0usize..4, f in raw_terms(3)) {
        for alg in [models::truncated_polynomial(3), models::cyclic_group_algebra(3)] {
            let f = fd_form(&alg, n, &f);
            let kf = omega::kappa(&alg, &f).unwrap();
            let bd = omega::b(&alg, &omega::d(&alg, &f)).unwrap();
            let db = omega::d(&alg, &omega::b(&alg, &f).unwrap());
            // κ − 1 = −(bd + db)
            prop_assert_eq!(kf.sub(&f), bd.add(&db).neg());
            prop_assert!(omega::b(&alg, &omega::b(&alg, &f).unwrap()).unwrap().is_zero());
        }
    }

    #[test]
    fn mu_kills_graded_commutators(a in prop::collection::vec(0u32..3, 2), b in prop::collection::vec(0u32..3, 2),
                                   c in prop::collection::vec(0u32..3, 2)) {
        let alg = models::free_commutative(&["x", "y"], 16).unwrap();
        let m = |e: &Vec<u32>| Monomial(e.clone());
        let one = Monomial::one(2);
        // ω = a·d(b) (degree 1), η = d(c) (degree 1)
        let omega_form: Form<Monomial> = if m(&b).is_one() { Element::zero() } else { Element::basis(vec![m(&a), m(&b)]) };
        let eta: Form<Monomial> = if m(&c).is_one() { Element::zero() } else { Element::basis(vec![one, m(&c)]) };
        let prod = omega::form_mul(&alg, &omega_form, &eta).unwrap();
        let swapped = omega::form_mul(&alg, &eta, &omega_form).unwrap();
        let comm = prod.add(&swapped);
        let mu = derham::mu_form(&alg, &comm, 0).unwrap();
        prop_assert!(mu.is_zero());
    }

    #[test]
    fn stokes_on_sphere(coeffs in prop::collection::vec(sphere_terms(4), 3)) {
        let s = models::sphere();
        let eta = KahlerForm::from_terms(&s, 1, coeffs.iter().enumerate().map(|(j, t)| (vec![j], poly(&s, t)))).unwrap();
        let (q, power) = derham::sphere_integrate(&s, &eta.d(&s).unwrap()).unwrap();
        prop_assert!(q.is_zero());
        prop_assert_eq!(power, 1);
    }

    #[test]
    fn residue_of_exact_forms(terms in prop::collection::vec((scalar(), -6i32..=6), 1..6)) {
        let l = models::laurent(24).unwrap();
        let f = terms.iter().fold(Element::zero(), |acc, (c, k)| {
            acc.add(&parse_element(&l, &format!("u^{k}")).unwrap().scaled(c))
        });
        let df = derham::differential_of(&l, &f).unwrap();
        prop_assert!(derham::circle_residue(&l, &df).unwrap().0.is_zero());
    }
}

fn random_invertible_block(vals: &[Scalar]) -> Option<DenseMatrix> {
    // unit stays first; the rest is an arbitrary invertible 2×2 block
    let mut p = DenseMatrix::identity(3);
    p.set(1, 1, vals[0].clone());
    p.set(1, 2, vals[1].clone());
    p.set(2, 1, vals[2].clone());
    p.set(2, 2, vals[3].clone());
    p.inverse().map(|_| p)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 8, ..ProptestConfig::default() })]

    #[test]
    fn hp_is_invariant_under_basis_change(vals in prop::collection::vec(scalar(), 4), shift in prop::collection::vec(scalar(), 2)) {
        let Some(mut p) = random_invertible_block(&vals) else { return Ok(()) };
        // mix the unit into the other basis vectors
        p.set(0, 1, shift[0].clone());
        p.set(0, 2, shift[1].clone());
        for alg in [models::cyclic_group_algebra(3), models::truncated_polynomial(3)] {
            let labels = vec!["1".to_string(), "f1".into(), "f2".into()];
            let changed = alg.change_basis(&p, labels).unwrap();
            prop_assert!(changed.validate().is_valid());
            let a = homology::hp_dims(&alg, 4).unwrap();
            let b = homology::hp_dims(&changed, 4).unwrap();
            prop_assert_eq!((a.even, a.odd), (b.even, b.odd));
            prop_assert_eq!(homology::hochschild_dims(&alg, 3).unwrap(), homology::hochschild_dims(&changed, 3).unwrap());
        }
    }

    #[test]
    fn characters_are_additive_on_block_sums(a in -3i64..=3, b in -3i64..=3, c in 1i64..=3, d in -3i64..=3) {
        let alg = models::truncated_polynomial(2);
        let x = Element::basis(1);
        let mut g = AlgMatrix::identity(&alg, 2);
        g.set(0, 1, x.scaled(&Scalar::from_int(a)));
        g.set(1, 0, x.scaled(&Scalar::from_int(b)));
        let h = alg.invert_matrix(&g, None).unwrap();
        let mut e0 = AlgMatrix::zeros(2, 2);
        e0.set(0, 0, alg.one());
        let e = e0.conjugate(&g, &h, &alg).unwrap();
        let f = models::one_by_one(alg.one());
        let sum = chern::ch_cq_even(&alg, &e.block_sum(&f), 3, SignConvention::Plain).unwrap();
        let parts = chern::ch_cq_even(&alg, &e, 3, SignConvention::Plain).unwrap()
            .add(&chern::ch_cq_even(&alg, &f, 3, SignConvention::Plain).unwrap()).unwrap();
        prop_assert_eq!(sum, parts);

        let u = models::one_by_one(Element::from_terms([(0, Scalar::from_int(c)), (1, Scalar::from_int(d))]));
        let v = models::one_by_one(Element::from_terms([(0, Scalar::one()), (1, Scalar::from_int(a))]));
        let sum = chern::ch_cq_odd(&alg, &u.block_sum(&v), None, 2).unwrap();
        let parts = chern::ch_cq_odd(&alg, &u, None, 2).unwrap().add(&chern::ch_cq_odd(&alg, &v, None, 2).unwrap()).unwrap();
        prop_assert_eq!(sum, parts);
    }

    #[test]
    fn conjugate_idempotents_have_equal_classes(vals in prop::collection::vec(scalar(), 4)) {
        let alg = models::function_algebra_c(2);
        let entries: Vec<_> = (0..4).map(|k| Element::from_terms([(0, vals[k].clone()), (1, vals[(k + 1) % 4].clone())])).collect();
        let g = AlgMatrix::from_entries(2, 2, entries).unwrap();
        let Ok(h) = alg.invert_matrix(&g, None) else { return Ok(()) };
        let mut e = AlgMatrix::zeros(2, 2);
        e.set(0, 0, Element::basis(1));
        let r = chern::conjugate_class_check(&alg, &e, &g, Some(&h), 1, 8, SignConvention::Plain).unwrap();
        prop_assert!(r.degree_zero_boundary);
        prop_assert_eq!(r.is_boundary, Some(true));
    }
}

#[test]
fn morita_invariance_of_hochschild_dimensions() {
    for k in 1..=3 {
        let a = models::function_algebra_c(k);
        let m = cyclochern_core::morita::matrix_algebra(&a, 2).unwrap();
        assert_eq!(homology::hochschild_dims(&a, 2).unwrap(), homology::hochschild_dims(&m.algebra, 2).unwrap());
    }
}
