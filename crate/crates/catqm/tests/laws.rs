//! Law-level integration tests: the coherence zigzags, functoriality and
//! dagger laws on random data, adjoint identities, and the scalar
//! semiring. Where an identity has a second route, the comparison runs
//! against the plain-loop oracle in `support`.

mod support;

use catqm::ops::{equal_up_to_scalar, morphism_prim, scalar_add_categorical, scalar_mul_categorical};
use catqm::{eval, Complex64, Matrix, ObjectType, Term};
use proptest::prelude::*;
use support::*;

const TOL: f64 = 1e-9;

fn obj(name: &str, dim: usize) -> ObjectType {
    ObjectType::base(name, dim)
}

#[test]
fn zigzags_are_identities_in_fdhilb() {
    for dim in 1..=5 {
        let a = obj("A", dim);
        let id = Matrix::<Complex64>::identity(dim);
        assert!(eval::<Complex64>(&snake(&a)).expect("well typed").approx_eq(&id, TOL), "dim {dim}");
        assert!(
            eval::<Complex64>(&cosnake(&a)).expect("well typed").approx_eq(&id, TOL),
            "dual, dim {dim}"
        );
    }
}

#[test]
fn zigzags_are_identities_in_rel() {
    for dim in 1..=5 {
        let a = obj("A", dim);
        let id = Matrix::<bool>::identity(dim);
        assert_eq!(eval::<bool>(&snake(&a)).expect("well typed"), id, "dim {dim}");
        assert_eq!(eval::<bool>(&cosnake(&a)).expect("well typed"), id, "dual, dim {dim}");
    }
}

// ───────────────────────── random-data strategies ─────────────────────────

fn centry() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn cmatrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix<Complex64>> {
    proptest::collection::vec(centry(), rows * cols)
        .prop_map(move |v| Matrix::from_vec(rows, cols, v).expect("strategy shape"))
}

fn rmatrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix<bool>> {
    proptest::collection::vec(any::<bool>(), rows * cols)
        .prop_map(move |v| Matrix::from_vec(rows, cols, v).expect("strategy shape"))
}

/// Three composable complex matrices with dimensions up to four.
fn chain3() -> impl Strategy<Value = (Matrix<Complex64>, Matrix<Complex64>, Matrix<Complex64>)> {
    (1..=4usize, 1..=4usize, 1..=4usize, 1..=4usize)
        .prop_flat_map(|(a, b, c, d)| (cmatrix(b, a), cmatrix(c, b), cmatrix(d, c)))
}

/// Interface objects named by dimension, so drawn matrices compose.
fn vobj(dim: usize) -> ObjectType {
    ObjectType::base(&format!("V{dim}"), dim)
}

fn prim(name: &str, m: &Matrix<Complex64>) -> Term {
    morphism_prim(name, &vobj(m.cols()), &vobj(m.rows()), m)
}

proptest! {
    #[test]
    fn composition_is_associative_and_matches_the_oracle((f, g, h) in chain3()) {
        let t1 = Term::compose(Term::compose(prim("h", &h), prim("g", &g)), prim("f", &f));
        let t2 = Term::compose(prim("h", &h), Term::compose(prim("g", &g), prim("f", &f)));
        let m1 = eval::<Complex64>(&t1).expect("well typed");
        let m2 = eval::<Complex64>(&t2).expect("well typed");
        prop_assert!(m1.approx_eq(&m2, TOL));

        let gf = naive_matmul(&entries(&g), g.rows(), g.cols(), &entries(&f), f.rows(), f.cols());
        let hgf = naive_matmul(&entries(&h), h.rows(), h.cols(), &gf, g.rows(), f.cols());
        prop_assert!(close(&entries(&m1), &hgf, TOL));
    }

    #[test]
    fn dagger_is_contravariant_and_involutive((f, g, _) in chain3()) {
        let fp = prim("f", &f);
        let gp = prim("g", &g);
        let lhs = eval::<Complex64>(&Term::dagger(Term::compose(gp.clone(), fp.clone())))
            .expect("well typed");
        let rhs = eval::<Complex64>(&Term::compose(Term::dagger(fp.clone()), Term::dagger(gp)))
            .expect("well typed");
        prop_assert!(lhs.approx_eq(&rhs, TOL));

        let twice = eval::<Complex64>(&Term::dagger(Term::dagger(fp.clone()))).expect("well typed");
        prop_assert!(twice.approx_eq(&eval::<Complex64>(&fp).expect("well typed"), TOL));

        let adj = naive_adjoint(&entries(&f), f.rows(), f.cols());
        let once = eval::<Complex64>(&Term::dagger(fp)).expect("well typed");
        prop_assert!(close(&entries(&once), &adj, TOL));
    }

    #[test]
    fn tensor_is_bifunctorial(
        (f1, g1, _) in chain3(),
        (f2, g2, _) in chain3(),
    ) {
        // (g1 (x) g2) . (f1 (x) f2) = (g1 . f1) (x) (g2 . f2)
        let lhs = Term::compose(
            Term::tensor(prim("g1", &g1), prim("g2", &g2)),
            Term::tensor(prim("f1", &f1), prim("f2", &f2)),
        );
        let rhs = Term::tensor(
            Term::compose(prim("g1", &g1), prim("f1", &f1)),
            Term::compose(prim("g2", &g2), prim("f2", &f2)),
        );
        let ml = eval::<Complex64>(&lhs).expect("well typed");
        let mr = eval::<Complex64>(&rhs).expect("well typed");
        prop_assert!(ml.approx_eq(&mr, TOL));

        let p1 = naive_matmul(&entries(&g1), g1.rows(), g1.cols(), &entries(&f1), f1.rows(), f1.cols());
        let p2 = naive_matmul(&entries(&g2), g2.rows(), g2.cols(), &entries(&f2), f2.rows(), f2.cols());
        let oracle = naive_kron(&p1, g1.rows(), f1.cols(), &p2, g2.rows(), f2.cols());
        prop_assert!(close(&entries(&ml), &oracle, TOL));
    }

    #[test]
    fn adjoint_law_moves_f_across_the_inner_product(
        (f, _, _) in chain3(),
        seed_entries in proptest::collection::vec(centry(), 8),
    ) {
        // <f psi, phi> = <psi, f+ phi> with psi on the domain, phi on the
        // codomain; inner products by plain loops.
        let (dd, dc) = (f.cols(), f.rows());
        let psi: Vec<C> = (0..dd).map(|i| { let e = seed_entries[i % 8]; (e.re, e.im) }).collect();
        let phi: Vec<C> = (0..dc).map(|i| { let e = seed_entries[(i + 3) % 8]; (e.re, e.im) }).collect();

        let fm = entries(&f);
        let f_psi = naive_matmul(&fm, dc, dd, &psi, dd, 1);
        let lhs = (0..dc).fold((0.0, 0.0), |acc, i| cadd(acc, cmul(cconj(f_psi[i]), phi[i])));

        let fd = naive_adjoint(&fm, dc, dd);
        let fd_phi = naive_matmul(&fd, dd, dc, &phi, dc, 1);
        let rhs = (0..dd).fold((0.0, 0.0), |acc, i| cadd(acc, cmul(cconj(psi[i]), fd_phi[i])));

        prop_assert!(close(&[lhs], &[rhs], TOL));

        // The same identity through the evaluator.
        let psi_m = Matrix::from_vec(dd, 1, psi.iter().map(|&(re, im)| Complex64::new(re, im)).collect()).expect("column");
        let phi_m = Matrix::from_vec(dc, 1, phi.iter().map(|&(re, im)| Complex64::new(re, im)).collect()).expect("column");
        let fmat = eval::<Complex64>(&prim("f", &f)).expect("well typed");
        let left = fmat.mul(&psi_m).expect("shapes").adjoint().mul(&phi_m).expect("shapes");
        let right = psi_m.adjoint().mul(
            &eval::<Complex64>(&Term::dagger(prim("f", &f))).expect("well typed").mul(&phi_m).expect("shapes"),
        ).expect("shapes");
        prop_assert!(left.approx_eq(&right, TOL));
    }

    #[test]
    fn names_slide_boxes_between_legs((f, g, _) in chain3()) {
        // (1 (x) g) . name(f) = (f_* (x) 1)+ ... use the simplest reading:
        // name(g . f) = (1 (x) g) . name(f), both I -> D* (x) C.
        let fp = prim("f", &f);
        let gp = prim("g", &g);
        let lhs = eval::<Complex64>(&Term::name(Term::compose(gp.clone(), fp.clone())))
            .expect("well typed");
        let rhs = eval::<Complex64>(&Term::compose(
            Term::tensor(Term::Id(vobj(f.cols()).dual()), gp),
            Term::name(fp),
        ))
        .expect("well typed");
        prop_assert!(lhs.approx_eq(&rhs, TOL));
    }

    #[test]
    fn scalar_semiring_laws(a in centry(), b in centry(), c in centry()) {
        // Categorical sum and product agree with the carrier ring.
        let sum = scalar_add_categorical(&a, &b).expect("scalars compose");
        prop_assert!(close(&[(sum.re, sum.im)], &[((a + b).re, (a + b).im)], TOL));
        let prod = scalar_mul_categorical(&a, &b).expect("scalars compose");
        prop_assert!(close(&[(prod.re, prod.im)], &[((a * b).re, (a * b).im)], TOL));

        // Commutativity and distributivity through the categorical routes.
        let ba = scalar_mul_categorical(&b, &a).expect("scalars compose");
        prop_assert!(close(&[(prod.re, prod.im)], &[(ba.re, ba.im)], TOL));
        let bc = scalar_add_categorical(&b, &c).expect("scalars compose");
        let lhs = scalar_mul_categorical(&a, &bc).expect("scalars compose");
        let ab = scalar_mul_categorical(&a, &b).expect("scalars compose");
        let ac = scalar_mul_categorical(&a, &c).expect("scalars compose");
        let rhs = scalar_add_categorical(&ab, &ac).expect("scalars compose");
        prop_assert!(close(&[(lhs.re, lhs.im)], &[(rhs.re, rhs.im)], TOL));
    }

    #[test]
    fn rel_dagger_is_converse_and_composition_is_reachability(
        r1 in rmatrix(3, 4),
        r2 in rmatrix(2, 3),
    ) {
        let r1p = morphism_prim("r1", &obj("X", 4), &obj("Y", 3), &r1);
        let r2p = morphism_prim("r2", &obj("Y", 3), &obj("Z", 2), &r2);

        let dag = eval::<bool>(&Term::dagger(r1p.clone())).expect("well typed");
        for y in 0..3 {
            for x in 0..4 {
                prop_assert_eq!(*dag.get(x, y), *r1.get(y, x), "converse flips each pair");
            }
        }

        let comp = eval::<bool>(&Term::compose(r2p, r1p)).expect("well typed");
        for z in 0..2 {
            for x in 0..4 {
                let reach = (0..3).any(|y| *r2.get(z, y) && *r1.get(y, x));
                prop_assert_eq!(*comp.get(z, x), reach, "two-hop reachability");
            }
        }
    }

    #[test]
    fn up_to_scalar_matches_the_oracle_ratio(
        m in cmatrix(3, 3),
        k in centry(),
    ) {
        prop_assume!(k.norm() > 1e-3);
        let scaled = m.scale(&k);
        // The library reads the scalar off as `second = r * first`.
        let cmp = equal_up_to_scalar(&m, &scaled, TOL).expect("same shape");
        let oracle = scalar_ratio(&entries(&scaled), &entries(&m), TOL);
        prop_assert_eq!(cmp.equal, oracle.is_some());
        if let (Some(s), Some((or, oi))) = (cmp.scalar, oracle) {
            prop_assert!(close(&[(s.re, s.im)], &[(or, oi)], 1e-6));
        }
        let unrelated = equal_up_to_scalar(&m, &m.adjoint(), TOL).expect("same shape");
        let unrelated_oracle =
            scalar_ratio(&entries(&m.adjoint()), &entries(&m), TOL);
        prop_assert_eq!(unrelated.equal, unrelated_oracle.is_some());
    }
}
