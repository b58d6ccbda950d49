use sforge::algebra::check_symmetric;
use sforge::complexes::ProjComplex;
use sforge::endo::{endo_algebra, present};
use sforge::equivalence::{
    construct_phi, invariants, iso_search, socle_equivalence_by_search, verify_isomorphism,
    verify_phi, verify_socle_certificate, EquivalenceVerdict, IsoBudget,
};
use sforge::examples::{symmetric_nakayama, weighted_surface_example, WsaParams};
use sforge::explore::{explore_mutation_class, mutate, ExploreOptions};
use sforge::mutation::{build_addq_resolution, iterate};
use sforge::verify::{verify, VerifyOptions};
use sforge::{Algebra, Error, Fp};

fn wsa() -> Algebra<Fp> {
    let f = Fp::new(5).unwrap();
    Algebra::build(
        &weighted_surface_example(&f, &WsaParams::new(&f, 1, 2, 3)).unwrap(),
        20,
    )
    .unwrap()
}

fn nakayama(n: usize, ell: usize) -> Algebra<Fp> {
    Algebra::build(
        &symmetric_nakayama(&Fp::new(5).unwrap(), n, ell).unwrap(),
        20,
    )
    .unwrap()
}

/// `dim Hom(T_l, T_k)` from the Euler form: tilting summands have no maps to
/// nonzero shifts, so the alternating sum over terms gives the dimension.
fn euler_cartan(base: &Algebra<Fp>, summands: &[ProjComplex<u64>]) -> Vec<Vec<usize>> {
    let c = base.cartan();
    let chi = |x: &ProjComplex<u64>, y: &ProjComplex<u64>| -> i64 {
        let mut s = 0i64;
        for p in x.lo()..=x.hi() {
            for q in y.lo()..=y.hi() {
                let sign = if (p + q) % 2 == 0 { 1 } else { -1 };
                for &a in x.term(p) {
                    for &b in y.term(q) {
                        s += sign * c[b][a] as i64;
                    }
                }
            }
        }
        s
    };
    summands
        .iter()
        .map(|tk| {
            summands
                .iter()
                .map(|tl| usize::try_from(chi(tl, tk)).unwrap())
                .collect()
        })
        .collect()
}

#[test]
fn presented_cartan_matches_euler_form() {
    for alg in [wsa(), nakayama(2, 3), nakayama(3, 4)] {
        for v in 0..alg.vertex_count() {
            for k in 1..=3 {
                let state = iterate(&alg, v, k).unwrap();
                let summands = state.summands(&alg).unwrap();
                let oracle = euler_cartan(&alg, &summands);
                let p = present(
                    endo_algebra(alg.blocks(), summands).unwrap().blocks(),
                    Some(alg.quiver()),
                )
                .unwrap();
                assert_eq!(p.algebra.cartan(), oracle, "vertex {} step {k}", v + 1);
            }
        }
    }
}

#[test]
fn first_mutation_at_the_border_loop_changes_the_cartan_matrix() {
    let alg = wsa();
    let mu1 = mutate(&alg, 0, 1).unwrap();
    let expected = vec![
        vec![8, 0, 4, 4, 0],
        vec![0, 4, 2, 2, 2],
        vec![4, 2, 3, 3, 1],
        vec![4, 2, 3, 3, 1],
        vec![0, 2, 1, 1, 4],
    ];
    assert_eq!(mu1.algebra.cartan(), expected);
    assert_eq!(mu1.algebra.dim(), 60);
    assert!(check_symmetric(&mu1.algebra).unwrap().is_some());
    assert_eq!(
        invariants(&mu1.algebra).center_dim,
        invariants(&alg).center_dim
    );
}

#[test]
fn second_mutation_at_the_self_folded_loop_reproduces_the_presentation() {
    let alg = wsa();
    let mu = mutate(&alg, 4, 2).unwrap();
    assert_eq!(mu.algebra.quiver(), alg.quiver());
    assert_eq!(mu.algebra.cartan(), alg.cartan());
    let EquivalenceVerdict::Isomorphic(cert) = iso_search(&mu.algebra, &alg, &IsoBudget::default())
    else {
        panic!("no isomorphism found");
    };
    assert!(verify_isomorphism(&mu.algebra, &alg, &cert));
    assert_eq!(cert.permutation, vec![0, 1, 2, 3, 4]);
}

#[test]
fn second_mutation_at_the_border_loop_is_isomorphic_by_a_sign_change() {
    let alg = wsa();
    let mu = mutate(&alg, 0, 2).unwrap();
    assert_eq!(mu.algebra.quiver(), alg.quiver());
    let EquivalenceVerdict::Isomorphic(cert) = iso_search(&mu.algebra, &alg, &IsoBudget::default())
    else {
        panic!("no isomorphism found");
    };
    assert!(verify_isomorphism(&mu.algebra, &alg, &cert));
    let json = cert.to_json(&mu.algebra, &alg);
    let delta = json["substitution"]
        .as_array()
        .unwrap()
        .iter()
        .find(|s| s["arrow"] == "delta")
        .unwrap();
    assert_eq!(delta["image"][0]["coeff"], -1);
}

#[test]
fn phi_certifies_loop_free_vertices() {
    let alg = nakayama(2, 3);
    for v in 0..2 {
        let res = build_addq_resolution(&alg, v, 6).unwrap();
        assert!(res.ker_f1_is_socle);
        let endo = endo_algebra(alg.blocks(), res.state.summands(&alg).unwrap()).unwrap();
        let cert = construct_phi(&alg, &res, &endo).unwrap();
        verify_phi(alg.blocks(), endo.blocks(), &cert).unwrap();
    }
}

#[test]
fn phi_fails_at_loop_vertices_and_the_quotients_still_match() {
    let alg = wsa();
    for v in [0, 4] {
        let res = build_addq_resolution(&alg, v, 6).unwrap();
        let endo = endo_algebra(alg.blocks(), res.state.summands(&alg).unwrap()).unwrap();
        match construct_phi(&alg, &res, &endo) {
            Err(Error::PhiVerificationFailed(msg)) => {
                assert!(msg.contains("basis elements"), "{msg}")
            }
            other => panic!(
                "vertex {}: expected Φ to fail, got {:?}",
                v + 1,
                other.map(|_| ())
            ),
        }
        let mu = present(endo.blocks(), Some(alg.quiver())).unwrap();
        let verdict =
            socle_equivalence_by_search(&mu.algebra, &alg, v, &IsoBudget::default()).unwrap();
        let EquivalenceVerdict::SocleEquivalentAt {
            vertex,
            certificate,
        } = verdict
        else {
            panic!("vertex {}: quotients not matched", v + 1);
        };
        assert_eq!(vertex, v);
        assert!(verify_socle_certificate(&mu.algebra, &alg, v, &certificate));
    }
}

#[test]
fn verification_reports_are_reproducible() {
    let alg = wsa();
    for v in [0, 2, 4] {
        let a = verify(&alg, v, &VerifyOptions::default()).unwrap();
        let b = verify(&alg, v, &VerifyOptions::default()).unwrap();
        assert_eq!(
            serde_json::to_string(&a.report).unwrap(),
            serde_json::to_string(&b.report).unwrap()
        );
        assert!(a.report.steps.iter().all(|s| s.tilting));
        assert_eq!(a.report.exit_code(), 0, "vertex {}", v + 1);
    }
}

#[test]
fn non_periodic_vertex_is_inconclusive() {
    let f = Fp::new(5).unwrap();
    let text = r#"{"field": {"prime": 5}, "vertices": 1,
        "arrows": [{"id": "x", "source": 1, "target": 1}, {"id": "y", "source": 1, "target": 1}],
        "relations": [[{"coeff": 1, "path": ["x", "x"]}], [{"coeff": 1, "path": ["y", "y"]}],
                      [{"coeff": 1, "path": ["x", "y"]}, {"coeff": -1, "path": ["y", "x"]}]]}"#;
    let file = serde_json::from_str(text).unwrap();
    let pres = sforge::AlgebraPresentation::from_file(f, &file).unwrap();
    let alg = Algebra::build(&pres, 10).unwrap();
    let v = verify(&alg, 0, &VerifyOptions::default()).unwrap();
    assert_eq!(v.report.period, None);
    assert_eq!(v.report.verdict_kind, "Inconclusive");
    assert_eq!(v.report.exit_code(), 4);
}

#[test]
fn self_folded_mutation_is_already_isomorphic_after_one_step() {
    let alg = wsa();
    let opts = ExploreOptions {
        depth: 2,
        vertices: Some(vec![0, 4]),
        ..ExploreOptions::default()
    };
    let g = explore_mutation_class(&alg, &opts).unwrap();
    assert_eq!(g.nodes.len(), 2);
    assert_eq!(g.nodes[1].word, vec![0]);
    let edges: Vec<(usize, usize, usize)> =
        g.edges.iter().map(|e| (e.from, e.to, e.vertex)).collect();
    assert_eq!(edges, vec![(0, 1, 0), (0, 0, 4), (1, 0, 0), (1, 1, 4)]);
    assert!(!g.truncated && g.unresolved.is_empty());
}

#[test]
fn border_deformation_survives_mutation_in_characteristic_two() {
    let f = Fp::new(2).unwrap();
    let build = |b: u64| {
        let mut params = WsaParams::new(&f, 1, 2, 3);
        params.b = b;
        Algebra::build(&weighted_surface_example(&f, &params).unwrap(), 20).unwrap()
    };
    let (plain, deformed) = (build(0), build(1));
    assert!(!iso_search(&plain, &deformed, &IsoBudget::default()).is_isomorphic());
    for alg in [&plain, &deformed] {
        let mu = mutate(alg, 0, 2).unwrap();
        assert!(iso_search(&mu.algebra, alg, &IsoBudget::default()).is_isomorphic());
    }
}
