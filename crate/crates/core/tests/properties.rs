use proptest::prelude::*;

use sforge::algebra::check_symmetric;
use sforge::equivalence::{
    invariants, iso_search, socle_quotient, socle_quotient_at, verify_isomorphism,
    EquivalenceVerdict, IsoBudget,
};
use sforge::examples::symmetric_nakayama;
use sforge::explore::mutate;
use sforge::representations::period_of_simple;
use sforge::{Algebra, AlgebraPresentation, Arrow, Fp, Path, Quiver};

fn det(m: &[Vec<i128>]) -> i128 {
    if m.len() == 1 {
        return m[0][0];
    }
    (0..m.len())
        .map(|c| {
            let minor: Vec<Vec<i128>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(k, _)| *k != c)
                        .map(|(_, x)| *x)
                        .collect()
                })
                .collect();
            let sign = if c % 2 == 0 { 1 } else { -1 };
            sign * m[0][c] * det(&minor)
        })
        .sum()
}

fn cartan_det(alg: &Algebra<Fp>) -> i128 {
    det(&alg
        .cartan()
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect::<Vec<_>>())
}

/// Syzygies of uniserial modules over a symmetric Nakayama algebra.
fn uniserial_period(n: usize, ell: usize, i: usize) -> usize {
    let start = (i, 1);
    let mut cur = start;
    let mut d = 0;
    loop {
        cur = ((cur.0 + cur.1) % n, ell - cur.1);
        d += 1;
        if cur == start {
            return d;
        }
    }
}

/// The same presentation with vertex `v` renamed `perm[v]`.
fn relabel(pres: &AlgebraPresentation<Fp>, perm: &[usize]) -> AlgebraPresentation<Fp> {
    let arrows = pres
        .quiver
        .arrows()
        .iter()
        .map(|a| Arrow {
            id: a.id.clone(),
            source: perm[a.source],
            target: perm[a.target],
        })
        .collect();
    let quiver = Quiver::new(pres.quiver.vertex_count(), arrows).unwrap();
    let mut relations = pres.relations.clone();
    for r in &mut relations {
        for t in &mut r.terms {
            t.path = Path {
                source: perm[t.path.source],
                arrows: t.path.arrows.clone(),
            };
        }
    }
    AlgebraPresentation::new(pres.field, quiver, relations).unwrap()
}

fn nakayama_params() -> impl Strategy<Value = (u64, usize, usize)> {
    (
        prop::sample::select(vec![3u64, 5, 7]),
        1usize..=4,
        1usize..=2,
    )
        .prop_map(|(p, n, k)| (p, n, k * n + 1))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn nakayama_dimension_symmetry_and_periods((p, n, ell) in nakayama_params()) {
        let f = Fp::new(p).unwrap();
        let alg = Algebra::build(&symmetric_nakayama(&f, n, ell).unwrap(), 30).unwrap();
        prop_assert_eq!(alg.dim(), n * ell);
        prop_assert!(check_symmetric(&alg).unwrap().is_some());
        for i in 0..n {
            prop_assert_eq!(period_of_simple(&alg, i, 24).unwrap(), Some(uniserial_period(n, ell, i)));
        }
    }

    #[test]
    fn one_step_mutation_preserves_derived_invariants((p, n, ell) in nakayama_params(), v in 0usize..4) {
        prop_assume!(n >= 2);
        let v = v % n;
        let f = Fp::new(p).unwrap();
        let alg = Algebra::build(&symmetric_nakayama(&f, n, ell).unwrap(), 30).unwrap();
        let mu = mutate(&alg, v, 1).unwrap().algebra;
        prop_assert_eq!(mu.vertex_count(), n);
        prop_assert!(check_symmetric(&mu).unwrap().is_some());
        prop_assert_eq!(invariants(&mu).center_dim, invariants(&alg).center_dim);
        prop_assert_eq!(cartan_det(&mu).abs(), cartan_det(&alg).abs());
    }

    #[test]
    fn relabelled_vertices_are_found_isomorphic((p, n, ell) in nakayama_params(), seed in any::<u64>()) {
        let f = Fp::new(p).unwrap();
        let pres = symmetric_nakayama(&f, n, ell).unwrap();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for k in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(k, (s >> 33) as usize % (k + 1));
        }
        let a = Algebra::build(&pres, 30).unwrap();
        let b = Algebra::build(&relabel(&pres, &perm), 30).unwrap();
        prop_assert_eq!(invariants(&a), invariants(&b));
        match iso_search(&a, &b, &IsoBudget::default()) {
            EquivalenceVerdict::Isomorphic(cert) => prop_assert!(verify_isomorphism(&a, &b, &cert)),
            other => prop_assert!(false, "expected an isomorphism, got {}", other.kind()),
        }
    }

    #[test]
    fn socle_quotients_commute((p, n, ell) in nakayama_params()) {
        let f = Fp::new(p).unwrap();
        let alg = Algebra::build(&symmetric_nakayama(&f, n, ell).unwrap(), 30).unwrap();
        let mut step = alg.clone();
        for i in 0..n {
            step = socle_quotient_at(&step, i).unwrap();
            prop_assert_eq!(step.dim(), alg.dim() - i - 1);
        }
        let all = socle_quotient(&alg).unwrap();
        prop_assert!(iso_search(&step, &all, &IsoBudget::default()).is_isomorphic());
    }
}
