//! Built-in test algebras: a weighted surface algebra on five vertices and the
//! cyclic Nakayama algebras.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::presentation::{AlgebraPresentation, Relation, Term};
use crate::quiver::{Arrow, Path, Quiver};

/// Arrow names and (1-based) endpoints of the five-vertex weighted surface quiver.
const WSA_ARROWS: [(&str, usize, usize); 10] = [
    ("alpha", 1, 3),
    ("beta", 3, 2),
    ("xi", 3, 4),
    ("epsilon", 2, 5),
    ("eta", 5, 2),
    ("nu", 2, 4),
    ("delta", 4, 1),
    ("mu", 4, 3),
    ("rho", 1, 1),
    ("sigma", 5, 5),
];

const F_ORBITS: [&[&str]; 4] = [
    &["alpha", "xi", "delta"],
    &["mu", "beta", "nu"],
    &["epsilon", "sigma", "eta"],
    &["rho"],
];
const G_ORBITS: [&[&str]; 3] = [
    &["alpha", "beta", "epsilon", "eta", "nu", "delta", "rho"],
    &["xi", "mu"],
    &["sigma"],
];

#[derive(Clone, Debug, PartialEq)]
pub struct WsaParams<F: Field> {
    /// weight of the orbit of `alpha`
    pub m: usize,
    /// weight of the orbit of `xi`
    pub n: usize,
    /// weight of the orbit of `sigma`
    pub p: usize,
    pub a: F::Elem,
    pub b: F::Elem,
    pub c: F::Elem,
    pub d: F::Elem,
    /// Allow `n = 1`, where `xi` and `mu` are no longer arrows.
    pub allow_n1: bool,
}

impl<F: Field> WsaParams<F> {
    pub fn new(f: &F, m: usize, n: usize, p: usize) -> Self {
        WsaParams {
            m,
            n,
            p,
            a: f.one(),
            b: f.zero(),
            c: f.one(),
            d: f.one(),
            allow_n1: false,
        }
    }
}

fn f_of(x: &str) -> &'static str {
    for orbit in F_ORBITS {
        if let Some(k) = orbit.iter().position(|y| *y == x) {
            return orbit[(k + 1) % orbit.len()];
        }
    }
    unreachable!("unknown arrow {x}")
}

fn g_of(x: &str) -> &'static str {
    for orbit in G_ORBITS {
        if let Some(k) = orbit.iter().position(|y| *y == x) {
            return orbit[(k + 1) % orbit.len()];
        }
    }
    unreachable!("unknown arrow {x}")
}

/// The other arrow starting where `x` starts.
fn bar(x: &str) -> &'static str {
    let src = WSA_ARROWS.iter().find(|a| a.0 == x).unwrap().1;
    WSA_ARROWS
        .iter()
        .find(|a| a.1 == src && a.0 != x)
        .unwrap()
        .0
}

/// The weighted surface algebra with the given weights and parameters.
///
/// Relations: `x f(x) = c_{x̄} A_{x̄}` for every arrow `x` (the border loop gets
/// the extra socle term `b B_rho`), plus the zero relations `x f(x) g(f(x))` and
/// `x g(x) f(g(x))`.
pub fn weighted_surface_example<F: Field>(
    f: &F,
    params: &WsaParams<F>,
) -> Result<AlgebraPresentation<F>> {
    let WsaParams { m, n, p, .. } = *params;
    if m < 1 {
        return Err(Error::InvalidWeights("m must be at least 1".into()));
    }
    if p < 3 {
        return Err(Error::InvalidWeights("p must be at least 3".into()));
    }
    if n < 1 || (n == 1 && !params.allow_n1) {
        return Err(Error::InvalidWeights(
            "n must be at least 2 (n = 1 needs the explicit variant flag)".into(),
        ));
    }
    for (name, v) in [("a", &params.a), ("c", &params.c), ("d", &params.d)] {
        if f.is_zero(v) {
            return Err(Error::InvalidWeights(format!(
                "parameter {name} must be nonzero"
            )));
        }
    }
    let weight = |x: &str| -> usize {
        if G_ORBITS[0].contains(&x) {
            7 * m
        } else if G_ORBITS[1].contains(&x) {
            2 * n
        } else {
            p
        }
    };
    let scalar = |x: &str| -> F::Elem {
        if G_ORBITS[0].contains(&x) {
            params.a.clone()
        } else if G_ORBITS[1].contains(&x) {
            params.c.clone()
        } else {
            params.d.clone()
        }
    };
    let g_path = |x: &'static str, len: usize| -> Vec<&'static str> {
        let mut out = Vec::with_capacity(len);
        let mut cur = x;
        for _ in 0..len {
            out.push(cur);
            cur = g_of(cur);
        }
        out
    };

    // relations over the full ten-arrow quiver, as (coeff, word) lists
    let mut rels: Vec<Vec<(F::Elem, Vec<&'static str>)>> = Vec::new();
    for &(x, _, _) in &WSA_ARROWS {
        let xb = bar(x);
        let mut terms = vec![(f.one(), vec![x, f_of(x)])];
        terms.push((f.neg(&scalar(xb)), g_path(xb, weight(xb) - 1)));
        if x == "rho" && !f.is_zero(&params.b) {
            terms.push((f.neg(&params.b), g_path("rho", weight("rho"))));
        }
        rels.push(terms);
    }
    for &(x, _, _) in &WSA_ARROWS {
        let fx = f_of(x);
        if weight(f_of(fx)) >= 3 {
            rels.push(vec![(f.one(), vec![x, fx, g_of(fx)])]);
        }
        let gx = g_of(x);
        if weight(fx) >= 3 {
            rels.push(vec![(f.one(), vec![x, gx, f_of(gx)])]);
        }
    }

    let mut names: Vec<&str> = WSA_ARROWS.iter().map(|a| a.0).collect();
    if n == 1 {
        // xi = c^{-1} beta nu and mu = c^{-1} delta alpha are no longer arrows
        let cinv = f.inv(&params.c).unwrap();
        names.retain(|x| *x != "xi" && *x != "mu");
        let mut substituted = Vec::new();
        for rel in rels {
            let is_definition = rel.iter().any(|(_, w)| w.len() == 1);
            if is_definition {
                continue;
            }
            let mut terms = Vec::new();
            for (coeff, word) in rel {
                let mut c = coeff;
                let mut out = Vec::new();
                for x in word {
                    match x {
                        "xi" => {
                            c = f.mul(&c, &cinv);
                            out.extend(["beta", "nu"]);
                        }
                        "mu" => {
                            c = f.mul(&c, &cinv);
                            out.extend(["delta", "alpha"]);
                        }
                        other => out.push(other),
                    }
                }
                terms.push((c, out));
            }
            substituted.push(terms);
        }
        rels = substituted;
    }

    let arrows: Vec<Arrow> = WSA_ARROWS
        .iter()
        .filter(|a| names.contains(&a.0))
        .map(|&(id, s, t)| Arrow {
            id: id.into(),
            source: s - 1,
            target: t - 1,
        })
        .collect();
    let quiver = Quiver::new(5, arrows)?;
    let mut relations = Vec::new();
    for rel in rels {
        let mut terms = Vec::new();
        for (coeff, word) in rel {
            let ids: Vec<String> = word.iter().map(|s| s.to_string()).collect();
            terms.push(Term {
                coeff,
                path: quiver.path_from_ids(&ids)?,
            });
        }
        let rel = Relation { terms }.collected(f);
        if !rel.terms.is_empty() {
            relations.push(rel);
        }
    }
    let meta = json!({
        "family": "weighted_surface",
        "weights": {"m": m, "n": n, "p": p},
        "parameters": {
            "a": f.to_json(&params.a),
            "b": f.to_json(&params.b),
            "c": f.to_json(&params.c),
            "d": f.to_json(&params.d),
        },
        "f_orbits": F_ORBITS.iter().map(|o| o.iter().filter(|x| names.contains(x)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "g_orbits": G_ORBITS.iter().map(|o| o.iter().filter(|x| names.contains(x)).collect::<Vec<_>>()).collect::<Vec<_>>(),
    });
    Ok(AlgebraPresentation::new(f.clone(), quiver, relations)?.with_meta(meta))
}

/// Cyclic quiver on `n` vertices with all paths of length `ell` set to zero.
pub fn symmetric_nakayama<F: Field>(f: &F, n: usize, ell: usize) -> Result<AlgebraPresentation<F>> {
    if n < 1 || ell < 2 {
        return Err(Error::InvalidWeights(
            "need n >= 1 and Loewy length >= 2".into(),
        ));
    }
    let name = |k: usize| {
        if n <= 26 {
            ((b'a' + k as u8) as char).to_string()
        } else {
            format!("a{}", k + 1)
        }
    };
    let arrows = (0..n)
        .map(|k| Arrow {
            id: name(k),
            source: k,
            target: (k + 1) % n,
        })
        .collect();
    let quiver = Quiver::new(n, arrows)?;
    let relations = (0..n)
        .map(|k| {
            Relation::monomial(
                f,
                Path {
                    source: k,
                    arrows: (0..ell).map(|t| (k + t) % n).collect(),
                },
            )
        })
        .collect();
    let meta = json!({"family": "nakayama", "vertices": n, "loewy_length": ell});
    Ok(AlgebraPresentation::new(f.clone(), quiver, relations)?.with_meta(meta))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LoopKind {
    None,
    /// a loop forming its own `f`-orbit
    Border,
    /// a loop inside an `f`-orbit of length three
    SelfFolded,
}

/// Loop type at each vertex, read from the generator's `f`-orbit metadata.
pub fn classify_loops<F: Field>(pres: &AlgebraPresentation<F>) -> Result<Vec<LoopKind>> {
    let orbits = pres
        .meta
        .as_ref()
        .and_then(|m| m.get("f_orbits"))
        .and_then(Value::as_array)
        .ok_or(Error::MetadataMissing)?;
    let q = &pres.quiver;
    let mut kinds = vec![LoopKind::None; q.vertex_count()];
    for orbit in orbits {
        let ids: Vec<&str> = orbit
            .as_array()
            .ok_or(Error::MetadataMissing)?
            .iter()
            .filter_map(Value::as_str)
            .collect();
        for id in &ids {
            let k = q.arrow_index(id).ok_or(Error::MetadataMissing)?;
            let a = q.arrow(k);
            if a.source == a.target {
                kinds[a.source] = if ids.len() == 1 {
                    LoopKind::Border
                } else {
                    LoopKind::SelfFolded
                };
            }
        }
    }
    Ok(kinds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Algebra;
    use crate::field::Fp;

    fn f5() -> Fp {
        Fp::new(5).unwrap()
    }

    fn rel_text(p: &AlgebraPresentation<Fp>, k: usize) -> Vec<(i64, String)> {
        p.relations[k]
            .terms
            .iter()
            .map(|t| {
                (
                    p.field.balanced(t.coeff),
                    p.quiver.path_ids(&t.path).join(" "),
                )
            })
            .collect()
    }

    #[test]
    fn displayed_relations() {
        let f = f5();
        let p = weighted_surface_example(&f, &WsaParams::new(&f, 1, 2, 3)).unwrap();
        let all: Vec<_> = (0..p.relations.len()).map(|k| rel_text(&p, k)).collect();
        assert!(all.contains(&vec![
            (1, "alpha xi".into()),
            (-1, "rho alpha beta epsilon eta nu".into())
        ]));
        assert!(all.contains(&vec![(1, "delta alpha".into()), (-1, "mu xi mu".into())]));
        assert!(all.contains(&vec![(1, "eta epsilon".into()), (-1, "sigma sigma".into())]));
        assert!(all.contains(&vec![
            (1, "rho rho".into()),
            (-1, "alpha beta epsilon eta nu delta".into())
        ]));
        assert!(all.contains(&vec![(1, "epsilon eta epsilon".into())]));
        assert_eq!(p.relations.len(), 10 + 20);
    }

    #[test]
    fn border_term_only_changes_rho_relation() {
        let f = f5();
        let mut params = WsaParams::new(&f, 1, 2, 3);
        let p0 = weighted_surface_example(&f, &params).unwrap();
        params.b = 1;
        let p1 = weighted_surface_example(&f, &params).unwrap();
        let diff: Vec<usize> = (0..p0.relations.len())
            .filter(|&k| p0.relations[k] != p1.relations[k])
            .collect();
        assert_eq!(diff.len(), 1);
        assert!(rel_text(&p1, diff[0])[0].1 == "rho rho");
    }

    #[test]
    fn weight_guards() {
        let f = f5();
        assert!(matches!(
            weighted_surface_example(&f, &WsaParams::new(&f, 1, 2, 2)),
            Err(Error::InvalidWeights(_))
        ));
        assert!(weighted_surface_example(&f, &WsaParams::new(&f, 1, 1, 3)).is_err());
    }

    #[test]
    fn loops_classified() {
        let f = f5();
        let p = weighted_surface_example(&f, &WsaParams::new(&f, 1, 2, 3)).unwrap();
        let k = classify_loops(&p).unwrap();
        assert_eq!(
            k,
            vec![
                LoopKind::Border,
                LoopKind::None,
                LoopKind::None,
                LoopKind::None,
                LoopKind::SelfFolded
            ]
        );
        let n = symmetric_nakayama(&f, 2, 3).unwrap();
        assert!(matches!(classify_loops(&n), Err(Error::MetadataMissing)));
    }

    #[test]
    fn wsa_dimension() {
        let f = f5();
        let p = weighted_surface_example(&f, &WsaParams::new(&f, 1, 2, 3)).unwrap();
        let a = Algebra::build(&p, 30).unwrap();
        // sum over g-orbits of m_O * |O|^2
        assert_eq!(a.dim(), 49 + 2 * 4 + 3);
    }
}

#[cfg(test)]
mod grid_tests {
    use super::*;
    use crate::algebra::{check_symmetric, nakayama_permutation, Algebra};
    use crate::field::Fp;

    #[test]
    fn wsa_grid_builds_symmetric() {
        let f = Fp::new(5).unwrap();
        for m in 1..=2 {
            for n in 2..=3 {
                for p in 3..=4 {
                    let t = std::time::Instant::now();
                    let pres = weighted_surface_example(&f, &WsaParams::new(&f, m, n, p)).unwrap();
                    let a = Algebra::build(&pres, 40).unwrap();
                    assert_eq!(a.dim(), 49 * m + 4 * n + p);
                    assert_eq!(nakayama_permutation(&a).unwrap(), vec![0, 1, 2, 3, 4]);
                    assert!(check_symmetric(&a).unwrap().is_some());
                    eprintln!(
                        "{m} {n} {p}: dim {} ll {} {:?}",
                        a.dim(),
                        a.loewy_length(),
                        t.elapsed()
                    );
                }
            }
        }
    }
}
