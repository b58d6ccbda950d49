//! Endomorphism algebras of sums of complexes and their presentation by a
//! quiver with relations.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::algebra::{Algebra, BlockAlgebra};
use crate::complexes::{hom_complex, ChainMap, HomSpace, ProjComplex};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{is_zero_vec, Matrix, Subspace};
use crate::presentation::{AlgebraPresentation, Relation, Term};
use crate::quiver::{Arrow, Path, Quiver};

/// `End_{K^b}(T_1 ⊕ ... ⊕ T_n)` with block `(k,l) = Hom(T_l, T_k)`, so that
/// the product of blocks `(k,l)` and `(l,m)` is composition.
#[derive(Clone, Debug)]
pub struct EndoAlgebra<F: Field> {
    summands: Vec<ProjComplex<F::Elem>>,
    homs: Vec<HomSpace<F::Elem>>,
    blocks: BlockAlgebra<F>,
}

impl<F: Field> EndoAlgebra<F> {
    pub fn summands(&self) -> &[ProjComplex<F::Elem>] {
        &self.summands
    }

    pub fn vertex_count(&self) -> usize {
        self.summands.len()
    }

    /// `Hom(T_l, T_k)`.
    pub fn hom(&self, k: usize, l: usize) -> &HomSpace<F::Elem> {
        &self.homs[k * self.vertex_count() + l]
    }

    pub fn blocks(&self) -> &BlockAlgebra<F> {
        &self.blocks
    }

    pub fn dim(&self) -> usize {
        self.blocks.dim()
    }

    /// Coordinates in block `(k,l)` of the class of a chain map `T_l -> T_k`.
    pub fn class_of(&self, k: usize, l: usize, g: &ChainMap<F::Elem>) -> Vec<F::Elem> {
        self.hom(k, l).class_coords(self.blocks.field(), g)
    }

    /// The canonical chain map representing the given coordinates of block `(k,l)`.
    pub fn representative(
        &self,
        base: &BlockAlgebra<F>,
        k: usize,
        l: usize,
        coords: &[F::Elem],
    ) -> ChainMap<F::Elem> {
        self.hom(k, l).from_coords(base, coords)
    }
}

/// Computes the endomorphism algebra of `T = T_1 ⊕ ... ⊕ T_n` in the homotopy
/// category over `base`, and checks that the summands have split local
/// endomorphism rings and are pairwise non-isomorphic.
pub fn endo_algebra<F: Field>(
    base: &BlockAlgebra<F>,
    summands: Vec<ProjComplex<F::Elem>>,
) -> Result<EndoAlgebra<F>> {
    let f = base.field();
    let n = summands.len();
    let homs: Vec<HomSpace<F::Elem>> = (0..n * n)
        .into_par_iter()
        .map(|idx| hom_complex(base, &summands[idx % n], &summands[idx / n]))
        .collect();
    let reps: Vec<Vec<ChainMap<F::Elem>>> = homs.iter().map(|h| h.reps(base)).collect();
    let tables: Vec<Vec<Vec<F::Elem>>> = (0..n * n * n)
        .into_par_iter()
        .map(|idx| {
            let (k, l, m) = (idx / (n * n), (idx / n) % n, idx % n);
            let mut out = Vec::new();
            for a in &reps[k * n + l] {
                for b in &reps[l * n + m] {
                    let c = a.compose(base, &summands[m], &summands[l], &summands[k], b);
                    out.push(homs[k * n + m].class_coords(f, &c));
                }
            }
            out
        })
        .collect();
    let units = (0..n)
        .map(|k| homs[k * n + k].class_coords(f, &ChainMap::identity(base, &summands[k])))
        .collect();
    let dims: Vec<usize> = homs.iter().map(HomSpace::dim).collect();
    let blocks = BlockAlgebra::from_fn(f.clone(), dims.clone(), units, |k, l, m, s, t| {
        tables[(k * n + l) * n + m][s * dims[l * n + m] + t].clone()
    });
    let e = EndoAlgebra {
        summands,
        homs,
        blocks,
    };
    radical_data(&e.blocks)?;
    Ok(e)
}

/// Residue maps, radical and radical powers of a basic algebra given by blocks.
#[derive(Clone, Debug)]
pub struct RadicalData<E> {
    /// `residues[k][s]` is the scalar part of basis element `s` of block `(k,k)`
    pub residues: Vec<Vec<E>>,
    /// `powers[p-1][k*n+m]` is `e_k J^p e_m`, for `p = 1..=loewy_length` (the last is zero)
    pub powers: Vec<Vec<Subspace<E>>>,
    pub loewy_length: usize,
}

impl<E: Clone + PartialEq> RadicalData<E> {
    pub fn radical(&self) -> &[Subspace<E>] {
        &self.powers[0]
    }

    /// `e_k J^p e_m`; zero beyond the Loewy length.
    pub fn power(&self, p: usize, k: usize, m: usize, n: usize, ambient: usize) -> Subspace<E> {
        if p == 0 {
            panic!("J^0 is the whole algebra");
        }
        self.powers
            .get(p - 1)
            .map_or_else(|| Subspace::new(ambient), |level| level[k * n + m].clone())
    }
}

fn all_elements<F: Field>(f: &F, field_order_cap: u64) -> Option<Vec<F::Elem>> {
    let q = f.order()?;
    (q <= field_order_cap).then(|| (0..q).map(|k| f.nth(k)).collect())
}

/// The scalar `λ` with `x - λ` nilpotent, for `x` in the local algebra `e_k A e_k`.
fn residue_of<F: Field>(blocks: &BlockAlgebra<F>, k: usize, x: &[F::Elem]) -> Result<F::Elem> {
    let f = blocks.field();
    let d = blocks.block_dim(k, k);
    let unit = blocks.unit(k).to_vec();
    // minimal polynomial by Krylov iteration on the unit
    let mut powers = vec![unit.clone()];
    let coeffs = loop {
        let next = blocks.mul(k, k, k, powers.last().unwrap(), x);
        let m = Matrix::from_columns(f, d, powers.clone());
        if let Some(c) = m.solve(f, &next) {
            break c;
        }
        powers.push(next);
    };
    let s = coeffs.len();
    // x^s = sum c_j x^j; if the polynomial is (t - λ)^s then with s = q r,
    // q the largest power of the characteristic dividing s, the coefficient of
    // t^{s-q} is -r λ^q, and λ^q = λ over a prime field
    let p = f.characteristic();
    let mut q = 1usize;
    if p > 0 {
        while s % (q * p as usize) == 0 {
            q *= p as usize;
        }
    }
    let r = s / q;
    let c = &coeffs[s - q];
    let lam_q = f.mul(
        c,
        &f.inv(&f.from_i64(r as i64))
            .expect("r is prime to the characteristic"),
    );
    let lam = if q == 1 || f.order().is_some() {
        lam_q
    } else {
        unreachable!("characteristic zero has q = 1")
    };
    let mut y: Vec<F::Elem> = x
        .iter()
        .zip(&unit)
        .map(|(a, u)| f.sub(a, &f.mul(&lam, u)))
        .collect();
    let shifted = y.clone();
    for _ in 1..s {
        y = blocks.mul(k, k, k, &y, &shifted);
    }
    if s == 0 || is_zero_vec(f, &y) {
        return Ok(lam);
    }
    // not of the form (t - λ)^s: either two roots in the field (not local) or
    // an irreducible factor of degree > 1 (residue field larger than the base)
    let eval = |t: &F::Elem| {
        let mut acc = f.one();
        let mut val = f.zero();
        let mut pw = Vec::with_capacity(s);
        for _ in 0..s {
            pw.push(acc.clone());
            acc = f.mul(&acc, t);
        }
        for (cj, tj) in coeffs.iter().zip(&pw) {
            val = f.add(&val, &f.mul(cj, tj));
        }
        f.sub(&acc, &val)
    };
    if let Some(all) = all_elements(f, 100_000) {
        let roots = all.iter().filter(|t| f.is_zero(&eval(t))).count();
        if roots >= 2 {
            return Err(Error::NotBasic(format!(
                "endomorphism ring of summand {} is not local",
                k + 1
            )));
        }
    }
    Err(Error::NonSplitEndomorphism {
        summand: k + 1,
        detail: format!("an element has minimal polynomial of degree {s} that is not a power of a linear factor"),
    })
}

/// Radical of a basic algebra whose diagonal blocks are split local.
pub fn radical_data<F: Field>(blocks: &BlockAlgebra<F>) -> Result<RadicalData<F::Elem>> {
    let f = blocks.field();
    let n = blocks.vertex_count();
    let mut residues = Vec::with_capacity(n);
    for k in 0..n {
        let d = blocks.block_dim(k, k);
        let lams = (0..d)
            .map(|s| residue_of(blocks, k, &blocks.basis_vector(k, k, s)))
            .collect::<Result<Vec<_>>>()?;
        residues.push(lams);
    }
    let residue = |k: usize, x: &[F::Elem]| -> F::Elem {
        x.iter()
            .zip(&residues[k])
            .fold(f.zero(), |acc, (a, l)| f.add(&acc, &f.mul(a, l)))
    };
    for k in 0..n {
        if !f.is_one(&residue(k, blocks.unit(k))) {
            return Err(Error::NotBasic(format!(
                "residue map of summand {} is not unital",
                k + 1
            )));
        }
    }
    for k in 0..n {
        for l in (0..n).filter(|&l| l != k) {
            for s in 0..blocks.block_dim(k, l) {
                for t in 0..blocks.block_dim(l, k) {
                    if !f.is_zero(&residue(k, blocks.basis_product(k, l, k, s, t))) {
                        return Err(Error::NotBasic(format!(
                            "summands {} and {} are isomorphic",
                            k + 1,
                            l + 1
                        )));
                    }
                }
            }
        }
    }
    let radical: Vec<Subspace<F::Elem>> = (0..n * n)
        .map(|idx| {
            let (k, m) = (idx / n, idx % n);
            let d = blocks.block_dim(k, m);
            let vectors = (0..d).map(|s| {
                let mut v = blocks.basis_vector(k, m, s);
                if k == m {
                    let lam = residues[k][s].clone();
                    for (a, u) in v.iter_mut().zip(blocks.unit(k)) {
                        *a = f.sub(a, &f.mul(&lam, u));
                    }
                }
                v
            });
            Subspace::spanned_by(f, d, vectors)
        })
        .collect();
    let spans = |level: &[Subspace<F::Elem>]| -> Vec<Vec<Vec<F::Elem>>> {
        level.iter().map(|s| s.basis().to_vec()).collect()
    };
    let rad_vectors = spans(&radical);
    let mut powers = vec![radical.clone()];
    loop {
        let last = powers.last().unwrap();
        if last.iter().all(|s| s.dim() == 0) {
            break;
        }
        if powers.len() > blocks.dim() + 1 {
            return Err(Error::NotBasic("radical is not nilpotent".into()));
        }
        let left = spans(last);
        let next: Vec<Subspace<F::Elem>> = (0..n * n)
            .map(|idx| blocks.product_space(&left, &rad_vectors, idx / n, idx % n))
            .collect();
        for (nx, cur) in next.iter().zip(last) {
            if nx.basis().iter().any(|v| !cur.contains(f, v)) {
                return Err(Error::NotBasic("radical is not an ideal".into()));
            }
        }
        powers.push(next);
    }
    let loewy_length = powers.len();
    Ok(RadicalData {
        residues,
        powers,
        loewy_length,
    })
}

/// The Gabriel quiver with chosen arrow lifts in `J \ J²`.
#[derive(Clone, Debug)]
pub struct GabrielQuiver<E> {
    pub quiver: Quiver,
    /// lift of arrow `a` as an element of block `(source, target)`
    pub lifts: Vec<Vec<E>>,
    pub radical: RadicalData<E>,
}

/// Arrows `k -> m` correspond to a canonical basis of `e_k J e_m / e_k J² e_m`.
/// When `names` has the same number of arrows between every pair of vertices,
/// its arrow ids and order are reused.
pub fn gabriel_quiver<F: Field>(
    blocks: &BlockAlgebra<F>,
    names: Option<&Quiver>,
) -> Result<GabrielQuiver<F::Elem>> {
    let f = blocks.field();
    let n = blocks.vertex_count();
    let radical = radical_data(blocks)?;
    let mut pools: Vec<Vec<Vec<F::Elem>>> = (0..n * n)
        .map(|idx| {
            let (k, m) = (idx / n, idx % n);
            let j = &radical.radical()[idx];
            let j2 = radical.power(2, k, m, n, blocks.block_dim(k, m));
            j2.complement_in(f, j)
        })
        .collect();
    let reuse = names.filter(|q| {
        q.vertex_count() == n
            && (0..n).all(|k| (0..n).all(|m| q.arrow_count(k, m) == pools[k * n + m].len()))
    });
    let mut arrows = Vec::new();
    let mut lifts = Vec::new();
    match reuse {
        Some(q) => {
            for a in q.arrows() {
                let pool = &mut pools[a.source * n + a.target];
                lifts.push(pool.remove(0));
                arrows.push(a.clone());
            }
        }
        None => {
            for idx in 0..n * n {
                for v in std::mem::take(&mut pools[idx]) {
                    arrows.push(Arrow {
                        id: format!("x{}", arrows.len() + 1),
                        source: idx / n,
                        target: idx % n,
                    });
                    lifts.push(v);
                }
            }
        }
    }
    let quiver = Quiver::new(n, arrows)?;
    Ok(GabrielQuiver {
        quiver,
        lifts,
        radical,
    })
}

/// An algebra `KQ/I` isomorphic to a given block algebra, with the isomorphism.
#[derive(Clone, Debug)]
pub struct PresentedAlgebra<F: Field> {
    pub presentation: AlgebraPresentation<F>,
    pub algebra: Algebra<F>,
    /// per block `(i,j)`: columns are the images of the basis paths of `algebra`
    pub to_blocks: Vec<Matrix<F::Elem>>,
}

impl<F: Field> PresentedAlgebra<F> {
    /// Image in the block algebra of an element of block `(i,j)` of the presented algebra.
    pub fn map_element(&self, i: usize, j: usize, x: &[F::Elem]) -> Vec<F::Elem> {
        let n = self.algebra.vertex_count();
        self.to_blocks[i * n + j].apply(self.algebra.field(), x)
    }

    /// Preimage of a block-algebra element of block `(i,j)`.
    pub fn pull_element(&self, i: usize, j: usize, y: &[F::Elem]) -> Vec<F::Elem> {
        let n = self.algebra.vertex_count();
        let m = &self.to_blocks[i * n + j];
        if m.cols() == 0 {
            return Vec::new();
        }
        m.solve(self.algebra.field(), y)
            .expect("presentation map is bijective")
    }
}

fn path_value<F: Field>(
    blocks: &BlockAlgebra<F>,
    g: &GabrielQuiver<F::Elem>,
    p: &Path,
) -> Vec<F::Elem> {
    let mut at = p.source;
    let mut v = blocks.unit(at).to_vec();
    for &a in &p.arrows {
        let t = g.quiver.arrow(a).target;
        v = blocks.mul(p.source, at, t, &v, &g.lifts[a]);
        at = t;
    }
    v
}

/// Relations of `KQ -> A`: for every path `p` not in the normal basis but whose
/// maximal proper subpaths are, the relation `p - NF(p)` with `NF(p)` a
/// combination of larger basis paths (deg-lex). Redundant relations are then
/// removed greedily while the built algebra keeps its dimension.
pub fn extract_relations<F: Field>(
    blocks: &BlockAlgebra<F>,
    g: &GabrielQuiver<F::Elem>,
    degree_bound: usize,
) -> Result<PresentedAlgebra<F>> {
    let f = blocks.field();
    let n = blocks.vertex_count();
    let q = &g.quiver;
    if degree_bound < g.radical.loewy_length {
        return Err(Error::DegreeBoundTooSmall {
            bound: degree_bound,
            needed: g.radical.loewy_length,
        });
    }
    // all paths with nonzero value, by length
    let mut nonzero: Vec<Vec<(Path, Vec<F::Elem>)>> = vec![(0..n)
        .map(|v| (Path::trivial(v), blocks.unit(v).to_vec()))
        .collect()];
    let mut zero_paths: Vec<Path> = Vec::new();
    loop {
        let mut next = Vec::new();
        for (p, val) in nonzero.last().unwrap() {
            let t = q.path_target(p);
            for a in q.arrows_from(t) {
                let u = q.arrow(a).target;
                let v = blocks.mul(p.source, t, u, val, &g.lifts[a]);
                let mut arrows = p.arrows.clone();
                arrows.push(a);
                let np = Path {
                    source: p.source,
                    arrows,
                };
                if is_zero_vec(f, &v) {
                    zero_paths.push(np);
                } else {
                    next.push((np, v));
                }
            }
        }
        if next.is_empty() {
            break;
        }
        if nonzero.len() >= degree_bound {
            return Err(Error::DegreeBoundTooSmall {
                bound: degree_bound,
                needed: nonzero.len() + 1,
            });
        }
        nonzero.push(next);
    }

    // normal basis per block: greedy from the largest path down
    let mut per_block: Vec<Vec<(Path, Vec<F::Elem>)>> = vec![Vec::new(); n * n];
    for (p, v) in nonzero.into_iter().flatten() {
        let idx = p.source * n + q.path_target(&p);
        per_block[idx].push((p, v));
    }
    let mut basis: HashSet<Path> = HashSet::new();
    let mut relations: Vec<(Path, Relation<F>)> = Vec::new();
    let mut pending: Vec<(Path, Vec<(Path, F::Elem)>)> = Vec::new();
    for (idx, paths) in per_block.iter_mut().enumerate() {
        paths.sort_by(|a, b| b.0.deglex_key().cmp(&a.0.deglex_key()));
        let d = blocks.block_dim(idx / n, idx % n);
        let mut chosen: Vec<(Path, Vec<F::Elem>)> = Vec::new();
        for (p, v) in paths.iter() {
            let m = Matrix::from_columns(f, d, chosen.iter().map(|c| c.1.clone()).collect());
            let coords = if chosen.is_empty() {
                None
            } else {
                m.solve(f, v)
            };
            match coords {
                Some(c) => {
                    let nf = chosen
                        .iter()
                        .zip(c)
                        .filter(|(_, x)| !f.is_zero(x))
                        .map(|(b, x)| (b.0.clone(), x))
                        .collect();
                    pending.push((p.clone(), nf));
                }
                None => {
                    basis.insert(p.clone());
                    chosen.push((p.clone(), v.clone()));
                }
            }
        }
        if chosen.len() != d {
            return Err(Error::Other(format!(
                "arrows do not generate block ({}, {})",
                idx / n + 1,
                idx % n + 1
            )));
        }
    }
    pending.extend(zero_paths.into_iter().map(|p| (p, Vec::new())));
    for (p, nf) in pending {
        if p.len() < 2 {
            return Err(Error::Other(
                "an arrow lies in the span of longer paths".into(),
            ));
        }
        let suffix = Path {
            source: q.arrow(p.arrows[0]).target,
            arrows: p.arrows[1..].to_vec(),
        };
        let prefix = Path {
            source: p.source,
            arrows: p.arrows[..p.len() - 1].to_vec(),
        };
        if !basis.contains(&suffix) || !basis.contains(&prefix) {
            continue;
        }
        let mut terms = vec![Term {
            coeff: f.one(),
            path: p.clone(),
        }];
        let mut rest: Vec<(Path, F::Elem)> = nf;
        rest.sort_by(|a, b| a.0.deglex_key().cmp(&b.0.deglex_key()));
        for (path, c) in rest {
            terms.push(Term {
                coeff: f.neg(&c),
                path,
            });
        }
        relations.push((p, Relation { terms }));
    }
    relations.sort_by(|a, b| {
        a.0.deglex_key()
            .cmp(&b.0.deglex_key())
            .then(a.0.source.cmp(&b.0.source))
    });
    let rels: Vec<Relation<F>> = relations.into_iter().map(|(_, r)| r).collect();

    let level = g.radical.loewy_length;
    let target_cartan = blocks.cartan();
    let same = |rels: &[Relation<F>]| -> bool {
        let Ok(pres) = AlgebraPresentation::new(f.clone(), q.clone(), rels.to_vec()) else {
            return false;
        };
        matches!(Algebra::build_at_level(&pres, level), Ok(a) if a.cartan() == target_cartan)
    };
    // a relation needed in a set stays needed in every subset, so groups can
    // be tested at once and the result is still irredundant
    let mut keep = vec![true; rels.len()];
    let mut groups: Vec<Vec<usize>> = vec![(0..rels.len()).rev().collect()];
    while let Some(group) = groups.pop() {
        let trial: Vec<Relation<F>> = rels
            .iter()
            .enumerate()
            .filter(|(k, _)| keep[*k] && !group.contains(k))
            .map(|(_, r)| r.clone())
            .collect();
        if same(&trial) {
            group.iter().for_each(|&k| keep[k] = false);
        } else if group.len() > 1 {
            let (a, b) = group.split_at(group.len() / 2);
            groups.push(b.to_vec());
            groups.push(a.to_vec());
        }
    }
    let rels: Vec<Relation<F>> = rels
        .into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(r, _)| r)
        .collect();
    let presentation = AlgebraPresentation::new(f.clone(), q.clone(), rels)?;
    let algebra = Algebra::build_at_level(&presentation, level)?;
    if algebra.cartan() != target_cartan {
        return Err(Error::Other(
            "presented algebra has a different Cartan matrix".into(),
        ));
    }
    let to_blocks: Vec<Matrix<F::Elem>> = (0..n * n)
        .map(|idx| {
            let (i, j) = (idx / n, idx % n);
            let cols = algebra
                .basis_paths(i, j)
                .iter()
                .map(|p| path_value(blocks, g, p))
                .collect();
            Matrix::from_columns(f, blocks.block_dim(i, j), cols)
        })
        .collect();
    if to_blocks
        .iter()
        .any(|m| m.cols() > 0 && !m.is_invertible(f))
    {
        return Err(Error::Other(
            "normal basis of the presentation does not map to a basis".into(),
        ));
    }
    for r in &presentation.relations {
        let (s, t) = (r.source(), q.path_target(&r.terms[0].path));
        let mut v = vec![f.zero(); blocks.block_dim(s, t)];
        for term in &r.terms {
            crate::linalg::axpy(f, &mut v, &term.coeff, &path_value(blocks, g, &term.path));
        }
        if !is_zero_vec(f, &v) {
            return Err(Error::Other("extracted relation does not hold".into()));
        }
    }
    Ok(PresentedAlgebra {
        presentation,
        algebra,
        to_blocks,
    })
}

/// Quiver, lifts and relations in one go, with the degree bound set to the Loewy length.
pub fn present<F: Field>(
    blocks: &BlockAlgebra<F>,
    names: Option<&Quiver>,
) -> Result<PresentedAlgebra<F>> {
    let g = gabriel_quiver(blocks, names)?;
    let bound = g.radical.loewy_length;
    extract_relations(blocks, &g, bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::symmetric_nakayama;
    use crate::field::Fp;

    fn n23() -> Algebra<Fp> {
        let f = Fp::new(5).unwrap();
        Algebra::build(&symmetric_nakayama(&f, 2, 3).unwrap(), 10).unwrap()
    }

    fn stalks(n: usize) -> Vec<ProjComplex<u64>> {
        (0..n).map(|k| ProjComplex::stalk(&[k], 0)).collect()
    }

    #[test]
    fn stalk_endomorphisms_reproduce_the_algebra() {
        let alg = n23();
        let e = endo_algebra(alg.blocks(), stalks(2)).unwrap();
        assert_eq!(e.dim(), 6);
        assert_eq!(e.blocks().cartan(), vec![vec![2, 1], vec![1, 2]]);
        assert!(e.blocks().check_associative(0, 0));
        assert!(e.blocks().check_units());
    }

    #[test]
    fn duplicated_summand_is_not_basic() {
        let alg = n23();
        let t = vec![ProjComplex::stalk(&[0], 0), ProjComplex::stalk(&[0], 0)];
        assert!(matches!(
            endo_algebra(alg.blocks(), t),
            Err(Error::NotBasic(_))
        ));
    }

    #[test]
    fn decomposable_summand_is_not_basic() {
        let alg = n23();
        let t = vec![ProjComplex::stalk(&[0, 1], 0)];
        assert!(matches!(
            endo_algebra(alg.blocks(), t),
            Err(Error::NotBasic(_))
        ));
    }

    #[test]
    fn radical_layers_of_cyclic_nakayama() {
        let alg = n23();
        let r = radical_data(alg.blocks()).unwrap();
        assert_eq!(r.loewy_length, 3);
        let dims: Vec<usize> = r.radical().iter().map(Subspace::dim).collect();
        assert_eq!(dims, vec![1, 1, 1, 1]);
    }

    #[test]
    fn presentation_round_trip_keeps_names_and_dimension() {
        let alg = n23();
        let p = present(alg.blocks(), Some(alg.quiver())).unwrap();
        assert_eq!(p.presentation.quiver, *alg.quiver());
        assert_eq!(p.algebra.dim(), 6);
        // the two length-3 cycles generate the ideal
        assert_eq!(p.presentation.relations.len(), 2);
        assert!(p
            .presentation
            .relations
            .iter()
            .all(|r| r.is_monomial() && r.terms[0].path.len() == 3));
    }

    #[test]
    fn degree_bound_below_loewy_length_is_rejected() {
        let alg = n23();
        let g = gabriel_quiver(alg.blocks(), None).unwrap();
        assert!(matches!(
            extract_relations(alg.blocks(), &g, 2),
            Err(Error::DegreeBoundTooSmall { .. })
        ));
    }

    #[test]
    fn non_split_residue_field_is_detected() {
        // F_3[x]/(x^2 + 1) is a field of order 9: local but not split over F_3
        let f = Fp::new(3).unwrap();
        let b = BlockAlgebra::from_fn(f, vec![2], vec![vec![1, 0]], |_, _, _, s, t| match (s, t) {
            (0, t) => {
                if t == 0 {
                    vec![1, 0]
                } else {
                    vec![0, 1]
                }
            }
            (1, 0) => vec![0, 1],
            _ => vec![2, 0],
        });
        assert!(b.check_associative(0, 0));
        assert!(matches!(
            radical_data(&b),
            Err(Error::NonSplitEndomorphism { .. })
        ));
    }
}
