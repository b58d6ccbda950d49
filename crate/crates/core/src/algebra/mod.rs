//! The finite-dimensional algebra `KQ/I` with a normal-form path basis.

mod blocks;
mod symmetric;

use std::collections::HashMap;

pub use blocks::BlockAlgebra;
pub use symmetric::{
    check_symmetric, nakayama_permutation, socle_basis, socle_generator, SymmetricForm,
};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Subspace;
use crate::presentation::{AlgebraPresentation, Relation};
use crate::quiver::{Path, Quiver};

/// An element of a single Peirce block `e_i A e_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraElement<E> {
    pub source: usize,
    pub target: usize,
    pub coeffs: Vec<E>,
}

#[derive(Clone, Debug)]
pub struct Algebra<F: Field> {
    presentation: AlgebraPresentation<F>,
    blocks: BlockAlgebra<F>,
    /// Normal-form basis paths of block `(i,j)`, indexed `i*n+j`, in deg-lex order.
    basis: Vec<Vec<Path>>,
    /// Normal forms of every surviving path shorter than the stopping degree.
    normal_forms: HashMap<Path, Vec<F::Elem>>,
    loewy_length: usize,
}

impl<F: Field> Algebra<F> {
    /// Builds `KQ/I` by degreewise linear reduction.
    ///
    /// For `L = 2, 3, ...` the image of `I` in `KQ/(M + R^{L+1})` is computed,
    /// where `M` is the monomial part of the relations. The first `L` for which
    /// every surviving path of length `L` lies in that image gives `R^L ⊆ I`,
    /// and the non-pivot paths form the basis.
    pub fn build(pres: &AlgebraPresentation<F>, degree_cap: usize) -> Result<Self> {
        let (forbidden, mixed) = Self::prepare(pres)?;
        if degree_cap < 2 {
            return Err(Error::InvalidPresentation(
                "degree cap must be at least 2".into(),
            ));
        }
        let quiver = &pres.quiver;
        let mut levels: Vec<Vec<Path>> =
            vec![(0..quiver.vertex_count()).map(Path::trivial).collect()];
        for big_l in 2..=degree_cap {
            if let Some(alg) = Self::try_level(pres, big_l, &forbidden, &mixed, &mut levels) {
                return Ok(alg);
            }
        }
        Err(Error::NotAdmissible { degree: degree_cap })
    }

    /// Builds `KQ/I` if every surviving path of length `level` is reducible at
    /// that level, i.e. if the radical of `KQ/I` vanishes in degree `level`.
    pub fn build_at_level(pres: &AlgebraPresentation<F>, level: usize) -> Result<Self> {
        let (forbidden, mixed) = Self::prepare(pres)?;
        let mut levels: Vec<Vec<Path>> =
            vec![(0..pres.quiver.vertex_count()).map(Path::trivial).collect()];
        Self::try_level(pres, level.max(2), &forbidden, &mixed, &mut levels)
            .ok_or(Error::NotAdmissible { degree: level })
    }

    #[allow(clippy::type_complexity)]
    fn prepare(pres: &AlgebraPresentation<F>) -> Result<(Vec<Vec<usize>>, Vec<Relation<F>>)> {
        pres.validate()?;
        if !pres.quiver.is_connected() {
            return Err(Error::Disconnected);
        }
        let f = &pres.field;
        let mut forbidden: Vec<Vec<usize>> = Vec::new();
        let mut mixed = Vec::new();
        for (k, rel) in pres.relations.iter().enumerate() {
            let rel = rel.collected(f);
            match rel.terms.len() {
                0 => return Err(Error::ZeroRelationDegenerate(k + 1)),
                1 => forbidden.push(rel.terms[0].path.arrows.clone()),
                _ => mixed.push(rel),
            }
        }
        Ok((forbidden, mixed))
    }

    fn try_level(
        pres: &AlgebraPresentation<F>,
        big_l: usize,
        forbidden: &[Vec<usize>],
        mixed: &[Relation<F>],
        levels: &mut Vec<Vec<Path>>,
    ) -> Option<Self> {
        let quiver = &pres.quiver;
        let f = &pres.field;
        let n = quiver.vertex_count();
        let clean = |arrows: &[usize]| !forbidden.iter().any(|w| contains(arrows, w));
        while levels.len() <= big_l {
            let next = extend_level(quiver, levels.last().unwrap(), forbidden);
            levels.push(next);
        }
        // columns per block, deg-lex
        let mut cols: Vec<Vec<Path>> = vec![Vec::new(); n * n];
        let mut index: HashMap<Path, usize> = HashMap::new();
        for level in &levels[..=big_l] {
            for p in level {
                let b = p.source * n + quiver.path_target(p);
                index.insert(p.clone(), cols[b].len());
                cols[b].push(p.clone());
            }
        }
        let mut spaces: Vec<Subspace<F::Elem>> =
            cols.iter().map(|c| Subspace::new(c.len())).collect();
        let mut work: Vec<(usize, Vec<F::Elem>)> = Vec::new();
        for rel in mixed {
            let b = rel.source() * n + quiver.path_target(&rel.terms[0].path);
            let mut v = vec![f.zero(); cols[b].len()];
            for t in &rel.terms {
                if t.path.len() <= big_l && clean(&t.path.arrows) {
                    let c = index[&t.path];
                    v[c] = f.add(&v[c], &t.coeff);
                }
            }
            if spaces[b].insert(f, v.clone()) {
                work.push((b, v));
            }
        }
        while let Some((b, v)) = work.pop() {
            let (i, j) = (b / n, b % n);
            for a in quiver.arrows_to(i) {
                let h = quiver.arrow(a).source;
                let nb = h * n + j;
                let mut w = vec![f.zero(); cols[nb].len()];
                let mut any = false;
                for (c, x) in v.iter().enumerate() {
                    if f.is_zero(x) || cols[b][c].len() >= big_l {
                        continue;
                    }
                    let mut arrows = Vec::with_capacity(cols[b][c].len() + 1);
                    arrows.push(a);
                    arrows.extend_from_slice(&cols[b][c].arrows);
                    let p = Path { source: h, arrows };
                    if let Some(&k) = index.get(&p) {
                        w[k] = f.add(&w[k], x);
                        any = true;
                    }
                }
                if any && spaces[nb].insert(f, w.clone()) {
                    work.push((nb, w));
                }
            }
            for a in quiver.arrows_from(j) {
                let t = quiver.arrow(a).target;
                let nb = i * n + t;
                let mut w = vec![f.zero(); cols[nb].len()];
                let mut any = false;
                for (c, x) in v.iter().enumerate() {
                    if f.is_zero(x) || cols[b][c].len() >= big_l {
                        continue;
                    }
                    let mut p = cols[b][c].clone();
                    p.arrows.push(a);
                    if let Some(&k) = index.get(&p) {
                        w[k] = f.add(&w[k], x);
                        any = true;
                    }
                }
                if any && spaces[nb].insert(f, w.clone()) {
                    work.push((nb, w));
                }
            }
        }
        let top_reducible = (0..n * n).all(|b| {
            let pivots = spaces[b].pivots();
            cols[b]
                .iter()
                .enumerate()
                .all(|(c, p)| p.len() < big_l || pivots.binary_search(&c).is_ok())
        });
        top_reducible.then(|| Self::assemble(pres.clone(), n, big_l, &cols, &spaces))
    }

    fn assemble(
        presentation: AlgebraPresentation<F>,
        n: usize,
        big_l: usize,
        cols: &[Vec<Path>],
        spaces: &[Subspace<F::Elem>],
    ) -> Self {
        let f = presentation.field.clone();
        let mut basis = vec![Vec::new(); n * n];
        let mut normal_forms = HashMap::new();
        for b in 0..n * n {
            let pivots = spaces[b].pivots();
            let free: Vec<usize> = (0..cols[b].len())
                .filter(|c| pivots.binary_search(c).is_err())
                .collect();
            basis[b] = free.iter().map(|&c| cols[b][c].clone()).collect();
            let pos: HashMap<usize, usize> =
                free.iter().enumerate().map(|(k, &c)| (c, k)).collect();
            for (c, p) in cols[b].iter().enumerate() {
                let mut nf = vec![f.zero(); free.len()];
                if let Some(&k) = pos.get(&c) {
                    nf[k] = f.one();
                } else {
                    // e_p = -(row_p - e_p) modulo the ideal
                    let r = pivots.binary_search(&c).unwrap();
                    let row = &spaces[b].basis()[r];
                    for (&fc, slot) in free.iter().zip(nf.iter_mut()) {
                        *slot = f.neg(&row[fc]);
                    }
                }
                if p.len() < big_l {
                    normal_forms.insert(p.clone(), nf);
                }
            }
        }
        let loewy_length = basis
            .iter()
            .flatten()
            .map(|p| p.len() + 1)
            .max()
            .unwrap_or(1);
        let dims: Vec<usize> = basis.iter().map(Vec::len).collect();
        let units: Vec<Vec<F::Elem>> = (0..n)
            .map(|i| {
                let mut u = vec![f.zero(); dims[i * n + i]];
                u[0] = f.one();
                u
            })
            .collect();
        let blocks = {
            let basis = &basis;
            let nfs = &normal_forms;
            BlockAlgebra::from_fn(f.clone(), dims.clone(), units, |i, j, k, s, t| {
                let p = basis[i * n + j][s].concat(&basis[j * n + k][t]);
                nfs.get(&p)
                    .cloned()
                    .unwrap_or_else(|| vec![f.zero(); dims[i * n + k]])
            })
        };
        Algebra {
            presentation,
            blocks,
            basis,
            normal_forms,
            loewy_length,
        }
    }

    pub fn field(&self) -> &F {
        &self.presentation.field
    }

    pub fn presentation(&self) -> &AlgebraPresentation<F> {
        &self.presentation
    }

    pub fn quiver(&self) -> &Quiver {
        &self.presentation.quiver
    }

    pub fn vertex_count(&self) -> usize {
        self.presentation.quiver.vertex_count()
    }

    pub fn blocks(&self) -> &BlockAlgebra<F> {
        &self.blocks
    }

    pub fn dim(&self) -> usize {
        self.blocks.dim()
    }

    pub fn block_dim(&self, i: usize, j: usize) -> usize {
        self.blocks.block_dim(i, j)
    }

    pub fn cartan(&self) -> Vec<Vec<usize>> {
        self.blocks.cartan()
    }

    pub fn loewy_length(&self) -> usize {
        self.loewy_length
    }

    pub fn basis_paths(&self, i: usize, j: usize) -> &[Path] {
        &self.basis[i * self.vertex_count() + j]
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.vertex_count() {
            return Err(Error::VertexOutOfRange {
                vertex: v + 1,
                count: self.vertex_count(),
            });
        }
        Ok(())
    }

    /// Normal form of a path, as coordinates in its block.
    pub fn path_coords(&self, p: &Path) -> Vec<F::Elem> {
        if let Some(v) = self.normal_forms.get(p) {
            return v.clone();
        }
        let (s, t) = (p.source, self.quiver().path_target(p));
        // too long or containing a monomial relation: multiply out (zero unless a
        // shorter prefix survives and the tail reduces it)
        if p.len() <= 1 {
            return self.blocks.zero(s, t);
        }
        let mut acc = self.blocks.unit(s).to_vec();
        let mut at = s;
        for &a in &p.arrows {
            let next = self.quiver().arrow(a).target;
            let x = self.path_coords(&Path {
                source: at,
                arrows: vec![a],
            });
            acc = self.blocks.mul(s, at, next, &acc, &x);
            at = next;
        }
        acc
    }

    pub fn path_element(&self, p: &Path) -> AlgebraElement<F::Elem> {
        AlgebraElement {
            source: p.source,
            target: self.quiver().path_target(p),
            coeffs: self.path_coords(p),
        }
    }

    pub fn arrow_coords(&self, a: usize) -> Vec<F::Elem> {
        let arrow = self.quiver().arrow(a);
        self.path_coords(&Path {
            source: arrow.source,
            arrows: vec![a],
        })
    }

    pub fn unit(&self, i: usize) -> AlgebraElement<F::Elem> {
        AlgebraElement {
            source: i,
            target: i,
            coeffs: self.blocks.unit(i).to_vec(),
        }
    }

    pub fn multiply(
        &self,
        x: &AlgebraElement<F::Elem>,
        y: &AlgebraElement<F::Elem>,
    ) -> Result<AlgebraElement<F::Elem>> {
        if x.target != y.source {
            return Err(Error::VertexMismatch(format!(
                "left factor ends at {} but right factor starts at {}",
                x.target + 1,
                y.source + 1
            )));
        }
        Ok(AlgebraElement {
            source: x.source,
            target: y.target,
            coeffs: self
                .blocks
                .mul(x.source, x.target, y.target, &x.coeffs, &y.coeffs),
        })
    }

    /// Radical degree of each basis vector of block `(i,j)` (the path length).
    pub fn basis_degrees(&self, i: usize, j: usize) -> Vec<usize> {
        self.basis_paths(i, j).iter().map(Path::len).collect()
    }

    /// Dimensions of `e_i J^k e_j / e_i J^{k+1} e_j` for `k = 0..loewy_length`.
    pub fn radical_layers(&self, i: usize, j: usize) -> Vec<usize> {
        let mut layers = vec![0; self.loewy_length];
        for p in self.basis_paths(i, j) {
            layers[p.len()] += 1;
        }
        layers
    }

    pub fn fmt_coords(&self, i: usize, j: usize, coeffs: &[F::Elem]) -> String {
        let f = self.field();
        let mut parts = Vec::new();
        for (c, p) in coeffs.iter().zip(self.basis_paths(i, j)) {
            if f.is_zero(c) {
                continue;
            }
            let path = self.quiver().fmt_path(p);
            if f.is_one(c) {
                parts.push(path);
            } else {
                parts.push(format!("{}·{}", f.fmt_elem(c), path));
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

fn contains(hay: &[usize], needle: &[usize]) -> bool {
    !needle.is_empty()
        && hay.len() >= needle.len()
        && hay.windows(needle.len()).any(|w| w == needle)
}

fn extend_level(quiver: &Quiver, level: &[Path], forbidden: &[Vec<usize>]) -> Vec<Path> {
    let mut next = Vec::new();
    for p in level {
        let t = quiver.path_target(p);
        for a in quiver.arrows_from(t) {
            let mut arrows = p.arrows.clone();
            arrows.push(a);
            if forbidden.iter().any(|w| arrows.ends_with(w)) {
                continue;
            }
            next.push(Path {
                source: p.source,
                arrows,
            });
        }
    }
    next.sort_by(|a, b| {
        a.deglex_key()
            .cmp(&b.deglex_key())
            .then(a.source.cmp(&b.source))
    });
    next
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use crate::presentation::{AnyPresentation, Relation};
    use crate::quiver::Arrow;

    fn nakayama(n: usize, ell: usize) -> AlgebraPresentation<Fp> {
        let f = Fp::new(5).unwrap();
        let arrows = (0..n)
            .map(|k| Arrow {
                id: format!("a{}", k + 1),
                source: k,
                target: (k + 1) % n,
            })
            .collect();
        let q = Quiver::new(n, arrows).unwrap();
        let rels = (0..n)
            .map(|k| {
                Relation::monomial(
                    &f,
                    Path {
                        source: k,
                        arrows: (0..ell).map(|t| (k + t) % n).collect(),
                    },
                )
            })
            .collect();
        AlgebraPresentation::new(f, q, rels).unwrap()
    }

    #[test]
    fn dual_numbers() {
        let a = Algebra::build(&nakayama(1, 2), 10).unwrap();
        assert_eq!(a.dim(), 2);
        assert_eq!(a.loewy_length(), 2);
        assert_eq!(a.basis_paths(0, 0).len(), 2);
    }

    #[test]
    fn n23_basis_and_products() {
        let a = Algebra::build(&nakayama(2, 3), 10).unwrap();
        assert_eq!(a.dim(), 6);
        let q = a.quiver();
        let names: Vec<String> = a.basis_paths(0, 0).iter().map(|p| q.fmt_path(p)).collect();
        assert_eq!(names, vec!["e1", "a1·a2"]);
        let x = a.path_element(&Path {
            source: 0,
            arrows: vec![0],
        });
        let y = a.path_element(&Path {
            source: 1,
            arrows: vec![1],
        });
        let xy = a.multiply(&x, &y).unwrap();
        assert_eq!(
            xy,
            a.path_element(&Path {
                source: 0,
                arrows: vec![0, 1]
            })
        );
        let ba = a.path_element(&Path {
            source: 1,
            arrows: vec![1, 0],
        });
        let zero = a.multiply(&x, &ba).unwrap();
        assert!(zero.coeffs.iter().all(|c| *c == 0));
        assert!(a.multiply(&x, &x).is_err());
    }

    #[test]
    fn commutative_relation_reduces() {
        // two loops x, y with xy - yx, x^2, y^2: dim 4 (1, x, y, xy)
        let text = r#"{"field": {"prime": 3}, "vertices": 1,
            "arrows": [{"id": "x", "source": 1, "target": 1}, {"id": "y", "source": 1, "target": 1}],
            "relations": [[{"coeff": 1, "path": ["x", "y"]}, {"coeff": -1, "path": ["y", "x"]}],
                          [{"coeff": 1, "path": ["x", "x"]}], [{"coeff": 1, "path": ["y", "y"]}]]}"#;
        let AnyPresentation::Prime(p) = AnyPresentation::from_json_str(text).unwrap() else {
            panic!()
        };
        let a = Algebra::build(&p, 10).unwrap();
        assert_eq!(a.dim(), 4);
        assert_eq!(a.loewy_length(), 3);
        assert!(a.blocks().check_associative(0, 0));
        assert!(a.blocks().check_units());
    }

    #[test]
    fn free_loop_is_not_admissible() {
        let text = r#"{"field": {"prime": 3}, "vertices": 1,
            "arrows": [{"id": "x", "source": 1, "target": 1}, {"id": "y", "source": 1, "target": 1}],
            "relations": [[{"coeff": 1, "path": ["x", "x"]}]]}"#;
        let AnyPresentation::Prime(p) = AnyPresentation::from_json_str(text).unwrap() else {
            panic!()
        };
        assert!(matches!(
            Algebra::build(&p, 8),
            Err(Error::NotAdmissible { .. })
        ));
    }

    #[test]
    fn disconnected_rejected() {
        let f = Fp::new(5).unwrap();
        let q = Quiver::new(2, vec![]).unwrap();
        let p = AlgebraPresentation::new(f, q, vec![]).unwrap();
        assert!(matches!(Algebra::build(&p, 8), Err(Error::Disconnected)));
    }
}
