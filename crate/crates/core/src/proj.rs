//! Maps between finite direct sums of indecomposable projectives.
//!
//! `Hom(P_u, P_v)` is identified with `e_v A e_u` acting by left
//! multiplication, so a map `⊕_s P_{u_s} -> ⊕_t P_{v_t}` is a matrix whose
//! `(t, s)` entry lies in block `(v_t, u_s)`. Composition is matrix
//! multiplication in the algebra.

use serde::Serialize;

use crate::algebra::BlockAlgebra;
use crate::field::Field;
use crate::linalg::{is_zero_vec, Matrix};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjMap<E> {
    pub source: Vec<usize>,
    pub target: Vec<usize>,
    /// `entries[t][s]` in block `(target[t], source[s])`.
    pub entries: Vec<Vec<Vec<E>>>,
}

impl<E: Clone + PartialEq> ProjMap<E> {
    pub fn zero<F: Field<Elem = E>>(
        alg: &BlockAlgebra<F>,
        source: &[usize],
        target: &[usize],
    ) -> Self {
        let entries = target
            .iter()
            .map(|&v| source.iter().map(|&u| alg.zero(v, u)).collect())
            .collect();
        ProjMap {
            source: source.to_vec(),
            target: target.to_vec(),
            entries,
        }
    }

    pub fn identity<F: Field<Elem = E>>(alg: &BlockAlgebra<F>, obj: &[usize]) -> Self {
        let mut m = Self::zero(alg, obj, obj);
        for (k, &v) in obj.iter().enumerate() {
            m.entries[k][k] = alg.unit(v).to_vec();
        }
        m
    }

    /// A `1 x 1` map given by a single element of block `(target, source)`.
    pub fn single(source: usize, target: usize, x: Vec<E>) -> Self {
        ProjMap {
            source: vec![source],
            target: vec![target],
            entries: vec![vec![x]],
        }
    }

    pub fn is_zero<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.entries.iter().flatten().all(|x| is_zero_vec(f, x))
    }

    /// `self ∘ first`.
    pub fn compose<F: Field<Elem = E>>(
        &self,
        alg: &BlockAlgebra<F>,
        first: &ProjMap<E>,
    ) -> ProjMap<E> {
        assert_eq!(
            self.source, first.target,
            "composing maps with mismatched objects"
        );
        let f = alg.field();
        let mut out = Self::zero(alg, &first.source, &self.target);
        for (r, &w) in self.target.iter().enumerate() {
            for (s, &u) in first.source.iter().enumerate() {
                let acc = &mut out.entries[r][s];
                for (t, &v) in self.source.iter().enumerate() {
                    let g = &self.entries[r][t];
                    let h = &first.entries[t][s];
                    if is_zero_vec(f, g) || is_zero_vec(f, h) {
                        continue;
                    }
                    let p = alg.mul(w, v, u, g, h);
                    for (a, b) in acc.iter_mut().zip(p) {
                        *a = f.add(a, &b);
                    }
                }
            }
        }
        out
    }

    pub fn add<F: Field<Elem = E>>(&self, f: &F, other: &ProjMap<E>) -> ProjMap<E> {
        self.zip_with(other, |a, b| f.add(a, b))
    }

    pub fn sub<F: Field<Elem = E>>(&self, f: &F, other: &ProjMap<E>) -> ProjMap<E> {
        self.zip_with(other, |a, b| f.sub(a, b))
    }

    pub fn scale<F: Field<Elem = E>>(&self, f: &F, c: &E) -> ProjMap<E> {
        let mut out = self.clone();
        for x in out.entries.iter_mut().flatten().flatten() {
            *x = f.mul(c, x);
        }
        out
    }

    pub fn neg<F: Field<Elem = E>>(&self, f: &F) -> ProjMap<E> {
        self.scale(f, &f.neg(&f.one()))
    }

    fn zip_with(&self, other: &ProjMap<E>, op: impl Fn(&E, &E) -> E) -> ProjMap<E> {
        assert_eq!(self.source, other.source);
        assert_eq!(self.target, other.target);
        let mut out = self.clone();
        for (xs, ys) in out
            .entries
            .iter_mut()
            .flatten()
            .zip(other.entries.iter().flatten())
        {
            for (x, y) in xs.iter_mut().zip(ys) {
                *x = op(x, y);
            }
        }
        out
    }

    /// Coordinates of all entries, row-major.
    pub fn to_vec(&self) -> Vec<E> {
        self.entries.iter().flatten().flatten().cloned().collect()
    }

    pub fn from_vec<F: Field<Elem = E>>(
        alg: &BlockAlgebra<F>,
        source: &[usize],
        target: &[usize],
        v: &[E],
    ) -> Self {
        let mut m = Self::zero(alg, source, target);
        let mut k = 0;
        for row in m.entries.iter_mut() {
            for x in row.iter_mut() {
                let d = x.len();
                x.clone_from_slice(&v[k..k + d]);
                k += d;
            }
        }
        assert_eq!(k, v.len());
        m
    }

    /// Stack maps with a common source vertically.
    pub fn stack(parts: &[ProjMap<E>]) -> ProjMap<E> {
        let source = parts[0].source.clone();
        let mut target = Vec::new();
        let mut entries = Vec::new();
        for p in parts {
            assert_eq!(p.source, source);
            target.extend_from_slice(&p.target);
            entries.extend(p.entries.iter().cloned());
        }
        ProjMap {
            source,
            target,
            entries,
        }
    }

    /// Block-diagonal sum.
    pub fn direct_sum<F: Field<Elem = E>>(
        alg: &BlockAlgebra<F>,
        a: &ProjMap<E>,
        b: &ProjMap<E>,
    ) -> ProjMap<E> {
        let source: Vec<usize> = a.source.iter().chain(&b.source).copied().collect();
        let target: Vec<usize> = a.target.iter().chain(&b.target).copied().collect();
        let mut m = Self::zero(alg, &source, &target);
        for (t, row) in a.entries.iter().enumerate() {
            for (s, x) in row.iter().enumerate() {
                m.entries[t][s] = x.clone();
            }
        }
        for (t, row) in b.entries.iter().enumerate() {
            for (s, x) in row.iter().enumerate() {
                m.entries[a.target.len() + t][a.source.len() + s] = x.clone();
            }
        }
        m
    }
}

/// Dimension of `Hom(⊕ P_source, ⊕ P_target)`.
pub fn hom_dim<F: Field>(alg: &BlockAlgebra<F>, source: &[usize], target: &[usize]) -> usize {
    target
        .iter()
        .map(|&v| source.iter().map(|&u| alg.block_dim(v, u)).sum::<usize>())
        .sum()
}

/// Offsets of each entry inside `to_vec`, indexed `[t][s]`.
pub fn entry_offsets<F: Field>(
    alg: &BlockAlgebra<F>,
    source: &[usize],
    target: &[usize],
) -> Vec<Vec<usize>> {
    let mut k = 0;
    target
        .iter()
        .map(|&v| {
            source
                .iter()
                .map(|&u| {
                    let o = k;
                    k += alg.block_dim(v, u);
                    o
                })
                .collect()
        })
        .collect()
}

fn place<E: Clone>(
    m: &mut Matrix<E>,
    r0: usize,
    c0: usize,
    block: &Matrix<E>,
    f: &impl Field<Elem = E>,
) {
    for r in 0..block.rows() {
        for c in 0..block.cols() {
            let x = block.get(r, c);
            if !f.is_zero(x) {
                let cur = m.get(r0 + r, c0 + c).clone();
                m.set(r0 + r, c0 + c, f.add(&cur, x));
            }
        }
    }
}

/// Matrix of `h ↦ g ∘ h` from `Hom(X, Y)` to `Hom(X, Z)` for `g: Y -> Z`.
pub fn post_compose_matrix<F: Field>(
    alg: &BlockAlgebra<F>,
    g: &ProjMap<F::Elem>,
    x: &[usize],
) -> Matrix<F::Elem> {
    let f = alg.field();
    let (y, z) = (&g.source, &g.target);
    let src = entry_offsets(alg, x, y);
    let dst = entry_offsets(alg, x, z);
    let mut m = Matrix::zeros(f, hom_dim(alg, x, z), hom_dim(alg, x, y));
    for (r, &w) in z.iter().enumerate() {
        for (t, &v) in y.iter().enumerate() {
            if is_zero_vec(f, &g.entries[r][t]) {
                continue;
            }
            for (s, &u) in x.iter().enumerate() {
                let block = alg.left_mul_matrix(w, v, u, &g.entries[r][t]);
                place(&mut m, dst[r][s], src[t][s], &block, f);
            }
        }
    }
    m
}

/// Matrix of `h ↦ h ∘ d` from `Hom(Y, Z)` to `Hom(X, Z)` for `d: X -> Y`.
pub fn pre_compose_matrix<F: Field>(
    alg: &BlockAlgebra<F>,
    d: &ProjMap<F::Elem>,
    z: &[usize],
) -> Matrix<F::Elem> {
    let f = alg.field();
    let (x, y) = (&d.source, &d.target);
    let src = entry_offsets(alg, y, z);
    let dst = entry_offsets(alg, x, z);
    let mut m = Matrix::zeros(f, hom_dim(alg, x, z), hom_dim(alg, y, z));
    for (t, &v) in y.iter().enumerate() {
        for (s, &u) in x.iter().enumerate() {
            if is_zero_vec(f, &d.entries[t][s]) {
                continue;
            }
            for (r, &w) in z.iter().enumerate() {
                let block = alg.right_mul_matrix(w, v, u, &d.entries[t][s]);
                place(&mut m, dst[r][s], src[r][t], &block, f);
            }
        }
    }
    m
}

/// Some `g` with `d ∘ g = h` (`d: Y -> Z`, `h: X -> Z`), if one exists.
pub fn factor_through_target<F: Field>(
    alg: &BlockAlgebra<F>,
    d: &ProjMap<F::Elem>,
    h: &ProjMap<F::Elem>,
) -> Option<ProjMap<F::Elem>> {
    let m = post_compose_matrix(alg, d, &h.source);
    let sol = solve_or_zero(alg.field(), &m, &h.to_vec())?;
    Some(ProjMap::from_vec(alg, &h.source, &d.source, &sol))
}

/// Some `g` with `g ∘ d = h` (`d: X -> Y`, `h: X -> Z`), if one exists.
pub fn factor_through_source<F: Field>(
    alg: &BlockAlgebra<F>,
    d: &ProjMap<F::Elem>,
    h: &ProjMap<F::Elem>,
) -> Option<ProjMap<F::Elem>> {
    let m = pre_compose_matrix(alg, d, &h.target);
    let sol = solve_or_zero(alg.field(), &m, &h.to_vec())?;
    Some(ProjMap::from_vec(alg, &d.target, &h.target, &sol))
}

fn solve_or_zero<F: Field>(f: &F, m: &Matrix<F::Elem>, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
    if m.cols() == 0 {
        return is_zero_vec(f, b).then(Vec::new);
    }
    if m.rows() == 0 {
        return Some(vec![f.zero(); m.cols()]);
    }
    m.solve(f, b)
}

/// JSON-friendly form: entries as coordinate lists.
#[derive(Clone, Debug, Serialize)]
pub struct ProjMapJson {
    pub source: Vec<usize>,
    pub target: Vec<usize>,
    pub entries: Vec<Vec<Vec<serde_json::Value>>>,
}

impl ProjMapJson {
    pub fn new<F: Field>(f: &F, m: &ProjMap<F::Elem>) -> Self {
        ProjMapJson {
            source: m.source.iter().map(|v| v + 1).collect(),
            target: m.target.iter().map(|v| v + 1).collect(),
            entries: m
                .entries
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|x| x.iter().map(|c| f.to_json(c)).collect())
                        .collect()
                })
                .collect(),
        }
    }
}
