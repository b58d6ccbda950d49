//! Finite-dimensional right modules as quiver representations.
//!
//! An arrow `a: i -> j` acts as a matrix from the vertex-`i` space to the
//! vertex-`j` space (`dims[j] x dims[i]`), and a path `a_1 ... a_k` acts as
//! `A_{a_k} ... A_{a_1}`. For `P_i = e_i A` the vertex-`j` space is `e_i A e_j`
//! and arrows act by right multiplication.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{axpy, Matrix, Subspace};
use crate::proj::ProjMap;
use crate::quiver::Path;

const ISO_SEED: u64 = 0x150;
const ISO_RANDOM_TRIES: usize = 48;
const EXHAUSTIVE_LIMIT: f64 = 1e6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation<E> {
    pub dims: Vec<usize>,
    pub actions: Vec<Matrix<E>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleHom<E> {
    /// per vertex, `dims_target[j] x dims_source[j]`
    pub maps: Vec<Matrix<E>>,
}

impl<E: Clone + PartialEq> ModuleHom<E> {
    pub fn zero<F: Field<Elem = E>>(
        f: &F,
        source: &Representation<E>,
        target: &Representation<E>,
    ) -> Self {
        ModuleHom {
            maps: source
                .dims
                .iter()
                .zip(&target.dims)
                .map(|(&s, &t)| Matrix::zeros(f, t, s))
                .collect(),
        }
    }

    pub fn identity<F: Field<Elem = E>>(f: &F, m: &Representation<E>) -> Self {
        ModuleHom {
            maps: m.dims.iter().map(|&d| Matrix::identity(f, d)).collect(),
        }
    }

    /// `self ∘ first`
    pub fn compose<F: Field<Elem = E>>(&self, f: &F, first: &ModuleHom<E>) -> Self {
        ModuleHom {
            maps: self
                .maps
                .iter()
                .zip(&first.maps)
                .map(|(a, b)| a.mul(f, b))
                .collect(),
        }
    }

    pub fn to_vec(&self) -> Vec<E> {
        self.maps.iter().flat_map(|m| m.data().to_vec()).collect()
    }

    pub fn from_vec(source: &Representation<E>, target: &Representation<E>, v: &[E]) -> Self {
        let mut k = 0;
        let mut maps = Vec::new();
        for (&s, &t) in source.dims.iter().zip(&target.dims) {
            let rows = (0..t)
                .map(|r| v[k + r * s..k + (r + 1) * s].to_vec())
                .collect();
            maps.push(Matrix::from_rows(s, rows));
            k += s * t;
        }
        ModuleHom { maps }
    }

    pub fn is_iso<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.maps.iter().all(|m| m.is_invertible(f))
    }

    pub fn is_injective<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.maps.iter().all(|m| m.rank(f) == m.cols())
    }

    pub fn is_zero<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.maps.iter().all(|m| m.is_zero(f))
    }
}

impl<E: Clone + PartialEq> Representation<E> {
    /// Validates shapes and that every relation acts as zero.
    pub fn new<F: Field<Elem = E>>(
        alg: &Algebra<F>,
        dims: Vec<usize>,
        actions: Vec<Matrix<E>>,
    ) -> Result<Self> {
        let q = alg.quiver();
        if dims.len() != q.vertex_count() || actions.len() != q.arrows().len() {
            return Err(Error::InvalidPresentation(
                "representation shape does not match the quiver".into(),
            ));
        }
        for (a, m) in q.arrows().iter().zip(&actions) {
            if m.rows() != dims[a.target] || m.cols() != dims[a.source] {
                return Err(Error::InvalidPresentation(format!(
                    "matrix of arrow {} has the wrong shape",
                    a.id
                )));
            }
        }
        let rep = Representation { dims, actions };
        let f = alg.field();
        for (k, rel) in alg.presentation().relations.iter().enumerate() {
            let s = rel.source();
            let t = q.path_target(&rel.terms[0].path);
            let mut acc = Matrix::zeros(f, rep.dims[t], rep.dims[s]);
            for term in &rel.terms {
                acc = acc.add(
                    f,
                    &rep.path_action(f, alg, &term.path).scale(f, &term.coeff),
                );
            }
            if !acc.is_zero(f) {
                return Err(Error::InvalidPresentation(format!(
                    "relation {} does not act as zero",
                    k + 1
                )));
            }
        }
        Ok(rep)
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn path_action<F: Field<Elem = E>>(&self, f: &F, alg: &Algebra<F>, p: &Path) -> Matrix<E> {
        let mut m = Matrix::identity(f, self.dims[p.source]);
        for &a in &p.arrows {
            m = self.actions[a].mul(f, &m);
        }
        let _ = alg;
        m
    }

    /// Action of an element of block `(i, j)`: a map from the vertex-`i` to the vertex-`j` space.
    pub fn element_action<F: Field<Elem = E>>(
        &self,
        alg: &Algebra<F>,
        i: usize,
        j: usize,
        x: &[E],
    ) -> Matrix<E> {
        let f = alg.field();
        let mut acc = Matrix::zeros(f, self.dims[j], self.dims[i]);
        for (c, p) in x.iter().zip(alg.basis_paths(i, j)) {
            if !f.is_zero(c) {
                acc = acc.add(f, &self.path_action(f, alg, p).scale(f, c));
            }
        }
        acc
    }

    /// Radical `M J`, per vertex.
    pub fn radical<F: Field<Elem = E>>(&self, alg: &Algebra<F>) -> Vec<Subspace<E>> {
        let f = alg.field();
        let q = alg.quiver();
        let mut out: Vec<Subspace<E>> = self.dims.iter().map(|&d| Subspace::new(d)).collect();
        for (k, a) in q.arrows().iter().enumerate() {
            for c in 0..self.actions[k].cols() {
                out[a.target].insert(f, self.actions[k].column(c));
            }
        }
        out
    }

    /// Socle `{m : m J = 0}`, per vertex.
    pub fn socle<F: Field<Elem = E>>(&self, alg: &Algebra<F>) -> Vec<Subspace<E>> {
        let f = alg.field();
        let q = alg.quiver();
        (0..self.dims.len())
            .map(|j| {
                let mut rows = Vec::new();
                for a in q.arrows_from(j) {
                    rows.extend(self.actions[a].row_vecs());
                }
                let basis = if rows.is_empty() {
                    Matrix::identity(f, self.dims[j]).row_vecs()
                } else {
                    Matrix::from_rows(self.dims[j], rows).kernel(f)
                };
                Subspace::spanned_by(f, self.dims[j], basis)
            })
            .collect()
    }

    /// Submodule spanned per vertex by the given subspaces (assumed closed).
    pub fn submodule<F: Field<Elem = E>>(
        &self,
        alg: &Algebra<F>,
        sub: &[Subspace<E>],
    ) -> (Representation<E>, ModuleHom<E>) {
        let f = alg.field();
        let q = alg.quiver();
        let dims: Vec<usize> = sub.iter().map(Subspace::dim).collect();
        let actions = q
            .arrows()
            .iter()
            .enumerate()
            .map(|(k, a)| {
                let cols = sub[a.source]
                    .basis()
                    .iter()
                    .map(|v| {
                        let w = self.actions[k].apply(f, v);
                        sub[a.target]
                            .coordinates(f, &w)
                            .expect("subspace is not a submodule")
                    })
                    .collect();
                Matrix::from_columns(f, dims[a.target], cols)
            })
            .collect();
        let incl = ModuleHom {
            maps: sub
                .iter()
                .zip(&self.dims)
                .map(|(s, &d)| Matrix::from_columns(f, d, s.basis().to_vec()))
                .collect(),
        };
        (Representation { dims, actions }, incl)
    }

    /// Quotient by a submodule; the quotient basis is the set of non-pivot
    /// coordinates of the submodule's echelon form.
    pub fn quotient<F: Field<Elem = E>>(
        &self,
        alg: &Algebra<F>,
        sub: &[Subspace<E>],
    ) -> (Representation<E>, ModuleHom<E>) {
        let f = alg.field();
        let q = alg.quiver();
        let free: Vec<Vec<usize>> = sub
            .iter()
            .map(|s| {
                (0..s.ambient())
                    .filter(|c| s.pivots().binary_search(c).is_err())
                    .collect()
            })
            .collect();
        let project = |j: usize, v: &[E]| -> Vec<E> {
            let r = sub[j].reduced(f, v);
            free[j].iter().map(|&c| r[c].clone()).collect()
        };
        let dims: Vec<usize> = free.iter().map(Vec::len).collect();
        let actions = q
            .arrows()
            .iter()
            .enumerate()
            .map(|(k, a)| {
                let cols = free[a.source]
                    .iter()
                    .map(|&c| project(a.target, &self.actions[k].column(c)))
                    .collect();
                Matrix::from_columns(f, dims[a.target], cols)
            })
            .collect();
        let proj = ModuleHom {
            maps: (0..self.dims.len())
                .map(|j| {
                    let cols = (0..self.dims[j])
                        .map(|c| {
                            let mut e = vec![f.zero(); self.dims[j]];
                            e[c] = f.one();
                            project(j, &e)
                        })
                        .collect();
                    Matrix::from_columns(f, dims[j], cols)
                })
                .collect(),
        };
        (Representation { dims, actions }, proj)
    }
}

pub fn direct_sum<F: Field>(f: &F, parts: &[Representation<F::Elem>]) -> Representation<F::Elem> {
    let n = parts.first().map_or(0, |p| p.dims.len());
    let arrows = parts.first().map_or(0, |p| p.actions.len());
    let dims: Vec<usize> = (0..n)
        .map(|j| parts.iter().map(|p| p.dims[j]).sum())
        .collect();
    let actions = (0..arrows)
        .map(|k| {
            let (rows, cols) = (
                parts.iter().map(|p| p.actions[k].rows()).sum(),
                parts.iter().map(|p| p.actions[k].cols()).sum(),
            );
            let mut m = Matrix::zeros(f, rows, cols);
            let (mut r0, mut c0) = (0, 0);
            for p in parts {
                let a = &p.actions[k];
                for r in 0..a.rows() {
                    for c in 0..a.cols() {
                        m.set(r0 + r, c0 + c, a.get(r, c).clone());
                    }
                }
                r0 += a.rows();
                c0 += a.cols();
            }
            m
        })
        .collect();
    Representation { dims, actions }
}

pub fn projective<F: Field>(alg: &Algebra<F>, i: usize) -> Representation<F::Elem> {
    let b = alg.blocks();
    let n = alg.vertex_count();
    let dims = (0..n).map(|j| b.block_dim(i, j)).collect();
    let actions = alg
        .quiver()
        .arrows()
        .iter()
        .enumerate()
        .map(|(k, a)| b.right_mul_matrix(i, a.source, a.target, &alg.arrow_coords(k)))
        .collect();
    Representation { dims, actions }
}

/// `⊕ P_v` over the vertex list, in order.
pub fn projective_sum<F: Field>(alg: &Algebra<F>, vertices: &[usize]) -> Representation<F::Elem> {
    let parts: Vec<_> = vertices.iter().map(|&v| projective(alg, v)).collect();
    if parts.is_empty() {
        return zero_module(alg);
    }
    direct_sum(alg.field(), &parts)
}

pub fn zero_module<F: Field>(alg: &Algebra<F>) -> Representation<F::Elem> {
    let f = alg.field();
    Representation {
        dims: vec![0; alg.vertex_count()],
        actions: alg
            .quiver()
            .arrows()
            .iter()
            .map(|_| Matrix::zeros(f, 0, 0))
            .collect(),
    }
}

pub fn simple<F: Field>(alg: &Algebra<F>, i: usize) -> Representation<F::Elem> {
    let f = alg.field();
    let n = alg.vertex_count();
    let dims: Vec<usize> = (0..n).map(|j| usize::from(j == i)).collect();
    let actions = alg
        .quiver()
        .arrows()
        .iter()
        .map(|a| Matrix::zeros(f, dims[a.target], dims[a.source]))
        .collect();
    Representation { dims, actions }
}

/// Basis of `Hom(M, N)`, from the intertwining equations `φ_k A^M_a = A^N_a φ_j`.
pub fn hom_space<F: Field>(
    alg: &Algebra<F>,
    m: &Representation<F::Elem>,
    n: &Representation<F::Elem>,
) -> Vec<ModuleHom<F::Elem>> {
    let f = alg.field();
    let q = alg.quiver();
    let mut offsets = Vec::with_capacity(m.dims.len());
    let mut total = 0;
    for j in 0..m.dims.len() {
        offsets.push(total);
        total += m.dims[j] * n.dims[j];
    }
    if total == 0 {
        return Vec::new();
    }
    let mut rows = Vec::new();
    for (k, a) in q.arrows().iter().enumerate() {
        let (j, l) = (a.source, a.target);
        let (am, an) = (&m.actions[k], &n.actions[k]);
        // entry (r, c) of φ_l A^M_a - A^N_a φ_j, with r < n_l, c < m_j
        for r in 0..n.dims[l] {
            for c in 0..m.dims[j] {
                let mut row = vec![f.zero(); total];
                for t in 0..m.dims[l] {
                    let x = am.get(t, c);
                    if !f.is_zero(x) {
                        let idx = offsets[l] + r * m.dims[l] + t;
                        row[idx] = f.add(&row[idx], x);
                    }
                }
                for t in 0..n.dims[j] {
                    let x = an.get(r, t);
                    if !f.is_zero(x) {
                        let idx = offsets[j] + t * m.dims[j] + c;
                        row[idx] = f.sub(&row[idx], x);
                    }
                }
                if row.iter().any(|x| !f.is_zero(x)) {
                    rows.push(row);
                }
            }
        }
    }
    let kernel = if rows.is_empty() {
        Matrix::identity(f, total).row_vecs()
    } else {
        Matrix::from_rows(total, rows).kernel(f)
    };
    kernel
        .iter()
        .map(|v| ModuleHom::from_vec(m, n, v))
        .collect()
}

/// Kernel of a module map, as a submodule of its source.
pub fn kernel<F: Field>(
    alg: &Algebra<F>,
    m: &Representation<F::Elem>,
    h: &ModuleHom<F::Elem>,
) -> (Representation<F::Elem>, ModuleHom<F::Elem>) {
    let f = alg.field();
    let sub: Vec<Subspace<F::Elem>> = h
        .maps
        .iter()
        .zip(&m.dims)
        .map(|(mat, &d)| Subspace::spanned_by(f, d, mat.kernel(f)))
        .collect();
    m.submodule(alg, &sub)
}

/// Cokernel of a module map `h: M -> N`, with the projection from `N`.
pub fn cokernel<F: Field>(
    alg: &Algebra<F>,
    n: &Representation<F::Elem>,
    h: &ModuleHom<F::Elem>,
) -> (Representation<F::Elem>, ModuleHom<F::Elem>) {
    let f = alg.field();
    let sub: Vec<Subspace<F::Elem>> = h
        .maps
        .iter()
        .zip(&n.dims)
        .map(|(mat, &d)| Subspace::spanned_by(f, d, (0..mat.cols()).map(|c| mat.column(c))))
        .collect();
    n.quotient(alg, &sub)
}

/// The module map `⊕ P_source -> ⊕ P_target` given by a map of projectives.
pub fn proj_map_to_hom<F: Field>(alg: &Algebra<F>, g: &ProjMap<F::Elem>) -> ModuleHom<F::Elem> {
    let f = alg.field();
    let b = alg.blocks();
    let n = alg.vertex_count();
    let maps = (0..n)
        .map(|k| {
            let rows: usize = g.target.iter().map(|&v| b.block_dim(v, k)).sum();
            let cols: usize = g.source.iter().map(|&u| b.block_dim(u, k)).sum();
            let mut mat = Matrix::zeros(f, rows, cols);
            let mut r0 = 0;
            for (t, &v) in g.target.iter().enumerate() {
                let mut c0 = 0;
                for (s, &u) in g.source.iter().enumerate() {
                    let block = b.left_mul_matrix(v, u, k, &g.entries[t][s]);
                    for r in 0..block.rows() {
                        for c in 0..block.cols() {
                            mat.set(r0 + r, c0 + c, block.get(r, c).clone());
                        }
                    }
                    c0 += b.block_dim(u, k);
                }
                r0 += b.block_dim(v, k);
            }
            mat
        })
        .collect();
    ModuleHom { maps }
}

/// Offset of the top generator `e_{u_s}` of summand `s` inside the vertex-`u_s`
/// space of `⊕ P_u`.
fn top_offset<F: Field>(alg: &Algebra<F>, vertices: &[usize], s: usize) -> usize {
    let u = vertices[s];
    vertices[..s].iter().map(|&w| alg.block_dim(w, u)).sum()
}

/// A module map out of `⊕ P_source` as the element images of the top generators,
/// landing in the module `target`: column `s` is the image of `e_{u_s}`.
pub fn images_of_tops<F: Field>(
    alg: &Algebra<F>,
    source: &[usize],
    h: &ModuleHom<F::Elem>,
) -> Vec<Vec<F::Elem>> {
    (0..source.len())
        .map(|s| h.maps[source[s]].column(top_offset(alg, source, s)))
        .collect()
}

/// A module map `⊕ P_source -> ⊕ P_target` converted back to a matrix of algebra elements.
pub fn hom_to_proj_map<F: Field>(
    alg: &Algebra<F>,
    source: &[usize],
    target: &[usize],
    h: &ModuleHom<F::Elem>,
) -> ProjMap<F::Elem> {
    let b = alg.blocks();
    let tops = images_of_tops(alg, source, h);
    let mut g = ProjMap::zero(b, source, target);
    for (s, &u) in source.iter().enumerate() {
        let mut off = 0;
        for (t, &v) in target.iter().enumerate() {
            let d = b.block_dim(v, u);
            g.entries[t][s] = tops[s][off..off + d].to_vec();
            off += d;
        }
    }
    g
}

/// The module map `⊕ P_u -> M` sending `e_{u_s}` to `gens[s]` (in `M_{u_s}`).
pub fn map_from_projectives<F: Field>(
    alg: &Algebra<F>,
    m: &Representation<F::Elem>,
    source: &[usize],
    gens: &[Vec<F::Elem>],
) -> ModuleHom<F::Elem> {
    let f = alg.field();
    let maps = (0..alg.vertex_count())
        .map(|k| {
            let mut cols = Vec::new();
            for (s, &u) in source.iter().enumerate() {
                for p in alg.basis_paths(u, k) {
                    cols.push(m.path_action(f, alg, p).apply(f, &gens[s]));
                }
            }
            Matrix::from_columns(f, m.dims[k], cols)
        })
        .collect();
    ModuleHom { maps }
}

/// Projective cover: the vertex list of `P(top M)`, the generators, and the cover map.
pub fn projective_cover<F: Field>(
    alg: &Algebra<F>,
    m: &Representation<F::Elem>,
) -> (Vec<usize>, ModuleHom<F::Elem>) {
    let f = alg.field();
    let rad = m.radical(alg);
    let mut source = Vec::new();
    let mut gens = Vec::new();
    for (j, r) in rad.iter().enumerate() {
        let full = Subspace::spanned_by(f, m.dims[j], Matrix::identity(f, m.dims[j]).row_vecs());
        for v in r.complement_in(f, &full) {
            source.push(j);
            gens.push(v);
        }
    }
    let h = map_from_projectives(alg, m, &source, &gens);
    (source, h)
}

/// One step of a minimal projective resolution.
#[derive(Clone, Debug)]
pub struct SyzygyStep<E> {
    pub cover: Vec<usize>,
    pub cover_map: ModuleHom<E>,
    pub kernel: Representation<E>,
    pub inclusion: ModuleHom<E>,
}

pub fn syzygy<F: Field>(
    alg: &Algebra<F>,
    m: &Representation<F::Elem>,
) -> Result<SyzygyStep<F::Elem>> {
    if m.is_zero() {
        return Err(Error::ZeroModule);
    }
    let (cover, cover_map) = projective_cover(alg, m);
    let p = projective_sum(alg, &cover);
    let (kernel, inclusion) = kernel(alg, &p, &cover_map);
    Ok(SyzygyStep {
        cover,
        cover_map,
        kernel,
        inclusion,
    })
}

/// `P_k -> ... -> P_0 -> M`: `terms[k]` is the vertex list of `P_k` and
/// `differentials[k-1]` is `d_k: P_k -> P_{k-1}`.
#[derive(Clone, Debug)]
pub struct ResolutionSegment<E> {
    pub terms: Vec<Vec<usize>>,
    pub differentials: Vec<ProjMap<E>>,
    pub augmentation: ModuleHom<E>,
    /// `Ω^k(M)` for `k = 0..=len`
    pub syzygies: Vec<Representation<E>>,
}

pub fn projective_resolution<F: Field>(
    alg: &Algebra<F>,
    m: &Representation<F::Elem>,
    len: usize,
) -> Result<ResolutionSegment<F::Elem>> {
    let first = syzygy(alg, m)?;
    let mut terms = vec![first.cover.clone()];
    let mut differentials = Vec::new();
    let mut syzygies = vec![m.clone(), first.kernel.clone()];
    let augmentation = first.cover_map.clone();
    let mut prev = first;
    for _ in 1..=len {
        if prev.kernel.is_zero() {
            break;
        }
        let step = syzygy(alg, &prev.kernel)?;
        let into_prev = prev.inclusion.compose(alg.field(), &step.cover_map);
        differentials.push(hom_to_proj_map(
            alg,
            &step.cover,
            terms.last().unwrap(),
            &into_prev,
        ));
        terms.push(step.cover.clone());
        syzygies.push(step.kernel.clone());
        prev = step;
    }
    Ok(ResolutionSegment {
        terms,
        differentials,
        augmentation,
        syzygies,
    })
}

/// Injective envelope `M -> ⊕ P_j` for a self-injective algebra with Nakayama
/// permutation `nu` (`soc P_j ≅ S_{nu(j)}`).
pub fn injective_envelope<F: Field>(
    alg: &Algebra<F>,
    m: &Representation<F::Elem>,
) -> Result<(Vec<usize>, ModuleHom<F::Elem>)> {
    let f = alg.field();
    let nu = crate::algebra::nakayama_permutation(alg)?;
    let soc = m.socle(alg);
    let mut target = Vec::new();
    let mut parts: Vec<ModuleHom<F::Elem>> = Vec::new();
    for (t, s) in soc.iter().enumerate() {
        if s.dim() == 0 {
            continue;
        }
        let j = nu.iter().position(|&x| x == t).unwrap();
        let p = projective(alg, j);
        // restrictions of each hom to soc_t, as vectors
        let mut chosen = Subspace::new(s.dim() * p.dims[t]);
        let mut picked = 0;
        for h in hom_space(alg, m, &p) {
            let restr: Vec<F::Elem> = s
                .basis()
                .iter()
                .flat_map(|v| h.maps[t].apply(f, v))
                .collect();
            if chosen.insert(f, restr) {
                target.push(j);
                parts.push(h);
                picked += 1;
                if picked == s.dim() {
                    break;
                }
            }
        }
        if picked < s.dim() {
            return Err(Error::NotSelfInjective(format!(
                "socle at vertex {} does not embed",
                t + 1
            )));
        }
    }
    let maps = (0..m.dims.len())
        .map(|k| {
            let rows: Vec<Vec<F::Elem>> = parts.iter().flat_map(|h| h.maps[k].row_vecs()).collect();
            Matrix::from_rows(m.dims[k], rows)
        })
        .collect();
    let env = ModuleHom { maps };
    debug_assert!(env.is_injective(f));
    Ok((target, env))
}

/// `Ω^{-1}(M)`: the cokernel of the injective envelope.
pub fn cosyzygy<F: Field>(
    alg: &Algebra<F>,
    m: &Representation<F::Elem>,
) -> Result<Representation<F::Elem>> {
    let (target, env) = injective_envelope(alg, m)?;
    let p = projective_sum(alg, &target);
    Ok(cokernel(alg, &p, &env).0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoOutcome<E> {
    Isomorphic(ModuleHom<E>),
    Distinct(String),
    Inconclusive(String),
}

/// Module isomorphism by escalation: basis homs, seeded random combinations,
/// then exhaustive enumeration when the hom space is small.
pub fn module_iso<F: Field>(
    alg: &Algebra<F>,
    m: &Representation<F::Elem>,
    n: &Representation<F::Elem>,
) -> IsoOutcome<F::Elem> {
    let f = alg.field();
    if m.dims != n.dims {
        return IsoOutcome::Distinct(format!(
            "dimension vectors {:?} and {:?} differ",
            m.dims, n.dims
        ));
    }
    let basis = hom_space(alg, m, n);
    let (emm, enm) = (hom_space(alg, m, m).len(), basis.len());
    if emm != enm {
        return IsoOutcome::Distinct(format!("dim Hom(M,M) = {emm} but dim Hom(M,N) = {enm}"));
    }
    if m.is_zero() {
        return IsoOutcome::Isomorphic(ModuleHom::identity(f, m));
    }
    for h in &basis {
        if h.is_iso(f) {
            return IsoOutcome::Isomorphic(h.clone());
        }
    }
    let vecs: Vec<Vec<F::Elem>> = basis.iter().map(ModuleHom::to_vec).collect();
    let combine = |coeffs: &[F::Elem]| {
        let mut v = vec![f.zero(); vecs[0].len()];
        for (c, b) in coeffs.iter().zip(&vecs) {
            axpy(f, &mut v, c, b);
        }
        ModuleHom::from_vec(m, n, &v)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(ISO_SEED);
    for _ in 0..ISO_RANDOM_TRIES {
        let coeffs: Vec<F::Elem> = (0..vecs.len()).map(|_| f.random(&mut rng)).collect();
        let h = combine(&coeffs);
        if h.is_iso(f) {
            return IsoOutcome::Isomorphic(h);
        }
    }
    match f.order() {
        Some(q) if (vecs.len() as f64) * (q as f64).log10() <= EXHAUSTIVE_LIMIT.log10() => {
            let total = q.pow(vecs.len() as u32);
            for k in 0..total {
                let mut rest = k;
                let coeffs: Vec<F::Elem> = (0..vecs.len())
                    .map(|_| {
                        let d = rest % q;
                        rest /= q;
                        f.nth(d)
                    })
                    .collect();
                let h = combine(&coeffs);
                if h.is_iso(f) {
                    return IsoOutcome::Isomorphic(h);
                }
            }
            IsoOutcome::Distinct("no invertible homomorphism (exhaustive search)".into())
        }
        _ => IsoOutcome::Inconclusive(format!(
            "no invertible map among {} random combinations of a {}-dimensional Hom space",
            ISO_RANDOM_TRIES,
            vecs.len()
        )),
    }
}

/// Least `d <= max_d` with `Ω^d(S_i) ≅ S_i`, or `None` if the bound is exhausted.
pub fn period_of_simple<F: Field>(
    alg: &Algebra<F>,
    i: usize,
    max_d: usize,
) -> Result<Option<usize>> {
    alg.check_vertex(i)?;
    crate::algebra::nakayama_permutation(alg)?;
    let s = simple(alg, i);
    let mut cur = s.clone();
    for d in 1..=max_d {
        cur = syzygy(alg, &cur)?.kernel;
        if cur.is_zero() {
            return Ok(None);
        }
        if cur.dims == s.dims {
            if let IsoOutcome::Isomorphic(_) = module_iso(alg, &cur, &s) {
                return Ok(Some(d));
            }
        }
    }
    Ok(None)
}

/// A minimal left `add Q`-approximation `X -> ⊕ P_v` with `Q = ⊕_{j≠i} P_j`.
#[derive(Clone, Debug)]
pub struct LeftApproximation<E> {
    pub codomain: Vec<usize>,
    pub map: ModuleHom<E>,
}

/// Left multiplication by `r ∈ e_j A e_l` composed after `h: X -> P_l`.
fn post_multiply<F: Field>(
    alg: &Algebra<F>,
    j: usize,
    l: usize,
    r: &[F::Elem],
    h: &ModuleHom<F::Elem>,
) -> ModuleHom<F::Elem> {
    let f = alg.field();
    let b = alg.blocks();
    ModuleHom {
        maps: (0..alg.vertex_count())
            .map(|t| b.left_mul_matrix(j, l, t, r).mul(f, &h.maps[t]))
            .collect(),
    }
}

/// Radical basis of `e_j A e_l` (all of it off the diagonal).
fn radical_basis<F: Field>(alg: &Algebra<F>, j: usize, l: usize) -> Vec<Vec<F::Elem>> {
    let b = alg.blocks();
    alg.basis_paths(j, l)
        .iter()
        .enumerate()
        .filter(|(_, p)| !p.is_trivial())
        .map(|(s, _)| b.basis_vector(j, l, s))
        .collect()
}

pub fn minimal_left_approximation<F: Field>(
    alg: &Algebra<F>,
    x: &Representation<F::Elem>,
    excluded: usize,
) -> Result<LeftApproximation<F::Elem>> {
    alg.check_vertex(excluded)?;
    let f = alg.field();
    let n = alg.vertex_count();
    let others: Vec<usize> = (0..n).filter(|&j| j != excluded).collect();
    let homs: Vec<Vec<ModuleHom<F::Elem>>> = (0..n)
        .map(|j| {
            if j == excluded {
                Vec::new()
            } else {
                hom_space(alg, x, &projective(alg, j))
            }
        })
        .collect();
    let mut codomain = Vec::new();
    let mut rows: Vec<Vec<Matrix<F::Elem>>> = Vec::new();
    for &j in &others {
        let pj = projective(alg, j);
        let dim = homs[j].first().map_or(0, |h| h.to_vec().len());
        if dim == 0 {
            continue;
        }
        let full = Subspace::spanned_by(f, dim, homs[j].iter().map(ModuleHom::to_vec));
        let mut rad = Subspace::new(dim);
        for &l in &others {
            for r in radical_basis(alg, j, l) {
                for h in &homs[l] {
                    rad.insert(f, post_multiply(alg, j, l, &r, h).to_vec());
                }
            }
        }
        for v in rad.complement_in(f, &full) {
            codomain.push(j);
            rows.push(ModuleHom::from_vec(x, &pj, &v).maps);
        }
    }
    let target = projective_sum(alg, &codomain);
    let maps = (0..n)
        .map(|k| {
            let r: Vec<Vec<F::Elem>> = rows.iter().flat_map(|m| m[k].row_vecs()).collect();
            Matrix::from_rows(x.dims[k], r)
        })
        .collect();
    let map = ModuleHom { maps };
    debug_assert_eq!(target.dims.len(), n);
    Ok(LeftApproximation { codomain, map })
}

/// Checks the approximation property (every map `X -> P_j`, `j ≠ i`, factors
/// through the approximation) and left minimality.
pub fn verify_left_approximation<F: Field>(
    alg: &Algebra<F>,
    x: &Representation<F::Elem>,
    excluded: usize,
    approx: &LeftApproximation<F::Elem>,
) -> bool {
    let f = alg.field();
    let b = alg.blocks();
    let n = alg.vertex_count();
    let cod = &approx.codomain;
    for j in (0..n).filter(|&j| j != excluded) {
        let pj = projective(alg, j);
        let homs = hom_space(alg, x, &pj);
        if homs.is_empty() {
            continue;
        }
        let dim = homs[0].to_vec().len();
        let mut reach = Subspace::new(dim);
        for (s, &v) in cod.iter().enumerate() {
            for t in 0..b.block_dim(j, v) {
                let g = ProjMap::single(v, j, b.basis_vector(j, v, t));
                let mut sel = ProjMap::zero(b, cod, &[v]);
                sel.entries[0][s] = b.unit(v).to_vec();
                let gm = proj_map_to_hom(alg, &g.compose(b, &sel));
                reach.insert(f, gm.compose(f, &approx.map).to_vec());
            }
        }
        if homs.iter().any(|h| !reach.contains(f, &h.to_vec())) {
            return false;
        }
    }
    // minimality: every h ∈ End(Q') with h ∘ approx = 0 is radical
    let unknowns = crate::proj::hom_dim(b, cod, cod);
    if unknowns == 0 {
        return true;
    }
    let mut cols = Vec::with_capacity(unknowns);
    for k in 0..unknowns {
        let mut e = vec![f.zero(); unknowns];
        e[k] = f.one();
        let h = ProjMap::from_vec(b, cod, cod, &e);
        cols.push(proj_map_to_hom(alg, &h).compose(f, &approx.map).to_vec());
    }
    let rows = cols[0].len();
    let sys = Matrix::from_columns(f, rows, cols);
    for v in sys.kernel(f) {
        let h = ProjMap::from_vec(b, cod, cod, &v);
        for (t, &vt) in cod.iter().enumerate() {
            for (s, &vs) in cod.iter().enumerate() {
                if vt == vs && !f.is_zero(&h.entries[t][s][0]) {
                    return false;
                }
            }
        }
    }
    true
}

/// A minimal right `add Q`-approximation `⊕ P_v -> X`, given by generator images.
#[derive(Clone, Debug)]
pub struct RightApproximation<E> {
    pub domain: Vec<usize>,
    pub generators: Vec<Vec<E>>,
    pub map: ModuleHom<E>,
}

pub fn minimal_right_approximation<F: Field>(
    alg: &Algebra<F>,
    x: &Representation<F::Elem>,
    excluded: usize,
) -> Result<RightApproximation<F::Elem>> {
    alg.check_vertex(excluded)?;
    let f = alg.field();
    let n = alg.vertex_count();
    let mut domain = Vec::new();
    let mut generators = Vec::new();
    for j in (0..n).filter(|&j| j != excluded) {
        let d = x.dims[j];
        if d == 0 {
            continue;
        }
        let mut rad = Subspace::new(d);
        for l in (0..n).filter(|&l| l != excluded) {
            for r in radical_basis(alg, l, j) {
                let act = x.element_action(alg, l, j, &r);
                for c in 0..act.cols() {
                    rad.insert(f, act.column(c));
                }
            }
        }
        let full = Subspace::spanned_by(f, d, Matrix::identity(f, d).row_vecs());
        for v in rad.complement_in(f, &full) {
            domain.push(j);
            generators.push(v);
        }
    }
    let map = map_from_projectives(alg, x, &domain, &generators);
    Ok(RightApproximation {
        domain,
        generators,
        map,
    })
}
