//! Invariants, socle quotients, a bounded isomorphism search, and the
//! socle-equivalence map `Φ: Λ -> End(T)` built from a periodic add-Q-resolution.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{nakayama_permutation, socle_basis, Algebra, AlgebraElement, BlockAlgebra};
use crate::complexes::{ChainMap, ProjComplex};
use crate::endo::{present, radical_data, EndoAlgebra};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{is_zero_vec, sub_vec, Matrix, Subspace};
use crate::mutation::AddQResolution;
use crate::presentation::{AlgebraPresentation, Relation, Term};
use crate::proj::{factor_through_target, ProjMap};
use crate::quiver::Path;

const MAX_CANONICAL_VERTICES: usize = 8;

/// Isomorphism invariants, with vertex-indexed data in a canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Invariants {
    pub dim: usize,
    pub loewy_length: usize,
    /// Cartan matrix in canonical vertex order
    pub cartan: Vec<Vec<usize>>,
    /// `layers[k][m][p] = dim e_k J^p e_m / e_k J^{p+1} e_m`, canonical order
    pub layers: Vec<Vec<Vec<usize>>>,
    pub center_dim: usize,
}

fn layer_table<F: Field>(alg: &Algebra<F>) -> Vec<Vec<Vec<usize>>> {
    let n = alg.vertex_count();
    (0..n)
        .map(|k| (0..n).map(|m| alg.radical_layers(k, m)).collect())
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                rec(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Vertex order minimizing the flattened layer table lexicographically; for
/// large quivers vertices are sorted by their sorted row and column data.
fn canonical_order(table: &[Vec<Vec<usize>>]) -> Vec<usize> {
    let n = table.len();
    let flatten = |p: &[usize]| -> Vec<&Vec<usize>> {
        p.iter()
            .flat_map(|&k| p.iter().map(move |&m| &table[k][m]))
            .collect()
    };
    if n <= MAX_CANONICAL_VERTICES {
        permutations(n)
            .into_iter()
            .min_by(|a, b| flatten(a).cmp(&flatten(b)))
            .unwrap_or_default()
    } else {
        let key = |k: usize| {
            let mut row: Vec<&Vec<usize>> = table[k].iter().collect();
            let mut col: Vec<&Vec<usize>> = table.iter().map(|r| &r[k]).collect();
            row.sort();
            col.sort();
            (table[k][k].clone(), row, col)
        };
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&k| key(k));
        order
    }
}

/// Dimension of the center; central elements lie in the diagonal blocks.
pub fn center_dim<F: Field>(b: &BlockAlgebra<F>) -> usize {
    let f = b.field();
    let n = b.vertex_count();
    let offsets: Vec<usize> = (0..n)
        .scan(0, |acc, k| {
            let o = *acc;
            *acc += b.block_dim(k, k);
            Some(o)
        })
        .collect();
    let unknowns: usize = (0..n).map(|k| b.block_dim(k, k)).sum();
    let mut rows: Vec<Vec<F::Elem>> = Vec::new();
    for k in 0..n {
        for l in 0..n {
            for s in 0..b.block_dim(k, l) {
                let a = b.basis_vector(k, l, s);
                // z_k a - a z_l = 0
                let left = b.right_mul_matrix(k, k, l, &a);
                let right = b.left_mul_matrix(k, l, l, &a);
                for r in 0..b.block_dim(k, l) {
                    let mut row = vec![f.zero(); unknowns];
                    for c in 0..b.block_dim(k, k) {
                        row[offsets[k] + c] = f.add(&row[offsets[k] + c], left.get(r, c));
                    }
                    for c in 0..b.block_dim(l, l) {
                        row[offsets[l] + c] = f.sub(&row[offsets[l] + c], right.get(r, c));
                    }
                    rows.push(row);
                }
            }
        }
    }
    if rows.is_empty() {
        return unknowns;
    }
    Matrix::from_rows(unknowns, rows).kernel(f).len()
}

pub fn invariants<F: Field>(alg: &Algebra<F>) -> Invariants {
    let table = layer_table(alg);
    let order = canonical_order(&table);
    let cartan_raw = alg.cartan();
    let loewy_length = alg.loewy_length();
    let pad = |mut v: Vec<usize>| {
        v.resize(loewy_length, 0);
        v
    };
    Invariants {
        dim: alg.dim(),
        loewy_length,
        cartan: order
            .iter()
            .map(|&k| order.iter().map(|&m| cartan_raw[k][m]).collect())
            .collect(),
        layers: order
            .iter()
            .map(|&k| order.iter().map(|&m| pad(table[k][m].clone())).collect())
            .collect(),
        center_dim: center_dim(alg.blocks()),
    }
}

fn invariant_witness(a: &Invariants, b: &Invariants) -> Option<String> {
    if a.dim != b.dim {
        return Some(format!("dimension {} vs {}", a.dim, b.dim));
    }
    if a.cartan.len() != b.cartan.len() {
        return Some(format!("{} vs {} vertices", a.cartan.len(), b.cartan.len()));
    }
    if a.loewy_length != b.loewy_length {
        return Some(format!(
            "Loewy length {} vs {}",
            a.loewy_length, b.loewy_length
        ));
    }
    if a.cartan != b.cartan {
        return Some(format!("Cartan matrices {:?} vs {:?}", a.cartan, b.cartan));
    }
    if a.layers != b.layers {
        return Some("radical layer dimensions differ".into());
    }
    if a.center_dim != b.center_dim {
        return Some(format!(
            "center dimension {} vs {}",
            a.center_dim, b.center_dim
        ));
    }
    None
}

fn rebuild_with<F: Field>(alg: &Algebra<F>, extra: Vec<Relation<F>>) -> Result<Algebra<F>> {
    let pres = alg.presentation();
    let mut relations = pres.relations.clone();
    relations.extend(extra);
    let mut new = AlgebraPresentation::new(pres.field.clone(), pres.quiver.clone(), relations)?;
    new.meta = pres.meta.clone();
    Algebra::build(&new, alg.loewy_length() + 2)
}

/// The generator `ω_i` of `soc(P_i)`, which must be a line in block `(i,i)`.
fn socle_line_at<F: Field>(alg: &Algebra<F>, i: usize) -> Result<AlgebraElement<F::Elem>> {
    match socle_basis(alg, i).as_slice() {
        [w] if w.target == i => Ok(w.clone()),
        _ => Err(Error::NotWeaklySymmetric),
    }
}

/// `ω_i` as a relation, if every path it involves has length at least two.
fn socle_relation<F: Field>(alg: &Algebra<F>, i: usize) -> Result<Option<Relation<F>>> {
    let f = alg.field();
    let w = socle_line_at(alg, i)?;
    let terms: Vec<Term<F>> = w
        .coeffs
        .iter()
        .zip(alg.basis_paths(i, i))
        .filter(|(c, _)| !f.is_zero(c))
        .map(|(c, p)| Term {
            coeff: c.clone(),
            path: p.clone(),
        })
        .collect();
    let long = terms.iter().all(|t| t.path.len() >= 2);
    Ok(long.then_some(Relation { terms }))
}

/// Quotient of a block algebra by a two-sided ideal, with the new basis taken
/// as the standard vectors off the ideal's pivots.
fn quotient_blocks<F: Field>(b: &BlockAlgebra<F>, ideal: &[Subspace<F::Elem>]) -> BlockAlgebra<F> {
    let f = b.field();
    let n = b.vertex_count();
    let kept: Vec<Vec<usize>> = (0..n * n)
        .map(|idx| {
            (0..b.block_dim(idx / n, idx % n))
                .filter(|c| !ideal[idx].pivots().contains(c))
                .collect()
        })
        .collect();
    let project = |idx: usize, v: &[F::Elem]| -> Vec<F::Elem> {
        let r = ideal[idx].reduced(f, v);
        kept[idx].iter().map(|&c| r[c].clone()).collect()
    };
    let lift = |idx: usize, s: usize| -> Vec<F::Elem> {
        let mut v = vec![f.zero(); b.block_dim(idx / n, idx % n)];
        v[kept[idx][s]] = f.one();
        v
    };
    let dims = kept.iter().map(Vec::len).collect();
    let units = (0..n).map(|k| project(k * n + k, b.unit(k))).collect();
    BlockAlgebra::from_fn(f.clone(), dims, units, |i, j, k, s, t| {
        let x = b.mul(i, j, k, &lift(i * n + j, s), &lift(j * n + k, t));
        project(i * n + k, &x)
    })
}

fn quotient_by_socles<F: Field>(alg: &Algebra<F>, vertices: &[usize]) -> Result<Algebra<F>> {
    let mut rels = Vec::new();
    let mut all_long = true;
    for &i in vertices {
        match socle_relation(alg, i)? {
            Some(r) => rels.push(r),
            None => all_long = false,
        }
    }
    if all_long {
        return rebuild_with(alg, rels);
    }
    let f = alg.field();
    let n = alg.vertex_count();
    let mut ideal: Vec<Subspace<F::Elem>> = (0..n * n)
        .map(|idx| Subspace::new(alg.block_dim(idx / n, idx % n)))
        .collect();
    for &i in vertices {
        let w = socle_line_at(alg, i)?;
        ideal[i * n + i].insert(f, w.coeffs);
    }
    let q = quotient_blocks(alg.blocks(), &ideal);
    Ok(present(&q, Some(alg.quiver()))?.algebra)
}

/// `Λ / soc(Λ)` for a weakly symmetric algebra.
pub fn socle_quotient<F: Field>(alg: &Algebra<F>) -> Result<Algebra<F>> {
    let nu = nakayama_permutation(alg).map_err(|_| Error::NotWeaklySymmetric)?;
    if nu.iter().enumerate().any(|(k, &v)| k != v) {
        return Err(Error::NotWeaklySymmetric);
    }
    let all: Vec<usize> = (0..alg.vertex_count()).collect();
    quotient_by_socles(alg, &all)
}

/// `Λ / soc(P_i)` for a weakly symmetric algebra.
pub fn socle_quotient_at<F: Field>(alg: &Algebra<F>, i: usize) -> Result<Algebra<F>> {
    alg.check_vertex(i)?;
    quotient_by_socles(alg, &[i])
}

/// An isomorphism `A -> B` given by a vertex bijection and arrow images.
#[derive(Clone, Debug, PartialEq)]
pub struct IsoCertificate<E> {
    /// vertex `k` of `A` goes to `permutation[k]` of `B`
    pub permutation: Vec<usize>,
    /// image of arrow `a` of `A`, in coordinates of block `(σ s(a), σ t(a))` of `B`
    pub images: Vec<Vec<E>>,
}

impl<E: Clone + PartialEq + Send + Sync> IsoCertificate<E> {
    pub fn to_json<F: Field<Elem = E>>(&self, a: &Algebra<F>, b: &Algebra<F>) -> Value {
        let f = a.field();
        let substitution: Vec<Value> = a
            .quiver()
            .arrows()
            .iter()
            .zip(&self.images)
            .map(|(arrow, img)| {
                let (s, t) = (
                    self.permutation[arrow.source],
                    self.permutation[arrow.target],
                );
                let terms: Vec<Value> = img
                    .iter()
                    .zip(b.basis_paths(s, t))
                    .filter(|(c, _)| !f.is_zero(c))
                    .map(|(c, p)| json!({ "coeff": f.to_json(c), "path": b.quiver().path_ids(p) }))
                    .collect();
                json!({ "arrow": arrow.id, "image": terms })
            })
            .collect();
        json!({
            "permutation": self.permutation.iter().map(|v| v + 1).collect::<Vec<_>>(),
            "substitution": substitution,
        })
    }
}

fn eval_path<F: Field>(
    a: &Algebra<F>,
    b: &Algebra<F>,
    sigma: &[usize],
    images: &[Vec<F::Elem>],
    p: &Path,
) -> Vec<F::Elem> {
    let s = sigma[p.source];
    let mut at = p.source;
    let mut v = b.blocks().unit(s).to_vec();
    for &x in &p.arrows {
        let t = a.quiver().arrow(x).target;
        v = b.blocks().mul(s, sigma[at], sigma[t], &v, &images[x]);
        at = t;
    }
    v
}

fn eval_relation<F: Field>(
    a: &Algebra<F>,
    b: &Algebra<F>,
    sigma: &[usize],
    images: &[Vec<F::Elem>],
    r: &Relation<F>,
) -> Vec<F::Elem> {
    let f = a.field();
    let p0 = &r.terms[0].path;
    let mut v = vec![f.zero(); b.block_dim(sigma[p0.source], sigma[a.quiver().path_target(p0)])];
    for t in &r.terms {
        crate::linalg::axpy(
            f,
            &mut v,
            &t.coeff,
            &eval_path(a, b, sigma, images, &t.path),
        );
    }
    v
}

/// Matrices `A(k,l) -> B(σk,σl)` of the algebra map defined by arrow images.
fn induced_matrices<F: Field>(
    a: &Algebra<F>,
    b: &Algebra<F>,
    sigma: &[usize],
    images: &[Vec<F::Elem>],
) -> Vec<Matrix<F::Elem>> {
    let f = a.field();
    let n = a.vertex_count();
    (0..n * n)
        .map(|idx| {
            let (k, l) = (idx / n, idx % n);
            let cols = a
                .basis_paths(k, l)
                .iter()
                .map(|p| eval_path(a, b, sigma, images, p))
                .collect();
            Matrix::from_columns(f, b.block_dim(sigma[k], sigma[l]), cols)
        })
        .collect()
}

/// Re-checks an isomorphism certificate in both directions: the images kill
/// the relations of `A`, the induced map is bijective, and the inverse images
/// of the arrows of `B` kill the relations of `B`.
pub fn verify_isomorphism<F: Field>(
    a: &Algebra<F>,
    b: &Algebra<F>,
    cert: &IsoCertificate<F::Elem>,
) -> bool {
    let f = a.field();
    let n = a.vertex_count();
    let sigma = &cert.permutation;
    if b.vertex_count() != n || sigma.len() != n || a.dim() != b.dim() {
        return false;
    }
    let mut seen = vec![false; n];
    for &v in sigma {
        if v >= n || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    if cert.images.len() != a.quiver().arrows().len() {
        return false;
    }
    for (arrow, img) in a.quiver().arrows().iter().zip(&cert.images) {
        let (s, t) = (sigma[arrow.source], sigma[arrow.target]);
        if img.len() != b.block_dim(s, t)
            || b.basis_paths(s, t)
                .iter()
                .zip(img)
                .any(|(p, c)| p.is_trivial() && !f.is_zero(c))
        {
            return false;
        }
    }
    if a.presentation()
        .relations
        .iter()
        .any(|r| !is_zero_vec(f, &eval_relation(a, b, sigma, &cert.images, r)))
    {
        return false;
    }
    let mats = induced_matrices(a, b, sigma, &cert.images);
    let mut inverses = Vec::with_capacity(n * n);
    for m in &mats {
        if m.rows() != m.cols() {
            return false;
        }
        if m.cols() == 0 {
            inverses.push(m.clone());
            continue;
        }
        match m.inverse(f) {
            Some(inv) => inverses.push(inv),
            None => return false,
        }
    }
    // inverse direction
    let mut inv_sigma = vec![0; n];
    for (k, &v) in sigma.iter().enumerate() {
        inv_sigma[v] = k;
    }
    let back: Vec<Vec<F::Elem>> = b
        .quiver()
        .arrows()
        .iter()
        .enumerate()
        .map(|(x, arrow)| {
            let (k, l) = (inv_sigma[arrow.source], inv_sigma[arrow.target]);
            inverses[k * n + l].apply(f, &b.arrow_coords(x))
        })
        .collect();
    b.presentation()
        .relations
        .iter()
        .all(|r| is_zero_vec(f, &eval_relation(b, a, &inv_sigma, &back, r)))
}

/// Limits of the isomorphism search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoBudget {
    /// total number of linear parts tried, over all vertex bijections
    pub linear_parts: usize,
    /// alternative solutions tried per lifting degree
    pub kernel_tries: usize,
    pub seed: u64,
}

impl Default for IsoBudget {
    fn default() -> Self {
        IsoBudget {
            linear_parts: 200_000,
            kernel_tries: 4,
            seed: 0x150,
        }
    }
}

/// The outcome of comparing two algebras.
#[derive(Clone, Debug)]
pub enum EquivalenceVerdict<E> {
    Isomorphic(IsoCertificate<E>),
    SocleEquivalentAt {
        vertex: usize,
        certificate: SocleCertificate<E>,
    },
    Distinct(String),
    Inconclusive(Vec<String>),
}

/// Evidence that `A / soc(P_i) ≅ B / soc(P_i)`.
#[derive(Clone, Debug)]
pub enum SocleCertificate<E> {
    Phi(PhiCertificate<E>),
    /// isomorphism `A / soc(P_i) -> B / soc(P_i)` between the rebuilt quotients
    Quotients(IsoCertificate<E>),
}

impl<E> EquivalenceVerdict<E> {
    pub fn kind(&self) -> &'static str {
        match self {
            EquivalenceVerdict::Isomorphic(_) => "Isomorphic",
            EquivalenceVerdict::SocleEquivalentAt { .. } => "SocleEquivalentAt",
            EquivalenceVerdict::Distinct(_) => "Distinct",
            EquivalenceVerdict::Inconclusive(_) => "Inconclusive",
        }
    }

    pub fn is_isomorphic(&self) -> bool {
        matches!(self, EquivalenceVerdict::Isomorphic(_))
    }
}

/// Arrows of `A` between two vertices, matched with the arrows of `B` between
/// their images.
struct ArrowGroup {
    a_arrows: Vec<usize>,
    b_arrows: Vec<usize>,
    /// fixed to the identity by rescaling vertices of `B`
    gauge: bool,
}

struct Searcher<'x, F: Field> {
    a: &'x Algebra<F>,
    b: &'x Algebra<F>,
    sigma: Vec<usize>,
    groups: Vec<ArrowGroup>,
    /// `degree_slots[x][d]`: basis indices of length-`d` paths in the block of arrow `x`'s image
    degree_slots: Vec<Vec<Vec<usize>>>,
    /// relations of `A` containing each arrow
    touching: Vec<Vec<usize>>,
    scalars: Vec<F::Elem>,
    entries: Vec<F::Elem>,
    kernel_tries: usize,
    seed: u64,
}

impl<'x, F: Field> Searcher<'x, F> {
    fn new(a: &'x Algebra<F>, b: &'x Algebra<F>, sigma: Vec<usize>, budget: &IsoBudget) -> Self {
        let f = a.field();
        let n = a.vertex_count();
        let qa = a.quiver();
        let qb = b.quiver();
        let mut groups = Vec::new();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for s in 0..n {
            for t in 0..n {
                let a_arrows: Vec<usize> = qa
                    .arrows_from(s)
                    .filter(|&x| qa.arrow(x).target == t)
                    .collect();
                if a_arrows.is_empty() {
                    continue;
                }
                let b_arrows: Vec<usize> = qb
                    .arrows_from(sigma[s])
                    .filter(|&x| qb.arrow(x).target == sigma[t])
                    .collect();
                let mut gauge = false;
                if a_arrows.len() == 1 && s != t {
                    let (rs, rt) = (find(&mut parent, s), find(&mut parent, t));
                    if rs != rt {
                        parent[rs] = rt;
                        gauge = true;
                    }
                }
                groups.push(ArrowGroup {
                    a_arrows,
                    b_arrows,
                    gauge,
                });
            }
        }
        let degree_slots = qa
            .arrows()
            .iter()
            .map(|arrow| {
                let paths = b.basis_paths(sigma[arrow.source], sigma[arrow.target]);
                let mut slots = vec![Vec::new(); b.loewy_length().max(1)];
                for (c, p) in paths.iter().enumerate() {
                    slots[p.len()].push(c);
                }
                slots
            })
            .collect();
        let rels = &a.presentation().relations;
        let touching = (0..qa.arrows().len())
            .map(|x| {
                (0..rels.len())
                    .filter(|&r| rels[r].terms.iter().any(|t| t.path.arrows.contains(&x)))
                    .collect()
            })
            .collect();
        let (scalars, entries) = match f.order() {
            Some(q) => (
                (1..q).map(|k| f.nth(k)).collect(),
                (0..q).map(|k| f.nth(k)).collect(),
            ),
            None => {
                let ints = |v: &[i64]| v.iter().map(|&k| f.from_i64(k)).collect::<Vec<_>>();
                let mut s = ints(&[1, -1, 2, -2]);
                let half = f.inv(&f.from_i64(2)).expect("characteristic zero");
                s.push(half.clone());
                s.push(f.neg(&half));
                (s, ints(&[0, 1, -1, 2, -2]))
            }
        };
        Searcher {
            a,
            b,
            sigma,
            groups,
            degree_slots,
            touching,
            scalars,
            entries,
            kernel_tries: budget.kernel_tries,
            seed: budget.seed,
        }
    }

    fn group_size(&self, g: &ArrowGroup) -> u128 {
        if g.gauge {
            return 1;
        }
        let m = g.a_arrows.len() as u32;
        if m == 1 {
            self.scalars.len() as u128
        } else {
            (self.entries.len() as u128).saturating_pow(m * m)
        }
    }

    fn candidate_count(&self) -> u128 {
        self.groups
            .iter()
            .fold(1u128, |acc, g| acc.saturating_mul(self.group_size(g)))
    }

    /// The `k`-th matrix of the group: the identity first, then all others in
    /// lexicographic order of entries.
    fn group_matrix(&self, g: &ArrowGroup, k: u128) -> Vec<Vec<F::Elem>> {
        let f = self.a.field();
        let m = g.a_arrows.len();
        if g.gauge || (m == 1 && k == 0) {
            return vec![vec![f.one()]];
        }
        if m == 1 {
            return vec![vec![self.scalars[k as usize].clone()]];
        }
        let q = self.entries.len() as u128;
        let pos = |e: &F::Elem| self.entries.iter().position(|x| x == e).unwrap() as u128;
        let mut identity_number = 0u128;
        for r in 0..m {
            for c in 0..m {
                let e = if r == c { f.one() } else { f.zero() };
                identity_number = identity_number * q + pos(&e);
            }
        }
        if k == 0 {
            return (0..m)
                .map(|r| {
                    (0..m)
                        .map(|c| if r == c { f.one() } else { f.zero() })
                        .collect()
                })
                .collect();
        }
        let mut number = if k <= identity_number { k - 1 } else { k };
        let mut digits = vec![0u128; m * m];
        for d in digits.iter_mut().rev() {
            *d = number % q;
            number /= q;
        }
        (0..m)
            .map(|r| {
                (0..m)
                    .map(|c| self.entries[digits[r * m + c] as usize].clone())
                    .collect()
            })
            .collect()
    }

    fn linear_images(&self, mut idx: u128) -> Option<Vec<Vec<F::Elem>>> {
        let f = self.a.field();
        let qa = self.a.quiver();
        let mut images: Vec<Vec<F::Elem>> = qa
            .arrows()
            .iter()
            .map(|arrow| {
                vec![
                    f.zero();
                    self.b
                        .block_dim(self.sigma[arrow.source], self.sigma[arrow.target])
                ]
            })
            .collect();
        for g in &self.groups {
            let size = self.group_size(g);
            let k = idx % size;
            idx /= size;
            let mat = self.group_matrix(g, k);
            if g.a_arrows.len() > 1
                && !Matrix::from_rows(g.a_arrows.len(), mat.clone()).is_invertible(f)
            {
                return None;
            }
            for (r, &x) in g.a_arrows.iter().enumerate() {
                for (c, &y) in g.b_arrows.iter().enumerate() {
                    crate::linalg::axpy(f, &mut images[x], &mat[r][c], &self.b.arrow_coords(y));
                }
            }
        }
        Some(images)
    }

    fn component(&self, r: usize, v: &[F::Elem], d: usize) -> Vec<F::Elem> {
        let rel = &self.a.presentation().relations[r];
        let p0 = &rel.terms[0].path;
        let (s, t) = (
            self.sigma[p0.source],
            self.sigma[self.a.quiver().path_target(p0)],
        );
        self.b
            .basis_paths(s, t)
            .iter()
            .zip(v)
            .filter(|(p, _)| p.len() == d)
            .map(|(_, c)| c.clone())
            .collect()
    }

    fn residual(&self, images: &[Vec<F::Elem>], d: usize) -> Vec<Vec<F::Elem>> {
        let rels = &self.a.presentation().relations;
        (0..rels.len())
            .map(|r| {
                self.component(
                    r,
                    &eval_relation(self.a, self.b, &self.sigma, images, &rels[r]),
                    d,
                )
            })
            .collect()
    }

    /// Fixes the degree `d-1` coordinates of the images so that every relation
    /// vanishes up to degree `d`, then recurses.
    fn lift(
        &self,
        images: Vec<Vec<F::Elem>>,
        d: usize,
        rng: &mut ChaCha8Rng,
    ) -> Option<Vec<Vec<F::Elem>>> {
        let f = self.a.field();
        if d >= self.b.loewy_length() {
            return Some(images);
        }
        let res = self.residual(&images, d);
        let unknowns: Vec<(usize, usize)> = if d >= 3 {
            (0..images.len())
                .flat_map(|x| {
                    self.degree_slots[x]
                        .get(d - 1)
                        .into_iter()
                        .flatten()
                        .map(move |&c| (x, c))
                })
                .collect()
        } else {
            Vec::new()
        };
        let c: Vec<F::Elem> = res.concat();
        if unknowns.is_empty() {
            return if is_zero_vec(f, &c) {
                self.lift(images, d + 1, rng)
            } else {
                None
            };
        }
        let offsets: Vec<usize> = res
            .iter()
            .scan(0, |acc, v| {
                let o = *acc;
                *acc += v.len();
                Some(o)
            })
            .collect();
        let rels = &self.a.presentation().relations;
        let cols: Vec<Vec<F::Elem>> = unknowns
            .iter()
            .map(|&(x, slot)| {
                let mut trial = images.clone();
                trial[x][slot] = f.add(&trial[x][slot], &f.one());
                let mut col = vec![f.zero(); c.len()];
                for &r in &self.touching[x] {
                    let v = self.component(
                        r,
                        &eval_relation(self.a, self.b, &self.sigma, &trial, &rels[r]),
                        d,
                    );
                    for (k, val) in sub_vec(f, &v, &res[r]).into_iter().enumerate() {
                        col[offsets[r] + k] = val;
                    }
                }
                col
            })
            .collect();
        let m = Matrix::from_columns(f, c.len(), cols);
        let target: Vec<F::Elem> = c.iter().map(|x| f.neg(x)).collect();
        let particular = if c.is_empty() {
            vec![f.zero(); unknowns.len()]
        } else {
            m.solve(f, &target)?
        };
        let kernel = if c.is_empty() {
            Matrix::identity(f, unknowns.len()).row_vecs()
        } else {
            m.kernel(f)
        };
        let tries = if kernel.is_empty() {
            1
        } else {
            1 + self.kernel_tries
        };
        for attempt in 0..tries {
            let mut y = particular.clone();
            if attempt > 0 {
                for k in &kernel {
                    let s = f.random(rng);
                    crate::linalg::axpy(f, &mut y, &s, k);
                }
            }
            let mut next = images.clone();
            for (&(x, slot), val) in unknowns.iter().zip(&y) {
                next[x][slot] = f.add(&next[x][slot], val);
            }
            if let Some(done) = self.lift(next, d + 1, rng) {
                return Some(done);
            }
        }
        None
    }

    fn attempt(&self, idx: u128) -> Option<IsoCertificate<F::Elem>> {
        let images = self.linear_images(idx)?;
        let mut rng =
            ChaCha8Rng::seed_from_u64(self.seed ^ (idx as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let _: u8 = rng.gen();
        let images = self.lift(images, 2, &mut rng)?;
        let cert = IsoCertificate {
            permutation: self.sigma.clone(),
            images,
        };
        verify_isomorphism(self.a, self.b, &cert).then_some(cert)
    }
}

/// Vertex bijections `σ` with `layers_A(k,m) = layers_B(σk,σm)`, in lexicographic order.
fn compatible_bijections<F: Field>(a: &Algebra<F>, b: &Algebra<F>) -> Vec<Vec<usize>> {
    let ta = layer_table(a);
    let tb = layer_table(b);
    let n = ta.len();
    fn rec(
        ta: &[Vec<Vec<usize>>],
        tb: &[Vec<Vec<usize>>],
        prefix: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) {
        let k = prefix.len();
        if k == ta.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..ta.len() {
            if used[v] {
                continue;
            }
            prefix.push(v);
            let ok = (0..=k).all(|j| ta[k][j] == tb[v][prefix[j]] && ta[j][k] == tb[prefix[j]][v]);
            if ok {
                used[v] = true;
                rec(ta, tb, prefix, used, out);
                used[v] = false;
            }
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&ta, &tb, &mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Bounded search for an isomorphism `A -> B`. Invariants are compared first;
/// then, for every compatible vertex bijection, linear parts of the arrow
/// images are enumerated (one arrow per spanning-tree edge fixed by rescaling
/// vertices) and lifted degree by degree by solving linear systems.
pub fn iso_search<F: Field>(
    a: &Algebra<F>,
    b: &Algebra<F>,
    budget: &IsoBudget,
) -> EquivalenceVerdict<F::Elem> {
    if let Some(w) = invariant_witness(&invariants(a), &invariants(b)) {
        return EquivalenceVerdict::Distinct(w);
    }
    let sigmas = compatible_bijections(a, b);
    if sigmas.is_empty() {
        return EquivalenceVerdict::Distinct(
            "no vertex bijection preserves the radical layers".into(),
        );
    }
    let mut log = Vec::new();
    let mut remaining = budget.linear_parts as u128;
    for sigma in sigmas {
        if remaining == 0 {
            log.push("linear-part budget exhausted".into());
            break;
        }
        let searcher = Searcher::new(a, b, sigma.clone(), budget);
        let total = searcher.candidate_count();
        let count = total.min(remaining);
        remaining -= count;
        let found = (0..count as u64)
            .into_par_iter()
            .find_map_first(|idx| searcher.attempt(idx as u128));
        if let Some(cert) = found {
            return EquivalenceVerdict::Isomorphic(cert);
        }
        let shown: Vec<usize> = sigma.iter().map(|v| v + 1).collect();
        log.push(format!(
            "σ = {shown:?}: {count} of {total} linear parts tried, none lifted"
        ));
    }
    EquivalenceVerdict::Inconclusive(log)
}

/// Compares `A / soc(P_i)` with `B / soc(P_i)` by [`iso_search`].
pub fn socle_equivalence_by_search<F: Field>(
    a: &Algebra<F>,
    b: &Algebra<F>,
    i: usize,
    budget: &IsoBudget,
) -> Result<EquivalenceVerdict<F::Elem>> {
    let qa = socle_quotient_at(a, i)?;
    let qb = socle_quotient_at(b, i)?;
    Ok(match iso_search(&qa, &qb, budget) {
        EquivalenceVerdict::Isomorphic(c) => EquivalenceVerdict::SocleEquivalentAt {
            vertex: i,
            certificate: SocleCertificate::Quotients(c),
        },
        other => other,
    })
}

/// Re-checks a socle-equivalence certificate between `A` and `B` at vertex `i`.
pub fn verify_socle_certificate<F: Field>(
    a: &Algebra<F>,
    b: &Algebra<F>,
    i: usize,
    cert: &SocleCertificate<F::Elem>,
) -> bool {
    match cert {
        SocleCertificate::Phi(c) => c.vertex == i && verify_phi(b.blocks(), a.blocks(), c).is_ok(),
        SocleCertificate::Quotients(c) => {
            match (socle_quotient_at(a, i), socle_quotient_at(b, i)) {
                (Ok(qa), Ok(qb)) => verify_isomorphism(&qa, &qb, c),
                _ => false,
            }
        }
    }
}

/// The map `Φ: Λ -> End_{K^b}(T)` on block bases, where `T` is the mutated
/// complex at vertex `i` plus the stalk projectives elsewhere.
#[derive(Clone, Debug)]
pub struct PhiCertificate<E> {
    pub vertex: usize,
    /// per block `(k,l)`: columns are the images of the basis of `e_k Λ e_l`
    pub matrices: Vec<Matrix<E>>,
}

impl<E: Clone + PartialEq + Send + Sync> PhiCertificate<E> {
    pub fn to_json<F: Field<Elem = E>>(&self, f: &F) -> Value {
        let mats: Vec<Value> = self
            .matrices
            .iter()
            .map(|m| {
                Value::Array(
                    (0..m.rows())
                        .map(|r| Value::Array(m.row(r).iter().map(|x| f.to_json(x)).collect()))
                        .collect(),
                )
            })
            .collect();
        json!({ "vertex": self.vertex + 1, "blocks": mats })
    }
}

/// Basis of the socle line of row `i` in block `(i,i)`, if `e_i A` has a simple
/// socle lying in that block.
fn socle_line<F: Field>(b: &BlockAlgebra<F>, i: usize) -> Result<Vec<F::Elem>> {
    let f = b.field();
    let n = b.vertex_count();
    let rad = radical_data(b)?;
    let mut found: Vec<(usize, Vec<F::Elem>)> = Vec::new();
    for j in 0..n {
        let d = b.block_dim(i, j);
        let mut rows: Vec<Vec<F::Elem>> = Vec::new();
        for t in 0..n {
            for r in rad.radical()[j * n + t].basis() {
                rows.extend(b.right_mul_matrix(i, j, t, r).row_vecs());
            }
        }
        let kernel = if rows.is_empty() {
            Matrix::identity(f, d).row_vecs()
        } else {
            Matrix::from_rows(d, rows).kernel(f)
        };
        found.extend(kernel.into_iter().map(|v| (j, v)));
    }
    match found.as_slice() {
        [(j, v)] if *j == i => Ok(v.clone()),
        _ => Err(Error::NotWeaklySymmetric),
    }
}

fn phi_image<F: Field>(
    b: &BlockAlgebra<F>,
    endo: &EndoAlgebra<F>,
    i: usize,
    d_plus: &ProjMap<F::Elem>,
    k: usize,
    l: usize,
    x: &[F::Elem],
) -> Result<Vec<F::Elem>> {
    let t = endo.summands();
    let fail = |what: &str| {
        Error::PhiVerificationFailed(format!(
            "{what} for a basis element of block ({}, {})",
            k + 1,
            l + 1
        ))
    };
    let single = ProjMap::single(l, k, x.to_vec());
    let map = match (k == i, l == i) {
        (false, false) => ChainMap::in_degree(b, &t[l], &t[k], 0, single),
        (false, true) => ChainMap::in_degree(b, &t[l], &t[k], 0, single.compose(b, d_plus)),
        (true, false) => {
            let g = factor_through_target(b, d_plus, &single)
                .ok_or_else(|| fail("no lift through d₊"))?;
            ChainMap::in_degree(b, &t[l], &t[k], 0, g)
        }
        (true, true) => {
            let c: &ProjComplex<F::Elem> = &t[i];
            let top = single.compose(b, d_plus);
            let mut comps =
                vec![factor_through_target(b, d_plus, &top)
                    .ok_or_else(|| fail("no lift through d₊"))?];
            for n in (c.lo()..0).rev() {
                let dn = c.diff(b, n);
                let h = comps.last().unwrap().compose(b, &dn);
                let g = factor_through_target(b, &dn, &h)
                    .ok_or_else(|| fail("no lift along the resolution"))?;
                comps.push(g);
            }
            comps.reverse();
            ChainMap { lo: c.lo(), comps }
        }
    };
    if !map.is_chain_map(b, &t[l], &t[k]) {
        return Err(fail("not a chain map"));
    }
    Ok(endo.class_of(k, l, &map))
}

/// Builds `Φ` and checks it: unital, multiplicative on all composable basis
/// pairs (exactly, except modulo `soc(P̃_i)` in block `(i,i)`), and bijective
/// modulo the socle lines of `P_i` and `P̃_i`.
pub fn construct_phi<F: Field>(
    alg: &Algebra<F>,
    res: &AddQResolution<F::Elem>,
    endo: &EndoAlgebra<F>,
) -> Result<PhiCertificate<F::Elem>> {
    let b = alg.blocks();
    let i = res.vertex();
    let d_plus = res
        .d_plus
        .as_ref()
        .ok_or_else(|| Error::PhiVerificationFailed("resolution has no periodic closure".into()))?;
    let expected = res.state.summands(alg)?;
    if endo.summands() != expected.as_slice() {
        return Err(Error::PhiVerificationFailed(
            "endomorphism algebra is not built on the resolution".into(),
        ));
    }
    let n = alg.vertex_count();
    let matrices = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let (k, l) = (idx / n, idx % n);
            let cols = (0..b.block_dim(k, l))
                .map(|s| phi_image(b, endo, i, d_plus, k, l, &b.basis_vector(k, l, s)))
                .collect::<Result<Vec<_>>>()?;
            Ok(Matrix::from_columns(
                alg.field(),
                endo.blocks().block_dim(k, l),
                cols,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let cert = PhiCertificate {
        vertex: i,
        matrices,
    };
    verify_phi(b, endo.blocks(), &cert)?;
    Ok(cert)
}

/// Independent re-check of a `Φ` certificate between block algebras.
pub fn verify_phi<F: Field>(
    base: &BlockAlgebra<F>,
    target: &BlockAlgebra<F>,
    cert: &PhiCertificate<F::Elem>,
) -> Result<()> {
    let f = base.field();
    let n = base.vertex_count();
    let i = cert.vertex;
    let fail = |msg: String| Err(Error::PhiVerificationFailed(msg));
    if target.vertex_count() != n || cert.matrices.len() != n * n {
        return fail("shape mismatch".into());
    }
    for idx in 0..n * n {
        let (k, l) = (idx / n, idx % n);
        let m = &cert.matrices[idx];
        if m.cols() != base.block_dim(k, l) || m.rows() != target.block_dim(k, l) {
            return fail(format!("block ({}, {}) has the wrong size", k + 1, l + 1));
        }
    }
    let omega = socle_line(base, i)?;
    let omega_t = socle_line(target, i)?;
    let soc_t = Subspace::spanned_by(f, omega_t.len(), [omega_t.clone()]);
    let apply = |k: usize, l: usize, x: &[F::Elem]| cert.matrices[k * n + l].apply(f, x);
    for k in 0..n {
        if apply(k, k, base.unit(k)) != target.unit(k) {
            return fail(format!("unit of vertex {} is not preserved", k + 1));
        }
    }
    let pairs: Vec<(usize, usize, usize)> = (0..n)
        .flat_map(|k| (0..n).flat_map(move |l| (0..n).map(move |m| (k, l, m))))
        .collect();
    let bad = pairs.par_iter().find_map_first(|&(k, l, m)| {
        for s in 0..base.block_dim(k, l) {
            for t in 0..base.block_dim(l, m) {
                let x = base.basis_vector(k, l, s);
                let y = base.basis_vector(l, m, t);
                let lhs = apply(k, m, &base.mul(k, l, m, &x, &y));
                let rhs = target.mul(k, l, m, &apply(k, l, &x), &apply(l, m, &y));
                let diff = sub_vec(f, &lhs, &rhs);
                let ok = if k == i && m == i {
                    soc_t.contains(f, &diff)
                } else {
                    is_zero_vec(f, &diff)
                };
                if !ok {
                    return Some(format!(
                        "Φ(xy) ≠ Φ(x)Φ(y) for basis elements {} of ({}, {}) and {} of ({}, {})",
                        s + 1,
                        k + 1,
                        l + 1,
                        t + 1,
                        l + 1,
                        m + 1
                    ));
                }
            }
        }
        None
    });
    if let Some(msg) = bad {
        return fail(msg);
    }
    // bijective modulo the socle lines
    for idx in 0..n * n {
        let (k, l) = (idx / n, idx % n);
        let m = &cert.matrices[idx];
        if k == i && l == i {
            if !soc_t.contains(f, &m.apply(f, &omega)) {
                return fail("soc(P_i) is not mapped into soc(P̃_i)".into());
            }
            let mut cols: Vec<Vec<F::Elem>> = (0..m.cols()).map(|c| m.column(c)).collect();
            cols.push(omega_t.clone());
            if Matrix::from_columns(f, m.rows(), cols).rank(f) != m.rows() {
                return fail("Φ is not surjective modulo soc(P̃_i)".into());
            }
        } else if m.rows() != m.cols() || (m.cols() > 0 && !m.is_invertible(f)) {
            return fail(format!(
                "Φ is not bijective on block ({}, {})",
                k + 1,
                l + 1
            ));
        }
    }
    Ok(())
}

/// JSON form of a verdict; certificates are included.
pub fn verdict_json<F: Field>(
    a: &Algebra<F>,
    b: &Algebra<F>,
    v: &EquivalenceVerdict<F::Elem>,
) -> Value {
    match v {
        EquivalenceVerdict::Isomorphic(c) => {
            json!({ "verdict": "Isomorphic", "certificate": c.to_json(a, b) })
        }
        EquivalenceVerdict::SocleEquivalentAt {
            vertex,
            certificate: SocleCertificate::Phi(c),
        } => {
            json!({ "verdict": "SocleEquivalentAt", "vertex": vertex + 1, "certificate": { "phi": c.to_json(a.field()) } })
        }
        EquivalenceVerdict::SocleEquivalentAt {
            vertex,
            certificate: SocleCertificate::Quotients(c),
        } => {
            let i = *vertex;
            let quotient_json = match (socle_quotient_at(a, i), socle_quotient_at(b, i)) {
                (Ok(qa), Ok(qb)) => c.to_json(&qa, &qb),
                _ => Value::Null,
            };
            json!({ "verdict": "SocleEquivalentAt", "vertex": i + 1, "certificate": { "quotients": quotient_json } })
        }
        EquivalenceVerdict::Distinct(w) => json!({ "verdict": "Distinct", "witness": w }),
        EquivalenceVerdict::Inconclusive(log) => json!({ "verdict": "Inconclusive", "log": log }),
    }
}
