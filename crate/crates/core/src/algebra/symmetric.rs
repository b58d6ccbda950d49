//! Socles, the Nakayama permutation, and symmetrizing forms.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Algebra, AlgebraElement};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{dot, Matrix};

const SEED: u64 = 0x5f0e;
const RANDOM_TRIES: usize = 64;
const EXHAUSTIVE_LIMIT: u64 = 1_000_000;

/// A linear form `λ` on the algebra, given by its values on the diagonal-block
/// basis vectors (it vanishes on off-diagonal blocks).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricForm<E> {
    pub values: Vec<Vec<E>>,
}

impl<E: Clone + PartialEq> SymmetricForm<E> {
    pub fn eval<F: Field<Elem = E>>(&self, f: &F, i: usize, x: &[E]) -> E {
        dot(f, &self.values[i], x)
    }

    /// `λ(ab) = λ(ba)` on basis pairs and the pairing is nondegenerate.
    pub fn verify<F: Field<Elem = E>>(&self, alg: &Algebra<F>) -> bool {
        let f = alg.field();
        let b = alg.blocks();
        let n = alg.vertex_count();
        for i in 0..n {
            for j in 0..n {
                let (dij, dji) = (b.block_dim(i, j), b.block_dim(j, i));
                if dij != dji {
                    return false;
                }
                let mut m = Matrix::zeros(f, dij, dji);
                for s in 0..dij {
                    for t in 0..dji {
                        let ab = self.eval(f, i, b.basis_product(i, j, i, s, t));
                        let ba = self.eval(f, j, b.basis_product(j, i, j, t, s));
                        if ab != ba {
                            return false;
                        }
                        m.set(s, t, ab);
                    }
                }
                if !m.is_invertible(f) {
                    return false;
                }
            }
        }
        true
    }
}

/// Searches for a symmetrizing form. `Ok(None)` means none exists (proved by the
/// linear system or by exhaustive search); `Err(Inconclusive)` means the bounded
/// search gave up.
pub fn check_symmetric<F: Field>(alg: &Algebra<F>) -> Result<Option<SymmetricForm<F::Elem>>> {
    let f = alg.field();
    let b = alg.blocks();
    let n = alg.vertex_count();
    let offsets: Vec<usize> = (0..n)
        .scan(0, |acc, i| {
            let o = *acc;
            *acc += b.block_dim(i, i);
            Some(o)
        })
        .collect();
    let unknowns = offsets.last().map_or(0, |o| o + b.block_dim(n - 1, n - 1));
    let mut rows = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if b.block_dim(i, j) != b.block_dim(j, i) {
                return Ok(None);
            }
            for s in 0..b.block_dim(i, j) {
                for t in 0..b.block_dim(j, i) {
                    let mut row = vec![f.zero(); unknowns];
                    for (k, c) in b.basis_product(i, j, i, s, t).iter().enumerate() {
                        row[offsets[i] + k] = f.add(&row[offsets[i] + k], c);
                    }
                    for (k, c) in b.basis_product(j, i, j, t, s).iter().enumerate() {
                        row[offsets[j] + k] = f.sub(&row[offsets[j] + k], c);
                    }
                    if row.iter().any(|c| !f.is_zero(c)) {
                        rows.push(row);
                    }
                }
            }
        }
    }
    let solutions = if rows.is_empty() {
        Matrix::zeros(f, 0, unknowns).kernel(f)
    } else {
        Matrix::from_rows(unknowns, rows).kernel(f)
    };
    let to_form = |v: &[F::Elem]| SymmetricForm {
        values: (0..n)
            .map(|i| v[offsets[i]..offsets[i] + b.block_dim(i, i)].to_vec())
            .collect(),
    };
    let combine = |coeffs: &[F::Elem]| {
        let mut v = vec![f.zero(); unknowns];
        for (c, s) in coeffs.iter().zip(&solutions) {
            crate::linalg::axpy(f, &mut v, c, s);
        }
        v
    };
    let r = solutions.len();
    if r == 0 {
        return Ok(None);
    }
    for s in &solutions {
        let form = to_form(s);
        if form.verify(alg) {
            return Ok(Some(form));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..RANDOM_TRIES {
        let coeffs: Vec<F::Elem> = (0..r).map(|_| f.random(&mut rng)).collect();
        let form = to_form(&combine(&coeffs));
        if form.verify(alg) {
            return Ok(Some(form));
        }
    }
    match f.order() {
        Some(q) if (r as f64) * (q as f64).log10() <= (EXHAUSTIVE_LIMIT as f64).log10() => {
            let total = q.pow(r as u32);
            for k in 0..total {
                let mut rest = k;
                let coeffs: Vec<F::Elem> = (0..r)
                    .map(|_| {
                        let d = rest % q;
                        rest /= q;
                        f.nth(d)
                    })
                    .collect();
                let form = to_form(&combine(&coeffs));
                if form.verify(alg) {
                    return Ok(Some(form));
                }
            }
            Ok(None)
        }
        _ => Err(Error::Inconclusive),
    }
}

/// Basis of `soc(P_i) = {x in e_i A : x J = 0}`, as elements of blocks `(i, j)`.
pub fn socle_basis<F: Field>(alg: &Algebra<F>, i: usize) -> Vec<AlgebraElement<F::Elem>> {
    let f = alg.field();
    let b = alg.blocks();
    let q = alg.quiver();
    let mut out = Vec::new();
    for j in 0..alg.vertex_count() {
        let d = b.block_dim(i, j);
        let mut rows: Vec<Vec<F::Elem>> = Vec::new();
        for a in q.arrows_from(j) {
            let t = q.arrow(a).target;
            let m = b.right_mul_matrix(i, j, t, &alg.arrow_coords(a));
            rows.extend(m.row_vecs());
        }
        let kernel = if rows.is_empty() {
            Matrix::identity(f, d).row_vecs()
        } else {
            Matrix::from_rows(d, rows).kernel(f)
        };
        out.extend(kernel.into_iter().map(|coeffs| AlgebraElement {
            source: i,
            target: j,
            coeffs,
        }));
    }
    out
}

/// Basis of the socle of the left module `A e_j`, as elements of blocks `(i, j)`.
fn left_socle_basis<F: Field>(alg: &Algebra<F>, j: usize) -> Vec<AlgebraElement<F::Elem>> {
    let f = alg.field();
    let b = alg.blocks();
    let q = alg.quiver();
    let mut out = Vec::new();
    for i in 0..alg.vertex_count() {
        let d = b.block_dim(i, j);
        let mut rows: Vec<Vec<F::Elem>> = Vec::new();
        for a in q.arrows_to(i) {
            let s = q.arrow(a).source;
            let m = b.left_mul_matrix(s, i, j, &alg.arrow_coords(a));
            rows.extend(m.row_vecs());
        }
        let kernel = if rows.is_empty() {
            Matrix::identity(f, d).row_vecs()
        } else {
            Matrix::from_rows(d, rows).kernel(f)
        };
        out.extend(kernel.into_iter().map(|coeffs| AlgebraElement {
            source: i,
            target: j,
            coeffs,
        }));
    }
    out
}

/// `ν(i)` is the vertex with `soc(P_i) ≅ S_ν(i)`.
pub fn nakayama_permutation<F: Field>(alg: &Algebra<F>) -> Result<Vec<usize>> {
    let n = alg.vertex_count();
    let mut nu = Vec::with_capacity(n);
    for i in 0..n {
        let soc = socle_basis(alg, i);
        if soc.len() != 1 {
            return Err(Error::NotSelfInjective(format!(
                "soc(P_{}) has dimension {}",
                i + 1,
                soc.len()
            )));
        }
        nu.push(soc[0].target);
        let left = left_socle_basis(alg, i);
        if left.len() != 1 {
            return Err(Error::NotSelfInjective(format!(
                "the socle of the left projective at {} has dimension {}",
                i + 1,
                left.len()
            )));
        }
    }
    let mut seen = vec![false; n];
    for &j in &nu {
        if seen[j] {
            return Err(Error::NotSelfInjective(format!(
                "S_{} occurs twice as a socle",
                j + 1
            )));
        }
        seen[j] = true;
    }
    Ok(nu)
}

/// The element `ω_i` spanning `soc(P_i)`, normalized so its last nonzero
/// coordinate (the longest basis path involved) is 1.
pub fn socle_generator<F: Field>(alg: &Algebra<F>, i: usize) -> Result<AlgebraElement<F::Elem>> {
    alg.check_vertex(i)?;
    let nu = nakayama_permutation(alg).map_err(|_| Error::NotWeaklySymmetric)?;
    if nu[i] != i {
        return Err(Error::NotWeaklySymmetric);
    }
    let f = alg.field();
    let mut w = socle_basis(alg, i).remove(0);
    let last = w
        .coeffs
        .iter()
        .rposition(|c| !f.is_zero(c))
        .expect("nonzero socle");
    let inv = f.inv(&w.coeffs[last]).unwrap();
    w.coeffs = w.coeffs.iter().map(|c| f.mul(c, &inv)).collect();
    Ok(w)
}
