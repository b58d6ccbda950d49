//! Finite-dimensional algebras given by a complete set of orthogonal
//! idempotents and structure constants between the Peirce blocks `e_i A e_j`.

use crate::field::Field;
use crate::linalg::{axpy, Matrix, Subspace};

#[derive(Clone, Debug)]
pub struct BlockAlgebra<F: Field> {
    field: F,
    n: usize,
    dims: Vec<usize>,
    /// `(i, j, k)` -> products of block `(i,j)` basis with block `(j,k)` basis,
    /// laid out as `[s][t][coord]` with `coord` ranging over block `(i,k)`.
    mult: Vec<Vec<F::Elem>>,
    units: Vec<Vec<F::Elem>>,
}

impl<F: Field> BlockAlgebra<F> {
    /// `product(i, j, k, s, t)` gives the coordinates of `b_s * b_t`.
    pub fn from_fn(
        field: F,
        dims: Vec<usize>,
        units: Vec<Vec<F::Elem>>,
        mut product: impl FnMut(usize, usize, usize, usize, usize) -> Vec<F::Elem>,
    ) -> Self {
        let n = units.len();
        assert_eq!(dims.len(), n * n);
        let mut mult = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (a, b, c) = (dims[i * n + j], dims[j * n + k], dims[i * n + k]);
                    let mut table = Vec::with_capacity(a * b * c);
                    for s in 0..a {
                        for t in 0..b {
                            let v = product(i, j, k, s, t);
                            assert_eq!(v.len(), c);
                            table.extend(v);
                        }
                    }
                    mult.push(table);
                }
            }
        }
        BlockAlgebra {
            field,
            n,
            dims,
            mult,
            units,
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn block_dim(&self, i: usize, j: usize) -> usize {
        self.dims[i * self.n + j]
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn cartan(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.block_dim(i, j)).collect())
            .collect()
    }

    pub fn unit(&self, i: usize) -> &[F::Elem] {
        &self.units[i]
    }

    pub fn zero(&self, i: usize, j: usize) -> Vec<F::Elem> {
        vec![self.field.zero(); self.block_dim(i, j)]
    }

    pub fn basis_vector(&self, i: usize, j: usize, s: usize) -> Vec<F::Elem> {
        let mut v = self.zero(i, j);
        v[s] = self.field.one();
        v
    }

    /// Coordinates of `b_s * b_t` for basis elements of blocks `(i,j)` and `(j,k)`.
    pub fn basis_product(&self, i: usize, j: usize, k: usize, s: usize, t: usize) -> &[F::Elem] {
        let n = self.n;
        let (b, c) = (self.dims[j * n + k], self.dims[i * n + k]);
        let start = (s * b + t) * c;
        &self.mult[(i * n + j) * n + k][start..start + c]
    }

    /// `x * y` with `x` in block `(i,j)` and `y` in block `(j,k)`.
    pub fn mul(&self, i: usize, j: usize, k: usize, x: &[F::Elem], y: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let mut out = self.zero(i, k);
        for (s, xs) in x.iter().enumerate() {
            if f.is_zero(xs) {
                continue;
            }
            for (t, yt) in y.iter().enumerate() {
                if f.is_zero(yt) {
                    continue;
                }
                let c = f.mul(xs, yt);
                axpy(f, &mut out, &c, self.basis_product(i, j, k, s, t));
            }
        }
        out
    }

    /// Matrix of `y -> x * y` from block `(j,k)` to block `(i,k)`.
    pub fn left_mul_matrix(&self, i: usize, j: usize, k: usize, x: &[F::Elem]) -> Matrix<F::Elem> {
        let cols = (0..self.block_dim(j, k))
            .map(|t| self.mul(i, j, k, x, &self.basis_vector(j, k, t)))
            .collect();
        Matrix::from_columns(&self.field, self.block_dim(i, k), cols)
    }

    /// Matrix of `x -> x * y` from block `(i,j)` to block `(i,k)`.
    pub fn right_mul_matrix(&self, i: usize, j: usize, k: usize, y: &[F::Elem]) -> Matrix<F::Elem> {
        let cols = (0..self.block_dim(i, j))
            .map(|s| self.mul(i, j, k, &self.basis_vector(i, j, s), y))
            .collect();
        Matrix::from_columns(&self.field, self.block_dim(i, k), cols)
    }

    /// Span of all products `x * y` with `x` in `left[(i,j)]`, `y` in `right[(j,k)]`,
    /// landing in block `(i,k)`. Inputs are per-block spanning sets indexed `i*n+j`.
    pub fn product_space(
        &self,
        left: &[Vec<Vec<F::Elem>>],
        right: &[Vec<Vec<F::Elem>>],
        i: usize,
        k: usize,
    ) -> Subspace<F::Elem> {
        let n = self.n;
        let mut s = Subspace::new(self.block_dim(i, k));
        for j in 0..n {
            for x in &left[i * n + j] {
                for y in &right[j * n + k] {
                    s.insert(&self.field, self.mul(i, j, k, x, y));
                }
            }
        }
        s
    }

    /// Checks `(xy)z = x(yz)` on all basis triples when the algebra is small,
    /// otherwise on `samples` pseudo-random basis triples.
    pub fn check_associative(&self, samples: usize, seed: u64) -> bool {
        use rand::{Rng, SeedableRng};
        let n = self.n;
        let triple_ok = |i: usize, j: usize, k: usize, l: usize, s: usize, t: usize, u: usize| {
            let x = self.basis_vector(i, j, s);
            let y = self.basis_vector(j, k, t);
            let z = self.basis_vector(k, l, u);
            let left = self.mul(i, k, l, &self.mul(i, j, k, &x, &y), &z);
            let right = self.mul(i, j, l, &x, &self.mul(j, k, l, &y, &z));
            left == right
        };
        if self.dim() <= 50 {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        for l in 0..n {
                            for s in 0..self.block_dim(i, j) {
                                for t in 0..self.block_dim(j, k) {
                                    for u in 0..self.block_dim(k, l) {
                                        if !triple_ok(i, j, k, l, s, t, u) {
                                            return false;
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
            return true;
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut done = 0;
        let mut attempts = 0;
        while done < samples && attempts < samples * 50 {
            attempts += 1;
            let (i, j, k, l) = (
                rng.gen_range(0..n),
                rng.gen_range(0..n),
                rng.gen_range(0..n),
                rng.gen_range(0..n),
            );
            let (a, b, c) = (
                self.block_dim(i, j),
                self.block_dim(j, k),
                self.block_dim(k, l),
            );
            if a == 0 || b == 0 || c == 0 {
                continue;
            }
            if !triple_ok(
                i,
                j,
                k,
                l,
                rng.gen_range(0..a),
                rng.gen_range(0..b),
                rng.gen_range(0..c),
            ) {
                return false;
            }
            done += 1;
        }
        true
    }

    pub fn check_units(&self) -> bool {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                for s in 0..self.block_dim(i, j) {
                    let x = self.basis_vector(i, j, s);
                    if self.mul(i, i, j, &self.units[i], &x) != x
                        || self.mul(i, j, j, &x, &self.units[j]) != x
                    {
                        return false;
                    }
                }
            }
        }
        true
    }
}
