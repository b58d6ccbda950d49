//! Dense exact linear algebra: matrices, reduced row echelon form, kernels,
//! and incrementally maintained subspaces.
//!
//! Vectors are plain `Vec<F::Elem>`. Matrices are row-major. All reductions
//! are fully reduced (RREF), so a subspace has exactly one echelon basis and
//! two runs on the same input produce identical output.

use crate::field::Field;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn from_rows(cols: usize, rows: Vec<Vec<E>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix row");
            data.extend(r);
        }
        Matrix {
            rows: n,
            cols,
            data,
        }
    }

    pub fn filled(rows: usize, cols: usize, value: E) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &E {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: E) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[E] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<E> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn data(&self) -> &[E] {
        &self.data
    }
}

impl<E: Clone> Matrix<E> {
    pub fn zeros<F: Field<Elem = E>>(f: &F, rows: usize, cols: usize) -> Self {
        Matrix::filled(rows, cols, f.zero())
    }

    pub fn identity<F: Field<Elem = E>>(f: &F, n: usize) -> Self {
        let mut m = Matrix::zeros(f, n, n);
        for i in 0..n {
            m.set(i, i, f.one());
        }
        m
    }

    pub fn from_columns<F: Field<Elem = E>>(f: &F, rows: usize, cols: Vec<Vec<E>>) -> Self {
        let mut m = Matrix::zeros(f, rows, cols.len());
        for (c, col) in cols.into_iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (r, v) in col.into_iter().enumerate() {
                m.set(r, c, v);
            }
        }
        m
    }

    pub fn mul<F: Field<Elem = E>>(&self, f: &F, other: &Matrix<E>) -> Matrix<E> {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if f.is_zero(a) {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !f.is_zero(b) {
                        let idx = r * out.cols + c;
                        f.add_mul_assign(&mut out.data[idx], a, b);
                    }
                }
            }
        }
        out
    }

    pub fn apply<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> Vec<E> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|r| dot(f, self.row(r), v)).collect()
    }

    pub fn add<F: Field<Elem = E>>(&self, f: &F, other: &Matrix<E>) -> Matrix<E> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| f.add(a, b))
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale<F: Field<Elem = E>>(&self, f: &F, s: &E) -> Matrix<E> {
        let data = self.data.iter().map(|a| f.mul(a, s)).collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn is_zero<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.data.iter().all(|a| f.is_zero(a))
    }

    pub fn rank<F: Field<Elem = E>>(&self, f: &F) -> usize {
        let mut m = self.clone();
        m.rref(f).len()
    }

    /// Reduce in place to reduced row echelon form; returns pivot columns.
    pub fn rref<F: Field<Elem = E>>(&mut self, f: &F) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !f.is_zero(self.get(r, col))) else {
                continue;
            };
            self.swap_rows(p, row);
            let inv = f.inv(self.get(row, col)).expect("nonzero pivot");
            for c in col..self.cols {
                let idx = row * self.cols + c;
                self.data[idx] = f.mul(&self.data[idx], &inv);
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let factor = self.get(r, col).clone();
                if f.is_zero(&factor) {
                    continue;
                }
                for c in col..self.cols {
                    let pv = self.data[row * self.cols + c].clone();
                    if !f.is_zero(&pv) {
                        let idx = r * self.cols + c;
                        self.data[idx] = f.sub(&self.data[idx], &f.mul(&factor, &pv));
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Basis of the null space `{x : A x = 0}`, one vector per free column,
    /// in increasing order of the free column.
    pub fn kernel<F: Field<Elem = E>>(&self, f: &F) -> Vec<Vec<E>> {
        let mut m = self.clone();
        let pivots = m.rref(f);
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![f.zero(); self.cols];
            v[free] = f.one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = f.neg(m.get(r, free));
            }
            basis.push(v);
        }
        basis
    }

    /// Some `x` with `A x = b`, free variables set to zero.
    pub fn solve<F: Field<Elem = E>>(&self, f: &F, b: &[E]) -> Option<Vec<E>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(f, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, b[r].clone());
        }
        let pivots = aug.rref(f);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![f.zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = aug.get(r, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse<F: Field<Elem = E>>(&self, f: &F) -> Option<Matrix<E>> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(f, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, f.one());
        }
        let pivots = aug.rref(f);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(f, n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, aug.get(r, n + c).clone());
            }
        }
        Some(inv)
    }

    pub fn is_invertible<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.rows == self.cols && self.rank(f) == self.rows
    }
}

pub fn dot<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> F::Elem {
    let mut acc = f.zero();
    for (x, y) in a.iter().zip(b) {
        if !f.is_zero(x) && !f.is_zero(y) {
            f.add_mul_assign(&mut acc, x, y);
        }
    }
    acc
}

pub fn is_zero_vec<F: Field>(f: &F, v: &[F::Elem]) -> bool {
    v.iter().all(|a| f.is_zero(a))
}

/// `a += s * b`
pub fn axpy<F: Field>(f: &F, a: &mut [F::Elem], s: &F::Elem, b: &[F::Elem]) {
    if f.is_zero(s) {
        return;
    }
    for (x, y) in a.iter_mut().zip(b) {
        if !f.is_zero(y) {
            f.add_mul_assign(x, s, y);
        }
    }
}

pub fn scaled<F: Field>(f: &F, s: &F::Elem, v: &[F::Elem]) -> Vec<F::Elem> {
    v.iter().map(|x| f.mul(s, x)).collect()
}

pub fn add_vec<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    a.iter().zip(b).map(|(x, y)| f.add(x, y)).collect()
}

pub fn sub_vec<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    a.iter().zip(b).map(|(x, y)| f.sub(x, y)).collect()
}

/// A subspace of `F^n` kept as a fully reduced echelon basis, sorted by pivot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace<E> {
    ambient: usize,
    rows: Vec<Vec<E>>,
    pivots: Vec<usize>,
}

impl<E: Clone + PartialEq> Subspace<E> {
    pub fn new(ambient: usize) -> Self {
        Subspace {
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn spanned_by<F: Field<Elem = E>>(
        f: &F,
        ambient: usize,
        vectors: impl IntoIterator<Item = Vec<E>>,
    ) -> Self {
        let mut s = Subspace::new(ambient);
        for v in vectors {
            s.insert(f, v);
        }
        s
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<E>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduce `v` against the basis; zero iff `v` lies in the subspace.
    pub fn reduce<F: Field<Elem = E>>(&self, f: &F, v: &mut [E]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !f.is_zero(&v[p]) {
                let s = f.neg(&v[p]);
                axpy(f, v, &s, row);
            }
        }
    }

    pub fn reduced<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> Vec<E> {
        let mut w = v.to_vec();
        self.reduce(f, &mut w);
        w
    }

    pub fn contains<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> bool {
        is_zero_vec(f, &self.reduced(f, v))
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the span.
    pub fn coordinates<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> Option<Vec<E>> {
        if !self.contains(f, v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    /// Adds `v`; returns true if the dimension grew.
    pub fn insert<F: Field<Elem = E>>(&mut self, f: &F, mut v: Vec<E>) -> bool {
        assert_eq!(v.len(), self.ambient);
        self.reduce(f, &mut v);
        let Some(p) = v.iter().position(|a| !f.is_zero(a)) else {
            return false;
        };
        let inv = f.inv(&v[p]).expect("nonzero");
        for a in v.iter_mut() {
            *a = f.mul(a, &inv);
        }
        for row in self.rows.iter_mut() {
            if !f.is_zero(&row[p]) {
                let s = f.neg(&row[p]);
                axpy(f, row, &s, &v);
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, v);
        true
    }

    /// Canonical basis of a complement of `self` inside `outer`: the echelon
    /// basis of `outer` reduced modulo `self` (vectors vanish on `self`'s pivots).
    pub fn complement_in<F: Field<Elem = E>>(&self, f: &F, outer: &Subspace<E>) -> Vec<Vec<E>> {
        let mut comp = Subspace::new(self.ambient);
        for v in outer.basis() {
            let w = self.reduced(f, v);
            comp.insert(f, w);
        }
        comp.rows
    }

    pub fn sum<F: Field<Elem = E>>(&self, f: &F, other: &Subspace<E>) -> Subspace<E> {
        let mut s = self.clone();
        for v in other.basis() {
            s.insert(f, v.clone());
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use proptest::prelude::*;

    fn f7() -> Fp {
        Fp::new(7).unwrap()
    }

    #[test]
    fn kernel_of_rank_one() {
        let f = f7();
        let m = Matrix::from_rows(3, vec![vec![1, 2, 3], vec![2, 4, 6]]);
        let k = m.kernel(&f);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(is_zero_vec(&f, &m.apply(&f, v)));
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let f = f7();
        let m = Matrix::from_rows(2, vec![vec![1, 2], vec![3, 4]]);
        let inv = m.inverse(&f).unwrap();
        assert_eq!(m.mul(&f, &inv), Matrix::identity(&f, 2));
        let sing = Matrix::from_rows(2, vec![vec![1, 2], vec![2, 4]]);
        assert!(sing.inverse(&f).is_none());
    }

    #[test]
    fn solve_inconsistent() {
        let f = f7();
        let m = Matrix::from_rows(2, vec![vec![1, 1], vec![1, 1]]);
        assert!(m.solve(&f, &[1, 2]).is_none());
        let x = m.solve(&f, &[3, 3]).unwrap();
        assert_eq!(m.apply(&f, &x), vec![3, 3]);
    }

    #[test]
    fn complement_avoids_pivots() {
        let f = f7();
        let inner = Subspace::spanned_by(&f, 3, vec![vec![1, 1, 0]]);
        let outer = Subspace::spanned_by(&f, 3, vec![vec![1, 0, 0], vec![0, 1, 0]]);
        let comp = inner.complement_in(&f, &outer);
        assert_eq!(comp, vec![vec![0, 1, 0]]);
    }

    proptest! {
        #[test]
        fn rank_nullity(rows in proptest::collection::vec(proptest::collection::vec(0u64..7, 5), 0..6)) {
            let f = f7();
            let m = Matrix::from_rows(5, rows);
            prop_assert_eq!(m.rank(&f) + m.kernel(&f).len(), 5);
        }

        #[test]
        fn subspace_is_order_independent(vs in proptest::collection::vec(proptest::collection::vec(0u64..7, 4), 0..6)) {
            let f = f7();
            let a = Subspace::spanned_by(&f, 4, vs.clone());
            let b = Subspace::spanned_by(&f, 4, vs.into_iter().rev());
            prop_assert_eq!(a, b);
        }
    }
}
