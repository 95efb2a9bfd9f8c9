//! Exact integer linear algebra: dense matrices, lattices in Hermite normal
//! form, integer kernels, integer solvability, and Smith normal form.
//!
//! Everything works over arbitrary-precision integers. Vectors are plain
//! `Vec<Int>`; a matrix is row-major.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Int = BigInt;

#[inline]
pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn zero_vec(n: usize) -> Vec<Int> {
    vec![Int::zero(); n]
}

pub fn unit_vec(n: usize, i: usize) -> Vec<Int> {
    let mut v = zero_vec(n);
    v[i] = Int::one();
    v
}

pub fn is_zero_vec(v: &[Int]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// `dst += c * src`
pub fn axpy(dst: &mut [Int], c: &Int, src: &[Int]) {
    if c.is_zero() {
        return;
    }
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d += c * s;
        }
    }
}

/// Floor division, so that `a - floor_div(a, b) * b` lies in `[0, |b|)` for `b > 0`.
pub fn floor_div(a: &Int, b: &Int) -> Int {
    a.div_floor(b)
}

/// Extended gcd with `g = s*a + t*b`, `g >= 0`.
pub fn xgcd(a: &Int, b: &Int) -> (Int, Int, Int) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Int::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Int::one();
        }
        m
    }

    pub fn from_rows(rows: usize, cols: usize, entries: Vec<Vec<Int>>) -> Self {
        assert_eq!(entries.len(), rows, "row count mismatch");
        let mut data = Vec::with_capacity(rows * cols);
        for r in entries {
            assert_eq!(r.len(), cols, "column count mismatch");
            data.extend(r);
        }
        Matrix { rows, cols, data }
    }

    /// Builds an `rows x cols` matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<Int>]) -> Self {
        let mut m = Matrix::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        Matrix { rows, cols, data: entries.iter().map(|&x| int(x)).collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Int] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Int> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Int>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                axpy(dst, a, orow);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = Int::zero();
                for (a, x) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc += a * x;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add_scaled(&mut self, c: &Int, other: &Matrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        axpy(&mut self.data, c, &other.data);
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        let mut out = self.clone();
        out.add_scaled(&int(-1), other);
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += c * row[src]`
    fn add_row(&mut self, dst: usize, src: usize, c: &Int) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = self.data[src * self.cols + j].clone();
            if !s.is_zero() {
                self.data[dst * self.cols + j] += c * s;
            }
        }
    }

    /// `col[dst] += c * col[src]`
    fn add_col(&mut self, dst: usize, src: usize, c: &Int) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = self.data[i * self.cols + src].clone();
            if !s.is_zero() {
                self.data[i * self.cols + dst] += c * s;
            }
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let x = std::mem::take(&mut self.data[r * self.cols + j]);
            self.data[r * self.cols + j] = -x;
        }
    }

    fn negate_col(&mut self, c: usize) {
        for i in 0..self.rows {
            let x = std::mem::take(&mut self.data[i * self.cols + c]);
            self.data[i * self.cols + c] = -x;
        }
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Int;
    fn index(&self, (i, j): (usize, usize)) -> &Int {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Int {
        &mut self.data[i * self.cols + j]
    }
}

/// A sublattice of `Z^dim`, kept as an echelon basis indexed by pivot
/// (first nonzero) position. After [`Lattice::hermite`] the basis is the
/// unique Hermite normal form: positive pivots, and every entry sitting in
/// another vector's pivot column reduced into `[0, pivot)`.
#[derive(Clone, Debug)]
pub struct Lattice {
    dim: usize,
    slots: Vec<Option<Vec<Int>>>,
}

impl Lattice {
    pub fn new(dim: usize) -> Self {
        Lattice { dim, slots: vec![None; dim] }
    }

    pub fn from_generators<I: IntoIterator<Item = Vec<Int>>>(dim: usize, gens: I) -> Self {
        let mut l = Lattice::new(dim);
        for g in gens {
            l.insert(g);
        }
        l.hermite();
        l
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.slots.iter().filter(|s| s.is_some()).count()
    }

    pub fn insert(&mut self, mut v: Vec<Int>) {
        assert_eq!(v.len(), self.dim, "lattice dimension mismatch");
        loop {
            let Some(p) = v.iter().position(|x| !x.is_zero()) else {
                return;
            };
            match &mut self.slots[p] {
                None => {
                    if v[p].is_negative() {
                        v.iter_mut().for_each(|x| *x = -std::mem::take(x));
                    }
                    self.slots[p] = Some(v);
                    self.reduce_tail(p);
                    return;
                }
                Some(h) => {
                    let (hp, vp) = (h[p].clone(), v[p].clone());
                    let (q, r) = vp.div_rem(&hp);
                    if r.is_zero() {
                        axpy(&mut v, &-q, h);
                    } else {
                        let (g, s, t) = xgcd(&hp, &vp);
                        let mut new_h: Vec<Int> = h.iter().map(|x| &s * x).collect();
                        axpy(&mut new_h, &t, &v);
                        let a = &vp / &g;
                        let b = &hp / &g;
                        let mut other: Vec<Int> = h.iter().map(|x| &a * x).collect();
                        axpy(&mut other, &-b, &v);
                        *h = new_h;
                        v = other;
                        self.reduce_tail(p);
                    }
                }
            }
        }
    }

    /// Reduces the entries of slot `p` in later pivot columns, which keeps
    /// coefficients from compounding across insertions.
    fn reduce_tail(&mut self, p: usize) {
        let mut h = self.slots[p].take().expect("pivot");
        for q in p + 1..self.dim {
            if let Some(hq) = &self.slots[q] {
                let c = floor_div(&h[q], &hq[q]);
                if !c.is_zero() {
                    axpy(&mut h, &-c, hq);
                }
            }
        }
        self.slots[p] = Some(h);
    }

    /// Brings the basis into Hermite normal form.
    pub fn hermite(&mut self) {
        let pivots: Vec<usize> = self.pivots();
        for (n, &i) in pivots.iter().enumerate() {
            let hi = self.slots[i].clone().expect("pivot");
            for &j in &pivots[..n] {
                let hj = self.slots[j].as_mut().expect("pivot");
                let q = floor_div(&hj[i], &hi[i]);
                if !q.is_zero() {
                    axpy(hj, &-q, &hi);
                }
            }
        }
    }

    pub fn pivots(&self) -> Vec<usize> {
        (0..self.dim).filter(|&i| self.slots[i].is_some()).collect()
    }

    /// Basis vectors in increasing pivot order.
    pub fn basis(&self) -> Vec<Vec<Int>> {
        self.slots.iter().flatten().cloned().collect()
    }

    pub fn basis_refs(&self) -> impl Iterator<Item = (usize, &Vec<Int>)> {
        self.slots.iter().enumerate().filter_map(|(i, s)| s.as_ref().map(|v| (i, v)))
    }

    /// Reduces `v` to its canonical representative modulo the lattice.
    pub fn reduce(&self, v: &mut [Int]) {
        for (p, h) in self.basis_refs() {
            if v[p].is_zero() {
                continue;
            }
            let q = floor_div(&v[p], &h[p]);
            if !q.is_zero() {
                axpy(v, &-q, h);
            }
        }
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        is_zero_vec(&w)
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[Int]) -> Option<Vec<Int>> {
        let mut w = v.to_vec();
        let mut coords = Vec::with_capacity(self.rank());
        for (p, h) in self.basis_refs() {
            let (q, r) = w[p].div_rem(&h[p]);
            if !r.is_zero() {
                return None;
            }
            if !q.is_zero() {
                axpy(&mut w, &-q.clone(), h);
            }
            coords.push(q);
        }
        is_zero_vec(&w).then_some(coords)
    }
}

/// Integer basis (Hermite normal form) of `{x : A x = 0}`.
pub fn kernel(a: &Matrix) -> Vec<Vec<Int>> {
    let (m, n) = (a.rows(), a.cols());
    let mut lat = Lattice::new(m + n);
    for j in 0..n {
        let mut v = a.column(j);
        v.extend(unit_vec(n, j));
        lat.insert(v);
    }
    lat.hermite();
    lat.basis_refs()
        .filter(|(p, _)| *p >= m)
        .map(|(_, v)| v[m..].to_vec())
        .collect()
}

/// The lattice `{x : A x ∈ span(sub)}` in `Z^cols`, in Hermite normal form.
pub fn preimage(a: &Matrix, sub: &[Vec<Int>]) -> Lattice {
    let (m, n) = (a.rows(), a.cols());
    let mut lat = Lattice::new(m + n);
    for s in sub {
        assert_eq!(s.len(), m, "sublattice dimension mismatch");
        let mut v = s.clone();
        v.extend(zero_vec(n));
        lat.insert(v);
    }
    for j in 0..n {
        let mut v = a.column(j);
        v.extend(unit_vec(n, j));
        lat.insert(v);
    }
    let gens: Vec<Vec<Int>> = lat.basis_refs().filter(|(p, _)| *p >= m).map(|(_, v)| v[m..].to_vec()).collect();
    Lattice::from_generators(n, gens)
}

/// An integer solution of `A x = b`, if one exists.
pub fn solve(a: &Matrix, b: &[Int]) -> Option<Vec<Int>> {
    let (m, n) = (a.rows(), a.cols());
    assert_eq!(b.len(), m, "right-hand side length mismatch");
    let mut lat = Lattice::new(m + 1 + n);
    let mut v: Vec<Int> = b.iter().map(|x| -x).collect();
    v.extend(unit_vec(n + 1, 0));
    lat.insert(v);
    for j in 0..n {
        let mut v = a.column(j);
        v.extend(unit_vec(n + 1, j + 1));
        lat.insert(v);
    }
    let h = lat.slots[m].as_ref()?;
    if !h[m].is_one() {
        return None;
    }
    Some(h[m + 1..].to_vec())
}

/// Smith normal form `U A V = D` with unimodular `U`, `V`.
#[derive(Clone, Debug)]
pub struct Smith {
    /// Diagonal of `D` (length `min(rows, cols)`); nonnegative, each entry
    /// dividing the next, zeros last.
    pub diagonal: Vec<Int>,
    pub left: Matrix,
    pub left_inverse: Matrix,
    pub right: Matrix,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }
}

pub fn smith(a: &Matrix) -> Smith {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = Matrix::identity(m);
    let mut uinv = Matrix::identity(m);
    let mut v = Matrix::identity(n);

    // Row op `row[i] += c row[j]` on D and U; the inverse acts on columns of U^{-1}.
    let row_add = |d: &mut Matrix, u: &mut Matrix, uinv: &mut Matrix, i: usize, j: usize, c: &Int| {
        d.add_row(i, j, c);
        u.add_row(i, j, c);
        uinv.add_col(j, i, &-c);
    };
    let row_swap = |d: &mut Matrix, u: &mut Matrix, uinv: &mut Matrix, i: usize, j: usize| {
        d.swap_rows(i, j);
        u.swap_rows(i, j);
        uinv.swap_cols(i, j);
    };

    let steps = m.min(n);
    let mut t = 0;
    while t < steps {
        // pick the nonzero entry of least absolute value in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let x = &d[(i, j)];
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| x.abs() < d[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        row_swap(&mut d, &mut u, &mut uinv, t, bi);
        d.swap_cols(t, bj);
        v.swap_cols(t, bj);

        let mut clean = true;
        for i in t + 1..m {
            if d[(i, t)].is_zero() {
                continue;
            }
            let q = floor_div(&d[(i, t)], &d[(t, t)]);
            row_add(&mut d, &mut u, &mut uinv, i, t, &-q);
            if !d[(i, t)].is_zero() {
                clean = false;
            }
        }
        for j in t + 1..n {
            if d[(t, j)].is_zero() {
                continue;
            }
            let q = floor_div(&d[(t, j)], &d[(t, t)]);
            d.add_col(j, t, &-q.clone());
            v.add_col(j, t, &-q);
            if !d[(t, j)].is_zero() {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        // divisibility: pull in a row whose entries the pivot does not divide
        let pivot = d[(t, t)].clone();
        let mut offender = None;
        'scan: for i in t + 1..m {
            for j in t + 1..n {
                if !d[(i, j)].is_multiple_of(&pivot) {
                    offender = Some(i);
                    break 'scan;
                }
            }
        }
        if let Some(i) = offender {
            row_add(&mut d, &mut u, &mut uinv, t, i, &Int::one());
            continue;
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
            uinv.negate_col(t);
        }
        t += 1;
    }
    let diagonal = (0..steps).map(|i| d[(i, i)].clone()).collect();
    Smith { diagonal, left: u, left_inverse: uinv, right: v }
}

/// The group `Z^rank / span(sub)` in invariant-factor form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientGroup {
    /// Invariant factors other than 1, in divisibility order; `0` stands for
    /// a free summand `Z`.
    pub invariants: Vec<Int>,
    /// One generator (in the ambient coordinates) per invariant factor.
    pub generators: Vec<Vec<Int>>,
}

pub fn quotient(rank: usize, sub: &[Vec<Int>]) -> QuotientGroup {
    let s = Matrix::from_columns(rank, sub);
    let sm = smith(&s);
    let mut invariants = Vec::new();
    let mut generators = Vec::new();
    for i in 0..rank {
        let d = sm.diagonal.get(i).cloned().unwrap_or_else(Int::zero);
        if d.is_one() {
            continue;
        }
        invariants.push(d);
        generators.push(sm.left_inverse.column(i));
    }
    QuotientGroup { invariants, generators }
}

/// Renders invariant factors as `Z/2 + Z/4 + Z`, or `0` for the trivial group.
pub fn format_invariants(inv: &[Int]) -> String {
    if inv.is_empty() {
        return "0".to_string();
    }
    inv.iter()
        .map(|d| if d.is_zero() { "Z".to_string() } else { format!("Z/{d}") })
        .collect::<Vec<_>>()
        .join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<Int> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn hermite_basis_is_canonical() {
        let a = Lattice::from_generators(3, vec![v(&[2, 1, 0]), v(&[4, 0, 1]), v(&[0, 3, 3])]);
        let b = Lattice::from_generators(3, vec![v(&[0, 3, 3]), v(&[4, 0, 1]), v(&[2, 1, 0]), v(&[6, 1, 1])]);
        assert_eq!(a.basis(), b.basis());
        assert!(a.contains(&v(&[6, 1, 1])));
        assert!(!a.contains(&v(&[1, 0, 0])));
    }

    #[test]
    fn kernel_of_rank_one_map() {
        let a = Matrix::from_i64(1, 3, &[2, 4, 6]);
        let k = kernel(&a);
        assert_eq!(k.len(), 2);
        for x in &k {
            assert!(is_zero_vec(&a.mul_vec(x)));
        }
        // the kernel lattice is saturated: (1, 1, -1) lies in it
        let lat = Lattice::from_generators(3, k);
        assert!(lat.contains(&v(&[1, 1, -1])));
        assert!(lat.contains(&v(&[-2, 1, 0])));
    }

    #[test]
    fn solve_detects_divisibility() {
        let a = Matrix::from_i64(2, 2, &[2, 0, 0, 3]);
        assert_eq!(solve(&a, &v(&[4, 9])), Some(v(&[2, 3])));
        assert_eq!(solve(&a, &v(&[1, 0])), None);
        assert_eq!(solve(&Matrix::zeros(2, 0), &v(&[0, 0])), Some(vec![]));
    }

    #[test]
    fn smith_of_classical_example() {
        let a = Matrix::from_i64(3, 3, &[2, 4, 4, -6, 6, 12, 10, -4, -16]);
        let s = smith(&a);
        assert_eq!(s.diagonal, v(&[2, 6, 12]));
        let d = s.left.mul(&a).mul(&s.right);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { s.diagonal[i].clone() } else { int(0) };
                assert_eq!(d[(i, j)], want);
            }
        }
        assert_eq!(s.left.mul(&s.left_inverse), Matrix::identity(3));
    }

    #[test]
    fn quotient_of_z2_by_diagonal() {
        let q = quotient(2, &[v(&[2, 0]), v(&[0, 3])]);
        assert_eq!(q.invariants, v(&[6]));
        let q = quotient(3, &[v(&[2, 0, 0])]);
        assert_eq!(q.invariants, v(&[2, 0, 0]));
        assert_eq!(format_invariants(&q.invariants), "Z/2 + Z + Z");
        assert_eq!(format_invariants(&[]), "0");
    }
}
