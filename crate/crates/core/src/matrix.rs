//! Small dense matrices: a fixed 2×2 type and a heap-backed rectangular
//! type used for the 4×4 block forms and the length systems of the
//! enumerator.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_traits::Zero;

use crate::scalar::{Field, OrderedField, Ring};

/// Column vector of length two.
pub type Vec2<T> = [T; 2];

/// A 2×2 matrix stored row-major, `m.0[i][j]` is row `i`, column `j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2<T>(pub [[T; 2]; 2]);

impl<T> Mat2<T> {
    pub const fn new(rows: [[T; 2]; 2]) -> Self {
        Mat2(rows)
    }

    pub fn map<U>(&self, mut f: impl FnMut(&T) -> U) -> Mat2<U> {
        let [[a, b], [c, d]] = &self.0;
        Mat2([[f(a), f(b)], [f(c), f(d)]])
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.0.iter().flat_map(|r| r.iter())
    }

    pub fn column(&self, j: usize) -> Vec2<T>
    where
        T: Clone,
    {
        [self.0[0][j].clone(), self.0[1][j].clone()]
    }
}

impl<T> Index<(usize, usize)> for Mat2<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.0[i][j]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat2<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.0[i][j]
    }
}

impl<T: Ring> Mat2<T> {
    pub fn zero() -> Self {
        Mat2([[T::zero(), T::zero()], [T::zero(), T::zero()]])
    }

    pub fn identity() -> Self {
        Mat2([[T::one(), T::zero()], [T::zero(), T::one()]])
    }

    pub fn diag(a: T, d: T) -> Self {
        Mat2([[a, T::zero()], [T::zero(), d]])
    }

    /// The skew matrix `(0 t; −t 0)`.
    pub fn skew(t: T) -> Self {
        Mat2([[T::zero(), t.clone()], [-t, T::zero()]])
    }

    pub fn det(&self) -> T {
        let [[a, b], [c, d]] = &self.0;
        a.clone() * d.clone() - b.clone() * c.clone()
    }

    pub fn trace(&self) -> T {
        self.0[0][0].clone() + self.0[1][1].clone()
    }

    pub fn transpose(&self) -> Self {
        let [[a, b], [c, d]] = self.0.clone();
        Mat2([[a, c], [b, d]])
    }

    /// `(det m)(m⁻¹)ᵀ`, computed without division. For `(a b; c d)` this is
    /// `(d −c; −b a)`.
    pub fn adjugate_transpose(&self) -> Self {
        let [[a, b], [c, d]] = self.0.clone();
        Mat2([[d, -c], [-b, a]])
    }

    pub fn scale(&self, k: &T) -> Self {
        self.map(|x| x.clone() * k.clone())
    }

    pub fn apply(&self, v: &Vec2<T>) -> Vec2<T> {
        let m = &self.0;
        [
            m[0][0].clone() * v[0].clone() + m[0][1].clone() * v[1].clone(),
            m[1][0].clone() * v[0].clone() + m[1][1].clone() * v[1].clone(),
        ]
    }

    pub fn is_symmetric(&self) -> bool {
        self.0[0][1] == self.0[1][0]
    }

    pub fn is_zero(&self) -> bool {
        self.entries().all(|x| x.is_zero())
    }

    /// Outer product `u vᵀ`.
    pub fn outer(u: &Vec2<T>, v: &Vec2<T>) -> Self {
        Mat2([
            [u[0].clone() * v[0].clone(), u[0].clone() * v[1].clone()],
            [u[1].clone() * v[0].clone(), u[1].clone() * v[1].clone()],
        ])
    }
}

impl<T: Field> Mat2<T> {
    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det.is_zero() {
            return None;
        }
        let [[a, b], [c, d]] = self.0.clone();
        Some(Mat2([[d / det.clone(), -b / det.clone()], [-c / det.clone(), a / det]]))
    }
}

impl<T: OrderedField> Mat2<T> {
    /// Sylvester's criterion on a matrix already known to be symmetric.
    pub fn sylvester_positive(&self) -> bool {
        self.0[0][0] > T::zero() && self.det() > T::zero()
    }
}

impl<T: Ring> Add for &Mat2<T> {
    type Output = Mat2<T>;
    fn add(self, rhs: Self) -> Mat2<T> {
        let (a, b) = (&self.0, &rhs.0);
        Mat2([
            [a[0][0].clone() + b[0][0].clone(), a[0][1].clone() + b[0][1].clone()],
            [a[1][0].clone() + b[1][0].clone(), a[1][1].clone() + b[1][1].clone()],
        ])
    }
}

impl<T: Ring> Sub for &Mat2<T> {
    type Output = Mat2<T>;
    fn sub(self, rhs: Self) -> Mat2<T> {
        let (a, b) = (&self.0, &rhs.0);
        Mat2([
            [a[0][0].clone() - b[0][0].clone(), a[0][1].clone() - b[0][1].clone()],
            [a[1][0].clone() - b[1][0].clone(), a[1][1].clone() - b[1][1].clone()],
        ])
    }
}

impl<T: Ring> Mul for &Mat2<T> {
    type Output = Mat2<T>;
    fn mul(self, rhs: Self) -> Mat2<T> {
        let (a, b) = (&self.0, &rhs.0);
        let e = |i: usize, j: usize| a[i][0].clone() * b[0][j].clone() + a[i][1].clone() * b[1][j].clone();
        Mat2([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }
}

/// Heap-backed rectangular matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T> Matrix<T> {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>>
    where
        T: Clone,
    {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Block `[r0, r0+h) × [c0, c0+w)` as a 2×2 matrix; `h = w = 2`.
    pub fn block2(&self, r0: usize, c0: usize) -> Mat2<T>
    where
        T: Clone,
    {
        Mat2([
            [self[(r0, c0)].clone(), self[(r0, c0 + 1)].clone()],
            [self[(r0 + 1, c0)].clone(), self[(r0 + 1, c0 + 1)].clone()],
        ])
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Ring> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    /// Assemble `(a b; c d)` from four 2×2 blocks.
    pub fn from_blocks(a: &Mat2<T>, b: &Mat2<T>, c: &Mat2<T>, d: &Mat2<T>) -> Self {
        Matrix::from_fn(4, 4, |i, j| {
            let blk = match (i < 2, j < 2) {
                (true, true) => a,
                (true, false) => b,
                (false, true) => c,
                (false, false) => d,
            };
            blk.0[i % 2][j % 2].clone()
        })
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, k: &T) -> Self {
        self.map(|x| x.clone() * k.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_skew(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| (0..self.cols).all(|j| self[(i, j)] == -self[(j, i)].clone()))
    }

    /// Cofactor expansion along the first row. Division-free, so it is
    /// exact over the integers; only meant for n ≤ 5 or so.
    pub fn det_laplace(&self) -> T {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let cols: Vec<usize> = (0..self.cols).collect();
        laplace(self, 0, &cols)
    }
}

fn laplace<T: Ring>(m: &Matrix<T>, row: usize, cols: &[usize]) -> T {
    if cols.is_empty() {
        return T::one();
    }
    let mut acc = T::zero();
    for (k, &c) in cols.iter().enumerate() {
        let entry = &m[(row, c)];
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = entry.clone() * laplace(m, row + 1, &rest);
        acc = if k % 2 == 0 { acc + term } else { acc - term };
    }
    acc
}

impl<T: Ring> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: Self) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in matrix product");
        Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).fold(T::zero(), |acc, k| acc + self[(i, k)].clone() * rhs[(k, j)].clone())
        })
    }
}

impl<T: Ring> Add for &Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, rhs: Self) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].clone() + rhs[(i, j)].clone())
    }
}

impl<T: Ring> Sub for &Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, rhs: Self) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].clone() - rhs[(i, j)].clone())
    }
}

impl<T: Field> Matrix<T> {
    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let elim = Elimination::new(self);
        (elim.rank() == self.cols).then(|| elim.transform.clone())
    }

    pub fn determinant(&self) -> T {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut a = self.clone();
        let n = self.rows;
        let mut det = T::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a[(r, col)].is_zero()) else {
                return T::zero();
            };
            if p != col {
                a.swap_rows(p, col);
                det = -det;
            }
            let pivot = a[(col, col)].clone();
            det = det * pivot.clone();
            for r in col + 1..n {
                if a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].clone() / pivot.clone();
                for c in col..n {
                    let v = a[(r, c)].clone() - f.clone() * a[(col, c)].clone();
                    a[(r, c)] = v;
                }
            }
        }
        det
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

/// Outcome of solving `A x = b` exactly.
#[derive(Clone, Debug, PartialEq)]
pub enum Solution<T> {
    Unique(Vec<T>),
    Inconsistent,
    /// Consistent with a solution space of dimension `nullity > 0`;
    /// `particular` has every free variable set to zero.
    Underdetermined {
        particular: Vec<T>,
        nullity: usize,
    },
}

/// Reduced row echelon form of a fixed coefficient matrix together with the
/// row operations that produced it, so many right-hand sides can be solved
/// against one factorization.
#[derive(Clone, Debug)]
pub struct Elimination<T> {
    reduced: Matrix<T>,
    transform: Matrix<T>,
    pivots: Vec<usize>,
}

impl<T: Field> Elimination<T> {
    pub fn new(a: &Matrix<T>) -> Self {
        let (rows, cols) = (a.rows, a.cols);
        let mut r = a.clone();
        let mut e: Matrix<T> = Matrix::identity(rows);
        let mut pivots = Vec::new();
        let mut prow = 0;
        for col in 0..cols {
            if prow == rows {
                break;
            }
            let Some(p) = (prow..rows).find(|&i| !r[(i, col)].is_zero()) else {
                continue;
            };
            r.swap_rows(p, prow);
            e.swap_rows(p, prow);
            let inv = T::one() / r[(prow, col)].clone();
            for j in 0..cols {
                r[(prow, j)] = r[(prow, j)].clone() * inv.clone();
            }
            for j in 0..rows {
                e[(prow, j)] = e[(prow, j)].clone() * inv.clone();
            }
            for i in 0..rows {
                if i == prow || r[(i, col)].is_zero() {
                    continue;
                }
                let f = r[(i, col)].clone();
                for j in 0..cols {
                    let v = r[(i, j)].clone() - f.clone() * r[(prow, j)].clone();
                    r[(i, j)] = v;
                }
                for j in 0..rows {
                    let v = e[(i, j)].clone() - f.clone() * e[(prow, j)].clone();
                    e[(i, j)] = v;
                }
            }
            pivots.push(col);
            prow += 1;
        }
        Elimination {
            reduced: r,
            transform: e,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn reduced(&self) -> &Matrix<T> {
        &self.reduced
    }

    /// Row operations taking `A` to its reduced form.
    pub fn transform(&self) -> &Matrix<T> {
        &self.transform
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// A basis of `ker A`, one vector per free column.
    pub fn null_space(&self) -> Vec<Vec<T>> {
        let cols = self.reduced.cols;
        (0..cols)
            .filter(|c| !self.pivots.contains(c))
            .map(|f| {
                let mut v = vec![T::zero(); cols];
                v[f] = T::one();
                for (i, &p) in self.pivots.iter().enumerate() {
                    v[p] = T::zero() - self.reduced[(i, f)].clone();
                }
                v
            })
            .collect()
    }

    pub fn solve(&self, b: &[T]) -> Solution<T> {
        let rows = self.transform.rows;
        assert_eq!(b.len(), rows, "right-hand side has the wrong length");
        let c: Vec<T> = (0..rows)
            .map(|i| (0..rows).fold(T::zero(), |acc, k| acc + self.transform[(i, k)].clone() * b[k].clone()))
            .collect();
        let rank = self.rank();
        if c[rank..].iter().any(|x| !x.is_zero()) {
            return Solution::Inconsistent;
        }
        let cols = self.reduced.cols;
        let mut x = vec![T::zero(); cols];
        for (i, &p) in self.pivots.iter().enumerate() {
            x[p] = c[i].clone();
        }
        if rank == cols {
            Solution::Unique(x)
        } else {
            Solution::Underdetermined {
                particular: x,
                nullity: cols - rank,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, Rat};

    #[test]
    fn mat2_basics() {
        let m = Mat2::new([[2i64, 1], [0, 1]]);
        assert_eq!(m.det(), 2);
        assert_eq!(m.transpose(), Mat2::new([[2, 0], [1, 1]]));
        assert_eq!(&m * &Mat2::identity(), m);
        assert_eq!(m.adjugate_transpose(), Mat2::new([[1, 0], [-1, 2]]));
    }

    #[test]
    fn mat2_over_small_rationals() {
        use num_rational::Rational64 as Q;
        let m = Mat2::new([[4, 1], [1, 3]]).map(|&x| Q::from_integer(x));
        assert!(m.sylvester_positive());
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, Mat2::identity());
        assert_eq!(inv.0[0][1], Q::new(-1, 11));
    }

    #[test]
    fn inverse_and_determinant_agree_with_laplace() {
        let m = Matrix::from_rows(vec![
            vec![0i64, 0, 1, 0],
            vec![0, 0, -1, 2],
            vec![-1, 1, 0, 5],
            vec![0, -2, -5, 0],
        ]);
        let r = m.map(|&x| rat(x));
        assert_eq!(r.determinant(), rat(m.det_laplace()));
        let inv = r.inverse().unwrap();
        assert_eq!(&r * &inv, Matrix::<Rat>::identity(4));
    }

    #[test]
    fn solve_reports_rank_deficiency() {
        let a = Matrix::from_rows(vec![vec![rat(1), rat(1)], vec![rat(2), rat(2)]]);
        let e = Elimination::new(&a);
        assert_eq!(e.rank(), 1);
        assert_eq!(e.solve(&[rat(1), rat(3)]), Solution::Inconsistent);
        assert!(matches!(
            e.solve(&[rat(1), rat(2)]),
            Solution::Underdetermined { nullity: 1, .. }
        ));
        let b = Matrix::from_rows(vec![vec![rat(1), rat(1)], vec![rat(1), rat(-1)], vec![rat(0), rat(1)]]);
        let e = Elimination::new(&b);
        assert_eq!(
            e.solve(&[rat(3), rat(1), rat(1)]),
            Solution::Unique(vec![rat(2), rat(1)])
        );
    }

    #[test]
    fn null_space_is_annihilated() {
        let a = Matrix::from_rows(vec![
            vec![rat(1), rat(2), rat(0), rat(-1)],
            vec![rat(2), rat(4), rat(1), rat(0)],
        ]);
        let e = Elimination::new(&a);
        let ns = e.null_space();
        assert_eq!(ns.len(), 2);
        for v in ns {
            let col = Matrix::from_rows(v.into_iter().map(|x| vec![x]).collect());
            assert!((&a * &col).is_zero());
        }
    }
}
