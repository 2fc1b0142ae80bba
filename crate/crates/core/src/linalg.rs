//! Small dense vector and symmetric-matrix helpers.

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn l1_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).sum()
}

pub fn l2_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn linf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn l1_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

pub fn linf_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Dense symmetric matrix stored row-major in full.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    /// Builds from row-major data, symmetrising as `(A + Aᵀ)/2`.
    pub fn from_row_major(n: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), n * n, "matrix data has wrong length");
        let mut m = Self { n, data };
        for i in 0..n {
            for j in (i + 1)..n {
                let avg = 0.5 * (m.get(i, j) + m.get(j, i));
                m.data[i * n + j] = avg;
                m.data[j * n + i] = avg;
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    /// Adds `v` to both `(i, j)` and `(j, i)` (once when `i == j`).
    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] += v;
        if i != j {
            self.data[j * self.n + i] += v;
        }
    }

    pub fn row_major(&self) -> &[f64] {
        &self.data
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        self.data.chunks(self.n).map(|row| dot(row, x)).collect()
    }

    /// `xᵀ A x`.
    pub fn quad_form(&self, x: &[f64]) -> f64 {
        dot(x, &self.mul_vec(x))
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| ((i + 1)..self.n).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

/// Eigen-decomposition `A = V diag(λ) Vᵀ` of a symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymEigen {
    pub values: Vec<f64>,
    /// Eigenvectors stored column-wise in a row-major n×n buffer:
    /// `vectors[k * n + i]` is component `k` of eigenvector `i`.
    pub vectors: Vec<f64>,
    pub sweeps: usize,
}

impl SymEigen {
    /// Rebuilds `V diag(values) Vᵀ` with the supplied eigenvalues.
    pub fn reconstruct_with(&self, values: &[f64]) -> SymMatrix {
        let n = values.len();
        let mut out = SymMatrix::zeros(n);
        for r in 0..n {
            for c in r..n {
                let mut s = 0.0;
                for (k, lam) in values.iter().enumerate() {
                    s += self.vectors[r * n + k] * lam * self.vectors[c * n + k];
                }
                out.set(r, c, s);
            }
        }
        out
    }
}

const JACOBI_MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi eigenvalue iteration.
///
/// Each sweep visits every off-diagonal pair `(p, q)` once and applies the
/// plane rotation that annihilates `a[p][q]`. Iteration stops when the
/// off-diagonal Frobenius mass drops below `f64::EPSILON` times the full
/// Frobenius norm. Eigenvalues are returned unsorted, in diagonal order.
pub fn jacobi_eigen(a: &SymMatrix) -> SymEigen {
    let n = a.dim();
    let mut m = a.data.clone();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let frob = m.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut sweeps = 0;
    while sweeps < JACOBI_MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[p * n + q] * m[p * n + q];
            }
        }
        if off.sqrt() <= f64::EPSILON * frob || off == 0.0 {
            break;
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[q * n + q] - m[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = m[k * n + p];
                    let akq = m[k * n + q];
                    m[k * n + p] = c * akp - s * akq;
                    m[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = m[p * n + k];
                    let aqk = m[q * n + k];
                    m[p * n + k] = c * apk - s * aqk;
                    m[q * n + k] = s * apk + c * aqk;
                }
                m[p * n + q] = 0.0;
                m[q * n + p] = 0.0;
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    SymEigen {
        values: (0..n).map(|i| m[i * n + i]).collect(),
        vectors: v,
        sweeps,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn norms() {
        let v = [3.0, -4.0];
        assert_eq!(l1_norm(&v), 7.0);
        assert_eq!(l2_norm(&v), 5.0);
        assert_eq!(linf_norm(&v), 4.0);
        assert_eq!(l1_distance(&v, &[0.0, 0.0]), 7.0);
        assert_eq!(linf_distance(&v, &[3.0, 0.0]), 4.0);
    }

    #[test]
    fn jacobi_diagonal_is_identity_work() {
        let a = SymMatrix::from_row_major(3, vec![1.0, 0.0, 0.0, 0.0, -2.0, 0.0, 0.0, 0.0, 5.0]);
        let e = jacobi_eigen(&a);
        assert_eq!(e.sweeps, 0);
        assert_eq!(e.values, vec![1.0, -2.0, 5.0]);
    }

    #[test]
    fn jacobi_two_by_two() {
        // [[2,1],[1,2]] has eigenvalues 1 and 3.
        let a = SymMatrix::from_row_major(2, vec![2.0, 1.0, 1.0, 2.0]);
        let mut vals = jacobi_eigen(&a).values;
        vals.sort_by(f64::total_cmp);
        assert!((vals[0] - 1.0).abs() < 1e-14);
        assert!((vals[1] - 3.0).abs() < 1e-14);
    }

    fn arb_sym(n: usize) -> impl Strategy<Value = SymMatrix> {
        proptest::collection::vec(-5.0f64..5.0, n * n)
            .prop_map(move |d| SymMatrix::from_row_major(n, d))
    }

    proptest! {
        #[test]
        fn jacobi_matches_nalgebra_and_reconstructs(a in (1usize..9).prop_flat_map(arb_sym)) {
            let n = a.dim();
            let e = jacobi_eigen(&a);
            let back = e.reconstruct_with(&e.values);
            for (x, y) in back.row_major().iter().zip(a.row_major()) {
                prop_assert!((x - y).abs() < 1e-10);
            }
            // V is orthonormal.
            for i in 0..n {
                for j in 0..n {
                    let s: f64 = (0..n).map(|k| e.vectors[k * n + i] * e.vectors[k * n + j]).sum();
                    let want = if i == j { 1.0 } else { 0.0 };
                    prop_assert!((s - want).abs() < 1e-12);
                }
            }
            let oracle = nalgebra::DMatrix::from_row_slice(n, n, a.row_major()).symmetric_eigen();
            let mut ours = e.values.clone();
            ours.sort_by(f64::total_cmp);
            let mut theirs: Vec<f64> = oracle.eigenvalues.iter().copied().collect();
            theirs.sort_by(f64::total_cmp);
            for (x, y) in ours.iter().zip(&theirs) {
                prop_assert!((x - y).abs() < 1e-10);
            }
        }
    }
}
