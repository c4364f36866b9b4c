//! Small exact integer matrix routines: Smith normal form with transforms,
//! determinants, and signatures of symmetric matrices. Everything here runs
//! on the tiny matrices of this crate (rank <= 4), so the implementations
//! favor clarity over asymptotics.

pub type Mat = Vec<Vec<i64>>;

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    let mut out = vec![vec![0i64; m]; n];
    for i in 0..n {
        for j in 0..m {
            out[i][j] = (0..k).map(|t| a[i][t] * b[t][j]).sum();
        }
    }
    out
}

pub fn mat_vec(a: &Mat, x: &[i64]) -> Vec<i64> {
    a.iter().map(|row| row.iter().zip(x).map(|(&r, &v)| r * v).sum()).collect()
}

pub fn transpose(a: &Mat) -> Mat {
    let n = a.len();
    let m = a[0].len();
    (0..m).map(|j| (0..n).map(|i| a[i][j]).collect()).collect()
}

pub fn is_symmetric(a: &Mat) -> bool {
    let n = a.len();
    a.iter().all(|row| row.len() == n)
        && (0..n).all(|i| (0..n).all(|j| a[i][j] == a[j][i]))
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(a: &Mat) -> i64 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut m: Vec<Vec<i128>> = a
        .iter()
        .map(|row| row.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| m[i][k] != 0) else {
                return 0;
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]) / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    (sign * m[n - 1][n - 1]) as i64
}

/// Smith normal form: returns `(d, u, v)` with `u * a * v` diagonal with
/// entries `d`, each nonnegative and `d[i] | d[i+1]`, and `u`, `v`
/// unimodular.
pub fn smith_normal_form(a: &Mat) -> (Vec<i64>, Mat, Mat) {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m = a.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);

    let mut t = 0;
    while t < rows.min(cols) {
        // Find a pivot.
        let mut pivot = None;
        'outer: for i in t..rows {
            for j in t..cols {
                if m[i][j] != 0 {
                    pivot = Some((i, j));
                    break 'outer;
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        m.swap(t, pi);
        u.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        for row in v.iter_mut() {
            row.swap(t, pj);
        }

        loop {
            // Clear column t with row operations.
            let mut dirty = false;
            for i in t + 1..rows {
                while m[i][t] != 0 {
                    let q = m[i][t].div_euclid(m[t][t]);
                    for j in 0..cols {
                        m[i][j] -= q * m[t][j];
                    }
                    for j in 0..rows {
                        u[i][j] -= q * u[t][j];
                    }
                    if m[i][t] != 0 {
                        m.swap(t, i);
                        u.swap(t, i);
                        dirty = true;
                    }
                }
            }
            // Clear row t with column operations.
            for j in t + 1..cols {
                while m[t][j] != 0 {
                    let q = m[t][j].div_euclid(m[t][t]);
                    for i in 0..rows {
                        m[i][j] -= q * m[i][t];
                    }
                    for i in 0..cols {
                        v[i][j] -= q * v[i][t];
                    }
                    if m[t][j] != 0 {
                        for row in m.iter_mut() {
                            row.swap(t, j);
                        }
                        for row in v.iter_mut() {
                            row.swap(t, j);
                        }
                        dirty = true;
                    }
                }
            }
            if !dirty {
                break;
            }
        }

        // Enforce divisibility d[t] | m[i][j] for the trailing block.
        let mut fixed = true;
        'div: for i in t + 1..rows {
            for j in t + 1..cols {
                if m[i][j] % m[t][t] != 0 {
                    // Add row i to row t and restart elimination at t.
                    for jj in 0..cols {
                        m[t][jj] += m[i][jj];
                    }
                    for jj in 0..rows {
                        u[t][jj] += u[i][jj];
                    }
                    fixed = false;
                    break 'div;
                }
            }
        }
        if fixed {
            if m[t][t] < 0 {
                for j in 0..cols {
                    m[t][j] = -m[t][j];
                }
                for j in 0..rows {
                    u[t][j] = -u[t][j];
                }
            }
            t += 1;
        }
    }

    let d = (0..rows.min(cols)).map(|i| m[i][i]).collect();
    (d, u, v)
}

/// Signature `(n_plus, n_minus)` of a symmetric integer matrix, by exact
/// rational congruence diagonalization.
pub fn signature(a: &Mat) -> (usize, usize) {
    #[derive(Clone, Copy)]
    struct Frac(i128, i128); // num / den, den > 0

    impl Frac {
        fn norm(self) -> Frac {
            let Frac(mut n, mut d) = self;
            if d < 0 {
                n = -n;
                d = -d;
            }
            let g = gcd128(n.abs(), d);
            if g > 1 {
                Frac(n / g, d / g)
            } else {
                Frac(n, d)
            }
        }
        fn sub(self, o: Frac) -> Frac {
            Frac(self.0 * o.1 - o.0 * self.1, self.1 * o.1).norm()
        }
        fn mul(self, o: Frac) -> Frac {
            Frac(self.0 * o.0, self.1 * o.1).norm()
        }
        fn div(self, o: Frac) -> Frac {
            Frac(self.0 * o.1, self.1 * o.0).norm()
        }
        fn is_zero(self) -> bool {
            self.0 == 0
        }
    }

    fn gcd128(a: i128, b: i128) -> i128 {
        let (mut a, mut b) = (a.abs(), b.abs());
        while b != 0 {
            let t = a % b;
            a = b;
            b = t;
        }
        a
    }

    let n = a.len();
    let mut m: Vec<Vec<Frac>> = a
        .iter()
        .map(|row| row.iter().map(|&x| Frac(x as i128, 1)).collect())
        .collect();
    let (mut plus, mut minus) = (0usize, 0usize);
    let mut i = 0;
    while i < n {
        if m[i][i].is_zero() {
            // Pull a nonzero diagonal entry below, or build one from an
            // off-diagonal via the hyperbolic substitution x -> x + y.
            if let Some(p) = (i + 1..n).find(|&p| !m[p][p].is_zero()) {
                m.swap(i, p);
                for row in m.iter_mut() {
                    row.swap(i, p);
                }
            } else if let Some(j) = (i + 1..n).find(|&j| !m[i][j].is_zero()) {
                for t in 0..n {
                    let add = m[t][j];
                    m[t][i] = m[t][i].sub(Frac(-add.0, add.1));
                }
                for t in 0..n {
                    let add = m[j][t];
                    m[i][t] = m[i][t].sub(Frac(-add.0, add.1));
                }
            } else {
                i += 1; // zero row: contributes to neither sign
                continue;
            }
        }
        let d = m[i][i];
        if d.0 > 0 {
            plus += 1;
        } else {
            minus += 1;
        }
        for p in i + 1..n {
            let factor = m[p][i].div(d);
            if factor.is_zero() {
                continue;
            }
            for q in 0..n {
                let s = factor.mul(m[i][q]);
                m[p][q] = m[p][q].sub(s);
            }
        }
        for q in i + 1..n {
            m[i][q] = Frac(0, 1);
            m[q][i] = Frac(0, 1);
        }
        i += 1;
    }
    (plus, minus)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snf_diagonalizes_with_unimodular_transforms() {
        let cases: Vec<Mat> = vec![
            vec![vec![0, 2], vec![2, 0]],
            vec![vec![2, 0], vec![0, -2]],
            vec![vec![2]],
            vec![vec![0, 1], vec![1, -2]],
            vec![vec![6, 4, 2], vec![4, 8, 0], vec![2, 0, 10]],
        ];
        for a in cases {
            let (d, u, v) = smith_normal_form(&a);
            assert_eq!(determinant(&u).abs(), 1);
            assert_eq!(determinant(&v).abs(), 1);
            let prod = mat_mul(&mat_mul(&u, &a), &v);
            for i in 0..a.len() {
                for j in 0..a.len() {
                    assert_eq!(prod[i][j], if i == j { d[i] } else { 0 });
                }
            }
            for w in d.windows(2) {
                if w[1] != 0 {
                    assert_eq!(w[1] % w[0], 0);
                }
            }
        }
    }

    #[test]
    fn snf_invariant_factors() {
        let (d, _, _) = smith_normal_form(&vec![vec![0, 2], vec![2, 0]]);
        assert_eq!(d, vec![2, 2]);
        let (d, _, _) = smith_normal_form(&vec![vec![0, 1], vec![1, -2]]);
        assert_eq!(d, vec![1, 1]);
        let (d, _, _) = smith_normal_form(&vec![vec![-4]]);
        assert_eq!(d, vec![4]);
    }

    #[test]
    fn signatures() {
        assert_eq!(signature(&vec![vec![0, 2], vec![2, 0]]), (1, 1));
        assert_eq!(signature(&vec![vec![2, 0], vec![0, -2]]), (1, 1));
        assert_eq!(signature(&vec![vec![-4]]), (0, 1));
        assert_eq!(signature(&vec![vec![2]]), (1, 0));
        assert_eq!(signature(&vec![vec![0, 1], vec![1, -2]]), (1, 1));
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(&vec![vec![0, 2], vec![2, 0]]), -4);
        assert_eq!(determinant(&vec![vec![0, 1], vec![1, -2]]), -1);
        assert_eq!(determinant(&vec![vec![2, 1], vec![1, 2]]), 3);
    }
}
