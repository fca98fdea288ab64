use num_traits::Zero;

use super::GaussianRational;

/// Basis of the right kernel of `rows` (each of length `ncols`), by exact
/// Gauss-Jordan elimination with left-to-right pivoting. Each basis vector
/// is scaled so its first nonzero entry is 1; vectors are ordered by their
/// free column.
pub fn kernel_basis(rows: &[Vec<GaussianRational>], ncols: usize) -> Vec<Vec<GaussianRational>> {
    let mut m: Vec<Vec<GaussianRational>> = rows.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][col].inv().expect("pivot is nonzero");
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in 0..ncols {
                    let t = &f * &m[r][j];
                    m[i][j] -= &t;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![GaussianRational::zero(); ncols];
            v[free] = 1.into();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -&m[row][free];
            }
            let lead = v.iter().find(|x| !x.is_zero()).cloned().expect("free entry is 1");
            v.iter().map(|x| x / &lead).collect()
        })
        .collect()
}

pub fn rank(rows: &[Vec<GaussianRational>], ncols: usize) -> usize {
    ncols - kernel_basis(rows, ncols).len()
}
