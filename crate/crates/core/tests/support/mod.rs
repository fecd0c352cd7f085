//! Independent oracles for the integration and acceptance tests. Nothing here
//! calls into the code paths it checks.
#![allow(dead_code)]

/// Sample covariance with `1 / (M - 1)` about the mean, plain loops.
pub fn covariance(rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let m = rows.len();
    let d = rows[0].len();
    let mean: Vec<f64> = (0..d)
        .map(|k| rows.iter().map(|r| r[k]).sum::<f64>() / m as f64)
        .collect();
    let mut cov = vec![vec![0.0; d]; d];
    for a in 0..d {
        for b in 0..d {
            cov[a][b] = rows
                .iter()
                .map(|r| (r[a] - mean[a]) * (r[b] - mean[b]))
                .sum::<f64>()
                / (m - 1) as f64;
        }
    }
    cov
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        let scale: f64 = (0..n).map(|i| a[i][i] * a[i][i]).sum::<f64>().max(1e-300);
        if off <= 1e-30 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}

/// Cluster count from the Jacobi eigenvalues with the same floor and
/// cumulative-share rule.
pub fn k_oracle(rows: &[Vec<f64>], nu: f64) -> usize {
    let mut eig = jacobi_eigenvalues(covariance(rows));
    eig.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let top = eig[0].max(0.0);
    let eig: Vec<f64> = eig
        .into_iter()
        .map(|v| if v < 1e-12 * top || v < 0.0 { 0.0 } else { v })
        .collect();
    let total: f64 = eig.iter().sum();
    if total <= 0.0 {
        return 1;
    }
    let mut acc = 0.0;
    for (i, v) in eig.iter().enumerate() {
        acc += v;
        if acc / total >= nu {
            return i + 1;
        }
    }
    eig.len()
}

/// ARI from explicit pair enumeration (Hubert-Arabie form).
pub fn ari_by_pairs(a: &[i64], b: &[i64]) -> f64 {
    let n = a.len();
    let (mut ss, mut sd, mut ds, mut dd) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..n {
        for j in i + 1..n {
            match (a[i] == a[j], b[i] == b[j]) {
                (true, true) => ss += 1.0,
                (true, false) => sd += 1.0,
                (false, true) => ds += 1.0,
                (false, false) => dd += 1.0,
            }
        }
    }
    let denom = (ss + sd) * (sd + dd) + (ss + ds) * (ds + dd);
    if denom == 0.0 {
        return 1.0;
    }
    2.0 * (ss * dd - sd * ds) / denom
}

/// Weighted pyramid sum written out term by term.
pub fn fuse_oracle(grids: &[(u8, [f64; 2], Vec<f64>)], center: [f64; 2], sigma: f64) -> Vec<f64> {
    let c = grids[0].2.len();
    let mut out = vec![0.0; c];
    for (level, x, conf) in grids {
        let weight = 0.5f64.powi(3 - i32::from(*level));
        let dx = center[0] - x[0];
        let dy = center[1] - x[1];
        let prior = (-(dx * dx + dy * dy) / (2.0 * sigma * sigma)).exp();
        for k in 0..c {
            out[k] += weight * conf[k] * prior;
        }
    }
    out
}

/// Random orthogonal matrix by Gram-Schmidt on the given raw vectors.
pub fn orthonormalize(raw: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in raw {
        let mut u = v.clone();
        for b in &basis {
            let dot: f64 = u.iter().zip(b).map(|(x, y)| x * y).sum();
            u.iter_mut().zip(b).for_each(|(x, y)| *x -= dot * y);
        }
        let norm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-6 {
            return None;
        }
        basis.push(u.into_iter().map(|x| x / norm).collect());
    }
    Some(basis)
}
