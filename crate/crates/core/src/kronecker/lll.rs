//! Floating-point LLL reduction. Heuristic: callers verify what they extract.

/// Reduce the rows of `basis` in place with Lovasz parameter `delta`.
pub fn lll_reduce(basis: &mut [Vec<f64>], delta: f64) {
    let n = basis.len();
    if n < 2 {
        return;
    }
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let gram_schmidt = |b: &[Vec<f64>]| {
        let mut bstar: Vec<Vec<f64>> = Vec::with_capacity(n);
        let mut mu = vec![vec![0.0; n]; n];
        let mut norms = vec![0.0; n];
        for i in 0..n {
            let mut v = b[i].clone();
            for j in 0..i {
                mu[i][j] = if norms[j] > 0.0 { dot(&b[i], &bstar[j]) / norms[j] } else { 0.0 };
                for (x, y) in v.iter_mut().zip(&bstar[j]) {
                    *x -= mu[i][j] * y;
                }
            }
            norms[i] = dot(&v, &v);
            bstar.push(v);
        }
        (mu, norms)
    };
    let (mut mu, mut norms) = gram_schmidt(basis);
    let mut k = 1;
    let mut guard = 0usize;
    while k < n && guard < 100_000 {
        guard += 1;
        for j in (0..k).rev() {
            let q = mu[k][j].round();
            if q != 0.0 {
                let (head, tail) = basis.split_at_mut(k);
                for (x, y) in tail[0].iter_mut().zip(&head[j]) {
                    *x -= q * y;
                }
                for l in 0..=j {
                    mu[k][l] -= q * if l == j { 1.0 } else { mu[j][l] };
                }
            }
        }
        if norms[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * norms[k - 1] {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            let gs = gram_schmidt(basis);
            mu = gs.0;
            norms = gs.1;
            k = (k - 1).max(1);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_a_skewed_basis() {
        let mut b = vec![vec![1.0, 0.0, 0.0], vec![1000.0, 1.0, 0.0], vec![517.0, 333.0, 1.0]];
        lll_reduce(&mut b, 0.99);
        for row in &b {
            let len: f64 = row.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!(len <= 2.0, "{row:?}");
        }
    }

    #[test]
    fn finds_integer_relation() {
        // 3 * sqrt2-ish relation: rows (1, 0, C a), (0, 1, C b) with a = 2 b
        let c = 1e6;
        let mut b = vec![vec![1.0, 0.0, c * 2.0 * 0.618_033_988], vec![0.0, 1.0, c * 0.618_033_988]];
        lll_reduce(&mut b, 0.99);
        let first = &b[0];
        assert!(first[2].abs() < 1e-6 && (first[0].abs() - 1.0).abs() < 1e-12 && (first[1].abs() - 2.0).abs() < 1e-12);
    }
}
