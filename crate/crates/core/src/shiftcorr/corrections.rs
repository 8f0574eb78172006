/// Adjusted p-values (or q-values) and rejection flags, in input order.
#[derive(Debug, Clone, PartialEq)]
pub struct Adjusted {
    pub adjusted: Vec<f64>,
    pub significant: Vec<bool>,
}

/// `min(1, p * m)`, significant when strictly below `alpha`.
pub fn bonferroni(p: &[f64], alpha: f64) -> Adjusted {
    let m = p.len() as f64;
    let adjusted: Vec<f64> = p.iter().map(|&x| (x * m).min(1.0)).collect();
    let significant = adjusted.iter().map(|&a| a < alpha).collect();
    Adjusted { adjusted, significant }
}

/// Benjamini-Hochberg step-up. Rejects the `k` smallest p-values for the
/// largest `k` with `p_(k) * m <= k * alpha`; q-values are the running
/// minimum of `p_(i) * m / i` taken from the largest p down.
pub fn bh_fdr(p: &[f64], alpha: f64) -> Adjusted {
    let m = p.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| p[a].total_cmp(&p[b]).then(a.cmp(&b)));

    let mut cutoff = 0;
    for (i, &k) in order.iter().enumerate() {
        if p[k] * m as f64 <= (i + 1) as f64 * alpha {
            cutoff = i + 1;
        }
    }
    let mut significant = vec![false; m];
    for &k in &order[..cutoff] {
        significant[k] = true;
    }

    let mut adjusted = vec![1.0; m];
    let mut running = 1.0f64;
    for (i, &k) in order.iter().enumerate().rev() {
        running = running.min(p[k] * m as f64 / (i + 1) as f64);
        adjusted[k] = running.min(1.0);
    }
    Adjusted { adjusted, significant }
}
