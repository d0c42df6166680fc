use crate::error::{Error, Result};

/// Signed relative error `(Ĵ − J) / J`.
pub fn compute_re(j_est: f64, j_true: f64) -> Result<f64> {
    if j_true <= 0.0 {
        return Err(Error::ZeroTruth);
    }
    Ok((j_est - j_true) / j_true)
}

/// Million items per second.
pub fn compute_mips(items: u64, elapsed_seconds: f64) -> f64 {
    if elapsed_seconds <= 0.0 {
        return f64::INFINITY;
    }
    items as f64 / elapsed_seconds / 1e6
}

/// Mean and sample standard deviation.
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_error() {
        assert!((compute_re(0.55, 0.5).unwrap() - 0.1).abs() < 1e-12);
        assert_eq!(compute_re(0.5, 0.5).unwrap(), 0.0);
        assert!(compute_re(0.2, 0.5).unwrap() < 0.0);
        assert!(matches!(compute_re(0.1, 0.0), Err(Error::ZeroTruth)));
    }

    #[test]
    fn mips() {
        assert_eq!(compute_mips(27_000_000, 3.0), 9.0);
        assert_eq!(compute_mips(1_000_000, 1.0), 1.0);
        assert_eq!(compute_mips(0, 1.0), 0.0);
    }

    #[test]
    fn stats() {
        let (m, s) = mean_std(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - 1.290_994_448_735_805_6).abs() < 1e-12);
        assert_eq!(mean_std(&[3.0]), (3.0, 0.0));
    }
}
