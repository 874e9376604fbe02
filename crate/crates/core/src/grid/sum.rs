use num_complex::Complex64;

const LEAF: usize = 32;

/// Fixed-order pairwise sum. The split points depend only on the length, so
/// the result is reproducible regardless of how the inputs were produced.
pub fn pairwise_sum(values: &[Complex64]) -> Complex64 {
    if values.len() <= LEAF {
        return values.iter().fold(Complex64::new(0.0, 0.0), |a, b| a + b);
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

pub(crate) fn pairwise_sum_real(values: &[f64]) -> f64 {
    if values.len() <= LEAF {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum_real(&values[..mid]) + pairwise_sum_real(&values[mid..])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sums_exactly_representable_values() {
        let v: Vec<Complex64> = (0..1000).map(|i| Complex64::new(i as f64, -1.0)).collect();
        assert_eq!(pairwise_sum(&v), Complex64::new(499500.0, -1000.0));
        assert_eq!(pairwise_sum(&[]), Complex64::new(0.0, 0.0));
        assert_eq!(pairwise_sum_real(&[0.5; 100]), 50.0);
    }
}
