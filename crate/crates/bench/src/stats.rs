use statrs::distribution::{ContinuousCDF, StudentsT};

/// Sample mean with a two-sided 95% Student-t confidence interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanCi {
    pub n: usize,
    pub mean: f64,
    pub low: f64,
    pub high: f64,
}

impl MeanCi {
    pub fn of(xs: &[f64]) -> MeanCi {
        let n = xs.len();
        assert!(n > 0, "empty sample");
        let mean = xs.iter().sum::<f64>() / n as f64;
        if n == 1 {
            return MeanCi { n, mean, low: mean, high: mean };
        }
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let t = StudentsT::new(0.0, 1.0, (n - 1) as f64).expect("valid dof").inverse_cdf(0.975);
        let half = t * (var / n as f64).sqrt();
        MeanCi { n, mean, low: mean - half, high: mean + half }
    }

    pub fn overlaps(&self, other: &MeanCi) -> bool {
        self.low <= other.high && other.low <= self.high
    }
}

/// |got - reference| / |reference| in percent.
pub fn percent_error(got: f64, reference: f64) -> f64 {
    ((got - reference) / reference).abs() * 100.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_interval() {
        // n=4, mean 2.5, s = sqrt(5/3), t(0.975, 3) = 3.182446
        let m = MeanCi::of(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m.mean, 2.5);
        let half = 3.182446305284263 * (5.0f64 / 3.0).sqrt() / 2.0;
        assert!((m.high - 2.5 - half).abs() < 1e-9);
        assert!(m.low <= m.mean && m.mean <= m.high);
    }

    #[test]
    fn overlap() {
        let a = MeanCi { n: 2, mean: 1.0, low: 0.5, high: 1.5 };
        let b = MeanCi { n: 2, mean: 2.0, low: 1.6, high: 2.4 };
        assert!(!a.overlaps(&b));
        assert!(a.overlaps(&MeanCi { low: 1.4, ..b }));
    }
}
