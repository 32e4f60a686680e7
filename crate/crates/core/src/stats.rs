//! The continuous binomial `b(sigma, x)`, the trace-distribution model
//! families built from it, and numerical residuals of its expansion around
//! the Gaussian.
//!
//! `b` interpolates the binomial pmf at the real argument
//! `m = E - sigma * x`, with `n = (N - E) + sigma * x` failures, through
//! `Gamma(N + 1) / (Gamma(m + 1) Gamma(n + 1)) mu^m (1 - mu)^n`, evaluated in
//! log space.

use std::f64::consts::PI;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("log_gamma needs z > 0, got {0}")]
    NonPositive(f64),
    #[error("x={x} is outside the domain: m={m} must lie strictly between 0 and N={n}")]
    Domain { x: f64, m: f64, n: f64 },
    #[error("model index must be 1, 2 or 3, got {0}")]
    BadIndex(u32),
    #[error("empty grid")]
    EmptyGrid,
}

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Stirling coefficients `B_{2k} / (2k (2k - 1))`.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// `ln Gamma(z)` for `z > 0`: the argument is shifted above 16 by the
/// recurrence, then the Stirling series is summed.
pub fn log_gamma(z: f64) -> Result<f64, StatsError> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(StatsError::NonPositive(z));
    }
    let mut shift = 1.0;
    let mut w = z;
    let mut correction = 0.0;
    while w < 16.0 {
        shift *= w;
        w += 1.0;
        if shift > 1e280 {
            correction += shift.ln();
            shift = 1.0;
        }
    }
    correction += shift.ln();
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let series = STIRLING.iter().rev().fold(0.0, |acc, &c| acc * inv2 + c) * inv;
    Ok((w - 0.5) * w.ln() - w + LN_SQRT_2PI + series - correction)
}

/// Standard normal density.
pub fn gaussian(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// `x (3 - x^2) exp(-x^2 / 2) / (3 sqrt(2 pi))`, the limiting odd part.
pub fn psi(x: f64) -> f64 {
    x * (3.0 - x * x) * (-0.5 * x * x).exp() / (3.0 * (2.0 * PI).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelFamily {
    F1,
    F2,
    F3,
    Affine,
    /// `N = q^2 + q + 1` trials with `mu = 1/2`; its pmf is symmetric about
    /// the mean, so it has no odd correction.
    Symmetric,
}

impl ModelFamily {
    pub const ALL: [ModelFamily; 5] =
        [ModelFamily::F1, ModelFamily::F2, ModelFamily::F3, ModelFamily::Affine, ModelFamily::Symmetric];

    pub fn label(self) -> &'static str {
        match self {
            ModelFamily::F1 => "F1",
            ModelFamily::F2 => "F2",
            ModelFamily::F3 => "F3",
            ModelFamily::Affine => "AFFINE",
            ModelFamily::Symmetric => "SYMMETRIC",
        }
    }

    pub fn parse(s: &str) -> Option<ModelFamily> {
        ModelFamily::ALL.into_iter().find(|f| f.label().eq_ignore_ascii_case(s))
    }

    /// The model numbered `i` in the trace comparison: F1, F2 or F3.
    pub fn indexed(i: u32) -> Result<ModelFamily, StatsError> {
        match i {
            1 => Ok(ModelFamily::F1),
            2 => Ok(ModelFamily::F2),
            3 => Ok(ModelFamily::F3),
            _ => Err(StatsError::BadIndex(i)),
        }
    }

    /// F3 pairs `mu = 1/q` with `sigma = sqrt(q)`, so its mean is not
    /// `sigma^2 + 1`.
    pub fn is_flagged(self) -> bool {
        self == ModelFamily::F3
    }

    pub fn model(self, q: f64) -> BinomialModel {
        let n_plane = q * q + q + 1.0;
        match self {
            ModelFamily::F1 => BinomialModel::new(n_plane, 1.0 / q, (q - 1.0 / (q * q)).sqrt(), n_plane / q),
            ModelFamily::F2 => BinomialModel::new(
                n_plane,
                (q + 1.0) / n_plane,
                (q * (1.0 - 1.0 / n_plane)).sqrt(),
                q + 1.0,
            ),
            ModelFamily::F3 => BinomialModel::new(n_plane, 1.0 / q, q.sqrt(), n_plane / q),
            ModelFamily::Affine => BinomialModel::new(q * q, 1.0 / q, (q - 1.0).sqrt(), q),
            ModelFamily::Symmetric => BinomialModel::new(n_plane, 0.5, (n_plane * 0.25).sqrt(), 0.5 * n_plane),
        }
    }

    /// The limit of `sigma^2 (b(x) - b(-x))`.
    pub fn odd_limit(self, x: f64) -> f64 {
        match self {
            ModelFamily::Symmetric => 0.0,
            _ => psi(x),
        }
    }
}

/// `N` trials with success probability `mu`, scale `sigma` and mean `e`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinomialModel {
    pub n: f64,
    pub mu: f64,
    pub sigma: f64,
    pub e: f64,
}

impl BinomialModel {
    pub fn new(n: f64, mu: f64, sigma: f64, e: f64) -> BinomialModel {
        BinomialModel { n, mu, sigma, e }
    }

    /// The plain binomial: `E = N mu`, `sigma^2 = N mu (1 - mu)`.
    pub fn binomial(n: f64, mu: f64) -> BinomialModel {
        BinomialModel::new(n, mu, (n * mu * (1.0 - mu)).sqrt(), n * mu)
    }

    /// Successes and failures at abscissa `x`.
    pub fn split(&self, x: f64) -> (f64, f64) {
        let shift = self.sigma * x;
        (self.e - shift, (self.n - self.e) + shift)
    }

    pub fn is_admissible(&self, x: f64) -> bool {
        let (m, k) = self.split(x);
        m > 0.0 && k > 0.0
    }

    /// `b(sigma, x)`.
    pub fn b(&self, x: f64) -> Result<f64, StatsError> {
        let (m, k) = self.split(x);
        if !(m > 0.0 && k > 0.0) {
            return Err(StatsError::Domain { x, m, n: self.n });
        }
        let ln = log_gamma(self.n + 1.0)? - (log_gamma(m + 1.0)? + log_gamma(k + 1.0)?)
            + (m * self.mu.ln() + k * (1.0 - self.mu).ln());
        Ok(ln.exp())
    }
}

/// `b(sigma, x)` for `model`.
pub fn b_continuous(model: &BinomialModel, x: f64) -> Result<f64, StatsError> {
    model.b(x)
}

/// `B_i(x) = sigma_i b_i(x)` at `q` for `i` in 1..=3.
pub fn model_b(i: u32, q: f64, x: f64) -> Result<f64, StatsError> {
    let m = ModelFamily::indexed(i)?.model(q);
    Ok(m.sigma * m.b(x)?)
}

/// `V_i(x) = sigma_i (B_i(x) - B_i(-x))`.
pub fn model_v(i: u32, q: f64, x: f64) -> Result<f64, StatsError> {
    let m = ModelFamily::indexed(i)?.model(q);
    Ok(m.sigma * (m.sigma * m.b(x)? - m.sigma * m.b(-x)?))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualRow {
    pub family: ModelFamily,
    pub q: f64,
    pub sigma: f64,
    pub x: f64,
    pub b: f64,
    /// `sigma b - phi`.
    pub r1: f64,
    /// `sigma^2 (b - phi / sigma) + x (x^2 - 3) phi / 6`.
    pub r2: f64,
    /// `sigma^2 (b(x) - b(-x))` minus its limit.
    pub r3: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualTable {
    pub rows: Vec<ResidualRow>,
    /// Set when the family's mean is not `sigma^2 + 1`.
    pub flagged: bool,
}

impl ResidualTable {
    /// Largest `|r2|` and `|r3|` over the rows at `q`.
    pub fn max_abs(&self, q: f64) -> (f64, f64) {
        self.rows.iter().filter(|r| r.q == q).fold((0.0f64, 0.0f64), |(a, b), r| {
            (a.max(r.r2.abs()), b.max(r.r3.abs()))
        })
    }
}

pub fn expansion_residuals(
    family: ModelFamily,
    q_list: &[f64],
    x_grid: &[f64],
) -> Result<ResidualTable, StatsError> {
    if q_list.is_empty() || x_grid.is_empty() {
        return Err(StatsError::EmptyGrid);
    }
    let mut rows = Vec::with_capacity(q_list.len() * x_grid.len());
    for &q in q_list {
        let model = family.model(q);
        let s = model.sigma;
        for &x in x_grid {
            let b = model.b(x)?;
            let phi = gaussian(x);
            rows.push(ResidualRow {
                family,
                q,
                sigma: s,
                x,
                b,
                r1: s * b - phi,
                r2: s * s * (b - phi / s) + x * (x * x - 3.0) * phi / 6.0,
                r3: s * s * (b - model.b(-x)?) - family.odd_limit(x),
            });
        }
    }
    Ok(ResidualTable { rows, flagged: family.is_flagged() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::{BigInt, BigUint};
    use num_rational::BigRational;

    fn ln_factorial(n: u32) -> f64 {
        let f: BigUint = (1..=n).map(BigUint::from).product();
        // ln of a big integer from its leading digits and length.
        let s = f.to_string();
        let head: f64 = s[..s.len().min(17)].parse().unwrap();
        head.ln() + (s.len() - s.len().min(17)) as f64 * 10f64.ln()
    }

    fn rel(a: f64, b: f64) -> f64 {
        if b == 0.0 {
            a.abs()
        } else {
            ((a - b) / b).abs()
        }
    }

    #[test]
    fn log_gamma_examples() {
        assert!(log_gamma(1.0).unwrap().abs() < 1e-14);
        assert!(log_gamma(2.0).unwrap().abs() < 1e-14);
        let want = (2_432_902_008_176_640_000f64).ln();
        assert!(rel(log_gamma(21.0).unwrap(), want) < 1e-14);
        assert!(rel(log_gamma(0.5).unwrap(), PI.sqrt().ln()) < 1e-13);
        assert_eq!(log_gamma(0.0), Err(StatsError::NonPositive(0.0)));
        assert!(log_gamma(-2.5).is_err());
        assert!(log_gamma(f64::NAN).is_err());
    }

    #[test]
    fn log_gamma_matches_factorials() {
        for n in 3..=3000u32 {
            let got = log_gamma(n as f64 + 1.0).unwrap();
            assert!(rel(got, ln_factorial(n)) < 1e-12, "n={n}");
        }
    }

    #[test]
    fn log_gamma_recurrence_at_small_arguments() {
        for i in 1..200 {
            let z = i as f64 * 0.037;
            let a = log_gamma(z + 1.0).unwrap();
            let b = log_gamma(z).unwrap() + z.ln();
            assert!((a - b).abs() < 1e-12 * a.abs().max(1.0), "z={z}");
        }
    }

    #[test]
    fn gaussian_and_psi() {
        assert!((gaussian(0.0) - 0.398_942_280_401_432_7).abs() < 1e-15);
        assert_eq!(gaussian(1.3), gaussian(-1.3));
        let h = 0.001;
        let mut integral = 0.0;
        for i in 0..16000 {
            let a = -8.0 + i as f64 * h;
            integral += 0.5 * h * (gaussian(a) + gaussian(a + h));
        }
        assert!((integral - 1.0).abs() < 1e-6);
        assert_eq!(psi(0.0), 0.0);
        assert!(psi(3f64.sqrt()).abs() < 1e-14);
        assert!((psi(1.0) - 0.161_313_816_346_095_57).abs() < 1e-15);
        for i in 1..400 {
            let x = i as f64 * 0.01;
            assert_eq!(psi(-x), -psi(x));
        }
    }

    #[test]
    fn psi_zeros_on_half_line() {
        let mut changes = Vec::new();
        let step = 1e-3;
        for i in 0..10_000 {
            let (a, b) = (i as f64 * step + step / 2.0, (i + 1) as f64 * step + step / 2.0);
            if psi(a).signum() != psi(b).signum() {
                changes.push(a);
            }
        }
        assert_eq!(changes.len(), 1);
        assert!((changes[0] - 3f64.sqrt()).abs() < 2e-3);
    }

    #[test]
    fn pmf_at_integer_m() {
        let model = BinomialModel::binomial(7.0, 0.5);
        let x = (model.e - 3.0) / model.sigma;
        assert!(rel(model.b(x).unwrap(), 35.0 / 128.0) < 1e-12);
    }

    #[test]
    fn pmf_matches_exact_rationals() {
        for (num, den) in [(1u32, 2u32), (1, 3), (1, 7)] {
            for n in 1..=30u32 {
                let mu = num as f64 / den as f64;
                let model = BinomialModel::binomial(n as f64, mu);
                let mu_q = BigRational::new(BigInt::from(num), BigInt::from(den));
                let one_minus = BigRational::from_integer(BigInt::from(1)) - &mu_q;
                for m in 1..n {
                    let binom: BigUint =
                        (0..m).fold(BigUint::from(1u32), |acc, i| acc * (n - i) / (i + 1));
                    let exact = BigRational::from_integer(BigInt::from(binom))
                        * num_traits::pow(mu_q.clone(), m as usize)
                        * num_traits::pow(one_minus.clone(), (n - m) as usize);
                    let want = exact.numer().to_string().parse::<f64>().unwrap()
                        / exact.denom().to_string().parse::<f64>().unwrap();
                    let x = (model.e - m as f64) / model.sigma;
                    assert!(rel(model.b(x).unwrap(), want) < 1e-10, "n={n} m={m} mu={mu}");
                }
            }
        }
    }

    #[test]
    fn symmetric_model_is_even() {
        for q in [3.0, 53.0, 1600.0] {
            let m = ModelFamily::Symmetric.model(q);
            for i in 0..60 {
                let x = i as f64 * 0.1;
                if m.is_admissible(x) {
                    assert_eq!(m.b(x).unwrap(), m.b(-x).unwrap());
                }
            }
        }
    }

    #[test]
    fn domain_errors() {
        let m = BinomialModel::binomial(7.0, 0.5);
        assert!(matches!(m.b(10.0), Err(StatsError::Domain { .. })));
        assert!(matches!(m.b(-10.0), Err(StatsError::Domain { .. })));
        assert!(m.is_admissible(0.0));
        assert_eq!(model_b(4, 53.0, 0.0), Err(StatsError::BadIndex(4)));
        assert_eq!(expansion_residuals(ModelFamily::F2, &[53.0], &[]), Err(StatsError::EmptyGrid));
    }

    #[test]
    fn family_parameters() {
        for q in [2.0, 3.0, 4.0, 5.0, 7.0, 53.0, 101.0, 6400.0] {
            for fam in [ModelFamily::F1, ModelFamily::F2, ModelFamily::Affine] {
                let m = fam.model(q);
                assert!(rel(m.sigma * m.sigma, m.n * m.mu * (1.0 - m.mu)) < 1e-12, "{fam:?} q={q}");
                assert!(rel(m.e, m.n * m.mu) < 1e-14);
            }
            let f1 = ModelFamily::F1.model(q);
            assert!(rel(f1.sigma * f1.sigma, q - 1.0 / (q * q)) < 1e-14);
            assert!(rel(f1.e, (q * q + q + 1.0) / q) < 1e-15);
            assert_eq!(ModelFamily::F2.model(q).e, q + 1.0);
            let a = ModelFamily::Affine.model(q);
            assert!(rel(a.e, a.sigma * a.sigma + 1.0) < 1e-15);
            let f3 = ModelFamily::F3.model(q);
            assert!(rel(f3.sigma * f3.sigma, f3.n * f3.mu * (1.0 - f3.mu)) > 0.5 / (q * q * q));
        }
        assert!(ModelFamily::F3.is_flagged());
        assert_eq!(ModelFamily::parse("affine"), Some(ModelFamily::Affine));
    }

    #[test]
    fn models_at_53() {
        let f2 = ModelFamily::F2.model(53.0);
        assert!((f2.sigma * f2.b(0.0).unwrap() - 0.398_942).abs() < 0.01);
        assert!((model_b(3, 53.0, 0.0).unwrap() - 0.3989).abs() < 0.01);
        // Largest pairwise gap on [-3, 3] is about 0.0017; frozen at 0.005.
        let mut worst = 0.0f64;
        for i in -300..=300 {
            let x = i as f64 * 0.01;
            let b: Vec<f64> = (1..=3).map(|k| model_b(k, 53.0, x).unwrap()).collect();
            worst = worst.max((b[0] - b[1]).abs()).max((b[1] - b[2]).abs()).max((b[0] - b[2]).abs());
        }
        assert!(worst < 0.005, "worst={worst}");
    }

    #[test]
    fn models_integrate_to_one() {
        for i in 1..=3 {
            let m = ModelFamily::indexed(i).unwrap().model(53.0);
            let h = 0.01;
            let mut x = -(m.n - m.e) / m.sigma + h;
            let mut acc = 0.0;
            while m.is_admissible(x + h) {
                acc += 0.5 * h * (model_b(i, 53.0, x).unwrap() + model_b(i, 53.0, x + h).unwrap());
                x += h;
            }
            assert!((acc - 1.0).abs() < 0.01, "B{i} integrates to {acc}");
        }
    }

    #[test]
    fn v_models() {
        for i in 1..=3 {
            assert_eq!(model_v(i, 53.0, 0.0).unwrap(), 0.0);
            for k in 1..=60 {
                let x = k as f64 * 0.05;
                assert_eq!(model_v(i, 53.0, -x).unwrap(), -model_v(i, 53.0, x).unwrap());
            }
        }
        for k in 0..=300 {
            let x = k as f64 * 0.01;
            assert!((model_v(2, 53.0, x).unwrap() - psi(x)).abs() < 0.05, "x={x}");
        }
    }

    #[test]
    fn residuals_decay_for_f2() {
        let qs = [100.0, 400.0, 1600.0, 6400.0];
        let xs: Vec<f64> = (1..=12).map(|k| k as f64 * 0.25).collect();
        let table = expansion_residuals(ModelFamily::F2, &qs, &xs).unwrap();
        assert_eq!(table.rows.len(), 48);
        for w in qs.windows(2) {
            let (a2, a3) = table.max_abs(w[0]);
            let (b2, b3) = table.max_abs(w[1]);
            assert!(a2 / b2 >= 1.5 && a3 / b3 >= 1.5, "q={} -> {}", w[0], w[1]);
        }
        let sym = expansion_residuals(ModelFamily::Symmetric, &qs, &xs).unwrap();
        assert!(sym.rows.iter().all(|r| r.r3 == 0.0));
        assert!(expansion_residuals(ModelFamily::F3, &[53.0], &[0.5]).unwrap().flagged);
    }
}
