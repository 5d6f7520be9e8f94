//! Exact samplers for one-sided stable laws and their mixtures.

use rand::distr::Open01;
use rand::Rng;

use crate::moments::MixedStableParams;

/// Sampler for a positive stable variable with `E exp(-u X) = exp(-scale u^alpha)`.
///
/// Uses Kanter's representation `X = (A(U) / E)^((1-alpha)/alpha)` with
/// `U ~ Uniform(0, pi)`, `E ~ Exp(1)` and
/// `A(u) = sin(alpha u)^(alpha/(1-alpha)) sin((1-alpha) u) / sin(u)^(1/(1-alpha))`.
#[derive(Debug, Clone, Copy)]
pub struct StableSampler {
    alpha: f64,
    multiplier: f64,
    outer: f64,
    sin_alpha_pow: f64,
    sin_pow: f64,
}

impl StableSampler {
    /// `0 < alpha < 1`, `scale > 0`.
    pub fn new(alpha: f64, scale: f64) -> Self {
        assert!(alpha > 0.0 && alpha < 1.0, "stable index must lie in (0, 1)");
        assert!(scale > 0.0, "stable scale must be positive");
        StableSampler {
            alpha,
            multiplier: scale.powf(1.0 / alpha),
            outer: (1.0 - alpha) / alpha,
            sin_alpha_pow: alpha / (1.0 - alpha),
            sin_pow: 1.0 / (1.0 - alpha),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = std::f64::consts::PI * rng.sample::<f64, _>(Open01);
        let v: f64 = rng.sample(Open01);
        let e = -v.ln();
        let a = self.alpha;
        let ln_a = self.sin_alpha_pow * (a * u).sin().ln() + ((1.0 - a) * u).sin().ln() - self.sin_pow * u.sin().ln();
        self.multiplier * (self.outer * (ln_a - e.ln())).exp()
    }
}

/// Increment over operational time `ds` of an alpha-stable subordinator with
/// Laplace exponent `u^alpha`.
pub fn sample_stable_increment<R: Rng + ?Sized>(alpha: f64, ds: f64, rng: &mut R) -> f64 {
    StableSampler::new(alpha, ds).sample(rng)
}

/// Increments of the mixed subordinator: `(c1 ds)^(1/alpha1) S1 + (c2 ds)^(1/alpha2) S2`.
#[derive(Debug, Clone, Copy)]
pub struct MixedIncrementSampler {
    first: Option<StableSampler>,
    second: Option<StableSampler>,
}

impl MixedIncrementSampler {
    pub fn new(params: &MixedStableParams, ds: f64) -> Self {
        let make = |alpha: f64, c: f64| if c > 0.0 { Some(StableSampler::new(alpha, c * ds)) } else { None };
        MixedIncrementSampler { first: make(params.alpha1(), params.c1()), second: make(params.alpha2(), params.c2()) }
    }

    /// Draws one increment; each component uses its own generator.
    pub fn sample<R1: Rng + ?Sized, R2: Rng + ?Sized>(&self, first_rng: &mut R1, second_rng: &mut R2) -> f64 {
        let mut x = 0.0;
        if let Some(s) = &self.first {
            x += s.sample(first_rng);
        }
        if let Some(s) = &self.second {
            x += s.sample(second_rng);
        }
        x
    }
}

/// One mixed increment over `ds`, components drawn from separate generators.
pub fn sample_mixed_increment<R1: Rng + ?Sized, R2: Rng + ?Sized>(
    params: &MixedStableParams,
    ds: f64,
    first_rng: &mut R1,
    second_rng: &mut R2,
) -> f64 {
    MixedIncrementSampler::new(params, ds).sample(first_rng, second_rng)
}
