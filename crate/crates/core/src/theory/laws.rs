//! Limit laws of the rescaled walk length and the half-normal family.

use std::f64::consts::{FRAC_2_PI, PI, SQRT_2};

use statrs::function::erf::erf;

/// Distribution function `G` on `[0, ∞)`, possibly defective (`sup G < 1` puts the
/// missing mass at `+∞`).
pub trait LimitLaw {
    fn cdf(&self, x: f64) -> f64;

    /// Locations of jumps of `G`, used as quadrature breakpoints.
    fn atoms(&self) -> Vec<f64> {
        Vec::new()
    }

    /// `lim_{x→∞} G(x)`.
    fn sup(&self) -> f64 {
        1.0
    }

    fn describe(&self) -> String;
}

/// `G ≡ 0`: the walk length is infinite on the diffusive scale.
#[derive(Clone, Copy, Debug, Default)]
pub struct InfiniteLength;

impl LimitLaw for InfiniteLength {
    fn cdf(&self, _x: f64) -> f64 {
        0.0
    }
    fn sup(&self) -> f64 {
        0.0
    }
    fn describe(&self) -> String {
        "G=0".into()
    }
}

/// Unit mass at `at`: `G(x) = 1(x >= at)`.
#[derive(Clone, Copy, Debug)]
pub struct PointMass {
    pub at: f64,
}

impl LimitLaw for PointMass {
    fn cdf(&self, x: f64) -> f64 {
        f64::from(u8::from(x >= self.at))
    }
    fn atoms(&self) -> Vec<f64> {
        vec![self.at]
    }
    fn describe(&self) -> String {
        format!("point-mass({})", self.at)
    }
}

/// Law of `|X|` for standard normal `X`.
#[derive(Clone, Copy, Debug, Default)]
pub struct HalfNormal;

impl LimitLaw for HalfNormal {
    fn cdf(&self, x: f64) -> f64 {
        half_normal_cdf(x)
    }
    fn describe(&self) -> String {
        "half-normal".into()
    }
}

/// Law of `(|X| - E|X|)/sd(|X|)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct StandardizedHalfNormal;

impl LimitLaw for StandardizedHalfNormal {
    fn cdf(&self, x: f64) -> f64 {
        standardized_f(x)
    }
    fn describe(&self) -> String {
        "standardized-half-normal".into()
    }
}

/// `x ↦ inner(β x − γ)`.
#[derive(Clone, Copy, Debug)]
pub struct Affine<G> {
    pub inner: G,
    pub beta: f64,
    pub gamma: f64,
}

impl<G: LimitLaw> LimitLaw for Affine<G> {
    fn cdf(&self, x: f64) -> f64 {
        self.inner.cdf(self.beta * x - self.gamma)
    }
    fn atoms(&self) -> Vec<f64> {
        self.inner.atoms().into_iter().map(|a| (a + self.gamma) / self.beta).collect()
    }
    fn sup(&self) -> f64 {
        self.inner.sup()
    }
    fn describe(&self) -> String {
        format!("{}({}x-{})", self.inner.describe(), self.beta, self.gamma)
    }
}

/// A closure with a label. Jump points may be supplied for quadrature.
pub struct FnLaw<F> {
    pub f: F,
    pub atoms: Vec<f64>,
    pub sup: f64,
    pub label: String,
}

impl<F: Fn(f64) -> f64> FnLaw<F> {
    pub fn new(label: impl Into<String>, f: F) -> Self {
        FnLaw { f, atoms: Vec::new(), sup: 1.0, label: label.into() }
    }
}

impl<F: Fn(f64) -> f64> LimitLaw for FnLaw<F> {
    fn cdf(&self, x: f64) -> f64 {
        (self.f)(x)
    }
    fn atoms(&self) -> Vec<f64> {
        self.atoms.clone()
    }
    fn sup(&self) -> f64 {
        self.sup
    }
    fn describe(&self) -> String {
        self.label.clone()
    }
}

impl<G: LimitLaw + ?Sized> LimitLaw for &G {
    fn cdf(&self, x: f64) -> f64 {
        (**self).cdf(x)
    }
    fn atoms(&self) -> Vec<f64> {
        (**self).atoms()
    }
    fn sup(&self) -> f64 {
        (**self).sup()
    }
    fn describe(&self) -> String {
        (**self).describe()
    }
}

/// `P(|X| <= x)` for standard normal `X`; zero for `x <= 0`.
pub fn half_normal_cdf(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x.is_infinite() {
        1.0
    } else {
        erf(x / SQRT_2)
    }
}

/// `F(x) = P((|X| - E|X|)/sd(|X|) <= x)`.
pub fn standardized_f(x: f64) -> f64 {
    half_normal_cdf(x * (1.0 - FRAC_2_PI).sqrt() + FRAC_2_PI.sqrt())
}

/// `E|X| / sd(|X|) = sqrt(2/(π-2))`.
pub fn phi_constant() -> f64 {
    (2.0 / (PI - 2.0)).sqrt()
}

/// Mean and standard deviation of `|X|`.
pub fn half_normal_moments() -> (f64, f64) {
    (FRAC_2_PI.sqrt(), (1.0 - FRAC_2_PI).sqrt())
}
