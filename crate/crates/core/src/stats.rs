//! Mergeable running moments (Welford updates, Chan merge).

use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Moments<T> {
    n: u64,
    mean: T,
    m2: T,
}

impl<T: Real> Default for Moments<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> Moments<T> {
    pub fn new() -> Self {
        Self {
            n: 0,
            mean: T::zero(),
            m2: T::zero(),
        }
    }

    pub fn push(&mut self, x: T) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean = self.mean + delta / T::lit(self.n as f64);
        self.m2 = self.m2 + delta * (x - self.mean);
    }

    /// Combines two disjoint samples. Constant samples stay exactly constant.
    pub fn merge(&self, other: &Self) -> Self {
        if self.n == 0 {
            return *other;
        }
        if other.n == 0 {
            return *self;
        }
        let n = self.n + other.n;
        let (na, nb, nt) = (
            T::lit(self.n as f64),
            T::lit(other.n as f64),
            T::lit(n as f64),
        );
        let delta = other.mean - self.mean;
        Self {
            n,
            mean: self.mean + delta * (nb / nt),
            m2: self.m2 + other.m2 + delta * delta * (na * nb / nt),
        }
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> T {
        self.mean
    }

    /// Unbiased sample variance; zero below two observations.
    pub fn sample_variance(&self) -> T {
        if self.n < 2 {
            return T::zero();
        }
        (self.m2 / T::lit((self.n - 1) as f64)).max(T::zero())
    }

    pub fn sample_std(&self) -> T {
        self.sample_variance().sqrt()
    }

    /// Sample standard deviation over `√n`.
    pub fn standard_error(&self) -> T {
        if self.n == 0 {
            return T::zero();
        }
        self.sample_std() / T::lit(self.n as f64).sqrt()
    }
}
