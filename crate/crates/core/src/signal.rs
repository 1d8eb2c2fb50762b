//! Complex signals on Z_L and time-frequency shifts.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

/// A complex vector indexed modulo its length.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    values: Vec<Complex64>,
}

impl Signal {
    pub fn new(values: Vec<Complex64>) -> Self {
        Self { values }
    }

    pub fn zeros(len: usize) -> Self {
        Self { values: vec![Complex64::new(0.0, 0.0); len] }
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self { values: values.iter().map(|&x| Complex64::new(x, 0.0)).collect() }
    }

    /// Unit impulse at `at`.
    pub fn delta(len: usize, at: usize) -> Self {
        let mut s = Self::zeros(len);
        s.values[at % len] = Complex64::new(1.0, 0.0);
        s
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// Value at `l mod L`, accepting negative indices.
    pub fn at(&self, l: i64) -> Complex64 {
        self.values[l.rem_euclid(self.len() as i64) as usize]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// ⟨self, other⟩ = Σ self(l)·conj(other(l)).
    pub fn inner(&self, other: &Signal) -> Complex64 {
        assert_eq!(self.len(), other.len());
        self.values.iter().zip(&other.values).map(|(x, y)| x * y.conj()).sum()
    }

    pub fn scale(&self, t: Complex64) -> Signal {
        Signal::new(self.values.iter().map(|z| z * t).collect())
    }

    pub fn scale_real(&self, t: f64) -> Signal {
        Signal::new(self.values.iter().map(|z| z * t).collect())
    }

    pub fn normalized(&self) -> Signal {
        self.scale_real(1.0 / self.norm())
    }

    /// ‖self − other‖₂.
    pub fn distance(&self, other: &Signal) -> f64 {
        assert_eq!(self.len(), other.len());
        self.values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| (x - y).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Distance between the unit-normalized versions.
    pub fn normalized_distance(&self, other: &Signal) -> f64 {
        self.normalized().distance(&other.normalized())
    }

    /// l ↦ self(−l).
    pub fn reflect(&self) -> Signal {
        let len = self.len() as i64;
        Signal::new((0..len).map(|l| self.at(-l)).collect())
    }

    pub fn max_abs_imag(&self) -> f64 {
        self.values.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    /// e^{2πi k l / L} · self(l − j).
    pub fn tf_shift(&self, j: i64, k: i64) -> Signal {
        let len = self.len() as i64;
        let k = k.rem_euclid(len);
        Signal::new(
            (0..len)
                .map(|l| {
                    let phase = 2.0 * PI * ((k * l) % len) as f64 / len as f64;
                    Complex64::from_polar(1.0, phase) * self.at(l - j)
                })
                .collect(),
        )
    }
}

/// Free-function form of [`Signal::tf_shift`].
pub fn tf_shift(g: &Signal, j: i64, k: i64) -> Signal {
    g.tf_shift(j, k)
}

impl From<Vec<Complex64>> for Signal {
    fn from(values: Vec<Complex64>) -> Self {
        Self::new(values)
    }
}

impl Add for &Signal {
    type Output = Signal;
    fn add(self, rhs: &Signal) -> Signal {
        assert_eq!(self.len(), rhs.len());
        Signal::new(self.values.iter().zip(&rhs.values).map(|(x, y)| x + y).collect())
    }
}

impl Sub for &Signal {
    type Output = Signal;
    fn sub(self, rhs: &Signal) -> Signal {
        assert_eq!(self.len(), rhs.len());
        Signal::new(self.values.iter().zip(&rhs.values).map(|(x, y)| x - y).collect())
    }
}

impl Mul<f64> for &Signal {
    type Output = Signal;
    fn mul(self, t: f64) -> Signal {
        self.scale_real(t)
    }
}


#[cfg(test)]
mod tests {
    use super::testing::random_signal;
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_shift_is_identity() {
        let g = random_signal(30, 1);
        assert_eq!(g.tf_shift(0, 0), g);
    }

    #[test]
    fn shift_moves_impulse() {
        let g = Signal::delta(12, 0).tf_shift(5, 0);
        assert_eq!(g.values()[5], Complex64::new(1.0, 0.0));
    }

    proptest! {
        #[test]
        fn shift_is_unitary(seed in 0u64..1000, j in -100i64..100, k in -100i64..100) {
            let g = random_signal(36, seed);
            let h = g.tf_shift(j, k);
            prop_assert!((h.norm() - g.norm()).abs() < 1e-12 * g.norm());
        }

        #[test]
        fn commutation_phase(seed in 0u64..1000, j in -50i64..50, k in -50i64..50) {
            let len = 40;
            let g = random_signal(len, seed);
            let back = g.tf_shift(j, k).tf_shift(-j, -k);
            let phase = Complex64::from_polar(1.0, 2.0 * PI * (j * k) as f64 / len as f64);
            prop_assert!(back.distance(&g.scale(phase)) < 1e-12);
        }
    }
}
