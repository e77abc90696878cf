//! The spin-flip group acting on configurations and on energy tables.
//!
//! A configuration index has bit `s` set when spin `s+1` is `-1`, so the
//! coordinatewise product of configurations is XOR of indices and the
//! all-plus configuration is the identity `0`.

use serde::{Deserialize, Serialize};

use crate::error::{EnvError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpinGroupElement(pub u32);

impl SpinGroupElement {
    pub const IDENTITY: Self = Self(0);

    /// The configuration with only spin `i` (0-based) equal to `-1`.
    pub fn flip(i: usize) -> Self {
        Self(1 << i)
    }

    /// `(sigma . tau)_i = sigma_i tau_i`.
    pub fn compose(self, other: Self) -> Self {
        Self(self.0 ^ other.0)
    }

    pub fn spins(self, n: usize) -> Vec<i8> {
        (0..n).map(|s| if self.0 >> s & 1 == 1 { -1 } else { 1 }).collect()
    }
}

/// `(sigma . h)(sigma') = h(sigma . sigma')`.
pub fn act(sigma: SpinGroupElement, h: &[f64], n: usize) -> Result<Vec<f64>> {
    if h.len() != 1usize << n {
        return Err(EnvError::DimensionMismatch { n, got: h.len() });
    }
    if sigma.0 >> n != 0 {
        return Err(EnvError::InvalidArgument(format!("group element {} has bits above N = {n}", sigma.0)));
    }
    Ok((0..h.len() as u32).map(|x| h[(x ^ sigma.0) as usize]).collect())
}

/// A translated table `sigma . h`, read without copying.
#[derive(Debug, Clone, Copy)]
pub struct Translated<'a> {
    pub base: &'a [f64],
    pub sigma: SpinGroupElement,
}

impl Translated<'_> {
    pub fn get(&self, at: u32) -> f64 {
        self.base[(at ^ self.sigma.0) as usize]
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn to_vec(&self) -> Vec<f64> {
        (0..self.base.len() as u32).map(|x| self.get(x)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_spin_table() {
        // Indices: 0 = (+,+), 1 = (-,+), 2 = (+,-), 3 = (-,-).
        let h = [10.0, 20.0, 30.0, 40.0];
        assert_eq!(act(SpinGroupElement(1), &h, 2).unwrap(), vec![20.0, 10.0, 40.0, 30.0]);
        assert_eq!(act(SpinGroupElement(2), &h, 2).unwrap(), vec![30.0, 40.0, 10.0, 20.0]);
        assert_eq!(act(SpinGroupElement(3), &h, 2).unwrap(), vec![40.0, 30.0, 20.0, 10.0]);
        assert_eq!(act(SpinGroupElement::IDENTITY, &h, 2).unwrap(), h.to_vec());
    }

    #[test]
    fn translated_view_matches_act() {
        let h: Vec<f64> = (0..8).map(|x| x as f64 * 1.5 - 3.0).collect();
        let s = SpinGroupElement(5);
        assert_eq!(Translated { base: &h, sigma: s }.to_vec(), act(s, &h, 3).unwrap());
    }

    #[test]
    fn flips_and_spins() {
        assert_eq!(SpinGroupElement::flip(2).spins(3), vec![1, 1, -1]);
        assert_eq!(SpinGroupElement::flip(0).compose(SpinGroupElement::flip(0)), SpinGroupElement::IDENTITY);
    }

    #[test]
    fn rejects_mismatched_input() {
        assert!(act(SpinGroupElement(0), &[0.0; 3], 2).is_err());
        assert!(act(SpinGroupElement(4), &[0.0; 4], 2).is_err());
    }
}
