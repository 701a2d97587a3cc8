use serde::Serialize;

use crate::rational::binomial;

/// Betti numbers `b_0, …, b_k` of a named space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BettiProfile {
    pub name: String,
    pub betti: Vec<u64>,
}

impl BettiProfile {
    pub fn new(name: impl Into<String>, betti: Vec<u64>) -> Self {
        Self {
            name: name.into(),
            betti,
        }
    }

    /// `b_i`, zero past the end of the profile.
    pub fn b(&self, i: usize) -> u64 {
        self.betti.get(i).copied().unwrap_or(0)
    }

    /// Complex torus of dimension `g`: `b_j = binomial(2g, j)`.
    pub fn complex_torus(g: u32) -> Self {
        let two_g = 2 * u64::from(g);
        let betti = (0..=two_g)
            .map(|j| u64::try_from(binomial(two_g, j)).expect("torus Betti numbers fit in u64"))
            .collect();
        Self::new(format!("complex torus of dimension {g}"), betti)
    }

    /// A 2-sphere with two points identified: `(1, 1, 1)`.
    pub fn pinched_sphere() -> Self {
        Self::new("sphere with two points identified", vec![1, 1, 1])
    }

    pub fn point() -> Self {
        Self::new("point", vec![1])
    }
}

/// Künneth-type bound `Σ_{i+j=q} b_i(fiber) · b_j(base)` on `dim H^q` of
/// the total space.
pub fn leray_product_bound(fiber: &BettiProfile, base: &BettiProfile, q: usize) -> u64 {
    (0..=q).map(|i| fiber.b(i) * base.b(q - i)).sum()
}

/// `dim H²` of a tubular pair around a smooth divisor: by excision and the
/// Thom isomorphism it equals `dim H⁰` of the divisor, the number of its
/// irreducible components.
pub fn thom_excision(components: u64) -> u64 {
    components
}

/// General degree: `H^i(pair) ≅ H^{i-2}(divisor)`, zero for `i < 2`.
pub fn thom_shift(divisor: &BettiProfile, degree: usize) -> u64 {
    degree.checked_sub(2).map_or(0, |i| divisor.b(i))
}
