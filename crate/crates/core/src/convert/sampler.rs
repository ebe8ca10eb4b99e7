//! Randomised orientation of a reduced graph given pair densities.
//!
//! For each unordered pair `i < j`: a positive double-edge density emits both
//! arcs; otherwise, if `d(i,j) + d(j,i) > 0`, the arc `i → j` is emitted with
//! probability `d(i,j) / (d(i,j) + d(j,i))` and `j → i` otherwise. Coin flips
//! are exact: a uniform integer below the reduced denominator is compared
//! with the numerator.

use num_bigint::{BigInt, RandBigInt};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Digraph;
use crate::random::{rng_from_seed, SeededRng};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairDensityMatrix {
    k: usize,
    #[serde(with = "crate::rational::vec_as_str")]
    density: Vec<Rational>,
    #[serde(with = "crate::rational::vec_as_str")]
    double: Vec<Rational>,
}

impl PairDensityMatrix {
    pub fn new(k: usize) -> Self {
        PairDensityMatrix {
            k,
            density: vec![Rational::zero(); k * k],
            double: vec![Rational::zero(); k * k],
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    fn index(&self, i: usize, j: usize) -> Result<usize> {
        for v in [i, j] {
            if v >= self.k {
                return Err(Error::VertexOutOfRange { vertex: v, n: self.k });
            }
        }
        if i == j {
            return Err(Error::SelfLoop(i));
        }
        Ok(i * self.k + j)
    }

    pub fn density(&self, i: usize, j: usize) -> &Rational {
        &self.density[i * self.k + j]
    }

    pub fn double_density(&self, i: usize, j: usize) -> &Rational {
        &self.double[i * self.k + j]
    }

    /// Sets the ordered-pair density `d(i, j)`.
    pub fn set_density(&mut self, i: usize, j: usize, value: Rational) -> Result<()> {
        let idx = self.index(i, j)?;
        self.density[idx] = value;
        Ok(())
    }

    /// Sets the (symmetric) double-edge density `d±(i, j)`.
    pub fn set_double_density(&mut self, i: usize, j: usize, value: Rational) -> Result<()> {
        let idx = self.index(i, j)?;
        self.double[j * self.k + i] = value.clone();
        self.double[idx] = value;
        Ok(())
    }

    /// Checks `0 <= d±(i,j) <= min(d(i,j), d(j,i)) <= 1` for every pair.
    pub fn validate(&self) -> Result<()> {
        for i in 0..self.k {
            for j in i + 1..self.k {
                let (a, b) = (self.density(i, j), self.density(j, i));
                let dd = self.double_density(i, j);
                let one = Rational::one();
                if a.is_negative() || b.is_negative() || *a > one || *b > one {
                    return Err(Error::InvalidParameters(format!(
                        "densities of pair ({i},{j}) must lie in [0,1]"
                    )));
                }
                if dd.is_negative() || dd > a.min(b) {
                    return Err(Error::InvalidParameters(format!(
                        "double density of pair ({i},{j}) must lie in [0, min(d(i,j), d(j,i))]"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Probability that the sampler emits `i → j`.
    pub fn arc_probability(&self, i: usize, j: usize) -> Rational {
        if self.double_density(i, j).is_positive() {
            return Rational::one();
        }
        let total = self.density(i, j) + self.density(j, i);
        if total.is_zero() {
            Rational::zero()
        } else {
            self.density(i, j) / total
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplerMode {
    #[default]
    Lenient,
    /// Refuse the single-arc branch, whose guarding condition is ambiguous.
    Strict,
}

/// `true` with probability exactly `p` for `p ∈ [0, 1]`.
fn bernoulli(rng: &mut SeededRng, p: &Rational) -> bool {
    if p.is_zero() {
        return false;
    }
    if p.is_one() {
        return true;
    }
    let denom = p.denom().magnitude();
    let draw = BigInt::from(rng.gen_biguint_below(denom));
    draw < *p.numer()
}

pub fn sample_reduced_digraph(m: &PairDensityMatrix, seed: u64, mode: SamplerMode) -> Result<Digraph> {
    m.validate()?;
    let mut rng = rng_from_seed(seed);
    let mut d = Digraph::new(m.k());
    for i in 0..m.k() {
        for j in i + 1..m.k() {
            if m.double_density(i, j).is_positive() {
                d.insert_arc(i, j);
                d.insert_arc(j, i);
                continue;
            }
            let total = m.density(i, j) + m.density(j, i);
            if total.is_zero() {
                continue;
            }
            if mode == SamplerMode::Strict {
                return Err(Error::StrictSamplerBranch(i, j));
            }
            if bernoulli(&mut rng, &(m.density(i, j) / total)) {
                d.insert_arc(i, j);
            } else {
                d.insert_arc(j, i);
            }
        }
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn double_density_emits_both_arcs() {
        let mut m = PairDensityMatrix::new(3);
        m.set_density(1, 2, ratio(3, 4)).unwrap();
        m.set_density(2, 1, ratio(1, 2)).unwrap();
        m.set_double_density(1, 2, ratio(1, 2)).unwrap();
        for seed in 0..20 {
            let d = sample_reduced_digraph(&m, seed, SamplerMode::Strict).unwrap();
            assert!(d.has_arc(1, 2) && d.has_arc(2, 1));
            assert_eq!(d.arc_count(), 2);
        }
    }

    #[test]
    fn one_sided_density_is_deterministic() {
        let mut m = PairDensityMatrix::new(3);
        m.set_density(1, 2, ratio(3, 10)).unwrap();
        for seed in 0..20 {
            let d = sample_reduced_digraph(&m, seed, SamplerMode::Lenient).unwrap();
            assert_eq!(d.arcs().collect::<Vec<_>>(), vec![(1, 2)]);
        }
        assert!(matches!(
            sample_reduced_digraph(&m, 0, SamplerMode::Strict),
            Err(Error::StrictSamplerBranch(1, 2))
        ));
    }

    #[test]
    fn zero_matrix_gives_empty_digraph() {
        let d = sample_reduced_digraph(&PairDensityMatrix::new(5), 1, SamplerMode::Strict).unwrap();
        assert_eq!(d.arc_count(), 0);
    }

    #[test]
    fn invalid_matrices_rejected() {
        let mut m = PairDensityMatrix::new(2);
        m.set_density(0, 1, ratio(1, 2)).unwrap();
        m.set_double_density(0, 1, ratio(1, 4)).unwrap();
        // d(1,0) = 0 < d±
        assert!(sample_reduced_digraph(&m, 0, SamplerMode::Lenient).is_err());
        let mut m = PairDensityMatrix::new(2);
        m.set_density(0, 1, ratio(3, 2)).unwrap();
        assert!(m.validate().is_err());
        assert!(m.set_density(0, 0, ratio(1, 2)).is_err());
        assert!(m.set_density(0, 2, ratio(1, 2)).is_err());
    }

    #[test]
    fn empirical_frequency_within_three_sigma() {
        let mut m = PairDensityMatrix::new(3);
        m.set_density(0, 1, ratio(1, 3)).unwrap();
        m.set_density(1, 0, ratio(2, 3)).unwrap();
        m.set_density(0, 2, ratio(1, 7)).unwrap();
        m.set_density(2, 0, ratio(1, 7)).unwrap();
        m.set_density(1, 2, ratio(5, 9)).unwrap();
        m.set_density(2, 1, ratio(5, 9)).unwrap();
        m.set_double_density(1, 2, ratio(1, 9)).unwrap();
        let trials = 10_000;
        let mut hits = [[0usize; 3]; 3];
        for seed in 0..trials {
            let d = sample_reduced_digraph(&m, seed, SamplerMode::Lenient).unwrap();
            for (u, v) in d.arcs() {
                hits[u][v] += 1;
            }
        }
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    continue;
                }
                let p = crate::rational::to_f64(&m.arc_probability(i, j));
                let mean = p * trials as f64;
                let sd = (trials as f64 * p * (1.0 - p)).sqrt();
                let got = hits[i][j] as f64;
                assert!((got - mean).abs() <= 3.0 * sd + 1e-9, "arc {i}->{j}: {got} vs {mean}±{sd}");
            }
        }
    }
}
