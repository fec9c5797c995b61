//! Sequential sampling from conditional inclusion probabilities.

use num_bigint::{BigInt, RandBigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// Conditional inclusion probabilities p(i | J) = ℙ(i ∈ S | S ∩ [i−1] = J) over the
/// universe `0..universe()`. `decided[k]` records whether element k < i is in S.
pub trait MarginalOracle {
    fn universe(&self) -> usize;
    fn query(&mut self, i: usize, decided: &[bool]) -> Result<BigRational>;
}

/// Exact Bernoulli trial with rational success probability.
pub fn bernoulli<R: Rng + ?Sized>(p: &BigRational, rng: &mut R) -> Result<bool> {
    if p.is_negative() || p > &BigRational::one() {
        return Err(Error::BadProbability(p.to_string()));
    }
    if p.is_zero() {
        return Ok(false);
    }
    if p.is_one() {
        return Ok(true);
    }
    let den = p.denom().to_biguint().expect("positive denominator");
    let num = p.numer().to_biguint().expect("nonnegative numerator");
    Ok(rng.gen_biguint_below(&den) < num)
}

/// Decide the elements in order, including element i with probability p(i | decisions so far).
pub fn inductive_sample<O: MarginalOracle + ?Sized, R: Rng + ?Sized>(oracle: &mut O, rng: &mut R) -> Result<Vec<bool>> {
    let n = oracle.universe();
    let mut decided = Vec::with_capacity(n);
    for i in 0..n {
        let p = oracle.query(i, &decided)?;
        decided.push(bernoulli(&p, rng)?);
    }
    Ok(decided)
}

/// Marginals of an explicitly listed distribution (weights need not be normalised).
#[derive(Clone, Debug)]
pub struct EnumeratedOracle {
    universe: usize,
    support: Vec<(Vec<bool>, BigRational)>,
}

impl EnumeratedOracle {
    pub fn new(universe: usize, support: Vec<(Vec<bool>, BigRational)>) -> Result<Self> {
        if support.iter().any(|(s, w)| s.len() != universe || w.is_negative()) {
            return Err(Error::InvalidInput("support sets must match the universe and weights be nonnegative".into()));
        }
        if support.iter().all(|(_, w)| w.is_zero()) {
            return Err(Error::EmptySupport("enumerated oracle".into()));
        }
        Ok(EnumeratedOracle { universe, support })
    }

    /// Uniform distribution over the given sets.
    pub fn uniform(universe: usize, sets: Vec<Vec<bool>>) -> Result<Self> {
        Self::new(universe, sets.into_iter().map(|s| (s, BigRational::one())).collect())
    }
}

impl MarginalOracle for EnumeratedOracle {
    fn universe(&self) -> usize {
        self.universe
    }

    fn query(&mut self, i: usize, decided: &[bool]) -> Result<BigRational> {
        let mut total = BigRational::zero();
        let mut with = BigRational::zero();
        for (s, w) in &self.support {
            if s[..decided.len()] == *decided {
                total += w;
                if s[i] {
                    with += w;
                }
            }
        }
        if total.is_zero() {
            return Err(Error::EmptySupport(format!("no support consistent with the first {i} decisions")));
        }
        Ok(with / total)
    }
}

pub(crate) fn ratio(num: &num_bigint::BigUint, den: &num_bigint::BigUint) -> Result<BigRational> {
    if den.is_zero() {
        return Err(Error::EmptySupport("conditioning event has zero mass".into()));
    }
    Ok(BigRational::new(BigInt::from_biguint(Sign::Plus, num.clone()), BigInt::from_biguint(Sign::Plus, den.clone())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::rat;
    use crate::samplers::seeded_rng;

    #[test]
    fn point_mass() {
        let mut o = EnumeratedOracle::uniform(3, vec![vec![true, false, true]]).unwrap();
        let mut rng = seeded_rng(1);
        for _ in 0..20 {
            assert_eq!(inductive_sample(&mut o, &mut rng).unwrap(), vec![true, false, true]);
        }
    }

    #[test]
    fn bernoulli_rejects_bad_probabilities() {
        let mut rng = seeded_rng(2);
        assert!(bernoulli(&rat(3, 2), &mut rng).is_err());
        assert!(bernoulli(&rat(-1, 2), &mut rng).is_err());
        assert!(!bernoulli(&rat(0, 1), &mut rng).unwrap());
        let hits = (0..10_000).filter(|_| bernoulli(&rat(1, 4), &mut rng).unwrap()).count();
        assert!((2300..2700).contains(&hits));
    }

    #[test]
    fn determinism() {
        let sets = vec![vec![true, false], vec![false, true], vec![true, true]];
        let mut o = EnumeratedOracle::uniform(2, sets).unwrap();
        let a: Vec<_> = {
            let mut rng = seeded_rng(9);
            (0..50).map(|_| inductive_sample(&mut o, &mut rng).unwrap()).collect()
        };
        let mut rng = seeded_rng(9);
        let b: Vec<_> = (0..50).map(|_| inductive_sample(&mut o, &mut rng).unwrap()).collect();
        assert_eq!(a, b);
    }
}
