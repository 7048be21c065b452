//! Exact rationals used for every density, coefficient and certificate entry.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p/q` or an integer. Accepts ASCII `-` and the unicode minus sign.
pub fn parse_rational(token: &str) -> Result<Rational> {
    let bad = || Error::BadRational(token.to_string());
    let normalized = token.replace('\u{2212}', "-");
    let (num, den) = match normalized.split_once('/') {
        Some((p, q)) => (p, q),
        None => (normalized.as_str(), "1"),
    };
    if num.is_empty() || den.is_empty() || den.starts_with(['-', '+']) {
        return Err(bad());
    }
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// `p/q`, or `p` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(if r.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

/// Nearest fraction with the given denominator; ties round away from zero.
pub fn nearest_with_denominator(x: f64, denominator: &BigInt) -> Rational {
    let exact = Rational::from_float(x).unwrap_or_else(Rational::zero);
    let scaled = exact * Rational::from_integer(denominator.clone());
    Rational::new(scaled.round().to_integer(), denominator.clone())
}

/// Rationals brought to one common denominator, for fast exact dot products
/// with small integer weights.
#[derive(Clone, Debug)]
pub struct ScaledVector {
    den: BigInt,
    small: Option<Vec<i64>>,
    big: Vec<BigInt>,
}

impl ScaledVector {
    pub fn new(values: &[Rational]) -> Self {
        use num_integer::Integer;
        use num_traits::ToPrimitive;
        let den = values.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let big: Vec<BigInt> = values.iter().map(|v| v.numer() * (&den / v.denom())).collect();
        let small = big.iter().map(|b| b.to_i64().filter(|x| x.unsigned_abs() < 1 << 62)).collect();
        ScaledVector { den, small, big }
    }

    /// `sum_k weight_k * values[index_k] / divisor`.
    pub fn weighted_sum(&self, terms: impl Iterator<Item = (usize, i64)>, divisor: &BigInt) -> Rational {
        let total: BigInt = match &self.small {
            Some(small) => {
                let mut acc: i128 = 0;
                let mut spill = BigInt::zero();
                for (k, w) in terms {
                    let term = small[k] as i128 * w as i128;
                    match acc.checked_add(term) {
                        Some(v) => acc = v,
                        None => {
                            spill += BigInt::from(acc);
                            acc = term;
                        }
                    }
                }
                spill + BigInt::from(acc)
            }
            None => terms.map(|(k, w)| &self.big[k] * BigInt::from(w)).sum(),
        };
        Rational::new(total, &self.den * divisor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(parse_rational("-5/3").unwrap(), rat(-5, 3));
        assert_eq!(parse_rational("\u{2212}5/3").unwrap(), rat(-5, 3));
        assert_eq!(parse_rational("0/1").unwrap(), int(0));
        assert_eq!(parse_rational("4/6").unwrap(), rat(2, 3));
    }

    #[test]
    fn scaled_vector_matches_direct_sum() {
        let values = vec![rat(1, 3), rat(-5, 7), int(2), rat(3, 14)];
        let scaled = ScaledVector::new(&values);
        let terms = [(0, 4i64), (1, -2), (3, 9), (2, 1)];
        let direct: Rational = terms.iter().map(|&(k, w)| &values[k] * int(w)).sum::<Rational>() / int(5);
        assert_eq!(scaled.weighted_sum(terms.into_iter(), &BigInt::from(5)), direct);
        let huge = vec![Rational::new(BigInt::from(1) << 100, BigInt::from(3))];
        let scaled = ScaledVector::new(&huge);
        assert_eq!(scaled.weighted_sum([(0, 3)].into_iter(), &BigInt::one()), int(1) * Rational::from_integer(BigInt::from(1) << 100));
    }

    #[test]
    fn rejects_bad_tokens() {
        for bad in ["3/0", "", "/2", "1/", "a", "1/-2", "1.5", "1/2/3"] {
            assert!(parse_rational(bad).is_err(), "{bad} accepted");
        }
    }

    #[test]
    fn format_is_inverse_of_parse() {
        for r in [rat(-5, 3), int(0), int(12), rat(1, 4294967296)] {
            assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
        }
        assert_eq!(format_rational(&int(0)), "0");
    }

    #[test]
    fn nearest_fraction() {
        let d = BigInt::from(3);
        assert_eq!(nearest_with_denominator(0.333333, &d), rat(1, 3));
        assert_eq!(nearest_with_denominator(-0.9, &d), rat(-1, 1));
        assert_eq!(nearest_with_denominator(0.0, &d), int(0));
    }
}
