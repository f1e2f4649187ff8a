use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::Error;

/// Decimal inputs are rounded to this many millionths.
const DECIMAL_DENOMINATOR: u64 = 1_000_000;

/// A rational payout ratio `p/q` with `0 < p < q` in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RationalLambda {
    p: u64,
    q: u64,
}

impl RationalLambda {
    /// Reduces `p/q`; fails unless `0 < p/q < 1`.
    pub fn new(p: u64, q: u64) -> Result<Self, Error> {
        let invalid = |reason: &str| Error::Lambda {
            input: format!("{p}/{q}"),
            reason: reason.to_string(),
        };
        if q == 0 {
            return Err(invalid("zero denominator"));
        }
        if p == 0 || p >= q {
            return Err(invalid("must lie strictly between 0 and 1"));
        }
        let g = p.gcd(&q);
        Ok(RationalLambda { p: p / g, q: q / g })
    }

    pub fn numer(&self) -> u64 {
        self.p
    }

    pub fn denom(&self) -> u64 {
        self.q
    }

    pub fn to_f64(&self) -> f64 {
        self.p as f64 / self.q as f64
    }

    pub fn to_big_rational(&self) -> BigRational {
        BigRational::new(self.p.into(), self.q.into())
    }

    /// Nearest multiple of 10⁻⁶, reduced.
    pub fn from_decimal(x: f64) -> Result<Self, Error> {
        if !x.is_finite() {
            return Err(Error::Lambda {
                input: x.to_string(),
                reason: "not a finite number".into(),
            });
        }
        let scaled = (x * DECIMAL_DENOMINATOR as f64).round();
        let p = scaled
            .to_u64()
            .filter(|&p| p > 0 && p < DECIMAL_DENOMINATOR)
            .ok_or_else(|| Error::Lambda {
                input: x.to_string(),
                reason: "must lie strictly between 0 and 1".into(),
            })?;
        RationalLambda::new(p, DECIMAL_DENOMINATOR)
    }
}

impl Default for RationalLambda {
    fn default() -> Self {
        RationalLambda { p: 2, q: 7 }
    }
}

impl fmt::Display for RationalLambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

/// Accepts `"p/q"` or a decimal such as `"0.287643"`.
impl FromStr for RationalLambda {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let bad = |reason: &str| Error::Lambda {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        if let Some((p, q)) = s.split_once('/') {
            let p: u64 = p
                .trim()
                .parse()
                .map_err(|_| bad("numerator is not an integer"))?;
            let q: u64 = q
                .trim()
                .parse()
                .map_err(|_| bad("denominator is not an integer"))?;
            return RationalLambda::new(p, q).map_err(|_| bad("must be p/q with 0 < p < q"));
        }
        let x: f64 = s.parse().map_err(|_| bad("expected p/q or a decimal"))?;
        RationalLambda::from_decimal(x).map_err(|e| match e {
            Error::Lambda { reason, .. } => bad(&reason),
            other => other,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_to_lowest_terms() {
        let l = RationalLambda::new(4, 14).unwrap();
        assert_eq!((l.numer(), l.denom()), (2, 7));
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(RationalLambda::new(0, 3).is_err());
        assert!(RationalLambda::new(3, 3).is_err());
        assert!(RationalLambda::new(1, 0).is_err());
    }

    #[test]
    fn parses_fraction_and_decimal() {
        assert_eq!(
            "2/7".parse::<RationalLambda>().unwrap(),
            RationalLambda::new(2, 7).unwrap()
        );
        let l: RationalLambda = "0.287643".parse().unwrap();
        assert_eq!((l.numer(), l.denom()), (287_643, 1_000_000));
        let half: RationalLambda = "0.5".parse().unwrap();
        assert_eq!(half, RationalLambda::new(1, 2).unwrap());
        assert!("1.5".parse::<RationalLambda>().is_err());
        assert!("a/b".parse::<RationalLambda>().is_err());
        assert!("0.0000001".parse::<RationalLambda>().is_err());
    }
}
