//! Polynomials with rational coefficients, stored in ascending powers.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::{to_canonical_string, Rational};

/// `f(n) = sum c_i n^i` with `coefficients[i] = c_i`.
///
/// Trailing zero coefficients are kept when they were pinned on purpose, so the stored length
/// reflects the declared degree. Equality ignores them.
#[derive(Debug, Clone, Eq, Default)]
pub struct RationalPolynomial {
    coefficients: Vec<Rational>,
}

impl PartialEq for RationalPolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.trimmed() == other.trimmed()
    }
}

impl RationalPolynomial {
    pub fn new(coefficients: Vec<Rational>) -> Self {
        RationalPolynomial { coefficients }
    }

    pub fn zero() -> Self {
        RationalPolynomial::default()
    }

    pub fn from_ints(ascending: &[i64]) -> Self {
        RationalPolynomial::new(
            ascending
                .iter()
                .map(|&c| Rational::from_integer(c.into()))
                .collect(),
        )
    }

    /// `n`
    pub fn identity() -> Self {
        RationalPolynomial::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn into_coefficients(self) -> Vec<Rational> {
        self.coefficients
    }

    /// `c_i`, zero beyond the stored length.
    pub fn coefficient(&self, i: usize) -> Rational {
        self.coefficients
            .get(i)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    fn trimmed(&self) -> &[Rational] {
        let len = self
            .coefficients
            .iter()
            .rposition(|c| !c.is_zero())
            .map_or(0, |i| i + 1);
        &self.coefficients[..len]
    }

    /// Declared degree: highest stored index. `None` for the empty (zero) polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    /// Highest index with a nonzero coefficient.
    pub fn effective_degree(&self) -> Option<usize> {
        self.trimmed().len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.trimmed().is_empty()
    }

    pub fn trim(mut self) -> Self {
        let len = self.trimmed().len();
        self.coefficients.truncate(len);
        self
    }

    /// Horner evaluation.
    pub fn evaluate(&self, n: &Rational) -> Rational {
        self.coefficients
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * n + c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coefficients.len().max(other.coefficients.len());
        RationalPolynomial::new(
            (0..len)
                .map(|i| self.coefficient(i) + other.coefficient(i))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.coefficients.is_empty() || other.coefficients.is_empty() {
            return RationalPolynomial::zero();
        }
        let mut out =
            vec![Rational::zero(); self.coefficients.len() + other.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            for (j, b) in other.coefficients.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RationalPolynomial::new(out)
    }

    /// `self(inner(n))`.
    pub fn compose(&self, inner: &Self) -> Self {
        self.coefficients
            .iter()
            .rev()
            .fold(RationalPolynomial::zero(), |acc, c| {
                acc.mul(inner)
                    .add(&RationalPolynomial::new(vec![c.clone()]))
            })
            .trim()
    }

    /// Renders in descending powers using `var`, e.g. `-1/924 n^3 + 5/1232 n^2 - 35/176`.
    pub fn display_with(&self, var: char) -> String {
        let mut out = String::new();
        for (power, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let magnitude = c.abs();
            let show_magnitude = power == 0 || !magnitude.is_one();
            if show_magnitude {
                out.push_str(&to_canonical_string(&magnitude));
            }
            if power > 0 {
                if show_magnitude {
                    out.push(' ');
                }
                out.push(var);
                if power > 1 {
                    out.push_str(&format!("^{power}"));
                }
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Display for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with('n'))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenominatorProfile {
    /// Denominators of the non-integer coefficients, highest power first.
    pub denominators: Vec<BigInt>,
    pub gcd: BigInt,
    pub lcm: BigInt,
    pub distinct_count: usize,
}

/// Integer coefficients are left out; an all-integer polynomial gives `gcd = lcm = 1`.
pub fn denominator_profile(f: &RationalPolynomial) -> DenominatorProfile {
    let denominators: Vec<BigInt> = f
        .coefficients()
        .iter()
        .rev()
        .filter(|c| !c.is_integer())
        .map(|c| c.denom().clone())
        .collect();
    let (gcd, lcm) = match denominators.split_first() {
        None => (BigInt::one(), BigInt::one()),
        Some((first, rest)) => rest
            .iter()
            .fold((first.clone(), first.clone()), |(g, l), d| {
                (g.gcd(d), l.lcm(d))
            }),
    };
    let mut distinct = denominators.clone();
    distinct.sort();
    distinct.dedup();
    DenominatorProfile {
        distinct_count: distinct.len(),
        denominators,
        gcd,
        lcm,
    }
}
