//! Exact linear algebra for finite-dimensional diffeological vector spaces.
//!
//! Spaces are `R^n` carrying one of a small family of vector-space
//! diffeologies (fine, coarse, generated by one-variable kink plots, and the
//! constructions built from them: direct sums, tensor products, duals and
//! pushforwards along isomorphisms). Plot coordinates live in the function
//! algebra spanned by `x^k` and `|x|·x^k` with exact rational coefficients,
//! which makes every smoothness question in the fragment decidable.
//!
//! The [`oracle`] module is an independent floating-point classifier used to
//! cross-check the symbolic verdicts.

pub mod algebra;
pub mod bilinear;
pub mod error;
pub mod exec;
pub mod hom;
pub mod linalg;
pub mod oracle;
pub mod parse;
pub mod sample;
pub mod space;
pub mod spacefile;
pub mod tensor;
pub mod verify;

pub use algebra::{Atom, AtomKind, FunctionExpr, Polynomial};
pub use error::{Error, Result};
pub use exec::Exec;
pub use hom::{DualSpace, LinearMap, Verdict};
pub use linalg::{Matrix, Subspace};
pub use space::{DiffSpace, Diffeology, Membership, MembershipConfig, Plot};

use num_bigint::BigInt;
use num_rational::BigRational;

/// Exact rational scalar used everywhere outside the oracle.
pub type Rational = BigRational;

/// Integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num / den` as an exact rational. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p/q"` or `"n"` (optionally signed) into an exact rational.
///
/// Decimal points and exponents are rejected so that no float ever leaks
/// into the exact side.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::InvalidRational(text.to_string());
    if t.is_empty() || t.contains(['.', 'e', 'E']) {
        return Err(bad());
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den == BigInt::from(0) {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Renders a rational as `"p/q"` or `"n"`.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_text_round_trip() {
        for s in ["0", "-3", "7/2", "-1/12", "10"] {
            let q = parse_rational(s).unwrap();
            assert_eq!(format_rational(&q), s);
        }
        assert_eq!(parse_rational(" 4/8 ").unwrap(), ratio(1, 2));
    }

    #[test]
    fn rejects_floats_and_zero_denominators() {
        for s in ["1.5", "2e3", "1/0", "", "x"] {
            assert!(parse_rational(s).is_err(), "{s}");
        }
    }
}
