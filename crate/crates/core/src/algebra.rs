//! The function algebra `span{x^k, |x|·x^k}` over the rationals.
//!
//! Every element splits uniquely as `P(x) + |x|·R(x)` with polynomials `P`
//! and `R`. The element is classically smooth exactly when `R = 0`, so the
//! residue `R` is the complete obstruction to smoothness. All kinks sit at
//! the origin.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::{format_rational, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AtomKind {
    /// `x^k`
    Mono,
    /// `|x|·x^k`
    AbsMono,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Atom {
    pub kind: AtomKind,
    pub degree: u32,
}

impl Atom {
    pub const fn mono(degree: u32) -> Self {
        Atom { kind: AtomKind::Mono, degree }
    }

    pub const fn abs_mono(degree: u32) -> Self {
        Atom { kind: AtomKind::AbsMono, degree }
    }

    pub fn is_smooth(self) -> bool {
        self.kind == AtomKind::Mono
    }

    /// Product of two atoms; `|x|·|x| = x^2` closes the table.
    pub fn times(self, other: Atom) -> Atom {
        use AtomKind::*;
        let d = self.degree + other.degree;
        match (self.kind, other.kind) {
            (Mono, Mono) => Atom::mono(d),
            (Mono, AbsMono) | (AbsMono, Mono) => Atom::abs_mono(d),
            (AbsMono, AbsMono) => Atom::mono(d + 2),
        }
    }

    pub fn eval(self, x: &Rational) -> Rational {
        let p = num_traits::pow::pow(x.clone(), self.degree as usize);
        match self.kind {
            AtomKind::Mono => p,
            AtomKind::AbsMono => x.abs() * p,
        }
    }
}

/// A polynomial with rational coefficients, stored sparsely by degree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    coeffs: BTreeMap<u32, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(degree: u32, coeff: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(degree, coeff);
        p
    }

    pub fn from_coeffs<I: IntoIterator<Item = (u32, Rational)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (d, c) in terms {
            p.add_term(d, c);
        }
        p
    }

    fn add_term(&mut self, degree: u32, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(degree).or_insert_with(Rational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.coeffs.remove(&degree);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn coeff(&self, degree: u32) -> Rational {
        self.coeffs.get(&degree).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &Rational)> {
        self.coeffs.iter().map(|(d, c)| (*d, c))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_coeffs(self.terms().map(|(d, a)| (d, a * c)))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (d, c) in other.terms() {
            out.add_term(d, c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                out.add_term(a + b, ca * cb);
            }
        }
        out
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.terms()
            .map(|(d, c)| c * num_traits::pow::pow(x.clone(), d as usize))
            .fold(Rational::zero(), |acc, t| acc + t)
    }

    /// The polynomial as a (smooth) element of the function algebra.
    pub fn to_expr(&self) -> FunctionExpr {
        FunctionExpr::from_terms(self.terms().map(|(d, c)| (Atom::mono(d), c.clone())))
    }
}

/// An element of the function algebra in canonical form: a sorted map from
/// atoms to non-zero rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FunctionExpr {
    terms: BTreeMap<Atom, Rational>,
}

impl FunctionExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(Atom::mono(0), c)
    }

    pub fn term(atom: Atom, coeff: Rational) -> Self {
        Self::from_terms([(atom, coeff)])
    }

    /// `x^k`
    pub fn x_pow(k: u32) -> Self {
        Self::term(Atom::mono(k), Rational::one())
    }

    /// `|x|·x^k`
    pub fn abs_x_pow(k: u32) -> Self {
        Self::term(Atom::abs_mono(k), Rational::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (Atom, Rational)>>(terms: I) -> Self {
        let mut e = Self::zero();
        for (a, c) in terms {
            e.add_term(a, c);
        }
        e
    }

    /// Reassembles `smooth(x) + |x|·residue(x)`.
    pub fn from_parts(smooth: &Polynomial, residue: &Polynomial) -> Self {
        Self::from_terms(
            smooth
                .terms()
                .map(|(d, c)| (Atom::mono(d), c.clone()))
                .chain(residue.terms().map(|(d, c)| (Atom::abs_mono(d), c.clone()))),
        )
    }

    fn add_term(&mut self, atom: Atom, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(atom).or_insert_with(Rational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&atom);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Atom, &Rational)> {
        self.terms.iter().map(|(a, c)| (*a, c))
    }

    pub fn coeff(&self, atom: Atom) -> Rational {
        self.terms.get(&atom).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(|a| a.degree).max()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_terms(self.terms().map(|(a, k)| (a, k * c)))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, c) in other.terms() {
            out.add_term(a, c.clone());
        }
        out
    }

    pub fn multiply(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                out.add_term(a.times(b), ca * cb);
            }
        }
        out
    }

    /// Coefficients of the `|x|·x^k` part, keyed by `k`.
    pub fn singular_residue(&self) -> Polynomial {
        Polynomial::from_coeffs(
            self.terms().filter(|(a, _)| a.kind == AtomKind::AbsMono).map(|(a, c)| (a.degree, c.clone())),
        )
    }

    /// The polynomial part `P` of `P(x) + |x|·R(x)`.
    pub fn smooth_part(&self) -> Polynomial {
        Polynomial::from_coeffs(
            self.terms().filter(|(a, _)| a.kind == AtomKind::Mono).map(|(a, c)| (a.degree, c.clone())),
        )
    }

    pub fn is_smooth(&self) -> bool {
        self.terms.keys().all(|a| a.is_smooth())
    }

    /// `x ↦ f(c·x)`. Uses `|c·x| = |c|·|x|`.
    pub fn compose_scale(&self, c: &Rational) -> Self {
        Self::from_terms(self.terms().map(|(a, k)| {
            let mut factor = num_traits::pow::pow(c.clone(), a.degree as usize);
            if a.kind == AtomKind::AbsMono {
                factor *= c.abs();
            }
            (a, k * factor)
        }))
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.terms().map(|(a, c)| c * a.eval(x)).fold(Rational::zero(), |acc, t| acc + t)
    }
}

impl Add for &FunctionExpr {
    type Output = FunctionExpr;
    fn add(self, rhs: &FunctionExpr) -> FunctionExpr {
        FunctionExpr::add(self, rhs)
    }
}

impl Sub for &FunctionExpr {
    type Output = FunctionExpr;
    fn sub(self, rhs: &FunctionExpr) -> FunctionExpr {
        FunctionExpr::add(self, &-rhs)
    }
}

impl Mul for &FunctionExpr {
    type Output = FunctionExpr;
    fn mul(self, rhs: &FunctionExpr) -> FunctionExpr {
        self.multiply(rhs)
    }
}

impl Neg for &FunctionExpr {
    type Output = FunctionExpr;
    fn neg(self) -> FunctionExpr {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let power = match self.degree {
            0 => None,
            1 => Some("x".to_string()),
            k => Some(format!("x^{k}")),
        };
        match (self.kind, power) {
            (AtomKind::Mono, None) => write!(f, "1"),
            (AtomKind::Mono, Some(p)) => write!(f, "{p}"),
            (AtomKind::AbsMono, None) => write!(f, "abs(x)"),
            (AtomKind::AbsMono, Some(p)) => write!(f, "abs(x)*{p}"),
        }
    }
}

/// Prints in the text syntax accepted by [`crate::parse::parse_expr`].
impl fmt::Display for FunctionExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (atom, c)) in self.terms().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mag = c.abs();
            let is_const = atom == Atom::mono(0);
            if is_const {
                write!(f, "{}", format_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{atom}")?;
            } else {
                write!(f, "{}*{atom}", format_rational(&mag))?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, ratio};

    fn abs() -> FunctionExpr {
        FunctionExpr::abs_x_pow(0)
    }

    fn x() -> FunctionExpr {
        FunctionExpr::x_pow(1)
    }

    #[test]
    fn addition_examples() {
        let s = &abs() + &x();
        assert_eq!(s.coeff(Atom::abs_mono(0)), rat(1));
        assert_eq!(s.coeff(Atom::mono(1)), rat(1));

        let two_abs = abs().scale(&rat(2));
        assert!((&two_abs + &two_abs.scale(&rat(-1))).is_zero());

        let x2 = FunctionExpr::x_pow(2);
        let lhs = &(&x2 + &FunctionExpr::abs_x_pow(1)) + &x2;
        let expected = FunctionExpr::from_terms([(Atom::mono(2), rat(2)), (Atom::abs_mono(1), rat(1))]);
        assert_eq!(lhs, expected);
    }

    #[test]
    fn multiplication_table() {
        assert_eq!(&abs() * &abs(), FunctionExpr::x_pow(2));
        assert_eq!(&abs() * &x(), FunctionExpr::abs_x_pow(1));
        let a = &x() + &abs();
        let b = &x() - &abs();
        assert!((&a * &b).is_zero());
    }

    #[test]
    fn residue_examples() {
        let p = FunctionExpr::x_pow(5).scale(&rat(3));
        assert!(p.singular_residue().is_zero());

        let e = &abs().scale(&rat(2)) + &FunctionExpr::x_pow(2);
        assert_eq!(e.singular_residue(), Polynomial::monomial(0, rat(2)));

        let prod = &abs() * &(&x() + &abs());
        assert_eq!(prod.singular_residue(), Polynomial::monomial(1, rat(1)));
        assert_eq!(prod.smooth_part(), Polynomial::monomial(2, rat(1)));
    }

    #[test]
    fn smoothness_examples() {
        assert!(FunctionExpr::x_pow(3).is_smooth());
        assert!(!abs().is_smooth());
        assert!((&abs() * &abs()).is_smooth());
    }

    #[test]
    fn compose_scale_examples() {
        assert_eq!(abs().compose_scale(&rat(-2)), abs().scale(&rat(2)));
        assert_eq!(FunctionExpr::x_pow(2).compose_scale(&rat(3)), FunctionExpr::x_pow(2).scale(&rat(9)));
        assert_eq!(FunctionExpr::abs_x_pow(1).compose_scale(&rat(-1)), FunctionExpr::abs_x_pow(1).scale(&rat(-1)));
    }

    #[test]
    fn compose_scale_matches_evaluation() {
        let f = FunctionExpr::from_terms([
            (Atom::abs_mono(3), ratio(-7, 3)),
            (Atom::mono(2), rat(5)),
            (Atom::abs_mono(0), rat(1)),
        ]);
        let c = ratio(-3, 2);
        for t in [-2, -1, 0, 1, 5] {
            let t = rat(t);
            assert_eq!(f.compose_scale(&c).eval(&t), f.eval(&(&c * &t)));
        }
    }

    #[test]
    fn display_forms() {
        let e = FunctionExpr::from_terms([(Atom::mono(2), rat(3)), (Atom::abs_mono(1), ratio(-1, 2))]);
        assert_eq!(e.to_string(), "3*x^2 - 1/2*abs(x)*x");
        assert_eq!(FunctionExpr::constant(rat(-4)).to_string(), "-4");
        assert_eq!(FunctionExpr::zero().to_string(), "0");
    }
}
