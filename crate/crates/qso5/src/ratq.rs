//! The coefficient field `Q(q)`: rational functions in one indeterminate `q`
//! with rational-number coefficients, kept in a canonical reduced form so
//! that equality of values is syntactic equality of representations.
//!
//! Canonical form: `num/den` with `gcd(num, den) = 1`, `den` monic, and zero
//! stored as `0/1`. Laurent inputs (negative powers of `q`) are admitted by
//! clearing the `q`-powers into the fraction.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoeffError {
    #[error("division by zero in Q(q)")]
    DivisionByZero,
}

/// Dense univariate polynomial in `q` over the rationals.
///
/// Coefficients are stored lowest degree first with no trailing zeros; the
/// zero polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        QPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = QPoly { coeffs: vec![c] };
        p.trim();
        p
    }

    /// The monomial `c * q^k` with `k >= 0`.
    pub fn monomial(c: BigRational, k: usize) -> Self {
        if c.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = c;
        QPoly { coeffs }
    }

    pub fn q() -> Self {
        QPoly::monomial(BigRational::one(), 1)
    }

    pub fn from_int(n: i64) -> Self {
        QPoly::constant(BigRational::from_integer(BigInt::from(n)))
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Iterate `(degree, coefficient)` pairs of the nonzero terms, ascending.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &BigRational)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) + other.coeff(k));
        }
        let mut p = QPoly { coeffs };
        p.trim();
        p
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> QPoly {
        QPoly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs =
            vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] += a * b;
            }
        }
        let mut p = QPoly { coeffs };
        p.trim();
        p
    }

    pub fn scale(&self, c: &BigRational) -> QPoly {
        if c.is_zero() {
            return QPoly::zero();
        }
        QPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> QPoly {
        let mut base = self.clone();
        let mut acc = QPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Euclidean division. Panics if `div` is zero.
    pub fn div_rem(&self, div: &QPoly) -> (QPoly, QPoly) {
        assert!(!div.is_zero(), "polynomial division by zero");
        let dd = div.degree().unwrap();
        let lc = div.leading_coeff();
        let mut rem = self.clone();
        let mut quot = QPoly::zero();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let c = rem.leading_coeff() / lc.clone();
            let t = QPoly::monomial(c, rd - dd);
            quot = quot.add(&t);
            rem = rem.sub(&t.mul(div));
        }
        (quot, rem)
    }

    /// Exact division; panics if the remainder is nonzero.
    pub fn div_exact(&self, div: &QPoly) -> QPoly {
        let (q, r) = self.div_rem(div);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        let lc = self.leading_coeff();
        self.scale(&lc.recip())
    }

    /// Monic gcd, computed over `Z` with a primitive pseudo-remainder
    /// sequence. Plain Euclid over `Q` blows up the rational coefficients
    /// exponentially in the degree; keeping every remainder primitive
    /// bounds the growth.
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        if self.degree() == Some(0) || other.degree() == Some(0) {
            return QPoly::one();
        }
        let mut a = to_primitive_int(self);
        let mut b = to_primitive_int(other);
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        loop {
            if b.is_empty() {
                break;
            }
            let r = pseudo_rem(&a, &b);
            a = b;
            b = primitive_part(r);
        }
        let coeffs = a
            .into_iter()
            .map(BigRational::from_integer)
            .collect::<Vec<_>>();
        QPoly { coeffs }.monic()
    }
}

/// Clear denominators and divide by the integer content; result is a
/// primitive integer polynomial (lowest degree first, no trailing zeros).
fn to_primitive_int(p: &QPoly) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for c in &p.coeffs {
        lcm = num_integer::lcm(lcm, c.denom().clone());
    }
    let ints: Vec<BigInt> = p
        .coeffs
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect();
    primitive_part(ints)
}

fn primitive_part(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    if v.is_empty() {
        return v;
    }
    let mut content = BigInt::zero();
    for c in &v {
        content = num_integer::gcd(content, c.clone());
        if content.is_one() {
            break;
        }
    }
    if !content.is_one() {
        for c in &mut v {
            *c /= &content;
        }
    }
    v
}

/// Pseudo-remainder of integer polynomials: repeatedly kill the leading
/// term of `a` after scaling by `lc(b)`, staying inside `Z`.
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lcb = b.last().unwrap().clone();
    let mut r: Vec<BigInt> = a.to_vec();
    while r.len() > db {
        let lr = r.last().unwrap().clone();
        if lr.is_zero() {
            r.pop();
            continue;
        }
        let shift = r.len() - 1 - db;
        for c in r.iter_mut() {
            *c *= &lcb;
        }
        for (k, bc) in b.iter().enumerate() {
            r[shift + k] -= &lr * bc;
        }
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    r
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", poly_to_string(self))
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", poly_to_string(self))
    }
}

/// Canonical polynomial string: terms in descending degree, ASCII surface
/// syntax (`q^2 - 2*q + 1`). Parseable back by the expression front-end.
pub fn poly_to_string(p: &QPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    let mut first = true;
    for (k, c) in p.terms().collect::<Vec<_>>().into_iter().rev() {
        let neg = c.is_negative();
        let mag = c.abs();
        if first {
            if neg {
                out.push('-');
            }
            first = false;
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let qpart = match k {
            0 => None,
            1 => Some("q".to_string()),
            _ => Some(format!("q^{k}")),
        };
        match qpart {
            None => out.push_str(&mag.to_string()),
            Some(qs) => {
                if mag.is_one() {
                    out.push_str(&qs);
                } else {
                    out.push_str(&format!("{mag}*{qs}"));
                }
            }
        }
    }
    out
}

/// A rational function in `q`, always in canonical reduced form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatQ {
    num: QPoly,
    den: QPoly,
}

impl RatQ {
    pub fn zero() -> Self {
        RatQ {
            num: QPoly::zero(),
            den: QPoly::one(),
        }
    }

    pub fn one() -> Self {
        RatQ {
            num: QPoly::one(),
            den: QPoly::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        RatQ {
            num: QPoly::from_int(n),
            den: QPoly::one(),
        }
    }

    pub fn from_rational(c: BigRational) -> Self {
        RatQ {
            num: QPoly::constant(c),
            den: QPoly::one(),
        }
    }

    pub fn q() -> Self {
        RatQ::q_pow(1)
    }

    /// `q^k` for any integer `k`; negative powers land in the denominator.
    pub fn q_pow(k: i64) -> Self {
        if k >= 0 {
            RatQ {
                num: QPoly::monomial(BigRational::one(), k as usize),
                den: QPoly::one(),
            }
        } else {
            RatQ {
                num: QPoly::one(),
                den: QPoly::monomial(BigRational::one(), (-k) as usize),
            }
        }
    }

    /// Reduce `num/den` to canonical form.
    pub fn new(num: QPoly, den: QPoly) -> Result<Self, CoeffError> {
        if den.is_zero() {
            return Err(CoeffError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatQ::zero());
        }
        if den.degree() == Some(0) {
            let lc = den.leading_coeff().recip();
            return Ok(RatQ {
                num: num.scale(&lc),
                den: QPoly::one(),
            });
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g), den.div_exact(&g))
        };
        let lc = den.leading_coeff().recip();
        Ok(RatQ {
            num: num.scale(&lc),
            den: den.scale(&lc),
        })
    }

    /// Build from Laurent terms `(exponent, coefficient)` in `q`.
    pub fn from_laurent_terms(terms: &[(i64, BigRational)]) -> Self {
        let shift = terms
            .iter()
            .map(|(k, _)| *k)
            .min()
            .unwrap_or(0)
            .min(0);
        let mut num = QPoly::zero();
        for (k, c) in terms {
            num = num.add(&QPoly::monomial(c.clone(), (k - shift) as usize));
        }
        let den = QPoly::monomial(BigRational::one(), (-shift) as usize);
        RatQ::new(num, den).expect("q-power denominator is nonzero")
    }

    pub fn numerator(&self) -> &QPoly {
        &self.num
    }

    pub fn denominator(&self) -> &QPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the leading numerator coefficient is negative (the
    /// denominator is monic, so this is the sign of the value at large `q`).
    pub fn is_negative_leading(&self) -> bool {
        self.num.leading_coeff().is_negative()
    }

    /// Total degree of the canonical representation, used for pivot choice.
    pub fn complexity(&self) -> usize {
        self.num.degree().unwrap_or(0) + self.den.degree().unwrap_or(0)
    }

    pub fn checked_inv(&self) -> Result<RatQ, CoeffError> {
        if self.is_zero() {
            return Err(CoeffError::DivisionByZero);
        }
        RatQ::new(self.den.clone(), self.num.clone())
    }

    pub fn inv(&self) -> RatQ {
        self.checked_inv().expect("inverse of zero in Q(q)")
    }

    pub fn checked_div(&self, other: &RatQ) -> Result<RatQ, CoeffError> {
        Ok(self * &other.checked_inv()?)
    }

    /// Integer power; negative exponents require a nonzero base.
    pub fn pow(&self, k: i64) -> RatQ {
        let base = if k < 0 { self.inv() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = RatQ::one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        acc
    }
}

impl Add for &RatQ {
    type Output = RatQ;
    fn add(self, other: &RatQ) -> RatQ {
        // Reduce through gcd(den1, den2): the only common factors of the
        // resulting numerator and denominator divide it.
        let g = self.den.gcd(&other.den);
        let (da, db) = if g.is_one() {
            (self.den.clone(), other.den.clone())
        } else {
            (self.den.div_exact(&g), other.den.div_exact(&g))
        };
        let num = self.num.mul(&db).add(&other.num.mul(&da));
        let den = self.den.mul(&db);
        RatQ::new(num, den).expect("nonzero denominators")
    }
}

impl Sub for &RatQ {
    type Output = RatQ;
    fn sub(self, other: &RatQ) -> RatQ {
        self + &(-other)
    }
}

impl Mul for &RatQ {
    type Output = RatQ;
    fn mul(self, other: &RatQ) -> RatQ {
        if self.is_zero() || other.is_zero() {
            return RatQ::zero();
        }
        // Both operands are reduced, so only cross gcds can cancel.
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let n1 = if g1.is_one() { self.num.clone() } else { self.num.div_exact(&g1) };
        let d2 = if g1.is_one() { other.den.clone() } else { other.den.div_exact(&g1) };
        let n2 = if g2.is_one() { other.num.clone() } else { other.num.div_exact(&g2) };
        let d1 = if g2.is_one() { self.den.clone() } else { self.den.div_exact(&g2) };
        let num = n1.mul(&n2);
        let den = d1.mul(&d2);
        let lc = den.leading_coeff().recip();
        RatQ {
            num: num.scale(&lc),
            den: den.scale(&lc),
        }
    }
}

impl Div for &RatQ {
    type Output = RatQ;
    fn div(self, other: &RatQ) -> RatQ {
        self.checked_div(other).expect("division by zero in Q(q)")
    }
}

impl Neg for &RatQ {
    type Output = RatQ;
    fn neg(self) -> RatQ {
        RatQ {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for RatQ {
            type Output = RatQ;
            fn $method(self, other: RatQ) -> RatQ {
                $trait::$method(&self, &other)
            }
        }
    };
}
forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);
forward_owned_binop!(Div, div);

impl Neg for RatQ {
    type Output = RatQ;
    fn neg(self) -> RatQ {
        -&self
    }
}

impl fmt::Debug for RatQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RatQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", poly_to_string(&self.num));
        }
        let num_s = poly_to_string(&self.num);
        let num_wrapped = if self.num.terms().count() > 1 {
            format!("({num_s})")
        } else {
            num_s
        };
        let den_s = poly_to_string(&self.den);
        // A monic q-power denominator is safe unparenthesized; anything
        // else gets parens so the string reparses to the same value.
        let den_wrapped = if self.den.terms().count() == 1 {
            den_s
        } else {
            format!("({den_s})")
        };
        write!(f, "{num_wrapped}/{den_wrapped}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    /// `q^k` built directly, bypassing `RatQ::q_pow`, for independent checks.
    fn qp(k: i64) -> RatQ {
        RatQ::from_laurent_terms(&[(k, big(1))])
    }

    #[test]
    fn canonical_form_examples() {
        // (q^2 - 1, q^2 - 1) -> 1
        let p = QPoly::monomial(big(1), 2).sub(&QPoly::one());
        assert!(RatQ::new(p.clone(), p).unwrap().is_one());

        // (q^-2, 1) -> 1/q^2
        let r = RatQ::from_laurent_terms(&[(-2, big(1))]);
        assert_eq!(r, RatQ::q_pow(-2));
        assert_eq!(r.to_string(), "1/q^2");

        // (q - q^3, 1 + q^2) stays reduced with monic denominator.
        let num = QPoly::q().sub(&QPoly::monomial(big(1), 3));
        let den = QPoly::one().add(&QPoly::monomial(big(1), 2));
        let r = RatQ::new(num.clone(), den.clone()).unwrap();
        assert_eq!(r.numerator(), &num);
        assert_eq!(r.denominator(), &den);
        assert_eq!(r.to_string(), "(-q^3 + q)/(q^2 + 1)");
    }

    #[test]
    fn zero_denominator_is_an_error() {
        assert_eq!(
            RatQ::new(QPoly::one(), QPoly::zero()),
            Err(CoeffError::DivisionByZero)
        );
        assert!(RatQ::zero().checked_inv().is_err());
    }

    #[test]
    fn p2_two_displayed_forms_agree() {
        // (q^-1 + q^-3) / ((1 + q^-2)(1 - q^-2)^2) == q^3/(q^2 - 1)^2
        let lhs_num = &qp(-1) + &qp(-3);
        let one = RatQ::one();
        let f1 = &one + &qp(-2);
        let f2 = &one - &qp(-2);
        let lhs = &lhs_num / &(&f1 * &(&f2 * &f2));

        let den = QPoly::monomial(big(1), 2).sub(&QPoly::one());
        let rhs = RatQ::new(QPoly::monomial(big(1), 3), den.mul(&den)).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn k1_times_k2_is_frozen_value() {
        // k1 = (1 - q^2)/(q^3 + q), k2 = -q^-5 (1 + q^2)^2,
        // product expands to (q^4 - 1)/q^6.
        let one = RatQ::one();
        let q2 = RatQ::q_pow(2);
        let k1 = &(&one - &q2) / &(&RatQ::q_pow(3) + &RatQ::q());
        let sq = &(&one + &q2) * &(&one + &q2);
        let k2 = &(-&RatQ::q_pow(-5)) * &sq;
        let expect = &(&RatQ::q_pow(4) - &one) / &RatQ::q_pow(6);
        assert_eq!(&k1 * &k2, expect);
    }

    #[test]
    fn d_times_k2_telescopes() {
        // d[i] * k2 = 1 - q^-4i for i = 0..=20, with
        // d[i] = (q - q^3)(1 - q^-4i) / ((1 - q^-4)(1 + q^2)).
        let one = RatQ::one();
        let q2 = RatQ::q_pow(2);
        let sq = &(&one + &q2) * &(&one + &q2);
        let k2 = &(-&RatQ::q_pow(-5)) * &sq;
        let c = &(&RatQ::q() - &RatQ::q_pow(3)) / &(&(&one - &qp(-4)) * &(&one + &q2));
        for i in 0..=20i64 {
            let d_i = &c * &(&one - &qp(-4 * i));
            assert_eq!(&d_i * &k2, &one - &qp(-4 * i), "i = {i}");
        }
    }

    #[test]
    fn identities() {
        let a = &(&RatQ::q_pow(3) + &RatQ::from_int(2)) / &(&RatQ::q() - &RatQ::one());
        assert_eq!(&a + &RatQ::zero(), a);
        assert_eq!(&a * &RatQ::one(), a);
        assert_eq!(&a - &a, RatQ::zero());
        assert!((&a * &a.inv()).is_one());
    }

    #[test]
    fn display_roundtrips_through_canonical_constructor() {
        let r = &(&RatQ::q_pow(3) - &RatQ::q()) / &(&RatQ::q_pow(2) + &RatQ::one());
        assert_eq!(r.to_string(), "(q^3 - q)/(q^2 + 1)");
        let half = RatQ::from_rational(BigRational::new(BigInt::from(1), BigInt::from(2)));
        assert_eq!(half.to_string(), "1/2");
        assert_eq!((&half * &RatQ::q()).to_string(), "1/2*q");
    }

    fn arb_ratq() -> impl Strategy<Value = RatQ> {
        let coeffs = proptest::collection::vec(-5i64..=5, 1..=4);
        (coeffs.clone(), coeffs, 0u8..2).prop_map(|(n, d, flip)| {
            let mut num = QPoly::zero();
            for (k, c) in n.iter().enumerate() {
                num = num.add(&QPoly::monomial(big(*c), k));
            }
            let mut den = QPoly::zero();
            for (k, c) in d.iter().enumerate() {
                den = den.add(&QPoly::monomial(big(*c), k));
            }
            if den.is_zero() {
                den = QPoly::q().add(&QPoly::from_int(if flip == 0 { 1 } else { -1 }));
            }
            RatQ::new(num, den).unwrap()
        })
    }

    proptest! {
        #[test]
        fn field_axioms((a, b, c) in (arb_ratq(), arb_ratq(), arb_ratq())) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            if !a.is_zero() {
                prop_assert!((&a * &a.inv()).is_one());
            }
        }

        #[test]
        fn canonicalization_is_idempotent(a in arb_ratq()) {
            let again = RatQ::new(a.numerator().clone(), a.denominator().clone()).unwrap();
            prop_assert_eq!(again, a);
        }
    }
}
