//! The exact coefficient tower: arbitrary-precision rationals, at most one
//! real quadratic extension `Q(sqrt(d))`, and an optional imaginary unit for
//! complexified Lie algebras.
//!
//! Values are kept in canonical form on construction, so equality is
//! structural. Exactly one radicand is allowed per value; combining values
//! with different radicands is an error rather than a nested extension.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `rat + quad * sqrt(d)` for the radicand shared by the owning scalar.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct QuadPart {
    rat: Rational,
    quad: Rational,
}

impl QuadPart {
    fn zero() -> Self {
        QuadPart {
            rat: Rational::zero(),
            quad: Rational::zero(),
        }
    }

    fn from_rat(rat: Rational) -> Self {
        QuadPart {
            rat,
            quad: Rational::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.quad.is_zero()
    }

    fn add(&self, other: &Self) -> Self {
        QuadPart {
            rat: &self.rat + &other.rat,
            quad: &self.quad + &other.quad,
        }
    }

    fn sub(&self, other: &Self) -> Self {
        QuadPart {
            rat: &self.rat - &other.rat,
            quad: &self.quad - &other.quad,
        }
    }

    fn neg(&self) -> Self {
        QuadPart {
            rat: -&self.rat,
            quad: -&self.quad,
        }
    }

    /// (a + b√d)(a' + b'√d) = aa' + d bb' + (ab' + a'b)√d
    fn mul(&self, other: &Self, d: Option<u64>) -> Self {
        let mut rat = &self.rat * &other.rat;
        if let Some(d) = d {
            if !self.quad.is_zero() && !other.quad.is_zero() {
                rat += &self.quad * &other.quad * rat_int(d as i64);
            }
        }
        QuadPart {
            rat,
            quad: &self.rat * &other.quad + &self.quad * &other.rat,
        }
    }

    /// Galois conjugate √d -> -√d.
    fn quad_conj(&self) -> Self {
        QuadPart {
            rat: self.rat.clone(),
            quad: -&self.quad,
        }
    }

    /// Field norm a² - d b², zero only for the zero element (d squarefree).
    fn norm(&self, d: Option<u64>) -> Rational {
        let mut n = &self.rat * &self.rat;
        if let Some(d) = d {
            n -= &self.quad * &self.quad * rat_int(d as i64);
        }
        n
    }

    /// Exact sign of a + b√d as a real number.
    fn sign(&self, d: Option<u64>) -> i8 {
        let sa = rational_sign(&self.rat);
        if self.quad.is_zero() {
            return sa;
        }
        let sb = rational_sign(&self.quad);
        if sa == 0 {
            return sb;
        }
        if sa == sb {
            return sa;
        }
        // opposite signs: compare a² against d b²
        let sn = rational_sign(&self.norm(d));
        if sa > 0 {
            sn
        } else {
            -sn
        }
    }
}

fn rational_sign(r: &Rational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// An element of Q(sqrt(d))(i): `re + im*i` with `re`, `im` in Q(sqrt(d)).
///
/// The radicand is `None` exactly when both sqrt coordinates vanish, so a
/// plain rational compares equal no matter how it was produced.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactScalar {
    re: QuadPart,
    im: QuadPart,
    radicand: Option<u64>,
}

impl ExactScalar {
    pub fn zero() -> Self {
        ExactScalar {
            re: QuadPart::zero(),
            im: QuadPart::zero(),
            radicand: None,
        }
    }

    pub fn one() -> Self {
        ExactScalar::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        ExactScalar::from_rational(rat_int(n))
    }

    pub fn from_rational(r: Rational) -> Self {
        ExactScalar {
            re: QuadPart::from_rat(r),
            im: QuadPart::zero(),
            radicand: None,
        }
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        ExactScalar {
            re: QuadPart::zero(),
            im: QuadPart::from_rat(Rational::one()),
            radicand: None,
        }
    }

    /// `sqrt(d)` for a squarefree radicand d >= 2.
    pub fn sqrt_radicand(d: u64) -> Result<Self> {
        check_radicand(d)?;
        Ok(ExactScalar {
            re: QuadPart {
                rat: Rational::zero(),
                quad: Rational::one(),
            },
            im: QuadPart::zero(),
            radicand: Some(d),
        })
    }

    /// Builds `re_rat + re_quad*sqrt(d) + (im_rat + im_quad*sqrt(d))*i`.
    pub fn with_parts(
        re_rat: Rational,
        re_quad: Rational,
        im_rat: Rational,
        im_quad: Rational,
        radicand: Option<u64>,
    ) -> Result<Self> {
        if !re_quad.is_zero() || !im_quad.is_zero() {
            match radicand {
                None => {
                    return Err(Error::Inconsistent(
                        "sqrt coordinate without a radicand".into(),
                    ))
                }
                Some(d) => check_radicand(d)?,
            }
        }
        let mut s = ExactScalar {
            re: QuadPart {
                rat: re_rat,
                quad: re_quad,
            },
            im: QuadPart {
                rat: im_rat,
                quad: im_quad,
            },
            radicand,
        };
        s.canonicalize();
        Ok(s)
    }

    fn canonicalize(&mut self) {
        if self.re.quad.is_zero() && self.im.quad.is_zero() {
            self.radicand = None;
        }
    }

    pub fn radicand(&self) -> Option<u64> {
        self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.im.is_zero() && self.re.quad.is_zero() && self.re.rat.is_one()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.im.is_zero() && self.re.quad.is_zero()
    }

    /// The rational coordinate of the real part (exact when `is_rational`).
    pub fn rational_part(&self) -> &Rational {
        &self.re.rat
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        if self.is_rational() {
            Some(&self.re.rat)
        } else {
            None
        }
    }

    /// Real part as a scalar.
    pub fn re(&self) -> ExactScalar {
        let mut s = ExactScalar {
            re: self.re.clone(),
            im: QuadPart::zero(),
            radicand: self.radicand,
        };
        s.canonicalize();
        s
    }

    /// Imaginary part as a (real) scalar.
    pub fn im(&self) -> ExactScalar {
        let mut s = ExactScalar {
            re: self.im.clone(),
            im: QuadPart::zero(),
            radicand: self.radicand,
        };
        s.canonicalize();
        s
    }

    /// Complex conjugation; an involutive ring automorphism.
    pub fn conj(&self) -> ExactScalar {
        let mut s = ExactScalar {
            re: self.re.clone(),
            im: self.im.neg(),
            radicand: self.radicand,
        };
        s.canonicalize();
        s
    }

    fn meet_radicand(&self, other: &Self) -> Result<Option<u64>> {
        match (self.radicand, other.radicand) {
            (None, r) | (r, None) => Ok(r),
            (Some(a), Some(b)) if a == b => Ok(Some(a)),
            (Some(a), Some(b)) => Err(Error::IncompatibleExtension(a, b)),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let radicand = self.meet_radicand(other)?;
        let mut s = ExactScalar {
            re: self.re.add(&other.re),
            im: self.im.add(&other.im),
            radicand,
        };
        s.canonicalize();
        Ok(s)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        let radicand = self.meet_radicand(other)?;
        let mut s = ExactScalar {
            re: self.re.sub(&other.re),
            im: self.im.sub(&other.im),
            radicand,
        };
        s.canonicalize();
        Ok(s)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let d = self.meet_radicand(other)?;
        // fast path: both real
        if self.im.is_zero() && other.im.is_zero() {
            let mut s = ExactScalar {
                re: self.re.mul(&other.re, d),
                im: QuadPart::zero(),
                radicand: d,
            };
            s.canonicalize();
            return Ok(s);
        }
        let re = self
            .re
            .mul(&other.re, d)
            .sub(&self.im.mul(&other.im, d));
        let im = self
            .re
            .mul(&other.im, d)
            .add(&self.im.mul(&other.re, d));
        let mut s = ExactScalar { re, im, radicand: d };
        s.canonicalize();
        Ok(s)
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.checked_mul(&other.inv()?)
    }

    /// Exact multiplicative inverse.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let d = self.radicand;
        // 1/z = conj(z) / (re² + im²) over Q(sqrt(d)); then invert the real
        // Q(sqrt(d)) denominator through its Galois norm.
        let den = self.re.mul(&self.re, d).add(&self.im.mul(&self.im, d));
        let den_inv = {
            let n = den.norm(d);
            // norm is zero only for the zero element since d is squarefree
            debug_assert!(!n.is_zero());
            let c = den.quad_conj();
            QuadPart {
                rat: &c.rat / &n,
                quad: &c.quad / &n,
            }
        };
        let mut s = ExactScalar {
            re: self.re.mul(&den_inv, d),
            im: self.im.neg().mul(&den_inv, d),
            radicand: d,
        };
        s.canonicalize();
        Ok(s)
    }

    /// Exact sign in {-1, 0, +1}; errors on nonzero imaginary part.
    pub fn signum(&self) -> Result<i8> {
        if !self.im.is_zero() {
            return Err(Error::NotOrdered);
        }
        Ok(self.re.sign(self.radicand))
    }

    pub fn is_positive(&self) -> Result<bool> {
        Ok(self.signum()? > 0)
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut acc = ExactScalar::one();
        for _ in 0..k.unsigned_abs() {
            acc = acc.checked_mul(&base)?;
        }
        Ok(acc)
    }

    /// Square root inside the current tower (no new radicand adjoined).
    ///
    /// Fails with `ExtensionRequired(d)` naming the squarefree radicand that
    /// would be needed.
    pub fn sqrt_in_tower(&self) -> Result<Self> {
        self.sqrt_impl(false)
    }

    /// Square root that may adjoin a radicand when the value is still plain
    /// rational; used for renormalisation scalars.
    pub fn sqrt_extending(&self) -> Result<Self> {
        self.sqrt_impl(true)
    }

    fn sqrt_impl(&self, extend: bool) -> Result<Self> {
        if !self.im.is_zero() {
            return Err(Error::NotOrdered);
        }
        let sign = self.re.sign(self.radicand);
        if sign < 0 {
            return Err(Error::Inconsistent("sqrt of a negative value".into()));
        }
        if sign == 0 {
            return Ok(ExactScalar::zero());
        }
        let a = &self.re.rat;
        let b = &self.re.quad;
        if b.is_zero() {
            if let Some(r) = rational_sqrt(a) {
                return Ok(ExactScalar::from_rational(r));
            }
            if let Some(d) = self.radicand {
                if let Some(s) = rational_sqrt(&(a / rat_int(d as i64))) {
                    return ExactScalar::with_parts(
                        Rational::zero(),
                        s,
                        Rational::zero(),
                        Rational::zero(),
                        Some(d),
                    );
                }
            }
            let needed = squarefree_part_of_rational(a);
            if extend && self.radicand.is_none() {
                if let Some(d_small) = bigint_to_u64(&needed) {
                    let s = rational_sqrt(&(a / rat_int(d_small as i64))).ok_or_else(|| {
                        Error::Inconsistent("squarefree factorisation failed".into())
                    })?;
                    return ExactScalar::with_parts(
                        Rational::zero(),
                        s,
                        Rational::zero(),
                        Rational::zero(),
                        Some(d_small),
                    );
                }
            }
            return match self.radicand {
                Some(present) => Err(Error::UnsupportedExtension { present, needed }),
                None => Err(Error::ExtensionRequired(needed)),
            };
        }
        // general a + b√d: (x + y√d)² with x², d y² the roots of
        // t² - a t + d b²/4; needs the norm a² - d b² to be a rational square.
        let d = self.radicand.expect("quad coordinate implies radicand");
        let disc = self.re.norm(Some(d));
        let m = match rational_sqrt(&disc) {
            Some(m) => m,
            None => {
                return Err(Error::UnsupportedExtension {
                    present: d,
                    needed: squarefree_part_of_rational(&disc),
                })
            }
        };
        let two = rat_int(2);
        for xx in [(a + &m) / &two, (a - &m) / &two] {
            if xx.is_negative() {
                continue;
            }
            if let Some(x) = rational_sqrt(&xx) {
                if x.is_zero() {
                    continue;
                }
                let y = b / (&two * &x);
                let cand = ExactScalar::with_parts(
                    x,
                    y,
                    Rational::zero(),
                    Rational::zero(),
                    Some(d),
                )?;
                if cand.re.sign(Some(d)) > 0 {
                    return Ok(cand);
                }
                return Ok(ExactScalar {
                    re: cand.re.neg(),
                    im: QuadPart::zero(),
                    radicand: Some(d),
                });
            }
        }
        Err(Error::UnsupportedExtension {
            present: d,
            needed: squarefree_part_of_rational(&disc),
        })
    }
}

fn check_radicand(d: u64) -> Result<()> {
    if d < 2 {
        return Err(Error::Inconsistent(format!("radicand {d} below 2")));
    }
    let sf = squarefree_part(BigInt::from(d));
    if sf != BigInt::from(d) {
        return Err(Error::Inconsistent(format!("radicand {d} not squarefree")));
    }
    Ok(())
}

fn bigint_to_u64(n: &BigInt) -> Option<u64> {
    u64::try_from(n.clone()).ok()
}

/// Exact rational square root, if one exists.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    if q.is_zero() {
        return Some(Rational::zero());
    }
    let ns = q.numer().sqrt();
    let ds = q.denom().sqrt();
    if &(&ns * &ns) == q.numer() && &(&ds * &ds) == q.denom() {
        Some(Rational::new(ns, ds))
    } else {
        None
    }
}

/// Squarefree part of n·d for q = n/d in lowest terms, so that
/// sqrt(q) lies in Q(sqrt(result)).
pub fn squarefree_part_of_rational(q: &Rational) -> BigInt {
    squarefree_part(q.numer().abs() * q.denom())
}

fn squarefree_part(mut n: BigInt) -> BigInt {
    debug_assert!(n.is_positive());
    let mut sf = BigInt::one();
    let mut f = BigInt::from(2);
    let cutoff = BigInt::from(1_000_000u64);
    while &f * &f <= n && f <= cutoff {
        let mut odd = false;
        while (&n % &f).is_zero() {
            n /= &f;
            odd = !odd;
        }
        if odd {
            sf *= &f;
        }
        f += if f == BigInt::from(2) {
            BigInt::one()
        } else {
            BigInt::from(2)
        };
    }
    if !n.is_one() {
        // remainder is prime, a prime square, or a semiprime beyond the
        // cutoff; keep it unless it is a perfect square
        let r = n.sqrt();
        if &r * &r != n {
            sf *= &n;
        }
    }
    sf
}

macro_rules! panicking_op {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for &ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                self.$checked(rhs)
                    .expect("scalar operation across incompatible extensions")
            }
        }
        impl $trait for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                (&self).$method(&rhs)
            }
        }
    };
}

panicking_op!(Add, add, checked_add);
panicking_op!(Sub, sub, checked_sub);
panicking_op!(Mul, mul, checked_mul);

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar {
            re: self.re.neg(),
            im: self.im.neg(),
            radicand: self.radicand,
        }
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -&self
    }
}

/// Decimal-free textual form: "p/q", "p/q + r/s*sqrt(d)", "... + (...)*i".
impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        if !self.re.is_zero() {
            out.push_str(&quad_string(&self.re, self.radicand));
        }
        if !self.im.is_zero() {
            let (sign_neg, mag) = split_sign(&self.im);
            if out.is_empty() {
                if sign_neg {
                    out.push('-');
                }
            } else {
                out.push_str(if sign_neg { " - " } else { " + " });
            }
            let simple = mag.quad.is_zero();
            if simple {
                out.push_str(&format!("{}*i", mag.rat));
            } else {
                out.push_str(&format!("({})*i", quad_string(&mag, self.radicand)));
            }
        }
        write!(f, "{out}")
    }
}

/// Splits off a global sign when the leading coordinate is negative, so the
/// printed form is "a + b*sqrt(d)" or "-(...)"-free.
fn split_sign(p: &QuadPart) -> (bool, QuadPart) {
    let lead_neg = if !p.rat.is_zero() {
        p.rat.is_negative()
    } else {
        p.quad.is_negative()
    };
    if lead_neg {
        (true, p.neg())
    } else {
        (false, p.clone())
    }
}

fn quad_string(p: &QuadPart, radicand: Option<u64>) -> String {
    let d = radicand.unwrap_or(0);
    if p.quad.is_zero() {
        return format!("{}", p.rat);
    }
    let quad_term = |q: &Rational| format!("{}*sqrt({})", q, d);
    if p.rat.is_zero() {
        return quad_term(&p.quad);
    }
    if p.quad.is_negative() {
        format!("{} - {}", p.rat, quad_term(&(-&p.quad)))
    } else {
        format!("{} + {}", p.rat, quad_term(&p.quad))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt2() -> ExactScalar {
        ExactScalar::sqrt_radicand(2).unwrap()
    }

    fn sqrt5() -> ExactScalar {
        ExactScalar::sqrt_radicand(5).unwrap()
    }

    #[test]
    fn rational_arith() {
        let a = ExactScalar::from_rational(rat(1, 2));
        let b = ExactScalar::from_rational(rat(1, 3));
        assert_eq!(a.checked_add(&b).unwrap(), ExactScalar::from_rational(rat(5, 6)));
    }

    #[test]
    fn quad_norm_form() {
        // (1 + √2)(1 − √2) = −1
        let one = ExactScalar::one();
        let x = one.checked_add(&sqrt2()).unwrap();
        let y = one.checked_sub(&sqrt2()).unwrap();
        assert_eq!(x.checked_mul(&y).unwrap(), ExactScalar::from_int(-1));
    }

    #[test]
    fn defining_relation() {
        assert_eq!(
            sqrt5().checked_mul(&sqrt5()).unwrap(),
            ExactScalar::from_int(5)
        );
    }

    #[test]
    fn inverse_of_one_plus_sqrt2() {
        // (1 + √2)⁻¹ = −1 + √2, checked by multiplying back
        let x = ExactScalar::one().checked_add(&sqrt2()).unwrap();
        let inv = x.inv().unwrap();
        assert!(x.checked_mul(&inv).unwrap().is_one());
        let expected = ExactScalar::from_int(-1).checked_add(&sqrt2()).unwrap();
        assert_eq!(inv, expected);
    }

    #[test]
    fn inverse_of_zero_fails() {
        assert_eq!(ExactScalar::zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn sign_cases() {
        // 3 − 2√2 > 0 via 9 vs 8
        let x = ExactScalar::from_int(3)
            .checked_sub(&ExactScalar::from_int(2).checked_mul(&sqrt2()).unwrap())
            .unwrap();
        assert_eq!(x.signum().unwrap(), 1);
        // 1 − √2 < 0 via 1 vs 2
        let y = ExactScalar::one().checked_sub(&sqrt2()).unwrap();
        assert_eq!(y.signum().unwrap(), -1);
        assert_eq!(ExactScalar::zero().signum().unwrap(), 0);
        assert_eq!(ExactScalar::i().signum(), Err(Error::NotOrdered));
    }

    #[test]
    fn mixed_radicands_rejected() {
        assert_eq!(
            sqrt2().checked_add(&sqrt5()),
            Err(Error::IncompatibleExtension(2, 5))
        );
    }

    #[test]
    fn gaussian_conjugation_automorphism() {
        let z = ExactScalar::with_parts(rat(1, 2), rat(1, 3), rat(2, 1), rat(-1, 5), Some(3))
            .unwrap();
        let w = ExactScalar::with_parts(rat(-2, 7), rat(1, 2), rat(1, 4), rat(1, 1), Some(3))
            .unwrap();
        let lhs = z.checked_mul(&w).unwrap().conj();
        let rhs = z.conj().checked_mul(&w.conj()).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(z.conj().conj(), z);
    }

    #[test]
    fn sqrt_in_tower_cases() {
        let nine = ExactScalar::from_int(9);
        assert_eq!(nine.sqrt_in_tower().unwrap(), ExactScalar::from_int(3));
        // 2 is a square only after adjoining √2
        match ExactScalar::from_int(2).sqrt_in_tower() {
            Err(Error::ExtensionRequired(d)) => assert_eq!(d, BigInt::from(2)),
            other => panic!("expected extension request, got {other:?}"),
        }
        // 8 = (2√2)², reachable by adjoining √2
        let s = ExactScalar::from_int(8).sqrt_extending().unwrap();
        assert_eq!(s.checked_mul(&s).unwrap(), ExactScalar::from_int(8));
        assert_eq!(s.radicand(), Some(2));
        // general quad sqrt: (1 + √2)² = 3 + 2√2
        let x = ExactScalar::one().checked_add(&sqrt2()).unwrap();
        let sq = x.checked_mul(&x).unwrap();
        assert_eq!(sq.sqrt_in_tower().unwrap(), x);
    }

    #[test]
    fn field_axioms_spot() {
        let vals = [
            ExactScalar::from_rational(rat(3, 7)),
            ExactScalar::one().checked_add(&sqrt2()).unwrap(),
            ExactScalar::with_parts(rat(1, 3), rat(-2, 5), rat(0, 1), rat(1, 2), Some(2))
                .unwrap(),
        ];
        for x in &vals {
            for y in &vals {
                for z in &vals {
                    let lhs = x
                        .checked_mul(&y.checked_add(z).unwrap())
                        .unwrap();
                    let rhs = x
                        .checked_mul(y)
                        .unwrap()
                        .checked_add(&x.checked_mul(z).unwrap())
                        .unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn display_forms() {
        assert_eq!(ExactScalar::from_rational(rat(-1, 2)).to_string(), "-1/2");
        let x = ExactScalar::with_parts(rat(1, 2), rat(3, 4), rat(0, 1), rat(0, 1), Some(5))
            .unwrap();
        assert_eq!(x.to_string(), "1/2 + 3/4*sqrt(5)");
        let z = ExactScalar::with_parts(rat(1, 1), rat(0, 1), rat(-2, 3), rat(0, 1), None)
            .unwrap();
        assert_eq!(z.to_string(), "1 - 2/3*i");
    }
}
