//! Truncated Puiseux series in a positive infinitesimal `e`: the computable
//! model of a non-trivially convexly valued real closed field.
//!
//! A value is a finite sum of terms `c * e^q` with exact scalar coefficients
//! and rational exponents, known modulo `e^trunc`. Exponents live on the grid
//! `(1/ram) * Z`, which is closed under the exponent arithmetic of addition
//! and multiplication; only square roots and fractional powers can refine the
//! grid, and they fail loudly when the bound does not allow it.
//!
//! The valuation ring O is `{ x : val(x) >= 0 }`, its maximal ideal m is
//! `{ x : val(x) > 0 }`, and the standard part map drops every positive-
//! valuation term of an element of O.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{rat_int, ExactScalar, Rational};

/// Shared precision context: truncation order and ramification bound.
///
/// `trunc` is the exponent below which values are known; both it and every
/// term exponent are integer multiples of `1/ram`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeriesCtx {
    /// Truncation order, scaled by `ram`.
    trunc_r: i64,
    ram: u32,
}

impl SeriesCtx {
    pub fn new(trunc: &Rational, ram: u32) -> Result<Self> {
        if ram == 0 {
            return Err(Error::Config("ramification bound must be positive".into()));
        }
        let trunc_r = scale_exponent(trunc, ram)
            .ok_or_else(|| Error::Ramification {
                exp: trunc.clone(),
                ram,
            })?;
        Ok(SeriesCtx { trunc_r, ram })
    }

    pub fn with_trunc_int(trunc: i64, ram: u32) -> Self {
        SeriesCtx {
            trunc_r: trunc * ram as i64,
            ram,
        }
    }

    pub fn trunc(&self) -> Rational {
        unscale(self.trunc_r, self.ram)
    }

    pub fn ram(&self) -> u32 {
        self.ram
    }
}

impl Default for SeriesCtx {
    /// Truncation 8, ramification bound 12.
    fn default() -> Self {
        SeriesCtx::with_trunc_int(8, 12)
    }
}

fn scale_exponent(q: &Rational, ram: u32) -> Option<i64> {
    let scaled = q * rat_int(ram as i64);
    if !scaled.denom().is_one() {
        return None;
    }
    scaled.numer().to_i64()
}

fn unscale(e: i64, ram: u32) -> Rational {
    Rational::new(BigInt::from(e), BigInt::from(ram))
}

/// Value of the convex valuation: a rational, or infinity for values that
/// vanish modulo the truncation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Valuation {
    Finite(Rational),
    Infinite,
}

impl Valuation {
    pub fn is_finite(&self) -> bool {
        matches!(self, Valuation::Finite(_))
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
            (Valuation::Infinite, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Finite(_), Valuation::Infinite) => Ordering::Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "INF"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Position of a value relative to the valuation ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    /// val > 0: infinitesimal, in the maximal ideal m.
    InM,
    /// val = 0: a unit of O.
    InOUnit,
    /// val < 0: unbounded, outside O.
    OutsideO,
}

/// Three-way comparison modulo the truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOrd {
    Lt,
    EqModTrunc,
    Gt,
}

/// A truncated Puiseux series over the exact scalar tower.
///
/// Invariants: term exponents strictly increasing, all below `trunc`, all on
/// the `(1/ram)Z` grid, coefficients nonzero. Zero is the empty term list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValSeries {
    /// (exponent scaled by ram, coefficient), sorted by exponent.
    terms: Vec<(i64, ExactScalar)>,
    trunc_r: i64,
    ram: u32,
}

impl ValSeries {
    pub fn zero(ctx: &SeriesCtx) -> Self {
        ValSeries {
            terms: Vec::new(),
            trunc_r: ctx.trunc_r,
            ram: ctx.ram,
        }
    }

    pub fn one(ctx: &SeriesCtx) -> Self {
        ValSeries::constant(ExactScalar::one(), ctx)
    }

    pub fn from_int(n: i64, ctx: &SeriesCtx) -> Self {
        ValSeries::constant(ExactScalar::from_int(n), ctx)
    }

    pub fn from_rational(q: Rational, ctx: &SeriesCtx) -> Self {
        ValSeries::constant(ExactScalar::from_rational(q), ctx)
    }

    pub fn constant(c: ExactScalar, ctx: &SeriesCtx) -> Self {
        let mut s = ValSeries::zero(ctx);
        if !c.is_zero() && ctx.trunc_r > 0 {
            s.terms.push((0, c));
        }
        s
    }

    /// The distinguished positive infinitesimal.
    pub fn eps(ctx: &SeriesCtx) -> Self {
        let mut s = ValSeries::zero(ctx);
        if ctx.trunc_r > ctx.ram as i64 {
            s.terms.push((ctx.ram as i64, ExactScalar::one()));
        }
        s
    }

    /// `c * e^exp`; the exponent must sit on the ramification grid.
    pub fn monomial(exp: &Rational, c: ExactScalar, ctx: &SeriesCtx) -> Result<Self> {
        let e = scale_exponent(exp, ctx.ram).ok_or_else(|| Error::Ramification {
            exp: exp.clone(),
            ram: ctx.ram,
        })?;
        let mut s = ValSeries::zero(ctx);
        if !c.is_zero() && e < ctx.trunc_r {
            s.terms.push((e, c));
        }
        Ok(s)
    }

    pub fn from_terms(
        terms: Vec<(Rational, ExactScalar)>,
        ctx: &SeriesCtx,
    ) -> Result<Self> {
        let mut acc = ValSeries::zero(ctx);
        for (exp, c) in terms {
            acc = &acc + &ValSeries::monomial(&exp, c, ctx)?;
        }
        Ok(acc)
    }

    pub fn ctx(&self) -> SeriesCtx {
        SeriesCtx {
            trunc_r: self.trunc_r,
            ram: self.ram,
        }
    }

    pub fn trunc(&self) -> Rational {
        unscale(self.trunc_r, self.ram)
    }

    pub fn ram(&self) -> u32 {
        self.ram
    }

    pub fn terms(&self) -> impl Iterator<Item = (Rational, &ExactScalar)> {
        self.terms.iter().map(|(e, c)| (unscale(*e, self.ram), c))
    }

    /// True when the value vanishes modulo `e^trunc`.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_equiv(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }

    pub fn val(&self) -> Valuation {
        match self.terms.first() {
            Some((e, _)) => Valuation::Finite(unscale(*e, self.ram)),
            None => Valuation::Infinite,
        }
    }

    pub fn leading(&self) -> Option<(Rational, &ExactScalar)> {
        self.terms
            .first()
            .map(|(e, c)| (unscale(*e, self.ram), c))
    }

    /// Coefficient at a given exponent (zero if absent).
    pub fn coeff_at(&self, exp: &Rational) -> ExactScalar {
        match scale_exponent(exp, self.ram) {
            Some(e) => self
                .terms
                .iter()
                .find(|(te, _)| *te == e)
                .map(|(_, c)| c.clone())
                .unwrap_or_else(ExactScalar::zero),
            None => ExactScalar::zero(),
        }
    }

    pub fn classify(&self) -> Classification {
        match self.terms.first() {
            None => Classification::InM,
            Some((e, _)) => match e.cmp(&0) {
                Ordering::Greater => Classification::InM,
                Ordering::Equal => Classification::InOUnit,
                Ordering::Less => Classification::OutsideO,
            },
        }
    }

    pub fn in_m(&self) -> bool {
        self.classify() == Classification::InM
    }

    pub fn in_o(&self) -> bool {
        self.classify() != Classification::OutsideO
    }

    /// The standard part; defined only on the valuation ring O.
    pub fn standard_part(&self) -> Result<ExactScalar> {
        if !self.in_o() {
            return Err(Error::OutsideO(self.val()));
        }
        Ok(self.coeff_at(&Rational::zero()))
    }

    /// True when every coefficient is real.
    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_real())
    }

    /// Coefficient-wise complex conjugation.
    pub fn conj(&self) -> ValSeries {
        ValSeries {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, c.conj()))
                .collect(),
            trunc_r: self.trunc_r,
            ram: self.ram,
        }
    }

    pub fn re_part(&self) -> ValSeries {
        self.map_coeffs(|c| c.re())
    }

    pub fn im_part(&self) -> ValSeries {
        self.map_coeffs(|c| c.im())
    }

    fn map_coeffs(&self, f: impl Fn(&ExactScalar) -> ExactScalar) -> ValSeries {
        ValSeries {
            terms: self
                .terms
                .iter()
                .filter_map(|(e, c)| {
                    let c = f(c);
                    if c.is_zero() {
                        None
                    } else {
                        Some((*e, c))
                    }
                })
                .collect(),
            trunc_r: self.trunc_r,
            ram: self.ram,
        }
    }

    pub fn scale(&self, c: &ExactScalar) -> ValSeries {
        if c.is_zero() {
            return ValSeries {
                terms: Vec::new(),
                trunc_r: self.trunc_r,
                ram: self.ram,
            };
        }
        self.map_coeffs(|x| x * c)
    }

    pub fn scale_rat(&self, q: &Rational) -> ValSeries {
        self.scale(&ExactScalar::from_rational(q.clone()))
    }

    /// Lowers the truncation (never raises it).
    pub fn truncate_to(&self, trunc: &Rational) -> Result<ValSeries> {
        let t = scale_exponent(trunc, self.ram).ok_or_else(|| Error::Ramification {
            exp: trunc.clone(),
            ram: self.ram,
        })?;
        let t = t.min(self.trunc_r);
        Ok(ValSeries {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| *e < t)
                .cloned()
                .collect(),
            trunc_r: t,
            ram: self.ram,
        })
    }

    /// Caps the truncation at a scaled bound; powers of infinitesimals keep
    /// gaining precision as fast as valuation, so iterative expansions must
    /// cut them off at the precision they are aiming for.
    fn truncate_r(&self, trunc_r: i64) -> ValSeries {
        if trunc_r >= self.trunc_r {
            return self.clone();
        }
        ValSeries {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| *e < trunc_r)
                .cloned()
                .collect(),
            trunc_r,
            ram: self.ram,
        }
    }

    fn rescale(&self, ram: u32) -> ValSeries {
        if ram == self.ram {
            return self.clone();
        }
        debug_assert!(ram % self.ram == 0);
        let f = (ram / self.ram) as i64;
        ValSeries {
            terms: self.terms.iter().map(|(e, c)| (e * f, c.clone())).collect(),
            trunc_r: self.trunc_r * f,
            ram,
        }
    }

    fn aligned(a: &ValSeries, b: &ValSeries) -> (ValSeries, ValSeries) {
        if a.ram == b.ram {
            (a.clone(), b.clone())
        } else {
            let l = (a.ram as i64).lcm(&(b.ram as i64)) as u32;
            (a.rescale(l), b.rescale(l))
        }
    }

    /// Valuation scaled to the grid, substituting the truncation for zero —
    /// the precision bookkeeping bound of multiplications.
    fn val_r_or_trunc(&self) -> i64 {
        self.terms.first().map(|(e, _)| *e).unwrap_or(self.trunc_r)
    }

    fn add_signed(&self, other: &ValSeries, negate: bool) -> ValSeries {
        let (a, b) = ValSeries::aligned(self, other);
        let trunc_r = a.trunc_r.min(b.trunc_r);
        let mut terms = Vec::with_capacity(a.terms.len() + b.terms.len());
        let mut i = 0;
        let mut j = 0;
        while i < a.terms.len() || j < b.terms.len() {
            let pick_a = match (a.terms.get(i), b.terms.get(j)) {
                (Some((ea, _)), Some((eb, _))) => {
                    if ea == eb {
                        let (e, ca) = &a.terms[i];
                        let cb = &b.terms[j].1;
                        let c = if negate { ca - cb } else { ca + cb };
                        if !c.is_zero() && *e < trunc_r {
                            terms.push((*e, c));
                        }
                        i += 1;
                        j += 1;
                        continue;
                    }
                    ea < eb
                }
                (Some(_), None) => true,
                (None, Some(_)) => false,
                (None, None) => unreachable!(),
            };
            if pick_a {
                let (e, c) = &a.terms[i];
                if *e < trunc_r {
                    terms.push((*e, c.clone()));
                }
                i += 1;
            } else {
                let (e, c) = &b.terms[j];
                let c = if negate { -c } else { c.clone() };
                if *e < trunc_r {
                    terms.push((*e, c));
                }
                j += 1;
            }
        }
        ValSeries {
            terms,
            trunc_r,
            ram: a.ram,
        }
    }

    fn mul_impl(&self, other: &ValSeries) -> ValSeries {
        let (a, b) = ValSeries::aligned(self, other);
        // product of (A + O(e^Na)) and (B + O(e^Nb)) is known modulo
        // e^min(val A + Nb, val B + Na)
        let trunc_r = (a.val_r_or_trunc() + b.trunc_r).min(b.val_r_or_trunc() + a.trunc_r);
        let mut acc: BTreeMap<i64, ExactScalar> = BTreeMap::new();
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e = ea + eb;
                if e >= trunc_r {
                    continue;
                }
                let p = ca * cb;
                match acc.entry(e) {
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(p);
                    }
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        let s = o.get() + &p;
                        if s.is_zero() {
                            o.remove();
                        } else {
                            *o.get_mut() = s;
                        }
                    }
                }
            }
        }
        ValSeries {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
            trunc_r,
            ram: a.ram,
        }
    }

    /// Multiplicative inverse modulo the truncation; the result's precision
    /// shifts by twice the valuation.
    pub fn inv(&self) -> Result<ValSeries> {
        let (e0, c0) = match self.terms.first() {
            Some(t) => (t.0, t.1.clone()),
            None => return Err(Error::DivisionByZero),
        };
        // relative series y = x / (c0 e^{e0}) = 1 + u with val(u) > 0
        let rel_trunc = self.trunc_r - e0;
        let c0_inv = c0.inv()?;
        let rel = ValSeries {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e - e0, c * &c0_inv))
                .collect(),
            trunc_r: rel_trunc,
            ram: self.ram,
        };
        let one = ValSeries {
            terms: vec![(0, ExactScalar::one())],
            trunc_r: rel_trunc,
            ram: self.ram,
        };
        let u = &rel - &one;
        // geometric series sum (-u)^k up to the relative precision
        let mut acc = one.clone();
        let mut pow = one;
        let minus_u = -&u;
        loop {
            pow = pow.mul_impl(&minus_u).truncate_r(rel_trunc);
            if pow.is_zero() {
                break;
            }
            acc = acc.add_signed(&pow, false);
        }
        Ok(ValSeries {
            terms: acc
                .terms
                .iter()
                .map(|(e, c)| (e - e0, c * &c0_inv))
                .collect(),
            trunc_r: rel_trunc - e0,
            ram: self.ram,
        })
    }

    pub fn div(&self, other: &ValSeries) -> Result<ValSeries> {
        Ok(self.mul_impl(&other.inv()?))
    }

    /// Square root of a positive value whose leading coefficient is a square
    /// in the scalar tower and whose leading exponent halves onto the grid.
    pub fn sqrt(&self) -> Result<ValSeries> {
        let (e0, c0) = match self.terms.first() {
            Some(t) => (t.0, t.1.clone()),
            None => return Err(Error::DivisionByZero),
        };
        if c0.signum()? <= 0 {
            return Err(Error::Inconsistent("sqrt of a non-positive series".into()));
        }
        if e0 % 2 != 0 {
            return Err(Error::Ramification {
                exp: unscale(e0, self.ram) / rat_int(2),
                ram: self.ram,
            });
        }
        let root0 = c0.sqrt_in_tower()?;
        let rel_trunc = self.trunc_r - e0;
        let c0_inv = c0.inv()?;
        let rel = ValSeries {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e - e0, c * &c0_inv))
                .collect(),
            trunc_r: rel_trunc,
            ram: self.ram,
        };
        let one = ValSeries {
            terms: vec![(0, ExactScalar::one())],
            trunc_r: rel_trunc,
            ram: self.ram,
        };
        let u = &rel - &one;
        // binomial series for (1+u)^(1/2) up to the relative precision
        let mut acc = one.clone();
        let mut pow = one;
        let mut coef = Rational::one();
        let mut k: i64 = 0;
        loop {
            pow = pow.mul_impl(&u).truncate_r(rel_trunc);
            if pow.is_zero() {
                break;
            }
            // C(1/2, k+1) = C(1/2, k) * (1/2 - k) / (k + 1)
            coef = coef * (Rational::new(BigInt::one(), BigInt::from(2)) - rat_int(k))
                / rat_int(k + 1);
            k += 1;
            acc = acc.add_signed(&pow.scale_rat(&coef), false);
        }
        // result = root0 * e^{e0/2} * (1 + ...)
        let shift = e0 / 2;
        Ok(ValSeries {
            terms: acc
                .terms
                .iter()
                .map(|(e, c)| (e + shift, c * &root0))
                .collect(),
            trunc_r: rel_trunc + shift,
            ram: self.ram,
        })
    }

    /// Integer power, through the inverse for negative exponents.
    pub fn powi(&self, k: i64) -> Result<ValSeries> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let ctx = base.ctx();
        let mut acc = ValSeries::one(&ctx);
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul_impl(&base);
        }
        Ok(acc)
    }

    /// Rational power. Monomials take any exponent on the grid; otherwise the
    /// denominator must be a power of two (iterated square roots).
    pub fn pow_rational(&self, p: &Rational) -> Result<ValSeries> {
        if p.denom().is_one() {
            return self.powi(p.numer().to_i64().ok_or_else(|| {
                Error::Unsupported("power exponent overflow".into())
            })?);
        }
        if self.terms.len() == 1 {
            let (e, c) = &self.terms[0];
            let exp = unscale(*e, self.ram) * p;
            let e_new = scale_exponent(&exp, self.ram).ok_or_else(|| Error::Ramification {
                exp: exp.clone(),
                ram: self.ram,
            })?;
            let c_new = scalar_pow_rational(c, p)?;
            // relative precision of x = c e^e is trunc - e, preserved by powers
            let trunc_r = (self.trunc_r - e) + e_new;
            let mut terms = Vec::new();
            if e_new < trunc_r {
                terms.push((e_new, c_new));
            }
            return Ok(ValSeries {
                terms,
                trunc_r,
                ram: self.ram,
            });
        }
        let num = p.numer().to_i64().ok_or_else(|| {
            Error::Unsupported("power exponent overflow".into())
        })?;
        let mut den = p.denom().to_i64().ok_or_else(|| {
            Error::Unsupported("power exponent overflow".into())
        })?;
        let mut base = self.powi(num)?;
        while den % 2 == 0 {
            base = base.sqrt()?;
            den /= 2;
        }
        if den != 1 {
            return Err(Error::Unsupported(format!(
                "fractional power with odd denominator {den} of a non-monomial"
            )));
        }
        Ok(base)
    }

    /// Sign of the value modulo the truncation; requires real coefficients.
    pub fn sign(&self) -> Result<i8> {
        match self.terms.first() {
            None => Ok(0),
            Some((_, c)) => c.signum(),
        }
    }

    /// Compares modulo the common truncation via the sign of the difference.
    pub fn cmp_series(&self, other: &ValSeries) -> Result<SeriesOrd> {
        let d = self - other;
        Ok(match d.sign()? {
            0 => SeriesOrd::EqModTrunc,
            s if s > 0 => SeriesOrd::Gt,
            _ => SeriesOrd::Lt,
        })
    }
}

fn scalar_pow_rational(c: &ExactScalar, p: &Rational) -> Result<ExactScalar> {
    let num = p
        .numer()
        .to_i64()
        .ok_or_else(|| Error::Unsupported("power exponent overflow".into()))?;
    let mut den = p
        .denom()
        .to_i64()
        .ok_or_else(|| Error::Unsupported("power exponent overflow".into()))?;
    let mut base = c.pow(num)?;
    while den % 2 == 0 {
        base = base.sqrt_in_tower()?;
        den /= 2;
    }
    if den != 1 {
        if base.is_one() {
            return Ok(base);
        }
        return Err(Error::Unsupported(format!(
            "coefficient root of index {den}"
        )));
    }
    Ok(base)
}

impl Add for &ValSeries {
    type Output = ValSeries;
    fn add(self, rhs: &ValSeries) -> ValSeries {
        self.add_signed(rhs, false)
    }
}

impl Sub for &ValSeries {
    type Output = ValSeries;
    fn sub(self, rhs: &ValSeries) -> ValSeries {
        self.add_signed(rhs, true)
    }
}

impl Mul for &ValSeries {
    type Output = ValSeries;
    fn mul(self, rhs: &ValSeries) -> ValSeries {
        self.mul_impl(rhs)
    }
}

impl Neg for &ValSeries {
    type Output = ValSeries;
    fn neg(self) -> ValSeries {
        ValSeries {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
            trunc_r: self.trunc_r,
            ram: self.ram,
        }
    }
}

impl fmt::Display for ValSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            let exp = unscale(*e, self.ram);
            let (neg, mag) = if c.is_real() && c.signum().unwrap_or(1) < 0 {
                (true, -c)
            } else {
                (false, c.clone())
            };
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let coeff_str = if mag.is_rational() {
                format!("{mag}")
            } else {
                format!("({mag})")
            };
            if exp.is_zero() {
                out.push_str(&coeff_str);
            } else {
                let e_str = if exp.is_one() {
                    "e".to_string()
                } else if exp.denom().is_one() {
                    format!("e^{}", exp.numer())
                } else {
                    format!("e^({exp})")
                };
                if mag.is_one() {
                    out.push_str(&e_str);
                } else {
                    out.push_str(&format!("{coeff_str}*{e_str}"));
                }
            }
        }
        write!(f, "{out}")
    }
}

/// JSON form: {"terms": [[exp, coeff], ...], "trunc": trunc} with exponents
/// and coefficients as decimal-free strings.
impl Serialize for ValSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        struct Terms<'a>(&'a ValSeries);
        impl Serialize for Terms<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut seq = s.serialize_seq(Some(self.0.terms.len()))?;
                for (e, c) in self.0.terms() {
                    seq.serialize_element(&[e.to_string(), c.to_string()])?;
                }
                seq.end()
            }
        }
        let mut st = s.serialize_struct("ValSeries", 2)?;
        st.serialize_field("terms", &Terms(self))?;
        st.serialize_field("trunc", &self.trunc().to_string())?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn ctx() -> SeriesCtx {
        SeriesCtx::default()
    }

    fn eps() -> ValSeries {
        ValSeries::eps(&ctx())
    }

    #[test]
    fn add_cancels() {
        // (1 + e) + (2 - e) = 3
        let a = &ValSeries::one(&ctx()) + &eps();
        let b = &ValSeries::from_int(2, &ctx()) - &eps();
        assert!((&a + &b).is_equiv(&ValSeries::from_int(3, &ctx())));
    }

    #[test]
    fn half_exponents_multiply() {
        let h = ValSeries::monomial(&rat(1, 2), ExactScalar::one(), &ctx()).unwrap();
        assert!((&h * &h).is_equiv(&eps()));
    }

    #[test]
    fn product_of_conjugates() {
        let a = &ValSeries::one(&ctx()) + &eps();
        let b = &ValSeries::one(&ctx()) - &eps();
        let expect = &ValSeries::one(&ctx()) - &(&eps() * &eps());
        assert!((&a * &b).is_equiv(&expect));
    }

    #[test]
    fn inverse_by_back_multiplication() {
        let c4 = SeriesCtx::with_trunc_int(4, 12);
        let x = &ValSeries::one(&c4) + &ValSeries::eps(&c4);
        let inv = x.inv().unwrap();
        // frozen expansion 1 - e + e² - e³
        let e = ValSeries::eps(&c4);
        let mut expect = ValSeries::one(&c4);
        expect = &expect - &e;
        expect = &expect + &(&e * &e);
        expect = &expect - &(&(&e * &e) * &e);
        assert_eq!(inv, expect);
        assert!((&x * &inv).is_equiv(&ValSeries::one(&c4)));
    }

    #[test]
    fn monomial_inverse() {
        let inv = eps().inv().unwrap();
        assert_eq!(inv.val(), Valuation::Finite(rat_int(-1)));
        assert!((&inv * &eps()).is_equiv(&ValSeries::one(&ctx())));
        let two = ValSeries::from_int(2, &ctx());
        assert!(two
            .inv()
            .unwrap()
            .is_equiv(&ValSeries::from_rational(rat(1, 2), &ctx())));
        assert_eq!(ValSeries::zero(&ctx()).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn eps_below_every_positive_rational() {
        let q = ValSeries::from_rational(rat(1, 1_000_000), &ctx());
        assert_eq!(eps().cmp_series(&q).unwrap(), SeriesOrd::Lt);
        let h = ValSeries::monomial(&rat(1, 2), ExactScalar::one(), &ctx()).unwrap();
        assert_eq!(h.cmp_series(&eps()).unwrap(), SeriesOrd::Gt);
        let x = &ValSeries::one(&ctx()) + &eps();
        assert_eq!(x.cmp_series(&x).unwrap(), SeriesOrd::EqModTrunc);
    }

    #[test]
    fn standard_part_cases() {
        let x = ValSeries::from_terms(
            vec![
                (rat_int(0), ExactScalar::from_int(2)),
                (rat_int(1), ExactScalar::from_int(3)),
                (rat_int(2), ExactScalar::one()),
            ],
            &ctx(),
        )
        .unwrap();
        assert_eq!(x.standard_part().unwrap(), ExactScalar::from_int(2));
        let h = ValSeries::monomial(&rat(1, 2), ExactScalar::one(), &ctx()).unwrap();
        assert_eq!(h.standard_part().unwrap(), ExactScalar::zero());
        let neg = eps().inv().unwrap();
        assert!(matches!(neg.standard_part(), Err(Error::OutsideO(_))));
    }

    #[test]
    fn classification() {
        let five_eps2 = eps().powi(2).unwrap().scale(&ExactScalar::from_int(5));
        assert_eq!(five_eps2.classify(), Classification::InM);
        let unit = &ValSeries::from_int(3, &ctx()) + &eps();
        assert_eq!(unit.classify(), Classification::InOUnit);
        let big = eps().powi(-2).unwrap();
        assert_eq!(big.classify(), Classification::OutsideO);
        assert_eq!(ValSeries::zero(&ctx()).classify(), Classification::InM);
    }

    #[test]
    fn sqrt_of_one_plus_eps() {
        let c3 = SeriesCtx::with_trunc_int(3, 12);
        let e = ValSeries::eps(&c3);
        let x = &ValSeries::one(&c3) + &e;
        let r = x.sqrt().unwrap();
        // frozen: 1 + e/2 - e²/8
        let expect = &(&ValSeries::one(&c3) + &e.scale_rat(&rat(1, 2)))
            - &(&e * &e).scale_rat(&rat(1, 8));
        assert_eq!(r, expect);
        assert!((&r * &r).is_equiv(&x));
    }

    #[test]
    fn sqrt_monomial_and_extension_error() {
        let e2 = eps().powi(2).unwrap();
        assert!(e2.sqrt().unwrap().is_equiv(&eps()));
        match ValSeries::from_int(2, &ctx()).sqrt() {
            Err(Error::ExtensionRequired(d)) => assert_eq!(d, BigInt::from(2)),
            other => panic!("expected extension error, got {other:?}"),
        }
    }

    #[test]
    fn mul_precision_bookkeeping() {
        // both factors are known mod e^8, so the product is too
        let x = &ValSeries::one(&ctx()) + &eps();
        let p = &eps() * &x;
        assert_eq!(p.trunc(), rat_int(8));
        // a valuation-1 factor shifts the unknowns one grade up
        let q = &eps() * &eps();
        assert_eq!(q.trunc(), rat_int(9));
        // inverse of a valuation-1 element costs two grades
        let y = &eps() + &eps().powi(2).unwrap();
        assert_eq!(y.inv().unwrap().trunc(), rat_int(6));
    }

    #[test]
    fn display_roundtrip_shape() {
        let x = ValSeries::from_terms(
            vec![
                (rat_int(0), ExactScalar::one()),
                (rat(1, 2), ExactScalar::from_int(2)),
                (rat_int(1), ExactScalar::from_int(-1)),
            ],
            &ctx(),
        )
        .unwrap();
        assert_eq!(x.to_string(), "1 + 2*e^(1/2) - e");
    }
}
