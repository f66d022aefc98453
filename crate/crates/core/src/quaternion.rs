//! Spin(3) as unit quaternions and the double cover of SO(3).

use crate::error::{Error, Result};
use crate::matrix::SeriesMatrix;
use crate::rotations::Vec3;
use crate::series::{SeriesCtx, ValSeries};

/// A unit quaternion `w + x i + y j + z k`, unit modulo the truncation.
#[derive(Clone, Debug, PartialEq)]
pub struct Quaternion {
    pub w: ValSeries,
    pub x: ValSeries,
    pub y: ValSeries,
    pub z: ValSeries,
}

impl Quaternion {
    pub fn new(w: ValSeries, x: ValSeries, y: ValSeries, z: ValSeries) -> Result<Self> {
        let q = Quaternion { w, x, y, z };
        if !q.norm2().is_equiv(&ValSeries::one(&q.w.ctx())) {
            return Err(Error::NotUnit);
        }
        Ok(q)
    }

    pub fn one(ctx: &SeriesCtx) -> Self {
        Quaternion {
            w: ValSeries::one(ctx),
            x: ValSeries::zero(ctx),
            y: ValSeries::zero(ctx),
            z: ValSeries::zero(ctx),
        }
    }

    /// Rational point of the unit sphere S³ through the Cayley-style
    /// parametrisation `((1-|u|²), 2u) / (1+|u|²)`; exactly unit.
    pub fn from_vector_param(u: &Vec3) -> Quaternion {
        let ctx = u.x.ctx();
        let n2 = u.norm2();
        let one = ValSeries::one(&ctx);
        let denom_inv = (&one + &n2).inv().expect("1+|u|^2 is a unit");
        let v = u.scale(&(&ValSeries::from_int(2, &ctx) * &denom_inv));
        Quaternion {
            w: &(&one - &n2) * &denom_inv,
            x: v.x,
            y: v.y,
            z: v.z,
        }
    }

    pub fn norm2(&self) -> ValSeries {
        &(&(&self.w * &self.w) + &(&self.x * &self.x))
            + &(&(&self.y * &self.y) + &(&self.z * &self.z))
    }

    /// Scalar part.
    pub fn re(&self) -> &ValSeries {
        &self.w
    }

    pub fn vector(&self) -> Vec3 {
        Vec3 {
            x: self.x.clone(),
            y: self.y.clone(),
            z: self.z.clone(),
        }
    }

    pub fn conj(&self) -> Quaternion {
        Quaternion {
            w: self.w.clone(),
            x: -&self.x,
            y: -&self.y,
            z: -&self.z,
        }
    }

    pub fn neg(&self) -> Quaternion {
        Quaternion {
            w: -&self.w,
            x: -&self.x,
            y: -&self.y,
            z: -&self.z,
        }
    }

    /// Hamilton product.
    pub fn mul(&self, q: &Quaternion) -> Quaternion {
        let (a, b, c, d) = (&self.w, &self.x, &self.y, &self.z);
        let (e, f, g, h) = (&q.w, &q.x, &q.y, &q.z);
        Quaternion {
            w: &(&(a * e) - &(b * f)) - &(&(c * g) + &(d * h)),
            x: &(&(a * f) + &(b * e)) + &(&(c * h) - &(d * g)),
            y: &(&(a * g) - &(b * h)) + &(&(c * e) + &(d * f)),
            z: &(&(a * h) + &(b * g)) - &(&(c * f) - &(d * e)),
        }
    }

    /// Conjugation action `self * q * self^{-1}` (inverse via conjugate,
    /// exact for unit quaternions).
    pub fn conj_by(&self, q: &Quaternion) -> Quaternion {
        self.mul(q).mul(&self.conj())
    }

    pub fn is_equiv(&self, q: &Quaternion) -> bool {
        self.w.is_equiv(&q.w)
            && self.x.is_equiv(&q.x)
            && self.y.is_equiv(&q.y)
            && self.z.is_equiv(&q.z)
    }

    /// Displacement from 1 lies in the maximal ideal: membership in
    /// Spin(3)^00.
    pub fn in_spin00(&self) -> bool {
        let ctx = self.w.ctx();
        (&self.w - &ValSeries::one(&ctx)).in_m()
            && self.x.in_m()
            && self.y.in_m()
            && self.z.in_m()
    }

    /// The covering homomorphism onto SO(3): the standard quadratic-in-
    /// components rotation matrix. Kernel {±1}.
    pub fn spin_pi(&self) -> SeriesMatrix {
        let ctx = self.w.ctx();
        let two = ValSeries::from_int(2, &ctx);
        let one = ValSeries::one(&ctx);
        let (w, x, y, z) = (&self.w, &self.x, &self.y, &self.z);
        let e = |v: ValSeries| v;
        SeriesMatrix::new(
            3,
            3,
            vec![
                e(&one - &(&two * &(&(y * y) + &(z * z)))),
                e(&two * &(&(x * y) - &(w * z))),
                e(&two * &(&(x * z) + &(w * y))),
                e(&two * &(&(x * y) + &(w * z))),
                e(&one - &(&two * &(&(x * x) + &(z * z)))),
                e(&two * &(&(y * z) - &(w * x))),
                e(&two * &(&(x * z) - &(w * y))),
                e(&two * &(&(y * z) + &(w * x))),
                e(&one - &(&two * &(&(x * x) + &(y * y)))),
            ],
        )
        .expect("3x3 shape")
    }
}

/// Lifts a rotation near the identity to the unit quaternion near 1; the
/// inverse of `spin_pi` on the infinitesimal neighbourhood, exact up to one
/// square root.
pub fn spin_lift(m: &SeriesMatrix) -> Result<Quaternion> {
    if m.rows() != 3 || m.cols() != 3 {
        return Err(Error::ShapeMismatch {
            expected: "3x3".into(),
            got: format!("{}x{}", m.rows(), m.cols()),
        });
    }
    let ctx = m.ctx();
    let tr = m.trace();
    // w = sqrt((1+tr)/4), near 1 for rotations near the identity
    let w2 = (&ValSeries::one(&ctx) + &tr).scale_rat(&crate::scalar::rat(1, 4));
    let w = w2.sqrt()?;
    let wi4 = (&ValSeries::from_int(4, &ctx) * &w).inv()?;
    let x = &(m.at(2, 1) - m.at(1, 2)) * &wi4;
    let y = &(m.at(0, 2) - m.at(2, 0)) * &wi4;
    let z = &(m.at(1, 0) - m.at(0, 1)) * &wi4;
    Quaternion::new(w, x, y, z)
}

/// The footnote facts about scalar parts, decided exactly for one pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarPartFact {
    /// Precondition Re(a) = Re(b) fails; nothing to check.
    Skipped,
    /// Re(ab) = Re(aa); the flag records whether a = b as required.
    EqualityBranch { pair_equal: bool },
    /// Re(ab) > Re(aa); the flag records whether a != b as required.
    StrictInequality { pair_distinct: bool },
    /// Re(ab) < Re(aa): a counterexample to the claimed inequality.
    Violation,
}

/// For unit quaternions with equal scalar parts: Re(a*b) >= Re(a*a) with
/// equality exactly for a = b.
pub fn scalar_part_facts(a: &Quaternion, b: &Quaternion) -> Result<ScalarPartFact> {
    if !a.re().is_equiv(b.re()) {
        return Ok(ScalarPartFact::Skipped);
    }
    let diff = &a.mul(b).w - &a.mul(a).w;
    Ok(match diff.sign()? {
        0 => ScalarPartFact::EqualityBranch {
            pair_equal: a.is_equiv(b),
        },
        s if s > 0 => ScalarPartFact::StrictInequality {
            pair_distinct: !a.is_equiv(b),
        },
        _ => ScalarPartFact::Violation,
    })
}

/// Quaternion JSON: {"w": .., "x": .., "y": .., "z": ..} as expression strings.
impl serde::Serialize for Quaternion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Quaternion", 4)?;
        st.serialize_field("w", &self.w.to_string())?;
        st.serialize_field("x", &self.x.to_string())?;
        st.serialize_field("y", &self.y.to_string())?;
        st.serialize_field("z", &self.z.to_string())?;
        st.end()
    }
}

pub fn quaternion_from_json(value: &serde_json::Value, ctx: &SeriesCtx) -> Result<Quaternion> {
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Config("quaternion JSON must be an object".into()))?;
    let get = |k: &str| -> Result<ValSeries> {
        let text = obj
            .get(k)
            .and_then(|v| v.as_str())
            .ok_or_else(|| Error::Config(format!("missing component {k}")))?;
        crate::parse::parse_expr(text, ctx)
    };
    let w = get("w")?;
    let x = get("x")?;
    let y = get("y")?;
    let z = get("z")?;
    Quaternion::new(w, x, y, z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_expr;

    fn ctx() -> SeriesCtx {
        SeriesCtx::default()
    }

    fn s(t: &str) -> ValSeries {
        parse_expr(t, &ctx()).unwrap()
    }

    #[test]
    fn one_maps_to_identity() {
        let q = Quaternion::one(&ctx());
        assert!(q.spin_pi().is_identity());
    }

    #[test]
    fn k_quaternion_maps_to_half_turn() {
        let q = Quaternion::new(s("0"), s("0"), s("0"), s("1")).unwrap();
        let m = q.spin_pi();
        let expect = SeriesMatrix::new(
            3,
            3,
            ["-1", "0", "0", "0", "-1", "0", "0", "0", "1"]
                .iter()
                .map(|t| s(t))
                .collect(),
        )
        .unwrap();
        assert!(m.is_equiv(&expect));
        // antipodal point has the same image
        assert!(q.neg().spin_pi().is_equiv(&m));
    }

    #[test]
    fn covering_is_homomorphism_spot() {
        let u = Vec3::new(s("1/2"), s("e"), s("1/3"));
        let v = Vec3::new(s("-1/5"), s("2"), s("e^2"));
        let p = Quaternion::from_vector_param(&u);
        let q = Quaternion::from_vector_param(&v);
        let lhs = p.mul(&q).spin_pi();
        let rhs = &p.spin_pi() * &q.spin_pi();
        assert!(lhs.is_equiv(&rhs));
    }

    #[test]
    fn lift_inverts_projection_near_identity() {
        let u = Vec3::new(s("e"), s("e^2/2"), s("-e"));
        let q = Quaternion::from_vector_param(&u);
        assert!(q.in_spin00());
        let m = q.spin_pi();
        let lifted = spin_lift(&m).unwrap();
        assert!(lifted.is_equiv(&q));
    }

    #[test]
    fn non_unit_rejected() {
        assert!(matches!(
            Quaternion::new(s("1"), s("1"), s("0"), s("0")),
            Err(Error::NotUnit)
        ));
    }

    #[test]
    fn scalar_part_fact_branches() {
        let a = Quaternion::from_vector_param(&Vec3::new(s("1/2"), s("0"), s("0")));
        // same scalar part, distinct vector: rotate the vector part exactly
        let b = Quaternion::new(
            a.w.clone(),
            s("0"),
            a.x.clone(),
            s("0"),
        )
        .unwrap();
        match scalar_part_facts(&a, &b).unwrap() {
            ScalarPartFact::StrictInequality { pair_distinct } => assert!(pair_distinct),
            other => panic!("expected strict branch, got {other:?}"),
        }
        match scalar_part_facts(&a, &a).unwrap() {
            ScalarPartFact::EqualityBranch { pair_equal } => assert!(pair_equal),
            other => panic!("expected equality branch, got {other:?}"),
        }
        // different scalar parts are skipped
        let c = Quaternion::from_vector_param(&Vec3::new(s("1/3"), s("0"), s("0")));
        assert_eq!(scalar_part_facts(&a, &c).unwrap(), ScalarPartFact::Skipped);
    }

    #[test]
    fn conjugation_preserves_scalar_part_spot() {
        let q = Quaternion::from_vector_param(&Vec3::new(s("1/2"), s("1/3"), s("-1/7")));
        let a = Quaternion::from_vector_param(&Vec3::new(s("e"), s("2"), s("1/2")));
        assert!(q.conj_by(&a).re().is_equiv(a.re()));
    }

    #[test]
    fn json_roundtrip() {
        let q = Quaternion::from_vector_param(&Vec3::new(s("1/2"), s("e"), s("0")));
        let json = serde_json::to_value(&q).unwrap();
        let back = quaternion_from_json(&json, &ctx()).unwrap();
        assert!(back.is_equiv(&q));
    }
}
