//! The SO(3) rotation calculus: the axis/angle surjection with tan-half-angle
//! parameters, centralizers and their definable order, commutator
//! surjectivity of the infinitesimal subgroup, and the symmetric-interval
//! probe on products of two conjugates.
//!
//! Angles are never stored as transcendental values: a planar rotation is its
//! tan-half-angle parameter, which makes every map here rational and puts the
//! infinitesimal rotations exactly at parameters of positive valuation.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::matrix::SeriesMatrix;
use crate::scalar::{rat_int, ExactScalar, Rational};
use crate::series::{SeriesCtx, SeriesOrd, ValSeries, Valuation};

/// A triple of series, used for axes, rotation vectors and quaternion parts.
#[derive(Clone, Debug, PartialEq)]
pub struct Vec3 {
    pub x: ValSeries,
    pub y: ValSeries,
    pub z: ValSeries,
}

impl Vec3 {
    pub fn new(x: ValSeries, y: ValSeries, z: ValSeries) -> Self {
        Vec3 { x, y, z }
    }

    pub fn zero(ctx: &SeriesCtx) -> Self {
        Vec3::new(
            ValSeries::zero(ctx),
            ValSeries::zero(ctx),
            ValSeries::zero(ctx),
        )
    }

    pub fn basis(k: usize, ctx: &SeriesCtx) -> Self {
        let mut v = Vec3::zero(ctx);
        *v.coord_mut(k) = ValSeries::one(ctx);
        v
    }

    pub fn coord(&self, k: usize) -> &ValSeries {
        match k {
            0 => &self.x,
            1 => &self.y,
            _ => &self.z,
        }
    }

    fn coord_mut(&mut self, k: usize) -> &mut ValSeries {
        match k {
            0 => &mut self.x,
            1 => &mut self.y,
            _ => &mut self.z,
        }
    }

    pub fn add(&self, o: &Vec3) -> Vec3 {
        Vec3::new(&self.x + &o.x, &self.y + &o.y, &self.z + &o.z)
    }

    pub fn sub(&self, o: &Vec3) -> Vec3 {
        Vec3::new(&self.x - &o.x, &self.y - &o.y, &self.z - &o.z)
    }

    pub fn neg(&self) -> Vec3 {
        Vec3::new(-&self.x, -&self.y, -&self.z)
    }

    pub fn scale(&self, c: &ValSeries) -> Vec3 {
        Vec3::new(&self.x * c, &self.y * c, &self.z * c)
    }

    pub fn dot(&self, o: &Vec3) -> ValSeries {
        &(&(&self.x * &o.x) + &(&self.y * &o.y)) + &(&self.z * &o.z)
    }

    pub fn cross(&self, o: &Vec3) -> Vec3 {
        Vec3::new(
            &(&self.y * &o.z) - &(&self.z * &o.y),
            &(&self.z * &o.x) - &(&self.x * &o.z),
            &(&self.x * &o.y) - &(&self.y * &o.x),
        )
    }

    pub fn norm2(&self) -> ValSeries {
        self.dot(self)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero() && self.z.is_zero()
    }

    pub fn is_equiv(&self, o: &Vec3) -> bool {
        self.sub(o).is_zero()
    }

    pub fn in_m(&self) -> bool {
        self.x.in_m() && self.y.in_m() && self.z.in_m()
    }

    /// The skew-symmetric matrix acting as `v x .`.
    pub fn skew(&self) -> SeriesMatrix {
        let ctx = self.x.ctx();
        let z = || ValSeries::zero(&ctx);
        SeriesMatrix::new(
            3,
            3,
            vec![
                z(),
                -&self.z,
                self.y.clone(),
                self.z.clone(),
                z(),
                -&self.x,
                -&self.y,
                self.x.clone(),
                z(),
            ],
        )
        .expect("3x3 shape")
    }

    /// Image under a 3x3 matrix.
    pub fn apply(&self, m: &SeriesMatrix) -> Vec3 {
        let row = |i: usize| {
            &(&(m.at(i, 0) * &self.x) + &(m.at(i, 1) * &self.y)) + &(m.at(i, 2) * &self.z)
        };
        Vec3::new(row(0), row(1), row(2))
    }
}

/// Extracts v from the skew part: (M32-M23, M13-M31, M21-M12).
fn skew_vector(m: &SeriesMatrix) -> Vec3 {
    Vec3::new(
        m.at(2, 1) - m.at(1, 2),
        m.at(0, 2) - m.at(2, 0),
        m.at(1, 0) - m.at(0, 1),
    )
}

/// The rotation vector t*L of a rotation matrix: skew part over trace + 1.
/// Undefined for involutions (trace = -1).
pub fn rotation_vector(m: &SeriesMatrix) -> Result<Vec3> {
    let denom = &m.trace() + &ValSeries::one(&m.ctx());
    let inv = denom.inv().map_err(|_| Error::AxisUndetermined)?;
    Ok(skew_vector(m).scale(&inv))
}

/// A point of the unit sphere, identified with a rotation ray.
#[derive(Clone, Debug, PartialEq)]
pub struct Axis(Vec3);

impl Axis {
    pub fn new(v: Vec3) -> Result<Self> {
        let one = ValSeries::one(&v.x.ctx());
        if !v.norm2().is_equiv(&one) {
            return Err(Error::Domain("axis is not a unit vector".into()));
        }
        Ok(Axis(v))
    }

    /// Rational point of S² by stereographic parametrisation:
    /// `(2u, 2v, 1-u²-v²)/(1+u²+v²)`, exactly unit.
    pub fn from_stereographic(u: &Rational, v: &Rational, ctx: &SeriesCtx) -> Axis {
        let us = ValSeries::from_rational(u.clone(), ctx);
        let vs = ValSeries::from_rational(v.clone(), ctx);
        let one = ValSeries::one(ctx);
        let n2 = &(&us * &us) + &(&vs * &vs);
        let denom_inv = (&one + &n2).inv().expect("1+u²+v² is a positive rational");
        let two = ValSeries::from_int(2, ctx);
        Axis(Vec3::new(
            &(&two * &us) * &denom_inv,
            &(&two * &vs) * &denom_inv,
            &(&one - &n2) * &denom_inv,
        ))
    }

    pub fn x(ctx: &SeriesCtx) -> Axis {
        Axis(Vec3::basis(0, ctx))
    }

    pub fn y(ctx: &SeriesCtx) -> Axis {
        Axis(Vec3::basis(1, ctx))
    }

    pub fn z(ctx: &SeriesCtx) -> Axis {
        Axis(Vec3::basis(2, ctx))
    }

    pub fn vector(&self) -> &Vec3 {
        &self.0
    }

    pub fn neg(&self) -> Axis {
        Axis(self.0.neg())
    }

    /// Image under a rotation; stays on the sphere.
    pub fn rotate(&self, g: &SeriesMatrix) -> Axis {
        Axis(self.0.apply(g))
    }

    /// Sign of the first coordinate that is nonzero modulo the truncation;
    /// the orientation convention for the (t, L) vs (-t, -L) ambiguity.
    fn orientation(&self) -> Result<i8> {
        for k in 0..3 {
            let s = self.0.coord(k).sign()?;
            if s != 0 {
                return Ok(s);
            }
        }
        Err(Error::AxisUndetermined)
    }
}

/// Tan-half-angle parameter of a planar rotation; infinitesimal parameter
/// means infinitesimal rotation.
#[derive(Clone, Debug, PartialEq)]
pub struct AngleParam(pub ValSeries);

impl AngleParam {
    pub fn zero(ctx: &SeriesCtx) -> Self {
        AngleParam(ValSeries::zero(ctx))
    }

    pub fn in_m(&self) -> bool {
        self.0.in_m()
    }

    /// Parameter of the square of the rotation: tan-half-angle doubling
    /// `2t/(1-t²)`.
    pub fn doubled(&self) -> Result<AngleParam> {
        let t = &self.0;
        let one = ValSeries::one(&t.ctx());
        let denom = &one - &(t * t);
        Ok(AngleParam(
            (&ValSeries::from_int(2, &t.ctx()) * t).div(&denom)?,
        ))
    }
}

/// The axis-angle surjection onto SO(3): a Rodrigues-type rational formula
/// in the tan-half-angle parameter.
///
/// `rho(t, L) = I + sin·K + (1-cos)·K²` with `sin = 2t/(1+t²)`,
/// `1-cos = 2t²/(1+t²)` and `K` the skew matrix of L. Satisfies
/// `rho(-t, -L) = rho(t, L)` and lands in SO(3) exactly.
pub fn rho(t: &AngleParam, axis: &Axis) -> SeriesMatrix {
    let ctx = t.0.ctx();
    let one = ValSeries::one(&ctx);
    let two = ValSeries::from_int(2, &ctx);
    let t2 = &t.0 * &t.0;
    let denom_inv = (&one + &t2).inv().expect("1+t² is a unit");
    let sin = &(&two * &t.0) * &denom_inv;
    let omc = &(&two * &t2) * &denom_inv;
    let k = axis.vector().skew();
    let k2 = &k * &k;
    let id = SeriesMatrix::identity(3, &ctx);
    &(&id + &k.scale(&sin)) + &k2.scale(&omc)
}

/// Partial inverse of `rho`: axis from the skew part, parameter from the
/// trace, with the orientation fixed by the sign convention on the axis.
/// Uses at most one square root.
pub fn axis_angle(m: &SeriesMatrix) -> Result<(AngleParam, Axis)> {
    let v = rotation_vector(m)?;
    if v.is_zero() {
        return Err(Error::AxisUndetermined);
    }
    // v = t*L, |v| = |t|; the convention says the first nonzero coordinate
    // of L is positive, so t carries the sign of that coordinate of v.
    let norm = v.norm2().sqrt()?;
    let mut sign = 0i8;
    for k in 0..3 {
        let s = v.coord(k).sign()?;
        if s != 0 {
            sign = s;
            break;
        }
    }
    let t = if sign < 0 { -&norm } else { norm };
    let t_inv = t.inv()?;
    let axis = Axis::new(v.scale(&t_inv))?;
    Ok((AngleParam(t), axis))
}

/// Conjugation acts by rotating the axis: checks
/// `g rho(t,L) g^{-1} = rho(t, gL)` exactly modulo the truncation.
pub fn conj_equivariance_check(
    t: &AngleParam,
    axis: &Axis,
    g: &SeriesMatrix,
) -> Result<bool> {
    let lhs = &(g * &rho(t, axis)) * &g.transpose();
    let rhs = rho(t, &axis.rotate(g));
    Ok(lhs.is_equiv(&rhs))
}

/// Centralizer membership: commuting with g, for rotations.
pub fn centralizer_membership(g: &SeriesMatrix, x: &SeriesMatrix) -> bool {
    (g * x).is_equiv(&(x * g))
}

/// The angle parameter of a rotation about the oriented axis of g.
///
/// For x in the centralizer of g this is the coordinate of the rotation
/// vector along g's axis, a rational expression in the entries.
pub fn angle_param_about(axis: &Axis, x: &SeriesMatrix) -> Result<ValSeries> {
    let id = SeriesMatrix::identity(3, &x.ctx());
    if (x - &id).is_zero() {
        return Ok(ValSeries::zero(&x.ctx()));
    }
    Ok(rotation_vector(x)?.dot(axis.vector()))
}

/// The definable linear order on the infinitesimal centralizer of g:
/// comparison of angle parameters about g's oriented axis.
pub fn centralizer_order(
    g: &SeriesMatrix,
    x: &SeriesMatrix,
    y: &SeriesMatrix,
) -> Result<SeriesOrd> {
    let (_, axis) = axis_angle(g)?;
    for m in [x, y] {
        if !centralizer_membership(g, m) || !m.displacement_in_m() {
            return Err(Error::Domain(
                "argument is not in the infinitesimal centralizer".into(),
            ));
        }
    }
    let px = angle_param_about(&axis, x)?;
    let py = angle_param_about(&axis, y)?;
    px.cmp_series(&py)
}

/// A rotation by pi about the line of m (need not be unit): `2mm^T/|m|² - I`.
/// Exact, rational in m, and maps every vector orthogonal to m to its
/// negative.
pub fn half_turn_about(m: &Vec3) -> Result<SeriesMatrix> {
    let ctx = m.x.ctx();
    let n2_inv = m.norm2().inv().map_err(|_| Error::AxisUndetermined)?;
    let two = ValSeries::from_int(2, &ctx);
    let id = SeriesMatrix::identity(3, &ctx);
    let outer = SeriesMatrix::from_fn(3, 3, |i, j| m.coord(i) * m.coord(j));
    Ok(&outer.scale(&(&two * &n2_inv)) - &id)
}

/// A rotation taking `from` to `to` (both unit modulo truncation), built from
/// two reflections, hence rational in the inputs.
pub fn rotation_taking(from: &Vec3, to: &Vec3) -> Result<SeriesMatrix> {
    let w = from.add(to);
    if let Ok(n_inv) = w.norm2().inv() {
        // H_to . H_w maps from -> -to -> to
        let h1 = householder(&w, &n_inv);
        let h2 = householder(to, &to.norm2().inv()?);
        return Ok(&h2 * &h1);
    }
    // antipodal case: to = -from; a half turn about any line orthogonal to
    // from does it
    for k in 0..3 {
        let m = from.cross(&Vec3::basis(k, &from.x.ctx()));
        if m.norm2().inv().is_ok() {
            return half_turn_about(&m);
        }
    }
    Err(Error::AxisUndetermined)
}

fn householder(w: &Vec3, n2_inv: &ValSeries) -> SeriesMatrix {
    let ctx = w.x.ctx();
    let two = ValSeries::from_int(2, &ctx);
    let id = SeriesMatrix::identity(3, &ctx);
    let outer = SeriesMatrix::from_fn(3, 3, |i, j| w.coord(i) * w.coord(j));
    &id - &outer.scale(&(&two * n2_inv))
}

/// Decomposition of an infinitesimal rotation for the solver: rotation
/// vector, angle parameter, unit axis, and the frame-change into the
/// standard position.
struct StandardFrame {
    /// rotation with frame * e3 = axis
    frame: SeriesMatrix,
    t: ValSeries,
}

fn to_standard_frame(target: &SeriesMatrix) -> Result<StandardFrame> {
    let ctx = target.ctx();
    let v = rotation_vector(target)?;
    // t = ±|v|; the square root may adjoin one quadratic radicand
    let norm2 = v.norm2();
    let (e0, c0) = norm2
        .leading()
        .map(|(e, c)| (e, c.clone()))
        .ok_or(Error::AxisUndetermined)?;
    let root_coeff = c0.sqrt_extending()?;
    // rebuild sqrt through the generic series sqrt after scaling the leading
    // coefficient to 1, so any adjoined radicand flows through
    let scaled = norm2.scale(&root_coeff.checked_mul(&root_coeff)?.inv()?);
    let t = scaled.sqrt()?.scale(&root_coeff);
    debug_assert_eq!(t.val(), Valuation::Finite(e0 / rat_int(2)));
    let t_inv = t.inv()?;
    let axis = v.scale(&t_inv);
    // rotation taking e3 to the axis
    let e3 = Vec3::basis(2, &ctx);
    let frame = rotation_taking(&e3, &axis)?;
    Ok(StandardFrame { frame, t })
}

/// Writes an infinitesimal rotation as a single commutator (a, b) = aba⁻¹b⁻¹
/// of infinitesimal rotations.
///
/// Strategy: move the target axis to e3, seed with rotations about e1 and e2
/// whose parameters carry half the target valuation, then correct by a
/// valuation-graded Newton iteration whose linearised system is solved in
/// closed form.
pub fn commutator_solve(
    target: &SeriesMatrix,
) -> Result<(SeriesMatrix, SeriesMatrix)> {
    let ctx = target.ctx();
    let id = SeriesMatrix::identity(3, &ctx);
    if (target - &id).is_zero() {
        return Ok((id.clone(), id));
    }
    if !target.displacement_in_m() {
        return Err(Error::Domain("target is not infinitesimal".into()));
    }
    let frame = to_standard_frame(target)?;
    let t = frame.t;
    let v = match t.val() {
        Valuation::Finite(v) => v,
        Valuation::Infinite => unreachable!("nonzero target"),
    };
    // headroom precondition: val(t) < trunc/2
    let trunc = ctx.trunc();
    if v.clone() * rat_int(2) >= trunc {
        return Err(Error::PrecisionExhausted { achieved: v });
    }
    let half = v / rat_int(2);
    let sigma_b = ValSeries::monomial(&half, ExactScalar::one(), &ctx)?;
    let sigma_b_inv = sigma_b.inv()?;
    // seed: sigma_a * sigma_b = t/2
    let mut sigma_a = &t.scale_rat(&crate::scalar::rat(1, 2)) * &sigma_b_inv;
    let mut alpha = ValSeries::zero(&ctx);
    let mut beta = ValSeries::zero(&ctx);
    let two_inv = ValSeries::from_rational(crate::scalar::rat(1, 2), &ctx);
    // target rotation vector in the standard frame is t * e3
    let tau = Vec3::new(ValSeries::zero(&ctx), ValSeries::zero(&ctx), t.clone());
    let mut last_gamma: Option<Valuation> = None;
    for _ in 0..64 {
        let a_vec = Vec3::new(sigma_a.clone(), ValSeries::zero(&ctx), alpha.clone());
        let b_vec = Vec3::new(ValSeries::zero(&ctx), sigma_b.clone(), beta.clone());
        let resid = tau.sub(&commutator_rotation_vector(&a_vec, &b_vec)?);
        if resid.is_zero() {
            // done: conjugate back to the ambient frame
            let a = &(&frame.frame * &cayley3(&a_vec)?) * &frame.frame.transpose();
            let b = &(&frame.frame * &cayley3(&b_vec)?) * &frame.frame.transpose();
            return Ok((a, b));
        }
        let gamma = resid_val(&resid);
        if let Some(prev) = &last_gamma {
            if gamma <= *prev {
                return Err(Error::PrecisionExhausted {
                    achieved: match prev {
                        Valuation::Finite(g) => g.clone(),
                        Valuation::Infinite => trunc,
                    },
                });
            }
        }
        last_gamma = Some(gamma);
        // linearised system 2(da x b + a x db) = r for unknowns
        // (dsigma, dalpha, dbeta) along (e1, e3) for a and e3 for b:
        //   dsigma = r3 / (2 sigma_b)
        //   dalpha = -r1 / (2 sigma_b)
        //   dbeta  = -(r2 + 2 beta dsigma) / (2 sigma_a)
        let dsigma = &(&resid.z * &sigma_b_inv) * &two_inv;
        let dalpha = -&(&(&resid.x * &sigma_b_inv) * &two_inv);
        let numer = &resid.y + &(&(&ValSeries::from_int(2, &ctx) * &beta) * &dsigma);
        let dbeta = -&(&(&numer * &sigma_a.inv()?) * &two_inv);
        sigma_a = &sigma_a + &dsigma;
        alpha = &alpha + &dalpha;
        beta = &beta + &dbeta;
    }
    Err(Error::PrecisionExhausted { achieved: trunc })
}

fn resid_val(v: &Vec3) -> Valuation {
    [v.x.val(), v.y.val(), v.z.val()]
        .into_iter()
        .min()
        .unwrap()
}

/// Cayley transform of a rotation vector: exactly `rho(|v|, v/|v|)` without
/// taking any square root.
fn cayley3(v: &Vec3) -> Result<SeriesMatrix> {
    let ctx = v.x.ctx();
    let id = SeriesMatrix::identity(3, &ctx);
    let k = v.skew();
    let i_minus = &id - &k;
    let inv = i_minus
        .inverse()
        .map_err(|_| Error::ChartDomain("I - K singular".into()))?;
    Ok(&(&id + &k) * &inv)
}

/// Exact rotation vector of the commutator of two rotations given by their
/// rotation vectors.
///
/// With s = 1 - a·b, the commutator of the rotations with vectors a, b has
/// rotation vector `[2s(a x b) + 2(a+b) x (a x b)] / D`,
/// `D = 1 + |a|² + |b|² - |a|²|b|² + 2(a·b)²`.
fn commutator_rotation_vector(a: &Vec3, b: &Vec3) -> Result<Vec3> {
    let ctx = a.x.ctx();
    let one = ValSeries::one(&ctx);
    let two = ValSeries::from_int(2, &ctx);
    let ab = a.dot(b);
    let cross = a.cross(b);
    let s = &one - &ab;
    let num = cross
        .scale(&(&two * &s))
        .add(&a.add(b).cross(&cross).scale(&two));
    let d = &(&(&one + &a.norm2()) + &(&b.norm2() - &(&a.norm2() * &b.norm2())))
        + &(&two * &(&ab * &ab));
    let d_inv = d.inv()?;
    Ok(num.scale(&d_inv))
}

/// Outcome of probing the set `g^S g^S ∩ C(g)` by sampling.
#[derive(Clone, Debug, Default, serde::Serialize)]
pub struct IntervalProbeReport {
    pub samples: usize,
    /// products recorded in the centralizer (engineered + trivial families)
    pub recorded: usize,
    /// random pairs whose product missed the centralizer
    pub misses: usize,
    /// engineered constructions that could not be completed exactly
    pub skipped: usize,
    /// recorded parameters strictly beyond the parameter of g²
    pub bound_violations: usize,
    /// disagreements between the parameter route and the trace route
    pub route_disagreements: usize,
    /// parameter 0 (the identity-adjacent point) was recorded
    pub identity_adjacent: bool,
    /// every recorded parameter has its negation recorded
    pub inversion_symmetric: bool,
}

/// Samples products of two conjugates of g and inspects those that land in
/// the centralizer of g.
///
/// Random conjugator pairs almost never land there in exact arithmetic and
/// are counted as misses; an engineered family solves the one-parameter
/// trace equation to produce genuine interior points, together with their
/// mirror images (for inversion symmetry) and the trivial endpoints g², e.
pub fn symmetric_interval_probe(
    g: &SeriesMatrix,
    conjugators: &[SeriesMatrix],
) -> Result<IntervalProbeReport> {
    let ctx = g.ctx();
    let id = SeriesMatrix::identity(3, &ctx);
    if (g - &id).is_zero() || !g.displacement_in_m() {
        return Err(Error::Domain(
            "probe needs a non-identity infinitesimal rotation".into(),
        ));
    }
    let (t, axis) = axis_angle(g)?;
    let k = axis.vector().skew();
    let k2 = &k * &k;
    // parameter of g² for the footnote bound
    let t2 = t.doubled()?.0;
    let t2_sq = &t2 * &t2;
    let g2 = g * g;
    let tr_g2 = g2.trace();

    let mut report = IntervalProbeReport {
        samples: conjugators.len(),
        ..Default::default()
    };
    let mut recorded: Vec<ValSeries> = Vec::new();
    let mut record = |report: &mut IntervalProbeReport, s: ValSeries, x: &SeriesMatrix| {
        // dual routes: parameter comparison and trace comparison must agree
        let within_param = matches!(
            (&s * &s).cmp_series(&t2_sq),
            Ok(SeriesOrd::Lt) | Ok(SeriesOrd::EqModTrunc)
        );
        let within_trace = matches!(
            x.trace().cmp_series(&tr_g2),
            Ok(SeriesOrd::Gt) | Ok(SeriesOrd::EqModTrunc)
        );
        if within_param != within_trace {
            report.route_disagreements += 1;
        }
        if !within_param {
            report.bound_violations += 1;
        }
        if s.is_zero() {
            report.identity_adjacent = true;
        }
        recorded.push(s);
        report.recorded += 1;
    };

    // trivial family: a1 = a2 = e gives g·g
    record(&mut report, t2.clone(), &g2);
    // trivial family: g^{a2} = (g^{a1})^{-1} gives e
    record(&mut report, ValSeries::zero(&ctx), &id);

    for a1 in conjugators {
        // engineered hit: choose a2 so that g^{a1} g^{a2} lands in C(g).
        // with M = (g^{a1})^{-1}, the trace equation
        // tr(M rho(s, L)) = tr(g) has the root s* = -tr(MK)/tr(MK²).
        let m = &(a1 * &g.transpose()) * &a1.transpose();
        let denom = (&m * &k2).trace();
        let s_star = match denom.inv() {
            Ok(d_inv) => -&(&(&m * &k).trace() * &d_inv),
            Err(_) => {
                report.skipped += 1;
                continue;
            }
        };
        let s_param = AngleParam(s_star.clone());
        let z = &m * &rho(&s_param, &axis);
        // z must be a conjugate of g: read its axis from the rotation vector
        let ok = (|| -> Result<(SeriesMatrix, SeriesMatrix)> {
            let vz = rotation_vector(&z)?;
            let lz = vz.scale(&t.0.inv()?);
            if !lz.norm2().is_equiv(&ValSeries::one(&ctx)) {
                return Err(Error::AxisUndetermined);
            }
            let a2 = rotation_taking(axis.vector(), &lz)?;
            let gz = &(&a2 * g) * &a2.transpose();
            if !gz.is_equiv(&z) {
                return Err(Error::AxisUndetermined);
            }
            // mirror pair for inversion symmetry
            let m_flip = axis.vector().cross(&least_aligned_basis(axis.vector())?);
            let j0 = half_turn_about(&m_flip)?;
            let b1 = &a2 * &j0;
            let b2 = a1 * &j0;
            let x_mirror = &(&(&b1 * g) * &b1.transpose()) * &(&(&b2 * g) * &b2.transpose());
            Ok((&(&(a1 * g) * &a1.transpose()) * &gz, x_mirror))
        })();
        match ok {
            Ok((x, x_mirror)) => {
                if !centralizer_membership(g, &x) {
                    report.skipped += 1;
                    continue;
                }
                record(&mut report, s_star.clone(), &x);
                if centralizer_membership(g, &x_mirror) {
                    let s_mirror = angle_param_about(&axis, &x_mirror)?;
                    if s_mirror.is_equiv(&-&s_star) {
                        record(&mut report, s_mirror, &x_mirror);
                    } else {
                        report.skipped += 1;
                    }
                } else {
                    report.skipped += 1;
                }
            }
            Err(_) => {
                report.skipped += 1;
            }
        }
        // a genuinely random pair: the product misses the centralizer
        let random_pair = &(&(a1 * g) * &a1.transpose()) * g;
        if centralizer_membership(g, &random_pair) {
            let s = angle_param_about(&axis, &random_pair)?;
            record(&mut report, s, &random_pair);
        } else {
            report.misses += 1;
        }
    }

    // inversion symmetry of the recorded set, by structural matching
    let keys: HashSet<String> = recorded.iter().map(|s| s.to_string()).collect();
    report.inversion_symmetric = recorded
        .iter()
        .all(|s| keys.contains(&(-s).to_string()));
    Ok(report)
}

fn least_aligned_basis(v: &Vec3) -> Result<Vec3> {
    // basis vector with the smallest leading |component|: cross product with
    // it stays well away from zero
    let ctx = v.x.ctx();
    let mut best: Option<(usize, Valuation)> = None;
    for k in 0..3 {
        let val = v.coord(k).val();
        if best.as_ref().map_or(true, |(_, bv)| val > *bv) {
            best = Some((k, val));
        }
    }
    Ok(Vec3::basis(best.unwrap().0, &ctx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;
    use crate::parse::parse_expr;
    use crate::scalar::rat;

    fn ctx() -> SeriesCtx {
        SeriesCtx::default()
    }

    fn s(t: &str) -> ValSeries {
        parse_expr(t, &ctx()).unwrap()
    }

    fn eps_param() -> AngleParam {
        AngleParam(s("e"))
    }

    #[test]
    fn rho_at_zero_is_identity() {
        let m = rho(&AngleParam::zero(&ctx()), &Axis::z(&ctx()));
        assert!(m.is_identity());
    }

    #[test]
    fn rho_infinitesimal_about_z() {
        let m = rho(&eps_param(), &Axis::z(&ctx()));
        let c = s("(1-e^2)/(1+e^2)");
        let sn = s("2*e/(1+e^2)");
        assert!(m.at(0, 0).is_equiv(&c));
        assert!(m.at(0, 1).is_equiv(&-&sn));
        assert!(m.at(1, 0).is_equiv(&sn));
        assert!(m.at(2, 2).is_equiv(&ValSeries::one(&ctx())));
        let so3 = GroupSpec::so(3);
        assert!(so3.in_group(&m).unwrap());
        assert!(so3.in_g00(&m).unwrap());
    }

    #[test]
    fn rho_sign_symmetry() {
        let axis = Axis::from_stereographic(&rat(1, 2), &rat(-1, 3), &ctx());
        let m1 = rho(&eps_param(), &axis);
        let m2 = rho(&AngleParam(-&s("e")), &axis.neg());
        assert!(m1.is_equiv(&m2));
    }

    #[test]
    fn axis_angle_round_trip() {
        let axis = Axis::from_stereographic(&rat(3, 5), &rat(0, 1), &ctx());
        let m = rho(&AngleParam(s("e^2")), &axis);
        let (t, l) = axis_angle(&m).unwrap();
        assert!(rho(&t, &l).is_equiv(&m));
        // the convention may flip both signs together
        let matches_direct = t.0.is_equiv(&s("e^2")) && l.vector().is_equiv(axis.vector());
        let matches_flipped =
            t.0.is_equiv(&-&s("e^2")) && l.vector().is_equiv(&axis.vector().neg());
        assert!(matches_direct || matches_flipped);
        // orientation convention: first nonzero coordinate of the axis is positive
        assert_eq!(l.orientation().unwrap(), 1);
    }

    #[test]
    fn axis_angle_rejects_identity() {
        let id = SeriesMatrix::identity(3, &ctx());
        assert!(matches!(axis_angle(&id), Err(Error::AxisUndetermined)));
    }

    #[test]
    fn equivariance_spot_checks() {
        let axis = Axis::z(&ctx());
        let g = SeriesMatrix::identity(3, &ctx());
        assert!(conj_equivariance_check(&eps_param(), &axis, &g).unwrap());
        // diag(-1,-1,1) fixes the z axis
        let g2 = SeriesMatrix::new(
            3,
            3,
            ["-1", "0", "0", "0", "-1", "0", "0", "0", "1"]
                .iter()
                .map(|t| s(t))
                .collect(),
        )
        .unwrap();
        assert!(conj_equivariance_check(&eps_param(), &axis, &g2).unwrap());
    }

    #[test]
    fn centralizer_and_order() {
        let g = rho(&eps_param(), &Axis::z(&ctx()));
        let x = rho(&AngleParam(s("e^2")), &Axis::z(&ctx()));
        assert!(centralizer_membership(&g, &x));
        let y = rho(&AngleParam(s("e")), &Axis::x(&ctx()));
        assert!(!centralizer_membership(&g, &y));
        assert_eq!(centralizer_order(&g, &g, &x).unwrap(), SeriesOrd::Gt);
        assert_eq!(centralizer_order(&g, &x, &x).unwrap(), SeriesOrd::EqModTrunc);
        assert!(centralizer_order(&g, &y, &x).is_err());
    }

    #[test]
    fn order_respects_translation() {
        let g = rho(&eps_param(), &Axis::z(&ctx()));
        let x = rho(&AngleParam(s("e^2")), &Axis::z(&ctx()));
        let y = rho(&AngleParam(s("e")), &Axis::z(&ctx()));
        let z = rho(&AngleParam(s("e^3")), &Axis::z(&ctx()));
        let ord_before = centralizer_order(&g, &x, &y).unwrap();
        let ord_after = centralizer_order(&g, &(&x * &z), &(&y * &z)).unwrap();
        assert_eq!(ord_before, ord_after);
    }

    #[test]
    fn commutator_solve_identity() {
        let id = SeriesMatrix::identity(3, &ctx());
        let (a, b) = commutator_solve(&id).unwrap();
        assert!(a.is_identity() && b.is_identity());
    }

    #[test]
    fn commutator_solve_eps2_about_z() {
        let target = rho(&AngleParam(s("e^2")), &Axis::z(&ctx()));
        let (a, b) = commutator_solve(&target).unwrap();
        let so3 = GroupSpec::so(3);
        assert!(so3.in_g00(&a).unwrap());
        assert!(so3.in_g00(&b).unwrap());
        // parameters have half the target valuation
        let (ta, _) = axis_angle(&a).unwrap();
        assert_eq!(ta.0.val(), Valuation::Finite(rat_int(1)));
        // back-substitution
        let comm = &(&(&a * &b) * &a.transpose()) * &b.transpose();
        assert!((&comm - &target).is_zero());
    }

    #[test]
    fn commutator_solve_general_axis() {
        let axis = Axis::from_stereographic(&rat(1, 3), &rat(2, 5), &ctx());
        let target = rho(&AngleParam(s("e + e^2")), &axis);
        let (a, b) = commutator_solve(&target).unwrap();
        let comm = &(&(&a * &b) * &a.transpose()) * &b.transpose();
        assert!((&comm - &target).is_zero());
    }

    #[test]
    fn rotation_taking_maps_vectors() {
        let from = Vec3::basis(2, &ctx());
        let to = Axis::from_stereographic(&rat(1, 2), &rat(1, 3), &ctx());
        let r = rotation_taking(&from, to.vector()).unwrap();
        assert!(GroupSpec::so(3).in_group(&r).unwrap());
        assert!(from.apply(&r).is_equiv(to.vector()));
        // antipodal case
        let r2 = rotation_taking(&from, &from.neg()).unwrap();
        assert!(GroupSpec::so(3).in_group(&r2).unwrap());
        assert!(from.apply(&r2).is_equiv(&from.neg()));
    }
}
