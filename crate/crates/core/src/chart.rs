//! A chart on the infinitesimal subgroup built from conjugates of a
//! one-parameter centraliser arc, its exact Jacobian certificate, the
//! valuation-graded solver inverting it, and the pulled-back group operation.
//!
//! The map sends a tuple of infinitesimal arc parameters to the product of
//! conjugated arc points; its differential at the origin has columns
//! `Ad_{h_i}(X)` for the arc tangent X, and the conjugators are resampled
//! until the determinant valuation is certified small enough for Newton
//! solves to retain precision.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{lie_coords, GroupSpec};
use crate::matrix::SeriesMatrix;
use crate::rotations::{rho, AngleParam, Axis};
use crate::sample::{embed_block, Sampler};
use crate::scalar::{rat_int, Rational};
use crate::series::{SeriesCtx, ValSeries, Valuation};

/// The arc J: a one-parameter family of rotations inside the ambient group,
/// with its exact tangent generator at the identity.
#[derive(Clone, Debug)]
pub struct ArcJ {
    spec: GroupSpec,
    kind: ArcKind,
    tangent: SeriesMatrix,
}

#[derive(Clone, Debug)]
enum ArcKind {
    /// rho(t, axis) in the top-left 3x3 block of SO(n)
    SoBlock { axis: Axis },
    /// planar rotation in coordinates (i, j) of SU(n)
    SuBlock { i: usize, j: usize },
}

impl ArcJ {
    /// Arc of rotations about an axis, embedded in the top-left 3x3 block.
    pub fn so_block(spec: GroupSpec, axis: Axis) -> Result<ArcJ> {
        let n = match &spec {
            GroupSpec::So { n } if *n >= 3 => *n,
            _ => {
                return Err(Error::Unsupported(
                    "so-block arcs need an SO(n) ambient group with n >= 3".into(),
                ))
            }
        };
        let k3 = axis.vector().skew();
        let tangent = k3.embed_in_identity(n, 0);
        // embed_in_identity keeps identity off-block; zero it to get the
        // Lie-algebra element
        let ctx = tangent.ctx();
        let mut t = SeriesMatrix::zeros(n, n, &ctx);
        for i in 0..3 {
            for j in 0..3 {
                t.set(i, j, k3.at(i, j).clone());
            }
        }
        if t.is_zero() {
            return Err(Error::Domain("degenerate arc: zero tangent".into()));
        }
        Ok(ArcJ {
            spec,
            kind: ArcKind::SoBlock { axis },
            tangent: t,
        })
    }

    /// Arc of planar rotations in an su(2) root block.
    pub fn su_block(spec: GroupSpec, i: usize, j: usize) -> Result<ArcJ> {
        let n = match &spec {
            GroupSpec::Su { n } if *n >= 2 => *n,
            _ => {
                return Err(Error::Unsupported(
                    "su-block arcs need an SU(n) ambient group".into(),
                ))
            }
        };
        if i >= j || j >= n {
            return Err(Error::Domain("block indices out of range".into()));
        }
        let ctx = SeriesCtx::default();
        let mut t = SeriesMatrix::zeros(n, n, &ctx);
        t.set(i, j, ValSeries::one(&ctx));
        t.set(j, i, -&ValSeries::one(&ctx));
        Ok(ArcJ {
            spec,
            kind: ArcKind::SuBlock { i, j },
            tangent: t,
        })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    /// Tangent generator; the arc is `t -> point(t)` with derivative
    /// `2 * tangent` at zero.
    pub fn tangent(&self) -> &SeriesMatrix {
        &self.tangent
    }

    /// The arc point with tan-half-angle parameter t.
    pub fn point(&self, t: &ValSeries) -> SeriesMatrix {
        let n = self.spec.mat_dim();
        let ctx = t.ctx();
        match &self.kind {
            ArcKind::SoBlock { axis } => {
                let r3 = rho(&AngleParam(t.clone()), axis);
                r3.embed_in_identity(n, 0)
            }
            ArcKind::SuBlock { i, j } => {
                let one = ValSeries::one(&ctx);
                let t2 = t * t;
                let denom_inv = (&one + &t2).inv().expect("1+t² is a unit");
                let c = &(&one - &t2) * &denom_inv;
                let s = &(&ValSeries::from_int(2, &ctx) * t) * &denom_inv;
                let mut block = SeriesMatrix::zeros(2, 2, &ctx);
                block.set(0, 0, c.clone());
                block.set(0, 1, s.clone());
                block.set(1, 0, -&s);
                block.set(1, 1, c);
                embed_block(&block, n, *i, *j, &ctx)
            }
        }
    }
}

/// Conjugators and the certified Jacobian of the chart at the origin.
#[derive(Clone, Debug)]
pub struct ChartData {
    pub spec: GroupSpec,
    pub conjugators: Vec<SeriesMatrix>,
    pub jacobian: SeriesMatrix,
    jacobian_inv: SeriesMatrix,
    pub det_val: Rational,
    pub seed: u64,
}

/// Chart certificate JSON payload.
#[derive(Serialize)]
pub struct ChartCertificate<'a> {
    pub group: String,
    pub axis: Option<&'a Axis>,
    pub conjugators: &'a [SeriesMatrix],
    pub det_val: String,
    pub trunc: String,
    pub seed: u64,
}

impl ChartData {
    pub fn certificate<'a>(&'a self, arc: &'a ArcJ) -> ChartCertificate<'a> {
        ChartCertificate {
            group: self.spec.name(),
            axis: match &arc.kind {
                ArcKind::SoBlock { axis } => Some(axis),
                ArcKind::SuBlock { .. } => None,
            },
            conjugators: &self.conjugators,
            det_val: self.det_val.to_string(),
            trunc: self.conjugators[0].ctx().trunc().to_string(),
            seed: self.seed,
        }
    }
}

impl Serialize for Axis {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v = self.vector();
        let strings = [v.x.to_string(), v.y.to_string(), v.z.to_string()];
        strings.serialize(s)
    }
}

const RETRY_BUDGET: usize = 32;

/// Samples conjugators h_1 = e, h_2, ..., h_dim from the infinitesimal
/// subgroup until the Jacobian columns `Ad_{h_i}(tangent)` have a certified
/// determinant: finite valuation strictly below trunc/2. Deterministic for a
/// fixed seed.
pub fn find_conjugators(arc: &ArcJ, seed: u64, height: u32) -> Result<ChartData> {
    let spec = arc.spec();
    if !spec.is_simple() {
        return Err(Error::NonSimple(spec.name()));
    }
    let ctx = arc.tangent.ctx();
    let dim = spec.dim();
    let bound = ctx.trunc() / rat_int(2);
    let mut sampler = Sampler::new(seed, ctx, height);
    let id = SeriesMatrix::identity(spec.mat_dim(), &ctx);
    let first_col = lie_coords(spec, &arc.tangent)?;

    for _attempt in 0..RETRY_BUDGET {
        let mut conjugators = vec![id.clone()];
        let mut cols: Vec<Vec<ValSeries>> = vec![first_col.clone()];
        for _ in 1..dim {
            let h = sampler.g00(spec);
            let conj = &(&h * &arc.tangent) * &spec.inverse_of_member(&h);
            cols.push(lie_coords(spec, &conj)?);
            conjugators.push(h);
        }
        let jacobian = SeriesMatrix::from_fn(dim, dim, |i, j| cols[j][i].clone());
        let det = jacobian.det()?;
        if let Valuation::Finite(v) = det.val() {
            if v < bound {
                let jacobian_inv = jacobian.inverse()?;
                return Ok(ChartData {
                    spec: spec.clone(),
                    conjugators,
                    jacobian,
                    jacobian_inv,
                    det_val: v,
                    seed,
                });
            }
        }
    }
    Err(Error::PrecisionExhausted {
        achieved: ctx.trunc(),
    })
}

/// The chart map: the product of conjugated arc points,
/// `phi(t_1, ..., t_n) = point(t_1)^{h_1} ... point(t_n)^{h_n}` with h_1 = e.
pub fn chart_phi(cd: &ChartData, arc: &ArcJ, params: &[ValSeries]) -> Result<SeriesMatrix> {
    let dim = cd.spec.dim();
    if params.len() != dim {
        return Err(Error::ShapeMismatch {
            expected: format!("{dim} parameters"),
            got: format!("{}", params.len()),
        });
    }
    for t in params {
        if !t.in_m() {
            return Err(Error::Domain(
                "chart parameters must be infinitesimal".into(),
            ));
        }
    }
    let ctx = arc.tangent.ctx();
    let mut acc = SeriesMatrix::identity(cd.spec.mat_dim(), &ctx);
    for (t, h) in params.iter().zip(&cd.conjugators) {
        let p = arc.point(t);
        let conj = &(h * &p) * &cd.spec.inverse_of_member(h);
        acc = &acc * &conj;
    }
    Ok(acc)
}

/// Pulls the displacement of a group element near the identity back to
/// Lie-algebra coordinates: the Cayley-style logarithm, with the trace
/// projected away for the unitary family so the result lies exactly in the
/// algebra.
fn displacement_coords(spec: &GroupSpec, m: &SeriesMatrix) -> Result<Vec<ValSeries>> {
    let ctx = m.ctx();
    let id = SeriesMatrix::identity(m.rows(), &ctx);
    let inv = (&id + m)
        .inverse()
        .map_err(|_| Error::ChartDomain("I + M singular".into()))?;
    let mut x = &(m - &id) * &inv;
    if let GroupSpec::Su { n } = spec {
        let shift = x.trace().scale_rat(&Rational::new(
            num_bigint::BigInt::from(1),
            num_bigint::BigInt::from(*n as i64),
        ));
        let diag = SeriesMatrix::from_fn(*n, *n, |i, j| {
            if i == j {
                shift.clone()
            } else {
                ValSeries::zero(&ctx)
            }
        });
        x = &x - &diag;
    }
    lie_coords(spec, &x)
}

/// Inverts the chart by valuation-graded Newton iteration: each step solves
/// the linearised system with the certified Jacobian, gaining valuation
/// until the residual vanishes modulo its own truncation.
pub fn chart_solve(cd: &ChartData, arc: &ArcJ, u: &SeriesMatrix) -> Result<Vec<ValSeries>> {
    let spec = &cd.spec;
    if !spec.in_g00(u)? {
        return Err(Error::Domain("chart_solve needs a member of G^00".into()));
    }
    let ctx = u.ctx();
    let id = SeriesMatrix::identity(u.rows(), &ctx);
    // headroom: the displacement must sit strictly above the determinant
    // valuation for the graded solves to make progress
    match (u - &id).min_val() {
        Valuation::Infinite => {}
        Valuation::Finite(v) => {
            if v <= cd.det_val {
                return Err(Error::Domain(format!(
                    "displacement valuation {v} does not exceed det_val {}",
                    cd.det_val
                )));
            }
        }
    }
    let dim = spec.dim();
    let mut params: Vec<ValSeries> = vec![ValSeries::zero(&ctx); dim];
    let mut last_gamma: Option<Valuation> = None;
    for _ in 0..64 {
        let phi = chart_phi(cd, arc, &params)?;
        let err = &spec.inverse_of_member(&phi) * u;
        let resid = displacement_coords(spec, &err)?;
        if resid.iter().all(|r| r.is_zero()) {
            return Ok(params);
        }
        let gamma = resid
            .iter()
            .map(|r| r.val())
            .min()
            .expect("nonempty residual");
        if let Some(prev) = &last_gamma {
            if gamma <= *prev {
                return Err(Error::PrecisionExhausted {
                    achieved: match prev {
                        Valuation::Finite(g) => g.clone(),
                        Valuation::Infinite => ctx.trunc(),
                    },
                });
            }
        }
        last_gamma = Some(gamma);
        // delta = J^{-1} residual
        for i in 0..dim {
            let mut acc = ValSeries::zero(&ctx);
            for (j, r) in resid.iter().enumerate() {
                acc = &acc + &(cd.jacobian_inv.at(i, j) * r);
            }
            params[i] = &params[i] + &acc;
        }
    }
    Err(Error::PrecisionExhausted {
        achieved: ctx.trunc(),
    })
}

/// The pulled-back group operation: `a ⋆ b` is the parameter tuple of
/// `phi(a) · phi(b)`. Partial: fails gracefully at the precision boundary.
pub fn star(
    cd: &ChartData,
    arc: &ArcJ,
    a: &[ValSeries],
    b: &[ValSeries],
) -> Result<Vec<ValSeries>> {
    let prod = &chart_phi(cd, arc, a)? * &chart_phi(cd, arc, b)?;
    chart_solve(cd, arc, &prod)
}

/// Outcome of the adjoint-representation spot checks on sampled pairs.
#[derive(Clone, Debug, Default, Serialize)]
pub struct AdjointReport {
    pub pairs: usize,
    pub hom_failures: usize,
    pub injectivity_failures: usize,
    pub identity_ok: bool,
}

/// On sampled pairs (u, v) in the infinitesimal subgroup: Ad is a
/// homomorphism with exact residual, and distinct elements have distinct
/// adjoint matrices.
pub fn adjoint_embedding_check(
    spec: &GroupSpec,
    pairs: &[(SeriesMatrix, SeriesMatrix)],
) -> Result<AdjointReport> {
    use crate::group::adjoint_matrix;
    let mut report = AdjointReport {
        pairs: pairs.len(),
        ..Default::default()
    };
    if let Some((u, _)) = pairs.first() {
        let id = SeriesMatrix::identity(u.rows(), &u.ctx());
        let ad_id = adjoint_matrix(spec, &id)?;
        report.identity_ok = ad_id.is_identity();
    } else {
        report.identity_ok = true;
    }
    for (u, v) in pairs {
        let ad_u = adjoint_matrix(spec, u)?;
        let ad_v = adjoint_matrix(spec, v)?;
        let ad_uv = adjoint_matrix(spec, &(u * v))?;
        if !ad_uv.is_equiv(&(&ad_u * &ad_v)) {
            report.hom_failures += 1;
        }
        if !u.is_equiv(v) && ad_u.is_equiv(&ad_v) {
            report.injectivity_failures += 1;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_expr;
    use crate::sample::Sampler;
    use crate::scalar::rat;

    fn ctx() -> SeriesCtx {
        SeriesCtx::default()
    }

    fn s(t: &str) -> ValSeries {
        parse_expr(t, &ctx()).unwrap()
    }

    fn so3_arc() -> ArcJ {
        ArcJ::so_block(GroupSpec::so(3), Axis::z(&ctx())).unwrap()
    }

    #[test]
    fn conjugator_certificate_so3() {
        let arc = so3_arc();
        let cd = find_conjugators(&arc, 11, 4).unwrap();
        assert_eq!(cd.conjugators.len(), 3);
        assert!(cd.conjugators[0].is_identity());
        assert!(cd.det_val < rat(4, 1));
        // columns differ from the tangent only infinitesimally, so the
        // determinant valuation is strictly positive
        assert!(cd.det_val > rat(0, 1));
    }

    #[test]
    fn conjugator_certificate_su2() {
        let arc = ArcJ::su_block(GroupSpec::su(2), 0, 1).unwrap();
        let cd = find_conjugators(&arc, 5, 4).unwrap();
        assert_eq!(cd.conjugators.len(), 3);
        assert!(cd.det_val < rat(4, 1));
    }

    #[test]
    fn phi_first_coordinate_is_the_arc() {
        let arc = so3_arc();
        let cd = find_conjugators(&arc, 11, 4).unwrap();
        let t = s("e");
        let params = vec![t.clone(), s("0"), s("0")];
        let phi = chart_phi(&cd, &arc, &params).unwrap();
        assert!(phi.is_equiv(&arc.point(&t)));
    }

    #[test]
    fn phi_lands_in_g00() {
        let arc = so3_arc();
        let cd = find_conjugators(&arc, 11, 4).unwrap();
        let params = vec![s("e"), s("e^2"), s("e/2 + e^3")];
        let phi = chart_phi(&cd, &arc, &params).unwrap();
        assert!(GroupSpec::so(3).in_g00(&phi).unwrap());
        // non-infinitesimal parameter rejected
        assert!(chart_phi(&cd, &arc, &[s("1"), s("0"), s("0")]).is_err());
    }

    #[test]
    fn solve_recovers_zero_at_identity() {
        let arc = so3_arc();
        let cd = find_conjugators(&arc, 11, 4).unwrap();
        let id = SeriesMatrix::identity(3, &ctx());
        let params = chart_solve(&cd, &arc, &id).unwrap();
        assert!(params.iter().all(|p| p.is_zero()));
    }

    #[test]
    fn solve_round_trip() {
        let arc = so3_arc();
        let cd = find_conjugators(&arc, 11, 4).unwrap();
        let params = vec![s("e"), s("e^2 - e^3"), s("e/3")];
        let u = chart_phi(&cd, &arc, &params).unwrap();
        let back = chart_solve(&cd, &arc, &u).unwrap();
        for (p, q) in params.iter().zip(&back) {
            // agreement modulo the achievable grade
            assert!((p - q).is_zero(), "{p} vs {q}");
        }
    }

    #[test]
    fn star_identity_and_inverse() {
        let arc = so3_arc();
        let cd = find_conjugators(&arc, 11, 4).unwrap();
        let a = vec![s("e"), s("e^2"), s("0")];
        let zero = vec![s("0"), s("0"), s("0")];
        let sa = star(&cd, &arc, &a, &zero).unwrap();
        for (p, q) in a.iter().zip(&sa) {
            assert!((p - q).is_zero());
        }
        // inverse parameters via solving the matrix inverse
        let u = chart_phi(&cd, &arc, &a).unwrap();
        let a_inv = chart_solve(&cd, &arc, &GroupSpec::so(3).inverse_of_member(&u)).unwrap();
        let should_be_zero = star(&cd, &arc, &a, &a_inv).unwrap();
        for p in &should_be_zero {
            assert!(p.is_zero(), "{p}");
        }
    }

    #[test]
    fn adjoint_embedding_so3() {
        let spec = GroupSpec::so(3);
        let mut sampler = Sampler::new(7, ctx(), 4);
        let pairs: Vec<_> = (0..3)
            .map(|_| (sampler.g00(&spec), sampler.g00(&spec)))
            .collect();
        let rep = adjoint_embedding_check(&spec, &pairs).unwrap();
        assert!(rep.identity_ok);
        assert_eq!(rep.hom_failures, 0);
        assert_eq!(rep.injectivity_failures, 0);
    }

    #[test]
    fn degenerate_arc_rejected() {
        // a zero tangent cannot happen through the public constructors; the
        // nearest degenerate input is a malformed su block
        assert!(ArcJ::su_block(GroupSpec::su(2), 1, 1).is_err());
        assert!(ArcJ::so_block(GroupSpec::su(2), Axis::z(&ctx())).is_err());
    }
}
