//! Matrix group families, membership predicates, the standard-part
//! homomorphism, the infinitesimal-subgroup predicate, and the Cayley chart.
//!
//! The supported families are SO(n), SU(n) and finite products, compact by
//! construction; membership is the defining algebraic equations checked
//! modulo the truncation. The infinitesimal subgroup consists of the group
//! members whose displacement from the identity has positive valuation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::SeriesMatrix;
use crate::scalar::ExactScalar;
use crate::series::{SeriesCtx, ValSeries};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum GroupSpec {
    So { n: usize },
    Su { n: usize },
    Product {
        left: Box<GroupSpec>,
        right: Box<GroupSpec>,
    },
}

impl GroupSpec {
    pub fn so(n: usize) -> Self {
        GroupSpec::So { n }
    }

    pub fn su(n: usize) -> Self {
        GroupSpec::Su { n }
    }

    pub fn product(left: GroupSpec, right: GroupSpec) -> Self {
        GroupSpec::Product {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    /// Size of the matrices realising the group.
    pub fn mat_dim(&self) -> usize {
        match self {
            GroupSpec::So { n } | GroupSpec::Su { n } => *n,
            GroupSpec::Product { left, right } => left.mat_dim() + right.mat_dim(),
        }
    }

    /// Dimension of the group as a manifold.
    pub fn dim(&self) -> usize {
        match self {
            GroupSpec::So { n } => n * (n - 1) / 2,
            GroupSpec::Su { n } => n * n - 1,
            GroupSpec::Product { left, right } => left.dim() + right.dim(),
        }
    }

    pub fn is_simple(&self) -> bool {
        match self {
            GroupSpec::So { n } => matches!(n, 3 | 5 | 6 | 7),
            GroupSpec::Su { n } => *n >= 2,
            GroupSpec::Product { .. } => false,
        }
    }

    pub fn name(&self) -> String {
        match self {
            GroupSpec::So { n } => format!("so{n}"),
            GroupSpec::Su { n } => format!("su{n}"),
            GroupSpec::Product { left, right } => {
                format!("{}x{}", left.name(), right.name())
            }
        }
    }

    fn check_shape(&self, m: &SeriesMatrix) -> Result<()> {
        let n = self.mat_dim();
        if m.rows() != n || m.cols() != n {
            return Err(Error::ShapeMismatch {
                expected: format!("{n}x{n}"),
                got: format!("{}x{}", m.rows(), m.cols()),
            });
        }
        Ok(())
    }

    /// The defining algebraic equations, modulo the truncation.
    pub fn in_group(&self, m: &SeriesMatrix) -> Result<bool> {
        self.check_shape(m)?;
        match self {
            GroupSpec::So { n } => {
                let gram = &m.transpose() * m;
                let id = SeriesMatrix::identity(*n, &m.ctx());
                Ok(gram.is_equiv(&id) && m.det()?.is_equiv(&ValSeries::one(&m.ctx())))
            }
            GroupSpec::Su { n } => {
                let gram = &m.conj_transpose() * m;
                let id = SeriesMatrix::identity(*n, &m.ctx());
                Ok(gram.is_equiv(&id) && m.det()?.is_equiv(&ValSeries::one(&m.ctx())))
            }
            GroupSpec::Product { left, right } => {
                let (a, b, off_zero) = split_blocks(left, right, m);
                Ok(off_zero && left.in_group(&a)? && right.in_group(&b)?)
            }
        }
    }

    /// Membership in the infinitesimal subgroup: in the group and with every
    /// entry of `M - I` of positive valuation.
    pub fn in_g00(&self, m: &SeriesMatrix) -> Result<bool> {
        Ok(self.in_group(m)? && m.displacement_in_m())
    }

    /// Exact inverse of a group member (conjugate transpose).
    pub fn inverse_of_member(&self, m: &SeriesMatrix) -> SeriesMatrix {
        m.conj_transpose()
    }

    /// The identity-chart Cayley transform `X -> (I+X)(I-X)^{-1}`.
    ///
    /// Defined for skew-symmetric X over SO(n) and for traceless
    /// anti-Hermitian X over SU(2) (where the transform is exactly special);
    /// for larger SU(n) the transform is unitary but not special, so it is
    /// rejected as a chart.
    pub fn cayley(&self, x: &SeriesMatrix) -> Result<SeriesMatrix> {
        self.check_shape(x)?;
        let ctx = x.ctx();
        match self {
            GroupSpec::So { .. } => {
                if !x.is_skew_symmetric() {
                    return Err(Error::ChartDomain("not skew-symmetric".into()));
                }
            }
            GroupSpec::Su { n } => {
                if *n != 2 {
                    return Err(Error::ChartDomain(format!(
                        "cayley chart supported for so(n) and su(2), not su({n})"
                    )));
                }
                if !x.is_anti_hermitian() || !x.trace().is_zero() {
                    return Err(Error::ChartDomain(
                        "not traceless anti-Hermitian".into(),
                    ));
                }
            }
            GroupSpec::Product { left, right } => {
                let (a, b, off_zero) = split_blocks(left, right, x);
                if !off_zero {
                    return Err(Error::ChartDomain("off-diagonal blocks".into()));
                }
                return Ok(SeriesMatrix::block_diag(&left.cayley(&a)?, &right.cayley(&b)?));
            }
        }
        let id = SeriesMatrix::identity(x.rows(), &ctx);
        let i_minus = &id - x;
        let inv = i_minus
            .inverse()
            .map_err(|_| Error::ChartDomain("I - X singular".into()))?;
        Ok(&(&id + x) * &inv)
    }

    /// Inverse chart `M -> (M-I)(M+I)^{-1}`, the exact left inverse of
    /// `cayley` on its domain.
    pub fn cayley_inv(&self, m: &SeriesMatrix) -> Result<SeriesMatrix> {
        self.check_shape(m)?;
        if let GroupSpec::Product { left, right } = self {
            let (a, b, off_zero) = split_blocks(left, right, m);
            if !off_zero {
                return Err(Error::ChartDomain("off-diagonal blocks".into()));
            }
            return Ok(SeriesMatrix::block_diag(
                &left.cayley_inv(&a)?,
                &right.cayley_inv(&b)?,
            ));
        }
        let id = SeriesMatrix::identity(m.rows(), &m.ctx());
        let inv = (&id + m)
            .inverse()
            .map_err(|_| Error::ChartDomain("I + M singular".into()))?;
        Ok(&(m - &id) * &inv)
    }
}

fn split_blocks(
    left: &GroupSpec,
    right: &GroupSpec,
    m: &SeriesMatrix,
) -> (SeriesMatrix, SeriesMatrix, bool) {
    let nl = left.mat_dim();
    let nr = right.mat_dim();
    let a = m.block(0, 0, nl, nl);
    let b = m.block(nl, nl, nr, nr);
    let off_zero =
        m.block(0, nl, nl, nr).is_zero() && m.block(nl, 0, nr, nl).is_zero();
    (a, b, off_zero)
}

/// Entrywise standard part of a bounded matrix.
pub fn st_matrix(m: &SeriesMatrix) -> Result<SeriesMatrix> {
    m.standard_part()
}

/// Both sides of the product law: the product-group infinitesimal predicate
/// and the conjunction of the factors' predicates on the diagonal blocks.
pub fn product_g00_check(
    left: &GroupSpec,
    right: &GroupSpec,
    m: &SeriesMatrix,
) -> Result<(bool, bool)> {
    let spec = GroupSpec::product(left.clone(), right.clone());
    spec.check_shape(m)?;
    let joint = spec.in_g00(m)?;
    let (a, b, off_zero) = split_blocks(left, right, m);
    let split = off_zero && left.in_g00(&a)? && right.in_g00(&b)?;
    Ok((joint, split))
}

/// Ordered basis of the Lie algebra of a simple family, as exact matrices.
///
/// so(n): `E_ij - E_ji` for i < j in row-major order. su(n): the diagonal
/// torus generators `i(E_jj - E_{j+1,j+1})`, then for each i < j the pair
/// `E_ij - E_ji`, `i(E_ij + E_ji)`.
pub fn lie_basis(spec: &GroupSpec, ctx: &SeriesCtx) -> Result<Vec<SeriesMatrix>> {
    let one = ValSeries::one(ctx);
    let im = ValSeries::constant(ExactScalar::i(), ctx);
    match spec {
        GroupSpec::So { n } => {
            let mut out = Vec::with_capacity(n * (n - 1) / 2);
            for i in 0..*n {
                for j in i + 1..*n {
                    let mut m = SeriesMatrix::zeros(*n, *n, ctx);
                    m.set(i, j, one.clone());
                    m.set(j, i, -&one);
                    out.push(m);
                }
            }
            Ok(out)
        }
        GroupSpec::Su { n } => {
            let mut out = Vec::with_capacity(n * n - 1);
            for j in 0..n - 1 {
                let mut m = SeriesMatrix::zeros(*n, *n, ctx);
                m.set(j, j, im.clone());
                m.set(j + 1, j + 1, -&im);
                out.push(m);
            }
            for i in 0..*n {
                for j in i + 1..*n {
                    let mut a = SeriesMatrix::zeros(*n, *n, ctx);
                    a.set(i, j, one.clone());
                    a.set(j, i, -&one);
                    out.push(a);
                    let mut b = SeriesMatrix::zeros(*n, *n, ctx);
                    b.set(i, j, im.clone());
                    b.set(j, i, im.clone());
                    out.push(b);
                }
            }
            Ok(out)
        }
        GroupSpec::Product { .. } => Err(Error::Unsupported(
            "Lie coordinates for product groups".into(),
        )),
    }
}

/// Coordinates of a Lie-algebra element in the `lie_basis` order, by closed
/// form. The element must lie in the algebra exactly (skew / traceless
/// anti-Hermitian); this is validated by reconstruction.
pub fn lie_coords(spec: &GroupSpec, x: &SeriesMatrix) -> Result<Vec<ValSeries>> {
    let ctx = x.ctx();
    let coords = match spec {
        GroupSpec::So { n } => {
            let mut out = Vec::with_capacity(n * (n - 1) / 2);
            for i in 0..*n {
                for j in i + 1..*n {
                    out.push(x.at(i, j).clone());
                }
            }
            out
        }
        GroupSpec::Su { n } => {
            let mut out = Vec::with_capacity(n * n - 1);
            // diagonal: entries i*d_j, coefficients are partial sums of d
            let mut partial = ValSeries::zero(&ctx);
            for j in 0..n - 1 {
                let dj = x.at(j, j).im_part();
                partial = &partial + &dj;
                out.push(partial.clone());
            }
            for i in 0..*n {
                for j in i + 1..*n {
                    out.push(x.at(i, j).re_part());
                    out.push(x.at(i, j).im_part());
                }
            }
            out
        }
        GroupSpec::Product { .. } => {
            return Err(Error::Unsupported(
                "Lie coordinates for product groups".into(),
            ))
        }
    };
    // validate by exact reconstruction
    let basis = lie_basis(spec, &ctx)?;
    let mut rebuilt = SeriesMatrix::zeros(x.rows(), x.cols(), &ctx);
    for (c, b) in coords.iter().zip(&basis) {
        rebuilt = &rebuilt + &b.scale(c);
    }
    if !rebuilt.is_equiv(x) {
        return Err(Error::Domain(
            "matrix is not in the Lie algebra of the family".into(),
        ));
    }
    Ok(coords)
}

/// The adjoint action of a group member on Lie-algebra coordinates, as the
/// dim-by-dim matrix with columns `coords(g b_k g^{-1})`.
pub fn adjoint_matrix(spec: &GroupSpec, g: &SeriesMatrix) -> Result<SeriesMatrix> {
    let ctx = g.ctx();
    let basis = lie_basis(spec, &ctx)?;
    let g_inv = spec.inverse_of_member(g);
    let dim = spec.dim();
    let mut cols: Vec<Vec<ValSeries>> = Vec::with_capacity(dim);
    for b in &basis {
        let conj = &(g * b) * &g_inv;
        cols.push(lie_coords(spec, &conj)?);
    }
    Ok(SeriesMatrix::from_fn(dim, dim, |i, j| cols[j][i].clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_expr;
    use crate::scalar::rat;

    fn ctx() -> SeriesCtx {
        SeriesCtx::default()
    }

    fn so3() -> GroupSpec {
        GroupSpec::so(3)
    }

    fn parse_mat(n: usize, texts: &[&str]) -> SeriesMatrix {
        SeriesMatrix::new(
            n,
            n,
            texts.iter().map(|t| parse_expr(t, &ctx()).unwrap()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn identity_is_a_member() {
        let id = SeriesMatrix::identity(3, &ctx());
        assert!(so3().in_group(&id).unwrap());
        assert!(so3().in_g00(&id).unwrap());
    }

    #[test]
    fn reflection_is_not_special() {
        let m = parse_mat(3, &["1", "0", "0", "0", "1", "0", "0", "0", "-1"]);
        assert!(!so3().in_group(&m).unwrap());
    }

    #[test]
    fn cayley_2x2_infinitesimal() {
        let x = parse_mat(2, &["0", "e", "-e", "0"]);
        let so2 = GroupSpec::so(2);
        let m = so2.cayley(&x).unwrap();
        // frozen rational form (1-e²)/(1+e²), 2e/(1+e²)
        let c = parse_expr("(1-e^2)/(1+e^2)", &ctx()).unwrap();
        let s = parse_expr("2*e/(1+e^2)", &ctx()).unwrap();
        assert!(m.at(0, 0).is_equiv(&c));
        assert!(m.at(0, 1).is_equiv(&s));
        assert!(so2.in_group(&m).unwrap());
        assert!(m.displacement_in_m());
        // round trip
        let back = so2.cayley_inv(&m).unwrap();
        assert!(back.is_equiv(&x));
    }

    #[test]
    fn cayley_zero_is_identity() {
        let z = SeriesMatrix::zeros(3, 3, &ctx());
        assert!(so3().cayley(&z).unwrap().is_identity());
    }

    #[test]
    fn su2_cayley_is_special() {
        // traceless anti-Hermitian with all three directions populated
        let x = parse_mat(
            2,
            &["1/2*i*e", "e + 1/3*i*e", "-e + 1/3*i*e", "-1/2*i*e"],
        );
        let su2 = GroupSpec::su(2);
        let m = su2.cayley(&x).unwrap();
        assert!(su2.in_group(&m).unwrap());
        assert!(su2.in_g00(&m).unwrap());
        assert!(su2.cayley_inv(&m).unwrap().is_equiv(&x));
    }

    #[test]
    fn su3_cayley_rejected() {
        let x = SeriesMatrix::zeros(3, 3, &ctx());
        assert!(matches!(
            GroupSpec::su(3).cayley(&x),
            Err(Error::ChartDomain(_))
        ));
    }

    #[test]
    fn st_is_multiplicative_on_members() {
        let x = parse_mat(3, &["0", "e", "0", "-e", "0", "e^2", "0", "-e^2", "0"]);
        let y = parse_mat(3, &["0", "0", "1/2", "0", "0", "0", "-1/2", "0", "0"]);
        let a = so3().cayley(&x).unwrap();
        let b = so3().cayley(&y).unwrap();
        let lhs = st_matrix(&(&a * &b)).unwrap();
        let rhs = &st_matrix(&a).unwrap() * &st_matrix(&b).unwrap();
        assert!(lhs.is_equiv(&rhs));
        assert!(so3().in_group(&st_matrix(&b).unwrap()).unwrap());
    }

    #[test]
    fn product_blocks() {
        let a = SeriesMatrix::identity(3, &ctx());
        let b = SeriesMatrix::identity(2, &ctx());
        let m = SeriesMatrix::block_diag(&a, &b);
        let (joint, split) =
            product_g00_check(&GroupSpec::so(3), &GroupSpec::su(2), &m).unwrap();
        assert!(joint && split);
    }

    #[test]
    fn lie_coords_roundtrip_so() {
        let x = parse_mat(3, &["0", "e", "1/2", "-e", "0", "e^2", "-1/2", "-e^2", "0"]);
        let coords = lie_coords(&so3(), &x).unwrap();
        assert_eq!(coords.len(), 3);
        assert!(coords[0].is_equiv(&parse_expr("e", &ctx()).unwrap()));
        assert!(coords[1].is_equiv(&parse_expr("1/2", &ctx()).unwrap()));
        assert!(coords[2].is_equiv(&parse_expr("e^2", &ctx()).unwrap()));
    }

    #[test]
    fn lie_coords_roundtrip_su() {
        let su2 = GroupSpec::su(2);
        let x = parse_mat(
            2,
            &["1/2*i*e", "e + 1/3*i*e^2", "-e + 1/3*i*e^2", "-1/2*i*e"],
        );
        let coords = lie_coords(&su2, &x).unwrap();
        assert_eq!(coords.len(), 3);
        let basis = lie_basis(&su2, &ctx()).unwrap();
        let mut rebuilt = SeriesMatrix::zeros(2, 2, &ctx());
        for (c, b) in coords.iter().zip(&basis) {
            rebuilt = &rebuilt + &b.scale(c);
        }
        assert!(rebuilt.is_equiv(&x));
        // su(3) diagonal partial sums
        let su3 = GroupSpec::su(3);
        let y = parse_mat(
            3,
            &[
                "2*i*e", "0", "0", //
                "0", "-1*i*e", "0", //
                "0", "0", "-1*i*e",
            ],
        );
        let cy = lie_coords(&su3, &y).unwrap();
        assert!(cy[0].is_equiv(&parse_expr("2*e", &ctx()).unwrap()));
        assert!(cy[1].is_equiv(&parse_expr("e", &ctx()).unwrap()));
    }

    #[test]
    fn group_spec_json() {
        let spec = GroupSpec::product(GroupSpec::so(3), GroupSpec::su(2));
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(
            json,
            r#"{"family":"product","left":{"family":"so","n":3},"right":{"family":"su","n":2}}"#
        );
        let back: GroupSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn rho_like_rotation_in_group() {
        // z-rotation with tan-half-angle 1/2: rational entries 3/5, 4/5
        let m = parse_mat(
            3,
            &["3/5", "-4/5", "0", "4/5", "3/5", "0", "0", "0", "1"],
        );
        assert!(so3().in_group(&m).unwrap());
        assert!(!so3().in_g00(&m).unwrap());
        let _ = rat(0, 1);
    }
}
