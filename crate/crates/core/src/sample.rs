//! Deterministic seeded samplers for the verification suites.
//!
//! All sampling is height-bounded rational data pushed through exact
//! parametrisations (stereographic points, Cayley transforms), so samples are
//! genuine group members with zero defect, not approximations.

use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::group::GroupSpec;
use crate::matrix::SeriesMatrix;
use crate::quaternion::Quaternion;
use crate::rotations::{AngleParam, Axis, Vec3};
use crate::scalar::{ExactScalar, Rational};
use crate::series::{SeriesCtx, ValSeries};

pub struct Sampler {
    rng: ChaCha8Rng,
    pub ctx: SeriesCtx,
    pub height: u32,
}

impl Sampler {
    pub fn new(seed: u64, ctx: SeriesCtx, height: u32) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            ctx,
            height: height.max(2),
        }
    }

    /// Independent sub-stream for a named check; keeps checks order-free.
    pub fn fork(&self, label: &str) -> Sampler {
        let mut h: u64 = 0xcbf29ce484222325;
        for b in label.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        let mut rng = self.rng.clone();
        let base: u64 = rng.gen();
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(base ^ h),
            ctx: self.ctx,
            height: self.height,
        }
    }

    pub fn rational(&mut self) -> Rational {
        let h = self.height as i64;
        let num = self.rng.gen_range(-h..=h);
        let den = self.rng.gen_range(1..=h);
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    pub fn rational_nonzero(&mut self) -> Rational {
        loop {
            let q = self.rational();
            if !num_traits::Zero::is_zero(&q) {
                return q;
            }
        }
    }

    pub fn scalar(&mut self) -> ExactScalar {
        ExactScalar::from_rational(self.rational())
    }

    /// Exponent on the half-integer grid in [lo, hi], well inside the
    /// ramification bound.
    fn exponent(&mut self, lo_halves: i64, hi_halves: i64) -> Rational {
        let halves = self.rng.gen_range(lo_halves..=hi_halves);
        Rational::new(BigInt::from(halves), BigInt::from(2))
    }

    fn series_with_exponents(&mut self, lo_halves: i64, hi_halves: i64) -> ValSeries {
        let terms = self.rng.gen_range(1..=3usize);
        let mut acc = ValSeries::zero(&self.ctx);
        for _ in 0..terms {
            let e = self.exponent(lo_halves, hi_halves);
            let c = self.scalar();
            if let Ok(m) = ValSeries::monomial(&e, c, &self.ctx) {
                acc = &acc + &m;
            }
        }
        acc
    }

    /// Bounded element: valuation >= 0.
    pub fn series_in_o(&mut self) -> ValSeries {
        self.series_with_exponents(0, 6)
    }

    /// Infinitesimal: valuation > 0 (possibly zero).
    pub fn series_in_m(&mut self) -> ValSeries {
        self.series_with_exponents(1, 6)
    }

    /// Infinitesimal and nonzero.
    pub fn series_in_m_nonzero(&mut self) -> ValSeries {
        loop {
            let s = self.series_in_m();
            if !s.is_zero() {
                return s;
            }
        }
    }

    /// A unit of the valuation ring: valuation exactly 0.
    pub fn series_unit(&mut self) -> ValSeries {
        let c = ExactScalar::from_rational(self.rational_nonzero());
        &ValSeries::constant(c, &self.ctx) + &self.series_in_m()
    }

    /// Arbitrary element, sometimes unbounded.
    pub fn series_any(&mut self) -> ValSeries {
        self.series_with_exponents(-4, 6)
    }

    /// Positive rational constant, down to roughly 1/(height^4).
    pub fn positive_rational_series(&mut self) -> ValSeries {
        let h = self.height as i64;
        let num = self.rng.gen_range(1..=h);
        let den = self.rng.gen_range(1..=h * h);
        ValSeries::from_rational(
            Rational::new(BigInt::from(num), BigInt::from(den)),
            &self.ctx,
        )
    }

    pub fn vec3_in_m(&mut self) -> Vec3 {
        Vec3::new(
            self.series_in_m(),
            self.series_in_m(),
            self.series_in_m(),
        )
    }

    pub fn vec3_in_o(&mut self) -> Vec3 {
        Vec3::new(
            self.series_in_o(),
            self.series_in_o(),
            self.series_in_o(),
        )
    }

    pub fn axis(&mut self) -> Axis {
        Axis::from_stereographic(&self.rational(), &self.rational(), &self.ctx)
    }

    pub fn angle_in_m(&mut self) -> AngleParam {
        AngleParam(self.series_in_m_nonzero())
    }

    /// Skew-symmetric matrix with entries in the maximal ideal.
    pub fn skew_in_m(&mut self, n: usize) -> SeriesMatrix {
        let mut m = SeriesMatrix::zeros(n, n, &self.ctx);
        for i in 0..n {
            for j in i + 1..n {
                let s = self.series_in_m();
                m.set(i, j, s.clone());
                m.set(j, i, -&s);
            }
        }
        m
    }

    /// Skew-symmetric with bounded entries (rational + infinitesimal).
    pub fn skew_in_o(&mut self, n: usize) -> SeriesMatrix {
        let mut m = SeriesMatrix::zeros(n, n, &self.ctx);
        for i in 0..n {
            for j in i + 1..n {
                let s = self.series_in_o();
                m.set(i, j, s.clone());
                m.set(j, i, -&s);
            }
        }
        m
    }

    /// Traceless anti-Hermitian 2x2 with entries in the maximal ideal.
    pub fn su2_tangent_in_m(&mut self) -> SeriesMatrix {
        let a = self.series_in_m();
        let b = self.series_in_m();
        let c = self.series_in_m();
        su2_tangent(&a, &b, &c, &self.ctx)
    }

    pub fn su2_tangent_in_o(&mut self) -> SeriesMatrix {
        let a = self.series_in_o();
        let b = self.series_in_o();
        let c = self.series_in_o();
        su2_tangent(&a, &b, &c, &self.ctx)
    }

    /// Member of the infinitesimal subgroup, exactly.
    pub fn g00(&mut self, spec: &GroupSpec) -> SeriesMatrix {
        match spec {
            GroupSpec::So { n } => {
                let x = self.skew_in_m(*n);
                spec.cayley(&x).expect("cayley of infinitesimal skew")
            }
            GroupSpec::Su { n } => {
                if *n == 2 {
                    let x = self.su2_tangent_in_m();
                    spec.cayley(&x).expect("cayley of su(2) tangent")
                } else {
                    self.su_block_product(*n, true)
                }
            }
            GroupSpec::Product { left, right } => {
                SeriesMatrix::block_diag(&self.g00(left), &self.g00(right))
            }
        }
    }

    /// Member of the full group with bounded entries.
    pub fn group_member_in_o(&mut self, spec: &GroupSpec) -> SeriesMatrix {
        match spec {
            GroupSpec::So { n } => {
                let x = self.skew_in_o(*n);
                spec.cayley(&x).expect("cayley of bounded skew")
            }
            GroupSpec::Su { n } => {
                if *n == 2 {
                    let x = self.su2_tangent_in_o();
                    spec.cayley(&x).expect("cayley of su(2) tangent")
                } else {
                    self.su_block_product(*n, false)
                }
            }
            GroupSpec::Product { left, right } => SeriesMatrix::block_diag(
                &self.group_member_in_o(left),
                &self.group_member_in_o(right),
            ),
        }
    }

    /// Rational rotation in SO(3) (exact, no series terms).
    pub fn rational_rotation(&mut self) -> SeriesMatrix {
        let mut x = SeriesMatrix::zeros(3, 3, &self.ctx);
        for i in 0..3 {
            for j in i + 1..3 {
                let s = ValSeries::from_rational(self.rational(), &self.ctx);
                x.set(i, j, s.clone());
                x.set(j, i, -&s);
            }
        }
        GroupSpec::so(3).cayley(&x).expect("cayley of rational skew")
    }

    /// SU(n) for n >= 3 sampled as a product of embedded su(2)-block Cayley
    /// images and a rational diagonal torus element; exactly special unitary.
    fn su_block_product(&mut self, n: usize, infinitesimal: bool) -> SeriesMatrix {
        let su2 = GroupSpec::su(2);
        let mut acc = SeriesMatrix::identity(n, &self.ctx);
        for i in 0..n {
            for j in i + 1..n {
                let block = if infinitesimal {
                    self.su2_tangent_in_m()
                } else {
                    self.su2_tangent_in_o()
                };
                let g2 = su2.cayley(&block).expect("su2 cayley");
                let emb = embed_block(&g2, n, i, j, &self.ctx);
                acc = &acc * &emb;
            }
        }
        // torus factor diag(u_1, ..., u_{n-1}, (u_1...u_{n-1})^{-1}) with
        // unit-modulus rational u(t) = (1+it)/(1-it)
        let mut diag = Vec::with_capacity(n);
        let mut prod = ValSeries::one(&self.ctx);
        for _ in 0..n - 1 {
            let t = if infinitesimal {
                self.series_in_m()
            } else {
                self.series_in_o()
            };
            let it = t.scale(&ExactScalar::i());
            let one = ValSeries::one(&self.ctx);
            let u = (&one + &it).div(&(&one - &it)).expect("1 - it is a unit");
            prod = &prod * &u;
            diag.push(u);
        }
        diag.push(prod.inv().expect("unit-modulus product"));
        let torus = SeriesMatrix::from_fn(n, n, |i, j| {
            if i == j {
                diag[i].clone()
            } else {
                ValSeries::zero(&self.ctx)
            }
        });
        &acc * &torus
    }

    /// Unit quaternion from a rational/bounded vector parameter.
    pub fn unit_quaternion(&mut self) -> Quaternion {
        Quaternion::from_vector_param(&self.vec3_in_o())
    }

    /// Unit quaternion infinitesimally close to 1.
    pub fn quaternion_in_spin00(&mut self) -> Quaternion {
        Quaternion::from_vector_param(&self.vec3_in_m())
    }

    pub fn gen_range_usize(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }
}

fn su2_tangent(a: &ValSeries, b: &ValSeries, c: &ValSeries, ctx: &SeriesCtx) -> SeriesMatrix {
    // [[ i a, b + i c], [-b + i c, -i a]]
    let i = ExactScalar::i();
    let mut m = SeriesMatrix::zeros(2, 2, ctx);
    m.set(0, 0, a.scale(&i));
    m.set(1, 1, -&a.scale(&i));
    m.set(0, 1, &b.clone() + &c.scale(&i));
    m.set(1, 0, &c.scale(&i) - b);
    m
}

/// Places a 2x2 block at rows/cols (i, j) of an identity.
pub fn embed_block(
    block: &SeriesMatrix,
    n: usize,
    i: usize,
    j: usize,
    ctx: &SeriesCtx,
) -> SeriesMatrix {
    let mut m = SeriesMatrix::identity(n, ctx);
    m.set(i, i, block.at(0, 0).clone());
    m.set(i, j, block.at(0, 1).clone());
    m.set(j, i, block.at(1, 0).clone());
    m.set(j, j, block.at(1, 1).clone());
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sampler() -> Sampler {
        Sampler::new(17, SeriesCtx::default(), 6)
    }

    #[test]
    fn samples_are_members() {
        let mut s = sampler();
        for spec in [GroupSpec::so(3), GroupSpec::so(5), GroupSpec::su(2), GroupSpec::su(3)] {
            for _ in 0..3 {
                let g = s.g00(&spec);
                assert!(spec.in_g00(&g).unwrap(), "{}", spec.name());
                let h = s.group_member_in_o(&spec);
                assert!(spec.in_group(&h).unwrap(), "{}", spec.name());
            }
        }
    }

    #[test]
    fn product_samples() {
        let mut s = sampler();
        let spec = GroupSpec::product(GroupSpec::so(3), GroupSpec::su(2));
        let g = s.g00(&spec);
        assert!(spec.in_g00(&g).unwrap());
    }

    #[test]
    fn determinism_per_seed() {
        let mut a = Sampler::new(42, SeriesCtx::default(), 6);
        let mut b = Sampler::new(42, SeriesCtx::default(), 6);
        for _ in 0..5 {
            assert_eq!(a.series_any(), b.series_any());
        }
        let mut c = Sampler::new(43, SeriesCtx::default(), 6);
        let mut differs = false;
        for _ in 0..5 {
            if a.series_any() != c.series_any() {
                differs = true;
            }
        }
        assert!(differs);
    }

    #[test]
    fn quaternions_are_unit() {
        let mut s = sampler();
        for _ in 0..5 {
            let q = s.unit_quaternion();
            assert!(q.norm2().is_equiv(&ValSeries::one(&s.ctx)));
            assert!(s.quaternion_in_spin00().in_spin00());
        }
    }
}
