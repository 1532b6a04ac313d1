//! The monogenic hull `H(U)`: points `(x, y)` of `H^n (x) C` whose whole
//! sphere `{ x + y q : q unit imaginary }` lies in `U`.

use serde::{Deserialize, Serialize};

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::quat::{BiquaternionPoint, Quaternion, QuatVec};
use crate::sphere::{SphereSearch, Vec3};

/// Default zero threshold for the infimum.
pub const ZERO_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    /// The infimum is certified positive.
    Inside,
    /// The infimum is numerically zero.
    Outside,
    /// Positive at the minimiser but below the covering band.
    Indeterminate,
}

/// Sampler of the unit imaginary sphere used by all hull queries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImUnitSphereSampler {
    pub search: SphereSearch,
    pub zero_tol: f64,
}

impl ImUnitSphereSampler {
    pub fn new(count: usize) -> Result<Self> {
        Ok(Self {
            search: SphereSearch::fibonacci(count)?,
            zero_tol: ZERO_TOL,
        })
    }
}

impl Default for ImUnitSphereSampler {
    fn default() -> Self {
        Self::new(512).expect("512 nodes is above the minimum")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HullQuery {
    pub sigma: BiquaternionPoint,
    pub verdict: bool,
    pub membership: Membership,
    /// `inf_q ext_distance(x + y q)`.
    pub inf_value: f64,
    /// Minimum of the signed margin, negative when the sphere leaves `U`.
    pub margin: f64,
    pub argmin_q: Quaternion,
    /// Certification band `2 |y| r_cover`.
    pub band: f64,
}

fn quat_of(u: Vec3) -> Quaternion {
    Quaternion::imaginary(u)
}

fn check_dim(u: &dyn Domain, sigma: &BiquaternionPoint) -> Result<()> {
    if u.dim() == sigma.n() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: u.dim(),
            got: sigma.n(),
        })
    }
}

/// Decides `sigma in H(U)`.
pub fn hull_contains(
    sigma: &BiquaternionPoint,
    u: &dyn Domain,
    sampler: &ImUnitSphereSampler,
) -> Result<HullQuery> {
    check_dim(u, sigma)?;
    let ynorm = sigma.y.norm();
    let (margin, argmin_q, band) = if sigma.is_real() {
        (u.signed_margin(&sigma.x), Quaternion::I, 0.0)
    } else {
        let m = sampler
            .search
            .minimize(|q| u.signed_margin(&sigma.slice_point(quat_of(q))));
        (m.value, quat_of(m.argmin), 2.0 * ynorm * sampler.search.cover_radius)
    };
    let verdict = margin > sampler.zero_tol;
    let membership = if !verdict {
        Membership::Outside
    } else if margin >= band {
        Membership::Inside
    } else {
        Membership::Indeterminate
    };
    Ok(HullQuery {
        sigma: sigma.clone(),
        verdict,
        membership,
        inf_value: margin.max(0.0),
        margin,
        argmin_q,
        band,
    })
}

/// `delta(sigma, H(U)^c) = inf_value / sqrt 2`.
pub fn hull_distance(
    sigma: &BiquaternionPoint,
    u: &dyn Domain,
    sampler: &ImUnitSphereSampler,
) -> Result<f64> {
    let q = hull_contains(sigma, u, sampler)?;
    if !q.verdict {
        return Err(Error::NotInHull { inf: q.inf_value });
    }
    Ok(q.inf_value / std::f64::consts::SQRT_2)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    /// A point of `H(U)^c` at the hull distance from `sigma`.
    pub point: BiquaternionPoint,
    /// `x + y q*`, the nearest point of the sphere to `U^c`.
    pub sphere_point: QuatVec,
    /// Its nearest point in `U^c`.
    pub exterior_point: QuatVec,
    pub q: Quaternion,
    pub distance: f64,
}

/// The point `(x + w/2, y - w q*/2)` with `w = x_o - x - y q*`, whose sphere
/// passes through the exterior point `x_o`.
pub fn hull_witness(
    sigma: &BiquaternionPoint,
    u: &dyn Domain,
    sampler: &ImUnitSphereSampler,
) -> Result<Witness> {
    let q = hull_contains(sigma, u, sampler)?;
    if !q.verdict {
        return Err(Error::NotInHull { inf: q.inf_value });
    }
    let sphere_point = sigma.slice_point(q.argmin_q);
    let exterior_point = u.nearest_exterior(&sphere_point)?;
    let w = &exterior_point - &sphere_point;
    let point = BiquaternionPoint {
        x: &sigma.x + &w.scale(0.5),
        y: &sigma.y - &w.right_mul(q.argmin_q).scale(0.5),
    };
    let distance = point.distance(sigma);
    Ok(Witness {
        point,
        sphere_point,
        exterior_point,
        q: q.argmin_q,
        distance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::DomainSpec;
    use crate::quat::det_biquat;
    use crate::sampling::{random_biquat, seeded};

    fn sampler() -> ImUnitSphereSampler {
        ImUnitSphereSampler::default()
    }

    #[test]
    fn real_points_match_domain() {
        let u = DomainSpec::ball(1, 1.0);
        let inside = BiquaternionPoint::real(QuatVec(vec![Quaternion::new(0.5, 0.0, 0.0, 0.0)]));
        let q = hull_contains(&inside, &u, &sampler()).unwrap();
        assert!(q.verdict && q.membership == Membership::Inside);
        assert!((q.inf_value - 0.5).abs() < 1e-15);
        let d = hull_distance(&inside, &u, &sampler()).unwrap();
        assert!((d - 0.5 / 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn ball_hull_closed_form() {
        // The sphere x + y q has centre x and radius |y| when y is a single
        // quaternion, so the margin is r - max_q |x + y q| for the ball.
        let u = DomainSpec::ball(1, 3.0);
        let mut rng = seeded(4);
        for _ in 0..20 {
            let s = random_biquat(1, 1.0, &mut rng);
            let q = hull_contains(&s, &u, &sampler()).unwrap();
            let x = s.x.0[0];
            let y = s.y.0[0];
            // max over the sphere of |x + y q|: brute force on a fine grid.
            let brute = crate::sphere::fibonacci_sphere(20000)
                .into_iter()
                .map(|v| (x + y * Quaternion::imaginary(v)).norm())
                .fold(0.0, f64::max);
            assert!((q.margin - (3.0 - brute)).abs() < 1e-4, "{} vs {}", q.margin, 3.0 - brute);
        }
    }

    #[test]
    fn punctured_hull_is_nonvanishing_det() {
        let u = DomainSpec::punctured(1);
        let mut rng = seeded(5);
        for _ in 0..50 {
            let s = random_biquat(1, 1.0, &mut rng);
            let det = det_biquat(&s).unwrap();
            let q = hull_contains(&s, &u, &sampler()).unwrap();
            if det.norm() > 1e-3 {
                assert!(q.verdict, "det {det} inf {}", q.inf_value);
            }
        }
        // 1 + i q vanishes at q = i.
        let s = BiquaternionPoint {
            x: QuatVec(vec![Quaternion::ONE]),
            y: QuatVec(vec![Quaternion::I]),
        };
        assert!(det_biquat(&s).unwrap().norm() < 1e-15);
        let q = hull_contains(&s, &u, &sampler()).unwrap();
        assert!(!q.verdict && q.membership == Membership::Outside);
    }

    #[test]
    fn witness_lies_outside_at_distance() {
        let u = DomainSpec::ball(1, 2.0);
        let mut rng = seeded(6);
        for _ in 0..10 {
            let s = random_biquat(1, 0.5, &mut rng);
            let d = hull_distance(&s, &u, &sampler()).unwrap();
            let w = hull_witness(&s, &u, &sampler()).unwrap();
            assert!((w.distance - d).abs() < 1e-9);
            let back = hull_contains(&w.point, &u, &sampler()).unwrap();
            assert!(!back.verdict, "margin {}", back.margin);
        }
    }

    #[test]
    fn empty_and_whole() {
        let s = random_biquat(1, 1.0, &mut seeded(7));
        assert!(!hull_contains(&s, &DomainSpec::Empty { n: 1 }, &sampler()).unwrap().verdict);
        assert!(hull_contains(&s, &DomainSpec::Whole { n: 1 }, &sampler()).unwrap().verdict);
    }
}
