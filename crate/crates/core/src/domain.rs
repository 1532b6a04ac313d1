//! Open subsets of `H^n` described by a membership predicate and the
//! exterior distance `delta(p, U^c)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quat::{Quaternion, QuatVec};

/// An open set `U` of `H^n`.
///
/// `ext_distance` must vanish off `U`, be positive on `U` and be 1-Lipschitz.
pub trait Domain: Sync {
    fn dim(&self) -> usize;

    fn contains(&self, p: &QuatVec) -> bool;

    fn ext_distance(&self, p: &QuatVec) -> f64;

    /// Equal to `ext_distance` on `U` and `<= 0` off it. Implementations with
    /// a true signed distance give the sphere searches a slope to follow
    /// outside `U`.
    fn signed_margin(&self, p: &QuatVec) -> f64 {
        if self.contains(p) {
            self.ext_distance(p)
        } else {
            0.0
        }
    }

    /// A point of `U^c` at distance `ext_distance(p)` from `p`.
    ///
    /// The default walks against the finite-difference gradient of the
    /// distance function and checks the landing point.
    fn nearest_exterior(&self, p: &QuatVec) -> Result<QuatVec> {
        let d = self.ext_distance(p);
        if d == 0.0 {
            return Ok(p.clone());
        }
        if !d.is_finite() {
            return Err(Error::BoundaryUnresolved("domain has empty complement".into()));
        }
        let h = 1e-6 * d.max(1e-3);
        let coords = p.coords();
        let mut grad = vec![0.0; coords.len()];
        for (i, g) in grad.iter_mut().enumerate() {
            let mut plus = coords.clone();
            let mut minus = coords.clone();
            plus[i] += h;
            minus[i] -= h;
            let fp = self.ext_distance(&QuatVec::from_coords(&plus)?);
            let fm = self.ext_distance(&QuatVec::from_coords(&minus)?);
            *g = (fp - fm) / (2.0 * h);
        }
        let gn = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        if gn < 1e-8 {
            return Err(Error::BoundaryUnresolved("distance gradient vanishes".into()));
        }
        let target: Vec<f64> = coords
            .iter()
            .zip(&grad)
            .map(|(c, g)| c - d * g / gn)
            .collect();
        let target = QuatVec::from_coords(&target)?;
        let landing = self.ext_distance(&target);
        if landing > 1e-6 * (1.0 + d) {
            return Err(Error::BoundaryUnresolved(format!(
                "gradient step landed at distance {landing:e} from the complement"
            )));
        }
        Ok(target)
    }
}

/// Built-in domains with closed-form distance functions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum DomainSpec {
    /// Open ball `{ |p - center| < radius }`.
    Ball { center: QuatVec, radius: f64 },
    /// `H^n` minus a single point.
    PointComplement { point: QuatVec },
    /// `H^n` minus the quaternionic hyperplane `{ q_index = 0 }`.
    AxisComplement { n: usize, index: usize },
    /// Open half-space `{ <normal, p> < offset }`.
    Halfspace { normal: QuatVec, offset: f64 },
    Intersection { parts: Vec<DomainSpec> },
    Whole { n: usize },
    Empty { n: usize },
}

impl DomainSpec {
    pub fn ball(n: usize, radius: f64) -> Self {
        DomainSpec::Ball {
            center: QuatVec::zeros(n),
            radius,
        }
    }

    /// `H^n \ {0}`.
    pub fn punctured(n: usize) -> Self {
        DomainSpec::PointComplement {
            point: QuatVec::zeros(n),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            DomainSpec::Ball { radius, .. } if *radius <= 0.0 || !radius.is_finite() => {
                Err(Error::Config(format!("ball radius must be positive, got {radius}")))
            }
            DomainSpec::AxisComplement { n, index } if index >= n => Err(Error::Config(format!(
                "axis index {index} out of range for n = {n}"
            ))),
            DomainSpec::Halfspace { normal, .. } if normal.norm() == 0.0 => {
                Err(Error::Config("half-space normal must be nonzero".into()))
            }
            DomainSpec::Intersection { parts } => {
                let first = parts
                    .first()
                    .ok_or_else(|| Error::Config("intersection needs at least one part".into()))?;
                for p in parts {
                    p.validate()?;
                    if p.dim() != first.dim() {
                        return Err(Error::DimensionMismatch {
                            expected: first.dim(),
                            got: p.dim(),
                        });
                    }
                }
                Ok(())
            }
            DomainSpec::Whole { n } | DomainSpec::Empty { n } if *n == 0 => {
                Err(Error::Config("dimension must be positive".into()))
            }
            _ => Ok(()),
        }
    }
}

impl Domain for DomainSpec {
    fn dim(&self) -> usize {
        match self {
            DomainSpec::Ball { center, .. } => center.n(),
            DomainSpec::PointComplement { point } => point.n(),
            DomainSpec::AxisComplement { n, .. } => *n,
            DomainSpec::Halfspace { normal, .. } => normal.n(),
            DomainSpec::Intersection { parts } => parts.first().map_or(0, |p| p.dim()),
            DomainSpec::Whole { n } | DomainSpec::Empty { n } => *n,
        }
    }

    fn contains(&self, p: &QuatVec) -> bool {
        match self {
            DomainSpec::Intersection { parts } => parts.iter().all(|d| d.contains(p)),
            DomainSpec::Whole { .. } => true,
            DomainSpec::Empty { .. } => false,
            _ => self.signed_margin(p) > 0.0,
        }
    }

    fn ext_distance(&self, p: &QuatVec) -> f64 {
        match self {
            DomainSpec::Intersection { parts } => parts
                .iter()
                .map(|d| d.ext_distance(p))
                .fold(f64::INFINITY, f64::min),
            _ => self.signed_margin(p).max(0.0),
        }
    }

    fn signed_margin(&self, p: &QuatVec) -> f64 {
        match self {
            DomainSpec::Ball { center, radius } => radius - (p - center).norm(),
            DomainSpec::PointComplement { point } => (p - point).norm(),
            DomainSpec::AxisComplement { index, .. } => p.0[*index].norm(),
            DomainSpec::Halfspace { normal, offset } => {
                (offset - normal.inner(p)) / normal.norm()
            }
            DomainSpec::Intersection { parts } => parts
                .iter()
                .map(|d| d.signed_margin(p))
                .fold(f64::INFINITY, f64::min),
            DomainSpec::Whole { .. } => f64::INFINITY,
            DomainSpec::Empty { .. } => f64::NEG_INFINITY,
        }
    }

    fn nearest_exterior(&self, p: &QuatVec) -> Result<QuatVec> {
        match self {
            DomainSpec::Ball { center, radius } => {
                let off = p - center;
                let r = off.norm();
                let dir = if r > 0.0 {
                    off.scale(1.0 / r)
                } else {
                    let mut e = QuatVec::zeros(p.n());
                    e.0[0] = Quaternion::ONE;
                    e
                };
                Ok(center + &dir.scale(*radius))
            }
            DomainSpec::PointComplement { point } => Ok(point.clone()),
            DomainSpec::AxisComplement { index, .. } => {
                let mut out = p.clone();
                out.0[*index] = Quaternion::ZERO;
                Ok(out)
            }
            DomainSpec::Halfspace { normal, .. } => {
                let nn = normal.norm();
                let d = self.signed_margin(p);
                Ok(p + &normal.scale(d / nn))
            }
            DomainSpec::Intersection { parts } => {
                let closest = parts
                    .iter()
                    .min_by(|a, b| a.ext_distance(p).total_cmp(&b.ext_distance(p)))
                    .ok_or_else(|| Error::Config("empty intersection".into()))?;
                closest.nearest_exterior(p)
            }
            DomainSpec::Whole { .. } => Err(Error::BoundaryUnresolved(
                "the whole space has empty complement".into(),
            )),
            DomainSpec::Empty { .. } => Ok(p.clone()),
        }
    }
}

impl fmt::Display for DomainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match serde_json::to_string(self) {
            Ok(s) => f.write_str(&s),
            Err(_) => Err(fmt::Error),
        }
    }
}

/// Parses either a JSON description or a shorthand such as `H*:n=1`,
/// `ball:r=1,n=2`, `axis:i=0,n=2`, `whole:n=1` or `empty:n=1`.
impl FromStr for DomainSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            let spec: DomainSpec =
                serde_json::from_str(s).map_err(|e| Error::Config(format!("domain JSON: {e}")))?;
            spec.validate()?;
            return Ok(spec);
        }
        let (kind, params) = s.split_once(':').unwrap_or((s, ""));
        let mut n = 1usize;
        let mut r = 1.0f64;
        let mut index = 0usize;
        for kv in params.split(',').filter(|t| !t.is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("expected key=value, got '{kv}'")))?;
            let bad = |e: &dyn fmt::Display| Error::Config(format!("bad value for {k}: {e}"));
            match k.trim() {
                "n" => n = v.trim().parse().map_err(|e| bad(&e))?,
                "r" => r = v.trim().parse().map_err(|e| bad(&e))?,
                "i" => index = v.trim().parse().map_err(|e| bad(&e))?,
                other => return Err(Error::Config(format!("unknown domain parameter '{other}'"))),
            }
        }
        if n == 0 {
            return Err(Error::Config("dimension must be positive".into()));
        }
        let spec = match kind.trim() {
            "H*" | "punctured" | "point" => DomainSpec::punctured(n),
            "ball" | "B" => DomainSpec::ball(n, r),
            "axis" => DomainSpec::AxisComplement { n, index },
            "whole" => DomainSpec::Whole { n },
            "empty" => DomainSpec::Empty { n },
            other => return Err(Error::Config(format!("unknown domain shorthand '{other}'"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// A domain assembled from user-supplied closures.
pub struct FnDomain<C, D> {
    pub n: usize,
    pub contains: C,
    pub ext_distance: D,
}

impl<C, D> Domain for FnDomain<C, D>
where
    C: Fn(&QuatVec) -> bool + Sync,
    D: Fn(&QuatVec) -> f64 + Sync,
{
    fn dim(&self) -> usize {
        self.n
    }

    fn contains(&self, p: &QuatVec) -> bool {
        (self.contains)(p)
    }

    fn ext_distance(&self, p: &QuatVec) -> f64 {
        (self.ext_distance)(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_quat_vec, seeded};

    fn q(x0: f64, x1: f64, x2: f64, x3: f64) -> QuatVec {
        QuatVec(vec![Quaternion::new(x0, x1, x2, x3)])
    }

    #[test]
    fn ball_distance_and_boundary() {
        let b = DomainSpec::ball(1, 2.0);
        let p = q(0.5, 0.0, 0.0, 0.0);
        assert!(b.contains(&p));
        assert!((b.ext_distance(&p) - 1.5).abs() < 1e-15);
        assert_eq!(b.ext_distance(&q(3.0, 0.0, 0.0, 0.0)), 0.0);
        let x = b.nearest_exterior(&p).unwrap();
        assert!((x.norm() - 2.0).abs() < 1e-15);
        assert_eq!(b.ext_distance(&x), 0.0);
    }

    #[test]
    fn invariants_on_random_points() {
        let mut rng = seeded(11);
        let specs = [
            DomainSpec::ball(2, 1.0),
            DomainSpec::punctured(2),
            DomainSpec::AxisComplement { n: 2, index: 1 },
            DomainSpec::Halfspace {
                normal: QuatVec(vec![Quaternion::new(1.0, 2.0, 0.0, 0.0), Quaternion::K]),
                offset: 0.3,
            },
            DomainSpec::Intersection {
                parts: vec![DomainSpec::ball(2, 1.5), DomainSpec::punctured(2)],
            },
        ];
        for spec in &specs {
            let pts: Vec<_> = (0..200).map(|_| random_quat_vec(2, 1.0, &mut rng)).collect();
            for p in &pts {
                let d = spec.ext_distance(p);
                assert_eq!(spec.contains(p), d > 0.0, "{spec} at {p:?}");
            }
            for w in pts.windows(2) {
                let lip = (spec.ext_distance(&w[0]) - spec.ext_distance(&w[1])).abs();
                assert!(lip <= (&w[0] - &w[1]).norm() + 1e-12);
            }
        }
    }

    #[test]
    fn gradient_walk_finds_boundary() {
        let inner = DomainSpec::ball(1, 1.0);
        let f = FnDomain {
            n: 1,
            contains: |p: &QuatVec| inner.contains(p),
            ext_distance: |p: &QuatVec| inner.ext_distance(p),
        };
        let p = q(0.2, 0.1, -0.3, 0.0);
        let x = f.nearest_exterior(&p).unwrap();
        let exact = inner.nearest_exterior(&p).unwrap();
        assert!(x.approx_eq(&exact, 1e-6));
    }

    #[test]
    fn shorthand_and_json() {
        let d: DomainSpec = "H*:n=1".parse().unwrap();
        assert_eq!(d, DomainSpec::punctured(1));
        let d: DomainSpec = "ball:r=2.5,n=2".parse().unwrap();
        assert_eq!(d, DomainSpec::ball(2, 2.5));
        let json = r#"{"type":"ball","center":[0,0,0,0],"radius":1.0}"#;
        let d: DomainSpec = json.parse().unwrap();
        assert_eq!(d, DomainSpec::ball(1, 1.0));
        assert!("ball:r=-1".parse::<DomainSpec>().is_err());
        assert!("torus:n=1".parse::<DomainSpec>().is_err());
        assert!("axis:i=3,n=2".parse::<DomainSpec>().is_err());
        let round: DomainSpec = serde_json::from_str(&DomainSpec::punctured(2).to_string()).unwrap();
        assert_eq!(round, DomainSpec::punctured(2));
    }

    #[test]
    fn whole_and_empty() {
        let p = q(1.0, 2.0, 3.0, 4.0);
        assert!(DomainSpec::Whole { n: 1 }.contains(&p));
        assert!(DomainSpec::Whole { n: 1 }.ext_distance(&p).is_infinite());
        assert!(!DomainSpec::Empty { n: 1 }.contains(&p));
        assert_eq!(DomainSpec::Empty { n: 1 }.ext_distance(&p), 0.0);
    }
}
