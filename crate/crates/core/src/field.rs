//! Quaternion-valued fields on `H^n`, their holomorphic extensions, and a
//! small registry of named fixtures.

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::domain::DomainSpec;
use crate::error::{Error, Result};
use crate::quat::{embed_m, CMatrix, Quaternion, QuatVec, C64};

/// The complex components `(psi0, psi1)` of `psi = psi0 + k psi1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Pair(pub C64, pub C64);

impl Pair {
    pub fn to_quaternion(self) -> Quaternion {
        Quaternion::from_pair(self.0, self.1)
    }

    pub fn from_quaternion(q: Quaternion) -> Self {
        let (a, b) = q.to_pair();
        Pair(a, b)
    }

    pub fn max_abs_diff(self, o: Pair) -> f64 {
        (self.0 - o.0).norm().max((self.1 - o.1).norm())
    }

    pub fn norm(self) -> f64 {
        (self.0.norm_sqr() + self.1.norm_sqr()).sqrt()
    }
}

impl Add for Pair {
    type Output = Pair;
    fn add(self, o: Pair) -> Pair {
        Pair(self.0 + o.0, self.1 + o.1)
    }
}

impl Sub for Pair {
    type Output = Pair;
    fn sub(self, o: Pair) -> Pair {
        Pair(self.0 - o.0, self.1 - o.1)
    }
}

impl Mul<f64> for Pair {
    type Output = Pair;
    fn mul(self, s: f64) -> Pair {
        Pair(self.0 * s, self.1 * s)
    }
}

impl Mul<C64> for Pair {
    type Output = Pair;
    fn mul(self, s: C64) -> Pair {
        Pair(self.0 * s, self.1 * s)
    }
}

/// Wirtinger derivatives of one complex function in one quaternionic block.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Wirtinger {
    pub d_alpha: C64,
    pub d_alpha_bar: C64,
    pub d_beta: C64,
    pub d_beta_bar: C64,
}

/// First derivatives of `(psi0, psi1)`, one entry per block.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairJet {
    pub psi0: Vec<Wirtinger>,
    pub psi1: Vec<Wirtinger>,
}

impl PairJet {
    pub fn zeros(n: usize) -> Self {
        Self {
            psi0: vec![Wirtinger::default(); n],
            psi1: vec![Wirtinger::default(); n],
        }
    }

    pub fn max_abs_diff(&self, o: &PairJet) -> f64 {
        let d = |a: &Wirtinger, b: &Wirtinger| {
            [
                (a.d_alpha - b.d_alpha).norm(),
                (a.d_alpha_bar - b.d_alpha_bar).norm(),
                (a.d_beta - b.d_beta).norm(),
                (a.d_beta_bar - b.d_beta_bar).norm(),
            ]
            .into_iter()
            .fold(0.0, f64::max)
        };
        self.psi0
            .iter()
            .zip(&o.psi0)
            .chain(self.psi1.iter().zip(&o.psi1))
            .map(|(a, b)| d(a, b))
            .fold(0.0, f64::max)
    }
}

/// A smooth `H`-valued function on an open subset of `H^n`.
pub trait QuaternionicField: Sync {
    fn n(&self) -> usize;

    fn pair(&self, x: &QuatVec) -> Pair;

    fn eval(&self, x: &QuatVec) -> Quaternion {
        self.pair(x).to_quaternion()
    }

    /// Where the field is defined.
    fn domain(&self) -> DomainSpec {
        DomainSpec::Whole { n: self.n() }
    }

    /// Exact first derivatives when they are known in closed form.
    fn jet(&self, _x: &QuatVec) -> Option<PairJet> {
        None
    }

    fn name(&self) -> String {
        "custom".into()
    }
}

/// A function on (an open subset of) `M_{2n x 2}(C)`, meant to be holomorphic.
pub trait ComplexField: Sync {
    fn n(&self) -> usize;

    fn eval(&self, z: &CMatrix) -> Pair;

    fn name(&self) -> String {
        "custom".into()
    }
}

/// The restriction `x -> F(M(x))` of a holomorphic field to the real slice.
pub struct RealRestriction<'a, F: ?Sized>(pub &'a F);

impl<F: ComplexField + ?Sized> QuaternionicField for RealRestriction<'_, F> {
    fn n(&self) -> usize {
        self.0.n()
    }

    fn pair(&self, x: &QuatVec) -> Pair {
        self.0.eval(&embed_m(x))
    }

    fn name(&self) -> String {
        format!("restrict({})", self.0.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BuiltinKind {
    /// `(c0, c1)`.
    Constant { c0: C64, c1: C64 },
    /// `q_1`.
    Identity,
    /// `conj(q_1)`.
    Conjugate,
    /// The fundamental solution `conj(q_1) / |q_1|^4`.
    Fundamental,
    /// `sum_l conj(alpha_l) + k beta_l`.
    LinearMonogenic,
    /// `conj(alpha_1)^2`.
    NonmonogenicQuadratic,
    /// `alpha_1 conj(beta_1) + k conj(alpha_1) beta_1`.
    NonmonogenicMixed,
}

/// A named fixture field on `H^n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BuiltinField {
    pub kind: BuiltinKind,
    pub n: usize,
}

pub const BUILTIN_NAMES: [&str; 7] = [
    "constant",
    "identity_q",
    "conj_q",
    "E",
    "linear_monogenic",
    "nonmonogenic_quadratic",
    "nonmonogenic_mixed",
];

pub const BUILTIN_COMPLEX_NAMES: [&str; 3] = ["E_ext", "linear_monogenic_ext", "identity_ext"];

impl BuiltinField {
    pub fn new(kind: BuiltinKind, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("dimension must be positive".into()));
        }
        Ok(Self { kind, n })
    }

    pub fn by_name(name: &str, n: usize) -> Result<Self> {
        let kind = match name {
            "constant" => BuiltinKind::Constant {
                c0: C64::new(1.0, 0.5),
                c1: C64::new(-0.25, 1.0),
            },
            "identity_q" => BuiltinKind::Identity,
            "conj_q" => BuiltinKind::Conjugate,
            "E" => BuiltinKind::Fundamental,
            "linear_monogenic" => BuiltinKind::LinearMonogenic,
            "nonmonogenic_quadratic" => BuiltinKind::NonmonogenicQuadratic,
            "nonmonogenic_mixed" => BuiltinKind::NonmonogenicMixed,
            other => return Err(Error::UnknownField(other.into())),
        };
        Self::new(kind, n)
    }

    /// Whether the field is known to satisfy the Cauchy-Fueter equation.
    pub fn is_monogenic(&self) -> bool {
        matches!(
            self.kind,
            BuiltinKind::Constant { .. } | BuiltinKind::Fundamental | BuiltinKind::LinearMonogenic
        )
    }
}

fn block(x: &QuatVec, l: usize) -> (C64, C64) {
    x.0[l].to_pair()
}

impl QuaternionicField for BuiltinField {
    fn n(&self) -> usize {
        self.n
    }

    fn pair(&self, x: &QuatVec) -> Pair {
        let (a, b) = block(x, 0);
        match self.kind {
            BuiltinKind::Constant { c0, c1 } => Pair(c0, c1),
            BuiltinKind::Identity => Pair(a, b),
            BuiltinKind::Conjugate => Pair(a.conj(), -b),
            BuiltinKind::Fundamental => {
                let nn = a.norm_sqr() + b.norm_sqr();
                let inv = 1.0 / (nn * nn);
                Pair(a.conj() * inv, -b * inv)
            }
            BuiltinKind::LinearMonogenic => x.0.iter().fold(Pair::default(), |acc, q| {
                let (a, b) = q.to_pair();
                acc + Pair(a.conj(), b)
            }),
            BuiltinKind::NonmonogenicQuadratic => Pair(a.conj() * a.conj(), C64::new(0.0, 0.0)),
            BuiltinKind::NonmonogenicMixed => Pair(a * b.conj(), a.conj() * b),
        }
    }

    fn domain(&self) -> DomainSpec {
        match self.kind {
            BuiltinKind::Fundamental => DomainSpec::AxisComplement {
                n: self.n,
                index: 0,
            },
            _ => DomainSpec::Whole { n: self.n },
        }
    }

    fn jet(&self, x: &QuatVec) -> Option<PairJet> {
        let one = C64::new(1.0, 0.0);
        let mut jet = PairJet::zeros(self.n);
        let (a, b) = block(x, 0);
        let (j0, j1) = (&mut jet.psi0, &mut jet.psi1);
        match self.kind {
            BuiltinKind::Constant { .. } => {}
            BuiltinKind::Identity => {
                j0[0].d_alpha = one;
                j1[0].d_beta = one;
            }
            BuiltinKind::Conjugate => {
                j0[0].d_alpha_bar = one;
                j1[0].d_beta = -one;
            }
            BuiltinKind::Fundamental => {
                let nn = a.norm_sqr() + b.norm_sqr();
                let n2 = 1.0 / (nn * nn);
                let n3 = n2 / nn;
                let (ac, bc) = (a.conj(), b.conj());
                j0[0] = Wirtinger {
                    d_alpha: -2.0 * ac * ac * n3,
                    d_alpha_bar: one * (n2 - 2.0 * a.norm_sqr() * n3),
                    d_beta: -2.0 * ac * bc * n3,
                    d_beta_bar: -2.0 * ac * b * n3,
                };
                j1[0] = Wirtinger {
                    d_alpha: 2.0 * b * ac * n3,
                    d_alpha_bar: 2.0 * b * a * n3,
                    d_beta: one * (-n2 + 2.0 * b.norm_sqr() * n3),
                    d_beta_bar: 2.0 * b * b * n3,
                };
            }
            BuiltinKind::LinearMonogenic => {
                for l in 0..self.n {
                    j0[l].d_alpha_bar = one;
                    j1[l].d_beta = one;
                }
            }
            BuiltinKind::NonmonogenicQuadratic => {
                j0[0].d_alpha_bar = 2.0 * a.conj();
            }
            BuiltinKind::NonmonogenicMixed => {
                j0[0].d_alpha = b.conj();
                j0[0].d_beta_bar = a;
                j1[0].d_alpha_bar = b;
                j1[0].d_beta = a.conj();
            }
        }
        Some(jet)
    }

    fn name(&self) -> String {
        match self.kind {
            BuiltinKind::Constant { .. } => "constant",
            BuiltinKind::Identity => "identity_q",
            BuiltinKind::Conjugate => "conj_q",
            BuiltinKind::Fundamental => "E",
            BuiltinKind::LinearMonogenic => "linear_monogenic",
            BuiltinKind::NonmonogenicQuadratic => "nonmonogenic_quadratic",
            BuiltinKind::NonmonogenicMixed => "nonmonogenic_mixed",
        }
        .into()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BuiltinComplexKind {
    /// `(z11, -z10) / det^2` on the first `2 x 2` block.
    FundamentalExt,
    /// `(sum_l z_{2l+1, 1}, sum_l z_{2l+1, 0})`.
    LinearMonogenicExt,
    /// `(z00, z10)`, the extension of `q_1`.
    IdentityExt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuiltinComplexField {
    pub kind: BuiltinComplexKind,
    pub n: usize,
}

impl BuiltinComplexField {
    pub fn by_name(name: &str, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("dimension must be positive".into()));
        }
        let kind = match name {
            "E_ext" => BuiltinComplexKind::FundamentalExt,
            "linear_monogenic_ext" => BuiltinComplexKind::LinearMonogenicExt,
            "identity_ext" => BuiltinComplexKind::IdentityExt,
            other => return Err(Error::UnknownField(other.into())),
        };
        Ok(Self { kind, n })
    }
}

impl ComplexField for BuiltinComplexField {
    fn n(&self) -> usize {
        self.n
    }

    fn eval(&self, z: &CMatrix) -> Pair {
        match self.kind {
            BuiltinComplexKind::FundamentalExt => {
                let det = z.get(0, 0) * z.get(1, 1) - z.get(0, 1) * z.get(1, 0);
                let inv = (det * det).inv();
                Pair(z.get(1, 1) * inv, -z.get(1, 0) * inv)
            }
            BuiltinComplexKind::LinearMonogenicExt => (0..self.n).fold(Pair::default(), |acc, l| {
                acc + Pair(z.get(2 * l + 1, 1), z.get(2 * l + 1, 0))
            }),
            BuiltinComplexKind::IdentityExt => Pair(z.get(0, 0), z.get(1, 0)),
        }
    }

    fn name(&self) -> String {
        match self.kind {
            BuiltinComplexKind::FundamentalExt => "E_ext",
            BuiltinComplexKind::LinearMonogenicExt => "linear_monogenic_ext",
            BuiltinComplexKind::IdentityExt => "identity_ext",
        }
        .into()
    }
}
