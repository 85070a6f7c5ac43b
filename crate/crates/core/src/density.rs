//! Exact bounds built on the global solid density `Δ_d`.
//!
//! Every quantity here is an integer or a rational; nothing is evaluated in
//! floating point, since the interesting cases are exactly those where a
//! `d`-th root lands on or next to an integer.
//!
//! `Δ_3 = 21/250` is conjectural. Values derived from it carry
//! `conjectural = true` and render with a trailing `'` (`ℓ'`, `c'`, `N'`).

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::cayley::{self, CayleyDigraph};
use crate::error::{Error, Result};

pub type Rational = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Proven,
    Conjectural,
}

/// `Δ_d` for one degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DensityConstant {
    pub degree: u32,
    numer: u64,
    denom: u64,
    pub status: Status,
}

const REGISTRY: [DensityConstant; 3] = [
    DensityConstant {
        degree: 1,
        numer: 1,
        denom: 1,
        status: Status::Proven,
    },
    DensityConstant {
        degree: 2,
        numer: 1,
        denom: 3,
        status: Status::Proven,
    },
    DensityConstant {
        degree: 3,
        numer: 21,
        denom: 250,
        status: Status::Conjectural,
    },
];

impl DensityConstant {
    pub fn delta(&self) -> Rational {
        Rational::new(self.numer.into(), self.denom.into())
    }

    pub fn is_conjectural(&self) -> bool {
        self.status == Status::Conjectural
    }
}

pub fn registry() -> &'static [DensityConstant] {
    &REGISTRY
}

pub fn density_constant(d: u32) -> Result<DensityConstant> {
    REGISTRY
        .iter()
        .find(|c| c.degree == d)
        .copied()
        .ok_or(Error::UnsupportedDegree(d))
}

/// A value together with whether it rests on a conjectural constant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Flagged<T> {
    pub value: T,
    pub conjectural: bool,
}

impl<T> Flagged<T> {
    fn new(value: T, d: u32) -> Self {
        Flagged {
            value,
            conjectural: d == 3,
        }
    }
}

impl<T: fmt::Display> fmt::Display for Flagged<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)?;
        if self.conjectural {
            write!(f, "'")?;
        }
        Ok(())
    }
}

/// Renders `p/q`, or `p` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Least integer `x` with `x^d ≥ r`.
pub fn ceil_root(r: &Rational, d: u32) -> Result<BigUint> {
    if !r.is_positive() || d == 0 {
        return Err(Error::NonPositive);
    }
    // x^d is an integer, so x^d ≥ r iff x^d ≥ ⌈r⌉
    let target = r.ceil().to_integer().to_biguint().expect("positive");
    let floor = target.nth_root(d);
    if floor.pow(d) == target {
        Ok(floor)
    } else {
        Ok(floor + 1u32)
    }
}

/// `n / Δ_d`.
fn scaled_order(d: u32, n: u64) -> Result<Rational> {
    if n == 0 {
        return Err(Error::NonPositive);
    }
    Ok(Rational::from_integer(n.into()) / density_constant(d)?.delta())
}

fn to_i64(x: &BigUint) -> Result<i64> {
    x.to_i64().ok_or_else(|| Error::Overflow(x.to_string()))
}

/// `ℓ(d, n) = ⌈(n / Δ_d)^{1/d}⌉ - d`.
pub fn lower_bound(d: u32, n: u64) -> Result<Flagged<i64>> {
    let x = ceil_root(&scaled_order(d, n)?, d)?;
    Ok(Flagged::new(to_i64(&x)? - d as i64, d))
}

/// `t(d, Γ) = k(Γ) - ℓ(d, n)`.
///
/// A negative value contradicts the bound: for proven degrees it is an
/// internal error, for degree 3 it refutes `Δ_3 = 21/250`.
pub fn tightness(g: &CayleyDigraph) -> Result<Flagged<i64>> {
    let d = g.degree() as u32;
    let bound = lower_bound(d, g.order())?;
    let k = cayley::diameter(g);
    let t = k as i64 - bound.value;
    if t < 0 {
        return Err(bound_violation(g, k, bound.value));
    }
    Ok(Flagged::new(t, d))
}

pub(crate) fn bound_violation(g: &CayleyDigraph, k: u64, bound: i64) -> Error {
    let d = g.degree() as u32;
    if d == 3 {
        Error::ConjectureRefuted {
            witness: g.to_string(),
            detail: format!("diameter {k} below conjectural bound {bound}"),
        }
    } else {
        Error::BoundViolated {
            d,
            n: g.order(),
            diameter: k,
            bound,
        }
    }
}

/// Solid density checked against `Δ_d`; exceeding it is an error (a
/// refutation event for degree 3).
pub fn check_density(g: &CayleyDigraph) -> Result<Flagged<Rational>> {
    let d = g.degree() as u32;
    let delta = density_constant(d)?.delta();
    let density = cayley::solid_density(g);
    if density > delta {
        let k = cayley::diameter(g);
        return Err(if d == 3 {
            Error::ConjectureRefuted {
                witness: g.to_string(),
                detail: format!("solid density {} exceeds 21/250", format_rational(&density)),
            }
        } else {
            Error::BoundViolated {
                d,
                n: g.order(),
                diameter: k,
                bound: lower_bound(d, g.order())?.value,
            }
        });
    }
    Ok(Flagged::new(density, d))
}

/// `x ∈ C_d`: `Δ_d x^d` is an integer, i.e. `q_d | x^d` for `Δ_d = s_d/q_d`.
pub fn in_cd(x: u64, d: u32) -> Result<bool> {
    let c = density_constant(d)?;
    let xd = BigUint::from(x).pow(d);
    Ok((xd % c.denom).is_zero())
}

/// Least positive integer in `C_d`: with `q_d = Π p_i^{α_i}`, it is
/// `Π p_i^{⌈α_i / d⌉}`.
pub fn min_attaining_x(d: u32) -> Result<u64> {
    let c = density_constant(d)?;
    Ok(factorize(c.denom)
        .into_iter()
        .map(|(p, alpha)| p.pow(alpha.div_ceil(d)))
        .product())
}

fn factorize(mut q: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= q {
        let mut e = 0;
        while q % p == 0 {
            q /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if q > 1 {
        out.push((q, 1));
    }
    out
}

/// Number of consecutive tight dilates of a tight digraph of order `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TightnessCoefficient {
    Finite(u64),
    Infinite,
}

impl fmt::Display for TightnessCoefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TightnessCoefficient::Finite(c) => write!(f, "{c}"),
            TightnessCoefficient::Infinite => write!(f, "INFINITE"),
        }
    }
}

impl Serialize for TightnessCoefficient {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            TightnessCoefficient::Finite(c) => s.serialize_u64(*c),
            TightnessCoefficient::Infinite => s.serialize_str("INFINITE"),
        }
    }
}

/// `r` and `X = ⌈r^{1/d}⌉`, or `None` when `r^{1/d}` is an integer (then
/// every dilate stays tight).
fn root_and_ceiling(d: u32, n: u64) -> Result<Option<(Rational, BigUint)>> {
    let r = scaled_order(d, n)?;
    let x = ceil_root(&r, d)?;
    let exact = Rational::from_integer(BigInt::from(x.clone()).pow(d)) == r;
    Ok((!exact).then_some((r, x)))
}

/// Whether `⌈m r^{1/d}⌉ = m ⌈r^{1/d}⌉` for `r = n / Δ_d`, i.e. whether the
/// `m`-th dilate of a tight digraph of order `n` stays tight.
pub fn dilate_is_tight(d: u32, n: u64, m: u64) -> Result<bool> {
    let r = scaled_order(d, n)?;
    let x = ceil_root(&r, d)?;
    characterization_holds(&r, &x, d, m)
}

fn characterization_holds(r: &Rational, x: &BigUint, d: u32, m: u64) -> Result<bool> {
    let md = Rational::from_integer(BigInt::from(m).pow(d));
    Ok(ceil_root(&(md * r), d)? == x * m)
}

/// `m {r^{1/d}} < 1`, with `{v} = ⌈v⌉ - v`, decided as
/// `(m X - 1)^d < m^d r` in integers.
fn beta_condition(r: &Rational, x: &BigUint, d: u32, m: u64) -> bool {
    let lhs = (BigInt::from(x * m) - 1u32).pow(d) * r.denom();
    let rhs = BigInt::from(m).pow(d) * r.numer();
    lhs < rhs
}

/// `c(d, n)` by walking `m = 1, 2, ...` until the characterization of tight
/// dilates fails. At each step the β inequality must agree.
///
/// The value depends on `d` and `n` only. It counts tight dilates when the
/// seed digraph is itself tight; the number is computed regardless.
pub fn tightness_coefficient(d: u32, n: u64) -> Result<Flagged<TightnessCoefficient>> {
    let Some((r, x)) = root_and_ceiling(d, n)? else {
        return Ok(Flagged::new(TightnessCoefficient::Infinite, d));
    };
    let mut m = 1;
    loop {
        let holds = characterization_holds(&r, &x, d, m)?;
        assert_eq!(
            holds,
            beta_condition(&r, &x, d, m),
            "characterization and β test disagree at d={d} n={n} m={m}"
        );
        if !holds {
            return Ok(Flagged::new(TightnessCoefficient::Finite(m - 1), d));
        }
        m += 1;
    }
}

/// `c(d, n)` from `β = 1 / {r^{1/d}}`: the largest `m` with `m {r^{1/d}} < 1`,
/// which is `⌊β⌋`, or `β - 1` when `β` is an integer. Found by exponential
/// and binary search on the integer form of the inequality.
pub fn tightness_coefficient_by_beta(d: u32, n: u64) -> Result<Flagged<TightnessCoefficient>> {
    let Some((r, x)) = root_and_ceiling(d, n)? else {
        return Ok(Flagged::new(TightnessCoefficient::Infinite, d));
    };
    let mut lo = 1u64; // condition holds at m = 1
    let mut hi = 2u64;
    while beta_condition(&r, &x, d, hi) {
        lo = hi;
        hi = hi.checked_mul(2).ok_or(Error::Overflow("β".into()))?;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if beta_condition(&r, &x, d, mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Flagged::new(TightnessCoefficient::Finite(lo), d))
}

/// `N(d, k) = ⌊Δ_d (k + d)^d⌋`, the largest order a degree-`d` digraph of
/// diameter `k` can have.
pub fn max_order(d: u32, k: u64) -> Result<Flagged<BigUint>> {
    let delta = density_constant(d)?.delta();
    let v = delta * Rational::from_integer(BigInt::from(k + d as u64).pow(d));
    let floor = v.floor().to_integer().to_biguint().expect("nonnegative");
    Ok(Flagged::new(floor, d))
}
