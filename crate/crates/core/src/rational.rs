//! Exact rational helpers: parsing and printing, ceilings, interval bounds on
//! natural logarithms, and exact Bernoulli draws.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// Exact arbitrary-precision rational.
pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

pub fn qu(v: usize) -> Q {
    Q::from_integer(BigInt::from(v))
}

/// Formats as `num/den` (denominator always present).
pub fn fmt_q(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `num/den`, a bare integer, or a finite decimal such as `0.05`.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Q::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = int.starts_with('-');
        let int_part: BigInt = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| bad())?
        };
        let frac_num: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let mag = int_part.abs() * &scale + frac_num;
        let v = Q::new(mag, scale);
        return Ok(if neg { -v } else { v });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Q::from_integer(n))
}

pub fn ceil_int(x: &Q) -> BigInt {
    x.ceil().to_integer()
}

pub fn floor_int(x: &Q) -> BigInt {
    x.floor().to_integer()
}

/// `ceil(x)` as usize; negative values clamp to 0.
pub fn ceil_usize(x: &Q) -> usize {
    let c = ceil_int(x);
    if c.sign() == Sign::Minus {
        0
    } else {
        c.to_usize().unwrap_or(usize::MAX)
    }
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// A closed rational interval `[lo, hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Interval {
    pub lo: Q,
    pub hi: Q,
}

impl Interval {
    fn add(&self, o: &Interval) -> Interval {
        Interval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }
    fn scale(&self, k: &Q) -> Interval {
        if k.is_negative() {
            Interval { lo: &self.hi * k, hi: &self.lo * k }
        } else {
            Interval { lo: &self.lo * k, hi: &self.hi * k }
        }
    }
    /// Quotient of two intervals; `o` must not contain zero.
    pub fn div(&self, o: &Interval) -> Interval {
        let c = [&self.lo / &o.lo, &self.lo / &o.hi, &self.hi / &o.lo, &self.hi / &o.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval { lo, hi }
    }
    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }
}

fn round_down(x: &Q, bits: usize) -> Q {
    let s = Q::from_integer(BigInt::one() << bits);
    Q::new(floor_int(&(x * &s)), s.to_integer())
}

fn round_up(x: &Q, bits: usize) -> Q {
    let s = Q::from_integer(BigInt::one() << bits);
    Q::new(ceil_int(&(x * &s)), s.to_integer())
}

/// Bounds on `ln(y)` for `y` in `[2/3, 4/3]` via the atanh series with
/// `terms` terms and a geometric tail bound.
fn ln_near_one(y: &Q, terms: usize, bits: usize) -> Interval {
    let z = (y - Q::one()) / (y + Q::one());
    let z2 = &z * &z;
    let mut pow = z.clone();
    let mut sum = Q::zero();
    for k in 0..terms {
        sum += &pow / qu(2 * k + 1);
        pow = round_toward_zero(&(&pow * &z2), bits + 16);
    }
    sum *= qi(2);
    // |tail| <= 2 |z|^(2K+1) / ((2K+1)(1 - z^2)); `pow` is rounded toward zero
    // so pad it by one ulp.
    let ulp = Q::new(BigInt::one(), BigInt::one() << (bits + 16));
    let tail = qi(2) * (pow.abs() + ulp) / (qu(2 * terms + 1) * (Q::one() - z2));
    let pad = Q::new(BigInt::from(terms as u64 + 1), BigInt::one() << (bits + 16));
    Interval {
        lo: round_down(&(&sum - &tail - &pad), bits),
        hi: round_up(&(&sum + &tail + &pad), bits),
    }
}

fn round_toward_zero(x: &Q, bits: usize) -> Q {
    if x.is_negative() {
        round_up(x, bits)
    } else {
        round_down(x, bits)
    }
}

/// Rigorous bounds on `ln(x)` for rational `x > 0`. Larger `terms` gives a
/// tighter interval.
pub fn ln_interval(x: &Q, terms: usize) -> Interval {
    assert!(x.is_positive(), "ln of non-positive rational");
    let bits = 4 * terms + 8;
    let two = qi(2);
    let lo_bound = q(2, 3);
    let hi_bound = q(4, 3);
    let mut y = x.clone();
    let mut m: i64 = 0;
    while y > hi_bound {
        y /= &two;
        m += 1;
    }
    while y < lo_bound {
        y *= &two;
        m -= 1;
    }
    let ln_y = ln_near_one(&y, terms, bits);
    if m == 0 {
        return ln_y;
    }
    // ln 2 = 2 atanh(1/3); evaluate directly at y = 2 through the same series
    // on z = 1/3.
    let ln2 = ln2_interval(terms, bits);
    ln_y.add(&ln2.scale(&qi(m)))
}

fn ln2_interval(terms: usize, bits: usize) -> Interval {
    let z = q(1, 3);
    let z2 = &z * &z;
    let mut pow = z.clone();
    let mut sum = Q::zero();
    for k in 0..terms {
        sum += &pow / qu(2 * k + 1);
        pow *= &z2;
    }
    sum *= qi(2);
    let tail = qi(2) * &pow / (qu(2 * terms + 1) * (Q::one() - z2));
    Interval { lo: round_down(&sum, bits), hi: round_up(&(&sum + &tail), bits) }
}

/// `ceil(ln(a) / ln(b))`, determined exactly by tightening interval bounds.
/// Requires `a, b > 0` and `b != 1`.
pub fn ceil_log_ratio(a: &Q, b: &Q) -> Result<BigInt> {
    if !a.is_positive() || !b.is_positive() || b.is_one() {
        return Err(Error::Domain(format!(
            "log ratio undefined for a={}, b={}",
            fmt_q(a),
            fmt_q(b)
        )));
    }
    if a.is_one() {
        return Ok(BigInt::zero());
    }
    let mut terms = 12;
    let mut last: Option<Interval> = None;
    while terms <= 1536 {
        let num = ln_interval(a, terms);
        let den = ln_interval(b, terms);
        if !den.contains_zero() {
            let r = num.div(&den);
            let (cl, ch) = (ceil_int(&r.lo), ceil_int(&r.hi));
            if cl == ch {
                return Ok(cl);
            }
            last = Some(r);
        }
        terms *= 2;
    }
    // The ratio may be an exact integer L, i.e. b^L = a.
    if let Some(r) = last {
        for cand in [floor_int(&r.lo), ceil_int(&r.lo), ceil_int(&r.hi)] {
            if let Some(e) = cand.to_i32() {
                if num_traits::pow::Pow::pow(b, e) == *a {
                    return Ok(cand);
                }
            }
        }
    }
    Err(Error::Invariant(format!(
        "could not determine ceil(ln {} / ln {})",
        fmt_q(a),
        fmt_q(b)
    )))
}

/// Draws `true` with probability exactly `p` (clamped to `[0, 1]`), by
/// sampling a uniform point of the lattice `{0, .., den-1}`.
pub fn bernoulli<R: Rng + ?Sized>(rng: &mut R, p: &Q) -> bool {
    if !p.is_positive() {
        return false;
    }
    if *p >= Q::one() {
        return true;
    }
    let den = p.denom();
    let num = p.numer();
    if let (Some(d), Some(n)) = (den.to_u64(), num.to_u64()) {
        return rng.random_range(0..d) < n;
    }
    uniform_below(rng, den) < *num
}

/// Uniform integer in `[0, bound)` by rejection over the bit length.
pub fn uniform_below<R: Rng + ?Sized>(rng: &mut R, bound: &BigInt) -> BigInt {
    debug_assert!(bound.is_positive());
    let bits = bound.bits() as usize;
    loop {
        let mut v = BigInt::zero();
        let mut remaining = bits;
        while remaining > 0 {
            let take = remaining.min(32);
            let chunk: u32 = rng.random::<u32>() >> (32 - take);
            v = (v << take) | BigInt::from(chunk);
            remaining -= take;
        }
        if &v < bound {
            return v;
        }
    }
}

/// Least common multiple of all denominators.
pub fn common_denominator<'a, I: IntoIterator<Item = &'a Q>>(xs: I) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

pub mod serde_q {
    //! Serde adapter writing rationals as `"num/den"` strings.
    use super::{fmt_q, parse_q, Q};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use super::super::{fmt_q, parse_q, Q};
        use serde::{Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(xs: &[Q], s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(xs.iter().map(fmt_q))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
            let v = Vec::<String>::deserialize(d)?;
            v.iter().map(|s| parse_q(s).map_err(serde::de::Error::custom)).collect()
        }
    }
}
