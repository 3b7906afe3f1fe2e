//! Exact rationals for the simplex tableau: machine-word numerator and
//! denominator while they fit, arbitrary precision otherwise.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use crate::rational::Q;

/// `Small(n, d)` is always reduced with `d > 0`; `Big` holds only values that
/// do not fit a `Small`.
#[derive(Debug, Clone)]
pub enum Num {
    Small(i64, i64),
    Big(Q),
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn fits(v: i128) -> Option<i64> {
    i64::try_from(v).ok().filter(|&x| x != i64::MIN)
}

impl Num {
    pub const ZERO: Num = Num::Small(0, 1);
    pub const ONE: Num = Num::Small(1, 1);

    /// Reduces `n / d` (`d != 0`) into the narrowest representation.
    fn ratio(n: i128, d: i128) -> Num {
        let g = gcd_u128(n.unsigned_abs(), d.unsigned_abs()) as i128;
        let (mut n, mut d) = (n / g, d / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        match (fits(n), fits(d)) {
            (Some(n), Some(d)) => Num::Small(n, d),
            _ => Num::Big(Q::new(BigInt::from(n), BigInt::from(d))),
        }
    }

    fn from_big(q: Q) -> Num {
        match (q.numer().to_i64(), q.denom().to_i64()) {
            (Some(n), Some(d)) if n != i64::MIN && d != i64::MIN => Num::Small(n, d),
            _ => Num::Big(q),
        }
    }

    pub fn from_q(q: &Q) -> Num {
        Num::from_big(q.clone())
    }

    pub fn to_q(&self) -> Q {
        match self {
            Num::Small(n, d) => Q::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Num::Big(q) => q.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Num::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Num::Small(1, 1))
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Num::Small(n, _) => *n > 0,
            Num::Big(q) => q.is_positive(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Num::Small(n, _) => *n < 0,
            Num::Big(q) => q.is_negative(),
        }
    }

    pub fn neg(&self) -> Num {
        match self {
            Num::Small(n, d) => Num::Small(-n, *d),
            Num::Big(q) => Num::from_big(-q.clone()),
        }
    }

    pub fn recip(&self) -> Num {
        match self {
            Num::Small(n, d) => Num::ratio(*d as i128, *n as i128),
            Num::Big(q) => Num::from_big(q.recip()),
        }
    }

    pub fn mul(&self, o: &Num) -> Num {
        match (self, o) {
            (Num::Small(a, b), Num::Small(c, d)) => {
                if *a == 0 || *c == 0 {
                    return Num::ZERO;
                }
                // cross-cancel so the products are already reduced
                let g1 = a.unsigned_abs().gcd(&d.unsigned_abs()) as i64;
                let g2 = c.unsigned_abs().gcd(&b.unsigned_abs()) as i64;
                let n = (a / g1) as i128 * (c / g2) as i128;
                let den = (b / g2) as i128 * (d / g1) as i128;
                match (fits(n), fits(den)) {
                    (Some(n), Some(den)) => Num::Small(n, den),
                    _ => Num::Big(Q::new_raw(BigInt::from(n), BigInt::from(den))),
                }
            }
            _ => Num::from_big(self.to_q() * o.to_q()),
        }
    }

    pub fn div(&self, o: &Num) -> Num {
        self.mul(&o.recip())
    }

    pub fn add(&self, o: &Num) -> Num {
        match (self, o) {
            (Num::Small(0, _), _) => o.clone(),
            (_, Num::Small(0, _)) => self.clone(),
            (Num::Small(a, b), Num::Small(c, d)) => {
                if b == d {
                    return Num::ratio(*a as i128 + *c as i128, *b as i128);
                }
                let n = *a as i128 * *d as i128 + *c as i128 * *b as i128;
                Num::ratio(n, *b as i128 * *d as i128)
            }
            _ => Num::from_big(self.to_q() + o.to_q()),
        }
    }

    pub fn sub(&self, o: &Num) -> Num {
        self.add(&o.neg())
    }

    /// `self -= f * v`.
    pub fn sub_mul(&mut self, f: &Num, v: &Num) {
        if f.is_zero() || v.is_zero() {
            return;
        }
        *self = self.sub(&f.mul(v));
    }
}

impl PartialEq for Num {
    fn eq(&self, o: &Num) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}

impl Eq for Num {}

impl PartialOrd for Num {
    fn partial_cmp(&self, o: &Num) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Num {
    fn cmp(&self, o: &Num) -> Ordering {
        match (self, o) {
            (Num::Small(a, b), Num::Small(c, d)) => (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128)),
            _ => self.to_q().cmp(&o.to_q()),
        }
    }
}

impl From<&Q> for Num {
    fn from(q: &Q) -> Num {
        Num::from_q(q)
    }
}

impl Default for Num {
    fn default() -> Num {
        Num::ZERO
    }
}
