use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

/// Exact rational.
pub type Q = Ratio<i128>;

/// Exact complex rational `re + i·im`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CQ {
    pub re: Q,
    pub im: Q,
}

impl CQ {
    pub fn new(re: Q, im: Q) -> Self {
        Self { re, im }
    }

    pub fn real(re: Q) -> Self {
        Self { re, im: Q::zero() }
    }

    pub fn int(n: i128) -> Self {
        Self::real(Q::from_integer(n))
    }

    pub fn frac(n: i128, d: i128) -> Self {
        Self::real(Q::new(n, d))
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn i() -> Self {
        Self::new(Q::zero(), Q::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(self) -> Self {
        Self::new(self.re, -self.im)
    }

    pub fn scale(self, q: Q) -> Self {
        Self::new(self.re * q, self.im * q)
    }

    /// (self)^n for n ≥ 0.
    pub fn pow(self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| acc * self)
    }

    pub fn to_f64(self) -> (f64, f64) {
        let f = |q: Q| *q.numer() as f64 / *q.denom() as f64;
        (f(self.re), f(self.im))
    }
}

impl Add for CQ {
    type Output = CQ;
    fn add(self, o: CQ) -> CQ {
        CQ::new(self.re + o.re, self.im + o.im)
    }
}

impl AddAssign for CQ {
    fn add_assign(&mut self, o: CQ) {
        *self = *self + o;
    }
}

impl Sub for CQ {
    type Output = CQ;
    fn sub(self, o: CQ) -> CQ {
        CQ::new(self.re - o.re, self.im - o.im)
    }
}

impl Neg for CQ {
    type Output = CQ;
    fn neg(self) -> CQ {
        CQ::new(-self.re, -self.im)
    }
}

impl Mul for CQ {
    type Output = CQ;
    fn mul(self, o: CQ) -> CQ {
        CQ::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
}

fn fmt_q(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for CQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_q(&self.re)),
            (true, false) => {
                if self.im == Q::one() {
                    write!(f, "i")
                } else if self.im == -Q::one() {
                    write!(f, "-i")
                } else {
                    write!(f, "{}i", fmt_q(&self.im))
                }
            }
            (false, false) => {
                let sign = if self.im.is_negative() { "-" } else { "+" };
                write!(f, "({}{}{}i)", fmt_q(&self.re), sign, fmt_q(&self.im.abs()))
            }
        }
    }
}

/// Generalized binomial coefficient binom(a, n) for rational `a`.
pub fn binomial(a: Q, n: u32) -> Q {
    (0..n).fold(Q::one(), |acc, k| {
        acc * (a - Q::from_integer(k as i128)) / Q::from_integer(k as i128 + 1)
    })
}
