//! Exact Gaussian-rational coefficients `p + q·i` with `p, q ∈ ℚ`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coeff {
    pub re: Rational64,
    pub im: Rational64,
}

impl Coeff {
    pub const fn new(re: Rational64, im: Rational64) -> Self {
        Coeff { re, im }
    }

    pub fn int(n: i64) -> Self {
        Coeff::new(Rational64::from_integer(n), Rational64::zero())
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        Coeff::new(Rational64::new(p, q), Rational64::zero())
    }

    /// The imaginary unit `√−1`.
    pub fn i() -> Self {
        Coeff::new(Rational64::zero(), Rational64::one())
    }

    pub fn zero() -> Self {
        Coeff::int(0)
    }

    pub fn one() -> Self {
        Coeff::int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(self) -> Self {
        Coeff::new(self.re, -self.im)
    }

    pub fn inv(self) -> Option<Self> {
        let n = self.re * self.re + self.im * self.im;
        if n.is_zero() {
            return None;
        }
        Some(Coeff::new(self.re / n, -self.im / n))
    }
}

impl Add for Coeff {
    type Output = Coeff;
    fn add(self, o: Coeff) -> Coeff {
        Coeff::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for Coeff {
    type Output = Coeff;
    fn sub(self, o: Coeff) -> Coeff {
        Coeff::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for Coeff {
    type Output = Coeff;
    fn mul(self, o: Coeff) -> Coeff {
        Coeff::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
}

impl Neg for Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        Coeff::new(-self.re, -self.im)
    }
}

fn fmt_rat(r: &Rational64) -> String {
    if r.is_integer() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Coeff {
    /// `3`, `-1/2`, `2i`, `-1/2i` or `(1+2i)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rat(&self.re)),
            (true, false) => write!(f, "{}i", fmt_rat(&self.im)),
            (false, false) => {
                let sign = if self.im.is_negative() { "-" } else { "+" };
                write!(f, "({}{}{}i)", fmt_rat(&self.re), sign, fmt_rat(&self.im.abs()))
            }
        }
    }
}

fn parse_rat(s: &str) -> Option<Rational64> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.parse().ok()?;
        let q: i64 = q.parse().ok()?;
        if q == 0 {
            return None;
        }
        Some(Rational64::new(p, q))
    } else {
        s.parse::<i64>().ok().map(Rational64::from_integer)
    }
}

impl std::str::FromStr for Coeff {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("bad coefficient `{s}`");
        let t = s.trim();
        if let Some(inner) = t.strip_prefix('(').and_then(|x| x.strip_suffix("i)")) {
            // split at the sign that separates the real and imaginary parts
            let pos = inner[1..]
                .rfind(['+', '-'])
                .map(|p| p + 1)
                .ok_or_else(bad)?;
            let re = parse_rat(&inner[..pos]).ok_or_else(bad)?;
            let im = parse_rat(&inner[pos..]).ok_or_else(bad)?;
            return Ok(Coeff::new(re, im));
        }
        if let Some(im) = t.strip_suffix('i') {
            return parse_rat(im)
                .map(|im| Coeff::new(Rational64::zero(), im))
                .ok_or_else(bad);
        }
        parse_rat(t)
            .map(|re| Coeff::new(re, Rational64::zero()))
            .ok_or_else(bad)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i_squared_is_minus_one() {
        assert_eq!(Coeff::i() * Coeff::i(), Coeff::int(-1));
    }

    #[test]
    fn display_parse_round_trip() {
        for c in [
            Coeff::int(3),
            Coeff::ratio(-1, 2),
            Coeff::i(),
            Coeff::new(Rational64::new(1, 3), Rational64::new(-5, 2)),
            Coeff::new(Rational64::zero(), Rational64::new(-1, 2)),
        ] {
            let s = c.to_string();
            assert_eq!(s.parse::<Coeff>().unwrap(), c, "{s}");
        }
    }

    #[test]
    fn inverse() {
        let c = Coeff::new(Rational64::new(1, 2), Rational64::from_integer(2));
        assert_eq!(c * c.inv().unwrap(), Coeff::one());
        assert!(Coeff::zero().inv().is_none());
    }
}
