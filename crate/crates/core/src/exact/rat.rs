//! Arbitrary-precision rationals and conversions to and from text and `f64`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Exact rational scalar. Always stored in lowest terms with a positive denominator.
pub type Rat = BigRational;

/// Dense exact vector.
pub type RatVector = Vec<Rat>;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_vec(xs: &[i64]) -> RatVector {
    xs.iter().map(|&x| rat(x)).collect()
}

/// Parse `"p/q"`, `"p"` or a plain decimal such as `"-0.125"`.
pub fn parse_rat(s: &str) -> Result<Rat, Error> {
    let t = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((int, fracpart)) = t.split_once('.') {
        let neg = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        if fracpart.is_empty() && int_digits.is_empty() {
            return Err(bad());
        }
        if !fracpart.chars().all(|c| c.is_ascii_digit())
            || !int_digits.chars().all(|c| c.is_ascii_digit())
        {
            return Err(bad());
        }
        let digits = format!("{int_digits}{fracpart}");
        let mut n: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| bad())? };
        if neg {
            n = -n;
        }
        let d = num_traits::pow(BigInt::from(10), fracpart.len());
        return Ok(Rat::new(n, d));
    }
    let n: BigInt = t.parse().map_err(|_| bad())?;
    Ok(Rat::from_integer(n))
}

/// `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rat(x: &Rat) -> String {
    x.to_string()
}

pub fn to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Ratio::to_f64 only fails on overflow of both parts; fall back to a scaled quotient.
        let shift = x.numer().bits().max(x.denom().bits()).saturating_sub(1000);
        let n = (x.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (x.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Best rational approximation of `x` with denominator at most `max_den`.
///
/// Works on the exact binary value of `x`, walking its continued fraction and
/// choosing between the last admissible convergent and the largest admissible
/// semiconvergent. Returns `None` for non-finite input.
pub fn rationalize(x: f64, max_den: u64) -> Option<Rat> {
    assert!(max_den >= 1, "max_den must be positive");
    let target = Rat::from_float(x)?;
    let max_den = BigInt::from(max_den);

    // (h, k) pairs for convergents i-2 and i-1.
    let (mut h2, mut k2) = (BigInt::zero(), BigInt::one());
    let (mut h1, mut k1) = (BigInt::one(), BigInt::zero());
    let mut rem = target.clone();
    loop {
        let a = rem.floor().to_integer();
        let h = &a * &h1 + &h2;
        let k = &a * &k1 + &k2;
        if k > max_den {
            let n = (&max_den - &k2).div_floor(&k1);
            let semi = Rat::new(&n * &h1 + &h2, &n * &k1 + &k2);
            let conv = Rat::new(h1, k1);
            let ds = (&semi - &target).abs();
            let dc = (&conv - &target).abs();
            return Some(if ds < dc { semi } else { conv });
        }
        let frac_part = &rem - Rat::from_integer(a);
        if frac_part.is_zero() {
            return Some(Rat::new(h, k));
        }
        rem = frac_part.recip();
        h2 = std::mem::replace(&mut h1, h);
        k2 = std::mem::replace(&mut k1, k);
    }
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Scale a rational vector by a positive factor so that it becomes a primitive
/// integer vector. The direction is preserved.
pub fn primitive_integer(v: &[Rat]) -> Vec<BigInt> {
    let l = common_denominator(v);
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rat::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g.is_one() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

pub fn is_zero_vec(v: &[Rat]) -> bool {
    v.iter().all(Zero::is_zero)
}
