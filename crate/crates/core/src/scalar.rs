//! Exact scalars.
//!
//! Every matrix entry lives in one of three exact domains: arbitrary-precision
//! integers, reduced rationals, or the prime field `GF(p)` with `p < 2^64`.
//! Arithmetic never mixes domains; combining scalars from two different
//! domains yields [`ScalarError::DomainMismatch`].

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("domain mismatch: {left} vs {right}")]
    DomainMismatch { left: RingDomain, right: RingDomain },
    #[error("division by zero")]
    DivisionByZero,
    #[error("inexact integer division: {dividend} / {divisor}")]
    InexactDivision { dividend: BigInt, divisor: BigInt },
    #[error("{0} is not a prime modulus")]
    NotPrime(u64),
    #[error("cannot parse scalar {text:?}: {reason}")]
    Parse { text: String, reason: String },
}

/// A modulus that passed the primality check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self, ScalarError> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(ScalarError::NotPrime(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

/// Deterministic Miller-Rabin; the first twelve prime bases are exact below 2^64.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// The ring a matrix is defined over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RingDomain {
    Integers,
    Rationals,
    PrimeField(Prime),
}

impl RingDomain {
    pub fn prime_field(p: u64) -> Result<Self, ScalarError> {
        Prime::new(p).map(RingDomain::PrimeField)
    }

    /// True when every nonzero element is invertible.
    pub fn is_field(self) -> bool {
        !matches!(self, RingDomain::Integers)
    }
}

impl fmt::Display for RingDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingDomain::Integers => f.write_str("integers"),
            RingDomain::Rationals => f.write_str("rationals"),
            RingDomain::PrimeField(p) => write!(f, "fp {}", p.0),
        }
    }
}

/// Accepts `integers`, `rationals`, `fp <p>`, `fp:<p>` and `gf<p>`.
impl FromStr for RingDomain {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = |reason: &str| ScalarError::Parse {
            text: s.to_string(),
            reason: reason.to_string(),
        };
        match s {
            "integers" | "int" | "z" => return Ok(RingDomain::Integers),
            "rationals" | "rat" | "q" => return Ok(RingDomain::Rationals),
            _ => {}
        }
        let modulus = s
            .strip_prefix("fp")
            .or_else(|| s.strip_prefix("gf"))
            .map(|rest| rest.trim_start_matches([':', ' ']))
            .ok_or_else(|| bad("unknown domain"))?;
        let p: u64 = modulus.parse().map_err(|_| bad("bad modulus"))?;
        RingDomain::prime_field(p)
    }
}

/// An element of `GF(p)`, always reduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    residue: u64,
    modulus: Prime,
}

impl Fp {
    pub fn new(value: u64, modulus: Prime) -> Self {
        Fp {
            residue: value % modulus.0,
            modulus,
        }
    }

    pub fn from_bigint(value: &BigInt, modulus: Prime) -> Self {
        let r = value.mod_floor(&BigInt::from(modulus.0));
        Fp {
            residue: r.to_u64().expect("residue fits below modulus"),
            modulus,
        }
    }

    pub fn residue(self) -> u64 {
        self.residue
    }

    pub fn modulus(self) -> Prime {
        self.modulus
    }

    fn inverse(self) -> Option<Fp> {
        if self.residue == 0 {
            return None;
        }
        let p = self.modulus.0;
        Some(Fp::new(pow_mod(self.residue, p - 2, p), self.modulus))
    }
}

/// An exact ring element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Int(BigInt),
    /// Always in lowest terms with a positive denominator.
    Rat(BigRational),
    Fp(Fp),
}

impl Scalar {
    pub fn zero(domain: RingDomain) -> Self {
        Self::from_i64(domain, 0)
    }

    pub fn one(domain: RingDomain) -> Self {
        Self::from_i64(domain, 1)
    }

    pub fn from_i64(domain: RingDomain, value: i64) -> Self {
        Self::from_bigint(domain, &BigInt::from(value))
    }

    pub fn from_bigint(domain: RingDomain, value: &BigInt) -> Self {
        match domain {
            RingDomain::Integers => Scalar::Int(value.clone()),
            RingDomain::Rationals => Scalar::Rat(BigRational::from_integer(value.clone())),
            RingDomain::PrimeField(p) => Scalar::Fp(Fp::from_bigint(value, p)),
        }
    }

    /// Builds the reduced fraction `num/den`.
    pub fn rational(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self, ScalarError> {
        let den = den.into();
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Scalar::Rat(BigRational::new(num.into(), den)))
    }

    pub fn fp(value: u64, p: u64) -> Result<Self, ScalarError> {
        Ok(Scalar::Fp(Fp::new(value, Prime::new(p)?)))
    }

    pub fn domain(&self) -> RingDomain {
        match self {
            Scalar::Int(_) => RingDomain::Integers,
            Scalar::Rat(_) => RingDomain::Rationals,
            Scalar::Fp(x) => RingDomain::PrimeField(x.modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Int(x) => x.is_zero(),
            Scalar::Rat(x) => x.is_zero(),
            Scalar::Fp(x) => x.residue == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Int(x) => x.is_one(),
            Scalar::Rat(x) => x.is_one(),
            Scalar::Fp(x) => x.residue == 1,
        }
    }

    fn mismatch(&self, other: &Scalar) -> ScalarError {
        ScalarError::DomainMismatch {
            left: self.domain(),
            right: other.domain(),
        }
    }

    pub fn add(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        match (self, other) {
            (Scalar::Int(a), Scalar::Int(b)) => Ok(Scalar::Int(a + b)),
            (Scalar::Rat(a), Scalar::Rat(b)) => Ok(Scalar::Rat(a + b)),
            (Scalar::Fp(a), Scalar::Fp(b)) if a.modulus == b.modulus => {
                let p = a.modulus.0;
                let s = (a.residue as u128 + b.residue as u128) % p as u128;
                Ok(Scalar::Fp(Fp::new(s as u64, a.modulus)))
            }
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Int(a) => Scalar::Int(-a),
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Fp(a) => {
                let p = a.modulus.0;
                Scalar::Fp(Fp::new((p - a.residue) % p, a.modulus))
            }
        }
    }

    pub fn sub(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        match (self, other) {
            (Scalar::Int(a), Scalar::Int(b)) => Ok(Scalar::Int(a - b)),
            (Scalar::Rat(a), Scalar::Rat(b)) => Ok(Scalar::Rat(a - b)),
            _ => self.add(&other.neg()),
        }
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        match (self, other) {
            (Scalar::Int(a), Scalar::Int(b)) => Ok(Scalar::Int(a * b)),
            (Scalar::Rat(a), Scalar::Rat(b)) => Ok(Scalar::Rat(a * b)),
            (Scalar::Fp(a), Scalar::Fp(b)) if a.modulus == b.modulus => Ok(Scalar::Fp(Fp::new(
                mul_mod(a.residue, b.residue, a.modulus.0),
                a.modulus,
            ))),
            _ => Err(self.mismatch(other)),
        }
    }

    /// Exact quotient. Over the integers a nonzero remainder is an error
    /// rather than a promotion to the rationals.
    pub fn div_exact(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        if self.domain() != other.domain() {
            return Err(self.mismatch(other));
        }
        if other.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        match (self, other) {
            (Scalar::Int(a), Scalar::Int(b)) => {
                let (q, r) = a.div_rem(b);
                if r.is_zero() {
                    Ok(Scalar::Int(q))
                } else {
                    Err(ScalarError::InexactDivision {
                        dividend: a.clone(),
                        divisor: b.clone(),
                    })
                }
            }
            (Scalar::Rat(a), Scalar::Rat(b)) => Ok(Scalar::Rat(a / b)),
            (Scalar::Fp(a), Scalar::Fp(b)) => {
                let inv = b.inverse().ok_or(ScalarError::DivisionByZero)?;
                Ok(Scalar::Fp(Fp::new(mul_mod(a.residue, inv.residue, a.modulus.0), a.modulus)))
            }
            _ => unreachable!("domains checked above"),
        }
    }

    /// `self * b - c * d`, the shape of every 2x2 determinant in this crate.
    pub fn cross(&self, b: &Scalar, c: &Scalar, d: &Scalar) -> Result<Scalar, ScalarError> {
        self.mul(b)?.sub(&c.mul(d)?)
    }

    /// Parses `text` as an element of `domain`.
    ///
    /// Integers parse into any domain; `p/q` parses into the rationals, and
    /// into a prime field when `q` is invertible there; `r mod p` only into
    /// `GF(p)`.
    pub fn parse(text: &str, domain: RingDomain) -> Result<Scalar, ScalarError> {
        let parsed: Scalar = text.parse()?;
        match (parsed, domain) {
            (s, d) if s.domain() == d => Ok(s),
            (Scalar::Int(v), d) => Ok(Scalar::from_bigint(d, &v)),
            (Scalar::Rat(v), RingDomain::PrimeField(p)) => {
                let num = Scalar::Fp(Fp::from_bigint(v.numer(), p));
                let den = Scalar::Fp(Fp::from_bigint(v.denom(), p));
                num.div_exact(&den).map_err(|_| ScalarError::Parse {
                    text: text.to_string(),
                    reason: format!("denominator vanishes mod {}", p.0),
                })
            }
            (s, d) => Err(ScalarError::Parse {
                text: text.to_string(),
                reason: format!("{} value is not an element of {}", s.domain(), d),
            }),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Int(x) => write!(f, "{x}"),
            Scalar::Rat(x) if x.denom().is_one() => write!(f, "{}", x.numer()),
            Scalar::Rat(x) => write!(f, "{}/{}", x.numer(), x.denom()),
            Scalar::Fp(x) => write!(f, "{} mod {}", x.residue, x.modulus.0),
        }
    }
}

/// Infers the domain from the text: `r mod p`, `p/q`, or a plain integer.
impl FromStr for Scalar {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let text = s.trim();
        let bad = |reason: &str| ScalarError::Parse {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let int = |t: &str| -> Result<BigInt, ScalarError> {
            let t = t.trim();
            let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad("expected an optionally signed decimal integer"));
            }
            t.parse::<BigInt>().map_err(|_| bad("expected an integer"))
        };
        if let Some((r, p)) = text.split_once(" mod ") {
            let p = int(p)?;
            let p = p.to_u64().ok_or_else(|| bad("modulus out of range"))?;
            let prime = Prime::new(p)?;
            let r = int(r)?;
            if r.is_negative() || r >= BigInt::from(p) {
                return Err(bad("residue must lie in [0, p)"));
            }
            return Ok(Scalar::Fp(Fp::from_bigint(&r, prime)));
        }
        if let Some((num, den)) = text.split_once('/') {
            let den = int(den)?;
            if den.is_zero() {
                return Err(bad("zero denominator"));
            }
            return Ok(Scalar::Rat(BigRational::new(int(num)?, den)));
        }
        int(text).map(Scalar::Int)
    }
}
