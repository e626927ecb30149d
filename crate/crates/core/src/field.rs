//! Exact scalars over prime fields `GF(p)` and the rationals.
//!
//! A [`FieldSpec`] is a small `Copy` tag; every [`Scalar`] carries its field so
//! that mixing elements of different fields is caught at the operation rather
//! than silently producing garbage. Residues are kept in `[0, p)` and fractions
//! are kept fully reduced with a positive denominator, so structural equality
//! coincides with equality of field elements.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

/// Largest modulus accepted for prime fields (exclusive).
pub const MAX_MODULUS: u64 = 1 << 31;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is not below 2^31")]
    UnsupportedModulus(u64),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse {0:?}")]
    Parse(String),
}

/// Field descriptor as requested by a caller, before validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    PrimeField(u64),
    Rationals,
}

/// A validated field: `GF(p)` for a prime `p < 2^31`, or `Q`.
///
/// Internally the modulus `0` stands for the rationals, which makes the
/// characteristic a plain field read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldSpec {
    modulus: u32,
}

pub fn make_field(kind: FieldKind) -> Result<FieldSpec, FieldError> {
    match kind {
        FieldKind::Rationals => Ok(FieldSpec::rationals()),
        FieldKind::PrimeField(p) => FieldSpec::prime(p),
    }
}

impl FieldSpec {
    pub const fn rationals() -> Self {
        FieldSpec { modulus: 0 }
    }

    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if p >= MAX_MODULUS {
            return Err(FieldError::UnsupportedModulus(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(FieldSpec { modulus: p as u32 })
    }

    pub fn kind(&self) -> FieldKind {
        match self.modulus {
            0 => FieldKind::Rationals,
            p => FieldKind::PrimeField(u64::from(p)),
        }
    }

    /// `p` for `GF(p)`, `0` for `Q`.
    pub fn characteristic(&self) -> u64 {
        u64::from(self.modulus)
    }

    pub fn modulus(&self) -> Option<u32> {
        (self.modulus != 0).then_some(self.modulus)
    }

    pub fn is_rationals(&self) -> bool {
        self.modulus == 0
    }

    /// Number of elements, `None` when infinite.
    pub fn order(&self) -> Option<u64> {
        self.modulus().map(u64::from)
    }

    /// Whether the characteristic divides `k` (characteristic 0 divides only 0).
    pub fn char_divides(&self, k: u64) -> bool {
        match self.modulus {
            0 => k == 0,
            p => k.is_multiple_of(u64::from(p)),
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        let value = match self.modulus {
            0 => Value::Fraction(BigRational::from_integer(BigInt::from(v))),
            p => Value::Residue(v.rem_euclid(i64::from(p)) as u32),
        };
        Scalar { field: *self, value }
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        let value = match self.modulus {
            0 => Value::Fraction(BigRational::from_integer(v.clone())),
            p => Value::Residue(reduce_bigint(v, p)),
        };
        Scalar { field: *self, value }
    }

    /// `num / den` in this field.
    pub fn from_fraction(&self, num: &BigInt, den: &BigInt) -> Result<Scalar, FieldError> {
        match self.modulus {
            0 => {
                if den.is_zero() {
                    return Err(FieldError::DivisionByZero);
                }
                Ok(Scalar {
                    field: *self,
                    value: Value::Fraction(BigRational::new(num.clone(), den.clone())),
                })
            }
            _ => self.from_bigint(num).div(&self.from_bigint(den)),
        }
    }

    /// The element with residue `r`; `r` must already lie in `[0, p)`.
    pub(crate) fn residue_unchecked(&self, r: u32) -> Scalar {
        debug_assert!(self.modulus != 0 && r < self.modulus);
        Scalar {
            field: *self,
            value: Value::Residue(r),
        }
    }

    pub(crate) fn fraction_unchecked(&self, q: BigRational) -> Scalar {
        debug_assert!(self.modulus == 0);
        Scalar {
            field: *self,
            value: Value::Fraction(q),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.modulus {
            0 => write!(f, "Q"),
            p => write!(f, "GF({p})"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = FieldError;

    /// Grammar: `Q` | `GF(<p>)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t == "Q" {
            return Ok(FieldSpec::rationals());
        }
        let inner = t
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| FieldError::Parse(s.to_string()))?;
        let p: u64 = inner
            .trim()
            .parse()
            .map_err(|_| FieldError::Parse(s.to_string()))?;
        FieldSpec::prime(p)
    }
}

impl serde::Serialize for FieldSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Value {
    Residue(u32),
    Fraction(BigRational),
}

/// An element of a [`FieldSpec`] in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    field: FieldSpec,
    value: Value,
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn residue(&self) -> Option<u32> {
        match self.value {
            Value::Residue(r) => Some(r),
            Value::Fraction(_) => None,
        }
    }

    pub fn as_ratio(&self) -> Option<&BigRational> {
        match &self.value {
            Value::Fraction(q) => Some(q),
            Value::Residue(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.value {
            Value::Residue(r) => *r == 0,
            Value::Fraction(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.value {
            Value::Residue(r) => *r == 1,
            Value::Fraction(q) => q.is_one(),
        }
    }

    fn check(&self, other: &Scalar) -> Result<(), FieldError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch(self.field, other.field))
        }
    }

    pub fn add(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.check(other)?;
        Ok(self.add_same(other))
    }

    pub fn sub(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.check(other)?;
        Ok(self.add_same(&other.neg()))
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.check(other)?;
        Ok(self.mul_same(other))
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.check(other)?;
        Ok(self.mul_same(&other.inv()?))
    }

    pub fn neg(&self) -> Scalar {
        let value = match &self.value {
            Value::Residue(0) => Value::Residue(0),
            Value::Residue(r) => Value::Residue(self.field.modulus - r),
            Value::Fraction(q) => Value::Fraction(-q),
        };
        Scalar {
            field: self.field,
            value,
        }
    }

    pub fn inv(&self) -> Result<Scalar, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let value = match &self.value {
            Value::Residue(r) => Value::Residue(inv_mod(*r, self.field.modulus)),
            Value::Fraction(q) => Value::Fraction(q.recip()),
        };
        Ok(Scalar {
            field: self.field,
            value,
        })
    }

    /// `k · self` for an integer `k`.
    pub fn scale(&self, k: i64) -> Scalar {
        self.mul_same(&self.field.from_i64(k))
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_same(&base);
            }
            base = base.mul_same(&base);
            e >>= 1;
        }
        acc
    }

    /// Same-field addition; callers guarantee the fields agree.
    pub(crate) fn add_same(&self, other: &Scalar) -> Scalar {
        debug_assert_eq!(self.field, other.field);
        let value = match (&self.value, &other.value) {
            (Value::Residue(a), Value::Residue(b)) => {
                let p = u64::from(self.field.modulus);
                Value::Residue(((u64::from(*a) + u64::from(*b)) % p) as u32)
            }
            (Value::Fraction(a), Value::Fraction(b)) => Value::Fraction(a + b),
            _ => unreachable!("scalar field tag and value disagree"),
        };
        Scalar {
            field: self.field,
            value,
        }
    }

    pub(crate) fn mul_same(&self, other: &Scalar) -> Scalar {
        debug_assert_eq!(self.field, other.field);
        let value = match (&self.value, &other.value) {
            (Value::Residue(a), Value::Residue(b)) => {
                let p = u64::from(self.field.modulus);
                Value::Residue((u64::from(*a) * u64::from(*b) % p) as u32)
            }
            (Value::Fraction(a), Value::Fraction(b)) => Value::Fraction(a * b),
            _ => unreachable!("scalar field tag and value disagree"),
        };
        Scalar {
            field: self.field,
            value,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_scalar(self))
    }
}

/// Canonical text: the residue for `GF(p)`, `num` or `num/den` for `Q`.
pub fn format_scalar(x: &Scalar) -> String {
    match &x.value {
        Value::Residue(r) => r.to_string(),
        Value::Fraction(q) if q.is_integer() => q.numer().to_string(),
        Value::Fraction(q) => format!("{}/{}", q.numer(), q.denom()),
    }
}

/// Parses `<int>` or `<int>/<int>`. Integers are reduced mod `p` in prime
/// fields; a fraction there means `num · den⁻¹`. Both `-` and `−` are accepted
/// as the minus sign.
pub fn parse_scalar(field: FieldSpec, text: &str) -> Result<Scalar, FieldError> {
    let cleaned = text.trim().replace('\u{2212}', "-");
    let parse_int = |s: &str| -> Result<BigInt, FieldError> {
        let s = s.trim();
        let s = s.strip_prefix('+').unwrap_or(s);
        if s.is_empty() || !s.trim_start_matches('-').chars().all(|c| c.is_ascii_digit()) {
            return Err(FieldError::Parse(text.to_string()));
        }
        BigInt::from_str(s).map_err(|_| FieldError::Parse(text.to_string()))
    };
    match cleaned.split_once('/') {
        None => Ok(field.from_bigint(&parse_int(&cleaned)?)),
        Some((n, d)) => {
            let num = parse_int(n)?;
            let den = parse_int(d)?;
            field.from_fraction(&num, &den)
        }
    }
}

fn reduce_bigint(v: &BigInt, p: u32) -> u32 {
    let r = v.mod_floor(&BigInt::from(p));
    r.to_u32().expect("residue below modulus")
}

/// Inverse of a nonzero residue by the extended Euclidean algorithm.
pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    let (mut old_r, mut r) = (i64::from(a), i64::from(p));
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1, "{a} not invertible mod {p}");
    old_s.rem_euclid(i64::from(p)) as u32
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin, exact for all `n < 3_215_031_751`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13] {
        if n == small {
            return true;
        }
        if n.is_multiple_of(small) {
            return false;
        }
    }
    assert!(n < 3_215_031_751, "primality test range exceeded");
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = x * x % n;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Whether the integer `v` is nonzero and a square mod the odd prime `q`.
pub fn is_quadratic_residue(v: u64, q: u64) -> bool {
    let v = v % q;
    v != 0 && pow_mod(v, (q - 1) / 2, q) == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    #[test]
    fn make_field_examples() {
        assert_eq!(make_field(FieldKind::PrimeField(7)).unwrap().characteristic(), 7);
        assert_eq!(
            make_field(FieldKind::PrimeField(9)),
            Err(FieldError::NotPrime(9))
        );
        assert_eq!(make_field(FieldKind::Rationals).unwrap().characteristic(), 0);
        assert_eq!(FieldSpec::prime(1), Err(FieldError::NotPrime(1)));
        assert_eq!(
            FieldSpec::prime(1 << 31),
            Err(FieldError::UnsupportedModulus(1 << 31))
        );
        assert!(FieldSpec::prime(2_147_483_647).is_ok());
    }

    #[test]
    fn primality_matches_trial_division() {
        let naive = |n: u64| n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d));
        for n in 0..20_000u64 {
            assert_eq!(is_prime(n), naive(n), "{n}");
        }
        for n in [2_147_483_629u64, 2_147_483_647, 1_000_000_007] {
            assert!(is_prime(n));
        }
        assert!(!is_prime(2_147_483_649));
        assert!(!is_prime(65_537 * 32_749));
    }

    #[test]
    fn inverse_in_gf7() {
        let f = gf(7);
        // exhaustive scan for the unique y with 3y = 1
        let expected = (1..7).find(|y| (3 * y) % 7 == 1).unwrap();
        assert_eq!(expected, 5);
        assert_eq!(f.from_i64(3).inv().unwrap(), f.from_i64(5));
    }

    #[test]
    fn inverses_exhaustive_small_primes() {
        for p in [2u64, 3, 5, 7, 13] {
            let f = gf(p);
            for x in 1..p as i64 {
                let x = f.from_i64(x);
                assert!(x.inv().unwrap().mul(&x).unwrap().is_one());
            }
            assert_eq!(f.zero().inv(), Err(FieldError::DivisionByZero));
        }
    }

    #[test]
    fn rational_arithmetic() {
        let q = FieldSpec::rationals();
        let half = parse_scalar(q, "1/2").unwrap();
        let third = parse_scalar(q, "1/3").unwrap();
        assert_eq!(format_scalar(&half.add(&third).unwrap()), "5/6");
        assert!(half.mul(&q.zero()).unwrap().is_zero());
        assert!(gf(5).from_i64(4).mul(&gf(5).zero()).unwrap().is_zero());
        assert_eq!(q.zero().inv(), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn mismatched_fields_are_rejected() {
        let a = gf(5).one();
        let b = gf(7).one();
        assert_eq!(a.add(&b), Err(FieldError::FieldMismatch(gf(5), gf(7))));
        assert!(a.mul(&FieldSpec::rationals().one()).is_err());
    }

    #[test]
    fn parse_examples() {
        assert_eq!(parse_scalar(gf(5), "−3").unwrap(), gf(5).from_i64(2));
        assert_eq!(parse_scalar(gf(5), "-3").unwrap(), gf(5).from_i64(2));
        assert_eq!(
            format_scalar(&parse_scalar(FieldSpec::rationals(), "6/4").unwrap()),
            "3/2"
        );
        assert_eq!(
            parse_scalar(FieldSpec::rationals(), "1/0"),
            Err(FieldError::DivisionByZero)
        );
        assert_eq!(parse_scalar(gf(5), "1/5"), Err(FieldError::DivisionByZero));
        assert_eq!(parse_scalar(gf(7), "1/3").unwrap(), gf(7).from_i64(5));
        assert_eq!(
            format_scalar(&parse_scalar(FieldSpec::rationals(), "4/-6").unwrap()),
            "-2/3"
        );
        for bad in ["", "abc", "1/", "/2", "1.5", "--1"] {
            assert!(
                matches!(parse_scalar(FieldSpec::rationals(), bad), Err(FieldError::Parse(_))),
                "{bad:?}"
            );
        }
    }

    #[test]
    fn field_spec_grammar() {
        assert_eq!("Q".parse::<FieldSpec>().unwrap(), FieldSpec::rationals());
        assert_eq!("GF(7)".parse::<FieldSpec>().unwrap(), gf(7));
        assert_eq!("GF(9)".parse::<FieldSpec>(), Err(FieldError::NotPrime(9)));
        assert!("GF7".parse::<FieldSpec>().is_err());
        assert_eq!(gf(13).to_string(), "GF(13)");
        assert_eq!(FieldSpec::rationals().to_string(), "Q");
    }

    #[test]
    fn characteristic_kills_p() {
        for p in [2u64, 3, 5, 7, 13] {
            let f = gf(p);
            assert!(f.one().scale(p as i64).is_zero());
            assert!(f.char_divides(2 * p));
            assert!(!f.char_divides(p + 1));
        }
        let q = FieldSpec::rationals();
        assert!(!q.one().scale(1_000_003).is_zero());
        assert!(q.char_divides(0) && !q.char_divides(3));
    }

    #[test]
    fn quadratic_residues_mod_7() {
        let qr: Vec<u64> = (0..7).filter(|&v| is_quadratic_residue(v, 7)).collect();
        assert_eq!(qr, vec![1, 2, 4]);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn field_strategy() -> impl Strategy<Value = FieldSpec> {
            prop_oneof![
                Just(FieldSpec::rationals()),
                Just(gf(2)),
                Just(gf(3)),
                Just(gf(13)),
                Just(gf(2_147_483_647)),
            ]
        }

        fn scalar_in(f: FieldSpec) -> impl Strategy<Value = Scalar> {
            (-1000i64..1000, 1i64..50).prop_map(move |(n, d)| {
                f.from_fraction(&BigInt::from(n), &BigInt::from(d))
                    .unwrap_or_else(|_| f.from_i64(n))
            })
        }

        fn triple() -> impl Strategy<Value = (Scalar, Scalar, Scalar)> {
            field_strategy().prop_flat_map(|f| (scalar_in(f), scalar_in(f), scalar_in(f)))
        }

        proptest! {
            #[test]
            fn field_axioms((a, b, c) in triple()) {
                prop_assert_eq!(a.add(&b)?, b.add(&a)?);
                prop_assert_eq!(a.mul(&b)?, b.mul(&a)?);
                prop_assert_eq!(a.add(&b)?.add(&c)?, a.add(&b.add(&c)?)?);
                prop_assert_eq!(a.mul(&b)?.mul(&c)?, a.mul(&b.mul(&c)?)?);
                prop_assert_eq!(a.mul(&b.add(&c)?)?, a.mul(&b)?.add(&a.mul(&c)?)?);
                prop_assert!(a.sub(&a)?.is_zero());
                if !a.is_zero() {
                    prop_assert!(a.inv()?.mul(&a)?.is_one());
                }
            }

            #[test]
            fn text_round_trip((a, _, _) in triple()) {
                let s = format_scalar(&a);
                let back = parse_scalar(a.field(), &s)?;
                prop_assert_eq!(&back, &a);
                // canonicalisation is idempotent
                prop_assert_eq!(format_scalar(&back), s);
            }
        }
    }
}
